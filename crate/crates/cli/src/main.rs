use std::io;

fn main() {
    let code = cdsp_cli::commands::run_with(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
