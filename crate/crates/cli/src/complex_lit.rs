//! Complex literals on the command line: `a`, `bi`, `a+bi`, `a-bi`.

use num_complex::Complex64 as Complex;

fn number(s: &str, full: &str) -> Result<f64, String> {
    let v: f64 = match s {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => s.parse().map_err(|_| format!("bad complex literal '{full}'"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("complex literal '{full}' is not finite"))
    }
}

pub fn parse_complex(text: &str) -> Result<Complex, String> {
    let t = text.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(format!("bad complex literal '{text}'"));
    }
    let Some(body) = t.strip_suffix('i') else {
        let re: f64 = t.parse().map_err(|_| format!("bad complex literal '{text}'"))?;
        return if re.is_finite() {
            Ok(Complex::new(re, 0.0))
        } else {
            Err(format!("complex literal '{text}' is not finite"))
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    match split {
        Some(j) => {
            let re_part = &body[..j];
            if re_part.is_empty() {
                return Err(format!("bad complex literal '{text}'"));
            }
            let re: f64 = re_part.parse().map_err(|_| format!("bad complex literal '{text}'"))?;
            if !re.is_finite() {
                return Err(format!("complex literal '{text}' is not finite"));
            }
            Ok(Complex::new(re, number(&body[j..], text)?))
        }
        None => Ok(Complex::new(0.0, number(body, text)?)),
    }
}
