use std::f64::consts::PI;

use cdsp_core::cdsp::truncation::TruncationWorkspace;
use cdsp_core::cdsp::{
    a7_determinant, closed_form_test, cross_energy_matrix, gram_monomials, gram_pairing, run_oracle, sweep_angle,
    taylor_coefficients, SweepOptions,
};
use cdsp_core::linalg;
use cdsp_core::{parse_measure, Analysis, AnalysisOptions, Complex, CostaraModel, MeasureSpec, SchurIdentification, Verdict};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn model(text: &str) -> CostaraModel {
    CostaraModel::build(&parse_measure(text).unwrap()).unwrap()
}

/// `⟨f, K(·, λ)⟩` from the Taylor coefficients of `K(·, λ)` and the monomial Gram matrix.
fn pair_with_kernel(m: &CostaraModel, f: &[Complex], lam: Complex) -> Complex {
    let terms = 160;
    let k = taylor_coefficients(|z| m.kernel_full(z, lam), terms, 0.92, 4096);
    let gram = gram_monomials(&m.mu, terms);
    gram_pairing(f, &k, &gram)
}

fn eval(f: &[Complex], z: Complex) -> Complex {
    f.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a)
}

#[test]
fn reproducing_property() {
    let f = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, -1.0)];
    let lam = Complex::from_polar(0.35, 1.1);
    for text in ["1;i", "1", "deg:10:w=0.3;deg:200;deg:300:w=5"] {
        let m = model(text);
        let err = (pair_with_kernel(&m, &f, lam) - eval(&f, lam)).norm();
        assert!(err <= 1e-6, "{text}: {err:e}");
    }
}

#[test]
fn ktilde_matches_factorization() {
    let m = model("1;i");
    let (z, lam) = (c(0.3, 0.1), c(0.2, -0.4));
    // O_μ(z) = Π(z − ζ)/(√d q(z)) for support {1, i}
    let o = |x: Complex| (x - 1.0) * (x - c(0.0, 1.0)) / (m.fact.d.sqrt() * m.fact.q.eval(x));
    let expect = o(z) * o(lam).conj() / (1.0 - lam.conj() * z);
    assert!((m.kernel_tilde(z, lam) - expect).norm() < 1e-12);
    assert!(m.o_mu(c(0.0, 0.0)).re > 0.0);
}

#[test]
fn quadrature_improves_with_level() {
    for text in ["1", "1;i", "1;-1"] {
        let mu = parse_measure(text).unwrap();
        let g = gram_monomials(&mu, 7);
        let dev = |level| {
            let e = cross_energy_matrix(&mu, 7, level).unwrap();
            let mut worst: f64 = 0.0;
            for a in 0..7 {
                for b in 0..7 {
                    let delta = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((g[(a, b)] - e[(a, b)] - delta).norm());
                }
            }
            worst
        };
        let (d1, d2, d3) = (dev(1), dev(2), dev(3));
        assert!(d2 <= 5e-3 && d3 <= 1e-3, "{text}: {d2:e} {d3:e}");
        assert!(d1 >= d2 && d2 >= d3, "{text}: {d1:e} {d2:e} {d3:e}");
    }
}

#[test]
fn truncation_stability() {
    for text in ["1", "1;i", "1;-1", "deg:0;deg:120"] {
        let mu = parse_measure(text).unwrap();
        let runs: Vec<Vec<f64>> = [48, 64, 96]
            .iter()
            .map(|&n| run_oracle(&mu, n, 6).unwrap().agler.iter().map(|p| p.1).collect())
            .collect();
        for j in 0..6 {
            for other in [&runs[0], &runs[2]] {
                let d = (other[j] - runs[1][j]).abs();
                assert!(d <= 1e-8 || d <= 0.1 * runs[1][j].abs(), "{text} n={}: {:?}", j + 1, runs);
            }
        }
    }
}

#[test]
fn isometry_degeneration() {
    let mu = parse_measure("deg:0:w=1e-12;deg:90:w=1e-12").unwrap();
    let w = TruncationWorkspace::build(&mu, 32).unwrap();
    let eye = linalg::CMatrix::identity(33, 33);
    assert!(linalg::max_abs(&(&w.gram - eye)) < 1e-10);
    for i in 0..32 {
        for j in 0..32 {
            let shift = if i == j + 1 { 1.0 } else { 0.0 };
            assert!((w.t[(i, j)] - shift).norm() < 1e-10);
        }
    }
    let o = run_oracle(&mu, 32, 4).unwrap();
    assert!(o.two_isometry_defect < 1e-10);
    assert!(o.agler.iter().all(|(_, v)| v.abs() < 1e-10));
}

#[test]
fn hyperexpansivity_examples() {
    let w = TruncationWorkspace::build(&parse_measure("1;i").unwrap(), 64).unwrap();
    assert!(w.hyperexpansivity_max_eig(2).unwrap().abs() < 1e-8);
    assert!(w.hyperexpansivity_max_eig(3).unwrap() <= 1e-6);
    let w = TruncationWorkspace::build(&parse_measure("1").unwrap(), 64).unwrap();
    assert!(w.hyperexpansivity_max_eig(4).unwrap() <= 1e-6);
    assert!(w.hyperexpansivity_max_eig(7).is_err());
}

#[test]
fn scaling_keeps_verdict_at_right_angle() {
    // s_offdiag is real and negative on [0.5, 2]; it crosses zero near t = 0.468.
    let base = parse_measure("1;i").unwrap();
    for j in 0..7 {
        let t = 0.5 * 4f64.powf(j as f64 / 6.0);
        let m = CostaraModel::build(&base.scaled(t).unwrap()).unwrap();
        let v = closed_form_test(&m, &SchurIdentification::build(&m).unwrap());
        assert_eq!(v.verdict, Verdict::NotSubnormal, "t = {t}");
        let s = v.s_offdiag.unwrap();
        assert!(s.re < -0.1 && s.im.abs() < 1e-10, "t = {t}: {s}");
    }
}

#[test]
fn verdict_rotation_invariance() {
    let base = parse_measure("1;i").unwrap();
    let run = |mu: &MeasureSpec| {
        let m = CostaraModel::build(mu).unwrap();
        let id = SchurIdentification::build(&m).unwrap();
        let v = closed_form_test(&m, &id);
        let det = a7_determinant(&m.fact.outer_roots, &id.p_polys).unwrap();
        (v.verdict, v.s_offdiag.unwrap().norm(), det)
    };
    let (v0, s0, d0) = run(&base);
    for phi in [PI / 7.0, PI / 3.0, 1.0] {
        let (v, s, d) = run(&base.rotated(phi).unwrap());
        assert_eq!(v, v0);
        assert!((s - s0).abs() < 1e-8);
        assert!((d - d0).norm() < 1e-8);
    }
}

#[test]
fn sweep_rows_follow_input_order() {
    let thetas: Vec<f64> = vec![170.0, 0.0, 90.0, 180.0, 45.0];
    let rows = sweep_angle(&thetas, &SweepOptions { weights: (1.0, 1.0), trunc: None });
    assert_eq!(rows.iter().map(|r| r.theta).collect::<Vec<_>>(), thetas);
    assert!(rows[1].outcome.is_err());
    assert_eq!(rows[2].outcome.as_ref().unwrap().verdict.verdict, Verdict::NotSubnormal);
    assert_eq!(rows[3].outcome.as_ref().unwrap().verdict.verdict, Verdict::KnownSubnormal);
    let again = sweep_angle(&thetas, &SweepOptions { weights: (1.0, 1.0), trunc: None });
    assert_eq!(rows, again);
}

#[test]
fn analysis_is_deterministic() {
    let mu = parse_measure("deg:15:w=2;deg:140;deg:260:w=0.5").unwrap();
    let a = Analysis::run(&mu, &AnalysisOptions::default()).unwrap();
    let b = Analysis::run(&mu, &AnalysisOptions::default()).unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.ident.a, b.ident.a);
    assert_eq!(a.oracle, b.oracle);
    assert_eq!(a.verdict.verdict, Verdict::Inconclusive);
    assert!(a.a7_det.is_none());
}
