use cdsp_core::cpoly::{circle_grid, find_roots, spectral_factorize, ROOT_RESIDUAL_TOL};
use cdsp_core::linalg::{self, CMatrix};
use cdsp_core::{parse_measure, Atom, Complex, ComplexPoly, CostaraModel, MeasureSpec, SchurIdentification};
use proptest::prelude::*;

/// Atoms at least 8° apart with weights in [0.2, 5].
fn measure_strategy(max_atoms: usize) -> impl Strategy<Value = MeasureSpec> {
    (1..=max_atoms)
        .prop_flat_map(|k| {
            (
                0.0..360.0f64,
                proptest::collection::vec(8.0..80.0f64, k),
                proptest::collection::vec(0.2..5.0f64, k),
            )
        })
        .prop_filter_map("wraps around", |(start, gaps, weights)| {
            let mut angles = Vec::new();
            let mut a = start;
            for g in &gaps {
                angles.push(a % 360.0);
                a += g;
            }
            if a - start > 352.0 {
                return None;
            }
            MeasureSpec::from_degrees(&angles, &weights).ok()
        })
}

fn complex_in(r: f64) -> impl Strategy<Value = Complex> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| Complex::from_polar(m, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grammar_round_trip(mu in measure_strategy(8)) {
        let back = parse_measure(&mu.to_grammar()).unwrap();
        prop_assert_eq!(back.len(), mu.len());
        for (a, b) in mu.atoms().iter().zip(back.atoms()) {
            prop_assert!((a.point - b.point).norm() <= 1e-14);
            prop_assert!((a.weight - b.weight).abs() <= 1e-14 * a.weight);
        }
    }

    #[test]
    fn moments_are_hermitian(mu in measure_strategy(8), l in 0i64..20) {
        prop_assert_eq!(mu.moment(-l), mu.moment(l).conj());
        prop_assert!((mu.moment(0).re - mu.total_mass()).abs() < 1e-13);
    }

    #[test]
    fn weight_numerator_positive(mu in measure_strategy(8)) {
        let n = mu.weight_numerator();
        for z in circle_grid(256) {
            prop_assert!(n.eval(z).re > 0.0);
        }
    }

    #[test]
    fn roots_rebuild_monic_polynomial(roots in proptest::collection::vec(complex_in(3.0), 1..=8)) {
        let p = ComplexPoly::from_roots(&roots);
        let found = find_roots(&p, ROOT_RESIDUAL_TOL).unwrap();
        let again = find_roots(&p, ROOT_RESIDUAL_TOL).unwrap();
        prop_assert_eq!(&found, &again);
        let rebuilt = ComplexPoly::from_roots(&found);
        let scale = p.max_coeff_abs();
        for j in 0..=roots.len() {
            prop_assert!((rebuilt.coeff(j) - p.coeff(j)).norm() <= 1e-9 * scale, "coefficient {}", j);
        }
    }

    #[test]
    fn factorization_identity_and_pairing(mu in measure_strategy(4)) {
        let n = mu.weight_numerator();
        let f = spectral_factorize(&n).unwrap();
        let scale = circle_grid(64).map(|z| n.eval(z).norm()).fold(0.0, f64::max);
        for z in circle_grid(64) {
            let q = f.q.eval(z);
            prop_assert!((n.eval(z) - f.d * q.norm_sqr()).norm() <= 1e-9 * scale);
        }
        prop_assert!(f.outer_roots.iter().all(|a| a.norm() > 1.0));
        let mut expect: Vec<Complex> = f.outer_roots.iter().map(|a| 1.0 / a.conj()).collect();
        let mut inner = f.inner_roots.clone();
        let key = |z: &Complex| (z.re, z.im);
        expect.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        inner.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (b, e) in inner.iter().zip(&expect) {
            prop_assert!((b - e).norm() <= 1e-9);
        }
    }

    #[test]
    fn kernel_is_hermitian_and_normalized(mu in measure_strategy(4), z in complex_in(0.9), w in complex_in(0.9)) {
        let m = CostaraModel::build(&mu).unwrap();
        let k = m.kernel_full(z, w);
        prop_assert!((k - m.kernel_full(w, z).conj()).norm() <= 1e-10 * k.norm().max(1.0));
        prop_assert!((m.kernel_full(z, Complex::new(0.0, 0.0)) - 1.0).norm() <= 1e-10);
        prop_assert!(m.kernel_full(z, z).re >= 1.0 - 1e-10);
    }

    #[test]
    fn kernel_matrix_psd(mu in measure_strategy(4), pts in proptest::collection::vec(complex_in(0.9), 6)) {
        let m = CostaraModel::build(&mu).unwrap();
        let k = CMatrix::from_fn(6, 6, |i, j| m.kernel_full(pts[i], pts[j]));
        let trace: f64 = (0..6).map(|i| k[(i, i)].re).sum();
        prop_assert!(linalg::hermitian_defect(&k) <= 1e-10 * trace);
        prop_assert!(linalg::min_eigenvalue(&k) >= -1e-8 * trace);
    }

    #[test]
    fn identification_reproduces_kernel(mu in measure_strategy(3), z in complex_in(0.9), w in complex_in(0.9)) {
        let m = CostaraModel::build(&mu).unwrap();
        let id = SchurIdentification::build(&m).unwrap();
        let k = m.kernel_full(z, w);
        prop_assert!((id.kernel_hb(z, w) - k).norm() <= 1e-8 * k.norm());
        prop_assert!(id.schur_norm_sqr(z) <= 1.0 + 1e-8);
        let rec = id.p_factor.adjoint() * &id.p_factor;
        prop_assert!(linalg::max_abs(&(rec - &id.a)) <= 1e-9 * linalg::max_abs(&id.a));
        for i in 0..id.p_factor.nrows() {
            for j in 0..i {
                prop_assert_eq!(id.p_factor[(i, j)], Complex::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn rotation_keeps_a_spectrum(phi in 0.0..std::f64::consts::TAU, w in 0.3..3.0f64, theta in 20.0..170.0f64) {
        let mu = MeasureSpec::new(vec![Atom::at_degrees(0.0, 1.0), Atom::at_degrees(theta, w)]).unwrap();
        let eig = |m: &MeasureSpec| {
            let model = CostaraModel::build(m).unwrap();
            linalg::hermitian_eigenvalues(&SchurIdentification::build(&model).unwrap().a)
        };
        let (a, b) = (eig(&mu), eig(&mu.rotated(phi).unwrap()));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "{} vs {}", x, y);
        }
    }
}
