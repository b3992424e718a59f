//! Property tests over the `(L, N)` grid and over random inputs.

use num_complex::Complex;
use proptest::prelude::*;
use qchain::energy::{extract_a, run_pipeline};
use qchain::exact::rational::rat;
use qchain::json::CyclotomicJson;
use qchain::qop::{build_q, tq_residual, Method};
use qchain::roots::{w_to_z, z_to_w};
use qchain::wtransform::w_sum;
use qchain::{BigReal, ChainParams, CyclotomicField, RealScalar};

fn grid_point() -> impl Strategy<Value = (u32, u32)> {
    (prop::sample::select(vec![3u32, 5, 7, 9, 11]), 1u32..=4)
}

fn small_rational() -> impl Strategy<Value = num_rational::BigRational> {
    (-1000i64..=1000, 1i64..=1000)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn palindrome_and_normalisation((l, n) in grid_point()) {
        let q = build_q(ChainParams::new(l, n).unwrap(), Method::ClosedForm).unwrap();
        let p = q.degree();
        let sign = if p.is_multiple_of(2) { rat(1, 1) } else { rat(-1, 1) };
        prop_assert_eq!(&q.e()[0], &rat(1, 1));
        for k in 0..=p {
            prop_assert_eq!(&q.e()[k], &(&sign * &q.e()[p - k]));
        }
    }

    #[test]
    fn single_coefficient_perturbation_breaks_tq((l, n) in grid_point(), k_frac in 0.0f64..1.0, delta in small_rational()) {
        let q = build_q(ChainParams::new(l, n).unwrap(), Method::ClosedForm).unwrap();
        let k = ((q.degree() + 1) as f64 * k_frac) as usize;
        let pq = q.perturbed(k.min(q.degree()), &delta).unwrap();
        prop_assert!(tq_residual(&pq).iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn energy_density_is_independent_of_n(l in prop::sample::select(vec![3u32, 5, 7]), n in 1u32..=5) {
        let sc = extract_a(l, Method::ClosedForm).unwrap();
        let s = run_pipeline(ChainParams::new(l, n).unwrap(), Method::ClosedForm).unwrap().summary;
        prop_assert_eq!(&s.energy_per_site, &sc.energy_density());
        prop_assert_eq!(&s.e1, &sc.predict_e1(n));
    }

    #[test]
    fn e1_is_real((l, n) in grid_point()) {
        let q = build_q(ChainParams::new(l, n).unwrap(), Method::ClosedForm).unwrap();
        prop_assert!(w_sum(&q).unwrap().e1.is_real());
    }

    #[test]
    fn mobius_round_trip(re in -50.0f64..50.0, im in -50.0f64..50.0, l in prop::sample::select(vec![3u32, 5, 7, 9, 11])) {
        let p = 256;
        let z = Complex::new(BigReal::from_f64_prec(re, p), BigReal::from_f64_prec(im, p));
        if let Ok(w) = z_to_w(&z, l) {
            let back = w_to_z(&w, l);
            let gap = qchain::numeric::cabs(&(back - z));
            prop_assert!(gap.log2_abs() < -((p - 20) as f64) + (re.abs() + im.abs()).log2().max(0.0));
        }
    }

    #[test]
    fn cyclotomic_json_round_trip(coeffs in prop::collection::vec((-50i64..50, 1i64..50), 4), order in prop::sample::select(vec![10u32, 14, 18])) {
        let f = CyclotomicField::new(order);
        let qs: Vec<_> = coeffs.iter().map(|(n, d)| rat(*n, *d)).collect();
        let c = f.from_poly_coeffs(&qs);
        let j = CyclotomicJson::from_number(&c, 128);
        let text = serde_json::to_string(&j).unwrap();
        let back: CyclotomicJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_number().unwrap(), c);
    }
}
