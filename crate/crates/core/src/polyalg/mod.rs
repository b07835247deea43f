//! Exact polynomial algebra over ℚ(√3).

mod compiled;
mod poly;
mod scalar;
mod text;

pub use compiled::CompiledPoly;
pub use poly::{Monomial, Poly};
pub use scalar::{rat, ScalarQ3};

#[cfg(test)]
mod property_tests {
    use super::*;
    use proptest::prelude::*;

    fn small_scalar() -> impl Strategy<Value = ScalarQ3> {
        (-6i64..6, 1i64..5, -3i64..3, 1i64..4).prop_map(|(a, ad, b, bd)| ScalarQ3::new(rat(a, ad), rat(b, bd)))
    }

    fn small_poly(n: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, n), small_scalar()), 0..5)
            .prop_map(move |ts| Poly::from_terms(n, ts).unwrap())
    }

    fn homogeneous_poly(n: usize, d: u32) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((proptest::collection::vec(0u32..=d, n - 1), small_scalar()), 1..6).prop_map(
            move |ts| {
                let terms = ts.into_iter().filter_map(|(mut e, c)| {
                    let s: u32 = e.iter().sum();
                    (s <= d).then(|| {
                        e.push(d - s);
                        (e, c)
                    })
                });
                Poly::from_terms(n, terms).unwrap()
            },
        )
    }

    fn rational_point(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((-10i64..=10, 1i64..=10), n)
    }

    proptest! {
        #[test]
        fn ring_axioms(p in small_poly(3), q in small_poly(3), r in small_poly(3)) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(p.square(), &p * &p);
        }

        #[test]
        fn product_degree_adds(p in small_poly(3), q in small_poly(3)) {
            if let (Some(a), Some(b)) = (p.degree(), q.degree()) {
                prop_assert_eq!((&p * &q).degree(), Some(a + b));
            }
        }

        #[test]
        fn euler_identity_on_homogeneous(p in homogeneous_poly(3, 4)) {
            prop_assert!(p.euler_check(4).unwrap());
        }

        #[test]
        fn laplacian_lowers_degree_by_two(p in homogeneous_poly(4, 3)) {
            let lap = p.laplacian();
            if !lap.is_zero() {
                prop_assert_eq!(lap.homogeneous_degree(), Some(1));
            }
        }

        #[test]
        fn derivative_lowers_degree_by_one(p in homogeneous_poly(3, 3), i in 0usize..3) {
            let d = p.differentiate(i).unwrap();
            prop_assert!(d.is_homogeneous(2));
        }

        #[test]
        fn exact_and_float_evaluation_agree(p in small_poly(3), pt in rational_point(3)) {
            let exact: Vec<ScalarQ3> = pt.iter().map(|&(n, d)| ScalarQ3::ratio(n, d)).collect();
            let float: Vec<f64> = pt.iter().map(|&(n, d)| n as f64 / d as f64).collect();
            let e = p.evaluate(&exact).unwrap().to_f64();
            let f = p.evaluate_f64(&float).unwrap();
            let c = CompiledPoly::new(&p).eval(&float);
            // magnitude of the largest summand bounds the attainable relative accuracy
            let scale = p
                .terms()
                .map(|(m, c)| {
                    m.exponents().iter().zip(&float).fold(c.to_f64().abs(), |acc, (&k, x)| acc * x.abs().powi(k as i32))
                })
                .fold(0.0f64, f64::max);
            prop_assert!((e - f).abs() <= 1e-12 * e.abs().max(scale));
            prop_assert!((c - f).abs() <= 1e-12 * f.abs().max(scale));
        }
    }
}
