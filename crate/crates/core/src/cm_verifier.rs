//! Exact check of the Cartan–Münzner equations
//! `|grad F|² = p² r^{2p−2}` and `ΔF = c·r^{p−2}`, `c = p²(m2 − m1)/2`.

use num::rational::BigRational;
use num::{Integer, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::IsoparametricFamily;
use crate::polyalg::{rat, Monomial, Poly, ScalarQ3};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CMReport {
    pub p: u32,
    pub euler_ok: bool,
    pub grad_identity_ok: bool,
    pub laplace_identity_ok: bool,
    /// `ΔF = inferred_c · r^{p−2}`; zero for odd `p`.
    pub inferred_c: ScalarQ3,
    /// `2c/p²`, rendered as a fraction.
    #[serde(serialize_with = "ser_rational")]
    pub inferred_m_diff: BigRational,
    /// Solved multiplicities, when integral and positive.
    pub inferred_multiplicities: Option<(u32, u32)>,
    /// Agreement with the family's declared multiplicities, if any were declared.
    pub matches_declared: Option<bool>,
    #[serde(skip)]
    pub grad_residual: Poly,
    #[serde(skip)]
    pub laplace_residual: Poly,
    pub grad_residual_terms: usize,
    pub laplace_residual_terms: usize,
}

impl CMReport {
    pub fn passed(&self) -> bool {
        self.euler_ok && self.grad_identity_ok && self.laplace_identity_ok && self.matches_declared != Some(false)
    }
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// `r^{2e} = (Σ x_i²)^e`.
fn r_power(num_vars: usize, e: u32) -> Poly {
    let r2 = Poly::norm_squared(num_vars);
    match e {
        0 => Poly::constant(num_vars, ScalarQ3::one()),
        1 => r2,
        2 => r2.square(),
        _ => r2.pow(e),
    }
}

fn grad_residual(f: &Poly, p: u32) -> Poly {
    let n = f.num_vars();
    let target = r_power(n, p - 1).scale(&ScalarQ3::from_int((p * p) as i64));
    &f.gradient_norm_squared() - &target
}

fn laplace_residual(f: &Poly, p: u32) -> (ScalarQ3, Poly) {
    let n = f.num_vars();
    let lap = f.laplacian();
    if p % 2 == 1 {
        return (ScalarQ3::zero(), lap);
    }
    let e = (p - 2) / 2;
    // r^{p−2} contains x_0^{p−2} with coefficient 1
    let mut probe = vec![0u32; n];
    probe[0] = p - 2;
    let c = lap.coefficient(&probe);
    let residual = &lap - &r_power(n, e).scale(&c);
    (c, residual)
}

/// Verifies both identities for `fam`, computing the residuals concurrently.
pub fn verify_cm(fam: &IsoparametricFamily) -> Result<CMReport> {
    verify_poly(&fam.poly, fam.p, fam.expected_multiplicities)
}

/// As [`verify_cm`] for a bare polynomial of degree `p` on ℝ^{n+1}.
pub fn verify_poly(f: &Poly, p: u32, declared: Option<(u32, u32)>) -> Result<CMReport> {
    if p == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    let euler_ok = f.euler_check(p)?;
    let (gres, (c, lres)) = rayon::join(|| grad_residual(f, p), || laplace_residual(f, p));
    let m_diff = {
        let two_c = c.scale(&rat(2, (p * p) as i64));
        if two_c.is_rational() {
            two_c.a().clone()
        } else {
            // an irrational c cannot come from integer multiplicities
            BigRational::new(num::BigInt::from(i64::MAX), num::BigInt::from(1))
        }
    };
    let sphere_dim = f.num_vars() - 1;
    let inferred = if lres.is_zero() && c.is_rational() {
        multiplicity_solve(p, sphere_dim, &m_diff).ok()
    } else {
        None
    };
    let matches_declared = declared.map(|d| Some(d) == inferred);
    Ok(CMReport {
        p,
        euler_ok,
        grad_identity_ok: gres.is_zero(),
        laplace_identity_ok: lres.is_zero(),
        inferred_c: c,
        inferred_m_diff: m_diff,
        inferred_multiplicities: inferred,
        matches_declared,
        grad_residual_terms: gres.num_terms(),
        laplace_residual_terms: lres.num_terms(),
        grad_residual: gres,
        laplace_residual: lres,
    })
}

/// Solves `p(m1 + m2)/2 = n − 1`, `m2 − m1 = m_diff` for positive integers.
/// For `p = 1` the single multiplicity `n − 1` is returned twice.
pub fn multiplicity_solve(p: u32, n: usize, m_diff: &BigRational) -> Result<(u32, u32)> {
    if n < 2 {
        return Err(Error::Domain(format!("sphere dimension {n} too small")));
    }
    let dim_m = (n - 1) as i64;
    if p == 1 {
        return Ok((dim_m as u32, dim_m as u32));
    }
    let p = p as i64;
    if (2 * dim_m) % p != 0 {
        return Err(Error::Inconsistency(format!("p = {p} does not divide 2(n-1) = {}", 2 * dim_m)));
    }
    let sum = 2 * dim_m / p;
    if !m_diff.is_integer() {
        return Err(Error::Inconsistency(format!("m2 - m1 = {m_diff} is not an integer")));
    }
    let diff = m_diff
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Inconsistency("m2 - m1 out of range".into()))?;
    if p % 2 == 1 && diff != 0 {
        return Err(Error::Inconsistency(format!("odd p forces m1 = m2, got m2 - m1 = {diff}")));
    }
    if (sum - diff).is_odd() {
        return Err(Error::Inconsistency(format!(
            "m1 + m2 = {sum} and m2 - m1 = {diff} have different parity"
        )));
    }
    let m1 = (sum - diff) / 2;
    let m2 = (sum + diff) / 2;
    if m1 <= 0 || m2 <= 0 {
        return Err(Error::Inconsistency(format!("non-positive multiplicities ({m1}, {m2})")));
    }
    Ok((m1 as u32, m2 as u32))
}

/// Adds `delta` to one coefficient of `f`, chosen by index into its term list.
pub fn mutate(f: &Poly, term_index: usize, delta: &ScalarQ3) -> Result<Poly> {
    let (m, _) = f
        .terms()
        .nth(term_index % f.num_terms().max(1))
        .ok_or_else(|| Error::Precondition("cannot mutate the zero polynomial".into()))?;
    let exps: Vec<u32> = Monomial::exponents(m).to_vec();
    f.perturb(&exps, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division_algebras::AlgebraTag;
    use num::Zero;
    use crate::families::{cartan_cubic, fkm, linear_family, nomizu_family, product_family};

    #[test]
    fn solve_examples() {
        assert_eq!(multiplicity_solve(4, 7, &rat(-1, 1)).unwrap(), (2, 1));
        assert_eq!(multiplicity_solve(3, 7, &rat(0, 1)).unwrap(), (2, 2));
        assert_eq!(multiplicity_solve(1, 7, &rat(5, 1)).unwrap(), (6, 6));
        assert!(matches!(multiplicity_solve(4, 7, &rat(1, 2)), Err(Error::Inconsistency(_))));
        assert!(multiplicity_solve(4, 7, &rat(-2, 1)).is_err());
        assert!(multiplicity_solve(4, 7, &rat(-3, 1)).is_err());
        assert!(multiplicity_solve(3, 7, &rat(2, 1)).is_err());
    }

    #[test]
    fn low_degree_families_pass() {
        for fam in [
            linear_family(7).unwrap(),
            product_family(7, 4).unwrap(),
            product_family(7, 2).unwrap(),
            product_family(5, 5).unwrap(),
            cartan_cubic(AlgebraTag::R).unwrap(),
            cartan_cubic(AlgebraTag::C).unwrap(),
        ] {
            let r = verify_cm(&fam).unwrap();
            assert!(r.passed(), "{}: {r:?}", fam.name);
        }
    }

    #[test]
    fn fkm_2_2() {
        let r = verify_cm(&fkm(2, 2).unwrap()).unwrap();
        assert!(r.grad_identity_ok && r.laplace_identity_ok);
        assert_eq!(r.inferred_c, ScalarQ3::from_int(-8));
        assert_eq!(r.inferred_m_diff, rat(-1, 1));
        assert_eq!(r.inferred_multiplicities, Some((2, 1)));
        assert!(r.passed());
    }

    #[test]
    fn nomizu_n3() {
        let r = verify_cm(&nomizu_family(3).unwrap()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.inferred_m_diff, rat(-1, 1));
    }

    #[test]
    fn odd_p_m_diff_zero() {
        let r = verify_cm(&cartan_cubic(AlgebraTag::R).unwrap()).unwrap();
        assert!(r.inferred_m_diff.is_zero());
        assert!(r.inferred_c.is_zero());
    }

    #[test]
    fn non_homogeneous_rejected() {
        let f = &Poly::norm_squared(3) + &Poly::var(3, 0).unwrap();
        assert!(matches!(verify_poly(&f, 2, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn every_single_coefficient_mutation_fails() {
        let fam = cartan_cubic(AlgebraTag::R).unwrap();
        let delta = ScalarQ3::ratio(1, 7);
        for i in 0..fam.poly.num_terms() {
            let bad = mutate(&fam.poly, i, &delta).unwrap();
            let r = verify_poly(&bad, 3, None).unwrap();
            assert!(!r.grad_identity_ok, "mutation {i} went undetected");
        }
        let prod = product_family(4, 2).unwrap();
        for i in 0..prod.poly.num_terms() {
            let bad = mutate(&prod.poly, i, &ScalarQ3::sqrt3()).unwrap();
            assert!(!verify_poly(&bad, 2, None).unwrap().grad_identity_ok);
        }
    }

    #[test]
    fn wrong_declaration_is_reported() {
        let mut fam = product_family(7, 4).unwrap();
        fam.expected_multiplicities = Some((2, 4));
        let r = verify_cm(&fam).unwrap();
        assert_eq!(r.matches_declared, Some(false));
        assert!(!r.passed());
    }
}
