//! Polynomial families whose sphere level sets are isoparametric.

use serde::Serialize;

use crate::clifford::{build_generators, build_system, CliffordSystem};
use crate::division_algebras::{structure_constants, AlgebraTag};
use crate::error::{Error, Result};
use crate::polyalg::{rat, Poly, ScalarQ3};

/// A Cartan–Münzner polynomial with its declared data.
///
/// `m1` is the multiplicity belonging to the focal set `F = +1` side, i.e. the
/// first principal angle; the Laplacian then reads `ΔF = p²(m2 − m1)/2·r^{p−2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoparametricFamily {
    pub name: String,
    pub p: u32,
    pub ambient_dim: usize,
    pub poly: Poly,
    pub expected_multiplicities: Option<(u32, u32)>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMetadata {
    pub name: String,
    pub p: u32,
    pub ambient_dim: usize,
    pub sphere_dim: usize,
    pub expected_multiplicities: Option<(u32, u32)>,
    pub provenance: String,
}

impl IsoparametricFamily {
    fn new(
        name: String,
        p: u32,
        poly: Poly,
        expected_multiplicities: Option<(u32, u32)>,
        provenance: &str,
    ) -> Result<Self> {
        let fam = Self {
            name,
            p,
            ambient_dim: poly.num_vars(),
            poly,
            expected_multiplicities,
            provenance: provenance.to_string(),
        };
        fam.check_invariants()?;
        Ok(fam)
    }

    /// `n` for the sphere `Sⁿ ⊂ ℝ^{n+1}`.
    pub fn sphere_dim(&self) -> usize {
        self.ambient_dim - 1
    }

    pub fn metadata(&self) -> FamilyMetadata {
        FamilyMetadata {
            name: self.name.clone(),
            p: self.p,
            ambient_dim: self.ambient_dim,
            sphere_dim: self.sphere_dim(),
            expected_multiplicities: self.expected_multiplicities,
            provenance: self.provenance.clone(),
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        if ![1, 2, 3, 4, 6].contains(&self.p) {
            return Err(Error::Construction(format!("p = {} is not 1, 2, 3, 4 or 6", self.p)));
        }
        if self.ambient_dim != self.poly.num_vars() {
            return Err(Error::Construction("ambient dimension differs from variable count".into()));
        }
        if !self.poly.is_homogeneous(self.p) {
            return Err(Error::Construction(format!("{} is not homogeneous of degree {}", self.name, self.p)));
        }
        if let Some((m1, m2)) = self.expected_multiplicities {
            let lhs = self.p as usize * (m1 + m2) as usize;
            if lhs != 2 * (self.sphere_dim() - 1) {
                return Err(Error::Construction(format!(
                    "p(m1+m2)/2 = {} but dim M = {}",
                    lhs / 2,
                    self.sphere_dim() - 1
                )));
            }
        }
        Ok(())
    }
}

/// `F = x_{n+1}` on ℝ^{n+1}.
pub fn linear_family(n: usize) -> Result<IsoparametricFamily> {
    if n < 1 {
        return Err(Error::Domain("linear family needs n >= 1".into()));
    }
    let poly = Poly::var(n + 1, n)?;
    let m = (n - 1) as u32;
    IsoparametricFamily::new(
        format!("linear(n={n})"),
        1,
        poly,
        Some((m, m)),
        "height function; level sets are small spheres",
    )
}

/// `F = Σ_{i≤k} x_i² − Σ_{j>k} x_j²` on ℝ^{n+1}.
///
/// The focal set `F = 1` is `S^{k−1}`, of codimension `n − k + 1`, so the
/// multiplicities are declared as `(n − k, k − 1)`. For `k ∈ {1, n}` one factor
/// is `S⁰` and the level set is a pair of umbilic spheres; no pair is declared.
pub fn product_family(n: usize, k: usize) -> Result<IsoparametricFamily> {
    if k < 1 || k > n {
        return Err(Error::Domain(format!("product family needs 1 <= k <= n, got n={n}, k={k}")));
    }
    let dim = n + 1;
    let poly = &Poly::sum_of_squares(dim, 0..k) - &Poly::sum_of_squares(dim, k..dim);
    let mult = (1 < k && k < n).then(|| ((n - k) as u32, (k - 1) as u32));
    IsoparametricFamily::new(
        format!("product(n={n},k={k})"),
        2,
        poly,
        mult,
        "difference of sums of squares; level sets are products of spheres",
    )
}

/// Cartan's cubic over `tag` on ℝ² ⊕ 𝔽³, variables `(u, v, x, y, z)`:
/// `u³ − 3uv² + (3/2)u(|x|²+|y|²−2|z|²) + (3√3/2)v(|x|²−|y|²) + 3√3·re((xy)z)`.
pub fn cartan_cubic(tag: AlgebraTag) -> Result<IsoparametricFamily> {
    let d = tag.dim();
    let n = 3 * d + 2;
    let (xs, ys, zs) = (2, 2 + d, 2 + 2 * d);
    let u = Poly::var(n, 0)?;
    let v = Poly::var(n, 1)?;
    let x2 = Poly::sum_of_squares(n, xs..xs + d);
    let y2 = Poly::sum_of_squares(n, ys..ys + d);
    let z2 = Poly::sum_of_squares(n, zs..zs + d);
    let s3 = ScalarQ3::sqrt3();

    let mut f = &u.pow(3) - &(&u * &v.square()).scale(&ScalarQ3::from_int(3));
    let quad = &(&x2 + &y2) - &z2.scale(&ScalarQ3::from_int(2));
    f = &f + &(&u * &quad).scale(&ScalarQ3::ratio(3, 2));
    f = &f + &(&v * &(&x2 - &y2)).scale(&s3.scale(&rat(3, 2)));

    let sc = structure_constants(tag);
    let coeff = s3.scale(&rat(3, 1));
    let mut terms = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                let s = sc.real_triple(i, j, l);
                if s != 0 {
                    let mut e = vec![0u32; n];
                    e[xs + i] += 1;
                    e[ys + j] += 1;
                    e[zs + l] += 1;
                    terms.push((e, coeff.scale(&rat(s as i64, 1))));
                }
            }
        }
    }
    f = &f + &Poly::from_terms(n, terms)?;
    let m = d as u32;
    IsoparametricFamily::new(
        format!("cartan-cubic({})", tag.name()),
        3,
        f,
        Some((m, m)),
        "Cartan cubic |grad F|^2 = 9 r^4, harmonic",
    )
}

/// `F = ⟨x,x⟩² − 2 Σ_{i=0}^{m} ⟨P_i x, x⟩²` on ℝ^{2l}, multiplicities `(m, l − m − 1)`.
pub fn fkm_family(s: &CliffordSystem) -> Result<IsoparametricFamily> {
    let (m, l) = (s.m(), s.l());
    if m < 1 || l < m + 2 {
        return Err(Error::Precondition(format!(
            "need m1 = m >= 1 and m2 = l - m - 1 >= 1, got m = {m}, l = {l} (m2 = {})",
            l as i64 - m as i64 - 1
        )));
    }
    let n = 2 * l;
    let mut sum = Poly::zero(n);
    for p in s.matrices() {
        sum = &sum + &Poly::quadratic_form(n, p.as_slice())?.square();
    }
    let f = &Poly::norm_squared(n).square() - &sum.scale(&ScalarQ3::from_int(2));
    IsoparametricFamily::new(
        format!("fkm(m={m},l={l})"),
        4,
        f,
        Some((m as u32, (l - m - 1) as u32)),
        "FKM quartic <x,x>^2 - 2 sum <P_i x,x>^2 of a Clifford system",
    )
}

/// FKM family of the `k`-fold irreducible Clifford system with `m + 1` matrices.
pub fn fkm(m: usize, k: usize) -> Result<IsoparametricFamily> {
    let sys = build_system(&build_generators(m, k)?)?;
    let mut fam = fkm_family(&sys)?;
    fam.name = format!("fkm(m={m},k={k})");
    Ok(fam)
}

/// Nomizu's quartic on ℝ^{n+1} × ℝ^{n+1} ≅ ℝ^{2n+2}, normalized as `2G − r⁴` with
/// `G = (|x|² − |y|²)² + 4⟨x,y⟩²`.
pub fn nomizu_g(n: usize) -> Result<Poly> {
    if n < 2 {
        return Err(Error::Domain(format!("Nomizu family needs n >= 2, got {n}")));
    }
    let h = n + 1;
    let dim = 2 * h;
    let diff = &Poly::sum_of_squares(dim, 0..h) - &Poly::sum_of_squares(dim, h..dim);
    let mut gram = vec![0i64; dim * dim];
    for i in 0..h {
        gram[i * dim + h + i] = 1;
    }
    // quadratic_form of the upper block gives ⟨x,y⟩ once
    let inner = Poly::quadratic_form(dim, &gram)?;
    Ok(&diff.square() + &inner.square().scale(&ScalarQ3::from_int(4)))
}

pub fn nomizu_family(n: usize) -> Result<IsoparametricFamily> {
    let g = nomizu_g(n)?;
    let dim = g.num_vars();
    let f = &g.scale(&ScalarQ3::from_int(2)) - &Poly::norm_squared(dim).square();
    IsoparametricFamily::new(
        format!("nomizu(n={n})"),
        4,
        f,
        Some(((n - 1) as u32, 1)),
        "Nomizu quartic 2((|x|^2-|y|^2)^2 + 4<x,y>^2) - r^4",
    )
}

fn cofactor_det3(m: &[[Poly; 3]; 3]) -> Poly {
    let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
    let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
    let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
    &(&t1 - &t2) + &t3
}

/// Half the determinant of the symmetric 3×3 matrix in `x_1..x_5`
/// (0-based variables 0..4) with rows
/// `(x5 − √3x4, √3x3, √3x2)`, `(√3x3, x5 + √3x4, √3x1)`, `(√3x2, √3x1, −2x5)`.
pub fn nurowski_det_cubic() -> Poly {
    let n = 5;
    let x = |i: usize| Poly::var(n, i - 1).expect("index in range");
    let s3 = ScalarQ3::sqrt3();
    let r3 = |i: usize| x(i).scale(&s3);
    let m = [
        [&x(5) - &r3(4), r3(3), r3(2)],
        [r3(3), &x(5) + &r3(4), r3(1)],
        [r3(2), r3(1), x(5).scale(&ScalarQ3::from_int(-2))],
    ];
    cofactor_det3(&m).scale(&ScalarQ3::ratio(1, 2))
}

/// The expanded form
/// `x5³ + (3/2)x5(x1²+x2²) − 3x5(x3²+x4²) + (3√3/2)x4(x1²−x2²) + 3√3 x1x2x3`.
pub fn nurowski_expansion() -> Poly {
    let n = 5;
    let x = |i: usize| Poly::var(n, i - 1).expect("index in range");
    let s3 = ScalarQ3::sqrt3();
    let sq = |i: usize| x(i).square();
    let mut f = x(5).pow(3);
    f = &f + &(&x(5) * &(&sq(1) + &sq(2))).scale(&ScalarQ3::ratio(3, 2));
    f = &f - &(&x(5) * &(&sq(3) + &sq(4))).scale(&ScalarQ3::from_int(3));
    f = &f + &(&x(4) * &(&sq(1) - &sq(2))).scale(&s3.scale(&rat(3, 2)));
    f = &f + &(&(&x(1) * &x(2)) * &x(3)).scale(&s3.scale(&rat(3, 1)));
    f
}

/// Target indices sending Cartan-cubic variables `(u, v, x, y, z)` to
/// `(x5, x4, x1, x2, x3)`, 0-based.
pub const NUROWSKI_RENAMING: [usize; 5] = [4, 3, 0, 1, 2];

/// The real Cartan cubic rewritten in the five variables `x1..x5`.
pub fn cartan_cubic_real_renamed() -> Result<Poly> {
    cartan_cubic(AlgebraTag::R)?.poly.relabel(&NUROWSKI_RENAMING, 5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> ScalarQ3 {
        ScalarQ3::from_int(n)
    }

    #[test]
    fn linear() {
        let f = linear_family(7).unwrap();
        assert_eq!(f.ambient_dim, 8);
        assert_eq!(f.poly, Poly::var(8, 7).unwrap());
        let mut pole = vec![0.0; 8];
        pole[7] = 1.0;
        assert_eq!(f.poly.evaluate_f64(&pole).unwrap(), 1.0);
        assert_eq!(linear_family(2).unwrap().poly, Poly::var(3, 2).unwrap());
    }

    #[test]
    fn product() {
        let f = product_family(2, 1).unwrap();
        let expect = Poly::from_terms(3, vec![(vec![2, 0, 0], q(1)), (vec![0, 2, 0], q(-1)), (vec![0, 0, 2], q(-1))]).unwrap();
        assert_eq!(f.poly, expect);
        let g = product_family(7, 4).unwrap();
        assert_eq!(g.expected_multiplicities, Some((3, 3)));
        let mut e1 = vec![0.0; 8];
        e1[0] = 1.0;
        assert_eq!(g.poly.evaluate_f64(&e1).unwrap(), 1.0);
        assert!(matches!(product_family(3, 0), Err(Error::Domain(_))));
        assert!(product_family(3, 4).is_err());
    }

    #[test]
    fn cartan_cubic_basics() {
        for tag in AlgebraTag::ALL {
            let f = cartan_cubic(tag).unwrap();
            assert_eq!(f.ambient_dim, 3 * tag.dim() + 2);
            let mut pt = vec![ScalarQ3::zero(); f.ambient_dim];
            pt[0] = ScalarQ3::one();
            assert_eq!(f.poly.evaluate(&pt).unwrap(), ScalarQ3::one());
            assert!(f.poly.euler_check(3).unwrap());
        }
        assert!(cartan_cubic(AlgebraTag::H).unwrap().poly.laplacian().is_zero());
    }

    #[test]
    fn renamed_real_cubic_is_printed_expansion() {
        let diff = &cartan_cubic_real_renamed().unwrap() - &nurowski_expansion();
        assert!(diff.is_zero(), "difference: {diff}");
    }

    #[test]
    fn expansion_at_x5() {
        let pt: Vec<ScalarQ3> = (0..5).map(|i| q(i64::from(i == 4))).collect();
        assert_eq!(nurowski_expansion().evaluate(&pt).unwrap(), q(1));
        // diag(1, 1, −2) has determinant −2
        assert_eq!(nurowski_det_cubic().evaluate(&pt).unwrap(), q(-1));
    }

    #[test]
    fn fkm_rejects_small_l() {
        let sys = build_system(&build_generators(1, 2).unwrap()).unwrap();
        assert!(matches!(fkm_family(&sys), Err(Error::Precondition(_))));
        assert!(fkm(2, 1).is_err());
    }

    #[test]
    fn fkm_metadata() {
        let f = fkm(2, 2).unwrap();
        assert_eq!(f.ambient_dim, 8);
        assert_eq!(f.expected_multiplicities, Some((2, 1)));
        assert!(f.poly.euler_check(4).unwrap());
        let g = fkm(3, 2).unwrap();
        assert_eq!(g.ambient_dim, 16);
        assert_eq!(g.expected_multiplicities, Some((3, 4)));
    }

    /// `⟨P_i x, P_j x⟩ = ⟨x,x⟩δ_ij` on random points.
    #[test]
    fn clifford_inner_products() {
        use rand::{Rng, SeedableRng};
        let sys = build_system(&build_generators(3, 2).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = sys.ambient_dim();
        for _ in 0..20 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let xx: f64 = x.iter().map(|v| v * v).sum();
            let apply = |p: &crate::clifford::IntMatrix| -> Vec<f64> {
                (0..n).map(|r| (0..n).map(|c| p.get(r, c) as f64 * x[c]).sum()).collect()
            };
            for (i, a) in sys.matrices().iter().enumerate() {
                for (j, b) in sys.matrices().iter().enumerate() {
                    let dot: f64 = apply(a).iter().zip(apply(b)).map(|(u, v)| u * v).sum();
                    let expect = if i == j { xx } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn nomizu_basics() {
        let g = nomizu_g(3).unwrap();
        let r2 = Poly::norm_squared(8);
        // |grad G|² = 16 G r²
        let lhs = g.gradient_norm_squared();
        let rhs = (&g * &r2).scale(&q(16));
        assert!((&lhs - &rhs).is_zero());
        assert!(nomizu_family(1).is_err());
        assert_eq!(nomizu_family(4).unwrap().expected_multiplicities, Some((3, 1)));
    }

    #[test]
    fn nomizu_n2() {
        // n = 2 is the lowest case; multiplicities (1,1)
        let f = nomizu_family(2).unwrap();
        assert_eq!(f.ambient_dim, 6);
        assert!(f.poly.laplacian().is_zero());
    }
}
