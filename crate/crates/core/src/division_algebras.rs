//! The normed division algebras ℝ, ℂ, ℍ and 𝕆.
//!
//! Every algebra is produced from the one below it by Cayley–Dickson doubling
//! `(a,b)(c,d) = (ac − d̄b, da + bc̄)`, starting from ℝ. The basis of the doubled
//! algebra is `e_i = (e_i, 0)` and `e_{d+i} = (0, e_i)`.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;
use std::sync::OnceLock;

use num::traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraTag {
    R,
    C,
    H,
    O,
}

impl AlgebraTag {
    pub const ALL: [AlgebraTag; 4] = [AlgebraTag::R, AlgebraTag::C, AlgebraTag::H, AlgebraTag::O];

    pub fn dim(self) -> usize {
        match self {
            AlgebraTag::R => 1,
            AlgebraTag::C => 2,
            AlgebraTag::H => 4,
            AlgebraTag::O => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraTag::R => "real numbers",
            AlgebraTag::C => "complex numbers",
            AlgebraTag::H => "quaternions",
            AlgebraTag::O => "octonions",
        }
    }

    fn doubled_from(self) -> Option<AlgebraTag> {
        match self {
            AlgebraTag::R => None,
            AlgebraTag::C => Some(AlgebraTag::R),
            AlgebraTag::H => Some(AlgebraTag::C),
            AlgebraTag::O => Some(AlgebraTag::H),
        }
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraTag::R => "R",
            AlgebraTag::C => "C",
            AlgebraTag::H => "H",
            AlgebraTag::O => "O",
        };
        f.write_str(s)
    }
}

impl FromStr for AlgebraTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(AlgebraTag::R),
            "C" | "c" => Ok(AlgebraTag::C),
            "H" | "h" => Ok(AlgebraTag::H),
            "O" | "o" => Ok(AlgebraTag::O),
            _ => Err(Error::Domain(format!("unknown algebra {s:?}; expected R, C, H or O"))),
        }
    }
}

/// Multiplication table `e_i e_j = sign · e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    tag: AlgebraTag,
    products: Vec<(usize, i8)>,
}

impl StructureConstants {
    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.tag.dim()
    }

    /// `e_i e_j` as `(k, sign)`.
    pub fn product(&self, i: usize, j: usize) -> (usize, i8) {
        self.products[i * self.dim() + j]
    }

    /// `c_{ijk}` with `e_i e_j = Σ_k c_{ijk} e_k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> i8 {
        let (kk, s) = self.product(i, j);
        if kk == k {
            s
        } else {
            0
        }
    }

    /// `re((e_i e_j) e_l)`.
    pub fn real_triple(&self, i: usize, j: usize, l: usize) -> i8 {
        let (k, s1) = self.product(i, j);
        let (q, s2) = self.product(k, l);
        if q == 0 {
            s1 * s2
        } else {
            0
        }
    }

    /// Matrix of left multiplication by `e_i`, row-major, acting on coefficient vectors.
    pub fn left_mul_matrix(&self, i: usize) -> Vec<i64> {
        let d = self.dim();
        let mut m = vec![0i64; d * d];
        for j in 0..d {
            let (k, s) = self.product(i, j);
            m[k * d + j] = s as i64;
        }
        m
    }

    fn real() -> Self {
        Self {
            tag: AlgebraTag::R,
            products: vec![(0, 1)],
        }
    }

    fn double(base: &StructureConstants, tag: AlgebraTag) -> Self {
        let d = base.dim();
        let nd = 2 * d;
        // conj(e_i) = ±e_i
        let conj_sign = |i: usize| if i == 0 { 1i8 } else { -1i8 };
        let mut products = vec![(0usize, 0i8); nd * nd];
        for i in 0..nd {
            for j in 0..nd {
                let (lo_i, hi_i) = (i < d, i % d);
                let (lo_j, hi_j) = (j < d, j % d);
                let entry = match (lo_i, lo_j) {
                    // (e_i,0)(e_j,0) = (e_i e_j, 0)
                    (true, true) => base.product(hi_i, hi_j),
                    // (e_i,0)(0,e_j) = (0, e_j e_i)
                    (true, false) => {
                        let (k, s) = base.product(hi_j, hi_i);
                        (k + d, s)
                    }
                    // (0,e_i)(e_j,0) = (0, e_i conj(e_j))
                    (false, true) => {
                        let (k, s) = base.product(hi_i, hi_j);
                        (k + d, s * conj_sign(hi_j))
                    }
                    // (0,e_i)(0,e_j) = (−conj(e_j) e_i, 0)
                    (false, false) => {
                        let (k, s) = base.product(hi_j, hi_i);
                        (k, -s * conj_sign(hi_j))
                    }
                };
                products[i * nd + j] = entry;
            }
        }
        Self { tag, products }
    }
}

/// The structure constants for `tag`, built once and cached.
pub fn structure_constants(tag: AlgebraTag) -> &'static StructureConstants {
    static TABLES: OnceLock<[StructureConstants; 4]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        let r = StructureConstants::real();
        let c = StructureConstants::double(&r, AlgebraTag::C);
        let h = StructureConstants::double(&c, AlgebraTag::H);
        let o = StructureConstants::double(&h, AlgebraTag::O);
        [r, c, h, o]
    });
    debug_assert_eq!(
        tag.doubled_from().map(|t| t.dim() * 2).unwrap_or(1),
        tag.dim()
    );
    &tables[tag as usize]
}

/// Coefficient types usable in [`AlgElem`]: exact rationals, integers or floats.
pub trait Coeff: Clone + Num + Neg<Output = Self> {}
impl<T: Clone + Num + Neg<Output = T>> Coeff for T {}

/// An element `Σ c_i e_i` of one of the four algebras.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElem<T> {
    tag: AlgebraTag,
    coeffs: Vec<T>,
}

impl<T: Coeff> AlgElem<T> {
    pub fn new(tag: AlgebraTag, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != tag.dim() {
            return Err(Error::Structural(format!(
                "{} needs {} coefficients, got {}",
                tag,
                tag.dim(),
                coeffs.len()
            )));
        }
        Ok(Self { tag, coeffs })
    }

    pub fn basis(tag: AlgebraTag, i: usize) -> Result<Self> {
        if i >= tag.dim() {
            return Err(Error::Structural(format!("basis index {i} out of range for {tag}")));
        }
        let mut coeffs = vec![T::zero(); tag.dim()];
        coeffs[i] = T::one();
        Ok(Self { tag, coeffs })
    }

    pub fn one(tag: AlgebraTag) -> Self {
        Self::basis(tag, 0).expect("e0 exists")
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.tag != other.tag {
            return Err(Error::Structural(format!(
                "cannot multiply {} by {}",
                self.tag, other.tag
            )));
        }
        let sc = structure_constants(self.tag);
        let d = self.tag.dim();
        let mut out = vec![T::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (k, s) = sc.product(i, j);
                let prod = a.clone() * b.clone();
                out[k] = if s > 0 {
                    out[k].clone() + prod
                } else {
                    out[k].clone() - prod
                };
            }
        }
        Ok(Self {
            tag: self.tag,
            coeffs: out,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.tag != other.tag {
            return Err(Error::Structural(format!("cannot add {} and {}", self.tag, other.tag)));
        }
        Ok(Self {
            tag: self.tag,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() })
            .collect();
        Self {
            tag: self.tag,
            coeffs,
        }
    }

    pub fn re(&self) -> T {
        self.coeffs[0].clone()
    }

    pub fn norm2(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use num::BigInt;
    use proptest::prelude::*;

    fn e(tag: AlgebraTag, i: usize) -> AlgElem<i64> {
        AlgElem::basis(tag, i).unwrap()
    }

    #[test]
    fn quaternion_relations() {
        let h = AlgebraTag::H;
        assert_eq!(e(h, 1).mul(&e(h, 2)).unwrap(), e(h, 3));
        let minus_one = AlgElem::new(h, vec![-1, 0, 0, 0]).unwrap();
        for i in 1..4 {
            assert_eq!(e(h, i).mul(&e(h, i)).unwrap(), minus_one);
        }
        let ijk = e(h, 1).mul(&e(h, 2)).unwrap().mul(&e(h, 3)).unwrap();
        assert_eq!(ijk, minus_one);
    }

    #[test]
    fn small_tables() {
        let r = structure_constants(AlgebraTag::R);
        assert_eq!(r.c(0, 0, 0), 1);
        let c = structure_constants(AlgebraTag::C);
        assert_eq!(c.product(1, 1), (0, -1));
    }

    #[test]
    fn table_shape_invariants() {
        for tag in AlgebraTag::ALL {
            let sc = structure_constants(tag);
            let d = tag.dim();
            for j in 0..d {
                for k in 0..d {
                    assert_eq!(sc.c(0, j, k), i8::from(j == k));
                }
            }
            for i in 0..d {
                for j in 0..d {
                    let nonzero = (0..d).filter(|&k| sc.c(i, j, k) != 0).count();
                    assert_eq!(nonzero, 1);
                }
            }
        }
    }

    #[test]
    fn unit_and_conjugate() {
        for tag in AlgebraTag::ALL {
            let a = AlgElem::new(tag, (1..=tag.dim() as i64).collect()).unwrap();
            assert_eq!(a.mul(&AlgElem::one(tag)).unwrap(), a);
            assert_eq!(AlgElem::one(tag).mul(&a).unwrap(), a);
        }
        let e1 = e(AlgebraTag::O, 1);
        assert_eq!(e1.re(), 0);
        assert_eq!(e1.conj(), AlgElem::new(AlgebraTag::O, vec![0, -1, 0, 0, 0, 0, 0, 0]).unwrap());
    }

    #[test]
    fn tag_mismatch_is_structural() {
        assert!(matches!(e(AlgebraTag::H, 1).mul(&e(AlgebraTag::O, 1)), Err(Error::Structural(_))));
        assert!(AlgElem::<i64>::new(AlgebraTag::C, vec![1]).is_err());
    }

    /// Brute-force search over basis triples for a non-associating one.
    #[test]
    fn octonions_are_not_associative() {
        let o = AlgebraTag::O;
        let (a, b, c) = (e(o, 1), e(o, 2), e(o, 4));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_ne!(left, right);
        let mut witnesses = 0;
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    let (x, y, z) = (e(o, i), e(o, j), e(o, k));
                    if x.mul(&y).unwrap().mul(&z).unwrap() != x.mul(&y.mul(&z).unwrap()).unwrap() {
                        witnesses += 1;
                    }
                }
            }
        }
        assert!(witnesses > 0);
        // quaternions do associate
        let h = AlgebraTag::H;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let (x, y, z) = (e(h, i), e(h, j), e(h, k));
                    assert_eq!(
                        x.mul(&y).unwrap().mul(&z).unwrap(),
                        x.mul(&y.mul(&z).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    /// Exhaustive over basis triples; bilinearity extends it to all of 𝕆.
    #[test]
    fn real_part_is_association_free() {
        let o = AlgebraTag::O;
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    let (x, y, z) = (e(o, i), e(o, j), e(o, k));
                    let l = x.mul(&y).unwrap().mul(&z).unwrap().re();
                    let r = x.mul(&y.mul(&z).unwrap()).unwrap().re();
                    assert_eq!(l, r, "triple ({i},{j},{k})");
                    assert_eq!(structure_constants(o).real_triple(i, j, k) as i64, l);
                }
            }
        }
    }

    #[test]
    fn left_multiplications_are_anticommuting_complex_structures() {
        let sc = structure_constants(AlgebraTag::O);
        let mats: Vec<Vec<i64>> = (1..8).map(|i| sc.left_mul_matrix(i)).collect();
        let mul = |a: &[i64], b: &[i64]| {
            let mut out = vec![0i64; 64];
            for r in 0..8 {
                for c in 0..8 {
                    out[r * 8 + c] = (0..8).map(|k| a[r * 8 + k] * b[k * 8 + c]).sum();
                }
            }
            out
        };
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                let ab = mul(a, b);
                let ba = mul(b, a);
                for r in 0..8 {
                    for c in 0..8 {
                        let expect = if i == j && r == c { -2 } else { 0 };
                        assert_eq!(ab[r * 8 + c] + ba[r * 8 + c], expect);
                    }
                }
            }
        }
    }

    fn rational() -> impl Strategy<Value = BigRational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn elem(tag: AlgebraTag) -> impl Strategy<Value = AlgElem<BigRational>> {
        proptest::collection::vec(rational(), tag.dim()).prop_map(move |c| AlgElem::new(tag, c).unwrap())
    }

    fn any_tag() -> impl Strategy<Value = AlgebraTag> {
        prop_oneof![
            Just(AlgebraTag::R),
            Just(AlgebraTag::C),
            Just(AlgebraTag::H),
            Just(AlgebraTag::O)
        ]
    }

    proptest! {
        #[test]
        fn conj_is_anti_automorphism((a, b) in any_tag().prop_flat_map(|t| (elem(t), elem(t)))) {
            let lhs = a.mul(&b).unwrap().conj();
            let rhs = b.conj().mul(&a.conj()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.norm2(), a.mul(&a.conj()).unwrap().re());
        }

        #[test]
        fn octonion_alternativity(a in elem(AlgebraTag::O), b in elem(AlgebraTag::O)) {
            let aa = a.mul(&a).unwrap();
            prop_assert_eq!(a.mul(&a.mul(&b).unwrap()).unwrap(), aa.mul(&b).unwrap());
            prop_assert_eq!(b.mul(&a).unwrap().mul(&a).unwrap(), b.mul(&aa).unwrap());
        }
    }
}
