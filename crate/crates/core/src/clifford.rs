//! Representations of the Clifford relations and the Clifford systems built
//! from them.
//!
//! Generators `E_1..E_{m-1}` on ℝ^l are skew-symmetric, orthogonal and satisfy
//! `E_i E_j + E_j E_i = −2δ_ij Id`. A Clifford system on ℝ^{2l} is a tuple of
//! symmetric `P_0..P_m` with `P_i P_j + P_j P_i = 2δ_ij Id`; it is assembled as
//! `P_0(x,y) = (x,−y)`, `P_1(x,y) = (y,x)`, `P_{1+i}(x,y) = (E_i y, −E_i x)`.
//!
//! Irreducible generators come from left multiplication in ℂ, ℍ, 𝕆 for
//! `m ≤ 8`; larger `m` use the periodicity step `δ(m+8) = 16δ(m)` built from
//! tensor products with 2×2 blocks.

use std::fmt;

use serde::Serialize;

use crate::division_algebras::{structure_constants, AlgebraTag};
use crate::error::{Error, Result};

/// Dense square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(n: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Structural(format!(
                "{} entries do not form a {n}x{n} matrix",
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.n + c] = v;
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t.data[c * self.n + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn scale(&self, s: i64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        let mut out = Self::zeros(n * m);
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.get(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        out.set(r1 * m + r2, c1 * m + c2, a * other.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    /// `[[a, b], [c, d]]` assembled from four `n×n` blocks.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.n;
        let mut out = Self::zeros(2 * n);
        for r in 0..n {
            for col in 0..n {
                out.set(r, col, a.get(r, col));
                out.set(r, n + col, b.get(r, col));
                out.set(n + r, col, c.get(r, col));
                out.set(n + r, n + col, d.get(r, col));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        *self == self.transpose().scale(-1)
    }

    /// Squared Frobenius norm.
    pub fn frobenius2(&self) -> i64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |r, c| self.get(r, c) as f64)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{})", self.n, self.n)?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| format!("{:>2}", self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `δ(m)`: dimension of an irreducible representation of the Clifford
/// relations with `m − 1` generators.
pub fn delta(m: i64) -> Result<usize> {
    if m < 1 {
        return Err(Error::Domain(format!("delta(m) needs m >= 1, got {m}")));
    }
    const BASE: [usize; 8] = [1, 2, 4, 4, 8, 8, 8, 8];
    let mut mm = m as usize;
    let mut factor = 1usize;
    while mm > 8 {
        mm -= 8;
        factor *= 16;
    }
    Ok(factor * BASE[mm - 1])
}

/// Skew-symmetric orthogonal `E_1..E_{m-1}` on ℝ^l with `E_iE_j + E_jE_i = −2δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordGenerators {
    m: usize,
    l: usize,
    e: Vec<IntMatrix>,
}

impl CliffordGenerators {
    /// Wraps explicit matrices after checking every relation.
    pub fn new(m: usize, l: usize, e: Vec<IntMatrix>) -> Result<Self> {
        let g = Self { m, l, e };
        g.validate()?;
        Ok(g)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.e
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.e.len() != self.m - 1 {
            return Err(Error::Construction(format!(
                "m = {} needs {} generators, have {}",
                self.m,
                self.m.saturating_sub(1),
                self.e.len()
            )));
        }
        let id = IntMatrix::identity(self.l);
        for (i, a) in self.e.iter().enumerate() {
            if a.size() != self.l {
                return Err(Error::Construction(format!("E_{} has wrong size", i + 1)));
            }
            if !a.is_skew() {
                return Err(Error::Construction(format!("E_{} is not skew-symmetric", i + 1)));
            }
            if a.transpose().mul(a) != id {
                return Err(Error::Construction(format!("E_{} is not orthogonal", i + 1)));
            }
            for (j, b) in self.e.iter().enumerate() {
                let ac = a.mul(b).add(&b.mul(a));
                let expect = if i == j { id.scale(-2) } else { IntMatrix::zeros(self.l) };
                if ac != expect {
                    return Err(Error::Construction(format!(
                        "E_{} E_{} + E_{} E_{} != -2 delta Id",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

fn two_by_two(v: [i64; 4]) -> IntMatrix {
    IntMatrix::from_rows(2, v.to_vec()).expect("2x2")
}

/// Irreducible generators on ℝ^{δ(m)}.
fn irreducible_generators(m: usize) -> Vec<IntMatrix> {
    match m {
        1 => Vec::new(),
        2..=8 => {
            let tag = match m {
                2 => AlgebraTag::C,
                3 | 4 => AlgebraTag::H,
                _ => AlgebraTag::O,
            };
            let sc = structure_constants(tag);
            let d = tag.dim();
            (1..m)
                .map(|i| IntMatrix::from_rows(d, sc.left_mul_matrix(i)).expect("square"))
                .collect()
        }
        _ => {
            // Eight anticommuting complex structures on ℝ^16: octonionic left
            // multiplications tensored with a reflection, plus Id ⊗ J.
            let j = two_by_two([0, -1, 1, 0]);
            let z = two_by_two([1, 0, 0, -1]);
            let octo = irreducible_generators(8);
            let mut f: Vec<IntMatrix> = octo.iter().map(|e| e.kron(&z)).collect();
            f.push(IntMatrix::identity(8).kron(&j));
            // ω = f_1⋯f_8 is a symmetric involution anticommuting with every f_i
            let omega = f
                .iter()
                .skip(1)
                .fold(f[0].clone(), |acc, x| acc.mul(x));
            let inner = irreducible_generators(m - 8);
            let inner_dim = delta((m - 8) as i64).expect("m > 8");
            let id_inner = IntMatrix::identity(inner_dim);
            let mut out: Vec<IntMatrix> = f.iter().map(|fi| fi.kron(&id_inner)).collect();
            out.extend(inner.iter().map(|g| omega.kron(g)));
            out
        }
    }
}

/// Generators for `C_{m-1}` on ℝ^{kδ(m)}: `k` copies of the irreducible
/// representation, block-diagonally.
pub fn build_generators(m: usize, k: usize) -> Result<CliffordGenerators> {
    if m < 1 || k < 1 {
        return Err(Error::Domain(format!("need m >= 1 and k >= 1, got m={m}, k={k}")));
    }
    let d = delta(m as i64)?;
    let id_k = IntMatrix::identity(k);
    let e = irreducible_generators(m)
        .iter()
        .map(|g| id_k.kron(g))
        .collect();
    CliffordGenerators::new(m, k * d, e)
}

/// Symmetric `P_0..P_m` on ℝ^{2l} with `P_iP_j + P_jP_i = 2δ_ij Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordSystem {
    m: usize,
    l: usize,
    p: Vec<IntMatrix>,
}

impl CliffordSystem {
    /// Wraps matrices without checking the relations; see [`validate_system`].
    pub fn from_matrices_unchecked(m: usize, l: usize, p: Vec<IntMatrix>) -> Self {
        Self { m, l, p }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.l
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.p
    }

    /// Whether `P_0 P_1 ⋯ P_m = ±Id`; relevant when `m ≡ 0 mod 4`.
    pub fn full_product_is_pm_identity(&self) -> bool {
        let prod = self
            .p
            .iter()
            .skip(1)
            .fold(self.p[0].clone(), |acc, x| acc.mul(x));
        let id = IntMatrix::identity(self.ambient_dim());
        prod == id || prod == id.scale(-1)
    }

    /// The same system with one matrix replaced; used for negative controls.
    pub fn with_matrix(&self, index: usize, replacement: IntMatrix) -> Self {
        let mut p = self.p.clone();
        p[index] = replacement;
        Self { p, ..self.clone() }
    }
}

/// Assembles the Clifford system of a set of generators.
pub fn build_system(g: &CliffordGenerators) -> Result<CliffordSystem> {
    g.validate()?;
    let l = g.l();
    let id = IntMatrix::identity(l);
    let zero = IntMatrix::zeros(l);
    let mut p = vec![
        IntMatrix::block(&id, &zero, &zero, &id.scale(-1)),
        IntMatrix::block(&zero, &id, &id, &zero),
    ];
    for e in g.matrices() {
        p.push(IntMatrix::block(&zero, e, &e.scale(-1), &zero));
    }
    let sys = CliffordSystem { m: g.m(), l, p };
    let report = validate_system(&sys);
    if !report.passed {
        return Err(Error::Construction(format!(
            "assembled system violates the Clifford relations: {:?}",
            report.failures()
        )));
    }
    Ok(sys)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    /// Squared Frobenius norm of `P_iP_j + P_jP_i − 2δ_ij Id`.
    pub residual: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub m: usize,
    pub l: usize,
    pub symmetric: Vec<bool>,
    pub pairs: Vec<PairResidual>,
    pub passed: bool,
}

impl SystemReport {
    /// Human-readable list of the violated conditions.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .symmetric
            .iter()
            .enumerate()
            .filter(|(_, s)| !**s)
            .map(|(i, _)| format!("P_{i} not symmetric"))
            .collect();
        out.extend(
            self.pairs
                .iter()
                .filter(|p| p.residual != 0)
                .map(|p| format!("P_{}P_{} + P_{}P_{} residual {}", p.i, p.j, p.j, p.i, p.residual)),
        );
        out
    }
}

/// Checks symmetry and the anticommutation relations in integer arithmetic.
pub fn validate_system(s: &CliffordSystem) -> SystemReport {
    let n = s.ambient_dim();
    let id2 = IntMatrix::identity(n).scale(2);
    let symmetric: Vec<bool> = s.p.iter().map(|p| p.size() == n && p.is_symmetric()).collect();
    let mut pairs = Vec::new();
    let count_ok = s.p.len() == s.m + 1;
    for i in 0..s.p.len() {
        for j in i..s.p.len() {
            let (a, b) = (&s.p[i], &s.p[j]);
            let residual = if a.size() != n || b.size() != n {
                i64::MAX
            } else {
                let ac = a.mul(b).add(&b.mul(a));
                let target = if i == j { id2.clone() } else { IntMatrix::zeros(n) };
                ac.sub(&target).frobenius2()
            };
            pairs.push(PairResidual { i, j, residual });
        }
    }
    let passed = count_ok && symmetric.iter().all(|&b| b) && pairs.iter().all(|p| p.residual == 0);
    SystemReport {
        m: s.m,
        l: s.l,
        symmetric,
        pairs,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_table() {
        let expect = [1, 2, 4, 4, 8, 8, 8, 8];
        for (m, d) in expect.iter().enumerate() {
            assert_eq!(delta(m as i64 + 1).unwrap(), *d);
        }
        assert_eq!(delta(10).unwrap(), 32);
        assert_eq!(delta(17).unwrap(), 256 * delta(1).unwrap());
        assert!(matches!(delta(0), Err(Error::Domain(_))));
        assert!(delta(-3).is_err());
    }

    #[test]
    fn trivial_generators() {
        let g = build_generators(1, 3).unwrap();
        assert_eq!(g.l(), 3);
        assert!(g.matrices().is_empty());
    }

    /// Exhaustive: among all 2×2 matrices with entries in {−1,0,1}, the skew
    /// orthogonal ones squaring to −Id are exactly ±J.
    #[test]
    fn m2_generator_is_rotation_up_to_sign() {
        let g = build_generators(2, 1).unwrap();
        assert_eq!(g.l(), 2);
        let e = &g.matrices()[0];
        let mut found = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    for d in -1..=1 {
                        let m = two_by_two([a, b, c, d]);
                        if m.is_skew() && m.mul(&m) == IntMatrix::identity(2).scale(-1) {
                            found.push(m);
                        }
                    }
                }
            }
        }
        assert_eq!(found.len(), 2);
        assert!(found.contains(e));
    }

    #[test]
    fn generators_satisfy_relations_for_many_m() {
        for m in 1..=12 {
            for k in 1..=2 {
                let g = build_generators(m, k).unwrap();
                assert_eq!(g.l(), k * delta(m as i64).unwrap());
                assert_eq!(g.matrices().len(), m - 1);
                g.validate().unwrap();
            }
        }
        let g = build_generators(5, 1).unwrap();
        assert_eq!(g.l(), 8);
        assert_eq!(g.matrices().len(), 4);
    }

    #[test]
    fn smallest_system() {
        let s = build_system(&build_generators(1, 1).unwrap()).unwrap();
        assert_eq!(s.matrices()[0], two_by_two([1, 0, 0, -1]));
        assert_eq!(s.matrices()[1], two_by_two([0, 1, 1, 0]));
    }

    #[test]
    fn systems_are_traceless_and_valid() {
        for (m, k) in [(2, 2), (3, 2), (4, 2), (5, 1), (9, 1)] {
            let s = build_system(&build_generators(m, k).unwrap()).unwrap();
            assert_eq!(s.matrices().len(), m + 1);
            assert!(validate_system(&s).passed);
            for p in s.matrices() {
                assert_eq!(p.trace(), 0);
            }
        }
    }

    #[test]
    fn identity_p0_fails() {
        let s = build_system(&build_generators(2, 2).unwrap()).unwrap();
        let bad = s.with_matrix(0, IntMatrix::identity(s.ambient_dim()));
        let r = validate_system(&bad);
        assert!(!r.passed);
        let p01 = r.pairs.iter().find(|p| p.i == 0 && p.j == 1).unwrap();
        assert_ne!(p01.residual, 0);
    }

    #[test]
    fn sign_flip_is_localized() {
        let s = build_system(&build_generators(3, 1).unwrap()).unwrap();
        let n = s.ambient_dim();
        // flip one symmetric pair of entries of P_2
        let mut p2 = s.matrices()[2].clone();
        let (r, c) = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| p2.get(r, c) != 0)
            .unwrap();
        p2.set(r, c, -p2.get(r, c));
        if r != c {
            p2.set(c, r, -p2.get(c, r));
        }
        let report = validate_system(&s.with_matrix(2, p2));
        assert!(!report.passed);
        for p in &report.pairs {
            if p.i != 2 && p.j != 2 {
                assert_eq!(p.residual, 0);
            }
        }
        assert!(report.pairs.iter().any(|p| (p.i == 2 || p.j == 2) && p.residual != 0));
    }

    #[test]
    fn bad_generators_rejected() {
        let bad = CliffordGenerators::new(2, 2, vec![IntMatrix::identity(2)]);
        assert!(matches!(bad, Err(Error::Construction(_))));
        let wrong_count = CliffordGenerators::new(3, 2, vec![two_by_two([0, -1, 1, 0])]);
        assert!(wrong_count.is_err());
    }

    #[test]
    fn csv_export() {
        assert_eq!(two_by_two([0, -1, 1, 0]).to_csv(), "0,-1\n1,0\n");
    }
}
