//! Tabulated data: homogeneous families from rank-2 symmetric spaces, FKM
//! multiplicities, the FKM inhomogeneity criterion, and the shape operator of
//! the principal SO(3)-orbit in `SU(3)/SO(3)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::clifford::delta;
use crate::error::{Error, Result};
use crate::polyalg::ScalarQ3;

/// `a·n + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl Affine {
    const fn c(b: i64) -> Self {
        Self { a: 0, b }
    }

    const fn n(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn at(&self, n: i64) -> i64 {
        self.a * n + self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetricSpaceRow {
    pub g: &'static str,
    pub h: &'static str,
    /// Smallest parameter `n` for parametric rows.
    pub n_min: Option<i64>,
    pub dim_m: Affine,
    pub p: i64,
    /// Multiplicities `m1` (odd-indexed) and `m2` (even-indexed); equal for odd `p`.
    pub m1: Affine,
    pub m2: Affine,
    pub printed: &'static str,
    /// Rows known to be misprinted and excluded from the self-check.
    pub exempt: Option<&'static str>,
}

impl SymmetricSpaceRow {
    fn params(&self) -> Vec<i64> {
        match self.n_min {
            Some(lo) => (lo..lo + 20).collect(),
            None => vec![0],
        }
    }

    /// `dim M = p(m1 + m2)/2` at every tested parameter value.
    pub fn dimension_consistent(&self) -> bool {
        self.params()
            .into_iter()
            .all(|n| 2 * self.dim_m.at(n) == self.p * (self.m1.at(n) + self.m2.at(n)))
    }
}

/// Homogeneous isoparametric hypersurfaces as isotropy orbits of rank-2 spaces.
pub fn rank2_table() -> Vec<SymmetricSpaceRow> {
    use Affine as A;
    let row = |g, h, n_min, dim_m, p, m1, m2, printed, exempt| SymmetricSpaceRow {
        g,
        h,
        n_min,
        dim_m,
        p,
        m1,
        m2,
        printed,
        exempt,
    };
    vec![
        row("su(3)", "so(3)", None, A::c(3), 3, A::c(1), A::c(1), "m_i=1", None),
        row("su(3)+su(3)", "su(3)", None, A::c(6), 3, A::c(2), A::c(2), "m_i=2", None),
        row("su(6)", "sp(3)", None, A::c(12), 3, A::c(3), A::c(3), "m_i=3", None),
        row(
            "e6",
            "f4",
            None,
            A::c(24),
            3,
            A::c(3),
            A::c(3),
            "m_i=3",
            Some("printed m_i=3 contradicts dim M = 24 and the 26-dimensional cubic, which need m_i=8"),
        ),
        row("so(n+2)", "so(n)+so(2)", Some(3), A::n(2, -2), 4, A::c(1), A::n(1, -2), "m1=m3=1; m2=m4=n-2", None),
        row("su(n+2)", "su(n)+su(2)", Some(2), A::n(4, -2), 4, A::c(2), A::n(2, -3), "m1=m3=2; m2=m4=2n-3", None),
        row("sp(n+2)", "sp(n)+sp(2)", Some(2), A::n(8, -2), 4, A::c(4), A::n(4, -5), "m1=m3=4; m2=m4=4n-5", None),
        row("so(5)+so(5)", "so(5)", None, A::c(8), 4, A::c(2), A::c(2), "m_i=2", None),
        row("so(10)", "u(5)", None, A::c(18), 4, A::c(4), A::c(5), "m1=m3=4; m2=m4=5", None),
        row("e6", "so(10)+R", None, A::c(30), 4, A::c(6), A::c(9), "m1=m3=6; m2=m4=9", None),
        row("g2", "so(4)", None, A::c(6), 6, A::c(1), A::c(1), "m_i=1", None),
        row("g2+g2", "g2", None, A::c(12), 6, A::c(2), A::c(2), "m_i=2", None),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub g: &'static str,
    pub h: &'static str,
    pub consistent: bool,
    pub exempt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank2SelfCheck {
    pub rows: Vec<RowCheck>,
    /// Inconsistent rows that are not exempt.
    pub failures: Vec<String>,
    pub exempted: Vec<String>,
    pub passed: bool,
}

pub fn rank2_self_check() -> Rank2SelfCheck {
    let table = rank2_table();
    let rows: Vec<RowCheck> = table
        .iter()
        .map(|r| RowCheck {
            g: r.g,
            h: r.h,
            consistent: r.dimension_consistent(),
            exempt: r.exempt.is_some(),
        })
        .collect();
    let label = |r: &RowCheck| format!("{}/{}", r.g, r.h);
    let failures: Vec<String> = rows.iter().filter(|r| !r.consistent && !r.exempt).map(label).collect();
    let exempted: Vec<String> = rows.iter().filter(|r| r.exempt).map(label).collect();
    Rank2SelfCheck {
        passed: failures.is_empty(),
        rows,
        failures,
        exempted,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FKMEntry {
    pub m: i64,
    pub k: i64,
    pub delta_m: i64,
    /// `(m, kδ(m) − m − 1)`, or `None` when the second entry is not positive.
    pub pair: Option<(i64, i64)>,
}

/// FKM multiplicities for `1 ≤ k ≤ max_k`, `1 ≤ m ≤ max_m`.
pub fn fkm_table(max_k: i64, max_m: i64) -> Result<Vec<FKMEntry>> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for m in 1..=max_m {
            let d = delta(m)? as i64;
            let m2 = k * d - m - 1;
            out.push(FKMEntry {
                m,
                k,
                delta_m: d,
                pair: (m2 > 0).then_some((m, m2)),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrintedCell {
    pub k: i64,
    pub m: i64,
    /// `None` for a dash.
    pub printed: Option<(i64, i64)>,
}

/// The low-dimensional FKM table as printed, `k = 1..5`, `m = 1..9`.
/// The unreadable cell at `k = 5, m = 9` is omitted.
pub fn printed_fkm_table() -> Vec<PrintedCell> {
    const D: Option<(i64, i64)> = None;
    let rows: [[Option<(i64, i64)>; 9]; 5] = [
        [D, D, D, D, Some((5, 2)), Some((6, 1)), D, D, Some((9, 6))],
        [D, Some((2, 1)), Some((3, 4)), Some((4, 3)), Some((5, 10)), Some((6, 9)), Some((7, 8)), Some((8, 7)), Some((9, 22))],
        [Some((1, 1)), Some((2, 3)), Some((3, 8)), Some((4, 7)), Some((5, 18)), Some((6, 17)), Some((7, 16)), Some((8, 15)), Some((9, 38))],
        [Some((1, 2)), Some((2, 5)), Some((3, 12)), Some((4, 11)), Some((5, 26)), Some((6, 25)), Some((7, 24)), Some((8, 23)), Some((9, 54))],
        [Some((1, 3)), Some((2, 7)), Some((3, 16)), Some((4, 17)), Some((5, 34)), Some((6, 33)), Some((7, 32)), Some((8, 31)), D],
    ];
    let mut out = Vec::new();
    for (ki, row) in rows.iter().enumerate() {
        for (mi, cell) in row.iter().enumerate() {
            let (k, m) = (ki as i64 + 1, mi as i64 + 1);
            if k == 5 && m == 9 {
                continue;
            }
            out.push(PrintedCell { k, m, printed: *cell });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FkmComparison {
    pub cells_compared: usize,
    pub non_dash_cells: usize,
    pub mismatches: Vec<(PrintedCell, Option<(i64, i64)>)>,
    pub passed: bool,
}

/// Regenerates every printed cell (dashes included) from the formula.
pub fn compare_printed_fkm() -> Result<FkmComparison> {
    let generated = fkm_table(5, 9)?;
    let printed = printed_fkm_table();
    let mut mismatches = Vec::new();
    for cell in &printed {
        let g = generated
            .iter()
            .find(|e| e.k == cell.k && e.m == cell.m)
            .expect("generated table covers the printed range");
        if g.pair != cell.printed {
            mismatches.push((*cell, g.pair));
        }
    }
    Ok(FkmComparison {
        cells_compared: printed.len(),
        non_dash_cells: printed.iter().filter(|c| c.printed.is_some()).count(),
        passed: mismatches.is_empty(),
        mismatches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inhomogeneous,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InhomogeneityReport {
    pub m1: i64,
    pub m2: i64,
    pub m: i64,
    pub inequality_holds: bool,
    /// For `m = 4`: whether `P_0 ⋯ P_4 ≠ ±Id` was supplied as true.
    pub side_condition: Option<bool>,
    pub verdict: Verdict,
    pub caution: Option<String>,
}

/// Homogeneous `p = 4` multiplicity pairs `(m1, m2)` for parametric rows up to `n = 64`.
fn homogeneous_p4_pairs() -> Vec<(i64, i64, String)> {
    let mut out = Vec::new();
    for r in rank2_table().iter().filter(|r| r.p == 4) {
        let ns: Vec<i64> = match r.n_min {
            Some(lo) => (lo..65).collect(),
            None => vec![0],
        };
        for n in ns {
            out.push((r.m1.at(n), r.m2.at(n), format!("{}/{}", r.g, r.h).replace('n', &n.to_string())));
        }
    }
    out
}

/// `3 ≤ 3m1 ≤ m2 + 9`, plus for `m = 4` the caller's statement that the
/// product of all `P_i` is not `±Id`, implies inhomogeneity. The criterion is
/// one-directional: failure means nothing.
pub fn inhomogeneity_predicate(m1: i64, m2: i64, m: i64, product_not_pm_identity: Option<bool>) -> Result<InhomogeneityReport> {
    if m1 <= 0 || m2 <= 0 || m <= 0 {
        return Err(Error::Domain(format!("multiplicities must be positive, got ({m1}, {m2}), m = {m}")));
    }
    let inequality_holds = 3 <= 3 * m1 && 3 * m1 <= m2 + 9;
    let side_condition = (m == 4).then_some(product_not_pm_identity.unwrap_or(false));
    let verdict = if inequality_holds && side_condition.unwrap_or(true) {
        Verdict::Inhomogeneous
    } else {
        Verdict::Inconclusive
    };
    let caution = (verdict == Verdict::Inhomogeneous)
        .then(|| {
            homogeneous_p4_pairs()
                .into_iter()
                .find(|(a, b, _)| (*a, *b) == (m1, m2))
                .map(|(_, _, name)| {
                    format!("({m1}, {m2}) are also the multiplicities of the homogeneous family from {name}")
                })
        })
        .flatten();
    Ok(InhomogeneityReport {
        m1,
        m2,
        m,
        inequality_holds,
        side_condition,
        verdict,
        caution,
    })
}

/// 3×3 exact matrix over ℚ(√3), row-major.
type M3 = [[ScalarQ3; 3]; 3];

fn m3_zero() -> M3 {
    std::array::from_fn(|_| std::array::from_fn(|_| ScalarQ3::zero()))
}

fn m3_mul(a: &M3, b: &M3) -> M3 {
    let mut c = m3_zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += &(&a[i][k] * &b[k][j]);
            }
        }
    }
    c
}

fn bracket(a: &M3, b: &M3) -> M3 {
    let ab = m3_mul(a, b);
    let ba = m3_mul(b, a);
    std::array::from_fn(|i| std::array::from_fn(|j| &ab[i][j] - &ba[i][j]))
}

fn trace_pairing(a: &M3, b: &M3) -> ScalarQ3 {
    let mut s = ScalarQ3::zero();
    for i in 0..3 {
        for j in 0..3 {
            s += &(&a[i][j] * &b[j][i]);
        }
    }
    s
}

fn diag(d: [i64; 3]) -> M3 {
    let mut m = m3_zero();
    for i in 0..3 {
        m[i][i] = ScalarQ3::from_int(d[i]);
    }
    m
}

fn scale3(m: &M3, s: &ScalarQ3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| &m[i][j] * s))
}

/// Solves `G·M = R` for 3×3 `G` by Gauss–Jordan elimination over ℚ(√3).
fn solve3(mut g: M3, mut r: M3) -> Result<M3> {
    for col in 0..3 {
        let piv = (col..3)
            .find(|&i| !g[i][col].is_zero())
            .ok_or_else(|| Error::Inconsistency("tangent vectors are linearly dependent".into()))?;
        g.swap(col, piv);
        r.swap(col, piv);
        let inv = g[col][col].inv().expect("pivot is nonzero");
        for j in 0..3 {
            g[col][j] = &g[col][j] * &inv;
            r[col][j] = &r[col][j] * &inv;
        }
        for i in 0..3 {
            if i != col && !g[i][col].is_zero() {
                let f = g[i][col].clone();
                for j in 0..3 {
                    g[i][j] = &g[i][j] - &(&f * &g[col][j]);
                    r[i][j] = &r[i][j] - &(&f * &r[col][j]);
                }
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitNormalization {
    pub label: &'static str,
    /// The invariant inner product is `metric_scale · tr(PQ)` on real symmetric
    /// representatives of `𝔭`.
    pub metric_scale: i64,
    /// `x = x_scale · diag(1, −1, 0)` and `ξ = xi_scale · diag(1, 1, −2)`.
    pub x_scale: ScalarQ3,
    pub xi_scale: ScalarQ3,
    /// The operator `[X, x] ↦ −[X, ξ]` in the basis `[X_01, x], [X_02, x], [X_12, x]`.
    pub matrix: Vec<Vec<ScalarQ3>>,
    /// Eigenvalues in decreasing order.
    pub eigenvalues: Vec<ScalarQ3>,
    pub eigenvalues_f64: Vec<f64>,
    /// `cot θ = λ`, `θ ∈ (0, π)`, increasing.
    pub thetas: Vec<f64>,
    pub spacings: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Su3OrbitReport {
    pub printed_normalization: OrbitNormalization,
    pub trace_normalization: OrbitNormalization,
    pub printed_values: [String; 3],
    pub caveat: String,
    pub symmetric_about_zero: bool,
    pub contains_zero: bool,
}

fn orbit_operator(label: &'static str, metric_scale: i64, x_scale: ScalarQ3, xi_scale: ScalarQ3) -> Result<OrbitNormalization> {
    let x = scale3(&diag([1, -1, 0]), &x_scale);
    let xi = scale3(&diag([1, 1, -2]), &xi_scale);
    let so3: Vec<M3> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| {
            let mut m = m3_zero();
            m[a][b] = ScalarQ3::one();
            m[b][a] = ScalarQ3::from_int(-1);
            m
        })
        .collect();
    // 𝔭 = i·Sym₀(3); the factor i is common to x, ξ and the tangent vectors
    let tangent: Vec<M3> = so3.iter().map(|xa| bracket(xa, &x)).collect();
    let image: Vec<M3> = so3.iter().map(|xa| scale3(&bracket(xa, &xi), &ScalarQ3::from_int(-1))).collect();
    let metric = ScalarQ3::from_int(metric_scale);
    let gram: M3 = std::array::from_fn(|k| std::array::from_fn(|i| &trace_pairing(&tangent[k], &tangent[i]) * &metric));
    let rhs: M3 = std::array::from_fn(|k| std::array::from_fn(|j| &trace_pairing(&tangent[k], &image[j]) * &metric));
    let m = solve3(gram, rhs)?;
    // A([X_j, x]) = Σ_i M_ij [X_i, x] must reproduce the image exactly
    for j in 0..3 {
        for r in 0..3 {
            for c in 0..3 {
                let mut v = ScalarQ3::zero();
                for i in 0..3 {
                    v += &(&m[i][j] * &tangent[i][r][c]);
                }
                if v != image[j][r][c] {
                    return Err(Error::Inconsistency("-[X, xi] leaves the tangent space".into()));
                }
            }
        }
    }
    let off_diagonal_zero = (0..3).all(|i| (0..3).all(|j| i == j || m[i][j].is_zero()));
    if !off_diagonal_zero {
        return Err(Error::Inconsistency("shape operator is not diagonal in the root basis".into()));
    }
    let mut eigenvalues: Vec<ScalarQ3> = (0..3).map(|i| m[i][i].clone()).collect();
    eigenvalues.sort_by(|a, b| (b - a).signum().cmp(&0));
    let eigenvalues_f64: Vec<f64> = eigenvalues.iter().map(ScalarQ3::to_f64).collect();
    let thetas: Vec<f64> = eigenvalues_f64.iter().map(|&l| 1f64.atan2(l)).collect();
    let spacings = thetas.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(OrbitNormalization {
        label,
        metric_scale,
        x_scale,
        xi_scale,
        matrix: m.iter().map(|r| r.to_vec()).collect(),
        eigenvalues,
        eigenvalues_f64,
        thetas,
        spacings,
    })
}

/// Shape operator of the principal orbit through a diagonal `x` with normal
/// `ξ ∝ diag(i, i, −2i)`, under two normalizations of `|x| = |ξ| = 1`.
pub fn su3_orbit_spectrum() -> Result<Su3OrbitReport> {
    let rational = |num: i64, den: i64| ScalarQ3::ratio(num, den);
    let sqrt = |num: i64, den: i64| {
        ScalarQ3::sqrt_of_rational(&crate::polyalg::rat(num, den)).ok_or_else(|| Error::Inconsistency(format!("sqrt({num}/{den}) not in Q(sqrt3)")))
    };
    // printed ξ = diag(i,i,−2i)/6 is unit for 6·tr; then |x| = 1 needs 12 s² = 1
    let printed = orbit_operator("printed xi, metric 6 tr", 6, sqrt(1, 12)?, rational(1, 6))?;
    // trace form: |diag(1,−1,0)|² = 2, |diag(1,1,−2)|² = 6; only the ratio enters
    let ratio = sqrt(2, 6)?;
    let trace = orbit_operator("unit x and xi, metric tr", 1, ScalarQ3::one(), ratio)?;
    let ev = &trace.eigenvalues;
    Ok(Su3OrbitReport {
        symmetric_about_zero: &ev[0] + &ev[2] == ScalarQ3::zero(),
        contains_zero: ev[1].is_zero(),
        printed_values: ["1/sqrt3".into(), "0".into(), "-1/sqrt3".into()],
        caveat: "the quoted values +-1/sqrt3 are three times smaller than the curvatures of a unit normal on a unit-radius orbit; they correspond to |x| = 3|xi|. With |x| = |xi| = 1 the curvatures are +-sqrt3 and 0, cot-angles pi/6, pi/2, 5pi/6, spaced by pi/3".into(),
        printed_normalization: printed,
        trace_normalization: trace,
    })
}

/// `π/3`, the expected cot-angle spacing of a `p = 3` family.
pub const P3_SPACING: f64 = PI / 3.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank2_rows() {
        let t = rank2_table();
        assert_eq!(t.len(), 12);
        assert_eq!((t[0].dim_m.at(0), t[0].p, t[0].m1.at(0)), (3, 3, 1));
        assert!(t[3].exempt.is_some());
        assert_eq!((t[10].g, t[10].dim_m.at(0), t[10].p), ("g2", 6, 6));
        assert!(t[4].dimension_consistent());
    }

    #[test]
    fn fkm_generated_examples() {
        let t = fkm_table(5, 9).unwrap();
        let get = |m, k| t.iter().find(|e| e.m == m && e.k == k).unwrap().pair;
        assert_eq!(get(4, 2), Some((4, 3)));
        assert_eq!(get(5, 1), Some((5, 2)));
        assert_eq!(get(1, 1), None);
        assert_eq!(get(9, 1), Some((9, 6)));
    }

    #[test]
    fn printed_table_shape() {
        let p = printed_fkm_table();
        assert_eq!(p.len(), 44);
        assert_eq!(p.iter().filter(|c| c.printed.is_none()).count(), 7);
    }

    #[test]
    fn predicate_examples() {
        let r = inhomogeneity_predicate(3, 4, 3, None).unwrap();
        assert_eq!(r.verdict, Verdict::Inhomogeneous);
        assert!(r.caution.is_none());
        assert_eq!(inhomogeneity_predicate(5, 2, 5, None).unwrap().verdict, Verdict::Inconclusive);
        let c = inhomogeneity_predicate(1, 1, 1, None).unwrap();
        assert_eq!(c.verdict, Verdict::Inhomogeneous);
        assert!(c.caution.is_some());
        assert!(inhomogeneity_predicate(0, 1, 1, None).is_err());
    }

    #[test]
    fn predicate_m4_side_condition() {
        assert_eq!(inhomogeneity_predicate(4, 3, 4, None).unwrap().verdict, Verdict::Inconclusive);
        assert_eq!(inhomogeneity_predicate(4, 3, 4, Some(false)).unwrap().verdict, Verdict::Inconclusive);
        assert_eq!(inhomogeneity_predicate(4, 3, 4, Some(true)).unwrap().verdict, Verdict::Inhomogeneous);
    }

    #[test]
    fn su3_orbit() {
        let r = su3_orbit_spectrum().unwrap();
        let s3 = ScalarQ3::sqrt3();
        for norm in [&r.printed_normalization, &r.trace_normalization] {
            assert_eq!(norm.eigenvalues, vec![s3.clone(), ScalarQ3::zero(), -&s3]);
            for d in &norm.spacings {
                assert!((d - P3_SPACING).abs() < 1e-12);
            }
        }
        assert!(r.symmetric_about_zero && r.contains_zero);
    }
}
