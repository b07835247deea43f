//! Symmetric 3-tensors `Υ` on ℝⁿ and the identities
//! (1) `Υ_{ijk} = Υ_{(ijk)}`, (2) `Υ_{ijj} = 0`,
//! (3) `Υ_{ijk}Υ_{lmi} + Υ_{lji}Υ_{kmi} + Υ_{kli}Υ_{jmi} = g_{jk}g_{lm} + g_{lj}g_{km} + g_{kl}g_{jm}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::{Poly, ScalarQ3};

/// Totally symmetric tensor stored once per sorted index triple.
#[derive(Clone, Debug, PartialEq)]
pub struct UpsilonTensor {
    n: usize,
    entries: Vec<ScalarQ3>,
}

fn sorted3(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let mut a = [i, j, k];
    a.sort_unstable();
    (a[0], a[1], a[2])
}

/// Position of `i ≤ j ≤ k` in the packed storage.
fn packed_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    // triples with first index < i, then with first = i and second < j
    let tet = |m: usize| m * (m + 1) * (m + 2) / 6;
    let tri = |m: usize| m * (m + 1) / 2;
    let before_i = tet(n) - tet(n - i);
    let rem = n - i;
    let before_j = tri(rem) - tri(rem - (j - i));
    before_i + before_j + (k - j)
}

impl UpsilonTensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![ScalarQ3::zero(); n * (n + 1) * (n + 2) / 6],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &ScalarQ3 {
        let (a, b, c) = sorted3(i, j, k);
        &self.entries[packed_index(self.n, a, b, c)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: ScalarQ3) {
        let (a, b, c) = sorted3(i, j, k);
        let idx = packed_index(self.n, a, b, c);
        self.entries[idx] = v;
    }

    pub fn scaled(&self, s: &ScalarQ3) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// `Σ_{ijk} Υ_{ijk} x_i x_j x_k` as a polynomial.
    pub fn contract(&self) -> Poly {
        let n = self.n;
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let v = &self.entries[packed_index(n, i, j, k)];
                    if v.is_zero() {
                        continue;
                    }
                    let orderings = match (i == j, j == k) {
                        (true, true) => 1,
                        (true, false) | (false, true) => 3,
                        (false, false) => 6,
                    };
                    let mut e = vec![0u32; n];
                    e[i] += 1;
                    e[j] += 1;
                    e[k] += 1;
                    terms.push((e, v * &ScalarQ3::from_int(orderings)));
                }
            }
        }
        Poly::from_terms(n, terms).expect("exponent vectors have length n")
    }

    /// Nonzero `(i, Υ_{abi})` for every `a ≤ b`.
    fn rows(&self) -> Vec<Vec<(usize, ScalarQ3)>> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for a in 0..n {
            for b in a..n {
                out.push(
                    (0..n)
                        .filter_map(|i| {
                            let v = self.get(a, b, i);
                            (!v.is_zero()).then(|| (i, v.clone()))
                        })
                        .collect(),
                );
            }
        }
        out
    }
}

/// `Υ_{ijk} = (1/6)∂³F/∂x_i∂x_j∂x_k` for a cubic `F`; re-contraction is checked.
pub fn extract_upsilon(f: &Poly) -> Result<UpsilonTensor> {
    if !f.is_homogeneous(3) {
        return Err(Error::Precondition("Upsilon needs a homogeneous cubic".into()));
    }
    let n = f.num_vars();
    let mut u = UpsilonTensor::zeros(n);
    for (m, c) in f.terms() {
        let mut idx = Vec::with_capacity(3);
        for (i, &e) in m.exponents().iter().enumerate() {
            idx.extend(std::iter::repeat_n(i, e as usize));
        }
        // ∂³ of x^e is e! (product of factorials); divide by 6
        let fact: i64 = m.exponents().iter().map(|&e| (1..=e as i64).product::<i64>()).product();
        u.set(idx[0], idx[1], idx[2], c * &ScalarQ3::ratio(fact, 6));
    }
    if (&u.contract() - f).is_zero() {
        Ok(u)
    } else {
        Err(Error::Inconsistency("re-contraction of Upsilon does not reproduce F".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub indices: [usize; 4],
    pub lhs: ScalarQ3,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionsReport {
    pub n: usize,
    pub symmetric: bool,
    pub trace_free: bool,
    pub trace_failures: Vec<usize>,
    pub quadratic_identity: bool,
    pub tuples_checked: usize,
    pub tuple_failures: usize,
    pub first_counterexample: Option<Counterexample>,
    /// `Σ_{j,i} Υ_{lji}Υ_{mji} = (n+2)/2·δ_{lm}`, implied by (2) and (3).
    pub trace_consistency: bool,
}

impl ConditionsReport {
    pub fn passed(&self) -> bool {
        self.symmetric && self.trace_free && self.quadratic_identity && self.trace_consistency
    }
}

fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

/// Exact check of (1)–(3) over every ordered 4-tuple `(j, k, l, m)`.
pub fn check_conditions(u: &UpsilonTensor) -> ConditionsReport {
    let n = u.n;
    let trace_failures: Vec<usize> = (0..n)
        .filter(|&i| {
            let mut s = ScalarQ3::zero();
            for j in 0..n {
                s += u.get(i, j, j);
            }
            !s.is_zero()
        })
        .collect();

    // S(ab, cd) = Σ_i Υ_{abi} Υ_{cdi}, indexed by packed pairs
    let rows = u.rows();
    let pair = |a: usize, b: usize| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        a * n - a * (a + 1) / 2 + b
    };
    let np = rows.len();
    let s: Vec<ScalarQ3> = (0..np * np)
        .into_par_iter()
        .map(|idx| {
            let (r1, r2) = (&rows[idx / np], &rows[idx % np]);
            let mut acc = ScalarQ3::zero();
            let (mut p, mut q) = (0, 0);
            while p < r1.len() && q < r2.len() {
                match r1[p].0.cmp(&r2[q].0) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => {
                        acc += &(&r1[p].1 * &r2[q].1);
                        p += 1;
                        q += 1;
                    }
                }
            }
            acc
        })
        .collect();
    let s_at = |a: usize, b: usize, c: usize, d: usize| &s[pair(a, b) * np + pair(c, d)];

    let (failures, first) = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut count = 0usize;
            let mut first: Option<Counterexample> = None;
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let lhs = &(s_at(j, k, l, m) + s_at(l, j, k, m)) + s_at(k, l, j, m);
                        let rhs = delta(j, k) * delta(l, m) + delta(l, j) * delta(k, m) + delta(k, l) * delta(j, m);
                        if lhs != ScalarQ3::from_int(rhs) {
                            count += 1;
                            if first.is_none() {
                                first = Some(Counterexample {
                                    indices: [j, k, l, m],
                                    lhs,
                                    rhs,
                                });
                            }
                        }
                    }
                }
            }
            (count, first)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0usize, None), |(c, f), (c2, f2)| (c + c2, f.or(f2)));

    let half = ScalarQ3::ratio(n as i64 + 2, 2);
    let trace_consistency = (0..n).all(|l| {
        (0..n).all(|m| {
            let mut acc = ScalarQ3::zero();
            for j in 0..n {
                acc += s_at(l, j, m, j);
            }
            let expect = if l == m { half.clone() } else { ScalarQ3::zero() };
            acc == expect
        })
    });

    ConditionsReport {
        n,
        symmetric: true,
        trace_free: trace_failures.is_empty(),
        trace_failures,
        quadratic_identity: failures == 0,
        tuples_checked: n * n * n * n,
        tuple_failures: failures,
        first_counterexample: first,
        trace_consistency,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionEntry {
    pub k: usize,
    pub n: usize,
    pub group: &'static str,
    pub compact_model: &'static str,
    /// Transcription remark where the printed form differs from the stored one.
    pub note: Option<&'static str>,
}

/// Dimensions `n = 3k + 2`, `k ∈ {1,2,4,8}`, where `Υ` exists, with its stabilizer
/// and the symmetric space it comes from.
pub fn dimension_catalog() -> Vec<DimensionEntry> {
    vec![
        DimensionEntry {
            k: 1,
            n: 5,
            group: "SO(3)",
            compact_model: "SU(3)/SO(3)",
            note: None,
        },
        DimensionEntry {
            k: 2,
            n: 8,
            group: "SU(3)",
            compact_model: "SU(3)xSU(3)/SU(3)",
            note: Some("printed as SU(3)/SU(3)/SU(3)"),
        },
        DimensionEntry {
            k: 4,
            n: 14,
            group: "Sp(3)",
            compact_model: "SU(6)/Sp(3)",
            note: None,
        },
        DimensionEntry {
            k: 8,
            n: 26,
            group: "F4",
            compact_model: "E6/F4",
            note: Some("printed as F_4(3)"),
        },
    ]
}

pub fn catalog_entry_for_k(k: usize) -> Option<DimensionEntry> {
    dimension_catalog().into_iter().find(|e| e.k == k)
}
