//! Sparse multivariate polynomials over ℚ(√3).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::ScalarQ3;
use crate::error::{Error, Result};

/// Exponent vector of a monomial. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Self(vec![0; num_vars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A polynomial in `num_vars` variables with exact coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial is exactly the
/// empty term map. Variable indices are 0-based throughout the API.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Monomial, ScalarQ3>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: ScalarQ3) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::one(num_vars), c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Result<Self> {
        check_index(num_vars, i)?;
        let mut e = vec![0; num_vars];
        e[i] = 1;
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial(e), ScalarQ3::one());
        Ok(p)
    }

    /// `c · x^e`.
    pub fn monomial(exponents: Vec<u32>, c: ScalarQ3) -> Self {
        let n = exponents.len();
        let mut p = Self::zero(n);
        p.add_term(Monomial(exponents), c);
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, ScalarQ3)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::Structural(format!(
                    "monomial has {} exponents, polynomial has {} variables",
                    e.len(),
                    num_vars
                )));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// `Σ x_i²` over all variables.
    pub fn norm_squared(num_vars: usize) -> Self {
        Self::sum_of_squares(num_vars, 0..num_vars)
    }

    /// `Σ_{i ∈ range} x_i²`.
    pub fn sum_of_squares(num_vars: usize, range: std::ops::Range<usize>) -> Self {
        let mut p = Self::zero(num_vars);
        for i in range {
            let mut e = vec![0; num_vars];
            e[i] = 2;
            p.add_term(Monomial(e), ScalarQ3::one());
        }
        p
    }

    /// The quadratic form `⟨M x, x⟩` of a square integer matrix given row-major.
    pub fn quadratic_form(num_vars: usize, matrix: &[i64]) -> Result<Self> {
        if matrix.len() != num_vars * num_vars {
            return Err(Error::Structural(format!(
                "matrix has {} entries, expected {}",
                matrix.len(),
                num_vars * num_vars
            )));
        }
        let mut p = Self::zero(num_vars);
        for i in 0..num_vars {
            for j in 0..num_vars {
                let v = matrix[i * num_vars + j];
                if v != 0 {
                    let mut e = vec![0; num_vars];
                    e[i] += 1;
                    e[j] += 1;
                    p.add_term(Monomial(e), ScalarQ3::from_int(v));
                }
            }
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ScalarQ3)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> ScalarQ3 {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// The zero polynomial counts as homogeneous of every degree.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    fn add_term(&mut self, m: Monomial, c: ScalarQ3) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &Poly) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::Structural(format!(
                "variable count mismatch: {} vs {}",
                self.num_vars, other.num_vars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        let mut acc: BTreeMap<Monomial, ScalarQ3> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = c1 * c2;
                *acc.entry(m1.times(m2)).or_default() += &prod;
            }
        }
        Ok(Self::from_accumulator(self.num_vars, acc))
    }

    /// `p²`, using the symmetry of the cross terms.
    pub fn square(&self) -> Poly {
        let terms: Vec<_> = self.terms.iter().collect();
        let two = ScalarQ3::from_int(2);
        let mut acc: BTreeMap<Monomial, ScalarQ3> = BTreeMap::new();
        for (i, (m1, c1)) in terms.iter().enumerate() {
            *acc.entry(m1.times(m1)).or_default() += &(*c1 * *c1);
            for (m2, c2) in &terms[i + 1..] {
                let prod = &(*c1 * *c2) * &two;
                *acc.entry(m1.times(m2)).or_default() += &prod;
            }
        }
        Self::from_accumulator(self.num_vars, acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.num_vars, ScalarQ3::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn from_accumulator(num_vars: usize, acc: BTreeMap<Monomial, ScalarQ3>) -> Poly {
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Poly { num_vars, terms }
    }

    pub fn scale(&self, c: &ScalarQ3) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.num_vars);
        }
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// `∂p/∂x_i` (0-based `i`).
    pub fn differentiate(&self, i: usize) -> Result<Poly> {
        check_index(self.num_vars, i)?;
        let mut out = Poly::zero(self.num_vars);
        for (m, c) in &self.terms {
            let k = m.0[i];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            out.add_term(Monomial(e), c * &ScalarQ3::from_int(k as i64));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.num_vars)
            .map(|i| self.differentiate(i).expect("index in range"))
            .collect()
    }

    /// `Σ_i ∂²p/∂x_i²`.
    pub fn laplacian(&self) -> Poly {
        let mut out = Poly::zero(self.num_vars);
        for (m, c) in &self.terms {
            for i in 0..self.num_vars {
                let k = m.0[i];
                if k < 2 {
                    continue;
                }
                let mut e = m.0.clone();
                e[i] -= 2;
                out.add_term(Monomial(e), c * &ScalarQ3::from_int((k * (k - 1)) as i64));
            }
        }
        out
    }

    /// `|grad p|² = Σ_i (∂_i p)²`.
    pub fn gradient_norm_squared(&self) -> Poly {
        let mut acc = Poly::zero(self.num_vars);
        for g in self.gradient() {
            acc = &acc + &g.square();
        }
        acc
    }

    /// Exact evaluation at a point of `ℚ(√3)^n`.
    pub fn evaluate(&self, point: &[ScalarQ3]) -> Result<ScalarQ3> {
        self.check_point_len(point.len())?;
        let mut powers: Vec<Vec<ScalarQ3>> = point.iter().map(|x| vec![ScalarQ3::one(), x.clone()]).collect();
        let mut acc = ScalarQ3::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &point[i];
                    cache.push(next);
                }
                v = &v * &cache[e as usize];
            }
            acc += &v;
        }
        Ok(acc)
    }

    /// Floating-point evaluation.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64> {
        self.check_point_len(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .filter(|(e, _)| **e > 0)
                    .fold(c.to_f64(), |acc, (&e, &x)| acc * x.powi(e as i32))
            })
            .sum())
    }

    fn check_point_len(&self, len: usize) -> Result<()> {
        if len != self.num_vars {
            return Err(Error::Structural(format!(
                "point has {} coordinates, polynomial has {} variables",
                len, self.num_vars
            )));
        }
        Ok(())
    }

    /// Euler's identity `Σ x_i ∂_i p = d·p`, decided exactly.
    ///
    /// Fails with a precondition error naming the monomials of the wrong degree
    /// when `p` is not homogeneous of degree `d`.
    pub fn euler_check(&self, d: u32) -> Result<bool> {
        let offending: Vec<String> = self
            .terms
            .keys()
            .filter(|m| m.degree() != d)
            .map(|m| format!("{:?}", m.0))
            .collect();
        if !offending.is_empty() {
            return Err(Error::Precondition(format!(
                "not homogeneous of degree {d}; offending monomials: {}",
                offending.join(", ")
            )));
        }
        let mut lhs = Poly::zero(self.num_vars);
        for i in 0..self.num_vars {
            let xi = Poly::var(self.num_vars, i)?;
            lhs = &lhs + &(&xi * &self.differentiate(i)?);
        }
        let rhs = self.scale(&ScalarQ3::from_int(d as i64));
        Ok((&lhs - &rhs).is_zero())
    }

    /// Moves variable `i` to position `target[i]` in a polynomial with
    /// `new_num_vars` variables. `target` must be injective.
    pub fn relabel(&self, target: &[usize], new_num_vars: usize) -> Result<Poly> {
        if target.len() != self.num_vars {
            return Err(Error::Structural(format!(
                "relabelling has {} entries, polynomial has {} variables",
                target.len(),
                self.num_vars
            )));
        }
        let mut seen = vec![false; new_num_vars];
        for &t in target {
            if t >= new_num_vars || seen[t] {
                return Err(Error::Structural(format!(
                    "relabelling target {t} out of range or repeated"
                )));
            }
            seen[t] = true;
        }
        let mut out = Poly::zero(new_num_vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_num_vars];
            for (i, &k) in m.0.iter().enumerate() {
                e[target[i]] = k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Substitutes `x_i -> s_i·x_i` for the given per-variable scalars.
    pub fn scale_vars(&self, factors: &[ScalarQ3]) -> Result<Poly> {
        self.check_point_len(factors.len())?;
        let mut out = Poly::zero(self.num_vars);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                v = &v * &factors[i].pow(e);
            }
            out.add_term(m.clone(), v);
        }
        Ok(out)
    }

    /// Single-term perturbation used by mutation tests: adds `delta` to the
    /// coefficient of `x^exponents`.
    pub fn perturb(&self, exponents: &[u32], delta: &ScalarQ3) -> Result<Poly> {
        self.check_point_len(exponents.len())?;
        let mut out = self.clone();
        out.add_term(Monomial(exponents.to_vec()), delta.clone());
        Ok(out)
    }
}

fn check_index(num_vars: usize, i: usize) -> Result<()> {
    if i >= num_vars {
        return Err(Error::Structural(format!(
            "variable index {i} out of range for {num_vars} variables"
        )));
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest monomials first reads more naturally
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on a variable-count mismatch; see [`Poly::checked_add`].
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&ScalarQ3::from_int(-1))
    }
}
