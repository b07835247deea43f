use super::poly::Poly;

/// A polynomial flattened to `f64` coefficients for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    num_vars: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, &e)| (i, e as i32))
                    .collect();
                (c.to_f64(), factors)
            })
            .collect();
        Self {
            num_vars: p.num_vars(),
            terms,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Caller guarantees `x.len() == num_vars`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.num_vars);
        self.terms
            .iter()
            .map(|(c, f)| f.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}
