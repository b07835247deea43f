//! Line-oriented text serialization.
//!
//! Each term is one line `a_num/a_den b_num/b_den e1 e2 ... en`, where the
//! coefficient is `a + b·√3`. Lines appear in ascending lexicographic order of
//! the exponent vector and end with `\n`. The zero polynomial is the empty
//! string, so the variable count travels out of band.

use super::poly::Poly;
use super::scalar::{fmt_rational, parse_rational, ScalarQ3};
use crate::error::{Error, Result};

impl Poly {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms() {
            out.push_str(&fmt_rational(c.a()));
            out.push(' ');
            out.push_str(&fmt_rational(c.b()));
            for e in m.exponents() {
                out.push(' ');
                out.push_str(&e.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, num_vars: usize) -> Result<Poly> {
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != num_vars + 2 {
                return Err(Error::Parse(format!(
                    "line {}: expected {} fields, found {}",
                    lineno + 1,
                    num_vars + 2,
                    fields.len()
                )));
            }
            let a = parse_rational(fields[0])?;
            let b = parse_rational(fields[1])?;
            let exps = fields[2..]
                .iter()
                .map(|f| {
                    f.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("line {}: bad exponent {f:?}", lineno + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push((exps, ScalarQ3::new(a, b)));
        }
        Poly::from_terms(num_vars, terms)
    }
}
