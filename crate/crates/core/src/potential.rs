//! Odd homogeneous polynomial potentials `W(x)` with real coefficients.
//!
//! Accepted syntax is a sum of explicit monomials, e.g. `x1^2*x2` or
//! `0.5*x1^3 - 2 * x1*x2^2`. Whitespace is ignored. A term is a product of
//! factors separated by `*`; a factor is a decimal number or a variable `xi`
//! with an optional non-negative integer power `^n`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(x)
            .fold(self.coefficient, |acc, (&a, &xi)| acc * xi.powi(a as i32))
    }
}

/// `W = Σ c·∏ xᵢ^αᵢ`, homogeneous of odd degree `2K+1 ≥ 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPotential {
    dim: usize,
    monomials: Vec<Monomial>,
    k: u32,
}

impl PolynomialPotential {
    /// Builds a potential from raw monomials, merging like terms and
    /// dropping zeros, then validates homogeneity and odd degree.
    pub fn from_monomials(dim: usize, monomials: Vec<Monomial>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for m in monomials {
            if m.exponents.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.exponents.len(),
                });
            }
            if !m.coefficient.is_finite() {
                return Err(Error::Validation("coefficient is not finite".into()));
            }
            *merged.entry(m.exponents).or_insert(0.0) += m.coefficient;
        }
        // descending exponent order puts x1^n first
        let monomials: Vec<Monomial> = merged
            .into_iter()
            .rev()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponents, coefficient)| Monomial {
                exponents,
                coefficient,
            })
            .collect();
        let Some(first) = monomials.first() else {
            return Err(Error::Validation("potential is identically zero".into()));
        };
        let degree = first.degree();
        if let Some(bad) = monomials.iter().find(|m| m.degree() != degree) {
            return Err(Error::Validation(format!(
                "not homogeneous: degrees {} and {} both present",
                degree,
                bad.degree()
            )));
        }
        if degree % 2 == 0 {
            return Err(Error::Validation(format!("degree {degree} is not odd")));
        }
        if degree < 3 {
            return Err(Error::Validation(format!("degree {degree} is below 3")));
        }
        Ok(PolynomialPotential {
            dim,
            monomials,
            k: (degree - 1) / 2,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// `K` in `deg W = 2K+1`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn degree(&self) -> u32 {
        2 * self.k + 1
    }

    /// Default Borel-Leroy order `(2K-1)/2`.
    pub fn borel_order(&self) -> f64 {
        (2.0 * self.k as f64 - 1.0) / 2.0
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.monomials.iter().map(|m| m.evaluate(x)).sum()
    }
}

impl fmt::Display for PolynomialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.monomials.iter().enumerate() {
            let c = m.coefficient;
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if c.abs() != 1.0 {
                factors.push(format!("{}", c.abs()));
            }
            for (j, &a) in m.exponents.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("x{}", j + 1)),
                    _ => factors.push(format!("x{}^{}", j + 1, a)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for PolynomialPotential {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `text` as a potential in `dim` variables.
pub fn parse_potential(text: &str, dim: usize) -> Result<PolynomialPotential> {
    let terms = Parser::new(text).terms()?;
    let mut monomials = Vec::with_capacity(terms.len());
    for (coefficient, vars) in terms {
        let mut exponents = vec![0u32; dim];
        for (pos, index, power) in vars {
            if index == 0 || index > dim {
                return Err(Error::Validation(format!(
                    "variable x{index} at position {pos} outside 1..={dim}"
                )));
            }
            exponents[index - 1] += power;
        }
        monomials.push(Monomial {
            exponents,
            coefficient,
        });
    }
    PolynomialPotential::from_monomials(dim, monomials)
}

type Term = (f64, Vec<(usize, usize, u32)>);

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Parser {
            chars,
            pos: 0,
            len: text.len(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn terms(&mut self) -> Result<Vec<Term>> {
        if self.chars.is_empty() {
            return self.error("empty expression");
        }
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1.0
            }
            Some('+') => {
                self.pos += 1;
                1.0
            }
            _ => 1.0,
        };
        loop {
            let (c, vars) = self.term()?;
            out.push((sign * c, vars));
            match self.peek() {
                None => return Ok(out),
                Some('+') => sign = 1.0,
                Some('-') => sign = -1.0,
                Some(c) => return self.error(format!("unexpected '{c}'")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut coefficient = 1.0;
        let mut vars = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '.' => coefficient *= self.number()?,
                Some('x') => vars.push(self.variable()?),
                Some(c) => return self.error(format!("expected number or variable, found '{c}'")),
                None => return self.error("expected number or variable, found end of input"),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((coefficient, vars));
            }
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.offset();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit() || *c == '.') {
            s.push(c);
            self.pos += 1;
        }
        s.parse::<f64>().map_err(|_| Error::Parse {
            position: start,
            message: format!("malformed number '{s}'"),
        })
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.offset();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.pos += 1;
        }
        if s.is_empty() {
            return self.error("expected integer");
        }
        s.parse::<u64>().map_err(|_| Error::Parse {
            position: start,
            message: format!("integer '{s}' out of range"),
        })
    }

    fn variable(&mut self) -> Result<(usize, usize, u32)> {
        let start = self.offset();
        self.pos += 1; // 'x'
        let index = self.integer()? as usize;
        let power = if self.peek() == Some('^') {
            self.pos += 1;
            let p = self.integer()?;
            u32::try_from(p).map_err(|_| Error::Parse {
                position: start,
                message: "exponent out of range".into(),
            })?
        } else {
            1
        };
        Ok((start, index, power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_cubic() {
        let w = parse_potential("x1^3", 1).unwrap();
        assert_eq!(w.k(), 1);
        assert_eq!(w.monomials().len(), 1);
        assert_eq!(w.monomials()[0].exponents, vec![3]);
        assert_eq!(w.monomials()[0].coefficient, 1.0);
    }

    #[test]
    fn henon_heiles() {
        let w = parse_potential("x1^2*x2", 2).unwrap();
        assert_eq!(w.k(), 1);
        assert_eq!(w.monomials()[0].exponents, vec![2, 1]);
        assert_eq!(w.to_string(), "x1^2*x2");
    }

    #[test]
    fn mixed_degree_rejected() {
        let e = parse_potential("x1^2 + x1^3", 1).unwrap_err();
        assert!(matches!(e, Error::Validation(ref m) if m.contains("homogeneous")), "{e}");
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(parse_potential("x1^4", 1), Err(Error::Validation(_))));
        assert!(matches!(parse_potential("x1", 1), Err(Error::Validation(_))));
        assert!(matches!(parse_potential("x3^3", 2), Err(Error::Validation(_))));
        assert!(matches!(parse_potential("x1^3 - x1^3", 1), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_potential("x1^3 + * x1", 1) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_potential("", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_potential("x1^", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_potential("2..5*x1^3", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_potential("y^3", 1), Err(Error::Parse { position: 0, .. })));
    }

    #[test]
    fn merging_and_signs() {
        let w = parse_potential(" -0.5 * x1*x2^2 + x1^3 + 2*x1 * x2 * x2 ", 2).unwrap();
        assert_eq!(w.monomials().len(), 2);
        assert_eq!(w.to_string(), "x1^3 + 1.5*x1*x2^2");
        let w = parse_potential("-x1^5", 1).unwrap();
        assert_eq!(w.k(), 2);
        assert_eq!(w.to_string(), "-x1^5");
    }

    #[test]
    fn evaluate_examples() {
        let w = parse_potential("x1^3", 1).unwrap();
        assert_eq!(w.evaluate(&[2.0]), 8.0);
        assert_eq!(w.evaluate(&[-2.0]), -8.0);
        let hh = parse_potential("x1^2*x2", 2).unwrap();
        assert_eq!(hh.evaluate(&[1.0, -1.0]), -1.0);
    }

    fn arb_potential() -> impl Strategy<Value = PolynomialPotential> {
        (1usize..=3, 1u32..=2)
            .prop_flat_map(|(d, k)| {
                let deg = 2 * k + 1;
                let mono = (proptest::collection::vec(0u32..=deg, d), -5.0f64..5.0);
                (Just(d), Just(deg), proptest::collection::vec(mono, 1..4))
            })
            .prop_filter_map("degenerate", |(d, deg, raw)| {
                let monomials = raw
                    .into_iter()
                    .map(|(mut e, c)| {
                        // push the exponent total onto the last slot to force homogeneity
                        let partial: u32 = e[..d - 1].iter().sum();
                        if partial > deg {
                            e.iter_mut().for_each(|a| *a = 0);
                            e[0] = deg;
                        } else {
                            e[d - 1] = deg - partial;
                        }
                        Monomial {
                            exponents: e,
                            coefficient: (c * 8.0).round() / 8.0,
                        }
                    })
                    .collect();
                PolynomialPotential::from_monomials(d, monomials).ok()
            })
    }

    proptest! {
        #[test]
        fn odd_symmetry(w in arb_potential(), x in proptest::collection::vec(-3.0f64..3.0, 3)) {
            let x = &x[..w.dim()];
            let minus: Vec<f64> = x.iter().map(|v| -v).collect();
            let a = w.evaluate(x);
            let b = w.evaluate(&minus);
            prop_assert!((a + b).abs() <= 1e-14 * a.abs().max(1.0));
        }

        #[test]
        fn print_parse_round_trip(w in arb_potential()) {
            let back = parse_potential(&w.to_string(), w.dim()).unwrap();
            prop_assert_eq!(back, w);
        }
    }
}
