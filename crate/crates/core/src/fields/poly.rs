use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{rational_to_f64, Rational};

/// Multivariate polynomial in `(x, y, z)` with exact rational coefficients.
///
/// Terms are keyed by their exponent triple; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<[u32; 3], Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::monomial(c, [0, 0, 0])
    }

    pub fn monomial(coefficient: Rational, exponents: [u32; 3]) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(coefficient, exponents);
        p
    }

    /// The coordinate `x`, `y` or `z` for `axis` 0, 1, 2.
    pub fn coordinate(axis: usize) -> Self {
        let mut e = [0; 3];
        e[axis] = 1;
        Polynomial::monomial(Rational::one(), e)
    }

    /// Builds a polynomial from a term list, merging repeated exponents.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, [u32; 3])>) -> Self {
        let mut p = Polynomial::zero();
        for (c, e) in terms {
            p.add_term(c, e);
        }
        p
    }

    fn add_term(&mut self, coefficient: Rational, exponents: [u32; 3]) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0, 0, 0]).copied(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: Rational) -> Self {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, *c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Polynomial::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// Exact partial derivative along `axis` (0, 1, 2).
    pub fn derivative(&self, axis: usize) -> Self {
        let mut out = Polynomial::zero();
        for (e, c) in &self.terms {
            if e[axis] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[axis] -= 1;
            out.add_term(*c * Rational::from_integer(e[axis] as i128), e2);
        }
        out
    }

    pub fn gradient(&self) -> super::PolyVec {
        super::PolyVec::new([self.derivative(0), self.derivative(1), self.derivative(2)])
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, r: &[Rational; 3]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = *c;
                for a in 0..3 {
                    for _ in 0..e[a] {
                        v *= r[a];
                    }
                }
                v
            })
            .sum()
    }

    /// Floating-point evaluation, used when assembling grid operators.
    pub fn eval_f64(&self, r: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                rational_to_f64(*c) * r[0].powi(e[0] as i32) * r[1].powi(e[1] as i32) * r[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// Pre-converted coefficient list for repeated floating-point evaluation.
    pub fn compile(&self) -> CompiledPolynomial {
        CompiledPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (rational_to_f64(*c), [e[0] as i32, e[1] as i32, e[2] as i32]))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompiledPolynomial {
    terms: Vec<(f64, [i32; 3])>,
}

impl CompiledPolynomial {
    pub fn eval(&self, r: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * r[0].powi(e[0]) * r[1].powi(e[1]) * r[2].powi(e[2]))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*c, *e);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(-*c, *e);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(*c1 * *c2, [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]]);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -(&self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const VARS: [&str; 3] = ["x", "y", "z"];
        // highest degree first reads more naturally
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -*c } else { *c };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = e.iter().all(|&p| p == 0);
            let mut parts: Vec<String> = Vec::new();
            if is_const || !mag.is_one() {
                parts.push(mag.to_string());
            }
            for a in 0..3 {
                match e[a] {
                    0 => {}
                    1 => parts.push(VARS[a].to_string()),
                    p => parts.push(format!("{}^{}", VARS[a], p)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
