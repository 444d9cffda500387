use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

/// Laurent polynomial with integer coefficients in one variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(terms: &[(i32, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `x ↦ x^k` (negative `k` inverts the variable).
    pub fn scale_exponents(&self, k: i32) -> Self {
        Self { terms: self.terms.iter().map(|(&e, &c)| (e * k, c)).collect() }
    }

    pub fn shift(&self, by: i32) -> Self {
        Self { terms: self.terms.iter().map(|(&e, &c)| (e + by, c)).collect() }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (&e, &c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            match (mag, mono.is_empty()) {
                (_, true) => s.push_str(&mag.to_string()),
                (1, false) => s.push_str(&mono),
                (_, false) => s.push_str(&format!("{mag}{mono}")),
            }
        }
        s
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("A"))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self + &rhs
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

/// Jones polynomial, stored as a Laurent polynomial in `t^{1/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JonesPolynomial {
    /// exponent `e` stands for `t^{e/2}`
    pub half_powers: LaurentPolynomial,
}

impl JonesPolynomial {
    /// From `(exponent of t, coefficient)` pairs with integral exponents.
    pub fn from_t_terms(terms: &[(i32, i64)]) -> Self {
        let doubled: Vec<(i32, i64)> = terms.iter().map(|&(e, c)| (2 * e, c)).collect();
        JonesPolynomial { half_powers: LaurentPolynomial::from_terms(&doubled) }
    }

    /// From `(2 × exponent of t, coefficient)` pairs.
    pub fn from_half_terms(terms: &[(i32, i64)]) -> Self {
        JonesPolynomial { half_powers: LaurentPolynomial::from_terms(terms) }
    }

    /// `t ↦ t^{-1}`, the Jones polynomial of the mirror image.
    pub fn mirror(&self) -> Self {
        JonesPolynomial { half_powers: self.half_powers.scale_exponents(-1) }
    }
}

impl fmt::Display for JonesPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.half_powers.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.half_powers.terms() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mono = match (e % 2 == 0, e) {
                (_, 0) => String::new(),
                (true, 2) => "t".into(),
                (true, _) => format!("t^{}", e / 2),
                (false, _) => format!("t^({e}/2)"),
            };
            match (mag, mono.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => f.write_str(&mono)?,
                (_, false) => write!(f, "{mag}{mono}")?,
            }
        }
        Ok(())
    }
}
