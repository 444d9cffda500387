//! Plane points over exact rationals and over [`Real`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl QPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        QPoint { x, y }
    }

    pub fn sub(&self, o: &QPoint) -> QPoint {
        QPoint { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn to_real(&self, prec: u32) -> RPoint {
        RPoint { x: Real::from_ratio(&self.x, prec), y: Real::from_ratio(&self.y, prec) }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [ratio_to_f64(&self.x), ratio_to_f64(&self.y)]
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.x * &self.x + &self.y * &self.y
    }
}

pub fn qcross(a: &QPoint, b: &QPoint) -> BigRational {
    &a.x * &b.y - &a.y * &b.x
}

#[derive(Clone, Debug)]
pub struct RPoint {
    pub x: Real,
    pub y: Real,
}

impl RPoint {
    pub fn new(x: Real, y: Real) -> Self {
        RPoint { x, y }
    }

    pub fn from_f64(p: [f64; 2], prec: u32) -> Self {
        RPoint { x: Real::from_f64(p[0], prec), y: Real::from_f64(p[1], prec) }
    }

    pub fn sub(&self, o: &RPoint) -> RPoint {
        RPoint { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn add(&self, o: &RPoint) -> RPoint {
        RPoint { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn scale(&self, s: &Real) -> RPoint {
        RPoint { x: &self.x * s, y: &self.y * s }
    }

    pub fn dot(&self, o: &RPoint) -> Real {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &RPoint) -> Real {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm(&self) -> Real {
        self.dot(self).sqrt()
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    Real::from_ratio(q, 64).to_f64()
}

pub fn ratio_from_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"num/den"` or a bare integer.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn format_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}/1", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapter writing rationals as `"num/den"` strings.
pub mod ratio_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Serializable exact point.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QPointJson {
    #[serde(with = "ratio_str")]
    pub x: BigRational,
    #[serde(with = "ratio_str")]
    pub y: BigRational,
}

impl From<&QPoint> for QPointJson {
    fn from(p: &QPoint) -> Self {
        QPointJson { x: p.x.clone(), y: p.y.clone() }
    }
}

impl From<&QPointJson> for QPoint {
    fn from(p: &QPointJson) -> Self {
        QPoint { x: p.x.clone(), y: p.y.clone() }
    }
}

impl Serialize for QPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QPointJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(QPoint::from(&QPointJson::deserialize(d)?))
    }
}
