//! Exact circle arithmetic: angles in turns (fractions of a full circle) and
//! positive rational heights.
//!
//! Angles are stored reduced mod 1 with arbitrary-precision integer
//! numerator/denominator, so depth-12 computations with perturbations stay
//! exact. Radians never appear; conversion happens only at the numeric
//! boundary (rendering, polynomial dynamics).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A point of the circle R/Z: a rational in [0,1), reduced to lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(BigRational);

fn mod_one(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl Angle {
    pub fn new(r: BigRational) -> Self {
        Angle(mod_one(&r))
    }

    pub fn from_frac(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DegenerateParameter("zero denominator".into()));
        }
        Ok(Angle::new(BigRational::new(num.into(), den.into())))
    }

    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn add(&self, other: &Angle) -> Angle {
        Angle::new(&self.0 + &other.0)
    }

    pub fn add_rational(&self, r: &BigRational) -> Angle {
        Angle::new(&self.0 + r)
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        Angle::new(&self.0 - &other.0)
    }

    /// Image under z -> z^d on arguments: multiplication by d mod 1.
    pub fn image(&self, d: u32) -> Angle {
        Angle::new(&self.0 * BigRational::from_integer(d.into()))
    }

    /// The d preimages under multiplication by d: (self + k)/d for 0 <= k < d.
    pub fn preimages(&self, d: u32) -> Vec<Angle> {
        let dd = BigRational::from_integer(BigInt::from(d));
        (0..d)
            .map(|k| Angle::new((&self.0 + BigRational::from_integer(k.into())) / &dd))
            .collect()
    }

    /// Counterclockwise distance from self to other, in (0,1] (1 for equal).
    pub fn ccw_dist(&self, other: &Angle) -> BigRational {
        let d = mod_one(&(&other.0 - &self.0));
        if d.is_zero() {
            BigRational::one()
        } else {
            d
        }
    }

    /// Membership in the open counterclockwise arc (a, b).
    pub fn in_open_arc(&self, a: &Angle, b: &Angle) -> bool {
        a.ccw_dist(self) < a.ccw_dist(b) && self != a
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |_| Error::DegenerateParameter(format!("cannot parse rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let num = BigInt::from_str(p.trim()).map_err(bad)?;
            let den = BigInt::from_str(q.trim()).map_err(bad)?;
            if den.is_zero() {
                return Err(Error::DegenerateParameter(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num = BigInt::from_str(s).map_err(bad)?;
            Ok(BigRational::from_integer(num))
        }
    }
}

impl FromStr for Angle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Angle::new(parse_rational(s)?))
    }
}

/// A positive rational height. The exponential in the paper picture is never
/// taken except in the render module.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Height(BigRational);

impl Height {
    pub fn new(r: BigRational) -> Result<Self> {
        if r.is_positive() {
            Ok(Height(r))
        } else {
            Err(Error::DegenerateParameter(format!("height {r} is not positive")))
        }
    }

    pub fn from_frac(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DegenerateParameter("zero denominator".into()));
        }
        Height::new(BigRational::new(num.into(), den.into()))
    }

    pub fn one() -> Self {
        Height(BigRational::one())
    }

    /// 3^(1-n) and friends: d^e for possibly negative e.
    pub fn pow_of(d: u32, e: i32) -> Self {
        let b = BigInt::from(d);
        let r = if e >= 0 {
            BigRational::from_integer(b.pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), b.pow((-e) as u32))
        };
        Height(r)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn scale(&self, by: &BigRational) -> Result<Height> {
        Height::new(&self.0 * by)
    }

    pub fn mul_int(&self, k: u32) -> Height {
        Height(&self.0 * BigRational::from_integer(k.into()))
    }

    pub fn div_int(&self, k: u32) -> Height {
        Height(&self.0 / BigRational::from_integer(k.into()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Height {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Height::new(parse_rational(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: i64, d: i64) -> Angle {
        Angle::from_frac(n, d).unwrap()
    }

    #[test]
    fn normalization_mod_one() {
        assert_eq!(a(5, 4), a(1, 4));
        assert_eq!(a(-1, 4), a(3, 4));
        assert_eq!(a(9, 4).to_string(), "1/4");
    }

    #[test]
    fn parse_then_serialize_is_identity_on_lowest_terms() {
        for s in ["1/12", "5/9", "16/27", "0/1", "61/108"] {
            let ang: Angle = s.parse().unwrap();
            assert_eq!(ang.to_string(), s);
        }
    }

    #[test]
    fn preimages_and_image_roundtrip() {
        let x = a(5, 12);
        for p in x.preimages(3) {
            assert_eq!(p.image(3), x);
        }
    }

    #[test]
    fn open_arc_membership() {
        let lo = a(1, 3);
        let hi = a(2, 3);
        assert!(a(5, 9).in_open_arc(&lo, &hi));
        assert!(!a(1, 3).in_open_arc(&lo, &hi));
        assert!(!a(3, 4).in_open_arc(&lo, &hi));
        // wrap-around arc
        assert!(a(1, 10).in_open_arc(&hi, &lo));
    }

    #[test]
    fn heights_positive_only() {
        assert!(Height::from_frac(8, 9).is_ok());
        assert!(Height::from_frac(0, 9).is_err());
        assert!(Height::from_frac(-1, 9).is_err());
        assert_eq!(Height::pow_of(3, -2).to_string(), "1/9");
    }
}
