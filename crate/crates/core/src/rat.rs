//! Exact rationals and their text form.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad rational `{0}`")]
pub struct RatParseError(pub String);

/// Accepts `n`, `n/d` and finite decimals like `0.25`.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let t = s.trim();
    let err = || RatParseError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let neg = ip.starts_with('-');
        let ip = if ip.is_empty() || ip == "-" { "0" } else { ip.trim_start_matches('-') };
        let whole: BigInt = ip.parse().map_err(|_| err())?;
        let digits: BigInt = fp.parse().map_err(|_| err())?;
        let scale = num::pow(BigInt::from(10), fp.len());
        let v = Rat::new(whole * &scale + digits, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(n))
}

pub struct Show<'a>(pub &'a Rat);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

pub fn show(r: &Rat) -> String {
    Show(r).to_string()
}

pub fn clamp01(r: Rat) -> Rat {
    if r.is_negative() {
        zero()
    } else if r > one() {
        one()
    } else {
        r
    }
}

pub fn in_unit(r: &Rat) -> bool {
    !r.is_negative() && *r <= one()
}
