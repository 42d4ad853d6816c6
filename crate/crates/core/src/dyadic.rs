//! Exact coordinates on arcs.
//!
//! Every coordinate produced by the constructions in this crate is a dyadic
//! rational (integers, midpoints of dyadics, and their sums). The numerator and
//! denominator are kept in `i128`, which leaves room for roughly a hundred
//! nested midpoint insertions before overflow.

use std::fmt;
use std::ops::{Add, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic(Ratio<i128>);

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic(Ratio::new_raw(0, 1));
    pub const ONE: Dyadic = Dyadic(Ratio::new_raw(1, 1));
    pub const HALF: Dyadic = Dyadic(Ratio::new_raw(1, 2));

    pub fn int(n: i64) -> Self {
        Dyadic(Ratio::from_integer(n as i128))
    }

    /// `num / 2^exp`.
    pub fn new(num: i64, exp: u32) -> Self {
        assert!(exp < 120, "dyadic exponent too large");
        Dyadic(Ratio::new(num as i128, 1i128 << exp))
    }

    pub fn midpoint(self, other: Dyadic) -> Dyadic {
        Dyadic((self.0 + other.0) / Ratio::from_integer(2))
    }

    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(self) -> i64 {
        self.0.floor().to_integer() as i64
    }

    pub fn numer(self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(self) -> i128 {
        *self.0.denom()
    }

    /// Parses `"3"`, `"-1/4"` or a finite decimal such as `"0.25"`.
    pub fn parse(s: &str) -> Option<Dyadic> {
        let s = s.trim();
        let r = if let Some((n, d)) = s.split_once('/') {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d <= 0 {
                return None;
            }
            Ratio::new(n, d)
        } else if let Some((ip, fp)) = s.split_once('.') {
            let neg = ip.starts_with('-');
            let ip_abs: i128 = ip.trim_start_matches('-').parse().unwrap_or(0);
            if fp.is_empty() || fp.len() > 30 || !fp.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let scale = 10i128.checked_pow(fp.len() as u32)?;
            let fnum: i128 = fp.parse().ok()?;
            let mag = Ratio::new(ip_abs * scale + fnum, scale);
            if neg {
                -mag
            } else {
                mag
            }
        } else {
            Ratio::from_integer(s.parse().ok()?)
        };
        let d = *r.denom();
        if d & (d - 1) != 0 {
            return None;
        }
        Some(Dyadic(r))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        Dyadic(self.0 + rhs.0)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        Dyadic(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic(-self.0)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic(Ratio::zero())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match &v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            _ => return Err(serde::de::Error::custom("expected a dyadic rational")),
        };
        Dyadic::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("not a dyadic rational: {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoints_stay_dyadic() {
        let a = Dyadic::ZERO;
        let b = Dyadic::ONE;
        let m = a.midpoint(b);
        assert_eq!(m, Dyadic::HALF);
        assert_eq!(m.midpoint(b), Dyadic::new(3, 2));
        assert_eq!(Dyadic::new(3, 2).to_string(), "3/4");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Dyadic::parse("0.25"), Some(Dyadic::new(1, 2)));
        assert_eq!(Dyadic::parse("-1/4"), Some(-Dyadic::new(1, 2)));
        assert_eq!(Dyadic::parse("7"), Some(Dyadic::int(7)));
        assert_eq!(Dyadic::parse("1/3"), None);
        assert_eq!(Dyadic::parse("0.1"), None);
    }
}
