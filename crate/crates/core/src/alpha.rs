//! Exact small-cancellation constants.
//!
//! Every `|P| < α|C|` comparison is done by cross-multiplying integers, so a
//! boundary case `|P| = α|C|` fails deterministically.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alpha(Ratio<u64>);

impl Alpha {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("alpha denominator is zero".into()));
        }
        if num == 0 {
            return Err(Error::Domain("alpha must be positive".into()));
        }
        Ok(Alpha(Ratio::new(num, den)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `k·α`.
    pub fn scale(self, k: u64) -> Self {
        Alpha(self.0 * Ratio::from_integer(k))
    }

    /// `|piece| < α·|cycle|`, strict.
    pub fn admits(self, piece: usize, cycle: usize) -> bool {
        (piece as u128) * (self.denom() as u128) < (self.numer() as u128) * (cycle as u128)
    }

    /// `α·x ≥ 1`.
    pub fn times_at_least_one(self, x: usize) -> bool {
        (self.numer() as u128) * (x as u128) >= self.denom() as u128
    }

    /// Smallest integer `ℓ` with `ℓ ≥ α·x`, i.e. the shortest length that fails `ℓ < α·x`.
    pub fn threshold(self, x: usize) -> usize {
        let n = self.numer() as u128 * x as u128;
        let d = self.denom() as u128;
        n.div_ceil(d) as usize
    }

    /// Largest integer `ℓ` with `ℓ ≤ α·x`.
    pub fn floor_of(self, x: usize) -> usize {
        ((self.numer() as u128 * x as u128) / self.denom() as u128) as usize
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Alpha {
    type Err = Error;

    /// Accepts `p/q` or a plain decimal such as `0.25`; decimals are read
    /// exactly as `digits / 10^k`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(1, 1, format!("invalid fraction `{s}`"));
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Alpha::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac_v)).ok_or_else(bad)?;
        Alpha::new(num, den)
    }
}

impl TryFrom<String> for Alpha {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Alpha> for String {
    fn from(a: Alpha) -> String {
        a.to_string()
    }
}
