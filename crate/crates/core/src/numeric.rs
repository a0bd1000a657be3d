//! Small numeric helpers shared across modules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Correctly rounded floating point summation (Shewchuk's exact partials).
/// The result does not depend on the order of the summands.
#[derive(Clone, Debug, Default)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn add(&mut self, x: f64) {
        let mut x = x;
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let Some(mut k) = p.len().checked_sub(1) else {
            return 0.0;
        };
        let mut hi = p[k];
        let mut lo = 0.0;
        while k > 0 {
            let x = hi;
            let y = p[k - 1];
            k -= 1;
            hi = x + y;
            lo = y - (hi - x);
            if lo != 0.0 {
                break;
            }
        }
        // round half to even across the remaining partials
        if k > 0 && ((lo < 0.0 && p[k - 1] < 0.0) || (lo > 0.0 && p[k - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Exponent of an `l^p` norm: a positive real or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormExponent {
    Finite(f64),
    Infinity,
}

impl NormExponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return invalid(format!("norm exponent must be > 0, got {p}"));
        }
        if p.is_infinite() {
            return Ok(Self::Infinity);
        }
        Ok(Self::Finite(p))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for NormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for NormExponent {
    type Err = Error;

    /// Accepts `inf`, a decimal, or a fraction such as `4/3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Self::Infinity);
        }
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad norm exponent {s:?}")))
        };
        let p = match s.split_once('/') {
            Some((a, b)) => parse(a)? / parse(b)?,
            None => parse(s)?,
        };
        Self::finite(p)
    }
}

impl Serialize for NormExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => s.serialize_f64(*p),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for NormExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Self::finite(p).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `l^p` norm of a family of nonnegative moduli, scaled by the maximum to
/// avoid overflow and summed with compensation.
pub fn lp_norm(moduli: &[f64], p: NormExponent) -> f64 {
    let max = moduli.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    match p {
        NormExponent::Infinity => max,
        NormExponent::Finite(p) if p == 1.0 => moduli.iter().copied().collect::<ExactSum>().value(),
        NormExponent::Finite(p) => {
            let s: ExactSum = moduli.iter().map(|&x| (x / max).powf(p)).collect();
            max * s.value().powf(1.0 / p)
        }
    }
}

/// `ln C(n + m - 1, m)` in floating point, for sizes beyond `u64`.
pub fn ln_dimension_count(m: u64, n: f64) -> f64 {
    (1..=m).map(|k| ((n + k as f64 - 1.0) / k as f64).ln()).sum()
}

/// `ln m!`.
pub fn ln_factorial(m: u64) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}
