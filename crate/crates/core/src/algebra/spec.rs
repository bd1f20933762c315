use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `dim R1` accepted for any family.
pub const MAX_DIM1: usize = 4096;
/// Largest `dim R2` accepted for any family.
pub const MAX_DIM2: usize = 1 << 20;
/// Largest embedding degree accepted for plane cubics; reduction tables grow
/// quadratically in `d`.
pub const MAX_PLANE_CUBIC_DEGREE: u32 = 64;

/// Which variety to build, and with what parameters.
///
/// Parses from JSON objects tagged by `family`:
///
/// ```json
/// {"family": "scroll", "heights": [5, 10]}
/// {"family": "veronese", "m": 2, "d": 2}
/// {"family": "plane_cubic", "cubic": [-3, 1, 3, -1, 6, 5, -6, 5, 5, 3], "d": 10}
/// ```
///
/// Cubic coefficients are listed in the order
/// `x0^3, x0^2x1, x0^2x2, x0x1^2, x0x1x2, x0x2^2, x1^3, x1^2x2, x1x2^2, x2^3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum VarietySpec {
    /// Rational normal scroll given by the heights of its Lawrence prism.
    Scroll { heights: Vec<u32> },
    /// `d`-th Veronese embedding of `P^m`.
    Veronese { m: u32, d: u32 },
    /// `d`-th Veronese re-embedding of the plane curve cut out by `cubic`.
    PlaneCubic { cubic: [i64; 10], d: u32 },
}

impl VarietySpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: VarietySpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json_slice(bytes: &[u8]) -> Result<Self> {
        let spec: VarietySpec = serde_json::from_slice(bytes)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VarietySpec::Scroll { heights } => {
                if heights.is_empty() {
                    return Err(Error::InvalidSpec("scroll heights must be nonempty".into()));
                }
                if heights.contains(&0) {
                    return Err(Error::InvalidSpec("scroll heights must be >= 1".into()));
                }
                if heights.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::InvalidSpec(
                        "scroll heights must be nondecreasing".into(),
                    ));
                }
            }
            VarietySpec::Veronese { m, d } => {
                if *m == 0 || *d == 0 {
                    return Err(Error::InvalidSpec(
                        "veronese needs m >= 1 and d >= 1".into(),
                    ));
                }
            }
            VarietySpec::PlaneCubic { cubic, d } => {
                if cubic.iter().all(|&c| c == 0) {
                    return Err(Error::InvalidSpec("cubic is identically zero".into()));
                }
                if *d < 3 {
                    return Err(Error::InvalidSpec("plane cubic needs d >= 3".into()));
                }
                if *d > MAX_PLANE_CUBIC_DEGREE {
                    return Err(Error::InvalidSpec(format!(
                        "plane cubic degree {d} exceeds supported maximum {MAX_PLANE_CUBIC_DEGREE}"
                    )));
                }
                // keeps every reduction coefficient product inside i128/f64 range
                if cubic.iter().any(|c| c.unsigned_abs() > 1 << 20) {
                    return Err(Error::InvalidSpec(
                        "cubic coefficients must satisfy |c| <= 2^20".into(),
                    ));
                }
            }
        }
        let (dim1, dim2) = self.expected_dims()?;
        if dim1 > MAX_DIM1 || dim2 > MAX_DIM2 {
            return Err(Error::InvalidSpec(format!(
                "ring too large: dim R1 = {dim1}, dim R2 = {dim2}"
            )));
        }
        Ok(())
    }

    /// `(dim R1, dim R2)` from closed-form formulas, without building the ring.
    pub fn expected_dims(&self) -> Result<(usize, usize)> {
        let too_large = || Error::InvalidSpec("ring dimension overflows".into());
        match self {
            VarietySpec::Scroll { heights } => {
                let m = heights.len() as u128;
                let dim1 = heights
                    .iter()
                    .try_fold(m, |acc, &h| acc.checked_add(h as u128))
                    .ok_or_else(too_large)?;
                // (dim X + 1) * dim1 - binom(dim X + 1, 2) with dim X = m
                let dim2 = (m + 1)
                    .checked_mul(dim1)
                    .and_then(|v| v.checked_sub((m + 1) * m / 2))
                    .ok_or_else(too_large)?;
                Ok((to_usize(dim1)?, to_usize(dim2)?))
            }
            VarietySpec::Veronese { m, d } => {
                let dim1 = binomial(*m as u128 + *d as u128, *d as u128).ok_or_else(too_large)?;
                let dim2 =
                    binomial(*m as u128 + 2 * *d as u128, 2 * *d as u128).ok_or_else(too_large)?;
                Ok((to_usize(dim1)?, to_usize(dim2)?))
            }
            VarietySpec::PlaneCubic { d, .. } => Ok((3 * *d as usize, 6 * *d as usize)),
        }
    }

    /// Short label used in result tables.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::Scroll { heights } => {
                let hs: Vec<String> = heights.iter().map(|h| h.to_string()).collect();
                write!(f, "scroll({})", hs.join(","))
            }
            VarietySpec::Veronese { m, d } => write!(f, "veronese(m={m};d={d})"),
            VarietySpec::PlaneCubic { cubic, d } => {
                let cs: Vec<String> = cubic.iter().map(|c| c.to_string()).collect();
                write!(f, "plane_cubic(d={d};[{}])", cs.join(" "))
            }
        }
    }
}

fn to_usize(v: u128) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::InvalidSpec("ring dimension overflows".into()))
}

/// `binom(n, k)` with overflow detection.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}
