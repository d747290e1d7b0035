//! Ensemble weight vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Relative tolerance for accepting user-supplied weights that do not sum to one.
pub const SUM_TOLERANCE: f64 = 1e-6;

/// Descending ensemble weights `w_1 >= ... >= w_r > 0` with `Σ w_j = 1`.
///
/// Trailing zeros are dropped on construction, so `r` is always the number
/// of positive weights. Entries are exact rationals; `f64` copies are kept
/// for the numerical modules.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    exact: Vec<BigRational>,
    float: Vec<f64>,
}

impl WeightVector {
    /// Exact constructor: entries must already sum to one.
    pub fn new(mut w: Vec<BigRational>) -> Result<Self> {
        while w.last().is_some_and(|x| x.is_zero()) {
            w.pop();
        }
        if w.is_empty() {
            return Err(Error::InvalidWeights("no positive weight".into()));
        }
        if w.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidWeights("negative weight".into()));
        }
        if w.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::InvalidWeights(format!(
                "weights must be non-increasing: {}",
                render(&w)
            )));
        }
        let sum: BigRational = w.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        let float = w.iter().map(to_f64).collect();
        Ok(Self { exact: w, float })
    }

    /// Scales arbitrary non-negative descending entries to unit sum exactly.
    pub fn normalized(w: Vec<BigRational>) -> Result<Self> {
        let sum: BigRational = w.iter().sum();
        if !sum.is_positive() {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        Self::new(w.into_iter().map(|x| x / &sum).collect())
    }

    /// From floating-point weights: each entry is converted exactly and the
    /// vector is rescaled to unit sum. Fails if the sum is off by more than
    /// [`SUM_TOLERANCE`].
    pub fn from_f64(w: &[f64]) -> Result<Self> {
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        let exact = w
            .iter()
            .map(|&x| {
                BigRational::from_float(x)
                    .ok_or_else(|| Error::InvalidWeights(format!("non-finite weight {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::normalized(exact)
    }

    /// Parses comma-separated decimals such as `0.5,0.3,0.2`. Decimals are
    /// read exactly (`0.7` is `7/10`), then normalized if the sum is within
    /// [`SUM_TOLERANCE`] of one.
    pub fn parse(s: &str) -> Result<Self> {
        let exact = parse_decimal_list(s)?;
        let sum: BigRational = exact.iter().sum();
        if (to_f64(&sum) - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Self::normalized(exact)
    }

    /// `w_j ∝ 2^{r-j}`: strictly descending and superincreasing.
    pub fn dyadic(r: usize) -> Self {
        let denom: BigInt = (BigInt::one() << r) - 1;
        let w = (0..r)
            .map(|j| BigRational::new(BigInt::one() << (r - 1 - j), denom.clone()))
            .collect();
        Self::new(w).expect("dyadic weights are valid")
    }

    /// Uniform weights over `r` states.
    pub fn uniform(r: usize) -> Self {
        let w = vec![BigRational::new(BigInt::one(), BigInt::from(r)); r];
        Self::new(w).expect("uniform weights are valid")
    }

    pub fn r(&self) -> usize {
        self.exact.len()
    }

    pub fn exact(&self) -> &[BigRational] {
        &self.exact
    }

    pub fn as_f64(&self) -> &[f64] {
        &self.float
    }

    /// Float weights padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Result<Vec<f64>> {
        if len < self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                found: len,
            });
        }
        let mut v = self.float.clone();
        v.resize(len, 0.0);
        Ok(v)
    }

    pub fn is_strictly_descending(&self) -> bool {
        self.exact.windows(2).all(|p| p[0] > p[1])
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(&self.exact))
    }
}

fn render(w: &[BigRational]) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses one decimal literal (`-0.25`, `3`, `1e-3`, `2/3`) exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidWeights(format!("cannot parse number {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Comma-separated list of exact decimals.
pub fn parse_decimal_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_rational)
        .collect()
}
