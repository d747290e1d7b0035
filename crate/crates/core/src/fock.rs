//! Slater-determinant labels and the Gale order.
//!
//! A configuration is an increasing list of `N` orbitals out of `1..=d`
//! (1-indexed). Configurations are compared in the Gale order: `a ≤ b` iff
//! the k-th smallest orbital of `a` is at most the k-th smallest orbital of
//! `b` for every k. For every increasingly ordered one-particle spectrum the
//! configuration energies respect this order.

use std::fmt;
use std::ops::Add;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of configurations `C(d, N)`.
pub const DEFAULT_CONFIG_CAP: u128 = 1_000_000;

/// Orbitals are stored as bits of a `u64`.
pub const MAX_ORBITALS: usize = 64;

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Particle number, one-particle dimension and number of positive weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProblemDims {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    pub r: usize,
}

impl ProblemDims {
    pub fn new(n: usize, d: usize, r: usize) -> Result<Self> {
        if n == 0 || n >= d {
            return Err(Error::InvalidDims(format!(
                "need 1 <= N < d, got N={n}, d={d}"
            )));
        }
        if d > MAX_ORBITALS {
            return Err(Error::InvalidDims(format!(
                "d={d} exceeds the supported maximum of {MAX_ORBITALS}"
            )));
        }
        let count = binomial(d, n);
        if r == 0 || (r as u128) > count {
            return Err(Error::InvalidDims(format!(
                "need 1 <= r <= C(d,N) = {count}, got r={r}"
            )));
        }
        Ok(Self { n, d, r })
    }

    /// Smallest dimensions inside the regime where the polytope structure is
    /// independent of `N` and `d`: `N = r - 1` and `d = N + r - 1`, except
    /// that `r <= 2` uses `N = 1` and `r = 1` needs `d = 2` to satisfy `N < d`.
    pub fn minimal(r: usize) -> Result<Self> {
        let n = r.saturating_sub(1).max(1);
        let d = (n + r - 1).max(n + 1);
        Self::new(n, d, r)
    }

    /// True iff `N >= r - 1` and `d >= N + r - 1`.
    pub fn minimal_regime(&self) -> bool {
        self.n + 1 >= self.r && self.d + 1 >= self.n + self.r
    }

    /// Dimension `C(d, N)` of the N-fermion space.
    pub fn fock_dim(&self) -> u128 {
        binomial(self.d, self.n)
    }

    pub fn with_r(&self, r: usize) -> Result<Self> {
        Self::new(self.n, self.d, r)
    }
}

impl fmt::Display for ProblemDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}, d={}, r={}", self.n, self.d, self.r)
    }
}

/// A Slater-determinant label: strictly increasing 1-indexed orbitals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Configuration(Vec<usize>);

impl Configuration {
    /// Builds a configuration without a bound on the largest orbital other
    /// than [`MAX_ORBITALS`].
    pub fn new(orbitals: Vec<usize>) -> Result<Self> {
        if orbitals.is_empty() {
            return Err(Error::InvalidConfiguration("empty configuration".into()));
        }
        if orbitals[0] == 0 {
            return Err(Error::InvalidConfiguration("orbitals are 1-indexed".into()));
        }
        if orbitals.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidConfiguration(format!(
                "orbitals must be strictly increasing: {orbitals:?}"
            )));
        }
        if *orbitals.last().unwrap() > MAX_ORBITALS {
            return Err(Error::InvalidConfiguration(format!(
                "orbital index exceeds {MAX_ORBITALS}"
            )));
        }
        Ok(Self(orbitals))
    }

    /// Builds a configuration and checks it against `dims`.
    pub fn with_dims(orbitals: Vec<usize>, dims: &ProblemDims) -> Result<Self> {
        let c = Self::new(orbitals)?;
        if c.len() != dims.n {
            return Err(Error::InvalidConfiguration(format!(
                "{c} has {} orbitals, expected N={}",
                c.len(),
                dims.n
            )));
        }
        if c.max_orbital() > dims.d {
            return Err(Error::InvalidConfiguration(format!(
                "{c} exceeds d={}",
                dims.d
            )));
        }
        Ok(c)
    }

    /// The Gale minimum `(1, 2, ..., n)`.
    pub fn lowest(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        Self(
            (0..64)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect(),
        )
    }

    pub fn orbitals(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_orbital(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn contains(&self, orbital: usize) -> bool {
        self.0.binary_search(&orbital).is_ok()
    }

    /// Bit `k - 1` is set iff orbital `k` is occupied.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &i| m | 1u64 << (i - 1))
    }

    /// 0/1 occupation vector of length `d`.
    pub fn occupation(&self, d: usize) -> Vec<u8> {
        let mut occ = vec![0u8; d];
        for &i in &self.0 {
            occ[i - 1] = 1;
        }
        occ
    }

    /// Gale-order upper covers within `1..=d`: raise one orbital by one.
    pub fn upper_covers(&self, d: usize) -> Vec<Configuration> {
        let n = self.0.len();
        let mut out = Vec::new();
        for k in 0..n {
            let next = self.0[k] + 1;
            let free = if k + 1 < n {
                next < self.0[k + 1]
            } else {
                next <= d
            };
            if free {
                let mut v = self.0.clone();
                v[k] = next;
                out.push(Self(v));
            }
        }
        out
    }

    /// Gale-order lower covers: lower one orbital by one.
    pub fn lower_covers(&self) -> Vec<Configuration> {
        let mut out = Vec::new();
        for k in 0..self.0.len() {
            let prev = self.0[k] - 1;
            let free = if k > 0 {
                prev > self.0[k - 1]
            } else {
                prev >= 1
            };
            if free {
                let mut v = self.0.clone();
                v[k] = prev;
                out.push(Self(v));
            }
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Configuration {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Configuration> for Vec<usize> {
    fn from(c: Configuration) -> Self {
        c.0
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, o) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, ")")
    }
}

/// All `C(d, N)` configurations in lexicographic order.
pub fn enumerate_configs(dims: &ProblemDims, cap: u128) -> Result<Vec<Configuration>> {
    let count = dims.fock_dim();
    if count > cap {
        return Err(Error::CapacityExceeded {
            what: "C(d,N)",
            value: count,
            cap,
        });
    }
    let (n, d) = (dims.n, dims.d);
    let mut out = Vec::with_capacity(count as usize);
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Configuration(cur.clone()));
        // rightmost position that can still be raised
        let Some(k) = (0..n).rev().find(|&k| cur[k] < d - (n - 1 - k)) else {
            break;
        };
        cur[k] += 1;
        for j in k + 1..n {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(out)
}

/// Bit masks of all configurations, in the same lexicographic order as
/// [`enumerate_configs`].
pub fn enumerate_masks(dims: &ProblemDims, cap: u128) -> Result<Vec<u64>> {
    Ok(enumerate_configs(dims, cap)?
        .iter()
        .map(Configuration::mask)
        .collect())
}

/// Energy `Σ_{i ∈ c} h_i` of a configuration for a diagonal one-particle
/// Hamiltonian.
pub fn config_energy<T>(c: &Configuration, h: &[T]) -> Result<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    if c.max_orbital() > h.len() {
        return Err(Error::DimensionMismatch {
            expected: c.max_orbital(),
            found: h.len(),
        });
    }
    Ok(c.0.iter().fold(T::zero(), |acc, &i| acc + h[i - 1].clone()))
}

/// Gale order: entrywise comparison of the sorted orbital lists.
pub fn gale_leq(a: &Configuration, b: &Configuration) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.0.iter().zip(&b.0).all(|(x, y)| x <= y))
}

/// Strict Gale order.
pub fn gale_lt(a: &Configuration, b: &Configuration) -> Result<bool> {
    Ok(a != b && gale_leq(a, b)?)
}
