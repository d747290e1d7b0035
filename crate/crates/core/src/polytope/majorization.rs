//! Majorization of real vectors and Rado membership.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Tolerance on sums and partial sums for floating-point majorization.
pub const MAJORIZATION_TOL: f64 = 1e-12;

fn padded_desc(x: &[f64], len: usize) -> Vec<f64> {
    let mut v = x.to_vec();
    v.resize(len, 0.0);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `x ≺ y`: every partial sum of `x↓` is at most that of `y↓`, with equal
/// totals. The shorter vector is padded with zeros.
pub fn is_majorized(x: &[f64], y: &[f64]) -> Result<bool> {
    let len = x.len().max(y.len());
    let xs = padded_desc(x, len);
    let ys = padded_desc(y, len);
    let (sx, sy): (f64, f64) = (xs.iter().sum(), ys.iter().sum());
    if (sx - sy).abs() > MAJORIZATION_TOL * (1.0 + sx.abs().max(sy.abs())) {
        return Err(Error::SumMismatch {
            left: sx,
            right: sy,
        });
    }
    let (mut px, mut py) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px > py + MAJORIZATION_TOL * (1.0 + py.abs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact majorization test on rationals.
pub fn is_majorized_exact(x: &[BigRational], y: &[BigRational]) -> Result<bool> {
    let len = x.len().max(y.len());
    let prep = |v: &[BigRational]| {
        let mut v = v.to_vec();
        v.resize(len, BigRational::zero());
        v.sort_by(|a, b| b.cmp(a));
        v
    };
    let (xs, ys) = (prep(x), prep(y));
    let sx: BigRational = xs.iter().sum();
    let sy: BigRational = ys.iter().sum();
    if sx != sy {
        return Err(Error::SumMismatch {
            left: crate::weights::to_f64(&sx),
            right: crate::weights::to_f64(&sy),
        });
    }
    let (mut px, mut py) = (BigRational::zero(), BigRational::zero());
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px > py {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `λ ∈ conv(orbit of v)`, which by Rado's theorem is `λ ≺ v`.
///
/// This is membership in the spectral polytope only when it has a single
/// generating vertex (`r <= 2`).
pub fn rado_membership(lambda: &[f64], v: &[f64]) -> Result<bool> {
    is_majorized(lambda, v)
}
