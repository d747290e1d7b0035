//! Double description method in exact integer arithmetic.
//!
//! [`extreme_rays`] converts a pointed cone `{x : A x >= 0}` from its
//! halfspace description to its generators. Rows are inserted one at a
//! time; new rays come from adjacent pairs on opposite sides of the new
//! hyperplane, with adjacency decided combinatorially from zero sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

type Bits = Vec<u64>;

fn bits_new(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn and_count(a: &Bits, b: &Bits) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

fn is_superset(sup: &Bits, a: &Bits, b: &Bits) -> bool {
    sup.iter()
        .zip(a.iter().zip(b))
        .all(|(s, (x, y))| (x & y) & !s == 0)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides out the gcd of the entries (zero vectors are returned unchanged).
pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Positive multiple of a rational vector with coprime integer entries.
pub fn integer_row(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    primitive(v.iter().map(|x| x.numer() * (&l / x.denom())).collect())
}

/// Indices of a maximal set of linearly independent rows, chosen greedily
/// in order, together with the rank.
pub fn independent_rows(rows: &[Vec<BigRational>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut picked = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (pivot, b) in &basis {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &b[*pivot];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            basis.push((p, v));
            picked.push(i);
        }
    }
    picked
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    independent_rows(rows).len()
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

/// Inverse of a square rational matrix, or `None` if singular.
fn inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Extreme rays of the pointed cone `{x ∈ R^dim : row·x >= 0 for all rows}`,
/// as primitive integer vectors.
///
/// Fails with [`Error::DegenerateHull`] if the rows do not have full rank
/// (the cone then contains a line).
pub fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Result<Vec<Vec<BigInt>>> {
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rows
                .iter()
                .map(|r| r.len())
                .find(|&l| l != dim)
                .unwrap_or(dim),
        });
    }
    let rational: Vec<Vec<BigRational>> = rows.iter().map(|r| to_rational(r)).collect();
    let start = independent_rows(&rational);
    if start.len() < dim {
        return Err(Error::DegenerateHull(format!(
            "constraint matrix has rank {} < {dim}",
            start.len()
        )));
    }
    let m = rows.len();
    let a0: Vec<Vec<BigRational>> = start.iter().map(|&i| rational[i].clone()).collect();
    let inv = inverse(&a0).expect("independent rows form an invertible matrix");

    // ray j is column j of the inverse: tight on all starting rows but row j
    let mut rays: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    let mut zeros: Vec<Bits> = Vec::with_capacity(dim);
    for j in 0..dim {
        let col: Vec<BigRational> = (0..dim).map(|i| inv[i][j].clone()).collect();
        rays.push(integer_row(&col));
        let mut z = bits_new(m);
        for (k, &row) in start.iter().enumerate() {
            if k != j {
                bit_set(&mut z, row);
            }
        }
        zeros.push(z);
    }

    let mut in_start = vec![false; m];
    for &i in &start {
        in_start[i] = true;
    }
    for (idx, row) in rows.iter().enumerate() {
        if in_start[idx] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, r)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        if neg.is_empty() {
            for (i, v) in values.iter().enumerate() {
                if v.is_zero() {
                    bit_set(&mut zeros[i], idx);
                }
            }
            continue;
        }
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        for &p in &pos {
            for &q in &neg {
                if and_count(&zeros[p], &zeros[q]) + 2 < dim {
                    continue;
                }
                let blocked = (0..rays.len())
                    .any(|k| k != p && k != q && is_superset(&zeros[k], &zeros[p], &zeros[q]));
                if blocked {
                    continue;
                }
                let vp = &values[p];
                let vq = -&values[q];
                let ray: Vec<BigInt> = rays[p]
                    .iter()
                    .zip(&rays[q])
                    .map(|(x, y)| &vq * x + vp * y)
                    .collect();
                let mut z: Bits = zeros[p].iter().zip(&zeros[q]).map(|(x, y)| x & y).collect();
                bit_set(&mut z, idx);
                new_rays.push(primitive(ray));
                new_zeros.push(z);
            }
        }
        let mut kept_rays = Vec::with_capacity(rays.len() + new_rays.len());
        let mut kept_zeros = Vec::with_capacity(rays.len() + new_rays.len());
        for (i, (r, mut z)) in rays.into_iter().zip(zeros).enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                bit_set(&mut z, idx);
            }
            kept_rays.push(r);
            kept_zeros.push(z);
        }
        kept_rays.extend(new_rays);
        kept_zeros.extend(new_zeros);
        rays = kept_rays;
        zeros = kept_zeros;
    }
    Ok(rays)
}

/// Indices of `rows` tight at `x` (zero value).
pub fn tight_rows(rows: &[Vec<BigInt>], x: &[BigInt]) -> Vec<usize> {
    (0..rows.len())
        .filter(|&i| dot(&rows[i], x).is_zero())
        .collect()
}

/// Facets `a·x <= b` of the convex hull of full-dimensional points.
///
/// Each facet is returned with `a` a primitive integer vector and `b` the
/// matching rational right-hand side.
pub fn hull_facets(points: &[Vec<BigRational>]) -> Result<Vec<(Vec<BigInt>, BigRational)>> {
    let Some(first) = points.first() else {
        return Err(Error::DegenerateHull("no points".into()));
    };
    let n = first.len();
    // valid inequality b - a·p >= 0 is a ray (b, a) of the polar cone
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut r = vec![BigRational::one()];
            r.extend(p.iter().map(|x| -x));
            integer_row(&r)
        })
        .collect();
    let rays = extreme_rays(&rows, n + 1)?;
    Ok(rays
        .into_iter()
        .map(|ray| {
            let a = primitive(ray[1..].to_vec());
            let scale = BigRational::new(
                ray[1..].iter().fold(BigInt::zero(), |g, x| g.gcd(x)),
                BigInt::one(),
            );
            let b = BigRational::from_integer(ray[0].clone()) / scale;
            (a, b)
        })
        .collect())
}
