//! Halfspace description of the spectral polytope in sorted coordinates.
//!
//! The polytope `P` is permutation invariant, so it is described by
//! inequalities `Σ_k c_k λ↓_k <= rhs` with `c_1 >= c_2 >= ... >= c_d = 0`.
//! For sorted `x`, `x ∈ P` iff `x` is majorized by a convex combination of
//! the sorted generators, i.e. iff the partial sums `s(x) = (x_1, x_1 + x_2,
//! ..)` lie in `Q = conv{s(g)} - R_+^{d-1}`. The facets of `P` are the facets
//! of `Q` that remain facets after intersecting with the cone of sorted
//! vectors; all steps run in exact arithmetic.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::{extreme_rays, integer_row, rank};
use crate::error::{Error, Result};
use crate::fock::ProblemDims;
use crate::polytope::vertices::{generating_vertices, sorted_generator_points, SymbolicVertex};
use crate::weights::WeightVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKind {
    /// `λ↓_1 <= 1`.
    Pauli,
    /// `λ↓_d >= 0`, written as `λ↓_1 + ... + λ↓_{d-1} <= N`.
    NonNegativity,
    General,
}

fn classify(c: &[i64]) -> FacetKind {
    let d = c.len();
    if c.first() == Some(&1) && c[1..].iter().all(|&x| x == 0) {
        FacetKind::Pauli
    } else if d >= 1 && c[..d - 1].iter().all(|&x| x == 1) && c[d - 1] == 0 {
        FacetKind::NonNegativity
    } else {
        FacetKind::General
    }
}

/// `Σ_k c_k λ↓_k <= rhs` at a fixed weight vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NumericFacet {
    pub c: Vec<i64>,
    pub rhs: BigRational,
}

impl NumericFacet {
    pub fn kind(&self) -> FacetKind {
        classify(&self.c)
    }

    /// `rhs - c·sort_desc(λ)`, exactly.
    pub fn slack_exact(&self, lambda_sorted: &[BigRational]) -> BigRational {
        let lhs: BigRational = self
            .c
            .iter()
            .zip(lambda_sorted)
            .map(|(&c, x)| BigRational::from_integer(c.into()) * x)
            .sum();
        &self.rhs - lhs
    }

    pub fn slack(&self, lambda_sorted: &[f64]) -> f64 {
        let lhs: f64 = self
            .c
            .iter()
            .zip(lambda_sorted)
            .map(|(&c, x)| c as f64 * x)
            .sum();
        crate::weights::to_f64(&self.rhs) - lhs
    }
}

/// `Σ_k c_k λ↓_k <= a0 + Σ_j a_j w_j`, with the gauge `a_r = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub c: Vec<i64>,
    pub a0: i64,
    pub a: Vec<i64>,
}

impl Facet {
    pub fn kind(&self) -> FacetKind {
        classify(&self.c)
    }

    /// Right-hand side at `w` (padded or truncated to the facet's `r`).
    pub fn rhs(&self, w: &WeightVector) -> BigRational {
        let mut v = BigRational::from_integer(self.a0.into());
        for (a, x) in self.a.iter().zip(w.exact()) {
            v += BigRational::from_integer((*a).into()) * x;
        }
        v
    }

    pub fn instantiate(&self, w: &WeightVector) -> NumericFacet {
        NumericFacet {
            c: self.c.clone(),
            rhs: self.rhs(w),
        }
    }

    /// Left-hand side such as `2λ1+2λ2+λ3+λ4`, indices of sorted occupations.
    pub fn render_lhs(&self) -> String {
        let mut out = String::new();
        for (k, &c) in self.c.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&format!("λ{}", k + 1));
        }
        out
    }

    /// Right-hand side with the constant written relative to `N`, e.g.
    /// `N-1+w1` or `2N-2+w1+w2`; the Pauli constraint renders as `1`.
    pub fn normalization(&self, n: usize) -> String {
        let mut out = match self.kind() {
            FacetKind::Pauli => self.a0.to_string(),
            _ => {
                let c1 = self.c.first().copied().unwrap_or(0);
                let k = self.a0 - c1 * n as i64;
                let mut s = match c1 {
                    0 => String::new(),
                    1 => "N".to_string(),
                    _ => format!("{c1}N"),
                };
                if k != 0 || s.is_empty() {
                    if k >= 0 && !s.is_empty() {
                        s.push('+');
                    }
                    s.push_str(&k.to_string());
                }
                s
            }
        };
        for (j, &a) in self.a.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if out == "0" {
                out.clear();
                if a < 0 {
                    out.push('-');
                }
            } else {
                out.push(if a < 0 { '-' } else { '+' });
            }
            if a.abs() != 1 {
                out.push_str(&a.abs().to_string());
            }
            out.push_str(&format!("w{}", j + 1));
        }
        out
    }

    pub fn render(&self, n: usize) -> String {
        format!("{} ≤ {}", self.render_lhs(), self.normalization(n))
    }

    /// The facet one particle and one orbital up: non-Pauli facets gain a
    /// leading copy of `c_1` (and `a0` grows by `c_1`); all gain a trailing 0.
    pub fn lift(&self) -> Facet {
        let mut c = Vec::with_capacity(self.c.len() + 1);
        let mut a0 = self.a0;
        if self.kind() == FacetKind::Pauli {
            c.extend_from_slice(&self.c);
        } else {
            let c1 = self.c.first().copied().unwrap_or(0);
            c.push(c1);
            c.extend_from_slice(&self.c);
            c.pop();
            a0 += c1;
        }
        c.push(0);
        Facet {
            c,
            a0,
            a: self.a.clone(),
        }
    }
}

/// Facets with right-hand sides affine in `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetSystem {
    pub dims: ProblemDims,
    pub facets: Vec<Facet>,
}

impl FacetSystem {
    /// Number of inequalities, not counting the non-negativity facet
    /// `λ↓_d >= 0`.
    pub fn inequality_count(&self) -> usize {
        self.facets
            .iter()
            .filter(|f| f.kind() != FacetKind::NonNegativity)
            .count()
    }

    pub fn instantiate(&self, w: &WeightVector) -> Vec<NumericFacet> {
        self.facets.iter().map(|f| f.instantiate(w)).collect()
    }

    /// The system at `(N+1, d+1)` predicted by [`Facet::lift`].
    pub fn lift(&self) -> Result<FacetSystem> {
        let dims = ProblemDims::new(self.dims.n + 1, self.dims.d + 1, self.dims.r)?;
        let mut facets: Vec<Facet> = self.facets.iter().map(|f| f.lift()).collect();
        facets.sort();
        Ok(FacetSystem { dims, facets })
    }
}

impl fmt::Display for FacetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for facet in &self.facets {
            writeln!(f, "{}", facet.render(self.dims.n))?;
        }
        Ok(())
    }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Interpolation(format!("coefficient {x} does not fit in i64")))
}

/// Facets of the permutation-invariant polytope generated by the orbits of
/// `points`, each of length `d` and sum `n`. Points need not be sorted.
///
/// Fails with [`Error::DegenerateHull`] if the polytope is not
/// full-dimensional inside the hyperplane `Σλ = n`.
pub fn symmetric_facets(
    points: &[Vec<BigRational>],
    n: usize,
    d: usize,
) -> Result<Vec<NumericFacet>> {
    if points.is_empty() {
        return Err(Error::DegenerateHull("no generating points".into()));
    }
    if d < 2 {
        return Err(Error::InvalidDims(format!("need d >= 2, got {d}")));
    }
    let total = q(n as i64);
    let mut sorted = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
        let s: BigRational = p.iter().sum();
        if s != total {
            return Err(Error::Normalization {
                sum: crate::weights::to_f64(&s),
                expected: n as f64,
            });
        }
        let mut v = p.clone();
        v.sort_by(|a, b| b.cmp(a));
        sorted.push(v);
    }
    sorted.sort();
    sorted.dedup();
    let m = d - 1;
    let partial = |v: &[BigRational]| -> Vec<BigRational> {
        let mut acc = BigRational::zero();
        v[..m]
            .iter()
            .map(|x| {
                acc += x;
                acc.clone()
            })
            .collect()
    };

    // facets a·s <= β of Q, as rays (β, a) of {β - a·P >= 0, a >= 0}
    let mut rows: Vec<Vec<BigInt>> = sorted
        .iter()
        .map(|v| {
            let mut r = vec![BigRational::one()];
            r.extend(partial(v).into_iter().map(|x| -x));
            integer_row(&r)
        })
        .collect();
    for k in 0..m {
        let mut r = vec![BigInt::zero(); m + 1];
        r[k + 1] = BigInt::one();
        rows.push(r);
    }
    let q_facets: Vec<Vec<BigInt>> = extreme_rays(&rows, m + 1)?
        .into_iter()
        .filter(|ray| ray[1..].iter().any(|x| !x.is_zero()))
        .collect();

    // vertices of K = Q ∩ {sorted}, homogenized as (t, s)
    let mut k_rows: Vec<Vec<BigInt>> = q_facets
        .iter()
        .map(|ray| {
            let mut r = vec![ray[0].clone()];
            r.extend(ray[1..].iter().map(|x| -x));
            r
        })
        .collect();
    let n_q = k_rows.len();
    for k in 1..d {
        // 2 s_k - s_{k-1} - s_{k+1} >= 0 with s_0 = 0 and s_d = n t
        let mut r = vec![BigInt::zero(); m + 1];
        r[k] += 2;
        if k >= 2 {
            r[k - 1] -= 1;
        }
        if k + 1 <= m {
            r[k + 1] -= 1;
        } else {
            r[0] -= n as i64;
        }
        k_rows.push(r);
    }
    let mut t_row = vec![BigInt::zero(); m + 1];
    t_row[0] = BigInt::one();
    k_rows.push(t_row);
    let verts: Vec<Vec<BigInt>> = extreme_rays(&k_rows, m + 1)?;
    if verts.iter().any(|v| !v[0].is_positive()) {
        return Err(Error::DegenerateHull("sorted region is unbounded".into()));
    }
    let vert_q: Vec<Vec<BigRational>> = verts
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    if rank(&vert_q) < m + 1 {
        return Err(Error::DegenerateHull(format!(
            "polytope has dimension below {m} (degenerate weights?)"
        )));
    }

    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let tight = |row: &[BigInt]| -> BTreeSet<usize> {
        (0..verts.len())
            .filter(|&i| dot(row, &verts[i]).is_zero())
            .collect()
    };
    let walls: Vec<BTreeSet<usize>> = (n_q..n_q + m).map(|i| tight(&k_rows[i])).collect();

    let mut out = BTreeSet::new();
    for (i, ray) in q_facets.iter().enumerate() {
        let t = tight(&k_rows[i]);
        if walls.iter().any(|w| t.is_subset(w)) {
            continue;
        }
        let pts: Vec<Vec<BigRational>> = t.iter().map(|&j| vert_q[j].clone()).collect();
        if rank(&pts) != m {
            continue;
        }
        // a·s = Σ_i x_i Σ_{k>=i} a_k
        let a = &ray[1..];
        let mut c = vec![BigInt::zero(); d];
        let mut acc = BigInt::zero();
        for k in (0..m).rev() {
            acc += &a[k];
            c[k] = acc.clone();
        }
        let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            continue;
        }
        let rhs = BigRational::new(ray[0].clone(), g.clone());
        let c: Vec<BigInt> = c.iter().map(|x| x / &g).collect();
        let c = c.iter().map(to_i64).collect::<Result<Vec<_>>>()?;
        out.insert(NumericFacet { c, rhs });
    }
    Ok(out.into_iter().collect())
}

/// Exact facets of the polytope at `(dims, w)` in sorted coordinates,
/// sorted lexicographically by coefficient vector.
pub fn facets_numeric(dims: &ProblemDims, w: &WeightVector) -> Result<Vec<NumericFacet>> {
    let gens = generating_vertices(&effective_dims(dims, w)?)?;
    facets_from_generators(&gens, dims, w)
}

pub fn facets_from_generators(
    gens: &[SymbolicVertex],
    dims: &ProblemDims,
    w: &WeightVector,
) -> Result<Vec<NumericFacet>> {
    let pts = sorted_generator_points(gens, w)?;
    symmetric_facets(&pts, dims.n, dims.d)
}

/// `dims` with `r` replaced by the number of positive weights.
pub fn effective_dims(dims: &ProblemDims, w: &WeightVector) -> Result<ProblemDims> {
    if w.r() > dims.r {
        return Err(Error::DimensionMismatch {
            expected: dims.r,
            found: w.r(),
        });
    }
    dims.with_r(w.r())
}

/// Strictly descending weights `∝ 3^{r-j} (100 + p_j)` with small pseudo-random
/// sample-dependent perturbations `p_j`; every weight exceeds the sum of
/// all smaller ones.
pub fn generic_weights(r: usize, sample: usize) -> WeightVector {
    let raw: Vec<BigRational> = (0..r)
        .map(|j| {
            let h = (sample * 31 + j * 17 + 11) * (sample * 7 + j * j * 13 + 3);
            let p = (h % 29) as i64;
            q(3i64.pow((r - 1 - j) as u32) * (100 + p))
        })
        .collect();
    WeightVector::normalized(raw).expect("generic weights are valid")
}

/// Solves the square system `m x = b` exactly.
fn solve_square(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        b.swap(col, p);
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &m[col][col];
            let pivot = m[col].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
            let bc = b[col].clone();
            b[i] -= &f * bc;
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// Number of extra weight samples used to verify an interpolated facet system.
pub const VERIFY_SAMPLES: usize = 3;

/// Facets with right-hand sides affine in `w`.
///
/// Numeric facets are computed at `r` generic weight vectors, matched by
/// coefficient vector, and `(a0, a)` is solved exactly under the gauge
/// `a_r = 0`; the result is checked on [`VERIFY_SAMPLES`] further samples
/// and must have integer coefficients.
pub fn facets_symbolic(dims: &ProblemDims) -> Result<FacetSystem> {
    let gens = generating_vertices(dims)?;
    facets_symbolic_from_generators(&gens, dims)
}

pub fn facets_symbolic_from_generators(
    gens: &[SymbolicVertex],
    dims: &ProblemDims,
) -> Result<FacetSystem> {
    let r = dims.r;
    let samples: Vec<WeightVector> = (0..r + VERIFY_SAMPLES)
        .map(|s| generic_weights(r, s))
        .collect();
    let systems: Vec<Vec<NumericFacet>> = samples
        .iter()
        .map(|w| facets_from_generators(gens, dims, w))
        .collect::<Result<_>>()?;
    let coeffs: Vec<Vec<i64>> = systems[0].iter().map(|f| f.c.clone()).collect();
    for (s, sys) in systems.iter().enumerate().skip(1) {
        let cs: Vec<Vec<i64>> = sys.iter().map(|f| f.c.clone()).collect();
        if cs != coeffs {
            return Err(Error::Interpolation(format!(
                "facet normals differ between weight samples 0 and {s}: {} vs {} facets at {} and {}",
                coeffs.len(),
                cs.len(),
                samples[0],
                samples[s]
            )));
        }
    }
    let mut facets = Vec::with_capacity(coeffs.len());
    for (fi, c) in coeffs.iter().enumerate() {
        // rhs = a0 + Σ_{j<r} a_j w_j
        let row = |w: &WeightVector| -> Vec<BigRational> {
            let mut v = vec![BigRational::one()];
            v.extend(w.exact()[..r - 1].iter().cloned());
            v
        };
        let m: Vec<Vec<BigRational>> = samples[..r].iter().map(row).collect();
        let b: Vec<BigRational> = systems[..r].iter().map(|s| s[fi].rhs.clone()).collect();
        let x = solve_square(m, b)
            .ok_or_else(|| Error::Interpolation("weight samples are affinely dependent".into()))?;
        for s in r..samples.len() {
            let predicted: BigRational = row(&samples[s]).iter().zip(&x).map(|(a, b)| a * b).sum();
            if predicted != systems[s][fi].rhs {
                return Err(Error::Interpolation(format!(
                    "right-hand side of facet {c:?} is not affine in w (sample {s})"
                )));
            }
        }
        if let Some(bad) = x.iter().find(|v| !v.is_integer()) {
            return Err(Error::Interpolation(format!(
                "non-integer coefficient {bad} for facet {c:?}"
            )));
        }
        let ints = x
            .iter()
            .map(|v| to_i64(&v.to_integer()))
            .collect::<Result<Vec<_>>>()?;
        let mut a = ints[1..].to_vec();
        a.push(0);
        facets.push(Facet {
            c: c.clone(),
            a0: ints[0],
            a,
        });
    }
    facets.sort();
    Ok(FacetSystem {
        dims: *dims,
        facets,
    })
}

/// True iff `rhs - c·v >= 0` for every facet and every permutation-sorted `v`.
pub fn all_satisfied(facets: &[NumericFacet], points: &[Vec<BigRational>]) -> bool {
    points.iter().all(|p| {
        let mut v = p.clone();
        v.sort_by(|a, b| b.cmp(a));
        facets.iter().all(|f| !f.slack_exact(&v).is_negative())
    })
}
