//! Second quantization on the N-fermion wedge space.
//!
//! Basis states are configurations in lexicographic order, with
//! `|i_1 < ... < i_N⟩ = a†_{i_1} ... a†_{i_N} |vac⟩`. Applying `a_p` or
//! `a†_p` to a basis state picks up the sign `(-1)^{#occupied orbitals below p}`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{enumerate_masks, ProblemDims};

pub type CMatrix = DMatrix<Complex64>;

/// Default cap on the wedge-space dimension `D = C(d, N)`.
pub const DEFAULT_D_CAP: u128 = 5000;

/// Hermiticity tolerance for operator inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;

fn sign_below(mask: u64, p: usize) -> f64 {
    if (mask & ((1u64 << p) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Basis of the N-fermion space over `d` orbitals plus the one-body
/// transition table `a†_p a_q |J⟩ = s |I⟩`.
#[derive(Clone, Debug)]
pub struct FockSpace {
    n: usize,
    d: usize,
    masks: Vec<u64>,
    index: HashMap<u64, usize>,
    // transitions[p * d + q] lists (I, J, s) with a†_p a_q |J⟩ = s |I⟩ (0-indexed p, q)
    transitions: Vec<Vec<(usize, usize, f64)>>,
}

impl FockSpace {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Self::with_cap(n, d, DEFAULT_D_CAP)
    }

    pub fn with_cap(n: usize, d: usize, cap: u128) -> Result<Self> {
        let dims = ProblemDims::new(n, d, 1)?;
        let masks = enumerate_masks(&dims, cap).map_err(|e| match e {
            Error::CapacityExceeded { value, cap, .. } => Error::CapacityExceeded {
                what: "D = C(d,N)",
                value,
                cap,
            },
            other => other,
        })?;
        let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut transitions = vec![Vec::new(); d * d];
        for (j, &mask) in masks.iter().enumerate() {
            for q in 0..d {
                if mask >> q & 1 == 0 {
                    continue;
                }
                let s1 = sign_below(mask, q);
                let m1 = mask & !(1u64 << q);
                for p in 0..d {
                    if m1 >> p & 1 == 1 {
                        continue;
                    }
                    let s2 = sign_below(m1, p);
                    let i = index[&(m1 | 1u64 << p)];
                    transitions[p * d + q].push((i, j, s1 * s2));
                }
            }
        }
        Ok(Self {
            n,
            d,
            masks,
            index,
            transitions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `D = C(d, N)`.
    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Basis index of a configuration bitmask.
    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Entries `(I, J, s)` of `a†_p a_q` (0-indexed orbitals).
    pub fn hopping(&self, p: usize, q: usize) -> &[(usize, usize, f64)] {
        &self.transitions[p * self.d + q]
    }

    /// `ĝ = Σ_pq g_pq a†_p a_q` as a `D × D` matrix.
    pub fn one_body_lift(&self, g: &CMatrix) -> Result<CMatrix> {
        self.check_square(g, self.d)?;
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for p in 0..self.d {
            for q in 0..self.d {
                let gpq = g[(p, q)];
                if gpq == Complex64::ZERO {
                    continue;
                }
                for &(i, j, s) in self.hopping(p, q) {
                    out[(i, j)] += gpq * s;
                }
            }
        }
        Ok(out)
    }

    /// `γ_pq = Tr[Γ a†_q a_p]`.
    pub fn one_rdm(&self, gamma: &CMatrix) -> Result<CMatrix> {
        self.check_square(gamma, self.dim())?;
        let mut out = CMatrix::zeros(self.d, self.d);
        for p in 0..self.d {
            for q in 0..self.d {
                let mut acc = Complex64::ZERO;
                for &(i, j, s) in self.hopping(q, p) {
                    acc += gamma[(j, i)] * s;
                }
                out[(p, q)] = acc;
            }
        }
        Ok(out)
    }

    fn check_square(&self, m: &CMatrix, size: usize) -> Result<()> {
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: if m.nrows() != size {
                    m.nrows()
                } else {
                    m.ncols()
                },
            });
        }
        Ok(())
    }
}

/// Largest entrywise deviation `|A - A†|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(a: &CMatrix, tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidOperator(format!(
            "matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let dev = hermitian_deviation(a);
    let scale = 1.0 + a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if dev > tol * scale {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// A Hermitian `d × d` one-particle Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct OneBodyOperator(CMatrix);

impl OneBodyOperator {
    pub fn new(h: CMatrix) -> Result<Self> {
        check_hermitian(&h, HERMITIAN_TOL)?;
        Ok(Self(h))
    }

    pub fn diagonal(e: &[f64]) -> Self {
        let v: Vec<Complex64> = e.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v)))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.nrows()
    }
}

/// One sparse interaction coefficient with 1-indexed orbitals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionEntry {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Coefficients of `V = 1/4 Σ V_pqrs a†_p a†_q a_s a_r`, stored densely,
/// antisymmetric in `(p,q)` and in `(r,s)`, with `V_pqrs = conj(V_rspq)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoBodyInteraction {
    d: usize,
    v: Vec<Complex64>,
}

impl TwoBodyInteraction {
    pub fn zero(d: usize) -> Self {
        Self {
            d,
            v: vec![Complex64::ZERO; d.pow(4)],
        }
    }

    fn idx(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.d + q) * self.d + r) * self.d + s
    }

    /// Dense coefficients in `p, q, r, s` row-major order (0-indexed).
    pub fn from_dense(d: usize, v: Vec<Complex64>) -> Result<Self> {
        if v.len() != d.pow(4) {
            return Err(Error::DimensionMismatch {
                expected: d.pow(4),
                found: v.len(),
            });
        }
        let out = Self { d, v };
        out.validate()?;
        Ok(out)
    }

    /// Sets each listed coefficient together with the partners implied by
    /// antisymmetry and Hermiticity; conflicting entries are an error.
    pub fn from_entries(d: usize, entries: &[InteractionEntry]) -> Result<Self> {
        let mut out = Self::zero(d);
        let mut set = vec![false; d.pow(4)];
        for e in entries {
            if [e.p, e.q, e.r, e.s].iter().any(|&i| i == 0 || i > d) {
                return Err(Error::InvalidOperator(format!(
                    "interaction index out of 1..={d}: ({},{},{},{})",
                    e.p, e.q, e.r, e.s
                )));
            }
            let (p, q, r, s) = (e.p - 1, e.q - 1, e.r - 1, e.s - 1);
            let x = Complex64::new(e.re, e.im);
            if (p == q || r == s) && x != Complex64::ZERO {
                return Err(Error::InvalidOperator(format!(
                    "V_pqrs must vanish for p = q or r = s: ({},{},{},{})",
                    e.p, e.q, e.r, e.s
                )));
            }
            let partners = [
                (p, q, r, s, x),
                (q, p, r, s, -x),
                (p, q, s, r, -x),
                (q, p, s, r, x),
                (r, s, p, q, x.conj()),
                (s, r, p, q, -x.conj()),
                (r, s, q, p, -x.conj()),
                (s, r, q, p, x.conj()),
            ];
            for (a, b, c, dd, val) in partners {
                let k = out.idx(a, b, c, dd);
                if set[k] && (out.v[k] - val).norm() > HERMITIAN_TOL * (1.0 + val.norm()) {
                    return Err(Error::InvalidOperator(format!(
                        "conflicting interaction entries at ({},{},{},{})",
                        a + 1,
                        b + 1,
                        c + 1,
                        dd + 1
                    )));
                }
                out.v[k] = val;
                set[k] = true;
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.d;
        for p in 0..d {
            for q in 0..d {
                for r in 0..d {
                    for s in 0..d {
                        let x = self.get(p, q, r, s);
                        let tol = HERMITIAN_TOL * (1.0 + x.norm());
                        if (x + self.get(q, p, r, s)).norm() > tol
                            || (x + self.get(p, q, s, r)).norm() > tol
                        {
                            return Err(Error::InvalidOperator(format!(
                                "V is not antisymmetric at ({},{},{},{})",
                                p + 1,
                                q + 1,
                                r + 1,
                                s + 1
                            )));
                        }
                        if (x - self.get(r, s, p, q).conj()).norm() > tol {
                            return Err(Error::NotHermitian(
                                (x - self.get(r, s, p, q).conj()).norm(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// 0-indexed coefficient.
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> Complex64 {
        self.v[self.idx(p, q, r, s)]
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(|x| *x == Complex64::ZERO)
    }

    /// Nonzero coefficients with `p < q` and `r < s`, 1-indexed.
    pub fn entries(&self) -> Vec<InteractionEntry> {
        let d = self.d;
        let mut out = Vec::new();
        for p in 0..d {
            for q in p + 1..d {
                for r in 0..d {
                    for s in r + 1..d {
                        let x = self.get(p, q, r, s);
                        if x != Complex64::ZERO {
                            out.push(InteractionEntry {
                                p: p + 1,
                                q: q + 1,
                                r: r + 1,
                                s: s + 1,
                                re: x.re,
                                im: x.im,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Matrix of `V` on the wedge space.
    pub fn matrix(&self, space: &FockSpace) -> Result<CMatrix> {
        if space.d() != self.d {
            return Err(Error::DimensionMismatch {
                expected: space.d(),
                found: self.d,
            });
        }
        let d = self.d;
        let dim = space.dim();
        let mut out = CMatrix::zeros(dim, dim);
        if self.is_zero() {
            return Ok(out);
        }
        for (j, &mask) in space.masks().iter().enumerate() {
            // a†_p a†_q a_s a_r |J⟩, with r, s occupied and p, q empty afterwards
            for r in 0..d {
                if mask >> r & 1 == 0 {
                    continue;
                }
                let s_r = sign_below(mask, r);
                let m1 = mask & !(1u64 << r);
                for s in 0..d {
                    if m1 >> s & 1 == 0 {
                        continue;
                    }
                    let s_s = sign_below(m1, s);
                    let m2 = m1 & !(1u64 << s);
                    for q in 0..d {
                        if m2 >> q & 1 == 1 {
                            continue;
                        }
                        let s_q = sign_below(m2, q);
                        let m3 = m2 | 1u64 << q;
                        for p in 0..d {
                            if m3 >> p & 1 == 1 {
                                continue;
                            }
                            let x = self.get(p, q, r, s);
                            if x == Complex64::ZERO {
                                continue;
                            }
                            let s_p = sign_below(m3, p);
                            let i = space
                                .index_of(m3 | 1u64 << p)
                                .expect("particle number is conserved");
                            out[(i, j)] += x * (0.25 * s_r * s_s * s_q * s_p);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `H = ĥ + V̂` on the wedge space.
pub fn build_hamiltonian(
    h: &OneBodyOperator,
    v: &TwoBodyInteraction,
    space: &FockSpace,
) -> Result<CMatrix> {
    if h.d() != space.d() {
        return Err(Error::DimensionMismatch {
            expected: space.d(),
            found: h.d(),
        });
    }
    Ok(space.one_body_lift(h.matrix())? + v.matrix(space)?)
}

/// Checks `Γ = Γ†`, `Tr Γ = 1` within 1e-10 and `Γ >= -1e-10`.
pub fn check_density(gamma: &CMatrix) -> Result<()> {
    check_hermitian(gamma, 1e-10)?;
    let tr = gamma.trace().re;
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization {
            sum: tr,
            expected: 1.0,
        });
    }
    let eig = nalgebra::SymmetricEigen::new(gamma.clone()).eigenvalues;
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -1e-10 {
        return Err(Error::InvalidOperator(format!(
            "density operator has eigenvalue {min:e}"
        )));
    }
    Ok(())
}

/// Checks `0 <= γ <= 1` within 1e-9 and `Tr γ = N` within 1e-9.
pub fn check_one_rdm(gamma: &CMatrix, n: usize) -> Result<()> {
    check_hermitian(gamma, 1e-9)?;
    let tr = gamma.trace().re;
    if (tr - n as f64).abs() > 1e-9 {
        return Err(Error::Normalization {
            sum: tr,
            expected: n as f64,
        });
    }
    let eig = nalgebra::SymmetricEigen::new(gamma.clone()).eigenvalues;
    if eig.iter().any(|&x| !(-1e-9..=1.0 + 1e-9).contains(&x)) {
        return Err(Error::InvalidOperator(
            "occupation numbers outside [0, 1]".into(),
        ));
    }
    Ok(())
}
