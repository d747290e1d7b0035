//! Realizable sequences of the `r` lowest configurations.
//!
//! A sequence `i_1, ..., i_r` is realizable if some increasingly ordered
//! one-particle spectrum `h_1 < ... < h_d` makes it exactly the `r`
//! energetically lowest configurations, in that order, with no ties. The
//! set of such `h` is an open polyhedral cone (a chamber); realizability is
//! decided by an exact LP maximizing the minimum gap `δ` between
//! consecutive energies.
//!
//! The spectrum is parametrized by its increments `u_k = h_{k+1} - h_k >= 0`
//! with `h_1 = 0`, so that `E(c) = Σ_k u_k · #{i ∈ c : i > k}` and
//! `h_d - h_1 = Σ u_k <= 1`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{enumerate_configs, gale_lt, Configuration, ProblemDims, DEFAULT_CONFIG_CAP};
use crate::lp::{solve, Constraint, LinearProgram, LpOutcome, Relation};

/// Largest `r` accepted by [`enumerate_sequences`] unless overridden.
pub const DEFAULT_R_CAP: usize = 9;

/// An ordered list of distinct configurations, lowest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LowestSequence {
    pub seq: Vec<Configuration>,
}

impl LowestSequence {
    /// Checks structure only: non-empty, distinct, equal lengths, starts at
    /// `(1..N)`, and no later entry is strictly Gale-below an earlier one.
    pub fn new(seq: Vec<Configuration>) -> Result<Self> {
        let Some(first) = seq.first() else {
            return Err(Error::InvalidConfiguration("empty sequence".into()));
        };
        let n = first.len();
        if *first != Configuration::lowest(n) {
            return Err(Error::InvalidConfiguration(format!(
                "sequence must start with {}, got {first}",
                Configuration::lowest(n)
            )));
        }
        let mut seen = HashSet::new();
        for c in &seq {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            if !seen.insert(c.mask()) {
                return Err(Error::InvalidConfiguration(format!("{c} repeated")));
            }
        }
        for (j, a) in seq.iter().enumerate() {
            for b in &seq[j + 1..] {
                if gale_lt(b, a)? {
                    return Err(Error::InvalidConfiguration(format!(
                        "{b} is Gale-below {a} but comes later"
                    )));
                }
            }
        }
        Ok(Self { seq })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.seq
    }
}

impl fmt::Display for LowestSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.seq.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The chamber of a sequence: linear forms `f(h) >= 0` in `h_1..h_d`.
///
/// Contains the ordering `h_{k+1} - h_k >= 0`, the energy order of the
/// sequence and `E(t) - E(seq_r) >= 0` for every `t` outside the sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Chamber {
    pub inequalities: Vec<Vec<BigRational>>,
    /// Optimal minimum gap `δ*` of the normalized LP.
    pub slack: BigRational,
}

impl Chamber {
    pub fn is_realizable(&self) -> bool {
        self.slack.is_positive()
    }
}

fn occupation_form(c: &Configuration, d: usize) -> Vec<BigRational> {
    c.occupation(d)
        .into_iter()
        .map(|x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

/// Builds the chamber of `seq` and solves the gap LP exactly.
pub fn chamber(seq: &LowestSequence, dims: &ProblemDims) -> Result<Chamber> {
    let configs = enumerate_configs(dims, DEFAULT_CONFIG_CAP)?;
    check_sequence(seq, dims)?;
    let d = dims.d;
    let mut inequalities = Vec::new();
    for k in 0..d - 1 {
        let mut f = vec![BigRational::zero(); d];
        f[k] = -BigRational::one();
        f[k + 1] = BigRational::one();
        inequalities.push(f);
    }
    let forms: Vec<Vec<BigRational>> = seq.seq.iter().map(|c| occupation_form(c, d)).collect();
    for p in forms.windows(2) {
        inequalities.push(p[1].iter().zip(&p[0]).map(|(a, b)| a - b).collect());
    }
    let last = forms.last().expect("non-empty sequence");
    let chosen: HashSet<u64> = seq.seq.iter().map(|c| c.mask()).collect();
    for t in configs.iter().filter(|t| !chosen.contains(&t.mask())) {
        let ft = occupation_form(t, d);
        inequalities.push(ft.iter().zip(last).map(|(a, b)| a - b).collect());
    }
    let others: Vec<&Configuration> = configs
        .iter()
        .filter(|t| !chosen.contains(&t.mask()))
        .collect();
    let slack = gap_lp(&seq.seq, &others, d)?;
    Ok(Chamber {
        inequalities,
        slack,
    })
}

/// Exact realizability test: returns `(δ* > 0, δ*)`.
///
/// Only the minimal elements of the complement need explicit constraints
/// when the sequence is closed under Gale predecessors; otherwise all
/// remaining configurations are constrained.
pub fn chamber_feasible(seq: &LowestSequence, dims: &ProblemDims) -> Result<(bool, BigRational)> {
    check_sequence(seq, dims)?;
    let delta = if is_down_closed(&seq.seq) {
        let frontier = frontier(&seq.seq, dims.d);
        let refs: Vec<&Configuration> = frontier.iter().collect();
        gap_lp(&seq.seq, &refs, dims.d)?
    } else {
        let configs = enumerate_configs(dims, DEFAULT_CONFIG_CAP)?;
        let chosen: HashSet<u64> = seq.seq.iter().map(|c| c.mask()).collect();
        let others: Vec<&Configuration> = configs
            .iter()
            .filter(|t| !chosen.contains(&t.mask()))
            .collect();
        gap_lp(&seq.seq, &others, dims.d)?
    };
    Ok((delta.is_positive(), delta))
}

fn check_sequence(seq: &LowestSequence, dims: &ProblemDims) -> Result<()> {
    for c in &seq.seq {
        if c.len() != dims.n {
            return Err(Error::DimensionMismatch {
                expected: dims.n,
                found: c.len(),
            });
        }
        if c.max_orbital() > dims.d {
            return Err(Error::InvalidConfiguration(format!(
                "{c} uses an orbital beyond d={}",
                dims.d
            )));
        }
    }
    Ok(())
}

/// True iff every lower cover of every member is also a member.
fn is_down_closed(seq: &[Configuration]) -> bool {
    let chosen: HashSet<u64> = seq.iter().map(|c| c.mask()).collect();
    seq.iter()
        .all(|c| c.lower_covers().iter().all(|l| chosen.contains(&l.mask())))
}

/// Unchosen configurations all of whose lower covers are chosen.
fn frontier(seq: &[Configuration], d: usize) -> Vec<Configuration> {
    let chosen: HashSet<u64> = seq.iter().map(|c| c.mask()).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in seq {
        for u in c.upper_covers(d) {
            let m = u.mask();
            if chosen.contains(&m) || !seen.insert(m) {
                continue;
            }
            if u.lower_covers().iter().all(|l| chosen.contains(&l.mask())) {
                out.push(u);
            }
        }
    }
    out.sort();
    out
}

/// `#{i ∈ c : i > k}` for `k = 1..d-1`: the energy of `c` as a form in the increments.
fn increment_form(c: &Configuration, d: usize) -> Vec<i64> {
    (1..d)
        .map(|k| c.orbitals().iter().filter(|&&i| i > k).count() as i64)
        .collect()
}

/// Maximizes `δ` over increments `u >= 0`, `Σu <= 1`, subject to
/// consecutive gaps in `seq` and gaps from the last member to every `other`.
fn gap_lp(seq: &[Configuration], others: &[&Configuration], d: usize) -> Result<BigRational> {
    if seq.len() == 1 && others.is_empty() {
        // nothing to separate; the gap is unbounded in principle, report 1
        return Ok(BigRational::one());
    }
    let nu = d - 1;
    let forms: Vec<Vec<i64>> = seq.iter().map(|c| increment_form(c, d)).collect();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    // δ - (E(b) - E(a)) <= 0
    let gap_row = |a: &[i64], b: &[i64]| -> Constraint {
        let mut coeffs: Vec<BigRational> = a.iter().zip(b).map(|(x, y)| q(x - y)).collect();
        coeffs.push(BigRational::one());
        Constraint::new(coeffs, Relation::Le, BigRational::zero())
    };
    let mut constraints = Vec::with_capacity(seq.len() + others.len() + 1);
    for p in forms.windows(2) {
        constraints.push(gap_row(&p[0], &p[1]));
    }
    let last = forms.last().expect("non-empty sequence");
    for t in others {
        constraints.push(gap_row(last, &increment_form(t, d)));
    }
    let mut norm = vec![BigRational::one(); nu];
    norm.push(BigRational::zero());
    constraints.push(Constraint::new(norm, Relation::Le, BigRational::one()));
    let mut objective = vec![BigRational::zero(); nu];
    objective.push(BigRational::one());
    match solve(&LinearProgram {
        objective,
        constraints,
    }) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded => Err(Error::LpUnbounded),
        LpOutcome::Infeasible => Err(Error::Infeasible(
            "gap LP infeasible although u = 0, δ = 0 is feasible".into(),
        )),
    }
}

/// All realizable sequences of length `dims.r`, sorted lexicographically.
pub fn enumerate_sequences(dims: &ProblemDims) -> Result<Vec<LowestSequence>> {
    enumerate_sequences_with_caps(dims, DEFAULT_CONFIG_CAP, DEFAULT_R_CAP)
}

pub fn enumerate_sequences_with_caps(
    dims: &ProblemDims,
    config_cap: u128,
    r_cap: usize,
) -> Result<Vec<LowestSequence>> {
    let count = dims.fock_dim();
    if count > config_cap {
        return Err(Error::CapacityExceeded {
            what: "C(d,N)",
            value: count,
            cap: config_cap,
        });
    }
    if dims.r > r_cap {
        return Err(Error::CapacityExceeded {
            what: "r",
            value: dims.r as u128,
            cap: r_cap as u128,
        });
    }
    let root = vec![Configuration::lowest(dims.n)];
    if dims.r == 1 {
        return Ok(vec![LowestSequence { seq: root }]);
    }
    let first = candidates(&root, dims.d);
    let branches: Vec<Result<Vec<Vec<Configuration>>>> = first
        .into_par_iter()
        .map(|c| {
            let mut prefix = root.clone();
            prefix.push(c);
            let mut out = Vec::new();
            if feasible_prefix(&prefix, dims.d)? {
                dfs(&mut prefix, dims, &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for b in branches {
        all.extend(b?);
    }
    all.sort();
    Ok(all.into_iter().map(|seq| LowestSequence { seq }).collect())
}

/// Candidates extending a down-closed prefix: unchosen configurations whose
/// strict Gale predecessors are all chosen, in lexicographic order.
fn candidates(prefix: &[Configuration], d: usize) -> Vec<Configuration> {
    frontier(prefix, d)
}

fn feasible_prefix(prefix: &[Configuration], d: usize) -> Result<bool> {
    let front = frontier(prefix, d);
    let refs: Vec<&Configuration> = front.iter().collect();
    Ok(gap_lp(prefix, &refs, d)?.is_positive())
}

fn dfs(
    prefix: &mut Vec<Configuration>,
    dims: &ProblemDims,
    out: &mut Vec<Vec<Configuration>>,
) -> Result<()> {
    if prefix.len() == dims.r {
        out.push(prefix.clone());
        return Ok(());
    }
    for c in candidates(prefix, dims.d) {
        prefix.push(c);
        if feasible_prefix(prefix, dims.d)? {
            dfs(prefix, dims, out)?;
        }
        prefix.pop();
    }
    Ok(())
}
