//! Vertices of the spectral polytope from realizable sequences.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chambers::{enumerate_sequences, LowestSequence};
use crate::error::{Error, Result};
use crate::fock::ProblemDims;
use crate::weights::WeightVector;

/// `λ_k = Σ_j w_j [k ∈ seq_j]`, exactly. The weights are padded with zeros
/// up to the sequence length.
pub fn vertex_from_sequence(
    seq: &LowestSequence,
    w: &WeightVector,
    d: usize,
) -> Result<Vec<BigRational>> {
    SymbolicVertex::from_sequence(seq, d)?.evaluate(w)
}

/// A `d × r` binary matrix `B`; column `j` is the occupation vector of the
/// `j`-th configuration and the vertex is `λ = B w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolicVertex {
    rows: Vec<Vec<u8>>,
}

impl SymbolicVertex {
    pub fn from_sequence(seq: &LowestSequence, d: usize) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::InvalidConfiguration("empty sequence".into()));
        }
        let mut rows = vec![Vec::with_capacity(seq.len()); d];
        for c in seq.configs() {
            if c.max_orbital() > d {
                return Err(Error::InvalidConfiguration(format!("{c} exceeds d={d}")));
            }
            let occ = c.occupation(d);
            for (k, row) in rows.iter_mut().enumerate() {
                row.push(occ[k]);
            }
        }
        Ok(Self { rows })
    }

    /// Validates shape and column sums.
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        let r = rows.first().map_or(0, |x| x.len());
        if r == 0
            || rows
                .iter()
                .any(|x| x.len() != r || x.iter().any(|&b| b > 1))
        {
            return Err(Error::InvalidConfiguration(
                "rows must be equal-length 0/1 vectors".into(),
            ));
        }
        let n: usize = rows.iter().map(|x| x[0] as usize).sum();
        for j in 1..r {
            let s: usize = rows.iter().map(|x| x[j] as usize).sum();
            if s != n {
                return Err(Error::InvalidConfiguration(format!(
                    "column {j} has {s} particles, column 0 has {n}"
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn r(&self) -> usize {
        self.rows.first().map_or(0, |x| x.len())
    }

    /// Row value under the reference weights `(2^{r-1}, ..., 2, 1)`.
    pub fn row_key(row: &[u8]) -> u64 {
        row.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Rows sorted descending by [`Self::row_key`]: the representative of the
    /// row-permutation class, ordered like the vertex at generic descending w.
    pub fn canonical(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|x| std::cmp::Reverse(Self::row_key(x)));
        Self { rows }
    }

    fn keys(&self) -> Vec<u64> {
        self.rows.iter().map(|x| Self::row_key(x)).collect()
    }

    /// `B w` with `w` padded to `r` entries.
    pub fn evaluate(&self, w: &WeightVector) -> Result<Vec<BigRational>> {
        let r = self.r();
        if w.r() > r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: w.r(),
            });
        }
        let ws = w.exact();
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(ws)
                    .filter(|(&b, _)| b == 1)
                    .map(|(_, x)| x.clone())
                    .sum()
            })
            .collect())
    }

    pub fn evaluate_f64(&self, w: &WeightVector) -> Result<Vec<f64>> {
        Ok(self
            .evaluate(w)?
            .iter()
            .map(crate::weights::to_f64)
            .collect())
    }

    /// Entries as symbolic strings: `1`, `0` or sums like `w1+w3`.
    pub fn symbolic(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|row| {
                if row.iter().all(|&b| b == 1) {
                    "1".to_string()
                } else if row.iter().all(|&b| b == 0) {
                    "0".to_string()
                } else {
                    let terms: Vec<String> = row
                        .iter()
                        .enumerate()
                        .filter(|(_, &b)| b == 1)
                        .map(|(j, _)| format!("w{}", j + 1))
                        .collect();
                    terms.join("+")
                }
            })
            .collect()
    }
}

impl fmt::Display for SymbolicVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.symbolic().join(", "))
    }
}

/// A generating vertex with one sequence that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub vertex: SymbolicVertex,
    pub sequence: LowestSequence,
}

/// Canonical generating vertices: one per row-multiset class, ordered
/// descending by their canonical row keys.
pub fn generating_vertices(dims: &ProblemDims) -> Result<Vec<SymbolicVertex>> {
    Ok(generators(dims)?.into_iter().map(|g| g.vertex).collect())
}

/// Like [`generating_vertices`], keeping the lexicographically first
/// realizing sequence of each class.
pub fn generators(dims: &ProblemDims) -> Result<Vec<Generator>> {
    let seqs = enumerate_sequences(dims)?;
    generators_from_sequences(&seqs, dims.d)
}

pub fn generators_from_sequences(seqs: &[LowestSequence], d: usize) -> Result<Vec<Generator>> {
    let mut classes: BTreeMap<std::cmp::Reverse<Vec<u64>>, Generator> = BTreeMap::new();
    for s in seqs {
        let vertex = SymbolicVertex::from_sequence(s, d)?.canonical();
        classes
            .entry(std::cmp::Reverse(vertex.keys()))
            .or_insert_with(|| Generator {
                vertex,
                sequence: s.clone(),
            });
    }
    Ok(classes.into_values().collect())
}

/// Distinct generator values at `w`, each sorted descending.
pub fn sorted_generator_points(
    gens: &[SymbolicVertex],
    w: &WeightVector,
) -> Result<Vec<Vec<BigRational>>> {
    let mut pts: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|g| {
            let mut v = g.evaluate(w)?;
            v.sort_by(|a, b| b.cmp(a));
            Ok(v)
        })
        .collect::<Result<_>>()?;
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// All distinct permutations of `v` (multiset permutations), in lexicographic order.
pub fn permutation_orbit(v: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut cur = v.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let n = cur.len();
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Sum of a vertex, which is `N` for valid weights.
pub fn total(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |a, x| a + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Configuration;
    use num_traits::One;

    fn seq(v: &[&[usize]]) -> LowestSequence {
        LowestSequence::new(
            v.iter()
                .map(|c| Configuration::new(c.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn n3_vertices() {
        let dims = ProblemDims::new(3, 5, 3).unwrap();
        let gens = generating_vertices(&dims).unwrap();
        let shown: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(
            shown,
            vec!["(1, 1, w1, w2, w3)", "(1, w1+w2, w1+w3, w2+w3, 0)"]
        );
    }

    #[test]
    fn evaluation_and_normalization() {
        let w = WeightVector::parse("0.5,0.3,0.2").unwrap();
        let s = seq(&[&[1, 2], &[1, 3], &[2, 3]]);
        let v: Vec<f64> = vertex_from_sequence(&s, &w, 3)
            .unwrap()
            .iter()
            .map(crate::weights::to_f64)
            .collect();
        assert_eq!(v, vec![0.8, 0.7, 0.5]);
        let w2 = WeightVector::parse("0.7,0.3").unwrap();
        let v = vertex_from_sequence(&s, &w2, 3).unwrap();
        assert_eq!(total(&v), BigRational::from_integer(2.into()));
        let one = seq(&[&[1, 2, 3]]);
        let v = vertex_from_sequence(&one, &WeightVector::uniform(1), 5).unwrap();
        assert_eq!(v.iter().filter(|x| x.is_one()).count(), 3);
    }

    #[test]
    fn orbit_sizes() {
        let q = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(permutation_orbit(&[q(1), q(1), q(0)]).len(), 3);
        assert_eq!(permutation_orbit(&[q(3), q(1), q(2)]).len(), 6);
    }

    #[test]
    fn row_validation() {
        assert!(SymbolicVertex::from_rows(vec![vec![1, 0], vec![0, 0]]).is_err());
        assert!(SymbolicVertex::from_rows(vec![vec![1, 0], vec![0, 1]]).is_ok());
    }
}
