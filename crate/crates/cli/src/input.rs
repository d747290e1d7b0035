//! JSON input files for Hamiltonians and functional evaluations.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use spectral_polytope::functional::SolverOptions;
use spectral_polytope::manybody::{CMatrix, InteractionEntry, OneBodyOperator, TwoBodyInteraction};
use spectral_polytope::WeightVector;

use crate::error::{CliError, CliResult};

/// Weights as a decimal string (`"0.5,0.3,0.2"`) or a JSON number list.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Text(String),
    List(Vec<f64>),
}

impl WeightSpec {
    /// Numbers are read through their shortest decimal form, so `0.7` is `7/10`.
    pub fn parse(&self) -> CliResult<WeightVector> {
        let text = match self {
            WeightSpec::Text(s) => s.clone(),
            WeightSpec::List(v) => v
                .iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(","),
        };
        Ok(WeightVector::parse(&text)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    #[serde(rename = "N")]
    pub n: usize,
    /// Real part of the one-body matrix, row-major.
    #[serde(default)]
    pub h: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub h_im: Option<Vec<Vec<f64>>>,
    /// Sparse two-body coefficients, 1-indexed.
    #[serde(default, rename = "V")]
    pub v: Vec<InteractionEntry>,
    #[serde(default)]
    pub w: Option<WeightSpec>,
    /// One-particle matrix for functional evaluations.
    #[serde(default)]
    pub gamma: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub gamma_im: Option<Vec<Vec<f64>>>,
    /// Orbital count; required when neither `h` nor `gamma` is given.
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub options: SolverOptions,
}

impl InputFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn d(&self) -> CliResult<usize> {
        let from_h = self.h.as_ref().map(|m| m.len());
        let from_gamma = self.gamma.as_ref().map(|m| m.len());
        let candidates: Vec<usize> = [self.d, from_h, from_gamma].into_iter().flatten().collect();
        match candidates.first() {
            None => Err(CliError::Usage(
                "input needs \"d\", \"h\" or \"gamma\"".into(),
            )),
            Some(&d) if candidates.iter().all(|&x| x == d) => Ok(d),
            Some(_) => Err(CliError::Usage(format!(
                "inconsistent orbital counts {candidates:?}"
            ))),
        }
    }

    pub fn one_body(&self) -> CliResult<OneBodyOperator> {
        let re = self
            .h
            .as_ref()
            .ok_or_else(|| CliError::Usage("input has no \"h\"".into()))?;
        Ok(OneBodyOperator::new(matrix(
            "h",
            re,
            self.h_im.as_deref(),
        )?)?)
    }

    pub fn interaction(&self) -> CliResult<TwoBodyInteraction> {
        Ok(TwoBodyInteraction::from_entries(self.d()?, &self.v)?)
    }

    pub fn gamma(&self) -> CliResult<Option<CMatrix>> {
        self.gamma
            .as_ref()
            .map(|re| matrix("gamma", re, self.gamma_im.as_deref()))
            .transpose()
    }

    /// `--w` wins over the file.
    pub fn weights(&self, flag: Option<&str>) -> CliResult<WeightVector> {
        match (flag, &self.w) {
            (Some(s), _) => Ok(WeightVector::parse(s)?),
            (None, Some(spec)) => spec.parse(),
            (None, None) => Err(CliError::Usage(
                "weights missing: pass --w or set \"w\"".into(),
            )),
        }
    }
}

fn matrix(name: &str, re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> CliResult<CMatrix> {
    let n = re.len();
    let square = |m: &[Vec<f64>]| m.len() == n && m.iter().all(|row| row.len() == n);
    if n == 0 || !square(re) || im.is_some_and(|m| !square(m)) {
        return Err(CliError::Usage(format!(
            "\"{name}\" must be a non-empty square matrix"
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(re[i][j], im.map_or(0.0, |m| m[i][j]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_hamiltonian_file() {
        let text = r#"{"N": 2, "h": [[0,0,0],[0,1,0],[0,0,2]],
            "V": [{"p":1,"q":2,"r":1,"s":2,"re":0.5}], "w": [0.7, 0.3]}"#;
        let f: InputFile = serde_json::from_str(text).unwrap();
        assert_eq!(f.d().unwrap(), 3);
        assert_eq!(f.interaction().unwrap().get(1, 0, 1, 0).re, 0.5);
        assert_eq!(
            f.weights(None).unwrap(),
            WeightVector::parse("0.7,0.3").unwrap()
        );
        assert_eq!(f.options, SolverOptions::default());
    }

    #[test]
    fn rejects_bad_shapes() {
        let f: InputFile = serde_json::from_str(r#"{"N": 1, "h": [[0,1],[1]]}"#).unwrap();
        assert!(matches!(f.one_body(), Err(CliError::Usage(_))));
        assert!(serde_json::from_str::<InputFile>(r#"{"N": 1, "hh": 2}"#).is_err());
    }
}
