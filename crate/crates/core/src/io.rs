//! JSON interchange for ensembles, measurements and reports.
//!
//! Matrices are row-major arrays of `[re, im]` pairs. Every real written by
//! this module uses 17 significant digits, so files round-trip exactly.

use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::ensembles::{validate_ensemble, Ensemble, GeneralPOVM, Measurement};
use crate::error::{MedError, Result};
use crate::linalg::{CMatrix, HermitianMatrix, Tolerances};

pub const SCHEMA_VERSION: &str = "med-li/1";

/// A real that serializes as `d.dddddddddddddddde±x` (17 significant digits),
/// or `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw =
            RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// Matrix in the interchange encoding.
pub type MatrixJson = Vec<Vec<[Real; 2]>>;

pub fn matrix_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [Real(m[(r, c)].re), Real(m[(r, c)].im)])
                .collect()
        })
        .collect()
}

pub fn reals(values: &[f64]) -> Vec<Real> {
    values.iter().copied().map(Real).collect()
}

fn ser_reals<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    reals(v).serialize(s)
}

fn ser_matrices<S: Serializer>(
    v: &[Vec<Vec<[f64; 2]>>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let out: Vec<MatrixJson> = v
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(|&[re, im]| [Real(re), Real(im)]).collect())
                .collect()
        })
        .collect();
    out.serialize(s)
}

fn raw_matrix(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

fn to_cmatrix(raw: &[Vec<[f64; 2]>], dim: usize, what: &str) -> Result<CMatrix> {
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        let cols = raw.iter().map(Vec::len).max().unwrap_or(0);
        return Err(MedError::DimensionMismatch(format!(
            "{what} is {}x{cols}, expected {dim}x{dim}",
            raw.len()
        )));
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| {
        let [re, im] = raw[r][c];
        Complex64::new(re, im)
    }))
}

fn check_schema(version: &str) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(MedError::Parse(format!(
            "field `schema_version`: expected \"{SCHEMA_VERSION}\", got \"{version}\""
        )));
    }
    Ok(())
}

/// Parse JSON text, reporting line and column on failure.
pub fn parse_json<T: DeserializeOwned>(text: &[u8]) -> Result<T> {
    serde_json::from_slice(text).map_err(|e| MedError::Parse(e.to_string()))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// `sha256:` followed by the hex digest of the bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub schema_version: String,
    pub dim: usize,
    #[serde(serialize_with = "ser_reals")]
    pub priors: Vec<f64>,
    #[serde(serialize_with = "ser_matrices")]
    pub states: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl EnsembleFile {
    pub fn from_ensemble(p: &Ensemble, label: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            dim: p.dim(),
            priors: p.priors().to_vec(),
            states: p
                .states()
                .iter()
                .map(|s| raw_matrix(s.as_matrix()))
                .collect(),
            label,
        }
    }

    pub fn parse(text: &[u8]) -> Result<Self> {
        let file: Self = parse_json(text)?;
        check_schema(&file.schema_version)?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes =
            std::fs::read(path).map_err(|e| MedError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&bytes)
    }

    pub fn to_ensemble(&self, tol: &Tolerances) -> Result<Ensemble> {
        check_schema(&self.schema_version)?;
        if self.priors.len() != self.states.len() {
            return Err(MedError::DimensionMismatch(format!(
                "{} priors for {} states",
                self.priors.len(),
                self.states.len()
            )));
        }
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| to_cmatrix(s, self.dim, &format!("state {i}")))
            .collect::<Result<Vec<_>>>()?;
        validate_ensemble(&self.priors, states, tol)
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementFile {
    pub schema_version: String,
    pub dim: usize,
    #[serde(serialize_with = "ser_matrices")]
    pub elements: Vec<Vec<Vec<[f64; 2]>>>,
}

impl MeasurementFile {
    pub fn from_elements(elements: &[HermitianMatrix]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            dim: elements.first().map_or(0, HermitianMatrix::dim),
            elements: elements.iter().map(|e| raw_matrix(e.as_matrix())).collect(),
        }
    }

    pub fn from_measurement(m: &impl Measurement) -> Self {
        Self::from_elements(m.elements())
    }

    pub fn parse(text: &[u8]) -> Result<Self> {
        let file: Self = parse_json(text)?;
        check_schema(&file.schema_version)?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes =
            std::fs::read(path).map_err(|e| MedError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&bytes)
    }

    pub fn to_povm(&self, tol: &Tolerances) -> Result<GeneralPOVM> {
        check_schema(&self.schema_version)?;
        let raw = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| to_cmatrix(e, self.dim, &format!("element {i}")))
            .collect::<Result<Vec<_>>>()?;
        GeneralPOVM::validate(raw, tol)
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::random_ensemble;

    #[test]
    fn real_formatting() {
        let s = serde_json::to_string(&vec![Real(1.0), Real(-0.1), Real(f64::NAN)]).unwrap();
        assert_eq!(s, "[1.0000000000000000e0,-1.0000000000000001e-1,null]");
    }

    #[test]
    fn ensemble_file_roundtrip_is_exact() {
        let tol = Tolerances::default();
        let p = random_ensemble(3, &[2, 1], 4, &tol).unwrap();
        let file = EnsembleFile::from_ensemble(&p, Some("x".into()));
        let text = file.to_json();
        let back = EnsembleFile::parse(text.as_bytes()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);
        let q = back.to_ensemble(&tol).unwrap();
        assert_eq!(q.max_weighted_deviation(&p), 0.0);
    }

    #[test]
    fn parse_errors_name_location() {
        let err =
            EnsembleFile::parse(b"{\"schema_version\": \"med-li/1\",\n \"dim\": }").unwrap_err();
        assert_eq!(err.kind(), "Parse");
        assert!(err.to_string().contains("line 2"));
        let err =
            EnsembleFile::parse(br#"{"schema_version":"v0","dim":2,"priors":[],"states":[]}"#)
                .unwrap_err();
        assert!(err.to_string().contains("schema_version"));
    }

    #[test]
    fn shape_errors() {
        let file = EnsembleFile {
            schema_version: SCHEMA_VERSION.into(),
            dim: 2,
            priors: vec![0.5, 0.5],
            states: vec![vec![vec![[1.0, 0.0]]], vec![vec![[1.0, 0.0]]]],
            label: None,
        };
        let err = file.to_ensemble(&Tolerances::default()).unwrap_err();
        assert!(matches!(err, MedError::DimensionMismatch(_)));
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(
            digest(b"abc"),
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
