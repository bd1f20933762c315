use serde::{Deserialize, Serialize};

use crate::algebra::{CoordinateRing, LinearForm, LinearTuple, QuadraticForm};
use crate::error::{Error, Result};
use crate::gallery::GalleryInstance;
use crate::stationarity::{self, CertificateReport, DEFAULT_TOL};

/// Input of the `certify` command:
/// `{"l": [[...], ...], "g": [...], "witness": [...], "tol": 1e-8}`,
/// coordinates in the ring's monomial bases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateInstance {
    pub l: Vec<Vec<f64>>,
    pub g: Vec<f64>,
    pub witness: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl CertificateInstance {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_json_slice(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn from_gallery(inst: &GalleryInstance) -> Option<Self> {
        Some(Self {
            l: inst.l.to_rows(),
            g: inst.g.as_ref()?.0.clone(),
            witness: inst.witness.as_ref()?.0.clone(),
            tol: None,
        })
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    /// Checks sizes against `ring` and returns typed parts.
    pub fn parts(&self, ring: &CoordinateRing) -> Result<(LinearTuple, QuadraticForm, LinearForm)> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Parse(format!("tol must be positive, got {t}")));
            }
        }
        let l = LinearTuple::from_rows(&self.l)?;
        ring.check_tuple(&l)?;
        let g = QuadraticForm(self.g.clone());
        ring.check_quadratic(&g)?;
        let w = LinearForm(self.witness.clone());
        crate::error::check_len(ring.dim1(), w.len())?;
        Ok((l, g, w))
    }

    pub fn verify(&self, ring: &CoordinateRing) -> Result<CertificateReport> {
        let (l, g, w) = self.parts(ring)?;
        stationarity::verify_spurious_certificate(ring, &l, &g, &w, self.tol())
    }
}
