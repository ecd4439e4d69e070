//! Declared and certified invariants of a curve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::DeclaredProfile;

use super::gonality::GonalityCertificate;
use super::verdict::Basis;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveProfile {
    pub genus: usize,
    pub gonality: Option<usize>,
    pub clifford: Option<usize>,
    pub certificate: Option<GonalityCertificate>,
}

impl CurveProfile {
    pub fn declared(d: &DeclaredProfile) -> Self {
        CurveProfile { genus: d.genus, gonality: d.gonality, clifford: d.clifford, certificate: None }
    }

    pub fn with_certificate(mut self, cert: GonalityCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    /// `d - 3 ≤ c ≤ d - 2` and `c ≤ ⌊(g-1)/2⌋`, plus agreement of a
    /// certificate with the declared gonality.
    pub fn check(&self) -> Result<()> {
        if let (Some(d), Some(c)) = (self.gonality, self.clifford) {
            if c + 3 < d || c + 2 > d {
                return Err(Error::Precondition(format!("Clifford index {c} outside [d - 3, d - 2] for gonality {d}")));
            }
        }
        if let Some(c) = self.clifford {
            if self.genus >= 1 && c > (self.genus - 1) / 2 {
                return Err(Error::Precondition(format!("Clifford index {c} exceeds ⌊(g-1)/2⌋ at genus {}", self.genus)));
            }
        }
        if let (Some(d), Some(cert)) = (self.gonality, &self.certificate) {
            if d < cert.lo || d > cert.hi {
                return Err(Error::Precondition(format!("declared gonality {d} outside the certified [{}, {}]", cert.lo, cert.hi)));
            }
        }
        Ok(())
    }

    /// The gonality to build expectations on, certified when the certificate
    /// is tight.
    pub fn gonality_basis(&self) -> Option<(usize, Basis)> {
        match (&self.certificate, self.gonality) {
            (Some(c), _) if c.is_tight() => Some((c.lo, Basis::Certified)),
            (_, Some(d)) => Some((d, Basis::Declared)),
            _ => None,
        }
    }
}
