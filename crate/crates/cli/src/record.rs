//! JSON result records.

use mdist_core::DistortionValue;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::format::InstanceFile;

/// A distortion as an exact string ("7/8", "inf", or a decimal for
/// irrational geometry) plus a decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Value {
    pub value: String,
    pub decimal: String,
}

impl From<DistortionValue> for Value {
    fn from(v: DistortionValue) -> Self {
        Value {
            value: v.to_string(),
            decimal: v.decimal(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub name: String,
    /// "distance" or "ab".
    pub measure: String,
    pub value: Value,
    pub respected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstProfile {
    pub ab_distortion: Value,
    pub winner: String,
    pub profiles: String,
    /// The bound that applies to the worst profile itself.
    pub bound: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateOutcome {
    pub family: String,
    pub expected: String,
    pub achieved: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSummary {
    pub objective: String,
    pub radii: String,
    pub seed: u64,
    pub evaluations: u64,
    pub achieved: Value,
    pub bound: Option<Value>,
    pub bound_name: String,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    /// sha256 of the instance file without its certificate.
    pub instance_digest: String,
    pub rule: String,
    pub winner: String,
    pub tied_set: Vec<String>,
    pub optimal_by_distance: String,
    pub optimal_by_acceptability: String,
    pub distance_distortion: Value,
    pub ab_distortion: Value,
    pub bound: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_profile: Option<WorstProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
}

impl ResultRecord {
    /// True when no bound was exceeded and any certificate held.
    pub fn passed(&self) -> bool {
        self.bound.as_ref().is_none_or(|b| b.respected)
            && self.certificate.as_ref().is_none_or(|c| c.passed)
            && self.search.as_ref().is_none_or(|s| s.violations.is_empty())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }
}

pub fn digest(file: &InstanceFile) -> String {
    hex::encode(Sha256::digest(
        file.without_certificate().to_toml().as_bytes(),
    ))
}
