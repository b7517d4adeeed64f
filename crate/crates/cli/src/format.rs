//! The versioned TOML instance file.

use std::fmt;
use std::path::Path;

use mdist_core::generators::{HardInstanceCertificate, Measure};
use mdist_core::{
    CandidateId, DistortionValue, ElectionInstance, MetricSpace, Rule, TieBreakOrder, VoterGroup,
    DEFAULT_TOLERANCE,
};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Candidate names, most preferred first; defaults to file order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lex_order: Option<Vec<String>>,
    pub metric: MetricBlock,
    pub candidates: Vec<CandidateEntry>,
    pub voters: Vec<VoterEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MetricBlock {
    /// Positions live on the candidate and voter entries.
    Euclidean { dimension: usize },
    /// Square matrix over the voters (in file order) followed by the
    /// candidates.
    Matrix { distances: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec<f64>>,
    pub weight: u64,
    pub radius: f64,
    /// Declared order of equidistant candidates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateBlock {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    pub winner: String,
    pub optimal: String,
    /// "distance" or "ab".
    pub measure: String,
    /// Distortion strings: "7/8", "2.9411", "inf".
    pub expected: String,
    pub limit: String,
    #[serde(default)]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smith_set_size: Option<usize>,
}

/// A file that could not be read or turned into an instance.
#[derive(Debug)]
pub enum FormatError {
    Io(String),
    /// Malformed TOML or a field of the wrong type.
    Syntax(String),
    /// Well-formed but unusable: unknown version, bad names, missing
    /// positions.
    Content(String),
    /// Rejected by instance validation.
    Invalid(mdist_core::Error),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Io(e) => write!(f, "cannot read file: {e}"),
            FormatError::Syntax(e) => write!(f, "parse error: {e}"),
            FormatError::Content(e) => write!(f, "parse error: {e}"),
            FormatError::Invalid(e) => write!(f, "invalid instance: {e}"),
        }
    }
}

impl std::error::Error for FormatError {}

fn content<T>(msg: String) -> Result<T, FormatError> {
    Err(FormatError::Content(msg))
}

type Positions = Vec<Option<Vec<f64>>>;

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: InstanceFile =
            toml::from_str(text).map_err(|e| FormatError::Syntax(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return content(format!(
                "format_version: unsupported version {} (expected {FORMAT_VERSION})",
                file.format_version
            ));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FormatError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance files serialize")
    }

    /// The file without its certificate, used for digests.
    pub fn without_certificate(&self) -> Self {
        InstanceFile {
            certificate: None,
            ..self.clone()
        }
    }

    pub fn from_instance(
        instance: &ElectionInstance,
        certificate: Option<&HardInstanceCertificate>,
    ) -> Self {
        let names = instance.names();
        let name_of = |c: &CandidateId| names[c.0].clone();
        let (metric, cand_pos, voter_pos): (MetricBlock, Positions, Positions) =
            match instance.metric() {
                MetricSpace::Euclidean { voters, candidates } => (
                    MetricBlock::Euclidean {
                        dimension: instance.metric().dimension().unwrap_or(1),
                    },
                    candidates.iter().cloned().map(Some).collect(),
                    voters.iter().cloned().map(Some).collect(),
                ),
                MetricSpace::Explicit { distances, .. } => (
                    MetricBlock::Matrix {
                        distances: distances.clone(),
                    },
                    vec![None; instance.m()],
                    vec![None; instance.num_groups()],
                ),
            };
        let lex: Vec<String> = instance.lex().order().iter().map(name_of).collect();
        InstanceFile {
            format_version: FORMAT_VERSION,
            tolerance: (instance.tolerance() != DEFAULT_TOLERANCE).then(|| instance.tolerance()),
            lex_order: (lex != names).then_some(lex),
            metric,
            candidates: names
                .iter()
                .zip(cand_pos)
                .map(|(name, position)| CandidateEntry {
                    name: name.clone(),
                    position,
                })
                .collect(),
            voters: instance
                .groups()
                .iter()
                .zip(voter_pos)
                .map(|(g, position)| VoterEntry {
                    position,
                    weight: g.weight,
                    radius: g.radius,
                    ranking: g.ranking.as_ref().map(|r| r.iter().map(name_of).collect()),
                })
                .collect(),
            certificate: certificate.map(|c| CertificateBlock {
                family: c.family.clone(),
                rule: c.rule.as_ref().map(Rule::name),
                winner: name_of(&c.winner),
                optimal: name_of(&c.optimal),
                measure: c.measure.name().into(),
                expected: c.expected.to_string(),
                limit: c.limit.to_string(),
                tolerance: c.tolerance,
                smith_set_size: c.smith_set_size,
            }),
        }
    }

    fn lookup(&self, name: &str, field: &str) -> Result<CandidateId, FormatError> {
        self.candidates
            .iter()
            .position(|c| c.name == name)
            .map(CandidateId)
            .ok_or_else(|| FormatError::Content(format!("{field}: unknown candidate {name:?}")))
    }

    fn build_metric(&self) -> Result<MetricSpace, FormatError> {
        match &self.metric {
            MetricBlock::Euclidean { dimension } => {
                let pos = |p: &Option<Vec<f64>>, field: String| match p {
                    Some(p) if p.len() == *dimension => Ok(p.clone()),
                    Some(p) => content(format!(
                        "{field}.position: expected {dimension} coordinates, found {}",
                        p.len()
                    )),
                    None => content(format!(
                        "{field}.position: required by the euclidean metric"
                    )),
                };
                let candidates = self
                    .candidates
                    .iter()
                    .enumerate()
                    .map(|(i, c)| pos(&c.position, format!("candidates[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let voters = self
                    .voters
                    .iter()
                    .enumerate()
                    .map(|(i, v)| pos(&v.position, format!("voters[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MetricSpace::euclidean(voters, candidates))
            }
            MetricBlock::Matrix { distances } => {
                let with_pos = self.candidates.iter().any(|c| c.position.is_some())
                    || self.voters.iter().any(|v| v.position.is_some());
                if with_pos {
                    return content("position: not allowed with a matrix metric".into());
                }
                Ok(MetricSpace::explicit(self.voters.len(), distances.clone()))
            }
        }
    }

    pub fn to_instance(&self) -> Result<ElectionInstance, FormatError> {
        let names: Vec<String> = self.candidates.iter().map(|c| c.name.clone()).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return content(format!("candidates[{i}].name: duplicate name {name:?}"));
            }
        }
        let lex = match &self.lex_order {
            Some(order) => {
                let ids = order
                    .iter()
                    .map(|n| self.lookup(n, "lex_order"))
                    .collect::<Result<Vec<_>, _>>()?;
                TieBreakOrder::new(ids)
                    .map_err(|e| FormatError::Content(format!("lex_order: {e}")))?
            }
            None => TieBreakOrder::identity(names.len()),
        };
        let mut groups = Vec::with_capacity(self.voters.len());
        for (i, v) in self.voters.iter().enumerate() {
            let mut g = VoterGroup::new(v.weight, v.radius);
            if let Some(r) = &v.ranking {
                let field = format!("voters[{i}].ranking");
                g = g.with_ranking(
                    r.iter()
                        .map(|n| self.lookup(n, &field))
                        .collect::<Result<_, _>>()?,
                );
            }
            groups.push(g);
        }
        let metric = self.build_metric()?;
        ElectionInstance::with_tolerance(
            names,
            metric,
            groups,
            lex,
            self.tolerance.unwrap_or(DEFAULT_TOLERANCE),
        )
        .map_err(FormatError::Invalid)
    }

    pub fn to_certificate(&self) -> Result<Option<HardInstanceCertificate>, FormatError> {
        let Some(c) = &self.certificate else {
            return Ok(None);
        };
        let value = |text: &str, field: &str| {
            DistortionValue::parse(text).ok_or_else(|| {
                FormatError::Content(format!(
                    "certificate.{field}: not a distortion value: {text:?}"
                ))
            })
        };
        let rule = match &c.rule {
            Some(r) => Some(
                Rule::parse(r)
                    .map_err(|e| FormatError::Content(format!("certificate.rule: {e}")))?,
            ),
            None => None,
        };
        Ok(Some(HardInstanceCertificate {
            family: c.family.clone(),
            rule,
            winner: self.lookup(&c.winner, "certificate.winner")?,
            optimal: self.lookup(&c.optimal, "certificate.optimal")?,
            measure: Measure::parse(&c.measure).ok_or_else(|| {
                FormatError::Content(format!(
                    "certificate.measure: unknown measure {:?}",
                    c.measure
                ))
            })?,
            expected: value(&c.expected, "expected")?,
            limit: value(&c.limit, "limit")?,
            tolerance: c.tolerance,
            smith_set_size: c.smith_set_size,
        }))
    }
}
