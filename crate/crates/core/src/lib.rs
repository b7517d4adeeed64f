//! Metric distortion and acceptability-based distortion of single-winner
//! voting rules.
//!
//! Voters and candidates live in a (pseudo-)metric space and every voter
//! carries an acceptability radius. From an [`ElectionInstance`] we derive
//! ranking and approval profiles, run the classic rules on them and measure
//! how far the elected candidate is from the optimum, either by total
//! distance or by the number of voters who find it acceptable.

pub mod distortion;
pub mod error;
pub mod generators;
pub mod majority;
pub mod model;
pub mod rules;
pub mod search;

pub use distortion::DistortionValue;
pub use error::{Error, Result};
pub use majority::{BeatpathStrengths, MajorityMatrix};
pub use model::{
    ApprovalBallot, ApprovalProfile, CandidateId, ElectionInstance, MetricSpace, RankingBallot,
    RankingProfile, TieBreakOrder, VoterGroup, VoterId, DEFAULT_TOLERANCE,
};
pub use rules::{Rule, RuleOutcome, RuleTrace, ScoringVector};

/// Exact rational used for scores, efficiency fractions and ab-distortion.
pub type Rational = num_rational::Rational64;
