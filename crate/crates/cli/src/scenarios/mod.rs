//! Scenario runners. Each returns a table with a fixed column order; the
//! column lists are documented in `SCHEMA.md`.

mod cluster;
mod concat;
mod estimate;
mod johnson;
mod replacement;
mod subcode;

use clap::ValueEnum;
use listop_core::combin::{binomial_u128, pow_u128};
use listop_core::{derive_seed, SearchMode};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Scenario {
    #[value(name = "xor-ld")]
    #[serde(rename = "xor-ld")]
    XorLd,
    #[value(name = "fold-ld")]
    #[serde(rename = "fold-ld")]
    FoldLd,
    #[value(name = "aggregate-ld")]
    #[serde(rename = "aggregate-ld")]
    AggregateLd,
    #[value(name = "subcode-ld")]
    #[serde(rename = "subcode-ld")]
    SubcodeLd,
    #[value(name = "cluster-lb")]
    #[serde(rename = "cluster-lb")]
    ClusterLb,
    #[value(name = "concat-decode")]
    #[serde(rename = "concat-decode")]
    ConcatDecode,
    #[value(name = "johnson-audit")]
    #[serde(rename = "johnson-audit")]
    JohnsonAudit,
    #[value(name = "replacement-test")]
    #[serde(rename = "replacement-test")]
    ReplacementTest,
    #[value(name = "estimate-E")]
    #[serde(rename = "estimate-E")]
    EstimateE,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::XorLd,
        Scenario::FoldLd,
        Scenario::AggregateLd,
        Scenario::SubcodeLd,
        Scenario::ClusterLb,
        Scenario::ConcatDecode,
        Scenario::JohnsonAudit,
        Scenario::ReplacementTest,
        Scenario::EstimateE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::XorLd => "xor-ld",
            Scenario::FoldLd => "fold-ld",
            Scenario::AggregateLd => "aggregate-ld",
            Scenario::SubcodeLd => "subcode-ld",
            Scenario::ClusterLb => "cluster-lb",
            Scenario::ConcatDecode => "concat-decode",
            Scenario::JohnsonAudit => "johnson-audit",
            Scenario::ReplacementTest => "replacement-test",
            Scenario::EstimateE => "estimate-E",
        }
    }
}

/// Everything a runner needs besides its parameters.
pub struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    /// Enumeration cap for exhaustive searches.
    pub cap: u128,
}

impl Ctx<'_> {
    /// Seed of output row `i`; rerunning that row alone with this seed as the
    /// master seed and `repeats = 1` reproduces it.
    pub fn row_seed(&self, i: usize) -> u64 {
        derive_seed(self.cfg.master_seed, "row", i as u64)
    }

    /// Exhaustive when `q^n` centers fit in the cap, otherwise `samples` random centers.
    pub fn search_mode(&self, q: u64, n: usize, samples: usize, seed: u64) -> SearchMode {
        if pow_u128(q, n as u64) <= self.cap {
            SearchMode::Exhaustive
        } else {
            SearchMode::Sampled { samples, seed: derive_seed(seed, "centers", 0) }
        }
    }

    /// Exhaustive over `L`-subsets when they fit in the cap.
    pub fn subsets_fit(&self, big_n: usize, l: usize) -> bool {
        binomial_u128(big_n as u64, l as u64) <= self.cap
    }
}

pub fn run(scenario: Scenario, ctx: &Ctx) -> CliResult<Table> {
    match scenario {
        Scenario::XorLd => estimate::run_row_op(ctx, listop_core::RowOpKind::Xor),
        Scenario::FoldLd => estimate::run_row_op(ctx, listop_core::RowOpKind::Fold),
        Scenario::AggregateLd => estimate::run_row_op(ctx, listop_core::RowOpKind::Aggregate),
        Scenario::EstimateE => estimate::run_estimate(ctx),
        Scenario::SubcodeLd => subcode::run(ctx),
        Scenario::ClusterLb => cluster::run(ctx),
        Scenario::ConcatDecode => concat::run(ctx),
        Scenario::JohnsonAudit => johnson::run(ctx),
        Scenario::ReplacementTest => replacement::run(ctx),
    }
}

fn default_one() -> usize {
    1
}

/// `ceil(4 ln(1/eps) / delta0)`, clamped to `[1, n0]`.
pub fn preset_t(eps: f64, delta0: f64, n0: usize) -> usize {
    let t = (4.0 * (1.0 / eps).ln() / delta0).ceil();
    (t.max(1.0) as usize).min(n0)
}

/// `ceil(ln N / eps^2)`.
pub fn preset_xor_n(big_n: usize, eps: f64) -> usize {
    ((big_n as f64).ln() / (eps * eps)).ceil().max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Scenario::ALL {
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("\"{}\"", s.name()));
            assert_eq!(Scenario::from_str(s.name(), false).unwrap(), s);
        }
    }

    #[test]
    fn presets() {
        // 4 ln 4 / 0.5 = 11.09
        assert_eq!(preset_t(0.25, 0.5, 128), 12);
        assert_eq!(preset_t(1.0, 0.5, 128), 1);
        assert_eq!(preset_t(0.01, 0.01, 50), 50);
        // ln 256 / (1/16) = 88.7
        assert_eq!(preset_xor_n(256, 0.25), 89);
    }
}
