//! The JSON run report.

use kcenter_core::{SolveReport, SolverConfig};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetInfo {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "K")]
    pub k: usize,
}

/// Flags echoed back into the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub mode: &'static str,
    pub input: String,
    pub epsilon_rel: f64,
    pub time_limit: Option<f64>,
    pub i_sr: u64,
    pub ball_threshold: usize,
    pub rep_cap: usize,
    pub fft_trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub max_open_nodes: usize,
    pub bounds_tightening: bool,
    pub assignment: bool,
    pub reduction: bool,
    pub symmetry: bool,
    pub trials: Option<usize>,
    pub limit: Option<u128>,
}

impl ConfigEcho {
    pub fn new(mode: &'static str, input: String, cfg: &SolverConfig) -> Self {
        Self {
            mode,
            input,
            epsilon_rel: cfg.epsilon_rel,
            time_limit: cfg.time_limit,
            i_sr: cfg.i_sr,
            ball_threshold: cfg.ball_threshold,
            rep_cap: cfg.rep_cap,
            fft_trials: cfg.fft_trials,
            seed: cfg.seed,
            workers: cfg.workers,
            max_open_nodes: cfg.max_open_nodes,
            bounds_tightening: cfg.bounds_tightening,
            assignment: cfg.assignment,
            reduction: cfg.reduction,
            symmetry: cfg.symmetry,
            trials: None,
            limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub ub: f64,
    pub lb: Option<f64>,
    pub gap_pct: Option<f64>,
    pub nodes: u64,
    pub wall_time_s: f64,
    pub termination: &'static str,
    pub incumbent: Vec<usize>,
    pub config: ConfigEcho,
    pub dataset: DatasetInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_removed: Option<usize>,
}

impl Report {
    pub fn from_solve(r: &SolveReport, config: ConfigEcho, dataset: DatasetInfo) -> Self {
        Self {
            ub: r.ub,
            lb: Some(r.lb),
            gap_pct: Some(r.gap_pct),
            nodes: r.nodes,
            wall_time_s: r.wall_time,
            termination: r.termination.as_str(),
            incumbent: r.incumbent.0.clone(),
            config,
            dataset,
            seeds: r.seeds.as_ref().map(|s| s.0.clone()),
            samples_removed: Some(r.removed.len()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
