//! Seeded sampling campaigns over three-piece maps on a rational grid.
//!
//! Trial `n` draws from its own ChaCha stream `(seed, n)`, so the report does
//! not depend on how trials are scheduled across threads.

use std::collections::BTreeMap;

use itm_core::reduction::{escape_bound, reduce_pipeline_with, ReductionError, Terminal};
use itm_core::typing::{detect_type_with, DetectConfig, TypeVerdict, TypingError};
use itm_core::{Itm, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    /// Grid denominator `q`.
    pub den_bound: i64,
    pub detect: DetectConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExperimentError {
    #[error("sample count must be at least 1")]
    EmptyCampaign,
    #[error("denominator bound must be at least 4, got {0}")]
    DenominatorTooSmall(i64),
    #[error("trial {trial} ({map}): {source}")]
    Reduction {
        trial: usize,
        map: String,
        source: Box<ReductionError>,
    },
    #[error("trial {trial}: {source}")]
    Typing { trial: usize, source: TypingError },
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Uniform on the valid maps with `β_i ∈ {1/q, …, (q-1)/q}` and
/// `γ_i ∈ {±1/q, …, ±(q-1)/q}`, by rejection.
pub fn sample_itm3<R: Rng>(rng: &mut R, q: i64) -> Itm {
    loop {
        let mut b1 = rng.random_range(1..q);
        let mut b2 = rng.random_range(1..q);
        if b1 == b2 {
            continue;
        }
        if b1 > b2 {
            std::mem::swap(&mut b1, &mut b2);
        }
        let g: Vec<i64> = (0..3).map(|_| rng.random_range(-(q - 1)..q)).collect();
        let edges = [0, b1, b2, q];
        let fits = g
            .iter()
            .enumerate()
            .all(|(j, &k)| k != 0 && edges[j] + k >= 0 && edges[j + 1] + k <= q);
        if fits {
            let b = vec![Rational::new(b1, q), Rational::new(b2, q)];
            let g = g.into_iter().map(|k| Rational::new(k, q)).collect();
            return Itm::new(b, g).expect("checked on the integer grid");
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub beta1: Rational,
    pub beta2: Rational,
    pub gamma1: Rational,
    pub gamma2: Rational,
    pub gamma3: Rational,
    /// `reducible`, `rotation`, `A`, `A'`, `B`, `B_i`, `C_i` or `boundary`.
    pub case: String,
    pub escape_index: Option<u64>,
    /// `ceil(1/γ_1) + 1` for the classified map, when an index exists.
    pub escape_bound: Option<u64>,
    /// `double_rotation`, `rotation` or `boundary_stop`.
    pub terminal: String,
    /// Verdict on the sampled map: `finite` or `undecided`.
    pub verdict: String,
    pub steps: Option<usize>,
    /// Verdict on the terminal map; empty after a boundary stop.
    pub terminal_verdict: Option<String>,
}

impl TrialRecord {
    /// `boundary_stop`, else the verdict on the sampled map.
    pub fn outcome(&self) -> &str {
        if self.terminal == "boundary_stop" {
            "boundary_stop"
        } else {
            &self.verdict
        }
    }

    /// Both verdicts decided and different.
    pub fn verdicts_disagree(&self) -> bool {
        match self.terminal_verdict.as_deref() {
            Some(tv) if tv != "undecided" && self.verdict != "undecided" => tv != self.verdict,
            _ => false,
        }
    }
}

fn verdict_name(v: &TypeVerdict) -> &'static str {
    match v {
        TypeVerdict::Finite { .. } => "finite",
        TypeVerdict::Undecided { .. } => "undecided",
    }
}

pub fn run_trial(config: &SampleConfig, trial: usize) -> Result<TrialRecord, ExperimentError> {
    let mut rng = trial_rng(config.seed, trial);
    let t = sample_itm3(&mut rng, config.den_bound);
    let trace =
        reduce_pipeline_with(&t, &config.detect).map_err(|source| ExperimentError::Reduction {
            trial,
            map: t.to_string(),
            source: Box::new(source),
        })?;
    let verdict = detect_type_with(&t, &config.detect)
        .map_err(|source| ExperimentError::Typing { trial, source })?;

    let case = match (&trace.label, &trace.dropped) {
        (Some(label), _) => label.family().to_string(),
        (None, Some(_)) => "reducible".to_string(),
        (None, None) => "rotation".to_string(),
    };
    let escape_index = trace.label.as_ref().and_then(|l| l.escape_index());
    let escape_bound = escape_index.and_then(|_| {
        let fitted = &trace.fitting.as_ref()?.fitted;
        let map = if trace.mirrored {
            fitted.mirror()
        } else {
            (**fitted).clone()
        };
        Some(escape_bound(map.translation(0)))
    });
    let terminal = match trace.terminal {
        Terminal::DoubleRotation(_) => "double_rotation",
        Terminal::Rotation(_) => "rotation",
        Terminal::BoundaryStop { .. } => "boundary_stop",
    };
    let steps = match &verdict {
        TypeVerdict::Finite { steps, .. } => Some(*steps),
        TypeVerdict::Undecided { .. } => None,
    };
    let g = t.translations();
    Ok(TrialRecord {
        trial,
        seed: config.seed,
        beta1: t.breakpoints()[0].clone(),
        beta2: t.breakpoints()[1].clone(),
        gamma1: g[0].clone(),
        gamma2: g[1].clone(),
        gamma3: g[2].clone(),
        case,
        escape_index,
        escape_bound,
        terminal: terminal.to_string(),
        verdict: verdict_name(&verdict).to_string(),
        steps,
        terminal_verdict: trace
            .terminal_verdict
            .as_ref()
            .map(|v| verdict_name(v).to_string()),
    })
}

/// All trials in index order. Uses the current rayon pool.
pub fn run_trials(config: &SampleConfig) -> Result<Vec<TrialRecord>, ExperimentError> {
    if config.count == 0 {
        return Err(ExperimentError::EmptyCampaign);
    }
    if config.den_bound < 4 {
        return Err(ExperimentError::DenominatorTooSmall(config.den_bound));
    }
    (0..config.count)
        .into_par_iter()
        .map(|trial| run_trial(config, trial))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub sample_count: usize,
    pub seed: u64,
    pub denominator_bound: i64,
    /// `null` means the per-map default of `16 q`.
    pub max_steps: Option<usize>,
    pub max_pieces: usize,
    pub case_counts: BTreeMap<String, usize>,
    /// `finite`, `undecided` or `boundary_stop`; sums to `sample_count`.
    pub outcome_counts: BTreeMap<String, usize>,
    pub terminal_counts: BTreeMap<String, usize>,
    /// Per family (`B_i`, `C_i`): escape index to count.
    pub escape_histogram: BTreeMap<String, BTreeMap<u64, usize>>,
    /// Steps to stabilization of the sampled map, over finite samples.
    pub step_histogram: BTreeMap<usize, usize>,
    pub escape_bound_violations: usize,
    pub verdict_disagreements: usize,
}

impl ExperimentReport {
    pub fn from_trials(config: &SampleConfig, trials: &[TrialRecord]) -> Self {
        let mut report = ExperimentReport {
            sample_count: trials.len(),
            seed: config.seed,
            denominator_bound: config.den_bound,
            max_steps: config.detect.budget,
            max_pieces: config.detect.max_pieces,
            case_counts: BTreeMap::new(),
            outcome_counts: BTreeMap::new(),
            terminal_counts: BTreeMap::new(),
            escape_histogram: BTreeMap::new(),
            step_histogram: BTreeMap::new(),
            escape_bound_violations: 0,
            verdict_disagreements: 0,
        };
        for t in trials {
            *report.case_counts.entry(t.case.clone()).or_default() += 1;
            *report
                .outcome_counts
                .entry(t.outcome().to_string())
                .or_default() += 1;
            *report
                .terminal_counts
                .entry(t.terminal.clone())
                .or_default() += 1;
            if let Some(i) = t.escape_index {
                *report
                    .escape_histogram
                    .entry(t.case.clone())
                    .or_default()
                    .entry(i)
                    .or_default() += 1;
                if t.escape_bound.is_none_or(|b| i > b) {
                    report.escape_bound_violations += 1;
                }
            }
            if let Some(s) = t.steps {
                *report.step_histogram.entry(s).or_default() += 1;
            }
            if t.verdicts_disagree() {
                report.verdict_disagreements += 1;
            }
        }
        report
    }

    pub fn count(&self, case: &str) -> usize {
        self.case_counts.get(case).copied().unwrap_or(0)
    }

    pub fn outcome(&self, outcome: &str) -> usize {
        self.outcome_counts.get(outcome).copied().unwrap_or(0)
    }
}

pub fn run_campaign(
    config: &SampleConfig,
) -> Result<(ExperimentReport, Vec<TrialRecord>), ExperimentError> {
    let trials = run_trials(config)?;
    Ok((ExperimentReport::from_trials(config, &trials), trials))
}

pub fn trials_to_csv(trials: &[TrialRecord]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in trials {
        w.serialize(t)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
