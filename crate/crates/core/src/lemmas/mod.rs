//! Seeded randomized checks of the lemmas about 1-entailment, about constants
//! and about the completeness conditions.
//!
//! Every case draws from its own ChaCha stream keyed by item and case index,
//! so a report depends only on the seed and the case count, never on the
//! scheduling of the cases.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::decision::DecisionError;
use crate::exec::Exec;

mod constants;
mod eqd;
pub mod gen;
mod property;

pub use constants::run_constants_suite;
pub use eqd::run_eqd_suite;
pub use property::run_property_suite;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("unknown suite `{0}` (expected property, constants or eqd)")]
    UnknownSuite(String),
    #[error(transparent)]
    Decision(#[from] DecisionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Property,
    Constants,
    Eqd,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Suite, LemmaError> {
        match name {
            "property" => Ok(Suite::Property),
            "constants" => Ok(Suite::Constants),
            "eqd" => Ok(Suite::Eqd),
            other => Err(LemmaError::UnknownSuite(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Property => "property",
            Suite::Constants => "constants",
            Suite::Eqd => "eqd",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Suite::Property => 1000,
            Suite::Constants => 500,
            Suite::Eqd => 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    /// Largest universe for the first-order checks.
    pub max_universe: usize,
    pub exec: Exec,
}

impl SuiteConfig {
    pub fn new(suite: Suite, seed: u64) -> SuiteConfig {
        SuiteConfig {
            cases: suite.default_cases(),
            seed,
            max_universe: 3,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemReport {
    pub item: String,
    pub cases: usize,
    /// For conditional items, the cases whose hypotheses held.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub premises_met: Option<usize>,
    pub failures: usize,
    /// The first falsifying instance in case order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub items: Vec<ItemReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.failures == 0)
    }

    pub fn failures(&self) -> usize {
        self.items.iter().map(|i| i.failures).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} (seed {})\n", self.suite.name(), self.seed);
        for i in &self.items {
            let _ = write!(
                out,
                "  item {:<3} cases {:>5}  failures {}",
                i.item, i.cases, i.failures
            );
            if let Some(m) = i.premises_met {
                let _ = write!(out, "  premises met {m}");
            }
            out.push('\n');
            if let Some(c) = &i.counterexample {
                let _ = writeln!(out, "    counterexample: {c}");
            }
        }
        out
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport, LemmaError> {
    match suite {
        Suite::Property => run_property_suite(config),
        Suite::Constants => run_constants_suite(config),
        Suite::Eqd => run_eqd_suite(config),
    }
}

pub(crate) enum Outcome {
    Holds,
    /// A conditional item whose hypotheses did not hold.
    Vacuous,
    Fails(serde_json::Value),
}

pub(crate) fn case_rng(seed: u64, stream: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) | case as u64);
    rng
}

/// Runs `check` on `cases` independently seeded cases of item `stream`.
pub(crate) fn run_item<F>(
    item: &str,
    stream: u64,
    conditional: bool,
    cases: usize,
    config: &SuiteConfig,
    check: F,
) -> Result<ItemReport, LemmaError>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Outcome, LemmaError> + Sync + Send,
{
    let outcomes = config
        .exec
        .map(cases, |case| check(&mut case_rng(config.seed, stream, case)));
    let mut report = ItemReport {
        item: item.to_string(),
        cases,
        premises_met: conditional.then_some(0),
        failures: 0,
        counterexample: None,
    };
    for (case, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            Outcome::Holds => {
                if let Some(m) = report.premises_met.as_mut() {
                    *m += 1;
                }
            }
            Outcome::Vacuous => {}
            Outcome::Fails(instance) => {
                report.failures += 1;
                if report.counterexample.is_none() {
                    report.counterexample = Some(serde_json::json!({"case": case, "instance": instance}));
                }
            }
        }
    }
    Ok(report)
}

pub(crate) fn strings<'a>(fs: impl IntoIterator<Item = &'a crate::syntax::Formula>) -> Vec<String> {
    fs.into_iter().map(ToString::to_string).collect()
}
