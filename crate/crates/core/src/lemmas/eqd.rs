//! Agreement of the four completeness conditions on random presentations,
//! restricted to the formulas of depth at most 2 over `p, q`.
//!
//! Half of the presentations are `Σ_v` for a random valuation and half are
//! small finite theories, so both joint verdicts get exercised.

use std::sync::OnceLock;

use rand::Rng;
use serde_json::json;

use crate::decision::{classify_completeness, Presentation};
use crate::semantics::Valuation;
use crate::syntax::{enumerate_closed_formulas, Formula, Signature, Theory};

use super::gen::{prop_formula, small_value};
use super::{run_item, strings, LemmaError, Outcome, Suite, SuiteConfig, SuiteReport};

fn universe() -> &'static [Formula] {
    static UNIVERSE: OnceLock<Vec<Formula>> = OnceLock::new();
    UNIVERSE.get_or_init(|| enumerate_closed_formulas(&Signature::propositional(["p", "q"]), 2, true))
}

fn random_presentation(rng: &mut impl Rng) -> (Presentation, serde_json::Value) {
    if rng.gen_bool(0.5) {
        let v = Valuation::propositional([("p", small_value(rng)), ("q", small_value(rng))]);
        let j = json!({"valuation": v.to_json()});
        (Presentation::Valuation(v), j)
    } else {
        let n = rng.gen_range(1..=3);
        let fs: Vec<Formula> = (0..n).map(|_| prop_formula(rng, &["p", "q"], 2)).collect();
        let j = json!({"theory": strings(&fs)});
        (Presentation::Theory(Theory::new(fs).expect("closed")), j)
    }
}

pub fn run_eqd_suite(config: &SuiteConfig) -> Result<SuiteReport, LemmaError> {
    let universe = universe();
    let item = run_item("eqd", 200, true, config.cases, config, |rng| {
        let (sigma, instance) = random_presentation(rng);
        let report = classify_completeness(&sigma, universe)?;
        Ok(if !report.agree() {
            Outcome::Fails(json!({"sigma": instance, "report": report.to_json()}))
        } else if report.verdicts()[0] {
            Outcome::Holds
        } else {
            Outcome::Vacuous
        })
    })?;
    Ok(SuiteReport {
        suite: Suite::Eqd,
        seed: config.seed,
        items: vec![item],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `premises_met` counts the jointly true verdicts here; both kinds occur.
    #[test]
    fn small_run_sees_both_verdicts() {
        let config = SuiteConfig {
            cases: 16,
            ..SuiteConfig::new(Suite::Eqd, 2)
        };
        let report = run_eqd_suite(&config).unwrap();
        assert!(report.passed(), "{}", report.to_text());
        let all_true = report.items[0].premises_met.unwrap();
        assert!(all_true > 0 && all_true < 16);
    }
}
