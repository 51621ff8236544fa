//! The lemma on constants, checked on every valuation with at most
//! `max_universe` elements and relation values in `{0, 1/2, 1}` over the
//! signature `P/1, R/2, c, d`.
//!
//! Items 5 to 7 require `c` to be absent from `T`, `σ`, `θ` and `χ`; those
//! are drawn over `d` alone and `c` only enters through `σ(c)` and `χ(c)`.

use rand::Rng;
use serde_json::json;

use crate::decision::{fo_check_bounded_with, BoundedOptions};
use crate::exec::Exec;
use crate::semantics::TruthValue;
use crate::syntax::{Formula, Theory};

use super::gen::fo_formula;
use super::{run_item, strings, LemmaError, Outcome, Suite, SuiteConfig, SuiteReport};

const DEPTH: usize = 2;

struct Checker {
    opts: BoundedOptions,
}

impl Checker {
    fn new(max_universe: usize) -> Checker {
        Checker {
            opts: BoundedOptions {
                max_universe,
                grid: Some(vec![
                    TruthValue::ZERO,
                    TruthValue::new(1, 2).expect("valid"),
                    TruthValue::ONE,
                ]),
                ..BoundedOptions::default()
            },
        }
    }

    /// `Err` carries the witness valuation as JSON.
    fn ent(&self, premises: &[Formula], conclusion: &Formula) -> Result<Result<(), serde_json::Value>, LemmaError> {
        let theory = Theory::new(premises.iter().cloned()).expect("closed formulas");
        let v = fo_check_bounded_with(&theory, conclusion, &self.opts, Exec::Sequential)?;
        Ok(if v.holds {
            Ok(())
        } else {
            Err(json!({
                "premises": strings(premises),
                "conclusion": conclusion.to_string(),
                "witness": v.witness.as_ref().map(|w| w.to_json()),
            }))
        })
    }
}

fn all(results: Vec<Result<(), serde_json::Value>>) -> Outcome {
    match results.into_iter().find_map(Result::err) {
        Some(j) => Outcome::Fails(j),
        None => Outcome::Holds,
    }
}

fn check(item: usize, checker: &Checker, rng: &mut impl Rng) -> Result<Outcome, LemmaError> {
    let (fa, ex, tl) = (|f| Formula::forall("x", f), |f| Formula::exists("x", f), Formula::tilde);
    let with_c = fo_formula(rng, &["x"], &["c", "d"], DEPTH);
    let sigma = fo_formula(rng, &["x"], &["d"], DEPTH);
    let s_c = sigma.substitute("x", "c");
    Ok(match item {
        1 => all(vec![checker.ent(&[fa(with_c.clone())], &with_c.substitute("x", "c"))?]),
        2 => all(vec![checker.ent(&[with_c.substitute("x", "c")], &ex(with_c.clone()))?]),
        3 => {
            let (a, b) = (tl(fa(with_c.clone())), ex(tl(with_c.clone())));
            all(vec![checker.ent(std::slice::from_ref(&a), &b)?, checker.ent(&[b], &a)?])
        }
        4 => {
            let (a, b) = (tl(ex(with_c.clone())), fa(tl(with_c.clone())));
            all(vec![checker.ent(std::slice::from_ref(&a), &b)?, checker.ent(&[b], &a)?])
        }
        5 => {
            let mut t: Vec<Formula> = (0..rng.gen_range(0..=1))
                .map(|_| fo_formula(rng, &[], &["d"], DEPTH))
                .collect();
            // Half of the theories are built so that `T ⊩ σ(c)`.
            if rng.gen_bool(0.5) {
                let chi = fo_formula(rng, &["x"], &["d"], DEPTH - 1);
                t.push(fa(Formula::implies(chi.clone(), sigma.clone())));
                t.push(fa(chi));
            }
            if checker.ent(&t, &s_c)?.is_ok() {
                all(vec![checker.ent(&t, &fa(sigma.clone()))?])
            } else {
                Outcome::Vacuous
            }
        }
        6 => {
            let theta = if rng.gen_bool(0.5) {
                ex(Formula::or(sigma.clone(), fo_formula(rng, &["x"], &["d"], DEPTH - 1)))
            } else {
                fo_formula(rng, &[], &["d"], DEPTH)
            };
            if checker.ent(&[s_c], &theta)?.is_ok() {
                all(vec![checker.ent(&[ex(sigma.clone())], &theta)?])
            } else {
                Outcome::Vacuous
            }
        }
        7 => {
            let t: Vec<Formula> = (0..rng.gen_range(0..=1))
                .map(|_| fo_formula(rng, &[], &["d"], DEPTH))
                .collect();
            let chi = if rng.gen_bool(0.5) {
                Formula::or(tl(sigma.clone()), fo_formula(rng, &["x"], &["d"], DEPTH - 1))
            } else {
                fo_formula(rng, &["x"], &["d"], DEPTH)
            };
            let mut base = t;
            base.push(tl(fa(sigma.clone())));
            let mut premises = base.clone();
            premises.push(tl(s_c));
            if checker.ent(&premises, &chi.substitute("x", "c"))?.is_ok() {
                all(vec![checker.ent(&base, &ex(chi))?])
            } else {
                Outcome::Vacuous
            }
        }
        _ => unreachable!("items are 1 to 7"),
    })
}

/// Items 1 to 6 run `config.cases` instances each and item 7 two fifths of
/// that, since each of its instances costs two searches over larger theories.
pub fn run_constants_suite(config: &SuiteConfig) -> Result<SuiteReport, LemmaError> {
    let checker = Checker::new(config.max_universe);
    let items = (1..=7)
        .map(|item| {
            let cases = if item == 7 { config.cases * 2 / 5 } else { config.cases };
            run_item(&item.to_string(), 100 + item as u64, item >= 5, cases, config, |rng| {
                check(item, &checker, rng)
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(SuiteReport {
        suite: Suite::Constants,
        seed: config.seed,
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let config = SuiteConfig {
            cases: 20,
            max_universe: 2,
            ..SuiteConfig::new(Suite::Constants, 5)
        };
        let report = run_constants_suite(&config).unwrap();
        assert!(report.passed(), "{}", report.to_text());
        assert_eq!(report.items[6].cases, 8);
        for item in &report.items[4..] {
            assert!(item.premises_met.unwrap() > 0, "{}", item.item);
        }
    }

    /// Dropping the freshness condition breaks item 5: `R(c,c)` follows from
    /// `∀y R(y,y)` but `∀x R(x,c)` does not.
    #[test]
    fn freshness_matters() {
        let checker = Checker::new(2);
        let t = [Formula::forall("y", Formula::atom("R", vec![var("y"), var("y")]))];
        let s = Formula::atom("R", vec![var("x"), Term::Const("c".into())]);
        assert!(checker.ent(&t, &s.substitute("x", "c")).unwrap().is_ok());
        assert!(checker.ent(&t, &Formula::forall("x", s)).unwrap().is_err());
    }

    use crate::syntax::Term;
    fn var(n: &str) -> Term {
        Term::Var(n.into())
    }
}
