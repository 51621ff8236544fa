//! The eleven rudimentary properties of 1-entailment, checked exactly on
//! random propositional instances with at most three atoms and depth four.

use rand::Rng;
use serde_json::json;

use crate::decision::{one_entails_with, EntailmentVerdict};
use crate::exec::Exec;
use crate::syntax::{Formula, Theory};

use super::gen::{prop_atoms, prop_formula, prop_theory};
use super::{run_item, strings, LemmaError, Outcome, Suite, SuiteConfig, SuiteReport};

const DEPTH: usize = 4;

fn ent(premises: &[Formula], conclusion: &Formula) -> Result<EntailmentVerdict, LemmaError> {
    let theory = Theory::new(premises.iter().cloned()).expect("propositional formulas are closed");
    Ok(one_entails_with(&theory, conclusion, Exec::Sequential)?)
}

fn with(t: &[Formula], f: &Formula) -> Vec<Formula> {
    let mut out = t.to_vec();
    out.push(f.clone());
    out
}

fn fails(t: &[Formula], phi: &Formula, psi: &Formula, v: &EntailmentVerdict) -> Outcome {
    Outcome::Fails(json!({
        "T": strings(t),
        "phi": phi.to_string(),
        "psi": psi.to_string(),
        "witness": v.witness.as_ref().map(|w| w.to_json()),
    }))
}

fn expect(t: &[Formula], phi: &Formula, psi: &Formula, verdicts: &[EntailmentVerdict]) -> Outcome {
    match verdicts.iter().find(|v| !v.holds) {
        Some(v) => fails(t, phi, psi, v),
        None => Outcome::Holds,
    }
}

fn check(item: usize, rng: &mut impl Rng) -> Result<Outcome, LemmaError> {
    let atoms = prop_atoms(rng);
    let phi = prop_formula(rng, atoms, DEPTH);
    let psi = prop_formula(rng, atoms, DEPTH);
    let mut t = prop_theory(rng, atoms, 2, DEPTH - 1);
    let (d, tl) = (Formula::delta, Formula::tilde);
    let none: &[Formula] = &[];
    Ok(match item {
        1 => expect(
            none,
            &phi,
            &psi,
            &[ent(none, &Formula::or(d(phi.clone()), tl(phi.clone())))?],
        ),
        2 => expect(
            none,
            &phi,
            &psi,
            &[ent(none, &Formula::implies(d(phi.clone()), phi.clone()))?],
        ),
        3 => expect(none, &phi, &psi, &[ent(std::slice::from_ref(&phi), &d(phi.clone()))?]),
        4 => {
            let v = ent(
                &[d(Formula::and(phi.clone(), psi.clone()))],
                &Formula::and(d(phi.clone()), d(psi.clone())),
            )?;
            expect(none, &phi, &psi, &[v])
        }
        5 => {
            let left = ent(std::slice::from_ref(&psi), &phi)?;
            let right = ent(&[tl(phi.clone())], &tl(psi.clone()))?;
            if left.holds == right.holds {
                Outcome::Holds
            } else {
                fails(none, &phi, &psi, if left.holds { &right } else { &left })
            }
        }
        6 => {
            let a = ent(none, &Formula::iff(d(tl(phi.clone())), tl(phi.clone())))?;
            let b = ent(none, &Formula::iff(d(phi.clone()), tl(tl(phi.clone()))))?;
            expect(none, &phi, &psi, &[a, b])
        }
        7 => {
            let a = ent(&[tl(tl(phi.clone()))], &phi)?;
            let b = ent(std::slice::from_ref(&phi), &tl(tl(phi.clone())))?;
            expect(none, &phi, &psi, &[a, b])
        }
        8 => expect(
            none,
            &phi,
            &psi,
            &[ent(
                &[tl(Formula::implies(phi.clone(), psi.clone()))],
                &Formula::implies(psi.clone(), phi.clone()),
            )?],
        ),
        9 => {
            // Half of the theories are built so that both hypotheses hold.
            if rng.gen_bool(0.5) {
                t.push(Formula::implies(d(phi.clone()), psi.clone()));
                t.push(Formula::implies(tl(phi.clone()), psi.clone()));
            }
            if ent(&with(&t, &phi), &psi)?.holds && ent(&with(&t, &tl(phi.clone())), &psi)?.holds {
                expect(&t, &phi, &psi, &[ent(&t, &psi)?])
            } else {
                Outcome::Vacuous
            }
        }
        10 => {
            if rng.gen_bool(0.5) {
                t.push(tl(phi.clone()));
                t.push(tl(psi.clone()));
            }
            if ent(&t, &tl(phi.clone()))?.holds && ent(&t, &tl(psi.clone()))?.holds {
                expect(&t, &phi, &psi, &[ent(&t, &tl(Formula::or(phi.clone(), psi.clone())))?])
            } else {
                Outcome::Vacuous
            }
        }
        11 => {
            let left = ent(&with(&t, &phi), &psi)?;
            let right = ent(&t, &Formula::implies(d(phi.clone()), psi.clone()))?;
            if left.holds == right.holds {
                Outcome::Holds
            } else {
                fails(&t, &phi, &psi, if left.holds { &right } else { &left })
            }
        }
        _ => unreachable!("items are 1 to 11"),
    })
}

pub fn run_property_suite(config: &SuiteConfig) -> Result<SuiteReport, LemmaError> {
    let items = (1..=11)
        .map(|item| {
            let conditional = matches!(item, 9 | 10);
            run_item(
                &item.to_string(),
                item as u64,
                conditional,
                config.cases,
                config,
                |rng| check(item, rng),
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(SuiteReport {
        suite: Suite::Property,
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
            cases: 40,
            ..SuiteConfig::new(Suite::Property, 11)
        };
        let report = run_property_suite(&config).unwrap();
        assert_eq!(report.items.len(), 11);
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.items[8].premises_met.unwrap() > 0);
        assert!(report.items[9].premises_met.unwrap() > 0);
    }

    /// `¬¬p ⊩ p` fails, and the failure carries the witness.
    #[test]
    fn a_false_claim_is_refuted() {
        let p = Formula::prop("p");
        let v = ent(&[Formula::not(Formula::not(p.clone()))], &p).unwrap();
        assert!(matches!(fails(&[], &p, &p, &v), Outcome::Fails(j) if j["witness"].is_object()));
    }
}
