//! Checks the four completeness notions of a theory, restricted to a finite
//! universe of propositional formulas.
//!
//! Everything is decided from the models of Σ. For a finite theory these are
//! the canonical points over the atoms of Σ and the universe. For Σ_v, the
//! 1-set of a valuation, every model of Σ_v induces the same order type on
//! the atoms as `v`, so `v` alone decides `Σ_v ⊩ χ` and satisfiability of
//! `Σ_v ∪ {φ}`.

use serde_json::json;

use crate::semantics::{evaluate_closed, TruthValue, Valuation};
use crate::syntax::{Formula, Theory};

use super::{atoms_of, model_mask, rank_vector, require_propositional, DecisionError, PointSpace};

#[derive(Clone, Debug)]
pub enum Presentation {
    Theory(Theory),
    /// Σ_v = {φ : v(φ) = 1}.
    Valuation(Valuation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    pub holds: bool,
    /// Universe formulas violating the condition, when it fails.
    pub violation: Vec<Formula>,
}

impl ConditionCheck {
    fn from(violation: Option<Vec<Formula>>) -> ConditionCheck {
        ConditionCheck {
            holds: violation.is_none(),
            violation: violation.unwrap_or_default(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "holds": self.holds,
            "violation": self.violation.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub satisfiable: bool,
    pub linearly_complete: ConditionCheck,
    pub disjunction_property: ConditionCheck,
    pub tilde_complete: ConditionCheck,
    pub maximally_satisfiable: ConditionCheck,
}

impl CompletenessReport {
    pub fn verdicts(&self) -> [bool; 4] {
        [
            self.linearly_complete.holds,
            self.disjunction_property.holds,
            self.tilde_complete.holds,
            self.maximally_satisfiable.holds,
        ]
    }

    /// True when the four conditions are jointly true or jointly false.
    pub fn agree(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&b| b == v[0])
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "satisfiable": self.satisfiable,
            "linearly_complete": self.linearly_complete.to_json(),
            "disjunction_property": self.disjunction_property.to_json(),
            "tilde_complete": self.tilde_complete.to_json(),
            "maximally_satisfiable": self.maximally_satisfiable.to_json(),
        })
    }
}

/// Column of ranks per distinct formula, one entry per model of Σ.
struct Table {
    top: u8,
    rows: Vec<(Formula, Vec<u8>)>,
}

impl Table {
    fn entails(&self, row: &[u8]) -> bool {
        row.iter().all(|&r| r == self.top)
    }

    fn consistent_with(&self, row: &[u8]) -> bool {
        row.contains(&self.top)
    }
}

fn dedup(rows: Vec<(Formula, Vec<u8>)>, top: u8) -> Table {
    let mut seen = std::collections::HashSet::new();
    let rows = rows.into_iter().filter(|(_, v)| seen.insert(v.clone())).collect();
    Table { top, rows }
}

fn table_for_theory(theory: &Theory, universe: &[Formula]) -> Result<Table, DecisionError> {
    require_propositional(theory.iter().chain(universe))?;
    let space = PointSpace::new(atoms_of(theory.iter().chain(universe)))?;
    let mask = model_mask(theory.formulas(), &space)?;
    let points: Vec<usize> = mask.ones().collect();
    let mut rows = Vec::with_capacity(universe.len());
    for f in universe {
        let v = rank_vector(f, &space)?;
        rows.push((f.clone(), points.iter().map(|&i| v[i]).collect()));
    }
    Ok(dedup(rows, space.top()))
}

fn table_for_valuation(v: &Valuation, universe: &[Formula]) -> Result<Table, DecisionError> {
    let values: Vec<TruthValue> = universe
        .iter()
        .map(|f| evaluate_closed(v, f))
        .collect::<Result<_, _>>()?;
    let mut distinct = values.clone();
    distinct.extend([TruthValue::ZERO, TruthValue::ONE]);
    distinct.sort();
    distinct.dedup();
    let rank = |x: &TruthValue| distinct.binary_search(x).expect("present") as u8;
    let rows = universe
        .iter()
        .zip(&values)
        .map(|(f, x)| (f.clone(), vec![rank(x)]))
        .collect();
    Ok(dedup(rows, (distinct.len() - 1) as u8))
}

/// Evaluates linear completeness, the disjunction property, ∼-completeness
/// and maximal satisfiability of Σ with every formula quantifier ranging over
/// `universe`.
pub fn classify_completeness(sigma: &Presentation, universe: &[Formula]) -> Result<CompletenessReport, DecisionError> {
    let table = match sigma {
        Presentation::Theory(t) => table_for_theory(t, universe)?,
        Presentation::Valuation(v) => table_for_valuation(v, universe)?,
    };
    let satisfiable = match sigma {
        Presentation::Theory(t) => super::is_satisfiable(t)?,
        Presentation::Valuation(_) => true,
    };
    let rows = &table.rows;
    let top = table.top;

    let pairs = || rows.iter().flat_map(|a| rows.iter().map(move |b| (a, b)));

    let linear = pairs()
        .find(|((_, x), (_, y))| {
            let le = x.iter().zip(y).all(|(a, b)| a <= b);
            let ge = x.iter().zip(y).all(|(a, b)| a >= b);
            !le && !ge
        })
        .map(|((f, _), (g, _))| vec![f.clone(), g.clone()]);

    let disjunction = pairs()
        .find(|((_, x), (_, y))| {
            let join: Vec<u8> = x.iter().zip(y).map(|(a, b)| *a.max(b)).collect();
            table.entails(&join) && !table.entails(x) && !table.entails(y)
        })
        .map(|((f, _), (g, _))| vec![f.clone(), g.clone()]);

    let tilde = rows
        .iter()
        .find(|(_, x)| {
            let not_delta: Vec<u8> = x.iter().map(|&r| if r == top { 0 } else { top }).collect();
            !table.entails(x) && !table.entails(&not_delta)
        })
        .map(|(f, _)| vec![f.clone()]);

    let maximal = rows
        .iter()
        .find(|(_, x)| table.consistent_with(x) && !table.entails(x))
        .map(|(f, _)| vec![f.clone()]);

    Ok(CompletenessReport {
        satisfiable,
        linearly_complete: ConditionCheck::from(linear),
        disjunction_property: ConditionCheck::from(disjunction),
        tilde_complete: ConditionCheck::from(tilde),
        maximally_satisfiable: ConditionCheck::from(maximal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{enumerate_closed_formulas, parse_formula, Signature};

    fn pq() -> Signature {
        Signature::propositional(["p", "q"])
    }

    fn universe() -> Vec<Formula> {
        enumerate_closed_formulas(&pq(), 2, true)
    }

    #[test]
    fn single_valuation_is_complete() {
        let v = Valuation::propositional([("p", TruthValue::new(1, 2).unwrap()), ("q", TruthValue::ONE)]);
        let r = classify_completeness(&Presentation::Valuation(v), &universe()).unwrap();
        assert_eq!(r.verdicts(), [true; 4]);
    }

    #[test]
    fn disjunction_without_disjuncts() {
        let t = Theory::new([parse_formula("p | q", &pq()).unwrap()]).unwrap();
        let r = classify_completeness(&Presentation::Theory(t), &universe()).unwrap();
        assert_eq!(r.verdicts(), [false; 4]);
        assert_eq!(r.disjunction_property.violation.len(), 2);
    }

    #[test]
    fn unsatisfiable_theory_is_complete() {
        let t = Theory::new([Formula::Bottom]).unwrap();
        let r = classify_completeness(&Presentation::Theory(t), &universe()).unwrap();
        assert!(!r.satisfiable);
        assert_eq!(r.verdicts(), [true; 4]);
    }

    #[test]
    fn theory_pinning_an_order_type_is_complete() {
        let s = pq();
        let t = Theory::new(["!!p", "~p", "q", "D q"].map(|x| parse_formula(x, &s).unwrap())).unwrap();
        let r = classify_completeness(&Presentation::Theory(t), &universe()).unwrap();
        assert_eq!(r.verdicts(), [true; 4]);
    }
}
