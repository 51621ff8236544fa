//! The chain of classes of closed formulas modulo a complete theory `Σ_v`.
//!
//! Two formulas are equivalent iff `v` gives them the same value, and the
//! classes are ordered by that value.

use serde_json::json;
use thiserror::Error;

use crate::linorder::BoundedChain;
use crate::semantics::{evaluate_closed, SemanticsError, TruthValue, Valuation};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LindenbaumError {
    #[error("formula is not closed: {0}")]
    OpenFormula(String),
    #[error("formula uses Δ but only G-formulas were requested: {0}")]
    NotGFormula(String),
    #[error("no class with index {0}")]
    UnknownClass(usize),
    #[error("{op} needs {expected} argument(s), got {found}")]
    Arity { op: ClassOp, expected: usize, found: usize },
    #[error("the chain has no class for {0}")]
    NotClosed(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// The complete theory `Σ_v = {φ : v(φ) = 1}`.
#[derive(Clone, Debug)]
pub struct CompleteTheoryOracle {
    pub valuation: Valuation,
}

impl CompleteTheoryOracle {
    pub fn new(valuation: Valuation) -> CompleteTheoryOracle {
        CompleteTheoryOracle { valuation }
    }

    pub fn value(&self, f: &Formula) -> Result<TruthValue, LindenbaumError> {
        if !f.is_closed() {
            return Err(LindenbaumError::OpenFormula(f.to_string()));
        }
        Ok(evaluate_closed(&self.valuation, f)?)
    }

    pub fn proves(&self, f: &Formula) -> Result<bool, LindenbaumError> {
        Ok(self.value(f)?.is_one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassOp {
    And,
    Or,
    Implies,
    Delta,
}

impl std::fmt::Display for ClassOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassOp::And => "∧",
            ClassOp::Or => "∨",
            ClassOp::Implies => "→",
            ClassOp::Delta => "Δ",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub value: TruthValue,
    /// Members in input order; `⊥` and `⊤` come last when they were adjoined.
    pub members: Vec<Formula>,
}

impl Class {
    pub fn representative(&self) -> &Formula {
        &self.members[0]
    }
}

/// Classes in ascending order; index 0 is `[⊥]` and the last is `[⊤]`.
#[derive(Clone, Debug)]
pub struct LindChain {
    pub oracle: CompleteTheoryOracle,
    pub classes: Vec<Class>,
}

pub fn build_chain(
    oracle: CompleteTheoryOracle,
    formulas: &[Formula],
    g_only: bool,
) -> Result<LindChain, LindenbaumError> {
    let mut classes: Vec<Class> = Vec::new();
    let add = |f: &Formula, value: TruthValue, classes: &mut Vec<Class>| match classes
        .binary_search_by(|c| c.value.cmp(&value))
    {
        Ok(i) => {
            if !classes[i].members.contains(f) {
                classes[i].members.push(f.clone());
            }
        }
        Err(i) => classes.insert(
            i,
            Class {
                value,
                members: vec![f.clone()],
            },
        ),
    };
    for f in formulas {
        if g_only && !f.is_g_formula() {
            return Err(LindenbaumError::NotGFormula(f.to_string()));
        }
        let value = oracle.value(f)?;
        add(f, value, &mut classes);
    }
    add(&Formula::Bottom, TruthValue::ZERO, &mut classes);
    add(&Formula::top(), TruthValue::ONE, &mut classes);
    Ok(LindChain { oracle, classes })
}

impl LindChain {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }

    /// Index of the class whose value equals `v(f)`, if any.
    pub fn class_of(&self, f: &Formula) -> Result<Option<usize>, LindenbaumError> {
        let value = self.oracle.value(f)?;
        Ok(self.classes.binary_search_by(|c| c.value.cmp(&value)).ok())
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a <= b
    }

    /// Applies `op` to the representatives of `args` and returns the class of
    /// the result.
    pub fn class_op(&self, op: ClassOp, args: &[usize]) -> Result<usize, LindenbaumError> {
        let expected = if op == ClassOp::Delta { 1 } else { 2 };
        if args.len() != expected {
            return Err(LindenbaumError::Arity {
                op,
                expected,
                found: args.len(),
            });
        }
        let rep = |i: usize| {
            self.classes
                .get(i)
                .map(|c| c.representative().clone())
                .ok_or(LindenbaumError::UnknownClass(i))
        };
        let f = match op {
            ClassOp::And => Formula::and(rep(args[0])?, rep(args[1])?),
            ClassOp::Or => Formula::or(rep(args[0])?, rep(args[1])?),
            ClassOp::Implies => Formula::implies(rep(args[0])?, rep(args[1])?),
            ClassOp::Delta => Formula::delta(rep(args[0])?),
        };
        self.class_of(&f)?
            .ok_or_else(|| LindenbaumError::NotClosed(f.to_string()))
    }

    /// Class names as `[representative]`.
    pub fn class_name(&self, i: usize) -> String {
        format!("[{}]", self.classes[i].representative())
    }

    pub fn to_bounded_chain(&self) -> BoundedChain {
        BoundedChain::new((0..self.len()).map(|i| self.class_name(i))).expect("at least [⊥] and [⊤], names distinct")
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "classes": self.classes.iter().enumerate().map(|(i, c)| json!({
                "name": self.class_name(i),
                "value": c.value.to_string(),
                "members": c.members.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{enumerate_closed_formulas, parse_formula, Signature};

    fn sig() -> Signature {
        Signature::propositional(["p", "q"])
    }

    fn f(t: &str) -> Formula {
        parse_formula(t, &sig()).unwrap()
    }

    fn oracle(p: TruthValue, q: TruthValue) -> CompleteTheoryOracle {
        CompleteTheoryOracle::new(Valuation::propositional([("p", p), ("q", q)]))
    }

    fn half() -> TruthValue {
        TruthValue::new(1, 2).unwrap()
    }

    #[test]
    fn partition_by_value() {
        let fs: Vec<Formula> = ["bot", "p", "q", "p -> q", "q -> p"].map(f).to_vec();
        let chain = build_chain(oracle(half(), TruthValue::ONE), &fs, true).unwrap();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain.classes[0].members, vec![f("bot")]);
        assert_eq!(chain.classes[1].value, half());
        assert_eq!(chain.classes[1].members, vec![f("p"), f("q -> p")]);
        assert_eq!(chain.classes[2].members, vec![f("q"), f("p -> q"), Formula::top()]);
    }

    #[test]
    fn endpoints_adjoined() {
        let chain = build_chain(oracle(half(), half()), &[Formula::top(), Formula::Bottom], true).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain.to_bounded_chain().elements(), ["[bot]", "[top]"]);
        let chain = build_chain(oracle(half(), half()), &[f("p"), f("p & p"), f("p | p")], true).unwrap();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain.classes[1].members.len(), 3);
    }

    #[test]
    fn operations() {
        let fs: Vec<Formula> = ["p", "q"].map(f).to_vec();
        let chain = build_chain(oracle(half(), TruthValue::ONE), &fs, true).unwrap();
        let p = chain.class_of(&f("p")).unwrap().unwrap();
        let q = chain.class_of(&f("q")).unwrap().unwrap();
        assert_eq!(chain.class_op(ClassOp::And, &[p, q]).unwrap(), p);
        assert_eq!(chain.class_op(ClassOp::Implies, &[p, q]).unwrap(), chain.top());
        assert_eq!(chain.class_op(ClassOp::Delta, &[p]).unwrap(), chain.bottom());
        assert!(matches!(
            chain.class_op(ClassOp::Delta, &[p, q]),
            Err(LindenbaumError::Arity { .. })
        ));
        assert_eq!(
            chain.class_op(ClassOp::And, &[9, q]),
            Err(LindenbaumError::UnknownClass(9))
        );
    }

    #[test]
    fn missing_result_class_is_reported() {
        let v = TruthValue::new(1, 3).unwrap();
        let chain = build_chain(oracle(v, TruthValue::new(2, 3).unwrap()), &[f("q")], true).unwrap();
        let q = chain.class_of(&f("q")).unwrap().unwrap();
        assert_eq!(chain.class_op(ClassOp::Or, &[q, chain.top()]).unwrap(), chain.top());
        let only_p = build_chain(oracle(v, TruthValue::ONE), &[f("p")], true).unwrap();
        assert!(only_p.class_op(ClassOp::Delta, &[1]).is_ok());
        let none = build_chain(oracle(v, TruthValue::ONE), &[], true).unwrap();
        assert_eq!(none.class_op(ClassOp::Implies, &[1, 0]).unwrap(), 0);
    }

    #[test]
    fn input_errors() {
        let o = oracle(half(), half());
        assert!(matches!(
            build_chain(o.clone(), &[f("D p")], true),
            Err(LindenbaumError::NotGFormula(_))
        ));
        assert!(build_chain(o.clone(), &[f("D p")], false).is_ok());
        let open = Formula::atom("p", vec![crate::syntax::Term::Var("x".into())]);
        assert!(matches!(
            build_chain(o, &[open], false),
            Err(LindenbaumError::OpenFormula(_))
        ));
    }

    /// Every representative swap gives the same class, and the order agrees
    /// with provability of implications.
    #[test]
    fn well_defined_and_ordered() {
        let universe = enumerate_closed_formulas(&sig(), 1, true);
        let third = |i| TruthValue::fraction(i, 3);
        for (a, b) in [(1, 2), (2, 2), (0, 3), (3, 1)] {
            let chain = build_chain(oracle(third(a), third(b)), &universe, false).unwrap();
            for i in 0..chain.len() {
                for j in 0..chain.len() {
                    for x in &chain.classes[i].members {
                        for y in &chain.classes[j].members {
                            let imp = chain.oracle.proves(&Formula::implies(x.clone(), y.clone())).unwrap();
                            assert_eq!(imp, i <= j);
                            for (op, g) in [
                                (ClassOp::And, Formula::and(x.clone(), y.clone())),
                                (ClassOp::Or, Formula::or(x.clone(), y.clone())),
                                (ClassOp::Implies, Formula::implies(x.clone(), y.clone())),
                            ] {
                                assert_eq!(chain.class_of(&g).unwrap(), Some(chain.class_op(op, &[i, j]).unwrap()));
                            }
                        }
                    }
                }
                let d = chain.class_op(ClassOp::Delta, &[i]).unwrap();
                assert_eq!(d, if i == chain.top() { chain.top() } else { chain.bottom() });
            }
        }
    }

    #[test]
    fn json_lists_classes_in_order() {
        let chain = build_chain(oracle(half(), TruthValue::ONE), &[f("p")], true).unwrap();
        let j = chain.to_json();
        let names: Vec<&str> = j["classes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        assert_eq!(names, ["[bot]", "[p]", "[top]"]);
    }
}
