//! Decision procedures: exact for the propositional fragment via canonical
//! chains, bounded for first-order formulas, and the completeness
//! classification of a theory over a finite formula universe.
//!
//! A propositional formula's value under an assignment depends only on the
//! order type of the atom values together with which of them are 0 or 1.
//! With `n` atoms every such type is realized inside the chain
//! `{0, 1/(n+1), …, 1}`, so quantifying over that chain is exact.

mod bounded;
mod completeness;
pub(crate) mod program;

use fixedbitset::FixedBitSet;
use serde_json::json;
use thiserror::Error;

use crate::exec::Exec;
use crate::semantics::{SemanticsError, TruthValue, Valuation};
use crate::syntax::{Formula, Theory};
use program::Program;

pub use bounded::{element_name, fo_check_bounded, fo_check_bounded_with, BoundedOptions};
pub use completeness::{classify_completeness, CompletenessReport, ConditionCheck, Presentation};

/// Canonical points beyond this many are refused rather than enumerated.
pub const MAX_POINTS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("not a propositional formula: {0}")]
    NotPropositional(String),
    #[error("formula is not closed: {0}")]
    OpenFormula(String),
    #[error("search space of {space} points exceeds the cap of {cap}")]
    BudgetExceeded { space: u128, cap: u128 },
    #[error("value grid must be strictly increasing, start at 0, end at 1 and have at most 255 entries")]
    BadGrid,
    #[error("maximum universe size must be at least 1")]
    BadBound,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// The `(n+2)`-element chain `{i/(n+1)}` used for `n` atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalChain {
    pub n: usize,
    pub values: Vec<TruthValue>,
}

impl CanonicalChain {
    pub fn new(n: usize) -> CanonicalChain {
        CanonicalChain {
            n,
            values: (0..=n + 1).map(|i| TruthValue::fraction(i, n + 1)).collect(),
        }
    }
}

/// The assignments of a list of atoms into their canonical chain, indexed
/// `0..len()` with the first atom varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpace {
    atoms: Vec<String>,
    base: usize,
    len: usize,
}

impl PointSpace {
    pub fn new(atoms: Vec<String>) -> Result<PointSpace, DecisionError> {
        Self::with_base(atoms.len() + 2, atoms)
    }

    /// Assignments into a chain of `base` ranks instead of the canonical one.
    pub fn with_base(base: usize, atoms: Vec<String>) -> Result<PointSpace, DecisionError> {
        assert!((2..=256).contains(&base), "chain must have 2..=256 elements");
        let space = (base as u128).checked_pow(atoms.len() as u32).unwrap_or(u128::MAX);
        if space > MAX_POINTS as u128 {
            return Err(DecisionError::BudgetExceeded {
                space,
                cap: MAX_POINTS as u128,
            });
        }
        Ok(PointSpace {
            atoms,
            base,
            len: space as usize,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn top(&self) -> u8 {
        (self.base - 1) as u8
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ranks_into(&self, mut index: usize, out: &mut [u8]) {
        for r in out.iter_mut() {
            *r = (index % self.base) as u8;
            index /= self.base;
        }
    }

    pub fn ranks(&self, index: usize) -> Vec<u8> {
        let mut out = vec![0; self.atoms.len()];
        self.ranks_into(index, &mut out);
        out
    }

    pub fn index_of(&self, ranks: &[u8]) -> usize {
        ranks.iter().rev().fold(0, |acc, &r| acc * self.base + r as usize)
    }

    pub fn value(&self, rank: u8) -> TruthValue {
        TruthValue::fraction(rank as usize, self.base - 1)
    }

    pub fn values(&self, index: usize) -> Vec<TruthValue> {
        self.ranks(index).into_iter().map(|r| self.value(r)).collect()
    }

    pub fn valuation(&self, index: usize) -> Valuation {
        Valuation::propositional(self.atoms.iter().cloned().zip(self.values(index)))
    }

    pub(crate) fn slot_of(&self) -> impl Fn(&str) -> u32 + '_ {
        move |name| self.atoms.iter().position(|a| a == name).expect("atom in space") as u32
    }
}

/// All `(n+2)^n` assignments of `atoms` into the canonical chain, first atom
/// varying fastest.
pub fn enumerate_assignments(atoms: &[String]) -> Result<impl Iterator<Item = Vec<TruthValue>>, DecisionError> {
    let space = PointSpace::new(atoms.to_vec())?;
    Ok((0..space.len()).map(move |i| space.values(i)))
}

/// Outcome of a 1-entailment check. A witness is present exactly when the
/// entailment fails: it gives every premise value 1 and the conclusion a
/// value below 1. `bounded` marks verdicts from an incomplete search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntailmentVerdict {
    pub holds: bool,
    pub bounded: bool,
    pub witness: Option<Valuation>,
}

impl EntailmentVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "holds": self.holds,
            "bounded": self.bounded,
            "witness": self.witness.as_ref().map(Valuation::to_json),
        })
    }
}

/// Atom names of the formulas, in name order.
pub fn atoms_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    let mut set = std::collections::BTreeSet::new();
    for f in formulas {
        set.extend(f.prop_atoms());
    }
    let mut atoms: Vec<String> = set.into_iter().collect();
    atoms.sort_by(|a, b| crate::syntax::cmp_names(a, b));
    atoms
}

fn require_propositional<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<(), DecisionError> {
    for f in formulas {
        if !f.is_propositional() {
            return Err(DecisionError::NotPropositional(f.to_string()));
        }
    }
    Ok(())
}

/// Premises and a conclusion compiled over one point space.
pub(crate) struct Compiled {
    pub(crate) space: PointSpace,
    program: Program,
    premises: Vec<u32>,
    conclusion: u32,
}

impl Compiled {
    pub(crate) fn new(space: PointSpace, premises: &[Formula], conclusion: &Formula) -> Compiled {
        let mut program = Program::default();
        let slot_of = space.slot_of();
        let premises = premises.iter().map(|f| program.compile_prop(f, &slot_of)).collect();
        let conclusion = program.compile_prop(conclusion, &slot_of);
        drop(slot_of);
        Compiled {
            space,
            program,
            premises,
            conclusion,
        }
    }

    /// Whether point `i` models the premises but not the conclusion.
    pub(crate) fn refutes(&self, i: usize, ranks: &mut [u8], scratch: &mut Vec<u8>) -> bool {
        let top = self.space.top();
        self.space.ranks_into(i, ranks);
        scratch.clear();
        for &p in &self.premises {
            if self.program.extend(p, ranks, top, scratch) != top {
                return false;
            }
        }
        self.program.extend(self.conclusion, ranks, top, scratch) != top
    }

    pub(crate) fn first_refutation(&self, exec: Exec) -> Option<usize> {
        let n = self.space.atoms().len();
        exec.find_first(self.space.len(), |i| {
            let mut ranks = vec![0u8; n];
            let mut scratch = Vec::with_capacity(self.program.len());
            self.refutes(i, &mut ranks, &mut scratch).then_some(i)
        })
    }
}

pub fn one_entails(theory: &Theory, formula: &Formula) -> Result<EntailmentVerdict, DecisionError> {
    one_entails_with(theory, formula, Exec::default())
}

/// `T ⊩ φ` for propositional `T` and `φ`, decided exactly. A failing verdict
/// carries the first refuting canonical assignment.
pub fn one_entails_with(theory: &Theory, formula: &Formula, exec: Exec) -> Result<EntailmentVerdict, DecisionError> {
    entails_formulas(theory.formulas(), formula, exec)
}

pub(crate) fn entails_formulas(
    premises: &[Formula],
    formula: &Formula,
    exec: Exec,
) -> Result<EntailmentVerdict, DecisionError> {
    require_propositional(premises.iter().chain([formula]))?;
    let space = PointSpace::new(atoms_of(premises.iter().chain([formula])))?;
    let compiled = Compiled::new(space, premises, formula);
    let witness = compiled.first_refutation(exec).map(|i| compiled.space.valuation(i));
    Ok(EntailmentVerdict {
        holds: witness.is_none(),
        bounded: false,
        witness,
    })
}

pub fn is_tautology(formula: &Formula) -> Result<bool, DecisionError> {
    Ok(entails_formulas(&[], formula, Exec::default())?.holds)
}

/// Whether some valuation gives every member value 1.
pub fn is_satisfiable(theory: &Theory) -> Result<bool, DecisionError> {
    Ok(!entails_formulas(theory.formulas(), &Formula::Bottom, Exec::default())?.holds)
}

/// Rank of `formula` at every point of `space`.
pub fn rank_vector(formula: &Formula, space: &PointSpace) -> Result<Vec<u8>, DecisionError> {
    require_propositional([formula])?;
    let mut program = Program::default();
    let root = program.compile_prop(formula, &space.slot_of());
    let mut ranks = vec![0u8; space.atoms().len()];
    let mut scratch = Vec::with_capacity(program.len());
    Ok((0..space.len())
        .map(|i| {
            space.ranks_into(i, &mut ranks);
            program.eval(root, &ranks, space.top(), &mut scratch)
        })
        .collect())
}

/// The points of `space` at which every formula of `theory` has value 1.
pub fn model_mask(theory: &[Formula], space: &PointSpace) -> Result<FixedBitSet, DecisionError> {
    let mut mask = FixedBitSet::with_capacity(space.len());
    mask.insert_range(..);
    for f in theory {
        let v = rank_vector(f, space)?;
        for (i, &r) in v.iter().enumerate() {
            if r != space.top() {
                mask.set(i, false);
            }
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::evaluate_closed;
    use crate::syntax::{parse_formula, Signature};

    fn pq() -> Signature {
        Signature::propositional(["p", "q", "r"])
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, &pq()).unwrap()
    }

    fn thy(lines: &[&str]) -> Theory {
        Theory::new(lines.iter().map(|l| f(l))).unwrap()
    }

    fn half() -> TruthValue {
        TruthValue::new(1, 2).unwrap()
    }

    #[test]
    fn assignment_counts() {
        assert_eq!(enumerate_assignments(&[]).unwrap().count(), 1);
        let one: Vec<_> = enumerate_assignments(&["p".into()]).unwrap().collect();
        assert_eq!(one, vec![vec![TruthValue::ZERO], vec![half()], vec![TruthValue::ONE]]);
        let two: Vec<_> = enumerate_assignments(&["p".into(), "q".into()]).unwrap().collect();
        assert_eq!(two.len(), 16);
        assert_eq!(two[1], vec![TruthValue::new(1, 3).unwrap(), TruthValue::ZERO]);
        assert_eq!(CanonicalChain::new(2).values.len(), 4);
    }

    #[test]
    fn point_indexing_round_trips() {
        let s = PointSpace::new(vec!["p".into(), "q".into(), "r".into()]).unwrap();
        for i in 0..s.len() {
            assert_eq!(s.index_of(&s.ranks(i)), i);
        }
    }

    #[test]
    fn tautology_examples() {
        assert!(is_tautology(&f("D p | ~p")).unwrap());
        assert!(is_tautology(&f("D p -> p")).unwrap());
        assert!(!is_tautology(&f("p | !p")).unwrap());
        let v = one_entails(&Theory::empty(), &f("p | !p")).unwrap();
        assert_eq!(v.witness.unwrap().prop("p").unwrap(), half());
        assert!(is_tautology(&f("(p -> q) | (q -> p)")).unwrap());
        assert!(!is_tautology(&f("!!p -> p")).unwrap());
    }

    #[test]
    fn entailment_examples() {
        assert!(one_entails(&thy(&["p -> q", "p"]), &f("q")).unwrap().holds);
        let v = one_entails(&thy(&["!!p"]), &f("p")).unwrap();
        assert!(!v.holds && !v.bounded);
        assert_eq!(v.witness.as_ref().unwrap().prop("p").unwrap(), half());
        assert!(one_entails(&thy(&["p & !q"]), &f("D p")).unwrap().holds);
        assert!(one_entails(&thy(&["bot"]), &f("q")).unwrap().holds);
        assert!(!is_satisfiable(&thy(&["p", "~p"])).unwrap());
        assert!(is_satisfiable(&thy(&["!!p", "~p"])).unwrap());
    }

    #[test]
    fn witnesses_revalidate() {
        let t = thy(&["p -> q", "q | r"]);
        let goal = f("p | r");
        let v = one_entails(&t, &goal).unwrap();
        let w = v.witness.unwrap();
        assert!(crate::semantics::models(&w, &t).unwrap());
        assert!(!evaluate_closed(&w, &goal).unwrap().is_one());
    }

    #[test]
    fn rejects_first_order_input() {
        let mut s = Signature::new();
        s.add_relation("R", 1).unwrap();
        let g = parse_formula("forall x. R(x)", &s).unwrap();
        assert!(matches!(is_tautology(&g), Err(DecisionError::NotPropositional(_))));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let t = thy(&["p -> q", "!!r"]);
        for goal in ["q", "r", "p -> r", "D r"] {
            let a = one_entails_with(&t, &f(goal), Exec::Sequential).unwrap();
            let b = one_entails_with(&t, &f(goal), Exec::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn verdict_json_shape() {
        let v = one_entails(&thy(&["!!p"]), &f("p")).unwrap();
        let j = v.to_json();
        assert_eq!(j["holds"], false);
        assert_eq!(j["witness"]["relations"]["p"]["()"], "1/2");
    }
}
