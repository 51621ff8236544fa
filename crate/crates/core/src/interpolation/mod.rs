//! Separators, interpolants and countermodels from the interpolation proof.
//!
//! At propositional level everything is decided on canonical points. The
//! value of a formula over the common atoms at a model of `T` depends only on
//! the order type of the common atoms there, so `T` is summarized by the set
//! `A_T` of those types. A common-language `θ` separates `T` from `U` iff its
//! 1-set contains `A_T` and misses `A_U`.

mod clone;
mod henkin;
mod pipeline;

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde_json::json;
use thiserror::Error;

use crate::decision::{atoms_of, model_mask, one_entails, DecisionError, EntailmentVerdict, PointSpace};
use crate::lindenbaum::LindenbaumError;
use crate::linorder::LinOrderError;
use crate::semantics::{SemanticsError, Valuation};
use crate::syntax::{Formula, Theory};

pub use clone::{clone_closure, invariant_bound, CloneBudgetExceeded, CloneTable};
pub use henkin::{henkin_extend, HenkinOptions, HenkinStep, HenkinTrace, Separators, Side};
pub use pipeline::{countermodel_synthesize, Countermodel, PipelineOptions, PipelineTrace};

/// Default cap on the number of vectors a clone closure may hold.
pub const DEFAULT_CLONE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Error)]
pub enum InterpolationError {
    #[error("not a propositional formula: {0}")]
    NotPropositional(String),
    #[error("separator `{0}` is not in the common language")]
    OutsideCommonLanguage(String),
    #[error("the premise does not 1-entail the conclusion")]
    NotEntailed { witness: Option<Valuation> },
    #[error("the theories are separable by `{0}`")]
    Separable(Formula),
    #[error("step {m}: neither choice keeps the theories inseparable")]
    SeparatedMidStream { m: usize },
    #[error("the enumeration ended before the {0} side fixed a single order type")]
    NotPinned(Side),
    #[error("the two sides disagree on the common language: {0}")]
    CommonTypeMismatch(String),
    #[error("{0}")]
    CloneBudget(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Lindenbaum(#[from] LindenbaumError),
    #[error(transparent)]
    LinOrder(#[from] LinOrderError),
}

impl From<CloneBudgetExceeded> for InterpolationError {
    fn from(e: CloneBudgetExceeded) -> Self {
        InterpolationError::CloneBudget(e.to_string())
    }
}

/// `θ` together with the two entailments `T ⊩ θ` and `U ⊩ ∼θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparabilityCertificate {
    pub separator: Formula,
    pub t_entails: EntailmentVerdict,
    pub u_entails_tilde: EntailmentVerdict,
}

impl SeparabilityCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "separator": self.separator.to_string(),
            "t_entails_separator": self.t_entails.to_json(),
            "u_entails_tilde_separator": self.u_entails_tilde.to_json(),
        })
    }
}

/// An interpolant with its two certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolant {
    pub theta: Formula,
    pub premise_entails: EntailmentVerdict,
    pub entails_conclusion: EntailmentVerdict,
}

impl Interpolant {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "interpolant": self.theta.to_string(),
            "premise_entails_interpolant": self.premise_entails.to_json(),
            "interpolant_entails_conclusion": self.entails_conclusion.to_json(),
        })
    }
}

fn require_propositional<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Result<(), InterpolationError> {
    for f in fs {
        if !f.is_propositional() {
            return Err(InterpolationError::NotPropositional(f.to_string()));
        }
    }
    Ok(())
}

/// Atoms shared by both lists, in name order.
pub(crate) fn common_atoms(a: &[String], b: &[String]) -> Vec<String> {
    let b: BTreeSet<&String> = b.iter().collect();
    a.iter().filter(|x| b.contains(x)).cloned().collect()
}

/// Canonical points of one side together with the common order type of
/// each point.
pub(crate) struct Projection {
    pub(crate) space: PointSpace,
    pub(crate) common: PointSpace,
    to_common: Vec<u32>,
}

impl Projection {
    pub(crate) fn new(atoms: Vec<String>, common: &[String]) -> Result<Projection, InterpolationError> {
        let space = PointSpace::new(atoms)?;
        let common = PointSpace::new(common.to_vec())?;
        let cols: Vec<usize> = common
            .atoms()
            .iter()
            .map(|c| {
                space
                    .atoms()
                    .iter()
                    .position(|a| a == c)
                    .expect("common atom on this side")
            })
            .collect();
        let mut ranks = vec![0u8; space.atoms().len()];
        let to_common = (0..space.len())
            .map(|i| {
                space.ranks_into(i, &mut ranks);
                let sub: Vec<u8> = cols.iter().map(|&c| ranks[c]).collect();
                let ty: Vec<u8> = clone::order_type(&sub, space.top())
                    .into_iter()
                    .map(|r| if r == u8::MAX { common.top() } else { r })
                    .collect();
                common.index_of(&ty) as u32
            })
            .collect();
        Ok(Projection {
            space,
            common,
            to_common,
        })
    }

    pub(crate) fn models(&self, theory: &[Formula]) -> Result<FixedBitSet, InterpolationError> {
        Ok(model_mask(theory, &self.space)?)
    }

    /// The common order types realized by the points of `mask`.
    pub(crate) fn image(&self, mask: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.common.len());
        for i in mask.ones() {
            out.insert(self.to_common[i] as usize);
        }
        out
    }
}

/// The first clone member whose 1-set contains `a` and misses `b`.
pub(crate) fn separating_vector(clone: &CloneTable, a: &FixedBitSet, b: &FixedBitSet) -> Option<usize> {
    (0..clone.len()).find(|&i| {
        let ones = clone.one_mask(i);
        a.is_subset(&ones) && ones.is_disjoint(b)
    })
}

/// Certificate that `θ` separates `T` from `U`, if it does.
pub fn separates(
    theta: &Formula,
    t: &Theory,
    u: &Theory,
) -> Result<Option<SeparabilityCertificate>, InterpolationError> {
    require_propositional(t.iter().chain(u.iter()).chain([theta]))?;
    let common = common_atoms(&atoms_of(t.iter()), &atoms_of(u.iter()));
    if theta.prop_atoms().iter().any(|a| !common.contains(a)) {
        return Err(InterpolationError::OutsideCommonLanguage(theta.to_string()));
    }
    let t_entails = one_entails(t, theta)?;
    let u_entails_tilde = one_entails(u, &Formula::tilde(theta.clone()))?;
    Ok(
        (t_entails.holds && u_entails_tilde.holds).then(|| SeparabilityCertificate {
            separator: theta.clone(),
            t_entails,
            u_entails_tilde,
        }),
    )
}

pub fn find_separator(
    t: &Theory,
    u: &Theory,
    g_only: bool,
) -> Result<Option<SeparabilityCertificate>, InterpolationError> {
    find_separator_with(t, u, g_only, DEFAULT_CLONE_BUDGET)
}

/// Searches the clone over the common atoms (without Δ when `g_only`) for a
/// separator. `None` certifies that the theories are inseparable.
pub fn find_separator_with(
    t: &Theory,
    u: &Theory,
    g_only: bool,
    budget: usize,
) -> Result<Option<SeparabilityCertificate>, InterpolationError> {
    require_propositional(t.iter().chain(u.iter()))?;
    let (ta, ua) = (atoms_of(t.iter()), atoms_of(u.iter()));
    let common = common_atoms(&ta, &ua);
    let pt = Projection::new(ta, &common)?;
    let pu = Projection::new(ua, &common)?;
    let a_t = pt.image(&pt.models(t.formulas())?);
    let a_u = pu.image(&pu.models(u.formulas())?);
    let clone = clone_closure(&common, !g_only, budget)?;
    let Some(i) = separating_vector(&clone, &a_t, &a_u) else {
        return Ok(None);
    };
    let theta = clone.witness(i);
    match separates(&theta, t, u)? {
        Some(cert) => Ok(Some(cert)),
        None => Err(InterpolationError::Internal(format!(
            "clone witness `{theta}` does not separate"
        ))),
    }
}

pub fn interpolate(phi: &Formula, psi: &Formula, g_only: bool) -> Result<Option<Interpolant>, InterpolationError> {
    interpolate_with(phi, psi, g_only, DEFAULT_CLONE_BUDGET)
}

/// An interpolant for `φ ⊩ ψ` over the common atoms, found as a separator of
/// `{φ}` and `{∼ψ}`: `∼ψ ⊩ ∼θ` holds iff `θ ⊩ ψ`.
pub fn interpolate_with(
    phi: &Formula,
    psi: &Formula,
    g_only: bool,
    budget: usize,
) -> Result<Option<Interpolant>, InterpolationError> {
    require_propositional([phi, psi])?;
    let t = Theory::new([phi.clone()]).expect("closed");
    let verdict = one_entails(&t, psi)?;
    if !verdict.holds {
        return Err(InterpolationError::NotEntailed {
            witness: verdict.witness,
        });
    }
    let u = Theory::new([Formula::tilde(psi.clone())]).expect("closed");
    let Some(cert) = find_separator_with(&t, &u, g_only, budget)? else {
        return Ok(None);
    };
    let theta = cert.separator;
    let premise_entails = cert.t_entails;
    let entails_conclusion = one_entails(&Theory::new([theta.clone()]).expect("closed"), psi)?;
    if !entails_conclusion.holds {
        return Err(InterpolationError::Internal(format!(
            "`{theta}` does not entail the conclusion"
        )));
    }
    Ok(Some(Interpolant {
        theta,
        premise_entails,
        entails_conclusion,
    }))
}

/// Replaces the constants private to `φ` by existentially bound variables and
/// those private to `ψ` by universally bound ones.
pub fn abstract_constants(phi: &Formula, psi: &Formula) -> (Formula, Formula) {
    let (cp, cq) = (phi.constants(), psi.constants());
    let mut used: BTreeSet<String> = phi.variable_names();
    used.extend(psi.variable_names());
    let sorted = |set: BTreeSet<String>| {
        let mut v: Vec<String> = set.into_iter().collect();
        v.sort_by(|a, b| crate::syntax::cmp_names(a, b));
        v
    };
    let d = sorted(cp.difference(&cq).cloned().collect());
    let e = sorted(cq.difference(&cp).cloned().collect());

    let mut bind = |f: &Formula, consts: &[String], stem: &str, exists: bool| {
        let names: Vec<String> = (1..=consts.len())
            .map(|i| {
                let base = if consts.len() == 1 {
                    stem.to_string()
                } else {
                    format!("{stem}{i}")
                };
                let mut name = base.clone();
                let mut k = 0;
                while used.contains(&name) {
                    k += 1;
                    name = format!("{base}_{k}");
                }
                used.insert(name.clone());
                name
            })
            .collect();
        let mut body = f.clone();
        for (c, x) in consts.iter().zip(&names) {
            body = body.abstract_constant(c, x);
        }
        for x in names.iter().rev() {
            body = if exists {
                Formula::exists(x.clone(), body)
            } else {
                Formula::forall(x.clone(), body)
            };
        }
        body
    };
    let a = bind(phi, &d, "x", true);
    let b = bind(psi, &e, "y", false);
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_formula_inferred, Signature};

    fn f(t: &str) -> Formula {
        parse_formula(t, &Signature::propositional(["p", "q", "r"])).unwrap()
    }

    fn th(fs: &[&str]) -> Theory {
        Theory::new(fs.iter().map(|x| f(x))).unwrap()
    }

    #[test]
    fn separates_examples() {
        assert!(separates(&f("p"), &th(&["p"]), &th(&["~p"])).unwrap().is_some());
        assert!(separates(&f("p"), &th(&["p"]), &th(&["p"])).unwrap().is_none());
        assert!(separates(&f("p & p"), &th(&["p"]), &th(&["p"])).unwrap().is_none());
        assert!(separates(&f("p"), &th(&["p & q"]), &th(&["~(p | r)"]))
            .unwrap()
            .is_some());
        assert!(matches!(
            separates(&f("q"), &th(&["p & q"]), &th(&["~(p | r)"])),
            Err(InterpolationError::OutsideCommonLanguage(_))
        ));
    }

    #[test]
    fn find_separator_examples() {
        let c = find_separator(&th(&["p"]), &th(&["~p"]), true).unwrap().unwrap();
        assert_eq!(c.separator, f("p"));
        let c = find_separator(&th(&["p & q"]), &th(&["~p"]), true).unwrap().unwrap();
        assert_eq!(c.separator, f("p"));
        for g in [true, false] {
            assert!(find_separator(&th(&["p"]), &th(&["q"]), g).unwrap().is_none());
            assert!(find_separator(&th(&["p"]), &th(&["p"]), g).unwrap().is_none());
        }
        let c = find_separator(&th(&["bot"]), &th(&["q"]), true).unwrap().unwrap();
        assert_eq!(c.separator, Formula::Bottom);
    }

    /// `q ∈ (0,1)` against `q = 1` needs Δ: every G-formula that is 1 at a
    /// middle value of `q` is also 1 at `q = 1`.
    #[test]
    fn delta_separates_more() {
        let t = th(&["~q & !!q"]);
        let u = th(&["q"]);
        assert!(find_separator(&t, &u, true).unwrap().is_none());
        let c = find_separator(&t, &u, false).unwrap().unwrap();
        assert!(!c.separator.is_g_formula());
        // The reverse direction is separated by q itself.
        assert_eq!(find_separator(&u, &t, true).unwrap().unwrap().separator, f("q"));
    }

    #[test]
    fn interpolate_examples() {
        for g in [true, false] {
            let i = interpolate(&f("p & q"), &f("p | r"), g).unwrap().unwrap();
            assert_eq!(i.theta, f("p"));
            assert_eq!(interpolate(&f("p"), &f("p"), g).unwrap().unwrap().theta, f("p"));
            assert_eq!(
                interpolate(&f("bot"), &f("q"), g).unwrap().unwrap().theta,
                Formula::Bottom
            );
            assert!(matches!(
                interpolate(&f("p"), &f("q"), g),
                Err(InterpolationError::NotEntailed { witness: Some(_) })
            ));
        }
        let i = interpolate(&f("p & D q"), &f("D q | r"), true).unwrap().unwrap();
        assert!(i.theta.is_g_formula());
    }

    #[test]
    fn projections_normalize_order_types() {
        let common = vec!["q".to_string()];
        let p = Projection::new(vec!["p".into(), "q".into()], &common).unwrap();
        // Every value of q in the 4-chain maps into the 3-chain by type.
        let images: Vec<u32> = (0..p.space.len()).map(|i| p.to_common[i]).collect();
        let expect: Vec<u32> = (0..16)
            .map(|i| match i / 4 {
                0 => 0,
                3 => 2,
                _ => 1,
            })
            .collect();
        assert_eq!(images, expect);
    }

    #[test]
    fn constant_abstraction() {
        let (phi, _) = parse_formula_inferred("R(d, c)").unwrap();
        let (psi, _) = parse_formula_inferred("S(e, c)").unwrap();
        let (a, b) = abstract_constants(&phi, &psi);
        assert_eq!(a, Formula::exists("x", phi_like("R", "x", "c")));
        assert_eq!(b, Formula::forall("y", phi_like("S", "y", "c")));
        let (same, same2) = abstract_constants(&phi, &phi);
        assert_eq!((same, same2), (phi.clone(), phi.clone()));
        let (two, _) = parse_formula_inferred("R(d1, d2)").unwrap();
        let (a, _) = abstract_constants(&two, &Formula::Bottom);
        let expected = Formula::exists(
            "x1",
            Formula::exists(
                "x2",
                Formula::atom(
                    "R",
                    vec![
                        crate::syntax::Term::Var("x1".into()),
                        crate::syntax::Term::Var("x2".into()),
                    ],
                ),
            ),
        );
        assert_eq!(a, expected);
    }

    fn phi_like(rel: &str, var: &str, c: &str) -> Formula {
        use crate::syntax::Term;
        Formula::atom(rel, vec![Term::Var(var.into()), Term::Const(c.into())])
    }

    #[test]
    fn abstraction_avoids_used_variables() {
        let (phi, _) = parse_formula_inferred("forall x. R(x, d)").unwrap();
        let (a, _) = abstract_constants(&phi, &Formula::Bottom);
        assert!(a.is_closed());
        match &a {
            Formula::Exists(v, _) => assert_eq!(v, "x_1"),
            other => panic!("unexpected {other}"),
        }
    }
}
