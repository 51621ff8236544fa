//! Extending an inseparable pair `(T, U)` one formula at a time.
//!
//! For every enumerated `χ_m` the `T` side takes `χ_m` if `T ∪ {χ_m}` stays
//! inseparable from `U`, and `∼χ_m` otherwise; then the `U` side does the
//! same against the already extended `T`. A rejected `∀x σ` also brings
//! `∼σ(k)` for a fresh constant `k`.
//!
//! Propositional input is handled exactly on canonical points. First-order
//! input is best effort: separators are only sought among `⊥` and the
//! enumerated common-language formulas, with bounded entailment checks.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde_json::json;

use crate::decision::{atoms_of, fo_check_bounded, model_mask, BoundedOptions};
use crate::syntax::{language_of_all, Formula, Theory};

use super::{
    clone_closure, common_atoms, separating_vector, CloneTable, InterpolationError, Projection, DEFAULT_CLONE_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    T,
    U,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::T => "T",
            Side::U => "U",
        })
    }
}

/// Which common-language formulas count as separators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separators {
    /// Δ-free formulas only.
    G,
    /// All formulas.
    GDelta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenkinOptions {
    pub separators: Separators,
    /// Largest number of enumerated formulas to process.
    pub budget: usize,
    /// Universe bound for first-order entailment checks.
    pub max_universe: usize,
}

impl Default for HenkinOptions {
    fn default() -> Self {
        HenkinOptions {
            separators: Separators::GDelta,
            budget: usize::MAX,
            max_universe: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenkinStep {
    pub m: usize,
    pub side: Side,
    pub formula: Formula,
    /// Whether `χ_m` itself was taken rather than `∼χ_m`.
    pub accepted: bool,
    pub added: Vec<Formula>,
    /// Re-check of inseparability after the step.
    pub inseparable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenkinTrace {
    pub steps: Vec<HenkinStep>,
    pub t: Vec<Formula>,
    pub u: Vec<Formula>,
    /// False when first-order checks were bounded.
    pub exact: bool,
    pub separators: Separators,
}

impl HenkinTrace {
    pub fn to_json(&self) -> serde_json::Value {
        let list = |fs: &[Formula]| fs.iter().map(ToString::to_string).collect::<Vec<_>>();
        json!({
            "exact": self.exact,
            "separators": match self.separators {
                Separators::G => "G",
                Separators::GDelta => "G-Delta",
            },
            "steps": self.steps.iter().map(|s| json!({
                "m": s.m,
                "side": s.side.to_string(),
                "formula": s.formula.to_string(),
                "accepted": s.accepted,
                "added": list(&s.added),
                "inseparable": s.inseparable,
            })).collect::<Vec<_>>(),
            "t": list(&self.t),
            "u": list(&self.u),
        })
    }
}

/// Runs the extension over `stream`. Each side only considers formulas in
/// its own language.
pub fn henkin_extend(
    t: &Theory,
    u: &Theory,
    stream: &[Formula],
    opts: &HenkinOptions,
) -> Result<HenkinTrace, InterpolationError> {
    let propositional = t.is_propositional() && u.is_propositional() && stream.iter().all(Formula::is_propositional);
    let mut engine: Box<dyn Engine> = if propositional {
        Box::new(Exact::new(t, u, opts.separators)?)
    } else {
        Box::new(Bounded::new(t, u, stream, opts))
    };
    if let Some(sep) = engine.separator()? {
        return Err(InterpolationError::Separable(sep));
    }
    let mut theories = [t.formulas().to_vec(), u.formulas().to_vec()];
    let mut steps = Vec::new();
    let mut fresh = 0usize;
    for (m, chi) in stream.iter().take(opts.budget).enumerate() {
        for side in [Side::T, Side::U] {
            let idx = side as usize;
            if !engine.in_language(side, chi) {
                continue;
            }
            let (accepted, added) = if engine.try_add(side, std::slice::from_ref(chi))? {
                (true, vec![chi.clone()])
            } else {
                let mut added = vec![Formula::tilde(chi.clone())];
                if let Formula::Forall(x, sigma) = chi {
                    let used: BTreeSet<String> = theories
                        .iter()
                        .flatten()
                        .chain([chi])
                        .flat_map(|f| f.constants())
                        .collect();
                    let k = loop {
                        let k = format!("k{fresh}");
                        fresh += 1;
                        if !used.contains(&k) {
                            break k;
                        }
                    };
                    added.push(Formula::tilde(sigma.substitute(x, &k)));
                }
                if !engine.try_add(side, &added)? {
                    return Err(InterpolationError::SeparatedMidStream { m });
                }
                (false, added)
            };
            theories[idx].extend(added.iter().cloned());
            steps.push(HenkinStep {
                m,
                side,
                formula: chi.clone(),
                accepted,
                added,
                inseparable: engine.separator()?.is_none(),
            });
        }
    }
    let [t_final, u_final] = theories;
    Ok(HenkinTrace {
        steps,
        t: t_final,
        u: u_final,
        exact: propositional,
        separators: opts.separators,
    })
}

trait Engine {
    fn in_language(&self, side: Side, f: &Formula) -> bool;
    /// Adds `fs` to `side` if the pair stays inseparable.
    fn try_add(&mut self, side: Side, fs: &[Formula]) -> Result<bool, InterpolationError>;
    fn separator(&self) -> Result<Option<Formula>, InterpolationError>;
}

/// Model sets on canonical points, projected onto common order types.
struct Exact {
    sides: [(Projection, FixedBitSet); 2],
    clone: Option<std::sync::Arc<CloneTable>>,
}

impl Exact {
    fn new(t: &Theory, u: &Theory, separators: Separators) -> Result<Exact, InterpolationError> {
        let (ta, ua) = (atoms_of(t.iter()), atoms_of(u.iter()));
        let common = common_atoms(&ta, &ua);
        let pt = Projection::new(ta, &common)?;
        let pu = Projection::new(ua, &common)?;
        let mt = pt.models(t.formulas())?;
        let mu = pu.models(u.formulas())?;
        let clone = match separators {
            Separators::G => Some(clone_closure(&common, false, DEFAULT_CLONE_BUDGET)?),
            Separators::GDelta => None,
        };
        Ok(Exact {
            sides: [(pt, mt), (pu, mu)],
            clone,
        })
    }

    fn projection(&self, side: Side) -> &Projection {
        &self.sides[side as usize].0
    }

    fn separating(&self, a: &FixedBitSet, b: &FixedBitSet) -> Option<Formula> {
        match &self.clone {
            Some(clone) => separating_vector(clone, a, b).map(|i| clone.witness(i)),
            // With Δ every set of common types is a 1-set.
            None => a.is_disjoint(b).then(|| {
                if a.is_clear() {
                    Formula::Bottom
                } else {
                    let clone = clone_closure(self.projection(Side::T).common.atoms(), true, DEFAULT_CLONE_BUDGET)
                        .expect("Δ clone over the common atoms");
                    clone.witness(separating_vector(&clone, a, b).expect("disjoint type sets are separable"))
                }
            }),
        }
    }

    fn images(&self) -> [FixedBitSet; 2] {
        [0, 1].map(|i| self.sides[i].0.image(&self.sides[i].1))
    }
}

impl Engine for Exact {
    fn in_language(&self, side: Side, f: &Formula) -> bool {
        let atoms = self.projection(side).space.atoms();
        f.prop_atoms().iter().all(|a| atoms.contains(a))
    }

    fn try_add(&mut self, side: Side, fs: &[Formula]) -> Result<bool, InterpolationError> {
        let i = side as usize;
        let mut mask = self.sides[i].1.clone();
        mask.intersect_with(&model_mask(fs, &self.sides[i].0.space)?);
        let image = self.sides[i].0.image(&mask);
        let [a, b] = self.images();
        let ok = match side {
            Side::T => self.separating(&image, &b).is_none(),
            Side::U => self.separating(&a, &image).is_none(),
        };
        if ok {
            self.sides[i].1 = mask;
        }
        Ok(ok)
    }

    fn separator(&self) -> Result<Option<Formula>, InterpolationError> {
        let [a, b] = self.images();
        Ok(self.separating(&a, &b))
    }
}

/// Best-effort first-order engine.
struct Bounded {
    theories: [Vec<Formula>; 2],
    languages: [crate::syntax::Signature; 2],
    candidates: Vec<Formula>,
    opts: BoundedOptions,
    g_only: bool,
}

impl Bounded {
    fn new(t: &Theory, u: &Theory, stream: &[Formula], opts: &HenkinOptions) -> Bounded {
        let lt = t.language();
        let lu = u.language();
        let common = lt.intersection(&lu);
        let g_only = opts.separators == Separators::G;
        let mut candidates = vec![Formula::Bottom];
        candidates.extend(
            stream
                .iter()
                .filter(|f| language_of_all([*f]).is_subset(&common) && (!g_only || f.is_g_formula()))
                .cloned(),
        );
        Bounded {
            theories: [t.formulas().to_vec(), u.formulas().to_vec()],
            languages: [lt, lu],
            candidates,
            opts: BoundedOptions {
                max_universe: opts.max_universe,
                ..BoundedOptions::default()
            },
            g_only,
        }
    }

    fn entails(&self, premises: &[Formula], goal: &Formula) -> Result<bool, InterpolationError> {
        let th = Theory::new(premises.iter().cloned()).expect("closed formulas");
        Ok(fo_check_bounded(&th, goal, self.opts.max_universe, None)?.holds)
    }

    fn separating(&self, t: &[Formula], u: &[Formula]) -> Result<Option<Formula>, InterpolationError> {
        for theta in &self.candidates {
            if self.g_only && !theta.is_g_formula() {
                continue;
            }
            if self.entails(t, theta)? && self.entails(u, &Formula::tilde(theta.clone()))? {
                return Ok(Some(theta.clone()));
            }
        }
        Ok(None)
    }
}

impl Engine for Bounded {
    fn in_language(&self, side: Side, f: &Formula) -> bool {
        language_of_all([f]).is_subset(&self.languages[side as usize])
    }

    fn try_add(&mut self, side: Side, fs: &[Formula]) -> Result<bool, InterpolationError> {
        let i = side as usize;
        let mut extended = self.theories[i].clone();
        extended.extend(fs.iter().cloned());
        let sep = match side {
            Side::T => self.separating(&extended, &self.theories[1])?,
            Side::U => self.separating(&self.theories[0], &extended)?,
        };
        if sep.is_none() {
            self.theories[i] = extended;
        }
        Ok(sep.is_none())
    }

    fn separator(&self) -> Result<Option<Formula>, InterpolationError> {
        self.separating(&self.theories[0], &self.theories[1])
    }
}
