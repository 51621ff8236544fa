//! Countermodels for `φ ⊮ ψ` built the way the interpolation proof builds
//! them: extend `({φ}, {∼ψ})` to complete theories, take their chains of
//! classes, amalgamate over the common chain, embed into `[0,1]` and read off
//! the atom values.
//!
//! The enumeration covers every formula of depth at most 1, which already
//! decides each atom against `⊥` and every other atom, so the extended
//! theories pin one order type per side. Each complete theory is then
//! presented by the canonical valuation of that type.

use std::collections::BTreeMap;

use serde_json::json;

use crate::decision::{atoms_of, model_mask, one_entails, PointSpace};
use crate::lindenbaum::{build_chain, CompleteTheoryOracle, LindChain};
use crate::linorder::{amalgamate, embed_into_unit, AmalgamResult, LinHom};
use crate::semantics::{evaluate_closed, TruthValue, Valuation};
use crate::syntax::{enumerate_closed_formulas, Formula, Signature, Theory};

use super::clone::order_type;
use super::{
    common_atoms, find_separator, henkin_extend, require_propositional, HenkinOptions, HenkinTrace, InterpolationError,
    Separators, Side,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Build the chains from Δ-free formulas only.
    pub g_only: bool,
    /// Depth of the enumerated formulas.
    pub stream_depth: usize,
    /// Separators used when choosing between `χ` and `∼χ`.
    pub choice: Separators,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            g_only: true,
            stream_depth: 1,
            choice: Separators::GDelta,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub henkin: HenkinTrace,
    pub b0: LindChain,
    pub b1: LindChain,
    pub b2: LindChain,
    pub f1: LinHom,
    pub f2: LinHom,
    pub amalgam: AmalgamResult,
    pub embedding: BTreeMap<String, TruthValue>,
}

impl PipelineTrace {
    /// Whether `g1∘f1 = g2∘f2` on every element of `B0`.
    pub fn square_commutes(&self) -> bool {
        self.f1.source.elements().iter().all(|a| {
            let left = self.f1.apply(a).and_then(|b| self.amalgam.g1.apply(b));
            let right = self.f2.apply(a).and_then(|b| self.amalgam.g2.apply(b));
            left.is_some() && left == right
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "henkin": self.henkin.to_json(),
            "b0": self.b0.to_json(),
            "b1": self.b1.to_json(),
            "b2": self.b2.to_json(),
            "f1": self.f1.map,
            "f2": self.f2.map,
            "amalgam": {
                "chain": self.amalgam.chain.elements(),
                "g1": self.amalgam.g1.map,
                "g2": self.amalgam.g2.map,
            },
            "embedding": self.amalgam.chain.elements().iter()
                .map(|e| json!({"element": e, "value": self.embedding[e].to_string()}))
                .collect::<Vec<_>>(),
            "square_commutes": self.square_commutes(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Countermodel {
    pub valuation: Valuation,
    pub trace: PipelineTrace,
}

impl Countermodel {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "valuation": self.valuation.to_json(),
            "trace": self.trace.to_json(),
        })
    }
}

/// The canonical valuation of the single order type realized by the models
/// of `theory` over `atoms`.
fn pinned_valuation(theory: &[Formula], atoms: Vec<String>, side: Side) -> Result<Valuation, InterpolationError> {
    let space = PointSpace::new(atoms)?;
    let mask = model_mask(theory, &space)?;
    let mut types = mask.ones().map(|i| order_type(&space.ranks(i), space.top()));
    let Some(ty) = types.next() else {
        return Err(InterpolationError::Internal(format!(
            "the {side} side became unsatisfiable"
        )));
    };
    if types.any(|other| other != ty) {
        return Err(InterpolationError::NotPinned(side));
    }
    let mids = ty
        .iter()
        .filter(|&&r| r != 0 && r != u8::MAX)
        .max()
        .copied()
        .unwrap_or(0) as usize;
    let value = |r: u8| match r {
        0 => TruthValue::ZERO,
        u8::MAX => TruthValue::ONE,
        r => TruthValue::fraction(r as usize, mids + 1),
    };
    Ok(Valuation::propositional(
        space.atoms().iter().cloned().zip(ty.iter().map(|&r| value(r))),
    ))
}

fn push_unique(list: &mut Vec<Formula>, f: &Formula) {
    if !list.contains(f) {
        list.push(f.clone());
    }
}

/// The map `[θ]_0 ↦ [θ]` from the common chain into a side chain.
fn class_map(b0: &LindChain, side: &LindChain) -> Result<LinHom, InterpolationError> {
    let mut map = BTreeMap::new();
    for i in 0..b0.len() {
        let rep = b0.classes[i].representative();
        let j = side
            .class_of(rep)?
            .ok_or_else(|| InterpolationError::Internal(format!("no class for `{rep}`")))?;
        map.insert(b0.class_name(i), side.class_name(j));
    }
    Ok(LinHom::new(b0.to_bounded_chain(), side.to_bounded_chain(), map))
}

/// Runs the interpolation proof on `φ ⊮ ψ` and returns the valuation it
/// constructs, which gives `φ` value 1 and `ψ` a value below 1.
pub fn countermodel_synthesize(
    phi: &Formula,
    psi: &Formula,
    opts: &PipelineOptions,
) -> Result<Countermodel, InterpolationError> {
    require_propositional([phi, psi])?;
    let t0 = Theory::new([phi.clone()]).expect("closed");
    let u0 = Theory::new([Formula::tilde(psi.clone())]).expect("closed");
    if one_entails(&t0, psi)?.holds {
        return match find_separator(&t0, &u0, opts.g_only)? {
            Some(cert) => Err(InterpolationError::Separable(cert.separator)),
            None => Err(InterpolationError::Internal(
                "entailment holds but no separator was found".into(),
            )),
        };
    }

    let t_atoms = atoms_of([phi]);
    let u_atoms = atoms_of([psi]);
    let common = common_atoms(&t_atoms, &u_atoms);
    let all = atoms_of([phi, psi]);
    let stream = enumerate_closed_formulas(&Signature::propositional(all), opts.stream_depth, true);
    let henkin = henkin_extend(
        &t0,
        &u0,
        &stream,
        &HenkinOptions {
            separators: opts.choice,
            ..HenkinOptions::default()
        },
    )?;

    let v1 = pinned_valuation(&henkin.t, t_atoms.clone(), Side::T)?;
    let v2 = pinned_valuation(&henkin.u, u_atoms.clone(), Side::U)?;

    let keep = |f: &Formula| !opts.g_only || f.is_g_formula();
    let side_list = |atoms: &[String], theory: &[Formula]| {
        let mut out = Vec::new();
        for a in atoms {
            push_unique(&mut out, &Formula::prop(a.clone()));
        }
        for f in theory.iter().filter(|f| keep(f)) {
            push_unique(&mut out, f);
        }
        out
    };
    let mut f_t = side_list(&t_atoms, &henkin.t);
    let mut f_u = side_list(&u_atoms, &henkin.u);
    let mut f_0 = Vec::new();
    for f in f_t.iter().chain(&f_u) {
        if f.prop_atoms().iter().all(|a| common.contains(a)) {
            push_unique(&mut f_0, f);
        }
    }
    for f in &f_0 {
        push_unique(&mut f_t, f);
        push_unique(&mut f_u, f);
    }

    let b0 = build_chain(CompleteTheoryOracle::new(v1.clone()), &f_0, opts.g_only)?;
    let b1 = build_chain(CompleteTheoryOracle::new(v1), &f_t, opts.g_only)?;
    let b2 = build_chain(CompleteTheoryOracle::new(v2), &f_u, opts.g_only)?;
    let f1 = class_map(&b0, &b1)?;
    let f2 = class_map(&b0, &b2)?;
    f1.check()
        .map_err(|e| InterpolationError::CommonTypeMismatch(format!("f1: {e}")))?;
    f2.check()
        .map_err(|e| InterpolationError::CommonTypeMismatch(format!("f2: {e}")))?;

    let amalgam = amalgamate(&f1.source, &f1.target, &f2.target, &f1, &f2)?;
    let embedding = embed_into_unit(&amalgam.chain);
    let trace = PipelineTrace {
        henkin,
        b0,
        b1,
        b2,
        f1,
        f2,
        amalgam,
        embedding,
    };
    if !trace.square_commutes() {
        return Err(InterpolationError::Internal("amalgam square does not commute".into()));
    }

    let mut values: BTreeMap<String, TruthValue> = BTreeMap::new();
    for (atoms, chain, g) in [
        (&t_atoms, &trace.b1, &trace.amalgam.g1),
        (&u_atoms, &trace.b2, &trace.amalgam.g2),
    ] {
        for a in atoms.iter() {
            let class = chain.class_of(&Formula::prop(a.clone()))?.expect("atoms are listed");
            let image = g.apply(&chain.class_name(class)).expect("g is total");
            let value = trace.embedding[image];
            if let Some(prev) = values.insert(a.clone(), value) {
                if prev != value {
                    return Err(InterpolationError::Internal(format!(
                        "shared atom `{a}` gets two values"
                    )));
                }
            }
        }
    }
    let valuation = Valuation::propositional(values);
    if !evaluate_closed(&valuation, phi)?.is_one() || evaluate_closed(&valuation, psi)?.is_one() {
        return Err(InterpolationError::Internal(
            "the constructed valuation is not a countermodel".into(),
        ));
    }
    Ok(Countermodel { valuation, trace })
}
