use std::collections::BTreeMap;

use proptest::prelude::*;

use goedel::decision::{is_satisfiable, one_entails, one_entails_with};
use goedel::exec::Exec;
use goedel::interpolation::{
    countermodel_synthesize, henkin_extend, interpolate, separates, HenkinOptions, InterpolationError, PipelineOptions,
};
use goedel::lindenbaum::{build_chain, ClassOp, CompleteTheoryOracle};
use goedel::linorder::{amalgamate, embed_into_unit, validate_lin_hom, BoundedChain, LinHom};
use goedel::semantics::{evaluate_closed, TruthValue, Valuation};
use goedel::syntax::{enumerate_closed_formulas, Formula, Signature, Theory};

fn formula(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bottom),
        6 => prop::sample::select(atoms).prop_map(Formula::prop),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.prop_map(Formula::delta),
        ]
    })
}

fn value() -> impl Strategy<Value = TruthValue> {
    (1usize..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| TruthValue::fraction(n, d)))
}

fn theory(fs: &[Formula]) -> Theory {
    Theory::new(fs.iter().cloned()).unwrap()
}

/// A chain of `n` elements named `{prefix}{i}`.
fn chain(prefix: &str, n: usize) -> BoundedChain {
    BoundedChain::new((0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

/// A strictly monotone map from a chain of `m` elements into one of `n`,
/// fixing the endpoints, chosen by a bit pattern over the interior.
fn hom(source: &BoundedChain, target: &BoundedChain, bits: u64) -> Option<LinHom> {
    let (m, n) = (source.len(), target.len());
    let interior: Vec<usize> = (1..n - 1).filter(|i| bits & (1 << i) != 0).take(m - 2).collect();
    if interior.len() != m - 2 {
        return None;
    }
    let images = std::iter::once(0)
        .chain(interior)
        .chain(std::iter::once(n - 1))
        .map(|p| target.elements()[p].clone());
    Some(LinHom::from_images(source.clone(), target.clone(), images))
}

const PQ: &[&str] = &["p", "q"];
const QR: &[&str] = &["q", "r"];
const PQR: &[&str] = &["p", "q", "r"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn refutations_carry_exact_witnesses(t in prop::collection::vec(formula(PQR, 3), 0..3), f in formula(PQR, 4)) {
        let v = one_entails(&theory(&t), &f).unwrap();
        if let Some(w) = &v.witness {
            prop_assert!(!v.holds);
            for p in &t {
                prop_assert!(evaluate_closed(w, p).unwrap().is_one());
            }
            prop_assert!(!evaluate_closed(w, &f).unwrap().is_one());
        } else {
            prop_assert!(v.holds);
        }
    }

    #[test]
    fn executors_agree(t in prop::collection::vec(formula(PQR, 3), 0..3), f in formula(PQR, 4)) {
        let t = theory(&t);
        prop_assert_eq!(
            one_entails_with(&t, &f, Exec::Sequential).unwrap(),
            one_entails_with(&t, &f, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn class_operations_are_monotone(p in value(), q in value(), fs in prop::collection::vec(formula(PQ, 2), 1..8)) {
        let v = Valuation::propositional([("p", p), ("q", q)]);
        let chain = build_chain(CompleteTheoryOracle::new(v), &fs, false).unwrap();
        let n = chain.len();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    for op in [ClassOp::And, ClassOp::Or] {
                        let (a, b) = (chain.class_op(op, &[i, k]), chain.class_op(op, &[j, k]));
                        if let (Ok(a), Ok(b)) = (a, b) {
                            prop_assert!(a <= b);
                        }
                    }
                }
            }
            let d = chain.class_op(ClassOp::Delta, &[i]).unwrap();
            prop_assert_eq!(d, if i == chain.top() { chain.top() } else { chain.bottom() });
        }
    }

    #[test]
    fn amalgams_of_random_triples(n0 in 2usize..=8, n1 in 2usize..=8, n2 in 2usize..=8, b1 in any::<u64>(), b2 in any::<u64>()) {
        let n0 = n0.min(n1).min(n2);
        let (c0, c1, c2) = (chain("a", n0), chain("b", n1), chain("c", n2));
        let (Some(f1), Some(f2)) = (hom(&c0, &c1, b1), hom(&c0, &c2, b2)) else {
            return Ok(());
        };
        let r = amalgamate(&c0, &c1, &c2, &f1, &f2).unwrap();
        prop_assert!(validate_lin_hom(&r.g1) && validate_lin_hom(&r.g2));
        for a in c0.elements() {
            prop_assert_eq!(r.g1.apply(f1.apply(a).unwrap()), r.g2.apply(f2.apply(a).unwrap()));
        }
        prop_assert_eq!(r.chain.len(), n1 + n2 - n0);
        // The embedding after g1 still separates the elements of B1.
        let h = embed_into_unit(&r.chain);
        for w in c1.elements().windows(2) {
            prop_assert!(h[r.g1.apply(&w[0]).unwrap()] < h[r.g1.apply(&w[1]).unwrap()]);
        }
    }

    #[test]
    fn interpolants_are_sound(phi in formula(PQ, 3), psi in formula(QR, 3), g_only in any::<bool>()) {
        let (phi, psi) = if g_only { (strip(&phi), strip(&psi)) } else { (phi, psi) };
        match interpolate(&phi, &psi, g_only) {
            Ok(Some(it)) => {
                let theta = &it.theta;
                prop_assert!(one_entails(&theory(std::slice::from_ref(&phi)), theta).unwrap().holds);
                prop_assert!(one_entails(&theory(std::slice::from_ref(theta)), &psi).unwrap().holds);
                prop_assert!(theta.prop_atoms().iter().all(|a| a == "q"));
                prop_assert!(!g_only || theta.is_g_formula());
                // The interpolant separates ({φ}, {∼ψ}).
                let t = theory(std::slice::from_ref(&phi));
                let u = theory(&[Formula::tilde(psi.clone())]);
                prop_assert!(separates(theta, &t, &u).unwrap().is_some());
            }
            Ok(None) => prop_assert!(false, "no interpolant for {} / {}", phi, psi),
            Err(InterpolationError::NotEntailed { witness }) => prop_assert!(witness.is_some()),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn extension_steps_keep_inseparability(phi in formula(PQ, 2), psi in formula(QR, 2)) {
        let t = theory(std::slice::from_ref(&phi));
        let u = theory(&[Formula::tilde(psi.clone())]);
        if one_entails(&t, &psi).unwrap().holds {
            return Ok(());
        }
        let stream = enumerate_closed_formulas(&Signature::propositional(PQR.iter().copied()), 1, true);
        let trace = henkin_extend(&t, &u, &stream, &HenkinOptions::default()).unwrap();
        for step in &trace.steps {
            prop_assert!(step.inseparable);
            let chi = &step.formula;
            let expected = if step.accepted { chi.clone() } else { Formula::tilde(chi.clone()) };
            prop_assert_eq!(&step.added[0], &expected);
        }
        prop_assert!(is_satisfiable(&theory(&trace.t)).unwrap());
        prop_assert!(is_satisfiable(&theory(&trace.u)).unwrap());
    }

    #[test]
    fn countermodels_refute(phi in formula(PQ, 2), psi in formula(QR, 2)) {
        if one_entails(&theory(std::slice::from_ref(&phi)), &psi).unwrap().holds {
            return Ok(());
        }
        let cm = countermodel_synthesize(&phi, &psi, &PipelineOptions { g_only: false, ..PipelineOptions::default() }).unwrap();
        prop_assert!(evaluate_closed(&cm.valuation, &phi).unwrap().is_one());
        prop_assert!(!evaluate_closed(&cm.valuation, &psi).unwrap().is_one());
        prop_assert!(cm.trace.square_commutes());
        let j = cm.to_json();
        prop_assert!(Valuation::from_json(&j["valuation"]).unwrap() == cm.valuation);
    }
}

/// Drops every Δ, keeping a G-formula.
fn strip(f: &Formula) -> Formula {
    match f {
        Formula::And(a, b) => Formula::and(strip(a), strip(b)),
        Formula::Or(a, b) => Formula::or(strip(a), strip(b)),
        Formula::Implies(a, b) => Formula::implies(strip(a), strip(b)),
        Formula::Delta(a) => strip(a),
        other => other.clone(),
    }
}

#[test]
fn chains_round_trip_through_json() {
    let c = chain("x", 4);
    let back: BoundedChain = serde_json::from_value(serde_json::to_value(&c).unwrap()).unwrap();
    assert_eq!(back, c);
    let map: BTreeMap<String, String> = [("x0", "x0"), ("x3", "x3")]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let f = LinHom::new(chain("x", 2), c.clone(), map);
    assert!(!validate_lin_hom(&f));
}
