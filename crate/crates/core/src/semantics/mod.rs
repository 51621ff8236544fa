//! Exact evaluation of formulas in finite Gödel valuations.

mod valuation;
mod value;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{Formula, Term, Theory};

pub use valuation::Valuation;
pub use value::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("universe must be non-empty")]
    EmptyUniverse,
    #[error("element `{0}` listed twice")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("symbol `{0}` is not interpreted")]
    Uninterpreted(String),
    #[error("relation `{name}` has arity {expected}, applied to {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("free variable `{0}` is unbound")]
    UnboundVariable(String),
    #[error("`{0}` is not a rational in [0,1]")]
    BadValue(String),
    #[error("table for `{0}` is not total")]
    PartialTable(String),
    #[error("invalid valuation JSON: {0}")]
    Json(String),
}

/// Assignment of free variables to element indices.
pub type Env = BTreeMap<String, usize>;

/// `v(φ)` under `env`. Quantifiers range over the finite universe, so the
/// infimum and supremum are attained.
pub fn evaluate(v: &Valuation, formula: &Formula, env: &Env) -> Result<TruthValue, SemanticsError> {
    let mut stack: Vec<(&str, usize)> = env.iter().map(|(k, &e)| (k.as_str(), e)).collect();
    eval(v, formula, &mut stack)
}

pub fn evaluate_closed(v: &Valuation, formula: &Formula) -> Result<TruthValue, SemanticsError> {
    eval(v, formula, &mut Vec::new())
}

/// True iff every member of `theory` has value 1.
pub fn models(v: &Valuation, theory: &Theory) -> Result<bool, SemanticsError> {
    for f in theory {
        if !evaluate_closed(v, f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn lookup(stack: &[(&str, usize)], name: &str) -> Option<usize> {
    stack.iter().rev().find(|(n, _)| *n == name).map(|&(_, e)| e)
}

fn eval<'f>(v: &Valuation, f: &'f Formula, stack: &mut Vec<(&'f str, usize)>) -> Result<TruthValue, SemanticsError> {
    Ok(match f {
        Formula::Bottom => TruthValue::ZERO,
        Formula::Atom { rel, args } => {
            let mut idx = Vec::with_capacity(args.len());
            for t in args {
                idx.push(match t {
                    Term::Var(x) => lookup(stack, x).ok_or_else(|| SemanticsError::UnboundVariable(x.clone()))?,
                    Term::Const(c) => v.constant(c)?,
                });
            }
            v.get(rel, &idx)?
        }
        Formula::And(a, b) => eval(v, a, stack)?.min(eval(v, b, stack)?),
        Formula::Or(a, b) => eval(v, a, stack)?.max(eval(v, b, stack)?),
        Formula::Implies(a, b) => eval(v, a, stack)?.implies(eval(v, b, stack)?),
        Formula::Delta(a) => eval(v, a, stack)?.delta(),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut acc = if universal { TruthValue::ONE } else { TruthValue::ZERO };
            for e in 0..v.size() {
                stack.push((x, e));
                let val = eval(v, body, stack);
                stack.pop();
                let val = val?;
                acc = if universal { acc.min(val) } else { acc.max(val) };
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn half() -> TruthValue {
        TruthValue::new(1, 2).unwrap()
    }

    fn prop_val(p: TruthValue, q: TruthValue) -> (Valuation, Signature) {
        (
            Valuation::propositional([("p", p), ("q", q)]),
            Signature::propositional(["p", "q"]),
        )
    }

    fn ev(v: &Valuation, s: &Signature, text: &str) -> TruthValue {
        evaluate_closed(v, &parse_formula(text, s).unwrap()).unwrap()
    }

    #[test]
    fn bottom_is_zero() {
        let (v, s) = prop_val(TruthValue::ONE, half());
        assert_eq!(ev(&v, &s, "bot"), TruthValue::ZERO);
    }

    #[test]
    fn negations_at_one_half() {
        let (v, s) = prop_val(half(), TruthValue::ONE);
        assert_eq!(ev(&v, &s, "!p"), TruthValue::ZERO);
        assert_eq!(ev(&v, &s, "~p"), TruthValue::ONE);
    }

    #[test]
    fn implication_drops_to_consequent() {
        let (v, s) = prop_val(half(), TruthValue::new(1, 3).unwrap());
        assert_eq!(ev(&v, &s, "p -> q"), TruthValue::new(1, 3).unwrap());
        assert_eq!(ev(&v, &s, "q -> p"), TruthValue::ONE);
    }

    #[test]
    fn models_examples() {
        let (v, s) = prop_val(TruthValue::ONE, TruthValue::ZERO);
        let t = Theory::parse("p\np | q\n", &s).unwrap();
        assert!(models(&v, &t).unwrap());
        let (w, _) = prop_val(half(), TruthValue::ZERO);
        assert!(!models(&w, &Theory::parse("p", &s).unwrap()).unwrap());
        assert!(models(&w, &Theory::empty()).unwrap());
    }

    #[test]
    fn quantifiers_are_min_and_max() {
        let mut s = Signature::new();
        s.add_relation("R", 1).unwrap();
        s.add_constant("c").unwrap();
        let mut v = Valuation::new(["a", "b"]).unwrap();
        v.declare_relation("R", 1, TruthValue::ZERO);
        v.set("R", &[0], TruthValue::ONE).unwrap();
        v.set("R", &[1], half()).unwrap();
        v.set_constant("c", 1).unwrap();
        assert_eq!(ev(&v, &s, "forall x. R(x)"), half());
        assert_eq!(ev(&v, &s, "exists x. R(x)"), TruthValue::ONE);
        assert_eq!(ev(&v, &s, "R(c)"), half());
        assert_eq!(ev(&v, &s, "exists x. ~R(x)"), TruthValue::ONE);
        let open = parse_formula("R(x)", &s).unwrap();
        assert!(matches!(
            evaluate_closed(&v, &open),
            Err(SemanticsError::UnboundVariable(_))
        ));
        let env: Env = [("x".to_string(), 0)].into_iter().collect();
        assert_eq!(evaluate(&v, &open, &env).unwrap(), TruthValue::ONE);
    }

    #[test]
    fn uninterpreted_symbols_are_errors() {
        let v = Valuation::propositional([("p", half())]);
        let s = Signature::propositional(["p", "q"]);
        let f = parse_formula("p & q", &s).unwrap();
        assert_eq!(evaluate_closed(&v, &f), Err(SemanticsError::Uninterpreted("q".into())));
    }

    #[test]
    fn truth_values_validate_range() {
        assert!(TruthValue::new(3, 2).is_err());
        assert!(TruthValue::new(-1, 2).is_err());
        assert!(TruthValue::new(1, 0).is_err());
        assert_eq!("2/4".parse::<TruthValue>().unwrap(), half());
        assert_eq!(half().to_string(), "1/2");
        assert_eq!(TruthValue::ONE.to_string(), "1");
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"universe":["a","b"],"relations":{"R":{"(a,a)":"0","(a,b)":"1/2","(b,a)":"1","(b,b)":"1/3"},"p":{"()":"2/3"}},"constants":{"c":"a"}}"#;
        let v = Valuation::from_json_str(text).unwrap();
        assert_eq!(v.get("R", &[0, 1]).unwrap(), half());
        assert_eq!(v.prop("p").unwrap(), TruthValue::new(2, 3).unwrap());
        assert_eq!(v.constant("c").unwrap(), 0);
        assert_eq!(Valuation::from_json(&v.to_json()).unwrap(), v);
        let partial = r#"{"universe":["a","b"],"relations":{"R":{"(a)":"0"}}}"#;
        assert!(matches!(
            Valuation::from_json_str(partial),
            Err(SemanticsError::PartialTable(_))
        ));
        assert!(Valuation::from_json_str(r#"{"universe":[]}"#).is_err());
        assert!(Valuation::from_json_str(r#"{"universe":["a"],"relations":{"p":{"()":"3/2"}}}"#).is_err());
    }

    mod props {
        use super::super::*;
        use crate::syntax::Formula;
        use proptest::prelude::*;

        fn value() -> impl Strategy<Value = TruthValue> {
            (1i64..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| TruthValue::new(n, d).unwrap()))
        }

        fn formula() -> impl Strategy<Value = Formula> {
            let leaf = prop_oneof![
                prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::prop),
                Just(Formula::Bottom),
            ];
            leaf.prop_recursive(4, 24, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                    inner.prop_map(Formula::delta),
                ]
            })
        }

        fn valuation() -> impl Strategy<Value = Valuation> {
            (value(), value(), value()).prop_map(|(p, q, r)| Valuation::propositional([("p", p), ("q", q), ("r", r)]))
        }

        fn unary() -> impl Strategy<Value = Valuation> {
            prop::collection::vec(value(), 1..=3).prop_map(|vals| {
                let names: Vec<String> = (0..vals.len()).map(|i| format!("e{i}")).collect();
                let mut v = Valuation::new(names).unwrap();
                v.declare_relation("R", 1, TruthValue::ZERO);
                for (i, x) in vals.into_iter().enumerate() {
                    v.set("R", &[i], x).unwrap();
                }
                v
            })
        }

        fn atom_values(v: &Valuation, f: &Formula) -> Vec<TruthValue> {
            f.prop_atoms().iter().map(|a| v.prop(a).unwrap()).collect()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn negation_tables(v in valuation(), f in formula()) {
                let x = evaluate_closed(&v, &f).unwrap();
                let neg = evaluate_closed(&v, &Formula::not(f.clone())).unwrap();
                let til = evaluate_closed(&v, &Formula::tilde(f.clone())).unwrap();
                prop_assert_eq!(neg, if x.is_zero() { TruthValue::ONE } else { TruthValue::ZERO });
                prop_assert_eq!(til, if x.is_one() { TruthValue::ZERO } else { TruthValue::ONE });
                let d = evaluate_closed(&v, &Formula::delta(f)).unwrap();
                prop_assert!(d.is_zero() || d.is_one());
            }

            #[test]
            fn biconditional_is_equality(v in valuation(), a in formula(), b in formula()) {
                let x = evaluate_closed(&v, &a).unwrap();
                let y = evaluate_closed(&v, &b).unwrap();
                let iff = evaluate_closed(&v, &Formula::iff(a, b)).unwrap();
                prop_assert_eq!(iff.is_one(), x == y);
            }

            #[test]
            fn values_stay_among_atoms_and_endpoints(v in valuation(), f in formula()) {
                let x = evaluate_closed(&v, &f).unwrap();
                prop_assert!(x.is_zero() || x.is_one() || atom_values(&v, &f).contains(&x));
            }

            #[test]
            fn universal_is_min_over_instances(v in unary()) {
                let all = Formula::forall("x", Formula::atom("R", vec![Term::Var("x".into())]));
                let val = evaluate_closed(&v, &all).unwrap();
                let min = (0..v.size()).map(|e| v.get("R", &[e]).unwrap()).min().unwrap();
                prop_assert_eq!(val, min);
                let every_one = (0..v.size()).all(|e| v.get("R", &[e]).unwrap().is_one());
                prop_assert_eq!(val.is_one(), every_one);
            }
        }
    }
}
