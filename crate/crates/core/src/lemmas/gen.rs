//! Seeded random formulas for the lemma suites and benches.

use rand::Rng;

use crate::semantics::TruthValue;
use crate::syntax::{Formula, Term};

/// A propositional formula of depth at most `depth` over `atoms`.
pub fn prop_formula<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.1) {
            Formula::Bottom
        } else {
            Formula::prop(atoms[rng.gen_range(0..atoms.len())])
        };
    }
    let sub = |rng: &mut R| prop_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..10) {
        0..=2 => Formula::and(sub(rng), sub(rng)),
        3..=5 => Formula::or(sub(rng), sub(rng)),
        6..=8 => Formula::implies(sub(rng), sub(rng)),
        _ => Formula::delta(sub(rng)),
    }
}

/// Between one and three of `p, q, r`.
pub fn prop_atoms<R: Rng>(rng: &mut R) -> &'static [&'static str] {
    const ATOMS: [&str; 3] = ["p", "q", "r"];
    &ATOMS[..rng.gen_range(1..=3)]
}

/// Up to `max_len` formulas, each of depth at most `depth`.
pub fn prop_theory<R: Rng>(rng: &mut R, atoms: &[&str], max_len: usize, depth: usize) -> Vec<Formula> {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| prop_formula(rng, atoms, depth)).collect()
}

/// One of `0, 1/4, 1/3, 1/2, 2/3, 3/4, 1`.
pub fn small_value<R: Rng>(rng: &mut R) -> TruthValue {
    const GRID: [(usize, usize); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];
    let (n, d) = GRID[rng.gen_range(0..GRID.len())];
    TruthValue::fraction(n, d)
}

/// A first-order formula over `P/1` and `R/2` whose terms are the variables
/// in `scope` and the constants in `constants`. Inner quantifiers bind `y`.
pub fn fo_formula<R: Rng>(rng: &mut R, scope: &[&str], constants: &[&str], depth: usize) -> Formula {
    let term = |rng: &mut R| {
        let k = rng.gen_range(0..scope.len() + constants.len());
        if k < scope.len() {
            Term::Var(scope[k].to_string())
        } else {
            Term::Const(constants[k - scope.len()].to_string())
        }
    };
    if depth == 0 || rng.gen_bool(0.25) {
        if scope.is_empty() && constants.is_empty() || rng.gen_bool(0.05) {
            return Formula::Bottom;
        }
        return if rng.gen_bool(0.5) {
            Formula::atom("P", vec![term(rng)])
        } else {
            Formula::atom("R", vec![term(rng), term(rng)])
        };
    }
    let sub = |rng: &mut R| fo_formula(rng, scope, constants, depth - 1);
    match rng.gen_range(0..12) {
        0..=2 => Formula::and(sub(rng), sub(rng)),
        3..=5 => Formula::or(sub(rng), sub(rng)),
        6..=8 => Formula::implies(sub(rng), sub(rng)),
        9 => Formula::delta(sub(rng)),
        _ if scope.contains(&"y") => Formula::tilde(sub(rng)),
        k => {
            let mut inner = scope.to_vec();
            inner.push("y");
            let body = fo_formula(rng, &inner, constants, depth - 1);
            if k == 10 {
                Formula::forall("y", body)
            } else {
                Formula::exists("y", body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bounds_are_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let atoms = prop_atoms(&mut rng);
            let f = prop_formula(&mut rng, atoms, 4);
            assert!(f.depth() <= 4);
            assert!(f.prop_atoms().iter().all(|a| atoms.contains(&a.as_str())));
            let g = fo_formula(&mut rng, &["x"], &["d"], 3);
            assert!(g.free_variables().iter().all(|v| v == "x"));
            assert!(g.constants().iter().all(|c| c == "d"));
        }
    }

    #[test]
    fn same_seed_same_formulas() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20)
                .map(|_| prop_formula(&mut rng, &["p", "q"], 3))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }
}
