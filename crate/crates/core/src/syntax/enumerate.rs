//! Deterministic enumeration of formulas by constructor depth.
//!
//! Order: depth, then constructor rank (Atom < ⊥ < ∧ < ∨ < → < Δ < ∀ < ∃),
//! then children in enumeration order (first child major). Atoms are ordered
//! by relation name, then argument list, with constants before variables.
//! Quantifiers bind variables from the pool `v0, v1, …` by nesting level, so
//! alpha-variants are never produced twice.

use super::formula::{cmp_names, Formula, Term};
use super::signature::Signature;

/// Formulas with free variables drawn from `v0 .. v{scope-1}`, by exact depth.
struct ScopeLevels {
    by_depth: Vec<Vec<Formula>>,
}

struct Enumerator<'s> {
    sig: &'s Signature,
    delta: bool,
    quantifiers: bool,
    // scopes[k] holds the levels for scope size k.
    scopes: Vec<ScopeLevels>,
}

pub fn variable_name(level: usize) -> String {
    format!("v{level}")
}

impl<'s> Enumerator<'s> {
    fn new(sig: &'s Signature, delta: bool) -> Self {
        Enumerator {
            sig,
            delta,
            // Quantifiers over a purely 0-ary signature are all vacuous.
            quantifiers: sig.relations().values().any(|&a| a > 0),
            scopes: Vec::new(),
        }
    }

    fn atoms(&self, scope: usize) -> Vec<Formula> {
        let mut terms: Vec<Term> = self.sig.constants().iter().cloned().map(Term::Const).collect();
        terms.sort();
        terms.extend((0..scope).map(|i| Term::Var(variable_name(i))));
        let mut rels: Vec<(&String, &usize)> = self.sig.relations().iter().collect();
        rels.sort_by(|a, b| cmp_names(a.0, b.0));
        let mut out = Vec::new();
        for (rel, &arity) in rels {
            let total = terms.len().pow(arity as u32);
            for n in 0..total {
                // First argument most significant: lexicographic order.
                let mut rest = n;
                let mut args = vec![Term::Var(String::new()); arity];
                for slot in (0..arity).rev() {
                    args[slot] = terms[rest % terms.len()].clone();
                    rest /= terms.len();
                }
                out.push(Formula::atom(rel.clone(), args));
            }
        }
        out
    }

    fn ensure_scope(&mut self, scope: usize) {
        while self.scopes.len() <= scope {
            self.scopes.push(ScopeLevels { by_depth: Vec::new() });
        }
    }

    /// Fills levels for `scope` up to and including `depth`.
    fn fill(&mut self, scope: usize, depth: usize) {
        self.ensure_scope(scope);
        while self.scopes[scope].by_depth.len() <= depth {
            let d = self.scopes[scope].by_depth.len();
            let level = if d == 0 {
                let mut l = self.atoms(scope);
                l.push(Formula::Bottom);
                l
            } else {
                if self.quantifiers {
                    self.fill(scope + 1, d - 1);
                }
                self.next_level(scope, d)
            };
            self.scopes[scope].by_depth.push(level);
        }
    }

    fn next_level(&self, scope: usize, d: usize) -> Vec<Formula> {
        let levels = &self.scopes[scope].by_depth;
        let below: Vec<&Formula> = levels.iter().flatten().collect();
        let top_start = below.len() - levels[d - 1].len();
        let mut out = Vec::new();
        type Ctor = fn(Formula, Formula) -> Formula;
        let binaries: [Ctor; 3] = [Formula::and, Formula::or, Formula::implies];
        for make in binaries {
            for (i, a) in below.iter().enumerate() {
                let start = if i < top_start { top_start } else { 0 };
                for b in &below[start..] {
                    out.push(make((*a).clone(), (*b).clone()));
                }
            }
        }
        if self.delta {
            for a in &levels[d - 1] {
                out.push(Formula::delta(a.clone()));
            }
        }
        if self.quantifiers {
            let var = variable_name(scope);
            let inner = &self.scopes[scope + 1].by_depth[d - 1];
            for body in inner {
                out.push(Formula::forall(var.clone(), body.clone()));
            }
            for body in inner {
                out.push(Formula::exists(var.clone(), body.clone()));
            }
        }
        out
    }
}

/// All closed formulas over `sig` of constructor depth at most `depth`, in
/// the fixed enumeration order, without syntactic duplicates.
///
/// Quantifiers are produced only when `sig` has a relation of positive arity.
pub fn enumerate_closed_formulas(sig: &Signature, depth: usize, delta_allowed: bool) -> Vec<Formula> {
    let mut e = Enumerator::new(sig, delta_allowed);
    e.fill(0, depth);
    e.scopes.swap_remove(0).by_depth.into_iter().flatten().collect()
}

/// Number of closed formulas `enumerate_closed_formulas` would return, without
/// materializing the deepest level.
pub fn count_closed_formulas(sig: &Signature, depth: usize, delta_allowed: bool) -> u128 {
    // counts[scope][d] for exact depth d.
    let quantifiers = sig.relations().values().any(|&a| a > 0);
    let max_scope = if quantifiers { depth } else { 0 };
    let consts = sig.constants().len() as u128;
    let mut counts = vec![vec![0u128; depth + 1]; max_scope + 1];
    for (scope, row) in counts.iter_mut().enumerate() {
        let terms = consts + scope as u128;
        row[0] = sig
            .relations()
            .values()
            .map(|&a| if a == 0 { 1 } else { terms.pow(a as u32) })
            .sum::<u128>()
            + 1;
    }
    for d in 1..=depth {
        for scope in 0..=max_scope {
            let below: u128 = counts[scope][..d].iter().sum();
            let older: u128 = counts[scope][..d - 1].iter().sum();
            let mut n = 3 * (below * below - older * older);
            if delta_allowed {
                n += counts[scope][d - 1];
            }
            if quantifiers && scope < max_scope {
                n += 2 * counts[scope + 1][d - 1];
            }
            counts[scope][d] = n;
        }
    }
    counts[0].iter().sum()
}
