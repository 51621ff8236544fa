use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A term of a relational language: a variable or a constant symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Const(_) => 0,
            Term::Var(_) => 1,
        }
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| cmp_names(self.name(), other.name()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Formulas of first-order Gödel logic with Δ over a relational signature.
///
/// Only the primitive connectives are constructors. `¬φ`, `⊤`, `∼φ` and
/// `φ↔ψ` are built by [`Formula::not`], [`Formula::top`], [`Formula::tilde`]
/// and [`Formula::iff`] as their expansions and are re-sugared by the printer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { rel: String, args: Vec<Term> },
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Delta(Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom { rel: rel.into(), args }
    }

    /// A 0-ary atom.
    pub fn prop(rel: impl Into<String>) -> Formula {
        Formula::atom(rel, Vec::new())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn delta(a: Formula) -> Formula {
        Formula::Delta(Box::new(a))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// `¬φ := φ → ⊥`
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bottom)
    }

    /// `⊤ := ¬⊥`
    pub fn top() -> Formula {
        Formula::not(Formula::Bottom)
    }

    /// `∼φ := ¬Δφ`
    pub fn tilde(a: Formula) -> Formula {
        Formula::not(Formula::delta(a))
    }

    /// `φ ↔ ψ := (φ → ψ) ∧ (ψ → φ)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// Conjunction of a list, `⊤` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::top(),
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// Constructor depth: atoms and `⊥` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Delta(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.depth(),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Bottom => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Delta(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
        }
    }

    pub(crate) fn rank(&self) -> u8 {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Bottom => 1,
            Formula::And(..) => 2,
            Formula::Or(..) => 3,
            Formula::Implies(..) => 4,
            Formula::Delta(_) => 5,
            Formula::Forall(..) => 6,
            Formula::Exists(..) => 7,
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => {
                for t in args {
                    if let Term::Var(v) = t {
                        if !bound.contains(&v.as_str()) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Delta(a) => a.collect_free(bound, out),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(v);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// True iff no `Δ` occurs (hence no `∼`).
    pub fn is_g_formula(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::Bottom => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.is_g_formula() && b.is_g_formula(),
            Formula::Delta(_) => false,
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.is_g_formula(),
        }
    }

    /// Quantifier-free with only 0-ary atoms.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom { args, .. } => args.is_empty(),
            Formula::Bottom => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Delta(a) => a.is_propositional(),
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Relation symbols with their arities.
    pub fn relations(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit_atoms(&mut |rel, args| {
            out.entry(rel.to_string()).or_insert(args.len());
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |_, args| {
            for t in args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        });
        out
    }

    /// Names of the 0-ary atoms, sorted.
    pub fn prop_atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |rel, args| {
            if args.is_empty() {
                out.insert(rel.to_string());
            }
        });
        out
    }

    pub(crate) fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a [Term])) {
        match self {
            Formula::Atom { rel, args } => f(rel, args),
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::Delta(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit_atoms(f),
        }
    }

    /// Replaces free occurrences of variable `var` by the constant `constant`.
    ///
    /// Substituting a constant can never be captured, so no renaming happens.
    pub fn substitute(&self, var: &str, constant: &str) -> Formula {
        match self {
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) if v == var => Term::Const(constant.to_string()),
                        other => other.clone(),
                    })
                    .collect(),
            },
            Formula::Bottom => Formula::Bottom,
            Formula::And(a, b) => Formula::and(a.substitute(var, constant), b.substitute(var, constant)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, constant), b.substitute(var, constant)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(var, constant), b.substitute(var, constant)),
            Formula::Delta(a) => Formula::delta(a.substitute(var, constant)),
            Formula::Forall(v, _) | Formula::Exists(v, _) if v == var => self.clone(),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.substitute(var, constant)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.substitute(var, constant)),
        }
    }

    /// Replaces every occurrence of constant `constant` by variable `var`.
    /// `var` must not occur in `self`.
    pub fn abstract_constant(&self, constant: &str, var: &str) -> Formula {
        match self {
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) if c == constant => Term::Var(var.to_string()),
                        other => other.clone(),
                    })
                    .collect(),
            },
            Formula::Bottom => Formula::Bottom,
            Formula::And(a, b) => Formula::and(a.abstract_constant(constant, var), b.abstract_constant(constant, var)),
            Formula::Or(a, b) => Formula::or(a.abstract_constant(constant, var), b.abstract_constant(constant, var)),
            Formula::Implies(a, b) => {
                Formula::implies(a.abstract_constant(constant, var), b.abstract_constant(constant, var))
            }
            Formula::Delta(a) => Formula::delta(a.abstract_constant(constant, var)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.abstract_constant(constant, var)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.abstract_constant(constant, var)),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn variable_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => {
                for t in args {
                    if let Term::Var(v) = t {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Delta(a) => a.collect_vars(out),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                out.insert(v.clone());
                a.collect_vars(out);
            }
        }
    }

    /// Renames 0-ary atoms through `map`; atoms not in the map are kept.
    pub fn rename_props(&self, map: &BTreeMap<String, String>) -> Formula {
        match self {
            Formula::Atom { rel, args } if args.is_empty() => match map.get(rel) {
                Some(new) => Formula::prop(new.clone()),
                None => self.clone(),
            },
            Formula::Atom { .. } | Formula::Bottom => self.clone(),
            Formula::And(a, b) => Formula::and(a.rename_props(map), b.rename_props(map)),
            Formula::Or(a, b) => Formula::or(a.rename_props(map), b.rename_props(map)),
            Formula::Implies(a, b) => Formula::implies(a.rename_props(map), b.rename_props(map)),
            Formula::Delta(a) => Formula::delta(a.rename_props(map)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.rename_props(map)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.rename_props(map)),
        }
    }

    /// The fixed enumeration order: depth, then constructor rank
    /// (Atom < ⊥ < ∧ < ∨ < → < Δ < ∀ < ∃), then children lexicographically.
    pub fn enumeration_cmp(&self, other: &Formula) -> Ordering {
        self.depth()
            .cmp(&other.depth())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| self.same_rank_cmp(other))
    }

    fn same_rank_cmp(&self, other: &Formula) -> Ordering {
        match (self, other) {
            (Formula::Atom { rel: r1, args: a1 }, Formula::Atom { rel: r2, args: a2 }) => {
                cmp_names(r1, r2).then_with(|| a1.cmp(a2))
            }
            (Formula::And(a1, b1), Formula::And(a2, b2))
            | (Formula::Or(a1, b1), Formula::Or(a2, b2))
            | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
                a1.enumeration_cmp(a2).then_with(|| b1.enumeration_cmp(b2))
            }
            (Formula::Delta(a1), Formula::Delta(a2)) => a1.enumeration_cmp(a2),
            (Formula::Forall(v1, a1), Formula::Forall(v2, a2)) | (Formula::Exists(v1, a1), Formula::Exists(v2, a2)) => {
                cmp_names(v1, v2).then_with(|| a1.enumeration_cmp(a2))
            }
            _ => Ordering::Equal,
        }
    }
}

/// Name order used everywhere: shorter names first, then bytewise, so that
/// `v2 < v10` for pool names.
pub(crate) fn cmp_names(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::printer::print(self))
    }
}
