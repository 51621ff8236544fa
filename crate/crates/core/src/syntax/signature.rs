use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::formula::Formula;
use super::SyntaxError;

/// A finite relational signature: relation symbols with arities and constant
/// symbols. Names are unique across both sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    relations: BTreeMap<String, usize>,
    constants: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Signature of 0-ary relation symbols only.
    pub fn propositional<I, S>(atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sig = Signature::new();
        for a in atoms {
            let a = a.into();
            sig.relations.insert(a, 0);
        }
        sig
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        check_name(name)?;
        if self.constants.contains(name) {
            return Err(SyntaxError::DuplicateSymbol(name.to_string()));
        }
        match self.relations.get(name) {
            Some(&a) if a != arity => Err(SyntaxError::DuplicateSymbol(name.to_string())),
            _ => {
                self.relations.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SyntaxError> {
        check_name(name)?;
        if self.relations.contains_key(name) {
            return Err(SyntaxError::DuplicateSymbol(name.to_string()));
        }
        self.constants.insert(name.to_string());
        Ok(())
    }

    pub fn relations(&self) -> &BTreeMap<String, usize> {
        &self.relations
    }

    pub fn constants(&self) -> &BTreeSet<String> {
        &self.constants
    }

    pub fn arity(&self, rel: &str) -> Option<usize> {
        self.relations.get(rel).copied()
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty() && self.constants.is_empty()
    }

    /// True when every relation symbol is 0-ary and there are no constants.
    pub fn is_propositional(&self) -> bool {
        self.constants.is_empty() && self.relations.values().all(|&a| a == 0)
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.relations.iter().all(|(r, a)| other.relations.get(r) == Some(a))
            && self.constants.is_subset(&other.constants)
    }

    pub fn union(&self, other: &Signature) -> Result<Signature, SyntaxError> {
        let mut out = self.clone();
        for (r, &a) in &other.relations {
            out.add_relation(r, a)?;
        }
        for c in &other.constants {
            out.add_constant(c)?;
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature {
            relations: self
                .relations
                .iter()
                .filter(|(r, a)| other.relations.get(*r) == Some(a))
                .map(|(r, a)| (r.clone(), *a))
                .collect(),
            constants: self.constants.intersection(&other.constants).cloned().collect(),
        }
    }

    /// Parses the signature file format: one symbol per line, either
    /// `rel Name/arity` or `const Name`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || SyntaxError::BadSignatureLine {
                line: lineno + 1,
                text: raw.to_string(),
            };
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("rel"), Some(spec), None) => {
                    let (name, arity) = spec.split_once('/').ok_or_else(bad)?;
                    let arity: usize = arity.parse().map_err(|_| bad())?;
                    sig.add_relation(name, arity)?;
                }
                (Some("const"), Some(name), None) => sig.add_constant(name)?,
                _ => return Err(bad()),
            }
        }
        Ok(sig)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (r, a) in &self.relations {
            out.push_str(&format!("rel {r}/{a}\n"));
        }
        for c in &self.constants {
            out.push_str(&format!("const {c}\n"));
        }
        out
    }

    /// A constant name from the pool `k0, k1, …` not used by this signature or
    /// by `avoid`.
    pub fn fresh_constant(&self, avoid: &BTreeSet<String>) -> String {
        (0..)
            .map(|i| format!("k{i}"))
            .find(|n| !self.relations.contains_key(n) && !self.constants.contains(n) && !avoid.contains(n))
            .expect("pool is infinite")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn check_name(name: &str) -> Result<(), SyntaxError> {
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !super::parser::is_keyword(name);
    if ok {
        Ok(())
    } else {
        Err(SyntaxError::BadName(name.to_string()))
    }
}

/// `L_φ`: exactly the relation and constant symbols occurring in `φ`.
pub fn language_of(formula: &Formula) -> Signature {
    Signature {
        relations: formula.relations(),
        constants: formula.constants(),
    }
}

/// Language of a set of formulas.
pub fn language_of_all<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Signature {
    let mut sig = Signature::new();
    for f in formulas {
        for (r, a) in f.relations() {
            sig.relations.entry(r).or_insert(a);
        }
        sig.constants.extend(f.constants());
    }
    sig
}

/// A finite ordered set of closed formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    formulas: Vec<Formula>,
}

impl Theory {
    pub fn new(formulas: impl IntoIterator<Item = Formula>) -> Result<Theory, SyntaxError> {
        let mut t = Theory::default();
        for f in formulas {
            t.insert(f)?;
        }
        Ok(t)
    }

    pub fn empty() -> Theory {
        Theory::default()
    }

    /// Adds a formula unless already present. Returns whether it was new.
    pub fn insert(&mut self, formula: Formula) -> Result<bool, SyntaxError> {
        if let Some(v) = formula.free_variables().into_iter().next() {
            return Err(SyntaxError::OpenFormula {
                formula: formula.to_string(),
                variable: v,
            });
        }
        if self.formulas.contains(&formula) {
            return Ok(false);
        }
        self.formulas.push(formula);
        Ok(true)
    }

    pub fn with(&self, formula: Formula) -> Result<Theory, SyntaxError> {
        let mut t = self.clone();
        t.insert(formula)?;
        Ok(t)
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.formulas.iter()
    }

    pub fn language(&self) -> Signature {
        language_of_all(&self.formulas)
    }

    pub fn is_propositional(&self) -> bool {
        self.formulas.iter().all(Formula::is_propositional)
    }

    /// Parses a `.thy` file: one formula per line, `#` comments, blank lines
    /// ignored.
    pub fn parse(text: &str, sig: &Signature) -> Result<Theory, SyntaxError> {
        let mut t = Theory::default();
        for line in theory_lines(text) {
            t.insert(super::parse_formula(line, sig)?)?;
        }
        Ok(t)
    }

    /// Like [`Theory::parse`] but infers the signature from the text.
    pub fn parse_inferred(text: &str) -> Result<(Theory, Signature), SyntaxError> {
        let mut sig = Signature::new();
        let mut t = Theory::default();
        for line in theory_lines(text) {
            let (f, s) = super::parse_formula_inferred(line)?;
            sig = sig.union(&s)?;
            t.insert(f)?;
        }
        Ok((t, sig))
    }

    pub fn to_text(&self) -> String {
        self.formulas.iter().map(|f| format!("{f}\n")).collect()
    }
}

fn theory_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

impl<'a> IntoIterator for &'a Theory {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.formulas.iter()
    }
}
