use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{SemanticsError, TruthValue};
use crate::syntax::Signature;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Table {
    arity: usize,
    // Row-major over argument tuples, first argument most significant.
    values: Vec<TruthValue>,
}

/// A finite Gödel valuation: a non-empty universe, a total `[0,1]`-valued
/// table for every relation symbol and an element for every constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    universe: Vec<String>,
    tables: BTreeMap<String, Table>,
    constants: BTreeMap<String, usize>,
}

impl Valuation {
    pub fn new<I, S>(universe: I) -> Result<Valuation, SemanticsError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        if universe.is_empty() {
            return Err(SemanticsError::EmptyUniverse);
        }
        for (i, e) in universe.iter().enumerate() {
            if universe[..i].contains(e) {
                return Err(SemanticsError::DuplicateElement(e.clone()));
            }
        }
        Ok(Valuation {
            universe,
            tables: BTreeMap::new(),
            constants: BTreeMap::new(),
        })
    }

    /// A valuation for 0-ary atoms over the one-element universe `{a}`.
    pub fn propositional<I, S>(values: I) -> Valuation
    where
        I: IntoIterator<Item = (S, TruthValue)>,
        S: Into<String>,
    {
        let mut v = Valuation::new(["a"]).expect("non-empty");
        for (name, value) in values {
            v.declare_relation(&name.into(), 0, value);
        }
        v
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn element_index(&self, name: &str) -> Result<usize, SemanticsError> {
        self.universe
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| SemanticsError::UnknownElement(name.to_string()))
    }

    /// Adds (or resets) relation `name` with every entry set to `fill`.
    pub fn declare_relation(&mut self, name: &str, arity: usize, fill: TruthValue) {
        let len = self.universe.len().pow(arity as u32);
        self.tables.insert(
            name.to_string(),
            Table {
                arity,
                values: vec![fill; len],
            },
        );
    }

    pub fn arity(&self, rel: &str) -> Option<usize> {
        self.tables.get(rel).map(|t| t.arity)
    }

    pub fn relation_names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    fn offset(&self, rel: &str, args: &[usize]) -> Result<(&Table, usize), SemanticsError> {
        let table = self
            .tables
            .get(rel)
            .ok_or_else(|| SemanticsError::Uninterpreted(rel.to_string()))?;
        if table.arity != args.len() {
            return Err(SemanticsError::ArityMismatch {
                name: rel.to_string(),
                expected: table.arity,
                found: args.len(),
            });
        }
        let n = self.universe.len();
        let mut idx = 0;
        for &a in args {
            if a >= n {
                return Err(SemanticsError::UnknownElement(format!("#{a}")));
            }
            idx = idx * n + a;
        }
        Ok((table, idx))
    }

    /// `R^v(args)` with arguments given as element indices.
    pub fn get(&self, rel: &str, args: &[usize]) -> Result<TruthValue, SemanticsError> {
        let (table, idx) = self.offset(rel, args)?;
        Ok(table.values[idx])
    }

    pub fn set(&mut self, rel: &str, args: &[usize], value: TruthValue) -> Result<(), SemanticsError> {
        let (_, idx) = self.offset(rel, args)?;
        self.tables.get_mut(rel).expect("checked").values[idx] = value;
        Ok(())
    }

    /// Value of a 0-ary atom.
    pub fn prop(&self, name: &str) -> Result<TruthValue, SemanticsError> {
        self.get(name, &[])
    }

    pub fn set_constant(&mut self, name: &str, element: usize) -> Result<(), SemanticsError> {
        if element >= self.universe.len() {
            return Err(SemanticsError::UnknownElement(format!("#{element}")));
        }
        self.constants.insert(name.to_string(), element);
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Result<usize, SemanticsError> {
        self.constants
            .get(name)
            .copied()
            .ok_or_else(|| SemanticsError::Uninterpreted(name.to_string()))
    }

    /// True when every symbol of `sig` is interpreted with the right arity.
    pub fn interprets(&self, sig: &Signature) -> bool {
        sig.relations().iter().all(|(r, &a)| self.arity(r) == Some(a))
            && sig.constants().iter().all(|c| self.constants.contains_key(c))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_repr()).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Valuation, SemanticsError> {
        let repr: Repr = serde_json::from_value(value.clone()).map_err(|e| SemanticsError::Json(e.to_string()))?;
        Self::from_repr(repr)
    }

    pub fn from_json_str(text: &str) -> Result<Valuation, SemanticsError> {
        let repr: Repr = serde_json::from_str(text).map_err(|e| SemanticsError::Json(e.to_string()))?;
        Self::from_repr(repr)
    }

    fn tuple_key(&self, arity: usize, mut idx: usize) -> String {
        let n = self.universe.len();
        let mut parts = vec![""; arity];
        for slot in (0..arity).rev() {
            parts[slot] = &self.universe[idx % n];
            idx /= n;
        }
        format!("({})", parts.join(","))
    }

    fn to_repr(&self) -> Repr {
        let relations = self
            .tables
            .iter()
            .map(|(r, t)| {
                let entries = t
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (self.tuple_key(t.arity, i), v))
                    .collect();
                (r.clone(), entries)
            })
            .collect();
        let constants = self
            .constants
            .iter()
            .map(|(c, &e)| (c.clone(), self.universe[e].clone()))
            .collect();
        Repr {
            universe: self.universe.clone(),
            relations,
            constants,
        }
    }

    fn from_repr(repr: Repr) -> Result<Valuation, SemanticsError> {
        let mut v = Valuation::new(repr.universe)?;
        for (rel, entries) in repr.relations {
            let mut parsed = Vec::with_capacity(entries.len());
            let mut arity = None;
            for (key, value) in entries {
                let inner = key
                    .trim()
                    .strip_prefix('(')
                    .and_then(|k| k.strip_suffix(')'))
                    .ok_or_else(|| SemanticsError::Json(format!("bad tuple key `{key}`")))?;
                let args: Vec<usize> = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|e| v.element_index(e.trim()))
                        .collect::<Result<_, _>>()?
                };
                match arity {
                    None => arity = Some(args.len()),
                    Some(a) if a != args.len() => {
                        return Err(SemanticsError::Json(format!("mixed arities in table `{rel}`")))
                    }
                    _ => {}
                }
                parsed.push((args, value));
            }
            let arity = arity.ok_or_else(|| SemanticsError::Json(format!("empty table `{rel}`")))?;
            v.declare_relation(&rel, arity, TruthValue::ZERO);
            let mut seen = vec![false; v.size().pow(arity as u32)];
            for (args, value) in parsed {
                let (_, idx) = v.offset(&rel, &args)?;
                seen[idx] = true;
                v.set(&rel, &args, value)?;
            }
            if seen.contains(&false) {
                return Err(SemanticsError::PartialTable(rel));
            }
        }
        for (c, e) in repr.constants {
            let idx = v.element_index(&e)?;
            v.set_constant(&c, idx)?;
        }
        Ok(v)
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    universe: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, BTreeMap<String, TruthValue>>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
}
