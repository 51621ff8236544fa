//! Bounded linear orders, their homomorphisms, amalgamation and embedding
//! into `[0,1]`.

mod amalgam;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::TruthValue;

pub use amalgam::{amalgamate, AmalgamInput, AmalgamResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinOrderError {
    #[error("a bounded chain needs at least two distinct elements")]
    TooSmall,
    #[error("element `{0}` occurs twice")]
    DuplicateElement(String),
    #[error("element `{0}` is not in the chain")]
    UnknownElement(String),
    #[error("not a Lin-homomorphism: {0}")]
    InvalidHom(String),
    #[error("the relation contains a cycle through `{0}`")]
    Cycle(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// A finite linear order with least and greatest element, stored as its
/// elements in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChainRepr", into = "ChainRepr")]
pub struct BoundedChain {
    elements: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    elements: Vec<String>,
}

impl TryFrom<ChainRepr> for BoundedChain {
    type Error = LinOrderError;

    fn try_from(r: ChainRepr) -> Result<Self, Self::Error> {
        BoundedChain::new(r.elements)
    }
}

impl From<BoundedChain> for ChainRepr {
    fn from(c: BoundedChain) -> Self {
        ChainRepr { elements: c.elements }
    }
}

impl BoundedChain {
    /// The chain `elements[0] < elements[1] < …`.
    pub fn new<I, S>(elements: I) -> Result<BoundedChain, LinOrderError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(e) {
                return Err(LinOrderError::DuplicateElement(e.clone()));
            }
        }
        if elements.len() < 2 {
            return Err(LinOrderError::TooSmall);
        }
        Ok(BoundedChain { elements })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> &str {
        &self.elements[0]
    }

    pub fn top(&self) -> &str {
        &self.elements[self.elements.len() - 1]
    }

    pub fn position(&self, e: &str) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }

    pub fn contains(&self, e: &str) -> bool {
        self.position(e).is_some()
    }

    /// `a ≤ b`; `None` if either is not an element.
    pub fn le(&self, a: &str, b: &str) -> Option<bool> {
        Some(self.position(a)? <= self.position(b)?)
    }

    pub fn identity(&self) -> LinHom {
        LinHom {
            source: self.clone(),
            target: self.clone(),
            map: self.elements.iter().map(|e| (e.clone(), e.clone())).collect(),
        }
    }
}

/// A map between bounded chains, meant to be strictly monotone and to
/// preserve both endpoints. Construction does not check this; see
/// [`validate_lin_hom`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinHom {
    pub source: BoundedChain,
    pub target: BoundedChain,
    pub map: BTreeMap<String, String>,
}

impl LinHom {
    pub fn new(source: BoundedChain, target: BoundedChain, map: BTreeMap<String, String>) -> LinHom {
        LinHom { source, target, map }
    }

    /// Builds the map sending the i-th source element to `images[i]`.
    pub fn from_images<S: Into<String>>(
        source: BoundedChain,
        target: BoundedChain,
        images: impl IntoIterator<Item = S>,
    ) -> LinHom {
        let map = source
            .elements
            .iter()
            .cloned()
            .zip(images.into_iter().map(Into::into))
            .collect();
        LinHom { source, target, map }
    }

    pub fn apply(&self, e: &str) -> Option<&str> {
        self.map.get(e).map(String::as_str)
    }

    /// Explains the first violated condition, if any.
    pub fn check(&self) -> Result<(), LinOrderError> {
        let bad = |m: String| Err(LinOrderError::InvalidHom(m));
        if self.map.len() != self.source.len() || self.source.elements.iter().any(|e| !self.map.contains_key(e)) {
            return bad("map is not defined exactly on the source".into());
        }
        let mut prev: Option<usize> = None;
        for e in &self.source.elements {
            let img = &self.map[e];
            let Some(p) = self.target.position(img) else {
                return bad(format!("image `{img}` of `{e}` is not in the target"));
            };
            if prev.is_some_and(|q| q >= p) {
                return bad(format!("not strictly monotone at `{e}`"));
            }
            prev = Some(p);
        }
        if self.map[self.source.bottom()] != self.target.bottom() {
            return bad("bottom is not preserved".into());
        }
        if self.map[self.source.top()] != self.target.top() {
            return bad("top is not preserved".into());
        }
        Ok(())
    }
}

/// True iff `f` is strictly monotone and preserves bottom and top.
pub fn validate_lin_hom(f: &LinHom) -> bool {
    f.check().is_ok()
}

/// A finite strict partial order on named elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictPartialOrder {
    elements: Vec<String>,
    less: Vec<Vec<bool>>,
}

impl StrictPartialOrder {
    /// The transitive closure of `pairs` (each `(a, b)` meaning `a < b`).
    /// Fails if the closure is not irreflexive.
    pub fn new<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<StrictPartialOrder, LinOrderError> {
        let elements: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let n = elements.len();
        let index = |e: &str| {
            elements
                .iter()
                .position(|x| x == e)
                .ok_or_else(|| LinOrderError::UnknownElement(e.to_string()))
        };
        let mut less = vec![vec![false; n]; n];
        for (a, b) in pairs {
            less[index(a.as_ref())?][index(b.as_ref())?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    let row = less[k].clone();
                    for (cell, via) in less[i].iter_mut().zip(row) {
                        *cell |= via;
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| less[i][i]) {
            return Err(LinOrderError::Cycle(elements[i].clone()));
        }
        Ok(StrictPartialOrder { elements, less })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }
}

/// A linear order extending `p`. Among the currently minimal elements the one
/// with the smallest `key` is placed next.
pub fn linear_extension_by<K: Ord>(
    p: &StrictPartialOrder,
    key: impl Fn(usize) -> K,
) -> Result<BoundedChain, LinOrderError> {
    let n = p.elements.len();
    let mut placed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&i| !placed[i] && (0..n).all(|j| placed[j] || !p.less(j, i)))
            .min_by_key(|&i| key(i));
        let Some(i) = next else {
            let stuck = (0..n).find(|&i| !placed[i]).expect("unplaced element");
            return Err(LinOrderError::Cycle(p.elements[stuck].clone()));
        };
        placed[i] = true;
        out.push(p.elements[i].clone());
    }
    BoundedChain::new(out)
}

/// [`linear_extension_by`] with ties broken by element name.
pub fn linear_extension(p: &StrictPartialOrder) -> Result<BoundedChain, LinOrderError> {
    linear_extension_by(p, |i| p.elements[i].clone())
}

/// The uniform embedding: the i-th of k elements goes to `i/(k-1)`.
pub fn embed_into_unit(b: &BoundedChain) -> BTreeMap<String, TruthValue> {
    let k = b.len();
    b.elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), TruthValue::fraction(i, k - 1)))
        .collect()
}

/// Checks that `h` is a Lin-homomorphism into `[0,1]` preserving the minimum
/// and maximum of every non-empty subset of at most `max_subset` elements.
pub fn check_embedding(b: &BoundedChain, h: &BTreeMap<String, TruthValue>, max_subset: usize) -> bool {
    let Some(values): Option<Vec<TruthValue>> = b.elements.iter().map(|e| h.get(e).copied()).collect() else {
        return false;
    };
    if h.len() != b.len() || !values[0].is_zero() || !values[values.len() - 1].is_one() {
        return false;
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    // Subsets as ascending index lists; in a chain their inf and sup are the
    // first and last element.
    fn subsets(n: usize, max: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if !cur.is_empty() && !f(cur) {
            return false;
        }
        if cur.len() == max {
            return true;
        }
        for i in start..n {
            cur.push(i);
            let ok = subsets(n, max, i + 1, cur, f);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    subsets(b.len(), max_subset, 0, &mut Vec::new(), &mut |s| {
        let imgs: Vec<TruthValue> = s.iter().map(|&i| values[i]).collect();
        let min = *imgs.iter().min().expect("non-empty");
        let max = *imgs.iter().max().expect("non-empty");
        min == values[s[0]] && max == values[s[s.len() - 1]]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(e: &[&str]) -> BoundedChain {
        BoundedChain::new(e.iter().copied()).unwrap()
    }

    #[test]
    fn chain_invariants() {
        assert_eq!(BoundedChain::new(["a"]), Err(LinOrderError::TooSmall));
        assert!(matches!(
            BoundedChain::new(["a", "a"]),
            Err(LinOrderError::DuplicateElement(_))
        ));
        let c = chain(&["0", "m", "1"]);
        assert_eq!((c.bottom(), c.top()), ("0", "1"));
        assert_eq!(c.le("m", "1"), Some(true));
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<BoundedChain>(&json).unwrap(), c);
        assert!(serde_json::from_str::<BoundedChain>(r#"{"elements":["x"]}"#).is_err());
    }

    #[test]
    fn hom_validation() {
        let c3 = chain(&["0", "m", "1"]);
        assert!(validate_lin_hom(&c3.identity()));
        let constant = LinHom::from_images(c3.clone(), c3.clone(), ["0", "0", "0"]);
        assert!(!validate_lin_hom(&constant));
        let two = chain(&["0", "1"]);
        assert!(validate_lin_hom(&LinHom::from_images(
            two.clone(),
            c3.clone(),
            ["0", "1"]
        )));
        assert!(!validate_lin_hom(&LinHom::from_images(two, c3, ["0", "m"])));
    }

    #[test]
    fn extensions() {
        let anti = StrictPartialOrder::new(&["b", "a"], &[]).unwrap();
        assert_eq!(linear_extension(&anti).unwrap(), chain(&["a", "b"]));
        let total = StrictPartialOrder::new(&["x", "y", "z"], &[("z", "y"), ("y", "x")]).unwrap();
        assert_eq!(linear_extension(&total).unwrap(), chain(&["z", "y", "x"]));
        let diamond = StrictPartialOrder::new(
            &["bot", "l", "r", "top"],
            &[("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")],
        )
        .unwrap();
        assert_eq!(linear_extension(&diamond).unwrap(), chain(&["bot", "l", "r", "top"]));
        assert!(matches!(
            StrictPartialOrder::new(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(LinOrderError::Cycle(_))
        ));
    }

    #[test]
    fn uniform_embedding() {
        let e = embed_into_unit(&chain(&["0", "1"]));
        assert_eq!(e["0"], TruthValue::ZERO);
        assert_eq!(e["1"], TruthValue::ONE);
        let e = embed_into_unit(&chain(&["0", "m", "1"]));
        assert_eq!(e["m"], TruthValue::new(1, 2).unwrap());
        let c5 = chain(&["a", "b", "c", "d", "e"]);
        let e = embed_into_unit(&c5);
        let vals: Vec<String> = c5.elements().iter().map(|x| e[x].to_string()).collect();
        assert_eq!(vals, ["0", "1/4", "1/2", "3/4", "1"]);
        assert!(check_embedding(&c5, &e, 4));
        let mut broken = e.clone();
        broken.insert("c".into(), TruthValue::new(1, 5).unwrap());
        assert!(!check_embedding(&c5, &broken, 4));
    }
}
