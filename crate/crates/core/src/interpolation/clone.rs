//! Formulas over a finite set of atoms up to equivalence, as the closure of
//! the atom projections under the pointwise connectives on the canonical
//! points.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::decision::{DecisionError, PointSpace};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Atom(u32),
    Bottom,
    And(u32, u32),
    Or(u32, u32),
    Implies(u32, u32),
    Delta(u32),
}

/// The semantic vectors of all formulas over `atoms`, each with the first
/// formula found for it. Witnesses are found generation by generation:
/// atoms, then `⊥`, then every combination involving a vector of the
/// previous generation, by connective (∧, ∨, →, Δ) and then by the indices of
/// the arguments.
#[derive(Clone, Debug)]
pub struct CloneTable {
    space: PointSpace,
    delta_allowed: bool,
    vectors: Vec<u8>,
    steps: Vec<Step>,
    saturated: bool,
}

#[derive(Clone, Debug)]
pub struct CloneBudgetExceeded {
    pub budget: usize,
    pub partial: Arc<CloneTable>,
}

impl std::fmt::Display for CloneBudgetExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "clone over {:?} did not saturate within {} vectors",
            self.partial.atoms(),
            self.budget
        )
    }
}

impl CloneTable {
    pub fn atoms(&self) -> &[String] {
        self.space.atoms()
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn delta_allowed(&self) -> bool {
        self.delta_allowed
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Ranks of the i-th vector, one per canonical point.
    pub fn vector(&self, i: usize) -> &[u8] {
        let n = self.space.len();
        &self.vectors[i * n..(i + 1) * n]
    }

    /// Points where the i-th vector is 1.
    pub fn one_mask(&self, i: usize) -> FixedBitSet {
        let top = self.space.top();
        let mut m = FixedBitSet::with_capacity(self.space.len());
        for (p, &r) in self.vector(i).iter().enumerate() {
            m.set(p, r == top);
        }
        m
    }

    pub fn witness(&self, i: usize) -> Formula {
        match self.steps[i] {
            Step::Atom(a) => Formula::prop(self.space.atoms()[a as usize].clone()),
            Step::Bottom => Formula::Bottom,
            Step::And(a, b) => Formula::and(self.witness(a as usize), self.witness(b as usize)),
            Step::Or(a, b) => Formula::or(self.witness(a as usize), self.witness(b as usize)),
            Step::Implies(a, b) => Formula::implies(self.witness(a as usize), self.witness(b as usize)),
            Step::Delta(a) => Formula::delta(self.witness(a as usize)),
        }
    }

    pub fn index_of(&self, vector: &[u8]) -> Option<usize> {
        (0..self.len()).find(|&i| self.vector(i) == vector)
    }
}

/// Number of functions on the canonical points that take at every point one
/// of the values `0`, `1` or an atom's value, and that agree on points with
/// the same order type. Every formula's vector is such a function.
pub fn invariant_bound(space: &PointSpace) -> u128 {
    let top = space.top();
    let mut seen = std::collections::HashSet::new();
    let mut bound: u128 = 1;
    for i in 0..space.len() {
        let ranks = space.ranks(i);
        let ty = order_type(&ranks, top);
        if seen.insert(ty) {
            let mut vals: Vec<u8> = ranks.clone();
            vals.extend([0, top]);
            vals.sort_unstable();
            vals.dedup();
            bound = bound.saturating_mul(vals.len() as u128);
        }
    }
    bound
}

/// Dense re-ranking that keeps 0 and the top fixed.
pub(crate) fn order_type(ranks: &[u8], top: u8) -> Vec<u8> {
    let mut mids: Vec<u8> = ranks.iter().copied().filter(|&r| r != 0 && r != top).collect();
    mids.sort_unstable();
    mids.dedup();
    ranks
        .iter()
        .map(|&r| {
            if r == 0 {
                0
            } else if r == top {
                u8::MAX
            } else {
                mids.binary_search(&r).expect("present") as u8 + 1
            }
        })
        .collect()
}

type Block = [u8; 16];

/// Vectors are stored as `w` blocks of 16 bytes, padded with zeros, so the
/// pointwise operations vectorize.
struct Builder {
    w: usize,
    top: u8,
    mask: Vec<Block>,
    vectors: Vec<Block>,
    steps: Vec<Step>,
    index: Index,
    buf: Vec<Block>,
}

enum Index {
    Single(FxHashMap<u128, u32>),
    Multi(FxHashMap<Box<[Block]>, u32>),
}

impl Builder {
    fn new(n: usize, top: u8) -> Builder {
        let w = n.div_ceil(16).max(1);
        let mask = (0..w)
            .map(|k| std::array::from_fn(|j| if k * 16 + j < n { 0xFF } else { 0 }))
            .collect();
        Builder {
            w,
            top,
            mask,
            vectors: Vec::new(),
            steps: Vec::new(),
            index: if w == 1 {
                Index::Single(FxHashMap::default())
            } else {
                Index::Multi(FxHashMap::default())
            },
            buf: vec![[0; 16]; w],
        }
    }

    fn set_buf(&mut self, values: &[u8]) {
        for (k, block) in self.buf.iter_mut().enumerate() {
            *block = std::array::from_fn(|j| values.get(k * 16 + j).copied().unwrap_or(0));
        }
    }

    fn push(&mut self, step: Step) -> bool {
        let id = self.steps.len() as u32;
        let fresh = match &mut self.index {
            Index::Single(m) => match m.entry(u128::from_le_bytes(self.buf[0])) {
                Entry::Occupied(_) => false,
                Entry::Vacant(e) => {
                    e.insert(id);
                    true
                }
            },
            Index::Multi(m) => match m.entry(self.buf.clone().into_boxed_slice()) {
                Entry::Occupied(_) => false,
                Entry::Vacant(e) => {
                    e.insert(id);
                    true
                }
            },
        };
        if fresh {
            self.vectors.extend_from_slice(&self.buf);
            self.steps.push(step);
        }
        fresh
    }

    fn combine(&mut self, op: Step) -> bool {
        let top = self.top;
        let w = self.w;
        let block = |i: u32, k: usize| &self.vectors[i as usize * w + k];
        let mut buf = std::mem::take(&mut self.buf);
        for (k, out) in buf.iter_mut().enumerate() {
            *out = match op {
                Step::And(a, b) => {
                    let (x, y) = (block(a, k), block(b, k));
                    std::array::from_fn(|j| x[j].min(y[j]))
                }
                Step::Or(a, b) => {
                    let (x, y) = (block(a, k), block(b, k));
                    std::array::from_fn(|j| x[j].max(y[j]))
                }
                Step::Implies(a, b) => {
                    let (x, y, m) = (block(a, k), block(b, k), &self.mask[k]);
                    std::array::from_fn(|j| (if x[j] <= y[j] { top } else { y[j] }) & m[j])
                }
                Step::Delta(a) => {
                    let x = block(a, k);
                    std::array::from_fn(|j| if x[j] == top { top } else { 0 })
                }
                Step::Atom(_) | Step::Bottom => unreachable!("leaves are pushed directly"),
            };
        }
        self.buf = buf;
        self.push(op)
    }

    fn unpadded(&self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.steps.len() * n);
        for v in self.vectors.chunks(self.w) {
            out.extend(v.iter().flatten().take(n));
        }
        out
    }
}

type BinaryStep = fn(u32, u32) -> Step;

/// Computes the closure, giving up once it holds more than `budget` vectors.
pub fn clone_closure(
    atoms: &[String],
    delta_allowed: bool,
    budget: usize,
) -> Result<Arc<CloneTable>, CloneBudgetExceeded> {
    type Key = (Vec<String>, bool);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<CloneTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (atoms.to_vec(), delta_allowed);
    if let Some(t) = cache.lock().expect("cache lock").get(&key) {
        if t.len() <= budget {
            return Ok(t.clone());
        }
    }
    let table = Arc::new(
        compute(atoms, delta_allowed, budget).map_err(|partial| CloneBudgetExceeded {
            budget,
            partial: Arc::new(partial),
        })?,
    );
    cache.lock().expect("cache lock").insert(key, table.clone());
    Ok(table)
}

fn compute(atoms: &[String], delta_allowed: bool, budget: usize) -> Result<CloneTable, CloneTable> {
    let space = match PointSpace::new(atoms.to_vec()) {
        Ok(s) => s,
        Err(DecisionError::BudgetExceeded { .. }) | Err(_) => {
            let space = PointSpace::with_base(2, Vec::new()).expect("one point");
            return Err(CloneTable {
                space,
                delta_allowed,
                vectors: Vec::new(),
                steps: Vec::new(),
                saturated: false,
            });
        }
    };
    let n = space.len();
    let bound = invariant_bound(&space);
    let mut b = Builder::new(n, space.top());
    let mut ranks = vec![0u8; atoms.len()];
    for a in 0..atoms.len() {
        let column: Vec<u8> = (0..n)
            .map(|p| {
                space.ranks_into(p, &mut ranks);
                ranks[a]
            })
            .collect();
        b.set_buf(&column);
        b.push(Step::Atom(a as u32));
    }
    b.set_buf(&[]);
    b.push(Step::Bottom);

    let finish = |b: Builder, saturated: bool| CloneTable {
        space: space.clone(),
        delta_allowed,
        vectors: b.unpadded(n),
        steps: b.steps,
        saturated,
    };

    let mut old = 0u32;
    loop {
        let end = b.steps.len() as u32;
        if end as u128 == bound {
            // Every formula vector is among the invariant functions, so the
            // closure cannot grow further.
            return Ok(finish(b, true));
        }
        let before = b.steps.len();
        // ∧ and ∨ are commutative, so they only need pairs with i ≤ j.
        let binary: [(BinaryStep, bool); 3] = [(Step::And, true), (Step::Or, true), (Step::Implies, false)];
        for (make, commutative) in binary {
            for i in 0..end {
                let j_start = match (i < old, commutative) {
                    (true, _) => old,
                    (false, true) => i,
                    (false, false) => 0,
                };
                for j in j_start..end {
                    b.combine(make(i, j));
                    if b.steps.len() > budget {
                        return Err(finish(b, false));
                    }
                    if b.steps.len() as u128 == bound {
                        return Ok(finish(b, true));
                    }
                }
            }
        }
        if delta_allowed {
            for i in old..end {
                b.combine(Step::Delta(i));
                if b.steps.len() > budget {
                    return Err(finish(b, false));
                }
            }
        }
        if b.steps.len() == before {
            return Ok(finish(b, true));
        }
        old = end;
    }
}
