//! Straight-line programs over chain ranks.
//!
//! Gödel connectives depend only on the order of their arguments, so a
//! formula can be evaluated on integer ranks `0..=top` and mapped back to
//! values afterwards. Common subterms are shared.

use rustc_hash::FxHashMap;

use crate::syntax::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Op {
    Zero,
    Slot(u32),
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
    Delta(u32),
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Program {
    ops: Vec<Op>,
    memo: FxHashMap<Op, u32>,
}

impl Program {
    pub(crate) fn push(&mut self, op: Op) -> u32 {
        if let Some(&i) = self.memo.get(&op) {
            return i;
        }
        let i = self.ops.len() as u32;
        self.ops.push(op);
        self.memo.insert(op, i);
        i
    }

    pub(crate) fn len(&self) -> usize {
        self.ops.len()
    }

    /// Evaluates node `root` (and everything before it) on slot ranks.
    pub(crate) fn eval(&self, root: u32, slots: &[u8], top: u8, scratch: &mut Vec<u8>) -> u8 {
        scratch.clear();
        self.extend(root, slots, top, scratch)
    }

    /// Like [`Program::eval`] but keeps the nodes already in `scratch`, so a
    /// caller can evaluate premises first and stop early.
    pub(crate) fn extend(&self, root: u32, slots: &[u8], top: u8, scratch: &mut Vec<u8>) -> u8 {
        let done = scratch.len();
        for op in self.ops.iter().take(root as usize + 1).skip(done) {
            let r = match *op {
                Op::Zero => 0,
                Op::Slot(s) => slots[s as usize],
                Op::And(a, b) => scratch[a as usize].min(scratch[b as usize]),
                Op::Or(a, b) => scratch[a as usize].max(scratch[b as usize]),
                Op::Imp(a, b) => {
                    let (x, y) = (scratch[a as usize], scratch[b as usize]);
                    if x <= y {
                        top
                    } else {
                        y
                    }
                }
                Op::Delta(a) => {
                    if scratch[a as usize] == top {
                        top
                    } else {
                        0
                    }
                }
            };
            scratch.push(r);
        }
        scratch[root as usize]
    }

    /// Compiles a propositional formula; `slot_of` maps atom names to slots.
    pub(crate) fn compile_prop(&mut self, f: &Formula, slot_of: &impl Fn(&str) -> u32) -> u32 {
        let op = match f {
            Formula::Bottom => Op::Zero,
            Formula::Atom { rel, .. } => Op::Slot(slot_of(rel)),
            Formula::And(a, b) => Op::And(self.compile_prop(a, slot_of), self.compile_prop(b, slot_of)),
            Formula::Or(a, b) => Op::Or(self.compile_prop(a, slot_of), self.compile_prop(b, slot_of)),
            Formula::Implies(a, b) => Op::Imp(self.compile_prop(a, slot_of), self.compile_prop(b, slot_of)),
            Formula::Delta(a) => Op::Delta(self.compile_prop(a, slot_of)),
            Formula::Forall(..) | Formula::Exists(..) => unreachable!("caller checks is_propositional"),
        };
        self.push(op)
    }
}

/// Grounds first-order formulas over a universe `0..size` with a fixed
/// constant interpretation. Ground atoms become slots numbered in order of
/// first occurrence.
pub(crate) struct Grounder<'a> {
    pub(crate) program: Program,
    pub(crate) atoms: Vec<(String, Vec<usize>)>,
    index: FxHashMap<(String, Vec<usize>), u32>,
    size: usize,
    constant_of: &'a dyn Fn(&str) -> usize,
}

impl<'a> Grounder<'a> {
    pub(crate) fn new(size: usize, constant_of: &'a dyn Fn(&str) -> usize) -> Self {
        Grounder {
            program: Program::default(),
            atoms: Vec::new(),
            index: FxHashMap::default(),
            size,
            constant_of,
        }
    }

    pub(crate) fn compile(&mut self, f: &Formula) -> u32 {
        let mut env = Vec::new();
        self.go(f, &mut env)
    }

    fn go<'f>(&mut self, f: &'f Formula, env: &mut Vec<(&'f str, usize)>) -> u32 {
        let op = match f {
            Formula::Bottom => Op::Zero,
            Formula::Atom { rel, args } => {
                let elems: Vec<usize> = args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) => (self.constant_of)(c),
                        Term::Var(x) => env
                            .iter()
                            .rev()
                            .find(|(n, _)| n == x)
                            .map(|&(_, e)| e)
                            .expect("closed formula"),
                    })
                    .collect();
                let key = (rel.clone(), elems);
                let next = self.atoms.len() as u32;
                let slot = *self.index.entry(key.clone()).or_insert_with(|| next);
                if slot == next {
                    self.atoms.push(key);
                }
                Op::Slot(slot)
            }
            Formula::And(a, b) => {
                let (x, y) = (self.go(a, env), self.go(b, env));
                Op::And(x, y)
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.go(a, env), self.go(b, env));
                Op::Or(x, y)
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.go(a, env), self.go(b, env));
                Op::Imp(x, y)
            }
            Formula::Delta(a) => Op::Delta(self.go(a, env)),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut acc = None;
                for e in 0..self.size {
                    env.push((x, e));
                    let node = self.go(body, env);
                    env.pop();
                    acc = Some(match acc {
                        None => node,
                        Some(prev) if universal => self.program.push(Op::And(prev, node)),
                        Some(prev) => self.program.push(Op::Or(prev, node)),
                    });
                }
                return acc.expect("non-empty universe");
            }
        };
        self.program.push(op)
    }
}
