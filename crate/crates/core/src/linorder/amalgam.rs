//! Amalgamation of bounded chains over a common sub-chain.
//!
//! The two targets are first relabelled so that the image of `B0` is shared
//! and everything else is disjoint. The relation `⊑` on the union is then
//!
//! 1. `x, y ∈ B1` and `x ≤₁ y`;
//! 2. `x, y ∈ B2` and `x ≤₂ y`;
//! 3. `x ∈ B1∖B2`, `y ∈ B2` and `x ≤₁ α ≤₂ y` for some `α ∈ B0`;
//! 4. `x ∈ B2∖B1`, `y ∈ B1` and `x ≤₂ α ≤₁ y` for some `α ∈ B0`.
//!
//! It is checked to be a partial order and linearized with `B1` elements
//! preferred, then by name.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{linear_extension_by, BoundedChain, LinHom, LinOrderError, StrictPartialOrder};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamResult {
    pub chain: BoundedChain,
    pub g1: LinHom,
    pub g2: LinHom,
}

impl AmalgamResult {
    /// DOT rendering of the amalgam, coloured by origin.
    pub fn to_dot(&self) -> String {
        let from1: BTreeSet<&str> = self.g1.map.values().map(String::as_str).collect();
        let from2: BTreeSet<&str> = self.g2.map.values().map(String::as_str).collect();
        let mut out = String::from("digraph amalgam {\n  rankdir=BT;\n");
        for e in self.chain.elements() {
            let color = match (from1.contains(e.as_str()), from2.contains(e.as_str())) {
                (true, true) => "black",
                (true, false) => "blue",
                _ => "red",
            };
            writeln!(out, "  \"{}\" [color={color}];", e.replace('"', "\\\"")).expect("write to string");
        }
        for w in self.chain.elements().windows(2) {
            writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                w[0].replace('"', "\\\""),
                w[1].replace('"', "\\\"")
            )
            .expect("write to string");
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Origin {
    Shared,
    Left,
    Right,
}

struct Node {
    name: String,
    origin: Origin,
    // Positions in B1 and B2, where the node belongs to them.
    p1: Option<usize>,
    p2: Option<usize>,
}

/// Amalgamates `f1: B0 → B1` and `f2: B0 → B2`, returning `B` with
/// `g1: B1 → B` and `g2: B2 → B` such that `g1∘f1 = g2∘f2`.
pub fn amalgamate(
    b0: &BoundedChain,
    b1: &BoundedChain,
    b2: &BoundedChain,
    f1: &LinHom,
    f2: &LinHom,
) -> Result<AmalgamResult, LinOrderError> {
    for (f, src, dst, name) in [(f1, b0, b1, "f1"), (f2, b0, b2, "f2")] {
        if &f.source != src || &f.target != dst {
            return Err(LinOrderError::InvalidHom(format!(
                "{name} does not go between the given chains"
            )));
        }
        f.check()
            .map_err(|e| LinOrderError::InvalidHom(format!("{name}: {e}")))?;
    }

    // Relabelling: B0 elements become shared nodes named after their B1
    // image; the rest of B1 and B2 become private nodes.
    let mut nodes: Vec<Node> = Vec::new();
    let mut of1 = vec![usize::MAX; b1.len()];
    let mut of2 = vec![usize::MAX; b2.len()];
    for a in b0.elements() {
        let p1 = b1.position(f1.apply(a).expect("total")).expect("valid");
        let p2 = b2.position(f2.apply(a).expect("total")).expect("valid");
        of1[p1] = nodes.len();
        of2[p2] = nodes.len();
        nodes.push(Node {
            name: b1.elements()[p1].clone(),
            origin: Origin::Shared,
            p1: Some(p1),
            p2: Some(p2),
        });
    }
    for (p1, e) in b1.elements().iter().enumerate() {
        if of1[p1] == usize::MAX {
            of1[p1] = nodes.len();
            nodes.push(Node {
                name: e.clone(),
                origin: Origin::Left,
                p1: Some(p1),
                p2: None,
            });
        }
    }
    let mut taken: BTreeSet<String> = nodes.iter().map(|n| n.name.clone()).collect();
    for (p2, e) in b2.elements().iter().enumerate() {
        if of2[p2] == usize::MAX {
            let mut name = e.clone();
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            of2[p2] = nodes.len();
            nodes.push(Node {
                name,
                origin: Origin::Right,
                p1: None,
                p2: Some(p2),
            });
        }
    }

    let shared: Vec<&Node> = nodes.iter().filter(|n| n.origin == Origin::Shared).collect();
    let below = |x: &Node, y: &Node| -> bool {
        match (x.p1.zip(y.p1), x.p2.zip(y.p2)) {
            (Some((a, b)), _) if a <= b => true,
            (_, Some((a, b))) if a <= b => true,
            _ => match (x.origin, y.p2, y.p1) {
                (Origin::Left, Some(q), _) => {
                    let p = x.p1.expect("left node in B1");
                    shared
                        .iter()
                        .any(|s| p <= s.p1.expect("shared") && s.p2.expect("shared") <= q)
                }
                (Origin::Right, _, Some(q)) => {
                    let p = x.p2.expect("right node in B2");
                    shared
                        .iter()
                        .any(|s| p <= s.p2.expect("shared") && s.p1.expect("shared") <= q)
                }
                _ => false,
            },
        }
    };

    let n = nodes.len();
    let rel: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| below(&nodes[i], &nodes[j])).collect())
        .collect();
    for i in 0..n {
        if !rel[i][i] {
            return Err(LinOrderError::Internal(format!(
                "⊑ is not reflexive at `{}`",
                nodes[i].name
            )));
        }
        for j in 0..n {
            if i != j && rel[i][j] && rel[j][i] {
                return Err(LinOrderError::Internal(format!(
                    "⊑ is not antisymmetric on `{}`, `{}`",
                    nodes[i].name, nodes[j].name
                )));
            }
            for k in 0..n {
                if rel[i][j] && rel[j][k] && !rel[i][k] {
                    return Err(LinOrderError::Internal(format!(
                        "⊑ is not transitive on `{}`, `{}`, `{}`",
                        nodes[i].name, nodes[j].name, nodes[k].name
                    )));
                }
            }
        }
    }

    let names: Vec<&str> = nodes.iter().map(|n| n.name.as_str()).collect();
    let pairs: Vec<(&str, &str)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && rel[i][j])
        .map(|(i, j)| (names[i], names[j]))
        .collect();
    let order = StrictPartialOrder::new(&names, &pairs)?;
    let chain = linear_extension_by(&order, |i| (nodes[i].origin == Origin::Right, nodes[i].name.clone()))?;

    let g1 = LinHom::from_images(b1.clone(), chain.clone(), of1.iter().map(|&i| nodes[i].name.clone()));
    let g2 = LinHom::from_images(b2.clone(), chain.clone(), of2.iter().map(|&i| nodes[i].name.clone()));
    g1.check().map_err(|e| LinOrderError::Internal(format!("g1: {e}")))?;
    g2.check().map_err(|e| LinOrderError::Internal(format!("g2: {e}")))?;
    for a in b0.elements() {
        let left = g1.apply(f1.apply(a).expect("total"));
        let right = g2.apply(f2.apply(a).expect("total"));
        if left != right {
            return Err(LinOrderError::Internal(format!("square does not commute at `{a}`")));
        }
    }
    Ok(AmalgamResult { chain, g1, g2 })
}

/// Input format of the `amalgamate` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmalgamInput {
    pub b0: Vec<String>,
    pub b1: Vec<String>,
    pub b2: Vec<String>,
    pub f1: BTreeMap<String, String>,
    pub f2: BTreeMap<String, String>,
}

impl AmalgamInput {
    pub fn run(&self) -> Result<AmalgamResult, LinOrderError> {
        let b0 = BoundedChain::new(self.b0.clone())?;
        let b1 = BoundedChain::new(self.b1.clone())?;
        let b2 = BoundedChain::new(self.b2.clone())?;
        let f1 = LinHom::new(b0.clone(), b1.clone(), self.f1.clone());
        let f2 = LinHom::new(b0.clone(), b2.clone(), self.f2.clone());
        amalgamate(&b0, &b1, &b2, &f1, &f2)
    }
}
