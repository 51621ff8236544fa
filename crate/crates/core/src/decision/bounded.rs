//! Bounded countermodel search for first-order 1-entailment.
//!
//! For each universe size and each interpretation of the constants (up to
//! renaming of elements) the formulas are grounded into programs over the
//! ground atoms that actually occur. With `N` such atoms the canonical chain
//! of `N+2` values is exact for that grounding, so the only incompleteness
//! left is the bound on the universe size.

use crate::exec::Exec;
use crate::semantics::{TruthValue, Valuation};
use crate::syntax::{language_of_all, Formula, Theory};

use super::program::{Grounder, Program};
use super::{DecisionError, EntailmentVerdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedOptions {
    pub max_universe: usize,
    /// Relation values to search; `None` uses the canonical chain per grounding.
    pub grid: Option<Vec<TruthValue>>,
    /// Largest total number of candidate valuations the search may visit.
    pub cap: u128,
}

impl Default for BoundedOptions {
    fn default() -> Self {
        BoundedOptions {
            max_universe: 3,
            grid: None,
            cap: 1 << 26,
        }
    }
}

/// Element names `a, b, …, z`, then `e26, e27, …`.
pub fn element_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("e{i}")
    }
}

pub fn fo_check_bounded(
    theory: &Theory,
    formula: &Formula,
    max_universe: usize,
    grid: Option<&[TruthValue]>,
) -> Result<EntailmentVerdict, DecisionError> {
    let opts = BoundedOptions {
        max_universe,
        grid: grid.map(<[TruthValue]>::to_vec),
        ..BoundedOptions::default()
    };
    fo_check_bounded_with(theory, formula, &opts, Exec::default())
}

struct Job {
    size: usize,
    constants: Vec<usize>,
    atoms: Vec<(String, Vec<usize>)>,
    program: Program,
    premises: Vec<u32>,
    conclusion: u32,
    grid: Vec<TruthValue>,
    points: usize,
}

impl Job {
    fn refutes(&self, mut index: usize, ranks: &mut [u8], scratch: &mut Vec<u8>) -> bool {
        let base = self.grid.len();
        for r in ranks.iter_mut() {
            *r = (index % base) as u8;
            index /= base;
        }
        let top = (base - 1) as u8;
        scratch.clear();
        for &p in &self.premises {
            if self.program.extend(p, ranks, top, scratch) != top {
                return false;
            }
        }
        self.program.extend(self.conclusion, ranks, top, scratch) != top
    }
}

/// Interpretations of `k` constants in `0..size`, each listed once up to a
/// renaming of elements (restricted growth strings), in lexicographic order.
fn constant_maps(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, k: usize, size: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        let limit = prefix.iter().map(|&e| e + 1).max().unwrap_or(0).min(size - 1);
        for e in 0..=limit {
            prefix.push(e);
            go(prefix, k, size, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), k, size, &mut out);
    out
}

fn check_grid(grid: &[TruthValue]) -> Result<(), DecisionError> {
    let ok = grid.len() >= 2
        && grid.len() <= 255
        && grid[0].is_zero()
        && grid[grid.len() - 1].is_one()
        && grid.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(DecisionError::BadGrid)
    }
}

/// Searches every valuation with at most `opts.max_universe` elements for one
/// that models `theory` and gives `formula` a value below 1. A positive
/// verdict is flagged `bounded`.
pub fn fo_check_bounded_with(
    theory: &Theory,
    formula: &Formula,
    opts: &BoundedOptions,
    exec: Exec,
) -> Result<EntailmentVerdict, DecisionError> {
    if opts.max_universe == 0 {
        return Err(DecisionError::BadBound);
    }
    if let Some(g) = &opts.grid {
        check_grid(g)?;
    }
    for f in theory.iter().chain([formula]) {
        if !f.is_closed() {
            return Err(DecisionError::OpenFormula(f.to_string()));
        }
    }
    let sig = language_of_all(theory.iter().chain([formula]));
    let mut constants: Vec<String> = sig.constants().iter().cloned().collect();
    constants.sort_by(|a, b| crate::syntax::cmp_names(a, b));

    let mut jobs = Vec::new();
    let mut total: u128 = 0;
    for size in 1..=opts.max_universe {
        for map in constant_maps(constants.len(), size) {
            let lookup = |c: &str| map[constants.iter().position(|k| k == c).expect("constant in language")];
            let mut g = Grounder::new(size, &lookup);
            let premises = theory.iter().map(|f| g.compile(f)).collect();
            let conclusion = g.compile(formula);
            let n = g.atoms.len();
            let grid = match &opts.grid {
                Some(grid) => grid.clone(),
                None if n + 2 <= 255 => (0..=n + 1).map(|i| TruthValue::fraction(i, n + 1)).collect(),
                None => {
                    return Err(DecisionError::BudgetExceeded {
                        space: u128::MAX,
                        cap: opts.cap,
                    })
                }
            };
            let points = (grid.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            total = total.saturating_add(points);
            if total > opts.cap {
                return Err(DecisionError::BudgetExceeded {
                    space: total,
                    cap: opts.cap,
                });
            }
            jobs.push(Job {
                size,
                constants: map.clone(),
                atoms: g.atoms,
                program: g.program,
                premises,
                conclusion,
                grid,
                points: points as usize,
            });
        }
    }

    for job in &jobs {
        let hit = exec.find_first(job.points, |i| {
            let mut ranks = vec![0u8; job.atoms.len()];
            let mut scratch = Vec::with_capacity(job.program.len());
            job.refutes(i, &mut ranks, &mut scratch).then_some(i)
        });
        if let Some(index) = hit {
            let mut v = Valuation::new((0..job.size).map(element_name))?;
            for (rel, &arity) in sig.relations() {
                v.declare_relation(rel, arity, TruthValue::ZERO);
            }
            let base = job.grid.len();
            let mut rest = index;
            for (rel, args) in &job.atoms {
                v.set(rel, args, job.grid[rest % base])?;
                rest /= base;
            }
            for (c, &e) in constants.iter().zip(&job.constants) {
                v.set_constant(c, e)?;
            }
            return Ok(EntailmentVerdict {
                holds: false,
                bounded: true,
                witness: Some(v),
            });
        }
    }
    Ok(EntailmentVerdict {
        holds: true,
        bounded: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{evaluate_closed, models};
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_relation("R", 1).unwrap();
        s.add_relation("S", 2).unwrap();
        s.add_constant("c").unwrap();
        s.add_constant("d").unwrap();
        s
    }

    fn f(t: &str) -> Formula {
        parse_formula(t, &sig()).unwrap()
    }

    fn check(premise: &str, goal: &str, bound: usize) -> EntailmentVerdict {
        let t = Theory::new([f(premise)]).unwrap();
        fo_check_bounded(&t, &f(goal), bound, None).unwrap()
    }

    #[test]
    fn restricted_growth_strings() {
        assert_eq!(constant_maps(0, 3), vec![Vec::<usize>::new()]);
        assert_eq!(constant_maps(2, 1), vec![vec![0, 0]]);
        assert_eq!(constant_maps(2, 3), vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(constant_maps(3, 3).len(), 5);
    }

    #[test]
    fn instantiation_has_no_countermodel() {
        for bound in 1..=3 {
            let v = check("forall x. R(x)", "R(c)", bound);
            assert!(v.holds && v.bounded);
            assert!(check("~forall x. R(x)", "exists x. ~R(x)", bound).holds);
        }
    }

    #[test]
    fn existential_does_not_give_universal() {
        let v = check("exists x. R(x)", "forall x. R(x)", 3);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.universe(), ["a", "b"]);
        assert_eq!(w.get("R", &[0]).unwrap(), TruthValue::ONE);
        assert_eq!(w.get("R", &[1]).unwrap(), TruthValue::ZERO);
        assert!(!check("exists x. R(x)", "forall x. R(x)", 1).witness.is_some());
    }

    #[test]
    fn witnesses_revalidate() {
        let t = Theory::new([f("forall x. exists y. S(x,y)")]).unwrap();
        let goal = f("exists y. forall x. S(x,y)");
        let v = fo_check_bounded(&t, &goal, 2, None).unwrap();
        let w = v.witness.unwrap();
        assert!(models(&w, &t).unwrap());
        assert!(!evaluate_closed(&w, &goal).unwrap().is_one());
    }

    #[test]
    fn fixed_grid_and_budget() {
        let grid = [TruthValue::ZERO, TruthValue::new(1, 2).unwrap(), TruthValue::ONE];
        let t = Theory::new([f("forall x. forall y. S(x,y)")]).unwrap();
        assert!(fo_check_bounded(&t, &f("S(c,d)"), 3, Some(&grid)).unwrap().holds);
        let bad = [TruthValue::ZERO, TruthValue::new(1, 2).unwrap()];
        assert_eq!(
            fo_check_bounded(&t, &f("S(c,d)"), 2, Some(&bad)),
            Err(DecisionError::BadGrid)
        );
        let tiny = BoundedOptions {
            max_universe: 3,
            grid: None,
            cap: 10,
        };
        assert!(matches!(
            fo_check_bounded_with(&t, &f("S(c,d)"), &tiny, Exec::Sequential),
            Err(DecisionError::BudgetExceeded { .. })
        ));
        assert_eq!(
            fo_check_bounded(&t, &f("S(c,d)"), 0, None),
            Err(DecisionError::BadBound)
        );
    }

    #[test]
    fn open_input_rejected() {
        let t = Theory::empty();
        assert!(matches!(
            fo_check_bounded(&t, &f("R(x)"), 2, None),
            Err(DecisionError::OpenFormula(_))
        ));
    }
}
