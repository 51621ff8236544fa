use super::formula::{Formula, Term};

// Binding strength of the printed form; larger binds tighter.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;
const ATOM: u8 = 6;
const QUANT: u8 = 0;

/// The surface form a node is printed as, after re-sugaring.
enum View<'a> {
    Top,
    Not(&'a Formula),
    Tilde(&'a Formula),
    Iff(&'a Formula, &'a Formula),
    Plain,
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Implies(a, b) if **b == Formula::Bottom => match &**a {
            Formula::Bottom => View::Top,
            Formula::Delta(inner) => View::Tilde(inner),
            _ => View::Not(a),
        },
        Formula::And(l, r) => match (&**l, &**r) {
            (Formula::Implies(a, b), Formula::Implies(b2, a2)) if a == a2 && b == b2 => View::Iff(a, b),
            _ => View::Plain,
        },
        _ => View::Plain,
    }
}

fn strength(f: &Formula) -> u8 {
    match view(f) {
        View::Top => ATOM,
        View::Not(_) | View::Tilde(_) => PREFIX,
        View::Iff(..) => IFF,
        View::Plain => match f {
            Formula::Atom { .. } | Formula::Bottom => ATOM,
            Formula::And(..) => AND,
            Formula::Or(..) => OR,
            Formula::Implies(..) => IMP,
            Formula::Delta(_) => PREFIX,
            Formula::Forall(..) | Formula::Exists(..) => QUANT,
        },
    }
}

/// Prints in the ASCII surface syntax accepted by the parser, re-sugaring
/// `¬`, `⊤`, `∼` and `↔`.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, &mut out);
    out
}

fn write(f: &Formula, min: u8, out: &mut String) {
    let s = strength(f);
    // Quantifiers extend to the right, so they are wrapped whenever nested.
    let paren = s < min || (s == QUANT && min > 0);
    if paren {
        out.push('(');
    }
    match view(f) {
        View::Top => out.push_str("top"),
        View::Not(a) => {
            out.push('!');
            write(a, PREFIX, out);
        }
        View::Tilde(a) => {
            out.push('~');
            write(a, PREFIX, out);
        }
        View::Iff(a, b) => binary(a, " <-> ", b, IFF, IMP, out),
        View::Plain => match f {
            Formula::Atom { rel, args } => {
                out.push_str(rel);
                if !args.is_empty() {
                    out.push('(');
                    for (i, t) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        out.push_str(match t {
                            Term::Var(v) | Term::Const(v) => v,
                        });
                    }
                    out.push(')');
                }
            }
            Formula::Bottom => out.push_str("bot"),
            Formula::And(a, b) => binary(a, " & ", b, AND, PREFIX, out),
            Formula::Or(a, b) => binary(a, " | ", b, OR, AND, out),
            Formula::Implies(a, b) => binary(a, " -> ", b, OR, IMP, out),
            Formula::Delta(a) => {
                out.push_str("D ");
                write(a, PREFIX, out);
            }
            Formula::Forall(v, a) => {
                out.push_str(&format!("forall {v}. "));
                write(a, 0, out);
            }
            Formula::Exists(v, a) => {
                out.push_str(&format!("exists {v}. "));
                write(a, 0, out);
            }
        },
    }
    if paren {
        out.push(')');
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, left_min: u8, right_min: u8, out: &mut String) {
    write(a, left_min, out);
    out.push_str(op);
    write(b, right_min, out);
}
