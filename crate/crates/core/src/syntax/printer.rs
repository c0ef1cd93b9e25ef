use super::{Formula, Quantifier, Term};

// Binding strength of a rendered fragment: binary levels 0..=3, prefix
// forms (negation, quantifiers) 4, atomic 5.
const PREFIX: u8 = 4;
const ATOMIC: u8 = 5;

struct Rendered {
    text: String,
    prec: u8,
    /// ends in a quantifier whose scope would swallow a following operator
    open_end: bool,
}

fn level(op: super::BinOp) -> (u8, bool) {
    use super::BinOp::*;
    match op {
        Equiv => (0, false),
        Imp => (1, true),
        Or => (2, false),
        And => (3, false),
    }
}

fn paren(r: Rendered) -> String {
    format!("({})", r.text)
}

fn term(t: &Term) -> String {
    match t {
        Term::Var(v) => v.name.to_string(),
        Term::Const(c) => c.name.to_string(),
        Term::Abstract(a) => format!("<{}>", print_formula(&a.body)),
    }
}

fn render(f: &Formula) -> Rendered {
    let atomic = |text| Rendered {
        text,
        prec: ATOMIC,
        open_end: false,
    };
    match f {
        Formula::Atom { pred, args } => {
            let args: Vec<_> = args.iter().map(term).collect();
            atomic(format!("{pred}({})", args.join(", ")))
        }
        Formula::Truth(a) => atomic(format!("#{a}")),
        Formula::Identity(a, b) => atomic(format!("{} = {}", term(a), term(b))),
        Formula::IntEq(a, b) => atomic(format!("{} =in= {}", term(a), term(b))),
        Formula::TruthPred(a) => atomic(format!("T(<{}>)", print_formula(&a.body))),
        Formula::Not(g) => {
            let inner = render(g);
            let open_end = inner.open_end;
            let text = if inner.prec >= PREFIX {
                inner.text
            } else {
                paren(inner)
            };
            Rendered {
                text: format!("~{text}"),
                prec: PREFIX,
                open_end: open_end && !text.starts_with('('),
            }
        }
        Formula::Quant { kind, body, .. } => {
            let name = f
                .bound_variable()
                .map(|v| v.name.to_string())
                .unwrap_or_else(|| "_".into());
            let kw = match kind {
                Quantifier::Exists => "exists",
                Quantifier::Forall => "forall",
            };
            Rendered {
                text: format!("{kw} {name}. {}", render(body).text),
                prec: PREFIX,
                open_end: true,
            }
        }
        Formula::Bin {
            op, left, right, ..
        } => {
            let (lvl, right_assoc) = level(*op);
            let l = render(left);
            let l_min = if right_assoc { lvl + 1 } else { lvl };
            let l_text = if l.prec < l_min || l.open_end {
                paren(l)
            } else {
                l.text
            };
            let r = render(right);
            let r_min = if right_assoc { lvl } else { lvl + 1 };
            let (r_text, open_end) = if r.prec < r_min {
                (paren(r), false)
            } else {
                let o = r.open_end;
                (r.text, o)
            };
            Rendered {
                text: format!("{l_text} {} {r_text}", op.symbol()),
                prec: lvl,
                open_end,
            }
        }
    }
}

/// Renders `f` in the surface grammar. Closed formulas built by the parser
/// re-parse to the same AST.
pub fn print_formula(f: &Formula) -> String {
    render(f).text
}
