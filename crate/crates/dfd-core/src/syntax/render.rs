//! Deterministic pretty-printer; `parse(render(f))` is structurally `f`.

use super::{Formula, Term, TermSet, Vocabulary};

pub fn render_term(t: &Term, voc: &Vocabulary) -> String {
    match t {
        Term::Var(v) => voc.var_name(*v).to_string(),
        Term::Next(inner) => format!("O{}", render_term(inner, voc)),
        Term::App(f, args) => {
            if args.is_empty() {
                voc.func_name(*f).to_string()
            } else {
                let rendered: Vec<String> = args.iter().map(|a| render_term(a, voc)).collect();
                format!("{}({})", voc.func_name(*f), rendered.join(","))
            }
        }
    }
}

pub fn render_term_set(x: &TermSet, voc: &Vocabulary) -> String {
    let rendered: Vec<String> = x.iter().map(|t| render_term(t, voc)).collect();
    rendered.join(",")
}

/// Precedence levels used when deciding parentheses. Larger binds tighter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    And,
    Unary,
    Atom,
}

fn level(f: &Formula) -> Level {
    match f {
        // identities sit at conjunction level so that `!x == y` never
        // appears; it prints as `!(x == y)`
        Formula::And(..) | Formula::Ident(..) => Level::And,
        Formula::Not(_) | Formula::Next(_) | Formula::DepMod(..) => Level::Unary,
        Formula::Pred(..) | Formula::DepAtom(..) => Level::Atom,
    }
}

fn render_at(f: &Formula, voc: &Vocabulary, min: Level, out: &mut String) {
    let needs_parens = level(f) < min;
    if needs_parens {
        out.push('(');
    }
    match f {
        Formula::Pred(p, args) => {
            out.push_str(voc.pred_name(*p));
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&render_term(a, voc));
            }
            out.push(')');
        }
        Formula::Ident(x, y) => {
            out.push_str(&render_term(x, voc));
            out.push_str(" == ");
            out.push_str(&render_term(y, voc));
        }
        Formula::Not(inner) => {
            out.push('!');
            render_at(inner, voc, Level::Unary, out);
        }
        Formula::Next(inner) => {
            out.push_str("O ");
            render_at(inner, voc, Level::Unary, out);
        }
        Formula::DepMod(x, inner) => {
            out.push_str("D[");
            out.push_str(&render_term_set(x, voc));
            out.push_str("] ");
            render_at(inner, voc, Level::Unary, out);
        }
        Formula::DepAtom(x, y) => {
            out.push_str("dep[");
            out.push_str(&render_term_set(x, voc));
            out.push_str("] ");
            out.push_str(&render_term(y, voc));
        }
        Formula::And(a, b) => {
            // Left-associative chain: the left child may stay unparenthesized.
            render_at(a, voc, Level::And, out);
            out.push_str(" & ");
            // a bare identity is fine here: `==` only ever grabs one term
            let rhs_min = if matches!(**b, Formula::Ident(..)) {
                Level::And
            } else {
                Level::Unary
            };
            render_at(b, voc, rhs_min, out);
        }
    }
    if needs_parens {
        out.push(')');
    }
}

pub fn render(f: &Formula, voc: &Vocabulary) -> String {
    let mut out = String::new();
    render_at(f, voc, Level::And, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, Dialect, PredId, Vocabulary};
    use super::*;
    use std::collections::BTreeMap;

    fn voc() -> Vocabulary {
        Vocabulary::new(
            vec!["x".into(), "y".into()],
            BTreeMap::from([("P".into(), 1)]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn dep_atom_repr() {
        let voc = voc();
        let f = Formula::DepAtom(TermSet::singleton(Term::var(0)), Term::var(1));
        assert_eq!(render(&f, &voc), "dep[x] y");
    }

    #[test]
    fn next_pred_repr() {
        let voc = voc();
        let f = Formula::Pred(PredId(0), vec![Term::var(0).next()]).next();
        assert_eq!(render(&f, &voc), "O P(Ox)");
    }

    #[test]
    fn and_not_parenthesization() {
        let voc = voc();
        let p = |s: &str| parse_formula(s, &voc, Dialect::Core).unwrap();
        let f = p("P(x)").and(p("P(y)")).not();
        assert_eq!(render(&f, &voc), "!(P(x) & P(y))");
        let g = p("P(x)").not().and(p("P(y)"));
        assert_eq!(render(&g, &voc), "!P(x) & P(y)");
        let chain = p("P(x)").and(p("P(y)")).and(p("P(x)"));
        assert_eq!(render(&chain, &voc), "P(x) & P(y) & P(x)");
        let right = p("P(x)").and(p("P(y)").and(p("P(x)")));
        assert_eq!(render(&right, &voc), "P(x) & (P(y) & P(x))");
    }

    #[test]
    fn round_trip_examples() {
        let voc = voc();
        for src in [
            "dep[x] y",
            "D[x,Ox] O O P(x)",
            "!(P(x) & !D[] P(y))",
            "D[x] (P(x) & P(y))",
            "O !dep[Ox,y] OOy",
        ] {
            let f = parse_formula(src, &voc, Dialect::Core).unwrap();
            let printed = render(&f, &voc);
            let again = parse_formula(&printed, &voc, Dialect::Core).unwrap();
            assert_eq!(f, again, "round trip failed for {src} -> {printed}");
        }
    }
}
