use super::Formula;
use crate::word::Signature;

pub fn render(f: &Formula, sig: &Signature) -> String {
    let mut out = String::new();
    write(f, &|i| sig.names().get(i).cloned().unwrap_or_else(|| format!("P{}", i + 1)), &mut out);
    out
}

/// Renders with the standard predicate names `P1, P2, …`.
pub fn render_default(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &|i| format!("P{}", i + 1), &mut out);
    out
}

/// True when the rendering ends in a quantifier body that would swallow a
/// following binary operator.
fn open_right(f: &Formula) -> bool {
    match f {
        Formula::Not(g) => open_right(g),
        Formula::ExistsFo(..)
        | Formula::ForallFo(..)
        | Formula::ExistsSo(..)
        | Formula::ForallSo(..)
        | Formula::AtLeast(..) => true,
        _ => false,
    }
}

fn write(f: &Formula, name: &dyn Fn(usize) -> String, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Less(x, y) => {
            out.push_str(x);
            out.push('<');
            out.push_str(y);
        }
        Formula::Equal(x, y) => {
            out.push_str(x);
            out.push('=');
            out.push_str(y);
        }
        Formula::Pred(i, x) => {
            out.push_str(&name(*i));
            out.push('(');
            out.push_str(x);
            out.push(')');
        }
        Formula::In(s, x) => {
            out.push_str(s);
            out.push('(');
            out.push_str(x);
            out.push(')');
        }
        Formula::Not(g) => {
            out.push('~');
            if matches!(**g, Formula::Less(..) | Formula::Equal(..)) {
                out.push('(');
                write(g, name, out);
                out.push(')');
            } else {
                write(g, name, out);
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::And(..) => " & ",
                Formula::Or(..) => " | ",
                _ => " -> ",
            };
            out.push('(');
            if open_right(a) {
                out.push('(');
                write(a, name, out);
                out.push(')');
            } else {
                write(a, name, out);
            }
            out.push_str(op);
            write(b, name, out);
            out.push(')');
        }
        Formula::ExistsFo(v, g)
        | Formula::ForallFo(v, g)
        | Formula::ExistsSo(v, g)
        | Formula::ForallSo(v, g) => {
            let q = match f {
                Formula::ExistsFo(..) => "ex",
                Formula::ForallFo(..) => "all",
                Formula::ExistsSo(..) => "EX",
                _ => "ALL",
            };
            out.push_str(q);
            out.push(' ');
            out.push_str(v);
            out.push_str(". ");
            write(g, name, out);
        }
        Formula::AtLeast(n, v, g) => {
            out.push_str(&format!("atleast {n} {v}. "));
            write(g, name, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use proptest::prelude::*;

    fn sig() -> Signature {
        Signature::standard(2)
    }

    #[test]
    fn render_examples() {
        let f = Formula::exists("x", Formula::pred(0, "x"));
        assert_eq!(render(&f, &sig()), "ex x. P1(x)");
        let g = parse("a<b & b<c & c<d", &sig()).unwrap();
        let r = render(&g, &sig());
        assert_eq!(r, "((a<b & b<c) & c<d)");
        assert_eq!(render(&parse(&r, &sig()).unwrap(), &sig()), r);
    }

    #[test]
    fn quantified_left_operands_are_wrapped() {
        let f = Formula::and(
            Formula::not(Formula::exists("x", Formula::pred(0, "x"))),
            Formula::pred(1, "y"),
        );
        let r = render(&f, &sig());
        assert_eq!(r, "((~ex x. P1(x)) & P2(y))");
        assert_eq!(parse(&r, &sig()).unwrap(), f);
    }

    fn var() -> impl Strategy<Value = String> {
        prop_oneof![Just("x".to_string()), Just("y".to_string()), Just("z".to_string())]
    }

    fn set_var() -> impl Strategy<Value = String> {
        prop_oneof![Just("X".to_string()), Just("Y".to_string())]
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (var(), var()).prop_map(|(a, b)| Formula::Less(a, b)),
            (var(), var()).prop_map(|(a, b)| Formula::Equal(a, b)),
            (0..2usize, var()).prop_map(|(i, a)| Formula::Pred(i, a)),
            (set_var(), var()).prop_map(|(s, a)| Formula::In(s, a)),
            Just(Formula::True),
            Just(Formula::False),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (var(), inner.clone()).prop_map(|(v, b)| Formula::ExistsFo(v, Box::new(b))),
                (var(), inner.clone()).prop_map(|(v, b)| Formula::ForallFo(v, Box::new(b))),
                (set_var(), inner.clone()).prop_map(|(v, b)| Formula::ExistsSo(v, Box::new(b))),
                (set_var(), inner.clone()).prop_map(|(v, b)| Formula::ForallSo(v, Box::new(b))),
                (1..3u32, var(), inner).prop_map(|(n, v, b)| Formula::AtLeast(n, v, Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_render_is_identity(f in arb_formula()) {
            let text = render(&f, &sig());
            let back = parse(&text, &sig()).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(render(&back, &sig()), text);
        }
    }
}
