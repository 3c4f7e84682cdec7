use super::{is_fo_name, is_so_name, Formula};
use crate::error::{Error, Result};
use crate::word::Signature;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u32),
    Less,
    Eq,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Dot,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::Less => "`<`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Not => "`~`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Dot => "`.`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '<' => {
                i += 1;
                Tok::Less
            }
            '=' => {
                i += 1;
                Tok::Eq
            }
            '~' => {
                i += 1;
                Tok::Not
            }
            '&' => {
                i += 1;
                Tok::And
            }
            '|' => {
                i += 1;
                Tok::Or
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            c if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i].parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "number too large".into(),
                })?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

const KEYWORDS: [&str; 7] = ["ex", "all", "EX", "ALL", "atleast", "true", "false"];

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
}

/// Parses a formula. Grammar (whitespace insignificant):
///
/// ```text
/// f ::= f -> f | f '|' f | f & f | ~f | (f)
///     | ex x. f | all x. f | EX X. f | ALL X. f | atleast N x. f
///     | x<y | x=y | P(x) | X(x) | true | false
/// ```
///
/// `&` binds tighter than `|`, which binds tighter than `->` (right
/// associative); quantifier bodies extend as far right as possible.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
    };
    let f = p.implication()?;
    p.expect(Tok::End)?;
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: String) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg,
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!(
                "expected {}, found {}",
                describe(&t),
                describe(self.peek())
            ))
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(word) => match word.as_str() {
                "ex" | "all" => {
                    self.bump();
                    let v = self.fo_var()?;
                    self.expect(Tok::Dot)?;
                    let body = self.implication()?;
                    Ok(if word == "ex" {
                        Formula::ExistsFo(v, Box::new(body))
                    } else {
                        Formula::ForallFo(v, Box::new(body))
                    })
                }
                "EX" | "ALL" => {
                    self.bump();
                    let v = self.so_var()?;
                    self.expect(Tok::Dot)?;
                    let body = self.implication()?;
                    Ok(if word == "EX" {
                        Formula::ExistsSo(v, Box::new(body))
                    } else {
                        Formula::ForallSo(v, Box::new(body))
                    })
                }
                "atleast" => {
                    self.bump();
                    let n = match self.bump() {
                        Tok::Num(n) => n,
                        other => {
                            return self.err(format!("expected a count, found {}", describe(&other)))
                        }
                    };
                    let v = self.fo_var()?;
                    self.expect(Tok::Dot)?;
                    let body = self.implication()?;
                    Ok(Formula::AtLeast(n, v, Box::new(body)))
                }
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                _ => self.atom(),
            },
            other => self.err(format!("expected a formula, found {}", describe(&other))),
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.err(format!("expected a variable, found {}", describe(&other))),
        }
    }

    fn fo_var(&mut self) -> Result<String> {
        let pos = self.pos();
        let v = self.ident()?;
        if !is_fo_name(&v) {
            return Err(Error::VariableOrder(format!(
                "`{v}` at {pos} is not a first-order variable (lowercase)"
            )));
        }
        Ok(v)
    }

    fn so_var(&mut self) -> Result<String> {
        let pos = self.pos();
        let v = self.ident()?;
        if !is_so_name(&v) {
            return Err(Error::VariableOrder(format!(
                "`{v}` at {pos} is not a second-order variable (uppercase)"
            )));
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<Formula> {
        let pos = self.pos();
        let name = self.ident()?;
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let x = self.fo_var()?;
                self.expect(Tok::RParen)?;
                if let Some(i) = self.sig.index_of(&name) {
                    return Ok(Formula::Pred(i, x));
                }
                if !is_so_name(&name) {
                    return Err(Error::VariableOrder(format!(
                        "`{name}` at {pos} is applied like a set variable"
                    )));
                }
                if looks_like_predicate(&name) {
                    return Err(Error::UnknownPredicate(name));
                }
                Ok(Formula::In(name, x))
            }
            Tok::Less | Tok::Eq => {
                let less = *self.peek() == Tok::Less;
                self.bump();
                if !is_fo_name(&name) {
                    return Err(Error::VariableOrder(format!(
                        "`{name}` at {pos} is compared like a first-order variable"
                    )));
                }
                let y = self.fo_var()?;
                Ok(if less {
                    Formula::Less(name, y)
                } else {
                    Formula::Equal(name, y)
                })
            }
            other => self.err(format!("expected `<`, `=` or `(`, found {}", describe(other))),
        }
    }
}

/// `P` followed by digits is reserved for signature predicates.
fn looks_like_predicate(name: &str) -> bool {
    name.len() > 1 && name.starts_with('P') && name[1..].chars().all(|c| c.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::standard(2)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("ex x. P1(x)", &sig()).unwrap(),
            Formula::exists("x", Formula::pred(0, "x"))
        );
        assert_eq!(
            parse("x < y & ~(x = y)", &sig()).unwrap(),
            Formula::and(
                Formula::less("x", "y"),
                Formula::not(Formula::equal("x", "y"))
            )
        );
        assert!(matches!(
            parse("ex x", &sig()),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn precedence_and_scope() {
        let f = parse("P1(x) | P2(x) & x<y -> x=y", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::or(
                    Formula::pred(0, "x"),
                    Formula::and(Formula::pred(1, "x"), Formula::less("x", "y"))
                ),
                Formula::equal("x", "y")
            )
        );
        let g = parse("ex x. P1(x) & P2(x)", &sig()).unwrap();
        assert!(matches!(g, Formula::ExistsFo(_, ref b) if matches!(**b, Formula::And(..))));
        let h = parse("a -> b -> c", &Signature::new(["Q"]).unwrap());
        assert!(h.is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("P3(x)", &sig()),
            Err(Error::UnknownPredicate(_))
        ));
        assert!(matches!(
            parse("ex X. X(y)", &sig()),
            Err(Error::VariableOrder(_))
        ));
        assert!(matches!(
            parse("x(y)", &sig()),
            Err(Error::VariableOrder(_))
        ));
        assert!(matches!(
            parse("X < y", &sig()),
            Err(Error::VariableOrder(_))
        ));
        assert!(matches!(parse("x < ", &sig()), Err(Error::Syntax { pos: 4, .. })));
        assert!(parse("x # y", &sig()).is_err());
    }

    #[test]
    fn set_variables_and_counting() {
        let f = parse("EX X. all x. X(x)", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::exists_set("X", Formula::forall("x", Formula::In("X".into(), "x".into())))
        );
        let g = parse("atleast 2 x. P1(x)", &sig()).unwrap();
        assert_eq!(g, Formula::AtLeast(2, "x".into(), Box::new(Formula::pred(0, "x"))));
    }
}
