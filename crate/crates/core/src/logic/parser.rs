//! Recursive-descent parser for the ASCII formula grammar:
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*          left-associative
//! imp     := or ("->" imp)?            right-associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | "top" | "bot" | ATOM
//! ATOM    := [a-z][a-z0-9_]*
//! ```

use super::{Formula, LogicError, Signature};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Not => "`!`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Implies => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, LogicError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Token::Iff
            }
            b'a'..=b'z' => {
                while i + 1 < bytes.len()
                    && matches!(bytes[i + 1], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    i += 1;
                }
                Token::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(LogicError::Syntax {
                    position: start,
                    expected: vec!["a formula token".into()],
                    found: text[start..].chars().next().map(String::from).unwrap_or_default(),
                })
            }
        };
        tokens.push((start, tok));
        i += 1;
    }
    tokens.push((text.len(), Token::End));
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if t != Token::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> LogicError {
        let (position, tok) = &self.tokens[self.pos];
        LogicError::Syntax {
            position: *position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.describe(),
        }
    }

    fn iff(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Token::Iff {
            self.bump();
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.or()?;
        if *self.peek() == Token::Implies {
            self.bump();
            return Ok(Formula::implies(lhs, self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Token::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Token::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`)`", "`&`", "`|`", "`->`", "`<->`"]));
                }
                self.bump();
                Ok(inner)
            }
            Token::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "top" => Ok(Formula::Top),
                    "bot" => Ok(Formula::Bot),
                    _ if self.sig.index_of(&name).is_some() => Ok(Formula::Atom(name)),
                    _ => Err(LogicError::UnknownAtom(name)),
                }
            }
            _ => Err(self.error(&["atom", "`top`", "`bot`", "`!`", "`(`"])),
        }
    }
}

/// Parses `text` against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        sig,
    };
    let f = parser.iff()?;
    if *parser.peek() != Token::End {
        return Err(parser.error(&["`&`", "`|`", "`->`", "`<->`", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(a: &str) -> Formula {
        Formula::atom(a)
    }

    #[test]
    fn grammar_examples() {
        let sig = Signature::parse("a b c").unwrap();
        assert_eq!(
            parse_formula("a & b", &sig).unwrap(),
            Formula::and(atom("a"), atom("b"))
        );
        assert_eq!(
            parse_formula("a -> b -> c", &sig).unwrap(),
            Formula::implies(atom("a"), Formula::implies(atom("b"), atom("c")))
        );
        assert_eq!(
            parse_formula("a <-> b <-> c", &sig).unwrap(),
            Formula::iff(Formula::iff(atom("a"), atom("b")), atom("c"))
        );
        assert_eq!(
            parse_formula("!a|b&c", &sig).unwrap(),
            Formula::or(Formula::not(atom("a")), Formula::and(atom("b"), atom("c")))
        );
        assert_eq!(parse_formula(" ( top ) ", &sig).unwrap(), Formula::Top);
    }

    #[test]
    fn unknown_atom() {
        let sig = Signature::parse("a b").unwrap();
        assert_eq!(
            parse_formula("a & q", &sig),
            Err(LogicError::UnknownAtom("q".into()))
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        let sig = Signature::parse("a b").unwrap();
        match parse_formula("a & ", &sig) {
            Err(LogicError::Syntax { position, found, .. }) => {
                assert_eq!(position, 4);
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_formula("(a | b", &sig) {
            Err(LogicError::Syntax { expected, .. }) => assert!(expected.contains(&"`)`".to_string())),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_formula("a b", &sig),
            Err(LogicError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_formula("a # b", &sig),
            Err(LogicError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_formula("a - b", &sig),
            Err(LogicError::Syntax { .. })
        ));
    }
}
