//! Lexer and recursive-descent parser shared by formulas, sequents and
//! hypersequents.
//!
//! All three rendering styles are accepted on input, so text produced by any
//! renderer parses back.

use thiserror::Error;

use crate::formula::{Const, Formula};
use crate::sequent::{Hypersequent, Sequent};

/// A syntax error. `position` is a 1-based character offset; the end of input
/// is reported as one past the last character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(Const),
    Neg,
    Tensor,
    Par,
    With,
    Plus,
    Limp,
    DiaT,
    BoxT,
    BoxK,
    DiaK,
    LParen,
    RParen,
    Comma,
    Seq,
    Bar,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier '{name}'"),
            Tok::Const(c) => format!("constant '{}'", Formula::Const(*c)),
            Tok::Neg => "'~'".into(),
            Tok::Tensor => "'*'".into(),
            Tok::Par => "'+'".into(),
            Tok::With => "'/\\'".into(),
            Tok::Plus => "'\\/'".into(),
            Tok::Limp => "'->'".into(),
            Tok::DiaT => "'<.>'".into(),
            Tok::BoxT => "'[.]'".into(),
            Tok::BoxK => "'[]'".into(),
            Tok::DiaK => "'<>'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Seq => "'=>'".into(),
            Tok::Bar => "'|'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer { chars: text.chars().collect(), pos: 0 }
    }

    fn error(&self, at: usize, expected: &str) -> ParseError {
        let found = match self.chars.get(at) {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        };
        ParseError { position: at + 1, expected: expected.into(), found }
    }

    fn starts_with(&self, s: &str) -> bool {
        let mut i = self.pos;
        for c in s.chars() {
            if self.chars.get(i) != Some(&c) {
                return false;
            }
            i += 1;
        }
        true
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
                self.pos += 1;
            }
            let start = self.pos;
            let Some(&c) = self.chars.get(self.pos) else {
                out.push((Tok::End, start + 1));
                return Ok(out);
            };
            let fixed: &[(&str, Tok)] = &[
                ("<.>", Tok::DiaT),
                ("[.]", Tok::BoxT),
                ("<>", Tok::DiaK),
                ("[]", Tok::BoxK),
                ("->", Tok::Limp),
                ("=>", Tok::Seq),
                ("/\\", Tok::With),
                ("\\/", Tok::Plus),
                ("◇\u{307}", Tok::DiaT),
                ("□\u{307}", Tok::BoxT),
            ];
            if let Some((s, tok)) = fixed.iter().find(|(s, _)| self.starts_with(s)) {
                self.pos += s.chars().count();
                out.push((tok.clone(), start + 1));
                continue;
            }
            let single = match c {
                '~' | '¬' => Some(Tok::Neg),
                '*' | '⊗' => Some(Tok::Tensor),
                '+' | '⊕' => Some(Tok::Par),
                '∧' => Some(Tok::With),
                '∨' => Some(Tok::Plus),
                '→' => Some(Tok::Limp),
                '◇' => Some(Tok::DiaK),
                '□' => Some(Tok::BoxK),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                '|' => Some(Tok::Bar),
                '⇒' => Some(Tok::Seq),
                '0' => Some(Tok::Const(Const::Zero)),
                '1' => Some(Tok::Const(Const::One)),
                '⊥' => Some(Tok::Const(Const::Bot)),
                '⊤' => Some(Tok::Const(Const::Top)),
                _ => None,
            };
            if let Some(tok) = single {
                self.pos += 1;
                out.push((tok, start + 1));
                continue;
            }
            if c.is_ascii_alphabetic() {
                let mut name = String::new();
                while let Some(&d) = self.chars.get(self.pos) {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let tok = match name.as_str() {
                    "bot" => Tok::Const(Const::Bot),
                    "top" => Tok::Const(Const::Top),
                    _ => Tok::Ident(name),
                };
                out.push((tok, start + 1));
                continue;
            }
            if c == '\\' {
                self.pos += 1;
                let mut name = String::new();
                while let Some(&d) = self.chars.get(self.pos) {
                    if d.is_ascii_alphabetic() {
                        name.push(d);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let tok = match name.as_str() {
                    "otimes" => Tok::Tensor,
                    "oplus" => Tok::Par,
                    "land" => Tok::With,
                    "lor" => Tok::Plus,
                    "neg" => Tok::Neg,
                    "imp" => Tok::Limp,
                    "Diamonddot" => Tok::DiaT,
                    "boxdot" => Tok::BoxT,
                    "Box" => Tok::BoxK,
                    "Diamond" => Tok::DiaK,
                    "bot" => Tok::Const(Const::Bot),
                    "top" => Tok::Const(Const::Top),
                    "seq" => Tok::Seq,
                    "mid" => Tok::Bar,
                    _ => return Err(self.error(start, "a known LaTeX connective")),
                };
                out.push((tok, start + 1));
                continue;
            }
            return Err(self.error(start, "a formula token"));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: Lexer::new(text).tokenize()?, idx: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.idx].0.clone();
        if tok != Tok::End {
            self.idx += 1;
        }
        tok
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, position) = &self.toks[self.idx];
        ParseError { position: *position, expected: expected.into(), found: tok.describe() }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.binary(0)?;
        if *self.peek() == Tok::Limp {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::limp(lhs, rhs));
        }
        Ok(lhs)
    }

    // Left-associative levels, loosest first: \/, /\, +, *.
    fn binary(&mut self, level: usize) -> Result<Formula, ParseError> {
        const LEVELS: [Tok; 4] = [Tok::Plus, Tok::With, Tok::Par, Tok::Tensor];
        if level == LEVELS.len() {
            return self.prefix();
        }
        let mut lhs = self.binary(level + 1)?;
        while *self.peek() == LEVELS[level] {
            self.bump();
            let rhs = self.binary(level + 1)?;
            lhs = match level {
                0 => Formula::plus(lhs, rhs),
                1 => Formula::with(lhs, rhs),
                2 => Formula::par(lhs, rhs),
                _ => Formula::tensor(lhs, rhs),
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Tok::Neg => Formula::neg,
            Tok::DiaT => Formula::dia_t,
            Tok::BoxT => Formula::box_t,
            Tok::BoxK => Formula::box_k,
            Tok::DiaK => Formula::dia_k,
            _ => return self.primary(),
        };
        self.bump();
        Ok(wrap(self.prefix()?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::atom(&name))
            }
            Tok::Const(c) => {
                self.bump();
                Ok(Formula::Const(c))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("')' or a binary connective"));
                }
                self.bump();
                Ok(f)
            }
            _ => Err(self.error("an atom, constant, prefix operator or '('")),
        }
    }

    fn starts_formula(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Const(_)
                | Tok::Neg
                | Tok::DiaT
                | Tok::BoxT
                | Tok::BoxK
                | Tok::DiaK
                | Tok::LParen
        )
    }

    fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if !self.starts_formula() {
            return Ok(out);
        }
        out.push(self.formula()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.formula()?);
        }
        Ok(out)
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let ant = self.formula_list()?;
        if *self.peek() != Tok::Seq {
            return Err(self.error("',' or '=>'"));
        }
        self.bump();
        let succ = self.formula_list()?;
        Ok(Sequent::new(ant, succ))
    }
}

/// Parses a formula in any of the ascii, unicode or latex notations.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses `formula-list => formula-list`; either list may be empty.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.expect_end()?;
    Ok(s)
}

/// Parses one or more sequents separated by `|`.
pub fn parse_hypersequent(text: &str) -> Result<Hypersequent, ParseError> {
    let mut p = Parser::new(text)?;
    let mut comps = vec![p.sequent()?];
    while *p.peek() == Tok::Bar {
        p.bump();
        comps.push(p.sequent()?);
    }
    if *p.peek() != Tok::End {
        return Err(p.error("'|' or end of input"));
    }
    Ok(Hypersequent::new(comps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_and_examples() {
        assert_eq!(parse_formula("a").unwrap(), Formula::atom("a"));
        let a = Formula::atom("A");
        assert_eq!(
            parse_formula("[.]A -> <.>A").unwrap(),
            Formula::limp(Formula::box_t(a.clone()), Formula::dia_t(a))
        );
        let a = Formula::atom("a");
        assert_eq!(
            parse_formula("~a + a").unwrap(),
            Formula::par(Formula::neg(a.clone()), a)
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("a * b + c /\\ d \\/ e -> f -> g").unwrap();
        let (a, b, c, d, e, f_, g) = (
            Formula::atom("a"),
            Formula::atom("b"),
            Formula::atom("c"),
            Formula::atom("d"),
            Formula::atom("e"),
            Formula::atom("f"),
            Formula::atom("g"),
        );
        let expected = Formula::limp(
            Formula::plus(
                Formula::with(Formula::par(Formula::tensor(a, b), c), d),
                e,
            ),
            Formula::limp(f_, g),
        );
        assert_eq!(f, expected);
        let left = parse_formula("a * b * c").unwrap();
        assert!(matches!(left, Formula::Tensor(ref l, _) if matches!(**l, Formula::Tensor(..))));
        assert_eq!(
            parse_formula("~[]a").unwrap(),
            Formula::neg(Formula::box_k(Formula::atom("a")))
        );
    }

    #[test]
    fn constants_and_other_notations() {
        assert_eq!(parse_formula("bot").unwrap(), Formula::bot());
        assert_eq!(parse_formula("⊤").unwrap(), Formula::top());
        assert_eq!(
            parse_formula("◇\u{307}(a ∨ ¬a)").unwrap(),
            parse_formula("<.>(a \\/ ~a)").unwrap()
        );
        assert_eq!(
            parse_formula("\\boxdot a \\imp \\Diamond \\top").unwrap(),
            parse_formula("[.]a -> <>top").unwrap()
        );
        assert_eq!(parse_formula("□a").unwrap(), Formula::box_k(Formula::atom("a")));
    }

    #[test]
    fn errors_carry_position_and_expectation() {
        let err = parse_formula("a * ").unwrap_err();
        assert_eq!(err.position, 5);
        assert!(err.expected.contains("atom"));
        assert_eq!(err.found, "end of input");

        let err = parse_formula("(a -> b").unwrap_err();
        assert_eq!(err.position, 8);
        assert!(err.expected.contains("')'"));

        let err = parse_formula("a $ b").unwrap_err();
        assert_eq!(err.position, 3);

        let err = parse_formula("a b").unwrap_err();
        assert_eq!(err.position, 3);
        assert_eq!(err.expected, "end of input");
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("a => a").unwrap();
        assert_eq!(s, Sequent::new(vec![Formula::atom("a")], vec![Formula::atom("a")]));
        let s = parse_sequent("0 =>").unwrap();
        assert_eq!(s, Sequent::new(vec![Formula::zero()], vec![]));
        assert_eq!(parse_sequent("=>").unwrap(), Sequent::default());
        assert!(parse_sequent("a, => b").is_err());
        assert!(parse_sequent("a b").is_err());
    }

    #[test]
    fn hypersequents() {
        let h = parse_hypersequent("a => a /\\ b | b => a /\\ b").unwrap();
        assert_eq!(h.len(), 2);
        let err = parse_hypersequent("a => b |").unwrap_err();
        assert_eq!(err.position, 9);
    }
}
