//! Text formats: signature files, terms and substitutions.
//!
//! ```text
//! signature := (decl | comment | blank)*      decl := SYM "/" NAT
//! term      := VAR | SYM | SYM "(" ")" | SYM "(" term ("," term)* ")"
//! subst     := "{" "}" | "{" VAR "->" term ("," VAR "->" term)* "}"
//! ```
//!
//! Variables start with an uppercase letter or `?`, symbols with a lowercase
//! letter. Whitespace between tokens is ignored.

use thiserror::Error;

use crate::subst::{SubstError, Substitution};
use crate::term::{is_symbol_name, is_variable_name, Signature, Term, TermError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: symbol `{name}` declared twice")]
    DuplicateSymbol { line: usize, name: String },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

/// Parses `name/arity` declarations, one per line. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_signature(text: &str) -> Result<Signature, ParseError> {
    let mut sig = Signature::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let decl = raw.trim();
        if decl.is_empty() || decl.starts_with('#') {
            continue;
        }
        let bad = |message: &str| ParseError::Line {
            line,
            message: format!("{message}: `{decl}`"),
        };
        let (name, arity) = decl
            .split_once('/')
            .ok_or_else(|| bad("expected `name/arity`"))?;
        let name = name.trim();
        if !is_symbol_name(name) {
            return Err(bad("symbol names start with a lowercase letter"));
        }
        let arity: usize = arity
            .trim()
            .parse()
            .map_err(|_| bad("arity must be a natural number"))?;
        if sig.arity(name).is_some() {
            return Err(ParseError::DuplicateSymbol {
                line,
                name: name.to_string(),
            });
        }
        sig.declare(name, arity)?;
    }
    Ok(sig)
}

/// Parses a term whose symbols must be declared in `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, Symbols::Fixed(sig));
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term, declaring each unseen symbol with the arity of its first
/// use. Later uses with a different argument count are arity errors.
pub fn parse_term_inferring(text: &str, sig: &mut Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, Symbols::Inferring(sig));
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_substitution(text: &str, sig: &Signature) -> Result<Substitution, ParseError> {
    let mut p = Parser::new(text, Symbols::Fixed(sig));
    let s = p.substitution()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_substitution_inferring(
    text: &str,
    sig: &mut Signature,
) -> Result<Substitution, ParseError> {
    let mut p = Parser::new(text, Symbols::Inferring(sig));
    let s = p.substitution()?;
    p.finish()?;
    Ok(s)
}

enum Symbols<'s> {
    Fixed(&'s Signature),
    Inferring(&'s mut Signature),
}

struct Parser<'a, 's> {
    src: &'a str,
    pos: usize,
    symbols: Symbols<'s>,
}

impl<'a, 's> Parser<'a, 's> {
    fn new(src: &'a str, symbols: Symbols<'s>) -> Self {
        Parser {
            src,
            pos: 0,
            symbols,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            return self.error("unexpected trailing input");
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| {
                !(c.is_ascii_alphanumeric() || c == '_' || c == '\'' || (i == 0 && c == '?'))
            })
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return self.error("expected a variable or symbol");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        let name = self.ident()?;
        if is_variable_name(name) {
            return Ok(Term::Var(Var::new(name)?));
        }
        if !is_symbol_name(name) {
            self.pos = start;
            return self.error(format!("`{name}` is neither a variable nor a symbol"));
        }
        let mut args = Vec::new();
        if self.eat("(") && !self.eat(")") {
            loop {
                args.push(self.term()?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        match &mut self.symbols {
            Symbols::Fixed(sig) => Ok(sig.app(name, args)?),
            Symbols::Inferring(sig) => {
                if sig.arity(name).is_none() {
                    sig.declare(name, args.len())?;
                }
                Ok(sig.app(name, args)?)
            }
        }
    }

    fn substitution(&mut self) -> Result<Substitution, ParseError> {
        self.expect("{")?;
        let mut bindings = Vec::new();
        if !self.eat("}") {
            loop {
                let name = self.ident()?;
                if !is_variable_name(name) {
                    return self.error(format!("`{name}` is not a variable"));
                }
                let x = Var::new(name)?;
                self.expect("->")?;
                bindings.push((x, self.term()?));
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(Substitution::from_bindings(bindings)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        parse_signature("f/2\ng/1\na/0").unwrap()
    }

    #[test]
    fn signature_files() {
        let s = sig();
        assert_eq!(s.arity("f"), Some(2));
        assert_eq!(s.arity("g"), Some(1));
        assert_eq!(s.arity("a"), Some(0));
        assert!(parse_signature("").unwrap().is_empty());
        let commented = parse_signature("# symbols\n\n  f / 2 \n").unwrap();
        assert_eq!(commented.arity("f"), Some(2));
        assert_eq!(
            parse_signature("f/2\nf/1"),
            Err(ParseError::DuplicateSymbol {
                line: 2,
                name: "f".into()
            })
        );
        assert!(matches!(
            parse_signature("f/2\ng-1"),
            Err(ParseError::Line { line: 2, .. })
        ));
        assert!(matches!(
            parse_signature("F/2"),
            Err(ParseError::Line { line: 1, .. })
        ));
    }

    #[test]
    fn terms() {
        let s = sig();
        let t = parse_term("f(X, g(a))", &s).unwrap();
        let expected = s
            .app(
                "f",
                vec![
                    Term::Var(Var::new("X").unwrap()),
                    s.app("g", vec![s.constant("a").unwrap()]).unwrap(),
                ],
            )
            .unwrap();
        assert_eq!(t, expected);
        assert_eq!(parse_term("a()", &s).unwrap(), s.constant("a").unwrap());
        assert_eq!(parse_term(" ?x ", &s).unwrap().to_string(), "?x");
    }

    #[test]
    fn term_errors() {
        let s = sig();
        assert_eq!(
            parse_term("f(X)", &s),
            Err(ParseError::Term(TermError::ArityMismatch {
                symbol: "f".into(),
                expected: 2,
                found: 1
            }))
        );
        assert_eq!(
            parse_term("h(X)", &s),
            Err(ParseError::Term(TermError::UnknownSymbol("h".into())))
        );
        assert!(matches!(
            parse_term("f(X", &s),
            Err(ParseError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse_term("a b", &s),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(parse_term("", &s), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_term("f(,a)", &s),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn inferred_signature() {
        let mut s = Signature::new();
        parse_term_inferring("f(X, g(a))", &mut s).unwrap();
        assert_eq!(s.arity("f"), Some(2));
        assert_eq!(s.arity("a"), Some(0));
        assert!(matches!(
            parse_term_inferring("g(a, a)", &mut s),
            Err(ParseError::Term(TermError::ArityMismatch { .. }))
        ));
    }

    #[test]
    fn substitutions() {
        let s = sig();
        let sub = parse_substitution("{Y -> X, X -> g(a)}", &s).unwrap();
        assert_eq!(sub.to_string(), "{X -> g(a), Y -> X}");
        assert!(parse_substitution("{}", &s).unwrap().is_identity());
        assert!(parse_substitution("{X -> X}", &s).unwrap().is_identity());
        assert!(matches!(
            parse_substitution("{X -> a, X -> a}", &s),
            Err(ParseError::Subst(SubstError::DuplicateBinding(_)))
        ));
        assert!(parse_substitution("{a -> X}", &s).is_err());
        assert!(parse_substitution("{X -> a", &s).is_err());
    }
}
