//! The core term grammar:
//!
//! ```text
//! term ::= (var <name> <type>) | (const <name> <type>) | (app <term> <term>) | (lam <name> <type> <term>)
//! type ::= (tv <name>) | bool | (d <n>) | (arrow <type> <type>)
//! ```

use super::sexp::{self, ParseError, SExp};
use super::term::{Term, Var};
use super::types::Type;

pub fn type_to_sexp(t: &Type) -> SExp {
    match t {
        Type::Var(v) => SExp::list([SExp::atom("tv"), SExp::atom(v.clone())]),
        Type::Bool => SExp::atom("bool"),
        Type::Domain(i) => SExp::list([SExp::atom("d"), SExp::atom(i.to_string())]),
        Type::Arrow(a, b) => SExp::list([SExp::atom("arrow"), type_to_sexp(a), type_to_sexp(b)]),
    }
}

pub fn term_to_sexp(t: &Term) -> SExp {
    match t {
        Term::Var(v) => SExp::list([
            SExp::atom("var"),
            SExp::atom(v.name.clone()),
            type_to_sexp(&v.ty),
        ]),
        Term::Const(n, ty) => {
            SExp::list([SExp::atom("const"), SExp::atom(n.clone()), type_to_sexp(ty)])
        }
        Term::App(f, a) => SExp::list([SExp::atom("app"), term_to_sexp(f), term_to_sexp(a)]),
        Term::Abs(v, b) => SExp::list([
            SExp::atom("lam"),
            SExp::atom(v.name.clone()),
            type_to_sexp(&v.ty),
            term_to_sexp(b),
        ]),
    }
}

pub fn print_term(t: &Term) -> String {
    term_to_sexp(t).to_string()
}

pub fn print_type(t: &Type) -> String {
    type_to_sexp(t).to_string()
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, msg)
}

fn name_atom(e: &SExp, line: usize, what: &str) -> Result<String, ParseError> {
    e.as_atom()
        .map(str::to_owned)
        .ok_or_else(|| err(line, format!("expected {what} name, found {e}")))
}

pub fn type_from_sexp(e: &SExp, line: usize) -> Result<Type, ParseError> {
    match e {
        SExp::Atom(a) if a == "bool" => Ok(Type::Bool),
        SExp::Atom(a) => Err(err(line, format!("unknown type atom '{a}'"))),
        SExp::List(items) => {
            let head = items.first().and_then(SExp::as_atom).unwrap_or("");
            match (head, items.len()) {
                ("tv", 2) => Ok(Type::Var(name_atom(&items[1], line, "type variable")?)),
                ("d", 2) => {
                    let n = items[1]
                        .as_atom()
                        .and_then(|s| s.parse::<u32>().ok())
                        .ok_or_else(|| err(line, format!("bad domain index {}", items[1])))?;
                    Ok(Type::Domain(n))
                }
                ("arrow", 3) => Ok(Type::arrow(
                    type_from_sexp(&items[1], line)?,
                    type_from_sexp(&items[2], line)?,
                )),
                _ => Err(err(line, format!("malformed type {e}"))),
            }
        }
    }
}

pub fn term_from_sexp(e: &SExp, line: usize) -> Result<Term, ParseError> {
    let items = e
        .as_list()
        .ok_or_else(|| err(line, format!("expected term, found atom {e}")))?;
    let head = items.first().and_then(SExp::as_atom).unwrap_or("");
    match (head, items.len()) {
        ("var", 3) => Ok(Term::var(
            name_atom(&items[1], line, "variable")?,
            type_from_sexp(&items[2], line)?,
        )),
        ("const", 3) => Ok(Term::constant(
            name_atom(&items[1], line, "constant")?,
            type_from_sexp(&items[2], line)?,
        )),
        ("app", 3) => Ok(Term::app(
            term_from_sexp(&items[1], line)?,
            term_from_sexp(&items[2], line)?,
        )),
        ("lam", 4) => Ok(Term::abs(
            Var::new(name_atom(&items[1], line, "binder")?, type_from_sexp(&items[2], line)?),
            term_from_sexp(&items[3], line)?,
        )),
        _ => Err(err(line, format!("malformed term {e}"))),
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    term_from_sexp(&sexp::parse(src)?, 1)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    type_from_sexp(&sexp::parse(src)?, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_exactly() {
        let src = "(lam x (tv a) (app (const 𝒫 (arrow (tv a) (tv a))) (var x (tv a))))";
        let t = parse_term(src).unwrap();
        assert_eq!(print_term(&t), src);
        let ty = "(arrow (d 0) (arrow bool (d 12)))";
        assert_eq!(print_type(&parse_type(ty).unwrap()), ty);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_term("(app (var x bool))").is_err());
        assert!(parse_type("(d x)").is_err());
        assert!(parse_type("nat").is_err());
        assert!(parse_term("x").is_err());
    }
}
