//! The catalogue file format.
//!
//! A file is a sequence of sections. A header starts in column 0 with one of
//! `class: feature: deps: consts: defs: axioms: lemmas: logo: cargo:
//! default:`; its entries are S-expressions in surface notation and may begin
//! on the header line. `;` starts a comment. Definitions are written
//! `(= name rhs)` and are elaborated in order, each one extending the
//! signature seen by the next.

use std::fmt::Write as _;

use crate::kernel::build::{dest_eq, eq};
use crate::kernel::sexp::{parse_all, ParseError, SExp};
use crate::kernel::{type_of, Signature, Term};
use crate::softtypes::notation::{parse_type, print_type, resugar, Elaborator};

use super::{Catalogue, Class, Feature, RResult, RegistryError};

const SECTIONS: &[&str] = &[
    "class", "feature", "deps", "consts", "defs", "axioms", "lemmas", "logo", "cargo", "default",
];

/// One parsed catalogue file.
#[derive(Clone, Debug)]
pub struct ClassFile {
    pub class: Class,
    pub feature: Option<Feature>,
}

struct Section {
    entries: Vec<(usize, SExp)>,
}

fn split_sections(src: &str) -> Result<Vec<(String, Section)>, ParseError> {
    let mut heads: Vec<(String, usize, String)> = Vec::new();
    let mut body_of_current = String::new();
    let flush = |heads: &mut Vec<(String, usize, String)>, body: &mut String| {
        if let Some(last) = heads.last_mut() {
            last.2.push_str(body);
        }
        body.clear();
    };
    for (i, line) in src.lines().enumerate() {
        let n = i + 1;
        let first = line.chars().next();
        let is_header = matches!(first, Some(c) if !c.is_whitespace() && c != '(' && c != ';');
        if is_header {
            let Some((name, rest)) = line.split_once(':') else {
                return Err(ParseError::new(n, format!("expected a section header: {line}")));
            };
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(ParseError::new(n, format!("unknown section '{name}'")));
            }
            if heads.iter().any(|(h, _, _)| h == name) {
                return Err(ParseError::new(n, format!("duplicate section '{name}'")));
            }
            flush(&mut heads, &mut body_of_current);
            heads.push((name.to_owned(), n, format!("{rest}\n")));
        } else {
            if heads.is_empty() && !line.trim().is_empty() && !line.trim_start().starts_with(';') {
                return Err(ParseError::new(n, "content before the first section"));
            }
            body_of_current.push_str(line);
            body_of_current.push('\n');
        }
    }
    flush(&mut heads, &mut body_of_current);
    heads
        .into_iter()
        .map(|(name, start, body)| {
            let entries = parse_all(&body)
                .map_err(|e| ParseError::new(e.line + start - 1, e.message))?
                .into_iter()
                .map(|(l, e)| (l + start - 1, e))
                .collect();
            Ok((name, Section { entries }))
        })
        .collect()
}

fn atoms(sec: Option<&Section>) -> Result<Vec<String>, ParseError> {
    let Some(sec) = sec else { return Ok(vec![]) };
    sec.entries
        .iter()
        .map(|(l, e)| {
            e.as_atom()
                .map(str::to_owned)
                .ok_or_else(|| ParseError::new(*l, format!("expected a name, found {e}")))
        })
        .collect()
}

fn single<'a>(sec: Option<&'a Section>, what: &str) -> Result<Option<&'a (usize, SExp)>, ParseError> {
    match sec.map(|s| s.entries.as_slice()) {
        None | Some([]) => Ok(None),
        Some([one]) => Ok(Some(one)),
        Some([_, (l, _), ..]) => Err(ParseError::new(*l, format!("'{what}' takes one entry"))),
    }
}

fn elaborate_def(sig: &Signature, line: usize, e: &SExp) -> Result<Term, ParseError> {
    let items = e.as_list().unwrap_or_default();
    let (Some("="), Some(name)) = (
        items.first().and_then(SExp::as_atom),
        items.get(1).and_then(SExp::as_atom),
    ) else {
        return Err(ParseError::new(line, format!("expected (= name rhs), found {e}")));
    };
    if items.len() != 3 {
        return Err(ParseError::new(line, "expected (= name rhs)"));
    }
    if sig.contains(name) {
        return Err(ParseError::new(line, format!("'{name}' is already declared")));
    }
    let rhs = Elaborator::new(sig).term(&items[2], line)?;
    let ty = type_of(&rhs).map_err(|err| ParseError::new(line, err.to_string()))?;
    Ok(eq(Term::constant(name, ty), rhs))
}

/// Parses a file whose dependencies are already in `cat`.
pub fn parse_class_file(src: &str, file: &str, cat: &Catalogue) -> RResult<ClassFile> {
    let wrap = |source: ParseError| RegistryError::Parse {
        file: file.to_owned(),
        source,
    };
    let sections = split_sections(src).map_err(wrap)?;
    let get = |n: &str| sections.iter().find(|(h, _)| h == n).map(|(_, s)| s);

    let name = match single(get("class"), "class").map_err(wrap)? {
        Some((_, SExp::Atom(a))) => a.clone(),
        Some((l, e)) => return Err(wrap(ParseError::new(*l, format!("bad class name {e}")))),
        None => return Err(wrap(ParseError::new(1, "missing 'class' section"))),
    };
    let deps = atoms(get("deps")).map_err(wrap)?;
    let mut sig = cat.signature_for_deps(&deps)?;

    let mut params = Vec::new();
    for (l, e) in get("consts").map(|s| s.entries.as_slice()).unwrap_or_default() {
        let Some([n, t]) = e.as_list() else {
            return Err(wrap(ParseError::new(*l, format!("expected (name type), found {e}"))));
        };
        let n = n
            .as_atom()
            .ok_or_else(|| wrap(ParseError::new(*l, format!("bad constant name {n}"))))?;
        let ty = parse_type(t, *l).map_err(wrap)?;
        sig.declare(n, ty.clone())
            .map_err(|err| wrap(ParseError::new(*l, err.to_string())))?;
        params.push((n.to_owned(), ty));
    }

    let mut defs = Vec::new();
    for (l, e) in get("defs").map(|s| s.entries.as_slice()).unwrap_or_default() {
        let d = elaborate_def(&sig, *l, e).map_err(wrap)?;
        if let Some((Term::Const(n, ty), _)) = dest_eq(&d) {
            sig.declare(n, ty.clone())
                .map_err(|err| wrap(ParseError::new(*l, err.to_string())))?;
        }
        defs.push(d);
    }

    let elab = Elaborator::new(&sig);
    let formulas = |sec: &str| -> RResult<Vec<Term>> {
        get(sec)
            .map(|s| s.entries.as_slice())
            .unwrap_or_default()
            .iter()
            .map(|(l, e)| elab.formula(e, *l).map_err(wrap))
            .collect()
    };
    let axioms = formulas("axioms")?;
    let lemmas = formulas("lemmas")?;

    let feature = match single(get("feature"), "feature").map_err(wrap)? {
        None => None,
        Some((l, fe)) => {
            let fname = fe
                .as_atom()
                .ok_or_else(|| wrap(ParseError::new(*l, format!("bad feature name {fe}"))))?;
            let term_of = |sec: &str| -> RResult<Term> {
                match single(get(sec), sec).map_err(wrap)? {
                    Some((l, e)) => elab.term(e, *l).map_err(wrap),
                    None => Err(wrap(ParseError::new(*l, format!("feature needs '{sec}'")))),
                }
            };
            let logo = term_of("logo")?;
            let cargo = term_of("cargo")?;
            let default = match single(get("default"), "default").map_err(wrap)? {
                Some((_, SExp::Atom(a))) => a.clone(),
                _ => return Err(wrap(ParseError::new(*l, "feature needs a 'default' name"))),
            };
            Some(Feature {
                name: fname.to_owned(),
                class: name.clone(),
                logo,
                cargo,
                default,
            })
        }
    };

    Ok(ClassFile {
        class: Class {
            name,
            deps,
            params,
            axioms,
            defs,
            lemmas,
        },
        feature,
    })
}

fn print_entries(out: &mut String, header: &str, items: impl IntoIterator<Item = SExp>) {
    let _ = writeln!(out, "{header}:");
    for e in items {
        let _ = writeln!(out, "  {e}");
    }
}

/// Prints a class (and its feature) in the catalogue format; the signature
/// must be the one the class was parsed against, extended by its constants.
pub fn print_class_file(file: &ClassFile, sig: &Signature) -> String {
    let c = &file.class;
    let mut out = String::new();
    let _ = writeln!(out, "class: {}", c.name);
    if let Some(f) = &file.feature {
        let _ = writeln!(out, "feature: {}", f.name);
    }
    let _ = writeln!(out, "deps: {}", c.deps.join(" "));
    print_entries(
        &mut out,
        "consts",
        c.params
            .iter()
            .map(|(n, t)| SExp::list([SExp::atom(n.clone()), print_type(t)])),
    );
    print_entries(
        &mut out,
        "defs",
        c.defs.iter().filter_map(|d| {
            let (Term::Const(n, _), rhs) = dest_eq(d)? else {
                return None;
            };
            Some(SExp::list([
                SExp::atom("="),
                SExp::atom(n.clone()),
                resugar(rhs, sig),
            ]))
        }),
    );
    print_entries(&mut out, "axioms", c.axioms.iter().map(|a| resugar(a, sig)));
    if !c.lemmas.is_empty() {
        print_entries(&mut out, "lemmas", c.lemmas.iter().map(|a| resugar(a, sig)));
    }
    if let Some(f) = &file.feature {
        let _ = writeln!(out, "logo: {}", resugar(&f.logo, sig));
        let _ = writeln!(out, "cargo: {}", resugar(&f.cargo, sig));
        let _ = writeln!(out, "default: {}", f.default);
    }
    out
}
