//! A minimal S-expression reader and printer.
//!
//! Atoms are maximal runs of characters other than whitespace, parentheses
//! and `;` (which starts a line comment). Positions are tracked as 1-based
//! line numbers for error reporting.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExp {
    Atom(String),
    List(Vec<SExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl SExp {
    pub fn atom(s: impl Into<String>) -> SExp {
        SExp::Atom(s.into())
    }

    pub fn list<I: IntoIterator<Item = SExp>>(items: I) -> SExp {
        SExp::List(items.into_iter().collect())
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExp::Atom(a) => Some(a),
            SExp::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExp]> {
        match self {
            SExp::List(l) => Some(l),
            SExp::Atom(_) => None,
        }
    }
}

impl fmt::Display for SExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExp::Atom(a) => f.write_str(a),
            SExp::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || c == '(' || c == ')' || c == ';'
}

/// Reads every top-level expression in `src`, each paired with the line it
/// starts on.
pub fn parse_all(src: &str) -> Result<Vec<(usize, SExp)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut pos = 0;
    let mut line = 1;
    let mut out = Vec::new();
    loop {
        skip_ws(&chars, &mut pos, &mut line);
        if pos >= chars.len() {
            return Ok(out);
        }
        let start = line;
        let e = parse_one(&chars, &mut pos, &mut line)?;
        out.push((start, e));
    }
}

/// Reads exactly one expression.
pub fn parse(src: &str) -> Result<SExp, ParseError> {
    let mut all = parse_all(src)?;
    match all.len() {
        1 => Ok(all.pop().unwrap().1),
        0 => Err(ParseError::new(1, "empty input")),
        _ => Err(ParseError::new(all[1].0, "trailing input after expression")),
    }
}

fn skip_ws(chars: &[char], pos: &mut usize, line: &mut usize) {
    while *pos < chars.len() {
        let c = chars[*pos];
        if c == '\n' {
            *line += 1;
            *pos += 1;
        } else if c.is_whitespace() {
            *pos += 1;
        } else if c == ';' {
            while *pos < chars.len() && chars[*pos] != '\n' {
                *pos += 1;
            }
        } else {
            break;
        }
    }
}

fn parse_one(chars: &[char], pos: &mut usize, line: &mut usize) -> Result<SExp, ParseError> {
    skip_ws(chars, pos, line);
    if *pos >= chars.len() {
        return Err(ParseError::new(*line, "unexpected end of input"));
    }
    match chars[*pos] {
        '(' => {
            let open_line = *line;
            *pos += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(chars, pos, line);
                if *pos >= chars.len() {
                    return Err(ParseError::new(open_line, "unclosed '('"));
                }
                if chars[*pos] == ')' {
                    *pos += 1;
                    return Ok(SExp::List(items));
                }
                items.push(parse_one(chars, pos, line)?);
            }
        }
        ')' => Err(ParseError::new(*line, "unexpected ')'")),
        _ => {
            let start = *pos;
            while *pos < chars.len() && !is_delim(chars[*pos]) {
                *pos += 1;
            }
            Ok(SExp::Atom(chars[start..*pos].iter().collect()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_and_comments() {
        let e = parse("(a (b c) ; comment\n d)").unwrap();
        assert_eq!(e.to_string(), "(a (b c) d)");
    }

    #[test]
    fn reports_line_of_unclosed_paren() {
        let err = parse("\n\n(a b").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn unicode_atoms() {
        let e = parse("(∀ 𝒫 ∘GZF)").unwrap();
        assert_eq!(e.as_list().unwrap()[1].as_atom(), Some("𝒫"));
    }

    #[test]
    fn parse_all_tracks_lines() {
        let all = parse_all("a\n(b)\n\nc").unwrap();
        let lines: Vec<usize> = all.iter().map(|(l, _)| *l).collect();
        assert_eq!(lines, vec![1, 2, 4]);
    }
}
