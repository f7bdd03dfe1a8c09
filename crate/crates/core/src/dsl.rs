//! A line-per-slice text format for diagrams.
//!
//! ```text
//! k=1
//! src=0 1 0 1
//! (0) t(1,0) (1)
//! m(0) (1 1)
//! tgt=0 1 1
//! ```
//!
//! Statements are separated by newlines or `;`, and `#` starts a comment.
//! `k` and `src` come first. Each slice names its generator (`u(a)`,
//! `m(a)`, `t(a,b)`) with the identity strands to its left and right in
//! parentheses; an omitted whisker is empty. A trailing `tgt` is optional
//! and checked against the computed target.

use std::fmt;

use thiserror::Error;

use crate::diagram::{Diagram, Generator, Label, ObjWord, Slice, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    Comma,
    Eq,
    Sep,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Eq => f.write_str("'='"),
            Tok::Sep => f.write_str("end of statement"),
        }
    }
}

type Pos = (usize, usize);

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = (li + 1, i + 1);
            match c {
                '#' => break,
                ' ' | '\t' | '\r' => {}
                ';' => out.push((Tok::Sep, pos)),
                '(' => out.push((Tok::LParen, pos)),
                ')' => out.push((Tok::RParen, pos)),
                ',' => out.push((Tok::Comma, pos)),
                '=' => out.push((Tok::Eq, pos)),
                '0'..='9' => {
                    let start = i;
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..=i].iter().collect();
                    let n = s.parse().map_err(|_| DslError {
                        line: pos.0,
                        column: pos.1,
                        message: format!("number {s} is too large"),
                    })?;
                    out.push((Tok::Int(n), pos));
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    out.push((Tok::Ident(chars[start..=i].iter().collect()), pos));
                }
                other => {
                    return Err(DslError { line: pos.0, column: pos.1, message: format!("unexpected character '{other}'") })
                }
            }
            i += 1;
        }
        out.push((Tok::Sep, (li + 1, chars.len() + 1)));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        let (line, column) = self.pos();
        Err(DslError { line, column, message: message.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), DslError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.at += 1;
                Ok(())
            }
            Some(t) => {
                let msg = format!("expected {want}, found {t}");
                self.err(msg)
            }
            None => self.err(format!("expected {want}, found end of input")),
        }
    }

    fn int(&mut self) -> Result<u32, DslError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.at += 1;
                Ok(n)
            }
            Some(t) => {
                let msg = format!("expected a number, found {t}");
                self.err(msg)
            }
            None => self.err("expected a number, found end of input"),
        }
    }

    fn skip_seps(&mut self) {
        while self.peek() == Some(&Tok::Sep) {
            self.at += 1;
        }
    }

    fn end_statement(&mut self) -> Result<(), DslError> {
        match self.peek() {
            None | Some(Tok::Sep) => Ok(()),
            Some(t) => {
                let msg = format!("expected end of statement, found {t}");
                self.err(msg)
            }
        }
    }

    fn labels_until(&mut self, stop: &Tok) -> Result<(ObjWord, Vec<Pos>), DslError> {
        let mut v = Vec::new();
        let mut ps = Vec::new();
        while let Some(Tok::Int(_)) = self.peek() {
            ps.push(self.pos());
            v.push(Label(self.int()?));
        }
        match self.peek() {
            Some(t) if t == stop => Ok((ObjWord::new(v), ps)),
            None if *stop == Tok::Sep => Ok((ObjWord::new(v), ps)),
            Some(t) => {
                let msg = format!("expected a label or {stop}, found {t}");
                self.err(msg)
            }
            None => self.err(format!("expected {stop}, found end of input")),
        }
    }

    fn paren_word(&mut self) -> Result<ObjWord, DslError> {
        self.expect(Tok::LParen)?;
        let (w, _) = self.labels_until(&Tok::RParen)?;
        self.expect(Tok::RParen)?;
        Ok(w)
    }

    fn generator(&mut self) -> Result<Generator, DslError> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            Some(t) => {
                let msg = format!("expected a generator u(a), m(a) or t(a,b), found {t}");
                return self.err(msg);
            }
            None => return self.err("expected a generator, found end of input"),
        };
        let at = self.pos();
        self.at += 1;
        let g = match name.as_str() {
            "u" | "m" => {
                self.expect(Tok::LParen)?;
                let a = self.int()?;
                self.expect(Tok::RParen)?;
                if name == "u" {
                    Generator::emerge(a)
                } else {
                    Generator::join(a)
                }
            }
            "t" => {
                self.expect(Tok::LParen)?;
                let a = self.int()?;
                self.expect(Tok::Comma)?;
                let b = self.int()?;
                self.expect(Tok::RParen)?;
                Generator::cross(a, b)
            }
            other => {
                return Err(DslError { line: at.0, column: at.1, message: format!("unknown generator '{other}'") })
            }
        };
        Ok(g)
    }

    fn keyword(&mut self, name: &str) -> Result<(), DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == name => {
                self.at += 1;
                self.expect(Tok::Eq)
            }
            Some(t) => {
                let msg = format!("expected '{name}=', found {t}");
                self.err(msg)
            }
            None => self.err(format!("expected '{name}=', found end of input")),
        }
    }
}

fn semantic(pos: Pos, message: String) -> DslError {
    DslError { line: pos.0, column: pos.1, message }
}

/// Parses the text format; syntax and validity errors carry a position.
pub fn parse_diagram(text: &str) -> Result<Diagram, DslError> {
    let toks = lex(text)?;
    let end = toks.last().map(|(_, p)| *p).unwrap_or((1, 1));
    let mut p = Parser { toks, at: 0, end };
    p.skip_seps();
    p.keyword("k")?;
    let k = p.int()? as usize;
    p.end_statement()?;
    p.skip_seps();
    p.keyword("src")?;
    let (src, label_pos) = p.labels_until(&Tok::Sep)?;
    p.end_statement()?;
    for (l, at) in src.iter().zip(label_pos) {
        if l.idx() > k {
            return Err(semantic(at, format!("label {l} exceeds k = {k}")));
        }
    }
    let mut slices = Vec::new();
    let mut slice_pos = Vec::new();
    let mut tgt: Option<(ObjWord, Pos)> = None;
    loop {
        p.skip_seps();
        let Some(t) = p.peek() else { break };
        if tgt.is_some() {
            return p.err("nothing may follow 'tgt='");
        }
        let at = p.pos();
        if matches!(t, Tok::Ident(s) if s == "tgt") {
            p.keyword("tgt")?;
            let (w, _) = p.labels_until(&Tok::Sep)?;
            p.end_statement()?;
            tgt = Some((w, at));
            continue;
        }
        let left = if p.peek() == Some(&Tok::LParen) { p.paren_word()? } else { ObjWord::empty() };
        let gen = p.generator()?;
        let right = if p.peek() == Some(&Tok::LParen) { p.paren_word()? } else { ObjWord::empty() };
        p.end_statement()?;
        slices.push(Slice::new(left, gen, right));
        slice_pos.push(at);
        let _ = p.next();
    }
    let computed = slices.last().map(Slice::codomain).unwrap_or_else(|| src.clone());
    let d = Diagram::from_parts_unchecked(k, src, computed.clone(), slices);
    if let Err(vs) = d.validate() {
        let v = &vs[0];
        let at = match v {
            Violation::LabelOutOfRange { slice: Some(i), .. }
            | Violation::CrossOrder { slice: i, .. }
            | Violation::Chaining { slice: i, .. } => slice_pos[*i],
            _ => end,
        };
        return Err(semantic(at, v.to_string()));
    }
    if let Some((w, at)) = tgt {
        if w != computed {
            return Err(semantic(at, format!("declared target {w} but the slices end at {computed}")));
        }
    }
    Ok(d)
}

fn word_body(w: &ObjWord) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

fn statements(d: &Diagram) -> Vec<String> {
    let mut out = vec![format!("k={}", d.degree()), format!("src={}", word_body(d.src()))];
    for s in d.slices() {
        let mut parts = Vec::new();
        if !s.left.is_empty() {
            parts.push(format!("({})", word_body(&s.left)));
        }
        parts.push(s.gen.to_string());
        if !s.right.is_empty() {
            parts.push(format!("({})", word_body(&s.right)));
        }
        out.push(parts.join(" "));
    }
    out.push(format!("tgt={}", word_body(d.tgt())));
    out
}

/// The canonical text of a diagram, one statement per line.
pub fn print_diagram(d: &Diagram) -> String {
    let mut s = statements(d).join("\n");
    s.push('\n');
    s
}

/// The same statements on a single line.
pub fn print_inline(d: &Diagram) -> String {
    statements(d).join("; ")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot read word '{0}': {1}")]
pub struct WordError(pub String, pub String);

/// Reads an object given as `0 1 2`, `(0 1 2)`, `()`, `[k]`, `[k]^n` or
/// `(...)^n`, with whitespace or commas between labels.
pub fn parse_word(text: &str) -> Result<ObjWord, WordError> {
    let err = |m: &str| WordError(text.to_string(), m.to_string());
    let t = text.trim();
    let (base, power) = match t.rsplit_once('^') {
        Some((b, p)) => (b.trim(), p.trim().parse::<usize>().map_err(|_| err("bad exponent"))?),
        None => (t, 1),
    };
    let word = if let Some(inner) = base.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let k: usize = inner.trim().parse().map_err(|_| err("bad [k]"))?;
        ObjWord::standard(k)
    } else {
        let inner = base.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(base);
        let mut v = Vec::new();
        for piece in inner.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            v.push(piece.parse::<u32>().map_err(|_| err("labels must be integers"))?);
        }
        ObjWord::from_values(&v)
    };
    Ok(word.repeat(power))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BETA2: &str = "k=1\nsrc=0 1 0 1\n(0) t(1,0) (1)\nm(0) (1 1)\ntgt=0 1 1\n";

    #[test]
    fn parses_beta2() {
        let d = parse_diagram("k=1; src=0 1 0 1; (0) t(1,0) (1); m(0) (1 1)").unwrap();
        assert_eq!(d.placements(), vec![(Generator::cross(1, 0), 1), (Generator::join(0), 0)]);
        assert_eq!(print_diagram(&d), BETA2);
        assert_eq!(parse_diagram(BETA2).unwrap(), d);
    }

    #[test]
    fn empty_identity() {
        let d = parse_diagram("k=0; src=; ").unwrap();
        assert!(d.is_identity());
        assert!(d.src().is_empty());
    }

    #[test]
    fn cross_order_error_is_positioned() {
        let e = parse_diagram("k=0; src=0 0; t(0,0)").unwrap_err();
        assert!(e.message.contains("cross requires a > b"), "{e}");
        assert_eq!((e.line, e.column), (1, 15));
    }

    #[test]
    fn syntax_errors() {
        let e = parse_diagram("k=1\nsrc=0 1\nm(0 (1)").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(parse_diagram("src=0").is_err());
        assert!(parse_diagram("k=0; src=0; x(0)").unwrap_err().message.contains("unknown generator"));
        let e = parse_diagram("k=0\nsrc=0 0\nm(0)\ntgt=0 0").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_diagram("k=1; src=0 1; m(0)").unwrap_err();
        assert!(e.message.contains("chaining") || e.message.contains("expects"), "{e}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let d = parse_diagram("# beta 2\n\nk=1 # degree\nsrc=0 1 0 1\n(0) t(1,0) (1)\nm(0) (1 1) # join\n").unwrap();
        assert_eq!(d.tgt(), &ObjWord::from_values(&[0, 1, 1]));
    }

    #[test]
    fn words() {
        assert_eq!(parse_word("[2]").unwrap(), ObjWord::from_values(&[0, 1, 2]));
        assert_eq!(parse_word("[0]^3").unwrap(), ObjWord::from_values(&[0, 0, 0]));
        assert_eq!(parse_word("(0 1)^2").unwrap(), ObjWord::from_values(&[0, 1, 0, 1]));
        assert_eq!(parse_word("()").unwrap(), ObjWord::empty());
        assert_eq!(parse_word("0,1").unwrap(), ObjWord::from_values(&[0, 1]));
        assert!(parse_word("[x]").is_err());
    }
}
