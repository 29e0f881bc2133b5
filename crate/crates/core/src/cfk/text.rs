//! Line-oriented text format:
//!
//! ```text
//! # right-handed trefoil
//! gen a -1 0
//! gen b 0 0
//! gen c 0 -1
//! d b = a + c
//! flip a = c
//! flip b = b
//! flip c = a
//! ```
//!
//! A term is `[-]<int>*U^<nat>*<name>`; `1*` and `U^0*` may be left out.
//! Gradings are optional on `gen` lines and solved when any is missing.

use std::fmt::Write as _;

use super::{grading_solve, validate, KnotComplex};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Int(i64),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_word_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl Lexer {
    fn new(text: &str, line: usize) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let col = k + 1;
            if c.is_whitespace() {
                k += 1;
            } else if c.is_ascii_digit() {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                let v = s
                    .parse::<i64>()
                    .map_err(|_| syntax(line, col, format!("integer `{s}` out of range")))?;
                toks.push((Tok::Int(v), col));
            } else if is_word_start(c) {
                let start = k;
                while k < chars.len() && is_word_char(chars[k]) {
                    k += 1;
                }
                toks.push((Tok::Word(chars[start..k].iter().collect()), col));
            } else if "=+-*^".contains(c) || c == '−' {
                toks.push((Tok::Sym(if c == '−' { '-' } else { c }), col));
                k += 1;
            } else {
                return Err(syntax(line, col, format!("unexpected character `{c}`")));
            }
        }
        Ok(Lexer {
            toks,
            pos: 0,
            line,
            end_col: chars.len() + 1,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.line, self.col(), message)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{c}`"))),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        self.sym(c).is_ok()
    }

    fn int(&mut self, what: &str) -> Result<i64> {
        let negative = self.eat_sym('-');
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

struct Term {
    coefficient: i64,
    u_exponent: i64,
    target: String,
}

fn parse_term(lx: &mut Lexer, sign: i64) -> Result<Term> {
    let mut coefficient = sign;
    if let Some(Tok::Int(v)) = lx.peek() {
        coefficient *= *v;
        lx.next();
        lx.sym('*')?;
    }
    let mut u_exponent = 0;
    let is_u = matches!(lx.peek(), Some(Tok::Word(w)) if w == "U")
        && matches!(lx.peek_at(1), Some(Tok::Sym('^')) | Some(Tok::Sym('*')));
    if is_u {
        lx.next();
        u_exponent = if lx.eat_sym('^') {
            match lx.next() {
                Some(Tok::Int(v)) => v,
                _ => {
                    lx.pos -= 1;
                    return Err(lx.err("expected a nonnegative U exponent"));
                }
            }
        } else {
            1
        };
        lx.sym('*')?;
    }
    let target = lx.word("a generator name")?;
    Ok(Term {
        coefficient,
        u_exponent,
        target,
    })
}

/// Parses, validates and (if gradings are missing) grades a complex.
pub fn parse_text(source: &str) -> Result<KnotComplex> {
    let mut k = KnotComplex::new();
    let mut arrows: Vec<(usize, usize, String, Vec<Term>)> = Vec::new();
    let mut flips: Vec<(usize, usize, String, i64, String)> = Vec::new();
    for (n, raw) in source.lines().enumerate() {
        let line = n + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut lx = Lexer::new(text, line)?;
        if lx.at_end() {
            continue;
        }
        let col = lx.col();
        let keyword = lx.word("`gen`, `d` or `flip`")?;
        match keyword.as_str() {
            "gen" => {
                let name = lx.word("a generator name")?;
                let i = lx.int("the i filtration level")?;
                let j = lx.int("the j filtration level")?;
                let m = if lx.at_end() { None } else { Some(lx.int("a Maslov grading")?) };
                lx.finish()?;
                k.add_generator(&name, i, j, m);
            }
            "d" => {
                let src = lx.word("a generator name")?;
                lx.sym('=')?;
                let mut terms = Vec::new();
                if matches!(lx.peek(), Some(Tok::Int(0))) && lx.peek_at(1).is_none() {
                    lx.next();
                } else {
                    let mut sign = if lx.eat_sym('-') { -1 } else { 1 };
                    loop {
                        terms.push(parse_term(&mut lx, sign)?);
                        if lx.at_end() {
                            break;
                        }
                        sign = if lx.eat_sym('+') {
                            1
                        } else if lx.eat_sym('-') {
                            -1
                        } else {
                            return Err(lx.err("expected `+` or `-` between terms"));
                        };
                    }
                }
                arrows.push((line, col, src, terms));
            }
            "flip" => {
                let src = lx.word("a generator name")?;
                lx.sym('=')?;
                let sign = if lx.eat_sym('-') { -1 } else { 1 };
                let tgt = lx.word("a generator name")?;
                lx.finish()?;
                flips.push((line, col, src, sign, tgt));
            }
            other => {
                return Err(syntax(line, col, format!("unknown keyword `{other}`")));
            }
        }
    }
    let lookup = |k: &KnotComplex, line: usize, col: usize, name: &str| {
        k.index_of(name)
            .ok_or_else(|| syntax(line, col, format!("unknown generator `{name}`")))
    };
    for (line, col, src, terms) in arrows {
        let s = lookup(&k, line, col, &src)?;
        for t in terms {
            let tgt = lookup(&k, line, col, &t.target)?;
            k.add_term_at(s, t.coefficient, t.u_exponent, tgt);
        }
    }
    for (line, col, src, sign, tgt) in flips {
        let s = lookup(&k, line, col, &src)?;
        let t = lookup(&k, line, col, &tgt)?;
        k.set_flip_at(s, sign, t);
    }
    if k.has_gradings() && !k.is_empty() {
        validate(&k).into_result()?;
        Ok(k)
    } else {
        grading_solve(&k)
    }
}

fn format_term(coefficient: i64, u_exponent: i64, name: &str) -> String {
    let mut s = String::new();
    if coefficient != 1 {
        let _ = write!(s, "{coefficient}*");
    }
    if u_exponent != 0 {
        let _ = write!(s, "U^{u_exponent}*");
    }
    s + name
}

pub fn serialize_text(k: &KnotComplex) -> String {
    let mut out = String::new();
    for g in k.generators() {
        let _ = write!(out, "gen {} {} {}", g.name, g.i, g.j);
        if let Some(m) = g.maslov {
            let _ = write!(out, " {m}");
        }
        out.push('\n');
    }
    for x in 0..k.len() {
        let terms = k.terms(x);
        if terms.is_empty() {
            continue;
        }
        let _ = write!(out, "d {} =", k.generator(x).name);
        for (n, t) in terms.iter().enumerate() {
            let name = &k.generator(t.target).name;
            let (sep, c) = match (n, t.coefficient < 0) {
                (0, false) => (" ", t.coefficient),
                (0, true) => (" -", -t.coefficient),
                (_, false) => (" + ", t.coefficient),
                (_, true) => (" - ", -t.coefficient),
            };
            out.push_str(sep);
            out.push_str(&format_term(c, t.u_exponent, name));
        }
        out.push('\n');
    }
    for x in 0..k.len() {
        if let Some(f) = k.flip_of(x) {
            let sign = if f.sign < 0 { "-" } else { "" };
            let _ = writeln!(out, "flip {} = {sign}{}", k.generator(x).name, k.generator(f.target).name);
        }
    }
    out
}
