//! Concrete syntax.
//!
//! ```text
//! program   := (decl)*
//! decl      := "signals" NAME+ ";"
//!            | "mode" ("undirected" | "directed") ";"
//!            | "def" NAME ":" sort "=" term ";"
//! sort      := "(" side "," side ")"
//! side      := NAT            (undirected)
//!            | [LR]+ | "e"    (directed)
//! term      := choice
//! choice    := comp ("+" comp)*
//! comp      := tens (";" tens)*
//! tens      := atomt ("*" atomt)*
//! atomt     := NAME | "(" term ")"
//!            | "<" lab* "/" lab* ">" "." atomt
//!            | "rec" NAME (":" sort)? "." atomt
//! lab       := core dir?
//! core      := "_" | SIGNAL | "\" NAME | NAME
//! dir       := "?" | "!"
//! ```
//!
//! Definition bodies may reference earlier definitions; references are
//! inlined, so definitions abbreviate rather than recurse. A `rec` may omit
//! its sort annotation wherever the sort is determined by context (the
//! declared sort of the enclosing definition, the enclosing prefix or choice
//! arm); under `;` or `*` the annotation is required. `#` starts a line
//! comment.

use std::collections::HashMap;

use crate::error::Error;
use crate::sorting::{Sort, Word};
use crate::syntax::{
    Alphabet, AtomKind, Dir, Mode, Pattern, PatternAtom, Span, Term, TermKind,
};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    span: Span,
}

const KEYWORDS: [&str; 6] = ["signals", "mode", "def", "rec", "undirected", "directed"];

fn lex(text: &str) -> Result<Vec<Lexed>, Error> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span::new(line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
        } else if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Lexed {
                tok: Tok::Ident(s),
                span,
            });
        } else if ";:=()<>/\\*+.,?!".contains(c) {
            chars.next();
            col += 1;
            out.push(Lexed {
                tok: Tok::Punct(c),
                span,
            });
        } else {
            return Err(Error::parse(line, col, format!("unexpected character `{c}`")));
        }
    }
    out.push(Lexed {
        tok: Tok::Eof,
        span: Span::new(line, col),
    });
    Ok(out)
}

/// A checked program: alphabet, dialect and inlined definitions.
#[derive(Debug, Clone)]
pub struct Program {
    pub alphabet: Alphabet,
    pub mode: Mode,
    pub defs: Vec<Def>,
}

#[derive(Debug, Clone)]
pub struct Def {
    pub name: String,
    pub sort: Sort,
    pub term: Term,
    pub span: Span,
}

impl Program {
    pub fn def(&self, name: &str) -> Option<&Def> {
        self.defs.iter().find(|d| d.name == name)
    }
}

/// Term shape before `rec` annotations are resolved.
enum Raw {
    Var(String),
    Inline(Term),
    Seq(Box<RawTerm>, Box<RawTerm>),
    Ten(Box<RawTerm>, Box<RawTerm>),
    Prefix(Pattern, Pattern, Box<RawTerm>),
    Choice(Box<RawTerm>, Box<RawTerm>),
    Rec(String, Option<Sort>, Box<RawTerm>),
}

struct RawTerm {
    raw: Raw,
    span: Span,
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    mode: Mode,
    signals: Vec<String>,
    sig_set: HashMap<String, u32>,
    defs: Vec<Def>,
    def_index: HashMap<String, usize>,
    rec_stack: Vec<String>,
    text_alphabet: Option<&'a Alphabet>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Lexed {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let s = self.span();
        Error::parse(s.line, s.col, msg)
    }

    fn expect_punct(&mut self, c: char) -> Result<Span, Error> {
        match self.peek() {
            Tok::Punct(p) if *p == c => Ok(self.bump().span),
            other => Err(self.err(format!("expected `{c}`, found {}", show(other)))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Span), Error> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.bump().span;
                Ok((s, span))
            }
            other => Err(self.err(format!("expected a name, found {}", show(&other)))),
        }
    }

    fn expect_name(&mut self) -> Result<(String, Span), Error> {
        let (s, span) = self.expect_ident()?;
        if KEYWORDS.contains(&s.as_str()) {
            return Err(Error::parse(span.line, span.col, format!("`{s}` is reserved")));
        }
        Ok((s, span))
    }

    fn is_signal(&self, name: &str) -> bool {
        if let Some(a) = self.text_alphabet {
            a.id(name).is_some()
        } else {
            self.sig_set.contains_key(name)
        }
    }

    fn signal_id(&self, name: &str) -> Option<u32> {
        if let Some(a) = self.text_alphabet {
            a.id(name)
        } else {
            self.sig_set.get(name).copied()
        }
    }

    // sort := "(" side "," side ")"
    fn parse_sort(&mut self) -> Result<Sort, Error> {
        self.expect_punct('(')?;
        let left = self.parse_side()?;
        self.expect_punct(',')?;
        let right = self.parse_side()?;
        self.expect_punct(')')?;
        Ok(Sort::new(left, right))
    }

    fn parse_side(&mut self) -> Result<Word, Error> {
        let (s, span) = self.expect_ident()?;
        if s.chars().all(|c| c.is_ascii_digit()) {
            let n: usize = s
                .parse()
                .map_err(|_| Error::parse(span.line, span.col, "arity out of range"))?;
            return match self.mode {
                Mode::Undirected => Ok(Word::plain(n)),
                Mode::Directed if n == 0 => Ok(Word::empty()),
                Mode::Directed => Err(Error::parse(
                    span.line,
                    span.col,
                    "directed boundaries are written with `L`, `R` or `e`",
                )),
            };
        }
        match self.mode {
            Mode::Undirected => Err(Error::parse(
                span.line,
                span.col,
                "undirected boundaries are written as arities",
            )),
            Mode::Directed => {
                if s == "e" {
                    return Ok(Word::empty());
                }
                let mut dirs = Vec::new();
                for c in s.chars() {
                    match c {
                        'L' => dirs.push(Dir::L),
                        'R' => dirs.push(Dir::R),
                        _ => {
                            return Err(Error::parse(
                                span.line,
                                span.col,
                                format!("invalid boundary word `{s}`"),
                            ))
                        }
                    }
                }
                Ok(Word::dirs(dirs))
            }
        }
    }

    // lab := core dir?
    fn parse_pattern(&mut self) -> Result<Pattern, Error> {
        let mut atoms = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Punct('/') | Tok::Punct('>') => break,
                Tok::Punct('\\') => {
                    self.bump();
                    let (name, span) = self.expect_name()?;
                    if self.is_signal(&name) {
                        return Err(Error::parse(
                            span.line,
                            span.col,
                            format!("binder `\\{name}` shadows a signal"),
                        ));
                    }
                    atoms.push(PatternAtom {
                        kind: AtomKind::Bind(name),
                        dir: self.parse_dir()?,
                    });
                }
                Tok::Ident(s) => {
                    let span = self.bump().span;
                    let kind = if s == "_" {
                        AtomKind::Iota
                    } else if KEYWORDS.contains(&s.as_str()) {
                        return Err(Error::parse(span.line, span.col, format!("`{s}` is reserved")));
                    } else if let Some(id) = self.signal_id(&s) {
                        AtomKind::Sig(id)
                    } else {
                        AtomKind::Use(s)
                    };
                    atoms.push(PatternAtom {
                        kind,
                        dir: self.parse_dir()?,
                    });
                }
                other => {
                    return Err(self.err(format!(
                        "expected a pattern atom, `/` or `>`, found {}",
                        show(&other)
                    )))
                }
            }
        }
        Ok(atoms)
    }

    fn parse_dir(&mut self) -> Result<Option<Dir>, Error> {
        match self.peek() {
            Tok::Punct('?') => {
                self.bump();
                Ok(Some(Dir::L))
            }
            Tok::Punct('!') => {
                self.bump();
                Ok(Some(Dir::R))
            }
            _ => Ok(None),
        }
    }

    fn starts_atom(tok: &Tok) -> bool {
        match tok {
            Tok::Punct('(') | Tok::Punct('<') => true,
            Tok::Ident(s) => s == "rec" || !KEYWORDS.contains(&s.as_str()),
            _ => false,
        }
    }

    // choice := comp ("+" comp)*
    fn parse_term(&mut self) -> Result<RawTerm, Error> {
        let mut t = self.parse_comp()?;
        while matches!(self.peek(), Tok::Punct('+')) {
            self.bump();
            let rhs = self.parse_comp()?;
            let span = t.span;
            t = RawTerm {
                raw: Raw::Choice(Box::new(t), Box::new(rhs)),
                span,
            };
        }
        Ok(t)
    }

    // comp := tens (";" tens)*  -- a `;` only continues the composition when
    // an atom follows; otherwise it terminates the declaration.
    fn parse_comp(&mut self) -> Result<RawTerm, Error> {
        let mut t = self.parse_tens()?;
        while matches!(self.peek(), Tok::Punct(';')) && Self::starts_atom(self.peek2()) {
            self.bump();
            let rhs = self.parse_tens()?;
            let span = t.span;
            t = RawTerm {
                raw: Raw::Seq(Box::new(t), Box::new(rhs)),
                span,
            };
        }
        Ok(t)
    }

    fn parse_tens(&mut self) -> Result<RawTerm, Error> {
        let mut t = self.parse_atom()?;
        while matches!(self.peek(), Tok::Punct('*')) {
            self.bump();
            let rhs = self.parse_atom()?;
            let span = t.span;
            t = RawTerm {
                raw: Raw::Ten(Box::new(t), Box::new(rhs)),
                span,
            };
        }
        Ok(t)
    }

    fn parse_atom(&mut self) -> Result<RawTerm, Error> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Punct('(') => {
                self.bump();
                let t = self.parse_term()?;
                self.expect_punct(')')?;
                Ok(t)
            }
            Tok::Punct('<') => {
                self.bump();
                let u = self.parse_pattern()?;
                self.expect_punct('/')?;
                let v = self.parse_pattern()?;
                self.expect_punct('>')?;
                self.expect_punct('.')?;
                let body = self.parse_atom()?;
                Ok(RawTerm {
                    raw: Raw::Prefix(u, v, Box::new(body)),
                    span,
                })
            }
            Tok::Ident(s) if s == "rec" => {
                self.bump();
                let (name, _) = self.expect_name()?;
                let ann = if matches!(self.peek(), Tok::Punct(':')) {
                    self.bump();
                    Some(self.parse_sort()?)
                } else {
                    None
                };
                self.expect_punct('.')?;
                self.rec_stack.push(name.clone());
                let body = self.parse_atom();
                self.rec_stack.pop();
                let body = body?;
                Ok(RawTerm {
                    raw: Raw::Rec(name, ann, Box::new(body)),
                    span,
                })
            }
            Tok::Ident(s) => {
                if KEYWORDS.contains(&s.as_str()) {
                    return Err(self.err(format!("`{s}` is reserved")));
                }
                self.bump();
                if self.rec_stack.contains(&s) {
                    Ok(RawTerm {
                        raw: Raw::Var(s),
                        span,
                    })
                } else if let Some(&i) = self.def_index.get(&s) {
                    Ok(RawTerm {
                        raw: Raw::Inline(self.defs[i].term.clone()),
                        span,
                    })
                } else {
                    Err(Error::parse(
                        span.line,
                        span.col,
                        format!("unknown identifier `{s}`"),
                    ))
                }
            }
            other => Err(self.err(format!("expected a term, found {}", show(&other)))),
        }
    }

    /// Resolve omitted `rec` annotations from the expected sort: choice arms
    /// and recursion bodies inherit the expectation, a prefix body expects
    /// the sort spelled by its own patterns.
    fn resolve(&self, rt: RawTerm, expected: Option<&Sort>) -> Result<Term, Error> {
        let RawTerm { raw, span } = rt;
        let kind = match raw {
            Raw::Var(n) => TermKind::Var(n),
            Raw::Inline(t) => return Ok(t),
            Raw::Seq(a, b) => TermKind::Seq(
                Box::new(self.resolve(*a, None)?),
                Box::new(self.resolve(*b, None)?),
            ),
            Raw::Ten(a, b) => TermKind::Ten(
                Box::new(self.resolve(*a, None)?),
                Box::new(self.resolve(*b, None)?),
            ),
            Raw::Choice(a, b) => TermKind::Choice(
                Box::new(self.resolve(*a, expected)?),
                Box::new(self.resolve(*b, expected)?),
            ),
            Raw::Prefix(u, v, b) => {
                let own = prefix_sort(&u, &v, self.mode);
                let body = self.resolve(*b, own.as_ref())?;
                TermKind::Prefix(u, v, Box::new(body))
            }
            Raw::Rec(n, ann, b) => {
                let sort = match ann.or_else(|| expected.cloned()) {
                    Some(s) => s,
                    None => {
                        return Err(Error::parse(
                            span.line,
                            span.col,
                            format!("recursion `{n}` needs a sort annotation here"),
                        ))
                    }
                };
                let body = self.resolve(*b, Some(&sort))?;
                TermKind::Rec(n, sort, Box::new(body))
            }
        };
        Ok(Term::new(kind, span))
    }
}

/// Boundary sort spelled by a pattern pair, if the dialect markers line up.
fn prefix_sort(u: &Pattern, v: &Pattern, mode: Mode) -> Option<Sort> {
    let word = |p: &Pattern, flip: bool| -> Option<Word> {
        let mut letters = Vec::with_capacity(p.len());
        for atom in p {
            match (mode, atom.dir) {
                (Mode::Undirected, None) => letters.push(crate::sorting::Wire::Plain),
                (Mode::Directed, Some(d)) => letters.push(crate::sorting::Wire::from_dir(if flip {
                    d.flip()
                } else {
                    d
                })),
                _ => return None,
            }
        }
        Some(Word(letters))
    };
    Some(Sort::new(word(u, true)?, word(v, false)?))
}

fn show(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

/// Parse a complete program: signal declarations, optional mode, definitions.
pub fn parse_program(text: &str) -> Result<Program, Error> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        mode: Mode::Undirected,
        signals: Vec::new(),
        sig_set: HashMap::new(),
        defs: Vec::new(),
        def_index: HashMap::new(),
        rec_stack: Vec::new(),
        text_alphabet: None,
    };
    let mut mode_fixed = false;
    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(kw) if kw == "signals" => {
                p.bump();
                loop {
                    let (name, span) = p.expect_name()?;
                    if p.sig_set.contains_key(&name) {
                        return Err(Error::parse(
                            span.line,
                            span.col,
                            format!("duplicate signal `{name}`"),
                        ));
                    }
                    p.sig_set.insert(name.clone(), p.signals.len() as u32);
                    p.signals.push(name);
                    if matches!(p.peek(), Tok::Punct(';')) {
                        break;
                    }
                }
                p.expect_punct(';')?;
            }
            Tok::Ident(kw) if kw == "mode" => {
                let span = p.bump().span;
                if !p.defs.is_empty() {
                    return Err(Error::parse(
                        span.line,
                        span.col,
                        "mode must be declared before any definition",
                    ));
                }
                if mode_fixed {
                    return Err(Error::parse(span.line, span.col, "mode declared twice"));
                }
                let (which, wspan) = p.expect_ident()?;
                p.mode = match which.as_str() {
                    "undirected" => Mode::Undirected,
                    "directed" => Mode::Directed,
                    _ => {
                        return Err(Error::parse(
                            wspan.line,
                            wspan.col,
                            "mode is `undirected` or `directed`",
                        ))
                    }
                };
                mode_fixed = true;
                p.expect_punct(';')?;
            }
            Tok::Ident(kw) if kw == "def" => {
                let dspan = p.bump().span;
                if p.signals.is_empty() {
                    return Err(Error::parse(
                        dspan.line,
                        dspan.col,
                        "signals must be declared before definitions",
                    ));
                }
                let (name, nspan) = p.expect_name()?;
                if p.def_index.contains_key(&name) {
                    return Err(Error::parse(
                        nspan.line,
                        nspan.col,
                        format!("duplicate definition `{name}`"),
                    ));
                }
                if p.sig_set.contains_key(&name) {
                    return Err(Error::parse(
                        nspan.line,
                        nspan.col,
                        format!("definition `{name}` shadows a signal"),
                    ));
                }
                p.expect_punct(':')?;
                let sort = p.parse_sort()?;
                p.expect_punct('=')?;
                let rt = p.parse_term()?;
                p.expect_punct(';')?;
                let term = p.resolve(rt, Some(&sort))?;
                p.def_index.insert(name.clone(), p.defs.len());
                p.defs.push(Def {
                    name,
                    sort,
                    term,
                    span: dspan,
                });
            }
            other => {
                return Err(p.err(format!(
                    "expected `signals`, `mode` or `def`, found {}",
                    show(&other)
                )))
            }
        }
    }
    let alphabet = Alphabet::new(p.signals.clone())?;
    Ok(Program {
        alphabet,
        mode: p.mode,
        defs: p.defs,
    })
}

/// Parse a standalone term against an existing alphabet, mainly for tests.
pub fn parse_term(
    text: &str,
    alphabet: &Alphabet,
    mode: Mode,
    expected: Option<&Sort>,
) -> Result<Term, Error> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        mode,
        signals: Vec::new(),
        sig_set: HashMap::new(),
        defs: Vec::new(),
        def_index: HashMap::new(),
        rec_stack: Vec::new(),
        text_alphabet: Some(alphabet),
    };
    let rt = p.parse_term()?;
    if !matches!(p.peek(), Tok::Eof) {
        return Err(p.err("trailing input after term"));
    }
    p.resolve(rt, expected)
}
