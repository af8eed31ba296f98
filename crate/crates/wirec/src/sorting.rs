//! Boundary words, sorts and the sort checker.
//!
//! Both dialects share one representation: a boundary is a word of wire
//! letters. Undirected programs use the single letter `Plain` (so a word is
//! just an arity), directed programs use `L`/`R` letters.

use std::collections::HashSet;
use std::fmt;

use crate::error::Error;
use crate::syntax::{
    pattern_binders, pattern_frees, Alphabet, AtomKind, Dir, Mode, Pattern, Term, TermKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Plain,
    L,
    R,
}

impl Wire {
    pub fn flip(self) -> Wire {
        match self {
            Wire::Plain => Wire::Plain,
            Wire::L => Wire::R,
            Wire::R => Wire::L,
        }
    }

    pub fn from_dir(d: Dir) -> Wire {
        match d {
            Dir::L => Wire::L,
            Dir::R => Wire::R,
        }
    }
}

/// A boundary word. The empty word is shared by both dialects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Wire>);

impl Word {
    pub fn plain(n: usize) -> Word {
        Word(vec![Wire::Plain; n])
    }

    pub fn dirs(ds: impl IntoIterator<Item = Dir>) -> Word {
        Word(ds.into_iter().map(Wire::from_dir).collect())
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        Word(v)
    }

    /// Pointwise complement (`L` <-> `R`), identity on plain letters.
    pub fn flip(&self) -> Word {
        Word(self.0.iter().map(|w| w.flip()).collect())
    }

    /// Reverse the letter order and complement each letter; the boundary
    /// transform used by the mirror operation.
    pub fn mirror(&self) -> Word {
        Word(self.0.iter().rev().map(|w| w.flip()).collect())
    }

    pub fn is_plain(&self) -> bool {
        self.0.iter().all(|w| *w == Wire::Plain)
    }

    pub fn render(&self) -> String {
        if self.is_plain() {
            self.0.len().to_string()
        } else {
            self.0
                .iter()
                .map(|w| match w {
                    Wire::Plain => 'P',
                    Wire::L => 'L',
                    Wire::R => 'R',
                })
                .collect()
        }
    }

    /// Rendering in the concrete syntax of the given dialect.
    pub fn render_mode(&self, mode: Mode) -> String {
        match mode {
            Mode::Undirected => self.0.len().to_string(),
            Mode::Directed => {
                if self.0.is_empty() {
                    "e".to_string()
                } else {
                    self.render()
                }
            }
        }
    }

    /// Compact form for canonical keys.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|w| match w {
                Wire::Plain => 'p',
                Wire::L => 'l',
                Wire::R => 'r',
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sort {
    pub left: Word,
    pub right: Word,
}

impl Sort {
    pub fn new(left: Word, right: Word) -> Sort {
        Sort { left, right }
    }

    pub fn plain(k: usize, l: usize) -> Sort {
        Sort::new(Word::plain(k), Word::plain(l))
    }

    /// Sort of the mirror image of a term of this sort.
    pub fn star(&self) -> Sort {
        Sort::new(self.right.mirror(), self.left.mirror())
    }

    pub fn render(&self) -> String {
        format!("({},{})", self.left.render(), self.right.render())
    }

    pub fn render_mode(&self, mode: Mode) -> String {
        format!(
            "({},{})",
            self.left.render_mode(mode),
            self.right.render_mode(mode)
        )
    }

    pub fn key(&self) -> String {
        format!("({},{})", self.left.key(), self.right.key())
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Typing context threaded through inference.
pub struct SortContext<'a> {
    pub alphabet: &'a Alphabet,
    pub mode: Mode,
    procs: Vec<(String, Sort)>,
    sigs: Vec<Vec<String>>,
}

impl<'a> SortContext<'a> {
    pub fn new(alphabet: &'a Alphabet, mode: Mode) -> SortContext<'a> {
        SortContext {
            alphabet,
            mode,
            procs: Vec::new(),
            sigs: Vec::new(),
        }
    }

    fn proc_sort(&self, name: &str) -> Option<&Sort> {
        self.procs
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    fn sig_in_scope(&self, name: &str) -> bool {
        self.sigs.iter().any(|g| g.iter().any(|x| x == name))
    }
}

fn mismatch(t: &Term, expected: &Sort, found: &Sort, mode: Mode) -> Error {
    Error::SortMismatch {
        line: t.span.line,
        col: t.span.col,
        expected: expected.render_mode(mode),
        found: found.render_mode(mode),
    }
}

/// Boundary word spelled by one side of a prefix pattern, with dialect checks.
fn pattern_word(p: &Pattern, ctx: &SortContext, span: crate::syntax::Span) -> Result<Word, Error> {
    let mut letters = Vec::with_capacity(p.len());
    for atom in p {
        match (ctx.mode, atom.dir) {
            (Mode::Undirected, None) => letters.push(Wire::Plain),
            (Mode::Directed, Some(d)) => letters.push(Wire::from_dir(d)),
            (Mode::Undirected, Some(_)) => {
                return Err(Error::sort(
                    span.line,
                    span.col,
                    "direction marker in an undirected program",
                ))
            }
            (Mode::Directed, None) => {
                return Err(Error::sort(
                    span.line,
                    span.col,
                    "missing direction marker in a directed program",
                ))
            }
        }
    }
    Ok(Word(letters))
}

/// Infer the sort of a term under a context; errors carry source positions.
pub fn infer(t: &Term, ctx: &mut SortContext) -> Result<Sort, Error> {
    match &t.kind {
        TermKind::Var(n) => ctx.proc_sort(n).cloned().ok_or_else(|| {
            Error::sort(
                t.span.line,
                t.span.col,
                format!("unbound process variable `{n}`"),
            )
        }),
        TermKind::Seq(a, b) => {
            let sa = infer(a, ctx)?;
            let sb = infer(b, ctx)?;
            if sa.right != sb.left {
                let expected = Sort::new(sa.right.clone(), sb.right.clone());
                return Err(mismatch(b, &expected, &sb, ctx.mode));
            }
            Ok(Sort::new(sa.left, sb.right))
        }
        TermKind::Ten(a, b) => {
            let sa = infer(a, ctx)?;
            let sb = infer(b, ctx)?;
            Ok(Sort::new(
                sa.left.concat(&sb.left),
                sa.right.concat(&sb.right),
            ))
        }
        TermKind::Choice(a, b) => {
            let sa = infer(a, ctx)?;
            let sb = infer(b, ctx)?;
            if sa != sb {
                return Err(mismatch(b, &sa, &sb, ctx.mode));
            }
            Ok(sa)
        }
        TermKind::Prefix(u, v, body) => {
            let binders = pattern_binders(u, v);
            let frees = pattern_frees(u, v);
            for x in &binders {
                if frees.contains(x) {
                    return Err(Error::sort(
                        t.span.line,
                        t.span.col,
                        format!("signal variable `{x}` occurs both bound and free in one prefix"),
                    ));
                }
            }
            for x in &frees {
                if !ctx.sig_in_scope(x) {
                    return Err(Error::sort(
                        t.span.line,
                        t.span.col,
                        format!("free signal variable `{x}` is not in scope"),
                    ));
                }
            }
            for atom in u.iter().chain(v.iter()) {
                if let AtomKind::Sig(id) = &atom.kind {
                    debug_assert!((*id as usize) < ctx.alphabet.len());
                    let _ = id;
                }
            }
            let du = pattern_word(u, ctx, t.span)?;
            let dv = pattern_word(v, ctx, t.span)?;
            let sort = Sort::new(du.flip(), dv);
            ctx.sigs.push(binders);
            let sb = infer(body, ctx);
            ctx.sigs.pop();
            let sb = sb?;
            if sb != sort {
                return Err(mismatch(body, &sort, &sb, ctx.mode));
            }
            Ok(sort)
        }
        TermKind::Rec(n, tau, body) => {
            let expected_dialect_ok = match ctx.mode {
                Mode::Undirected => tau.left.is_plain() && tau.right.is_plain(),
                Mode::Directed => {
                    tau.left.0.iter().all(|w| *w != Wire::Plain)
                        && tau.right.0.iter().all(|w| *w != Wire::Plain)
                }
            };
            if !expected_dialect_ok {
                return Err(Error::sort(
                    t.span.line,
                    t.span.col,
                    format!(
                        "recursion sort {} does not belong to the {} dialect",
                        tau.render(),
                        ctx.mode
                    ),
                ));
            }
            ctx.procs.push((n.clone(), tau.clone()));
            let sb = infer(body, ctx);
            ctx.procs.pop();
            let sb = sb?;
            if sb != *tau {
                return Err(mismatch(body, tau, &sb, ctx.mode));
            }
            Ok(sb)
        }
    }
}

/// Infer the sort of a closed term.
pub fn infer_closed(t: &Term, alphabet: &Alphabet, mode: Mode) -> Result<Sort, Error> {
    let mut ctx = SortContext::new(alphabet, mode);
    infer(t, &mut ctx)
}

/// Check every definition of a program against its declared sort.
pub fn check_definitions(program: &crate::parse::Program) -> Result<(), Error> {
    let mut seen: HashSet<&str> = HashSet::new();
    for def in &program.defs {
        if !seen.insert(def.name.as_str()) {
            return Err(Error::sort(
                def.span.line,
                def.span.col,
                format!("duplicate definition `{}`", def.name),
            ));
        }
        let inferred = infer_closed(&def.term, &program.alphabet, program.mode)?;
        if inferred != def.sort {
            return Err(Error::SortMismatch {
                line: def.span.line,
                col: def.span.col,
                expected: def.sort.render_mode(program.mode),
                found: inferred.render_mode(program.mode),
            });
        }
    }
    Ok(())
}
