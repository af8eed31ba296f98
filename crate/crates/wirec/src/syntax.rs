//! Term syntax: signal alphabets, pattern atoms, the six term formers,
//! substitution, alpha-canonical keys and the mirror transform.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::Error;
use crate::sorting::Sort;

pub type SigId = u32;

/// Dialect of a program: plain boundaries or direction-annotated ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Undirected,
    Directed,
}

/// Direction marker carried by atoms and labels in directed mode.
/// `L` is surface `?` (input), `R` is surface `!` (output).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::L => Dir::R,
            Dir::R => Dir::L,
        }
    }

    pub fn marker(self) -> char {
        match self {
            Dir::L => '?',
            Dir::R => '!',
        }
    }
}

/// The finite signal alphabet of a program. Names are distinct and `_` is
/// reserved for the silent action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, SigId>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Alphabet, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut a = Alphabet {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for n in names {
            let n = n.into();
            if n == "_" {
                return Err(Error::parse(0, 0, "signal name `_` is reserved"));
            }
            if n.is_empty() {
                return Err(Error::parse(0, 0, "signal name must not be empty"));
            }
            if a.index.contains_key(&n) {
                return Err(Error::parse(0, 0, format!("duplicate signal `{n}`")));
            }
            a.index.insert(n.clone(), a.names.len() as SigId);
            a.names.push(n);
        }
        if a.names.is_empty() {
            return Err(Error::parse(0, 0, "alphabet must contain at least one signal"));
        }
        Ok(a)
    }

    pub fn id(&self, name: &str) -> Option<SigId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: SigId) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Source position, 1-based. Synthetic terms use `0:0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Span {
        Span { line, col }
    }
}

/// One position of a prefix pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// Silent action, surface `_`.
    Iota,
    /// Concrete signal constant.
    Sig(SigId),
    /// Binding occurrence `\x`. Repeating the same name in one prefix is a
    /// single binder constrained to carry equal values at all its positions.
    Bind(String),
    /// Free occurrence of a signal variable bound by an enclosing prefix.
    Use(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternAtom {
    pub kind: AtomKind,
    pub dir: Option<Dir>,
}

impl PatternAtom {
    pub fn plain(kind: AtomKind) -> PatternAtom {
        PatternAtom { kind, dir: None }
    }

    pub fn directed(kind: AtomKind, dir: Dir) -> PatternAtom {
        PatternAtom { kind, dir: Some(dir) }
    }
}

pub type Pattern = Vec<PatternAtom>;

#[derive(Debug, Clone)]
pub enum TermKind {
    /// Process variable bound by `rec`.
    Var(String),
    /// Boundary-synchronising composition `P ; Q`.
    Seq(Box<Term>, Box<Term>),
    /// Side-by-side composition `P * Q` without interaction.
    Ten(Box<Term>, Box<Term>),
    /// Pattern-matching prefix `<u / v> . P`.
    Prefix(Pattern, Pattern, Box<Term>),
    /// External choice `P + Q`.
    Choice(Box<Term>, Box<Term>),
    /// Recursion `rec Y : tau . P`.
    Rec(String, Sort, Box<Term>),
}

#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Term {
        Term { kind, span }
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::new(TermKind::Var(name.into()), Span::default())
    }

    pub fn seq(a: Term, b: Term) -> Term {
        Term::new(TermKind::Seq(Box::new(a), Box::new(b)), Span::default())
    }

    pub fn ten(a: Term, b: Term) -> Term {
        Term::new(TermKind::Ten(Box::new(a), Box::new(b)), Span::default())
    }

    pub fn prefix(u: Pattern, v: Pattern, body: Term) -> Term {
        Term::new(TermKind::Prefix(u, v, Box::new(body)), Span::default())
    }

    pub fn choice(a: Term, b: Term) -> Term {
        Term::new(TermKind::Choice(Box::new(a), Box::new(b)), Span::default())
    }

    pub fn rec(name: impl Into<String>, sort: Sort, body: Term) -> Term {
        Term::new(TermKind::Rec(name.into(), sort, Box::new(body)), Span::default())
    }
}

/// Binding occurrences of a prefix in first-occurrence order, deduplicated.
pub fn pattern_binders(u: &Pattern, v: &Pattern) -> Vec<String> {
    let mut out = Vec::new();
    for atom in u.iter().chain(v.iter()) {
        if let AtomKind::Bind(x) = &atom.kind {
            if !out.iter().any(|y| y == x) {
                out.push(x.clone());
            }
        }
    }
    out
}

/// Free signal variables of a prefix pattern pair.
pub fn pattern_frees(u: &Pattern, v: &Pattern) -> HashSet<String> {
    let mut out = HashSet::new();
    for atom in u.iter().chain(v.iter()) {
        if let AtomKind::Use(x) = &atom.kind {
            out.insert(x.clone());
        }
    }
    out
}

/// Free process variables of a term.
pub fn free_process_vars(t: &Term) -> HashSet<String> {
    fn go(t: &Term, bound: &mut Vec<String>, out: &mut HashSet<String>) {
        match &t.kind {
            TermKind::Var(n) => {
                if !bound.iter().any(|b| b == n) {
                    out.insert(n.clone());
                }
            }
            TermKind::Seq(a, b) | TermKind::Ten(a, b) | TermKind::Choice(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            TermKind::Prefix(_, _, b) => go(b, bound, out),
            TermKind::Rec(n, _, b) => {
                bound.push(n.clone());
                go(b, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = HashSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Free signal variables of a term.
pub fn free_signal_vars(t: &Term) -> HashSet<String> {
    fn go(t: &Term, bound: &mut Vec<Vec<String>>, out: &mut HashSet<String>) {
        match &t.kind {
            TermKind::Var(_) => {}
            TermKind::Seq(a, b) | TermKind::Ten(a, b) | TermKind::Choice(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            TermKind::Prefix(u, v, b) => {
                for atom in u.iter().chain(v.iter()) {
                    if let AtomKind::Use(x) = &atom.kind {
                        if !bound.iter().any(|g| g.iter().any(|y| y == x)) {
                            out.insert(x.clone());
                        }
                    }
                }
                bound.push(pattern_binders(u, v));
                go(b, bound, out);
                bound.pop();
            }
            TermKind::Rec(_, _, b) => go(b, bound, out),
        }
    }
    let mut out = HashSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// `true` when the term has neither free process nor free signal variables.
pub fn is_closed(t: &Term) -> bool {
    free_process_vars(t).is_empty() && free_signal_vars(t).is_empty()
}

/// Substitute the closed term `r` for the free process variable `name`.
/// An inner `rec` binding the same name shadows as usual; since `r` is
/// closed no capture can occur.
pub fn subst_process(t: &Term, name: &str, r: &Term) -> Term {
    debug_assert!(is_closed(r), "substituted process must be closed");
    fn go(t: &Term, name: &str, r: &Term) -> Term {
        let kind = match &t.kind {
            TermKind::Var(n) => {
                if n == name {
                    return r.clone();
                }
                TermKind::Var(n.clone())
            }
            TermKind::Seq(a, b) => {
                TermKind::Seq(Box::new(go(a, name, r)), Box::new(go(b, name, r)))
            }
            TermKind::Ten(a, b) => {
                TermKind::Ten(Box::new(go(a, name, r)), Box::new(go(b, name, r)))
            }
            TermKind::Choice(a, b) => {
                TermKind::Choice(Box::new(go(a, name, r)), Box::new(go(b, name, r)))
            }
            TermKind::Prefix(u, v, b) => {
                TermKind::Prefix(u.clone(), v.clone(), Box::new(go(b, name, r)))
            }
            TermKind::Rec(n, s, b) => {
                if n == name {
                    TermKind::Rec(n.clone(), s.clone(), b.clone())
                } else {
                    TermKind::Rec(n.clone(), s.clone(), Box::new(go(b, name, r)))
                }
            }
        };
        Term::new(kind, t.span)
    }
    go(t, name, r)
}

/// Value assigned to a signal variable: a concrete signal or the silent action.
pub type SigValue = Option<SigId>;

/// Substitute signal values for free signal variables. Prefixes binding one
/// of the mapped names shadow it for their body; the substituted values are
/// ground, so no capture can occur.
pub fn subst_signals(t: &Term, map: &HashMap<String, SigValue>) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    let sub_atom = |atom: &PatternAtom, map: &HashMap<String, SigValue>| -> PatternAtom {
        match &atom.kind {
            AtomKind::Use(x) => match map.get(x) {
                Some(Some(s)) => PatternAtom {
                    kind: AtomKind::Sig(*s),
                    dir: atom.dir,
                },
                Some(None) => PatternAtom {
                    kind: AtomKind::Iota,
                    dir: atom.dir,
                },
                None => atom.clone(),
            },
            _ => atom.clone(),
        }
    };
    let kind = match &t.kind {
        TermKind::Var(n) => TermKind::Var(n.clone()),
        TermKind::Seq(a, b) => TermKind::Seq(
            Box::new(subst_signals(a, map)),
            Box::new(subst_signals(b, map)),
        ),
        TermKind::Ten(a, b) => TermKind::Ten(
            Box::new(subst_signals(a, map)),
            Box::new(subst_signals(b, map)),
        ),
        TermKind::Choice(a, b) => TermKind::Choice(
            Box::new(subst_signals(a, map)),
            Box::new(subst_signals(b, map)),
        ),
        TermKind::Prefix(u, v, b) => {
            let u2: Pattern = u.iter().map(|a| sub_atom(a, map)).collect();
            let v2: Pattern = v.iter().map(|a| sub_atom(a, map)).collect();
            let binders = pattern_binders(u, v);
            let inner: HashMap<String, SigValue> = map
                .iter()
                .filter(|(k, _)| !binders.iter().any(|b| b == *k))
                .map(|(k, v)| (k.clone(), *v))
                .collect();
            TermKind::Prefix(u2, v2, Box::new(subst_signals(b, &inner)))
        }
        TermKind::Rec(n, s, b) => {
            TermKind::Rec(n.clone(), s.clone(), Box::new(subst_signals(b, map)))
        }
    };
    Term::new(kind, t.span)
}

/// A term paired with its nameless linearization. Two terms are
/// alpha-equivalent exactly when their keys coincide; the key doubles as the
/// stable state identity during exploration.
#[derive(Debug, Clone)]
pub struct CanonicalTerm {
    pub term: Term,
    pub key: String,
}

impl PartialEq for CanonicalTerm {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CanonicalTerm {}

impl std::hash::Hash for CanonicalTerm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

pub fn canonicalize(t: &Term) -> CanonicalTerm {
    CanonicalTerm {
        key: canonical_key(t),
        term: t.clone(),
    }
}

/// Nameless rendering: process variables become `rec` depths, signal
/// variables become (prefix depth, binder position) pairs.
pub fn canonical_key(t: &Term) -> String {
    fn atom_key(atom: &PatternAtom, binders: &[String], senv: &[Vec<String>], out: &mut String) {
        match &atom.kind {
            AtomKind::Iota => out.push('_'),
            AtomKind::Sig(s) => {
                out.push('#');
                out.push_str(&s.to_string());
            }
            AtomKind::Bind(x) => {
                let pos = binders.iter().position(|b| b == x).expect("binder listed");
                out.push('\\');
                out.push_str(&pos.to_string());
            }
            AtomKind::Use(x) => {
                let mut hit = None;
                for (depth, group) in senv.iter().rev().enumerate() {
                    if let Some(pos) = group.iter().position(|b| b == x) {
                        hit = Some((depth, pos));
                        break;
                    }
                }
                match hit {
                    Some((d, p)) => {
                        out.push('&');
                        out.push_str(&d.to_string());
                        out.push('.');
                        out.push_str(&p.to_string());
                    }
                    None => {
                        out.push('&');
                        out.push_str(x);
                    }
                }
            }
        }
        if let Some(d) = atom.dir {
            out.push(d.marker());
        }
    }

    fn go(t: &Term, penv: &mut Vec<String>, senv: &mut Vec<Vec<String>>, out: &mut String) {
        match &t.kind {
            TermKind::Var(n) => {
                out.push('V');
                match penv.iter().rposition(|b| b == n) {
                    Some(pos) => out.push_str(&(penv.len() - 1 - pos).to_string()),
                    None => out.push_str(n),
                }
            }
            TermKind::Seq(a, b) => {
                out.push('(');
                go(a, penv, senv, out);
                out.push(';');
                go(b, penv, senv, out);
                out.push(')');
            }
            TermKind::Ten(a, b) => {
                out.push('(');
                go(a, penv, senv, out);
                out.push('*');
                go(b, penv, senv, out);
                out.push(')');
            }
            TermKind::Choice(a, b) => {
                out.push('(');
                go(a, penv, senv, out);
                out.push('+');
                go(b, penv, senv, out);
                out.push(')');
            }
            TermKind::Prefix(u, v, b) => {
                let binders = pattern_binders(u, v);
                out.push('<');
                for (i, atom) in u.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    atom_key(atom, &binders, senv, out);
                }
                out.push('/');
                for (i, atom) in v.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    atom_key(atom, &binders, senv, out);
                }
                out.push('>');
                out.push('.');
                senv.push(binders);
                go(b, penv, senv, out);
                senv.pop();
            }
            TermKind::Rec(n, s, b) => {
                out.push('u');
                out.push_str(&s.key());
                out.push('.');
                penv.push(n.clone());
                go(b, penv, senv, out);
                penv.pop();
            }
        }
    }

    let mut out = String::new();
    go(t, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    canonical_key(a) == canonical_key(b)
}

/// The mirror transform: compositions swap operands, patterns reverse, and
/// recursion sorts are mirrored alongside. It is a syntactic involution.
pub fn star(t: &Term) -> Term {
    let kind = match &t.kind {
        TermKind::Var(n) => TermKind::Var(n.clone()),
        TermKind::Seq(a, b) => TermKind::Seq(Box::new(star(b)), Box::new(star(a))),
        TermKind::Ten(a, b) => TermKind::Ten(Box::new(star(b)), Box::new(star(a))),
        TermKind::Choice(a, b) => TermKind::Choice(Box::new(star(a)), Box::new(star(b))),
        TermKind::Prefix(u, v, b) => {
            let mut u2: Pattern = v.clone();
            u2.reverse();
            let mut v2: Pattern = u.clone();
            v2.reverse();
            TermKind::Prefix(u2, v2, Box::new(star(b)))
        }
        TermKind::Rec(n, s, b) => TermKind::Rec(n.clone(), s.star(), Box::new(star(b))),
    };
    Term::new(kind, t.span)
}

/// Rename every binder to a fresh `{prefix}{n}` name, preserving alpha class.
pub fn freshen(t: &Term, prefix: &str, counter: &mut usize) -> Term {
    fn go(
        t: &Term,
        prefix: &str,
        counter: &mut usize,
        pmap: &mut Vec<(String, String)>,
        smap: &mut Vec<Vec<(String, String)>>,
    ) -> Term {
        let kind = match &t.kind {
            TermKind::Var(n) => {
                let new = pmap
                    .iter()
                    .rev()
                    .find(|(old, _)| old == n)
                    .map(|(_, new)| new.clone())
                    .unwrap_or_else(|| n.clone());
                TermKind::Var(new)
            }
            TermKind::Seq(a, b) => TermKind::Seq(
                Box::new(go(a, prefix, counter, pmap, smap)),
                Box::new(go(b, prefix, counter, pmap, smap)),
            ),
            TermKind::Ten(a, b) => TermKind::Ten(
                Box::new(go(a, prefix, counter, pmap, smap)),
                Box::new(go(b, prefix, counter, pmap, smap)),
            ),
            TermKind::Choice(a, b) => TermKind::Choice(
                Box::new(go(a, prefix, counter, pmap, smap)),
                Box::new(go(b, prefix, counter, pmap, smap)),
            ),
            TermKind::Prefix(u, v, b) => {
                let binders = pattern_binders(u, v);
                let group: Vec<(String, String)> = binders
                    .iter()
                    .map(|old| {
                        *counter += 1;
                        (old.clone(), format!("{prefix}{counter}"))
                    })
                    .collect();
                let rename = |atom: &PatternAtom| -> PatternAtom {
                    let kind = match &atom.kind {
                        AtomKind::Bind(x) => {
                            let new = group
                                .iter()
                                .find(|(old, _)| old == x)
                                .map(|(_, new)| new.clone())
                                .expect("binder renamed");
                            AtomKind::Bind(new)
                        }
                        AtomKind::Use(x) => {
                            let new = smap
                                .iter()
                                .rev()
                                .find_map(|g| {
                                    g.iter().find(|(old, _)| old == x).map(|(_, n)| n.clone())
                                })
                                .unwrap_or_else(|| x.clone());
                            AtomKind::Use(new)
                        }
                        other => other.clone(),
                    };
                    PatternAtom {
                        kind,
                        dir: atom.dir,
                    }
                };
                let u2: Pattern = u.iter().map(rename).collect();
                let v2: Pattern = v.iter().map(rename).collect();
                smap.push(group);
                let b2 = go(b, prefix, counter, pmap, smap);
                smap.pop();
                TermKind::Prefix(u2, v2, Box::new(b2))
            }
            TermKind::Rec(n, s, b) => {
                *counter += 1;
                let new = format!("{prefix}{counter}");
                pmap.push((n.clone(), new.clone()));
                let b2 = go(b, prefix, counter, pmap, smap);
                pmap.pop();
                TermKind::Rec(new, s.clone(), Box::new(b2))
            }
        };
        Term::new(kind, t.span)
    }
    go(t, prefix, counter, &mut Vec::new(), &mut Vec::new())
}

/// Precedence-aware rendering in the concrete syntax; `rec` annotations are
/// always printed so the output reparses standalone.
pub fn print_term(t: &Term, alphabet: &Alphabet) -> String {
    fn atom_str(atom: &PatternAtom, alphabet: &Alphabet) -> String {
        let mut s = match &atom.kind {
            AtomKind::Iota => "_".to_string(),
            AtomKind::Sig(id) => alphabet.name(*id).to_string(),
            AtomKind::Bind(x) => format!("\\{x}"),
            AtomKind::Use(x) => x.clone(),
        };
        if let Some(d) = atom.dir {
            s.push(d.marker());
        }
        s
    }

    fn pattern_str(p: &Pattern, alphabet: &Alphabet) -> String {
        p.iter()
            .map(|a| atom_str(a, alphabet))
            .collect::<Vec<_>>()
            .join(" ")
    }

    // Precedence: choice 1, seq 2, tensor 3, atoms 4.
    fn go(t: &Term, alphabet: &Alphabet, min: u8, out: &mut String) {
        let prec = match &t.kind {
            TermKind::Choice(_, _) => 1,
            TermKind::Seq(_, _) => 2,
            TermKind::Ten(_, _) => 3,
            _ => 4,
        };
        let parens = prec < min;
        if parens {
            out.push('(');
        }
        match &t.kind {
            TermKind::Var(n) => out.push_str(n),
            TermKind::Choice(a, b) => {
                go(a, alphabet, 1, out);
                out.push_str(" + ");
                go(b, alphabet, 2, out);
            }
            TermKind::Seq(a, b) => {
                go(a, alphabet, 2, out);
                out.push_str(" ; ");
                go(b, alphabet, 3, out);
            }
            TermKind::Ten(a, b) => {
                go(a, alphabet, 3, out);
                out.push_str(" * ");
                go(b, alphabet, 4, out);
            }
            TermKind::Prefix(u, v, b) => {
                out.push('<');
                out.push_str(&pattern_str(u, alphabet));
                out.push_str(" / ");
                out.push_str(&pattern_str(v, alphabet));
                out.push_str("> . ");
                go(b, alphabet, 4, out);
            }
            TermKind::Rec(n, s, b) => {
                out.push_str("rec ");
                out.push_str(n);
                out.push_str(" : ");
                out.push_str(&s.render());
                out.push_str(" . ");
                go(b, alphabet, 4, out);
            }
        }
        if parens {
            out.push(')');
        }
    }

    let mut out = String::new();
    go(t, alphabet, 1, &mut out);
    out
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Undirected => write!(f, "undirected"),
            Mode::Directed => write!(f, "directed"),
        }
    }
}
