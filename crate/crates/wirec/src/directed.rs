//! Helpers specific to the directed dialect: direction bookkeeping and the
//! marker-erasure map back to the undirected calculus.

use crate::sorting::{Sort, Wire, Word};
use crate::sos::{Label, LabelAtom};
use crate::syntax::{Dir, Pattern, Term, TermKind};

/// Direction word of a pattern: `d(x?) = L`, `d(x!) = R`. `None` when some
/// atom is unmarked (i.e. the pattern is undirected).
pub fn direction_word(pattern: &Pattern) -> Option<Word> {
    pattern
        .iter()
        .map(|a| a.dir.map(Wire::from_dir))
        .collect::<Option<Vec<_>>>()
        .map(Word)
}

/// Flip every direction in a word (the overline involution).
pub fn overline(w: &Word) -> Word {
    w.flip()
}

/// Flip every direction of a label's atoms.
pub fn overline_label(atoms: &[LabelAtom]) -> Vec<LabelAtom> {
    atoms
        .iter()
        .map(|a| LabelAtom {
            val: a.val,
            dir: a.dir.map(Dir::flip),
        })
        .collect()
}

fn erase_pattern(p: &Pattern) -> Pattern {
    p.iter()
        .map(|a| {
            let mut a = a.clone();
            a.dir = None;
            a
        })
        .collect()
}

fn erase_word(w: &Word) -> Word {
    Word::plain(w.len())
}

fn erase_sort(s: &Sort) -> Sort {
    Sort::new(erase_word(&s.left), erase_word(&s.right))
}

/// Strip all direction decoration, yielding the undirected term with the
/// same behaviour. Directions are a typing discipline only, so the erased
/// term's transition system must match atom-for-atom.
pub fn erase(term: &Term) -> Term {
    let kind = match &term.kind {
        TermKind::Var(n) => TermKind::Var(n.clone()),
        TermKind::Seq(a, b) => TermKind::Seq(Box::new(erase(a)), Box::new(erase(b))),
        TermKind::Ten(a, b) => TermKind::Ten(Box::new(erase(a)), Box::new(erase(b))),
        TermKind::Choice(a, b) => TermKind::Choice(Box::new(erase(a)), Box::new(erase(b))),
        TermKind::Prefix(u, v, body) => {
            TermKind::Prefix(erase_pattern(u), erase_pattern(v), Box::new(erase(body)))
        }
        TermKind::Rec(name, sort, body) => {
            TermKind::Rec(name.clone(), erase_sort(sort), Box::new(erase(body)))
        }
    };
    Term {
        kind,
        span: term.span,
    }
}

/// Strip directions from a label.
pub fn erase_label(label: &Label) -> Label {
    let strip = |atoms: &[LabelAtom]| {
        atoms
            .iter()
            .map(|a| LabelAtom { val: a.val, dir: None })
            .collect::<Vec<_>>()
    };
    Label::new(strip(&label.upper), strip(&label.lower))
}
