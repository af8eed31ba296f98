//! Reachable transition graphs: bounded exploration, DOT and JSON views.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::sorting::{infer_closed, Sort, Word};
use crate::sos::{parse_word, render_word, Engine, Label};
use crate::syntax::{Alphabet, Dir, Mode, Term};

/// A labelled transition system rooted at an initial state. States carry
/// their canonical term keys; transitions list the full saturated relation
/// of every state when `complete` holds.
#[derive(Debug, Clone)]
pub struct Lts {
    pub sort: Sort,
    pub mode: Mode,
    pub alphabet: Alphabet,
    pub states: Vec<String>,
    /// Representative term per state; empty on imported graphs.
    pub terms: Vec<Term>,
    pub initial: usize,
    pub transitions: Vec<(usize, Label, usize)>,
    pub complete: bool,
    pub warning: Option<String>,
}

impl Lts {
    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = &(usize, Label, usize)> {
        self.transitions.iter().filter(move |(s, _, _)| *s == state)
    }
}

/// Explore the saturated transition graph reachable from `term`, visiting at
/// most `budget` canonical states (including intermediate scaffolding).
/// Exceeding the budget yields a truncated graph flagged `complete: false`.
pub fn explore(
    term: &Term,
    alphabet: &Alphabet,
    mode: Mode,
    budget: usize,
) -> Result<Lts, Error> {
    let sort = infer_closed(term, alphabet, mode)?;
    let mut engine = Engine::new(alphabet, mode, budget);
    let root = match engine.ensure(term) {
        Ok(id) => id,
        Err(Error::Budget { budget }) if engine.num_states() > 0 => {
            return Ok(collect(&engine, 0, sort, alphabet, mode, Some(budget)));
        }
        Err(e) => return Err(e),
    };
    let overflow = match engine.run() {
        Ok(()) => None,
        Err(Error::Budget { budget }) => Some(budget),
        Err(e) => return Err(e),
    };
    Ok(collect(&engine, root, sort, alphabet, mode, overflow))
}

fn collect(
    engine: &Engine,
    root: usize,
    sort: Sort,
    alphabet: &Alphabet,
    mode: Mode,
    overflow: Option<usize>,
) -> Lts {
    // Breadth-first numbering over edges ordered by label then target key.
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    number.insert(root, 0);
    order.push(root);
    queue.push_back(root);
    while let Some(s) = queue.pop_front() {
        let mut edges: Vec<(Label, usize)> = engine.saturated(s).iter().cloned().collect();
        edges.sort_by(|(l1, t1), (l2, t2)| {
            l1.cmp(l2)
                .then_with(|| engine.key(*t1).cmp(engine.key(*t2)))
        });
        for (_, t) in edges {
            if let std::collections::hash_map::Entry::Vacant(slot) = number.entry(t) {
                slot.insert(order.len());
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    let states: Vec<String> = order.iter().map(|&s| engine.key(s).to_string()).collect();
    let terms: Vec<Term> = order.iter().map(|&s| engine.term(s).clone()).collect();
    let mut transitions: Vec<(usize, Label, usize)> = Vec::new();
    for (&old, &new) in number.iter() {
        for (l, t) in engine.saturated(old) {
            transitions.push((new, l.clone(), number[t]));
        }
    }
    transitions.sort();
    transitions.dedup();
    Lts {
        sort,
        mode,
        alphabet: alphabet.clone(),
        states,
        terms,
        initial: 0,
        transitions,
        complete: overflow.is_none(),
        warning: overflow.map(|b| format!("exploration truncated at {b} canonical states")),
    }
}

/// Graphviz rendering; the initial state is double-circled, state keys sit
/// in tooltips, silent actions print as `_`.
pub fn export_dot(lts: &Lts) -> String {
    let mut out = String::new();
    out.push_str("digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (i, key) in lts.states.iter().enumerate() {
        let shape = if i == lts.initial {
            " shape=doublecircle,"
        } else {
            ""
        };
        out.push_str(&format!(
            "  {i} [{shape} tooltip=\"{}\"];\n",
            key.replace('\\', "\\\\").replace('"', "\\\"")
        ));
    }
    for (s, l, t) in &lts.transitions {
        out.push_str(&format!(
            "  {s} -> {t} [label=\"{}\"];\n",
            l.render(&lts.alphabet).replace('"', "\\\"")
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize, Deserialize)]
struct SortJson {
    left: String,
    right: String,
}

#[derive(Serialize, Deserialize)]
struct LtsJson {
    sort: SortJson,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: usize,
    transitions: Vec<(usize, String, String, usize)>,
    complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

/// Stable JSON rendering of an exploration.
pub fn export_json(lts: &Lts) -> String {
    let doc = LtsJson {
        sort: SortJson {
            left: lts.sort.left.render_mode(lts.mode),
            right: lts.sort.right.render_mode(lts.mode),
        },
        alphabet: lts.alphabet.names().to_vec(),
        states: lts.states.clone(),
        initial: lts.initial,
        transitions: lts
            .transitions
            .iter()
            .map(|(s, l, t)| {
                (
                    *s,
                    render_word(&l.upper, &lts.alphabet),
                    render_word(&l.lower, &lts.alphabet),
                    *t,
                )
            })
            .collect(),
        complete: lts.complete,
        warning: lts.warning.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

fn parse_side_text(s: &str) -> Result<(Word, Mode), Error> {
    if s.chars().all(|c| c.is_ascii_digit()) && !s.is_empty() {
        let n: usize = s
            .parse()
            .map_err(|_| Error::Schema(format!("bad boundary `{s}`")))?;
        return Ok((Word::plain(n), Mode::Undirected));
    }
    if s == "e" {
        return Ok((Word::empty(), Mode::Directed));
    }
    let mut dirs = Vec::new();
    for c in s.chars() {
        match c {
            'L' => dirs.push(Dir::L),
            'R' => dirs.push(Dir::R),
            _ => return Err(Error::Schema(format!("bad boundary `{s}`"))),
        }
    }
    Ok((Word::dirs(dirs), Mode::Directed))
}

/// Parse and validate a JSON exploration produced by [`export_json`].
pub fn import_json(text: &str) -> Result<Lts, Error> {
    let doc: LtsJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let alphabet = Alphabet::new(doc.alphabet.clone())
        .map_err(|e| Error::Schema(format!("bad alphabet: {e}")))?;
    let (left, lm) = parse_side_text(&doc.sort.left)?;
    let (right, rm) = parse_side_text(&doc.sort.right)?;
    let mode = if lm == Mode::Directed || rm == Mode::Directed {
        Mode::Directed
    } else {
        Mode::Undirected
    };
    let sort = Sort::new(left, right);
    if doc.states.is_empty() {
        return Err(Error::Schema("no states".to_string()));
    }
    if doc.initial >= doc.states.len() {
        return Err(Error::Schema(format!(
            "initial state {} out of range",
            doc.initial
        )));
    }
    let mut transitions = Vec::with_capacity(doc.transitions.len());
    for (s, u, v, t) in &doc.transitions {
        if *s >= doc.states.len() || *t >= doc.states.len() {
            return Err(Error::Schema(format!(
                "dangling state index in transition [{s}, \"{u}\", \"{v}\", {t}]"
            )));
        }
        let upper = parse_word(u, &alphabet)?;
        let lower = parse_word(v, &alphabet)?;
        if upper.len() != sort.left.len() || lower.len() != sort.right.len() {
            return Err(Error::Schema(format!(
                "label \"{u}\"/\"{v}\" does not fit sort {}",
                sort.render()
            )));
        }
        transitions.push((*s, Label::new(upper, lower), *t));
    }
    transitions.sort();
    transitions.dedup();
    Ok(Lts {
        sort,
        mode,
        alphabet,
        states: doc.states,
        terms: Vec::new(),
        initial: doc.initial,
        transitions,
        complete: doc.complete,
        warning: doc.warning,
    })
}

/// Plain-text listing for terminal output.
pub fn render_text(lts: &Lts) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "sort {}  states {}  transitions {}  complete {}\n",
        lts.sort.render_mode(lts.mode),
        lts.states.len(),
        lts.transitions.len(),
        lts.complete
    ));
    if let Some(w) = &lts.warning {
        out.push_str(&format!("warning: {w}\n"));
    }
    for (i, key) in lts.states.iter().enumerate() {
        let mark = if i == lts.initial { "*" } else { " " };
        out.push_str(&format!("{mark}{i}: {key}\n"));
        for (_, l, t) in lts.outgoing(i) {
            out.push_str(&format!("    --[{}]--> {t}\n", l.render(&lts.alphabet)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stdlib;

    fn ab01() -> Alphabet {
        Alphabet::new(["0", "1"]).unwrap()
    }

    #[test]
    fn identity_explores_to_one_state_with_three_loops() {
        let lts = explore(&stdlib::ident(), &ab01(), Mode::Undirected, 100).unwrap();
        assert_eq!(lts.states.len(), 1);
        assert_eq!(lts.initial, 0);
        assert_eq!(lts.transitions.len(), 3);
        assert!(lts.complete);
        assert!(lts.warning.is_none());
        for (s, _, t) in &lts.transitions {
            assert_eq!((*s, *t), (0, 0));
        }
    }

    #[test]
    fn ring_explores_to_three_silent_states() {
        let lts = explore(&stdlib::ring(0, 1), &ab01(), Mode::Undirected, 10_000).unwrap();
        assert_eq!(lts.states.len(), 3);
        assert!(lts.transitions.iter().all(|(_, l, _)| l.is_silent()));
        // Saturation makes the silent reachability total: 3 states x 3 targets.
        assert_eq!(lts.transitions.len(), 9);
    }

    #[test]
    fn exploration_is_deterministic() {
        let a = explore(&stdlib::ring(0, 1), &ab01(), Mode::Undirected, 10_000).unwrap();
        let b = explore(&stdlib::ring(0, 1), &ab01(), Mode::Undirected, 10_000).unwrap();
        assert_eq!(a.states, b.states);
        assert_eq!(a.transitions, b.transitions);
        assert_eq!(export_json(&a), export_json(&b));
    }

    #[test]
    fn truncated_exploration_is_marked_incomplete() {
        let grow = Term::rec(
            "Y",
            Sort::plain(1, 1),
            Term::prefix(
                vec![crate::syntax::PatternAtom::plain(crate::syntax::AtomKind::Sig(0))],
                vec![crate::syntax::PatternAtom::plain(crate::syntax::AtomKind::Sig(0))],
                Term::seq(
                    Term::ten(Term::var("Y"), stdlib::d()),
                    Term::ten(stdlib::ident(), stdlib::e()),
                ),
            ),
        );
        let lts = explore(&grow, &ab01(), Mode::Undirected, 30).unwrap();
        assert!(!lts.complete);
        assert!(lts.warning.as_deref().unwrap().contains("truncated"));
        assert!(lts.states.len() <= 30);
        for (s, _, t) in &lts.transitions {
            assert!(*s < lts.states.len() && *t < lts.states.len());
        }
    }

    #[test]
    fn json_round_trips() {
        for term in [stdlib::ring(0, 1), stdlib::flip0(0, 1), stdlib::d()] {
            let lts = explore(&term, &ab01(), Mode::Undirected, 10_000).unwrap();
            let back = import_json(&export_json(&lts)).unwrap();
            assert_eq!(back.sort, lts.sort);
            assert_eq!(back.states, lts.states);
            assert_eq!(back.initial, lts.initial);
            assert_eq!(back.transitions, lts.transitions);
            assert_eq!(back.complete, lts.complete);
        }
        let dl = explore(&stdlib::d_l(), &ab01(), Mode::Directed, 10_000).unwrap();
        let back = import_json(&export_json(&dl)).unwrap();
        assert_eq!(back.mode, Mode::Directed);
        assert_eq!(back.transitions, dl.transitions);
    }

    #[test]
    fn import_rejects_malformed_data() {
        let lts = explore(&stdlib::ident(), &ab01(), Mode::Undirected, 100).unwrap();
        let good: serde_json::Value = serde_json::from_str(&export_json(&lts)).unwrap();
        type Breaker = Box<dyn Fn(&mut serde_json::Value)>;
        let broken: Vec<(&str, Breaker)> = vec![
            ("initial out of range", Box::new(|v| v["initial"] = 7.into())),
            (
                "dangling transition target",
                Box::new(|v| v["transitions"][0][3] = 9.into()),
            ),
            (
                "label too wide for the sort",
                Box::new(|v| v["transitions"][0][1] = "0 1".into()),
            ),
            (
                "unknown signal in a label",
                Box::new(|v| v["transitions"][0][1] = "2".into()),
            ),
            ("no states", Box::new(|v| v["states"] = serde_json::json!([]))),
        ];
        for (what, tweak) in broken {
            let mut bad = good.clone();
            tweak(&mut bad);
            let err = import_json(&bad.to_string()).unwrap_err().to_string();
            assert!(err.contains("invalid lts data"), "{what}: {err}");
        }
        assert!(import_json("not json").is_err());
        // The untouched document still imports.
        assert!(import_json(&good.to_string()).is_ok());
    }

    #[test]
    fn dot_marks_the_initial_state() {
        let lts = explore(&stdlib::flip0(0, 1), &ab01(), Mode::Undirected, 100).unwrap();
        let dot = export_dot(&lts);
        assert!(dot.starts_with("digraph lts"));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("label=\"1/0\""));
        assert_eq!(dot.matches("->").count(), lts.transitions.len());
    }

    #[test]
    fn text_rendering_summarizes_the_graph() {
        let lts = explore(&stdlib::flip0(0, 1), &ab01(), Mode::Undirected, 100).unwrap();
        let text = render_text(&lts);
        assert!(text.contains("sort (1,1)"));
        assert!(text.contains("states 2"));
        assert!(text.contains("--[1/0]-->"));
        let first = text.lines().find(|l| l.starts_with('*')).unwrap();
        assert!(first.starts_with("*0:"), "initial marker missing: {first}");
    }
}
