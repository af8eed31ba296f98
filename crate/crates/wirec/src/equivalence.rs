//! Bisimilarity checking by partition refinement, with verifiable
//! evidence either way: a relation witness or a distinguishing play.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::error::Error;
use crate::lts::{explore, Lts};
use crate::sos::Label;
use crate::syntax::{Alphabet, Mode, Term};

/// Coarsest-partition refinement by signature hashing. Returns the partition
/// after every round, starting from the all-in-one partition; the last entry
/// is stable. Block ids are normalised by first occurrence, so equal
/// partitions have equal vectors.
pub fn refine_rounds<L: Clone + Eq + Ord + Hash>(
    n_states: usize,
    transitions: &[(usize, L, usize)],
) -> Vec<Vec<usize>> {
    let mut rounds = vec![vec![0; n_states]];
    loop {
        let prev = rounds.last().unwrap().clone();
        let mut sigs: Vec<Vec<(L, usize)>> = vec![Vec::new(); n_states];
        for (s, l, t) in transitions {
            sigs[*s].push((l.clone(), prev[*t]));
        }
        for sig in &mut sigs {
            sig.sort();
            sig.dedup();
        }
        type BlockKey<'a, L> = (usize, &'a [(L, usize)]);
        let mut ids: HashMap<BlockKey<L>, usize> = HashMap::new();
        let mut next = Vec::with_capacity(n_states);
        for s in 0..n_states {
            let key = (prev[s], sigs[s].as_slice());
            let fresh = ids.len();
            next.push(*ids.entry(key).or_insert(fresh));
        }
        if next == prev {
            return rounds;
        }
        rounds.push(next);
    }
}

/// Stable partition of the state space: `block_of[s]` is the block id of `s`.
pub fn refine<L: Clone + Eq + Ord + Hash>(
    n_states: usize,
    transitions: &[(usize, L, usize)],
) -> Vec<usize> {
    refine_rounds(n_states, transitions).pop().unwrap()
}

/// Which term a counterexample step challenges from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One round of the distinguishing play on the union graph. The challenged
/// side cannot match `label` into the block `splitter`; an empty splitter
/// means it has no `label` move at all (the play ends there).
#[derive(Debug, Clone)]
pub struct CexStep {
    pub side: Side,
    pub label: Label,
    pub splitter: Vec<usize>,
    pub attacker_from: usize,
    pub attacker_to: usize,
    pub defender_from: usize,
    pub defender_to: Option<usize>,
}

/// Outcome of a bisimilarity check, carrying machine-checkable evidence.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub bisimilar: bool,
    /// All same-block cross pairs `(left state, right state)`, indices local
    /// to each side. Contains the initial pair whenever `bisimilar`.
    pub witness: Vec<(usize, usize)>,
    pub counterexample: Vec<CexStep>,
    pub left_states: usize,
    pub right_states: usize,
}

/// The two graphs glued side by side; right states are shifted by
/// `left_states`.
pub struct Union {
    pub n: usize,
    pub left_states: usize,
    pub transitions: Vec<(usize, Label, usize)>,
}

pub fn union_of(a: &Lts, b: &Lts) -> Union {
    let off = a.states.len();
    let mut transitions = a.transitions.clone();
    transitions.extend(
        b.transitions
            .iter()
            .map(|(s, l, t)| (s + off, l.clone(), t + off)),
    );
    Union {
        n: off + b.states.len(),
        left_states: off,
        transitions,
    }
}

fn moves_of(trans: &[(usize, Label, usize)], s: usize, label: &Label) -> Vec<usize> {
    let mut v: Vec<usize> = trans
        .iter()
        .filter(|(src, l, _)| *src == s && l == label)
        .map(|(_, _, t)| *t)
        .collect();
    v.sort();
    v
}

fn labels_of(trans: &[(usize, Label, usize)], s: usize) -> Vec<Label> {
    let mut v: Vec<Label> = trans
        .iter()
        .filter(|(src, _, _)| *src == s)
        .map(|(_, l, _)| l.clone())
        .collect();
    v.sort();
    v.dedup();
    v
}

/// First refinement round that separates `u` and `w`, or `None` if the
/// stable partition keeps them together.
fn rank(rounds: &[Vec<usize>], u: usize, w: usize) -> Option<usize> {
    rounds.iter().position(|p| p[u] != p[w])
}

/// Build a distinguishing play for non-bisimilar initial states. Each step
/// strictly lowers the round at which the current pair separates, so the
/// play always ends in a ground step where the challenged side lacks the
/// label outright.
fn distinguish(union: &Union, rounds: &[Vec<usize>], init_u: usize, init_w: usize) -> Vec<CexStep> {
    let final_p = rounds.last().unwrap();
    let mut steps = Vec::new();
    let (mut u, mut w) = (init_u, init_w);
    loop {
        let r = rank(rounds, u, w).expect("states are distinguished");
        let prev = &rounds[r - 1];
        let mut candidates = labels_of(&union.transitions, u);
        candidates.extend(labels_of(&union.transitions, w));
        candidates.sort();
        candidates.dedup();
        let mut chosen: Option<(Side, Label, usize, Option<usize>)> = None;
        'search: for label in &candidates {
            let um = moves_of(&union.transitions, u, label);
            let wm = moves_of(&union.transitions, w, label);
            for (side, att, att_moves, def_moves) in
                [(Side::Left, u, &um, &wm), (Side::Right, w, &wm, &um)]
            {
                let _ = att;
                if !att_moves.is_empty() && def_moves.is_empty() {
                    chosen = Some((side, label.clone(), att_moves[0], None));
                    break 'search;
                }
                for &t in att_moves {
                    if def_moves.iter().all(|&t2| prev[t2] != prev[t]) {
                        chosen = Some((side, label.clone(), t, def_moves.first().copied()));
                        break 'search;
                    }
                }
            }
        }
        let (side, label, att_to, def_to) =
            chosen.expect("separated states admit a distinguishing move");
        let (att_from, def_from) = match side {
            Side::Left => (u, w),
            Side::Right => (w, u),
        };
        let splitter = match def_to {
            None => Vec::new(),
            Some(_) => {
                let block = final_p[att_to];
                (0..union.n).filter(|&s| final_p[s] == block).collect()
            }
        };
        steps.push(CexStep {
            side,
            label,
            splitter,
            attacker_from: att_from,
            attacker_to: att_to,
            defender_from: def_from,
            defender_to: def_to,
        });
        match def_to {
            None => return steps,
            Some(d) => {
                let pair = match side {
                    Side::Left => (att_to, d),
                    Side::Right => (d, att_to),
                };
                u = pair.0;
                w = pair.1;
            }
        }
    }
}

/// Check a recorded play against the union graph: every step's challenge
/// must be unanswerable into its splitter, and the final step must expose a
/// label the challenged side lacks entirely.
pub fn replay(union: &Union, steps: &[CexStep], init_u: usize, init_w: usize) -> bool {
    let (mut u, mut w) = (init_u, init_w);
    for (i, step) in steps.iter().enumerate() {
        let (att, def) = match step.side {
            Side::Left => (u, w),
            Side::Right => (w, u),
        };
        if att != step.attacker_from || def != step.defender_from {
            return false;
        }
        let att_moves = moves_of(&union.transitions, att, &step.label);
        let def_moves = moves_of(&union.transitions, def, &step.label);
        if !att_moves.contains(&step.attacker_to) {
            return false;
        }
        if step.splitter.is_empty() {
            // Ground challenge: must close the play.
            if !def_moves.is_empty() || i + 1 != steps.len() {
                return false;
            }
            return true;
        }
        if !step.splitter.contains(&step.attacker_to) {
            return false;
        }
        if def_moves.iter().any(|t| step.splitter.contains(t)) {
            return false;
        }
        match step.defender_to {
            Some(d) if def_moves.contains(&d) => {
                let pair = match step.side {
                    Side::Left => (step.attacker_to, d),
                    Side::Right => (d, step.attacker_to),
                };
                u = pair.0;
                w = pair.1;
            }
            _ => return false,
        }
    }
    false
}

/// Compare two explored graphs of equal sort.
pub fn compare(a: &Lts, b: &Lts) -> Result<Verdict, Error> {
    if a.sort != b.sort {
        return Err(Error::IncompatibleSorts {
            left: a.sort.render_mode(a.mode),
            right: b.sort.render_mode(b.mode),
        });
    }
    let union = union_of(a, b);
    let rounds = refine_rounds(union.n, &union.transitions);
    let partition = rounds.last().unwrap();
    let off = union.left_states;
    let init_u = a.initial;
    let init_w = off + b.initial;
    let bisimilar = partition[init_u] == partition[init_w];
    let mut witness = Vec::new();
    let mut counterexample = Vec::new();
    if bisimilar {
        for i in 0..a.states.len() {
            for j in 0..b.states.len() {
                if partition[i] == partition[off + j] {
                    witness.push((i, j));
                }
            }
        }
    } else {
        counterexample = distinguish(&union, &rounds, init_u, init_w);
        debug_assert!(replay(&union, &counterexample, init_u, init_w));
    }
    Ok(Verdict {
        bisimilar,
        witness,
        counterexample,
        left_states: a.states.len(),
        right_states: b.states.len(),
    })
}

/// Explore both terms and compare. A truncated exploration is an error: a
/// verdict on a partial graph would be unsound.
pub fn bisimilar(
    left: &Term,
    right: &Term,
    alphabet: &Alphabet,
    mode: Mode,
    budget: usize,
) -> Result<Verdict, Error> {
    let a = explore(left, alphabet, mode, budget)?;
    if !a.complete {
        return Err(Error::Budget { budget });
    }
    let b = explore(right, alphabet, mode, budget)?;
    if !b.complete {
        return Err(Error::Budget { budget });
    }
    compare(&a, &b)
}

/// Observation made of a label once silent detail is forgotten.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeakLabel {
    Silent,
    Obs(Label),
}

/// On saturated graphs weak and strong bisimilarity must coincide: the
/// saturated relation already absorbs silent padding. This builds the weak
/// transition relation by explicit silent-closure — zero or more silent steps
/// around every move, a possibly empty silent run for silent moves — refines
/// both relations, and reports whether the two partitions agree.
pub fn weak_equals_strong(lts: &Lts) -> bool {
    let n = lts.states.len();
    let strong = refine(n, &lts.transitions);

    // Reflexive-transitive closure of the silent sub-relation.
    let mut reach: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
    loop {
        let mut grew = false;
        for (s, l, t) in &lts.transitions {
            if l.is_silent() {
                let via: Vec<usize> = reach[*t].iter().copied().collect();
                for w in via {
                    grew |= reach[*s].insert(w);
                }
            }
        }
        if !grew {
            break;
        }
    }

    let mut weak: BTreeSet<(usize, WeakLabel, usize)> = BTreeSet::new();
    for s in 0..n {
        for m in reach[s].clone() {
            weak.insert((s, WeakLabel::Silent, m));
            for (src, l, t) in &lts.transitions {
                if *src == m && !l.is_silent() {
                    for w in reach[*t].iter() {
                        weak.insert((s, WeakLabel::Obs(l.clone()), *w));
                    }
                }
            }
        }
    }
    let weak_trans: Vec<(usize, WeakLabel, usize)> = weak.into_iter().collect();
    let weak_part = refine(n, &weak_trans);
    strong == weak_part
}

#[derive(Serialize)]
struct CexStepJson {
    label: String,
    direction: Side,
}

#[derive(Serialize)]
struct VerdictJson {
    bisimilar: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Vec<CexStepJson>>,
}

/// JSON rendering of a verdict: a witness when bisimilar, otherwise the
/// distinguishing play as `{label, direction}` steps.
pub fn verdict_json(v: &Verdict, alphabet: &Alphabet) -> String {
    let doc = VerdictJson {
        bisimilar: v.bisimilar,
        witness: v.bisimilar.then(|| v.witness.clone()),
        counterexample: (!v.bisimilar).then(|| {
            v.counterexample
                .iter()
                .map(|s| CexStepJson {
                    label: s.label.render(alphabet),
                    direction: s.side,
                })
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Terminal rendering of a verdict.
pub fn verdict_text(v: &Verdict, alphabet: &Alphabet) -> String {
    if v.bisimilar {
        format!(
            "bisimilar: yes ({} x {} states, witness of {} pairs)\n",
            v.left_states,
            v.right_states,
            v.witness.len()
        )
    } else {
        let mut out = format!(
            "bisimilar: no ({} x {} states)\n",
            v.left_states, v.right_states
        );
        for step in &v.counterexample {
            let side = match step.side {
                Side::Left => "left",
                Side::Right => "right",
            };
            let kind = if step.splitter.is_empty() {
                "unmatched"
            } else {
                "forces"
            };
            out.push_str(&format!(
                "  {side} plays {} ({kind})\n",
                step.label.render(alphabet)
            ));
        }
        out
    }
}
