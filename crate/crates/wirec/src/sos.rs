//! Operational semantics.
//!
//! A state is a closed term identified by its canonical key. Per state the
//! engine keeps two transition sets:
//!
//! * `base`: transitions derivable by the structural rules (prefix firing,
//!   synchronised composition, tensor, choice, recursion unfolding), where
//!   premise transitions range over the *saturated* sets of the operand
//!   states;
//! * `cur`: the saturated set, i.e. `base` plus the identity silent loop,
//!   closed under pre- and post-composition with all-silent transitions.
//!
//! Both grow monotonically under a worklist until nothing changes, which
//! computes the least fixpoint of the whole rule system. Silent self-loops
//! are represented once, at the saturated level; the structural rules skip
//! them, so recursion states never step into their own unfoldings and
//! single-state constants stay single-state.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::Error;
use crate::sorting::{infer_closed, Sort, Wire};
use crate::syntax::{
    canonical_key, is_closed, pattern_binders, subst_process, subst_signals, Alphabet, AtomKind,
    Dir, Mode, Pattern, SigId, SigValue, Term, TermKind,
};

/// One certain action on one wire: a signal or silence, with the wire's
/// direction in directed mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelAtom {
    pub val: Option<SigId>,
    pub dir: Option<Dir>,
}

impl LabelAtom {
    pub fn iota(dir: Option<Dir>) -> LabelAtom {
        LabelAtom { val: None, dir }
    }

    pub fn sig(id: SigId, dir: Option<Dir>) -> LabelAtom {
        LabelAtom { val: Some(id), dir }
    }

    pub fn is_iota(&self) -> bool {
        self.val.is_none()
    }
}

/// A `(k,l)`-labelled step: one word per boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub upper: Vec<LabelAtom>,
    pub lower: Vec<LabelAtom>,
}

impl Label {
    pub fn new(upper: Vec<LabelAtom>, lower: Vec<LabelAtom>) -> Label {
        Label { upper, lower }
    }

    /// Both words consist solely of silent actions (vacuously true for the
    /// empty boundary).
    pub fn is_silent(&self) -> bool {
        self.upper.iter().all(LabelAtom::is_iota) && self.lower.iter().all(LabelAtom::is_iota)
    }

    /// The identity silent label of a sort.
    pub fn silent_of(sort: &Sort) -> Label {
        let word = |w: &crate::sorting::Word| -> Vec<LabelAtom> {
            w.0.iter()
                .map(|wire| {
                    LabelAtom::iota(match wire {
                        Wire::Plain => None,
                        Wire::L => Some(Dir::L),
                        Wire::R => Some(Dir::R),
                    })
                })
                .collect()
        };
        Label::new(word(&sort.left), word(&sort.right))
    }

    /// Label of the mirrored transition: words swapped and reversed, wire
    /// directions complemented.
    pub fn star(&self) -> Label {
        let flip = |w: &[LabelAtom]| -> Vec<LabelAtom> {
            w.iter()
                .rev()
                .map(|a| LabelAtom {
                    val: a.val,
                    dir: a.dir.map(Dir::flip),
                })
                .collect()
        };
        Label::new(flip(&self.lower), flip(&self.upper))
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!(
            "{}/{}",
            render_word(&self.upper, alphabet),
            render_word(&self.lower, alphabet)
        )
    }
}

pub fn render_word(word: &[LabelAtom], alphabet: &Alphabet) -> String {
    word.iter()
        .map(|a| {
            let mut s = match a.val {
                None => "_".to_string(),
                Some(id) => alphabet.name(id).to_string(),
            };
            if let Some(d) = a.dir {
                s.push(d.marker());
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Vec<LabelAtom>, Error> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(' ')
        .map(|tok| {
            let (core, dir) = match tok.strip_suffix('?') {
                Some(c) => (c, Some(Dir::L)),
                None => match tok.strip_suffix('!') {
                    Some(c) => (c, Some(Dir::R)),
                    None => (tok, None),
                },
            };
            let val = if core == "_" {
                None
            } else {
                match alphabet.id(core) {
                    Some(id) => Some(id),
                    None => return Err(Error::Schema(format!("unknown signal `{core}`"))),
                }
            };
            Ok(LabelAtom { val, dir })
        })
        .collect()
}

pub type StateId = usize;

enum NodeKind {
    /// Prefix with its firing table; targets resolve to states lazily.
    Prefix {
        moves: Vec<(Label, Term)>,
        resolved: Option<Vec<(Label, StateId)>>,
    },
    Seq(StateId, StateId),
    Ten(StateId, StateId),
    Choice(StateId, StateId),
    Rec(StateId),
}

struct StateData {
    term: Term,
    key: String,
    sort: Sort,
    kind: NodeKind,
    base: BTreeSet<(Label, StateId)>,
    cur: BTreeSet<(Label, StateId)>,
    /// States whose base sets take this state's transitions as premises.
    parents: BTreeSet<StateId>,
    /// States with a saturated transition into this state.
    preds: BTreeSet<StateId>,
}

/// Memoising transition engine over one alphabet and dialect.
pub struct Engine<'a> {
    pub alphabet: &'a Alphabet,
    pub mode: Mode,
    budget: usize,
    index: HashMap<String, StateId>,
    data: Vec<StateData>,
    queue: VecDeque<StateId>,
    queued: Vec<bool>,
    comp_cache: HashMap<(u8, StateId, StateId), StateId>,
}

impl<'a> Engine<'a> {
    pub fn new(alphabet: &'a Alphabet, mode: Mode, budget: usize) -> Engine<'a> {
        Engine {
            alphabet,
            mode,
            budget,
            index: HashMap::new(),
            data: Vec::new(),
            queue: VecDeque::new(),
            queued: Vec::new(),
            comp_cache: HashMap::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.data.len()
    }

    pub fn key(&self, id: StateId) -> &str {
        &self.data[id].key
    }

    pub fn term(&self, id: StateId) -> &Term {
        &self.data[id].term
    }

    pub fn sort(&self, id: StateId) -> &Sort {
        &self.data[id].sort
    }

    pub fn base(&self, id: StateId) -> &BTreeSet<(Label, StateId)> {
        &self.data[id].base
    }

    pub fn saturated(&self, id: StateId) -> &BTreeSet<(Label, StateId)> {
        &self.data[id].cur
    }

    fn enqueue(&mut self, id: StateId) {
        if !self.queued[id] {
            self.queued[id] = true;
            self.queue.push_back(id);
        }
    }

    /// Intern a closed term as a state.
    pub fn ensure(&mut self, term: &Term) -> Result<StateId, Error> {
        let key = canonical_key(term);
        if let Some(&id) = self.index.get(&key) {
            return Ok(id);
        }
        debug_assert!(is_closed(term), "engine states must be closed");
        if self.data.len() >= self.budget {
            return Err(Error::Budget {
                budget: self.budget,
            });
        }
        let sort = infer_closed(term, self.alphabet, self.mode)?;
        let id = self.data.len();
        self.index.insert(key.clone(), id);
        let refl = (Label::silent_of(&sort), id);
        let mut cur = BTreeSet::new();
        cur.insert(refl);
        self.data.push(StateData {
            term: term.clone(),
            key,
            sort,
            kind: NodeKind::Prefix {
                moves: Vec::new(),
                resolved: None,
            },
            base: BTreeSet::new(),
            cur,
            parents: BTreeSet::new(),
            preds: BTreeSet::from([id]),
        });
        self.queued.push(false);
        let kind = match &term.kind {
            TermKind::Var(_) => unreachable!("closed state"),
            TermKind::Prefix(u, v, body) => NodeKind::Prefix {
                moves: self.prefix_moves(u, v, body),
                resolved: None,
            },
            TermKind::Seq(a, b) => {
                let ia = self.ensure(a)?;
                let ib = self.ensure(b)?;
                self.data[ia].parents.insert(id);
                self.data[ib].parents.insert(id);
                NodeKind::Seq(ia, ib)
            }
            TermKind::Ten(a, b) => {
                let ia = self.ensure(a)?;
                let ib = self.ensure(b)?;
                self.data[ia].parents.insert(id);
                self.data[ib].parents.insert(id);
                NodeKind::Ten(ia, ib)
            }
            TermKind::Choice(a, b) => {
                let ia = self.ensure(a)?;
                let ib = self.ensure(b)?;
                self.data[ia].parents.insert(id);
                self.data[ib].parents.insert(id);
                NodeKind::Choice(ia, ib)
            }
            TermKind::Rec(n, _, body) => {
                let unfold = subst_process(body, n, term);
                let iu = self.ensure(&unfold)?;
                self.data[iu].parents.insert(id);
                NodeKind::Rec(iu)
            }
        };
        self.data[id].kind = kind;
        self.enqueue(id);
        Ok(id)
    }

    /// Firing table of a root prefix: one transition per assignment of
    /// signals-or-silence to the binders.
    fn prefix_moves(&self, u: &Pattern, v: &Pattern, body: &Term) -> Vec<(Label, Term)> {
        let binders = pattern_binders(u, v);
        let options = self.alphabet.len() + 1;
        let mut out = Vec::new();
        let mut odometer = vec![0usize; binders.len()];
        loop {
            let mut map: HashMap<String, SigValue> = HashMap::new();
            for (b, &o) in binders.iter().zip(odometer.iter()) {
                let val = if o == 0 { None } else { Some((o - 1) as SigId) };
                map.insert(b.clone(), val);
            }
            let atom = |a: &crate::syntax::PatternAtom, flip: bool| -> LabelAtom {
                let val = match &a.kind {
                    AtomKind::Iota => None,
                    AtomKind::Sig(s) => Some(*s),
                    AtomKind::Bind(x) => map[x],
                    AtomKind::Use(x) => {
                        unreachable!("free signal variable `{x}` in a closed state")
                    }
                };
                let dir = if flip { a.dir.map(Dir::flip) } else { a.dir };
                LabelAtom { val, dir }
            };
            let label = Label::new(
                u.iter().map(|a| atom(a, true)).collect(),
                v.iter().map(|a| atom(a, false)).collect(),
            );
            let target = subst_signals(body, &map);
            out.push((label, target));
            // advance
            let mut i = 0;
            loop {
                if i == odometer.len() {
                    return out;
                }
                odometer[i] += 1;
                if odometer[i] < options {
                    break;
                }
                odometer[i] = 0;
                i += 1;
            }
        }
    }

    fn compose(&mut self, op: u8, a: StateId, b: StateId) -> Result<StateId, Error> {
        if let Some(&id) = self.comp_cache.get(&(op, a, b)) {
            return Ok(id);
        }
        let ta = self.data[a].term.clone();
        let tb = self.data[b].term.clone();
        let term = match op {
            0 => Term::seq(ta, tb),
            1 => Term::ten(ta, tb),
            _ => Term::choice(ta, tb),
        };
        let id = self.ensure(&term)?;
        self.comp_cache.insert((op, a, b), id);
        Ok(id)
    }

    /// Recompute the base set of `id` from current premise knowledge.
    fn recompute_base(&mut self, id: StateId) -> Result<Vec<(Label, StateId)>, Error> {
        let mut fresh: Vec<(Label, StateId)> = Vec::new();
        let add = |label: Label, target: StateId, self_id: StateId,
                   out: &mut Vec<(Label, StateId)>| {
            // Silent self-steps live at the saturated level only.
            if target == self_id && label.is_silent() {
                return;
            }
            out.push((label, target));
        };
        enum Plan {
            Prefix(Vec<(Label, StateId)>),
            PrefixUnresolved(Vec<(Label, Term)>),
            Seq(StateId, StateId),
            Ten(StateId, StateId),
            Choice(StateId, StateId),
            Rec(StateId),
        }
        let plan = match &self.data[id].kind {
            NodeKind::Prefix {
                resolved: Some(r), ..
            } => Plan::Prefix(r.clone()),
            NodeKind::Prefix { moves, .. } => Plan::PrefixUnresolved(moves.clone()),
            NodeKind::Seq(a, b) => Plan::Seq(*a, *b),
            NodeKind::Ten(a, b) => Plan::Ten(*a, *b),
            NodeKind::Choice(a, b) => Plan::Choice(*a, *b),
            NodeKind::Rec(u) => Plan::Rec(*u),
        };
        let plan = match plan {
            Plan::PrefixUnresolved(moves) => {
                let mut r = Vec::with_capacity(moves.len());
                for (label, target) in &moves {
                    let tid = self.ensure(target)?;
                    r.push((label.clone(), tid));
                }
                if let NodeKind::Prefix { resolved, .. } = &mut self.data[id].kind {
                    *resolved = Some(r.clone());
                }
                Plan::Prefix(r)
            }
            other => other,
        };
        match plan {
            Plan::PrefixUnresolved(_) => unreachable!("targets resolved above"),
            Plan::Prefix(moves) => {
                for (label, tid) in moves {
                    add(label, tid, id, &mut fresh);
                }
            }
            Plan::Seq(a, b) => {
                let left: Vec<(Label, StateId)> = self.data[a].cur.iter().cloned().collect();
                let mut by_upper: HashMap<&[LabelAtom], Vec<(Label, StateId)>> = HashMap::new();
                let right: Vec<(Label, StateId)> = self.data[b].cur.iter().cloned().collect();
                for (l, t) in &right {
                    by_upper
                        .entry(l.upper.as_slice())
                        .or_default()
                        .push((l.clone(), *t));
                }
                let mut pairs = Vec::new();
                for (la, ta) in &left {
                    if let Some(matches) = by_upper.get(la.lower.as_slice()) {
                        for (lb, tb) in matches {
                            pairs.push((
                                Label::new(la.upper.clone(), lb.lower.clone()),
                                *ta,
                                *tb,
                            ));
                        }
                    }
                }
                for (label, ta, tb) in pairs {
                    let tid = self.compose(0, ta, tb)?;
                    add(label, tid, id, &mut fresh);
                }
            }
            Plan::Ten(a, b) => {
                let left: Vec<(Label, StateId)> = self.data[a].cur.iter().cloned().collect();
                let right: Vec<(Label, StateId)> = self.data[b].cur.iter().cloned().collect();
                for (la, ta) in &left {
                    for (lb, tb) in &right {
                        let mut upper = la.upper.clone();
                        upper.extend(lb.upper.iter().copied());
                        let mut lower = la.lower.clone();
                        lower.extend(lb.lower.iter().copied());
                        let tid = self.compose(1, *ta, *tb)?;
                        add(Label::new(upper, lower), tid, id, &mut fresh);
                    }
                }
            }
            Plan::Choice(a, b) => {
                let left: Vec<(Label, StateId)> = self.data[a].cur.iter().cloned().collect();
                let right: Vec<(Label, StateId)> = self.data[b].cur.iter().cloned().collect();
                for (la, ta) in &left {
                    if la.is_silent() {
                        for (lb, tb) in &right {
                            if lb.is_silent() {
                                let tid = self.compose(2, *ta, *tb)?;
                                add(la.clone(), tid, id, &mut fresh);
                            }
                        }
                    } else {
                        add(la.clone(), *ta, id, &mut fresh);
                    }
                }
                for (lb, tb) in &right {
                    if !lb.is_silent() {
                        add(lb.clone(), *tb, id, &mut fresh);
                    }
                }
            }
            Plan::Rec(u) => {
                let moves: Vec<(Label, StateId)> = self.data[u].base.iter().cloned().collect();
                for (label, tid) in moves {
                    add(label, tid, id, &mut fresh);
                }
            }
        }
        Ok(fresh)
    }

    /// Close `cur(id)` under silent pre- and post-composition.
    fn saturate_local(&mut self, id: StateId) -> bool {
        let mut grew = false;
        loop {
            let snapshot: Vec<(Label, StateId)> = self.data[id].cur.iter().cloned().collect();
            let mut additions: Vec<(Label, StateId)> = Vec::new();
            for (l1, m) in &snapshot {
                if l1.is_silent() {
                    for (l2, q) in self.data[*m].cur.iter() {
                        if !self.data[id].cur.contains(&(l2.clone(), *q)) {
                            additions.push((l2.clone(), *q));
                        }
                    }
                }
                for (l2, w) in self.data[*m].cur.iter() {
                    if l2.is_silent() && !self.data[id].cur.contains(&(l1.clone(), *w)) {
                        additions.push((l1.clone(), *w));
                    }
                }
            }
            if additions.is_empty() {
                return grew;
            }
            for (l, t) in additions {
                if self.data[id].cur.insert((l, t)) {
                    self.data[t].preds.insert(id);
                    grew = true;
                }
            }
        }
    }

    /// Drain the worklist to the least fixpoint.
    pub fn run(&mut self) -> Result<(), Error> {
        while let Some(id) = self.queue.pop_front() {
            self.queued[id] = false;
            let fresh = self.recompute_base(id)?;
            let mut grew = false;
            for (l, t) in fresh {
                if self.data[id].base.insert((l.clone(), t)) {
                    grew = true;
                    if self.data[id].cur.insert((l, t)) {
                        self.data[t].preds.insert(id);
                    }
                }
            }
            grew |= self.saturate_local(id);
            if grew {
                let deps: Vec<StateId> = self.data[id]
                    .parents
                    .iter()
                    .chain(self.data[id].preds.iter())
                    .copied()
                    .collect();
                for d in deps {
                    self.enqueue(d);
                }
            }
        }
        Ok(())
    }

    /// Structural transitions of a closed term.
    pub fn base_transitions(&mut self, term: &Term) -> Result<Vec<(Label, StateId)>, Error> {
        let id = self.ensure(term)?;
        self.run()?;
        Ok(self.data[id].base.iter().cloned().collect())
    }

    /// Saturated transitions of a closed term.
    pub fn saturated_transitions(&mut self, term: &Term) -> Result<Vec<(Label, StateId)>, Error> {
        let id = self.ensure(term)?;
        self.run()?;
        Ok(self.data[id].cur.iter().cloned().collect())
    }

    /// Successor states of a term under one specific label.
    pub fn fire(&mut self, term: &Term, label: &Label) -> Result<Vec<StateId>, Error> {
        Ok(self
            .saturated_transitions(term)?
            .into_iter()
            .filter(|(l, _)| l == label)
            .map(|(_, t)| t)
            .collect())
    }
}

impl fmt::Debug for Engine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("states", &self.data.len())
            .finish()
    }
}
