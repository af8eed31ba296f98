//! The wire library: named constants, a seeded generator of well-sorted
//! terms, and the equational law harness built on the bisimilarity checker.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equivalence::bisimilar;
use crate::error::Error;
use crate::exec::{map_instances, ExecMode};
use crate::sorting::{Sort, Wire, Word};
use crate::syntax::{
    Alphabet, AtomKind, Dir, Mode, Pattern, PatternAtom, SigId, Term,
};

fn atom(kind: AtomKind, dir: Option<Dir>) -> PatternAtom {
    PatternAtom { kind, dir }
}

fn binds(names: &[&str]) -> Pattern {
    names
        .iter()
        .map(|n| atom(AtomKind::Bind(n.to_string()), None))
        .collect()
}

fn dbinds(pairs: &[(&str, Dir)]) -> Pattern {
    pairs
        .iter()
        .map(|(n, d)| atom(AtomKind::Bind(n.to_string()), Some(*d)))
        .collect()
}

fn dsig(pairs: &[(SigId, Dir)]) -> Pattern {
    pairs
        .iter()
        .map(|(s, d)| atom(AtomKind::Sig(*s), Some(*d)))
        .collect()
}

fn sigs(ids: &[SigId]) -> Pattern {
    ids.iter().map(|s| atom(AtomKind::Sig(*s), None)).collect()
}

/// A single looping prefix `rec Y. <u/v>.Y`, the shape of every one-state
/// wire constant.
fn loop_prefix(sort: Sort, u: Pattern, v: Pattern) -> Term {
    Term::rec("Y", sort, Term::prefix(u, v, Term::var("Y")))
}

/// `rec Y:tau. Y` — no behaviour beyond the reflexive loop.
pub fn zero(sort: Sort) -> Term {
    Term::rec("Y", sort, Term::var("Y"))
}

/// Identity wire: copies one signal left to right.
pub fn ident() -> Term {
    loop_prefix(Sort::plain(1, 1), binds(&["x"]), binds(&["x"]))
}

/// Twist: swaps two wires.
pub fn twist() -> Term {
    loop_prefix(Sort::plain(2, 2), binds(&["x", "y"]), binds(&["y", "x"]))
}

/// Bent wire of sort (0,2): emits two equal signals below.
pub fn d() -> Term {
    loop_prefix(Sort::plain(0, 2), Vec::new(), binds(&["x", "x"]))
}

/// Bent wire of sort (2,0): absorbs two equal signals above.
pub fn e() -> Term {
    loop_prefix(Sort::plain(2, 0), binds(&["x", "x"]), Vec::new())
}

fn binder_names(prefix: &str, k: usize) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

/// k-wire identity; the 0-wire case degenerates to `zero`.
pub fn ident_k(k: usize) -> Term {
    if k == 0 {
        return zero(Sort::plain(0, 0));
    }
    let names = binder_names("x", k);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    loop_prefix(Sort::plain(k, k), binds(&refs), binds(&refs))
}

/// Generalised twist of sort (k+l, l+k): the two wire bundles cross.
pub fn twist_kl(k: usize, l: usize) -> Term {
    let xs = binder_names("x", k);
    let ys = binder_names("y", l);
    let upper: Vec<&str> = xs.iter().chain(ys.iter()).map(|s| s.as_str()).collect();
    let lower: Vec<&str> = ys.iter().chain(xs.iter()).map(|s| s.as_str()).collect();
    loop_prefix(Sort::plain(k + l, l + k), binds(&upper), binds(&lower))
}

/// n-fold bent wire (0,2n): d_{n+1} = d ; (I (x) d_n (x) I).
pub fn d_n(n: usize) -> Term {
    match n {
        0 => zero(Sort::plain(0, 0)),
        1 => d(),
        _ => Term::seq(d(), Term::ten(Term::ten(ident(), d_n(n - 1)), ident())),
    }
}

/// n-fold bent wire (2n,0): e_{n+1} = (I_n (x) e (x) I_n) ; e_n.
pub fn e_n(n: usize) -> Term {
    match n {
        0 => zero(Sort::plain(0, 0)),
        1 => e(),
        _ => {
            let m = n - 1;
            Term::seq(
                Term::ten(Term::ten(ident_k(m), e()), ident_k(m)),
                e_n(m),
            )
        }
    }
}

/// Evaluation wire of sort (m+l+l, m).
pub fn ev(l: usize, m: usize) -> Term {
    Term::ten(ident_k(m), e_n(l))
}

/// Currying: bends the last l upper wires of `p : (k+l, m)` around to the
/// lower boundary, giving sort (k, m+l).
pub fn cur(p: Term, k: usize, l: usize) -> Term {
    Term::seq(Term::ten(ident_k(k), d_n(l)), Term::ten(p, ident_k(l)))
}

/// Toggle switch starting in state 0: relays its state below, flips when the
/// opposite signal arrives above.
pub fn flip0(zero_sig: SigId, one_sig: SigId) -> Term {
    let s = Sort::plain(1, 1);
    let inner = Term::rec(
        "Z",
        s.clone(),
        Term::choice(
            Term::prefix(sigs(&[one_sig]), sigs(&[one_sig]), Term::var("Z")),
            Term::prefix(sigs(&[zero_sig]), sigs(&[one_sig]), Term::var("Y")),
        ),
    );
    Term::rec(
        "Y",
        s,
        Term::choice(
            Term::prefix(sigs(&[zero_sig]), sigs(&[zero_sig]), Term::var("Y")),
            Term::prefix(sigs(&[one_sig]), sigs(&[zero_sig]), inner),
        ),
    )
}

/// Toggle switch starting in state 1.
pub fn flip1(zero_sig: SigId, one_sig: SigId) -> Term {
    let s = Sort::plain(1, 1);
    let inner = Term::rec(
        "Y",
        s.clone(),
        Term::choice(
            Term::prefix(sigs(&[zero_sig]), sigs(&[zero_sig]), Term::var("Y")),
            Term::prefix(sigs(&[one_sig]), sigs(&[zero_sig]), Term::var("Z")),
        ),
    );
    Term::rec(
        "Z",
        s,
        Term::choice(
            Term::prefix(sigs(&[one_sig]), sigs(&[one_sig]), Term::var("Z")),
            Term::prefix(sigs(&[zero_sig]), sigs(&[one_sig]), inner),
        ),
    )
}

/// The closed flip-flop ring d ; (I (x) (F0;F1;F0)) ; e of sort (0,0).
pub fn ring(zero_sig: SigId, one_sig: SigId) -> Term {
    let chain = Term::seq(
        Term::seq(flip0(zero_sig, one_sig), flip1(zero_sig, one_sig)),
        flip0(zero_sig, one_sig),
    );
    Term::seq(Term::seq(d(), Term::ten(ident(), chain)), e())
}

/// Leftward identity wire: one signal travels right to left.
pub fn ident_l() -> Term {
    loop_prefix(
        Sort::new(Word::dirs(vec![Dir::L]), Word::dirs(vec![Dir::L])),
        dbinds(&[("x", Dir::R)]),
        dbinds(&[("x", Dir::L)]),
    )
}

/// Rightward identity wire.
pub fn ident_r() -> Term {
    loop_prefix(
        Sort::new(Word::dirs(vec![Dir::R]), Word::dirs(vec![Dir::R])),
        dbinds(&[("x", Dir::L)]),
        dbinds(&[("x", Dir::R)]),
    )
}

/// Identity on an arbitrary direction word; empty words degenerate to
/// `zero`.
pub fn ident_dir(w: &Word) -> Term {
    if w.is_empty() {
        return zero(Sort::new(Word::empty(), Word::empty()));
    }
    let names = binder_names("x", w.len());
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, wire) in w.0.iter().enumerate() {
        let dir = match wire {
            Wire::L => Dir::L,
            Wire::R => Dir::R,
            Wire::Plain => panic!("directed identity over an undirected word"),
        };
        upper.push(atom(AtomKind::Bind(names[i].clone()), Some(dir.flip())));
        lower.push(atom(AtomKind::Bind(names[i].clone()), Some(dir)));
    }
    loop_prefix(Sort::new(w.clone(), w.clone()), upper, lower)
}

/// Directed bent wire (e, LR): a signal turns around, leftward to rightward.
pub fn d_l() -> Term {
    loop_prefix(
        Sort::new(Word::empty(), Word::dirs(vec![Dir::L, Dir::R])),
        Vec::new(),
        dbinds(&[("x", Dir::L), ("x", Dir::R)]),
    )
}

/// Directed bent wire (RL, e).
pub fn e_l() -> Term {
    loop_prefix(
        Sort::new(Word::dirs(vec![Dir::R, Dir::L]), Word::empty()),
        dbinds(&[("x", Dir::L), ("x", Dir::R)]),
        Vec::new(),
    )
}

fn dir_sort_rr() -> Sort {
    Sort::new(Word::dirs(vec![Dir::R]), Word::dirs(vec![Dir::R]))
}

/// Directed toggle switch starting in state 0: inputs above, outputs below.
pub fn dflip0(zero_sig: SigId, one_sig: SigId) -> Term {
    let s = dir_sort_rr();
    let inner = Term::rec(
        "Z",
        s.clone(),
        Term::choice(
            Term::prefix(
                dsig(&[(one_sig, Dir::L)]),
                dsig(&[(one_sig, Dir::R)]),
                Term::var("Z"),
            ),
            Term::prefix(
                dsig(&[(zero_sig, Dir::L)]),
                dsig(&[(one_sig, Dir::R)]),
                Term::var("Y"),
            ),
        ),
    );
    Term::rec(
        "Y",
        s,
        Term::choice(
            Term::prefix(
                dsig(&[(zero_sig, Dir::L)]),
                dsig(&[(zero_sig, Dir::R)]),
                Term::var("Y"),
            ),
            Term::prefix(
                dsig(&[(one_sig, Dir::L)]),
                dsig(&[(zero_sig, Dir::R)]),
                inner,
            ),
        ),
    )
}

/// Directed toggle switch starting in state 1.
pub fn dflip1(zero_sig: SigId, one_sig: SigId) -> Term {
    let s = dir_sort_rr();
    let inner = Term::rec(
        "Y",
        s.clone(),
        Term::choice(
            Term::prefix(
                dsig(&[(zero_sig, Dir::L)]),
                dsig(&[(zero_sig, Dir::R)]),
                Term::var("Y"),
            ),
            Term::prefix(
                dsig(&[(one_sig, Dir::L)]),
                dsig(&[(zero_sig, Dir::R)]),
                Term::var("Z"),
            ),
        ),
    );
    Term::rec(
        "Z",
        s,
        Term::choice(
            Term::prefix(
                dsig(&[(one_sig, Dir::L)]),
                dsig(&[(one_sig, Dir::R)]),
                Term::var("Z"),
            ),
            Term::prefix(
                dsig(&[(zero_sig, Dir::L)]),
                dsig(&[(one_sig, Dir::R)]),
                inner,
            ),
        ),
    )
}

/// Signal-free constants with conventional names.
pub fn catalog() -> Vec<(&'static str, Term)> {
    vec![
        ("0_(0,0)", zero(Sort::plain(0, 0))),
        ("I", ident()),
        ("X", twist()),
        ("d", d()),
        ("e", e()),
        ("I_L", ident_l()),
        ("I_R", ident_r()),
        ("d_L", d_l()),
        ("e_L", e_l()),
    ]
}

/// Deterministic pseudo-random source of well-sorted closed terms.
pub struct TermGen {
    rng: ChaCha8Rng,
    alphabet: Alphabet,
    mode: Mode,
    fresh: usize,
}

impl TermGen {
    pub fn new(alphabet: &Alphabet, mode: Mode, seed: u64) -> Self {
        TermGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            alphabet: alphabet.clone(),
            mode,
            fresh: 0,
        }
    }

    fn fresh_name(&mut self, prefix: &str) -> String {
        loop {
            let name = format!("{prefix}{}", self.fresh);
            self.fresh += 1;
            if self.alphabet.id(&name).is_none() {
                return name;
            }
        }
    }

    /// Random boundary word of length 0..=max_len.
    pub fn word(&mut self, max_len: usize) -> Word {
        let len = self.rng.gen_range(0..=max_len);
        match self.mode {
            Mode::Undirected => Word::plain(len),
            Mode::Directed => {
                Word::dirs((0..len).map(|_| if self.rng.gen() { Dir::L } else { Dir::R }))
            }
        }
    }

    pub fn sort(&mut self, max_len: usize) -> Sort {
        Sort::new(self.word(max_len), self.word(max_len))
    }

    fn pattern_pair(&mut self, sort: &Sort) -> (Pattern, Pattern) {
        let mut pool: Vec<String> = Vec::new();
        let mut side = |gen: &mut Self, word: &Word, upper: bool| -> Pattern {
            word.0
                .iter()
                .map(|wire| {
                    let dir = match (gen.mode, wire) {
                        (Mode::Undirected, _) => None,
                        (Mode::Directed, Wire::L) => Some(Dir::L),
                        (Mode::Directed, Wire::R) => Some(Dir::R),
                        (Mode::Directed, Wire::Plain) => unreachable!(),
                    };
                    let dir = if upper { dir.map(Dir::flip) } else { dir };
                    let roll = gen.rng.gen_range(0..10);
                    let kind = if roll < 4 {
                        AtomKind::Iota
                    } else if roll < 7 && !gen.alphabet.is_empty() {
                        AtomKind::Sig(gen.rng.gen_range(0..gen.alphabet.len() as u32))
                    } else if roll < 9 || pool.is_empty() {
                        let name = gen.fresh_name("x");
                        pool.push(name.clone());
                        AtomKind::Bind(name)
                    } else {
                        let i = gen.rng.gen_range(0..pool.len());
                        AtomKind::Bind(pool[i].clone())
                    };
                    PatternAtom { kind, dir }
                })
                .collect()
        };
        let u = side(self, &sort.left, true);
        let v = side(self, &sort.right, false);
        (u, v)
    }

    fn leaf(&mut self, sort: &Sort) -> Term {
        let mut options: Vec<Term> = vec![zero(sort.clone())];
        match self.mode {
            Mode::Undirected => {
                let (k, l) = (sort.left.len(), sort.right.len());
                if k == l {
                    options.push(ident_k(k));
                }
                if (k, l) == (2, 2) {
                    options.push(twist());
                }
                if (k, l) == (0, 2) {
                    options.push(d());
                }
                if (k, l) == (2, 0) {
                    options.push(e());
                }
                if (k, l) == (1, 1) && self.alphabet.len() >= 2 {
                    options.push(flip0(0, 1));
                    options.push(flip1(0, 1));
                }
            }
            Mode::Directed => {
                if sort.left == sort.right {
                    options.push(ident_dir(&sort.left));
                }
                if *sort == Sort::new(Word::empty(), Word::dirs(vec![Dir::L, Dir::R])) {
                    options.push(d_l());
                }
                if *sort == Sort::new(Word::dirs(vec![Dir::R, Dir::L]), Word::empty()) {
                    options.push(e_l());
                }
                if *sort == dir_sort_rr() && self.alphabet.len() >= 2 {
                    options.push(dflip0(0, 1));
                    options.push(dflip1(0, 1));
                }
            }
        }
        // A looping prefix is always available; double weight keeps variety.
        for _ in 0..2 {
            let (u, v) = self.pattern_pair(sort);
            options.push(loop_prefix(sort.clone(), u, v));
        }
        let i = self.rng.gen_range(0..options.len());
        options.swap_remove(i)
    }

    /// Random closed term of the requested sort and combinator depth.
    pub fn term(&mut self, sort: &Sort, depth: usize) -> Term {
        if depth == 0 {
            return self.leaf(sort);
        }
        match self.rng.gen_range(0..100) {
            0..=24 => self.leaf(sort),
            25..=44 => {
                let (u, v) = self.pattern_pair(sort);
                Term::prefix(u, v, self.term(sort, depth - 1))
            }
            45..=59 => Term::choice(self.term(sort, depth - 1), self.term(sort, depth - 1)),
            60..=74 => {
                let mid = self.word(2);
                let a = self.term(&Sort::new(sort.left.clone(), mid.clone()), depth - 1);
                let b = self.term(&Sort::new(mid, sort.right.clone()), depth - 1);
                Term::seq(a, b)
            }
            75..=89 => {
                let i = self.rng.gen_range(0..=sort.left.len());
                let j = self.rng.gen_range(0..=sort.right.len());
                let a = self.term(
                    &Sort::new(
                        Word(sort.left.0[..i].to_vec()),
                        Word(sort.right.0[..j].to_vec()),
                    ),
                    depth - 1,
                );
                let b = self.term(
                    &Sort::new(
                        Word(sort.left.0[i..].to_vec()),
                        Word(sort.right.0[j..].to_vec()),
                    ),
                    depth - 1,
                );
                Term::ten(a, b)
            }
            _ => {
                let name = self.fresh_name("Y");
                let (u, v) = self.pattern_pair(sort);
                let body = Term::prefix(u, v, Term::var(&name));
                Term::rec(&name, sort.clone(), body)
            }
        }
    }
}

/// Convenience wrapper: `count` terms of one sort from one seed.
pub fn generate_terms(
    alphabet: &Alphabet,
    mode: Mode,
    sort: &Sort,
    depth: usize,
    seed: u64,
    count: usize,
) -> Vec<Term> {
    let mut g = TermGen::new(alphabet, mode, seed);
    (0..count).map(|_| g.term(sort, depth)).collect()
}

/// One equation to check by bisimilarity.
#[derive(Debug, Clone)]
pub struct LawInstance {
    pub law: &'static str,
    pub index: usize,
    pub detail: String,
    pub mode: Mode,
    pub left: Term,
    pub right: Term,
}

/// Result of checking one instance.
#[derive(Debug, Clone)]
pub struct LawOutcome {
    pub law: String,
    pub index: usize,
    pub detail: String,
    pub ok: bool,
    pub error: Option<String>,
}

fn arity(g: &mut TermGen) -> usize {
    g.word(2).len()
}

/// Build the full deterministic instance list for one seed. Instance terms
/// stay small (sorts within (2,2), depth within 2) so default budgets hold.
pub fn law_instances(alphabet: &Alphabet, n_max: usize, seed: u64) -> Vec<LawInstance> {
    let mut out = Vec::new();
    let mut g = TermGen::new(alphabet, Mode::Undirected, seed);
    let mut push = |law: &'static str, idx: usize, detail: String, mode: Mode, l: Term, r: Term| {
        out.push(LawInstance {
            law,
            index: idx,
            detail,
            mode,
            left: l,
            right: r,
        });
    };

    for i in 0..8 {
        let (k, l, m, n) = (arity(&mut g), arity(&mut g), arity(&mut g), arity(&mut g));
        let p = g.term(&Sort::plain(k, l), 2);
        let q = g.term(&Sort::plain(l, m), 2);
        let r = g.term(&Sort::plain(m, n), 2);
        push(
            "assoc_seq",
            i,
            format!("({k},{l});({l},{m});({m},{n})"),
            Mode::Undirected,
            Term::seq(Term::seq(p.clone(), q.clone()), r.clone()),
            Term::seq(p, Term::seq(q, r)),
        );
    }
    for i in 0..8 {
        let (k, l) = (arity(&mut g), arity(&mut g));
        let p = g.term(&Sort::plain(k, l), 2);
        push(
            "unit_seq",
            2 * i,
            format!("({k},{l}) right unit"),
            Mode::Undirected,
            Term::seq(p.clone(), ident_k(l)),
            p.clone(),
        );
        push(
            "unit_seq",
            2 * i + 1,
            format!("({k},{l}) left unit"),
            Mode::Undirected,
            Term::seq(ident_k(k), p.clone()),
            p,
        );
    }
    for i in 0..8 {
        let (sp, sr, st) = (g.sort(2), g.sort(2), g.sort(2));
        let p = g.term(&sp, 2);
        let r = g.term(&sr, 2);
        let t = g.term(&st, 2);
        push(
            "assoc_ten",
            i,
            "three tensor factors".to_string(),
            Mode::Undirected,
            Term::ten(Term::ten(p.clone(), r.clone()), t.clone()),
            Term::ten(p, Term::ten(r, t)),
        );
    }
    for i in 0..8 {
        let (k, l, m) = (arity(&mut g), arity(&mut g), arity(&mut g));
        let (n, u, v) = (arity(&mut g), arity(&mut g), arity(&mut g));
        let p = g.term(&Sort::plain(k, l), 1);
        let q = g.term(&Sort::plain(l, m), 1);
        let s = g.term(&Sort::plain(n, u), 1);
        let t = g.term(&Sort::plain(u, v), 1);
        push(
            "interchange",
            i,
            format!("({k},{l});({l},{m}) x ({n},{u});({u},{v})"),
            Mode::Undirected,
            Term::seq(Term::ten(p.clone(), s.clone()), Term::ten(q.clone(), t.clone())),
            Term::ten(Term::seq(p, q), Term::seq(s, t)),
        );
    }
    for i in 0..8 {
        let (k, l) = (arity(&mut g), arity(&mut g));
        let (m, n) = (arity(&mut g), arity(&mut g));
        let p = g.term(&Sort::plain(k, l), 2);
        let r = g.term(&Sort::plain(m, n), 2);
        push(
            "twist_natural",
            i,
            format!("({k},{l}) past ({m},{n})"),
            Mode::Undirected,
            Term::seq(Term::ten(p.clone(), r.clone()), twist_kl(l, n)),
            Term::seq(twist_kl(k, m), Term::ten(r, p)),
        );
    }
    for (i, (k, l)) in [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)]
        .into_iter()
        .enumerate()
    {
        push(
            "twist_involution",
            i,
            format!("X_{{{k},{l}}};X_{{{l},{k}}}"),
            Mode::Undirected,
            Term::seq(twist_kl(k, l), twist_kl(l, k)),
            ident_k(k + l),
        );
    }

    push(
        "snake",
        0,
        "d x I ; I x e".to_string(),
        Mode::Undirected,
        Term::seq(Term::ten(d(), ident()), Term::ten(ident(), e())),
        ident(),
    );
    push(
        "snake",
        1,
        "I x d ; e x I".to_string(),
        Mode::Undirected,
        Term::seq(Term::ten(ident(), d()), Term::ten(e(), ident())),
        ident(),
    );
    for n in 0..=n_max {
        push(
            "snake_n",
            2 * n,
            format!("d_{n} x I_{n} ; I_{n} x e_{n}"),
            Mode::Undirected,
            Term::seq(Term::ten(d_n(n), ident_k(n)), Term::ten(ident_k(n), e_n(n))),
            ident_k(n),
        );
        push(
            "snake_n",
            2 * n + 1,
            format!("I_{n} x d_{n} ; e_{n} x I_{n}"),
            Mode::Undirected,
            Term::seq(Term::ten(ident_k(n), d_n(n)), Term::ten(e_n(n), ident_k(n))),
            ident_k(n),
        );
    }
    for i in 0..6 {
        let (k, l) = (arity(&mut g), arity(&mut g));
        let p = g.term(&Sort::plain(k, l), 1);
        let ps = crate::syntax::star(&p);
        push(
            "dualizer",
            2 * i,
            format!("bend ({k},{l}) left"),
            Mode::Undirected,
            Term::seq(d_n(k), Term::ten(p.clone(), ident_k(k))),
            Term::seq(d_n(l), Term::ten(ident_k(l), ps.clone())),
        );
        push(
            "dualizer",
            2 * i + 1,
            format!("bend ({k},{l}) right"),
            Mode::Undirected,
            Term::seq(Term::ten(p, ident_k(l)), e_n(l)),
            Term::seq(Term::ten(ident_k(k), ps), e_n(k)),
        );
    }
    for i in 0..5 {
        let (k, l, m) = (
            g.word(2).len().min(1),
            arity(&mut g).min(2),
            arity(&mut g).min(2),
        );
        let p = g.term(&Sort::plain(k + l, m), 1);
        push(
            "curry_exists",
            i,
            format!("k={k} l={l} m={m}"),
            Mode::Undirected,
            Term::seq(Term::ten(cur(p.clone(), k, l), ident_k(l)), ev(l, m)),
            p,
        );
    }
    for i in 0..5 {
        let (k, l, m) = (
            g.word(2).len().min(1),
            arity(&mut g).min(2),
            arity(&mut g).min(2),
        );
        let q = g.term(&Sort::plain(k, m + l), 1);
        let p = Term::seq(Term::ten(q.clone(), ident_k(l)), ev(l, m));
        push(
            "curry_unique",
            i,
            format!("k={k} l={l} m={m}"),
            Mode::Undirected,
            cur(p, k, l),
            q,
        );
    }

    let mut dg = TermGen::new(alphabet, Mode::Directed, seed.wrapping_add(1));
    for i in 0..6 {
        let sort = dg.sort(2);
        let p = dg.term(&sort, 2);
        push(
            "unit_seq_dir",
            2 * i,
            format!("{} right unit", sort.render_mode(Mode::Directed)),
            Mode::Directed,
            Term::seq(p.clone(), ident_dir(&sort.right)),
            p.clone(),
        );
        push(
            "unit_seq_dir",
            2 * i + 1,
            format!("{} left unit", sort.render_mode(Mode::Directed)),
            Mode::Directed,
            Term::seq(ident_dir(&sort.left), p.clone()),
            p,
        );
    }
    push(
        "snake_dir",
        0,
        "d_L x I_L ; I_L x e_L".to_string(),
        Mode::Directed,
        Term::seq(Term::ten(d_l(), ident_l()), Term::ten(ident_l(), e_l())),
        ident_l(),
    );
    push(
        "snake_dir",
        1,
        "I_R x d_L ; e_L x I_R".to_string(),
        Mode::Directed,
        Term::seq(Term::ten(ident_r(), d_l()), Term::ten(e_l(), ident_r())),
        ident_r(),
    );
    for i in 0..4 {
        let (a, b, c, dd) = (dg.word(1), dg.word(1), dg.word(1), dg.word(1));
        let p = dg.term(&Sort::new(a.clone(), b.clone()), 2);
        let q = dg.term(&Sort::new(b, c.clone()), 2);
        let r = dg.term(&Sort::new(c, dd), 2);
        push(
            "assoc_seq_dir",
            i,
            "directed triple".to_string(),
            Mode::Directed,
            Term::seq(Term::seq(p.clone(), q.clone()), r.clone()),
            Term::seq(p, Term::seq(q, r)),
        );
    }
    out
}

/// Check every instance, preserving order; parallel evaluation when asked.
pub fn run_laws(
    instances: &[LawInstance],
    alphabet: &Alphabet,
    budget: usize,
    exec: ExecMode,
) -> Vec<LawOutcome> {
    map_instances(exec, instances, |inst| {
        let outcome = bisimilar(&inst.left, &inst.right, alphabet, inst.mode, budget);
        match outcome {
            Ok(v) => LawOutcome {
                law: inst.law.to_string(),
                index: inst.index,
                detail: inst.detail.clone(),
                ok: v.bisimilar,
                error: None,
            },
            Err(e) => LawOutcome {
                law: inst.law.to_string(),
                index: inst.index,
                detail: inst.detail.clone(),
                ok: false,
                error: Some(e.to_string()),
            },
        }
    })
}

/// Full law run for the command line.
pub fn law_suite(
    alphabet: &Alphabet,
    n_max: usize,
    seed: u64,
    budget: usize,
    exec: ExecMode,
) -> Result<Vec<LawOutcome>, Error> {
    let instances = law_instances(alphabet, n_max, seed);
    Ok(run_laws(&instances, alphabet, budget, exec))
}

pub fn laws_text(outcomes: &[LawOutcome]) -> String {
    let mut out = String::new();
    let mut failures = 0usize;
    for o in outcomes {
        let status = if o.ok {
            "pass".to_string()
        } else {
            failures += 1;
            match &o.error {
                Some(e) => format!("ERROR ({e})"),
                None => "FAIL".to_string(),
            }
        };
        out.push_str(&format!("{} #{} [{}]: {status}\n", o.law, o.index, o.detail));
    }
    out.push_str(&format!(
        "{} instances, {} failures\n",
        outcomes.len(),
        failures
    ));
    out
}

pub fn laws_json(outcomes: &[LawOutcome]) -> String {
    use serde::Serialize;
    #[derive(Serialize)]
    struct Row<'a> {
        law: &'a str,
        index: usize,
        detail: &'a str,
        ok: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: &'a Option<String>,
    }
    let rows: Vec<Row> = outcomes
        .iter()
        .map(|o| Row {
            law: &o.law,
            index: o.index,
            detail: &o.detail,
            ok: o.ok,
            error: &o.error,
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("serializable")
}
