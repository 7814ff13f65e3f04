//! Word moves, their cluster transformations, and the DT sequence.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::cluster::{separate, ChartKind, ClusterError, ClusterTransformation, PullbackMap, Step};
use crate::rootdata::{braid_order, PairWord, RootDataError};
use crate::seed::{amalgamate, Seed, SeedError, VertexId};
use crate::symfun::RationalFunction;

mod schematic;

pub use schematic::{leading_exponents, reflected_state, LeadingExponentState, Token, TokenKind};

#[derive(Debug, Error)]
pub enum DtError {
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("mutation sequence failed validation: {0}")]
    SequenceValidationFailed(String),
    #[error("words do not represent the same pair")]
    DifferentPair,
    #[error("word search exceeded {0} states")]
    SearchBudgetExceeded(usize),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("invalid prefix: {0}")]
    InvalidPrefix(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// Swap two adjacent letters of opposite signs.
    Move1,
    /// Braid relation on a same-sign block.
    Move2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    /// Index of the first letter touched.
    pub position: usize,
    /// Letters of the block before the move.
    pub braid_block: Vec<i64>,
}

impl Move {
    pub fn swap(word: &PairWord, position: usize) -> Move {
        let l = word.letters();
        Move {
            kind: MoveKind::Move1,
            position,
            braid_block: l[position..(position + 2).min(l.len())].to_vec(),
        }
    }

    pub fn braid(word: &PairWord, position: usize, len: usize) -> Move {
        let l = word.letters();
        Move {
            kind: MoveKind::Move2,
            position,
            braid_block: l[position..(position + len).min(l.len())].to_vec(),
        }
    }
}

/// Hard-coded 10-step path for the G2 braid move, as two half-paths over the
/// interior strings a = (α,1), b = (α,2), c = (β,1), d = (β,2) of a block
/// starting with the level α where `C_αβ = -1`.
const G2_HALVES: [[usize; 5]; 2] = [[3, 2, 1, 0, 3], [1, 3, 2, 0, 3]];

fn move2_candidates(cc: i64, alpha_short_side: bool) -> Vec<Vec<usize>> {
    match cc {
        0 => vec![vec![]],
        1 => vec![vec![0]],
        // indices into [a, b] = [(α,1), (β,1)]
        2 => vec![vec![1, 0, 1], vec![0, 1, 0]],
        3 => {
            let [h1, h2] = G2_HALVES;
            let fwd: Vec<usize> = h1.iter().chain(h2.iter()).copied().collect();
            let swapped: Vec<usize> = h2.iter().chain(h1.iter()).copied().collect();
            let mut out = vec![fwd.clone(), swapped.clone()];
            let mut rev = vec![fwd.iter().rev().copied().collect(), swapped.iter().rev().copied().collect()];
            if alpha_short_side {
                rev.append(&mut out);
                rev
            } else {
                out.append(&mut rev);
                out
            }
        }
        _ => unreachable!("finite type"),
    }
}

/// Rewritten word and induced transformation from amalgamate(word) to
/// amalgamate(new word). The transformation is replayed and compared with the
/// target seed before it is returned.
pub fn apply_move(word: &PairWord, mv: &Move) -> Result<(PairWord, ClusterTransformation), DtError> {
    let letters = word.letters();
    let k = mv.position;
    let (source, _) = amalgamate(word);
    match mv.kind {
        MoveKind::Move1 => {
            if k + 1 >= letters.len() {
                return Err(DtError::MoveNotApplicable(format!("no letter pair at position {k}")));
            }
            let (x, y) = (letters[k], letters[k + 1]);
            if x.signum() == y.signum() {
                return Err(DtError::MoveNotApplicable(format!("letters {x} {y} have equal signs")));
            }
            let mut nl = letters.to_vec();
            nl.swap(k, k + 1);
            let next = PairWord::new_unchecked(nl, word.cartan())?;
            let (target, _) = amalgamate(&next);
            let steps = if x.abs() == y.abs() {
                let a = word.level(k);
                let i = letters[..=k].iter().filter(|l| l.unsigned_abs() as usize == a + 1).count();
                vec![Step::Mutate(VertexId::new(a, i))]
            } else {
                vec![]
            };
            let t = ClusterTransformation::new(source, steps)?;
            if t.target != target {
                return Err(DtError::SequenceValidationFailed(format!("swap at {k} in {word}")));
            }
            Ok((next, t))
        }
        MoveKind::Move2 => {
            let c = word.cartan();
            if k >= letters.len() {
                return Err(DtError::MoveNotApplicable(format!("no letter at position {k}")));
            }
            let a = word.level(k);
            let sign = letters[k].signum();
            let b = match letters.get(k + 1) {
                Some(&l) if l.signum() == sign && l.unsigned_abs() as usize != a + 1 => {
                    l.unsigned_abs() as usize - 1
                }
                _ => return Err(DtError::MoveNotApplicable(format!("no braid block at {k}"))),
            };
            let m = braid_order(c, a, b);
            if k + m > letters.len() {
                return Err(DtError::MoveNotApplicable(format!("braid block at {k} is too short")));
            }
            let (la, lb) = (sign * (a as i64 + 1), sign * (b as i64 + 1));
            for (j, &l) in letters[k..k + m].iter().enumerate() {
                if l != if j % 2 == 0 { la } else { lb } {
                    return Err(DtError::MoveNotApplicable(format!("letters at {k} are not a braid block")));
                }
            }
            let mut nl = letters.to_vec();
            for (j, x) in nl[k..k + m].iter_mut().enumerate() {
                *x = if j % 2 == 0 { lb } else { la };
            }
            let next = PairWord::new_unchecked(nl, word.cartan())?;
            let (target, _) = amalgamate(&next);
            let before =
                |lev: usize| letters[..k].iter().filter(|l| l.unsigned_abs() as usize == lev + 1).count();
            let (ia, ib) = (before(a), before(b));
            let (pa, pb) = (m.div_ceil(2), m / 2);
            let (qa, qb) = (pb, pa);
            // interior strings: level a first, then level b
            let mut src_int = Vec::new();
            src_int.extend((1..pa).map(|j| VertexId::new(a, ia + j)));
            src_int.extend((1..pb).map(|j| VertexId::new(b, ib + j)));
            let mut tgt_int = Vec::new();
            tgt_int.extend((1..qa).map(|j| VertexId::new(a, ia + j)));
            tgt_int.extend((1..qb).map(|j| VertexId::new(b, ib + j)));
            let mut relabel = BTreeMap::new();
            for v in source.vertices() {
                let (lev, pos) = (v.level().expect("string"), v.pos().expect("string"));
                let (i0, p, q) = if lev == a {
                    (ia, pa, qa)
                } else if lev == b {
                    (ib, pb, qb)
                } else {
                    continue;
                };
                if pos >= i0 + p && p != q {
                    relabel.insert(v.clone(), VertexId::new(lev, pos + q - p));
                }
            }
            for (s, t) in src_int.iter().zip(&tgt_int) {
                if s != t {
                    relabel.insert(s.clone(), t.clone());
                }
            }
            let cc = c.c(a, b) * c.c(b, a);
            let short_side = c.c(a, b) != -1;
            for cand in move2_candidates(cc, short_side) {
                let mut steps: Vec<Step> = cand.iter().map(|&j| Step::Mutate(src_int[j].clone())).collect();
                if !relabel.is_empty() {
                    steps.push(Step::Iso(relabel.clone()));
                }
                let t = ClusterTransformation::new(source.clone(), steps)?;
                if t.target == target {
                    return Ok((next, t));
                }
            }
            Err(DtError::SequenceValidationFailed(format!("braid block at {k} in {word}")))
        }
    }
}

/// Apply moves in order, concatenating the transformations.
pub fn apply_moves(word: &PairWord, moves: &[Move]) -> Result<(PairWord, ClusterTransformation), DtError> {
    let mut cur = word.clone();
    let mut steps = Vec::new();
    for mv in moves {
        let (next, t) = apply_move(&cur, mv)?;
        steps.extend(t.steps);
        cur = next;
    }
    let t = ClusterTransformation::new(amalgamate(word).0, steps)?;
    Ok((cur, t))
}

/// Budget on braid-search states.
pub const SEARCH_BUDGET: usize = 1_000_000;

/// Move1 swaps that bring `w` to u-before-v form.
fn sort_moves(word: &PairWord) -> Result<(Vec<Move>, PairWord), DtError> {
    let mut cur = word.clone();
    let mut moves = Vec::new();
    loop {
        let l = cur.letters();
        let Some(k) = (0..l.len().saturating_sub(1)).find(|&k| l[k] > 0 && l[k + 1] < 0) else {
            break;
        };
        let mut nl = l.to_vec();
        nl.swap(k, k + 1);
        moves.push(Move::swap(&cur, k));
        cur = PairWord::new_unchecked(nl, cur.cartan())?;
    }
    Ok((moves, cur))
}

/// Braid path between two reduced words of one element, as (position, m).
fn braid_path(
    c: &crate::rootdata::CartanMatrix,
    from: &[usize],
    to: &[usize],
    budget: usize,
) -> Result<Vec<(usize, usize)>, DtError> {
    if from == to {
        return Ok(vec![]);
    }
    let mut prev: HashMap<Vec<usize>, (Vec<usize>, usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([from.to_vec()]);
    prev.insert(from.to_vec(), (vec![], 0, 0));
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            if x == y {
                continue;
            }
            let m = braid_order(c, x - 1, y - 1);
            if i + m > w.len() || !(0..m).all(|j| w[i + j] == if j % 2 == 0 { x } else { y }) {
                continue;
            }
            let mut n = w.clone();
            for (j, z) in n[i..i + m].iter_mut().enumerate() {
                *z = if j % 2 == 0 { y } else { x };
            }
            if prev.contains_key(&n) {
                continue;
            }
            prev.insert(n.clone(), (w.clone(), i, m));
            if n == to {
                let mut path = Vec::new();
                let mut cur = n;
                while cur != from {
                    let (p, i, m) = prev[&cur].clone();
                    path.push((i, m));
                    cur = p;
                }
                path.reverse();
                return Ok(path);
            }
            if prev.len() > budget {
                return Err(DtError::SearchBudgetExceeded(budget));
            }
            queue.push_back(n);
        }
    }
    Err(DtError::DifferentPair)
}

/// Moves rewriting `source` into `target`.
pub fn word_path(source: &PairWord, target: &PairWord) -> Result<Vec<Move>, DtError> {
    word_path_with_budget(source, target, SEARCH_BUDGET)
}

pub fn word_path_with_budget(
    source: &PairWord,
    target: &PairWord,
    budget: usize,
) -> Result<Vec<Move>, DtError> {
    if !source.same_pair(target) {
        return Err(DtError::DifferentPair);
    }
    if source.letters() == target.letters() {
        return Ok(vec![]);
    }
    let (mut moves, mut cur) = sort_moves(source)?;
    let (back, sorted_target) = sort_moves(target)?;
    let c = source.cartan();
    let nu = cur.u().letters.len();
    let (su, sv) = (cur.u().letters, cur.v().letters);
    let (tu, tv) = (sorted_target.u().letters, sorted_target.v().letters);
    for (offset, from, to, sign) in [(0, &su, &tu, -1i64), (nu, &sv, &tv, 1)] {
        for (i, m) in braid_path(c, from, to, budget)? {
            let mv = Move::braid(&cur, offset + i, m);
            let mut nl = cur.letters().to_vec();
            let (x, y) = (nl[offset + i], nl[offset + i + 1]);
            for (j, z) in nl[offset + i..offset + i + m].iter_mut().enumerate() {
                *z = if j % 2 == 0 { y } else { x };
            }
            debug_assert!(nl[offset + i].signum() == sign);
            cur = PairWord::new_unchecked(nl, cur.cartan())?;
            moves.push(mv);
        }
    }
    // undo the target's sort, last swap first
    for mv in back.iter().rev() {
        moves.push(Move::swap(&cur, mv.position));
        let mut nl = cur.letters().to_vec();
        nl.swap(mv.position, mv.position + 1);
        cur = PairWord::new_unchecked(nl, cur.cartan())?;
    }
    debug_assert_eq!(cur.letters(), target.letters());
    Ok(moves)
}

/// Output of [`build_dt`].
#[derive(Clone, Debug)]
pub struct DtBuild {
    pub word: PairWord,
    pub transformation: ClusterTransformation,
    /// Non-reduced words passed through during the construction.
    pub non_reduced_intermediates: Vec<String>,
    /// Number of Move1 swaps used to reach u-before-v form first.
    pub conjugation_moves: usize,
}

/// The DT sequence of the pair word.
///
/// Words that are not u-before-v are sorted first by Move1 swaps τ and the
/// result is τ⁻¹ ∘ DT ∘ τ.
pub fn build_dt(word: &PairWord) -> Result<DtBuild, DtError> {
    let (pre, sorted) = sort_moves(word)?;
    let mut steps = Vec::new();
    let mut cur = word.clone();
    for mv in &pre {
        let (n, t) = apply_move(&cur, mv)?;
        steps.extend(t.steps);
        cur = n;
    }
    let mut non_reduced = Vec::new();
    let mut note = |w: &PairWord| {
        if !w.is_reduced_pair() {
            let s = w.to_string();
            if !non_reduced.contains(&s) {
                non_reduced.push(s);
            }
        }
    };
    let c = sorted.cartan().clone();
    let m = sorted.u().letters.len();
    let n = sorted.v().letters.len();
    let swap = |cur: &mut PairWord, pos: usize, steps: &mut Vec<Step>| -> Result<(), DtError> {
        let (next, t) = apply_move(cur, &Move::swap(cur, pos))?;
        steps.extend(t.steps);
        *cur = next;
        Ok(())
    };
    // stage 1, u side: flip the leftmost letter and carry it past the
    // remaining negative letters
    for _ in 0..m {
        let mut nl = cur.letters().to_vec();
        nl[0] = -nl[0];
        cur = PairWord::new_unchecked(nl, &c)?;
        note(&cur);
        let mut pos = 0;
        while pos + 1 < cur.len() && cur.letters()[pos + 1] < 0 {
            swap(&mut cur, pos, &mut steps)?;
            note(&cur);
            pos += 1;
        }
    }
    // v side: flip the rightmost letter and carry it left to the negative block
    for j in 0..n {
        let last = cur.len() - 1;
        let mut nl = cur.letters().to_vec();
        nl[last] = -nl[last];
        cur = PairWord::new_unchecked(nl, &c)?;
        note(&cur);
        let mut pos = last;
        while pos > m + j {
            swap(&mut cur, pos - 1, &mut steps)?;
            note(&cur);
            pos -= 1;
        }
    }
    // stage 2: transposition
    let counts = cur.counts();
    let sigma: BTreeMap<VertexId, VertexId> = counts
        .iter()
        .enumerate()
        .flat_map(|(a, &na)| (0..=na).map(move |i| (VertexId::new(a, i), VertexId::new(a, na - i))))
        .filter(|(x, y)| x != y)
        .collect();
    if !sigma.is_empty() {
        steps.push(Step::Iso(sigma));
    }
    let rev: Vec<i64> = cur.letters().iter().rev().map(|l| -l).collect();
    cur = PairWord::new_unchecked(rev, &c)?;
    note(&cur);
    // stage 3: restore the layout
    for i in 0..m {
        let mut pos = n + i;
        while pos > i {
            swap(&mut cur, pos - 1, &mut steps)?;
            note(&cur);
            pos -= 1;
        }
    }
    if cur.letters() != sorted.letters() {
        return Err(DtError::ReplayMismatch(format!("layout not restored: {cur}")));
    }
    for mv in pre.iter().rev() {
        swap(&mut cur, mv.position, &mut steps)?;
    }
    let source = amalgamate(word).0;
    let t = ClusterTransformation::new(source.clone(), steps)?;
    if !t.target.principal_eq(&source) {
        return Err(DtError::ReplayMismatch("final seed differs from the source seed".into()));
    }
    Ok(DtBuild {
        word: word.clone(),
        transformation: t,
        non_reduced_intermediates: non_reduced,
        conjugation_moves: pre.len(),
    })
}

/// Reduced X-pullback of the DT transformation of `word`.
pub fn dt_pullback(word: &PairWord) -> Result<PullbackMap, DtError> {
    let b = build_dt(word)?;
    Ok(separate(&b.transformation)?.to_pullback()?)
}

/// The involution i_X from the chart of `word` to the chart of its reverse.
#[derive(Clone, Debug)]
pub struct IxMap {
    pub source_word: PairWord,
    pub target_word: PairWord,
    pub source: Seed,
    pub target: Seed,
    /// Source vertex to target vertex, `(a, i) -> (a, n_a - i)`.
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

impl IxMap {
    /// Pullback `X°_{σ(a)} -> X_a^{-1}`, on the reduced chart if `reduced`.
    pub fn pullback(&self, reduced: bool) -> PullbackMap {
        let images = self
            .vertex_map
            .iter()
            .filter(|(a, _)| !reduced || !self.source.is_frozen(a).unwrap_or(true))
            .map(|(a, b)| {
                let x = RationalFunction::var(crate::cluster::chart_var(ChartKind::X, a));
                (b.clone(), x.inv().expect("variable is nonzero"))
            })
            .collect();
        PullbackMap { kind: ChartKind::X, images }
    }
}

pub fn i_x(word: &PairWord) -> Result<IxMap, DtError> {
    let target_word = word.reversed();
    let source = amalgamate(word).0;
    let target = amalgamate(&target_word).0;
    let counts = word.counts();
    let vertex_map: BTreeMap<VertexId, VertexId> = counts
        .iter()
        .enumerate()
        .flat_map(|(a, &na)| (0..=na).map(move |i| (VertexId::new(a, i), VertexId::new(a, na - i))))
        .collect();
    let sigma: HashMap<VertexId, VertexId> = vertex_map.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    let mapped = source.negated().apply_isomorphism(&sigma)?;
    if mapped != target {
        return Err(DtError::ReplayMismatch("reversed seed differs from -σ(seed)".into()));
    }
    Ok(IxMap { source_word: word.clone(), target_word, source, target, vertex_map })
}

/// Pullback of D_X = i_X ∘ DT on the reduced chart of `word`; the image lives
/// on the chart of the reversed word.
pub fn d_x_pullback(word: &PairWord) -> Result<PullbackMap, DtError> {
    let ix = i_x(word)?.pullback(true);
    Ok(ix.precompose(&dt_pullback(word)?)?)
}

/// Pullback of (D_X)² on the reduced chart of `word`.
pub fn d_x_squared(word: &PairWord) -> Result<PullbackMap, DtError> {
    let first = d_x_pullback(word)?;
    let second = d_x_pullback(&word.reversed())?;
    Ok(second.precompose(&first)?)
}
