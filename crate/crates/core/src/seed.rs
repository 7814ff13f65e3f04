//! Seeds, mutation, letter seeds and amalgamation along string diagrams.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootdata::{CartanMatrix, PairWord, RootDataError};

pub type Q = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeedError {
    #[error("vertex {0} is frozen")]
    FrozenVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("not an isomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error("seed integrity violated: {0}")]
    Integrity(String),
    #[error("bad seed json: {0}")]
    Json(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

/// A seed vertex. Strings of a string diagram are `(level, position)` with a
/// 0-based level; free-standing seeds may use opaque labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Str { level: usize, pos: usize },
    Label(String),
}

impl VertexId {
    pub fn new(level: usize, pos: usize) -> Self {
        VertexId::Str { level, pos }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            VertexId::Str { level, .. } => Some(*level),
            VertexId::Label(_) => None,
        }
    }

    pub fn pos(&self) -> Option<usize> {
        match self {
            VertexId::Str { pos, .. } => Some(*pos),
            VertexId::Label(_) => None,
        }
    }

    /// Identifier-safe name used for cluster variables.
    pub fn var_suffix(&self) -> String {
        match self {
            VertexId::Str { level, pos } => format!("{}_{}", level + 1, pos),
            VertexId::Label(s) => s.clone(),
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Str { level, pos } => write!(f, "{}:{}", level + 1, pos),
            VertexId::Label(s) => f.write_str(s),
        }
    }
}

impl FromStr for VertexId {
    type Err = SeedError;
    fn from_str(s: &str) -> Result<Self, SeedError> {
        if let Some((a, b)) = s.split_once(':') {
            let level: usize =
                a.trim().parse().map_err(|_| SeedError::Json(format!("bad vertex id `{s}`")))?;
            let pos: usize = b.trim().parse().map_err(|_| SeedError::Json(format!("bad vertex id `{s}`")))?;
            if level == 0 {
                return Err(SeedError::Json(format!("levels are 1-based in `{s}`")));
            }
            Ok(VertexId::new(level - 1, pos))
        } else if s.is_empty() {
            Err(SeedError::Json("empty vertex id".into()))
        } else {
            Ok(VertexId::Label(s.to_string()))
        }
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Quadruple `(I, I0, eps, d)`.
#[derive(Clone, Debug)]
pub struct Seed {
    vertices: Vec<VertexId>,
    frozen: Vec<bool>,
    eps: Vec<Vec<Q>>,
    d: Vec<i64>,
    index: HashMap<VertexId, usize>,
}

impl PartialEq for Seed {
    fn eq(&self, o: &Self) -> bool {
        self.vertices == o.vertices && self.frozen == o.frozen && self.eps == o.eps && self.d == o.d
    }
}

impl Eq for Seed {}

impl Seed {
    pub fn new(
        vertices: Vec<VertexId>,
        frozen: Vec<bool>,
        eps: Vec<Vec<Q>>,
        d: Vec<i64>,
    ) -> Result<Self, SeedError> {
        let n = vertices.len();
        if frozen.len() != n || d.len() != n || eps.len() != n || eps.iter().any(|r| r.len() != n) {
            return Err(SeedError::Integrity("dimension mismatch".into()));
        }
        let index: HashMap<VertexId, usize> =
            vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        if index.len() != n {
            return Err(SeedError::Integrity("duplicate vertex".into()));
        }
        let s = Seed { vertices, frozen, eps, d, index };
        s.check()?;
        Ok(s)
    }

    pub fn empty() -> Self {
        Seed {
            vertices: Vec::new(),
            frozen: Vec::new(),
            eps: Vec::new(),
            d: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn check(&self) -> Result<(), SeedError> {
        let n = self.len();
        for a in 0..n {
            if self.d[a] <= 0 {
                return Err(SeedError::Integrity(format!("d at {} not positive", self.vertices[a])));
            }
            for b in 0..n {
                let e = self.eps[a][b];
                if *e.denom() != 1 && *e.denom() != 2 {
                    return Err(SeedError::Integrity(format!(
                        "entry {e} at ({}, {}) has denominator outside {{1, 2}}",
                        self.vertices[a], self.vertices[b]
                    )));
                }
                if !(self.frozen[a] && self.frozen[b]) && !e.is_integer() {
                    return Err(SeedError::Integrity(format!(
                        "non-integer entry {e} at ({}, {})",
                        self.vertices[a], self.vertices[b]
                    )));
                }
                if e * self.d[b] != -self.eps[b][a] * self.d[a] {
                    return Err(SeedError::Integrity(format!(
                        "eps-hat not skew at ({}, {})",
                        self.vertices[a], self.vertices[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn index_of(&self, v: &VertexId) -> Result<usize, SeedError> {
        self.index.get(v).copied().ok_or_else(|| SeedError::UnknownVertex(v.clone()))
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_frozen(&self, v: &VertexId) -> Result<bool, SeedError> {
        Ok(self.frozen[self.index_of(v)?])
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn unfrozen(&self) -> Vec<VertexId> {
        self.vertices.iter().zip(&self.frozen).filter(|(_, &f)| !f).map(|(v, _)| v.clone()).collect()
    }

    pub fn frozen(&self) -> Vec<VertexId> {
        self.vertices.iter().zip(&self.frozen).filter(|(_, &f)| f).map(|(v, _)| v.clone()).collect()
    }

    pub fn eps(&self, a: &VertexId, b: &VertexId) -> Result<Q, SeedError> {
        Ok(self.eps[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn eps_at(&self, a: usize, b: usize) -> Q {
        self.eps[a][b]
    }

    pub fn epsilon(&self) -> &[Vec<Q>] {
        &self.eps
    }

    /// `eps-hat[a][b] = eps[a][b] * d[b]`.
    pub fn eps_hat(&self, a: &VertexId, b: &VertexId) -> Result<Q, SeedError> {
        let j = self.index_of(b)?;
        Ok(self.eps[self.index_of(a)?][j] * self.d[j])
    }

    pub fn d(&self, v: &VertexId) -> Result<i64, SeedError> {
        Ok(self.d[self.index_of(v)?])
    }

    pub fn multipliers(&self) -> &[i64] {
        &self.d
    }

    /// Seed mutation at an unfrozen vertex.
    pub fn mutate(&self, c: &VertexId) -> Result<Seed, SeedError> {
        let k = self.index_of(c)?;
        if self.frozen[k] {
            return Err(SeedError::FrozenVertex(c.clone()));
        }
        let n = self.len();
        let mut eps = self.eps.clone();
        for a in 0..n {
            for b in 0..n {
                if a == k || b == k {
                    eps[a][b] = -self.eps[a][b];
                } else {
                    let (x, y) = (self.eps[a][k], self.eps[k][b]);
                    if (x * y).is_positive() {
                        eps[a][b] = self.eps[a][b] + x.abs() * y;
                    }
                }
            }
        }
        let s = Seed {
            vertices: self.vertices.clone(),
            frozen: self.frozen.clone(),
            eps,
            d: self.d.clone(),
            index: self.index.clone(),
        };
        s.check()?;
        Ok(s)
    }

    pub fn mutate_all(&self, seq: &[VertexId]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for c in seq {
            s = s.mutate(c)?;
        }
        Ok(s)
    }

    /// Entrywise negation of `eps`.
    pub fn negated(&self) -> Seed {
        let mut s = self.clone();
        for row in &mut s.eps {
            for e in row.iter_mut() {
                *e = -*e;
            }
        }
        s
    }

    /// Relabel vertices through a bijection `sigma`; vertices are re-sorted.
    pub fn apply_isomorphism(&self, sigma: &HashMap<VertexId, VertexId>) -> Result<Seed, SeedError> {
        let n = self.len();
        let mut image = Vec::with_capacity(n);
        for v in &self.vertices {
            let t = sigma.get(v).ok_or_else(|| SeedError::NotAnIsomorphism(format!("{v} has no image")))?;
            image.push(t.clone());
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| image[i].cmp(&image[j]));
        for w in order.windows(2) {
            if image[w[0]] == image[w[1]] {
                return Err(SeedError::NotAnIsomorphism(format!("{} hit twice", image[w[0]])));
            }
        }
        let vertices: Vec<VertexId> = order.iter().map(|&i| image[i].clone()).collect();
        let frozen = order.iter().map(|&i| self.frozen[i]).collect();
        let d = order.iter().map(|&i| self.d[i]).collect();
        let eps = order.iter().map(|&i| order.iter().map(|&j| self.eps[i][j]).collect()).collect();
        Seed::new(vertices, frozen, eps, d)
    }

    /// Check that `sigma` carries `self` onto `target` exactly.
    pub fn isomorphism_onto(
        &self,
        sigma: &HashMap<VertexId, VertexId>,
        target: &Seed,
    ) -> Result<(), SeedError> {
        let img = self.apply_isomorphism(sigma)?;
        if &img == target {
            Ok(())
        } else {
            Err(SeedError::NotAnIsomorphism(first_difference(&img, target)))
        }
    }

    /// Equality of vertex sets, frozen sets, `d`, and the `eps` rows of
    /// unfrozen vertices restricted to unfrozen columns.
    pub fn principal_eq(&self, o: &Seed) -> bool {
        if self.vertices != o.vertices || self.frozen != o.frozen || self.d != o.d {
            return false;
        }
        let n = self.len();
        (0..n)
            .filter(|&a| !self.frozen[a])
            .all(|a| (0..n).filter(|&b| !self.frozen[b]).all(|b| self.eps[a][b] == o.eps[a][b]))
    }

    /// Rows of unfrozen vertices over all columns (what the reduced X-chart sees).
    pub fn unfrozen_rows_eq(&self, o: &Seed) -> bool {
        if self.vertices != o.vertices || self.frozen != o.frozen || self.d != o.d {
            return false;
        }
        (0..self.len()).filter(|&a| !self.frozen[a]).all(|a| self.eps[a] == o.eps[a])
    }

    /// Graphviz rendering; `eps[a][b] > 0` draws `a -> b`.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph seed {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if self.frozen[i] { "box" } else { "circle" };
            out.push_str(&format!("  \"{v}\" [shape={shape}, label=\"{v}\\nd={}\"];\n", self.d[i]));
        }
        let n = self.len();
        for a in 0..n {
            for b in (a + 1)..n {
                let e = self.eps[a][b];
                if e.is_zero() {
                    continue;
                }
                let (src, dst, p, q) = if e.is_positive() {
                    (a, b, self.eps[a][b], -self.eps[b][a])
                } else {
                    (b, a, self.eps[b][a], -self.eps[a][b])
                };
                let mut attrs = Vec::new();
                if !p.is_integer() || !q.is_integer() {
                    attrs.push("style=dashed".to_string());
                }
                if p != Q::from_integer(1) || q != Q::from_integer(1) {
                    attrs.push(format!("label=\"{p},{q}\""));
                }
                let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\"{attrs};\n",
                    self.vertices[src], self.vertices[dst]
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| VertexJson { id: v.to_string(), frozen: self.frozen[i], d: self.d[i] })
                .collect(),
            epsilon: self.eps.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Seed, SeedError> {
        let vertices = j.vertices.iter().map(|v| v.id.parse()).collect::<Result<Vec<VertexId>, _>>()?;
        let eps = j
            .epsilon
            .iter()
            .map(|r| r.iter().map(|e| parse_q(e)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Seed::new(
            vertices,
            j.vertices.iter().map(|v| v.frozen).collect(),
            eps,
            j.vertices.iter().map(|v| v.d).collect(),
        )
    }
}

fn first_difference(a: &Seed, b: &Seed) -> String {
    if a.vertices != b.vertices {
        return "vertex sets differ".into();
    }
    if a.frozen != b.frozen {
        return "frozen sets differ".into();
    }
    if a.d != b.d {
        return "multipliers differ".into();
    }
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a.eps[i][j] != b.eps[i][j] {
                return format!(
                    "eps at ({}, {}): {} vs {}",
                    a.vertices[i], a.vertices[j], a.eps[i][j], b.eps[i][j]
                );
            }
        }
    }
    "equal".into()
}

fn parse_q(s: &str) -> Result<Q, SeedError> {
    let bad = || SeedError::Json(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Q::new(p.trim().parse().map_err(|_| bad())?, q))
        }
        None => Ok(Q::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub frozen: bool,
    pub d: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub vertices: Vec<VertexJson>,
    pub epsilon: Vec<Vec<String>>,
}

/// Per-level layout of a pair word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringDiagram {
    pub word: PairWord,
    /// Letter indices on each 0-based level, left to right.
    pub nodes: Vec<Vec<usize>>,
    /// Every string with its open flag (open = endpoint = frozen).
    pub strings: Vec<(VertexId, bool)>,
}

impl StringDiagram {
    pub fn new(word: &PairWord) -> Self {
        let rank = word.cartan().rank();
        let mut nodes = vec![Vec::new(); rank];
        for k in 0..word.len() {
            nodes[word.level(k)].push(k);
        }
        let mut strings = Vec::new();
        for (a, ns) in nodes.iter().enumerate() {
            for i in 0..=ns.len() {
                strings.push((VertexId::new(a, i), i == 0 || i == ns.len()));
            }
        }
        StringDiagram { word: word.clone(), nodes, strings }
    }

    /// Strings to the left and right of letter `k` on its level.
    pub fn letter_strings(&self, k: usize) -> (VertexId, VertexId) {
        let a = self.word.level(k);
        let i = self.nodes[a].iter().position(|&x| x == k).expect("letter on its level");
        (VertexId::new(a, i), VertexId::new(a, i + 1))
    }

    /// String of level `b` that letter `k` crosses (for `b` not its level):
    /// the number of level-`b` letters strictly before `k`.
    pub fn crossing_string(&self, k: usize, b: usize) -> VertexId {
        VertexId::new(b, self.nodes[b].iter().filter(|&&x| x < k).count())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.len()).collect()
    }

    /// Interior (defrosted) strings.
    pub fn interior(&self) -> Vec<VertexId> {
        self.strings.iter().filter(|(_, open)| !open).map(|(v, _)| v.clone()).collect()
    }
}

/// Seed of a single signed letter; vertices `(a, 0)`, `(a, 1)` for the split
/// level and `(b, 0)` for the others, all frozen.
pub fn letter_seed(letter: i64, cartan: &CartanMatrix) -> Result<Seed, SeedError> {
    let word = PairWord::new(vec![letter], cartan)?;
    Ok(amalgamate(&word).0.freeze_all())
}

impl Seed {
    fn freeze_all(mut self) -> Seed {
        for f in &mut self.frozen {
            *f = true;
        }
        self
    }
}

/// Contributions of one letter: (row vertex, column vertex, value).
fn letter_entries(word: &PairWord, diag: &StringDiagram, k: usize) -> Vec<(VertexId, VertexId, Q)> {
    let c = word.cartan();
    let a = word.level(k);
    let sign: i64 = if word.letters()[k] > 0 { 1 } else { -1 };
    let (minus, plus) = diag.letter_strings(k);
    let half = |x: i64| Q::new(sign * x, 2);
    let mut out = vec![
        (plus.clone(), minus.clone(), Q::from_integer(sign)),
        (minus.clone(), plus.clone(), Q::from_integer(-sign)),
    ];
    for b in 0..c.rank() {
        if b == a || c.c(a, b) == 0 {
            continue;
        }
        let s = diag.crossing_string(k, b);
        out.push((plus.clone(), s.clone(), half(c.c(b, a))));
        out.push((minus.clone(), s.clone(), half(-c.c(b, a))));
        out.push((s.clone(), minus.clone(), half(c.c(a, b))));
        out.push((s, plus.clone(), half(-c.c(a, b))));
    }
    out
}

/// Amalgamated seed of a pair word, interior strings defrosted.
pub fn amalgamate(word: &PairWord) -> (Seed, StringDiagram) {
    let diag = StringDiagram::new(word);
    let vertices: Vec<VertexId> = diag.strings.iter().map(|(v, _)| v.clone()).collect();
    let frozen: Vec<bool> = diag.strings.iter().map(|(_, f)| *f).collect();
    let index: HashMap<VertexId, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let n = vertices.len();
    let mut eps = vec![vec![Q::zero(); n]; n];
    for k in 0..word.len() {
        for (r, c, x) in letter_entries(word, &diag, k) {
            eps[index[&r]][index[&c]] += x;
        }
    }
    let sym = word.cartan().symmetrizer();
    let d = vertices.iter().map(|v| sym[v.level().expect("string vertex")]).collect();
    let seed = Seed::new(vertices, frozen, eps, d).expect("amalgamated seed is well formed");
    (seed, diag)
}

/// Random seed for property tests: up to `max_vertices` vertices whose
/// multipliers come from a random Cartan symmetrizer of rank at most 4.
pub fn random_seed<R: Rng>(rng: &mut R, max_vertices: usize) -> Seed {
    const LABELS: [&str; 8] = ["A1", "A2", "B2", "G2", "A3", "B3", "C3", "B4"];
    let cartan = CartanMatrix::from_label(LABELS[rng.gen_range(0..LABELS.len())]).expect("known label");
    let n = rng.gen_range(2..=max_vertices.max(2));
    let levels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..cartan.rank())).collect();
    let mut counters: BTreeMap<usize, usize> = BTreeMap::new();
    let vertices: Vec<VertexId> = levels
        .iter()
        .map(|&l| {
            let c = counters.entry(l).or_insert(0);
            *c += 1;
            VertexId::new(l, *c - 1)
        })
        .collect();
    let d: Vec<i64> = levels.iter().map(|&l| cartan.symmetrizer()[l]).collect();
    let mut frozen: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
    if frozen.iter().all(|&f| f) {
        frozen[0] = false;
    }
    let ok = |e: Q, both_frozen: bool| {
        e.abs() <= Q::from_integer(3) && (*e.denom() == 1 || (both_frozen && *e.denom() == 2))
    };
    let mut eps = vec![vec![Q::zero(); n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let bf = frozen[a] && frozen[b];
            for _ in 0..8 {
                let w = rng.gen_range(-6i64..=6);
                let eab = Q::new(w, 2 * d[b]) * 2;
                let eba = Q::new(-w, 2 * d[a]) * 2;
                if ok(eab, bf) && ok(eba, bf) {
                    eps[a][b] = eab;
                    eps[b][a] = eba;
                    break;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vertices[i].cmp(&vertices[j]));
    Seed::new(
        order.iter().map(|&i| vertices[i].clone()).collect(),
        order.iter().map(|&i| frozen[i]).collect(),
        order.iter().map(|&i| order.iter().map(|&j| eps[i][j]).collect()).collect(),
        order.iter().map(|&i| d[i]).collect(),
    )
    .expect("random seed is well formed")
}
