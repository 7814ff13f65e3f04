//! Cartan data, Weyl group words and reduced pair words.
//!
//! Conventions: `C[a][b] = <alpha_b, H_a>`, so the simple reflection `s_a`
//! acts on root coordinates by `s_a(x) = x - (sum_b C[a][b] x_b) alpha_a`.
//! Indices are 1-based in the public word API and 0-based internally.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const ROOT_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGeneralizedCartan(String),
    #[error("Cartan matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("Cartan matrix is not of finite type")]
    NotFiniteType,
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i64, rank: usize },
    #[error("the {part}-part {letters:?} is not a reduced word")]
    NotReducedSubword { part: char, letters: Vec<usize> },
    #[error("unknown Cartan type label `{0}`")]
    UnknownLabel(String),
    #[error("cannot parse word: {0}")]
    Parse(String),
}

/// Finite-type Cartan matrix together with its minimal symmetrizer and
/// the positive roots (in simple-root coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CartanSpec", into = "CartanSpec")]
pub struct CartanMatrix {
    rank: usize,
    entries: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    type_label: Option<String>,
    positive_roots: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CartanSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    entries: Vec<Vec<i64>>,
    #[serde(default)]
    symmetrizer: Vec<i64>,
}

impl TryFrom<CartanSpec> for CartanMatrix {
    type Error = RootDataError;
    fn try_from(s: CartanSpec) -> Result<Self, Self::Error> {
        CartanMatrix::validate(&s.entries)
    }
}

impl From<CartanMatrix> for CartanSpec {
    fn from(c: CartanMatrix) -> Self {
        CartanSpec { label: c.type_label, entries: c.entries, symmetrizer: c.symmetrizer }
    }
}

fn standard_matrix(family: char, n: usize) -> Option<Vec<Vec<i64>>> {
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |c: &mut Vec<Vec<i64>>, len: usize| {
        for i in 0..len.saturating_sub(1) {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    };
    match family {
        'A' if n >= 1 => chain(&mut c, n),
        'B' if n >= 2 => {
            chain(&mut c, n);
            c[n - 1][n - 2] = -2;
        }
        'C' if n >= 2 => {
            chain(&mut c, n);
            c[n - 2][n - 1] = -2;
        }
        'D' if n >= 4 => {
            chain(&mut c, n - 1);
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
        'E' if (6..=8).contains(&n) => {
            // Bourbaki numbering: 1-3-4-5-...; 2 attached to 4.
            let edges = [(0, 2), (2, 3), (3, 4), (1, 3), (4, 5), (5, 6), (6, 7)];
            for &(a, b) in edges.iter().filter(|&&(a, b)| a < n && b < n) {
                c[a][b] = -1;
                c[b][a] = -1;
            }
        }
        'F' if n == 4 => {
            chain(&mut c, 4);
            c[1][2] = -2;
        }
        'G' if n == 2 => {
            c[0][1] = -1;
            c[1][0] = -3;
        }
        _ => return None,
    }
    Some(c)
}

fn detect_label(entries: &[Vec<i64>]) -> Option<String> {
    let n = entries.len();
    for family in ['A', 'B', 'C', 'D', 'E', 'F', 'G'] {
        if let Some(m) = standard_matrix(family, n) {
            if m == entries {
                return Some(format!("{family}{n}"));
            }
        }
    }
    None
}

fn block_diagonal(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut c = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                c[off + i][off + j] = v;
            }
        }
        off += b.len();
    }
    c
}

/// Exact positive-definiteness test by fraction-free elimination.
fn positive_definite(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut prev: i128 = 1;
    for k in 0..n {
        if a[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    true
}

impl CartanMatrix {
    /// Validate a square integer matrix as a finite-type Cartan matrix.
    pub fn validate(m: &[Vec<i64>]) -> Result<Self, RootDataError> {
        let n = m.len();
        if n == 0 {
            return Err(RootDataError::NotGeneralizedCartan("empty matrix".into()));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(RootDataError::NotGeneralizedCartan(format!(
                    "row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if row[i] != 2 {
                return Err(RootDataError::NotGeneralizedCartan(format!(
                    "diagonal entry ({0},{0}) is {1}",
                    i + 1,
                    row[i]
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if m[i][j] > 0 {
                    return Err(RootDataError::NotGeneralizedCartan(format!(
                        "positive off-diagonal entry ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                if (m[i][j] == 0) != (m[j][i] == 0) {
                    return Err(RootDataError::NotGeneralizedCartan(format!(
                        "zero pattern not symmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let symmetrizer = minimal_symmetrizer(m)?;
        let sym: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| symmetrizer[i] * m[i][j]).collect()).collect();
        if !positive_definite(&sym) {
            return Err(RootDataError::NotFiniteType);
        }
        let positive_roots = positive_roots(m)?;
        Ok(CartanMatrix {
            rank: n,
            entries: m.to_vec(),
            symmetrizer,
            type_label: detect_label(m),
            positive_roots,
        })
    }

    /// Build from a label such as `A3`, `B2`, `G2` or a product `A1xA2`.
    pub fn from_label(label: &str) -> Result<Self, RootDataError> {
        let parts: Vec<&str> =
            label.split(['x', '×', '*']).map(str::trim).filter(|s| !s.is_empty()).collect();
        if parts.is_empty() {
            return Err(RootDataError::UnknownLabel(label.into()));
        }
        let mut blocks = Vec::new();
        for p in &parts {
            let mut chars = p.chars();
            let family =
                chars.next().ok_or_else(|| RootDataError::UnknownLabel(label.into()))?.to_ascii_uppercase();
            let n: usize = chars.as_str().parse().map_err(|_| RootDataError::UnknownLabel(label.into()))?;
            blocks.push(standard_matrix(family, n).ok_or_else(|| RootDataError::UnknownLabel(label.into()))?);
        }
        let mut c = CartanMatrix::validate(&block_diagonal(&blocks))?;
        if parts.len() > 1 {
            c.type_label = Some(parts.join("x").to_ascii_uppercase());
        }
        Ok(c)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// `C[a][b]` with 0-based indices.
    pub fn c(&self, a: usize, b: usize) -> i64 {
        self.entries[a][b]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn type_label(&self) -> Option<&str> {
        self.type_label.as_deref()
    }

    /// Label if known, otherwise the matrix rows.
    pub fn describe(&self) -> String {
        match &self.type_label {
            Some(l) => l.clone(),
            None => format!("{:?}", self.entries),
        }
    }

    /// `Ĉ = diag(D) C`.
    pub fn symmetrized(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.symmetrizer[i] * self.entries[i][j]).collect())
            .collect()
    }

    /// Exact inverse of `C`.
    pub fn inverse(&self) -> Vec<Vec<Ratio<i64>>> {
        let n = self.rank;
        let mut a: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> = self.entries[i].iter().map(|&v| Ratio::from(v)).collect();
                row.extend((0..n).map(|j| Ratio::from(i64::from(i == j))));
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&r| a[r][k] != Ratio::from(0)).expect("C invertible");
            a.swap(k, p);
            let pivot = a[k][k];
            for v in a[k].iter_mut() {
                *v /= pivot;
            }
            for r in 0..n {
                if r != k && a[r][k] != Ratio::from(0) {
                    let f = a[r][k];
                    for c in 0..2 * n {
                        let t = a[k][c] * f;
                        a[r][c] -= t;
                    }
                }
            }
        }
        a.into_iter().map(|r| r[n..].to_vec()).collect()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn check_index(&self, index: i64) -> Result<usize, RootDataError> {
        if index >= 1 && (index as usize) <= self.rank {
            Ok(index as usize - 1)
        } else {
            Err(RootDataError::IndexOutOfRange { index, rank: self.rank })
        }
    }

    /// `s_a` on simple-root coordinates (0-based `a`).
    pub fn reflect_root(&self, a: usize, x: &mut [i64]) {
        let pairing: i64 = (0..self.rank).map(|b| self.entries[a][b] * x[b]).sum();
        x[a] -= pairing;
    }

    /// `s_a` on fundamental-weight coordinates (0-based `a`).
    fn reflect_weight(&self, a: usize, mu: &mut [i64]) {
        let m = mu[a];
        if m == 0 {
            return;
        }
        for (b, v) in mu.iter_mut().enumerate() {
            *v -= m * self.entries[b][a];
        }
    }

    fn rho_image(&self, word: &[usize]) -> Vec<i64> {
        let mut mu = vec![1i64; self.rank];
        for &a in word.iter().rev() {
            self.reflect_weight(a - 1, &mut mu);
        }
        mu
    }

    fn normal_form_of_weight(&self, mut mu: Vec<i64>) -> WeylWord {
        let mut letters = Vec::new();
        while let Some(a) = mu.iter().position(|&m| m < 0) {
            letters.push(a + 1);
            self.reflect_weight(a, &mut mu);
        }
        WeylWord::new(letters)
    }

    fn check_word(&self, w: &WeylWord) -> Result<(), RootDataError> {
        for &a in &w.letters {
            self.check_index(a as i64)?;
        }
        Ok(())
    }

    /// True iff each successive reflection increases length.
    pub fn is_reduced(&self, w: &WeylWord) -> Result<bool, RootDataError> {
        self.check_word(w)?;
        // w_{j-1}(alpha_{i_j}) must be a positive root for every j.
        for j in 0..w.letters.len() {
            let mut x = vec![0i64; self.rank];
            x[w.letters[j] - 1] = 1;
            for &b in w.letters[..j].iter().rev() {
                self.reflect_root(b - 1, &mut x);
            }
            if x.iter().any(|&c| c < 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Weyl group length of the element represented by `w`.
    pub fn length(&self, w: &WeylWord) -> Result<usize, RootDataError> {
        Ok(self.normal_form(w)?.len())
    }

    /// Lexicographically smallest reduced word of the element of `w`.
    pub fn normal_form(&self, w: &WeylWord) -> Result<WeylWord, RootDataError> {
        self.check_word(w)?;
        Ok(self.normal_form_of_weight(self.rho_image(&w.letters)))
    }

    pub fn same_element(&self, a: &WeylWord, b: &WeylWord) -> Result<bool, RootDataError> {
        self.check_word(a)?;
        self.check_word(b)?;
        Ok(self.rho_image(&a.letters) == self.rho_image(&b.letters))
    }

    pub fn longest_element(&self) -> WeylWord {
        self.normal_form_of_weight(vec![-1; self.rank])
    }

    /// `w0 w w0`.
    pub fn star(&self, w: &WeylWord) -> Result<WeylWord, RootDataError> {
        let w0 = self.longest_element();
        let mut letters = w0.letters.clone();
        letters.extend_from_slice(&w.letters);
        letters.extend_from_slice(&w0.letters);
        self.normal_form(&WeylWord::new(letters))
    }

    /// `w0 w^{-1}`.
    pub fn c_map(&self, w: &WeylWord) -> Result<WeylWord, RootDataError> {
        let mut letters = self.longest_element().letters;
        letters.extend(w.letters.iter().rev());
        self.normal_form(&WeylWord::new(letters))
    }

    /// The index permutation induced by `star` on simple reflections.
    pub fn star_permutation(&self) -> Result<Vec<usize>, RootDataError> {
        (1..=self.rank).map(|a| Ok(self.star(&WeylWord::new(vec![a]))?.letters[0])).collect()
    }

    /// All reduced words of the element of `w` (breadth-first over braid moves).
    pub fn reduced_words(&self, w: &WeylWord, budget: usize) -> Option<Vec<WeylWord>> {
        let start = self.normal_form(w).ok()?;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.letters.clone());
        queue.push_back(start.letters);
        while let Some(cur) = queue.pop_front() {
            for next in braid_neighbours(self, &cur) {
                if seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return None;
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<WeylWord> = seen.into_iter().map(WeylWord::new).collect();
        out.sort();
        Some(out)
    }
}

/// Order `m_ab` of `s_a s_b` for a finite-type pair.
pub fn braid_order(c: &CartanMatrix, a: usize, b: usize) -> usize {
    if a == b {
        return 1;
    }
    match c.c(a, b) * c.c(b, a) {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!("finite type"),
    }
}

/// Words obtained from `w` (1-based letters) by one braid relation.
pub fn braid_neighbours(c: &CartanMatrix, w: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len().min(i + 2) {
            let (a, b) = (w[i], w[j]);
            if a == b {
                continue;
            }
            let m = braid_order(c, a - 1, b - 1);
            if i + m > w.len() {
                continue;
            }
            let block = &w[i..i + m];
            if block.iter().enumerate().all(|(k, &x)| x == if k % 2 == 0 { a } else { b }) {
                let mut next = w.to_vec();
                for (k, x) in next[i..i + m].iter_mut().enumerate() {
                    *x = if k % 2 == 0 { b } else { a };
                }
                out.push(next);
            }
        }
    }
    out
}

fn minimal_symmetrizer(m: &[Vec<i64>]) -> Result<Vec<i64>, RootDataError> {
    let n = m.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    let mut out = vec![0i64; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        let mut component = vec![root];
        d[root] = Some(Ratio::from(1));
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for b in 0..n {
                if b == a || m[a][b] == 0 {
                    continue;
                }
                // D_a C_ab = D_b C_ba
                let want = d[a].unwrap() * Ratio::new(m[a][b], m[b][a]);
                match d[b] {
                    None => {
                        d[b] = Some(want);
                        component.push(b);
                        queue.push_back(b);
                    }
                    Some(v) if v != want => return Err(RootDataError::NotSymmetrizable),
                    _ => {}
                }
            }
        }
        let lcm = component.iter().fold(1i64, |acc, &i| acc.lcm(d[i].unwrap().denom()));
        let ints: Vec<i64> = component.iter().map(|&i| (d[i].unwrap() * lcm).to_integer()).collect();
        let g = ints.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        for (&i, v) in component.iter().zip(ints) {
            out[i] = v / g;
        }
    }
    Ok(out)
}

fn positive_roots(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, RootDataError> {
    let n = m.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for a in 0..n {
        let mut e = vec![0; n];
        e[a] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(x) = queue.pop_front() {
        for a in 0..n {
            let pairing: i64 = (0..n).map(|b| m[a][b] * x[b]).sum();
            let mut y = x.clone();
            y[a] -= pairing;
            if y.iter().all(|&v| v >= 0) && y.iter().any(|&v| v > 0) && seen.insert(y.clone()) {
                if seen.len() > ROOT_CAP {
                    return Err(RootDataError::NotFiniteType);
                }
                queue.push_back(y);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    Ok(roots)
}

/// Word in simple reflections, letters 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylWord {
    pub letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(letters: Vec<usize>) -> Self {
        WeylWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> WeylWord {
        WeylWord::new(self.letters.iter().rev().copied().collect())
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Parse `"-1 -2 1 2"` (commas and brackets tolerated) into signed letters.
pub fn parse_word(s: &str) -> Result<Vec<i64>, RootDataError> {
    let cleaned: String =
        s.chars().map(|c| if matches!(c, ',' | '(' | ')' | '[' | ']') { ' ' } else { c }).collect();
    let letters = cleaned
        .split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| RootDataError::Parse(format!("`{t}` is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    if letters.contains(&0) {
        return Err(RootDataError::Parse("letter 0 is not allowed".into()));
    }
    Ok(letters)
}

/// Reduced word of a pair `(u, v)`: negative letters spell `u`, positive spell `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWord {
    letters: Vec<i64>,
    cartan: CartanMatrix,
}

impl PairWord {
    pub fn new(letters: Vec<i64>, cartan: &CartanMatrix) -> Result<Self, RootDataError> {
        for &l in &letters {
            if l == 0 {
                return Err(RootDataError::Parse("letter 0 is not allowed".into()));
            }
            cartan.check_index(l.abs())?;
        }
        let pw = PairWord { letters, cartan: cartan.clone() };
        if !cartan.is_reduced(&pw.u())? {
            return Err(RootDataError::NotReducedSubword { part: 'u', letters: pw.u().letters });
        }
        if !cartan.is_reduced(&pw.v())? {
            return Err(RootDataError::NotReducedSubword { part: 'v', letters: pw.v().letters });
        }
        Ok(pw)
    }

    pub fn parse(s: &str, cartan: &CartanMatrix) -> Result<Self, RootDataError> {
        PairWord::new(parse_word(s)?, cartan)
    }

    /// Signed word with only the index range checked. Intermediate words of
    /// the DT construction need not be reduced.
    pub fn new_unchecked(letters: Vec<i64>, cartan: &CartanMatrix) -> Result<Self, RootDataError> {
        for &l in &letters {
            if l == 0 {
                return Err(RootDataError::Parse("letter 0 is not allowed".into()));
            }
            cartan.check_index(l.abs())?;
        }
        Ok(PairWord { letters, cartan: cartan.clone() })
    }

    /// Both sign-subsequences reduced.
    pub fn is_reduced_pair(&self) -> bool {
        self.cartan.is_reduced(&self.u()).unwrap_or(false)
            && self.cartan.is_reduced(&self.v()).unwrap_or(false)
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    /// 0-based level of letter `k`.
    pub fn level(&self, k: usize) -> usize {
        self.letters[k].unsigned_abs() as usize - 1
    }

    pub fn u(&self) -> WeylWord {
        WeylWord::new(self.letters.iter().filter(|&&l| l < 0).map(|&l| (-l) as usize).collect())
    }

    pub fn v(&self) -> WeylWord {
        WeylWord::new(self.letters.iter().filter(|&&l| l > 0).map(|&l| l as usize).collect())
    }

    /// `n_alpha` for each 0-based level.
    pub fn counts(&self) -> Vec<usize> {
        let mut n = vec![0; self.cartan.rank()];
        for k in 0..self.letters.len() {
            n[self.level(k)] += 1;
        }
        n
    }

    /// All u-letters precede all v-letters.
    pub fn is_u_before_v(&self) -> bool {
        let first_pos = self.letters.iter().position(|&l| l > 0);
        match first_pos {
            None => true,
            Some(p) => self.letters[p..].iter().all(|&l| l > 0),
        }
    }

    /// Letters reversed in order; the target of the involution `i_X`.
    pub fn reversed(&self) -> PairWord {
        PairWord { letters: self.letters.iter().rev().copied().collect(), cartan: self.cartan.clone() }
    }

    /// Same pair `(u, v)` as `other` (compared through Weyl normal forms).
    pub fn same_pair(&self, other: &PairWord) -> bool {
        self.cartan == other.cartan
            && self.cartan.same_element(&self.u(), &other.u()).unwrap_or(false)
            && self.cartan.same_element(&self.v(), &other.v()).unwrap_or(false)
    }

    pub fn with_letters(&self, letters: Vec<i64>) -> Result<PairWord, RootDataError> {
        PairWord::new(letters, &self.cartan)
    }
}

impl fmt::Display for PairWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[usize]) -> WeylWord {
        WeylWord::new(l.to_vec())
    }

    #[test]
    fn validates_standard_types() {
        let a2 = CartanMatrix::validate(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(a2.symmetrizer(), &[1, 1]);
        assert_eq!(a2.type_label(), Some("A2"));
        let g2 = CartanMatrix::validate(&[vec![2, -1], vec![-3, 2]]).unwrap();
        assert_eq!(g2.symmetrizer(), &[3, 1]);
        assert_eq!(g2.type_label(), Some("G2"));
        assert_eq!(g2.positive_roots().len(), 6);
        let b2 = CartanMatrix::from_label("B2").unwrap();
        assert_eq!(b2.symmetrizer(), &[2, 1]);
        for (label, count) in
            [("A3", 6), ("B3", 9), ("C3", 9), ("D4", 12), ("E6", 36), ("E7", 63), ("E8", 120), ("F4", 24)]
        {
            assert_eq!(CartanMatrix::from_label(label).unwrap().positive_roots().len(), count, "{label}");
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            CartanMatrix::validate(&[vec![2, -1], vec![0, 2]]),
            Err(RootDataError::NotGeneralizedCartan(_))
        ));
        assert!(matches!(
            CartanMatrix::validate(&[vec![2, -2], vec![-2, 2]]),
            Err(RootDataError::NotFiniteType)
        ));
        assert!(matches!(
            CartanMatrix::validate(&[vec![2, 1], vec![1, 2]]),
            Err(RootDataError::NotGeneralizedCartan(_))
        ));
        let cyc = vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert_eq!(CartanMatrix::validate(&cyc), Err(RootDataError::NotSymmetrizable));
    }

    #[test]
    fn reduced_words_and_longest() {
        let a2 = CartanMatrix::from_label("A2").unwrap();
        assert!(a2.is_reduced(&w(&[1, 2, 1])).unwrap());
        assert!(!a2.is_reduced(&w(&[1, 1])).unwrap());
        assert_eq!(a2.longest_element(), w(&[1, 2, 1]));
        let a1 = CartanMatrix::from_label("A1").unwrap();
        assert_eq!(a1.longest_element(), w(&[1]));
        let g2 = CartanMatrix::from_label("G2").unwrap();
        let w0 = w(&[1, 2, 1, 2, 1, 2]);
        assert!(g2.is_reduced(&w0).unwrap());
        assert!(g2.same_element(&w0, &g2.longest_element()).unwrap());
        assert_eq!(g2.longest_element().len(), 6);
        assert!(matches!(a2.is_reduced(&w(&[3])), Err(RootDataError::IndexOutOfRange { .. })));
    }

    #[test]
    fn star_and_c_map() {
        let a2 = CartanMatrix::from_label("A2").unwrap();
        assert_eq!(a2.star(&w(&[1])).unwrap(), w(&[2]));
        assert_eq!(a2.star_permutation().unwrap(), vec![2, 1]);
        let a1 = CartanMatrix::from_label("A1").unwrap();
        assert_eq!(a1.star(&w(&[1])).unwrap(), w(&[1]));
        let b2 = CartanMatrix::from_label("B2").unwrap();
        assert_eq!(b2.star_permutation().unwrap(), vec![1, 2]);
        // w0 = w^c w
        let x = w(&[1, 2]);
        let mut prod = a2.c_map(&x).unwrap().letters;
        prod.extend(&x.letters);
        assert!(a2.same_element(&WeylWord::new(prod), &a2.longest_element()).unwrap());
    }

    #[test]
    fn pair_words() {
        let a2 = CartanMatrix::from_label("A2").unwrap();
        let p = PairWord::parse("-1 -2 1 2", &a2).unwrap();
        assert_eq!(p.u(), w(&[1, 2]));
        assert_eq!(p.v(), w(&[1, 2]));
        assert_eq!(p.counts(), vec![2, 2]);
        assert!(p.is_u_before_v());
        let err = PairWord::parse("1 1 -2", &a2).unwrap_err();
        assert_eq!(err, RootDataError::NotReducedSubword { part: 'v', letters: vec![1, 1] });
        assert!(PairWord::parse("1 x", &a2).is_err());
        assert!(PairWord::parse("0", &a2).is_err());
    }

    #[test]
    fn reduced_word_enumeration() {
        let a3 = CartanMatrix::from_label("A3").unwrap();
        let words = a3.reduced_words(&a3.longest_element(), 1000).unwrap();
        assert_eq!(words.len(), 16);
        let g2 = CartanMatrix::from_label("G2").unwrap();
        assert_eq!(g2.reduced_words(&g2.longest_element(), 100).unwrap().len(), 2);
    }
}
