//! Leading-power bookkeeping for one cluster X-variable.
//!
//! A token is `e_α(c X^p + lower)` (Up), `e_{-α}(c X^p + lower)` (Down) or
//! `(c X^p + lower)^{H^α}` (Circle), and only the exponent `p` is tracked.
//! Products are normalized to Down* Circle* Up* by the local rewriting rules
//! below, after which the circle exponents are the leading powers of X in the
//! torus part of the Gauss decomposition.

use crate::rootdata::{CartanMatrix, PairWord};
use crate::seed::VertexId;

use super::DtError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Down,
    Circle,
    Up,
}

impl TokenKind {
    fn rank(self) -> u8 {
        match self {
            TokenKind::Down => 0,
            TokenKind::Circle => 1,
            TokenKind::Up => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// 0-based level.
    pub level: usize,
    pub exp: i64,
}

impl Token {
    fn new(kind: TokenKind, level: usize, exp: i64) -> Self {
        Token { kind, level, exp }
    }
}

#[derive(Clone, Debug)]
pub struct LeadingExponentState {
    cartan: CartanMatrix,
    pub tokens: Vec<Token>,
    /// Type A only: exponent of the scalar matrix separating the circles
    /// (coweights of `GL_n`) from the exact `SL_n` torus elements.
    pub scalar: i64,
    type_a: bool,
}

/// Rewrite cap; the calculus terminates long before this on finite type.
const REWRITE_CAP: usize = 1_000_000;

impl LeadingExponentState {
    /// Image of χ for the word, tracking the variable `x`.
    pub fn from_word(word: &PairWord, x: &VertexId) -> Self {
        let rank = word.cartan().rank();
        let hit = |a: usize, i: usize| i64::from(x == &VertexId::new(a, i));
        let mut tokens: Vec<Token> = (0..rank).map(|a| Token::new(TokenKind::Circle, a, hit(a, 0))).collect();
        let mut seen = vec![0usize; rank];
        for (k, &l) in word.letters().iter().enumerate() {
            let a = word.level(k);
            let kind = if l < 0 { TokenKind::Down } else { TokenKind::Up };
            tokens.push(Token::new(kind, a, 0));
            seen[a] += 1;
            tokens.push(Token::new(TokenKind::Circle, a, hit(a, seen[a])));
        }
        let cartan = word.cartan().clone();
        let type_a =
            CartanMatrix::from_label(&format!("A{}", rank)).is_ok_and(|a| a.entries() == cartan.entries());
        let mut s = LeadingExponentState { cartan, tokens, scalar: 0, type_a };
        s.tidy();
        s
    }

    fn coroot_circles(&mut self, a: usize, m: i64) -> Vec<Token> {
        // in GL_n the last coroot is its coweight expansion times X^{-m}
        if self.type_a && a + 1 == self.cartan.rank() {
            self.scalar -= m;
        }
        let mut out = vec![Token::new(TokenKind::Circle, a, 2 * m)];
        for b in 0..self.cartan.rank() {
            if b != a && self.cartan.c(a, b) != 0 {
                out.push(Token::new(TokenKind::Circle, b, m * self.cartan.c(a, b)));
            }
        }
        out
    }

    /// Drop trivial circles and merge neighbouring circles of one level.
    fn tidy(&mut self) {
        self.tokens.retain(|t| t.kind != TokenKind::Circle || t.exp != 0);
    }

    /// Bring the tokens to Down* Circle* Up* order.
    pub fn normalize(&mut self) -> Result<(), DtError> {
        let mut budget = REWRITE_CAP;
        loop {
            self.tidy();
            let Some(i) = (0..self.tokens.len().saturating_sub(1))
                .find(|&i| self.tokens[i].kind.rank() > self.tokens[i + 1].kind.rank())
            else {
                break;
            };
            budget = budget
                .checked_sub(1)
                .ok_or_else(|| DtError::ReplayMismatch("schematic rewriting did not terminate".into()))?;
            let (l, r) = (self.tokens[i], self.tokens[i + 1]);
            if l.level != r.level {
                self.tokens.swap(i, i + 1);
                continue;
            }
            let replacement = match (l.kind, r.kind) {
                // circle passes a down-triangle to the right
                (TokenKind::Circle, TokenKind::Down) => {
                    vec![Token::new(TokenKind::Down, l.level, r.exp - l.exp), l]
                }
                // up-triangle passes a circle
                (TokenKind::Up, TokenKind::Circle) => {
                    vec![r, Token::new(TokenKind::Up, l.level, l.exp - r.exp)]
                }
                (TokenKind::Up, TokenKind::Down) => {
                    let m = (l.exp + r.exp).max(0);
                    let mut v = vec![Token::new(TokenKind::Down, l.level, r.exp - m)];
                    v.extend(self.coroot_circles(l.level, m));
                    v.push(Token::new(TokenKind::Up, l.level, l.exp - m));
                    v
                }
                _ => unreachable!("ranks are out of order"),
            };
            self.tokens.splice(i..i + 2, replacement);
        }
        Ok(())
    }

    /// Right multiplication by the lift of `s_a`; the last token must be an
    /// up-triangle on level `a`.
    pub fn right_reflect(&mut self, a: usize) -> Result<(), DtError> {
        match self.tokens.last() {
            Some(t) if t.kind == TokenKind::Up && t.level == a => {
                let p = t.exp;
                self.tokens.pop();
                self.tokens.push(Token::new(TokenKind::Down, a, -p));
                let circles = self.coroot_circles(a, p);
                self.tokens.extend(circles);
                self.normalize()
            }
            _ => Err(DtError::InvalidPrefix(format!("no trailing e_{} to absorb", a + 1))),
        }
    }

    /// Left multiplication by the inverse lift of `s_a`; the first token must
    /// be a down-triangle on level `a`.
    pub fn left_reflect(&mut self, a: usize) -> Result<(), DtError> {
        match self.tokens.first() {
            Some(t) if t.kind == TokenKind::Down && t.level == a => {
                let p = t.exp;
                let mut head = self.coroot_circles(a, p);
                head.push(Token::new(TokenKind::Up, a, -p));
                self.tokens.splice(0..1, head);
                self.normalize()
            }
            _ => Err(DtError::InvalidPrefix(format!("no leading e_-{} to absorb", a + 1))),
        }
    }

    /// Predicted degree of each leading principal minor of the `GL_n`
    /// representative (type A only).
    pub fn gl_minor_degrees(&self) -> Option<Vec<i64>> {
        if !self.type_a {
            return None;
        }
        let p = self.middle();
        Some(
            (1..=p.len())
                .map(|beta| {
                    let circles: i64 = p.iter().enumerate().map(|(g, &e)| e * beta.min(g + 1) as i64).sum();
                    circles + self.scalar * beta as i64
                })
                .collect(),
        )
    }

    /// Summed circle exponents per level.
    pub fn middle(&self) -> Vec<i64> {
        let mut p = vec![0; self.cartan.rank()];
        for t in &self.tokens {
            if t.kind == TokenKind::Circle {
                p[t.level] += t.exp;
            }
        }
        p
    }
}

/// Exponents `p_β` of `x` in the middle circles of `ū_{<k}⁻¹ x v̄_{>k}⁻¹`,
/// where `u_prefix` u-letters are taken from the left and `v_suffix`
/// v-letters from the right.
pub fn leading_exponents(
    word: &PairWord,
    x: &VertexId,
    u_prefix: usize,
    v_suffix: usize,
) -> Result<Vec<i64>, DtError> {
    Ok(reflected_state(word, x, u_prefix, v_suffix)?.middle())
}

/// State after absorbing `u_prefix` and `v_suffix` lifted reflections.
pub fn reflected_state(
    word: &PairWord,
    x: &VertexId,
    u_prefix: usize,
    v_suffix: usize,
) -> Result<LeadingExponentState, DtError> {
    if !word.is_u_before_v() {
        return Err(DtError::InvalidPrefix("word is not u-before-v".into()));
    }
    let u = word.u().letters;
    let v = word.v().letters;
    if u_prefix > u.len() || v_suffix > v.len() {
        return Err(DtError::InvalidPrefix(format!(
            "prefix {u_prefix} / suffix {v_suffix} exceed the word lengths {} / {}",
            u.len(),
            v.len()
        )));
    }
    let mut s = LeadingExponentState::from_word(word, x);
    s.normalize()?;
    for &b in v.iter().rev().take(v_suffix) {
        s.right_reflect(b - 1)?;
    }
    for &a in u.iter().take(u_prefix) {
        s.left_reflect(a - 1)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_reads_the_variable() {
        let c = CartanMatrix::from_label("A2").unwrap();
        let w = PairWord::parse("-1 -2 -1 1 2", &c).unwrap();
        let p = leading_exponents(&w, &VertexId::new(0, 1), 0, 0).unwrap();
        assert_eq!(p, vec![1, 0]);
    }

    #[test]
    fn a1_degree_flips() {
        // x = e_-(1) X^H e_+(1); x s̄ has middle circle X^{-1}·X^{2}... leading X
        let c = CartanMatrix::from_label("A1").unwrap();
        let w = PairWord::parse("-1 1", &c).unwrap();
        let x = VertexId::new(0, 1);
        assert_eq!(leading_exponents(&w, &x, 0, 0).unwrap(), vec![1]);
        assert_eq!(leading_exponents(&w, &x, 0, 1).unwrap(), vec![1]);
        assert_eq!(leading_exponents(&w, &x, 1, 1).unwrap(), vec![1]);
    }
}
