//! Generators `F[i,j;r]` of the affine orthogonal algebra, their commutation
//! relation, and the enveloping algebra with its PBW normal form.
//!
//! Generators are totally ordered by `(r, i, j)`, so a PBW-sorted word lists
//! its most negative modes first and its nonnegative modes last. The central
//! element `K` never appears as a letter; it lives in the coefficient ring
//! [`KPolynomial`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{AlgebraError, Result};
use crate::kpoly::KPolynomial;

/// Largest supported `n`. Indices run over `1..=2n`.
pub const MAX_RANK: u32 = 8;

/// The context `n` of the algebra `o_{2n}`, validated once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(u32);

impl Rank {
    pub fn new(n: u32) -> Result<Self> {
        match n {
            0 => Err(AlgebraError::ZeroRank),
            n if n > MAX_RANK => Err(AlgebraError::RankTooLarge { n, max: MAX_RANK }),
            n => Ok(Self(n)),
        }
    }

    pub fn n(self) -> u32 {
        self.0
    }

    /// Size `2n` of the matrices.
    pub fn dim(self) -> u32 {
        2 * self.0
    }

    /// The critical value `K = -(2n - 2)`, minus the dual Coxeter number of `D_n`.
    pub fn critical_level(self) -> i64 {
        -(2 * i64::from(self.0) - 2)
    }

    pub fn check_index(self, index: u32) -> Result<()> {
        if index == 0 || index > self.dim() {
            return Err(AlgebraError::IndexOutOfRange {
                index,
                max: self.dim(),
            });
        }
        Ok(())
    }

    /// All normalized pairs `(i, j)` with `1 <= i < j <= 2n`, lexicographically.
    pub fn index_pairs(self) -> Vec<(u32, u32)> {
        let d = self.dim();
        (1..=d)
            .flat_map(|i| (i + 1..=d).map(move |j| (i, j)))
            .collect()
    }

    pub(crate) fn same_as(self, other: Rank) -> Result<()> {
        if self != other {
            return Err(AlgebraError::RankMismatch {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

/// A basis element `F[i,j;r] = (E_ij - E_ji) t^r` with `i < j`.
///
/// Field order gives the derived ordering: by mode, then row, then column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    r: i64,
    i: u32,
    j: u32,
}

impl Generator {
    /// Panics unless `1 <= i < j`. Use [`Generator::normalized`] for arbitrary index pairs.
    pub fn new(i: u32, j: u32, r: i64) -> Self {
        assert!(
            0 < i && i < j,
            "generator indices must satisfy 1 <= i < j, got ({i}, {j})"
        );
        Self { r, i, j }
    }

    /// Skew normalization: `F_ji = -F_ij`, `F_ii = 0`.
    pub fn normalized(i: u32, j: u32, r: i64) -> Option<(i8, Self)> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => Some((1, Self { r, i, j })),
            Greater => Some((-1, Self { r, i: j, j: i })),
            Equal => None,
        }
    }

    pub fn i(self) -> u32 {
        self.i
    }

    pub fn j(self) -> u32 {
        self.j
    }

    pub fn mode(self) -> i64 {
        self.r
    }

    pub fn with_mode(self, r: i64) -> Self {
        Self { r, ..self }
    }

    /// True when the two letters share no index, in which case their bracket vanishes.
    pub fn is_disjoint(self, other: Generator) -> bool {
        self.i != other.i && self.i != other.j && self.j != other.i && self.j != other.j
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F[{},{};{}]", self.i, self.j, self.r)
    }
}

/// A word in the generators, read left to right.
pub type Word = Vec<Generator>;

/// One summand of a bracket: a coefficient times a letter, or a pure scalar.
pub(crate) type BracketTerm = (KPolynomial, Option<Generator>);

fn delta(a: u32, b: u32) -> bool {
    a == b
}

/// Structure terms of `[F[i,j;r], F[k,l;s]]`:
///
/// `d_kj F_il - d_il F_kj - d_ki F_jl + d_jl F_ki` at mode `r+s`,
/// plus `r d_{r,-s} (d_kj d_il - d_ki d_jl) K`.
pub(crate) fn bracket_terms(a: Generator, b: Generator) -> Vec<BracketTerm> {
    let (i, j, r) = (a.i, a.j, a.r);
    let (k, l, s) = (b.i, b.j, b.r);
    let mut acc: BTreeMap<Generator, i64> = BTreeMap::new();
    let mut push = |sign: i64, p: u32, q: u32| {
        if let Some((skew, g)) = Generator::normalized(p, q, r + s) {
            *acc.entry(g).or_default() += sign * i64::from(skew);
        }
    };
    if delta(k, j) {
        push(1, i, l);
    }
    if delta(i, l) {
        push(-1, k, j);
    }
    if delta(k, i) {
        push(-1, j, l);
    }
    if delta(j, l) {
        push(1, k, i);
    }
    let mut out: Vec<BracketTerm> = acc
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(g, c)| (KPolynomial::constant(c), Some(g)))
        .collect();
    if r == -s {
        let pairing =
            i64::from(delta(k, j) && delta(i, l)) - i64::from(delta(k, i) && delta(j, l));
        if pairing != 0 && r != 0 {
            out.push((KPolynomial::monomial(r * pairing, 1), None));
        }
    }
    out
}

/// How the rewriting loop picks which adjacent out-of-order pair to swap.
/// Every choice reaches the same normal form; the variants exist so that this
/// can be tested.
#[derive(Clone, Debug)]
pub enum SwapOrder {
    Leftmost,
    Rightmost,
    Random(ChaCha8Rng),
}

impl SwapOrder {
    fn pick(&mut self, word: &[Generator]) -> Option<usize> {
        let mut inversions = (0..word.len().saturating_sub(1)).filter(|&k| word[k] > word[k + 1]);
        match self {
            SwapOrder::Leftmost => inversions.next(),
            SwapOrder::Rightmost => inversions.next_back(),
            SwapOrder::Random(rng) => {
                let all: Vec<usize> = inversions.collect();
                if all.is_empty() {
                    None
                } else {
                    Some(all[rng.gen_range(0..all.len())])
                }
            }
        }
    }
}

/// A word ending in a letter of nonnegative mode annihilates the vacuum.
pub(crate) fn kills_vacuum(word: &[Generator]) -> bool {
    word.last().is_some_and(|g| g.r >= 0)
}

/// Rewrites a sum of arbitrary words into PBW normal form.
///
/// Each step takes an adjacent pair `a b` with `a > b` and replaces it by
/// `b a + [a, b]`. Swaps reduce the inversion count at fixed length and
/// bracket terms are strictly shorter, so the loop terminates. With
/// `vacuum` set, any word ending in a nonnegative mode is dropped as soon as
/// it appears.
pub(crate) fn normal_order(
    terms: impl IntoIterator<Item = (Word, KPolynomial)>,
    order: &mut SwapOrder,
    vacuum: bool,
) -> BTreeMap<Word, KPolynomial> {
    // Longest words first, so swaps of equal length get merged before their
    // shorter bracket descendants are processed.
    let mut pending: BTreeMap<(usize, Word), KPolynomial> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<(usize, Word), KPolynomial>, word: Word, c: KPolynomial| {
        if c.is_zero() || (vacuum && kills_vacuum(&word)) {
            return;
        }
        let key = (word.len(), word);
        match pending.get_mut(&key) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    pending.remove(&key);
                }
            }
            None => {
                pending.insert(key, c);
            }
        }
    };
    for (word, c) in terms {
        push(&mut pending, word, c);
    }
    let mut done: BTreeMap<Word, KPolynomial> = BTreeMap::new();
    while let Some(((_, word), coeff)) = pending.pop_last() {
        match order.pick(&word) {
            None => merge_into(&mut done, word, coeff),
            Some(k) => {
                let (a, b) = (word[k], word[k + 1]);
                let mut swapped = word.clone();
                swapped.swap(k, k + 1);
                push(&mut pending, swapped, coeff.clone());
                for (c, letter) in bracket_terms(a, b) {
                    let mut shorter = Vec::with_capacity(word.len() - 1);
                    shorter.extend_from_slice(&word[..k]);
                    shorter.extend(letter);
                    shorter.extend_from_slice(&word[k + 2..]);
                    push(&mut pending, shorter, &coeff * &c);
                }
            }
        }
    }
    done
}

pub(crate) fn merge_into(map: &mut BTreeMap<Word, KPolynomial>, word: Word, coeff: KPolynomial) {
    if coeff.is_zero() {
        return;
    }
    match map.get_mut(&word) {
        Some(existing) => {
            *existing += &coeff;
            if existing.is_zero() {
                map.remove(&word);
            }
        }
        None => {
            map.insert(word, coeff);
        }
    }
}

/// Adds two term maps; the result does not depend on which side is larger.
pub(crate) fn merge_maps(
    mut a: BTreeMap<Word, KPolynomial>,
    b: BTreeMap<Word, KPolynomial>,
) -> BTreeMap<Word, KPolynomial> {
    if a.len() < b.len() {
        return merge_maps(b, a);
    }
    for (w, c) in b {
        merge_into(&mut a, w, c);
    }
    a
}

/// A finite sum of coefficient-times-word terms in `U(ô_{2n})`.
///
/// Equality is structural; it coincides with equality in the algebra when
/// both sides are canonical (see [`Element::canonicalize`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    rank: Rank,
    terms: BTreeMap<Word, KPolynomial>,
}

impl Element {
    pub fn zero(rank: Rank) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: Rank) -> Self {
        Self::scalar(rank, KPolynomial::one())
    }

    pub fn scalar(rank: Rank, c: KPolynomial) -> Self {
        Self::from_word(rank, c, Vec::new())
    }

    /// `F_ij[r]` with skew normalization; the zero element when `i == j`.
    pub fn generator(rank: Rank, i: u32, j: u32, r: i64) -> Result<Self> {
        rank.check_index(i)?;
        rank.check_index(j)?;
        Ok(match Generator::normalized(i, j, r) {
            Some((sign, g)) => Self::from_word(rank, KPolynomial::constant(sign), vec![g]),
            None => Self::zero(rank),
        })
    }

    pub fn letter(rank: Rank, g: Generator) -> Result<Self> {
        rank.check_index(g.j)?;
        Ok(Self::from_word(rank, KPolynomial::one(), vec![g]))
    }

    /// A single term, stored as given (no reordering).
    pub fn from_word(rank: Rank, c: KPolynomial, word: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        Self { rank, terms }
    }

    pub(crate) fn from_map(rank: Rank, terms: BTreeMap<Word, KPolynomial>) -> Self {
        Self { rank, terms }
    }

    pub(crate) fn into_map(self) -> BTreeMap<Word, KPolynomial> {
        self.terms
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &KPolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[Generator]) -> KPolynomial {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    /// Longest word length; 0 for scalars and for zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_canonical(&self) -> bool {
        self.terms
            .keys()
            .all(|w| w.windows(2).all(|p| p[0] <= p[1]))
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.rank.same_as(other.rank)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            merge_into(&mut terms, w.clone(), c.clone());
        }
        Ok(Self::from_map(self.rank, terms))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.map_coefficients(|c| -c)
    }

    pub fn scale(&self, c: &KPolynomial) -> Element {
        self.map_coefficients(|x| x * c)
    }

    /// Applies a ring map to every coefficient, dropping terms that become zero.
    pub fn map_coefficients(&self, mut f: impl FnMut(&KPolynomial) -> KPolynomial) -> Element {
        let terms = self
            .terms
            .iter()
            .filter_map(|(w, c)| {
                let c = f(c);
                (!c.is_zero()).then(|| (w.clone(), c))
            })
            .collect();
        Self::from_map(self.rank, terms)
    }

    /// Substitutes a value for `K` in every coefficient.
    pub fn substitute_k(&self, value: i64) -> Element {
        let value = BigInt::from(value);
        self.map_coefficients(|c| c.substitute(&value))
    }

    /// Word concatenation without reordering.
    pub fn concat(&self, other: &Element) -> Result<Element> {
        self.rank.same_as(other.rank)?;
        let mut terms = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                merge_into(&mut terms, w, ca * cb);
            }
        }
        Ok(Self::from_map(self.rank, terms))
    }

    /// Product in the enveloping algebra, in canonical form.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        Ok(self.concat(other)?.canonicalize())
    }

    /// `xy - yx`, canonical.
    pub fn commutator(&self, other: &Element) -> Result<Element> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// The PBW normal form, rewriting the leftmost inversion first.
    pub fn canonicalize(&self) -> Element {
        self.canonicalize_with(&mut SwapOrder::Leftmost)
    }

    pub fn canonicalize_with(&self, order: &mut SwapOrder) -> Element {
        if self.is_canonical() {
            return self.clone();
        }
        let terms = normal_order(self.terms.clone(), order, false);
        Self::from_map(self.rank, terms)
    }

    /// Relabels every letter `F_ij[r] -> F_{pi(i) pi(j)}[r]`, keeping `K` fixed,
    /// and returns the canonical form. `perm[k - 1]` is the image of `k`.
    pub fn permute_indices(&self, perm: &[u32]) -> Result<Element> {
        validate_permutation(self.rank, perm)?;
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut sign = 1i64;
            let mut out = Vec::with_capacity(w.len());
            for g in w {
                let (s, h) = Generator::normalized(perm[g.i as usize - 1], perm[g.j as usize - 1], g.r)
                    .expect("a bijection keeps distinct indices distinct");
                sign *= i64::from(s);
                out.push(h);
            }
            merge_into(&mut terms, out, c.scale(&BigInt::from(sign)));
        }
        Ok(Self::from_map(self.rank, terms).canonicalize())
    }
}

/// Checks that `perm` lists a bijection of `1..=2n`.
pub fn validate_permutation(rank: Rank, perm: &[u32]) -> Result<()> {
    let size = rank.dim();
    let fail = |reason: String| AlgebraError::NotAPermutation { size, reason };
    if perm.len() != size as usize {
        return Err(fail(format!("expected {size} images, got {}", perm.len())));
    }
    let mut seen = vec![false; size as usize + 1];
    for &p in perm {
        if p == 0 || p > size {
            return Err(fail(format!("image {p} out of range")));
        }
        if std::mem::replace(&mut seen[p as usize], true) {
            return Err(fail(format!("image {p} repeated")));
        }
    }
    Ok(())
}

/// `[a, b]` for two normalized generators, as a canonical element of degree at most 1.
pub fn bracket(rank: Rank, a: Generator, b: Generator) -> Result<Element> {
    rank.check_index(a.j)?;
    rank.check_index(b.j)?;
    let mut terms = BTreeMap::new();
    for (c, letter) in bracket_terms(a, b) {
        merge_into(&mut terms, letter.into_iter().collect(), c);
    }
    Ok(Element::from_map(rank, terms))
}

/// The Lie bracket extended bilinearly to elements of degree at most 1.
/// Scalars are central, so only letter-letter pairs contribute.
pub fn lie_bracket(x: &Element, y: &Element) -> Result<Element> {
    x.rank.same_as(y.rank)?;
    for e in [x, y] {
        if e.degree() > 1 {
            return Err(AlgebraError::DegreeTooHigh(e.degree()));
        }
    }
    let mut terms = BTreeMap::new();
    for (wa, ca) in x.terms.iter().filter(|(w, _)| w.len() == 1) {
        for (wb, cb) in y.terms.iter().filter(|(w, _)| w.len() == 1) {
            let c = ca * cb;
            for (bc, letter) in bracket_terms(wa[0], wb[0]) {
                merge_into(&mut terms, letter.into_iter().collect(), &c * &bc);
            }
        }
    }
    Ok(Element::from_map(x.rank, terms))
}
