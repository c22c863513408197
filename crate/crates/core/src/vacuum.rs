//! The vacuum module: `U(ô_{2n})` modulo the left ideal generated by the
//! nonnegative modes (and, at the critical level, by `K + 2n - 2`).
//!
//! A vector is stored as a canonical sum of PBW words whose letters all have
//! negative mode, implicitly applied to the vacuum.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::{normal_order, Element, Generator, Rank, SwapOrder, Word};
use crate::error::{AlgebraError, Result};
use crate::kpoly::KPolynomial;
use crate::text::write_terms;

/// Whether `K` is specialized to the critical value `-(2n - 2)` or kept symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelPolicy {
    Critical,
    Symbolic,
}

impl LevelPolicy {
    /// Applies the policy to a coefficient map.
    fn settle(self, rank: Rank, terms: BTreeMap<Word, KPolynomial>) -> BTreeMap<Word, KPolynomial> {
        match self {
            LevelPolicy::Symbolic => terms,
            LevelPolicy::Critical => {
                let value = BigInt::from(rank.critical_level());
                terms
                    .into_iter()
                    .filter_map(|(w, c)| {
                        let c = c.substitute(&value);
                        (!c.is_zero()).then_some((w, c))
                    })
                    .collect()
            }
        }
    }
}

impl std::str::FromStr for LevelPolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "critical" => Ok(LevelPolicy::Critical),
            "symbolic" => Ok(LevelPolicy::Symbolic),
            other => Err(format!("unknown level '{other}' (expected critical or symbolic)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VacuumVector {
    element: Element,
}

impl VacuumVector {
    /// The vacuum vector itself.
    pub fn vacuum(rank: Rank) -> Self {
        Self {
            element: Element::one(rank),
        }
    }

    pub fn zero(rank: Rank) -> Self {
        Self {
            element: Element::zero(rank),
        }
    }

    /// `x |0>` for an arbitrary element `x`.
    pub fn from_element(x: &Element, policy: LevelPolicy) -> Self {
        apply(x, &Self::vacuum(x.rank()), policy).expect("same context by construction")
    }

    /// Wraps an element that already is a canonical sum of negative-mode words.
    pub fn try_from_canonical(x: Element) -> Result<Self> {
        if !x.is_canonical() {
            return Err(AlgebraError::NotAVacuumVector(format!("{x} is not PBW-sorted")));
        }
        if let Some((w, _)) = x.terms().find(|(w, _)| w.iter().any(|g| g.mode() >= 0)) {
            let mut s = String::new();
            crate::text::write_word(&mut s, w).expect("string write");
            return Err(AlgebraError::NotAVacuumVector(s));
        }
        Ok(Self { element: x })
    }

    pub(crate) fn from_map_unchecked(rank: Rank, terms: BTreeMap<Word, KPolynomial>) -> Self {
        Self {
            element: Element::from_map(rank, terms),
        }
    }

    /// Parses `<element>|0>` (the suffix is optional) and applies it to the vacuum.
    pub fn parse(rank: Rank, text: &str, policy: LevelPolicy) -> Result<Self> {
        let trimmed = text.trim();
        let body = trimmed.strip_suffix("|0>").unwrap_or(trimmed);
        let body = body.trim();
        let element = match Element::parse(rank, body) {
            Ok(x) => x,
            // `(x + y)|0>` groups a sum.
            Err(e) => match body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
                Some(inner) => Element::parse(rank, inner).map_err(|_| e)?,
                None => return Err(e),
            },
        };
        Ok(Self::from_element(&element, policy))
    }

    pub fn rank(&self) -> Rank {
        self.element.rank()
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub fn len(&self) -> usize {
        self.element.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &KPolynomial)> {
        self.element.terms()
    }

    /// Maximum over terms of the total negative mode; 0 for the vacuum and for zero.
    pub fn energy(&self) -> u64 {
        self.terms().map(|(w, _)| word_energy(w)).max().unwrap_or(0)
    }

    pub fn add(&self, other: &VacuumVector) -> Result<VacuumVector> {
        Ok(Self {
            element: self.element.add(&other.element)?,
        })
    }

    pub fn sub(&self, other: &VacuumVector) -> Result<VacuumVector> {
        Ok(Self {
            element: self.element.sub(&other.element)?,
        })
    }

    pub fn neg(&self) -> VacuumVector {
        Self {
            element: self.element.neg(),
        }
    }

    pub fn scale(&self, c: &KPolynomial) -> VacuumVector {
        Self {
            element: self.element.scale(c),
        }
    }

    /// Substitutes `K = -(2n - 2)`; the identity under the symbolic policy.
    pub fn at_level(&self, policy: LevelPolicy) -> VacuumVector {
        let rank = self.rank();
        let terms = policy.settle(rank, self.element.clone().into_map());
        Self::from_map_unchecked(rank, terms)
    }

    pub fn permute_indices(&self, perm: &[u32]) -> Result<VacuumVector> {
        // Relabelling preserves modes, so the result stays in the negative part.
        Ok(Self {
            element: self.element.permute_indices(perm)?,
        })
    }
}

impl fmt::Display for VacuumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write_terms(f, self.terms())?;
        f.write_str("|0>")
    }
}

/// Total negative mode of a word of creation operators.
pub fn word_energy(word: &[Generator]) -> u64 {
    word.iter().map(|g| (-g.mode()).max(0) as u64).sum()
}

/// `u · v` in the vacuum module.
///
/// The product is normal-ordered with every word ending in a nonnegative
/// mode discarded on sight; under the critical policy `K` is then replaced by
/// `-(2n - 2)`, which is a ring map and so may be applied last.
pub fn apply(u: &Element, v: &VacuumVector, policy: LevelPolicy) -> Result<VacuumVector> {
    let rank = u.rank();
    if rank != v.rank() {
        return Err(AlgebraError::RankMismatch {
            left: rank.n(),
            right: v.rank().n(),
        });
    }
    let mut raw = Vec::with_capacity(u.len() * v.len());
    for (wu, cu) in u.terms() {
        for (wv, cv) in v.terms() {
            let mut w = wu.clone();
            w.extend_from_slice(wv);
            raw.push((w, cu * cv));
        }
    }
    let terms = normal_order(raw, &mut SwapOrder::Leftmost, true);
    Ok(VacuumVector::from_map_unchecked(rank, policy.settle(rank, terms)))
}

/// `g · v` for a single generator.
pub fn apply_generator(g: Generator, v: &VacuumVector, policy: LevelPolicy) -> Result<VacuumVector> {
    apply(&Element::letter(v.rank(), g)?, v, policy)
}

/// Outcome for one generator in an annihilation sweep.
#[derive(Clone, Debug)]
pub struct AnnihilationCell {
    pub generator: Generator,
    pub residual: VacuumVector,
    pub elapsed: Duration,
}

impl AnnihilationCell {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct AnnihilationReport {
    pub cells: Vec<AnnihilationCell>,
}

impl AnnihilationReport {
    pub fn all_passed(&self) -> bool {
        self.cells.iter().all(AnnihilationCell::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AnnihilationCell> {
        self.cells.iter().filter(|c| !c.passed())
    }
}

/// Applies `F[i,j;r]` to `v` for every `i < j` and every `r` in `modes`.
/// Cells are listed by mode, then by index pair.
pub fn is_annihilated_by_modes(
    v: &VacuumVector,
    modes: &[i64],
    policy: LevelPolicy,
) -> Result<AnnihilationReport> {
    if modes.is_empty() {
        return Err(AlgebraError::InvalidModes("mode list is empty".into()));
    }
    if let Some(m) = modes.iter().find(|&&m| m < 0) {
        return Err(AlgebraError::InvalidModes(format!("mode {m} is negative")));
    }
    let rank = v.rank();
    let generators: Vec<Generator> = modes
        .iter()
        .flat_map(|&r| {
            rank.index_pairs()
                .into_iter()
                .map(move |(i, j)| Generator::new(i, j, r))
        })
        .collect();
    let cells = generators
        .into_par_iter()
        .map(|g| {
            let start = Instant::now();
            let residual = apply_generator(g, v, policy)?;
            Ok(AnnihilationCell {
                generator: g,
                residual,
                elapsed: start.elapsed(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnnihilationReport { cells })
}
