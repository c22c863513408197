//! Coefficients of the Pfaffian of the generating-series matrix.
//!
//! With `F_ij(z) = Σ_r F_ij[r] z^{-r-1}`, a product of `n` series picks up
//! `z^{-Σr-n}`, so the coefficient `S_p` of `z^{-p-1}` collects the mode
//! compositions with `Σ r = p + 1 - n`. `S⁺_p` keeps only negative modes and
//! is a finite vector; `S_p` is an operator, evaluated on a vector `v` of
//! energy `e` by discarding every term with a mode above `e`. Factors of one
//! matching have pairwise disjoint indices, commute exactly, and any factor
//! with mode `> e` can be moved to the right where it kills `v`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::algebra::{bracket, merge_maps, merge_into, Element, Generator, Rank, Word};
use crate::error::{AlgebraError, Result};
use crate::kpoly::KPolynomial;
use crate::matching::{enumerate_matchings, Matching};
use crate::vacuum::{apply, apply_generator, is_annihilated_by_modes, AnnihilationReport, LevelPolicy, VacuumVector};

/// Mode tuple for the `n` factors of one matching, summing to `p + 1 - n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModeComposition {
    pub modes: Vec<i64>,
}

/// The mode total `p + 1 - n` forced by the coefficient index `p`.
pub fn mode_total(rank: Rank, p: i64) -> i64 {
    p + 1 - i64::from(rank.n())
}

/// All tuples of `parts` integers in `[lo, hi]` summing to `total`, in
/// lexicographic order.
pub fn compositions(total: i64, parts: usize, lo: i64, hi: i64) -> Vec<ModeComposition> {
    fn go(total: i64, parts: usize, lo: i64, hi: i64, prefix: &mut Vec<i64>, out: &mut Vec<ModeComposition>) {
        if parts == 0 {
            if total == 0 {
                out.push(ModeComposition { modes: prefix.clone() });
            }
            return;
        }
        let rest = parts as i64 - 1;
        // Remaining parts must be able to absorb what is left.
        let first_lo = lo.max(total - rest * hi);
        let first_hi = hi.min(total - rest * lo);
        for m in first_lo..=first_hi {
            prefix.push(m);
            go(total - m, parts - 1, lo, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi {
        go(total, parts, lo, hi, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

fn matching_term(rank: Rank, m: &Matching, modes: &[i64]) -> Result<Word> {
    let word: Word = m
        .pairs()
        .iter()
        .zip(modes)
        .map(|(&(a, b), &r)| Generator::new(a, b, r))
        .collect();
    for (x, &a) in word.iter().enumerate() {
        for &b in &word[x + 1..] {
            if !bracket(rank, a, b)?.is_zero() {
                panic!("factors {a} and {b} of one matching do not commute");
            }
        }
    }
    Ok(word)
}

/// `Σ_σ sgn σ Σ_{modes} F[σ1,σ2;m_1] ⋯` over the given compositions, canonical.
fn matching_sum(rank: Rank, comps: &[ModeComposition]) -> Result<Element> {
    let all: Vec<u32> = (1..=rank.dim()).collect();
    let matchings = enumerate_matchings(&all)?;
    let terms = matchings
        .par_iter()
        .map(|m| {
            let mut local = BTreeMap::new();
            let sign = KPolynomial::constant(m.sign());
            for c in comps {
                let mut w = matching_term(rank, m, &c.modes)?;
                // Commuting letters: sorting is the normal form.
                w.sort_unstable();
                merge_into(&mut local, w, sign.clone());
            }
            Ok(local)
        })
        .try_reduce(BTreeMap::new, |a, b| Ok(merge_maps(a, b)))?;
    Ok(Element::from_map(rank, terms))
}

/// `S⁺_p`, the coefficient of `z^{-p-1}` in `Pf F(z)₊`, as a vacuum vector.
pub fn sugawara_plus_coefficient(rank: Rank, p: i64) -> Result<VacuumVector> {
    if p >= 0 {
        return Err(AlgebraError::NoPlusCoefficient { p });
    }
    let n = i64::from(rank.n());
    let total = mode_total(rank, p);
    let comps = compositions(total, n as usize, total + n - 1, -1);
    VacuumVector::try_from_canonical(matching_sum(rank, &comps)?)
}

/// `S_p v` at the critical level, truncating modes at the energy of `v`.
pub fn apply_sugawara_full(rank: Rank, p: i64, v: &VacuumVector) -> Result<VacuumVector> {
    let bound = i64::try_from(v.energy()).expect("energy fits in i64");
    apply_sugawara_with_bound(rank, p, v, bound)
}

/// `S_p v` keeping every composition whose modes are all `<= bound`.
/// Exact whenever `bound >= energy(v)`.
pub fn apply_sugawara_with_bound(rank: Rank, p: i64, v: &VacuumVector, bound: i64) -> Result<VacuumVector> {
    if rank != v.rank() {
        return Err(AlgebraError::RankMismatch {
            left: rank.n(),
            right: v.rank().n(),
        });
    }
    let n = i64::from(rank.n());
    let total = mode_total(rank, p);
    let comps = compositions(total, n as usize, total - (n - 1) * bound, bound);
    if comps.is_empty() {
        return Ok(VacuumVector::zero(rank));
    }
    let operator = matching_sum(rank, &comps)?;
    apply(&operator, v, LevelPolicy::Critical)
}

/// Default test vectors: `|0>`, `F[1,2;-1]|0>`, `F[1,3;-1]F[2,4;-1]|0>`,
/// keeping those whose indices fit in `1..=2n`.
pub fn default_test_vectors(rank: Rank) -> Vec<VacuumVector> {
    let mut out = vec![VacuumVector::vacuum(rank)];
    let words: [&[(u32, u32)]; 2] = [&[(1, 2)], &[(1, 3), (2, 4)]];
    for w in words {
        if w.iter().all(|&(_, j)| j <= rank.dim()) {
            let word = w.iter().map(|&(i, j)| Generator::new(i, j, -1)).collect();
            let x = Element::from_word(rank, KPolynomial::one(), word);
            out.push(VacuumVector::try_from_canonical(x).expect("sorted creation word"));
        }
    }
    out
}

/// Every `F[i,j;m]` with `i < j` and `m` in `modes`, by mode then index pair.
pub fn generator_grid(rank: Rank, modes: &[i64]) -> Vec<Generator> {
    modes
        .iter()
        .flat_map(|&m| {
            rank.index_pairs()
                .into_iter()
                .map(move |(i, j)| Generator::new(i, j, m))
        })
        .collect()
}

/// `S_p (X v) - X (S_p v)` for one grid cell.
#[derive(Clone, Debug)]
pub struct CommutationCell {
    pub p: i64,
    pub generator: Generator,
    pub vector: usize,
    pub residual: VacuumVector,
    pub elapsed: Duration,
}

impl CommutationCell {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn commutator_on(rank: Rank, p: i64, x: Generator, v: &VacuumVector) -> Result<VacuumVector> {
    let xv = apply_generator(x, v, LevelPolicy::Critical)?;
    let lhs = apply_sugawara_full(rank, p, &xv)?;
    let rhs = apply_generator(x, &apply_sugawara_full(rank, p, v)?, LevelPolicy::Critical)?;
    lhs.sub(&rhs)
}

/// Runs the `(p, X, v)` grid in parallel; cells come back in `p`, then `X`,
/// then vector order.
pub fn check_sugawara_commutation(
    rank: Rank,
    p_list: &[i64],
    generators: &[Generator],
    vectors: &[VacuumVector],
) -> Result<Vec<CommutationCell>> {
    let mut grid = Vec::new();
    for &p in p_list {
        for &g in generators {
            rank.check_index(g.j())?;
            for idx in 0..vectors.len() {
                grid.push((p, g, idx));
            }
        }
    }
    grid.into_par_iter()
        .map(|(p, g, idx)| {
            let start = Instant::now();
            let residual = commutator_on(rank, p, g, &vectors[idx])?;
            Ok(CommutationCell {
                p,
                generator: g,
                vector: idx,
                residual,
                elapsed: start.elapsed(),
            })
        })
        .collect()
}

/// Annihilation sweep of `S⁺_p` for every negative `p` in `p_list`.
/// Nonnegative entries have no `S⁺_p` and are skipped.
pub fn check_plus_center(rank: Rank, p_list: &[i64], modes: &[i64]) -> Result<Vec<(i64, AnnihilationReport)>> {
    p_list
        .iter()
        .filter(|&&p| p < 0)
        .map(|&p| {
            let s = sugawara_plus_coefficient(rank, p)?;
            Ok((p, is_annihilated_by_modes(&s, modes, LevelPolicy::Critical)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::pfaffian_minus_one;

    fn rank(n: u32) -> Rank {
        Rank::new(n).unwrap()
    }

    #[test]
    fn composition_enumeration() {
        let c = compositions(-3, 2, -2, -1);
        let modes: Vec<_> = c.into_iter().map(|c| c.modes).collect();
        assert_eq!(modes, vec![vec![-2, -1], vec![-1, -2]]);
        assert_eq!(compositions(-2, 2, -1, -1).len(), 1);
        assert!(compositions(0, 2, -1, -1).is_empty());
        assert!(compositions(0, 2, 1, 0).is_empty());
        // (0,-1) and (-1,0) only.
        assert_eq!(compositions(-1, 2, -1, 0).len(), 2);
    }

    #[test]
    fn plus_coefficients() {
        for n in 1..=3 {
            let r = rank(n);
            assert_eq!(sugawara_plus_coefficient(r, -1).unwrap(), pfaffian_minus_one(r));
        }
        let s = sugawara_plus_coefficient(rank(2), -2).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(
            s.to_string(),
            "F[1,2;-2]F[3,4;-1] - F[1,3;-2]F[2,4;-1] + F[1,4;-2]F[2,3;-1] \
             + F[2,3;-2]F[1,4;-1] - F[2,4;-2]F[1,3;-1] + F[3,4;-2]F[1,2;-1]|0>"
        );
        assert_eq!(
            sugawara_plus_coefficient(rank(2), 0),
            Err(AlgebraError::NoPlusCoefficient { p: 0 })
        );
    }

    #[test]
    fn full_action_on_vacuum() {
        let r = rank(2);
        let vac = VacuumVector::vacuum(r);
        assert!(apply_sugawara_full(r, 0, &vac).unwrap().is_zero());
        assert_eq!(apply_sugawara_full(r, -1, &vac).unwrap(), pfaffian_minus_one(r));
    }

    #[test]
    fn commutator_witness() {
        let r = rank(2);
        let v = default_test_vectors(r);
        let x = Generator::new(1, 2, -1);
        assert!(commutator_on(r, -1, x, &v[0]).unwrap().is_zero());
        assert!(commutator_on(r, -1, Generator::new(1, 2, 0), &v[0]).unwrap().is_zero());
        assert!(commutator_on(r, -1, Generator::new(3, 4, 1), &v[1]).unwrap().is_zero());
        assert!(commutator_on(r, 0, Generator::new(1, 3, -1), &v[0]).unwrap().is_zero());
    }

    #[test]
    fn default_vectors_fit_rank() {
        assert_eq!(default_test_vectors(rank(1)).len(), 2);
        assert_eq!(default_test_vectors(rank(2)).len(), 3);
    }
}
