//! The Pfaffian `Pf F[-1]` of the generator matrix and the identities around it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::{merge_into, merge_maps, normal_order, Element, Generator, Rank, SwapOrder, Word};
use crate::error::{AlgebraError, Result};
use crate::kpoly::KPolynomial;
use crate::matching::{enumerate_matchings, enumerate_matchings_allow_empty, Matching};
use crate::vacuum::{apply_generator, LevelPolicy, VacuumVector};

/// Default cap on `n` for the `(2n)!`-term oracle.
pub const DEFAULT_ORACLE_LIMIT: u32 = 4;

/// The word `F[a_1,b_1;r] … F[a_m,b_m;r]` of a matching at a fixed mode.
/// Pairs are sorted by first index, so the word is already PBW-sorted.
pub(crate) fn matching_word(m: &Matching, mode: i64) -> Word {
    m.pairs()
        .iter()
        .map(|&(a, b)| Generator::new(a, b, mode))
        .collect()
}

/// `Σ_σ sgn σ · F[σ(1),σ(2);-1] ⋯` over the matchings of `subset`, as an
/// element of the enveloping algebra. The empty subset gives `1`.
pub fn pfaffian_element(rank: Rank, subset: &[u32]) -> Result<Element> {
    for &i in subset {
        rank.check_index(i)?;
    }
    let matchings = enumerate_matchings_allow_empty(subset)?;
    let terms = matchings
        .par_iter()
        .map(|m| {
            let mut single = BTreeMap::new();
            single.insert(matching_word(m, -1), KPolynomial::constant(m.sign()));
            single
        })
        .reduce(BTreeMap::new, merge_maps);
    let x = Element::from_map(rank, terms);
    debug_assert!(x.is_canonical());
    Ok(x)
}

/// `Pf F[-1] |0>` for the full index set `1..=2n`.
pub fn pfaffian_minus_one(rank: Rank) -> VacuumVector {
    let all: Vec<u32> = (1..=rank.dim()).collect();
    let x = pfaffian_element(rank, &all).expect("full index set is valid");
    VacuumVector::try_from_canonical(x).expect("mode -1 words are creation words")
}

/// Pfaffian of the submatrix of `F[-1]` on `subset`, applied to the vacuum.
pub fn pfaffian_submatrix(rank: Rank, subset: &[u32]) -> Result<VacuumVector> {
    if subset.len() % 2 == 1 {
        return Err(AlgebraError::InvalidIndexSet(format!(
            "subset must have even size, got {}",
            subset.len()
        )));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AlgebraError::InvalidIndexSet(
            "subset must be strictly increasing".into(),
        ));
    }
    VacuumVector::try_from_canonical(pfaffian_element(rank, subset)?)
}

/// Sign of a permutation from its cycle decomposition: `(-1)^(len - #cycles)`.
/// `perm[k]` is the image of `k` under a bijection of `0..len`.
pub fn cycle_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
        }
    }
    if (perm.len() - cycles) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Advances to the next permutation in lexicographic order; false after the last.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `Pf F[-1] = (1 / 2^n n!) Σ_{σ ∈ S_2n} sgn σ · F_{σ(1)σ(2)}[-1] ⋯ F_{σ(2n-1)σ(2n)}[-1]`.
///
/// Sums all `(2n)!` permutations with signs from cycle counting, normal-orders
/// the raw words, then divides exactly. Shares no code with the matching sum
/// beyond the algebra itself.
pub fn pfaffian_full_sum_oracle(rank: Rank, limit: u32) -> Result<VacuumVector> {
    let n = rank.n();
    if n > limit {
        return Err(AlgebraError::OracleLimit { n, limit });
    }
    let d = rank.dim() as usize;
    // One parallel job per choice of σ(1).
    let partial = (0..d)
        .into_par_iter()
        .map(|head| {
            let mut rest: Vec<usize> = (0..d).filter(|&k| k != head).collect();
            let mut raw: BTreeMap<Word, KPolynomial> = BTreeMap::new();
            loop {
                let mut perm = Vec::with_capacity(d);
                perm.push(head);
                perm.extend_from_slice(&rest);
                let mut sign = cycle_sign(&perm);
                let mut word = Vec::with_capacity(d / 2);
                for pair in perm.chunks(2) {
                    let (s, g) = Generator::normalized(pair[0] as u32 + 1, pair[1] as u32 + 1, -1)
                        .expect("permutation entries are distinct");
                    sign *= i64::from(s);
                    word.push(g);
                }
                merge_into(&mut raw, word, KPolynomial::constant(sign));
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            normal_order(raw, &mut SwapOrder::Leftmost, true)
        })
        .reduce(BTreeMap::new, merge_maps);
    let divisor: BigInt = (1..=u64::from(n)).product::<BigInt>() * (BigInt::from(1) << n as usize);
    let mut terms = BTreeMap::new();
    for (w, c) in partial {
        terms.insert(w, c.exact_div(&divisor)?);
    }
    VacuumVector::try_from_canonical(Element::from_map(rank, terms))
}

/// Both sides of `F[1,2;1] Pf F[-1] = (-K - 2n + 2) Pf F_{3..2n}[-1]` at symbolic `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualCheck {
    pub lhs: VacuumVector,
    pub rhs: VacuumVector,
}

impl ResidualCheck {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `-K - 2n + 2`.
pub fn residual_factor(rank: Rank) -> KPolynomial {
    &(-KPolynomial::k()) + &KPolynomial::constant(rank.critical_level())
}

pub fn residual_noncritical(rank: Rank) -> Result<ResidualCheck> {
    if rank.n() < 2 {
        return Err(AlgebraError::InvalidIndexSet(
            "the residual identity needs n >= 2".into(),
        ));
    }
    let pf = pfaffian_minus_one(rank);
    let lhs = apply_generator(Generator::new(1, 2, 1), &pf, LevelPolicy::Symbolic)?;
    let tail: Vec<u32> = (3..=rank.dim()).collect();
    let rhs = pfaffian_submatrix(rank, &tail)?.scale(&residual_factor(rank));
    Ok(ResidualCheck { lhs, rhs })
}

/// For a matching `σ` containing the pair `(1,2)`, counts the matchings `τ`
/// with `τ(2) > 2` whose tail product `F_{τ(2)τ(4)} F_{τ(5)τ(6)} ⋯` equals the
/// tail `F_{σ(3)σ(4)} ⋯` of `σ` up to sign, i.e. as a set of unordered pairs.
pub fn tail_coincidence_count(rank: Rank, sigma: &Matching) -> Result<usize> {
    if sigma.pairs().first() != Some(&(1, 2)) {
        return Err(AlgebraError::InvalidIndexSet(
            "sigma must pair 1 with 2".into(),
        ));
    }
    let mut sigma_tail: Vec<(u32, u32)> = sigma.pairs()[1..].to_vec();
    sigma_tail.sort_unstable();
    let all: Vec<u32> = (1..=rank.dim()).collect();
    let count = enumerate_matchings(&all)?
        .iter()
        .filter(|tau| {
            let f = tau.flattened();
            f[1] > 2
        })
        .filter(|tau| {
            let f = tau.flattened();
            // τ(3) = 2 is forced; the tail is {τ(2),τ(4)} plus the remaining pairs.
            let mut tail = vec![(f[1].min(f[3]), f[1].max(f[3]))];
            tail.extend_from_slice(&tau.pairs()[2..]);
            tail.sort_unstable();
            tail == sigma_tail
        })
        .count();
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(n: u32) -> Rank {
        Rank::new(n).unwrap()
    }

    #[test]
    fn small_pfaffians() {
        assert_eq!(pfaffian_minus_one(rank(1)).to_string(), "F[1,2;-1]|0>");
        assert_eq!(
            pfaffian_minus_one(rank(2)).to_string(),
            "F[1,2;-1]F[3,4;-1] - F[1,3;-1]F[2,4;-1] + F[1,4;-1]F[2,3;-1]|0>"
        );
        let p3 = pfaffian_minus_one(rank(3));
        assert_eq!(p3.len(), 15);
        assert!(p3.terms().all(|(_, c)| c.as_constant().is_some_and(|v| v == 1.into() || v == (-1).into())));
    }

    #[test]
    fn submatrix_pfaffians() {
        assert_eq!(pfaffian_submatrix(rank(2), &[3, 4]).unwrap().to_string(), "F[3,4;-1]|0>");
        assert_eq!(
            pfaffian_submatrix(rank(3), &[3, 4, 5, 6]).unwrap().to_string(),
            "F[3,4;-1]F[5,6;-1] - F[3,5;-1]F[4,6;-1] + F[3,6;-1]F[4,5;-1]|0>"
        );
        assert_eq!(pfaffian_submatrix(rank(2), &[]).unwrap(), VacuumVector::vacuum(rank(2)));
        assert!(pfaffian_submatrix(rank(2), &[1, 2, 3]).is_err());
        assert!(pfaffian_submatrix(rank(2), &[1, 7]).is_err());
    }

    #[test]
    fn oracle_agrees_for_small_n() {
        for n in 1..=3 {
            let r = rank(n);
            assert_eq!(pfaffian_full_sum_oracle(r, DEFAULT_ORACLE_LIMIT).unwrap(), pfaffian_minus_one(r));
        }
        assert_eq!(
            pfaffian_full_sum_oracle(rank(5), DEFAULT_ORACLE_LIMIT),
            Err(AlgebraError::OracleLimit { n: 5, limit: 4 })
        );
    }

    #[test]
    fn cycle_sign_basics() {
        assert_eq!(cycle_sign(&[0, 1, 2]), 1);
        assert_eq!(cycle_sign(&[1, 0, 2]), -1);
        assert_eq!(cycle_sign(&[1, 2, 0]), 1);
        assert_eq!(cycle_sign(&[]), 1);
    }

    #[test]
    fn next_permutation_enumerates_all() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }

    #[test]
    fn residual_small_cases() {
        let check = residual_noncritical(rank(2)).unwrap();
        assert!(check.equal());
        assert_eq!(check.lhs.to_string(), "(-K - 2)*F[3,4;-1]|0>");
        assert!(residual_noncritical(rank(1)).is_err());
    }

    #[test]
    fn tail_counts() {
        for n in 2..=3 {
            let r = rank(n);
            let all: Vec<u32> = (1..=r.dim()).collect();
            for sigma in enumerate_matchings(&all).unwrap().iter().filter(|m| m.pairs()[0] == (1, 2)) {
                assert_eq!(tail_coincidence_count(r, sigma).unwrap(), 2 * n as usize - 2);
            }
        }
        let bad = &enumerate_matchings(&[1, 2, 3, 4]).unwrap()[1];
        assert!(tail_coincidence_count(rank(2), bad).is_err());
    }
}
