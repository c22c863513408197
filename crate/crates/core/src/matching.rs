//! Signed perfect matchings of an even index set.
//!
//! A matching `{(a_1,b_1), …, (a_m,b_m)}` with `a_k < b_k` and
//! `a_1 < … < a_m` corresponds to the permutation `(a_1, b_1, …, a_m, b_m)`
//! of the sorted ground set; its sign is the signature of that permutation.

use crate::error::{AlgebraError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pairs: Vec<(u32, u32)>,
    sign: i8,
}

impl Matching {
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `(a_1, b_1, a_2, b_2, …)`.
    pub fn flattened(&self) -> Vec<u32> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

/// Parity of the number of inversions of a sequence of distinct values.
pub(crate) fn inversion_sign(seq: &[u32]) -> i8 {
    let mut inversions = 0usize;
    for (k, a) in seq.iter().enumerate() {
        inversions += seq[k + 1..].iter().filter(|b| *b < a).count();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn validate_ground_set(ground: &[u32]) -> Result<()> {
    if ground.is_empty() || ground.len() % 2 == 1 {
        return Err(AlgebraError::InvalidIndexSet(format!(
            "ground set must have positive even size, got {}",
            ground.len()
        )));
    }
    if ground.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AlgebraError::InvalidIndexSet(
            "ground set must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn extend(remaining: &mut Vec<u32>, current: &mut Vec<(u32, u32)>, out: &mut Vec<Matching>) {
    if remaining.is_empty() {
        let pairs = current.clone();
        let flat: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        out.push(Matching {
            sign: inversion_sign(&flat),
            pairs,
        });
        return;
    }
    let first = remaining.remove(0);
    for idx in 0..remaining.len() {
        let partner = remaining.remove(idx);
        current.push((first, partner));
        extend(remaining, current, out);
        current.pop();
        remaining.insert(idx, partner);
    }
    remaining.insert(0, first);
}

/// All `(2m-1)!!` signed matchings of a sorted ground set of size `2m`,
/// in lexicographic order of their pair lists.
pub fn enumerate_matchings(ground: &[u32]) -> Result<Vec<Matching>> {
    validate_ground_set(ground)?;
    let mut out = Vec::with_capacity(double_factorial(ground.len() as u64 - 1) as usize);
    extend(&mut ground.to_vec(), &mut Vec::new(), &mut out);
    Ok(out)
}

/// Matchings of the empty set: a single empty matching with sign `+1`.
pub(crate) fn enumerate_matchings_allow_empty(ground: &[u32]) -> Result<Vec<Matching>> {
    if ground.is_empty() {
        return Ok(vec![Matching {
            pairs: Vec::new(),
            sign: 1,
        }]);
    }
    enumerate_matchings(ground)
}

/// `k!! = k (k-2) (k-4) …`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(k: u64) -> u64 {
    (1..=k).rev().step_by(2).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ground_sets() {
        let one = enumerate_matchings(&[1, 2]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].pairs(), &[(1, 2)]);
        assert_eq!(one[0].sign(), 1);

        let two = enumerate_matchings(&[1, 2, 3, 4]).unwrap();
        let listed: Vec<_> = two.iter().map(|m| (m.pairs().to_vec(), m.sign())).collect();
        assert_eq!(
            listed,
            vec![
                (vec![(1, 2), (3, 4)], 1),
                (vec![(1, 3), (2, 4)], -1),
                (vec![(1, 4), (2, 3)], 1),
            ]
        );
    }

    #[test]
    fn counts_are_double_factorials() {
        let ground: Vec<u32> = (1..=8).collect();
        assert_eq!(enumerate_matchings(&ground).unwrap().len(), 105);
        assert_eq!(double_factorial(11), 10395);
        assert_eq!(double_factorial(0), 1);
    }

    #[test]
    fn order_is_lexicographic() {
        let ground: Vec<u32> = (1..=6).collect();
        let ms = enumerate_matchings(&ground).unwrap();
        assert!(ms.windows(2).all(|w| w[0].pairs() < w[1].pairs()));
    }

    #[test]
    fn non_contiguous_ground_set() {
        let ms = enumerate_matchings(&[3, 4, 5, 6]).unwrap();
        assert_eq!(ms[1].pairs(), &[(3, 5), (4, 6)]);
        assert_eq!(ms[1].sign(), -1);
    }

    #[test]
    fn bad_ground_sets() {
        assert!(enumerate_matchings(&[]).is_err());
        assert!(enumerate_matchings(&[1, 2, 3]).is_err());
        assert!(enumerate_matchings(&[2, 1]).is_err());
        assert!(enumerate_matchings(&[1, 1]).is_err());
        assert_eq!(enumerate_matchings_allow_empty(&[]).unwrap().len(), 1);
    }
}
