//! Seeded property suites run by `ssv selftest`.
//!
//! Each suite draws its cases from a ChaCha stream derived from the seed and
//! the suite name, so a suite's cases do not depend on which other suites run.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{bracket, lie_bracket, Element, Generator, Rank, SwapOrder};
use crate::error::Result;
use crate::kpoly::KPolynomial;
use crate::matching::enumerate_matchings;
use crate::pfaffian::{cycle_sign, pfaffian_minus_one};

/// Result of one property suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// First counterexample, rendered as text.
    pub failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub const SUITES: [&str; 6] = [
    "antisymmetry",
    "jacobi",
    "confluence",
    "matching-signs",
    "proof-step-cancellation",
    "automorphism-sign",
];

fn suite_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let salt = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

/// A uniformly random normalized letter with mode in `modes`.
pub fn random_generator(rng: &mut impl Rng, rank: Rank, modes: std::ops::RangeInclusive<i64>) -> Generator {
    let pairs = rank.index_pairs();
    let (i, j) = pairs[rng.gen_range(0..pairs.len())];
    Generator::new(i, j, rng.gen_range(modes))
}

/// A random word of up to `max_len` letters with a small integer coefficient.
pub fn random_word_element(rng: &mut impl Rng, rank: Rank, max_len: usize) -> Element {
    let len = rng.gen_range(0..=max_len);
    let word = (0..len).map(|_| random_generator(rng, rank, -2..=2)).collect();
    let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Element::from_word(rank, KPolynomial::constant(c), word)
}

fn outcome(name: &'static str, cases: usize, failure: Option<String>) -> SuiteOutcome {
    SuiteOutcome { name, cases, failure }
}

pub fn antisymmetry(rank: Rank, seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut rng = suite_rng(seed, "antisymmetry");
    for _ in 0..cases {
        let a = random_generator(&mut rng, rank, -2..=2);
        let b = random_generator(&mut rng, rank, -2..=2);
        let sum = bracket(rank, a, b)?.add(&bracket(rank, b, a)?)?;
        if !sum.is_zero() {
            return Ok(outcome("antisymmetry", cases, Some(format!("[{a},{b}] + [{b},{a}] = {sum}"))));
        }
    }
    Ok(outcome("antisymmetry", cases, None))
}

pub fn jacobi(rank: Rank, seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut rng = suite_rng(seed, "jacobi");
    for _ in 0..cases {
        let [a, b, c] = [0; 3].map(|_| random_generator(&mut rng, rank, -2..=2));
        let [x, y, z] = [a, b, c].map(|g| Element::letter(rank, g).expect("index in range"));
        let total = lie_bracket(&x, &lie_bracket(&y, &z)?)?
            .add(&lie_bracket(&y, &lie_bracket(&z, &x)?)?)?
            .add(&lie_bracket(&z, &lie_bracket(&x, &y)?)?)?;
        if !total.is_zero() {
            return Ok(outcome("jacobi", cases, Some(format!("({a}, {b}, {c}) sums to {total}"))));
        }
    }
    Ok(outcome("jacobi", cases, None))
}

/// Associativity of the canonical product and independence of the swap order,
/// on words of at most 4 letters in total.
pub fn confluence(rank: Rank, seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut rng = suite_rng(seed, "confluence");
    for _ in 0..cases {
        let a = random_word_element(&mut rng, rank, 2);
        let b = random_word_element(&mut rng, rank, 1);
        let c = random_word_element(&mut rng, rank, 1);
        let left = a.multiply(&b)?.multiply(&c)?;
        let right = a.multiply(&b.multiply(&c)?)?;
        if left != right {
            return Ok(outcome("confluence", cases, Some(format!("({a})({b})({c}): {left} vs {right}"))));
        }
        let raw = a.concat(&b)?.concat(&c)?;
        let random = SwapOrder::Random(ChaCha8Rng::seed_from_u64(rng.gen()));
        for mut order in [SwapOrder::Rightmost, random] {
            let other = raw.canonicalize_with(&mut order);
            if other != left {
                return Ok(outcome("confluence", cases, Some(format!("{raw}: {left} vs {other}"))));
            }
        }
    }
    Ok(outcome("confluence", cases, None))
}

/// Every matching sign against the cycle-count signature, for ground sets of size 2..=2m.
pub fn matching_signs(max_m: u32) -> Result<SuiteOutcome> {
    let mut cases = 0;
    for m in 1..=max_m {
        let ground: Vec<u32> = (1..=2 * m).collect();
        for matching in enumerate_matchings(&ground)? {
            cases += 1;
            let perm: Vec<usize> = matching.flattened().iter().map(|&x| x as usize - 1).collect();
            if cycle_sign(&perm) != i64::from(matching.sign()) {
                return Ok(outcome("matching-signs", cases, Some(format!("{:?}", matching.pairs()))));
            }
        }
    }
    Ok(outcome("matching-signs", cases, None))
}

/// `-F_{2i}F_{2j} + F_{1i}F_{1j} + F_{2j}F_{2i} - F_{1j}F_{1i}` (all at mode -1)
/// vanishes for every `2 < i < j <= 2n`.
pub fn proof_step_cancellation(rank: Rank) -> Result<SuiteOutcome> {
    let mut cases = 0;
    let d = rank.dim();
    for i in 3..=d {
        for j in i + 1..=d {
            cases += 1;
            let x = cancellation_expression(rank, i, j)?;
            if !x.is_zero() {
                return Ok(outcome("proof-step-cancellation", cases, Some(format!("(i,j)=({i},{j}): {x}"))));
            }
        }
    }
    Ok(outcome("proof-step-cancellation", cases, None))
}

pub fn cancellation_expression(rank: Rank, i: u32, j: u32) -> Result<Element> {
    let f = |a: u32, b: u32| Element::generator(rank, a, b, -1);
    let terms = [
        (-1, f(2, i)?, f(2, j)?),
        (1, f(1, i)?, f(1, j)?),
        (1, f(2, j)?, f(2, i)?),
        (-1, f(1, j)?, f(1, i)?),
    ];
    let mut acc = Element::zero(rank);
    for (sign, x, y) in terms {
        acc = acc.add(&x.concat(&y)?.scale(&KPolynomial::constant(sign)))?;
    }
    Ok(acc.canonicalize())
}

/// `π(Pf F[-1]) = sgn π · Pf F[-1]` for random `π` and every adjacent transposition.
pub fn automorphism_sign(rank: Rank, seed: u64, random_cases: usize) -> Result<SuiteOutcome> {
    let mut rng = suite_rng(seed, "automorphism-sign");
    let pf = pfaffian_minus_one(rank);
    let d = rank.dim() as usize;
    let mut perms: Vec<Vec<usize>> = (0..random_cases)
        .map(|_| {
            let mut p: Vec<usize> = (0..d).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    for k in 0..d.saturating_sub(1) {
        let mut p: Vec<usize> = (0..d).collect();
        p.swap(k, k + 1);
        perms.push(p);
    }
    for p in &perms {
        let images: Vec<u32> = p.iter().map(|&x| x as u32 + 1).collect();
        let moved = pf.permute_indices(&images)?;
        let expected = pf.scale(&KPolynomial::constant(cycle_sign(p)));
        if moved != expected {
            return Ok(outcome("automorphism-sign", perms.len(), Some(format!("{images:?}: {moved}"))));
        }
    }
    Ok(outcome("automorphism-sign", perms.len(), None))
}

/// All suites at the default sizes: 200 random cases each, matching signs up to
/// `m = 5`, 20 random automorphisms.
pub fn run_all(rank: Rank, seed: u64) -> Result<Vec<SuiteOutcome>> {
    Ok(vec![
        antisymmetry(rank, seed, 200)?,
        jacobi(rank, seed, 200)?,
        confluence(rank, seed, 200)?,
        matching_signs(5)?,
        proof_step_cancellation(rank)?,
        automorphism_sign(rank, seed, 20)?,
    ])
}
