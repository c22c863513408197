//! Acceptance suite. Every criterion is an exact equality of canonical forms.
//!
//! Run with `cargo test -p ssv-core --test acceptance -- --nocapture` to see
//! one PASS/FAIL line per criterion. The n = 4 oracle comparison is ignored by
//! default; add `--ignored` to include it.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssv_core::matching::enumerate_matchings;
use ssv_core::pfaffian::{pfaffian_element, pfaffian_full_sum_oracle, pfaffian_minus_one, pfaffian_submatrix, residual_noncritical};
use ssv_core::selftest::cancellation_expression;
use ssv_core::sugawara::{check_sugawara_commutation, default_test_vectors, generator_grid, sugawara_plus_coefficient};
use ssv_core::vacuum::{apply_generator, is_annihilated_by_modes, LevelPolicy, VacuumVector};
use ssv_core::{bracket, lie_bracket, Element, Generator, KPolynomial, Rank, SwapOrder};

const SEED: u64 = 20_240_611;
const RANDOM_CASES: usize = 200;

fn rank(n: u32) -> Rank {
    Rank::new(n).unwrap()
}

/// Signature via cycle decomposition; `perm[k]` is the image of `k`.
fn signature(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn random_letter(rng: &mut ChaCha8Rng, r: Rank) -> Generator {
    let pairs = r.index_pairs();
    let (i, j) = pairs[rng.gen_range(0..pairs.len())];
    Generator::new(i, j, rng.gen_range(-2..=2))
}

struct Outcome {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
}

fn report(outcomes: &[Outcome]) {
    for o in outcomes {
        let tag = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {}", o.id, o.title);
        for f in o.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.failures.is_empty()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

fn center_membership() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=4 {
        let r = rank(n);
        let pf = pfaffian_minus_one(r);
        let start = Instant::now();
        let sweep = is_annihilated_by_modes(&pf, &[0, 1], LevelPolicy::Critical).unwrap();
        let elapsed = start.elapsed();
        if sweep.cells.len() != r.index_pairs().len() * 2 {
            failures.push(format!("n={n}: wrong sweep size {}", sweep.cells.len()));
        }
        for cell in sweep.failures() {
            failures.push(format!("n={n}: {} Pf = {}", cell.generator, cell.residual));
        }
        let budget = if n == 4 { Duration::from_secs(60) } else { Duration::from_secs(1) };
        if elapsed > budget {
            failures.push(format!("n={n}: took {elapsed:?}, budget {budget:?}"));
        }
    }
    Outcome { id: 1, title: "F[i,j;r] Pf F[-1] = 0 for r in {0,1}, n = 2,3,4, K = -2n+2", failures }
}

fn noncritical_residual() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=3 {
        let r = rank(n);
        let check = residual_noncritical(r).unwrap();
        // Independent right-hand side: (-K - 2n + 2) times the sub-Pfaffian built here.
        let factor = KPolynomial::parse(&format!("-K - {}", 2 * n - 2)).unwrap();
        let tail: Vec<u32> = (3..=2 * n).collect();
        let rhs = pfaffian_submatrix(r, &tail).unwrap().scale(&factor);
        if check.lhs != rhs || !check.equal() {
            failures.push(format!("n={n}: {} vs {}", check.lhs, rhs));
        }
        let zero = apply_generator(Generator::new(1, 2, 0), &pfaffian_minus_one(r), LevelPolicy::Symbolic).unwrap();
        if !zero.is_zero() {
            failures.push(format!("n={n}: F[1,2;0] Pf = {zero} at symbolic K"));
        }
        if !check.lhs.at_level(LevelPolicy::Critical).is_zero() {
            failures.push(format!("n={n}: residual survives the critical level"));
        }
    }
    Outcome { id: 2, title: "F[1,2;1] Pf = (-K-2n+2) Pf_{3..2n}, F[1,2;0] Pf = 0 at symbolic K", failures }
}

fn oracle_equivalence(max_n: u32) -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=max_n {
        let r = rank(n);
        let oracle = pfaffian_full_sum_oracle(r, 4).unwrap();
        let fast = pfaffian_minus_one(r);
        if oracle != fast {
            failures.push(format!("n={n}: oracle {oracle} vs {fast}"));
        }
    }
    Outcome { id: 3, title: "matching sum equals the 1/(2^n n!) permutation sum", failures }
}

fn automorphism_sign() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 2..=4 {
        let r = rank(n);
        let d = r.dim() as usize;
        let pf = pfaffian_minus_one(r);
        let mut perms: Vec<Vec<usize>> = (0..20)
            .map(|_| {
                let mut p: Vec<usize> = (0..d).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        for k in 0..d - 1 {
            let mut p: Vec<usize> = (0..d).collect();
            p.swap(k, k + 1);
            perms.push(p);
        }
        for p in perms {
            let images: Vec<u32> = p.iter().map(|&x| x as u32 + 1).collect();
            let moved = pf.permute_indices(&images).unwrap();
            if moved != pf.scale(&KPolynomial::constant(signature(&p))) {
                failures.push(format!("n={n}, pi={images:?}"));
            }
        }
    }
    Outcome { id: 4, title: "pi(Pf F[-1]) = sgn(pi) Pf F[-1]", failures }
}

fn algebra_core_properties() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let r = rank(2);
    for n in [2, 3] {
        let rn = rank(n);
        for _ in 0..RANDOM_CASES {
            let (a, b) = (random_letter(&mut rng, rn), random_letter(&mut rng, rn));
            let s = bracket(rn, a, b).unwrap().add(&bracket(rn, b, a).unwrap()).unwrap();
            if !s.is_zero() {
                failures.push(format!("antisymmetry n={n}: {a} {b}"));
            }
            let c = random_letter(&mut rng, rn);
            let [x, y, z] = [a, b, c].map(|g| Element::letter(rn, g).unwrap());
            let jac = lie_bracket(&x, &lie_bracket(&y, &z).unwrap()).unwrap()
                .add(&lie_bracket(&y, &lie_bracket(&z, &x).unwrap()).unwrap()).unwrap()
                .add(&lie_bracket(&z, &lie_bracket(&x, &y).unwrap()).unwrap()).unwrap();
            if !jac.is_zero() {
                failures.push(format!("jacobi n={n}: {a} {b} {c}"));
            }
        }
    }
    for _ in 0..RANDOM_CASES {
        // Three factors of 1-2 letters, 4 letters at most overall.
        let len_a = rng.gen_range(1..=2);
        let lens = [len_a, 1, rng.gen_range(1..=3 - len_a)];
        let [a, b, c] = lens.map(|len| {
            let word = (0..len).map(|_| random_letter(&mut rng, r)).collect();
            Element::from_word(r, KPolynomial::constant(rng.gen_range(-3..=3_i64)), word)
        });
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        let raw = a.concat(&b).unwrap().concat(&c).unwrap();
        let rightmost = raw.canonicalize_with(&mut SwapOrder::Rightmost);
        let random = raw.canonicalize_with(&mut SwapOrder::Random(ChaCha8Rng::seed_from_u64(rng.gen())));
        if left != right || left != rightmost || left != random || !left.is_canonical() {
            failures.push(format!("confluence: {raw}"));
        }
    }
    for n in [2, 3] {
        let rn = rank(n);
        for i in 3..=2 * n {
            for j in i + 1..=2 * n {
                let x = cancellation_expression(rn, i, j).unwrap();
                if !x.is_zero() {
                    failures.push(format!("cancellation n={n} ({i},{j}): {x}"));
                }
            }
        }
    }
    Outcome { id: 5, title: "antisymmetry, Jacobi, PBW confluence, proof-step cancellation", failures }
}

fn matching_combinatorics() -> Outcome {
    let mut failures = Vec::new();
    let expected = [1usize, 3, 15, 105, 945, 10395];
    for (m, &count) in (1..=6u32).zip(&expected) {
        let ground: Vec<u32> = (1..=2 * m).collect();
        let all = enumerate_matchings(&ground).unwrap();
        if all.len() != count {
            failures.push(format!("m={m}: {} matchings", all.len()));
        }
        for x in &all {
            let perm: Vec<usize> = x.flattened().iter().map(|&v| v as usize - 1).collect();
            if signature(&perm) != i64::from(x.sign()) {
                failures.push(format!("m={m}: sign of {:?}", x.pairs()));
            }
        }
    }
    Outcome { id: 6, title: "(2m-1)!! matchings with brute-force signs, m = 1..6", failures }
}

fn sugawara_claims() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=3 {
        let r = rank(n);
        let s1 = sugawara_plus_coefficient(r, -1).unwrap();
        let pf_vec = VacuumVector::try_from_canonical(pfaffian_element(r, &(1..=2 * n).collect::<Vec<_>>()).unwrap()).unwrap();
        if s1 != pf_vec {
            failures.push(format!("n={n}: S+_-1 = {s1}"));
        }
        let s2 = sugawara_plus_coefficient(r, -2).unwrap();
        let sweep = is_annihilated_by_modes(&s2, &[0, 1, 2], LevelPolicy::Critical).unwrap();
        for cell in sweep.failures() {
            failures.push(format!("n={n}: {} S+_-2 = {}", cell.generator, cell.residual));
        }
    }
    let r = rank(2);
    let vectors = default_test_vectors(r);
    let generators = generator_grid(r, &[-1, 0, 1]);
    let cells = check_sugawara_commutation(r, &[-2, -1, 0], &generators, &vectors).unwrap();
    if cells.len() != 3 * 18 * 3 {
        failures.push(format!("grid has {} cells", cells.len()));
    }
    for c in cells.iter().filter(|c| !c.passed()) {
        failures.push(format!("p={} X={} v={}: {}", c.p, c.generator, vectors[c.vector], c.residual));
    }
    Outcome { id: 7, title: "S+_-1 = Pf, S+_-2 central, [S_p, F[i,j;m]] v = 0", failures }
}

fn strip_elapsed(output: &[u8]) -> Vec<String> {
    String::from_utf8_lossy(output)
        .lines()
        .map(|line| {
            let mut v: serde_json::Value = serde_json::from_str(line).expect("json line");
            v.as_object_mut().unwrap().remove("elapsed_ms");
            v.to_string()
        })
        .collect()
}

fn determinism() -> Outcome {
    let mut failures = Vec::new();
    let runs: [&[&str]; 3] = [
        &["verify-center", "--n", "3"],
        &["sugawara", "--n", "2"],
        &["selftest", "--n", "3", "--seed", "11"],
    ];
    for args in runs {
        let outputs: Vec<Vec<String>> = ["1", "4", "4"]
            .iter()
            .map(|threads| {
                let out = Command::new(env!("CARGO_BIN_EXE_ssv"))
                    .args(args)
                    .args(["--json", "--threads", threads])
                    .output()
                    .expect("run ssv");
                assert!(out.status.success(), "{args:?} exited with {}", out.status);
                strip_elapsed(&out.stdout)
            })
            .collect();
        if outputs[0].is_empty() || outputs.iter().any(|o| o != &outputs[0]) {
            failures.push(format!("{args:?}: reports differ across runs"));
        }
    }
    Outcome { id: 8, title: "identical config gives identical reports at any thread count", failures }
}

#[test]
fn acceptance_criteria() {
    report(&[
        center_membership(),
        noncritical_residual(),
        oracle_equivalence(3),
        automorphism_sign(),
        algebra_core_properties(),
        matching_combinatorics(),
        sugawara_claims(),
        determinism(),
    ]);
}

#[test]
#[ignore = "slow: 40320-permutation oracle"]
fn acceptance_oracle_n4() {
    report(&[oracle_equivalence(4)]);
}
