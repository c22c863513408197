//! Verification campaigns and their machine-readable reports.
//!
//! Every campaign returns one [`CheckReport`] per cell, in a fixed order that
//! does not depend on the worker count. JSON output is one object per line.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algebra::{Element, Generator, Rank};
use crate::error::{AlgebraError, Result};
use crate::pfaffian::{
    pfaffian_full_sum_oracle, pfaffian_minus_one, residual_noncritical, DEFAULT_ORACLE_LIMIT,
};
use crate::selftest;
use crate::sugawara::{check_plus_center, check_sugawara_commutation, default_test_vectors, generator_grid};
use crate::vacuum::{apply_generator, is_annihilated_by_modes, LevelPolicy, VacuumVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub n: u32,
    pub status: Status,
    pub residual_terms: usize,
    pub elapsed_ms: u64,
    pub detail: Option<String>,
}

impl CheckReport {
    fn from_residual(check: String, rank: Rank, residual: &VacuumVector, elapsed: Duration) -> Self {
        let passed = residual.is_zero();
        Self {
            check,
            n: rank.n(),
            status: if passed { Status::Pass } else { Status::Fail },
            residual_terms: residual.len(),
            elapsed_ms: elapsed.as_millis() as u64,
            detail: (!passed).then(|| residual.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{tag} {} n={} residual_terms={} ({} ms)",
            self.check, self.n, self.residual_terms, self.elapsed_ms
        );
        if let Some(d) = &self.detail {
            line.push_str("\n    ");
            line.push_str(d);
        }
        line
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: u32,
    pub level: LevelPolicy,
    /// Annihilation modes; `None` picks the campaign default.
    pub modes: Option<Vec<i64>>,
    pub p_list: Vec<i64>,
    /// Modes `m` of the generators `F[i,j;m]` in the commutation grid.
    pub generator_modes: Vec<i64>,
    /// Test vectors in text form; empty selects the default set.
    pub vectors: Vec<String>,
    pub oracle_limit: u32,
    /// Worker threads; 0 lets the pool decide.
    pub parallelism: usize,
    pub seed: u64,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 2,
            level: LevelPolicy::Critical,
            modes: None,
            p_list: vec![-2, -1, 0],
            generator_modes: vec![-1, 0, 1],
            vectors: Vec::new(),
            oracle_limit: DEFAULT_ORACLE_LIMIT,
            parallelism: 0,
            seed: 0,
            output: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn rank(&self) -> Result<Rank> {
        Rank::new(self.n)
    }

    /// Runs `f` on a dedicated pool with the configured worker count.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.parallelism)
            .build()
            .expect("thread pool");
        pool.install(f)
    }

    pub fn test_vectors(&self, rank: Rank) -> Result<Vec<VacuumVector>> {
        if self.vectors.is_empty() {
            return Ok(default_test_vectors(rank));
        }
        self.vectors
            .iter()
            .map(|t| VacuumVector::parse(rank, t, LevelPolicy::Critical))
            .collect()
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed()))
}

/// `F[i,j;r] Pf F[-1]` for all `i < j` and `r` in the modes (default `{0, 1}`).
pub fn verify_center(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let rank = config.rank()?;
    let modes = config.modes.clone().unwrap_or_else(|| vec![0, 1]);
    let pf = pfaffian_minus_one(rank);
    let report = is_annihilated_by_modes(&pf, &modes, config.level)?;
    Ok(report
        .cells
        .iter()
        .map(|c| CheckReport::from_residual(format!("verify-center:{}", c.generator), rank, &c.residual, c.elapsed))
        .collect())
}

/// The residual identity at symbolic `K`, its vanishing at the critical
/// level, and the level-free vanishing of `F[1,2;0] Pf F[-1]`.
pub fn residual(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let rank = config.rank()?;
    let (check, elapsed) = timed(|| residual_noncritical(rank))?;
    let equal = check.equal();
    let difference = check.lhs.sub(&check.rhs)?;
    let noncritical = CheckReport {
        check: "residual-noncritical".into(),
        n: rank.n(),
        status: if equal { Status::Pass } else { Status::Fail },
        residual_terms: difference.len(),
        elapsed_ms: elapsed.as_millis() as u64,
        detail: Some(if equal {
            check.lhs.to_string()
        } else {
            format!("{} != {}", check.lhs, check.rhs)
        }),
    };
    // At K = -(2n - 2) the factor vanishes, so both sides must.
    let critical_lhs = check.lhs.at_level(LevelPolicy::Critical);
    let critical_rhs = check.rhs.at_level(LevelPolicy::Critical);
    let mut critical = CheckReport::from_residual("residual-critical".into(), rank, &critical_lhs, elapsed);
    if !critical_rhs.is_zero() {
        critical.status = Status::Fail;
        critical.residual_terms += critical_rhs.len();
        critical.detail = Some(format!("lhs {critical_lhs}, rhs {critical_rhs}"));
    }
    let (mode_zero, elapsed_zero) = timed(|| {
        apply_generator(Generator::new(1, 2, 0), &pfaffian_minus_one(rank), LevelPolicy::Symbolic)
    })?;
    let zero = CheckReport::from_residual("residual-mode-zero-symbolic".into(), rank, &mode_zero, elapsed_zero);
    Ok(vec![noncritical, critical, zero])
}

pub fn oracle_compare(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let rank = config.rank()?;
    if config.n > config.oracle_limit {
        return Err(AlgebraError::OracleLimit {
            n: config.n,
            limit: config.oracle_limit,
        });
    }
    let ((matched, oracle), elapsed) =
        timed(|| Ok((pfaffian_minus_one(rank), pfaffian_full_sum_oracle(rank, config.oracle_limit)?)))?;
    let difference = matched.sub(&oracle)?;
    let detail = difference.terms().next().map(|(w, c)| {
        Element::from_word(rank, c.clone(), w.clone()).to_string() + " (first differing term)"
    });
    Ok(vec![CheckReport {
        check: "oracle-compare".into(),
        n: rank.n(),
        status: if difference.is_zero() { Status::Pass } else { Status::Fail },
        residual_terms: difference.len(),
        elapsed_ms: elapsed.as_millis() as u64,
        detail,
    }])
}

/// `S⁺_p` annihilation (default modes `{0, 1, 2}`) and the commutation grid.
pub fn sugawara(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let rank = config.rank()?;
    let modes = config.modes.clone().unwrap_or_else(|| vec![0, 1, 2]);
    let mut out = Vec::new();
    for (p, report) in check_plus_center(rank, &config.p_list, &modes)? {
        out.extend(report.cells.iter().map(|c| {
            CheckReport::from_residual(
                format!("sugawara-plus-center:p={p}:{}", c.generator),
                rank,
                &c.residual,
                c.elapsed,
            )
        }));
    }
    let vectors = config.test_vectors(rank)?;
    let generators = generator_grid(rank, &config.generator_modes);
    for cell in check_sugawara_commutation(rank, &config.p_list, &generators, &vectors)? {
        out.push(CheckReport::from_residual(
            format!("sugawara-commutation:p={}:{}:v={}", cell.p, cell.generator, vectors[cell.vector]),
            rank,
            &cell.residual,
            cell.elapsed,
        ));
    }
    Ok(out)
}

pub fn selftest(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let rank = config.rank()?;
    let start = Instant::now();
    let suites = selftest::run_all(rank, config.seed)?;
    let elapsed = start.elapsed().as_millis() as u64;
    Ok(suites
        .into_iter()
        .map(|s| CheckReport {
            check: format!("selftest:{}", s.name),
            n: rank.n(),
            status: if s.passed() { Status::Pass } else { Status::Fail },
            residual_terms: usize::from(!s.passed()),
            elapsed_ms: elapsed,
            detail: s.failure,
        })
        .collect())
}

/// Renders reports one per line in the configured format.
pub fn render(reports: &[CheckReport], format: OutputFormat) -> String {
    let mut out = String::new();
    for r in reports {
        match format {
            OutputFormat::Json => out.push_str(&r.to_json()),
            OutputFormat::Text => out.push_str(&r.to_text()),
        }
        out.push('\n');
    }
    out
}
