//! Zero-error verification: build an instance per stored set, sweep every
//! query, audit one transcript per distinct probe path.

use std::collections::HashSet;
use std::time::Instant;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::HarnessError;
use crate::memory::{audit_transcript, AdaptivityClass, Address};
use crate::schemes::{MembershipScheme, SchemeConfig, SchemeError, SchemeId};

/// Default limit on (set, query) pairs for exhaustive runs.
pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "BITPROBE_BUDGET";
/// Failure messages kept in a report.
const MAX_FAILURES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "mode")]
pub enum VerifyMode {
    /// Every set of size at most the capacity.
    AllSets,
    /// `count` random sets of exactly the capacity, drawn from `seed`.
    Sampled { count: usize, seed: u64 },
}

pub fn budget() -> u128 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

fn binomial(m: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(m as u128 - i) / (i + 1))
}

/// `Σ_{k ≤ n} C(m, k) · m`, the number of (set, query) pairs of an
/// exhaustive run.
pub fn all_sets_cost(m: usize, n: usize) -> u128 {
    (0..=n.min(m)).map(|k| binomial(m, k)).fold(0u128, u128::saturating_add).saturating_mul(m as u128)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub scheme: SchemeId,
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub mode: VerifyMode,
    pub sets_tested: u64,
    pub queries_tested: u64,
    pub build_failures: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub max_probes_seen: usize,
    pub required_class: AdaptivityClass,
    pub audits_run: u64,
    pub audit_failures: u64,
    pub space_bits: usize,
    pub formula_bits: usize,
    /// Every instance had `space_bits == formula_bits`.
    pub space_exact: bool,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.build_failures == 0
            && self.false_positives == 0
            && self.false_negatives == 0
            && self.max_probes_seen <= self.t
            && self.audit_failures == 0
            && self.space_exact
            && self.sets_tested > 0
    }
}

#[derive(Default)]
struct Tally {
    sets: u64,
    queries: u64,
    build_failures: u64,
    fp: u64,
    fn_: u64,
    max_probes: usize,
    audits: u64,
    audit_failures: u64,
    space: Option<(usize, usize)>,
    space_exact: bool,
    failures: Vec<String>,
    seen_paths: HashSet<Vec<(Vec<Address>, bool)>>,
}

impl Tally {
    fn new() -> Self {
        Tally { space_exact: true, ..Default::default() }
    }

    fn note(&mut self, msg: impl FnOnce() -> String) {
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(msg());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.sets += other.sets;
        self.queries += other.queries;
        self.build_failures += other.build_failures;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.max_probes = self.max_probes.max(other.max_probes);
        self.audits += other.audits;
        self.audit_failures += other.audit_failures;
        self.space = self.space.or(other.space);
        self.space_exact &= other.space_exact;
        for f in other.failures {
            self.note(|| f);
        }
        self
    }

    fn check_set(&mut self, cfg: &SchemeConfig, set: &[usize]) {
        self.sets += 1;
        let inst = match cfg.build(set) {
            Ok(inst) => inst,
            Err(e) => {
                self.build_failures += 1;
                self.note(|| format!("S = {set:?}: build failed: {e}"));
                return;
            }
        };
        let (space, formula) = (inst.space_bits(), inst.formula_bits());
        self.space.get_or_insert((space, formula));
        if space != formula {
            self.space_exact = false;
            self.note(|| format!("S = {set:?}: space {space} != formula {formula}"));
        }
        let mut members = set.iter();
        let mut next_member = members.next();
        for x in 0..cfg.m {
            self.queries += 1;
            let expected = next_member == Some(&x);
            if expected {
                next_member = members.next();
            }
            let (answer, t) = match inst.query(x) {
                Ok(r) => r,
                Err(e) => {
                    self.build_failures += 1;
                    self.note(|| format!("S = {set:?}, x = {x}: query failed: {e}"));
                    continue;
                }
            };
            match (answer, expected) {
                (true, false) => {
                    self.fp += 1;
                    self.note(|| format!("S = {set:?}, x = {x}: false positive"));
                }
                (false, true) => {
                    self.fn_ += 1;
                    self.note(|| format!("S = {set:?}, x = {x}: false negative"));
                }
                _ => {}
            }
            self.max_probes = self.max_probes.max(t.probe_count());
            if self.seen_paths.insert(t.path()) {
                self.audits += 1;
                let verdict = audit_transcript(&t, probe_budget(cfg.id), required_class(cfg.id), &mut |p| {
                    let _ = inst.query_with(x, p);
                });
                if !verdict.pass {
                    self.audit_failures += 1;
                    self.note(|| format!("S = {set:?}, x = {x}: audit failed: {:?}", verdict.detail));
                }
            }
        }
    }
}

fn sorted_sample(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Vec<usize> {
    let mut s = sample(rng, m, k).into_vec();
    s.sort_unstable();
    s
}

/// The `i`-th set of a sampled run; independent of thread scheduling.
pub fn sampled_set(seed: u64, i: u64, m: usize, k: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    sorted_sample(&mut rng, m, k)
}

/// Verifies the zero-error contract, probe budget, adaptivity class and
/// space formula for `cfg`. Exhaustive runs beyond [`budget`] are refused.
pub fn verify_exhaustive(cfg: &SchemeConfig, mode: VerifyMode) -> Result<VerificationReport, HarnessError> {
    let start = Instant::now();
    // configuration errors surface here rather than as per-set failures
    cfg.build(&[])?;
    let n = cfg.capacity().min(cfg.m);
    let tally = match mode {
        VerifyMode::AllSets => {
            let cost = all_sets_cost(cfg.m, n);
            let limit = budget();
            if cost > limit {
                return Err(HarnessError::BudgetExceeded { cost, budget: limit });
            }
            (0..=n)
                .flat_map(|k| (0..cfg.m).combinations(k))
                .par_bridge()
                .fold(Tally::new, |mut t, set| {
                    t.check_set(cfg, &set);
                    t
                })
                .reduce(Tally::new, Tally::merge)
        }
        VerifyMode::Sampled { count, seed } => (0..count as u64)
            .into_par_iter()
            .fold(Tally::new, |mut t, i| {
                t.check_set(cfg, &sampled_set(seed, i, cfg.m, n));
                t
            })
            .reduce(Tally::new, Tally::merge),
    };
    let required = required_class(cfg.id);
    let (space_bits, formula_bits) = tally.space.unwrap_or((0, 0));
    Ok(VerificationReport {
        scheme: cfg.id,
        m: cfg.m,
        n,
        t: probe_budget(cfg.id),
        mode,
        sets_tested: tally.sets,
        queries_tested: tally.queries,
        build_failures: tally.build_failures,
        false_positives: tally.fp,
        false_negatives: tally.fn_,
        max_probes_seen: tally.max_probes,
        required_class: required,
        audits_run: tally.audits,
        audit_failures: tally.audit_failures,
        space_bits,
        formula_bits,
        space_exact: tally.space_exact,
        failures: tally.failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Like [`verify_exhaustive`], but an exhaustive run over budget becomes a
/// sampled run of `fallback_count` sets from `seed`.
pub fn verify_or_sample(
    cfg: &SchemeConfig,
    mode: VerifyMode,
    fallback_count: usize,
    seed: u64,
) -> Result<VerificationReport, HarnessError> {
    match verify_exhaustive(cfg, mode) {
        Err(HarnessError::BudgetExceeded { cost, budget }) => {
            log::warn!(
                "exhaustive run needs {cost} pairs, budget {budget}; sampling {fallback_count} sets with seed {seed}"
            );
            verify_exhaustive(cfg, VerifyMode::Sampled { count: fallback_count, seed })
        }
        other => other,
    }
}

pub fn probe_budget(id: SchemeId) -> usize {
    match id {
        SchemeId::Cv => 1,
        SchemeId::Qn23 => 3,
        _ => 2,
    }
}

pub fn required_class(id: SchemeId) -> AdaptivityClass {
    match id {
        SchemeId::Ca | SchemeId::Qa => AdaptivityClass::Adaptive,
        _ => AdaptivityClass::NonAdaptive,
    }
}

impl From<SchemeError> for HarnessError {
    fn from(e: SchemeError) -> Self {
        HarnessError::Scheme(e)
    }
}
