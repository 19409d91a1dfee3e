//! The twelve acceptance criteria, each a self-contained check returning a
//! one-line verdict.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fixtures::{tight_left, tight_right};
use super::scaling::scaling_experiment;
use super::verify::{verify_exhaustive, VerificationReport, VerifyMode};
use crate::forests::{is_forest, two_forest_partition};
use crate::graphs::{
    check_nash_williams_condition, complete_bipartite, girth, projective_plane_incidence, random_locally_sparse,
    wenger_graph, Girth, Graph, SparsityMode,
};
use crate::memory::ProbeKind;
use crate::orientation::{brute_force_safe_orient, is_safe, safe_orient, ColoredGraph, OrientPath};
use crate::schemes::{g_min, MembershipScheme, SchemeConfig, SchemeId};

/// Allowed deviation of each fitted scaling exponent.
pub const SLOPE_TOLERANCE: f64 = 0.03;
/// Minimum number of universe sizes per scaling fit.
pub const MIN_SCALING_POINTS: usize = 6;
/// Minimum span of universe sizes per scaling fit, in decades.
pub const MIN_SCALING_DECADES: f64 = 3.0;
/// Random colored graphs checked against the brute-force oracle.
pub const ORIENTATION_INSTANCES: usize = 20_000;
/// Largest edge count of those graphs.
pub const ORIENTATION_MAX_EDGES: usize = 12;
/// Seed shared by every sampled criterion.
pub const ACCEPTANCE_SEED: u64 = 20_240_601;

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "classical adaptive, K4,4, all sets of size <= 3"),
    (2, "classical adaptive, girth 6 projective plane, n = 4"),
    (3, "classical adaptive, girth 8 Wenger graph, n = 6"),
    (4, "safe orientation agrees with brute force"),
    (5, "tightness examples"),
    (6, "two-forest partition on all graphs with <= 6 vertices"),
    (7, "quantum adaptive on locally sparse graphs"),
    (8, "non-adaptive n = 2, t = 2, m = 256, all sets"),
    (9, "non-adaptive n = 2, t = 3, m = 216, all sets"),
    (10, "non-adaptive graph scheme, girth 6, n = 3"),
    (11, "scaling exponents"),
    (12, "g_min against the girth table"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CriterionResult {
    /// `PASS  criterion 3: title (detail)`.
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        format!("{verdict}  criterion {:>2}: {} ({}; {} ms)", self.id, self.title, self.detail, self.elapsed_ms)
    }
}

/// Runs the listed criteria (all of them when `ids` is empty) in order.
pub fn run_acceptance(ids: &[u8]) -> Vec<CriterionResult> {
    CRITERIA.iter().filter(|(id, _)| ids.is_empty() || ids.contains(id)).map(|&(id, _)| run_criterion(id)).collect()
}

pub fn run_criterion(id: u8) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        _ => Err(format!("no criterion {id}")),
    };
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    let (pass, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, title, pass, detail, elapsed_ms: start.elapsed().as_millis() }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn summary(r: &VerificationReport) -> String {
    format!(
        "{} sets, {} queries, fp {}, fn {}, max probes {}, {} audits, space {} bits",
        r.sets_tested,
        r.queries_tested,
        r.false_positives,
        r.false_negatives,
        r.max_probes_seen,
        r.audits_run,
        r.space_bits
    )
}

fn verified(cfg: &SchemeConfig, mode: VerifyMode, space: usize, probes: usize) -> Result<VerificationReport, String> {
    let r = verify_exhaustive(cfg, mode).map_err(|e| e.to_string())?;
    ensure(r.pass(), || format!("{}; failures {:?}", summary(&r), r.failures))?;
    ensure(r.space_bits == space, || format!("space {} != {space}", r.space_bits))?;
    ensure(r.max_probes_seen == probes, || format!("max probes {} != {probes}", r.max_probes_seen))?;
    Ok(r)
}

fn criterion_1() -> Outcome {
    let cfg =
        SchemeConfig::new(SchemeId::Ca, 96, 3).with_graph(complete_bipartite(4).map_err(|e| e.to_string())?).with_k(6);
    let r = verified(&cfg, VerifyMode::AllSets, 16 + 8 * 6, 2)?;
    ensure(r.sets_tested == 1 + 96 + 4560 + 142_880, || format!("{} sets", r.sets_tested))?;
    Ok(summary(&r))
}

fn criterion_2() -> Outcome {
    let g = projective_plane_incidence(3).map_err(|e| e.to_string())?;
    ensure(girth(&g).girth == Girth::Finite(6), || "projective plane girth is not 6".into())?;
    let (n_v, m_e) = (g.vertex_count(), g.edge_count());
    let cfg = SchemeConfig::new(SchemeId::Ca, m_e * 4, 4).with_graph(g).with_k(4);
    let r = verified(&cfg, VerifyMode::Sampled { count: 10_000, seed: ACCEPTANCE_SEED }, m_e + n_v * 4, 2)?;
    Ok(summary(&r))
}

fn criterion_3() -> Outcome {
    let g = wenger_graph(3, 3).map_err(|e| e.to_string())?;
    let gg = girth(&g).girth;
    ensure(gg.is_at_least(8), || format!("Wenger girth {gg}"))?;
    let (n_v, m_e) = (g.vertex_count(), g.edge_count());
    let cfg = SchemeConfig::new(SchemeId::Ca, m_e * 4, 6).with_graph(g).with_k(4);
    let r = verified(&cfg, VerifyMode::Sampled { count: 10_000, seed: ACCEPTANCE_SEED }, m_e + n_v * 4, 2)?;
    Ok(format!("girth {gg}, {}", summary(&r)))
}

/// A random bipartite graph with 1..=`max_edges` edges and at least one
/// cycle, with a random GREEN set of size at most `⌊3g/4⌋`.
pub fn random_orientation_instance(rng: &mut impl Rng, max_edges: usize) -> ColoredGraph {
    loop {
        let left = rng.gen_range(2..=5);
        let right = rng.gen_range(2..=5);
        let pairs: Vec<(usize, usize)> = (0..left).flat_map(|u| (left..left + right).map(move |v| (u, v))).collect();
        let m = rng.gen_range(4..=max_edges.min(pairs.len()).max(4));
        if m > pairs.len() {
            continue;
        }
        let edges = sample(rng, pairs.len(), m).into_iter().map(|i| pairs[i]);
        let g = Graph::from_pairs_dedup(left + right, edges).expect("pairs are in range");
        let Girth::Finite(gg) = girth(&g).girth else {
            continue;
        };
        let k = rng.gen_range(0..=(3 * gg / 4).min(g.edge_count()));
        let greens = sample(rng, g.edge_count(), k).into_vec();
        return ColoredGraph::new(g, greens).expect("green indices are in range");
    }
}

fn criterion_4() -> Outcome {
    let results: Vec<Result<OrientPath, String>> = (0..ORIENTATION_INSTANCES as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
            rng.set_stream(i);
            let h = random_orientation_instance(&mut rng, ORIENTATION_MAX_EDGES);
            let label =
                || format!("instance {i}: {:?} green {:?}", h.graph().edges(), h.green_edges().collect::<Vec<_>>());
            let o = safe_orient(&h).map_err(|e| format!("{}: {e}", label()))?;
            ensure(is_safe(&h, &o.orientation).unwrap_or(false), || format!("{}: not safe", label()))?;
            let brute = brute_force_safe_orient(&h).map_err(|e| e.to_string())?;
            ensure(brute.is_some(), || format!("{}: brute force found none", label()))?;
            Ok(o.path)
        })
        .collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    let constructive = results.iter().filter(|r| matches!(r, Ok(OrientPath::Constructive))).count();
    Ok(format!("{} instances safe and brute-force solvable, {constructive} without fallback", results.len()))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for (name, h, gg) in [("left", tight_left(), 10), ("right", tight_right(), 8)] {
        let brute = brute_force_safe_orient(&h).map_err(|e| e.to_string())?;
        ensure(brute.is_none(), || format!("tight {name} has a safe orientation"))?;
        let graph = h.shared_graph().clone();
        let bound = 3 * gg / 4;
        let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED + gg as u64);
        for _ in 0..100 {
            let greens = sample(&mut rng, graph.edge_count(), bound).into_vec();
            let hh = ColoredGraph::new(graph.clone(), greens.clone()).map_err(|e| e.to_string())?;
            let o = safe_orient(&hh).map_err(|e| format!("tight {name} greens {greens:?}: {e}"))?;
            ensure(is_safe(&hh, &o.orientation).unwrap_or(false), || {
                format!("tight {name} greens {greens:?}: unsafe")
            })?;
            let b = brute_force_safe_orient(&hh).map_err(|e| e.to_string())?;
            ensure(b.is_some(), || format!("tight {name} greens {greens:?}: brute force found none"))?;
            checked += 1;
        }
    }
    Ok(format!("both tight examples unorientable; {checked} subsets at the bound orientable"))
}

/// Subset-enumeration oracle for "every X induces at most 2(|X|-1) edges".
fn nash_williams_oracle(n: usize, edges: &[(usize, usize)]) -> bool {
    (1u32..1 << n).all(|mask| {
        let size = mask.count_ones() as usize;
        let inside = edges.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count();
        inside <= 2 * (size - 1)
    })
}

fn criterion_6() -> Outcome {
    let mut counts = (0usize, 0usize);
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let outcome: Result<Vec<bool>, String> = (0u32..1 << pairs.len())
            .into_par_iter()
            .map(|mask| {
                let edges: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
                let g = Graph::new(n, edges.iter().copied()).map_err(|e| e.to_string())?;
                let expected = nash_williams_oracle(n, &edges);
                let report = check_nash_williams_condition(&g, SparsityMode::exact()).map_err(|e| e.to_string())?;
                ensure(report.satisfied == expected, || format!("checker disagrees on {edges:?}"))?;
                let all: Vec<usize> = (0..n).collect();
                match two_forest_partition(&g, &all) {
                    Ok(p) => {
                        let mut union: Vec<usize> = p.forest1.iter().chain(&p.forest2).copied().collect();
                        union.sort_unstable();
                        ensure(expected, || format!("partition of violating graph {edges:?}"))?;
                        ensure(
                            is_forest(&g, &p.forest1)
                                && is_forest(&g, &p.forest2)
                                && union == (0..g.edge_count()).collect::<Vec<_>>(),
                            || format!("invalid partition of {edges:?}"),
                        )?;
                    }
                    Err(e) => ensure(!expected, || format!("no partition of {edges:?}: {e}"))?,
                }
                Ok(expected)
            })
            .collect();
        let flags = outcome?;
        counts.0 += flags.iter().filter(|&&s| s).count();
        counts.1 += flags.iter().filter(|&&s| !s).count();
    }
    Ok(format!("{} graphs split into two forests, {} violating graphs flagged", counts.0, counts.1))
}

fn criterion_7() -> Outcome {
    let mut sets = 0;
    let mut degenerate = Vec::new();
    for seed in 1..=20u64 {
        let g = random_locally_sparse(64, seed).map_err(|e| e.to_string())?;
        let (n_v, m_e) = (g.vertex_count(), g.edge_count());
        if m_e == 0 {
            degenerate.push(seed);
            continue;
        }
        let m = 4 * m_e;
        let cfg = SchemeConfig::new(SchemeId::Qa, m, 4).with_graph(Arc::new(g));
        let r = verified(&cfg, VerifyMode::Sampled { count: 1000, seed: ACCEPTANCE_SEED + seed }, m_e + 2 * n_v * 4, 2)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let inst = cfg.build(&[0]).map_err(|e| e.to_string())?;
        for x in [0, m - 1] {
            let (_, t) = inst.query(x).map_err(|e| e.to_string())?;
            let kinds: Vec<ProbeKind> = t.entries.iter().map(|e| e.kind).collect();
            ensure(kinds == [ProbeKind::ClassicalRead, ProbeKind::QuantumXor], || {
                format!("seed {seed}: transcript {kinds:?}")
            })?;
        }
        sets += r.sets_tested;
    }
    Ok(format!(
        "{sets} sets over {} seeds; seeds with no edges (empty universe): {degenerate:?}",
        20 - degenerate.len()
    ))
}

fn criterion_8() -> Outcome {
    let r = verified(&SchemeConfig::new(SchemeId::Qn22, 256, 2), VerifyMode::AllSets, 64, 2)?;
    ensure(r.sets_tested == 1 + 256 + 32_640, || format!("{} sets", r.sets_tested))?;
    Ok(summary(&r))
}

fn criterion_9() -> Outcome {
    let r = verified(&SchemeConfig::new(SchemeId::Qn23, 216, 2), VerifyMode::AllSets, 36, 3)?;
    ensure(r.sets_tested == 1 + 216 + 23_220, || format!("{} sets", r.sets_tested))?;
    Ok(summary(&r))
}

fn criterion_10() -> Outcome {
    let g = projective_plane_incidence(3).map_err(|e| e.to_string())?;
    let (n_v, m_e) = (g.vertex_count(), g.edge_count());
    let cfg = SchemeConfig::new(SchemeId::Appx, m_e * 4, 3).with_graph(g).with_k(4);
    let r = verified(&cfg, VerifyMode::Sampled { count: 1000, seed: ACCEPTANCE_SEED }, m_e + n_v * 4, 2)?;
    Ok(summary(&r))
}

/// Universe sizes and target exponents of the scaling fits.
pub fn scaling_plan() -> Vec<(SchemeId, usize, Vec<usize>, f64)> {
    let powers = |lo: u32, hi: u32| (lo..=hi).map(|k| 1usize << k).collect::<Vec<_>>();
    vec![
        (SchemeId::Ca, 3, powers(10, 20), 2.0 / 3.0),
        (SchemeId::Qn22, 2, powers(8, 20), 0.5),
        (SchemeId::Qn23, 2, powers(9, 24), 1.0 / 3.0),
    ]
}

fn criterion_11() -> Outcome {
    let mut parts = Vec::new();
    let mut failed = false;
    for (id, n, ms, target) in scaling_plan() {
        let r = scaling_experiment(id, &ms, n, ACCEPTANCE_SEED).map_err(|e| e.to_string())?;
        let ok = (r.fit.slope - target).abs() <= SLOPE_TOLERANCE
            && r.rows.len() >= MIN_SCALING_POINTS
            && r.decades() >= MIN_SCALING_DECADES
            && r.rows.iter().all(|row| row.space_bits == row.formula_bits);
        failed |= !ok;
        parts.push(format!(
            "{id} slope {:.4} (target {target:.3}, residual {:.3}, {} points, {:.1} decades)",
            r.fit.slope,
            r.fit.residual,
            r.rows.len(),
            r.decades()
        ));
    }
    let detail = parts.join("; ");
    if failed {
        Err(detail)
    } else {
        Ok(detail)
    }
}

fn criterion_12() -> Outcome {
    let table = [(2, 4), (3, 4), (4, 6), (5, 8), (6, 8), (7, 10), (8, 12), (9, 12)];
    for (n, g) in table {
        let got = g_min(n).map_err(|e| e.to_string())?;
        ensure(got == g, || format!("g_min({n}) = {got}, expected {g}"))?;
    }
    Ok("n = 2..9 -> 4,4,6,8,8,10,12,12".into())
}
