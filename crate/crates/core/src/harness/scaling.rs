//! Space versus universe size, with a least-squares exponent fit on the
//! log-log rows.

use std::io::Write;

use serde::Serialize;

use super::HarnessError;
use crate::schemes::{MembershipScheme, SchemeConfig, SchemeId};

/// CSV columns, in order: `scheme,m,n,space_bits,formula_bits,vertices,edges,k`.
/// The last three are empty for schemes without a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalingRow {
    pub scheme: SchemeId,
    pub m: usize,
    pub n: usize,
    pub space_bits: usize,
    pub formula_bits: usize,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub k: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the residuals in natural-log units.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingResult {
    pub rows: Vec<ScalingRow>,
    pub fit: LogLogFit,
}

impl ScalingResult {
    /// `log10(max m / min m)`.
    pub fn decades(&self) -> f64 {
        let ms = self.rows.iter().map(|r| r.m as f64);
        let (lo, hi) = ms.fold((f64::INFINITY, 0f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
        (hi / lo).log10()
    }
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn fit_loglog(points: &[(f64, f64)]) -> Option<LogLogFit> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Some(LogLogFit { slope, intercept, residual: (sse / k).sqrt() })
}

/// Builds an empty instance for each `m` with the default substrate policy
/// and records its exact space.
pub fn scaling_experiment(
    id: SchemeId,
    m_values: &[usize],
    n: usize,
    seed: u64,
) -> Result<ScalingResult, HarnessError> {
    let mut rows = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let cfg = SchemeConfig::auto(id, m, n, seed)?;
        let inst = cfg.build(&[])?;
        let slots = inst.slots();
        rows.push(ScalingRow {
            scheme: id,
            m,
            n,
            space_bits: inst.space_bits(),
            formula_bits: inst.formula_bits(),
            vertices: slots.map(|s| s.graph().vertex_count()),
            edges: slots.map(|s| s.graph().edge_count()),
            k: slots.map(|s| s.k),
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.m as f64, r.space_bits as f64)).collect();
    let fit = fit_loglog(&points)
        .ok_or_else(|| HarnessError::Invalid("need at least two distinct positive m values".into()))?;
    Ok(ScalingResult { rows, fit })
}

pub fn write_scaling_csv(rows: &[ScalingRow], w: impl Write) -> Result<(), HarnessError> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_a_power_law() {
        let pts: Vec<(f64, f64)> = (1..10).map(|i| (2f64.powi(i), 3.0 * 2f64.powf(0.75 * i as f64))).collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.slope - 0.75).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(fit_loglog(&[(1.0, 1.0)]).is_none());
        assert!(fit_loglog(&[(2.0, 1.0), (2.0, 3.0)]).is_none());
    }

    #[test]
    fn rows_and_csv() {
        let r = scaling_experiment(SchemeId::Qn22, &[16, 100, 1000], 2, 0).unwrap();
        assert_eq!(r.rows.iter().map(|r| r.space_bits).collect::<Vec<_>>(), vec![16, 40, 128]);
        assert!(r.rows.iter().all(|r| r.space_bits == r.formula_bits));
        let mut buf = Vec::new();
        write_scaling_csv(&r.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "scheme,m,n,space_bits,formula_bits,vertices,edges,k");
        assert_eq!(text.lines().nth(1).unwrap(), "qn22,16,2,16,16,,,");
    }
}
