//! Compilation quality metrics: gate/depth overhead, fidelity decrease,
//! cost improvement, and relative depth between topologies.

use crate::circuit::Circuit;
use crate::error::MetricError;

/// Parameters of the weighted log-fidelity circuit cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    /// Single-qubit gate fidelity.
    pub f1q: f64,
    /// Two-qubit gate fidelity.
    pub f2q: f64,
    /// Decoherence fidelity per unit of depth (0.995 means 0.5% loss per
    /// depth step).
    pub k_depth: f64,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams { f1q: 0.9982, f2q: 0.9765, k_depth: 0.995 }
    }
}

/// Relative increase in total gate count (barriers excluded).
pub fn gate_overhead(before: &Circuit, after: &Circuit) -> Result<f64, MetricError> {
    let g_before = before.gate_total();
    if g_before == 0 {
        return Err(MetricError::EmptyBefore);
    }
    let g_after = after.gate_total();
    Ok((g_after as f64 - g_before as f64) / g_before as f64)
}

/// Relative change in circuit depth.
pub fn depth_overhead(before: &Circuit, after: &Circuit) -> Result<f64, MetricError> {
    let d_before = before.depth();
    if d_before == 0 {
        return Err(MetricError::ZeroDepthBefore);
    }
    Ok((after.depth() as f64 - d_before as f64) / d_before as f64)
}

/// Relative fidelity loss through compilation.
pub fn fidelity_decrease(f_before: f64, f_after: f64) -> Result<f64, MetricError> {
    for f in [f_before, f_after] {
        if !(f > 0.0 && f <= 1.0) {
            return Err(MetricError::BadFidelity(f));
        }
    }
    Ok((f_before - f_after) / f_before)
}

/// Weighted log-fidelity cost from raw depth and gate counts, in natural
/// log (the cost ratio is base-invariant).
pub fn cost_from_counts(depth: usize, n1q: usize, n2q: usize, p: &MetricParams) -> f64 {
    -(depth as f64) * p.k_depth.ln() - (n1q as f64) * p.f1q.ln() - (n2q as f64) * p.f2q.ln()
}

/// Cost of a circuit. Three-qubit gates carry no fidelity term and must be
/// decomposed first.
pub fn circuit_cost(circ: &Circuit, p: &MetricParams) -> Result<f64, MetricError> {
    let counts = circ.gate_counts();
    if counts.ccx > 0 {
        return Err(MetricError::CcxPresent);
    }
    Ok(cost_from_counts(circ.depth(), counts.n1q, counts.n2q, p))
}

/// Ratio of input cost to output cost; values above 1 mean the compiled
/// circuit is expected to accumulate less error.
pub fn cost_improvement(before: &Circuit, after: &Circuit, p: &MetricParams) -> Result<f64, MetricError> {
    if before.gate_total() == 0 {
        return Err(MetricError::EmptyBefore);
    }
    let c_in = circuit_cost(before, p)?;
    let c_out = circuit_cost(after, p)?;
    if c_out == 0.0 {
        return Err(MetricError::ZeroOutputCost);
    }
    Ok(c_in / c_out)
}

/// Proportional depth difference of a grid-topology compilation against the
/// heavy-hex baseline.
pub fn relative_depth(d_sycamore: usize, d_heavyhex: usize) -> Result<f64, MetricError> {
    if d_heavyhex == 0 {
        return Err(MetricError::ZeroBaseline);
    }
    Ok((d_sycamore as f64 - d_heavyhex as f64) / d_heavyhex as f64)
}
