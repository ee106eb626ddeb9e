//! The end-to-end transpile pipeline:
//! ccx pre-decomposition -> initial layout -> swap routing -> native-basis
//! decomposition -> optimization level -> additional setup -> scheduling.

use crate::circuit::Circuit;
use crate::decompose::{decompose, pre_routing_basis};
use crate::device::DeviceSpec;
use crate::error::MapError;
use crate::layout::{layout_by_name, Layout};
use crate::passes::{apply_setup_in, optimize_in};
use crate::route::{router_by_name, RoutedCircuit};
use crate::schedule::{schedule, Schedule, SchedulePolicy};

/// One compiler configuration point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassConfig {
    pub layout_method: String,
    pub routing_method: String,
    pub opt_level: u8,
    pub setup: u8,
    pub scheduling: SchedulePolicy,
    pub seed: u64,
    pub sabre_trials: usize,
    pub stochastic_trials: usize,
}

impl Default for PassConfig {
    fn default() -> Self {
        PassConfig {
            layout_method: "sabre".to_string(),
            routing_method: "sabre".to_string(),
            opt_level: 1,
            setup: 0,
            scheduling: SchedulePolicy::Alap,
            seed: 0,
            sabre_trials: 4,
            stochastic_trials: 20,
        }
    }
}

/// Routed circuit plus its schedule under the configured policy.
#[derive(Debug, Clone, PartialEq)]
pub struct TranspileOutput {
    pub routed: RoutedCircuit,
    pub schedule: Schedule,
}

/// Runs the full pipeline. Identical inputs and seed give bit-identical
/// output for every layout/routing method.
pub fn transpile(circ: &Circuit, dev: &DeviceSpec, cfg: &PassConfig) -> Result<TranspileOutput, MapError> {
    if cfg.opt_level > 3 {
        return Err(MapError::BadOptLevel(cfg.opt_level));
    }
    if cfg.setup > 5 {
        return Err(MapError::BadSetup(cfg.setup));
    }
    let layout_strategy = layout_by_name(&cfg.layout_method)?;
    let router = router_by_name(&cfg.routing_method)?;

    let pre = decompose(circ, &pre_routing_basis())?;
    let layout = layout_strategy.select(&pre, &dev.graph, &dev.dists, cfg.seed, cfg.sabre_trials)?;

    let finish = |routed: RoutedCircuit| -> Result<RoutedCircuit, MapError> {
        let native = decompose(&routed.circuit, &dev.native_gates)?;
        let optimized = optimize_in(&native, cfg.opt_level, Some(&dev.native_gates))?;
        let tuned = apply_setup_in(&optimized, cfg.setup, Some(&dev.native_gates))?;
        Ok(RoutedCircuit { circuit: tuned, ..routed })
    };

    let route = |seed: u64| -> Result<RoutedCircuit, MapError> {
        router.route(&pre, &layout, &dev.graph, &dev.dists, seed, cfg.stochastic_trials)
    };

    // Level 3 runs a second routing trial under an alternate seed and keeps
    // the candidate that is no worse in both gate count and depth.
    let routed = if cfg.opt_level == 3 {
        let first = finish(route(cfg.seed)?)?;
        let second = finish(route(cfg.seed.wrapping_add(0x9E37_79B9))?)?;
        let (fg, fd) = (first.circuit.gate_total(), first.circuit.depth());
        let (sg, sd) = (second.circuit.gate_total(), second.circuit.depth());
        if sg <= fg && sd <= fd && (sg < fg || sd < fd) {
            second
        } else {
            first
        }
    } else {
        finish(route(cfg.seed)?)?
    };

    let sched = schedule(&routed.circuit, cfg.scheduling);
    Ok(TranspileOutput { routed, schedule: sched })
}

/// Mapped view of a logical circuit on a device without any routing; the
/// pre-compilation reference the metrics baseline is computed from.
pub fn apply_layout(circ: &Circuit, layout: &Layout, device_qubits: usize) -> Result<Circuit, MapError> {
    let mut out = Vec::with_capacity(circ.gates().len());
    for gate in circ.gates() {
        let mut mapped = gate.clone();
        for q in &mut mapped.qubits {
            *q = layout.phys(*q);
        }
        out.push(mapped);
    }
    Circuit::with_gates(device_qubits, circ.num_clbits, out).map_err(MapError::from)
}
