//! Device model: coupling graph plus native gate set and noise parameters.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{Gate, GateKind};
use crate::error::NoiseError;
use crate::topology::{all_to_all, CouplingGraph, DistanceMatrix};

/// Default single-qubit gate fidelity.
pub const DEFAULT_F1Q: f64 = 0.9982;
/// Default two-qubit gate fidelity.
pub const DEFAULT_F2Q: f64 = 0.9765;
/// Default per-qubit relaxation time, microseconds.
pub const DEFAULT_T1: f64 = 100.0;
/// Default per-qubit dephasing time, microseconds.
pub const DEFAULT_T2: f64 = 80.0;
/// Default gate durations, microseconds.
pub const DEFAULT_DURATION_1Q: f64 = 0.035;
pub const DEFAULT_DURATION_2Q: f64 = 0.3;
pub const DEFAULT_DURATION_MEASURE: f64 = 1.0;
/// Default depolarization probabilities.
pub const DEFAULT_DEPOL_1Q: f64 = 0.001;
pub const DEFAULT_DEPOL_2Q: f64 = 0.01;

/// Crosstalk model parameters: amplification exponents `n` and `k`, the
/// proximity radius, and the reduced weight applied to nearby single-qubit
/// gates.
#[derive(Debug, Clone, PartialEq)]
pub struct XtalkParams {
    pub n: f64,
    pub k: f64,
    pub r_max: f64,
    pub single_qubit_weight: f64,
}

impl Default for XtalkParams {
    fn default() -> Self {
        XtalkParams { n: 1.0, k: 1.0, r_max: 2.0, single_qubit_weight: 0.5 }
    }
}

/// The device-facing native set: id, rz, sx, x, cx, swap, cz.
pub fn native_gates_device() -> BTreeSet<GateKind> {
    [GateKind::Id, GateKind::Rz, GateKind::Sx, GateKind::X, GateKind::Cx, GateKind::Swap, GateKind::Cz]
        .into_iter()
        .collect()
}

/// The alternative sweep basis: x, y, z, rx, ry, rz, cx, cy.
pub fn native_gates_sweep() -> BTreeSet<GateKind> {
    [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cx,
        GateKind::Cy,
    ]
    .into_iter()
    .collect()
}

/// Full IR alphabet minus ccx; used for the ideal all-to-all baseline where
/// only the arity of a gate matters.
pub fn native_gates_any() -> BTreeSet<GateKind> {
    GateKind::ALL
        .into_iter()
        .filter(|k| !matches!(k, GateKind::Ccx | GateKind::Measure | GateKind::Barrier))
        .collect()
}

/// Coupling graph, native gate set, and fidelity/timing/noise tables.
#[derive(Debug, Clone)]
pub struct DeviceSpec {
    pub graph: CouplingGraph,
    pub dists: DistanceMatrix,
    pub native_gates: BTreeSet<GateKind>,
    pub f1q: f64,
    pub f2q: f64,
    /// Per-gate-name fidelity overrides.
    pub gate_fidelity: BTreeMap<GateKind, f64>,
    /// Per-edge fidelity overrides for two-qubit gates.
    pub edge_fidelity: BTreeMap<(usize, usize), f64>,
    /// Per-qubit relaxation / dephasing times in microseconds.
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    /// Gate durations in microseconds.
    pub duration_1q: f64,
    pub duration_2q: f64,
    pub duration_measure: f64,
    pub gate_duration: BTreeMap<GateKind, f64>,
    /// Depolarization probabilities.
    pub depol_1q: f64,
    pub depol_2q: f64,
    pub gate_depol: BTreeMap<GateKind, f64>,
    pub xtalk: XtalkParams,
}

impl DeviceSpec {
    /// Device with default superconducting-range parameters on the given
    /// graph.
    pub fn with_defaults(graph: CouplingGraph) -> DeviceSpec {
        let n = graph.num_qubits();
        let dists = graph.distances().expect("coupling graphs are connected by construction");
        DeviceSpec {
            graph,
            dists,
            native_gates: native_gates_device(),
            f1q: DEFAULT_F1Q,
            f2q: DEFAULT_F2Q,
            gate_fidelity: BTreeMap::new(),
            edge_fidelity: BTreeMap::new(),
            t1: vec![DEFAULT_T1; n],
            t2: vec![DEFAULT_T2; n],
            duration_1q: DEFAULT_DURATION_1Q,
            duration_2q: DEFAULT_DURATION_2Q,
            duration_measure: DEFAULT_DURATION_MEASURE,
            gate_duration: BTreeMap::new(),
            depol_1q: DEFAULT_DEPOL_1Q,
            depol_2q: DEFAULT_DEPOL_2Q,
            gate_depol: BTreeMap::new(),
            xtalk: XtalkParams::default(),
        }
    }

    /// Ideal all-to-all device of `n` qubits carrying the same parameter
    /// tables as `self`; the baseline for pre-compilation fidelity.
    pub fn virtual_all_to_all(&self, n: usize) -> DeviceSpec {
        let graph = all_to_all(n).expect("all-to-all graph");
        let dists = graph.distances().expect("complete graph is connected");
        DeviceSpec {
            graph,
            dists,
            native_gates: native_gates_any(),
            gate_fidelity: self.gate_fidelity.clone(),
            edge_fidelity: BTreeMap::new(),
            t1: vec![self.t1.first().copied().unwrap_or(DEFAULT_T1); n],
            t2: vec![self.t2.first().copied().unwrap_or(DEFAULT_T2); n],
            gate_duration: self.gate_duration.clone(),
            gate_depol: self.gate_depol.clone(),
            xtalk: self.xtalk.clone(),
            ..self.clone()
        }
    }

    /// Checks the `T2 <= 2 T1` requirement of the relaxation model.
    pub fn validate_relaxation(&self) -> Result<(), NoiseError> {
        for q in 0..self.graph.num_qubits() {
            if self.t2[q] > 2.0 * self.t1[q] {
                return Err(NoiseError::BadRelaxationTimes { qubit: q, t1: self.t1[q], t2: self.t2[q] });
            }
        }
        Ok(())
    }

    /// Fidelity of one gate application. Measures and barriers contribute 1;
    /// per-edge overrides beat per-name overrides beat the arity defaults.
    pub fn fidelity(&self, gate: &Gate) -> Result<f64, NoiseError> {
        if !gate.is_unitary() {
            return Ok(1.0);
        }
        if !self.native_gates.contains(&gate.kind) {
            return Err(NoiseError::NonNativeGate(gate.kind.name().to_string()));
        }
        match gate.qubits.len() {
            1 => Ok(self.gate_fidelity.get(&gate.kind).copied().unwrap_or(self.f1q)),
            2 => {
                let key = (gate.qubits[0].min(gate.qubits[1]), gate.qubits[0].max(gate.qubits[1]));
                if let Some(&f) = self.edge_fidelity.get(&key) {
                    return Ok(f);
                }
                Ok(self.gate_fidelity.get(&gate.kind).copied().unwrap_or(self.f2q))
            }
            _ => Err(NoiseError::NonNativeGate(gate.kind.name().to_string())),
        }
    }

    /// Execution time of one gate in microseconds.
    pub fn duration(&self, gate: &Gate) -> Result<f64, NoiseError> {
        if gate.is_barrier() {
            return Ok(0.0);
        }
        if let Some(&d) = self.gate_duration.get(&gate.kind) {
            return Ok(d);
        }
        if gate.is_measure() {
            return Ok(self.duration_measure);
        }
        match gate.qubits.len() {
            1 => Ok(self.duration_1q),
            2 => Ok(self.duration_2q),
            _ => Err(NoiseError::MissingDuration(gate.kind.name().to_string())),
        }
    }

    /// Depolarization probability of one gate.
    pub fn depolarization(&self, gate: &Gate) -> Result<f64, NoiseError> {
        if !gate.is_unitary() {
            return Ok(0.0);
        }
        if let Some(&p) = self.gate_depol.get(&gate.kind) {
            return Ok(p);
        }
        match gate.qubits.len() {
            1 => Ok(self.depol_1q),
            2 => Ok(self.depol_2q),
            _ => Err(NoiseError::MissingDepolarization(gate.kind.name().to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::sycamore_grid;

    #[test]
    fn fidelity_lookup_priorities() {
        let mut dev = DeviceSpec::with_defaults(sycamore_grid(2, 2).unwrap());
        let cx = Gate::new(GateKind::Cx, vec![0, 1], vec![]).unwrap();
        assert_eq!(dev.fidelity(&cx).unwrap(), DEFAULT_F2Q);
        dev.gate_fidelity.insert(GateKind::Cx, 0.99);
        assert_eq!(dev.fidelity(&cx).unwrap(), 0.99);
        dev.edge_fidelity.insert((0, 1), 0.95);
        assert_eq!(dev.fidelity(&cx).unwrap(), 0.95);
        let rz = Gate::new(GateKind::Rz, vec![0], vec![0.1]).unwrap();
        assert_eq!(dev.fidelity(&rz).unwrap(), DEFAULT_F1Q);
    }

    #[test]
    fn non_native_gate_has_no_fidelity() {
        let dev = DeviceSpec::with_defaults(sycamore_grid(2, 2).unwrap());
        let h = Gate::new(GateKind::H, vec![0], vec![]).unwrap();
        assert!(matches!(dev.fidelity(&h), Err(NoiseError::NonNativeGate(_))));
        let measure = Gate::measure(0, 0);
        assert_eq!(dev.fidelity(&measure).unwrap(), 1.0);
    }

    #[test]
    fn durations_fall_back_by_arity() {
        let dev = DeviceSpec::with_defaults(sycamore_grid(2, 2).unwrap());
        let rz = Gate::new(GateKind::Rz, vec![0], vec![0.1]).unwrap();
        let cx = Gate::new(GateKind::Cx, vec![0, 1], vec![]).unwrap();
        assert_eq!(dev.duration(&rz).unwrap(), DEFAULT_DURATION_1Q);
        assert_eq!(dev.duration(&cx).unwrap(), DEFAULT_DURATION_2Q);
        assert_eq!(dev.duration(&Gate::measure(0, 0)).unwrap(), DEFAULT_DURATION_MEASURE);
    }

    #[test]
    fn relaxation_validation() {
        let mut dev = DeviceSpec::with_defaults(sycamore_grid(2, 2).unwrap());
        dev.validate_relaxation().unwrap();
        dev.t2[1] = 300.0;
        assert!(matches!(dev.validate_relaxation(), Err(NoiseError::BadRelaxationTimes { qubit: 1, .. })));
    }
}
