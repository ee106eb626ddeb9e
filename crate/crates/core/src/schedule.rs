//! ASAP/ALAP layering of circuits.
//!
//! A schedule partitions the depth-consuming gates of a circuit into layers
//! of qubit-disjoint gates. Barriers are fences: they never occupy a layer
//! but force everything after them (on their qubits) into later layers.

use crate::circuit::Circuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchedulePolicy {
    Asap,
    Alap,
}

impl SchedulePolicy {
    pub fn name(self) -> &'static str {
        match self {
            SchedulePolicy::Asap => "asap",
            SchedulePolicy::Alap => "alap",
        }
    }

    pub fn from_name(name: &str) -> Option<SchedulePolicy> {
        match name {
            "asap" => Some(SchedulePolicy::Asap),
            "alap" => Some(SchedulePolicy::Alap),
            _ => None,
        }
    }
}

/// Layered view of a circuit. `layers[i]` holds indices into the circuit's
/// gate list; barriers appear in no layer. Layer count equals circuit depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub layers: Vec<Vec<usize>>,
    pub policy: SchedulePolicy,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

/// Greedy layering honoring per-qubit (and per-clbit) gate order.
///
/// ASAP places each gate in the earliest legal layer. ALAP places each gate
/// in the latest legal layer given total depth = `circ.depth()`; it is
/// computed by ASAP-scheduling the reversed gate list and mirroring layer
/// indices.
pub fn schedule(circ: &Circuit, policy: SchedulePolicy) -> Schedule {
    match policy {
        SchedulePolicy::Asap => {
            let layers = asap_layers(circ.num_qubits, circ.num_clbits, circ.gates().len(), |i| i, circ);
            Schedule { layers, policy }
        }
        SchedulePolicy::Alap => {
            let n = circ.gates().len();
            let reversed = asap_layers(circ.num_qubits, circ.num_clbits, n, |i| n - 1 - i, circ);
            let depth = reversed.len();
            let mut layers = vec![Vec::new(); depth];
            for (rev_layer, gates) in reversed.iter().enumerate() {
                for &g in gates {
                    layers[depth - 1 - rev_layer].push(g);
                }
            }
            for layer in &mut layers {
                layer.sort_unstable();
            }
            Schedule { layers, policy }
        }
    }
}

fn asap_layers(
    num_qubits: usize,
    num_clbits: usize,
    num_gates: usize,
    order: impl Fn(usize) -> usize,
    circ: &Circuit,
) -> Vec<Vec<usize>> {
    let mut qubit_front = vec![0usize; num_qubits];
    let mut clbit_front = vec![0usize; num_clbits];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for i in 0..num_gates {
        let idx = order(i);
        let gate = &circ.gates()[idx];
        if gate.is_barrier() {
            let fence = gate.qubits.iter().map(|&q| qubit_front[q]).max().unwrap_or(0);
            for &q in &gate.qubits {
                qubit_front[q] = fence;
            }
            continue;
        }
        let level = gate
            .qubits
            .iter()
            .map(|&q| qubit_front[q])
            .chain(gate.clbits.iter().map(|&c| clbit_front[c]))
            .max()
            .unwrap_or(0);
        if level == layers.len() {
            layers.push(Vec::new());
        }
        layers[level].push(idx);
        for &q in &gate.qubits {
            qubit_front[q] = level + 1;
        }
        for &c in &gate.clbits {
            clbit_front[c] = level + 1;
        }
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};

    fn ghz3() -> Circuit {
        let mut c = Circuit::new(3, 0);
        c.add(GateKind::H, &[0], &[]).unwrap();
        c.add(GateKind::Cx, &[0, 1], &[]).unwrap();
        c.add(GateKind::Cx, &[1, 2], &[]).unwrap();
        c
    }

    #[test]
    fn ghz3_asap_layers() {
        let s = schedule(&ghz3(), SchedulePolicy::Asap);
        assert_eq!(s.layers, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn parallel_h_gates_share_one_layer() {
        let mut c = Circuit::new(2, 0);
        c.add(GateKind::H, &[0], &[]).unwrap();
        c.add(GateKind::H, &[1], &[]).unwrap();
        for policy in [SchedulePolicy::Asap, SchedulePolicy::Alap] {
            let s = schedule(&c, policy);
            assert_eq!(s.layers.len(), 1);
            assert_eq!(s.layers[0].len(), 2);
        }
    }

    #[test]
    fn alap_pulls_h_into_cx_layer() {
        // (h q0; cx q1,q2) has depth 1, so both schedules are a single layer.
        let mut c = Circuit::new(3, 0);
        c.add(GateKind::H, &[0], &[]).unwrap();
        c.add(GateKind::Cx, &[1, 2], &[]).unwrap();
        let asap = schedule(&c, SchedulePolicy::Asap);
        let alap = schedule(&c, SchedulePolicy::Alap);
        assert_eq!(asap.layers.len(), 1);
        assert_eq!(alap.layers.len(), 1);
        assert_eq!(alap.layers[0], vec![0, 1]);
    }

    #[test]
    fn alap_delays_early_gates() {
        // h q0 then cx(0,1): a leading x on q1 can wait until the cx layer.
        let mut c = Circuit::new(2, 0);
        c.add(GateKind::X, &[1], &[]).unwrap();
        c.add(GateKind::H, &[0], &[]).unwrap();
        c.add(GateKind::Cx, &[0, 1], &[]).unwrap();
        let alap = schedule(&c, SchedulePolicy::Alap);
        assert_eq!(alap.layers.len(), 2);
        // x q1 moves as late as possible: into the layer right before cx.
        assert_eq!(alap.layers[0], vec![0, 1]);
        assert_eq!(alap.layers[1], vec![2]);
    }

    #[test]
    fn layer_count_matches_depth_under_both_policies() {
        let mut c = Circuit::new(4, 2);
        c.add(GateKind::H, &[0], &[]).unwrap();
        c.add(GateKind::Cx, &[0, 1], &[]).unwrap();
        c.push(Gate::barrier(vec![0, 1, 2, 3]).unwrap()).unwrap();
        c.add(GateKind::Cx, &[2, 3], &[]).unwrap();
        c.add(GateKind::Rz, &[1], &[0.3]).unwrap();
        c.push(Gate::measure(0, 0)).unwrap();
        c.push(Gate::measure(1, 1)).unwrap();
        let d = c.depth();
        for policy in [SchedulePolicy::Asap, SchedulePolicy::Alap] {
            let s = schedule(&c, policy);
            assert_eq!(s.layers.len(), d, "{policy:?}");
            // Every non-barrier gate appears exactly once.
            let mut seen: Vec<usize> = s.layers.iter().flatten().copied().collect();
            seen.sort_unstable();
            let expected: Vec<usize> =
                (0..c.gates().len()).filter(|&i| !c.gates()[i].is_barrier()).collect();
            assert_eq!(seen, expected);
            // No layer reuses a qubit.
            for layer in &s.layers {
                let mut qubits = Vec::new();
                for &g in layer {
                    for &q in &c.gates()[g].qubits {
                        assert!(!qubits.contains(&q), "qubit {q} reused in a layer");
                        qubits.push(q);
                    }
                }
            }
        }
    }
}
