//! Rewriting circuits into a native gate basis.
//!
//! A fixed rewrite table is applied to closure: every rule expands one
//! non-native gate into a short sequence that is exact up to global phase,
//! and expansion repeats until only native gates (plus measure/barrier)
//! remain. The two supported target bases are the device set
//! {id, rz, sx, x, cx, swap, cz} and the sweep set
//! {x, y, z, rx, ry, rz, cx, cy}; any superset of either also works.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::MapError;

/// Pre-routing basis: the full alphabet with ccx expanded, so that routing
/// only ever sees one- and two-qubit gates.
pub fn pre_routing_basis() -> BTreeSet<GateKind> {
    GateKind::ALL.into_iter().filter(|k| *k != GateKind::Ccx).collect()
}

/// Rewrites `circ` so that every gate is in `native` (measure and barrier
/// always pass through). Returns the circuit unchanged if it is already
/// native.
pub fn decompose(circ: &Circuit, native: &BTreeSet<GateKind>) -> Result<Circuit, MapError> {
    let mut out = Vec::with_capacity(circ.gates().len());
    for gate in circ.gates() {
        expand_into(gate, native, &mut out, 0)?;
    }
    Circuit::with_gates(circ.num_qubits, circ.num_clbits, out).map_err(MapError::from)
}

const MAX_REWRITE_DEPTH: usize = 8;

fn expand_into(
    gate: &Gate,
    native: &BTreeSet<GateKind>,
    out: &mut Vec<Gate>,
    depth: usize,
) -> Result<(), MapError> {
    if !gate.is_unitary() || native.contains(&gate.kind) {
        out.push(gate.clone());
        return Ok(());
    }
    if depth >= MAX_REWRITE_DEPTH {
        return Err(MapError::NoRewritePath(gate.kind.name().to_string()));
    }
    let expansion = rewrite(gate, native)?;
    for g in &expansion {
        expand_into(g, native, out, depth + 1)?;
    }
    Ok(())
}

/// One rewrite step for a non-native gate. Sequences are listed in time
/// order (first gate applied first).
fn rewrite(gate: &Gate, native: &BTreeSet<GateKind>) -> Result<Vec<Gate>, MapError> {
    let q = |i: usize| gate.qubits[i];
    let g1 = |kind: GateKind, qb: usize| Gate::new(kind, vec![qb], vec![]).expect("1q gate");
    let rot = |kind: GateKind, qb: usize, angle: f64| Gate::new(kind, vec![qb], vec![angle]).expect("rotation");
    let g2 = |kind: GateKind, a: usize, b: usize| Gate::new(kind, vec![a, b], vec![]).expect("2q gate");

    let seq = match gate.kind {
        GateKind::Id => Vec::new(),
        GateKind::Z => vec![rot(GateKind::Rz, q(0), PI)],
        GateKind::S => vec![rot(GateKind::Rz, q(0), PI / 2.0)],
        GateKind::Sdg => vec![rot(GateKind::Rz, q(0), -PI / 2.0)],
        GateKind::T => vec![rot(GateKind::Rz, q(0), PI / 4.0)],
        GateKind::Tdg => vec![rot(GateKind::Rz, q(0), -PI / 4.0)],
        GateKind::Y => vec![g1(GateKind::Z, q(0)), g1(GateKind::X, q(0))],
        GateKind::X => {
            if native.contains(&GateKind::Rx) {
                vec![rot(GateKind::Rx, q(0), PI)]
            } else {
                vec![g1(GateKind::Sx, q(0)), g1(GateKind::Sx, q(0))]
            }
        }
        GateKind::H => vec![rot(GateKind::Rz, q(0), PI / 2.0), g1(GateKind::Sx, q(0)), rot(GateKind::Rz, q(0), PI / 2.0)],
        GateKind::Sx => vec![rot(GateKind::Rx, q(0), PI / 2.0)],
        // rx/ry via the ZSXZSXZ Euler form of u3 (exact up to global phase):
        // rx(t) = u3(t, -pi/2, pi/2), ry(t) = u3(t, 0, 0).
        GateKind::Rx => {
            let t = gate.params[0];
            vec![
                rot(GateKind::Rz, q(0), PI / 2.0),
                g1(GateKind::Sx, q(0)),
                rot(GateKind::Rz, q(0), t + PI),
                g1(GateKind::Sx, q(0)),
                rot(GateKind::Rz, q(0), PI / 2.0),
            ]
        }
        GateKind::Ry => {
            let t = gate.params[0];
            vec![
                g1(GateKind::Sx, q(0)),
                rot(GateKind::Rz, q(0), t + PI),
                g1(GateKind::Sx, q(0)),
                rot(GateKind::Rz, q(0), PI),
            ]
        }
        GateKind::Rz => return Err(MapError::NoRewritePath("rz".to_string())),
        GateKind::Cx => return Err(MapError::NoRewritePath("cx".to_string())),
        GateKind::Cy => vec![g1(GateKind::Sdg, q(1)), g2(GateKind::Cx, q(0), q(1)), g1(GateKind::S, q(1))],
        GateKind::Cz => vec![g1(GateKind::H, q(1)), g2(GateKind::Cx, q(0), q(1)), g1(GateKind::H, q(1))],
        GateKind::Cp => {
            let t = gate.params[0];
            vec![
                rot(GateKind::Rz, q(0), t / 2.0),
                g2(GateKind::Cx, q(0), q(1)),
                rot(GateKind::Rz, q(1), -t / 2.0),
                g2(GateKind::Cx, q(0), q(1)),
                rot(GateKind::Rz, q(1), t / 2.0),
            ]
        }
        GateKind::Swap => vec![g2(GateKind::Cx, q(0), q(1)), g2(GateKind::Cx, q(1), q(0)), g2(GateKind::Cx, q(0), q(1))],
        // Standard 6-cx Toffoli.
        GateKind::Ccx => {
            let (a, b, c) = (q(0), q(1), q(2));
            vec![
                g1(GateKind::H, c),
                g2(GateKind::Cx, b, c),
                g1(GateKind::Tdg, c),
                g2(GateKind::Cx, a, c),
                g1(GateKind::T, c),
                g2(GateKind::Cx, b, c),
                g1(GateKind::Tdg, c),
                g2(GateKind::Cx, a, c),
                g1(GateKind::T, b),
                g1(GateKind::T, c),
                g1(GateKind::H, c),
                g2(GateKind::Cx, a, b),
                g1(GateKind::T, a),
                g1(GateKind::Tdg, b),
                g2(GateKind::Cx, a, b),
            ]
        }
        GateKind::Measure | GateKind::Barrier => unreachable!("pass-through handled by caller"),
    };
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{native_gates_device, native_gates_sweep};

    #[test]
    fn native_circuit_returned_unchanged() {
        let mut c = Circuit::new(2, 0);
        c.add(GateKind::Rz, &[0], &[0.3]).unwrap();
        c.add(GateKind::Cx, &[0, 1], &[]).unwrap();
        c.add(GateKind::Swap, &[0, 1], &[]).unwrap();
        let d = decompose(&c, &native_gates_device()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn swap_becomes_three_cx_when_not_native() {
        let mut c = Circuit::new(2, 0);
        c.add(GateKind::Swap, &[0, 1], &[]).unwrap();
        let d = decompose(&c, &native_gates_sweep()).unwrap();
        assert_eq!(d.gates().len(), 3);
        assert!(d.gates().iter().all(|g| g.kind == GateKind::Cx));
    }

    #[test]
    fn ccx_expands_to_six_cx_nine_single() {
        let mut c = Circuit::new(3, 0);
        c.add(GateKind::Ccx, &[0, 1, 2], &[]).unwrap();
        let d = decompose(&c, &pre_routing_basis()).unwrap();
        let counts = d.gate_counts();
        assert_eq!((counts.n1q, counts.n2q), (9, 6));
        assert!(d.gates().iter().filter(|g| g.kind == GateKind::Cx).count() == 6);
    }

    #[test]
    fn closure_reaches_both_bases_from_every_alphabet_gate() {
        for kind in GateKind::ALL {
            if matches!(kind, GateKind::Measure | GateKind::Barrier) {
                continue;
            }
            let nq = kind.num_qubits().unwrap();
            let params = vec![0.37; kind.num_params()];
            let mut c = Circuit::new(nq.max(1), 0);
            c.add(kind, &(0..nq).collect::<Vec<_>>(), &params).unwrap();
            for basis in [native_gates_device(), native_gates_sweep()] {
                let d = decompose(&c, &basis).unwrap();
                for g in d.gates() {
                    assert!(basis.contains(&g.kind), "{kind} left non-native {:?}", g.kind);
                }
            }
        }
    }

    #[test]
    fn measure_and_barrier_pass_through() {
        let mut c = Circuit::new(2, 1);
        c.add(GateKind::H, &[0], &[]).unwrap();
        c.push(Gate::barrier(vec![0, 1]).unwrap()).unwrap();
        c.push(Gate::measure(0, 0)).unwrap();
        let d = decompose(&c, &native_gates_sweep()).unwrap();
        assert!(d.gates().iter().any(|g| g.is_barrier()));
        assert!(d.gates().iter().any(|g| g.is_measure()));
    }
}
