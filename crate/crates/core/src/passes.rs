//! Circuit optimization passes, optimization levels 0-3, and the additional
//! pass-manager setups 0-5.
//!
//! Every pass only deletes or merges gates, so gate count and depth never
//! increase. Pass pipelines run to a fixpoint, which makes the setups
//! idempotent by construction. All rewrites preserve the circuit semantics
//! up to global phase (and up to pre-measurement diagonal action for the
//! measure-aware passes; the zero-state pass assumes the all-zeros input
//! state, which is what devices execute).

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::MapError;

const ANGLE_EPS: f64 = 1e-12;

/// Optimization level pipelines:
/// 0 none; 1 fusion + adjacent inverse cancellation; 2 adds commutative
/// cancellation and diagonal-before-measure removal (fixpoint, max 10
/// rounds); 3 adds zero-state simplification. Levels are cumulative, so gate
/// count and depth are non-increasing in the level.
pub fn optimize(circ: &Circuit, level: u8) -> Result<Circuit, MapError> {
    optimize_in(circ, level, None)
}

/// [`optimize`] restricted to a native basis: rotation fusion only merges
/// runs whose result stays representable in the basis.
pub fn optimize_in(
    circ: &Circuit,
    level: u8,
    native: Option<&BTreeSet<GateKind>>,
) -> Result<Circuit, MapError> {
    match level {
        0 => Ok(circ.clone()),
        1 => Ok(run_fixpoint(circ, &[Pass::Fuse, Pass::CancelAdjacent(Scope::All)], None, native)),
        2 => {
            let base = optimize_in(circ, 1, native)?;
            Ok(run_fixpoint(
                &base,
                &[
                    Pass::Fuse,
                    Pass::CancelAdjacent(Scope::All),
                    Pass::CancelCommutative(Scope::All),
                    Pass::RemoveDiagonalBeforeMeasure,
                ],
                Some(10),
                native,
            ))
        }
        3 => {
            let base = optimize_in(circ, 2, native)?;
            Ok(run_fixpoint(
                &base,
                &[
                    Pass::Fuse,
                    Pass::CancelAdjacent(Scope::All),
                    Pass::CancelCommutative(Scope::All),
                    Pass::RemoveDiagonalBeforeMeasure,
                    Pass::ZeroStateSimplify,
                ],
                Some(10),
                native,
            ))
        }
        other => Err(MapError::BadOptLevel(other)),
    }
}

/// Additional pass-manager setups:
/// 0 none; 1 fusion + Clifford commutation-aware inverse cancellation;
/// 2 fusion + adjacent cx-pair cancellation; 3 = 1 + diagonal-gate removal
/// before measurements; 4 fusion + commutative cancellation; 5 = 3 +
/// zero-state simplification + commutative cancellation.
pub fn apply_setup(circ: &Circuit, setup: u8) -> Result<Circuit, MapError> {
    apply_setup_in(circ, setup, None)
}

/// [`apply_setup`] restricted to a native basis.
pub fn apply_setup_in(
    circ: &Circuit,
    setup: u8,
    native: Option<&BTreeSet<GateKind>>,
) -> Result<Circuit, MapError> {
    let passes: Vec<Pass> = match setup {
        0 => return Ok(circ.clone()),
        1 => vec![Pass::Fuse, Pass::CancelCommutative(Scope::Clifford)],
        2 => vec![Pass::Fuse, Pass::CancelAdjacentCx],
        3 => vec![
            Pass::Fuse,
            Pass::CancelCommutative(Scope::Clifford),
            Pass::RemoveDiagonalBeforeMeasure,
        ],
        4 => vec![Pass::Fuse, Pass::CancelCommutative(Scope::All)],
        5 => vec![
            Pass::Fuse,
            Pass::CancelCommutative(Scope::Clifford),
            Pass::RemoveDiagonalBeforeMeasure,
            Pass::ZeroStateSimplify,
            Pass::CancelCommutative(Scope::All),
        ],
        other => return Err(MapError::BadSetup(other)),
    };
    Ok(run_fixpoint(circ, &passes, None, native))
}

#[derive(Debug, Clone, Copy)]
enum Pass {
    Fuse,
    CancelAdjacent(Scope),
    CancelAdjacentCx,
    CancelCommutative(Scope),
    RemoveDiagonalBeforeMeasure,
    ZeroStateSimplify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope {
    All,
    Clifford,
}

fn run_fixpoint(
    circ: &Circuit,
    passes: &[Pass],
    max_rounds: Option<usize>,
    native: Option<&BTreeSet<GateKind>>,
) -> Circuit {
    // Each productive round strictly reduces the gate count, so the loop
    // terminates without the cap; the cap only mirrors the documented
    // level-2 bound.
    let cap = max_rounds.unwrap_or(circ.gates().len() + 4);
    let mut current = circ.clone();
    for _ in 0..cap.max(1) {
        let mut next = current.clone();
        for pass in passes {
            next = run_pass(&next, *pass, native);
        }
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn run_pass(circ: &Circuit, pass: Pass, native: Option<&BTreeSet<GateKind>>) -> Circuit {
    match pass {
        Pass::Fuse => fuse_single_qubit_runs(circ, native),
        Pass::CancelAdjacent(scope) => cancel_inverses(circ, scope, false),
        Pass::CancelAdjacentCx => cancel_adjacent_cx(circ),
        Pass::CancelCommutative(scope) => cancel_inverses(circ, scope, true),
        Pass::RemoveDiagonalBeforeMeasure => remove_diagonal_before_measure(circ),
        Pass::ZeroStateSimplify => zero_state_simplify(circ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
    Z,
}

/// Fixed-angle or parametric rotation, as (axis, angle).
fn rotation_of(gate: &Gate) -> Option<(Axis, f64)> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    let angle = match gate.kind {
        GateKind::Z => PI,
        GateKind::S => FRAC_PI_2,
        GateKind::Sdg => -FRAC_PI_2,
        GateKind::T => FRAC_PI_4,
        GateKind::Tdg => -FRAC_PI_4,
        GateKind::Rz => gate.params[0],
        GateKind::X => PI,
        GateKind::Sx => FRAC_PI_2,
        GateKind::Rx => gate.params[0],
        GateKind::Y => PI,
        GateKind::Ry => gate.params[0],
        _ => return None,
    };
    let axis = match gate.kind {
        GateKind::Z | GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg | GateKind::Rz => Axis::Z,
        GateKind::X | GateKind::Sx | GateKind::Rx => Axis::X,
        _ => Axis::Y,
    };
    Some((axis, angle))
}

fn is_trivial_angle(angle: f64) -> bool {
    let r = angle.rem_euclid(TAU);
    r < ANGLE_EPS || TAU - r < ANGLE_EPS
}

/// Single gate realizing a rotation of `angle` about `axis`, restricted to
/// `native` when given. Falls back to the fixed-angle alphabet gates when
/// the parametric rotation is not native; `None` means the merge is not
/// representable.
fn merged_rotation(
    axis: Axis,
    qubit: usize,
    angle: f64,
    native: Option<&BTreeSet<GateKind>>,
) -> Option<Gate> {
    use std::f64::consts::{FRAC_PI_2, PI};
    let parametric = match axis {
        Axis::X => GateKind::Rx,
        Axis::Y => GateKind::Ry,
        Axis::Z => GateKind::Rz,
    };
    let allowed = |kind: GateKind| native.is_none_or(|set| set.contains(&kind));
    if allowed(parametric) {
        return Some(Gate::new(parametric, vec![qubit], vec![angle]).expect("rotation gate"));
    }
    let r = angle.rem_euclid(TAU);
    let close = |target: f64| (r - target).abs() < ANGLE_EPS;
    let fixed = match axis {
        Axis::X if close(PI) => GateKind::X,
        Axis::X if close(FRAC_PI_2) => GateKind::Sx,
        Axis::Y if close(PI) => GateKind::Y,
        Axis::Z if close(PI) => GateKind::Z,
        Axis::Z if close(FRAC_PI_2) => GateKind::S,
        _ => return None,
    };
    allowed(fixed).then(|| Gate::new(fixed, vec![qubit], vec![]).expect("fixed rotation"))
}

/// Merges adjacent same-axis single-qubit rotations; runs summing to a
/// multiple of 2*pi disappear entirely (a global phase at most). With a
/// native basis the merge only happens when its result stays native.
fn fuse_single_qubit_runs(circ: &Circuit, native: Option<&BTreeSet<GateKind>>) -> Circuit {
    let mut out: Vec<Gate> = Vec::with_capacity(circ.gates().len());
    // Index into `out` of the last gate touching each qubit, if it is still
    // the tail of a fusable run.
    let mut tail: Vec<Option<usize>> = vec![None; circ.num_qubits];
    for gate in circ.gates() {
        let fused = if gate.qubits.len() == 1 && gate.is_unitary() {
            match (rotation_of(gate), tail[gate.qubits[0]]) {
                (Some((axis, angle)), Some(prev_idx)) => match rotation_of(&out[prev_idx]) {
                    Some((prev_axis, prev_angle)) if prev_axis == axis => {
                        let total = prev_angle + angle;
                        let q = gate.qubits[0];
                        if is_trivial_angle(total) {
                            out.remove(prev_idx);
                            fix_tails(&mut tail, prev_idx);
                            tail[q] = None;
                            true
                        } else if let Some(merged) = merged_rotation(axis, q, total, native) {
                            out[prev_idx] = merged;
                            true
                        } else {
                            false
                        }
                    }
                    _ => false,
                },
                _ => false,
            }
        } else {
            false
        };
        if !fused {
            for &q in &gate.qubits {
                tail[q] = None;
            }
            if gate.qubits.len() == 1 && gate.is_unitary() && rotation_of(gate).is_some() {
                tail[gate.qubits[0]] = Some(out.len());
            }
            out.push(gate.clone());
        }
    }
    Circuit::with_gates(circ.num_qubits, circ.num_clbits, out).expect("fusion preserves validity")
}

fn fix_tails(tail: &mut [Option<usize>], removed: usize) {
    for t in tail.iter_mut() {
        match t {
            Some(i) if *i == removed => *t = None,
            Some(i) if *i > removed => *i -= 1,
            _ => {}
        }
    }
}

fn in_scope(gate: &Gate, scope: Scope) -> bool {
    match scope {
        Scope::All => true,
        Scope::Clifford => matches!(
            gate.kind,
            GateKind::X
                | GateKind::Y
                | GateKind::Z
                | GateKind::H
                | GateKind::S
                | GateKind::Sdg
                | GateKind::Cx
                | GateKind::Cy
                | GateKind::Cz
                | GateKind::Swap
        ),
    }
}

/// True when `a . b` is the identity up to global phase.
fn is_inverse_pair(a: &Gate, b: &Gate) -> bool {
    if !a.is_unitary() || !b.is_unitary() {
        return false;
    }
    let same_ordered = a.qubits == b.qubits;
    let same_set = {
        let mut qa = a.qubits.clone();
        let mut qb = b.qubits.clone();
        qa.sort_unstable();
        qb.sort_unstable();
        qa == qb
    };
    let angles_cancel = || {
        a.params.len() == 1 && b.params.len() == 1 && {
            let r = (a.params[0] + b.params[0]).rem_euclid(TAU);
            r < ANGLE_EPS || TAU - r < ANGLE_EPS
        }
    };
    match (a.kind, b.kind) {
        (GateKind::X, GateKind::X)
        | (GateKind::Y, GateKind::Y)
        | (GateKind::Z, GateKind::Z)
        | (GateKind::H, GateKind::H)
        | (GateKind::Id, GateKind::Id)
        | (GateKind::Cx, GateKind::Cx)
        | (GateKind::Cy, GateKind::Cy) => same_ordered,
        (GateKind::Cz, GateKind::Cz) | (GateKind::Swap, GateKind::Swap) => same_set,
        (GateKind::Ccx, GateKind::Ccx) => {
            a.qubits[2] == b.qubits[2]
                && (a.qubits[0].min(a.qubits[1]), a.qubits[0].max(a.qubits[1]))
                    == (b.qubits[0].min(b.qubits[1]), b.qubits[0].max(b.qubits[1]))
        }
        (GateKind::S, GateKind::Sdg)
        | (GateKind::Sdg, GateKind::S)
        | (GateKind::T, GateKind::Tdg)
        | (GateKind::Tdg, GateKind::T) => same_ordered,
        (GateKind::Rz, GateKind::Rz) | (GateKind::Rx, GateKind::Rx) | (GateKind::Ry, GateKind::Ry) => {
            same_ordered && angles_cancel()
        }
        (GateKind::Cp, GateKind::Cp) => same_set && angles_cancel(),
        _ => false,
    }
}

/// Role a gate plays on one of its qubits, for commutation analysis. Gates
/// whose action on a qubit is computational-basis diagonal (controls,
/// diagonal gates) commute there with other diagonal actions; basis-axis
/// rotations commute with the same axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QubitRole {
    Diagonal,
    XAxis,
    YAxis,
    Opaque,
}

fn role_on(gate: &Gate, qubit: usize) -> QubitRole {
    if gate.kind.is_diagonal() {
        return QubitRole::Diagonal;
    }
    match gate.kind {
        GateKind::X | GateKind::Sx | GateKind::Rx => QubitRole::XAxis,
        GateKind::Y | GateKind::Ry => QubitRole::YAxis,
        GateKind::Cx | GateKind::Cy | GateKind::Ccx => {
            let target = *gate.qubits.last().expect("controlled gate");
            if qubit == target {
                if gate.kind == GateKind::Cy {
                    QubitRole::YAxis
                } else {
                    QubitRole::XAxis
                }
            } else {
                QubitRole::Diagonal
            }
        }
        _ => QubitRole::Opaque,
    }
}

fn commutes(a: &Gate, b: &Gate) -> bool {
    if !a.is_unitary() || !b.is_unitary() {
        return false;
    }
    for &q in &a.qubits {
        if b.qubits.contains(&q) {
            let (ra, rb) = (role_on(a, q), role_on(b, q));
            if ra == QubitRole::Opaque || ra != rb {
                return false;
            }
        }
    }
    true
}

/// Cancels inverse pairs. With `through_commuting` the partner may sit
/// behind gates that commute with the first gate; otherwise it must be the
/// immediate next gate on every shared qubit.
fn cancel_inverses(circ: &Circuit, scope: Scope, through_commuting: bool) -> Circuit {
    let mut gates: Vec<Option<Gate>> = circ.gates().iter().cloned().map(Some).collect();
    let mut i = 0;
    while i < gates.len() {
        let Some(a) = gates[i].clone() else {
            i += 1;
            continue;
        };
        if !a.is_unitary() || !in_scope(&a, scope) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < gates.len() {
            let Some(b) = gates[j].clone() else {
                j += 1;
                continue;
            };
            let shares = a.qubits.iter().any(|q| b.qubits.contains(q));
            if !shares {
                j += 1;
                continue;
            }
            if is_inverse_pair(&a, &b) && in_scope(&b, scope) {
                gates[i] = None;
                gates[j] = None;
                break;
            }
            if through_commuting && commutes(&a, &b) {
                j += 1;
                continue;
            }
            break;
        }
        i += 1;
    }
    rebuild(circ, gates)
}

/// Setup-2 pass: cancels immediately adjacent identical cx pairs only.
fn cancel_adjacent_cx(circ: &Circuit) -> Circuit {
    let mut gates: Vec<Option<Gate>> = circ.gates().iter().cloned().map(Some).collect();
    let mut i = 0;
    while i < gates.len() {
        let Some(a) = gates[i].clone() else {
            i += 1;
            continue;
        };
        if a.kind != GateKind::Cx {
            i += 1;
            continue;
        }
        for j in i + 1..gates.len() {
            let Some(b) = gates[j].clone() else { continue };
            if !a.qubits.iter().any(|q| b.qubits.contains(q)) {
                continue;
            }
            if b.kind == GateKind::Cx && b.qubits == a.qubits {
                gates[i] = None;
                gates[j] = None;
            }
            break;
        }
        i += 1;
    }
    rebuild(circ, gates)
}

/// Removes diagonal gates whose every qubit is measured immediately after
/// them; they cannot influence measurement statistics.
fn remove_diagonal_before_measure(circ: &Circuit) -> Circuit {
    let gates = circ.gates();
    let mut keep: Vec<bool> = vec![true; gates.len()];
    // Next kept gate per qubit, scanned from the back.
    loop {
        let mut changed = false;
        let mut next_on: Vec<Option<usize>> = vec![None; circ.num_qubits];
        for i in (0..gates.len()).rev() {
            if !keep[i] {
                continue;
            }
            let gate = &gates[i];
            if gate.is_unitary() && gate.kind.is_diagonal() {
                let all_measured = gate
                    .qubits
                    .iter()
                    .all(|&q| next_on[q].is_some_and(|n| gates[n].is_measure()));
                if all_measured {
                    keep[i] = false;
                    changed = true;
                    continue;
                }
            }
            for &q in &gate.qubits {
                next_on[q] = Some(i);
            }
        }
        if !changed {
            break;
        }
    }
    let pruned = gates
        .iter()
        .zip(&keep)
        .map(|(g, &k)| if k { Some(g.clone()) } else { None })
        .collect();
    rebuild(circ, pruned)
}

/// Deletes gates that provably act as the identity because their qubits are
/// still in |0>: diagonal gates on |0> qubits, controlled gates with a |0>
/// control, and swaps of two |0> qubits.
fn zero_state_simplify(circ: &Circuit) -> Circuit {
    let mut zero = vec![true; circ.num_qubits];
    let mut gates: Vec<Option<Gate>> = Vec::with_capacity(circ.gates().len());
    for gate in circ.gates() {
        let q = |i: usize| gate.qubits[i];
        let action = match gate.kind {
            GateKind::Id | GateKind::Z | GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg | GateKind::Rz => {
                if zero[q(0)] {
                    Action::Drop
                } else {
                    Action::Keep
                }
            }
            GateKind::X | GateKind::Y | GateKind::H | GateKind::Sx | GateKind::Rx | GateKind::Ry => {
                zero[q(0)] = false;
                Action::Keep
            }
            GateKind::Cx | GateKind::Cy => {
                if zero[q(0)] {
                    Action::Drop
                } else {
                    zero[q(1)] = false;
                    Action::Keep
                }
            }
            GateKind::Cz | GateKind::Cp => {
                if zero[q(0)] || zero[q(1)] {
                    Action::Drop
                } else {
                    Action::Keep
                }
            }
            GateKind::Swap => {
                if zero[q(0)] && zero[q(1)] {
                    Action::Drop
                } else {
                    zero.swap(q(0), q(1));
                    Action::Keep
                }
            }
            GateKind::Ccx => {
                if zero[q(0)] || zero[q(1)] {
                    Action::Drop
                } else {
                    zero[q(2)] = false;
                    Action::Keep
                }
            }
            GateKind::Measure | GateKind::Barrier => Action::Keep,
        };
        gates.push(match action {
            Action::Keep => Some(gate.clone()),
            Action::Drop => None,
        });
    }
    rebuild(circ, gates)
}

enum Action {
    Keep,
    Drop,
}

fn rebuild(circ: &Circuit, gates: Vec<Option<Gate>>) -> Circuit {
    Circuit::with_gates(circ.num_qubits, circ.num_clbits, gates.into_iter().flatten().collect())
        .expect("passes preserve validity")
}
