//! Dense statevector simulator for the circuit IR.
//!
//! This crate is the test oracle of the workspace: it implements gate
//! semantics directly from the matrix definitions, independently of the
//! transpiler, so that compiled circuits can be checked for measurement
//! equivalence against their sources. Scale target is small (<= ~20 qubits).

use num_complex::Complex64;

use dse_core::circuit::{Circuit, Gate, GateKind};
use dse_core::route::RoutedCircuit;

/// Dense state over `n` qubits, little-endian (qubit q is bit q of the
/// amplitude index). Starts in |0...0>.
#[derive(Debug, Clone)]
pub struct State {
    n: usize,
    amps: Vec<Complex64>,
}

impl State {
    pub fn zero(n: usize) -> State {
        assert!(n <= 26, "statevector oracle is for small circuits");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        State { n, amps }
    }

    pub fn basis(n: usize, index: usize) -> State {
        let mut s = State::zero(n);
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies a unitary gate; measures and barriers are no-ops here.
    pub fn apply(&mut self, gate: &Gate) {
        match gate.kind {
            GateKind::Barrier | GateKind::Measure | GateKind::Id => {}
            GateKind::X => self.apply_1q(gate.qubits[0], &mat_x()),
            GateKind::Y => self.apply_1q(gate.qubits[0], &mat_y()),
            GateKind::Z => self.phase_1q(gate.qubits[0], Complex64::new(-1.0, 0.0)),
            GateKind::H => self.apply_1q(gate.qubits[0], &mat_h()),
            GateKind::S => self.phase_1q(gate.qubits[0], Complex64::new(0.0, 1.0)),
            GateKind::Sdg => self.phase_1q(gate.qubits[0], Complex64::new(0.0, -1.0)),
            GateKind::T => self.phase_1q(gate.qubits[0], Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
            GateKind::Tdg => self.phase_1q(gate.qubits[0], Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)),
            GateKind::Sx => self.apply_1q(gate.qubits[0], &mat_sx()),
            GateKind::Rx => self.apply_1q(gate.qubits[0], &mat_rx(gate.params[0])),
            GateKind::Ry => self.apply_1q(gate.qubits[0], &mat_ry(gate.params[0])),
            GateKind::Rz => self.apply_1q(gate.qubits[0], &mat_rz(gate.params[0])),
            GateKind::Cp => {
                let phase = Complex64::from_polar(1.0, gate.params[0]);
                self.controlled_phase(gate.qubits[0], gate.qubits[1], phase);
            }
            GateKind::Cx => self.controlled_1q(gate.qubits[0], gate.qubits[1], &mat_x()),
            GateKind::Cy => self.controlled_1q(gate.qubits[0], gate.qubits[1], &mat_y()),
            GateKind::Cz => self.controlled_phase(gate.qubits[0], gate.qubits[1], Complex64::new(-1.0, 0.0)),
            GateKind::Swap => self.swap(gate.qubits[0], gate.qubits[1]),
            GateKind::Ccx => self.ccx(gate.qubits[0], gate.qubits[1], gate.qubits[2]),
        }
    }

    fn apply_1q(&mut self, q: usize, m: &[[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn phase_1q(&mut self, q: usize, phase: Complex64) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                self.amps[i] *= phase;
            }
        }
    }

    fn controlled_1q(&mut self, c: usize, t: usize, m: &[[Complex64; 2]; 2]) {
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                let j = i | tb;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn controlled_phase(&mut self, a: usize, b: usize, phase: Complex64) {
        let mask = (1usize << a) | (1usize << b);
        for i in 0..self.amps.len() {
            if i & mask == mask {
                self.amps[i] *= phase;
            }
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                let j = (i & !ab) | bb;
                self.amps.swap(i, j);
            }
        }
    }

    fn ccx(&mut self, c0: usize, c1: usize, t: usize) {
        let (b0, b1, tb) = (1usize << c0, 1usize << c1, 1usize << t);
        for i in 0..self.amps.len() {
            if i & b0 != 0 && i & b1 != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }
}

/// Runs all unitary gates of a circuit on |0...0>.
pub fn run(circ: &Circuit) -> State {
    let mut state = State::zero(circ.num_qubits);
    for gate in circ.gates() {
        state.apply(gate);
    }
    state
}

/// Distribution over all qubits of a measure-free run.
pub fn qubit_distribution(circ: &Circuit) -> Vec<f64> {
    run(circ).probabilities()
}

/// Marginal distribution over `qubits` (in the given bit order) of a full
/// `n`-qubit probability vector.
pub fn marginal(probs: &[f64], n: usize, qubits: &[usize]) -> Vec<f64> {
    assert_eq!(probs.len(), 1 << n);
    let mut out = vec![0.0; 1 << qubits.len()];
    for (i, &p) in probs.iter().enumerate() {
        let mut key = 0usize;
        for (k, &q) in qubits.iter().enumerate() {
            key |= ((i >> q) & 1) << k;
        }
        out[key] += p;
    }
    out
}

/// Exact distribution over the classical bits, with proper projective
/// branching at each measure gate (gates after a measurement are handled
/// correctly).
pub fn clbit_distribution(circ: &Circuit) -> Vec<f64> {
    let measures = circ.gates().iter().filter(|g| g.is_measure()).count();
    assert!(measures <= 20, "too many measurements for exact branching");
    struct Branch {
        clbits: usize,
        weight: f64,
        state: State,
    }
    let mut branches = vec![Branch { clbits: 0, weight: 1.0, state: State::zero(circ.num_qubits) }];
    for gate in circ.gates() {
        if gate.is_measure() {
            let (q, c) = (gate.qubits[0], gate.clbits[0]);
            let bit = 1usize << q;
            let mut next = Vec::with_capacity(branches.len() * 2);
            for branch in branches {
                let p1: f64 = branch
                    .state
                    .amps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i & bit != 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum();
                for (outcome, p) in [(0usize, 1.0 - p1), (1usize, p1)] {
                    if p <= 1e-15 {
                        continue;
                    }
                    let mut projected = branch.state.clone();
                    let norm = p.sqrt();
                    for (i, amp) in projected.amps.iter_mut().enumerate() {
                        if ((i & bit != 0) as usize) == outcome {
                            *amp /= norm;
                        } else {
                            *amp = Complex64::new(0.0, 0.0);
                        }
                    }
                    let clbits = (branch.clbits & !(1 << c)) | (outcome << c);
                    next.push(Branch { clbits, weight: branch.weight * p, state: projected });
                }
            }
            branches = next;
        } else {
            for branch in &mut branches {
                branch.state.apply(gate);
            }
        }
    }
    let mut dist = vec![0.0; 1 << circ.num_clbits];
    for branch in branches {
        dist[branch.clbits] += branch.weight;
    }
    dist
}

/// Total variation distance between two distributions.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Total variation distance between the measurement distribution of the
/// original circuit and of its routed counterpart.
///
/// With measure gates present, classical bits line up by construction and
/// the clbit distributions are compared. Otherwise the routed full
/// distribution is marginalized over the physical positions of the logical
/// qubits (final layout order).
pub fn routed_tv_distance(original: &Circuit, routed: &RoutedCircuit) -> f64 {
    let has_measures = original.gates().iter().any(|g| g.is_measure());
    if has_measures {
        let p = clbit_distribution(original);
        let q = clbit_distribution(&routed.circuit);
        tv_distance(&p, &q)
    } else {
        let p = qubit_distribution(original);
        let full = qubit_distribution(&routed.circuit);
        let positions: Vec<usize> =
            (0..original.num_qubits).map(|l| routed.final_layout.phys(l)).collect();
        let q = marginal(&full, routed.circuit.num_qubits, &positions);
        tv_distance(&p, &q)
    }
}

/// True when the two circuits implement the same unitary up to a global
/// phase (compared column by column on all basis states).
pub fn unitary_equivalent(a: &Circuit, b: &Circuit, tol: f64) -> bool {
    assert_eq!(a.num_qubits, b.num_qubits);
    let dim = 1usize << a.num_qubits;
    let mut phase: Option<Complex64> = None;
    for col in 0..dim {
        let mut sa = State::basis(a.num_qubits, col);
        let mut sb = State::basis(b.num_qubits, col);
        for gate in a.gates() {
            sa.apply(gate);
        }
        for gate in b.gates() {
            sb.apply(gate);
        }
        for i in 0..dim {
            let (ua, ub) = (sa.amps[i], sb.amps[i]);
            match phase {
                None => {
                    if ua.norm() > 1e-9 || ub.norm() > 1e-9 {
                        if (ua.norm() - ub.norm()).abs() > tol {
                            return false;
                        }
                        phase = Some(ub / ua);
                    }
                }
                Some(lambda) => {
                    if (ub - lambda * ua).norm() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn mat_x() -> [[Complex64; 2]; 2] {
    let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[z, o], [o, z]]
}

fn mat_y() -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    [[z, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), z]]
}

fn mat_h() -> [[Complex64; 2]; 2] {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

fn mat_sx() -> [[Complex64; 2]; 2] {
    let p = Complex64::new(0.5, 0.5);
    let m = Complex64::new(0.5, -0.5);
    [[p, m], [m, p]]
}

fn mat_rx(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

fn mat_ry(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new((theta / 2.0).sin(), 0.0);
    [[c, -s], [s, c]]
}

fn mat_rz(theta: f64) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::from_polar(1.0, -theta / 2.0), z], [z, Complex64::from_polar(1.0, theta / 2.0)]]
}

/// u3 gate matrix, for checking Euler-angle rewrites in tests.
pub fn mat_u3(theta: f64, phi: f64, lam: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lam)],
        [Complex64::from_polar(s, phi), Complex64::from_polar(c, lam + phi)],
    ]
}

/// Applies a raw 2x2 matrix to one qubit; test helper for u3 checks.
pub fn apply_matrix(state: &mut State, q: usize, m: &[[Complex64; 2]; 2]) {
    state.apply_1q(q, m);
}
