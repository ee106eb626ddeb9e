//! Gate-level circuit IR.
//!
//! A [`Circuit`] is an ordered gate list over indexed qubits and classical
//! bits. Circuits are immutable once built (construction validates every
//! gate) and cheap to clone, so they can be shared freely across sweep
//! workers.

use std::fmt;

use crate::error::CircuitError;

/// The supported gate alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Id,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Rx,
    Ry,
    Rz,
    Cp,
    Cx,
    Cy,
    Cz,
    Swap,
    Ccx,
    Measure,
    Barrier,
}

impl GateKind {
    pub const ALL: [GateKind; 21] = [
        GateKind::Id,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Sx,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cp,
        GateKind::Cx,
        GateKind::Cy,
        GateKind::Cz,
        GateKind::Swap,
        GateKind::Ccx,
        GateKind::Measure,
        GateKind::Barrier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Id => "id",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Sx => "sx",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cp => "cp",
            GateKind::Cx => "cx",
            GateKind::Cy => "cy",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Ccx => "ccx",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Number of qubit operands. `None` for barrier (variadic).
    pub fn num_qubits(self) -> Option<usize> {
        match self {
            GateKind::Barrier => None,
            GateKind::Cp | GateKind::Cx | GateKind::Cy | GateKind::Cz | GateKind::Swap => Some(2),
            GateKind::Ccx => Some(3),
            _ => Some(1),
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Cp => 1,
            _ => 0,
        }
    }

    /// Diagonal in the computational basis (commutes with Z and measurement
    /// statistics on its qubits).
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Id
                | GateKind::Z
                | GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::Rz
                | GateKind::Cz
                | GateKind::Cp
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single gate application.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
    pub clbits: Vec<usize>,
}

impl Gate {
    /// Builds a validated gate. Barrier accepts any non-empty qubit list.
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<f64>) -> Result<Gate, CircuitError> {
        if kind == GateKind::Measure {
            return Err(CircuitError::MeasureShape);
        }
        if let Some(expected) = kind.num_qubits() {
            if qubits.len() != expected {
                return Err(CircuitError::QubitCount {
                    gate: kind.name().to_string(),
                    expected,
                    got: qubits.len(),
                });
            }
        } else if qubits.is_empty() {
            return Err(CircuitError::QubitCount {
                gate: kind.name().to_string(),
                expected: 1,
                got: 0,
            });
        }
        if kind.num_params() != params.len() {
            return Err(CircuitError::ParamCount {
                gate: kind.name().to_string(),
                expected: kind.num_params(),
                got: params.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateQubit(kind.name().to_string()));
            }
        }
        Ok(Gate { kind, qubits, params, clbits: Vec::new() })
    }

    pub fn measure(qubit: usize, clbit: usize) -> Gate {
        Gate { kind: GateKind::Measure, qubits: vec![qubit], params: Vec::new(), clbits: vec![clbit] }
    }

    pub fn barrier(qubits: Vec<usize>) -> Result<Gate, CircuitError> {
        Gate::new(GateKind::Barrier, qubits, Vec::new())
    }

    pub fn is_barrier(&self) -> bool {
        self.kind == GateKind::Barrier
    }

    pub fn is_measure(&self) -> bool {
        self.kind == GateKind::Measure
    }

    /// True for proper unitary gates (everything except measure/barrier).
    pub fn is_unitary(&self) -> bool {
        !self.is_barrier() && !self.is_measure()
    }

    /// Unitary gate acting on exactly one qubit.
    pub fn is_one_qubit_gate(&self) -> bool {
        self.is_unitary() && self.qubits.len() == 1
    }

    /// Unitary gate acting on exactly two qubits.
    pub fn is_two_qubit_gate(&self) -> bool {
        self.is_unitary() && self.qubits.len() == 2
    }
}

/// Gate totals split the way the cost metrics consume them.
///
/// `ccx` is reported separately: three-qubit gates have no fidelity term in
/// the cost model and must be decomposed before metric evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCounts {
    pub n1q: usize,
    pub n2q: usize,
    pub ccx: usize,
    pub measures: usize,
    pub barriers: usize,
}

impl GateCounts {
    pub fn total_gates(&self) -> usize {
        self.n1q + self.n2q + self.ccx + self.measures
    }
}

/// Ordered gate list over `num_qubits` qubits and `num_clbits` classical bits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Circuit {
        Circuit { num_qubits, num_clbits, gates: Vec::new() }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after checking its indices against the registers.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        for &q in &gate.qubits {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange { index: q, num_qubits: self.num_qubits });
            }
        }
        for &c in &gate.clbits {
            if c >= self.num_clbits {
                return Err(CircuitError::ClbitOutOfRange { index: c, num_clbits: self.num_clbits });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Convenience push for unitary gates.
    pub fn add(&mut self, kind: GateKind, qubits: &[usize], params: &[f64]) -> Result<(), CircuitError> {
        self.push(Gate::new(kind, qubits.to_vec(), params.to_vec())?)
    }

    /// Rebuilds a circuit from an existing gate list (used by passes).
    pub fn with_gates(num_qubits: usize, num_clbits: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(num_qubits, num_clbits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Critical-path length. Barriers are synchronization fences of zero
    /// depth; measures count as depth-1 operations. Two measures writing the
    /// same classical bit are serialized.
    pub fn depth(&self) -> usize {
        let mut qubit_front = vec![0usize; self.num_qubits];
        let mut clbit_front = vec![0usize; self.num_clbits];
        let mut depth = 0usize;
        for gate in &self.gates {
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
            for &q in &gate.qubits {
                qubit_front[q] = level + 1;
            }
            for &c in &gate.clbits {
                clbit_front[c] = level + 1;
            }
            depth = depth.max(level + 1);
        }
        depth
    }

    /// Counts gates by class; see [`GateCounts`].
    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for gate in &self.gates {
            match gate.kind {
                GateKind::Barrier => counts.barriers += 1,
                GateKind::Measure => counts.measures += 1,
                GateKind::Ccx => counts.ccx += 1,
                _ if gate.qubits.len() == 2 => counts.n2q += 1,
                _ => counts.n1q += 1,
            }
        }
        counts
    }

    /// Total gate count excluding barriers (the `G` of the overhead metrics).
    pub fn gate_total(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_barrier()).count()
    }
}
