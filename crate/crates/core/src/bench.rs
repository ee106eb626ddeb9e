//! Built-in benchmark circuit generators: algorithmic (ghz, qft, grover),
//! variational (qaoa), volumetric/random (quantum_volume, random),
//! arithmetic (adder), and error-correction encoders (repetition, Shor,
//! Steane, surface code).
//!
//! Generators are pure and deterministic per (family, size, seed, layers);
//! seeded families are bit-reproducible.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::BenchError;
use crate::rng::SplitMix64;

/// Seed used for seeded families in the default suite.
pub const SUITE_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchFamily {
    Ghz,
    Qft,
    Qaoa,
    Grover,
    QuantumVolume,
    Random,
    Adder,
    RepetitionCode,
    ShorCode,
    SteaneCode,
    SurfaceCode,
}

impl BenchFamily {
    pub const ALL: [BenchFamily; 11] = [
        BenchFamily::Ghz,
        BenchFamily::Qft,
        BenchFamily::Qaoa,
        BenchFamily::Grover,
        BenchFamily::QuantumVolume,
        BenchFamily::Random,
        BenchFamily::Adder,
        BenchFamily::RepetitionCode,
        BenchFamily::ShorCode,
        BenchFamily::SteaneCode,
        BenchFamily::SurfaceCode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchFamily::Ghz => "ghz",
            BenchFamily::Qft => "qft",
            BenchFamily::Qaoa => "qaoa",
            BenchFamily::Grover => "grover",
            BenchFamily::QuantumVolume => "quantum_volume",
            BenchFamily::Random => "random",
            BenchFamily::Adder => "adder",
            BenchFamily::RepetitionCode => "repetition_code",
            BenchFamily::ShorCode => "shor_code",
            BenchFamily::SteaneCode => "steane_code",
            BenchFamily::SurfaceCode => "surface_code",
        }
    }

    pub fn from_name(name: &str) -> Option<BenchFamily> {
        BenchFamily::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn needs_seed(self) -> bool {
        matches!(self, BenchFamily::Qaoa | BenchFamily::QuantumVolume | BenchFamily::Random)
    }
}

/// Identifier of one benchmark instance; `size` is the qubit count (problem
/// size for grover, code distance for the surface code).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BenchmarkId {
    pub family: BenchFamily,
    pub size: usize,
    pub seed: Option<u64>,
    pub layers: Option<usize>,
}

impl BenchmarkId {
    pub fn new(family: BenchFamily, size: usize) -> BenchmarkId {
        BenchmarkId { family, size, seed: None, layers: None }
    }

    pub fn seeded(family: BenchFamily, size: usize, seed: u64) -> BenchmarkId {
        BenchmarkId { family, size, seed: Some(seed), layers: None }
    }

    /// Parses the `family:size[:seed[:layers]]` form.
    pub fn parse(text: &str) -> Result<BenchmarkId, BenchError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() < 2 || parts.len() > 4 {
            return Err(BenchError::BadId(text.to_string()));
        }
        let family =
            BenchFamily::from_name(parts[0]).ok_or_else(|| BenchError::UnknownFamily(parts[0].to_string()))?;
        let size: usize = parts[1].parse().map_err(|_| BenchError::BadId(text.to_string()))?;
        let seed = match parts.get(2) {
            Some(s) => Some(s.parse::<u64>().map_err(|_| BenchError::BadId(text.to_string()))?),
            None => None,
        };
        let layers = match parts.get(3) {
            Some(s) => Some(s.parse::<usize>().map_err(|_| BenchError::BadId(text.to_string()))?),
            None => None,
        };
        Ok(BenchmarkId { family, size, seed, layers })
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.name(), self.size)?;
        if let Some(seed) = self.seed {
            write!(f, ":{seed}")?;
            if let Some(layers) = self.layers {
                write!(f, ":{layers}")?;
            }
        }
        Ok(())
    }
}

/// Generates the circuit for a benchmark id.
pub fn generate(id: &BenchmarkId) -> Result<Circuit, BenchError> {
    let unsupported =
        || BenchError::UnsupportedSize { family: id.family.name().to_string(), size: id.size };
    if id.family.needs_seed() && id.seed.is_none() {
        return Err(BenchError::MissingSeed { family: id.family.name().to_string() });
    }
    match id.family {
        BenchFamily::Ghz => {
            if id.size < 1 {
                return Err(unsupported());
            }
            Ok(ghz(id.size))
        }
        BenchFamily::Qft => {
            if id.size < 1 {
                return Err(unsupported());
            }
            Ok(qft(id.size))
        }
        BenchFamily::Qaoa => {
            if id.size < 4 || !id.size.is_multiple_of(2) {
                return Err(unsupported());
            }
            Ok(qaoa(id.size, id.layers.unwrap_or(1), id.seed.unwrap()))
        }
        BenchFamily::Grover => {
            if id.size < 2 {
                return Err(unsupported());
            }
            Ok(grover(id.size))
        }
        BenchFamily::QuantumVolume => {
            if id.size < 2 {
                return Err(unsupported());
            }
            Ok(quantum_volume(id.size, id.seed.unwrap()))
        }
        BenchFamily::Random => {
            if id.size < 2 {
                return Err(unsupported());
            }
            Ok(random_circuit(id.size, id.layers.unwrap_or(10), id.seed.unwrap()))
        }
        BenchFamily::Adder => match id.size {
            2 | 4 => Ok(adder(id.size)),
            _ => Err(unsupported()),
        },
        BenchFamily::RepetitionCode => {
            if id.size < 2 {
                return Err(unsupported());
            }
            Ok(repetition_code(id.size))
        }
        BenchFamily::ShorCode => {
            if id.size != 9 {
                return Err(unsupported());
            }
            Ok(shor_code())
        }
        BenchFamily::SteaneCode => {
            if id.size != 7 {
                return Err(unsupported());
            }
            Ok(steane_code())
        }
        BenchFamily::SurfaceCode => {
            if id.size != 3 {
                return Err(unsupported());
            }
            Ok(surface_code_d3())
        }
    }
}

/// The default sweep suite (18 entries).
pub fn list_suite() -> Vec<BenchmarkId> {
    let mut suite = Vec::new();
    for n in [3, 8, 16] {
        suite.push(BenchmarkId::new(BenchFamily::Ghz, n));
    }
    for n in [4, 8, 16] {
        suite.push(BenchmarkId::new(BenchFamily::Qft, n));
    }
    suite.push(BenchmarkId { family: BenchFamily::Qaoa, size: 8, seed: Some(SUITE_SEED), layers: Some(1) });
    suite.push(BenchmarkId { family: BenchFamily::Qaoa, size: 16, seed: Some(SUITE_SEED), layers: Some(2) });
    for n in [4, 8] {
        suite.push(BenchmarkId::new(BenchFamily::Grover, n));
    }
    suite.push(BenchmarkId::seeded(BenchFamily::QuantumVolume, 8, SUITE_SEED));
    suite.push(BenchmarkId::seeded(BenchFamily::Random, 8, SUITE_SEED));
    suite.push(BenchmarkId::seeded(BenchFamily::Random, 16, SUITE_SEED));
    suite.push(BenchmarkId::new(BenchFamily::Adder, 4));
    suite.push(BenchmarkId::new(BenchFamily::RepetitionCode, 3));
    suite.push(BenchmarkId::new(BenchFamily::ShorCode, 9));
    suite.push(BenchmarkId::new(BenchFamily::SteaneCode, 7));
    suite.push(BenchmarkId::new(BenchFamily::SurfaceCode, 3));
    suite
}

fn ghz(n: usize) -> Circuit {
    let mut c = Circuit::new(n, 0);
    c.add(GateKind::H, &[0], &[]).expect("ghz");
    for i in 0..n.saturating_sub(1) {
        c.add(GateKind::Cx, &[i, i + 1], &[]).expect("ghz");
    }
    c
}

/// Textbook QFT: per qubit a Hadamard and a controlled-phase ladder,
/// followed by floor(n/2) reversal swaps.
fn qft(n: usize) -> Circuit {
    let mut c = Circuit::new(n, 0);
    for i in 0..n {
        c.add(GateKind::H, &[i], &[]).expect("qft");
        for j in (i + 1)..n {
            let angle = PI / (1 << (j - i)) as f64;
            c.add(GateKind::Cp, &[j, i], &[angle]).expect("qft");
        }
    }
    for i in 0..n / 2 {
        c.add(GateKind::Swap, &[i, n - 1 - i], &[]).expect("qft");
    }
    c
}

/// Seeded random 3-regular graph via the pairing model, rejecting self
/// loops and duplicate edges.
fn random_3_regular(n: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    'attempt: loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
        rng.shuffle(&mut stubs);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(3 * n / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || edges.contains(&(a, b)) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        edges.sort_unstable();
        return edges;
    }
}

/// MaxCut QAOA on a seeded random 3-regular instance: Hadamard wall, then
/// per layer a cx-rz-cx phase separator per edge and an rx mixer per qubit.
fn qaoa(n: usize, layers: usize, seed: u64) -> Circuit {
    let mut rng = SplitMix64::new(seed);
    let edges = random_3_regular(n, &mut rng);
    let mut c = Circuit::new(n, 0);
    for q in 0..n {
        c.add(GateKind::H, &[q], &[]).expect("qaoa");
    }
    for _ in 0..layers.max(1) {
        let gamma = rng.next_f64() * TAU;
        let beta = rng.next_f64() * PI;
        for &(u, v) in &edges {
            c.add(GateKind::Cx, &[u, v], &[]).expect("qaoa");
            c.add(GateKind::Rz, &[v], &[gamma]).expect("qaoa");
            c.add(GateKind::Cx, &[u, v], &[]).expect("qaoa");
        }
        for q in 0..n {
            c.add(GateKind::Rx, &[q], &[beta]).expect("qaoa");
        }
    }
    c
}

/// Multi-controlled X via a ccx compute/uncompute ladder; `ancilla_base` is
/// the index of the first of `controls.len() - 2` ancilla qubits.
fn mcx(c: &mut Circuit, controls: &[usize], target: usize, ancilla_base: usize) {
    match controls.len() {
        0 => c.add(GateKind::X, &[target], &[]).expect("mcx"),
        1 => c.add(GateKind::Cx, &[controls[0], target], &[]).expect("mcx"),
        2 => c.add(GateKind::Ccx, &[controls[0], controls[1], target], &[]).expect("mcx"),
        k => {
            let mut ladder = Vec::new();
            c.add(GateKind::Ccx, &[controls[0], controls[1], ancilla_base], &[]).expect("mcx");
            ladder.push((controls[0], controls[1], ancilla_base));
            for (i, &control) in controls.iter().enumerate().take(k - 1).skip(2) {
                let anc = ancilla_base + i - 1;
                c.add(GateKind::Ccx, &[control, anc - 1, anc], &[]).expect("mcx");
                ladder.push((control, anc - 1, anc));
            }
            c.add(GateKind::Ccx, &[controls[k - 1], ancilla_base + k - 3, target], &[]).expect("mcx");
            for &(a, b, t) in ladder.iter().rev() {
                c.add(GateKind::Ccx, &[a, b, t], &[]).expect("mcx");
            }
        }
    }
}

/// Phase flip on |1...1> of the search register.
fn mcz(c: &mut Circuit, search: usize, ancilla_base: usize) {
    let target = search - 1;
    let controls: Vec<usize> = (0..search - 1).collect();
    c.add(GateKind::H, &[target], &[]).expect("mcz");
    mcx(c, &controls, target, ancilla_base);
    c.add(GateKind::H, &[target], &[]).expect("mcz");
}

/// One Grover iteration over an n-qubit search register; the ccx ladder
/// adds max(0, n-3) ancilla qubits.
fn grover(n: usize) -> Circuit {
    let ancillas = n.saturating_sub(3);
    let mut c = Circuit::new(n + ancillas, 0);
    for q in 0..n {
        c.add(GateKind::H, &[q], &[]).expect("grover");
    }
    // Oracle marking |1...1>.
    mcz(&mut c, n, n);
    // Diffusion operator.
    for q in 0..n {
        c.add(GateKind::H, &[q], &[]).expect("grover");
    }
    for q in 0..n {
        c.add(GateKind::X, &[q], &[]).expect("grover");
    }
    mcz(&mut c, n, n);
    for q in 0..n {
        c.add(GateKind::X, &[q], &[]).expect("grover");
    }
    for q in 0..n {
        c.add(GateKind::H, &[q], &[]).expect("grover");
    }
    c
}

/// Quantum-volume style model circuit: n layers of randomly permuted
/// two-qubit blocks, each block a generic 3-cx template with seeded angles.
fn quantum_volume(n: usize, seed: u64) -> Circuit {
    let mut rng = SplitMix64::new(seed);
    let mut c = Circuit::new(n, 0);
    let euler = |c: &mut Circuit, q: usize, rng: &mut SplitMix64| {
        c.add(GateKind::Rz, &[q], &[rng.next_f64() * TAU]).expect("qv");
        c.add(GateKind::Ry, &[q], &[rng.next_f64() * TAU]).expect("qv");
        c.add(GateKind::Rz, &[q], &[rng.next_f64() * TAU]).expect("qv");
    };
    for _ in 0..n {
        let mut perm: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut perm);
        for pair in perm.chunks(2) {
            if pair.len() < 2 {
                continue;
            }
            let (a, b) = (pair[0], pair[1]);
            euler(&mut c, a, &mut rng);
            euler(&mut c, b, &mut rng);
            c.add(GateKind::Cx, &[a, b], &[]).expect("qv");
            c.add(GateKind::Rz, &[a], &[rng.next_f64() * TAU]).expect("qv");
            c.add(GateKind::Ry, &[b], &[rng.next_f64() * TAU]).expect("qv");
            c.add(GateKind::Cx, &[b, a], &[]).expect("qv");
            c.add(GateKind::Ry, &[b], &[rng.next_f64() * TAU]).expect("qv");
            c.add(GateKind::Cx, &[a, b], &[]).expect("qv");
            euler(&mut c, a, &mut rng);
            euler(&mut c, b, &mut rng);
        }
    }
    c
}

/// Uniform gate soup: `depth_factor * n` gates drawn from a fixed pool with
/// random qubits and angles.
fn random_circuit(n: usize, depth_factor: usize, seed: u64) -> Circuit {
    const POOL_1Q: [GateKind; 10] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::T,
        GateKind::Sx,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
    ];
    const POOL_2Q: [GateKind; 5] = [GateKind::Cx, GateKind::Cy, GateKind::Cz, GateKind::Swap, GateKind::Cp];
    let mut rng = SplitMix64::new(seed);
    let mut c = Circuit::new(n, 0);
    for _ in 0..depth_factor.max(1) * n {
        if rng.next_f64() < 0.5 {
            let kind = POOL_1Q[rng.gen_index(POOL_1Q.len())];
            let params = (0..kind.num_params()).map(|_| rng.next_f64() * TAU).collect::<Vec<_>>();
            let q = rng.gen_index(n);
            c.add(kind, &[q], &params).expect("random 1q");
        } else {
            let kind = POOL_2Q[rng.gen_index(POOL_2Q.len())];
            let params = (0..kind.num_params()).map(|_| rng.next_f64() * TAU).collect::<Vec<_>>();
            let a = rng.gen_index(n);
            let mut b = rng.gen_index(n - 1);
            if b >= a {
                b += 1;
            }
            c.add(kind, &[a, b], &params).expect("random 2q");
        }
    }
    c
}

/// Ripple-carry modular adder block on two k-bit registers (b += a mod 2^k).
/// Qubit layout: a = [0..k), b = [k..2k), low bit first.
fn adder(n: usize) -> Circuit {
    let mut c = Circuit::new(n, 0);
    match n {
        2 => {
            c.add(GateKind::Cx, &[0, 1], &[]).expect("adder");
        }
        4 => {
            c.add(GateKind::Ccx, &[0, 2, 3], &[]).expect("adder"); // carry a0 b0 -> b1
            c.add(GateKind::Cx, &[0, 2], &[]).expect("adder"); // b0 ^= a0
            c.add(GateKind::Cx, &[1, 3], &[]).expect("adder"); // b1 ^= a1
        }
        _ => unreachable!("validated by generate"),
    }
    c
}

/// Bit-flip repetition-code encoder: a cx chain over d qubits.
fn repetition_code(d: usize) -> Circuit {
    let mut c = Circuit::new(d, 0);
    for i in 0..d - 1 {
        c.add(GateKind::Cx, &[i, i + 1], &[]).expect("repetition");
    }
    c
}

/// Standard 9-qubit Shor-code encoder.
fn shor_code() -> Circuit {
    let mut c = Circuit::new(9, 0);
    c.add(GateKind::Cx, &[0, 3], &[]).expect("shor");
    c.add(GateKind::Cx, &[0, 6], &[]).expect("shor");
    for q in [0, 3, 6] {
        c.add(GateKind::H, &[q], &[]).expect("shor");
    }
    for base in [0, 3, 6] {
        c.add(GateKind::Cx, &[base, base + 1], &[]).expect("shor");
        c.add(GateKind::Cx, &[base, base + 2], &[]).expect("shor");
    }
    c
}

/// Standard 7-qubit Steane-code encoder.
fn steane_code() -> Circuit {
    let mut c = Circuit::new(7, 0);
    for q in [4, 5, 6] {
        c.add(GateKind::H, &[q], &[]).expect("steane");
    }
    let cxs = [
        (0, 1),
        (0, 2),
        (6, 3),
        (6, 1),
        (6, 0),
        (5, 3),
        (5, 2),
        (5, 0),
        (4, 3),
        (4, 2),
        (4, 1),
    ];
    for (a, b) in cxs {
        c.add(GateKind::Cx, &[a, b], &[]).expect("steane");
    }
    c
}

/// One stabilizer-measurement cycle of the distance-3 rotated surface code:
/// 9 data qubits (row-major 3x3), 4 X ancillas, 4 Z ancillas, 8 readouts.
fn surface_code_d3() -> Circuit {
    let mut c = Circuit::new(17, 8);
    let x_stabs: [&[usize]; 4] = [&[0, 1], &[1, 2, 4, 5], &[3, 4, 6, 7], &[7, 8]];
    let z_stabs: [&[usize]; 4] = [&[0, 1, 3, 4], &[4, 5, 7, 8], &[3, 6], &[2, 5]];
    for (i, stab) in x_stabs.iter().enumerate() {
        let anc = 9 + i;
        c.add(GateKind::H, &[anc], &[]).expect("surface");
        for &d in *stab {
            c.add(GateKind::Cx, &[anc, d], &[]).expect("surface");
        }
        c.add(GateKind::H, &[anc], &[]).expect("surface");
        c.push(Gate::measure(anc, i)).expect("surface");
    }
    for (i, stab) in z_stabs.iter().enumerate() {
        let anc = 13 + i;
        for &d in *stab {
            c.add(GateKind::Cx, &[d, anc], &[]).expect("surface");
        }
        c.push(Gate::measure(anc, 4 + i)).expect("surface");
    }
    c
}
