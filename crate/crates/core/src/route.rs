//! Swap routing: making every two-qubit gate act on a coupled pair.
//!
//! Two interchangeable routers are provided behind the [`Router`] trait:
//! a deterministic SABRE-style look-ahead heuristic and a seeded stochastic
//! router. Both consume a logical circuit plus an initial layout and emit a
//! physical circuit with inserted swap gates.

use std::collections::BTreeSet;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::MapError;
use crate::layout::Layout;
use crate::rng::SplitMix64;
use crate::topology::{CouplingGraph, DistanceMatrix};

/// A routed circuit on physical qubits, together with the layouts before and
/// after the inserted swap network.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    pub circuit: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub swaps_added: usize,
}

impl RoutedCircuit {
    /// True when every two-qubit gate in the circuit acts on a device edge.
    pub fn respects_coupling(&self, graph: &CouplingGraph) -> bool {
        self.circuit
            .gates()
            .iter()
            .filter(|g| g.is_two_qubit_gate())
            .all(|g| graph.has_edge(g.qubits[0], g.qubits[1]))
    }
}

/// A swap-insertion strategy, selectable by name.
pub trait Router: Send + Sync {
    fn name(&self) -> &'static str;

    fn route(
        &self,
        circ: &Circuit,
        init: &Layout,
        graph: &CouplingGraph,
        dists: &DistanceMatrix,
        seed: u64,
        trials: usize,
    ) -> Result<RoutedCircuit, MapError>;
}

/// All registered routers.
pub fn routers() -> Vec<Box<dyn Router>> {
    vec![Box::new(SabreRouter), Box::new(StochasticRouter)]
}

pub fn router_by_name(name: &str) -> Result<Box<dyn Router>, MapError> {
    routers()
        .into_iter()
        .find(|r| r.name() == name)
        .ok_or_else(|| MapError::UnknownRoutingMethod(name.to_string()))
}

/// SABRE-style look-ahead router.
pub struct SabreRouter;

impl Router for SabreRouter {
    fn name(&self) -> &'static str {
        "sabre"
    }

    fn route(
        &self,
        circ: &Circuit,
        init: &Layout,
        graph: &CouplingGraph,
        dists: &DistanceMatrix,
        _seed: u64,
        _trials: usize,
    ) -> Result<RoutedCircuit, MapError> {
        route_sabre(circ, init, graph, dists)
    }
}

/// Randomized router with softmax-by-distance-improvement sampling and
/// best-of-trials selection.
pub struct StochasticRouter;

impl Router for StochasticRouter {
    fn name(&self) -> &'static str {
        "stochastic"
    }

    fn route(
        &self,
        circ: &Circuit,
        init: &Layout,
        graph: &CouplingGraph,
        dists: &DistanceMatrix,
        seed: u64,
        trials: usize,
    ) -> Result<RoutedCircuit, MapError> {
        route_stochastic(circ, init, graph, dists, seed, trials)
    }
}

/// Look-ahead window over upcoming two-qubit gates.
const EXTENDED_SET_SIZE: usize = 20;
/// Weight of the extended-set term in the swap score.
const EXTENDED_SET_WEIGHT: f64 = 0.5;
/// Multiplicative per-qubit decay discouraging back-to-back swaps.
const DECAY_FACTOR: f64 = 1.001;
/// Decay state resets after this many swaps.
const DECAY_RESET_INTERVAL: usize = 5;

struct Mapping {
    phys_of: Vec<usize>,
    logical_at: Vec<Option<usize>>,
}

impl Mapping {
    fn new(init: &Layout, device_qubits: usize) -> Mapping {
        let phys_of = init.as_slice().to_vec();
        let mut logical_at = vec![None; device_qubits];
        for (l, &p) in phys_of.iter().enumerate() {
            logical_at[p] = Some(l);
        }
        Mapping { phys_of, logical_at }
    }

    fn swap_physical(&mut self, a: usize, b: usize) {
        let la = self.logical_at[a];
        let lb = self.logical_at[b];
        self.logical_at[a] = lb;
        self.logical_at[b] = la;
        if let Some(l) = la {
            self.phys_of[l] = b;
        }
        if let Some(l) = lb {
            self.phys_of[l] = a;
        }
    }

    fn map_gate(&self, gate: &Gate) -> Gate {
        let mut mapped = gate.clone();
        for q in &mut mapped.qubits {
            *q = self.phys_of[*q];
        }
        if mapped.is_barrier() {
            mapped.qubits.sort_unstable();
        }
        mapped
    }
}

/// Deterministic SABRE routing from a fixed initial layout.
///
/// While the front layer holds non-adjacent two-qubit gates, the candidate
/// swap minimizing
/// `max(decay) * (mean front distance + 0.5 * mean extended-set distance)`
/// is applied; ties break toward the lowest edge index. If no gate executes
/// for an extended stretch, the router falls back to walking the oldest
/// front gate along a shortest path, which guarantees termination.
pub fn route_sabre(
    circ: &Circuit,
    init: &Layout,
    graph: &CouplingGraph,
    dists: &DistanceMatrix,
) -> Result<RoutedCircuit, MapError> {
    init.check(circ, graph)?;
    let gates = circ.gates();
    let n_gates = gates.len();
    let device_n = graph.num_qubits();

    // Per-resource predecessor DAG (qubits plus clbits for measures).
    let mut preds = vec![0usize; n_gates];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n_gates];
    {
        let mut last: Vec<Option<usize>> = vec![None; circ.num_qubits + circ.num_clbits];
        for (i, gate) in gates.iter().enumerate() {
            let resources = gate
                .qubits
                .iter()
                .copied()
                .chain(gate.clbits.iter().map(|&c| circ.num_qubits + c));
            for r in resources {
                if let Some(p) = last[r] {
                    if !succs[p].contains(&i) {
                        succs[p].push(i);
                        preds[i] += 1;
                    }
                }
                last[r] = Some(i);
            }
        }
    }

    let mut front: BTreeSet<usize> = (0..n_gates).filter(|&i| preds[i] == 0).collect();
    let mut executed = vec![false; n_gates];
    let mut mapping = Mapping::new(init, device_n);
    let mut out: Vec<Gate> = Vec::with_capacity(n_gates);
    let mut decay = vec![1.0f64; device_n];
    let mut swaps_added = 0usize;
    let mut swaps_since_reset = 0usize;
    let mut swaps_since_progress = 0usize;
    let stall_limit = 4 * device_n + 32;

    let executable = |gate: &Gate, mapping: &Mapping| -> bool {
        if gate.qubits.len() != 2 || !gate.is_unitary() {
            return true;
        }
        dists.get(mapping.phys_of[gate.qubits[0]], mapping.phys_of[gate.qubits[1]]) == 1
    };

    loop {
        // Drain everything executable, lowest index first.
        let mut progressed = true;
        while progressed {
            progressed = false;
            let ready: Vec<usize> =
                front.iter().copied().filter(|&g| executable(&gates[g], &mapping)).collect();
            for g in ready {
                front.remove(&g);
                executed[g] = true;
                out.push(mapping.map_gate(&gates[g]));
                for &s in &succs[g] {
                    preds[s] -= 1;
                    if preds[s] == 0 {
                        front.insert(s);
                    }
                }
                progressed = true;
                swaps_since_progress = 0;
            }
        }
        if front.is_empty() {
            break;
        }

        // Remaining front gates are all blocked two-qubit gates.
        let front_pairs: Vec<(usize, usize)> = front
            .iter()
            .map(|&g| (mapping.phys_of[gates[g].qubits[0]], mapping.phys_of[gates[g].qubits[1]]))
            .collect();

        let swap = if swaps_since_progress >= stall_limit {
            shortest_path_step(front_pairs[0], dists, graph)
        } else {
            let extended = extended_set(gates, &executed, &front);
            choose_sabre_swap(&front_pairs, &extended, &mapping, graph, dists, &decay)
        };
        let (a, b) = swap;
        out.push(Gate::new(GateKind::Swap, vec![a, b], vec![]).expect("swap gate"));
        mapping.swap_physical(a, b);
        swaps_added += 1;
        swaps_since_progress += 1;
        decay[a] *= DECAY_FACTOR;
        decay[b] *= DECAY_FACTOR;
        swaps_since_reset += 1;
        if swaps_since_reset == DECAY_RESET_INTERVAL {
            swaps_since_reset = 0;
            decay.iter_mut().for_each(|d| *d = 1.0);
        }
    }

    let final_layout = Layout::from_map(mapping.phys_of.clone(), device_n)?;
    let circuit = Circuit::with_gates(device_n, circ.num_clbits, out)?;
    Ok(RoutedCircuit { circuit, initial_layout: init.clone(), final_layout, swaps_added })
}

/// Next up-to-20 unexecuted two-qubit gates beyond the front layer, in
/// program order (logical qubit pairs).
fn extended_set(gates: &[Gate], executed: &[bool], front: &BTreeSet<usize>) -> Vec<(usize, usize)> {
    let mut set = Vec::new();
    for (i, gate) in gates.iter().enumerate() {
        if executed[i] || front.contains(&i) || !gate.is_two_qubit_gate() {
            continue;
        }
        set.push((gate.qubits[0], gate.qubits[1]));
        if set.len() == EXTENDED_SET_SIZE {
            break;
        }
    }
    set
}

fn choose_sabre_swap(
    front_pairs: &[(usize, usize)],
    extended: &[(usize, usize)],
    mapping: &Mapping,
    graph: &CouplingGraph,
    dists: &DistanceMatrix,
    decay: &[f64],
) -> (usize, usize) {
    let active: BTreeSet<usize> = front_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut best: Option<((usize, usize), f64)> = None;
    for &(a, b) in graph.edges() {
        if !active.contains(&a) && !active.contains(&b) {
            continue;
        }
        let remap = |p: usize| {
            if p == a {
                b
            } else if p == b {
                a
            } else {
                p
            }
        };
        let front_sum: f64 = front_pairs
            .iter()
            .map(|&(pa, pb)| dists.get(remap(pa), remap(pb)) as f64)
            .sum();
        let mut score = front_sum / front_pairs.len() as f64;
        if !extended.is_empty() {
            let ext_sum: f64 = extended
                .iter()
                .map(|&(la, lb)| {
                    dists.get(remap(mapping.phys_of[la]), remap(mapping.phys_of[lb])) as f64
                })
                .sum();
            score += EXTENDED_SET_WEIGHT * ext_sum / extended.len() as f64;
        }
        score *= decay[a].max(decay[b]);
        if best.as_ref().is_none_or(|&(_, s)| score < s) {
            best = Some(((a, b), score));
        }
    }
    best.expect("connected device always offers a candidate swap").0
}

/// First swap along a shortest path between the endpoints of a blocked pair.
fn shortest_path_step(
    (pa, pb): (usize, usize),
    dists: &DistanceMatrix,
    graph: &CouplingGraph,
) -> (usize, usize) {
    let d = dists.get(pa, pb);
    let adj = graph.adjacency();
    let step = adj[pa]
        .iter()
        .copied()
        .find(|&v| dists.get(v, pb) == d - 1)
        .expect("shortest path has a next hop");
    (pa.min(step), pa.max(step))
}

/// Stochastic routing: for each trial, walk the gate list in order and, while
/// the earliest unresolved two-qubit gate is non-adjacent, sample a swap from
/// the edges incident to its endpoints with probability proportional to
/// `exp(-delta_distance)`. The trial with the fewest swaps wins (ties: lower
/// depth, then lower trial index).
pub fn route_stochastic(
    circ: &Circuit,
    init: &Layout,
    graph: &CouplingGraph,
    dists: &DistanceMatrix,
    seed: u64,
    trials: usize,
) -> Result<RoutedCircuit, MapError> {
    init.check(circ, graph)?;
    assert!(trials >= 1, "stochastic routing needs at least one trial");
    let device_n = graph.num_qubits();
    let swap_cap = 200 * (circ.gates().len() + 8) * (device_n + 8);

    let mut best: Option<(usize, usize, RoutedCircuit)> = None;
    for trial in 0..trials as u64 {
        let mut rng = SplitMix64::new(seed.wrapping_add(trial));
        let mut mapping = Mapping::new(init, device_n);
        let mut out: Vec<Gate> = Vec::with_capacity(circ.gates().len());
        let mut swaps = 0usize;
        let mut aborted = false;

        'gates: for gate in circ.gates() {
            if gate.is_two_qubit_gate() {
                loop {
                    let pa = mapping.phys_of[gate.qubits[0]];
                    let pb = mapping.phys_of[gate.qubits[1]];
                    let before = dists.get(pa, pb);
                    if before == 1 {
                        break;
                    }
                    let candidates: Vec<(usize, usize)> = graph
                        .edges()
                        .iter()
                        .copied()
                        .filter(|&(u, v)| u == pa || v == pa || u == pb || v == pb)
                        .collect();
                    let weights: Vec<f64> = candidates
                        .iter()
                        .map(|&(u, v)| {
                            let remap = |p: usize| {
                                if p == u {
                                    v
                                } else if p == v {
                                    u
                                } else {
                                    p
                                }
                            };
                            let after = dists.get(remap(pa), remap(pb));
                            (-(after as f64 - before as f64)).exp()
                        })
                        .collect();
                    let (u, v) = candidates[rng.choose_weighted(&weights)];
                    out.push(Gate::new(GateKind::Swap, vec![u, v], vec![]).expect("swap gate"));
                    mapping.swap_physical(u, v);
                    swaps += 1;
                    if swaps > swap_cap {
                        aborted = true;
                        break 'gates;
                    }
                }
            }
            out.push(mapping.map_gate(gate));
        }
        if aborted {
            continue;
        }

        let circuit = Circuit::with_gates(device_n, circ.num_clbits, out)?;
        let depth = circuit.depth();
        let better = match &best {
            None => true,
            Some((bs, bd, _)) => swaps < *bs || (swaps == *bs && depth < *bd),
        };
        if better {
            let final_layout = Layout::from_map(mapping.phys_of.clone(), device_n)?;
            best = Some((
                swaps,
                depth,
                RoutedCircuit {
                    circuit,
                    initial_layout: init.clone(),
                    final_layout,
                    swaps_added: swaps,
                },
            ));
        }
    }
    best.map(|(_, _, rc)| rc).ok_or(MapError::RoutingStalled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::topology::{all_to_all, CouplingGraph};

    fn path(n: usize) -> CouplingGraph {
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        let coords = (0..n).map(|i| (i as f64, 0.0)).collect();
        CouplingGraph::new(n, edges, coords).unwrap()
    }

    fn identity_layout(k: usize, g: &CouplingGraph) -> Layout {
        Layout::from_map((0..k).collect(), g.num_qubits()).unwrap()
    }

    #[test]
    fn adjacent_gates_route_without_swaps() {
        let g = path(3);
        let d = g.distances().unwrap();
        let mut c = Circuit::new(3, 0);
        c.add(GateKind::H, &[0], &[]).unwrap();
        c.add(GateKind::Cx, &[0, 1], &[]).unwrap();
        c.add(GateKind::Cx, &[1, 2], &[]).unwrap();
        let init = identity_layout(3, &g);
        for router in routers() {
            let rc = router.route(&c, &init, &g, &d, 1, 4).unwrap();
            assert_eq!(rc.swaps_added, 0, "{}", router.name());
            assert_eq!(rc.circuit.gates().len(), 3);
            assert_eq!(rc.final_layout, init);
            assert!(rc.respects_coupling(&g));
        }
    }

    #[test]
    fn distant_cx_needs_exactly_one_swap_on_a_path() {
        // cx(0,2) on 0-1-2: no 0-swap solution exists, a 1-swap one does.
        let g = path(3);
        let d = g.distances().unwrap();
        let mut c = Circuit::new(3, 0);
        c.add(GateKind::Cx, &[0, 2], &[]).unwrap();
        let init = identity_layout(3, &g);
        for router in routers() {
            let rc = router.route(&c, &init, &g, &d, 3, 20).unwrap();
            assert_eq!(rc.swaps_added, 1, "{}", router.name());
            assert!(rc.respects_coupling(&g));
        }
    }

    #[test]
    fn final_layout_tracks_swap_permutation() {
        let g = path(4);
        let d = g.distances().unwrap();
        let mut c = Circuit::new(4, 0);
        c.add(GateKind::Cx, &[0, 3], &[]).unwrap();
        let init = identity_layout(4, &g);
        let rc = route_sabre(&c, &init, &g, &d).unwrap();
        assert!(rc.respects_coupling(&g));
        // Replay the emitted swaps over the initial layout.
        let mut mapping = Mapping::new(&init, 4);
        for gate in rc.circuit.gates() {
            if gate.kind == GateKind::Swap && !init_gate(&c, gate) {
                mapping.swap_physical(gate.qubits[0], gate.qubits[1]);
            }
        }
        assert_eq!(mapping.phys_of, rc.final_layout.as_slice());
    }

    // True when the swap already existed in the input circuit.
    fn init_gate(c: &Circuit, g: &Gate) -> bool {
        c.gates().iter().any(|orig| orig.kind == GateKind::Swap && orig == g)
    }

    #[test]
    fn routing_is_deterministic_per_seed() {
        let g = path(5);
        let d = g.distances().unwrap();
        let mut c = Circuit::new(5, 0);
        c.add(GateKind::Cx, &[0, 4], &[]).unwrap();
        c.add(GateKind::Cx, &[1, 3], &[]).unwrap();
        c.add(GateKind::Cx, &[0, 2], &[]).unwrap();
        let init = identity_layout(5, &g);
        for router in routers() {
            let a = router.route(&c, &init, &g, &d, 9, 8).unwrap();
            let b = router.route(&c, &init, &g, &d, 9, 8).unwrap();
            assert_eq!(a, b, "{}", router.name());
        }
    }

    #[test]
    fn measures_and_barriers_are_mapped_not_routed() {
        let g = path(3);
        let d = g.distances().unwrap();
        let mut c = Circuit::new(2, 2);
        c.add(GateKind::Cx, &[0, 1], &[]).unwrap();
        c.push(Gate::barrier(vec![0, 1]).unwrap()).unwrap();
        c.push(Gate::measure(0, 0)).unwrap();
        c.push(Gate::measure(1, 1)).unwrap();
        let init = Layout::from_map(vec![2, 1], 3).unwrap();
        let rc = route_sabre(&c, &init, &g, &d).unwrap();
        assert_eq!(rc.swaps_added, 0);
        let measures: Vec<_> = rc.circuit.gates().iter().filter(|g| g.is_measure()).collect();
        assert_eq!(measures[0].qubits, vec![2]);
        assert_eq!(measures[0].clbits, vec![0]);
        assert_eq!(measures[1].qubits, vec![1]);
    }

    #[test]
    fn all_to_all_device_never_swaps() {
        let g = all_to_all(6).unwrap();
        let d = g.distances().unwrap();
        let mut c = Circuit::new(6, 0);
        for i in 0..5 {
            c.add(GateKind::Cx, &[i, i + 1], &[]).unwrap();
            c.add(GateKind::Cx, &[i, 5], &[]).unwrap();
        }
        let init = identity_layout(6, &g);
        for router in routers() {
            let rc = router.route(&c, &init, &g, &d, 0, 4).unwrap();
            assert_eq!(rc.swaps_added, 0);
        }
    }
}
