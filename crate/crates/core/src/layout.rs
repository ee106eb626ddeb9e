//! Initial placement of logical qubits onto physical qubits.
//!
//! Three interchangeable strategies are registered behind [`LayoutStrategy`]:
//! trivial (numerical order), dense (greedy expansion of a well-connected
//! physical subset), and SABRE (seeded forward-backward-forward routing
//! trials keeping the layout whose forward pass inserts the fewest swaps).

use std::collections::BTreeSet;

use crate::circuit::Circuit;
use crate::error::MapError;
use crate::rng::{derive_seed, SplitMix64};
use crate::route::route_sabre;
use crate::topology::{CouplingGraph, DistanceMatrix};

/// Injective map from logical qubit index to physical qubit index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    phys_of: Vec<usize>,
}

impl Layout {
    pub fn from_map(phys_of: Vec<usize>, device_qubits: usize) -> Result<Layout, MapError> {
        let mut used = vec![false; device_qubits];
        for &p in &phys_of {
            if p >= device_qubits {
                return Err(MapError::LayoutOutOfRange { index: p, device: device_qubits });
            }
            if used[p] {
                return Err(MapError::LayoutNotInjective(p));
            }
            used[p] = true;
        }
        Ok(Layout { phys_of })
    }

    pub fn phys(&self, logical: usize) -> usize {
        self.phys_of[logical]
    }

    pub fn num_logical(&self) -> usize {
        self.phys_of.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.phys_of
    }

    /// Validates this layout against a circuit/device pair.
    pub fn check(&self, circ: &Circuit, graph: &CouplingGraph) -> Result<(), MapError> {
        if circ.num_qubits > self.phys_of.len() {
            return Err(MapError::IncompleteLayout(self.phys_of.len()));
        }
        for &p in &self.phys_of {
            if p >= graph.num_qubits() {
                return Err(MapError::LayoutOutOfRange { index: p, device: graph.num_qubits() });
            }
        }
        Ok(())
    }
}

/// An initial-layout strategy, selectable by name.
pub trait LayoutStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn select(
        &self,
        circ: &Circuit,
        graph: &CouplingGraph,
        dists: &DistanceMatrix,
        seed: u64,
        trials: usize,
    ) -> Result<Layout, MapError>;
}

/// All registered layout strategies.
pub fn layout_strategies() -> Vec<Box<dyn LayoutStrategy>> {
    vec![Box::new(TrivialLayout), Box::new(DenseLayout), Box::new(SabreLayout)]
}

pub fn layout_by_name(name: &str) -> Result<Box<dyn LayoutStrategy>, MapError> {
    layout_strategies()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| MapError::UnknownLayoutMethod(name.to_string()))
}

fn check_fits(circ: &Circuit, graph: &CouplingGraph) -> Result<(), MapError> {
    if circ.num_qubits > graph.num_qubits() {
        return Err(MapError::CircuitTooLarge { circuit: circ.num_qubits, device: graph.num_qubits() });
    }
    Ok(())
}

/// Maps logical qubit i to physical qubit i, ignoring the topology.
pub struct TrivialLayout;

impl LayoutStrategy for TrivialLayout {
    fn name(&self) -> &'static str {
        "trivial"
    }

    fn select(
        &self,
        circ: &Circuit,
        graph: &CouplingGraph,
        _dists: &DistanceMatrix,
        _seed: u64,
        _trials: usize,
    ) -> Result<Layout, MapError> {
        check_fits(circ, graph)?;
        Layout::from_map((0..circ.num_qubits).collect(), graph.num_qubits())
    }
}

/// Picks a densely connected physical subset by greedy expansion from a
/// maximum-degree seed, then assigns busier logical qubits to better
/// connected physical qubits. All ties break toward lower indices.
pub struct DenseLayout;

impl LayoutStrategy for DenseLayout {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn select(
        &self,
        circ: &Circuit,
        graph: &CouplingGraph,
        _dists: &DistanceMatrix,
        _seed: u64,
        _trials: usize,
    ) -> Result<Layout, MapError> {
        check_fits(circ, graph)?;
        let k = circ.num_qubits;
        if k == 0 {
            return Layout::from_map(Vec::new(), graph.num_qubits());
        }
        let adj = graph.adjacency();
        let n = graph.num_qubits();

        let seed_node = (0..n).max_by_key(|&q| (adj[q].len(), usize::MAX - q)).expect("non-empty graph");
        let mut chosen: BTreeSet<usize> = BTreeSet::from([seed_node]);
        while chosen.len() < k {
            let mut frontier: Vec<usize> = chosen
                .iter()
                .flat_map(|&q| adj[q].iter().copied())
                .filter(|q| !chosen.contains(q))
                .collect();
            frontier.sort_unstable();
            frontier.dedup();
            let next = frontier
                .into_iter()
                .max_by_key(|&q| (adj[q].iter().filter(|&&v| chosen.contains(&v)).count(), usize::MAX - q));
            match next {
                Some(q) => {
                    chosen.insert(q);
                }
                // Connected graphs always expose a frontier while chosen < n.
                None => return Err(MapError::CircuitTooLarge { circuit: k, device: n }),
            }
        }

        // Logical qubits by descending two-qubit interaction count.
        let mut interactions = vec![0usize; k];
        for gate in circ.gates() {
            if gate.is_two_qubit_gate() {
                interactions[gate.qubits[0]] += 1;
                interactions[gate.qubits[1]] += 1;
            }
        }
        let mut logical: Vec<usize> = (0..k).collect();
        logical.sort_by_key(|&l| (usize::MAX - interactions[l], l));

        // Chosen physical qubits by descending internal degree.
        let mut physical: Vec<usize> = chosen.iter().copied().collect();
        let internal_degree =
            |q: usize| adj[q].iter().filter(|&&v| chosen.contains(&v)).count();
        physical.sort_by_key(|&q| (usize::MAX - internal_degree(q), q));

        let mut phys_of = vec![0usize; k];
        for (l, p) in logical.into_iter().zip(physical) {
            phys_of[l] = p;
        }
        Layout::from_map(phys_of, n)
    }
}

/// SABRE layout search: each trial starts from a seeded random placement,
/// routes forward, routes the reversed circuit from the resulting final
/// layout, and keeps that trial's refined layout. The layout whose forward
/// routing inserts the fewest swaps wins (ties: lower trial index).
pub struct SabreLayout;

impl LayoutStrategy for SabreLayout {
    fn name(&self) -> &'static str {
        "sabre"
    }

    fn select(
        &self,
        circ: &Circuit,
        graph: &CouplingGraph,
        dists: &DistanceMatrix,
        seed: u64,
        trials: usize,
    ) -> Result<Layout, MapError> {
        check_fits(circ, graph)?;
        let trials = trials.max(1);
        let n = graph.num_qubits();
        let reversed = Circuit::with_gates(
            circ.num_qubits,
            circ.num_clbits,
            circ.gates().iter().rev().cloned().collect(),
        )?;

        let mut best: Option<(usize, Layout)> = None;
        for trial in 0..trials {
            let mut rng = SplitMix64::new(derive_seed(seed, trial as u64));
            let mut physical: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut physical);
            let start = Layout::from_map(physical[..circ.num_qubits].to_vec(), n)?;

            let forward = route_sabre(circ, &start, graph, dists)?;
            let backward = route_sabre(&reversed, &forward.final_layout, graph, dists)?;
            let candidate = backward.final_layout;

            let cost = route_sabre(circ, &candidate, graph, dists)?.swaps_added;
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, candidate));
            }
        }
        Ok(best.expect("at least one trial").1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::topology::{all_to_all, sycamore_grid, CouplingGraph};

    fn star(n: usize) -> CouplingGraph {
        let edges = (1..n).map(|i| (0, i)).collect();
        let coords = (0..n).map(|i| (i as f64, (i % 2) as f64)).collect();
        CouplingGraph::new(n, edges, coords).unwrap()
    }

    fn ghz(n: usize) -> Circuit {
        let mut c = Circuit::new(n, 0);
        c.add(GateKind::H, &[0], &[]).unwrap();
        for i in 0..n - 1 {
            c.add(GateKind::Cx, &[i, i + 1], &[]).unwrap();
        }
        c
    }

    #[test]
    fn trivial_is_the_identity_map() {
        let g = sycamore_grid(3, 3).unwrap();
        let d = g.distances().unwrap();
        let layout = TrivialLayout.select(&ghz(3), &g, &d, 0, 1).unwrap();
        assert_eq!(layout.as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn oversized_circuit_rejected_by_every_strategy() {
        let g = sycamore_grid(2, 2).unwrap();
        let d = g.distances().unwrap();
        for s in layout_strategies() {
            let err = s.select(&ghz(5), &g, &d, 0, 2).unwrap_err();
            assert!(matches!(err, MapError::CircuitTooLarge { circuit: 5, device: 4 }), "{}", s.name());
        }
    }

    #[test]
    fn dense_subset_on_star_contains_the_hub() {
        let g = star(6);
        let d = g.distances().unwrap();
        let layout = DenseLayout.select(&ghz(3), &g, &d, 0, 1).unwrap();
        let mut chosen: Vec<usize> = layout.as_slice().to_vec();
        chosen.sort_unstable();
        // Brute force over all 3-subsets: any subset containing the hub has
        // 2 internal edges, every other subset has 0.
        assert_eq!(chosen, vec![0, 1, 2]);
    }

    #[test]
    fn dense_subset_on_grid_is_a_2x2_block() {
        let g = sycamore_grid(6, 6).unwrap();
        let d = g.distances().unwrap();
        let layout = DenseLayout.select(&ghz(4), &g, &d, 0, 1).unwrap();
        let chosen: BTreeSet<usize> = layout.as_slice().iter().copied().collect();
        let internal = g
            .edges()
            .iter()
            .filter(|&&(a, b)| chosen.contains(&a) && chosen.contains(&b))
            .count();
        // A 2x2 block is the unique 4-subset shape with 4 internal edges.
        assert_eq!(internal, 4);
    }

    #[test]
    fn dense_on_complete_graph_picks_lowest_indices() {
        let g = all_to_all(5).unwrap();
        let d = g.distances().unwrap();
        let layout = DenseLayout.select(&ghz(3), &g, &d, 0, 1).unwrap();
        let mut chosen: Vec<usize> = layout.as_slice().to_vec();
        chosen.sort_unstable();
        assert_eq!(chosen, vec![0, 1, 2]);
    }

    #[test]
    fn sabre_layout_finds_zero_swap_embedding_for_ghz_on_path() {
        let edges = (0..4).map(|i| (i, i + 1)).collect();
        let coords = (0..5).map(|i| (i as f64, 0.0)).collect();
        let g = CouplingGraph::new(5, edges, coords).unwrap();
        let d = g.distances().unwrap();
        let circ = ghz(3);
        let layout = SabreLayout.select(&circ, &g, &d, 1, 4).unwrap();
        let routed = route_sabre(&circ, &layout, &g, &d).unwrap();
        // GHZ interaction graph is a path, so a 0-swap embedding exists.
        assert_eq!(routed.swaps_added, 0);
    }

    #[test]
    fn sabre_layout_deterministic_and_trial0_for_1q_circuits() {
        let g = sycamore_grid(3, 3).unwrap();
        let d = g.distances().unwrap();
        let mut c = Circuit::new(4, 0);
        for q in 0..4 {
            c.add(GateKind::H, &[q], &[]).unwrap();
        }
        let a = SabreLayout.select(&c, &g, &d, 5, 4).unwrap();
        let b = SabreLayout.select(&c, &g, &d, 5, 4).unwrap();
        assert_eq!(a, b);
        // With no 2q constraints every trial costs 0 swaps; trial 0 wins.
        let mut rng = SplitMix64::new(derive_seed(5, 0));
        let mut physical: Vec<usize> = (0..9).collect();
        rng.shuffle(&mut physical);
        assert_eq!(a.as_slice(), &physical[..4]);
    }

    #[test]
    fn registry_lookup() {
        assert!(layout_by_name("dense").is_ok());
        assert!(matches!(layout_by_name("magic"), Err(MapError::UnknownLayoutMethod(_))));
    }
}
