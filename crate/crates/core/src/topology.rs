//! Parametric coupling graphs.
//!
//! Two generator families are provided: a heavy-hex lattice (honeycomb with
//! every lattice edge subdivided by an extra qubit, giving degree-2/3
//! qubits) and a rectangular grid where each qubit couples to up to four
//! neighbors. Graphs carry planar coordinates in grid units so that
//! geometric noise models stay well-defined after edge densification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::TopologyError;
use crate::rng::SplitMix64;

/// Physical qubit connectivity with planar coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    coords: Vec<(f64, f64)>,
}

impl CouplingGraph {
    /// Validates and builds a graph. Edges are normalized to `(lo, hi)` and
    /// kept sorted so edge indices are canonical.
    pub fn new(
        num_qubits: usize,
        edges: Vec<(usize, usize)>,
        coords: Vec<(f64, f64)>,
    ) -> Result<CouplingGraph, TopologyError> {
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(TopologyError::SelfLoop(a));
            }
            if a >= num_qubits || b >= num_qubits {
                return Err(TopologyError::EdgeOutOfRange { index: a.max(b), num_qubits });
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(TopologyError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        assert_eq!(coords.len(), num_qubits, "coords must cover every qubit");
        for i in 0..coords.len() {
            for j in (i + 1)..coords.len() {
                if coords[i] == coords[j] {
                    return Err(TopologyError::DuplicateCoords(i, j));
                }
            }
        }
        let graph = CouplingGraph { num_qubits, edges: normalized, coords };
        if !graph.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        Ok(graph)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Canonically ordered edge list; the position of an edge in this slice
    /// is its index for deterministic tie-breaking.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    /// Neighbor lists in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_qubits];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, q: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == q || b == q).count()
    }

    fn is_connected(&self) -> bool {
        if self.num_qubits == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_qubits];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.num_qubits
    }

    pub fn euclidean(&self, a: usize, b: usize) -> f64 {
        let (xa, ya) = self.coords[a];
        let (xb, yb) = self.coords[b];
        ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt()
    }

    /// Edge-list text form: a header line `N`, then one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.num_qubits);
        for &(a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    /// Parses the edge-list text form. Coordinates are synthesized on a
    /// compact square grid since the format carries none.
    pub fn from_edge_list(text: &str) -> Result<CouplingGraph, TopologyError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| TopologyError::BadEdgeList("empty input".to_string()))?
            .trim()
            .parse()
            .map_err(|_| TopologyError::BadEdgeList("header must be the qubit count".to_string()))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            let a: usize = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| TopologyError::BadEdgeList(format!("bad edge line '{line}'")))?;
            let b: usize = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| TopologyError::BadEdgeList(format!("bad edge line '{line}'")))?;
            if parts.next().is_some() {
                return Err(TopologyError::BadEdgeList(format!("bad edge line '{line}'")));
            }
            edges.push((a, b));
        }
        let side = (n as f64).sqrt().ceil() as usize;
        let coords = (0..n).map(|i| ((i % side.max(1)) as f64, (i / side.max(1)) as f64)).collect();
        CouplingGraph::new(n, edges, coords)
    }

    /// All-pairs BFS hop distances. Errors on disconnected graphs.
    pub fn distances(&self) -> Result<DistanceMatrix, TopologyError> {
        if !self.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        let n = self.num_qubits;
        let adj = self.adjacency();
        let mut table = vec![u32::MAX; n * n];
        for src in 0..n {
            let row = &mut table[src * n..(src + 1) * n];
            row[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if row[v] == u32::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        Ok(DistanceMatrix { n, table })
    }
}

/// Flat all-pairs hop-distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    table: Vec<u32>,
}

impl DistanceMatrix {
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.table[a * self.n + b]
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

/// Ratio of present edges to the complete graph's `N(N-1)/2`.
pub fn connectivity_density(g: &CouplingGraph) -> Result<f64, TopologyError> {
    if g.num_qubits() < 2 {
        return Err(TopologyError::TooSmallForDensity);
    }
    Ok(g.num_edges() as f64 / max_edges(g.num_qubits()) as f64)
}

pub fn max_edges(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Adds uniformly random absent edges (seeded, drawn without replacement)
/// until the density reaches `target`. Existing edges and coordinates are
/// untouched, so runs with increasing targets under one seed nest.
pub fn densify(g: &CouplingGraph, target: f64, seed: u64) -> Result<CouplingGraph, TopologyError> {
    if !(0.0..=1.0).contains(&target) {
        return Err(TopologyError::DensityOutOfRange(target));
    }
    let current = connectivity_density(g)?;
    if target < current {
        return Err(TopologyError::DensityBelowCurrent { target, current });
    }
    if target == current {
        return Ok(g.clone());
    }

    let n = g.num_qubits();
    let mut absent: Vec<(usize, usize)> = Vec::with_capacity(max_edges(n) - g.num_edges());
    for a in 0..n {
        for b in (a + 1)..n {
            if !g.has_edge(a, b) {
                absent.push((a, b));
            }
        }
    }
    let mut rng = SplitMix64::new(seed);
    rng.shuffle(&mut absent);

    let denom = max_edges(n) as f64;
    let mut edges = g.edges().to_vec();
    for pair in absent {
        if edges.len() as f64 / denom >= target {
            break;
        }
        edges.push(pair);
    }
    CouplingGraph::new(n, edges, g.coords().to_vec())
}

/// Heavy-hex lattice: R x C honeycomb cells with every lattice edge
/// subdivided by one qubit. Generated qubit count is `5RC + 4R + 4C - 1`.
///
/// With `crop_to`, the highest-index qubits are removed one at a time
/// (skipping removals that would disconnect the graph) until exactly
/// `crop_to` remain, then indices are compacted.
pub fn heavy_hex(rows: usize, cols: usize, crop_to: Option<usize>) -> Result<CouplingGraph, TopologyError> {
    assert!(rows >= 1 && cols >= 1, "heavy_hex needs at least one cell");

    // Integer corner coordinates in units of (sqrt(3)/4, 1/4) so midpoints
    // stay integral: a pointy-top hexagon of unit edge centered at
    // (2c + (r & 1), 3r) in units of (sqrt(3)/2, 1/2).
    let mut corners: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut lattice_edges: BTreeSet<((i64, i64), (i64, i64))> = BTreeSet::new();
    for r in 0..rows as i64 {
        for c in 0..cols as i64 {
            let cx = 2 * (2 * c + (r & 1));
            let cy = 2 * (3 * r);
            let ring = [
                (cx, cy + 4),
                (cx + 2, cy + 2),
                (cx + 2, cy - 2),
                (cx, cy - 4),
                (cx - 2, cy - 2),
                (cx - 2, cy + 2),
            ];
            for i in 0..6 {
                let a = ring[i];
                let b = ring[(i + 1) % 6];
                corners.insert(a);
                corners.insert(b);
                lattice_edges.insert((a.min(b), a.max(b)));
            }
        }
    }

    // Subdivision qubits sit at edge midpoints; index everything by (y, x).
    let mut sites: Vec<(i64, i64)> = corners.iter().copied().collect();
    for &(a, b) in &lattice_edges {
        sites.push(((a.0 + b.0) / 2, (a.1 + b.1) / 2));
    }
    sites.sort_by_key(|&(x, y)| (y, x));
    let index: BTreeMap<(i64, i64), usize> = sites.iter().copied().zip(0..).collect();

    let mut edges = Vec::with_capacity(2 * lattice_edges.len());
    for &(a, b) in &lattice_edges {
        let mid = ((a.0 + b.0) / 2, (a.1 + b.1) / 2);
        edges.push((index[&a], index[&mid]));
        edges.push((index[&mid], index[&b]));
    }
    let scale_x = 3f64.sqrt() / 4.0;
    let coords: Vec<(f64, f64)> = sites.iter().map(|&(x, y)| (x as f64 * scale_x, y as f64 * 0.25)).collect();

    debug_assert_eq!(sites.len(), 5 * rows * cols + 4 * rows + 4 * cols - 1);
    let graph = CouplingGraph::new(sites.len(), edges, coords)?;
    match crop_to {
        None => Ok(graph),
        Some(target) => crop(graph, target),
    }
}

/// Rectangular grid: `rows * cols` qubits, edges between horizontal and
/// vertical neighbors (the Sycamore-style layout of the sweeps).
pub fn sycamore_grid(rows: usize, cols: usize) -> Result<CouplingGraph, TopologyError> {
    assert!(rows >= 1 && cols >= 1, "grid needs at least one qubit");
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    let mut coords = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            coords.push((c as f64, r as f64));
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    CouplingGraph::new(rows * cols, edges, coords)
}

fn crop(graph: CouplingGraph, target: usize) -> Result<CouplingGraph, TopologyError> {
    if target < 1 {
        return Err(TopologyError::CropTooSmall(target));
    }
    if target > graph.num_qubits() {
        return Err(TopologyError::CropTooLarge { target, generated: graph.num_qubits() });
    }
    let n = graph.num_qubits();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let adj = graph.adjacency();

    while remaining > target {
        let victim = (0..n)
            .rev()
            .find(|&q| alive[q] && connected_without(&adj, &alive, remaining, q));
        match victim {
            Some(q) => {
                alive[q] = false;
                remaining -= 1;
            }
            None => return Err(TopologyError::CropUnreachable(target)),
        }
    }

    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for q in 0..n {
        if alive[q] {
            remap[q] = next;
            next += 1;
        }
    }
    let edges = graph
        .edges()
        .iter()
        .filter(|&&(a, b)| alive[a] && alive[b])
        .map(|&(a, b)| (remap[a], remap[b]))
        .collect();
    let coords = (0..n).filter(|&q| alive[q]).map(|q| graph.coords()[q]).collect();
    CouplingGraph::new(target, edges, coords)
}

/// BFS connectivity of the alive set with `skip` additionally removed.
fn connected_without(adj: &[Vec<usize>], alive: &[bool], remaining: usize, skip: usize) -> bool {
    if remaining == 1 {
        return true; // removing the last extra qubit leaves a single node
    }
    let start = match (0..adj.len()).find(|&q| alive[q] && q != skip) {
        Some(s) => s,
        None => return false,
    };
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if alive[v] && v != skip && !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == remaining - 1
}

/// Complete graph on `n` qubits with coordinates on a unit-spaced line.
/// Serves as the ideal all-to-all baseline device.
pub fn all_to_all(n: usize) -> Result<CouplingGraph, TopologyError> {
    let mut edges = Vec::with_capacity(max_edges(n));
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((a, b));
        }
    }
    let coords = (0..n).map(|i| (i as f64, 0.0)).collect();
    CouplingGraph::new(n, edges, coords)
}
