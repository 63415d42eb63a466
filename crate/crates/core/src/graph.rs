//! Weighted DAG model and the k-edge path machinery shared by every solver.
//!
//! A path "of length k" always means a directed path with exactly `k` edges.
//! The separation oracle [`min_weight_k_path`] is a dynamic program over the
//! cached topological order and runs in `O(k * m)`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge list contains a directed cycle")]
    CycleDetected,
    #[error("edge {edge} has endpoint {vertex} outside [0, {n})")]
    BadEndpoint { edge: usize, vertex: usize, n: usize },
    #[error("edge {edge} has cost {cost}; costs must be finite and nonnegative")]
    NegativeCost { edge: usize, cost: f64 },
    #[error("k = {k} is outside [1, n-1] for n = {n}")]
    KOutOfRange { k: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub cost: f64,
}

/// A validated edge-weighted DAG together with the path-length bound `k`.
///
/// Immutable after construction. Parallel edges are kept as distinct ids.
#[derive(Debug, Clone, PartialEq)]
pub struct DagInstance {
    n: usize,
    k: usize,
    edges: Vec<Edge>,
    topo: Vec<usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
}

impl DagInstance {
    /// Validates the raw edge list and caches a topological order.
    ///
    /// The order is Kahn's algorithm with the smallest ready vertex first, so
    /// it is a pure function of the input.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>, k: usize) -> Result<Self, GraphError> {
        for (id, &(u, v, c)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::BadEndpoint { edge: id, vertex: w, n });
                }
            }
            if !c.is_finite() || c < 0.0 {
                return Err(GraphError::NegativeCost { edge: id, cost: c });
            }
        }
        if k == 0 || k + 1 > n {
            return Err(GraphError::KOutOfRange { k, n });
        }

        let mut in_edges = vec![Vec::new(); n];
        let mut out_edges = vec![Vec::new(); n];
        for (id, &(u, v, _)) in edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::CycleDetected);
            }
            out_edges[u].push(id);
            in_edges[v].push(id);
        }

        let mut indegree: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(Reverse(u)) = ready.pop() {
            topo.push(u);
            for &e in &out_edges[u] {
                let v = edges[e].1;
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
        if topo.len() != n {
            return Err(GraphError::CycleDetected);
        }

        Ok(Self {
            n,
            k,
            edges: edges
                .into_iter()
                .map(|(tail, head, cost)| Edge { tail, head, cost })
                .collect(),
            topo,
            in_edges,
            out_edges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn costs(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.cost).collect()
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Incoming edge ids of `v`, ascending.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Outgoing edge ids of `v`, ascending.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// Same graph with a different path bound.
    pub fn with_k(&self, k: usize) -> Result<Self, GraphError> {
        if k == 0 || k + 1 > self.n {
            return Err(GraphError::KOutOfRange { k, n: self.n });
        }
        Ok(Self { k, ..self.clone() })
    }

    /// Total cost of a set of edge ids.
    pub fn cost_of(&self, edge_ids: &[usize]) -> f64 {
        edge_ids.iter().map(|&e| self.edges[e].cost).sum()
    }

    /// Proper 2-coloring of the underlying undirected graph, if one exists.
    /// `true` marks the side of the lowest-indexed vertex's opposite part.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                let neighbors = self.out_edges[u]
                    .iter()
                    .map(|&e| self.edges[e].head)
                    .chain(self.in_edges[u].iter().map(|&e| self.edges[e].tail));
                for w in neighbors {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }
}

/// A directed path with exactly `k` edges and its x-weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub weight: f64,
}

impl PathWitness {
    /// Re-sums the weight along the path in path order.
    pub fn recompute_weight(&self, x: &[f64]) -> f64 {
        self.edges.iter().map(|&e| x[e]).sum()
    }

    /// Checks the vertex/edge chain against the instance.
    pub fn is_consistent(&self, inst: &DagInstance) -> bool {
        self.edges.len() == inst.k()
            && self.vertices.len() == inst.k() + 1
            && self.edges.iter().enumerate().all(|(i, &e)| {
                let edge = inst.edge(e);
                edge.tail == self.vertices[i] && edge.head == self.vertices[i + 1]
            })
    }
}

/// Minimum x-weight path with exactly `k` edges, or `None` if the graph has no
/// such path. Ties go to the smallest predecessor edge id. `x` is indexed by
/// edge id.
pub fn min_weight_k_path(inst: &DagInstance, x: &[f64]) -> Option<PathWitness> {
    min_weight_k_path_filtered(inst, x, |_| true)
}

/// [`min_weight_k_path`] restricted to the edges for which `alive` holds.
pub fn min_weight_k_path_filtered<F>(inst: &DagInstance, x: &[f64], alive: F) -> Option<PathWitness>
where
    F: Fn(usize) -> bool,
{
    assert_eq!(x.len(), inst.m(), "x must be indexed by edge id");
    let n = inst.n;
    let k = inst.k;
    // dist[j * n + v]: lightest j-edge path ending at v; pred holds its last edge.
    let mut dist = vec![f64::INFINITY; (k + 1) * n];
    let mut pred = vec![usize::MAX; (k + 1) * n];
    dist[..n].fill(0.0);

    for &v in &inst.topo {
        for j in 1..=k {
            let mut best = f64::INFINITY;
            let mut best_edge = usize::MAX;
            for &e in &inst.in_edges[v] {
                if !alive(e) {
                    continue;
                }
                let prev = dist[(j - 1) * n + inst.edges[e].tail];
                if prev.is_finite() {
                    let cand = prev + x[e];
                    if cand < best {
                        best = cand;
                        best_edge = e;
                    }
                }
            }
            dist[j * n + v] = best;
            pred[j * n + v] = best_edge;
        }
    }

    let mut end = None;
    let mut best = f64::INFINITY;
    for v in 0..n {
        let d = dist[k * n + v];
        if pred[k * n + v] != usize::MAX && (end.is_none() || d < best) {
            best = d;
            end = Some(v);
        }
    }
    let end = end?;

    let mut edges = vec![0; k];
    let mut vertices = vec![0; k + 1];
    let mut v = end;
    vertices[k] = v;
    for j in (1..=k).rev() {
        let e = pred[j * n + v];
        edges[j - 1] = e;
        v = inst.edges[e].tail;
        vertices[j - 1] = v;
    }
    let weight = edges.iter().map(|&e| x[e]).sum();
    Some(PathWitness { vertices, edges, weight })
}

/// True iff deleting `deleted` leaves no path with `k` edges.
pub fn is_feasible(inst: &DagInstance, deleted: &[usize]) -> bool {
    let mut removed = vec![false; inst.m()];
    for &e in deleted {
        removed[e] = true;
    }
    surviving_k_path(inst, &removed).is_none()
}

/// Any k-edge path avoiding the edges flagged in `removed`.
pub fn surviving_k_path(inst: &DagInstance, removed: &[bool]) -> Option<PathWitness> {
    let zeros = vec![0.0; inst.m()];
    min_weight_k_path_filtered(inst, &zeros, |e| !removed[e])
}
