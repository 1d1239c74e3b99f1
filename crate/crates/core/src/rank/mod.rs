//! Node ranking over an undirected weighted graph: classic PageRank, a
//! weighted PageRank whose arc factors come from neighbour degrees, weighted
//! degrees and min-max normalization.
//!
//! Every undirected edge is read as two opposite arcs carrying its weight,
//! so in- and out-degrees coincide.

use std::cmp::Ordering;

use crate::netgraph::{EventGraph, Node};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RankError {
    #[error("cannot rank an empty graph")]
    EmptyGraph,
    #[error("damping factor must lie in (0, 1), got {0}")]
    Damping(f64),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("max_iters must be at least 1")]
    MaxIters,
    #[error("normalization factor must be positive, got {0}")]
    Factor(f64),
    #[error("edge {0} -- {1}: {2}")]
    BadEdge(usize, usize, &'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeMode {
    /// Degrees are sums of incident edge weights.
    #[default]
    Weighted,
    /// Degrees are neighbour counts.
    Unweighted,
}

impl std::str::FromStr for DegreeMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "weighted" => Ok(DegreeMode::Weighted),
            "unweighted" => Ok(DegreeMode::Unweighted),
            _ => Err(format!("degree mode must be weighted or unweighted, got {s:?}")),
        }
    }
}

impl DegreeMode {
    pub fn name(self) -> &'static str {
        match self {
            DegreeMode::Weighted => "weighted",
            DegreeMode::Unweighted => "unweighted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankParams {
    pub d: f64,
    /// Fixed factor for the classic solver; `None` rescales to unit sum on
    /// every sweep.
    pub c: Option<f64>,
    /// L1 change between sweeps below which iteration stops.
    pub tol: f64,
    pub max_iters: usize,
    pub sum_normalize: bool,
    pub degree_mode: DegreeMode,
}

impl Default for RankParams {
    fn default() -> Self {
        RankParams {
            d: 0.85,
            c: None,
            tol: 1e-10,
            max_iters: 1000,
            sum_normalize: true,
            degree_mode: DegreeMode::Weighted,
        }
    }
}

impl RankParams {
    pub fn validate(&self) -> Result<(), RankError> {
        if !(self.d > 0.0 && self.d < 1.0) {
            return Err(RankError::Damping(self.d));
        }
        if !(self.tol > 0.0) {
            return Err(RankError::Tolerance(self.tol));
        }
        if self.max_iters == 0 {
            return Err(RankError::MaxIters);
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(RankError::Factor(c));
            }
        }
        Ok(())
    }
}

/// Symmetric arc view of an undirected weighted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedView {
    /// Out-arcs per node as (target, weight); in-arcs are the same list.
    arcs: Vec<Vec<(usize, u64)>>,
}

impl DirectedView {
    pub fn from_graph(g: &EventGraph) -> Self {
        DirectedView { arcs: g.adjacency() }
    }

    /// View over `n` nodes and undirected edges `(u, v, weight)`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self, RankError> {
        let mut arcs = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(RankError::BadEdge(u, v, "endpoint out of range"));
            }
            if u == v {
                return Err(RankError::BadEdge(u, v, "self-loop"));
            }
            if w == 0 {
                return Err(RankError::BadEdge(u, v, "zero weight"));
            }
            if arcs[u].iter().any(|(t, _)| *t == v) {
                return Err(RankError::BadEdge(u, v, "duplicate edge"));
            }
            arcs[u].push((v, w));
            arcs[v].push((u, w));
        }
        for a in &mut arcs {
            a.sort_unstable();
        }
        Ok(DirectedView { arcs })
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Arcs leaving `v` (equivalently, arriving at `v`).
    pub fn arcs(&self, v: usize) -> &[(usize, u64)] {
        &self.arcs[v]
    }

    /// Out-arc count N_v.
    pub fn out_count(&self, v: usize) -> usize {
        self.arcs[v].len()
    }

    /// Weighted in-degree I_v; equal to the weighted out-degree O_v.
    pub fn weighted_degree(&self, v: usize) -> u64 {
        self.arcs[v].iter().map(|(_, w)| *w).sum()
    }

    fn degree(&self, v: usize, mode: DegreeMode) -> u64 {
        match mode {
            DegreeMode::Weighted => self.weighted_degree(v),
            DegreeMode::Unweighted => self.arcs[v].len() as u64,
        }
    }
}

/// Weighted (in, out) degree of every node.
pub fn weighted_degrees(g: &EventGraph) -> Vec<(u64, u64)> {
    let view = DirectedView::from_graph(g);
    (0..view.len())
        .map(|v| {
            let d = view.weighted_degree(v);
            (d, d)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scores {
    /// Reported scores; sum to 1 when sum-normalization is on.
    pub values: Vec<f64>,
    /// Fixed-point values before any final rescaling.
    pub raw: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// L1 change of the last sweep.
    pub residual: f64,
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn unit_sum(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter().map(|x| x / s).collect()
    } else {
        v.to_vec()
    }
}

/// Classic PageRank: pr(u) = c · Σ_{v→u} pr(v) / N_v.
///
/// Iterates from the uniform vector. Each sweep averages the current vector
/// with its propagation (a lazy walk), which has the same fixed point but
/// does not oscillate on bipartite graphs. Without an explicit `c` the
/// vector is rescaled to unit sum after every sweep.
pub fn pagerank_simple(view: &DirectedView, p: &RankParams) -> Result<Scores, RankError> {
    p.validate()?;
    let n = view.len();
    if n == 0 {
        return Err(RankError::EmptyGraph);
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let (mut iterations, mut residual, mut converged) = (0, f64::INFINITY, false);
    while iterations < p.max_iters {
        iterations += 1;
        next.iter_mut().for_each(|y| *y = 0.0);
        for v in 0..n {
            let nv = view.out_count(v);
            if nv == 0 {
                continue;
            }
            let share = x[v] / nv as f64;
            for &(u, _) in view.arcs(v) {
                next[u] += share;
            }
        }
        for u in 0..n {
            next[u] = 0.5 * (x[u] + next[u]);
        }
        match p.c {
            Some(c) => next.iter_mut().for_each(|y| *y *= c),
            None => next = unit_sum(&next),
        }
        residual = l1(&next, &x);
        std::mem::swap(&mut x, &mut next);
        if residual < p.tol {
            converged = true;
            break;
        }
    }
    let values = if p.sum_normalize { unit_sum(&x) } else { x.clone() };
    Ok(Scores {
        values,
        raw: x,
        iterations,
        converged,
        residual,
    })
}

/// Per-arc factor W^in · W^out for every arc v→u, indexed like `view.arcs(v)`.
fn arc_factors(view: &DirectedView, mode: DegreeMode) -> Vec<Vec<f64>> {
    let deg: Vec<u128> = (0..view.len()).map(|v| view.degree(v, mode) as u128).collect();
    (0..view.len())
        .map(|v| {
            let s: u128 = view.arcs(v).iter().map(|(u, _)| deg[*u]).sum();
            // I and O coincide, so W^in · W^out = (I_u · O_u) / (ΣI_p · ΣO_p).
            view.arcs(v)
                .iter()
                .map(|(u, _)| (deg[*u] * deg[*u]) as f64 / (s * s) as f64)
                .collect()
        })
        .collect()
}

/// Weighted PageRank: pr(u) = (1 − d) + d · Σ_{v→u} pr(v) · W^in_(v,u) · W^out_(v,u)
/// with W^in_(v,u) = I_u / Σ_{p∈Out(v)} I_p and W^out likewise over O.
///
/// Jacobi iteration from the all-ones vector. Isolated nodes settle at
/// 1 − d. With `sum_normalize` the reported vector is rescaled to unit sum.
pub fn pagerank_weighted(view: &DirectedView, p: &RankParams) -> Result<Scores, RankError> {
    p.validate()?;
    let n = view.len();
    if n == 0 {
        return Err(RankError::EmptyGraph);
    }
    let factors = arc_factors(view, p.degree_mode);
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    let (mut iterations, mut residual, mut converged) = (0, f64::INFINITY, false);
    while iterations < p.max_iters {
        iterations += 1;
        next.iter_mut().for_each(|y| *y = 0.0);
        for v in 0..n {
            for (&(u, _), f) in view.arcs(v).iter().zip(&factors[v]) {
                next[u] += x[v] * f;
            }
        }
        for y in next.iter_mut() {
            *y = (1.0 - p.d) + p.d * *y;
        }
        residual = l1(&next, &x);
        std::mem::swap(&mut x, &mut next);
        if residual < p.tol {
            converged = true;
            break;
        }
    }
    let values = if p.sum_normalize { unit_sum(&x) } else { x.clone() };
    Ok(Scores {
        values,
        raw: x,
        iterations,
        converged,
        residual,
    })
}

/// (x − min) / (max − min); constant input maps to all zeros.
pub fn minmax_normalize(scores: &[f64]) -> Vec<f64> {
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return vec![0.0; scores.len()];
    }
    scores.iter().map(|x| (x - min) / (max - min)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    Simple,
    #[default]
    Weighted,
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "simple" => Ok(Algorithm::Simple),
            "weighted" => Ok(Algorithm::Weighted),
            _ => Err(format!("algorithm must be simple or weighted, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRank {
    pub node: Node,
    pub pagerank: f64,
    pub raw: f64,
    pub weighted_in_degree: f64,
    pub weighted_out_degree: f64,
    pub minmax_rank: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    /// In graph node order.
    pub nodes: Vec<NodeRank>,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
}

impl RankResult {
    /// Node indices by descending score (compared at 1e-12 resolution), then
    /// ascending node key.
    pub fn order(&self) -> Vec<usize> {
        let q = |x: f64| (x * 1e12).round();
        let mut idx: Vec<usize> = (0..self.nodes.len()).collect();
        idx.sort_by(|&a, &b| {
            let (na, nb) = (&self.nodes[a], &self.nodes[b]);
            q(nb.pagerank)
                .partial_cmp(&q(na.pagerank))
                .unwrap_or(Ordering::Equal)
                .then_with(|| na.node.key.cmp(&nb.node.key))
                .then_with(|| na.node.kind.cmp(&nb.node.kind))
        });
        idx
    }

    pub fn ranked(&self) -> Vec<&NodeRank> {
        self.order().into_iter().map(|i| &self.nodes[i]).collect()
    }
}

/// Ranks every node of an event graph.
pub fn rank_graph(g: &EventGraph, algorithm: Algorithm, p: &RankParams) -> Result<RankResult, RankError> {
    let view = DirectedView::from_graph(g);
    let s = match algorithm {
        Algorithm::Simple => pagerank_simple(&view, p)?,
        Algorithm::Weighted => pagerank_weighted(&view, p)?,
    };
    if !s.converged {
        log::warn!(
            "ranking stopped after {} sweeps without converging (residual {:e})",
            s.iterations,
            s.residual
        );
    }
    let mm = minmax_normalize(&s.values);
    let nodes = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let d = view.weighted_degree(i) as f64;
            NodeRank {
                node: node.clone(),
                pagerank: s.values[i],
                raw: s.raw[i],
                weighted_in_degree: d,
                weighted_out_degree: d,
                minmax_rank: mm[i],
            }
        })
        .collect();
    Ok(RankResult {
        nodes,
        iterations: s.iterations,
        converged: s.converged,
        residual: s.residual,
    })
}
