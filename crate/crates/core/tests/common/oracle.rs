//! Dense linear-algebra reference solutions for the two ranking equations,
//! and exhaustive enumeration of small connected weighted graphs.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};

/// Undirected weighted graph: node count and (u, v, w) with u < v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, u64)>,
}

fn weight_matrix(g: &SmallGraph) -> Vec<Vec<u64>> {
    let mut w = vec![vec![0u64; g.n]; g.n];
    for &(u, v, x) in &g.edges {
        w[u][v] = x;
        w[v][u] = x;
    }
    w
}

/// Stationary vector of the random walk v -> u with probability 1/N_v,
/// found by solving (M - I) x = 0 with one row replaced by sum(x) = 1.
pub fn classic(g: &SmallGraph) -> Vec<f64> {
    let w = weight_matrix(g);
    let n = g.n;
    let outdeg: Vec<usize> = (0..n).map(|v| w[v].iter().filter(|x| **x > 0).count()).collect();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            if w[v][u] > 0 {
                a[(u, v)] += 1.0 / outdeg[v] as f64;
            }
        }
        a[(u, u)] -= 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    for v in 0..n {
        a[(n - 1, v)] = 1.0;
    }
    b[n - 1] = 1.0;
    a.lu().solve(&b).expect("connected graph has a unique stationary vector").iter().copied().collect()
}

/// Solution of x = (1-d) 1 + d A x with A[u][v] = (I_u O_u) / (sum I_p * sum O_p)
/// over p adjacent to v, then scaled to unit sum.
pub fn weighted(g: &SmallGraph, d: f64, use_weights: bool) -> Vec<f64> {
    let w = weight_matrix(g);
    let n = g.n;
    let deg: Vec<f64> = (0..n)
        .map(|x| {
            w[x].iter()
                .filter(|y| **y > 0)
                .map(|y| if use_weights { *y as f64 } else { 1.0 })
                .sum()
        })
        .collect();
    let mut m = DMatrix::<f64>::identity(n, n);
    for v in 0..n {
        let s_in: f64 = (0..n).filter(|p| w[v][*p] > 0).map(|p| deg[p]).sum();
        let s_out = s_in;
        for u in 0..n {
            if w[v][u] > 0 {
                let win = deg[u] / s_in;
                let wout = deg[u] / s_out;
                m[(u, v)] -= d * win * wout;
            }
        }
    }
    let b = DVector::<f64>::from_element(n, 1.0 - d);
    let x = m.lu().solve(&b).expect("I - dA is nonsingular");
    let s: f64 = x.iter().sum();
    x.iter().map(|v| v / s).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    for (k, (i, j)) in pairs(n).into_iter().enumerate() {
        idx[i][j] = k;
        idx[j][i] = k;
    }
    idx
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == root)
}

/// Every connected graph on `n` nodes with edge weights in {1, 2}, one
/// representative per isomorphism class of weighted graphs.
pub fn connected_weighted_graphs(n: usize) -> Vec<SmallGraph> {
    let ps = pairs(n);
    let idx = pair_index(n);
    let perms = permutations(n);
    let m = ps.len();
    // Image of each pair index under each permutation.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| ps.iter().map(|&(i, j)| idx[p[i]][p[j]]).collect())
        .collect();

    let mut shapes = BTreeSet::new();
    for mask in 1u32..(1u32 << m) {
        let edges: Vec<(usize, usize)> = (0..m).filter(|k| mask >> k & 1 == 1).map(|k| ps[k]).collect();
        if edges.len() + 1 < n || !connected(n, &edges) {
            continue;
        }
        let canon = images
            .iter()
            .map(|img| (0..m).filter(|k| mask >> k & 1 == 1).fold(0u32, |acc, k| acc | 1 << img[k]))
            .min()
            .unwrap();
        shapes.insert(canon);
    }

    let mut out = Vec::new();
    for shape in shapes {
        let ks: Vec<usize> = (0..m).filter(|k| shape >> k & 1 == 1).collect();
        let autos: Vec<&Vec<usize>> = images
            .iter()
            .filter(|img| ks.iter().fold(0u32, |acc, &k| acc | 1 << img[k]) == shape)
            .collect();
        let mut seen = BTreeSet::new();
        for wmask in 0u32..(1u32 << ks.len()) {
            // Weight-2 edge set as a pair mask, canonicalized over automorphisms.
            let heavy = ks
                .iter()
                .enumerate()
                .filter(|(b, _)| wmask >> b & 1 == 1)
                .fold(0u32, |acc, (_, &k)| acc | 1 << k);
            let canon = autos
                .iter()
                .map(|img| (0..m).filter(|k| heavy >> k & 1 == 1).fold(0u32, |acc, k| acc | 1 << img[k]))
                .min()
                .unwrap();
            if seen.insert(canon) {
                let edges = ks
                    .iter()
                    .map(|&k| (ps[k].0, ps[k].1, if canon >> k & 1 == 1 { 2 } else { 1 }))
                    .collect();
                out.push(SmallGraph { n, edges });
            }
        }
    }
    out
}

/// Random connected graph on 7..=12 nodes: a random spanning tree plus
/// extra edges, weights in {1, 2}.
pub fn random_connected(rng: &mut rand_chacha::ChaCha8Rng) -> SmallGraph {
    let n = rng.random_range(7..=12);
    let mut present = BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        present.insert((u, v));
    }
    let p = rng.random_range(0.0..0.5);
    for (i, j) in pairs(n) {
        if rng.random_bool(p) {
            present.insert((i, j));
        }
    }
    let edges = present
        .into_iter()
        .map(|(i, j)| (i, j, rng.random_range(1..=2)))
        .collect();
    SmallGraph { n, edges }
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
