//! Independent oracles shared by the integration tests and the acceptance
//! suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use sosgibbs::tree::{FiniteSubtree, VertexId};

/// Windowed normalizer by explicit enumeration.
///
/// Every bond except those ending in a boundary leaf is enumerated over
/// `[-m, m]`. Leaf bonds are summed by a direct loop over the same window,
/// per residue class of their parent.
pub fn brute_force_partition(z: &[f64], tree: &FiniteSubtree, theta: f64, m: i64) -> f64 {
    let q = z.len() as i64;
    let zq = |h: i64| z[h.rem_euclid(q) as usize];
    let bonds = tree.bonds();
    let parents: BTreeSet<VertexId> = bonds.iter().map(|b| b.from).collect();
    let is_leaf = |v: VertexId| tree.is_boundary(v) && !parents.contains(&v);

    let mut leaf_sum = vec![0.0; q as usize];
    for (c, slot) in leaf_sum.iter_mut().enumerate() {
        for zeta in -m..=m {
            *slot += theta.powi(zeta.abs() as i32) * zq(c as i64 + zeta);
        }
    }

    // vertex ids to dense slots, root first
    let mut slot: BTreeMap<VertexId, usize> = BTreeMap::from([(tree.root(), 0)]);
    for b in bonds {
        for v in [b.from, b.to] {
            let next = slot.len();
            slot.entry(v).or_insert(next);
        }
    }
    let mut pending: Vec<(usize, usize)> = bonds
        .iter()
        .filter(|b| !is_leaf(b.to))
        .map(|b| (slot[&b.from], slot[&b.to]))
        .collect();
    // order so that each bond starts at the root or at an earlier endpoint
    let mut explicit = Vec::with_capacity(pending.len());
    let mut reached = vec![false; slot.len()];
    reached[0] = true;
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|&(from, to)| {
            if reached[from] {
                reached[to] = true;
                explicit.push((from, to));
                false
            } else {
                true
            }
        });
        assert!(pending.len() < before, "bonds do not form a rooted tree");
    }
    let leaves: Vec<usize> = bonds
        .iter()
        .filter(|b| is_leaf(b.to))
        .map(|b| slot[&b.from])
        .collect();
    // boundary vertices that are not leaves carry their own factor
    let inner_boundary: Vec<usize> = tree
        .boundary()
        .iter()
        .filter(|&&v| !is_leaf(v))
        .map(|v| slot[v])
        .collect();

    let mut zetas = vec![-m; explicit.len()];
    let mut offset = vec![0i64; slot.len()];
    let mut total = 0.0;
    loop {
        let mut bond_weight = 1.0;
        for (&(from, to), &zeta) in explicit.iter().zip(&zetas) {
            bond_weight *= theta.powi(zeta.abs() as i32);
            offset[to] = offset[from] + zeta;
        }
        let mut classes = 0.0;
        for s in 0..q {
            let mut w = 1.0;
            for &v in &inner_boundary {
                w *= zq(s + offset[v]);
            }
            for &p in &leaves {
                w *= leaf_sum[(s + offset[p]).rem_euclid(q) as usize];
            }
            classes += w;
        }
        total += bond_weight * classes;

        let mut i = 0;
        while i < zetas.len() {
            zetas[i] += 1;
            if zetas[i] <= m {
                break;
            }
            zetas[i] = -m;
            i += 1;
        }
        if i == zetas.len() {
            return total;
        }
    }
}

/// Edge list of the labelled tree on `0..n` with the given Prüfer sequence.
pub fn prufer_tree(n: usize, seq: &[usize]) -> Vec<(VertexId, VertexId)> {
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf exists");
        edges.push((leaf as VertexId, v as VertexId));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    if rest.len() == 2 {
        edges.push((rest[0] as VertexId, rest[1] as VertexId));
    }
    edges
}

/// Calls `f` with the edge list of every labelled tree on `n >= 2` vertices.
pub fn for_each_labelled_tree(n: usize, mut f: impl FnMut(&[(VertexId, VertexId)])) {
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        f(&prufer_tree(n, &seq));
        // odometer increment
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
    }
}

/// Shapes with at most four vertices: the single-bond volume, a vertex, an
/// edge, a path of three, a path of four and a star.
pub fn small_trees(k: usize) -> Vec<FiniteSubtree> {
    let mut out = vec![FiniteSubtree::single_bond(k).unwrap()];
    let shapes: [&[(VertexId, VertexId)]; 5] = [
        &[],
        &[(0, 1)],
        &[(0, 1), (1, 2)],
        &[(0, 1), (1, 2), (2, 3)],
        &[(0, 1), (0, 2), (0, 3)],
    ];
    for edges in shapes {
        out.push(FiniteSubtree::build(k, edges, 0).unwrap());
        if let Some(&(_, last)) = edges.last() {
            // the same shape pinned at a different vertex
            out.push(FiniteSubtree::build(k, edges, last).unwrap());
        }
    }
    out
}
