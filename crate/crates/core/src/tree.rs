//! Finite connected subtrees of the `k`-regular tree.
//!
//! A subtree `Lambda` is given by its vertices and edges. Each vertex of the
//! infinite tree has `k + 1` neighbours, so every vertex of `Lambda` with
//! `deg < k + 1` inside `Lambda` is completed with fresh outer-boundary
//! vertices. Bonds are oriented away from the root `w`; they comprise the
//! edges of `Lambda` and the edges joining `Lambda` to its outer boundary.
//!
//! Internally the tree is a list of nodes in breadth-first order from the
//! root, so every parent precedes its children. Boundary ids are assigned in
//! that order, starting one above the largest vertex id of `Lambda`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

pub type VertexId = u64;

/// An oriented bond `from -> to` (pointing away from the root).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bond {
    pub from: VertexId,
    pub to: VertexId,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Node {
    pub id: VertexId,
    pub is_boundary: bool,
    pub parent_bond: Option<usize>,
    pub child_bonds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSubtree {
    k: usize,
    root: VertexId,
    interior: Vec<VertexId>,
    boundary: Vec<VertexId>,
    bonds: Vec<Bond>,
    /// `(parent node, child node)` for every bond
    bond_nodes: Vec<(usize, usize)>,
    nodes: Vec<Node>,
    index: BTreeMap<VertexId, usize>,
}

impl FiniteSubtree {
    /// Builds the subtree spanned by `edges` (or the single vertex `root`
    /// when `edges` is empty) and synthesizes its outer boundary.
    pub fn build(k: usize, edges: &[(VertexId, VertexId)], root: VertexId) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        adjacency.entry(root).or_default();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::NotATree(format!("self loop at {a}")));
            }
            if !adjacency.entry(a).or_default().insert(b) {
                return Err(Error::NotATree(format!("duplicate edge {a}-{b}")));
            }
            adjacency.entry(b).or_default().insert(a);
        }
        if !edges.is_empty() && adjacency[&root].is_empty() {
            return Err(Error::NotATree(format!("root {root} is not on any edge")));
        }
        if edges.len() + 1 != adjacency.len() {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices",
                edges.len(),
                adjacency.len()
            )));
        }
        for (&v, nbrs) in &adjacency {
            if nbrs.len() > k + 1 {
                return Err(Error::DegreeExceeded {
                    vertex: v,
                    degree: nbrs.len(),
                    max: k + 1,
                });
            }
        }

        let mut next_boundary = adjacency.keys().next_back().copied().unwrap_or(root) + 1;
        let mut t = Self {
            k,
            root,
            interior: adjacency.keys().copied().collect(),
            boundary: Vec::new(),
            bonds: Vec::new(),
            bond_nodes: Vec::new(),
            nodes: vec![Node {
                id: root,
                is_boundary: false,
                parent_bond: None,
                child_bonds: Vec::new(),
            }],
            index: BTreeMap::new(),
        };
        t.index.insert(root, 0);
        let mut queue = VecDeque::from([(0usize, None::<VertexId>)]);
        while let Some((node, parent)) = queue.pop_front() {
            let id = t.nodes[node].id;
            let children: Vec<VertexId> = adjacency[&id]
                .iter()
                .copied()
                .filter(|&c| Some(c) != parent)
                .collect();
            let n_boundary = k + 1 - adjacency[&id].len();
            for c in children {
                let child = t.push_child(node, c, false);
                queue.push_back((child, Some(id)));
            }
            for _ in 0..n_boundary {
                t.push_child(node, next_boundary, true);
                next_boundary += 1;
            }
        }
        if t.index.len() - t.boundary.len() != adjacency.len() {
            return Err(Error::NotATree("edge set is not connected".into()));
        }
        Ok(t)
    }

    /// The single-bond volume: one bond `0 -> 1` whose two endpoints are
    /// both boundary sites. It is the `n = 0` member of the family, with
    /// `n (k - 1) + 2 = 2` boundary sites.
    pub fn single_bond(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        let mut t = Self {
            k,
            root: 0,
            interior: Vec::new(),
            boundary: vec![0],
            bonds: Vec::new(),
            bond_nodes: Vec::new(),
            nodes: vec![Node {
                id: 0,
                is_boundary: true,
                parent_bond: None,
                child_bonds: Vec::new(),
            }],
            index: BTreeMap::from([(0, 0)]),
        };
        t.push_child(0, 1, true);
        Ok(t)
    }

    fn push_child(&mut self, parent: usize, id: VertexId, is_boundary: bool) -> usize {
        let node = self.nodes.len();
        let bond = self.bonds.len();
        self.bonds.push(Bond {
            from: self.nodes[parent].id,
            to: id,
        });
        self.bond_nodes.push((parent, node));
        self.nodes[parent].child_bonds.push(bond);
        self.nodes.push(Node {
            id,
            is_boundary,
            parent_bond: Some(bond),
            child_bonds: Vec::new(),
        });
        self.index.insert(id, node);
        if is_boundary {
            self.boundary.push(id);
        }
        node
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Vertices of `Lambda`, sorted.
    pub fn vertices(&self) -> &[VertexId] {
        &self.interior
    }

    /// Outer-boundary vertices in breadth-first order.
    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    /// Oriented bonds meeting `Lambda`, in breadth-first order.
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.index
            .get(&v)
            .is_some_and(|&n| self.nodes[n].is_boundary)
    }

    pub fn bond_index(&self, bond: Bond) -> Option<usize> {
        let &n = self.index.get(&bond.to)?;
        let b = self.nodes[n].parent_bond?;
        (self.bonds[b].from == bond.from).then_some(b)
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub(crate) fn bond_nodes(&self) -> &[(usize, usize)] {
        &self.bond_nodes
    }

    /// Bond indices along the path from the root to `v`, root end first.
    pub fn path_bonds(&self, v: VertexId) -> Option<Vec<usize>> {
        let mut n = *self.index.get(&v)?;
        let mut path = Vec::new();
        while let Some(b) = self.nodes[n].parent_bond {
            path.push(b);
            n = self.bond_nodes[b].0;
        }
        path.reverse();
        Some(path)
    }

    /// Height offset of every node relative to the root, in node order.
    pub(crate) fn node_offsets(&self, zeta: &GradientConfig) -> Vec<i64> {
        let mut offsets = vec![0i64; self.nodes.len()];
        for (b, &(p, c)) in self.bond_nodes.iter().enumerate() {
            offsets[c] = offsets[p] + zeta.values[b];
        }
        offsets
    }

    /// Path sums `sum_(b in path(w, y)) zeta_b` for all boundary `y`, in
    /// [`boundary`](Self::boundary) order.
    pub fn boundary_path_sums(&self, zeta: &GradientConfig) -> Result<Vec<i64>> {
        self.check_config(zeta)?;
        let offsets = self.node_offsets(zeta);
        Ok(self
            .nodes
            .iter()
            .zip(&offsets)
            .filter(|(n, _)| n.is_boundary)
            .map(|(_, &o)| o)
            .collect())
    }

    pub(crate) fn check_config(&self, zeta: &GradientConfig) -> Result<()> {
        if zeta.values.len() != self.bonds.len() {
            return Err(Error::ConfigMismatch(format!(
                "{} increments for {} bonds",
                zeta.values.len(),
                self.bonds.len()
            )));
        }
        Ok(())
    }
}

/// Integer increments on the oriented bonds of a subtree, indexed like
/// [`FiniteSubtree::bonds`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradientConfig {
    values: Vec<i64>,
}

impl GradientConfig {
    pub fn zeros(tree: &FiniteSubtree) -> Self {
        Self {
            values: vec![0; tree.bonds().len()],
        }
    }

    /// Increments listed in bond order.
    pub fn from_values(tree: &FiniteSubtree, values: Vec<i64>) -> Result<Self> {
        let c = Self { values };
        tree.check_config(&c)?;
        Ok(c)
    }

    /// Increments keyed by bond; every bond of the tree must appear exactly
    /// once and no other bond may appear.
    pub fn from_bond_map(tree: &FiniteSubtree, map: &BTreeMap<Bond, i64>) -> Result<Self> {
        let mut values = vec![None; tree.bonds().len()];
        for (&bond, &v) in map {
            let i = tree.bond_index(bond).ok_or_else(|| {
                Error::ConfigMismatch(format!("{} -> {} is not a bond", bond.from, bond.to))
            })?;
            values[i] = Some(v);
        }
        let values = values
            .into_iter()
            .zip(tree.bonds())
            .map(|(v, b)| {
                v.ok_or_else(|| {
                    Error::ConfigMismatch(format!("no increment for {} -> {}", b.from, b.to))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, bond: usize) -> i64 {
        self.values[bond]
    }

    pub fn to_bond_map(&self, tree: &FiniteSubtree) -> BTreeMap<Bond, i64> {
        tree.bonds()
            .iter()
            .copied()
            .zip(self.values.iter().copied())
            .collect()
    }
}

/// `sum_(b in path(w, y)) zeta_b` for a boundary vertex `y`.
pub fn path_sum(tree: &FiniteSubtree, zeta: &GradientConfig, y: VertexId) -> Result<i64> {
    tree.check_config(zeta)?;
    if !tree.is_boundary(y) {
        return Err(Error::VertexNotInBoundary(y));
    }
    let path = tree.path_bonds(y).ok_or(Error::VertexNotInBoundary(y))?;
    Ok(path.iter().map(|&b| zeta.get(b)).sum())
}

/// Number of boundary vertices whose path sum is `i` modulo `q`, for each
/// residue `i`.
pub fn n_vector(tree: &FiniteSubtree, zeta: &GradientConfig, q: usize) -> Result<Vec<usize>> {
    if q == 0 {
        return Err(Error::InvalidPeriod(0));
    }
    let mut counts = vec![0usize; q];
    for s in tree.boundary_path_sums(zeta)? {
        counts[s.rem_euclid(q as i64) as usize] += 1;
    }
    Ok(counts)
}
