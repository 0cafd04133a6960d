use std::collections::VecDeque;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{visibility_test, visibility_test_reduced};
use crate::strategy::{enumerate_reduced, enumerate_strategies, Representation};
use crate::{Error, Result};

/// Undirected visibility graph on at most 64 nodes, stored as one adjacency
/// bitmask per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityGraph {
    representation: Representation,
    adjacency: Vec<u64>,
}

impl VisibilityGraph {
    /// Builds a graph from an explicit edge list.
    pub fn from_edges(
        representation: Representation,
        node_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        if node_count == 0 || node_count > 64 {
            return Err(Error::InvalidGraph(format!(
                "node count {node_count} outside 1..=64"
            )));
        }
        let mut adjacency = vec![0u64; node_count];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= node_count {
                    return Err(Error::InvalidNode { index: x, node_count });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
        }
        Ok(VisibilityGraph { representation, adjacency })
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Mask with one bit per node.
    pub fn all_nodes(&self) -> u64 {
        if self.node_count() == 64 {
            u64::MAX
        } else {
            (1u64 << self.node_count()) - 1
        }
    }

    pub fn neighbors_mask(&self, node: usize) -> u64 {
        self.adjacency[node]
    }

    /// The node and its neighbours.
    pub fn closed_neighborhood(&self, node: usize) -> u64 {
        self.adjacency[node] | (1 << node)
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        bits(self.adjacency[node])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u] >> v & 1 == 1
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.node_count())
            .flat_map(|u| bits(self.adjacency[u]).into_iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.node_count() {
            return Err(Error::InvalidNode { index, node_count: self.node_count() });
        }
        Ok(())
    }

    /// Undirected DOT, node names are 0-based table rows. `positions` adds a
    /// `pos` attribute per node.
    pub fn to_dot(&self, positions: Option<&[[f64; 3]]>) -> String {
        let mut out = String::new();
        let name = match self.representation {
            Representation::Full26 => "visibility_full26",
            Representation::Reduced8 => "visibility_reduced8",
        };
        writeln!(out, "graph {name} {{").unwrap();
        for node in 0..self.node_count() {
            match positions.and_then(|p| p.get(node)) {
                Some([x, y, z]) => {
                    writeln!(out, "  {node} [pos=\"{x:.12},{y:.12},{z:.12}\"];").unwrap()
                }
                None => writeln!(out, "  {node};").unwrap(),
            }
        }
        for (u, v) in self.edges() {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            representation: self.representation,
            node_count: self.node_count(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            layout: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub representation: Representation,
    pub node_count: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<Vec<[f64; 3]>>,
}

pub(crate) fn bits(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Edge iff the two vertices are visible from each other.
pub fn build_visibility_graph(representation: Representation) -> VisibilityGraph {
    let adjacency = match representation {
        Representation::Full26 => {
            let all = enumerate_strategies();
            all.iter()
                .map(|&a| {
                    all.iter().enumerate().fold(0u64, |mask, (j, &b)| {
                        if visibility_test(a, b) == super::VisibilityStatus::Visible {
                            mask | 1 << j
                        } else {
                            mask
                        }
                    })
                })
                .collect()
        }
        Representation::Reduced8 => {
            let all = enumerate_reduced();
            all.iter()
                .map(|a| {
                    all.iter().enumerate().fold(0u64, |mask, (j, b)| {
                        if visibility_test_reduced(a, b) == super::VisibilityStatus::Visible {
                            mask | 1 << j
                        } else {
                            mask
                        }
                    })
                })
                .collect()
        }
    };
    VisibilityGraph { representation, adjacency }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApspResult {
    /// Hop counts, `distances[u][v]`.
    pub distances: Vec<Vec<u32>>,
    /// Largest hop count over all pairs.
    pub max: u32,
}

/// Breadth-first search from every node.
pub fn all_pairs_shortest_paths(g: &VisibilityGraph) -> Result<ApspResult> {
    let n = g.node_count();
    let mut distances = Vec::with_capacity(n);
    let mut max = 0;
    for source in 0..n {
        let mut dist = vec![u32::MAX; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(target) = dist.iter().position(|&d| d == u32::MAX) {
            return Err(Error::UnreachablePair(source, target));
        }
        max = max.max(*dist.iter().max().expect("nonempty"));
        distances.push(dist);
    }
    Ok(ApspResult { distances, max })
}
