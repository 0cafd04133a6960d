//! Generator sets: vertices from which every vertex is in sight. On the
//! visibility graph these are dominating sets.

use serde::{Deserialize, Serialize};

use super::graph::{bits, VisibilityGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub members: Vec<usize>,
    /// Members plus all their neighbours, ascending.
    pub covered: Vec<usize>,
    pub complete: bool,
}

impl GeneratorSet {
    pub fn new(g: &VisibilityGraph, members: &[usize]) -> Result<Self> {
        for &m in members {
            g.check_index(m)?;
        }
        let mask = coverage(g, members);
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        Ok(GeneratorSet {
            members,
            covered: bits(mask),
            complete: mask == g.all_nodes(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn coverage(g: &VisibilityGraph, members: &[usize]) -> u64 {
    members.iter().fold(0, |m, &v| m | g.closed_neighborhood(v))
}

/// Searches for a dominating set of exactly `k` nodes (or fewer, if the graph
/// is covered earlier). Exhaustive: `None` means no such set exists.
///
/// Branches on the lowest uncovered node, which must be dominated by one of
/// its closed neighbours; candidates are tried in ascending order so the
/// result is deterministic.
pub fn find_dominating_set(g: &VisibilityGraph, k: usize) -> Option<Vec<usize>> {
    let max_cover = (0..g.node_count())
        .map(|v| g.closed_neighborhood(v).count_ones())
        .max()
        .unwrap_or(0) as usize;
    let mut chosen = Vec::with_capacity(k);
    if search(g, k, 0, max_cover, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn search(g: &VisibilityGraph, k: usize, covered: u64, max_cover: usize, chosen: &mut Vec<usize>) -> bool {
    let uncovered = g.all_nodes() & !covered;
    if uncovered == 0 {
        return true;
    }
    let left = k - chosen.len();
    if left == 0 || (uncovered.count_ones() as usize) > left * max_cover {
        return false;
    }
    let target = uncovered.trailing_zeros() as usize;
    for candidate in bits(g.closed_neighborhood(target)) {
        chosen.push(candidate);
        if search(g, k, covered | g.closed_neighborhood(candidate), max_cover, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Smallest generator set, found by exhaustive search over increasing sizes.
pub fn minimum_generators(g: &VisibilityGraph) -> GeneratorSet {
    let members = (1..=g.node_count())
        .find_map(|k| find_dominating_set(g, k))
        .expect("the full node set always dominates");
    GeneratorSet::new(g, &members).expect("indices come from the graph")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageStep {
    pub member: usize,
    pub newly_covered: usize,
    pub running_total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub steps: Vec<CoverageStep>,
    pub total: usize,
    pub complete: bool,
}

impl CoverageReport {
    pub fn increments(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.newly_covered).collect()
    }
}

/// Processes `members` in order and records how many nodes each one adds.
pub fn verify_generator_set(g: &VisibilityGraph, members: &[usize]) -> Result<CoverageReport> {
    if members.is_empty() {
        return Err(Error::InvalidArgument("generator set is empty".into()));
    }
    let mut covered = 0u64;
    let mut steps = Vec::with_capacity(members.len());
    for &member in members {
        g.check_index(member)?;
        let next = covered | g.closed_neighborhood(member);
        steps.push(CoverageStep {
            member,
            newly_covered: (next & !covered).count_ones() as usize,
            running_total: next.count_ones() as usize,
        });
        covered = next;
    }
    Ok(CoverageReport {
        total: covered.count_ones() as usize,
        complete: covered == g.all_nodes(),
        steps,
    })
}
