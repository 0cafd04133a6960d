//! Visibility between vertices of the non-convex local set and the graph
//! analyses built on it.
//!
//! Two deterministic strategies are joined by a segment inside the local set
//! exactly when they share the first party's response or the third party's
//! response. The middle party's response never matters, so after
//! marginalizing it the same rule applies to the `(alpha, gamma)` classes of
//! the reduced vertices.

mod clique;
mod cover;
mod graph;
mod layout;

use serde::{Deserialize, Serialize};

use crate::strategy::{enumerate_strategies, BehaviourPoint, DeterministicStrategy, VertexReduced};
use crate::{Error, Result};

pub use clique::maximal_convex_clusters;
pub use cover::{
    find_dominating_set, minimum_generators, verify_generator_set, CoverageReport, CoverageStep,
    GeneratorSet,
};
pub use graph::{all_pairs_shortest_paths, build_visibility_graph, ApspResult, VisibilityGraph};
pub use layout::{svd_layout, LAYOUT_ZERO_SHIFT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VisibilityStatus {
    Coincident,
    Visible,
    Hidden,
}

impl VisibilityStatus {
    /// Coincident or visible: the segment between the two vertices stays inside.
    pub fn sees(self) -> bool {
        !matches!(self, VisibilityStatus::Hidden)
    }
}

fn status_from(identical: bool, shares_outer_wing: bool) -> VisibilityStatus {
    if identical {
        VisibilityStatus::Coincident
    } else if shares_outer_wing {
        VisibilityStatus::Visible
    } else {
        VisibilityStatus::Hidden
    }
}

pub fn visibility_test(s1: DeterministicStrategy, s2: DeterministicStrategy) -> VisibilityStatus {
    status_from(s1 == s2, s1.alpha == s2.alpha || s1.gamma == s2.gamma)
}

/// The same rule on reduced vertices: compare `(a0,a1)` and `(c0,c1)`.
pub fn visibility_test_reduced(v1: &VertexReduced, v2: &VertexReduced) -> VisibilityStatus {
    status_from(
        v1 == v2,
        v1.singles()[..2] == v2.singles()[..2] || v1.singles()[2..] == v2.singles()[2..],
    )
}

/// Number of vertices in each status as seen from one vertex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusCounts {
    pub coincident: usize,
    pub visible: usize,
    pub hidden: usize,
}

impl StatusCounts {
    fn add(&mut self, status: VisibilityStatus) {
        match status {
            VisibilityStatus::Coincident => self.coincident += 1,
            VisibilityStatus::Visible => self.visible += 1,
            VisibilityStatus::Hidden => self.hidden += 1,
        }
    }

    pub fn get(&self, status: VisibilityStatus) -> usize {
        match status {
            VisibilityStatus::Coincident => self.coincident,
            VisibilityStatus::Visible => self.visible,
            VisibilityStatus::Hidden => self.hidden,
        }
    }

    pub fn total(&self) -> usize {
        self.coincident + self.visible + self.hidden
    }
}

/// Classifies all 64 strategies as seen from `s`.
pub fn classify_from(s: DeterministicStrategy) -> StatusCounts {
    let mut counts = StatusCounts::default();
    for other in enumerate_strategies() {
        counts.add(visibility_test(s, other));
    }
    counts
}

pub fn classify_from_reduced(v: &VertexReduced) -> StatusCounts {
    let mut counts = StatusCounts::default();
    for other in crate::strategy::enumerate_reduced() {
        counts.add(visibility_test_reduced(v, &other));
    }
    counts
}

/// `omega * p + (1 - omega) * q`. Whether the segment stays inside the local
/// set is decided by [`visibility_test`], not here.
pub fn segment(p: &BehaviourPoint, q: &BehaviourPoint, omega: f64) -> Result<BehaviourPoint> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::OutOfRange(format!("omega = {omega} is not in [0,1]")));
    }
    p.ensure_same_kind(q)?;
    let coords = p
        .coords
        .iter()
        .zip(&q.coords)
        .map(|(a, b)| (omega * a + (1.0 - omega) * b).clamp(0.0, 1.0))
        .collect();
    BehaviourPoint::new(p.representation, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{enumerate_reduced, vertex_from_strategy};

    fn s(i: u8, j: u8, k: u8) -> DeterministicStrategy {
        DeterministicStrategy::from_classes(i, j, k).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(visibility_test(s(0, 0, 0), s(0, 0, 0)), VisibilityStatus::Coincident);
        assert_eq!(visibility_test(s(0, 0, 0), s(0, 3, 2)), VisibilityStatus::Visible);
        assert_eq!(visibility_test(s(1, 0, 0), s(2, 0, 1)), VisibilityStatus::Hidden);
        assert_eq!(visibility_test(s(1, 0, 3), s(2, 1, 3)), VisibilityStatus::Visible);
    }

    #[test]
    fn symmetric_over_all_pairs() {
        let all = enumerate_strategies();
        for &a in &all {
            for &b in &all {
                assert_eq!(visibility_test(a, b), visibility_test(b, a));
            }
        }
    }

    #[test]
    fn table_counts_from_every_vertex() {
        for st in enumerate_strategies() {
            let c = classify_from(st);
            assert_eq!((c.coincident, c.visible, c.hidden), (1, 27, 36));
            assert_eq!(c.total(), 64);
        }
        for v in enumerate_reduced() {
            let c = classify_from_reduced(&v);
            assert_eq!((c.coincident, c.visible, c.hidden), (1, 6, 9));
        }
    }

    #[test]
    fn reduced_rule_agrees_with_full_rule_on_images() {
        let all = enumerate_strategies();
        for &a in &all {
            for &b in &all {
                let ra = crate::strategy::marginalize(&vertex_from_strategy(a));
                let rb = crate::strategy::marginalize(&vertex_from_strategy(b));
                let full = visibility_test(a, b).sees();
                let reduced = visibility_test_reduced(&ra, &rb).sees();
                assert_eq!(full, reduced);
            }
        }
    }

    #[test]
    fn segment_endpoints_and_midpoint() {
        let zero = vertex_from_strategy(s(0, 0, 0)).to_point();
        let ones = vertex_from_strategy(s(3, 3, 3)).to_point();
        assert_eq!(segment(&zero, &ones, 0.0).unwrap(), ones);
        assert_eq!(segment(&zero, &ones, 1.0).unwrap(), zero);
        let mid = segment(&zero, &ones, 0.5).unwrap();
        assert!(mid.coords.iter().all(|&x| x == 0.5));
        assert!(segment(&zero, &ones, 1.5).is_err());
        assert!(segment(&zero, &ones, -0.1).is_err());
        let reduced = enumerate_reduced()[0].to_point();
        assert!(segment(&zero, &reduced, 0.5).is_err());
    }
}
