use super::graph::{bits, VisibilityGraph};

/// All maximal cliques: vertex sets whose members see each other pairwise,
/// so their convex hull stays inside the local set. Bron–Kerbosch with
/// Tomita pivoting. Each clique is sorted and the list is lexicographic.
pub fn maximal_convex_clusters(g: &VisibilityGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    bron_kerbosch(g, 0, g.all_nodes(), 0, &mut out);
    let mut cliques: Vec<Vec<usize>> = out.into_iter().map(bits).collect();
    cliques.sort();
    cliques
}

fn bron_kerbosch(g: &VisibilityGraph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x)
        .into_iter()
        .max_by_key(|&u| ((p & g.neighbors_mask(u)).count_ones(), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    for v in bits(p & !g.neighbors_mask(pivot)) {
        let nv = g.neighbors_mask(v);
        bron_kerbosch(g, r | 1 << v, p & nv, x & nv, out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}
