//! Clique enumeration and minimum-weight cliques.

use crate::ext_int::{ExtInt, Fin, Top};
use crate::graph::Graph;

/// All `k`-cliques of `g` in lexicographic order (as sorted vertex lists).
///
/// Backtracking over ordered vertices; the candidate set is pruned with the
/// common-neighborhood bit mask, so each branch dies as soon as no extension
/// exists.
pub fn enumerate_k_cliques(g: &Graph, k: usize) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if k == 0 || k as u32 > n {
        return out;
    }
    let full: u128 = if n == 128 { !0 } else { (1u128 << (n + 1)) - 2 };
    let mut current = Vec::with_capacity(k);

    fn extend(g: &Graph, k: usize, candidates: u128, first: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in first..=g.vertex_count() {
            if candidates >> v & 1 == 0 {
                continue;
            }
            current.push(v);
            extend(g, k, candidates & g.neighbors_mask(v), v + 1, current, out);
            current.pop();
        }
    }

    extend(g, k, full, 1, &mut current, &mut out);
    out
}

/// Total weight of a vertex set: sum over all pairs, `⊤` if a pair is not an
/// edge or the graph is unweighted.
pub fn clique_weight(g: &Graph, vertices: &[u32]) -> ExtInt {
    let mut total = ExtInt::ZERO;
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            match g.weight(u, v) {
                Some(w) => total = total + Fin(w as i128),
                None => return Top,
            }
        }
    }
    total
}

/// Minimum `Σ_{i<j} w(vᵢ, vⱼ)` over `k`-cliques, with a witness; `⊤` and no
/// witness when the graph has no `k`-clique.
pub fn min_weight_clique(g: &Graph, k: usize) -> (ExtInt, Option<Vec<u32>>) {
    let mut best = Top;
    let mut witness = None;
    for clique in enumerate_k_cliques(g, k) {
        let w = clique_weight(g, &clique);
        if w < best {
            best = w;
            witness = Some(clique);
        }
    }
    (best, witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_triangle_count() {
        let g = Graph::complete(4, false);
        let cliques = enumerate_k_cliques(&g, 3);
        assert_eq!(cliques.len(), 4);
        assert_eq!(cliques[0], vec![1, 2, 3]);
        assert!(cliques.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
    }

    #[test]
    fn bipartite_graph_has_no_triangle() {
        // K_{2,2}: 1,2 vs 3,4.
        let g = Graph::new(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        assert!(enumerate_k_cliques(&g, 3).is_empty());
        assert_eq!(enumerate_k_cliques(&g, 1).len(), 4);
    }

    #[test]
    fn min_weight_k4() {
        let g = Graph::complete(4, true);
        let (w, witness) = min_weight_clique(&g, 4);
        assert_eq!(w, Fin(6));
        assert_eq!(witness, Some(vec![1, 2, 3, 4]));
    }

    #[test]
    fn no_clique_yields_top() {
        let g = Graph::new(4, &[(1, 2), (2, 3)]).unwrap();
        let (w, witness) = min_weight_clique(&g, 4);
        assert!(w.is_top());
        assert!(witness.is_none());
    }

    #[test]
    fn enumeration_matches_matrix_recount() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let n = 9u32;
            let mut edges = Vec::new();
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            // Independent recount: test all 3-subsets against the edge list.
            let mut count = 0usize;
            for a in 1..=n {
                for b in a + 1..=n {
                    for c in b + 1..=n {
                        if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(enumerate_k_cliques(&g, 3).len(), count);
        }
    }
}
