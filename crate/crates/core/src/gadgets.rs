//! String gadgets that turn neighborhood containment into exact edit distance.
//!
//! Over the six-symbol alphabet `{0,1,2,3,$,#}`, a node gadget `NG(v)` carries
//! the binary id of `v` between runs of `2`s, and a list gadget `LG(u)` lists
//! the ids of `u`'s neighbors (with `3`-runs for non-neighbors). Their edit
//! distance equals `C' = (n−1)(2α+1)` exactly when `v ∈ N(u)` and lands in
//! `[C'+1, C'+α]` otherwise. The clique-level gadgets `CNG`/`CLG` interleave
//! all `k²` node/list pairs with long `#`-runs so that the distances add up:
//! `ed(CLG(X), CNG(Y)) = C'·k²` iff `X` and `Y` are fully connected.

use serde::Serialize;

use crate::cost::CostTable;
use crate::ext_int::ExtInt;
use crate::graph::Graph;
use crate::label::{LabelId, LabelRegistry};
use crate::string_ed::string_ed;

/// The six gadget symbols, interned in some registry.
#[derive(Copy, Clone, Debug)]
pub struct GadgetAlphabet {
    pub zero: LabelId,
    pub one: LabelId,
    pub two: LabelId,
    pub three: LabelId,
    pub dollar: LabelId,
    pub hash: LabelId,
}

impl GadgetAlphabet {
    pub fn intern(reg: &mut LabelRegistry) -> GadgetAlphabet {
        GadgetAlphabet {
            zero: reg.intern("0"),
            one: reg.intern("1"),
            two: reg.intern("2"),
            three: reg.intern("3"),
            dollar: reg.intern("$"),
            hash: reg.intern("#"),
        }
    }

    pub fn symbols(&self) -> [LabelId; 6] {
        [self.zero, self.one, self.two, self.three, self.dollar, self.hash]
    }
}

/// All derived constants of the gadget family for a given `(n, k)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetParams {
    pub n: u32,
    pub k: usize,
    /// Bits per vertex id.
    pub alpha: usize,
    /// `#`-run length between blocks.
    pub run_len: usize,
    /// Length of a clique list gadget.
    pub lambda1: usize,
    /// Length of a clique node gadget.
    pub lambda2: usize,
    /// `max(lambda1, lambda2)`.
    pub lambda: usize,
    /// Node-level target distance `C' = (n−1)(2α+1)`.
    pub c_node: i128,
    /// Clique-level target distance `C = C'·k²`.
    pub c_clique: i128,
}

impl GadgetParams {
    pub fn new(n: u32, k: usize) -> GadgetParams {
        assert!(n >= 1 && k >= 1);
        let alpha = bits_for(n);
        let c_node = (n as i128 - 1) * (2 * alpha as i128 + 1);
        let run_len = (k * k * (c_node as usize + alpha)).div_ceil(2);
        let lambda1 = k * k * (n as usize * (alpha + 1) + run_len);
        let lambda2 = k * k * ((2 * n as usize - 1) * (alpha + 1) + run_len);
        GadgetParams {
            n,
            k,
            alpha,
            run_len,
            lambda1,
            lambda2,
            lambda: lambda1.max(lambda2),
            c_node,
            c_clique: c_node * (k * k) as i128,
        }
    }
}

/// Number of bits needed to write every vertex id `1..=n` in binary.
fn bits_for(n: u32) -> usize {
    let mut bits = 0;
    while 1u64 << bits < n as u64 + 1 {
        bits += 1;
    }
    bits
}

/// MSB-first, zero-padded binary encoding of a vertex id.
fn encode(v: u32, alpha: usize, sym: &GadgetAlphabet, out: &mut Vec<LabelId>) {
    for bit in (0..alpha).rev() {
        out.push(if v >> bit & 1 == 1 { sym.one } else { sym.zero });
    }
}

fn run(label: LabelId, len: usize, out: &mut Vec<LabelId>) {
    out.extend(std::iter::repeat_n(label, len));
}

/// Node gadget `NG(v) = (2^α $)^{n−1} v̄ $ (2^α $)^{n−1}`.
pub fn node_gadget(g: &Graph, v: u32, sym: &GadgetAlphabet) -> Vec<LabelId> {
    assert!(v >= 1 && v <= g.vertex_count(), "vertex out of range");
    let n = g.vertex_count() as usize;
    let alpha = bits_for(g.vertex_count());
    let mut out = Vec::with_capacity((2 * n - 1) * (alpha + 1));
    for _ in 1..n {
        run(sym.two, alpha, &mut out);
        out.push(sym.dollar);
    }
    encode(v, alpha, sym, &mut out);
    out.push(sym.dollar);
    for _ in 1..n {
        run(sym.two, alpha, &mut out);
        out.push(sym.dollar);
    }
    out
}

/// List gadget `LG(u) = ∘_{w=1..n} g_u(w) $`, where `g_u(w)` is the binary id
/// of `w` for neighbors and a `3`-run otherwise.
pub fn list_gadget(g: &Graph, u: u32, sym: &GadgetAlphabet) -> Vec<LabelId> {
    assert!(u >= 1 && u <= g.vertex_count(), "vertex out of range");
    let n = g.vertex_count();
    let alpha = bits_for(n);
    let mut out = Vec::with_capacity(n as usize * (alpha + 1));
    for w in 1..=n {
        if g.has_edge(u, w) {
            encode(w, alpha, sym, &mut out);
        } else {
            run(sym.three, alpha, &mut out);
        }
        out.push(sym.dollar);
    }
    out
}

/// Clique node gadget `CNG(Y) = ∘_{v∈Y} (NG(v) #^ℓ)^k`.
pub fn clique_node_gadget(g: &Graph, members: &[u32], sym: &GadgetAlphabet) -> Vec<LabelId> {
    let params = GadgetParams::new(g.vertex_count(), members.len());
    let mut out = Vec::with_capacity(params.lambda2);
    for &v in members {
        let ng = node_gadget(g, v, sym);
        for _ in 0..members.len() {
            out.extend_from_slice(&ng);
            run(sym.hash, params.run_len, &mut out);
        }
    }
    debug_assert_eq!(out.len(), params.lambda2);
    out
}

/// Clique list gadget `CLG(X) = (∘_{v∈X} LG(v) #^ℓ)^k`, the `#`-run following
/// each `LG(v)` so that the gadget splits into `k²` list blocks.
pub fn clique_list_gadget(g: &Graph, members: &[u32], sym: &GadgetAlphabet) -> Vec<LabelId> {
    let params = GadgetParams::new(g.vertex_count(), members.len());
    let mut out = Vec::with_capacity(params.lambda1);
    for _ in 0..members.len() {
        for &v in members {
            out.extend_from_slice(&list_gadget(g, v, sym));
            run(sym.hash, params.run_len, &mut out);
        }
    }
    debug_assert_eq!(out.len(), params.lambda1);
    out
}

/// True iff every member of `x` is adjacent to every member of `y`.
pub fn fully_connected(g: &Graph, x: &[u32], y: &[u32]) -> bool {
    x.iter().all(|&u| y.iter().all(|&v| g.has_edge(u, v)))
}

/// One distance that landed outside its allowed band.
#[derive(Clone, Debug, Serialize)]
pub struct GadgetViolation {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub distance: ExtInt,
    pub expected: String,
}

/// Sweep of `ed(NG(v), LG(u))` over all ordered vertex pairs.
#[derive(Clone, Debug, Serialize)]
pub struct NodeGadgetReport {
    pub params: GadgetParams,
    pub pairs_checked: usize,
    pub violations: Vec<GadgetViolation>,
}

/// For every `(u, v)`: the distance must be exactly `C'` for neighbors and in
/// `[C'+1, C'+α]` otherwise.
pub fn check_node_gadget_claim(g: &Graph) -> NodeGadgetReport {
    let mut reg = LabelRegistry::new();
    let sym = GadgetAlphabet::intern(&mut reg);
    let params = GadgetParams::new(g.vertex_count(), 1);
    let unit = CostTable::unit();
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for u in 1..=g.vertex_count() {
        let lg = list_gadget(g, u, &sym);
        for v in 1..=g.vertex_count() {
            let ng = node_gadget(g, v, &sym);
            let d = string_ed(&ng, &lg, &unit);
            pairs_checked += 1;
            let ok = if g.has_edge(u, v) {
                d == ExtInt::Fin(params.c_node)
            } else {
                d >= ExtInt::Fin(params.c_node + 1) && d <= ExtInt::Fin(params.c_node + params.alpha as i128)
            };
            if !ok {
                violations.push(GadgetViolation {
                    left: vec![v],
                    right: vec![u],
                    distance: d,
                    expected: if g.has_edge(u, v) {
                        format!("= {}", params.c_node)
                    } else {
                        format!("in [{}, {}]", params.c_node + 1, params.c_node + params.alpha as i128)
                    },
                });
            }
        }
    }
    NodeGadgetReport { params, pairs_checked, violations }
}

/// Sweep of `ed(CLG(X), CNG(Y))` over all pairs of `k`-cliques.
#[derive(Clone, Debug, Serialize)]
pub struct CliqueGadgetReport {
    pub params: GadgetParams,
    pub pairs_checked: usize,
    pub violations: Vec<GadgetViolation>,
}

/// For every pair of `k`-cliques `X, Y`: distance `= C` iff `X ⊆ N(Y)`,
/// strictly greater otherwise.
pub fn check_clique_gadget_lemma(g: &Graph, k: usize) -> CliqueGadgetReport {
    let mut reg = LabelRegistry::new();
    let sym = GadgetAlphabet::intern(&mut reg);
    let params = GadgetParams::new(g.vertex_count(), k);
    let unit = CostTable::unit();
    let cliques = crate::cliques::enumerate_k_cliques(g, k);
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for x in &cliques {
        let clg = clique_list_gadget(g, x, &sym);
        for y in &cliques {
            let cng = clique_node_gadget(g, y, &sym);
            let d = string_ed(&clg, &cng, &unit);
            pairs_checked += 1;
            let ok = if fully_connected(g, x, y) {
                d == ExtInt::Fin(params.c_clique)
            } else {
                d > ExtInt::Fin(params.c_clique)
            };
            if !ok {
                violations.push(GadgetViolation {
                    left: x.clone(),
                    right: y.clone(),
                    distance: d,
                    expected: if fully_connected(g, x, y) {
                        format!("= {}", params.c_clique)
                    } else {
                        format!("> {}", params.c_clique)
                    },
                });
            }
        }
    }
    CliqueGadgetReport { params, pairs_checked, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_int::Fin;

    fn two_path() -> Graph {
        Graph::new(2, &[(1, 2)]).unwrap()
    }

    fn render(reg: &LabelRegistry, s: &[LabelId]) -> String {
        s.iter().map(|&l| reg.name(l)).collect()
    }

    #[test]
    fn node_gadget_small_example() {
        let g = two_path();
        let mut reg = LabelRegistry::new();
        let sym = GadgetAlphabet::intern(&mut reg);
        let ng = node_gadget(&g, 1, &sym);
        assert_eq!(render(&reg, &ng), "22$01$22$");
        assert_eq!(ng.len(), 9);
        let binary: usize = ng.iter().filter(|&&l| l == sym.zero || l == sym.one).count();
        assert_eq!(binary, 2, "only the id block uses 0/1");
    }

    #[test]
    fn node_gadget_length_formula() {
        for n in 1..=16u32 {
            let g = Graph::complete(n, false);
            let mut reg = LabelRegistry::new();
            let sym = GadgetAlphabet::intern(&mut reg);
            let alpha = GadgetParams::new(n, 1).alpha;
            for v in 1..=n {
                assert_eq!(node_gadget(&g, v, &sym).len(), (2 * n as usize - 1) * (alpha + 1));
                assert_eq!(list_gadget(&g, v, &sym).len(), n as usize * (alpha + 1));
            }
        }
    }

    #[test]
    fn list_gadget_small_example() {
        let g = two_path();
        let mut reg = LabelRegistry::new();
        let sym = GadgetAlphabet::intern(&mut reg);
        assert_eq!(render(&reg, &list_gadget(&g, 2, &sym)), "01$33$");
        // Isolated vertex: all blocks are 3-runs.
        let iso = Graph::new(2, &[]).unwrap();
        assert_eq!(render(&reg, &list_gadget(&iso, 1, &sym)), "33$33$");
    }

    #[test]
    fn node_distance_example_from_two_vertex_graph() {
        let g = two_path();
        let mut reg = LabelRegistry::new();
        let sym = GadgetAlphabet::intern(&mut reg);
        let params = GadgetParams::new(2, 1);
        assert_eq!(params.c_node, 5);
        let d = string_ed(&node_gadget(&g, 1, &sym), &list_gadget(&g, 2, &sym), &CostTable::unit());
        assert_eq!(d, Fin(5));
    }

    #[test]
    fn clique_gadget_lengths_and_runs() {
        let g = two_path();
        let params = GadgetParams::new(2, 1);
        assert_eq!((params.lambda1, params.lambda2), (10, 13));
        let mut reg = LabelRegistry::new();
        let sym = GadgetAlphabet::intern(&mut reg);
        let cng = clique_node_gadget(&g, &[1], &sym);
        let clg = clique_list_gadget(&g, &[2], &sym);
        assert_eq!(cng.len(), 13);
        assert_eq!(clg.len(), 10);
        // k = 1: CNG({v}) = NG(v) ∘ #^ℓ.
        let mut expected = node_gadget(&g, 1, &sym);
        expected.extend(std::iter::repeat_n(sym.hash, params.run_len));
        assert_eq!(cng, expected);
    }

    #[test]
    fn clique_gadgets_have_k_squared_hash_runs() {
        let g = Graph::complete(5, false);
        let mut reg = LabelRegistry::new();
        let sym = GadgetAlphabet::intern(&mut reg);
        let params = GadgetParams::new(5, 2);
        for s in [clique_node_gadget(&g, &[1, 3], &sym), clique_list_gadget(&g, &[2, 4], &sym)] {
            let mut runs = Vec::new();
            let mut i = 0;
            while i < s.len() {
                if s[i] == sym.hash {
                    let start = i;
                    while i < s.len() && s[i] == sym.hash {
                        i += 1;
                    }
                    runs.push(i - start);
                } else {
                    i += 1;
                }
            }
            assert_eq!(runs.len(), params.k * params.k);
            assert!(runs.iter().all(|&r| r == params.run_len));
        }
    }

    #[test]
    fn gadget_symbol_counts_match_the_formulas() {
        for n in 2..=7u32 {
            let g = Graph::complete(n, false);
            let mut reg = LabelRegistry::new();
            let sym = GadgetAlphabet::intern(&mut reg);
            let params = GadgetParams::new(n, 1);
            for v in 1..=n {
                let ng = node_gadget(&g, v, &sym);
                let lg = list_gadget(&g, v, &sym);
                let dollars = |s: &[LabelId]| s.iter().filter(|&&l| l == sym.dollar).count();
                assert_eq!(dollars(&ng), 2 * n as usize - 1);
                assert_eq!(dollars(&lg), n as usize);
                let binary = ng.iter().filter(|&&l| l == sym.zero || l == sym.one).count();
                assert_eq!(binary, params.alpha);
                assert!(ng.iter().chain(&lg).all(|l| sym.symbols().contains(l)));
            }
        }
    }

    #[test]
    fn node_claim_on_complete_and_empty_graphs() {
        let complete = Graph::complete(4, false);
        let report = check_node_gadget_claim(&complete);
        assert_eq!(report.params.c_node, 21);
        assert!(report.violations.is_empty());

        let empty = Graph::new(4, &[]).unwrap();
        let report = check_node_gadget_claim(&empty);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn clique_lemma_reduces_to_node_claim_for_k1() {
        let g = two_path();
        let report = check_clique_gadget_lemma(&g, 1);
        assert_eq!(report.params.c_clique, report.params.c_node);
        assert!(report.violations.is_empty());
    }
}
