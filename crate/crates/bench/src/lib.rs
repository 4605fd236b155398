//! Fixture builders shared by the benchmarks.

use tedlab_core::folding::{PairedAlphabet, Sym};
use tedlab_core::gadgets::{clique_list_gadget, clique_node_gadget, GadgetAlphabet};
use tedlab_core::graph::Graph;
use tedlab_core::label::{LabelId, LabelRegistry};
use tedlab_core::uted::UnweightedInstance;

/// A clique gadget pair on the complete graph, for string-distance timing.
pub fn gadget_pair(n: u32, k: usize) -> (Vec<LabelId>, Vec<LabelId>) {
    let graph = Graph::complete(n, false);
    let mut reg = LabelRegistry::new();
    let sym = GadgetAlphabet::intern(&mut reg);
    let members: Vec<u32> = (1..=k as u32).collect();
    let others: Vec<u32> = (n - k as u32 + 1..=n).collect();
    (clique_list_gadget(&graph, &members, &sym), clique_node_gadget(&graph, &others, &sym))
}

/// The two-vertex unweighted dynamic instance (854/851 nodes).
pub fn small_unweighted_instance() -> UnweightedInstance {
    let graph = Graph::new(2, &[(1, 2)]).expect("fixture");
    UnweightedInstance::build(&graph, 1, 0).expect("fixture has cliques")
}

/// A pseudo-random folding stream over a two-letter paired alphabet.
pub fn folding_stream(len: usize) -> (PairedAlphabet, Vec<Sym>) {
    let alpha = PairedAlphabet::new(&["a", "b"]);
    let mut state = 0x9E3779B97F4A7C15u64;
    let stream = (0..len)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 4) as Sym
        })
        .collect();
    (alpha, stream)
}
