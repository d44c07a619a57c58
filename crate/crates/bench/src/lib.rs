//! Fixtures shared by the criterion benches.

use qextremal::graph::{self, Graph, Lemma24Variant};

/// Hosts of increasing size used by the containment and spectra benches.
pub fn hosts() -> Vec<(&'static str, Graph)> {
    vec![
        ("S(30,2)", graph::make_s(30, 2).unwrap()),
        ("S+(30,2)", graph::make_s_plus(30, 2).unwrap()),
        ("K(5,9)", graph::make_complete_bipartite(5, 9).unwrap()),
        ("Km(4)", graph::make_lemma24_graph(4, Lemma24Variant::M).unwrap()),
    ]
}
