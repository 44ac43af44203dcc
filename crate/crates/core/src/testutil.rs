use std::ops::RangeInclusive;

use proptest::prelude::*;

use crate::cellgraph::CellGraph;

/// Random connected graph: a random spanning tree plus random extra edges.
pub fn connected_graph(cells: RangeInclusive<usize>) -> impl Strategy<Value = CellGraph> {
    cells.prop_flat_map(|l| {
        let parents = proptest::collection::vec(any::<usize>(), l.saturating_sub(1));
        let extra = proptest::collection::vec(any::<bool>(), l * l);
        (Just(l), parents, extra).prop_map(|(l, parents, extra)| {
            let mut edges = Vec::new();
            for (i, p) in parents.into_iter().enumerate() {
                let child = i + 1;
                edges.push((p % child, child));
            }
            for a in 0..l {
                for b in a + 1..l {
                    // Roughly one extra edge in four.
                    if extra[a * l + b] && extra[b * l + a] && !edges.contains(&(a, b)) {
                        edges.push((a, b));
                    }
                }
            }
            CellGraph::new(l, edges).expect("valid edges")
        })
    })
}
