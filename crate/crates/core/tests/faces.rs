mod common;

use std::collections::BTreeSet;

use gkm_core::faces::enumerate_faces;

use common::{closed_subgraphs, face_mask, fixtures};

#[test]
fn enumerated_faces_are_exactly_the_closed_subgraphs() {
    for f in fixtures()
        .into_iter()
        .filter(|f| f.graph.vertex_count() <= 12)
    {
        let g = &f.graph;
        let closed = closed_subgraphs(g);
        for l in 1..=g.valence() {
            let ours: BTreeSet<u64> = enumerate_faces(g, l)
                .unwrap()
                .iter()
                .map(face_mask)
                .collect();
            let oracle: BTreeSet<u64> = closed
                .iter()
                .filter(|(_, k)| *k == l)
                .map(|(m, _)| *m)
                .collect();
            assert_eq!(ours, oracle, "{} at l = {l}", f.name);
        }
    }
}
