use super::{DirEdge, GkmGraph, GraphError};
use crate::exactla::{QMatrix, QVector, Rational};

fn rank(vs: &[&QVector]) -> usize {
    let rows: Vec<Vec<Rational>> = vs.iter().map(|v| v.entries().to_vec()).collect();
    QMatrix::from_rows(&rows).rank()
}

/// The connection determined by the labels: `∇_e f` is the unique edge at the
/// target of `e`, other than the reverse of `e`, whose weight lies in the span
/// of the weights of `e` and `f`. Any connection already present is replaced.
pub fn infer_connection(g: &GkmGraph) -> Result<GkmGraph, GraphError> {
    let mut table = Vec::with_capacity(2 * g.edge_count());
    for e in g.dir_edges() {
        let u = g.source(e);
        let w = g.target(e);
        let mut row = Vec::with_capacity(g.star(u).len());
        for &f in g.star(u) {
            if f == e {
                row.push(Some(e.reverse()));
                continue;
            }
            let base = rank(&[g.weight(e), g.weight(f)]);
            let candidates: Vec<DirEdge> = g
                .star(w)
                .iter()
                .copied()
                .filter(|&h| h != e.reverse())
                .filter(|&h| rank(&[g.weight(e), g.weight(f), g.weight(h)]) == base)
                .collect();
            match candidates.as_slice() {
                [h] => row.push(Some(*h)),
                [] => {
                    return Err(GraphError::NoCandidate {
                        along: g.edge_name(e),
                        edge: g.edge_name(f),
                    })
                }
                many => {
                    return Err(GraphError::AmbiguousConnection {
                        along: g.edge_name(e),
                        edge: g.edge_name(f),
                        candidates: many.iter().map(|&h| g.edge_name(h)).collect(),
                    })
                }
            }
        }
        let mut images: Vec<DirEdge> = row.iter().flatten().copied().collect();
        images.sort();
        images.dedup();
        if images.len() != row.len() {
            return Err(GraphError::NotBijective(g.edge_name(e)));
        }
        table.push(row);
    }
    Ok(g.with_connection_table(table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::triangle;
    use crate::graph::{check_connection_compat, EdgeSpec};

    #[test]
    fn triangle_connection_is_the_standard_one() {
        let g = infer_connection(&triangle()).unwrap();
        let a = g.dir_edge_by_name("a").unwrap(); // 0 -> 1
        let b = g.dir_edge_by_name("b").unwrap(); // 0 -> 2
        let c = g.dir_edge_by_name("c").unwrap(); // 1 -> 2
        assert_eq!(g.nabla(a, b), c);
        assert_eq!(g.nabla(a, a), a.reverse());
        assert!(check_connection_compat(&g).unwrap().verdict.passed());
    }

    #[test]
    fn biangle_connection_reverses_the_other_pair() {
        let g = GkmGraph::new(
            2,
            vec!["n".into(), "s".into()],
            vec![
                EdgeSpec::new("a", "n", "s", QVector::from_i64s(&[1, 0])),
                EdgeSpec::new("b", "n", "s", QVector::from_i64s(&[0, 1])),
            ],
        )
        .unwrap();
        let g = infer_connection(&g).unwrap();
        let a = DirEdge::forward(0);
        let b = DirEdge::forward(1);
        assert_eq!(g.nabla(a, b), b.reverse());
    }

    #[test]
    fn ambiguity_is_reported() {
        // valence 3, rank 2: every weight lies in every 2-span
        let w = |x: &[i64]| QVector::from_i64s(x);
        let g = GkmGraph::new(
            2,
            vec!["n".into(), "s".into()],
            vec![
                EdgeSpec::new("a", "n", "s", w(&[1, 0])),
                EdgeSpec::new("b", "n", "s", w(&[0, 1])),
                EdgeSpec::new("c", "n", "s", w(&[1, 1])),
            ],
        )
        .unwrap();
        assert!(matches!(
            infer_connection(&g),
            Err(GraphError::AmbiguousConnection { .. })
        ));
    }
}
