//! JSON interchange form of a labelled graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConnectionTable, DirEdge, EdgeSpec, GkmGraph, GraphError};
use crate::exactla::QVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub torus_rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<ConnectionRecord>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub source: String,
    pub target: String,
    pub weight: QVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionRecord {
    pub along: String,
    pub map: BTreeMap<String, String>,
}

impl GraphDocument {
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Resolves ids into a graph. Dangling references are errors; a
    /// connection that is merely wrong (non-bijective, violating an axiom,
    /// with holes) is accepted and left for validation.
    pub fn to_graph(&self) -> Result<GkmGraph, GraphError> {
        let edges = self
            .edges
            .iter()
            .map(|e| EdgeSpec::new(&e.id, &e.source, &e.target, e.weight.clone()))
            .collect();
        let g = GkmGraph::new(self.torus_rank, self.vertices.clone(), edges)?;
        let Some(records) = &self.connection else {
            return Ok(g);
        };
        let lookup = |name: &str| {
            g.dir_edge_by_name(name)
                .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
        };
        let mut table: ConnectionTable = g
            .dir_edges()
            .map(|e| vec![None; g.star(g.source(e)).len()])
            .collect();
        let mut seen = vec![false; table.len()];
        for r in records {
            let along = lookup(&r.along)?;
            if std::mem::replace(&mut seen[along.index()], true) {
                return Err(GraphError::BadConnection {
                    along: r.along.clone(),
                    detail: "listed twice".into(),
                });
            }
            for (key, value) in &r.map {
                let f = lookup(key)?;
                let image = lookup(value)?;
                if g.source(f) != g.source(along) {
                    return Err(GraphError::BadConnection {
                        along: r.along.clone(),
                        detail: format!("key {key:?} does not start at the source"),
                    });
                }
                table[along.index()][g.star_position(f)] = Some(image);
            }
        }
        Ok(g.with_connection_table(table))
    }

    pub fn from_graph(g: &GkmGraph) -> Self {
        let mut edges: Vec<EdgeRecord> = (0..g.edge_count())
            .map(|i| {
                let e = DirEdge::forward(i);
                EdgeRecord {
                    id: g.edge_id(i).to_string(),
                    source: g.vertex_name(g.source(e)).to_string(),
                    target: g.vertex_name(g.target(e)).to_string(),
                    weight: g.weight(e).clone(),
                }
            })
            .collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let connection = g.connection_table().map(|table| {
            g.dir_edges()
                .map(|e| ConnectionRecord {
                    along: g.edge_name(e),
                    map: g
                        .star(g.source(e))
                        .iter()
                        .zip(&table[e.index()])
                        .filter_map(|(&f, img)| img.map(|img| (g.edge_name(f), g.edge_name(img))))
                        .collect(),
                })
                .collect()
        });
        GraphDocument {
            torus_rank: g.rank(),
            vertices: g.vertex_names().to_vec(),
            edges,
            connection,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIANGLE: &str = r#"{
        "torus_rank": 2,
        "vertices": ["n", "s"],
        "edges": [
            {"id": "e1", "source": "n", "target": "s", "weight": ["1", "0"]},
            {"id": "e2", "source": "n", "target": "s", "weight": ["0", "-1"]}
        ],
        "connection": [
            {"along": "e1", "map": {"e1": "e1~", "e2": "e2~"}},
            {"along": "e1~", "map": {"e1~": "e1", "e2~": "e2"}},
            {"along": "e2", "map": {"e2": "e2~", "e1": "e1~"}},
            {"along": "e2~", "map": {"e2~": "e2", "e1~": "e1"}}
        ]
    }"#;

    #[test]
    fn round_trip() {
        let doc = GraphDocument::from_json(BIANGLE).unwrap();
        let g = doc.to_graph().unwrap();
        assert!(g.connection_is_total());
        let e1 = g.dir_edge_by_name("e1").unwrap();
        let e2 = g.dir_edge_by_name("e2").unwrap();
        assert_eq!(g.nabla(e1, e2), e2.reverse());
        let again = GraphDocument::from_graph(&g);
        assert_eq!(again.edges[1].weight, QVector::from_i64s(&[0, 1]));
        let g2 = GraphDocument::from_json(&again.to_json())
            .unwrap()
            .to_graph()
            .unwrap();
        assert_eq!(GraphDocument::from_graph(&g2), again);
    }

    #[test]
    fn unknown_fields_and_dangling_ids() {
        let extra = BIANGLE.replacen("\"torus_rank\"", "\"colour\": 1, \"torus_rank\"", 1);
        assert!(matches!(
            GraphDocument::from_json(&extra),
            Err(GraphError::Parse(_))
        ));
        let dangling = BIANGLE.replacen("\"e2~\": \"e2\"}", "\"e9\": \"e2\"}", 1);
        let doc = GraphDocument::from_json(&dangling).unwrap();
        assert_eq!(
            doc.to_graph().unwrap_err(),
            GraphError::UnknownEdge("e9".into())
        );
    }
}
