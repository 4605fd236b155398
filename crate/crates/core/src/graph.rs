//! Undirected graphs with optional positive integer edge weights.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

/// Graph on vertices `1..=n`, no self-loops, at most 128 vertices (adjacency
/// is kept as bit masks for the clique backtracking).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    adjacency: Vec<u128>,
    weights: Option<BTreeMap<(u32, u32), u64>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(u32, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("graphs larger than 128 vertices are not supported")]
    TooLarge,
    #[error("edge {0}-{1} has weight 0; weights must be positive")]
    ZeroWeight(u32, u32),
    #[error("weight given for missing edge {0}-{1}")]
    WeightWithoutEdge(u32, u32),
    #[error("weighted graph is missing a weight for edge {0}-{1}")]
    MissingWeight(u32, u32),
    #[error("malformed graph file: {0}")]
    Malformed(String),
}

fn norm(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn new(n: u32, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        if n > 128 {
            return Err(GraphError::TooLarge);
        }
        let mut adjacency = vec![0u128; n as usize + 1];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(GraphError::VertexOutOfRange(x, n));
                }
            }
            adjacency[u as usize] |= 1u128 << v;
            adjacency[v as usize] |= 1u128 << u;
        }
        Ok(Graph { n, adjacency, weights: None })
    }

    pub fn new_weighted(n: u32, edges: &[(u32, u32, u64)]) -> Result<Graph, GraphError> {
        let bare: Vec<(u32, u32)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        let mut g = Graph::new(n, &bare)?;
        let mut weights = BTreeMap::new();
        for &(u, v, w) in edges {
            if w == 0 {
                return Err(GraphError::ZeroWeight(u, v));
            }
            weights.insert(norm(u, v), w);
        }
        g.weights = Some(weights);
        Ok(g)
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n && self.adjacency[u as usize] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a bit mask over vertex numbers.
    pub fn neighbors_mask(&self, v: u32) -> u128 {
        self.adjacency[v as usize]
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        (1..=self.n).filter(move |&u| self.has_edge(v, u))
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn weight(&self, u: u32, v: u32) -> Option<u64> {
        self.weights.as_ref().and_then(|w| w.get(&norm(u, v)).copied())
    }

    /// Largest edge weight, 0 for unweighted or empty graphs.
    pub fn max_weight(&self) -> u64 {
        self.weights.as_ref().map_or(0, |w| w.values().copied().max().unwrap_or(0))
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self.edges().iter().map(|&(u, v)| json!([u, v])).collect();
        match &self.weights {
            None => json!({ "n": self.n, "edges": edges }),
            Some(w) => {
                let weights: BTreeMap<String, u64> =
                    w.iter().map(|(&(u, v), &wt)| (format!("{u}-{v}"), wt)).collect();
                json!({ "n": self.n, "edges": edges, "weights": weights })
            }
        }
    }

    pub fn from_json(value: &Value) -> Result<Graph, GraphError> {
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| GraphError::Malformed("missing \"n\"".into()))? as u32;
        let mut edges = Vec::new();
        for e in value.get("edges").and_then(Value::as_array).into_iter().flatten() {
            let pair = e
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| GraphError::Malformed("edge must be a [u, v] pair".into()))?;
            let u = pair[0].as_u64().ok_or_else(|| GraphError::Malformed("bad endpoint".into()))? as u32;
            let v = pair[1].as_u64().ok_or_else(|| GraphError::Malformed("bad endpoint".into()))? as u32;
            edges.push((u, v));
        }
        let graph = Graph::new(n, &edges)?;
        let Some(w) = value.get("weights") else {
            return Ok(graph);
        };
        let map = w
            .as_object()
            .ok_or_else(|| GraphError::Malformed("\"weights\" must be an object".into()))?;
        let mut weighted = Vec::new();
        for (key, wt) in map {
            let (u, v) = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.parse::<u32>().ok()?, b.parse::<u32>().ok()?)))
                .ok_or_else(|| GraphError::Malformed(format!("bad weight key {key:?}")))?;
            if !graph.has_edge(u, v) {
                return Err(GraphError::WeightWithoutEdge(u, v));
            }
            let wt = wt
                .as_u64()
                .filter(|&x| x > 0)
                .ok_or(GraphError::ZeroWeight(u, v))?;
            weighted.push((u, v, wt));
        }
        let g = Graph::new_weighted(n, &weighted)?;
        for (u, v) in g.edges() {
            if g.weight(u, v).is_none() {
                return Err(GraphError::MissingWeight(u, v));
            }
        }
        Ok(g)
    }

    /// Complete graph on `n` vertices (optionally all-ones weights).
    pub fn complete(n: u32, weighted: bool) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                edges.push((u, v, 1));
            }
        }
        if weighted {
            Graph::new_weighted(n, &edges).expect("complete graph is valid")
        } else {
            let bare: Vec<(u32, u32)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
            Graph::new(n, &bare).expect("complete graph is valid")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::new(3, &[(1, 4)]), Err(GraphError::VertexOutOfRange(4, 3)));
        assert!(Graph::new_weighted(3, &[(1, 2, 0)]).is_err());
    }

    #[test]
    fn json_round_trip_weighted() {
        let g = Graph::new_weighted(4, &[(1, 2, 5), (2, 3, 1), (1, 4, 9)]).unwrap();
        let v = g.to_json();
        let back = Graph::from_json(&v).unwrap();
        assert_eq!(g, back);
        assert_eq!(back.weight(2, 1), Some(5));
        assert_eq!(back.max_weight(), 9);
    }

    #[test]
    fn neighborhoods() {
        let g = Graph::new(4, &[(1, 2), (2, 3)]).unwrap();
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(1, 3));
        assert_eq!(g.neighbors(2).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(g.neighbors_mask(4), 0);
    }
}
