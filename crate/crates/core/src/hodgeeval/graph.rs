use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub genus: u32,
    /// Marking labels, 1-based.
    pub markings: Vec<u32>,
}

impl Vertex {
    pub fn new(genus: u32, markings: Vec<u32>) -> Self {
        Vertex { genus, markings }
    }
}

/// Stable tree of vertices: the dual graph of a compact-type stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = DualGraph { vertices, edges };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let v = self.vertices.len();
        if v == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if self.edges.len() + 1 != v {
            return Err(Error::InvalidGraph(format!(
                "{} edges on {v} vertices is not a tree",
                self.edges.len()
            )));
        }
        // union-find connectivity
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            if a >= v || b >= v || a == b {
                return Err(Error::InvalidGraph(format!("bad edge ({a}, {b})")));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::InvalidGraph("cycle".into()));
            }
            parent[ra] = rb;
        }
        let mut labels: Vec<u32> = self
            .vertices
            .iter()
            .flat_map(|x| x.markings.iter().copied())
            .collect();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, &l)| l != i as u32 + 1) {
            return Err(Error::InvalidGraph(format!(
                "marking labels {labels:?} are not 1..n"
            )));
        }
        for (i, x) in self.vertices.iter().enumerate() {
            if 2 * x.genus as i64 - 2 + self.valence(i) as i64 <= 0 {
                return Err(Error::InvalidGraph(format!(
                    "vertex {i} of genus {} and valence {} is unstable",
                    x.genus,
                    self.valence(i)
                )));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges plus markings at vertex `v`.
    pub fn valence(&self, v: usize) -> usize {
        let e = self
            .edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count();
        e + self.vertices[v].markings.len()
    }

    pub fn genus(&self) -> u32 {
        self.vertices.iter().map(|v| v.genus).sum()
    }

    pub fn num_markings(&self) -> usize {
        self.vertices.iter().map(|v| v.markings.len()).sum()
    }

    pub fn codimension(&self) -> usize {
        self.edges.len()
    }

    pub fn marking_vertex(&self, label: u32) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| v.markings.contains(&label))
    }

    /// Dimension of the lambda_{g_v} socle at each vertex: `2g - 3 + val`
    /// for positive genus and `val - 3` for genus 0.
    pub fn socle_dims(&self) -> Vec<u32> {
        (0..self.vertices.len())
            .map(|i| socle_dim(self.vertices[i].genus, self.valence(i)))
            .collect()
    }

    pub(crate) fn vertex_mut(&mut self, v: usize) -> &mut Vertex {
        &mut self.vertices[v]
    }

    pub(crate) fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

pub fn socle_dim(genus: u32, valence: usize) -> u32 {
    let d = if genus == 0 {
        valence as i64 - 3
    } else {
        2 * genus as i64 - 3 + valence as i64
    };
    d.max(0) as u32
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            write!(f, "v{i}[g={}", v.genus)?;
            if !v.markings.is_empty() {
                let m: Vec<String> = v.markings.iter().map(u32::to_string).collect();
                write!(f, "; {}", m.join(","))?;
            }
            write!(f, "] ")?;
        }
        let e: Vec<String> = self
            .edges
            .iter()
            .map(|(a, b)| format!("v{a}-v{b}"))
            .collect();
        write!(f, "{{{}}}", e.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let chain = DualGraph::new(
            vec![Vertex::new(1, vec![1]), Vertex::new(1, vec![])],
            vec![(0, 1)],
        )
        .unwrap();
        assert_eq!(chain.genus(), 2);
        assert_eq!(chain.codimension(), 1);
        assert_eq!(chain.socle_dims(), vec![1, 0]);
        // rational tail with one node is unstable
        assert!(DualGraph::new(
            vec![Vertex::new(1, vec![1]), Vertex::new(0, vec![])],
            vec![(0, 1)]
        )
        .is_err());
        // cycle
        assert!(DualGraph::new(
            vec![
                Vertex::new(1, vec![1]),
                Vertex::new(1, vec![]),
                Vertex::new(1, vec![])
            ],
            vec![(0, 1), (1, 2), (2, 0)]
        )
        .is_err());
        // labels must be 1..n
        assert!(DualGraph::new(vec![Vertex::new(1, vec![2])], vec![]).is_err());
    }
}
