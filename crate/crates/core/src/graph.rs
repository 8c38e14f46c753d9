//! Metric graphs, points, tangent directions and subdivisions.
//!
//! A [`MetricGraph`] is a finite connected multigraph with strictly positive
//! rational edge lengths. Edges are stored oriented tail -> head, but the
//! orientation is bookkeeping only and never affects any computed quantity.

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// A location on a metric graph, in canonical form: offsets 0 and `length`
/// are always represented by the vertex variant, so equality is decidable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(usize),
    /// Interior point of an edge, offset strictly between 0 and the length.
    Interior(usize, Rational),
}

/// A direction at a point: an edge together with the sense of travel.
/// `toward_head` means the offset increases along the tangent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TangentVector {
    pub base: Point,
    pub edge: usize,
    pub toward_head: bool,
}

impl MetricGraph {
    pub fn new(
        vertex_names: Vec<String>,
        edge_data: Vec<(String, String, String, Rational)>,
    ) -> Result<Arc<MetricGraph>> {
        let mut index = BTreeMap::new();
        for (i, name) in vertex_names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate vertex {name:?}")));
            }
        }
        let vertices = vertex_names
            .into_iter()
            .map(|name| Vertex { name })
            .collect::<Vec<_>>();
        let mut edges = Vec::new();
        let mut edge_ids = BTreeMap::new();
        for (id, tail, head, length) in edge_data {
            if edge_ids.insert(id.clone(), edges.len()).is_some() {
                return Err(Error::input(format!("duplicate edge id {id:?}")));
            }
            let tail = *index
                .get(&tail)
                .ok_or_else(|| Error::input(format!("unknown vertex {tail:?}")))?;
            let head = *index
                .get(&head)
                .ok_or_else(|| Error::input(format!("unknown vertex {head:?}")))?;
            if length <= Rational::zero() {
                return Err(Error::input(format!(
                    "edge {id:?} has non-positive length"
                )));
            }
            edges.push(Edge {
                id,
                tail,
                head,
                length,
            });
        }
        let g = MetricGraph { vertices, edges };
        if !g.is_connected() {
            return Err(Error::input("graph is not connected".to_string()));
        }
        Ok(Arc::new(g))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::input(format!("unknown vertex {name:?}")))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::input(format!("unknown edge {id:?}")))
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Canonical point on an edge: endpoint offsets collapse to vertices.
    pub fn point_on_edge(&self, edge: usize, offset: Rational) -> Result<Point> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::input("edge index out of range".to_string()))?;
        if offset < Rational::zero() || offset > e.length {
            return Err(Error::input(format!(
                "offset off edge {:?} of length {}",
                e.id,
                crate::rational::format_rational(&e.length)
            )));
        }
        if offset.is_zero() {
            Ok(Point::Vertex(e.tail))
        } else if offset == e.length {
            Ok(Point::Vertex(e.head))
        } else {
            Ok(Point::Interior(edge, offset))
        }
    }

    pub fn point_at_vertex(&self, name: &str) -> Result<Point> {
        Ok(Point::Vertex(self.vertex_index(name)?))
    }

    /// Valence of a vertex; self-loops contribute two.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    /// All tangent vectors based at a point. One per incident edge-end at a
    /// vertex (a loop contributes two); exactly two at interior points.
    pub fn tangent_vectors(&self, p: &Point) -> Vec<TangentVector> {
        match p {
            Point::Vertex(v) => {
                let mut out = Vec::new();
                for (i, e) in self.edges.iter().enumerate() {
                    if e.tail == *v {
                        out.push(TangentVector {
                            base: p.clone(),
                            edge: i,
                            toward_head: true,
                        });
                    }
                    if e.head == *v {
                        out.push(TangentVector {
                            base: p.clone(),
                            edge: i,
                            toward_head: false,
                        });
                    }
                }
                out
            }
            Point::Interior(e, _) => vec![
                TangentVector {
                    base: p.clone(),
                    edge: *e,
                    toward_head: true,
                },
                TangentVector {
                    base: p.clone(),
                    edge: *e,
                    toward_head: false,
                },
            ],
        }
    }

    /// First Betti number `#edges - #vertices + 1`.
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Sum of the edge lengths.
    pub fn total_length(&self) -> Rational {
        self.edges
            .iter()
            .fold(Rational::zero(), |acc, e| acc + &e.length)
    }

    /// The canonical divisor `sum (valence(v) - 2) v`. Its degree is
    /// `2 genus - 2` and it is supported on vertices of valence != 2.
    pub fn canonical_divisor(self: &Arc<Self>) -> Divisor {
        let mut d = Divisor::zero(Arc::clone(self));
        for v in 0..self.vertices.len() {
            let c = self.valence(v) as i64 - 2;
            if c != 0 {
                d.add_point(Point::Vertex(v), c);
            }
        }
        d
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => *v < self.vertices.len(),
            Point::Interior(e, t) => {
                *e < self.edges.len()
                    && *t > Rational::zero()
                    && *t < self.edges[*e].length
            }
        }
    }

    pub fn describe_point(&self, p: &Point) -> String {
        match p {
            Point::Vertex(v) => self.vertices[*v].name.clone(),
            Point::Interior(e, t) => format!(
                "{}@{}",
                self.edges[*e].id,
                crate::rational::format_rational(t)
            ),
        }
    }

    /// Same graph with every edge orientation reversed. Used in tests to
    /// confirm orientation never affects results.
    pub fn reversed(&self) -> Arc<MetricGraph> {
        let g = MetricGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: e.id.clone(),
                    tail: e.head,
                    head: e.tail,
                    length: e.length.clone(),
                })
                .collect(),
        };
        Arc::new(g)
    }
}

/// A refinement of a metric graph at a finite point set. The refined graph
/// realizes the same metric space; `map_point` carries original points to
/// refined ones.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub original: Arc<MetricGraph>,
    pub refined: Arc<MetricGraph>,
    /// For each original edge, the cut offsets in increasing order.
    pub cuts: Vec<Vec<Rational>>,
    /// For each original edge, indices of the refined edges covering it in
    /// order; piece `k` spans `[cuts[k-1], cuts[k]]` of the original edge.
    pub pieces: Vec<Vec<usize>>,
    /// Refined vertex index of each original vertex (identity prefix).
    pub vertex_map: Vec<usize>,
    /// Refined vertex created for each cut, parallel to `cuts`.
    pub cut_vertices: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn map_point(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(self.vertex_map[*v]),
            Point::Interior(e, t) => {
                let cuts = &self.cuts[*e];
                // Position among cuts; exact hit becomes a refined vertex.
                let mut lo = Rational::zero();
                for (k, c) in cuts.iter().enumerate() {
                    if t == c {
                        return Point::Vertex(self.cut_vertices[*e][k]);
                    }
                    if t < c {
                        return Point::Interior(self.pieces[*e][k], t - &lo);
                    }
                    lo = c.clone();
                }
                Point::Interior(*self.pieces[*e].last().unwrap(), t - &lo)
            }
        }
    }

    pub fn map_divisor(&self, d: &Divisor) -> Divisor {
        let mut out = Divisor::zero(Arc::clone(&self.refined));
        for (p, c) in d.iter() {
            out.add_point(self.map_point(p), *c);
        }
        out
    }
}

/// Refines `graph` so that every point of `points` becomes a vertex.
/// Points not on the graph are an input error.
pub fn subdivide(graph: &Arc<MetricGraph>, points: &[Point]) -> Result<Subdivision> {
    let mut cuts: Vec<Vec<Rational>> = vec![Vec::new(); graph.edges().len()];
    for p in points {
        if !graph.contains_point(p) {
            return Err(Error::input("subdivision point not on graph".to_string()));
        }
        if let Point::Interior(e, t) = p {
            if !cuts[*e].contains(t) {
                cuts[*e].push(t.clone());
            }
        }
    }
    for c in &mut cuts {
        c.sort();
    }

    let mut names: Vec<String> = graph.vertices().iter().map(|v| v.name.clone()).collect();
    let mut edge_data: Vec<(String, String, String, Rational)> = Vec::new();
    let mut cut_vertices: Vec<Vec<usize>> = Vec::new();
    let mut pieces: Vec<Vec<usize>> = Vec::new();

    for (ei, e) in graph.edges().iter().enumerate() {
        let mut cvs = Vec::new();
        let mut epieces = Vec::new();
        let mut prev_name = names[e.tail].clone();
        let mut prev_off = Rational::zero();
        for (k, c) in cuts[ei].iter().enumerate() {
            let vname = format!("{}@{}", e.id, crate::rational::format_rational(c));
            cvs.push(names.len());
            names.push(vname.clone());
            epieces.push(edge_data.len());
            edge_data.push((
                format!("{}#{}", e.id, k),
                prev_name.clone(),
                vname.clone(),
                c - &prev_off,
            ));
            prev_name = vname;
            prev_off = c.clone();
        }
        epieces.push(edge_data.len());
        let last_id = if cuts[ei].is_empty() {
            e.id.clone()
        } else {
            format!("{}#{}", e.id, cuts[ei].len())
        };
        edge_data.push((
            last_id,
            prev_name,
            names[e.head].clone(),
            &e.length - &prev_off,
        ));
        cut_vertices.push(cvs);
        pieces.push(epieces);
    }

    let refined = MetricGraph::new(names, edge_data)?;
    let vertex_map = (0..graph.vertices().len()).collect();
    Ok(Subdivision {
        original: Arc::clone(graph),
        refined,
        cuts,
        pieces,
        vertex_map,
        cut_vertices,
    })
}
