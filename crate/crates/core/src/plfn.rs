//! Continuous piecewise-linear functions with integer slopes.
//!
//! A [`PLFunction`] stores, for every edge, a sorted breakpoint list running
//! from offset 0 to the edge length, plus the value at every vertex. The
//! breakpoint form is canonical: collinear interior breakpoints are dropped,
//! so structural equality coincides with function equality. All slopes are
//! integers; constructors reject anything else.

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point, TangentVector};
use crate::rational::{integer_slope, Rational};
use num_traits::Zero;
use std::sync::Arc;

pub type Profile = Vec<(Rational, Rational)>;

#[derive(Debug, Clone)]
pub struct PLFunction {
    graph: Arc<MetricGraph>,
    vertex_values: Vec<Rational>,
    profiles: Vec<Profile>,
}

impl PartialEq for PLFunction {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.vertex_values == other.vertex_values
            && self.profiles == other.profiles
    }
}
impl Eq for PLFunction {}

fn canonicalize_profile(profile: &mut Profile) {
    let mut i = 1;
    while i + 1 < profile.len() {
        let s_in = (&profile[i].1 - &profile[i - 1].1) * (&profile[i + 1].0 - &profile[i].0);
        let s_out = (&profile[i + 1].1 - &profile[i].1) * (&profile[i].0 - &profile[i - 1].0);
        if s_in == s_out {
            profile.remove(i);
        } else {
            i += 1;
        }
    }
}

impl PLFunction {
    /// Builds a function from per-edge breakpoint lists. Lists must start at
    /// offset 0 and end at the edge length, have strictly increasing offsets,
    /// integer slopes, and agree at shared vertices.
    pub fn from_profiles(graph: Arc<MetricGraph>, mut profiles: Vec<Profile>) -> Result<Self> {
        if profiles.len() != graph.edges().len() {
            return Err(Error::input("profile count != edge count".to_string()));
        }
        let mut vertex_values: Vec<Option<Rational>> = vec![None; graph.vertices().len()];
        for (ei, profile) in profiles.iter().enumerate() {
            let e = &graph.edges()[ei];
            if profile.len() < 2 {
                return Err(Error::input(format!(
                    "edge {:?}: profile needs entries at both endpoints",
                    e.id
                )));
            }
            if !profile[0].0.is_zero() || profile.last().unwrap().0 != e.length {
                return Err(Error::input(format!(
                    "edge {:?}: profile must span offsets 0..length",
                    e.id
                )));
            }
            for w in profile.windows(2) {
                if w[1].0 <= w[0].0 {
                    return Err(Error::input(format!(
                        "edge {:?}: breakpoints not strictly increasing",
                        e.id
                    )));
                }
                integer_slope(&w[0].0, &w[0].1, &w[1].0, &w[1].1).map_err(|_| {
                    Error::input(format!("edge {:?}: non-integer slope", e.id))
                })?;
            }
            for (v, val) in [
                (e.tail, &profile[0].1),
                (e.head, &profile.last().unwrap().1),
            ] {
                match &vertex_values[v] {
                    None => vertex_values[v] = Some(val.clone()),
                    Some(existing) if existing == val => {}
                    Some(_) => {
                        return Err(Error::input(format!(
                            "edge {:?}: vertex value mismatch (discontinuity)",
                            e.id
                        )))
                    }
                }
            }
        }
        let vertex_values = vertex_values
            .into_iter()
            .map(|v| v.ok_or_else(|| Error::input("isolated vertex".to_string())))
            .collect::<Result<Vec<_>>>()?;
        for p in &mut profiles {
            canonicalize_profile(p);
        }
        Ok(PLFunction {
            graph,
            vertex_values,
            profiles,
        })
    }

    /// Function linear on every edge, given by its vertex values.
    pub fn from_vertex_values(graph: Arc<MetricGraph>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != graph.vertices().len() {
            return Err(Error::input("value count != vertex count".to_string()));
        }
        let profiles = graph
            .edges()
            .iter()
            .map(|e| {
                vec![
                    (Rational::zero(), values[e.tail].clone()),
                    (e.length.clone(), values[e.head].clone()),
                ]
            })
            .collect();
        Self::from_profiles(graph, profiles)
    }

    pub fn constant(graph: Arc<MetricGraph>, c: Rational) -> Self {
        let values = vec![c; graph.vertices().len()];
        Self::from_vertex_values(graph, values).expect("constant is always valid")
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn profile(&self, edge: usize) -> &Profile {
        &self.profiles[edge]
    }

    pub fn vertex_value(&self, v: usize) -> &Rational {
        &self.vertex_values[v]
    }

    pub fn evaluate(&self, p: &Point) -> Rational {
        match p {
            Point::Vertex(v) => self.vertex_values[*v].clone(),
            Point::Interior(e, t) => {
                let profile = &self.profiles[*e];
                let idx = profile.partition_point(|(bt, _)| bt <= t);
                let (t0, v0) = &profile[idx - 1];
                if t0 == t {
                    return v0.clone();
                }
                let (t1, v1) = &profile[idx];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Outgoing slope along a tangent vector, always an integer.
    pub fn slope(&self, zeta: &TangentVector) -> i64 {
        let profile = &self.profiles[zeta.edge];
        let t = match &zeta.base {
            Point::Vertex(_) => {
                if zeta.toward_head {
                    Rational::zero()
                } else {
                    self.graph.edges()[zeta.edge].length.clone()
                }
            }
            Point::Interior(_, t) => t.clone(),
        };
        if zeta.toward_head {
            // segment covering [t, t+eps)
            let seg_start = profile.iter().rev().find(|(bt, _)| bt <= &t).unwrap();
            let seg_end = profile.iter().find(|(bt, _)| bt > &t).unwrap();
            integer_slope(&seg_start.0, &seg_start.1, &seg_end.0, &seg_end.1).unwrap()
        } else {
            let seg_start = profile.iter().rev().find(|(bt, _)| bt < &t).unwrap();
            let seg_end = profile.iter().find(|(bt, _)| bt >= &t).unwrap();
            -integer_slope(&seg_start.0, &seg_start.1, &seg_end.0, &seg_end.1).unwrap()
        }
    }

    /// `ord` at a point: minus the sum of outgoing slopes there.
    pub fn ord(&self, p: &Point) -> i64 {
        -self
            .graph
            .tangent_vectors(p)
            .iter()
            .map(|z| self.slope(z))
            .sum::<i64>()
    }

    /// The divisor of the function: `sum ord_x * x` over its bend locus.
    /// Always has degree 0.
    pub fn divisor(&self) -> Divisor {
        let mut d = Divisor::zero(Arc::clone(&self.graph));
        for (ei, profile) in self.profiles.iter().enumerate() {
            for k in 1..profile.len() - 1 {
                let s_in = integer_slope(
                    &profile[k - 1].0,
                    &profile[k - 1].1,
                    &profile[k].0,
                    &profile[k].1,
                )
                .unwrap();
                let s_out = integer_slope(
                    &profile[k].0,
                    &profile[k].1,
                    &profile[k + 1].0,
                    &profile[k + 1].1,
                )
                .unwrap();
                if s_in != s_out {
                    d.add_point(Point::Interior(ei, profile[k].0.clone()), s_in - s_out);
                }
            }
        }
        for v in 0..self.graph.vertices().len() {
            let o = self.ord(&Point::Vertex(v));
            d.add_point(Point::Vertex(v), o);
        }
        d
    }

    pub fn add_constant(&self, c: &Rational) -> PLFunction {
        let vertex_values = self.vertex_values.iter().map(|v| v + c).collect();
        let profiles = self
            .profiles
            .iter()
            .map(|p| p.iter().map(|(t, v)| (t.clone(), v + c)).collect())
            .collect();
        PLFunction {
            graph: Arc::clone(&self.graph),
            vertex_values,
            profiles,
        }
    }

    pub fn negate(&self) -> PLFunction {
        let vertex_values = self.vertex_values.iter().map(|v| -v).collect();
        let profiles = self
            .profiles
            .iter()
            .map(|p| p.iter().map(|(t, v)| (t.clone(), -v)).collect())
            .collect();
        PLFunction {
            graph: Arc::clone(&self.graph),
            vertex_values,
            profiles,
        }
    }

    /// Interior breakpoints of the function, as canonical points.
    pub fn breakpoints(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for (ei, profile) in self.profiles.iter().enumerate() {
            for (t, _) in &profile[1..profile.len() - 1] {
                out.push(Point::Interior(ei, t.clone()));
            }
        }
        out
    }

    pub fn max_over_graph(&self) -> Rational {
        self.extremum(true)
    }

    pub fn min_over_graph(&self) -> Rational {
        self.extremum(false)
    }

    fn extremum(&self, max: bool) -> Rational {
        let mut best: Option<Rational> = None;
        let mut consider = |v: &Rational| match &best {
            None => best = Some(v.clone()),
            Some(b) => {
                if (max && v > b) || (!max && v < b) {
                    best = Some(v.clone());
                }
            }
        };
        for p in &self.profiles {
            for (_, v) in p {
                consider(v);
            }
        }
        for v in &self.vertex_values {
            consider(v);
        }
        best.expect("nonempty graph")
    }

    /// If `self = other + c` for a constant `c`, returns `c`.
    pub fn compare_up_to_constant(&self, other: &PLFunction) -> Option<Rational> {
        if self.graph != other.graph {
            return None;
        }
        let c = &self.vertex_values[0] - &other.vertex_values[0];
        let shifted = other.add_constant(&c);
        if shifted == *self {
            Some(c)
        } else {
            None
        }
    }

    /// Pointwise sum. The divisor of the result is the sum of the divisors.
    pub fn pointwise_sum(&self, other: &PLFunction) -> Result<PLFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn pointwise_sub(&self, other: &PLFunction) -> Result<PLFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &PLFunction,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<PLFunction> {
        if self.graph != other.graph {
            return Err(Error::input("functions on different graphs".to_string()));
        }
        let mut profiles = Vec::with_capacity(self.profiles.len());
        for ei in 0..self.profiles.len() {
            let mut cuts: Vec<Rational> = self.profiles[ei]
                .iter()
                .chain(other.profiles[ei].iter())
                .map(|(t, _)| t.clone())
                .collect();
            cuts.sort();
            cuts.dedup();
            let profile = cuts
                .into_iter()
                .map(|t| {
                    let a = self.eval_on_edge(ei, &t);
                    let b = other.eval_on_edge(ei, &t);
                    (t, f(&a, &b))
                })
                .collect();
            profiles.push(profile);
        }
        PLFunction::from_profiles(Arc::clone(&self.graph), profiles)
    }

    /// Value at offset `t` of edge `ei` (endpoints included).
    pub fn eval_on_edge(&self, ei: usize, t: &Rational) -> Rational {
        let profile = &self.profiles[ei];
        let idx = profile.partition_point(|(bt, _)| bt <= t);
        if idx == 0 {
            return profile[0].1.clone();
        }
        let (t0, v0) = &profile[idx - 1];
        if t0 == t {
            return v0.clone();
        }
        let (t1, v1) = &profile[idx];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

/// Pointwise minimum of shifted functions: `min_i (f_i + a_i)`.
/// The result is re-canonicalized; it lies in any tropical submodule
/// containing the inputs.
pub fn tropical_combine(terms: &[(&PLFunction, Rational)]) -> Result<PLFunction> {
    if terms.is_empty() {
        return Err(Error::input("empty tropical combination".to_string()));
    }
    let graph = Arc::clone(terms[0].0.graph());
    for (f, _) in terms {
        if *f.graph() != graph {
            return Err(Error::input("functions on different graphs".to_string()));
        }
    }
    let mut profiles = Vec::with_capacity(graph.edges().len());
    for ei in 0..graph.edges().len() {
        let cuts = refined_cuts(&graph, terms, ei);
        let profile: Profile = cuts
            .into_iter()
            .map(|t| {
                let m = terms
                    .iter()
                    .map(|(f, a)| f.eval_on_edge(ei, &t) + a)
                    .min()
                    .unwrap();
                (t, m)
            })
            .collect();
        profiles.push(profile);
    }
    PLFunction::from_profiles(graph, profiles)
}

/// Offsets subdividing edge `ei` so that on each open cell every term is
/// affine and no two distinct terms cross: term breakpoints plus pairwise
/// crossing offsets.
pub(crate) fn refined_cuts(
    _graph: &Arc<MetricGraph>,
    terms: &[(&PLFunction, Rational)],
    ei: usize,
) -> Vec<Rational> {
    let mut cuts: Vec<Rational> = Vec::new();
    for (f, _) in terms {
        for (t, _) in f.profile(ei) {
            cuts.push(t.clone());
        }
    }
    cuts.sort();
    cuts.dedup();
    // pairwise crossings within each base cell
    let mut extra = Vec::new();
    for w in cuts.windows(2) {
        let (t0, t1) = (&w[0], &w[1]);
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let a0 = terms[i].0.eval_on_edge(ei, t0) + &terms[i].1;
                let a1 = terms[i].0.eval_on_edge(ei, t1) + &terms[i].1;
                let b0 = terms[j].0.eval_on_edge(ei, t0) + &terms[j].1;
                let b1 = terms[j].0.eval_on_edge(ei, t1) + &terms[j].1;
                let d0 = &a0 - &b0;
                let d1 = &a1 - &b1;
                if (d0 > Rational::zero() && d1 < Rational::zero())
                    || (d0 < Rational::zero() && d1 > Rational::zero())
                {
                    let t = t0 + (t1 - t0) * &d0 / (&d0 - &d1);
                    extra.push(t);
                }
            }
        }
    }
    cuts.extend(extra);
    cuts.sort();
    cuts.dedup();
    cuts
}
