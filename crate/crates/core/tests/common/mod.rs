//! Shared helpers for the integration suites: the seeded random graph,
//! divisor and function generators.

use rand::Rng;
use std::sync::Arc;
use tropls_core::divisor::Divisor;
use tropls_core::graph::{MetricGraph, Point};
use tropls_core::plfn::PLFunction;
use tropls_core::rational::{rat, Rational};

pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("TROPLS_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default)
}

/// Connected multigraph with at most `max_v` vertices and `max_e` edges,
/// rational lengths with denominator at most 4.
pub fn random_graph<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> Arc<MetricGraph> {
    let nv = rng.gen_range(1..=max_v);
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut len = |rng: &mut R| -> Rational {
        let p = rng.gen_range(1..=3i64);
        let q = rng.gen_range(1..=4i64);
        Rational::new(p.into(), q.into())
    };
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        edges.push((format!("t{i}"), names[j].clone(), names[i].clone(), len(rng)));
    }
    let extra = rng.gen_range(if nv == 1 { 1 } else { 0 }..=(max_e - edges.len()));
    for k in 0..extra {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        edges.push((format!("x{k}"), names[a].clone(), names[b].clone(), len(rng)));
    }
    MetricGraph::new(names, edges).expect("construction is connected")
}

/// A random point with offsets on the quarter grid of each edge.
pub fn random_point<R: Rng>(rng: &mut R, g: &Arc<MetricGraph>) -> Point {
    if rng.gen_bool(0.3) || g.edges().is_empty() {
        return Point::Vertex(rng.gen_range(0..g.vertices().len()));
    }
    let e = rng.gen_range(0..g.edges().len());
    let k = rng.gen_range(0..=4i64);
    let t = &g.edges()[e].length * Rational::new(k.into(), 4.into());
    g.point_on_edge(e, t).expect("grid offset on edge")
}

/// A random divisor of the exact requested degree.
pub fn random_divisor<R: Rng>(rng: &mut R, g: &Arc<MetricGraph>, degree: i64) -> Divisor {
    let mut d = Divisor::zero(Arc::clone(g));
    let spread = rng.gen_range(1..=3);
    let mut remaining = degree;
    for i in 0..spread {
        let c = if i + 1 == spread {
            remaining
        } else {
            rng.gen_range(-2..=3)
        };
        remaining -= c;
        d.add_point(random_point(rng, g), c);
    }
    d
}

/// A random PL function on a unit-length-edge graph: integer values at
/// vertices and edge midpoints.
pub fn random_function<R: Rng>(rng: &mut R, g: &Arc<MetricGraph>) -> PLFunction {
    let values: Vec<i64> = (0..g.vertices().len())
        .map(|_| rng.gen_range(-2..=2))
        .collect();
    let profiles = g
        .edges()
        .iter()
        .map(|e| {
            let mid: i64 = rng.gen_range(-2..=2);
            vec![
                (rat(0), rat(values[e.tail])),
                (&e.length / rat(2), rat(mid)),
                (e.length.clone(), rat(values[e.head])),
            ]
        })
        .collect();
    PLFunction::from_profiles(Arc::clone(g), profiles).expect("half-grid profiles are valid")
}

/// Unit-length random multigraph for function sampling.
pub fn random_unit_graph<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> Arc<MetricGraph> {
    let nv = rng.gen_range(1..=max_v);
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        edges.push((format!("t{i}"), names[j].clone(), names[i].clone(), rat(1)));
    }
    let extra = rng.gen_range(if nv == 1 { 1 } else { 0 }..=(max_e - edges.len()));
    for k in 0..extra {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        edges.push((format!("x{k}"), names[a].clone(), names[b].clone(), rat(1)));
    }
    MetricGraph::new(names, edges).expect("construction is connected")
}
