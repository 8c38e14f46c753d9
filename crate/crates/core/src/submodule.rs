//! Finitely generated tropical submodules of `R(D)`.
//!
//! A [`TropicalSubmodule`] is a base divisor `D` together with finitely many
//! generators, each satisfying `div(f) + D >= 0`; the represented set is the
//! closure of the generators under shifted pointwise minima. Membership is
//! decided by residuation, which also yields canonical coefficients.

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point, TangentVector};
use crate::plfn::{tropical_combine, PLFunction};
use crate::rational::{rat, Rational};
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct TropicalSubmodule {
    graph: Arc<MetricGraph>,
    divisor: Divisor,
    generators: Vec<PLFunction>,
}

/// The strictly increasing list of slopes realized by a module along a
/// tangent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeVector {
    pub tangent: TangentVector,
    pub slopes: Vec<i64>,
}

/// Exact covered locus `{x : some f in the module has div(f) + D >= x}`,
/// stored as closed intervals per edge plus a flag per vertex. The pairwise
/// sweep behind it is exhaustive for modules in which every element lies in
/// a two-generator submodule (rank <= 1 usage); for larger modules it is a
/// sound subset and `exhaustive` is false.
#[derive(Debug, Clone)]
pub struct CoveredLocus {
    pub graph: Arc<MetricGraph>,
    /// Closed intervals `[a, b]` (possibly degenerate) per edge, disjoint
    /// and sorted.
    pub edge_intervals: Vec<Vec<(Rational, Rational)>>,
    pub vertex_covered: Vec<bool>,
    pub exhaustive: bool,
}

impl CoveredLocus {
    pub fn is_all(&self) -> bool {
        self.vertex_covered.iter().all(|c| *c)
            && self
                .edge_intervals
                .iter()
                .enumerate()
                .all(|(ei, ivals)| {
                    ivals.len() == 1
                        && ivals[0].0.is_zero()
                        && ivals[0].1 == self.graph.edges()[ei].length
                })
    }

    /// Some uncovered point, if any.
    pub fn uncovered_point(&self) -> Option<Point> {
        for (v, c) in self.vertex_covered.iter().enumerate() {
            if !c {
                return Some(Point::Vertex(v));
            }
        }
        for (ei, ivals) in self.edge_intervals.iter().enumerate() {
            let len = &self.graph.edges()[ei].length;
            let mut lo = Rational::zero();
            for (a, b) in ivals {
                if *a > lo {
                    return Some(Point::Interior(ei, (&lo + a) / rat(2)));
                }
                lo = b.clone();
            }
            if &lo < len {
                return Some(Point::Interior(ei, (&lo + len) / rat(2)));
            }
        }
        None
    }
}

fn merge_intervals(mut ivals: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    ivals.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in ivals {
        match out.last_mut() {
            Some((_, ob)) if *ob >= a => {
                if b > *ob {
                    *ob = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

impl TropicalSubmodule {
    /// Checks every generator against the base divisor at construction.
    pub fn new(divisor: Divisor, generators: Vec<PLFunction>) -> Result<TropicalSubmodule> {
        if generators.is_empty() {
            return Err(Error::input("module needs at least one generator".to_string()));
        }
        let graph = Arc::clone(divisor.graph());
        for (i, f) in generators.iter().enumerate() {
            if f.graph() != &graph {
                return Err(Error::input("generator on wrong graph".to_string()));
            }
            if !f.divisor().add(&divisor).is_effective() {
                return Err(Error::input(format!(
                    "generator {i} does not satisfy div(f) + D >= 0"
                )));
            }
        }
        Ok(TropicalSubmodule {
            graph,
            divisor,
            generators,
        })
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn generators(&self) -> &[PLFunction] {
        &self.generators
    }

    /// Residuation membership test. Returns the canonical coefficients
    /// `a_i = max(psi - f_i)` when `min_i (f_i + a_i) = psi`, else `None`.
    pub fn membership(&self, psi: &PLFunction) -> Result<Option<Vec<Rational>>> {
        if psi.graph() != &self.graph {
            return Err(Error::input("function on wrong graph".to_string()));
        }
        let mut coeffs = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let diff = psi.pointwise_sub(g)?;
            coeffs.push(diff.max_over_graph());
        }
        let terms: Vec<(&PLFunction, Rational)> = self
            .generators
            .iter()
            .zip(coeffs.iter().cloned())
            .collect::<Vec<_>>();
        let combined = tropical_combine(&terms)?;
        if combined == *psi {
            Ok(Some(coeffs))
        } else {
            Ok(None)
        }
    }

    /// Greedy removal of generators expressible through the others. By the
    /// uniqueness of minimal generating sets the result does not depend on
    /// the scan order, up to per-generator constants.
    pub fn minimize_generators(&self) -> Result<TropicalSubmodule> {
        let mut gens = self.generators.clone();
        'outer: loop {
            if gens.len() == 1 {
                break;
            }
            for i in 0..gens.len() {
                let rest: Vec<PLFunction> = gens
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                let sub = TropicalSubmodule::new(self.divisor.clone(), rest)?;
                if sub.membership(&gens[i])?.is_some() {
                    gens.remove(i);
                    continue 'outer;
                }
            }
            break;
        }
        TropicalSubmodule::new(self.divisor.clone(), gens)
    }

    /// Sorted distinct slopes realized along `zeta`. Slopes of combinations
    /// agree with the slope of a term achieving the minimum just past the
    /// base point, so generator slopes together with slopes of pairwise
    /// minima (which add nothing new) are exhaustive.
    pub fn slope_vector(&self, zeta: &TangentVector) -> SlopeVector {
        let mut slopes: Vec<i64> = self.generators.iter().map(|g| g.slope(zeta)).collect();
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                // aligned pair minimum at the base point
                let gi = &self.generators[i];
                let gj = &self.generators[j];
                let t = gi.evaluate(&zeta.base) - gj.evaluate(&zeta.base);
                let m = tropical_combine(&[(gi, rat(0)), (gj, t)]).expect("same graph");
                slopes.push(m.slope(zeta));
            }
        }
        slopes.sort_unstable();
        slopes.dedup();
        SlopeVector {
            tangent: zeta.clone(),
            slopes,
        }
    }

    /// Exact covered locus via the pairwise scalar sweep: a point is covered
    /// when it supports `div(f) + D` for a single generator, or when some
    /// pair difference is non-constant around it (sweeping the relative
    /// scalar then produces a bend exactly there).
    pub fn covered_locus(&self) -> CoveredLocus {
        let nv = self.graph.vertices().len();
        let ne = self.graph.edges().len();
        let mut vertex_covered = vec![false; nv];
        let mut edge_intervals: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); ne];

        // single-generator supports
        for g in &self.generators {
            let supp = g.divisor().add(&self.divisor);
            for (p, c) in supp.iter() {
                if *c <= 0 {
                    continue;
                }
                match p {
                    Point::Vertex(v) => vertex_covered[*v] = true,
                    Point::Interior(e, t) => {
                        edge_intervals[*e].push((t.clone(), t.clone()));
                    }
                }
            }
        }

        // pairwise sweeps: closure of the non-constancy locus of differences
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let diff = self.generators[i]
                    .pointwise_sub(&self.generators[j])
                    .expect("same graph");
                for ei in 0..ne {
                    let profile = diff.profile(ei);
                    for w in profile.windows(2) {
                        if w[0].1 != w[1].1 {
                            edge_intervals[ei].push((w[0].0.clone(), w[1].0.clone()));
                            if w[0].0.is_zero() {
                                vertex_covered[self.graph.edges()[ei].tail] = true;
                            }
                            if w[1].0 == self.graph.edges()[ei].length {
                                vertex_covered[self.graph.edges()[ei].head] = true;
                            }
                        }
                    }
                }
            }
        }

        let edge_intervals = edge_intervals.into_iter().map(merge_intervals).collect();
        CoveredLocus {
            graph: Arc::clone(&self.graph),
            edge_intervals,
            vertex_covered,
            exhaustive: self.generators.len() <= 2,
        }
    }

    /// Interior breakpoints of all generators, the natural refinement set
    /// for slope bookkeeping.
    pub fn generator_breakpoints(&self) -> Vec<Point> {
        let mut pts = Vec::new();
        for g in &self.generators {
            pts.extend(g.breakpoints());
        }
        pts.sort();
        pts.dedup();
        pts
    }
}
