//! Lower envelopes of shifted PL functions.
//!
//! An [`EnvelopeAnalysis`] refines every edge so that on each open cell all
//! terms are affine and no two cross; the set of terms achieving the minimum
//! is then constant per cell, which makes achievement questions exact.

use crate::graph::{MetricGraph, Point};
use crate::plfn::{refined_cuts, PLFunction};
use crate::rational::Rational;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct EdgeCells {
    /// Cut offsets including 0 and the edge length.
    pub cuts: Vec<Rational>,
    /// Indices of terms achieving the minimum on each open cell
    /// `(cuts[k], cuts[k+1])`.
    pub achievers: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct EnvelopeAnalysis {
    pub graph: Arc<MetricGraph>,
    pub per_edge: Vec<EdgeCells>,
}

impl EnvelopeAnalysis {
    pub fn new(terms: &[(&PLFunction, Rational)]) -> EnvelopeAnalysis {
        let graph = Arc::clone(terms[0].0.graph());
        let mut per_edge = Vec::with_capacity(graph.edges().len());
        for ei in 0..graph.edges().len() {
            let cuts = refined_cuts(&graph, terms, ei);
            let mut achievers = Vec::with_capacity(cuts.len().saturating_sub(1));
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / crate::rational::rat(2);
                let vals: Vec<Rational> = terms
                    .iter()
                    .map(|(f, a)| f.eval_on_edge(ei, &mid) + a)
                    .collect();
                let m = vals.iter().min().unwrap().clone();
                achievers.push(
                    vals.iter()
                        .enumerate()
                        .filter(|(_, v)| **v == m)
                        .map(|(i, _)| i)
                        .collect(),
                );
            }
            per_edge.push(EdgeCells { cuts, achievers });
        }
        EnvelopeAnalysis { graph, per_edge }
    }

    /// Cells with exactly one achiever, as `(term, edge, cell index)`.
    pub fn unique_cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (ei, cells) in self.per_edge.iter().enumerate() {
            for (k, a) in cells.achievers.iter().enumerate() {
                if a.len() == 1 {
                    out.push((a[0], ei, k));
                }
            }
        }
        out
    }

    /// A sample point in the interior of a cell.
    pub fn cell_sample(&self, edge: usize, cell: usize) -> Point {
        let cells = &self.per_edge[edge];
        let mid = (&cells.cuts[cell] + &cells.cuts[cell + 1]) / crate::rational::rat(2);
        Point::Interior(edge, mid)
    }

    /// True when every cell has at least two achievers.
    pub fn min_achieved_twice_everywhere(&self) -> bool {
        self.per_edge
            .iter()
            .all(|c| c.achievers.iter().all(|a| a.len() >= 2))
    }

    /// Terms that achieve the minimum uniquely on some cell.
    pub fn uniquely_achieving_terms(&self, n_terms: usize) -> Vec<bool> {
        let mut unique = vec![false; n_terms];
        for (i, _, _) in self.unique_cells() {
            unique[i] = true;
        }
        unique
    }
}
