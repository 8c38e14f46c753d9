//! Tropical dependence and independence with verifiable witnesses.
//!
//! A combination `min_i (f_i + a_i)` is a dependence when the minimum is
//! achieved at least twice at every point, and a certificate of independence
//! when every term achieves the minimum uniquely somewhere. Both conditions
//! are decided exactly on the refined envelope. The search in
//! [`decide_dependence`] is a monotone raising loop: while some term is the
//! unique minimizer somewhere, raise its offset by the least amount that
//! removes all of its unique achievement. Dependent answers always carry a
//! verified witness; independent answers carry a certificate when one was
//! found, otherwise the exhaustion log says why the search stopped.

use crate::envelope::EnvelopeAnalysis;
use crate::error::{Error, Result};
use crate::graph::Point;
use crate::plfn::{tropical_combine, PLFunction};
use crate::rational::{rat, Rational};
use num_traits::Zero;
use std::collections::HashSet;

#[derive(Debug, Clone)]
pub struct CellWitness {
    pub sample: Point,
    pub achievers: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum CombinationVerdict {
    /// Minimum achieved at least twice on every envelope cell.
    Dependence { cells: Vec<CellWitness> },
    /// Every index achieves the minimum uniquely somewhere.
    Certificate { unique_points: Vec<(usize, Point)> },
    /// Neither: a cell with a unique achiever plus an index that never
    /// achieves uniquely.
    Neither {
        unique_at: (usize, Point),
        never_unique: usize,
    },
}

impl CombinationVerdict {
    pub fn is_dependence(&self) -> bool {
        matches!(self, CombinationVerdict::Dependence { .. })
    }
    pub fn is_certificate(&self) -> bool {
        matches!(self, CombinationVerdict::Certificate { .. })
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchLog {
    pub iterations: usize,
    pub deactivated: Vec<usize>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum DependenceAnswer {
    Dependent {
        coeffs: Vec<Rational>,
        witness: CombinationVerdict,
    },
    Independent {
        certificate: Option<(Vec<Rational>, CombinationVerdict)>,
        log: SearchLog,
    },
    Undetermined {
        log: SearchLog,
    },
}

impl DependenceAnswer {
    pub fn is_dependent(&self) -> bool {
        matches!(self, DependenceAnswer::Dependent { .. })
    }
    pub fn is_independent(&self) -> bool {
        matches!(self, DependenceAnswer::Independent { .. })
    }
}

/// Exact classification of `min_i (f_i + a_i)`.
pub fn verify_combination(
    fns: &[PLFunction],
    coeffs: &[Rational],
) -> Result<CombinationVerdict> {
    if fns.len() < 2 {
        return Err(Error::input("need at least two functions".to_string()));
    }
    if fns.len() != coeffs.len() {
        return Err(Error::input("coefficient count mismatch".to_string()));
    }
    for f in &fns[1..] {
        if f.graph() != fns[0].graph() {
            return Err(Error::input("functions on different graphs".to_string()));
        }
    }
    let terms: Vec<(&PLFunction, Rational)> =
        fns.iter().zip(coeffs.iter().cloned()).collect();
    let env = EnvelopeAnalysis::new(&terms);
    classify(&env, fns.len())
}

fn classify(env: &EnvelopeAnalysis, n: usize) -> Result<CombinationVerdict> {
    let unique_cells = env.unique_cells();
    if unique_cells.is_empty() {
        let mut cells = Vec::new();
        for (ei, ec) in env.per_edge.iter().enumerate() {
            for (k, a) in ec.achievers.iter().enumerate() {
                cells.push(CellWitness {
                    sample: env.cell_sample(ei, k),
                    achievers: a.clone(),
                });
            }
        }
        return Ok(CombinationVerdict::Dependence { cells });
    }
    let mut unique_point: Vec<Option<Point>> = vec![None; n];
    for (i, ei, k) in &unique_cells {
        if unique_point[*i].is_none() {
            unique_point[*i] = Some(env.cell_sample(*ei, *k));
        }
    }
    if unique_point.iter().all(|p| p.is_some()) {
        return Ok(CombinationVerdict::Certificate {
            unique_points: unique_point
                .into_iter()
                .enumerate()
                .map(|(i, p)| (i, p.unwrap()))
                .collect(),
        });
    }
    let never = unique_point.iter().position(|p| p.is_none()).unwrap();
    let (i, ei, k) = unique_cells[0];
    Ok(CombinationVerdict::Neither {
        unique_at: (i, env.cell_sample(ei, k)),
        never_unique: never,
    })
}

fn oscillation(diff: &PLFunction) -> Rational {
    diff.max_over_graph() - diff.min_over_graph()
}

fn total_pieces(fns: &[PLFunction]) -> usize {
    let graph = fns[0].graph();
    fns.iter()
        .map(|f| {
            (0..graph.edges().len())
                .map(|e| f.profile(e).len() - 1)
                .sum::<usize>()
        })
        .sum()
}

/// Critical offsets for the pair `(f_i, f_j)`: the values of `f_i - f_j`
/// at its breakpoints. A shift of `f_j` by any other amount crosses `f_i`
/// transversally wherever they meet.
fn tangency_values(fi: &PLFunction, fj: &PLFunction) -> Vec<Rational> {
    let diff = fi.pointwise_sub(fj).expect("same graph");
    let graph = diff.graph().clone();
    let mut vals = Vec::new();
    for ei in 0..graph.edges().len() {
        for (_, v) in diff.profile(ei) {
            vals.push(v.clone());
        }
    }
    vals.sort();
    vals.dedup();
    vals
}

/// Values plus midpoints of consecutive values plus points beyond both
/// ends; hits every cell of the 1-d arrangement.
fn with_midpoints(vals: &[Rational]) -> Vec<Rational> {
    if vals.is_empty() {
        return vec![Rational::zero()];
    }
    let mut out = Vec::with_capacity(2 * vals.len() + 1);
    out.push(&vals[0] - rat(1));
    for (k, v) in vals.iter().enumerate() {
        out.push(v.clone());
        if k + 1 < vals.len() {
            out.push((v + &vals[k + 1]) / rat(2));
        }
    }
    out.push(vals.last().unwrap() + rat(1));
    out
}

/// Searches for a certificate of three functions. Certificates form an
/// open subset of offset space whose boundary lies on the three tangency
/// line families, so sampling one point inside every open cell of that
/// arrangement is exhaustive: sweep the first offset through all vertex
/// abscissae, then cut the slice by the two remaining families.
fn grid_certificate_3(fns: &[PLFunction]) -> Result<Option<(Vec<Rational>, CombinationVerdict)>> {
    let v01 = tangency_values(&fns[0], &fns[1]);
    let v02 = tangency_values(&fns[0], &fns[2]);
    let v12 = tangency_values(&fns[1], &fns[2]);
    let mut a1_cuts = v01.clone();
    for b in &v02 {
        for d in &v12 {
            a1_cuts.push(b - d);
        }
    }
    a1_cuts.sort();
    a1_cuts.dedup();
    for a1 in with_midpoints(&a1_cuts) {
        let mut a2_cuts = v02.clone();
        for d in &v12 {
            a2_cuts.push(&a1 + d);
        }
        a2_cuts.sort();
        a2_cuts.dedup();
        for a2 in with_midpoints(&a2_cuts) {
            let coeffs = vec![Rational::zero(), a1.clone(), a2];
            let verdict = verify_combination(fns, &coeffs)?;
            if verdict.is_certificate() {
                return Ok(Some((coeffs, verdict)));
            }
        }
    }
    Ok(None)
}

fn grid_certificate_2(fns: &[PLFunction]) -> Result<Option<(Vec<Rational>, CombinationVerdict)>> {
    for a1 in with_midpoints(&tangency_values(&fns[0], &fns[1])) {
        let coeffs = vec![Rational::zero(), a1];
        let verdict = verify_combination(fns, &coeffs)?;
        if verdict.is_certificate() {
            return Ok(Some((coeffs, verdict)));
        }
    }
    Ok(None)
}

fn certificate_search(fns: &[PLFunction]) -> Result<Option<(Vec<Rational>, CombinationVerdict)>> {
    match fns.len() {
        2 => grid_certificate_2(fns),
        3 => grid_certificate_3(fns),
        _ => Ok(None),
    }
}

/// Offsets placing every deactivated term strictly above the envelope of
/// the active ones, then a full verification.
fn finish_dependent(
    fns: &[PLFunction],
    coeffs: &[Option<Rational>],
) -> Result<DependenceAnswer> {
    let active_terms: Vec<(&PLFunction, Rational)> = fns
        .iter()
        .zip(coeffs.iter())
        .filter_map(|(f, a)| a.clone().map(|a| (f, a)))
        .collect();
    let env_fn = tropical_combine(&active_terms)?;
    let mut full: Vec<Rational> = fns
        .iter()
        .zip(coeffs.iter())
        .map(|(f, a)| match a {
            Some(a) => a.clone(),
            None => env_fn.pointwise_sub(f).unwrap().max_over_graph() + rat(1),
        })
        .collect();
    let min = full.iter().min().cloned().unwrap();
    for a in &mut full {
        *a -= &min;
    }
    let verdict = verify_combination(fns, &full)?;
    if !verdict.is_dependence() {
        return Err(Error::internal(
            "raising loop produced a non-verifying dependence".to_string(),
        ));
    }
    Ok(DependenceAnswer::Dependent {
        coeffs: full,
        witness: verdict,
    })
}

fn state_key(coeffs: &[Option<Rational>]) -> String {
    let finite: Vec<&Rational> = coeffs.iter().flatten().collect();
    let min = finite.iter().min().cloned().cloned().unwrap_or_default();
    coeffs
        .iter()
        .map(|a| match a {
            Some(a) => crate::rational::format_rational(&(a - &min)),
            None => "inf".to_string(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Decides tropical dependence of a finite set of functions.
pub fn decide_dependence(fns: &[PLFunction]) -> Result<DependenceAnswer> {
    if fns.len() < 2 {
        return Err(Error::input("need at least two functions".to_string()));
    }
    for f in &fns[1..] {
        if f.graph() != fns[0].graph() {
            return Err(Error::input("functions on different graphs".to_string()));
        }
    }
    let n = fns.len();
    let mut log = SearchLog::default();

    // constant-difference pair: immediate dependence
    for i in 0..n {
        for j in i + 1..n {
            if let Some(c) = fns[i].compare_up_to_constant(&fns[j]) {
                // f_i = f_j + c, so f_i + 0 and f_j + c agree everywhere
                let mut coeffs: Vec<Option<Rational>> = vec![None; n];
                coeffs[i] = Some(Rational::zero());
                coeffs[j] = Some(c);
                log.notes.push(format!("constant difference pair ({i},{j})"));
                return finish_dependent(fns, &coeffs);
            }
        }
    }

    // distinct slopes along one tangent vector imply independence
    if let Some(zeta) = distinct_slope_tangent(fns) {
        log.notes.push(format!(
            "distinct slopes along a tangent at {}",
            fns[0].graph().describe_point(&zeta.base)
        ));
        let certificate = certificate_search(fns)?;
        return Ok(DependenceAnswer::Independent { certificate, log });
    }

    // the monotone raising loop
    let mut osc_max = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let o = oscillation(&fns[i].pointwise_sub(&fns[j])?);
            if o > osc_max {
                osc_max = o;
            }
        }
    }
    let bound = rat(1) + rat(n as i64) * &osc_max;
    let cap = 64 * n * total_pieces(fns);
    let mut coeffs: Vec<Option<Rational>> = vec![Some(Rational::zero()); n];
    let mut seen: HashSet<String> = HashSet::new();

    for iter in 0..cap {
        log.iterations = iter + 1;
        let active: Vec<usize> = (0..n).filter(|i| coeffs[*i].is_some()).collect();
        if active.len() <= 1 {
            log.notes
                .push("all but one function deactivated beyond the offset bound".to_string());
            let certificate = certificate_search(fns)?;
            return Ok(DependenceAnswer::Independent { certificate, log });
        }
        if !seen.insert(state_key(&coeffs)) {
            log.notes
                .push("offset state repeated up to a uniform shift".to_string());
            let certificate = certificate_search(fns)?;
            return Ok(DependenceAnswer::Independent { certificate, log });
        }

        let active_fns: Vec<PLFunction> = active.iter().map(|&i| fns[i].clone()).collect();
        let active_coeffs: Vec<Rational> =
            active.iter().map(|&i| coeffs[i].clone().unwrap()).collect();
        let verdict = verify_combination(&active_fns, &active_coeffs)?;
        match &verdict {
            CombinationVerdict::Dependence { .. } => {
                return finish_dependent(fns, &coeffs);
            }
            CombinationVerdict::Certificate { unique_points } if active.len() == n => {
                let cert = CombinationVerdict::Certificate {
                    unique_points: unique_points.clone(),
                };
                return Ok(DependenceAnswer::Independent {
                    certificate: Some((active_coeffs, cert)),
                    log,
                });
            }
            _ => {}
        }

        // minimal raises killing each unique achiever
        let terms: Vec<(&PLFunction, Rational)> = active
            .iter()
            .map(|&i| (&fns[i], coeffs[i].clone().unwrap()))
            .collect();
        let env = EnvelopeAnalysis::new(&terms);
        let unique = env.uniquely_achieving_terms(active.len());
        let mut best: Option<(Rational, usize)> = None;
        for (k, is_unique) in unique.iter().enumerate() {
            if !is_unique {
                continue;
            }
            let others: Vec<(&PLFunction, Rational)> = terms
                .iter()
                .enumerate()
                .filter(|(m, _)| *m != k)
                .map(|(_, t)| (t.0, t.1.clone()))
                .collect();
            let env_others = tropical_combine(&others)?;
            let target = env_others
                .pointwise_sub(&fns[active[k]])?
                .max_over_graph();
            let raise = &target - coeffs[active[k]].as_ref().unwrap();
            debug_assert!(raise > Rational::zero());
            match &best {
                Some((r, _)) if *r <= raise => {}
                _ => best = Some((raise, k)),
            }
        }
        let (raise, k) = best.ok_or_else(|| {
            Error::internal("no unique achiever despite non-dependence verdict".to_string())
        })?;
        let i = active[k];
        let new_val = coeffs[i].clone().unwrap() + raise;
        let finite_min = coeffs
            .iter()
            .flatten()
            .min()
            .cloned()
            .unwrap_or_default();
        if &new_val - &finite_min > bound {
            coeffs[i] = None;
            log.deactivated.push(i);
        } else {
            coeffs[i] = Some(new_val);
        }
    }

    log.notes.push("iteration cap exceeded".to_string());
    Ok(DependenceAnswer::Undetermined { log })
}

/// A tangent along which all functions have pairwise distinct slopes, if
/// one exists on the common refinement.
fn distinct_slope_tangent(fns: &[PLFunction]) -> Option<crate::graph::TangentVector> {
    let graph = fns[0].graph();
    for ei in 0..graph.edges().len() {
        let mut cuts: Vec<Rational> = Vec::new();
        for f in fns {
            for (t, _) in f.profile(ei) {
                cuts.push(t.clone());
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let mid = (&w[0] + &w[1]) / rat(2);
            let zeta = crate::graph::TangentVector {
                base: Point::Interior(ei, mid),
                edge: ei,
                toward_head: true,
            };
            let mut slopes: Vec<i64> = fns.iter().map(|f| f.slope(&zeta)).collect();
            slopes.sort_unstable();
            let len = slopes.len();
            slopes.dedup();
            if slopes.len() == len {
                return Some(zeta);
            }
        }
    }
    None
}

/// Fallback oracle for exactly three functions: enumerates offset pairs
/// from the pairwise tangency grid and verifies each candidate exactly.
/// Completeness of the grid is a tested conjecture, so a negative answer is
/// independence by exhaustion, not a certificate.
pub fn exhaustive_dependence_3(fns: &[PLFunction]) -> Result<DependenceAnswer> {
    if fns.len() != 3 {
        return Err(Error::input("exactly three functions required".to_string()));
    }
    let mut log = SearchLog::default();
    let v01 = tangency_values(&fns[0], &fns[1]);
    let v02 = tangency_values(&fns[0], &fns[2]);
    let v12 = tangency_values(&fns[1], &fns[2]);

    let mut candidates: Vec<(Rational, Rational)> = Vec::new();
    for a1 in &v01 {
        for a2 in &v02 {
            candidates.push((a1.clone(), a2.clone()));
        }
        for d in &v12 {
            candidates.push((a1.clone(), a1 + d));
        }
    }
    for a2 in &v02 {
        for d in &v12 {
            candidates.push((a2 - d, a2.clone()));
        }
    }
    candidates.sort();
    candidates.dedup();
    log.iterations = candidates.len();

    for (a1, a2) in candidates {
        let coeffs = vec![Rational::zero(), a1, a2];
        let verdict = verify_combination(fns, &coeffs)?;
        if verdict.is_dependence() {
            return Ok(DependenceAnswer::Dependent {
                coeffs,
                witness: verdict,
            });
        }
    }
    log.notes
        .push("no dependence on the pairwise tangency grid".to_string());
    let certificate = certificate_search(fns)?;
    Ok(DependenceAnswer::Independent { certificate, log })
}
