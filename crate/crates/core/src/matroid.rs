//! Matroids, valuated matroids, and the Levi-graph rank-2 construction.

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::plfn::PLFunction;
use crate::rational::{rat, Rational};
use crate::submodule::TropicalSubmodule;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::sync::Arc;

/// A matroid given by its circuit collection.
#[derive(Debug, Clone)]
pub struct Matroid {
    pub elements: Vec<String>,
    pub circuits: Vec<BTreeSet<usize>>,
    pub declared_rank: usize,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomsReport {
    pub failures: Vec<String>,
}

impl AxiomsReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Matroid {
    pub fn from_circuits(
        elements: Vec<String>,
        circuits: Vec<Vec<String>>,
        declared_rank: usize,
    ) -> Result<Matroid> {
        let index = |name: &str| {
            elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::input(format!("unknown element {name:?}")))
        };
        let mut cs = Vec::new();
        for c in circuits {
            let mut set = BTreeSet::new();
            for name in &c {
                set.insert(index(name)?);
            }
            if set.is_empty() {
                return Err(Error::input("empty circuit".to_string()));
            }
            if !cs.contains(&set) {
                cs.push(set);
            }
        }
        Ok(Matroid {
            elements,
            circuits: cs,
            declared_rank,
        })
    }

    /// Simple rank-3 matroid from a line geometry: the circuits are the
    /// collinear triples together with the quadruples containing no
    /// collinear triple.
    pub fn from_lines(elements: Vec<String>, lines: Vec<Vec<String>>) -> Result<Matroid> {
        let n = elements.len();
        let index = |name: &str| {
            elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::input(format!("unknown element {name:?}")))
        };
        let mut line_sets: Vec<BTreeSet<usize>> = Vec::new();
        for l in &lines {
            let mut set = BTreeSet::new();
            for name in l {
                set.insert(index(name)?);
            }
            if set.len() < 3 {
                return Err(Error::input("a line needs at least three points".to_string()));
            }
            line_sets.push(set);
        }
        let mut circuits: Vec<BTreeSet<usize>> = Vec::new();
        let collinear = |a: usize, b: usize, c: usize| -> bool {
            line_sets
                .iter()
                .any(|l| l.contains(&a) && l.contains(&b) && l.contains(&c))
        };
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if collinear(a, b, c) {
                        circuits.push([a, b, c].into_iter().collect());
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let quad = [a, b, c, d];
                        let has_triple = circuits.iter().any(|t| {
                            t.len() == 3 && t.iter().all(|x| quad.contains(x))
                        });
                        if !has_triple {
                            circuits.push(quad.into_iter().collect());
                        }
                    }
                }
            }
        }
        Ok(Matroid {
            elements,
            circuits,
            declared_rank: 3,
        })
    }

    fn is_independent(&self, set: &BTreeSet<usize>) -> bool {
        !self.circuits.iter().any(|c| c.is_subset(set))
    }

    /// Size of the largest independent set, by exhaustive search.
    pub fn rank(&self) -> usize {
        let n = self.elements.len();
        assert!(n <= 20, "rank search limited to small ground sets");
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            let set: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if set.len() > best && self.is_independent(&set) {
                best = set.len();
            }
        }
        best
    }

    pub fn is_simple(&self) -> bool {
        self.circuits.iter().all(|c| c.len() >= 3)
    }

    fn describe_set(&self, s: &BTreeSet<usize>) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.elements[*i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Exhaustive verification of the circuit axioms and the rank formula.
    pub fn axioms_check(&self) -> AxiomsReport {
        let mut report = AxiomsReport::default();
        for (i, c1) in self.circuits.iter().enumerate() {
            for (j, c2) in self.circuits.iter().enumerate() {
                if i != j && c1.is_subset(c2) {
                    report.failures.push(format!(
                        "circuit {} contains circuit {}",
                        self.describe_set(c2),
                        self.describe_set(c1)
                    ));
                }
            }
        }
        for (i, c1) in self.circuits.iter().enumerate() {
            for (j, c2) in self.circuits.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &e in c1.intersection(c2) {
                    for &f in c1.difference(c2) {
                        let union: BTreeSet<usize> =
                            c1.union(c2).copied().filter(|x| *x != e).collect();
                        let found = self
                            .circuits
                            .iter()
                            .any(|c3| c3.contains(&f) && c3.is_subset(&union));
                        if !found {
                            report.failures.push(format!(
                                "exchange fails for {} and {} at {}",
                                self.describe_set(c1),
                                self.describe_set(c2),
                                self.elements[e]
                            ));
                        }
                    }
                }
            }
        }
        let r = self.rank();
        if r != self.declared_rank {
            report
                .failures
                .push(format!("rank is {r}, declared {}", self.declared_rank));
        }
        report
    }

    /// Rank-2 flats of a simple rank-3 matroid: maximal sets of size >= 2
    /// such that every 3-circuit meeting them twice lies inside. Every pair
    /// of elements lies in exactly one flat.
    pub fn rank2_flats(&self) -> Result<Vec<BTreeSet<usize>>> {
        if !self.is_simple() {
            return Err(Error::input("matroid is not simple".to_string()));
        }
        let n = self.elements.len();
        let mut flats: Vec<BTreeSet<usize>> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut f: BTreeSet<usize> = [a, b].into_iter().collect();
                loop {
                    let mut grew = false;
                    for c in self.circuits.iter().filter(|c| c.len() == 3) {
                        if c.intersection(&f).count() >= 2 && !c.is_subset(&f) {
                            f.extend(c.iter().copied());
                            grew = true;
                        }
                    }
                    if !grew {
                        break;
                    }
                }
                if !flats.contains(&f) {
                    flats.push(f);
                }
            }
        }
        // pair coverage sanity
        for a in 0..n {
            for b in a + 1..n {
                let count = flats
                    .iter()
                    .filter(|f| f.contains(&a) && f.contains(&b))
                    .count();
                if count != 1 {
                    return Err(Error::internal(format!(
                        "pair ({},{}) lies in {count} flats",
                        self.elements[a], self.elements[b]
                    )));
                }
            }
        }
        flats.sort();
        Ok(flats)
    }
}

/// Levi graph of a simple rank-3 matroid: bipartite on elements and rank-2
/// flats, unit edge lengths, with an edge when the element lies in the flat.
#[derive(Debug, Clone)]
pub struct LeviGraph {
    pub graph: Arc<MetricGraph>,
    pub flats: Vec<BTreeSet<usize>>,
    /// Vertex index of each matroid element.
    pub element_vertices: Vec<usize>,
    /// Vertex index of each flat.
    pub flat_vertices: Vec<usize>,
}

pub fn levi_graph(m: &Matroid) -> Result<LeviGraph> {
    let flats = m.rank2_flats()?;
    let mut names: Vec<String> = m.elements.clone();
    let element_vertices: Vec<usize> = (0..m.elements.len()).collect();
    let mut flat_vertices = Vec::new();
    for (fi, f) in flats.iter().enumerate() {
        flat_vertices.push(names.len());
        let members: Vec<&str> = f.iter().map(|i| m.elements[*i].as_str()).collect();
        names.push(format!("f{}({})", fi, members.join("")));
    }
    let mut edges = Vec::new();
    for (fi, f) in flats.iter().enumerate() {
        for &e in f {
            edges.push((
                format!("{}-f{}", m.elements[e], fi),
                m.elements[e].clone(),
                names[flat_vertices[fi]].clone(),
                rat(1),
            ));
        }
    }
    let graph = MetricGraph::new(names, edges)?;
    Ok(LeviGraph {
        graph,
        flats,
        element_vertices,
        flat_vertices,
    })
}

/// The rank-2 construction on the Levi graph: `D = sum of element vertices`
/// and one generator per element, taking value 2 at its own vertex, 1 at
/// incident flats, 0 elsewhere.
pub fn cartwright_series(m: &Matroid) -> Result<(LeviGraph, Divisor, TropicalSubmodule)> {
    let levi = levi_graph(m)?;
    let g = &levi.graph;
    let divisor = Divisor::from_coeffs(
        Arc::clone(g),
        levi.element_vertices
            .iter()
            .map(|v| (Point::Vertex(*v), 1))
            .collect(),
    );
    let mut gens = Vec::new();
    for (e, &ev) in levi.element_vertices.iter().enumerate() {
        let mut values = vec![Rational::zero(); g.vertices().len()];
        values[ev] = rat(2);
        for (fi, f) in levi.flats.iter().enumerate() {
            if f.contains(&e) {
                values[levi.flat_vertices[fi]] = rat(1);
            }
        }
        gens.push(PLFunction::from_vertex_values(Arc::clone(g), values)?);
    }
    let module = TropicalSubmodule::new(divisor.clone(), gens)?;
    Ok((levi, divisor, module))
}

/// A point of tropical projective space: coordinates up to a common shift,
/// `None` meaning infinity, not all infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPoint {
    pub coords: Vec<Option<Rational>>,
}

impl TropicalPoint {
    pub fn finite(coords: Vec<Rational>) -> TropicalPoint {
        TropicalPoint {
            coords: coords.into_iter().map(Some).collect(),
        }
    }
}

/// A valuated circuit, stored as the scaling-class representative with
/// minimum value 0; `None` is infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuatedCircuit {
    pub values: Vec<Option<Rational>>,
}

impl ValuatedCircuit {
    pub fn new(mut values: Vec<Option<Rational>>) -> Result<ValuatedCircuit> {
        let min = values
            .iter()
            .flatten()
            .min()
            .cloned()
            .ok_or_else(|| Error::input("all-infinite valuated circuit".to_string()))?;
        for v in values.iter_mut().flatten() {
            *v -= &min;
        }
        Ok(ValuatedCircuit { values })
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_some())
            .map(|(i, _)| i)
            .collect()
    }

    fn shifted(&self, a: &Rational) -> Vec<Option<Rational>> {
        self.values
            .iter()
            .map(|v| v.as_ref().map(|v| v + a))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ValuatedMatroid {
    pub elements: Vec<String>,
    pub circuits: Vec<ValuatedCircuit>,
    pub rank: usize,
}

impl ValuatedMatroid {
    pub fn new(
        elements: Vec<String>,
        circuits: Vec<ValuatedCircuit>,
        rank: usize,
    ) -> ValuatedMatroid {
        ValuatedMatroid {
            elements,
            circuits,
            rank,
        }
    }

    /// Trivially valuated matroid: one zero-valued circuit per support.
    pub fn trivial(m: &Matroid) -> ValuatedMatroid {
        let circuits = m
            .circuits
            .iter()
            .map(|c| {
                let values = (0..m.elements.len())
                    .map(|i| {
                        if c.contains(&i) {
                            Some(Rational::zero())
                        } else {
                            None
                        }
                    })
                    .collect();
                ValuatedCircuit::new(values).expect("nonempty circuit")
            })
            .collect();
        ValuatedMatroid {
            elements: m.elements.clone(),
            circuits,
            rank: m.declared_rank,
        }
    }

    pub fn underlying(&self) -> Matroid {
        Matroid {
            elements: self.elements.clone(),
            circuits: self.circuits.iter().map(|c| c.support()).collect(),
            declared_rank: self.rank,
        }
    }

    /// Exhaustive check of the valuated circuit axioms on the stored
    /// representatives. Scaling closure holds by the representative
    /// convention; the elimination axiom is checked over all applicable
    /// pairs and shared elements.
    pub fn axioms_check(&self) -> AxiomsReport {
        let mut report = AxiomsReport::default();
        if self.circuits.is_empty() {
            // no circuits: a free valuated matroid; only the rank formula applies
        }
        let supports: Vec<BTreeSet<usize>> =
            self.circuits.iter().map(|c| c.support()).collect();
        for (i, s1) in supports.iter().enumerate() {
            for (j, s2) in supports.iter().enumerate() {
                if i != j && s1 != s2 && s1.is_subset(s2) {
                    report
                        .failures
                        .push(format!("support of circuit {i} inside support of {j}"));
                }
            }
        }
        let underlying = self.underlying();
        let r = underlying.rank();
        if r != self.rank {
            report
                .failures
                .push(format!("rank is {r}, declared {}", self.rank));
        }
        // elimination
        for (i, c1) in self.circuits.iter().enumerate() {
            for (j, c2) in self.circuits.iter().enumerate() {
                if i == j {
                    continue;
                }
                for e in supports[i].intersection(&supports[j]) {
                    // scale c2 so the two agree at e
                    let shift =
                        c1.values[*e].clone().unwrap() - c2.values[*e].clone().unwrap();
                    let v2 = c2.shifted(&shift);
                    for ep in 0..self.elements.len() {
                        let v1e = &c1.values[ep];
                        let lt = match (v1e, &v2[ep]) {
                            (Some(a), Some(b)) => a < b,
                            (Some(_), None) => true,
                            _ => false,
                        };
                        if !lt {
                            continue;
                        }
                        if !self.elimination_witness(c1, &v2, *e, ep) {
                            report.failures.push(format!(
                                "elimination fails for circuits {i},{j} at {} / {}",
                                self.elements[*e], self.elements[ep]
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    fn elimination_witness(
        &self,
        v1: &ValuatedCircuit,
        v2: &[Option<Rational>],
        e: usize,
        ep: usize,
    ) -> bool {
        let pointwise_min = |k: usize| -> Option<Rational> {
            match (&v1.values[k], &v2[k]) {
                (Some(a), Some(b)) => Some(a.min(b).clone()),
                (Some(a), None) => Some(a.clone()),
                (None, Some(b)) => Some(b.clone()),
                (None, None) => None,
            }
        };
        for w in &self.circuits {
            if w.values[e].is_some() || w.values[ep].is_none() {
                continue;
            }
            let beta = v1.values[ep].clone().unwrap() - w.values[ep].clone().unwrap();
            let shifted = w.shifted(&beta);
            let dominates = (0..self.elements.len()).all(|k| match (&shifted[k], pointwise_min(k)) {
                (None, _) => true,
                (Some(_), None) => true,
                (Some(a), Some(m)) => *a >= m,
            });
            if dominates {
                return true;
            }
        }
        false
    }
}

/// Exact membership of a tropical point in the tropical linear space of a
/// valuated matroid: every valuated circuit must achieve its minimum at
/// least twice.
pub fn bergman_membership(x: &TropicalPoint, v: &ValuatedMatroid) -> Result<bool> {
    if x.coords.len() != v.elements.len() {
        return Err(Error::input(format!(
            "point has {} coordinates, matroid has {} elements",
            x.coords.len(),
            v.elements.len()
        )));
    }
    if x.coords.iter().all(|c| c.is_none()) {
        return Err(Error::input("all coordinates infinite".to_string()));
    }
    for c in &v.circuits {
        let mut vals: Vec<Rational> = Vec::new();
        for (cv, xv) in c.values.iter().zip(x.coords.iter()) {
            if let (Some(a), Some(b)) = (cv, xv) {
                vals.push(a + b);
            }
        }
        let Some(min) = vals.iter().min().cloned() else {
            return Ok(false);
        };
        if vals.iter().filter(|v| **v == min).count() < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn u_3_4() -> Matroid {
        Matroid::from_circuits(
            (1..=4).map(|i| i.to_string()).collect(),
            vec![vec!["1".into(), "2".into(), "3".into(), "4".into()]],
            3,
        )
        .unwrap()
    }

    fn u_3_5() -> Matroid {
        let elements: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
        let mut circuits = Vec::new();
        for a in 1..=5 {
            let c: Vec<String> = (1..=5).filter(|i| *i != a).map(|i| i.to_string()).collect();
            circuits.push(c);
        }
        Matroid::from_circuits(elements, circuits, 3).unwrap()
    }

    #[test]
    fn uniform_matroids_pass_axioms() {
        assert!(u_3_4().axioms_check().ok());
        assert_eq!(u_3_4().rank(), 3);
        assert!(u_3_5().axioms_check().ok());
    }

    #[test]
    fn fano_passes_axioms() {
        let f = crate::fixtures::fano_matroid();
        let report = f.axioms_check();
        assert!(report.ok(), "{:?}", report.failures);
        assert_eq!(f.rank(), 3);
        assert_eq!(f.circuits.iter().filter(|c| c.len() == 3).count(), 7);
        assert_eq!(f.circuits.iter().filter(|c| c.len() == 4).count(), 7);
    }

    #[test]
    fn sub_circuit_fails_antichain() {
        let m = Matroid::from_circuits(
            (1..=4).map(|i| i.to_string()).collect(),
            vec![
                vec!["1".into(), "2".into(), "3".into()],
                vec!["1".into(), "2".into()],
            ],
            2,
        )
        .unwrap();
        assert!(!m.axioms_check().ok());
    }

    #[test]
    fn flats_of_uniform_and_fano() {
        assert_eq!(u_3_4().rank2_flats().unwrap().len(), 6);
        assert_eq!(u_3_5().rank2_flats().unwrap().len(), 10);
        let fano = crate::fixtures::fano_matroid();
        let flats = fano.rank2_flats().unwrap();
        assert_eq!(flats.len(), 7);
        assert!(flats.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn levi_graph_shapes() {
        let levi = levi_graph(&crate::fixtures::fano_matroid()).unwrap();
        assert_eq!(levi.graph.vertices().len(), 14);
        assert_eq!(levi.graph.edges().len(), 21);
        assert_eq!(levi.graph.genus(), 8);
        let levi = levi_graph(&u_3_4()).unwrap();
        assert_eq!(levi.graph.vertices().len(), 10);
        assert_eq!(levi.graph.edges().len(), 12);
        assert_eq!(levi.graph.genus(), 3);
        let levi = levi_graph(&u_3_5()).unwrap();
        assert_eq!(levi.graph.vertices().len(), 15);
        assert_eq!(levi.graph.edges().len(), 20);
        assert_eq!(levi.graph.genus(), 6);
    }

    #[test]
    fn trivial_valuated_u23_passes_and_bergman_points() {
        let m = Matroid::from_circuits(
            (1..=3).map(|i| i.to_string()).collect(),
            vec![vec!["1".into(), "2".into(), "3".into()]],
            2,
        )
        .unwrap();
        assert!(m.axioms_check().ok());
        let v = ValuatedMatroid::trivial(&m);
        assert!(v.axioms_check().ok());
        let inside = TropicalPoint::finite(vec![rat(0), rat(0), rat(5)]);
        assert!(bergman_membership(&inside, &v).unwrap());
        let outside = TropicalPoint::finite(vec![rat(0), rat(3), rat(5)]);
        assert!(!bergman_membership(&outside, &v).unwrap());
        let center = TropicalPoint::finite(vec![rat(0), rat(0), rat(0)]);
        assert!(bergman_membership(&center, &v).unwrap());
        let bad = TropicalPoint::finite(vec![rat(0), rat(0)]);
        assert!(bergman_membership(&bad, &v).is_err());
    }

    #[test]
    fn broken_elimination_is_detected() {
        // two circuits on {1,2,3,4} with incompatible values and no third
        // circuit to eliminate with
        let c1 = ValuatedCircuit::new(vec![
            Some(rat(0)),
            Some(rat(0)),
            Some(rat(1)),
            None,
        ])
        .unwrap();
        let c2 = ValuatedCircuit::new(vec![
            Some(rat(0)),
            Some(ratio(1, 2)),
            None,
            Some(rat(0)),
        ])
        .unwrap();
        let v = ValuatedMatroid::new(
            (1..=4).map(|i| i.to_string()).collect(),
            vec![c1, c2],
            3,
        );
        let report = v.axioms_check();
        assert!(report
            .failures
            .iter()
            .any(|f| f.contains("elimination")));
    }
}
