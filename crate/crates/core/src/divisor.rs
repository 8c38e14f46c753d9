//! Divisors: finite integer combinations of points of a metric graph.

use crate::graph::{MetricGraph, Point};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A formal sum of points with nonzero integer coefficients.
/// `D >= E` is tested coefficientwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    graph: Arc<MetricGraph>,
    coeffs: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn zero(graph: Arc<MetricGraph>) -> Divisor {
        Divisor {
            graph,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn single(graph: Arc<MetricGraph>, p: Point, c: i64) -> Divisor {
        let mut d = Divisor::zero(graph);
        d.add_point(p, c);
        d
    }

    pub fn from_coeffs(graph: Arc<MetricGraph>, coeffs: Vec<(Point, i64)>) -> Divisor {
        let mut d = Divisor::zero(graph);
        for (p, c) in coeffs {
            d.add_point(p, c);
        }
        d
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn add_point(&mut self, p: Point, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(p.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Point) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &i64)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.coeffs.keys()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| *c >= 0)
    }

    /// Coefficientwise partial order.
    pub fn geq(&self, other: &Divisor) -> bool {
        let mut points: Vec<&Point> = self.coeffs.keys().collect();
        points.extend(other.coeffs.keys());
        points.iter().all(|p| self.coeff(p) >= other.coeff(p))
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add_point(p.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add_point(p.clone(), -*c);
        }
        out
    }

    pub fn neg(&self) -> Divisor {
        Divisor::zero(Arc::clone(&self.graph)).sub(self)
    }

    /// Stable key for memo tables.
    pub fn key(&self) -> Vec<(Point, i64)> {
        self.coeffs.iter().map(|(p, c)| (p.clone(), *c)).collect()
    }

    pub fn describe(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|(p, c)| format!("{}*{}", c, self.graph.describe_point(p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn coefficients_cancel_and_order() {
        let g = MetricGraph::new(
            vec!["a".into(), "b".into()],
            vec![("e".into(), "a".into(), "b".into(), rat(1))],
        )
        .unwrap();
        let p = Point::Vertex(0);
        let q = Point::Vertex(1);
        let mut d = Divisor::zero(Arc::clone(&g));
        d.add_point(p.clone(), 2);
        d.add_point(q.clone(), -1);
        assert_eq!(d.degree(), 1);
        assert!(!d.is_effective());
        d.add_point(q.clone(), 1);
        assert_eq!(d.coeff(&q), 0);
        assert!(d.is_effective());
        let e = Divisor::single(g, p, 1);
        assert!(d.geq(&e));
        assert!(!e.geq(&d));
    }

    proptest::proptest! {
        #[test]
        fn add_sub_degree_laws(cs in proptest::collection::vec((-5i64..=5, -5i64..=5), 1..6)) {
            let g = MetricGraph::new(
                vec!["a".into(), "b".into()],
                vec![("e".into(), "a".into(), "b".into(), rat(1))],
            )
            .unwrap();
            let mut d1 = Divisor::zero(std::sync::Arc::clone(&g));
            let mut d2 = Divisor::zero(std::sync::Arc::clone(&g));
            for (i, (c1, c2)) in cs.iter().enumerate() {
                let p = if i % 3 == 0 {
                    Point::Vertex(i % 2)
                } else {
                    g.point_on_edge(0, crate::rational::ratio(1, 1 + i as i64)).unwrap()
                };
                d1.add_point(p.clone(), *c1);
                d2.add_point(p, *c2);
            }
            let sum = d1.add(&d2);
            proptest::prop_assert_eq!(sum.degree(), d1.degree() + d2.degree());
            proptest::prop_assert!(d1.sub(&d1).is_zero());
            proptest::prop_assert_eq!(sum.sub(&d2), d1);
        }
    }
}
