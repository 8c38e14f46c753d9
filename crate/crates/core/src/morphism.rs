//! Tropical modifications, coordinate maps to tropical projective space,
//! and balancing checks against the rank-1 tree target.
//!
//! The modification adds one infinite ray at every support point of every
//! `D + div(g_i)`; each generator extends affinely along each ray. The
//! extension slopes are stored in the normalization where the lowest-index
//! owner of the ray has slope `-ord_x`; since the target lives in tropical
//! projective space only slope differences matter, and those are fixed:
//! the slope of `g_j` exceeds the slope of `g_k` by
//! `(D + div g_j)(x) - (D + div g_k)(x)`.

use crate::error::{Error, Result};
use crate::graph::{Point, TangentVector};
use crate::matroid::{bergman_membership, TropicalPoint, ValuatedMatroid};
use crate::plfn::PLFunction;
use crate::rational::{rat, Rational};
use crate::submodule::TropicalSubmodule;
use crate::tls::{model_edges, rank1_valuated_circuits};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct Ray {
    pub id: String,
    pub base: Point,
    /// Extension slope of each generator along the ray (owner slope is
    /// `-ord_base(owner)`).
    pub slopes: Vec<i64>,
    /// Lowest generator index whose divisor supports the base point.
    pub owner: usize,
}

#[derive(Debug, Clone)]
pub struct ModifiedGraph {
    pub module: TropicalSubmodule,
    pub rays: Vec<Ray>,
}

/// A point of the modified graph: on the base, or at parameter `s >= 0`
/// along a ray.
#[derive(Debug, Clone, PartialEq)]
pub enum MPoint {
    Base(Point),
    Ray(usize, Rational),
}

/// Adds one ray per support point of each `D + div(g_i)`; finitely many.
pub fn tropical_modification(module: &TropicalSubmodule) -> Result<ModifiedGraph> {
    let minimal = module.minimize_generators()?;
    let gens = minimal.generators();
    let d = minimal.divisor();
    let mut support: BTreeMap<Point, usize> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        let gd = g.divisor().add(d);
        for (p, c) in gd.iter() {
            if *c > 0 {
                support.entry(p.clone()).or_insert(i);
            }
        }
    }
    let mut rays = Vec::new();
    for (k, (base, owner)) in support.into_iter().enumerate() {
        // canonical class slopes (D + div g_j)(base), shifted so the owner
        // gets -ord_base(g_owner)
        let canonical: Vec<i64> = gens
            .iter()
            .map(|g| g.divisor().coeff(&base) + d.coeff(&base))
            .collect();
        let shift = -gens[owner].divisor().coeff(&base) - canonical[owner];
        let slopes = canonical.iter().map(|c| c + shift).collect();
        rays.push(Ray {
            id: format!("ray{k}"),
            base,
            slopes,
            owner,
        });
    }
    Ok(ModifiedGraph {
        module: minimal,
        rays,
    })
}

/// The coordinate map `x -> [g_0(x) : ... : g_n(x)]` on the modified graph.
#[derive(Debug, Clone)]
pub struct PLMap {
    pub modified: ModifiedGraph,
}

pub fn coordinate_map(modified: ModifiedGraph) -> PLMap {
    PLMap { modified }
}

impl PLMap {
    pub fn generators(&self) -> &[PLFunction] {
        self.modified.module.generators()
    }

    pub fn image(&self, p: &MPoint) -> TropicalPoint {
        match p {
            MPoint::Base(x) => TropicalPoint::finite(
                self.generators().iter().map(|g| g.evaluate(x)).collect(),
            ),
            MPoint::Ray(r, s) => {
                let ray = &self.modified.rays[*r];
                TropicalPoint::finite(
                    self.generators()
                        .iter()
                        .zip(ray.slopes.iter())
                        .map(|(g, slope)| g.evaluate(&ray.base) + rat(*slope) * s)
                        .collect(),
                )
            }
        }
    }
}

/// Directions of the modified graph at a base point: graph tangents plus
/// rays based there.
#[derive(Debug, Clone)]
enum SourceDirection {
    Tangent(TangentVector),
    Ray(usize),
}

/// Normalized image direction of a source direction: the set of rising
/// coordinates and the stretch factor. `None` for contracted directions.
fn image_direction(
    map: &PLMap,
    dir: &SourceDirection,
) -> Result<Option<(Vec<usize>, i64)>> {
    let slopes: Vec<i64> = match dir {
        SourceDirection::Tangent(z) => map.generators().iter().map(|g| g.slope(z)).collect(),
        SourceDirection::Ray(r) => map.modified.rays[*r].slopes.clone(),
    };
    let lo = *slopes.iter().min().unwrap();
    let hi = *slopes.iter().max().unwrap();
    if lo == hi {
        return Ok(None);
    }
    let mut rising = Vec::new();
    for (i, s) in slopes.iter().enumerate() {
        if *s == hi {
            rising.push(i);
        } else if *s != lo {
            return Err(Error::internal(format!(
                "image direction {slopes:?} has more than two slope levels"
            )));
        }
    }
    Ok(Some((rising, hi - lo)))
}

/// Is `e_S` a valid outgoing direction of the target tree at `y`? For every
/// circuit, raising the `S` coordinates must keep the minimum achieved at
/// least twice: either the argmin lies inside `S` or at least two achievers
/// stay outside.
fn valid_tree_direction(v: &ValuatedMatroid, y: &TropicalPoint, s: &[usize]) -> bool {
    if s.is_empty() || s.len() == v.elements.len() {
        return false;
    }
    for c in &v.circuits {
        let mut vals: Vec<(usize, Rational)> = Vec::new();
        for (i, (cv, yv)) in c.values.iter().zip(y.coords.iter()).enumerate() {
            if let (Some(a), Some(b)) = (cv, yv) {
                vals.push((i, a + b));
            }
        }
        let Some(min) = vals.iter().map(|(_, v)| v.clone()).min() else {
            return false;
        };
        let argmin: Vec<usize> = vals
            .iter()
            .filter(|(_, v)| *v == min)
            .map(|(i, _)| *i)
            .collect();
        let inside = argmin.iter().filter(|i| s.contains(i)).count();
        let outside = argmin.len() - inside;
        if !(outside >= 2 || inside == argmin.len()) {
            return false;
        }
    }
    true
}

fn all_valid_directions(v: &ValuatedMatroid, y: &TropicalPoint) -> Vec<Vec<usize>> {
    let n = v.elements.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if valid_tree_direction(v, y, &s) {
            out.push(s);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct BalanceReport {
    /// (point description, local degree) at every checked point.
    pub local_degrees: Vec<(String, i64)>,
    /// (model edge description, stretch) for every base model edge.
    pub segment_degrees: Vec<(String, i64)>,
    pub failures: Vec<String>,
    /// Rays along which the map is constant (allowed but recorded).
    pub contracted_rays: Vec<String>,
}

impl BalanceReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks harmonicity of the coordinate map of a rank-1 series against its
/// tree target: at every refinement point the local degrees summed per
/// target direction agree, and on the base every stretch `s[1] - s[0]` is
/// positive.
pub fn balancing_check(map: &PLMap) -> Result<BalanceReport> {
    let module = &map.modified.module;
    let v = rank1_valuated_circuits(module)?;
    let mut report = BalanceReport {
        local_degrees: Vec::new(),
        segment_degrees: Vec::new(),
        failures: Vec::new(),
        contracted_rays: Vec::new(),
    };
    let graph = module.graph();

    // base segment stretches
    for me in model_edges(module)? {
        let zeta = me.midpoint_tangent(true);
        let sv = module.slope_vector(&zeta);
        let d = sv.slopes.last().unwrap() - sv.slopes.first().unwrap();
        let label = format!(
            "{}[{},{}]",
            graph.edges()[me.edge].id,
            crate::rational::format_rational(&me.lo),
            crate::rational::format_rational(&me.hi)
        );
        if d < 1 {
            report
                .failures
                .push(format!("segment {label} has stretch {d} < 1"));
        }
        report.segment_degrees.push((label, d));
    }

    // refinement points: subdivision vertices and ray bases
    let mut points: Vec<Point> = (0..graph.vertices().len()).map(Point::Vertex).collect();
    points.extend(module.generator_breakpoints());
    points.extend(module.divisor().support().cloned());
    points.extend(map.modified.rays.iter().map(|r| r.base.clone()));
    points.sort();
    points.dedup();

    for p in &points {
        let y = map.image(&MPoint::Base(p.clone()));
        if !bergman_membership(&y, &v)? {
            report.failures.push(format!(
                "image of {} is outside the target tree",
                graph.describe_point(p)
            ));
            continue;
        }
        let mut dirs: Vec<SourceDirection> = graph
            .tangent_vectors(p)
            .into_iter()
            .map(SourceDirection::Tangent)
            .collect();
        for (ri, ray) in map.modified.rays.iter().enumerate() {
            if &ray.base == p {
                dirs.push(SourceDirection::Ray(ri));
            }
        }
        let mut buckets: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for dir in &dirs {
            match image_direction(map, dir)? {
                None => {
                    if let SourceDirection::Ray(ri) = dir {
                        report
                            .contracted_rays
                            .push(map.modified.rays[*ri].id.clone());
                    } else {
                        report.failures.push(format!(
                            "base tangent at {} is contracted",
                            graph.describe_point(p)
                        ));
                    }
                }
                Some((rising, d)) => {
                    if !valid_tree_direction(&v, &y, &rising) {
                        report.failures.push(format!(
                            "direction at {} leaves the target tree",
                            graph.describe_point(p)
                        ));
                        continue;
                    }
                    *buckets.entry(rising).or_insert(0) += d;
                }
            }
        }
        let valid = all_valid_directions(&v, &y);
        let mut sums: Vec<i64> = Vec::new();
        for s in &valid {
            sums.push(buckets.get(s).copied().unwrap_or(0));
        }
        for s in buckets.keys() {
            if !valid.contains(s) {
                report.failures.push(format!(
                    "direction bucket at {} is not a tree direction",
                    graph.describe_point(p)
                ));
            }
        }
        let local = sums.first().copied().unwrap_or(0);
        if sums.iter().any(|m| *m != local) {
            report.failures.push(format!(
                "unbalanced at {}: direction sums {:?}",
                graph.describe_point(p),
                sums
            ));
        }
        if local < 1 {
            report.failures.push(format!(
                "local degree {local} < 1 at {}",
                graph.describe_point(p)
            ));
        }
        report
            .local_degrees
            .push((graph.describe_point(p), local));
    }
    Ok(report)
}

/// The one-dimensional tropical linear space of a rank-2 valuated matroid,
/// as an explicit tree: vertices, bounded segments, and infinite rays, all
/// carrying direction data `e_S`.
#[derive(Debug, Clone)]
pub struct TargetTree {
    pub matroid: ValuatedMatroid,
    pub vertices: Vec<TropicalPoint>,
    /// (from vertex, to vertex, length, rising coordinate set).
    pub segments: Vec<(usize, usize, Rational, Vec<usize>)>,
    /// (base vertex, rising coordinate set).
    pub rays: Vec<(usize, Vec<usize>)>,
}

fn normalize_point(y: &TropicalPoint) -> TropicalPoint {
    let min = y.coords.iter().flatten().min().cloned().unwrap();
    TropicalPoint {
        coords: y
            .coords
            .iter()
            .map(|c| c.as_ref().map(|c| c - &min))
            .collect(),
    }
}

fn seed_point(v: &ValuatedMatroid) -> Result<TropicalPoint> {
    let n = v.elements.len();
    if v.circuits.is_empty() {
        return Ok(TropicalPoint::finite(vec![Rational::zero(); n]));
    }
    let c0 = v
        .circuits
        .iter()
        .max_by_key(|c| c.support().len())
        .unwrap();
    let big = v
        .circuits
        .iter()
        .flat_map(|c| c.values.iter().flatten())
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero)
        + rat(1);
    let mut coords: Vec<Rational> = (0..n).map(|_| big.clone()).collect();
    for (i, val) in c0.values.iter().enumerate() {
        if let Some(val) = val {
            coords[i] = -val;
        }
    }
    // settle the remaining circuits: lower single achievers' partners
    for _ in 0..n * v.circuits.len() + 4 {
        let y = TropicalPoint::finite(coords.clone());
        if bergman_membership(&y, v)? {
            return Ok(normalize_point(&y));
        }
        let mut adjusted = false;
        for c in &v.circuits {
            let vals: Vec<(usize, Rational)> = c
                .values
                .iter()
                .enumerate()
                .filter_map(|(i, cv)| cv.as_ref().map(|cv| (i, cv + &coords[i])))
                .collect();
            let min = vals.iter().map(|(_, v)| v.clone()).min().unwrap();
            let achievers: Vec<usize> = vals
                .iter()
                .filter(|(_, v)| *v == min)
                .map(|(i, _)| *i)
                .collect();
            if achievers.len() >= 2 {
                continue;
            }
            // lower the second-smallest coordinate to tie
            let second = vals
                .iter()
                .filter(|(_, v)| *v > min)
                .min_by(|a, b| a.1.cmp(&b.1))
                .map(|(i, v)| (*i, v.clone()));
            if let Some((i, val)) = second {
                coords[i] -= &val - &min;
                adjusted = true;
                break;
            }
        }
        if !adjusted {
            break;
        }
    }
    let y = TropicalPoint::finite(coords);
    if bergman_membership(&y, v)? {
        Ok(normalize_point(&y))
    } else {
        Err(Error::unsupported(
            "could not construct a seed point on the tropical linear space".to_string(),
        ))
    }
}

/// Builds the tree by walking from a seed point along all valid directions,
/// stopping at argmin-degeneration events.
pub fn rank1_tree_target(v: &ValuatedMatroid) -> Result<TargetTree> {
    if v.rank != 2 {
        return Err(Error::input(format!(
            "tree target needs a rank-2 valuated matroid, got rank {}",
            v.rank
        )));
    }
    let n = v.elements.len();
    if n > 12 {
        return Err(Error::unsupported("too many elements".to_string()));
    }
    let seed = seed_point(v)?;
    let mut vertices: Vec<TropicalPoint> = vec![seed.clone()];
    let mut segments = Vec::new();
    let mut rays = Vec::new();
    let mut frontier = vec![0usize];
    let mut seen_segments: Vec<(usize, Vec<usize>)> = Vec::new();

    while let Some(vi) = frontier.pop() {
        let y = vertices[vi].clone();
        for s in all_valid_directions(v, &y) {
            if seen_segments.contains(&(vi, s.clone())) {
                continue;
            }
            seen_segments.push((vi, s.clone()));
            match step_length(v, &y, &s) {
                None => rays.push((vi, s)),
                Some(t) => {
                    let mut coords = y.coords.clone();
                    for i in &s {
                        if let Some(c) = coords[*i].as_mut() {
                            *c += &t;
                        }
                    }
                    let endpoint = normalize_point(&TropicalPoint { coords });
                    let wi = match vertices.iter().position(|w| *w == endpoint) {
                        Some(wi) => wi,
                        None => {
                            vertices.push(endpoint);
                            frontier.push(vertices.len() - 1);
                            vertices.len() - 1
                        }
                    };
                    // avoid recording both orientations
                    if !segments
                        .iter()
                        .any(|(a, b, _, _): &(usize, usize, Rational, Vec<usize>)| {
                            (*a == wi && *b == vi) || (*a == vi && *b == wi)
                        })
                    {
                        segments.push((vi, wi, t, s.clone()));
                    }
                    // mark the reverse direction as seen from the endpoint
                    let complement: Vec<usize> =
                        (0..n).filter(|i| !s.contains(i)).collect();
                    seen_segments.push((wi, complement));
                }
            }
        }
        if vertices.len() > 4 * n + 8 {
            return Err(Error::internal("tree walk did not terminate".to_string()));
        }
    }
    Ok(TargetTree {
        matroid: v.clone(),
        vertices,
        segments,
        rays,
    })
}

/// Distance along `e_S` to the next argmin degeneration, `None` for a ray.
fn step_length(v: &ValuatedMatroid, y: &TropicalPoint, s: &[usize]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for c in &v.circuits {
        let vals: Vec<(usize, Rational)> = c
            .values
            .iter()
            .enumerate()
            .filter_map(|(i, cv)| {
                match (cv, &y.coords[i]) {
                    (Some(a), Some(b)) => Some((i, a + b)),
                    _ => None,
                }
            })
            .collect();
        let min = vals.iter().map(|(_, v)| v.clone()).min()?;
        let argmin: Vec<usize> = vals
            .iter()
            .filter(|(_, v)| *v == min)
            .map(|(i, _)| *i)
            .collect();
        // rising argmin meets the lowest stationary value
        if argmin.iter().all(|i| s.contains(i)) {
            let stationary_min = vals
                .iter()
                .filter(|(i, _)| !s.contains(i))
                .map(|(_, v)| v.clone())
                .min();
            if let Some(sm) = stationary_min {
                let t = sm - &min;
                match &best {
                    Some(b) if *b <= t => {}
                    _ => best = Some(t),
                }
            }
        }
    }
    best
}

/// Locates a point on the tree: a vertex index, a segment with parameter,
/// or a ray with parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeLocation {
    Vertex(usize),
    Segment(usize, Rational),
    Ray(usize, Rational),
}

impl TargetTree {
    pub fn locate(&self, y: &TropicalPoint) -> Result<Option<TreeLocation>> {
        if !bergman_membership(y, &self.matroid)? {
            return Ok(None);
        }
        let y = normalize_point(y);
        if let Some(vi) = self.vertices.iter().position(|w| *w == y) {
            return Ok(Some(TreeLocation::Vertex(vi)));
        }
        for (si, (a, _, len, s)) in self.segments.iter().enumerate() {
            if let Some(t) = self.offset_along(&self.vertices[*a], s, &y) {
                if t > Rational::zero() && t < *len {
                    return Ok(Some(TreeLocation::Segment(si, t)));
                }
            }
        }
        for (ri, (a, s)) in self.rays.iter().enumerate() {
            if let Some(t) = self.offset_along(&self.vertices[*a], s, &y) {
                if t > Rational::zero() {
                    return Ok(Some(TreeLocation::Ray(ri, t)));
                }
            }
        }
        Ok(None)
    }

    fn offset_along(
        &self,
        base: &TropicalPoint,
        s: &[usize],
        y: &TropicalPoint,
    ) -> Option<Rational> {
        // y = base + t * e_S in projective coordinates
        let mut t: Option<Rational> = None;
        let mut shift: Option<Rational> = None;
        for i in 0..y.coords.len() {
            let (Some(yc), Some(bc)) = (&y.coords[i], &base.coords[i]) else {
                continue;
            };
            let d = yc - bc;
            if s.contains(&i) {
                match (&t, &shift) {
                    (None, Some(sh)) => t = Some(&d - sh),
                    (Some(tv), Some(sh)) => {
                        if &d - sh != *tv {
                            return None;
                        }
                    }
                    _ => t = Some(d),
                }
            } else {
                match &shift {
                    None => {
                        if let Some(tv) = &t {
                            t = Some(tv - &d);
                        }
                        shift = Some(d);
                    }
                    Some(sh) => {
                        if d != *sh {
                            return None;
                        }
                    }
                }
            }
        }
        // recompute strictly: t = (rise difference) with shift normalized
        let sh = shift.unwrap_or_else(Rational::zero);
        let mut tval: Option<Rational> = None;
        for i in 0..y.coords.len() {
            let (Some(yc), Some(bc)) = (&y.coords[i], &base.coords[i]) else {
                continue;
            };
            let d = yc - bc - &sh;
            if s.contains(&i) {
                match &tval {
                    None => tval = Some(d),
                    Some(tv) => {
                        if d != *tv {
                            return None;
                        }
                    }
                }
            } else if !d.is_zero() {
                return None;
            }
        }
        tval
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matroid::Matroid;
    use crate::rational::ratio;

    #[test]
    fn standard_tropical_line() {
        let m = Matroid::from_circuits(
            (1..=3).map(|i| i.to_string()).collect(),
            vec![vec!["1".into(), "2".into(), "3".into()]],
            2,
        )
        .unwrap();
        let v = ValuatedMatroid::trivial(&m);
        let tree = rank1_tree_target(&v).unwrap();
        assert_eq!(tree.vertices.len(), 1);
        assert_eq!(tree.segments.len(), 0);
        assert_eq!(tree.rays.len(), 3);
    }

    #[test]
    fn two_generator_series_maps_to_a_line() {
        let f = fixtures::interval_with(ratio(1, 4), ratio(3, 4));
        let v = rank1_valuated_circuits(f.module.as_ref().unwrap()).unwrap();
        assert!(v.circuits.is_empty());
        let tree = rank1_tree_target(&v).unwrap();
        assert_eq!(tree.vertices.len(), 1);
        assert_eq!(tree.segments.len(), 0);
        assert_eq!(tree.rays.len(), 2);
    }

    #[test]
    fn interval_easy_case_balances_with_a_degree_2_segment() {
        let f = fixtures::interval_with(ratio(1, 4), ratio(3, 4));
        let sigma = f.module.as_ref().unwrap();
        let modified = tropical_modification(sigma).unwrap();
        assert_eq!(modified.rays.len(), 4); // x, w0, w1, y
        let map = coordinate_map(modified);
        let report = balancing_check(&map).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert!(report.segment_degrees.iter().any(|(_, d)| *d == 2));
        assert!(report.segment_degrees.iter().all(|(_, d)| *d >= 1));
    }

    #[test]
    fn interval_hard_case_balances() {
        let f = fixtures::interval_with(ratio(3, 4), ratio(1, 4));
        let sigma = f.module.as_ref().unwrap();
        let modified = tropical_modification(sigma).unwrap();
        assert_eq!(modified.rays.len(), 5); // x, w1, z, w0, y
        let map = coordinate_map(modified);
        let report = balancing_check(&map).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        // the target is the standard tropical line with three rays
        let v = rank1_valuated_circuits(sigma).unwrap();
        let tree = rank1_tree_target(&v).unwrap();
        assert_eq!(tree.rays.len(), 3);
        assert_eq!(tree.vertices.len(), 1);
    }

    #[test]
    fn barbell_balances_and_bridge_stretch_is_2() {
        let b = fixtures::barbell();
        let sigma = b.module.as_ref().unwrap();
        let modified = tropical_modification(sigma).unwrap();
        let map = coordinate_map(modified);
        let report = balancing_check(&map).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        let bridge_stretch = report
            .segment_degrees
            .iter()
            .find(|(l, _)| l.starts_with("bridge"))
            .map(|(_, d)| *d)
            .unwrap();
        assert_eq!(bridge_stretch, 2);
    }

    #[test]
    fn ray_slopes_match_orders() {
        let f = fixtures::interval_with(ratio(1, 4), ratio(3, 4));
        let sigma = f.module.as_ref().unwrap();
        let modified = tropical_modification(sigma).unwrap();
        for ray in &modified.rays {
            let owner = &modified.module.generators()[ray.owner];
            assert_eq!(ray.slopes[ray.owner], -owner.divisor().coeff(&ray.base));
        }
    }

    #[test]
    fn images_stay_in_the_target_space() {
        let b = fixtures::barbell();
        let sigma = b.module.as_ref().unwrap();
        let v = rank1_valuated_circuits(sigma).unwrap();
        let modified = tropical_modification(sigma).unwrap();
        let map = coordinate_map(modified);
        let g = sigma.graph();
        for ei in 0..g.edges().len() {
            for k in 1..30 {
                let t = &g.edges()[ei].length * Rational::new(k.into(), 30.into());
                let p = g.point_on_edge(ei, t).unwrap();
                let y = map.image(&MPoint::Base(p));
                assert!(bergman_membership(&y, &v).unwrap());
            }
        }
    }
}
