//! Randomized and structural property tests, seeded (TROPLS_SEED
//! overrides).

mod common;

use common::{random_divisor, random_function, random_graph, random_point, random_unit_graph, seed_from_env};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use tropls_core::dependence::{decide_dependence, verify_combination};
use tropls_core::divisor::Divisor;
use tropls_core::fixtures;
use tropls_core::graph::{subdivide, MetricGraph, Point, TangentVector};
use tropls_core::plfn::{tropical_combine, PLFunction};
use tropls_core::rank::{bn_rank, dhar_reduce, is_equivalent_effective};
use tropls_core::rational::{rat, ratio, Rational};
use tropls_core::submodule::TropicalSubmodule;
use tropls_core::tls;

#[test]
fn subdivision_preserves_length_and_genus() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(21));
    for _ in 0..20 {
        let g = random_graph(&mut rng, 4, 6);
        let pts: Vec<Point> = (0..4).map(|_| random_point(&mut rng, &g)).collect();
        let s = subdivide(&g, &pts).unwrap();
        assert_eq!(s.refined.total_length(), g.total_length());
        assert_eq!(s.refined.genus(), g.genus());
    }
}

#[test]
fn canonical_divisor_degree_is_2g_minus_2() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(22));
    for _ in 0..20 {
        let g = random_graph(&mut rng, 4, 6);
        let k = g.canonical_divisor();
        assert_eq!(k.degree(), 2 * g.genus() - 2);
        for (p, c) in k.iter() {
            if let Point::Vertex(v) = p {
                assert_eq!(*c, g.valence(*v) as i64 - 2);
                assert_ne!(g.valence(*v), 2);
            }
        }
    }
}

#[test]
fn orientation_is_bookkeeping_only() {
    let b = fixtures::barbell();
    let rev = b.graph.reversed();
    assert_eq!(rev.genus(), b.graph.genus());
    let k_rev = rev.canonical_divisor();
    assert_eq!(k_rev.degree(), 2);
    // vertex-supported divisors carry over by index
    let d = Divisor::from_coeffs(
        Arc::clone(&rev),
        vec![(Point::Vertex(0), 1), (Point::Vertex(1), 1)],
    );
    assert_eq!(bn_rank(&d).unwrap(), 1);
}

#[test]
fn divisor_of_function_has_degree_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(23));
    for _ in 0..30 {
        let g = random_unit_graph(&mut rng, 4, 6);
        let f = random_function(&mut rng, &g);
        assert_eq!(f.divisor().degree(), 0);
        let shifted = f.add_constant(&ratio(7, 3));
        assert_eq!(shifted.divisor(), f.divisor());
    }
}

#[test]
fn compare_up_to_constant_iff_equal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(24));
    for _ in 0..30 {
        let g = random_unit_graph(&mut rng, 3, 5);
        let f1 = random_function(&mut rng, &g);
        let f2 = random_function(&mut rng, &g);
        let same_div = f1.divisor() == f2.divisor();
        let const_diff = f1.compare_up_to_constant(&f2).is_some();
        assert_eq!(same_div, const_diff);
    }
}

#[test]
fn tropical_combine_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(25));
    for _ in 0..20 {
        let g = random_unit_graph(&mut rng, 3, 5);
        let f1 = random_function(&mut rng, &g);
        let f2 = random_function(&mut rng, &g);
        let f3 = random_function(&mut rng, &g);
        let ab = tropical_combine(&[(&f1, rat(0)), (&f2, rat(1))]).unwrap();
        let ba = tropical_combine(&[(&f2, rat(1)), (&f1, rat(0))]).unwrap();
        assert_eq!(ab, ba);
        let ab_c = tropical_combine(&[(&ab, rat(0)), (&f3, rat(-1))]).unwrap();
        let a_bc = tropical_combine(&[
            (&f1, rat(0)),
            (&tropical_combine(&[(&f2, rat(1)), (&f3, rat(-1))]).unwrap(), rat(0)),
        ])
        .unwrap();
        assert_eq!(ab_c, a_bc);
        let idem = tropical_combine(&[(&f1, rat(0)), (&f1, rat(0))]).unwrap();
        assert_eq!(idem, f1);
    }
}

#[test]
fn slope_of_minimum_is_slope_of_achiever_past_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(26));
    for _ in 0..30 {
        let g = random_unit_graph(&mut rng, 3, 4);
        let f1 = random_function(&mut rng, &g);
        let f2 = random_function(&mut rng, &g);
        let a = ratio(rng.gen_range(-4..=4), 2);
        let m = tropical_combine(&[(&f1, rat(0)), (&f2, a.clone())]).unwrap();
        let e = rng.gen_range(0..g.edges().len());
        let t = ratio(rng.gen_range(1..8), 8);
        let zeta = TangentVector {
            base: g.point_on_edge(e, t.clone()).unwrap(),
            edge: e,
            toward_head: true,
        };
        // the achiever just past the base: lower value wins, ties go to
        // the smaller slope
        let v1 = f1.evaluate(&zeta.base);
        let v2 = f2.evaluate(&zeta.base) + &a;
        let expected = if v1 < v2 {
            f1.slope(&zeta)
        } else if v2 < v1 {
            f2.slope(&zeta)
        } else {
            f1.slope(&zeta).min(f2.slope(&zeta))
        };
        assert_eq!(m.slope(&zeta), expected);
    }
}

#[test]
fn reduction_deterministic_under_edge_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(27));
    for _ in 0..10 {
        let g = random_graph(&mut rng, 4, 5);
        let deg = rng.gen_range(0..=4);
        let d = random_divisor(&mut rng, &g, deg);
        let q = Point::Vertex(0);
        let r1 = dhar_reduce(&d, &q).unwrap();
        // rebuild with every edge reversed; vertex indices are unchanged
        let rev = g.reversed();
        let map_point = |p: &Point| match p {
            Point::Vertex(v) => Point::Vertex(*v),
            Point::Interior(e, t) => {
                let len = &g.edges()[*e].length;
                rev.point_on_edge(*e, len - t).unwrap()
            }
        };
        let d_rev = Divisor::from_coeffs(
            Arc::clone(&rev),
            d.iter().map(|(p, c)| (map_point(p), *c)).collect(),
        );
        let r2 = dhar_reduce(&d_rev, &q).unwrap();
        let mapped = Divisor::from_coeffs(
            Arc::clone(&rev),
            r1.reduced.iter().map(|(p, c)| (map_point(p), *c)).collect(),
        );
        assert_eq!(r2.reduced, mapped);
        assert_eq!(r1.witness.divisor(), r1.reduced.sub(&d));
        assert_eq!(r2.witness.divisor(), r2.reduced.sub(&d_rev));
    }
}

/// Brute-force rank: quantify E over all points of the 4-fold uniform
/// subdivision, with no rank-determining-set shortcut.
fn rank_oracle(d: &Divisor) -> i64 {
    let g = d.graph();
    let mut points: Vec<Point> = (0..g.vertices().len()).map(Point::Vertex).collect();
    for (ei, e) in g.edges().iter().enumerate() {
        for k in 1..4i64 {
            points.push(
                g.point_on_edge(ei, &e.length * Rational::new(k.into(), 4.into()))
                    .unwrap(),
            );
        }
    }
    points.extend(d.support().cloned());
    points.sort();
    points.dedup();
    fn all_hold(d: &Divisor, points: &[Point], k: i64, from: usize) -> bool {
        if k == 0 {
            return is_equivalent_effective(d).unwrap();
        }
        if !is_equivalent_effective(d).unwrap() {
            return false;
        }
        (from..points.len()).all(|i| {
            let mut d2 = d.clone();
            d2.add_point(points[i].clone(), -1);
            all_hold(&d2, points, k - 1, i)
        })
    }
    if !is_equivalent_effective(d).unwrap() {
        return -1;
    }
    let mut r = 0;
    while r < d.degree() && all_hold(d, &points, r + 1, 0) {
        r += 1;
    }
    r
}

#[test]
fn rank_matches_brute_force_oracle() {
    // fixed small cases
    let circle = MetricGraph::new(
        vec!["v".into()],
        vec![("loop".into(), "v".into(), "v".into(), rat(2))],
    )
    .unwrap();
    for deg in 0..=3 {
        let d = Divisor::single(Arc::clone(&circle), Point::Vertex(0), deg);
        assert_eq!(bn_rank(&d).unwrap(), rank_oracle(&d));
    }
    let lol = fixtures::lollipop(2);
    assert_eq!(bn_rank(&lol.divisor).unwrap(), 1);
    assert_eq!(rank_oracle(&lol.divisor), 1);
    let b = fixtures::barbell();
    assert_eq!(bn_rank(&b.divisor).unwrap(), rank_oracle(&b.divisor));

    // randomized cases
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(28));
    for _ in 0..6 {
        let g = random_graph(&mut rng, 3, 4);
        let deg = rng.gen_range(-1..=3);
        let d = random_divisor(&mut rng, &g, deg);
        assert_eq!(bn_rank(&d).unwrap(), rank_oracle(&d), "{}", d.describe());
    }
}

#[test]
fn rank_drops_by_at_most_one_per_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(29));
    for _ in 0..8 {
        let g = random_graph(&mut rng, 3, 5);
        let deg = rng.gen_range(0..=4);
        let d = random_divisor(&mut rng, &g, deg);
        let r = bn_rank(&d).unwrap();
        let mut points: Vec<Point> = (0..g.vertices().len()).map(Point::Vertex).collect();
        points.extend(d.support().cloned());
        points.sort();
        points.dedup();
        for p in points {
            let mut d2 = d.clone();
            d2.add_point(p, -1);
            let r2 = bn_rank(&d2).unwrap();
            assert!(r2 == r || r2 == r - 1, "rank {r} -> {r2}");
        }
    }
}

#[test]
fn membership_of_random_combinations() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(30));
    for fixture in [fixtures::barbell(), fixtures::interval_with(ratio(3, 4), ratio(1, 4))] {
        let sigma = fixture.module.as_ref().unwrap();
        for _ in 0..10 {
            let terms: Vec<(&PLFunction, Rational)> = sigma
                .generators()
                .iter()
                .map(|g| (g, ratio(rng.gen_range(-8..=8), 4)))
                .collect();
            let psi = tropical_combine(&terms).unwrap();
            assert!(sigma.membership(&psi).unwrap().is_some());
        }
    }
}

#[test]
fn divisor_path_connectivity_interpolation() {
    let b = fixtures::barbell();
    let sigma = b.module.as_ref().unwrap();
    let f1 = &sigma.generators()[0];
    let f2 = &sigma.generators()[1];
    let diff = f1.pointwise_sub(f2).unwrap();
    let m = diff.max_over_graph() + rat(1);
    let steps = 12i64;
    let mut prev: Option<PLFunction> = None;
    for k in 0..=steps {
        let t = &m * Rational::new(k.into(), steps.into());
        let psi = tropical_combine(&[(f1, t.clone()), (f2, &m - &t)]).unwrap();
        assert!(sigma.membership(&psi).unwrap().is_some());
        if let Some(prev) = prev {
            // distance in the sup metric on differences is at most the
            // coefficient step
            let d = psi.pointwise_sub(&prev).unwrap();
            let osc = d.max_over_graph() - d.min_over_graph();
            assert!(osc <= rat(2) * &m / rat(steps));
        }
        prev = Some(psi);
    }
}

#[test]
fn every_member_lies_in_a_small_submodule() {
    // three-generator interval series: every sampled member is a
    // combination of at most two generators
    let f = fixtures::interval_with(ratio(3, 4), ratio(1, 4));
    let sigma = f.module.as_ref().unwrap();
    let gens = sigma.generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(31));
    for _ in 0..15 {
        let terms: Vec<(&PLFunction, Rational)> = gens
            .iter()
            .map(|g| (g, ratio(rng.gen_range(-6..=6), 4)))
            .collect();
        let psi = tropical_combine(&terms).unwrap();
        let mut found = false;
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let pair = TropicalSubmodule::new(
                    sigma.divisor().clone(),
                    vec![gens[i].clone(), gens[j].clone()],
                )
                .unwrap();
                if pair.membership(&psi).unwrap().is_some() {
                    found = true;
                }
            }
        }
        assert!(found);
    }
}

#[test]
fn one_cover_outside_a_finite_set() {
    // barbell: away from the agreement levels of the generator difference,
    // each point supports exactly one divisor of the family
    let b = fixtures::barbell();
    let sigma = b.module.as_ref().unwrap();
    let (l, r) = (&sigma.generators()[0], &sigma.generators()[1]);
    let delta = l.pointwise_sub(r).unwrap();
    let g = sigma.graph();
    // levels of the flat pieces of delta
    let mut flat_levels: Vec<Rational> = Vec::new();
    for ei in 0..g.edges().len() {
        for w in delta.profile(ei).windows(2) {
            if w[0].1 == w[1].1 {
                flat_levels.push(w[0].1.clone());
            }
        }
    }
    for ei in 0..g.edges().len() {
        for k in 1..50i64 {
            let t = &g.edges()[ei].length * Rational::new(k.into(), 50.into());
            let x = g.point_on_edge(ei, t).unwrap();
            if matches!(x, Point::Vertex(_)) {
                continue;
            }
            let dx = delta.evaluate(&x);
            if flat_levels.contains(&dx) {
                continue;
            }
            // candidate divisors through x
            let mut divisors: Vec<Divisor> = Vec::new();
            let pair = tropical_combine(&[(l, rat(0)), (r, dx.clone())]).unwrap();
            let dv = pair.divisor().add(sigma.divisor());
            if dv.coeff(&x) > 0 {
                divisors.push(dv);
            }
            for gen in [l, r] {
                let dv = gen.divisor().add(sigma.divisor());
                if dv.coeff(&x) > 0 && !divisors.contains(&dv) {
                    divisors.push(dv);
                }
            }
            assert_eq!(divisors.len(), 1, "at {}", g.describe_point(&x));
        }
    }
}

#[test]
fn slope_vectors_constant_on_model_edges() {
    let b = fixtures::barbell();
    let sigma = b.module.as_ref().unwrap();
    for me in tls::model_edges(sigma).unwrap() {
        let reference = sigma.slope_vector(&me.midpoint_tangent(true)).slopes;
        for k in 1..10i64 {
            let t = &me.lo + (&me.hi - &me.lo) * Rational::new(k.into(), 10.into());
            if t == me.lo || t == me.hi {
                continue;
            }
            let zeta = TangentVector {
                base: Point::Interior(me.edge, t),
                edge: me.edge,
                toward_head: true,
            };
            assert_eq!(sigma.slope_vector(&zeta).slopes, reference);
        }
    }
}

#[test]
fn distinct_slopes_imply_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(32));
    for _ in 0..10 {
        let g = random_unit_graph(&mut rng, 3, 4);
        // engineer distinct slopes on edge 0 by adding ramps of different
        // integer pitch to a random base
        let base = random_function(&mut rng, &g);
        let e = 0usize;
        let mut fns = Vec::new();
        for pitch in 0..3i64 {
            let profiles = (0..g.edges().len())
                .map(|ei| {
                    let mut p = base.profile(ei).clone();
                    if ei == e {
                        for (t, v) in p.iter_mut() {
                            *v += rat(pitch) * t.clone();
                        }
                    }
                    p
                })
                .collect();
            match PLFunction::from_profiles(Arc::clone(&g), profiles) {
                Ok(f) => fns.push(f),
                Err(_) => continue, // ramp breaks continuity on loops
            }
        }
        if fns.len() < 3 {
            continue;
        }
        let ans = decide_dependence(&fns).unwrap();
        assert!(ans.is_independent());
    }
}

#[test]
fn dependent_triples_with_pinned_values_align_at_zero() {
    // if {f1, f2, f3} is dependent, f1(x) = f2(x) < f3(x) and
    // f1(y) = f3(y) <= f2(y), then the all-zero combination is a dependence
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(33));
    let mut tested = 0;
    'outer: for _ in 0..60 {
        let g = random_unit_graph(&mut rng, 3, 4);
        let f2 = random_function(&mut rng, &g);
        let f3 = random_function(&mut rng, &g);
        let f1 = tropical_combine(&[(&f2, rat(0)), (&f3, rat(0))]).unwrap();
        let triple = [f1.clone(), f2.clone(), f3.clone()];
        if !decide_dependence(&triple).unwrap().is_dependent() {
            continue;
        }
        // hunt for the pinned points
        let mut has_x = false;
        let mut has_y = false;
        for ei in 0..g.edges().len() {
            for k in 0..=8i64 {
                let Ok(p) = g.point_on_edge(ei, Rational::new(k.into(), 8.into())) else {
                    continue;
                };
                let (v1, v2, v3) = (f1.evaluate(&p), f2.evaluate(&p), f3.evaluate(&p));
                if v1 == v2 && v1 < v3 {
                    has_x = true;
                }
                if v1 == v3 && v1 <= v2 {
                    has_y = true;
                }
            }
        }
        if has_x && has_y {
            let verdict = verify_combination(&triple, &[rat(0), rat(0), rat(0)]).unwrap();
            assert!(verdict.is_dependence());
            tested += 1;
            if tested >= 8 {
                break 'outer;
            }
        }
    }
    assert!(tested >= 3, "too few instances matched the hypothesis");
}

#[test]
fn cartwright_generator_divisors_follow_the_value_table() {
    let f = fixtures::fano();
    let sigma = f.module.as_ref().unwrap();
    let m = f.matroid.as_ref().unwrap();
    let flats = m.rank2_flats().unwrap();
    for (e, gen) in sigma.generators().iter().enumerate() {
        let d = gen.divisor().add(sigma.divisor());
        assert!(d.is_effective());
        // value 2 at its own vertex: coefficient 1 + number of flats through e
        let own = Point::Vertex(e);
        let through = flats.iter().filter(|fl| fl.contains(&e)).count() as i64;
        assert_eq!(d.coeff(&own), 1 + through);
    }
}

#[test]
fn restriction_preserves_axioms_on_the_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(34));
    // barbell to the right lobe (bridge plus right loop)
    let b = fixtures::barbell();
    let sigma = b.module.as_ref().unwrap();
    let spec = tls::SubgraphSpec {
        vertices: vec!["v".into(), "w".into()],
        full_edges: vec!["bridge".into(), "loopR".into()],
        partial_edges: vec![],
    };
    let (_, restricted) = tls::restrict_tls(sigma, &spec).unwrap();
    assert!(tls::verify_tls(&restricted, 1, 0, &mut rng, None)
        .unwrap()
        .passed());
    // interval to a middle segment
    let f = fixtures::interval_with(ratio(3, 4), ratio(1, 4));
    let spec = tls::SubgraphSpec {
        vertices: vec![],
        full_edges: vec![],
        partial_edges: vec![("e".into(), ratio(1, 8), ratio(7, 8))],
    };
    let (_, restricted) = tls::restrict_tls(f.module.as_ref().unwrap(), &spec).unwrap();
    assert!(tls::verify_tls(&restricted, 1, 0, &mut rng, None)
        .unwrap()
        .passed());
}

#[test]
fn is_equivalent_effective_is_base_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env(35));
    for _ in 0..10 {
        let g = random_graph(&mut rng, 3, 5);
        let deg = rng.gen_range(-2..=3);
        let d = random_divisor(&mut rng, &g, deg);
        let expected = is_equivalent_effective(&d).unwrap();
        for v in 0..g.vertices().len() {
            let r = dhar_reduce(&d, &Point::Vertex(v)).unwrap();
            assert_eq!(r.reduced.is_effective(), expected);
        }
    }
}
