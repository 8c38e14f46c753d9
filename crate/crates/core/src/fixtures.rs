//! Built-in example graphs, divisors and modules used as regression
//! fixtures and exposed through the CLI.

use crate::divisor::Divisor;
use crate::error::Result;
use crate::graph::{MetricGraph, Point, TangentVector};
use crate::matroid::{cartwright_series, Matroid};
use crate::plfn::{PLFunction, Profile};
use crate::rank::extremal_function;
use crate::rational::{rat, ratio, Rational};
use crate::submodule::TropicalSubmodule;
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub graph: Arc<MetricGraph>,
    pub divisor: Divisor,
    pub module: Option<TropicalSubmodule>,
    pub matroid: Option<Matroid>,
}

/// Stable fixture name list.
pub fn names() -> Vec<&'static str> {
    vec![
        "lollipop",
        "barbell",
        "interval",
        "fg",
        "luo",
        "loop-of-loops",
        "fano",
        "u34",
    ]
}

pub fn interval_graph(len: i64) -> Arc<MetricGraph> {
    MetricGraph::new(
        vec!["x".into(), "y".into()],
        vec![("e".into(), "x".into(), "y".into(), rat(len))],
    )
    .expect("interval is valid")
}

/// Function on the length-2 interval with midpoint `v`: flat, slope -1 down
/// on `[1-x, 1]`, slope +1 up on `[1, 1+y]`, flat again. Satisfies
/// `div(f) + 2v >= 0` whenever `x + y <= 1` fails to matter here; callers
/// use `x + y <= 1`.
pub fn fg_generator(g: &Arc<MetricGraph>, x: Rational, y: Rational) -> PLFunction {
    let mut profile: Profile = Vec::new();
    profile.push((Rational::zero(), x.clone()));
    if !x.is_zero() && rat(1) - &x != Rational::zero() {
        profile.push((rat(1) - &x, x.clone()));
    }
    profile.push((rat(1), Rational::zero()));
    if !y.is_zero() && rat(1) + &y != rat(2) {
        profile.push((rat(1) + &y, y.clone()));
    }
    profile.push((rat(2), y.clone()));
    let mut cleaned: Profile = Vec::new();
    for (t, v) in profile {
        if cleaned.last().map(|(lt, _)| lt == &t).unwrap_or(false) {
            continue;
        }
        cleaned.push((t, v));
    }
    PLFunction::from_profiles(Arc::clone(g), vec![cleaned]).expect("valid profile")
}

/// Lollipop: unit stem `v -- w` with a unit loop at `w`, `D = m w`.
/// The module generators are the stem functions of slopes `0..=m` together
/// with the loop peaks of slope pairs `(c, d)`, `c + d <= m`.
pub fn lollipop(m: i64) -> Fixture {
    assert!(m >= 1);
    let graph = MetricGraph::new(
        vec!["v".into(), "w".into()],
        vec![
            ("stem".into(), "v".into(), "w".into(), rat(1)),
            ("loop".into(), "w".into(), "w".into(), rat(1)),
        ],
    )
    .unwrap();
    let w = Point::Vertex(1);
    let divisor = Divisor::single(Arc::clone(&graph), w, m);
    let mut gens = Vec::new();
    for k in 0..=m {
        // slope k toward v on the stem, constant on the loop
        let profile_stem = vec![(Rational::zero(), rat(k)), (rat(1), Rational::zero())];
        let profile_loop = vec![(Rational::zero(), Rational::zero()), (rat(1), Rational::zero())];
        gens.push(
            PLFunction::from_profiles(Arc::clone(&graph), vec![profile_stem, profile_loop])
                .unwrap(),
        );
    }
    for c in 1..m {
        for d in 1..m {
            if c + d > m {
                continue;
            }
            let peak_t = Rational::new(d.into(), (c + d).into());
            let peak_v = rat(c) * &peak_t;
            let profile_stem = vec![(Rational::zero(), Rational::zero()), (rat(1), Rational::zero())];
            let profile_loop = vec![
                (Rational::zero(), Rational::zero()),
                (peak_t, peak_v),
                (rat(1), Rational::zero()),
            ];
            gens.push(
                PLFunction::from_profiles(Arc::clone(&graph), vec![profile_stem, profile_loop])
                    .unwrap(),
            );
        }
    }
    let module = TropicalSubmodule::new(divisor.clone(), gens).unwrap();
    Fixture {
        name: "lollipop",
        graph,
        divisor,
        module: Some(module),
        matroid: None,
    }
}

pub fn lollipop_leftward_at_w(f: &Fixture) -> TangentVector {
    let stem = f.graph.edge_index("stem").unwrap();
    TangentVector {
        base: Point::Vertex(1),
        edge: stem,
        toward_head: false,
    }
}

pub fn lollipop_upward_at_w(f: &Fixture) -> TangentVector {
    let l = f.graph.edge_index("loop").unwrap();
    TangentVector {
        base: Point::Vertex(1),
        edge: l,
        toward_head: true,
    }
}

/// Barbell: unit loops at `v` and `w` joined by a unit bridge, with the
/// canonical divisor `v + w`. The rank-1 series is generated by the two
/// loop-peak functions.
pub fn barbell() -> Fixture {
    let graph = MetricGraph::new(
        vec!["v".into(), "w".into()],
        vec![
            ("loopL".into(), "v".into(), "v".into(), rat(1)),
            ("bridge".into(), "v".into(), "w".into(), rat(1)),
            ("loopR".into(), "w".into(), "w".into(), rat(1)),
        ],
    )
    .unwrap();
    let divisor = graph.canonical_divisor();
    let half = ratio(1, 2);
    // left generator: peak on the left loop, slope -1 across the bridge
    let left = PLFunction::from_profiles(
        Arc::clone(&graph),
        vec![
            vec![(rat(0), rat(0)), (half.clone(), half.clone()), (rat(1), rat(0))],
            vec![(rat(0), rat(0)), (rat(1), rat(-1))],
            vec![(rat(0), rat(-1)), (rat(1), rat(-1))],
        ],
    )
    .unwrap();
    let right = PLFunction::from_profiles(
        Arc::clone(&graph),
        vec![
            vec![(rat(0), rat(0)), (rat(1), rat(0))],
            vec![(rat(0), rat(0)), (rat(1), rat(1))],
            vec![(rat(0), rat(1)), (half.clone(), ratio(3, 2)), (rat(1), rat(1))],
        ],
    )
    .unwrap();
    let module = TropicalSubmodule::new(divisor.clone(), vec![left, right]).unwrap();
    Fixture {
        name: "barbell",
        graph,
        divisor,
        module: Some(module),
        matroid: None,
    }
}

pub fn barbell_bridge_rightward(f: &Fixture) -> TangentVector {
    let bridge = f.graph.edge_index("bridge").unwrap();
    TangentVector {
        base: Point::Interior(bridge, ratio(1, 2)),
        edge: bridge,
        toward_head: true,
    }
}

/// Interval with `D = 2x`; the module is the classified rank-1 series for
/// the given divisor points (defaults `w1 = 1/4`, `w0 = 3/4`).
pub fn interval() -> Fixture {
    interval_with(ratio(3, 4), ratio(1, 4))
}

pub fn interval_with(w0: Rational, w1: Rational) -> Fixture {
    let graph = interval_graph(1);
    let x = Point::Vertex(0);
    let divisor = Divisor::single(Arc::clone(&graph), x, 2);
    let w0p = graph.point_on_edge(0, w0).unwrap();
    let w1p = graph.point_on_edge(0, w1).unwrap();
    let module = crate::tls::interval_rank1_builder(&graph, &divisor, &w0p, &w1p)
        .expect("classified interval series");
    Fixture {
        name: "interval",
        graph,
        divisor,
        module: Some(module),
        matroid: None,
    }
}

/// Length-2 interval with `D = 2v` at the midpoint and the three-function
/// truncation of the non-finitely-generated submodule.
pub fn fg() -> Fixture {
    let graph = interval_graph(2);
    let v = graph.point_on_edge(0, rat(1)).unwrap();
    let divisor = Divisor::single(Arc::clone(&graph), v, 2);
    let gens = vec![
        fg_generator(&graph, rat(1), rat(0)),
        fg_generator(&graph, rat(0), rat(1)),
        fg_generator(&graph, ratio(1, 2), ratio(1, 2)),
    ];
    let module = TropicalSubmodule::new(divisor.clone(), gens).unwrap();
    Fixture {
        name: "fg",
        graph,
        divisor,
        module: Some(module),
        matroid: None,
    }
}

/// The genus-7 graph with a triangle `p, q, s` and triple edges to the
/// outer vertices `x, y, z`; all edge lengths 1 and `D = p + q + s`.
pub fn luo() -> Fixture {
    let mut edges = vec![
        ("pq".to_string(), "p".to_string(), "q".to_string(), rat(1)),
        ("sq".to_string(), "s".to_string(), "q".to_string(), rat(1)),
        ("sp".to_string(), "s".to_string(), "p".to_string(), rat(1)),
    ];
    for (inner, outer) in [("p", "x"), ("q", "y"), ("s", "z")] {
        for k in 1..=3 {
            edges.push((
                format!("{inner}{outer}{k}"),
                inner.to_string(),
                outer.to_string(),
                rat(1),
            ));
        }
    }
    let graph = MetricGraph::new(
        vec![
            "p".into(),
            "q".into(),
            "s".into(),
            "x".into(),
            "y".into(),
            "z".into(),
        ],
        edges,
    )
    .unwrap();
    let divisor = Divisor::from_coeffs(
        Arc::clone(&graph),
        vec![
            (graph.point_at_vertex("p").unwrap(), 1),
            (graph.point_at_vertex("q").unwrap(), 1),
            (graph.point_at_vertex("s").unwrap(), 1),
        ],
    );
    Fixture {
        name: "luo",
        graph,
        divisor,
        module: None,
        matroid: None,
    }
}

pub fn luo_sq_rightward(f: &Fixture) -> TangentVector {
    let sq = f.graph.edge_index("sq").unwrap();
    TangentVector {
        base: Point::Interior(sq, ratio(1, 2)),
        edge: sq,
        toward_head: true,
    }
}

/// Loop of loops of genus 4: a triangle with side lengths `l1, l2, l3` and
/// a length-2 loop at each corner. The divisor is `2 vL + w` with `w` on
/// the `l2` side at distance `x` from the top corner.
pub fn loop_of_loops(l1: Rational, l2: Rational, l3: Rational, x: Rational) -> Fixture {
    assert!(x >= Rational::zero() && x <= l2);
    let graph = MetricGraph::new(
        vec!["vL".into(), "vT".into(), "vR".into()],
        vec![
            ("l1".into(), "vL".into(), "vT".into(), l1),
            ("l2".into(), "vT".into(), "vR".into(), l2),
            ("l3".into(), "vL".into(), "vR".into(), l3),
            ("loopL".into(), "vL".into(), "vL".into(), rat(2)),
            ("loopT".into(), "vT".into(), "vT".into(), rat(2)),
            ("loopR".into(), "vR".into(), "vR".into(), rat(2)),
        ],
    )
    .unwrap();
    let e_l2 = graph.edge_index("l2").unwrap();
    let w = graph.point_on_edge(e_l2, x).unwrap();
    let divisor = Divisor::from_coeffs(
        Arc::clone(&graph),
        vec![(graph.point_at_vertex("vL").unwrap(), 2), (w, 1)],
    );
    Fixture {
        name: "loop-of-loops",
        graph,
        divisor,
        module: None,
        matroid: None,
    }
}

pub fn loop_of_loops_default() -> Fixture {
    loop_of_loops(rat(5), rat(4), rat(3), rat(3))
}

/// Loop midpoints `u1` (right), `u2` (left), `u3` (top).
pub fn loop_of_loops_marked_points(f: &Fixture) -> Vec<Point> {
    ["loopR", "loopL", "loopT"]
        .iter()
        .map(|id| {
            let e = f.graph.edge_index(id).unwrap();
            f.graph.point_on_edge(e, rat(1)).unwrap()
        })
        .collect()
}

/// The functions forced through the loop midpoints, in the order
/// `u1, u2, u3`; each is the unique (up to scaling) member of `R(D)`
/// covering its point.
pub fn loop_of_loops_forced_triple(f: &Fixture) -> Result<Vec<PLFunction>> {
    let mut out = Vec::new();
    for u in loop_of_loops_marked_points(f) {
        let e = Divisor::single(Arc::clone(&f.graph), u, 1);
        let phi = extremal_function(&f.divisor, &e)?.ok_or_else(|| {
            crate::error::Error::internal("marked point not covered".to_string())
        })?;
        out.push(phi);
    }
    Ok(out)
}

/// The Fano plane as a rank-3 matroid, lines `{i, i+1, i+3}` mod 7.
pub fn fano_matroid() -> Matroid {
    let elements: Vec<String> = (1..=7).map(|i| i.to_string()).collect();
    let lines: Vec<Vec<String>> = (0..7)
        .map(|i| {
            vec![
                ((i % 7) + 1).to_string(),
                (((i + 1) % 7) + 1).to_string(),
                (((i + 3) % 7) + 1).to_string(),
            ]
        })
        .collect();
    Matroid::from_lines(elements, lines).unwrap()
}

pub fn u34_matroid() -> Matroid {
    Matroid::from_circuits(
        (1..=4).map(|i| i.to_string()).collect(),
        vec![(1..=4).map(|i| i.to_string()).collect()],
        3,
    )
    .unwrap()
}

fn matroid_fixture(name: &'static str, m: Matroid) -> Fixture {
    let (_, divisor, module) = cartwright_series(&m).expect("levi construction");
    let graph = Arc::clone(divisor.graph());
    Fixture {
        name,
        graph,
        divisor,
        module: Some(module),
        matroid: Some(m),
    }
}

pub fn fano() -> Fixture {
    matroid_fixture("fano", fano_matroid())
}

pub fn u34() -> Fixture {
    matroid_fixture("u34", u34_matroid())
}

/// One line of a fixture's expected-facts table.
#[derive(Debug, Clone)]
pub struct Fact {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

fn fact(label: &str, passed: bool, detail: impl Into<String>) -> Fact {
    Fact {
        label: label.to_string(),
        passed,
        detail: detail.into(),
    }
}

/// Runs the expected-facts table of a fixture. Every fact is re-computed;
/// the table passes when all lines pass.
pub fn expected_facts(f: &Fixture, seed: u64) -> Result<Vec<Fact>> {
    use crate::dependence::{decide_dependence, verify_combination};
    use crate::matroid::{bergman_membership, TropicalPoint, ValuatedMatroid};
    use crate::rank::{bn_rank, riemann_roch_residual};
    use crate::tls;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut facts = Vec::new();
    match f.name {
        "lollipop" => {
            let m = f.divisor.degree();
            let sigma = f.module.as_ref().unwrap();
            facts.push(fact("genus 1", f.graph.genus() == 1, ""));
            let zl = lollipop_leftward_at_w(f);
            let zu = lollipop_upward_at_w(f);
            let expect_l: Vec<i64> = (0..=m).collect();
            let expect_u: Vec<i64> = (0..m).collect();
            let sl = sigma.slope_vector(&zl).slopes;
            let su = sigma.slope_vector(&zu).slopes;
            facts.push(fact(
                "leftward slope vector at w is (0..m)",
                sl == expect_l,
                format!("{sl:?}"),
            ));
            facts.push(fact(
                "upward slope vector at w is (0..m-1)",
                su == expect_u,
                format!("{su:?}"),
            ));
            let (sc, _) = tls::slope_count_check(sigma, m - 1)?;
            facts.push(fact(
                "slope counts differ between tangents: not a tropical linear series",
                !sc.passed(),
                "",
            ));
            if m == 2 {
                let g = sigma.generators();
                let dep13 = decide_dependence(&[g[0].clone(), g[1].clone(), g[3].clone()])?;
                let dep23 = decide_dependence(&[g[0].clone(), g[2].clone(), g[3].clone()])?;
                let ind12 = decide_dependence(&[g[0].clone(), g[1].clone(), g[2].clone()])?;
                facts.push(fact(
                    "{f0,f1,f3} and {f0,f2,f3} dependent, {f0,f1,f2} independent",
                    dep13.is_dependent() && dep23.is_dependent() && ind12.is_independent(),
                    "",
                ));
            }
        }
        "barbell" => {
            let sigma = f.module.as_ref().unwrap();
            facts.push(fact("genus 2", f.graph.genus() == 2, ""));
            facts.push(fact(
                "canonical divisor is v + w",
                f.divisor == f.graph.canonical_divisor() && f.divisor.degree() == 2,
                "",
            ));
            facts.push(fact("rank of K is 1", bn_rank(&f.divisor)? == 1, ""));
            facts.push(fact(
                "Riemann-Roch residual of K is 0",
                riemann_roch_residual(&f.divisor)? == 0,
                "",
            ));
            let sv = sigma.slope_vector(&barbell_bridge_rightward(f)).slopes;
            facts.push(fact(
                "bridge slope vector is (-1, 1)",
                sv == vec![-1, 1],
                format!("{sv:?}"),
            ));
            let report = tls::verify_tls(sigma, 1, 0, &mut rng, None)?;
            facts.push(fact("verifies as a rank-1 series", report.passed(), ""));
            facts.push(fact(
                "divisor family has dimension 1",
                tls::divisor_space_dim(sigma, 1)? == 1,
                "",
            ));
        }
        "interval" => {
            let sigma = f.module.as_ref().unwrap();
            facts.push(fact(
                "three minimal generators",
                sigma.generators().len() == 3,
                "",
            ));
            let z = f.graph.point_on_edge(0, ratio(1, 2)).unwrap();
            facts.push(fact(
                "a generator breaks at the midpoint z = 1/2",
                sigma.generators().iter().any(|g| g.divisor().coeff(&z) != 0),
                "",
            ));
            let report = tls::verify_tls(sigma, 1, 0, &mut rng, None)?;
            facts.push(fact("verifies as a rank-1 series", report.passed(), ""));
            let v = tls::rank1_valuated_circuits(sigma)?;
            facts.push(fact(
                "valuated circuits pass the axioms at rank 2",
                v.rank == 2 && v.axioms_check().ok(),
                "",
            ));
        }
        "fg" => {
            let sigma = f.module.as_ref().unwrap();
            let ans = decide_dependence(sigma.generators())?;
            let with_cert = matches!(
                &ans,
                crate::dependence::DependenceAnswer::Independent {
                    certificate: Some(_),
                    ..
                }
            );
            facts.push(fact(
                "the three functions are independent with a certificate",
                with_cert,
                "",
            ));
            let report = tls::verify_tls(sigma, 1, 0, &mut rng, None)?;
            facts.push(fact("covers every point", report.axiom1.passed(), ""));
            facts.push(fact("two slopes everywhere", report.slope_count.passed(), ""));
            facts.push(fact(
                "fails the dependence axiom: not a tropical linear series",
                !report.axiom2.passed(),
                "",
            ));
        }
        "luo" => {
            facts.push(fact("genus 7", f.graph.genus() == 7, ""));
            let k = f.graph.canonical_divisor();
            facts.push(fact("canonical degree 12", k.degree() == 12, ""));
            facts.push(fact("rank of p+q+s is 1", bn_rank(&f.divisor)? == 1, ""));
            let w = tls::rank1_obstruction(&f.divisor)?;
            let ok = match &w {
                None => false,
                Some(w) => {
                    let zeta = luo_sq_rightward(f);
                    let mut slopes: Vec<i64> =
                        w.functions.iter().map(|g| g.slope(&zeta)).collect();
                    slopes.sort_unstable();
                    slopes == vec![-1, 0, 1]
                }
            };
            facts.push(fact(
                "independent forced triple with s-q slopes {0, 1, -1}: no rank-1 series",
                ok,
                "",
            ));
        }
        "loop-of-loops" => {
            facts.push(fact("genus 4", f.graph.genus() == 4, ""));
            facts.push(fact("degree 3", f.divisor.degree() == 3, ""));
            facts.push(fact("rank 1", bn_rank(&f.divisor)? == 1, ""));
            let l1 = &f.graph.edges()[f.graph.edge_index("l1")?].length;
            let l2 = &f.graph.edges()[f.graph.edge_index("l2")?].length;
            let l3 = &f.graph.edges()[f.graph.edge_index("l3")?].length;
            let threshold = (l1 + l2 - l3) / rat(2);
            let e_l2 = f.graph.edge_index("l2")?;
            let x = f
                .divisor
                .support()
                .find_map(|p| match p {
                    Point::Interior(e, t) if *e == e_l2 => Some(t.clone()),
                    _ => None,
                })
                .unwrap_or_else(Rational::zero);
            let triple = loop_of_loops_forced_triple(f)?;
            let ans = decide_dependence(&triple)?;
            let expect_dependent = x == threshold;
            facts.push(fact(
                &format!(
                    "forced triple dependent iff x = (l1+l2-l3)/2 = {}",
                    crate::rational::format_rational(&threshold)
                ),
                ans.is_dependent() == expect_dependent,
                format!("x = {}", crate::rational::format_rational(&x)),
            ));
        }
        "fano" | "u34" => {
            let m = f.matroid.as_ref().unwrap();
            let sigma = f.module.as_ref().unwrap();
            facts.push(fact("matroid axioms pass", m.axioms_check().ok(), ""));
            let flats = m.rank2_flats()?;
            let (nf, deg) = if f.name == "fano" { (7, 7) } else { (6, 4) };
            facts.push(fact(
                &format!("{nf} rank-2 flats"),
                flats.len() == nf,
                format!("{}", flats.len()),
            ));
            facts.push(fact(
                &format!("divisor degree {deg}"),
                f.divisor.degree() == deg,
                "",
            ));
            let a2 = tls::check_axiom2(sigma, 2)?;
            facts.push(fact("every four generators dependent", a2.passed(), ""));
            let mut all_dep = true;
            for c in &m.circuits {
                let fns: Vec<PLFunction> = c
                    .iter()
                    .map(|e| sigma.generators()[*e].clone())
                    .collect();
                let coeffs = vec![Rational::zero(); fns.len()];
                if !verify_combination(&fns, &coeffs)?.is_dependence() {
                    all_dep = false;
                }
            }
            facts.push(fact(
                "every circuit is a dependence at zero coefficients",
                all_dep,
                "",
            ));
            let vm = ValuatedMatroid::trivial(m);
            let mut all_in = true;
            for v in 0..f.graph.vertices().len() {
                let coords: Vec<Rational> = sigma
                    .generators()
                    .iter()
                    .map(|g| g.evaluate(&Point::Vertex(v)))
                    .collect();
                if !bergman_membership(&TropicalPoint::finite(coords), &vm)? {
                    all_in = false;
                }
            }
            facts.push(fact(
                "vertex images lie in the tropical linear space",
                all_in,
                "",
            ));
            if f.name == "fano" {
                let a1 = tls::check_axiom1(sigma, 2, 60, &mut rng)?;
                facts.push(fact("covers sampled degree-2 divisors", a1.passed(), ""));
                let a3 = tls::check_axiom3(sigma, 2, None, &mut rng)?;
                facts.push(fact("rank-1 subseries found at every tangent", a3.passed(), ""));
            } else {
                // the four-generator module does not dominate every
                // degree-2 divisor; record the explicit uncovered example
                let e1 = f.graph.edge_index("1-f1")?;
                let e2 = f.graph.edge_index("2-f4")?;
                let x = f.graph.point_on_edge(e1, ratio(3, 4))?;
                let y = f.graph.point_on_edge(e2, ratio(1, 8))?;
                let e = Divisor::from_coeffs(Arc::clone(&f.graph), vec![(x, 1), (y, 1)]);
                let covered = tls::divisor_is_covered(sigma, &e)?;
                facts.push(fact(
                    "an explicit degree-2 divisor is not dominated (not a rank-2 series)",
                    !covered,
                    e.describe(),
                ));
            }
        }
        other => {
            return Err(crate::error::Error::input(format!(
                "unknown fixture {other:?}"
            )))
        }
    }
    Ok(facts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_list_builds() {
        assert_eq!(names().len(), 8);
        let _ = lollipop(2);
        let _ = lollipop(3);
        let _ = barbell();
        let _ = interval();
        let _ = fg();
        let _ = luo();
        let _ = loop_of_loops_default();
        let _ = fano();
        let _ = u34();
    }

    #[test]
    fn barbell_left_generator_drops_across_the_bridge() {
        let b = barbell();
        let left = &b.module.as_ref().unwrap().generators()[0];
        let v = b.graph.point_at_vertex("v").unwrap();
        let w = b.graph.point_at_vertex("w").unwrap();
        // slope -1 along the unit bridge
        assert_eq!(left.evaluate(&w) - left.evaluate(&v), rat(-1));
    }

    #[test]
    fn barbell_canonical_minus_3v_is_not_equivalent_effective() {
        let b = barbell();
        let v = b.graph.point_at_vertex("v").unwrap();
        let d = b.divisor.sub(&Divisor::single(Arc::clone(&b.graph), v, 3));
        assert_eq!(d.degree(), -1);
        assert!(!crate::rank::is_equivalent_effective(&d).unwrap());
    }

    #[test]
    fn barbell_canonical_divisor() {
        let b = barbell();
        assert_eq!(b.graph.genus(), 2);
        assert_eq!(b.divisor.degree(), 2);
        assert_eq!(b.divisor.coeff(&Point::Vertex(0)), 1);
        assert_eq!(b.divisor.coeff(&Point::Vertex(1)), 1);
    }

    #[test]
    fn luo_counts() {
        let f = luo();
        assert_eq!(f.graph.genus(), 7);
        let k = f.graph.canonical_divisor();
        assert_eq!(k.degree(), 12);
        for v in ["p", "q", "s"] {
            let p = f.graph.point_at_vertex(v).unwrap();
            assert_eq!(k.coeff(&p), 3);
            assert_eq!(f.graph.tangent_vectors(&p).len(), 5);
        }
        for v in ["x", "y", "z"] {
            assert_eq!(k.coeff(&f.graph.point_at_vertex(v).unwrap()), 1);
        }
    }

    #[test]
    fn loop_of_loops_counts() {
        let f = loop_of_loops_default();
        assert_eq!(f.graph.vertices().len(), 3);
        assert_eq!(f.graph.edges().len(), 6);
        assert_eq!(f.graph.genus(), 4);
        assert_eq!(f.divisor.degree(), 3);
    }

    #[test]
    fn lollipop_genus_and_degree() {
        let f = lollipop(3);
        assert_eq!(f.graph.genus(), 1);
        assert_eq!(f.divisor.degree(), 3);
        assert_eq!(f.module.as_ref().unwrap().generators().len(), 4 + 3);
    }
}
