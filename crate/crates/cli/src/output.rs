//! Machine-readable report shapes. The structures emitted here are pinned
//! by docs/schema.json.

use serde_json::{json, Value};
use std::sync::Arc;
use tropls_core::dependence::{CombinationVerdict, DependenceAnswer};
use tropls_core::graph::MetricGraph;
use tropls_core::json as cj;
use tropls_core::rational::format_rational;
use tropls_core::tls::{TLSReport, Verdict};

pub fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

pub fn verdict_json(g: &Arc<MetricGraph>, v: &CombinationVerdict) -> (i32, Value) {
    match v {
        CombinationVerdict::Dependence { cells } => (
            0,
            json!({
                "command": "dep verify",
                "kind": "dependence",
                "cells": cells.iter().map(|c| json!({
                    "sample": cj::point_to_json(g, &c.sample),
                    "achievers": c.achievers,
                })).collect::<Vec<_>>(),
            }),
        ),
        CombinationVerdict::Certificate { unique_points } => (
            1,
            json!({
                "command": "dep verify",
                "kind": "certificate",
                "unique_points": unique_points.iter().map(|(i, p)| json!({
                    "index": i,
                    "at": cj::point_to_json(g, p),
                })).collect::<Vec<_>>(),
            }),
        ),
        CombinationVerdict::Neither {
            unique_at,
            never_unique,
        } => (
            1,
            json!({
                "command": "dep verify",
                "kind": "neither",
                "unique_index": unique_at.0,
                "unique_at": cj::point_to_json(g, &unique_at.1),
                "never_unique": never_unique,
            }),
        ),
    }
}

pub fn dependence_json(g: &Arc<MetricGraph>, a: &DependenceAnswer) -> (i32, Value) {
    match a {
        DependenceAnswer::Dependent { coeffs, witness } => {
            let (_, w) = verdict_json(g, witness);
            (
                0,
                json!({
                    "command": "dep decide",
                    "verdict": "dependent",
                    "coeffs": coeffs.iter().map(format_rational).collect::<Vec<_>>(),
                    "witness": w,
                }),
            )
        }
        DependenceAnswer::Independent { certificate, log } => {
            let cert = certificate.as_ref().map(|(coeffs, w)| {
                let (_, wv) = verdict_json(g, w);
                json!({
                    "coeffs": coeffs.iter().map(format_rational).collect::<Vec<_>>(),
                    "witness": wv,
                })
            });
            (
                1,
                json!({
                    "command": "dep decide",
                    "verdict": "independent",
                    "certificate": cert,
                    "log": {"iterations": log.iterations, "notes": log.notes},
                }),
            )
        }
        DependenceAnswer::Undetermined { log } => (
            3,
            json!({
                "command": "dep decide",
                "verdict": "undetermined",
                "log": {"iterations": log.iterations, "notes": log.notes},
            }),
        ),
    }
}

fn verdict_value(g: &Arc<MetricGraph>, v: &Verdict) -> Value {
    match v {
        Verdict::Pass => json!({"status": "pass"}),
        Verdict::PassSampled(n) => json!({"status": "pass", "sampled": n}),
        Verdict::Fail(f) => {
            let witness = match f {
                tropls_core::tls::AxiomFailure::Uncovered(d) => {
                    json!({"uncovered": cj::divisor_to_json(d)})
                }
                tropls_core::tls::AxiomFailure::IndependentSubset(s) => {
                    json!({"independent_subset": s})
                }
                tropls_core::tls::AxiomFailure::SlopeCount { tangent, slopes } => json!({
                    "tangent_base": cj::point_to_json(g, &tangent.base),
                    "slopes": slopes,
                }),
                tropls_core::tls::AxiomFailure::NoSubseries { tangent, level } => json!({
                    "tangent_base": cj::point_to_json(g, &tangent.base),
                    "level": level,
                }),
                tropls_core::tls::AxiomFailure::Other(s) => json!({"detail": s}),
            };
            json!({"status": "fail", "witness": witness})
        }
        Verdict::Unknown(r) => json!({"status": "unknown", "reason": r}),
    }
}

pub fn tls_report(g: &Arc<MetricGraph>, report: &TLSReport, as_json: bool) -> i32 {
    let passed = report.passed();
    let any_unknown = matches!(report.axiom1, Verdict::Unknown(_))
        || matches!(report.axiom2, Verdict::Unknown(_))
        || matches!(report.axiom3, Verdict::Unknown(_));
    let code = if passed {
        0
    } else if any_unknown {
        3
    } else {
        1
    };
    if as_json {
        let slopes: Vec<Value> = report
            .slope_table
            .iter()
            .map(|(label, s)| json!({"tangent": label, "slopes": s}))
            .collect();
        print(&json!({
            "command": "tls verify",
            "rank": report.rank,
            "passed": passed,
            "axiom1": verdict_value(g, &report.axiom1),
            "axiom2": verdict_value(g, &report.axiom2),
            "axiom3": verdict_value(g, &report.axiom3),
            "axiom4": {"status": "recorded", "note": report.axiom4_note},
            "axiom5": verdict_value(g, &report.axiom5),
            "slope_count": verdict_value(g, &report.slope_count),
            "slope_table": slopes,
        }));
    } else {
        let describe = |v: &Verdict| match v {
            Verdict::Pass => "pass".to_string(),
            Verdict::PassSampled(n) => format!("pass ({n} samples)"),
            Verdict::Fail(_) => "fail".to_string(),
            Verdict::Unknown(r) => format!("unknown ({r})"),
        };
        println!("coverage axiom:   {}", describe(&report.axiom1));
        println!("dependence axiom: {}", describe(&report.axiom2));
        println!("filtration axiom: {}", describe(&report.axiom3));
        println!("slope counts:     {}", describe(&report.slope_count));
        println!("closed/definable: {}", report.axiom4_note);
        println!("valuated matroid: {}", describe(&report.axiom5));
        println!(
            "{}",
            if passed {
                "a tropical linear series of the stated rank"
            } else {
                "not a tropical linear series"
            }
        );
    }
    code
}
