//! JSON codecs for the core types. All numbers travel as exact rational
//! strings (`"p/q"` or `"n"`); loaders validate integer slopes, vertex
//! continuity, positive lengths and connectivity, and name the offending
//! edge in diagnostics.

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::matroid::Matroid;
use crate::plfn::PLFunction;
use crate::rational::{format_rational, parse_rational};
use crate::submodule::TropicalSubmodule;
use crate::tls::SubgraphSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphDto {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeDto {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub length: String,
}

pub fn graph_to_json(g: &MetricGraph) -> GraphDto {
    GraphDto {
        vertices: g.vertices().iter().map(|v| v.name.clone()).collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeDto {
                id: e.id.clone(),
                tail: g.vertices()[e.tail].name.clone(),
                head: g.vertices()[e.head].name.clone(),
                length: format_rational(&e.length),
            })
            .collect(),
    }
}

pub fn graph_from_json(dto: &GraphDto) -> Result<Arc<MetricGraph>> {
    let edges = dto
        .edges
        .iter()
        .map(|e| {
            Ok((
                e.id.clone(),
                e.tail.clone(),
                e.head.clone(),
                parse_rational(&e.length)
                    .map_err(|err| Error::input(format!("edge {:?}: {err}", e.id)))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    MetricGraph::new(dto.vertices.clone(), edges)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDto {
    Vertex { vertex: String },
    Interior { edge: String, t: String },
}

pub fn point_to_json(g: &MetricGraph, p: &Point) -> PointDto {
    match p {
        Point::Vertex(v) => PointDto::Vertex {
            vertex: g.vertices()[*v].name.clone(),
        },
        Point::Interior(e, t) => PointDto::Interior {
            edge: g.edges()[*e].id.clone(),
            t: format_rational(t),
        },
    }
}

pub fn point_from_json(g: &Arc<MetricGraph>, dto: &PointDto) -> Result<Point> {
    match dto {
        PointDto::Vertex { vertex } => g.point_at_vertex(vertex),
        PointDto::Interior { edge, t } => {
            let ei = g.edge_index(edge)?;
            g.point_on_edge(ei, parse_rational(t)?)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DivisorDto {
    pub coeffs: Vec<CoeffDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CoeffDto {
    pub at: PointDto,
    pub n: i64,
}

pub fn divisor_to_json(d: &Divisor) -> DivisorDto {
    DivisorDto {
        coeffs: d
            .iter()
            .map(|(p, c)| CoeffDto {
                at: point_to_json(d.graph(), p),
                n: *c,
            })
            .collect(),
    }
}

pub fn divisor_from_json(g: &Arc<MetricGraph>, dto: &DivisorDto) -> Result<Divisor> {
    let mut d = Divisor::zero(Arc::clone(g));
    for c in &dto.coeffs {
        d.add_point(point_from_json(g, &c.at)?, c.n);
    }
    Ok(d)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PLFunctionDto {
    pub edges: BTreeMap<String, Vec<BreakpointDto>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BreakpointDto {
    pub t: String,
    pub val: String,
}

pub fn plfn_to_json(f: &PLFunction) -> PLFunctionDto {
    let g = f.graph();
    let mut edges = BTreeMap::new();
    for (ei, e) in g.edges().iter().enumerate() {
        edges.insert(
            e.id.clone(),
            f.profile(ei)
                .iter()
                .map(|(t, v)| BreakpointDto {
                    t: format_rational(t),
                    val: format_rational(v),
                })
                .collect(),
        );
    }
    PLFunctionDto { edges }
}

pub fn plfn_from_json(g: &Arc<MetricGraph>, dto: &PLFunctionDto) -> Result<PLFunction> {
    let mut profiles = vec![Vec::new(); g.edges().len()];
    for (id, bps) in &dto.edges {
        let ei = g.edge_index(id)?;
        profiles[ei] = bps
            .iter()
            .map(|b| {
                Ok((
                    parse_rational(&b.t)
                        .map_err(|e| Error::input(format!("edge {id:?}: {e}")))?,
                    parse_rational(&b.val)
                        .map_err(|e| Error::input(format!("edge {id:?}: {e}")))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
    }
    for (ei, p) in profiles.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::input(format!(
                "missing breakpoints for edge {:?}",
                g.edges()[ei].id
            )));
        }
    }
    PLFunction::from_profiles(Arc::clone(g), profiles)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModuleDto {
    pub divisor: DivisorDto,
    pub generators: Vec<PLFunctionDto>,
}

pub fn module_to_json(m: &TropicalSubmodule) -> ModuleDto {
    ModuleDto {
        divisor: divisor_to_json(m.divisor()),
        generators: m.generators().iter().map(plfn_to_json).collect(),
    }
}

pub fn module_from_json(g: &Arc<MetricGraph>, dto: &ModuleDto) -> Result<TropicalSubmodule> {
    let divisor = divisor_from_json(g, &dto.divisor)?;
    let generators = dto
        .generators
        .iter()
        .map(|f| plfn_from_json(g, f))
        .collect::<Result<Vec<_>>>()?;
    TropicalSubmodule::new(divisor, generators)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatroidDto {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuits: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

pub fn matroid_from_json(dto: &MatroidDto) -> Result<Matroid> {
    match (&dto.lines, &dto.circuits) {
        (Some(lines), None) => Matroid::from_lines(dto.elements.clone(), lines.clone()),
        (None, Some(circuits)) => Matroid::from_circuits(
            dto.elements.clone(),
            circuits.clone(),
            dto.rank.unwrap_or(3),
        ),
        _ => Err(Error::input(
            "matroid needs exactly one of \"lines\" or \"circuits\"".to_string(),
        )),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SubgraphDto {
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<SubgraphEdgeDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SubgraphEdgeDto {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
}

pub fn subgraph_from_json(dto: &SubgraphDto) -> Result<SubgraphSpec> {
    let mut spec = SubgraphSpec {
        vertices: dto.vertices.clone(),
        ..Default::default()
    };
    for e in &dto.edges {
        match (&e.from, &e.to) {
            (None, None) => spec.full_edges.push(e.id.clone()),
            (Some(f), Some(t)) => spec.partial_edges.push((
                e.id.clone(),
                parse_rational(f)?,
                parse_rational(t)?,
            )),
            _ => {
                return Err(Error::input(format!(
                    "edge {:?}: segment needs both \"from\" and \"to\"",
                    e.id
                )))
            }
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn graph_round_trip_and_validation() {
        let b = fixtures::barbell();
        let dto = graph_to_json(&b.graph);
        let back = graph_from_json(&dto).unwrap();
        assert_eq!(*back, *b.graph);

        let bad: GraphDto = serde_json::from_str(
            r#"{"vertices":["v","w"],"edges":[{"id":"e","tail":"v","head":"w","length":"0"}]}"#,
        )
        .unwrap();
        assert!(graph_from_json(&bad).is_err());
        let disconnected: GraphDto = serde_json::from_str(
            r#"{"vertices":["v","w","u"],"edges":[{"id":"e","tail":"v","head":"w","length":"1"}]}"#,
        )
        .unwrap();
        assert!(graph_from_json(&disconnected).is_err());
    }

    #[test]
    fn function_and_divisor_round_trip() {
        let b = fixtures::barbell();
        let sigma = b.module.as_ref().unwrap();
        for g in sigma.generators() {
            let dto = plfn_to_json(g);
            let back = plfn_from_json(&b.graph, &dto).unwrap();
            assert_eq!(back, *g);
        }
        let dto = divisor_to_json(&b.divisor);
        let back = divisor_from_json(&b.graph, &dto).unwrap();
        assert_eq!(back, b.divisor);

        let dto = module_to_json(sigma);
        let back = module_from_json(&b.graph, &dto).unwrap();
        assert_eq!(back.generators().len(), sigma.generators().len());
    }

    #[test]
    fn loader_rejects_non_integer_slope_with_edge_name() {
        let b = fixtures::barbell();
        let bad: PLFunctionDto = serde_json::from_str(
            r#"{"edges":{
                "loopL":[{"t":"0","val":"0"},{"t":"1","val":"0"}],
                "bridge":[{"t":"0","val":"0"},{"t":"1","val":"1/2"}],
                "loopR":[{"t":"0","val":"1/2"},{"t":"1","val":"1/2"}]
            }}"#,
        )
        .unwrap();
        let err = plfn_from_json(&b.graph, &bad).unwrap_err();
        assert!(err.to_string().contains("bridge"), "{err}");
    }
}
