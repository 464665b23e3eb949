//! JSON interchange for graphs, regions and settings.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::error::Error;
use crate::graph::{extract_region, PartialSetting, Region, Setting, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: String,
    pub v: String,
    pub len: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionJson {
    pub sigma: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingJson {
    pub lengths: Vec<EdgeJson>,
}

/// What `gen` writes: a graph plus an optional setting and region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub graph: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub setting: Option<SettingJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub region: Option<RegionJson>,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse(e.to_string())
    }
}

pub fn graph_to_json(g: &WeightedGraph) -> GraphJson {
    GraphJson {
        vertices: g.names().to_vec(),
        edges: edges_json(g, g.lengths()),
    }
}

fn edges_json(g: &WeightedGraph, lengths: &[f64]) -> Vec<EdgeJson> {
    g.edges()
        .iter()
        .zip(lengths)
        .map(|(&(u, v), &len)| EdgeJson {
            u: g.name(u).to_string(),
            v: g.name(v).to_string(),
            len,
        })
        .collect()
}

pub fn graph_from_json(json: &GraphJson) -> Result<WeightedGraph, Error> {
    let edges: Vec<(&str, &str, f64)> = json
        .edges
        .iter()
        .map(|e| (e.u.as_str(), e.v.as_str(), e.len))
        .collect();
    let names: Vec<&str> = json.vertices.iter().map(String::as_str).collect();
    WeightedGraph::new(&names, &edges)
}

pub fn setting_to_json(g: &WeightedGraph, s: &Setting) -> SettingJson {
    SettingJson {
        lengths: edges_json(g, &s.lengths),
    }
}

pub fn partial_to_json(g: &WeightedGraph, p: &PartialSetting) -> SettingJson {
    SettingJson {
        lengths: p
            .iter()
            .map(|(&e, &len)| {
                let (u, v) = g.edges()[e];
                EdgeJson {
                    u: g.name(u).to_string(),
                    v: g.name(v).to_string(),
                    len,
                }
            })
            .collect(),
    }
}

/// Lengths for the listed edges only.
pub fn partial_from_json(g: &WeightedGraph, json: &SettingJson) -> Result<PartialSetting, Error> {
    let mut out = PartialSetting::new();
    for item in &json.lengths {
        let e = g.edge_id(g.vertex(&item.u)?, g.vertex(&item.v)?)?;
        if !(item.len > 0.0 && item.len.is_finite()) {
            return Err(Error::NonpositiveLength(item.u.clone(), item.v.clone(), item.len));
        }
        if out.insert(e, item.len).is_some() {
            return Err(Error::DuplicateEdge(item.u.clone(), item.v.clone()));
        }
    }
    Ok(out)
}

/// A setting that must name every edge exactly once.
pub fn setting_from_json(g: &WeightedGraph, json: &SettingJson) -> Result<Setting, Error> {
    let partial = partial_from_json(g, json)?;
    if partial.len() != g.edge_count() {
        return Err(Error::SettingMismatch(format!(
            "{} of {} edges given",
            partial.len(),
            g.edge_count()
        )));
    }
    Setting::new(g, partial.into_values().collect())
}

pub fn region_to_json(g: &WeightedGraph, r: &Region) -> RegionJson {
    RegionJson {
        sigma: r.sigma.iter().map(|&v| g.name(v).to_string()).collect(),
    }
}

pub fn region_from_json(g: &WeightedGraph, json: &RegionJson) -> Result<Region, Error> {
    let ids = json
        .sigma
        .iter()
        .map(|s| g.vertex(s))
        .collect::<Result<Vec<_>, _>>()?;
    extract_region(g, &ids)
}

fn parse_value(text: &str) -> Result<Value, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Reads a graph from Graph JSON or from a bundle.
pub fn load_graph(text: &str) -> Result<WeightedGraph, IoError> {
    let value = parse_value(text)?;
    let json: GraphJson = match value.get("graph") {
        Some(inner) => serde_json::from_value(inner.clone())?,
        None => serde_json::from_value(value)?,
    };
    Ok(graph_from_json(&json)?)
}

/// Reads Setting JSON, or the `setting` member of a bundle; plain Graph JSON has none.
pub fn load_setting_json(text: &str) -> Result<Option<SettingJson>, IoError> {
    let value = parse_value(text)?;
    if value.get("vertices").is_some() {
        return Ok(None);
    }
    if value.get("graph").is_some() {
        return match value.get("setting") {
            Some(inner) => Ok(Some(serde_json::from_value(inner.clone())?)),
            None => Ok(None),
        };
    }
    Ok(Some(serde_json::from_value(value)?))
}

/// Reads Region JSON, or the `region` member of a bundle; plain Graph JSON has none.
pub fn load_region_json(text: &str) -> Result<Option<RegionJson>, IoError> {
    let value = parse_value(text)?;
    if value.get("vertices").is_some() {
        return Ok(None);
    }
    if value.get("graph").is_some() {
        return match value.get("region") {
            Some(inner) => Ok(Some(serde_json::from_value(inner.clone())?)),
            None => Ok(None),
        };
    }
    Ok(Some(serde_json::from_value(value)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ball_region, gen_tree};

    #[test]
    fn graph_round_trip() {
        let g = gen_tree(2, 2).unwrap().with_lengths(&[1.0, 2.0, 3.0, 1.5, 0.5, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let text = serde_json::to_string(&graph_to_json(&g)).unwrap();
        assert_eq!(load_graph(&text).unwrap(), g);
    }

    #[test]
    fn bundle_round_trip() {
        let g = gen_tree(2, 2).unwrap();
        let region = ball_region(&g, 0, 1).unwrap();
        let s = Setting::constant(&g, 2.0).unwrap();
        let bundle = Bundle {
            graph: graph_to_json(&g),
            setting: Some(setting_to_json(&g, &s)),
            region: Some(region_to_json(&g, &region)),
        };
        let text = serde_json::to_string(&bundle).unwrap();
        let g2 = load_graph(&text).unwrap();
        let s2 = setting_from_json(&g2, &load_setting_json(&text).unwrap().unwrap()).unwrap();
        assert_eq!(s2, s);
        let r2 = region_from_json(&g2, &load_region_json(&text).unwrap().unwrap()).unwrap();
        assert_eq!(r2, region);
    }

    #[test]
    fn reads_plain_graph_json() {
        let text = r#"{"vertices":["a","b","c"],"edges":[{"u":"a","v":"b","len":1},{"u":"c","v":"b","len":2}]}"#;
        let g = load_graph(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        let s = r#"{"lengths":[{"u":"b","v":"c","len":4}]}"#;
        let partial = partial_from_json(&g, &load_setting_json(s).unwrap().unwrap()).unwrap();
        assert_eq!(partial.get(&1), Some(&4.0));
        assert!(setting_from_json(&g, &load_setting_json(s).unwrap().unwrap()).is_err());
        assert_eq!(load_setting_json(text).unwrap(), None);
        assert_eq!(load_region_json(text).unwrap(), None);
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(load_graph("{not json"), Err(IoError::Parse(_))));
        assert!(matches!(load_graph(r#"{"vertices":[]}"#), Err(IoError::Parse(_))));
        let bad = r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","len":-1}]}"#;
        assert!(matches!(load_graph(bad), Err(IoError::Invalid(Error::NonpositiveLength(..)))));
    }
}
