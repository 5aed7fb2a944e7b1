//! JSON serialization of metric graphs and grid homotopies.
//!
//! ```json
//! {"vertices": [0, 1, 2],
//!  "edges": [[0, 1, "1"], [1, 2, "3/2"], [2, 0, "1"]],
//!  "basepoint": 0}
//! ```
//!
//! Lengths are exact rationals rendered as `"n"` or `"n/d"` in lowest
//! terms; parsing accepts any rational literal.  `basepoint` is optional
//! and defaults to the smallest vertex id.
//!
//! Grid homotopies serialize with vertex indices, steps as
//! `[edge, forward]` pairs (`null` for a stutter), connector paths as
//! step arrays, and one certificate center per square.

use crate::graph::{EdgePath, GraphError, MetricGraph, Step, VertexId};
use crate::homotopy::{GridHomotopy, GridRow};
use crate::rat::{fmt_rat, parse_rat, RatParseError};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("top level must be an object")]
    NotObject,
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("field {0:?} has the wrong shape")]
    BadField(&'static str),
    #[error("edge entry {0} must be [u, v, length]")]
    BadEdge(usize),
    #[error("bad length in edge entry {0}: {1}")]
    BadLength(usize, RatParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn graph_to_json(g: &MetricGraph) -> String {
    let vertices: Vec<Value> = g.vertex_ids().iter().map(|&id| json!(id)).collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!([g.id(e.u), g.id(e.v), fmt_rat(e.len)]))
        .collect();
    let mut obj = Map::new();
    obj.insert("vertices".into(), Value::Array(vertices));
    obj.insert("edges".into(), Value::Array(edges));
    obj.insert("basepoint".into(), json!(g.id(g.basepoint())));
    serde_json::to_string_pretty(&Value::Object(obj)).unwrap()
}

pub fn graph_from_json(s: &str) -> Result<MetricGraph, FileError> {
    let v: Value = serde_json::from_str(s)?;
    let obj = v.as_object().ok_or(FileError::NotObject)?;
    let verts_v = obj.get("vertices").ok_or(FileError::MissingField("vertices"))?;
    let vertices: Vec<VertexId> = verts_v
        .as_array()
        .ok_or(FileError::BadField("vertices"))?
        .iter()
        .map(|x| x.as_i64().ok_or(FileError::BadField("vertices")))
        .collect::<Result<_, _>>()?;
    let edges_v = obj.get("edges").ok_or(FileError::MissingField("edges"))?;
    let mut edges = Vec::new();
    for (i, e) in edges_v.as_array().ok_or(FileError::BadField("edges"))?.iter().enumerate() {
        let arr = e.as_array().ok_or(FileError::BadEdge(i))?;
        if arr.len() != 3 {
            return Err(FileError::BadEdge(i));
        }
        let u = arr[0].as_i64().ok_or(FileError::BadEdge(i))?;
        let v = arr[1].as_i64().ok_or(FileError::BadEdge(i))?;
        let len_str = match &arr[2] {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(FileError::BadEdge(i)),
        };
        let len = parse_rat(&len_str).map_err(|e| FileError::BadLength(i, e))?;
        edges.push((u, v, len));
    }
    let basepoint = match obj.get("basepoint") {
        None | Some(Value::Null) => None,
        Some(b) => Some(b.as_i64().ok_or(FileError::BadField("basepoint"))?),
    };
    Ok(MetricGraph::new(vertices, edges, basepoint)?)
}

fn step_to_json(s: &Step) -> Value {
    json!([s.edge, s.forward])
}

fn step_from_json(v: &Value, field: &'static str) -> Result<Step, FileError> {
    let arr = v.as_array().ok_or(FileError::BadField(field))?;
    if arr.len() != 2 {
        return Err(FileError::BadField(field));
    }
    let edge = arr[0].as_u64().ok_or(FileError::BadField(field))? as usize;
    let forward = arr[1].as_bool().ok_or(FileError::BadField(field))?;
    Ok(Step { edge, forward })
}

pub fn grid_to_json(h: &GridHomotopy) -> String {
    let rows: Vec<Value> = h
        .rows
        .iter()
        .map(|r| {
            let steps: Vec<Value> = r
                .steps
                .iter()
                .map(|s| s.as_ref().map_or(Value::Null, step_to_json))
                .collect();
            json!({"verts": r.verts, "steps": steps})
        })
        .collect();
    let verticals: Vec<Value> = h
        .verticals
        .iter()
        .map(|vr| {
            Value::Array(
                vr.iter()
                    .map(|conn| Value::Array(conn.iter().map(step_to_json).collect()))
                    .collect(),
            )
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("rows".into(), Value::Array(rows));
    obj.insert("verticals".into(), Value::Array(verticals));
    obj.insert("centers".into(), json!(h.centers));
    serde_json::to_string_pretty(&Value::Object(obj)).unwrap()
}

pub fn grid_from_json(s: &str) -> Result<GridHomotopy, FileError> {
    let v: Value = serde_json::from_str(s)?;
    let obj = v.as_object().ok_or(FileError::NotObject)?;
    let rows_v = obj.get("rows").ok_or(FileError::MissingField("rows"))?;
    let mut rows = Vec::new();
    for rv in rows_v.as_array().ok_or(FileError::BadField("rows"))? {
        let ro = rv.as_object().ok_or(FileError::BadField("rows"))?;
        let verts: Vec<usize> = ro
            .get("verts")
            .and_then(|x| x.as_array())
            .ok_or(FileError::BadField("rows"))?
            .iter()
            .map(|x| x.as_u64().map(|n| n as usize).ok_or(FileError::BadField("rows")))
            .collect::<Result<_, _>>()?;
        let mut steps = Vec::new();
        for sv in ro
            .get("steps")
            .and_then(|x| x.as_array())
            .ok_or(FileError::BadField("rows"))?
        {
            steps.push(match sv {
                Value::Null => None,
                other => Some(step_from_json(other, "rows")?),
            });
        }
        rows.push(GridRow { verts, steps });
    }
    let verts_v = obj.get("verticals").ok_or(FileError::MissingField("verticals"))?;
    let mut verticals = Vec::new();
    for vr in verts_v.as_array().ok_or(FileError::BadField("verticals"))? {
        let mut row = Vec::new();
        for conn in vr.as_array().ok_or(FileError::BadField("verticals"))? {
            let steps: Vec<Step> = conn
                .as_array()
                .ok_or(FileError::BadField("verticals"))?
                .iter()
                .map(|x| step_from_json(x, "verticals"))
                .collect::<Result<_, _>>()?;
            row.push(steps);
        }
        verticals.push(row);
    }
    let centers_v = obj.get("centers").ok_or(FileError::MissingField("centers"))?;
    let mut centers = Vec::new();
    for cr in centers_v.as_array().ok_or(FileError::BadField("centers"))? {
        let row: Vec<usize> = cr
            .as_array()
            .ok_or(FileError::BadField("centers"))?
            .iter()
            .map(|x| x.as_u64().map(|n| n as usize).ok_or(FileError::BadField("centers")))
            .collect::<Result<_, _>>()?;
        centers.push(row);
    }
    Ok(GridHomotopy { rows, verticals, centers })
}

/// Based loops rendered as `{"start": v, "steps": [[e, fwd], ...]}`.
pub fn path_to_json(p: &EdgePath) -> String {
    let steps: Vec<Value> = p.steps.iter().map(step_to_json).collect();
    serde_json::to_string(&json!({"start": p.start, "steps": steps})).unwrap()
}

pub fn path_from_json(s: &str) -> Result<EdgePath, FileError> {
    let v: Value = serde_json::from_str(s)?;
    let obj = v.as_object().ok_or(FileError::NotObject)?;
    let start = obj
        .get("start")
        .and_then(|x| x.as_u64())
        .ok_or(FileError::MissingField("start"))? as usize;
    let steps: Vec<Step> = obj
        .get("steps")
        .and_then(|x| x.as_array())
        .ok_or(FileError::MissingField("steps"))?
        .iter()
        .map(|x| step_from_json(x, "steps"))
        .collect::<Result<_, _>>()?;
    Ok(EdgePath { start, steps })
}
