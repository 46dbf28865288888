//! Config-file loading and validation.
//!
//! A config file extends the built-in catalog with extra manifolds, maps
//! and frames. The format is JSON:
//!
//! ```json
//! {
//!   "manifolds": [
//!     {"name": "m", "coords": ["x", "z"],
//!      "metric_upper": [["exp(2*z)", "0"], ["1"]]}
//!   ],
//!   "maps": [
//!     {"name": "f", "source": "sol", "target": "m",
//!      "components": ["x", "z"], "params": {"A": 1.0}}
//!   ],
//!   "frames": [
//!     {"name": "fr", "manifold": "sol",
//!      "vectors": [["0", "exp(z)", "0"], ["0", "0", "1"], ["exp(-z)", "0", "0"]],
//!      "vertical": 3}
//!   ]
//! }
//! ```
//!
//! `metric_upper` holds the upper triangle of the metric row by row: row
//! `i` lists `g[i][i] .. g[i][dim-1]`, so the rows shrink by one entry
//! each. Supplying full square rows is rejected; symmetry is a shape
//! invariant of the format, not a runtime check. `vertical` is the
//! 1-based index of the frame member spanning the fiber direction, and
//! may be omitted for frames without a designated vertical.
//!
//! All three top-level arrays are optional. Entries may reference both
//! built-in and config-defined names; duplicate names (including clashes
//! with built-ins) are rejected. Every diagnostic carries the JSON
//! pointer of the offending element. After construction, each manifold
//! is probed for positive definiteness, each frame for orthonormality,
//! and each map for evaluability on a fixed low-discrepancy point cloud,
//! so an indefinite metric or a tilted frame is reported at load time
//! with the failing point named.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{Map, Value};
use solgeom::catalog::Catalog;
use solgeom::frame::{FrameField, ORTHONORMALITY_TOL};
use solgeom::sample::halton_points;
use solgeom::{ChartedManifold, SmoothMap};

/// Number of low-discrepancy probe points used to vet each config object.
const PROBE_POINTS: usize = 16;

/// A malformed or unusable config file. Printed to stderr and mapped to
/// exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// JSON pointer to the offending element (empty for file-level
    /// problems such as unreadable input).
    pub pointer: String,
    pub message: String,
}

impl ConfigError {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> ConfigError {
        ConfigError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pointer.is_empty() {
            write!(f, "config error: {}", self.message)
        } else {
            write!(f, "config error at {}: {}", self.pointer, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

/// Reads `path` and adds its entries to `cat`.
pub fn apply_config_file(cat: &mut Catalog, path: &str) -> Result<(), ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("", format!("cannot read `{path}`: {e}")))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| ConfigError::new("", format!("invalid JSON in `{path}`: {e}")))?;
    apply_config_value(cat, &value)
}

/// Adds the entries of an already-parsed config document to `cat`.
pub fn apply_config_value(cat: &mut Catalog, value: &Value) -> Result<(), ConfigError> {
    let root = as_object(value, "")?;
    reject_unknown_keys(root, "", &["manifolds", "maps", "frames"])?;

    if let Some(v) = root.get("manifolds") {
        for (i, entry) in as_array(v, "/manifolds")?.iter().enumerate() {
            add_manifold(cat, entry, &format!("/manifolds/{i}"))?;
        }
    }
    if let Some(v) = root.get("frames") {
        for (i, entry) in as_array(v, "/frames")?.iter().enumerate() {
            add_frame(cat, entry, &format!("/frames/{i}"))?;
        }
    }
    if let Some(v) = root.get("maps") {
        for (i, entry) in as_array(v, "/maps")?.iter().enumerate() {
            add_map(cat, entry, &format!("/maps/{i}"))?;
        }
    }
    Ok(())
}

fn add_manifold(cat: &mut Catalog, entry: &Value, ptr: &str) -> Result<(), ConfigError> {
    let obj = as_object(entry, ptr)?;
    reject_unknown_keys(obj, ptr, &["name", "coords", "metric_upper"])?;
    let name = string_field(obj, "name", ptr)?;
    let coords: Vec<String> = string_array(required(obj, "coords", ptr)?, &format!("{ptr}/coords"))?;
    let dim = coords.len();
    if !(2..=3).contains(&dim) {
        return Err(ConfigError::new(
            format!("{ptr}/coords"),
            format!("expected 2 or 3 coordinates, found {dim}"),
        ));
    }

    let rows_ptr = format!("{ptr}/metric_upper");
    let rows = as_array(required(obj, "metric_upper", ptr)?, &rows_ptr)?;
    if rows.len() != dim {
        return Err(ConfigError::new(
            rows_ptr,
            format!("expected {dim} upper-triangle rows, found {}", rows.len()),
        ));
    }
    let mut upper: Vec<Vec<solgeom::Expr>> = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        let row_ptr = format!("{ptr}/metric_upper/{i}");
        let entries = as_array(row, &row_ptr)?;
        if entries.len() != dim - i {
            return Err(ConfigError::new(
                row_ptr,
                format!(
                    "row {i} must list g[{i}][{i}..{}]: expected {} entries, found {}",
                    dim - 1,
                    dim - i,
                    entries.len()
                ),
            ));
        }
        let mut parsed = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            parsed.push(parse_expr(e, &format!("{row_ptr}/{j}"))?);
        }
        upper.push(parsed);
    }

    let coord_refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let manifold = ChartedManifold::new(&name, &coord_refs, &upper)
        .map_err(|e| ConfigError::new(ptr, e.to_string()))?;

    // Positive definiteness at the probe cloud; the core error names the
    // failing point.
    for q in halton_points(PROBE_POINTS, dim) {
        manifold
            .inverse_metric_at(&q)
            .map_err(|e| ConfigError::new(format!("{ptr}/metric_upper"), e.to_string()))?;
    }
    cat.add_manifold(manifold)
        .map_err(|e| ConfigError::new(format!("{ptr}/name"), e.to_string()))
}

fn add_frame(cat: &mut Catalog, entry: &Value, ptr: &str) -> Result<(), ConfigError> {
    let obj = as_object(entry, ptr)?;
    reject_unknown_keys(obj, ptr, &["name", "manifold", "vectors", "vertical"])?;
    let name = string_field(obj, "name", ptr)?;
    let manifold_name = string_field(obj, "manifold", ptr)?;
    let manifold = cat
        .manifold(&manifold_name)
        .map_err(|e| ConfigError::new(format!("{ptr}/manifold"), e.to_string()))?
        .clone();
    let dim = manifold.dim();

    let vecs_ptr = format!("{ptr}/vectors");
    let rows = as_array(required(obj, "vectors", ptr)?, &vecs_ptr)?;
    if rows.len() != dim {
        return Err(ConfigError::new(
            vecs_ptr,
            format!("expected {dim} frame members, found {}", rows.len()),
        ));
    }
    let mut members: Vec<Vec<solgeom::Expr>> = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        let row_ptr = format!("{ptr}/vectors/{i}");
        let entries = as_array(row, &row_ptr)?;
        if entries.len() != dim {
            return Err(ConfigError::new(
                row_ptr,
                format!("expected {dim} components, found {}", entries.len()),
            ));
        }
        let mut parsed = Vec::with_capacity(dim);
        for (j, e) in entries.iter().enumerate() {
            parsed.push(parse_expr(e, &format!("{row_ptr}/{j}"))?);
        }
        members.push(parsed);
    }

    // `vertical` counts members from 1, matching the row order of
    // `vectors`; the core indexes from 0.
    let vertical = match obj.get("vertical") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let vptr = format!("{ptr}/vertical");
            let idx = v
                .as_u64()
                .filter(|&k| (1..=dim as u64).contains(&k))
                .ok_or_else(|| {
                    ConfigError::new(&vptr, format!("expected an integer in 1..={dim}"))
                })?;
            Some(idx as usize - 1)
        }
    };

    let frame = FrameField::new(&name, manifold, &members, vertical)
        .map_err(|e| ConfigError::new(ptr, e.to_string()))?;
    for q in halton_points(PROBE_POINTS, dim) {
        let r = frame
            .orthonormality_residual_at(&q)
            .map_err(|e| ConfigError::new(&vecs_ptr, e.to_string()))?;
        if r > ORTHONORMALITY_TOL {
            return Err(ConfigError::new(
                &vecs_ptr,
                format!("frame not orthonormal at {q:?} (gram residual {r:.3e})"),
            ));
        }
    }
    cat.add_frame(frame)
        .map_err(|e| ConfigError::new(format!("{ptr}/name"), e.to_string()))
}

fn add_map(cat: &mut Catalog, entry: &Value, ptr: &str) -> Result<(), ConfigError> {
    let obj = as_object(entry, ptr)?;
    reject_unknown_keys(obj, ptr, &["name", "source", "target", "components", "params"])?;
    let name = string_field(obj, "name", ptr)?;
    let source = cat
        .manifold(&string_field(obj, "source", ptr)?)
        .map_err(|e| ConfigError::new(format!("{ptr}/source"), e.to_string()))?
        .clone();
    let target = cat
        .manifold(&string_field(obj, "target", ptr)?)
        .map_err(|e| ConfigError::new(format!("{ptr}/target"), e.to_string()))?
        .clone();

    let comps_ptr = format!("{ptr}/components");
    let comps = as_array(required(obj, "components", ptr)?, &comps_ptr)?;
    if comps.len() != target.dim() {
        return Err(ConfigError::new(
            comps_ptr,
            format!(
                "expected {} components for target `{}`, found {}",
                target.dim(),
                target.name(),
                comps.len()
            ),
        ));
    }
    let mut parsed = Vec::with_capacity(comps.len());
    for (j, e) in comps.iter().enumerate() {
        parsed.push(parse_expr(e, &format!("{comps_ptr}/{j}"))?);
    }

    let mut params: Vec<(String, f64)> = Vec::new();
    if let Some(v) = obj.get("params") {
        let pptr = format!("{ptr}/params");
        for (k, pv) in as_object(v, &pptr)? {
            let num = pv.as_f64().ok_or_else(|| {
                ConfigError::new(format!("{pptr}/{k}"), "expected a number")
            })?;
            params.push((k.clone(), num));
        }
    }
    let param_refs: Vec<(&str, f64)> = params.iter().map(|(k, v)| (k.as_str(), *v)).collect();

    let dim = source.dim();
    let map = SmoothMap::new(&name, source, target, &parsed, &param_refs)
        .map_err(|e| ConfigError::new(ptr, e.to_string()))?;
    for q in halton_points(PROBE_POINTS, dim) {
        map.value_at(&q)
            .map_err(|e| ConfigError::new(&comps_ptr, e.to_string()))?;
    }
    cat.add_map(map)
        .map_err(|e| ConfigError::new(format!("{ptr}/name"), e.to_string()))
}

fn parse_expr(v: &Value, ptr: &str) -> Result<solgeom::Expr, ConfigError> {
    let s = v
        .as_str()
        .ok_or_else(|| ConfigError::new(ptr, "expected an expression string"))?;
    solgeom::parse(s).map_err(|e| ConfigError::new(ptr, e.to_string()))
}

fn as_object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>, ConfigError> {
    v.as_object()
        .ok_or_else(|| ConfigError::new(ptr, "expected an object"))
}

fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>, ConfigError> {
    v.as_array()
        .ok_or_else(|| ConfigError::new(ptr, "expected an array"))
}

fn required<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
    ptr: &str,
) -> Result<&'a Value, ConfigError> {
    obj.get(key)
        .ok_or_else(|| ConfigError::new(ptr, format!("missing required field `{key}`")))
}

fn string_field(obj: &Map<String, Value>, key: &str, ptr: &str) -> Result<String, ConfigError> {
    required(obj, key, ptr)?
        .as_str()
        .map(str::to_string)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| ConfigError::new(format!("{ptr}/{key}"), "expected a nonempty string"))
}

fn string_array(v: &Value, ptr: &str) -> Result<Vec<String>, ConfigError> {
    let arr = as_array(v, ptr)?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, e) in arr.iter().enumerate() {
        out.push(
            e.as_str()
                .map(str::to_string)
                .ok_or_else(|| ConfigError::new(format!("{ptr}/{i}"), "expected a string"))?,
        );
    }
    Ok(out)
}

fn reject_unknown_keys(
    obj: &Map<String, Value>,
    ptr: &str,
    allowed: &[&str],
) -> Result<(), ConfigError> {
    let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
    for key in obj.keys() {
        if !allowed.contains(key.as_str()) {
            return Err(ConfigError::new(
                format!("{ptr}/{key}"),
                format!(
                    "unknown field `{key}` (allowed: {})",
                    allowed
                        .iter()
                        .copied()
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ));
        }
    }
    Ok(())
}
