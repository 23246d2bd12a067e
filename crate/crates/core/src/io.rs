//! On-disk formats. Framed files carry one JSON header line followed by a
//! little-endian `f64` payload; coefficient fields keep their payload in a
//! sidecar file named by the header. Every write goes through a temporary
//! file in the target directory and a rename.

use crate::dirichlet::{DirichletSeries, HalfLineFunction, Layout};
use crate::dyadic::CoefficientField;
use crate::error::{Error, Result};
use crate::fourier::{Block, BlockFunction, Channel, TrigPolynomial};
use crate::haar::GridFunction;
use crate::sets::SparseSchedule;
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::fs;
use std::path::{Path, PathBuf};

pub const FIELD_FORMAT: &str = "mfzoo-field-v1";
pub const GRID_FORMAT: &str = "mfzoo-grid-v1";
pub const TRIG_FORMAT: &str = "mfzoo-trig-v1";
pub const DS_FORMAT: &str = "mfzoo-ds-v1";
pub const HALFLINE_FORMAT: &str = "mfzoo-halfline-v1";
pub const BLOCKS_FORMAT: &str = "mfzoo-blocks-v1";

/// Deepest field accepted in the nested-array JSON variant.
pub const JSON_FIELD_MAX_DEPTH: usize = 12;

fn temp_path(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!(".{name}.tmp{}", std::process::id()))
}

/// Writes `bytes` to `path` via a temporary sibling and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = temp_path(path);
    let res = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(res?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes())
}

fn encode_f64(values: impl IntoIterator<Item = f64>) -> Vec<u8> {
    values.into_iter().flat_map(f64::to_le_bytes).collect()
}

fn encode_complex(values: &[Complex64]) -> Vec<u8> {
    encode_f64(values.iter().flat_map(|z| [z.re, z.im]))
}

fn decode_f64(bytes: &[u8], expected: usize, what: &str) -> Result<Vec<f64>> {
    if bytes.len() != 8 * expected {
        return Err(Error::format(format!(
            "{what}: payload has {} bytes, expected {}",
            bytes.len(),
            8 * expected
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

fn decode_complex(bytes: &[u8], expected: usize, what: &str) -> Result<Vec<Complex64>> {
    let flat = decode_f64(bytes, 2 * expected, what)?;
    Ok(flat.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

fn write_framed(path: &Path, header: &Value, payload: &[u8]) -> Result<()> {
    let mut bytes = serde_json::to_vec(header)?;
    bytes.push(b'\n');
    bytes.extend_from_slice(payload);
    write_atomic(path, &bytes)
}

fn read_framed(path: &Path, format: &str) -> Result<(Value, Vec<u8>)> {
    let bytes = fs::read(path)?;
    let split = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::format(format!("{}: missing header line", path.display())))?;
    let header: Value = serde_json::from_slice(&bytes[..split])?;
    check_format(&header, format)?;
    Ok((header, bytes[split + 1..].to_vec()))
}

fn check_format(header: &Value, format: &str) -> Result<()> {
    match header.get("format").and_then(Value::as_str) {
        Some(f) if f == format => Ok(()),
        Some(f) => Err(Error::format(format!("expected {format}, found {f}"))),
        None => Err(Error::format("header has no format tag")),
    }
}

fn header_u64(header: &Value, key: &str) -> Result<u64> {
    header
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::format(format!("header field `{key}` missing or not an integer")))
}

fn header_i64(header: &Value, key: &str) -> Result<i64> {
    header
        .get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::format(format!("header field `{key}` missing or not an integer")))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{name}.bin"))
}

fn field_meta(field: &CoefficientField) -> Value {
    Value::Object(field.meta().clone())
}

/// Header at `path`, levels in `<path>.bin`.
pub fn write_field(path: &Path, field: &CoefficientField) -> Result<()> {
    let sidecar = sidecar_path(path);
    let payload = encode_f64(field.levels().iter().flatten().copied());
    write_atomic(&sidecar, &payload)?;
    let header = json!({
        "format": FIELD_FORMAT,
        "max_depth": field.max_depth(),
        "meta": field_meta(field),
        "data": sidecar.file_name().map(|n| n.to_string_lossy().into_owned()),
    });
    let mut text = serde_json::to_string(&header)?;
    text.push('\n');
    if let Err(e) = write_text(path, &text) {
        let _ = fs::remove_file(&sidecar);
        return Err(e);
    }
    Ok(())
}

/// Nested-array variant, depth at most [`JSON_FIELD_MAX_DEPTH`].
pub fn write_field_json(path: &Path, field: &CoefficientField) -> Result<()> {
    if field.max_depth() > JSON_FIELD_MAX_DEPTH {
        return Err(Error::format(format!(
            "JSON fields stop at depth {JSON_FIELD_MAX_DEPTH}"
        )));
    }
    let header = json!({
        "format": FIELD_FORMAT,
        "max_depth": field.max_depth(),
        "meta": field_meta(field),
        "levels": field.levels(),
    });
    let mut text = serde_json::to_string(&header)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_field(path: &Path) -> Result<CoefficientField> {
    let header: Value = serde_json::from_slice(&fs::read(path)?)?;
    check_format(&header, FIELD_FORMAT)?;
    let depth = header_u64(&header, "max_depth")? as usize;
    if depth > crate::dyadic::MAX_FIELD_DEPTH {
        return Err(Error::format(format!("depth {depth} too large")));
    }
    let meta: Map<String, Value> = match header.get("meta") {
        Some(Value::Object(m)) => m.clone(),
        None | Some(Value::Null) => Map::new(),
        Some(_) => return Err(Error::format("`meta` must be an object")),
    };
    let levels: Vec<Vec<f64>> = if let Some(levels) = header.get("levels") {
        if depth > JSON_FIELD_MAX_DEPTH {
            return Err(Error::format(format!(
                "JSON fields stop at depth {JSON_FIELD_MAX_DEPTH}"
            )));
        }
        serde_json::from_value(levels.clone())?
    } else {
        let data = header
            .get("data")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::format("field header names no data file"))?;
        let bytes = fs::read(path.with_file_name(data))?;
        let flat = decode_f64(&bytes, (2usize << depth) - 1, "field")?;
        (0..=depth)
            .map(|j| flat[(1 << j) - 1..(2 << j) - 1].to_vec())
            .collect()
    };
    if levels.len() != depth + 1 {
        return Err(Error::format(format!(
            "{} levels for depth {depth}",
            levels.len()
        )));
    }
    CoefficientField::with_meta(levels, meta).map_err(|e| Error::format(e.to_string()))
}

pub fn write_grid(path: &Path, f: &GridFunction) -> Result<()> {
    let header = json!({ "format": GRID_FORMAT, "depth": f.depth() });
    write_framed(path, &header, &encode_f64(f.values().iter().copied()))
}

pub fn read_grid(path: &Path) -> Result<GridFunction> {
    let (header, payload) = read_framed(path, GRID_FORMAT)?;
    let depth = header_u64(&header, "depth")? as usize;
    if depth > crate::dyadic::MAX_FIELD_DEPTH {
        return Err(Error::format(format!("depth {depth} too large")));
    }
    let values = decode_f64(&payload, 1 << depth, "grid")?;
    GridFunction::new(depth, values).map_err(|e| Error::format(e.to_string()))
}

pub fn write_trig(path: &Path, p: &TrigPolynomial) -> Result<()> {
    let header = json!({ "format": TRIG_FORMAT, "n_min": p.n_min(), "n_max": p.n_max() });
    write_framed(path, &header, &encode_complex(p.coeffs()))
}

pub fn read_trig(path: &Path) -> Result<TrigPolynomial> {
    let (header, payload) = read_framed(path, TRIG_FORMAT)?;
    let (lo, hi) = (header_i64(&header, "n_min")?, header_i64(&header, "n_max")?);
    if hi < lo - 1 {
        return Err(Error::format(format!("n_max {hi} below n_min {lo}")));
    }
    let coeffs = decode_complex(&payload, (hi - lo + 1) as usize, "trig")?;
    TrigPolynomial::new(lo, coeffs).map_err(|e| Error::format(e.to_string()))
}

pub fn write_ds(path: &Path, g: &DirichletSeries) -> Result<()> {
    let header = json!({ "format": DS_FORMAT, "n_max": g.n_max() });
    write_framed(path, &header, &encode_complex(g.coeffs()))
}

pub fn read_ds(path: &Path) -> Result<DirichletSeries> {
    let (header, payload) = read_framed(path, DS_FORMAT)?;
    let n = header_u64(&header, "n_max")? as usize;
    let coeffs = decode_complex(&payload, n, "Dirichlet series")?;
    DirichletSeries::new(coeffs).map_err(|e| Error::format(e.to_string()))
}

pub fn write_halfline(path: &Path, f: &HalfLineFunction) -> Result<()> {
    let mut header = json!({ "format": HALFLINE_FORMAT, "pieces": f.pieces() });
    let (layout, breaks) = match f.layout() {
        Layout::Unit => ("unit", None),
        Layout::Log => ("log", None),
        Layout::Breakpoints(b) => ("breakpoints", Some(b.clone())),
    };
    header["layout"] = json!(layout);
    if let Some(b) = breaks {
        header["breakpoints"] = json!(b);
    }
    write_framed(path, &header, &encode_complex(f.values()))
}

pub fn read_halfline(path: &Path) -> Result<HalfLineFunction> {
    let (header, payload) = read_framed(path, HALFLINE_FORMAT)?;
    let n = header_u64(&header, "pieces")? as usize;
    let values = decode_complex(&payload, n, "half-line function")?;
    let f = match header.get("layout").and_then(Value::as_str) {
        Some("unit") => HalfLineFunction::unit_grid(values),
        Some("log") => HalfLineFunction::log_grid(values),
        Some("breakpoints") => {
            let b: Vec<f64> = serde_json::from_value(
                header
                    .get("breakpoints")
                    .cloned()
                    .ok_or_else(|| Error::format("breakpoints missing"))?,
            )?;
            HalfLineFunction::new(b, values)
        }
        other => return Err(Error::format(format!("unknown layout {other:?}"))),
    };
    f.map_err(|e| Error::format(e.to_string()))
}

fn block_file(path: &Path, k: usize, part: &str) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{name}.k{k}.{part}.trig"))
}

/// Manifest at `path`; each block's `P` and `Q` go to
/// `<path>.k<k>.p.trig` and `<path>.k<k>.q.trig`.
pub fn write_blocks(path: &Path, f: &BlockFunction) -> Result<()> {
    let mut entries = Vec::new();
    let mut written = Vec::new();
    let mut run = || -> Result<()> {
        for b in &f.blocks {
            let (pf, qf) = (block_file(path, b.k, "p"), block_file(path, b.k, "q"));
            write_trig(&pf, &b.p)?;
            written.push(pf.clone());
            write_trig(&qf, &b.q)?;
            written.push(qf.clone());
            let name = |p: &Path| p.file_name().map(|n| n.to_string_lossy().into_owned());
            entries.push(json!({
                "k": b.k,
                "m": b.m,
                "weight": b.weight,
                "channel": b.channel,
                "phase": b.phase,
                "p": name(&pf),
                "q": name(&qf),
            }));
        }
        let manifest = json!({
            "format": BLOCKS_FORMAT,
            "schedule": f.schedule,
            "constant": [f.constant.re, f.constant.im],
            "blocks": entries,
        });
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        write_text(path, &text)
    };
    let res = run();
    if res.is_err() {
        for p in &written {
            let _ = fs::remove_file(p);
        }
    }
    res
}

pub fn read_blocks(path: &Path) -> Result<BlockFunction> {
    let manifest: Value = serde_json::from_slice(&fs::read(path)?)?;
    check_format(&manifest, BLOCKS_FORMAT)?;
    let schedule: SparseSchedule = serde_json::from_value(
        manifest
            .get("schedule")
            .cloned()
            .ok_or_else(|| Error::format("schedule missing"))?,
    )?;
    let constant: [f64; 2] = serde_json::from_value(
        manifest
            .get("constant")
            .cloned()
            .ok_or_else(|| Error::format("constant missing"))?,
    )?;
    let entries = manifest
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::format("blocks missing"))?;
    let mut blocks = Vec::with_capacity(entries.len());
    for e in entries {
        let file = |key: &str| -> Result<PathBuf> {
            let name = e
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::format(format!("block entry lacks `{key}`")))?;
            Ok(path.with_file_name(name))
        };
        let num = |key: &str| -> Result<f64> {
            e.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::format(format!("block entry lacks `{key}`")))
        };
        let channel: Channel = serde_json::from_value(
            e.get("channel")
                .cloned()
                .ok_or_else(|| Error::format("block entry lacks `channel`"))?,
        )?;
        blocks.push(Block {
            k: header_u64(e, "k")? as usize,
            m: header_u64(e, "m")? as usize,
            weight: num("weight")?,
            channel,
            phase: num("phase")?,
            p: read_trig(&file("p")?)?,
            q: read_trig(&file("q")?)?,
        });
    }
    let f = BlockFunction {
        schedule,
        constant: Complex64::new(constant[0], constant[1]),
        blocks,
    };
    f.check_spectra().map_err(|e| Error::format(e.to_string()))?;
    Ok(f)
}
