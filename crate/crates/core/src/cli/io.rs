use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::strategy::{BehaviourPoint, Representation};
use crate::{Error, Result};

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Writes to stdout for `-`, otherwise to a sibling temp file renamed into place.
pub fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.as_os_str() == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
        return Ok(());
    }
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("output path {} has no file name", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum PointFile {
    Point(BehaviourPoint),
    Wrapped { point: BehaviourPoint },
    Coords(Vec<f64>),
}

/// Reads a behaviour point: a full point object, an object with a `point`
/// field (as written by `simulate --emit sampled`), or a bare array whose
/// length picks the representation.
pub fn read_point(path: &Path) -> Result<BehaviourPoint> {
    let text = fs::read_to_string(path)?;
    let parsed: PointFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: not a behaviour point ({e})", path.display())))?;
    match parsed {
        PointFile::Point(p) | PointFile::Wrapped { point: p } => {
            p.validate()?;
            Ok(p)
        }
        PointFile::Coords(coords) => {
            let rep = match coords.len() {
                8 => Representation::Reduced8,
                26 => Representation::Full26,
                n => {
                    return Err(Error::DimensionMismatch(format!(
                        "{}: {n} coordinates match no representation",
                        path.display()
                    )))
                }
            };
            BehaviourPoint::new(rep, coords)
        }
    }
}
