//! TSPLIB text-format parsing and serialization for 2D node-coordinate
//! instances.
//!
//! Coordinates are kept as raw doubles; the TSPLIB integer-rounding
//! conventions (nint for EUC_2D and friends) are deliberately not applied,
//! since separators and shortest paths operate on the raw geometry.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Error)]
pub enum TsplibError {
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("missing NODE_COORD_SECTION")]
    MissingCoordSection,
    #[error("missing DIMENSION field")]
    MissingDimension,
    #[error("line {line}: bad coordinate row: {msg}")]
    BadCoordinate { line: usize, msg: String },
    #[error("DIMENSION is {expected} but the coordinate section has {found} rows")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported EDGE_WEIGHT_TYPE {0:?} (needs planar node coordinates)")]
    UnsupportedEdgeWeight(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A named 2D point cloud. Node `i` (1-based in TSPLIB files and reports) is
/// `coords[i - 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub coords: Vec<Point>,
}

impl Instance {
    pub fn new(name: &str, coords: Vec<Point>) -> Result<Self, TsplibError> {
        if coords.is_empty() {
            return Err(TsplibError::InvalidInstance("no coordinates".into()));
        }
        if let Some(p) = coords.iter().find(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(TsplibError::InvalidInstance(format!(
                "non-finite coordinate ({}, {})",
                p.x, p.y
            )));
        }
        Ok(Instance {
            name: if name.is_empty() { "unnamed".into() } else { name.into() },
            coords,
        })
    }

    /// Construct without validation; test helper for deliberately degenerate
    /// inputs.
    pub fn new_unchecked(name: &str, coords: Vec<Point>) -> Self {
        Instance { name: name.into(), coords }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }
}

const ACCEPTED_EDGE_WEIGHTS: [&str; 3] = ["EUC_2D", "CEIL_2D", "ATT"];

/// Parse a TSPLIB instance from text. `fallback_name` replaces a missing
/// NAME field (typically the file stem).
pub fn parse_instance_named(text: &str, fallback_name: &str) -> Result<Instance, TsplibError> {
    let mut name: Option<String> = None;
    let mut dimension: Option<usize> = None;
    let mut coords: Vec<Point> = Vec::new();
    let mut in_coords = false;
    let mut seen_coords = false;

    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, raw)) = lines.next() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if in_coords {
            if line == "EOF" || coords.len() == dimension.unwrap_or(usize::MAX) {
                in_coords = false;
                // Fall through to header/section handling below.
            } else {
                let mut toks = line.split_whitespace();
                let _id = toks.next();
                let parse = |t: Option<&str>| -> Result<f64, TsplibError> {
                    t.ok_or(TsplibError::BadCoordinate {
                        line: line_no,
                        msg: "expected `index x y`".into(),
                    })?
                    .parse::<f64>()
                    .map_err(|_| TsplibError::BadCoordinate {
                        line: line_no,
                        msg: format!("non-numeric coordinate in {raw:?}"),
                    })
                };
                let x = parse(toks.next())?;
                let y = parse(toks.next())?;
                if toks.next().is_some() {
                    return Err(TsplibError::BadCoordinate {
                        line: line_no,
                        msg: "expected exactly `index x y` (3D coordinates unsupported)".into(),
                    });
                }
                coords.push(Point::new(x, y));
                continue;
            }
        }
        if line == "EOF" {
            break;
        }
        if line == "NODE_COORD_SECTION" {
            in_coords = true;
            seen_coords = true;
            if dimension.is_none() {
                return Err(TsplibError::MissingDimension);
            }
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            match key {
                "NAME" => name = Some(value.to_string()),
                "DIMENSION" => {
                    dimension =
                        Some(value.parse::<usize>().map_err(|_| TsplibError::MalformedHeader {
                            line: line_no,
                            msg: format!("DIMENSION is not an integer: {value:?}"),
                        })?)
                }
                "EDGE_WEIGHT_TYPE" => {
                    if !ACCEPTED_EDGE_WEIGHTS.contains(&value) {
                        return Err(TsplibError::UnsupportedEdgeWeight(value.to_string()));
                    }
                }
                "TYPE" | "COMMENT" | "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE"
                | "EDGE_WEIGHT_FORMAT" => {}
                _ => log::warn!("line {line_no}: skipping unknown TSPLIB field {key:?}"),
            }
        } else if line.ends_with("_SECTION") || line == "DISPLAY_DATA_SECTION" {
            log::warn!("line {line_no}: skipping unknown TSPLIB section {line:?}");
            // Consume rows until the next header-looking line or EOF token.
            while let Some(&(_, next)) = lines.peek() {
                let t = next.trim();
                if t == "EOF" || t.contains(':') || t.ends_with("_SECTION") {
                    break;
                }
                lines.next();
            }
        } else {
            return Err(TsplibError::MalformedHeader {
                line: line_no,
                msg: format!("unrecognized line {line:?}"),
            });
        }
    }

    if !seen_coords {
        return Err(TsplibError::MissingCoordSection);
    }
    let expected = dimension.ok_or(TsplibError::MissingDimension)?;
    if coords.len() != expected {
        return Err(TsplibError::DimensionMismatch { expected, found: coords.len() });
    }
    Instance::new(&name.unwrap_or_else(|| fallback_name.to_string()), coords)
}

pub fn parse_instance(text: &str) -> Result<Instance, TsplibError> {
    parse_instance_named(text, "unnamed")
}

/// Serialize to TSPLIB text that `parse_instance` reads back to an equal
/// value. Floats use the shortest round-trip representation.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let name = if inst.name.is_empty() { "unnamed" } else { &inst.name };
    out.push_str(&format!("NAME : {name}\n"));
    out.push_str("TYPE : TSP\n");
    out.push_str(&format!("DIMENSION : {}\n", inst.n()));
    out.push_str("EDGE_WEIGHT_TYPE : EUC_2D\n");
    out.push_str("NODE_COORD_SECTION\n");
    for (i, p) in inst.coords.iter().enumerate() {
        out.push_str(&format!("{} {} {}\n", i + 1, p.x, p.y));
    }
    out.push_str("EOF\n");
    out
}

/// Read an instance from disk, synthesizing a missing NAME from the file
/// stem.
pub fn load_instance(path: &Path) -> Result<Instance, TsplibError> {
    let text = fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".into());
    parse_instance_named(&text, &stem)
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<(), TsplibError> {
    fs::write(path, serialize_instance(inst))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "NAME : tiny\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n";

    #[test]
    fn parse_minimal() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.name, "tiny");
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.coords[0], Point::new(0.0, 0.0));
        assert_eq!(inst.coords[1], Point::new(1.0, 0.0));
        assert_eq!(inst.coords[2], Point::new(0.0, 1.0));
    }

    #[test]
    fn parse_without_eof_token() {
        let text = MINIMAL.replace("EOF\n", "");
        assert_eq!(parse_instance(&text).unwrap().n(), 3);
    }

    #[test]
    fn parse_missing_name_uses_fallback() {
        let text = MINIMAL.replace("NAME : tiny\n", "");
        let inst = parse_instance_named(&text, "stem51").unwrap();
        assert_eq!(inst.name, "stem51");
    }

    #[test]
    fn parse_dimension_mismatch() {
        let text = MINIMAL.replace("DIMENSION : 3", "DIMENSION : 4");
        assert!(matches!(
            parse_instance(&text),
            Err(TsplibError::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn parse_bad_coordinate_reports_line() {
        let text = MINIMAL.replace("2 1 0", "2 one 0");
        match parse_instance(&text) {
            Err(TsplibError::BadCoordinate { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected BadCoordinate, got {other:?}"),
        }
    }

    #[test]
    fn parse_missing_section() {
        let text = "NAME : x\nDIMENSION : 2\nEOF\n";
        assert!(matches!(parse_instance(text), Err(TsplibError::MissingCoordSection)));
    }

    #[test]
    fn parse_rejects_explicit_weights() {
        let text = MINIMAL.replace("EUC_2D", "EXPLICIT");
        assert!(matches!(parse_instance(&text), Err(TsplibError::UnsupportedEdgeWeight(_))));
    }

    #[test]
    fn parse_skips_unknown_section() {
        let text = MINIMAL.replace(
            "EOF\n",
            "DISPLAY_DATA_SECTION\n1 5 5\n2 6 6\n3 7 7\nEOF\n",
        );
        assert_eq!(parse_instance(&text).unwrap().n(), 3);
    }

    #[test]
    fn serialize_header_echo() {
        let inst = parse_instance(MINIMAL).unwrap();
        let text = serialize_instance(&inst);
        assert!(text.contains("DIMENSION : 3"));
        assert!(text.contains("NAME : tiny"));
    }

    #[test]
    fn serialize_empty_name_synthesizes() {
        let inst = Instance::new("", vec![Point::new(0.0, 0.0)]).unwrap();
        assert_eq!(inst.name, "unnamed");
        assert!(serialize_instance(&inst).contains("NAME : unnamed"));
    }

    proptest! {
        #[test]
        fn roundtrip_parse_serialize(
            coords in proptest::collection::vec(
                (-1e6f64..1e6, -1e6f64..1e6), 1..40),
            name in "[a-zA-Z][a-zA-Z0-9_]{0,12}",
        ) {
            let inst = Instance::new(
                &name,
                coords.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            ).unwrap();
            let back = parse_instance(&serialize_instance(&inst)).unwrap();
            prop_assert_eq!(back, inst);
        }
    }
}
