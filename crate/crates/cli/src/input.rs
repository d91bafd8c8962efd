//! `key = value` system files.

use std::collections::BTreeMap;
use std::path::Path;

use impasse_core::exactalg::parse_poly;
use impasse_core::system::{diagonalize, ConstrainedSystem, MatrixSystem};

use crate::CliError;

const TRIPLE: [&str; 3] = ["delta", "P", "Q"];
const MATRIX: [&str; 6] = ["A11", "A12", "A21", "A22", "F1", "F2"];

pub fn load(path: &Path) -> Result<ConstrainedSystem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_system(&text)
}

pub fn parse_system(text: &str) -> Result<ConstrainedSystem, CliError> {
    let mut entries = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("line {}: expected key = value", n + 1)))?;
        let key = key.trim();
        if !TRIPLE.contains(&key) && !MATRIX.contains(&key) {
            return Err(CliError::Parse(format!("line {}: unknown key {key:?}", n + 1)));
        }
        let poly = parse_poly(value.trim())
            .map_err(|e| CliError::Parse(format!("line {}, {key}: {e}", n + 1)))?;
        if entries.insert(key.to_string(), poly).is_some() {
            return Err(CliError::Parse(format!("line {}: duplicate key {key:?}", n + 1)));
        }
    }
    let has_triple = TRIPLE.iter().any(|k| entries.contains_key(*k));
    let has_matrix = MATRIX.iter().any(|k| entries.contains_key(*k));
    let mut take = |k: &str| {
        entries
            .remove(k)
            .ok_or_else(|| CliError::Parse(format!("missing key {k:?}")))
    };
    match (has_triple, has_matrix) {
        (true, true) => Err(CliError::Parse(
            "give either delta, P, Q or the matrix block, not both".to_string(),
        )),
        (false, false) => Err(CliError::Parse("empty system file".to_string())),
        (true, false) => {
            let (delta, p, q) = (take("delta")?, take("P")?, take("Q")?);
            Ok(ConstrainedSystem::new(p, q, delta)?)
        }
        (false, true) => {
            let ms = MatrixSystem {
                a: [[take("A11")?, take("A12")?], [take("A21")?, take("A22")?]],
                f: [take("F1")?, take("F2")?],
            };
            Ok(diagonalize(&ms)?)
        }
    }
}
