//! Scene files: UTF-8 text, one scatterer per line as
//! `range_m,cross_range_m,reflectivity` (three fields, single commas).
//! Lines starting with `#` and blank lines are ignored.

use std::fs;
use std::path::Path;

use isar_core::Scatterer;

use crate::error::{CliError, Result};

pub fn parse_scene(text: &str) -> Result<Vec<Scatterer>> {
    let mut scene = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Format(format!(
                "line {}: expected 3 comma-separated fields, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let mut values = [0.0f64; 3];
        for (i, f) in fields.iter().enumerate() {
            values[i] = f.trim().parse().map_err(|_| {
                CliError::Format(format!("line {}: cannot parse \"{}\" as a number", lineno + 1, f))
            })?;
        }
        scene.push(Scatterer::new(values[0], values[1], values[2]));
    }
    Ok(scene)
}

pub fn load_scene(path: &Path) -> Result<Vec<Scatterer>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
    parse_scene(&text).map_err(|e| match e {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}
