//! File formats: point spaces and Ω sidecars as JSON, matrices and function
//! families as CSV. `+inf` serializes as the literal token "inf" in both.

use std::fs;
use std::path::Path;

use modmet_core::orlicz::{DiscreteMeasureSpace, FunctionFamily};
use modmet_core::topology::Entourage;
use modmet_core::{DistanceMatrix, PointSpace, XReal, TOL_METRIC};
use serde::{Deserialize, Serialize};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// One extended-real cell in a JSON document: a number or the string "inf".
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonXReal {
    Number(f64),
    Token(String),
}

fn parse_xreal(v: &JsonXReal, what: &str) -> Result<XReal, CliError> {
    match v {
        JsonXReal::Number(x) => {
            XReal::new(*x).ok_or_else(|| CliError::Config(format!("{what}: invalid value {x}")))
        }
        JsonXReal::Token(s) if s == "inf" => Ok(XReal::INFINITY),
        JsonXReal::Token(s) => Err(CliError::Config(format!("{what}: unknown token {s:?}"))),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SpaceFile {
    labels: Vec<String>,
    distance: Vec<Vec<JsonXReal>>,
}

/// Loads {"labels": [...], "distance": [[...]]} and validates the metric.
pub fn load_space(path: &Path) -> Result<PointSpace, CliError> {
    let text = read(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: SpaceFile = serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::Config(format!("{}: field `{}`: {}", path.display(), e.path(), e.inner())))?;
    let n = file.labels.len();
    if file.distance.len() != n || file.distance.iter().any(|r| r.len() != n) {
        return Err(CliError::Config(format!(
            "{}: distance matrix must be {n}x{n}",
            path.display()
        )));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in file.distance.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            entries.push(parse_xreal(v, &format!("distance[{i}][{j}]"))?);
        }
    }
    let matrix = DistanceMatrix::from_entries(n, entries, "file").map_err(CliError::Core)?;
    PointSpace::with_distance(file.labels, matrix, TOL_METRIC).map_err(CliError::Core)
}

pub fn save_space(space: &PointSpace, path: &Path) -> Result<(), CliError> {
    let base = space
        .base_distance()
        .ok_or_else(|| CliError::Config("space carries no distance matrix to save".into()))?;
    let n = space.len();
    let distance: Vec<Vec<JsonXReal>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = base.get(i, j);
                    if v.is_finite() {
                        JsonXReal::Number(v.value())
                    } else {
                        JsonXReal::Token("inf".into())
                    }
                })
                .collect()
        })
        .collect();
    let file = SpaceFile { labels: space.labels().to_vec(), distance };
    write(path, &format!("{}\n", serde_json::to_string_pretty(&file).expect("serializable")))
}

/// Row-major CSV with the "inf" token for infinite entries.
pub fn write_matrix_csv(matrix: &DistanceMatrix, path: &Path) -> Result<(), CliError> {
    let n = matrix.n();
    let mut text = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let v = matrix.get(i, j);
                if v.is_finite() {
                    format!("{}", v.value())
                } else {
                    "inf".to_string()
                }
            })
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write(path, &text)
}

/// Entourage membership as a 0/1 adjacency CSV.
pub fn write_entourage_csv(e: &Entourage, path: &Path) -> Result<(), CliError> {
    let n = e.points();
    let mut text = String::new();
    for i in 0..n {
        let row: Vec<&str> = (0..n).map(|j| if e.contains(i, j) { "1" } else { "0" }).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write(path, &text)
}

/// CSV rows = functions, columns = cells.
pub fn load_family_csv(path: &Path) -> Result<FunctionFamily, CliError> {
    let text = read(path)?;
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect();
        rows.push(row.map_err(|e| {
            CliError::Config(format!("{}: line {}: {e}", path.display(), ln + 1))
        })?);
    }
    FunctionFamily::new(rows).map_err(CliError::Core)
}

pub fn write_family_csv(family: &FunctionFamily, path: &Path) -> Result<(), CliError> {
    let mut text = String::new();
    for row in family.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    write(path, &text)
}

#[derive(Debug, Serialize, Deserialize)]
struct OmegaFile {
    masses: Vec<f64>,
    grid: Option<OmegaGrid>,
}

#[derive(Debug, Serialize, Deserialize)]
struct OmegaGrid {
    shape: (usize, usize),
    mesh: f64,
}

/// JSON sidecar for a measure space: {"masses": [...], "grid": {...} | null}.
pub fn load_omega(path: &Path) -> Result<DiscreteMeasureSpace, CliError> {
    let text = read(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: OmegaFile = serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::Config(format!("{}: field `{}`: {}", path.display(), e.path(), e.inner())))?;
    let omega = match file.grid {
        Some(g) => {
            let base = if g.shape.1 <= 1 {
                DiscreteMeasureSpace::grid_1d(g.shape.0, g.mesh)
            } else {
                DiscreteMeasureSpace::grid_2d(g.shape.0, g.shape.1, g.mesh)
            }
            .map_err(CliError::Core)?;
            base.with_masses(file.masses).map_err(CliError::Core)?
        }
        None => DiscreteMeasureSpace::from_masses(file.masses).map_err(CliError::Core)?,
    };
    Ok(omega)
}

pub fn save_omega(omega: &DiscreteMeasureSpace, path: &Path) -> Result<(), CliError> {
    let file = OmegaFile {
        masses: omega.masses().to_vec(),
        grid: omega.grid().map(|g| OmegaGrid { shape: g.shape, mesh: g.mesh }),
    };
    write(path, &format!("{}\n", serde_json::to_string_pretty(&file).expect("serializable")))
}

/// Pretty JSON with a trailing newline; deterministic for equal inputs.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    write(path, &format!("{}\n", serde_json::to_string_pretty(value).expect("serializable")))
}
