//! Mesh and configuration checks reported as a table.

use std::fmt;
use std::path::Path;

use emdec::dec::{exterior_derivative, hodge_star, Causality};
use emdec::integrators::cfl_dt;
use emdec::mesh::{circumcentric_dual, load_mesh, quality, CellComplex, DualWarning, MeshError};
use emdec::{MaterialParams, MaxwellModel};

use crate::config::parse_config;
use crate::runner::build_mesh;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{:<14} {}  {}", c.name, c.status, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, status: Status, detail: impl Into<String>) -> Check {
    Check {
        name,
        status,
        detail: detail.into(),
    }
}

fn list<T: ToString>(ids: &[T]) -> String {
    let shown: Vec<String> = ids.iter().take(8).map(T::to_string).collect();
    let more = if ids.len() > 8 { format!(" (+{} more)", ids.len() - 8) } else { String::new() };
    format!("{}{more}", shown.join(", "))
}

/// Runs every check on a mesh.
pub fn validate_mesh(k: &CellComplex, material: MaterialParams) -> Report {
    let n = k.dim();
    let mut checks = vec![check(
        "connectivity",
        Status::Pass,
        format!("{n}-d, {} vertices, {} top cells", k.num_cells(0), k.num_cells(n)),
    )];

    let q = quality(k);
    let outside = q.outside_cells();
    checks.push(if outside.is_empty() {
        check("quality", Status::Pass, format!("max aspect ratio {:.3}", q.max_aspect_ratio()))
    } else {
        check("quality", Status::Warn, format!("circumcenter outside cells {}", list(&outside)))
    });

    let dual = match circumcentric_dual(k) {
        Ok(d) => {
            checks.push(check("circumcenters", Status::Pass, "all cells well-defined"));
            d
        }
        Err(e) => {
            let detail = match &e {
                MeshError::Degenerate { dim, index, .. } => format!("degenerate {dim}-cell {index}: {e}"),
                _ => e.to_string(),
            };
            checks.push(check("circumcenters", Status::Fail, detail));
            return Report { checks };
        }
    };
    let negative: Vec<String> = dual
        .warnings()
        .iter()
        .map(|DualWarning::NegativeDualPart { dim, index, .. }| format!("{dim}-cell {index}"))
        .collect();
    checks.push(if negative.is_empty() {
        check("dual lengths", Status::Pass, "no negative dual parts")
    } else {
        check("dual lengths", Status::Warn, format!("negative dual parts at {}", list(&negative)))
    });

    let mut nilpotent = true;
    for j in 0..n.saturating_sub(1) {
        let ok = exterior_derivative(k, j)
            .and_then(|a| exterior_derivative(k, j + 1).and_then(|b| b.compose_integer(&a)))
            .map(|t| t.iter().all(|x| x.2 == 0))
            .unwrap_or(false);
        nilpotent &= ok;
    }
    checks.push(check(
        "d^2 = 0",
        if nilpotent { Status::Pass } else { Status::Fail },
        if nilpotent { "exact" } else { "non-zero entries" },
    ));

    // an indefinite star is what non-Delaunay meshes produce; the solvers
    // still run, so it is reported rather than rejected
    let mut bad = Vec::new();
    let mut broken = None;
    for d in 0..=n {
        match hodge_star(k, &dual, d, &Causality::Spacelike) {
            Ok(s) => {
                for (i, w) in s.diag().iter().enumerate() {
                    let pec_edge = d == 1 && k.is_boundary(1, i);
                    if !(*w > 0.0) && !pec_edge {
                        bad.push(format!("{d}-cell {i}"));
                    }
                }
            }
            Err(e) => broken = Some(e.to_string()),
        }
    }
    checks.push(match broken {
        Some(e) => check("hodge", Status::Fail, e),
        None if bad.is_empty() => check("hodge", Status::Pass, "all entries positive"),
        None => check("hodge", Status::Warn, format!("non-positive at {}", list(&bad))),
    });

    checks.push(match MaxwellModel::with_dual(k.clone(), dual, material) {
        Ok(m) => match cfl_dt(&m) {
            Ok(dt) => check("cfl", Status::Pass, format!("dt_max = {dt:.6e}")),
            Err(e) => check("cfl", Status::Warn, e.to_string()),
        },
        Err(e) => check("cfl", Status::Warn, e.to_string()),
    });
    Report { checks }
}

fn looks_like_mesh(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("dim"))
}

/// Validates a mesh file, or the mesh and materials a config describes.
pub fn validate_path(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if looks_like_mesh(&text) {
        return Ok(match load_mesh(text.as_bytes()) {
            Ok(k) => validate_mesh(&k, MaterialParams::vacuum()),
            Err(e) => Report {
                checks: vec![check("connectivity", Status::Fail, e.to_string())],
            },
        });
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let config = parse_config(&text, base)?;
    let k = build_mesh(&config.mesh, config.seed)?;
    let material = match (config.epsilon.constant(), config.mu.constant()) {
        (Some(e), Some(m)) => MaterialParams::uniform(e * config.epsilon0, m * config.mu0),
        _ => {
            let model = crate::runner::build_model(&config)?;
            model.material
        }
    };
    Ok(validate_mesh(&k, material))
}
