//! Solution and table output. 1D fields go to delimited text with one row
//! per zone; 2D fields additionally produce a legacy-ASCII
//! structured-points volume file with one scalar block per variable. All
//! floats carry 17 significant digits so files round-trip bit-exactly.

use crate::error::{Result, SolverError};
use crate::harness::norms::ConvergenceRow;
use crate::mesh::FieldArray;
use crate::systems::{Model, SystemModel};
use crate::MAX_VARS;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SolverError + '_ {
    move |source| SolverError::Io { path: path.display().to_string(), source }
}

#[derive(Clone, Debug)]
pub struct OutputPaths {
    pub dir: PathBuf,
    pub stem: String,
}

impl OutputPaths {
    pub fn new(dir: &str, stem: &str) -> Self {
        OutputPaths { dir: PathBuf::from(dir), stem: stem.to_string() }
    }

    /// Write one snapshot; `index == usize::MAX` marks the final state.
    pub fn write_snapshot(&self, field: &FieldArray, model: &Model, index: usize) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let tag = if index == usize::MAX { "final".to_string() } else { format!("{index:06}") };
        let txt = self.dir.join(format!("{}_{tag}.dat", self.stem));
        write_field_text(field, model, &txt)?;
        if field.grid.ndim == 2 {
            let vtk = self.dir.join(format!("{}_{tag}.vtk", self.stem));
            write_field_vtk(field, model, &vtk)?;
        }
        Ok(())
    }
}

/// Delimited text: coordinates then primitive variables, one interior
/// zone per row.
pub fn write_field_text(field: &FieldArray, model: &Model, path: &Path) -> Result<()> {
    let nvar = model.nvar();
    let mut s = String::new();
    let names = model.var_names();
    if field.grid.ndim == 1 {
        s.push_str("# x");
    } else {
        s.push_str("# x y");
    }
    for n in &names {
        s.push(' ');
        s.push_str(n);
    }
    s.push('\n');
    let mut w = [0.0; MAX_VARS];
    for j in 0..field.grid.ny as i64 {
        for i in 0..field.grid.nx as i64 {
            let (x, y) = field.grid.zone_center(i, j);
            model.prim_from_cons(field.zone(i, j), &mut w[..nvar])?;
            s.push_str(&fmt_f(x));
            if field.grid.ndim == 2 {
                s.push(' ');
                s.push_str(&fmt_f(y));
            }
            for v in &w[..nvar] {
                s.push(' ');
                s.push_str(&fmt_f(*v));
            }
            s.push('\n');
        }
    }
    std::fs::write(path, s).map_err(io_err(path))
}

/// Legacy-ASCII structured-points file with one scalar field per
/// primitive variable.
pub fn write_field_vtk(field: &FieldArray, model: &Model, path: &Path) -> Result<()> {
    let grid = field.grid;
    let nvar = model.nvar();
    let names = model.var_names();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "pcweno field");
    s.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {} {} 1", grid.nx, grid.ny);
    let _ = writeln!(
        s,
        "ORIGIN {} {} 0",
        fmt_f(grid.x0 + 0.5 * grid.dx),
        fmt_f(grid.y0 + 0.5 * grid.dy)
    );
    let _ = writeln!(s, "SPACING {} {} 1", fmt_f(grid.dx), fmt_f(grid.dy));
    let _ = writeln!(s, "POINT_DATA {}", grid.nx * grid.ny);
    let mut w = [0.0; MAX_VARS];
    for (v, name) in names.iter().enumerate().take(nvar) {
        let _ = writeln!(s, "SCALARS {name} double\nLOOKUP_TABLE default");
        for j in 0..grid.ny as i64 {
            for i in 0..grid.nx as i64 {
                model.prim_from_cons(field.zone(i, j), &mut w[..nvar])?;
                s.push_str(&fmt_f(w[v]));
                s.push('\n');
            }
        }
    }
    std::fs::write(path, s).map_err(io_err(path))
}

/// Convergence table mirroring the published layout.
pub fn write_convergence(rows: &[ConvergenceRow], path: &Path) -> Result<()> {
    let mut s = String::from("# N L1_error L1_order Linf_error Linf_order\n");
    for r in rows {
        let fmt_ord = |o: Option<f64>| o.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{} {} {} {} {}",
            r.n,
            fmt_f(r.l1),
            fmt_ord(r.l1_order),
            fmt_f(r.linf),
            fmt_ord(r.linf_order)
        );
    }
    std::fs::write(path, s).map_err(io_err(path))
}
