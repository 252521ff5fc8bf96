//! Uniform structured grids, pointwise state storage and ghost-zone
//! filling.
//!
//! Values held in a [`FieldArray`] are point values collocated at zone
//! centers, not cell averages. Interior zones use 0-based indices; ghost
//! zones sit at negative indices and at `nx..nx+nghost`.

use crate::error::{Result, SolverError};
use crate::systems::{Dir, SystemModel};
use crate::{State, MAX_VARS};

/// Uniform 1D/2D grid. `ndim == 1` collapses the y direction to a single
/// row with no y ghosts.
#[derive(Clone, Copy, Debug)]
pub struct UniformGrid {
    pub ndim: usize,
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub dx: f64,
    pub dy: f64,
    pub nghost: usize,
}

impl UniformGrid {
    pub fn new_1d(nx: usize, x0: f64, x1: f64, nghost: usize) -> Self {
        assert!(nx > 0 && x1 > x0);
        UniformGrid {
            ndim: 1,
            nx,
            ny: 1,
            x0,
            x1,
            y0: 0.0,
            y1: 1.0,
            dx: (x1 - x0) / nx as f64,
            dy: 1.0,
            nghost,
        }
    }

    pub fn new_2d(nx: usize, ny: usize, x0: f64, x1: f64, y0: f64, y1: f64, nghost: usize) -> Self {
        assert!(nx > 0 && ny > 0 && x1 > x0 && y1 > y0);
        UniformGrid {
            ndim: 2,
            nx,
            ny,
            x0,
            x1,
            y0,
            y1,
            dx: (x1 - x0) / nx as f64,
            dy: (y1 - y0) / ny as f64,
            nghost,
        }
    }

    /// Zone center coordinate; valid for ghost indices as well.
    #[inline]
    pub fn zone_center(&self, i: i64, j: i64) -> (f64, f64) {
        let x = self.x0 + (i as f64 + 0.5) * self.dx;
        let y = if self.ndim == 2 {
            self.y0 + (j as f64 + 0.5) * self.dy
        } else {
            0.0
        };
        (x, y)
    }

    /// Total x extent including ghosts.
    #[inline]
    pub fn nx_tot(&self) -> usize {
        self.nx + 2 * self.nghost
    }

    #[inline]
    pub fn ny_tot(&self) -> usize {
        if self.ndim == 2 {
            self.ny + 2 * self.nghost
        } else {
            1
        }
    }

    pub fn zone_size(&self, dir: Dir) -> f64 {
        match dir {
            Dir::X => self.dx,
            Dir::Y => self.dy,
        }
    }
}

/// Per-side boundary condition kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    /// Ghosts are re-evaluated from the initial-condition function (as
    /// conserved point values at the ghost zone centers) at every fill.
    DirichletFrozen,
    /// Mirror the interior with the normal velocity components flipped.
    Reflective,
    /// Zero-gradient copy of the nearest interior zone.
    Outflow,
}

/// Boundary kinds per side: `x` is (left, right), `y` is (bottom, top).
#[derive(Clone, Copy, Debug)]
pub struct BoundarySpec {
    pub x: (BoundaryKind, BoundaryKind),
    pub y: (BoundaryKind, BoundaryKind),
}

impl BoundarySpec {
    pub fn all(kind: BoundaryKind) -> Self {
        BoundarySpec { x: (kind, kind), y: (kind, kind) }
    }

    pub fn periodic() -> Self {
        Self::all(BoundaryKind::Periodic)
    }

    fn validate(&self, ndim: usize) -> Result<()> {
        let check = |pair: (BoundaryKind, BoundaryKind)| -> Result<()> {
            let p0 = pair.0 == BoundaryKind::Periodic;
            let p1 = pair.1 == BoundaryKind::Periodic;
            if p0 != p1 {
                return Err(SolverError::Config(
                    "periodic boundaries must be paired on opposite sides".into(),
                ));
            }
            Ok(())
        };
        check(self.x)?;
        if ndim == 2 {
            check(self.y)?;
        }
        Ok(())
    }
}

/// Pointwise field on a grid, row-major over (j, i, var) with ghost
/// layers included in storage.
#[derive(Clone)]
pub struct FieldArray {
    pub grid: UniformGrid,
    pub nvar: usize,
    data: Vec<f64>,
}

impl FieldArray {
    pub fn new(grid: UniformGrid, nvar: usize) -> Self {
        assert!(nvar <= MAX_VARS);
        let len = grid.nx_tot() * grid.ny_tot() * nvar;
        FieldArray { grid, nvar, data: vec![0.0; len] }
    }

    /// Flat offset of zone (i, j); indices may be ghost indices.
    #[inline]
    pub fn offset(&self, i: i64, j: i64) -> usize {
        let g = self.grid.nghost as i64;
        let gy = if self.grid.ndim == 2 { g } else { 0 };
        let ii = (i + g) as usize;
        let jj = (j + gy) as usize;
        (jj * self.grid.nx_tot() + ii) * self.nvar
    }

    #[inline]
    pub fn zone(&self, i: i64, j: i64) -> &[f64] {
        let o = self.offset(i, j);
        &self.data[o..o + self.nvar]
    }

    #[inline]
    pub fn zone_mut(&mut self, i: i64, j: i64) -> &mut [f64] {
        let o = self.offset(i, j);
        &mut self.data[o..o + self.nvar]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Sum of one variable over interior zones, accumulated in a fixed
    /// row-major order so results are reproducible.
    pub fn interior_sum(&self, var: usize) -> f64 {
        let mut s = 0.0;
        for j in 0..self.grid.ny as i64 {
            for i in 0..self.grid.nx as i64 {
                s += self.zone(i, j)[var];
            }
        }
        s
    }

    pub fn max_abs_interior(&self, var: usize) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.grid.ny as i64 {
            for i in 0..self.grid.nx as i64 {
                m = m.max(self.zone(i, j)[var].abs());
            }
        }
        m
    }

    /// Fill interior point values from a primitive-variable function of
    /// space; the model converts to conserved variables.
    pub fn set_interior(
        &mut self,
        model: &impl SystemModel,
        ic: &dyn Fn(f64, f64) -> State,
    ) {
        let nvar = self.nvar;
        for j in 0..self.grid.ny as i64 {
            for i in 0..self.grid.nx as i64 {
                let (x, y) = self.grid.zone_center(i, j);
                let w = ic(x, y);
                let mut u = [0.0; MAX_VARS];
                model.cons_from_prim(&w[..nvar], &mut u[..nvar]);
                self.zone_mut(i, j).copy_from_slice(&u[..nvar]);
            }
        }
    }
}

/// Fill every ghost zone according to the boundary spec. `ic` supplies
/// conserved states for `DirichletFrozen` sides (evaluated at the ghost
/// zone centers; time-independent by construction). The interior is never
/// touched, so the operation is idempotent.
pub fn apply_boundaries(
    field: &mut FieldArray,
    spec: &BoundarySpec,
    model: &impl SystemModel,
    ic: &dyn Fn(f64, f64) -> State,
) -> Result<()> {
    spec.validate(field.grid.ndim)?;
    let g = field.grid.nghost as i64;
    let nx = field.grid.nx as i64;
    let ny = field.grid.ny as i64;
    let nvar = field.nvar;

    let fill = |field: &mut FieldArray, gi: i64, gj: i64, kind: BoundaryKind, dir: Dir| {
        let (src_i, src_j, flip) = match (kind, dir) {
            (BoundaryKind::Periodic, Dir::X) => (gi.rem_euclid(nx), gj, false),
            (BoundaryKind::Periodic, Dir::Y) => (gi, gj.rem_euclid(ny), false),
            (BoundaryKind::Outflow, Dir::X) => (gi.clamp(0, nx - 1), gj, false),
            (BoundaryKind::Outflow, Dir::Y) => (gi, gj.clamp(0, ny - 1), false),
            (BoundaryKind::Reflective, Dir::X) => {
                let m = if gi < 0 { -1 - gi } else { 2 * nx - 1 - gi };
                (m, gj, true)
            }
            (BoundaryKind::Reflective, Dir::Y) => {
                let m = if gj < 0 { -1 - gj } else { 2 * ny - 1 - gj };
                (gi, m, true)
            }
            (BoundaryKind::DirichletFrozen, _) => {
                let (x, y) = field.grid.zone_center(gi, gj);
                let w = ic(x, y);
                let mut u = [0.0; MAX_VARS];
                model.cons_from_prim(&w[..nvar], &mut u[..nvar]);
                field.zone_mut(gi, gj).copy_from_slice(&u[..nvar]);
                return;
            }
        };
        let mut tmp = [0.0; MAX_VARS];
        tmp[..nvar].copy_from_slice(field.zone(src_i, src_j));
        if flip {
            for &s in model.velocity_slots(dir) {
                tmp[s] = -tmp[s];
            }
        }
        field.zone_mut(gi, gj).copy_from_slice(&tmp[..nvar]);
    };

    // x sides first (interior rows only), then y sides over the full
    // extended rows so corners are defined.
    for j in 0..ny {
        for k in 1..=g {
            fill(field, -k, j, spec.x.0, Dir::X);
            fill(field, nx - 1 + k, j, spec.x.1, Dir::X);
        }
    }
    if field.grid.ndim == 2 {
        for i in -g..nx + g {
            for k in 1..=g {
                fill(field, i, -k, spec.y.0, Dir::Y);
                fill(field, i, ny - 1 + k, spec.y.1, Dir::Y);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{EulerParams, Model};

    fn euler1d() -> Model {
        Model::euler(EulerParams { gamma: 1.4 }, 1)
    }

    #[test]
    fn zone_centers_match_lattice() {
        let g = UniformGrid::new_1d(10, 0.0, 1.0, 2);
        assert!((g.zone_center(0, 0).0 - 0.05).abs() < 1e-15);
        assert!((g.zone_center(-1, 0).0 + 0.05).abs() < 1e-15);
        let g2 = UniformGrid::new_1d(10, -5.0, 5.0, 2);
        assert!((g2.zone_center(9, 0).0 - 4.5).abs() < 1e-15);
    }

    #[test]
    fn periodic_ghosts_copy_interior() {
        let model = euler1d();
        let grid = UniformGrid::new_1d(4, 0.0, 1.0, 2);
        let mut f = FieldArray::new(grid, 3);
        for i in 0..4 {
            f.zone_mut(i, 0).copy_from_slice(&[1.0 + i as f64, 0.1, 2.0]);
        }
        let ic = |_x: f64, _y: f64| crate::zero_state();
        apply_boundaries(&mut f, &BoundarySpec::periodic(), &model, &ic).unwrap();
        assert_eq!(f.zone(-1, 0), f.zone(3, 0));
        assert_eq!(f.zone(-2, 0), f.zone(2, 0));
        assert_eq!(f.zone(4, 0), f.zone(0, 0));
        // idempotent, and the interior sum is untouched
        let s0 = f.interior_sum(0);
        apply_boundaries(&mut f, &BoundarySpec::periodic(), &model, &ic).unwrap();
        assert_eq!(f.zone(-1, 0), f.zone(3, 0));
        assert_eq!(s0, f.interior_sum(0));
    }

    #[test]
    fn reflective_mirrors_with_velocity_flip() {
        let model = euler1d();
        let grid = UniformGrid::new_1d(4, 0.0, 1.0, 2);
        let mut f = FieldArray::new(grid, 3);
        // (rho, u, p) = (1, 0.5, 1) -> conserved (1, 0.5, p/(g-1) + rho u^2/2)
        let mut u = [0.0; MAX_VARS];
        model.cons_from_prim(&[1.0, 0.5, 1.0], &mut u[..3]);
        for i in 0..4 {
            f.zone_mut(i, 0).copy_from_slice(&u[..3]);
        }
        let spec = BoundarySpec::all(BoundaryKind::Reflective);
        apply_boundaries(&mut f, &spec, &model, &|_, _| crate::zero_state()).unwrap();
        let ghost = f.zone(-1, 0);
        assert!((ghost[0] - u[0]).abs() < 1e-15);
        assert!((ghost[1] + u[1]).abs() < 1e-15);
        assert!((ghost[2] - u[2]).abs() < 1e-15);
    }

    #[test]
    fn mismatched_periodic_pairing_is_rejected() {
        let model = euler1d();
        let grid = UniformGrid::new_1d(4, 0.0, 1.0, 1);
        let mut f = FieldArray::new(grid, 3);
        let spec = BoundarySpec {
            x: (BoundaryKind::Periodic, BoundaryKind::Outflow),
            y: (BoundaryKind::Periodic, BoundaryKind::Periodic),
        };
        let r = apply_boundaries(&mut f, &spec, &model, &|_, _| crate::zero_state());
        assert!(r.is_err());
    }
}
