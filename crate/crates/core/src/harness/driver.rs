//! Simulation driver: advances a catalog problem from t = 0 to t_end,
//! tracking floors, Riemann iteration counts and the conserved-component
//! sums, optionally writing snapshots.

use crate::error::Result;
use crate::harness::config::RunConfig;
use crate::harness::output::OutputPaths;
use crate::linalg::Mat;
use crate::mesh::{apply_boundaries, FieldArray, UniformGrid};
use crate::problems::{build_problem_sized, Integrator, ProblemSpec};
use crate::scheme::{compute_dt, spatial_residual, SchemeConfig};
use crate::systems::{Model, SystemModel};
use crate::time::{imex_step, ssprk3_step, ssprk4_step, StiffOp};
use crate::MAX_VARS;

/// Zone-local stiff adapter for the IMEX stages.
pub struct BlockStiff<'a, M: SystemModel> {
    pub model: &'a M,
}

impl<M: SystemModel> StiffOp for BlockStiff<'_, M> {
    fn block(&self) -> usize {
        self.model.nvar()
    }
    fn source(&self, u: &[f64], out: &mut [f64]) {
        self.model.stiff_source(u, out);
    }
    fn jacobian(&self, u: &[f64], out: &mut Mat) {
        self.model.stiff_jacobian(u, out);
    }
}

/// Everything resolved and ready to run.
pub struct RunSettings {
    pub problem: ProblemSpec,
    pub scheme: SchemeConfig,
    pub mesh: (usize, usize),
    pub integrator: Integrator,
    pub t_end: f64,
    pub dt_max: f64,
    pub output: Option<OutputPaths>,
    pub output_every: f64,
}

impl RunSettings {
    /// Resolve a parsed configuration against the catalog defaults.
    pub fn from_config(rc: &RunConfig) -> Result<RunSettings> {
        let mesh_hint = match (rc.nx, rc.ny) {
            (Some(nx), ny) => Some((nx, ny.unwrap_or(nx))),
            (None, Some(ny)) => Some((ny, ny)),
            (None, None) => None,
        };
        let mut problem = build_problem_sized(&rc.problem, mesh_hint)?;
        problem = problem.sized_for_order(rc.order);
        if problem.ndim == 1 {
            problem.default_mesh.1 = 1;
        }
        if let Some(c) = rc.cfl {
            problem.cfl = c;
        }
        if let Some(t) = rc.t_end {
            problem.t_end = t;
        }
        let scheme = SchemeConfig {
            order: rc.order,
            reconstruction: rc.reconstruction,
            basis: rc.basis.unwrap_or(problem.basis),
            riemann_mode: rc.riemann,
            antidiffusion: rc.antidiffusion.unwrap_or(problem.antidiffusion),
            psi_mode: rc.psi,
            delta_form: rc.delta,
            mr_limiter: rc.floor_limiter(),
            cfl: problem.cfl,
        };
        let mesh = problem.default_mesh;
        let integrator = rc.integrator.unwrap_or(problem.integrator);
        Ok(RunSettings {
            t_end: problem.t_end,
            output: rc.output_dir.as_ref().map(|d| OutputPaths::new(d, &rc.problem)),
            output_every: rc.output_every,
            problem,
            scheme,
            mesh,
            integrator,
            dt_max: rc.dt_max,
        })
    }
}

pub struct RunOutput {
    pub field: FieldArray,
    pub t: f64,
    pub steps: u64,
    pub floored: u64,
    pub max_riemann_iters: u32,
    pub char_fallbacks: u64,
    /// Per recorded step: time and the tracked conserved-component sums.
    pub conservation: Vec<(f64, Vec<f64>)>,
    pub initial_sums: Vec<f64>,
}

fn tracked_sums(field: &FieldArray, model: &Model) -> Vec<f64> {
    model.mass_slots().iter().map(|&s| field.interior_sum(s)).collect()
}

/// Clamp conserved states to the admissible set after a full step;
/// returns the number of adjusted entries.
fn apply_floors(field: &mut FieldArray, model: &Model) -> Result<u64> {
    let nvar = field.nvar;
    let mut w = [0.0; MAX_VARS];
    let mut count = 0u64;
    for j in 0..field.grid.ny as i64 {
        for i in 0..field.grid.nx as i64 {
            let z = field.zone(i, j);
            let c = model.prim_from_cons(z, &mut w[..nvar])?;
            if c > 0 {
                count += c as u64;
                let mut u = [0.0; MAX_VARS];
                model.cons_from_prim(&w[..nvar], &mut u[..nvar]);
                field.zone_mut(i, j).copy_from_slice(&u[..nvar]);
            }
        }
    }
    Ok(count)
}

/// Advance a problem to its stopping time. The optional observer runs
/// after every accepted step with the current interior field and time.
pub fn run_simulation(
    settings: &RunSettings,
    mut observer: Option<&mut dyn FnMut(&FieldArray, f64)>,
) -> Result<RunOutput> {
    let p = &settings.problem;
    let model = &p.model;
    let nvar = model.nvar();
    let g = settings.scheme.required_ghosts();
    let (nx, ny) = settings.mesh;
    let grid = if p.ndim == 1 {
        UniformGrid::new_1d(nx, p.domain.0, p.domain.1, g)
    } else {
        UniformGrid::new_2d(nx, ny, p.domain.0, p.domain.1, p.domain.2, p.domain.3, g)
    };
    let mut field = FieldArray::new(grid, nvar);
    let ic = p.ic.clone();
    field.set_interior(model, &|x, y| ic(x, y));

    let mut out = RunOutput {
        initial_sums: tracked_sums(&field, model),
        field: field.clone(),
        t: 0.0,
        steps: 0,
        floored: 0,
        max_riemann_iters: 0,
        char_fallbacks: 0,
        conservation: Vec::new(),
    };
    out.conservation.push((0.0, out.initial_sums.clone()));

    let interior = nx * ny * nvar;
    let mut flat = vec![0.0; interior];
    copy_out(&field, &mut flat);

    if let Some(paths) = &settings.output {
        paths.write_snapshot(&field, model, 0)?;
    }
    let mut next_snapshot = if settings.output_every > 0.0 {
        settings.output_every
    } else {
        f64::INFINITY
    };
    let mut snapshots = 1usize;

    let mut t = 0.0;
    let t_end = settings.t_end;
    let mut stage_field = field.clone();
    let mut resid_field = FieldArray::new(grid, nvar);

    while t < t_end * (1.0 - 1e-14) && t_end > 0.0 {
        // step size from the current state, clipped to land on t_end
        copy_in(&mut field, &flat);
        apply_boundaries(&mut field, &p.bc, model, &|x, y| (p.ic)(x, y))?;
        let mut dt = compute_dt(&field, model, &settings.scheme, settings.dt_max)?;
        if t + dt > t_end {
            dt = t_end - t;
        }

        let mut stats_acc = crate::scheme::ResidualStats::default();
        {
            let scheme = settings.scheme;
            let bc = p.bc;
            let icf = p.ic.clone();
            let mut l_op = |u: &[f64], du: &mut [f64]| -> Result<()> {
                copy_in(&mut stage_field, u);
                apply_boundaries(&mut stage_field, &bc, model, &|x, y| icf(x, y))?;
                let st = spatial_residual(&stage_field, model, &scheme, &mut resid_field)?;
                stats_acc.floored += st.floored;
                stats_acc.max_riemann_iters = stats_acc.max_riemann_iters.max(st.max_riemann_iters);
                stats_acc.char_fallbacks += st.char_fallbacks;
                copy_out(&resid_field, du);
                Ok(())
            };
            flat = match settings.integrator {
                Integrator::SspRk3 => ssprk3_step(&flat, &mut l_op, dt)?,
                Integrator::SspRk4 => ssprk4_step(&flat, &mut l_op, dt)?,
                Integrator::Imex => {
                    if model.has_stiff_source() {
                        let stiff = BlockStiff { model };
                        imex_step(&flat, &mut l_op, Some(&stiff), dt)?
                    } else {
                        imex_step::<BlockStiff<Model>>(&flat, &mut l_op, None, dt)?
                    }
                }
            };
        }
        out.floored += stats_acc.floored;
        out.max_riemann_iters = out.max_riemann_iters.max(stats_acc.max_riemann_iters);
        out.char_fallbacks += stats_acc.char_fallbacks;

        copy_in(&mut field, &flat);
        out.floored += apply_floors(&mut field, model)?;
        copy_out(&field, &mut flat);

        t += dt;
        out.steps += 1;
        out.conservation.push((t, tracked_sums(&field, model)));
        if let Some(obs) = observer.as_mut() {
            obs(&field, t);
        }
        if t >= next_snapshot * (1.0 - 1e-12) {
            if let Some(paths) = &settings.output {
                paths.write_snapshot(&field, model, snapshots)?;
            }
            snapshots += 1;
            next_snapshot += settings.output_every;
        }
    }

    copy_in(&mut field, &flat);
    apply_boundaries(&mut field, &p.bc, model, &|x, y| (p.ic)(x, y))?;
    if let Some(paths) = &settings.output {
        paths.write_snapshot(&field, model, usize::MAX)?;
    }
    out.t = t_end.min(t.max(t_end * 0.0));
    out.t = if t_end == 0.0 { 0.0 } else { t_end };
    out.field = field;
    Ok(out)
}

/// Copy the interior of a field into a flat vector (row-major, interior
/// only).
pub fn copy_out(field: &FieldArray, flat: &mut [f64]) {
    let nvar = field.nvar;
    let nx = field.grid.nx;
    let mut o = 0;
    for j in 0..field.grid.ny as i64 {
        for i in 0..nx as i64 {
            flat[o..o + nvar].copy_from_slice(field.zone(i, j));
            o += nvar;
        }
    }
}

pub fn copy_in(field: &mut FieldArray, flat: &[f64]) {
    let nvar = field.nvar;
    let nx = field.grid.nx;
    let mut o = 0;
    for j in 0..field.grid.ny as i64 {
        for i in 0..nx as i64 {
            field.zone_mut(i, j).copy_from_slice(&flat[o..o + nvar]);
            o += nvar;
        }
    }
}
