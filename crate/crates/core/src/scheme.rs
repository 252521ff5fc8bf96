//! Semi-discrete residual of the fluctuation-form scheme
//!
//!   dU_i/dt = -A(U_i) (u^-_{i+1/2} - u^+_{i-1/2}) / dx
//!             - (D^-_{i+1/2} + D^+_{i-1/2}) / dx,
//!
//! assembled dimension by dimension: reconstruct zone-edge states (in
//! characteristic or component space), bound the wave speeds per
//! interface, extremize them over every stencil touching the interface,
//! then run the fluctuation Riemann solve. The central term uses the
//! characteristic matrix at the zone-center point value.

use crate::error::{Result, SolverError};
use crate::linalg::Mat;
use crate::mesh::FieldArray;
use crate::recon::{
    ao_tables, mr_tables, mr_weno_with, weight_epsilon, weno_ao_with, FloorLimiter,
};
use crate::riemann::{hlli_fluctuations, DeltaForm, RiemannInput, RiemannMode};
use crate::systems::{Dir, EigSet, SystemModel};
use crate::MAX_VARS;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reconstruction {
    WenoAo,
    MrWeno,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReconBasis {
    Characteristic,
    ComponentWise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiMode {
    /// Anti-diffusion fully active.
    One,
    /// Anti-diffusion gated off.
    Zero,
    /// Simple pressure-jump / compression switch.
    Detector,
}

#[derive(Clone, Copy, Debug)]
pub struct SchemeConfig {
    pub order: usize,
    pub reconstruction: Reconstruction,
    pub basis: ReconBasis,
    pub riemann_mode: RiemannMode,
    pub antidiffusion: bool,
    pub psi_mode: PsiMode,
    pub delta_form: DeltaForm,
    pub mr_limiter: FloorLimiter,
    pub cfl: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            order: 5,
            reconstruction: Reconstruction::WenoAo,
            basis: ReconBasis::Characteristic,
            riemann_mode: RiemannMode::Hll,
            antidiffusion: true,
            psi_mode: PsiMode::One,
            delta_form: DeltaForm::MaxSpeed,
            mr_limiter: FloorLimiter::default(),
            cfl: 0.4,
        }
    }
}

impl SchemeConfig {
    /// Ghost depth covering the reconstruction stencils of the zones that
    /// feed the boundary interfaces plus the speed-extremization window.
    pub fn required_ghosts(&self) -> usize {
        self.order
    }

    pub fn validate(&self, nghost: usize) -> Result<()> {
        if !matches!(self.order, 3 | 5 | 7 | 9) {
            return Err(SolverError::Config(format!("unsupported order {}", self.order)));
        }
        if let FloorLimiter::McBeta(b) = self.mr_limiter {
            if !(1.0..=2.0).contains(&b) {
                return Err(SolverError::Config(format!(
                    "mc limiter parameter {b} outside [1, 2]"
                )));
            }
        }
        if nghost < self.required_ghosts() {
            return Err(SolverError::Config(format!(
                "order {} needs {} ghost zones, grid has {}",
                self.order,
                self.required_ghosts(),
                nghost
            )));
        }
        if !(self.cfl > 0.0) {
            return Err(SolverError::Config("cfl must be positive".into()));
        }
        Ok(())
    }
}

/// Aggregated sweep diagnostics.
#[derive(Clone, Copy, Debug, Default)]
pub struct ResidualStats {
    pub floored: u64,
    pub max_riemann_iters: u32,
    pub char_fallbacks: u64,
}

impl ResidualStats {
    fn merge(&mut self, o: &ResidualStats) {
        self.floored += o.floored;
        self.max_riemann_iters = self.max_riemann_iters.max(o.max_riemann_iters);
        self.char_fallbacks += o.char_fallbacks;
    }
}

/// Widen raw per-interface bounds over the stencil window: the slowest
/// left speed and fastest right speed of any interface within `window`
/// positions take over.
pub fn extremize_speeds(raw: &[(f64, f64)], window: usize, out: &mut [(f64, f64)]) {
    let n = raw.len();
    debug_assert_eq!(out.len(), n);
    for i in 0..n {
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(n - 1);
        let mut s = raw[i];
        for r in raw.iter().take(hi + 1).skip(lo) {
            s.0 = s.0.min(r.0);
            s.1 = s.1.max(r.1);
        }
        out[i] = s;
    }
}

/// Reconstruct the two edge values of one zone from the window of
/// conserved states centered on it, in the characteristic space of the
/// window center (falling back to component space if the eigensystem is
/// unavailable) or directly in component space. Returns false when a
/// characteristic request fell back.
pub fn reconstruct_zone(
    model: &impl SystemModel,
    config: &SchemeConfig,
    dir: Dir,
    window: &[f64],
    wcenter: &[f64],
    left: &mut [f64],
    right: &mut [f64],
) -> bool {
    let mut eig = EigSet::new(model.nvar());
    reconstruct_zone_with(model, config, dir, window, wcenter, &mut eig, left, right)
}

#[allow(clippy::too_many_arguments)]
fn reconstruct_zone_with(
    model: &impl SystemModel,
    config: &SchemeConfig,
    dir: Dir,
    window: &[f64],
    wcenter: &[f64],
    eig: &mut EigSet,
    left: &mut [f64],
    right: &mut [f64],
) -> bool {
    let nvar = model.nvar();
    let npts = config.order;
    debug_assert_eq!(window.len(), npts * nvar);
    let mut char_ok = true;
    let characteristic = match config.basis {
        ReconBasis::Characteristic => {
            if model.full_eigensystem(wcenter, dir, eig).is_ok() {
                true
            } else {
                char_ok = false;
                false
            }
        }
        ReconBasis::ComponentWise => false,
    };
    // monomorphized on the variable count so the projection loops unroll
    match nvar {
        1 => recon_fields::<1>(config, window, characteristic, eig, left, right),
        2 => recon_fields::<2>(config, window, characteristic, eig, left, right),
        3 => recon_fields::<3>(config, window, characteristic, eig, left, right),
        4 => recon_fields::<4>(config, window, characteristic, eig, left, right),
        7 => recon_fields::<7>(config, window, characteristic, eig, left, right),
        9 => recon_fields::<9>(config, window, characteristic, eig, left, right),
        _ => recon_fields_dyn(config, window, nvar, characteristic, eig, left, right),
    }
    char_ok
}

fn recon_fields<const NV: usize>(
    config: &SchemeConfig,
    window: &[f64],
    characteristic: bool,
    eig: &EigSet,
    left: &mut [f64],
    right: &mut [f64],
) {
    let npts = config.order;
    let mut vals = [0.0f64; 9];
    let mut lout = [0.0f64; MAX_VARS];
    let mut rout = [0.0f64; MAX_VARS];
    for f in 0..NV {
        if characteristic {
            let lrow = eig.left.row(f);
            for (m, v) in vals.iter_mut().enumerate().take(npts) {
                let state = &window[m * NV..(m + 1) * NV];
                let mut s = 0.0;
                for k in 0..NV {
                    s += lrow[k] * state[k];
                }
                *v = s;
            }
        } else {
            for (m, v) in vals.iter_mut().enumerate().take(npts) {
                *v = window[m * NV + f];
            }
        }
        let eps = weight_epsilon(&vals[..npts]);
        let (l, r) = match config.reconstruction {
            Reconstruction::WenoAo => weno_ao_with(ao_tables(npts), &vals[..npts], eps),
            Reconstruction::MrWeno => {
                mr_weno_with(mr_tables(npts), &vals[..npts], config.mr_limiter, eps)
            }
        };
        lout[f] = l;
        rout[f] = r;
    }
    if characteristic {
        for k in 0..NV {
            let mut sl = 0.0;
            let mut sr = 0.0;
            for f in 0..NV {
                sl += eig.right[(k, f)] * lout[f];
                sr += eig.right[(k, f)] * rout[f];
            }
            left[k] = sl;
            right[k] = sr;
        }
    } else {
        left[..NV].copy_from_slice(&lout[..NV]);
        right[..NV].copy_from_slice(&rout[..NV]);
    }
}

#[allow(clippy::too_many_arguments)]
fn recon_fields_dyn(
    config: &SchemeConfig,
    window: &[f64],
    nvar: usize,
    characteristic: bool,
    eig: &EigSet,
    left: &mut [f64],
    right: &mut [f64],
) {
    let npts = config.order;
    let mut vals = [0.0f64; 9];
    let mut lout = [0.0f64; MAX_VARS];
    let mut rout = [0.0f64; MAX_VARS];
    for f in 0..nvar {
        if characteristic {
            let lrow = eig.left.row(f);
            for (m, v) in vals.iter_mut().enumerate().take(npts) {
                let state = &window[m * nvar..(m + 1) * nvar];
                let mut s = 0.0;
                for k in 0..nvar {
                    s += lrow[k] * state[k];
                }
                *v = s;
            }
        } else {
            for (m, v) in vals.iter_mut().enumerate().take(npts) {
                *v = window[m * nvar + f];
            }
        }
        let eps = weight_epsilon(&vals[..npts]);
        let (l, r) = match config.reconstruction {
            Reconstruction::WenoAo => weno_ao_with(ao_tables(npts), &vals[..npts], eps),
            Reconstruction::MrWeno => {
                mr_weno_with(mr_tables(npts), &vals[..npts], config.mr_limiter, eps)
            }
        };
        lout[f] = l;
        rout[f] = r;
    }
    if characteristic {
        for k in 0..nvar {
            let mut sl = 0.0;
            let mut sr = 0.0;
            for f in 0..nvar {
                sl += eig.right[(k, f)] * lout[f];
                sr += eig.right[(k, f)] * rout[f];
            }
            left[k] = sl;
            right[k] = sr;
        }
    } else {
        left[..nvar].copy_from_slice(&lout[..nvar]);
        right[..nvar].copy_from_slice(&rout[..nvar]);
    }
}

/// Crude flattener: full anti-diffusion in smooth flow, ramped off across
/// strong compressive pressure jumps.
fn shock_detector(model: &impl SystemModel, wl: &[f64], wr: &[f64], dir: Dir) -> f64 {
    let slots = model.velocity_slots(dir);
    let compress = slots.iter().any(|&s| wr[s] - wl[s] < 0.0);
    if !compress {
        return 1.0;
    }
    let pl = model.pressure_like(wl);
    let pr = model.pressure_like(wr);
    let dp = (pr - pl).abs() / pl.min(pr).max(1e-300);
    (1.0 - (dp - 1.0 / 3.0) / (2.0 / 3.0)).clamp(0.0, 1.0)
}

/// Scratch buffers for one pencil.
struct Pencil {
    eig: EigSet,
    prim: Vec<f64>,
    edge_l: Vec<f64>,
    edge_r: Vec<f64>,
    prim_l: Vec<f64>,
    prim_r: Vec<f64>,
    raw: Vec<(f64, f64)>,
    dminus: Vec<f64>,
    dplus: Vec<f64>,
}

impl Pencil {
    fn new(nz_tot: usize, nvar: usize) -> Self {
        let zn = nz_tot * nvar;
        Pencil {
            eig: EigSet::new(nvar),
            prim: vec![0.0; zn],
            edge_l: vec![0.0; zn],
            edge_r: vec![0.0; zn],
            prim_l: vec![0.0; zn],
            prim_r: vec![0.0; zn],
            raw: vec![(0.0, 0.0); nz_tot + 1],
            dminus: vec![0.0; zn + nvar],
            dplus: vec![0.0; zn + nvar],
        }
    }
}

/// Process one pencil of `nz` interior zones with `g` ghosts per side.
/// `cons` holds the oriented conserved data; `out` accumulates the
/// residual of the interior zones.
#[allow(clippy::too_many_arguments)]
fn process_pencil<M: SystemModel>(
    model: &M,
    config: &SchemeConfig,
    dir: Dir,
    cons: &[f64],
    nz: usize,
    g: usize,
    dz: f64,
    ws: &mut Pencil,
    out: &mut [f64],
    stats: &mut ResidualStats,
) -> Result<()> {
    let nvar = model.nvar();
    let nz_tot = nz + 2 * g;
    let w = (config.order - 1) / 2;
    debug_assert!(g >= config.order);
    debug_assert_eq!(cons.len(), nz_tot * nvar);

    for z in 0..nz_tot {
        let fl = model
            .prim_from_cons(&cons[z * nvar..(z + 1) * nvar], &mut ws.prim[z * nvar..(z + 1) * nvar])
            .map_err(|e| locate(e, dir, z as i64 - g as i64))?;
        stats.floored += fl as u64;
    }

    // zones whose edge states feed any needed or widening interface
    let z_lo = g - 1 - w;
    let z_hi = nz + g + 1 + w; // exclusive
    for z in z_lo..z_hi {
        let win = &cons[(z - w) * nvar..(z + w + 1) * nvar];
        let wc = &ws.prim[z * nvar..(z + 1) * nvar];
        // split borrows: left edge buffer and right edge buffer are
        // distinct vectors
        let seg = z * nvar..(z + 1) * nvar;
        let mut left = [0.0; MAX_VARS];
        let mut right = [0.0; MAX_VARS];
        if !reconstruct_zone_with(
            model,
            config,
            dir,
            win,
            wc,
            &mut ws.eig,
            &mut left[..nvar],
            &mut right[..nvar],
        ) {
            stats.char_fallbacks += 1;
        }
        ws.edge_l[seg.clone()].copy_from_slice(&left[..nvar]);
        ws.edge_r[seg].copy_from_slice(&right[..nvar]);
    }

    // interface k lies between zones k-1 and k
    let k_lo = z_lo + 1;
    let k_hi = z_hi; // exclusive
    for k in k_lo..k_hi {
        let ul = &ws.edge_r[(k - 1) * nvar..k * nvar];
        let ur = &ws.edge_l[k * nvar..(k + 1) * nvar];
        let fl = model
            .prim_from_cons(ul, &mut ws.prim_l[k * nvar..(k + 1) * nvar])
            .map_err(|e| locate(e, dir, k as i64 - g as i64))?;
        let fr = model
            .prim_from_cons(ur, &mut ws.prim_r[k * nvar..(k + 1) * nvar])
            .map_err(|e| locate(e, dir, k as i64 - g as i64))?;
        stats.floored += (fl + fr) as u64;
        let (al, ar) = model
            .wavespeed_bounds(&ws.prim_l[k * nvar..(k + 1) * nvar], dir)
            .map_err(|e| locate(e, dir, k as i64 - g as i64))?;
        let (bl, br) = model
            .wavespeed_bounds(&ws.prim_r[k * nvar..(k + 1) * nvar], dir)
            .map_err(|e| locate(e, dir, k as i64 - g as i64))?;
        ws.raw[k] = (al.min(bl), ar.max(br));
    }

    // needed interfaces: zone boundaries -1/2 .. nz-1/2, i.e. k in
    // [g, g+nz] inclusive; extremize, then solve
    for k in g..=g + nz {
        let lo = (k - w).max(k_lo);
        let hi = (k + w).min(k_hi - 1);
        let mut s_l = f64::INFINITY;
        let mut s_r = f64::NEG_INFINITY;
        for r in ws.raw[lo..=hi].iter() {
            s_l = s_l.min(r.0);
            s_r = s_r.max(r.1);
        }
        if config.riemann_mode == RiemannMode::Llf {
            let s = s_l.abs().max(s_r.abs());
            s_l = -s;
            s_r = s;
        }
        let wl = &ws.prim_l[k * nvar..(k + 1) * nvar];
        let wr = &ws.prim_r[k * nvar..(k + 1) * nvar];
        let psi = match config.psi_mode {
            PsiMode::One => 1.0,
            PsiMode::Zero => 0.0,
            PsiMode::Detector => shock_detector(model, wl, wr, dir),
        };
        let input = RiemannInput {
            model,
            dir,
            ul: &ws.edge_r[(k - 1) * nvar..k * nvar],
            ur: &ws.edge_l[k * nvar..(k + 1) * nvar],
            wl,
            wr,
            s_l,
            s_r,
            psi,
            antidiffusion: config.antidiffusion,
            delta_form: config.delta_form,
        };
        let sol = hlli_fluctuations(&input).map_err(|e| locate(e, dir, k as i64 - g as i64))?;
        stats.max_riemann_iters = stats.max_riemann_iters.max(sol.iterations);
        stats.floored += sol.floored as u64;
        ws.dminus[k * nvar..(k + 1) * nvar].copy_from_slice(&sol.d_minus[..nvar]);
        ws.dplus[k * nvar..(k + 1) * nvar].copy_from_slice(&sol.d_plus[..nvar]);
    }

    // accumulate: interior zone i has left interface k = g+i and right
    // interface k = g+i+1
    let mut a = Mat::zeros(nvar);
    let inv_dz = 1.0 / dz;
    let mut du = [0.0; MAX_VARS];
    let mut adu = [0.0; MAX_VARS];
    for i in 0..nz {
        let z = g + i;
        model.char_matrix(&ws.prim[z * nvar..(z + 1) * nvar], dir, &mut a);
        for k in 0..nvar {
            du[k] = ws.edge_r[z * nvar + k] - ws.edge_l[z * nvar + k];
        }
        a.matvec(&du[..nvar], &mut adu[..nvar]);
        let o = &mut out[i * nvar..(i + 1) * nvar];
        for k in 0..nvar {
            o[k] -= inv_dz * (adu[k] + ws.dplus[z * nvar + k] + ws.dminus[(z + 1) * nvar + k]);
        }
    }
    Ok(())
}

fn locate(e: SolverError, dir: Dir, z: i64) -> SolverError {
    match e {
        SolverError::Inadmissible { what, value, i, j } => {
            let (i, j) = match dir {
                Dir::X => (z, j),
                Dir::Y => (i, z),
            };
            SolverError::Inadmissible { i, j, what, value }
        }
        SolverError::RiemannNonConvergence { residual, .. } => SolverError::RiemannNonConvergence {
            x: z as f64,
            y: f64::NAN,
            residual,
        },
        other => other,
    }
}

fn tag_line(e: SolverError, dir: Dir, line: i64) -> SolverError {
    match e {
        SolverError::Inadmissible { i, j, what, value } => {
            let (i, j) = match dir {
                Dir::X => (i, line),
                Dir::Y => (line, j),
            };
            SolverError::Inadmissible { i, j, what, value }
        }
        SolverError::RiemannNonConvergence { x, residual, .. } => {
            SolverError::RiemannNonConvergence { x, y: line as f64, residual }
        }
        other => other,
    }
}

/// Assemble dU/dt over the interior zones; ghosts must already be filled
/// for the current stage. Residual entries outside the interior are set
/// to zero.
pub fn spatial_residual<M: SystemModel>(
    field: &FieldArray,
    model: &M,
    config: &SchemeConfig,
    resid: &mut FieldArray,
) -> Result<ResidualStats> {
    config.validate(field.grid.nghost)?;
    let grid = field.grid;
    let nvar = field.nvar;
    let g = grid.nghost;
    let nx = grid.nx;
    let ny = grid.ny;
    let nxt = grid.nx_tot();
    resid.data_mut().fill(0.0);
    let mut stats = ResidualStats::default();

    // x sweep: rows are contiguous in storage
    let gy = if grid.ndim == 2 { g } else { 0 };
    let row_len = nxt * nvar;
    let rows: Result<Vec<(usize, Vec<f64>, ResidualStats)>> = (0..ny)
        .into_par_iter()
        .map_init(
            || Pencil::new(nxt, nvar),
            |ws, j| {
                let row = &field.data()[(j + gy) * row_len..(j + gy + 1) * row_len];
                let mut out = vec![0.0; nx * nvar];
                let mut st = ResidualStats::default();
                process_pencil(model, config, Dir::X, row, nx, g, grid.dx, ws, &mut out, &mut st)
                    .map_err(|e| tag_line(e, Dir::X, j as i64))?;
                Ok((j, out, st))
            },
        )
        .collect();
    for (j, out, st) in rows? {
        stats.merge(&st);
        for i in 0..nx {
            let dst = resid.offset(i as i64, j as i64);
            resid.data_mut()[dst..dst + nvar].copy_from_slice(&out[i * nvar..(i + 1) * nvar]);
        }
    }

    if grid.ndim == 2 {
        let nyt = grid.ny_tot();
        let cols: Result<Vec<(usize, Vec<f64>, ResidualStats)>> = (0..nx)
            .into_par_iter()
            .map_init(
                || (Pencil::new(nyt, nvar), vec![0.0; nyt * nvar]),
                |(ws, gather), i| {
                    for j in 0..nyt {
                        let src = (j * nxt + (i + g)) * nvar;
                        gather[j * nvar..(j + 1) * nvar]
                            .copy_from_slice(&field.data()[src..src + nvar]);
                    }
                    let mut out = vec![0.0; ny * nvar];
                    let mut st = ResidualStats::default();
                    process_pencil(model, config, Dir::Y, gather, ny, g, grid.dy, ws, &mut out, &mut st)
                        .map_err(|e| tag_line(e, Dir::Y, i as i64))?;
                    Ok((i, out, st))
                },
            )
            .collect();
        for (i, out, st) in cols? {
            stats.merge(&st);
            for j in 0..ny {
                let dst = resid.offset(i as i64, j as i64);
                for k in 0..nvar {
                    resid.data_mut()[dst + k] += out[j * nvar + k];
                }
            }
        }
    }
    Ok(stats)
}

/// CFL time step: dt = cfl / sum_dims(max |lambda_dim| / dz_dim) over the
/// interior, falling back to `dt_max` for a static field.
pub fn compute_dt<M: SystemModel>(
    field: &FieldArray,
    model: &M,
    config: &SchemeConfig,
    dt_max: f64,
) -> Result<f64> {
    let grid = field.grid;
    let nvar = field.nvar;
    let mut w = [0.0; MAX_VARS];
    let mut max_x = 0.0f64;
    let mut max_y = 0.0f64;
    for j in 0..grid.ny as i64 {
        for i in 0..grid.nx as i64 {
            model.prim_from_cons(field.zone(i, j), &mut w[..nvar])?;
            let (a, b) = model.wavespeed_bounds(&w[..nvar], Dir::X)?;
            max_x = max_x.max(a.abs()).max(b.abs());
            if grid.ndim == 2 {
                let (a, b) = model.wavespeed_bounds(&w[..nvar], Dir::Y)?;
                max_y = max_y.max(a.abs()).max(b.abs());
            }
        }
    }
    let mut denom = max_x / grid.dx;
    if grid.ndim == 2 {
        denom += max_y / grid.dy;
    }
    if denom <= 0.0 {
        return Ok(dt_max);
    }
    Ok((config.cfl / denom).min(dt_max))
}
