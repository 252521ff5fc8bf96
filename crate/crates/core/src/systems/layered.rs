//! Two-layer shallow water equations and the Pitman-Le two-phase debris
//! flow model. Both are 7-variable systems (h1, h1 u1, h1 v1, h2, h2 u2,
//! h2 v2, b) where the bathymetry b is carried as a zero-flux variable
//! whose wave speed is zero. The gravity coupling between the layers and
//! the bathymetry term enter through the non-conservative matrix, not the
//! flux.
//!
//! The transverse momenta are kept even on 1D meshes: the catalog Riemann
//! problems jump them across shear waves.

use super::{Dir, EigSet, Floors, LdPair, LdSet, SystemModel};
use crate::error::{Result, SolverError};
use crate::linalg::{eigenvalues_real, extreme_eigenvalues, invert, Lu, Mat};
use crate::MAX_VARS;

#[derive(Clone, Copy, Debug)]
pub struct DebrisFlowParams {
    pub g: f64,
    /// Density ratio rho_f / rho_s in (0, 1).
    pub rho: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct TwoLayerSWParams {
    pub g: f64,
    /// Density ratio rho_1 / rho_2 in (0, 1).
    pub rho: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayeredKind {
    Debris,
    TwoLayer,
}

pub const NVAR_LAYERED: usize = 7;
const I_B: usize = 6;

#[derive(Clone, Debug)]
pub struct LayeredModel {
    pub kind: LayeredKind,
    pub g: f64,
    pub rho: f64,
    floors: Floors,
}

impl LayeredModel {
    pub fn debris(p: DebrisFlowParams, floors: Floors) -> Self {
        assert!(p.g > 0.0 && p.rho > 0.0 && p.rho < 1.0);
        LayeredModel { kind: LayeredKind::Debris, g: p.g, rho: p.rho, floors }
    }

    pub fn two_layer(p: TwoLayerSWParams, floors: Floors) -> Self {
        assert!(p.g > 0.0 && p.rho > 0.0 && p.rho < 1.0);
        LayeredModel { kind: LayeredKind::TwoLayer, g: p.g, rho: p.rho, floors }
    }

    /// (normal momentum, transverse momentum) slots per layer.
    #[inline]
    fn slots(&self, dir: Dir) -> ([usize; 2], [usize; 2]) {
        match dir {
            Dir::X => ([1, 4], [2, 5]),
            Dir::Y => ([2, 5], [1, 4]),
        }
    }

    /// Entries of the 2x2 system defining the zero-speed (bathymetry)
    /// eigenvector: M (r_h1, r_h2)^T = (-g, -g)^T.
    fn bath_matrix(&self, w: &[f64], dir: Dir) -> [[f64; 2]; 2] {
        let (mn, _) = self.slots(dir);
        let g = self.g;
        let (h1, h2) = (w[0], w[3]);
        let (u1, u2) = (w[mn[0]], w[mn[1]]);
        match self.kind {
            LayeredKind::TwoLayer => [[g - u1 * u1 / h1, g], [self.rho * g, g - u2 * u2 / h2]],
            LayeredKind::Debris => [
                [
                    g * (1.0 + 0.5 * (1.0 - self.rho) * h2 / h1) - u1 * u1 / h1,
                    0.5 * g * (1.0 + self.rho),
                ],
                [g, g - u2 * u2 / h2],
            ],
        }
    }

    /// Condensed 4x4 block of the characteristic matrix in the slots
    /// (h1, m1n, h2, m2n); the full 7x7 is block lower triangular over
    /// (b | this block | transverse momenta), so the genuinely non-linear
    /// wave speeds are its eigenvalues. Assembled directly from the
    /// analytic entries.
    fn gnl_block(&self, w: &[f64], dir: Dir) -> Mat {
        let (mn, _) = self.slots(dir);
        let g = self.g;
        let (h1, h2) = (w[0], w[3]);
        let (u1, u2) = (w[mn[0]], w[mn[1]]);
        let mut b = Mat::zeros(4);
        b[(0, 1)] = 1.0;
        b[(2, 3)] = 1.0;
        b[(1, 0)] = -u1 * u1;
        b[(1, 1)] = 2.0 * u1;
        b[(3, 2)] = -u2 * u2 + g * h2;
        b[(3, 3)] = 2.0 * u2;
        match self.kind {
            LayeredKind::TwoLayer => {
                b[(1, 0)] += g * h1;
                b[(1, 2)] = g * h1;
                b[(3, 0)] = self.rho * g * h2;
            }
            LayeredKind::Debris => {
                b[(1, 0)] += g * self.rho * h1 + 0.5 * g * (1.0 - self.rho) * (h2 + 2.0 * h1);
                b[(1, 2)] = 0.5 * g * (1.0 - self.rho) * h1 + g * self.rho * h1;
                b[(3, 0)] = g * h2;
            }
        }
        b
    }
}

impl SystemModel for LayeredModel {
    fn nvar(&self) -> usize {
        NVAR_LAYERED
    }
    fn ndim(&self) -> usize {
        2
    }
    fn name(&self) -> &'static str {
        match self.kind {
            LayeredKind::Debris => "debris_flow",
            LayeredKind::TwoLayer => "two_layer_sw",
        }
    }
    fn var_names(&self) -> Vec<&'static str> {
        match self.kind {
            LayeredKind::Debris => vec!["h_s", "u_s", "v_s", "h_f", "u_f", "v_f", "b"],
            LayeredKind::TwoLayer => vec!["h1", "u1", "v1", "h2", "u2", "v2", "b"],
        }
    }

    fn flux_prim(&self, w: &[f64], dir: Dir, out: &mut [f64]) {
        let (mn, mt) = self.slots(dir);
        let g = self.g;
        out[..NVAR_LAYERED].fill(0.0);
        for l in 0..2 {
            let h = w[3 * l];
            let un = w[mn[l]];
            let ut = w[mt[l]];
            out[3 * l] = h * un;
            out[mn[l]] = h * un * un;
            out[mt[l]] = h * un * ut;
        }
        match self.kind {
            LayeredKind::TwoLayer => {
                out[mn[0]] += 0.5 * g * w[0] * w[0];
                out[mn[1]] += 0.5 * g * w[3] * w[3];
            }
            LayeredKind::Debris => {
                out[mn[0]] +=
                    0.5 * g * self.rho * w[0] * w[0] + 0.5 * g * (1.0 - self.rho) * w[0] * (w[0] + w[3]);
                out[mn[1]] += 0.5 * g * w[3] * w[3];
            }
        }
    }

    fn has_ncp(&self) -> bool {
        true
    }

    fn ncp_matrix(&self, w: &[f64], dir: Dir, c: &mut Mat) {
        c.fill_zero();
        let (mn, _) = self.slots(dir);
        let g = self.g;
        match self.kind {
            LayeredKind::TwoLayer => {
                c[(mn[0], 3)] = g * w[0];
                c[(mn[0], I_B)] = g * w[0];
                c[(mn[1], 0)] = self.rho * g * w[3];
                c[(mn[1], I_B)] = g * w[3];
            }
            LayeredKind::Debris => {
                c[(mn[0], 3)] = g * self.rho * w[0];
                c[(mn[0], I_B)] = g * w[0];
                c[(mn[1], 0)] = g * w[3];
                c[(mn[1], I_B)] = g * w[3];
            }
        }
    }

    fn flux_jacobian(&self, w: &[f64], dir: Dir, b: &mut Mat) {
        b.fill_zero();
        let (mn, mt) = self.slots(dir);
        let g = self.g;
        for l in 0..2 {
            let ih = 3 * l;
            let un = w[mn[l]];
            let ut = w[mt[l]];
            b[(ih, mn[l])] = 1.0;
            b[(mn[l], ih)] = -un * un;
            b[(mn[l], mn[l])] = 2.0 * un;
            b[(mt[l], ih)] = -un * ut;
            b[(mt[l], mn[l])] = ut;
            b[(mt[l], mt[l])] = un;
        }
        match self.kind {
            LayeredKind::TwoLayer => {
                b[(mn[0], 0)] += g * w[0];
                b[(mn[1], 3)] += g * w[3];
            }
            LayeredKind::Debris => {
                b[(mn[0], 0)] += g * self.rho * w[0] + 0.5 * g * (1.0 - self.rho) * (w[3] + 2.0 * w[0]);
                b[(mn[0], 3)] += 0.5 * g * (1.0 - self.rho) * w[0];
                b[(mn[1], 3)] += g * w[3];
            }
        }
    }

    fn wavespeed_bounds(&self, w: &[f64], dir: Dir) -> Result<(f64, f64)> {
        if !(w[0] > 0.0 && w[3] > 0.0) {
            return Err(SolverError::EigenFailure { state: w[..NVAR_LAYERED].to_vec() });
        }
        let (mn, _) = self.slots(dir);
        let block = self.gnl_block(w, dir);
        let (mut lo, mut hi) = extreme_eigenvalues(&block);
        lo = lo.min(w[mn[0]]).min(w[mn[1]]).min(0.0);
        hi = hi.max(w[mn[0]]).max(w[mn[1]]).max(0.0);
        // analytic envelope as a sanity guard for the iterative eigensolve
        let ext = (self.g * (w[0] + w[3])).sqrt();
        let env_lo = w[mn[0]].min(w[mn[1]]).min(0.0) - 2.0 * ext;
        let env_hi = w[mn[0]].max(w[mn[1]]).max(0.0) + 2.0 * ext;
        lo = lo.max(env_lo);
        hi = hi.min(env_hi);
        let pad = 1e-10;
        Ok((lo - pad * (1.0 + lo.abs()), hi + pad * (1.0 + hi.abs())))
    }

    fn ncp_affine(&self) -> bool {
        true
    }

    fn ld_eigensystem(&self, w: &[f64], dir: Dir, out: &mut LdSet) {
        let (mn, mt) = self.slots(dir);
        // shear waves
        for l in 0..2 {
            let h = w[3 * l];
            let un = w[mn[l]];
            let ut = w[mt[l]];
            let mut pair = LdPair { lambda: un, l: [0.0; MAX_VARS], r: [0.0; MAX_VARS] };
            pair.r[mt[l]] = h;
            pair.l[3 * l] = -ut / h;
            pair.l[mt[l]] = 1.0 / h;
            // pivot = 1 by construction
            out.push(pair);
        }
        // stationary bathymetry wave
        let m = self.bath_matrix(w, dir);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let scale = m[0][0].abs().max(m[0][1].abs()).max(m[1][0].abs()).max(m[1][1].abs());
        if det.abs() < 1e-10 * scale * scale {
            return; // transcritical degeneracy: omit the pair
        }
        let g = self.g;
        let rh1 = (-g * m[1][1] + g * m[0][1]) / det;
        let rh2 = (-g * m[0][0] + g * m[1][0]) / det;
        let mut pair = LdPair { lambda: 0.0, l: [0.0; MAX_VARS], r: [0.0; MAX_VARS] };
        pair.r[0] = rh1;
        pair.r[3] = rh2;
        pair.r[mt[0]] = w[mt[0]] * rh1;
        pair.r[mt[1]] = w[mt[1]] * rh2;
        pair.r[I_B] = 1.0;
        pair.l[I_B] = 1.0;
        out.push(pair);
    }

    fn full_eigensystem(&self, w: &[f64], dir: Dir, out: &mut EigSet) -> Result<()> {
        let n = NVAR_LAYERED;
        let (mn, mt) = self.slots(dir);
        let block = self.gnl_block(w, dir);
        let fail = || SolverError::EigenFailure { state: w[..n].to_vec() };
        let eig4 = eigenvalues_real(&block).ok_or_else(fail)?;

        let mut right = Mat::zeros(n);
        let mut lam = [0.0; MAX_VARS];
        // four genuinely non-linear waves from the condensed block
        for k in 0..4 {
            let lambda = eig4[k];
            let r4 = gnl_eigenvector(&block, lambda).ok_or_else(fail)?;
            lam[k] = lambda;
            right[(0, k)] = r4[0];
            right[(mn[0], k)] = r4[1];
            right[(3, k)] = r4[2];
            right[(mn[1], k)] = r4[3];
            for l in 0..2 {
                let un = w[mn[l]];
                let ut = w[mt[l]];
                let d = lambda - un;
                if d.abs() > 1e-10 * (1.0 + lambda.abs()) {
                    right[(mt[l], k)] = ut * (r4[2 * l + 1] - un * r4[2 * l]) / d;
                }
            }
        }
        // shears and bathymetry complete the basis
        let mut ld = LdSet::new();
        self.ld_eigensystem(w, dir, &mut ld);
        if ld.count != 3 {
            return Err(fail());
        }
        for (k, p) in ld.iter().enumerate() {
            lam[4 + k] = p.lambda;
            for i in 0..n {
                right[(i, 4 + k)] = p.r[i];
            }
        }
        let left = invert(&right).ok_or_else(fail)?;
        out.lambda = lam;
        out.right = right;
        out.left = left;
        Ok(())
    }

    fn prim_from_cons(&self, u: &[f64], w: &mut [f64]) -> Result<u32> {
        let mut floored = 0u32;
        for &v in u.iter().take(NVAR_LAYERED) {
            if !v.is_finite() {
                return Err(SolverError::Inadmissible { i: -1, j: -1, what: "layer state", value: v });
            }
        }
        for l in 0..2 {
            let ih = 3 * l;
            let mut h = u[ih];
            if h < self.floors.mass {
                h = self.floors.mass;
                floored += 1;
            }
            w[ih] = h;
            w[ih + 1] = u[ih + 1] / h;
            w[ih + 2] = u[ih + 2] / h;
        }
        w[I_B] = u[I_B];
        Ok(floored)
    }

    fn cons_from_prim(&self, w: &[f64], u: &mut [f64]) {
        for l in 0..2 {
            let ih = 3 * l;
            u[ih] = w[ih];
            u[ih + 1] = w[ih] * w[ih + 1];
            u[ih + 2] = w[ih] * w[ih + 2];
        }
        u[I_B] = w[I_B];
    }

    fn velocity_slots(&self, dir: Dir) -> &'static [usize] {
        match dir {
            Dir::X => &[1, 4],
            Dir::Y => &[2, 5],
        }
    }

    fn mass_slots(&self) -> &'static [usize] {
        &[0, 3]
    }

    fn pressure_like(&self, w: &[f64]) -> f64 {
        let h = w[0] + w[3];
        0.5 * self.g * h * h
    }

    fn floors(&self) -> Floors {
        self.floors
    }
}

/// Eigenvector of the condensed 4x4 block by inverse iteration with a
/// slightly shifted LU solve.
fn gnl_eigenvector(a: &Mat, lambda: f64) -> Option<[f64; 4]> {
    let scale = a.norm_inf().max(1.0);
    let mut shifted = *a;
    for i in 0..4 {
        shifted[(i, i)] -= lambda + 1e-9 * scale;
    }
    let lu = Lu::factor(&shifted);
    if lu.singular {
        return None;
    }
    let mut v = [1.0, 0.5, -0.75, 0.25];
    let mut next = [0.0f64; 4];
    for _ in 0..3 {
        lu.solve(&v, &mut next);
        let norm = next.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        for (t, s) in v.iter_mut().zip(next.iter()) {
            *t = s / norm;
        }
    }
    // residual check against the unshifted block
    let mut av = [0.0f64; 4];
    a.matvec(&v, &mut av);
    let res = (0..4).map(|i| (av[i] - lambda * v[i]).abs()).fold(0.0f64, f64::max);
    if res > 1e-6 * scale {
        return None;
    }
    Some(v)
}
