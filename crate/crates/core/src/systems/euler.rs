//! Compressible Euler equations with an ideal-gas EOS. Conservative
//! system (C = 0); the linearly degenerate fields are the entropy wave
//! and, in 2D, the shear wave.

use super::{Dir, EigSet, Floors, LdPair, LdSet, SystemModel};
use crate::error::{Result, SolverError};
use crate::linalg::Mat;
use crate::MAX_VARS;

#[derive(Clone, Copy, Debug)]
pub struct EulerParams {
    pub gamma: f64,
}

#[derive(Clone, Debug)]
pub struct Euler {
    pub params: EulerParams,
    ndim: usize,
    nvar: usize,
    floors: Floors,
}

impl Euler {
    pub fn new(params: EulerParams, ndim: usize, floors: Floors) -> Self {
        assert!(params.gamma > 1.0);
        assert!(ndim == 1 || ndim == 2);
        Euler { params, ndim, nvar: 2 + ndim, floors }
    }

    /// Slot of the normal velocity and, in 2D, the transverse one.
    #[inline]
    fn slots(&self, dir: Dir) -> (usize, Option<usize>) {
        match (self.ndim, dir) {
            (1, _) => (1, None),
            (_, Dir::X) => (1, Some(2)),
            (_, Dir::Y) => (2, Some(1)),
        }
    }

    #[inline]
    fn sound_speed(&self, w: &[f64]) -> f64 {
        (self.params.gamma * w[self.nvar - 1] / w[0]).sqrt()
    }
}

impl SystemModel for Euler {
    fn nvar(&self) -> usize {
        self.nvar
    }
    fn ndim(&self) -> usize {
        self.ndim
    }
    fn name(&self) -> &'static str {
        "euler"
    }
    fn var_names(&self) -> Vec<&'static str> {
        if self.ndim == 1 {
            vec!["rho", "u", "p"]
        } else {
            vec!["rho", "u", "v", "p"]
        }
    }

    fn flux_prim(&self, w: &[f64], dir: Dir, out: &mut [f64]) {
        let (iu, it) = self.slots(dir);
        let rho = w[0];
        let un = w[iu];
        let p = w[self.nvar - 1];
        let q2 = if self.ndim == 2 {
            w[1] * w[1] + w[2] * w[2]
        } else {
            w[1] * w[1]
        };
        let e = p / (self.params.gamma - 1.0) + 0.5 * rho * q2;
        out[0] = rho * un;
        out[iu] = rho * un * un + p;
        if let Some(it) = it {
            out[it] = rho * un * w[it];
        }
        out[self.nvar - 1] = un * (e + p);
    }

    fn has_ncp(&self) -> bool {
        false
    }

    fn ncp_matrix(&self, _w: &[f64], _dir: Dir, c: &mut Mat) {
        c.fill_zero();
    }

    fn flux_jacobian(&self, w: &[f64], dir: Dir, b: &mut Mat) {
        let g = self.params.gamma;
        let k = g - 1.0;
        let n = self.nvar;
        let (iu, it) = self.slots(dir);
        let rho = w[0];
        let un = w[iu];
        let ut = it.map(|i| w[i]).unwrap_or(0.0);
        let p = w[n - 1];
        let q2 = un * un + ut * ut;
        let e = p / k + 0.5 * rho * q2;
        let h = (e + p) / rho;
        b.fill_zero();
        b[(0, iu)] = 1.0;
        b[(iu, 0)] = 0.5 * k * q2 - un * un;
        b[(iu, iu)] = (3.0 - g) * un;
        if let Some(it) = it {
            b[(iu, it)] = -k * ut;
            b[(it, 0)] = -un * ut;
            b[(it, iu)] = ut;
            b[(it, it)] = un;
            b[(n - 1, it)] = -k * un * ut;
        }
        b[(iu, n - 1)] = k;
        b[(n - 1, 0)] = un * (0.5 * k * q2 - h);
        b[(n - 1, iu)] = h - k * un * un;
        b[(n - 1, n - 1)] = g * un;
    }

    fn wavespeed_bounds(&self, w: &[f64], dir: Dir) -> Result<(f64, f64)> {
        let (iu, _) = self.slots(dir);
        let c = self.sound_speed(w);
        Ok((w[iu] - c, w[iu] + c))
    }

    fn ld_eigensystem(&self, w: &[f64], dir: Dir, out: &mut LdSet) {
        let n = self.nvar;
        let k = self.params.gamma - 1.0;
        let (iu, it) = self.slots(dir);
        let rho = w[0];
        let un = w[iu];
        let ut = it.map(|i| w[i]).unwrap_or(0.0);
        let p = w[n - 1];
        let c2 = self.params.gamma * p / rho;
        let q2 = un * un + ut * ut;

        // entropy wave: jump in density at constant velocity and pressure
        let mut pair = LdPair { lambda: un, l: [0.0; MAX_VARS], r: [0.0; MAX_VARS] };
        pair.r[0] = 1.0;
        pair.r[iu] = un;
        if let Some(it) = it {
            pair.r[it] = ut;
        }
        pair.r[n - 1] = 0.5 * q2;
        pair.l[0] = 1.0 - 0.5 * k * q2 / c2;
        pair.l[iu] = k * un / c2;
        if let Some(it) = it {
            pair.l[it] = k * ut / c2;
        }
        pair.l[n - 1] = -k / c2;
        out.push(pair);

        if let Some(it) = it {
            let mut shear = LdPair { lambda: un, l: [0.0; MAX_VARS], r: [0.0; MAX_VARS] };
            shear.r[it] = 1.0;
            shear.r[n - 1] = ut;
            shear.l[0] = -ut;
            shear.l[it] = 1.0;
            out.push(shear);
        }
    }

    fn full_eigensystem(&self, w: &[f64], dir: Dir, out: &mut EigSet) -> Result<()> {
        let n = self.nvar;
        let g = self.params.gamma;
        let k = g - 1.0;
        let (iu, it) = self.slots(dir);
        let rho = w[0];
        let un = w[iu];
        let ut = it.map(|i| w[i]).unwrap_or(0.0);
        let p = w[n - 1];
        let c2 = g * p / rho;
        let c = c2.sqrt();
        let q2 = un * un + ut * ut;
        let e = p / k + 0.5 * rho * q2;
        let h = (e + p) / rho;
        let b1 = k / c2;
        let b2 = 0.5 * b1 * q2;

        let left = &mut out.left;
        let right = &mut out.right;
        left.fill_zero();
        right.fill_zero();

        // wave 0: u - c; wave n-1: u + c; middle waves linearly degenerate
        out.lambda[0] = un - c;
        out.lambda[n - 1] = un + c;
        right[(0, 0)] = 1.0;
        right[(iu, 0)] = un - c;
        if let Some(it) = it {
            right[(it, 0)] = ut;
        }
        right[(n - 1, 0)] = h - un * c;
        right[(0, n - 1)] = 1.0;
        right[(iu, n - 1)] = un + c;
        if let Some(it) = it {
            right[(it, n - 1)] = ut;
        }
        right[(n - 1, n - 1)] = h + un * c;

        left[(0, 0)] = 0.5 * (b2 + un / c);
        left[(0, iu)] = -0.5 * (b1 * un + 1.0 / c);
        if let Some(it) = it {
            left[(0, it)] = -0.5 * b1 * ut;
        }
        left[(0, n - 1)] = 0.5 * b1;
        left[(n - 1, 0)] = 0.5 * (b2 - un / c);
        left[(n - 1, iu)] = -0.5 * (b1 * un - 1.0 / c);
        if let Some(it) = it {
            left[(n - 1, it)] = -0.5 * b1 * ut;
        }
        left[(n - 1, n - 1)] = 0.5 * b1;

        // entropy wave
        out.lambda[1] = un;
        right[(0, 1)] = 1.0;
        right[(iu, 1)] = un;
        if let Some(it) = it {
            right[(it, 1)] = ut;
        }
        right[(n - 1, 1)] = 0.5 * q2;
        left[(1, 0)] = 1.0 - b2;
        left[(1, iu)] = b1 * un;
        if let Some(it) = it {
            left[(1, it)] = b1 * ut;
        }
        left[(1, n - 1)] = -b1;

        if let Some(it) = it {
            out.lambda[2] = un;
            right[(it, 2)] = 1.0;
            right[(n - 1, 2)] = ut;
            left[(2, 0)] = -ut;
            left[(2, it)] = 1.0;
        }
        Ok(())
    }

    fn prim_from_cons(&self, u: &[f64], w: &mut [f64]) -> Result<u32> {
        let n = self.nvar;
        let k = self.params.gamma - 1.0;
        let mut floored = 0;
        for &v in u.iter().take(n) {
            if !v.is_finite() {
                return Err(SolverError::Inadmissible { i: -1, j: -1, what: "euler state", value: v });
            }
        }
        let mut rho = u[0];
        if rho < self.floors.mass {
            rho = self.floors.mass;
            floored += 1;
        }
        w[0] = rho;
        let mut q2 = 0.0;
        for d in 0..self.ndim {
            let vel = u[1 + d] / rho;
            w[1 + d] = vel;
            q2 += vel * vel;
        }
        let mut p = k * (u[n - 1] - 0.5 * rho * q2);
        if p < self.floors.pressure {
            p = self.floors.pressure;
            floored += 1;
        }
        w[n - 1] = p;
        Ok(floored)
    }

    fn cons_from_prim(&self, w: &[f64], u: &mut [f64]) {
        let n = self.nvar;
        let k = self.params.gamma - 1.0;
        u[0] = w[0];
        let mut q2 = 0.0;
        for d in 0..self.ndim {
            u[1 + d] = w[0] * w[1 + d];
            q2 += w[1 + d] * w[1 + d];
        }
        u[n - 1] = w[n - 1] / k + 0.5 * w[0] * q2;
    }

    fn velocity_slots(&self, dir: Dir) -> &'static [usize] {
        match (self.ndim, dir) {
            (1, _) => &[1],
            (_, Dir::X) => &[1],
            (_, Dir::Y) => &[2],
        }
    }

    fn mass_slots(&self) -> &'static [usize] {
        &[0]
    }

    fn pressure_like(&self, w: &[f64]) -> f64 {
        w[self.nvar - 1]
    }

    fn floors(&self) -> Floors {
        self.floors
    }
}
