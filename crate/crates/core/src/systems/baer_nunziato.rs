//! Baer-Nunziato two-phase flow with stiffened-gas closures per phase.
//!
//! Layout (2D): (phi1 rho1, phi1 rho1 u1, phi1 rho1 v1, phi1 rho1 E1,
//! phi2 rho2, ..., phi1); in 1D the transverse momenta are dropped. The
//! interface quantities follow the P_I = p2, V_I = v1 convention, and the
//! energy-equation term P_I d(phi1)/dt is rewritten through the compaction
//! equation so the non-conservative product is purely spatial. phi2 is
//! never stored; the fractions sum to one by construction.

use super::{Dir, EigSet, Floors, LdPair, LdSet, SystemModel};
use crate::error::{Result, SolverError};
use crate::linalg::Mat;
use crate::MAX_VARS;

#[derive(Clone, Copy, Debug)]
pub struct BaerNunziatoParams {
    pub gamma1: f64,
    pub pi1: f64,
    pub gamma2: f64,
    pub pi2: f64,
    /// Interphase drag coefficient; 0 disables the source.
    pub lambda: f64,
    /// Pressure relaxation coefficient; 0 disables the source.
    pub mu: f64,
}

impl BaerNunziatoParams {
    pub fn inviscid(gamma1: f64, pi1: f64, gamma2: f64, pi2: f64) -> Self {
        BaerNunziatoParams { gamma1, pi1, gamma2, pi2, lambda: 0.0, mu: 0.0 }
    }
}

#[derive(Clone, Debug)]
pub struct BaerNunziato {
    pub params: BaerNunziatoParams,
    ndim: usize,
    nvar: usize,
    floors: Floors,
}

/// Conserved/primitive slot indices of one phase for a given sweep
/// direction.
#[derive(Clone, Copy)]
struct Phase {
    m: usize,
    mun: usize,
    mut_: Option<usize>,
    e: usize,
    gamma: f64,
    pi: f64,
    /// +1 for phase 1, -1 for phase 2 (sign of d(phi_j)/d(phi_1)).
    sigma: f64,
}

impl BaerNunziato {
    pub fn new(params: BaerNunziatoParams, ndim: usize, floors: Floors) -> Self {
        assert!(params.gamma1 > 1.0 && params.gamma2 > 1.0);
        assert!(params.pi1 >= 0.0 && params.pi2 >= 0.0);
        assert!(params.lambda >= 0.0 && params.mu >= 0.0);
        assert!(ndim == 1 || ndim == 2);
        BaerNunziato { params, ndim, nvar: 2 * (ndim + 2) + 1, floors }
    }

    #[inline]
    fn stride(&self) -> usize {
        self.ndim + 2
    }

    #[inline]
    pub fn i_phi(&self) -> usize {
        self.nvar - 1
    }

    fn phase(&self, j: usize, dir: Dir) -> Phase {
        let o = j * self.stride();
        let (mun, mut_) = match (self.ndim, dir) {
            (1, _) => (o + 1, None),
            (_, Dir::X) => (o + 1, Some(o + 2)),
            (_, Dir::Y) => (o + 2, Some(o + 1)),
        };
        Phase {
            m: o,
            mun,
            mut_,
            e: o + self.ndim + 1,
            gamma: if j == 0 { self.params.gamma1 } else { self.params.gamma2 },
            pi: if j == 0 { self.params.pi1 } else { self.params.pi2 },
            sigma: if j == 0 { 1.0 } else { -1.0 },
        }
    }

    #[inline]
    fn phi_of(&self, w: &[f64], j: usize) -> f64 {
        if j == 0 {
            w[self.i_phi()]
        } else {
            1.0 - w[self.i_phi()]
        }
    }

    #[inline]
    fn sound_speed(&self, w: &[f64], j: usize) -> f64 {
        let p = self.phase(j, Dir::X);
        (p.gamma * (w[p.e] + p.pi) / w[p.m]).sqrt()
    }

    /// dU/dW with primitive ordering matching the conserved slots.
    fn jac_cons_prim(&self, w: &[f64], m: &mut Mat) {
        m.fill_zero();
        let iphi = self.i_phi();
        for j in 0..2 {
            let ph = self.phase(j, Dir::X);
            let phi = self.phi_of(w, j);
            let rho = w[ph.m];
            let k = ph.gamma - 1.0;
            let p = w[ph.e];
            let un = w[ph.mun];
            let ut = ph.mut_.map(|i| w[i]).unwrap_or(0.0);
            let q2 = un * un + ut * ut;
            let rho_e_tot = 0.5 * rho * q2 + (p + ph.gamma * ph.pi) / k;
            m[(ph.m, ph.m)] = phi;
            m[(ph.m, iphi)] = ph.sigma * rho;
            m[(ph.mun, ph.m)] = phi * un;
            m[(ph.mun, ph.mun)] = phi * rho;
            m[(ph.mun, iphi)] = ph.sigma * rho * un;
            if let Some(it) = ph.mut_ {
                m[(it, ph.m)] = phi * ut;
                m[(it, it)] = phi * rho;
                m[(it, iphi)] = ph.sigma * rho * ut;
            }
            m[(ph.e, ph.m)] = 0.5 * phi * q2;
            m[(ph.e, ph.mun)] = phi * rho * un;
            if let Some(it) = ph.mut_ {
                m[(ph.e, it)] = phi * rho * ut;
            }
            m[(ph.e, ph.e)] = phi / k;
            m[(ph.e, iphi)] = ph.sigma * rho_e_tot;
        }
        m[(iphi, iphi)] = 1.0;
    }

    /// dW/dU.
    fn jac_prim_cons(&self, w: &[f64], n: &mut Mat) {
        n.fill_zero();
        let iphi = self.i_phi();
        for j in 0..2 {
            let ph = self.phase(j, Dir::X);
            let phi = self.phi_of(w, j);
            let rho = w[ph.m];
            let k = ph.gamma - 1.0;
            let un = w[ph.mun];
            let ut = ph.mut_.map(|i| w[i]).unwrap_or(0.0);
            let q2 = un * un + ut * ut;
            let mass = phi * rho;
            n[(ph.m, ph.m)] = 1.0 / phi;
            n[(ph.m, iphi)] = -ph.sigma * rho / phi;
            n[(ph.mun, ph.m)] = -un / mass;
            n[(ph.mun, ph.mun)] = 1.0 / mass;
            if let Some(it) = ph.mut_ {
                n[(it, ph.m)] = -ut / mass;
                n[(it, it)] = 1.0 / mass;
            }
            n[(ph.e, ph.m)] = 0.5 * k * q2 / phi;
            n[(ph.e, ph.mun)] = -k * un / phi;
            if let Some(it) = ph.mut_ {
                n[(ph.e, it)] = -k * ut / phi;
            }
            n[(ph.e, ph.e)] = k / phi;
            n[(ph.e, iphi)] = -ph.sigma * (w[ph.e] + ph.gamma * ph.pi) / phi;
        }
        n[(iphi, iphi)] = 1.0;
    }

    /// Primitive-space compaction eigenvector (right), or None near the
    /// u1 = u2 +/- c2 resonance where it loses rank.
    fn compaction_right_prim(&self, w: &[f64], dir: Dir) -> Option<[f64; MAX_VARS]> {
        let p1 = self.phase(0, dir);
        let p2 = self.phase(1, dir);
        let phi1 = self.phi_of(w, 0);
        let phi2 = self.phi_of(w, 1);
        if phi1 < 1e-6 || phi2 < 1e-6 {
            return None;
        }
        let c2 = self.sound_speed(w, 1);
        let delta = w[p2.mun] - w[p1.mun];
        let den = c2 * c2 - delta * delta;
        if den.abs() < 1e-8 * c2 * c2 {
            return None;
        }
        let mut r = [0.0; MAX_VARS];
        r[self.i_phi()] = 1.0;
        r[p1.e] = -(w[p1.e] - w[p2.e]) / phi1;
        r[p2.m] = -w[p2.m] * delta * delta / (phi2 * den);
        r[p2.mun] = c2 * c2 * delta / (phi2 * den);
        r[p2.e] = -w[p2.m] * c2 * c2 * delta * delta / (phi2 * den);
        Some(r)
    }
}

impl SystemModel for BaerNunziato {
    fn nvar(&self) -> usize {
        self.nvar
    }
    fn ndim(&self) -> usize {
        self.ndim
    }
    fn name(&self) -> &'static str {
        "baer_nunziato"
    }
    fn var_names(&self) -> Vec<&'static str> {
        if self.ndim == 1 {
            vec!["rho1", "u1", "p1", "rho2", "u2", "p2", "phi1"]
        } else {
            vec!["rho1", "u1", "v1", "p1", "rho2", "u2", "v2", "p2", "phi1"]
        }
    }

    fn flux_prim(&self, w: &[f64], dir: Dir, out: &mut [f64]) {
        out[..self.nvar].fill(0.0);
        for j in 0..2 {
            let ph = self.phase(j, dir);
            let phi = self.phi_of(w, j);
            let rho = w[ph.m];
            let un = w[ph.mun];
            let ut = ph.mut_.map(|i| w[i]).unwrap_or(0.0);
            let p = w[ph.e];
            let q2 = un * un + ut * ut;
            let ec = phi * (0.5 * rho * q2 + (p + ph.gamma * ph.pi) / (ph.gamma - 1.0));
            out[ph.m] = phi * rho * un;
            out[ph.mun] = phi * (rho * un * un + p);
            if let Some(it) = ph.mut_ {
                out[it] = phi * rho * un * ut;
            }
            out[ph.e] = un * (ec + phi * p);
        }
    }

    fn has_ncp(&self) -> bool {
        true
    }

    fn ncp_matrix(&self, w: &[f64], dir: Dir, c: &mut Mat) {
        c.fill_zero();
        let p1 = self.phase(0, dir);
        let p2 = self.phase(1, dir);
        let iphi = self.i_phi();
        let pi_int = w[p2.e]; // P_I = p2
        let vi_n = w[p1.mun]; // V_I = v1
        c[(p1.mun, iphi)] = -pi_int;
        c[(p1.e, iphi)] = -pi_int * vi_n;
        c[(p2.mun, iphi)] = pi_int;
        c[(p2.e, iphi)] = pi_int * vi_n;
        c[(iphi, iphi)] = vi_n;
    }

    fn flux_jacobian(&self, w: &[f64], dir: Dir, b: &mut Mat) {
        b.fill_zero();
        let iphi = self.i_phi();
        for j in 0..2 {
            let ph = self.phase(j, dir);
            let phi = self.phi_of(w, j);
            let rho = w[ph.m];
            let k = ph.gamma - 1.0;
            let p = w[ph.e];
            let un = w[ph.mun];
            let ut = ph.mut_.map(|i| w[i]).unwrap_or(0.0);
            let q2 = un * un + ut * ut;
            let ec = phi * (0.5 * rho * q2 + (p + ph.gamma * ph.pi) / k);
            let htot = (ec + phi * p) / (phi * rho);
            b[(ph.m, ph.mun)] = 1.0;
            b[(ph.mun, ph.m)] = 0.5 * k * q2 - un * un;
            b[(ph.mun, ph.mun)] = (3.0 - ph.gamma) * un;
            if let Some(it) = ph.mut_ {
                b[(ph.mun, it)] = -k * ut;
                b[(it, ph.m)] = -un * ut;
                b[(it, ph.mun)] = ut;
                b[(it, it)] = un;
                b[(ph.e, it)] = -k * un * ut;
            }
            b[(ph.mun, ph.e)] = k;
            b[(ph.mun, iphi)] = -ph.sigma * ph.gamma * ph.pi;
            b[(ph.e, ph.m)] = un * (0.5 * k * q2 - htot);
            b[(ph.e, ph.mun)] = htot - k * un * un;
            b[(ph.e, ph.e)] = ph.gamma * un;
            b[(ph.e, iphi)] = -un * ph.sigma * ph.gamma * ph.pi;
        }
    }

    fn wavespeed_bounds(&self, w: &[f64], dir: Dir) -> Result<(f64, f64)> {
        let p1 = self.phase(0, dir);
        let p2 = self.phase(1, dir);
        let c1 = self.sound_speed(w, 0);
        let c2 = self.sound_speed(w, 1);
        let u1 = w[p1.mun];
        let u2 = w[p2.mun];
        Ok(((u1 - c1).min(u2 - c2).min(u1), (u1 + c1).max(u2 + c2).max(u1)))
    }

    fn ld_eigensystem(&self, w: &[f64], dir: Dir, out: &mut LdSet) {
        let n = self.nvar;
        let p1 = self.phase(0, dir);
        let p2 = self.phase(1, dir);
        let phi1 = self.phi_of(w, 0);
        let c1sq = self.params.gamma1 * (w[p1.e] + self.params.pi1) / w[p1.m];
        let c2sq = self.params.gamma2 * (w[p2.e] + self.params.pi2) / w[p2.m];
        let mut mj = Mat::zeros(n);
        let mut nj = Mat::zeros(n);
        self.jac_cons_prim(w, &mut mj);
        self.jac_prim_cons(w, &mut nj);

        let mut push_pair = |lp: &[f64; MAX_VARS], rp: &[f64; MAX_VARS], lambda: f64| {
            let mut pair = LdPair { lambda, l: [0.0; MAX_VARS], r: [0.0; MAX_VARS] };
            mj.matvec(&rp[..n], &mut pair.r[..n]);
            nj.matvec_t(&lp[..n], &mut pair.l[..n]);
            let rmax = pair.r[..n].iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let lmax = pair.l[..n].iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let pivot: f64 = (0..n).map(|i| pair.l[i] * pair.r[i]).sum();
            if pivot.abs() < 1e-8 * (1.0 + lmax * rmax) {
                return;
            }
            let inv = 1.0 / pivot;
            for v in pair.l[..n].iter_mut() {
                *v *= inv;
            }
            out.push(pair);
        };

        // phase-1 contact
        let mut l = [0.0; MAX_VARS];
        let mut r = [0.0; MAX_VARS];
        r[p1.m] = 1.0;
        l[p1.m] = 1.0;
        l[p1.e] = -1.0 / c1sq;
        l[self.i_phi()] = -(w[p1.e] - w[p2.e]) / (phi1.max(1e-12) * c1sq);
        push_pair(&l, &r, w[p1.mun]);

        // phase-2 contact
        let mut l = [0.0; MAX_VARS];
        let mut r = [0.0; MAX_VARS];
        r[p2.m] = 1.0;
        l[p2.m] = 1.0;
        l[p2.e] = -1.0 / c2sq;
        push_pair(&l, &r, w[p2.mun]);

        // shear waves
        if let (Some(t1), Some(t2)) = (p1.mut_, p2.mut_) {
            let mut l = [0.0; MAX_VARS];
            let mut r = [0.0; MAX_VARS];
            l[t1] = 1.0;
            r[t1] = 1.0;
            push_pair(&l, &r, w[p1.mun]);
            let mut l = [0.0; MAX_VARS];
            let mut r = [0.0; MAX_VARS];
            l[t2] = 1.0;
            r[t2] = 1.0;
            push_pair(&l, &r, w[p2.mun]);
        }

        // compaction wave at V_I = u1; dropped near resonance
        if let Some(rp) = self.compaction_right_prim(w, dir) {
            let mut l = [0.0; MAX_VARS];
            l[self.i_phi()] = 1.0;
            push_pair(&l, &rp, w[p1.mun]);
        }
    }

    fn full_eigensystem(&self, w: &[f64], dir: Dir, out: &mut EigSet) -> Result<()> {
        let n = self.nvar;
        let p1 = self.phase(0, dir);
        let p2 = self.phase(1, dir);
        let phi1 = self.phi_of(w, 0);
        let phi2 = self.phi_of(w, 1);
        let iphi = self.i_phi();
        let c1 = self.sound_speed(w, 0);
        let c2 = self.sound_speed(w, 1);
        let (rho1, u1n, pr1) = (w[p1.m], w[p1.mun], w[p1.e]);
        let (rho2, u2n, pr2) = (w[p2.m], w[p2.mun], w[p2.e]);
        let delta = u2n - u1n;

        let rp_comp = self.compaction_right_prim(w, dir).ok_or(SolverError::EigenFailure {
            state: w[..n].to_vec(),
        })?;

        let mut rp = Mat::zeros(n);
        let mut lp = Mat::zeros(n);
        let mut lam = [0.0; MAX_VARS];
        let mut k = 0usize;
        // phase-1 acoustic pair, contact, shear
        for sgn in [-1.0, 1.0] {
            lam[k] = u1n + sgn * c1;
            rp[(p1.m, k)] = rho1;
            rp[(p1.mun, k)] = sgn * c1;
            rp[(p1.e, k)] = rho1 * c1 * c1;
            lp[(k, p1.mun)] = sgn / (2.0 * c1);
            lp[(k, p1.e)] = 1.0 / (2.0 * rho1 * c1 * c1);
            lp[(k, iphi)] = (pr1 - pr2) / (2.0 * phi1 * rho1 * c1 * c1);
            k += 1;
        }
        lam[k] = u1n;
        rp[(p1.m, k)] = 1.0;
        lp[(k, p1.m)] = 1.0;
        lp[(k, p1.e)] = -1.0 / (c1 * c1);
        lp[(k, iphi)] = -(pr1 - pr2) / (phi1 * c1 * c1);
        k += 1;
        if let Some(t1) = p1.mut_ {
            lam[k] = u1n;
            rp[(t1, k)] = 1.0;
            lp[(k, t1)] = 1.0;
            k += 1;
        }
        // phase-2 acoustic pair, contact, shear
        for sgn in [-1.0, 1.0] {
            lam[k] = u2n + sgn * c2;
            rp[(p2.m, k)] = rho2;
            rp[(p2.mun, k)] = sgn * c2;
            rp[(p2.e, k)] = rho2 * c2 * c2;
            lp[(k, p2.mun)] = sgn / (2.0 * c2);
            lp[(k, p2.e)] = 1.0 / (2.0 * rho2 * c2 * c2);
            lp[(k, iphi)] = -delta / (2.0 * phi2 * (delta + sgn * c2));
            k += 1;
        }
        lam[k] = u2n;
        rp[(p2.m, k)] = 1.0;
        lp[(k, p2.m)] = 1.0;
        lp[(k, p2.e)] = -1.0 / (c2 * c2);
        k += 1;
        if let Some(t2) = p2.mut_ {
            lam[k] = u2n;
            rp[(t2, k)] = 1.0;
            lp[(k, t2)] = 1.0;
            k += 1;
        }
        // compaction wave
        lam[k] = u1n;
        for i in 0..n {
            rp[(i, k)] = rp_comp[i];
        }
        lp[(k, iphi)] = 1.0;
        k += 1;
        debug_assert_eq!(k, n);

        let mut mj = Mat::zeros(n);
        let mut nj = Mat::zeros(n);
        self.jac_cons_prim(w, &mut mj);
        self.jac_prim_cons(w, &mut nj);
        out.right = mj.matmul(&rp);
        out.left = lp.matmul(&nj);
        out.lambda = lam;
        Ok(())
    }

    fn prim_from_cons(&self, u: &[f64], w: &mut [f64]) -> Result<u32> {
        let mut floored = 0u32;
        for &v in u.iter().take(self.nvar) {
            if !v.is_finite() {
                return Err(SolverError::Inadmissible { i: -1, j: -1, what: "bn state", value: v });
            }
        }
        let iphi = self.i_phi();
        let mut phi1 = u[iphi];
        if phi1 < self.floors.fraction {
            phi1 = self.floors.fraction;
            floored += 1;
        } else if phi1 > 1.0 - self.floors.fraction {
            phi1 = 1.0 - self.floors.fraction;
            floored += 1;
        }
        w[iphi] = phi1;
        for j in 0..2 {
            let ph = self.phase(j, Dir::X);
            let phi = if j == 0 { phi1 } else { 1.0 - phi1 };
            let k = ph.gamma - 1.0;
            let mut mass = u[ph.m];
            if mass < phi * self.floors.mass {
                mass = phi * self.floors.mass;
                floored += 1;
            }
            w[ph.m] = mass / phi;
            let un = u[ph.mun] / mass;
            w[ph.mun] = un;
            let mut q2 = un * un;
            if let Some(it) = ph.mut_ {
                let ut = u[it] / mass;
                w[it] = ut;
                q2 += ut * ut;
            }
            let mut p = k * (u[ph.e] - 0.5 * mass * q2) / phi - ph.gamma * ph.pi;
            if p < self.floors.pressure - ph.pi {
                p = self.floors.pressure - ph.pi;
                floored += 1;
            }
            w[ph.e] = p;
        }
        Ok(floored)
    }

    fn cons_from_prim(&self, w: &[f64], u: &mut [f64]) {
        let iphi = self.i_phi();
        u[iphi] = w[iphi];
        for j in 0..2 {
            let ph = self.phase(j, Dir::X);
            let phi = self.phi_of(w, j);
            let k = ph.gamma - 1.0;
            let rho = w[ph.m];
            let un = w[ph.mun];
            let mut q2 = un * un;
            u[ph.m] = phi * rho;
            u[ph.mun] = phi * rho * un;
            if let Some(it) = ph.mut_ {
                u[it] = phi * rho * w[it];
                q2 += w[it] * w[it];
            }
            u[ph.e] = phi * (0.5 * rho * q2 + (w[ph.e] + ph.gamma * ph.pi) / k);
        }
    }

    fn has_stiff_source(&self) -> bool {
        self.params.lambda > 0.0 || self.params.mu > 0.0
    }

    fn stiff_source(&self, u: &[f64], out: &mut [f64]) {
        out[..self.nvar].fill(0.0);
        let la = self.params.lambda;
        let mu = self.params.mu;
        let p1 = self.phase(0, Dir::X);
        let p2 = self.phase(1, Dir::X);
        let m1 = u[p1.m];
        let m2 = u[p2.m];
        let u1 = u[p1.mun] / m1;
        let u2 = u[p2.mun] / m2;
        let du = u1 - u2;
        out[p1.mun] = -la * du;
        out[p2.mun] = la * du;
        let mut work = u1 * du; // V_I . (v1 - v2), V_I = v1
        if let (Some(t1), Some(t2)) = (p1.mut_, p2.mut_) {
            let v1 = u[t1] / m1;
            let v2 = u[t2] / m2;
            let dv = v1 - v2;
            out[t1] = -la * dv;
            out[t2] = la * dv;
            work += v1 * dv;
        }
        out[p1.e] = -la * work;
        out[p2.e] = la * work;
        // pressure relaxation on the compaction equation
        let mut w = [0.0; MAX_VARS];
        if self.prim_from_cons(u, &mut w[..self.nvar]).is_ok() {
            out[self.i_phi()] = mu * (w[p1.e] - w[p2.e]);
        }
    }

    fn stiff_jacobian(&self, u: &[f64], jm: &mut Mat) {
        jm.fill_zero();
        let la = self.params.lambda;
        let mu = self.params.mu;
        let p1 = self.phase(0, Dir::X);
        let p2 = self.phase(1, Dir::X);
        let m1 = u[p1.m];
        let m2 = u[p2.m];
        let u1 = u[p1.mun] / m1;
        let u2 = u[p2.mun] / m2;

        // drag rows; phase-2 rows are the negatives of phase-1 rows
        jm[(p1.mun, p1.m)] = la * u1 / m1;
        jm[(p1.mun, p1.mun)] = -la / m1;
        jm[(p1.mun, p2.m)] = -la * u2 / m2;
        jm[(p1.mun, p2.mun)] = la / m2;

        jm[(p1.e, p1.m)] = la * (2.0 * u1 - u2) * u1 / m1;
        jm[(p1.e, p1.mun)] = -la * (2.0 * u1 - u2) / m1;
        jm[(p1.e, p2.m)] = -la * u1 * u2 / m2;
        jm[(p1.e, p2.mun)] = la * u1 / m2;

        if let (Some(t1), Some(t2)) = (p1.mut_, p2.mut_) {
            let v1 = u[t1] / m1;
            let v2 = u[t2] / m2;
            jm[(t1, p1.m)] = la * v1 / m1;
            jm[(t1, t1)] = -la / m1;
            jm[(t1, p2.m)] = -la * v2 / m2;
            jm[(t1, t2)] = la / m2;
            jm[(p1.e, p1.m)] += la * (2.0 * v1 - v2) * v1 / m1;
            jm[(p1.e, t1)] = -la * (2.0 * v1 - v2) / m1;
            jm[(p1.e, p2.m)] += -la * v1 * v2 / m2;
            jm[(p1.e, t2)] = la * v1 / m2;
            for col in [p1.m, t1, p2.m, t2] {
                jm[(t2, col)] = -jm[(t1, col)];
            }
        }
        for col in 0..self.nvar {
            jm[(p2.mun, col)] = -jm[(p1.mun, col)];
            jm[(p2.e, col)] = -jm[(p1.e, col)];
        }

        // d(mu (p1 - p2))/dU via the analytic pressure gradients
        let mut w = [0.0; MAX_VARS];
        if mu > 0.0 && self.prim_from_cons(u, &mut w[..self.nvar]).is_ok() {
            let mut nj = Mat::zeros(self.nvar);
            self.jac_prim_cons(&w, &mut nj);
            let iphi = self.i_phi();
            for col in 0..self.nvar {
                jm[(iphi, col)] = mu * (nj[(p1.e, col)] - nj[(p2.e, col)]);
            }
        }
    }

    fn velocity_slots(&self, dir: Dir) -> &'static [usize] {
        match (self.ndim, dir) {
            (1, _) => &[1, 4],
            (_, Dir::X) => &[1, 5],
            (_, Dir::Y) => &[2, 6],
        }
    }

    fn mass_slots(&self) -> &'static [usize] {
        if self.ndim == 1 {
            &[0, 3]
        } else {
            &[0, 4]
        }
    }

    fn pressure_like(&self, w: &[f64]) -> f64 {
        let p1 = self.phase(0, Dir::X);
        let p2 = self.phase(1, Dir::X);
        w[p1.e].min(w[p2.e])
    }

    fn floors(&self) -> Floors {
        self.floors
    }
}

/// Check L R = I for an assembled eigensystem; shared by tests.
#[cfg(test)]
pub(crate) fn assert_biorthonormal(eig: &EigSet, n: usize, tol: f64) {
    let prod = eig.left.matmul(&eig.right);
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!(
                (prod[(i, j)] - want).abs() < tol,
                "L R != I at ({i},{j}): {}",
                prod[(i, j)]
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::fd_char_matrix;

    fn model_2d() -> BaerNunziato {
        BaerNunziato::new(
            BaerNunziatoParams::inviscid(1.4, 0.0, 1.35, 0.0),
            2,
            Floors::default(),
        )
    }

    fn sample_w() -> [f64; 9] {
        // rho1 u1 v1 p1 rho2 u2 v2 p2 phi1
        [1.0, 0.3, -0.2, 1.2, 2.0, -0.4, 0.1, 1.5, 0.4]
    }

    #[test]
    fn sound_speed_formula() {
        let m = BaerNunziato::new(
            BaerNunziatoParams::inviscid(3.0, 100.0, 1.4, 0.0),
            1,
            Floors::default(),
        );
        // c1 = sqrt(gamma1 (p1 + pi1) / rho1) = sqrt(3 * 600 / 800) = 1.5
        let w = [800.0, 0.0, 500.0, 1.0, 0.0, 1.0, 0.4];
        assert!((m.sound_speed(&w, 0) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn compaction_row_of_ncp() {
        let m = model_2d();
        let w = sample_w();
        let mut c = Mat::zeros(9);
        m.ncp_matrix(&w, Dir::X, &mut c);
        // phi1 row: V_I = u1 in the phi1 column, everything else zero
        for col in 0..9 {
            let want = if col == 8 { w[1] } else { 0.0 };
            assert!((c[(8, col)] - want).abs() < 1e-15);
        }
        // momentum rows carry -P_I / +P_I
        assert!((c[(1, 8)] + w[7]).abs() < 1e-15);
        assert!((c[(5, 8)] - w[7]).abs() < 1e-15);
    }

    #[test]
    fn round_trip_table_vii_rp1_left() {
        let m = BaerNunziato::new(
            BaerNunziatoParams::inviscid(1.4, 0.0, 1.4, 0.0),
            1,
            Floors::default(),
        );
        let w = [1.0, 0.0, 1.0, 0.5, 0.0, 1.0, 0.4];
        let mut u = [0.0; 7];
        m.cons_from_prim(&w, &mut u);
        let mut w2 = [0.0; 7];
        assert_eq!(m.prim_from_cons(&u, &mut w2).unwrap(), 0);
        for i in 0..7 {
            assert!((w[i] - w2[i]).abs() < 1e-14 * (1.0 + w[i].abs()));
        }
    }

    #[test]
    fn char_matrix_matches_finite_differences() {
        let m = model_2d();
        let w = sample_w();
        let mut u = [0.0; 9];
        m.cons_from_prim(&w, &mut u);
        for dir in [Dir::X, Dir::Y] {
            let mut a = Mat::zeros(9);
            m.char_matrix(&w, dir, &mut a);
            let fd = fd_char_matrix(&m, &u, dir).unwrap();
            let scale = fd.max_abs();
            for i in 0..9 {
                for j in 0..9 {
                    assert!(
                        (a[(i, j)] - fd[(i, j)]).abs() < 2e-6 * (1.0 + scale),
                        "dir {dir:?} ({i},{j}) {} vs {}",
                        a[(i, j)],
                        fd[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn full_eigensystem_biorthonormal_and_eigen() {
        let m = model_2d();
        let w = sample_w();
        for dir in [Dir::X, Dir::Y] {
            let mut eig = EigSet::new(9);
            m.full_eigensystem(&w, dir, &mut eig).unwrap();
            assert_biorthonormal(&eig, 9, 1e-11);
            let mut a = Mat::zeros(9);
            m.char_matrix(&w, dir, &mut a);
            let scale = a.norm_inf();
            for k in 0..9 {
                let mut r = [0.0; 9];
                for i in 0..9 {
                    r[i] = eig.right[(i, k)];
                }
                let mut ar = [0.0; 9];
                a.matvec(&r, &mut ar);
                for i in 0..9 {
                    assert!(
                        (ar[i] - eig.lambda[k] * r[i]).abs() < 1e-9 * scale,
                        "dir {dir:?} wave {k} comp {i}: {} vs {}",
                        ar[i],
                        eig.lambda[k] * r[i]
                    );
                }
            }
        }
    }

    #[test]
    fn ld_pairs_satisfy_eigen_residuals() {
        let m = model_2d();
        let w = sample_w();
        let mut u = [0.0; 9];
        m.cons_from_prim(&w, &mut u);
        for dir in [Dir::X, Dir::Y] {
            let fd = fd_char_matrix(&m, &u, dir).unwrap();
            let scale = fd.norm_inf();
            let mut set = LdSet::new();
            m.ld_eigensystem(&w, dir, &mut set);
            assert_eq!(set.count, 5);
            for p in set.iter() {
                let mut ar = [0.0; 9];
                fd.matvec(&p.r[..9], &mut ar);
                let rnorm = p.r[..9].iter().fold(0.0f64, |a, v| a.max(v.abs()));
                for i in 0..9 {
                    assert!(
                        (ar[i] - p.lambda * p.r[i]).abs() < 1e-6 * scale * rnorm.max(1.0),
                        "right residual dir {dir:?} lambda {} comp {i}",
                        p.lambda
                    );
                }
                let mut la = [0.0; 9];
                fd.matvec_t(&p.l[..9], &mut la);
                let lnorm = p.l[..9].iter().fold(0.0f64, |a, v| a.max(v.abs()));
                for i in 0..9 {
                    assert!(
                        (la[i] - p.lambda * p.l[i]).abs() < 1e-6 * scale * lnorm.max(1.0),
                        "left residual dir {dir:?} lambda {}",
                        p.lambda
                    );
                }
            }
        }
    }

    #[test]
    fn compaction_wave_speed_is_u1() {
        let m = model_2d();
        let w = sample_w();
        let mut set = LdSet::new();
        m.ld_eigensystem(&w, Dir::X, &mut set);
        let comp = set
            .iter()
            .find(|p| p.l[..8].iter().all(|v| v.abs() < 1e-30) || p.r[8].abs() > 0.0)
            .unwrap();
        assert!((comp.lambda - w[1]).abs() < 1e-14);
    }

    #[test]
    fn single_phase_reduction_matches_euler() {
        let gamma = 1.4;
        let m = BaerNunziato::new(
            BaerNunziatoParams::inviscid(gamma, 0.0, 1.6, 0.0),
            2,
            Floors::default(),
        );
        let e = super::super::Euler::new(super::super::EulerParams { gamma }, 2, Floors::default());
        // phi1 ~ 1: phase-1 flux equals the Euler flux of the same state
        let w_bn = [1.2, 0.5, -0.3, 2.0, 1.0, 0.0, 0.0, 1.0, 1.0 - 1e-12];
        let w_e = [1.2, 0.5, -0.3, 2.0];
        let mut f_bn = [0.0; 9];
        let mut f_e = [0.0; 4];
        m.flux_prim(&w_bn, Dir::X, &mut f_bn);
        e.flux_prim(&w_e, Dir::X, &mut f_e);
        for (i, want) in f_e.iter().enumerate() {
            assert!((f_bn[i] - want).abs() < 1e-10 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn stiff_source_equilibrium_and_antisymmetry() {
        let m = BaerNunziato::new(
            BaerNunziatoParams { gamma1: 1.4, pi1: 0.0, gamma2: 1.67, pi2: 0.0, lambda: 1e3, mu: 1e2 },
            1,
            Floors::default(),
        );
        // equal velocities and pressures: source vanishes
        let weq = [1.0, 0.7, 2.0, 0.5, 0.7, 2.0, 0.3];
        let mut ueq = [0.0; 7];
        m.cons_from_prim(&weq, &mut ueq);
        let mut s = [0.0; 7];
        m.stiff_source(&ueq, &mut s);
        for v in s.iter() {
            assert!(v.abs() < 1e-11);
        }
        // momentum sources cancel
        let w = [1.0, 0.9, 2.0, 0.5, -0.3, 1.0, 0.3];
        let mut u = [0.0; 7];
        m.cons_from_prim(&w, &mut u);
        m.stiff_source(&u, &mut s);
        assert!((s[1] + s[4]).abs() < 1e-12 * s[1].abs().max(1.0));
        assert!(s[1].abs() > 0.0);
    }

    #[test]
    fn stiff_jacobian_matches_finite_differences() {
        let m = BaerNunziato::new(
            BaerNunziatoParams { gamma1: 1.4, pi1: 0.0, gamma2: 1.67, pi2: 0.0, lambda: 1e3, mu: 1e2 },
            2,
            Floors::default(),
        );
        let w = sample_w();
        let mut u = [0.0; 9];
        m.cons_from_prim(&w, &mut u);
        let mut jac = Mat::zeros(9);
        m.stiff_jacobian(&u, &mut jac);
        let mut fd = Mat::zeros(9);
        let mut up = [0.0; 9];
        let mut um = [0.0; 9];
        let mut sp = [0.0; 9];
        let mut sm = [0.0; 9];
        for j in 0..9 {
            let h = 1e-7 * (1.0 + u[j].abs());
            up.copy_from_slice(&u);
            um.copy_from_slice(&u);
            up[j] += h;
            um[j] -= h;
            m.stiff_source(&up, &mut sp);
            m.stiff_source(&um, &mut sm);
            for i in 0..9 {
                fd[(i, j)] = (sp[i] - sm[i]) / (2.0 * h);
            }
        }
        let scale = fd.max_abs().max(1.0);
        for i in 0..9 {
            for j in 0..9 {
                assert!(
                    (jac[(i, j)] - fd[(i, j)]).abs() < 1e-5 * scale,
                    "({i},{j}): {} vs {}",
                    jac[(i, j)],
                    fd[(i, j)]
                );
            }
        }
    }
}
