//! Constant-coefficient linear system d/dt U + B dU/dx + C dU/dx = 0 with
//! flux F = B U. Every characteristic field of a constant-matrix system is
//! linearly degenerate, so the whole eigensystem feeds the anti-diffusion.
//! Used by the upwind-equivalence oracle and the solver unit tests.

use super::{Dir, EigSet, Floors, LdPair, LdSet, SystemModel};
use crate::error::{Result, SolverError};
use crate::linalg::{eigenvalues_real, invert, Lu, Mat};
use crate::MAX_VARS;

#[derive(Clone, Debug)]
pub struct LinearModel {
    n: usize,
    b: Mat,
    c: Mat,
    eig: EigSet,
    bounds: (f64, f64),
}

impl LinearModel {
    /// Build from the flux matrix B and non-conservative matrix C. The
    /// eigensystem of A = B + C is computed once; A must have real
    /// eigenvalues and a complete eigenbasis.
    pub fn new(b: Mat, c: Mat) -> Result<Self> {
        assert_eq!(b.n, c.n);
        let n = b.n;
        let mut a = b;
        a.add_scaled(&c, 1.0);
        let lam = eigenvalues_real(&a).ok_or_else(|| SolverError::EigenFailure {
            state: vec![],
        })?;
        let mut right = Mat::zeros(n);
        for k in 0..n {
            let v = eigvec(&a, lam[k], k).ok_or_else(|| SolverError::EigenFailure { state: vec![] })?;
            for i in 0..n {
                right[(i, k)] = v[i];
            }
        }
        let left = invert(&right).ok_or_else(|| SolverError::EigenFailure { state: vec![] })?;
        let mut eig = EigSet::new(n);
        eig.lambda = lam;
        eig.left = left;
        eig.right = right;
        let lo = lam[..n].iter().fold(f64::INFINITY, |m, &v| m.min(v));
        let hi = lam[..n].iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        Ok(LinearModel { n, b, c, eig, bounds: (lo, hi) })
    }

    /// Scalar advection with speed `a` carried in the flux.
    pub fn advection(a: f64) -> Self {
        let mut b = Mat::zeros(1);
        b[(0, 0)] = a;
        LinearModel::new(b, Mat::zeros(1)).unwrap()
    }

    pub fn a_matrix(&self) -> Mat {
        let mut a = self.b;
        a.add_scaled(&self.c, 1.0);
        a
    }

    pub fn b_matrix(&self) -> &Mat {
        &self.b
    }

    pub fn c_matrix(&self) -> &Mat {
        &self.c
    }
}

/// Inverse iteration for the k-th eigenvector; the seed varies with k so
/// repeated eigenvalues still produce independent vectors in generic
/// cases.
fn eigvec(a: &Mat, lambda: f64, k: usize) -> Option<[f64; MAX_VARS]> {
    let n = a.n;
    let scale = a.norm_inf().max(1.0);
    let mut shifted = *a;
    for i in 0..n {
        shifted[(i, i)] -= lambda + (1e-9 + 1e-11 * k as f64) * scale;
    }
    let lu = Lu::factor(&shifted);
    if lu.singular {
        return None;
    }
    let mut v = [0.0; MAX_VARS];
    for (i, t) in v.iter_mut().enumerate().take(n) {
        *t = 1.0 + ((i + 2 * k + 1) as f64).sin();
    }
    let mut next = [0.0; MAX_VARS];
    for _ in 0..4 {
        lu.solve(&v[..n], &mut next[..n]);
        let norm = next[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        for i in 0..n {
            v[i] = next[i] / norm;
        }
    }
    let mut av = [0.0; MAX_VARS];
    a.matvec(&v[..n], &mut av[..n]);
    let res = (0..n).map(|i| (av[i] - lambda * v[i]).abs()).fold(0.0f64, f64::max);
    if res > 1e-7 * scale {
        return None;
    }
    Some(v)
}

impl SystemModel for LinearModel {
    fn nvar(&self) -> usize {
        self.n
    }
    fn ndim(&self) -> usize {
        1
    }
    fn name(&self) -> &'static str {
        "linear"
    }
    fn var_names(&self) -> Vec<&'static str> {
        ["q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8"][..self.n].to_vec()
    }

    fn flux_prim(&self, w: &[f64], _dir: Dir, out: &mut [f64]) {
        self.b.matvec(w, out);
    }

    fn has_ncp(&self) -> bool {
        self.c.max_abs() > 0.0
    }

    fn ncp_matrix(&self, _w: &[f64], _dir: Dir, c: &mut Mat) {
        *c = self.c;
    }

    fn ncp_affine(&self) -> bool {
        true
    }

    fn flux_jacobian(&self, _w: &[f64], _dir: Dir, b: &mut Mat) {
        *b = self.b;
    }

    fn wavespeed_bounds(&self, _w: &[f64], _dir: Dir) -> Result<(f64, f64)> {
        Ok(self.bounds)
    }

    fn ld_eigensystem(&self, _w: &[f64], _dir: Dir, out: &mut LdSet) {
        // constant matrix: every field is linearly degenerate
        for k in 0..self.n {
            let mut pair = LdPair {
                lambda: self.eig.lambda[k],
                l: [0.0; MAX_VARS],
                r: [0.0; MAX_VARS],
            };
            for i in 0..self.n {
                pair.l[i] = self.eig.left[(k, i)];
                pair.r[i] = self.eig.right[(i, k)];
            }
            out.push(pair);
        }
    }

    fn full_eigensystem(&self, _w: &[f64], _dir: Dir, out: &mut EigSet) -> Result<()> {
        *out = self.eig;
        Ok(())
    }

    fn prim_from_cons(&self, u: &[f64], w: &mut [f64]) -> Result<u32> {
        for &v in u.iter().take(self.n) {
            if !v.is_finite() {
                return Err(SolverError::Inadmissible { i: -1, j: -1, what: "linear state", value: v });
            }
        }
        w[..self.n].copy_from_slice(&u[..self.n]);
        Ok(0)
    }

    fn cons_from_prim(&self, w: &[f64], u: &mut [f64]) {
        u[..self.n].copy_from_slice(&w[..self.n]);
    }

    fn velocity_slots(&self, _dir: Dir) -> &'static [usize] {
        &[]
    }

    fn mass_slots(&self) -> &'static [usize] {
        &[]
    }

    fn pressure_like(&self, _w: &[f64]) -> f64 {
        1.0
    }

    fn floors(&self) -> Floors {
        Floors::default()
    }
}
