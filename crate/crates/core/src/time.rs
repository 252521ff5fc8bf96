//! Time integrators: SSP-RK3, the five-stage fourth-order SSP scheme used
//! by high-order convergence studies, and the IMEX-SSP3(4,3,3) scheme for
//! stiff relaxation sources. Operators work on flattened state vectors;
//! the stiff source acts blockwise (zone-local), so the implicit stages
//! reduce to small Newton solves per block.

use crate::error::{Result, SolverError};
use crate::linalg::{Lu, Mat};
use crate::MAX_VARS;

/// IMEX-SSP3(4,3,3) coefficients.
pub const IMEX_ALPHA: f64 = 0.24169426078821;
pub const IMEX_BETA: f64 = 0.06042356519705;
pub const IMEX_ETA: f64 = 0.12915286960590;

/// Zone-local stiff source with an analytic Jacobian.
pub trait StiffOp {
    /// State entries per block.
    fn block(&self) -> usize;
    fn source(&self, u: &[f64], out: &mut [f64]);
    fn jacobian(&self, u: &[f64], out: &mut Mat);
}

pub type ResidualOp<'a> = dyn FnMut(&[f64], &mut [f64]) -> Result<()> + 'a;

/// Classical three-stage third-order SSP Runge-Kutta step.
pub fn ssprk3_step(u0: &[f64], l: &mut ResidualOp, dt: f64) -> Result<Vec<f64>> {
    let n = u0.len();
    let mut k = vec![0.0; n];
    l(u0, &mut k)?;
    let mut u1 = vec![0.0; n];
    for i in 0..n {
        u1[i] = u0[i] + dt * k[i];
    }
    l(&u1, &mut k)?;
    let mut u2 = vec![0.0; n];
    for i in 0..n {
        u2[i] = 0.75 * u0[i] + 0.25 * (u1[i] + dt * k[i]);
    }
    l(&u2, &mut k)?;
    let mut out = vec![0.0; n];
    for i in 0..n {
        out[i] = (u0[i] + 2.0 * (u2[i] + dt * k[i])) / 3.0;
    }
    Ok(out)
}

/// Five-stage fourth-order SSP Runge-Kutta step (the optimal SSPRK(5,4)
/// coefficients).
pub fn ssprk4_step(u0: &[f64], l: &mut ResidualOp, dt: f64) -> Result<Vec<f64>> {
    let n = u0.len();
    let mut k = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut u3 = vec![0.0; n];
    let mut u4 = vec![0.0; n];
    let mut k3 = vec![0.0; n];

    l(u0, &mut k)?;
    for i in 0..n {
        u1[i] = u0[i] + 0.391752226571890 * dt * k[i];
    }
    l(&u1, &mut k)?;
    for i in 0..n {
        u2[i] = 0.444370493651235 * u0[i] + 0.555629506348765 * u1[i]
            + 0.368410593050371 * dt * k[i];
    }
    l(&u2, &mut k)?;
    for i in 0..n {
        u3[i] = 0.620101851488403 * u0[i] + 0.379898148511597 * u2[i]
            + 0.251891774271694 * dt * k[i];
    }
    l(&u3, &mut k3)?;
    for i in 0..n {
        u4[i] = 0.178079954393132 * u0[i] + 0.821920045606868 * u3[i]
            + 0.544974750228521 * dt * k3[i];
    }
    l(&u4, &mut k)?;
    // the published convex weights sum to one only within their printed
    // precision; renormalizing the last keeps the step exactly consistent
    let b2 = 0.517231671970585;
    let b3 = 0.096059710526147;
    let b4 = 1.0 - b2 - b3;
    let mut out = vec![0.0; n];
    for i in 0..n {
        out[i] = b2 * u2[i]
            + b3 * u3[i]
            + 0.063692468666290 * dt * k3[i]
            + b4 * u4[i]
            + 0.226007483236906 * dt * k[i];
    }
    Ok(out)
}

/// Solve U = base + c S(U) blockwise by Newton iteration with the
/// analytic source Jacobian.
fn implicit_solve<S: StiffOp>(
    base: &[f64],
    stiff: &S,
    c: f64,
    stage: usize,
    out: &mut [f64],
) -> Result<()> {
    let nb = stiff.block();
    out.copy_from_slice(base);
    let mut s = [0.0; MAX_VARS];
    let mut jac = Mat::zeros(nb);
    let mut g = [0.0; MAX_VARS];
    let mut dx = [0.0; MAX_VARS];
    for (ub, bb) in out.chunks_mut(nb).zip(base.chunks(nb)) {
        let mut converged = false;
        let mut residual = 0.0f64;
        for _ in 0..50 {
            stiff.source(ub, &mut s[..nb]);
            let mut scale = 1.0f64;
            residual = 0.0;
            for i in 0..nb {
                g[i] = ub[i] - bb[i] - c * s[i];
                residual = residual.max(g[i].abs());
                scale = scale.max(ub[i].abs());
            }
            if residual <= 1e-12 * scale {
                converged = true;
                break;
            }
            stiff.jacobian(ub, &mut jac);
            jac.scale(-c);
            for i in 0..nb {
                jac[(i, i)] += 1.0;
            }
            let lu = Lu::factor(&jac);
            if lu.singular {
                return Err(SolverError::NewtonNonConvergence { stage, residual });
            }
            lu.solve(&g[..nb], &mut dx[..nb]);
            let mut step = 0.0f64;
            for i in 0..nb {
                ub[i] -= dx[i];
                step = step.max(dx[i].abs());
            }
            // under severe stiffness the residual floor is set by the
            // state resolution; a converged Newton step is the stop rule
            if step <= 1e-12 * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SolverError::NewtonNonConvergence { stage, residual });
        }
    }
    Ok(())
}

/// IMEX-SSP3(4,3,3) step: implicit stages handle the stiff source,
/// explicit stages the transport operator. Without a stiff source the
/// scheme reproduces the SSP-RK3 trajectory.
pub fn imex_step<S: StiffOp>(
    u0: &[f64],
    l: &mut ResidualOp,
    stiff: Option<&S>,
    dt: f64,
) -> Result<Vec<f64>> {
    let n = u0.len();
    let a = IMEX_ALPHA;
    let mut base = vec![0.0; n];
    let mut stage = vec![0.0; n];
    let mut s1 = vec![0.0; n];
    let mut s2 = vec![0.0; n];
    let mut s3 = vec![0.0; n];
    let mut s4 = vec![0.0; n];
    let mut l2 = vec![0.0; n];
    let mut l3 = vec![0.0; n];
    let mut l4 = vec![0.0; n];

    let eval_source = |st: Option<&S>, u: &[f64], out: &mut [f64]| {
        if let Some(st) = st {
            let nb = st.block();
            for (ub, ob) in u.chunks(nb).zip(out.chunks_mut(nb)) {
                st.source(ub, ob);
            }
        } else {
            out.fill(0.0);
        }
    };
    let solve = |st: Option<&S>, base: &[f64], stage_no: usize, out: &mut [f64]| -> Result<()> {
        if let Some(st) = st {
            implicit_solve(base, st, a * dt, stage_no, out)
        } else {
            out.copy_from_slice(base);
            Ok(())
        }
    };

    // U1 = U^n + a dt S(U1)
    solve(stiff, u0, 1, &mut stage)?;
    eval_source(stiff, &stage, &mut s1);
    // U2 = U^n - a dt S1 + a dt S(U2)
    for i in 0..n {
        base[i] = u0[i] - a * dt * s1[i];
    }
    solve(stiff, &base, 2, &mut stage)?;
    eval_source(stiff, &stage, &mut s2);
    l(&stage, &mut l2)?;
    // U3 = U^n + dt L2 + (1-a) dt S2 + a dt S(U3)
    for i in 0..n {
        base[i] = u0[i] + dt * l2[i] + (1.0 - a) * dt * s2[i];
    }
    solve(stiff, &base, 3, &mut stage)?;
    eval_source(stiff, &stage, &mut s3);
    l(&stage, &mut l3)?;
    // U4 = U^n + dt/4 (L2 + L3) + b dt S1 + e dt S2
    //      + (1/2 - b - e - a) dt S3 + a dt S(U4)
    let w3 = 0.5 - IMEX_BETA - IMEX_ETA - a;
    for i in 0..n {
        base[i] = u0[i]
            + 0.25 * dt * (l2[i] + l3[i])
            + IMEX_BETA * dt * s1[i]
            + IMEX_ETA * dt * s2[i]
            + w3 * dt * s3[i];
    }
    solve(stiff, &base, 4, &mut stage)?;
    eval_source(stiff, &stage, &mut s4);
    l(&stage, &mut l4)?;

    let mut out = vec![0.0; n];
    for i in 0..n {
        out[i] = u0[i]
            + dt * (l2[i] / 6.0 + l3[i] / 6.0 + 2.0 * l4[i] / 3.0)
            + dt * (s2[i] / 6.0 + s3[i] / 6.0 + 2.0 * s4[i] / 3.0);
    }
    Ok(out)
}
