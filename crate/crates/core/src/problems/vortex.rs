//! Analytic vortex initial conditions. Each vortex is an exact steady
//! state of the polar-form equations, superposed with a uniform advection
//! velocity; after a full period on a periodic domain the exact solution
//! is the initial condition again.

use crate::{State, MAX_VARS};

/// Isentropic Euler vortex advected diagonally.
#[derive(Clone, Copy, Debug)]
pub struct EulerVortex {
    pub gamma: f64,
    pub beta: f64,
    pub mean: (f64, f64),
    pub center: (f64, f64),
}

impl EulerVortex {
    pub fn standard() -> Self {
        EulerVortex { gamma: 1.4, beta: 5.0, mean: (1.0, 1.0), center: (0.0, 0.0) }
    }

    pub fn state(&self, x: f64, y: f64) -> State {
        let g = self.gamma;
        let (xc, yc) = self.center;
        let r2 = (x - xc) * (x - xc) + (y - yc) * (y - yc);
        let f = self.beta / (2.0 * std::f64::consts::PI) * (0.5 * (1.0 - r2)).exp();
        let t = 1.0
            - (g - 1.0) * self.beta * self.beta
                / (8.0 * g * std::f64::consts::PI * std::f64::consts::PI)
                * (1.0 - r2).exp();
        let rho = t.powf(1.0 / (g - 1.0));
        let mut w = [0.0; MAX_VARS];
        w[0] = rho;
        w[1] = self.mean.0 - f * (y - yc);
        w[2] = self.mean.1 + f * (x - xc);
        w[3] = rho.powf(g);
        w
    }
}

/// Two-phase (Baer-Nunziato) vortex: densities are uniform per phase, the
/// pressures and solid fraction carry Gaussian-type profiles and the
/// angular velocities solve the radial momentum balance algebraically.
#[derive(Clone, Copy, Debug)]
pub struct BnVortex {
    pub r_s: f64,
    pub p10: f64,
    pub p20: f64,
    pub s1: f64,
    pub s2: f64,
    pub mean: (f64, f64),
    pub center: (f64, f64),
}

impl BnVortex {
    /// The accuracy-study configuration.
    pub fn standard() -> Self {
        BnVortex {
            r_s: 1.0,
            p10: 1.0,
            p20: 1.5,
            s1: 1.5,
            s2: 1.4,
            mean: (2.0, 2.0),
            center: (0.0, 0.0),
        }
    }

    pub fn phi1(&self, rp: f64) -> f64 {
        1.0 / 3.0 + 0.5 / (2.0 * std::f64::consts::PI).sqrt() * (-0.5 * rp * rp).exp()
    }

    pub fn pressure(&self, rp: f64, k: usize) -> f64 {
        let (p0, s) = if k == 0 { (self.p10, self.s1) } else { (self.p20, self.s2) };
        p0 * (1.0 - 0.25 * (1.0 - rp * rp / (s * s)).exp())
    }

    /// Angular velocities of both phases at radius r.
    pub fn angular(&self, r: f64) -> (f64, f64) {
        let rp = r / self.r_s;
        let (rho1, rho2) = (1.0, 2.0);
        let phi1 = self.phi1(rp);
        let p1 = self.pressure(rp, 0);
        let p2 = self.pressure(rp, 1);
        let a1 = (self.p10 - p1) * 2.0 * rp / (self.r_s * self.s1 * self.s1);
        let a2 = (self.p20 - p2) * 2.0 * rp / (self.r_s * self.s2 * self.s2);
        let b1 = rp / self.r_s * (1.0 / 3.0 - phi1);
        let v1sq = r / (phi1 * rho1) * (phi1 * a1 + (p1 - p2) * b1);
        let v2sq = r / rho2 * a2;
        (v1sq.max(0.0).sqrt(), v2sq.max(0.0).sqrt())
    }

    /// Primitive 2D state (rho1, u1, v1, p1, rho2, u2, v2, p2, phi1).
    pub fn state(&self, x: f64, y: f64) -> State {
        let (xc, yc) = self.center;
        let (dx, dy) = (x - xc, y - yc);
        let r = (dx * dx + dy * dy).sqrt();
        let rp = r / self.r_s;
        let (v1t, v2t) = self.angular(r);
        let (sin_t, cos_t) = if r > 0.0 { (dy / r, dx / r) } else { (0.0, 1.0) };
        let mut w = [0.0; MAX_VARS];
        w[0] = 1.0;
        w[1] = self.mean.0 - v1t * sin_t;
        w[2] = self.mean.1 + v1t * cos_t;
        w[3] = self.pressure(rp, 0);
        w[4] = 2.0;
        w[5] = self.mean.0 - v2t * sin_t;
        w[6] = self.mean.1 + v2t * cos_t;
        w[7] = self.pressure(rp, 1);
        w[8] = self.phi1(rp);
        w
    }

    /// Validate that no angular-velocity radicand is negative over the
    /// sampled radius range.
    pub fn validate(&self, r_max: f64) -> bool {
        let n = 400;
        for i in 0..=n {
            let r = r_max * i as f64 / n as f64;
            let rp = r / self.r_s;
            let phi1 = self.phi1(rp);
            let p1 = self.pressure(rp, 0);
            let p2 = self.pressure(rp, 1);
            let a1 = (self.p10 - p1) * 2.0 * rp / (self.r_s * self.s1 * self.s1);
            let a2 = (self.p20 - p2) * 2.0 * rp / (self.r_s * self.s2 * self.s2);
            let b1 = rp / self.r_s * (1.0 / 3.0 - phi1);
            if r / (phi1 * 1.0) * (phi1 * a1 + (p1 - p2) * b1) < -1e-14 || r / 2.0 * a2 < -1e-14 {
                return false;
            }
        }
        true
    }
}

/// Vortex of the layered systems. The height profiles are shared between
/// the debris-flow and two-layer variants; the angular velocities differ:
/// both two-layer velocities and the debris fluid velocity are prescribed
/// exponentials, while the debris solid velocity balances the solid
/// momentum equation through a radical expression.
#[derive(Clone, Copy, Debug)]
pub struct LayeredVortex {
    pub g: f64,
    pub rho: f64,
    pub s1: f64,
    pub s2: f64,
    pub v10: f64,
    pub v20: f64,
    pub h10: f64,
    pub h20: f64,
    pub r_s: f64,
    pub mean: (f64, f64),
    pub center: (f64, f64),
    pub debris: bool,
}

impl LayeredVortex {
    pub fn standard(debris: bool) -> Self {
        LayeredVortex {
            g: 10.0,
            rho: 0.9,
            s1: 0.5,
            s2: 1.0,
            v10: 0.75,
            v20: 0.1,
            h10: 1.0,
            h20: 1.0,
            r_s: 1.0,
            mean: (5.0, 5.0),
            center: (0.0, 0.0),
            debris,
        }
    }

    /// Heights (upper/solid, lower/fluid) at scaled radius r' = r / r_s.
    pub fn heights(&self, rp: f64) -> (f64, f64) {
        let (g, rho, s1, s2) = (self.g, self.rho, self.s1, self.s2);
        let e1 = (2.0 * s1).exp() * (1.0 - (-2.0 * s1 * rp * rp).exp());
        let e2 = (2.0 * s2).exp() * (1.0 - (-2.0 * s2 * rp * rp).exp());
        let den = 4.0 * g * (1.0 - rho) * s1 * s2;
        let h1 = (self.v10 * self.v10 * s2 * e1 - self.v20 * self.v20 * s1 * e2
            + 4.0 * self.h10 * g * s1 * s2 * (1.0 - rho))
            / den;
        let h2 = (self.v20 * self.v20 * s1 * e2 - rho * self.v10 * self.v10 * s2 * e1
            + 4.0 * self.h20 * g * s1 * s2 * (1.0 - rho))
            / den;
        (h1, h2)
    }

    /// d/dr' of the heights (closed form).
    pub fn height_derivs(&self, rp: f64) -> (f64, f64) {
        let (g, rho) = (self.g, self.rho);
        let e1 = rp * (2.0 * self.s1 * (1.0 - rp * rp)).exp();
        let e2 = rp * (2.0 * self.s2 * (1.0 - rp * rp)).exp();
        let dh1 = (self.v10 * self.v10 * e1 - self.v20 * self.v20 * e2) / (g * (1.0 - rho));
        let dh2 = (self.v20 * self.v20 * e2 - rho * self.v10 * self.v10 * e1) / (g * (1.0 - rho));
        (dh1, dh2)
    }

    /// Angular velocities (upper/solid, lower/fluid) at radius r.
    pub fn angular(&self, r: f64) -> (f64, f64) {
        let rp = r / self.r_s;
        let vexp1 = rp * self.v10 * (self.s1 * (1.0 - rp * rp)).exp();
        let vexp2 = rp * self.v20 * (self.s2 * (1.0 - rp * rp)).exp();
        if !self.debris {
            return (vexp1, vexp2);
        }
        // debris: fluid takes the prescribed profile, the solid balances
        // its own radial momentum equation
        let (hs, hf) = self.heights(rp);
        let (dhs, dhf) = self.height_derivs(rp);
        let vs_sq = rp * self.g * (dhs + 0.5 * (1.0 + self.rho) * dhf)
            + rp * 0.5 * (1.0 - self.rho) * self.g * (hf / hs) * dhs;
        (vs_sq.max(0.0).sqrt(), vexp1)
    }

    /// Primitive state (h1, u1, v1, h2, u2, v2, b) with b = 0.
    pub fn state(&self, x: f64, y: f64) -> State {
        let (xc, yc) = self.center;
        let (dx, dy) = (x - xc, y - yc);
        let r = (dx * dx + dy * dy).sqrt();
        let rp = r / self.r_s;
        let (h1, h2) = self.heights(rp);
        let (v1t, v2t) = self.angular(r);
        let (sin_t, cos_t) = if r > 0.0 { (dy / r, dx / r) } else { (0.0, 1.0) };
        let mut w = [0.0; MAX_VARS];
        w[0] = h1;
        w[1] = self.mean.0 - v1t * sin_t;
        w[2] = self.mean.1 + v1t * cos_t;
        w[3] = h2;
        w[4] = self.mean.0 - v2t * sin_t;
        w[5] = self.mean.1 + v2t * cos_t;
        w[6] = 0.0;
        w
    }

    pub fn validate(&self, r_max: f64) -> bool {
        let n = 400;
        for i in 0..=n {
            let r = r_max * i as f64 / n as f64;
            let rp = r / self.r_s;
            let (hs, hf) = self.heights(rp);
            if hs <= 0.0 || hf <= 0.0 {
                return false;
            }
            if self.debris {
                let (dhs, dhf) = self.height_derivs(rp);
                let vs_sq = rp * self.g * (dhs + 0.5 * (1.0 + self.rho) * dhf)
                    + rp * 0.5 * (1.0 - self.rho) * self.g * (hf / hs) * dhs;
                if vs_sq < -1e-12 {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bn_vortex_center_and_far_field() {
        let v = BnVortex::standard();
        let w0 = v.state(0.0, 0.0);
        // phi1(0) = 1/3 + 1/(2 sqrt(2 pi))
        assert!((w0[8] - 0.532805).abs() < 1e-5);
        assert!((w0[1] - 2.0).abs() < 1e-14 && (w0[2] - 2.0).abs() < 1e-14);
        let wf = v.state(80.0, 0.0);
        assert!((wf[3] - 1.0).abs() < 1e-12);
        assert!((wf[7] - 1.5).abs() < 1e-12);
        assert!((wf[8] - 1.0 / 3.0).abs() < 1e-12);
        assert!((wf[1] - 2.0).abs() < 1e-10);
        assert!(v.validate(10.0));
    }

    #[test]
    fn bn_vortex_radial_momentum_balance() {
        // d(phi1 p1)/dr = p2 dphi1/dr + v1^2 phi1 rho1 / r, checked by
        // central differences in r
        let v = BnVortex::standard();
        for r in [0.3, 0.7, 1.1, 1.9, 2.7] {
            let h = 1e-6;
            let val = |r: f64| {
                let rp = r / v.r_s;
                (v.phi1(rp) * v.pressure(rp, 0), v.phi1(rp), v.pressure(rp, 1))
            };
            let (fp, _, _) = val(r + h);
            let (fm, _, _) = val(r - h);
            let dphi = (v.phi1((r + h) / v.r_s) - v.phi1((r - h) / v.r_s)) / (2.0 * h);
            let (_, phi, p2) = val(r);
            let (v1t, v2t) = v.angular(r);
            let lhs = (fp - fm) / (2.0 * h);
            let rhs = p2 * dphi + v1t * v1t * phi * 1.0 / r;
            assert!((lhs - rhs).abs() < 1e-7, "r = {r}: {lhs} vs {rhs}");
            // phase 2: dp2/dr = v2^2 rho2 / r
            let dp2 = (v.pressure((r + h) / v.r_s, 1) - v.pressure((r - h) / v.r_s, 1)) / (2.0 * h);
            assert!((dp2 - v2t * v2t * 2.0 / r).abs() < 1e-7);
        }
    }

    #[test]
    fn layered_vortex_matches_shock_table_far_field() {
        // the r -> infinity heights reproduce the pre-shock states of the
        // shock-vortex tables
        let v = LayeredVortex::standard(false);
        let (h1, h2) = v.heights(50.0);
        assert!((h1 - 1.746044).abs() < 5e-6, "h1 {h1}");
        assert!((h2 - 0.330408).abs() < 5e-6, "h2 {h2}");
        // v2 at r' = 1 equals v20
        let (_, v2t) = v.angular(1.0);
        assert!((v2t - 0.1).abs() < 1e-14);
        assert!(v.validate(10.0));
        assert!(LayeredVortex::standard(true).validate(10.0));
    }

    #[test]
    fn layered_height_derivatives_and_momentum_balance() {
        for debris in [false, true] {
            let v = LayeredVortex::standard(debris);
            for rp in [0.2, 0.6, 1.0, 1.7, 2.5] {
                let h = 1e-6;
                let (h1p, h2p) = v.heights(rp + h);
                let (h1m, h2m) = v.heights(rp - h);
                let (dh1, dh2) = v.height_derivs(rp);
                assert!(((h1p - h1m) / (2.0 * h) - dh1).abs() < 1e-8);
                assert!(((h2p - h2m) / (2.0 * h) - dh2).abs() < 1e-8);
                // the prescribed angular velocities satisfy the radial
                // balances g d(h1+h2)/dr' = v1t^2 / r' and
                // g d(h2 + rho h1)/dr' = v2t^2 / r'
                let r = rp * v.r_s;
                let (v1t, v2t) = if debris {
                    let (_, vf) = v.angular(r);
                    // fluid balance in the debris model pairs with v10
                    (vf, rp * v.v20 * (v.s2 * (1.0 - rp * rp)).exp())
                } else {
                    v.angular(r)
                };
                assert!((v.g * (dh1 + dh2) - v1t * v1t / rp).abs() < 1e-10);
                assert!((v.g * (dh2 + v.rho * dh1) - v2t * v2t / rp).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn debris_solid_velocity_balances_solid_momentum() {
        // cross-check the radical expression against a finite-difference
        // evaluation of the solid radial momentum balance
        let v = LayeredVortex::standard(true);
        for rp in [0.3, 0.8, 1.4, 2.2] {
            let r = rp * v.r_s;
            let (vs, _) = v.angular(r);
            let h = 1e-6;
            let flux = |rp: f64| {
                let (hs, hf) = v.heights(rp);
                v.g * v.rho * hs * hs / 2.0 + v.g * (1.0 - v.rho) * hs * (hf + hs) / 2.0
            };
            let (hs, hf) = v.heights(rp);
            let (dhs_, dhf_) = v.height_derivs(rp);
            let _ = (dhs_, dhf_);
            let dflux = (flux(rp + h) - flux(rp - h)) / (2.0 * h);
            let dhf = (v.heights(rp + h).1 - v.heights(rp - h).1) / (2.0 * h);
            // d(flux)/dr' + g rho hs dhf/dr' = hs vs^2 / r'
            let lhs = dflux + v.g * v.rho * hs * dhf;
            let rhs = hs * vs * vs / rp;
            assert!((lhs - rhs).abs() < 1e-7 * (1.0 + rhs.abs()), "rp {rp}: {lhs} vs {rhs}");
            let _ = hf;
        }
    }

    #[test]
    fn euler_vortex_far_field() {
        let v = EulerVortex::standard();
        let w = v.state(30.0, 0.0);
        assert!((w[0] - 1.0).abs() < 1e-12);
        assert!((w[1] - 1.0).abs() < 1e-12);
        assert!((w[3] - 1.0).abs() < 1e-12);
    }
}
