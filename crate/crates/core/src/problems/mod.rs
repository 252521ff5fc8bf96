//! Executable catalog of the test problems: Riemann problems, smooth
//! vortices for accuracy studies, well-balancing setups, shock-bubble and
//! shock-vortex interactions and the stiff relaxation cases. Each entry
//! carries the exact published numbers together with sensible scheme
//! defaults.

mod vortex;

pub use vortex::{BnVortex, EulerVortex, LayeredVortex};

use crate::error::{Result, SolverError};
use crate::mesh::{BoundaryKind, BoundarySpec};
use crate::scheme::ReconBasis;
use crate::systems::{
    BaerNunziatoParams, DebrisFlowParams, EulerParams, Model, TwoLayerSWParams,
};
use crate::{State, MAX_VARS};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    SspRk3,
    SspRk4,
    Imex,
}

pub type IcFn = Arc<dyn Fn(f64, f64) -> State + Send + Sync>;
pub type ExactFn = Arc<dyn Fn(f64, f64, f64) -> State + Send + Sync>;

/// A fully specified test problem. `ic` and `exact` produce primitive
/// states.
#[derive(Clone)]
pub struct ProblemSpec {
    pub id: &'static str,
    pub describe: &'static str,
    pub model: Model,
    pub ndim: usize,
    pub domain: (f64, f64, f64, f64),
    pub default_mesh: (usize, usize),
    pub bc: BoundarySpec,
    pub t_end: f64,
    pub cfl: f64,
    pub ic: IcFn,
    pub exact: Option<ExactFn>,
    /// Primitive slot reported by the error norms, with its name.
    pub error_var: usize,
    pub error_var_name: &'static str,
    /// Smallest scheme order at which the vortex domain and stopping time
    /// double (0: never).
    pub double_min_order: usize,
    pub antidiffusion: bool,
    pub basis: ReconBasis,
    pub integrator: Integrator,
    pub notes: &'static str,
}

impl ProblemSpec {
    /// Domain, mesh and stopping time adjusted for a given scheme order
    /// (vortex problems double their domain for the high orders).
    pub fn sized_for_order(&self, order: usize) -> ProblemSpec {
        let mut p = self.clone();
        if self.double_min_order > 0 && order >= self.double_min_order {
            p.domain = (
                2.0 * self.domain.0,
                2.0 * self.domain.1,
                2.0 * self.domain.2,
                2.0 * self.domain.3,
            );
            p.t_end = 2.0 * self.t_end;
        }
        p
    }
}

pub fn problem_ids() -> Vec<&'static str> {
    vec![
        "euler_vortex",
        "euler_blast",
        "bn_vortex",
        "bn_abgrall",
        "bn_rp1",
        "bn_rp2",
        "bn_rp3",
        "bn_rp4",
        "bn_rp5",
        "bn_rp6",
        "bn_stiff_rp1",
        "bn_stiff_2d",
        "bn_shock_bubble",
        "bn_shock_vortex",
        "debris_vortex",
        "debris_rp1",
        "debris_rp2",
        "debris_rp3",
        "debris_wellbalance",
        "debris_shock_bubble",
        "debris_shock_vortex",
        "tl_vortex",
        "tl_rp1",
        "tl_rp2",
        "tl_rp3",
        "tl_wellbalance_small",
        "tl_wellbalance_large",
        "tl_shock_bubble",
        "tl_shock_vortex",
    ]
}

/// Build a catalog problem with its default mesh.
pub fn build_problem(id: &str) -> Result<ProblemSpec> {
    build_problem_sized(id, None)
}

fn unknown(id: &str) -> SolverError {
    SolverError::UnknownProblem(id.to_string(), problem_ids().join(", "))
}

fn prim(vals: &[f64]) -> State {
    let mut w = [0.0; MAX_VARS];
    w[..vals.len()].copy_from_slice(vals);
    w
}

/// Periodically advected exact solution built from the initial condition.
fn advected(ic: IcFn, domain: (f64, f64, f64, f64), mean: (f64, f64)) -> ExactFn {
    Arc::new(move |x, y, t| {
        let lx = domain.1 - domain.0;
        let ly = domain.3 - domain.2;
        let xs = domain.0 + (x - mean.0 * t - domain.0).rem_euclid(lx);
        let ys = domain.2 + (y - mean.1 * t - domain.2).rem_euclid(ly);
        ic(xs, ys)
    })
}

/// One-dimensional two-state initial condition.
fn riemann_ic(left: State, right: State, xc: f64) -> IcFn {
    Arc::new(move |x, _| if x <= xc { left } else { right })
}

/// Well-balancing setups; epsilon is the perturbation amplitude (0 gives
/// the exact lake-at-rest state).
pub fn wellbalance_ic(two_layer: bool, epsilon: f64) -> ProblemSpec {
    assert!(epsilon >= 0.0);
    if !two_layer {
        // debris: eta = h_s + h_f + b = 1, phi = h_s / (h_s + h_f) = 0.6
        let ic: IcFn = Arc::new(move |x, _| {
            let b = if (x - 0.5).abs() <= 0.1 {
                0.25 * ((10.0 * std::f64::consts::PI * (x - 0.5)).cos() + 1.0)
            } else {
                0.0
            };
            let (mut eta, mut phi) = (1.0, 0.6);
            if (-0.6..=-0.5).contains(&x) {
                eta += epsilon;
                phi -= epsilon;
            }
            let h = eta - b;
            prim(&[phi * h, 0.0, 0.0, (1.0 - phi) * h, 0.0, 0.0, b])
        });
        ProblemSpec {
            id: "debris_wellbalance",
            describe: "perturbed lake-at-rest over a cosine bump (debris flow)",
            model: Model::debris(DebrisFlowParams { g: 1.0, rho: 0.5 }),
            ndim: 1,
            domain: (-1.2, 1.2, 0.0, 1.0),
            default_mesh: (400, 1),
            bc: BoundarySpec::all(BoundaryKind::Outflow),
            t_end: 1.25,
            cfl: 0.8,
            ic,
            exact: None,
            error_var: 0,
            error_var_name: "h_s",
            double_min_order: 0,
            antidiffusion: true,
            basis: ReconBasis::Characteristic,
            integrator: Integrator::SspRk3,
            notes: "surface elevation eta must stay within a few epsilon of 1",
        }
    } else {
        // two-layer: eta2 = b + h2 = 0.65, eta = 1 (+ epsilon on a strip)
        let ic: IcFn = Arc::new(move |x, _| {
            let b = if (1.4..=1.6).contains(&x) {
                0.25 * ((10.0 * std::f64::consts::PI * (x - 1.5)).cos() + 1.0)
            } else {
                0.0
            };
            let eta = if (1.1..=1.2).contains(&x) { 1.0 + epsilon } else { 1.0 };
            let h2 = 0.65 - b;
            let h1 = eta - 0.65;
            prim(&[h1, 0.0, 0.0, h2, 0.0, 0.0, b])
        });
        ProblemSpec {
            id: "tl_wellbalance_small",
            describe: "perturbed lake-at-rest over a cosine bump (two-layer)",
            model: Model::two_layer(TwoLayerSWParams { g: 9.8, rho: 0.8 }),
            ndim: 1,
            domain: (0.0, 2.0, 0.0, 1.0),
            default_mesh: (400, 1),
            bc: BoundarySpec::all(BoundaryKind::Outflow),
            t_end: 0.2,
            cfl: 0.8,
            ic,
            exact: None,
            error_var: 0,
            error_var_name: "h1",
            double_min_order: 0,
            antidiffusion: true,
            basis: ReconBasis::Characteristic,
            integrator: Integrator::SspRk3,
            notes: "surface elevation eta must stay within a few epsilon of 1",
        }
    }
}

/// Build a catalog problem; shock-bubble bathymetry profiles depend on
/// the zone size, so mesh overrides enter here.
pub fn build_problem_sized(id: &str, mesh: Option<(usize, usize)>) -> Result<ProblemSpec> {
    let mut p = match id {
        "euler_vortex" => {
            let v = EulerVortex::standard();
            let ic: IcFn = Arc::new(move |x, y| v.state(x, y));
            let domain = (-5.0, 5.0, -5.0, 5.0);
            ProblemSpec {
                id: "euler_vortex",
                describe: "isentropic vortex advected diagonally (accuracy study)",
                model: Model::euler(EulerParams { gamma: 1.4 }, 2),
                ndim: 2,
                domain,
                default_mesh: (64, 64),
                bc: BoundarySpec::periodic(),
                t_end: 10.0,
                cfl: 0.3,
                ic: ic.clone(),
                exact: Some(advected(ic, domain, v.mean)),
                error_var: 0,
                error_var_name: "rho",
                double_min_order: 7,
                antidiffusion: true,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: "one advection period returns the initial condition",
            }
        }
        "bn_vortex" => {
            let v = BnVortex::standard();
            let ic: IcFn = Arc::new(move |x, y| v.state(x, y));
            let domain = (-5.0, 5.0, -5.0, 5.0);
            ProblemSpec {
                id: "bn_vortex",
                describe: "two-phase vortex advected diagonally (accuracy study)",
                model: Model::baer_nunziato(BaerNunziatoParams::inviscid(1.4, 0.0, 1.35, 0.0), 2),
                ndim: 2,
                domain,
                default_mesh: (32, 32),
                bc: BoundarySpec::periodic(),
                t_end: 5.0,
                cfl: 0.3,
                ic: ic.clone(),
                exact: Some(advected(ic, domain, v.mean)),
                error_var: 8,
                error_var_name: "phi1",
                double_min_order: 5,
                antidiffusion: true,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: "solid volume fraction is the reported variable",
            }
        }
        "debris_vortex" | "tl_vortex" => {
            let debris = id == "debris_vortex";
            let v = LayeredVortex::standard(debris);
            let ic: IcFn = Arc::new(move |x, y| v.state(x, y));
            let domain = (-5.0, 5.0, -5.0, 5.0);
            ProblemSpec {
                id: if debris { "debris_vortex" } else { "tl_vortex" },
                describe: if debris {
                    "debris-flow vortex advected diagonally (accuracy study)"
                } else {
                    "two-layer vortex advected diagonally (accuracy study)"
                },
                model: if debris {
                    Model::debris(DebrisFlowParams { g: 10.0, rho: 0.9 })
                } else {
                    Model::two_layer(TwoLayerSWParams { g: 10.0, rho: 0.9 })
                },
                ndim: 2,
                domain,
                default_mesh: (64, 64),
                bc: BoundarySpec::periodic(),
                t_end: 2.0,
                cfl: 0.3,
                ic: ic.clone(),
                exact: Some(advected(ic, domain, v.mean)),
                error_var: 0,
                error_var_name: if debris { "h_s" } else { "h1" },
                double_min_order: 5,
                antidiffusion: true,
                basis: ReconBasis::ComponentWise,
                integrator: Integrator::SspRk3,
                notes: "",
            }
        }
        "euler_blast" => {
            let ic: IcFn = Arc::new(|x, _| {
                let p = if x < -0.4 {
                    1000.0
                } else if x > 0.4 {
                    100.0
                } else {
                    0.01
                };
                prim(&[1.0, 0.0, p])
            });
            ProblemSpec {
                id: "euler_blast",
                describe: "interacting blast waves between reflecting walls",
                model: Model::euler(EulerParams { gamma: 1.4 }, 1),
                ndim: 1,
                domain: (-0.5, 0.5, 0.0, 1.0),
                default_mesh: (1000, 1),
                bc: BoundarySpec::all(BoundaryKind::Reflective),
                t_end: 0.038,
                cfl: 0.8,
                ic,
                exact: None,
                error_var: 0,
                error_var_name: "rho",
                double_min_order: 0,
                antidiffusion: true,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: "density profiles compared against a fine self-reference",
            }
        }
        "bn_abgrall" => {
            let ic: IcFn = Arc::new(|x, _| {
                if x <= 0.0 {
                    prim(&[800.0, 1.0, 1.0, 2.0, 1.0, 1.0, 0.99])
                } else {
                    prim(&[1000.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.01])
                }
            });
            ProblemSpec {
                id: "bn_abgrall",
                describe: "uniform-velocity uniform-pressure two-phase advection",
                model: Model::baer_nunziato(BaerNunziatoParams::inviscid(3.0, 100.0, 1.4, 0.0), 1),
                ndim: 1,
                domain: (-0.5, 0.5, 0.0, 1.0),
                default_mesh: (200, 1),
                bc: BoundarySpec::all(BoundaryKind::Outflow),
                t_end: 0.25,
                cfl: 0.8,
                ic,
                exact: None,
                error_var: 6,
                error_var_name: "phi1",
                double_min_order: 0,
                antidiffusion: true,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: "pressure and both velocities must stay at unity",
            }
        }
        "bn_rp1" | "bn_rp2" | "bn_rp3" | "bn_rp4" | "bn_rp5" | "bn_rp6" => {
            // (gamma1, pi1, gamma2, pi2), left, right (rho1 u1 p1 rho2 u2
            // p2 phi1), t_end
            let (eos, left, right, t_end): ((f64, f64, f64, f64), [f64; 7], [f64; 7], f64) =
                match id {
                    "bn_rp1" => (
                        (1.4, 0.0, 1.4, 0.0),
                        [1.0, 0.0, 1.0, 0.5, 0.0, 1.0, 0.4],
                        [2.0, 0.0, 2.0, 1.5, 0.0, 2.0, 0.8],
                        0.1,
                    ),
                    "bn_rp2" => (
                        (3.0, 100.0, 1.4, 0.0),
                        [800.0, 0.0, 500.0, 1.5, 0.0, 2.0, 0.4],
                        [1000.0, 0.0, 600.0, 1.0, 0.0, 1.0, 0.3],
                        0.1,
                    ),
                    "bn_rp3" => (
                        (1.4, 0.0, 1.4, 0.0),
                        [1.0, 0.9, 2.5, 1.0, 0.0, 1.0, 0.9],
                        [1.0, 0.0, 1.0, 1.2, 1.0, 2.0, 0.2],
                        0.1,
                    ),
                    "bn_rp4" => (
                        (3.0, 3400.0, 1.35, 0.0),
                        [1900.0, 0.0, 10.0, 2.0, 0.0, 3.0, 0.2],
                        [1950.0, 0.0, 1000.0, 1.0, 0.0, 1.0, 0.9],
                        0.15,
                    ),
                    "bn_rp5" => (
                        (1.4, 0.0, 1.4, 0.0),
                        [1.0, 0.0, 1.0, 0.2, 0.0, 0.3, 0.8],
                        [1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.3],
                        0.2,
                    ),
                    _ => (
                        (1.4, 0.0, 1.4, 0.0),
                        [0.2068, 1.4166, 0.0416, 0.5806, 1.5833, 1.375, 0.1],
                        [2.2263, 0.9366, 6.0, 0.4890, -0.70138, 0.986, 0.2],
                        0.1,
                    ),
                };
            let idstr: &'static str = match id {
                "bn_rp1" => "bn_rp1",
                "bn_rp2" => "bn_rp2",
                "bn_rp3" => "bn_rp3",
                "bn_rp4" => "bn_rp4",
                "bn_rp5" => "bn_rp5",
                _ => "bn_rp6",
            };
            ProblemSpec {
                id: idstr,
                describe: "two-phase Riemann problem",
                model: Model::baer_nunziato(
                    BaerNunziatoParams::inviscid(eos.0, eos.1, eos.2, eos.3),
                    1,
                ),
                ndim: 1,
                domain: (-0.5, 0.5, 0.0, 1.0),
                default_mesh: (200, 1),
                bc: BoundarySpec::all(BoundaryKind::Outflow),
                t_end,
                cfl: 0.8,
                ic: riemann_ic(prim(&left), prim(&right), 0.0),
                exact: None,
                error_var: 6,
                error_var_name: "phi1",
                double_min_order: 0,
                // the published runs kept the anti-diffusive term out of
                // play for this family
                antidiffusion: false,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: "reference: self-generated 2000-zone third-order run",
            }
        }
        "bn_stiff_rp1" => {
            let ic: IcFn = Arc::new(|x, _| {
                if x <= 0.0 {
                    prim(&[1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.99])
                } else {
                    prim(&[0.125, 0.0, 0.1, 0.125, 0.0, 0.1, 0.01])
                }
            });
            ProblemSpec {
                id: "bn_stiff_rp1",
                describe: "two-phase Riemann problem with stiff drag and pressure relaxation",
                model: Model::baer_nunziato(
                    BaerNunziatoParams {
                        gamma1: 1.4,
                        pi1: 0.0,
                        gamma2: 1.67,
                        pi2: 0.0,
                        lambda: 1e3,
                        mu: 1e2,
                    },
                    1,
                ),
                ndim: 1,
                domain: (-0.5, 0.5, 0.0, 1.0),
                default_mesh: (400, 1),
                bc: BoundarySpec::all(BoundaryKind::Outflow),
                t_end: 0.2,
                cfl: 0.8,
                ic,
                exact: None,
                error_var: 0,
                error_var_name: "rho1",
                double_min_order: 0,
                antidiffusion: false,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::Imex,
                notes: "drag 1e3, pressure relaxation 1e2",
            }
        }
        "bn_stiff_2d" => {
            let ic: IcFn = Arc::new(|x, y| {
                let hi = prim(&[2.0, 0.0, 0.0, 2.0, 1.5, 0.0, 0.0, 2.0, 0.8]);
                let lo = prim(&[1.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0, 1.0, 0.4]);
                // quadrants: RU and LD take the denser state
                if (x > 0.0) == (y > 0.0) {
                    hi
                } else {
                    lo
                }
            });
            ProblemSpec {
                id: "bn_stiff_2d",
                describe: "2D four-quadrant two-phase Riemann problem, severely stiff sources",
                model: Model::baer_nunziato(
                    BaerNunziatoParams {
                        gamma1: 1.4,
                        pi1: 0.0,
                        gamma2: 1.67,
                        pi2: 0.0,
                        lambda: 1e5,
                        mu: 1e2,
                    },
                    2,
                ),
                ndim: 2,
                domain: (-0.5, 0.5, -0.5, 0.5),
                default_mesh: (400, 400),
                bc: BoundarySpec::all(BoundaryKind::Outflow),
                t_end: 0.15,
                cfl: 0.4,
                ic,
                exact: None,
                error_var: 8,
                error_var_name: "phi1",
                double_min_order: 0,
                antidiffusion: false,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::Imex,
                notes: "drag 1e5, pressure relaxation 1e2",
            }
        }
        "debris_rp1" | "debris_rp2" | "debris_rp3" => {
            let (left, right, t_end): ([f64; 7], [f64; 7], f64) = match id {
                "debris_rp1" => (
                    [1.5, 0.0, 0.2, 0.5, 0.0, -0.5, 0.0],
                    [1.125, 0.0, -0.2, 0.375, 0.0, 0.5, 0.5],
                    1.0,
                ),
                "debris_rp2" => (
                    [2.1, 0.0, 0.0, 0.9, 0.0, 0.0, 0.0],
                    [0.8, 0.0, 0.0, 1.2, 0.0, 0.0, 0.0],
                    0.5,
                ),
                _ => (
                    [2.1, -1.4, 0.0, 0.9, 0.3, 0.0, 0.0],
                    [0.8, -0.9, 0.0, 1.2, 0.1, 0.0, 0.0],
                    0.5,
                ),
            };
            let idstr: &'static str = match id {
                "debris_rp1" => "debris_rp1",
                "debris_rp2" => "debris_rp2",
                _ => "debris_rp3",
            };
            ProblemSpec {
                id: idstr,
                describe: "debris-flow Riemann problem",
                model: Model::debris(DebrisFlowParams { g: 9.8, rho: 0.5 }),
                ndim: 1,
                domain: (-5.0, 5.0, 0.0, 1.0),
                default_mesh: (200, 1),
                bc: BoundarySpec::all(BoundaryKind::Outflow),
                t_end,
                cfl: 0.8,
                ic: riemann_ic(prim(&left), prim(&right), 0.0),
                exact: None,
                error_var: 0,
                error_var_name: "h_s",
                double_min_order: 0,
                antidiffusion: true,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: if id == "debris_rp1" {
                    "stationary triple jump in the linearly degenerate fields"
                } else {
                    ""
                },
            }
        }
        "tl_rp1" | "tl_rp2" | "tl_rp3" => {
            let (left, right, t_end): ([f64; 7], [f64; 7], f64) = match id {
                "tl_rp1" => (
                    [0.5, 0.0, 0.5, 0.8, 0.0, -0.2, 0.2],
                    [0.5, 0.0, -0.5, 0.2, 0.0, 0.2, 0.8],
                    1.0,
                ),
                "tl_rp2" => (
                    [0.4, 0.0, 0.0, 0.6, 0.0, 0.0, 0.0],
                    [0.6, 0.0, 0.0, 0.4, 0.0, 0.0, 0.0],
                    1.25,
                ),
                _ => (
                    [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
                    [0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5],
                    1.0,
                ),
            };
            let idstr: &'static str = match id {
                "tl_rp1" => "tl_rp1",
                "tl_rp2" => "tl_rp2",
                _ => "tl_rp3",
            };
            ProblemSpec {
                id: idstr,
                describe: "two-layer shallow water Riemann problem",
                model: Model::two_layer(TwoLayerSWParams { g: 9.8, rho: 0.8 }),
                ndim: 1,
                domain: (-5.0, 5.0, 0.0, 1.0),
                default_mesh: (200, 1),
                bc: BoundarySpec::all(BoundaryKind::Outflow),
                t_end,
                cfl: 0.8,
                ic: riemann_ic(prim(&left), prim(&right), 0.0),
                exact: None,
                error_var: 0,
                error_var_name: "h1",
                double_min_order: 0,
                antidiffusion: true,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: if id == "tl_rp1" {
                    "stationary jumps in the linearly degenerate fields"
                } else {
                    ""
                },
            }
        }
        "debris_wellbalance" => wellbalance_ic(false, 1e-3),
        "tl_wellbalance_small" => wellbalance_ic(true, 1e-3),
        "tl_wellbalance_large" => {
            let mut p = wellbalance_ic(true, 0.2);
            p.id = "tl_wellbalance_large";
            p
        }
        "bn_shock_bubble" => {
            let left = prim(&[1999.939402, 49.998485, 0.0, 4999849.5, 1.0, 0.0, 0.0, 1.0, 0.75]);
            let right = prim(&[1000.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.75]);
            let bubble = prim(&[1000.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.25]);
            let ic: IcFn = Arc::new(move |x, y| {
                if x <= 0.0 {
                    left
                } else {
                    let r = ((x - 0.5) * (x - 0.5) + y * y).sqrt();
                    if r < 0.25 {
                        bubble
                    } else {
                        right
                    }
                }
            });
            ProblemSpec {
                id: "bn_shock_bubble",
                describe: "planar shock hitting a low-fraction bubble (two-phase)",
                model: Model::baer_nunziato(BaerNunziatoParams::inviscid(3.0, 100.0, 1.4, 0.0), 2),
                ndim: 2,
                domain: (-0.5, 3.0, -0.75, 0.75),
                default_mesh: (700, 300),
                bc: BoundarySpec {
                    x: (BoundaryKind::DirichletFrozen, BoundaryKind::DirichletFrozen),
                    y: (BoundaryKind::Periodic, BoundaryKind::Periodic),
                },
                t_end: 0.025,
                cfl: 0.4,
                ic,
                exact: None,
                error_var: 0,
                error_var_name: "rho1",
                double_min_order: 0,
                antidiffusion: false,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: "strong shock; run a 175x75 smoke mesh for checks",
            }
        }
        "bn_shock_vortex" => {
            let v = BnVortex {
                r_s: 0.075,
                p10: 1.0,
                p20: 1.5,
                s1: 1.5,
                s2: 1.4,
                mean: (1.1652078, 1.1652078),
                center: (0.0, 0.0),
            };
            let lb = prim(&[1.0, 1.1652078, 1.1652078, 1.0, 2.0, 0.0, 0.0, 1.5, 1.0 / 3.0]);
            let rt = prim(&[
                1.672601, 0.696644, 0.696644, 2.090198, 2.0, 0.0, 0.0, 1.5, 1.0 / 3.0,
            ]);
            let ic: IcFn = Arc::new(move |x, y| {
                if x + y >= 0.5 {
                    return rt;
                }
                let r = (x * x + y * y).sqrt();
                if r > 5.0 * v.r_s {
                    return lb;
                }
                // vortex perturbation rides on the pre-shock state: each
                // phase keeps its own base velocity
                let mut w = v.state(x, y);
                let (sin_t, cos_t) = if r > 0.0 { (y / r, x / r) } else { (0.0, 1.0) };
                let (v1t, v2t) = v.angular(r);
                w[1] = lb[1] - v1t * sin_t;
                w[2] = lb[2] + v1t * cos_t;
                w[5] = lb[5] - v2t * sin_t;
                w[6] = lb[6] + v2t * cos_t;
                w
            });
            ProblemSpec {
                id: "bn_shock_vortex",
                describe: "two-phase vortex crossing a standing oblique shock",
                model: Model::baer_nunziato(BaerNunziatoParams::inviscid(1.4, 0.0, 1.4, 0.0), 2),
                ndim: 2,
                domain: (-0.5, 1.5, -0.5, 1.5),
                default_mesh: (600, 600),
                bc: BoundarySpec::all(BoundaryKind::DirichletFrozen),
                t_end: 0.84,
                cfl: 0.4,
                ic,
                exact: None,
                error_var: 8,
                error_var_name: "phi1",
                double_min_order: 0,
                antidiffusion: false,
                basis: ReconBasis::Characteristic,
                integrator: Integrator::SspRk3,
                notes: "run a 150x150 smoke mesh for checks",
            }
        }
        "tl_shock_bubble" | "debris_shock_bubble" => {
            let tl = id == "tl_shock_bubble";
            let (nxd, nyd) = if tl { (700, 300) } else { (700, 500) };
            let (nx, ny) = mesh.unwrap_or((nxd, nyd));
            let domain = if tl {
                (-0.5, 3.0, -0.75, 0.75)
            } else {
                (-0.5, 3.0, -1.25, 1.25)
            };
            let dx = (domain.1 - domain.0) / nx as f64;
            let post: State = if tl {
                prim(&[2.44516, 3.331868, 0.0, 3.785719, 2.927431, 0.0, 0.0])
            } else {
                prim(&[2.3394, 3.17729, 0.0, 3.899, 3.17742, 0.0, 0.0])
            };
            let depth = if tl { 0.25 } else { 0.5 };
            let ic: IcFn = Arc::new(move |x, y| {
                if x <= 0.0 {
                    return post;
                }
                let r = ((x - 0.5) * (x - 0.5) + y * y).sqrt();
                let b = -depth + depth * ((r - 0.25) / (2.0 * dx)).tanh();
                let h1 = 1.5;
                let h2 = 4.0 - h1 - b;
                prim(&[h1, 0.0, 0.0, h2, 0.0, 0.0, b])
            });
            ProblemSpec {
                id: if tl { "tl_shock_bubble" } else { "debris_shock_bubble" },
                describe: "right-going shock over a tapered circular depression",
                model: if tl {
                    Model::two_layer(TwoLayerSWParams { g: 9.8, rho: 0.8 })
                } else {
                    Model::debris(DebrisFlowParams { g: 9.8, rho: 0.5 })
                },
                ndim: 2,
                domain,
                default_mesh: (nx, ny),
                bc: BoundarySpec {
                    x: (BoundaryKind::DirichletFrozen, BoundaryKind::DirichletFrozen),
                    y: (BoundaryKind::Periodic, BoundaryKind::Periodic),
                },
                t_end: 0.3,
                cfl: 0.4,
                ic,
                exact: None,
                error_var: 3,
                error_var_name: if tl { "h2" } else { "h_f" },
                double_min_order: 0,
                antidiffusion: true,
                basis: ReconBasis::ComponentWise,
                integrator: Integrator::SspRk3,
                notes: "bathymetry taper uses the zone size of the chosen mesh",
            }
        }
        "tl_shock_vortex" | "debris_shock_vortex" => {
            let tl = id == "tl_shock_vortex";
            let (lb, rt): (State, State) = if tl {
                (
                    prim(&[1.746044, 4.849948, 4.849948, 0.330408, 4.849948, 4.849948, 0.0]),
                    prim(&[3.002690, 2.820212, 2.820212, 0.517654, 3.091776, 3.091776, 0.0]),
                )
            } else {
                (
                    prim(&[1.746044, 4.694546, 4.694546, 0.330408, 4.694546, 4.694546, 0.0]),
                    prim(&[2.825618, 2.900917, 2.900917, 0.534696, 2.900921, 2.900921, 0.0]),
                )
            };
            let v = LayeredVortex {
                r_s: 0.1,
                mean: (lb[1], lb[2]),
                ..LayeredVortex::standard(!tl)
            };
            let ic: IcFn = Arc::new(move |x, y| {
                if x + y >= 0.5 {
                    return rt;
                }
                let r = (x * x + y * y).sqrt();
                if r > 5.0 * v.r_s {
                    return lb;
                }
                let mut w = v.state(x, y);
                let (sin_t, cos_t) = if r > 0.0 { (y / r, x / r) } else { (0.0, 1.0) };
                let (v1t, v2t) = v.angular(r);
                w[1] = lb[1] - v1t * sin_t;
                w[2] = lb[2] + v1t * cos_t;
                w[4] = lb[4] - v2t * sin_t;
                w[5] = lb[5] + v2t * cos_t;
                w
            });
            ProblemSpec {
                id: if tl { "tl_shock_vortex" } else { "debris_shock_vortex" },
                describe: "layered vortex crossing a standing oblique shock",
                model: if tl {
                    Model::two_layer(TwoLayerSWParams { g: 10.0, rho: 0.9 })
                } else {
                    Model::debris(DebrisFlowParams { g: 10.0, rho: 0.9 })
                },
                ndim: 2,
                domain: (-0.5, 1.5, -0.5, 1.5),
                default_mesh: (600, 600),
                bc: BoundarySpec::all(BoundaryKind::DirichletFrozen),
                t_end: 0.24,
                cfl: 0.4,
                ic,
                exact: None,
                error_var: 0,
                error_var_name: if tl { "h1" } else { "h_s" },
                double_min_order: 0,
                antidiffusion: true,
                basis: ReconBasis::ComponentWise,
                integrator: Integrator::SspRk3,
                notes: "run a 150x150 smoke mesh for checks",
            }
        }
        _ => return Err(unknown(id)),
    };
    if let Some(m) = mesh {
        p.default_mesh = m;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::SystemModel;

    #[test]
    fn every_id_builds_and_is_admissible_on_a_coarse_mesh() {
        for id in problem_ids() {
            let p = build_problem_sized(id, Some((24, 12))).unwrap();
            let n = p.model.nvar();
            let (x0, x1, y0, y1) = p.domain;
            for j in 0..8 {
                for i in 0..8 {
                    let x = x0 + (x1 - x0) * (i as f64 + 0.3) / 8.0;
                    let y = y0 + (y1 - y0) * (j as f64 + 0.6) / 8.0;
                    let w = (p.ic)(x, y);
                    let mut u = [0.0; MAX_VARS];
                    p.model.cons_from_prim(&w[..n], &mut u[..n]);
                    let mut back = [0.0; MAX_VARS];
                    let fl = p.model.prim_from_cons(&u[..n], &mut back[..n]).unwrap();
                    assert_eq!(fl, 0, "{id} floored at ({x}, {y})");
                }
            }
        }
    }

    #[test]
    fn unknown_id_lists_catalog() {
        let err = match build_problem("nope") {
            Err(e) => e,
            Ok(_) => panic!("expected an error"),
        };
        let msg = format!("{err}");
        assert!(msg.contains("euler_vortex") && msg.contains("tl_rp3"));
    }

    #[test]
    fn debris_rp1_numbers() {
        let p = build_problem("debris_rp1").unwrap();
        let l = (p.ic)(-1.0, 0.0);
        let r = (p.ic)(1.0, 0.0);
        assert_eq!(&l[..7], &[1.5, 0.0, 0.2, 0.5, 0.0, -0.5, 0.0]);
        assert_eq!(&r[..7], &[1.125, 0.0, -0.2, 0.375, 0.0, 0.5, 0.5]);
        assert_eq!(p.t_end, 1.0);
        assert_eq!(p.domain.0, -5.0);
    }

    #[test]
    fn bn_rp6_and_stiff_numbers() {
        let p = build_problem("bn_rp6").unwrap();
        let l = (p.ic)(-0.1, 0.0);
        assert_eq!(&l[..7], &[0.2068, 1.4166, 0.0416, 0.5806, 1.5833, 1.375, 0.1]);
        assert_eq!(p.t_end, 0.1);
        let s = build_problem("bn_stiff_rp1").unwrap();
        let sl = (s.ic)(-0.1, 0.0);
        assert_eq!(sl[6], 0.99);
        assert_eq!(s.t_end, 0.2);
        assert_eq!(s.integrator, Integrator::Imex);
    }

    #[test]
    fn shock_bubble_left_state_and_taper() {
        let p = build_problem("bn_shock_bubble").unwrap();
        let l = (p.ic)(-0.2, 0.0);
        assert_eq!(l[0], 1999.939402);
        assert_eq!(l[1], 49.998485);
        assert_eq!(l[3], 4999849.5);
        assert_eq!(l[8], 0.75);
        let b = (p.ic)(0.5, 0.0);
        assert_eq!(b[8], 0.25);
        // two-layer bubble: hydrostatic h2 follows the bathymetry
        let q = build_problem_sized("tl_shock_bubble", Some((700, 300))).unwrap();
        let w = (q.ic)(0.5, 0.0); // depression floor: b close to -0.5
        assert!((w[6] + 0.5).abs() < 1e-6);
        assert!((w[0] - 1.5).abs() < 1e-12);
        assert!((w[0] + w[3] + w[6] - 4.0).abs() < 1e-12);
        let far = (q.ic)(2.5, 0.0);
        assert!(far[6].abs() < 1e-9);
    }

    #[test]
    fn shock_vortex_tables() {
        let p = build_problem("tl_shock_vortex").unwrap();
        let lb = (p.ic)(-0.4, -0.4);
        assert_eq!(lb[0], 1.746044);
        assert_eq!(lb[1], 4.849948);
        let rt = (p.ic)(1.0, 1.0);
        assert_eq!(rt[0], 3.002690);
        // vortex center keeps the mean velocity and far-field heights are
        // continuous at the cut radius
        let c = (p.ic)(0.0, 0.0);
        assert!((c[1] - 4.849948).abs() < 1e-12);
        // the vortex tails carry ~1e-5 of velocity at the cut radius;
        // the seam must stay at that scale
        let edge_in = (p.ic)(-0.499, 0.0);
        let edge_out = (p.ic)(-0.501, 0.0);
        for k in 0..7 {
            assert!((edge_in[k] - edge_out[k]).abs() < 5e-5, "slot {k}");
        }
    }

    #[test]
    fn wellbalance_bump_peak() {
        let p = build_problem("debris_wellbalance").unwrap();
        let w = (p.ic)(0.5, 0.0);
        assert!((w[6] - 0.5).abs() < 1e-14); // bump peak b = 0.5
        // eta = 1 and phi = 0.6 away from the perturbation strip
        assert!((w[0] + w[3] + w[6] - 1.0).abs() < 1e-14);
        assert!((w[0] / (w[0] + w[3]) - 0.6).abs() < 1e-14);
        // perturbed strip
        let wp = (p.ic)(-0.55, 0.0);
        assert!((wp[0] + wp[3] + wp[6] - 1.001).abs() < 1e-14);
        // the epsilon = 0 state is the exact equilibrium
        let q = wellbalance_ic(true, 0.0);
        let w2 = (q.ic)(1.5, 0.0);
        assert!((w2[3] + w2[6] - 0.65).abs() < 1e-14);
        assert!((w2[0] - 0.35).abs() < 1e-14);
    }

    #[test]
    fn vortex_exact_returns_ic_after_a_period() {
        for id in ["euler_vortex", "bn_vortex", "debris_vortex", "tl_vortex"] {
            let p = build_problem(id).unwrap();
            let exact = p.exact.as_ref().unwrap();
            let w0 = (p.ic)(1.25, -0.75);
            let w1 = exact(1.25, -0.75, p.t_end);
            for k in 0..p.model.nvar() {
                assert!((w0[k] - w1[k]).abs() < 1e-12, "{id} slot {k}");
            }
        }
    }

    #[test]
    fn domain_doubling_rules() {
        let e = build_problem("euler_vortex").unwrap();
        assert_eq!(e.sized_for_order(5).domain.1, 5.0);
        assert_eq!(e.sized_for_order(7).domain.1, 10.0);
        assert_eq!(e.sized_for_order(7).t_end, 20.0);
        let b = build_problem("bn_vortex").unwrap();
        assert_eq!(b.sized_for_order(3).domain.1, 5.0);
        assert_eq!(b.sized_for_order(5).domain.1, 10.0);
        assert_eq!(b.sized_for_order(5).t_end, 10.0);
    }
}
