//! Flat key = value run configuration. One entry per line, `#` starts a
//! comment, unknown keys are errors.

use crate::error::{Result, SolverError};
use crate::problems::Integrator;
use crate::recon::FloorLimiter;
use crate::riemann::{DeltaForm, RiemannMode};
use crate::scheme::{PsiMode, ReconBasis, Reconstruction};

/// The recognized configuration keys with their meaning; `describe`
/// output and the README reference are generated from this list.
pub const CONFIG_KEYS: &[(&str, &str)] = &[
    ("problem", "catalog id (see list-problems)"),
    ("order", "scheme order: 3, 5, 7 or 9 (default 5)"),
    ("reconstruction", "weno_ao | mr_weno (default weno_ao)"),
    ("basis", "characteristic | component (default: problem's choice)"),
    ("riemann", "hll | llf (default hll)"),
    ("antidiffusion", "on | off (default: problem's choice)"),
    ("psi", "one | zero | detector (default one)"),
    ("delta", "max | perside (anti-diffusion speed form, default max)"),
    ("mc_beta", "MC limiter steepness in [1,2] for mr_weno (default 1.5)"),
    ("floor_limiter", "mc | van_albada (mr_weno floor, default mc)"),
    ("integrator", "ssprk3 | ssprk4 | imex (default: problem's choice)"),
    ("nx", "mesh override in x"),
    ("ny", "mesh override in y (2D problems)"),
    ("cfl", "CFL number override"),
    ("t_end", "stopping time override"),
    ("dt_max", "time step cap for static states (default 1e30)"),
    ("output_dir", "directory for solution files (default: none written)"),
    ("output_every", "snapshot cadence in time units (0 = final only)"),
    ("meshes", "comma list of mesh sizes for `convergence`"),
];

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: String,
    pub order: usize,
    pub reconstruction: Reconstruction,
    pub basis: Option<ReconBasis>,
    pub riemann: RiemannMode,
    pub antidiffusion: Option<bool>,
    pub psi: PsiMode,
    pub delta: DeltaForm,
    pub mc_beta: f64,
    pub van_albada_floor: bool,
    pub integrator: Option<Integrator>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub dt_max: f64,
    pub output_dir: Option<String>,
    pub output_every: f64,
    pub meshes: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            problem: String::new(),
            order: 5,
            reconstruction: Reconstruction::WenoAo,
            basis: None,
            riemann: RiemannMode::Hll,
            antidiffusion: None,
            psi: PsiMode::One,
            delta: DeltaForm::MaxSpeed,
            mc_beta: 1.5,
            van_albada_floor: false,
            integrator: None,
            nx: None,
            ny: None,
            cfl: None,
            t_end: None,
            dt_max: 1e30,
            output_dir: None,
            output_every: 0.0,
            meshes: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn floor_limiter(&self) -> FloorLimiter {
        if self.van_albada_floor {
            FloorLimiter::VanAlbada(1e-12)
        } else {
            FloorLimiter::McBeta(self.mc_beta)
        }
    }
}

fn bad(key: &str, value: &str) -> SolverError {
    SolverError::Config(format!("invalid value {value:?} for key {key:?}"))
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut rc = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(SolverError::Config(format!(
                "line {}: expected key = value, got {raw:?}",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "problem" => rc.problem = value.to_string(),
            "order" => rc.order = value.parse().map_err(|_| bad(key, value))?,
            "reconstruction" => {
                rc.reconstruction = match value {
                    "weno_ao" => Reconstruction::WenoAo,
                    "mr_weno" => Reconstruction::MrWeno,
                    _ => return Err(bad(key, value)),
                }
            }
            "basis" => {
                rc.basis = Some(match value {
                    "characteristic" => ReconBasis::Characteristic,
                    "component" => ReconBasis::ComponentWise,
                    _ => return Err(bad(key, value)),
                })
            }
            "riemann" => {
                rc.riemann = match value {
                    "hll" => RiemannMode::Hll,
                    "llf" => RiemannMode::Llf,
                    _ => return Err(bad(key, value)),
                }
            }
            "antidiffusion" => {
                rc.antidiffusion = Some(match value {
                    "on" | "true" | "1" => true,
                    "off" | "false" | "0" => false,
                    _ => return Err(bad(key, value)),
                })
            }
            "psi" => {
                rc.psi = match value {
                    "one" => PsiMode::One,
                    "zero" => PsiMode::Zero,
                    "detector" => PsiMode::Detector,
                    _ => return Err(bad(key, value)),
                }
            }
            "delta" => {
                rc.delta = match value {
                    "max" => DeltaForm::MaxSpeed,
                    "perside" => DeltaForm::PerSide,
                    _ => return Err(bad(key, value)),
                }
            }
            "mc_beta" => rc.mc_beta = value.parse().map_err(|_| bad(key, value))?,
            "floor_limiter" => {
                rc.van_albada_floor = match value {
                    "mc" => false,
                    "van_albada" => true,
                    _ => return Err(bad(key, value)),
                }
            }
            "integrator" => {
                rc.integrator = Some(match value {
                    "ssprk3" => Integrator::SspRk3,
                    "ssprk4" => Integrator::SspRk4,
                    "imex" => Integrator::Imex,
                    _ => return Err(bad(key, value)),
                })
            }
            "nx" => rc.nx = Some(value.parse().map_err(|_| bad(key, value))?),
            "ny" => rc.ny = Some(value.parse().map_err(|_| bad(key, value))?),
            "cfl" => rc.cfl = Some(value.parse().map_err(|_| bad(key, value))?),
            "t_end" => rc.t_end = Some(value.parse().map_err(|_| bad(key, value))?),
            "dt_max" => rc.dt_max = value.parse().map_err(|_| bad(key, value))?,
            "output_dir" => rc.output_dir = Some(value.to_string()),
            "output_every" => rc.output_every = value.parse().map_err(|_| bad(key, value))?,
            "meshes" => {
                rc.meshes = value
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| bad(key, value)))
                    .collect::<Result<Vec<_>>>()?;
            }
            _ => {
                return Err(SolverError::Config(format!(
                    "unknown key {key:?} (line {}); valid keys: {}",
                    lineno + 1,
                    CONFIG_KEYS.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(", ")
                )))
            }
        }
    }
    if rc.problem.is_empty() {
        return Err(SolverError::Config("missing required key 'problem'".into()));
    }
    Ok(rc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# a comment
problem = euler_vortex
order = 7
reconstruction = mr_weno
basis = component
riemann = llf
antidiffusion = off
nx = 128   # trailing comment
meshes = 32, 64, 128
";
        let rc = parse_config(text).unwrap();
        assert_eq!(rc.problem, "euler_vortex");
        assert_eq!(rc.order, 7);
        assert_eq!(rc.reconstruction, Reconstruction::MrWeno);
        assert_eq!(rc.basis, Some(ReconBasis::ComponentWise));
        assert_eq!(rc.riemann, RiemannMode::Llf);
        assert_eq!(rc.antidiffusion, Some(false));
        assert_eq!(rc.nx, Some(128));
        assert_eq!(rc.meshes, vec![32, 64, 128]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("problem = x\nmystery = 1\n");
        assert!(err.is_err());
        let msg = format!("{}", err.err().unwrap());
        assert!(msg.contains("unknown key"));
    }

    #[test]
    fn missing_problem_is_an_error() {
        assert!(parse_config("order = 5\n").is_err());
    }
}
