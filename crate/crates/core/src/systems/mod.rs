//! PDE system abstraction and the concrete models.
//!
//! A [`SystemModel`] supplies the flux F, the non-conservative coefficient
//! matrix C, the characteristic matrix A = dF/dU + C, wave-speed bounds,
//! the linearly degenerate part of the eigensystem (used by the
//! anti-diffusive correction) and, where available, a complete eigensystem
//! for characteristic-space reconstruction. Most operations take the
//! primitive state; conversions between conserved and primitive variables
//! apply positivity floors and report how often they fired.

mod baer_nunziato;
mod euler;
mod layered;
mod linear;

pub use baer_nunziato::{BaerNunziato, BaerNunziatoParams};
pub use euler::{Euler, EulerParams};
pub use layered::{DebrisFlowParams, LayeredKind, LayeredModel, TwoLayerSWParams};
pub use linear::LinearModel;

use crate::error::Result;
use crate::linalg::Mat;
use crate::{State, MAX_VARS};

/// Sweep direction on the structured grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    X,
    Y,
}

/// One linearly degenerate eigenpair in conserved variables, normalized so
/// that l . r = 1.
#[derive(Clone, Copy, Debug)]
pub struct LdPair {
    pub lambda: f64,
    pub l: State,
    pub r: State,
}

impl LdPair {
    fn zero() -> Self {
        LdPair { lambda: 0.0, l: [0.0; MAX_VARS], r: [0.0; MAX_VARS] }
    }
}

/// Collection of linearly degenerate eigenpairs.
#[derive(Clone, Copy, Debug)]
pub struct LdSet {
    pub count: usize,
    pub pairs: [LdPair; 6],
}

impl LdSet {
    pub fn new() -> Self {
        LdSet { count: 0, pairs: [LdPair::zero(); 6] }
    }

    pub fn push(&mut self, p: LdPair) {
        self.pairs[self.count] = p;
        self.count += 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = &LdPair> {
        self.pairs[..self.count].iter()
    }
}

impl Default for LdSet {
    fn default() -> Self {
        Self::new()
    }
}

/// Complete eigensystem in conserved variables: `left` holds rows, `right`
/// holds columns, ordered consistently with `lambda`.
#[derive(Clone, Copy, Debug)]
pub struct EigSet {
    pub lambda: State,
    pub left: Mat,
    pub right: Mat,
}

impl EigSet {
    pub fn new(n: usize) -> Self {
        EigSet { lambda: [0.0; MAX_VARS], left: Mat::zeros(n), right: Mat::zeros(n) }
    }
}

/// Positivity floors, set to 1e-8 of the problem reference scale.
#[derive(Clone, Copy, Debug)]
pub struct Floors {
    pub mass: f64,
    pub pressure: f64,
    pub fraction: f64,
}

impl Floors {
    pub fn from_scale(scale: f64) -> Self {
        Floors { mass: 1e-8 * scale, pressure: 1e-8 * scale, fraction: 1e-8 }
    }
}

impl Default for Floors {
    fn default() -> Self {
        Floors::from_scale(1.0)
    }
}

pub trait SystemModel: Sync {
    fn nvar(&self) -> usize;
    fn ndim(&self) -> usize;
    fn name(&self) -> &'static str;
    /// Primitive variable names, used for file headers.
    fn var_names(&self) -> Vec<&'static str>;

    /// Analytic flux of the conservative part, evaluated from the
    /// primitive state.
    fn flux_prim(&self, w: &[f64], dir: Dir, out: &mut [f64]);

    /// True when the system has a non-conservative product.
    fn has_ncp(&self) -> bool;

    /// Coefficient matrix of the non-conservative product, so the system
    /// reads dU/dt + dF/dx + C dU/dx = 0.
    fn ncp_matrix(&self, w: &[f64], dir: Dir, c: &mut Mat);

    /// True when C is affine in the conserved state, in which case a
    /// straight-segment path integral equals C at the midpoint.
    fn ncp_affine(&self) -> bool {
        false
    }

    /// Jacobian dF/dU expressed through primitive values.
    fn flux_jacobian(&self, w: &[f64], dir: Dir, b: &mut Mat);

    /// Characteristic matrix A = dF/dU + C.
    fn char_matrix(&self, w: &[f64], dir: Dir, a: &mut Mat) {
        self.flux_jacobian(w, dir, a);
        if self.has_ncp() {
            let mut c = Mat::zeros(self.nvar());
            self.ncp_matrix(w, dir, &mut c);
            a.add_scaled(&c, 1.0);
        }
    }

    /// Lower/upper bounds on the eigenvalues of A(w, dir).
    fn wavespeed_bounds(&self, w: &[f64], dir: Dir) -> Result<(f64, f64)>;

    /// Linearly degenerate eigenpairs at `w`; ill-conditioned pairs are
    /// dropped rather than returned.
    fn ld_eigensystem(&self, w: &[f64], dir: Dir, out: &mut LdSet);

    /// Complete eigensystem for characteristic reconstruction. Models
    /// without a robust one return Err and callers fall back to
    /// component-wise reconstruction.
    fn full_eigensystem(&self, w: &[f64], dir: Dir, out: &mut EigSet) -> Result<()>;

    /// Conserved -> primitive with positivity floors; returns the number
    /// of floored entries.
    fn prim_from_cons(&self, u: &[f64], w: &mut [f64]) -> Result<u32>;

    /// Primitive -> conserved (exact inverse away from the floors).
    fn cons_from_prim(&self, w: &[f64], u: &mut [f64]);

    fn has_stiff_source(&self) -> bool {
        false
    }

    /// Stiff relaxation source evaluated from the conserved state.
    fn stiff_source(&self, _u: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }

    /// Analytic Jacobian dS/dU of the stiff source.
    fn stiff_jacobian(&self, _u: &[f64], j: &mut Mat) {
        j.fill_zero();
    }

    /// Conserved slots holding the normal-velocity component for the given
    /// sweep direction (flipped by reflective boundaries).
    fn velocity_slots(&self, dir: Dir) -> &'static [usize];

    /// Conserved slots whose flux is linear in U (phase masses); these are
    /// tracked by the conservation diagnostics.
    fn mass_slots(&self) -> &'static [usize];

    /// Scalar pressure-like quantity used by the optional shock detector.
    fn pressure_like(&self, w: &[f64]) -> f64;

    fn floors(&self) -> Floors;
}

/// Concrete model dispatch. Problems in the catalog carry one of these;
/// the scheme is generic over `SystemModel` so the match cost stays at the
/// call boundary.
#[derive(Clone, Debug)]
pub enum Model {
    Euler(Euler),
    BaerNunziato(BaerNunziato),
    Layered(LayeredModel),
    Linear(LinearModel),
}

impl Model {
    pub fn euler(params: EulerParams, ndim: usize) -> Model {
        Model::Euler(Euler::new(params, ndim, Floors::default()))
    }

    pub fn baer_nunziato(params: BaerNunziatoParams, ndim: usize) -> Model {
        Model::BaerNunziato(BaerNunziato::new(params, ndim, Floors::default()))
    }

    pub fn debris(params: DebrisFlowParams) -> Model {
        Model::Layered(LayeredModel::debris(params, Floors::default()))
    }

    pub fn two_layer(params: TwoLayerSWParams) -> Model {
        Model::Layered(LayeredModel::two_layer(params, Floors::default()))
    }
}

macro_rules! dispatch {
    ($self:ident, $m:ident, $body:expr) => {
        match $self {
            Model::Euler($m) => $body,
            Model::BaerNunziato($m) => $body,
            Model::Layered($m) => $body,
            Model::Linear($m) => $body,
        }
    };
}

impl SystemModel for Model {
    fn nvar(&self) -> usize {
        dispatch!(self, m, m.nvar())
    }
    fn ndim(&self) -> usize {
        dispatch!(self, m, m.ndim())
    }
    fn name(&self) -> &'static str {
        dispatch!(self, m, m.name())
    }
    fn var_names(&self) -> Vec<&'static str> {
        dispatch!(self, m, m.var_names())
    }
    fn flux_prim(&self, w: &[f64], dir: Dir, out: &mut [f64]) {
        dispatch!(self, m, m.flux_prim(w, dir, out))
    }
    fn has_ncp(&self) -> bool {
        dispatch!(self, m, m.has_ncp())
    }
    fn ncp_matrix(&self, w: &[f64], dir: Dir, c: &mut Mat) {
        dispatch!(self, m, m.ncp_matrix(w, dir, c))
    }
    fn ncp_affine(&self) -> bool {
        dispatch!(self, m, m.ncp_affine())
    }
    fn flux_jacobian(&self, w: &[f64], dir: Dir, b: &mut Mat) {
        dispatch!(self, m, m.flux_jacobian(w, dir, b))
    }
    fn char_matrix(&self, w: &[f64], dir: Dir, a: &mut Mat) {
        dispatch!(self, m, m.char_matrix(w, dir, a))
    }
    fn wavespeed_bounds(&self, w: &[f64], dir: Dir) -> Result<(f64, f64)> {
        dispatch!(self, m, m.wavespeed_bounds(w, dir))
    }
    fn ld_eigensystem(&self, w: &[f64], dir: Dir, out: &mut LdSet) {
        dispatch!(self, m, m.ld_eigensystem(w, dir, out))
    }
    fn full_eigensystem(&self, w: &[f64], dir: Dir, out: &mut EigSet) -> Result<()> {
        dispatch!(self, m, m.full_eigensystem(w, dir, out))
    }
    fn prim_from_cons(&self, u: &[f64], w: &mut [f64]) -> Result<u32> {
        dispatch!(self, m, m.prim_from_cons(u, w))
    }
    fn cons_from_prim(&self, w: &[f64], u: &mut [f64]) {
        dispatch!(self, m, m.cons_from_prim(w, u))
    }
    fn has_stiff_source(&self) -> bool {
        dispatch!(self, m, m.has_stiff_source())
    }
    fn stiff_source(&self, u: &[f64], out: &mut [f64]) {
        dispatch!(self, m, m.stiff_source(u, out))
    }
    fn stiff_jacobian(&self, u: &[f64], j: &mut Mat) {
        dispatch!(self, m, m.stiff_jacobian(u, j))
    }
    fn velocity_slots(&self, dir: Dir) -> &'static [usize] {
        dispatch!(self, m, m.velocity_slots(dir))
    }
    fn mass_slots(&self) -> &'static [usize] {
        dispatch!(self, m, m.mass_slots())
    }
    fn pressure_like(&self, w: &[f64]) -> f64 {
        dispatch!(self, m, m.pressure_like(w))
    }
    fn floors(&self) -> Floors {
        dispatch!(self, m, m.floors())
    }
}

/// Finite-difference characteristic matrix dF/dU + C computed from the
/// conserved state; the independent check used by the Jacobian
/// consistency tests.
pub fn fd_char_matrix(model: &impl SystemModel, u: &[f64], dir: Dir) -> Result<Mat> {
    let n = model.nvar();
    let mut a = Mat::zeros(n);
    let mut up = vec![0.0; n];
    let mut um = vec![0.0; n];
    let mut wp = vec![0.0; n];
    let mut wm = vec![0.0; n];
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for j in 0..n {
        let h = 1e-6 * (1.0 + u[j].abs());
        up.copy_from_slice(u);
        um.copy_from_slice(u);
        up[j] += h;
        um[j] -= h;
        model.prim_from_cons(&up, &mut wp)?;
        model.prim_from_cons(&um, &mut wm)?;
        model.flux_prim(&wp, dir, &mut fp);
        model.flux_prim(&wm, dir, &mut fm);
        for i in 0..n {
            a[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let mut w = vec![0.0; n];
    model.prim_from_cons(u, &mut w)?;
    if model.has_ncp() {
        let mut c = Mat::zeros(n);
        model.ncp_matrix(&w, dir, &mut c);
        a.add_scaled(&c, 1.0);
    }
    Ok(a)
}
