//! Shared fixtures for the solver benchmarks.

use pcweno::mesh::{apply_boundaries, FieldArray, UniformGrid};
use pcweno::problems::{build_problem, ProblemSpec};
use pcweno::systems::SystemModel;

/// A filled field on an n x n mesh for the given catalog problem.
pub fn prepared_field(id: &str, n: usize, nghost: usize) -> (ProblemSpec, FieldArray) {
    let p = build_problem(id).expect("catalog id");
    let grid = UniformGrid::new_2d(n, n, p.domain.0, p.domain.1, p.domain.2, p.domain.3, nghost);
    let mut f = FieldArray::new(grid, p.model.nvar());
    let ic = p.ic.clone();
    f.set_interior(&p.model, &|x, y| ic(x, y));
    apply_boundaries(&mut f, &p.bc, &p.model, &|x, y| (p.ic)(x, y)).expect("boundary fill");
    (p, f)
}
