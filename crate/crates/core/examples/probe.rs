use pcweno::harness::init_threads;
use pcweno::mesh::*;
use pcweno::problems::*;
use pcweno::scheme::*;
use std::time::Instant;

fn main() {
    init_threads();
    for (id, nvar, basis) in [("euler_vortex", 4usize, ReconBasis::Characteristic),
                              ("debris_vortex", 7, ReconBasis::ComponentWise),
                              ("tl_vortex", 7, ReconBasis::ComponentWise),
                              ("bn_vortex", 9, ReconBasis::Characteristic)] {
        let p = build_problem(id).unwrap();
        let model = &p.model;
        let n = 128usize;
        let grid = UniformGrid::new_2d(n, n, -5.0, 5.0, -5.0, 5.0, 5);
        let mut f = FieldArray::new(grid, nvar);
        let ic = p.ic.clone();
        f.set_interior(model, &|x, y| ic(x, y));
        apply_boundaries(&mut f, &p.bc, model, &|x, y| (p.ic)(x, y)).unwrap();
        let cfg = SchemeConfig { order: 5, cfl: 0.3, basis, antidiffusion: p.antidiffusion, ..Default::default() };
        let mut r = FieldArray::new(grid, nvar);
        spatial_residual(&f, model, &cfg, &mut r).unwrap();
        let t0 = Instant::now();
        let reps = 10;
        for _ in 0..reps {
            spatial_residual(&f, model, &cfg, &mut r).unwrap();
        }
        let per_zone = t0.elapsed().as_secs_f64() / reps as f64 / (n * n) as f64 * 1e9;
        println!("{id}: {per_zone:.0} ns/zone-residual");
    }
}
