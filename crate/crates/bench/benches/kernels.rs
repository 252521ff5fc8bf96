use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pcweno::recon::{mr_weno, weno_ao, weight_epsilon, FloorLimiter};
use pcweno::riemann::{hlli_fluctuations, DeltaForm, RiemannInput};
use pcweno::systems::{Dir, EulerParams, Model, SystemModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bench_reconstruction(c: &mut Criterion) {
    let mut g = c.benchmark_group("reconstruction");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for order in [3usize, 5, 7, 9] {
        let win: Vec<f64> = (0..order).map(|_| 1.0 + 0.1 * rng.gen::<f64>()).collect();
        let eps = weight_epsilon(&win);
        g.bench_function(format!("weno_ao_{order}"), |b| {
            b.iter(|| weno_ao(black_box(&win), order, eps))
        });
        g.bench_function(format!("mr_weno_{order}"), |b| {
            b.iter(|| mr_weno(black_box(&win), order, FloorLimiter::default(), eps))
        });
    }
    g.finish();
}

fn bench_riemann(c: &mut Criterion) {
    let model = Model::euler(EulerParams { gamma: 1.4 }, 2);
    let wl = [1.1, 0.4, -0.3, 1.3];
    let wr = [1.05, 0.42, -0.28, 1.25];
    let mut ul = [0.0; 4];
    let mut ur = [0.0; 4];
    model.cons_from_prim(&wl, &mut ul);
    model.cons_from_prim(&wr, &mut ur);
    let input = RiemannInput {
        model: &model,
        dir: Dir::X,
        ul: &ul,
        ur: &ur,
        wl: &wl,
        wr: &wr,
        s_l: -1.0,
        s_r: 1.5,
        psi: 1.0,
        antidiffusion: true,
        delta_form: DeltaForm::MaxSpeed,
    };
    c.bench_function("hlli_euler_subsonic", |b| {
        b.iter(|| hlli_fluctuations(black_box(&input)).unwrap())
    });

    let debris = pcweno::problems::build_problem("debris_vortex").unwrap().model;
    let wl = [1.3, 0.4, -0.2, 0.9, 0.7, 0.3, 0.0];
    let wr = [1.28, 0.42, -0.19, 0.91, 0.68, 0.31, 0.0];
    let mut ul = [0.0; 7];
    let mut ur = [0.0; 7];
    debris.cons_from_prim(&wl, &mut ul);
    debris.cons_from_prim(&wr, &mut ur);
    let input = RiemannInput {
        model: &debris,
        dir: Dir::X,
        ul: &ul,
        ur: &ur,
        wl: &wl,
        wr: &wr,
        s_l: -3.5,
        s_r: 4.2,
        psi: 1.0,
        antidiffusion: true,
        delta_form: DeltaForm::MaxSpeed,
    };
    c.bench_function("hlli_debris_subsonic", |b| {
        b.iter(|| hlli_fluctuations(black_box(&input)).unwrap())
    });
}

criterion_group!(benches, bench_reconstruction, bench_riemann);
criterion_main!(benches);
