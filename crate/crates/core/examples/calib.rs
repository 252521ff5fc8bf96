// convergence calibration against the published accuracy-table meshes
use pcweno::harness::*;
use pcweno::problems::*;
use pcweno::scheme::*;
use std::time::Instant;

fn main() {
    init_threads();
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("bn");
    match which {
        "bn" => {
            let p = build_problem("bn_vortex").unwrap();
            let scheme = SchemeConfig { order: 5, cfl: 0.3, riemann_mode: pcweno::RiemannMode::Llf, ..Default::default() };
            let t0 = Instant::now();
            let rows = convergence_study(&p, &scheme, &[32, 64, 128]).unwrap();
            for r in &rows {
                println!("bn n={} l1={:.5e} order={:?}", r.n, r.l1, r.l1_order.map(|v| (v*100.0).round()/100.0));
            }
            println!("took {:?}", t0.elapsed());
        }
        "euler64" => {
            let p = build_problem("euler_vortex").unwrap();
            let scheme = SchemeConfig { order: 5, cfl: 0.3, riemann_mode: pcweno::RiemannMode::Llf, ..Default::default() };
            let t0 = Instant::now();
            let rows = convergence_study(&p, &scheme, &[64, 128]).unwrap();
            for r in &rows {
                println!("euler n={} l1={:.5e} order={:?}", r.n, r.l1, r.l1_order.map(|v| (v*100.0).round()/100.0));
            }
            println!("took {:?}", t0.elapsed());
        }
        "debris" => {
            let p = build_problem("debris_vortex").unwrap();
            let scheme = SchemeConfig { order: 5, cfl: 0.3, riemann_mode: pcweno::RiemannMode::Llf, basis: ReconBasis::ComponentWise, ..Default::default() };
            let t0 = Instant::now();
            let rows = convergence_study(&p, &scheme, &[64, 128]).unwrap();
            for r in &rows {
                println!("debris n={} l1={:.5e} order={:?}", r.n, r.l1, r.l1_order.map(|v| (v*100.0).round()/100.0));
            }
            println!("took {:?}", t0.elapsed());
        }
        _ => {}
    }
}
