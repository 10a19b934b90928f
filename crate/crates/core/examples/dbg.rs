use gegenbauer_core::riesz::*;
use gegenbauer_core::*;
use std::time::Instant;

fn main() {
    let p = GegenbauerParams::with_lambda(0.25).unwrap();
    let pp = PotentialParams::new(&p, 0.5, 2.0).unwrap();
    let pp3 = PotentialParams::new(&p, 0.5, 3.0).unwrap();
    let f = TestFunction::bump(1.0, 2.0).unwrap();

    let t0 = Instant::now();
    let v = shifted_kernel(&p, &pp, 1.3, 1.5).unwrap();
    println!("shifted_kernel mid: {v:.4e} in {:?}", t0.elapsed());
    let t0 = Instant::now();
    let v = shifted_kernel(&p, &pp, 1.499, 1.5).unwrap();
    println!("shifted_kernel near-diag: {v:.4e} in {:?}", t0.elapsed());

    let t0 = Instant::now();
    let v = riesz_apply(&p, &pp, &f, 1.5).unwrap();
    println!("riesz_apply: {v:.4e} in {:?}", t0.elapsed());

    let t0 = Instant::now();
    let v = modified_riesz(&p, &pp3, &f, 1.5).unwrap();
    println!("modified_riesz: {v:.4e} in {:?}", t0.elapsed());

    let t0 = Instant::now();
    let v = kernel_bound_majorant(&p, &pp, &f, 0.5).unwrap();
    println!("majorant: {v:.4e} in {:?}", t0.elapsed());

    let t0 = Instant::now();
    let v = riesz_heat_form(&p, &pp, &f, 0.5).unwrap();
    println!("heat_form: {v:.4e} in {:?}", t0.elapsed());
}
