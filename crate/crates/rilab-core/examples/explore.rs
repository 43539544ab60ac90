use rilab_core::kernels::eval_power;
use rilab_core::orlicz::OrliczPhi;
use rilab_core::quad::integrate;
use std::f64::consts::PI;

fn simpson(g: &dyn Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let h = (b - a) / steps as f64;
    let mut acc = g(a) + g(b);
    for j in 1..steps {
        acc += if j % 2 == 1 { 4.0 } else { 2.0 } * g(a + j as f64 * h);
    }
    acc * h / 3.0
}

fn main() {
    let phi = OrliczPhi::ExpM1;
    let w = 6.1505f64; // c / v for the failing case
    let g = move |y: f64| phi.value(w * eval_power(1, 1, y));
    let y1 = 64.0 * PI; // 201.06
    // Core on [0, Y] two ways.
    let core_simpson = simpson(&g, 0.0, y1, 1 << 20);
    let core_gk = integrate(&g, 0.0, y1, 1e-10, 1e-280, 64, 200_000).unwrap();
    println!("core[0,201]  simpson = {core_simpson:.10e}");
    println!("core[0,201]  gk15    = {:.10e}  (err est {:.3e})", core_gk.value, core_gk.error);
    // True tail [Y, inf) by marching Simpson far out.
    let mut tail_true = 0.0;
    let far = 1 << 22;
    let mut a = y1;
    while a < far as f64 * PI {
        let b = (a + 4096.0 * PI).min(far as f64 * PI);
        tail_true += simpson(&g, a, b, ((b - a) / PI) as usize * 16);
        a = b;
    }
    tail_true += 0.5 * w / (far as f64 * PI);
    println!("tail[201,inf) marched = {tail_true:.10e}");
    println!("tail formula mine     = {:.10e}", w * (0.5 / y1 + (2.0 * y1).sin() / (4.0 * y1 * y1)));
    println!("tail formula sin(Y)   = {:.10e}", w * (0.5 / y1 + y1.sin() / (2.0 * y1 * y1)));
    // Linear part only: w * int_Y^inf S dy, same march.
    let s_only = move |y: f64| w * eval_power(1, 1, y);
    let mut lin = 0.0;
    let mut a = y1;
    while a < far as f64 * PI {
        let b = (a + 4096.0 * PI).min(far as f64 * PI);
        lin += simpson(&s_only, a, b, ((b - a) / PI) as usize * 16);
        a = b;
    }
    lin += 0.5 * w / (far as f64 * PI);
    println!("linear tail marched   = {lin:.10e}");
}
