use nevlab_core::exactfield::{ExactFunc, Model, Poly};
use nevlab_core::meroeval::MeroFunc;
use nevlab_core::nevanlinna::{winding_closed_debug, Target};
use num_complex::Complex64;

fn sq(c: Complex64, h: f64) -> [Complex64; 4] {
    [
        c + Complex64::new(-h, -h),
        c + Complex64::new(h, -h),
        c + Complex64::new(h, h),
        c + Complex64::new(-h, h),
    ]
}

fn main() {
    let f = MeroFunc::rational_of_exp(ExactFunc::rational(
        Poly::from_ints(&[1, 1]),
        Poly::from_ints(&[1, -2, 1]),
        Model::Exp,
    ));
    let target = Target::Inf;
    let r_eff = 7.0f64;
    let offset = Complex64::new(1.0, 1.37) * 2.3e-4 * 7.0;
    let half0 = r_eff * 1.002;
    let mut stack = vec![(offset, half0)];
    let mut guard = 0;
    while let Some((c, h)) = stack.pop() {
        guard += 1;
        if guard > 2000 { println!("too many"); break; }
        let mut w = f.walker();
        let wind = match winding_closed_debug(&mut w, &target, &sq(c, h), 4) {
            Ok(n) => n,
            Err(e) => { println!("cell c={} h={:.4}: ERR {}", c, h, e); continue; }
        };
        let diam = h * 2.0 * std::f64::consts::SQRT_2;
        if wind == 0 && diam < 0.8 { continue; }
        if diam < 0.8 {
            println!("point cell c={} h={:.5} w={}", c, h, wind);
            continue;
        }
        let h2 = h / 2.0;
        for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            stack.push((c + Complex64::new(dx * h2, dy * h2), h2));
        }
    }
}
