//! Complex monic cubic solver (Cardano with branch care and Newton polish).

use num_complex::Complex64;

const OMEGA: Complex64 = Complex64::new(-0.5, 0.8660254037844386);
const OMEGA2: Complex64 = Complex64::new(-0.5, -0.8660254037844386);

/// Roots of w³ + c2·w² + c1·w + c0.
pub fn solve_monic_cubic(c2: Complex64, c1: Complex64, c0: Complex64) -> [Complex64; 3] {
    let third = c2 / 3.0;
    // Depressed form t³ + p t + q, w = t − c2/3.
    let p = c1 - c2 * c2 / 3.0;
    let q = c2 * (2.0 * c2 * c2 - 9.0 * c1) / 27.0 + c0;
    let half_q = q / 2.0;
    let disc = half_q * half_q + (p / 3.0).powu(3);
    let s = disc.sqrt();
    // Pick the cube-root argument with the larger modulus to avoid
    // catastrophic cancellation.
    let u1 = -half_q + s;
    let u2 = -half_q - s;
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let mut roots = if u.norm() == 0.0 {
        // p = q = 0: triple root.
        [-third; 3]
    } else {
        let c = u.cbrt();
        let r0 = c - p / (3.0 * c);
        let c1_ = c * OMEGA;
        let r1 = c1_ - p / (3.0 * c1_);
        let c2_ = c * OMEGA2;
        let r2 = c2_ - p / (3.0 * c2_);
        [r0 - third, r1 - third, r2 - third]
    };
    for r in roots.iter_mut() {
        *r = polish(*r, c2, c1, c0);
    }
    roots
}

/// A couple of Newton steps on the original cubic.
fn polish(mut w: Complex64, c2: Complex64, c1: Complex64, c0: Complex64) -> Complex64 {
    for _ in 0..2 {
        let f = ((w + c2) * w + c1) * w + c0;
        let df = (3.0 * w + 2.0 * c2) * w + c1;
        if df.norm() < 1e-300 {
            break;
        }
        let step = f / df;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        w -= step;
    }
    w
}

/// Discriminant of the monic cubic; zero exactly at multiple roots.
pub fn cubic_discriminant(c2: Complex64, c1: Complex64, c0: Complex64) -> Complex64 {
    18.0 * c2 * c1 * c0 - 4.0 * c2.powu(3) * c0 + c2 * c2 * c1 * c1
        - 4.0 * c1.powu(3)
        - 27.0 * c0 * c0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_root_set(got: Vec<Complex64>, want: Vec<Complex64>) {
        let mut used = vec![false; got.len()];
        for w in &want {
            let hit = got.iter().enumerate().find(|(i, g)| {
                !used[*i] && (*g - w).norm() < 1e-10
            });
            match hit {
                Some((i, _)) => used[i] = true,
                None => panic!("no match for {} in {:?}", w, got),
            }
        }
    }

    #[test]
    fn real_distinct_roots() {
        // (w−1)(w−2)(w−3) = w³ − 6w² + 11w − 6
        let roots = solve_monic_cubic(c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0));
        assert_root_set(roots.to_vec(), vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn complex_coefficients() {
        // (w − i)(w + 2i)(w − 1) = w³ + (i−1)w² + (2−i)w − 2
        let roots = solve_monic_cubic(c(-1.0, 1.0), c(2.0, -1.0), c(-2.0, 0.0));
        assert_root_set(
            roots.to_vec(),
            vec![c(0.0, 1.0), c(0.0, -2.0), c(1.0, 0.0)],
        );
    }

    #[test]
    fn near_double_root_still_accurate() {
        let e = 1e-6;
        // (w − 1)²·(w − 1 − e) approximately
        let a = 1.0;
        let b = 1.0 + e;
        let c2 = c(-(2.0 * a + b), 0.0);
        let c1 = c(a * a + 2.0 * a * b, 0.0);
        let c0 = c(-a * a * b, 0.0);
        let roots = solve_monic_cubic(c2, c1, c0);
        let sum: Complex64 = roots.iter().sum();
        assert!((sum - c(2.0 * a + b, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn vieta_residuals_random() {
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) * 4.0 - 2.0
        };
        for _ in 0..200 {
            let c2 = c(next(), next());
            let c1 = c(next(), next());
            let c0 = c(next(), next());
            let roots = solve_monic_cubic(c2, c1, c0);
            let sum: Complex64 = roots.iter().sum();
            let prod = roots[0] * roots[1] * roots[2];
            assert!((sum + c2).norm() < 1e-9, "sum {:?} c2 {:?}", sum, c2);
            assert!((prod + c0).norm() < 1e-9);
        }
    }
}
