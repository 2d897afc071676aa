//! Weierstrass ℘ on a period lattice, built from the roots of the cubic
//! (℘′)² = 4(℘−e₁)(℘−e₂)(℘−e₃).
//!
//! Half-periods come from the arithmetic–geometric mean form of the period
//! integrals ∫ dt/√(4(t−e₁)(t−e₂)(t−e₃)); the AGM branch ambiguities are
//! settled by trying root orderings until ℘(ω₁) lands on a root and the
//! differential equation holds at sample points. Evaluation reduces the
//! argument to a small cell, sums the Laurent series to order 10 and then
//! applies the duplication formula.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeroError {
    #[error("cubic roots must sum to zero (got |sum| = {0:.3e})")]
    RootSumNonzero(f64),
    #[error("cubic roots must be distinct")]
    CoincidentRoots,
    #[error("no AGM branch reproduced the lattice (min residual {0:.3e})")]
    PeriodSearchFailed(f64),
    #[error("branch tracking failed near z = {0}")]
    TrackingFailure(Complex64),
}

/// Period lattice with invariants and the e-roots it was built from.
#[derive(Clone, Debug)]
pub struct Lattice {
    /// Half-period ω₁ (2ω₁ is a full period).
    pub omega1: Complex64,
    /// Half-period ω₂ with Im(ω₂/ω₁) > 0.
    pub omega2: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    pub roots: [Complex64; 3],
    /// Laurent coefficients c₂..c₁₄ of ℘(z) − z⁻².
    laurent: Vec<Complex64>,
    /// Series radius: arguments are halved until below this.
    series_radius: f64,
}

/// Optimal complex AGM: square-root signs chosen so |a−b| ≤ |a+b|.
fn agm(mut a: Complex64, mut b: Complex64) -> Complex64 {
    for _ in 0..64 {
        if (a - b).norm() <= 1e-15 * (a.norm() + b.norm()) {
            break;
        }
        let am = (a + b) / 2.0;
        let mut gm = (a * b).sqrt();
        if (am - gm).norm() > (am + gm).norm() {
            gm = -gm;
        }
        a = am;
        b = gm;
    }
    (a + b) / 2.0
}

fn laurent_coeffs(g2: Complex64, g3: Complex64, order: usize) -> Vec<Complex64> {
    // c₂ = g₂/20, c₃ = g₃/28, c_k = 3/((2k+1)(k−3)) Σ c_m c_{k−m}.
    let mut c = vec![ZERO; order + 1];
    if order >= 2 {
        c[2] = g2 / 20.0;
    }
    if order >= 3 {
        c[3] = g3 / 28.0;
    }
    for k in 4..=order {
        let mut s = ZERO;
        for m in 2..=(k - 2) {
            s += c[m] * c[k - m];
        }
        c[k] = s * 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c
}

impl Lattice {
    /// Build the lattice for the cubic with the given roots (sum must
    /// vanish, roots distinct).
    pub fn from_cubic_roots(e: [Complex64; 3]) -> Result<Lattice, MeroError> {
        let sum = e[0] + e[1] + e[2];
        let scale = e.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if sum.norm() > 1e-12 * scale.max(1.0) {
            return Err(MeroError::RootSumNonzero(sum.norm()));
        }
        let min_sep = (e[0] - e[1])
            .norm()
            .min((e[1] - e[2]).norm())
            .min((e[0] - e[2]).norm());
        if min_sep < 1e-9 * scale.max(1.0) {
            return Err(MeroError::CoincidentRoots);
        }
        let g2 = -4.0 * (e[0] * e[1] + e[1] * e[2] + e[2] * e[0]);
        let g3 = 4.0 * e[0] * e[1] * e[2];
        let laurent = laurent_coeffs(g2, g3, 14);

        // Try the root orderings; keep the candidate whose ℘ actually
        // reproduces a root at ω₁ and satisfies the differential equation.
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut passing: Vec<(f64, f64, Lattice)> = vec![];
        let mut min_res = f64::INFINITY;
        for perm in perms {
            let (ei, ej, ek) = (e[perm[0]], e[perm[1]], e[perm[2]]);
            let m1 = agm((ei - ek).sqrt(), (ei - ej).sqrt());
            let m2 = agm((ei - ek).sqrt(), (ej - ek).sqrt());
            if m1.norm() < 1e-14 || m2.norm() < 1e-14 {
                continue;
            }
            let mut w1 = PI / (2.0 * m1);
            // Canonical sign: ω₁ in the right half plane (or positive
            // imaginary axis), ω₂ giving a positively oriented basis.
            if w1.re < -1e-15 || (w1.re.abs() <= 1e-15 && w1.im < 0.0) {
                w1 = -w1;
            }
            let mut w2 = Complex64::new(0.0, PI / 2.0) / m2;
            let ratio = w2 / w1;
            if ratio.im.abs() < 1e-12 {
                continue;
            }
            if ratio.im < 0.0 {
                w2 = -w2;
            }
            // Gauss-reduce: |Re(ω₂/ω₁)| ≤ 1/2 keeps the basis near-rectangular.
            let shift = (w2 / w1).re.round();
            w2 -= w1 * shift;
            let cand = Lattice {
                omega1: w1,
                omega2: w2,
                g2,
                g3,
                roots: e,
                laurent: laurent.clone(),
                series_radius: 0.0,
            };
            let cand = cand.with_series_radius();
            let res = cand.validation_residual();
            min_res = min_res.min(res);
            if res < 1e-9 {
                passing.push((w1.arg().abs(), res, cand));
            }
        }
        // Prefer the basis with ω₁ closest to the positive real axis.
        passing.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
        match passing.into_iter().next() {
            Some((_, _, lat)) => Ok(lat),
            None => Err(MeroError::PeriodSearchFailed(min_res)),
        }
    }

    fn with_series_radius(mut self) -> Self {
        let p1 = 2.0 * self.omega1;
        let p2 = 2.0 * self.omega2;
        let mut min_lp = f64::INFINITY;
        for i in -2i32..=2 {
            for j in -2i32..=2 {
                if i == 0 && j == 0 {
                    continue;
                }
                min_lp = min_lp.min((p1 * i as f64 + p2 * j as f64).norm());
            }
        }
        self.series_radius = 0.28 * min_lp;
        self
    }

    /// Max of: distance of ℘(ω₁), ℘(ω₂), ℘(ω₁+ω₂) from the root set, and
    /// the ODE residual at a few interior points.
    fn validation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for half in [self.omega1, self.omega2, self.omega1 + self.omega2] {
            let (p, _) = self.wp(half);
            let d = self
                .roots
                .iter()
                .map(|e| (p - e).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        for (sx, sy) in [(0.23, 0.31), (0.61, 0.17), (0.43, 0.67)] {
            let z = 2.0 * self.omega1 * sx + 2.0 * self.omega2 * sy;
            worst = worst.max(self.ode_residual(z));
        }
        worst
    }

    /// |(℘′)² − (4℘³ − g₂℘ − g₃)| / (1 + |℘|³), a relative ODE residual.
    pub fn ode_residual(&self, z: Complex64) -> f64 {
        let (p, dp) = self.wp(z);
        if !p.is_finite() {
            return 0.0;
        }
        let lhs = dp * dp;
        let rhs = 4.0 * p.powu(3) - self.g2 * p - self.g3;
        (lhs - rhs).norm() / (1.0 + p.norm().powi(3))
    }

    /// Reduce z by full periods into the cell around the origin.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let p1 = 2.0 * self.omega1;
        let p2 = 2.0 * self.omega2;
        let det = p1.re * p2.im - p1.im * p2.re;
        let x = (z.re * p2.im - z.im * p2.re) / det;
        let y = (z.im * p1.re - z.re * p1.im) / det;
        let mut best = z - p1 * x.round() - p2 * y.round();
        // Neighbour scan: rounding per coordinate does not always give the
        // shortest representative in a skew lattice.
        for i in -1i32..=1 {
            for j in -1i32..=1 {
                let cand = best - p1 * i as f64 - p2 * j as f64;
                if cand.norm() < best.norm() {
                    best = cand;
                }
            }
        }
        best
    }

    /// Is z within `tol` of a lattice point?
    pub fn near_lattice_point(&self, z: Complex64, tol: f64) -> bool {
        self.reduce(z).norm() < tol
    }

    /// ℘(z) and ℘′(z). Lattice points report (∞, ∞).
    pub fn wp(&self, z: Complex64) -> (Complex64, Complex64) {
        let z0 = self.reduce(z);
        if z0.norm() < 1e-12 {
            return (
                Complex64::new(f64::INFINITY, f64::INFINITY),
                Complex64::new(f64::INFINITY, f64::INFINITY),
            );
        }
        let mut halvings = 0u32;
        let mut zs = z0;
        while zs.norm() > self.series_radius {
            zs /= 2.0;
            halvings += 1;
        }
        let (mut p, mut dp) = self.series_eval(zs);
        for _ in 0..halvings {
            let ppp = 6.0 * p * p - self.g2 / 2.0; // ℘″
            let ratio = ppp / dp;
            let p2 = ratio * ratio / 4.0 - 2.0 * p;
            let dp2 = (ratio * (12.0 * p * dp * dp - ppp * ppp) / (dp * dp)) / 4.0 - dp;
            p = p2;
            dp = dp2;
        }
        (p, dp)
    }

    fn series_eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let z2 = z * z;
        let mut p = 1.0 / z2;
        let mut dp = -2.0 / (z2 * z);
        // term c_k z^{2k−2}, derivative (2k−2) c_k z^{2k−3}
        let mut zpow = z2; // z^{2k−2} for k = 2
        for k in 2..self.laurent.len() {
            let c = self.laurent[k];
            p += c * zpow;
            dp += c * (2 * k - 2) as f64 * zpow / z;
            zpow *= z2;
        }
        (p, dp)
    }

    /// Area of one period parallelogram.
    pub fn cell_area(&self) -> f64 {
        let p1 = 2.0 * self.omega1;
        let p2 = 2.0 * self.omega2;
        (p1.re * p2.im - p1.im * p2.re).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lemniscatic_invariants_and_periods() {
        let lat = Lattice::from_cubic_roots([c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!((lat.g2 - c(4.0, 0.0)).norm() < 1e-14);
        assert!(lat.g3.norm() < 1e-14);
        // Known lemniscatic half-period π/(2 agm(√2, 1)) = 1.31102877714605990523...
        assert!((lat.omega1.re - 1.31102877714605990523).abs() < 1e-12);
        assert!(lat.omega1.im.abs() < 1e-12);
        // Square lattice: ω₂ = i·ω₁.
        assert!((lat.omega2 - c(0.0, 1.0) * lat.omega1).norm() < 1e-10);
    }

    #[test]
    fn reinders_cubic_invariants() {
        // roots (5/3, 2/3, −7/3): g2 = 52/3, g3 = −280/27.
        let lat = Lattice::from_cubic_roots([
            c(5.0 / 3.0, 0.0),
            c(2.0 / 3.0, 0.0),
            c(-7.0 / 3.0, 0.0),
        ])
        .unwrap();
        assert!((lat.g2 - c(52.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((lat.g3 - c(-280.0 / 27.0, 0.0)).norm() < 1e-12);
        // ℘(ω₁) reproduces a root.
        let (p, dp) = lat.wp(lat.omega1);
        let mind = lat
            .roots
            .iter()
            .map(|e| (p - e).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(mind < 1e-9, "℘(ω₁) off roots by {}", mind);
        assert!(dp.norm() < 1e-8);
    }

    #[test]
    fn ode_residual_random_points() {
        let lat = Lattice::from_cubic_roots([
            c(5.0 / 3.0, 0.0),
            c(2.0 / 3.0, 0.0),
            c(-7.0 / 3.0, 0.0),
        ])
        .unwrap();
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..100 {
            let z = 2.0 * lat.omega1 * next() + 2.0 * lat.omega2 * next();
            if lat.near_lattice_point(z, 1e-3) {
                continue;
            }
            assert!(lat.ode_residual(z) < 1e-9, "res {} at {}", lat.ode_residual(z), z);
        }
    }

    #[test]
    fn periodicity_and_parity() {
        let lat = Lattice::from_cubic_roots([c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let z = c(0.311, 0.522);
        let (p, dp) = lat.wp(z);
        let (pp, dpp) = lat.wp(z + 2.0 * lat.omega1);
        assert!((p - pp).norm() < 1e-10);
        assert!((dp - dpp).norm() < 1e-10);
        let (pm, dpm) = lat.wp(-z);
        assert!((p - pm).norm() < 1e-10);
        assert!((dp + dpm).norm() < 1e-10);
    }

    #[test]
    fn complex_root_triple_lattice() {
        // Roots of 4v(v+1)(v−α) shifted to sum zero, α = (1+i√3)/2.
        let alpha = c(0.5, 0.5 * 3f64.sqrt());
        let shift = (alpha - 1.0) / 3.0;
        let e = [
            -shift,
            c(-1.0, 0.0) - shift,
            alpha - shift,
        ];
        let lat = Lattice::from_cubic_roots(e).unwrap();
        // Differential equation for v = ℘ + shift: (v′)² = 4v(v+1)(v−α).
        let mut seed = 777u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..100 {
            let z = 2.0 * lat.omega1 * next() + 2.0 * lat.omega2 * next();
            if lat.near_lattice_point(z, 1e-3) {
                continue;
            }
            let (p, dp) = lat.wp(z);
            let v = p + shift;
            let lhs = dp * dp;
            let rhs = 4.0 * v * (v + 1.0) * (v - alpha);
            assert!(
                (lhs - rhs).norm() / (1.0 + v.norm().powi(3)) < 1e-9,
                "residual {} at {}",
                (lhs - rhs).norm(),
                z
            );
        }
    }

    #[test]
    fn rejects_bad_roots() {
        assert!(matches!(
            Lattice::from_cubic_roots([c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]),
            Err(MeroError::CoincidentRoots)
        ));
        assert!(matches!(
            Lattice::from_cubic_roots([c(1.0, 0.0), c(0.5, 0.0), c(-1.0, 0.0)]),
            Err(MeroError::RootSumNonzero(_))
        ));
    }
}
