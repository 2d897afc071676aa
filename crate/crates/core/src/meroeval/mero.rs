//! Numerically evaluable meromorphic functions on ℂ.
//!
//! Three carriers: rational functions of e^z, elliptic expressions built on
//! Weierstrass ℘, and the branches of the value-sharing cubic
//! w³ + 3[(ᾱ+1)u² + 2u]w² − 3[2u² + (α+1)u]w − u³ = 0 over an elliptic u.
//! Each evaluation reports value and first two z-derivatives; the first two
//! carriers differentiate exactly through their derivation models, the
//! branches differentiate implicitly. Branch identity is fixed by continuous
//! tracking from a base point, which makes [`MeroFunc::eval`] deterministic;
//! [`MeroFunc::eval_path`] tracks sequentially along the given path and is
//! the fast way of evaluating along a contour.

use super::cubic::{cubic_discriminant, solve_monic_cubic};
use super::lattice::{Lattice, MeroError};
use crate::exactfield::{ExactFunc, Model};
use num_complex::Complex64;
use std::sync::Arc;

const INF: Complex64 = Complex64::new(f64::INFINITY, f64::INFINITY);

/// Value and derivatives of a meromorphic function at a point.
///
/// `pole = true` marks an exact pole hit: the numeric fields are then
/// sentinels and consumers should perturb the sample point.
#[derive(Clone, Copy, Debug)]
pub struct EvalPoint {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub pole: bool,
}

impl EvalPoint {
    fn pole() -> Self {
        EvalPoint {
            value: INF,
            d1: INF,
            d2: INF,
            pole: true,
        }
    }

    fn finite(value: Complex64, d1: Complex64, d2: Complex64) -> Self {
        if value.is_finite() && d1.is_finite() {
            EvalPoint {
                value,
                d1,
                d2,
                pole: false,
            }
        } else {
            EvalPoint::pole()
        }
    }
}

/// Chordal (Riemann-sphere) distance, stable for large and infinite values.
pub fn chordal(a: Complex64, b: Complex64) -> f64 {
    const BIG: f64 = 1e100;
    match (a.is_finite(), b.is_finite()) {
        (false, false) => 0.0,
        (false, true) => 1.0 / (1.0 + b.norm_sqr()).sqrt(),
        (true, false) => 1.0 / (1.0 + a.norm_sqr()).sqrt(),
        (true, true) => {
            let (na, nb) = (a.norm(), b.norm());
            if na > BIG && nb > BIG {
                let ia = 1.0 / a;
                let ib = 1.0 / b;
                (ia - ib).norm() / ((1.0 + ia.norm_sqr()).sqrt() * (1.0 + ib.norm_sqr()).sqrt())
            } else if na > BIG {
                // indistinguishable from ∞ at this scale
                1.0 / (1.0 + nb * nb).sqrt()
            } else if nb > BIG {
                1.0 / (1.0 + na * na).sqrt()
            } else {
                (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }
}

/// Rational function of e^z with exact derivatives.
#[derive(Clone, Debug)]
pub struct ExpRational {
    pub expr: ExactFunc,
    d1: ExactFunc,
    d2: ExactFunc,
}

impl ExpRational {
    pub fn new(expr: ExactFunc) -> Self {
        assert!(matches!(expr.model(), Model::Exp), "exp-model carrier required");
        let d1 = expr.derive();
        let d2 = d1.derive();
        ExpRational { expr, d1, d2 }
    }

    fn eval(&self, z: Complex64) -> EvalPoint {
        let u = z.exp();
        EvalPoint::finite(
            self.expr.eval_complex(u, Complex64::new(0.0, 0.0)),
            self.d1.eval_complex(u, Complex64::new(0.0, 0.0)),
            self.d2.eval_complex(u, Complex64::new(0.0, 0.0)),
        )
    }
}

/// Elliptic expression: `expr` over the carrier u(z) = ℘(s·z + c) + u₀,
/// with y = u′ and (u′)² = P(u) matched to the lattice.
#[derive(Clone, Debug)]
pub struct EllipticRational {
    pub expr: ExactFunc,
    d1: ExactFunc,
    d2: ExactFunc,
    pub lattice: Lattice,
    pub scale: Complex64,
    pub shift: Complex64,
    pub u_offset: Complex64,
}

impl EllipticRational {
    /// Build the carrier from the model's cubic: roots rⱼ of P give
    /// u₀ = Σrⱼ/3, lattice roots eⱼ = rⱼ − u₀ and scale s = √(lc/4).
    pub fn from_ode(expr: ExactFunc, shift: Complex64) -> Result<Self, MeroError> {
        let p = expr
            .model()
            .curve_poly()
            .expect("elliptic model carrier required")
            .clone();
        let roots = p.complex_roots();
        assert_eq!(roots.len(), 3, "cubic carrier expected");
        let u_offset = (roots[0] + roots[1] + roots[2]) / 3.0;
        let e = [
            roots[0] - u_offset,
            roots[1] - u_offset,
            roots[2] - u_offset,
        ];
        let lattice = Lattice::from_cubic_roots(e)?;
        let lc = p.leading().to_complex();
        let scale = (lc / 4.0).sqrt();
        let d1 = expr.derive();
        let d2 = d1.derive();
        Ok(EllipticRational {
            expr,
            d1,
            d2,
            lattice,
            scale,
            shift,
            u_offset,
        })
    }

    /// The carrier value u(z) and its derivative y(z) = u′(z).
    pub fn carrier(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let w = self.scale * z + self.shift;
        let (p, pp) = self.lattice.wp(w);
        if !p.is_finite() {
            return None;
        }
        Some((p + self.u_offset, self.scale * pp))
    }

    fn eval(&self, z: Complex64) -> EvalPoint {
        match self.carrier(z) {
            None => EvalPoint::pole(),
            Some((u, y)) => EvalPoint::finite(
                self.expr.eval_complex(u, y),
                self.d1.eval_complex(u, y),
                self.d2.eval_complex(u, y),
            ),
        }
    }

    /// Fundamental periods of z (not of the internal ℘ argument).
    pub fn z_periods(&self) -> (Complex64, Complex64) {
        (
            2.0 * self.lattice.omega1 / self.scale,
            2.0 * self.lattice.omega2 / self.scale,
        )
    }
}

/// The three branches of the sharing cubic over an elliptic carrier.
#[derive(Clone, Debug)]
pub struct TripleSystem {
    pub alpha: Complex64,
    alpha_bar: Complex64,
    pub u_source: EllipticRational,
    base_z: Complex64,
    base_roots: [Complex64; 3],
}

/// Roots of the sharing cubic at carrier value u (w-space; may be ∞).
fn sharing_cubic_roots(alpha: Complex64, alpha_bar: Complex64, u: Option<Complex64>) -> [Complex64; 3] {
    match u {
        None => [INF; 3],
        Some(u) if u.norm() <= 1.0 => {
            let c2 = 3.0 * ((alpha_bar + 1.0) * u * u + 2.0 * u);
            let c1 = -3.0 * (2.0 * u * u + (alpha + 1.0) * u);
            let c0 = -u * u * u;
            solve_monic_cubic(c2, c1, c0)
        }
        Some(u) => {
            // Work in x = 1/w, t = 1/u: same cubic shape with α ↔ ᾱ.
            let t = 1.0 / u;
            let c2 = 3.0 * ((alpha + 1.0) * t * t + 2.0 * t);
            let c1 = -3.0 * (2.0 * t * t + (alpha_bar + 1.0) * t);
            let c0 = -t * t * t;
            let xs = solve_monic_cubic(c2, c1, c0);
            [inv_or_inf(xs[0]), inv_or_inf(xs[1]), inv_or_inf(xs[2])]
        }
    }
}

fn inv_or_inf(x: Complex64) -> Complex64 {
    if x.norm() < 1e-300 {
        INF
    } else {
        1.0 / x
    }
}

fn min_pairwise_chordal(r: &[Complex64; 3]) -> f64 {
    chordal(r[0], r[1])
        .min(chordal(r[1], r[2]))
        .min(chordal(r[0], r[2]))
}

/// Best assignment of new roots to previous ones under chordal distance.
fn match_roots(prev: &[Complex64; 3], new: &[Complex64; 3]) -> ([Complex64; 3], f64) {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best = ([new[0], new[1], new[2]], f64::INFINITY);
    for perm in PERMS {
        let cand = [new[perm[0]], new[perm[1]], new[perm[2]]];
        let worst = (0..3)
            .map(|i| chordal(prev[i], cand[i]))
            .fold(0.0f64, f64::max);
        if worst < best.1 {
            best = (cand, worst);
        }
    }
    best
}

impl TripleSystem {
    /// Fix branch indices by choosing a base point of maximal root
    /// separation on a coarse grid over one period parallelogram.
    pub fn new(alpha: Complex64, u_source: EllipticRational) -> Result<Arc<Self>, MeroError> {
        assert!(
            (alpha.powu(3) + 1.0).norm() < 1e-12 && (alpha + 1.0).norm() > 1e-6,
            "alpha must be a third root of -1 other than -1"
        );
        let alpha_bar = alpha.conj();
        let (p1, p2) = u_source.z_periods();
        let mut best: Option<(f64, Complex64, [Complex64; 3])> = None;
        let n = 13;
        for i in 1..n {
            for j in 1..n {
                let z = p1 * (i as f64 / n as f64) + p2 * (j as f64 / n as f64);
                let u = u_source.carrier(z).map(|(u, _)| u);
                if u.is_none() {
                    continue;
                }
                let roots = sharing_cubic_roots(alpha, alpha_bar, u);
                if roots.iter().any(|r| !r.is_finite()) {
                    continue;
                }
                let sep = min_pairwise_chordal(&roots);
                if best.as_ref().map_or(true, |(s, _, _)| sep > *s) {
                    best = Some((sep, z, roots));
                }
            }
        }
        let (_, base_z, mut base_roots) =
            best.ok_or(MeroError::PeriodSearchFailed(f64::INFINITY))?;
        // Canonical index order at the base point.
        base_roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        Ok(Arc::new(TripleSystem {
            alpha,
            alpha_bar,
            u_source,
            base_z,
            base_roots,
        }))
    }

    fn roots_at(&self, z: Complex64) -> [Complex64; 3] {
        let u = self.u_source.carrier(z).map(|(u, _)| u);
        sharing_cubic_roots(self.alpha, self.alpha_bar, u)
    }

    /// Continue the root triple from (z0, roots0) to z1, subdividing when
    /// the assignment is ambiguous and bending around obstacles.
    fn track_segment(
        &self,
        z0: Complex64,
        roots0: [Complex64; 3],
        z1: Complex64,
        depth: u32,
    ) -> Result<[Complex64; 3], MeroError> {
        let new = self.roots_at(z1);
        let (matched, movement) = match_roots(&roots0, &new);
        let sep0 = min_pairwise_chordal(&roots0);
        let sep1 = min_pairwise_chordal(&matched);
        // Accept only when the motion is small against the separation at
        // both ends; confusing two branches needs movement ≳ sep/2.
        let tol = 0.2 * sep0.min(sep1);
        if movement <= tol || (z1 - z0).norm() <= 1e-13 {
            return Ok(matched);
        }
        if depth >= 60 {
            return Err(MeroError::TrackingFailure(z1));
        }
        // Choose a midpoint to anchor the continuation. A midpoint whose
        // root triple is degenerate (carrier pole or near a shared-value
        // point) cannot anchor anything; bend sideways off the segment.
        let straight = (z0 + z1) / 2.0;
        let offset = Complex64::new(0.0, 1.0) * (z1 - z0) * 0.3;
        let floor = 1e-6f64.min(0.5 * sep0.max(sep1));
        let mut mid = straight;
        for bend in 0..4 {
            let probe = self.roots_at(mid);
            if probe.iter().all(|r| r.is_finite()) && min_pairwise_chordal(&probe) > floor {
                break;
            }
            mid = straight + offset * (bend + 1) as f64;
        }
        let half = self.track_segment(z0, roots0, mid, depth + 1)?;
        self.track_segment(mid, half, z1, depth + 1)
    }

    /// Branch triple at z, tracked from the base point.
    pub fn branches_at(&self, z: Complex64) -> Result<[Complex64; 3], MeroError> {
        self.track_segment(self.base_z, self.base_roots, z, 0)
    }

    /// Track along a full path, reusing the state between consecutive
    /// points. Deterministic for a fixed path.
    pub fn branches_along(&self, path: &[Complex64]) -> Result<Vec<[Complex64; 3]>, MeroError> {
        let mut out = Vec::with_capacity(path.len());
        let mut state = (self.base_z, self.base_roots);
        for &z in path {
            let roots = self.track_segment(state.0, state.1, z, 0)?;
            // Do not anchor continuation on a degenerate state: poles and
            // branch points accept any assignment.
            if roots.iter().all(|r| r.is_finite()) && min_pairwise_chordal(&roots) > 1e-8 {
                state = (z, roots);
            }
            out.push(roots);
        }
        Ok(out)
    }

    /// Permutation of branch indices induced by one carrier period:
    /// continuing branch i along `period` lands on branch `perm[i]`.
    pub fn period_permutation(&self, period: Complex64) -> Result<[usize; 3], MeroError> {
        let start = self.base_z;
        let n = 600;
        let path: Vec<Complex64> = (0..=n)
            .map(|k| start + period * (k as f64 / n as f64))
            .collect();
        let along = self.branches_along(&path)?;
        let first = along.first().unwrap();
        let last = along.last().unwrap();
        let mut perm = [usize::MAX; 3];
        for i in 0..3 {
            for j in 0..3 {
                if chordal(last[i], first[j]) < 1e-6 {
                    perm[i] = j;
                }
            }
            if perm[i] == usize::MAX {
                return Err(MeroError::TrackingFailure(start + period));
            }
        }
        Ok(perm)
    }

    /// Period lattice of the branch functions themselves: the sublattice of
    /// carrier periods whose permutation is trivial (index 1 or 3).
    pub fn branch_lattice(&self) -> Result<(Complex64, Complex64), MeroError> {
        let (p1, p2) = self.u_source.z_periods();
        let k1 = cycle_power(self.period_permutation(p1)?);
        let k2 = cycle_power(self.period_permutation(p2)?);
        let basis = match (k1, k2) {
            (0, 0) => (p1, p2),
            (_, 0) => (p1 * 3.0, p2),
            (0, _) => (p1, p2 * 3.0),
            (a, b) => {
                // m·a + n·b ≡ 0 (mod 3) with m = 1: n = −a·b⁻¹ mod 3.
                let inv_b = if b == 1 { 1 } else { 2 };
                let n = ((3 - a) * inv_b) % 3;
                (p1 + p2 * n as f64, p2 * 3.0)
            }
        };
        // The basis change must act trivially.
        for v in [basis.0, basis.1] {
            let perm = self.period_permutation(v)?;
            if perm != [0, 1, 2] {
                return Err(MeroError::TrackingFailure(self.base_z + v));
            }
        }
        Ok(basis)
    }

    /// Discriminant of the sharing cubic at z (zero at shared-value points).
    pub fn discriminant_at(&self, z: Complex64) -> Complex64 {
        match self.u_source.carrier(z) {
            None => INF,
            Some((u, _)) => {
                let c2 = 3.0 * ((self.alpha_bar + 1.0) * u * u + 2.0 * u);
                let c1 = -3.0 * (2.0 * u * u + (self.alpha + 1.0) * u);
                let c0 = -u * u * u;
                cubic_discriminant(c2, c1, c0)
            }
        }
    }

    /// Value and two derivatives of one branch, by implicit differentiation.
    fn eval_branch(&self, z: Complex64, w: Complex64) -> EvalPoint {
        let carrier = match self.u_source.carrier(z) {
            Some(c) => c,
            None => return EvalPoint::pole(),
        };
        let (u, du) = carrier;
        let d2u = self.u_source.eval(z).d2;
        if !w.is_finite() {
            return EvalPoint::pole();
        }
        if u.norm() <= 1.0 {
            let (wd1, wd2) = implicit_derivs(self.alpha, self.alpha_bar, u, du, d2u, w);
            EvalPoint::finite(w, wd1, wd2)
        } else {
            // Differentiate x(t) on the inverted cubic, then map back.
            let t = 1.0 / u;
            let dt = -du / (u * u);
            let d2t = -d2u / (u * u) + 2.0 * du * du / (u * u * u);
            let x = 1.0 / w;
            let (xd1, xd2) = implicit_derivs(self.alpha_bar, self.alpha, t, dt, d2t, x);
            let wd1 = -xd1 / (x * x);
            let wd2 = -xd2 / (x * x) + 2.0 * xd1 * xd1 / (x * x * x);
            EvalPoint::finite(w, wd1, wd2)
        }
    }
}

/// Power k with perm = (0→1→2→0)^k; panics on non-cyclic permutations,
/// which cannot arise from continuation of a single-valued triple.
fn cycle_power(perm: [usize; 3]) -> usize {
    match perm {
        [0, 1, 2] => 0,
        [1, 2, 0] => 1,
        [2, 0, 1] => 2,
        other => panic!("period permutation {:?} is not a 3-cycle power", other),
    }
}

/// First and second z-derivatives of a root w of the sharing cubic, given
/// the carrier value and derivatives. Template polynomial:
/// F(w, u) = w³ + 3[(ᾱ+1)u² + 2u]w² − 3[2u² + (α+1)u]w − u³.
fn implicit_derivs(
    alpha: Complex64,
    alpha_bar: Complex64,
    u: Complex64,
    du: Complex64,
    d2u: Complex64,
    w: Complex64,
) -> (Complex64, Complex64) {
    let a2 = 3.0 * ((alpha_bar + 1.0) * u * u + 2.0 * u);
    let a1 = -3.0 * (2.0 * u * u + (alpha + 1.0) * u);
    let da2 = 6.0 * (alpha_bar + 1.0) * u + 6.0;
    let da1 = -12.0 * u - 3.0 * (alpha + 1.0);
    let da0 = -3.0 * u * u;
    let dda2 = 6.0 * (alpha_bar + 1.0);
    let dda1 = Complex64::new(-12.0, 0.0);
    let dda0 = -6.0 * u;

    let f_w = (3.0 * w + 2.0 * a2) * w + a1;
    let f_u = (da2 * w + da1) * w + da0;
    let f_ww = 6.0 * w + 2.0 * a2;
    let f_wu = 2.0 * da2 * w + da1;
    let f_uu = (dda2 * w + dda1) * w + dda0;

    let wd1 = -f_u * du / f_w;
    let wd2 = -(f_ww * wd1 * wd1
        + 2.0 * f_wu * wd1 * du
        + f_uu * du * du
        + f_u * d2u)
        / f_w;
    (wd1, wd2)
}

/// A numerically evaluable meromorphic function.
#[derive(Clone, Debug)]
pub enum MeroFunc {
    RationalOfExp(Arc<ExpRational>),
    EllipticRat(Arc<EllipticRational>),
    TripleBranch {
        system: Arc<TripleSystem>,
        index: usize,
    },
}

impl MeroFunc {
    pub fn rational_of_exp(expr: ExactFunc) -> Self {
        MeroFunc::RationalOfExp(Arc::new(ExpRational::new(expr)))
    }

    pub fn elliptic(expr: ExactFunc, shift: Complex64) -> Result<Self, MeroError> {
        Ok(MeroFunc::EllipticRat(Arc::new(EllipticRational::from_ode(
            expr, shift,
        )?)))
    }

    pub fn triple_branch(system: Arc<TripleSystem>, index: usize) -> Self {
        assert!(index < 3);
        MeroFunc::TripleBranch { system, index }
    }

    pub fn eval(&self, z: Complex64) -> EvalPoint {
        match self {
            MeroFunc::RationalOfExp(r) => r.eval(z),
            MeroFunc::EllipticRat(e) => e.eval(z),
            MeroFunc::TripleBranch { system, index } => match system.branches_at(z) {
                Ok(roots) => system.eval_branch(z, roots[*index]),
                Err(_) => EvalPoint::pole(),
            },
        }
    }

    /// Evaluate along a path; for tracked branches consecutive points reuse
    /// the tracking state, so sampling a contour in order is fast.
    pub fn eval_path(&self, path: &[Complex64]) -> Vec<EvalPoint> {
        match self {
            MeroFunc::TripleBranch { system, index } => match system.branches_along(path) {
                Ok(all) => path
                    .iter()
                    .zip(all)
                    .map(|(&z, roots)| system.eval_branch(z, roots[*index]))
                    .collect(),
                Err(_) => path.iter().map(|_| EvalPoint::pole()).collect(),
            },
            _ => path.iter().map(|&z| self.eval(z)).collect(),
        }
    }

    /// Spherical derivative |f′|/(1 + |f|²), via 1/f on the big side of the
    /// sphere; exact pole hits fall back to a tiny deterministic offset.
    pub fn spherical(&self, z: Complex64) -> f64 {
        let mut ev = self.eval(z);
        if ev.pole {
            ev = self.eval(z + Complex64::new(1.3e-7, 0.7e-7));
            if ev.pole {
                return 0.0;
            }
        }
        spherical_from(ev.value, ev.d1)
    }

    /// Minimal distance between distinct value points, used to bound the
    /// subdivision depth of counting contours.
    pub fn separation_hint(&self) -> f64 {
        match self {
            MeroFunc::RationalOfExp(_) => 0.8,
            MeroFunc::EllipticRat(e) => {
                let (p1, p2) = e.z_periods();
                0.2 * p1.norm().min(p2.norm())
            }
            MeroFunc::TripleBranch { system, .. } => {
                let (p1, p2) = system.u_source.z_periods();
                0.15 * p1.norm().min(p2.norm())
            }
        }
    }

    pub fn id(&self) -> String {
        match self {
            MeroFunc::RationalOfExp(r) => format!("exp-rational {}", r.expr),
            MeroFunc::EllipticRat(e) => format!("elliptic {}", e.expr),
            MeroFunc::TripleBranch { index, .. } => format!("triple branch {}", index),
        }
    }

    pub fn walker(&self) -> MeroWalker {
        MeroWalker::new(self)
    }
}

/// Stateful evaluator: for tracked branches it remembers the last tracking
/// state, so successive nearby paths avoid re-walking from the base point.
/// Results are deterministic for a fixed call sequence.
pub struct MeroWalker {
    f: MeroFunc,
    state: Option<(Complex64, [Complex64; 3])>,
}

impl MeroWalker {
    pub fn new(f: &MeroFunc) -> Self {
        MeroWalker {
            f: f.clone(),
            state: None,
        }
    }

    pub fn eval_path(&mut self, path: &[Complex64]) -> Vec<EvalPoint> {
        match &self.f {
            MeroFunc::TripleBranch { system, index } => {
                let mut out = Vec::with_capacity(path.len());
                let mut state = self
                    .state
                    .unwrap_or((system.base_z, system.base_roots));
                for &z in path {
                    match system.track_segment(state.0, state.1, z, 0) {
                        Ok(roots) => {
                            if roots.iter().all(|r| r.is_finite())
                                && min_pairwise_chordal(&roots) > 1e-8
                            {
                                state = (z, roots);
                            }
                            out.push(system.eval_branch(z, roots[*index]));
                        }
                        Err(_) => out.push(EvalPoint::pole()),
                    }
                }
                self.state = Some(state);
                out
            }
            _ => self.f.eval_path(path),
        }
    }

    pub fn eval(&mut self, z: Complex64) -> EvalPoint {
        self.eval_path(&[z])[0]
    }
}

pub fn spherical_from(value: Complex64, d1: Complex64) -> f64 {
    if value.norm() <= 1.0 {
        d1.norm() / (1.0 + value.norm_sqr())
    } else {
        let g = 1.0 / value;
        let gd = -d1 * g * g;
        gd.norm() / (1.0 + g.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Coeff, Poly};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn exp_z() -> MeroFunc {
        MeroFunc::rational_of_exp(ExactFunc::var(Model::Exp))
    }

    #[test]
    fn exp_value_and_derivatives() {
        let f = exp_z();
        let z = c(0.3, -0.7);
        let ev = f.eval(z);
        assert!((ev.value - z.exp()).norm() < 1e-14);
        assert!((ev.d1 - z.exp()).norm() < 1e-14);
        assert!((ev.d2 - z.exp()).norm() < 1e-14);
    }

    #[test]
    fn finite_difference_consistency_exp() {
        // f = (u+1)/(u−1)²
        let f = MeroFunc::rational_of_exp(ExactFunc::rational(
            Poly::from_ints(&[1, 1]),
            Poly::from_ints(&[1, -2, 1]),
            Model::Exp,
        ));
        let z = c(0.37, 1.21);
        let h = 1e-5;
        let ev = f.eval(z);
        let fd = (f.eval(z + c(h, 0.0)).value - f.eval(z - c(h, 0.0)).value) / (2.0 * h);
        assert!((fd - ev.d1).norm() / ev.d1.norm() < 1e-6);
    }

    #[test]
    fn spherical_of_exp_at_origin() {
        let f = exp_z();
        assert!((f.spherical(c(0.0, 0.0)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spherical_of_constant_is_zero() {
        let f = MeroFunc::rational_of_exp(ExactFunc::constant(Coeff::rat(3, 2), Model::Exp));
        assert_eq!(f.spherical(c(1.0, 2.0)), 0.0);
        let t = f.eval(c(0.4, 0.1));
        assert!(t.d1.norm() == 0.0 && !t.pole);
    }

    fn reinders_u() -> EllipticRational {
        // (u′)² = 12u(u+1)(u+4)
        let model = Model::elliptic(Poly::from_ints(&[0, 48, 60, 12]));
        EllipticRational::from_ode(ExactFunc::var(model), c(0.0, 0.0)).unwrap()
    }

    #[test]
    fn reinders_carrier_satisfies_ode() {
        let u = reinders_u();
        // u(z) = ℘(√3 z) − 5/3 up to lattice normalization.
        assert!((u.scale - c(3f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((u.u_offset - c(-5.0 / 3.0, 0.0)).norm() < 1e-9);
        let mut seed = 99u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64)
        };
        let (p1, p2) = u.z_periods();
        for _ in 0..100 {
            let z = p1 * next() + p2 * next();
            if let Some((uu, yy)) = u.carrier(z) {
                let res = (yy * yy - 12.0 * uu * (uu + 1.0) * (uu + 4.0)).norm()
                    / (1.0 + uu.norm().powi(3));
                assert!(res < 1e-9, "ODE residual {} at {}", res, z);
            }
        }
    }

    #[test]
    fn elliptic_eval_derivative_fd() {
        let u = reinders_u();
        let f = MeroFunc::EllipticRat(Arc::new(u));
        let z = c(0.21, 0.13);
        let ev = f.eval(z);
        let h = 1e-5;
        let fd = (f.eval(z + c(h, 0.0)).value - f.eval(z - c(h, 0.0)).value) / (2.0 * h);
        assert!(
            (fd - ev.d1).norm() / ev.d1.norm().max(1.0) < 1e-6,
            "fd {} vs d1 {}",
            fd,
            ev.d1
        );
        let fd2 = (f.eval(z + c(h, 0.0)).d1 - f.eval(z - c(h, 0.0)).d1) / (2.0 * h);
        assert!((fd2 - ev.d2).norm() / ev.d2.norm().max(1.0) < 1e-6);
    }

    #[test]
    fn elliptic_double_periodicity() {
        let u = reinders_u();
        let (p1, p2) = u.z_periods();
        let f = MeroFunc::EllipticRat(Arc::new(u));
        let z = c(0.17, 0.05);
        let a = f.eval(z).value;
        let b = f.eval(z + p1).value;
        let d = f.eval(z + p2).value;
        assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
        assert!((a - d).norm() < 1e-9 * (1.0 + a.norm()));
    }

    fn triple_system() -> Arc<TripleSystem> {
        let alpha = c(0.5, 0.5 * 3f64.sqrt());
        let alpha_exact = &Coeff::rat(1, 2) + &Coeff::sqrt_term(1, 2, -3);
        // Carrier (u′)² = 4u(u+1)(u+α) = 4u³ + 4(1+α)u² + 4αu, ramified over
        // the collision points {0, −1, −α, ∞} of the sharing cubic.
        let four = Coeff::int(4);
        let p = Poly::new(vec![
            Coeff::zero(),
            &four * &alpha_exact,
            &four * &(&Coeff::one() + &alpha_exact),
            four.clone(),
        ]);
        let model = Model::elliptic(p);
        let u = EllipticRational::from_ode(ExactFunc::var(model), c(0.0, 0.0)).unwrap();
        TripleSystem::new(alpha, u).unwrap()
    }

    #[test]
    fn triple_branches_are_single_valued() {
        let sys = triple_system();
        let (p1, p2) = sys.u_source.z_periods();
        for (cx, cy, r) in [(0.4, 0.4, 0.2), (0.3, 0.6, 0.35), (0.52, 0.21, 0.45)] {
            let n = 240;
            let path: Vec<Complex64> = (0..=n)
                .map(|k| {
                    let t = k as f64 / n as f64 * std::f64::consts::TAU;
                    p1 * cx + p2 * cy + c(t.cos(), t.sin()) * r * p1.norm()
                })
                .collect();
            let rr = sys.branches_along(&path).unwrap();
            let first = rr.first().unwrap();
            let last = rr.last().unwrap();
            for i in 0..3 {
                assert!(
                    chordal(first[i], last[i]) < 1e-9,
                    "monodromy on loop ({},{},{})",
                    cx,
                    cy,
                    r
                );
            }
        }
    }

    #[test]
    fn triple_branch_lattice_has_index_three() {
        let sys = triple_system();
        let (p1, p2) = sys.u_source.z_periods();
        let (b1, b2) = sys.branch_lattice().unwrap();
        let cell = |a: Complex64, b: Complex64| (a.re * b.im - a.im * b.re).abs();
        let ratio = cell(b1, b2) / cell(p1, p2);
        assert!((ratio - 3.0).abs() < 1e-9, "index {}", ratio);
    }

    #[test]
    fn triple_vieta_relations() {
        let sys = triple_system();
        let (p1, p2) = sys.u_source.z_periods();
        let mut seed = 4242u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64)
        };
        let mut checked = 0;
        for _ in 0..60 {
            let z = p1 * next() + p2 * next();
            let (u, _) = match sys.u_source.carrier(z) {
                Some(t) => t,
                None => continue,
            };
            if u.norm() > 1.0 {
                continue; // sum/product relations checked in w-chart
            }
            let roots = sys.branches_at(z).unwrap();
            let sum: Complex64 = roots.iter().sum();
            let prod = roots[0] * roots[1] * roots[2];
            let expect_sum = -3.0 * ((sys.alpha.conj() + 1.0) * u * u + 2.0 * u);
            assert!(
                (sum - expect_sum).norm() < 1e-9 * (1.0 + expect_sum.norm()),
                "sum {} expect {}",
                sum,
                expect_sum
            );
            let expect_prod = u * u * u;
            assert!((prod - expect_prod).norm() < 1e-9 * (1.0 + expect_prod.norm()));
            checked += 1;
        }
        assert!(checked > 10);
    }

    #[test]
    fn triple_branch_continuity_and_fd() {
        let sys = triple_system();
        let f = MeroFunc::triple_branch(sys.clone(), 1);
        let (p1, p2) = sys.u_source.z_periods();
        let z = p1 * 0.31 + p2 * 0.22;
        let ev = f.eval(z);
        assert!(!ev.pole);
        let h = 1e-6;
        let fd = (f.eval(z + c(h, 0.0)).value - f.eval(z - c(h, 0.0)).value) / (2.0 * h);
        assert!(
            (fd - ev.d1).norm() / ev.d1.norm().max(1.0) < 1e-5,
            "fd {} d1 {}",
            fd,
            ev.d1
        );
    }

    #[test]
    fn triple_residual_in_cubic() {
        let sys = triple_system();
        let (p1, p2) = sys.u_source.z_periods();
        let mut seed = 31337u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64)
        };
        let mut checked = 0;
        for _ in 0..60 {
            let z = p1 * next() + p2 * next();
            let (u, _) = match sys.u_source.carrier(z) {
                Some(t) => t,
                None => continue,
            };
            if u.norm() > 1e3 {
                continue;
            }
            let roots = sys.branches_at(z).unwrap();
            let coeff_scale = 1.0 + u.norm().powi(3);
            for w in roots {
                if !w.is_finite() || w.norm() > 1e6 {
                    continue;
                }
                let f = ((w + 3.0 * ((sys.alpha.conj() + 1.0) * u * u + 2.0 * u)) * w
                    - 3.0 * (2.0 * u * u + (sys.alpha + 1.0) * u))
                    * w
                    - u * u * u;
                assert!(
                    f.norm() / (coeff_scale * (1.0 + w.norm_sqr() * w.norm())) < 1e-8,
                    "residual {} at u {}",
                    f.norm(),
                    u
                );
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn triple_all_branches_vanish_with_u() {
        // Wherever u = 0, all three roots are 0 (w³ = 0).
        let sys = triple_system();
        let roots = sharing_cubic_roots(sys.alpha, sys.alpha_bar, Some(c(0.0, 0.0)));
        for r in roots {
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn eval_path_matches_pointwise_eval() {
        let sys = triple_system();
        let f = MeroFunc::triple_branch(sys.clone(), 0);
        let (p1, p2) = sys.u_source.z_periods();
        let path: Vec<Complex64> = (0..40)
            .map(|k| {
                let t = k as f64 / 40.0 * std::f64::consts::TAU;
                p1 * 0.4 + p2 * 0.4 + c(t.cos(), t.sin()) * 0.2 * p1.norm()
            })
            .collect();
        let along = f.eval_path(&path);
        for (z, ev) in path.iter().zip(along.iter()) {
            if ev.pole {
                continue;
            }
            let direct = f.eval(*z);
            assert!(
                (direct.value - ev.value).norm() < 1e-8 * (1.0 + ev.value.norm()),
                "branch mismatch at {}",
                z
            );
        }
    }
}
