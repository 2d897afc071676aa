//! Localization of a-points (and poles) in closed disks by the argument
//! principle on a subdivision of the bounding square.
//!
//! Windings along cell boundaries are computed by phase accumulation with
//! adaptive sampling (adjacent phase steps below π/2) and cross-checked by
//! the trapezoid integral of h′/h, which must land within 0.1 of the
//! integer. Cells are subdivided unconditionally until their diameter is
//! under the function's point-separation bound (so a zero–pole pair cannot
//! hide in a winding-0 cell), then winding-positive cells are refined by
//! Newton iteration with multiplicity acceleration; a cluster that refuses
//! to separate below diameter 1e−8 is reported with the cell's count as its
//! multiplicity. Points within 1e−6 of the circle bump the radius by the
//! documented factor 1+1e−4 (at most three times).

use crate::meroeval::{EvalPoint, MeroFunc, MeroWalker};
use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum NevError {
    #[error("contour passes through an a-point even after radius nudges")]
    ContourThroughPoint,
    #[error("argument-principle integral not within 0.1 of an integer ({0})")]
    NonIntegerContour(f64),
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("sharing violated: {0}")]
    SharingInconsistency(String),
    #[error("precision failure: {0}")]
    PrecisionFailure(String),
    #[error("profile is missing the series `{0}`")]
    MissingSeries(String),
}

/// What to count: a-points of a finite value, or poles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Value(Complex64),
    Inf,
}

impl Target {
    /// h and h′ of the test function whose zeros are the sought points.
    fn h(&self, ev: &EvalPoint) -> (Complex64, Complex64) {
        match self {
            Target::Value(a) => (ev.value - a, ev.d1),
            Target::Inf => {
                if ev.pole {
                    (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
                } else {
                    let inv = 1.0 / ev.value;
                    (inv, -ev.d1 * inv * inv)
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Target::Value(a) => format!("{}", a),
            Target::Inf => "inf".to_string(),
        }
    }
}

/// One located point with its multiplicity.
#[derive(Clone, Copy, Debug)]
pub struct APoint {
    pub z: Complex64,
    pub multiplicity: usize,
}

/// The a-points of a function within |z| ≤ radius.
#[derive(Clone, Debug)]
pub struct APointList {
    pub target: Target,
    pub radius: f64,
    pub points: Vec<APoint>,
    pub total_with_mult: usize,
}

impl APointList {
    pub fn total_distinct(&self) -> usize {
        self.points.len()
    }

    /// Unintegrated counting function n(t) (with multiplicity).
    pub fn n_at(&self, t: f64) -> usize {
        self.points
            .iter()
            .filter(|p| p.z.norm() <= t)
            .map(|p| p.multiplicity)
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct LocateParams {
    /// |f − a| (or |1/f|) bound certifying a located point.
    pub root_tol: f64,
    /// Assumed minimal distance between distinct points; subdivision is
    /// unconditional above this scale.
    pub min_sep: f64,
    /// Verification of located points against the whole-circle winding.
    pub expected_from_circle: Option<i64>,
}

impl LocateParams {
    pub fn for_function(f: &MeroFunc) -> Self {
        LocateParams {
            root_tol: 1e-8,
            min_sep: f.separation_hint(),
            expected_from_circle: None,
        }
    }
}

/// Winding number of h along a closed polyline, by adaptive phase
/// accumulation, cross-checked by the trapezoid argument integral.
///
/// `corners` are the polyline vertices in order (closing edge implied).
fn winding_closed(
    walker: &mut MeroWalker,
    target: &Target,
    corners: &[Complex64],
    samples_per_edge: usize,
) -> Result<i64, NevError> {
    let n_edges = corners.len();
    let mut params: Vec<f64> = Vec::new();
    for e in 0..n_edges {
        for k in 0..samples_per_edge {
            params.push(e as f64 + k as f64 / samples_per_edge as f64);
        }
    }
    let point_at = |t: f64| -> Complex64 {
        let e = (t.floor() as usize) % n_edges;
        let frac = t - t.floor();
        let a = corners[e];
        let b = corners[(e + 1) % n_edges];
        a + (b - a) * frac
    };
    for _round in 0..28 {
        let zs: Vec<Complex64> = params.iter().map(|&t| point_at(t)).collect();
        let evs = walker.eval_path(&zs);
        let hs: Vec<(Complex64, Complex64)> = evs.iter().map(|ev| target.h(ev)).collect();
        if hs
            .iter()
            .zip(evs.iter())
            .any(|((h, _), ev)| h.norm() == 0.0 && !matches!(target, Target::Inf if ev.pole))
        {
            return Err(NevError::ContourThroughPoint);
        }
        // Phase steps, trapezoid contributions and refinement markers.
        let mut total_arg = 0.0f64;
        let mut trapz = Complex64::new(0.0, 0.0);
        let mut refine: Vec<f64> = Vec::new();
        let m = params.len();
        for k in 0..m {
            let k1 = (k + 1) % m;
            let (h0, dh0) = hs[k];
            let (h1, dh1) = hs[k1];
            let mid = midpoint_param(params[k], params[k1], n_edges);
            if h0.norm() == 0.0 || h1.norm() == 0.0 {
                // exact pole hit for Inf target: sample elsewhere
                refine.push(mid);
                continue;
            }
            let step = (h1 / h0).arg();
            total_arg += step;
            let g0 = dh0 / h0;
            let g1 = dh1 / h1;
            let dz = point_at(if k1 == 0 { n_edges as f64 } else { params[k1] })
                - point_at(params[k]);
            trapz += (g0 + g1) / 2.0 * dz;
            // Refine while the phase is unresolved or this segment's
            // trapezoid contribution is still rough.
            if step.abs() > std::f64::consts::FRAC_PI_2
                || (g1 - g0).norm() * dz.norm() > 0.02 * TAU
            {
                refine.push(mid);
            }
        }
        if refine.is_empty() {
            let winding = total_arg / TAU;
            let rounded = winding.round();
            if (winding - rounded).abs() > 1e-6 {
                return Err(NevError::NonIntegerContour(winding));
            }
            let integral = trapz / Complex64::new(0.0, TAU);
            if (integral.re - rounded).abs() > 0.1 || integral.im.abs() > 0.1 {
                return Err(NevError::NonIntegerContour(integral.re));
            }
            return Ok(rounded as i64);
        }
        params.extend(refine);
        params.sort_by(f64::total_cmp);
        params.dedup();
        if params.len() > 60_000 {
            // refinement is chasing a point on (or hugging) the contour
            return Err(NevError::ContourThroughPoint);
        }
    }
    Err(NevError::ContourThroughPoint)
}

fn midpoint_param(a: f64, b: f64, n_edges: usize) -> f64 {
    let b = if b < a { b + n_edges as f64 } else { b };
    let mid = (a + b) / 2.0;
    if mid >= n_edges as f64 {
        mid - n_edges as f64
    } else {
        mid
    }
}

fn square_corners(center: Complex64, half: f64) -> [Complex64; 4] {
    [
        center + Complex64::new(-half, -half),
        center + Complex64::new(half, -half),
        center + Complex64::new(half, half),
        center + Complex64::new(-half, half),
    ]
}

/// Winding of the test function around |z| = r.
pub fn circle_winding(
    f: &MeroFunc,
    target: &Target,
    r: f64,
    n_start: usize,
) -> Result<i64, NevError> {
    let mut walker = f.walker();
    let n = n_start.max(16);
    let corners: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, TAU * k as f64 / n as f64))
        .collect();
    winding_closed(&mut walker, target, &corners, 2)
}

struct Cell {
    center: Complex64,
    half: f64,
    winding: i64,
}

/// Locate the target's points in |z| ≤ r.
pub fn locate_apoints(
    f: &MeroFunc,
    target: Target,
    r: f64,
    params: &LocateParams,
) -> Result<APointList, NevError> {
    let mut min_sep = params.min_sep;
    for sep_retry in 0..3 {
        let mut radius_err = None;
        for bump in 0..3 {
            let r_eff = r * (1.0f64 + 1e-4).powi(bump);
            match locate_at_radius(f, &target, r_eff, min_sep, params) {
                Ok(list) => {
                    // Post-validation: distinct points must respect the
                    // separation assumption, otherwise re-run finer.
                    if min_distinct_separation(&list.points) < 2.0 * min_sep
                        && list.points.len() > 1
                        && sep_retry < 2
                    {
                        radius_err = Some(NevError::PrecisionFailure(
                            "separation assumption violated".into(),
                        ));
                        break;
                    }
                    return Ok(APointList {
                        radius: r,
                        ..list
                    });
                }
                Err(NevError::ContourThroughPoint) => {
                    radius_err = Some(NevError::ContourThroughPoint);
                    continue;
                }
                Err(e) => return Err(e),
            }
        }
        match radius_err {
            Some(NevError::PrecisionFailure(_)) => {
                min_sep /= 4.0;
                continue;
            }
            Some(e) => return Err(e),
            None => unreachable!(),
        }
    }
    Err(NevError::PrecisionFailure(
        "separation retries exhausted".into(),
    ))
}

fn min_distinct_separation(points: &[APoint]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i].z - points[j].z).norm());
        }
    }
    best
}

fn locate_at_radius(
    f: &MeroFunc,
    target: &Target,
    r_eff: f64,
    min_sep: f64,
    params: &LocateParams,
) -> Result<APointList, NevError> {
    'grid: for attempt in 0..4 {
        let mut walker = f.walker();
        let offset = Complex64::new(1.0, 1.37) * (attempt as f64) * 2.3e-4 * r_eff;
        let root = Cell {
            center: offset,
            half: r_eff * 1.002 + offset.norm(),
            winding: 0,
        };
        let root_w = match winding_closed(
            &mut walker,
            target,
            &square_corners(root.center, root.half),
            16,
        ) {
            Ok(w) => w,
            Err(_) => continue 'grid,
        };
        let mut stack = vec![Cell {
            winding: root_w,
            ..root
        }];
        let mut found: Vec<APoint> = Vec::new();
        let mut neg_total = 0i64;
        while let Some(cell) = stack.pop() {
            let diam = cell.half * 2.0 * std::f64::consts::SQRT_2;
            if cell.winding == 0 && diam < min_sep {
                continue;
            }
            if diam < min_sep {
                if cell.winding < 0 {
                    // pole of the test function (not the sought kind)
                    neg_total += -cell.winding;
                    continue;
                }
                // isolated point of multiplicity `winding`
                match resolve_point(&mut walker, target, &cell, params.root_tol) {
                    Ok(p) => found.push(p),
                    Err(_) => continue 'grid,
                }
                continue;
            }
            // subdivide
            let h2 = cell.half / 2.0;
            let mut child_sum = 0i64;
            let mut children = Vec::with_capacity(4);
            for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                let c = cell.center + Complex64::new(dx * h2, dy * h2);
                let w = match winding_closed(
                    &mut walker,
                    target,
                    &square_corners(c, h2),
                    4,
                ) {
                    Ok(w) => w,
                    Err(_) => continue 'grid,
                };
                child_sum += w;
                if w != 0 || cell.half >= min_sep {
                    children.push(Cell {
                        center: c,
                        half: h2,
                        winding: w,
                    });
                }
            }
            if child_sum != cell.winding {
                // a point sits on an internal edge
                continue 'grid;
            }
            stack.extend(children);
        }
        // keep points inside the circle, check boundary hygiene
        let mut inside: Vec<APoint> = Vec::new();
        let mut outside_total = 0i64;
        for p in found {
            let d = p.z.norm();
            if (d - r_eff).abs() < 1e-6 {
                return Err(NevError::ContourThroughPoint);
            }
            if d <= r_eff {
                inside.push(p);
            } else {
                outside_total += p.multiplicity as i64;
            }
        }
        let _ = outside_total;
        // consistency with the whole-circle winding when the caller knows
        // the pole balance
        if let Some(expected) = params.expected_from_circle {
            let total: i64 = inside.iter().map(|p| p.multiplicity as i64).sum();
            if total != expected {
                return Err(NevError::PrecisionFailure(format!(
                    "located {} ≠ expected {}",
                    total, expected
                )));
            }
        }
        let _ = neg_total;
        inside.sort_by(|a, b| {
            (a.z.norm(), a.z.arg())
                .partial_cmp(&(b.z.norm(), b.z.arg()))
                .unwrap()
        });
        let total = inside.iter().map(|p| p.multiplicity).sum();
        return Ok(APointList {
            target: *target,
            radius: r_eff,
            points: inside,
            total_with_mult: total,
        });
    }
    Err(NevError::ContourThroughPoint)
}

/// Refine a winding-m cell to a point: Newton with multiplicity
/// acceleration, falling back to quadrisection down to diameter 1e−8.
fn resolve_point(
    walker: &mut MeroWalker,
    target: &Target,
    cell: &Cell,
    root_tol: f64,
) -> Result<APoint, NevError> {
    let mult = cell.winding as usize;
    let m = cell.winding as f64;
    // Newton from the cell center.
    let mut z = cell.center;
    let mut converged = false;
    for _ in 0..80 {
        let ev = walker.eval_path(&[z])[0];
        let (h, dh) = target.h(&ev);
        if h.norm() == 0.0 {
            converged = true;
            break;
        }
        if dh.norm() == 0.0 {
            break;
        }
        let step = h / dh * m;
        z -= step;
        if (z - cell.center).norm() > 6.0 * cell.half {
            break; // wandered off: hand back to subdivision
        }
        if step.norm() < 1e-13 * z.norm().max(1.0) {
            converged = true;
            break;
        }
    }
    if converged && (z - cell.center).norm() <= 3.0 * cell.half {
        let ev = walker.eval_path(&[z])[0];
        let (h, _) = target.h(&ev);
        let scale = match target {
            Target::Value(a) => 1.0 + a.norm(),
            Target::Inf => 1.0,
        };
        if h.norm() < root_tol * scale {
            return Ok(APoint { z, multiplicity: mult });
        }
    }
    // Fallback: subdivide towards the 1e−8 cluster rule.
    let mut c = Cell {
        center: cell.center,
        half: cell.half,
        winding: cell.winding,
    };
    while c.half * 2.0 * std::f64::consts::SQRT_2 > 1e-8 {
        let h2 = c.half / 2.0;
        let mut next = None;
        for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            let center = c.center + Complex64::new(dx * h2, dy * h2);
            let w = winding_closed(walker, target, &square_corners(center, h2), 6)?;
            if w == c.winding {
                next = Some(Cell {
                    center,
                    half: h2,
                    winding: w,
                });
                break;
            } else if w != 0 {
                // genuinely splitting cluster: give the caller both halves
                // by reporting the sub-cell of its own winding; the sibling
                // is found through the enclosing subdivision. Treat as
                // failure to isolate here.
                return Err(NevError::PrecisionFailure(
                    "cluster split below separation scale".into(),
                ));
            }
        }
        match next {
            Some(n) => c = n,
            None => {
                return Err(NevError::ContourThroughPoint);
            }
        }
    }
    Ok(APoint {
        z: c.center,
        multiplicity: mult,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{ExactFunc, Model, Poly};

    fn exp_z() -> MeroFunc {
        MeroFunc::rational_of_exp(ExactFunc::var(Model::Exp))
    }

    fn gundersen_f() -> MeroFunc {
        MeroFunc::rational_of_exp(ExactFunc::rational(
            Poly::from_ints(&[1, 1]),
            Poly::from_ints(&[1, -2, 1]),
            Model::Exp,
        ))
    }

    #[test]
    fn exp_ones_in_disk_seven() {
        // zeros of e^z − 1 in |z| ≤ 7: 0 and ±2πi, all simple
        let f = exp_z();
        let params = LocateParams::for_function(&f);
        let list = locate_apoints(&f, Target::Value(Complex64::new(1.0, 0.0)), 7.0, &params)
            .unwrap();
        assert_eq!(list.total_with_mult, 3);
        assert_eq!(list.points.len(), 3);
        let mut zs: Vec<Complex64> = list.points.iter().map(|p| p.z).collect();
        zs.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((zs[0] - Complex64::new(0.0, -TAU)).norm() < 1e-8);
        assert!(zs[1].norm() < 1e-8);
        assert!((zs[2] - Complex64::new(0.0, TAU)).norm() < 1e-8);
        for p in &list.points {
            assert_eq!(p.multiplicity, 1);
        }
    }

    #[test]
    fn exp_picard_value_empty() {
        let f = exp_z();
        let params = LocateParams::for_function(&f);
        let list = locate_apoints(&f, Target::Value(Complex64::new(0.0, 0.0)), 9.0, &params)
            .unwrap();
        assert!(list.points.is_empty());
        let poles = locate_apoints(&f, Target::Inf, 9.0, &params).unwrap();
        assert!(poles.points.is_empty());
    }

    #[test]
    fn gundersen_minus_eighth_all_double() {
        // f + 1/8 = (e^z+3)²/(8(e^z−1)²): points at log 3 + iπ + 2kπi, double
        let f = gundersen_f();
        let params = LocateParams::for_function(&f);
        let list = locate_apoints(
            &f,
            Target::Value(Complex64::new(-0.125, 0.0)),
            7.0,
            &params,
        )
        .unwrap();
        assert!(!list.points.is_empty());
        for p in &list.points {
            assert_eq!(p.multiplicity, 2, "at {}", p.z);
            let want_re = 3f64.ln();
            assert!((p.z.re - want_re).abs() < 1e-8);
        }
        // |log3 + iπ| ≈ 3.33, |log3 + 3iπ| ≈ 9.5: exactly one point in r=7
        assert_eq!(list.points.len(), 2); // ±iπ conjugate pair
        assert_eq!(list.total_with_mult, 4);
    }

    #[test]
    fn gundersen_double_poles() {
        let f = gundersen_f();
        let params = LocateParams::for_function(&f);
        let poles = locate_apoints(&f, Target::Inf, 7.0, &params).unwrap();
        // poles at 2kπi double: 0, ±2πi within r=7
        assert_eq!(poles.points.len(), 3);
        for p in &poles.points {
            assert_eq!(p.multiplicity, 2);
            assert!(p.z.re.abs() < 1e-8);
        }
        assert_eq!(poles.total_with_mult, 6);
    }

    #[test]
    fn circle_winding_balances_zeros_and_poles() {
        // f − 1 has zeros (3 in r=7 at u=3 line ∪ u=0 excluded...) hmm:
        // zeros of f−1 at e^z = 3 (log3 ± 2kπi) and poles double at 2kπi.
        let f = gundersen_f();
        let w = circle_winding(&f, &Target::Value(Complex64::new(1.0, 0.0)), 7.0, 64).unwrap();
        // zeros in r=7: log3, log3±2πi → 3; poles: 6 ⇒ winding −3
        assert_eq!(w, -3);
    }
}

/// Debug-visible winding entry point (kept public for examples/tests).
pub fn winding_closed_debug(
    walker: &mut MeroWalker,
    target: &Target,
    corners: &[Complex64],
    samples_per_edge: usize,
) -> Result<i64, NevError> {
    winding_closed(walker, target, corners, samples_per_edge)
}
