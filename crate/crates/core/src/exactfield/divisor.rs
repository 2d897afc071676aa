//! Divisors of exact functions, in the coordinates of the z-plane.
//!
//! In an exp model the zeros and poles of R(e^z) correspond to the finite
//! nonzero u-points of R; u = 0 and u = ∞ are never attained and carry no
//! places. In an elliptic model (u′)² = P(u) the relevant places of the
//! function field K(u)[y]/(y² − P) are:
//!
//! * one ramified place over each root of P, where ord_z(u − e) = 2 and
//!   ord_z(y) = 1;
//! * pairs of places over squarefree u-factors q coprime to P, a place
//!   being identified by the residue y ≡ r(u) mod q it induces;
//! * a single place over u = ∞ with ord_z(u) = −2, ord_z(y) = −3
//!   (cubic P, one double pole of u per period parallelogram).
//!
//! Orders at ramified places and at infinity mix even u-orders with odd
//! y-orders, so minima are exact. Over a split factor q the two conjugate
//! places take orders (k + n′, k), where k is the common q-power of the
//! numerator pair (A, B) and n′ the q-multiplicity of the reduced norm
//! A′² − B′²P; the vanishing side is the one with y ≡ −A′/B′ mod q.

use super::coeff::Coeff;
use super::func::{ExactFunc, Model};
use super::poly::Poly;

/// A place of the carrier in z-coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    /// Finite nonzero u-point set {q = 0} of an exp model.
    UPoint { q: Poly },
    /// Elliptic place over a root of P.
    Ramified { root: Coeff },
    /// Elliptic place(s) over a squarefree factor q coprime to P.
    /// `y_res = Some(r)` picks the place with y ≡ r mod q; `None` covers
    /// both conjugate places (which then carry equal order).
    Split { q: Poly, y_res: Option<Poly> },
    /// The place over u = ∞ of an elliptic model.
    Infinity,
}

/// Divisor entry: place together with its (signed) order.
pub type DivisorEntry = (Place, i64);

/// Multiplicity of q in p, with the convention v_q(0) = +large.
fn vq(p: &Poly, q: &Poly) -> i64 {
    if p.is_zero() {
        i64::MAX / 4
    } else {
        p.factor_multiplicity(q) as i64
    }
}

fn deg_or_neg(p: &Poly) -> i64 {
    p.degree().map(|d| d as i64).unwrap_or(i64::MIN / 4)
}

/// Pairwise-coprime monic refinement of a set of polynomials with the same
/// overall radical.
pub(crate) fn gcd_free_basis(inputs: Vec<Poly>) -> Vec<Poly> {
    let mut basis: Vec<Poly> = vec![];
    let mut queue: Vec<Poly> = inputs
        .into_iter()
        .filter(|p| !p.is_constant())
        .map(|p| p.radical())
        .collect();
    while let Some(mut g) = queue.pop() {
        if g.is_constant() {
            continue;
        }
        let mut i = 0;
        while i < basis.len() && !g.is_constant() {
            let e = basis[i].clone();
            let c = e.gcd(&g);
            if c.is_constant() {
                i += 1;
                continue;
            }
            let e_rest = e.div_exact(&c);
            g = g.div_exact(&c);
            basis.remove(i);
            for part in [c, e_rest] {
                if !part.is_constant() {
                    basis.push(part);
                }
            }
            i = 0;
        }
        if !g.is_constant() {
            basis.push(g.monic());
        }
    }
    basis.sort_by_key(|p| (p.degree(), p.to_string()));
    basis
}

/// Divisor of a nonzero exact function.
pub fn divisor(h: &ExactFunc) -> Vec<DivisorEntry> {
    assert!(!h.is_zero(), "zero function has no divisor");
    match h.model() {
        Model::Exp => divisor_exp(h),
        Model::Elliptic(_) => divisor_elliptic(h),
    }
}

fn divisor_exp(h: &ExactFunc) -> Vec<DivisorEntry> {
    let ambient = h.num_a().field_tag().max(h.den().field_tag());
    let mut out = vec![];
    for (num, sign) in [(h.num_a(), 1i64), (h.den(), -1i64)] {
        for (q, m) in num.squarefree_decomposition() {
            // Split each squarefree component into K-rational linear
            // factors where possible, so locations are as fine as the
            // field allows.
            let (roots, rest) = q.roots_in(ambient);
            for (r, _) in roots {
                out.push((
                    Place::UPoint {
                        q: Poly::linear_root(&r),
                    },
                    sign * m as i64,
                ));
            }
            if !rest.is_constant() {
                out.push((Place::UPoint { q: rest }, sign * m as i64));
            }
        }
    }
    merge(out)
}

fn divisor_elliptic(h: &ExactFunc) -> Vec<DivisorEntry> {
    let p_curve = h
        .model()
        .curve_poly()
        .expect("elliptic model carries a curve")
        .clone();
    let (roots, leftover) = p_curve.roots_in_field();
    assert!(
        leftover.is_one() && roots.len() == 3,
        "curve cubic must split over the coefficient field"
    );
    let a = h.num_a().clone();
    let b = h.num_b().clone();
    let den = h.den().clone();
    let mut out = vec![];

    // Ramified places.
    let mut ram_factor = Poly::one();
    for (root, mult) in &roots {
        assert_eq!(*mult, 1, "curve cubic must be squarefree");
        let q = Poly::linear_root(root);
        ram_factor = &ram_factor * &q;
        let v_num = (2 * vq(&a, &q)).min(2 * vq(&b, &q) + 1);
        let v = v_num - 2 * vq(&den, &q);
        if v != 0 {
            out.push((Place::Ramified { root: root.clone() }, v));
        }
    }

    // Place at infinity: ord(u) = −2, ord(y) = −3, parities distinct.
    let mut inf_parts = vec![];
    if !a.is_zero() {
        inf_parts.push(-2 * deg_or_neg(&a));
    }
    if !b.is_zero() {
        inf_parts.push(-2 * deg_or_neg(&b) - 3);
    }
    let v_inf = inf_parts.into_iter().min().expect("nonzero function")
        + 2 * deg_or_neg(&den);
    if v_inf != 0 {
        out.push((Place::Infinity, v_inf));
    }

    // Split places: candidates from the norm, the denominator and the two
    // numerator parts, with the ramification locus removed. The candidates
    // are refined until each factor behaves uniformly.
    let norm = &(&a * &a) - &(&(&b * &b) * &p_curve);
    let mut candidates = vec![];
    for src in [&norm, &den, &a, &b] {
        if !src.is_constant() {
            let mut rad = src.radical();
            loop {
                let g = rad.gcd(&ram_factor);
                if g.is_constant() {
                    break;
                }
                rad = rad.div_exact(&g);
            }
            if !rad.is_constant() {
                candidates.push(rad);
            }
        }
    }
    let mut queue = vec![];
    for q in gcd_free_basis(candidates) {
        // Peel off K-rational roots so reported locations are as fine as
        // the field allows.
        let (roots_q, rest) = q.roots_in_field();
        for (r, _) in roots_q {
            queue.push(Poly::linear_root(&r));
        }
        if !rest.is_constant() {
            queue.push(rest);
        }
    }
    while let Some(q) = queue.pop() {
        let m = vq(&den, &q);
        if b.is_zero() {
            let v = vq(&a, &q) - m;
            if v != 0 {
                out.push((Place::Split { q, y_res: None }, v));
            }
            continue;
        }
        let k = vq(&a, &q).min(vq(&b, &q));
        let mut a_red = a.clone();
        let mut b_red = b.clone();
        for _ in 0..k {
            a_red = a_red.div_exact(&q);
            b_red = b_red.div_exact(&q);
        }
        let norm_red = &(&a_red * &a_red) - &(&(&b_red * &b_red) * &p_curve);
        let n_extra = vq(&norm_red, &q);
        // A composite q whose parts carry different multiplicities shows up
        // as a nontrivial common factor with the reduced cofactor; split it
        // and retry on the parts.
        if n_extra > 0 {
            let mut cof = norm_red.clone();
            for _ in 0..n_extra {
                cof = cof.div_exact(&q);
            }
            let g = cof.gcd(&q);
            if !g.is_constant() && g != q.monic() {
                queue.push(q.div_exact(&g).monic());
                queue.push(g);
                continue;
            }
        }
        if n_extra == 0 {
            let v = k - m;
            if v != 0 {
                out.push((Place::Split { q, y_res: None }, v));
            }
        } else {
            let b_inv = b_red
                .inverse_mod(&q)
                .expect("reduced y-part coprime to q when the norm vanishes");
            let r = (-&(&a_red * &b_inv)).rem_mod(&q);
            debug_assert!(
                (&(&r * &r) - &p_curve).rem_mod(&q).is_zero(),
                "y-residue must satisfy the curve relation"
            );
            let v_plus = k + n_extra - m;
            let v_minus = k - m;
            if v_plus != 0 {
                out.push((
                    Place::Split {
                        q: q.clone(),
                        y_res: Some(r.clone()),
                    },
                    v_plus,
                ));
            }
            if v_minus != 0 {
                out.push((
                    Place::Split {
                        q: q.clone(),
                        y_res: Some((-&r).rem_mod(&q)),
                    },
                    v_minus,
                ));
            }
        }
    }

    let out = merge(out);
    debug_assert_eq!(
        out.iter().map(|(p, v)| v * place_degree(p)).sum::<i64>(),
        0,
        "principal divisor must have degree zero"
    );
    out
}

/// Number of z-points per period parallelogram the place stands for.
pub fn place_degree(p: &Place) -> i64 {
    match p {
        Place::UPoint { q } => q.degree().unwrap_or(0) as i64,
        Place::Ramified { .. } | Place::Infinity => 1,
        Place::Split { q, y_res: Some(_) } => q.degree().unwrap_or(0) as i64,
        Place::Split { q, y_res: None } => 2 * q.degree().unwrap_or(0) as i64,
    }
}

fn merge(entries: Vec<DivisorEntry>) -> Vec<DivisorEntry> {
    let mut out: Vec<DivisorEntry> = vec![];
    for (p, v) in entries {
        if v == 0 {
            continue;
        }
        if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += v;
        } else {
            out.push((p, v));
        }
    }
    out.retain(|(_, v)| *v != 0);
    out
}

/// The zero part of the divisor (positive orders).
pub fn zeros_of(h: &ExactFunc) -> Vec<DivisorEntry> {
    divisor(h).into_iter().filter(|(_, v)| *v > 0).collect()
}

/// The pole part, with orders given as positive numbers.
pub fn poles_of(h: &ExactFunc) -> Vec<DivisorEntry> {
    divisor(h)
        .into_iter()
        .filter(|(_, v)| *v < 0)
        .map(|(p, v)| (p, -v))
        .collect()
}
