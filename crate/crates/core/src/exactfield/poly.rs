//! Dense univariate polynomials over ℚ(√d).
//!
//! Coefficients are stored in ascending degree order; the zero polynomial is
//! the empty vector and the leading coefficient is otherwise nonzero.

use super::coeff::Coeff;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Coeff>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial u.
    pub fn var() -> Self {
        Poly::new(vec![Coeff::zero(), Coeff::one()])
    }

    /// Convenience: polynomial from integer coefficients, ascending degree.
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| Coeff::int(c)).collect())
    }

    /// u − r.
    pub fn linear_root(r: &Coeff) -> Self {
        Poly::new(vec![-r, Coeff::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Coeff {
        self.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn leading(&self) -> Coeff {
        self.coeffs.last().cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by u^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Coeff::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().inv())
    }

    /// Formal derivative with respect to u.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &Coeff::int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Coeff) -> Coeff {
        let mut acc = Coeff::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex();
        }
        acc
    }

    /// Euclidean division: self = q·rhs + r with deg r < deg rhs.
    pub fn div_rem(&self, rhs: &Poly) -> (Poly, Poly) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let dr = rhs.degree().unwrap();
        let lead_inv = rhs.leading().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Coeff::zero(); self.coeffs.len().saturating_sub(dr)];
        while rem.len() > dr {
            let k = rem.len() - 1 - dr;
            let factor = &rem[rem.len() - 1] * &lead_inv;
            if !factor.is_zero() {
                for (i, rc) in rhs.coeffs.iter().enumerate() {
                    let t = &rem[k + i] - &(rc * &factor);
                    rem[k + i] = t;
                }
            }
            quot[k] = factor;
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, rhs: &Poly) -> Poly {
        let (q, r) = self.div_rem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic_or_zero();
        }
        a.monic_or_zero()
    }

    fn monic_or_zero(&self) -> Poly {
        if self.is_zero() {
            Poly::zero()
        } else {
            self.monic()
        }
    }

    /// Remainder modulo q.
    pub fn rem_mod(&self, q: &Poly) -> Poly {
        self.div_rem(q).1
    }

    /// Inverse of `self` modulo `q` (extended Euclid); None when not coprime.
    pub fn inverse_mod(&self, q: &Poly) -> Option<Poly> {
        let mut r0 = q.monic();
        let mut r1 = self.rem_mod(q);
        let mut s0 = Poly::zero();
        let mut s1 = Poly::one();
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1);
            let s2 = &s0 - &(&quot * &s1);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        if r0.degree() == Some(0) {
            Some(s0.scale(&r0.coeff(0).inv()).rem_mod(q))
        } else {
            None
        }
    }

    /// Multiplicity of the monic factor `q` in `self`.
    pub fn factor_multiplicity(&self, q: &Poly) -> usize {
        assert!(!q.is_constant(), "factor must be nonconstant");
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (quot, rem) = p.div_rem(q);
            if rem.is_zero() {
                m += 1;
                p = quot;
            } else {
                return m;
            }
        }
    }

    /// Squarefree decomposition (Yun): returns [(gᵢ, i)] with
    /// self = lc·∏ gᵢ^i, gᵢ monic, squarefree, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        if self.is_constant() {
            return vec![];
        }
        let p = self.monic();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut out = vec![];
        let mut c = p.div_exact(&a0);
        let mut d = dp.div_exact(&a0) - c.derivative();
        let mut i = 1;
        while !c.is_constant() {
            let s = c.gcd(&d);
            if !s.is_constant() {
                out.push((s.clone(), i));
            }
            c = c.div_exact(&s);
            d = d.div_exact(&s) - c.derivative();
            i += 1;
        }
        out
    }

    /// Radical: product of the distinct monic squarefree components.
    pub fn radical(&self) -> Poly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Poly::one(), |acc, (g, _)| &acc * &g)
    }

    /// Field tag of the coefficients (first non-rational tag, else 1).
    pub fn field_tag(&self) -> i64 {
        self.coeffs
            .iter()
            .map(|c| c.field_tag())
            .find(|&d| d != 1)
            .unwrap_or(1)
    }

    /// Roots lying in the coefficient field K = ℚ(√d), each with
    /// multiplicity, alongside the unfactored (root-free) cofactor.
    ///
    /// Linear factors are read off directly, quadratics go through the
    /// discriminant square test in K, and higher degrees use the rational
    /// root theorem on rational polynomials. No general factorization into
    /// irreducibles is attempted. The ambient field is inferred from the
    /// coefficients; see [`Self::roots_in`] to widen it explicitly.
    pub fn roots_in_field(&self) -> (Vec<(Coeff, usize)>, Poly) {
        self.roots_in(self.field_tag())
    }

    /// Roots in ℚ(√ambient), with multiplicity, plus the root-free cofactor.
    pub fn roots_in(&self, ambient: i64) -> (Vec<(Coeff, usize)>, Poly) {
        let mut roots: Vec<(Coeff, usize)> = vec![];
        let mut rest = Poly::one();
        for (g, mult) in self.squarefree_decomposition() {
            let (rs, cof) = squarefree_roots(&g, ambient);
            for r in rs {
                roots.push((r, mult));
            }
            for _ in 0..mult {
                rest = &rest * &cof;
            }
        }
        (roots, rest)
    }

    /// True if every coefficient is rational.
    pub fn is_rational_poly(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    /// Numeric roots by the Durand–Kerner iteration, for dense complex work.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return vec![],
        };
        let monic = self.monic();
        let radius = 1.0
            + monic
                .coeffs
                .iter()
                .map(|c| c.to_complex().norm())
                .fold(0.0f64, f64::max);
        let mut zs: Vec<Complex64> = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
                Complex64::from_polar(radius * 0.6, theta)
            })
            .collect();
        for _ in 0..200 {
            let mut delta = 0.0f64;
            for i in 0..n {
                let num = monic.eval_complex(zs[i]);
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        den *= zs[i] - zs[j];
                    }
                }
                if den.norm() == 0.0 {
                    continue;
                }
                let step = num / den;
                zs[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-14 {
                break;
            }
        }
        zs
    }
}

/// Roots in ℚ(√ambient) of a squarefree polynomial, plus the cofactor.
fn squarefree_roots(g: &Poly, ambient: i64) -> (Vec<Coeff>, Poly) {
    let mut work = g.monic();
    let mut roots = vec![];
    loop {
        match work.degree() {
            None | Some(0) => return (roots, Poly::one()),
            Some(1) => {
                roots.push(-&(&work.coeff(0) * &work.coeff(1).inv()));
                return (roots, Poly::one());
            }
            Some(2) => {
                let a = work.coeff(2);
                let b = work.coeff(1);
                let c = work.coeff(0);
                let disc = &(&b * &b) - &(&(&Coeff::int(4) * &a) * &c);
                if let Some(s) = disc.sqrt_in(ambient) {
                    let two_a_inv = (&Coeff::int(2) * &a).inv();
                    roots.push(&(&(-&b) + &s) * &two_a_inv);
                    roots.push(&(&(-&b) - &s) * &two_a_inv);
                    return (roots, Poly::one());
                }
                return (roots, work.monic());
            }
            Some(_) => {
                if let Some(r) = rational_root(&work) {
                    work = work.div_exact(&Poly::linear_root(&r)).monic();
                    roots.push(r);
                } else {
                    return (roots, work.monic());
                }
            }
        }
    }
}

/// One rational root of a polynomial with rational coefficients, if any.
/// (A root at 0 is detected for any coefficient field.)
fn rational_root(p: &Poly) -> Option<Coeff> {
    if p.coeff(0).is_zero() {
        return Some(Coeff::zero());
    }
    if !p.is_rational_poly() {
        return None;
    }
    // Clear denominators to integer coefficients.
    let mut den = BigInt::from(1);
    for c in p.coeffs() {
        let q = c.rational_part().denom();
        den = num_integer::lcm(den, q.clone());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.rational_part() * num_rational::BigRational::from(den.clone());
            r.to_integer()
        })
        .collect();
    let a0 = &ints[0];
    let an = ints.last()?;
    let p_divs = small_divisors(a0);
    let q_divs = small_divisors(an);
    for pd in &p_divs {
        for qd in &q_divs {
            for sign in [1i64, -1] {
                let cand = num_rational::BigRational::new(
                    pd.clone() * BigInt::from(sign),
                    qd.clone(),
                );
                let cand = Coeff::from_rational(cand);
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Positive divisors by trial division; gives up past 10^6 trial factors
/// (returning the divisors found so far, plus |n| itself).
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut divs = vec![];
    let mut k = BigInt::from(1);
    let cap = BigInt::from(1_000_000);
    while &k * &k <= n && k <= cap {
        if (&n % &k).is_zero() {
            divs.push(k.clone());
            divs.push(&n / &k);
        }
        k += 1;
    }
    if !divs.contains(&n) {
        divs.push(n);
    }
    divs
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| &self.coeff(i) + &rhs.coeff(i))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| &self.coeff(i) - &rhs.coeff(i))
                .collect(),
        )
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Coeff::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_poly_ops {
    ($($trait:ident, $method:ident);*) => {$(
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_poly_ops!(Add, add; Sub, sub; Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let body = if k == 0 {
                cs.clone()
            } else {
                let var = if k == 1 {
                    "u".to_string()
                } else {
                    format!("u^{}", k)
                };
                if c.is_one() {
                    var
                } else if cs == "-1" {
                    format!("-{}", var)
                } else if cs.contains('+') || cs.contains('\u{221a}') || cs[1..].contains('-') {
                    format!("({}){}", cs, var)
                } else {
                    format!("{}{}", cs, var)
                }
            };
            if first {
                write!(f, "{}", body)?;
                first = false;
            } else if body.starts_with('-') {
                write!(f, "{}", body)?;
            } else {
                write!(f, "+{}", body)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn div_rem_reassembles() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_products() {
        let f = &p(&[-1, 1]) * &p(&[2, 1]); // (u−1)(u+2)
        let g = &p(&[-1, 1]) * &p(&[3, 1]); // (u−1)(u+3)
        assert_eq!(f.gcd(&g), p(&[-1, 1]));
    }

    #[test]
    fn squarefree_decomposition_exponents() {
        // u(u−1)²(u+2)³
        let f = &(&p(&[0, 1]) * &(&p(&[-1, 1]) * &p(&[-1, 1])))
            * &(&(&p(&[2, 1]) * &p(&[2, 1])) * &p(&[2, 1]));
        let parts = f.squarefree_decomposition();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], (p(&[0, 1]), 1));
        assert_eq!(parts[1], (p(&[-1, 1]), 2));
        assert_eq!(parts[2], (p(&[2, 1]), 3));
        // remultiplication
        let mut back = Poly::one();
        for (g, m) in &parts {
            for _ in 0..*m {
                back = &back * g;
            }
        }
        assert_eq!(back, f.monic());
    }

    #[test]
    fn rational_and_quadratic_field_roots() {
        // (u − 3)(u − 1/2)(u² − 3) over ℚ(√3): all four roots found.
        let s3 = Coeff::sqrt_term(1, 1, 3);
        let f = &(&Poly::linear_root(&Coeff::int(3))
            * &Poly::linear_root(&Coeff::rat(1, 2)))
            * &p(&[-3, 0, 1]);
        let (roots, rest) = f.roots_in(3);
        assert!(rest.is_one());
        let vals: Vec<Coeff> = roots.into_iter().map(|(r, _)| r).collect();
        assert!(vals.contains(&Coeff::int(3)));
        assert!(vals.contains(&Coeff::rat(1, 2)));
        assert!(vals.contains(&s3));
        assert!(vals.contains(&(-&s3)));
    }

    #[test]
    fn irreducible_quadratic_left_unfactored() {
        let f = p(&[1, 0, 1]); // u² + 1 over ℚ
        let (roots, rest) = f.roots_in_field();
        assert!(roots.is_empty());
        assert_eq!(rest, f);
    }

    #[test]
    fn complex_roots_match() {
        let f = p(&[-6, 11, -6, 1]); // (u−1)(u−2)(u−3)
        let mut rs: Vec<f64> = f.complex_roots().iter().map(|z| z.re).collect();
        rs.sort_by(f64::total_cmp);
        assert!((rs[0] - 1.0).abs() < 1e-10);
        assert!((rs[1] - 2.0).abs() < 1e-10);
        assert!((rs[2] - 3.0).abs() < 1e-10);
    }
}
