//! Exact coefficients a + b√d in a quadratic number field ℚ(√d).
//!
//! `d` is a squarefree integer tag; `d = 1` marks a plain rational (b = 0
//! after normalization). Negative tags give imaginary quadratic fields, e.g.
//! α = (1 + i√3)/2 lives in ℚ(√−3) as 1/2 + (1/2)√−3. Elements of different
//! fields may be combined only when at least one of them is rational.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element a + b√d of ℚ(√d), stored in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    a: BigRational,
    b: BigRational,
    d: i64,
}

fn rat_i64(n: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(den))
}

/// Strip square factors from `d`, returning (squarefree part, extracted root).
fn squarefree_part(d: i64) -> (i64, i64) {
    assert!(d != 0, "square class tag must be nonzero");
    let sign = d.signum();
    let mut m = d.abs();
    let mut root = 1i64;
    let mut p = 2i64;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            root *= p;
        }
        p += 1;
    }
    (sign * m, root)
}

impl Coeff {
    /// Build a + b√d, normalizing the square class of `d`.
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Self {
        let (mut d, root) = squarefree_part(d);
        let mut b = b * BigRational::from(BigInt::from(root));
        let mut a = a;
        if d == 1 {
            a += b.clone();
            b = BigRational::zero();
        }
        if b.is_zero() {
            d = 1;
        }
        Coeff { a, b, d }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Coeff {
            a,
            b: BigRational::zero(),
            d: 1,
        }
    }

    /// Rational n/den as a coefficient.
    pub fn rat(n: i64, den: i64) -> Self {
        Self::from_rational(rat_i64(n, den))
    }

    /// Integer n as a coefficient.
    pub fn int(n: i64) -> Self {
        Self::rat(n, 1)
    }

    /// (n/den)·√d.
    pub fn sqrt_term(n: i64, den: i64, d: i64) -> Self {
        Self::new(BigRational::zero(), rat_i64(n, den), d)
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the element lies in ℚ.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn field_tag(&self) -> i64 {
        self.d
    }

    /// Galois conjugate a − b√d.
    pub fn conj(&self) -> Self {
        Coeff {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// Field norm (a + b√d)(a − b√d) = a² − b²d ∈ ℚ.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from(BigInt::from(self.d))
    }

    /// Unify the field tags of two elements; panics on a genuine mix of
    /// distinct irrational fields (single-field computations by contract).
    fn unified_tag(&self, other: &Self) -> i64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => 1,
            (false, true) => self.d,
            (true, false) => other.d,
            (false, false) => {
                assert_eq!(
                    self.d, other.d,
                    "cannot mix coefficients from Q(\u{221a}{}) and Q(\u{221a}{})",
                    self.d, other.d
                );
                self.d
            }
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero coefficient");
        let n = self.norm();
        // For squarefree d ≠ 1 the norm vanishes only at 0.
        assert!(!n.is_zero(), "zero norm for nonzero coefficient");
        Coeff {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: if self.b.is_zero() { 1 } else { self.d },
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Coeff::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Embed into ℂ (√d ↦ i√|d| for d < 0).
    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().expect("rational out of f64 range");
        let b = self.b.to_f64().expect("rational out of f64 range");
        if self.d >= 0 {
            Complex64::new(a + b * (self.d as f64).sqrt(), 0.0)
        } else {
            Complex64::new(a, b * ((-self.d) as f64).sqrt())
        }
    }

    /// Square root within the element's own field, if one exists.
    pub fn sqrt_in_field(&self) -> Option<Self> {
        self.sqrt_in(self.d)
    }

    /// Square root within ℚ(√ambient), if one exists.
    ///
    /// Handles the two shapes that arise in practice: rational squares and
    /// squares of general elements x + y√d (via the resolvent quadratic).
    pub fn sqrt_in(&self, ambient: i64) -> Option<Self> {
        let (amb, _) = squarefree_part(ambient);
        if self.d != 1 && self.d != amb {
            return None;
        }
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        let d = BigRational::from(BigInt::from(amb));
        if self.b.is_zero() {
            // a = x² (rational root) or a = y²·d (pure surd root).
            if let Some(x) = rational_sqrt(&self.a) {
                return Some(Coeff::from_rational(x));
            }
            if !d.is_one() {
                let q = &self.a / &d;
                if let Some(y) = rational_sqrt(&q) {
                    return Some(Coeff::new(BigRational::zero(), y, amb));
                }
            }
            return None;
        }
        // (x + y√d)² = x² + y²d + 2xy√d: x², y²d are roots of
        // t² − a·t + d·b²/4.
        let half_b = &self.b / BigRational::from(BigInt::from(2));
        let disc = &self.a * &self.a
            - BigRational::from(BigInt::from(4)) * &d * (&half_b * &half_b);
        let s = rational_sqrt(&disc)?;
        let two = BigRational::from(BigInt::from(2));
        for root in [(&self.a + &s) / &two, (&self.a - &s) / &two] {
            if let Some(x) = rational_sqrt(&root) {
                if !x.is_zero() {
                    let y = &half_b / &x;
                    let cand = Coeff::new(x, y, self.d);
                    if &(&cand * &cand) == self {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let d = self.unified_tag(rhs);
        Coeff::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        let d = self.unified_tag(rhs);
        Coeff::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let d = self.unified_tag(rhs);
        let dr = BigRational::from(BigInt::from(d));
        Coeff::new(
            &self.a * &rhs.a + &self.b * &rhs.b * dr,
            &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        )
    }
}

impl Div for &Coeff {
    type Output = Coeff;
    fn div(self, rhs: &Coeff) -> Coeff {
        self * &rhs.inv()
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident, $method:ident);*) => {$(
        impl $trait for Coeff {
            type Output = Coeff;
            fn $method(self, rhs: Coeff) -> Coeff {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add, add; Sub, sub; Mul, mul; Div, div);

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let surd = if self.b.is_one() {
            format!("\u{221a}{}", self.d)
        } else if (-self.b.clone()).is_one() {
            format!("-\u{221a}{}", self.d)
        } else {
            format!("{}\u{221a}{}", self.b, self.d)
        };
        if self.a.is_zero() {
            write!(f, "{}", surd)
        } else if self.b.is_negative() {
            write!(f, "{}{}", self.a, surd)
        } else {
            write!(f, "{}+{}", self.a, surd)
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_fold_into_plain_field() {
        // √4 = 2 is rational, so the tag collapses to 1.
        let c = Coeff::new(rat_i64(1, 2), rat_i64(3, 1), 4);
        assert!(c.is_rational());
        assert_eq!(c, Coeff::rat(13, 2));
    }

    #[test]
    fn square_class_normalization() {
        // √12 = 2√3.
        let c = Coeff::sqrt_term(1, 1, 12);
        assert_eq!(c.field_tag(), 3);
        assert_eq!(c.surd_part(), &rat_i64(2, 1));
    }

    #[test]
    fn alpha_is_cube_root_of_minus_one() {
        // α = (1 + i√3)/2 = 1/2 + (1/2)√−3 satisfies α³ = −1, α ≠ −1.
        let alpha = &Coeff::rat(1, 2) + &Coeff::sqrt_term(1, 2, -3);
        assert_eq!(alpha.pow(3), Coeff::int(-1));
        assert_ne!(alpha, Coeff::int(-1));
    }

    #[test]
    fn inverse_in_real_quadratic_field() {
        let x = &Coeff::int(1) + &Coeff::sqrt_term(1, 1, 3); // 1 + √3
        let inv = x.inv();
        assert_eq!(&x * &inv, Coeff::one());
        // 1/(1+√3) = (√3−1)/2
        assert_eq!(inv, &Coeff::rat(-1, 2) + &Coeff::sqrt_term(1, 2, 3));
    }

    #[test]
    fn conjugation_swaps_surd_sign() {
        let x = &Coeff::rat(2, 5) + &Coeff::sqrt_term(-7, 3, -3);
        let c = x.conj();
        assert_eq!(c.rational_part(), x.rational_part());
        assert_eq!(c.surd_part(), &(-x.surd_part().clone()));
        assert_eq!(&x * &c, Coeff::from_rational(x.norm()));
    }

    #[test]
    fn complex_embedding() {
        let alpha = &Coeff::rat(1, 2) + &Coeff::sqrt_term(1, 2, -3);
        let z = alpha.to_complex();
        assert!((z.re - 0.5).abs() < 1e-15);
        assert!((z.im - 0.5 * 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sqrt_in_field_rational_and_surd_cases() {
        assert_eq!(Coeff::rat(9, 4).sqrt_in_field(), Some(Coeff::rat(3, 2)));
        // 3 = (√3)² inside ℚ(√3): test through the pure-surd branch.
        let three = Coeff::new(rat_i64(3, 1), BigRational::zero(), 3);
        // tag is 1 (b = 0); ask in the ambient field via multiplication trick
        let s3 = Coeff::sqrt_term(1, 1, 3);
        assert_eq!(&s3 * &s3, three);
        // (1 + √3)² = 4 + 2√3
        let sq = &Coeff::int(4) + &Coeff::sqrt_term(2, 1, 3);
        let r = sq.sqrt_in_field().expect("square in field");
        assert_eq!(&r * &r, sq);
        // 2 + √3 is not a square of anything with rational parts? It is:
        // ((√6+√2)/2)² = 2+√3 but that leaves ℚ(√3) — expect None.
        let ns = &Coeff::int(2) + &Coeff::sqrt_term(1, 1, 3);
        assert!(ns.sqrt_in_field().is_none());
    }

    #[test]
    #[should_panic(expected = "cannot mix")]
    fn mixing_fields_panics() {
        let a = Coeff::sqrt_term(1, 1, 2);
        let b = Coeff::sqrt_term(1, 1, 3);
        let _ = &a + &b;
    }
}
