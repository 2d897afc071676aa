//! Elements of K(u) and of the quadratic extension K(u)[y]/(y² − P(u)),
//! with a derivation that realizes d/dz through the carrier:
//!
//! * `ExpModel`: u stands for e^z, so D(u) = u and y is unused.
//! * `EllipticModel(P)`: u is an elliptic function with (u′)² = P(u),
//!   y stands for u′, so D(u) = y and D(y) = P′(u)/2.
//!
//! Every element is kept in the normal form (numA + numB·y)/den with
//! gcd(numA, numB, den) = 1 and a monic denominator, which makes equality
//! a plain structural comparison.

use super::coeff::Coeff;
use super::poly::Poly;
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Derivation model of the carrier variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Model {
    /// u = e^z: D(u) = u.
    Exp,
    /// (u′)² = P(u): D(u) = y, D(y) = P′(u)/2.
    Elliptic(Arc<Poly>),
}

impl Model {
    pub fn elliptic(p: Poly) -> Self {
        assert!(
            p.degree() == Some(3),
            "elliptic model expects a cubic right-hand side"
        );
        Model::Elliptic(Arc::new(p))
    }

    pub fn curve_poly(&self) -> Option<&Poly> {
        match self {
            Model::Exp => None,
            Model::Elliptic(p) => Some(p),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Exp => write!(f, "exp"),
            Model::Elliptic(p) => write!(f, "elliptic({})", p),
        }
    }
}

/// Normalized element (numA + numB·y)/den of the model's function field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactFunc {
    num_a: Poly,
    num_b: Poly,
    den: Poly,
    model: Model,
}

impl ExactFunc {
    pub fn new(num_a: Poly, num_b: Poly, den: Poly, model: Model) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if matches!(model, Model::Exp) {
            assert!(num_b.is_zero(), "exp-model elements have no y part");
        }
        let mut f = ExactFunc {
            num_a,
            num_b,
            den,
            model,
        };
        f.normalize();
        f
    }

    /// Rational element N/D of K(u) in the given model.
    pub fn rational(num: Poly, den: Poly, model: Model) -> Self {
        Self::new(num, Poly::zero(), den, model)
    }

    pub fn constant(c: Coeff, model: Model) -> Self {
        Self::rational(Poly::constant(c), Poly::one(), model)
    }

    pub fn zero(model: Model) -> Self {
        Self::constant(Coeff::zero(), model)
    }

    /// The carrier u.
    pub fn var(model: Model) -> Self {
        Self::rational(Poly::var(), Poly::one(), model)
    }

    /// The derivative carrier y = u′ (elliptic models only).
    pub fn y(model: Model) -> Self {
        assert!(
            matches!(model, Model::Elliptic(_)),
            "y lives in elliptic models only"
        );
        Self::new(Poly::zero(), Poly::one(), Poly::one(), model)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn num_a(&self) -> &Poly {
        &self.num_a
    }

    pub fn num_b(&self) -> &Poly {
        &self.num_b
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num_a.is_zero() && self.num_b.is_zero()
    }

    /// True when the element lies in the constant field K.
    pub fn is_constant(&self) -> bool {
        self.num_b.is_zero() && self.num_a.is_constant() && self.den.is_constant()
    }

    /// The constant value, if [`Self::is_constant`].
    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_constant() {
            Some(&self.num_a.coeff(0) * &self.den.coeff(0).inv())
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.num_a.is_zero() && self.num_b.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g_num = if self.num_a.is_zero() {
            self.num_b.clone()
        } else if self.num_b.is_zero() {
            self.num_a.clone()
        } else {
            self.num_a.gcd(&self.num_b)
        };
        let g = g_num.gcd(&self.den);
        if !g.is_constant() {
            self.num_a = self.num_a.div_exact(&g);
            self.num_b = self.num_b.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        let lead = self.den.leading().inv();
        self.num_a = self.num_a.scale(&lead);
        self.num_b = self.num_b.scale(&lead);
        self.den = self.den.monic();
    }

    fn same_model(&self, rhs: &Self) -> Model {
        assert!(
            self.model == rhs.model,
            "mixed derivation models in exact arithmetic"
        );
        self.model.clone()
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by the zero function");
        match &self.model {
            Model::Exp => ExactFunc::new(
                self.den.clone(),
                Poly::zero(),
                self.num_a.clone(),
                self.model.clone(),
            ),
            Model::Elliptic(p) => {
                // 1/((A + By)/D) = D(A − By)/(A² − B²P)
                let norm = &(&self.num_a * &self.num_a)
                    - &(&(&self.num_b * &self.num_b) * p.as_ref());
                assert!(!norm.is_zero(), "zero norm: y² − P not irreducible?");
                ExactFunc::new(
                    &self.den * &self.num_a,
                    -&(&self.den * &self.num_b),
                    norm,
                    self.model.clone(),
                )
            }
        }
    }

    /// Galois conjugate y ↦ −y (identity in exp models).
    pub fn conj_y(&self) -> Self {
        ExactFunc::new(
            self.num_a.clone(),
            -&self.num_b,
            self.den.clone(),
            self.model.clone(),
        )
    }

    /// Derivation induced by d/dz.
    ///
    /// Quotient rule over the model's action on polynomials; the elliptic
    /// rule D(C(u)) = C′(u)·y re-enters the (A, B) split after reduction
    /// y² → P(u).
    pub fn derive(&self) -> Self {
        match &self.model {
            Model::Exp => {
                // D(N/D) = (N′·u·D − N·D′·u)/D²
                let n = &self.num_a;
                let d = &self.den;
                let u = Poly::var();
                let num = &(&(&n.derivative() * &u) * d) - &(&(&d.derivative() * &u) * n);
                ExactFunc::rational(num, d * d, self.model.clone())
            }
            Model::Elliptic(p) => {
                // D(A + By) = A′y + B′y² + B·P′/2 = (B′P + BP′/2) + A′y
                let half_dp = p.derivative().scale(&Coeff::rat(1, 2));
                let da = |a: &Poly, b: &Poly| -> (Poly, Poly) {
                    (
                        &(&b.derivative() * p.as_ref()) + &(b * &half_dp),
                        a.derivative(),
                    )
                };
                let (na, nb) = da(&self.num_a, &self.num_b);
                let (dda, _) = da(&self.den, &Poly::zero());
                let dd_b = self.den.derivative();
                // (N/D)′ = (N′D − ND′)/D², N = A + By, D polynomial in u:
                // D′ = dda + dd_b·y with dda = 0 here (den has no y), so
                // den′ = den_u′ · y.
                let _ = dda;
                let num_a = &(&na * &self.den)
                    - &(&(&self.num_b * &dd_b) * p.as_ref());
                let num_b = &(&nb * &self.den) - &(&self.num_a * &dd_b);
                ExactFunc::new(num_a, num_b, &self.den * &self.den, self.model.clone())
            }
        }
    }

    /// Value at a numeric point (u, y) of the carrier curve.
    pub fn eval_complex(&self, u: Complex64, y: Complex64) -> Complex64 {
        let num = self.num_a.eval_complex(u) + self.num_b.eval_complex(u) * y;
        num / self.den.eval_complex(u)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = ExactFunc::constant(Coeff::one(), self.model.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Shift by a constant: self − c.
    pub fn sub_const(&self, c: &Coeff) -> Self {
        self - &ExactFunc::constant(c.clone(), self.model.clone())
    }
}

impl Add for &ExactFunc {
    type Output = ExactFunc;
    fn add(self, rhs: &ExactFunc) -> ExactFunc {
        let model = self.same_model(rhs);
        ExactFunc::new(
            &(&self.num_a * &rhs.den) + &(&rhs.num_a * &self.den),
            &(&self.num_b * &rhs.den) + &(&rhs.num_b * &self.den),
            &self.den * &rhs.den,
            model,
        )
    }
}

impl Sub for &ExactFunc {
    type Output = ExactFunc;
    fn sub(self, rhs: &ExactFunc) -> ExactFunc {
        self + &(-rhs)
    }
}

impl Mul for &ExactFunc {
    type Output = ExactFunc;
    fn mul(self, rhs: &ExactFunc) -> ExactFunc {
        let model = self.same_model(rhs);
        let aa = &self.num_a * &rhs.num_a;
        let bb = &self.num_b * &rhs.num_b;
        let ab = &(&self.num_a * &rhs.num_b) + &(&self.num_b * &rhs.num_a);
        let (num_a, num_b) = match &model {
            Model::Exp => (aa, ab),
            Model::Elliptic(p) => (&aa + &(&bb * p.as_ref()), ab),
        };
        ExactFunc::new(num_a, num_b, &self.den * &rhs.den, model)
    }
}

impl Div for &ExactFunc {
    type Output = ExactFunc;
    fn div(self, rhs: &ExactFunc) -> ExactFunc {
        self * &rhs.inv()
    }
}

impl Neg for &ExactFunc {
    type Output = ExactFunc;
    fn neg(self) -> ExactFunc {
        ExactFunc {
            num_a: -&self.num_a,
            num_b: -&self.num_b,
            den: self.den.clone(),
            model: self.model.clone(),
        }
    }
}

macro_rules! owned_func_ops {
    ($($trait:ident, $method:ident);*) => {$(
        impl $trait for ExactFunc {
            type Output = ExactFunc;
            fn $method(self, rhs: ExactFunc) -> ExactFunc {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_func_ops!(Add, add; Sub, sub; Mul, mul; Div, div);

impl Neg for ExactFunc {
    type Output = ExactFunc;
    fn neg(self) -> ExactFunc {
        -&self
    }
}

impl fmt::Display for ExactFunc {
    /// Canonical text form `((numA);(numB))/(den) @ model`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({});({}))/({}) @ {}",
            self.num_a, self.num_b, self.den, self.model
        )
    }
}

impl fmt::Debug for ExactFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_rational(num: &[i64], den: &[i64]) -> ExactFunc {
        ExactFunc::rational(Poly::from_ints(num), Poly::from_ints(den), Model::Exp)
    }

    #[test]
    fn exp_derivation_quotient_rule_example() {
        // f = (u+1)/(u−1)² = (u+1)/(u²−2u+1); D(f) = −u(u+3)/(u−1)³.
        let f = exp_rational(&[1, 1], &[1, -2, 1]);
        let df = f.derive();
        let expect = exp_rational(&[0, -3, -1], &[-1, 3, -3, 1]);
        assert_eq!(df, expect);
    }

    #[test]
    fn derivation_kills_constants() {
        let c = ExactFunc::constant(Coeff::rat(7, 3), Model::Exp);
        assert!(c.derive().is_zero());
        let model = Model::elliptic(Poly::from_ints(&[0, 48, 60, 12]));
        let c = ExactFunc::constant(Coeff::int(5), model);
        assert!(c.derive().is_zero());
    }

    #[test]
    fn elliptic_derivative_of_y() {
        // P = 12u(u+1)(u+4) = 48u + 60u² + 12u³; D(y) = P′/2 = 6(3u²+10u+4).
        let model = Model::elliptic(Poly::from_ints(&[0, 48, 60, 12]));
        let y = ExactFunc::y(model.clone());
        let dy = y.derive();
        let expect = ExactFunc::rational(
            Poly::from_ints(&[24, 60, 18]),
            Poly::one(),
            model,
        );
        assert_eq!(dy, expect);
    }

    #[test]
    fn y_squared_reduces_to_curve() {
        let p = Poly::from_ints(&[0, 48, 60, 12]);
        let model = Model::elliptic(p.clone());
        let y = ExactFunc::y(model.clone());
        let y2 = &y * &y;
        assert_eq!(y2, ExactFunc::rational(p, Poly::one(), model));
    }

    #[test]
    fn curve_relation_is_differentially_consistent() {
        // D(y·y) = D(P(u)) exactly.
        let p = Poly::from_ints(&[0, 48, 60, 12]);
        let model = Model::elliptic(p.clone());
        let y = ExactFunc::y(model.clone());
        let lhs = (&y * &y).derive();
        let rhs = ExactFunc::rational(p, Poly::one(), model).derive();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_roundtrip_in_extension() {
        let model = Model::elliptic(Poly::from_ints(&[0, 48, 60, 12]));
        // h = (u + 2y)/(u+1)
        let h = ExactFunc::new(
            Poly::from_ints(&[0, 1]),
            Poly::from_ints(&[2]),
            Poly::from_ints(&[1, 1]),
            model.clone(),
        );
        let prod = &h * &h.inv();
        assert_eq!(prod, ExactFunc::constant(Coeff::one(), model));
    }

    #[test]
    fn canonical_display() {
        let f = exp_rational(&[1, 1], &[1, -2, 1]);
        assert_eq!(f.to_string(), "((u+1);(0))/(u^2-2u+1) @ exp");
    }
}
