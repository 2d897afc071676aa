//! Registry of the classical value-sharing example pairs and triple, in
//! exact and numeric form, self-verified at construction time.
//!
//! * `polya` — e^z and e^{−z}, sharing −1, 0, 1, ∞ (0 and ∞ as Picard
//!   values, ±1 with equal multiplicities).
//! * `gundersen` — (e^z+1)/(e^z−1)² and (e^z+1)²/(8(e^z−1)), sharing
//!   1, 0, ∞, −1/8 with multiplicity patterns (1,2)/(2,1).
//! * `reinders` — (1/(8√3))·uu′/(u+1) and (1/(8√3))·(u+4)u′/(u+1)² over
//!   (u′)² = 12u(u+1)(u+4), sharing −1, 0, 1, ∞ with patterns (1,3)/(3,1).
//! * `steinmetz_triple` — the three branches of the sharing cubic over an
//!   elliptic carrier, sharing 0, 1, ∞, α with α = (1+i√3)/2.

use crate::exactfield::{
    mues_psi, phi_pair, sharing_report, Coeff, ExactFunc, Model, Poly, SharedValue,
};
use crate::meroeval::{EllipticRational, MeroError, MeroFunc, TripleSystem};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExampleId {
    Polya,
    Gundersen,
    Reinders,
    SteinmetzTriple,
}

impl ExampleId {
    pub fn all() -> [ExampleId; 4] {
        [
            ExampleId::Polya,
            ExampleId::Gundersen,
            ExampleId::Reinders,
            ExampleId::SteinmetzTriple,
        ]
    }

    pub fn parse(s: &str) -> Option<ExampleId> {
        match s {
            "polya" => Some(ExampleId::Polya),
            "gundersen" => Some(ExampleId::Gundersen),
            "reinders" => Some(ExampleId::Reinders),
            "steinmetz_triple" | "triple" => Some(ExampleId::SteinmetzTriple),
            _ => None,
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExampleId::Polya => "polya",
            ExampleId::Gundersen => "gundersen",
            ExampleId::Reinders => "reinders",
            ExampleId::SteinmetzTriple => "steinmetz_triple",
        };
        write!(f, "{}", s)
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("numeric construction failed: {0}")]
    Numeric(#[from] MeroError),
    #[error("self-verification failed: {0}")]
    SelfVerification(String),
}

/// Exact pair with its shared-value bookkeeping.
#[derive(Clone, Debug)]
pub struct ExactPair {
    pub f: ExactFunc,
    pub g: ExactFunc,
    /// The three finite values used by the Φ/Ψ machinery, in table order.
    pub finite_values: Vec<Coeff>,
}

/// Expected Φ_f, Φ_g, Ψ, Φ row.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub phi_f: ExactFunc,
    pub phi_g: ExactFunc,
    pub psi: ExactFunc,
    pub phi: ExactFunc,
}

#[derive(Clone)]
pub struct ExampleEntry {
    pub id: ExampleId,
    pub exact: Option<ExactPair>,
    /// Numeric forms; two functions, or three for the triple.
    pub numeric: Vec<MeroFunc>,
    /// All shared values (projective), in the labeling order used by the
    /// theorem checkers.
    pub values: Vec<SharedValue>,
    /// The triple's α, where applicable.
    pub alpha: Option<Coeff>,
    pub expected_table: Option<TableRow>,
    /// Period parallelogram for per-cell counting (elliptic entries); for
    /// the triple this is the branch functions' own lattice.
    pub counting_cell: Option<(Complex64, Complex64)>,
    pub triple: Option<Arc<TripleSystem>>,
}

fn exp_rational(num: &[i64], den: &[i64]) -> ExactFunc {
    ExactFunc::rational(Poly::from_ints(num), Poly::from_ints(den), Model::Exp)
}

fn v(c: Coeff) -> SharedValue {
    SharedValue::Finite(c)
}

/// The multiplicity-pattern pairs the sharing reports must reproduce,
/// per value, as multisets of (mult_f, mult_g). For the triple the pairs
/// are per branch pair across the three point subsequences.
pub fn expected_patterns(id: ExampleId) -> Vec<(SharedValue, Vec<(usize, usize)>)> {
    match id {
        ExampleId::Polya => vec![
            (v(Coeff::int(1)), vec![(1, 1)]),
            (v(Coeff::int(-1)), vec![(1, 1)]),
            (v(Coeff::zero()), vec![]),
            (SharedValue::Infinity, vec![]),
        ],
        ExampleId::Gundersen => vec![
            (v(Coeff::int(1)), vec![(1, 2)]),
            (v(Coeff::zero()), vec![(1, 2)]),
            (SharedValue::Infinity, vec![(2, 1)]),
            (v(Coeff::rat(-1, 8)), vec![(2, 1)]),
        ],
        ExampleId::Reinders => vec![
            (v(Coeff::int(-1)), vec![(1, 3), (3, 1)]),
            (v(Coeff::zero()), vec![(1, 3), (3, 1)]),
            (v(Coeff::int(1)), vec![(1, 3), (3, 1)]),
            (SharedValue::Infinity, vec![(1, 3), (3, 1)]),
        ],
        ExampleId::SteinmetzTriple => {
            let alpha = &Coeff::rat(1, 2) + &Coeff::sqrt_term(1, 2, -3);
            vec![
                (v(Coeff::zero()), vec![(1, 1), (1, 4), (4, 1)]),
                (v(Coeff::int(1)), vec![(1, 1), (1, 4), (4, 1)]),
                (SharedValue::Infinity, vec![(1, 1), (1, 4), (4, 1)]),
                (v(alpha), vec![(1, 1), (1, 4), (4, 1)]),
            ]
        }
    }
}

/// Construct an example with all its forms, running the construction-time
/// self-checks.
pub fn build(id: ExampleId) -> Result<ExampleEntry, BuildError> {
    let entry = match id {
        ExampleId::Polya => {
            let f = ExactFunc::var(Model::Exp);
            let g = f.inv();
            let finite = vec![Coeff::int(1), Coeff::int(-1), Coeff::zero()];
            let table = TableRow {
                phi_f: exp_rational(&[1], &[0, 1]),
                phi_g: exp_rational(&[0, 1], &[1]),
                psi: exp_rational(&[1], &[1]),
                phi: exp_rational(&[1], &[0, 0, 1]),
            };
            let numeric = vec![
                MeroFunc::rational_of_exp(f.clone()),
                MeroFunc::rational_of_exp(g.clone()),
            ];
            ExampleEntry {
                id,
                exact: Some(ExactPair {
                    f,
                    g,
                    finite_values: finite,
                }),
                numeric,
                values: vec![
                    v(Coeff::int(1)),
                    v(Coeff::int(-1)),
                    v(Coeff::zero()),
                    SharedValue::Infinity,
                ],
                alpha: None,
                expected_table: Some(table),
                counting_cell: None,
                triple: None,
            }
        }
        ExampleId::Gundersen => {
            let f = exp_rational(&[1, 1], &[1, -2, 1]);
            let g = exp_rational(&[1, 2, 1], &[-8, 8]);
            let finite = vec![Coeff::int(1), Coeff::zero(), Coeff::rat(-1, 8)];
            let table = TableRow {
                phi_f: exp_rational(&[1, -1], &[1]),
                phi_g: exp_rational(&[8], &[1, -1]),
                psi: exp_rational(&[8], &[1]),
                phi: exp_rational(&[1, -2, 1], &[8]),
            };
            let numeric = vec![
                MeroFunc::rational_of_exp(f.clone()),
                MeroFunc::rational_of_exp(g.clone()),
            ];
            ExampleEntry {
                id,
                exact: Some(ExactPair {
                    f,
                    g,
                    finite_values: finite,
                }),
                numeric,
                values: vec![
                    v(Coeff::int(1)),
                    v(Coeff::zero()),
                    v(Coeff::rat(-1, 8)),
                    SharedValue::Infinity,
                ],
                alpha: None,
                expected_table: Some(table),
                counting_cell: None,
                triple: None,
            }
        }
        ExampleId::Reinders => {
            // (u′)² = 12u(u+1)(u+4); f = (√3/24)·u·y/(u+1),
            // g = (√3/24)·(u+4)·y/(u+1)².
            let model = Model::elliptic(Poly::from_ints(&[0, 48, 60, 12]));
            let s3_24 = Coeff::sqrt_term(1, 24, 3);
            let f = ExactFunc::new(
                Poly::zero(),
                Poly::var().scale(&s3_24),
                Poly::from_ints(&[1, 1]),
                model.clone(),
            );
            let g = ExactFunc::new(
                Poly::zero(),
                Poly::from_ints(&[4, 1]).scale(&s3_24),
                Poly::from_ints(&[1, 2, 1]),
                model.clone(),
            );
            let finite = vec![Coeff::int(-1), Coeff::zero(), Coeff::int(1)];
            // Φ_f = 12√3/(u+1), Φ_g = 12(u+1)/√3 = 4√3(u+1), Ψ = 144,
            // Φ = Φ_f/Φ_g = 3/(u+1)².
            let twelve_s3 = Coeff::sqrt_term(12, 1, 3);
            let four_s3 = Coeff::sqrt_term(4, 1, 3);
            let table = TableRow {
                phi_f: ExactFunc::rational(
                    Poly::constant(twelve_s3),
                    Poly::from_ints(&[1, 1]),
                    model.clone(),
                ),
                phi_g: ExactFunc::rational(
                    Poly::from_ints(&[1, 1]).scale(&four_s3),
                    Poly::one(),
                    model.clone(),
                ),
                psi: ExactFunc::constant(Coeff::int(144), model.clone()),
                phi: ExactFunc::rational(
                    Poly::from_ints(&[3]),
                    Poly::from_ints(&[1, 2, 1]),
                    model.clone(),
                ),
            };
            let nf = MeroFunc::elliptic(f.clone(), Complex64::new(0.0, 0.0))?;
            let ng = MeroFunc::elliptic(g.clone(), Complex64::new(0.0, 0.0))?;
            let cell = match &nf {
                MeroFunc::EllipticRat(e) => e.z_periods(),
                _ => unreachable!(),
            };
            ExampleEntry {
                id,
                exact: Some(ExactPair {
                    f,
                    g,
                    finite_values: finite,
                }),
                numeric: vec![nf, ng],
                values: vec![
                    v(Coeff::int(-1)),
                    v(Coeff::zero()),
                    v(Coeff::int(1)),
                    SharedValue::Infinity,
                ],
                alpha: None,
                expected_table: Some(table),
                counting_cell: Some(cell),
                triple: None,
            }
        }
        ExampleId::SteinmetzTriple => {
            let alpha_exact = &Coeff::rat(1, 2) + &Coeff::sqrt_term(1, 2, -3);
            let alpha = alpha_exact.to_complex();
            // Carrier (u′)² = 4u(u+1)(u+α), ramified over the collision
            // points {0, −1, −α, ∞} of the sharing cubic.
            let four = Coeff::int(4);
            let p = Poly::new(vec![
                Coeff::zero(),
                &four * &alpha_exact,
                &four * &(&Coeff::one() + &alpha_exact),
                four,
            ]);
            let carrier = EllipticRational::from_ode(
                ExactFunc::var(Model::elliptic(p)),
                Complex64::new(0.0, 0.0),
            )?;
            let system = TripleSystem::new(alpha, carrier)?;
            let cell = system.branch_lattice()?;
            let numeric = (0..3)
                .map(|k| MeroFunc::triple_branch(system.clone(), k))
                .collect();
            ExampleEntry {
                id,
                exact: None,
                numeric,
                values: vec![
                    v(Coeff::zero()),
                    v(Coeff::int(1)),
                    v(alpha_exact.clone()),
                    SharedValue::Infinity,
                ],
                alpha: Some(alpha_exact),
                expected_table: None,
                counting_cell: Some(cell),
                triple: Some(system),
            }
        }
    };
    self_verify(&entry)?;
    Ok(entry)
}

fn fail(msg: impl Into<String>) -> BuildError {
    BuildError::SelfVerification(msg.into())
}

fn self_verify(entry: &ExampleEntry) -> Result<(), BuildError> {
    if let Some(pair) = &entry.exact {
        // Every listed value must be shared (radical equality).
        for value in &entry.values {
            let rep = sharing_report(&pair.f, &pair.g, value);
            if !rep.shared {
                return Err(fail(format!("{}: value {} not shared", entry.id, value)));
            }
        }
        // Table row reproduction, exactly.
        if let Some(table) = &entry.expected_table {
            let psi = mues_psi(&pair.f, &pair.g, &pair.finite_values, true)
                .map_err(|e| fail(format!("{}: {}", entry.id, e)))?;
            if psi != table.psi {
                return Err(fail(format!("{}: Ψ mismatch: {}", entry.id, psi)));
            }
            let (pf, pg, phi) = phi_pair(&pair.f, &pair.g, &pair.finite_values)
                .map_err(|e| fail(format!("{}: {}", entry.id, e)))?;
            if pf != table.phi_f || pg != table.phi_g || phi != table.phi {
                return Err(fail(format!(
                    "{}: Φ row mismatch: {} | {} | {}",
                    entry.id, pf, pg, phi
                )));
            }
            if &pf * &pg != psi {
                return Err(fail(format!("{}: Φ_f·Φ_g ≠ Ψ", entry.id)));
            }
        }
        // Exact and numeric forms agree at 50 seeded points.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
        let mut checked = 0;
        while checked < 50 {
            let z = sample_point(entry, &mut rng);
            for (exact, numeric) in [(&pair.f, &entry.numeric[0]), (&pair.g, &entry.numeric[1])]
            {
                let ev = numeric.eval(z);
                if ev.pole {
                    continue;
                }
                let direct = eval_exact_at(exact, entry, z);
                let scale = 1.0 + ev.value.norm();
                if (direct - ev.value).norm() > 1e-9 * scale {
                    return Err(fail(format!(
                        "{}: exact/numeric mismatch at {}: {} vs {}",
                        entry.id, z, direct, ev.value
                    )));
                }
            }
            checked += 1;
        }
    }
    if entry.id == ExampleId::Reinders {
        // Carrier ODE residual at 100 seeded points.
        let carrier = match &entry.numeric[0] {
            MeroFunc::EllipticRat(e) => e.clone(),
            _ => unreachable!(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x0de_5eed);
        let (p1, p2) = carrier.z_periods();
        let mut checked = 0;
        while checked < 100 {
            let z = p1 * rng.gen::<f64>() + p2 * rng.gen::<f64>();
            if let Some((u, y)) = carrier.carrier(z) {
                if u.norm() > 1e6 {
                    continue;
                }
                let res = (y * y - 12.0 * u * (u + 1.0) * (u + 4.0)).norm()
                    / (1.0 + u.norm().powi(3));
                if res > 1e-9 {
                    return Err(fail(format!("reinders ODE residual {} at {}", res, z)));
                }
                checked += 1;
            }
        }
    }
    if let Some(alpha) = &entry.alpha {
        if alpha.pow(3) != Coeff::int(-1) || *alpha == Coeff::int(-1) {
            return Err(fail("alpha is not a nontrivial third root of -1"));
        }
    }
    Ok(())
}

fn sample_point(entry: &ExampleEntry, rng: &mut ChaCha8Rng) -> Complex64 {
    match entry.counting_cell {
        Some((p1, p2)) => p1 * rng.gen::<f64>() + p2 * rng.gen::<f64>(),
        None => Complex64::new(
            rng.gen::<f64>() * 4.0 - 2.0,
            (rng.gen::<f64>() - 0.5) * 2.0 * std::f64::consts::PI,
        ),
    }
}

fn eval_exact_at(exact: &ExactFunc, entry: &ExampleEntry, z: Complex64) -> Complex64 {
    match exact.model() {
        Model::Exp => exact.eval_complex(z.exp(), Complex64::new(0.0, 0.0)),
        Model::Elliptic(_) => {
            let carrier = match &entry.numeric[0] {
                MeroFunc::EllipticRat(e) => e.clone(),
                _ => unreachable!(),
            };
            match carrier.carrier(z) {
                Some((u, y)) => exact.eval_complex(u, y),
                None => Complex64::new(f64::INFINITY, f64::INFINITY),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{aux_identity, AuxPreset, AuxVerdict};

    #[test]
    fn build_polya() {
        let e = build(ExampleId::Polya).unwrap();
        assert!(e.exact.is_some());
        let table = e.expected_table.unwrap();
        assert_eq!(table.psi.constant_value(), Some(Coeff::one()));
    }

    #[test]
    fn build_gundersen_shares_expected_values() {
        let e = build(ExampleId::Gundersen).unwrap();
        assert_eq!(
            e.values,
            vec![
                SharedValue::Finite(Coeff::int(1)),
                SharedValue::Finite(Coeff::zero()),
                SharedValue::Finite(Coeff::rat(-1, 8)),
                SharedValue::Infinity
            ]
        );
        let table = e.expected_table.unwrap();
        assert_eq!(table.psi.constant_value(), Some(Coeff::int(8)));
    }

    #[test]
    fn build_reinders_table_row() {
        let e = build(ExampleId::Reinders).unwrap();
        let table = e.expected_table.unwrap();
        assert_eq!(table.psi.constant_value(), Some(Coeff::int(144)));
    }

    #[test]
    fn sharing_patterns_match_expected() {
        for id in [ExampleId::Gundersen, ExampleId::Reinders] {
            let e = build(id).unwrap();
            let pair = e.exact.as_ref().unwrap();
            for (value, want) in expected_patterns(id) {
                let rep = sharing_report(&pair.f, &pair.g, &value);
                assert_eq!(rep.pattern_pairs(), want, "{} value {}", id, value);
                assert!(rep.shared);
                assert!(!rep.cm, "{} value {} must not be CM", id, value);
            }
        }
    }

    #[test]
    fn polya_cm_values() {
        let e = build(ExampleId::Polya).unwrap();
        let pair = e.exact.as_ref().unwrap();
        for (value, want) in expected_patterns(ExampleId::Polya) {
            let rep = sharing_report(&pair.f, &pair.g, &value);
            assert_eq!(rep.pattern_pairs(), want);
            assert!(rep.shared);
            if !want.is_empty() {
                assert!(rep.cm);
            } else {
                assert!(!rep.attained);
            }
        }
    }

    #[test]
    fn triple_alpha_is_exact_root() {
        let e = build(ExampleId::SteinmetzTriple).unwrap();
        let alpha = e.alpha.unwrap();
        assert_eq!(alpha.pow(3), Coeff::int(-1));
        assert_ne!(alpha, Coeff::int(-1));
        assert_eq!(e.numeric.len(), 3);
        assert!(e.counting_cell.is_some());
    }

    #[test]
    fn aux_identities_on_polya() {
        let e = build(ExampleId::Polya).unwrap();
        let pair = e.exact.unwrap();
        let rep = aux_identity(&AuxPreset::Phi40, &pair.f, &pair.g).unwrap();
        assert_eq!(rep.verdict, AuxVerdict::Constant(Coeff::int(2)));
    }
}
