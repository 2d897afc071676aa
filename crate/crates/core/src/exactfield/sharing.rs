//! Sharing reports: do two exact functions take a value at the same places,
//! and with which multiplicities?
//!
//! "Shared" means equality of the zero sets (radical comparison), the
//! multiplicity pattern is read off per place, and "CM" additionally demands
//! equal multiplicity everywhere. Exp models exclude the never-attained
//! carrier points u = 0 and u = ∞.

use super::coeff::Coeff;
use super::divisor::{poles_of, zeros_of, DivisorEntry, Place};
use super::func::{ExactFunc, Model};
use super::poly::Poly;
use std::fmt;

/// A value in the extended plane.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SharedValue {
    Finite(Coeff),
    Infinity,
}

impl SharedValue {
    pub fn finite(c: Coeff) -> Self {
        SharedValue::Finite(c)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SharedValue::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Coeff> {
        match self {
            SharedValue::Finite(c) => Some(c),
            SharedValue::Infinity => None,
        }
    }
}

impl fmt::Display for SharedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SharedValue::Finite(c) => write!(f, "{}", c),
            SharedValue::Infinity => write!(f, "\u{221e}"),
        }
    }
}

/// One location where at least one of the functions takes the value.
#[derive(Clone, Debug)]
pub struct SharedLocation {
    pub place: Place,
    pub mult_f: usize,
    pub mult_g: usize,
}

impl SharedLocation {
    pub fn describe(&self) -> String {
        let loc = match &self.place {
            Place::UPoint { q } => format!("u: {}=0", q),
            Place::Ramified { root } => format!("u={}", root),
            Place::Split { q, y_res: Some(r) } => format!("{}=0, y={}", q, r),
            Place::Split { q, y_res: None } => format!("{}=0 (both sheets)", q),
            Place::Infinity => "u=\u{221e}".to_string(),
        };
        format!("[{}] mult ({}, {})", loc, self.mult_f, self.mult_g)
    }
}

/// Per-value sharing report for a pair of functions.
#[derive(Clone, Debug)]
pub struct MultPattern {
    pub value: SharedValue,
    pub locations: Vec<SharedLocation>,
    /// Same zero set (possibly empty on both sides).
    pub shared: bool,
    /// Shared with identical multiplicities everywhere.
    pub cm: bool,
    /// Neither function attains the value (a common Picard value).
    pub attained: bool,
}

impl MultPattern {
    /// The multiset of (mult_f, mult_g) pairs over all locations.
    pub fn pattern_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .locations
            .iter()
            .map(|l| (l.mult_f, l.mult_g))
            .collect();
        v.sort_unstable();
        v
    }
}

/// Value point set of `f`: zeros of f − a, or the pole divisor for ∞,
/// with never-attained exp-model carrier points dropped.
fn value_points(f: &ExactFunc, value: &SharedValue) -> Vec<DivisorEntry> {
    let entries = match value {
        SharedValue::Finite(a) => zeros_of(&f.sub_const(a)),
        SharedValue::Infinity => poles_of(f),
    };
    match f.model() {
        Model::Exp => entries
            .into_iter()
            .filter(|(p, _)| match p {
                Place::UPoint { q } => *q != Poly::var(),
                _ => true,
            })
            .collect(),
        Model::Elliptic(_) => entries,
    }
}

fn order_at(entries: &[DivisorEntry], place: &Place) -> usize {
    entries
        .iter()
        .find(|(p, _)| p == place)
        .map(|(_, v)| *v as usize)
        .unwrap_or(0)
}

/// Re-express both entry lists over a common pairwise-coprime factor basis,
/// so locations of the two functions become structurally comparable.
fn refine_common(
    zf: Vec<DivisorEntry>,
    zg: Vec<DivisorEntry>,
) -> (Vec<DivisorEntry>, Vec<DivisorEntry>) {
    let mut polys = vec![];
    for (p, _) in zf.iter().chain(zg.iter()) {
        match p {
            Place::UPoint { q } | Place::Split { q, .. } => polys.push(q.clone()),
            _ => {}
        }
    }
    let basis = crate::exactfield::divisor::gcd_free_basis(polys);
    let remap = |entries: Vec<DivisorEntry>| -> Vec<DivisorEntry> {
        entries
            .into_iter()
            .flat_map(|(p, v)| match &p {
                Place::UPoint { q } => basis
                    .iter()
                    .filter(|b| q.rem_mod(b).is_zero())
                    .map(|b| (Place::UPoint { q: b.clone() }, v))
                    .collect::<Vec<_>>(),
                Place::Split { q, y_res } => basis
                    .iter()
                    .filter(|b| q.rem_mod(b).is_zero())
                    .map(|b| {
                        (
                            Place::Split {
                                q: b.clone(),
                                y_res: y_res.as_ref().map(|r| r.rem_mod(b)),
                            },
                            v,
                        )
                    })
                    .collect(),
                _ => vec![(p, v)],
            })
            .collect()
    };
    (remap(zf), remap(zg))
}

/// Compare the a-point divisors of `f` and `g`.
///
/// Both functions must live in the same model. Split places with a sheet
/// tag only match when the y-residues agree; an untagged entry (y-free
/// function) covers both sheets with equal order.
pub fn sharing_report(f: &ExactFunc, g: &ExactFunc, value: &SharedValue) -> MultPattern {
    assert!(f != g, "sharing comparison needs distinct functions");
    assert!(f.model() == g.model(), "mixed models in sharing comparison");
    let (zf, zg) = refine_common(value_points(f, value), value_points(g, value));

    let mut locations: Vec<SharedLocation> = vec![];
    let mut place_keys: Vec<Place> = vec![];
    for (p, _) in zf.iter().chain(zg.iter()) {
        if !place_keys.contains(p) {
            place_keys.push(p.clone());
        }
        // An untagged split entry on one side must be compared sheet by
        // sheet against tagged entries over the same factor.
        if let Place::Split { q, y_res: None } = p {
            for src in [&zf, &zg] {
                for (other, _) in src.iter() {
                    if let Place::Split {
                        q: q2,
                        y_res: Some(_),
                    } = other
                    {
                        if q2 == q && !place_keys.contains(other) {
                            place_keys.push(other.clone());
                        }
                    }
                }
            }
        }
    }

    for place in place_keys {
        let (mf, mg) = match &place {
            Place::Split { q, y_res: Some(_) } => {
                let untagged = Place::Split {
                    q: q.clone(),
                    y_res: None,
                };
                (
                    order_at(&zf, &place).max(order_at(&zf, &untagged)),
                    order_at(&zg, &place).max(order_at(&zg, &untagged)),
                )
            }
            Place::Split { q, y_res: None } => {
                // Skip the untagged key when a tagged refinement exists; the
                // per-sheet keys above cover it.
                let has_tagged = zf.iter().chain(zg.iter()).any(|(p, _)| {
                    matches!(p, Place::Split { q: q2, y_res: Some(_) } if q2 == q)
                });
                if has_tagged {
                    continue;
                }
                (order_at(&zf, &place), order_at(&zg, &place))
            }
            _ => (order_at(&zf, &place), order_at(&zg, &place)),
        };
        if mf == 0 && mg == 0 {
            continue;
        }
        locations.push(SharedLocation {
            place,
            mult_f: mf,
            mult_g: mg,
        });
    }

    locations.sort_by_key(|l| format!("{:?}", l.place));
    let attained = !locations.is_empty();
    let shared = locations.iter().all(|l| l.mult_f > 0 && l.mult_g > 0);
    let cm = shared && locations.iter().all(|l| l.mult_f == l.mult_g);
    MultPattern {
        value: value.clone(),
        locations,
        shared,
        cm,
        attained,
    }
}
