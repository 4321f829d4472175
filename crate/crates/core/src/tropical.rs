//! Newton polygons and the tropical function `φ_f(γ) = minᵢ (v(aᵢ) + i·γ)`.
//!
//! `φ_f` is kept in min-plus form (the points `(i, v(aᵢ))`); breakpoints,
//! slopes and affine segments are derived from the lower convex hull.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::group::{GroupValue, Q};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalForm {
    // (degree, valuation), degrees strictly increasing, valuations finite.
    terms: Vec<(usize, GroupValue)>,
}

/// A root valuation `h` with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootValuation {
    pub h: GroupValue,
    pub multiplicity: usize,
}

/// The finite root valuations of `f`, `h` strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolygonSlopes(pub Vec<RootValuation>);

impl PolygonSlopes {
    pub fn contains(&self, h: &GroupValue) -> bool {
        self.0.iter().any(|r| &r.h == h)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.0.iter().map(|r| r.multiplicity).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RootValuation> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The multiset, one entry per root.
    pub fn expanded(&self) -> Vec<GroupValue> {
        self.0
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.h.clone(), r.multiplicity))
            .collect()
    }
}

/// `φ(γ) = intercept + slope·γ` on `[lo, hi]`; `lo = None` is `−∞` and
/// `hi = ∞` is unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub lo: Option<GroupValue>,
    pub hi: GroupValue,
    pub slope: usize,
    pub intercept: GroupValue,
}

impl Segment {
    pub fn value_at(&self, gamma: &GroupValue) -> GroupValue {
        affine(&self.intercept, self.slope, gamma)
    }
}

fn affine(intercept: &GroupValue, slope: usize, gamma: &GroupValue) -> GroupValue {
    if slope == 0 {
        return intercept.clone();
    }
    match gamma {
        GroupValue::Infinity => GroupValue::Infinity,
        g => intercept + &g.scale_int(slope as i64).expect("finite"),
    }
}

fn q_int(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl TropicalForm {
    /// From explicit `(degree, valuation)` pairs; infinite valuations are dropped.
    pub fn from_terms<I: IntoIterator<Item = (usize, GroupValue)>>(terms: I) -> Result<Self> {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, v)| v.is_finite()).collect();
        terms.sort_by_key(|(i, _)| *i);
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Precondition("repeated degree in tropical form".into()));
        }
        if terms.is_empty() {
            return Err(Error::Precondition("the zero polynomial has no tropical form".into()));
        }
        let rank = terms[0].1.rank();
        if let Some((_, v)) = terms.iter().find(|(_, v)| v.rank() != rank) {
            return Err(Error::RankMismatch { left: rank.unwrap_or(0), right: v.rank().unwrap_or(0) });
        }
        Ok(TropicalForm { terms })
    }

    /// Coefficient valuations of `f`. Zero coefficients never reach the
    /// minimum and are dropped; undetermined ones are an error.
    pub fn new(spec: &FieldSpec, f: &Poly) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push((i, spec.valuation(c)?));
        }
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> &[(usize, GroupValue)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.last().expect("nonempty").0
    }

    /// Order of vanishing at `0`: the number of roots equal to zero.
    pub fn order_at_zero(&self) -> usize {
        self.terms[0].0
    }

    /// Indices into `terms` of the lower convex hull vertices.
    fn hull(&self) -> Vec<usize> {
        let mut hull: Vec<usize> = Vec::new();
        for k in 0..self.terms.len() {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let (ia, va) = &self.terms[a];
                let (ib, vb) = &self.terms[b];
                let (ic, vc) = &self.terms[k];
                // b is dropped unless it lies strictly below the chord a–c.
                let lhs = (vb - va).scale_int((ic - ia) as i64).expect("finite");
                let rhs = (vc - va).scale_int((ib - ia) as i64).expect("finite");
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(k);
        }
        hull
    }

    /// Root valuations with multiplicities, read off the lower hull.
    pub fn newton_polygon(&self) -> PolygonSlopes {
        let hull = self.hull();
        let mut out: Vec<RootValuation> = hull
            .windows(2)
            .map(|w| {
                let (i, vi) = &self.terms[w[0]];
                let (j, vj) = &self.terms[w[1]];
                let width = j - i;
                let h = (vi - vj).scale_q(&(Q::one() / q_int(width)));
                RootValuation { h, multiplicity: width }
            })
            .collect();
        out.reverse();
        PolygonSlopes(out)
    }

    /// `φ(γ)`. At `γ = ∞` this is the valuation of the constant term.
    pub fn phi(&self, gamma: &GroupValue) -> GroupValue {
        self.terms
            .iter()
            .map(|(i, v)| affine(v, *i, gamma))
            .min()
            .expect("nonempty")
    }

    /// The affine pieces of `φ`, in increasing `γ`.
    pub fn segments(&self) -> Vec<Segment> {
        let hull = self.hull();
        let slopes = self.newton_polygon();
        // Ascending γ walks the hull from its right end to its left end.
        let mut segs = Vec::with_capacity(hull.len());
        let mut lo: Option<GroupValue> = None;
        for (k, &idx) in hull.iter().rev().enumerate() {
            let hi = slopes.0.get(k).map_or(GroupValue::Infinity, |r| r.h.clone());
            let (deg, val) = &self.terms[idx];
            segs.push(Segment { lo: lo.clone(), hi: hi.clone(), slope: *deg, intercept: val.clone() });
            lo = Some(hi);
        }
        segs
    }
}

pub fn newton_polygon(spec: &FieldSpec, f: &Poly) -> Result<PolygonSlopes> {
    Ok(TropicalForm::new(spec, f)?.newton_polygon())
}

pub fn phi_eval(spec: &FieldSpec, f: &Poly, gamma: &GroupValue) -> Result<GroupValue> {
    Ok(TropicalForm::new(spec, f)?.phi(gamma))
}

/// The minimum of `v(f(x))` over `v(x) = α`, and whether that fiber takes
/// more than one value (exactly when `α` is a nonzero-root valuation).
pub fn fiber_min(spec: &FieldSpec, f: &Poly, alpha: &GroupValue) -> Result<(GroupValue, bool)> {
    let form = TropicalForm::new(spec, f)?;
    Ok((form.phi(alpha), form.newton_polygon().contains(alpha)))
}

/// An element found by a residue scan, with the number of rejected candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub element: FieldElement,
    pub retries: usize,
}

/// Scans `u·t^γ` over units with distinct residues, returning the first
/// candidate that `accept`s. At most `limit` candidates are tried.
pub(crate) fn scan_units(
    spec: &FieldSpec,
    gamma: &GroupValue,
    limit: usize,
    mut accept: impl FnMut(&FieldElement) -> Result<Option<FieldElement>>,
) -> Result<Realization> {
    let mut retries = 0;
    for u in spec.unit_residues().take(limit) {
        let x = spec.unit_times(&u, gamma)?;
        if let Some(found) = accept(&x)? {
            return Ok(Realization { element: found, retries });
        }
        retries += 1;
    }
    match spec.residue_field_size() {
        Some(p) if (retries as u64) < limit as u64 && retries as u64 == p - 1 => {
            Err(Error::ExhaustedResidues { needed: retries + 1, available: retries })
        }
        _ => Err(Error::VerificationFailed(format!(
            "no candidate among {limit} distinct residues at valuation {gamma}"
        ))),
    }
}

/// Finds `c` with `v(c) = γ` and `v(f(c)) = φ_f(γ)`.
///
/// At most `deg f` nonzero residues can be bad, so `deg f + 1` candidates
/// always suffice over an infinite residue field.
pub fn realize_min(spec: &FieldSpec, f: &Poly, gamma: &GroupValue) -> Result<Realization> {
    let form = TropicalForm::new(spec, f)?;
    let target = form.phi(gamma);
    let limit = form.degree() + 1;
    scan_units(spec, gamma, limit, |c| {
        Ok((spec.valuation(&f.eval(c))? == target).then(|| c.clone()))
    })
}

impl fmt::Display for PolygonSlopes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| format!("{} (x{})", r.h, r.multiplicity)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
