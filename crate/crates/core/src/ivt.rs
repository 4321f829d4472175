//! The constructive intermediate value solver for polynomials.
//!
//! Given `v(f(a)) > α > v(f(b))`, finds `c` with `v(f(c)) = α` and `v(c)`
//! between `v(a)` and `v(b)`. Two cases:
//!
//! * `α ≤ φ_f(v(a))`: invert the affine piece of `φ_f` that crosses `α`,
//!   giving `η`, then pick `c` of valuation `η` on which `φ_f` is attained.
//! * `φ_f(v(a)) < α`: `v(a)` is a root valuation. Shift to `g(X) = f(a + X)`
//!   and solve `φ_g(γ) = α` for `γ > v(a)`; then `c = a + x` with `v(x) = γ`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::group::GroupValue;
use crate::poly::Poly;
use crate::tropical::{realize_min, scan_units, TropicalForm};

#[derive(Clone, Debug, PartialEq)]
pub struct IvtQuery {
    pub spec: FieldSpec,
    pub f: Poly,
    pub a: FieldElement,
    pub b: FieldElement,
    pub alpha: GroupValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    SegmentInversion { intercept: GroupValue, slope: usize, retries: usize },
    BreakpointShift { shift_point: FieldElement, retries: usize },
}

impl Certificate {
    pub fn case(&self) -> &'static str {
        match self {
            Certificate::SegmentInversion { .. } => "segment-inversion",
            Certificate::BreakpointShift { .. } => "breakpoint-shift",
        }
    }

    pub fn retries(&self) -> usize {
        match self {
            Certificate::SegmentInversion { retries, .. } | Certificate::BreakpointShift { retries, .. } => *retries,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IvtSolution {
    pub c: FieldElement,
    pub vc: GroupValue,
    pub achieved: GroupValue,
    pub certificate: Certificate,
}

impl fmt::Display for IvtSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c = {}, v(c) = {}, v(f(c)) = {} [{}]", self.c, self.vc, self.achieved, self.certificate.case())
    }
}

/// `η ∈ [lo, hi]` with `φ(η) = α`, together with the affine piece used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentRoot {
    pub eta: GroupValue,
    pub intercept: GroupValue,
    pub slope: usize,
}

/// Solves `φ(η) = α` on `[lo, hi]`. `φ` is non-decreasing, so the first
/// piece (in increasing `γ`) whose image contains `α` is used; at a
/// breakpoint this returns the breakpoint. On a flat piece at height `α`
/// the left end of the piece, clipped to `[lo, hi]`, is returned.
pub fn solve_segment(
    form: &TropicalForm,
    group: &crate::group::GroupSpec,
    alpha: &GroupValue,
    lo: &GroupValue,
    hi: &GroupValue,
) -> Result<SegmentRoot> {
    if lo > hi {
        return Err(Error::Precondition(format!("empty range [{lo}, {hi}]")));
    }
    let mut pending: Option<Error> = None;
    for seg in form.segments() {
        let s_lo = match &seg.lo {
            Some(l) if l > lo => l.clone(),
            _ => lo.clone(),
        };
        let s_hi = if &seg.hi < hi { seg.hi.clone() } else { hi.clone() };
        if s_lo > s_hi {
            continue;
        }
        let (y_lo, y_hi) = (seg.value_at(&s_lo), seg.value_at(&s_hi));
        if alpha < &y_lo || alpha > &y_hi {
            continue;
        }
        if seg.slope == 0 {
            if let Some(eta) = group.pick_in(&s_lo, &s_hi) {
                return Ok(SegmentRoot { eta, intercept: seg.intercept.clone(), slope: 0 });
            }
            continue;
        }
        match group.divide_exact(&(alpha - &seg.intercept), seg.slope as i64) {
            Ok(eta) => return Ok(SegmentRoot { eta, intercept: seg.intercept.clone(), slope: seg.slope }),
            // A later flat piece at height α may still contain a group element.
            Err(e) => pending = pending.or(Some(e)),
        }
    }
    Err(pending.unwrap_or_else(|| Error::NoSegment(format!("{alpha} on [{lo}, {hi}]"))))
}

/// Finds `w` with `v(w) = v(w0)` and `v(f(w)) = α`, where `v(w0)` is a root
/// valuation of `f` and `φ_f(v(w0)) ≤ α < v(f(w0))`.
pub fn realize_intermediate(
    spec: &FieldSpec,
    f: &Poly,
    w0: &FieldElement,
    alpha: &GroupValue,
) -> Result<(FieldElement, usize)> {
    let plan = plan_intermediate(spec, f, w0, alpha)?;
    match plan {
        Intermediate::AtMinimum { h } => {
            let r = realize_min(spec, f, &h)?;
            Ok((r.element, r.retries))
        }
        Intermediate::Shifted { g, gamma } => {
            let r = realize_min(spec, &g, &gamma)?;
            Ok((w0 + &r.element, r.retries))
        }
    }
}

enum Intermediate {
    // α = φ_f(h): any element of the fiber where the minimum is attained.
    AtMinimum { h: GroupValue },
    // w = w0 + x, v(x) = gamma > h, v(g(x)) = α.
    Shifted { g: Poly, gamma: GroupValue },
}

fn plan_intermediate(spec: &FieldSpec, f: &Poly, w0: &FieldElement, alpha: &GroupValue) -> Result<Intermediate> {
    let h = spec.valuation(w0)?;
    let top = spec.valuation(&f.eval(w0))?;
    if alpha >= &top {
        return Err(Error::HypothesisViolation(format!("target {alpha} is not below v(f(w0)) = {top}")));
    }
    let form = TropicalForm::new(spec, f)?;
    let floor = form.phi(&h);
    if alpha < &floor {
        return Err(Error::Precondition(format!("target {alpha} is below phi({h}) = {floor}")));
    }
    if alpha == &floor {
        return Ok(Intermediate::AtMinimum { h });
    }
    let g = f.taylor_shift(w0);
    let g_form = TropicalForm::new(spec, &g)?;
    let root = solve_segment(&g_form, &spec.group(), alpha, &h, &GroupValue::Infinity)?;
    if root.eta <= h || root.eta.is_infinite() {
        return Err(Error::VerificationFailed(format!("shifted solve returned {} for breakpoint {h}", root.eta)));
    }
    Ok(Intermediate::Shifted { g, gamma: root.eta })
}

struct Oriented {
    hi_point: FieldElement,
    v_hi: GroupValue,
    v_lo: GroupValue,
    range: (GroupValue, GroupValue),
}

fn orient(q: &IvtQuery) -> Result<Oriented> {
    let spec = &q.spec;
    spec.check(&q.a)?;
    spec.check(&q.b)?;
    for c in q.f.coeffs() {
        spec.check(c)?;
    }
    if !spec.group().contains(&q.alpha) || q.alpha.is_infinite() {
        return Err(Error::GroupMismatch(format!("target {} is not a finite value of {spec}", q.alpha)));
    }
    let fa = spec.valuation(&q.f.eval(&q.a))?;
    let fb = spec.valuation(&q.f.eval(&q.b))?;
    let (hi_point, lo_point, v_hi, v_lo) = if fa >= fb { (&q.a, &q.b, fa, fb) } else { (&q.b, &q.a, fb, fa) };
    if !(v_hi > q.alpha && q.alpha > v_lo) {
        return Err(Error::Precondition(format!(
            "target {} is not strictly between v(f(a)) = {v_hi} and v(f(b)) = {v_lo}",
            q.alpha
        )));
    }
    let (x, y) = (spec.valuation(hi_point)?, spec.valuation(lo_point)?);
    let range = if x <= y { (x, y) } else { (y, x) };
    Ok(Oriented { hi_point: hi_point.clone(), v_hi, v_lo, range })
}

enum Plan {
    Segment { root: SegmentRoot },
    Breakpoint { w0: FieldElement, inner: Intermediate },
}

fn plan(q: &IvtQuery) -> Result<(Plan, Oriented)> {
    let o = orient(q)?;
    let spec = &q.spec;
    let form = TropicalForm::new(spec, &q.f)?;
    let va = spec.valuation(&o.hi_point)?;
    if q.alpha <= form.phi(&va) {
        // φ(v(b)) ≤ v(f(b)) < α ≤ φ(v(a)), so v(b) < v(a) and η ∈ (v(b), v(a)].
        let root = solve_segment(&form, &spec.group(), &q.alpha, &o.range.0, &o.range.1)?;
        Ok((Plan::Segment { root }, o))
    } else {
        let inner = plan_intermediate(spec, &q.f, &o.hi_point, &q.alpha)?;
        Ok((Plan::Breakpoint { w0: o.hi_point.clone(), inner }, o))
    }
}

fn finish(q: &IvtQuery, o: &Oriented, c: FieldElement, certificate: Certificate) -> Result<IvtSolution> {
    let achieved = q.spec.valuation(&q.f.eval(&c))?;
    let vc = q.spec.valuation(&c)?;
    if achieved != q.alpha || vc < o.range.0 || vc > o.range.1 {
        return Err(Error::VerificationFailed(format!(
            "candidate {c} gives v(f(c)) = {achieved}, v(c) = {vc}; wanted {} with v(c) in [{}, {}]",
            q.alpha, o.range.0, o.range.1
        )));
    }
    debug_assert!(o.v_lo < achieved && achieved < o.v_hi);
    Ok(IvtSolution { c, vc, achieved, certificate })
}

pub fn ivt_solve(q: &IvtQuery) -> Result<IvtSolution> {
    let (plan, o) = plan(q)?;
    let spec = &q.spec;
    match plan {
        Plan::Segment { root } => {
            let (c, retries) = if root.eta.is_infinite() {
                (FieldElement::zero(), 0)
            } else {
                let r = realize_min(spec, &q.f, &root.eta)?;
                (r.element, r.retries)
            };
            let cert = Certificate::SegmentInversion { intercept: root.intercept, slope: root.slope, retries };
            finish(q, &o, c, cert)
        }
        Plan::Breakpoint { w0, inner } => {
            let (c, retries) = match inner {
                Intermediate::AtMinimum { h } => {
                    let r = realize_min(spec, &q.f, &h)?;
                    (r.element, r.retries)
                }
                Intermediate::Shifted { g, gamma } => {
                    let r = realize_min(spec, &g, &gamma)?;
                    (&w0 + &r.element, r.retries)
                }
            };
            finish(q, &o, c, Certificate::BreakpointShift { shift_point: w0, retries })
        }
    }
}

/// `k` distinct solutions, in scan order; the first is [`ivt_solve`]'s.
pub fn ivt_enumerate(q: &IvtQuery, k: usize) -> Result<Vec<IvtSolution>> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let first = ivt_solve(q)?;
    let (plan, o) = plan(q)?;
    let spec = &q.spec;
    let deg = q.f.degree().unwrap_or(0);
    // Every residue class but at most deg is good, so this bound is generous.
    let limit = (k + deg + 1) * (deg + 1);
    let (poly, gamma, base) = match &plan {
        Plan::Segment { root } => (q.f.clone(), root.eta.clone(), None),
        Plan::Breakpoint { w0, inner: Intermediate::AtMinimum { h } } => {
            let _ = w0;
            (q.f.clone(), h.clone(), None)
        }
        Plan::Breakpoint { w0, inner: Intermediate::Shifted { g, gamma } } => {
            (g.clone(), gamma.clone(), Some(w0.clone()))
        }
    };
    if gamma.is_infinite() {
        return if k == 1 { Ok(vec![first]) } else { Err(Error::Precondition("the only solution is 0".into())) };
    }
    let mut out: Vec<IvtSolution> = Vec::with_capacity(k);
    let mut retries = 0;
    for u in spec.unit_candidates().take(limit) {
        let x = spec.unit_times(&u, &gamma)?;
        if spec.valuation(&poly.eval(&x))? != q.alpha {
            retries += 1;
            continue;
        }
        let c = match &base {
            Some(w0) => w0 + &x,
            None => x,
        };
        if out.iter().any(|s| s.c == c) {
            continue;
        }
        let mut cert = first.certificate.clone();
        match &mut cert {
            Certificate::SegmentInversion { retries: r, .. } | Certificate::BreakpointShift { retries: r, .. } => {
                *r = retries
            }
        }
        out.push(finish(q, &o, c, cert)?);
        if out.len() == k {
            return Ok(out);
        }
    }
    match spec.residue_field_size() {
        Some(p) => Err(Error::ExhaustedResidues { needed: k, available: out.len().min(p as usize) }),
        None => Err(Error::VerificationFailed(format!("only {} of {k} solutions within {limit} candidates", out.len()))),
    }
}

/// Exhaustive oracle over `u·t^γ`, `u ∈ {1, …, n}`, `γ` in `grid`: the
/// first hit in `(γ, u)` order, if any.
pub fn brute_force(q: &IvtQuery, grid: &[GroupValue], n: usize) -> Result<Option<FieldElement>> {
    for gamma in grid {
        let hit = scan_units(&q.spec, gamma, n, |x| {
            Ok((q.spec.valuation(&q.f.eval(x))? == q.alpha).then(|| x.clone()))
        });
        match hit {
            Ok(r) => return Ok(Some(r.element)),
            Err(Error::ExhaustedResidues { .. } | Error::VerificationFailed(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::parse::{parse_element, parse_poly};

    fn el(s: &str) -> FieldElement {
        parse_element(s).unwrap()
    }

    fn g(s: &str) -> GroupValue {
        s.parse().unwrap()
    }

    fn query(spec: FieldSpec, f: &str, a: &str, b: &str, alpha: &str) -> IvtQuery {
        IvtQuery { spec, f: parse_poly(f).unwrap(), a: el(a), b: el(b), alpha: g(alpha) }
    }

    #[test]
    fn segment_examples() {
        let px = GroupSpec::rationals();
        let form = TropicalForm::new(&FieldSpec::Puiseux, &parse_poly("X^2 - t").unwrap()).unwrap();
        let r = solve_segment(&form, &px, &g("1/2"), &g("0"), &g("1")).unwrap();
        assert_eq!(r, SegmentRoot { eta: g("1/4"), intercept: g("0"), slope: 2 });

        let form = TropicalForm::new(&FieldSpec::Laurent, &parse_poly("X^2").unwrap()).unwrap();
        let e = solve_segment(&form, &GroupSpec::integers(), &g("1"), &g("-1"), &g("1")).unwrap_err();
        assert_eq!(e.kind(), "DivisibilityError");

        let form = TropicalForm::new(&FieldSpec::Puiseux, &parse_poly("X - 1").unwrap()).unwrap();
        let r = solve_segment(&form, &px, &g("0"), &g("-1"), &g("1")).unwrap();
        assert_eq!(r.eta, g("0"));

        let e = solve_segment(&form, &px, &g("-5"), &g("-1"), &g("1")).unwrap_err();
        assert!(matches!(e, Error::NoSegment(_)));
    }

    #[test]
    fn flat_piece_returns_left_end() {
        // Points (1, 0), (3, 0): φ is 3γ then γ, never flat; α = 1 at γ = 1.
        let form = TropicalForm::from_terms([(1, g("0")), (3, g("0"))]).unwrap();
        let r = solve_segment(&form, &GroupSpec::rationals(), &g("1"), &g("1"), &g("3")).unwrap();
        assert_eq!(r.eta, g("1"));
        // φ = min(1, γ) is flat at 1 from γ = 1 on; clipped to the range.
        let form = TropicalForm::from_terms([(0, g("1")), (1, g("0"))]).unwrap();
        let r = solve_segment(&form, &GroupSpec::integers(), &g("1"), &g("2"), &g("3")).unwrap();
        assert_eq!((r.eta, r.slope), (g("2"), 0));
    }

    #[test]
    fn later_flat_piece_rescues_divisibility() {
        // φ = min(2γ, 1): reaches 1 at γ = 1/2, then flat.
        let form = TropicalForm::from_terms([(0, g("1")), (2, g("0"))]).unwrap();
        let r = solve_segment(&form, &GroupSpec::integers(), &g("1"), &g("0"), &g("2")).unwrap();
        assert_eq!((r.eta, r.slope), (g("1"), 0));
    }

    #[test]
    fn intermediate_examples() {
        let f = parse_poly("X^2 - X").unwrap();
        let (w, retries) = realize_intermediate(&FieldSpec::Puiseux, &f, &el("1 + t"), &g("1/2")).unwrap();
        assert_eq!(w, el("1 + t + t^(1/2)"));
        assert_eq!(FieldSpec::Puiseux.valuation(&f.eval(&w)).unwrap(), g("1/2"));
        assert_eq!(retries, 0);

        let (w, retries) = realize_intermediate(&FieldSpec::Puiseux, &f, &el("1 + t"), &g("0")).unwrap();
        assert_eq!((w, retries), (el("2"), 1));

        let f = parse_poly("(X - 1)*(X - 1 - t)").unwrap();
        let (w, _) = realize_intermediate(&FieldSpec::Puiseux, &f, &el("1 + 2*t"), &g("3/2")).unwrap();
        assert_eq!(w, el("1 + 2*t + t^(3/4)"));
        assert_eq!(FieldSpec::Puiseux.valuation(&f.eval(&w)).unwrap(), g("3/2"));
        assert_eq!(FieldSpec::Puiseux.valuation(&w).unwrap(), g("0"));

        let e = realize_intermediate(&FieldSpec::Puiseux, &f, &el("1 + 2*t"), &g("2")).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolation(_)));
    }

    #[test]
    fn solve_examples() {
        let s = ivt_solve(&query(FieldSpec::Puiseux, "X^2 - t", "t", "1", "1/2")).unwrap();
        assert_eq!((s.c.clone(), s.vc.clone(), s.achieved.clone()), (el("t^(1/4)"), g("1/4"), g("1/2")));
        assert_eq!(s.certificate.case(), "segment-inversion");

        let s = ivt_solve(&query(FieldSpec::Puiseux, "X^2 - X", "1 + t", "2", "1/2")).unwrap();
        assert_eq!(s.vc, g("0"));
        assert_eq!(s.certificate.case(), "breakpoint-shift");
        assert_eq!(s.certificate, Certificate::BreakpointShift { shift_point: el("1 + t"), retries: 0 });

        // Either order of a and b.
        let s2 = ivt_solve(&query(FieldSpec::Puiseux, "X^2 - X", "2", "1 + t", "1/2")).unwrap();
        assert_eq!(s2.c, s.c);
    }

    #[test]
    fn witness_errors() {
        let e = ivt_solve(&query(FieldSpec::padic(2).unwrap(), "X*(X - 1)", "1/2", "3", "0")).unwrap_err();
        assert_eq!(e.kind(), "ExhaustedResidues");
        let e = ivt_solve(&query(FieldSpec::Laurent, "X^2", "t", "t^-1", "1")).unwrap_err();
        assert_eq!(e.kind(), "DivisibilityError");
        let e = ivt_solve(&query(FieldSpec::Puiseux, "X^2 - t", "t", "1", "2")).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }

    #[test]
    fn root_on_the_high_side() {
        // v(f(a)) = ∞ is allowed.
        let s = ivt_solve(&query(FieldSpec::Puiseux, "X^2 - t^2", "t", "1", "3/2")).unwrap();
        assert_eq!(s.achieved, g("3/2"));
        assert_eq!(s.vc, g("3/4"));
    }

    #[test]
    fn enumeration() {
        let q = query(FieldSpec::Puiseux, "X^2 - t", "t", "1", "1/2");
        let cs: Vec<_> = ivt_enumerate(&q, 3).unwrap().into_iter().map(|s| s.c).collect();
        assert_eq!(cs, vec![el("t^(1/4)"), el("2*t^(1/4)"), el("3*t^(1/4)")]);
        assert_eq!(ivt_enumerate(&q, 1).unwrap()[0], ivt_solve(&q).unwrap());

        let q = query(FieldSpec::Puiseux, "X^2 - X", "1 + t", "2", "1/2");
        let cs: Vec<_> = ivt_enumerate(&q, 2).unwrap().into_iter().map(|s| s.c).collect();
        assert_eq!(cs, vec![el("1 + t + t^(1/2)"), el("1 + t + 2*t^(1/2)")]);
    }

    #[test]
    fn enumeration_over_padic_repeats_classes() {
        // Fiber v(c) = 0 of X - 1 in Q_3: the class of 1 is bad, 2 mod 3 is good.
        let q = query(FieldSpec::padic(3).unwrap(), "X - 1", "10", "1/3", "0");
        let cs: Vec<_> = ivt_enumerate(&q, 3).unwrap().into_iter().map(|s| s.c).collect();
        assert_eq!(cs, vec![el("2"), el("5"), el("8")]);
    }

    #[test]
    fn agrees_with_brute_force() {
        let grid: Vec<GroupValue> = (0..=4).map(|i| GroupValue::ratio(i, 4)).collect();
        let q = query(FieldSpec::Puiseux, "X^2 - t", "t", "1", "1/2");
        let hit = brute_force(&q, &grid, 3).unwrap().unwrap();
        assert_eq!(FieldSpec::Puiseux.valuation(&q.f.eval(&hit)).unwrap(), g("1/2"));
    }
}
