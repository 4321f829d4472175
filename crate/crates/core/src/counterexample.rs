//! Executable counterexamples: the intermediate value property fails over a
//! field with a finite residue field, over a non-divisible value group, and
//! for merely continuous (locally constant) functions.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::group::{GroupSpec, GroupValue};
use crate::ivt::{ivt_solve, IvtQuery};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub input: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    IvtFailsAsPredicted,
    Unexpected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub model: String,
    pub construction: String,
    pub note: Option<String>,
    pub checks: Vec<Check>,
    pub conclusion: Conclusion,
}

impl CounterexampleReport {
    fn new(model: &FieldSpec, construction: String, note: Option<String>, checks: Vec<Check>) -> Self {
        let conclusion = if checks.iter().all(|c| c.pass) {
            Conclusion::IvtFailsAsPredicted
        } else {
            Conclusion::Unexpected
        };
        CounterexampleReport { model: model.to_string(), construction, note, checks, conclusion }
    }

    pub fn passed(&self) -> bool {
        self.conclusion == Conclusion::IvtFailsAsPredicted
    }
}

fn check(input: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, pass: bool) -> Check {
    Check { input: input.into(), expected: expected.into(), observed: observed.into(), pass }
}

fn error_check(input: String, wanted: &str, r: Result<impl fmt::Display>) -> Check {
    match r {
        Err(e) => {
            let pass = e.kind() == wanted;
            check(input, wanted, e.kind(), pass)
        }
        Ok(x) => check(input, wanted, format!("solution {x}"), false),
    }
}

/// `P = ∏_{z<p} (X − z)` over `padic(p)`: `v(P(x)) = p·v(x)` when `v(x) < 0`
/// and `v(P(x)) > 0` when `v(x) ≥ 0`, so `v(P)` never takes the value `0`.
pub fn finite_residue_counterexample(p: u64, grid: &[GroupValue]) -> Result<CounterexampleReport> {
    let spec = FieldSpec::padic(p)?;
    let zs: Vec<FieldElement> = (0..p as i64).map(FieldElement::from_int).collect();
    let poly = Poly::from_roots(&zs);
    let mut checks = Vec::new();
    let mut zero_hits = Vec::new();
    for g in grid {
        if !GroupSpec::integers().contains(g) || g.is_infinite() {
            return Err(Error::GroupMismatch(format!("grid value {g} is not an integer")));
        }
        let base = spec.element_with_valuation(g)?;
        for u in (1..2 * p as i64).filter(|u| u % p as i64 != 0) {
            let x = base.scale(&crate::group::q(u));
            let vp = spec.valuation(&poly.eval(&x))?;
            let input = format!("x = {x} (v = {g})");
            if vp.is_zero() {
                zero_hits.push(x.to_string());
            }
            if g.is_negative() {
                let want = g.scale_int(p as i64)?;
                checks.push(check(input, format!("v(P(x)) = {want}"), vp.to_string(), vp == want));
            } else {
                let pass = vp.is_positive();
                checks.push(check(input, "v(P(x)) > 0", vp.to_string(), pass));
            }
        }
    }
    checks.push(check(
        "all sampled x",
        "v(P(x)) != 0",
        if zero_hits.is_empty() { "0 never attained".to_string() } else { format!("attained at {}", zero_hits.join(", ")) },
        zero_hits.is_empty(),
    ));
    // The induced query: v(P(1/p)) < 0 < v(P(p + 1)), target 0.
    let a = FieldElement::rational(crate::group::qr(1, p as i64));
    let b = FieldElement::from_int(p as i64 + 1);
    let q = IvtQuery { spec, f: poly.clone(), a: a.clone(), b: b.clone(), alpha: GroupValue::int(0) };
    checks.push(error_check(
        format!("ivt_solve(P, a = {a}, b = {b}, alpha = 0)"),
        "ExhaustedResidues",
        ivt_solve(&q),
    ));
    let note = "checked v(x) >= 0 => v(P(x)) > 0; the representative 0 is a root, so v(x) > 0 gives v(P(x)) > 0, not = 0";
    Ok(CounterexampleReport::new(&spec, format!("P(X) = {poly}"), Some(note.to_string()), checks))
}

/// `P = Xⁿ` over `laurent`, target `h` with `n ∤ h`: `v(P(a⁻¹)) < 0 < h < v(P(a))`,
/// yet `v(cⁿ) = n·v(c) = h` has no solution in `ℤ`.
pub fn divisibility_counterexample(n: u32, h: &GroupValue) -> Result<CounterexampleReport> {
    let spec = FieldSpec::Laurent;
    if n < 2 {
        return Err(Error::InvalidCounterexample(format!("n must be at least 2, got {n}")));
    }
    let hq = h
        .as_scalar()
        .filter(|x| x.is_integer())
        .ok_or_else(|| Error::InvalidCounterexample(format!("h = {h} must be an integer")))?
        .to_integer();
    if !h.is_positive() {
        return Err(Error::InvalidCounterexample(format!("h = {h} must be positive")));
    }
    let ni = i64::from(n);
    if (&hq % ni) == 0.into() {
        return Err(Error::InvalidCounterexample(format!("{n} divides {h}; a solution exists")));
    }
    let k = &hq / ni + 1;
    let kv: GroupValue = GroupValue::scalar(crate::group::Q::from_integer(k));
    let a = spec.element_with_valuation(&kv)?;
    let a_inv = a.inv(None)?;
    let poly = Poly::monomial(n as usize);
    let v_hi = spec.valuation(&poly.eval(&a))?;
    let v_lo = spec.valuation(&poly.eval(&a_inv))?;
    let mut checks = vec![
        check(format!("a = {a}"), format!("n*v(a) > {h}"), v_hi.to_string(), &v_hi > h),
        check(format!("a^-1 = {a_inv}"), "v(P(a^-1)) < 0", v_lo.to_string(), v_lo.is_negative()),
        check(
            "order".to_string(),
            format!("v(P(a^-1)) < 0 < {h} < v(P(a))"),
            format!("{v_lo} < 0 < {h} < {v_hi}"),
            v_lo.is_negative() && h.is_positive() && h < &v_hi,
        ),
    ];
    checks.push(error_check(
        format!("divide_exact({h}, {n})"),
        "DivisibilityError",
        spec.group().divide_exact(h, ni),
    ));
    let q = IvtQuery { spec, f: poly.clone(), a: a.clone(), b: a_inv.clone(), alpha: h.clone() };
    checks.push(error_check(format!("ivt_solve(P, {a}, {a_inv}, {h})"), "DivisibilityError", ivt_solve(&q)));
    Ok(CounterexampleReport::new(&spec, format!("P(X) = {poly}, h = {h}"), None, checks))
}

fn sample_grid(spec: &FieldSpec) -> Vec<GroupValue> {
    let mut grid: Vec<GroupValue> = (-3..=3).map(GroupValue::int).collect();
    if spec.group().divisible() {
        grid.extend([-3, -1, 1, 3].map(|n| GroupValue::ratio(n, 2)));
    }
    grid
}

/// `f(x) = k` on `M`, `k⁻¹` elsewhere: locally constant, hence continuous,
/// but `v(f)` only takes the values `±v(k)`.
pub fn locally_constant_ivt_failure(spec: &FieldSpec, k: &FieldElement) -> Result<CounterexampleReport> {
    spec.check(k)?;
    let vk = spec.valuation(k)?;
    if !vk.is_positive() || vk.is_infinite() {
        return Err(Error::Precondition(format!("need 0 < v(k) < inf, got {vk}")));
    }
    let k_inv = k.inv(None)?;
    let f = |x: &FieldElement| -> Result<&FieldElement> {
        Ok(if spec.valuation(x)?.is_positive() { k } else { &k_inv })
    };
    let mut checks = Vec::new();
    let mut attained = BTreeSet::new();
    let eps: Vec<FieldElement> = [1, 2, 3]
        .iter()
        .map(|e| spec.element_with_valuation(&GroupValue::int(*e)))
        .collect::<Result<_>>()?;
    let one = FieldElement::one();
    for g in sample_grid(spec) {
        let base = spec.element_with_valuation(&g)?;
        for x in [base.clone(), base.scale(&crate::group::q(2)), &base + &one] {
            let fx = f(&x)?;
            attained.insert(spec.valuation(fx)?);
            let vx = spec.valuation(&x)?;
            // The ball x + M has the same image under f.
            let constant = eps
                .iter()
                .filter(|e| spec.valuation(e).is_ok_and(|ve| ve.is_positive()))
                .map(|e| f(&(&x + e)).map(|y| y == fx))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b);
            checks.push(check(
                format!("ball around x = {x} (v = {vx})"),
                "f constant on x + M",
                if constant { "constant" } else { "varies" },
                constant,
            ));
        }
    }
    let expected: BTreeSet<GroupValue> = [vk.clone(), -&vk].into_iter().collect();
    let fmt_set = |s: &BTreeSet<GroupValue>| {
        format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
    };
    checks.push(check("attained values of v(f)", fmt_set(&expected), fmt_set(&attained), attained == expected));
    let zero = GroupValue::int(0);
    checks.push(check("target 0", "not attained", fmt_set(&attained), !attained.contains(&zero)));
    let a = spec.element_with_valuation(&GroupValue::int(1))?;
    let (fa, fb) = (spec.valuation(f(&a)?)?, spec.valuation(f(&one)?)?);
    checks.push(check(
        format!("a = {a} in M, b = 1 not in M"),
        "v(f(a)) > 0 > v(f(b))",
        format!("{fa} > 0 > {fb}"),
        fa.is_positive() && fb.is_negative(),
    ));
    Ok(CounterexampleReport::new(spec, format!("f(x) = {k} on M, ({k})^-1 elsewhere"), None, checks))
}
