//! Exhaustive searches for integer points of small twisted height.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::height::{twisted_height_int, QPower, TwistedValue};
use super::system::{ExponentTuple, LinearFormSystemQ};
use crate::algebraic::RationalLinearForm;
use crate::arith::rational::{fmt_rational, pow_cmp, rat, to_f64};
use crate::arith::{Place, Rational};
use crate::error::{Error, Result};

/// Brute force is refused beyond this many lattice points.
const BRUTE_LIMIT: f64 = 5e7;

fn check_box(box_: u64) -> Result<i64> {
    if box_ == 0 {
        return Err(Error::invalid("box must be >= 1"));
    }
    i64::try_from(box_).map_err(|_| Error::invalid("box too large"))
}

/// Primitive and first nonzero coordinate positive.
fn is_normalized(x: &[i64]) -> bool {
    let g = x.iter().fold(0i64, |g, &v| g.gcd(&v));
    g == 1 && x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

fn big(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&v| BigInt::from(v)).collect()
}

fn passes(x: &[i64], sys: &LinearFormSystemQ, c: &ExponentTuple, q: &QPower, delta: &Rational) -> Result<bool> {
    twisted_height_int(&big(x), sys, c, q)?.le_q_pow(&-delta)
}

/// Every normalized primitive point of [-box, box]^n, in lexicographic order.
fn primitive_points(n: usize, b: i64) -> Result<Vec<Vec<i64>>> {
    if ((2 * b + 1) as f64).powi(n as i32) > BRUTE_LIMIT {
        return Err(Error::invalid(format!("box {b} in dimension {n} is too large for exhaustive search")));
    }
    let mut out = Vec::new();
    let mut x = vec![-b; n];
    loop {
        if is_normalized(&x) {
            out.push(x.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < b {
                x[i] += 1;
                break;
            }
            x[i] = -b;
        }
    }
}

/// Reference search: tests every primitive point of the box.
pub fn search_small_points_brute(
    sys: &LinearFormSystemQ,
    c: &ExponentTuple,
    q: &QPower,
    delta: &Rational,
    box_: u64,
) -> Result<Vec<Vec<BigInt>>> {
    let b = check_box(box_)?;
    let mut out = Vec::new();
    for x in primitive_points(sys.n(), b)? {
        if passes(&x, sys, c, q, delta)? {
            out.push(big(&x));
        }
    }
    Ok(out)
}

fn inverse2(m: &[RationalLinearForm]) -> [[Rational; 2]; 2] {
    // det = 1
    let (a, b) = (m[0].coeffs()[0].clone(), m[0].coeffs()[1].clone());
    let (c, d) = (m[1].coeffs()[0].clone(), m[1].coeffs()[1].clone());
    [[d, -b], [-c, a]]
}

/// Primitive integer points of the box with H_Q(x) <= Q^(-delta), one per
/// pair ±x. In dimension 2 only a parallelogram cut out by the
/// archimedean forms is scanned: at a finite place v the factor of a
/// primitive point is at least Q^(-max_i c_iv) / ‖M_v^-1‖_v, which leaves
/// a budget for the archimedean factor. Every candidate is then checked
/// exactly.
pub fn search_small_points(
    sys: &LinearFormSystemQ,
    c: &ExponentTuple,
    q: &QPower,
    delta: &Rational,
    box_: u64,
) -> Result<Vec<Vec<BigInt>>> {
    let b = check_box(box_)?;
    if sys.n() != 2 {
        return search_small_points_brute(sys, c, q, delta, box_);
    }
    let lnq = q.ln_f64();
    let mut ln_budget = -to_f64(delta) * lnq;
    let mut finite: BTreeSet<Place> = sys.exceptions().keys().cloned().collect();
    finite.extend(c.values().keys().cloned());
    finite.remove(&Place::Inf);
    for v in &finite {
        let inv = inverse2(&sys.forms_at(v));
        let norm = inv.iter().flatten().map(|e| v.abs(e)).max().expect("four entries");
        let cmax = c.at(v).into_iter().max().expect("two exponents");
        ln_budget -= -to_f64(&norm).ln() - to_f64(&cmax) * lnq;
    }
    let forms = sys.forms_at(&Place::Inf);
    let cinf = c.at(&Place::Inf);
    // |L_i(x)| <= A_i, with slack for the floating point
    let a: Vec<f64> = cinf.iter().map(|ci| (ln_budget + to_f64(ci) * lnq).exp() * (1.0 + 1e-9) + 1e-9).collect();
    let inv = inverse2(&forms);
    let x1_bound = to_f64(&inv[0][0].abs()) * a[0] + to_f64(&inv[0][1].abs()) * a[1];
    let x1_max = if x1_bound.is_finite() { (x1_bound.floor() as i64 + 1).min(b) } else { b };
    let coef: Vec<(f64, f64)> =
        forms.iter().map(|f| (to_f64(&f.coeffs()[0]), to_f64(&f.coeffs()[1]))).collect();
    let mut out = Vec::new();
    for x1 in 0..=x1_max {
        let (mut lo, mut hi) = (if x1 == 0 { 1.0 } else { -(b as f64) }, b as f64);
        let mut empty = false;
        for (&(ai, bi), &ai_bound) in coef.iter().zip(&a) {
            if !ai_bound.is_finite() {
                continue;
            }
            let centre = -ai * x1 as f64;
            if bi == 0.0 {
                if (ai * x1 as f64).abs() > ai_bound * (1.0 + 1e-9) + 1e-9 {
                    empty = true;
                }
                continue;
            }
            let (l, h) = ((centre - ai_bound) / bi, (centre + ai_bound) / bi);
            lo = lo.max(l.min(h) - 1.0);
            hi = hi.min(l.max(h) + 1.0);
        }
        if empty || lo > hi {
            continue;
        }
        for x2 in (lo.ceil() as i64).max(-b)..=(hi.floor() as i64).min(b) {
            let x = [x1, x2];
            if is_normalized(&x) && passes(&x, sys, c, q, delta)? {
                out.push(big(&x));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn collinear(x: &[BigInt], y: &[BigInt]) -> bool {
    (&x[0] * &y[1] - &x[1] * &y[0]).is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct GapSample {
    pub q: String,
    pub points: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub q0: String,
    pub delta: String,
    pub samples: Vec<GapSample>,
    /// A direction spanning every point found, if any point was found.
    pub witness: Option<Vec<String>>,
    pub passed: bool,
    /// Two independent points, which would contradict the gap principle.
    pub counterexample: Option<(Vec<String>, Vec<String>)>,
}

fn strs(x: &[BigInt]) -> Vec<String> {
    x.iter().map(|v| v.to_string()).collect()
}

/// Samples Q = Q0^(1 + (delta/2) k / samples), k = 0..samples, collects all
/// small points and checks that they lie on one line through the origin.
pub fn gap_principle_experiment(
    sys: &LinearFormSystemQ,
    c: &ExponentTuple,
    delta: &Rational,
    q0: &Rational,
    samples: usize,
    box_: u64,
) -> Result<GapReport> {
    if sys.n() != 2 {
        return Err(Error::invalid("the gap experiment needs n = 2"));
    }
    if !delta.is_positive() || samples == 0 {
        return Err(Error::invalid("need delta > 0 and at least one sample"));
    }
    // Q0 > 4^(1/delta)  <=>  Q0^delta > 4
    if !q0.is_positive() || pow_cmp(q0, delta, &Rational::from_integer(4.into()), &Rational::one())? != Ordering::Greater {
        return Err(Error::invalid(format!("need Q0 > 4^(1/delta), got Q0 = {}", fmt_rational(q0))));
    }
    let mut out = Vec::new();
    let mut all: Vec<Vec<BigInt>> = Vec::new();
    for k in 0..samples {
        let e = Rational::one() + delta / Rational::from_integer(2.into()) * rat(k as i64, samples as i64);
        let q = QPower::new(q0.clone(), e)?;
        let pts = search_small_points(sys, c, &q, delta, box_)?;
        for p in &pts {
            if !all.contains(p) {
                all.push(p.clone());
            }
        }
        out.push(GapSample { q: q.to_string(), points: pts.iter().map(|p| strs(p)).collect() });
    }
    let witness = all.first().cloned();
    let counterexample = witness
        .as_ref()
        .and_then(|w| all.iter().find(|p| !collinear(w, p)).map(|p| (strs(w), strs(p))));
    Ok(GapReport {
        q0: fmt_rational(q0),
        delta: fmt_rational(delta),
        samples: out,
        witness: witness.map(|w| strs(&w)),
        passed: counterexample.is_none(),
        counterexample,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InfimaEstimate {
    pub lambda1: TwistedValue,
    pub x1: Vec<String>,
    pub lambda2: TwistedValue,
    pub x2: Vec<String>,
    pub product: TwistedValue,
    /// Whether 1/2 <= lambda1 * lambda2 <= 2 holds for the estimates.
    pub product_in_range: bool,
}

/// Smallest twisted height over primitive points of the box and the
/// smallest one in a different direction. Both are upper bounds for the
/// successive infima.
pub fn infima_estimate(sys: &LinearFormSystemQ, c: &ExponentTuple, q: &QPower, box_: u64) -> Result<InfimaEstimate> {
    let b = check_box(box_)?;
    if sys.n() != 2 {
        return Err(Error::invalid("infima estimates need n = 2"));
    }
    let mut vals: Vec<(Vec<BigInt>, TwistedValue)> = Vec::new();
    for x in primitive_points(2, b)? {
        let xb = big(&x);
        let h = twisted_height_int(&xb, sys, c, q)?;
        vals.push((xb, h));
    }
    let argmin = |pool: &mut dyn Iterator<Item = &(Vec<BigInt>, TwistedValue)>| -> Result<Option<(Vec<BigInt>, TwistedValue)>> {
        let mut best: Option<&(Vec<BigInt>, TwistedValue)> = None;
        for cand in pool {
            if best.map_or(Ok(true), |b| cand.1.cmp_value(&b.1).map(|o| o == Ordering::Less))? {
                best = Some(cand);
            }
        }
        Ok(best.cloned())
    };
    let (x1, l1) = argmin(&mut vals.iter())?.expect("box >= 1 has primitive points");
    let (x2, l2) = argmin(&mut vals.iter().filter(|(x, _)| !collinear(x, &x1)))?
        .ok_or_else(|| Error::invalid("box too small for two independent points"))?;
    let product = l1.mul(&l2);
    let in_range = product.cmp_rational(&rat(1, 2))? != Ordering::Less && product.cmp_rational(&rat(2, 1))? != Ordering::Greater;
    Ok(InfimaEstimate { lambda1: l1, x1: strs(&x1), lambda2: l2, x2: strs(&x2), product, product_in_range: in_range })
}

fn random_det_one<R: Rng>(rng: &mut R) -> Vec<RationalLinearForm> {
    loop {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..=4)).collect();
        let d = e[0] * e[3] - e[1] * e[2];
        if d == 0 {
            continue;
        }
        let r0 = vec![rat(e[0], d), rat(e[1], d)];
        let r1 = vec![rat(e[2], 1), rat(e[3], 1)];
        return vec![RationalLinearForm::new(r0).expect("nonzero row"), RationalLinearForm::new(r1).expect("nonzero row")];
    }
}

/// A random determinant-one system with forms at infinity and possibly one
/// small prime, and random exponents with sum 0 and sum of maxima <= 1.
pub fn random_instance<R: Rng>(rng: &mut R) -> Result<(LinearFormSystemQ, ExponentTuple)> {
    let mut forms = BTreeMap::new();
    forms.insert(Place::Inf, random_det_one(rng));
    let p = [2u32, 3, 5][rng.gen_range(0..3)];
    let with_prime = rng.gen_bool(0.5);
    if with_prime {
        forms.insert(Place::P(p.into()), random_det_one(rng));
    }
    let sys = LinearFormSystemQ::new(2, forms, None)?;
    let mut cs = BTreeMap::new();
    let u = rat(rng.gen_range(-4..=4), 8);
    cs.insert(Place::Inf, vec![u.clone(), -u]);
    if with_prime || rng.gen_bool(0.3) {
        let w = rat(rng.gen_range(-4..=4), 8);
        cs.insert(Place::P(p.into()), vec![w.clone(), -w]);
    }
    Ok((sys, ExponentTuple::new(2, cs)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct GapSuiteReport {
    pub seed: u64,
    pub systems: usize,
    pub delta: String,
    pub q0: String,
    pub box_size: u64,
    /// Systems on which at least one small point was found.
    pub with_points: usize,
    /// Indices of systems with two independent small points in the window.
    pub failures: Vec<usize>,
    pub passed: bool,
}

/// The gap experiment on `systems` random determinant-one instances drawn
/// from a ChaCha8 stream seeded with `seed`.
pub fn gap_principle_suite(
    seed: u64,
    systems: usize,
    delta: &Rational,
    q0: &Rational,
    samples: usize,
    box_: u64,
) -> Result<GapSuiteReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = GapSuiteReport {
        seed,
        systems,
        delta: fmt_rational(delta),
        q0: fmt_rational(q0),
        box_size: box_,
        with_points: 0,
        failures: Vec::new(),
        passed: true,
    };
    for i in 0..systems {
        let (sys, c) = random_instance(&mut rng)?;
        let r = gap_principle_experiment(&sys, &c, delta, q0, samples, box_)?;
        if r.witness.is_some() {
            out.with_points += 1;
        }
        if !r.passed {
            out.failures.push(i);
        }
    }
    out.passed = out.failures.is_empty();
    Ok(out)
}

/// Number of independent small points observed, for reporting.
pub fn span_dimension(points: &[Vec<BigInt>]) -> usize {
    match points.first() {
        None => 0,
        Some(w) if points.iter().all(|p| collinear(w, p)) => 1,
        Some(_) => 2,
    }
}

pub fn to_i64_vec(x: &[BigInt]) -> Option<Vec<i64>> {
    x.iter().map(|v| v.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn half_split() -> ExponentTuple {
        let mut m = BTreeMap::new();
        m.insert(Place::Inf, vec![rat(1, 2), rat(-1, 2)]);
        ExponentTuple::new(2, m).unwrap()
    }

    #[test]
    fn split_system_points() {
        let sys = LinearFormSystemQ::identity(2);
        let q = QPower::rational(int(16)).unwrap();
        let pts = search_small_points(&sys, &half_split(), &q, &rat(1, 2), 10).unwrap();
        assert_eq!(pts, vec![vec![BigInt::from(1), BigInt::from(0)]]);
        let small = search_small_points(&sys, &half_split(), &q, &rat(1, 2), 1).unwrap();
        assert!(small.iter().all(|p| pts.contains(p)));
        let q4 = QPower::rational(int(4)).unwrap();
        assert!(search_small_points(&sys, &ExponentTuple::zero(2), &q4, &rat(1, 2), 10).unwrap().is_empty());
        assert!(search_small_points(&sys, &half_split(), &q, &rat(1, 2), 0).is_err());
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let (sys, c) = random_instance(&mut rng).unwrap();
            for (qb, d) in [(17, rat(1, 2)), (5, rat(1, 8)), (40, rat(1, 4))] {
                let q = QPower::rational(int(qb)).unwrap();
                let fast = search_small_points(&sys, &c, &q, &d, 8).unwrap();
                let slow = search_small_points_brute(&sys, &c, &q, &d, 8).unwrap();
                assert_eq!(fast, slow, "{sys:?} {c:?}");
            }
        }
    }

    #[test]
    fn gap_on_split_system() {
        let sys = LinearFormSystemQ::identity(2);
        let r = gap_principle_experiment(&sys, &half_split(), &rat(1, 2), &int(17), 4, 10).unwrap();
        assert!(r.passed);
        assert_eq!(r.witness, Some(vec!["1".to_string(), "0".to_string()]));
        let empty = gap_principle_experiment(&sys, &ExponentTuple::zero(2), &rat(1, 2), &int(17), 3, 6).unwrap();
        assert!(empty.passed && empty.witness.is_none());
        assert!(gap_principle_experiment(&sys, &half_split(), &rat(1, 2), &int(16), 4, 10).is_err());
    }

    #[test]
    fn seeded_suite_is_deterministic() {
        let a = gap_principle_suite(3, 5, &rat(1, 2), &int(17), 3, 20).unwrap();
        let b = gap_principle_suite(3, 5, &rat(1, 2), &int(17), 3, 20).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.passed);
    }

    #[test]
    fn infima() {
        let sys = LinearFormSystemQ::identity(2);
        let q = QPower::rational(int(16)).unwrap();
        let id = infima_estimate(&sys, &ExponentTuple::zero(2), &q, 3).unwrap();
        assert_eq!((id.lambda1.exact(), id.lambda2.exact()), (Some(int(1)), Some(int(1))));
        let s = infima_estimate(&sys, &half_split(), &q, 5).unwrap();
        assert_eq!((s.lambda1.exact(), s.lambda2.exact()), (Some(rat(1, 4)), Some(int(4))));
        assert_eq!(s.x2, vec!["0", "1"]);
        assert!(s.product_in_range);
        assert!(infima_estimate(&sys, &half_split(), &q, 0).is_err());
    }
}
