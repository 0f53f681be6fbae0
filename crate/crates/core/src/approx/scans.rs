//! Brute-force solutions of the Ridout system
//!   |xi - x/y| <= y^-f_inf, |x|_p <= y^-f_p (p in S1), |y|_p <= y^-f_p (p in S2)
//! and of its Cugiani variant with f_inf + eps(y) and gcd(x, y) = 1.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::convergents::convergents;
use super::subject::Subject;
use crate::algebraic::{height, AlgebraicReal};
use crate::arith::primes::is_prime;
use crate::arith::rational::{fmt_rational, int, pow_cmp, to_f64};
use crate::arith::{iterated_log, valuation, BigReal, EvalContext, Place, Rational};
use crate::bounds::format::sci;
use crate::bounds::reduction::ridout_etuple;
use crate::bounds::Bounds;
use crate::error::{Error, Result};

/// f_inf and the exponents on S1 (conditions on x) and S2 (on y).
#[derive(Clone, Debug, Default)]
pub struct PlaceExponents {
    pub f_inf: Rational,
    pub s1: Vec<(BigUint, Rational)>,
    pub s2: Vec<(BigUint, Rational)>,
}

impl PlaceExponents {
    pub fn archimedean(f_inf: Rational) -> PlaceExponents {
        PlaceExponents { f_inf, ..Default::default() }
    }

    fn total(&self) -> Rational {
        self.s1.iter().chain(&self.s2).map(|(_, f)| f.clone()).sum::<Rational>() + &self.f_inf
    }

    fn validate(&self) -> Result<()> {
        if self.f_inf.is_negative() || self.s1.iter().chain(&self.s2).any(|(_, f)| f.is_negative()) {
            return Err(Error::invalid("all f_p must be >= 0"));
        }
        let mut seen = BTreeSet::new();
        for (p, _) in self.s1.iter().chain(&self.s2) {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::invalid(format!("prime {p} listed twice (S1 and S2 must be disjoint)")));
            }
        }
        Ok(())
    }

    /// Exact p-adic conditions for the pair.
    fn padic_ok(&self, x: i64, y: u64) -> Result<bool> {
        let yq = Rational::from_integer(y.into());
        for (set, v) in [(&self.s1, BigInt::from(x)), (&self.s2, BigInt::from(y))] {
            if v.is_zero() {
                continue;
            }
            for (p, f) in set.iter() {
                let k = valuation(&Rational::from_integer(v.clone()), p);
                let abs = Rational::new(BigInt::one(), BigInt::from(p.clone()).pow(k as u32));
                if pow_cmp(&abs, &Rational::one(), &yq, &-f.clone())? == Ordering::Greater {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Comparison of the reduced solutions with the continued-fraction
/// convergents of xi. Legendre's theorem makes x/y a convergent whenever
/// |xi - x/y| < 1/(2 y^2); those cases are checked for equality, the rest
/// only for the denominator.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConvergentCheck {
    pub convergent_denominators: Vec<u64>,
    pub checked: usize,
    pub denominator_misses: Vec<(i64, u64)>,
    pub legendre_cases: usize,
    pub legendre_misses: Vec<(i64, u64)>,
}

impl ConvergentCheck {
    pub fn passed(&self) -> bool {
        self.denominator_misses.is_empty() && self.legendre_misses.is_empty()
    }
}

fn convergent_check(
    xi: &Subject,
    y_max: u64,
    sols: &[(i64, u64)],
    legendre: impl Fn(u64) -> Result<bool>,
) -> Result<ConvergentCheck> {
    let conv = convergents(xi, &BigInt::from(y_max))?;
    let pairs: BTreeSet<(i64, u64)> = conv.iter().filter_map(|(p, q)| Some((p.to_i64()?, q.to_u64()?))).collect();
    let dens: BTreeSet<u64> = pairs.iter().map(|c| c.1).collect();
    let mut out = ConvergentCheck { convergent_denominators: dens.iter().copied().collect(), ..Default::default() };
    for &(x, y) in sols {
        let g = (x.unsigned_abs()).gcd(&y);
        let (rx, ry) = (x / g as i64, y / g);
        out.checked += 1;
        if !dens.contains(&ry) {
            out.denominator_misses.push((x, y));
        }
        if legendre(ry)? {
            out.legendre_cases += 1;
            if !pairs.contains(&(rx, ry)) {
                out.legendre_misses.push((x, y));
            }
        }
    }
    Ok(out)
}

const MAX_CANDIDATES: u64 = 100_000_000;

/// All pairs (x, y), 1 <= y <= y_max, with |y xi - x| <= y^(1 - f_inf - e(y))
/// and the p-adic conditions. Window positions are prefiltered in f64 with
/// a safety margin; survivors are decided with certified arithmetic.
/// Returns the solutions and the pairs that could not be decided.
fn scan(
    xi: &Subject,
    y_max: u64,
    exps: &PlaceExponents,
    extra: &dyn Fn(u64, u32) -> Result<BigReal>,
    extra_f64: &dyn Fn(u64) -> f64,
    coprime_only: bool,
    ctx: &EvalContext,
) -> Result<(Vec<(i64, u64)>, Vec<(i64, u64)>)> {
    let xf = xi.to_f64();
    let ff = to_f64(&exps.f_inf);
    let exact = xi.as_rational();
    let mut sols = Vec::new();
    let mut undecided = Vec::new();
    let mut budget = MAX_CANDIDATES;
    for y in 1..=y_max {
        let yf = y as f64;
        let rad = yf.powf(1.0 - ff - extra_f64(y));
        let center = yf * xf;
        let slack = 1e-9 * (1.0 + center.abs() + rad);
        let lo = (center - rad - slack).floor() as i64 - 1;
        let hi = (center + rad + slack).ceil() as i64 + 1;
        let n = (hi - lo + 1) as u64;
        if n > budget {
            return Err(Error::invalid(format!("more than {MAX_CANDIDATES} candidates; lower y_max or raise f_inf")));
        }
        budget -= n;
        for x in lo..=hi {
            if (center - x as f64).abs() - slack > rad * (1.0 + 1e-9) {
                continue;
            }
            if coprime_only && x.unsigned_abs().gcd(&y) != 1 {
                continue;
            }
            if !exps.padic_ok(x, y)? {
                continue;
            }
            let lhs_exact = exact.as_ref().map(|q| (q * int(y as i64) - int(x)).abs());
            if lhs_exact.as_ref().map(|l| l.is_zero()).unwrap_or(false) {
                sols.push((x, y));
                continue;
            }
            let decided = ctx.decide("archimedean condition", |w| {
                let ly = BigReal::from_int(y, w).ln()?;
                let rhs = BigReal::one(w).sub(&BigReal::from_rational(&exps.f_inf, w)).sub(&extra(y, w)?).mul(&ly);
                let lhs = match &lhs_exact {
                    Some(l) => BigReal::from_rational(l, w),
                    None => {
                        let bits = w + 2 * (64 - y.leading_zeros()) + 16;
                        let e = xi.enclosure(bits);
                        e.with_prec(bits).mul(&BigReal::from_int(y, bits)).sub(&BigReal::from_int(x, bits)).abs()
                    }
                };
                if !lhs.is_positive() {
                    return Ok(None);
                }
                let l = lhs.with_prec(w).ln()?;
                Ok(l.cmp_certified(&rhs).map(|o| o != Ordering::Greater))
            });
            match decided {
                Ok(true) => sols.push((x, y)),
                Ok(false) => {}
                Err(Error::PrecisionCap { .. }) => undecided.push((x, y)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok((sols, undecided))
}

#[derive(Clone, Debug, Serialize)]
pub struct RidoutSolution {
    pub x: i64,
    pub y: u64,
    pub above_threshold: bool,
    /// Index of the one-dimensional subspace among solutions above the
    /// threshold, in order of first appearance.
    pub group: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RidoutReport {
    pub eps: String,
    pub y_max: u64,
    /// max(2 H(xi), 2^(4/eps)).
    pub threshold: String,
    pub solutions: Vec<RidoutSolution>,
    pub group_count: usize,
    /// The subspace count bound for degree d and eps.
    pub bound: String,
    pub within_bound: bool,
    pub convergents: ConvergentCheck,
    pub undecided: Vec<(i64, u64)>,
}

impl RidoutReport {
    /// x,y,group_id for the solutions above the threshold.
    pub fn csv(&self) -> String {
        let mut s = String::from("x,y,group_id\n");
        for r in self.solutions.iter().filter(|r| r.above_threshold) {
            s.push_str(&format!("{},{},{}\n", r.x, r.y, r.group.unwrap_or(0)));
        }
        s
    }
}

/// Enumerates the Ridout system for 0 < y <= y_max, keeps the solutions
/// above the threshold and groups them by the line through the origin they
/// span. The count of groups is compared with the subspace bound.
pub fn ridout_solutions(xi: &AlgebraicReal, exps: &PlaceExponents, y_max: u64, ctx: &EvalContext) -> Result<RidoutReport> {
    exps.validate()?;
    let mut f = BTreeMap::new();
    f.insert(Place::Inf, exps.f_inf.clone());
    for (p, v) in exps.s1.iter().chain(&exps.s2) {
        f.insert(Place::P(p.clone()), v.clone());
    }
    let s1: Vec<BigUint> = exps.s1.iter().map(|x| x.0.clone()).collect();
    let s2: Vec<BigUint> = exps.s2.iter().map(|x| x.0.clone()).collect();
    let (_, eps) = ridout_etuple(&f, &s1, &s2)?;
    if y_max == 0 {
        return Err(Error::invalid("y_max must be positive"));
    }
    let subject = Subject::Algebraic(xi.clone());
    let zero = |_: u64, w: u32| Ok(BigReal::from_int(0, w));
    let (sols, undecided) = scan(&subject, y_max, exps, &zero, &|_| 0.0, false, ctx)?;

    let h = height(xi, ctx)?;
    let bounds = Bounds::new(ctx.clone());
    let threshold = bounds.ridout_threshold(&h, &eps)?;
    let two_h = h.mul(&BigReal::from_int(2, h.prec()));
    let pow_exp = int(4) / &eps;
    let above = |y: u64| -> Result<bool> {
        if pow_cmp(&int(y as i64), &Rational::one(), &int(2), &pow_exp)? != Ordering::Greater {
            return Ok(false);
        }
        match BigReal::from_int(y, two_h.prec()).cmp_certified(&two_h) {
            Some(o) => Ok(o == Ordering::Greater),
            None => ctx.decide("y against 2H", |w| {
                let hw = height(xi, &EvalContext { precision_bits: w, cap_bits: ctx.cap_bits })?;
                Ok(BigReal::from_int(y, w).cmp_certified(&hw.mul(&BigReal::from_int(2, w))).map(|o| o == Ordering::Greater))
            }),
        }
    };
    let mut groups: BTreeMap<(i64, u64), usize> = BTreeMap::new();
    let mut solutions = Vec::with_capacity(sols.len());
    let mut above_sols = Vec::new();
    for &(x, y) in &sols {
        let a = above(y)?;
        let group = if a {
            let g = x.unsigned_abs().gcd(&y);
            let dir = (x / g as i64, y / g);
            let next = groups.len();
            above_sols.push((x, y));
            Some(*groups.entry(dir).or_insert(next))
        } else {
            None
        };
        solutions.push(RidoutSolution { x, y, above_threshold: a, group });
    }
    let bound = bounds.ridout_subspace_count(xi.degree() as u64, &eps)?;
    let group_count = groups.len();
    let within_bound = BigReal::from_int(group_count as u64, bound.prec()).certainly_le(&bound);
    // Legendre applies once y^(f_inf - 2) > 2
    let fd = &exps.f_inf - int(2);
    let legendre = |y: u64| -> Result<bool> {
        Ok(fd.is_positive() && pow_cmp(&int(y as i64), &fd, &int(2), &Rational::one())? == Ordering::Greater)
    };
    let convergents = convergent_check(&subject, y_max, &above_sols, legendre)?;
    Ok(RidoutReport {
        eps: fmt_rational(&eps),
        y_max,
        threshold: sci(&threshold, 12),
        solutions,
        group_count,
        bound: sci(&bound, 12),
        within_bound,
        convergents,
        undecided,
    })
}

/// log_m(y) in f64, clamped to 1 below exp_m(1).
fn log_m_f64(m: u32, y: f64) -> f64 {
    let mut v = y;
    for _ in 0..m {
        if v <= 1.0 {
            return 1.0;
        }
        v = v.max(1.0).ln();
    }
    v.max(1.0)
}

fn eps_f64(m: u32, c: f64, y: u64) -> f64 {
    c * log_m_f64(m + 1, y as f64).powf(-1.0 / 3.0) * log_m_f64(m + 2, y as f64)
}

/// eps(y) = c (log_{m+1} y)^(-1/3) log_{m+2} y.
pub fn cugiani_eps(m: u32, c: &Rational, y: u64, w: u32) -> Result<BigReal> {
    let yr = BigReal::from_int(y, w);
    let a = iterated_log(m + 1, &yr)?.root(3)?.recip()?;
    let b = iterated_log(m + 2, &yr)?;
    Ok(BigReal::from_rational(c, w).mul(&a).mul(&b))
}

#[derive(Clone, Debug, Serialize)]
pub struct CugianiReport {
    pub m: u32,
    pub c: String,
    pub y_max: u64,
    /// Reduced solutions ordered by y.
    pub solutions: Vec<(i64, u64)>,
    /// log_m y_{j+1} / log_m y_j for consecutive solutions.
    pub ratios: Vec<f64>,
    pub max_ratio: Option<f64>,
    pub convergents: ConvergentCheck,
    pub undecided: Vec<(i64, u64)>,
}

/// Reduced solutions of the Cugiani system with sum f_p = 2 and the growth
/// ratios of log_m of consecutive denominators.
pub fn cugiani_scan(xi: &Subject, exps: &PlaceExponents, m: u32, c: &Rational, y_max: u64, ctx: &EvalContext) -> Result<CugianiReport> {
    exps.validate()?;
    if exps.total() != int(2) {
        return Err(Error::invalid(format!("the f_p must sum to 2, got {}", fmt_rational(&exps.total()))));
    }
    if m == 0 || !c.is_positive() || y_max == 0 {
        return Err(Error::invalid("need m >= 1, c > 0 and y_max >= 1"));
    }
    let cf = to_f64(c);
    let extra = |y: u64, w: u32| cugiani_eps(m, c, y, w);
    let (mut sols, undecided) = scan(xi, y_max, exps, &extra, &|y| eps_f64(m, cf, y), true, ctx)?;
    sols.sort_by_key(|&(x, y)| (y, x));
    let ratios: Vec<f64> = sols.windows(2).map(|w| log_m_f64(m, w[1].1 as f64) / log_m_f64(m, w[0].1 as f64)).collect();
    let max_ratio = ratios.iter().copied().fold(None, |a: Option<f64>, r| Some(a.map_or(r, |a| a.max(r))));
    let f_inf = exps.f_inf.clone();
    let legendre = |y: u64| -> Result<bool> {
        // y^(f_inf + eps(y) - 2) > 2 at working precision; undecided counts as no
        let w = ctx.precision_bits;
        let e = BigReal::from_rational(&(&f_inf - int(2)), w).add(&cugiani_eps(m, c, y, w)?);
        let lhs = e.mul(&BigReal::from_int(y, w).ln()?);
        Ok(lhs.cmp_certified(&BigReal::ln2(w)) == Some(Ordering::Greater))
    };
    let convergents = convergent_check(xi, y_max, &sols, legendre)?;
    Ok(CugianiReport { m, c: fmt_rational(c), y_max, solutions: sols, ratios, max_ratio, convergents, undecided })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn sqrt2() -> AlgebraicReal {
        AlgebraicReal::parse("[-2,0,1] 1 2").unwrap()
    }

    #[test]
    fn proportional_pairs_share_a_group() {
        // xi = 1/2 with f_inf = 3: every multiple (k, 2k) is a solution
        let xi = AlgebraicReal::from_rational(&rat(1, 2));
        let rep = ridout_solutions(&xi, &PlaceExponents::archimedean(int(3)), 600, &EvalContext::default()).unwrap();
        let ab: Vec<_> = rep.solutions.iter().filter(|s| s.above_threshold).collect();
        assert!(ab.iter().any(|s| (s.x, s.y) == (300, 600)));
        assert!(ab.iter().all(|s| s.group == Some(0)));
        assert_eq!(rep.group_count, 1);
    }

    #[test]
    fn sqrt2_small_scan() {
        let rep = ridout_solutions(&sqrt2(), &PlaceExponents::archimedean(rat(5, 2)), 2000, &EvalContext::default()).unwrap();
        // below the threshold 256 the solutions are (1,1), (2,1), (3,2), (7,5) and multiples of none
        let pairs: Vec<_> = rep.solutions.iter().map(|s| (s.x, s.y)).collect();
        assert!(pairs.contains(&(1, 1)) && pairs.contains(&(3, 2)) && pairs.contains(&(7, 5)));
        assert!(rep.within_bound);
        assert!(rep.undecided.is_empty());
    }

    #[test]
    fn large_f_has_no_solutions_above_threshold() {
        let rep = ridout_solutions(&sqrt2(), &PlaceExponents::archimedean(int(10)), 3000, &EvalContext::default()).unwrap();
        assert_eq!(rep.group_count, 0);
    }

    #[test]
    fn cugiani_sqrt2_denominators_are_convergents() {
        let rep = cugiani_scan(&Subject::Algebraic(sqrt2()), &PlaceExponents::archimedean(int(2)), 1, &int(1), 20000, &EvalContext::default())
            .unwrap();
        assert!(!rep.solutions.is_empty());
        assert!(rep.convergents.passed(), "{:?}", rep.convergents);
    }

    #[test]
    fn cugiani_rejects_bad_sum() {
        assert!(cugiani_scan(&Subject::Algebraic(sqrt2()), &PlaceExponents::archimedean(int(3)), 1, &int(1), 10, &EvalContext::default()).is_err());
    }

    #[test]
    fn padic_conditions() {
        let e = PlaceExponents { f_inf: int(1), s1: vec![(BigUint::from(2u32), int(1))], s2: vec![] };
        // |8|_2 = 1/8 <= 4^-1
        assert!(e.padic_ok(8, 4).unwrap());
        // |6|_2 = 1/2 > 1/4
        assert!(!e.padic_ok(6, 4).unwrap());
    }
}
