//! Checks that a solution of a system |L_ip(x)|_p <= Psi(x)^(e_ip) above
//! the threshold Psi > max(2H, n^(2n/eps)) has twisted height at most
//! Q^(-delta) for Q = Psi^(1 + eps/n), and that Q clears the lower bound
//! max(script_H^(1/C(r,n)), n^(2/delta)).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::height::{twisted_height, QPower, TwistedValue};
use super::system::{ExponentTuple, LinearFormSystemQ};
use crate::algebraic::{inhom_height, RationalLinearForm};
use crate::arith::rational::{fmt_rational, int, pow_cmp};
use crate::arith::{Place, Rational};
use crate::bounds::reduction::reduction;
use crate::error::{Error, Result};

/// Forms on a finite set S of places (infinity included), exponents e_ip
/// with sum -eps, and a height bound H for the forms. Coefficients are
/// rational, so the degree bound D is 1.
#[derive(Clone, Debug)]
pub struct InequalitySystem {
    pub n: usize,
    pub forms: BTreeMap<Place, Vec<RationalLinearForm>>,
    pub e: ExponentTuple,
    pub eps: Rational,
    pub h: Rational,
}

impl InequalitySystem {
    fn places(&self) -> BTreeSet<Place> {
        let mut s: BTreeSet<Place> = self.forms.keys().cloned().collect();
        s.extend(self.e.values().keys().cloned());
        s.insert(Place::Inf);
        s
    }

    fn forms_at(&self, v: &Place) -> Vec<RationalLinearForm> {
        match self.forms.get(v) {
            Some(f) => f.clone(),
            None => (0..self.n)
                .map(|i| {
                    let mut c = vec![Rational::zero(); self.n];
                    c[i] = Rational::one();
                    RationalLinearForm::new(c).expect("unit vector")
                })
                .collect(),
        }
    }

    /// Number of distinct forms over the places of S.
    pub fn distinct_count(&self) -> usize {
        let mut seen: Vec<RationalLinearForm> = Vec::new();
        for v in self.places() {
            for f in self.forms_at(&v) {
                if !seen.contains(&f) {
                    seen.push(f);
                }
            }
        }
        seen.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionCheck {
    pub psi: String,
    pub q: String,
    pub delta: String,
    pub r: usize,
    pub script_h: String,
    /// Failed preconditions: system inequalities, height bound, threshold.
    pub precondition_failures: Vec<String>,
    pub height: Option<TwistedValue>,
    /// H_Q(x) <= Q^(-delta).
    pub small_height: Option<bool>,
    /// Q^C(r,n) >= script_H.
    pub q_above_script_h: Option<bool>,
    /// Q >= n^(2/delta).
    pub q_above_dimension_bound: Option<bool>,
}

fn binom(r: usize, n: usize) -> u64 {
    (0..n).fold(1u64, |acc, i| acc * (r - i) as u64 / (i + 1) as u64)
}

/// Verifies the preconditions exactly and, when they hold, the two
/// conclusions. psi is the value Psi(x) > 0.
pub fn reduction_check(sys: &InequalitySystem, x: &[BigInt], psi: &Rational) -> Result<ReductionCheck> {
    let n = sys.n;
    if x.len() != n || sys.e.n() != n {
        return Err(Error::invalid(format!("dimension mismatch: n = {n}")));
    }
    if !psi.is_positive() {
        return Err(Error::invalid("Psi(x) must be positive"));
    }
    let xr: Vec<Rational> = x.iter().map(|v| Rational::from_integer(v.clone())).collect();
    let nq = Rational::from_integer(n.into());
    let mut failures = Vec::new();
    for v in sys.places() {
        for (i, (form, e)) in sys.forms_at(&v).iter().zip(sys.e.at(&v)).enumerate() {
            if inhom_height(form) > sys.h {
                failures.push(format!("height of L_{}{v} exceeds H = {}", i + 1, fmt_rational(&sys.h)));
            }
            let val = v.abs(&form.eval(&xr));
            if !val.is_zero() && pow_cmp(&val, &Rational::one(), psi, &e)? == Ordering::Greater {
                failures.push(format!(
                    "inequality |L_{}{v}(x)| <= Psi^({}) fails: |L(x)| = {}",
                    i + 1,
                    fmt_rational(&e),
                    fmt_rational(&val)
                ));
            }
        }
    }
    let two_h = int(2) * &sys.h;
    if *psi <= two_h {
        failures.push(format!("threshold: Psi = {} is not above 2H = {}", fmt_rational(psi), fmt_rational(&two_h)));
    }
    let dim_exp = int(2) * &nq / &sys.eps;
    if pow_cmp(psi, &Rational::one(), &nq, &dim_exp)? != Ordering::Greater {
        failures.push(format!("threshold: Psi = {} is not above n^(2n/eps) = {n}^{}", fmt_rational(psi), fmt_rational(&dim_exp)));
    }
    let red = reduction(n, &sys.eps, &sys.e)?;
    let q_exp = Rational::one() + &sys.eps / &nq;
    let q = QPower::new(psi.clone(), q_exp.clone())?;
    let lsys = LinearFormSystemQ::new(n, sys.forms.clone(), None)?;
    let r = n + sys.distinct_count();
    let script_h = lsys.script_h();
    let mut out = ReductionCheck {
        psi: fmt_rational(psi),
        q: q.to_string(),
        delta: fmt_rational(&red.delta),
        r,
        script_h: fmt_rational(&script_h),
        precondition_failures: failures,
        height: None,
        small_height: None,
        q_above_script_h: None,
        q_above_dimension_bound: None,
    };
    if !out.precondition_failures.is_empty() {
        return Ok(out);
    }
    let h = twisted_height(&xr, &lsys, &red.c, &q)?;
    out.small_height = Some(h.le_q_pow(&-red.delta.clone())?);
    out.height = Some(h);
    let b = Rational::from_integer(binom(r, n).into());
    out.q_above_script_h = Some(pow_cmp(psi, &(&q_exp * b), &script_h, &Rational::one())? != Ordering::Less);
    out.q_above_dimension_bound = Some(pow_cmp(psi, &q_exp, &nq, &(int(2) / &red.delta))? != Ordering::Less);
    Ok(out)
}

/// Continued-fraction convergents p/q of sqrt 2: 1/1, 3/2, 7/5, ...
pub fn sqrt2_convergents(count: usize) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(count);
    let (mut p, mut q) = (BigInt::one(), BigInt::one());
    for _ in 0..count {
        out.push((p.clone(), q.clone()));
        let np = &p + BigInt::from(2) * &q;
        q += &p;
        p = np;
    }
    out
}

/// The Ridout-type system with xi replaced by the rational a/b:
/// L_1 = X_1 - (a/b) X_2, L_2 = X_2 at infinity, e = (1 - f, 1) with
/// f = 2 + eps and Psi(x) = |x_2|.
pub fn ridout_rational_system(a: &BigInt, b: &BigInt, eps: &Rational) -> Result<InequalitySystem> {
    let xi = Rational::new(a.clone(), b.clone());
    let l1 = RationalLinearForm::new(vec![Rational::one(), -xi.clone()])?;
    let l2 = RationalLinearForm::new(vec![Rational::zero(), Rational::one()])?;
    let mut forms = BTreeMap::new();
    forms.insert(Place::Inf, vec![l1, l2]);
    let mut e = BTreeMap::new();
    e.insert(Place::Inf, vec![-(Rational::one() + eps), Rational::one()]);
    let h = a.abs().max(b.abs());
    Ok(InequalitySystem { n: 2, forms, e: ExponentTuple::unchecked(2, e)?, eps: eps.clone(), h: Rational::from_integer(h) })
}
