//! Periodic approximants U (VW)^oo of a repetition factorization, and the
//! sequence of repetitions whose t = r + s more than doubles each step.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::repetition::{best_repetitions_all, Factorization};
use super::subject::Subject;
use super::{digits_value, ser_int};
use crate::arith::rational::{fmt_rational, to_f64};
use crate::arith::{BigReal, EvalContext, Rational};
use crate::bounds::contradiction::eta_of_v;
use crate::digits::stream::DigitStream;
use crate::digits::DigitSource;
use crate::error::{Error, Result};
use crate::words::FiniteWord;

/// xi_ell = p / (b^r (b^s - 1)) with |x - xi_ell| <= b^-(r + s + |V|).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicApproximant {
    pub base: u32,
    pub ell: usize,
    pub r: usize,
    pub s: usize,
    pub v_len: usize,
    #[serde(serialize_with = "ser_int")]
    pub p: BigInt,
}

impl PeriodicApproximant {
    pub fn t(&self) -> usize {
        self.r + self.s
    }

    pub fn error_exponent(&self) -> usize {
        self.r + self.s + self.v_len
    }

    pub fn denominator(&self) -> BigInt {
        let b = BigInt::from(self.base);
        num_traits::pow(b.clone(), self.r) * (num_traits::pow(b, self.s) - 1)
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.denominator())
    }
}

/// Builds the approximant of a repetition of `prefix` and certifies the
/// error inequality against x exactly, together with b not dividing p
/// when r >= 1. Both are theorems, so a failure is reported as an error.
pub fn approximant_from_factorization(f: &Factorization, prefix: &FiniteWord, x: &Subject) -> Result<PeriodicApproximant> {
    if f.is_degenerate() {
        return Err(Error::invalid("degenerate factorization (|V| = 0) has no approximant"));
    }
    if f.ell > prefix.len() || f.s < f.v_len || f.r + f.s + f.v_len > f.ell {
        return Err(Error::invalid(format!("factorization {f:?} does not fit a prefix of length {}", prefix.len())));
    }
    let w = &prefix.symbols()[..f.ell];
    let (u, v, _, _) = f.parts(w);
    if v != &w[f.r + f.s..f.r + f.s + f.v_len] {
        return Err(Error::invalid(format!("factorization {f:?} is not a repetition of the prefix")));
    }
    let base = prefix.base();
    let b = BigInt::from(base);
    let p = digits_value(u, base) * (num_traits::pow(b.clone(), f.s) - 1) + digits_value(&w[f.r..f.r + f.s], base);
    let a = PeriodicApproximant { base, ell: f.ell, r: f.r, s: f.s, v_len: f.v_len, p };
    if a.r >= 1 && (&a.p % &b).is_zero() {
        return Err(Error::cert(format!("base {base} divides p = {} although r = {}", a.p, a.r)));
    }
    let e = Rational::new(BigInt::one(), num_traits::pow(b, a.error_exponent()));
    if !x.within(&a.value(), &e, false)? {
        return Err(Error::cert(format!(
            "|x - {}| > {base}^-{} for the repetition at ell = {}",
            fmt_rational(&a.value()),
            a.error_exponent(),
            a.ell
        )));
    }
    Ok(a)
}

#[derive(Clone, Debug)]
pub struct SequenceParams {
    pub v: Rational,
    /// Complexity exponent; defaults to v + eta(v).
    pub u: Option<Rational>,
    pub c3: Rational,
    pub count: usize,
    pub max_digits: usize,
}

impl SequenceParams {
    pub fn new(v: Rational, count: usize) -> SequenceParams {
        SequenceParams { v, u: None, c3: Rational::one(), count, max_digits: 1 << 13 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceTerm {
    pub k: usize,
    pub approximant: PeriodicApproximant,
    pub t: usize,
    /// |b^t x - b^r x - p| <= (b^t)^(-(log t)^(-v)); None if undecided.
    pub quality_holds: Option<bool>,
    /// How the quality inequality was decided: "repetition length" when
    /// |V| >= t (log t)^(-v) already implies it, "direct" otherwise.
    pub route: String,
    /// |V| (log ell)^u / ell, for calibrating c3.
    pub calibration: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepetitionSequence {
    pub base: u32,
    pub v: String,
    pub u: String,
    pub c3: String,
    pub terms: Vec<SequenceTerm>,
    /// Rational input reproduced exactly by an approximant; the sequence
    /// stops there.
    pub exact_fixed_point: bool,
    pub digits_used: usize,
    pub diagnostics: Vec<String>,
}

fn start_condition(t: usize, u: f64, v: f64, c3: f64) -> bool {
    if t < 2 {
        return false;
    }
    let lt = (t as f64).ln();
    c3 * lt.powf(u) >= lt.powf(v)
}

/// t (log t)^(-v) as an enclosure.
fn quality_exponent(t: usize, v: &Rational, w: u32) -> Result<BigReal> {
    let tr = BigReal::from_int(t as u64, w);
    let llt = tr.ln()?.ln()?;
    Ok(tr.mul(&llt.mul(&BigReal::from_rational(&-v.clone(), w)).exp()?))
}

/// Decides |b^t x - b^r x - p| <= (b^t)^(-(log t)^(-v)).
fn quality(a: &PeriodicApproximant, x: &Subject, v: &Rational, ctx: &EvalContext) -> Result<(bool, &'static str)> {
    let t = a.t();
    let by_len = ctx.decide("repetition length against t (log t)^-v", |w| {
        let q = quality_exponent(t, v, w)?;
        Ok(BigReal::from_int(a.v_len as u64, w).cmp_certified(&q))
    });
    if let Ok(o) = by_len {
        if o != std::cmp::Ordering::Less {
            return Ok((true, "repetition length"));
        }
    }
    let xi = a.value();
    if let Some(q) = x.as_rational() {
        if q == xi {
            return Ok((true, "direct"));
        }
    }
    let b = a.base;
    let lb = (b as f64).log2();
    let need = ((a.error_exponent() + 8) as f64 * lb).ceil() as u32;
    let scale = BigInt::from(b).pow(t as u32) - BigInt::from(b).pow(a.r as u32);
    let holds = ctx.decide("approximation quality of a repetition", |w| {
        let bits = need + w;
        let enc = x.enclosure(bits);
        let d = enc.with_prec(bits + 64).sub(&BigReal::from_rational(&xi, bits + 64));
        if d.contains(&crate::arith::Dyadic::zero()) {
            return Ok(None);
        }
        let lhs = d.abs().mul(&BigReal::from_int(scale.clone(), bits + 64)).with_prec(w + 32).ln()?;
        let rhs = quality_exponent(t, v, w + 32)?.mul(&BigReal::from_int(b, w + 32).ln()?).neg();
        Ok(lhs.cmp_certified(&rhs).map(|o| o != std::cmp::Ordering::Greater))
    })?;
    Ok((holds, "direct"))
}

/// The sequence ell_1 < ell_2 < ...: ell_1 is the least ell with t_ell >= 2
/// and c3 (log t)^u >= (log t)^v, then each next ell is the least with
/// t_ell > 2 t_prev. Every term's approximant is certified; the quality
/// inequality is decided and failures are listed, since it depends on the
/// complexity hypothesis through c3.
pub fn repetition_sequence(source: &DigitSource, base: u32, params: &SequenceParams, ctx: &EvalContext) -> Result<RepetitionSequence> {
    if !params.v.is_positive() {
        return Err(Error::invalid("v must be positive"));
    }
    if params.count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    if !params.c3.is_positive() {
        return Err(Error::invalid("c3 must be positive"));
    }
    let u = match &params.u {
        Some(u) => u.clone(),
        None => {
            let eta = ctx.eval("eta(v)", |w| eta_of_v(&params.v, w))?;
            // a rational just above v + eta keeps u > v exactly
            eta.hi().to_rational() + &params.v
        }
    };
    if u <= params.v {
        return Err(Error::invalid("need u > v"));
    }
    let (uf, vf, cf) = (to_f64(&u), to_f64(&params.v), to_f64(&params.c3));
    let mut stream = DigitStream::new(source.clone(), base, ctx.clone())?;
    let mut out = RepetitionSequence {
        base,
        v: fmt_rational(&params.v),
        u: fmt_rational(&u),
        c3: fmt_rational(&params.c3),
        terms: Vec::new(),
        exact_fixed_point: false,
        digits_used: 0,
        diagnostics: Vec::new(),
    };
    let mut len = 256.min(params.max_digits).max(2);
    let mut next_ell = 2;
    let mut t_prev: Option<usize> = None;
    loop {
        stream.ensure(len)?;
        let word = stream.word(len)?;
        let subject = Subject::for_source(source, base, len + 64, ctx)?;
        let exact = subject.as_rational();
        let table = best_repetitions_all(word.symbols());
        out.digits_used = len;
        for ell in next_ell..=len {
            let f = table[ell - 1];
            if f.is_degenerate() {
                continue;
            }
            let t = f.t();
            let take = match t_prev {
                None => start_condition(t, uf, vf, cf),
                Some(tp) => t > 2 * tp,
            };
            if !take {
                continue;
            }
            let a = approximant_from_factorization(&f, &word, &subject)?;
            let (holds, route) = match quality(&a, &subject, &params.v, ctx) {
                Ok((h, r)) => (Some(h), r),
                Err(Error::PrecisionCap { .. }) => (None, "undecided"),
                Err(e) => return Err(e),
            };
            let k = out.terms.len() + 1;
            match holds {
                Some(false) => out.diagnostics.push(format!(
                    "term {k} (ell = {ell}, t = {t}, |V| = {}): quality inequality fails; c3 = {} is too optimistic here",
                    a.v_len, out.c3
                )),
                None => out.diagnostics.push(format!("term {k} (ell = {ell}, t = {t}): quality inequality undecided at the precision cap")),
                Some(true) => {}
            }
            let lf = (ell as f64).ln();
            let calibration = a.v_len as f64 * lf.powf(uf) / ell as f64;
            let fixed = exact.as_ref() == Some(&a.value());
            out.terms.push(SequenceTerm { k, approximant: a, t, quality_holds: holds, route: route.to_string(), calibration });
            t_prev = Some(t);
            if fixed {
                out.exact_fixed_point = true;
                return Ok(out);
            }
            if out.terms.len() == params.count {
                return Ok(out);
            }
        }
        if len >= params.max_digits {
            out.diagnostics.push(format!(
                "digit budget of {len} digits exhausted after {} of {} terms",
                out.terms.len(),
                params.count
            ));
            return Ok(out);
        }
        next_ell = len + 1;
        len = (len * 2).min(params.max_digits);
    }
}

/// Approximants of every non-degenerate prefix A(ell), 2 <= ell <= |w|.
pub fn all_approximants(word: &FiniteWord, x: &Subject) -> Result<Vec<PeriodicApproximant>> {
    best_repetitions_all(word.symbols())
        .iter()
        .skip(1)
        .filter(|f| !f.is_degenerate())
        .map(|f| approximant_from_factorization(f, word, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::sqrt2_minus_1;
    use crate::approx::repetition::best_repetition;
    use crate::arith::rational::rat;
    use crate::digits::digits_of_algebraic;

    #[test]
    fn five_twenty_sixths_in_base_three() {
        let w = FiniteWord::new(vec![0, 1, 2, 0, 1, 2, 0], 3).unwrap();
        let f = best_repetition(w.symbols()).unwrap();
        let a = approximant_from_factorization(&f, &w, &Subject::rational(&rat(5, 26))).unwrap();
        assert_eq!(a.p, BigInt::from(5));
        assert_eq!(a.value(), rat(5, 26));
    }

    #[test]
    fn one_in_base_two() {
        let w = FiniteWord::new(vec![1, 1, 1], 2).unwrap();
        let f = best_repetition(w.symbols()).unwrap();
        let a = approximant_from_factorization(&f, &w, &Subject::rational(&rat(1, 1))).unwrap();
        assert_eq!(a.p, BigInt::from(1));
        assert_eq!(a.value(), rat(1, 1));
    }

    #[test]
    fn degenerate_is_rejected() {
        let w = FiniteWord::new(vec![0, 1], 2).unwrap();
        let f = best_repetition(w.symbols()).unwrap();
        assert!(approximant_from_factorization(&f, &w, &Subject::rational(&rat(1, 3))).is_err());
    }

    #[test]
    fn wrong_subject_fails_certification() {
        let w = FiniteWord::new(vec![0, 1, 0, 1, 0, 1], 2).unwrap();
        let f = best_repetition(w.symbols()).unwrap();
        let r = approximant_from_factorization(&f, &w, &Subject::rational(&rat(1, 2)));
        assert!(matches!(r, Err(Error::Certification(_))));
    }

    #[test]
    fn sqrt2_prefixes() {
        let x = sqrt2_minus_1();
        let w = digits_of_algebraic(&x, 2, 400).unwrap();
        let all = all_approximants(&w, &Subject::Algebraic(x)).unwrap();
        assert!(all.len() > 390);
    }

    #[test]
    fn sequence_doubles() {
        let src = DigitSource::Algebraic(sqrt2_minus_1());
        let seq = repetition_sequence(&src, 2, &SequenceParams::new(rat(1, 20), 5), &EvalContext::default()).unwrap();
        assert_eq!(seq.terms.len(), 5);
        for w in seq.terms.windows(2) {
            assert!(w[1].t > 2 * w[0].t);
        }
        for t in &seq.terms {
            assert!(t.approximant.r < t.t);
            assert!(t.quality_holds.is_some());
        }
    }

    #[test]
    fn rational_fixed_point() {
        let src = DigitSource::Algebraic(crate::algebraic::AlgebraicReal::from_rational(&rat(5, 26)));
        let seq = repetition_sequence(&src, 3, &SequenceParams::new(rat(1, 20), 5), &EvalContext::default()).unwrap();
        assert!(seq.exact_fixed_point);
        let last = seq.terms.last().unwrap();
        assert_eq!(last.approximant.value(), rat(5, 26));
        assert_eq!(last.quality_holds, Some(true));
    }
}
