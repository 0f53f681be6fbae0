//! Continued-fraction convergents, certified from rational enclosures.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::subject::Subject;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Partial quotients of a rational, a_0 = floor(q).
pub fn cf_of_rational(q: &Rational) -> Vec<BigInt> {
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    let mut out = Vec::new();
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = r;
    }
    out
}

fn common_prefix(a: &[BigInt], b: &[BigInt]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Convergents p_k/q_k of x with q_k <= max_q. For irrational algebraic x
/// every returned quotient is shared by both ends of an enclosure, dropping
/// the last shared one, so all numbers in the enclosure agree on it. An
/// enclosure subject that is too wide yields fewer convergents.
pub fn convergents(x: &Subject, max_q: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    if let Some(q) = x.as_rational() {
        return Ok(from_quotients(&cf_of_rational(&q), max_q));
    }
    let mut bits = 64 + 4 * max_q.bits() as u32;
    loop {
        let (lo, hi) = match x {
            Subject::Algebraic(a) => {
                let (l, h) = a.refine(bits);
                (l.to_rational(), h.to_rational())
            }
            Subject::Enclosure { lo, hi } => (lo.clone(), hi.clone()),
        };
        let (ca, cb) = (cf_of_rational(&lo), cf_of_rational(&hi));
        let k = common_prefix(&ca, &cb).saturating_sub(1);
        let conv = from_quotients(&ca[..k], max_q);
        if conv.len() < k || matches!(x, Subject::Enclosure { .. }) {
            return Ok(conv);
        }
        if bits > 1 << 20 {
            return Err(Error::cert("continued fraction expansion does not separate; is x rational?"));
        }
        bits *= 2;
    }
}

fn from_quotients(a: &[BigInt], max_q: &BigInt) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (a.first().cloned().unwrap_or_default(), BigInt::one());
    let mut out = Vec::new();
    if a.is_empty() {
        return out;
    }
    out.push((p1.clone(), q1.clone()));
    for ai in &a[1..] {
        let p2 = ai * &p1 + &p0;
        let q2 = ai * &q1 + &q0;
        if &q2 > max_q {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        out.push((p1.clone(), q1.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::AlgebraicReal;
    use crate::arith::rational::rat;
    use crate::twisted::reduction_check::sqrt2_convergents;

    #[test]
    fn rational_quotients() {
        let v: Vec<i64> = cf_of_rational(&rat(415, 93)).iter().map(|a| a.try_into().unwrap()).collect();
        assert_eq!(v, vec![4, 2, 6, 7]);
        let v: Vec<i64> = cf_of_rational(&rat(-7, 3)).iter().map(|a| a.try_into().unwrap()).collect();
        assert_eq!(v, vec![-3, 1, 2]);
    }

    #[test]
    fn sqrt2_matches_recurrence() {
        let s = Subject::Algebraic(AlgebraicReal::parse("[-2,0,1] 1 2").unwrap());
        let c = convergents(&s, &BigInt::from(100_000)).unwrap();
        let oracle: Vec<_> = sqrt2_convergents(20).into_iter().filter(|(_, q)| q <= &BigInt::from(100_000)).collect();
        assert_eq!(c, oracle);
    }
}
