//! Heights: the absolute height of a real algebraic number via its Mahler
//! measure, the inhomogeneous height of a rational linear form, and the
//! Euclidean height of a rational vector.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::complex::root_discs;
use super::poly::Poly;
use super::real_root::AlgebraicReal;
use crate::arith::padic::places_of;
use crate::arith::{BigReal, EvalContext, Rational};
use crate::error::{Error, Result};

/// A linear form with rational coefficients, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalLinearForm {
    #[serde(serialize_with = "ser_rats")]
    coeffs: Vec<Rational>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&crate::arith::rational::fmt_rational(q))?;
    }
    seq.end()
}

impl RationalLinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Result<RationalLinearForm> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::invalid("linear form must have a nonzero coefficient"));
        }
        Ok(RationalLinearForm { coeffs })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// M(f) = |a_d| ∏ max(1, |root|) over all complex roots.
pub fn mahler_measure(f: &Poly, ctx: &EvalContext) -> Result<BigReal> {
    if f.degree() == 0 {
        return Err(Error::invalid("Mahler measure of a constant"));
    }
    if f.degree() == 1 {
        let c = f.coeffs();
        let m = c[0].abs().max(c[1].abs());
        return Ok(BigReal::from_int(m, ctx.precision_bits));
    }
    ctx.eval("Mahler measure", |w| {
        let discs = root_discs(f, w + 8)?;
        let one = BigReal::one(w);
        let mut m = BigReal::from_int(f.lead().abs(), w);
        for d in discs {
            let r = BigReal::exact(d.re.mul(&d.re).add_exact(&d.im.mul(&d.im)), w).sqrt()?;
            let widened = BigReal::from_bounds(
                r.lo().sub(&d.radius, w, crate::arith::Round::Down),
                r.hi().add(&d.radius, w, crate::arith::Round::Up),
                w,
            );
            m = m.mul(&widened.max(&one));
        }
        Ok(m)
    })
}

/// M(f) as a rational when it is one for a structural reason: all roots
/// outside the unit circle give |a_0|, all inside give |a_d|. None when
/// the roots straddle the circle or cannot be separated from it.
pub fn mahler_measure_exact(f: &Poly) -> Result<Option<Rational>> {
    let c = f.coeffs();
    if f.degree() == 0 {
        return Err(Error::invalid("Mahler measure of a constant"));
    }
    let mut bits = 64;
    while bits <= 1024 {
        let discs = root_discs(f, bits)?;
        let (mut outside, mut inside) = (0, 0);
        for d in &discs {
            let r2 = BigReal::exact(d.re.mul(&d.re).add_exact(&d.im.mul(&d.im)), bits).sqrt()?;
            let one = crate::arith::Dyadic::from_int(1);
            if r2.lo().sub(&d.radius, bits, crate::arith::Round::Down) > one {
                outside += 1;
            } else if r2.hi().add(&d.radius, bits, crate::arith::Round::Up) < one {
                inside += 1;
            }
        }
        if outside == discs.len() {
            return Ok(Some(Rational::from_integer(c[0].abs())));
        }
        if inside == discs.len() {
            return Ok(Some(Rational::from_integer(f.lead().abs())));
        }
        if outside + inside == discs.len() {
            return Ok(None);
        }
        bits *= 2;
    }
    Ok(None)
}

/// H(x) = M(f)^(1/d) for the minimal polynomial f of degree d. Minimal
/// polynomials of degree >= 2 with a rational root are rejected.
pub fn height(x: &AlgebraicReal, ctx: &EvalContext) -> Result<BigReal> {
    let d = x.degree();
    if d >= 2 {
        let rr = x.rational_roots();
        if !rr.is_empty() {
            return Err(Error::invalid(format!(
                "{} is reducible (rational root {})",
                x.poly(),
                crate::arith::rational::fmt_rational(&rr[0])
            )));
        }
    }
    if d == 1 {
        return mahler_measure(x.poly(), ctx);
    }
    ctx.eval("height", |w| {
        let inner = EvalContext { precision_bits: w, cap_bits: ctx.cap_bits };
        mahler_measure(x.poly(), &inner)?.root(d as u32)
    })
}

/// ∏_v max(1, ‖α_1‖_v, ..., ‖α_n‖_v) over all places, exactly.
pub fn inhom_height(l: &RationalLinearForm) -> Rational {
    let mut h = Rational::one();
    for v in places_of(l.coeffs()) {
        let m = l.coeffs().iter().map(|a| v.abs(a)).fold(Rational::one(), |m, x| if x > m { x } else { m });
        h *= m;
    }
    h
}

/// Exact square of H_2(x) = |x|_2 ∏_p max_i ‖x_i‖_p, evaluated place by place.
pub fn euclidean_height_sq(x: &[Rational]) -> Result<Rational> {
    if x.iter().all(|c| c.is_zero()) {
        return Err(Error::invalid("Euclidean height of the zero vector"));
    }
    let norm2: Rational = x.iter().map(|c| c * c).sum();
    let mut fin = Rational::one();
    for v in places_of(x).into_iter().skip(1) {
        let m = x.iter().map(|a| v.abs(a)).max().unwrap();
        fin *= m;
    }
    Ok(norm2 * &fin * &fin)
}

pub fn euclidean_height(x: &[Rational], ctx: &EvalContext) -> Result<BigReal> {
    let sq = euclidean_height_sq(x)?;
    ctx.eval("Euclidean height", |w| BigReal::from_rational(&sq, w).sqrt())
}

/// Primitive integer vector proportional to x (first nonzero entry positive
/// is not enforced).
pub fn primitive_integer_vector(x: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = x.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::eval_context;
    use crate::arith::rational::{int, rat};

    fn ctx() -> EvalContext {
        eval_context(100).unwrap()
    }

    #[test]
    fn exact_mahler_measure() {
        // roots -9 +- 9 sqrt 2 are both outside the unit circle
        assert_eq!(mahler_measure_exact(&Poly::from_i64(&[-81, 18, 1])).unwrap(), Some(int(81)));
        assert_eq!(mahler_measure_exact(&Poly::from_i64(&[1, 0, 0, 5])).unwrap(), Some(int(5)));
        assert_eq!(mahler_measure_exact(&Poly::from_i64(&[-1, 2, 1])).unwrap(), None);
    }

    #[test]
    fn height_examples() {
        let c = ctx();
        let x = AlgebraicReal::from_rational(&rat(3, 2));
        assert_eq!(height(&x, &c).unwrap().to_f64(), 3.0);
        // place by place: (3/2) * 2
        let places: Rational = places_of([&rat(3, 2)])
            .iter()
            .map(|v| {
                let a = v.abs(&rat(3, 2));
                if a > Rational::one() { a } else { Rational::one() }
            })
            .product();
        assert_eq!(places, int(3));
        let s2 = AlgebraicReal::parse("[-2,0,1] 1 2").unwrap();
        let h = height(&s2, &c).unwrap();
        assert!((h.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(h.rel_width_le(100));
        let phi = AlgebraicReal::parse("[-1,-1,1] 1 2").unwrap();
        let h = height(&phi, &c).unwrap();
        assert!((h.to_f64() - ((1.0 + 5f64.sqrt()) / 2.0).sqrt()).abs() < 1e-15);
        assert!((h.to_f64() - 1.272020).abs() < 1e-6);
    }

    #[test]
    fn reducible_rejected() {
        // (X - 1)(X^2 - 2) has the rational root 1
        let f = Poly::from_i64(&[2, -2, -1, 1]);
        let x = AlgebraicReal::new(f, rat(13, 10), int(2)).unwrap();
        assert!(height(&x, &ctx()).is_err());
    }

    #[test]
    fn inhom_examples() {
        let f = |v: Vec<Rational>| inhom_height(&RationalLinearForm::new(v).unwrap());
        assert_eq!(f(vec![int(1), int(1)]), int(1));
        assert_eq!(f(vec![int(1), rat(-3, 2)]), int(3));
        assert_eq!(f(vec![int(2)]), int(2));
        assert!(RationalLinearForm::new(vec![int(0), int(0)]).is_err());
    }

    #[test]
    fn euclidean_examples() {
        let c = ctx();
        assert_eq!(euclidean_height(&[int(3), int(4)], &c).unwrap().to_f64(), 5.0);
        assert_eq!(euclidean_height(&[int(1), int(0)], &c).unwrap().to_f64(), 1.0);
        let h = euclidean_height(&[int(1), int(1)], &c).unwrap();
        assert!((h.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        // projective invariance: (3/7, 4/7) has the same height as (3, 4)
        assert_eq!(euclidean_height_sq(&[rat(3, 7), rat(4, 7)]).unwrap(), int(25));
        assert_eq!(euclidean_height_sq(&[int(6), int(8)]).unwrap(), int(25));
        assert!(euclidean_height(&[int(0), int(0)], &c).is_err());
    }

    #[test]
    fn mahler_of_cubic() {
        // X^3 - X - 1: one real root (plastic number) > 1, complex pair inside the unit disc
        let m = mahler_measure(&Poly::from_i64(&[-1, -1, 0, 1]), &ctx()).unwrap();
        assert!((m.to_f64() - 1.324717957244746).abs() < 1e-14);
    }
}
