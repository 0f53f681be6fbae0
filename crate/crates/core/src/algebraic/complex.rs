//! Certified inclusion discs for all complex roots of a squarefree integer
//! polynomial. Approximations come from Durand-Kerner iteration; each disc
//! has radius deg·|f(z_i)| / (|a_d| ∏_{j≠i} |z_i - z_j|), and pairwise disjoint
//! discs of this kind contain exactly one root each.

use num_traits::ToPrimitive;

use super::poly::Poly;
use crate::arith::{BigReal, Dyadic, Round};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RootDisc {
    pub re: Dyadic,
    pub im: Dyadic,
    /// Upper bound for the distance from (re, im) to the root.
    pub radius: Dyadic,
}

#[derive(Clone, Debug)]
struct C {
    re: Dyadic,
    im: Dyadic,
}

impl C {
    fn zero() -> C {
        C { re: Dyadic::zero(), im: Dyadic::zero() }
    }
    fn add(&self, o: &C) -> C {
        C { re: self.re.add_exact(&o.re), im: self.im.add_exact(&o.im) }
    }
    fn sub(&self, o: &C) -> C {
        C { re: self.re.add_exact(&o.re.neg()), im: self.im.add_exact(&o.im.neg()) }
    }
    fn mul(&self, o: &C) -> C {
        C {
            re: self.re.mul(&o.re).add_exact(&self.im.mul(&o.im).neg()),
            im: self.re.mul(&o.im).add_exact(&self.im.mul(&o.re)),
        }
    }
    fn round(&self, w: i64) -> C {
        C { re: self.re.round_at(-w, Round::Down), im: self.im.round_at(-w, Round::Down) }
    }
    fn norm2(&self) -> Dyadic {
        self.re.mul(&self.re).add_exact(&self.im.mul(&self.im))
    }
    /// Approximate quotient, rounded to about `bits` significant bits.
    fn div_approx(&self, o: &C, bits: u32) -> C {
        let n2 = o.norm2();
        let num = self.mul(&C { re: o.re.clone(), im: o.im.neg() });
        C { re: num.re.div(&n2, bits, Round::Down), im: num.im.div(&n2, bits, Round::Down) }
    }
}

fn eval(f: &Poly, z: &C) -> C {
    let mut acc = C::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&C { re: Dyadic::from_int(c.clone()), im: Dyadic::zero() });
    }
    acc
}

fn f64_durand_kerner(f: &Poly) -> Option<Vec<(f64, f64)>> {
    let n = f.degree();
    let lead = f.lead().to_f64()?;
    let cs: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().map(|v| v / lead)).collect::<Option<_>>()?;
    if cs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let bound = 1.0 + cs[..n].iter().fold(0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<(f64, f64)> = Vec::with_capacity(n);
    let (mut pr, mut pi) = (1.0f64, 0.0f64);
    for _ in 0..n {
        z.push((pr * bound * 0.9, pi * bound * 0.9));
        // multiply by 0.4 + 0.9i (normalised)
        let (a, b) = (0.4 / 0.98488578f64, 0.9 / 0.98488578f64);
        let t = pr * a - pi * b;
        pi = pr * b + pi * a;
        pr = t;
    }
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    for _ in 0..2000 {
        let mut delta = 0f64;
        for i in 0..n {
            let mut p = (1.0f64, 0.0f64);
            for k in (0..n).rev() {
                p = cmul(p, z[i]);
                p.0 += cs[k];
            }
            let mut d = (1.0f64, 0.0f64);
            for j in 0..n {
                if j != i {
                    d = cmul(d, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let nd = d.0 * d.0 + d.1 * d.1;
            if nd == 0.0 || !nd.is_finite() {
                return None;
            }
            let q = ((p.0 * d.0 + p.1 * d.1) / nd, (p.1 * d.0 - p.0 * d.1) / nd);
            z[i] = (z[i].0 - q.0, z[i].1 - q.1);
            delta = delta.max(q.0.abs().max(q.1.abs()));
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    if z.iter().all(|c| c.0.is_finite() && c.1.is_finite()) {
        Some(z)
    } else {
        None
    }
}

/// One Durand-Kerner sweep at working precision w (bits after the point).
fn dk_sweep(f: &Poly, z: &mut [C], w: i64) -> Dyadic {
    let n = z.len();
    let lead = C { re: Dyadic::from_int(f.lead().clone()), im: Dyadic::zero() };
    let mut delta = Dyadic::zero();
    for i in 0..n {
        let p = eval(f, &z[i]);
        let mut d = lead.clone();
        for j in 0..n {
            if j != i {
                d = d.mul(&z[i].sub(&z[j])).round(w + 8);
            }
        }
        if d.norm2().is_zero() {
            continue;
        }
        let q = p.div_approx(&d, (w + 16).max(64) as u32);
        let m = q.re.abs().max(q.im.abs());
        if m > delta {
            delta = m;
        }
        z[i] = z[i].sub(&q).round(w);
    }
    delta
}

fn certify(f: &Poly, z: &[C], prec: u32) -> Result<Option<Vec<RootDisc>>> {
    let n = z.len();
    let lead = BigReal::from_int(f.lead().clone(), prec).abs();
    let deg = BigReal::from_int(n as i64, prec);
    let dist = |a: &C, b: &C| -> Result<BigReal> { BigReal::exact(a.sub(b).norm2(), prec).sqrt() };
    let mut dists = vec![vec![BigReal::from_int(0, prec); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dist(&z[i], &z[j])?;
            dists[i][j] = d.clone();
            dists[j][i] = d;
        }
    }
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let fz = BigReal::exact(eval(f, &z[i]).norm2(), prec).sqrt()?;
        let mut den = lead.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&dists[i][j]);
            }
        }
        let r = match deg.mul(&fz).div(&den) {
            Ok(r) => r,
            Err(Error::Certification(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        radii.push(r.hi().clone());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let sum = BigReal::exact(radii[i].add_exact(&radii[j]), prec);
            if !sum.certainly_lt(&dists[i][j]) {
                return Ok(None);
            }
        }
    }
    Ok(Some(
        z.iter()
            .zip(radii)
            .map(|(c, r)| RootDisc { re: c.re.clone(), im: c.im.clone(), radius: r })
            .collect(),
    ))
}

/// Disjoint discs of radius <= 2^-bits (relative to max(1, |root|) scale)
/// around every complex root of a squarefree polynomial.
pub fn root_discs(f: &Poly, bits: u32) -> Result<Vec<RootDisc>> {
    let n = f.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut z: Vec<C> = match f64_durand_kerner(f) {
        Some(v) => v.into_iter().map(|(a, b)| C { re: Dyadic::from_f64(a), im: Dyadic::from_f64(b) }).collect(),
        None => {
            // spread starting points on a circle of the Cauchy radius
            let b = super::poly::cauchy_bound(f);
            let r = crate::arith::rational::to_f64(&b).min(1e300);
            (0..n)
                .map(|k| {
                    let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    C { re: Dyadic::from_f64(r * t.cos()), im: Dyadic::from_f64(r * t.sin()) }
                })
                .collect()
        }
    };
    let target = Dyadic::pow2(-(bits as i64));
    let mut w: i64 = 48;
    let mut stall = 0;
    loop {
        let delta = dk_sweep(f, &mut z, w);
        if delta < Dyadic::pow2(-(w / 2).max(8)) && w < bits as i64 + 40 {
            w = (2 * w).min(bits as i64 + 40);
            continue;
        }
        if delta < Dyadic::pow2(-(w - 16)) || stall > 400 {
            if let Some(discs) = certify(f, &z, (w + 32) as u32)? {
                if discs.iter().all(|d| d.radius <= target) {
                    return Ok(discs);
                }
            }
            if w > bits as i64 + 2000 + 64 * n as i64 {
                return Err(Error::cert(format!("could not separate the roots of {f}")));
            }
            w = w * 2;
            stall = 0;
        }
        stall += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discs_for_small_polys() {
        for cs in [vec![-2i64, 0, 1], vec![-1, -1, 1], vec![1, 0, 1], vec![-1, -1, 0, 1], vec![1, 1, 1, 1, 1]] {
            let f = Poly::from_i64(&cs);
            let d = root_discs(&f, 80).unwrap();
            assert_eq!(d.len(), f.degree());
            for disc in &d {
                assert!(disc.radius <= Dyadic::pow2(-80));
            }
        }
    }

    #[test]
    fn sqrt2_roots_located() {
        let d = root_discs(&Poly::from_i64(&[-2, 0, 1]), 60).unwrap();
        let mut re: Vec<f64> = d.iter().map(|x| x.re.to_f64()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 2f64.sqrt()).abs() < 1e-15 && (re[1] - 2f64.sqrt()).abs() < 1e-15);
    }
}
