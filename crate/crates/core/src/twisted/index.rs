//! Multihomogeneous polynomials in blocks (X_h1, X_h2), their index at a
//! tuple of points, and the hypothesis/conclusion check of Roth's lemma.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebraic::heights::primitive_integer_vector;
use crate::arith::rational::{fmt_rational, parse_rational, pow_i, rat};
use crate::arith::{BigReal, EvalContext, Rational};
use crate::error::{Error, Result};

/// Exponent vectors are laid out as (i_11, i_12, i_21, i_22, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiHomPolynomial {
    degrees: Vec<u32>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiHomPolynomial {
    pub fn new(degrees: Vec<u32>, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::invalid("need at least one block"));
        }
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != 2 * degrees.len() {
                return Err(Error::invalid(format!("exponent vector {e:?} does not have {} entries", 2 * degrees.len())));
            }
            if let Some(h) = (0..degrees.len()).find(|&h| e[2 * h] + e[2 * h + 1] != degrees[h]) {
                return Err(Error::invalid(format!("monomial {e:?} is not of degree {} in block {}", degrees[h], h + 1)));
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiHomPolynomial { degrees, terms: map })
    }

    /// `{"r": [1, 1], "terms": [["1", [1,0,0,1]], ["-1", [0,1,1,0]]]}`
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::invalid(format!("polynomial json: {e}")))?;
        let deg = v["r"].as_array().ok_or_else(|| Error::invalid("polynomial json needs `r`"))?;
        let degrees: Vec<u32> = deg
            .iter()
            .map(|d| d.as_u64().and_then(|d| u32::try_from(d).ok()).ok_or_else(|| Error::invalid("bad degree")))
            .collect::<Result<_>>()?;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| Error::invalid("polynomial json needs `terms`"))? {
            let c = match &t[0] {
                serde_json::Value::String(s) => parse_rational(s)?,
                serde_json::Value::Number(n) => parse_rational(&n.to_string())?,
                _ => return Err(Error::invalid("bad coefficient")),
            };
            let e = t[1]
                .as_array()
                .ok_or_else(|| Error::invalid("bad exponent vector"))?
                .iter()
                .map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| Error::invalid("bad exponent")))
                .collect::<Result<Vec<u32>>>()?;
            terms.push((e, c));
        }
        MultiHomPolynomial::new(degrees, terms)
    }

    /// X_11 X_22 - X_12 X_21.
    pub fn determinant() -> Self {
        MultiHomPolynomial::new(vec![1, 1], [(vec![1, 0, 0, 1], Rational::one()), (vec![0, 1, 1, 0], -Rational::one())])
            .expect("valid")
    }

    pub fn m(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, o: &MultiHomPolynomial) -> Result<MultiHomPolynomial> {
        if self.m() != o.m() {
            return Err(Error::invalid("block counts differ"));
        }
        let degrees = self.degrees.iter().zip(&o.degrees).map(|(a, b)| a + b).collect();
        let mut terms = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                terms.push((e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2));
            }
        }
        MultiHomPolynomial::new(degrees, terms)
    }

    pub fn eval(&self, points: &[(Rational, Rational)]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for (h, (x1, x2)) in points.iter().enumerate() {
                    t *= pow_i(x1, e[2 * h] as i64) * pow_i(x2, e[2 * h + 1] as i64);
                }
                t
            })
            .sum()
    }

    /// Partial derivative in one variable, symbolically. The result is
    /// multihomogeneous of degree r_h - 1 in the affected block.
    pub fn derivative(&self, var: usize) -> MultiHomPolynomial {
        let mut degrees = self.degrees.clone();
        let h = var / 2;
        let mut terms = BTreeMap::new();
        if degrees[h] == 0 {
            return MultiHomPolynomial { degrees, terms };
        }
        degrees[h] -= 1;
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                terms.insert(e2, c * Rational::from_integer(e[var].into()));
            }
        }
        MultiHomPolynomial { degrees, terms }
    }

    /// Coefficients scaled to a primitive integer vector.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        let cs: Vec<Rational> = self.terms.values().cloned().collect();
        primitive_integer_vector(&cs)
    }
}

fn falling(e: u32, i: u32) -> BigInt {
    (0..i).fold(BigInt::one(), |acc, k| acc * BigInt::from(e - k))
}

fn check_points(p: &MultiHomPolynomial, r: &[u32], points: &[(Rational, Rational)]) -> Result<()> {
    if p.is_zero() {
        return Err(Error::invalid("the index of the zero polynomial is infinite"));
    }
    if r.len() != p.m() || points.len() != p.m() {
        return Err(Error::invalid(format!("need {} weights and {} points", p.m(), p.m())));
    }
    if r.contains(&0) {
        return Err(Error::invalid("weights r_h must be positive"));
    }
    if points.iter().any(|(a, b)| a.is_zero() && b.is_zero()) {
        return Err(Error::invalid("points must be nonzero"));
    }
    Ok(())
}

/// Value at the points of prod (d/dX_hk)^(i_hk) P, from the closed form of
/// monomial derivatives.
fn derivative_value(p: &MultiHomPolynomial, i: &[u32], points: &[(Rational, Rational)]) -> Rational {
    let mut total = Rational::zero();
    'terms: for (e, c) in &p.terms {
        let mut t = c.clone();
        for h in 0..p.m() {
            for k in 0..2 {
                let (ek, ik) = (e[2 * h + k], i[2 * h + k]);
                if ek < ik {
                    continue 'terms;
                }
                let x = if k == 0 { &points[h].0 } else { &points[h].1 };
                t *= Rational::from_integer(falling(ek, ik)) * pow_i(x, (ek - ik) as i64);
            }
        }
        total += t;
    }
    total
}

fn sigma(t: &[u32], r: &[u32]) -> Rational {
    t.iter().zip(r).map(|(&a, &b)| rat(a as i64, b as i64)).sum()
}

fn tuples(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out.into_iter().flat_map(|t| (0..=b).map(move |k| [t.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Ind(P; r; x_1, ..., x_m): derivative orders per block are visited in
/// increasing sigma = sum_h (i_h1 + i_h2)/r_h and the first nonvanishing
/// derivative ends the search.
pub fn index(p: &MultiHomPolynomial, r: &[u32], points: &[(Rational, Rational)]) -> Result<Rational> {
    check_points(p, r, points)?;
    let mut orders: Vec<(Rational, Vec<u32>)> =
        tuples(p.degrees()).into_iter().map(|t| (sigma(&t, r), t)).collect();
    orders.sort();
    for (s, t) in orders {
        // every split of t_h between the two variables of block h
        for split in tuples(&t) {
            let i: Vec<u32> = split.iter().zip(&t).flat_map(|(&a, &th)| [a, th - a]).collect();
            if !derivative_value(p, &i, points).is_zero() {
                return Ok(s);
            }
        }
    }
    unreachable!("a nonzero polynomial has a nonvanishing derivative")
}

/// Reference index: differentiates symbolically along every exponent tuple
/// and keeps the smallest weight with a nonzero value.
pub fn index_brute(p: &MultiHomPolynomial, r: &[u32], points: &[(Rational, Rational)]) -> Result<Rational> {
    check_points(p, r, points)?;
    let bounds: Vec<u32> = p.degrees().iter().flat_map(|&d| [d, d]).collect();
    let mut best: Option<Rational> = None;
    for i in tuples(&bounds) {
        let mut d = p.clone();
        for (var, &k) in i.iter().enumerate() {
            for _ in 0..k {
                d = d.derivative(var);
            }
        }
        if d.is_zero() || d.eval(points).is_zero() {
            continue;
        }
        let t: Vec<u32> = (0..p.m()).map(|h| i[2 * h] + i[2 * h + 1]).collect();
        let s = sigma(&t, r);
        if best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
    }
    best.ok_or_else(|| Error::invalid("no nonvanishing derivative found"))
}

/// A random polynomial with m blocks and degrees at most rmax, with small
/// integer coefficients, possibly zero.
pub fn random_polynomial<R: Rng>(rng: &mut R, m: usize, rmax: u32) -> MultiHomPolynomial {
    let degrees: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=rmax)).collect();
    let nterms = rng.gen_range(1..=4);
    let terms: Vec<(Vec<u32>, Rational)> = (0..nterms)
        .map(|_| {
            let e = degrees.iter().flat_map(|&d| {
                let a = rng.gen_range(0..=d);
                [a, d - a]
            });
            (e.collect(), Rational::from_integer(rng.gen_range(-3..=3).into()))
        })
        .collect();
    MultiHomPolynomial::new(degrees, terms).expect("random monomials are multihomogeneous")
}

/// Random small points, for index tests; coordinates in -2..=2 so that
/// vanishing happens often.
pub fn random_points<R: Rng>(rng: &mut R, m: usize) -> Vec<(Rational, Rational)> {
    (0..m)
        .map(|_| loop {
            let (a, b) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            if a != 0 || b != 0 {
                break (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RothReport {
    pub m: usize,
    pub theta: String,
    pub r: Vec<u32>,
    /// r_h / r_(h+1) >= 2 m^2 / theta for each consecutive pair.
    pub degree_ratio_ok: Vec<bool>,
    /// r_h log H_2(x_h) - (3m^2/theta)^m (q + log H_2(P)), approximately.
    pub height_margin: Vec<f64>,
    pub height_ok: Vec<bool>,
    pub hypotheses_hold: bool,
    pub index: Option<String>,
    pub bound: String,
    /// index < m theta, evaluated only when both hypotheses hold.
    pub conclusion_holds: Option<bool>,
    pub messages: Vec<String>,
}

fn ln_sum_sq(v: &[BigInt], prec: u32) -> Result<BigReal> {
    let s: BigInt = v.iter().map(|c| c * c).sum();
    BigReal::from_int(s, prec).ln()
}

/// Checks the degree-ratio and height hypotheses of Roth's lemma for P,
/// r and the points, and when they hold computes the index and tests
/// Ind < m theta.
pub fn roth_lemma_check(
    p: &MultiHomPolynomial,
    r: &[u32],
    points: &[(Rational, Rational)],
    theta: &Rational,
    ctx: &EvalContext,
) -> Result<RothReport> {
    check_points(p, r, points)?;
    let m = p.m();
    if m < 2 {
        return Err(Error::invalid("Roth's lemma needs m >= 2"));
    }
    if !theta.is_positive() || *theta > Rational::one() {
        return Err(Error::invalid("need 0 < theta <= 1"));
    }
    let mm = Rational::from_integer(BigInt::from(m * m));
    let ratio_needed = Rational::from_integer(2.into()) * &mm / theta;
    let degree_ratio_ok: Vec<bool> =
        (0..m - 1).map(|h| rat(r[h] as i64, r[h + 1] as i64) >= ratio_needed).collect();
    let power = pow_i(&(Rational::from_integer(3.into()) * &mm / theta), m as i64);
    let q: u64 = r.iter().map(|&x| x as u64).sum();
    let pc = p.integer_coefficients();
    let pts: Vec<Vec<BigInt>> = points.iter().map(|(a, b)| primitive_integer_vector(&[a.clone(), b.clone()])).collect();
    let mut height_ok = Vec::new();
    let mut height_margin = Vec::new();
    for (h, x) in pts.iter().enumerate() {
        // r_h * ln H2(x_h) >= power * (q + ln H2(P)), with ln H2 = ln(sum sq)/2
        let (ok, margin) = ctx.decide("height hypothesis", |w| {
            let lhs = ln_sum_sq(x, w)?.mul_int(r[h] as i64);
            let rhs = ln_sum_sq(&pc, w)?
                .add(&BigReal::from_int(2 * q, w))
                .mul(&BigReal::from_rational(&power, w));
            let margin = (lhs.to_f64() - rhs.to_f64()) / 2.0;
            Ok(lhs.cmp_certified(&rhs).map(|o| (o != std::cmp::Ordering::Less, margin)))
        })?;
        height_ok.push(ok);
        height_margin.push(margin);
    }
    let mut messages = Vec::new();
    if let Some(h) = degree_ratio_ok.iter().position(|ok| !ok) {
        messages.push(format!("degree-ratio hypothesis violated: r_{} / r_{} < 2 m^2 / theta", h + 1, h + 2));
    }
    if let Some(h) = height_ok.iter().position(|ok| !ok) {
        messages.push(format!("height hypothesis violated at point {}", h + 1));
    }
    let hypotheses_hold = degree_ratio_ok.iter().all(|&b| b) && height_ok.iter().all(|&b| b);
    let bound = Rational::from_integer(BigInt::from(m)) * theta;
    let (index_value, conclusion) = if hypotheses_hold {
        let ind = index(p, r, points)?;
        let holds = ind < bound;
        if !holds {
            messages.push("index >= m theta although the hypotheses hold: counterexample candidate".into());
        }
        (Some(fmt_rational(&ind)), Some(holds))
    } else {
        (None, None)
    };
    Ok(RothReport {
        m,
        theta: fmt_rational(theta),
        r: r.to_vec(),
        degree_ratio_ok,
        height_margin,
        height_ok,
        hypotheses_hold,
        index: index_value,
        bound: fmt_rational(&bound),
        conclusion_holds: conclusion,
        messages,
    })
}

/// A hypothesis-satisfying instance with m = 2: r = (8, 1), theta = 1,
/// P = X_11 X_12^7 X_21 - X_12^8 X_22 at the points (10^80, 1) and
/// (10^(600+k), 1). Returns (P, r, points, theta).
pub fn constructed_roth_instance(k: u32) -> (MultiHomPolynomial, Vec<u32>, Vec<(Rational, Rational)>, Rational) {
    let p = MultiHomPolynomial::new(
        vec![8, 1],
        [(vec![1, 7, 1, 0], Rational::one()), (vec![0, 8, 0, 1], -Rational::one())],
    )
    .expect("valid");
    let ten = BigInt::from(10);
    let x1 = (Rational::from_integer(num_traits::pow(ten.clone(), 80)), Rational::one());
    let x2 = (Rational::from_integer(num_traits::pow(ten, 600 + k as usize)), Rational::one());
    (p, vec![8, 1], vec![x1, x2], Rational::one())
}
