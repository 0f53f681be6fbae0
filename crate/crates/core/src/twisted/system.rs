//! Systems of linear forms indexed by the places of Q, and exponent tuples.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebraic::RationalLinearForm;
use crate::arith::padic::support;
use crate::arith::rational::{fmt_rational, parse_rational};
use crate::arith::{Place, Rational};
use crate::error::{Error, Result};

/// Determinant of a square rational matrix by fraction-exact elimination.
pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    d
}

fn unit_form(n: usize, i: usize) -> RationalLinearForm {
    let mut c = vec![Rational::zero(); n];
    c[i] = Rational::one();
    RationalLinearForm::new(c).expect("unit vector is nonzero")
}

/// Forms L_iv with det 1 at every place and X_1, ..., X_n at every place
/// outside a finite exception list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormSystemQ {
    n: usize,
    exceptions: BTreeMap<Place, Vec<RationalLinearForm>>,
    r: usize,
}

impl LinearFormSystemQ {
    /// Validates dimensions, det = 1 at each listed place and, when given,
    /// the bound r on the number of distinct forms (defaults included).
    pub fn new(n: usize, exceptions: BTreeMap<Place, Vec<RationalLinearForm>>, r_max: Option<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("dimension must be >= 2"));
        }
        for (v, forms) in &exceptions {
            if forms.len() != n || forms.iter().any(|f| f.coeffs().len() != n) {
                return Err(Error::invalid(format!("place {v}: need {n} forms in {n} variables")));
            }
            let rows: Vec<Vec<Rational>> = forms.iter().map(|f| f.coeffs().to_vec()).collect();
            let d = det(&rows);
            if !d.is_one() {
                return Err(Error::invalid(format!("place {v}: determinant is {} instead of 1", fmt_rational(&d))));
            }
        }
        let mut sys = LinearFormSystemQ { n, exceptions, r: 0 };
        // default forms stay in place, they are only noise in the list
        let id: Vec<RationalLinearForm> = (0..n).map(|i| unit_form(n, i)).collect();
        sys.exceptions.retain(|_, f| *f != id);
        sys.r = sys.distinct_forms().len();
        if let Some(r) = r_max {
            if sys.r > r {
                return Err(Error::invalid(format!("{} distinct forms exceed the bound r = {r}", sys.r)));
            }
        }
        Ok(sys)
    }

    pub fn identity(n: usize) -> Self {
        LinearFormSystemQ::new(n, BTreeMap::new(), None).expect("identity system is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct forms over all places.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn exceptions(&self) -> &BTreeMap<Place, Vec<RationalLinearForm>> {
        &self.exceptions
    }

    pub fn forms_at(&self, v: &Place) -> Vec<RationalLinearForm> {
        match self.exceptions.get(v) {
            Some(f) => f.clone(),
            None => (0..self.n).map(|i| unit_form(self.n, i)).collect(),
        }
    }

    /// X_1..X_n first, then the other forms in place order, deduplicated.
    pub fn distinct_forms(&self) -> Vec<RationalLinearForm> {
        let mut out: Vec<RationalLinearForm> = (0..self.n).map(|i| unit_form(self.n, i)).collect();
        for forms in self.exceptions.values() {
            for f in forms {
                if !out.contains(f) {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    /// The product over places of the largest n x n minor among all
    /// distinct forms.
    pub fn script_h(&self) -> Rational {
        script_h_of_forms(&self.distinct_forms(), self.n)
    }
}

fn combinations(s: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, s: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..s {
            cur.push(i);
            rec(i + 1, s, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, s, k, &mut Vec::new(), &mut out);
    out
}

/// prod_v max over n-subsets of |det|_v, exact.
pub fn script_h_of_forms(forms: &[RationalLinearForm], n: usize) -> Rational {
    let dets: Vec<Rational> = combinations(forms.len(), n)
        .into_iter()
        .map(|idx| det(&idx.iter().map(|&i| forms[i].coeffs().to_vec()).collect::<Vec<_>>()))
        .filter(|d| !d.is_zero())
        .collect();
    if dets.is_empty() {
        return Rational::zero();
    }
    let mut places = vec![Place::Inf];
    let mut primes = std::collections::BTreeSet::new();
    for d in &dets {
        primes.extend(support(d));
    }
    places.extend(primes.into_iter().map(Place::P));
    places
        .iter()
        .map(|v| dets.iter().map(|d| v.abs(d)).max().expect("nonempty"))
        .fold(Rational::one(), |a, b| a * b)
}

/// Real exponents c_iv, zero outside finitely many places, with
/// sum_v sum_i c_iv = 0 and sum_v max_i c_iv <= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTuple {
    n: usize,
    values: BTreeMap<Place, Vec<Rational>>,
}

impl ExponentTuple {
    pub fn new(n: usize, values: BTreeMap<Place, Vec<Rational>>) -> Result<Self> {
        let t = ExponentTuple::unchecked(n, values)?;
        let total: Rational = t.values.values().flatten().sum();
        if !total.is_zero() {
            return Err(Error::invalid(format!("exponents sum to {} instead of 0", fmt_rational(&total))));
        }
        let mx = t.max_sum();
        if mx > Rational::one() {
            return Err(Error::invalid(format!("sum of per-place maxima is {} > 1", fmt_rational(&mx))));
        }
        Ok(t)
    }

    /// Shape checks only; used for e-tuples before reduction.
    pub fn unchecked(n: usize, mut values: BTreeMap<Place, Vec<Rational>>) -> Result<Self> {
        if values.values().any(|c| c.len() != n) {
            return Err(Error::invalid(format!("every place needs {n} exponents")));
        }
        values.retain(|_, c| c.iter().any(|x| !x.is_zero()));
        Ok(ExponentTuple { n, values })
    }

    pub fn zero(n: usize) -> Self {
        ExponentTuple { n, values: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &BTreeMap<Place, Vec<Rational>> {
        &self.values
    }

    pub fn get(&self, v: &Place, i: usize) -> Rational {
        self.values.get(v).map(|c| c[i].clone()).unwrap_or_else(Rational::zero)
    }

    pub fn at(&self, v: &Place) -> Vec<Rational> {
        self.values.get(v).cloned().unwrap_or_else(|| vec![Rational::zero(); self.n])
    }

    pub fn total(&self) -> Rational {
        self.values.values().flatten().sum()
    }

    /// sum_v max_i c_iv (places with all zeros contribute 0).
    pub fn max_sum(&self) -> Rational {
        self.values.values().map(|c| c.iter().max().expect("n >= 1").clone()).sum()
    }
}

impl Serialize for ExponentTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, Vec<String>> =
            self.values.iter().map(|(k, v)| (k.to_string(), v.iter().map(fmt_rational).collect())).collect();
        m.serialize(s)
    }
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        _ => Err(Error::invalid(format!("expected a number or fraction string, got {v}"))),
    }
}

fn json_place_map<'a>(v: &'a serde_json::Value, what: &str) -> Result<BTreeMap<Place, &'a serde_json::Value>> {
    let obj = v.as_object().ok_or_else(|| Error::invalid(format!("`{what}` must be an object keyed by place")))?;
    obj.iter().map(|(k, v)| Ok((Place::parse(k)?, v))).collect()
}

/// Parses `{"n": 2, "forms": {"inf": [[1,0],[1,1]], "2": ...},
/// "c": {"inf": ["1/2","-1/2"]}, "r": 3}`; `forms`, `c` and `r` are optional.
pub fn parse_system_json(text: &str) -> Result<(LinearFormSystemQ, Option<ExponentTuple>)> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad JSON: {e}")))?;
    let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(|| Error::invalid("missing integer field `n`"))? as usize;
    let mut exceptions = BTreeMap::new();
    if let Some(f) = v.get("forms") {
        for (place, forms) in json_place_map(f, "forms")? {
            let arr = forms.as_array().ok_or_else(|| Error::invalid("forms must be arrays"))?;
            let mut out = Vec::new();
            for row in arr {
                let row = row.as_array().ok_or_else(|| Error::invalid("a form must be a coefficient array"))?;
                out.push(RationalLinearForm::new(row.iter().map(json_rational).collect::<Result<_>>()?)?);
            }
            exceptions.insert(place, out);
        }
    }
    let r = v.get("r").and_then(|x| x.as_u64()).map(|x| x as usize);
    let sys = LinearFormSystemQ::new(n, exceptions, r)?;
    let c = match v.get("c") {
        Some(c) => {
            let mut vals = BTreeMap::new();
            for (place, xs) in json_place_map(c, "c")? {
                let arr = xs.as_array().ok_or_else(|| Error::invalid("c values must be arrays"))?;
                vals.insert(place, arr.iter().map(json_rational).collect::<Result<Vec<_>>>()?);
            }
            Some(ExponentTuple::new(n, vals)?)
        }
        None => None,
    };
    Ok((sys, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn form(c: &[i64]) -> RationalLinearForm {
        RationalLinearForm::new(c.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&[vec![int(1), int(2)], vec![int(3), int(4)]]), int(-2));
        assert_eq!(det(&[vec![int(0), int(1)], vec![int(1), int(0)]]), int(-1));
        let m = vec![vec![int(2), int(0), int(1)], vec![int(1), int(1), int(1)], vec![int(1), int(0), int(1)]];
        assert_eq!(det(&m), int(1));
    }

    #[test]
    fn validation() {
        let mut ex = BTreeMap::new();
        ex.insert(Place::Inf, vec![form(&[1, 0]), form(&[1, 2])]);
        assert!(LinearFormSystemQ::new(2, ex.clone(), None).is_err());
        ex.insert(Place::Inf, vec![form(&[1, 0]), form(&[1, 1])]);
        let s = LinearFormSystemQ::new(2, ex.clone(), None).unwrap();
        assert_eq!(s.r(), 3);
        assert!(LinearFormSystemQ::new(2, ex, Some(2)).is_err());
        assert_eq!(LinearFormSystemQ::identity(3).r(), 3);
    }

    #[test]
    fn script_h_examples() {
        assert_eq!(LinearFormSystemQ::identity(2).script_h(), int(1));
        let forms = vec![form(&[1, 0]), form(&[0, 1]), form(&[1, 2])];
        assert_eq!(script_h_of_forms(&forms, 2), int(2));
        // 1/2-coefficient makes the 2-adic factor 2 and the archimedean 1
        let forms = vec![form(&[1, 0]), form(&[0, 1]), RationalLinearForm::new(vec![rat(1, 2), int(0)]).unwrap()];
        assert_eq!(script_h_of_forms(&forms, 2), int(2));
    }

    #[test]
    fn exponent_tuple_conditions() {
        let mut v = BTreeMap::new();
        v.insert(Place::Inf, vec![rat(1, 2), rat(-1, 2)]);
        assert!(ExponentTuple::new(2, v.clone()).is_ok());
        v.insert(Place::Inf, vec![rat(3, 2), rat(-3, 2)]);
        assert!(ExponentTuple::new(2, v.clone()).is_err());
        v.insert(Place::Inf, vec![rat(1, 2), rat(1, 2)]);
        assert!(ExponentTuple::new(2, v).is_err());
    }

    #[test]
    fn json() {
        let (s, c) =
            parse_system_json(r#"{"n":2,"forms":{"inf":[[1,0],[1,1]],"2":[["1/2",0],[0,2]]},"c":{"inf":["1/2","-1/2"]}}"#)
                .unwrap();
        assert_eq!(s.exceptions().len(), 2);
        assert_eq!(c.unwrap().get(&Place::Inf, 0), rat(1, 2));
        assert!(parse_system_json(r#"{"forms":{}}"#).is_err());
        assert!(parse_system_json(r#"{"n":2,"forms":{"4":[[1,0],[0,1]]}}"#).is_err());
    }
}
