//! Name-based dispatch used by the command line: `t2 r=3 delta=1` and so on.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{format::sci, Bounds};
use crate::arith::parse_rational;
use crate::arith::{BigReal, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub formula: String,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    /// Natural logarithm of the value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub const FORMULAS: &[(&str, &str)] = &[
    ("t1", "n r delta"),
    ("t2", "r delta"),
    ("t3", "A B delta"),
    ("system_subspace_count", "n R D eps"),
    ("system_threshold", "n H eps"),
    ("ridout_subspace_count", "d eps"),
    ("ridout_threshold", "H eps"),
    ("B", "d eps"),
    ("large_ratio_count", "d eps"),
    ("m", "r delta"),
    ("logC", "r delta H"),
    ("two_dim", "r delta H [A B]"),
    ("contradiction", "log_t v d"),
    ("eta", "v"),
    ("hadamard_bound", "n r H"),
];

struct Params<'a>(&'a BTreeMap<String, String>);

impl Params<'_> {
    fn raw(&self, k: &str) -> Result<&str> {
        self.0.get(k).map(|s| s.as_str()).ok_or_else(|| Error::invalid(format!("missing parameter `{k}`")))
    }
    fn q(&self, k: &str) -> Result<Rational> {
        parse_rational(self.raw(k)?)
    }
    fn u(&self, k: &str) -> Result<u64> {
        let s = self.raw(k)?;
        s.trim().parse().map_err(|_| Error::invalid(format!("parameter `{k}` must be a non-negative integer, got `{s}`")))
    }
    fn u32(&self, k: &str) -> Result<u32> {
        u32::try_from(self.u(k)?).map_err(|_| Error::invalid(format!("parameter `{k}` too large")))
    }
}

fn value_report(name: &str, params: &BTreeMap<String, String>, x: BigReal, note: Option<&str>) -> BoundReport {
    let lv = x.ln().ok().map(|l| sci(&l, 20));
    BoundReport {
        formula: name.to_string(),
        params: params.clone(),
        value: Some(sci(&x, 20)),
        log_value: lv,
        record: None,
        note: note.map(str::to_string),
    }
}

pub fn evaluate_named(name: &str, params: &BTreeMap<String, String>, b: &Bounds) -> Result<BoundReport> {
    let p = Params(params);
    let v = |x: BigReal| Ok(value_report(name, params, x, None));
    match name {
        "t1" => v(b.t1(p.u32("n")?, p.u("r")?, &p.q("delta")?)?),
        "t2" => v(b.t2(p.u("r")?, &p.q("delta")?)?),
        "t3" => v(b.t3(&p.q("A")?, &p.q("B")?, &p.q("delta")?)?),
        "system_subspace_count" => v(b.system_subspace_count(p.u32("n")?, p.u("R")?, p.u("D")?, &p.q("eps")?)?),
        "system_threshold" => v(b.system_threshold(p.u32("n")?, &p.q("H")?, &p.q("eps")?)?),
        "ridout_subspace_count" => v(b.ridout_subspace_count(p.u("d")?, &p.q("eps")?)?),
        "ridout_threshold" => {
            let h = BigReal::from_rational(&p.q("H")?, b.ctx.precision_bits);
            v(b.ridout_threshold(&h, &p.q("eps")?)?)
        }
        "B" => v(b.ridout_count_half_eps(p.u("d")?, &p.q("eps")?)?),
        "large_ratio_count" => Ok(value_report(
            name,
            params,
            b.large_ratio_count(p.u("d")?, &p.q("eps")?)?,
            Some("explicit sufficient constant, not optimal"),
        )),
        "m" => {
            let m = b.aux_points_m(p.u("r")?, &p.q("delta")?)?;
            v(BigReal::from_int(m, b.ctx.precision_bits))
        }
        "logC" => v(b.log_c(p.u("r")?, &p.q("delta")?, &p.q("H")?)?),
        "two_dim" => {
            let ab = match (params.get("A"), params.get("B")) {
                (Some(_), Some(_)) => Some((p.q("A")?, p.q("B")?)),
                (None, None) => None,
                _ => return Err(Error::invalid("give both A and B or neither")),
            };
            let rec = b.two_dim_constants(p.u("r")?, &p.q("delta")?, &p.q("H")?, ab.as_ref().map(|(a, b)| (a, b)))?;
            Ok(BoundReport {
                formula: name.into(),
                params: params.clone(),
                value: None,
                log_value: None,
                record: Some(serde_json::to_value(rec).expect("serializable")),
                note: Some("C is reported through log C".into()),
            })
        }
        "contradiction" => {
            let rec = b.contradiction_params(&p.q("log_t")?, &p.q("v")?, p.u("d")?)?;
            Ok(BoundReport {
                formula: name.into(),
                params: params.clone(),
                value: None,
                log_value: None,
                record: Some(serde_json::to_value(rec).expect("serializable")),
                note: Some("A1 is evaluated with both signs of the exponent 7, as a1_plus7 and a1_minus7".into()),
            })
        }
        "eta" => v(b.eta(&p.q("v")?)?),
        "hadamard_bound" => v(b.hadamard_bound(p.u32("n")?, p.u32("r")?, &p.q("H")?)?),
        _ => Err(Error::invalid(format!(
            "unknown formula `{name}`; known: {}",
            FORMULAS.iter().map(|f| f.0).collect::<Vec<_>>().join(", ")
        ))),
    }
}
