use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::Path;

use digitlab::algebraic::sqrt2_minus_1;
use digitlab::approx::approximant::{all_approximants, SequenceParams};
use digitlab::approx::scans::PlaceExponents;
use digitlab::approx::{
    approximant_from_factorization, best_repetition, best_repetitions_all, cugiani_scan, liouville_threshold, repetition_sequence,
    ridout_solutions, run_approximants, RunLimit, Subject as ApproxSubject,
};
use digitlab::arith::rational::fmt_rational;
use digitlab::arith::{parse_rational, EvalContext, Place, Rational};
use digitlab::bounds::{evaluate_named, Bounds, LogBase};
use digitlab::digits::{gap_series_digits, GapSeriesSpec};
use digitlab::experiments::{complexity_growth, digit_changes, dyadic_grid, gap_series_changes, require_irrational, LogFit};
use digitlab::twisted::{
    gap_principle_experiment, gap_principle_suite, index, infima_estimate, parse_system_json, roth_lemma_check, search_small_points,
    search_small_points_brute, twisted_height, ExponentTuple, LinearFormSystemQ, MultiHomPolynomial, QPower,
};
use digitlab::words::changes::nbdc_csv;
use digitlab::words::{complexity_profile_fast, complexity_profile_naive, morse_hedlund_check, nbdc_profile, run_boundaries, FiniteWord};
use digitlab::Error;
use serde_json::json;

use crate::cli::*;
use crate::output::{to_json, Report};
use crate::subject::Subject;

pub struct Env<'a> {
    pub ctx: EvalContext,
    pub cache: Option<&'a Path>,
    pub seed: u64,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn rational(s: &str) -> Result<Rational, Error> {
    parse_rational(s)
}

fn digit_string(w: &FiniteWord) -> String {
    if w.base() <= 10 {
        w.symbols().iter().map(|&d| char::from(b'0' + d)).collect()
    } else {
        w.symbols().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn run(cmd: &Command, env: &Env) -> Result<Report, Error> {
    match cmd {
        Command::Digits(a) => digits(a, env),
        Command::Complexity(a) => complexity(a, env),
        Command::MorseHedlund(a) => morse_hedlund(a, env),
        Command::Nbdc(a) => nbdc(a, env),
        Command::Repetition(a) => repetition(a, env),
        Command::Bounds(a) => bounds(a, env),
        Command::Twisted(t) => twisted(t, env),
        Command::GapSeries(a) => gap_series(a),
        Command::Runs(a) => runs(a, env),
        Command::Ridout(a) => ridout(a, env),
        Command::Cugiani(a) => cugiani(a, env),
        Command::Experiment(e) => experiment(e, env),
    }
}

fn digits(a: &DigitsArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    let w = s.digits(s.n(), env.cache, &env.ctx)?;
    let mut csv = String::from("k,digit\n");
    for (i, d) in w.symbols().iter().enumerate() {
        writeln!(csv, "{},{d}", i + 1).unwrap();
    }
    let j = json!({ "source": s.source.spec_string(), "base": s.base, "n": w.len(), "digits": digit_string(&w) });
    Ok(Report { json: j, csv: Some(csv), notes: Vec::new(), table: false })
}

fn prefix_for(s: &Subject, n_max: usize, env: &Env) -> Result<FiniteWord, Error> {
    let n = s.n();
    if n < n_max {
        return Err(bad(format!("n-max {n_max} exceeds the prefix length {n}")));
    }
    s.digits(n, env.cache, &env.ctx)
}

fn complexity(a: &ComplexityArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    let w = prefix_for(&s, a.n_max, env)?;
    let prof = if a.naive { complexity_profile_naive(&w, a.n_max)? } else { complexity_profile_fast(&w, a.n_max)? };
    Ok(Report::record(&prof)?.with_csv(prof.to_csv()).as_table().note(format!("source {} base {} prefix {}", s.source, s.base, w.len())))
}

fn morse_hedlund(a: &ComplexityArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    let w = prefix_for(&s, a.n_max, env)?;
    let r = morse_hedlund_check(&w, a.n_max)?;
    let mut j = to_json(&r)?;
    j["passed"] = json!(r.passed());
    Ok(Report { json: j, csv: None, notes: Vec::new(), table: false })
}

fn nbdc(a: &NbdcArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    let n = s.n();
    let n_max = a.n_max.unwrap_or(n.saturating_sub(1));
    if n_max + 1 > n {
        return Err(bad(format!("nbdc up to {n_max} needs {} digits, have {n}", n_max + 1)));
    }
    let w = s.digits(n, env.cache, &env.ctx)?;
    let prof = nbdc_profile(&w, n_max)?;
    let runs: Vec<usize> = run_boundaries(&w).into_iter().take_while(|&b| b <= n_max).collect();
    let j = json!({ "source": s.source.spec_string(), "base": s.base, "n_max": n_max, "values": prof, "run_boundaries": runs });
    Ok(Report { json: j, csv: Some(nbdc_csv(&prof)), notes: Vec::new(), table: true })
}

fn repetition(a: &RepetitionArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    if a.sequence {
        let mut p = SequenceParams::new(rational(&a.v)?, a.count);
        p.u = a.u.as_deref().map(rational).transpose()?;
        p.c3 = rational(&a.c3)?;
        p.max_digits = a.max_digits;
        let seq = repetition_sequence(&s.source, s.base, &p, &env.ctx)?;
        let mut csv = String::from("k,ell,r,s,v_len,t,quality\n");
        for t in &seq.terms {
            let ap = &t.approximant;
            let q = t.quality_holds.map_or("undecided".to_string(), |b| b.to_string());
            writeln!(csv, "{},{},{},{},{},{},{q}", t.k, ap.ell, ap.r, ap.s, ap.v_len, t.t).unwrap();
        }
        return Ok(Report::record(&seq)?.with_csv(csv));
    }
    let ell = a.ell.ok_or_else(|| bad("give --ell or --sequence"))?;
    let w = s.digits(ell, env.cache, &env.ctx)?;
    let x = ApproxSubject::for_source(&s.source, s.base, ell + 64, &env.ctx)?;
    if a.all {
        let aps = all_approximants(&w, &x)?;
        let mut csv = String::from("ell,r,s,v_len,t,error_exponent\n");
        for ap in &aps {
            writeln!(csv, "{},{},{},{},{},{}", ap.ell, ap.r, ap.s, ap.v_len, ap.t(), ap.error_exponent()).unwrap();
        }
        let facts = best_repetitions_all(w.symbols());
        let degenerate = facts.iter().skip(1).filter(|f| f.is_degenerate()).count();
        let j = json!({ "base": s.base, "ell_max": ell, "certified": aps.len(), "degenerate": degenerate, "approximants": to_json(&aps)? });
        return Ok(Report { json: j, csv: Some(csv), notes: Vec::new(), table: true });
    }
    let f = best_repetition(w.symbols())?;
    if f.is_degenerate() {
        let j = json!({ "factorization": to_json(&f)?, "approximant": null, "note": "no repeated block in this prefix" });
        return Ok(Report { json: j, csv: None, notes: Vec::new(), table: false });
    }
    let ap = approximant_from_factorization(&f, &w, &x)?;
    let j = json!({
        "factorization": to_json(&f)?,
        "approximant": to_json(&ap)?,
        "value": fmt_rational(&ap.value()),
        "error_exponent": ap.error_exponent(),
    });
    Ok(Report { json: j, csv: None, notes: Vec::new(), table: false })
}

fn bounds(a: &BoundsArgs, env: &Env) -> Result<Report, Error> {
    let mut params = BTreeMap::new();
    for p in &a.params {
        let (k, v) = p.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{p}`")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let b = Bounds::new(env.ctx.clone()).with_log_base(if a.log2 { LogBase::Two } else { LogBase::Natural });
    Report::record(&evaluate_named(&a.name, &params, &b)?)
}

fn system(path: &Path) -> Result<(LinearFormSystemQ, ExponentTuple), Error> {
    let (sys, c) = parse_system_json(&read(path)?)?;
    let n = sys.n();
    Ok((sys, c.unwrap_or_else(|| ExponentTuple::zero(n))))
}

fn qpower(q: &QArgs) -> Result<QPower, Error> {
    QPower::new(rational(&q.q)?, rational(&q.q_exp)?)
}

fn points_json(pts: &[Vec<digitlab::arith::BigInt>]) -> Vec<Vec<String>> {
    pts.iter().map(|p| p.iter().map(|v| v.to_string()).collect()).collect()
}

fn polynomial(p: &PolyArgs) -> Result<(MultiHomPolynomial, Vec<u32>, Vec<(Rational, Rational)>), Error> {
    let poly = match &p.poly {
        Some(path) => MultiHomPolynomial::from_json(&read(path)?)?,
        None => MultiHomPolynomial::determinant(),
    };
    let weights = p
        .weights
        .split(',')
        .map(|w| w.trim().parse::<u32>().map_err(|_| bad(format!("bad weight `{w}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let points = p
        .points
        .split(',')
        .map(|pt| {
            let (x, y) = pt.split_once(':').ok_or_else(|| bad(format!("points are written a:b, got `{pt}`")))?;
            Ok((rational(x)?, rational(y)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((poly, weights, points))
}

fn twisted(t: &TwistedCommand, env: &Env) -> Result<Report, Error> {
    match t {
        TwistedCommand::Height { system: sa, q, point } => {
            let (sys, c) = system(&sa.system)?;
            let x = point.split(',').map(rational).collect::<Result<Vec<_>, _>>()?;
            let h = twisted_height(&x, &sys, &c, &qpower(q)?)?;
            Ok(Report { json: json!({ "point": point, "height": to_json(&h)? }), csv: None, notes: Vec::new(), table: false })
        }
        TwistedCommand::Search { system: sa, q, delta, box_, brute } => {
            let (sys, c) = system(&sa.system)?;
            let (q, d) = (qpower(q)?, rational(delta)?);
            let pts = if *brute { search_small_points_brute(&sys, &c, &q, &d, *box_)? } else { search_small_points(&sys, &c, &q, &d, *box_)? };
            let mut csv = (0..sys.n()).map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join(",");
            csv.push('\n');
            for p in &pts {
                csv.push_str(&p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
                csv.push('\n');
            }
            let j = json!({ "delta": delta, "box": box_, "count": pts.len(), "points": points_json(&pts) });
            Ok(Report { json: j, csv: Some(csv), notes: Vec::new(), table: false })
        }
        TwistedCommand::Infima { system: sa, q, box_ } => {
            let (sys, c) = system(&sa.system)?;
            Report::record(&infima_estimate(&sys, &c, &qpower(q)?, *box_)?).map(|r| r.note("upper estimates from a finite box"))
        }
        TwistedCommand::Gap { system: sa, delta, q0, samples, box_ } => {
            let (sys, c) = system(&sa.system)?;
            Report::record(&gap_principle_experiment(&sys, &c, &rational(delta)?, &rational(q0)?, *samples, *box_)?)
        }
        TwistedCommand::GapSuite { systems, delta, q0, samples, box_ } => {
            Report::record(&gap_principle_suite(env.seed, *systems, &rational(delta)?, &rational(q0)?, *samples, *box_)?)
        }
        TwistedCommand::Index { poly } => {
            let (p, w, pts) = polynomial(poly)?;
            let i = index(&p, &w, &pts)?;
            Ok(Report { json: json!({ "index": fmt_rational(&i) }), csv: None, notes: Vec::new(), table: false })
        }
        TwistedCommand::Roth { poly, theta } => {
            let (p, w, pts) = polynomial(poly)?;
            Report::record(&roth_lemma_check(&p, &w, &pts, &rational(theta)?, &env.ctx)?)
        }
    }
}

/// Terms (j, n_j, a_j) with n_j <= n, at most this many.
const MAX_LISTED_TERMS: u64 = 100_000;

fn gap_series(a: &GapSeriesArgs) -> Result<Report, Error> {
    let spec = match (&a.eta, &a.spec) {
        (Some(e), None) => GapSeriesSpec::pow_floor(a.base, rational(e)?)?,
        (None, Some(s)) => GapSeriesSpec::parse(s)?,
        _ => return Err(bad("give --eta or --spec")),
    };
    if a.n == 0 || a.n > crate::subject::MAX_DIGITS {
        return Err(bad(format!("digit count must lie in 1..=2^30, got {}", a.n)));
    }
    let g = gap_series_digits(&spec, a.n)?;
    let mut terms = Vec::new();
    let mut csv = String::from("j,n_j,a_j\n");
    let mut j = 1;
    while let Some((nj, aj)) = spec.term(j) {
        if nj > a.n as u64 || j > MAX_LISTED_TERMS {
            break;
        }
        writeln!(csv, "{j},{nj},{aj}").unwrap();
        terms.push(json!([j, nj, aj]));
        j += 1;
    }
    let out = json!({ "spec": spec.to_string(), "n": a.n, "digits": digit_string(&g.word), "terms": terms });
    Ok(Report { json: out, csv: Some(csv), notes: vec![format!("series {spec}")], table: false })
}

fn runs(a: &RunsArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    let limit = match (a.max_n, a.count) {
        (Some(n), None) => RunLimit::MaxN(n),
        (None, Some(c)) => RunLimit::Count(c),
        (None, None) => RunLimit::MaxN(2000),
        _ => unreachable!("clap rejects both"),
    };
    let r = run_approximants(&s.source, s.base, limit, &env.ctx)?;
    let mut csv = String::from("j,n_j,n_next,P_j\n");
    for x in &r.runs {
        writeln!(csv, "{},{},{},{}", x.j, x.n_j, x.n_next, x.p).unwrap();
    }
    let mut j = json!({ "source": s.source.spec_string(), "runs": to_json(&r)? });
    if a.liouville {
        j["liouville"] = to_json(&liouville_threshold(s.algebraic()?, s.base, limit, &env.ctx)?)?;
    }
    Ok(Report { json: j, csv: Some(csv), notes: Vec::new(), table: false })
}

fn prime_list(s: Option<&str>) -> Result<Vec<(digitlab::arith::BigUint, Rational)>, Error> {
    let Some(s) = s else {
        return Ok(Vec::new());
    };
    s.split(',')
        .map(|item| {
            let (p, f) = item.split_once(':').ok_or_else(|| bad(format!("expected p:f, got `{item}`")))?;
            match Place::parse(p)? {
                Place::P(p) => Ok((p, rational(f)?)),
                Place::Inf => Err(bad("use --f-inf for the archimedean exponent")),
            }
        })
        .collect()
}

/// Exponents whose total is `total` unless f_inf is given explicitly.
fn places(a: &PlaceArgs, total: Rational) -> Result<PlaceExponents, Error> {
    let s1 = prime_list(a.s1.as_deref())?;
    let s2 = prime_list(a.s2.as_deref())?;
    let finite: Rational = s1.iter().chain(&s2).map(|(_, f)| f.clone()).sum();
    let f_inf = match &a.f_inf {
        Some(f) => rational(f)?,
        None => total - finite,
    };
    Ok(PlaceExponents { f_inf, s1, s2 })
}

fn ridout(a: &RidoutArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    let two = Rational::from_integer(2.into());
    let exps = places(&a.places, two + rational(&a.eps)?)?;
    let r = ridout_solutions(s.algebraic()?, &exps, a.y_max, &env.ctx)?;
    let csv = r.csv();
    Ok(Report::record(&r)?.with_csv(csv))
}

fn cugiani(a: &CugianiArgs, env: &Env) -> Result<Report, Error> {
    let s = Subject::resolve(&a.subject)?;
    let exps = places(&a.places, Rational::from_integer(2.into()))?;
    // enough digits for |x - p/q| well below q^-2 at q = y_max
    let n = (4.0 * (a.y_max.max(2) as f64).log(s.base as f64)).ceil() as usize + 64;
    let x = ApproxSubject::for_source(&s.source, s.base, n, &env.ctx)?;
    let r = cugiani_scan(&x, &exps, a.m, &rational(&a.c)?, a.y_max, &env.ctx)?;
    let mut csv = String::from("x,y\n");
    for (x, y) in &r.solutions {
        writeln!(csv, "{x},{y}").unwrap();
    }
    Ok(Report::record(&r)?.with_csv(csv))
}

fn fit_note(f: &Option<LogFit>) -> String {
    match f {
        Some(f) => format!("fit: ln nbdc = {:.6} + {:.6} ln ln n (r2 {:.6}, {} points)", f.intercept, f.slope, f.r2, f.points),
        None => "fit: too few points".to_string(),
    }
}

fn experiment(e: &ExperimentCommand, env: &Env) -> Result<Report, Error> {
    match e {
        ExperimentCommand::ComplexityGrowth { subject, eta, n_max } => {
            let s = Subject::resolve(subject)?;
            let w = prefix_for(&s, *n_max, env)?;
            let g = complexity_growth(&w, *eta, *n_max)?;
            let mut csv = String::from("n,p(n),ratio,running_sup\n");
            for r in &g.rows {
                writeln!(csv, "{},{},{:.12e},{:.12e}", r.n, r.p, r.ratio, r.running_sup).unwrap();
            }
            Ok(Report::record(&g)?.with_csv(csv).as_table().note(format!("diagnostic; source {} base {}", s.source, s.base)))
        }
        ExperimentCommand::DigitChanges { subject, degree } => {
            let s = Subject::resolve(subject)?;
            require_irrational(&s.source)?;
            let d = match (degree, &s.source) {
                (Some(d), _) => *d,
                (None, digitlab::digits::DigitSource::Algebraic(x)) => x.degree() as u64,
                (None, _) => return Err(bad("--degree is required for non-algebraic input")),
            };
            let n = s.n();
            let w = s.digits(n, env.cache, &env.ctx)?;
            let ch = digit_changes(&w, d, &dyadic_grid(n - 1))?;
            let mut csv = String::from("n,nbdc,scaled\n");
            for r in &ch.rows {
                writeln!(csv, "{},{},{:.12e}", r.n, r.nbdc, r.scaled).unwrap();
            }
            let c1 = ch.c1_fitted.map_or("none".to_string(), |c| format!("{c:.6}"));
            Ok(Report::record(&ch)?.with_csv(csv).note(fit_note(&ch.fit)).note(format!("reference exponent 1.5; fitted c1 {c1}")))
        }
        ExperimentCommand::GapSeriesChanges { eta, base, n, c1, degrees } => {
            if *n < 16 || *n > crate::subject::MAX_DIGITS {
                return Err(bad(format!("digit count must lie in 16..=2^30, got {n}")));
            }
            let degrees = degrees
                .split(',')
                .map(|d| d.trim().parse::<u64>().map_err(|_| bad(format!("bad degree `{d}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let c1 = match c1 {
                Some(c) => *c,
                None => {
                    let w = digitlab::digits::digits_of_algebraic_ctx(&sqrt2_minus_1(), *base, *n, &env.ctx)?;
                    digit_changes(&w, 2, &dyadic_grid(n - 1))?.c1_fitted.ok_or_else(|| bad("range too short to fit c1"))?
                }
            };
            let r = gap_series_changes(&rational(eta)?, *base, *n, c1, &degrees, &env.ctx)?;
            let mut csv = String::from("n,nbdc\n");
            for row in &r.rows {
                writeln!(csv, "{},{}", row.n, row.nbdc).unwrap();
            }
            let below = if r.asymptotically_below { "below" } else { "not below" };
            Ok(Report::record(&r)?
                .with_csv(csv)
                .note(fit_note(&r.fit))
                .note(format!("expected slope {:.6}; reference 1.5; fitted slope is {below} the reference", r.expected_slope)))
        }
    }
}
