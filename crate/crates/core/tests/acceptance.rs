//! Acceptance run: every criterion prints one PASS/FAIL line with its
//! runtime and budget. Values are compared against oracles computed here.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use digitlab::algebraic::{height, sqrt2_minus_1, AlgebraicReal};
use digitlab::approx::{
    all_approximants, best_repetition, best_repetition_brute, liouville_threshold, ridout_solutions, run_approximants,
    PlaceExponents, RunLimit, Subject,
};
use digitlab::arith::rational::rat;
use digitlab::arith::{product_formula_check, BigInt, BigReal, BigUint, EvalContext, Rational};
use digitlab::bounds::Bounds;
use digitlab::digits::{digits_of_algebraic, DigitSource};
use digitlab::experiments::gap_series_changes;
use digitlab::twisted::index::{constructed_roth_instance, random_points, random_polynomial};
use digitlab::twisted::search::gap_principle_suite;
use digitlab::twisted::{index, index_brute, roth_lemma_check, MultiHomPolynomial};
use digitlab::words::{
    block_complexity, complexity_profile_fast, complexity_profile_naive, morse_hedlund_check, FiniteWord,
};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run(n: usize, title: &str, budget_s: f64, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let secs = t.elapsed().as_secs_f64();
    let (ok, detail) = match out {
        Ok(d) if secs <= budget_s => (true, d),
        Ok(d) => (false, format!("{d}; over the time budget")),
        Err(e) => (false, e),
    };
    println!("criterion {n:>2} {}: {title}: {detail} [{secs:.2}s of {budget_s}s]", if ok { "PASS" } else { "FAIL" });
    ok
}

fn cubic_in_unit_interval() -> AlgebraicReal {
    AlgebraicReal::parse("[-1,-1,0,1] 1 2").unwrap().affine(&rat(1, 1), &rat(-1, 1)).unwrap()
}

fn digit_string(n: &BigUint, base: u32, len: usize) -> String {
    let s = n.to_str_radix(base);
    format!("{}{s}", "0".repeat(len - s.len()))
}

fn sym_string(w: &FiniteWord) -> String {
    w.symbols().iter().map(|&d| char::from_digit(d as u32, 36).unwrap()).collect()
}

fn digits_oracle() -> Check {
    let x = sqrt2_minus_1();
    let mut parts = Vec::new();
    for (base, len) in [(2u32, 64usize), (10, 20)] {
        // floor(sqrt(2) b^len) - b^len
        let scale = num_traits::pow(BigUint::from(base), len);
        let oracle = (BigUint::from(2u32) * &scale * &scale).sqrt() - &scale;
        let want = digit_string(&oracle, base, len);
        let got = sym_string(&digits_of_algebraic(&x, base, len).map_err(err)?);
        ensure(got == want, || format!("base {base}: got {got}, oracle {want}"))?;
        parts.push(format!("base {base}: {got}"));
    }
    Ok(parts.join(", "))
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> FiniteWord {
    let base = rng.gen_range(2..=4u32);
    let len = rng.gen_range(1..=max_len);
    let syms = (0..len).map(|_| rng.gen_range(0..base) as u8).collect();
    FiniteWord::new(syms, base).unwrap()
}

// Direct enumeration costs about |w| n per length, so the naive profile
// covers n <= 48 and a random sample of larger n is compared one by one.
fn complexity_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut compared = 0usize;
    for k in 0..1000 {
        let w = random_word(&mut rng, 2000);
        let fast = complexity_profile_fast(&w, w.len()).map_err(err)?;
        let head = w.len().min(48);
        let naive = complexity_profile_naive(&w, head).map_err(err)?;
        ensure(fast.values[..head] == naive.values[..], || format!("word {k}: profiles differ for n <= {head}"))?;
        compared += head;
        for _ in 0..8 {
            if w.len() <= head {
                break;
            }
            let n = rng.gen_range(head + 1..=w.len());
            let direct = block_complexity(&w, n as i64).map_err(err)?;
            ensure(fast.values[n - 1] == direct, || format!("word {k}: p({n}) fast {} naive {direct}", fast.values[n - 1]))?;
            compared += 1;
        }
    }
    Ok(format!("1000 words, {compared} values of p(n) agree"))
}

fn morse_hedlund() -> Check {
    let mut parts = Vec::new();
    for (name, x, base) in [("sqrt(2) - 1", sqrt2_minus_1(), 2u32), ("cubic root - 1", cubic_in_unit_interval(), 3)] {
        let w = digits_of_algebraic(&x, base, 10_000).map_err(err)?;
        let rep = morse_hedlund_check(&w, 100).map_err(err)?;
        ensure(rep.passed(), || format!("{name} base {base}: library check failed"))?;
        let naive = complexity_profile_naive(&w, 100).map_err(err)?;
        for (i, &p) in naive.values.iter().enumerate() {
            ensure(p > i as u64 + 1, || format!("{name} base {base}: p({}) = {p}", i + 1))?;
        }
        parts.push(format!("{name} base {base}: p(100) = {}", naive.values[99]));
    }
    Ok(parts.join(", "))
}

fn repetition_machinery() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut words = 0;
    while words < 200 {
        let w = random_word(&mut rng, 300);
        if w.len() < 2 {
            continue;
        }
        let (a, b) = (best_repetition(w.symbols()).map_err(err)?, best_repetition_brute(w.symbols()).map_err(err)?);
        ensure(a == b, || format!("word {words}: {a:?} vs brute {b:?}"))?;
        words += 1;
    }
    let x = sqrt2_minus_1();
    let w = digits_of_algebraic(&x, 2, 10_000).map_err(err)?;
    let apps = all_approximants(&w, &Subject::Algebraic(x.clone())).map_err(err)?;
    // second route: a 2^15-bit enclosure of x against each approximant
    let bits = 1 << 15;
    let enc = x.enclosure(bits);
    let mut max_exp = 0;
    for a in &apps {
        let bound = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2), a.error_exponent()));
        let dist = enc.sub(&BigReal::from_rational(&a.value(), bits)).abs();
        ensure(dist.certainly_le(&BigReal::from_rational(&bound, bits)), || {
            format!("ell {}: |x - xi| <= 2^-{} not confirmed", a.ell, a.error_exponent())
        })?;
        ensure(a.r == 0 || a.p.is_odd(), || format!("ell {}: 2 divides p with r = {}", a.ell, a.r))?;
        max_exp = max_exp.max(a.error_exponent());
    }
    Ok(format!("200 words agree; {} approximants for ell <= 10^4, largest exponent {max_exp}", apps.len()))
}

#[derive(Clone, Copy)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
}

/// Mahler measure by Durand-Kerner on the monic polynomial.
fn mahler(coeffs: &[f64]) -> f64 {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let eval = |z: C| coeffs.iter().rev().fold(C(0.0, 0.0), |acc, &c| acc.mul(z).add(C(c / lead, 0.0)));
    let mut roots: Vec<C> = (0..d).map(|k| {
        let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64;
        C(0.9 * t.cos(), 0.9 * t.sin())
    }).collect();
    for _ in 0..500 {
        for i in 0..d {
            let mut den = C(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    den = den.mul(roots[i].sub(roots[j]));
                }
            }
            roots[i] = roots[i].sub(eval(roots[i]).div(den));
        }
    }
    lead.abs() * roots.iter().map(|r| r.abs().max(1.0)).product::<f64>()
}

/// U = 1 + 3 H((b - 1) x) from the minimal polynomial of x.
fn liouville_u(x: &AlgebraicReal, base: u32) -> f64 {
    let c: Vec<BigInt> = x.poly().coeffs().to_vec();
    let d = c.len() - 1;
    let k = BigInt::from(base - 1);
    let scaled: Vec<BigInt> = c.iter().enumerate().map(|(i, ci)| ci * num_traits::pow(k.clone(), d - i)).collect();
    let g = scaled.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    let f: Vec<f64> = scaled.iter().map(|v| (v / &g).to_f64().unwrap()).collect();
    1.0 + 3.0 * mahler(&f).powf(1.0 / d as f64)
}

fn run_ends(d: &[u8]) -> Vec<usize> {
    (1..d.len()).filter(|&i| d[i] != d[i - 1]).collect()
}

fn run_inequalities() -> Check {
    let golden = AlgebraicReal::parse("[-1,1,1] 0 1").unwrap();
    let subjects = [("sqrt(2) - 1", sqrt2_minus_1()), ("(sqrt(5) - 1)/2", golden), ("cubic root - 1", cubic_in_unit_interval())];
    let ctx = EvalContext::default();
    let mut parts = Vec::new();
    for (name, x) in subjects {
        let deg = x.degree();
        for base in [2u32, 10] {
            let src = DigitSource::Algebraic(x.clone());
            let rep = run_approximants(&src, base, RunLimit::MaxN(2000), &ctx).map_err(err)?;
            // enough digits to see the run after each n_j <= 2000 and the
            // 2d n_j bound of the doubling check
            let avail = 2 * deg * 2000 + 2;
            let digits = digits_of_algebraic(&x, base, avail).map_err(err)?;
            let d = digits.symbols();
            let k = d.iter().position(|&a| a as u32 == base - 1).ok_or("no digit b - 1")?;
            ensure(rep.shift == k, || format!("{name} base {base}: shift {} vs {k}", rep.shift))?;
            let ends = run_ends(&d[k..]);
            let want: Vec<usize> = ends.iter().copied().take_while(|&n| n <= 2000).collect();
            let got: Vec<usize> = rep.runs.iter().map(|r| r.n_j).collect();
            ensure(got == want, || format!("{name} base {base}: run ends differ"))?;
            // interval route for |(b-1) x' - P_j/b^n_j| < (b-1) b^-n_{j+1}
            let last = rep.runs.last().map(|r| r.n_next).unwrap_or(0);
            let bits = ((k + last + 16) as f64 * (base as f64).log2()) as u32 + 64;
            let b = BigInt::from(base);
            let bk = num_traits::pow(b.clone(), k);
            let head = d[..k].iter().fold(BigInt::zero(), |acc, &a| acc * &b + a);
            let xs = x.enclosure(bits).mul(&BigReal::from_int(bk, bits)).sub(&BigReal::from_int(head, bits)).mul_int(base as i64 - 1);
            for r in &rep.runs {
                ensure(!(&r.p % &b).is_zero(), || format!("{name} base {base}: b divides P_{}", r.j))?;
                let q = Rational::new(r.p.clone(), num_traits::pow(b.clone(), r.n_j));
                let e = Rational::new(b.clone() - 1, num_traits::pow(b.clone(), r.n_next));
                let dist = xs.sub(&BigReal::from_rational(&q, bits)).abs();
                ensure(dist.certainly_lt(&BigReal::from_rational(&e, bits)), || {
                    format!("{name} base {base}: run {} not confirmed", r.j)
                })?;
            }
            // doubling beyond U on the runs of x itself
            let lv = liouville_threshold(&x, base, RunLimit::MaxN(2000), &ctx).map_err(err)?;
            let u = liouville_u(&x, base);
            ensure((lv.u_f64 / u - 1.0).abs() < 1e-9, || format!("{name} base {base}: U {} vs oracle {u}", lv.u_f64))?;
            ensure(lv.violations.is_empty(), || format!("{name} base {base}: violations {:?}", lv.violations))?;
            let own = run_ends(d);
            let mut checked = 0;
            for (i, &n) in own.iter().enumerate().filter(|&(_, &n)| n <= 2000 && n as f64 >= u) {
                let next = own.get(i + 1).copied().unwrap_or(usize::MAX);
                ensure(next <= 2 * deg * n, || format!("{name} base {base}: n_j = {n}, next run end beyond 2d n_j"))?;
                checked += 1;
            }
            parts.push(format!("{name} b={base}: {} runs, U = {u:.2}, {checked} doubling pairs", rep.runs.len()));
        }
    }
    Ok(parts.join("; "))
}

fn small_primes_valuation(mut n: BigInt) -> Vec<(u64, u32)> {
    n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p * p) <= n {
        let mut e = 0;
        while (&n % p).is_zero() {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n.to_u64().unwrap(), 1));
    }
    out
}

fn heights() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ctx = EvalContext::default();
    for _ in 0..1000 {
        let num = rng.gen_range(1..=1_000_000i64) * if rng.gen_bool(0.5) { -1 } else { 1 };
        let den = rng.gen_range(1..=1_000_000i64);
        let q = rat(num, den);
        let prod = product_formula_check(&q).map_err(err)?;
        ensure(prod.is_one(), || format!("{q}: library product {prod}"))?;
        // |q| times p^(-v_p(q)) over the primes of numerator and denominator
        let mut own = q.abs();
        for (p, e) in small_primes_valuation(q.numer().clone()) {
            own /= Rational::from_integer(num_traits::pow(BigInt::from(p), e as usize));
        }
        for (p, e) in small_primes_valuation(q.denom().clone()) {
            own *= Rational::from_integer(num_traits::pow(BigInt::from(p), e as usize));
        }
        ensure(own.is_one(), || format!("{q}: oracle product {own}"))?;
    }
    let mut fractions = 0;
    while fractions < 200 {
        let (p, q) = (rng.gen_range(-100_000i64..=100_000), rng.gen_range(1..=100_000i64));
        if p == 0 || p.gcd(&q) != 1 {
            continue;
        }
        let h = height(&AlgebraicReal::from_rational(&rat(p, q)), &ctx).map_err(err)?;
        let want = Rational::from_integer(p.abs().max(q).into());
        ensure(h.lo().to_rational() == want && h.hi().to_rational() == want, || format!("H({p}/{q}) is not exactly {want}"))?;
        fractions += 1;
    }
    let h = height(&AlgebraicReal::parse("[-2,0,1] 1 2").unwrap(), &ctx).map_err(err)?;
    // sqrt 2 to 200 bits by an integer root
    let oracle = Rational::new(BigInt::from((BigUint::from(2u32) << 400u32).sqrt()), BigInt::one() << 200u32);
    let diff = (h.mid().to_rational() - &oracle).abs();
    let tol = rat(1, 1_000_000_000_000);
    ensure(diff < tol && h.width().to_rational() < tol, || format!("H(sqrt 2) = {} off by {}", h.to_sci(20), diff.to_f64().unwrap_or(f64::NAN)))?;
    Ok(format!("1000 products, 200 rational heights exact; H(sqrt 2) = {}", h.to_sci(20)))
}

/// Fixed point with FX fractional bits, about 120 decimal digits.
const FX: u32 = 400;

fn fx_int(n: i64) -> BigInt {
    BigInt::from(n) << FX
}

fn fx_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FX
}

fn fx_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << FX) / b
}

fn atanh(t: &BigInt) -> BigInt {
    let t2 = fx_mul(t, t);
    let mut term = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term / k;
        term = fx_mul(&term, &t2);
        k += 2;
    }
    sum
}

fn fx_ln(x: &BigInt) -> BigInt {
    assert!(x.is_positive());
    let one = fx_int(1);
    let ln2 = atanh(&fx_div(&one, &fx_int(3))) * 2;
    let k = x.bits() as i64 - 1 - FX as i64;
    let m = if k >= 0 { x >> k as u32 } else { x << (-k) as u32 };
    atanh(&fx_div(&(&m - &one), &(&m + &one))) * 2 + ln2 * k
}

fn fx_f64(x: &BigInt) -> f64 {
    let shift = (x.bits() as i64 - 60).max(0);
    (x >> shift as u32).to_f64().unwrap() * 2f64.powi(shift as i32 - FX as i32)
}

fn rel_close(lib: &BigReal, oracle: &BigInt, what: &str) -> Result<String, String> {
    let o = fx_f64(oracle);
    let l = lib.mid().to_rational().to_f64().unwrap();
    ensure(((l - o) / o).abs() <= 1e-10, || format!("{what}: {l} vs oracle {o}"))?;
    Ok(format!("{what} = {}", lib.to_sci(12)))
}

fn strictly_increasing(vals: &[BigReal], what: &str) -> Result<(), String> {
    for (i, w) in vals.windows(2).enumerate() {
        ensure(w[0].certainly_lt(&w[1]), || format!("{what}: not increasing at step {i}"))?;
    }
    Ok(())
}

fn bound_formulas() -> Check {
    let bd = Bounds::new(EvalContext::default());
    let one = rat(1, 1);
    let ln6 = fx_ln(&fx_int(6));
    let pow2 = |k: u32| BigInt::one() << k;
    let mut parts = Vec::new();
    let t2 = fx_mul(&ln6, &fx_ln(&ln6)) * pow2(25);
    parts.push(rel_close(&bd.t2(3, &one).map_err(err)?, &t2, "t2(3,1)")?);
    let count = fx_mul(&ln6, &fx_ln(&(&ln6 * 2))) * pow2(35);
    parts.push(rel_close(&bd.ridout_subspace_count(1, &one).map_err(err)?, &count, "ridout_subspace_count(1,1)")?);
    parts.push(rel_close(&bd.ridout_count_half_eps(1, &rat(2, 1)).map_err(err)?, &count, "B(1,2)")?);
    let floor: BigInt = (fx_ln(&fx_int(4)) * 25600) >> FX;
    let m = bd.aux_points_m(2, &one).map_err(err)?;
    ensure(floor == BigInt::from(35489) && m == floor.clone() + 1, || format!("m(2,1) = {m}, oracle floor term {floor}"))?;
    parts.push(format!("m(2,1) = 1 + {floor}"));

    // 20^3 grids for the three-parameter formulas, 20^2 for the others
    let inv = |k: i64| rat(1, k);
    let mut grid_points = 0;
    for n in 2..=21u32 {
        for r in 21..=40u64 {
            let v: Vec<BigReal> = (1..=20).map(|k| bd.t1(n, r, &inv(k))).collect::<Result<_, _>>().map_err(err)?;
            strictly_increasing(&v, &format!("t1 in 1/delta at n={n}, r={r}"))?;
            grid_points += v.len();
        }
    }
    for k in [1, 7, 20] {
        for r in [21u64, 30, 40] {
            let v: Vec<BigReal> = (2..=21).map(|n| bd.t1(n, r, &inv(k))).collect::<Result<_, _>>().map_err(err)?;
            strictly_increasing(&v, &format!("t1 in n at r={r}, delta=1/{k}"))?;
        }
        for n in [2u32, 9, 21] {
            let v: Vec<BigReal> = (21..=40).map(|r| bd.t1(n, r, &inv(k))).collect::<Result<_, _>>().map_err(err)?;
            strictly_increasing(&v, &format!("t1 in r at n={n}, delta=1/{k}"))?;
        }
    }
    for n in 2..=21u32 {
        for big_r in 2..=21u64 {
            let v: Vec<BigReal> =
                (1..=20).map(|k| bd.system_subspace_count(n, big_r, 1, &inv(k))).collect::<Result<_, _>>().map_err(err)?;
            strictly_increasing(&v, &format!("system_subspace_count in 1/eps at n={n}, R={big_r}"))?;
            grid_points += v.len();
        }
    }
    for k in [1, 7, 20] {
        for n in [2u32, 9, 21] {
            let v: Vec<BigReal> =
                (2..=21).map(|big_r| bd.system_subspace_count(n, big_r, 1, &inv(k))).collect::<Result<_, _>>().map_err(err)?;
            strictly_increasing(&v, &format!("system_subspace_count in R at n={n}"))?;
            let v: Vec<BigReal> =
                (1..=20).map(|big_d| bd.system_subspace_count(n, 2, big_d, &inv(k))).collect::<Result<_, _>>().map_err(err)?;
            strictly_increasing(&v, &format!("system_subspace_count in D at n={n}"))?;
        }
        let v: Vec<BigReal> = (2..=21).map(|n| bd.system_subspace_count(n, 5, 1, &inv(k))).collect::<Result<_, _>>().map_err(err)?;
        strictly_increasing(&v, "system_subspace_count in n")?;
    }
    type Two = fn(&Bounds, u64, &Rational) -> digitlab::Result<BigReal>;
    let two: [(&str, u64, Two); 4] = [
        ("t2", 2, Bounds::t2),
        ("ridout_subspace_count", 1, Bounds::ridout_subspace_count),
        ("B", 1, Bounds::ridout_count_half_eps),
        ("large_ratio_count", 1, Bounds::large_ratio_count),
    ];
    for (name, lo, f) in &two {
        let table: Vec<Vec<BigReal>> = (*lo..lo + 20)
            .map(|a| (1..=20).map(|k| f(&bd, a, &inv(k))).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(err)?;
        for (i, row) in table.iter().enumerate() {
            strictly_increasing(row, &format!("{name} in 1/eps at row {i}"))?;
        }
        for k in 0..20 {
            let col: Vec<BigReal> = table.iter().map(|row| row[k].clone()).collect();
            strictly_increasing(&col, &format!("{name} in its first parameter at column {k}"))?;
        }
        grid_points += 400;
    }
    let table: Vec<Vec<BigInt>> = (2..=21u64)
        .map(|r| (1..=20).map(|k| bd.aux_points_m(r, &inv(k))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for i in 0..20 {
        for j in 0..20 {
            ensure(i == 19 || table[i][j] < table[i + 1][j], || format!("m not increasing in r at {i},{j}"))?;
            ensure(j == 19 || table[i][j] < table[i][j + 1], || format!("m not increasing in 1/delta at {i},{j}"))?;
        }
    }
    grid_points += 400;
    parts.push(format!("monotone on {grid_points} grid points"));
    Ok(parts.join(", "))
}

fn gap_principle() -> Check {
    let rep = gap_principle_suite(8, 100, &rat(1, 2), &rat(17, 1), 8, 1000).map_err(err)?;
    ensure(rep.passed && rep.failures.is_empty(), || format!("failures on systems {:?}", rep.failures))?;
    Ok(format!("100 systems, {} with small points, all collinear per window", rep.with_points))
}

fn index_and_roth() -> Check {
    let one_zero = (rat(1, 1), rat(0, 1));
    let det = index(&MultiHomPolynomial::determinant(), &[1, 1], &[one_zero.clone(), one_zero]).map_err(err)?;
    ensure(det == rat(1, 1), || format!("index of the determinant is {det}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    while done < 100 {
        let m = rng.gen_range(1..=3);
        let p = random_polynomial(&mut rng, m, 4);
        let pts = random_points(&mut rng, m);
        if p.is_zero() {
            continue;
        }
        let r = p.degrees().to_vec();
        let (a, b) = (index(&p, &r, &pts).map_err(err)?, index_brute(&p, &r, &pts).map_err(err)?);
        ensure(a == b, || format!("polynomial {done}: index {a} vs brute force {b}"))?;
        done += 1;
    }
    let ctx = EvalContext::default();
    let mut idx = Vec::new();
    for k in 0..3 {
        let (p, r, pts, theta) = constructed_roth_instance(k);
        let rep = roth_lemma_check(&p, &r, &pts, &theta, &ctx).map_err(err)?;
        ensure(rep.hypotheses_hold && rep.conclusion_holds == Some(true), || format!("instance {k}: {:?}", rep.messages))?;
        let brute = index_brute(&p, &r, &pts).map_err(err)?;
        ensure(brute < Rational::from_integer(p.m().into()) * &theta, || format!("instance {k}: brute index {brute}"))?;
        idx.push(brute.to_string());
    }
    Ok(format!("determinant index 1, 100 random polynomials agree, Roth instances with index {}", idx.join(", ")))
}

/// Largest k with k^5 <= j^4, i.e. floor(j^0.8).
fn floor_pow_08(j: u64) -> u32 {
    let t = (j as u128).pow(4);
    let mut k = (j as f64).powf(0.8) as u128;
    while k.pow(5) > t {
        k -= 1;
    }
    while (k + 1).pow(5) <= t {
        k += 1;
    }
    k as u32
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}

fn gap_series_consistency() -> Check {
    let n_digits = 1usize << 20;
    let rep = gap_series_changes(&rat(4, 5), 2, n_digits, 1.0, &[2, 3, 5, 10], &EvalContext::default()).map_err(err)?;
    let fit = rep.fit.clone().ok_or("no fit")?;
    // exact digits: sum of 2^(W - 2^floor(j^0.8)) over the terms that reach
    // W = N + 64 bits, so repeated exponents carry as they should
    let w = n_digits + 64;
    let mut sum = BigUint::zero();
    for j in 1u64.. {
        let e = 1usize << floor_pow_08(j);
        if e > w {
            break;
        }
        sum += BigUint::one() << (w - e);
    }
    let bits: Vec<u8> = (1..=n_digits).map(|i| sum.bit((w - i) as u64) as u8).collect();
    let ends = run_ends(&bits);
    let mut pts = Vec::new();
    for row in &rep.rows {
        let count = ends.iter().filter(|&&e| e <= row.n).count() as u64;
        ensure(row.nbdc == count, || format!("nbdc({}) = {} but the digit oracle gives {count}", row.n, row.nbdc))?;
        pts.push(((row.n as f64).ln().ln(), (count as f64).ln()));
    }
    let oracle = slope(&pts);
    ensure((fit.slope - 1.25).abs() <= 0.15, || format!("fitted slope {:.3} outside 1.25 +- 0.15", fit.slope))?;
    ensure(rep.asymptotically_below && fit.slope < 1.5, || "not below the exponent 3/2".to_string())?;
    Ok(format!("slope {:.3} (oracle digits {oracle:.3}) < 3/2 over {} grid points", fit.slope, rep.rows.len()))
}

fn ridout_consistency() -> Check {
    let ctx = EvalContext::default();
    let xi = AlgebraicReal::parse("[-2,0,1] 1 2").unwrap();
    let rep = ridout_solutions(&xi, &PlaceExponents::archimedean(rat(5, 2)), 10_000, &ctx).map_err(err)?;
    let bound = Bounds::new(ctx).ridout_subspace_count(2, &rat(1, 2)).map_err(err)?;
    ensure(rep.within_bound && BigReal::from_int(rep.group_count as i64, 64).certainly_le(&bound), || {
        format!("{} groups against bound {}", rep.group_count, bound.to_sci(6))
    })?;
    ensure(rep.undecided.is_empty(), || format!("undecided points {:?}", rep.undecided))?;
    // for y >= 2, x/y is a convergent of sqrt 2 exactly when x^2 - 2 y^2 = +-1;
    // y = 1 admits the two integers next to sqrt 2
    for s in &rep.solutions {
        let g = s.x.unsigned_abs().gcd(&s.y);
        let (x, y) = ((s.x / g as i64) as i128, (s.y / g) as i128);
        let ok = if y == 1 { x == 1 || x == 2 } else { (x * x - 2 * y * y).abs() == 1 };
        ensure(ok, || format!("{}/{} is not a convergent", s.x, s.y))?;
    }
    ensure(rep.convergents.passed(), || "library convergent check failed".to_string())?;
    Ok(format!("{} solutions, all convergents; {} groups <= {}", rep.solutions.len(), rep.group_count, bound.to_sci(6)))
}

fn main() {
    let results = [
        run(1, "digits of sqrt(2) - 1 against integer roots", 1.0, digits_oracle),
        run(2, "fast complexity profile equals direct counting", 30.0, complexity_equivalence),
        run(3, "p(n) >= n + 1 for n <= 100", 10.0, morse_hedlund),
        run(4, "best repetitions and periodic approximants", 120.0, repetition_machinery),
        run(5, "run approximants and the doubling check", 120.0, run_inequalities),
        run(6, "product formula and heights", 10.0, heights),
        run(7, "bound formulas and monotonicity", 30.0, bound_formulas),
        run(8, "gap principle suite", 300.0, gap_principle),
        run(9, "index and Roth's lemma", 60.0, index_and_roth),
        run(10, "digit changes of the 0.8 gap series", 120.0, gap_series_consistency),
        run(11, "Ridout solutions for sqrt 2", 60.0, ridout_consistency),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
