//! Self-checks over small instances: every construction is re-derived and
//! compared against an independent count or oracle.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::count::{
    count_image, count_translate, ehrhart_value, CountConfig, Method, TranslateCounter,
    TranslationFamily,
};
use crate::ehrhart::to_dilation_family;
use crate::error::{Error, Result};
use crate::fluctuation::{check_identity, product_identity_expansion, realize_sequence};
use crate::geometry::{Point, Polytope};
use crate::json::{family_from_value, polytope_to_json};
use crate::qde::{
    build_gadget, build_trapezoid, qde_oracle, real_min_scan, solve_translation_min, Mode,
    QdeInstance, TrapezoidKind,
};
use crate::rational::{format_rational, int, Rational};

pub const SUITES: [&str; 6] = ["trapezoids", "gadget", "real", "identity", "realize", "transform"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest β for the gadget suite.
    pub beta_max: u64,
    /// Largest β for the real-translation, hull-membership and transform checks.
    pub beta_max_heavy: u64,
    /// Largest `N` in the trapezoid suite.
    pub trapezoid_n_max: u64,
    pub realize_samples: usize,
    pub realize_len_max: usize,
    pub realize_value_max: u64,
    pub random_families: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            beta_max: 4,
            beta_max_heavy: 3,
            trapezoid_n_max: 24,
            realize_samples: 5,
            realize_len_max: 6,
            realize_value_max: 10,
            random_families: 5,
            seed: 2024,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub suite: String,
    pub checks: u64,
    /// First counterexample found, serialized.
    pub failure: Option<Value>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "checks": self.checks,
            "passed": self.passed(),
            "counterexample": self.failure,
        })
    }
}

/// Checks counted so far, or the first failure.
struct Tally {
    suite: &'static str,
    checks: u64,
}

type Step = std::result::Result<(), Value>;

/// Returns the counterexample from the enclosing check function.
macro_rules! step {
    ($e:expr) => {
        if let Err(v) = $e {
            return Ok(Err(v));
        }
    };
}

impl Tally {
    fn new(suite: &'static str) -> Self {
        Tally { suite, checks: 0 }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> Value) -> Step {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(detail())
        }
    }

    fn finish(self, r: Step) -> SuiteOutcome {
        SuiteOutcome {
            suite: self.suite.to_string(),
            checks: self.checks,
            failure: r.err(),
        }
    }
}

/// Contract failures inside the library become counterexamples; resource
/// limits and bad input stay errors.
fn lift<T>(r: Result<T>, context: impl FnOnce() -> Value) -> Result<std::result::Result<T, Value>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ (Error::ContractViolation(_) | Error::ConstructionBug(_) | Error::VerificationExhausted(_))) => {
            let mut c = context();
            c["error"] = json!(e.to_string());
            Ok(Err(c))
        }
        Err(e) => Err(e),
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteOutcome> {
    match name {
        "trapezoids" => verify_trapezoids(opts.trapezoid_n_max),
        "gadget" => verify_gadgets(opts.beta_max, opts.beta_max_heavy),
        "real" => verify_real(opts.beta_max_heavy),
        "identity" => verify_identity(2..=5, opts.seed),
        "realize" => verify_realize(opts),
        "transform" => verify_transform(opts.beta_max_heavy, opts.random_families, opts.seed),
        _ => Err(Error::invalid(format!(
            "unknown suite {name:?}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

fn family(p: Polytope, n: u64) -> Result<TranslationFamily> {
    let d = p.dim();
    TranslationFamily::new(p, Point::axis(d, 0, Rational::one()), n)
}

fn trapezoid_counts(kind: TrapezoidKind, n: u64, eps: &Rational) -> Result<Vec<u64>> {
    let f = family(build_trapezoid(kind, n, Some(eps))?, n)?;
    let c = TranslateCounter::for_family(&f, CountConfig::default())?;
    (0..n as i64).map(|t| c.count_t(t)).collect()
}

/// `F_A..F_D` against their closed forms for every listed parameter and `t`.
pub fn verify_trapezoids(n_max: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("trapezoids");
    let r = trapezoids_inner(&mut tally, n_max)?;
    Ok(tally.finish(r))
}

fn trapezoids_inner(tally: &mut Tally, n_max: u64) -> Result<Step> {
    for n in 2..=n_max {
        let ni = n as i128;
        let eps = Rational::one() / int(4 * n * n);
        let mut cases: Vec<(TrapezoidKind, Box<dyn Fn(i128) -> i128>)> = Vec::new();
        for p in 1..=8i128 {
            for q in 1..=8i128 {
                cases.push((TrapezoidKind::A { p, q }, Box::new(move |t| p + q * t)));
                let p_prime = q * ni + p;
                cases.push((TrapezoidKind::B { p_prime, q }, Box::new(move |t| p_prime - q * t)));
            }
        }
        for beta in (1..=ni).filter(|b| ni % b == 0) {
            let gamma = ni / beta;
            for r in 1..=8i128 {
                cases.push((TrapezoidKind::C { r, beta }, Box::new(move |t| r + t / beta)));
                let r_prime = gamma + r;
                cases.push((TrapezoidKind::D { r_prime, beta }, Box::new(move |t| r_prime - t / beta)));
            }
        }
        for (kind, want) in cases {
            let counts = trapezoid_counts(kind, n, &eps)?;
            for (t, c) in counts.iter().enumerate() {
                let w = want(t as i128);
                if let Err(v) = tally.check(*c as i128 == w, || {
                    json!({"kind": format!("{kind:?}"), "N": n, "t": t, "count": c, "expected": w.to_string()})
                }) {
                    return Ok(Err(v));
                }
            }
        }
    }
    Ok(Ok(()))
}

fn instances(beta_max: u64) -> impl Iterator<Item = QdeInstance> {
    (2..=beta_max).flat_map(|b| {
        (0..b).flat_map(move |a| (1..b).map(move |g| QdeInstance::new(a, b, g).expect("valid by range")))
    })
}

fn instance_json(i: &QdeInstance) -> Value {
    json!({"alpha": i.alpha, "beta": i.beta, "gamma": i.gamma})
}

/// Translation minima against the oracle in rational and integer mode,
/// hull vertex counts, and hull membership against the piece sum.
pub fn verify_gadgets(beta_max: u64, hull_beta_max: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("gadget");
    let r = gadgets_inner(&mut tally, beta_max, hull_beta_max)?;
    Ok(tally.finish(r))
}

fn gadgets_inner(tally: &mut Tally, beta_max: u64, hull_beta_max: u64) -> Result<Step> {
    for inst in instances(beta_max) {
        let oracle = qde_oracle(&inst);
        for mode in [Mode::Rational, Mode::Integer] {
            let g = build_gadget(&inst, mode)?;
            let ctx = || json!({"instance": instance_json(&inst), "mode": mode.name()});
            let m = match lift(solve_translation_min(&g), ctx)? {
                Ok(m) => m,
                Err(v) => return Ok(Err(v)),
            };
            let want = g.big_l + oracle.min_value;
            step!(tally.check(m.min_count as i128 == want && m.qde_feasible == oracle.feasible, || {
                json!({"instance": instance_json(&inst), "mode": mode.name(),
                       "min": m.min_count, "expected": want.to_string(),
                       "feasible": m.qde_feasible, "oracleFeasible": oracle.feasible})
            }));
            if mode == Mode::Rational {
                step!(tally.check(g.hull.vertex_count() == 60, || {
                    json!({"instance": instance_json(&inst), "vertexCount": g.hull.vertex_count(), "expected": 60})
                }));
            }
            if mode == Mode::Rational && inst.beta <= hull_beta_max {
                if let Err(v) = hull_matches_pieces(tally, &g.family, &inst)? {
                    return Ok(Err(v));
                }
            }
        }
    }
    Ok(Ok(()))
}

fn hull_matches_pieces(tally: &mut Tally, f: &TranslationFamily, inst: &QdeInstance) -> Result<Step> {
    let cfg = CountConfig { cell_guard: u128::MAX };
    for t in 0..f.denominator as i64 {
        let w = f.shift(t);
        let hull = count_image(&f.base, &Rational::one(), Some(w.coords()), Method::Hull, &cfg)?;
        let parts: u64 = f
            .base
            .pieces()
            .expect("gadget hull has pieces")
            .iter()
            .map(|pc| count_image(&pc.polytope, &Rational::one(), Some(w.coords()), Method::Auto, &cfg))
            .sum::<Result<u64>>()?;
        step!(tally.check(hull == parts, || {
            json!({"instance": instance_json(inst), "t": t, "hullCount": hull, "pieceSum": parts})
        }));
    }
    Ok(Ok(()))
}

/// Real-translation grid scans with step `δ/8`.
pub fn verify_real(beta_max: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("real");
    let r = real_inner(&mut tally, beta_max)?;
    Ok(tally.finish(r))
}

fn real_inner(tally: &mut Tally, beta_max: u64) -> Result<Step> {
    for inst in instances(beta_max) {
        let g = build_gadget(&inst, Mode::Real)?;
        step!(tally.check(g.hull.vertex_count() == 64, || {
            json!({"instance": instance_json(&inst), "vertexCount": g.hull.vertex_count(), "expected": 64})
        }));
        let step = g.delta.clone().expect("real gadget") / int(8);
        let scan = match lift(real_min_scan(&g, &step), || json!({"instance": instance_json(&inst)}))? {
            Ok(s) => s,
            Err(v) => return Ok(Err(v)),
        };
        let rational = build_gadget(&inst, Mode::Rational)?;
        let rmin = match lift(solve_translation_min(&rational), || json!({"instance": instance_json(&inst)}))? {
            Ok(m) => m.min_count,
            Err(v) => return Ok(Err(v)),
        };
        step!(tally.check(scan.min_count == rmin, || {
            json!({"instance": instance_json(&inst), "gridMin": scan.min_count,
                   "argminLambda": format_rational(&scan.argmin_lambda), "rationalMin": rmin})
        }));
    }
    Ok(Ok(()))
}

/// The product identity for each `n`, at 100 assignments with entries in `[-50, 50]`.
pub fn verify_identity(ns: impl IntoIterator<Item = usize>, seed: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("identity");
    let mut r = Ok(());
    for n in ns {
        let e = match lift(product_identity_expansion(n), || json!({"n": n}))? {
            Ok(e) => e,
            Err(v) => {
                r = Err(v);
                break;
            }
        };
        // A second, independent sample on top of the construction's own check.
        let res = lift(check_identity(&e, 100, 50, seed.wrapping_add(n as u64)), || json!({"n": n}))?;
        if let Err(v) = tally.check(res.is_ok() && e.summands.len() == (1 << n) - 1, || {
            res.clone().err().unwrap_or_else(|| json!({"n": n, "summands": e.summands.len()}))
        }) {
            r = Err(v);
            break;
        }
    }
    Ok(tally.finish(r))
}

fn ceil_log2(r: usize) -> u32 {
    usize::BITS - (r.max(1) - 1).leading_zeros()
}

/// Random sequences realized and recounted.
pub fn verify_realize(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut tally = Tally::new("realize");
    let mut r = Ok(());
    for _ in 0..opts.realize_samples {
        let len = rng.gen_range(1..=opts.realize_len_max);
        let c: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=opts.realize_value_max)).collect();
        match check_realization(&mut tally, &c)? {
            Ok(()) => {}
            Err(v) => {
                r = Err(v);
                break;
            }
        }
    }
    Ok(tally.finish(r))
}

/// One sequence: values by direct dilate counts, then the size bounds with
/// `r = 2·len` terms and `n = 2` factors after normalization.
fn check_realization(tally: &mut Tally, c: &[u64]) -> Result<Step> {
    let res = match lift(realize_sequence(c), || json!({"sequence": c}))? {
        Ok(r) => r,
        Err(v) => return Ok(Err(v)),
    };
    for (i, ci) in c.iter().enumerate() {
        let got = ehrhart_value(&res.q, res.m + i as u64)?;
        let want = &res.k + BigInt::from(*ci);
        step!(tally.check(BigInt::from(got) == want, || {
            json!({"sequence": c, "i": i, "M": res.m.to_string(), "count": got.to_string(), "expected": want.to_string()})
        }));
    }
    let (r, n) = (2 * c.len(), 2u32);
    let vbound = r * 4usize.pow(n + 1);
    step!(tally.check(res.vertex_count <= vbound, || {
        json!({"sequence": c, "vertexCount": res.vertex_count, "bound": vbound})
    }));
    let dbound = 2 * n as usize + 2 + ceil_log2(r) as usize;
    step!(tally.check(res.dim <= dbound && res.q.dim() == res.dim, || {
        json!({"sequence": c, "dim": res.dim, "bound": dbound})
    }));
    Ok(Ok(()))
}

/// Sequences checked exactly as the realize suite does.
pub fn verify_sequences(seqs: &[Vec<u64>]) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("realize");
    let mut r = Ok(());
    for c in seqs {
        if let Err(v) = check_realization(&mut tally, c)? {
            r = Err(v);
            break;
        }
    }
    Ok(tally.finish(r))
}

/// A random polytope in 1 to 3 dimensions with one integer vertex, moved
/// by a random integer direction over a period `N ≤ 4`.
pub fn random_family(rng: &mut ChaCha8Rng) -> Result<TranslationFamily> {
    let d = rng.gen_range(1..=3usize);
    let mut pts = vec![Point::new((0..d).map(|_| int(rng.gen_range(-1i64..=1))).collect())];
    for _ in 0..rng.gen_range(1..=d + 1) {
        pts.push(Point::new(
            (0..d)
                .map(|_| {
                    let den = rng.gen_range(1i64..=3);
                    Rational::new(rng.gen_range(-2 * den..=2 * den).into(), den.into())
                })
                .collect(),
        ));
    }
    let p = Polytope::from_points(pts)?;
    let mut dir: Vec<i64> = (0..d).map(|_| rng.gen_range(-1i64..=1)).collect();
    if dir.iter().all(|&x| x == 0) {
        dir[0] = 1;
    }
    TranslationFamily::new(p, Point::from_ints(&dir), rng.gen_range(1..=4))
}

/// Dilation families built from gadget families and random small families,
/// each recounted for every `t` in the period.
pub fn verify_transform(beta_max: u64, random: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("transform");
    let mut fams: Vec<(Value, TranslationFamily)> = Vec::new();
    for inst in instances(beta_max) {
        fams.push((json!({"instance": instance_json(&inst)}), build_gadget(&inst, Mode::Rational)?.family));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random {
        let f = random_family(&mut rng)?;
        fams.push((json!({"random": k, "polytope": polytope_to_json(&f.base)}), f));
    }
    let mut r = Ok(());
    for (ctx, f) in fams {
        if let Err(v) = check_transform(&mut tally, &f, ctx)? {
            r = Err(v);
            break;
        }
    }
    Ok(tally.finish(r))
}

fn check_transform(tally: &mut Tally, f: &TranslationFamily, ctx: Value) -> Result<Step> {
    let d = match lift(to_dilation_family(f), || ctx.clone())? {
        Ok(d) => d,
        Err(v) => return Ok(Err(v)),
    };
    for t in 0..f.denominator {
        let direct = count_translate(f, t as i64)?;
        let dil = ehrhart_value(&d.q, d.m + t)?;
        step!(tally.check(direct == dil, || {
            let mut c = ctx.clone();
            c["t"] = json!(t);
            c["M"] = json!(d.m.to_string());
            c["translateCount"] = json!(direct);
            c["dilateCount"] = json!(dil);
            c
        }));
    }
    Ok(Ok(()))
}

/// A stored family with its expected counts, `{"family": …, "expected": [...]}`.
/// Used as a negative control: a tampered expectation must fail.
pub fn verify_fixture(doc: &Value) -> Result<SuiteOutcome> {
    let f = family_from_value(doc)?;
    let expected = doc
        .get("expected")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::invalid("fixture needs an \"expected\" array"))?;
    let mut tally = Tally::new("fixture");
    let mut r = Ok(());
    for (t, e) in expected.iter().enumerate() {
        let want: u64 = match e {
            Value::String(s) => s.parse().map_err(|_| Error::invalid(format!("bad expected count {s:?}")))?,
            Value::Number(n) => n.as_u64().ok_or_else(|| Error::invalid("bad expected count"))?,
            _ => return Err(Error::invalid("expected counts must be integers")),
        };
        let got = count_translate(&f, t as i64)?;
        if let Err(v) = tally.check(got == want, || json!({"t": t, "count": got, "expected": want})) {
            r = Err(v);
            break;
        }
    }
    Ok(tally.finish(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(verify_trapezoids(5).unwrap().passed());
        assert!(verify_identity(2..=4, 7).unwrap().passed());
        assert!(verify_gadgets(2, 2).unwrap().passed());
    }

    #[test]
    fn corrupted_fixture_fails() {
        let f = family(Polytope::cuboid(&[(int(0), Rational::new(1.into(), 2.into()))]).unwrap(), 2).unwrap();
        let mut doc = json!({"family": crate::json::family_to_json(&f), "expected": [1, 1]});
        assert!(verify_fixture(&doc).unwrap().passed());
        doc["expected"] = json!([1, 2]);
        let out = verify_fixture(&doc).unwrap();
        assert!(!out.passed());
        assert_eq!(out.failure.unwrap()["t"], json!(1));
    }
}
