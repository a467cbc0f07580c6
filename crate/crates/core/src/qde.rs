//! Translation gadgets for the quadratic congruence problem
//! `∃ u < γ : u² ≡ α (mod β)`.
//!
//! With `N = βγ`, write `t = βu + v` and `f(u, v) = (u² − α − βv)²`. The gadget
//! is a polytope `W ⊂ R^6` with `|W + t·e₁/N| = 𝕃 + f(⌊t/β⌋, t mod β)`, built
//! as a tagged hull of four product polytopes, one per positive term of
//! `𝕃 + f`. The real variant adds a parallelogram that swamps every
//! translate not close to a multiple of `1/N`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::count::{CountConfig, TranslateCounter, TranslationFamily};
use crate::error::{Error, Result};
use crate::geometry::{
    embed_with_tags, product_polytope, tagged_hull, translate, Halfspace, HalfspaceSystem, Point,
    Polytope, Tag, TrapezoidSpec,
};
use crate::rational::{floor, int, Rational};

/// Keeps every constant comfortably inside `i128`.
const MAX_BETA: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QdeInstance {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

impl QdeInstance {
    pub fn new(alpha: u64, beta: u64, gamma: u64) -> Result<Self> {
        if beta < 2 {
            return Err(Error::invalid(format!("beta must be at least 2 (got {beta})")));
        }
        if alpha >= beta {
            return Err(Error::invalid(format!(
                "alpha must be below beta (alpha={alpha}, beta={beta})"
            )));
        }
        if gamma < 1 || gamma >= beta {
            return Err(Error::invalid(format!(
                "gamma must satisfy 1 <= gamma < beta (gamma={gamma}, beta={beta})"
            )));
        }
        if beta > MAX_BETA {
            return Err(Error::Unsupported(format!("beta above {MAX_BETA}")));
        }
        Ok(QdeInstance { alpha, beta, gamma })
    }

    pub fn n(&self) -> u64 {
        self.beta * self.gamma
    }

    /// `f(u, v) = (u² − α − βv)²`.
    pub fn f(&self, u: u64, v: u64) -> i128 {
        let d = (u as i128) * (u as i128) - self.alpha as i128 - (self.beta as i128) * (v as i128);
        d * d
    }

    /// `𝕃 = 2β(β²+β)(α+βN) + 1`: the least value keeping the last term positive.
    pub fn big_l(&self) -> i128 {
        let (a, b, n) = (self.alpha as i128, self.beta as i128, self.n() as i128);
        2 * b * (b * b + b) * (a + b * n) + 1
    }

    /// `𝕂 = 𝕃 + (2β²+β)² + 1`, strictly above every value of `g`.
    pub fn big_k(&self) -> i128 {
        let b = self.beta as i128;
        self.big_l() + (2 * b * b + b).pow(2) + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub min_value: i128,
    pub argmin: (u64, u64),
    pub feasible: bool,
}

/// Minimum of `f` over `[0, γ) × [0, β)`, first minimizer in `(u, v)` order.
pub fn qde_oracle(inst: &QdeInstance) -> OracleResult {
    let mut best = (i128::MAX, (0, 0));
    for u in 0..inst.gamma {
        for v in 0..inst.beta {
            let f = inst.f(u, v);
            if f < best.0 {
                best = (f, (u, v));
            }
        }
    }
    OracleResult {
        min_value: best.0,
        argmin: best.1,
        feasible: best.0 == 0,
    }
}

/// `g(t) = 𝕃 + f(⌊t/β⌋, t mod β)` for `0 ≤ t < N`.
pub fn g_reference(inst: &QdeInstance, t: i64) -> Result<i128> {
    if t < 0 || t as u64 >= inst.n() {
        return Err(Error::invalid(format!("t={t} outside [0, {})", inst.n())));
    }
    let t = t as u64;
    Ok(inst.big_l() + inst.f(t / inst.beta, t % inst.beta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `p + qt`
    PlusLinear { p: i128, q: i128 },
    /// `p − qt`
    MinusLinear { p: i128, q: i128 },
    /// `r + ⌊t/β⌋`
    PlusFloor { r: i128, beta: i128 },
    /// `r − ⌊t/β⌋`
    MinusFloor { r: i128, beta: i128 },
}

impl Factor {
    pub fn eval(&self, t: i128) -> i128 {
        match *self {
            Factor::PlusLinear { p, q } => p + q * t,
            Factor::MinusLinear { p, q } => p - q * t,
            Factor::PlusFloor { r, beta } => r + t.div_euclid(beta),
            Factor::MinusFloor { r, beta } => r - t.div_euclid(beta),
        }
    }

    /// The trapezoid shape encoding this factor.
    pub fn kind(&self) -> TrapezoidKind {
        match *self {
            Factor::PlusLinear { p: 0, q } => TrapezoidKind::Triangle { q },
            Factor::PlusLinear { p, q } => TrapezoidKind::A { p, q },
            Factor::MinusLinear { p, q } => TrapezoidKind::B { p_prime: p, q },
            Factor::PlusFloor { r: 0, beta } => TrapezoidKind::TrianglePrime { beta },
            Factor::PlusFloor { r, beta } => TrapezoidKind::C { r, beta },
            Factor::MinusFloor { r, beta } => TrapezoidKind::D { r_prime: r, beta },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermFactorization {
    pub terms: Vec<Vec<Factor>>,
    pub big_l: i128,
}

impl TermFactorization {
    pub fn term_value(&self, i: usize, t: i128) -> i128 {
        self.terms[i].iter().map(|f| f.eval(t)).product()
    }

    pub fn total(&self, t: i128) -> i128 {
        (0..self.terms.len()).map(|i| self.term_value(i, t)).sum()
    }
}

/// The four terms
/// `T₁ = u²(β²+u)²`, `T₂ = (α+βt)²`, `T₃ = (β−u)(β²+β+u)(2α+2βt)`,
/// `T₄ = 𝕃 − 2β(β²+β)(α+βt)` with `u = ⌊t/β⌋`; checked to sum to `g`.
pub fn term_factorization(inst: &QdeInstance) -> Result<TermFactorization> {
    let (a, b) = (inst.alpha as i128, inst.beta as i128);
    let n = inst.n() as i128;
    let big_l = inst.big_l();
    let q4 = 2 * b * b * (b * b + b);
    let terms = vec![
        vec![
            Factor::PlusFloor { r: 0, beta: b },
            Factor::PlusFloor { r: 0, beta: b },
            Factor::PlusFloor { r: b * b, beta: b },
            Factor::PlusFloor { r: b * b, beta: b },
        ],
        vec![Factor::PlusLinear { p: a, q: b }, Factor::PlusLinear { p: a, q: b }],
        vec![
            Factor::MinusFloor { r: b, beta: b },
            Factor::PlusFloor { r: b * b + b, beta: b },
            Factor::PlusLinear { p: 2 * a, q: 2 * b },
        ],
        vec![Factor::MinusLinear {
            p: big_l - 2 * b * (b * b + b) * a,
            q: q4,
        }],
    ];
    let tf = TermFactorization { terms, big_l };
    for t in 0..n {
        let g = g_reference(inst, t as i64)?;
        if tf.total(t) != g {
            return Err(Error::ConstructionBug(format!(
                "terms sum to {} but g({t}) = {g}",
                tf.total(t)
            )));
        }
        let u = t / b;
        if tf.term_value(0, t) < 0 || (tf.term_value(0, t) == 0) != (u == 0) {
            return Err(Error::ConstructionBug(format!("T1({t}) has the wrong sign")));
        }
        // T2 and T3 vanish at t = 0 exactly when alpha = 0.
        for i in [1, 2] {
            let v = tf.term_value(i, t);
            if v < 0 || (v == 0 && !(a == 0 && t == 0)) {
                return Err(Error::ConstructionBug(format!("T{}({t}) = {v}", i + 1)));
            }
        }
        if tf.term_value(3, t) < 1 {
            return Err(Error::ConstructionBug(format!("T4({t}) < 1")));
        }
    }
    if let Factor::MinusLinear { p, q } = tf.terms[3][0] {
        if p <= q * n {
            return Err(Error::ConstructionBug("T4 factor has p' <= qN".into()));
        }
    }
    Ok(tf)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrapezoidKind {
    /// `p + qt`
    A { p: i128, q: i128 },
    /// `p' − qt`
    B { p_prime: i128, q: i128 },
    /// `r + ⌊t/β⌋`
    C { r: i128, beta: i128 },
    /// `r' − ⌊t/β⌋`
    D { r_prime: i128, beta: i128 },
    /// `qt`
    Triangle { q: i128 },
    /// `⌊t/β⌋`
    TrianglePrime { beta: i128 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Rational,
    Integer,
    Real,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Integer => "integer",
            Mode::Real => "real",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "rational" => Ok(Mode::Rational),
            "integer" => Ok(Mode::Integer),
            "real" => Ok(Mode::Real),
            _ => Err(Error::invalid(format!("unknown mode {s:?}"))),
        }
    }
}

fn q(v: i128) -> Rational {
    int(BigInt::from(v))
}

fn gamma_of(beta: i128, n: i128) -> Result<i128> {
    if beta < 1 || n % beta != 0 {
        return Err(Error::invalid(format!("beta={beta} must divide N={n}")));
    }
    Ok(n / beta)
}

/// Inequalities for one trapezoid. `eps = None` gives the integer-vertex
/// variant, whose `D` shape counts `r' − ⌊(t−1)/β⌋` (equal to the target when
/// `β ∤ t`) and whose other shapes are exact for `1 ≤ t < N`.
pub fn trapezoid_spec(kind: TrapezoidKind, n: u64, eps: Option<&Rational>) -> Result<TrapezoidSpec> {
    let n_i = n as i128;
    let nq = q(n_i);
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let half = Rational::new(1.into(), 2.into());
    let one = Rational::one();
    let zero = Rational::zero();
    let spec = |x_low: Rational, x_high: Rational, lo: (Rational, Rational), hi: (Rational, Rational)| {
        TrapezoidSpec {
            x_low,
            x_high,
            y_low_intercept: lo.0,
            y_low_slope: lo.1,
            y_high_intercept: hi.0,
            y_high_slope: hi.1,
        }
    };
    match kind {
        TrapezoidKind::A { p, q: qq } => {
            if p < 1 || qq < 1 {
                return Err(Error::invalid(format!("kind A requires p >= 1 and q >= 1 (p={p}, q={qq})")));
            }
            let s = q(qq) * &nq;
            Ok(match eps {
                Some(e) => spec(e.clone(), one, (&half - q(p), zero), (s.clone(), -s)),
                None => spec(zero.clone(), one.clone(), (one - q(p), zero), (s.clone(), -s)),
            })
        }
        TrapezoidKind::B { p_prime, q: qq } => {
            if qq < 1 || p_prime <= qq * n_i {
                return Err(Error::invalid(format!(
                    "kind B requires q >= 1 and p' > qN (p'={p_prime}, qN={})",
                    qq * n_i
                )));
            }
            let s = q(qq) * &nq;
            Ok(match eps {
                Some(e) => spec(e.clone(), one, (&s + e * int(2), -s), (q(p_prime), zero)),
                None => spec(zero.clone(), one.clone(), (&s + one, -s), (q(p_prime), zero)),
            })
        }
        TrapezoidKind::C { r, beta } => {
            let g = gamma_of(beta, n_i)?;
            if r < 1 {
                return Err(Error::invalid(format!("kind C requires r >= 1 (r={r})")));
            }
            Ok(match eps {
                Some(e) => spec(e.clone(), one, (&half - q(r), zero), (q(g), q(-g))),
                None => spec(zero.clone(), one.clone(), (one - q(r), zero), (q(g), q(-g))),
            })
        }
        TrapezoidKind::D { r_prime, beta } => {
            let g = gamma_of(beta, n_i)?;
            if r_prime <= g {
                return Err(Error::invalid(format!(
                    "kind D requires r' > gamma (r'={r_prime}, gamma={g})"
                )));
            }
            Ok(match eps {
                Some(e) => spec(e.clone(), one, (q(g) + e * int(2), q(-g)), (q(r_prime), zero)),
                None => spec(zero.clone(), one, (q(g), q(-g)), (q(r_prime), zero)),
            })
        }
        TrapezoidKind::Triangle { q: qq } => {
            if qq < 1 {
                return Err(Error::invalid(format!("triangle requires q >= 1 (q={qq})")));
            }
            let s = q(qq) * &nq;
            Ok(triangle(s, &nq, eps))
        }
        TrapezoidKind::TrianglePrime { beta } => {
            let g = gamma_of(beta, n_i)?;
            Ok(triangle(q(g), &nq, eps))
        }
    }
}

/// Region under `y = s(1−x)` meeting the line `x = 1` only at `t ≥ 1`.
/// With `eps` the right edge is cut at `1 − 1/(2N)` so the shape stays a
/// trapezoid; without it the lower edge `y ≥ 1 − x` gives integer vertices.
fn triangle(s: Rational, nq: &Rational, eps: Option<&Rational>) -> TrapezoidSpec {
    let one = Rational::one();
    match eps {
        Some(e) => TrapezoidSpec {
            x_low: e.clone(),
            x_high: &one - (&one / (nq * int(2))),
            y_low_intercept: e.clone(),
            y_low_slope: Rational::zero(),
            y_high_intercept: s.clone(),
            y_high_slope: -s,
        },
        None => TrapezoidSpec {
            x_low: Rational::zero(),
            x_high: one.clone(),
            y_low_intercept: one.clone(),
            y_low_slope: -one,
            y_high_intercept: s.clone(),
            y_high_slope: -s,
        },
    }
}

/// The trapezoid as a planar polytope.
pub fn build_trapezoid(kind: TrapezoidKind, n: u64, eps: Option<&Rational>) -> Result<Polytope> {
    crate::geometry::build_trapezoid(&trapezoid_spec(kind, n, eps)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QdeGadget {
    pub instance: QdeInstance,
    pub mode: Mode,
    pub n: u64,
    pub epsilon: Rational,
    pub big_l: i128,
    pub delta: Option<Rational>,
    pub big_k: Option<i128>,
    pub terms: TermFactorization,
    /// `P₁..P₄`, then `R` in real mode.
    pub term_polytopes: Vec<Polytope>,
    pub hull: Polytope,
    pub family: TranslationFamily,
}

/// Fixed coordinates (0-based) placing `P₁..P₄` and `R` in `R^6`.
fn placement(i: usize) -> (Vec<usize>, Vec<(usize, Rational)>) {
    let fixed: &[(usize, i64)] = match i {
        0 => &[(5, 1)],
        1 => &[(3, 1), (4, 0), (5, 0)],
        2 => &[(4, 1), (5, 0)],
        3 => &[(2, 1), (3, 0), (4, 0), (5, 0)],
        _ => &[(2, 0), (3, 0), (4, 0), (5, 0)],
    };
    let free = 6 - fixed.len();
    ((0..free).collect(), fixed.iter().map(|&(k, v)| (k, int(v))).collect())
}

pub fn build_gadget(inst: &QdeInstance, mode: Mode) -> Result<QdeGadget> {
    let n = inst.n();
    let nq = int(n);
    let epsilon = Rational::one() / (&nq * &nq * int(4));
    let terms = term_factorization(inst)?;
    let eps = (mode != Mode::Integer).then_some(&epsilon);
    let mut specs = Vec::new();
    for term in &terms.terms {
        let s: Vec<TrapezoidSpec> = term
            .iter()
            .map(|f| trapezoid_spec(f.kind(), n, eps))
            .collect::<Result<_>>()?;
        specs.push(s);
    }
    let mut polys: Vec<Polytope> = specs
        .iter()
        .map(|s| product_polytope(s))
        .collect::<Result<_>>()?;

    let (mut delta, mut big_k) = (None, None);
    if mode == Mode::Real {
        let b = int(inst.beta);
        let d = Rational::one() / (int(4) * num_traits::pow(b.clone(), 8));
        let s_max = specs
            .iter()
            .flatten()
            .flat_map(|s| [s.y_low_slope.clone(), s.y_high_slope.clone()])
            .map(|x| if x < Rational::zero() { -x } else { x })
            .max()
            .unwrap();
        if d >= epsilon || d >= Rational::one() / (&b * &s_max) {
            return Err(Error::ConstructionBug(format!(
                "delta {d} not below epsilon {epsilon} and 1/(beta*s) with s = {s_max}"
            )));
        }
        let k = inst.big_k();
        for p in polys.iter_mut() {
            *p = translate(p, &Point::axis(p.dim(), 0, d.clone()))?;
        }
        polys.push(parallelogram(n, &d, k)?);
        delta = Some(d);
        big_k = Some(k);
    }

    let mut pieces: Vec<(Tag, Polytope)> = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        let (map, fixed) = placement(i);
        let e = embed_with_tags(p, 6, &map, &fixed)?;
        pieces.push((fixed.into_iter().collect(), e));
    }
    let hull = tagged_hull(pieces)?;
    let family = TranslationFamily::new(hull.clone(), Point::axis(6, 0, Rational::one()), n)?;
    Ok(QdeGadget {
        instance: *inst,
        mode,
        n,
        epsilon,
        big_l: terms.big_l,
        delta,
        big_k,
        terms,
        term_polytopes: polys,
        hull,
        family,
    })
}

/// `R = {0 ≤ y ≤ 𝕂N − 1/2, 1 − 1/N + δ/8 − y/N ≤ x ≤ 1 − δ/8 − y/N}`.
pub fn parallelogram(n: u64, delta: &Rational, big_k: i128) -> Result<Polytope> {
    let nq = int(n);
    let one = Rational::one();
    let d8 = delta / int(8);
    let top = q(big_k) * &nq - Rational::new(1.into(), 2.into());
    let right = &one - &d8;
    let left = &one - &one / &nq + &d8;
    let shift = &top / &nq;
    let pt = |x: Rational, y: Rational| Point::new(vec![x, y]);
    let vertices = vec![
        pt(left.clone(), Rational::zero()),
        pt(right.clone(), Rational::zero()),
        pt(&left - &shift, top.clone()),
        pt(&right - &shift, top.clone()),
    ];
    let inv_n = &one / &nq;
    let rows = vec![
        Halfspace { a: vec![Rational::zero(), -one.clone()], b: Rational::zero() },
        Halfspace { a: vec![Rational::zero(), one.clone()], b: top },
        Halfspace { a: vec![one.clone(), inv_n.clone()], b: right },
        Halfspace { a: vec![-one, -inv_n], b: -left },
    ];
    Polytope::from_parts(2, vertices, Some(HalfspaceSystem::new(2, rows)?), None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslationMin {
    pub min_count: u64,
    pub argmin_t: i64,
    pub qde_feasible: bool,
}

/// Minimum of `|W + t·e₁/N|` over one period, cross-checked against the oracle.
/// In integer mode the translates with `β | t` are replaced by the `v = 0`
/// values `𝕃 + (u² − α)²` computed directly.
pub fn solve_translation_min(g: &QdeGadget) -> Result<TranslationMin> {
    let inst = &g.instance;
    let counter = TranslateCounter::for_family(&g.family, CountConfig::default())?;
    let mut best: Option<(u64, i64)> = None;
    let mut consider = |c: u64, t: i64| {
        if best.map_or(true, |(bc, bt)| (c, t) < (bc, bt)) {
            best = Some((c, t));
        }
    };
    for t in 0..g.n as i64 {
        if g.mode == Mode::Integer && t as u64 % inst.beta == 0 {
            let u = t as u64 / inst.beta;
            let c = g.big_l + inst.f(u, 0);
            consider(u64::try_from(c).map_err(|_| Error::Unsupported("count above u64".into()))?, t);
            continue;
        }
        let c = counter.count_t(t)?;
        consider(c, t);
    }
    let (min_count, argmin_t) = best.expect("N >= 1");
    let oracle = qde_oracle(inst);
    if min_count as i128 != g.big_l + oracle.min_value {
        return Err(Error::ContractViolation(format!(
            "translation minimum {min_count} differs from L + oracle minimum {}",
            g.big_l + oracle.min_value
        )));
    }
    Ok(TranslationMin {
        min_count,
        argmin_t,
        qde_feasible: min_count as i128 == g.big_l,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealScan {
    pub min_count: u64,
    pub argmin_lambda: Rational,
    pub samples: u64,
}

/// Position of `λ` relative to the sets `Z_δ` (within `δ/4` of some `t/N`)
/// and `Y_δ` (offset from `t/N` in `[δ/8, 1/N − δ/8]`).
pub fn classify_lambda(lambda: &Rational, n: u64, delta: &Rational) -> (Option<i64>, bool) {
    let nq = int(n);
    let scaled = lambda * &nq;
    let t_floor = floor(&scaled);
    let tau = lambda - Rational::from_integer(t_floor.clone()) / &nq;
    let d8 = delta / int(8);
    let in_y = tau >= d8 && tau <= Rational::one() / &nq - &d8;
    let d4 = delta / int(4);
    let t_near = if tau <= d4 {
        Some(t_floor)
    } else if Rational::one() / &nq - &tau <= d4 {
        Some(t_floor + 1)
    } else {
        None
    };
    let t_near = t_near.map(|t| i64::try_from(t).expect("t fits in i64"));
    (t_near, in_y)
}

/// Counts `|W′ + λe₁|` on the grid `λ = j·step` over `[0, 1]`, checking the
/// parallelogram and term contracts at every sample.
pub fn real_min_scan(g: &QdeGadget, step: &Rational) -> Result<RealScan> {
    let (Some(delta), Some(big_k)) = (&g.delta, g.big_k) else {
        return Err(Error::invalid("real scan needs a real-mode gadget"));
    };
    if *step <= Rational::zero() || *step > delta / int(8) {
        return Err(Error::invalid(format!(
            "grid step {step} must be positive and at most delta/8 = {}",
            delta / int(8)
        )));
    }
    let counter = TranslateCounter::new(&g.hull, &Point::axis(6, 0, Rational::one()), CountConfig::default())?;
    let samples = floor(&(Rational::one() / step));
    let samples = u64::try_from(samples).map_err(|_| Error::Unsupported("grid too fine".into()))?;
    let mut best: Option<(u64, Rational)> = None;
    for j in 0..=samples {
        let lambda = step * int(j);
        // Parts follow the hull's pieces, so the parallelogram comes last.
        let counts = counter.part_counts(&lambda)?;
        let r_count = *counts.last().expect("five parts");
        let total: u64 = counts.iter().sum();
        let (t_near, in_y) = classify_lambda(&lambda, g.n, delta);
        let want_r = if in_y { big_k as u64 } else { 0 };
        if r_count != want_r {
            return Err(Error::ContractViolation(format!(
                "|R + {lambda}e1| = {r_count}, expected {want_r}"
            )));
        }
        if in_y && (total as i128) < big_k {
            return Err(Error::ContractViolation(format!(
                "|W' + {lambda}e1| = {total} below K = {big_k}"
            )));
        }
        if !in_y {
            let t = t_near.ok_or_else(|| {
                Error::ConstructionBug(format!("{lambda} lies in neither Y nor Z"))
            })?;
            let want = g_reference(&g.instance, t.rem_euclid(g.n as i64))?;
            if total as i128 != want {
                return Err(Error::ContractViolation(format!(
                    "|W' + {lambda}e1| = {total}, expected g({}) = {want}",
                    t.rem_euclid(g.n as i64)
                )));
            }
        }
        if best.as_ref().map_or(true, |(c, _)| total < *c) {
            best = Some((total, lambda));
        }
    }
    let (min_count, argmin_lambda) = best.expect("at least one sample");
    let expected = g.big_l + qde_oracle(&g.instance).min_value;
    if min_count as i128 != expected {
        return Err(Error::ContractViolation(format!(
            "real grid minimum {min_count} differs from the rational minimum {expected}"
        )));
    }
    Ok(RealScan {
        min_count,
        argmin_lambda,
        samples: samples + 1,
    })
}
