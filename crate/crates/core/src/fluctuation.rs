//! Quasi-polynomials `Σ γᵢ Π ⌊αᵢⱼ t + βᵢⱼ⌋` and polytopes whose Ehrhart
//! values reproduce them up to an additive constant and a shift.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::count::{CountConfig, TranslateCounter, TranslationFamily};
use crate::ehrhart::{to_dilation_family_with, DEFAULT_M_CAP};
use crate::error::{Error, Result};
use crate::geometry::{
    build_trapezoid, embed_with_tags, prism, product_polytope, tagged_hull, Point, Polytope, Tag,
    TrapezoidSpec,
};
use crate::rational::{abs, ceil, floor, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorFactor {
    pub alpha: Rational,
    pub beta: Rational,
}

impl FloorFactor {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        FloorFactor { alpha, beta }
    }

    pub fn eval(&self, t: i64) -> BigInt {
        floor(&(&self.alpha * int(t) + &self.beta))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpTerm {
    pub gamma: BigInt,
    pub factors: Vec<FloorFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub terms: Vec<QpTerm>,
}

impl QuasiPolynomial {
    pub fn new(terms: Vec<QpTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("quasi-polynomial needs at least one term"));
        }
        Ok(QuasiPolynomial { terms })
    }

    pub fn r(&self) -> usize {
        self.terms.len()
    }

    /// Largest factor count over the terms.
    pub fn n(&self) -> usize {
        self.terms.iter().map(|t| t.factors.len()).max().unwrap_or(0)
    }
}

pub fn qp_eval(qp: &QuasiPolynomial, t: i64) -> BigInt {
    qp.terms
        .iter()
        .map(|term| {
            term.factors
                .iter()
                .fold(term.gamma.clone(), |acc, f| acc * f.eval(t))
        })
        .sum()
}

/// `f(t) = Σ cᵢ (⌊(t−i)/r⌋ − ⌊(t−i−1)/r⌋)`, so `f(i) = cᵢ` for `0 ≤ i < r`.
pub fn sequence_to_qp(c: &[u64]) -> Result<QuasiPolynomial> {
    if c.is_empty() {
        return Err(Error::invalid("empty sequence"));
    }
    let r = c.len() as i64;
    let inv = Rational::new(BigInt::one(), BigInt::from(r));
    let mut terms = Vec::with_capacity(2 * c.len());
    for (i, &ci) in c.iter().enumerate() {
        let i = i as i64;
        let g = BigInt::from(ci);
        terms.push(QpTerm {
            gamma: g.clone(),
            factors: vec![FloorFactor::new(inv.clone(), Rational::new((-i).into(), r.into()))],
        });
        terms.push(QpTerm {
            gamma: -g,
            factors: vec![FloorFactor::new(inv.clone(), Rational::new((-i - 1).into(), r.into()))],
        });
    }
    QuasiPolynomial::new(terms)
}

/// Moves every `γᵢ` into a leading constant factor `⌊0·t + γᵢ⌋`.
pub fn normalize_coefficients(qp: &QuasiPolynomial) -> QuasiPolynomial {
    let terms = qp
        .terms
        .iter()
        .map(|term| {
            let mut factors = Vec::with_capacity(term.factors.len() + 1);
            factors.push(FloorFactor::new(Rational::zero(), Rational::from_integer(term.gamma.clone())));
            factors.extend(term.factors.iter().cloned());
            QpTerm {
                gamma: BigInt::one(),
                factors,
            }
        })
        .collect();
    QuasiPolynomial { terms }
}

/// What a summand takes from position `j`: `gⱼ`, `gⱼ + hⱼ` or `gⱼ − hⱼ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Choice {
    G,
    Plus,
    Minus,
}

impl Choice {
    fn flipped(self) -> Self {
        match self {
            Choice::G => Choice::G,
            Choice::Plus => Choice::Minus,
            Choice::Minus => Choice::Plus,
        }
    }

    /// The `±1` applied to `hⱼ`, or `None` for a bare `gⱼ`.
    pub fn sign(self) -> Option<i32> {
        match self {
            Choice::G => None,
            Choice::Plus => Some(1),
            Choice::Minus => Some(-1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub coefficient: BigInt,
    pub choices: Vec<Choice>,
}

impl Summand {
    /// Positions (0-based) where `hⱼ` enters.
    pub fn subset(&self) -> Vec<usize> {
        self.choices
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Choice::G)
            .map(|(j, _)| j)
            .collect()
    }
}

/// `3^{n−1} Π gⱼ + Π hⱼ = Σ coefficient · Π choice(gⱼ, hⱼ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityExpansion {
    pub n: usize,
    pub summands: Vec<Summand>,
}

impl IdentityExpansion {
    pub fn lhs(&self, g: &[BigInt], h: &[BigInt]) -> BigInt {
        let pg: BigInt = g.iter().product();
        let ph: BigInt = h.iter().product();
        num_traits::pow(BigInt::from(3), self.n - 1) * pg + ph
    }

    pub fn rhs(&self, g: &[BigInt], h: &[BigInt]) -> BigInt {
        self.summands
            .iter()
            .map(|s| {
                s.choices.iter().enumerate().fold(s.coefficient.clone(), |acc, (j, c)| {
                    acc * match c {
                        Choice::G => g[j].clone(),
                        Choice::Plus => &g[j] + &h[j],
                        Choice::Minus => &g[j] - &h[j],
                    }
                })
            })
            .sum()
    }
}

/// Built by induction on `n`:
/// `3^{n−1}G gₙ + H hₙ = (3^{n−2}G − H)(gₙ − hₙ) + 3^{n−2}G (gₙ + hₙ) + (3^{n−2}G + H) gₙ`,
/// where `3^{n−2}G ± H` expand by the `n − 1` case (with `hₙ₋₁` negated for `−`).
pub fn product_identity_expansion(n: usize) -> Result<IdentityExpansion> {
    if n < 2 {
        return Err(Error::invalid("identity expansion needs n ≥ 2"));
    }
    let mut summands = vec![
        Summand { coefficient: BigInt::one(), choices: vec![Choice::Minus, Choice::Minus] },
        Summand { coefficient: BigInt::one(), choices: vec![Choice::G, Choice::Plus] },
        Summand { coefficient: BigInt::one(), choices: vec![Choice::Plus, Choice::G] },
    ];
    for m in 3..=n {
        let mut next = Vec::with_capacity(2 * summands.len() + 1);
        for s in &summands {
            let mut choices = s.choices.clone();
            let last = choices.len() - 1;
            choices[last] = choices[last].flipped();
            choices.push(Choice::Minus);
            next.push(Summand { coefficient: s.coefficient.clone(), choices });
        }
        let mut choices = vec![Choice::G; m - 1];
        choices.push(Choice::Plus);
        next.push(Summand { coefficient: num_traits::pow(BigInt::from(3), m - 2), choices });
        for s in &summands {
            let mut choices = s.choices.clone();
            choices.push(Choice::G);
            next.push(Summand { coefficient: s.coefficient.clone(), choices });
        }
        summands = next;
    }
    summands.sort_by_key(|s| s.subset());
    let e = IdentityExpansion { n, summands };
    check_identity(&e, 100, 50, 0x5eed ^ n as u64)?;
    Ok(e)
}

/// Compares both sides at `samples` random integer points with entries in `[-bound, bound]`.
pub fn check_identity(e: &IdentityExpansion, samples: usize, bound: i64, seed: u64) -> Result<()> {
    let subsets: std::collections::BTreeSet<Vec<usize>> = e.summands.iter().map(Summand::subset).collect();
    if subsets.len() != e.summands.len() || subsets.contains(&Vec::new()) {
        return Err(Error::ConstructionBug("identity summands do not index distinct nonempty subsets".into()));
    }
    if e.summands.iter().any(|s| !s.coefficient.is_positive()) {
        return Err(Error::ConstructionBug("identity summand with nonpositive coefficient".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let g: Vec<BigInt> = (0..e.n).map(|_| rng.gen_range(-bound..=bound).into()).collect();
        let h: Vec<BigInt> = (0..e.n).map(|_| rng.gen_range(-bound..=bound).into()).collect();
        if e.lhs(&g, &h) != e.rhs(&g, &h) {
            return Err(Error::ConstructionBug(format!(
                "identity fails for n = {} at g = {g:?}, h = {h:?}",
                e.n
            )));
        }
    }
    Ok(())
}

fn lcm_den(values: &[&Rational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn check_dominates(f: &FloorFactor, g: u64, n: u64) -> Result<()> {
    for t in 0..n as i64 {
        let h = f.eval(t);
        if h.abs() >= BigInt::from(g) {
            return Err(Error::invalid(format!(
                "g = {g} does not dominate ⌊{}·t + {}⌋ = {h} at t = {t}",
                f.alpha, f.beta
            )));
        }
    }
    Ok(())
}

/// The slab description behind [`build_floor_trapezoid`] with a given left margin.
fn floor_trapezoid_spec(f: &FloorFactor, sign: i32, g: u64, n: u64, margin: &Rational) -> Result<TrapezoidSpec> {
    check_dominates(f, g, n)?;
    let slope = &f.alpha * int(n);
    let line = &slope + &f.beta;
    let gq = int(g);
    let (y_low_intercept, y_low_slope, y_high_intercept, y_high_slope) = if sign > 0 {
        (Rational::new(1.into(), 2.into()) - gq, Rational::zero(), line, -slope)
    } else {
        let kappa = Rational::new(BigInt::one(), lcm_den(&[&f.alpha, &f.beta]) * 2);
        (line + kappa, -slope, gq, Rational::zero())
    };
    Ok(TrapezoidSpec {
        x_low: margin.clone(),
        x_high: Rational::one(),
        y_low_intercept,
        y_low_slope,
        y_high_intercept,
        y_high_slope,
    })
}

fn default_margin(n: u64, den_lcm: &BigInt) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(4 * n * n) * den_lcm)
}

/// A trapezoid `F` with `|F + t·e₁/N| = g + sign·⌊a t + b⌋` for `0 ≤ t < N`.
pub fn build_floor_trapezoid(a: &Rational, b: &Rational, sign: i32, g: u64, n: u64) -> Result<Polytope> {
    if sign != 1 && sign != -1 {
        return Err(Error::invalid("sign must be +1 or -1"));
    }
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let f = FloorFactor::new(a.clone(), b.clone());
    let margin = default_margin(n, &lcm_den(&[a, b]));
    build_trapezoid(&floor_trapezoid_spec(&f, sign, g, n, &margin)?)
}

fn constant_one() -> FloorFactor {
    FloorFactor::new(Rational::zero(), Rational::one())
}

fn term_polytope(
    factors: &[FloorFactor],
    expansion: &IdentityExpansion,
    g: u64,
    n: u64,
    margin: &Rational,
) -> Result<Polytope> {
    let k = expansion.n;
    let mut factors = factors.to_vec();
    factors.resize_with(k.max(factors.len()), constant_one);
    if factors.len() != k {
        return Err(Error::invalid("term has more factors than the expansion"));
    }
    let blank = FloorFactor::new(Rational::zero(), Rational::zero());
    let dim = 2 * k + 2;
    let mut pieces: Vec<(Tag, Polytope)> = Vec::with_capacity(expansion.summands.len());
    for (idx, s) in expansion.summands.iter().enumerate() {
        let specs = s
            .choices
            .iter()
            .zip(&factors)
            .map(|(c, f)| match c.sign() {
                None => floor_trapezoid_spec(&blank, 1, g, n, margin),
                Some(sign) => floor_trapezoid_spec(f, sign, g, n, margin),
            })
            .collect::<Result<Vec<_>>>()?;
        let height = s
            .coefficient
            .to_u64()
            .ok_or_else(|| Error::invalid("identity coefficient too large for a prism"))?;
        let body = prism(&product_polytope(&specs)?, height)?;
        let fixed: Vec<(usize, Rational)> = (0..k)
            .map(|bit| (k + 2 + bit, int((idx >> bit) as u64 & 1)))
            .collect();
        let map: Vec<usize> = (0..k + 2).collect();
        let e = embed_with_tags(&body, dim, &map, &fixed)?;
        pieces.push((fixed.into_iter().collect(), e));
    }
    tagged_hull(pieces)
}

/// `Wᵢ ⊂ R^{2n+2}` with `|Wᵢ + t·e₁/N| = Π ⌊αⱼ t + βⱼ⌋ + 3^{n−1} gⁿ`.
pub fn build_term_polytope(factors: &[FloorFactor], g: u64, n: u64) -> Result<Polytope> {
    let k = factors.len().max(2);
    let expansion = product_identity_expansion(k)?;
    let refs: Vec<&Rational> = factors.iter().flat_map(|f| [&f.alpha, &f.beta]).collect();
    let margin = default_margin(n, &lcm_den(&refs));
    term_polytope(factors, &expansion, g, n, &margin)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationResult {
    pub q: Polytope,
    pub k: BigInt,
    pub m: u64,
    pub dim: usize,
    pub vertex_count: usize,
    pub valid_n: u64,
}

fn ceil_log2(r: usize) -> usize {
    (usize::BITS - (r.max(1) - 1).leading_zeros()) as usize
}

/// `g = 2⌈max(|α|N + |β|)⌉ + 2` over all factors of the normalized qp.
fn choose_g(qp: &QuasiPolynomial, n: u64) -> Result<u64> {
    let m = qp
        .terms
        .iter()
        .flat_map(|t| &t.factors)
        .map(|f| abs(&f.alpha) * int(n) + abs(&f.beta))
        .max()
        .unwrap_or_else(Rational::zero);
    (ceil(&m) * BigInt::from(2) + BigInt::from(2))
        .to_u64()
        .ok_or_else(|| Error::invalid("quasi-polynomial values too large to encode"))
}

pub fn realize_qp(qp: &QuasiPolynomial, n: u64) -> Result<RealizationResult> {
    realize_qp_with(qp, n, &CountConfig::default())
}

/// Builds `Q`, `K`, `M` with `f_Q(t + M) = p(t) + K` for `0 ≤ t < N`, and
/// checks every one of those values by counting.
pub fn realize_qp_with(qp: &QuasiPolynomial, n: u64, cfg: &CountConfig) -> Result<RealizationResult> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let norm = normalize_coefficients(qp);
    let r = norm.r();
    let k = norm.n().max(2);
    let g = choose_g(&norm, n)?;
    let expansion = product_identity_expansion(k)?;
    let refs: Vec<&Rational> = norm
        .terms
        .iter()
        .flat_map(|t| &t.factors)
        .flat_map(|f| [&f.alpha, &f.beta])
        .collect();
    let margin = default_margin(n, &lcm_den(&refs));
    let inner_dim = 2 * k + 2;
    let extra = ceil_log2(r);
    let dim = inner_dim + extra;

    let mut pieces: Vec<(Tag, Polytope)> = Vec::with_capacity(r);
    for (i, term) in norm.terms.iter().enumerate() {
        let w = term_polytope(&term.factors, &expansion, g, n, &margin)?;
        let fixed: Vec<(usize, Rational)> = (0..extra)
            .map(|bit| (inner_dim + bit, int((i >> bit) as u64 & 1)))
            .collect();
        let map: Vec<usize> = (0..inner_dim).collect();
        let e = embed_with_tags(&w, dim, &map, &fixed)?;
        pieces.push((fixed.into_iter().collect(), e));
    }
    let hull = if pieces.len() == 1 {
        pieces.pop().unwrap().1
    } else {
        tagged_hull(pieces)?
    };
    let big_k = BigInt::from(r) * num_traits::pow(BigInt::from(3), k - 1) * num_traits::pow(BigInt::from(g), k);

    let family = TranslationFamily::new(hull, Point::axis(dim, 0, Rational::one()), n)?;
    let counter = TranslateCounter::for_family(&family, *cfg)?;
    for t in 0..n as i64 {
        let want = qp_eval(qp, t) + &big_k;
        let got = counter.count_t(t)?;
        if BigInt::from(got) != want {
            return Err(Error::ConstructionBug(format!(
                "translate {t} has {got} points, expected p(t) + K = {want}"
            )));
        }
    }
    // Every f_Q(t + M) is recounted against the translate counts checked above.
    let dil = to_dilation_family_with(&family, DEFAULT_M_CAP, cfg)?;
    Ok(RealizationResult {
        vertex_count: dil.q.vertex_count(),
        q: dil.q,
        k: big_k,
        m: dil.m,
        dim,
        valid_n: n,
    })
}

pub fn realize_sequence(c: &[u64]) -> Result<RealizationResult> {
    realize_sequence_with(c, &CountConfig::default())
}

pub fn realize_sequence_with(c: &[u64], cfg: &CountConfig) -> Result<RealizationResult> {
    let qp = sequence_to_qp(c)?;
    realize_qp_with(&qp, c.len() as u64, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_translate, ehrhart_value_with, TranslationFamily};
    use crate::rational::rat;

    fn term(gamma: i64, factors: &[(Rational, Rational)]) -> QpTerm {
        QpTerm {
            gamma: gamma.into(),
            factors: factors.iter().map(|(a, b)| FloorFactor::new(a.clone(), b.clone())).collect(),
        }
    }

    #[test]
    fn eval_examples() {
        let half = QuasiPolynomial::new(vec![term(1, &[(rat(1, 2), int(0))])]).unwrap();
        assert_eq!(qp_eval(&half, 5), 2.into());
        let p = QuasiPolynomial::new(vec![
            term(1, &[]),
            term(1, &[(int(1), int(0)), (rat(1, 2), int(0))]),
            term(-1, &[(int(1), int(0)), (rat(1, 2), rat(-1, 2))]),
        ])
        .unwrap();
        assert_eq!(qp_eval(&p, 4), 5.into());
        let seven = QuasiPolynomial::new(vec![term(7, &[])]).unwrap();
        assert_eq!(qp_eval(&seven, -3), 7.into());
    }

    #[test]
    fn sequences_round_trip() {
        for c in [vec![5u64, 7], vec![9], vec![3, 1, 4]] {
            let qp = sequence_to_qp(&c).unwrap();
            assert_eq!(qp.r(), 2 * c.len());
            for (i, ci) in c.iter().enumerate() {
                assert_eq!(qp_eval(&qp, i as i64), BigInt::from(*ci));
            }
        }
    }

    #[test]
    fn normalization_moves_gamma() {
        let qp = QuasiPolynomial::new(vec![term(-3, &[(rat(1, 2), int(0))])]).unwrap();
        let n = normalize_coefficients(&qp);
        assert_eq!(n.terms[0], term(1, &[(int(0), int(-3)), (rat(1, 2), int(0))]));
        for t in -5..10 {
            assert_eq!(qp_eval(&qp, t), qp_eval(&n, t));
        }
    }

    #[test]
    fn identity_base_case() {
        let e = product_identity_expansion(2).unwrap();
        assert_eq!(e.summands.len(), 3);
        let g: Vec<BigInt> = vec![2.into(), 3.into()];
        let h: Vec<BigInt> = vec![1.into(), 2.into()];
        assert_eq!(e.lhs(&g, &h), 20.into());
        assert_eq!(e.rhs(&g, &h), 20.into());
        assert_eq!(product_identity_expansion(3).unwrap().summands.len(), 7);
        assert_eq!(product_identity_expansion(5).unwrap().summands.len(), 31);
    }

    fn family_counts(p: Polytope, n: u64) -> Vec<u64> {
        let dim = p.dim();
        let f = TranslationFamily::new(p, Point::axis(dim, 0, Rational::one()), n).unwrap();
        (0..n as i64).map(|t| count_translate(&f, t).unwrap()).collect()
    }

    #[test]
    fn floor_trapezoid_examples() {
        let plus = build_floor_trapezoid(&rat(1, 2), &int(0), 1, 5, 4).unwrap();
        assert_eq!(family_counts(plus, 4), vec![5, 5, 6, 6]);
        let minus = build_floor_trapezoid(&rat(1, 2), &int(0), -1, 5, 4).unwrap();
        assert_eq!(family_counts(minus, 4), vec![5, 5, 4, 4]);
        let constant = build_floor_trapezoid(&int(0), &int(-3), 1, 5, 4).unwrap();
        assert_eq!(family_counts(constant, 4), vec![2; 4]);
        assert!(matches!(
            build_floor_trapezoid(&int(2), &int(0), 1, 5, 4),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn term_polytope_counts() {
        let f = vec![FloorFactor::new(rat(1, 2), int(0)), FloorFactor::new(rat(1, 3), int(0))];
        let g = 8;
        let w = build_term_polytope(&f, g, 6).unwrap();
        assert!(w.vertex_count() <= 4usize.pow(3));
        let counts = family_counts(w, 6);
        for (t, c) in counts.iter().enumerate() {
            let q = (t as u64 / 2) * (t as u64 / 3);
            assert_eq!(*c, q + 3 * g * g);
        }
    }

    #[test]
    fn realize_small_sequence() {
        let res = realize_sequence(&[3, 1, 4]).unwrap();
        let cfg = CountConfig::default();
        for (i, c) in [3u64, 1, 4].iter().enumerate() {
            let v = ehrhart_value_with(&res.q, res.m + i as u64, &cfg).unwrap();
            assert_eq!(BigInt::from(v), &res.k + c);
        }
    }
}
