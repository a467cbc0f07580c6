//! Exact lattice-point counting.
//!
//! Everything funnels into [`count_image`], which counts integer points of
//! `s·P + w` without building the transformed polytope. Three strategies:
//!
//! * inequality systems: nested iteration over the integer box, axes ordered
//!   by extent, each row turned into a bound on the deepest axis it touches;
//!   the innermost axis is counted as an interval;
//! * tagged hulls: sum over the pieces (valid while tags stay integral);
//! * bare vertex lists: the same nested scheme, with each axis range computed
//!   exactly by linear programming over the hull.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope};
use crate::lp::HullOracle;
use crate::rational::{ceil, floor, lcm_of_denominators, Rational};

pub const CELL_GUARD_ENV: &str = "EHRHART_FORGE_CELL_GUARD";
pub const DEFAULT_CELL_GUARD: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountConfig {
    /// Largest integer box (in cells) a single enumeration may visit.
    pub cell_guard: u128,
}

impl Default for CountConfig {
    fn default() -> Self {
        let cell_guard = std::env::var(CELL_GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_CELL_GUARD);
        CountConfig { cell_guard }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Inequalities if present, else pieces, else hull membership.
    Auto,
    /// Always hull membership over the vertex list.
    Hull,
}

/// `t ↦ P + (t/N)·direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationFamily {
    pub base: Polytope,
    pub direction: Point,
    pub denominator: u64,
}

impl TranslationFamily {
    pub fn new(base: Polytope, direction: Point, denominator: u64) -> Result<Self> {
        if direction.dim() != base.dim() {
            return Err(Error::invalid("family direction dimension differs from polytope"));
        }
        if denominator == 0 {
            return Err(Error::invalid("family denominator must be at least 1"));
        }
        Ok(TranslationFamily {
            base,
            direction,
            denominator,
        })
    }

    /// The translation vector for parameter `t`.
    pub fn shift(&self, t: i64) -> Point {
        self.direction
            .scale(&Rational::new(BigInt::from(t), BigInt::from(self.denominator)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub entries: Vec<(i64, u64)>,
    pub argmin: i64,
    pub min: u64,
}

pub fn count_lattice_points(p: &Polytope) -> Result<u64> {
    count_image(p, &Rational::one(), None, Method::Auto, &CountConfig::default())
}

pub fn count_lattice_points_with(p: &Polytope, method: Method, cfg: &CountConfig) -> Result<u64> {
    count_image(p, &Rational::one(), None, method, cfg)
}

pub fn count_translate(f: &TranslationFamily, t: i64) -> Result<u64> {
    count_translate_with(f, t, Method::Auto, &CountConfig::default())
}

pub fn count_translate_with(
    f: &TranslationFamily,
    t: i64,
    method: Method,
    cfg: &CountConfig,
) -> Result<u64> {
    let w = f.shift(t);
    count_image(&f.base, &Rational::one(), Some(w.coords()), method, cfg)
}

pub fn count_real_translate(p: &Polytope, lambda: &Rational, direction: &Point) -> Result<u64> {
    if direction.dim() != p.dim() {
        return Err(Error::invalid("direction dimension differs from polytope"));
    }
    let w = direction.scale(lambda);
    count_image(p, &Rational::one(), Some(w.coords()), Method::Auto, &CountConfig::default())
}

/// `|tP ∩ Z^d|`, with `f_P(0) = 1`.
pub fn ehrhart_value(p: &Polytope, t: u64) -> Result<u64> {
    ehrhart_value_with(p, t, &CountConfig::default())
}

pub fn ehrhart_value_with(p: &Polytope, t: u64, cfg: &CountConfig) -> Result<u64> {
    if t == 0 {
        return Ok(1);
    }
    count_image(p, &Rational::from_integer(t.into()), None, Method::Auto, cfg)
}

/// Counts for every `t` in `from..=to`; ties in the minimum go to the smaller `t`.
pub fn scan_translates(f: &TranslationFamily, from: i64, to: i64) -> Result<CountTable> {
    if from > to {
        return Err(Error::invalid(format!("empty scan range [{from}, {to}]")));
    }
    let counter = TranslateCounter::for_family(f, CountConfig::default())?;
    let mut entries = Vec::with_capacity((to - from + 1) as usize);
    for t in from..=to {
        entries.push((t, counter.count_t(t)?));
    }
    Ok(table_from_entries(entries))
}

pub fn table_from_entries(entries: Vec<(i64, u64)>) -> CountTable {
    let (argmin, min) = entries
        .iter()
        .copied()
        .min_by_key(|&(t, c)| (c, t))
        .expect("nonempty table");
    CountTable {
        entries,
        argmin,
        min,
    }
}

/// Integer points of `s·P + w`.
pub fn count_image(
    p: &Polytope,
    s: &Rational,
    w: Option<&[Rational]>,
    method: Method,
    cfg: &CountConfig,
) -> Result<u64> {
    if !s.is_positive() {
        return Err(Error::invalid("scale must be positive"));
    }
    if let Some(w) = w {
        if w.len() != p.dim() {
            return Err(Error::invalid("shift dimension differs from polytope"));
        }
    }
    let bbox = image_box(p, s, w);
    if bbox.iter().any(|(lo, hi)| lo > hi) {
        return Ok(0);
    }
    if method == Method::Auto {
        if p.halfspaces().is_some() {
            return count_halfspaces(p, s, w, &bbox, cfg);
        }
        if let Some(pieces) = p.pieces() {
            if pieces_apply(p, s, w) {
                let mut total = 0u64;
                for pc in pieces {
                    total += count_image(&pc.polytope, s, w, method, cfg)?;
                }
                return Ok(total);
            }
        }
    }
    check_guard(&bbox, cfg)?;
    let verts: Vec<Point> = p.vertices().iter().map(|v| transform(v, s, w)).collect();
    let e = HullEnum::new(HullOracle::new(&verts), &bbox, AxisOrder::ByExtent);
    let mut prefix = Vec::with_capacity(p.dim());
    Ok(e.count(0, &mut prefix))
}

/// First integer point of `P` in lexicographic order, if any.
pub fn first_lattice_point(p: &Polytope, cfg: &CountConfig) -> Result<Option<Point>> {
    let bbox = image_box(p, &Rational::one(), None);
    if bbox.iter().any(|(lo, hi)| lo > hi) {
        return Ok(None);
    }
    check_guard(&bbox, cfg)?;
    let found = if p.halfspaces().is_some() {
        let (a, b): (Vec<_>, Vec<_>) = integer_rows(p, &Rational::one(), None).into_iter().unzip();
        RowLayout::new(&a, axis_order_big(&bbox, AxisOrder::Identity)).first(&b, &bbox)
    } else {
        let e = HullEnum::new(HullOracle::new(p.vertices()), &bbox, AxisOrder::Identity);
        let mut prefix = Vec::new();
        if e.first(0, &mut prefix) {
            Some(prefix.into_iter().map(|(_, v)| floor(&v)).collect())
        } else {
            None
        }
    };
    Ok(found.map(|v: Vec<BigInt>| Point::new(v.into_iter().map(Rational::from_integer).collect())))
}

fn transform(v: &Point, s: &Rational, w: Option<&[Rational]>) -> Point {
    let c = v
        .coords()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let y = x * s;
            match w {
                Some(w) => y + &w[i],
                None => y,
            }
        })
        .collect();
    Point::new(c)
}

fn image_box(p: &Polytope, s: &Rational, w: Option<&[Rational]>) -> Vec<(BigInt, BigInt)> {
    (0..p.dim())
        .map(|i| {
            let lo = p.vertices().iter().map(|v| &v.coords()[i]).min().unwrap();
            let hi = p.vertices().iter().map(|v| &v.coords()[i]).max().unwrap();
            let (mut lo, mut hi) = (lo * s, hi * s);
            if let Some(w) = w {
                lo += &w[i];
                hi += &w[i];
            }
            (ceil(&lo), floor(&hi))
        })
        .collect()
}

fn check_guard(bbox: &[(BigInt, BigInt)], cfg: &CountConfig) -> Result<()> {
    let cells: BigInt = bbox
        .iter()
        .map(|(lo, hi)| hi - lo + BigInt::one())
        .product();
    if cells > BigInt::from(cfg.cell_guard) {
        return Err(Error::ResourceLimit {
            cells: cells.to_string(),
            guard: cfg.cell_guard,
        });
    }
    Ok(())
}

/// Piece-wise counting is sound when the tags are still 0/1 up to an integer
/// shift: the hull's slice at an integral tag value is then the hull of the
/// pieces carrying that value.
fn pieces_apply(p: &Polytope, s: &Rational, w: Option<&[Rational]>) -> bool {
    if !s.is_one() {
        return false;
    }
    let Some(w) = w else {
        return true;
    };
    p.pieces()
        .unwrap_or_default()
        .iter()
        .all(|pc| pc.tag.keys().all(|&k| w[k].is_integer()))
}

/// Rows of `s·P + w` as integer inequalities `a·z ≤ b`.
fn integer_rows(p: &Polytope, s: &Rational, w: Option<&[Rational]>) -> Vec<(Vec<BigInt>, BigInt)> {
    let hs = p.halfspaces().expect("inequality system");
    hs.rows()
        .iter()
        .map(|r| {
            let mut b = &r.b * s;
            if let Some(w) = w {
                for (a, x) in r.a.iter().zip(w) {
                    if !a.is_zero() && !x.is_zero() {
                        b += a * x;
                    }
                }
            }
            let l = lcm_of_denominators(r.a.iter());
            let lq = Rational::from_integer(l);
            let a = r.a.iter().map(|x| (x * &lq).to_integer()).collect();
            (a, floor(&(b * lq)))
        })
        .collect()
}

fn count_halfspaces(
    p: &Polytope,
    s: &Rational,
    w: Option<&[Rational]>,
    bbox: &[(BigInt, BigInt)],
    cfg: &CountConfig,
) -> Result<u64> {
    check_guard(bbox, cfg)?;
    let (a, b): (Vec<_>, Vec<_>) = integer_rows(p, s, w).into_iter().unzip();
    let layout = RowLayout::new(&a, axis_order_big(bbox, AxisOrder::ByExtent));
    Ok(layout.count(&b, bbox))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum AxisOrder {
    Identity,
    ByExtent,
}

fn axis_order_big(bbox: &[(BigInt, BigInt)], order: AxisOrder) -> Vec<usize> {
    let mut axes: Vec<usize> = (0..bbox.len()).collect();
    if order == AxisOrder::ByExtent {
        axes.sort_by_key(|&i| &bbox[i].1 - &bbox[i].0);
    }
    axes
}

trait Int: Clone + Debug + Integer + Signed {
    fn to_big(&self) -> BigInt;
}

impl Int for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Int for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Int for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Integer rows `a·z ≤ b` arranged for a fixed axis order. Each row bounds the
/// deepest axis it touches; shallower nonzero coefficients feed partial sums.
struct RowLayout {
    order: Vec<usize>,
    /// `coef[r][k]`: coefficient of row r on the axis at depth k.
    coef_big: Vec<Vec<BigInt>>,
    coef_small: Option<Vec<Vec<i128>>>,
    coef_tiny: Option<Vec<Vec<i64>>>,
    /// Original row index for each kept row.
    source: Vec<usize>,
    /// Rows with no nonzero coefficient: feasible iff `b ≥ 0`.
    zero_rows: Vec<usize>,
    bound_rows: Vec<Vec<usize>>,
    carry_rows: Vec<Vec<usize>>,
}

impl RowLayout {
    fn new(a: &[Vec<BigInt>], order: Vec<usize>) -> Self {
        let depth = order.len();
        let mut coef_big = Vec::new();
        let mut source = Vec::new();
        let mut zero_rows = Vec::new();
        let mut bound_rows = vec![Vec::new(); depth];
        let mut carry_rows = vec![Vec::new(); depth];
        for (ri, row) in a.iter().enumerate() {
            let c: Vec<BigInt> = order.iter().map(|&i| row[i].clone()).collect();
            let Some(last) = c.iter().rposition(|x| !x.is_zero()) else {
                zero_rows.push(ri);
                continue;
            };
            let r = coef_big.len();
            for (k, x) in c.iter().enumerate().take(last) {
                if !x.is_zero() {
                    carry_rows[k].push(r);
                }
            }
            bound_rows[last].push(r);
            coef_big.push(c);
            source.push(ri);
        }
        let coef_small = coef_big
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().filter(|v| v.unsigned_abs() < 1 << 100)).collect())
            .collect::<Option<Vec<Vec<i128>>>>();
        let coef_tiny = coef_small.as_ref().and_then(|c| {
            c.iter()
                .map(|r| r.iter().map(|&x| i64::try_from(x).ok()).collect())
                .collect::<Option<Vec<Vec<i64>>>>()
        });
        RowLayout {
            order,
            coef_big,
            coef_small,
            coef_tiny,
            source,
            zero_rows,
            bound_rows,
            carry_rows,
        }
    }

    /// Bounds and right-hand sides by depth / kept row, in `i128` when every
    /// partial sum provably stays below 2^120.
    /// Also reports whether every partial sum stays below 2^62, so `i64` works.
    fn small_inputs(&self, b: &[BigInt], bbox: &[(BigInt, BigInt)]) -> Option<(Vec<i128>, Vec<i128>, Vec<i128>, bool)> {
        let coef = self.coef_small.as_ref()?;
        let lo: Vec<i128> = self.order.iter().map(|&i| bbox[i].0.to_i128()).collect::<Option<_>>()?;
        let hi: Vec<i128> = self.order.iter().map(|&i| bbox[i].1.to_i128()).collect::<Option<_>>()?;
        let bs: Vec<i128> = self.source.iter().map(|&r| b[r].to_i128()).collect::<Option<_>>()?;
        let limit: u128 = 1 << 120;
        let mut overall = 0u128;
        for (row, rb) in coef.iter().zip(&bs) {
            let mut worst = rb.unsigned_abs();
            for (k, x) in row.iter().enumerate() {
                let m = lo[k].unsigned_abs().max(hi[k].unsigned_abs()).checked_add(1)?;
                worst = worst.checked_add(x.unsigned_abs().checked_mul(m)?)?;
            }
            if worst >= limit {
                return None;
            }
            overall = overall.max(worst);
        }
        let box_fits = lo.iter().chain(&hi).all(|v| v.unsigned_abs() < 1 << 62);
        Some((lo, hi, bs, box_fits && overall < 1 << 62 && self.coef_tiny.is_some()))
    }

    fn infeasible(&self, b: &[BigInt]) -> bool {
        self.zero_rows.iter().any(|&r| b[r].is_negative())
    }

    fn count(&self, b: &[BigInt], bbox: &[(BigInt, BigInt)]) -> u64 {
        if self.infeasible(b) {
            return 0;
        }
        if let Some((lo, hi, bs, tiny)) = self.small_inputs(b, bbox) {
            if tiny {
                let coef = self.coef_tiny.as_ref().unwrap();
                let narrow = |v: Vec<i128>| v.into_iter().map(|x| x as i64).collect::<Vec<i64>>();
                return IntEnum { layout: self, coef, b: narrow(bs), lo: narrow(lo), hi: narrow(hi) }.count();
            }
            let coef = self.coef_small.as_ref().unwrap();
            return IntEnum { layout: self, coef, b: bs, lo, hi }.count();
        }
        let (lo, hi, bs) = self.big_inputs(b, bbox);
        IntEnum { layout: self, coef: &self.coef_big, b: bs, lo, hi }.count()
    }

    fn first(&self, b: &[BigInt], bbox: &[(BigInt, BigInt)]) -> Option<Vec<BigInt>> {
        if self.infeasible(b) {
            return None;
        }
        if let Some((lo, hi, bs, tiny)) = self.small_inputs(b, bbox) {
            if tiny {
                let coef = self.coef_tiny.as_ref().unwrap();
                let narrow = |v: Vec<i128>| v.into_iter().map(|x| x as i64).collect::<Vec<i64>>();
                return IntEnum { layout: self, coef, b: narrow(bs), lo: narrow(lo), hi: narrow(hi) }.first();
            }
            let coef = self.coef_small.as_ref().unwrap();
            return IntEnum { layout: self, coef, b: bs, lo, hi }.first();
        }
        let (lo, hi, bs) = self.big_inputs(b, bbox);
        IntEnum { layout: self, coef: &self.coef_big, b: bs, lo, hi }.first()
    }

    fn big_inputs(&self, b: &[BigInt], bbox: &[(BigInt, BigInt)]) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
        (
            self.order.iter().map(|&i| bbox[i].0.clone()).collect(),
            self.order.iter().map(|&i| bbox[i].1.clone()).collect(),
            self.source.iter().map(|&r| b[r].clone()).collect(),
        )
    }
}

struct IntEnum<'a, T> {
    layout: &'a RowLayout,
    coef: &'a [Vec<T>],
    b: Vec<T>,
    lo: Vec<T>,
    hi: Vec<T>,
}

impl<T: Int> IntEnum<'_, T> {
    fn depth(&self) -> usize {
        self.lo.len()
    }

    fn range(&self, k: usize, partial: &[T]) -> Option<(T, T)> {
        let mut lo = self.lo[k].clone();
        let mut hi = self.hi[k].clone();
        for &r in &self.layout.bound_rows[k] {
            let c = &self.coef[r][k];
            let rem = self.b[r].clone() - partial[r].clone();
            if c.is_one() {
                if rem < hi {
                    hi = rem;
                }
            } else if (-c.clone()).is_one() {
                let lb = -rem;
                if lb > lo {
                    lo = lb;
                }
            } else if c.is_positive() {
                let ub = rem.div_floor(c);
                if ub < hi {
                    hi = ub;
                }
            } else {
                let lb = -rem.div_floor(&-c.clone());
                if lb > lo {
                    lo = lb;
                }
            }
            if lo > hi {
                return None;
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn shift_partial(&self, k: usize, partial: &mut [T], z: &T) {
        for &r in &self.layout.carry_rows[k] {
            partial[r] = partial[r].clone() + self.coef[r][k].clone() * z.clone();
        }
    }

    fn count_from(&self, k: usize, partial: &mut [T]) -> u64 {
        let Some((lo, hi)) = self.range(k, partial) else {
            return 0;
        };
        if k + 1 == self.depth() {
            return (hi - lo + T::one()).to_big().to_u64().expect("count fits in u64");
        }
        let mut total = 0u64;
        let mut z = lo.clone();
        self.shift_partial(k, partial, &lo);
        loop {
            total += self.count_from(k + 1, partial);
            if z == hi {
                break;
            }
            z = z + T::one();
            self.shift_partial(k, partial, &T::one());
        }
        self.shift_partial(k, partial, &-hi);
        total
    }

    fn first_from(&self, k: usize, partial: &mut [T], prefix: &mut Vec<T>) -> bool {
        let Some((lo, hi)) = self.range(k, partial) else {
            return false;
        };
        if k + 1 == self.depth() {
            prefix.push(lo);
            return true;
        }
        let mut z = lo;
        loop {
            self.shift_partial(k, partial, &z);
            prefix.push(z.clone());
            if self.first_from(k + 1, partial, prefix) {
                return true;
            }
            prefix.pop();
            self.shift_partial(k, partial, &-z.clone());
            if z == hi {
                return false;
            }
            z = z + T::one();
        }
    }

    fn count(&self) -> u64 {
        let mut partial = vec![T::zero(); self.coef.len()];
        self.count_from(0, &mut partial)
    }

    /// First point in depth order (identity order gives lexicographic order).
    fn first(&self) -> Option<Vec<BigInt>> {
        let mut partial = vec![T::zero(); self.coef.len()];
        let mut prefix = Vec::new();
        if !self.first_from(0, &mut partial, &mut prefix) {
            return None;
        }
        let mut out = vec![BigInt::zero(); self.depth()];
        for (k, z) in prefix.iter().enumerate() {
            out[self.layout.order[k]] = z.to_big();
        }
        Some(out)
    }
}

/// `λ ↦ |P + λ·dir|` prepared for many evaluations: inequality rows are scaled
/// to integers once, so each call only updates right-hand sides and the box.
pub struct TranslateCounter {
    dim: usize,
    parts: Vec<CounterPart>,
    cfg: CountConfig,
}

enum CounterPart {
    Rows(Box<RowsPart>),
    /// Counted from scratch per call, with its direction.
    Generic(Polytope, Vec<Rational>),
}

struct RowsPart {
    layout: RowLayout,
    /// Row r reads `a_r·z ≤ scale_r·(b_r + c_r·λ)`.
    scale: Vec<Rational>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    vmin: Vec<Rational>,
    vmax: Vec<Rational>,
    dir: Vec<Rational>,
}

impl TranslateCounter {
    pub fn new(p: &Polytope, dir: &Point, cfg: CountConfig) -> Result<Self> {
        if dir.dim() != p.dim() {
            return Err(Error::invalid("direction dimension differs from polytope"));
        }
        let mut parts = Vec::new();
        compile(p, dir.coords(), &mut parts);
        Ok(TranslateCounter {
            dim: p.dim(),
            parts,
            cfg,
        })
    }

    /// Counter for `t ↦ |P + (t/N)·direction|`.
    pub fn for_family(f: &TranslationFamily, cfg: CountConfig) -> Result<Self> {
        let dir = f
            .direction
            .scale(&Rational::new(BigInt::one(), BigInt::from(f.denominator)));
        TranslateCounter::new(&f.base, &dir, cfg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, lambda: &Rational) -> Result<u64> {
        let mut total = 0;
        for part in &self.parts {
            total += match part {
                CounterPart::Generic(p, dir) => generic_count(p, dir, lambda, &self.cfg)?,
                CounterPart::Rows(r) => r.count(lambda, &self.cfg)?,
            };
        }
        Ok(total)
    }

    /// Per-part counts, in the order the parts were compiled.
    pub fn part_counts(&self, lambda: &Rational) -> Result<Vec<u64>> {
        self.parts
            .iter()
            .map(|part| match part {
                CounterPart::Generic(p, dir) => generic_count(p, dir, lambda, &self.cfg),
                CounterPart::Rows(r) => r.count(lambda, &self.cfg),
            })
            .collect()
    }

    pub fn count_t(&self, t: i64) -> Result<u64> {
        self.count(&Rational::from_integer(t.into()))
    }
}

fn generic_count(p: &Polytope, dir: &[Rational], lambda: &Rational, cfg: &CountConfig) -> Result<u64> {
    let w: Vec<Rational> = dir.iter().map(|d| d * lambda).collect();
    count_image(p, &Rational::one(), Some(&w), Method::Auto, cfg)
}

fn compile(p: &Polytope, dir: &[Rational], parts: &mut Vec<CounterPart>) {
    if let Some(hs) = p.halfspaces() {
        let dim = p.dim();
        let mut a_int = Vec::new();
        let (mut scale, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
        for r in hs.rows() {
            let l = Rational::from_integer(lcm_of_denominators(r.a.iter()));
            a_int.push(r.a.iter().map(|x| (x * &l).to_integer()).collect::<Vec<BigInt>>());
            scale.push(l);
            b.push(r.b.clone());
            c.push(
                r.a.iter()
                    .zip(dir)
                    .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                    .map(|(x, y)| x * y)
                    .sum(),
            );
        }
        let vmin: Vec<Rational> = (0..dim)
            .map(|i| p.vertices().iter().map(|v| &v.coords()[i]).min().unwrap().clone())
            .collect();
        let vmax: Vec<Rational> = (0..dim)
            .map(|i| p.vertices().iter().map(|v| &v.coords()[i]).max().unwrap().clone())
            .collect();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by_key(|&i| &vmax[i] - &vmin[i]);
        parts.push(CounterPart::Rows(Box::new(RowsPart {
            layout: RowLayout::new(&a_int, order),
            scale,
            b,
            c,
            vmin,
            vmax,
            dir: dir.to_vec(),
        })));
        return;
    }
    if let Some(pieces) = p.pieces() {
        if pieces.iter().all(|pc| pc.tag.keys().all(|&k| dir[k].is_zero())) {
            for pc in pieces {
                compile(&pc.polytope, dir, parts);
            }
            return;
        }
    }
    parts.push(CounterPart::Generic(p.clone(), dir.to_vec()));
}

impl RowsPart {
    fn count(&self, lambda: &Rational, cfg: &CountConfig) -> Result<u64> {
        let mut bbox = Vec::with_capacity(self.dir.len());
        for i in 0..self.dir.len() {
            let (lo, hi) = if self.dir[i].is_zero() {
                (ceil(&self.vmin[i]), floor(&self.vmax[i]))
            } else {
                let s = &self.dir[i] * lambda;
                (ceil(&(&self.vmin[i] + &s)), floor(&(&self.vmax[i] + &s)))
            };
            if lo > hi {
                return Ok(0);
            }
            bbox.push((lo, hi));
        }
        check_guard(&bbox, cfg)?;
        let b: Vec<BigInt> = (0..self.b.len())
            .map(|r| {
                let rhs = if self.c[r].is_zero() {
                    self.b[r].clone()
                } else {
                    &self.b[r] + &self.c[r] * lambda
                };
                floor(&(rhs * &self.scale[r]))
            })
            .collect();
        Ok(self.layout.count(&b, &bbox))
    }
}

struct HullEnum {
    oracle: HullOracle,
    order: Vec<usize>,
}

impl HullEnum {
    fn new(oracle: HullOracle, bbox: &[(BigInt, BigInt)], order: AxisOrder) -> Self {
        HullEnum {
            oracle,
            order: axis_order_big(bbox, order),
        }
    }

    fn range(&self, k: usize, prefix: &[(usize, Rational)]) -> Option<(BigInt, BigInt)> {
        let (lo, hi) = self.oracle.coordinate_range(prefix, self.order[k])?;
        let (lo, hi) = (ceil(&lo), floor(&hi));
        (lo <= hi).then_some((lo, hi))
    }

    fn count(&self, k: usize, prefix: &mut Vec<(usize, Rational)>) -> u64 {
        let Some((lo, hi)) = self.range(k, prefix) else {
            return 0;
        };
        if k + 1 == self.order.len() {
            return (hi - lo + 1u32).to_u64().expect("count fits in u64");
        }
        let mut total = 0;
        let mut z = lo;
        while z <= hi {
            prefix.push((self.order[k], Rational::from_integer(z.clone())));
            total += self.count(k + 1, prefix);
            prefix.pop();
            z += 1u32;
        }
        total
    }

    /// Identity order only: leaves the found point in `prefix`.
    fn first(&self, k: usize, prefix: &mut Vec<(usize, Rational)>) -> bool {
        let Some((lo, hi)) = self.range(k, prefix) else {
            return false;
        };
        if k + 1 == self.order.len() {
            prefix.push((self.order[k], Rational::from_integer(lo)));
            return true;
        }
        let mut z = lo;
        while z <= hi {
            prefix.push((self.order[k], Rational::from_integer(z.clone())));
            if self.first(k + 1, prefix) {
                return true;
            }
            prefix.pop();
            z += 1u32;
        }
        false
    }
}
