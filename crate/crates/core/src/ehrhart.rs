//! Translation families to dilation families, k-ETP, and Ehrhart polynomials
//! of integer polytopes.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::count::{
    ehrhart_value_with, first_lattice_point, CountConfig, TranslateCounter, TranslationFamily,
};
use crate::error::{Error, Result};
use crate::geometry::{dilate, translate, Point, Polytope};
use crate::rational::{ceil, int, Rational};

/// Largest `M` tried by [`to_dilation_family`] before giving up.
pub const DEFAULT_M_CAP: u64 = 1 << 40;

/// `Q` with `f_Q(t + M)` equal to the source family's count for `0 ≤ t < N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilationFamily {
    pub q: Polytope,
    pub m: u64,
    pub valid_n: u64,
}

/// Coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    pub coefficients: Vec<Rational>,
}

impl EhrhartPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn eval(&self, t: u64) -> Rational {
        let x = int(t);
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &x + c)
    }

    fn eval_int(&self, t: u64) -> Result<BigInt> {
        let v = self.eval(t);
        if !v.is_integer() {
            return Err(Error::ContractViolation(format!(
                "interpolated polynomial is not integral at t = {t}"
            )));
        }
        Ok(v.to_integer())
    }
}

pub fn find_integer_point(p: &Polytope) -> Result<Option<Point>> {
    first_lattice_point(p, &CountConfig::default())
}

pub fn find_integer_point_with(p: &Polytope, cfg: &CountConfig) -> Result<Option<Point>> {
    first_lattice_point(p, cfg)
}

fn negate(p: &Point) -> Point {
    p.scale(&-Rational::one())
}

/// L1 diameter of the vertex set; bounds the Euclidean one from above.
fn vertex_diameter(p: &Polytope) -> Rational {
    (0..p.dim())
        .map(|i| {
            let mut it = p.vertices().iter().map(|v| &v.coords()[i]);
            let first = it.next().cloned().unwrap_or_else(Rational::zero);
            let (lo, hi) = it.fold((first.clone(), first), |(lo, hi), x| {
                (if x < &lo { x.clone() } else { lo }, if x > &hi { x.clone() } else { hi })
            });
            hi - lo
        })
        .sum()
}

pub fn to_dilation_family(f: &TranslationFamily) -> Result<DilationFamily> {
    to_dilation_family_with(f, DEFAULT_M_CAP, &CountConfig::default())
}

/// Picks `M` by doubling until `f_Q(t + M)` matches every count of the family.
pub fn to_dilation_family_with(
    f: &TranslationFamily,
    m_cap: u64,
    cfg: &CountConfig,
) -> Result<DilationFamily> {
    let n = f.denominator;
    let p = find_integer_point_with(&f.base, cfg)?.ok_or(Error::NoIntegerPoint)?;
    let base = translate(&f.base, &negate(&p))?;
    let counter = TranslateCounter::for_family(f, *cfg)?;
    let targets = (0..n as i64)
        .map(|t| counter.count_t(t))
        .collect::<Result<Vec<u64>>>()?;
    let v = f.shift(1);

    let d2 = ceil(&vertex_diameter(&base)).max(BigInt::one());
    let mut m = d2
        .to_u64()
        .and_then(|d| d.checked_mul(2 * n))
        .ok_or_else(|| Error::VerificationExhausted("initial M overflows".into()))?;
    while m <= m_cap {
        let q = translate(&dilate(&base, &Rational::new(BigInt::one(), m.into()))?, &v)?;
        let mut ok = true;
        for (t, &want) in targets.iter().enumerate() {
            if ehrhart_value_with(&q, m + t as u64, cfg)? != want {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(DilationFamily {
                q,
                m,
                valid_n: n,
            });
        }
        m = match m.checked_mul(2) {
            Some(m) => m,
            None => break,
        };
    }
    Err(Error::VerificationExhausted(format!(
        "no verified M up to the cap {m_cap}"
    )))
}

pub fn k_etp(p: &Polytope, k: u64, bound: Option<u64>) -> Result<Option<u64>> {
    k_etp_with(p, k, bound, &CountConfig::default())
}

/// Largest `t` with `f_P(t) < k`. With an integer point in `P` the counting
/// function is monotone and a doubling search applies; otherwise a `bound`
/// is required and the range `0..=bound` is scanned from the top.
pub fn k_etp_with(p: &Polytope, k: u64, bound: Option<u64>, cfg: &CountConfig) -> Result<Option<u64>> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let anchor = find_integer_point_with(p, cfg)?;
    let Some(anchor) = anchor else {
        let Some(bound) = bound else {
            return Err(Error::Unsupported(
                "polytope has no integer point; supply a search bound".into(),
            ));
        };
        for t in (0..=bound).rev() {
            if ehrhart_value_with(p, t, cfg)? < k {
                return Ok(Some(t));
            }
        }
        return Ok(None);
    };
    let q = translate(p, &negate(&anchor))?;
    let f = |t: u64| ehrhart_value_with(&q, t, cfg);
    monotone_search(k, bound, is_point(&q), f)
}

fn is_point(p: &Polytope) -> bool {
    p.vertices().windows(2).all(|w| w[0] == w[1])
}

/// Largest `t` with `f(t) < k` for nondecreasing `f` with `f(0) = 1`.
fn monotone_search(
    k: u64,
    bound: Option<u64>,
    constant: bool,
    f: impl Fn(u64) -> Result<u64>,
) -> Result<Option<u64>> {
    if f(0)? >= k {
        return Ok(None);
    }
    if constant {
        return match bound {
            Some(b) => Ok(Some(b)),
            None => Err(Error::Unsupported(
                "single-point polytope: f_P is constant, no largest t".into(),
            )),
        };
    }
    // f(lo) < k throughout
    let mut lo = 0u64;
    let mut hi = 1u64;
    loop {
        if let Some(b) = bound {
            if hi > b {
                if f(b)? < k {
                    return Ok(Some(b));
                }
                hi = b;
                break;
            }
        }
        if f(hi)? >= k {
            break;
        }
        lo = hi;
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| Error::Unsupported("k-ETP search overflowed".into()))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid)? < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

fn require_integral(p: &Polytope) -> Result<()> {
    if p.vertices().iter().all(Point::is_integral) {
        Ok(())
    } else {
        Err(Error::invalid("Ehrhart polynomial needs integer vertices"))
    }
}

pub fn ehrhart_poly_interpolate(p: &Polytope) -> Result<EhrhartPolynomial> {
    ehrhart_poly_interpolate_with(p, &CountConfig::default())
}

pub fn ehrhart_poly_interpolate_with(p: &Polytope, cfg: &CountConfig) -> Result<EhrhartPolynomial> {
    require_integral(p)?;
    let d = p.dim();
    let values = (0..=d as u64)
        .map(|t| ehrhart_value_with(p, t, cfg).map(int))
        .collect::<Result<Vec<Rational>>>()?;
    let poly = EhrhartPolynomial {
        coefficients: interpolate(&values),
    };
    for t in [d as u64 + 1, d as u64 + 2] {
        let direct = ehrhart_value_with(p, t, cfg)?;
        if poly.eval(t) != int(direct) {
            return Err(Error::ContractViolation(format!(
                "interpolated value at t = {t} differs from the direct count {direct}"
            )));
        }
    }
    Ok(poly)
}

/// Monomial coefficients of the polynomial through `(i, values[i])`.
/// Newton form on forward differences, expanded via falling factorials.
fn interpolate(values: &[Rational]) -> Vec<Rational> {
    let n = values.len();
    let mut diffs = values.to_vec();
    let mut newton = Vec::with_capacity(n);
    for _ in 0..n {
        newton.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut out = vec![Rational::zero(); n];
    // falling = t(t-1)...(t-k+1) / k!
    let mut falling = vec![Rational::one()];
    for (k, c) in newton.iter().enumerate() {
        for (i, f) in falling.iter().enumerate() {
            out[i] += c * f;
        }
        let mut next = vec![Rational::zero(); falling.len() + 1];
        let shift = int(k as u64);
        let denom = int(k as u64 + 1);
        for (i, f) in falling.iter().enumerate() {
            next[i + 1] += f / &denom;
            next[i] -= f * &shift / &denom;
        }
        falling = next;
    }
    out
}

pub fn k_etp_integer(p: &Polytope, k: u64) -> Result<Option<u64>> {
    k_etp_integer_with(p, k, &CountConfig::default())
}

/// k-ETP answered from the interpolated polynomial, then checked by direct
/// counts at `g` and `g + 1`.
pub fn k_etp_integer_with(p: &Polytope, k: u64, cfg: &CountConfig) -> Result<Option<u64>> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let poly = ehrhart_poly_interpolate_with(p, cfg)?;
    let f = |t: u64| -> Result<u64> {
        let v = poly.eval_int(t)?;
        // values past u64 are all ≥ k
        Ok(if v.is_negative() { 0 } else { v.to_u64().unwrap_or(u64::MAX) })
    };
    let answer = monotone_search(k, None, poly.degree() == 0, f)?;
    if let Some(g) = answer {
        let low = ehrhart_value_with(p, g, cfg)?;
        let high = ehrhart_value_with(p, g + 1, cfg)?;
        if low >= k || high < k {
            return Err(Error::ContractViolation(format!(
                "k-ETP answer {g} fails the direct check: f({g}) = {low}, f({}) = {high}",
                g + 1
            )));
        }
    } else if ehrhart_value_with(p, 0, cfg)? < k {
        return Err(Error::ContractViolation("k-ETP reported none but f(0) < k".into()));
    }
    Ok(answer)
}
