//! Exact linear programming over convex hulls of point sets.
//!
//! Every query has the shape
//!
//! ```text
//!     minimize  c·w   subject to   Σ w_j = 1,  Σ w_j v_j[c_r] = value_r,  w ≥ 0
//! ```
//!
//! where the `v_j` are the hull's points. A dense tableau simplex is written
//! once over the [`Scalar`] trait. The `f64` instance proposes an optimal
//! basis; that basis is then certified with exact rational arithmetic
//! (primal and dual feasibility). If certification fails the exact instance
//! is run from scratch under Bland's rule, which cannot cycle.

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::geometry::Point;
use crate::rational::Rational;

const FLOAT_EPS: f64 = 1e-9;
const FLOAT_PIVOT_CAP: usize = 5_000;

pub(crate) trait Scalar: Clone {
    fn nil() -> Self;
    fn unity() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_zero(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn magnitude(&self) -> f64;
    fn less_than(&self, o: &Self) -> bool;
    /// Dantzig pricing is only safe where ties cannot cycle forever.
    const USE_BLAND: bool;
}

impl Scalar for f64 {
    fn nil() -> Self {
        0.0
    }
    fn unity() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn less_than(&self, o: &Self) -> bool {
        self < o
    }
    const USE_BLAND: bool = false;
}

impl Scalar for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unity() -> Self {
        One::one()
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn magnitude(&self) -> f64 {
        Signed::abs(self).to_f64().unwrap_or(f64::INFINITY)
    }
    fn less_than(&self, o: &Self) -> bool {
        self < o
    }
    const USE_BLAND: bool = true;
}

pub(crate) enum Outcome<T> {
    Optimal { basis: Vec<usize>, value: T },
    Infeasible,
    /// Float instance gave up (pivot cap or lost rank).
    Failed,
}

/// Dense two-phase simplex for `min c·w, A w = b, w ≥ 0`.
/// `a` is row-major with `m` rows and `n` columns and must have full row rank.
pub(crate) fn simplex<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> Outcome<T> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let rhs = n + m;
    // Rows 0..m constraints, row m phase-2 objective, row m+1 phase-1 objective.
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 2);
    for i in 0..m {
        let flip = b[i].is_neg();
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip { a[i][j].neg() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { T::unity() } else { T::nil() });
        }
        row.push(if flip { b[i].neg() } else { b[i].clone() });
        t.push(row);
    }
    let mut obj = Vec::with_capacity(width);
    obj.extend(c.iter().cloned());
    obj.extend((0..=m).map(|_| T::nil()));
    t.push(obj);
    let mut phase1 = vec![T::nil(); width];
    for row in t.iter().take(m) {
        for j in 0..n {
            phase1[j] = phase1[j].sub(&row[j]);
        }
        phase1[rhs] = phase1[rhs].sub(&row[rhs]);
    }
    t.push(phase1);
    let mut basis: Vec<usize> = (n..n + m).collect();

    if !run_phase(&mut t, &mut basis, m + 1, n + m, m) {
        return Outcome::Failed;
    }
    // Phase-1 optimum is -(sum of artificials).
    if t[m + 1][rhs].is_neg() {
        return Outcome::Infeasible;
    }
    // Drive zero-level artificials out of the basis.
    for i in 0..m {
        if basis[i] >= n {
            match (0..n).find(|&j| !t[i][j].is_zero()) {
                Some(j) => pivot(&mut t, &mut basis, i, j),
                None => return Outcome::Failed,
            }
        }
    }
    if !run_phase(&mut t, &mut basis, m, n, m) {
        return Outcome::Failed;
    }
    let value = t[m][rhs].neg();
    Outcome::Optimal { basis, value }
}

/// Runs simplex iterations using objective row `obj`, entering columns `< cols`.
/// Returns false if the float instance hits its pivot cap.
fn run_phase<T: Scalar>(
    t: &mut [Vec<T>],
    basis: &mut [usize],
    obj: usize,
    cols: usize,
    m: usize,
) -> bool {
    let rhs = t[0].len() - 1;
    let mut pivots = 0usize;
    loop {
        let entering = if T::USE_BLAND {
            (0..cols).find(|&j| t[obj][j].is_neg())
        } else {
            let mut best: Option<(usize, f64)> = None;
            for j in 0..cols {
                if t[obj][j].is_neg() {
                    let mag = t[obj][j].magnitude();
                    if best.map_or(true, |(_, b)| mag > b) {
                        best = Some((j, mag));
                    }
                }
            }
            best.map(|(j, _)| j)
        };
        let Some(j) = entering else {
            return true;
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if t[i][j].is_pos() {
                let ratio = t[i][rhs].div(&t[i][j]);
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio.less_than(lr) || (!lr.less_than(&ratio) && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Hull programs are bounded; an unbounded ray means numerical trouble.
        let Some((i, _)) = leave else {
            return false;
        };
        pivot(t, basis, i, j);
        pivots += 1;
        if !T::USE_BLAND && pivots > FLOAT_PIVOT_CAP {
            return false;
        }
    }
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], basis: &mut [usize], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v = v.div(&p);
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col].clone();
        if f.is_zero() {
            continue;
        }
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v = v.sub(&f.mul(pv));
            }
        }
        r[col] = T::nil();
    }
    basis[row] = col;
}

/// Solves the square system `m x = rhs` exactly; `None` if singular.
pub(crate) fn solve_exact(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let k = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !Zero::is_zero(&aug[r][col]))?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v /= &p;
        }
        let prow = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || Zero::is_zero(&row[col]) {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Affine structure of a finite point set: which coordinates are free and how
/// the remaining ones depend on them over the affine hull.
#[derive(Debug, Clone)]
struct AffineFrame {
    origin: Vec<Rational>,
    /// For every coordinate, its expression `Σ coeff_f (x_f - origin_f)` in the
    /// free coordinates, as a dense vector indexed by free-coordinate slot.
    expr: Vec<Vec<Rational>>,
}

impl AffineFrame {
    fn new(points: &[Vec<Rational>], dim: usize) -> Self {
        let origin = points[0].clone();
        // Rows = coordinates, columns = difference vectors.
        let mut rows: Vec<Vec<Rational>> = (0..dim)
            .map(|c| (1..points.len()).map(|j| &points[j][c] - &origin[c]).collect())
            .collect();
        // Track each row as a combination of original rows (identity to start).
        let mut comb: Vec<Vec<Rational>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { One::one() } else { Zero::zero() }).collect())
            .collect();
        let mut free: Vec<usize> = Vec::new();
        let mut reduced = vec![false; dim];
        // Forward elimination over coordinate rows: pick pivot rows in
        // coordinate order so the free set is lexicographically first.
        for r in 0..dim {
            // Reduce row r by previous pivot rows.
            for &pr in &free {
                let pc = pivot_col(&rows[pr]).expect("pivot row nonzero");
                if !Zero::is_zero(&rows[r][pc]) {
                    let f = &rows[r][pc] / &rows[pr][pc];
                    let prow = rows[pr].clone();
                    for (v, pv) in rows[r].iter_mut().zip(&prow) {
                        *v -= &f * pv;
                    }
                    let pcomb = comb[pr].clone();
                    for (v, pv) in comb[r].iter_mut().zip(&pcomb) {
                        *v -= &f * pv;
                    }
                }
            }
            if rows[r].iter().all(Zero::is_zero) {
                reduced[r] = true;
            } else {
                free.push(r);
            }
        }
        // A dependent row r now satisfies Σ_i comb[r][i] * x_i = 0 on differences,
        // where comb[r][r] = 1 and other nonzeros sit on free coordinates
        // (or on earlier dependent ones, which were themselves reduced).
        let k = free.len();
        let mut expr: Vec<Vec<Rational>> = vec![vec![Zero::zero(); k]; dim];
        for (slot, &f) in free.iter().enumerate() {
            expr[f][slot] = One::one();
        }
        for r in 0..dim {
            if !reduced[r] {
                continue;
            }
            // x_r = -Σ_{i != r} comb[r][i] x_i ; substitute earlier expressions.
            let mut e = vec![Rational::zero(); k];
            for i in 0..dim {
                if i == r || Zero::is_zero(&comb[r][i]) {
                    continue;
                }
                debug_assert!(i < r, "combination uses only earlier rows");
                let coef = -&comb[r][i];
                for s in 0..k {
                    if !Zero::is_zero(&expr[i][s]) {
                        e[s] += &coef * &expr[i][s];
                    }
                }
            }
            expr[r] = e;
        }
        AffineFrame { origin, expr }
    }

    fn rank(&self) -> usize {
        self.expr.first().map_or(0, Vec::len)
    }
}

fn pivot_col(row: &[Rational]) -> Option<usize> {
    row.iter().position(|v| !Zero::is_zero(v))
}

/// Exact optimizer over the convex hull of a fixed point set.
#[derive(Debug, Clone)]
pub struct HullOracle {
    dim: usize,
    points: Vec<Vec<Rational>>,
    float_points: Vec<Vec<f64>>,
    center: Vec<f64>,
    scale: Vec<f64>,
    frame: AffineFrame,
}

impl HullOracle {
    pub fn new(points: &[Point]) -> Self {
        assert!(!points.is_empty(), "hull oracle needs at least one point");
        let dim = points[0].dim();
        // Dedupe.
        let mut seen = HashMap::new();
        let mut pts: Vec<Vec<Rational>> = Vec::new();
        for p in points {
            if seen.insert(p.coords().to_vec(), ()).is_none() {
                pts.push(p.coords().to_vec());
            }
        }
        let float_points: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| p.iter().map(|q| q.to_f64().unwrap_or(0.0)).collect())
            .collect();
        let mut center = vec![0.0; dim];
        let mut scale = vec![1.0; dim];
        for c in 0..dim {
            let lo = float_points.iter().map(|p| p[c]).fold(f64::INFINITY, f64::min);
            let hi = float_points.iter().map(|p| p[c]).fold(f64::NEG_INFINITY, f64::max);
            center[c] = 0.5 * (lo + hi);
            scale[c] = if hi - lo > 0.0 { 0.5 * (hi - lo) } else { 1.0 };
        }
        let frame = AffineFrame::new(&pts, dim);
        HullOracle {
            dim,
            points: pts,
            float_points,
            center,
            scale,
            frame,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_rank(&self) -> usize {
        self.frame.rank()
    }

    /// Reduces equality constraints `x_c = value` to an independent subset.
    /// Returns `None` when they are inconsistent on the affine hull.
    fn independent_rows(&self, fixed: &[(usize, Rational)]) -> Option<Vec<(usize, Rational)>> {
        let k = self.frame.rank();
        // Each constraint in free-coordinate form: expr·(x_F - o_F) = value - o_c.
        let mut basis_rows: Vec<(Vec<Rational>, Rational, usize)> = Vec::new();
        let mut kept = Vec::new();
        for (c, value) in fixed {
            let mut coeffs = self.frame.expr[*c].clone();
            let mut rhs = value - &self.frame.origin[*c];
            for (row, r, pc) in &basis_rows {
                if !Zero::is_zero(&coeffs[*pc]) {
                    let f = &coeffs[*pc] / &row[*pc];
                    for s in 0..k {
                        if !Zero::is_zero(&row[s]) {
                            let d = &f * &row[s];
                            coeffs[s] -= d;
                        }
                    }
                    rhs -= &f * r;
                }
            }
            match coeffs.iter().position(|v| !Zero::is_zero(v)) {
                Some(pc) => {
                    basis_rows.push((coeffs, rhs, pc));
                    kept.push((*c, value.clone()));
                }
                None => {
                    if !Zero::is_zero(&rhs) {
                        return None;
                    }
                }
            }
        }
        Some(kept)
    }

    /// Exact minimum and maximum of coordinate `target` over
    /// `hull ∩ {x_c = value for (c, value) in fixed}`, or `None` if empty.
    pub fn coordinate_range(
        &self,
        fixed: &[(usize, Rational)],
        target: usize,
    ) -> Option<(Rational, Rational)> {
        if fixed.is_empty() {
            let lo = self.points.iter().map(|p| &p[target]).min()?.clone();
            let hi = self.points.iter().map(|p| &p[target]).max()?.clone();
            return Some((lo, hi));
        }
        let rows = self.independent_rows(fixed)?;
        let lo = self.optimize(&rows, target, false)?;
        let hi = self.optimize(&rows, target, true)?;
        Some((lo, hi))
    }

    /// Exact membership test for a point.
    pub fn contains(&self, x: &[Rational]) -> bool {
        let fixed: Vec<(usize, Rational)> = x.iter().cloned().enumerate().collect();
        let Some(rows) = self.independent_rows(&fixed) else {
            return false;
        };
        let (a, b) = self.exact_system(&rows);
        let c = vec![Rational::zero(); self.points.len()];
        matches!(simplex(&a, &b, &c), Outcome::Optimal { .. })
    }

    fn exact_system(&self, rows: &[(usize, Rational)]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let n = self.points.len();
        let mut a = Vec::with_capacity(rows.len() + 1);
        let mut b = Vec::with_capacity(rows.len() + 1);
        a.push(vec![Rational::one(); n]);
        b.push(Rational::one());
        for (c, v) in rows {
            a.push(self.points.iter().map(|p| p[*c].clone()).collect());
            b.push(v.clone());
        }
        (a, b)
    }

    fn optimize(&self, rows: &[(usize, Rational)], target: usize, maximize: bool) -> Option<Rational> {
        let n = self.points.len();
        let m = rows.len() + 1;
        // Float proposal on centred and scaled data.
        let mut fa = Vec::with_capacity(m);
        let mut fb = Vec::with_capacity(m);
        fa.push(vec![1.0; n]);
        fb.push(1.0);
        for (c, v) in rows {
            let (ctr, sc) = (self.center[*c], self.scale[*c]);
            fa.push(self.float_points.iter().map(|p| (p[*c] - ctr) / sc).collect());
            fb.push((v.to_f64().unwrap_or(0.0) - ctr) / sc);
        }
        let sign = if maximize { -1.0 } else { 1.0 };
        let (tc, ts) = (self.center[target], self.scale[target]);
        let fc: Vec<f64> = self
            .float_points
            .iter()
            .map(|p| sign * (p[target] - tc) / ts)
            .collect();
        let (a, b) = self.exact_system(rows);
        let c: Vec<Rational> = self
            .points
            .iter()
            .map(|p| if maximize { -p[target].clone() } else { p[target].clone() })
            .collect();
        if let Outcome::Optimal { basis, .. } = simplex(&fa, &fb, &fc) {
            if let Some(value) = certify(&a, &b, &c, &basis) {
                return Some(if maximize { -value } else { value });
            }
        }
        match simplex(&a, &b, &c) {
            Outcome::Optimal { value, .. } => Some(if maximize { -value } else { value }),
            Outcome::Infeasible => None,
            Outcome::Failed => unreachable!("exact simplex with full-rank rows cannot fail"),
        }
    }
}

/// Checks exactly that `basis` is primal and dual feasible; returns the optimum.
fn certify(a: &[Vec<Rational>], b: &[Rational], c: &[Rational], basis: &[usize]) -> Option<Rational> {
    let m = a.len();
    if basis.iter().any(|&j| j >= c.len()) {
        return None;
    }
    let bm: Vec<Vec<Rational>> = (0..m).map(|i| basis.iter().map(|&j| a[i][j].clone()).collect()).collect();
    let x = solve_exact(&bm, b)?;
    if x.iter().any(Signed::is_negative) {
        return None;
    }
    // y^T B = c_B  <=>  B^T y = c_B
    let bt: Vec<Vec<Rational>> = (0..m).map(|i| (0..m).map(|r| bm[r][i].clone()).collect()).collect();
    let cb: Vec<Rational> = basis.iter().map(|&j| c[j].clone()).collect();
    let y = solve_exact(&bt, &cb)?;
    for j in 0..c.len() {
        let mut red = c[j].clone();
        for i in 0..m {
            if !Zero::is_zero(&a[i][j]) && !Zero::is_zero(&y[i]) {
                red -= &y[i] * &a[i][j];
            }
        }
        if Signed::is_negative(&red) {
            return None;
        }
    }
    Some(cb.iter().zip(&x).map(|(ci, xi)| ci * xi).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pt(c: &[(i64, i64)]) -> Point {
        Point::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn square() -> Vec<Point> {
        vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
            pt(&[(1, 1), (1, 1)]),
        ]
    }

    #[test]
    fn range_over_square_slices() {
        let o = HullOracle::new(&square());
        assert_eq!(o.coordinate_range(&[], 1), Some((rat(0, 1), rat(1, 1))));
        assert_eq!(o.coordinate_range(&[(0, rat(1, 2))], 1), Some((rat(0, 1), rat(1, 1))));
        assert_eq!(o.coordinate_range(&[(0, rat(3, 2))], 1), None);
    }

    #[test]
    fn range_over_triangle_slice() {
        let tri = vec![pt(&[(0, 1), (0, 1)]), pt(&[(2, 1), (0, 1)]), pt(&[(0, 1), (2, 1)])];
        let o = HullOracle::new(&tri);
        assert_eq!(o.coordinate_range(&[(0, rat(1, 2))], 1), Some((rat(0, 1), rat(3, 2))));
    }

    #[test]
    fn lower_dimensional_hull() {
        // Segment in R^3 along the x axis at y = 1, z = 2.
        let seg = vec![pt(&[(0, 1), (1, 1), (2, 1)]), pt(&[(3, 1), (1, 1), (2, 1)])];
        let o = HullOracle::new(&seg);
        assert_eq!(o.affine_rank(), 1);
        assert!(o.contains(&[rat(1, 1), rat(1, 1), rat(2, 1)]));
        assert!(!o.contains(&[rat(1, 1), rat(1, 1), rat(3, 1)]));
        assert_eq!(
            o.coordinate_range(&[(1, rat(1, 1)), (2, rat(2, 1))], 0),
            Some((rat(0, 1), rat(3, 1)))
        );
        assert_eq!(o.coordinate_range(&[(1, rat(0, 1))], 0), None);
    }

    #[test]
    fn degenerate_vertex_sets_still_certify() {
        // Many coplanar points with repeated coordinates.
        let mut pts = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                pts.push(pt(&[(i, 1), (j, 1), (0, 1)]));
                pts.push(pt(&[(i, 1), (j, 1), (1, 1)]));
            }
        }
        let o = HullOracle::new(&pts);
        assert_eq!(o.affine_rank(), 3);
        assert_eq!(
            o.coordinate_range(&[(0, rat(3, 2)), (1, rat(2, 1))], 2),
            Some((rat(0, 1), rat(1, 1)))
        );
        assert!(o.contains(&[rat(3, 1), rat(3, 1), rat(1, 1)]));
        assert!(!o.contains(&[rat(4, 1), rat(3, 1), rat(1, 1)]));
    }

    #[test]
    fn solve_exact_detects_singular() {
        let m = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert!(solve_exact(&m, &[rat(1, 1), rat(2, 1)]).is_none());
        let m = vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(4, 1)]];
        assert_eq!(solve_exact(&m, &[rat(1, 1), rat(2, 1)]).unwrap(), vec![rat(1, 2), rat(1, 2)]);
    }
}
