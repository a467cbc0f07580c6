//! Points, halfspace systems and polytopes with the constructors the gadgets use.
//!
//! A [`Polytope`] always carries its vertex list. Shapes built directly
//! (trapezoids, products, prisms, embeddings) also carry an inequality system.
//! Hulls of tagged pieces carry the pieces instead, so that counting can be
//! done piece by piece.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::HullOracle;
use crate::rational::{ceil, floor, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "points have at least one coordinate");
        Point(coords)
    }

    pub fn try_new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("point with no coordinates"));
        }
        Ok(Point(coords))
    }

    pub fn zero(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    /// `scale * e_axis` in dimension `dim`.
    pub fn axis(dim: usize, axis: usize, scale: Rational) -> Self {
        let mut v = vec![Rational::zero(); dim];
        v[axis] = scale;
        Point(v)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Point::new(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn add(&self, o: &Point) -> Point {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|q| q.is_integer())
    }
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .filter(|(ai, _)| !ai.is_zero())
        .map(|(ai, xi)| ai * xi)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub a: Vec<Rational>,
    pub b: Rational,
}

/// Rows `a·x ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceSystem {
    dim: usize,
    rows: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn new(dim: usize, rows: Vec<Halfspace>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.a.len() != dim) {
            return Err(Error::invalid(format!(
                "halfspace row of length {} in dimension {dim}",
                r.a.len()
            )));
        }
        Ok(HalfspaceSystem { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Halfspace] {
        &self.rows
    }

    fn push_le(&mut self, a: Vec<Rational>, b: Rational) {
        debug_assert_eq!(a.len(), self.dim);
        self.rows.push(Halfspace { a, b });
    }
}

pub fn contains_h(s: &HalfspaceSystem, x: &Point) -> Result<bool> {
    if x.dim() != s.dim {
        return Err(Error::invalid(format!(
            "point of dimension {} tested against system of dimension {}",
            x.dim(),
            s.dim
        )));
    }
    Ok(s.rows.iter().all(|r| dot(&r.a, x.coords()) <= r.b))
}

/// Tag keys are 0-based coordinate positions.
pub type Tag = BTreeMap<usize, Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub tag: Tag,
    pub polytope: Polytope,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    halfspaces: Option<HalfspaceSystem>,
    pieces: Option<Vec<Piece>>,
}

fn dedup_points(points: impl IntoIterator<Item = Point>) -> Vec<Point> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in points {
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

impl Polytope {
    /// Assembles a polytope from parts, checking the representation invariants.
    pub fn from_parts(
        dim: usize,
        vertices: Vec<Point>,
        halfspaces: Option<HalfspaceSystem>,
        pieces: Option<Vec<Piece>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("polytope of dimension 0"));
        }
        if vertices.is_empty() {
            return Err(Error::invalid("polytope with no vertices"));
        }
        if let Some(v) = vertices.iter().find(|v| v.dim() != dim) {
            return Err(Error::invalid(format!(
                "vertex of dimension {} in a polytope of dimension {dim}",
                v.dim()
            )));
        }
        let n = vertices.len();
        let vertices = dedup_points(vertices);
        if vertices.len() != n {
            return Err(Error::invalid("duplicate vertices"));
        }
        if let Some(h) = &halfspaces {
            if h.dim != dim {
                return Err(Error::invalid("halfspace dimension differs from polytope"));
            }
            for v in &vertices {
                if !contains_h(h, v)? {
                    return Err(Error::invalid("vertex violates a halfspace row"));
                }
            }
        }
        if let Some(ps) = &pieces {
            let all: HashSet<&Point> = vertices.iter().collect();
            for p in ps {
                if p.polytope.dim != dim {
                    return Err(Error::invalid("piece dimension differs from polytope"));
                }
                if p.polytope.vertices.iter().any(|v| !all.contains(v)) {
                    return Err(Error::invalid("piece vertex missing from hull vertex list"));
                }
            }
        }
        Ok(Polytope {
            dim,
            vertices,
            halfspaces,
            pieces,
        })
    }

    /// Hull of a point set with no other representation. Duplicates are dropped;
    /// the list is not reduced to extreme points.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().map(Point::dim).unwrap_or(0);
        Polytope::from_parts(dim, dedup_points(points), None, None)
    }

    /// Axis-parallel box `∏ [lo_i, hi_i]`.
    pub fn cuboid(bounds: &[(Rational, Rational)]) -> Result<Self> {
        let dim = bounds.len();
        if dim == 0 {
            return Err(Error::invalid("box of dimension 0"));
        }
        if bounds.iter().any(|(l, h)| l > h) {
            return Err(Error::DegenerateConstruction("box with lo > hi".into()));
        }
        let mut verts = vec![Vec::new()];
        for (l, h) in bounds {
            let mut next = Vec::new();
            for v in &verts {
                for c in [l, h] {
                    let mut w: Vec<Rational> = v.clone();
                    w.push(c.clone());
                    next.push(w);
                }
            }
            verts = next;
        }
        let mut hs = HalfspaceSystem::new(dim, Vec::new())?;
        for (i, (l, h)) in bounds.iter().enumerate() {
            hs.push_le(unit(dim, i, Rational::one()), h.clone());
            hs.push_le(unit(dim, i, -Rational::one()), -l.clone());
        }
        Polytope::from_parts(
            dim,
            dedup_points(verts.into_iter().map(Point::new)),
            Some(hs),
            None,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> Option<&HalfspaceSystem> {
        self.halfspaces.as_ref()
    }

    pub fn pieces(&self) -> Option<&[Piece]> {
        self.pieces.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

fn unit(dim: usize, i: usize, v: Rational) -> Vec<Rational> {
    let mut a = vec![Rational::zero(); dim];
    a[i] = v;
    a
}

pub fn translate(p: &Polytope, w: &Point) -> Result<Polytope> {
    if w.dim() != p.dim {
        return Err(Error::invalid(format!(
            "translation vector of dimension {} for polytope of dimension {}",
            w.dim(),
            p.dim
        )));
    }
    Ok(translate_unchecked(p, w))
}

fn translate_unchecked(p: &Polytope, w: &Point) -> Polytope {
    let vertices = p.vertices.iter().map(|v| v.add(w)).collect();
    let halfspaces = p.halfspaces.as_ref().map(|h| HalfspaceSystem {
        dim: h.dim,
        rows: h
            .rows
            .iter()
            .map(|r| Halfspace {
                a: r.a.clone(),
                b: &r.b + dot(&r.a, w.coords()),
            })
            .collect(),
    });
    let pieces = p.pieces.as_ref().map(|ps| {
        ps.iter()
            .map(|pc| Piece {
                tag: pc
                    .tag
                    .iter()
                    .map(|(&k, v)| (k, v + &w.coords()[k]))
                    .collect(),
                polytope: translate_unchecked(&pc.polytope, w),
            })
            .collect()
    });
    Polytope {
        dim: p.dim,
        vertices,
        halfspaces,
        pieces,
    }
}

/// Scales about the origin. Pieces are kept only for `s = 1`: once scaled,
/// tag coordinates leave {0, 1} and distinct pieces may share lattice points.
pub fn dilate(p: &Polytope, s: &Rational) -> Result<Polytope> {
    if !s.is_positive() {
        return Err(Error::invalid("dilation factor must be positive"));
    }
    if s.is_one() {
        return Ok(p.clone());
    }
    let vertices = p.vertices.iter().map(|v| v.scale(s)).collect();
    let halfspaces = p.halfspaces.as_ref().map(|h| HalfspaceSystem {
        dim: h.dim,
        rows: h
            .rows
            .iter()
            .map(|r| Halfspace {
                a: r.a.clone(),
                b: &r.b * s,
            })
            .collect(),
    });
    Ok(Polytope {
        dim: p.dim,
        vertices,
        halfspaces,
        pieces: None,
    })
}

/// Places `p` in `ambient_dim` dimensions: coordinate `i` of `p` goes to
/// position `coord_map[i]`, and every position in `fixed` is pinned to its value.
/// Positions are 0-based.
pub fn embed_with_tags(
    p: &Polytope,
    ambient_dim: usize,
    coord_map: &[usize],
    fixed: &[(usize, Rational)],
) -> Result<Polytope> {
    if coord_map.len() != p.dim {
        return Err(Error::invalid(format!(
            "coordinate map has {} entries for a polytope of dimension {}",
            coord_map.len(),
            p.dim
        )));
    }
    let mut used = vec![false; ambient_dim];
    for &pos in coord_map.iter().chain(fixed.iter().map(|(pos, _)| pos)) {
        if pos >= ambient_dim {
            return Err(Error::invalid(format!(
                "position {pos} outside ambient dimension {ambient_dim}"
            )));
        }
        if used[pos] {
            return Err(Error::invalid(format!("position {pos} assigned twice")));
        }
        used[pos] = true;
    }
    if used.iter().any(|u| !u) {
        return Err(Error::invalid("embedding leaves some positions unassigned"));
    }
    Ok(embed_unchecked(p, ambient_dim, coord_map, fixed))
}

fn embed_unchecked(
    p: &Polytope,
    ambient_dim: usize,
    coord_map: &[usize],
    fixed: &[(usize, Rational)],
) -> Polytope {
    let lift = |v: &Point| {
        let mut c = vec![Rational::zero(); ambient_dim];
        for (i, &pos) in coord_map.iter().enumerate() {
            c[pos] = v.coords()[i].clone();
        }
        for (pos, val) in fixed {
            c[*pos] = val.clone();
        }
        Point(c)
    };
    let vertices = p.vertices.iter().map(lift).collect();
    let halfspaces = p.halfspaces.as_ref().map(|h| {
        let mut rows: Vec<Halfspace> = h
            .rows
            .iter()
            .map(|r| {
                let mut a = vec![Rational::zero(); ambient_dim];
                for (i, &pos) in coord_map.iter().enumerate() {
                    a[pos] = r.a[i].clone();
                }
                Halfspace { a, b: r.b.clone() }
            })
            .collect();
        for (pos, val) in fixed {
            rows.push(Halfspace {
                a: unit(ambient_dim, *pos, Rational::one()),
                b: val.clone(),
            });
            rows.push(Halfspace {
                a: unit(ambient_dim, *pos, -Rational::one()),
                b: -val.clone(),
            });
        }
        HalfspaceSystem {
            dim: ambient_dim,
            rows,
        }
    });
    let pieces = p.pieces.as_ref().map(|ps| {
        ps.iter()
            .map(|pc| {
                let mut tag: Tag = pc.tag.iter().map(|(&k, v)| (coord_map[k], v.clone())).collect();
                for (pos, val) in fixed {
                    tag.insert(*pos, val.clone());
                }
                Piece {
                    tag,
                    polytope: embed_unchecked(&pc.polytope, ambient_dim, coord_map, fixed),
                }
            })
            .collect()
    });
    Polytope {
        dim: ambient_dim,
        vertices,
        halfspaces,
        pieces,
    }
}

/// `{μ ≤ x ≤ ν, ρ + τx ≤ y ≤ ρ' + τ'x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapezoidSpec {
    pub x_low: Rational,
    pub x_high: Rational,
    pub y_low_intercept: Rational,
    pub y_low_slope: Rational,
    pub y_high_intercept: Rational,
    pub y_high_slope: Rational,
}

impl TrapezoidSpec {
    pub fn lower_at(&self, x: &Rational) -> Rational {
        &self.y_low_intercept + &self.y_low_slope * x
    }

    pub fn upper_at(&self, x: &Rational) -> Rational {
        &self.y_high_intercept + &self.y_high_slope * x
    }

    /// The sub-interval of `[lo, hi]` where this factor's y-range is nonempty.
    fn clip(&self, lo: &mut Rational, hi: &mut Rational) {
        // (τ - τ') x ≤ ρ' - ρ
        let k = &self.y_low_slope - &self.y_high_slope;
        let r = &self.y_high_intercept - &self.y_low_intercept;
        if k.is_positive() {
            let b = &r / &k;
            if b < *hi {
                *hi = b;
            }
        } else if k.is_negative() {
            let b = &r / &k;
            if b > *lo {
                *lo = b;
            }
        } else if r.is_negative() {
            // Empty everywhere: force an empty interval.
            *hi = lo.clone() - Rational::one();
        }
    }
}

/// The polytope in coordinates `(x, y_1, …, y_d)` whose slab at `x` is the
/// product of the factors' slabs.
pub fn product_polytope(factors: &[TrapezoidSpec]) -> Result<Polytope> {
    if factors.is_empty() {
        return Err(Error::invalid("product of no factors"));
    }
    if let Some(f) = factors.iter().find(|f| f.x_low >= f.x_high) {
        return Err(Error::invalid(format!(
            "trapezoid with x range [{}, {}]",
            f.x_low, f.x_high
        )));
    }
    let mut lo = factors.iter().map(|f| f.x_low.clone()).max().unwrap();
    let mut hi = factors.iter().map(|f| f.x_high.clone()).min().unwrap();
    if lo > hi {
        return Err(Error::DegenerateConstruction(format!(
            "shared x range [{lo}, {hi}] is empty"
        )));
    }
    for f in factors {
        f.clip(&mut lo, &mut hi);
    }
    if lo > hi {
        return Err(Error::DegenerateConstruction(
            "trapezoid factors have no common nonempty slab".into(),
        ));
    }
    let d = factors.len();
    let dim = d + 1;
    let mut verts = Vec::new();
    let ends: Vec<&Rational> = if lo == hi { vec![&lo] } else { vec![&lo, &hi] };
    for x in ends {
        let mut partial: Vec<Vec<Rational>> = vec![vec![x.clone()]];
        for f in factors {
            let (a, b) = (f.lower_at(x), f.upper_at(x));
            let choices = if a == b { vec![a] } else { vec![a, b] };
            let mut next = Vec::with_capacity(partial.len() * choices.len());
            for v in &partial {
                for c in &choices {
                    let mut w = v.clone();
                    w.push(c.clone());
                    next.push(w);
                }
            }
            partial = next;
        }
        verts.extend(partial.into_iter().map(Point));
    }
    let mut hs = HalfspaceSystem::new(dim, Vec::new())?;
    for f in factors {
        hs.push_le(unit(dim, 0, -Rational::one()), -f.x_low.clone());
        hs.push_le(unit(dim, 0, Rational::one()), f.x_high.clone());
    }
    for (i, f) in factors.iter().enumerate() {
        // τx - y ≤ -ρ
        let mut a = unit(dim, 0, f.y_low_slope.clone());
        a[i + 1] = -Rational::one();
        hs.push_le(a, -f.y_low_intercept.clone());
        // -τ'x + y ≤ ρ'
        let mut a = unit(dim, 0, -f.y_high_slope.clone());
        a[i + 1] = Rational::one();
        hs.push_le(a, f.y_high_intercept.clone());
    }
    dedup_rows(&mut hs);
    Polytope::from_parts(dim, dedup_points(verts), Some(hs), None)
}

fn dedup_rows(hs: &mut HalfspaceSystem) {
    let mut seen = HashSet::new();
    hs.rows.retain(|r| seen.insert((r.a.clone(), r.b.clone())));
}

/// A single trapezoid as a polytope in the plane.
pub fn build_trapezoid(spec: &TrapezoidSpec) -> Result<Polytope> {
    product_polytope(std::slice::from_ref(spec))
}

/// `P × [0, H - 1]` with the new coordinate appended last.
pub fn prism(p: &Polytope, height: u64) -> Result<Polytope> {
    if height < 1 {
        return Err(Error::invalid("prism height must be at least 1"));
    }
    Ok(prism_unchecked(p, height))
}

fn prism_unchecked(p: &Polytope, height: u64) -> Polytope {
    let top = Rational::from_integer(BigInt::from(height - 1));
    let dim = p.dim + 1;
    let extend = |v: &Point, h: &Rational| {
        let mut c = v.0.clone();
        c.push(h.clone());
        Point(c)
    };
    let mut vertices: Vec<Point> = p.vertices.iter().map(|v| extend(v, &Rational::zero())).collect();
    if height > 1 {
        vertices.extend(p.vertices.iter().map(|v| extend(v, &top)));
    }
    let halfspaces = p.halfspaces.as_ref().map(|h| {
        let mut rows: Vec<Halfspace> = h
            .rows
            .iter()
            .map(|r| {
                let mut a = r.a.clone();
                a.push(Rational::zero());
                Halfspace { a, b: r.b.clone() }
            })
            .collect();
        rows.push(Halfspace {
            a: unit(dim, dim - 1, -Rational::one()),
            b: Rational::zero(),
        });
        rows.push(Halfspace {
            a: unit(dim, dim - 1, Rational::one()),
            b: top.clone(),
        });
        HalfspaceSystem { dim, rows }
    });
    let pieces = p.pieces.as_ref().map(|ps| {
        ps.iter()
            .map(|pc| Piece {
                tag: pc.tag.clone(),
                polytope: prism_unchecked(&pc.polytope, height),
            })
            .collect()
    });
    Polytope {
        dim,
        vertices,
        halfspaces,
        pieces,
    }
}

/// Convex hull of tagged pieces. Lattice points of the hull are the disjoint
/// union of the pieces' lattice points when the tags separate the pieces: there
/// must be a binary decision tree where every split is on a coordinate fixed to
/// 0 or 1 in all remaining pieces, with both values occurring.
pub fn tagged_hull(pieces: Vec<(Tag, Polytope)>) -> Result<Polytope> {
    if pieces.is_empty() {
        return Err(Error::invalid("hull of no pieces"));
    }
    let dim = pieces[0].1.dim;
    if pieces.iter().any(|(_, p)| p.dim != dim) {
        return Err(Error::invalid("pieces live in different dimensions"));
    }
    for i in 0..pieces.len() {
        for j in 0..i {
            if pieces[i].0 == pieces[j].0 {
                return Err(Error::invalid("duplicate piece tags"));
            }
        }
    }
    for (tag, p) in &pieces {
        for (&k, val) in tag {
            if k >= dim {
                return Err(Error::invalid(format!("tag position {k} outside dimension {dim}")));
            }
            if val.is_negative() || *val > Rational::one() {
                return Err(Error::invalid("tag values must lie in [0, 1]"));
            }
            if p.vertices.iter().any(|v| v.0[k] != *val) {
                return Err(Error::invalid(format!(
                    "piece does not fix coordinate {k} to its tag value"
                )));
            }
        }
    }
    if pieces.len() == 1 {
        return Ok(pieces.into_iter().next().unwrap().1);
    }
    let idx: Vec<usize> = (0..pieces.len()).collect();
    if !separable(&pieces, &idx) {
        return Err(Error::invalid(
            "piece tags do not separate the pieces into disjoint lattice sets",
        ));
    }
    let vertices = dedup_points(pieces.iter().flat_map(|(_, p)| p.vertices.iter().cloned()));
    let pieces = pieces
        .into_iter()
        .map(|(tag, polytope)| Piece { tag, polytope })
        .collect();
    Polytope::from_parts(dim, vertices, None, Some(pieces))
}

fn separable(pieces: &[(Tag, Polytope)], idx: &[usize]) -> bool {
    if idx.len() <= 1 {
        return true;
    }
    let zero = Rational::zero();
    let one = Rational::one();
    let first = &pieces[idx[0]].0;
    'coord: for &k in first.keys() {
        let mut zeros = Vec::new();
        let mut ones = Vec::new();
        for &i in idx {
            match pieces[i].0.get(&k) {
                Some(v) if *v == zero => zeros.push(i),
                Some(v) if *v == one => ones.push(i),
                _ => continue 'coord,
            }
        }
        if zeros.is_empty() || ones.is_empty() {
            continue;
        }
        if separable(pieces, &zeros) && separable(pieces, &ones) {
            return true;
        }
    }
    false
}

/// Exact hull membership by linear feasibility.
pub fn contains_hull(p: &Polytope, x: &Point) -> Result<bool> {
    if x.dim() != p.dim {
        return Err(Error::invalid(format!(
            "point of dimension {} tested against polytope of dimension {}",
            x.dim(),
            p.dim
        )));
    }
    Ok(HullOracle::new(&p.vertices).contains(x.coords()))
}

/// Per-axis `[⌈min⌉, ⌊max⌋]` of the vertex coordinates; `lo > hi` means empty.
pub fn integer_bounding_box(p: &Polytope) -> Vec<(BigInt, BigInt)> {
    (0..p.dim)
        .map(|i| {
            let lo = p.vertices.iter().map(|v| &v.0[i]).min().unwrap();
            let hi = p.vertices.iter().map(|v| &v.0[i]).max().unwrap();
            (ceil(lo), floor(hi))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn unit_square() -> Polytope {
        Polytope::cuboid(&[(int(0), int(1)), (int(0), int(1))]).unwrap()
    }

    #[test]
    fn translate_square() {
        let t = translate(&unit_square(), &Point::from_ints(&[1, 0])).unwrap();
        let mut got: Vec<_> = t.vertices().to_vec();
        got.sort();
        let mut want = vec![
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[2, 0]),
            Point::from_ints(&[1, 1]),
            Point::from_ints(&[2, 1]),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(translate(&unit_square(), &Point::zero(2)).unwrap(), unit_square());
        assert!(translate(&unit_square(), &Point::zero(3)).is_err());
    }

    #[test]
    fn dilate_examples() {
        let d = dilate(&unit_square(), &int(2)).unwrap();
        assert_eq!(
            d,
            Polytope::cuboid(&[(int(0), int(2)), (int(0), int(2))]).unwrap()
        );
        assert_eq!(dilate(&unit_square(), &int(1)).unwrap(), unit_square());
        let seg = Polytope::cuboid(&[(rat(1, 3), rat(2, 3))]).unwrap();
        let s = dilate(&seg, &int(3)).unwrap();
        assert_eq!(integer_bounding_box(&s), vec![(1.into(), 2.into())]);
        assert!(dilate(&seg, &int(0)).is_err());
        assert!(dilate(&seg, &rat(-1, 2)).is_err());
    }

    #[test]
    fn embed_checks_positions() {
        let seg = Polytope::cuboid(&[(int(0), int(1))]).unwrap();
        let e = embed_with_tags(&seg, 2, &[0], &[(1, int(1))]).unwrap();
        assert_eq!(e.dim(), 2);
        assert!(contains_h(e.halfspaces().unwrap(), &Point::from_ints(&[1, 1])).unwrap());
        assert!(!contains_h(e.halfspaces().unwrap(), &Point::from_ints(&[1, 0])).unwrap());
        assert!(embed_with_tags(&seg, 2, &[0], &[(0, int(1))]).is_err());
        assert!(embed_with_tags(&seg, 3, &[0], &[(1, int(1))]).is_err());
        let sq = unit_square();
        assert_eq!(embed_with_tags(&sq, 2, &[0, 1], &[]).unwrap(), sq);
    }

    #[test]
    fn product_of_one_factor_is_the_trapezoid() {
        let spec = TrapezoidSpec {
            x_low: int(0),
            x_high: int(1),
            y_low_intercept: int(0),
            y_low_slope: int(0),
            y_high_intercept: int(2),
            y_high_slope: int(-1),
        };
        let p = build_trapezoid(&spec).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vertex_count(), 4);
    }

    #[test]
    fn crossing_lines_give_a_triangle() {
        // y between 0 and 1 - x on [0, 2]: clipped to [0, 1], a triangle.
        let spec = TrapezoidSpec {
            x_low: int(0),
            x_high: int(2),
            y_low_intercept: int(0),
            y_low_slope: int(0),
            y_high_intercept: int(1),
            y_high_slope: int(-1),
        };
        let p = build_trapezoid(&spec).unwrap();
        assert_eq!(p.vertex_count(), 3);
    }

    #[test]
    fn empty_shared_range_is_degenerate() {
        let a = TrapezoidSpec {
            x_low: int(0),
            x_high: int(1),
            y_low_intercept: int(0),
            y_low_slope: int(0),
            y_high_intercept: int(1),
            y_high_slope: int(0),
        };
        let mut b = a.clone();
        b.x_low = int(2);
        b.x_high = int(3);
        assert!(matches!(
            product_polytope(&[a, b]),
            Err(Error::DegenerateConstruction(_))
        ));
    }

    #[test]
    fn prism_vertices() {
        let seg = Polytope::cuboid(&[(int(0), int(1))]).unwrap();
        assert_eq!(prism(&seg, 4).unwrap().vertex_count(), 4);
        assert_eq!(prism(&seg, 1).unwrap().vertex_count(), 2);
        assert!(prism(&seg, 0).is_err());
    }

    #[test]
    fn tagged_hull_rules() {
        let seg = Polytope::cuboid(&[(int(0), int(1))]).unwrap();
        let s0 = embed_with_tags(&seg, 2, &[0], &[(1, int(0))]).unwrap();
        let s1 = embed_with_tags(&seg, 2, &[0], &[(1, int(1))]).unwrap();
        let t0: Tag = [(1, int(0))].into_iter().collect();
        let t1: Tag = [(1, int(1))].into_iter().collect();
        let h = tagged_hull(vec![(t0.clone(), s0.clone()), (t1.clone(), s1.clone())]).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.pieces().unwrap().len(), 2);
        assert!(tagged_hull(vec![(t0.clone(), s0.clone()), (t0.clone(), s0.clone())]).is_err());
        assert_eq!(tagged_hull(vec![(t0.clone(), s0.clone())]).unwrap(), s0);
        // Tag not matching the piece.
        assert!(tagged_hull(vec![(t1, s0)]).is_err());
    }

    #[test]
    fn contains_h_examples() {
        let hs = HalfspaceSystem::new(
            1,
            vec![Halfspace {
                a: vec![int(1)],
                b: int(1),
            }],
        )
        .unwrap();
        assert!(contains_h(&hs, &Point::from_ints(&[1])).unwrap());
        assert!(!contains_h(&hs, &Point::new(vec![rat(3, 2)])).unwrap());
        assert!(contains_h(unit_square().halfspaces().unwrap(), &Point::new(vec![rat(1, 2), rat(1, 2)])).unwrap());
        assert!(contains_h(&hs, &Point::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn contains_hull_examples() {
        let simplex = Polytope::from_points(vec![
            Point::from_ints(&[0, 0, 0]),
            Point::from_ints(&[1, 0, 0]),
            Point::from_ints(&[0, 1, 0]),
            Point::from_ints(&[0, 0, 1]),
        ])
        .unwrap();
        assert!(contains_hull(&simplex, &Point::new(vec![rat(1, 4); 3])).unwrap());
        assert!(!contains_hull(&simplex, &Point::from_ints(&[2, 0, 0])).unwrap());
        for v in simplex.vertices() {
            assert!(contains_hull(&simplex, v).unwrap());
        }
    }

    #[test]
    fn bounding_boxes() {
        let e = rat(1, 4);
        let tri = Polytope::from_points(vec![
            Point::new(vec![e.clone(), e.clone()]),
            Point::new(vec![int(1), e.clone()]),
            Point::new(vec![e.clone(), int(1)]),
        ])
        .unwrap();
        assert_eq!(integer_bounding_box(&tri), vec![(1.into(), 1.into()), (1.into(), 1.into())]);
        let seg = Polytope::cuboid(&[(rat(1, 3), rat(2, 3))]).unwrap();
        assert_eq!(integer_bounding_box(&seg), vec![(1.into(), 0.into())]);
    }
}
