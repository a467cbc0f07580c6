//! JSON forms of the library's artifacts. Rationals are `"num/den"` strings,
//! large integers are decimal strings, and tag keys are 1-based coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::count::{CountTable, TranslationFamily};
use crate::ehrhart::{DilationFamily, EhrhartPolynomial};
use crate::error::{Error, Result};
use crate::fluctuation::{FloorFactor, QpTerm, QuasiPolynomial, RealizationResult};
use crate::geometry::{tagged_hull, Halfspace, HalfspaceSystem, Point, Polytope, Tag};
use crate::qde::{Factor, OracleResult, QdeGadget};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceJson {
    pub a: Vec<String>,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceJson {
    pub tag: BTreeMap<String, String>,
    pub polytope: PolytopeJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub polytope: PolytopeJson,
    pub direction: Vec<String>,
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountTableJson {
    pub entries: Vec<(i64, u64)>,
    pub argmin: i64,
    pub min: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationFamilyJson {
    pub polytope: PolytopeJson,
    #[serde(rename = "M")]
    pub m: String,
    #[serde(rename = "validN")]
    pub valid_n: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub alpha: String,
    pub beta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub gamma: String,
    #[serde(default)]
    pub factors: Vec<FactorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiPolynomialJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationJson {
    pub polytope: PolytopeJson,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "M")]
    pub m: String,
    pub dim: usize,
    #[serde(rename = "vertexCount")]
    pub vertex_count: usize,
    #[serde(rename = "validN")]
    pub valid_n: String,
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn parse_integer(s: &str) -> Result<BigInt> {
    let q = parse_rational(s)?;
    if !q.is_integer() {
        return Err(Error::invalid(format!("expected an integer, got {s:?}")));
    }
    Ok(q.to_integer())
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    let v = parse_integer(s)?;
    u64::try_from(v).map_err(|_| Error::invalid(format!("{what} must be a nonnegative 64-bit integer")))
}

pub fn polytope_to_json(p: &Polytope) -> PolytopeJson {
    PolytopeJson {
        dim: p.dim(),
        vertices: p.vertices().iter().map(|v| rationals(v.coords())).collect(),
        halfspaces: p.halfspaces().map(|h| {
            h.rows()
                .iter()
                .map(|r| HalfspaceJson {
                    a: rationals(&r.a),
                    b: format_rational(&r.b),
                })
                .collect()
        }),
        pieces: p.pieces().map(|ps| {
            ps.iter()
                .map(|pc| PieceJson {
                    tag: pc
                        .tag
                        .iter()
                        .map(|(k, v)| ((k + 1).to_string(), format_rational(v)))
                        .collect(),
                    polytope: polytope_to_json(&pc.polytope),
                })
                .collect()
        }),
    }
}

fn parse_tag(tag: &BTreeMap<String, String>, dim: usize) -> Result<Tag> {
    tag.iter()
        .map(|(k, v)| {
            let pos: usize = k
                .parse()
                .map_err(|_| Error::invalid(format!("tag key {k:?} is not a coordinate number")))?;
            if pos == 0 || pos > dim {
                return Err(Error::invalid(format!("tag key {pos} outside 1..={dim}")));
            }
            Ok((pos - 1, parse_rational(v)?))
        })
        .collect()
}

/// Pieces are re-assembled through `tagged_hull`, so their separation is
/// re-checked, and the stated vertex list must match the pieces' vertices.
pub fn polytope_from_json(j: &PolytopeJson) -> Result<Polytope> {
    let vertices = j
        .vertices
        .iter()
        .map(|v| Point::try_new(parse_all(v)?))
        .collect::<Result<Vec<_>>>()?;
    let halfspaces = match &j.halfspaces {
        None => None,
        Some(rows) => {
            let rows = rows
                .iter()
                .map(|r| {
                    Ok(Halfspace {
                        a: parse_all(&r.a)?,
                        b: parse_rational(&r.b)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(HalfspaceSystem::new(j.dim, rows)?)
        }
    };
    let Some(pieces) = &j.pieces else {
        return Polytope::from_parts(j.dim, vertices, halfspaces, None);
    };
    let parsed = pieces
        .iter()
        .map(|pc| Ok((parse_tag(&pc.tag, j.dim)?, polytope_from_json(&pc.polytope)?)))
        .collect::<Result<Vec<_>>>()?;
    let hull = tagged_hull(parsed)?;
    let stated: std::collections::HashSet<&Point> = vertices.iter().collect();
    let built: std::collections::HashSet<&Point> = hull.vertices().iter().collect();
    if stated != built {
        return Err(Error::invalid("vertex list differs from the union of piece vertices"));
    }
    if halfspaces.is_some() || hull.pieces().is_some() {
        let pieces = hull.pieces().map(<[_]>::to_vec);
        return Polytope::from_parts(j.dim, vertices, halfspaces, pieces);
    }
    // A single piece: its tag is informational only.
    Ok(hull)
}

pub fn family_to_json(f: &TranslationFamily) -> FamilyJson {
    FamilyJson {
        polytope: polytope_to_json(&f.base),
        direction: rationals(f.direction.coords()),
        denominator: f.denominator.to_string(),
    }
}

pub fn family_from_json(j: &FamilyJson) -> Result<TranslationFamily> {
    TranslationFamily::new(
        polytope_from_json(&j.polytope)?,
        Point::try_new(parse_all(&j.direction)?)?,
        parse_u64(&j.denominator, "denominator")?,
    )
}

/// Accepts a family document, or any document with a `"family"` member (a gadget).
pub fn family_from_value(v: &Value) -> Result<TranslationFamily> {
    let inner = v.get("family").unwrap_or(v);
    let j: FamilyJson = serde_json::from_value(inner.clone())
        .map_err(|e| Error::invalid(format!("malformed family JSON: {e}")))?;
    family_from_json(&j)
}

pub fn table_to_json(t: &CountTable) -> CountTableJson {
    CountTableJson {
        entries: t.entries.clone(),
        argmin: t.argmin,
        min: t.min,
    }
}

pub fn dilation_to_json(d: &DilationFamily) -> DilationFamilyJson {
    DilationFamilyJson {
        polytope: polytope_to_json(&d.q),
        m: d.m.to_string(),
        valid_n: d.valid_n.to_string(),
    }
}

pub fn dilation_from_json(j: &DilationFamilyJson) -> Result<DilationFamily> {
    Ok(DilationFamily {
        q: polytope_from_json(&j.polytope)?,
        m: parse_u64(&j.m, "M")?,
        valid_n: parse_u64(&j.valid_n, "validN")?,
    })
}

pub fn polynomial_to_json(p: &EhrhartPolynomial) -> PolynomialJson {
    PolynomialJson {
        coefficients: rationals(&p.coefficients),
    }
}

pub fn polynomial_from_json(j: &PolynomialJson) -> Result<EhrhartPolynomial> {
    Ok(EhrhartPolynomial {
        coefficients: parse_all(&j.coefficients)?,
    })
}

pub fn qp_to_json(qp: &QuasiPolynomial) -> QuasiPolynomialJson {
    QuasiPolynomialJson {
        terms: qp
            .terms
            .iter()
            .map(|t| TermJson {
                gamma: t.gamma.to_string(),
                factors: t
                    .factors
                    .iter()
                    .map(|f| FactorJson {
                        alpha: format_rational(&f.alpha),
                        beta: format_rational(&f.beta),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn qp_from_json(j: &QuasiPolynomialJson) -> Result<QuasiPolynomial> {
    let terms = j
        .terms
        .iter()
        .map(|t| {
            Ok(QpTerm {
                gamma: parse_integer(&t.gamma)?,
                factors: t
                    .factors
                    .iter()
                    .map(|f| Ok(FloorFactor::new(parse_rational(&f.alpha)?, parse_rational(&f.beta)?)))
                    .collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    QuasiPolynomial::new(terms)
}

pub fn realization_to_json(r: &RealizationResult) -> RealizationJson {
    RealizationJson {
        polytope: polytope_to_json(&r.q),
        k: r.k.to_string(),
        m: r.m.to_string(),
        dim: r.dim,
        vertex_count: r.vertex_count,
        valid_n: r.valid_n.to_string(),
    }
}

pub fn realization_from_json(j: &RealizationJson) -> Result<RealizationResult> {
    Ok(RealizationResult {
        q: polytope_from_json(&j.polytope)?,
        k: parse_integer(&j.k)?,
        m: parse_u64(&j.m, "M")?,
        dim: j.dim,
        vertex_count: j.vertex_count,
        valid_n: parse_u64(&j.valid_n, "validN")?,
    })
}

fn factor_json(f: &Factor) -> Value {
    let (kind, a, b) = match *f {
        Factor::PlusLinear { p, q } => ("plusLinear", ("p", p), ("q", q)),
        Factor::MinusLinear { p, q } => ("minusLinear", ("p", p), ("q", q)),
        Factor::PlusFloor { r, beta } => ("plusFloor", ("r", r), ("beta", beta)),
        Factor::MinusFloor { r, beta } => ("minusFloor", ("r", r), ("beta", beta)),
    };
    json!({ "type": kind, a.0: a.1.to_string(), b.0: b.1.to_string() })
}

pub fn gadget_to_json(g: &QdeGadget) -> Value {
    json!({
        "instance": {
            "alpha": g.instance.alpha.to_string(),
            "beta": g.instance.beta.to_string(),
            "gamma": g.instance.gamma.to_string(),
        },
        "mode": g.mode.name(),
        "N": g.n.to_string(),
        "epsilon": format_rational(&g.epsilon),
        "L": g.big_l.to_string(),
        "delta": g.delta.as_ref().map(format_rational),
        "K": g.big_k.map(|k| k.to_string()),
        "hull": polytope_to_json(&g.hull),
        "family": family_to_json(&g.family),
        "terms": g.terms.terms.iter()
            .map(|t| t.iter().map(factor_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn oracle_to_json(o: &OracleResult) -> Value {
    json!({
        "min": o.min_value.to_string(),
        "argmin": [o.argmin.0, o.argmin.1],
        "feasible": o.feasible,
    })
}

/// Parses a JSON document into `T`, reporting malformed input as invalid input.
pub fn parse_document<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed {what} JSON: {e}")))
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn polytope_round_trip() {
        let p = Polytope::cuboid(&[(int(0), rat(1, 2)), (rat(-1, 3), int(2))]).unwrap();
        let j = polytope_to_json(&p);
        let text = to_pretty(&j);
        let back: PolytopeJson = parse_document(&text, "polytope").unwrap();
        assert_eq!(back, j);
        assert_eq!(polytope_from_json(&back).unwrap(), p);
        assert_eq!(j.vertices[0], vec!["0/1".to_string(), "-1/3".to_string()]);
    }

    #[test]
    fn tag_keys_are_one_based() {
        let lo = Polytope::from_points(vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0])]).unwrap();
        let hi = Polytope::from_points(vec![Point::from_ints(&[0, 1]), Point::from_ints(&[2, 1])]).unwrap();
        let tag = |v| Tag::from([(1usize, int(v))]);
        let h = tagged_hull(vec![(tag(0), lo), (tag(1), hi)]).unwrap();
        let j = polytope_to_json(&h);
        assert_eq!(j.pieces.as_ref().unwrap()[1].tag.get("2").map(String::as_str), Some("1/1"));
        assert_eq!(polytope_from_json(&j).unwrap(), h);
    }

    #[test]
    fn malformed_input_is_invalid() {
        let bad = r#"{"dim": 1, "vertices": [["x"]]}"#;
        let j: PolytopeJson = parse_document(bad, "polytope").unwrap();
        assert!(matches!(polytope_from_json(&j), Err(Error::InvalidInput(_))));
        assert!(parse_document::<PolytopeJson>("{", "polytope").is_err());
    }

    #[test]
    fn qp_schema_example() {
        let text = r#"{"terms": [{"gamma": "−3", "factors": [{"alpha":"1/2","beta":"0"}]}]}"#;
        let qp = qp_from_json(&parse_document(text, "qp").unwrap()).unwrap();
        assert_eq!(qp.terms[0].gamma, BigInt::from(-3));
        let again = qp_from_json(&qp_to_json(&qp)).unwrap();
        assert_eq!(again, qp);
    }
}
