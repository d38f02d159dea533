//! Versioned JSON documents for fields, forms, ideals and reports.
//!
//! Every number is a decimal string: rationals as `p` or `p/q`, reals as
//! decimal floats. Elements of `O_F` are coordinate lists in the basis `{1, θ}`
//! with one entry per basis element.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::analytic::ClassPolynomial;
use crate::class_groups::{GroupTable, IsomorphismReport};
use crate::cm_field::{CMElem, CMField};
use crate::matrix::Mat2;
use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::ideals::FracIdeal;
use crate::mp::{Complex, Ctx};
use crate::number_ring::{BaseField, RingElem};
use crate::{catalog, reflex};

pub const SCHEMA_VERSION: &str = "1";

pub type Coords = Vec<String>;

pub fn elem_to_json(x: &RingElem) -> Coords {
    let mut v = vec![x.x().to_string()];
    if x.field().degree() == 2 {
        v.push(x.y().to_string());
    }
    v
}

pub fn elem_from_json(field: BaseField, c: &[String]) -> Result<RingElem> {
    if c.len() != field.degree() {
        return Err(Error::Parse(format!("expected {} coordinates, got {}", field.degree(), c.len())));
    }
    let parse = |s: &String| {
        BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
    };
    let x = parse(&c[0])?;
    let y = if c.len() == 2 { parse(&c[1])? } else { BigRational::from_integer(BigInt::from(0)) };
    Ok(RingElem::from_rationals(field, x, y))
}

fn default_version() -> String {
    SCHEMA_VERSION.into()
}

fn check_version(v: &str) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Parse(format!("unsupported schema_version {v:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CMFieldDoc {
    #[serde(default = "default_version")]
    pub schema_version: String,
    pub field: BaseField,
    #[serde(rename = "bK")]
    pub b: Coords,
    #[serde(rename = "cK")]
    pub c: Coords,
}

impl CMFieldDoc {
    pub fn from_field(k: &CMField) -> Self {
        CMFieldDoc {
            schema_version: default_version(),
            field: k.base(),
            b: elem_to_json(k.b()),
            c: elem_to_json(k.c()),
        }
    }

    pub fn to_field(&self) -> Result<CMField> {
        check_version(&self.schema_version)?;
        CMField::new(elem_from_json(self.field, &self.b)?, elem_from_json(self.field, &self.c)?)
    }
}

/// Accepts either a built-in catalog name or a JSON field document.
pub fn parse_cm_field(text: &str) -> Result<CMField> {
    let t = text.trim();
    if t.starts_with('{') {
        let doc: CMFieldDoc = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        doc.to_field()
    } else {
        catalog::builtin(t)
    }
}

/// `x + y·ω` as `[x, y]`.
pub type CMElemDoc = [Coords; 2];

pub fn cm_elem_to_json(z: &CMElem) -> CMElemDoc {
    [elem_to_json(z.x()), elem_to_json(z.y())]
}

pub fn cm_elem_from_json(k: &CMField, d: &CMElemDoc) -> Result<CMElem> {
    Ok(k.elem(elem_from_json(k.base(), &d[0])?, elem_from_json(k.base(), &d[1])?))
}

/// Rows `[[a, b], [c, d]]`.
pub type MatDoc = [[Coords; 2]; 2];

pub fn mat_to_json(m: &Mat2) -> MatDoc {
    [[elem_to_json(&m.a), elem_to_json(&m.b)], [elem_to_json(&m.c), elem_to_json(&m.d)]]
}

pub type FormDoc = [Coords; 3];

pub fn form_to_json(q: &QuadForm) -> FormDoc {
    [elem_to_json(&q.a), elem_to_json(&q.b), elem_to_json(&q.c)]
}

pub fn form_from_json(field: BaseField, d: &FormDoc) -> Result<QuadForm> {
    Ok(QuadForm::new(elem_from_json(field, &d[0])?, elem_from_json(field, &d[1])?, elem_from_json(field, &d[2])?))
}

/// `(1/D)·((a·ω + b)·O_F + c·O_F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDoc {
    pub denominator: String,
    pub hnf: [Coords; 3],
}

impl IdealDoc {
    pub fn from_ideal(i: &FracIdeal) -> Self {
        let (a, b, c) = i.hnf();
        IdealDoc { denominator: i.den().to_string(), hnf: [elem_to_json(a), elem_to_json(b), elem_to_json(c)] }
    }

    pub fn to_ideal(&self, k: &CMField) -> Result<FracIdeal> {
        let den = BigInt::from_str(self.denominator.trim())
            .map_err(|_| Error::Parse(format!("bad denominator {:?}", self.denominator)))?;
        let f = k.base();
        FracIdeal::from_hnf(
            k,
            &den,
            elem_from_json(f, &self.hnf[0])?,
            elem_from_json(f, &self.hnf[1])?,
            elem_from_json(f, &self.hnf[2])?,
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableDoc<E> {
    pub elements: Vec<E>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub bijection: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Checks {
    pub bijective: bool,
    pub homomorphism: bool,
    pub cardinality: bool,
    pub axioms: bool,
    pub forms_valid: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassGroupDoc {
    pub schema_version: String,
    pub cm_field: CMFieldDoc,
    #[serde(rename = "N")]
    pub n: String,
    pub order: String,
    pub expected_order: String,
    pub passed: bool,
    pub checks: Checks,
    #[serde(flatten)]
    pub forms: TableDoc<FormDoc>,
    pub ray_classes: Vec<IdealDoc>,
}

impl ClassGroupDoc {
    pub fn from_report(r: &IsomorphismReport) -> Self {
        ClassGroupDoc {
            schema_version: default_version(),
            cm_field: CMFieldDoc::from_field(&r.ray.field),
            n: r.ray.modulus.to_string(),
            order: r.forms.order().to_string(),
            expected_order: r.expected_order.to_string(),
            passed: r.passed(),
            checks: Checks {
                bijective: r.bijective,
                homomorphism: r.homomorphism,
                cardinality: r.cardinality,
                axioms: r.axioms,
                forms_valid: r.forms_valid,
            },
            forms: table_doc(&r.forms, form_to_json, r.bijection.clone()),
            ray_classes: r.ray.reps().iter().map(IdealDoc::from_ideal).collect(),
        }
    }
}

pub fn table_doc<T, E>(g: &GroupTable<T>, f: impl Fn(&T) -> E, bijection: Vec<usize>) -> TableDoc<E> {
    TableDoc { elements: g.elements.iter().map(f).collect(), table: g.table.clone(), identity: g.identity, bijection }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub re: String,
    pub im: String,
}

impl ComplexDoc {
    pub fn new(z: &Complex, ctx: &mut Ctx) -> Self {
        ComplexDoc { re: ctx.format_real(&z.re), im: ctx.format_real(&z.im) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueDoc {
    pub re: String,
    pub im: String,
    pub error_bound: String,
}

/// Renders `2^e` as a short decimal string.
pub fn pow2_decimal(e: f64) -> String {
    if e == f64::NEG_INFINITY {
        return "0".into();
    }
    let t = e * std::f64::consts::LOG10_2;
    let exp = t.floor();
    let mantissa = 10f64.powf(t - exp);
    format!("{mantissa:.3}e{exp}")
}

pub fn log2_decimal(e: f64) -> String {
    if e.is_finite() {
        format!("{e:.3}")
    } else if e < 0.0 {
        "-inf".into()
    } else {
        "inf".into()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SiegelDoc {
    pub schema_version: String,
    pub cm_field: CMFieldDoc,
    #[serde(rename = "N")]
    pub n: String,
    pub prec: String,
    pub classes: Vec<IdealDoc>,
    pub values: Vec<ValueDoc>,
    pub polynomial: Vec<ComplexDoc>,
    pub nearest_integers: Vec<[String; 2]>,
    /// `log2` of each coefficient's distance to its nearest element of `O_K`.
    pub residuals: Vec<String>,
    pub coefficient_error_bounds: Vec<String>,
    pub log2_separation: String,
    /// Every residual is below `2^(32 - prec)`.
    pub near_algebraic: bool,
    /// The error bounds pin down every coefficient in `O_K`.
    pub certified: bool,
}

impl SiegelDoc {
    pub fn new(k: &CMField, n: u64, prec: usize, p: &ClassPolynomial, ctx: &mut Ctx) -> Self {
        let values = p
            .values
            .iter()
            .map(|v| ValueDoc {
                re: ctx.format_real(&v.value.re),
                im: ctx.format_real(&v.value.im),
                error_bound: pow2_decimal(v.log2_error),
            })
            .collect();
        SiegelDoc {
            schema_version: default_version(),
            cm_field: CMFieldDoc::from_field(k),
            n: n.to_string(),
            prec: prec.to_string(),
            classes: p.classes.iter().map(IdealDoc::from_ideal).collect(),
            values,
            polynomial: p.coefficients.iter().map(|c| ComplexDoc::new(c, ctx)).collect(),
            nearest_integers: p.nearest.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect(),
            residuals: p.log2_residuals.iter().map(|&r| log2_decimal(r)).collect(),
            coefficient_error_bounds: p.log2_coefficient_errors.iter().map(|&e| pow2_decimal(e)).collect(),
            log2_separation: log2_decimal(p.log2_separation(ctx)),
            near_algebraic: p.near_algebraic(prec),
            certified: p.certified(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflexDoc {
    pub schema_version: String,
    pub galois: reflex::GaloisData,
    pub primitive: bool,
    pub reflex: reflex::ReflexData,
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    serde_json::to_string_pretty(doc).map(|s| s + "\n").map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trip() {
        for name in catalog::names() {
            let k = catalog::builtin(name).unwrap();
            let json = to_json(&CMFieldDoc::from_field(&k)).unwrap();
            assert_eq!(parse_cm_field(&json).unwrap(), k);
        }
        let raw = r#"{"field":{"kind":"rational"},"bK":["1"],"cK":["6"]}"#;
        assert_eq!(parse_cm_field(raw).unwrap(), catalog::sqrt_minus_23());
        assert!(parse_cm_field(r#"{"field":{"kind":"rational"},"bK":["0"],"cK":["-1"]}"#).is_err());
        assert!(parse_cm_field(r#"{"schema_version":"9","field":{"kind":"rational"},"bK":["0"],"cK":["1"]}"#).is_err());
    }

    #[test]
    fn ideal_and_form_round_trip() {
        let k = catalog::zeta5();
        let f = k.base();
        let x = k.elem(f.one(), f.int(3));
        let i = FracIdeal::from_generators(&k, &[k.int(2), k.int(2) * k.omega(), x.clone(), &x * &k.omega()]).unwrap();
        let i = i.scale(&k.int(3).inv().unwrap()).unwrap();
        let doc = IdealDoc::from_ideal(&i);
        assert_eq!(doc.to_ideal(&k).unwrap(), i);
        let q = QuadForm::new(f.int(3), f.elem(1, -1), f.elem(2, 1));
        assert_eq!(form_from_json(f, &form_to_json(&q)).unwrap(), q);
        assert!(elem_from_json(f, &["1".into()]).is_err());
        assert_eq!(elem_from_json(f, &["1/2".into(), "-3".into()]).unwrap(), RingElem::from_rationals(
            f,
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer((-3).into()),
        ));
    }

    #[test]
    fn decimal_powers() {
        assert_eq!(pow2_decimal(10.0), "1.024e3");
        assert_eq!(pow2_decimal(f64::NEG_INFINITY), "0");
        assert_eq!(log2_decimal(-2.5), "-2.500");
    }
}
