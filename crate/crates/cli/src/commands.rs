use std::time::Instant;

use cmforms::analytic::{class_polynomial, invariant_setup, InvariantSetup};
use cmforms::class_groups::{
    compose, default_norm_bound, enumerate_ray_classes, verify_isomorphism, Enumeration,
};
use cmforms::cm_field::CMField;
use cmforms::forms::{equivalence_certificate, equivalent, QuadForm};
use cmforms::ideals::FracIdeal;
use cmforms::mp::Ctx;
use cmforms::reflex::reflex_of;
use cmforms::serial::{
    self, cm_elem_to_json, elem_to_json, form_to_json, mat_to_json, to_json, CMElemDoc, CMFieldDoc,
    ClassGroupDoc, ComplexDoc, Coords, FormDoc, IdealDoc, MatDoc, ReflexDoc, SiegelDoc, SCHEMA_VERSION,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{input, Cli, CliError, CliResult, Command, Global, IdealOp};

pub fn run(cli: &Cli) -> CliResult<u8> {
    let g = &cli.global;
    if g.n == 0 {
        return Err(CliError::Config("N must be at least 1".into()));
    }
    match &cli.command {
        Command::Classgroup { verify } => classgroup(g, *verify),
        Command::Compose { q1, q2 } => compose_cmd(g, q1, q2),
        Command::FormEquiv { q1, q2 } => form_equiv(g, q1, q2),
        Command::Ideal { op } => ideal(g, op),
        Command::Reflex { galois } => reflex(g, galois),
        Command::Siegel => siegel(g),
        Command::SetupVerify { samples } => setup_verify(g, *samples),
    }
}

/// Writes the report to `--json` (via a temporary file and a rename) or stdout.
fn emit<T: Serialize>(g: &Global, doc: &T) -> CliResult<()> {
    let text = to_json(doc)?;
    match &g.json {
        None => print!("{text}"),
        Some(path) => {
            let mut tmp = path.clone().into_os_string();
            tmp.push(".tmp");
            let io = |source| CliError::Io { path: path.clone(), source };
            std::fs::write(&tmp, text).map_err(io)?;
            std::fs::rename(&tmp, path).map_err(io)?;
        }
    }
    Ok(())
}

fn level(g: &Global) -> BigInt {
    BigInt::from(g.n)
}

fn member(k: &CMField, q: &QuadForm, n: &BigInt, name: &str) -> CliResult<()> {
    if q.membership(k, n) {
        Ok(())
    } else {
        Err(CliError::Membership(format!("{name} = {q:?} is not in Q_F(N, d_K) for N = {n}")))
    }
}

#[derive(Serialize)]
struct Certificate {
    i: usize,
    j: usize,
    product: usize,
    gamma: MatDoc,
}

#[derive(Serialize)]
struct ClassGroupReport {
    #[serde(flatten)]
    group: ClassGroupDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificates: Option<Vec<Certificate>>,
}

fn classgroup(g: &Global, verify: bool) -> CliResult<u8> {
    let k = input::cm_field(g)?;
    let n = level(g);
    let bound = g.norm_bound.unwrap_or_else(|| default_norm_bound(&k, g.n));
    let t = Instant::now();
    let r = verify_isomorphism(&k, g.n, bound, g.budget)?;
    eprintln!("classgroup: order {} in {:.2?}", r.forms.order(), t.elapsed());
    let mut passed = r.passed();
    let certificates = if verify {
        let t = Instant::now();
        let f = &r.forms;
        let mut out = Vec::new();
        for i in 0..f.order() {
            for j in 0..f.order() {
                let product = f.mul(i, j);
                let q = compose(&k, &f.elements[i], &f.elements[j], &n)?;
                match equivalence_certificate(&k, &q, &f.elements[product], &n, g.budget)? {
                    Some(gamma) if q.act(&gamma)? == f.elements[product] => {
                        out.push(Certificate { i, j, product, gamma: mat_to_json(&gamma) })
                    }
                    _ => passed = false,
                }
            }
        }
        eprintln!("classgroup: {} certificates in {:.2?}", out.len(), t.elapsed());
        Some(out)
    } else {
        None
    };
    let mut group = ClassGroupDoc::from_report(&r);
    group.passed = passed;
    emit(g, &ClassGroupReport { group, certificates })?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct ComposeReport {
    schema_version: &'static str,
    #[serde(rename = "N")]
    n: String,
    q1: FormDoc,
    q2: FormDoc,
    composed: FormDoc,
}

fn compose_cmd(g: &Global, a: &str, b: &str) -> CliResult<u8> {
    let k = input::cm_field(g)?;
    let n = level(g);
    let (q1, q2) = (input::form(&k, a)?, input::form(&k, b)?);
    member(&k, &q1, &n, "Q1")?;
    member(&k, &q2, &n, "Q2")?;
    let q = compose(&k, &q1, &q2, &n)?;
    emit(
        g,
        &ComposeReport {
            schema_version: SCHEMA_VERSION,
            n: n.to_string(),
            q1: form_to_json(&q1),
            q2: form_to_json(&q2),
            composed: form_to_json(&q),
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct EquivReport {
    schema_version: &'static str,
    #[serde(rename = "N")]
    n: String,
    equivalent: bool,
    /// `γ ∈ Γ_{F,1}(N)` with `Q1^γ = Q2`.
    certificate: Option<MatDoc>,
}

fn form_equiv(g: &Global, a: &str, b: &str) -> CliResult<u8> {
    let k = input::cm_field(g)?;
    let n = level(g);
    let (q1, q2) = (input::form(&k, a)?, input::form(&k, b)?);
    member(&k, &q1, &n, "Q1")?;
    member(&k, &q2, &n, "Q2")?;
    let eq = equivalent(&k, &q1, &q2, &n, g.budget)?;
    let cert = equivalence_certificate(&k, &q1, &q2, &n, g.budget)?;
    if eq != cert.is_some() {
        return Err(CliError::Check("ray-class test and certificate search disagree".into()));
    }
    emit(
        g,
        &EquivReport {
            schema_version: SCHEMA_VERSION,
            n: n.to_string(),
            equivalent: eq,
            certificate: cert.as_ref().map(mat_to_json),
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct IdealReport {
    schema_version: &'static str,
    op: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    ideal: Option<IdealDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    same_class: Option<bool>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    n: Option<String>,
}

fn ideal(g: &Global, op: &IdealOp) -> CliResult<u8> {
    let k = input::cm_field(g)?;
    let out = |op: &'static str, i: FracIdeal| IdealReport {
        schema_version: SCHEMA_VERSION,
        op,
        norm: Some(i.abs_norm().to_string()),
        ideal: Some(IdealDoc::from_ideal(&i)),
        same_class: None,
        n: None,
    };
    let report = match op {
        IdealOp::Mul { a, b } => out("mul", input::ideal(&k, a)?.mul(&input::ideal(&k, b)?)),
        IdealOp::Inv { a } => out("inv", input::ideal(&k, a)?.inv()),
        IdealOp::Reduce { a } => out("reduce", input::ideal(&k, a)?),
        IdealOp::ClassTest { a, b } => {
            let n = level(g);
            let (a, b) = (input::ideal(&k, a)?, input::ideal(&k, b)?);
            for (name, i) in [("A", &a), ("B", &b)] {
                if !i.is_coprime_to(&n) {
                    return Err(CliError::Membership(format!("{name} is not prime to N = {n}")));
                }
            }
            IdealReport {
                schema_version: SCHEMA_VERSION,
                op: "class-test",
                ideal: None,
                norm: None,
                same_class: Some(a.same_ray_class(&b, &n, g.budget)?),
                n: Some(n.to_string()),
            }
        }
    };
    emit(g, &report)?;
    Ok(0)
}

fn reflex(g: &Global, arg: &str) -> CliResult<u8> {
    let data = input::galois(arg)?;
    let r = reflex_of(&data)?;
    emit(
        g,
        &ReflexDoc { schema_version: SCHEMA_VERSION.into(), primitive: data.is_primitive(), galois: data, reflex: r },
    )?;
    Ok(0)
}

fn siegel(g: &Global) -> CliResult<u8> {
    let k = input::cm_field(g)?;
    let mut ctx = Ctx::new(g.prec)?;
    let bound = g.norm_bound.unwrap_or_else(|| default_norm_bound(&k, g.n));
    let t = Instant::now();
    let p = class_polynomial(&k, g.n, bound, g.budget, &mut ctx)?;
    eprintln!("siegel: {} classes in {:.2?}", p.values.len(), t.elapsed());
    let doc = SiegelDoc::new(&k, g.n, g.prec, &p, &mut ctx);
    emit(g, &doc)?;
    let worst_error = p.values.iter().map(|v| v.log2_error).fold(f64::NEG_INFINITY, f64::max);
    let separated = p.values.len() < 2 || worst_error + 1.0 < p.log2_separation(&ctx);
    if !doc.certified || !separated {
        return Err(CliError::Precision(format!(
            "{} bits do not certify the report (coefficients pinned down: {}, values separated: {separated})",
            g.prec, doc.certified
        )));
    }
    Ok(0)
}

#[derive(Serialize)]
struct SetupDoc {
    source: &'static str,
    class_ideal: IdealDoc,
    xi1: CMElemDoc,
    xi2: CMElemDoc,
    a: MatDoc,
    d: Coords,
    a1: MatDoc,
    cm_values: Vec<ComplexDoc>,
    verified: bool,
}

#[derive(Serialize)]
struct SetupReport {
    schema_version: &'static str,
    cm_field: CMFieldDoc,
    #[serde(rename = "N")]
    n: String,
    seed: String,
    setups: Vec<SetupDoc>,
    all_verified: bool,
}

fn setup_doc(source: &'static str, s: &InvariantSetup, n: &BigInt, ctx: &mut Ctx) -> CliResult<SetupDoc> {
    Ok(SetupDoc {
        source,
        class_ideal: IdealDoc::from_ideal(&s.class_ideal),
        xi1: cm_elem_to_json(&s.xi1),
        xi2: cm_elem_to_json(&s.xi2),
        a: mat_to_json(&s.a),
        d: elem_to_json(&s.d),
        a1: mat_to_json(&s.a1),
        cm_values: s.cm_values.iter().map(|z| ComplexDoc::new(z, ctx)).collect(),
        verified: s.verify(n)?,
    })
}

fn setup_verify(g: &Global, samples: usize) -> CliResult<u8> {
    let k = input::cm_field(g)?;
    let n = level(g);
    let mut ctx = Ctx::new(g.prec)?;
    let bound = g.norm_bound.unwrap_or_else(|| default_norm_bound(&k, g.n));
    let group = match enumerate_ray_classes(&k, g.n, bound, g.budget)? {
        Enumeration::Complete(r) => r,
        Enumeration::Incomplete { classes, expected } => {
            return Err(CliError::Incomplete(format!("found {} of {expected} ray classes", classes.len())))
        }
    };
    let mut setups = Vec::new();
    for c in group.reps() {
        let s = invariant_setup(c, &n, &mut ctx)?;
        setups.push(setup_doc("ray class", &s, &n, &mut ctx)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let f = k.base();
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < samples && attempts < 100 * samples.max(1) {
        attempts += 1;
        let mut coord = || {
            let x: i64 = rng.gen_range(-9..=9);
            let y: i64 = if f.degree() == 2 { rng.gen_range(-9..=9) } else { 0 };
            f.elem(x, y)
        };
        let gens: Vec<_> = (0..2).map(|_| k.elem(coord(), coord())).collect();
        if gens.iter().all(|z| z.is_zero()) {
            continue;
        }
        let w = k.omega();
        let all: Vec<_> = gens.iter().flat_map(|z| [z.clone(), z * &w]).collect();
        let Ok(c) = FracIdeal::from_generators(&k, &all) else { continue };
        if !c.is_coprime_to(&n) {
            continue;
        }
        let s = invariant_setup(&c, &n, &mut ctx)?;
        setups.push(setup_doc("random ideal", &s, &n, &mut ctx)?);
        drawn += 1;
    }
    let all_verified = setups.iter().all(|s| s.verified);
    emit(
        g,
        &SetupReport {
            schema_version: SCHEMA_VERSION,
            cm_field: serial::CMFieldDoc::from_field(&k),
            n: n.to_string(),
            seed: g.seed.to_string(),
            setups,
            all_verified,
        },
    )?;
    Ok(if all_verified { 0 } else { 1 })
}
