//! Reading command-line inputs: inline JSON, files, or built-in names.

use std::path::Path;

use cmforms::cm_field::CMField;
use cmforms::forms::QuadForm;
use cmforms::ideals::FracIdeal;
use cmforms::number_ring::BaseField;
use cmforms::reflex::GaloisData;
use cmforms::serial::{self, CMElemDoc, FormDoc, IdealDoc};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::{CliError, CliResult, Global};

/// The argument itself if it looks like JSON, else the contents of the named file.
pub fn text_of(arg: &str) -> CliResult<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Config(format!("file {arg:?} does not exist")));
    }
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

pub fn json_of<T: DeserializeOwned>(arg: &str, what: &str) -> CliResult<T> {
    let text = text_of(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid {what}: {e}")))
}

pub fn cm_field(g: &Global) -> CliResult<CMField> {
    let arg = g
        .cm_field
        .as_deref()
        .ok_or_else(|| CliError::Config("--cm-field is required".into()))?;
    let k = if cmforms::catalog::names().contains(&arg) {
        cmforms::catalog::builtin(arg)?
    } else if !arg.trim_start().starts_with('{') && !Path::new(arg).exists() {
        return Err(CliError::Config(format!(
            "{arg:?} is neither a built-in CM-field ({}) nor an existing file",
            cmforms::catalog::names().join(", ")
        )));
    } else {
        serial::parse_cm_field(&text_of(arg)?)?
    };
    if let Some(f) = &g.field {
        let f = BaseField::parse(f)?;
        if f != k.base() {
            return Err(CliError::Config(format!("--field {f} does not match the CM-field's base {}", k.base())));
        }
    }
    Ok(k)
}

pub fn form(k: &CMField, arg: &str) -> CliResult<QuadForm> {
    let doc: FormDoc = json_of(arg, "form")?;
    Ok(serial::form_from_json(k.base(), &doc)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IdealInput {
    Hnf(IdealDoc),
    Generators {
        /// `O_K`-generators `x + y·ω` as `[x, y]`.
        generators: Vec<CMElemDoc>,
    },
}

pub fn ideal(k: &CMField, arg: &str) -> CliResult<FracIdeal> {
    match json_of::<IdealInput>(arg, "ideal")? {
        IdealInput::Hnf(doc) => Ok(doc.to_ideal(k)?),
        IdealInput::Generators { generators } => {
            let w = k.omega();
            let mut gens = Vec::new();
            for g in &generators {
                let z = serial::cm_elem_from_json(k, g)?;
                gens.push(&z * &w);
                gens.push(z);
            }
            Ok(FracIdeal::from_generators(k, &gens)?)
        }
    }
}

pub fn galois(arg: &str) -> CliResult<GaloisData> {
    if let Some((_, d)) = cmforms::reflex::catalog().into_iter().find(|(n, _)| *n == arg) {
        return Ok(d);
    }
    json_of(arg, "Galois data")
}
