//! Built-in CM-fields used by the examples, the acceptance runs and the CLI.

use crate::cm_field::CMField;
use crate::error::{Error, Result};
use crate::number_ring::BaseField;

/// Name, base field and `(b, c)` in `O_F` coordinates.
type Entry = (&'static str, BaseField, [i64; 2], [i64; 2]);

const ENTRIES: [Entry; 5] = [
    ("gauss", BaseField::Rational, [0, 0], [1, 0]),
    ("sqrt-23", BaseField::Rational, [1, 0], [6, 0]),
    ("zeta5", BaseField::RealQuadratic { m: 5 }, [1, -1], [1, 0]),
    ("zeta8", BaseField::RealQuadratic { m: 2 }, [0, -1], [1, 0]),
    ("sqrt13-i", BaseField::RealQuadratic { m: 13 }, [0, 0], [1, 0]),
];

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// Looks up a built-in field by name (`gauss`, `sqrt-23`, `zeta5`, `zeta8`, `sqrt13-i`).
pub fn builtin(name: &str) -> Result<CMField> {
    let (_, f, b, c) = ENTRIES
        .iter()
        .find(|e| e.0 == name)
        .ok_or_else(|| Error::Parse(format!("unknown built-in field {name:?}; known: {}", names().join(", "))))?;
    CMField::new(f.elem(b[0], b[1]), f.elem(c[0], c[1]))
}

pub fn gauss() -> CMField {
    builtin("gauss").expect("catalog entry")
}

pub fn sqrt_minus_23() -> CMField {
    builtin("sqrt-23").expect("catalog entry")
}

pub fn zeta5() -> CMField {
    builtin("zeta5").expect("catalog entry")
}
