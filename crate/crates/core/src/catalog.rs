//! Named functions reachable by id: `zero`, `identity`, `sawtooth`,
//! `pwl:<path>`, `bump:<center>,<height>,<slope>`, the built-in fixtures
//! `tent`, `steep`, `signed`, and `broken-fixture` (a corrupted zero name).

use std::path::Path;
use thiserror::Error;

use crate::encodings::{decode_dyadic, Dyadic, DyadicError, LengthFn, Word};
use crate::funcrep::{
    broken_zero_name, kc_from_exact, xic_from_exact, xic_identity, xic_pwl, xic_sawtooth, xic_zero, KcName,
    PiecewiseLinear, PwlError, SharedFunction, XicName,
};

pub const TENT: &str = include_str!("../fixtures/tent.pwl");
pub const STEEP: &str = include_str!("../fixtures/steep.pwl");
pub const SIGNED: &str = include_str!("../fixtures/signed.pwl");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown function id {0:?}")]
    Unknown(String),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error("bump: {0}")]
    BumpArgs(String),
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
}

/// A catalog function with its interval name and its modulus name.
#[derive(Clone)]
pub struct Entry {
    pub id: String,
    pub function: SharedFunction,
    pub modulus: LengthFn,
    pub xic: XicName,
}

impl Entry {
    fn new(id: impl Into<String>, xic: XicName) -> Entry {
        let function = xic.function.clone().expect("catalog names carry their function");
        Entry { id: id.into(), modulus: xic.modulus.clone(), function, xic }
    }

    fn from_pwl(id: impl Into<String>, f: PiecewiseLinear) -> Entry {
        let id = id.into();
        Entry::new(id.clone(), xic_pwl(f.with_label(id)))
    }

    /// A length-monotone name of the same function with the same modulus.
    pub fn kc(&self) -> KcName {
        kc_from_exact(self.function.clone(), self.modulus.clone())
    }

    /// A fresh interval name (empty memo and log).
    pub fn fresh_xic(&self) -> XicName {
        self.xic.fresh()
    }
}

pub fn tent() -> PiecewiseLinear {
    PiecewiseLinear::parse(TENT).expect("tent fixture").with_label("tent")
}

pub fn steep() -> PiecewiseLinear {
    PiecewiseLinear::parse(STEEP).expect("steep fixture").with_label("steep")
}

pub fn signed() -> PiecewiseLinear {
    PiecewiseLinear::parse(SIGNED).expect("signed fixture").with_label("signed")
}

fn dyadic_arg(s: &str) -> Result<Dyadic, CatalogError> {
    let w: Word = s.parse().map_err(|e: crate::encodings::WordParseError| CatalogError::BumpArgs(e.to_string()))?;
    Ok(decode_dyadic(&w)?)
}

/// Resolves a function id.
pub fn lookup(id: &str) -> Result<Entry, CatalogError> {
    match id {
        "zero" => Ok(Entry::new(id, xic_zero())),
        "identity" => Ok(Entry::new(id, xic_identity())),
        "sawtooth" => Ok(Entry::new(id, xic_sawtooth())),
        "tent" => Ok(Entry::from_pwl(id, tent())),
        "steep" => Ok(Entry::from_pwl(id, steep())),
        "signed" => Ok(Entry::from_pwl(id, signed())),
        "broken-fixture" => Ok(Entry::new(id, broken_zero_name())),
        _ => {
            if let Some(path) = id.strip_prefix("pwl:") {
                let text = std::fs::read_to_string(Path::new(path))
                    .map_err(|source| CatalogError::Io { path: path.into(), source })?;
                return Ok(Entry::from_pwl(id, PiecewiseLinear::parse(&text)?));
            }
            if let Some(args) = id.strip_prefix("bump:") {
                let parts: Vec<&str> = args.split(',').collect();
                let [c, h, s] = parts[..] else {
                    return Err(CatalogError::BumpArgs(format!("expected center,height,slope, got {args:?}")));
                };
                let f = PiecewiseLinear::bump(&dyadic_arg(c)?, &dyadic_arg(h)?, &dyadic_arg(s)?)?;
                return Ok(Entry::from_pwl(id, f));
            }
            Err(CatalogError::Unknown(id.into()))
        }
    }
}

/// zero, identity, the three fixtures and the sawtooth.
pub fn standard() -> Vec<Entry> {
    ["zero", "identity", "tent", "steep", "signed", "sawtooth"]
        .into_iter()
        .map(|id| lookup(id).expect("built-in id"))
        .collect()
}

/// `xic_from_exact` under a caller-chosen modulus.
pub fn with_modulus(f: SharedFunction, modulus: LengthFn) -> Entry {
    Entry::new(f.label(), xic_from_exact(f, modulus))
}
