//! Instance specs: where the data comes from and how far to go.

use std::fs;
use std::path::Path;

use newton_hyper::grids::{self, GridParams};
use newton_hyper::{HyperData, Rational};
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

pub const DEFAULT_ORDER: usize = 12;
pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Explicit {
    pub lambda: Vec<Rational>,
    pub tau: Vec<Rational>,
    pub a: Vec<Rational>,
}

/// `{"params": {...}}` or `{"explicit": {...}}`, plus optional `n` and the
/// report keys to keep in `outputs`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default)]
    pub params: Option<GridParams>,
    #[serde(default)]
    pub explicit: Option<Explicit>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub outputs: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub enum Source {
    Params(GridParams),
    Explicit(Explicit),
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub source: Source,
    pub order: usize,
    pub outputs: Option<Vec<String>>,
}

impl Instance {
    pub fn data(&self) -> Result<HyperData, CliError> {
        Ok(match &self.source {
            Source::Params(p) => grids::build(p, self.order)?,
            Source::Explicit(e) => {
                HyperData::from_values(e.lambda.clone(), e.tau.clone(), e.a.clone(), self.order)?
            }
        })
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de)?;
    de.end().map_err(|e| CliError::Parse {
        path: ".".into(),
        message: e.to_string(),
    })?;
    Ok(value)
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, CliError> {
    Ok(serde_path_to_error::deserialize(value)?)
}

/// `--params`, with `--family` filled in (or checked against) the JSON.
pub fn params_from_flags(family: Option<&str>, params: Option<&str>) -> Result<GridParams, CliError> {
    let mut value: Value = match params {
        Some(text) => parse(text)?,
        None => Value::Object(Default::default()),
    };
    let Value::Object(map) = &mut value else {
        return Err(CliError::usage("--params must be a JSON object"));
    };
    if let Some(family) = family {
        let family: grids::Family = family.parse().map_err(CliError::Usage)?;
        let key = Value::String(family.key().to_string());
        match map.get("family") {
            Some(existing) if *existing != key => {
                return Err(CliError::usage(format!(
                    "--family {} conflicts with \"family\": {existing} in --params",
                    family.key()
                )))
            }
            _ => {
                map.insert("family".into(), key);
            }
        }
    }
    from_value(value)
}

impl InstanceSpec {
    /// Resolves the source and order. `n_flag` beats the spec's `n`, which
    /// beats the default.
    pub fn resolve(self, n_flag: Option<usize>, cap: usize) -> Result<Instance, CliError> {
        let source = match (self.params, self.explicit) {
            (Some(p), None) => Source::Params(p),
            (None, Some(e)) => Source::Explicit(e),
            (Some(_), Some(_)) => {
                return Err(CliError::usage("spec has both \"params\" and \"explicit\""))
            }
            (None, None) => {
                return Err(CliError::usage("spec needs \"params\" or \"explicit\""))
            }
        };
        let order = n_flag.or(self.n).unwrap_or(DEFAULT_ORDER);
        if order > cap {
            return Err(CliError::OrderCap { n: order, cap });
        }
        Ok(Instance {
            source,
            order,
            outputs: self.outputs,
        })
    }
}

/// `--max-n`, else `NEWTON_HYPER_MAX_N`, else the default cap.
pub fn order_cap(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("NEWTON_HYPER_MAX_N") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("NEWTON_HYPER_MAX_N={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}
