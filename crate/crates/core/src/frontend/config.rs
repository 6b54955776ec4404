//! Flat `key = value` configuration.
//!
//! Recognized keys: `omega0`, `omegaQ`, `lambda_scale`, `energies` (comma
//! list of four values), `tol_b`, `fid.sample_rate`, `fid.periods`. The same
//! keys may appear in a program as `set KEY = VALUE`.

use std::fmt;

use serde::Serialize;

use crate::readout::ReadoutConfig;
use crate::spin::SpinModelConfig;

use super::FrontendError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Setting {
    Omega0(f64),
    OmegaQ(f64),
    LambdaScale(f64),
    Energies([f64; 4]),
    TolB(f64),
    SampleRate(f64),
    Periods(u32),
}

fn finite(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{key}` needs a finite number, got `{value}`"))
}

fn positive(key: &str, value: &str) -> Result<f64, String> {
    let v = finite(key, value)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{key}` must be positive"))
    }
}

impl Setting {
    pub fn parse(key: &str, value: &str) -> Result<Self, String> {
        Ok(match key {
            "omega0" => Setting::Omega0(finite(key, value)?),
            "omegaQ" => Setting::OmegaQ(finite(key, value)?),
            "lambda_scale" => Setting::LambdaScale(finite(key, value)?),
            "energies" => {
                let parts: Vec<f64> = value
                    .split(',')
                    .map(|v| finite(key, v.trim()))
                    .collect::<Result<_, _>>()?;
                let e: [f64; 4] = parts
                    .try_into()
                    .map_err(|_| "`energies` needs exactly four values".to_string())?;
                Setting::Energies(e)
            }
            "tol_b" => Setting::TolB(positive(key, value)?),
            "fid.sample_rate" => Setting::SampleRate(positive(key, value)?),
            "fid.periods" => Setting::Periods(
                value
                    .parse::<u32>()
                    .ok()
                    .filter(|&p| p > 0)
                    .ok_or_else(|| {
                        format!("`fid.periods` needs a positive integer, got `{value}`")
                    })?,
            ),
            other => return Err(format!("unknown setting `{other}`")),
        })
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::Omega0(v) => write!(f, "omega0 = {v}"),
            Setting::OmegaQ(v) => write!(f, "omegaQ = {v}"),
            Setting::LambdaScale(v) => write!(f, "lambda_scale = {v}"),
            Setting::Energies([a, b, c, d]) => write!(f, "energies = {a},{b},{c},{d}"),
            Setting::TolB(v) => write!(f, "tol_b = {v}"),
            Setting::SampleRate(v) => write!(f, "fid.sample_rate = {v}"),
            Setting::Periods(v) => write!(f, "fid.periods = {v}"),
        }
    }
}

/// Everything a run needs besides the program.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: SpinModelConfig,
    pub readout: ReadoutConfig,
}

impl RunConfig {
    pub fn apply(&mut self, setting: Setting) {
        match setting {
            Setting::Omega0(v) => self.model.omega0 = v,
            Setting::OmegaQ(v) => self.model.omega_q = v,
            Setting::LambdaScale(v) => self.model.lambda_scale = v,
            Setting::Energies(e) => self.model.explicit_energies = Some(e),
            Setting::TolB(v) => self.readout.tol_b = v,
            Setting::SampleRate(v) => self.readout.sample_rate = v,
            Setting::Periods(v) => self.readout.periods = v,
        }
    }

    /// Defaults overridden by the lines of a config file.
    pub fn parse(text: &str) -> Result<Self, FrontendError> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| FrontendError::Config {
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            cfg.apply(Setting::parse(key.trim(), value.trim()).map_err(err)?);
        }
        Ok(cfg)
    }
}
