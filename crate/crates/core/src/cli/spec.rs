use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::presets::preset;
use crate::braid::{PatternJson, QuasitoricPattern};
use crate::error::{Error, Result};
use crate::geom::{format_ratio, parse_ratio};
use crate::pipeline::Options;

/// Input file for `realize`. Omitted numeric fields take the defaults of
/// [`Options`].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// rational string such as `"1/1000"`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// A validated spec.
#[derive(Clone, Debug)]
pub struct ResolvedSpec {
    pub preset: Option<String>,
    pub pattern: QuasitoricPattern,
    pub options: Options,
    pub out: Option<PathBuf>,
}

impl RealizationSpec {
    pub fn parse(text: &str) -> Result<RealizationSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn resolve(&self) -> Result<ResolvedSpec> {
        let pattern = match (&self.preset, &self.pattern) {
            (Some(name), None) => preset(name)?,
            (None, Some(p)) => {
                if p.strands < 2 {
                    return Err(Error::Domain("strands must be ≥ 2".into()));
                }
                QuasitoricPattern::new(p.strands, p.repetitions, p.signs.clone())?
            }
            (Some(_), Some(_)) => return Err(Error::Domain("give either a pattern or a preset, not both".into())),
            (None, None) => return Err(Error::Domain("a pattern or a preset is required".into())),
        };
        let mut options = Options::default();
        if let Some(seed) = self.seed {
            options.seed = seed;
        }
        if let Some(d) = &self.delta {
            let d = parse_ratio(d)?;
            if d <= num_traits::Zero::zero() {
                return Err(Error::Domain(format!("delta must be positive, got {}", format_ratio(&d))));
            }
            options.delta = d;
        }
        if let Some(f) = self.f_max {
            if f == 0 {
                return Err(Error::Domain("f_max must be positive".into()));
            }
            options.f_max = f;
        }
        if let Some(m) = self.margin {
            if !(m > 0.0 && m < 0.5) {
                return Err(Error::Domain(format!("margin must lie in (0, 1/2), got {m}")));
            }
            options.margin = m;
        }
        if let Some(b) = self.precision_bits {
            if b < 64 {
                return Err(Error::Domain(format!("precision_bits must be at least 64, got {b}")));
            }
            options.precision = b;
        }
        Ok(ResolvedSpec { preset: self.preset.clone(), pattern, options, out: self.out.clone() })
    }
}
