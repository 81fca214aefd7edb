//! Run configuration file: one JSON document, every field optional. Command
//! line flags take precedence over it.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::liouville::Relaxation;
use crate::model::TripodParams;
use crate::output::Format;

/// Parameter overrides; missing keys fall back to the defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_c: Option<f64>,
    #[serde(default, rename = "Delta", skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl ParamOverrides {
    /// Fields set in `other` win.
    pub fn merge(self, other: ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            g_p: other.g_p.or(self.g_p),
            g_c: other.g_c.or(self.g_c),
            delta_c: other.delta_c.or(self.delta_c),
            delta: other.delta.or(self.delta),
            alpha: other.alpha.or(self.alpha),
            beta: other.beta.or(self.beta),
        }
    }

    pub fn apply(self, base: TripodParams) -> TripodParams {
        TripodParams {
            g_p: self.g_p.unwrap_or(base.g_p),
            g_c: self.g_c.unwrap_or(base.g_c),
            delta_c: self.delta_c.unwrap_or(base.delta_c),
            delta: self.delta.unwrap_or(base.delta),
            alpha: self.alpha.unwrap_or(base.alpha),
            beta: self.beta.unwrap_or(base.beta),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default)]
    pub params: ParamOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Relaxation>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub axis: AxisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<Format>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lande_g: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Shallow checks that do not depend on the command; full parameter
    /// validation happens once flags are merged.
    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        if matches!(self.sweep.points, Some(n) if n < 2) {
            v.push(Violation::new("sweep.points", "sweep needs at least 2 points"));
        }
        if matches!(self.axis.points, Some(n) if n < 2) {
            v.push(Violation::new("axis.points", "axis needs at least 2 points"));
        }
        if let Some(f) = &self.formats {
            if f.is_empty() {
                v.push(Violation::new("formats", "formats must not be empty"));
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_document() {
        let cfg = RunConfig::from_json(
            r#"{"command":"spectrum","params":{"g_c":2,"Delta":3},"evaluator":"numeric-tripod",
                "model":"exchange","sweep":{"min":-5,"max":5,"points":11},"formats":["csv","svg"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.model, Some(Relaxation::Exchange));
        let p = cfg.params.apply(TripodParams::default());
        assert_eq!((p.g_c, p.delta, p.g_p), (2.0, 3.0, 0.01));
        assert_eq!(cfg.formats.unwrap(), [Format::Csv, Format::Svg]);
    }

    #[test]
    fn empty_document() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(RunConfig::from_json(r#"{"params":{"delta":1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"colour":1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"sweep":{"points":1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"formats":["png"]}"#).is_err());
        assert!(RunConfig::from_json("[").is_err());
    }

    #[test]
    fn later_overrides_win() {
        let a = ParamOverrides { g_c: Some(1.0), alpha: Some(0.1), ..Default::default() };
        let b = ParamOverrides { g_c: Some(4.0), ..Default::default() };
        let m = a.merge(b);
        assert_eq!((m.g_c, m.alpha), (Some(4.0), Some(0.1)));
    }
}
