//! Parameter records, validation, and the named presets that regenerate each
//! figure-style scan.
//!
//! Every frequency and rate is dimensionless, measured in units of the
//! spontaneous emission rate. The JSON form of a parameter record uses exactly
//! the keys `g_p`, `g_c`, `delta_c`, `Delta`, `alpha`, `beta`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::liouville::Relaxation;

macro_rules! physics_params {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            /// Probe Rabi frequency.
            pub g_p: f64,
            /// Coupling Rabi frequency.
            pub g_c: f64,
            /// Probe-coupling frequency difference, the scan variable.
            pub delta_c: f64,
            /// Zeeman splitting of adjacent ground sublevels.
            #[serde(rename = "Delta")]
            pub delta: f64,
            /// Ratio of non-radiative to radiative damping.
            pub alpha: f64,
            /// Radiative damping rate of each excited-state decay channel.
            pub beta: f64,
        }

        impl $name {
            /// Returns `self` unchanged when every invariant holds, otherwise
            /// an error listing each violation by field name.
            pub fn validate(self) -> Result<Self> {
                let fields = [
                    ("g_p", self.g_p),
                    ("g_c", self.g_c),
                    ("delta_c", self.delta_c),
                    ("Delta", self.delta),
                    ("alpha", self.alpha),
                    ("beta", self.beta),
                ];
                let mut violations = Vec::new();
                for (field, value) in fields {
                    if !value.is_finite() {
                        violations.push(Violation {
                            field,
                            message: format!("{field} must be finite"),
                        });
                        continue;
                    }
                    let message = match field {
                        "g_p" | "g_c" | "alpha" if value < 0.0 => {
                            format!("{field} must be nonnegative")
                        }
                        "beta" if value <= 0.0 => format!("{field} must be positive"),
                        _ => continue,
                    };
                    violations.push(Violation { field, message });
                }
                if violations.is_empty() {
                    Ok(self)
                } else {
                    Err(Error::InvalidParams(violations))
                }
            }

            pub fn from_json(text: &str) -> Result<Self> {
                let parsed: Self =
                    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
                parsed.validate()
            }

            pub fn with_delta_c(self, delta_c: f64) -> Self {
                Self { delta_c, ..self }
            }
        }
    };
}

physics_params!(
    /// Parameters of the tripod scheme: one excited state `|1⟩` coupled to the
    /// ground sublevels `|2⟩, |3⟩, |4⟩`.
    TripodParams
);

physics_params!(
    /// The same six quantities read for a three-level Λ scheme with excited
    /// state `|e⟩`, probe ground state `|g₁⟩` and coupling ground state `|g₃⟩`.
    LambdaParams
);

impl From<TripodParams> for LambdaParams {
    fn from(p: TripodParams) -> Self {
        let TripodParams { g_p, g_c, delta_c, delta, alpha, beta } = p;
        LambdaParams { g_p, g_c, delta_c, delta, alpha, beta }
    }
}

impl From<LambdaParams> for TripodParams {
    fn from(p: LambdaParams) -> Self {
        let LambdaParams { g_p, g_c, delta_c, delta, alpha, beta } = p;
        TripodParams { g_p, g_c, delta_c, delta, alpha, beta }
    }
}

impl Default for TripodParams {
    fn default() -> Self {
        TripodParams { g_p: 0.01, g_c: 5.0, delta_c: 0.0, delta: 5.0, alpha: 0.001, beta: 0.666 }
    }
}

/// Inclusive, uniformly spaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Sweep {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        Sweep { min, max, count }.validate()
    }

    pub fn validate(self) -> Result<Self> {
        if self.count < 2 {
            return Err(Error::InvalidArgument(format!("sweep needs at least 2 points, got {}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max {
            return Err(Error::InvalidArgument(format!("sweep range must satisfy min < max, got [{}, {}]", self.min, self.max)));
        }
        Ok(self)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    /// Grid values; the last point is exactly `max`.
    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count).map(|k| if k == last { self.max } else { self.min + (self.max - self.min) * (k as f64) / (last as f64) }).collect()
    }
}

/// Parameter varied along the slow axis of a 2D scan or across panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanAxis {
    #[serde(rename = "g_c")]
    Gc,
    #[serde(rename = "Delta")]
    Delta,
    #[serde(rename = "alpha")]
    Alpha,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Gc => "g_c",
            ScanAxis::Delta => "Delta",
            ScanAxis::Alpha => "alpha",
        }
    }

    pub fn apply(self, params: TripodParams, value: f64) -> TripodParams {
        match self {
            ScanAxis::Gc => TripodParams { g_c: value, ..params },
            ScanAxis::Delta => TripodParams { delta: value, ..params },
            ScanAxis::Alpha => TripodParams { alpha: value, ..params },
        }
    }
}

impl fmt::Display for ScanAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g_c" | "gc" => Ok(ScanAxis::Gc),
            "Delta" | "delta" => Ok(ScanAxis::Delta),
            "alpha" => Ok(ScanAxis::Alpha),
            other => Err(Error::InvalidArgument(format!("unknown scan axis {other:?} (expected gc, delta or alpha)"))),
        }
    }
}

/// How the probe response `h` is obtained at a single parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Evaluator {
    /// Closed form with ground-state damping.
    AnalyticFull,
    /// Sum of two Λ kernels, no ground-state damping.
    AnalyticTwoLambda,
    /// Steady state of the four-level master equation.
    NumericTripod(Relaxation),
    /// Exact closed-form Λ response, any probe strength.
    AnalyticLambdaExact,
    /// Steady state of the three-level Λ master equation.
    NumericLambda(Relaxation),
}

impl Evaluator {
    pub fn tag(self) -> &'static str {
        match self {
            Evaluator::AnalyticFull => "analytic-full",
            Evaluator::AnalyticTwoLambda => "analytic-two-lambda",
            Evaluator::NumericTripod(_) => "numeric-tripod",
            Evaluator::AnalyticLambdaExact => "analytic-lambda-exact",
            Evaluator::NumericLambda(_) => "numeric-lambda",
        }
    }

    pub fn relaxation(self) -> Option<Relaxation> {
        match self {
            Evaluator::NumericTripod(r) | Evaluator::NumericLambda(r) => Some(r),
            _ => None,
        }
    }

    /// Replaces the relaxation model of numeric evaluators; analytic ones are
    /// returned unchanged.
    pub fn with_relaxation(self, relaxation: Relaxation) -> Self {
        match self {
            Evaluator::NumericTripod(_) => Evaluator::NumericTripod(relaxation),
            Evaluator::NumericLambda(_) => Evaluator::NumericLambda(relaxation),
            other => other,
        }
    }

    pub fn is_numeric(self) -> bool {
        self.relaxation().is_some()
    }
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relaxation() {
            Some(r) => write!(f, "{} ({})", self.tag(), r),
            None => f.write_str(self.tag()),
        }
    }
}

impl FromStr for Evaluator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic-full" => Ok(Evaluator::AnalyticFull),
            "analytic-two-lambda" => Ok(Evaluator::AnalyticTwoLambda),
            "numeric-tripod" => Ok(Evaluator::NumericTripod(Relaxation::default())),
            "analytic-lambda-exact" => Ok(Evaluator::AnalyticLambdaExact),
            "numeric-lambda" => Ok(Evaluator::NumericLambda(Relaxation::default())),
            other => Err(Error::InvalidArgument(format!("unknown evaluator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig2,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig2, Figure::Fig5, Figure::Fig6, Figure::Fig7, Figure::Fig8];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL.into_iter().find(|fig| fig.name() == s).ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PresetLayout {
    /// One 1D spectrum per listed axis value.
    Panels { axis: ScanAxis, values: Vec<f64> },
    /// A 2D absorption map.
    Map { axis: ScanAxis, sweep: Sweep },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub figure: Figure,
    /// Template; the layout's axis overrides one field.
    pub params: TripodParams,
    pub evaluator: Evaluator,
    pub delta_c: Sweep,
    pub layout: PresetLayout,
    /// Free-text remark copied into artifact headers.
    pub note: Option<&'static str>,
}

impl FigurePreset {
    /// Parameter sets of the individual panels; empty for map layouts.
    pub fn panel_params(&self) -> Vec<TripodParams> {
        match &self.layout {
            PresetLayout::Panels { axis, values } => values.iter().map(|&v| axis.apply(self.params, v)).collect(),
            PresetLayout::Map { .. } => Vec::new(),
        }
    }
}

pub const DEFAULT_DELTA_C_SWEEP: Sweep = Sweep { min: -15.0, max: 15.0, count: 601 };
pub const DEFAULT_AXIS_POINTS: usize = 101;
/// Probe strength used by the presets; deep in the linear-response regime.
pub const PRESET_PROBE: f64 = 0.001;

const FIG2_NOTE: &str = "panels use g_c in {1, 2.5, 5, 7.5}";
const FIG8_NOTE: &str = "both panels use the coupling g_c = 5.0 with a weak probe g_p = 0.001";

pub fn preset_for(name: &str) -> Result<FigurePreset> {
    let figure: Figure = name.parse()?;
    Ok(preset(figure))
}

pub fn preset(figure: Figure) -> FigurePreset {
    let base = TripodParams { g_p: PRESET_PROBE, g_c: 5.0, delta_c: 0.0, delta: 5.0, alpha: 0.001, beta: 0.666 };
    let evaluator = Evaluator::NumericTripod(Relaxation::default());
    let (params, layout, note) = match figure {
        Figure::Fig2 => (base, PresetLayout::Panels { axis: ScanAxis::Gc, values: vec![1.0, 2.5, 5.0, 7.5] }, Some(FIG2_NOTE)),
        Figure::Fig5 => {
            (base, PresetLayout::Map { axis: ScanAxis::Gc, sweep: Sweep { min: 0.0, max: 10.0, count: DEFAULT_AXIS_POINTS } }, None)
        }
        Figure::Fig6 => {
            (base, PresetLayout::Map { axis: ScanAxis::Delta, sweep: Sweep { min: 0.0, max: 10.0, count: DEFAULT_AXIS_POINTS } }, None)
        }
        Figure::Fig7 => (base, PresetLayout::Panels { axis: ScanAxis::Delta, values: vec![0.0, 2.5, 5.0, 7.5] }, None),
        Figure::Fig8 => {
            (TripodParams { delta: 2.5, ..base }, PresetLayout::Panels { axis: ScanAxis::Alpha, values: vec![0.001, 0.1] }, Some(FIG8_NOTE))
        }
    };
    FigurePreset { figure, params, evaluator, delta_c: DEFAULT_DELTA_C_SWEEP, layout, note }
}
