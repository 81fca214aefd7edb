//! Sweeps over the probe-coupling detuning, 2D absorption maps, and
//! transparency-window extraction.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::liouville;
use crate::model::{Evaluator, LambdaParams, ScanAxis, Sweep, TripodParams};

impl Evaluator {
    /// Probe response `h` at one parameter point.
    pub fn evaluate(self, p: &TripodParams) -> Result<Complex64> {
        let p = p.validate()?;
        match self {
            Evaluator::AnalyticFull => Ok(analytic::h_full(&p)?.value),
            Evaluator::AnalyticTwoLambda => Ok(analytic::h_two_lambda(p.delta_c, p.delta, p.g_c)),
            Evaluator::NumericTripod(r) => liouville::probe_response(&p, r),
            Evaluator::AnalyticLambdaExact => analytic::lambda_exact(&LambdaParams::from(p)),
            Evaluator::NumericLambda(r) => liouville::lambda_probe_response(&LambdaParams::from(p), r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub delta_c: f64,
    pub h: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Parameters of the sweep; `delta_c` holds the value before sweeping.
    pub params: TripodParams,
    pub evaluator: String,
    pub relaxation: Option<String>,
    pub points: Vec<SpectrumPoint>,
}

impl Spectrum {
    pub fn delta_c(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.delta_c).collect()
    }

    pub fn absorption(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.h.im).collect()
    }

    pub fn dispersion(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.h.re).collect()
    }

    /// Mean spacing of the detuning grid.
    pub fn step(&self) -> f64 {
        let n = self.points.len();
        (self.points[n - 1].delta_c - self.points[0].delta_c) / (n - 1) as f64
    }
}

pub fn sweep_delta_c(evaluator: Evaluator, params: &TripodParams, range: (f64, f64), n: usize) -> Result<Spectrum> {
    let sweep = Sweep::new(range.0, range.1, n)?;
    let params = params.validate()?;
    let points = sweep
        .values()
        .into_iter()
        .map(|delta_c| {
            evaluator
                .evaluate(&params.with_delta_c(delta_c))
                .map(|h| SpectrumPoint { delta_c, h })
                .map_err(|e| Error::AtDetuning { delta_c, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum { params, evaluator: evaluator.tag().to_string(), relaxation: evaluator.relaxation().map(|r| r.tag().to_string()), points })
}

/// Absorption `Im h` with one row per axis value and one column per detuning.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanGrid2D {
    pub params: TripodParams,
    pub evaluator: String,
    pub relaxation: Option<String>,
    pub axis: ScanAxis,
    pub axis_values: Vec<f64>,
    pub delta_c: Vec<f64>,
    pub absorption: Vec<Vec<f64>>,
}

impl ScanGrid2D {
    pub fn row(&self, k: usize) -> &[f64] {
        &self.absorption[k]
    }

    pub fn max_absorption(&self) -> f64 {
        self.absorption.iter().flatten().copied().fold(f64::MIN, f64::max)
    }

    pub fn min_absorption(&self) -> f64 {
        self.absorption.iter().flatten().copied().fold(f64::MAX, f64::min)
    }
}

/// Rows are evaluated in parallel; row `r` is exactly the 1D sweep with the
/// axis parameter set to `axis_values[r]`.
pub fn scan_2d(evaluator: Evaluator, base: &TripodParams, axis: ScanAxis, axis_sweep: Sweep, delta_c_sweep: Sweep) -> Result<ScanGrid2D> {
    let axis_sweep = axis_sweep.validate()?;
    let delta_c_sweep = delta_c_sweep.validate()?;
    let base = base.validate()?;
    let axis_values = axis_sweep.values();
    let rows = axis_values
        .par_iter()
        .map(|&v| {
            let spectrum = sweep_delta_c(evaluator, &axis.apply(base, v), (delta_c_sweep.min, delta_c_sweep.max), delta_c_sweep.count)?;
            Ok(spectrum.absorption())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanGrid2D {
        params: base,
        evaluator: evaluator.tag().to_string(),
        relaxation: evaluator.relaxation().map(|r| r.tag().to_string()),
        axis,
        axis_values,
        delta_c: delta_c_sweep.values(),
        absorption: rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Windows at `±Δ`, width `2g_c`.
    Separated,
    /// Flanking peaks of the two windows coincide at zero detuning.
    Eia,
    /// Windows at `±g_c`, width `2Δ`.
    Merged,
}

pub fn overlap_regime(g_c: f64, delta: f64, tol: f64) -> Regime {
    if (g_c - delta).abs() <= tol * g_c.max(delta) {
        Regime::Eia
    } else if g_c < delta {
        Regime::Separated
    } else {
        Regime::Merged
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    /// Midpoint of the flanking peaks.
    pub center: f64,
    /// Separation of the flanking peaks.
    pub width: f64,
    pub floor_absorption: f64,
    /// Detuning of the interior minimum.
    pub floor_position: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub delta_c: f64,
    pub absorption: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowReport {
    pub windows: Vec<Window>,
    /// The dip between the innermost peaks on either side of zero detuning.
    /// It belongs to neither Λ arm and is never counted as a window.
    pub central_gap: Option<Window>,
    pub peaks: Vec<Peak>,
    pub regime: Regime,
    pub eia_value: Option<f64>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowOptions {
    /// Local maxima below this absorption are not peaks.
    pub peak_threshold: f64,
    /// A gap is a window when its floor is below this fraction of the lower flanking peak.
    pub floor_ratio: f64,
    /// Relative tolerance for the EIA regime.
    pub eia_tol: f64,
}

impl Default for WindowOptions {
    fn default() -> Self {
        WindowOptions { peak_threshold: 0.1, floor_ratio: 0.5, eia_tol: 0.02 }
    }
}

pub fn analyze_windows(s: &Spectrum) -> Result<WindowReport> {
    analyze_windows_with(s, WindowOptions::default())
}

pub fn analyze_windows_with(s: &Spectrum, opts: WindowOptions) -> Result<WindowReport> {
    if s.points.len() < 3 {
        return Err(Error::InvalidArgument("window analysis needs at least 3 points".into()));
    }
    if !(s.params.g_c > 0.0) {
        return Err(Error::InvalidArgument("window analysis needs g_c > 0".into()));
    }
    let x = s.delta_c();
    let y = s.absorption();
    let step = s.step();
    let regime = overlap_regime(s.params.g_c, s.params.delta.abs(), opts.eia_tol);

    let peak_idx: Vec<usize> = (1..y.len() - 1).filter(|&k| y[k] > opts.peak_threshold && y[k] > y[k - 1] && y[k] > y[k + 1]).collect();
    let peaks: Vec<Peak> = peak_idx.iter().map(|&k| Peak { delta_c: x[k], absorption: y[k] }).collect();

    let eia_value = (regime == Regime::Eia).then(|| {
        let nearest = (0..x.len()).min_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs())).unwrap();
        y[nearest]
    });

    let mut windows = Vec::new();
    let mut central_gap = None;
    for pair in peak_idx.windows(2) {
        let (l, r) = (pair[0], pair[1]);
        let (floor_k, floor) =
            (l + 1..r).map(|k| (k, y[k])).min_by(|a, b| a.1.total_cmp(&b.1)).expect("adjacent strict maxima have an interior point");
        if floor >= opts.floor_ratio * y[l].min(y[r]) {
            continue;
        }
        let window = Window { center: 0.5 * (x[l] + x[r]), width: x[r] - x[l], floor_absorption: floor, floor_position: x[floor_k] };
        if x[l] < -step && x[r] > step {
            central_gap = Some(window);
        } else {
            windows.push(window);
        }
    }

    let diagnostic = if peaks.len() < 2 {
        Some(format!("found {} absorption peak(s) above {}; no windows", peaks.len(), opts.peak_threshold))
    } else {
        None
    };
    Ok(WindowReport { windows, central_gap, peaks, regime, eia_value, diagnostic })
}
