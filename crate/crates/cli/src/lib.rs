//! Command-line front end: argument and config handling, presets and artifact
//! emission. [`run`] is the whole program minus process exit.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use deit::config::{ParamOverrides, RunConfig};
use deit::hamiltonian::{self, find_dark_states};
use deit::model::{self, Figure, PresetLayout, DEFAULT_AXIS_POINTS, DEFAULT_DELTA_C_SWEEP};
use deit::output::{self, Format, Metadata};
use deit::spectra::{self, Spectrum};
use deit::units::{self, BFieldQuery};
use deit::{Error, Evaluator, Relaxation, Result, ScanAxis, Sweep, TripodParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Dark-state tolerance used by `eigen` unless overridden.
pub const DEFAULT_DARK_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "deit", version, about = "Probe spectra of a tripod atom with two transparency windows")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probe response over a detuning sweep.
    Spectrum(SpectrumArgs),
    /// Absorption map over the detuning and one parameter axis.
    Scan(ScanArgs),
    /// Eigensystem of the tripod Hamiltonian and its dark states.
    Eigen(EigenArgs),
    /// Deviation of the numeric dissipator models from an analytic response.
    Compare(CompareArgs),
    /// Magnetic field for a Zeeman splitting.
    Bfield(BfieldArgs),
    /// Regenerate the figure presets.
    Reproduce(ReproduceArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Scan(_) => "scan",
            Command::Eigen(_) => "eigen",
            Command::Compare(_) => "compare",
            Command::Bfield(_) => "bfield",
            Command::Reproduce(_) => "reproduce",
        }
    }
}

#[derive(Debug, Args, Clone, Default)]
struct ParamArgs {
    /// Probe Rabi frequency.
    #[arg(long, allow_negative_numbers = true)]
    gp: Option<f64>,
    /// Coupling Rabi frequency.
    #[arg(long, allow_negative_numbers = true)]
    gc: Option<f64>,
    /// Zeeman splitting.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Non-radiative to radiative damping ratio.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Radiative damping rate.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
}

impl ParamArgs {
    fn overrides(&self) -> ParamOverrides {
        ParamOverrides { g_p: self.gp, g_c: self.gc, delta_c: None, delta: self.delta, alpha: self.alpha, beta: self.beta }
    }
}

#[derive(Debug, Args, Clone, Default)]
struct SweepArgs {
    /// Lower end of the detuning sweep [default: -15]
    #[arg(long, allow_negative_numbers = true)]
    deltac_min: Option<f64>,
    /// Upper end of the detuning sweep [default: 15]
    #[arg(long, allow_negative_numbers = true)]
    deltac_max: Option<f64>,
    /// Number of detuning points, endpoints included.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
struct EvalArgs {
    /// analytic-full, analytic-two-lambda, numeric-tripod, analytic-lambda-exact or numeric-lambda.
    #[arg(long)]
    evaluator: Option<String>,
    /// Dissipator for numeric evaluators: exchange, dephasing or bloch.
    #[arg(long)]
    model: Option<String>,
}

#[derive(Debug, Args, Clone, Default)]
struct OutputArgs {
    /// Output directory; without it a single artifact goes to stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma-separated list of csv, json, svg.
    #[arg(long, value_name = "LIST")]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    eval: EvalArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Also write the transparency-window report (windows.json); needs --out.
    #[arg(long)]
    windows: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    eval: EvalArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Second axis: gc, delta or alpha.
    #[arg(long)]
    axis: Option<String>,
    /// Lower end of the second axis
    #[arg(long, allow_negative_numbers = true)]
    axis_min: Option<f64>,
    /// Upper end of the second axis
    #[arg(long, allow_negative_numbers = true)]
    axis_max: Option<f64>,
    /// Points on the second axis [default: 101]
    #[arg(long)]
    axis_points: Option<usize>,
}

#[derive(Debug, Args)]
struct EigenArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Probe-coupling detuning.
    #[arg(long, allow_negative_numbers = true)]
    deltac: Option<f64>,
    /// Dark-state tolerance on the excited and coupling-ground amplitudes.
    #[arg(long)]
    tol: Option<f64>,
    /// text or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    /// Analytic reference evaluator.
    #[arg(long)]
    evaluator: Option<String>,
    /// Compare only this dissipator.
    #[arg(long)]
    model: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct BfieldArgs {
    /// Splitting of adjacent Zeeman sublevels in MHz.
    #[arg(long, allow_negative_numbers = true)]
    splitting_mhz: f64,
    /// Landé factor.
    #[arg(long, allow_negative_numbers = true)]
    lande_g: Option<f64>,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// fig2, fig5, fig6, fig7, fig8 or all.
    #[arg(long)]
    figure: Option<String>,
    #[command(flatten)]
    eval: EvalArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `args` (program name first) without running anything.
pub fn parse<I, T>(args: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version come through here with exit code 0.
            let ok = e.exit_code() == 0;
            let sink: &mut dyn Write = if ok { stdout } else { stderr };
            let _ = sink.write_all(e.render().to_string().as_bytes());
            return if ok { EXIT_OK } else { EXIT_INVALID };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code(&err)
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(cmd) = &cfg.command {
        if cmd != cli.command.name() {
            return Err(Error::InvalidArgument(format!("config is for command {cmd:?}, not {:?}", cli.command.name())));
        }
    }
    let ctx = Context { cfg };
    match cli.command {
        Command::Spectrum(a) => ctx.spectrum(a, stdout),
        Command::Scan(a) => ctx.scan(a, stdout),
        Command::Eigen(a) => ctx.eigen(a, stdout),
        Command::Compare(a) => ctx.compare(a, stdout),
        Command::Bfield(a) => ctx.bfield(a, stdout),
        Command::Reproduce(a) => ctx.reproduce(a, stdout),
    }
}

struct Context {
    cfg: RunConfig,
}

struct Artifact {
    stem: String,
    format: Format,
    body: String,
}

impl Context {
    fn params(&self, args: &ParamArgs, delta_c: Option<f64>) -> Result<TripodParams> {
        let flags = ParamOverrides { delta_c, ..args.overrides() };
        self.cfg.params.merge(flags).apply(TripodParams::default()).validate()
    }

    fn sweep(&self, args: &SweepArgs) -> Result<Sweep> {
        let c = self.cfg.sweep;
        Sweep::new(
            args.deltac_min.or(c.min).unwrap_or(DEFAULT_DELTA_C_SWEEP.min),
            args.deltac_max.or(c.max).unwrap_or(DEFAULT_DELTA_C_SWEEP.max),
            args.points.or(c.points).unwrap_or(DEFAULT_DELTA_C_SWEEP.count),
        )
    }

    fn model(&self, flag: Option<&str>) -> Result<Option<Relaxation>> {
        match flag {
            Some(m) => m.parse().map(Some),
            None => Ok(self.cfg.model),
        }
    }

    fn evaluator(&self, args: &EvalArgs, default: Evaluator) -> Result<Evaluator> {
        let evaluator = match args.evaluator.as_deref().or(self.cfg.evaluator.as_deref()) {
            Some(tag) => tag.parse()?,
            None => default,
        };
        Ok(match self.model(args.model.as_deref())? {
            Some(r) if evaluator.is_numeric() => evaluator.with_relaxation(r),
            _ => evaluator,
        })
    }

    fn formats(&self, args: &OutputArgs, default: &[Format]) -> Result<Vec<Format>> {
        match (&args.format, &self.cfg.formats) {
            (Some(list), _) => Format::parse_list(list),
            (None, Some(list)) if !list.is_empty() => Ok(list.clone()),
            _ => Ok(default.to_vec()),
        }
    }

    fn out_dir(&self, args: &OutputArgs) -> Option<PathBuf> {
        args.out.clone().or_else(|| self.cfg.out.clone())
    }

    fn emit(&self, artifacts: Vec<Artifact>, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
        match out {
            Some(dir) => {
                for a in &artifacts {
                    let path = dir.join(format!("{}.{}", a.stem, a.format.extension()));
                    output::write_file(&path, &a.body)?;
                    let _ = writeln!(stdout, "{}", path.display());
                }
                Ok(())
            }
            None => match artifacts.as_slice() {
                [one] => write_stdout(stdout, &one.body),
                _ => Err(Error::InvalidArgument("more than one artifact requested; pass --out <dir>".into())),
            },
        }
    }

    fn spectrum(&self, a: SpectrumArgs, stdout: &mut dyn Write) -> Result<()> {
        let params = self.params(&a.params, None)?;
        let sweep = self.sweep(&a.sweep)?;
        let evaluator = self.evaluator(&a.eval, Evaluator::AnalyticFull)?;
        let formats = self.formats(&a.output, &[Format::Csv])?;
        let out = self.out_dir(&a.output);
        if a.windows && out.is_none() {
            return Err(Error::InvalidArgument("--windows needs --out <dir>".into()));
        }
        let s = spectra::sweep_delta_c(evaluator, &params, (sweep.min, sweep.max), sweep.count)?;
        let meta = output::spectrum_metadata(&s);
        let title = format!("{} spectrum, {}", evaluator.tag(), describe(&params));
        let mut artifacts: Vec<Artifact> = formats
            .iter()
            .map(|&format| Artifact {
                stem: "spectrum".into(),
                format,
                body: match format {
                    Format::Csv => output::spectrum_csv(&s, &meta),
                    Format::Json => output::to_json(&s),
                    Format::Svg => output::spectra_svg(&title, &[(title.clone(), &s)]),
                },
            })
            .collect();
        if a.windows {
            let report = spectra::analyze_windows(&s)?;
            artifacts.push(Artifact { stem: "windows".into(), format: Format::Json, body: output::to_json(&report) });
        }
        self.emit(artifacts, out.as_deref(), stdout)
    }

    fn scan(&self, a: ScanArgs, stdout: &mut dyn Write) -> Result<()> {
        let params = self.params(&a.params, None)?;
        let sweep = self.sweep(&a.sweep)?;
        let evaluator = self.evaluator(&a.eval, Evaluator::AnalyticFull)?;
        let c = &self.cfg.axis;
        let axis: ScanAxis = a.axis.as_deref().or(c.name.as_deref()).unwrap_or("gc").parse()?;
        let (lo, hi) = match axis {
            ScanAxis::Alpha => (0.0, 0.1),
            _ => (0.0, 10.0),
        };
        let axis_sweep = Sweep::new(
            a.axis_min.or(c.min).unwrap_or(lo),
            a.axis_max.or(c.max).unwrap_or(hi),
            a.axis_points.or(c.points).unwrap_or(DEFAULT_AXIS_POINTS),
        )?;
        let formats = self.formats(&a.output, &[Format::Csv])?;
        let grid = spectra::scan_2d(evaluator, &params, axis, axis_sweep, sweep)?;
        let meta = output::grid_metadata(&grid);
        let title = format!("{} absorption over {} and delta_c", evaluator.tag(), axis.name());
        let artifacts = formats
            .iter()
            .map(|&format| Artifact {
                stem: "scan".into(),
                format,
                body: match format {
                    Format::Csv => output::grid_csv(&grid, &meta),
                    Format::Json => output::to_json(&grid),
                    Format::Svg => output::heatmap_svg(&title, &grid),
                },
            })
            .collect();
        self.emit(artifacts, self.out_dir(&a.output).as_deref(), stdout)
    }

    fn eigen(&self, a: EigenArgs, stdout: &mut dyn Write) -> Result<()> {
        let delta_c = a.deltac.or(self.cfg.params.delta_c);
        let params = self.params(&a.params, delta_c)?;
        let tol = a.tol.unwrap_or(DEFAULT_DARK_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let h = hamiltonian::build_tripod_hamiltonian(&params)?;
        let es = hamiltonian::eigensystem(&h, true)?;
        let dark = find_dark_states(&es, tol);
        let cubic = hamiltonian::closed_form_cubic_roots(&params);
        let report = EigenReport {
            params,
            eigenvalues: es.values.iter().map(|v| v.re).collect(),
            eigenvectors: (0..es.len()).map(|k| es.vector(k).iter().map(|z| [z.re, z.im]).collect()).collect(),
            dark_states: dark
                .iter()
                .map(|d| DarkStateReport {
                    eigenvalue: d.eigenvalue.re,
                    vector: d.vector.iter().map(|z| [z.re, z.im]).collect(),
                    excited_amplitude: d.excited_amplitude,
                    coupling_amplitude: d.coupling_amplitude,
                    ideal: d.is_ideal(tol),
                })
                .collect(),
            cubic_roots: cubic.iter().map(|z| [z.re, z.im]).collect(),
        };
        let body = match a.format.as_deref().unwrap_or("text") {
            "text" => eigen_text(&report, &h),
            "json" => output::to_json(&report),
            other => return Err(Error::InvalidArgument(format!("eigen format must be text or json, got {other:?}"))),
        };
        write_stdout(stdout, &body)
    }

    fn compare(&self, a: CompareArgs, stdout: &mut dyn Write) -> Result<()> {
        let params = self.params(&a.params, None)?;
        let sweep = self.sweep(&a.sweep)?;
        let reference: Evaluator = match a.evaluator.as_deref() {
            Some(tag) => tag.parse()?,
            None => Evaluator::AnalyticFull,
        };
        if reference.is_numeric() {
            return Err(Error::InvalidArgument("the reference evaluator must be analytic".into()));
        }
        let models: Vec<Relaxation> = match self.model(a.model.as_deref())? {
            Some(r) => vec![r],
            None => Relaxation::ALL.to_vec(),
        };
        let numeric = match reference {
            Evaluator::AnalyticLambdaExact => Evaluator::NumericLambda,
            _ => Evaluator::NumericTripod,
        };
        let range = (sweep.min, sweep.max);
        let r = spectra::sweep_delta_c(reference, &params, range, sweep.count)?;
        let rows = models
            .into_iter()
            .map(|m| Ok(deviation(m, &r, &spectra::sweep_delta_c(numeric(m), &params, range, sweep.count)?)))
            .collect::<Result<Vec<_>>>()?;
        let body = match a.format.as_deref().unwrap_or("csv") {
            "csv" => {
                let mut s = String::new();
                let mut meta = output::spectrum_metadata(&r);
                meta.retain(|(k, _)| k != "relaxation");
                for (k, v) in &meta {
                    let _ = writeln!(s, "# {k}: {v}");
                }
                s.push_str("model,sup_abs_dev,at_delta_c,sup_im_dev,at_delta_c_im,peak_im,relative_im_dev\n");
                for d in &rows {
                    let _ = writeln!(
                        s,
                        "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                        d.model, d.sup_abs_dev, d.at_delta_c, d.sup_im_dev, d.at_delta_c_im, d.peak_im, d.relative_im_dev
                    );
                }
                s
            }
            "json" => output::to_json(&rows),
            other => return Err(Error::InvalidArgument(format!("compare format must be csv or json, got {other:?}"))),
        };
        write_stdout(stdout, &body)
    }

    fn bfield(&self, a: BfieldArgs, stdout: &mut dyn Write) -> Result<()> {
        let q = BFieldQuery { splitting_mhz: a.splitting_mhz, lande_g: a.lande_g.or(self.cfg.lande_g).unwrap_or(1.0) };
        let b = units::bfield_for_splitting(q)?;
        write_stdout(stdout, &format!("{b:.6} G\n"))
    }

    fn reproduce(&self, a: ReproduceArgs, stdout: &mut dyn Write) -> Result<()> {
        let name =
            a.figure.clone().or_else(|| self.cfg.figure.clone()).ok_or_else(|| Error::InvalidArgument("--figure is required".into()))?;
        let figures: Vec<Figure> = if name == "all" { Figure::ALL.to_vec() } else { vec![name.parse()?] };
        let formats = self.formats(&a.output, &[Format::Csv, Format::Svg])?;
        let out = self.out_dir(&a.output).unwrap_or_else(|| PathBuf::from("figures"));
        for fig in figures {
            let artifacts = self.reproduce_one(fig, &a.eval, &formats)?;
            self.emit(artifacts, Some(&out), stdout)?;
        }
        Ok(())
    }

    fn reproduce_one(&self, fig: Figure, eval: &EvalArgs, formats: &[Format]) -> Result<Vec<Artifact>> {
        let preset = model::preset(fig);
        let evaluator = self.evaluator(eval, preset.evaluator)?;
        let name = fig.name();
        let sweep = preset.delta_c;
        let figure_meta = |meta: &mut Metadata| {
            meta.push(("figure".into(), name.into()));
            if let Some(note) = preset.note {
                meta.push(("note".into(), note.into()));
            }
        };
        let mut artifacts = Vec::new();
        match &preset.layout {
            PresetLayout::Panels { axis, values } => {
                let spectra = preset
                    .panel_params()
                    .iter()
                    .map(|p| spectra::sweep_delta_c(evaluator, p, (sweep.min, sweep.max), sweep.count))
                    .collect::<Result<Vec<Spectrum>>>()?;
                let labels: Vec<String> =
                    values.iter().enumerate().map(|(k, v)| format!("({}) {} = {}", panel_letter(k), axis.name(), v)).collect();
                for &format in formats {
                    match format {
                        Format::Csv => {
                            for (k, s) in spectra.iter().enumerate() {
                                let mut meta = output::spectrum_metadata(s);
                                figure_meta(&mut meta);
                                meta.push(("panel".into(), labels[k].clone()));
                                artifacts.push(Artifact {
                                    stem: format!("{name}_{}", panel_letter(k)),
                                    format,
                                    body: output::spectrum_csv(s, &meta),
                                });
                            }
                        }
                        Format::Json => artifacts.push(Artifact { stem: name.into(), format, body: output::to_json(&spectra) }),
                        Format::Svg => {
                            let panels: Vec<(String, &Spectrum)> = labels.iter().cloned().zip(&spectra).collect();
                            artifacts.push(Artifact {
                                stem: name.into(),
                                format,
                                body: output::spectra_svg(&format!("{name}: {}", evaluator.tag()), &panels),
                            });
                        }
                    }
                }
            }
            PresetLayout::Map { axis, sweep: axis_sweep } => {
                let grid = spectra::scan_2d(evaluator, &preset.params, *axis, *axis_sweep, sweep)?;
                for &format in formats {
                    let body = match format {
                        Format::Csv => {
                            let mut meta = output::grid_metadata(&grid);
                            figure_meta(&mut meta);
                            output::grid_csv(&grid, &meta)
                        }
                        Format::Json => output::to_json(&grid),
                        Format::Svg => {
                            output::heatmap_svg(&format!("{name}: {} absorption over {} and delta_c", evaluator.tag(), axis.name()), &grid)
                        }
                    };
                    artifacts.push(Artifact { stem: name.into(), format, body });
                }
            }
        }
        Ok(artifacts)
    }
}

fn panel_letter(k: usize) -> char {
    (b'a' + (k % 26) as u8) as char
}

fn describe(p: &TripodParams) -> String {
    format!("g_p={} g_c={} Delta={} alpha={} beta={}", p.g_p, p.g_c, p.delta, p.alpha, p.beta)
}

fn write_stdout(stdout: &mut dyn Write, body: &str) -> Result<()> {
    stdout.write_all(body.as_bytes()).map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
}

#[derive(Debug, serde::Serialize)]
struct DarkStateReport {
    eigenvalue: f64,
    vector: Vec<[f64; 2]>,
    excited_amplitude: f64,
    coupling_amplitude: f64,
    ideal: bool,
}

#[derive(Debug, serde::Serialize)]
struct EigenReport {
    params: TripodParams,
    eigenvalues: Vec<f64>,
    /// Complex components as `[re, im]`, one list per eigenvalue.
    eigenvectors: Vec<Vec<[f64; 2]>>,
    dark_states: Vec<DarkStateReport>,
    cubic_roots: Vec<[f64; 2]>,
}

fn eigen_text(r: &EigenReport, h: &deit::linalg::ComplexMatrix) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "params: {}", serde_json::to_string(&r.params).expect("params serialize"));
    let _ = writeln!(s, "hamiltonian:\n{}", deit::linalg::format_matrix(h));
    let fmt_vec = |v: &[[f64; 2]]| v.iter().map(|z| format!("{:+.9}{:+.9}i", z[0], z[1])).collect::<Vec<_>>().join("  ");
    let _ = writeln!(s, "eigenvalues:");
    for (k, (val, vec)) in r.eigenvalues.iter().zip(&r.eigenvectors).enumerate() {
        let _ = writeln!(s, "  {k}: {val:+.12}  [{}]", fmt_vec(vec));
    }
    let _ = writeln!(s, "dark states: {}", r.dark_states.len());
    for d in &r.dark_states {
        let _ = writeln!(
            s,
            "  eigenvalue {:+.12}  ideal={}  |c1|={:.3e}  |c3|={:.3e}  [{}]",
            d.eigenvalue,
            d.ideal,
            d.excited_amplitude,
            d.coupling_amplitude,
            fmt_vec(&d.vector)
        );
    }
    let _ = writeln!(s, "closed-form cubic roots:");
    for z in &r.cubic_roots {
        let _ = writeln!(s, "  {:+.12}{:+.12}i", z[0], z[1]);
    }
    s
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Deviation {
    pub model: String,
    /// sup |h_numeric − h_reference| over the sweep.
    pub sup_abs_dev: f64,
    pub at_delta_c: f64,
    pub sup_im_dev: f64,
    pub at_delta_c_im: f64,
    /// Largest reference absorption on the sweep.
    pub peak_im: f64,
    /// `sup_im_dev / peak_im`.
    pub relative_im_dev: f64,
}

fn deviation(model: Relaxation, reference: &Spectrum, numeric: &Spectrum) -> Deviation {
    let mut d = Deviation {
        model: model.tag().into(),
        sup_abs_dev: 0.0,
        at_delta_c: reference.points[0].delta_c,
        sup_im_dev: 0.0,
        at_delta_c_im: reference.points[0].delta_c,
        peak_im: f64::MIN,
        relative_im_dev: 0.0,
    };
    for (r, n) in reference.points.iter().zip(&numeric.points) {
        let abs = (n.h - r.h).norm();
        if abs > d.sup_abs_dev {
            d.sup_abs_dev = abs;
            d.at_delta_c = r.delta_c;
        }
        let im = (n.h.im - r.h.im).abs();
        if im > d.sup_im_dev {
            d.sup_im_dev = im;
            d.at_delta_c_im = r.delta_c;
        }
        d.peak_im = d.peak_im.max(r.h.im);
    }
    d.relative_im_dev = d.sup_im_dev / d.peak_im;
    d
}
