//! Lindblad master equation for the tripod and Λ schemes: collapse channels,
//! the column-stacked Liouvillian, its steady state, and a fixed-step
//! Runge-Kutta integrator used as an independent oracle.
//!
//! `vec(ρ)` stacks columns, so `ρ_ij` sits at index `i + N·j` and
//! `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{self, lambda_hamiltonian_with, tripod_hamiltonian_with, DriveConvention};
use crate::linalg::{eigensystem, is_finite, is_hermitian, null_space, real, ComplexMatrix, ComplexVector};
use crate::model::{LambdaParams, TripodParams};

/// Ground-state relaxation model at rate `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relaxation {
    /// Lindblad population transfer between every ordered pair of ground states.
    Exchange,
    /// Lindblad pure dephasing of each ground state.
    Dephasing,
    /// Population transfer as in [`Relaxation::Exchange`], but optical
    /// coherences keep the purely radiative width; ground coherences decay at
    /// the summed transfer rate. This is the Bloch-equation form whose
    /// weak-probe solution is the closed-form damped response.
    #[default]
    Bloch,
}

impl Relaxation {
    pub const ALL: [Relaxation; 3] = [Relaxation::Exchange, Relaxation::Dephasing, Relaxation::Bloch];

    pub fn tag(self) -> &'static str {
        match self {
            Relaxation::Exchange => "exchange",
            Relaxation::Dephasing => "dephasing",
            Relaxation::Bloch => "bloch",
        }
    }
}

impl fmt::Display for Relaxation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Relaxation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relaxation::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown relaxation model {s:?} (expected exchange, dephasing or bloch)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    Tripod,
    Lambda,
}

impl System {
    pub fn dim(self) -> usize {
        match self {
            System::Tripod => 4,
            System::Lambda => 3,
        }
    }

    fn ground_states(self) -> &'static [usize] {
        match self {
            System::Tripod => &[1, 2, 3],
            System::Lambda => &[1, 2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    /// `√rate |to⟩⟨from|`
    Transfer { from: usize, to: usize },
    /// `√rate |state⟩⟨state|`
    Dephase { state: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseChannel {
    pub kind: ChannelKind,
    pub rate: f64,
}

impl CollapseChannel {
    pub fn transfer(from: usize, to: usize, rate: f64) -> Self {
        CollapseChannel { kind: ChannelKind::Transfer { from, to }, rate }
    }

    pub fn dephase(state: usize, rate: f64) -> Self {
        CollapseChannel { kind: ChannelKind::Dephase { state }, rate }
    }

    fn max_label(&self) -> usize {
        match self.kind {
            ChannelKind::Transfer { from, to } => from.max(to),
            ChannelKind::Dephase { state } => state,
        }
    }

    /// Collapse operator including the `√rate` factor.
    pub fn operator(&self, dim: usize) -> ComplexMatrix {
        let mut c = ComplexMatrix::zeros(dim, dim);
        let amp = real(self.rate.sqrt());
        match self.kind {
            ChannelKind::Transfer { from, to } => c[(to, from)] = amp,
            ChannelKind::Dephase { state } => c[(state, state)] = amp,
        }
        c
    }
}

/// Radiative decay of the excited state (label 0) into every ground state at
/// `beta`, plus ground relaxation at `alpha`. Zero-rate channels are omitted.
pub fn collapse_channels(p: &TripodParams, relaxation: Relaxation, system: System) -> Result<Vec<CollapseChannel>> {
    let p = p.validate()?;
    let grounds = system.ground_states();
    let mut channels: Vec<CollapseChannel> = grounds.iter().map(|&g| CollapseChannel::transfer(0, g, p.beta)).collect();
    if p.alpha > 0.0 {
        match relaxation {
            Relaxation::Exchange | Relaxation::Bloch => {
                for &from in grounds {
                    for &to in grounds {
                        if from != to {
                            channels.push(CollapseChannel::transfer(from, to, p.alpha));
                        }
                    }
                }
            }
            Relaxation::Dephasing => {
                channels.extend(grounds.iter().map(|&g| CollapseChannel::dephase(g, p.alpha)));
            }
        }
    }
    Ok(channels)
}

/// Damping removed from a single coherence `ρ_row,col` relative to the pure
/// Lindblad form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceOffset {
    pub row: usize,
    pub col: usize,
    pub rate: f64,
}

/// Hamiltonian, channels and coherence offsets of one parameter point.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<CollapseChannel>,
    pub offsets: Vec<CoherenceOffset>,
}

impl MasterEquation {
    pub fn tripod(p: &TripodParams, relaxation: Relaxation) -> Result<Self> {
        let hamiltonian = tripod_hamiltonian_with(p, DriveConvention::FullRabi)?;
        Self::assemble(hamiltonian, p, relaxation, System::Tripod)
    }

    pub fn lambda(p: &LambdaParams, relaxation: Relaxation) -> Result<Self> {
        let hamiltonian = lambda_hamiltonian_with(p, DriveConvention::FullRabi)?;
        Self::assemble(hamiltonian, &TripodParams::from(*p), relaxation, System::Lambda)
    }

    fn assemble(hamiltonian: ComplexMatrix, p: &TripodParams, relaxation: Relaxation, system: System) -> Result<Self> {
        let channels = collapse_channels(p, relaxation, system)?;
        let mut offsets = Vec::new();
        if relaxation == Relaxation::Bloch {
            // Ground transfer out of state g broadens ρ_eg by half its rate.
            for &g in system.ground_states() {
                let out: f64 =
                    channels.iter().filter(|c| matches!(c.kind, ChannelKind::Transfer { from, .. } if from == g)).map(|c| c.rate).sum();
                if out > 0.0 {
                    offsets.push(CoherenceOffset { row: 0, col: g, rate: out / 2.0 });
                    offsets.push(CoherenceOffset { row: g, col: 0, rate: out / 2.0 });
                }
            }
        }
        Ok(MasterEquation { hamiltonian, channels, offsets })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn liouvillian(&self) -> Result<Liouvillian> {
        let mut l = build_liouvillian(&self.hamiltonian, &self.channels)?;
        let n = self.dim();
        for o in &self.offsets {
            let k = o.row + n * o.col;
            l.matrix[(k, k)] += real(o.rate);
        }
        Ok(l)
    }

    /// `dρ/dt` evaluated directly on the density matrix, without the
    /// superoperator.
    pub fn rhs(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let h = &self.hamiltonian;
        let i = Complex64::new(0.0, 1.0);
        let mut out = (h * rho - rho * h) * (-i);
        let n = self.dim();
        for ch in &self.channels {
            let r = ch.rate;
            match ch.kind {
                ChannelKind::Transfer { from, to } => {
                    out[(to, to)] += rho[(from, from)] * r;
                    for k in 0..n {
                        out[(from, k)] -= rho[(from, k)] * (0.5 * r);
                        out[(k, from)] -= rho[(k, from)] * (0.5 * r);
                    }
                }
                ChannelKind::Dephase { state } => {
                    out[(state, state)] += rho[(state, state)] * r;
                    for k in 0..n {
                        out[(state, k)] -= rho[(state, k)] * (0.5 * r);
                        out[(k, state)] -= rho[(k, state)] * (0.5 * r);
                    }
                }
            }
        }
        for o in &self.offsets {
            out[(o.row, o.col)] += rho[(o.row, o.col)] * o.rate;
        }
        out
    }
}

/// `N² × N²` generator acting on column-stacked `vec(ρ)`.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub matrix: ComplexMatrix,
    pub dim: usize,
}

impl Liouvillian {
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let v = vectorize(rho);
        unvectorize(&(&self.matrix * v), self.dim)
    }
}

pub fn vectorize(rho: &ComplexMatrix) -> ComplexVector {
    // nalgebra storage is column-major already.
    ComplexVector::from_column_slice(rho.as_slice())
}

pub fn unvectorize(v: &ComplexVector, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_column_slice(dim, dim, v.as_slice())
}

/// `L[ρ] = −i[H,ρ] + Σ_k (C_k ρ C_k† − ½{C_k†C_k, ρ})` in column-stacked form.
pub fn build_liouvillian(h: &ComplexMatrix, channels: &[CollapseChannel]) -> Result<Liouvillian> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("Hamiltonian is {}x{}", h.nrows(), h.ncols())));
    }
    if !is_hermitian(h, 1e-12) {
        return Err(Error::InvalidArgument("Hamiltonian is not Hermitian".into()));
    }
    let n = h.nrows();
    if let Some(bad) = channels.iter().find(|c| c.max_label() >= n) {
        return Err(Error::Dimension(format!("channel {:?} refers to a state outside a {n}-level system", bad.kind)));
    }
    if let Some(bad) = channels.iter().find(|c| !(c.rate >= 0.0 && c.rate.is_finite())) {
        return Err(Error::InvalidArgument(format!("channel rate {} is not a finite nonnegative number", bad.rate)));
    }
    let id = ComplexMatrix::identity(n, n);
    let i = Complex64::new(0.0, 1.0);
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * (-i);
    for ch in channels {
        let c = ch.operator(n);
        let cdc = c.adjoint() * &c;
        l += c.conjugate().kronecker(&c);
        l -= id.kronecker(&cdc) * real(0.5);
        l -= cdc.transpose().kronecker(&id) * real(0.5);
    }
    Ok(Liouvillian { matrix: l, dim: n })
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        if !is_finite(&m) {
            return Err(Error::Numerical("density matrix has non-finite entries".into()));
        }
        if !is_hermitian(&m, HERMITIAN_TOL) {
            return Err(Error::Numerical("density matrix is not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr - real(1.0)).norm() > TRACE_TOL {
            return Err(Error::Numerical(format!("density matrix trace is {tr}")));
        }
        let dm = DensityMatrix((&m + m.adjoint()) * real(0.5));
        let min = dm.min_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::Numerical(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(dm)
    }

    /// Pure state `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(k, k)] = real(1.0);
        DensityMatrix(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(dim, dim) * real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// `⟨i|ρ|j⟩`
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.0[(k, k)].re).collect()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let es = eigensystem(&self.0, true)?;
        Ok(es.values[0].re)
    }
}

/// Singular values at or below this fraction of the largest count as zero.
pub const NULL_SPACE_TOL: f64 = 1e-12;
pub const STEADY_RESIDUAL_TOL: f64 = 1e-10;
/// Largest anti-Hermitian part tolerated before projection.
pub const STEADY_SKEW_TOL: f64 = 1e-6;

pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let (basis, _) = null_space(&l.matrix, NULL_SPACE_TOL)?;
    if basis.ncols() != 1 {
        return Err(Error::NoUniqueSteadyState { dimension: basis.ncols() });
    }
    let v = basis.column(0).into_owned();
    let mut rho = unvectorize(&v, l.dim);
    let tr = rho.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::Numerical("steady-state null vector has zero trace".into()));
    }
    rho /= tr;
    // The generator commutes with the adjoint, so the Hermitian part of a null
    // vector is a null vector too. Slow modes leave a small anti-Hermitian
    // error that the projection removes; a large one means the solve failed.
    let skew = (&rho - rho.adjoint()).norm() / 2.0;
    if !(skew <= STEADY_SKEW_TOL) {
        return Err(Error::Numerical(format!("steady-state null vector is not Hermitian (skew {skew:e})")));
    }
    rho = (&rho + rho.adjoint()) * real(0.5);
    let residual = (&l.matrix * vectorize(&rho)).norm();
    if !(residual <= STEADY_RESIDUAL_TOL) {
        return Err(Error::Numerical(format!("steady-state residual {residual:e}")));
    }
    DensityMatrix::new(rho)
}

/// `0.01 / max(1, g_c, |δ_c| + Δ, β)`
pub fn default_time_step(p: &TripodParams) -> f64 {
    let fastest = 1f64.max(p.g_c).max(p.delta_c.abs() + p.delta.abs()).max(p.beta);
    0.01 / fastest
}

/// Classical fourth-order Runge-Kutta with `ceil(t/dt)` equal steps.
pub fn evolve(eq: &MasterEquation, rho0: &DensityMatrix, t: f64, dt: f64) -> Result<DensityMatrix> {
    if !(dt > 0.0 && dt.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("evolve needs t >= 0 and dt > 0, got t={t}, dt={dt}")));
    }
    if rho0.dim() != eq.dim() {
        return Err(Error::Dimension(format!("state is {0}x{0}, equation is {1}x{1}", rho0.dim(), eq.dim())));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let steps = (t / dt).ceil() as usize;
    let h = t / steps as f64;
    let mut rho = rho0.matrix().clone();
    for step in 1..=steps {
        let k1 = eq.rhs(&rho);
        let k2 = eq.rhs(&(&rho + &k1 * real(h / 2.0)));
        let k3 = eq.rhs(&(&rho + &k2 * real(h / 2.0)));
        let k4 = eq.rhs(&(&rho + &k3 * real(h)));
        rho += (k1 + (k2 + k3) * real(2.0) + k4) * real(h / 6.0);
        if step % 1000 == 0 || step == steps {
            let time = step as f64 * h;
            let drift = (rho.trace() - real(1.0)).norm();
            if !(drift <= 1e-9) {
                return Err(Error::Unstable { time, reason: format!("trace drifted by {drift:e}") });
            }
            if rho.iter().any(|z| !(z.norm() <= 10.0)) {
                return Err(Error::Unstable { time, reason: "density matrix entries diverged".into() });
            }
        }
    }
    DensityMatrix::new(rho)
}

/// Which index order of the optical coherence enters the probe response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceOrientation {
    /// `⟨1|ρ|j⟩`
    ExcitedRow,
    /// `⟨j|ρ|1⟩`
    ExcitedColumn,
}

/// Orientation under which absorption `Im h` is nonnegative and the numeric
/// response matches the closed-form two-Λ kernel. Checked by the acceptance
/// suite against the conjugate choice.
pub const COHERENCE_ORIENTATION: CoherenceOrientation = CoherenceOrientation::ExcitedRow;

fn coherence(rho: &DensityMatrix, ground: usize, orientation: CoherenceOrientation) -> Complex64 {
    match orientation {
        CoherenceOrientation::ExcitedRow => rho.get(0, ground),
        CoherenceOrientation::ExcitedColumn => rho.get(ground, 0),
    }
}

pub fn tripod_steady_state(p: &TripodParams, relaxation: Relaxation) -> Result<DensityMatrix> {
    let eq = MasterEquation::tripod(p, relaxation)?;
    steady_state(&eq.liouvillian()?)
}

pub fn lambda_steady_state(p: &LambdaParams, relaxation: Relaxation) -> Result<DensityMatrix> {
    let eq = MasterEquation::lambda(p, relaxation)?;
    steady_state(&eq.liouvillian()?)
}

/// `h = (ρ₁₂ + ρ₁₄) / g_p` from the tripod steady state.
pub fn probe_response(p: &TripodParams, relaxation: Relaxation) -> Result<Complex64> {
    probe_response_oriented(p, relaxation, COHERENCE_ORIENTATION)
}

pub fn probe_response_oriented(p: &TripodParams, relaxation: Relaxation, orientation: CoherenceOrientation) -> Result<Complex64> {
    require_probe(p.g_p)?;
    let rho = tripod_steady_state(p, relaxation)?;
    let sum = coherence(&rho, hamiltonian::PROBE_LEFT, orientation) + coherence(&rho, hamiltonian::PROBE_RIGHT, orientation);
    Ok(sum / p.g_p)
}

/// `h = ρ_{e g₁} / g_p` from the Λ steady state.
pub fn lambda_probe_response(p: &LambdaParams, relaxation: Relaxation) -> Result<Complex64> {
    require_probe(p.g_p)?;
    let rho = lambda_steady_state(p, relaxation)?;
    Ok(coherence(&rho, hamiltonian::lambda::PROBE_GROUND, COHERENCE_ORIENTATION) / p.g_p)
}

fn require_probe(g_p: f64) -> Result<()> {
    if g_p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("probe response needs g_p > 0".into()))
    }
}
