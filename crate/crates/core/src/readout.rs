//! Readout: the `U3` pulse, the free-induction signal `<I+(t)>`, its complex
//! amplitudes at `Ω12` and `Ω34`, and the sign-based decoding of the
//! two-bit result.
//!
//! After `U3` a diagonal state with populations `μ1..μ4` carries
//! coherences `(μ1 − μ2)/2` and `(μ3 − μ4)/2`; under `exp(−iH0t)` they make
//! the signal
//!
//! ```text
//! <I+(t)> = (√3/2)(μ1 − μ2) exp(−iΩ12 t) + (√3/2)(μ3 − μ4) exp(−iΩ34 t)
//! ```
//!
//! The same pipeline run on the equilibrium state gives reference
//! amplitudes proportional to `Z(λ1 − λ2)` and `Z(λ3 − λ4)`. Only ratios of
//! the two runs enter the decoding, so the absolute prefactor drops out.

use std::f64::consts::TAU;
use std::fmt;
use std::io::{BufRead, Write};

use rustfft::FftPlanner;
use serde::{Serialize, Serializer};

use crate::ensemble::{apply_unitary, equilibrium_density, free_precession, DensityMatrix};
use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::pulse::gate_u3;
use crate::spin::{spin_operators, SpinModel, VirtualBits};

/// Minimum samples per period of the fastest transition frequency.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 16.0;

/// Default zero test on the b scale.
pub const DEFAULT_B_TOL: f64 = 1e-9;

/// Allowed slack, in periods, for a window to count as whole periods.
pub const WINDOW_TOL: f64 = 1e-6;

/// Longest commensurate window searched, in periods of the fastest tone.
pub const MAX_WINDOW_PERIODS: u32 = 1024;

/// Periods of the slowest tone in a fallback (non-commensurate) window.
pub const FALLBACK_PERIODS: f64 = 50.0;

/// Reference amplitudes below this are treated as absent.
pub const MIN_REFERENCE_AMPLITUDE: f64 = 1e-15;

/// Uniformly sampled `<I+(t)>`.
#[derive(Clone, Debug, PartialEq)]
pub struct FidSignal {
    times: Vec<f64>,
    samples: Vec<C64>,
    omega12: f64,
    omega34: f64,
}

impl FidSignal {
    /// Wraps externally obtained samples; spacing must be uniform.
    pub fn new(times: Vec<f64>, samples: Vec<C64>, omega12: f64, omega34: f64) -> Result<Self> {
        if times.len() != samples.len() {
            return Err(Error::Signal("times and samples differ in length"));
        }
        if times.len() < 2 {
            return Err(Error::Signal("need at least two samples"));
        }
        if times.iter().any(|t| !t.is_finite())
            || samples
                .iter()
                .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::Signal("non-finite sample"));
        }
        let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        if dt.is_nan() || dt <= 0.0 {
            return Err(Error::Signal("sample times must increase"));
        }
        let uniform = times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt);
        if !uniform {
            return Err(Error::Signal("non-uniform sampling"));
        }
        Ok(FidSignal {
            times,
            samples,
            omega12,
            omega34,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn omega12(&self) -> f64 {
        self.omega12
    }

    pub fn omega34(&self) -> f64 {
        self.omega34
    }

    pub fn dt(&self) -> f64 {
        (self.times[self.len() - 1] - self.times[0]) / (self.len() - 1) as f64
    }

    /// Observation window `N·dt`.
    pub fn window(&self) -> f64 {
        self.dt() * self.len() as f64
    }

    /// Every sample's modulus below `tol`.
    pub fn is_silent(&self, tol: f64) -> bool {
        self.samples.iter().all(|z| z.norm() < tol)
    }

    /// `t,re,im` CSV, one row per sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,re,im")?;
        for (t, z) in self.times.iter().zip(&self.samples) {
            writeln!(out, "{t},{},{}", z.re, z.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R, omega12: f64, omega34: f64) -> Result<Self> {
        let mut lines = input.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "t,re,im" => {}
            _ => return Err(Error::Signal("missing t,re,im header")),
        }
        let mut times = Vec::new();
        let mut samples = Vec::new();
        for line in lines {
            let line = line.map_err(|_| Error::Signal("unreadable CSV"))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Signal("malformed CSV row"))?;
            let [t, re, im] = fields[..] else {
                return Err(Error::Signal("malformed CSV row"));
            };
            times.push(t);
            samples.push(C64::new(re, im));
        }
        FidSignal::new(times, samples, omega12, omega34)
    }
}

/// Complex amplitudes at `Ω12` and `Ω34`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierAmplitudes {
    pub amp12: C64,
    pub amp34: C64,
}

/// Which rotation sense the signal tones carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToneSign {
    /// Tones `A·exp(−iΩt)`; the convention of `exp(−iH0t)` evolution.
    Negative,
    /// Tones `A·exp(+iΩt)`.
    Positive,
}

impl ToneSign {
    /// Probe frequency that recovers a tone at `omega` with this sign.
    pub fn probe(self, omega: f64) -> f64 {
        match self {
            ToneSign::Negative => omega,
            ToneSign::Positive => -omega,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            ToneSign::Negative => -1,
            ToneSign::Positive => 1,
        }
    }
}

/// Two-bit result of a readout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decoded {
    Basis(VirtualBits),
    Ambiguous,
}

impl fmt::Display for Decoded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoded::Basis(bits) => bits.fmt(f),
            Decoded::Ambiguous => f.write_str("ambiguous"),
        }
    }
}

impl Serialize for Decoded {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReadoutReport {
    pub b12: f64,
    pub b34: f64,
    pub decoded: Decoded,
    pub amp12: C64,
    pub amp34: C64,
    pub ref12: C64,
    pub ref34: C64,
    pub tolerance_used: f64,
    pub tone_sign: ToneSign,
    /// Whether the window held whole periods of every tone.
    pub commensurate: bool,
}

#[derive(Serialize)]
struct ReportJson {
    b12: f64,
    b34: f64,
    decoded: Decoded,
    amp12_re: f64,
    amp12_im: f64,
    amp34_re: f64,
    amp34_im: f64,
    ref12_re: f64,
    ref12_im: f64,
    ref34_re: f64,
    ref34_im: f64,
    tolerance: f64,
    tone_sign: i8,
    commensurate: bool,
}

impl Serialize for ReadoutReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            b12: self.b12,
            b34: self.b34,
            decoded: self.decoded,
            amp12_re: self.amp12.re,
            amp12_im: self.amp12.im,
            amp34_re: self.amp34.re,
            amp34_im: self.amp34.im,
            ref12_re: self.ref12.re,
            ref12_im: self.ref12.im,
            ref34_re: self.ref34.re,
            ref34_im: self.ref34.im,
            tolerance: self.tolerance_used,
            tone_sign: self.tone_sign.as_i8(),
            commensurate: self.commensurate,
        }
        .serialize(s)
    }
}

/// Sampling and decoding knobs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReadoutConfig {
    /// Samples per second.
    pub sample_rate: f64,
    /// Minimum window length in periods of the fastest tone.
    pub periods: u32,
    /// Zero test on b12 and b34.
    pub tol_b: f64,
}

impl Default for ReadoutConfig {
    fn default() -> Self {
        ReadoutConfig {
            sample_rate: 64.0,
            periods: 8,
            tol_b: DEFAULT_B_TOL,
        }
    }
}

/// `U3 ρ U3†`.
pub fn apply_readout_pulse(rho_out: &DensityMatrix) -> Result<DensityMatrix> {
    apply_unitary(rho_out, &gate_u3())
}

fn fastest_frequency(model: &SpinModel) -> f64 {
    [model.omega12(), model.omega23(), model.omega34()]
        .iter()
        .map(|w| w.abs())
        .fold(0.0, f64::max)
}

/// Samples `trace(ρ(t)·I+)` on `[0, duration)` at roughly `sample_rate`.
///
/// The sample count is rounded up so that `N·dt` equals `duration`.
pub fn synthesize_fid(
    model: &SpinModel,
    rho_after_pulse: &DensityMatrix,
    duration: f64,
    sample_rate: f64,
) -> Result<FidSignal> {
    if !(duration.is_finite() && duration > 0.0 && sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::Signal("duration and sample rate must be positive"));
    }
    let n = ((duration * sample_rate) - 1e-9).ceil().max(2.0) as usize;
    let dt = duration / n as f64;
    if TAU / (fastest_frequency(model) * dt) < MIN_SAMPLES_PER_PERIOD {
        return Err(Error::Signal("undersampled"));
    }
    let iplus = spin_operators().iplus;
    let mut times = Vec::with_capacity(n);
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 * dt;
        let rho_t = free_precession(model, rho_after_pulse, t)?;
        times.push(t);
        samples.push(rho_t.matrix().mat_mul(&iplus)?.trace());
    }
    Ok(FidSignal {
        times,
        samples,
        omega12: model.omega12(),
        omega34: model.omega34(),
    })
}

fn periods_in(window: f64, omega: f64) -> f64 {
    omega.abs() * window / TAU
}

fn is_whole(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol
}

/// `(1/N) Σ s_k exp(+iωt_k)`: a tone `A·exp(−iωt)` yields `A`.
///
/// The window must hold whole periods of `omega` and of both signal tones,
/// otherwise leakage between tones would bias the result.
pub fn fourier_amplitude(signal: &FidSignal, omega: f64) -> Result<C64> {
    if !omega.is_finite() {
        return Err(Error::Signal("probe frequency must be finite"));
    }
    let dt = signal.dt();
    if omega != 0.0 && TAU / (omega.abs() * dt) < MIN_SAMPLES_PER_PERIOD {
        return Err(Error::Signal("undersampled"));
    }
    let window = signal.window();
    for w in [omega, signal.omega12, signal.omega34] {
        if !is_whole(periods_in(window, w), WINDOW_TOL) {
            return Err(Error::Signal("non-commensurate window"));
        }
    }
    Ok(correlate(signal, omega))
}

fn correlate(signal: &FidSignal, omega: f64) -> C64 {
    let n = signal.len() as f64;
    signal
        .times
        .iter()
        .zip(&signal.samples)
        .map(|(&t, &s)| s * C64::from_polar(1.0, omega * t))
        .sum::<C64>()
        / n
}

/// Least-squares amplitudes of tones `A_j·exp(−iω_j t)` at known
/// frequencies, valid for any window length.
///
/// On windows holding whole periods of every difference frequency this
/// reduces to plain correlation.
pub fn tone_amplitudes(signal: &FidSignal, omegas: &[f64]) -> Result<Vec<C64>> {
    let k = omegas.len();
    let n = signal.len() as f64;
    let mut gram = vec![vec![C64::new(0.0, 0.0); k]; k];
    for (a, &wa) in omegas.iter().enumerate() {
        for (b, &wb) in omegas.iter().enumerate() {
            gram[a][b] = signal
                .times
                .iter()
                .map(|&t| C64::from_polar(1.0, (wa - wb) * t))
                .sum::<C64>()
                / n;
        }
    }
    let rhs: Vec<C64> = omegas.iter().map(|&w| correlate(signal, w)).collect();
    solve_complex(gram, rhs).ok_or(Error::Signal("tones not resolvable in window"))
}

/// Gaussian elimination with partial pivoting for the small Gram systems.
fn solve_complex(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Option<Vec<C64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[pivot][col].norm() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (x, v) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let tail: C64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Whole-spectrum view of a signal for plotting: `(ω, A)` pairs such that
/// the signal contains `A·exp(−iωt)`, sorted by ω.
pub fn full_spectrum(signal: &FidSignal) -> Vec<(f64, C64)> {
    let n = signal.len();
    let mut buf = signal.samples.clone();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let dt = signal.dt();
    let mut out: Vec<(f64, C64)> = buf
        .into_iter()
        .enumerate()
        .map(|(k, a)| {
            let k = if k <= n / 2 {
                k as f64
            } else {
                k as f64 - n as f64
            };
            (TAU * k / (n as f64 * dt), a / n as f64)
        })
        .collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Smallest window holding whole periods of all `omegas`, searching up to
/// [`MAX_WINDOW_PERIODS`] periods of the fastest one.
pub fn commensurate_window(omegas: &[f64]) -> Option<f64> {
    let fastest = omegas.iter().map(|w| w.abs()).fold(0.0, f64::max);
    if !(fastest > 0.0 && fastest.is_finite()) {
        return None;
    }
    (1..=MAX_WINDOW_PERIODS).find_map(|p| {
        let window = p as f64 * TAU / fastest;
        omegas
            .iter()
            .all(|&w| is_whole(periods_in(window, w), 1e-9 * p as f64))
            .then_some(window)
    })
}

/// Observation window chosen for a model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub duration: f64,
    pub commensurate: bool,
}

/// Commensurate window for `Ω12, Ω23, Ω34`, repeated until it spans at
/// least `cfg.periods` periods of the fastest tone; otherwise a window of
/// [`FALLBACK_PERIODS`] periods of the slowest tone.
pub fn plan_window(model: &SpinModel, cfg: &ReadoutConfig) -> Window {
    let omegas = [model.omega12(), model.omega23(), model.omega34()];
    let fastest = fastest_frequency(model);
    let min_duration = cfg.periods as f64 * TAU / fastest;
    match commensurate_window(&omegas) {
        Some(base) => {
            let repeats = (min_duration / base).ceil().max(1.0);
            Window {
                duration: repeats * base,
                commensurate: true,
            }
        }
        None => {
            let slowest = omegas.iter().map(|w| w.abs()).fold(f64::INFINITY, f64::min);
            let duration = (FALLBACK_PERIODS * TAU / slowest).max(min_duration);
            Window {
                duration,
                commensurate: false,
            }
        }
    }
}

/// Amplitudes at `Ω12` and `Ω34` for the given tone sign.
pub fn extract_amplitudes(
    signal: &FidSignal,
    model: &SpinModel,
    sign: ToneSign,
    commensurate: bool,
) -> Result<FourierAmplitudes> {
    let w12 = sign.probe(model.omega12());
    let w34 = sign.probe(model.omega34());
    if commensurate {
        Ok(FourierAmplitudes {
            amp12: fourier_amplitude(signal, w12)?,
            amp34: fourier_amplitude(signal, w34)?,
        })
    } else {
        let w23 = sign.probe(model.omega23());
        let amps = tone_amplitudes(signal, &[w12, w23, w34])?;
        Ok(FourierAmplitudes {
            amp12: amps[0],
            amp34: amps[2],
        })
    }
}

/// Reference run on the equilibrium state.
///
/// Both tone senses are probed and the one carrying the signal is returned
/// alongside the amplitudes so the measurement run can use it.
pub fn reference_amplitudes_with(
    model: &SpinModel,
    cfg: &ReadoutConfig,
) -> Result<(FourierAmplitudes, ToneSign)> {
    let l = model.lambdas();
    if l[0] == l[1] || l[2] == l[3] {
        return Err(Error::Reference("degenerate reference"));
    }
    let window = plan_window(model, cfg);
    let rho = apply_readout_pulse(&equilibrium_density(model))?;
    let fid = synthesize_fid(model, &rho, window.duration, cfg.sample_rate)?;
    let neg = extract_amplitudes(&fid, model, ToneSign::Negative, window.commensurate)?;
    let pos = extract_amplitudes(&fid, model, ToneSign::Positive, window.commensurate)?;
    let weight = |a: &FourierAmplitudes| a.amp12.norm() + a.amp34.norm();
    let (amps, sign) = if weight(&neg) >= weight(&pos) {
        (neg, ToneSign::Negative)
    } else {
        (pos, ToneSign::Positive)
    };
    if amps.amp12.norm() < MIN_REFERENCE_AMPLITUDE || amps.amp34.norm() < MIN_REFERENCE_AMPLITUDE {
        return Err(Error::Reference("degenerate reference"));
    }
    Ok((amps, sign))
}

pub fn reference_amplitudes(model: &SpinModel) -> Result<FourierAmplitudes> {
    reference_amplitudes_with(model, &ReadoutConfig::default()).map(|(a, _)| a)
}

/// `b12 = Re(amp12/ref12)·(λ1 − λ2)`, `b34 = Re(amp34/ref34)·(λ3 − λ4)`.
///
/// The amplitude ratio is `(μ_i − μ_j) / (Z(λ_i − λ_j))`, so each b is the
/// population difference `(μ_i − μ_j)/Z` with the pipeline prefactor and
/// the λ sign convention cancelled.
pub fn b_ratios(
    meas: &FourierAmplitudes,
    reference: &FourierAmplitudes,
    model: &SpinModel,
) -> Result<(f64, f64)> {
    if reference.amp12.norm() < MIN_REFERENCE_AMPLITUDE
        || reference.amp34.norm() < MIN_REFERENCE_AMPLITUDE
    {
        return Err(Error::Reference("reference amplitude vanishes"));
    }
    let l = model.lambdas();
    let b12 = (meas.amp12 / reference.amp12).re * (l[0] - l[1]);
    let b34 = (meas.amp34 / reference.amp34).re * (l[2] - l[3]);
    Ok((b12, b34))
}

/// Decoding table; `|b| < tol` counts as zero.
///
/// | b34 | b12 | result |
/// |-----|-----|--------|
/// | < 0 | 0   | 00     |
/// | > 0 | 0   | 01     |
/// | 0   | < 0 | 10     |
/// | 0   | > 0 | 11     |
pub fn decode(b12: f64, b34: f64, tol: f64) -> Decoded {
    let zero12 = b12.abs() < tol;
    let zero34 = b34.abs() < tol;
    let bits = match (zero12, zero34) {
        (true, false) if b34 < 0.0 => VirtualBits::new(0, 0),
        (true, false) if b34 > 0.0 => VirtualBits::new(0, 1),
        (false, true) if b12 < 0.0 => VirtualBits::new(1, 0),
        (false, true) if b12 > 0.0 => VirtualBits::new(1, 1),
        _ => return Decoded::Ambiguous,
    };
    Decoded::Basis(bits)
}

/// Full readout of a final state: readout pulse, FID, amplitudes, reference
/// run, b-ratios and decoding.
pub fn read_out(
    model: &SpinModel,
    rho_out: &DensityMatrix,
    cfg: &ReadoutConfig,
) -> Result<(ReadoutReport, FidSignal)> {
    if cfg.tol_b.is_nan() || cfg.tol_b <= 0.0 {
        return Err(Error::Signal("zero tolerance must be positive"));
    }
    let (reference, sign) = reference_amplitudes_with(model, cfg)?;
    let window = plan_window(model, cfg);
    let rho = apply_readout_pulse(rho_out)?;
    let fid = synthesize_fid(model, &rho, window.duration, cfg.sample_rate)?;
    let meas = extract_amplitudes(&fid, model, sign, window.commensurate)?;
    let (b12, b34) = b_ratios(&meas, &reference, model)?;
    let report = ReadoutReport {
        b12,
        b34,
        decoded: decode(b12, b34, cfg.tol_b),
        amp12: meas.amp12,
        amp34: meas.amp34,
        ref12: reference.amp12,
        ref34: reference.amp34,
        tolerance_used: cfg.tol_b,
        tone_sign: sign,
        commensurate: window.commensurate,
    };
    Ok((report, fid))
}
