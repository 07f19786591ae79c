//! Four-line NMR spectrum: single-flip transitions, roofing amplitudes and
//! Lorentzian traces.
//!
//! Amplitudes follow `sin φ · (pop_i − pop_j) · R_ij` where `R_ij` is the
//! squared transverse matrix element `4|⟨φᵢ|F_x|φⱼ⟩|²`. That gives
//! `1 + sin2θ` for the lines through `φ₂` and `1 − sin2θ` for the lines
//! through `φ₃`; at `θ = π/4` the singlet lines vanish.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::{EigenBasis, SpinParams};
use crate::thermal::{thermal_density_matrix, DensityMatrix};

/// Single-spin-flip pairs, lower index first.
pub const ALLOWED_PAIRS: [(usize, usize); 4] = [(1, 2), (1, 3), (2, 4), (3, 4)];

pub const DEFAULT_FLIP_ANGLE_DEG: f64 = 5.0;
pub const DEFAULT_LINEWIDTH: f64 = 0.02;
pub const DEFAULT_POINTS: usize = 2000;
pub const SCENARIO_TAU: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionLine<T> {
    pub from_level: usize,
    pub to_level: usize,
    /// `|Eᵢ − Eⱼ|` in units of `J`.
    pub frequency: T,
    pub amplitude: T,
}

impl<T: Real> TransitionLine<T> {
    pub fn label(&self) -> String {
        format!("{}<->{}", self.from_level, self.to_level)
    }
}

/// Roofing factor of an allowed line for mixing angle `θ`.
pub fn roofing_factor<T: Real>(from_level: usize, to_level: usize, theta: T) -> T {
    let s = (T::two() * theta).sin();
    if from_level == 2 || to_level == 2 {
        T::one() + s
    } else if from_level == 3 || to_level == 3 {
        T::one() - s
    } else {
        T::zero()
    }
}

/// The four allowed lines with zero amplitude.
pub fn allowed_transitions<T: Real>(p: &SpinParams<T>) -> [TransitionLine<T>; 4] {
    let e = p.energy_levels();
    ALLOWED_PAIRS.map(|(i, j)| TransitionLine {
        from_level: i,
        to_level: j,
        frequency: (e.level(i) - e.level(j)).abs(),
        amplitude: T::zero(),
    })
}

/// Line amplitudes with populations and roofing taken at the params' own `θ`.
pub fn line_amplitudes<T: Real>(rho: &DensityMatrix<T>, p: &SpinParams<T>, flip_angle: T) -> Result<[TransitionLine<T>; 4]> {
    line_amplitudes_with_theta(rho, p, p.derived().theta, flip_angle)
}

/// As [`line_amplitudes`] but with an explicit mixing angle for the
/// eigenbasis populations and roofing factors.
pub fn line_amplitudes_with_theta<T: Real>(
    rho: &DensityMatrix<T>,
    p: &SpinParams<T>,
    theta: T,
    flip_angle: T,
) -> Result<[TransitionLine<T>; 4]> {
    if !(flip_angle >= T::zero() && flip_angle <= T::FRAC_PI_2()) {
        return Err(Error::InvalidSpectrum(format!("flip angle must lie in [0, pi/2] (got {flip_angle})")));
    }
    let basis = EigenBasis::new(theta);
    let pops: [T; 4] = std::array::from_fn(|k| rho.eigen_population(&basis, k + 1));
    let sin_flip = flip_angle.sin();
    Ok(allowed_transitions(p).map(|mut line| {
        let dp = pops[line.from_level - 1] - pops[line.to_level - 1];
        line.amplitude = sin_flip * dp * roofing_factor(line.from_level, line.to_level, theta);
        line
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyAxis<T> {
    pub min: T,
    pub max: T,
    pub n_points: usize,
}

impl<T: Real> FrequencyAxis<T> {
    pub fn new(min: T, max: T, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::InvalidSpectrum(format!("axis needs at least 2 points (got {n_points})")));
        }
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::InvalidSpectrum(format!("axis bounds must be finite with max > min (got [{min}, {max}])")));
        }
        Ok(FrequencyAxis { min, max, n_points })
    }

    /// `[0, max line frequency + 10w]`.
    pub fn covering(lines: &[TransitionLine<T>], linewidth: T, n_points: usize) -> Result<Self> {
        let top = lines.iter().map(|l| l.frequency).fold(T::zero(), T::max);
        Self::new(T::zero(), top + T::lit(10.0) * linewidth, n_points)
    }

    pub fn sample(&self, k: usize) -> T {
        let n = T::lit((self.n_points - 1) as f64);
        self.min + (self.max - self.min) * T::lit(k as f64) / n
    }

    pub fn samples(&self) -> Vec<T> {
        (0..self.n_points).map(|k| self.sample(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTrace<T> {
    pub frequency_axis: Vec<T>,
    pub intensity: Vec<T>,
    pub linewidth: T,
}

impl<T: Real> SpectrumTrace<T> {
    pub fn max_abs_intensity(&self) -> T {
        self.intensity.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }
}

pub fn lorentzian<T: Real>(f: T, center: T, linewidth: T) -> T {
    let w2 = linewidth * linewidth;
    let d = f - center;
    w2 / (d * d + w2)
}

pub fn synthesize_trace<T: Real>(lines: &[TransitionLine<T>], linewidth: T, axis: &FrequencyAxis<T>) -> Result<SpectrumTrace<T>> {
    if !(linewidth > T::zero() && linewidth.is_finite()) {
        return Err(Error::InvalidSpectrum(format!("linewidth must be positive (got {linewidth})")));
    }
    let frequency_axis = axis.samples();
    let intensity = frequency_axis
        .iter()
        .map(|&f| lines.iter().map(|l| l.amplitude * lorentzian(f, l.frequency, linewidth)).sum())
        .collect();
    Ok(SpectrumTrace { frequency_axis, intensity, linewidth })
}

/// Lines sharing a frequency (within `tol`) merged into one resolved peak.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Peak<T> {
    pub frequency: T,
    pub amplitude: T,
    pub labels: Vec<String>,
}

pub fn group_peaks<T: Real>(lines: &[TransitionLine<T>], tol: T) -> Vec<Peak<T>> {
    let mut sorted = lines.to_vec();
    sorted.sort_by(|a, b| a.frequency.partial_cmp(&b.frequency).unwrap_or(std::cmp::Ordering::Equal));
    let mut peaks: Vec<Peak<T>> = Vec::new();
    for l in sorted {
        match peaks.last_mut() {
            Some(pk) if (l.frequency - pk.frequency).abs() <= tol => {
                pk.amplitude = pk.amplitude + l.amplitude;
                pk.labels.push(l.label());
            }
            _ => peaks.push(Peak { frequency: l.frequency, amplitude: l.amplitude, labels: vec![l.label()] }),
        }
    }
    peaks
}

/// Peaks whose magnitude exceeds `fraction` of the largest one.
pub fn significant_peaks<T: Real>(lines: &[TransitionLine<T>], tol: T, fraction: T) -> Vec<Peak<T>> {
    let peaks = group_peaks(lines, tol);
    let top = peaks.iter().fold(T::zero(), |m, p| m.max(p.amplitude.abs()));
    peaks.into_iter().filter(|p| top > T::zero() && p.amplitude.abs() > fraction * top).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scenario {
    Low,
    Crossing,
    High,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Low, Scenario::Crossing, Scenario::High];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Low => "low",
            Scenario::Crossing => "crossing",
            Scenario::High => "high",
        }
    }
}

/// Parameters of the three ground-state regimes sharing one mixing angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSet<T> {
    pub theta: T,
    pub low: SpinParams<T>,
    pub crossing: SpinParams<T>,
    pub high: SpinParams<T>,
}

impl<T: Real> ScenarioSet<T> {
    /// `J = 1`, `ω_δ = cot 2θ` so that `sin 2θ = J/D`; `ω_Σ` is half,
    /// exactly, and twice the crossing value `J + D`.
    pub fn for_mixing_angle(theta: T, tau: T) -> Result<Self> {
        if !(theta > T::zero() && theta <= T::FRAC_PI_4()) {
            return Err(Error::InvalidParameter(format!("mixing angle must lie in (0, pi/4] (got {theta})")));
        }
        let two_theta = T::two() * theta;
        let omega_delta = if theta == T::FRAC_PI_4() { T::zero() } else { two_theta.cos() / two_theta.sin() };
        let cross = T::one() + omega_delta.hypot(T::one());
        let at = |ws: T| SpinParams::from_sum_diff(ws, omega_delta, T::one(), tau);
        Ok(ScenarioSet { theta, low: at(T::half() * cross)?, crossing: at(cross)?, high: at(T::two() * cross)? })
    }

    pub fn params(&self, s: Scenario) -> &SpinParams<T> {
        match s {
            Scenario::Low => &self.low,
            Scenario::Crossing => &self.crossing,
            Scenario::High => &self.high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpectrum<T> {
    pub scenario: Scenario,
    pub theta: T,
    pub lines: [TransitionLine<T>; 4],
    pub trace: SpectrumTrace<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions<T> {
    pub flip_angle: T,
    pub linewidth: T,
    pub n_points: usize,
}

impl<T: Real> Default for TraceOptions<T> {
    fn default() -> Self {
        TraceOptions {
            flip_angle: T::lit(DEFAULT_FLIP_ANGLE_DEG.to_radians()),
            linewidth: T::lit(DEFAULT_LINEWIDTH),
            n_points: DEFAULT_POINTS,
        }
    }
}

/// Thermal spectra of the three scenarios for one mixing angle. The
/// scenario's `θ` overrides the one implied by its params.
pub fn scenario_spectra<T: Real>(set: &ScenarioSet<T>, opts: &TraceOptions<T>) -> Result<Vec<ScenarioSpectrum<T>>> {
    let all = Scenario::ALL
        .iter()
        .map(|&s| {
            let p = set.params(s);
            let rho = thermal_density_matrix(p)?;
            Ok((s, line_amplitudes_with_theta(&rho, p, set.theta, opts.flip_angle)?))
        })
        .collect::<Result<Vec<_>>>()?;
    // one shared axis per angle so the three traces are directly comparable
    let every_line: Vec<_> = all.iter().flat_map(|(_, l)| l.iter().copied()).collect();
    let axis = FrequencyAxis::covering(&every_line, opts.linewidth, opts.n_points)?;
    all.into_iter()
        .map(|(scenario, lines)| {
            let trace = synthesize_trace(&lines, opts.linewidth, &axis)?;
            Ok(ScenarioSpectrum { scenario, theta: set.theta, lines, trace })
        })
        .collect()
}
