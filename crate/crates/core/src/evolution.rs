//! Closed-form amplitude schedules for the restricted unitary evolutions.
//!
//! Scenarios never integrate a Hamiltonian. Each stage's evolution is an
//! analytic family of transition amplitudes `mu_i(t)` with
//! `sum_i |mu_i(t)|^2 = 1` at every instant. Phases follow a fixed
//! convention (real non-negative, or the standard Rabi phases): every
//! downstream quantity depends on the moduli only.
//!
//! The weak-boson kinetics describe a two-step process
//!
//! ```text
//! d w_in = -lambda_in w_in dt
//! d w_1  = (lambda_in w_in - lambda_1 w_1) dt
//! ```
//!
//! whose closed forms, in the dimensionless time tau = lambda_in * t and
//! rate ratio beta = lambda_1 / lambda_in, are
//!
//! ```text
//! w_in  = exp(-tau)
//! w_1   = exp(-tau) / (beta - 1) * (1 - exp(-(beta - 1) tau))
//! w_out = 1 - w_in - w_1
//! ```
//!
//! with the analytic limit `w_1 = tau exp(-tau)` at beta = 1. The boson
//! occupation peaks at `tau_0 = ln(beta) / (beta - 1)` with value
//! `w_1(tau_0) = exp(ln(beta) / (1 - beta)) / beta`.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvolutionError {
    #[error("decay time must be positive (got {0})")]
    NonPositiveTau(f64),
    #[error("rate ratio must be positive (got {0})")]
    NonPositiveBeta(f64),
    #[error("piecewise table needs at least one sample")]
    EmptyTable,
    #[error("piecewise table must be sorted by time with values in [0, 1]")]
    BadTable,
}

/// Threshold below which |beta - 1| switches to the analytic limit of the
/// kinetics, avoiding the unstable (beta - 1) denominator.
const BETA_ONE_EPS: f64 = 1e-6;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Exponential survival pair: `|mu0|^2 = exp(-t/tau)`, `|mu1|^2` the
/// complement, both amplitudes real non-negative.
pub fn exp_survival(tau: f64, t: f64) -> Result<(Complex64, Complex64), EvolutionError> {
    if tau <= 0.0 {
        return Err(EvolutionError::NonPositiveTau(tau));
    }
    debug_assert!(t >= 0.0, "schedules are defined for t >= 0");
    let p0 = (-t / tau).exp();
    Ok((real(p0.sqrt()), real((1.0 - p0).max(0.0).sqrt())))
}

/// Resonant two-level pair: `mu0 = cos(omega t)`, `mu1 = -i sin(omega t)`.
/// Exactly normalized for every t.
pub fn rabi_pair(omega: f64, t: f64) -> (Complex64, Complex64) {
    let (s, c) = (omega * t).sin_cos();
    (real(c), Complex64::new(0.0, -s))
}

/// One sample of the weak-boson occupation curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticsSample {
    pub w_in: f64,
    pub w_boson: f64,
    pub w_out: f64,
}

/// Occupation curves at dimensionless time `tau` for rate ratio `beta`.
///
/// `w_out` is computed as the complement, so the three curves sum to one
/// up to a single rounding step.
pub fn weak_boson_curves(beta: f64, tau: f64) -> Result<KineticsSample, EvolutionError> {
    if beta <= 0.0 {
        return Err(EvolutionError::NonPositiveBeta(beta));
    }
    debug_assert!(tau >= 0.0);
    let w_in = (-tau).exp();
    let w_boson = if (beta - 1.0).abs() < BETA_ONE_EPS {
        tau * (-tau).exp()
    } else {
        (-tau).exp() / (beta - 1.0) * (1.0 - (-(beta - 1.0) * tau).exp())
    };
    let w_boson = w_boson.clamp(0.0, 1.0);
    let w_out = (1.0 - w_in - w_boson).max(0.0);
    Ok(KineticsSample {
        w_in,
        w_boson,
        w_out,
    })
}

/// Stationary point of the boson occupation and its value there.
pub fn weak_boson_peak(beta: f64) -> Result<(f64, f64), EvolutionError> {
    if beta <= 0.0 {
        return Err(EvolutionError::NonPositiveBeta(beta));
    }
    if (beta - 1.0).abs() < BETA_ONE_EPS {
        return Ok((1.0, (-1.0f64).exp()));
    }
    let tau0 = beta.ln() / (beta - 1.0);
    let peak = (beta.ln() / (1.0 - beta)).exp() / beta;
    Ok((tau0, peak))
}

/// The weak-boson curve family for a fixed rate ratio.
#[derive(Debug, Clone, Copy)]
pub struct KineticsCurves {
    beta: f64,
}

impl KineticsCurves {
    pub fn new(lambda_in: f64, lambda_1: f64) -> Result<Self, EvolutionError> {
        if lambda_in <= 0.0 || lambda_1 <= 0.0 {
            return Err(EvolutionError::NonPositiveBeta(lambda_1 / lambda_in));
        }
        Ok(Self {
            beta: lambda_1 / lambda_in,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn at(&self, tau: f64) -> KineticsSample {
        weak_boson_curves(self.beta, tau).expect("beta validated at construction")
    }

    pub fn peak(&self) -> (f64, f64) {
        weak_boson_peak(self.beta).expect("beta validated at construction")
    }
}

/// A two-outcome survival table: piecewise-linear `|mu0|^2(t)` through the
/// given `(t, value)` nodes, constant before the first and after the last.
///
/// Tables express schedules that reach a cap exactly at finite time and
/// stay there, which several scenarios need so their closed-form branch
/// weights are attained rather than approached.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseTable {
    samples: Vec<(f64, f64)>,
}

impl PiecewiseTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, EvolutionError> {
        if samples.is_empty() {
            return Err(EvolutionError::EmptyTable);
        }
        for (i, &(t, v)) in samples.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) || !t.is_finite() {
                return Err(EvolutionError::BadTable);
            }
            if i > 0 && t <= samples[i - 1].0 {
                return Err(EvolutionError::BadTable);
            }
        }
        Ok(Self { samples })
    }

    /// Survival probability ramping linearly from 1 at t = 0 down to 0 at
    /// `t_zero`, zero afterwards.
    pub fn ramp_down(t_zero: f64) -> Result<Self, EvolutionError> {
        Self::new(vec![(0.0, 1.0), (t_zero, 0.0)])
    }

    /// Decay probability ramping linearly from 0 at t = 0 up to `cap` at
    /// `t_cap`, constant afterwards. Returned as the survival curve
    /// `1 - cap * t / t_cap`.
    pub fn saturating_decay(cap: f64, t_cap: f64) -> Result<Self, EvolutionError> {
        if !(0.0..=1.0).contains(&cap) {
            return Err(EvolutionError::BadTable);
        }
        Self::new(vec![(0.0, 1.0), (t_cap, 1.0 - cap)])
    }

    /// `|mu0|^2` at time t.
    pub fn survival_sq(&self, t: f64) -> f64 {
        let s = &self.samples;
        if t <= s[0].0 {
            return s[0].1;
        }
        if t >= s[s.len() - 1].0 {
            return s[s.len() - 1].1;
        }
        let i = s.partition_point(|&(ti, _)| ti <= t);
        let (t0, v0) = s[i - 1];
        let (t1, v1) = s[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Amplitude pair `(mu0, mu1)`, both real non-negative.
    pub fn amplitudes(&self, t: f64) -> (Complex64, Complex64) {
        let p0 = self.survival_sq(t);
        (real(p0.sqrt()), real((1.0 - p0).max(0.0).sqrt()))
    }
}

/// A parametrized time-dependent family of unitary-evolution amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudeSchedule {
    ExponentialSurvival { tau: f64 },
    RabiPair { omega: f64 },
    WeakBosonKinetics { lambda_in: f64, lambda_1: f64 },
    PiecewiseTable(PiecewiseTable),
}

impl AmplitudeSchedule {
    /// Evaluate the amplitude tuple at time t. Two entries for the
    /// two-outcome families, three (in, boson, out) for the kinetics.
    pub fn amplitudes(&self, t: f64) -> Result<Vec<Complex64>, EvolutionError> {
        match self {
            Self::ExponentialSurvival { tau } => {
                let (a, b) = exp_survival(*tau, t)?;
                Ok(vec![a, b])
            }
            Self::RabiPair { omega } => {
                let (a, b) = rabi_pair(*omega, t);
                Ok(vec![a, b])
            }
            Self::WeakBosonKinetics {
                lambda_in,
                lambda_1,
            } => {
                let curves = KineticsCurves::new(*lambda_in, *lambda_1)?;
                let s = curves.at(lambda_in * t);
                Ok(vec![
                    real(s.w_in.sqrt()),
                    real(s.w_boson.sqrt()),
                    real(s.w_out.sqrt()),
                ])
            }
            Self::PiecewiseTable(table) => {
                let (a, b) = table.amplitudes(t);
                Ok(vec![a, b])
            }
        }
    }
}
