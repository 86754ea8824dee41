//! Built-in cascade scenarios.
//!
//! Each constructor wires a small mode system, an initial state, a
//! per-stage amplitude flow and a terminal rule into a [`Scenario`]. The
//! flows are restricted unitaries written directly on the reachable basis
//! states; amplitude parameters are taken real non-negative since every
//! produced quantity depends on the moduli only.
//!
//! Schedule choices worth knowing about:
//! - the polarizer, absorber and two-state superposition use linear
//!   survival ramps that reach their caps exactly at finite time, so the
//!   closed-form branch weights are attained, not just approached;
//! - emission and detection keep the exponential survival law, whose
//!   half-crossings and stationary points land the closed forms on their
//!   own;
//! - multi-stage absorption splits its budget so that each intermediate
//!   stage absorbs fully (a half-crossing) and the last stage saturates at
//!   the residue, telescoping the total transmission to `p_trans`.

use std::sync::Arc;

use thiserror::Error;

use crate::cascade::{Initial, Scenario};
use crate::evolution::{
    exp_survival, rabi_pair, weak_boson_curves, EvolutionError, PiecewiseTable,
};
use crate::reduction::SolverConfig;
use crate::schmidt::{Bipartition, SchmidtError};
use crate::state::{BasisLabel, ModeSpec, PureState, StateError, System};
use num_complex::Complex64;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("bad scenario parameter: {0}")]
    BadParameter(String),
    #[error("photon cutoff {fock_cutoff} cannot host {n_stages} cascade stages")]
    CutoffTooSmall { fock_cutoff: usize, n_stages: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Schmidt(#[from] SchmidtError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_unit_pair(a: f64, b: f64, what: &str) -> Result<(), ScenarioError> {
    if (a * a + b * b - 1.0).abs() > 1e-10 {
        return Err(ScenarioError::BadParameter(format!(
            "{what} amplitudes must satisfy a^2 + b^2 = 1 (got {})",
            a * a + b * b
        )));
    }
    Ok(())
}

/// Parameter block for every built-in scenario variant.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioParams {
    Tourmaline {
        alpha: f64,
    },
    Absorption {
        p_abs: f64,
        tau: f64,
    },
    Emission {
        tau: f64,
        n_stages: usize,
    },
    Detection {
        channels: usize,
        taus: Option<Vec<f64>>,
        n_stages: usize,
    },
    Superposition {
        c_s: f64,
        c_sbar: f64,
        tau: f64,
    },
    NonIntegralCascade {
        alpha0: f64,
        alpha1: f64,
        omega: f64,
        fock_cutoff: usize,
        n_stages: usize,
    },
    EntangledPair {
        c1: f64,
        c2: f64,
        tau_a: Option<f64>,
        tau_b: Option<f64>,
    },
    AtomPhoton {
        c1: f64,
        c2: f64,
        tau: f64,
    },
    WeakBoson {
        lambda_in: f64,
        lambda_1: f64,
    },
}

impl ScenarioParams {
    pub fn build(&self) -> Result<Scenario, ScenarioError> {
        match self.clone() {
            Self::Tourmaline { alpha } => build_tourmaline(alpha),
            Self::Absorption { p_abs, tau } => build_absorption(p_abs, tau),
            Self::Emission { tau, n_stages } => build_emission(tau, n_stages),
            Self::Detection {
                channels,
                taus,
                n_stages,
            } => build_detection(channels, taus, n_stages),
            Self::Superposition { c_s, c_sbar, tau } => build_superposition(c_s, c_sbar, tau),
            Self::NonIntegralCascade {
                alpha0,
                alpha1,
                omega,
                fock_cutoff,
                n_stages,
            } => build_nonintegral(alpha0, alpha1, omega, fock_cutoff, n_stages),
            Self::EntangledPair {
                c1,
                c2,
                tau_a,
                tau_b,
            } => build_entangled_pair(c1, c2, tau_a, tau_b),
            Self::AtomPhoton { c1, c2, tau } => build_atom_photon(c1, c2, tau),
            Self::WeakBoson {
                lambda_in,
                lambda_1,
            } => build_weak_boson(lambda_in, lambda_1),
        }
    }

    /// Variant names with their parameter summaries, in a stable order.
    pub fn catalog() -> Vec<(&'static str, &'static str)> {
        vec![
            ("tourmaline", "alpha: polarizer angle in (0, pi/2)"),
            ("absorption", "p_abs in (0, 1); tau > 0: per-stage ramp time"),
            ("emission", "tau > 0: decay time; n_stages >= 1 (default 10)"),
            (
                "detection",
                "channels >= 1; taus: optional per-channel decay times (default symmetric 1.0); n_stages >= 1 (default 3)",
            ),
            ("superposition", "c_s, c_sbar: amplitudes with c_s^2 + c_sbar^2 = 1; tau > 0"),
            (
                "nonintegral-cascade",
                "alpha0, alpha1: atom amplitudes (a0^2 + a1^2 = 1); omega > 0; fock_cutoff >= n_stages; n_stages >= 1",
            ),
            (
                "entangled-pair",
                "c1, c2: pair amplitudes (c1^2 + c2^2 = 1); tau_a, tau_b: optional absorption times (absent = transparent)",
            ),
            ("atom-photon", "c1, c2: branch amplitudes (c1^2 + c2^2 = 1); tau > 0"),
            ("weak-boson", "lambda_in > 0, lambda_1 > 0: production and decay rates"),
        ]
    }
}

/// Polarized photon meeting a polarizing crystal: perpendicular component
/// passes untouched, the parallel one is absorbed stage by stage until the
/// branch weights telescope to pass = sin^2(alpha).
pub fn build_tourmaline(alpha: f64) -> Result<Scenario, ScenarioError> {
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(ScenarioError::BadParameter(format!(
            "alpha must lie in (0, pi/2), got {alpha}"
        )));
    }
    let sys = System::new(vec![
        ModeSpec::gauge("Mperp", 2)?,
        ModeSpec::gauge("Mpar", 2)?,
        ModeSpec::matter("T", 2)?,
    ])?;
    let cut = Bipartition::new(&sys, &["Mperp", "Mpar"])?;
    let pass = BasisLabel::new(vec![1, 0, 0]);
    let par = BasisLabel::new(vec![0, 1, 0]);
    let absorbed = BasisLabel::new(vec![0, 0, 1]);

    let initial = PureState::from_amplitudes(
        &sys,
        vec![
            (pass.clone(), c64(alpha.sin())),
            (par.clone(), c64(alpha.cos())),
        ],
    )?;

    let ramp = PiecewiseTable::ramp_down(1.0)?;
    let flow = {
        let sys = Arc::clone(&sys);
        let (pass, par, absorbed) = (pass.clone(), par.clone(), absorbed.clone());
        Arc::new(move |base: &PureState, _stage: usize, t: f64| {
            let (mu0, mu1) = ramp.amplitudes(t);
            let a = base.amplitude(&pass);
            let b = base.amplitude(&par);
            let c = base.amplitude(&absorbed);
            PureState::from_amplitudes(
                &sys,
                vec![
                    (pass.clone(), a),
                    (par.clone(), b * mu0),
                    (absorbed.clone(), c + b * mu1),
                ],
            )
            .expect("tourmaline flow stays on the reachable set")
        })
    };
    let terminal = {
        let par = par.clone();
        Arc::new(move |state: &PureState, _jumps: usize| state.amplitude(&par).norm() < 1e-9)
    };
    let labeler = {
        let absorbed = absorbed.clone();
        Arc::new(move |state: &PureState, _path: &[usize]| {
            if state.amplitude(&absorbed).norm() > 0.5 {
                "absorb".to_string()
            } else {
                "pass".to_string()
            }
        })
    };
    Ok(Scenario::new(
        "tourmaline",
        Initial::Pure(initial),
        cut,
        1.5,
        SolverConfig::default(),
        64,
        flow,
        terminal,
        labeler,
    ))
}

/// Per-stage absorption caps for a total absorption budget. Below 1/2 a
/// single saturating stage suffices; above it, every intermediate stage
/// absorbs fully (guaranteeing a half-crossing) and the final stage caps
/// at `1 - 2^(n-1) p_trans` so the transmitted weights telescope to
/// `p_trans` exactly.
fn absorption_caps(p_abs: f64) -> Vec<f64> {
    if p_abs <= 0.5 {
        return vec![p_abs];
    }
    let p_trans = 1.0 - p_abs;
    let mut n = 1usize;
    while 0.5f64.powi(n as i32) > p_trans {
        n += 1;
    }
    let mut caps = vec![1.0; n];
    caps[n - 1] = 1.0 - p_trans * 2.0f64.powi(n as i32 - 1);
    caps
}

/// Photon in an absorbing medium: absorbed with total probability
/// `p_abs`, transmitted with `1 - p_abs`, cascading through half-weight
/// jumps when `p_abs` exceeds 1/2.
pub fn build_absorption(p_abs: f64, tau: f64) -> Result<Scenario, ScenarioError> {
    if !(p_abs > 0.0 && p_abs < 1.0) {
        return Err(ScenarioError::BadParameter(format!(
            "p_abs must lie in (0, 1), got {p_abs}"
        )));
    }
    if tau <= 0.0 {
        return Err(ScenarioError::BadParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let sys = System::new(vec![ModeSpec::gauge("M", 2)?, ModeSpec::matter("A", 2)?])?;
    let cut = Bipartition::new(&sys, &["M"])?;
    let photon = BasisLabel::new(vec![1, 0]);
    let absorbed = BasisLabel::new(vec![0, 1]);
    let initial = PureState::basis_state(&sys, &[1, 0])?;

    let caps = absorption_caps(p_abs);
    let tables: Vec<PiecewiseTable> = caps
        .iter()
        .map(|&cap| PiecewiseTable::saturating_decay(cap, tau))
        .collect::<Result<_, _>>()?;
    let n_caps = caps.len();

    let flow = {
        let sys = Arc::clone(&sys);
        let (photon, absorbed) = (photon.clone(), absorbed.clone());
        Arc::new(move |base: &PureState, stage: usize, t: f64| {
            let table = &tables[stage.min(n_caps - 1)];
            let (mu_keep, mu_abs) = table.amplitudes(t);
            let a = base.amplitude(&photon);
            let c = base.amplitude(&absorbed);
            PureState::from_amplitudes(
                &sys,
                vec![
                    (photon.clone(), a * mu_keep),
                    (absorbed.clone(), c + a * mu_abs),
                ],
            )
            .expect("absorption flow stays on the reachable set")
        })
    };
    let terminal = {
        let photon = photon.clone();
        Arc::new(move |state: &PureState, jumps: usize| {
            let has_photon = state.amplitude(&photon).norm() > 0.5;
            !has_photon || jumps >= n_caps
        })
    };
    let labeler = {
        let photon = photon.clone();
        Arc::new(move |state: &PureState, _path: &[usize]| {
            if state.amplitude(&photon).norm() > 0.5 {
                "transmitted".to_string()
            } else {
                "absorbed".to_string()
            }
        })
    };
    Ok(Scenario::new(
        "absorption",
        Initial::Pure(initial),
        cut,
        1.5 * tau,
        SolverConfig::default(),
        n_caps + 1,
        flow,
        terminal,
        labeler,
    ))
}

/// Spontaneous emission: the excited atom decays exponentially; every
/// stage reduces at the survival half-life, so remaining excited through
/// n stages has probability 2^-n.
pub fn build_emission(tau: f64, n_stages: usize) -> Result<Scenario, ScenarioError> {
    if tau <= 0.0 {
        return Err(ScenarioError::BadParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    if n_stages == 0 {
        return Err(ScenarioError::BadParameter(
            "n_stages must be at least 1".into(),
        ));
    }
    let sys = System::new(vec![ModeSpec::gauge("M", 2)?, ModeSpec::matter("Atom", 2)?])?;
    let cut = Bipartition::new(&sys, &["M"])?;
    let excited = BasisLabel::new(vec![0, 1]);
    let emitted = BasisLabel::new(vec![1, 0]);
    let initial = PureState::basis_state(&sys, &[0, 1])?;

    let flow = {
        let sys = Arc::clone(&sys);
        let (excited, emitted) = (excited.clone(), emitted.clone());
        Arc::new(move |base: &PureState, _stage: usize, t: f64| {
            let (mu0, mu1) = exp_survival(tau, t).expect("tau validated");
            let e = base.amplitude(&excited);
            let m = base.amplitude(&emitted);
            PureState::from_amplitudes(
                &sys,
                vec![(excited.clone(), e * mu0), (emitted.clone(), m + e * mu1)],
            )
            .expect("emission flow stays on the reachable set")
        })
    };
    let terminal = {
        let emitted = emitted.clone();
        Arc::new(move |state: &PureState, jumps: usize| {
            state.amplitude(&emitted).norm() > 0.5 || jumps >= n_stages
        })
    };
    let labeler = {
        let emitted = emitted.clone();
        Arc::new(move |state: &PureState, _path: &[usize]| {
            if state.amplitude(&emitted).norm() > 0.5 {
                "emitted".to_string()
            } else {
                "excited".to_string()
            }
        })
    };
    Ok(Scenario::new(
        "emission",
        Initial::Pure(initial),
        cut,
        4.0 * tau,
        SolverConfig::default(),
        n_stages + 1,
        flow,
        terminal,
        labeler,
    ))
}

/// Particle detection through secondary photon emission into one of N
/// channels. In the symmetric case every first-stage weight solves to
/// 1/(N+1); the general case is handled by the same numeric stationarity
/// search.
pub fn build_detection(
    channels: usize,
    taus: Option<Vec<f64>>,
    n_stages: usize,
) -> Result<Scenario, ScenarioError> {
    if channels == 0 {
        return Err(ScenarioError::BadParameter(
            "need at least one channel".into(),
        ));
    }
    if n_stages == 0 {
        return Err(ScenarioError::BadParameter(
            "n_stages must be at least 1".into(),
        ));
    }
    let taus = taus.unwrap_or_else(|| vec![1.0; channels]);
    if taus.len() != channels {
        return Err(ScenarioError::BadParameter(format!(
            "expected {channels} decay times, got {}",
            taus.len()
        )));
    }
    if taus.iter().any(|&t| t <= 0.0) {
        return Err(ScenarioError::BadParameter(
            "decay times must be positive".into(),
        ));
    }

    let mut modes: Vec<ModeSpec> = (1..=channels)
        .map(|s| ModeSpec::gauge(format!("M{s}"), 2))
        .collect::<Result<_, _>>()?;
    modes.push(ModeSpec::matter("DP", 2 * channels)?);
    let sys = System::new(modes)?;
    let gauge_names: Vec<String> = (1..=channels).map(|s| format!("M{s}")).collect();
    let gauge_refs: Vec<&str> = gauge_names.iter().map(|s| s.as_str()).collect();
    let cut = Bipartition::new(&sys, &gauge_refs)?;

    // DP level 2(s-1)+1: particle waiting at channel s; 2(s-1): emitted.
    let waiting = |s: usize| -> u32 { (2 * (s - 1) + 1) as u32 };
    let fired = |s: usize| -> u32 { (2 * (s - 1)) as u32 };
    let label_for = move |ms: Option<usize>, dp: u32| -> BasisLabel {
        let mut occ = vec![0u32; channels + 1];
        if let Some(s) = ms {
            occ[s - 1] = 1;
        }
        occ[channels] = dp;
        BasisLabel::new(occ)
    };

    let amp = 1.0 / (channels as f64).sqrt();
    let initial = PureState::from_amplitudes(
        &sys,
        (1..=channels).map(|s| (label_for(None, waiting(s)), c64(amp))),
    )?;

    let horizon = 4.0 * taus.iter().cloned().fold(f64::MIN, f64::max);
    let flow = {
        let sys = Arc::clone(&sys);
        let taus = taus.clone();
        Arc::new(move |base: &PureState, _stage: usize, t: f64| {
            let mut amps = Vec::new();
            for (l, a) in base.amplitudes() {
                let dp = l.occupations()[channels];
                if dp % 2 == 1 {
                    let s = (dp as usize).div_ceil(2);
                    let (mu0, mu1) = exp_survival(taus[s - 1], t).expect("tau validated");
                    amps.push((l.clone(), a * mu0));
                    amps.push((label_for(Some(s), fired(s)), a * mu1));
                } else {
                    amps.push((l.clone(), *a));
                }
            }
            PureState::from_amplitudes(&sys, amps)
                .expect("detection flow stays on the reachable set")
        })
    };
    let photon_channel = move |state: &PureState| -> Option<usize> {
        let dom = state.dominant_label()?;
        dom.occupations()[..channels]
            .iter()
            .position(|&o| o == 1)
            .map(|i| i + 1)
    };
    let terminal = Arc::new(move |state: &PureState, jumps: usize| {
        photon_channel(state).is_some() || jumps >= n_stages
    });
    let labeler = Arc::new(
        move |state: &PureState, _path: &[usize]| match photon_channel(state) {
            Some(s) => format!("detector_{s}"),
            None => "undetected".to_string(),
        },
    );
    Ok(Scenario::new(
        "detection",
        Initial::Pure(initial),
        cut,
        horizon,
        SolverConfig::default(),
        n_stages + 1,
        flow,
        terminal,
        labeler,
    ))
}

/// Reduction of a two-state superposition through particle-mediated
/// photon emission: the s-component emits, the other component is inert,
/// and the terminal weights reproduce the superposition moduli.
pub fn build_superposition(c_s: f64, c_sbar: f64, tau: f64) -> Result<Scenario, ScenarioError> {
    check_unit_pair(c_s, c_sbar, "superposition")?;
    if tau <= 0.0 {
        return Err(ScenarioError::BadParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    // SP levels: 0 = other state, 1 = s-state not yet emitted, 2 = emitted.
    let sys = System::new(vec![ModeSpec::gauge("M", 2)?, ModeSpec::matter("SP", 3)?])?;
    let cut = Bipartition::new(&sys, &["M"])?;
    let other = BasisLabel::new(vec![0, 0]);
    let waiting = BasisLabel::new(vec![0, 1]);
    let emitted = BasisLabel::new(vec![1, 2]);
    let initial = PureState::from_amplitudes(
        &sys,
        vec![(other.clone(), c64(c_sbar)), (waiting.clone(), c64(c_s))],
    )?;

    let ramp = PiecewiseTable::ramp_down(tau)?;
    let flow = {
        let sys = Arc::clone(&sys);
        let (other, waiting, emitted) = (other.clone(), waiting.clone(), emitted.clone());
        Arc::new(move |base: &PureState, _stage: usize, t: f64| {
            let (mu0, mu1) = ramp.amplitudes(t);
            let o = base.amplitude(&other);
            let w = base.amplitude(&waiting);
            let e = base.amplitude(&emitted);
            PureState::from_amplitudes(
                &sys,
                vec![
                    (other.clone(), o),
                    (waiting.clone(), w * mu0),
                    (emitted.clone(), e + w * mu1),
                ],
            )
            .expect("superposition flow stays on the reachable set")
        })
    };
    let terminal = {
        let waiting = waiting.clone();
        Arc::new(move |state: &PureState, _jumps: usize| state.amplitude(&waiting).norm() < 1e-9)
    };
    let labeler = {
        let emitted = emitted.clone();
        Arc::new(move |state: &PureState, _path: &[usize]| {
            if state.amplitude(&emitted).norm() > 0.5 {
                "s".to_string()
            } else {
                "s_bar".to_string()
            }
        })
    };
    Ok(Scenario::new(
        "superposition",
        Initial::Pure(initial),
        cut,
        1.5 * tau,
        SolverConfig::default(),
        64,
        flow,
        terminal,
        labeler,
    ))
}

/// One-mode cascade building photon states with indefinite occupation:
/// the excited atom component climbs the photon ladder with
/// sqrt(n+1)-scaled couplings, and every jump leaves a two-term photon
/// superposition entangled with the atom.
pub fn build_nonintegral(
    alpha0: f64,
    alpha1: f64,
    omega: f64,
    fock_cutoff: usize,
    n_stages: usize,
) -> Result<Scenario, ScenarioError> {
    check_unit_pair(alpha0, alpha1, "atom")?;
    if omega <= 0.0 {
        return Err(ScenarioError::BadParameter(format!(
            "omega must be positive, got {omega}"
        )));
    }
    if n_stages == 0 {
        return Err(ScenarioError::BadParameter(
            "n_stages must be at least 1".into(),
        ));
    }
    if fock_cutoff < n_stages {
        return Err(ScenarioError::CutoffTooSmall {
            fock_cutoff,
            n_stages,
        });
    }
    let sys = System::new(vec![
        ModeSpec::matter("Atom", 2)?,
        ModeSpec::gauge("M", fock_cutoff + 1)?,
    ])?;
    let cut = Bipartition::new(&sys, &["M"])?;
    let initial = PureState::from_amplitudes(
        &sys,
        vec![
            (BasisLabel::new(vec![0, 0]), c64(alpha0)),
            (BasisLabel::new(vec![1, 0]), c64(alpha1)),
        ],
    )?;

    let flow = {
        let sys = Arc::clone(&sys);
        Arc::new(move |base: &PureState, _stage: usize, t: f64| {
            // Excitation manifold m couples {|Atom1, M(m-1)>, |Atom0, Mm>}
            // at frequency omega * sqrt(m); |Atom0, M0> is stationary.
            let mut amps = Vec::new();
            for (l, a) in base.amplitudes() {
                let occ = l.occupations();
                if occ[0] == 1 {
                    let n = occ[1];
                    debug_assert!((n as usize) < fock_cutoff, "cutoff guards cascade depth");
                    let (stay, emit) = rabi_pair(omega * ((n + 1) as f64).sqrt(), t);
                    amps.push((l.clone(), a * stay));
                    amps.push((BasisLabel::new(vec![0, n + 1]), a * emit));
                } else if occ[1] >= 1 {
                    let n = occ[1];
                    let (stay, absorb) = rabi_pair(omega * (n as f64).sqrt(), t);
                    amps.push((l.clone(), a * stay));
                    amps.push((BasisLabel::new(vec![1, n - 1]), a * absorb));
                } else {
                    amps.push((l.clone(), *a));
                }
            }
            PureState::from_amplitudes(&sys, amps).expect("cascade flow stays within the cutoff")
        })
    };
    let terminal = Arc::new(move |_state: &PureState, jumps: usize| jumps >= n_stages);
    let labeler = Arc::new(|_state: &PureState, path: &[usize]| {
        if path.is_empty() {
            "path:-".to_string()
        } else {
            format!(
                "path:{}",
                path.iter()
                    .map(|j| j.to_string())
                    .collect::<Vec<_>>()
                    .join(".")
            )
        }
    });
    Ok(Scenario::new(
        "nonintegral-cascade",
        Initial::Pure(initial),
        cut,
        std::f64::consts::PI / omega,
        SolverConfig::default(),
        n_stages + 1,
        flow,
        terminal,
        labeler,
    ))
}

/// Entangled photon pair against two absorbers: one jump resolves the
/// pair into surviving-pair, four single-photon and one fully absorbed
/// branch.
pub fn build_entangled_pair(
    c1: f64,
    c2: f64,
    tau_a: Option<f64>,
    tau_b: Option<f64>,
) -> Result<Scenario, ScenarioError> {
    check_unit_pair(c1, c2, "pair")?;
    for tau in [tau_a, tau_b].into_iter().flatten() {
        if tau <= 0.0 {
            return Err(ScenarioError::BadParameter(format!(
                "absorption time must be positive, got {tau}"
            )));
        }
    }
    // R levels: 0 none, 1 = a absorbed photon 1, 2 = a absorbed photon 2,
    // 3 = b absorbed photon 1, 4 = b absorbed photon 2, 5 = both (a1, b2),
    // 6 = both (a2, b1).
    let sys = System::new(vec![
        ModeSpec::gauge("Ma1", 2)?,
        ModeSpec::gauge("Ma2", 2)?,
        ModeSpec::gauge("Mb1", 2)?,
        ModeSpec::gauge("Mb2", 2)?,
        ModeSpec::matter("R", 7)?,
    ])?;
    let cut = Bipartition::new(&sys, &["Ma1", "Ma2", "Mb1", "Mb2"])?;
    let pair1 = BasisLabel::new(vec![1, 0, 0, 1, 0]);
    let pair2 = BasisLabel::new(vec![0, 1, 1, 0, 0]);
    let initial = PureState::from_amplitudes(
        &sys,
        vec![(pair1.clone(), c64(c1)), (pair2.clone(), c64(c2))],
    )?;

    let survival = move |tau: Option<f64>, t: f64| -> (f64, f64) {
        match tau {
            Some(tau) => {
                let p = (-t / tau).exp();
                (p.sqrt(), (1.0 - p).max(0.0).sqrt())
            }
            None => (1.0, 0.0),
        }
    };

    let flow = {
        let sys = Arc::clone(&sys);
        let (pair1, pair2) = (pair1.clone(), pair2.clone());
        Arc::new(move |base: &PureState, _stage: usize, t: f64| {
            let (sa, qa) = survival(tau_a, t);
            let (sb, qb) = survival(tau_b, t);
            let mut amps = Vec::new();
            for (l, a) in base.amplitudes() {
                if *l == pair1 {
                    amps.push((pair1.clone(), a * c64(sa * sb)));
                    amps.push((BasisLabel::new(vec![1, 0, 0, 0, 4]), a * c64(sa * qb)));
                    amps.push((BasisLabel::new(vec![0, 0, 0, 1, 1]), a * c64(qa * sb)));
                    amps.push((BasisLabel::new(vec![0, 0, 0, 0, 5]), a * c64(qa * qb)));
                } else if *l == pair2 {
                    amps.push((pair2.clone(), a * c64(sa * sb)));
                    amps.push((BasisLabel::new(vec![0, 1, 0, 0, 3]), a * c64(sa * qb)));
                    amps.push((BasisLabel::new(vec![0, 0, 1, 0, 2]), a * c64(qa * sb)));
                    amps.push((BasisLabel::new(vec![0, 0, 0, 0, 6]), a * c64(qa * qb)));
                } else {
                    amps.push((l.clone(), *a));
                }
            }
            PureState::from_amplitudes(&sys, amps).expect("pair flow stays on the reachable set")
        })
    };
    let terminal = Arc::new(move |_state: &PureState, jumps: usize| jumps >= 1);
    let labeler = Arc::new(|state: &PureState, _path: &[usize]| {
        let dom = match state.dominant_label() {
            Some(d) => d.occupations().to_vec(),
            None => return "zero".to_string(),
        };
        let photons: Vec<usize> = dom[..4]
            .iter()
            .enumerate()
            .filter(|(_, &o)| o == 1)
            .map(|(i, _)| i)
            .collect();
        match photons.len() {
            2 => "pair".to_string(),
            1 => match photons[0] {
                0 => "photon_a1".to_string(),
                1 => "photon_a2".to_string(),
                2 => "photon_b1".to_string(),
                _ => "photon_b2".to_string(),
            },
            _ => "absorbed_both".to_string(),
        }
    });
    let horizon = 5.0 * tau_a.unwrap_or(1.0).max(tau_b.unwrap_or(1.0));
    Ok(Scenario::new(
        "entangled-pair",
        Initial::Pure(initial),
        cut,
        horizon,
        SolverConfig::default(),
        2,
        flow,
        terminal,
        labeler,
    ))
}

/// Atom-photon entanglement dissolved by photon absorption: the first
/// jump resolves at the stationary point of the mixed entropy, the second
/// at the survival half-crossing.
pub fn build_atom_photon(c1: f64, c2: f64, tau: f64) -> Result<Scenario, ScenarioError> {
    check_unit_pair(c1, c2, "atom-photon")?;
    if tau <= 0.0 {
        return Err(ScenarioError::BadParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    // R levels: 0 = vacuum reservoir, l = photon l absorbed.
    let sys = System::new(vec![
        ModeSpec::gauge("M1", 2)?,
        ModeSpec::gauge("M2", 2)?,
        ModeSpec::matter("Atom", 2)?,
        ModeSpec::matter("R", 3)?,
    ])?;
    let cut = Bipartition::new(&sys, &["M1", "M2"])?;
    let branch1 = BasisLabel::new(vec![1, 0, 0, 0]);
    let branch2 = BasisLabel::new(vec![0, 1, 1, 0]);
    let initial = PureState::from_amplitudes(
        &sys,
        vec![(branch1.clone(), c64(c1)), (branch2.clone(), c64(c2))],
    )?;

    let flow = {
        let sys = Arc::clone(&sys);
        Arc::new(move |base: &PureState, _stage: usize, t: f64| {
            // Photon survival and absorption amplitudes.
            let (mu1, mu0) = exp_survival(tau, t).expect("tau validated");
            let mut amps = Vec::new();
            for (l, a) in base.amplitudes() {
                let occ = l.occupations();
                let photon = if occ[0] == 1 {
                    Some(1u32)
                } else if occ[1] == 1 {
                    Some(2u32)
                } else {
                    None
                };
                match photon {
                    Some(p) if occ[3] == 0 => {
                        amps.push((l.clone(), a * mu1));
                        amps.push((BasisLabel::new(vec![0, 0, occ[2], p]), a * mu0));
                    }
                    _ => amps.push((l.clone(), *a)),
                }
            }
            PureState::from_amplitudes(&sys, amps)
                .expect("atom-photon flow stays on the reachable set")
        })
    };
    let terminal = Arc::new(move |_state: &PureState, jumps: usize| jumps >= 2);
    let labeler = Arc::new(|state: &PureState, _path: &[usize]| {
        let dom = match state.dominant_label() {
            Some(d) => d.occupations().to_vec(),
            None => return "zero".to_string(),
        };
        if dom[0] == 1 {
            "photon_1".to_string()
        } else if dom[1] == 1 {
            "photon_2".to_string()
        } else {
            "absorbed".to_string()
        }
    });
    Ok(Scenario::new(
        "atom-photon",
        Initial::Pure(initial),
        cut,
        4.0 * tau,
        SolverConfig::default(),
        3,
        flow,
        terminal,
        labeler,
    ))
}

/// Intermediate weak boson: production and decay rates shape the boson
/// occupation curve; the first jump lands on its half-crossing or peak,
/// and a produced boson decays through a second stage.
pub fn build_weak_boson(lambda_in: f64, lambda_1: f64) -> Result<Scenario, ScenarioError> {
    if lambda_in <= 0.0 || lambda_1 <= 0.0 {
        return Err(ScenarioError::BadParameter(format!(
            "rates must be positive, got lambda_in={lambda_in}, lambda_1={lambda_1}"
        )));
    }
    let beta = lambda_1 / lambda_in;
    // P levels: 0 = incoming particle, 1 = first outgoing + boson,
    // 2 = full outgoing set.
    let sys = System::new(vec![ModeSpec::gauge("W", 2)?, ModeSpec::matter("P", 3)?])?;
    let cut = Bipartition::new(&sys, &["W"])?;
    let incoming = BasisLabel::new(vec![0, 0]);
    let boson = BasisLabel::new(vec![1, 1]);
    let outgoing = BasisLabel::new(vec![0, 2]);
    let initial = PureState::basis_state(&sys, &[0, 0])?;

    let flow = {
        let sys = Arc::clone(&sys);
        let (incoming, boson, outgoing) = (incoming.clone(), boson.clone(), outgoing.clone());
        Arc::new(move |base: &PureState, stage: usize, t: f64| {
            if stage == 0 {
                let s = weak_boson_curves(beta, lambda_in * t).expect("beta validated");
                PureState::from_amplitudes(
                    &sys,
                    vec![
                        (incoming.clone(), c64(s.w_in.sqrt())),
                        (boson.clone(), c64(s.w_boson.sqrt())),
                        (outgoing.clone(), c64(s.w_out.sqrt())),
                    ],
                )
                .expect("kinetics curves are normalized")
            } else {
                // Boson decay into the outgoing sector.
                let (keep, decay) = exp_survival(1.0 / lambda_1, t).expect("rate validated");
                let b = base.amplitude(&boson);
                let o = base.amplitude(&outgoing);
                let i = base.amplitude(&incoming);
                PureState::from_amplitudes(
                    &sys,
                    vec![
                        (incoming.clone(), i),
                        (boson.clone(), b * keep),
                        (outgoing.clone(), o + b * decay),
                    ],
                )
                .expect("decay flow stays on the reachable set")
            }
        })
    };
    let terminal = {
        let boson = boson.clone();
        Arc::new(move |state: &PureState, jumps: usize| {
            let has_boson = state.amplitude(&boson).norm() > 0.5;
            (!has_boson && jumps >= 1) || jumps >= 2
        })
    };
    let labeler = {
        let boson = boson.clone();
        Arc::new(move |state: &PureState, _path: &[usize]| {
            if state.amplitude(&boson).norm() > 0.5 {
                "boson".to_string()
            } else {
                "no_boson".to_string()
            }
        })
    };
    // Window covering the occupation peak and the boson decay half-life.
    let (tau0, _) = crate::evolution::weak_boson_peak(beta)?;
    let horizon = (6.0f64).max(4.0 * tau0).max(4.0 / beta) / lambda_in;
    Ok(Scenario::new(
        "weak-boson",
        Initial::Pure(initial),
        cut,
        horizon,
        SolverConfig::default(),
        3,
        flow,
        terminal,
        labeler,
    ))
}
