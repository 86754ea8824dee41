//! Schmidt decomposition of a pure state across a gauge/rest bipartition.
//!
//! The cut separates the designated gauge boson modes from everything else.
//! Support labels are split along the cut, the amplitudes are materialized
//! as a dense matrix over the (lexicographically sorted) gauge and rest
//! sublabels that actually occur, and a singular value decomposition gives
//! the biorthogonal expansion
//!
//! ```text
//! |psi> = sum_j c_j |Gj> (x) |Rj>,   c_j >= 0 descending
//! ```
//!
//! Determinism rules (these make jump enumeration and golden outputs
//! stable):
//! - coefficients within [`tol::DEGENERACY_EPS`] of each other are ordered
//!   by the lexicographically smallest dominant gauge basis label;
//! - each term's phase is fixed so the largest-modulus gauge amplitude is
//!   real positive (the compensating phase moves into the rest factor);
//! - singular values at or below [`tol::RANK_EPS`] are discarded.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::state::{BasisLabel, ModeKind, PureState, StateError, System};
use crate::svd::jacobi_svd;
use crate::tol;

#[derive(Debug, Error)]
pub enum SchmidtError {
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// A gauge/rest split of one system's modes.
///
/// Gauge positions must be gauge boson modes and at least one is required;
/// the rest side is the complement, both in system order.
#[derive(Debug, Clone)]
pub struct Bipartition {
    system: Arc<System>,
    gauge_idx: Vec<usize>,
    rest_idx: Vec<usize>,
    gauge_system: Arc<System>,
    rest_system: Arc<System>,
}

impl Bipartition {
    /// Cut the system at the given gauge mode labels; the rest side is the
    /// complement.
    pub fn new(system: &Arc<System>, gauge_labels: &[&str]) -> Result<Self, SchmidtError> {
        if gauge_labels.is_empty() {
            return Err(SchmidtError::InvalidBipartition(
                "gauge side is empty".into(),
            ));
        }
        let mut gauge_idx = Vec::with_capacity(gauge_labels.len());
        for label in gauge_labels {
            let idx = system.index_of(label).ok_or_else(|| {
                SchmidtError::InvalidBipartition(format!("unknown mode `{label}`"))
            })?;
            if gauge_idx.contains(&idx) {
                return Err(SchmidtError::InvalidBipartition(format!(
                    "mode `{label}` listed twice"
                )));
            }
            if system.modes()[idx].kind() != ModeKind::GaugeBoson {
                return Err(SchmidtError::InvalidBipartition(format!(
                    "mode `{label}` is not a gauge boson mode"
                )));
            }
            gauge_idx.push(idx);
        }
        gauge_idx.sort_unstable();
        let rest_idx: Vec<usize> = (0..system.mode_count())
            .filter(|i| !gauge_idx.contains(i))
            .collect();
        if rest_idx.is_empty() {
            return Err(SchmidtError::InvalidBipartition(
                "rest side is empty".into(),
            ));
        }
        let gauge_system = System::new(
            gauge_idx
                .iter()
                .map(|&i| system.modes()[i].clone())
                .collect(),
        )
        .map_err(SchmidtError::State)?;
        let rest_system = System::new(
            rest_idx
                .iter()
                .map(|&i| system.modes()[i].clone())
                .collect(),
        )
        .map_err(SchmidtError::State)?;
        Ok(Self {
            system: Arc::clone(system),
            gauge_idx,
            rest_idx,
            gauge_system,
            rest_system,
        })
    }

    /// Cut from explicit gauge and rest label sets; they must partition the
    /// system's modes exactly.
    pub fn from_sets(
        system: &Arc<System>,
        gauge_labels: &[&str],
        rest_labels: &[&str],
    ) -> Result<Self, SchmidtError> {
        let cut = Self::new(system, gauge_labels)?;
        let mut want: Vec<&str> = rest_labels.to_vec();
        want.sort_unstable();
        let mut have: Vec<&str> = cut
            .rest_idx
            .iter()
            .map(|&i| system.modes()[i].label())
            .collect();
        have.sort_unstable();
        if want != have {
            return Err(SchmidtError::InvalidBipartition(
                "gauge and rest sets do not partition the system".into(),
            ));
        }
        Ok(cut)
    }

    pub fn system(&self) -> &Arc<System> {
        &self.system
    }

    pub fn gauge_system(&self) -> &Arc<System> {
        &self.gauge_system
    }

    pub fn rest_system(&self) -> &Arc<System> {
        &self.rest_system
    }

    pub fn gauge_labels(&self) -> Vec<&str> {
        self.gauge_idx
            .iter()
            .map(|&i| self.system.modes()[i].label())
            .collect()
    }

    pub fn rest_labels(&self) -> Vec<&str> {
        self.rest_idx
            .iter()
            .map(|&i| self.system.modes()[i].label())
            .collect()
    }

    /// Split a full-system label into (gauge sublabel, rest sublabel).
    pub fn split(&self, label: &BasisLabel) -> (BasisLabel, BasisLabel) {
        let occs = label.occupations();
        let g = self.gauge_idx.iter().map(|&i| occs[i]).collect();
        let r = self.rest_idx.iter().map(|&i| occs[i]).collect();
        (BasisLabel::new(g), BasisLabel::new(r))
    }

    /// Reassemble a full-system label from its two sublabels.
    pub fn assemble(&self, gauge: &BasisLabel, rest: &BasisLabel) -> BasisLabel {
        let mut occs = vec![0u32; self.system.mode_count()];
        for (&i, &o) in self.gauge_idx.iter().zip(gauge.occupations()) {
            occs[i] = o;
        }
        for (&i, &o) in self.rest_idx.iter().zip(rest.occupations()) {
            occs[i] = o;
        }
        BasisLabel::new(occs)
    }

    /// Product state `gauge_vec (x) rest_vec` embedded on the original
    /// system, with mode positions restored.
    pub fn assemble_state(
        &self,
        gauge_vec: &PureState,
        rest_vec: &PureState,
    ) -> Result<PureState, SchmidtError> {
        let mut amps = Vec::with_capacity(gauge_vec.support_len() * rest_vec.support_len());
        for (gl, ga) in gauge_vec.amplitudes() {
            for (rl, ra) in rest_vec.amplitudes() {
                amps.push((self.assemble(gl, rl), ga * ra));
            }
        }
        Ok(PureState::from_amplitudes(&self.system, amps)?)
    }

    fn matches_system(&self, state: &PureState) -> bool {
        Arc::ptr_eq(state.system(), &self.system) || **state.system() == *self.system
    }
}

/// One Schmidt term: a coefficient and its two normalized factors.
#[derive(Debug, Clone)]
pub struct SchmidtTerm {
    pub coefficient: f64,
    pub gauge_vec: PureState,
    pub rest_vec: PureState,
}

/// Ordered biorthogonal expansion of a state across one bipartition.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    cut: Bipartition,
    terms: Vec<SchmidtTerm>,
}

impl SchmidtDecomposition {
    pub fn cut(&self) -> &Bipartition {
        &self.cut
    }

    pub fn terms(&self) -> &[SchmidtTerm] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// Branch weights `w_j = c_j^2`.
    pub fn weights(&self) -> Vec<f64> {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.coefficient)
            .collect()
    }

    /// Rebuild `sum_j c_j |Gj>(x)|Rj>` on the original system.
    pub fn reconstruct(&self) -> Result<PureState, SchmidtError> {
        let mut acc = PureState::from_amplitudes(self.cut.system(), Vec::new())?;
        for term in &self.terms {
            let prod = self.cut.assemble_state(&term.gauge_vec, &term.rest_vec)?;
            acc = acc.add(&prod.scaled(Complex64::new(term.coefficient, 0.0)))?;
        }
        Ok(acc)
    }
}

/// Factor a normalized state across the cut.
pub fn schmidt_decompose(
    state: &PureState,
    cut: &Bipartition,
) -> Result<SchmidtDecomposition, SchmidtError> {
    if !cut.matches_system(state) {
        return Err(SchmidtError::InvalidBipartition(
            "cut was built for a different system".into(),
        ));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > tol::NORM_TOL {
        return Err(SchmidtError::NotNormalized { norm });
    }

    // Dense matrix over the sublabels that occur in the support. Sorted
    // sublabel order makes the matrix, and thus the factorization,
    // deterministic.
    let mut gauge_labels: Vec<BasisLabel> = Vec::new();
    let mut rest_labels: Vec<BasisLabel> = Vec::new();
    for (label, _) in state.amplitudes() {
        let (g, r) = cut.split(label);
        if let Err(i) = gauge_labels.binary_search(&g) {
            gauge_labels.insert(i, g);
        }
        if let Err(i) = rest_labels.binary_search(&r) {
            rest_labels.insert(i, r);
        }
    }
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); rest_labels.len()]; gauge_labels.len()];
    for (label, amp) in state.amplitudes() {
        let (g, r) = cut.split(label);
        let gi = gauge_labels.binary_search(&g).unwrap();
        let ri = rest_labels.binary_search(&r).unwrap();
        matrix[gi][ri] = *amp;
    }

    let svd = jacobi_svd(&matrix);
    let mut terms = Vec::new();
    for (k, &c) in svd.sigma.iter().enumerate() {
        if c <= tol::RANK_EPS {
            continue;
        }
        let gauge_vec = PureState::from_amplitudes(
            cut.gauge_system(),
            gauge_labels.iter().cloned().zip(svd.u[k].iter().copied()),
        )?;
        // Right factor carries the conjugated right singular vector so the
        // product reconstructs the input.
        let rest_vec = PureState::from_amplitudes(
            cut.rest_system(),
            rest_labels
                .iter()
                .cloned()
                .zip(svd.v[k].iter().map(|v| v.conj())),
        )?;
        terms.push(SchmidtTerm {
            coefficient: c,
            gauge_vec,
            rest_vec,
        });
    }

    // Phase convention: dominant gauge amplitude real positive.
    for term in &mut terms {
        let dom = term
            .gauge_vec
            .dominant_label()
            .expect("schmidt term has nonzero gauge factor")
            .clone();
        let amp = term.gauge_vec.amplitude(&dom);
        if amp.norm() > 0.0 {
            let phase = amp / amp.norm();
            term.gauge_vec = term.gauge_vec.scaled(phase.conj());
            term.rest_vec = term.rest_vec.scaled(phase);
        }
    }

    // Descending coefficients; degenerate ties ordered by the dominant
    // gauge label.
    terms.sort_by(|a, b| {
        if (a.coefficient - b.coefficient).abs() <= tol::DEGENERACY_EPS {
            let da = a.gauge_vec.dominant_label().cloned();
            let db = b.gauge_vec.dominant_label().cloned();
            da.cmp(&db)
        } else {
            b.coefficient.partial_cmp(&a.coefficient).unwrap()
        }
    });

    Ok(SchmidtDecomposition {
        cut: cut.clone(),
        terms,
    })
}

/// Branch weights of a decomposition, `w_j = c_j^2`.
pub fn schmidt_weights(d: &SchmidtDecomposition) -> Vec<f64> {
    d.weights()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ModeSpec;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn photon_crystal() -> (Arc<System>, Bipartition) {
        let sys = System::new(vec![
            ModeSpec::gauge("Mp", 2).unwrap(),
            ModeSpec::gauge("Ml", 2).unwrap(),
            ModeSpec::matter("T", 2).unwrap(),
        ])
        .unwrap();
        let cut = Bipartition::new(&sys, &["Mp", "Ml"]).unwrap();
        (sys, cut)
    }

    #[test]
    fn product_state_is_rank_one() {
        let sys = System::new(vec![
            ModeSpec::gauge("M", 2).unwrap(),
            ModeSpec::matter("T", 2).unwrap(),
        ])
        .unwrap();
        let cut = Bipartition::new(&sys, &["M"]).unwrap();
        let s = PureState::basis_state(&sys, &[1, 0]).unwrap();
        let d = schmidt_decompose(&s, &cut).unwrap();
        assert_eq!(d.rank(), 1);
        assert!((d.terms()[0].coefficient - 1.0).abs() < 1e-12);
        assert_eq!(schmidt_weights(&d), d.weights());
        assert!((d.weights()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn common_crystal_factor_keeps_polarization_superposition_rank_one() {
        // sin(a)|Mp1,Ml0> + cos(a)|Mp0,Ml1>, crystal in its ground state:
        // unentangled across the cut, a single unit coefficient.
        let (sys, cut) = photon_crystal();
        let alpha = 0.7f64;
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![1, 0, 0]), c64(alpha.sin(), 0.0)),
                (BasisLabel::new(vec![0, 1, 0]), c64(alpha.cos(), 0.0)),
            ],
        )
        .unwrap();
        let d = schmidt_decompose(&s, &cut).unwrap();
        assert_eq!(d.rank(), 1);
        assert!((d.terms()[0].coefficient - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_level_absorber_coefficients_match_quadratic_oracle() {
        // mu1|M1,A0> + mu0|M0,A1> with |mu1|^2 = 0.7: the coefficients are
        // the singular values of the explicit 2x2 amplitude matrix, which
        // is diagonal here, so (sqrt(0.7), sqrt(0.3)).
        let sys = System::new(vec![
            ModeSpec::gauge("M", 2).unwrap(),
            ModeSpec::matter("A", 2).unwrap(),
        ])
        .unwrap();
        let cut = Bipartition::new(&sys, &["M"]).unwrap();
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![1, 0]), c64(0.7f64.sqrt(), 0.0)),
                (BasisLabel::new(vec![0, 1]), c64(0.3f64.sqrt(), 0.0)),
            ],
        )
        .unwrap();
        let d = schmidt_decompose(&s, &cut).unwrap();
        assert_eq!(d.rank(), 2);
        assert!((d.terms()[0].coefficient - 0.7f64.sqrt()).abs() < 1e-12);
        assert!((d.terms()[1].coefficient - 0.3f64.sqrt()).abs() < 1e-12);
        let w = d.weights();
        assert!((w[0] - 0.7).abs() < 1e-12);
        assert!((w[1] - 0.3).abs() < 1e-12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_unnormalized_states_and_bad_cuts() {
        let sys = System::new(vec![
            ModeSpec::gauge("M", 2).unwrap(),
            ModeSpec::matter("A", 2).unwrap(),
        ])
        .unwrap();
        let cut = Bipartition::new(&sys, &["M"]).unwrap();
        let s = PureState::basis_state(&sys, &[1, 0])
            .unwrap()
            .scaled(c64(2.0, 0.0));
        assert!(matches!(
            schmidt_decompose(&s, &cut),
            Err(SchmidtError::NotNormalized { .. })
        ));
        assert!(Bipartition::new(&sys, &[]).is_err());
        assert!(Bipartition::new(&sys, &["A"]).is_err());
        assert!(Bipartition::new(&sys, &["X"]).is_err());
        assert!(Bipartition::from_sets(&sys, &["M"], &["A"]).is_ok());
        assert!(Bipartition::from_sets(&sys, &["M"], &[]).is_err());
    }

    #[test]
    fn reconstruction_and_orthonormality_on_random_states() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for trial in 0..40usize {
            let gdim = 2 + (trial % 3);
            let rdim = 2 + (trial % 4);
            let sys = System::new(vec![
                ModeSpec::gauge("G", gdim).unwrap(),
                ModeSpec::matter("R", rdim).unwrap(),
            ])
            .unwrap();
            let cut = Bipartition::new(&sys, &["G"]).unwrap();
            let amps: Vec<_> = (0..gdim as u32)
                .flat_map(|g| (0..rdim as u32).map(move |r| (g, r)))
                .map(|(g, r)| {
                    (
                        BasisLabel::new(vec![g, r]),
                        c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                    )
                })
                .collect();
            let s = PureState::from_amplitudes(&sys, amps)
                .unwrap()
                .normalize()
                .unwrap();
            let d = schmidt_decompose(&s, &cut).unwrap();

            let back = d.reconstruct().unwrap();
            assert!(back.max_amp_diff(&s).unwrap() < 1e-9);

            let w: f64 = d.weights().iter().sum();
            assert!((w - 1.0).abs() < 1e-10);

            for i in 0..d.rank() {
                for j in i..d.rank() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    let gg = d.terms()[i]
                        .gauge_vec
                        .inner(&d.terms()[j].gauge_vec)
                        .unwrap();
                    let rr = d.terms()[i].rest_vec.inner(&d.terms()[j].rest_vec).unwrap();
                    assert!((gg.norm() - want).abs() < 1e-9);
                    assert!((rr.norm() - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn coefficients_invariant_under_local_gauge_rotation() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let sys = System::new(vec![
            ModeSpec::gauge("G", 2).unwrap(),
            ModeSpec::matter("R", 3).unwrap(),
        ])
        .unwrap();
        let cut = Bipartition::new(&sys, &["G"]).unwrap();
        for _ in 0..20 {
            let amps: Vec<_> = (0..2u32)
                .flat_map(|g| (0..3u32).map(move |r| (g, r)))
                .map(|(g, r)| {
                    (
                        BasisLabel::new(vec![g, r]),
                        c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                    )
                })
                .collect();
            let s = PureState::from_amplitudes(&sys, amps)
                .unwrap()
                .normalize()
                .unwrap();

            // Random 2x2 unitary on the gauge mode via Gram-Schmidt.
            let a0 = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let a1 = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let n0 = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
            let (u00, u10) = (a0 / n0, a1 / n0);
            let b0 = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let b1 = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let ov = u00.conj() * b0 + u10.conj() * b1;
            let (mut v0, mut v1) = (b0 - ov * u00, b1 - ov * u10);
            let nv = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
            v0 /= nv;
            v1 /= nv;
            let u = [[u00, v0], [u10, v1]];

            let mut rotated = Vec::new();
            for (l, amp) in s.amplitudes() {
                let occ = l.occupations();
                for new_g in 0..2u32 {
                    let factor = u[new_g as usize][occ[0] as usize];
                    rotated.push((BasisLabel::new(vec![new_g, occ[1]]), factor * amp));
                }
            }
            let s_rot = PureState::from_amplitudes(&sys, rotated)
                .unwrap()
                .normalize()
                .unwrap();

            let c_orig: Vec<f64> = schmidt_decompose(&s, &cut)
                .unwrap()
                .terms()
                .iter()
                .map(|t| t.coefficient)
                .collect();
            let c_rot: Vec<f64> = schmidt_decompose(&s_rot, &cut)
                .unwrap()
                .terms()
                .iter()
                .map(|t| t.coefficient)
                .collect();
            assert_eq!(c_orig.len(), c_rot.len());
            for (a, b) in c_orig.iter().zip(&c_rot) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn phase_convention_makes_dominant_gauge_amplitude_real() {
        let sys = System::new(vec![
            ModeSpec::gauge("G", 2).unwrap(),
            ModeSpec::matter("R", 2).unwrap(),
        ])
        .unwrap();
        let cut = Bipartition::new(&sys, &["G"]).unwrap();
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![0, 0]), Complex64::from_polar(0.6, 1.2)),
                (
                    BasisLabel::new(vec![1, 1]),
                    Complex64::from_polar(0.8, -0.4),
                ),
            ],
        )
        .unwrap();
        let d = schmidt_decompose(&s, &cut).unwrap();
        for term in d.terms() {
            let dom = term.gauge_vec.dominant_label().unwrap().clone();
            let amp = term.gauge_vec.amplitude(&dom);
            assert!(amp.im.abs() < 1e-12);
            assert!(amp.re > 0.0);
        }
        // Reconstruction still matches despite the rephasing.
        assert!(d.reconstruct().unwrap().max_amp_diff(&s).unwrap() < 1e-10);
    }

    #[test]
    fn mode_positions_restored_when_gauge_mode_is_not_first() {
        // Rest mode listed before the gauge mode: assemble must scatter
        // occupations back to their original positions.
        let sys = System::new(vec![
            ModeSpec::matter("A", 2).unwrap(),
            ModeSpec::gauge("M", 3).unwrap(),
        ])
        .unwrap();
        let cut = Bipartition::new(&sys, &["M"]).unwrap();
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![0, 2]), c64(0.6, 0.0)),
                (BasisLabel::new(vec![1, 0]), c64(0.0, 0.8)),
            ],
        )
        .unwrap();
        let d = schmidt_decompose(&s, &cut).unwrap();
        assert!(d.reconstruct().unwrap().max_amp_diff(&s).unwrap() < 1e-10);
    }
}
