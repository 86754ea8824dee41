//! Sparse complex state vectors over tensor products of labeled modes.
//!
//! A [`System`] is an ordered list of modes, each with a label, a kind
//! (gauge boson or matter) and a finite dimension (occupation cutoff + 1
//! for boson modes, level count for matter subsystems). A [`PureState`]
//! stores amplitudes in a sorted sparse map keyed by occupation tuples, so
//! dense materializations and iteration order are always the lexicographic
//! order of those tuples.
//!
//! All values are immutable after construction and operations are pure
//! functions; states can be shared freely across trajectory workers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::tol;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("duplicate mode label `{0}`")]
    DuplicateModeLabel(String),
    #[error("mode dimension must be at least 1")]
    ZeroDimension,
    #[error("basis label has {got} entries but the system has {want} modes")]
    LabelLength { got: usize, want: usize },
    #[error("occupation {occ} out of range for mode `{label}` of dimension {dim}")]
    OccupationOutOfRange { label: String, occ: u32, dim: usize },
    #[error("states live on different systems")]
    SystemMismatch,
    #[error("state has zero norm")]
    ZeroState,
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("ensemble weights must be positive and sum to 1 (sum = {0})")]
    BadEnsembleWeights(f64),
    #[error("ensemble member {index} is not normalized (norm = {norm})")]
    UnnormalizedMember { index: usize, norm: f64 },
}

/// Whether a mode participates in the gauge side of a reduction cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    GaugeBoson,
    Matter,
}

/// One labeled mode with a finite state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSpec {
    label: String,
    kind: ModeKind,
    dim: usize,
}

impl ModeSpec {
    pub fn new(label: impl Into<String>, kind: ModeKind, dim: usize) -> Result<Self, StateError> {
        if dim == 0 {
            return Err(StateError::ZeroDimension);
        }
        Ok(Self {
            label: label.into(),
            kind,
            dim,
        })
    }

    /// Gauge boson mode with occupations `0..dim`.
    pub fn gauge(label: impl Into<String>, dim: usize) -> Result<Self, StateError> {
        Self::new(label, ModeKind::GaugeBoson, dim)
    }

    /// Matter subsystem with `dim` levels.
    pub fn matter(label: impl Into<String>, dim: usize) -> Result<Self, StateError> {
        Self::new(label, ModeKind::Matter, dim)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// An ordered collection of uniquely labeled modes.
#[derive(Debug, PartialEq, Eq)]
pub struct System {
    modes: Vec<ModeSpec>,
}

impl System {
    pub fn new(modes: Vec<ModeSpec>) -> Result<Arc<Self>, StateError> {
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].iter().any(|p| p.label() == m.label()) {
                return Err(StateError::DuplicateModeLabel(m.label().to_string()));
            }
        }
        Ok(Arc::new(Self { modes }))
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.modes.iter().position(|m| m.label() == label)
    }

    /// Total Hilbert-space dimension (product of mode dimensions).
    pub fn dim(&self) -> usize {
        self.modes.iter().map(|m| m.dim()).product()
    }

    fn check_label(&self, occs: &[u32]) -> Result<(), StateError> {
        if occs.len() != self.modes.len() {
            return Err(StateError::LabelLength {
                got: occs.len(),
                want: self.modes.len(),
            });
        }
        for (m, &occ) in self.modes.iter().zip(occs) {
            if occ as usize >= m.dim() {
                return Err(StateError::OccupationOutOfRange {
                    label: m.label().to_string(),
                    occ,
                    dim: m.dim(),
                });
            }
        }
        Ok(())
    }

    /// Render an occupation tuple as `label=occ` pairs, e.g. `M=1,T=0`.
    pub fn label_string(&self, occs: &BasisLabel) -> String {
        self.modes
            .iter()
            .zip(occs.occupations())
            .map(|(m, &o)| format!("{}={}", m.label(), o))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn same_system(a: &Arc<System>, b: &Arc<System>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// One occupation tuple, ordered like the system's mode list.
///
/// The derived `Ord` is the lexicographic order on tuples, which fixes the
/// basis ordering used for every dense materialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel(Vec<u32>);

impl BasisLabel {
    pub fn new(occs: Vec<u32>) -> Self {
        Self(occs)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for BasisLabel {
    fn from(occs: Vec<u32>) -> Self {
        Self(occs)
    }
}

impl From<&[u32]> for BasisLabel {
    fn from(occs: &[u32]) -> Self {
        Self(occs.to_vec())
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|o| o.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A normalizable sparse state vector on a [`System`].
///
/// Amplitudes with modulus at or below [`tol::AMP_DROP`] are pruned on
/// construction, so the support of the map is always meaningful.
#[derive(Debug, Clone)]
pub struct PureState {
    system: Arc<System>,
    amps: BTreeMap<BasisLabel, Complex64>,
}

impl PureState {
    /// The basis ket with the given occupation tuple.
    pub fn basis_state(system: &Arc<System>, occs: &[u32]) -> Result<Self, StateError> {
        system.check_label(occs)?;
        let mut amps = BTreeMap::new();
        amps.insert(BasisLabel::from(occs), Complex64::new(1.0, 0.0));
        Ok(Self {
            system: Arc::clone(system),
            amps,
        })
    }

    /// Build a state from `(label, amplitude)` pairs. Repeated labels
    /// accumulate; tiny amplitudes are dropped.
    pub fn from_amplitudes<I>(system: &Arc<System>, iter: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (BasisLabel, Complex64)>,
    {
        let mut amps: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
        for (label, amp) in iter {
            system.check_label(label.occupations())?;
            *amps.entry(label).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        amps.retain(|_, a| a.norm() > tol::AMP_DROP);
        Ok(Self {
            system: Arc::clone(system),
            amps,
        })
    }

    pub fn system(&self) -> &Arc<System> {
        &self.system
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.amps
            .get(label)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterate the support in lexicographic label order.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.amps.iter()
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Inner product `<self|other>`: the left argument is conjugated.
    pub fn inner(&self, other: &Self) -> Result<Complex64, StateError> {
        if !same_system(&self.system, &other.system) {
            return Err(StateError::SystemMismatch);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        // Only the support intersection contributes; walk the smaller map.
        if self.amps.len() <= other.amps.len() {
            for (label, a) in &self.amps {
                if let Some(b) = other.amps.get(label) {
                    acc += a.conj() * b;
                }
            }
        } else {
            for (label, b) in &other.amps {
                if let Some(a) = self.amps.get(label) {
                    acc += a.conj() * b;
                }
            }
        }
        Ok(acc)
    }

    /// Tensor product; mode lists concatenate, labels must stay unique.
    pub fn tensor(&self, other: &Self) -> Result<Self, StateError> {
        let mut modes = self.system.modes().to_vec();
        for m in other.system.modes() {
            if self.system.index_of(m.label()).is_some() {
                return Err(StateError::DuplicateModeLabel(m.label().to_string()));
            }
            modes.push(m.clone());
        }
        let system = System::new(modes)?;
        let mut amps = BTreeMap::new();
        for (la, aa) in &self.amps {
            for (lb, ab) in &other.amps {
                let mut occs = la.occupations().to_vec();
                occs.extend_from_slice(lb.occupations());
                let amp = aa * ab;
                if amp.norm() > tol::AMP_DROP {
                    amps.insert(BasisLabel::new(occs), amp);
                }
            }
        }
        Ok(Self { system, amps })
    }

    /// Rescale to unit norm. The direction, including the global phase, is
    /// untouched.
    pub fn normalize(&self) -> Result<Self, StateError> {
        let n = self.norm();
        if n < tol::ZERO_NORM {
            return Err(StateError::ZeroState);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut amps = BTreeMap::new();
        for (l, a) in &self.amps {
            let v = a * factor;
            if v.norm() > tol::AMP_DROP {
                amps.insert(l.clone(), v);
            }
        }
        Self {
            system: Arc::clone(&self.system),
            amps,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, StateError> {
        if !same_system(&self.system, &other.system) {
            return Err(StateError::SystemMismatch);
        }
        let mut amps = self.amps.clone();
        for (l, a) in &other.amps {
            *amps.entry(l.clone()).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        amps.retain(|_, a| a.norm() > tol::AMP_DROP);
        Ok(Self {
            system: Arc::clone(&self.system),
            amps,
        })
    }

    /// Largest-modulus basis label; ties resolve to the lexicographically
    /// smallest. `None` for the zero state.
    pub fn dominant_label(&self) -> Option<&BasisLabel> {
        let mut best: Option<(&BasisLabel, f64)> = None;
        for (l, a) in &self.amps {
            let m = a.norm();
            match best {
                Some((_, bm)) if m <= bm => {}
                _ => best = Some((l, m)),
            }
        }
        best.map(|(l, _)| l)
    }

    /// `label=occ` rendering of the dominant basis label, used as the
    /// canonical outcome name for terminal states.
    pub fn dominant_label_string(&self) -> String {
        match self.dominant_label() {
            Some(l) => self.system.label_string(l),
            None => "zero".to_string(),
        }
    }

    /// Max-norm distance between amplitude maps (same system required).
    pub fn max_amp_diff(&self, other: &Self) -> Result<f64, StateError> {
        if !same_system(&self.system, &other.system) {
            return Err(StateError::SystemMismatch);
        }
        let mut worst = 0.0f64;
        for (l, a) in &self.amps {
            worst = worst.max((a - other.amplitude(l)).norm());
        }
        for (l, b) in &other.amps {
            worst = worst.max((self.amplitude(l) - b).norm());
        }
        Ok(worst)
    }

    /// Stable byte fingerprint of (system size, support, amplitude bits).
    /// Used as an exact memoization key by the cascade runner.
    pub fn fingerprint(&self) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(16 * self.amps.len() + 8);
        bytes.extend_from_slice(&(self.system.mode_count() as u64).to_le_bytes());
        for (l, a) in &self.amps {
            for occ in l.occupations() {
                bytes.extend_from_slice(&occ.to_le_bytes());
            }
            bytes.extend_from_slice(&a.re.to_bits().to_le_bytes());
            bytes.extend_from_slice(&a.im.to_bits().to_le_bytes());
        }
        bytes
    }
}

/// A classical mixture of normalized pure states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self, StateError> {
        if members.is_empty() {
            return Err(StateError::EmptyEnsemble);
        }
        let sum: f64 = members.iter().map(|(p, _)| p).sum();
        if members.iter().any(|(p, _)| *p <= 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(StateError::BadEnsembleWeights(sum));
        }
        for (i, (_, s)) in members.iter().enumerate() {
            let n = s.norm();
            if (n - 1.0).abs() > 1e-10 {
                return Err(StateError::UnnormalizedMember { index: i, norm: n });
            }
            if !same_system(s.system(), members[0].1.system()) {
                return Err(StateError::SystemMismatch);
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_mode_system() -> Arc<System> {
        System::new(vec![
            ModeSpec::gauge("M", 2).unwrap(),
            ModeSpec::matter("T", 2).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn basis_product_has_single_label() {
        let m = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let t = System::new(vec![ModeSpec::matter("T", 2).unwrap()]).unwrap();
        let m1 = PureState::basis_state(&m, &[1]).unwrap();
        let t0 = PureState::basis_state(&t, &[0]).unwrap();
        let prod = m1.tensor(&t0).unwrap();
        assert_eq!(prod.support_len(), 1);
        assert_eq!(prod.amplitude(&BasisLabel::new(vec![1, 0])), c(1.0, 0.0));
    }

    #[test]
    fn tensor_distributes_over_superpositions() {
        let a_sys = System::new(vec![ModeSpec::gauge("A", 2).unwrap()]).unwrap();
        let b_sys = System::new(vec![ModeSpec::matter("B", 2).unwrap()]).unwrap();
        let a = PureState::from_amplitudes(
            &a_sys,
            vec![
                (BasisLabel::new(vec![0]), c(0.6, 0.0)),
                (BasisLabel::new(vec![1]), c(0.0, 0.8)),
            ],
        )
        .unwrap();
        let b = PureState::basis_state(&b_sys, &[0]).unwrap();
        let prod = a.tensor(&b).unwrap();
        assert_eq!(prod.amplitude(&BasisLabel::new(vec![0, 0])), c(0.6, 0.0));
        assert_eq!(prod.amplitude(&BasisLabel::new(vec![1, 0])), c(0.0, 0.8));
    }

    #[test]
    fn tensor_norm_is_multiplicative() {
        // Oracle: direct summation of |a_i b_j|^2 over all index pairs.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let a_sys = System::new(vec![ModeSpec::gauge("A", 3).unwrap()]).unwrap();
            let b_sys = System::new(vec![ModeSpec::matter("B", 4).unwrap()]).unwrap();
            let mk = |sys: &Arc<System>, dim: usize, rng: &mut rand_chacha::ChaCha8Rng| {
                PureState::from_amplitudes(
                    sys,
                    (0..dim as u32).map(|i| {
                        (
                            BasisLabel::new(vec![i]),
                            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                        )
                    }),
                )
                .unwrap()
            };
            let a = mk(&a_sys, 3, &mut rng).normalize().unwrap();
            let b = mk(&b_sys, 4, &mut rng).normalize().unwrap();
            let mut direct = 0.0;
            for (_, aa) in a.amplitudes() {
                for (_, ab) in b.amplitudes() {
                    direct += (aa * ab).norm_sqr();
                }
            }
            let prod = a.tensor(&b).unwrap();
            assert!((prod.norm_sq() - direct).abs() < 1e-12);
            assert!((prod.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let s = PureState::basis_state(&sys, &[0]).unwrap();
        assert_eq!(
            s.tensor(&s).unwrap_err(),
            StateError::DuplicateModeLabel("M".into())
        );
    }

    #[test]
    fn inner_of_normalized_state_with_itself_is_one() {
        let sys = two_mode_system();
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![0, 1]), c(0.3, 0.4)),
                (BasisLabel::new(vec![1, 0]), c(-0.5, 0.2)),
            ],
        )
        .unwrap()
        .normalize()
        .unwrap();
        let ip = s.inner(&s).unwrap();
        assert!((ip - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn inner_of_orthogonal_kets_is_zero() {
        let sys = two_mode_system();
        let a = PureState::basis_state(&sys, &[1, 0]).unwrap();
        let b = PureState::basis_state(&sys, &[0, 1]).unwrap();
        assert_eq!(a.inner(&b).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_conjugates_left_argument() {
        // <c1|0> + c2|1> , |1>> = conj(c2)
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let c2 = c(0.3, 0.7);
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![0]), c(0.5, 0.0)),
                (BasisLabel::new(vec![1]), c2),
            ],
        )
        .unwrap();
        let one = PureState::basis_state(&sys, &[1]).unwrap();
        assert!((s.inner(&one).unwrap() - c2.conj()).norm() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_symmetric() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let sys = two_mode_system();
        for _ in 0..20 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                PureState::from_amplitudes(
                    &sys,
                    (0..2u32)
                        .flat_map(|i| (0..2u32).map(move |j| (i, j)))
                        .map(|(i, j)| {
                            (
                                BasisLabel::new(vec![i, j]),
                                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                            )
                        }),
                )
                .unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let ab = a.inner(&b).unwrap();
            let ba = b.inner(&a).unwrap();
            assert!((ab - ba.conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn normalize_divides_by_scalar() {
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let s = PureState::from_amplitudes(&sys, vec![(BasisLabel::new(vec![1]), c(2.0, 0.0))])
            .unwrap()
            .normalize()
            .unwrap();
        assert!((s.amplitude(&BasisLabel::new(vec![1])) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalize_three_four_five() {
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![0]), c(3.0, 0.0)),
                (BasisLabel::new(vec![1]), c(4.0, 0.0)),
            ],
        )
        .unwrap()
        .normalize()
        .unwrap();
        assert!((s.amplitude(&BasisLabel::new(vec![0])) - c(0.6, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(&BasisLabel::new(vec![1])) - c(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalize_preserves_global_phase() {
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let phase = Complex64::from_polar(2.0, 1.1);
        let s = PureState::from_amplitudes(&sys, vec![(BasisLabel::new(vec![1]), phase)])
            .unwrap()
            .normalize()
            .unwrap();
        let expect = Complex64::from_polar(1.0, 1.1);
        assert!((s.amplitude(&BasisLabel::new(vec![1])) - expect).norm() < 1e-15);
    }

    #[test]
    fn normalize_zero_state_errors() {
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let z = PureState::from_amplitudes(&sys, Vec::new()).unwrap();
        assert_eq!(z.normalize().unwrap_err(), StateError::ZeroState);
    }

    #[test]
    fn tensor_is_associative_in_amplitudes() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mk = |label: &str, dim: usize, rng: &mut rand_chacha::ChaCha8Rng| {
            let sys = System::new(vec![ModeSpec::gauge(label, dim).unwrap()]).unwrap();
            PureState::from_amplitudes(
                &sys,
                (0..dim as u32).map(|i| {
                    (
                        BasisLabel::new(vec![i]),
                        c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                    )
                }),
            )
            .unwrap()
            .normalize()
            .unwrap()
        };
        let a = mk("A", 2, &mut rng);
        let b = mk("B", 3, &mut rng);
        let cst = mk("C", 2, &mut rng);
        let left = a.tensor(&b).unwrap().tensor(&cst).unwrap();
        let right = a.tensor(&b.tensor(&cst).unwrap()).unwrap();
        assert!(left.max_amp_diff(&right).unwrap() < 1e-15);
    }

    #[test]
    fn tiny_amplitudes_are_pruned() {
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![0]), c(1.0, 0.0)),
                (BasisLabel::new(vec![1]), c(1e-15, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(s.support_len(), 1);
    }

    #[test]
    fn dominant_label_breaks_ties_lexicographically() {
        let sys = two_mode_system();
        let s = PureState::from_amplitudes(
            &sys,
            vec![
                (BasisLabel::new(vec![1, 0]), c(0.5, 0.0)),
                (BasisLabel::new(vec![0, 1]), c(0.0, 0.5)),
            ],
        )
        .unwrap();
        assert_eq!(s.dominant_label().unwrap(), &BasisLabel::new(vec![0, 1]));
        assert_eq!(s.dominant_label_string(), "M=0,T=1");
    }

    #[test]
    fn ensemble_validates_weights_and_members() {
        let sys = System::new(vec![ModeSpec::gauge("M", 2).unwrap()]).unwrap();
        let s = PureState::basis_state(&sys, &[0]).unwrap();
        assert!(Ensemble::new(vec![(0.5, s.clone()), (0.5, s.clone())]).is_ok());
        assert!(matches!(
            Ensemble::new(vec![(0.7, s.clone()), (0.5, s.clone())]).unwrap_err(),
            StateError::BadEnsembleWeights(_)
        ));
        let unnorm = s.scaled(c(2.0, 0.0));
        assert!(matches!(
            Ensemble::new(vec![(1.0, unnorm)]).unwrap_err(),
            StateError::UnnormalizedMember { .. }
        ));
    }
}
