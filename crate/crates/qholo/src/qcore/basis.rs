use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use ndarray::Array1;

use crate::scalar::{Cx, Real};

use super::{QcoreError, QcoreResult};

/// Occupation label of one collective basis state.
///
/// `occ[k]` counts excitations in the k-th non-ground mode; the ground mode
/// holds the remaining `N - sum(occ)` atoms and is not stored. `photon` is
/// the cavity Fock index when the basis carries one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub occ: Vec<u32>,
    pub photon: Option<u32>,
}

impl Label {
    pub fn new(occ: Vec<u32>) -> Self {
        Self { occ, photon: None }
    }

    pub fn with_photon(occ: Vec<u32>, photon: u32) -> Self {
        Self { occ, photon: Some(photon) }
    }

    /// Total non-ground atomic excitation count.
    pub fn total_excitations(&self) -> u32 {
        self.occ.iter().sum()
    }
}

/// Ordered basis of collective occupation labels.
///
/// Labels are unique and `lookup` is a bijection onto `0..dimension`.
#[derive(Debug, Clone)]
pub struct LabeledBasis {
    modes: Vec<String>,
    atom_count: u64,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

impl PartialEq for LabeledBasis {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes
            && self.atom_count == other.atom_count
            && self.labels == other.labels
    }
}

impl LabeledBasis {
    /// Build a basis from an explicit label list.
    pub fn from_labels(
        modes: Vec<String>,
        atom_count: u64,
        labels: Vec<Label>,
    ) -> QcoreResult<Self> {
        if modes.is_empty() {
            return Err(QcoreError::EmptyModeList);
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(QcoreError::DuplicateMode(m.clone()));
            }
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            assert_eq!(l.occ.len(), modes.len(), "label arity must match mode count");
            if index.insert(l.clone(), i).is_some() {
                panic!("duplicate label {l:?} in basis");
            }
        }
        Ok(Self { modes, atom_count, labels, index })
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn atom_count(&self) -> u64 {
        self.atom_count
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    /// Index of a label; `None` if the label is not part of the basis.
    pub fn lookup(&self, label: &Label) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn mode_position(&self, mode: &str) -> QcoreResult<usize> {
        self.modes
            .iter()
            .position(|m| m == mode)
            .ok_or_else(|| QcoreError::UnknownMode(mode.to_string()))
    }

    /// Index of the state with a single excitation in `mode` (no photon, or
    /// photon 0 when the basis carries a Fock index).
    pub fn single_excitation_index(&self, mode: &str) -> QcoreResult<usize> {
        let k = self.mode_position(mode)?;
        let mut occ = vec![0; self.modes.len()];
        occ[k] = 1;
        let label = if self.has_photon_slot() {
            Label::with_photon(occ, 0)
        } else {
            Label::new(occ)
        };
        self.lookup(&label)
            .ok_or(QcoreError::BasisMismatch { expected: self.dimension(), got: 0 })
    }

    /// Index of the all-ground label.
    pub fn vacuum_index(&self) -> Option<usize> {
        let occ = vec![0; self.modes.len()];
        let label = if self.has_photon_slot() {
            Label::with_photon(occ, 0)
        } else {
            Label::new(occ)
        };
        self.lookup(&label)
    }

    pub fn has_photon_slot(&self) -> bool {
        self.labels.first().is_some_and(|l| l.photon.is_some())
    }

    /// Human-readable name for one basis state, e.g. `|N-1,1,0,0>_es a+` or
    /// `|0,1;ph1>`.
    pub fn label_name(&self, i: usize) -> String {
        let l = &self.labels[i];
        let occs: Vec<String> = l.occ.iter().map(|n| n.to_string()).collect();
        match l.photon {
            Some(p) => format!("|{};ph{}>", occs.join(","), p),
            None => format!("|{}>", occs.join(",")),
        }
    }
}

impl fmt::Display for LabeledBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "basis[{} states over modes {:?}, N = {}]",
            self.dimension(),
            self.modes,
            self.atom_count
        )
    }
}

/// Enumerate all occupation tuples over `modes` with total non-ground
/// excitation `<= max_excitations`, optionally crossed with cavity Fock
/// levels `0..=photon_cap`. Enumeration order is lexicographic on the tuple
/// (with the photon index as the trailing, fastest-varying slot).
pub fn build_collective_basis(
    modes: &[&str],
    atom_count: u64,
    max_excitations: u32,
    photon_cap: Option<u32>,
) -> QcoreResult<LabeledBasis> {
    if modes.is_empty() {
        return Err(QcoreError::EmptyModeList);
    }
    if u64::from(max_excitations) > atom_count {
        return Err(QcoreError::BadExcitationCap {
            max_excitations: i64::from(max_excitations),
            atom_count: atom_count as i64,
        });
    }
    let mut labels = Vec::new();
    let mut occ = vec![0u32; modes.len()];
    enumerate_rec(&mut labels, &mut occ, 0, max_excitations, photon_cap);
    LabeledBasis::from_labels(
        modes.iter().map(|m| m.to_string()).collect(),
        atom_count,
        labels,
    )
}

fn enumerate_rec(
    out: &mut Vec<Label>,
    occ: &mut Vec<u32>,
    mode: usize,
    budget: u32,
    photon_cap: Option<u32>,
) {
    if mode == occ.len() {
        match photon_cap {
            None => out.push(Label::new(occ.clone())),
            Some(cap) => {
                for p in 0..=cap {
                    out.push(Label::with_photon(occ.clone(), p));
                }
            }
        }
        return;
    }
    for n in 0..=budget {
        occ[mode] = n;
        enumerate_rec(out, occ, mode + 1, budget - n, photon_cap);
    }
    occ[mode] = 0;
}

/// State vector over a labeled basis (dimensionless complex amplitudes).
#[derive(Debug, Clone)]
pub struct StateVector<S: Real> {
    basis: Arc<LabeledBasis>,
    amplitudes: Array1<Cx<S>>,
}

impl<S: Real> StateVector<S> {
    pub fn new(basis: Arc<LabeledBasis>, amplitudes: Array1<Cx<S>>) -> QcoreResult<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(QcoreError::BasisMismatch {
                expected: basis.dimension(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    /// The basis state `|i>`.
    pub fn basis_state(basis: Arc<LabeledBasis>, i: usize) -> Self {
        let mut amplitudes = Array1::zeros(basis.dimension());
        amplitudes[i] = Cx::new(S::one(), S::zero());
        Self { basis, amplitudes }
    }

    pub fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &Array1<Cx<S>> {
        &self.amplitudes
    }

    pub fn norm(&self) -> S {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .fold(S::zero(), |acc, x| acc + x)
            .sqrt()
    }

    pub fn normalize(&mut self) -> QcoreResult<()> {
        let n = self.norm();
        if n <= S::zero() {
            return Err(QcoreError::ZeroNorm);
        }
        let inv = Cx::new(S::one() / n, S::zero());
        self.amplitudes.mapv_inplace(|a| a * inv);
        Ok(())
    }

    /// Population per basis label, `|a_i|^2`.
    pub fn populations(&self) -> Array1<S> {
        self.amplitudes.mapv(|a| a.norm_sqr())
    }

    pub fn overlap(&self, other: &StateVector<S>) -> Cx<S> {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .fold(Cx::new(S::zero(), S::zero()), |acc, x| acc + x)
    }
}
