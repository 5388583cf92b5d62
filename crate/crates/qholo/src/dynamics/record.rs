use std::io::{self, Write};
use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::qcore::LabeledBasis;
use crate::scalar::{Cx, Real};

/// Integrator options shared by the Schroedinger, Lindblad, and trajectory
/// engines.
#[derive(Debug, Clone)]
pub struct EvolveOptions<S: Real> {
    /// Fixed step; `None` selects `0.05 / max||H||`.
    pub dt: Option<S>,
    /// Approximate number of stored samples (the grid is decimated to this).
    pub target_samples: usize,
    /// Keep the full state (or density matrix) at every sample.
    pub store_states: bool,
    /// Renormalize after every step. Off by default; the drift is reported
    /// instead.
    pub renormalize: bool,
    /// Basis index whose amplitude phase is tracked and unwrapped.
    pub phase_ref: Option<usize>,
}

impl<S: Real> Default for EvolveOptions<S> {
    fn default() -> Self {
        Self {
            dt: None,
            target_samples: 1500,
            store_states: true,
            renormalize: false,
            phase_ref: None,
        }
    }
}

/// Time series produced by the evolution engines.
///
/// For pure-state runs `states` holds normalized-or-not state vectors and
/// `norms` the state norm; for density-matrix runs `dmats` and the trace.
/// Populations always sum to the squared norm (resp. trace).
#[derive(Debug, Clone)]
pub struct EvolutionRecord<S: Real> {
    pub basis: Arc<LabeledBasis>,
    pub times: Vec<S>,
    pub states: Option<Vec<Array1<Cx<S>>>>,
    pub dmats: Option<Vec<Array2<Cx<S>>>>,
    pub populations: Vec<Array1<S>>,
    pub norms: Vec<S>,
    pub relative_phase: Option<Vec<S>>,
    pub dark_leakage: Option<Vec<S>>,
    pub min_gap: Option<S>,
    /// Smallest eigenvalue seen across sampled density matrices
    /// (positivity monitor; pure-state runs leave this `None`).
    pub min_eigenvalue: Option<S>,
    pub warnings: Vec<String>,
    /// The actual step used.
    pub dt: S,
}

impl<S: Real> EvolutionRecord<S> {
    pub fn final_time(&self) -> S {
        *self.times.last().expect("record holds at least one sample")
    }

    pub fn final_state(&self) -> Option<&Array1<Cx<S>>> {
        self.states.as_ref().and_then(|s| s.last())
    }

    pub fn final_dmat(&self) -> Option<&Array2<Cx<S>>> {
        self.dmats.as_ref().and_then(|s| s.last())
    }

    pub fn final_population(&self, index: usize) -> S {
        self.populations.last().expect("non-empty")[index]
    }

    /// |norm(T) - norm(0)| / (T - t0), the reported conservation drift.
    pub fn norm_drift_per_us(&self) -> S {
        let span = self.final_time() - self.times[0];
        if span <= S::zero() {
            return S::zero();
        }
        (self.norms.last().expect("non-empty").abs() - self.norms[0].abs()).abs() / span
    }

    pub fn population_series(&self, index: usize) -> Vec<S> {
        self.populations.iter().map(|p| p[index]).collect()
    }

    /// CSV export: time, one population column per basis label, the norm
    /// (or trace), and the optional phase/leakage series. `.` decimal,
    /// LF endings, deterministic `%.12e` formatting.
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        write!(out, "time_us")?;
        for i in 0..self.basis.dimension() {
            write!(out, ",pop_{}", csv_label(&self.basis.label_name(i)))?;
        }
        write!(out, ",norm")?;
        if self.relative_phase.is_some() {
            write!(out, ",relative_phase_rad")?;
        }
        if self.dark_leakage.is_some() {
            write!(out, ",dark_leakage")?;
        }
        writeln!(out)?;
        for k in 0..self.times.len() {
            write!(out, "{}", fmt(self.times[k]))?;
            for i in 0..self.basis.dimension() {
                write!(out, ",{}", fmt(self.populations[k][i]))?;
            }
            write!(out, ",{}", fmt(self.norms[k]))?;
            if let Some(ph) = &self.relative_phase {
                write!(out, ",{}", fmt(ph[k]))?;
            }
            if let Some(lk) = &self.dark_leakage {
                write!(out, ",{}", fmt(lk[k]))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn fmt<S: Real>(x: S) -> String {
    format!("{:.12e}", x.to_f64().unwrap_or(f64::NAN))
}

fn csv_label(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, '|' | '>' | '<'))
        .map(|c| match c {
            ',' | ';' => '_',
            other => other,
        })
        .collect()
}

pub(crate) fn decimation_stride(n_steps: usize, target: usize) -> usize {
    (n_steps / target.max(1)).max(1)
}
