use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsystemKind {
    TwoLevel,
    ThreeLevel,
    Bosonic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemSpec {
    kind: SubsystemKind,
    dim: usize,
    label: String,
}

impl SubsystemSpec {
    pub fn new(kind: SubsystemKind, dim: usize, label: impl Into<String>) -> Result<Self> {
        let ok = match kind {
            SubsystemKind::TwoLevel => dim == 2,
            SubsystemKind::ThreeLevel => dim == 3,
            SubsystemKind::Bosonic => dim >= 2,
        };
        if !ok {
            return Err(Error::invalid(format!(
                "{kind:?} subsystem cannot have dimension {dim}"
            )));
        }
        Ok(Self {
            kind,
            dim,
            label: label.into(),
        })
    }

    pub fn qubit(label: impl Into<String>) -> Self {
        Self {
            kind: SubsystemKind::TwoLevel,
            dim: 2,
            label: label.into(),
        }
    }

    pub fn qutrit(label: impl Into<String>) -> Self {
        Self {
            kind: SubsystemKind::ThreeLevel,
            dim: 3,
            label: label.into(),
        }
    }

    /// A bosonic mode truncated to Fock states `0..=n_ph`.
    pub fn mode(label: impl Into<String>, n_ph: usize) -> Result<Self> {
        Self::new(SubsystemKind::Bosonic, n_ph + 1, label)
    }

    pub fn kind(&self) -> SubsystemKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Ordered tensor product of subsystems.
///
/// Basis indices are row-major with subsystem 0 varying slowest, so the
/// occupation `[n_0, n_1, ..]` sits at `sum_i n_i * stride_i` with
/// `stride_i = prod_{j > i} dim_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeSpace {
    subsystems: Vec<SubsystemSpec>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl CompositeSpace {
    pub fn new(subsystems: Vec<SubsystemSpec>) -> Result<Self> {
        if subsystems.is_empty() {
            return Err(Error::invalid("composite space needs at least one subsystem"));
        }
        let mut strides = vec![1; subsystems.len()];
        for i in (0..subsystems.len() - 1).rev() {
            strides[i] = strides[i + 1] * subsystems[i + 1].dim;
        }
        let total_dim = strides[0] * subsystems[0].dim;
        Ok(Self {
            subsystems,
            strides,
            total_dim,
        })
    }

    pub fn subsystems(&self) -> &[SubsystemSpec] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn stride(&self, index: usize) -> usize {
        self.strides[index]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.subsystems.iter().position(|s| s.label == label)
    }

    pub fn index_of(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.subsystems.len() {
            return Err(Error::invalid(format!(
                "occupation has {} entries, space has {} subsystems",
                occupation.len(),
                self.subsystems.len()
            )));
        }
        let mut idx = 0;
        for ((&n, s), &stride) in occupation.iter().zip(&self.subsystems).zip(&self.strides) {
            if n >= s.dim {
                return Err(Error::invalid(format!(
                    "occupation {n} out of range for '{}' (dim {})",
                    s.label, s.dim
                )));
            }
            idx += n * stride;
        }
        Ok(idx)
    }

    pub fn occupation_of(&self, mut index: usize) -> Vec<usize> {
        assert!(index < self.total_dim);
        self.strides
            .iter()
            .map(|&stride| {
                let n = index / stride;
                index %= stride;
                n
            })
            .collect()
    }
}
