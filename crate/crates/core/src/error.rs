use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the geometry, control and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    /// The logarithm (and therefore the kinematic control law) is undefined:
    /// a rotation by π on SO(3), or the antipode of the identity on S³.
    #[error("configuration on the cut locus of the logarithm ({detail})")]
    CutLocus { detail: String },

    #[error("matrix is not skew-symmetric: |S + S^T| = {asymmetry:e}")]
    NotSkew { asymmetry: f64 },

    #[error("matrix is not a rotation: |R^T R - I| = {orthogonality:e}, det = {det}")]
    NotRotation { orthogonality: f64, det: f64 },

    #[error("quaternion is not unit-norm: |q| = {norm}")]
    NotUnitQuaternion { norm: f64 },

    #[error("invalid inertia tensor: {0}")]
    InvalidInertia(String),

    #[error("invalid gain `{name}` = {value}: must be finite and > 0")]
    InvalidGain { name: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn cut_locus(detail: impl Into<String>) -> Self {
        Error::CutLocus { detail: detail.into() }
    }

    pub fn is_cut_locus(&self) -> bool {
        matches!(self, Error::CutLocus { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
