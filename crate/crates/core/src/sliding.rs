//! Tangent-bundle group structure and the sliding subgroup.
//!
//! A kinematic control law `ν_u : G → 𝔤` with `ν_u(e) = 0` and
//! `ν_u(g⁻¹) = −ν_u(g)` turns `TG ≅ G × 𝔤` into a Lie group under
//!
//! ```text
//! (g₁, ν₁) ⋆ (g₂, ν₂) = (g₁g₂, ν₁ + ν₂ + λν_u(g₁) + λν_u(g₂) − λν_u(g₁g₂))
//! ```
//!
//! with identity `(e, 0)` and inverse `(g⁻¹, −ν)`. The zero set of the sliding
//! variable `s(g, ν) = ν + λν_u(g)` is a subgroup `H` of that group. Here
//! `ν_u` is the logarithm of the chart ([`AttitudeGroup::kinematic_law`]).

use crate::error::{Error, Result};
use crate::group::AttitudeGroup;
use crate::lie::{skew_vee, AlgebraVector, RotationMatrix, UnitQuaternion, TRACE_EPS};

/// Default tolerance (rad/s) on `‖s‖` for sliding-subgroup membership.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-6;

/// The positive gain λ (1/s) parametrising both `⋆` and `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlidingGain(f64);

impl SlidingGain {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidGain {
                name: "lambda",
                value: lambda,
            });
        }
        Ok(SlidingGain(lambda))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// A state `h = (g, ν)` in the tangent bundle `TG ≅ G × ℝ³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BundleElement<G> {
    pub g: G,
    pub nu: AlgebraVector,
}

impl<G: AttitudeGroup> BundleElement<G> {
    pub fn new(g: G, nu: AlgebraVector) -> Self {
        BundleElement { g, nu }
    }

    /// `f = (e, 0)`.
    pub fn identity() -> Self {
        BundleElement {
            g: G::identity(),
            nu: AlgebraVector::zeros(),
        }
    }

    /// The element of `H` above `g`: `(g, −λν_u(g))`.
    pub fn on_sliding_subgroup(g: G, lambda: SlidingGain) -> Result<Self> {
        Ok(BundleElement {
            g,
            nu: -lambda.value() * g.kinematic_law()?,
        })
    }

    /// Largest of the configuration and velocity discrepancies.
    pub fn distance(&self, other: &Self) -> f64 {
        self.g.distance(&other.g).max((self.nu - other.nu).norm())
    }
}

/// `ν_u(g)`, the logarithmic kinematic control law.
pub fn kinematic_law<G: AttitudeGroup>(g: &G) -> Result<AlgebraVector> {
    g.kinematic_law()
}

/// The group operation `h₁ ⋆ h₂`.
pub fn bundle_star<G: AttitudeGroup>(
    h1: &BundleElement<G>,
    h2: &BundleElement<G>,
    lambda: SlidingGain,
) -> Result<BundleElement<G>> {
    let g = h1.g.compose(&h2.g);
    let lam = lambda.value();
    let correction = h1.g.kinematic_law()? + h2.g.kinematic_law()? - g.kinematic_law()?;
    Ok(BundleElement {
        g,
        nu: h1.nu + h2.nu + lam * correction,
    })
}

/// `h⁻¹ = (g⁻¹, −ν)`.
pub fn bundle_inverse<G: AttitudeGroup>(h: &BundleElement<G>) -> BundleElement<G> {
    BundleElement {
        g: h.g.inverse(),
        nu: -h.nu,
    }
}

/// The sliding variable `s(h) = ν + λν_u(g)`.
pub fn sliding_var<G: AttitudeGroup>(h: &BundleElement<G>, lambda: SlidingGain) -> Result<AlgebraVector> {
    Ok(h.nu + lambda.value() * h.g.kinematic_law()?)
}

/// Whether `‖s(h)‖ ≤ tol`.
pub fn on_sliding_subgroup<G: AttitudeGroup>(h: &BundleElement<G>, lambda: SlidingGain, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("membership tolerance must be > 0, got {tol}")));
    }
    Ok(sliding_var(h, lambda)?.norm() <= tol)
}

/// `V₁(R) = 2 − √(1 + tr R)`.
pub fn morse_v1(r: &RotationMatrix) -> f64 {
    2.0 - (1.0 + r.trace()).max(0.0).sqrt()
}

/// `V₂(q) = √(1 − q0)`.
pub fn morse_v2(q: &UnitQuaternion) -> f64 {
    (1.0 - q.scalar()).max(0.0).sqrt()
}

/// `Ψ(R) = ½ tr(I − R)`, the attitude error used for reporting.
pub fn attitude_error(r: &RotationMatrix) -> f64 {
    0.5 * (3.0 - r.trace())
}

/// `ψ(R) = 1 / (2√(1 + tr R))`.
pub fn psi(r: &RotationMatrix) -> Result<f64> {
    let arg = 1.0 + r.trace();
    if !(arg > TRACE_EPS) {
        return Err(Error::cut_locus(format!("psi undefined at tr(R) = {}", r.trace())));
    }
    Ok(0.5 / arg.sqrt())
}

/// `ψ(R)(R − Rᵀ)^∨`, the body-frame gradient of V₁: `V̇₁ = ⟨this, Ω⟩` along `Ṙ = RΩ^∧`.
pub fn morse_v1_gradient(r: &RotationMatrix) -> Result<AlgebraVector> {
    Ok(psi(r)? * skew_vee(r.matrix()))
}

/// `y₁(R) = φ / (4ψ(R) sin φ)`; only meaningful away from `φ = 0`.
pub fn decay_rate_v1(r: &RotationMatrix) -> Result<f64> {
    let phi = r.angle();
    Ok(phi / (4.0 * psi(r)? * phi.sin()))
}

/// `y₂(q) = arccos(q0) √(1 + q0) / (4√(1 − q0))`.
pub fn decay_rate_v2(q: &UnitQuaternion) -> f64 {
    let q0 = q.scalar();
    q0.acos() * (1.0 + q0).sqrt() / (4.0 * (1.0 - q0).sqrt())
}
