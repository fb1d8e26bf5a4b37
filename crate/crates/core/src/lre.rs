//! Synthetic linear regression equation (LRE) data streams.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signals::{ParameterProfile, SignalSpec};

/// One time-stamped sample of a scalar LRE `Y = Δ·θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarLreSample<T> {
    pub t: T,
    pub delta: T,
    pub y_meas: T,
}

/// One sample of a vector LRE `y = φᵀθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorLreSample<T> {
    pub t: T,
    pub phi: Vec<T>,
    pub y: T,
}

impl<T: Scalar> VectorLreSample<T> {
    pub fn zeros(t: T, q: usize) -> Self {
        Self { t, phi: vec![T::zero(); q], y: T::zero() }
    }
}

/// Builds `(Δ(t), Δ(t)·θ(t) + noise(t))` for a scalar profile.
pub fn make_scalar_sample<T: Scalar>(
    delta_spec: &SignalSpec<T>,
    profile: &ParameterProfile<T>,
    noise_spec: Option<&SignalSpec<T>>,
    t: T,
) -> Result<ScalarLreSample<T>> {
    if profile.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, actual: profile.dim() });
    }
    Ok(scalar_sample_unchecked(delta_spec, profile, noise_spec, t))
}

fn scalar_sample_unchecked<T: Scalar>(
    delta_spec: &SignalSpec<T>,
    profile: &ParameterProfile<T>,
    noise_spec: Option<&SignalSpec<T>>,
    t: T,
) -> ScalarLreSample<T> {
    let delta = delta_spec.eval(t);
    let clean = delta * profile.component(0).eval(t);
    let y_meas = match noise_spec {
        Some(n) => clean + n.eval(t),
        None => clean,
    };
    ScalarLreSample { t, delta, y_meas }
}

/// Builds `y = Σ φ_i(t)·θ_i(t)`.
pub fn make_vector_sample<T: Scalar>(
    phi_specs: &[SignalSpec<T>],
    profile: &ParameterProfile<T>,
    t: T,
) -> Result<VectorLreSample<T>> {
    if phi_specs.len() != profile.dim() {
        return Err(Error::DimensionMismatch { expected: profile.dim(), actual: phi_specs.len() });
    }
    let phi: Vec<T> = phi_specs.iter().map(|s| s.eval(t)).collect();
    let y = phi
        .iter()
        .zip(profile.components())
        .fold(T::zero(), |acc, (p, c)| acc + *p * c.eval(t));
    Ok(VectorLreSample { t, phi, y })
}

/// A scalar LRE that can be sampled at any instant.
pub trait ScalarLre<T> {
    fn sample(&self, t: T) -> ScalarLreSample<T>;
}

/// Excitation, parameter profile and optional measurement disturbance,
/// validated once so sampling cannot fail.
#[derive(Debug, Clone)]
pub struct ScalarLreSource<T> {
    delta: SignalSpec<T>,
    profile: ParameterProfile<T>,
    noise: Option<SignalSpec<T>>,
}

impl<T: Scalar> ScalarLreSource<T> {
    pub fn new(
        delta: SignalSpec<T>,
        profile: ParameterProfile<T>,
        noise: Option<SignalSpec<T>>,
    ) -> Result<Self> {
        if profile.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, actual: profile.dim() });
        }
        Ok(Self { delta, profile, noise })
    }

    pub fn delta_spec(&self) -> &SignalSpec<T> {
        &self.delta
    }

    pub fn profile(&self) -> &ParameterProfile<T> {
        &self.profile
    }

    pub fn theta(&self, t: T) -> T {
        self.profile.component(0).eval(t)
    }
}

impl<T: Scalar> ScalarLre<T> for ScalarLreSource<T> {
    fn sample(&self, t: T) -> ScalarLreSample<T> {
        scalar_sample_unchecked(&self.delta, &self.profile, self.noise.as_ref(), t)
    }
}
