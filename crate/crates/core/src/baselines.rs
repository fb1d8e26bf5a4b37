//! High-gain comparison estimators built on signed fractional powers,
//! integrated with the same fixed-step RK4 as [`crate::ct`].
//!
//! * [`SignedPowerGradient`]: `dθ̂/dt = γ·Δ·⌈Y − Δθ̂⌋^α`, `α ∈ [0, 1)`.
//! * [`ExcitationPowerEstimator`]: `dθ̂/dt = γ·sign(Δ)·⌈Y − Δθ̂⌋^{|Δ|/(ς·Δ_max)}`, `ς > 1`,
//!   always started from `θ̂ = 0`.
//!
//! Relay-like right-hand sides are integrated as is; chattering around zero
//! error is left visible in the trajectories.

use crate::error::{Error, Result};
use crate::integrate::rk4_step;
use crate::lre::ScalarLre;
use crate::scalar::{sign, Scalar};

/// `|x|^p · sign(x)` with `sign(0) = 0`, so `signed_power(0, 0) = 0`.
pub fn signed_power<T: Scalar>(x: T, p: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x.abs().powf(p) * x.signum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedPowerGains<T> {
    pub gamma: T,
    pub alpha: T,
}

impl<T: Scalar> SignedPowerGains<T> {
    pub fn new(gamma: T, alpha: T) -> Result<Self> {
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::validation("gamma", format!("must be > 0, got {gamma}")));
        }
        if !(alpha >= T::zero() && alpha < T::one()) {
            return Err(Error::validation("alpha", format!("must lie in [0, 1), got {alpha}")));
        }
        Ok(Self { gamma, alpha })
    }

    /// Like [`Self::new`] but admits `alpha = 1`, where the update reduces to
    /// the plain gradient. Used to cross-check the two integrations.
    pub fn with_unit_alpha(gamma: T) -> Result<Self> {
        let mut g = Self::new(gamma, T::zero())?;
        g.alpha = T::one();
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMax<T> {
    /// Analytic bound supplied up front.
    Fixed(T),
    /// Running maximum of `|Δ|` over every evaluated point, never below `floor`.
    Running { floor: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationPowerGains<T> {
    pub gamma: T,
    pub varsigma: T,
    pub delta_max: DeltaMax<T>,
}

impl<T: Scalar> ExcitationPowerGains<T> {
    pub fn new(gamma: T, varsigma: T, delta_max: DeltaMax<T>) -> Result<Self> {
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::validation("gamma", format!("must be > 0, got {gamma}")));
        }
        if !(varsigma > T::one()) || !varsigma.is_finite() {
            return Err(Error::validation("varsigma", format!("must be > 1, got {varsigma}")));
        }
        match delta_max {
            DeltaMax::Fixed(m) | DeltaMax::Running { floor: m } if !(m > T::zero()) => {
                Err(Error::validation("delta_max", format!("must be > 0, got {m}")))
            }
            _ => Ok(Self { gamma, varsigma, delta_max }),
        }
    }
}

fn check_step<T: Scalar>(h: T) -> Result<()> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::validation("step", format!("must be > 0, got {h}")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SignedPowerGradient<T> {
    gains: SignedPowerGains<T>,
    h: T,
    steps: u64,
    theta_hat: T,
}

impl<T: Scalar> SignedPowerGradient<T> {
    pub fn new(gains: SignedPowerGains<T>, h: T, theta_hat0: T) -> Result<Self> {
        check_step(h)?;
        Ok(Self { gains, h, steps: 0, theta_hat: theta_hat0 })
    }

    pub fn time(&self) -> T {
        T::lit(self.steps as f64) * self.h
    }

    pub fn theta_hat(&self) -> T {
        self.theta_hat
    }

    pub fn rhs<L: ScalarLre<T>>(&self, lre: &L, t: T, theta_hat: T) -> T {
        let s = lre.sample(t);
        self.gains.gamma * s.delta * signed_power(s.y_meas - s.delta * theta_hat, self.gains.alpha)
    }

    pub fn step<L: ScalarLre<T>>(&mut self, lre: &L) {
        let t = self.time();
        self.theta_hat = rk4_step(t, self.theta_hat, self.h, |s, th| self.rhs(lre, s, th));
        self.steps += 1;
    }
}

#[derive(Debug, Clone)]
pub struct ExcitationPowerEstimator<T> {
    gains: ExcitationPowerGains<T>,
    h: T,
    steps: u64,
    theta_hat: T,
    delta_max: T,
}

impl<T: Scalar> ExcitationPowerEstimator<T> {
    pub fn new(gains: ExcitationPowerGains<T>, h: T) -> Result<Self> {
        check_step(h)?;
        let delta_max = match gains.delta_max {
            DeltaMax::Fixed(m) => m,
            DeltaMax::Running { floor } => floor,
        };
        Ok(Self { gains, h, steps: 0, theta_hat: T::zero(), delta_max })
    }

    pub fn time(&self) -> T {
        T::lit(self.steps as f64) * self.h
    }

    pub fn theta_hat(&self) -> T {
        self.theta_hat
    }

    pub fn delta_max(&self) -> T {
        self.delta_max
    }

    /// Exponent `|Δ|/(ς·Δ_max)` applied to the prediction error.
    pub fn exponent(&self, delta: T) -> T {
        delta.abs() / (self.gains.varsigma * self.delta_max)
    }

    pub fn rhs<L: ScalarLre<T>>(&self, lre: &L, t: T, theta_hat: T) -> T {
        let s = lre.sample(t);
        self.gains.gamma * sign(s.delta) * signed_power(s.y_meas - s.delta * theta_hat, self.exponent(s.delta))
    }

    pub fn step<L: ScalarLre<T>>(&mut self, lre: &L) {
        let t = self.time();
        if let DeltaMax::Running { .. } = self.gains.delta_max {
            let half = self.h / T::lit(2.0);
            for s in [t, t + half, t + self.h] {
                self.delta_max = self.delta_max.max(lre.sample(s).delta.abs());
            }
        }
        self.theta_hat = rk4_step(t, self.theta_hat, self.h, |s, th| self.rhs(lre, s, th));
        self.steps += 1;
    }
}
