//! Discrete-time gradient estimator, its dynamic extension `w(k)`, the FCT
//! reconstruction and the alertness-preserving window-ratio variant.
//!
//! Update, with the measurement paired to `Δ(k)` arriving at `k + 1`:
//!
//! ```text
//! θ̂(k+1) = θ̂(k) + Δ(k)/(c + Δ²(k)) · [Y(k+1) − Δ(k)θ̂(k)]
//! w(k+1) = c/(c + Δ²(k)) · w(k),   w(0) = 1
//! ```
//!
//! so `w(k) = ∏_{j<k} c/(c + Δ²(j))` and, for constant `θ`,
//! `θ̃(k) = w(k)·θ̃(0) = [w(k)/w(k−d)]·θ̃(k−d)`.
//!
//! `w` decays geometrically under persistent excitation and leaves the
//! floating point range after a few thousand samples, so it is kept as a
//! [`ScaledWeight`] and only converted to a plain scalar for reporting.

use std::collections::VecDeque;

use crate::ct::{clip, fct_reconstruct};
use crate::error::{Error, Result};
use crate::lre::ScalarLreSample;
use crate::scalar::Scalar;

const CHUNK_BITS: i32 = 64;

/// Positive number stored as `mantissa · 2^(−64·chunks)` with the mantissa
/// kept in `[2^-64, 1]`. Rescaling multiplies by powers of two, so products
/// and ratios carry the same rounding as unbounded-exponent arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledWeight<T> {
    mantissa: T,
    chunks: i32,
}

impl<T: Scalar> ScaledWeight<T> {
    pub fn one() -> Self {
        Self { mantissa: T::one(), chunks: 0 }
    }

    fn tiny() -> T {
        T::lit(2f64.powi(-CHUNK_BITS))
    }

    fn huge() -> T {
        T::lit(2f64.powi(CHUNK_BITS))
    }

    /// Multiplies by a factor in `(0, 1]`.
    pub fn scale(self, factor: T) -> Self {
        let mut mantissa = self.mantissa * factor;
        let mut chunks = self.chunks;
        while mantissa > T::zero() && mantissa < Self::tiny() {
            mantissa = mantissa * Self::huge();
            chunks += 1;
        }
        Self { mantissa, chunks }
    }

    /// `(mantissa, chunks)` with value `mantissa · 2^(−64·chunks)`.
    pub fn parts(self) -> (T, i32) {
        (self.mantissa, self.chunks)
    }

    /// Plain value; underflows to zero once below the scalar's range.
    pub fn value(self) -> T {
        self.mantissa * Self::tiny().powi(self.chunks)
    }

    /// `self / other`.
    pub fn ratio(self, other: Self) -> T {
        let shift = self.chunks - other.chunks;
        let q = self.mantissa / other.mantissa;
        if shift >= 0 {
            q * Self::tiny().powi(shift)
        } else {
            q * Self::huge().powi(-shift)
        }
    }

    /// Natural logarithm, valid far outside the plain scalar range.
    pub fn ln(self) -> T {
        self.mantissa.ln() - T::lit(f64::from(CHUNK_BITS)) * T::LN_2() * T::lit(f64::from(self.chunks))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtGains<T> {
    pub c: T,
    pub rho: T,
    /// Window length in samples for the alertness-preserving estimate.
    pub d: usize,
    /// Sampling time in seconds.
    pub ts: T,
}

impl<T: Scalar> DtGains<T> {
    pub fn new(c: T, rho: T, d: usize, ts: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::validation("c", format!("must be > 0, got {c}")));
        }
        if !(rho > T::zero() && rho < T::one()) {
            return Err(Error::validation("rho", format!("must lie in (0, 1), got {rho}")));
        }
        if d < 1 {
            return Err(Error::validation("d", "must be >= 1"));
        }
        if !(ts > T::zero()) || !ts.is_finite() {
            return Err(Error::validation("ts", format!("must be > 0, got {ts}")));
        }
        Ok(Self { c, rho, d, ts })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtOutputs<T> {
    pub k: usize,
    pub theta_grad: T,
    pub theta_fct: T,
    pub theta_fct_d: T,
    pub w: T,
    pub w_c: T,
    pub w_d: T,
    pub w_d_c: T,
    pub ie_met: bool,
}

#[derive(Debug, Clone)]
pub struct DtEstimator<T> {
    gains: DtGains<T>,
    k: usize,
    theta_hat: T,
    theta_hat0: T,
    w: ScaledWeight<T>,
    // (w, θ̂) at k−d ..= k, front is k−d
    history: VecDeque<(ScaledWeight<T>, T)>,
}

impl<T: Scalar> DtEstimator<T> {
    pub fn new(gains: DtGains<T>, theta_hat0: T) -> Self {
        // pre-history: w(j) = 1 and θ̂(j) = θ̂(0) for j ≤ 0
        let history =
            std::iter::repeat_n((ScaledWeight::one(), theta_hat0), gains.d + 1).collect();
        Self { gains, k: 0, theta_hat: theta_hat0, theta_hat0, w: ScaledWeight::one(), history }
    }

    pub fn gains(&self) -> &DtGains<T> {
        &self.gains
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn time(&self) -> T {
        T::from_count(self.k) * self.gains.ts
    }

    pub fn theta_hat(&self) -> T {
        self.theta_hat
    }

    pub fn theta_hat0(&self) -> T {
        self.theta_hat0
    }

    /// `θ̂(k − d)`.
    pub fn delayed_theta_hat(&self) -> T {
        self.history[0].1
    }

    pub fn weight(&self) -> ScaledWeight<T> {
        self.w
    }

    pub fn w(&self) -> T {
        self.w.value()
    }

    /// One update with regressor `Δ(k)` and its paired measurement `Y(k+1)`.
    pub fn step(&mut self, delta: T, y_next: T) {
        let c = self.gains.c;
        let denom = c + delta * delta;
        self.theta_hat = self.theta_hat + delta / denom * (y_next - delta * self.theta_hat);
        self.w = self.w.scale(c / denom);
        self.k += 1;
        self.history.pop_front();
        self.history.push_back((self.w, self.theta_hat));
    }

    /// Steps with the sample generated at index `k`; its `y_meas` is the
    /// measurement paired with its `delta`.
    pub fn step_sample(&mut self, sample: &ScalarLreSample<T>) {
        self.step(sample.delta, sample.y_meas);
    }

    /// `(θ̂(k) − w_c·θ̂(0)) / (1 − w_c)` with `w_c = clip(w(k), ρ)`.
    pub fn fct(&self) -> T {
        fct_reconstruct(self.theta_hat, self.theta_hat0, clip(self.w(), self.gains.rho))
    }

    /// `w(k)/w(k−d)`, the product of the last `d` contraction factors.
    pub fn ap_ratio(&self) -> T {
        self.w.ratio(self.history[0].0)
    }

    /// `(θ̂(k) − w^d_c·θ̂(k−d)) / (1 − w^d_c)` with `w^d_c = clip(w(k)/w(k−d), ρ)`.
    pub fn fct_ap(&self) -> T {
        let w_d_c = clip(self.ap_ratio(), self.gains.rho);
        fct_reconstruct(self.theta_hat, self.delayed_theta_hat(), w_d_c)
    }

    /// Whether the running product has fallen below `ρ`.
    pub fn ie_check(&self) -> bool {
        self.w() < self.gains.rho
    }

    pub fn outputs(&self) -> DtOutputs<T> {
        let rho = self.gains.rho;
        let w = self.w();
        let w_d = self.ap_ratio();
        DtOutputs {
            k: self.k,
            theta_grad: self.theta_hat,
            theta_fct: self.fct(),
            theta_fct_d: self.fct_ap(),
            w,
            w_c: clip(w, rho),
            w_d,
            w_d_c: clip(w_d, rho),
            ie_met: self.ie_check(),
        }
    }
}
