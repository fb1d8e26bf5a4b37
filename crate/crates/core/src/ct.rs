//! Continuous-time gradient estimator with finite-convergence-time (FCT)
//! reconstruction and its alertness-preserving sliding-window variant.
//!
//! `θ̂` follows `dθ̂/dt = γΔ(Y − Δθ̂)` and is advanced with RK4. The auxiliary
//! weights are never integrated as ODEs: the excitation integral
//! `I(t) = ∫₀ᵗ Δ²` is accumulated with Simpson's rule and
//!
//! ```text
//! w(t)   = exp(−γ·I(t))
//! w_D(t) = exp(−γ·(I(t) − I(t − T_D)))
//! ```
//!
//! For constant `θ` and noiseless data the error obeys `θ̃(t) = w(t)·θ̃(0)`
//! and `θ̃(t) = w_D(t)·θ̃(t − T_D)`, which rearrange into the FCT estimates
//! returned by [`CtEstimator::outputs`].

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::integrate::{rk4_step, simpson};
use crate::lre::ScalarLre;
use crate::scalar::Scalar;

/// Saturates `w` at `threshold`: returns `threshold` when `w ≥ threshold`.
pub fn clip<T: Scalar>(w: T, threshold: T) -> T {
    if w >= threshold {
        threshold
    } else {
        w
    }
}

/// `(θ̂ − w_c·θ_ref) / (1 − w_c)`.
pub fn fct_reconstruct<T: Scalar>(theta_hat: T, theta_ref: T, w_c: T) -> T {
    (theta_hat - w_c * theta_ref) / (T::one() - w_c)
}

/// Excitation energy needed for `w` to fall to `1 − μ`: `−ln(1 − μ)/γ`.
pub fn excitation_threshold<T: Scalar>(gamma: T, mu: T) -> T {
    -(T::one() - mu).ln() / gamma
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtGains<T> {
    pub gamma: T,
    pub mu: T,
    /// Window length `T_D` in seconds; only the alertness-preserving outputs need it.
    pub t_window: Option<T>,
}

impl<T: Scalar> CtGains<T> {
    pub fn new(gamma: T, mu: T) -> Result<Self> {
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::validation("gamma", format!("must be > 0, got {gamma}")));
        }
        if !(mu > T::zero() && mu < T::one()) {
            return Err(Error::validation("mu", format!("must lie in (0, 1), got {mu}")));
        }
        Ok(Self { gamma, mu, t_window: None })
    }

    pub fn with_window(mut self, t_window: T) -> Result<Self> {
        if !(t_window > T::zero()) || !t_window.is_finite() {
            return Err(Error::validation("t_window", format!("must be > 0, got {t_window}")));
        }
        self.t_window = Some(t_window);
        Ok(self)
    }
}

/// Number of whole steps of length `h` in `t_window`, or an error when the
/// window is not an integer multiple of the step.
pub fn window_steps<T: Scalar>(t_window: T, h: T) -> Result<usize> {
    let ratio = t_window / h;
    let n = ratio.round();
    if n < T::one() || (ratio - n).abs() > T::lit(1e-6) * n.max(T::one()) {
        return Err(Error::validation(
            "t_window",
            format!("{t_window} is not a positive integer multiple of the step {h}"),
        ));
    }
    n.to_usize()
        .ok_or_else(|| Error::validation("t_window", format!("window of {n} steps is too long")))
}

/// Snapshot of every estimate and diagnostic at the current time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtOutputs<T> {
    pub t: T,
    pub theta_grad: T,
    pub theta_fct: T,
    pub w: T,
    pub w_c: T,
    pub ie_classic_met: bool,
    pub window: Option<WindowOutputs<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowOutputs<T> {
    pub theta_fct_d: T,
    pub w_d: T,
    pub w_d_c: T,
    pub ie_window_met: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IeStatus {
    pub classic: bool,
    pub windowed: Option<bool>,
}

// Delayed copies of (I, θ̂); front is the value at t − T_D.
#[derive(Debug, Clone)]
struct DelayLine<T> {
    len: usize,
    ring: VecDeque<(T, T)>,
}

impl<T: Scalar> DelayLine<T> {
    fn new(steps: usize, theta_hat0: T) -> Self {
        // pre-history: no excitation before t = 0, estimate held at θ̂(0)
        let ring = std::iter::repeat_n((T::zero(), theta_hat0), steps + 1).collect();
        Self { len: steps + 1, ring }
    }

    fn push(&mut self, i_acc: T, theta_hat: T) {
        if self.ring.len() == self.len {
            self.ring.pop_front();
        }
        self.ring.push_back((i_acc, theta_hat));
    }

    fn oldest(&self) -> (T, T) {
        self.ring[0]
    }
}

/// Fixed-step CT estimator state: `θ̂`, `θ̂(0)`, the excitation integral and
/// the delay line feeding the windowed outputs.
#[derive(Debug, Clone)]
pub struct CtEstimator<T> {
    gains: CtGains<T>,
    h: T,
    steps: u64,
    theta_hat: T,
    theta_hat0: T,
    i_acc: T,
    delay: Option<DelayLine<T>>,
}

impl<T: Scalar> CtEstimator<T> {
    pub fn new(gains: CtGains<T>, h: T, theta_hat0: T) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::validation("step", format!("must be > 0, got {h}")));
        }
        let delay = match gains.t_window {
            Some(tw) => Some(DelayLine::new(window_steps(tw, h)?, theta_hat0)),
            None => None,
        };
        Ok(Self { gains, h, steps: 0, theta_hat: theta_hat0, theta_hat0, i_acc: T::zero(), delay })
    }

    pub fn gains(&self) -> &CtGains<T> {
        &self.gains
    }

    pub fn time(&self) -> T {
        T::lit(self.steps as f64) * self.h
    }

    pub fn theta_hat(&self) -> T {
        self.theta_hat
    }

    pub fn theta_hat0(&self) -> T {
        self.theta_hat0
    }

    /// Accumulated `∫₀ᵗ Δ²`.
    pub fn excitation(&self) -> T {
        self.i_acc
    }

    /// Accumulated excitation over the trailing window, if one is configured.
    pub fn window_excitation(&self) -> Option<T> {
        self.delay.as_ref().map(|d| self.i_acc - d.oldest().0)
    }

    /// Advances the state by one step of length `h`.
    pub fn step<L: ScalarLre<T>>(&mut self, lre: &L) {
        let t = self.time();
        let gamma = self.gains.gamma;
        self.theta_hat = rk4_step(t, self.theta_hat, self.h, |s, th| {
            let smp = lre.sample(s);
            gamma * smp.delta * (smp.y_meas - smp.delta * th)
        });
        self.i_acc = self.i_acc
            + simpson(t, self.h, |s| {
                let d = lre.sample(s).delta;
                d * d
            });
        self.steps += 1;
        if let Some(delay) = self.delay.as_mut() {
            delay.push(self.i_acc, self.theta_hat);
        }
    }

    /// `(w, w_D)`; `w_D` is `None` without a window.
    pub fn w_values(&self) -> (T, Option<T>) {
        let gamma = self.gains.gamma;
        let w = (-gamma * self.i_acc).exp();
        (w, self.window_excitation().map(|e| (-gamma * e).exp()))
    }

    pub fn ie_check(&self) -> IeStatus {
        let threshold = excitation_threshold(self.gains.gamma, self.gains.mu);
        IeStatus {
            classic: self.i_acc >= threshold,
            windowed: self.window_excitation().map(|e| e >= threshold),
        }
    }

    pub fn outputs(&self) -> CtOutputs<T> {
        let mu = self.gains.mu;
        let (w, w_d) = self.w_values();
        let ie = self.ie_check();
        let w_c = clip(w, mu);
        let window = match (self.delay.as_ref(), w_d, ie.windowed) {
            (Some(delay), Some(w_d), Some(ie_window_met)) => {
                let w_d_c = clip(w_d, mu);
                Some(WindowOutputs {
                    theta_fct_d: fct_reconstruct(self.theta_hat, delay.oldest().1, w_d_c),
                    w_d,
                    w_d_c,
                    ie_window_met,
                })
            }
            _ => None,
        };
        CtOutputs {
            t: self.time(),
            theta_grad: self.theta_hat,
            theta_fct: fct_reconstruct(self.theta_hat, self.theta_hat0, w_c),
            w,
            w_c,
            ie_classic_met: ie.classic,
            window,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lre::ScalarLreSource;
    use crate::signals::{ParameterProfile, SignalSpec};
    use std::f64::consts::PI;

    fn source(delta: SignalSpec<f64>, theta: f64) -> ScalarLreSource<f64> {
        ScalarLreSource::new(delta, ParameterProfile::constant(&[theta]), None).unwrap()
    }

    fn run(est: &mut CtEstimator<f64>, lre: &ScalarLreSource<f64>, steps: usize) {
        for _ in 0..steps {
            est.step(lre);
        }
    }

    #[test]
    fn clip_examples() {
        assert_eq!(clip(0.99, 0.98), 0.98);
        assert_eq!(clip(0.5, 0.98), 0.5);
        assert_eq!(clip(0.98, 0.98), 0.98);
    }

    #[test]
    fn reconstruct_examples() {
        assert_eq!(fct_reconstruct(5.0, 123.0, 0.0), 5.0);
        assert_eq!(fct_reconstruct(10.0, 10.0, 0.5), 10.0);
    }

    #[test]
    fn threshold_value() {
        assert!((excitation_threshold(2.0f64, 0.98) - 1.956_011_502_714_073).abs() < 1e-12);
    }

    #[test]
    fn gains_validation() {
        assert!(CtGains::new(0.0, 0.5).is_err());
        assert!(CtGains::new(1.0, 1.0).is_err());
        assert!(CtGains::new(1.0, 0.0).is_err());
        assert!(CtGains::new(1.0, 1.2).is_err());
        let g = CtGains::new(2.0, 0.98).unwrap();
        assert!(g.with_window(-0.1).is_err());
        assert!(CtEstimator::new(g.with_window(0.25).unwrap(), 0.1, 0.0).is_err());
        assert!(CtEstimator::new(g.with_window(0.2).unwrap(), 1e-3, 0.0).is_ok());
        assert!(CtEstimator::new(g, 0.0, 0.0).is_err());
    }

    #[test]
    fn no_excitation_no_update() {
        let gains = CtGains::new(2.0, 0.98).unwrap().with_window(0.2).unwrap();
        let mut est = CtEstimator::new(gains, 1e-3, 3.0).unwrap();
        let lre = source(SignalSpec::zero(), 10.0);
        for _ in 0..2000 {
            est.step(&lre);
            let out = est.outputs();
            assert_eq!(out.theta_grad, 3.0);
            assert_eq!(out.w, 1.0);
            assert_eq!(est.excitation(), 0.0);
            let ie = est.ie_check();
            assert!(!ie.classic && ie.windowed == Some(false));
        }
    }

    #[test]
    fn initial_weights_are_one() {
        let gains = CtGains::new(2.0, 0.98).unwrap().with_window(0.2).unwrap();
        let est = CtEstimator::new(gains, 1e-3, 0.0).unwrap();
        assert_eq!(est.w_values(), (1.0, Some(1.0)));
    }

    #[test]
    fn unit_excitation_closed_form() {
        // dθ̂/dt = 10 − θ̂ ⇒ θ̂(t) = 10(1 − e^{−t})
        let mut est = CtEstimator::new(CtGains::new(1.0, 0.98).unwrap(), 1e-3, 0.0).unwrap();
        let lre = source(SignalSpec::constant(1.0), 10.0);
        run(&mut est, &lre, 1000);
        let exact = 10.0 * (1.0 - (-1.0f64).exp());
        assert!((est.theta_hat() - exact).abs() <= 1e-8);
        assert!((est.theta_hat() - 6.321_206).abs() < 1e-6);
        // w(1) = e^{-1} < μ, so the reconstruction is exact
        let out = est.outputs();
        assert!((out.w - (-1.0f64).exp()).abs() < 1e-12);
        assert!((out.theta_fct - 10.0).abs() <= 1e-7);
    }

    #[test]
    fn weight_closed_form() {
        let gains = CtGains::new(2.0, 0.98).unwrap().with_window(0.2).unwrap();
        let mut est = CtEstimator::new(gains, 1e-3, 0.0).unwrap();
        let lre = source(SignalSpec::constant(1.0), 10.0);
        run(&mut est, &lre, 1000);
        let (w, w_d) = est.w_values();
        assert!((w - (-2.0f64).exp()).abs() <= 1e-10);
        assert!((w_d.unwrap() - (-0.4f64).exp()).abs() <= 1e-10);
        assert!((w_d.unwrap() - 0.670_320_0).abs() < 1e-7);
    }

    #[test]
    fn sine_weight_after_half_period() {
        // ∫₀¹⁰ sin²(πs/10) ds = 5
        let mut est = CtEstimator::new(CtGains::new(2.0, 0.98).unwrap(), 1e-3, 0.0).unwrap();
        let lre = source(SignalSpec::sine(1.0, PI / 10.0, 0.0), 10.0);
        run(&mut est, &lre, 10_000);
        let (w, _) = est.w_values();
        assert!((w / (-10.0f64).exp() - 1.0).abs() < 1e-9);
    }

    fn sine_energy(t: f64) -> f64 {
        t / 2.0 - 10.0 / (4.0 * PI) * (PI * t / 5.0).sin()
    }

    fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn classic_ie_first_met() {
        let threshold = -0.5 * 0.02f64.ln();
        let t_star = bisect(0.0, 10.0, |t| sine_energy(t) - threshold);
        assert!((t_star - 4.4506).abs() < 1e-4);
        let h = 1e-3;
        let mut est = CtEstimator::new(CtGains::new(2.0, 0.98).unwrap(), h, 0.0).unwrap();
        let lre = source(SignalSpec::sine(1.0, PI / 10.0, 0.0), 10.0);
        let mut first = None;
        for _ in 0..10_000 {
            est.step(&lre);
            if first.is_none() && est.ie_check().classic {
                first = Some(est.time());
            }
        }
        assert!((first.unwrap() - t_star).abs() <= h);
    }

    #[test]
    fn keyrel_and_monotone_weight() {
        for delta in [
            SignalSpec::sine(1.0, PI / 10.0, 0.0),
            SignalSpec::inverse_sqrt(1.0).unwrap(),
            SignalSpec::sum(vec![SignalSpec::sine(2.0, 1.3, 0.4), SignalSpec::constant(0.2)]),
        ] {
            let mut est = CtEstimator::new(CtGains::new(2.0, 0.98).unwrap(), 1e-3, -4.0).unwrap();
            let lre = source(delta, 7.5);
            let mut prev_w = 1.0;
            for _ in 0..5000 {
                est.step(&lre);
                let (w, _) = est.w_values();
                assert!(w <= prev_w);
                prev_w = w;
                let lhs = (1.0 - w) * 7.5;
                let rhs = est.theta_hat() - w * est.theta_hat0();
                assert!((lhs - rhs).abs() <= 1e-6);
                if w < 0.98 {
                    assert!((est.outputs().theta_fct - 7.5).abs() <= 1e-5);
                }
            }
        }
    }

    #[test]
    fn windowed_exactness_and_bound() {
        let gains = CtGains::new(2.0, 0.98).unwrap().with_window(0.2).unwrap();
        let mut est = CtEstimator::new(gains, 1e-3, 0.0).unwrap();
        let lre = source(SignalSpec::sine(1.0, PI / 10.0, 0.0), 12.0);
        let bound = (-2.0f64 * 0.2).exp();
        for _ in 0..20_000 {
            est.step(&lre);
            let out = est.outputs();
            let win = out.window.unwrap();
            assert!(win.w_d >= bound - 1e-12 && win.w_d <= 1.0);
            assert!(win.w_d_c <= 0.98 && out.w_c <= 0.98);
            if win.w_d < 0.98 {
                assert!((win.theta_fct_d - 12.0).abs() <= 1e-5, "t = {}", out.t);
            }
        }
    }

    #[test]
    fn alertness_recovers_after_quiet_window() {
        // excitation only on [0, 1), then silence
        let delta = SignalSpec::sum(vec![SignalSpec::constant(1.0)]);
        let gains = CtGains::new(2.0, 0.98).unwrap().with_window(0.2).unwrap();
        let mut est = CtEstimator::new(gains, 1e-3, 0.0).unwrap();
        let on = source(delta, 5.0);
        let off = source(SignalSpec::zero(), 5.0);
        run(&mut est, &on, 1000);
        assert!(est.w_values().1.unwrap() < 0.7);
        run(&mut est, &off, 199);
        assert!(est.w_values().1.unwrap() < 1.0);
        est.step(&off);
        assert_eq!(est.w_values().1, Some(1.0));
    }

    #[test]
    fn fourth_order_convergence() {
        let err_at = |h: f64| {
            let mut est = CtEstimator::new(CtGains::new(1.0, 0.98).unwrap(), h, 0.0).unwrap();
            let lre = source(SignalSpec::constant(1.0), 10.0);
            let n = (1.0 / h).round() as usize;
            let mut max_err = 0.0f64;
            for _ in 0..n {
                est.step(&lre);
                let exact = 10.0 * (1.0 - (-est.time()).exp());
                max_err = max_err.max((est.theta_hat() - exact).abs());
            }
            max_err
        };
        // coarse steps keep the error well above rounding noise
        let ratio = err_at(0.1) / err_at(0.05);
        assert!((12.0..=20.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn f32_estimator_runs() {
        let gains = CtGains::<f32>::new(1.0, 0.98).unwrap();
        let mut est = CtEstimator::new(gains, 1e-2, 0.0).unwrap();
        let lre = ScalarLreSource::new(SignalSpec::constant(1.0f32), ParameterProfile::constant(&[10.0f32]), None)
            .unwrap();
        for _ in 0..100 {
            est.step(&lre);
        }
        assert!((est.outputs().theta_fct - 10.0).abs() < 1e-3);
    }
}
