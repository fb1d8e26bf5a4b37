//! Analytic signal specs and piecewise parameter profiles.
//!
//! Everything here is evaluable at arbitrary real time instants, so the
//! continuous-time integrators can sample mid-step stage points without
//! interpolating a pre-sampled array.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A scalar time function used for excitations and additive disturbances.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec<T> {
    kind: SignalKind<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignalKind<T> {
    Zero,
    Constant(T),
    /// `amplitude · sin(omega·t + phase)`
    Sine { amplitude: T, omega: T, phase: T },
    /// `1 / sqrt(t + offset)`, `offset > 0`
    InverseSqrt { offset: T },
    /// `intercept + slope·t`
    Linear { intercept: T, slope: T },
    /// Left-to-right sum of the component signals.
    Sum(Vec<SignalSpec<T>>),
}

impl<T: Scalar> SignalSpec<T> {
    pub fn zero() -> Self {
        Self { kind: SignalKind::Zero }
    }

    pub fn constant(value: T) -> Self {
        Self { kind: SignalKind::Constant(value) }
    }

    pub fn sine(amplitude: T, omega: T, phase: T) -> Self {
        Self { kind: SignalKind::Sine { amplitude, omega, phase } }
    }

    pub fn inverse_sqrt(offset: T) -> Result<Self> {
        if !(offset > T::zero()) || !offset.is_finite() {
            return Err(Error::InvalidSignal(format!(
                "inverse-sqrt offset must be finite and > 0, got {offset}"
            )));
        }
        Ok(Self { kind: SignalKind::InverseSqrt { offset } })
    }

    pub fn linear(intercept: T, slope: T) -> Self {
        Self { kind: SignalKind::Linear { intercept, slope } }
    }

    pub fn sum(terms: Vec<SignalSpec<T>>) -> Self {
        Self { kind: SignalKind::Sum(terms) }
    }

    pub fn kind(&self) -> &SignalKind<T> {
        &self.kind
    }

    pub fn eval(&self, t: T) -> T {
        match &self.kind {
            SignalKind::Zero => T::zero(),
            SignalKind::Constant(c) => *c,
            SignalKind::Sine { amplitude, omega, phase } => *amplitude * (*omega * t + *phase).sin(),
            SignalKind::InverseSqrt { offset } => (t + *offset).sqrt().recip(),
            SignalKind::Linear { intercept, slope } => *intercept + *slope * t,
            SignalKind::Sum(terms) => terms.iter().fold(T::zero(), |acc, s| acc + s.eval(t)),
        }
    }

    /// Analytic bound on `|s(t)|` for `t ≥ 0`, or `None` when unbounded.
    pub fn max_abs(&self) -> Option<T> {
        match &self.kind {
            SignalKind::Zero => Some(T::zero()),
            SignalKind::Constant(c) => Some(c.abs()),
            SignalKind::Sine { amplitude, .. } => Some(amplitude.abs()),
            SignalKind::InverseSqrt { offset } => Some(offset.sqrt().recip()),
            SignalKind::Linear { intercept, slope } => {
                if *slope == T::zero() {
                    Some(intercept.abs())
                } else {
                    None
                }
            }
            SignalKind::Sum(terms) => {
                terms.iter().try_fold(T::zero(), |acc, s| s.max_abs().map(|m| acc + m))
            }
        }
    }
}

/// Evaluates `spec` at `t`.
pub fn eval_signal<T: Scalar>(spec: &SignalSpec<T>, t: T) -> T {
    spec.eval(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind<T> {
    Constant(T),
    /// `start_value + slope·(t − segment start)`
    Ramp { start_value: T, slope: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub start: T,
    pub kind: SegmentKind<T>,
}

/// Right-continuous piecewise function of time. Segment `i` covers
/// `[start_i, start_{i+1})` and the last one extends to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise<T> {
    segments: Vec<Segment<T>>,
}

impl<T: Scalar> Piecewise<T> {
    pub fn new(segments: Vec<Segment<T>>) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| Error::InvalidProfile("profile needs at least one segment".into()))?;
        if first.start != T::zero() {
            return Err(Error::InvalidProfile(format!(
                "first segment must start at 0, got {}",
                first.start
            )));
        }
        for pair in segments.windows(2) {
            if !(pair[1].start > pair[0].start) || !pair[1].start.is_finite() {
                return Err(Error::InvalidProfile(format!(
                    "segment starts must be finite and strictly increasing ({} then {})",
                    pair[0].start, pair[1].start
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(value: T) -> Self {
        Self { segments: vec![Segment { start: T::zero(), kind: SegmentKind::Constant(value) }] }
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn eval(&self, t: T) -> T {
        // index of the last segment with start <= t; boundary picks the newer one
        let idx = self.segments.partition_point(|s| s.start <= t).saturating_sub(1);
        let seg = &self.segments[idx];
        match seg.kind {
            SegmentKind::Constant(v) => v,
            SegmentKind::Ramp { start_value, slope } => start_value + slope * (t - seg.start),
        }
    }

    /// Segment start times after zero.
    pub fn breakpoints(&self) -> impl Iterator<Item = T> + '_ {
        self.segments.iter().skip(1).map(|s| s.start)
    }
}

/// One piecewise profile per parameter component.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterProfile<T> {
    components: Vec<Piecewise<T>>,
}

impl<T: Scalar> ParameterProfile<T> {
    pub fn new(components: Vec<Piecewise<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidProfile("profile needs at least one component".into()));
        }
        Ok(Self { components })
    }

    pub fn scalar(component: Piecewise<T>) -> Self {
        Self { components: vec![component] }
    }

    pub fn constant(values: &[T]) -> Self {
        Self { components: values.iter().map(|&v| Piecewise::constant(v)).collect() }
    }

    /// 10 on `[0, 10)`, 15 on `[10, 20)`, a ramp from 15 down to 10 on
    /// `[20, 30)`, then 10 forever.
    pub fn jump_ramp_benchmark() -> Self {
        let seg = |start: f64, kind| Segment { start: T::lit(start), kind };
        let component = Piecewise::new(vec![
            seg(0.0, SegmentKind::Constant(T::lit(10.0))),
            seg(10.0, SegmentKind::Constant(T::lit(15.0))),
            seg(20.0, SegmentKind::Ramp { start_value: T::lit(15.0), slope: T::lit(-0.5) }),
            seg(30.0, SegmentKind::Constant(T::lit(10.0))),
        ])
        .expect("benchmark profile is well formed");
        Self::scalar(component)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Piecewise<T> {
        &self.components[i]
    }

    pub fn components(&self) -> &[Piecewise<T>] {
        &self.components
    }

    pub fn eval(&self, t: T) -> Vec<T> {
        self.components.iter().map(|c| c.eval(t)).collect()
    }
}

/// Evaluates every component of `profile` at `t`.
pub fn eval_profile<T: Scalar>(profile: &ParameterProfile<T>, t: T) -> Vec<T> {
    profile.eval(t)
}
