//! TOML scenario files: schema, parsing and validation.
//!
//! ```toml
//! name = "fig1_ct_pe"
//! mode = "ct"            # "ct" (RK4, step = h) or "dt" (step = sampling time)
//! horizon = 40.0
//! step = 0.001
//! decimation = 10        # optional; defaults to 10 (ct) or 1 (dt)
//!
//! [delta]                # scalar regressor Δ(t)
//! kind = "sine"
//! amplitude = 1.0
//! omega = 0.3141592653589793
//!
//! [noise]                # optional, added to the measurement only
//! kind = "sine"
//! amplitude = 0.1
//! omega = 10.0
//!
//! [theta]
//! segments = [
//!   { kind = "constant", start = 0.0, value = 10.0 },
//!   { kind = "ramp", start = 20.0, value = 15.0, slope = -0.5 },
//! ]
//!
//! [[estimator]]
//! kind = "fct_ap"
//! gamma = 2.0
//! mu = 0.98
//! t_window = 0.2
//! ```
//!
//! Vector scenarios (discrete time only) replace `[delta]` with
//! `[regressor]` holding `phi = [ {signal}, ... ]` and `lags = [0, 1, ...]`,
//! and give `theta` as an array of profiles, one per component.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::{DeltaMax, ExcitationPowerGains, SignedPowerGains};
use crate::ct::{window_steps, CtGains};
use crate::drem::{DelayStack, MAX_DIM};
use crate::dt::DtGains;
use crate::error::{Error, Result};
use crate::lre::ScalarLreSource;
use crate::metrics::ConvergenceCriterion;
use crate::scalar::Scalar;
use crate::signals::{ParameterProfile, Piecewise, Segment, SegmentKind, SignalSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ct,
    Dt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    Zero,
    Constant { value: f64 },
    Sine {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    InverseSqrt { offset: f64 },
    Linear {
        #[serde(default)]
        intercept: f64,
        slope: f64,
    },
    Sum { terms: Vec<SignalConfig> },
}

impl SignalConfig {
    pub fn build<T: Scalar>(&self) -> Result<SignalSpec<T>> {
        Ok(match self {
            SignalConfig::Zero => SignalSpec::zero(),
            SignalConfig::Constant { value } => SignalSpec::constant(T::lit(*value)),
            SignalConfig::Sine { amplitude, omega, phase } => {
                SignalSpec::sine(T::lit(*amplitude), T::lit(*omega), T::lit(*phase))
            }
            SignalConfig::InverseSqrt { offset } => SignalSpec::inverse_sqrt(T::lit(*offset))?,
            SignalConfig::Linear { intercept, slope } => SignalSpec::linear(T::lit(*intercept), T::lit(*slope)),
            SignalConfig::Sum { terms } => {
                SignalSpec::sum(terms.iter().map(SignalConfig::build).collect::<Result<_>>()?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentConfig {
    Constant { start: f64, value: f64 },
    Ramp { start: f64, value: f64, slope: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub segments: Vec<SegmentConfig>,
}

impl ProfileConfig {
    fn build<T: Scalar>(&self) -> Result<Piecewise<T>> {
        let segments = self
            .segments
            .iter()
            .map(|s| match *s {
                SegmentConfig::Constant { start, value } => {
                    Segment { start: T::lit(start), kind: SegmentKind::Constant(T::lit(value)) }
                }
                SegmentConfig::Ramp { start, value, slope } => Segment {
                    start: T::lit(start),
                    kind: SegmentKind::Ramp { start_value: T::lit(value), slope: T::lit(slope) },
                },
            })
            .collect();
        Piecewise::new(segments)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaConfig {
    Scalar(ProfileConfig),
    Components(Vec<ProfileConfig>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressorConfig {
    pub phi: Vec<SignalConfig>,
    pub lags: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsConfig {
    pub epsilon: Option<f64>,
    pub hold: Option<f64>,
    pub search_from: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaMaxConfig {
    Value(f64),
    /// `"analytic"` (bound of the Δ spec) or `"running"`.
    Named(String),
}

/// Running-maximum floor for `delta_max = "running"`.
pub const RUNNING_DELTA_MAX_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorConfig {
    Gradient {
        label: Option<String>,
        gamma: f64,
        #[serde(default)]
        theta0: f64,
    },
    Fct {
        label: Option<String>,
        gamma: f64,
        mu: f64,
        #[serde(default)]
        theta0: f64,
    },
    FctAp {
        label: Option<String>,
        gamma: f64,
        mu: f64,
        t_window: f64,
        #[serde(default)]
        theta0: f64,
    },
    Alg1 {
        label: Option<String>,
        gamma: f64,
        alpha: f64,
        #[serde(default)]
        theta0: f64,
    },
    Alg3 {
        label: Option<String>,
        gamma: f64,
        varsigma: f64,
        delta_max: Option<DeltaMaxConfig>,
    },
    DtGradient {
        label: Option<String>,
        c: f64,
        #[serde(default)]
        theta0: f64,
        gamma: Option<f64>,
        t_window: Option<f64>,
    },
    DtFct {
        label: Option<String>,
        c: f64,
        rho: f64,
        #[serde(default)]
        theta0: f64,
        gamma: Option<f64>,
        t_window: Option<f64>,
    },
    DtFctAp {
        label: Option<String>,
        c: f64,
        rho: f64,
        d: usize,
        #[serde(default)]
        theta0: f64,
        gamma: Option<f64>,
        t_window: Option<f64>,
    },
}

impl EstimatorConfig {
    pub fn kind_name(&self) -> &'static str {
        match self {
            EstimatorConfig::Gradient { .. } => "gradient",
            EstimatorConfig::Fct { .. } => "fct",
            EstimatorConfig::FctAp { .. } => "fct_ap",
            EstimatorConfig::Alg1 { .. } => "alg1",
            EstimatorConfig::Alg3 { .. } => "alg3",
            EstimatorConfig::DtGradient { .. } => "dt_gradient",
            EstimatorConfig::DtFct { .. } => "dt_fct",
            EstimatorConfig::DtFctAp { .. } => "dt_fct_ap",
        }
    }

    fn label(&self) -> String {
        let explicit = match self {
            EstimatorConfig::Gradient { label, .. }
            | EstimatorConfig::Fct { label, .. }
            | EstimatorConfig::FctAp { label, .. }
            | EstimatorConfig::Alg1 { label, .. }
            | EstimatorConfig::Alg3 { label, .. }
            | EstimatorConfig::DtGradient { label, .. }
            | EstimatorConfig::DtFct { label, .. }
            | EstimatorConfig::DtFctAp { label, .. } => label.clone(),
        };
        explicit.unwrap_or_else(|| format!("theta_{}", self.kind_name()))
    }

    fn mode(&self) -> Mode {
        match self {
            EstimatorConfig::DtGradient { .. }
            | EstimatorConfig::DtFct { .. }
            | EstimatorConfig::DtFctAp { .. } => Mode::Dt,
            _ => Mode::Ct,
        }
    }

    /// Continuous-time gains given to a discrete-time entry; accepted and
    /// echoed in the run metadata but unused by the recursions.
    pub fn ignored_gains(&self) -> Vec<(&'static str, f64)> {
        match self {
            EstimatorConfig::DtGradient { gamma, t_window, .. }
            | EstimatorConfig::DtFct { gamma, t_window, .. }
            | EstimatorConfig::DtFctAp { gamma, t_window, .. } => {
                let mut v = Vec::new();
                if let Some(g) = gamma {
                    v.push(("gamma", *g));
                }
                if let Some(t) = t_window {
                    v.push(("t_window", *t));
                }
                v
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub mode: Mode,
    pub horizon: f64,
    pub step: f64,
    pub decimation: Option<usize>,
    pub delta: Option<SignalConfig>,
    pub regressor: Option<RegressorConfig>,
    pub noise: Option<SignalConfig>,
    pub theta: ThetaConfig,
    pub metrics: Option<MetricsConfig>,
    #[serde(rename = "estimator", default)]
    pub estimators: Vec<EstimatorConfig>,
}

impl ScenarioConfig {
    pub fn from_toml_str(src: &str, origin: &Path) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Parse { path: origin.to_path_buf(), message: e.to_string() })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    /// Applies `--step` / `--horizon` overrides.
    pub fn with_overrides(mut self, step: Option<f64>, horizon: Option<f64>) -> Self {
        if let Some(s) = step {
            self.step = s;
        }
        if let Some(h) = horizon {
            self.horizon = h;
        }
        self
    }

    pub fn validate<T: Scalar>(&self) -> Result<Scenario<T>> {
        Scenario::from_config(self.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtVariant {
    Gradient,
    Fct,
    FctAp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtVariant {
    Gradient,
    Fct,
    FctAp,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorKind<T> {
    Ct { variant: CtVariant, gains: CtGains<T>, theta0: T },
    Alg1 { gains: SignedPowerGains<T>, theta0: T },
    Alg3 { gains: ExcitationPowerGains<T> },
    Dt { variant: DtVariant, gains: DtGains<T>, theta0: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RosterEntry<T> {
    pub label: String,
    pub kind: EstimatorKind<T>,
}

/// Data source of a scenario: a scalar LRE driven directly by `Δ`, or a
/// vector LRE that is reduced by extension and mixing.
#[derive(Debug, Clone)]
pub enum Plant<T> {
    Scalar(ScalarLreSource<T>),
    Vector { phi: Vec<SignalSpec<T>>, lags: Vec<usize>, profile: ParameterProfile<T>, noise: Option<SignalSpec<T>> },
}

impl<T: Scalar> Plant<T> {
    pub fn profile(&self) -> &ParameterProfile<T> {
        match self {
            Plant::Scalar(src) => src.profile(),
            Plant::Vector { profile, .. } => profile,
        }
    }

    pub fn dim(&self) -> usize {
        self.profile().dim()
    }
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario<T> {
    pub config: ScenarioConfig,
    pub name: String,
    pub mode: Mode,
    pub horizon: T,
    pub step: T,
    pub decimation: usize,
    pub plant: Plant<T>,
    pub roster: Vec<RosterEntry<T>>,
    pub criterion: ConvergenceCriterion<T>,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::validation(field, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

fn prefixed(prefix: &str, e: Error) -> Error {
    match e {
        Error::Validation { field, reason } => Error::Validation { field: format!("{prefix}.{field}"), reason },
        other => other,
    }
}

impl<T: Scalar> Scenario<T> {
    pub fn from_config(config: ScenarioConfig) -> Result<Self> {
        if config.name.is_empty() || config.name.contains(['/', '\\']) {
            return Err(Error::validation("name", "must be a non-empty file stem"));
        }
        positive("horizon", config.horizon)?;
        positive("step", config.step)?;
        let decimation = config.decimation.unwrap_or(match config.mode {
            Mode::Ct => 10,
            Mode::Dt => 1,
        });
        if decimation < 1 {
            return Err(Error::validation("decimation", "must be >= 1"));
        }
        if config.estimators.is_empty() {
            return Err(Error::EmptyRoster);
        }

        let components: Vec<Piecewise<T>> = match &config.theta {
            ThetaConfig::Scalar(p) => vec![p.build().map_err(|e| prefixed("theta", e))?],
            ThetaConfig::Components(ps) => {
                ps.iter().map(ProfileConfig::build).collect::<Result<_>>().map_err(|e| prefixed("theta", e))?
            }
        };
        let profile = ParameterProfile::new(components)?;
        let noise = config.noise.as_ref().map(SignalConfig::build).transpose()?;

        let plant = match (&config.delta, &config.regressor) {
            (Some(delta), None) => Plant::Scalar(ScalarLreSource::new(delta.build()?, profile, noise)?),
            (None, Some(reg)) => {
                if config.mode != Mode::Dt {
                    return Err(Error::validation("regressor", "vector regressors are only supported in dt mode"));
                }
                let q = profile.dim();
                if q > MAX_DIM {
                    return Err(Error::validation("theta", format!("at most {MAX_DIM} components, got {q}")));
                }
                if reg.phi.len() != q {
                    return Err(Error::validation(
                        "regressor.phi",
                        format!("expected {q} signals to match theta, got {}", reg.phi.len()),
                    ));
                }
                DelayStack::<T>::new(q, reg.lags.clone())
                    .map_err(|e| Error::validation("regressor.lags", e.to_string()))?;
                let phi = reg.phi.iter().map(SignalConfig::build).collect::<Result<_>>()?;
                Plant::Vector { phi, lags: reg.lags.clone(), profile, noise }
            }
            _ => return Err(Error::validation("delta", "exactly one of [delta] or [regressor] is required")),
        };
        if matches!(plant, Plant::Scalar(_)) && plant.dim() != 1 {
            return Err(Error::validation("theta", "scalar scenarios need a single profile"));
        }

        let step = T::lit(config.step);
        let mut roster = Vec::with_capacity(config.estimators.len());
        for (i, est) in config.estimators.iter().enumerate() {
            let label = est.label();
            let field = format!("estimator[{i}]");
            if est.mode() != config.mode {
                return Err(Error::validation(
                    format!("{field}.kind"),
                    format!("`{}` cannot run in a {:?} scenario", est.kind_name(), config.mode),
                ));
            }
            if roster.iter().any(|r: &RosterEntry<T>| r.label == label) {
                return Err(Error::validation(format!("{field}.label"), format!("duplicate label `{label}`")));
            }
            let kind = Self::build_estimator(est, &plant, step).map_err(|e| prefixed(&field, e))?;
            roster.push(RosterEntry { label, kind });
        }

        let mut criterion = match config.mode {
            Mode::Ct => ConvergenceCriterion::continuous_default(),
            Mode::Dt => ConvergenceCriterion::discrete_default(step),
        };
        if let Some(m) = &config.metrics {
            if let Some(e) = m.epsilon {
                positive("metrics.epsilon", e)?;
                criterion.epsilon = T::lit(e);
            }
            if let Some(h) = m.hold {
                positive("metrics.hold", h)?;
                criterion.hold = T::lit(h);
            }
            if let Some(s) = m.search_from {
                if !(s >= 0.0) {
                    return Err(Error::validation("metrics.search_from", "must be >= 0"));
                }
                criterion.search_from = T::lit(s);
            }
        }

        Ok(Self {
            name: config.name.clone(),
            mode: config.mode,
            horizon: T::lit(config.horizon),
            step,
            decimation,
            plant,
            roster,
            criterion,
            config,
        })
    }

    fn build_estimator(est: &EstimatorConfig, plant: &Plant<T>, step: T) -> Result<EstimatorKind<T>> {
        let l = T::lit;
        Ok(match est {
            EstimatorConfig::Gradient { gamma, theta0, .. } => EstimatorKind::Ct {
                variant: CtVariant::Gradient,
                // μ only shapes the unused reconstructions of a plain gradient entry
                gains: CtGains::new(l(*gamma), l(0.5))?,
                theta0: l(*theta0),
            },
            EstimatorConfig::Fct { gamma, mu, theta0, .. } => EstimatorKind::Ct {
                variant: CtVariant::Fct,
                gains: CtGains::new(l(*gamma), l(*mu))?,
                theta0: l(*theta0),
            },
            EstimatorConfig::FctAp { gamma, mu, t_window, theta0, .. } => {
                let gains = CtGains::new(l(*gamma), l(*mu))?.with_window(l(*t_window))?;
                window_steps(l(*t_window), step)?;
                EstimatorKind::Ct { variant: CtVariant::FctAp, gains, theta0: l(*theta0) }
            }
            EstimatorConfig::Alg1 { gamma, alpha, theta0, .. } => {
                EstimatorKind::Alg1 { gains: SignedPowerGains::new(l(*gamma), l(*alpha))?, theta0: l(*theta0) }
            }
            EstimatorConfig::Alg3 { gamma, varsigma, delta_max, .. } => {
                let analytic = || match plant {
                    Plant::Scalar(src) => src.delta_spec().max_abs().ok_or_else(|| {
                        Error::validation("delta_max", "Δ has no analytic bound; give a value or \"running\"")
                    }),
                    Plant::Vector { .. } => Err(Error::validation("delta_max", "requires a scalar plant")),
                };
                let mode = match delta_max {
                    None => DeltaMax::Fixed(analytic()?),
                    Some(DeltaMaxConfig::Value(v)) => DeltaMax::Fixed(l(*v)),
                    Some(DeltaMaxConfig::Named(s)) if s == "analytic" => DeltaMax::Fixed(analytic()?),
                    Some(DeltaMaxConfig::Named(s)) if s == "running" => {
                        DeltaMax::Running { floor: l(RUNNING_DELTA_MAX_FLOOR) }
                    }
                    Some(DeltaMaxConfig::Named(s)) => {
                        return Err(Error::validation(
                            "delta_max",
                            format!("expected a number, \"analytic\" or \"running\", got \"{s}\""),
                        ))
                    }
                };
                EstimatorKind::Alg3 { gains: ExcitationPowerGains::new(l(*gamma), l(*varsigma), mode)? }
            }
            EstimatorConfig::DtGradient { c, theta0, .. } => EstimatorKind::Dt {
                variant: DtVariant::Gradient,
                gains: DtGains::new(l(*c), l(0.5), 1, step)?,
                theta0: l(*theta0),
            },
            EstimatorConfig::DtFct { c, rho, theta0, .. } => EstimatorKind::Dt {
                variant: DtVariant::Fct,
                gains: DtGains::new(l(*c), l(*rho), 1, step)?,
                theta0: l(*theta0),
            },
            EstimatorConfig::DtFctAp { c, rho, d, theta0, .. } => EstimatorKind::Dt {
                variant: DtVariant::FctAp,
                gains: DtGains::new(l(*c), l(*rho), *d, step)?,
                theta0: l(*theta0),
            },
        })
    }

    pub fn with_overrides(&self, step: Option<f64>, horizon: Option<f64>) -> Result<Self> {
        Self::from_config(self.config.clone().with_overrides(step, horizon))
    }

    /// Integration (ct) or sampling (dt) steps over the horizon.
    pub fn total_steps(&self) -> usize {
        let n = (self.horizon / self.step + T::lit(1e-9)).floor();
        n.to_usize().unwrap_or(0)
    }

    /// `floor(horizon / (step · decimation)) + 1`
    pub fn row_count(&self) -> usize {
        self.total_steps() / self.decimation + 1
    }
}

pub fn parse_scenario_str<T: Scalar>(src: &str, origin: &Path) -> Result<Scenario<T>> {
    ScenarioConfig::from_toml_str(src, origin)?.validate()
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<Scenario<f64>> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario_str(&src, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "t"
mode = "ct"
horizon = 1.0
step = 0.1

[delta]
kind = "sine"
amplitude = 1.0
omega = 0.3141592653589793

[theta]
segments = [{ kind = "constant", start = 0.0, value = 10.0 }]
"#;

    fn parse(extra: &str) -> Result<Scenario<f64>> {
        parse_scenario_str(&format!("{BASE}\n{extra}"), Path::new("inline.toml"))
    }

    fn field_of(r: Result<Scenario<f64>>) -> String {
        match r {
            Err(Error::Validation { field, .. }) => field,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_scenario() {
        let s = parse("[[estimator]]\nkind = \"gradient\"\ngamma = 2.0\n").unwrap();
        assert_eq!(s.roster[0].label, "theta_gradient");
        assert_eq!(s.decimation, 10);
        assert_eq!(s.total_steps(), 10);
        assert_eq!(s.row_count(), 2);
    }

    #[test]
    fn mu_out_of_range() {
        let r = parse("[[estimator]]\nkind = \"fct\"\ngamma = 2.0\nmu = 1.2\n");
        assert_eq!(field_of(r), "estimator[0].mu");
    }

    #[test]
    fn window_not_multiple_of_step() {
        let r = parse("[[estimator]]\nkind = \"fct_ap\"\ngamma = 2.0\nmu = 0.98\nt_window = 0.25\n");
        assert_eq!(field_of(r), "estimator[0].t_window");
    }

    #[test]
    fn unknown_keys_rejected() {
        let r = parse("[[estimator]]\nkind = \"gradient\"\ngamma = 2.0\nbogus = 1\n");
        assert!(matches!(r, Err(Error::Parse { .. })));
        let r = parse_scenario_str::<f64>(&format!("{BASE}\ncolour = 3\n"), Path::new("x.toml"));
        assert!(matches!(r, Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_error_carries_line() {
        let r = parse_scenario_str::<f64>("name = \"x\"\nmode = [", Path::new("broken.toml"));
        match r {
            Err(Error::Parse { message, .. }) => assert!(message.contains("line 2"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mode_mismatch_and_duplicates() {
        let r = parse("[[estimator]]\nkind = \"dt_fct\"\nc = 1.0\nrho = 0.9\n");
        assert_eq!(field_of(r), "estimator[0].kind");
        let r = parse("[[estimator]]\nkind = \"gradient\"\ngamma = 2.0\n[[estimator]]\nkind = \"gradient\"\ngamma = 1.0\n");
        assert_eq!(field_of(r), "estimator[1].label");
    }

    #[test]
    fn empty_roster() {
        assert!(matches!(parse(""), Err(Error::EmptyRoster)));
    }

    #[test]
    fn alg3_delta_max_modes() {
        let s = parse("[[estimator]]\nkind = \"alg3\"\ngamma = 5.0\nvarsigma = 2.0\n").unwrap();
        match &s.roster[0].kind {
            EstimatorKind::Alg3 { gains } => assert_eq!(gains.delta_max, DeltaMax::Fixed(1.0)),
            k => panic!("{k:?}"),
        }
        let s = parse("[[estimator]]\nkind = \"alg3\"\ngamma = 5.0\nvarsigma = 2.0\ndelta_max = \"running\"\n").unwrap();
        match &s.roster[0].kind {
            EstimatorKind::Alg3 { gains } => {
                assert_eq!(gains.delta_max, DeltaMax::Running { floor: RUNNING_DELTA_MAX_FLOOR })
            }
            k => panic!("{k:?}"),
        }
        let r = parse("[[estimator]]\nkind = \"alg3\"\ngamma = 5.0\nvarsigma = 2.0\ndelta_max = \"peak\"\n");
        assert_eq!(field_of(r), "estimator[0].delta_max");
    }

    #[test]
    fn overrides_revalidate() {
        let s = parse("[[estimator]]\nkind = \"fct_ap\"\ngamma = 2.0\nmu = 0.98\nt_window = 0.2\n").unwrap();
        assert!(s.with_overrides(Some(0.001), Some(2.0)).is_ok());
        assert!(s.with_overrides(Some(0.15), None).is_err());
        assert!(s.with_overrides(None, Some(-1.0)).is_err());
    }

    #[test]
    fn vector_plant_needs_dt() {
        let src = r#"
name = "v"
mode = "dt"
horizon = 5.0
step = 0.5

[regressor]
phi = [{ kind = "constant", value = 1.0 }, { kind = "linear", slope = 1.0 }]
lags = [0, 1]

[[theta]]
segments = [{ kind = "constant", start = 0.0, value = 2.0 }]
[[theta]]
segments = [{ kind = "constant", start = 0.0, value = 3.0 }]

[[estimator]]
kind = "dt_fct_ap"
c = 1.0
rho = 0.98
d = 1
"#;
        let s = parse_scenario_str::<f64>(src, Path::new("v.toml")).unwrap();
        assert_eq!(s.plant.dim(), 2);
        let ct = src.replace("mode = \"dt\"", "mode = \"ct\"").replace("dt_fct_ap", "fct");
        assert!(parse_scenario_str::<f64>(&ct, Path::new("v.toml")).is_err());
        let bad_lags = src.replace("lags = [0, 1]", "lags = [0, 0]");
        assert_eq!(field_of(parse_scenario_str::<f64>(&bad_lags, Path::new("v.toml"))), "regressor.lags");
    }
}
