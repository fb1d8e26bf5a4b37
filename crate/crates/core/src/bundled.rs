//! Scenario files compiled into the binary, one per figure.

use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::{parse_scenario_str, Scenario};

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".toml")))),*]
    };
}

/// `(name, TOML source)` pairs in figure order.
pub const BUNDLED: &[(&str, &str)] = bundle![
    "fig1_ct_pe",
    "fig2_ct_nonpe",
    "fig3_dt_pe",
    "fig4_dt_nonpe",
    "fig5_cmp_pe",
    "fig6_cmp_nonpe",
    "fig7_cmp_pe_noise",
    "fig8_cmp_nonpe_noise",
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(name, _)| *name)
}

pub fn source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

pub fn load<T: Scalar>(name: &str) -> Result<Scenario<T>> {
    let src = source(name).ok_or_else(|| Error::validation("scenario", format!("no bundled scenario `{name}`")))?;
    parse_scenario_str(src, Path::new(&format!("<bundled>/{name}.toml")))
}
