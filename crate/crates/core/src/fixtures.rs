//! Built-in group configurations.

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub const FIXTURES: &[(&str, &str)] = &[
    ("example-2.5", include_str!("../fixtures/example-2.5.toml")),
    ("nonexample-2.5", include_str!("../fixtures/nonexample-2.5.toml")),
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn fixture(name: &str) -> Result<RunConfig> {
    let text = fixture_text(name).ok_or_else(|| Error::Config(format!("unknown fixture '{name}'")))?;
    RunConfig::from_toml(text)
}
