//! Run configuration, read from TOML.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{parse_scalar, ExtContext, DEFAULT_PRECISION};
use crate::pgl2::{from_quadruple, ProjMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub prime: u32,
    /// `c` with `w^2 = c`.
    pub extension: i64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    pub generators: Vec<GeneratorSpec>,
    /// Fixed axis offsets; the search is skipped when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<i32>>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSpec>,
    #[serde(default)]
    pub thick: ThickSpec,
    #[serde(default)]
    pub density: DensitySpec,
}

/// Either a quadruple `(a, b, k, u)` or a matrix literal `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Census and membership depth `D`.
    pub depth: usize,
    /// Word length `L` for the core enumeration.
    pub word_length: usize,
    /// Word length for stabilizer and `Gamma(C, v)` searches.
    pub stabilizer_length: usize,
    /// Projection radius `R`.
    pub radius: usize,
    /// Offset search half-width `W`.
    pub window: i32,
    pub frontier_cap: usize,
    /// Word length for the density search; 1 means generators only.
    pub density_words: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            depth: 10,
            word_length: 2,
            stabilizer_length: 4,
            radius: 8,
            window: 4,
            frontier_cap: 20_000,
            density_words: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    /// Representative `g` of the circle `g . P^1(Q_p)`.
    pub circle: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThickSpec {
    pub k: u32,
    pub shell_min: i32,
    pub shell_max: i32,
    /// Frames to sample; empty means the conjugators of the first three generators.
    pub frames: Vec<String>,
}

impl Default for ThickSpec {
    fn default() -> Self {
        ThickSpec { k: 2, shell_min: -8, shell_max: 8, frames: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DensitySpec {
    pub units: Vec<String>,
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::Config("at least one generator is required".into()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            let quad = g.a.is_some() || g.b.is_some() || g.k.is_some() || g.u.is_some();
            let full_quad = g.a.is_some() && g.b.is_some() && g.k.is_some() && g.u.is_some();
            match (quad, g.matrix.is_some()) {
                (true, true) => return Err(Error::Config(format!("generator {}: both matrix and quadruple", i + 1))),
                (false, false) => return Err(Error::Config(format!("generator {}: empty", i + 1))),
                (true, false) if !full_quad => {
                    return Err(Error::Config(format!("generator {}: quadruple needs a, b, k and u", i + 1)))
                }
                _ => {}
            }
        }
        if let Some(o) = &self.offsets {
            if o.len() != self.generators.len() {
                return Err(Error::Config("offsets must have one entry per generator".into()));
            }
        }
        let b = &self.budgets;
        if b.depth == 0 || b.word_length == 0 || b.window < 0 || b.frontier_cap == 0 {
            return Err(Error::Config("budgets must be positive".into()));
        }
        if self.thick.shell_min > self.thick.shell_max || self.thick.k == 0 {
            return Err(Error::Config("thickness shells are empty or K is zero".into()));
        }
        Ok(())
    }

    pub fn context(&self) -> Result<&'static ExtContext> {
        ExtContext::new(self.prime, self.extension, self.precision).map_err(|e| Error::Config(e.to_string()))
    }

    /// Generator matrices; literal errors are reported as config errors.
    pub fn generator_matrices(&self) -> Result<Vec<ProjMatrix>> {
        let ctx = self.context()?;
        let cfg_err = |i: usize, e: Error| Error::Config(format!("generator {}: {e}", i + 1));
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| match &g.matrix {
                Some(m) => ProjMatrix::parse(ctx, m).map_err(|e| cfg_err(i, e)),
                None => {
                    let parse = |s: &Option<String>| parse_scalar(ctx, s.as_deref().unwrap_or_default());
                    let a = parse(&g.a).map_err(|e| cfg_err(i, e))?;
                    let b = parse(&g.b).map_err(|e| cfg_err(i, e))?;
                    let u = parse(&g.u).map_err(|e| cfg_err(i, e))?;
                    from_quadruple(a, b, g.k.unwrap_or(1), u).map_err(|e| cfg_err(i, e))
                }
            })
            .collect()
    }

    pub fn probe_circle(&self) -> Result<Option<ProjMatrix>> {
        match &self.probe {
            None => Ok(None),
            Some(p) => {
                let ctx = self.context()?;
                ProjMatrix::parse(ctx, &p.circle).map(Some).map_err(|e| Error::Config(format!("probe circle: {e}")))
            }
        }
    }
}
