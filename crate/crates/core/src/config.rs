//! JSON configuration files.
//!
//! A game file either spells the game out
//!
//! ```json
//! { "g1": {"R": 1, "S": -0.5, "T": 1.5, "P": 0},
//!   "g2": {"R": 1, "S": 0.5, "T": 0.5, "P": 0},
//!   "kappa": 1.0,
//!   "q": {"type": "linear", "mu": 0.5} }
//! ```
//!
//! or names a preset, `{"preset": {"name": "battle", "params": {"s1": 0.25}}}`.
//! `q` may also be `{"type": "poly", "coeffs": [c0, c1, ...]}` (ascending
//! powers). An ABM file wraps a game file:
//! `{"game": {...}, "abm": {...}, "delta0": 0.04}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::abm::AbmConfig;
use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::meanfield::{DrunkGame, QPoly};
use crate::preset::preset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum QSpec {
    Linear { mu: f64 },
    Poly { coeffs: Vec<f64> },
}

impl QSpec {
    pub fn to_poly(&self) -> Result<QPoly> {
        match self {
            QSpec::Linear { mu } => {
                if !mu.is_finite() {
                    return Err(Error::param("mu", format!("{mu} is not finite")));
                }
                Ok(QPoly::linear(*mu))
            }
            QSpec::Poly { coeffs } => QPoly::new(coeffs.clone()),
        }
    }

    pub fn from_poly(q: &QPoly) -> Self {
        match q.as_linear_mu() {
            Some(mu) => QSpec::Linear { mu },
            None => QSpec::Poly {
                coeffs: q.coeffs().to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g1: Option<PayoffMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<PayoffMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<QSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<PresetSpec>,
}

/// Parse JSON, reporting the failing field path with line and column.
fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::Config(inner.to_string())
        } else {
            Error::Config(format!("at `{path}`: {inner}"))
        }
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

impl GameConfigFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self = parse(text)?;
        cfg.check_shape()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&read(path)?)
    }

    /// The explicit form of a game.
    pub fn from_game(dg: &DrunkGame) -> Self {
        GameConfigFile {
            g1: Some(dg.g1),
            g2: Some(dg.g2),
            kappa: Some(dg.kappa),
            q: Some(QSpec::from_poly(&dg.q)),
            preset: None,
        }
    }

    fn check_shape(&self) -> Result<()> {
        let explicit = [
            self.g1.is_some(),
            self.g2.is_some(),
            self.kappa.is_some(),
            self.q.is_some(),
        ];
        match (&self.preset, explicit.iter().any(|&b| b)) {
            (Some(_), true) => Err(Error::Config(
                "`preset` cannot be combined with `g1`, `g2`, `kappa` or `q`; pass kappa and mu as preset params".into(),
            )),
            (Some(_), false) => Ok(()),
            (None, _) => {
                let names = ["g1", "g2", "kappa", "q"];
                match explicit.iter().position(|&b| !b) {
                    Some(i) => Err(Error::Config(format!(
                        "missing field `{}` (give g1, g2, kappa and q, or a preset)",
                        names[i]
                    ))),
                    None => Ok(()),
                }
            }
        }
    }

    /// Build the game; any semantic failure is reported as a config error.
    pub fn to_game(&self) -> Result<DrunkGame> {
        self.check_shape()?;
        let built = match &self.preset {
            Some(p) => preset(&p.name, &p.params),
            None => {
                let (g1, g2, kappa, q) = (
                    self.g1.expect("checked"),
                    self.g2.expect("checked"),
                    self.kappa.expect("checked"),
                    self.q.as_ref().expect("checked"),
                );
                g1.validate()
                    .and_then(|_| g2.validate())
                    .and_then(|_| q.to_poly())
                    .and_then(|q| DrunkGame::new(g1, g2, kappa, q))
            }
        };
        built.map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

pub fn load_game(path: &Path) -> Result<DrunkGame> {
    GameConfigFile::load(path)?.to_game()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbmConfigFile {
    pub game: GameConfigFile,
    #[serde(default)]
    pub abm: AbmConfig,
    /// When present, overrides `abm.alpha1` and `abm.alpha2` with groups
    /// at `0.5 (1 -/+ delta0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
}

impl AbmConfigFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self = parse(text)?;
        cfg.game.check_shape()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&read(path)?)
    }

    /// The resolved ABM configuration and game, validated.
    pub fn resolve(&self) -> Result<(AbmConfig, DrunkGame)> {
        let mut abm = self.abm;
        if let Some(d) = self.delta0 {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::Config(format!("at `delta0`: {d} is not in [0, 1]")));
            }
            abm = abm.with_heterogeneity(d);
        }
        abm.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => {
                Error::Config(format!("at `abm.{name}`: {reason}"))
            }
            other => other,
        })?;
        Ok((abm, self.game.to_game()?))
    }
}
