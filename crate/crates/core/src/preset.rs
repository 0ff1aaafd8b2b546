//! The named game pairs studied in the figures, with their payoffs
//! hard-coded. Anything else goes through [`DrunkGame::new`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::meanfield::{DrunkGame, QPoly};

pub const DEFAULT_KAPPA: f64 = 1.0;
pub const DEFAULT_MU: f64 = 0.5;

/// Temptation of the snowdrift perception in the battle preset by default.
pub const BATTLE_DEFAULT_T_SD: f64 = 2.0;

/// Snowdrift temptation under which the battle's attractiveness curve shows
/// the discontinuous jump at `S1 = mu = 0.5`: the snowdrift equilibrium
/// `S1 / (S1 + T - 1)` then crosses `mu` exactly at `S1 = 0.5`, and both
/// incentives vanish on the line `x = 0.5` there.
pub const BATTLE_TRANSITION_T_SD: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Preset {
    /// Sober prisoner's dilemma (`S = -0.5`, `T = 1.5`) coupled with an
    /// intoxicated harmony game (`S = T = 0.5`).
    PubDilemma,
    /// Harmony game `S = T = s` coupled with the dilemma `S = -1`, `T = 2`.
    DrunkPrisoner { s: f64 },
    /// Snowdrift (`S = s1`, `T = t_sd`) coupled with the stag hunt
    /// `S = -0.5`, `T = 0.5`.
    Battle { s1: f64, t_sd: f64 },
}

impl Preset {
    pub fn battle(s1: f64) -> Self {
        Preset::Battle {
            s1,
            t_sd: BATTLE_DEFAULT_T_SD,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::PubDilemma => "pub_dilemma",
            Preset::DrunkPrisoner { .. } => "drunk_prisoner",
            Preset::Battle { .. } => "battle",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::param(name, format!("{v} is outside [0, 1]")))
            }
        };
        match *self {
            Preset::PubDilemma => Ok(()),
            Preset::DrunkPrisoner { s } => unit("s", s),
            Preset::Battle { s1, t_sd } => {
                unit("s1", s1)?;
                if t_sd.is_finite() && t_sd > 1.0 {
                    Ok(())
                } else {
                    Err(Error::param("t_sd", format!("{t_sd} must exceed R = 1")))
                }
            }
        }
    }

    pub fn matrices(&self) -> (PayoffMatrix, PayoffMatrix) {
        let m = |s: f64, t: f64| PayoffMatrix {
            r: 1.0,
            s,
            t,
            p: 0.0,
        };
        match *self {
            Preset::PubDilemma => (m(-0.5, 1.5), m(0.5, 0.5)),
            Preset::DrunkPrisoner { s } => (m(s, s), m(-1.0, 2.0)),
            Preset::Battle { s1, t_sd } => (m(s1, t_sd), m(-0.5, 0.5)),
        }
    }

    /// With `kappa = 1`, `q(x) = x - 0.5`. Panics on out-of-range parameters;
    /// use [`Preset::build_with`] for checked construction.
    pub fn build(&self) -> DrunkGame {
        self.build_with(DEFAULT_KAPPA, DEFAULT_MU)
            .expect("preset parameters in range")
    }

    pub fn build_with(&self, kappa: f64, mu: f64) -> Result<DrunkGame> {
        self.validate()?;
        if !mu.is_finite() {
            return Err(Error::param("mu", format!("{mu} is not finite")));
        }
        let (g1, g2) = self.matrices();
        DrunkGame::new(g1, g2, kappa, QPoly::linear(mu))
    }
}

/// Build a preset from its name and a map of named parameters.
///
/// `drunk_prisoner` requires `s`, `battle` requires `s1` and accepts `t_sd`;
/// every preset accepts `kappa` and `mu`. Unknown keys are rejected.
pub fn preset(name: &str, params: &BTreeMap<String, f64>) -> Result<DrunkGame> {
    let allowed: &[&str] = match name {
        "pub_dilemma" => &["kappa", "mu"],
        "drunk_prisoner" => &["s", "kappa", "mu"],
        "battle" => &["s1", "t_sd", "kappa", "mu"],
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::param(
            k.clone(),
            format!("not a parameter of `{name}`"),
        ));
    }
    let required = |key: &str| {
        params
            .get(key)
            .copied()
            .ok_or_else(|| Error::param(key, format!("required by `{name}`")))
    };
    let p = match name {
        "pub_dilemma" => Preset::PubDilemma,
        "drunk_prisoner" => Preset::DrunkPrisoner { s: required("s")? },
        _ => Preset::Battle {
            s1: required("s1")?,
            t_sd: params.get("t_sd").copied().unwrap_or(BATTLE_DEFAULT_T_SD),
        },
    };
    p.build_with(
        params.get("kappa").copied().unwrap_or(DEFAULT_KAPPA),
        params.get("mu").copied().unwrap_or(DEFAULT_MU),
    )
}
