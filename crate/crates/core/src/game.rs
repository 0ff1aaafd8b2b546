//! Symmetric two-player, two-strategy games.
//!
//! A game is a single payoff matrix indexed by the row player's action:
//!
//! ```text
//!        C   D
//!    C   R   S
//!    D   T   P
//! ```
//!
//! Under the usual normalization `R = 1`, `P = 0` a game is a point in the
//! `T`-`S` plane, and the signs of `T - R` (greed) and `S - P` (minus fear)
//! place it in one of four quadrants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffMatrix {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "P")]
    pub p: f64,
}

impl PayoffMatrix {
    pub fn new(r: f64, s: f64, t: f64, p: f64) -> Result<Self> {
        let m = PayoffMatrix { r, s, t, p };
        m.validate()?;
        Ok(m)
    }

    /// A game in the standard `T`-`S` plane (`R = 1`, `P = 0`).
    pub fn normalized(s: f64, t: f64) -> Result<Self> {
        Self::new(1.0, s, t, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("R", self.r), ("S", self.s), ("T", self.t), ("P", self.p)] {
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!("{name} = {v} is not finite")));
            }
        }
        Ok(())
    }

    pub fn fear_greed(&self) -> FearGreed {
        FearGreed {
            fear: self.p - self.s,
            greed: self.t - self.r,
        }
    }

    /// Incentive to defect `h(x) = (1 - x) F + x G`, without domain checks.
    #[inline]
    pub fn incentive(&self, x: f64) -> f64 {
        (1.0 - x) * (self.p - self.s) + x * (self.t - self.r)
    }

    /// Entry-wise convex combination `(1 - w) self + w other`.
    pub fn blend(&self, other: &PayoffMatrix, w: f64) -> PayoffMatrix {
        let mix = |a: f64, b: f64| (1.0 - w) * a + w * b;
        PayoffMatrix {
            r: mix(self.r, other.r),
            s: mix(self.s, other.s),
            t: mix(self.t, other.t),
            p: mix(self.p, other.p),
        }
    }

    pub fn max_entry(&self) -> f64 {
        self.r.max(self.s).max(self.t).max(self.p)
    }

    pub fn min_entry(&self) -> f64 {
        self.r.min(self.s).min(self.t).min(self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameClass {
    PrisonersDilemma,
    Snowdrift,
    StagHunt,
    Harmony,
    /// `T = R` and/or `S = P`; the game sits on a quadrant border.
    Boundary {
        t_eq_r: bool,
        s_eq_p: bool,
    },
}

impl GameClass {
    pub fn abbrev(&self) -> &'static str {
        match self {
            GameClass::PrisonersDilemma => "PD",
            GameClass::Snowdrift => "SD",
            GameClass::StagHunt => "SH",
            GameClass::Harmony => "HG",
            GameClass::Boundary { .. } => "Boundary",
        }
    }
}

impl fmt::Display for GameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameClass::Boundary { t_eq_r, s_eq_p } => {
                let parts: Vec<&str> = [(*t_eq_r, "T=R"), (*s_eq_p, "S=P")]
                    .iter()
                    .filter(|(on, _)| *on)
                    .map(|(_, s)| *s)
                    .collect();
                write!(f, "Boundary({})", parts.join(","))
            }
            other => f.write_str(other.abbrev()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FearGreed {
    /// `P - S`
    pub fear: f64,
    /// `T - R`
    pub greed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleEquilibrium {
    pub x: f64,
    pub stability: Stability,
}

pub fn classify_game(m: &PayoffMatrix) -> Result<GameClass> {
    m.validate()?;
    let greed = m.t - m.r;
    let sucker_gap = m.s - m.p;
    if greed == 0.0 || sucker_gap == 0.0 {
        return Ok(GameClass::Boundary {
            t_eq_r: greed == 0.0,
            s_eq_p: sucker_gap == 0.0,
        });
    }
    Ok(match (greed > 0.0, sucker_gap > 0.0) {
        (true, false) => GameClass::PrisonersDilemma,
        (true, true) => GameClass::Snowdrift,
        (false, false) => GameClass::StagHunt,
        (false, true) => GameClass::Harmony,
    })
}

pub fn fear_greed(m: &PayoffMatrix) -> Result<FearGreed> {
    m.validate()?;
    Ok(m.fear_greed())
}

pub fn incentive_to_defect(m: &PayoffMatrix, x: f64) -> Result<f64> {
    m.validate()?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(m.incentive(x))
}

/// Interior root `x* = F / (F - G)` of the incentive function, present only
/// when fear and greed have strictly opposite signs.
pub fn interior_root(fg: FearGreed) -> Option<f64> {
    let FearGreed { fear, greed } = fg;
    if (fear > 0.0 && greed < 0.0) || (fear < 0.0 && greed > 0.0) {
        Some(fear / (fear - greed))
    } else {
        None
    }
}

/// Equilibria of the replicator equation `x' = -x (1 - x) h(x)`.
///
/// Corner stability follows the leading-order sign of `x'` next to the
/// corner: near `x = 0` it is `-x F` (or `-x^2 G` when `F = 0`), near `x = 1`
/// it is `(1 - x) G` (or `(1 - x)^2 F` when `G = 0`, with the sign flipped).
pub fn single_game_fixed_points(m: &PayoffMatrix) -> Result<Vec<SingleEquilibrium>> {
    m.validate()?;
    let fg = m.fear_greed();
    let (f, g) = (fg.fear, fg.greed);
    if f == 0.0 && g == 0.0 {
        return Err(Error::DegenerateGame);
    }
    let stable_if = |cond: bool| {
        if cond {
            Stability::Stable
        } else {
            Stability::Unstable
        }
    };
    let at_zero = if f != 0.0 {
        stable_if(f > 0.0)
    } else {
        stable_if(g > 0.0)
    };
    let at_one = if g != 0.0 {
        stable_if(g < 0.0)
    } else {
        stable_if(f < 0.0)
    };

    let mut out = vec![
        SingleEquilibrium {
            x: 0.0,
            stability: at_zero,
        },
        SingleEquilibrium {
            x: 1.0,
            stability: at_one,
        },
    ];
    if let Some(x) = interior_root(fg) {
        out.push(SingleEquilibrium {
            x,
            stability: stable_if(f < 0.0 && g > 0.0),
        });
    }
    Ok(out)
}
