//! Population-level dynamics of a drunk game.
//!
//! The state is the cooperator fraction `x` and the mean perception `alpha`
//! (probability of perceiving the second game). The system is
//!
//! ```text
//! x'     = -x (1 - x) [ (1 - alpha) h1(x) + alpha h2(x) ]
//! alpha' = kappa alpha (1 - alpha) q(x)
//! ```
//!
//! where `h_g(x) = (1 - x) F_g + x G_g` is the incentive to defect in game `g`.

mod integrate;
mod poly;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::PayoffMatrix;

pub use integrate::{
    integrate, integrate_endpoint, IntegrateOptions, Termination, Trajectory, TrajectoryEnd,
};
pub use poly::QPoly;

/// Two perceptions of the same interaction coupled through `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrunkGame {
    pub g1: PayoffMatrix,
    pub g2: PayoffMatrix,
    pub kappa: f64,
    pub q: QPoly,
}

impl DrunkGame {
    pub fn new(g1: PayoffMatrix, g2: PayoffMatrix, kappa: f64, q: QPoly) -> Result<Self> {
        let dg = DrunkGame { g1, g2, kappa, q };
        dg.validate()?;
        Ok(dg)
    }

    pub fn validate(&self) -> Result<()> {
        self.g1.validate()?;
        self.g2.validate()?;
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::param(
                "kappa",
                format!("{} is not a positive real", self.kappa),
            ));
        }
        Ok(())
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        DrunkGame::new(self.g1, self.g2, kappa, self.q.clone())
    }

    /// Vector field without domain checks; the polynomial is defined on all
    /// of the plane, which the finite-difference Jacobian relies on.
    #[inline]
    pub fn field(&self, x: f64, alpha: f64) -> (f64, f64) {
        let h = (1.0 - alpha) * self.g1.incentive(x) + alpha * self.g2.incentive(x);
        let dx = -x * (1.0 - x) * h;
        let da = self.kappa * alpha * (1.0 - alpha) * self.q.eval(x);
        (dx, da)
    }
}

/// A point of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub alpha: f64,
}

impl State {
    pub fn new(x: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("alpha", alpha)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain {
                    name,
                    value: v,
                    domain: "[0, 1]",
                });
            }
        }
        Ok(State { x, alpha })
    }

    pub(crate) const fn raw(x: f64, alpha: f64) -> Self {
        State { x, alpha }
    }

    /// Clamp onto the unit square. Subnormal values are flushed to zero:
    /// the edges are invariant, and subnormal arithmetic is very slow.
    pub fn clamped(x: f64, alpha: f64) -> Self {
        let flush = |v: f64| {
            if v.abs() < f64::MIN_POSITIVE {
                0.0
            } else {
                v.clamp(0.0, 1.0)
            }
        };
        State {
            x: flush(x),
            alpha: flush(alpha),
        }
    }

    pub fn linf_distance(&self, other: &State) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.alpha - other.alpha).abs())
    }

    pub fn euclidean_distance(&self, other: &State) -> f64 {
        (self.x - other.x).hypot(self.alpha - other.alpha)
    }
}

/// Expected payoffs `(Pi_C, Pi_D)` of a cooperator and a defector.
///
/// Each perception's payoffs are paired within the same game (`R1` with
/// `S1`, `T1` with `P1`). The printed mean-field equations pair `R1` with
/// `S2` and `T2` with `P1` across perceptions; both pairings give the same
/// dynamics when `R = 1` and `P = 0` in both games, and only this one is
/// consistent with the incentive form of the field for general payoffs.
pub fn expected_payoffs(dg: &DrunkGame, s: State) -> (f64, f64) {
    let (x, a) = (s.x, s.alpha);
    let (g1, g2) = (&dg.g1, &dg.g2);
    let pi_c = (1.0 - a) * (x * g1.r + (1.0 - x) * g1.s) + a * (x * g2.r + (1.0 - x) * g2.s);
    let pi_d = (1.0 - a) * (x * g1.t + (1.0 - x) * g1.p) + a * (x * g2.t + (1.0 - x) * g2.p);
    (pi_c, pi_d)
}

pub fn vector_field(dg: &DrunkGame, s: State) -> (f64, f64) {
    dg.field(s.x, s.alpha)
}

/// One classical fourth-order Runge-Kutta step, clamped back onto the unit
/// square.
pub fn step_rk4(dg: &DrunkGame, s: State, dt: f64) -> State {
    let (x, a) = (s.x, s.alpha);
    let (k1x, k1a) = dg.field(x, a);
    let (k2x, k2a) = dg.field(x + 0.5 * dt * k1x, a + 0.5 * dt * k1a);
    let (k3x, k3a) = dg.field(x + 0.5 * dt * k2x, a + 0.5 * dt * k2a);
    let (k4x, k4a) = dg.field(x + dt * k3x, a + dt * k3a);
    State::clamped(
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub alpha: f64,
    pub dx: f64,
    pub dalpha: f64,
}

/// The field on an `n x n` lattice over the unit square; `x` is the outer
/// (slow) index and `alpha` the inner one.
pub fn field_grid(dg: &DrunkGame, n: usize) -> Result<Vec<FieldSample>> {
    if n < 2 {
        return Err(Error::param("resolution", format!("{n} < 2")));
    }
    let step = 1.0 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let x = if i == n - 1 { 1.0 } else { i as f64 * step };
        for j in 0..n {
            let alpha = if j == n - 1 { 1.0 } else { j as f64 * step };
            let (dx, dalpha) = dg.field(x, alpha);
            out.push(FieldSample {
                x,
                alpha,
                dx,
                dalpha,
            });
        }
    }
    Ok(out)
}

pub fn write_field_csv<W: Write>(samples: &[FieldSample], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "alpha", "dx", "dalpha"])?;
    for s in samples {
        out.write_record(&[
            s.x.to_string(),
            s.alpha.to_string(),
            s.dx.to_string(),
            s.dalpha.to_string(),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::Preset;
    use proptest::prelude::*;

    fn pub_dilemma() -> DrunkGame {
        Preset::PubDilemma.build()
    }

    #[test]
    fn expected_payoff_examples() {
        let dg = pub_dilemma();
        assert_eq!(expected_payoffs(&dg, State::raw(1.0, 0.0)), (1.0, 1.5));
        assert_eq!(expected_payoffs(&dg, State::raw(0.0, 1.0)), (0.5, 0.0));
    }

    #[test]
    fn identical_perceptions_make_payoffs_alpha_free() {
        let g = PayoffMatrix::new(0.8, -0.3, 1.7, 0.2).unwrap();
        let dg = DrunkGame::new(g, g, 1.0, QPoly::linear(0.5)).unwrap();
        let a = expected_payoffs(&dg, State::raw(0.3, 0.1));
        let b = expected_payoffs(&dg, State::raw(0.3, 0.9));
        assert!((a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
    }

    #[test]
    fn field_examples() {
        let dg = pub_dilemma();
        assert_eq!(vector_field(&dg, State::raw(0.5, 0.5)), (0.0, 0.0));
        assert_eq!(vector_field(&dg, State::raw(0.5, 0.0)), (-0.125, 0.0));
        for a in [0.0, 0.3, 1.0] {
            assert_eq!(vector_field(&dg, State::raw(0.0, a)).0, 0.0);
            assert_eq!(vector_field(&dg, State::raw(1.0, a)).0, 0.0);
        }
    }

    #[test]
    fn state_domain() {
        assert!(State::new(1.2, 0.5).is_err());
        assert!(State::new(0.5, -0.1).is_err());
        assert!(State::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn kappa_must_be_positive() {
        let g = PayoffMatrix::normalized(0.0, 0.5).unwrap();
        assert!(DrunkGame::new(g, g, 0.0, QPoly::zero()).is_err());
        assert!(DrunkGame::new(g, g, f64::NAN, QPoly::zero()).is_err());
    }

    #[test]
    fn rk4_fixed_point_and_edge() {
        let dg = pub_dilemma();
        let fp = State::raw(0.5, 0.5);
        assert_eq!(step_rk4(&dg, fp, 0.01), fp);
        let s = step_rk4(&dg, State::raw(0.3, 0.0), 0.01);
        assert_eq!(s.alpha, 0.0);
    }

    /// Reference solution with many tiny RK4 steps.
    fn fine(dg: &DrunkGame, s: State, interval: f64, dt: f64) -> State {
        let n = (interval / dt).round() as usize;
        (0..n).fold(s, |s, _| step_rk4(dg, s, dt))
    }

    #[test]
    fn rk4_matches_fine_reference() {
        let dg = pub_dilemma();
        let s0 = State::raw(0.3, 0.7);
        let coarse = step_rk4(&dg, s0, 0.01);
        let reference = fine(&dg, s0, 0.01, 1e-4);
        assert!(coarse.linf_distance(&reference) < 1e-8);
    }

    #[test]
    fn grid_examples() {
        let dg = pub_dilemma();
        let g2 = field_grid(&dg, 2).unwrap();
        assert_eq!(g2.len(), 4);
        assert!(g2.iter().all(|s| s.dx == 0.0));
        let g3 = field_grid(&dg, 3).unwrap();
        assert_eq!(
            (g3[4].x, g3[4].alpha, g3[4].dx, g3[4].dalpha),
            (0.5, 0.5, 0.0, 0.0)
        );
        // x is the outer index
        assert_eq!((g3[1].x, g3[1].alpha), (0.0, 0.5));
        let g21 = field_grid(&dg, 21).unwrap();
        assert_eq!(g21.len(), 441);
        assert!(g21
            .iter()
            .all(|s| (0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.alpha)));
        assert!(field_grid(&dg, 1).is_err());
    }

    #[test]
    fn field_csv_header() {
        let mut buf = Vec::new();
        write_field_csv(&field_grid(&pub_dilemma(), 2).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,alpha,dx,dalpha\n"));
        assert_eq!(text.lines().count(), 5);
    }

    fn arb_game() -> impl Strategy<Value = DrunkGame> {
        (
            -1.0..1.0f64,
            0.0..2.0f64,
            -1.0..1.0f64,
            0.0..2.0f64,
            0.05..10.0f64,
            0.05..0.95f64,
        )
            .prop_map(|(s1, t1, s2, t2, kappa, mu)| {
                DrunkGame::new(
                    PayoffMatrix::normalized(s1, t1).unwrap(),
                    PayoffMatrix::normalized(s2, t2).unwrap(),
                    kappa,
                    QPoly::linear(mu),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn rk4_stays_in_unit_square(dg in arb_game(), x in 0.0..=1.0f64, a in 0.0..=1.0f64, dt in 0.001..0.5f64) {
            let mut s = State::raw(x, a);
            for _ in 0..50 {
                s = step_rk4(&dg, s, dt);
                prop_assert!((0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.alpha));
            }
        }

        #[test]
        fn edges_are_forward_invariant(dg in arb_game(), u in 0.0..=1.0f64, edge in 0usize..4) {
            let s0 = match edge {
                0 => State::raw(0.0, u),
                1 => State::raw(1.0, u),
                2 => State::raw(u, 0.0),
                _ => State::raw(u, 1.0),
            };
            let mut s = s0;
            for _ in 0..200 {
                s = step_rk4(&dg, s, 0.01);
            }
            match edge {
                0 | 1 => prop_assert_eq!(s.x, s0.x),
                _ => prop_assert_eq!(s.alpha, s0.alpha),
            }
        }

        #[test]
        fn field_matches_payoff_difference(dg in arb_game(), x in 0.0..=1.0f64, a in 0.0..=1.0f64) {
            let s = State::raw(x, a);
            let (pc, pd) = expected_payoffs(&dg, s);
            let (dx, _) = vector_field(&dg, s);
            prop_assert!((dx - x * (1.0 - x) * (pc - pd)).abs() < 1e-12);
        }

        #[test]
        fn zero_coupling_freezes_alpha(s1 in -1.0..1.0f64, t1 in 0.0..2.0f64, x in 0.0..=1.0f64, a in 0.0..=1.0f64) {
            let dg = DrunkGame::new(
                PayoffMatrix::normalized(s1, t1).unwrap(),
                PayoffMatrix::normalized(-s1, 2.0 - t1).unwrap(),
                1.0,
                QPoly::zero(),
            ).unwrap();
            let mut s = State::raw(x, a);
            for _ in 0..100 {
                s = step_rk4(&dg, s, 0.05);
            }
            prop_assert_eq!(s.alpha, a);
        }
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        // One-step error against a fine reference shrinks ~16x per halving.
        let dg = Preset::DrunkPrisoner { s: 0.4 }.build();
        for s0 in [
            State::raw(0.3, 0.6),
            State::raw(0.7, 0.2),
            State::raw(0.45, 0.45),
        ] {
            let err = |dt: f64| step_rk4(&dg, s0, dt).linf_distance(&fine(&dg, s0, dt, dt / 256.0));
            let (e1, e2) = (err(0.2), err(0.1));
            assert!(e1 / e2 >= 8.0, "ratio {} at {:?}", e1 / e2, s0);
        }
    }
}
