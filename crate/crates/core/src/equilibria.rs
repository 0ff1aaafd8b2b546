//! Fixed points of the mean-field system and their linear stability.
//!
//! Boundary points come from the corners and from the single-game
//! equilibria on the `alpha = 0` and `alpha = 1` edges; they are classified
//! from a finite-difference Jacobian. Interior points sit on a root `x~` of
//! `q` where the two incentives have opposite signs, at
//! `alpha~ = h1 / (h1 - h2)`, and are classified from the closed-form
//! eigenvalue data `u +/- sqrt(-v)`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{interior_root, single_game_fixed_points, Stability};
use crate::meanfield::{DrunkGame, State};

/// Anything smaller in magnitude is treated as zero.
pub const ZERO_TOL: f64 = 1e-9;

/// Finite-difference step for boundary classification.
pub const JACOBIAN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointKind {
    Corner,
    EdgeAlpha0,
    EdgeAlpha1,
    EdgeX0,
    EdgeX1,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    StableNode,
    UnstableNode,
    Saddle,
    StableSpiral,
    UnstableSpiral,
    Center,
    Degenerate,
}

impl StabilityClass {
    pub fn is_stable(&self) -> bool {
        matches!(
            self,
            StabilityClass::StableNode | StabilityClass::StableSpiral
        )
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityClass::StableNode => "stable_node",
            StabilityClass::UnstableNode => "unstable_node",
            StabilityClass::Saddle => "saddle",
            StabilityClass::StableSpiral => "stable_spiral",
            StabilityClass::UnstableSpiral => "unstable_spiral",
            StabilityClass::Center => "center",
            StabilityClass::Degenerate => "degenerate",
        }
    }
}

/// Eigenvalues written as `u +/- i sqrt(v)` (`u +/- sqrt(-v)` when `v <= 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSummary {
    pub u: f64,
    pub v: f64,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

impl EigenSummary {
    pub fn from_uv(u: f64, v: f64) -> Self {
        let (lambda1, lambda2) = if v > 0.0 {
            let w = v.sqrt();
            (Complex64::new(u, w), Complex64::new(u, -w))
        } else {
            let w = (-v).sqrt();
            (Complex64::new(u + w, 0.0), Complex64::new(u - w, 0.0))
        };
        EigenSummary {
            u,
            v,
            lambda1,
            lambda2,
        }
    }

    pub fn from_jacobian(j: &[[f64; 2]; 2]) -> Self {
        let u = 0.5 * (j[0][0] + j[1][1]);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        Self::from_uv(u, det - u * u)
    }

    pub fn classify(&self) -> StabilityClass {
        classify_eigenvalues(self.lambda1, self.lambda2)
    }
}

pub fn classify_eigenvalues(l1: Complex64, l2: Complex64) -> StabilityClass {
    if l1.im.abs() > ZERO_TOL {
        let re = l1.re;
        return if re.abs() < ZERO_TOL {
            StabilityClass::Center
        } else if re < 0.0 {
            StabilityClass::StableSpiral
        } else {
            StabilityClass::UnstableSpiral
        };
    }
    let (a, b) = (l1.re, l2.re);
    if a.abs() < ZERO_TOL || b.abs() < ZERO_TOL {
        StabilityClass::Degenerate
    } else if a < 0.0 && b < 0.0 {
        StabilityClass::StableNode
    } else if a > 0.0 && b > 0.0 {
        StabilityClass::UnstableNode
    } else {
        StabilityClass::Saddle
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub state: State,
    pub kind: FixedPointKind,
    pub stability: StabilityClass,
    pub eigen: EigenSummary,
    /// The point stands for a whole segment of equilibria.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub line: bool,
}

/// A root of `q` in `(0, 1)` where one of the incentives vanishes, so the
/// strict existence condition for an interior point fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerateRoot {
    pub x: f64,
    pub h1: f64,
    pub h2: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InteriorReport {
    pub points: Vec<FixedPoint>,
    pub degenerate: Vec<DegenerateRoot>,
}

/// Central differences where the stencil fits in the unit square, otherwise
/// the second-order one-sided stencil pointing inward.
pub fn numeric_jacobian(dg: &DrunkGame, s: State, h: f64) -> Result<[[f64; 2]; 2]> {
    if !(h.is_finite() && h > 0.0 && h < 0.25) {
        return Err(Error::param("h", format!("{h} is not in (0, 0.25)")));
    }
    let partial = |coord: f64, eval: &dyn Fn(f64) -> (f64, f64)| -> (f64, f64) {
        if coord - h >= 0.0 && coord + h <= 1.0 {
            let (p, m) = (eval(coord + h), eval(coord - h));
            ((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h))
        } else {
            let dir = if coord - h < 0.0 { 1.0 } else { -1.0 };
            let f0 = eval(coord);
            let f1 = eval(coord + dir * h);
            let f2 = eval(coord + dir * 2.0 * h);
            let d = |a: f64, b: f64, c: f64| dir * (-3.0 * a + 4.0 * b - c) / (2.0 * h);
            (d(f0.0, f1.0, f2.0), d(f0.1, f1.1, f2.1))
        }
    };
    let (dxx, dax) = partial(s.x, &|x| dg.field(x, s.alpha));
    let (dxa, daa) = partial(s.alpha, &|a| dg.field(s.x, a));
    Ok([[dxx, dxa], [dax, daa]])
}

fn boundary_point(dg: &DrunkGame, state: State, kind: FixedPointKind, line: bool) -> FixedPoint {
    let j = numeric_jacobian(dg, state, JACOBIAN_STEP).expect("fixed step is valid");
    let eigen = EigenSummary::from_jacobian(&j);
    let stability = if line {
        StabilityClass::Degenerate
    } else {
        eigen.classify()
    };
    FixedPoint {
        state,
        kind,
        stability,
        eigen,
        line,
    }
}

/// Corners, single-game equilibria on the `alpha` edges, and the `x` edges
/// when `q` vanishes there (then the whole edge is fixed; it is reported by
/// its midpoint with `line = true`). A degenerate single game likewise
/// makes its whole `alpha` edge fixed.
pub fn boundary_fixed_points(dg: &DrunkGame) -> Vec<FixedPoint> {
    let mut out: Vec<FixedPoint> = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
        .into_iter()
        .map(|(x, a)| boundary_point(dg, State::raw(x, a), FixedPointKind::Corner, false))
        .collect();
    for (g, alpha, kind) in [
        (&dg.g1, 0.0, FixedPointKind::EdgeAlpha0),
        (&dg.g2, 1.0, FixedPointKind::EdgeAlpha1),
    ] {
        let fg = g.fear_greed();
        if fg.fear == 0.0 && fg.greed == 0.0 {
            out.push(boundary_point(dg, State::raw(0.5, alpha), kind, true));
        } else if let Some(x) = interior_root(fg) {
            out.push(boundary_point(dg, State::raw(x, alpha), kind, false));
        }
    }
    for (x, kind) in [(0.0, FixedPointKind::EdgeX0), (1.0, FixedPointKind::EdgeX1)] {
        if dg.q.eval(x).abs() < ZERO_TOL {
            out.push(boundary_point(dg, State::raw(x, 0.5), kind, true));
        }
    }
    out
}

/// Stability predicted by the edge rule: a point on `alpha = 0` is stable
/// iff it is stable in the first game and `q < 0` there; on `alpha = 1` iff
/// stable in the second game and `q > 0`. `None` off those edges, on
/// fixed lines, or when `q` vanishes at the point.
pub fn edge_rule_stable(dg: &DrunkGame, fp: &FixedPoint) -> Option<bool> {
    if fp.line {
        return None;
    }
    let (x, a) = (fp.state.x, fp.state.alpha);
    let (game, want_positive) = if a == 0.0 {
        (&dg.g1, false)
    } else if a == 1.0 {
        (&dg.g2, true)
    } else {
        return None;
    };
    let q = dg.q.eval(x);
    if q.abs() < ZERO_TOL {
        return None;
    }
    let eq = single_game_fixed_points(game).ok()?;
    let single = eq.iter().find(|e| (e.x - x).abs() < ZERO_TOL)?;
    Some(single.stability == Stability::Stable && (q > 0.0) == want_positive)
}

/// Closed-form eigenvalue data at an interior fixed point.
pub fn interior_eigen(dg: &DrunkGame, x: f64, alpha: f64) -> Result<EigenSummary> {
    let (dx, da) = dg.field(x, alpha);
    if dx.abs() > ZERO_TOL || da.abs() > ZERO_TOL || dg.q.eval(x).abs() > ZERO_TOL {
        return Err(Error::param(
            "state",
            format!("({x}, {alpha}) is not an interior fixed point"),
        ));
    }
    let h1 = dg.g1.incentive(x);
    let h2 = dg.g2.incentive(x);
    if h1.abs() < ZERO_TOL {
        return Err(Error::DivisionDegeneracy { x });
    }
    let fg1 = dg.g1.fear_greed();
    let fg2 = dg.g2.fear_greed();
    let w = x * (1.0 - x) * alpha;
    let u = 0.5 * w * (fg2.fear * fg1.greed - fg1.fear * fg2.greed) / h1;
    let (_, dq) = dg.q.eval_and_derivative(x);
    let v = dg.kappa * w * h2 * dq - u * u;
    Ok(EigenSummary::from_uv(u, v))
}

fn classify_interior(e: &EigenSummary) -> StabilityClass {
    if e.v > 0.0 {
        if e.u.abs() < ZERO_TOL {
            StabilityClass::Center
        } else if e.u < 0.0 {
            StabilityClass::StableSpiral
        } else {
            StabilityClass::UnstableSpiral
        }
    } else {
        classify_eigenvalues(e.lambda1, e.lambda2)
    }
}

pub fn interior_fixed_points(dg: &DrunkGame) -> InteriorReport {
    let mut report = InteriorReport::default();
    for x in dg.q.roots_in_unit_interval() {
        let h1 = dg.g1.incentive(x);
        let h2 = dg.g2.incentive(x);
        let (z1, z2) = (h1.abs() < ZERO_TOL, h2.abs() < ZERO_TOL);
        if z1 && z2 {
            // x' and alpha' vanish along the whole line x = x~
            let state = State::raw(x, 0.5);
            let eigen = EigenSummary::from_jacobian(
                &numeric_jacobian(dg, state, JACOBIAN_STEP).expect("fixed step"),
            );
            report.points.push(FixedPoint {
                state,
                kind: FixedPointKind::Interior,
                stability: StabilityClass::Degenerate,
                eigen,
                line: true,
            });
        } else if z1 || z2 {
            report.degenerate.push(DegenerateRoot { x, h1, h2 });
        } else if h1 * h2 < 0.0 {
            let alpha = h1 / (h1 - h2);
            let eigen = interior_eigen(dg, x, alpha).expect("constructed on the fixed point");
            report.points.push(FixedPoint {
                state: State::raw(x, alpha),
                kind: FixedPointKind::Interior,
                stability: classify_interior(&eigen),
                eigen,
                line: false,
            });
        }
    }
    report
}

/// The interior point attracts when the first game's fear-greed ratio
/// strictly exceeds the second's.
pub fn attractive_interior_condition(dg: &DrunkGame) -> Result<bool> {
    let fg1 = dg.g1.fear_greed();
    let fg2 = dg.g2.fear_greed();
    if fg1.greed == 0.0 {
        return Err(Error::UndefinedRatio { game: 1 });
    }
    if fg2.greed == 0.0 {
        return Err(Error::UndefinedRatio { game: 2 });
    }
    Ok(fg1.fear / fg1.greed > fg2.fear / fg2.greed)
}

/// Every fixed point of the game, boundary first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub points: Vec<FixedPoint>,
    pub degenerate_roots: Vec<DegenerateRoot>,
}

impl EquilibriumReport {
    pub fn stable_states(&self) -> Vec<State> {
        self.points
            .iter()
            .filter(|p| p.stability.is_stable())
            .map(|p| p.state)
            .collect()
    }

    pub fn interior(&self) -> impl Iterator<Item = &FixedPoint> {
        self.points
            .iter()
            .filter(|p| p.kind == FixedPointKind::Interior && !p.line)
    }

    /// The flat record array used on disk.
    pub fn records(&self) -> Vec<FixedPointRecord> {
        self.points.iter().map(FixedPointRecord::from).collect()
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.records())?;
        Ok(())
    }
}

pub fn equilibria(dg: &DrunkGame) -> EquilibriumReport {
    let mut points = boundary_fixed_points(dg);
    let interior = interior_fixed_points(dg);
    points.extend(interior.points);
    EquilibriumReport {
        points,
        degenerate_roots: interior.degenerate,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub x: f64,
    pub alpha: f64,
    pub kind: FixedPointKind,
    pub stability: StabilityClass,
    pub u: f64,
    pub v: f64,
    pub lambda1_re: f64,
    pub lambda1_im: f64,
    pub lambda2_re: f64,
    pub lambda2_im: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub line: bool,
}

impl From<&FixedPoint> for FixedPointRecord {
    fn from(p: &FixedPoint) -> Self {
        FixedPointRecord {
            x: p.state.x,
            alpha: p.state.alpha,
            kind: p.kind,
            stability: p.stability,
            u: p.eigen.u,
            v: p.eigen.v,
            lambda1_re: p.eigen.lambda1.re,
            lambda1_im: p.eigen.lambda1.im,
            lambda2_re: p.eigen.lambda2.re,
            lambda2_im: p.eigen.lambda2.im,
            line: p.line,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PayoffMatrix;
    use crate::meanfield::QPoly;
    use crate::preset::Preset;
    use proptest::prelude::*;

    fn find(points: &[FixedPoint], x: f64, a: f64) -> FixedPoint {
        *points
            .iter()
            .find(|p| (p.state.x - x).abs() < 1e-12 && (p.state.alpha - a).abs() < 1e-12)
            .unwrap_or_else(|| panic!("no fixed point at ({x}, {a})"))
    }

    #[test]
    fn pub_dilemma_boundary() {
        let b = boundary_fixed_points(&Preset::PubDilemma.build());
        assert_eq!(b.len(), 4);
        assert!(find(&b, 0.0, 0.0).stability.is_stable());
        assert!(find(&b, 1.0, 1.0).stability.is_stable());
        assert!(!find(&b, 1.0, 0.0).stability.is_stable());
        assert!(!find(&b, 0.0, 1.0).stability.is_stable());
    }

    #[test]
    fn drunk_prisoner_has_no_stable_boundary_point() {
        for s in [0.1, 0.4, 0.5, 0.8, 0.95] {
            let dg = Preset::DrunkPrisoner { s }.build();
            assert!(
                boundary_fixed_points(&dg)
                    .iter()
                    .all(|p| !p.stability.is_stable()),
                "s = {s}"
            );
        }
    }

    #[test]
    fn battle_boundary() {
        let dg = Preset::battle(0.25).build();
        let b = boundary_fixed_points(&dg);
        let edge = find(&b, 0.2, 0.0);
        assert_eq!(edge.kind, FixedPointKind::EdgeAlpha0);
        assert!(edge.stability.is_stable());
        assert!(find(&b, 1.0, 1.0).stability.is_stable());
        assert!(!find(&b, 0.0, 1.0).stability.is_stable());
        assert_eq!(edge_rule_stable(&dg, &find(&b, 0.0, 1.0)), Some(false));
    }

    #[test]
    fn pub_dilemma_interior_saddle() {
        let r = interior_fixed_points(&Preset::PubDilemma.build());
        assert_eq!(r.points.len(), 1);
        let p = r.points[0];
        assert_eq!((p.state.x, p.state.alpha), (0.5, 0.5));
        assert_eq!(p.stability, StabilityClass::Saddle);
        assert_eq!(p.eigen.u, 0.0);
        assert!((p.eigen.v + 0.0625).abs() < 1e-15);
        assert!((p.eigen.lambda1.re - 0.25).abs() < 1e-15);
        assert!((p.eigen.lambda2.re + 0.25).abs() < 1e-15);
    }

    #[test]
    fn drunk_prisoner_interior() {
        let p = interior_fixed_points(&Preset::DrunkPrisoner { s: 0.8 }.build()).points[0];
        assert_eq!(p.state.x, 0.5);
        assert!((p.state.alpha - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.stability, StabilityClass::StableSpiral);
    }

    #[test]
    fn battle_interior_root_is_degenerate() {
        for s1 in [0.0, 0.25, 0.75, 0.95] {
            let r = interior_fixed_points(&Preset::battle(s1).build());
            assert!(r.points.is_empty());
            assert_eq!(r.degenerate.len(), 1);
            assert_eq!(r.degenerate[0].x, 0.5);
            assert_eq!(r.degenerate[0].h2, 0.0);
        }
    }

    #[test]
    fn battle_line_of_equilibria_at_transition() {
        let dg = Preset::Battle { s1: 0.5, t_sd: 1.5 }.build();
        let r = interior_fixed_points(&dg);
        assert_eq!(r.points.len(), 1);
        assert!(r.points[0].line);
        for a in [0.1, 0.5, 0.9] {
            assert_eq!(dg.field(0.5, a), (0.0, 0.0));
        }
    }

    #[test]
    fn interior_eigen_examples() {
        let e = interior_eigen(&Preset::PubDilemma.build(), 0.5, 0.5).unwrap();
        assert_eq!(e.classify(), StabilityClass::Saddle);
        let e = interior_eigen(&Preset::DrunkPrisoner { s: 0.5 }.build(), 0.5, 1.0 / 3.0).unwrap();
        assert!(e.u.abs() < 1e-15);
        assert!((e.v - 1.0 / 12.0).abs() < 1e-12);
        assert_eq!(classify_interior(&e), StabilityClass::Center);
        let e = interior_eigen(&Preset::DrunkPrisoner { s: 0.4 }.build(), 0.5, 1.0 / 3.0).unwrap();
        assert!((e.u - 1.0 / 60.0).abs() < 1e-12);
        assert_eq!(classify_interior(&e), StabilityClass::UnstableSpiral);
        assert!(interior_eigen(&Preset::PubDilemma.build(), 0.3, 0.5).is_err());
    }

    #[test]
    fn division_degeneracy() {
        // h1(0.5) = 0 and h2(0.5) = 0: the eigen formula cannot be used
        let g1 = PayoffMatrix::normalized(0.5, 1.5).unwrap();
        let g2 = PayoffMatrix::normalized(-0.5, 0.5).unwrap();
        let dg = DrunkGame::new(g1, g2, 1.0, QPoly::linear(0.5)).unwrap();
        assert!(matches!(
            interior_eigen(&dg, 0.5, 0.5),
            Err(Error::DivisionDegeneracy { .. })
        ));
    }

    #[test]
    fn attractiveness_condition() {
        let c = |s| attractive_interior_condition(&Preset::DrunkPrisoner { s }.build()).unwrap();
        assert!(c(0.8));
        assert!(!c(0.4));
        assert!(!c(0.5));
        assert!(matches!(
            attractive_interior_condition(&Preset::DrunkPrisoner { s: 1.0 }.build()),
            Err(Error::UndefinedRatio { game: 1 })
        ));
    }

    fn eig(j: [[f64; 2]; 2]) -> EigenSummary {
        EigenSummary::from_jacobian(&j)
    }

    #[test]
    fn numeric_jacobian_examples() {
        let pd = Preset::PubDilemma.build();
        let j = numeric_jacobian(&pd, State::raw(0.5, 0.5), 1e-6).unwrap();
        let e = eig(j);
        assert!((e.lambda1.re - 0.25).abs() < 1e-6 && (e.lambda2.re + 0.25).abs() < 1e-6);
        for p in boundary_fixed_points(&pd) {
            let e = eig(numeric_jacobian(&pd, p.state, 1e-5).unwrap());
            assert_eq!(e.classify().is_stable(), p.stability.is_stable());
        }
        let hopf = Preset::DrunkPrisoner { s: 0.5 }.build();
        let j = numeric_jacobian(&hopf, State::raw(0.5, 1.0 / 3.0), 1e-6).unwrap();
        assert!((j[0][0] + j[1][1]).abs() < 1e-6);
        assert!(numeric_jacobian(&hopf, State::raw(0.5, 0.5), 0.0).is_err());
    }

    #[test]
    fn report_json_shape() {
        let mut buf = Vec::new();
        equilibria(&Preset::PubDilemma.build())
            .write_json(&mut buf)
            .unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 5);
        let saddle = arr.iter().find(|p| p["stability"] == "saddle").unwrap();
        assert_eq!(saddle["x"], 0.5);
        assert_eq!(saddle["kind"], "interior");
        for key in [
            "x",
            "alpha",
            "kind",
            "stability",
            "u",
            "v",
            "lambda1_re",
            "lambda1_im",
            "lambda2_re",
            "lambda2_im",
        ] {
            assert!(saddle.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn hopf_sign_flip() {
        let signs: Vec<bool> = [0.40, 0.45, 0.49, 0.51, 0.55, 0.60]
            .iter()
            .map(|&s| {
                interior_fixed_points(&Preset::DrunkPrisoner { s }.build()).points[0]
                    .eigen
                    .u
                    > 0.0
            })
            .collect();
        let flips = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(flips, 1);
        assert!(signs[2] && !signs[3]);
    }

    fn arb_game() -> impl Strategy<Value = DrunkGame> {
        (
            -1.0..1.0f64,
            0.0..2.0f64,
            -1.0..1.0f64,
            0.0..2.0f64,
            0.1..10.0f64,
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

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-6 * a.norm().max(b.norm()).max(1e-3)
    }

    proptest! {
        #[test]
        fn every_reported_point_is_a_zero(dg in arb_game()) {
            for p in equilibria(&dg).points {
                let (dx, da) = dg.field(p.state.x, p.state.alpha);
                prop_assert!(dx.abs().max(da.abs()) < 1e-9, "{:?}", p);
            }
        }

        #[test]
        fn analytic_and_numeric_eigenvalues_agree(dg in arb_game()) {
            for p in interior_fixed_points(&dg).points.iter().filter(|p| !p.line) {
                let num = eig(numeric_jacobian(&dg, p.state, 1e-6).unwrap());
                let ok = (close(p.eigen.lambda1, num.lambda1) && close(p.eigen.lambda2, num.lambda2))
                    || (close(p.eigen.lambda1, num.lambda2) && close(p.eigen.lambda2, num.lambda1));
                prop_assert!(ok, "{:?} vs {:?}", p.eigen, num);
            }
        }

        #[test]
        fn edge_rule_matches_jacobian(dg in arb_game()) {
            for p in boundary_fixed_points(&dg) {
                if let Some(rule) = edge_rule_stable(&dg, &p) {
                    if p.eigen.lambda1.norm() > 1e-9 && p.eigen.lambda2.norm() > 1e-9 {
                        prop_assert_eq!(rule, p.stability.is_stable(), "{:?}", p);
                    }
                }
            }
        }
    }

    #[test]
    fn preset_interior_eigenvalues_agree_over_sampled_parameters() {
        let mut games = vec![Preset::PubDilemma.build()];
        for i in 0..=20 {
            let s = 0.025 + 0.95 * i as f64 / 20.0;
            for kappa in [0.1, 1.0, 10.0] {
                games.push(Preset::DrunkPrisoner { s }.build_with(kappa, 0.5).unwrap());
                games.push(Preset::battle(s).build_with(kappa, 0.5).unwrap());
            }
        }
        for dg in &games {
            for p in interior_fixed_points(dg).points.iter().filter(|p| !p.line) {
                let num = eig(numeric_jacobian(dg, p.state, 1e-6).unwrap());
                assert!(close(p.eigen.lambda1, num.lambda1) || close(p.eigen.lambda1, num.lambda2));
            }
        }
    }
}
