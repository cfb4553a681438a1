//! Rotationally symmetric pseudo-holomorphic leaves
//! `u(s, t) = (f(s) cos 2 pi t, f(s) sin 2 pi t, g(s), 0)`, `a' = pi f^2`,
//! obtained from a scalar profile ODE for `g` on the four axis intervals cut
//! out by `xbar_-, 0, p1, p3, xbar_+`.

use std::f64::consts::PI;
use std::ops::ControlFlow;

use nalgebra::{Matrix4, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::config::{IntegratorLimits, Tolerances};
use crate::error::{Error, Result};
use crate::index::special_orbit_index;
use crate::model::{self, dlambda0, lambda0, ContactFrame, HamiltonianParams, State4, TimeKind};
use crate::ode::{self, OdeOptions};
use crate::orbits::{special_orbits, OrbitLabel, ReebOrbit, SpecialOrbits, ValidatedModel};
use crate::path::accumulated_turns;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafId {
    #[serde(rename = "disk_to_P2")]
    DiskToP2,
    #[serde(rename = "cyl_P2_P1")]
    CylP2P1,
    #[serde(rename = "cyl_P3_P1")]
    CylP3P1,
    #[serde(rename = "plane_to_P3")]
    PlaneToP3,
}

impl LeafId {
    pub const ALL: [LeafId; 4] = [LeafId::DiskToP2, LeafId::CylP2P1, LeafId::CylP3P1, LeafId::PlaneToP3];

    pub fn name(self) -> &'static str {
        match self {
            LeafId::DiskToP2 => "disk_to_P2",
            LeafId::CylP2P1 => "cyl_P2_P1",
            LeafId::CylP3P1 => "cyl_P3_P1",
            LeafId::PlaneToP3 => "plane_to_P3",
        }
    }

    /// Role in the 3-2-1 foliation this explicit leaf instantiates.
    pub fn role(self) -> &'static str {
        match self {
            LeafId::DiskToP2 => "D",
            LeafId::CylP2P1 => "V",
            LeafId::CylP3P1 => "C_tau",
            LeafId::PlaneToP3 => "F_tau",
        }
    }
}

impl std::str::FromStr for LeafId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LeafId::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| Error::InvalidInput(format!("unknown leaf '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndLimit {
    Orbit(OrbitLabel),
    Removable,
}

/// `f^2 = 1 - 2 H2(g, 0)`.
pub fn cap_f2(p: &HamiltonianParams, g: f64) -> f64 {
    1.0 - 2.0 * p.h2(g, 0.0)
}

/// Right-hand side of the profile ODE, `g' = -2 pi f^2 Q / (f^2 + Q^2)`.
///
/// In terms of `h = 2 / (f^2 + g Q)` this is
/// `-h pi f^2 Q / (1 + (h/2)(Q - g) Q)`; the extra factor `1/2` comes from
/// `lambda(X_1) = x1 (Q - g) / 2` and is what makes `(a, u)` satisfy the
/// Cauchy–Riemann equations.
pub fn profile_rhs(p: &HamiltonianParams, g: f64) -> Result<f64> {
    let f2 = cap_f2(p, g);
    if f2 < -1e-12 {
        return Err(Error::OutsideEnergyCap { g });
    }
    let f2 = f2.max(0.0);
    let q = p.q(g, 0.0);
    let den = f2 + q * q;
    Ok(if den == 0.0 { 0.0 } else { -2.0 * PI * f2 * q / den })
}

/// The right-hand side with denominator `1 + h (Q - g) Q`.
pub fn profile_rhs_printed(p: &HamiltonianParams, g: f64) -> Result<f64> {
    let f2 = cap_f2(p, g);
    if f2 < -1e-12 {
        return Err(Error::OutsideEnergyCap { g });
    }
    let f2 = f2.max(0.0);
    let q = p.q(g, 0.0);
    let h = 2.0 / (f2 + g * q);
    Ok(-h * PI * f2 * q / (1.0 + h * (q - g) * q))
}

/// Positive and negative roots of `H2(x, 0) = 1/2`.
pub fn solve_xbar(p: &HamiltonianParams, p3: f64) -> Result<(f64, f64)> {
    let f = |x: f64| p.h2(x, 0.0) - 0.5;
    let root = |lo: f64, hi: f64| -> Result<f64> {
        let (mut a, mut b) = (lo, hi);
        let (fa, fb) = (f(a), f(b));
        if fa * fb > 0.0 {
            return Err(Error::BracketFailure { lo, hi });
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (f(m) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        let mut x = 0.5 * (a + b);
        for _ in 0..5 {
            let d = p.q(x, 0.0);
            if d == 0.0 {
                break;
            }
            let nx = x - f(x) / d;
            if (lo..=hi).contains(&nx) {
                x = nx;
            }
        }
        Ok(x)
    };
    Ok((root(p3.max(0.0), 2.0)?, root(-2.0, 0.0)?))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EndInfo {
    pub g_limit: f64,
    pub limit: EndLimit,
    /// `pi f^2` at the limit point.
    pub energy_limit: f64,
    /// `|g - g_limit|` at the last grid node.
    pub tail_gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeafProfile {
    pub id: LeafId,
    pub s_grid: Vec<f64>,
    pub g: Vec<f64>,
    pub f: Vec<f64>,
    pub a: Vec<f64>,
    pub neg: EndInfo,
    pub pos: EndInfo,
}

impl LeafProfile {
    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    pub fn g_monotone(&self) -> bool {
        let inc = self.g.windows(2).all(|w| w[1] > w[0]);
        let dec = self.g.windows(2).all(|w| w[1] < w[0]);
        inc || dec
    }

    pub fn a_increasing(&self) -> bool {
        self.a.windows(2).all(|w| w[1] > w[0])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,g,f,a\n");
        for i in 0..self.len() {
            out.push_str(&format!("{},{},{},{}\n", self.s_grid[i], self.g[i], self.f[i], self.a[i]));
        }
        out
    }
}

/// Endpoints of `id` as `(g at s -> -inf, g at s -> +inf)` with their labels.
pub fn leaf_ends(model: &ValidatedModel, id: LeafId) -> Result<((f64, EndLimit), (f64, EndLimit))> {
    let (p1, p3) = (model.p1.location[0], model.p3.location[0]);
    let (xp, xm) = solve_xbar(&model.params, p3)?;
    use EndLimit::*;
    use OrbitLabel::*;
    Ok(match id {
        LeafId::DiskToP2 => ((xm, Removable), (0.0, Orbit(P2))),
        LeafId::CylP2P1 => ((p1, Orbit(P1)), (0.0, Orbit(P2))),
        LeafId::CylP3P1 => ((p1, Orbit(P1)), (p3, Orbit(P3))),
        LeafId::PlaneToP3 => ((xp, Removable), (p3, Orbit(P3))),
    })
}

/// Distance from the end value at which the integration stops.
pub const TAIL_GAP: f64 = 1e-10;

/// Solves the profile ODE from the interval midpoint in both directions and
/// resamples `(g, a)` on `n_s + 1` uniform nodes covering the range where
/// `g` is within `TAIL_GAP` of both limits.
pub fn integrate_profile(model: &ValidatedModel, id: LeafId, n_s: usize, s_span: f64, lim: &IntegratorLimits) -> Result<LeafProfile> {
    let p = &model.params;
    let ((g_neg, lab_neg), (g_pos, lab_pos)) = leaf_ends(model, id)?;
    if (g_pos - g_neg).abs() < 1e-6 {
        return Err(Error::InvalidInput("leaf interval is too short".into()));
    }
    let opts = OdeOptions { tol: lim.tol.min(1e-12), ..lim.ode_options() };
    let mut rhs = |_s: f64, y: &[f64; 2]| {
        let f2 = cap_f2(p, y[0]).max(0.0);
        [profile_rhs(p, y[0]).unwrap_or(0.0), PI * f2]
    };
    let mid = 0.5 * (g_neg + g_pos);
    let mut reach = |target: f64, dir: f64| -> Result<f64> {
        let mut hit = None;
        ode::integrate_observed(&mut rhs, 0.0, [mid, 0.0], dir * s_span, &opts, |_, _, s, y| {
            if (y[0] - target).abs() < TAIL_GAP {
                hit = Some(s);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        hit.ok_or(Error::SlowConvergence { s_span, gap: TAIL_GAP })
    };
    let s_hi = reach(g_pos, 1.0)?;
    let s_lo = reach(g_neg, -1.0)?;
    let ds = (s_hi - s_lo) / n_s as f64;
    let s_grid: Vec<f64> = (0..=n_s).map(|k| s_lo + ds * k as f64).collect();
    let k0 = (((0.0 - s_lo) / ds).round() as usize).min(n_s);
    let y0 = ode::integrate(&mut rhs, 0.0, [mid, 0.0], s_grid[k0], &opts)?;
    let fwd = ode::integrate_on_grid(&mut rhs, &s_grid[k0..], y0, &opts)?;
    let back_grid: Vec<f64> = s_grid[..=k0].iter().rev().copied().collect();
    let bwd = ode::integrate_on_grid(&mut rhs, &back_grid, y0, &opts)?;
    let mut states: Vec<[f64; 2]> = bwd.into_iter().rev().collect();
    states.extend(fwd.into_iter().skip(1));
    let g: Vec<f64> = states.iter().map(|y| y[0]).collect();
    let a: Vec<f64> = states.iter().map(|y| y[1]).collect();
    let f: Vec<f64> = g.iter().map(|&x| cap_f2(p, x).max(0.0).sqrt()).collect();
    let end = |g_lim: f64, limit: EndLimit, g_last: f64| EndInfo { g_limit: g_lim, limit, energy_limit: PI * cap_f2(p, g_lim).max(0.0), tail_gap: (g_last - g_lim).abs() };
    let neg = end(g_neg, lab_neg, g[0]);
    let pos = end(g_pos, lab_pos, g[n_s]);
    Ok(LeafProfile { id, s_grid, g, f, a, neg, pos })
}

/// Samples of `(a, u)` on the `s`-grid times `n_t` uniform `t` nodes.
#[derive(Clone, Debug)]
pub struct LeafMap {
    pub id: LeafId,
    pub s_grid: Vec<f64>,
    pub a: Vec<f64>,
    pub n_t: usize,
    /// `points[i][j] = u(s_i, t_j)`.
    pub points: Vec<Vec<State4>>,
    pub max_surface_defect: f64,
}

pub fn assemble_leaf(p: &HamiltonianParams, profile: &LeafProfile, n_t: usize) -> Result<LeafMap> {
    if n_t < 64 {
        return Err(Error::InvalidInput(format!("n_t = {n_t} < 64")));
    }
    let mut defect = 0.0_f64;
    let points: Vec<Vec<State4>> = (0..profile.len())
        .map(|i| {
            (0..n_t)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / n_t as f64;
                    let z = State4::new(profile.f[i] * th.cos(), profile.f[i] * th.sin(), profile.g[i], 0.0);
                    defect = defect.max((p.energy(&z) - 0.5).abs());
                    z
                })
                .collect()
        })
        .collect();
    Ok(LeafMap { id: profile.id, s_grid: profile.s_grid.clone(), a: profile.a.clone(), n_t, points, max_surface_defect: defect })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Strong,
    Fails,
    Indefinite,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectionCheck {
    pub pairings: Vec<f64>,
    pub verdict: Verdict,
    pub margin: f64,
}

/// `d lambda(eta, L_R eta)` at `n` nodes along a periodic orbit, with the
/// Lie derivative realised as the central difference of
/// `tau -> dphi^{-tau} eta(t + tau / T)`.
pub fn section_pairings(p: &HamiltonianParams, orbit: &ReebOrbit, section: &dyn Fn(f64) -> Vector4<f64>, n: usize, tol: &Tolerances) -> Result<SectionCheck> {
    let period = orbit.reeb_period * orbit.multiplicity as f64;
    let opts = OdeOptions::with_tol(1e-13);
    let d = tol.lie_step;
    let mut pairings = Vec::with_capacity(n);
    for j in 0..n {
        let t = j as f64 / n as f64;
        let pulled = |sign: f64| -> Result<Vector4<f64>> {
            let tt = t + sign * d / period;
            let x = orbit.point_at(tt * period);
            let (_, m) = model::flow_with_variational(p, &x, &Matrix4::identity(), -sign * d, TimeKind::Reeb, &opts)?;
            Ok(m * section(tt))
        };
        let lie = (pulled(1.0)? - pulled(-1.0)?) / (2.0 * d);
        pairings.push(dlambda0(&section(t), &lie));
    }
    let margin = pairings.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let pos = pairings.iter().all(|x| *x > 0.0);
    let neg = pairings.iter().all(|x| *x < 0.0);
    let verdict = if (pos || neg) && margin > tol.pairing_tol {
        Verdict::Strong
    } else if pos || neg || pairings.iter().any(|x| x.abs() <= tol.pairing_tol) && !(pairings.iter().any(|x| *x > tol.pairing_tol) && pairings.iter().any(|x| *x < -tol.pairing_tol)) {
        Verdict::Indefinite
    } else {
        Verdict::Fails
    };
    Ok(SectionCheck { pairings, verdict, margin })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Pos,
    Neg,
}

/// Index of the grid node used to read off the asymptotic direction: the
/// first node from the end where `|g - limit|` drops below `1e-3`.
fn probe_index(profile: &LeafProfile, end: End) -> usize {
    let n = profile.len();
    match end {
        End::Pos => (0..n).find(|&i| (profile.g[i] - profile.pos.g_limit).abs() < 1e-3).unwrap_or(n - 1),
        End::Neg => (0..n).rev().find(|&i| (profile.g[i] - profile.neg.g_limit).abs() < 1e-3).unwrap_or(0),
    }
}

/// `u_s` at grid node `i`, exact from the profile ODE.
fn u_s(p: &HamiltonianParams, profile: &LeafProfile, i: usize, t: f64) -> Vector4<f64> {
    let g = profile.g[i];
    let gp = profile_rhs(p, g).unwrap_or(0.0);
    let f = profile.f[i];
    let fp = if f > 0.0 { -p.q(g, 0.0) * gp / f } else { 0.0 };
    let th = 2.0 * PI * t;
    Vector4::new(fp * th.cos(), fp * th.sin(), gp, 0.0)
}

/// Strong-transverse-section test at a puncture: the radial direction of
/// the leaf near the end, carried to the limit orbit.
pub fn strong_section_check(model: &ValidatedModel, orbits: &SpecialOrbits, profile: &LeafProfile, end: End, n: usize, tol: &Tolerances) -> Result<SectionCheck> {
    let info = match end {
        End::Pos => profile.pos,
        End::Neg => profile.neg,
    };
    let EndLimit::Orbit(label) = info.limit else {
        return Err(Error::InvalidInput("removable end has no asymptotic orbit".into()));
    };
    let orbit = orbits.get(label);
    let p = &model.params;
    let i = probe_index(profile, end);
    let scale = u_s(p, profile, i, 0.0).norm();
    if scale < tol.wind_floor {
        return Err(Error::UnreliableWinding { norm: scale });
    }
    let section = |t: f64| {
        let x = orbit.point_at(t * orbit.reeb_period);
        let v = u_s(p, profile, i, t) / scale;
        v - p.reeb(&x) * lambda0(&x, &v)
    };
    section_pairings(p, orbit, &section, n, tol)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeafDiagnostics {
    pub cr_residual_max: f64,
    pub hofer_energy: f64,
    pub mass_neg_end: f64,
    /// `int u^* d lambda` by Simpson's rule over the grid.
    pub dlambda_area: f64,
    pub wind_infty_pos: i64,
    pub wind_infty_neg: Option<i64>,
    pub section_pairing_sign: String,
    pub min_transversality: f64,
    pub hausdorff_pos: f64,
    pub hausdorff_neg: f64,
    pub max_surface_defect: f64,
}

fn winding_at(p: &HamiltonianParams, profile: &LeafProfile, i: usize, n_t: usize, tol: &Tolerances) -> Result<i64> {
    let mut coords = Vec::with_capacity(n_t + 1);
    for j in 0..=n_t {
        let t = j as f64 / n_t as f64;
        let th = 2.0 * PI * t;
        let z = State4::new(profile.f[i] * th.cos(), profile.f[i] * th.sin(), profile.g[i], 0.0);
        let fr = ContactFrame::new(p, &z, tol.frame_tol)?;
        let v = fr.project(&u_s(p, profile, i, t));
        if v.norm() < tol.wind_floor {
            return Err(Error::UnreliableWinding { norm: v.norm() });
        }
        coords.push(fr.coords(&v));
    }
    let (turns, worst) = accumulated_turns(coords);
    if worst > PI / 2.0 || (turns - turns.round()).abs() > 0.1 {
        return Err(Error::RoundingUnsafe { raw: turns });
    }
    Ok(turns.round() as i64)
}

fn loop_distance(profile: &LeafProfile, i: usize, info: &EndInfo, orbits: &SpecialOrbits) -> f64 {
    let (f, g) = (profile.f[i], profile.g[i]);
    match info.limit {
        EndLimit::Orbit(label) => {
            let o = orbits.get(label);
            ((f - o.r).powi(2) + (g - o.z2_datum[0]).powi(2)).sqrt()
        }
        EndLimit::Removable => (f * f + (g - info.g_limit).powi(2)).sqrt(),
    }
}

/// CR residual `|pi u_s + J pi u_t| + |a_s - lambda(u_t)| + |a_t + lambda(u_s)|`
/// by centered differences on the sampled map.
pub fn cr_residual(p: &HamiltonianParams, leaf: &LeafMap, tol: &Tolerances) -> Result<(f64, f64)> {
    let n_s = leaf.s_grid.len();
    let n_t = leaf.n_t;
    let dt = 1.0 / n_t as f64;
    let mut worst = 0.0_f64;
    let mut transverse = f64::INFINITY;
    for i in 1..n_s - 1 {
        let ds2 = leaf.s_grid[i + 1] - leaf.s_grid[i - 1];
        let a_s = (leaf.a[i + 1] - leaf.a[i - 1]) / ds2;
        for j in 0..n_t {
            let z = leaf.points[i][j];
            let us = (leaf.points[i + 1][j] - leaf.points[i - 1][j]) / ds2;
            let ut = (leaf.points[i][(j + 1) % n_t] - leaf.points[i][(j + n_t - 1) % n_t]) / (2.0 * dt);
            let fr = ContactFrame::new(p, &z, tol.frame_tol)?;
            let (pus, put) = (fr.project(&us), fr.project(&ut));
            let r = (pus + fr.apply_j(&put)).norm() + (a_s - lambda0(&z, &ut)).abs() + lambda0(&z, &us).abs();
            worst = worst.max(r);
            transverse = transverse.min(pus.norm() + put.norm());
        }
    }
    Ok((worst, transverse))
}

pub fn leaf_diagnostics(model: &ValidatedModel, orbits: &SpecialOrbits, profile: &LeafProfile, n_t: usize, tol: &Tolerances) -> Result<LeafDiagnostics> {
    let p = &model.params;
    let leaf = assemble_leaf(p, profile, n_t)?;
    let (cr, transverse) = cr_residual(p, &leaf, tol)?;
    let n = profile.len() - 1;
    let hofer_energy = PI * profile.f[n] * profile.f[n];
    let mass_neg_end = PI * profile.f[0] * profile.f[0];
    // d lambda(u_s, u_t) = d/ds (pi f^2) = -2 pi Q g'
    let integrand: Vec<f64> = profile.g.iter().map(|&g| -2.0 * PI * p.q(g, 0.0) * profile_rhs(p, g).unwrap_or(0.0)).collect();
    let ds = profile.s_grid[1] - profile.s_grid[0];
    let dlambda_area = simpson(&integrand, ds);
    let wind_infty_pos = winding_at(p, profile, probe_index(profile, End::Pos), n_t, tol)?;
    let wind_infty_neg = match profile.neg.limit {
        EndLimit::Orbit(_) => Some(winding_at(p, profile, probe_index(profile, End::Neg), n_t, tol)?),
        EndLimit::Removable => None,
    };
    let sc = strong_section_check(model, orbits, profile, End::Pos, 64, tol)?;
    let section_pairing_sign = match (sc.verdict, sc.pairings[0] > 0.0) {
        (Verdict::Strong, true) => "+",
        (Verdict::Strong, false) => "-",
        _ => "indefinite",
    }
    .to_string();
    Ok(LeafDiagnostics {
        cr_residual_max: cr,
        hofer_energy,
        mass_neg_end,
        dlambda_area,
        wind_infty_pos,
        wind_infty_neg,
        section_pairing_sign,
        min_transversality: transverse,
        hausdorff_pos: loop_distance(profile, n, &profile.pos, orbits),
        hausdorff_neg: loop_distance(profile, 0, &profile.neg, orbits),
        max_surface_defect: leaf.max_surface_defect,
    })
}

/// Composite Simpson rule on uniform samples (trapezoid on a leftover interval).
pub fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    let m = n - n % 2;
    let mut s = y[0] + y[m];
    for k in 1..m {
        s += if k % 2 == 1 { 4.0 * y[k] } else { 2.0 * y[k] };
    }
    let mut total = s * h / 3.0;
    if m < n {
        total += 0.5 * h * (y[m] + y[n]);
    }
    total
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FredholmArithmetic {
    pub mu_pos: i64,
    pub mu_neg: i64,
    pub euler_characteristic: i64,
    pub punctures: i64,
    pub index: i64,
    pub wind_infty: i64,
    pub wind_pi: i64,
}

/// `ind = mu(pos) - mu(neg) - chi + #Gamma` and `wind_pi = wind_infty - chi + #Gamma`
/// for a sphere with the given punctures.
pub fn fredholm(mu_pos: i64, mu_neg: Option<i64>, wind_pos: i64, wind_neg: Option<i64>) -> FredholmArithmetic {
    let chi = 2;
    let punctures = 1 + mu_neg.is_some() as i64;
    let mu_neg_v = mu_neg.unwrap_or(0);
    let wind_infty = wind_pos - wind_neg.unwrap_or(0);
    FredholmArithmetic {
        mu_pos,
        mu_neg: mu_neg_v,
        euler_characteristic: chi,
        punctures,
        index: mu_pos - mu_neg_v - chi + punctures,
        wind_infty,
        wind_pi: wind_infty - chi + punctures,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtlasLeaf {
    pub id: LeafId,
    pub role: String,
    pub g_range: [f64; 2],
    pub ends: [EndLimit; 2],
    pub monotone_g: bool,
    pub increasing_a: bool,
    pub diagnostics: LeafDiagnostics,
    pub fredholm: FredholmArithmetic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoliationAtlas {
    pub preset: String,
    pub epsilon: f64,
    pub binding: SpecialOrbits,
    pub binding_indices: [i64; 3],
    pub leaves: Vec<AtlasLeaf>,
    /// Leaves of the foliation that the rotationally symmetric ansatz does not reach.
    pub not_constructed: Vec<String>,
    /// Separatrix loops of the saddle, drawn as the conjectural shadow of `U1 u U2`.
    pub separatrix_shadow: Vec<Vec<[f64; 2]>>,
    pub separatrix_tag: String,
}

pub const DEFAULT_NS: usize = 2000;
pub const DEFAULT_S_SPAN: f64 = 200.0;

pub fn foliation_atlas(model: &ValidatedModel, n_s: usize, n_t: usize, tol: &Tolerances, lim: &IntegratorLimits) -> Result<(FoliationAtlas, Vec<LeafProfile>)> {
    let orbits = special_orbits(model)?;
    let opts = OdeOptions::with_tol(1e-12);
    let mut mu = [0i64; 3];
    for (k, orb) in [&orbits.p1, &orbits.p2, &orbits.p3].into_iter().enumerate() {
        mu[k] = special_orbit_index(model, orb, 256, tol, &opts)?.integrated.mu_global;
    }
    let mu_of = |l: OrbitLabel| match l {
        OrbitLabel::P1 => mu[0],
        OrbitLabel::P3 => mu[2],
        _ => mu[1],
    };
    let mut leaves = Vec::new();
    let mut profiles = Vec::new();
    for id in LeafId::ALL {
        let prof = integrate_profile(model, id, n_s, DEFAULT_S_SPAN, lim)?;
        let diag = leaf_diagnostics(model, &orbits, &prof, n_t, tol)?;
        let EndLimit::Orbit(pos_label) = prof.pos.limit else {
            return Err(Error::InvalidInput("positive end must be an orbit".into()));
        };
        let mu_neg = match prof.neg.limit {
            EndLimit::Orbit(l) => Some(mu_of(l)),
            EndLimit::Removable => None,
        };
        let fred = fredholm(mu_of(pos_label), mu_neg, diag.wind_infty_pos, diag.wind_infty_neg);
        let (lo, hi) = (prof.neg.g_limit.min(prof.pos.g_limit), prof.neg.g_limit.max(prof.pos.g_limit));
        leaves.push(AtlasLeaf {
            id,
            role: id.role().to_string(),
            g_range: [lo, hi],
            ends: [prof.neg.limit, prof.pos.limit],
            monotone_g: prof.g_monotone(),
            increasing_a: prof.a_increasing(),
            diagnostics: diag,
            fredholm: fred,
        });
        profiles.push(prof);
    }
    let shadow = match crate::orbits::separatrix_and_homoclinics(model, 1e-6, 50.0, crate::orbits::LaunchMode::Unstable, lim) {
        Ok(rep) => rep.branches.iter().map(|b| b.samples.clone()).collect(),
        Err(_) => Vec::new(),
    };
    Ok((
        FoliationAtlas {
            preset: model.params.preset_name.clone(),
            epsilon: model.params.epsilon,
            binding: orbits,
            binding_indices: mu,
            leaves,
            not_constructed: vec!["U1".into(), "U2".into(), "generic F_tau".into(), "generic C_tau".into()],
            separatrix_shadow: shadow,
            separatrix_tag: "conjectural".into(),
        },
        profiles,
    ))
}

/// Orbit-frame section `eta` for quadrant tests, from the leaf direction at the end.
pub fn end_direction(profile: &LeafProfile, p: &HamiltonianParams, end: End) -> Vector2<f64> {
    let i = probe_index(profile, end);
    let v = u_s(p, profile, i, 0.0);
    Vector2::new(v[2], v[3])
}
