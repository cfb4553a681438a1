//! Critical points of `H2`, the three special Reeb orbits, planar periods and
//! areas, the resonant-orbit scan, separatrix loops and homoclinics of `P2`.

use std::f64::consts::PI;
use std::ops::ControlFlow;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use serde::{Deserialize, Serialize};

use crate::config::{IntegratorLimits, Tolerances};
use crate::error::{Error, Result};
use crate::model::{lambda0, HamiltonianParams, State4, TimeKind, Trajectory};
use crate::ode::{self, OdeOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HessianSignature {
    Min,
    Max,
    Saddle,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowType {
    Elliptic,
    Hyperbolic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: [f64; 2],
    pub h2_value: f64,
    pub hessian_signature: HessianSignature,
    pub flow_type: FlowType,
    /// Entries of the reduced linearization `[[0, k1], [k2, 0]]` of the Reeb
    /// flow along the product orbit through this point.
    pub k1: f64,
    pub k2: f64,
}

impl CriticalPoint {
    fn classify(p: &HamiltonianParams, x: f64, y: f64) -> Self {
        let hess = p.h2_hessian(x, y);
        let det = hess.determinant();
        let hessian_signature = if det.abs() < 1e-14 {
            HessianSignature::Degenerate
        } else if det < 0.0 {
            HessianSignature::Saddle
        } else if hess[(0, 0)] > 0.0 {
            HessianSignature::Min
        } else {
            HessianSignature::Max
        };
        let h2_value = p.h2(x, y);
        let r2 = 1.0 - 2.0 * h2_value;
        let h = 2.0 / r2;
        let k1 = -h * hess[(1, 1)];
        let k2 = h * hess[(0, 0)];
        let flow_type = if k1 * k2 > 0.0 { FlowType::Hyperbolic } else { FlowType::Elliptic };
        Self { location: [x, y], h2_value, hessian_signature, flow_type, k1, k2 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalReport {
    pub points: Vec<CriticalPoint>,
    /// Set when the structure differs from three axis critical points.
    pub mismatch: Option<String>,
}

fn newton_polish_1d(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut x: f64) -> f64 {
    for _ in 0..60 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let step = f(x) / d;
        x -= step;
        if step.abs() <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Critical points of `H2`: axis roots of `Q(x, 0)` in closed form, then a
/// 41x41 Newton grid over `[-4 eps, 4 eps]^2` to catch off-axis points.
pub fn find_critical_points(p: &HamiltonianParams, tol: &Tolerances) -> CriticalReport {
    let e = p.epsilon;
    let mut xs = vec![0.0];
    // Q(x,0) = x (2x^2 + 3 eps a x + 2 eps^2 c)
    let (qa, qb, qc) = (2.0, 3.0 * e * p.a, 2.0 * e * e * p.c);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let r1 = -(qb + qb.signum() * sq) / (2.0 * qa);
        let r2 = if r1 != 0.0 { qc / (qa * r1) } else { 0.0 };
        for r in [r1, r2] {
            let polished = newton_polish_1d(|x| p.q(x, 0.0), |x| p.h2_hessian(x, 0.0)[(0, 0)], r);
            xs.push(polished);
        }
    }
    let mut found: Vec<[f64; 2]> = Vec::new();
    let push = |pt: [f64; 2], found: &mut Vec<[f64; 2]>| {
        if found.iter().all(|q| (q[0] - pt[0]).hypot(q[1] - pt[1]) > tol.merge_tol) {
            found.push(pt);
        }
    };
    for x in xs {
        push([x, 0.0], &mut found);
    }
    let n = 41;
    for i in 0..n {
        for j in 0..n {
            let mut z = Vector2::new(-4.0 * e + 8.0 * e * i as f64 / (n - 1) as f64, -4.0 * e + 8.0 * e * j as f64 / (n - 1) as f64);
            let mut ok = false;
            for _ in 0..60 {
                let g = p.h2_gradient(z[0], z[1]);
                if g.norm() <= tol.crit_tol {
                    ok = true;
                    break;
                }
                let Some(inv) = p.h2_hessian(z[0], z[1]).try_inverse() else { break };
                z -= inv * g;
                if !z.iter().all(|v| v.is_finite()) || z.norm() > 16.0 * e + 4.0 {
                    break;
                }
            }
            if ok {
                push([z[0], z[1]], &mut found);
            }
        }
    }
    found.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let points: Vec<CriticalPoint> = found.iter().map(|q| CriticalPoint::classify(p, q[0], q[1])).collect();
    let mismatch = if points.len() != 3 {
        Some(format!("found {} distinct critical points, expected 3", points.len()))
    } else if points.iter().any(|c| c.location[1].abs() > tol.merge_tol) {
        Some("critical point off the x2-axis".to_string())
    } else {
        None
    };
    CriticalReport { points, mismatch }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitLabel {
    P1,
    P2,
    P3,
    Resonant,
    HomoclinicLimit,
}

impl OrbitLabel {
    pub fn name(self) -> &'static str {
        match self {
            OrbitLabel::P1 => "P1",
            OrbitLabel::P2 => "P2",
            OrbitLabel::P3 => "P3",
            OrbitLabel::Resonant => "resonant",
            OrbitLabel::HomoclinicLimit => "homoclinic-limit",
        }
    }
}

impl std::str::FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P1" | "p1" => Ok(Self::P1),
            "P2" | "p2" => Ok(Self::P2),
            "P3" | "p3" => Ok(Self::P3),
            other => Err(Error::InvalidInput(format!("unknown orbit '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReebOrbit {
    pub label: OrbitLabel,
    pub z2_datum: [f64; 2],
    /// Radius of the `(x1, y1)`-circle.
    pub r: f64,
    pub reeb_period: f64,
    pub m1: u32,
    pub m2: u32,
    pub multiplicity: u32,
}

impl ReebOrbit {
    fn special(p: &HamiltonianParams, label: OrbitLabel, x: f64) -> Self {
        let r = (1.0 - 2.0 * p.h2(x, 0.0)).sqrt();
        Self { label, z2_datum: [x, 0.0], r, reeb_period: PI * r * r, m1: 1, m2: 0, multiplicity: 1 }
    }

    pub fn initial_point(&self) -> State4 {
        State4::new(self.r, 0.0, self.z2_datum[0], self.z2_datum[1])
    }

    /// Closed-form point at Reeb time `t` (special orbits only).
    pub fn point_at(&self, t: f64) -> State4 {
        let w = 2.0 / (self.r * self.r);
        State4::new(self.r * (w * t).cos(), self.r * (w * t).sin(), self.z2_datum[0], self.z2_datum[1])
    }

    /// `n + 1` closed-form samples over one period; the last repeats the first.
    pub fn loop_samples(&self, n: usize) -> Vec<State4> {
        let per = self.reeb_period * self.multiplicity as f64;
        let mut v: Vec<State4> = (0..=n).map(|j| self.point_at(per * j as f64 / n as f64)).collect();
        v[n] = v[0];
        v
    }
}

/// Critical data that passed the structural checks, with `p2 = 0 < p1 < p3`.
#[derive(Clone, Debug)]
pub struct ValidatedModel {
    pub params: HamiltonianParams,
    pub critical: CriticalReport,
    pub p1: CriticalPoint,
    pub p2: CriticalPoint,
    pub p3: CriticalPoint,
}

impl ValidatedModel {
    /// Runs the structure validation. Fails when the critical points do not
    /// reproduce the k-sign pattern (+,-), (+,+), (-,+) for P1, P2, P3.
    pub fn new(p: &HamiltonianParams, tol: &Tolerances) -> Result<Self> {
        let critical = find_critical_points(p, tol);
        if let Some(m) = &critical.mismatch {
            return Err(Error::StructureMismatch(m.clone()));
        }
        let pts = &critical.points;
        let origin = pts
            .iter()
            .find(|c| c.location[0].abs() < tol.merge_tol)
            .cloned()
            .ok_or_else(|| Error::StructureMismatch("origin is not critical".into()))?;
        let mut positive: Vec<CriticalPoint> = pts.iter().filter(|c| c.location[0] > tol.merge_tol).cloned().collect();
        if positive.len() != 2 {
            return Err(Error::StructureMismatch(format!("{} critical points on the positive x2-axis, expected 2", positive.len())));
        }
        positive.sort_by(|a, b| a.location[0].total_cmp(&b.location[0]));
        let (p1, p3) = (positive[0].clone(), positive[1].clone());
        let pattern = |c: &CriticalPoint, s1: f64, s2: f64| c.k1 * s1 > 0.0 && c.k2 * s2 > 0.0;
        let mut bad = Vec::new();
        if !pattern(&p1, 1.0, -1.0) {
            bad.push(format!("P1 k-signs ({:+.3e}, {:+.3e}) expected (+,-)", p1.k1, p1.k2));
        }
        if !pattern(&origin, 1.0, 1.0) {
            bad.push(format!("P2 k-signs ({:+.3e}, {:+.3e}) expected (+,+): origin is {:?}", origin.k1, origin.k2, origin.flow_type));
        }
        if !pattern(&p3, -1.0, 1.0) {
            bad.push(format!("P3 k-signs ({:+.3e}, {:+.3e}) expected (-,+)", p3.k1, p3.k2));
        }
        if !bad.is_empty() {
            return Err(Error::StructureMismatch(bad.join("; ")));
        }
        Ok(Self { params: p.clone(), critical, p1, p2: origin, p3 })
    }

    pub fn critical_point(&self, label: OrbitLabel) -> &CriticalPoint {
        match label {
            OrbitLabel::P1 => &self.p1,
            OrbitLabel::P3 => &self.p3,
            _ => &self.p2,
        }
    }

    /// `H2(p3,0) < 0 < H2(p1,0)`.
    pub fn ordering_chain_holds(&self) -> bool {
        self.p3.h2_value < 0.0 && 0.0 < self.p1.h2_value
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecialOrbits {
    pub p1: ReebOrbit,
    pub p2: ReebOrbit,
    pub p3: ReebOrbit,
}

impl SpecialOrbits {
    pub fn get(&self, label: OrbitLabel) -> &ReebOrbit {
        match label {
            OrbitLabel::P1 => &self.p1,
            OrbitLabel::P3 => &self.p3,
            _ => &self.p2,
        }
    }

    pub fn periods(&self) -> [f64; 3] {
        [self.p1.reeb_period, self.p2.reeb_period, self.p3.reeb_period]
    }

    /// `(T1 < T2, T2 < T3, T3 < 2 T1)`.
    pub fn inequalities(&self) -> [bool; 3] {
        let [t1, t2, t3] = self.periods();
        [t1 < t2, t2 < t3, t3 < 2.0 * t1]
    }
}

/// Builds `P1, P2, P3` with periods `pi r_i^2` and checks `T1 < T2 < T3 < 2 T1`.
pub fn special_orbits_unchecked(model: &ValidatedModel) -> SpecialOrbits {
    let p = &model.params;
    SpecialOrbits {
        p1: ReebOrbit::special(p, OrbitLabel::P1, model.p1.location[0]),
        p2: ReebOrbit::special(p, OrbitLabel::P2, 0.0),
        p3: ReebOrbit::special(p, OrbitLabel::P3, model.p3.location[0]),
    }
}

pub fn special_orbits(model: &ValidatedModel) -> Result<SpecialOrbits> {
    let orbits = special_orbits_unchecked(model);
    let [t1, t2, t3] = orbits.periods();
    let names = ["T1 < T2", "T2 < T3", "T3 < 2 T1"];
    for (ok, name) in orbits.inequalities().iter().zip(names) {
        if !ok {
            return Err(Error::HypothesisFailure(format!("{name} violated (T1={t1}, T2={t2}, T3={t3})")));
        }
    }
    Ok(orbits)
}

/// Periodic 8th-order central difference weights for offsets 1..4.
const D8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// `int lambda_0` over a closed loop sampled uniformly in its parameter. The
/// last sample must repeat the first (within `orbit_tol`).
pub fn orbit_action(samples: &[State4], orbit_tol: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput("loop needs at least two samples".into()));
    }
    let gap = (samples[samples.len() - 1] - samples[0]).norm();
    if gap > orbit_tol {
        return Err(Error::NotClosed { gap });
    }
    let pts = &samples[..samples.len() - 1];
    let n = pts.len();
    if n < 9 {
        return Ok(0.0);
    }
    let h = 1.0 / n as f64;
    let mut total = 0.0;
    for j in 0..n {
        let mut d = State4::zeros();
        for (k, w) in D8.iter().enumerate() {
            let off = k + 1;
            d += (pts[(j + off) % n] - pts[(j + n - off) % n]) * *w;
        }
        total += lambda0(&pts[j], &(d / h)) * h;
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanarLoop {
    pub level: f64,
    pub seed: [f64; 2],
    /// Hamiltonian-time period of the `z2` loop.
    pub tau: f64,
    /// Signed area `(1/2) int x dy - y dx`.
    pub area: f64,
    /// Uniform-in-time samples; the last repeats the first.
    pub samples: Vec<[f64; 2]>,
}

fn planar_rhs(p: &HamiltonianParams) -> impl FnMut(f64, &[f64; 3]) -> [f64; 3] + '_ {
    move |_t, y| {
        let (q, pp) = (p.q(y[0], y[1]), p.p(y[0], y[1]));
        [-pp, q, 0.5 * (y[0] * q + y[1] * pp)]
    }
}

/// Period and signed area of the level-`c` loop through `seed`.
pub fn planar_period_and_area(
    p: &HamiltonianParams,
    c: f64,
    seed: [f64; 2],
    n_samples: usize,
    tol: &Tolerances,
    lim: &IntegratorLimits,
) -> Result<PlanarLoop> {
    let lvl = p.h2(seed[0], seed[1]);
    if (lvl - c).abs() > tol.level_tol {
        return Err(Error::InvalidInput(format!("seed level {lvl} differs from {c}")));
    }
    let v0 = p.planar_field(seed[0], seed[1]);
    if v0.norm() < 1e-10 {
        return Err(Error::InvalidInput("seed is a critical point".into()));
    }
    let opts = OdeOptions { tol: lim.tol.min(1e-12), ..lim.ode_options() };
    let mut rhs = planar_rhs(p);
    let section = |y: &[f64; 3]| (y[0] - seed[0]) * v0[0] + (y[1] - seed[1]) * v0[1];
    let mut max_dist = 0.0_f64;
    let mut hit: Option<(f64, [f64; 3], f64)> = None;
    let mut rhs_evt = planar_rhs(p);
    ode::integrate_observed(&mut rhs, 0.0, [seed[0], seed[1], 0.0], lim.no_return_horizon, &opts, |ta, ya, tb, yb| {
        let dist = (yb[0] - seed[0]).hypot(yb[1] - seed[1]);
        max_dist = max_dist.max(dist);
        let (sa, sb) = (section(ya), section(yb));
        if ta > 0.0 && sa < 0.0 && sb >= 0.0 && dist < 0.25 * max_dist {
            hit = Some((ta, *ya, tb));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let Some((ta, ya, tb)) = hit else {
        return Err(Error::NoReturn { elapsed: lim.no_return_horizon });
    };
    let (tau, y_end) = ode::locate_event(&mut rhs_evt, ta, &ya, tb, section);
    let area = y_end[2];
    let grid: Vec<f64> = (0..=n_samples).map(|j| tau * j as f64 / n_samples as f64).collect();
    let states = ode::integrate_on_grid(&mut rhs_evt, &grid, [seed[0], seed[1], 0.0], &opts)?;
    let mut samples: Vec<[f64; 2]> = states.iter().map(|y| [y[0], y[1]]).collect();
    samples[n_samples] = samples[0];
    Ok(PlanarLoop { level: c, seed, tau, area, samples })
}

/// Roots of `g` on `[lo, hi]` found by sign-change scanning plus bisection.
fn scan_roots(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut xa = lo;
    let mut ga = g(xa);
    for i in 1..=n {
        let xb = lo + (hi - lo) * i as f64 / n as f64;
        let gb = g(xb);
        if ga == 0.0 {
            roots.push(xa);
        } else if ga * gb < 0.0 {
            let (mut a, mut b, mut fa) = (xa, xb, ga);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = g(m);
                if fm == 0.0 || (b - a) < 1e-16 {
                    a = m;
                    b = m;
                    break;
                }
                if (fm > 0.0) == (fa > 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        xa = xb;
        ga = gb;
    }
    roots
}

/// Component seeds of the level set `H2 = c`: real roots on both axes.
pub fn level_seeds(p: &HamiltonianParams, c: f64) -> Vec<[f64; 2]> {
    let reach = 4.0 * p.epsilon + (2.0 * c.abs()).sqrt().sqrt() + 2.0;
    let mut seeds: Vec<[f64; 2]> = scan_roots(|x| p.h2(x, 0.0) - c, -reach, reach, 4000).into_iter().map(|x| [x, 0.0]).collect();
    seeds.extend(scan_roots(|y| p.h2(0.0, y) - c, -reach, reach, 4000).into_iter().map(|y| [0.0, y]));
    seeds
}

fn near_polyline(pt: &[f64; 2], poly: &[[f64; 2]], tol: f64) -> bool {
    poly.windows(2).any(|w| {
        let (a, b) = (Vector2::new(w[0][0], w[0][1]), Vector2::new(w[1][0], w[1][1]));
        let q = Vector2::new(pt[0], pt[1]);
        let ab = b - a;
        let s = if ab.norm_squared() > 0.0 { ((q - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0) } else { 0.0 };
        (a + ab * s - q).norm() < tol
    })
}

/// All regular loops of the level set `H2 = c`, one per component.
pub fn level_components(p: &HamiltonianParams, c: f64, n_samples: usize, tol: &Tolerances, lim: &IntegratorLimits) -> Result<Vec<PlanarLoop>> {
    let mut loops: Vec<PlanarLoop> = Vec::new();
    for seed in level_seeds(p, c) {
        if p.h2_gradient(seed[0], seed[1]).norm() < 1e-7 {
            continue;
        }
        let polished = polish_onto_level(p, seed, c);
        if loops.iter().any(|l| near_polyline(&polished, &l.samples, 1e-4 * (1.0 + l.tau.min(1e3)))) {
            continue;
        }
        loops.push(planar_period_and_area(p, c, polished, n_samples, tol, lim)?);
    }
    Ok(loops)
}

fn polish_onto_level(p: &HamiltonianParams, seed: [f64; 2], c: f64) -> [f64; 2] {
    let mut z = Vector2::new(seed[0], seed[1]);
    for _ in 0..20 {
        let g = p.h2_gradient(z[0], z[1]);
        let r = p.h2(z[0], z[1]) - c;
        if r == 0.0 || g.norm_squared() == 0.0 {
            break;
        }
        z -= g * (r / g.norm_squared());
    }
    [z[0], z[1]]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonantCandidate {
    pub level: f64,
    pub seed: [f64; 2],
    pub tau: f64,
    pub area: f64,
    pub m1: u32,
    pub m2: u32,
    pub action: f64,
}

impl ResonantCandidate {
    /// The product loop with `m1` turns of the `z1` circle against `m2` turns
    /// of the planar loop, parametrised uniformly over `[0, 1]`.
    pub fn product_loop(&self, p: &HamiltonianParams, n: usize, tol: &Tolerances, lim: &IntegratorLimits) -> Result<Vec<State4>> {
        let planar = planar_period_and_area(p, self.level, self.seed, n, tol, lim)?;
        let r = (1.0 - 2.0 * self.level).sqrt();
        let m1 = self.m1 as f64;
        let m2 = self.m2 as usize;
        let mut out = Vec::with_capacity(n + 1);
        // resample the planar loop m2 times over the unit interval
        let period_samples = &planar.samples[..n];
        for j in 0..=n {
            let s = j as f64 / n as f64;
            let idx = (j * m2) % n;
            let z2 = period_samples[idx];
            let ang = 2.0 * PI * m1 * s;
            out.push(State4::new(r * ang.cos(), r * ang.sin(), z2[0], z2[1]));
        }
        out[n] = out[0];
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScannedLoop {
    pub level: f64,
    pub seed: [f64; 2],
    pub tau: f64,
    pub area: f64,
    pub min_action: f64,
    pub claim: ClaimCheck,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub action_bound: f64,
    pub candidates: Vec<ResonantCandidate>,
    pub scanned: Vec<ScannedLoop>,
}

/// Uniform grid of `n` levels in `(lo, hi]`.
pub fn level_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

pub const MAX_M2: u32 = 8;

/// For every regular loop at every level, the least action of a closed Reeb
/// orbit projecting to it, `m1 pi (1 - 2C) + m2 area` with `m1 / m2` the
/// smallest admissible ratio not below `tau / 2 pi`. Candidates at or below
/// `action_bound` are returned.
pub fn resonant_orbit_scan(model: &ValidatedModel, action_bound: f64, levels: &[f64], tol: &Tolerances, lim: &IntegratorLimits) -> Result<ScanReport> {
    let p = &model.params;
    let mut candidates = Vec::new();
    let mut scanned = Vec::new();
    for &c in levels {
        if c > model.p1.h2_value + 1e-15 {
            continue;
        }
        for lp in level_components(p, c, 256, tol, lim)? {
            let ratio = lp.tau / (2.0 * PI);
            let circle = PI * (1.0 - 2.0 * c);
            let mut best: Option<ResonantCandidate> = None;
            for m2 in 1..=MAX_M2 {
                let m1 = ((m2 as f64 * ratio) - tol.resonance_tol * m2 as f64).ceil().max(1.0) as u32;
                let action = m1 as f64 * circle + m2 as f64 * lp.area;
                if best.as_ref().is_none_or(|b| action < b.action) {
                    best = Some(ResonantCandidate { level: c, seed: lp.seed, tau: lp.tau, area: lp.area, m1, m2, action });
                }
            }
            let best = best.expect("m2 range is non-empty");
            let claim = claim1_check(p, &LoopSamples::Planar { samples: &lp.samples, period: lp.tau }, tol.claim_tol)?;
            scanned.push(ScannedLoop { level: c, seed: lp.seed, tau: lp.tau, area: lp.area, min_action: best.action, claim });
            if best.action <= action_bound {
                candidates.push(best);
            }
        }
    }
    Ok(ScanReport { action_bound, candidates, scanned })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub h_sup: f64,
    pub period: f64,
    pub product: f64,
    pub pass: bool,
}

pub enum LoopSamples<'a> {
    /// Closed loop of the planar `H2` flow.
    Planar { samples: &'a [[f64; 2]], period: f64 },
    /// Closed loop of the full Hamiltonian flow in R^4.
    Full { samples: &'a [State4], period: f64 },
}

fn sym_norm2(m: &Matrix2<f64>) -> f64 {
    SymmetricEigen::new(*m).eigenvalues.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
}

/// `sup |d^2 H| * T >= 2 pi` along a nonconstant periodic Hamiltonian loop.
pub fn claim1_check(p: &HamiltonianParams, lp: &LoopSamples<'_>, claim_tol: f64) -> Result<ClaimCheck> {
    let (h_sup, period, spread) = match lp {
        LoopSamples::Planar { samples, period } => {
            let h = samples.iter().map(|z| sym_norm2(&p.h2_hessian(z[0], z[1]))).fold(0.0, f64::max);
            let spread = samples.iter().map(|z| (z[0] - samples[0][0]).hypot(z[1] - samples[0][1])).fold(0.0, f64::max);
            (h, *period, spread)
        }
        LoopSamples::Full { samples, period } => {
            let h = samples
                .iter()
                .map(|z| {
                    let hess = p.hamiltonian_eval(z).hessian;
                    SymmetricEigen::new(hess).eigenvalues.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
                })
                .fold(0.0, f64::max);
            let spread = samples.iter().map(|z| (z - samples[0]).norm()).fold(0.0, f64::max);
            (h, *period, spread)
        }
    };
    if spread < 1e-12 || !(period > 0.0) {
        return Err(Error::InvalidInput("Claim I needs a nonconstant periodic loop".into()));
    }
    let product = h_sup * period;
    Ok(ClaimCheck { h_sup, period, product, pass: product >= 2.0 * PI - claim_tol })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchId {
    Gamma1,
    Gamma2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaunchMode {
    /// Forward time along the unstable eigendirection.
    Unstable,
    /// Backward time along the stable eigendirection.
    StableReversed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatrixBranch {
    pub branch_id: BranchId,
    pub samples: Vec<[f64; 2]>,
    pub launch_vector: [f64; 2],
    pub enclosed_area: f64,
    /// Positive `x2`-axis crossing away from the origin.
    pub axis_crossing: f64,
    pub return_time: f64,
}

#[derive(Clone, Debug)]
pub struct Homoclinic {
    pub branch_id: BranchId,
    /// Reeb-time trajectory from `-horizon` to `+horizon` through the axis crossing.
    pub trajectory: Trajectory,
    /// Distance of the two ends to `P2` as a set.
    pub end_distances: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct SeparatrixReport {
    pub branches: [SeparatrixBranch; 2],
    pub homoclinics: [Homoclinic; 2],
    pub max_level_defect: f64,
    pub rate: f64,
}

/// Distance from a point of R^4 to the orbit `P2 = {|z1| = 1, z2 = 0}`.
pub fn distance_to_p2(z: &State4) -> f64 {
    let r1 = z[0].hypot(z[1]);
    ((r1 - 1.0).powi(2) + z[2] * z[2] + z[3] * z[3]).sqrt()
}

fn trace_branch(p: &HamiltonianParams, launch: Vector2<f64>, offset: f64, time_sign: f64, lim: &IntegratorLimits) -> Result<(Vec<[f64; 2]>, f64, f64)> {
    let opts = OdeOptions { tol: lim.tol.min(1e-12), ..lim.ode_options() };
    let mut rhs = |_t: f64, y: &[f64; 2]| {
        let v = p.planar_field(y[0], y[1]);
        [time_sign * v[0], time_sign * v[1]]
    };
    let start = launch * offset;
    let mut samples = vec![[start[0], start[1]]];
    let mut left = false;
    let mut crossing: Option<(f64, [f64; 2], f64)> = None;
    let mut back_at = None;
    let mut prev_r = offset;
    ode::integrate_observed(&mut rhs, 0.0, [start[0], start[1]], lim.no_return_horizon, &opts, |ta, ya, tb, yb| {
        samples.push(*yb);
        let r = yb[0].hypot(yb[1]);
        // closest approach to the saddle on the way back
        let receding = left && r < 100.0 * offset && r > prev_r;
        prev_r = r;
        if r > 100.0 * offset {
            left = true;
        }
        if crossing.is_none() && left && ya[1] * yb[1] <= 0.0 && yb[0] > 10.0 * offset && ya[1] != 0.0 {
            crossing = Some((ta, *ya, tb));
        }
        if receding {
            samples.pop();
            back_at = Some(ta);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let Some(t_back) = back_at else {
        return Err(Error::NoReturn { elapsed: lim.no_return_horizon });
    };
    let Some((ta, ya, tb)) = crossing else {
        return Err(Error::NoReturn { elapsed: t_back });
    };
    let (_, yc) = ode::locate_event(&mut rhs, ta, &ya, tb, |y| y[1]);
    Ok((samples, yc[0], t_back))
}

/// Traces both separatrix loops of the saddle at the origin and the two
/// homoclinic Reeb trajectories they generate together with the unit
/// `z1`-circle.
pub fn separatrix_and_homoclinics(model: &ValidatedModel, launch_offset: f64, horizon: f64, mode: LaunchMode, lim: &IntegratorLimits) -> Result<SeparatrixReport> {
    let p = &model.params;
    // planar linearization [[0, -P_y], [Q_x, 0]] at the origin
    let hess = p.h2_hessian(0.0, 0.0);
    let (py, qx) = (hess[(1, 1)], hess[(0, 0)]);
    let prod = -py * qx;
    if !(prod > 0.0) {
        return Err(Error::NotHyperbolic { trace: 2.0 * (-prod).max(0.0).sqrt().cos() });
    }
    let rate = prod.sqrt();
    // eigenvector of [[0,-py],[qx,0]] for eigenvalue +rate is (-py, rate); -rate gives (-py, -rate)
    let (eig, time_sign) = match mode {
        LaunchMode::Unstable => (Vector2::new(-py, rate).normalize(), 1.0),
        LaunchMode::StableReversed => (Vector2::new(-py, -rate).normalize(), -1.0),
    };
    let mut traced = Vec::new();
    for sign in [1.0, -1.0] {
        let launch = eig * sign;
        let (samples, cross, t_back) = trace_branch(p, launch, launch_offset, time_sign, lim)?;
        let mut area = 0.0;
        for w in samples.windows(2) {
            area += 0.5 * (w[0][0] * w[1][1] - w[1][0] * w[0][1]);
        }
        traced.push((launch, samples, cross, t_back, area));
    }
    traced.sort_by(|a, b| a.2.total_cmp(&b.2));
    let max_level_defect = traced.iter().flat_map(|t| t.1.iter()).map(|z| p.h2(z[0], z[1]).abs()).fold(0.0, f64::max);
    let opts = OdeOptions { tol: lim.tol.min(1e-12), ..lim.ode_options() };
    let mk_branch = |id: BranchId, t: &(Vector2<f64>, Vec<[f64; 2]>, f64, f64, f64)| SeparatrixBranch {
        branch_id: id,
        samples: t.1.clone(),
        launch_vector: [t.0[0], t.0[1]],
        enclosed_area: t.4,
        axis_crossing: t.2,
        return_time: t.3,
    };
    let branches = [mk_branch(BranchId::Gamma1, &traced[0]), mk_branch(BranchId::Gamma2, &traced[1])];
    let mut homs = Vec::new();
    for b in &branches {
        let z0 = State4::new(1.0, 0.0, b.axis_crossing, 0.0);
        let (bwd, _) = crate::model::integrate_flow(p, &z0, -horizon, TimeKind::Reeb, false, &opts)?;
        let (fwd, _) = crate::model::integrate_flow(p, &z0, horizon, TimeKind::Reeb, false, &opts)?;
        let mut times: Vec<f64> = bwd.times.iter().rev().copied().collect();
        let mut states: Vec<State4> = bwd.states.iter().rev().copied().collect();
        times.extend(fwd.times.iter().skip(1));
        states.extend(fwd.states.iter().skip(1));
        let end_distances = (distance_to_p2(&states[0]), distance_to_p2(states.last().unwrap()));
        let energy_drift = states.iter().map(|z| (p.energy(z) - 0.5).abs()).fold(0.0, f64::max);
        homs.push(Homoclinic {
            branch_id: b.branch_id,
            trajectory: Trajectory { times, states, time_kind: TimeKind::Reeb, energy_drift },
            end_distances,
        });
    }
    let homoclinics: [Homoclinic; 2] = homs.try_into().map_err(|_| Error::InvalidInput("homoclinic count".into()))?;
    Ok(SeparatrixReport { branches, homoclinics, max_level_defect, rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;

    fn model() -> ValidatedModel {
        ValidatedModel::new(&Preset::Validated.params(0.5), &Tolerances::default()).unwrap()
    }

    #[test]
    fn axis_roots_match_factorisation() {
        let m = model();
        assert!(m.p2.location[0].abs() < 1e-15);
        assert!((m.p1.location[0] - 0.25).abs() < 1e-14);
        assert!((m.p3.location[0] - 1.0).abs() < 1e-14);
        assert_eq!(m.critical.points.len(), 3);
        assert_eq!(m.p2.flow_type, FlowType::Hyperbolic);
        assert_eq!(m.p2.hessian_signature, HessianSignature::Saddle);
        // computed signatures: p1 is a local max and p3 a local min of H2
        assert_eq!(m.p1.hessian_signature, HessianSignature::Max);
        assert_eq!(m.p3.hessian_signature, HessianSignature::Min);
        assert!(m.ordering_chain_holds());
    }

    #[test]
    fn paper_figure_origin_is_elliptic() {
        let p = Preset::PaperFigure.params(0.5);
        let rep = find_critical_points(&p, &Tolerances::default());
        let origin = rep.points.iter().find(|c| c.location[0].abs() < 1e-12).unwrap();
        assert_eq!(origin.flow_type, FlowType::Elliptic);
        assert!(origin.k1 * origin.k2 < 0.0);
        assert!(matches!(ValidatedModel::new(&p, &Tolerances::default()), Err(Error::StructureMismatch(_))));
    }

    #[test]
    fn special_periods_closed_form() {
        let o = special_orbits(&model()).unwrap();
        let e: f64 = 0.5;
        assert_eq!(o.p2.reeb_period, PI);
        assert!((o.p3.reeb_period - PI * (1.0 + 8.0 * e.powi(4) / 3.0)).abs() < 1e-12);
        assert!((o.p3.reeb_period - 7.0 * PI / 6.0).abs() < 1e-12);
        assert!((o.p1.reeb_period - PI * (1.0 - 7.0 * e.powi(4) / 48.0)).abs() < 1e-12);
        assert_eq!(o.inequalities(), [true, true, true]);
    }

    #[test]
    fn large_epsilon_breaks_period_chain() {
        let m = ValidatedModel::new(&Preset::Validated.params(1.2), &Tolerances::default()).unwrap();
        assert!(matches!(special_orbits(&m), Err(Error::HypothesisFailure(_))));
    }

    #[test]
    fn actions_of_special_orbits() {
        let o = special_orbits(&model()).unwrap();
        for orb in [&o.p1, &o.p2, &o.p3] {
            let a = orbit_action(&orb.loop_samples(512), 1e-7).unwrap();
            assert!((a - orb.reeb_period).abs() < 1e-9, "{a} vs {}", orb.reeb_period);
        }
        let point = vec![State4::new(1.0, 0.0, 0.0, 0.0); 65];
        assert_eq!(orbit_action(&point, 1e-7).unwrap(), 0.0);
        let mut open = o.p2.loop_samples(64);
        open.pop();
        open.pop();
        assert!(matches!(orbit_action(&open, 1e-7), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn special_orbits_reintegrate_to_closure() {
        let o = special_orbits(&model()).unwrap();
        let p = &model().params;
        for orb in [&o.p1, &o.p2, &o.p3] {
            let z0 = orb.initial_point();
            let z1 = crate::model::flow(p, &z0, orb.reeb_period, TimeKind::Reeb, &OdeOptions::with_tol(1e-12)).unwrap();
            assert!((z1 - z0).norm() < 1e-7);
        }
    }

    #[test]
    fn planar_period_near_elliptic_point() {
        let m = model();
        let p = &m.params;
        let x = m.p3.location[0] + 1e-3;
        let c = p.h2(x, 0.0);
        let lp = planar_period_and_area(p, c, [x, 0.0], 128, &Tolerances::default(), &IntegratorLimits::default()).unwrap();
        let hess = p.h2_hessian(m.p3.location[0], 0.0);
        let linear = 2.0 * PI / (hess[(0, 0)] * hess[(1, 1)]).sqrt();
        assert!((lp.tau - linear).abs() / linear < 1e-2, "{} vs {linear}", lp.tau);
        // small loop around a minimum runs counterclockwise
        assert!(lp.area > 0.0);
        for z in &lp.samples {
            assert!((p.h2(z[0], z[1]) - c).abs() < 1e-10);
        }
    }

    #[test]
    fn separatrix_level_is_no_return() {
        let m = model();
        let p = &m.params;
        let lim = IntegratorLimits { no_return_horizon: 200.0, ..Default::default() };
        // seed exactly on H2 = 0 away from the saddle
        let x = (5.0 + 7f64.sqrt()) * 0.5 / 3.0;
        let r = planar_period_and_area(p, 0.0, [x, 0.0], 64, &Tolerances::default(), &lim);
        assert!(matches!(r, Err(Error::NoReturn { .. })) || r.unwrap().tau > 1e2);
    }

    #[test]
    fn claim_one_examples() {
        let p = &model().params;
        let o = special_orbits(&model()).unwrap();
        // gamma_2 in Hamiltonian time has period 2 pi; d^2 H1 = I
        let samples: Vec<State4> = o.p2.loop_samples(256);
        let c = claim1_check(p, &LoopSamples::Full { samples: &samples, period: 2.0 * PI }, 1e-9).unwrap();
        assert!(c.h_sup >= 1.0 && c.pass);
        let point = vec![[0.0, 0.0]; 10];
        assert!(claim1_check(p, &LoopSamples::Planar { samples: &point, period: 1.0 }, 1e-9).is_err());
    }
}
