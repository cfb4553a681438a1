//! Conley–Zehnder indices of 2x2 symplectic paths: winding numbers, winding
//! intervals, trivialization corrections, iterates, the closed-form
//! linearization along the special orbits and the quadrant classifier for
//! the hyperbolic orbit.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::model::{self, coords_in, frame_basis, HamiltonianParams};
use crate::ode::OdeOptions;
use crate::orbits::{OrbitLabel, ReebOrbit, ValidatedModel};
use crate::path::{accumulated_turns, FrameKind, SymplecticPath};

pub const MIN_PATH_NODES: usize = 64;

/// Winding of `Phi(t) z0` in full turns.
pub fn winding_number(path: &SymplecticPath, z0: &Vector2<f64>) -> Result<f64> {
    if path.len() < MIN_PATH_NODES {
        return Err(Error::InvalidInput(format!("path has {} nodes, need {MIN_PATH_NODES}", path.len())));
    }
    let (turns, worst) = accumulated_turns(path.matrices.iter().map(|m| m * z0));
    if worst > PI / 2.0 {
        return Err(Error::SamplingTooCoarse { step: worst });
    }
    Ok(turns)
}

fn direction(theta: f64) -> Vector2<f64> {
    Vector2::new(theta.cos(), theta.sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingInterval {
    pub lo: f64,
    pub hi: f64,
    pub contains_integer: bool,
    pub degenerate_margin: f64,
}

impl WindingInterval {
    fn from_bounds(lo: f64, hi: f64) -> Self {
        let margin = |x: f64| (x - x.round()).abs();
        Self { lo, hi, contains_integer: lo.ceil() <= hi.floor(), degenerate_margin: margin(lo).min(margin(hi)) }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// The set `{Delta(z)}` over all directions. `Delta(z) = Delta(-z)`, so a
/// half-circle of directions suffices; extremes are refined by golden section.
pub fn winding_interval(path: &SymplecticPath, n_directions: usize, degen_tol: f64) -> Result<WindingInterval> {
    let iv = winding_interval_raw(path, n_directions)?;
    if iv.degenerate_margin < degen_tol {
        return Err(Error::DegenerateOrbit { margin: iv.degenerate_margin });
    }
    Ok(iv)
}

/// Same as [`winding_interval`] without the nondegeneracy check.
pub fn winding_interval_raw(path: &SymplecticPath, n_directions: usize) -> Result<WindingInterval> {
    if n_directions < 128 {
        return Err(Error::InvalidInput(format!("n_directions = {n_directions} < 128")));
    }
    let step = PI / n_directions as f64;
    let thetas: Vec<f64> = (0..n_directions).map(|i| i as f64 * step).collect();
    let values = thetas.iter().map(|&t| winding_number(path, &direction(t))).collect::<Result<Vec<f64>>>()?;
    let delta = |t: f64| winding_number(path, &direction(t)).unwrap_or(f64::NAN);
    let (imin, imax) = values.iter().enumerate().fold((0, 0), |(lo, hi), (i, v)| {
        (if *v < values[lo] { i } else { lo }, if *v > values[hi] { i } else { hi })
    });
    let refine = |i: usize, sign: f64| {
        let t = thetas[i];
        let (_, v) = golden_min(|x| sign * delta(x), t - step, t + step);
        let v = sign * v;
        if v.is_nan() {
            values[i]
        } else if sign > 0.0 {
            v.min(values[i])
        } else {
            v.max(values[i])
        }
    };
    Ok(WindingInterval::from_bounds(refine(imin, 1.0), refine(imax, -1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CzMethod {
    WindingInterval,
    AnalyticOracle,
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CZResult {
    pub mu_local: i64,
    pub frame_correction: i64,
    pub mu_global: i64,
    pub method: CzMethod,
    pub interval: Option<WindingInterval>,
}

impl CZResult {
    pub fn new(mu_local: i64, frame_correction: i64, method: CzMethod, interval: Option<WindingInterval>) -> Self {
        Self { mu_local, frame_correction, mu_global: mu_local + 2 * frame_correction, method, interval }
    }
}

/// `2k` when `k` lies in the interval, `2k + 1` when it sits in `(k, k+1)`.
pub fn index_from_interval(iv: &WindingInterval) -> i64 {
    if iv.contains_integer {
        2 * iv.lo.ceil() as i64
    } else {
        2 * iv.lo.floor() as i64 + 1
    }
}

pub const N_DIRECTIONS: usize = 256;

pub fn cz_index(path: &SymplecticPath, frame_correction: i64, degen_tol: f64) -> Result<CZResult> {
    let iv = winding_interval(path, N_DIRECTIONS, degen_tol)?;
    Ok(CZResult::new(index_from_interval(&iv), frame_correction, CzMethod::WindingInterval, Some(iv)))
}

pub fn iterate_index(path: &SymplecticPath, k: usize, frame_correction: i64, degen_tol: f64) -> Result<CZResult> {
    cz_index(&path.iterate(k), k as i64 * frame_correction, degen_tol)
}

/// Winding of the first vector of `frame_a` in `frame_b` coordinates along
/// a closed loop of bases (the last node repeats the first).
pub fn trivialization_winding(frame_a: &[(Vector4<f64>, Vector4<f64>)], frame_b: &[(Vector4<f64>, Vector4<f64>)]) -> Result<i64> {
    if frame_a.len() != frame_b.len() || frame_a.len() < 3 {
        return Err(Error::InvalidInput("frames must have equal length >= 3".into()));
    }
    let coords = frame_a.iter().zip(frame_b).map(|(a, b)| coords_in(&b.0, &b.1, &a.0));
    let (turns, worst) = accumulated_turns(coords);
    if worst > PI / 2.0 {
        return Err(Error::SamplingTooCoarse { step: worst });
    }
    let rounded = turns.round();
    if (turns - rounded).abs() >= 0.1 {
        return Err(Error::RoundingUnsafe { raw: turns });
    }
    Ok(rounded as i64)
}

/// Per-node bases of `kind` along one period of a special orbit.
pub fn orbit_frames(p: &HamiltonianParams, orbit: &ReebOrbit, kind: FrameKind, n: usize, frame_tol: f64) -> Result<Vec<(Vector4<f64>, Vector4<f64>)>> {
    orbit
        .loop_samples(n)
        .iter()
        .enumerate()
        .map(|(j, z)| frame_basis(p, z, kind, frame_tol).map_err(|_| Error::FrameDegenerate { t: j as f64 / n as f64 }))
        .collect()
}

/// Winding of the orbit frame `rho` against the global frame `Xbar`.
pub fn rho_frame_correction(p: &HamiltonianParams, orbit: &ReebOrbit, n: usize, frame_tol: f64) -> Result<i64> {
    let rho = orbit_frames(p, orbit, FrameKind::RhoOrbitFrame, n, frame_tol)?;
    let global = orbit_frames(p, orbit, FrameKind::GlobalFrame, n, frame_tol)?;
    trivialization_winding(&rho, &global)
}

/// Entries `(k1, k2)` of the generator `[[0, k1], [k2, 0]]` along `which`.
pub fn generator(model: &ValidatedModel, which: OrbitLabel) -> (f64, f64) {
    let c = model.critical_point(which);
    (c.k1, c.k2)
}

/// `exp(s [[0, k1], [k2, 0]])`.
pub fn generator_exp(k1: f64, k2: f64, s: f64) -> Matrix2<f64> {
    let prod = k1 * k2;
    let w = prod.abs().sqrt();
    let (c, sc) = if prod > 0.0 {
        ((w * s).cosh(), if w > 0.0 { (w * s).sinh() / w } else { s })
    } else if prod < 0.0 {
        ((w * s).cos(), (w * s).sin() / w)
    } else {
        (1.0, s)
    };
    Matrix2::new(c, sc * k1, sc * k2, c)
}

/// Closed-form linearized flow along a special orbit in the orbit frame.
pub fn analytic_monodromy_oracle(model: &ValidatedModel, orbit: &ReebOrbit, n_intervals: usize) -> SymplecticPath {
    let (k1, k2) = generator(model, orbit.label);
    let period = orbit.reeb_period;
    SymplecticPath::from_fn(n_intervals, orbit.label.name(), FrameKind::RhoOrbitFrame, period, |t| generator_exp(k1, k2, t * period))
}

/// Integrated linearized flow along a special orbit, compressed to `xi`.
pub fn integrated_path(model: &ValidatedModel, orbit: &ReebOrbit, kind: FrameKind, n_samples: usize, tol: &Tolerances, opts: &OdeOptions) -> Result<SymplecticPath> {
    model::restrict_linearized_to_xi(&model.params, &orbit.initial_point(), orbit.reeb_period, orbit.label.name(), kind, n_samples, tol.frame_tol, opts)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitIndex {
    pub label: OrbitLabel,
    pub integrated: CZResult,
    pub analytic: CZResult,
    pub max_node_gap: f64,
}

/// Index of a special orbit from the integrated path, doubling the sampling
/// while the winding steps are too coarse, cross-checked against the
/// closed form.
pub fn special_orbit_index(model: &ValidatedModel, orbit: &ReebOrbit, n_samples: usize, tol: &Tolerances, opts: &OdeOptions) -> Result<OrbitIndex> {
    let correction = rho_frame_correction(&model.params, orbit, 256, tol.frame_tol)?;
    let mut n = n_samples.max(MIN_PATH_NODES);
    let (path, integrated) = loop {
        let path = integrated_path(model, orbit, FrameKind::RhoOrbitFrame, n, tol, opts)?;
        match cz_index(&path, correction, tol.degen_tol) {
            Err(Error::SamplingTooCoarse { .. }) if n < 1 << 14 => n *= 2,
            other => break (path.clone(), other?),
        }
    };
    let oracle = analytic_monodromy_oracle(model, orbit, n);
    let mut analytic = cz_index(&oracle, correction, tol.degen_tol)?;
    analytic.method = CzMethod::AnalyticOracle;
    let max_node_gap = path.matrices.iter().zip(&oracle.matrices).map(|(a, b)| (a - b).abs().max()).fold(0.0, f64::max);
    Ok(OrbitIndex { label: orbit.label, integrated, analytic, max_node_gap })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairingSign {
    Positive,
    Negative,
    Mixed,
}

/// Stable/unstable frame along a hyperbolic orbit, in orbit-frame coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenFrame {
    pub label: OrbitLabel,
    pub params: Vec<f64>,
    /// Expanding direction, `Phi(1) v- = beta v-` at `t = 0`.
    pub v_minus: Vec<[f64; 2]>,
    pub v_plus: Vec<[f64; 2]>,
    pub multiplier_beta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadrantReport {
    pub frame: EigenFrame,
    pub quadrants: Vec<Quadrant>,
    pub pairings: Vec<f64>,
    pub pairing_sign: PairingSign,
    /// Winding of the section relative to the global frame.
    pub section_winding: f64,
}

fn eigvec(m: &Matrix2<f64>, mu: f64) -> Vector2<f64> {
    let a = Vector2::new(m[(0, 1)], mu - m[(0, 0)]);
    let b = Vector2::new(mu - m[(1, 1)], m[(1, 0)]);
    if a.norm() >= b.norm() {
        a.normalize()
    } else {
        b.normalize()
    }
}

fn cross(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Eigenframe of a hyperbolic linearized flow and the quadrant position of
/// `section` at every node of `[0, 1]`.
///
/// `flow(t)` is the linearized return map over the parameter interval
/// `[0, t]` for any real `t` (period `period` in Reeb time), and `section(t)`
/// a 1-periodic contact section, both in orbit-frame coordinates. The Lie
/// derivative is the central difference of `t -> dphi^{-s} section(t + s)`.
#[allow(clippy::too_many_arguments)]
pub fn eigenframe_and_quadrants(
    label: OrbitLabel,
    period: f64,
    flow: &dyn Fn(f64) -> Matrix2<f64>,
    section: &dyn Fn(f64) -> Vector2<f64>,
    frame_correction: i64,
    n_nodes: usize,
    tol: &Tolerances,
) -> Result<QuadrantReport> {
    let m = flow(1.0);
    let (tr, det) = (m.trace(), m.determinant());
    let disc = tr * tr - 4.0 * det;
    if !(tr.abs() > 2.0) || disc <= 0.0 {
        return Err(Error::NotHyperbolic { trace: tr });
    }
    let sq = disc.sqrt();
    let (mu1, mu2) = ((tr + sq) / 2.0, (tr - sq) / 2.0);
    let (beta, small) = if mu1.abs() >= mu2.abs() { (mu1, mu2) } else { (mu2, mu1) };
    let vm0 = eigvec(&m, beta);
    let mut vp0 = eigvec(&m, small);
    if cross(&vm0, &vp0) < 0.0 {
        vp0 = -vp0;
    }
    let growth = beta.abs().ln();
    let params: Vec<f64> = (0..=n_nodes).map(|j| j as f64 / n_nodes as f64).collect();
    let mut v_minus = Vec::with_capacity(params.len());
    let mut v_plus = Vec::with_capacity(params.len());
    let mut quadrants = Vec::with_capacity(params.len());
    let mut pairings = Vec::with_capacity(params.len());
    let h = tol.lie_step;
    for &t in &params {
        let phi = flow(t);
        let vm = phi * vm0 * (-growth * t).exp();
        let vp = phi * vp0 * (growth * t).exp();
        v_minus.push([vm[0], vm[1]]);
        v_plus.push([vp[0], vp[1]]);
        let v = section(t);
        let w = cross(&vm, &vp);
        if v.norm() < tol.pairing_tol {
            return Err(Error::VanishingSection(format!("section vanishes at t = {t}")));
        }
        // v = a vm + b vp
        let a = cross(&v, &vp) / w;
        let b = cross(&vm, &v) / w;
        let back = |s: f64| phi * flow(t + s).try_inverse().unwrap_or_else(Matrix2::zeros) * section(t + s);
        let lie = (back(h) - back(-h)) / (2.0 * h * period);
        let pairing = cross(&v, &lie);
        if pairing.abs() < tol.pairing_tol * v.norm_squared() {
            return Err(Error::VanishingSection(format!("pairing {pairing:.3e} vanishes at t = {t}")));
        }
        pairings.push(pairing);
        quadrants.push(match (a > 0.0, b > 0.0) {
            (true, true) => Quadrant::I,
            (false, true) => Quadrant::II,
            (false, false) => Quadrant::III,
            (true, false) => Quadrant::IV,
        });
    }
    let pairing_sign = if pairings.iter().all(|p| *p > 0.0) {
        PairingSign::Positive
    } else if pairings.iter().all(|p| *p < 0.0) {
        PairingSign::Negative
    } else {
        PairingSign::Mixed
    };
    let (turns, _) = accumulated_turns(params.iter().map(|&t| section(t)));
    Ok(QuadrantReport {
        frame: EigenFrame { label, params, v_minus, v_plus, multiplier_beta: beta.abs() },
        quadrants,
        pairings,
        pairing_sign,
        section_winding: turns + frame_correction as f64,
    })
}

/// Quadrant analysis along `P2` with the closed-form flow.
pub fn p2_quadrants(model: &ValidatedModel, orbit: &ReebOrbit, section: &dyn Fn(f64) -> Vector2<f64>, n_nodes: usize, tol: &Tolerances) -> Result<QuadrantReport> {
    let (k1, k2) = generator(model, orbit.label);
    let period = orbit.reeb_period;
    let flow = move |t: f64| generator_exp(k1, k2, t * period);
    let corr = rho_frame_correction(&model.params, orbit, 256, tol.frame_tol)?;
    eigenframe_and_quadrants(orbit.label, period, &flow, section, corr, n_nodes, tol)
}

/// Orbit-frame coordinates of the eigenvectors of `[[0, k1], [k2, 0]]`:
/// `(sqrt(k1/k2), 1)` for `+sqrt(k1 k2)` and `(-1, sqrt(k2/k1))` for the other.
pub fn p2_eigenvectors(k1: f64, k2: f64) -> (Vector2<f64>, Vector2<f64>) {
    (Vector2::new((k1 / k2).sqrt(), 1.0), Vector2::new(-1.0, (k2 / k1).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;
    use crate::orbits::special_orbits;
    use crate::path::rotation;

    fn setup() -> (ValidatedModel, crate::orbits::SpecialOrbits) {
        let m = ValidatedModel::new(&Preset::Validated.params(0.5), &Tolerances::default()).unwrap();
        let o = special_orbits(&m).unwrap();
        (m, o)
    }

    #[test]
    fn trivial_windings() {
        let id = SymplecticPath::identity(100);
        assert_eq!(winding_number(&id, &Vector2::new(0.6, 0.8)).unwrap(), 0.0);
        let rot = SymplecticPath::rotation(100, 0.3);
        assert!((winding_number(&rot, &Vector2::new(1.0, 0.0)).unwrap() - 0.3).abs() < 1e-12);
        assert!(matches!(winding_interval(&id, 256, 1e-6), Err(Error::DegenerateOrbit { .. })));
        let coarse = SymplecticPath::rotation(64, 20.0);
        assert!(matches!(winding_number(&coarse, &Vector2::new(1.0, 0.0)), Err(Error::SamplingTooCoarse { .. })));
    }

    #[test]
    fn rotation_index_formula() {
        for (theta, mu) in [(0.3, 1), (-0.3, -1), (1.25, 3), (0.999, 1)] {
            let p = SymplecticPath::rotation(400, theta);
            assert_eq!(cz_index(&p, 0, 1e-6).unwrap().mu_local, mu, "theta {theta}");
        }
    }

    #[test]
    fn shear_interval_contains_zero() {
        let p = SymplecticPath::from_fn(200, "hyp", FrameKind::GlobalFrame, 1.0, |t| generator_exp(1.0, 1.0, t));
        let iv = winding_interval(&p, 256, 1e-6).unwrap();
        assert!(iv.lo < 0.0 && iv.hi > 0.0 && iv.contains_integer);
        assert!(iv.len() < 0.5);
    }

    #[test]
    fn closed_form_generator() {
        let g = generator_exp(0.3, -0.7, 1.3);
        let a = Matrix2::new(0.0, 0.3, -0.7, 0.0);
        // Taylor series oracle
        let mut term = Matrix2::identity();
        let mut sum = Matrix2::identity();
        for k in 1..40 {
            term = term * a * 1.3 / k as f64;
            sum += term;
        }
        assert!((g - sum).norm() < 1e-13);
        assert!((g.determinant() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn special_orbit_windings_in_rho_frame() {
        let (m, o) = setup();
        let p1 = analytic_monodromy_oracle(&m, &o.p1, 256);
        let d = winding_number(&p1, &Vector2::new(1.0, 0.0)).unwrap();
        assert!(-1.0 < d && d < 0.0);
        let p3 = winding_interval(&analytic_monodromy_oracle(&m, &o.p3, 256), 256, 1e-6).unwrap();
        assert!(p3.lo > 0.0 && p3.hi < 1.0);
        let p2 = winding_interval(&analytic_monodromy_oracle(&m, &o.p2, 256), 256, 1e-6).unwrap();
        assert!(p2.lo < 0.0 && 0.0 < p2.hi);
    }

    #[test]
    fn frame_correction_is_one() {
        let (m, o) = setup();
        for orb in [&o.p1, &o.p2, &o.p3] {
            assert_eq!(rho_frame_correction(&m.params, orb, 256, 1e-8).unwrap(), 1);
        }
        let rho = orbit_frames(&m.params, &o.p2, FrameKind::RhoOrbitFrame, 128, 1e-8).unwrap();
        assert_eq!(trivialization_winding(&rho, &rho).unwrap(), 0);
    }

    #[test]
    fn rotated_test_frame_winds_once() {
        let base = |_t: f64| (Vector4::new(1.0, 0.0, 0.0, 0.0), Vector4::new(0.0, 1.0, 0.0, 0.0));
        let b: Vec<_> = (0..=100).map(|j| base(j as f64)).collect();
        let a: Vec<_> = (0..=100)
            .map(|j| {
                let r = rotation(2.0 * PI * j as f64 / 100.0);
                (Vector4::new(r[(0, 0)], r[(1, 0)], 0.0, 0.0), Vector4::new(r[(0, 1)], r[(1, 1)], 0.0, 0.0))
            })
            .collect();
        // dlambda0 pairs x1 with y1 positively
        assert_eq!(trivialization_winding(&a, &b).unwrap(), 1);
    }

    #[test]
    fn integrated_paths_match_closed_form() {
        let (m, o) = setup();
        let tol = Tolerances::default();
        let opts = OdeOptions::with_tol(1e-12);
        let expected = [(&o.p1, 1), (&o.p2, 2), (&o.p3, 3)];
        for (orb, mu) in expected {
            let idx = special_orbit_index(&m, orb, 128, &tol, &opts).unwrap();
            assert!(idx.max_node_gap < 1e-6, "{:?} gap {}", orb.label, idx.max_node_gap);
            assert_eq!(idx.integrated.mu_global, mu);
            assert_eq!(idx.analytic.mu_global, mu);
        }
    }

    #[test]
    fn iterates() {
        let (m, o) = setup();
        let p2 = analytic_monodromy_oracle(&m, &o.p2, 256);
        for k in 1..=4 {
            assert_eq!(iterate_index(&p2, k, 1, 1e-6).unwrap().mu_global, 2 * k as i64);
        }
        let p1 = analytic_monodromy_oracle(&m, &o.p1, 256);
        let twice = iterate_index(&p1, 2, 1, 1e-6).unwrap();
        assert_eq!(twice.mu_local, -1);
        assert_eq!(twice.mu_global, 3);
        let p3 = analytic_monodromy_oracle(&m, &o.p3, 256);
        assert_eq!(iterate_index(&p3, 1, 1, 1e-6).unwrap(), cz_index(&p3, 1, 1e-6).unwrap());
    }

    #[test]
    fn quadrant_dichotomy_constant_sections() {
        let (m, o) = setup();
        let tol = Tolerances::default();
        let (k1, k2) = generator(&m, OrbitLabel::P2);
        let (vm, vp) = p2_eigenvectors(k1, k2);
        let pos = move |_t: f64| vm + vp * 0.5;
        let r = p2_quadrants(&m, &o.p2, &pos, 64, &tol).unwrap();
        assert_eq!(r.pairing_sign, PairingSign::Positive);
        assert!(r.quadrants.iter().all(|q| matches!(q, Quadrant::I | Quadrant::III)));
        assert!((r.section_winding - 1.0).abs() < 1e-9);
        let neg = move |_t: f64| vm - vp * 2.0;
        let r = p2_quadrants(&m, &o.p2, &neg, 64, &tol).unwrap();
        assert_eq!(r.pairing_sign, PairingSign::Negative);
        assert!(r.quadrants.iter().all(|q| matches!(q, Quadrant::II | Quadrant::IV)));
        assert!(r.frame.multiplier_beta > 1.0);
        let eig = move |_t: f64| vm;
        assert!(matches!(p2_quadrants(&m, &o.p2, &eig, 64, &tol), Err(Error::VanishingSection(_))));
    }
}
