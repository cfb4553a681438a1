//! Linking and self-linking numbers of closed curves on the energy surface.
//!
//! Curves are pushed radially onto the unit 3-sphere (which preserves the
//! contact orientation), projected stereographically to R^3 from a pole far
//! from every curve, and linked with the Gauss double integral.

use std::f64::consts::PI;

use nalgebra::{Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::model::{dlambda0, ContactFrame, HamiltonianParams, State4};
use crate::orbits::ReebOrbit;

/// Cyclic samples of a closed curve; the first sample is not repeated.
#[derive(Clone, Debug)]
pub struct ClosedCurve {
    pub samples: Vec<State4>,
}

impl ClosedCurve {
    /// Drops a trailing sample that repeats the first.
    pub fn from_loop(mut samples: Vec<State4>) -> Self {
        if samples.len() > 1 && (samples[0] - samples[samples.len() - 1]).norm() < 1e-12 {
            samples.pop();
        }
        Self { samples }
    }

    pub fn from_orbit(orbit: &ReebOrbit, n: usize) -> Self {
        Self::from_loop(orbit.loop_samples(n))
    }

    pub fn reversed(&self) -> Self {
        let mut s = self.samples.clone();
        s.reverse();
        Self { samples: s }
    }

    pub fn normalized(&self) -> Self {
        Self { samples: self.samples.iter().map(|z| z.normalize()).collect() }
    }

    /// Largest gap between consecutive samples, closing gap included.
    pub fn max_step(&self) -> f64 {
        let n = self.samples.len();
        (0..n).map(|j| (self.samples[(j + 1) % n] - self.samples[j]).norm()).fold(0.0, f64::max)
    }
}

fn min_distance(a: &[State4], b: &[State4]) -> f64 {
    a.iter().flat_map(|x| b.iter().map(move |y| (x - y).norm())).fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Projection {
    pub pole: [f64; 4],
    pub pole_distance: f64,
    basis: [[f64; 4]; 3],
    flip: bool,
}

impl Projection {
    pub fn new(pole: State4, pole_distance: f64) -> Self {
        let pole = pole.normalize();
        let mut basis: Vec<Vector4<f64>> = Vec::new();
        for k in 0..4 {
            let mut e = Vector4::zeros();
            e[k] = 1.0;
            let mut v = e - pole * pole.dot(&e);
            for b in &basis {
                v -= b * b.dot(&v);
            }
            if v.norm() > 1e-6 && basis.len() < 3 {
                basis.push(v.normalize());
            }
        }
        let mut proj = Self { pole: pole.into(), pole_distance, basis: [basis[0].into(), basis[1].into(), basis[2].into()], flip: false };
        // at the antipode the chart is v -> v / 2; orient by (Reeb, xi_1, xi_2)
        let w = -pole;
        let reeb = Vector4::new(-w[1], w[0], -w[3], w[2]);
        let mut xi: Vec<Vector4<f64>> = Vec::new();
        for b in &proj.basis {
            let mut v = Vector4::from(*b);
            v -= reeb * reeb.dot(&v) / reeb.norm_squared();
            for x in &xi {
                v -= x * x.dot(&v);
            }
            if v.norm() > 1e-6 && xi.len() < 2 {
                xi.push(v.normalize());
            }
        }
        if dlambda0(&xi[0], &xi[1]) < 0.0 {
            xi.swap(0, 1);
        }
        let c = |v: &Vector4<f64>| Vector3::new(Vector4::from(proj.basis[0]).dot(v), Vector4::from(proj.basis[1]).dot(v), Vector4::from(proj.basis[2]).dot(v));
        let det = c(&reeb).dot(&c(&xi[0]).cross(&c(&xi[1])));
        proj.flip = det < 0.0;
        proj
    }

    /// Stereographic image of a point of the unit sphere.
    pub fn apply(&self, w: &State4) -> Vector3<f64> {
        let n = Vector4::from(self.pole);
        let s = 1.0 - w.dot(&n);
        let v = (w - n * w.dot(&n)) / s;
        let mut out = Vector3::new(Vector4::from(self.basis[0]).dot(&v), Vector4::from(self.basis[1]).dot(&v), Vector4::from(self.basis[2]).dot(&v));
        if self.flip {
            out[2] = -out[2];
        }
        out
    }
}

/// Picks the best of 64 random poles and projects every curve.
pub fn stereographic_project(curves: &[ClosedCurve], seed: u64, tol: &Tolerances) -> Result<(Projection, Vec<Vec<Vector3<f64>>>)> {
    let unit: Vec<ClosedCurve> = curves.iter().map(ClosedCurve::normalized).collect();
    for (i, a) in unit.iter().enumerate() {
        for b in &unit[i + 1..] {
            let d = min_distance(&a.samples, &b.samples);
            if d < tol.sep_tol {
                return Err(Error::InvalidInput(format!("curves are {d:.3e} apart, below sep_tol")));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(State4, f64)> = None;
    for _ in 0..64 {
        let cand = loop {
            let v: Vector4<f64> = Vector4::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            let n2 = v.norm_squared();
            if n2 > 1e-4 && n2 <= 1.0 {
                break v / n2.sqrt();
            }
        };
        let d = unit.iter().map(|c| c.samples.iter().map(|z| (z - cand).norm()).fold(f64::INFINITY, f64::min)).fold(f64::INFINITY, f64::min);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((cand, d));
        }
    }
    let (pole, dist) = best.expect("64 candidates");
    if dist < tol.pole_tol {
        return Err(Error::NoSafePole { best: dist });
    }
    let proj = Projection::new(pole, dist);
    let images = unit.iter().map(|c| c.samples.iter().map(|z| proj.apply(z)).collect()).collect();
    Ok((proj, images))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkingResult {
    pub raw: f64,
    pub rounded: i64,
    /// `|raw - rounded|`.
    pub guard: f64,
}

const D8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Tangents per unit parameter step of a closed polygon, by periodic
/// eighth-order central differences.
fn tangents(c: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
    let n = c.len();
    (0..n)
        .map(|j| {
            let mut d = Vector3::zeros();
            for (k, w) in D8.iter().enumerate() {
                d += (c[(j + k + 1) % n] - c[(j + n - k - 1) % n]) * *w;
            }
            d
        })
        .collect()
}

/// Gauss linking integral by the product trapezoid rule.
pub fn gauss_linking(c1: &[Vector3<f64>], c2: &[Vector3<f64>]) -> Result<LinkingResult> {
    let (t1, t2) = (tangents(c1), tangents(c2));
    let mut raw = 0.0;
    for (x, dx) in c1.iter().zip(&t1) {
        for (y, dy) in c2.iter().zip(&t2) {
            let r = x - y;
            let d = r.norm().max(1e-9);
            raw += r.dot(&dx.cross(dy)) / (d * d * d);
        }
    }
    raw /= 4.0 * PI;
    let rounded = raw.round();
    let guard = (raw - rounded).abs();
    if guard > 0.1 {
        return Err(Error::RoundingUnsafe { raw });
    }
    Ok(LinkingResult { raw, rounded: rounded as i64, guard })
}

pub fn linking_number(a: &ClosedCurve, b: &ClosedCurve, seed: u64, tol: &Tolerances) -> Result<LinkingResult> {
    let (_, img) = stereographic_project(&[a.clone(), b.clone()], seed, tol)?;
    gauss_linking(&img[0], &img[1])
}

/// Displaces every sample by `offset` along the normalized `section` and
/// radially back onto the energy surface.
pub fn pushoff(p: &HamiltonianParams, curve: &ClosedCurve, section: &dyn Fn(&State4) -> Result<Vector4<f64>>, offset: f64, tol: &Tolerances) -> Result<ClosedCurve> {
    let mut out = Vec::with_capacity(curve.samples.len());
    for z in &curve.samples {
        let v = section(z)?;
        let n = v.norm();
        if n < tol.frame_tol {
            return Err(Error::VanishingSection(format!("section norm {n:.3e}")));
        }
        let w = z + v * (offset / n);
        out.push(radial_to_surface(p, &w)?);
    }
    let pushed = ClosedCurve { samples: out };
    let d = min_distance(&pushed.normalized().samples, &curve.normalized().samples);
    if d < tol.sep_tol {
        return Err(Error::OffsetTooLarge { distance: d });
    }
    Ok(pushed)
}

/// The point of the energy surface on the ray through `w`.
pub fn radial_to_surface(p: &HamiltonianParams, w: &State4) -> Result<State4> {
    let u = w.normalize();
    let f = |r: f64| p.energy(&(u * r)) - 0.5;
    let (mut lo, mut hi) = (1e-6, 4.0);
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return Err(Error::BracketFailure { lo, hi });
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m) > 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    Ok(u * (0.5 * (lo + hi)))
}

/// Push-off distance at which 512 samples resolve the Gauss integral to ~1e-4.
pub const DEFAULT_PUSH_OFFSET: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PushSection {
    Xbar1,
    Xbar2,
}

/// `lk(P, P')` with `P'` the push-off of `P` along `Xbar1` (or `Xbar2`).
pub fn self_linking(p: &HamiltonianParams, orbit: &ReebOrbit, n: usize, offset: f64, section: PushSection, seed: u64, tol: &Tolerances) -> Result<LinkingResult> {
    let curve = ClosedCurve::from_orbit(orbit, n);
    let frame_tol = tol.frame_tol;
    let sec = move |z: &State4| -> Result<Vector4<f64>> {
        let f = ContactFrame::new(p, z, frame_tol)?;
        Ok(match section {
            PushSection::Xbar1 => f.xbar1,
            PushSection::Xbar2 => f.xbar2,
        })
    };
    let pushed = pushoff(p, &curve, &sec, offset, tol)?;
    linking_number(&curve, &pushed, seed, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;
    use crate::orbits::{special_orbits, ValidatedModel};

    fn circle(f: impl Fn(f64) -> State4, n: usize) -> ClosedCurve {
        ClosedCurve { samples: (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect() }
    }

    #[test]
    fn hopf_link() {
        let tol = Tolerances::default();
        let a = circle(|t| State4::new(t.cos(), t.sin(), 0.0, 0.0), 512);
        let b = circle(|t| State4::new(0.0, 0.0, t.cos(), t.sin()), 512);
        let l = linking_number(&a, &b, 1, &tol).unwrap();
        assert_eq!(l.rounded, 1);
        assert!(l.guard < 1e-6);
        let rev = linking_number(&a.reversed(), &b, 1, &tol).unwrap();
        assert_eq!(rev.rounded, -1);
        let swapped = linking_number(&b, &a, 1, &tol).unwrap();
        assert!((swapped.raw - l.raw).abs() < 1e-9);
        let other_pole = linking_number(&a, &b, 99, &tol).unwrap();
        assert_eq!(other_pole.rounded, 1);
    }

    #[test]
    fn unlinked_circles() {
        let tol = Tolerances::default();
        let a = circle(|t| State4::new(t.cos(), t.sin(), 0.0, 0.0) * 0.9 + State4::new(0.0, 0.0, 0.3, 0.0), 256);
        let b = circle(|t| State4::new(t.cos(), t.sin(), 0.0, 0.0) * 0.9 + State4::new(0.0, 0.0, -0.3, 0.0), 256);
        assert_eq!(linking_number(&a, &b, 3, &tol).unwrap().rounded, 0);
    }

    #[test]
    fn special_orbit_links() {
        let tol = Tolerances::default();
        let m = ValidatedModel::new(&Preset::Validated.params(0.5), &tol).unwrap();
        let o = special_orbits(&m).unwrap();
        let curves: Vec<ClosedCurve> = [&o.p1, &o.p2, &o.p3].iter().map(|x| ClosedCurve::from_orbit(x, 512)).collect();
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(linking_number(&curves[i], &curves[j], 5, &tol).unwrap().rounded, 0);
            }
        }
        let (proj, _) = stereographic_project(&[curves[0].clone(), curves[2].clone()], 5, &tol).unwrap();
        assert!(proj.pole_distance > 0.1);
        for orb in [&o.p1, &o.p2, &o.p3] {
            let sl = self_linking(&m.params, orb, 512, DEFAULT_PUSH_OFFSET, PushSection::Xbar1, 7, &tol).unwrap();
            assert_eq!(sl.rounded, -1, "{:?} raw {}", orb.label, sl.raw);
            assert!(sl.guard < 0.05);
            let sl2 = self_linking(&m.params, orb, 512, DEFAULT_PUSH_OFFSET, PushSection::Xbar2, 7, &tol).unwrap();
            assert_eq!(sl2.rounded, -1);
            assert!(sl2.guard < 0.05);
        }
    }

    #[test]
    fn seifert_framed_planar_unknot() {
        // constant push in the plane of a round circle
        let tol = Tolerances::default();
        let c = circle(|t| State4::new(0.6 * t.cos(), 0.6 * t.sin(), 0.5, 0.0), 256);
        let pushed = ClosedCurve { samples: c.samples.iter().map(|z| z + State4::new(z[0], z[1], 0.0, 0.0) * 0.05).collect() };
        assert_eq!(linking_number(&c, &pushed, 2, &tol).unwrap().rounded, 0);
    }
}
