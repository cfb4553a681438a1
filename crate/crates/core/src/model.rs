//! The Hamiltonian `H = H1 + H2` on R^4, its energy surface `S = H^{-1}(1/2)`,
//! the Liouville contact form, the Reeb field `R = h X_H`, and the global
//! contact frame built from the four complex-structure matrices `A_0..A_3`.
//!
//! Coordinates are ordered `(x1, y1, x2, y2)` throughout.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};
use crate::path::{FrameKind, SymplecticPath};

pub type State4 = Vector4<f64>;

pub const ENERGY: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianParams {
    pub epsilon: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub preset_name: String,
}

#[derive(Clone, Copy, Debug)]
pub struct HamiltonianEval {
    pub value: f64,
    pub gradient: Vector4<f64>,
    pub hessian: Matrix4<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct VectorFields {
    pub x_h: Vector4<f64>,
    pub h: f64,
    pub reeb: Vector4<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeKind {
    Hamiltonian,
    Reeb,
}

impl HamiltonianParams {
    pub fn h2(&self, x: f64, y: f64) -> f64 {
        let (e, r2) = (self.epsilon, x * x + y * y);
        0.5 * r2 * r2 + e * self.a * x.powi(3) + e * self.b * x * y * y + e * e * self.c * x * x + e * e * self.d * y * y
    }

    /// `Q = dH2/dx2`.
    pub fn q(&self, x: f64, y: f64) -> f64 {
        let e = self.epsilon;
        2.0 * x * (x * x + y * y) + 3.0 * e * self.a * x * x + e * self.b * y * y + 2.0 * e * e * self.c * x
    }

    /// `P = dH2/dy2`.
    pub fn p(&self, x: f64, y: f64) -> f64 {
        let e = self.epsilon;
        2.0 * y * (x * x + y * y) + 2.0 * e * self.b * x * y + 2.0 * self.d * e * e * y
    }

    pub fn h2_gradient(&self, x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(self.q(x, y), self.p(x, y))
    }

    pub fn h2_hessian(&self, x: f64, y: f64) -> Matrix2<f64> {
        let e = self.epsilon;
        let hxx = 6.0 * x * x + 2.0 * y * y + 6.0 * e * self.a * x + 2.0 * e * e * self.c;
        let hxy = 4.0 * x * y + 2.0 * e * self.b * y;
        let hyy = 2.0 * x * x + 6.0 * y * y + 2.0 * e * self.b * x + 2.0 * self.d * e * e;
        Matrix2::new(hxx, hxy, hxy, hyy)
    }

    /// Planar Hamiltonian field of `H2` in the sign convention `(x2', y2') = (-P, Q)`.
    pub fn planar_field(&self, x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(-self.p(x, y), self.q(x, y))
    }

    pub fn hamiltonian_eval(&self, z: &State4) -> HamiltonianEval {
        let (x1, y1, x2, y2) = (z[0], z[1], z[2], z[3]);
        let value = 0.5 * (x1 * x1 + y1 * y1) + self.h2(x2, y2);
        let gradient = Vector4::new(x1, y1, self.q(x2, y2), self.p(x2, y2));
        let h2 = self.h2_hessian(x2, y2);
        let mut hessian = Matrix4::zeros();
        hessian[(0, 0)] = 1.0;
        hessian[(1, 1)] = 1.0;
        hessian.fixed_view_mut::<2, 2>(2, 2).copy_from(&h2);
        HamiltonianEval { value, gradient, hessian }
    }

    pub fn energy(&self, z: &State4) -> f64 {
        0.5 * (z[0] * z[0] + z[1] * z[1]) + self.h2(z[2], z[3])
    }

    pub fn gradient(&self, z: &State4) -> Vector4<f64> {
        Vector4::new(z[0], z[1], self.q(z[2], z[3]), self.p(z[2], z[3]))
    }

    pub fn x_h(&self, z: &State4) -> Vector4<f64> {
        Vector4::new(-z[1], z[0], -self.p(z[2], z[3]), self.q(z[2], z[3]))
    }

    /// `lambda_0(X_H)(z) = z . grad H / 2`.
    pub fn lambda_xh(&self, z: &State4) -> f64 {
        0.5 * z.dot(&self.gradient(z))
    }

    pub fn vector_fields(&self, z: &State4) -> Result<VectorFields> {
        let l = self.lambda_xh(z);
        if !(l > 0.0) {
            return Err(Error::NotStarShaped { point: [z[0], z[1], z[2], z[3]], value: l });
        }
        let x_h = self.x_h(z);
        let h = 1.0 / l;
        Ok(VectorFields { x_h, h, reeb: x_h * h })
    }

    pub fn reeb(&self, z: &State4) -> Vector4<f64> {
        self.x_h(z) / self.lambda_xh(z)
    }

    pub fn field(&self, z: &State4, kind: TimeKind) -> Vector4<f64> {
        match kind {
            TimeKind::Hamiltonian => self.x_h(z),
            TimeKind::Reeb => self.reeb(z),
        }
    }

    /// Jacobian of `X_H`: the standard complex structure composed with the Hessian.
    pub fn d_x_h(&self, z: &State4) -> Matrix4<f64> {
        let hess = self.hamiltonian_eval(z).hessian;
        let mut out = Matrix4::zeros();
        for j in 0..4 {
            out[(0, j)] = -hess[(1, j)];
            out[(1, j)] = hess[(0, j)];
            out[(2, j)] = -hess[(3, j)];
            out[(3, j)] = hess[(2, j)];
        }
        out
    }

    /// Jacobian of the Reeb field `h X_H` with `h = 2 / (z . grad H)`.
    pub fn d_reeb(&self, z: &State4) -> Matrix4<f64> {
        let ev = self.hamiltonian_eval(z);
        let l2 = z.dot(&ev.gradient);
        let h = 2.0 / l2;
        let grad_l2 = ev.gradient + ev.hessian * z;
        let grad_h = -grad_l2 * (2.0 / (l2 * l2));
        self.d_x_h(z) * h + self.x_h(z) * grad_h.transpose()
    }

    pub fn d_field(&self, z: &State4, kind: TimeKind) -> Matrix4<f64> {
        match kind {
            TimeKind::Hamiltonian => self.d_x_h(z),
            TimeKind::Reeb => self.d_reeb(z),
        }
    }

    /// Returns a drifted point to `H = 1/2` by Newton steps along the gradient.
    pub fn surface_project(&self, z: &State4, surface_tol: f64, capture_radius: f64, max_newton: usize) -> Result<State4> {
        let r0 = self.energy(z) - ENERGY;
        if r0.abs() <= surface_tol * 1e-2 {
            return Ok(*z);
        }
        if r0.abs() >= capture_radius {
            return Err(Error::NoConvergence { iterations: 0, residual: r0 });
        }
        let dir = self.gradient(z);
        let mut t = 0.0;
        let mut res = r0;
        for it in 0..max_newton {
            let w = z + dir * t;
            res = self.energy(&w) - ENERGY;
            if res.abs() <= surface_tol * 1e-2 {
                return Ok(w);
            }
            let slope = self.gradient(&w).dot(&dir);
            if slope.abs() < 1e-300 {
                return Err(Error::NoConvergence { iterations: it, residual: res });
            }
            t -= res / slope;
        }
        if res.abs() <= surface_tol {
            Ok(z + dir * t)
        } else {
            Err(Error::NoConvergence { iterations: max_newton, residual: res })
        }
    }
}

/// `lambda_0(z)(u)` for `lambda_0 = (1/2) sum x_i dy_i - y_i dx_i`.
pub fn lambda0(z: &State4, u: &Vector4<f64>) -> f64 {
    0.5 * (z[0] * u[1] - z[1] * u[0] + z[2] * u[3] - z[3] * u[2])
}

/// `d lambda_0 = dx1^dy1 + dx2^dy2`.
pub fn dlambda0(u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
    u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2]
}

pub fn contact_eval(z: &State4, u: &Vector4<f64>, v: &Vector4<f64>) -> (f64, f64) {
    (lambda0(z, u), dlambda0(u, v))
}

fn a_mul(i: usize, n: &Vector4<f64>) -> Vector4<f64> {
    let (a, b, c, d) = (n[0], n[1], n[2], n[3]);
    match i {
        0 => *n,
        1 => Vector4::new(d, c, -b, -a),
        2 => Vector4::new(-c, d, a, -b),
        _ => Vector4::new(-b, a, -d, c),
    }
}

/// Orthonormal frame `X_i = A_i grad H / |grad H|` and the contact sections
/// `Xbar_1, Xbar_2` obtained by sliding `X_1, X_2` along `X_3` into `xi`.
#[derive(Clone, Copy, Debug)]
pub struct ContactFrame {
    pub base: State4,
    pub x1: Vector4<f64>,
    pub x2: Vector4<f64>,
    pub x3: Vector4<f64>,
    pub xbar1: Vector4<f64>,
    pub xbar2: Vector4<f64>,
    pub reeb: Vector4<f64>,
}

impl ContactFrame {
    pub fn new(p: &HamiltonianParams, z: &State4, frame_tol: f64) -> Result<Self> {
        let g = p.gradient(z);
        let norm = g.norm();
        if norm == 0.0 {
            return Err(Error::DegenerateFrame { value: 0.0 });
        }
        let n = g / norm;
        let (x1, x2, x3) = (a_mul(1, &n), a_mul(2, &n), a_mul(3, &n));
        let l3 = lambda0(z, &x3);
        if l3.abs() < frame_tol {
            return Err(Error::DegenerateFrame { value: l3 });
        }
        let xbar1 = x1 - x3 * (lambda0(z, &x1) / l3);
        let xbar2 = x2 - x3 * (lambda0(z, &x2) / l3);
        Ok(Self { base: *z, x1, x2, x3, xbar1, xbar2, reeb: x3 / l3 })
    }

    pub fn omega(&self) -> f64 {
        dlambda0(&self.xbar1, &self.xbar2)
    }

    /// Projection `TS -> xi` along the Reeb direction.
    pub fn project(&self, w: &Vector4<f64>) -> Vector4<f64> {
        w - self.reeb * lambda0(&self.base, w)
    }

    /// Coordinates of a contact vector in the basis `(Xbar_1, Xbar_2)`.
    pub fn coords(&self, v: &Vector4<f64>) -> Vector2<f64> {
        coords_in(&self.xbar1, &self.xbar2, v)
    }

    pub fn apply_j(&self, v: &Vector4<f64>) -> Vector4<f64> {
        let c = self.coords(v);
        self.xbar2 * c[0] - self.xbar1 * c[1]
    }
}

/// Coordinates of `v` in a `d lambda`-nondegenerate basis `(b1, b2)`, read off
/// with the symplectic pairing so that Reeb components drop out.
pub fn coords_in(b1: &Vector4<f64>, b2: &Vector4<f64>, v: &Vector4<f64>) -> Vector2<f64> {
    let w = dlambda0(b1, b2);
    Vector2::new(dlambda0(v, b2) / w, dlambda0(b1, v) / w)
}

/// Contact basis used to express the linearized flow at `z`.
pub fn frame_basis(p: &HamiltonianParams, z: &State4, kind: FrameKind, frame_tol: f64) -> Result<(Vector4<f64>, Vector4<f64>)> {
    match kind {
        FrameKind::GlobalFrame => {
            let f = ContactFrame::new(p, z, frame_tol)?;
            Ok((f.xbar1, f.xbar2))
        }
        FrameKind::RhoOrbitFrame => {
            let g = p.gradient(z);
            let gg = g.norm_squared();
            let reeb = p.reeb(z);
            let mk = |e: Vector4<f64>| {
                let tangent = e - g * (g.dot(&e) / gg);
                tangent - reeb * lambda0(z, &tangent)
            };
            let b1 = mk(Vector4::new(0.0, 0.0, 1.0, 0.0));
            let b2 = mk(Vector4::new(0.0, 0.0, 0.0, 1.0));
            if dlambda0(&b1, &b2).abs() < frame_tol {
                return Err(Error::DegenerateFrame { value: dlambda0(&b1, &b2) });
            }
            Ok((b1, b2))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State4>,
    pub time_kind: TimeKind,
    pub energy_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &State4 {
        self.states.last().expect("trajectory has at least one node")
    }

    /// CSV with header `t,x1,y1,x2,y2,H`.
    pub fn to_csv(&self, p: &HamiltonianParams) -> String {
        let mut out = String::from("t,x1,y1,x2,y2,H\n");
        for (t, z) in self.times.iter().zip(&self.states) {
            out.push_str(&format!(
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.15e}\n",
                t,
                z[0],
                z[1],
                z[2],
                z[3],
                p.energy(z)
            ));
        }
        out
    }
}

fn pack(z: &State4, m: &Matrix4<f64>) -> [f64; 20] {
    let mut y = [0.0; 20];
    y[..4].copy_from_slice(z.as_slice());
    y[4..].copy_from_slice(m.as_slice());
    y
}

fn unpack(y: &[f64; 20]) -> (State4, Matrix4<f64>) {
    (State4::from_column_slice(&y[..4]), Matrix4::from_column_slice(&y[4..]))
}

/// Flow map with its 4x4 fundamental solution, integrated jointly.
pub fn flow_with_variational(p: &HamiltonianParams, z0: &State4, m0: &Matrix4<f64>, time: f64, kind: TimeKind, opts: &OdeOptions) -> Result<(State4, Matrix4<f64>)> {
    let mut rhs = |_t: f64, y: &[f64; 20]| {
        let (z, m) = unpack(y);
        pack(&p.field(&z, kind), &(p.d_field(&z, kind) * m))
    };
    let y = ode::integrate(&mut rhs, 0.0, pack(z0, m0), time, opts)?;
    Ok(unpack(&y))
}

pub fn flow(p: &HamiltonianParams, z0: &State4, time: f64, kind: TimeKind, opts: &OdeOptions) -> Result<State4> {
    let mut rhs = |_t: f64, y: &[f64; 4]| {
        let z = State4::from_column_slice(y);
        let f = p.field(&z, kind);
        [f[0], f[1], f[2], f[3]]
    };
    let y = ode::integrate(&mut rhs, 0.0, [z0[0], z0[1], z0[2], z0[3]], time, opts)?;
    Ok(State4::from_column_slice(&y))
}

/// Integrates over `[0, time]` recording every accepted step. With
/// `with_variational` the fundamental matrices are returned alongside.
pub fn integrate_flow(
    p: &HamiltonianParams,
    z0: &State4,
    time: f64,
    kind: TimeKind,
    with_variational: bool,
    opts: &OdeOptions,
) -> Result<(Trajectory, Option<Vec<Matrix4<f64>>>)> {
    let h0 = p.energy(z0);
    let mut times = vec![0.0];
    let mut states = vec![*z0];
    let mut mats = vec![Matrix4::identity()];
    if with_variational {
        let mut rhs = |_t: f64, y: &[f64; 20]| {
            let (z, m) = unpack(y);
            pack(&p.field(&z, kind), &(p.d_field(&z, kind) * m))
        };
        ode::integrate_observed(&mut rhs, 0.0, pack(z0, &Matrix4::identity()), time, opts, |_, _, t, y| {
            let (z, m) = unpack(y);
            times.push(t);
            states.push(z);
            mats.push(m);
            std::ops::ControlFlow::Continue(())
        })?;
    } else {
        let mut rhs = |_t: f64, y: &[f64; 4]| {
            let z = State4::from_column_slice(y);
            let f = p.field(&z, kind);
            [f[0], f[1], f[2], f[3]]
        };
        ode::integrate_observed(&mut rhs, 0.0, [z0[0], z0[1], z0[2], z0[3]], time, opts, |_, _, t, y| {
            times.push(t);
            states.push(State4::from_column_slice(y));
            std::ops::ControlFlow::Continue(())
        })?;
    }
    let energy_drift = states.iter().map(|z| (p.energy(z) - h0).abs()).fold(0.0, f64::max);
    let traj = Trajectory { times, states, time_kind: kind, energy_drift };
    Ok((traj, with_variational.then_some(mats)))
}

/// Compresses the linearized Reeb flow along a closed orbit to the 2x2 maps
/// on `xi` in the chosen frame, sampled at `n_samples + 1` uniform nodes of
/// `[0, 1]` (parameter `t` corresponds to Reeb time `t * period`).
#[allow(clippy::too_many_arguments)]
pub fn restrict_linearized_to_xi(
    p: &HamiltonianParams,
    z0: &State4,
    period: f64,
    label: &str,
    frame_kind: FrameKind,
    n_samples: usize,
    frame_tol: f64,
    opts: &OdeOptions,
) -> Result<SymplecticPath> {
    if n_samples < 64 {
        return Err(Error::InvalidInput(format!("n_samples = {n_samples} < 64")));
    }
    let (b1, b2) = frame_basis(p, z0, frame_kind, frame_tol).map_err(|_| Error::FrameDegenerate { t: 0.0 })?;
    let omega0 = dlambda0(&b1, &b2);
    let mut params = Vec::with_capacity(n_samples + 1);
    let mut mats = Vec::with_capacity(n_samples + 1);
    params.push(0.0);
    mats.push(Matrix2::identity());
    let mut z = *z0;
    let mut m = Matrix4::identity();
    let dt = period / n_samples as f64;
    for j in 1..=n_samples {
        let (zn, mn) = flow_with_variational(p, &z, &m, dt, TimeKind::Reeb, opts)?;
        z = zn;
        m = mn;
        let t = j as f64 / n_samples as f64;
        let (c1, c2) = frame_basis(p, &z, frame_kind, frame_tol).map_err(|_| Error::FrameDegenerate { t })?;
        let w1 = m * b1;
        let w2 = m * b2;
        let k1 = coords_in(&c1, &c2, &w1);
        let k2 = coords_in(&c1, &c2, &w2);
        // frame normalisation: det of the compressed map is omega0 / omega(t)
        let scale = (dlambda0(&c1, &c2) / omega0).abs();
        if !scale.is_finite() || scale == 0.0 {
            return Err(Error::FrameDegenerate { t });
        }
        mats.push(Matrix2::new(k1[0], k2[0], k1[1], k2[1]));
        params.push(t);
    }
    Ok(SymplecticPath {
        params,
        matrices: mats,
        frame_kind,
        orbit_label: label.to_string(),
        period,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;
    use std::f64::consts::PI;

    fn validated() -> HamiltonianParams {
        Preset::Validated.params(0.5)
    }

    #[test]
    fn hamiltonian_values() {
        let p = validated();
        let ev = p.hamiltonian_eval(&State4::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(ev.value, 0.5);
        // H2(2 eps, 0) = -4 eps^4 / 3
        let e: f64 = 0.5;
        assert!((p.h2(2.0 * e, 0.0) + 4.0 * e.powi(4) / 3.0).abs() < 1e-15);
        assert_eq!(p.hamiltonian_eval(&State4::zeros()).gradient, Vector4::zeros());
    }

    #[test]
    fn hessian_matches_gradient_differences() {
        let p = validated();
        let z = State4::new(0.3, -0.2, 0.7, 0.4);
        let hess = p.hamiltonian_eval(&z).hessian;
        let d = 1e-6;
        for j in 0..4 {
            let mut e = Vector4::zeros();
            e[j] = d;
            let col = (p.gradient(&(z + e)) - p.gradient(&(z - e))) / (2.0 * d);
            for i in 0..4 {
                assert!((col[i] - hess[(i, j)]).abs() < 1e-8);
            }
        }
        assert_eq!(hess, hess.transpose());
    }

    #[test]
    fn reeb_field_on_gamma2() {
        let p = validated();
        let vf = p.vector_fields(&State4::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(vf.x_h, Vector4::new(0.0, 1.0, 0.0, 0.0));
        assert!((vf.h - 2.0).abs() < 1e-15);
        assert!((vf.reeb - Vector4::new(0.0, 2.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reeb_normalised_and_in_kernel_of_dlambda() {
        let p = validated();
        let z = p.surface_project(&State4::new(0.6, 0.5, 0.4, -0.3), 1e-12, 1.0, 50).unwrap();
        let r = p.reeb(&z);
        assert!((lambda0(&z, &r) - 1.0).abs() < 1e-12);
        let f = ContactFrame::new(&p, &z, 1e-8).unwrap();
        for v in [f.x1, f.x2, f.x3, f.xbar1, f.xbar2] {
            assert!(dlambda0(&r, &v).abs() < 1e-12);
        }
    }

    #[test]
    fn not_star_shaped_detected() {
        let p = validated();
        // inside the unit ball near the origin lambda(X_H) can only vanish at 0
        assert!(matches!(p.vector_fields(&State4::zeros()), Err(Error::NotStarShaped { .. })));
    }

    #[test]
    fn frame_on_gamma2_spans_x2y2_plane() {
        let p = validated();
        for k in 0..8 {
            let th = k as f64 * 0.7;
            let z = State4::new(th.cos(), th.sin(), 0.0, 0.0);
            let f = ContactFrame::new(&p, &z, 1e-8).unwrap();
            for v in [f.xbar1, f.xbar2] {
                assert!(v[0].abs() < 1e-14 && v[1].abs() < 1e-14);
            }
            assert!((f.omega() - 1.0).abs() < 1e-12);
            assert!(f.project(&f.reeb).norm() < 1e-14);
        }
    }

    #[test]
    fn contact_basics() {
        let z = State4::new(1.0, 0.0, 0.0, 0.0);
        let (l, _) = contact_eval(&z, &Vector4::new(0.0, 1.0, 0.0, 0.0), &Vector4::zeros());
        assert_eq!(l, 0.5);
        let u = Vector4::new(0.3, 0.1, -2.0, 4.0);
        assert_eq!(dlambda0(&u, &u), 0.0);
        assert_eq!(dlambda0(&Vector4::new(1.0, 0.0, 0.0, 0.0), &Vector4::new(0.0, 1.0, 0.0, 0.0)), 1.0);
    }

    #[test]
    fn surface_projection() {
        let p = validated();
        let z = State4::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(p.surface_project(&z, 1e-10, 0.1, 50).unwrap(), z);
        let w = p.surface_project(&State4::new(1.0 + 1e-6, 0.0, 0.0, 0.0), 1e-10, 0.1, 50).unwrap();
        assert!((p.energy(&w) - 0.5).abs() < 1e-12);
        assert!(w[1] == 0.0 && w[2] == 0.0 && w[3] == 0.0);
        assert!(p.surface_project(&State4::new(3.0, 0.0, 0.0, 0.0), 1e-10, 0.1, 50).is_err());
    }

    #[test]
    fn gamma2_closes_after_pi() {
        let p = validated();
        let z0 = State4::new(1.0, 0.0, 0.0, 0.0);
        let (traj, mats) = integrate_flow(&p, &z0, PI, TimeKind::Reeb, true, &OdeOptions::with_tol(1e-12)).unwrap();
        assert!((traj.last() - z0).norm() < 1e-8);
        assert!(traj.energy_drift < 1e-10);
        for m in mats.unwrap() {
            assert!((m.determinant() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn csv_export_header() {
        let p = validated();
        let z0 = State4::new(1.0, 0.0, 0.0, 0.0);
        let (traj, _) = integrate_flow(&p, &z0, 0.5, TimeKind::Hamiltonian, false, &OdeOptions::default()).unwrap();
        let csv = traj.to_csv(&p);
        assert!(csv.starts_with("t,x1,y1,x2,y2,H\n"));
        assert_eq!(csv.lines().count(), traj.times.len() + 1);
    }
}
