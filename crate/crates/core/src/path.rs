//! Sampled arcs of 2x2 symplectic matrices on `[0, 1]`.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    /// Constant `(x2, y2)`-plane basis carried to `xi`; natural along the special orbits.
    RhoOrbitFrame,
    /// Global trivialization by `Xbar_1, Xbar_2`.
    GlobalFrame,
}

#[derive(Clone, Debug)]
pub struct SymplecticPath {
    /// Increasing nodes with `params[0] = 0` and `params[last] = 1`.
    pub params: Vec<f64>,
    pub matrices: Vec<Matrix2<f64>>,
    pub frame_kind: FrameKind,
    pub orbit_label: String,
    /// Reeb period of the underlying orbit (1 for synthetic paths).
    pub period: f64,
}

impl SymplecticPath {
    /// Uniformly sampled path from a matrix-valued function of `t in [0,1]`.
    pub fn from_fn(n_intervals: usize, label: &str, frame_kind: FrameKind, period: f64, f: impl Fn(f64) -> Matrix2<f64>) -> Self {
        let params: Vec<f64> = (0..=n_intervals).map(|j| j as f64 / n_intervals as f64).collect();
        let mut matrices: Vec<Matrix2<f64>> = params.iter().map(|&t| f(t)).collect();
        matrices[0] = Matrix2::identity();
        Self { params, matrices, frame_kind, orbit_label: label.to_string(), period }
    }

    pub fn identity(n_intervals: usize) -> Self {
        Self::from_fn(n_intervals, "identity", FrameKind::GlobalFrame, 1.0, |_| Matrix2::identity())
    }

    /// Rigid rotation by the total angle `2 pi theta`.
    pub fn rotation(n_intervals: usize, theta: f64) -> Self {
        Self::from_fn(n_intervals, "rotation", FrameKind::GlobalFrame, 1.0, |t| rotation(2.0 * std::f64::consts::PI * theta * t))
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn endpoint(&self) -> &Matrix2<f64> {
        self.matrices.last().expect("non-empty path")
    }

    pub fn max_det_defect(&self) -> f64 {
        self.matrices.iter().map(|m| (m.determinant() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn check_symplectic(&self, path_tol: f64) -> Result<()> {
        if self.matrices.first() != Some(&Matrix2::identity()) {
            return Err(Error::InvalidInput("path does not start at the identity".into()));
        }
        let defect = self.max_det_defect();
        if defect > path_tol {
            return Err(Error::InvalidInput(format!("det defect {defect} exceeds path_tol {path_tol}")));
        }
        Ok(())
    }

    /// The `k`-fold iterate, built from the group law `Phi(j + s) = Phi(s) Phi(1)^j`.
    pub fn iterate(&self, k: usize) -> Self {
        assert!(k >= 1);
        if k == 1 {
            return self.clone();
        }
        let end = *self.endpoint();
        let mut params = Vec::with_capacity(k * (self.len() - 1) + 1);
        let mut matrices = Vec::with_capacity(params.capacity());
        let mut power = Matrix2::identity();
        for j in 0..k {
            let start = if j == 0 { 0 } else { 1 };
            for idx in start..self.len() {
                params.push((j as f64 + self.params[idx]) / k as f64);
                matrices.push(self.matrices[idx] * power);
            }
            power = end * power;
        }
        *params.last_mut().unwrap() = 1.0;
        Self {
            params,
            matrices,
            frame_kind: self.frame_kind,
            orbit_label: format!("{}^{k}", self.orbit_label),
            period: self.period * k as f64,
        }
    }

    /// Change of trivialization: `M(t) Phi(t) M(0)^{-1}`.
    pub fn conjugate(&self, change: &[Matrix2<f64>], frame_kind: FrameKind) -> Result<Self> {
        if change.len() != self.len() {
            return Err(Error::InvalidInput("frame change length mismatch".into()));
        }
        let m0_inv = change[0].try_inverse().ok_or(Error::FrameDegenerate { t: 0.0 })?;
        let matrices = self.matrices.iter().zip(change).map(|(phi, m)| m * phi * m0_inv).collect();
        Ok(Self { params: self.params.clone(), matrices, frame_kind, orbit_label: self.orbit_label.clone(), period: self.period })
    }
}

pub fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// The standard complex structure `J_0 = [[0, -1], [1, 0]]`.
pub fn j0() -> Matrix2<f64> {
    Matrix2::new(0.0, -1.0, 1.0, 0.0)
}

/// Signed angle from `a` to `b` in `(-pi, pi]`.
pub fn angle_between(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    (a[0] * b[1] - a[1] * b[0]).atan2(a.dot(b))
}

/// Total turning of a sampled planar curve, in full turns, plus the largest
/// single-step increment (radians). The curve is open; pass the closing
/// sample explicitly to measure a loop.
pub fn accumulated_turns(vs: impl IntoIterator<Item = Vector2<f64>>) -> (f64, f64) {
    let mut it = vs.into_iter();
    let Some(mut prev) = it.next() else {
        return (0.0, 0.0);
    };
    let mut total = 0.0;
    let mut worst = 0.0_f64;
    for v in it {
        let d = angle_between(&prev, &v);
        worst = worst.max(d.abs());
        total += d;
        prev = v;
    }
    (total / (2.0 * std::f64::consts::PI), worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterate_matches_direct_rotation() {
        let p = SymplecticPath::rotation(100, 0.3).iterate(3);
        let direct = rotation(2.0 * std::f64::consts::PI * 0.9);
        assert!((p.endpoint() - direct).norm() < 1e-12);
        assert_eq!(p.len(), 301);
        assert!(p.params.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn accumulated_turns_of_circle() {
        let vs = (0..=64).map(|j| {
            let a = -2.0 * std::f64::consts::PI * j as f64 / 64.0;
            Vector2::new(a.cos(), a.sin())
        });
        let (turns, worst) = accumulated_turns(vs);
        assert!((turns + 1.0).abs() < 1e-12);
        assert!(worst < 0.1);
    }
}
