//! The asymptotic operator `L_S = -J0 d/dt - S(t)` on 1-periodic loops in
//! R^2, its discretization on a staggered grid, eigensection windings and
//! the spectral form of the Conley–Zehnder index.
//!
//! `eta_1` lives on the nodes `t_j = j/n` and `eta_2` on the half nodes
//! `t_{j+1/2}`. Derivatives use the fourth-order staggered stencil and the
//! `S_12` coupling a fourth-order interpolation together with its transpose,
//! so the assembled matrix is symmetric entry by entry.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::index::{analytic_monodromy_oracle, generator, integrated_path, iterate_index, rho_frame_correction, CZResult, CzMethod};
use crate::ode::OdeOptions;
use crate::orbits::{OrbitLabel, ReebOrbit, ValidatedModel};
use crate::path::{accumulated_turns, j0, FrameKind, SymplecticPath};

/// Periodic samples of `S` on `[0, 1)` at uniform nodes.
#[derive(Clone, Debug)]
pub struct OperatorModel {
    pub label: String,
    pub s_nodes: Vec<Matrix2<f64>>,
    /// Largest `|S - S^T|` before symmetrization.
    pub asymmetry: f64,
    /// Largest difference between the derivative stencil at `h` and `2h`.
    pub fd_residual: f64,
}

impl OperatorModel {
    pub fn constant(s: Matrix2<f64>, label: &str, n: usize) -> Self {
        Self { label: label.to_string(), s_nodes: vec![s; n.max(4)], asymmetry: 0.0, fd_residual: 0.0 }
    }

    /// `S` for the closed-form flow `exp(t T [[0,k1],[k2,0]])`: `T diag(k2, -k1)`.
    pub fn analytic(k1: f64, k2: f64, period: f64, label: &str, n: usize) -> Self {
        Self::constant(Matrix2::new(period * k2, 0.0, 0.0, -period * k1), label, n)
    }

    /// Periodic cubic Lagrange interpolation of the node samples.
    pub fn s_at(&self, t: f64) -> Matrix2<f64> {
        let n = self.s_nodes.len();
        let x = t.rem_euclid(1.0) * n as f64;
        let i = x.floor() as isize;
        let u = x - i as f64;
        let at = |k: isize| self.s_nodes[k.rem_euclid(n as isize) as usize];
        let w = [-u * (u - 1.0) * (u - 2.0) / 6.0, (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0, -(u + 1.0) * u * (u - 2.0) / 2.0, (u + 1.0) * u * (u - 1.0) / 6.0];
        at(i - 1) * w[0] + at(i) * w[1] + at(i + 1) * w[2] + at(i + 2) * w[3]
    }

    /// `S` of the `k`-fold iterate: `k S(k t)`.
    pub fn iterate(&self, k: usize) -> Self {
        let n = self.s_nodes.len();
        let s_nodes = (0..k * n).map(|j| self.s_nodes[j % n] * k as f64).collect();
        Self { label: format!("{}^{k}", self.label), s_nodes, asymmetry: self.asymmetry, fd_residual: self.fd_residual * (k * k) as f64 }
    }

    pub fn is_constant(&self) -> bool {
        self.s_nodes.iter().all(|s| (s - self.s_nodes[0]).abs().max() == 0.0)
    }
}

/// `S = -J0 Phi' Phi^{-1}` from a uniformly sampled symplectic path, with
/// `Phi'` by the five-point stencil and the path continued periodically
/// through `Phi(t + 1) = Phi(t) Phi(1)`.
pub fn build_s(path: &SymplecticPath, asym_tol: f64) -> Result<OperatorModel> {
    let n = path.len() - 1;
    if n < 8 {
        return Err(Error::InvalidInput("path too short to differentiate".into()));
    }
    let end = *path.endpoint();
    let end_inv = end.try_inverse().ok_or(Error::FrameDegenerate { t: 1.0 })?;
    let phi = |j: isize| {
        let q = j.div_euclid(n as isize);
        let r = j.rem_euclid(n as isize) as usize;
        let mut m = path.matrices[r];
        let step = if q >= 0 { end } else { end_inv };
        for _ in 0..q.unsigned_abs() {
            m *= step;
        }
        m
    };
    let h = 1.0 / n as f64;
    let mut s_nodes = Vec::with_capacity(n);
    let (mut asym, mut resid) = (0.0_f64, 0.0_f64);
    for j in 0..n as isize {
        let d1 = (phi(j - 2) - phi(j - 1) * 8.0 + phi(j + 1) * 8.0 - phi(j + 2)) / (12.0 * h);
        let d2 = (phi(j - 4) - phi(j - 2) * 8.0 + phi(j + 2) * 8.0 - phi(j + 4)) / (24.0 * h);
        let inv = phi(j).try_inverse().ok_or(Error::FrameDegenerate { t: j as f64 * h })?;
        let s = -j0() * d1 * inv;
        let s2 = -j0() * d2 * inv;
        asym = asym.max((s - s.transpose()).abs().max());
        resid = resid.max((s - s2).abs().max());
        s_nodes.push((s + s.transpose()) * 0.5);
    }
    if asym > asym_tol {
        return Err(Error::AsymmetryTooLarge { residual: asym });
    }
    Ok(OperatorModel { label: path.orbit_label.clone(), s_nodes, asymmetry: asym, fd_residual: resid })
}

const D_NEAR: f64 = 9.0 / 8.0;
const D_FAR: f64 = -1.0 / 24.0;
const I_NEAR: f64 = 9.0 / 16.0;
const I_FAR: f64 = -1.0 / 16.0;

/// Row-major `2n x 2n` matrix; unknown `2j` is `eta_1(t_j)`, unknown `2j+1`
/// is `eta_2(t_{j+1/2})`.
pub fn assemble(model: &OperatorModel, n: usize) -> Vec<f64> {
    let dim = 2 * n;
    let h = 1.0 / n as f64;
    let mut a = vec![0.0; dim * dim];
    let half = |k: isize| k.rem_euclid(n as isize) as usize;
    for j in 0..n {
        let tj = j as f64 * h;
        let s_node = model.s_at(tj);
        let s_half = model.s_at(tj + 0.5 * h);
        a[(2 * j) * dim + 2 * j] = -s_node[(0, 0)];
        a[(2 * j + 1) * dim + 2 * j + 1] = -s_half[(1, 1)];
        let s12 = 0.5 * (s_node[(0, 1)] + s_node[(1, 0)]);
        let ji = j as isize;
        for (k, d, w) in [(ji, D_NEAR, I_NEAR), (ji - 1, -D_NEAR, I_NEAR), (ji + 1, D_FAR, I_FAR), (ji - 2, -D_FAR, I_FAR)] {
            let col = 2 * half(k) + 1;
            let v = d / h - s12 * w;
            a[(2 * j) * dim + col] += v;
            a[col * dim + 2 * j] += v;
        }
    }
    a
}

/// `(eta_1(t_j), eta_2(t_j))` at nodes `j = 0..=n`, `eta_2` interpolated.
fn node_values(vec: &[f64], n: usize) -> Vec<Vector2<f64>> {
    let e2 = |k: isize| vec[2 * k.rem_euclid(n as isize) as usize + 1];
    (0..=n)
        .map(|j| {
            let jj = (j % n) as isize;
            let y = I_NEAR * (e2(jj) + e2(jj - 1)) + I_FAR * (e2(jj + 1) + e2(jj - 2));
            Vector2::new(vec[2 * (j % n)], y)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Eigenpair {
    pub value: f64,
    pub winding: i64,
    /// Section samples at the nodes `0..=n`.
    #[serde(skip)]
    pub section: Vec<Vector2<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub label: String,
    pub n_nodes: usize,
    /// Trusted band, sorted by eigenvalue.
    pub band: Vec<Eigenpair>,
    /// Largest winding magnitude kept in the band.
    pub band_limit: i64,
    pub excluded: usize,
    pub nu_neg: Option<f64>,
    pub nu_pos: Option<f64>,
    pub gap: f64,
    pub max_asymmetry: f64,
}

impl SpectrumReport {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.band.iter().map(|e| e.value).collect()
    }

    pub fn windings(&self) -> Vec<i64> {
        self.band.iter().map(|e| e.winding).collect()
    }

    fn winding_of(&self, value: Option<f64>) -> Option<i64> {
        let v = value?;
        self.band.iter().find(|e| e.value == v).map(|e| e.winding)
    }
}

/// Full spectrum of the discrete operator, unsorted by band.
pub fn discrete_eigenvalues(model: &OperatorModel, n: usize) -> Result<Vec<f64>> {
    Ok(symmetric_eigen(&assemble(model, n), 2 * n)?.values)
}

pub fn discretize_and_solve(model: &OperatorModel, n: usize, tol: &Tolerances) -> Result<SpectrumReport> {
    if n < 128 || !n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("n_nodes = {n} must be even and >= 128")));
    }
    let a = assemble(model, n);
    let dim = 2 * n;
    let mut max_asym = 0.0_f64;
    for i in 0..dim {
        for j in 0..i {
            max_asym = max_asym.max((a[i * dim + j] - a[j * dim + i]).abs());
        }
    }
    let eig = symmetric_eigen(&a, dim)?;
    let band_limit = (n / 16) as i64;
    let mut band = Vec::new();
    let mut excluded = 0;
    for (value, vec) in eig.values.iter().zip(&eig.vectors) {
        let section = node_values(vec, n);
        let floor = section.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let (turns, worst) = accumulated_turns(section.iter().copied());
        let winding = turns.round();
        if floor < tol.wind_floor || worst >= PI / 2.0 || (turns - winding).abs() > 1e-6 || winding.abs() as i64 > band_limit {
            excluded += 1;
            continue;
        }
        band.push(Eigenpair { value: *value, winding: winding as i64, section });
    }
    let nu_neg = band.iter().map(|e| e.value).filter(|v| *v < 0.0).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |x| x.max(v))));
    let nu_pos = band.iter().map(|e| e.value).filter(|v| *v >= 0.0).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |x| x.min(v))));
    let gap = band.iter().map(|e| e.value.abs()).fold(f64::INFINITY, f64::min);
    Ok(SpectrumReport { label: model.label.clone(), n_nodes: n, band, band_limit, excluded, nu_neg, nu_pos, gap, max_asymmetry: max_asym })
}

/// Eigenvalues of the discrete operator for constant `S`, mode by mode:
/// each Fourier mode reduces to a Hermitian 2x2 symbol.
pub fn fourier_oracle(s: &Matrix2<f64>, n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let s12 = 0.5 * (s[(0, 1)] + s[(1, 0)]);
    let (a, e) = (-s[(0, 0)], -s[(1, 1)]);
    let mut out = Vec::with_capacity(2 * n);
    for m in 0..n {
        let th = 2.0 * PI * m as f64 / n as f64;
        let d = (2.0 * D_NEAR * (th / 2.0).sin() + 2.0 * D_FAR * (1.5 * th).sin()) / h;
        let c = 2.0 * I_NEAR * (th / 2.0).cos() + 2.0 * I_FAR * (1.5 * th).cos();
        let off2 = d * d + (s12 * c).powi(2);
        let root = ((a - e).powi(2) + 4.0 * off2).sqrt();
        out.push(0.5 * (a + e - root));
        out.push(0.5 * (a + e + root));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `mu = 2 wind(nu_neg) + p` with `p = wind(nu_pos) - wind(nu_neg)`.
pub fn generalized_cz(report: &SpectrumReport, frame_correction: i64, gap_tol: f64) -> Result<CZResult> {
    if report.gap < gap_tol {
        return Err(Error::DegenerateOrbit { margin: report.gap });
    }
    let (Some(wn), Some(wp)) = (report.winding_of(report.nu_neg), report.winding_of(report.nu_pos)) else {
        return Err(Error::BandTooNarrow("band lacks an eigenvalue of one sign".into()));
    };
    let p = wp - wn;
    if !(0..=1).contains(&p) {
        return Err(Error::BandTooNarrow(format!("wind(nu_pos) - wind(nu_neg) = {p}")));
    }
    Ok(CZResult::new(2 * wn + p, frame_correction, CzMethod::Spectral, None))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumAudit {
    pub monotone: bool,
    pub pairs: bool,
    pub independent: bool,
    pub min_independence: f64,
    pub violations: Vec<String>,
}

impl SpectrumAudit {
    pub fn passed(&self) -> bool {
        self.monotone && self.pairs && self.independent
    }
}

/// Monotone windings, two eigenvalues per winding, and pointwise
/// independence of eigensections sharing a winding.
pub fn spectrum_property_audit(report: &SpectrumReport, eig_tol: f64) -> Result<SpectrumAudit> {
    let ws = report.windings();
    let (lo, hi) = (ws.iter().copied().min().unwrap_or(0), ws.iter().copied().max().unwrap_or(0));
    if lo > -2 || hi < 2 {
        return Err(Error::BandTooNarrow(format!("band covers windings {lo}..{hi}")));
    }
    let mut violations = Vec::new();
    let monotone = ws.windows(2).all(|w| w[0] <= w[1]);
    if !monotone {
        violations.push("winding decreases along the sorted band".to_string());
    }
    let mut pairs = true;
    for w in lo..=hi {
        let count = ws.iter().filter(|x| **x == w).count();
        if count != 2 {
            pairs = false;
            violations.push(format!("winding {w} attained {count} times"));
        }
    }
    let mut min_ind = f64::INFINITY;
    for (i, a) in report.band.iter().enumerate() {
        for b in &report.band[i + 1..] {
            if a.winding != b.winding || (a.value - b.value).abs() <= eig_tol * (1.0 + a.value.abs()) {
                continue;
            }
            for (u, v) in a.section.iter().zip(&b.section) {
                let det = (u[0] * v[1] - u[1] * v[0]).abs() / (u.norm() * v.norm());
                min_ind = min_ind.min(det);
            }
        }
    }
    let independent = min_ind > 1e-8;
    if !independent {
        violations.push(format!("eigensections become dependent (min |det| {min_ind:.3e})"));
    }
    Ok(SpectrumAudit { monotone, pairs, independent, min_independence: min_ind, violations })
}

/// Spectral index of the `k`-fold iterate of a special orbit, from the
/// closed-form `S` in the orbit frame.
pub fn special_orbit_spectrum(
    model: &ValidatedModel,
    orbit: &ReebOrbit,
    k: usize,
    n_nodes: usize,
    tol: &Tolerances,
) -> Result<(SpectrumReport, CZResult)> {
    let (k1, k2) = generator(model, orbit.label);
    let op = OperatorModel::analytic(k1, k2, orbit.reeb_period, orbit.label.name(), 8).iterate(k);
    let corr = rho_frame_correction(&model.params, orbit, 256, tol.frame_tol)?;
    let report = discretize_and_solve(&op, n_nodes, tol)?;
    let cz = generalized_cz(&report, k as i64 * corr, tol.gap_tol)?;
    Ok((report, cz))
}

/// The index of the `k`-fold iterate by all three methods.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CzMethods {
    pub label: OrbitLabel,
    pub iterate: usize,
    pub winding_interval: CZResult,
    pub analytic: CZResult,
    pub spectral: CZResult,
    pub agree: bool,
}

pub fn cz_all_methods(model: &ValidatedModel, orbit: &ReebOrbit, k: usize, n_nodes: usize, tol: &Tolerances) -> Result<CzMethods> {
    if k == 0 {
        return Err(Error::InvalidInput("iterate must be at least 1".into()));
    }
    let corr = rho_frame_correction(&model.params, orbit, 256, tol.frame_tol)?;
    let opts = OdeOptions::with_tol(1e-12);
    let mut n = 256;
    let winding_interval = loop {
        let path = integrated_path(model, orbit, FrameKind::RhoOrbitFrame, n, tol, &opts)?;
        match iterate_index(&path, k, corr, tol.degen_tol) {
            Err(Error::SamplingTooCoarse { .. }) if n < 1 << 14 => n *= 2,
            other => break other?,
        }
    };
    let mut analytic = iterate_index(&analytic_monodromy_oracle(model, orbit, n), k, corr, tol.degen_tol)?;
    analytic.method = CzMethod::AnalyticOracle;
    let (_, spectral) = special_orbit_spectrum(model, orbit, k, n_nodes, tol)?;
    let agree = winding_interval.mu_global == analytic.mu_global && analytic.mu_global == spectral.mu_global;
    Ok(CzMethods { label: orbit.label, iterate: k, winding_interval, analytic, spectral, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }


    fn setup() -> (ValidatedModel, crate::orbits::SpecialOrbits) {
        let m = ValidatedModel::new(&crate::config::Preset::Validated.params(0.5), &tol()).unwrap();
        let o = crate::orbits::special_orbits(&m).unwrap();
        (m, o)
    }

    #[test]
    fn special_orbits_spectral_index() {
        let (m, o) = setup();
        for (orb, mu) in [(&o.p1, 1), (&o.p2, 2), (&o.p3, 3)] {
            let (r, cz) = special_orbit_spectrum(&m, orb, 1, 128, &tol()).unwrap();
            assert_eq!(cz.mu_global, mu, "{:?}", orb.label);
            assert!(r.gap > 1e-6);
            assert!(spectrum_property_audit(&r, 1e-8).unwrap().passed());
        }
        let (r, cz) = special_orbit_spectrum(&m, &o.p2, 1, 128, &tol()).unwrap();
        assert_eq!(cz.mu_local, 0);
        assert_eq!(r.winding_of(r.nu_neg), Some(0));
        assert_eq!(r.winding_of(r.nu_pos), Some(0));
    }

    #[test]
    fn constant_s_matches_fourier_oracle_for_p2() {
        let (m, o) = setup();
        let (k1, k2) = generator(&m, o.p2.label);
        let s = Matrix2::new(o.p2.reeb_period * k2, 0.0, 0.0, -o.p2.reeb_period * k1);
        let dense = discrete_eigenvalues(&OperatorModel::constant(s, "P2", 8), 128).unwrap();
        for (a, b) in dense.iter().zip(&fourier_oracle(&s, 128)) {
            assert!((a - b).abs() < 1e-6 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn integrated_path_operator() {
        let (m, o) = setup();
        let opts = crate::ode::OdeOptions::with_tol(1e-12);
        for (orb, mu) in [(&o.p1, -1), (&o.p2, 0), (&o.p3, 1)] {
            let path = crate::index::integrated_path(&m, orb, crate::path::FrameKind::RhoOrbitFrame, 256, &tol(), &opts).unwrap();
            let op = build_s(&path, 1e-6).unwrap();
            assert!(op.fd_residual < 1e-5, "{}", op.fd_residual);
            let r = discretize_and_solve(&op, 128, &tol()).unwrap();
            assert_eq!(generalized_cz(&r, 0, 1e-6).unwrap().mu_local, mu);
        }
    }

    #[test]
    fn matrix_is_exactly_symmetric() {
        let m = OperatorModel { label: "x".into(), s_nodes: (0..50).map(|j| Matrix2::new(j as f64, 0.3, 0.3, -1.0)).collect(), asymmetry: 0.0, fd_residual: 0.0 };
        let a = assemble(&m, 128);
        let d = 256;
        for i in 0..d {
            for j in 0..d {
                assert_eq!(a[i * d + j], a[j * d + i]);
            }
        }
    }

    #[test]
    fn zero_operator_spectrum() {
        let m = OperatorModel::constant(Matrix2::zeros(), "zero", 8);
        let r = discretize_and_solve(&m, 128, &tol()).unwrap();
        for w in -3i64..=3 {
            let vals: Vec<f64> = r.band.iter().filter(|e| e.winding == w).map(|e| e.value).collect();
            assert_eq!(vals.len(), 2);
            for v in vals {
                assert!((v - 2.0 * PI * w as f64).abs() < 1e-3, "w {w} v {v}");
            }
        }
        let audit = spectrum_property_audit(&r, 1e-8).unwrap();
        assert!(audit.monotone && audit.pairs);
        assert!(matches!(generalized_cz(&r, 0, 1e-6), Err(Error::DegenerateOrbit { .. })));
    }

    #[test]
    fn rotation_operator() {
        let theta = 0.3;
        let path = SymplecticPath::rotation(512, theta);
        let m = build_s(&path, 1e-6).unwrap();
        assert!((m.s_nodes[7] - Matrix2::identity() * 2.0 * PI * theta).abs().max() < 1e-9);
        let r = discretize_and_solve(&m, 128, &tol()).unwrap();
        for e in &r.band {
            if e.winding.abs() <= 2 {
                assert!((e.value - 2.0 * PI * (e.winding as f64 - theta)).abs() < 1e-3);
            }
        }
        assert_eq!(generalized_cz(&r, 0, 1e-6).unwrap().mu_local, 1);
    }

    #[test]
    fn identity_path_gives_zero_s() {
        let m = build_s(&SymplecticPath::identity(64), 1e-6).unwrap();
        assert!(m.s_nodes.iter().all(|s| s.abs().max() == 0.0));
    }

    #[test]
    fn fourier_oracle_matches_dense_solve() {
        let s = Matrix2::new(0.9, 0.0, 0.0, -0.4);
        let m = OperatorModel::constant(s, "c", 8);
        let dense = discrete_eigenvalues(&m, 128).unwrap();
        let oracle = fourier_oracle(&s, 128);
        for (a, b) in dense.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-6 * (1.0 + b.abs()), "{a} vs {b}");
        }
        let coupled = Matrix2::new(0.9, 0.5, 0.5, -0.4);
        let dense = discrete_eigenvalues(&OperatorModel::constant(coupled, "c", 8), 128).unwrap();
        for (a, b) in dense.iter().zip(&fourier_oracle(&coupled, 128)) {
            assert!((a - b).abs() < 1e-6 * (1.0 + b.abs()));
        }
    }
}
