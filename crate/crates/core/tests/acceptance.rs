//! One test per acceptance criterion, validated preset at eps = 0.5 unless
//! the criterion says otherwise.

use std::f64::consts::PI;
use std::process::Command;

use reeb_lab::config::{IntegratorLimits, Preset, Tolerances};
use reeb_lab::index::{generator, p2_eigenvectors, p2_quadrants, PairingSign, Quadrant};
use reeb_lab::knots::{linking_number, self_linking, ClosedCurve, PushSection, DEFAULT_PUSH_OFFSET};
use reeb_lab::leaves::{assemble_leaf, cr_residual, foliation_atlas, integrate_profile, strong_section_check, End, EndLimit, LeafId, Verdict, DEFAULT_NS};
use reeb_lab::orbits::{level_grid, resonant_orbit_scan, separatrix_and_homoclinics, special_orbits, LaunchMode, OrbitLabel, SpecialOrbits, ValidatedModel};
use reeb_lab::spectrum::{cz_all_methods, discrete_eigenvalues, fourier_oracle, special_orbit_spectrum, spectrum_property_audit};
use reeb_lab::validate::{run_validate, Status};
use reeb_lab::{Config, State4};

const EPS: f64 = 0.5;

fn setup() -> (ValidatedModel, SpecialOrbits, Tolerances) {
    let tol = Tolerances::default();
    let m = ValidatedModel::new(&Preset::Validated.params(EPS), &tol).unwrap();
    let o = special_orbits(&m).unwrap();
    (m, o, tol)
}

fn report(criterion: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {criterion:2} {name}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_periods_and_chain() {
    let (_, o, _) = setup();
    let e4 = EPS.powi(4);
    let closed = [PI * (1.0 - 7.0 * e4 / 48.0), PI, PI * (1.0 + 8.0 * e4 / 3.0)];
    let periods = o.periods();
    let err = periods.iter().zip(closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let [t1, t2, t3] = periods;
    let chain = t1 < t2 && t2 < t3 && t3 < 2.0 * t1;
    report(1, "periods", err <= 1e-9 && chain, format!("max error {err:.2e}, chain {chain}"));
}

#[test]
fn criterion_02_index_triple_and_iterates() {
    let (m, o, tol) = setup();
    let mut ok = true;
    let mut seen = Vec::new();
    for (orb, want) in [(&o.p1, 1), (&o.p2, 2), (&o.p3, 3)] {
        let r = cz_all_methods(&m, orb, 1, 256, &tol).unwrap();
        ok &= r.agree && r.spectral.mu_global == want;
        seen.push((r.winding_interval.mu_global, r.analytic.mu_global, r.spectral.mu_global));
    }
    for k in 1..=4 {
        let r = cz_all_methods(&m, &o.p2, k, 256, &tol).unwrap();
        ok &= r.agree && r.winding_interval.mu_global == 2 * k as i64;
        seen.push((r.winding_interval.mu_global, r.analytic.mu_global, r.spectral.mu_global));
    }
    report(2, "index triple", ok, format!("{seen:?}"));
}

#[test]
fn criterion_03_spectrum_audit() {
    let (m, o, tol) = setup();
    let mut ok = true;
    let mut worst = 0.0_f64;
    for orb in [&o.p1, &o.p2, &o.p3] {
        let (rep, _) = special_orbit_spectrum(&m, orb, 1, 256, &tol).unwrap();
        ok &= spectrum_property_audit(&rep, tol.eig_tol).unwrap().passed();
        // the closed-form operator along a binding orbit has constant S
        let (k1, k2) = generator(&m, orb.label);
        let s = nalgebra::Matrix2::new(orb.reeb_period * k2, 0.0, 0.0, -orb.reeb_period * k1);
        let op = reeb_lab::spectrum::OperatorModel::constant(s, orb.label.name(), 8);
        let mut a = discrete_eigenvalues(&op, 256).unwrap();
        let mut b = fourier_oracle(&s, 256);
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        ok &= a.len() == b.len();
        worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
        // the band values of the orbit spectrum appear in the oracle list
        for e in &rep.band {
            worst = worst.max(b.iter().map(|y| (y - e.value).abs()).fold(f64::INFINITY, f64::min));
        }
    }
    report(3, "spectrum audit", ok && worst <= 1e-6, format!("max oracle gap {worst:.2e}"));
}

#[test]
fn criterion_04_linking() {
    let (m, o, tol) = setup();
    let curves: Vec<ClosedCurve> = [&o.p1, &o.p2, &o.p3].iter().map(|orb| ClosedCurve::from_orbit(orb, 512)).collect();
    let mut ok = true;
    let mut worst = 0.0_f64;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let l = linking_number(&curves[i], &curves[j], 0, &tol).unwrap();
        ok &= l.rounded == 0 && l.guard < 0.05;
        worst = worst.max(l.guard);
    }
    for orb in [&o.p1, &o.p2, &o.p3] {
        let l = self_linking(&m.params, orb, 512, DEFAULT_PUSH_OFFSET, PushSection::Xbar1, 0, &tol).unwrap();
        ok &= l.rounded == -1 && l.guard < 0.05;
        worst = worst.max(l.guard);
    }
    let n = 512;
    let fibre = |first: bool| {
        ClosedCurve::from_loop(
            (0..=n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    if first {
                        State4::new(t.cos(), t.sin(), 0.0, 0.0)
                    } else {
                        State4::new(0.0, 0.0, t.cos(), t.sin())
                    }
                })
                .collect(),
        )
    };
    let hopf = linking_number(&fibre(true), &fibre(false), 0, &tol).unwrap();
    ok &= hopf.rounded.abs() == 1;
    report(4, "linking", ok, format!("max residual {worst:.2e}, Hopf {}", hopf.rounded));
}

#[test]
fn criterion_05_leaves() {
    let (m, o, tol) = setup();
    let lim = IntegratorLimits::default();
    let (atlas, profiles) = foliation_atlas(&m, DEFAULT_NS, 64, &tol, &lim).unwrap();
    let mut ok = atlas.leaves.len() == 4;
    let mut detail = Vec::new();
    for id in LeafId::ALL {
        let coarse = integrate_profile(&m, id, 800, 200.0, &lim).unwrap();
        let fine = integrate_profile(&m, id, 1600, 200.0, &lim).unwrap();
        let (rc, _) = cr_residual(&m.params, &assemble_leaf(&m.params, &coarse, 64).unwrap(), &tol).unwrap();
        let (rf, _) = cr_residual(&m.params, &assemble_leaf(&m.params, &fine, 128).unwrap(), &tol).unwrap();
        let ratio = rc / rf;
        ok &= (3.5..=4.5).contains(&ratio);
        detail.push(format!("{} ratio {ratio:.3}", id.name()));
    }
    let plane = atlas.leaves.iter().find(|l| l.id == LeafId::PlaneToP3).unwrap();
    let cyl = atlas.leaves.iter().find(|l| l.id == LeafId::CylP3P1).unwrap();
    ok &= (plane.diagnostics.hofer_energy - o.p3.reeb_period).abs() <= 1e-6;
    ok &= (cyl.diagnostics.mass_neg_end - o.p1.reeb_period).abs() <= 1e-6;
    for (leaf, prof) in atlas.leaves.iter().zip(&profiles) {
        ok &= leaf.diagnostics.wind_infty_pos == 1;
        ok &= strong_section_check(&m, &o, prof, End::Pos, 64, &tol).unwrap().verdict == Verdict::Strong;
        if let EndLimit::Orbit(_) = prof.neg.limit {
            ok &= leaf.diagnostics.wind_infty_neg == Some(1);
            ok &= strong_section_check(&m, &o, prof, End::Neg, 64, &tol).unwrap().verdict == Verdict::Strong;
        }
    }
    detail.push(format!("E(plane) - T3 = {:.1e}", plane.diagnostics.hofer_energy - o.p3.reeb_period));
    detail.push(format!("m(cyl) - T1 = {:.1e}", cyl.diagnostics.mass_neg_end - o.p1.reeb_period));
    report(5, "leaves", ok, detail.join(", "));
}

#[test]
fn criterion_06_orbit_scan() {
    let (m, o, tol) = setup();
    let levels = level_grid(m.p3.h2_value, m.p1.h2_value, 64);
    let scan = resonant_orbit_scan(&m, o.p3.reeb_period, &levels, &tol, &IntegratorLimits::default()).unwrap();
    let claims = scan.scanned.iter().all(|s| s.claim.pass);
    let ok = levels.len() == 64 && scan.candidates.is_empty() && claims && !scan.scanned.is_empty();
    report(6, "orbit scan", ok, format!("{} loops, {} candidates", scan.scanned.len(), scan.candidates.len()));
}

#[test]
fn criterion_07_homoclinic() {
    let (m, _, _) = setup();
    let closed = [(5.0 - 7f64.sqrt()) * EPS / 3.0, (5.0 + 7f64.sqrt()) * EPS / 3.0];
    let mut ok = true;
    let mut detail = Vec::new();
    for mode in [LaunchMode::Unstable, LaunchMode::StableReversed] {
        let r = separatrix_and_homoclinics(&m, 1e-6, 50.0, mode, &IntegratorLimits::default()).unwrap();
        for (b, x) in r.branches.iter().zip(closed) {
            ok &= (b.axis_crossing - x).abs() <= 1e-8;
            detail.push(format!("{:.1e}", b.axis_crossing - x));
        }
        for h in &r.homoclinics {
            ok &= h.end_distances.0 <= 1e-4 && h.end_distances.1 <= 1e-4;
            detail.push(format!("{:.1e}/{:.1e}", h.end_distances.0, h.end_distances.1));
        }
    }
    report(7, "homoclinic", ok, detail.join(" "));
}

#[test]
fn criterion_08_paper_figure_diagnosis() {
    let r = run_validate(&Config::paper_figure(EPS)).unwrap();
    let idx = r.record("index-pattern").unwrap();
    let k1k2 = idx.evidence["P2"]["k1k2"].as_f64().unwrap_or(f64::NAN);
    let elliptic = idx.evidence["P2"]["flow_type"] == "elliptic";
    report(8, "parameter diagnosis", idx.status == Status::Fail && k1k2 < 0.0 && elliptic, format!("k1k2 = {k1k2:.3e}, elliptic {elliptic}"));
}

#[test]
fn criterion_09_determinism() {
    let bin = env!("CARGO_BIN_EXE_reeb-lab");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        for cmd in ["validate", "plot"] {
            let st = Command::new(bin).args([cmd, "--out"]).arg(d.path()).status().unwrap();
            assert!(st.success());
        }
    }
    let mut names: Vec<String> = std::fs::read_dir(dirs[0].path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    let same = names.iter().all(|n| std::fs::read(dirs[0].path().join(n)).unwrap() == std::fs::read(dirs[1].path().join(n)).unwrap());
    report(9, "determinism", same && names.len() == 5, format!("{names:?}"));
}

#[test]
fn criterion_10_quadrant_dichotomy() {
    let (m, o, tol) = setup();
    let (k1, k2) = generator(&m, OrbitLabel::P2);
    let (vm, vp) = p2_eigenvectors(k1, k2);
    let mut checked = [0usize; 2];
    let mut ok = true;
    for c0 in [0.2, 0.5, 1.0, 3.0, -0.2, -0.5, -1.0, -3.0] {
        for (amp, harmonic) in [(0.0, 1.0), (0.05, 1.0), (0.1, 2.0)] {
            let sec = move |t: f64| vm + vp * (c0 * (1.0 + amp * (2.0 * PI * harmonic * t).sin()));
            let r = p2_quadrants(&m, &o.p2, &sec, 64, &tol).unwrap();
            ok &= (r.section_winding - 1.0).abs() < 1e-6;
            match r.pairing_sign {
                PairingSign::Positive => {
                    checked[0] += 1;
                    ok &= r.quadrants.iter().all(|q| matches!(q, Quadrant::I | Quadrant::III));
                }
                PairingSign::Negative => {
                    checked[1] += 1;
                    ok &= r.quadrants.iter().all(|q| matches!(q, Quadrant::II | Quadrant::IV));
                }
                PairingSign::Mixed => {}
            }
        }
    }
    report(10, "quadrant dichotomy", ok && checked[0] > 0 && checked[1] > 0, format!("{} positive, {} negative sections", checked[0], checked[1]));
}
