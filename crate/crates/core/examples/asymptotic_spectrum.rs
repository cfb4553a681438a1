//! Eigenvalues and eigensection windings of the asymptotic operator at P3,
//! next to the Fourier symbol of a constant operator.

use nalgebra::Matrix2;
use reeb_lab::config::{Preset, Tolerances};
use reeb_lab::orbits::{special_orbits, ValidatedModel};
use reeb_lab::spectrum::{discretize_and_solve, fourier_oracle, special_orbit_spectrum, spectrum_property_audit, OperatorModel};

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    let orbits = special_orbits(&model)?;
    let (report, cz) = special_orbit_spectrum(&model, &orbits.p3, 1, 256, &tol)?;
    println!("P3: nu- = {:?}, nu+ = {:?}, mu = {}", report.nu_neg, report.nu_pos, cz.mu_global);
    for e in report.band.iter().filter(|e| e.value.abs() < 15.0) {
        println!("  {:+.6}  winding {:+}", e.value, e.winding);
    }
    let audit = spectrum_property_audit(&report, tol.eig_tol)?;
    println!("audit passed: {}", audit.passed());

    let s = Matrix2::new(0.7, 0.2, 0.2, -0.4);
    let discrete = discretize_and_solve(&OperatorModel::constant(s, "constant", 8), 256, &tol)?;
    let oracle = fourier_oracle(&s, 256);
    let worst = discrete
        .band
        .iter()
        .map(|e| oracle.iter().map(|o| (o - e.value).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    println!("constant S: {} band eigenvalues, max distance to Fourier symbol {worst:.2e}", discrete.band.len());
    Ok(())
}
