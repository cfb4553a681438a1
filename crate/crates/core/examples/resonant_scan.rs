//! Scans regular levels between P3 and P1 for closed orbits with action
//! below T3.

use reeb_lab::config::{IntegratorLimits, Preset, Tolerances};
use reeb_lab::orbits::{level_grid, resonant_orbit_scan, special_orbits, ValidatedModel};

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    let orbits = special_orbits(&model)?;
    let levels = level_grid(model.p3.h2_value, model.p1.h2_value, 64);
    let scan = resonant_orbit_scan(&model, orbits.p3.reeb_period, &levels, &tol, &IntegratorLimits::default())?;
    let least = scan.scanned.iter().map(|s| s.min_action).fold(f64::INFINITY, f64::min);
    println!("{} loops scanned, least action {least:.6} against bound {:.6}", scan.scanned.len(), scan.action_bound);
    println!("candidates below the bound: {}", scan.candidates.len());
    println!("Claim I holds on every loop: {}", scan.scanned.iter().all(|s| s.claim.pass));
    Ok(())
}
