//! Conley–Zehnder indices of the binding orbits and of iterates of P2,
//! each computed three ways.

use reeb_lab::config::{Preset, Tolerances};
use reeb_lab::orbits::{special_orbits, ValidatedModel};
use reeb_lab::spectrum::cz_all_methods;

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    let orbits = special_orbits(&model)?;
    println!("orbit  k  winding  oracle  spectral");
    for orbit in [&orbits.p1, &orbits.p2, &orbits.p3] {
        let r = cz_all_methods(&model, orbit, 1, 256, &tol)?;
        println!("{:5} {:2} {:8} {:7} {:9}", orbit.label.name(), 1, r.winding_interval.mu_global, r.analytic.mu_global, r.spectral.mu_global);
    }
    for k in 2..=4 {
        let r = cz_all_methods(&model, &orbits.p2, k, 256, &tol)?;
        println!("{:5} {:2} {:8} {:7} {:9}", "P2", k, r.winding_interval.mu_global, r.analytic.mu_global, r.spectral.mu_global);
    }
    Ok(())
}
