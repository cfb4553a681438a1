//! The plane asymptotic to P3: profile, energy and CR residual convergence.

use reeb_lab::config::{IntegratorLimits, Preset, Tolerances};
use reeb_lab::leaves::{assemble_leaf, cr_residual, integrate_profile, leaf_diagnostics, LeafId};
use reeb_lab::orbits::{special_orbits, ValidatedModel};

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let lim = IntegratorLimits::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    let orbits = special_orbits(&model)?;
    let profile = integrate_profile(&model, LeafId::PlaneToP3, 2000, 200.0, &lim)?;
    let n = profile.len() - 1;
    println!("s in [{:.3}, {:.3}], g from {:.8} to {:.8}", profile.s_grid[0], profile.s_grid[n], profile.g[0], profile.g[n]);
    let d = leaf_diagnostics(&model, &orbits, &profile, 64, &tol)?;
    println!("E = {:.9} (T3 = {:.9}), wind_inf = {}, section {}", d.hofer_energy, orbits.p3.reeb_period, d.wind_infty_pos, d.section_pairing_sign);
    let mut previous = None;
    for (ns, nt) in [(500, 64), (1000, 128), (2000, 256)] {
        let prof = integrate_profile(&model, LeafId::PlaneToP3, ns, 200.0, &lim)?;
        let (r, _) = cr_residual(&model.params, &assemble_leaf(&model.params, &prof, nt)?, &tol)?;
        match previous {
            Some(p) => println!("n_s = {ns:5}  residual {r:.3e}  ratio {:.3}", p / r),
            None => println!("n_s = {ns:5}  residual {r:.3e}"),
        }
        previous = Some(r);
    }
    Ok(())
}
