//! All four explicit leaves with roles, indices and energies.

use reeb_lab::config::{IntegratorLimits, Preset, Tolerances};
use reeb_lab::leaves::{foliation_atlas, DEFAULT_NS};
use reeb_lab::orbits::ValidatedModel;

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    let (atlas, _) = foliation_atlas(&model, DEFAULT_NS, 64, &tol, &IntegratorLimits::default())?;
    println!("binding indices {:?}", atlas.binding_indices);
    for leaf in &atlas.leaves {
        let d = &leaf.diagnostics;
        println!(
            "{:12} {:6} ends {:?} -> {:?}  E = {:.6}  m(-inf) = {:.6}  ind = {}  wind_pi = {}",
            leaf.id.name(),
            leaf.role,
            leaf.ends[0],
            leaf.ends[1],
            d.hofer_energy,
            d.mass_neg_end,
            leaf.fredholm.index,
            leaf.fredholm.wind_pi
        );
    }
    println!("not constructed: {}", atlas.not_constructed.join(", "));
    Ok(())
}
