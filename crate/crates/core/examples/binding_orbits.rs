//! Critical points of H2, the three binding orbits and their periods.

use reeb_lab::config::{Preset, Tolerances};
use reeb_lab::orbits::{special_orbits, ValidatedModel};

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    for c in &model.critical.points {
        println!(
            "critical point x2 = {:+.6}  H2 = {:+.6}  {:?}/{:?}  k1 = {:+.4} k2 = {:+.4}",
            c.location[0], c.h2_value, c.hessian_signature, c.flow_type, c.k1, c.k2
        );
    }
    let orbits = special_orbits(&model)?;
    let [t1, t2, t3] = orbits.periods();
    println!("T1 = {t1:.12}  T2 = {t2:.12}  T3 = {t3:.12}");
    println!("T1 < T2 < T3 < 2 T1: {:?}", orbits.inequalities());
    Ok(())
}
