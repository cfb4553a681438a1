//! Sections along P2 with positive and negative Lie pairing fall into
//! opposite quadrant pairs of the stable/unstable frame.

use std::f64::consts::PI;

use reeb_lab::config::{Preset, Tolerances};
use reeb_lab::index::{generator, p2_eigenvectors, p2_quadrants};
use reeb_lab::orbits::{special_orbits, OrbitLabel, ValidatedModel};

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    let orbits = special_orbits(&model)?;
    let (k1, k2) = generator(&model, OrbitLabel::P2);
    let (vm, vp) = p2_eigenvectors(k1, k2);
    let positive = move |t: f64| vm + vp * (0.5 + 0.05 * (2.0 * PI * t).sin());
    let negative = move |t: f64| vm - vp * (2.0 + 0.5 * (2.0 * PI * t).cos());
    for (name, sec) in [("positive", &positive as &dyn Fn(f64) -> _), ("negative", &negative)] {
        let r = p2_quadrants(&model, &orbits.p2, sec, 64, &tol)?;
        let mut seen: Vec<String> = r.quadrants.iter().map(|q| format!("{q:?}")).collect();
        seen.sort();
        seen.dedup();
        println!("{name}: pairing {:?}, quadrants {:?}, winding {:.3}", r.pairing_sign, seen, r.section_winding);
    }
    Ok(())
}
