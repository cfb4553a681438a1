//! Linking numbers of the binding orbits, their self-linking numbers and a
//! Hopf-link control.

use std::f64::consts::PI;

use reeb_lab::config::{Preset, Tolerances};
use reeb_lab::knots::{linking_number, self_linking, ClosedCurve, PushSection, DEFAULT_PUSH_OFFSET};
use reeb_lab::orbits::{special_orbits, ValidatedModel};
use reeb_lab::State4;

fn main() -> reeb_lab::Result<()> {
    let tol = Tolerances::default();
    let model = ValidatedModel::new(&Preset::Validated.params(0.5), &tol)?;
    let orbits = special_orbits(&model)?;
    let all = [&orbits.p1, &orbits.p2, &orbits.p3];
    let curves: Vec<ClosedCurve> = all.iter().map(|o| ClosedCurve::from_orbit(o, 512)).collect();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let l = linking_number(&curves[i], &curves[j], 0, &tol)?;
        println!("lk(P{}, P{}) = {} (raw {:+.2e})", i + 1, j + 1, l.rounded, l.raw);
    }
    for o in all {
        let l = self_linking(&model.params, o, 512, DEFAULT_PUSH_OFFSET, PushSection::Xbar1, 0, &tol)?;
        println!("sl({}) = {} (raw {:+.6})", o.label.name(), l.rounded, l.raw);
    }
    let n = 512;
    let hopf = |phase: bool| {
        ClosedCurve::from_loop(
            (0..=n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    if phase {
                        State4::new(t.cos(), t.sin(), 0.0, 0.0)
                    } else {
                        State4::new(0.0, 0.0, t.cos(), t.sin())
                    }
                })
                .collect(),
        )
    };
    let l = linking_number(&hopf(true), &hopf(false), 0, &tol)?;
    println!("Hopf fibres: lk = {} (raw {:+.8})", l.rounded, l.raw);
    Ok(())
}
