//! Separatrix loops of the saddle and the two homoclinic orbits to P2.

use reeb_lab::config::{IntegratorLimits, Preset, Tolerances};
use reeb_lab::orbits::{separatrix_and_homoclinics, LaunchMode, ValidatedModel};

fn main() -> reeb_lab::Result<()> {
    let eps = 0.5;
    let model = ValidatedModel::new(&Preset::Validated.params(eps), &Tolerances::default())?;
    let report = separatrix_and_homoclinics(&model, 1e-6, 50.0, LaunchMode::Unstable, &IntegratorLimits::default())?;
    let closed_form = [(5.0 - 7f64.sqrt()) * eps / 3.0, (5.0 + 7f64.sqrt()) * eps / 3.0];
    for (b, x) in report.branches.iter().zip(closed_form) {
        println!("{:?}: crosses x2 = {:.12} (closed form {x:.12}), area {:+.6}", b.branch_id, b.axis_crossing, b.enclosed_area);
    }
    for h in &report.homoclinics {
        println!("{:?}: end distances to P2 {:.2e} / {:.2e}", h.branch_id, h.end_distances.0, h.end_distances.1);
    }
    println!("saddle rate {:.6}, level defect {:.1e}", report.rate, report.max_level_defect);
    Ok(())
}
