//! Runs the hypothesis validator for both presets.

use reeb_lab::validate::run_validate;
use reeb_lab::Config;

fn main() -> reeb_lab::Result<()> {
    for cfg in [Config::validated(0.5), Config::paper_figure(0.5)] {
        let report = run_validate(&cfg)?;
        println!("{} eps = {}", report.preset, report.epsilon);
        for r in &report.records {
            println!("  {:20} {:?}", r.item, r.status);
        }
    }
    Ok(())
}
