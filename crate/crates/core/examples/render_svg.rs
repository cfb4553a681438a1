//! Writes the level-set figure and the leaf atlas as SVG into a temporary
//! directory (or the directory given as the first argument).

use reeb_lab::plot::{render_plots, PlotTarget};
use reeb_lab::Config;

fn main() -> reeb_lab::Result<()> {
    let dir = std::env::args().nth(1).map(Into::into).unwrap_or_else(std::env::temp_dir);
    let mut figure = Config::paper_figure(1.0);
    figure.seed = 0;
    for (name, svg) in render_plots(&figure, &[PlotTarget::Levels])? {
        std::fs::write(dir.join(format!("paper-figure-{name}")), svg)?;
    }
    for (name, svg) in render_plots(&Config::validated(0.5), &[PlotTarget::Atlas, PlotTarget::Separatrix])? {
        let path = dir.join(name);
        std::fs::write(&path, svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
