use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use reeb_lab::config::{Config, Preset};
use reeb_lab::knots::{linking_number, self_linking, ClosedCurve, PushSection, DEFAULT_PUSH_OFFSET};
use reeb_lab::leaves::{foliation_atlas, integrate_profile, leaf_diagnostics, LeafId, DEFAULT_NS, DEFAULT_S_SPAN};
use reeb_lab::orbits::{find_critical_points, level_grid, resonant_orbit_scan, separatrix_and_homoclinics, special_orbits_unchecked, LaunchMode, OrbitLabel, ValidatedModel};
use reeb_lab::plot::{atlas_svg, render_plots, PlotTarget};
use reeb_lab::spectrum::{cz_all_methods, special_orbit_spectrum, spectrum_property_audit};
use reeb_lab::validate::run_validate;
use reeb_lab::{Error, Result};

#[derive(Parser)]
#[command(name = "reeb-lab", version, about = "Reeb dynamics, indices and holomorphic leaves on a star-shaped energy sphere")]
struct Cli {
    /// JSON configuration file; flags below override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    preset: Option<PresetArg>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Output directory; without it results go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    PaperFigure,
    Validated,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CzMethod {
    Numeric,
    Analytic,
    Spectral,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check every hypothesis and write the report.
    Validate,
    /// Critical points of H2 and the three binding orbits.
    Orbits,
    /// Conley–Zehnder index of a binding orbit iterate by all methods.
    Cz {
        #[arg(long, default_value = "P2")]
        orbit: OrbitLabel,
        #[arg(long, value_enum, default_value = "all")]
        method: CzMethod,
        #[arg(long, default_value_t = 1)]
        iterate: usize,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
    },
    /// Discrete spectrum of the asymptotic operator.
    Spectrum {
        #[arg(long, default_value = "P2")]
        orbit: OrbitLabel,
        #[arg(long, default_value_t = 1)]
        iterate: usize,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
    },
    /// Pairwise linking and self-linking numbers of the binding orbits.
    Link {
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_PUSH_OFFSET)]
        offset: f64,
    },
    /// One explicit leaf: profile and diagnostics.
    Leaf {
        #[arg(long, default_value = "plane_to_P3")]
        which: LeafId,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        emit: Format,
        #[arg(long, default_value_t = DEFAULT_NS)]
        nodes: usize,
    },
    /// All four leaves, binding orbits and separatrix overlay (JSON + SVG).
    Atlas {
        #[arg(long, default_value_t = DEFAULT_NS)]
        nodes: usize,
    },
    /// Scan regular levels for closed orbits below an action bound.
    Scan {
        #[arg(long, default_value_t = 64)]
        levels: usize,
        /// Action bound; defaults to T3.
        #[arg(long)]
        bound: Option<f64>,
    },
    /// Separatrix loops and homoclinic orbits to P2.
    Homoclinic {
        #[arg(long, default_value_t = 50.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-6)]
        launch_offset: f64,
    },
    /// Deterministic SVG figures.
    Plot {
        #[arg(long, value_delimiter = ',', default_value = "levels,atlas,separatrix,orbit3d-projection")]
        targets: Vec<PlotTarget>,
    },
}

impl Cli {
    fn config(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::from_json(&std::fs::read_to_string(path)?)?,
            None => Config::default(),
        };
        if let Some(p) = self.preset {
            cfg.preset = Some(match p {
                PresetArg::PaperFigure => Preset::PaperFigure,
                PresetArg::Validated => Preset::Validated,
            });
            cfg.params = None;
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = Some(e);
        }
        cfg.params()?;
        Ok(cfg)
    }

    fn emit(&self, name: &str, ext: &str, text: &str) -> Result<()> {
        match &self.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(format!("{name}.{ext}")), text)?;
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.emit(name, "json", &text)
    }

    /// Writes `rows` as CSV when `--format csv` was requested, JSON otherwise.
    fn emit_table<T: Serialize>(&self, name: &str, value: &T, header: &str, rows: &[String]) -> Result<()> {
        match self.format {
            Format::Json => self.emit_json(name, value),
            Format::Csv => {
                let mut text = format!("{header}\n");
                for r in rows {
                    text.push_str(r);
                    text.push('\n');
                }
                self.emit(name, "csv", &text)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.config()?;
    let tol = cfg.tolerances;
    let lim = cfg.integrator;
    let p = cfg.params()?;
    let model = || ValidatedModel::new(&p, &tol);
    match &cli.command {
        Command::Validate => cli.emit_json("validate", &run_validate(&cfg)?),
        Command::Orbits => {
            let crit = find_critical_points(&p, &tol);
            let m = model()?;
            let o = special_orbits_unchecked(&m);
            let rows: Vec<String> = [&o.p1, &o.p2, &o.p3]
                .iter()
                .map(|orb| {
                    let c = m.critical_point(orb.label);
                    format!("{},{},{},{},{},{}", orb.label.name(), c.location[0], c.h2_value, orb.r, orb.reeb_period, c.k1 * c.k2)
                })
                .collect();
            let value = json!({ "critical_points": crit, "orbits": o, "inequalities": o.inequalities() });
            cli.emit_table("orbits", &value, "orbit,x2,h2,r,period,k1k2", &rows)
        }
        Command::Cz { orbit, method, iterate, nodes } => {
            let m = model()?;
            let o = special_orbits_unchecked(&m);
            let r = cz_all_methods(&m, o.get(*orbit), *iterate, *nodes, &tol)?;
            let single = match method {
                CzMethod::Numeric => Some(&r.winding_interval),
                CzMethod::Analytic => Some(&r.analytic),
                CzMethod::Spectral => Some(&r.spectral),
                CzMethod::All => None,
            };
            if let Some(one) = single {
                let row = format!("{},{},{}", orbit.name(), iterate, one.mu_global);
                return cli.emit_table("cz", one, "orbit,iterate,mu", &[row]);
            }
            let row = format!("{},{},{},{},{},{}", orbit.name(), iterate, r.winding_interval.mu_global, r.analytic.mu_global, r.spectral.mu_global, r.agree);
            cli.emit_table("cz", &r, "orbit,iterate,winding_interval,analytic,spectral,agree", &[row])
        }
        Command::Spectrum { orbit, iterate, nodes } => {
            let m = model()?;
            let o = special_orbits_unchecked(&m);
            let (report, cz) = special_orbit_spectrum(&m, o.get(*orbit), *iterate, *nodes, &tol)?;
            let audit = spectrum_property_audit(&report, tol.eig_tol)?;
            let rows: Vec<String> = report.band.iter().map(|e| format!("{},{}", e.value, e.winding)).collect();
            let value = json!({ "report": report, "cz": cz, "audit": audit });
            cli.emit_table("spectrum", &value, "eigenvalue,winding", &rows)
        }
        Command::Link { samples, offset } => {
            let m = model()?;
            let o = special_orbits_unchecked(&m);
            let orbits = [&o.p1, &o.p2, &o.p3];
            let curves: Vec<ClosedCurve> = orbits.iter().map(|orb| ClosedCurve::from_orbit(orb, *samples)).collect();
            let mut rows = Vec::new();
            let mut entries = Vec::new();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let l = linking_number(&curves[i], &curves[j], cfg.seed, &tol)?;
                let name = format!("lk(P{},P{})", i + 1, j + 1);
                rows.push(format!("{name},{},{},{}", l.raw, l.rounded, l.guard));
                entries.push(json!({ "quantity": name, "result": l }));
            }
            for orb in orbits {
                let l = self_linking(&p, orb, *samples, *offset, PushSection::Xbar1, cfg.seed, &tol)?;
                let name = format!("sl({})", orb.label.name());
                rows.push(format!("{name},{},{},{}", l.raw, l.rounded, l.guard));
                entries.push(json!({ "quantity": name, "result": l }));
            }
            cli.emit_table("link", &json!({ "seed": cfg.seed, "samples": samples, "offset": offset, "entries": entries }), "quantity,raw,rounded,guard", &rows)
        }
        Command::Leaf { which, emit, nodes } => {
            let m = model()?;
            let o = reeb_lab::orbits::special_orbits(&m)?;
            let profile = integrate_profile(&m, *which, *nodes, DEFAULT_S_SPAN, &lim)?;
            match emit {
                Format::Csv => cli.emit(which.name(), "csv", &profile.to_csv()),
                Format::Json => {
                    let diag = leaf_diagnostics(&m, &o, &profile, 64, &tol)?;
                    cli.emit_json(which.name(), &json!({ "profile": profile, "diagnostics": diag }))
                }
            }
        }
        Command::Atlas { nodes } => {
            let m = model()?;
            let (atlas, _) = foliation_atlas(&m, *nodes, 64, &tol, &lim)?;
            cli.emit_json("atlas", &atlas)?;
            if cli.out.is_some() {
                cli.emit("atlas", "svg", &atlas_svg(&m, &atlas))?;
            }
            Ok(())
        }
        Command::Scan { levels, bound } => {
            let m = model()?;
            let o = special_orbits_unchecked(&m);
            let grid = level_grid(m.p3.h2_value, m.p1.h2_value, *levels);
            let report = resonant_orbit_scan(&m, bound.unwrap_or(o.p3.reeb_period), &grid, &tol, &lim)?;
            let rows: Vec<String> = report
                .scanned
                .iter()
                .map(|s| format!("{},{},{},{},{},{}", s.level, s.tau, s.area, s.min_action, s.claim.product, s.claim.pass))
                .collect();
            cli.emit_table("scan", &report, "level,tau,area,min_action,hsup_tau,claim", &rows)
        }
        Command::Homoclinic { horizon, launch_offset } => {
            let m = model()?;
            let report = separatrix_and_homoclinics(&m, *launch_offset, *horizon, LaunchMode::Unstable, &lim)?;
            match cli.format {
                Format::Csv => {
                    for h in &report.homoclinics {
                        cli.emit(&format!("homoclinic_{:?}", h.branch_id).to_lowercase(), "csv", &h.trajectory.to_csv(&p))?;
                    }
                    Ok(())
                }
                Format::Json => {
                    let homoclinics: Vec<_> = report
                        .homoclinics
                        .iter()
                        .map(|h| json!({ "branch": h.branch_id, "end_distances": [h.end_distances.0, h.end_distances.1], "nodes": h.trajectory.states.len(), "energy_drift": h.trajectory.energy_drift }))
                        .collect();
                    let branches: Vec<_> = report
                        .branches
                        .iter()
                        .map(|b| json!({ "branch": b.branch_id, "axis_crossing": b.axis_crossing, "enclosed_area": b.enclosed_area, "return_time": b.return_time, "launch_vector": b.launch_vector }))
                        .collect();
                    cli.emit_json("homoclinic", &json!({ "rate": report.rate, "max_level_defect": report.max_level_defect, "branches": branches, "homoclinics": homoclinics }))
                }
            }
        }
        Command::Plot { targets } => {
            let files = render_plots(&cfg, targets)?;
            match &cli.out {
                Some(_) => {
                    for (name, svg) in files {
                        cli.emit(name.trim_end_matches(".svg"), "svg", &svg)?;
                    }
                    Ok(())
                }
                None if files.len() == 1 => {
                    print!("{}", files[0].1);
                    Ok(())
                }
                None => Err(Error::InvalidInput("several plot targets need --out".into())),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
