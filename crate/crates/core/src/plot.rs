//! Deterministic SVG rendering of level sets, the leaf atlas, separatrices
//! and a stereographic view of the binding orbits.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::knots::{stereographic_project, ClosedCurve};
use crate::leaves::{foliation_atlas, solve_xbar, FoliationAtlas, DEFAULT_NS};
use crate::model::HamiltonianParams;
use crate::orbits::{distance_to_p2, find_critical_points, separatrix_and_homoclinics, special_orbits_unchecked, CriticalPoint, HessianSignature, LaunchMode, ValidatedModel};

pub const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const GRID: usize = 240;
/// Line segment between two canvas or world points.
pub type Segment = ((f64, f64), (f64, f64));

const PALETTE: [&str; 8] = ["#1f4e79", "#2e75b6", "#4a9a8a", "#7aa640", "#c9a227", "#d9822b", "#c0504d", "#7f3f98"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotTarget {
    Levels,
    Atlas,
    Separatrix,
    Orbit3dProjection,
}

impl PlotTarget {
    pub const ALL: [PlotTarget; 4] = [PlotTarget::Levels, PlotTarget::Atlas, PlotTarget::Separatrix, PlotTarget::Orbit3dProjection];

    pub fn name(self) -> &'static str {
        match self {
            PlotTarget::Levels => "levels",
            PlotTarget::Atlas => "atlas",
            PlotTarget::Separatrix => "separatrix",
            PlotTarget::Orbit3dProjection => "orbit3d-projection",
        }
    }
}

impl std::str::FromStr for PlotTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlotTarget::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| Error::InvalidInput(format!("unknown plot target '{s}'")))
    }
}

/// Maps the square `[-half, half]^2` onto the canvas with `y` pointing up.
#[derive(Clone, Copy, Debug)]
pub struct Canvas {
    pub half: f64,
}

impl Canvas {
    pub fn x(&self, x: f64) -> f64 {
        MARGIN + (x + self.half) / (2.0 * self.half) * (SIZE - 2.0 * MARGIN)
    }

    pub fn y(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y + self.half) / (2.0 * self.half) * (SIZE - 2.0 * MARGIN)
    }
}

/// SVG document builder with fixed header, number format and element order.
pub struct Svg {
    body: String,
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Self {
        let mut body = String::new();
        let _ = writeln!(body, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 800" width="800" height="800" font-family="sans-serif" font-size="13">"#);
        let _ = writeln!(body, r##"<rect x="0" y="0" width="800" height="800" fill="#ffffff"/>"##);
        Self { body }
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64, dash: Option<&str>, closed: bool) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (k, (x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2}", if k == 0 { "M" } else { " L" }, x, y);
        }
        if closed {
            d.push_str(" Z");
        }
        let dash = dash.map(|s| format!(r#" stroke-dasharray="{s}""#)).unwrap_or_default();
        let _ = writeln!(self.body, r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width:.2}"{dash}/>"#);
    }

    pub fn segments(&mut self, segs: &[Segment], stroke: &str, width: f64) {
        if segs.is_empty() {
            return;
        }
        let mut d = String::new();
        for (a, b) in segs {
            let _ = write!(d, "M{:.2} {:.2} L{:.2} {:.2} ", a.0, a.1, b.0, b.1);
        }
        let _ = writeln!(self.body, r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="{width:.2}"/>"#, d.trim_end());
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(self.body, r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" stroke="#000000" stroke-width="1.00"/>"##);
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str) {
        let s = s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.body, r##"<text x="{x:.2}" y="{y:.2}" fill="#000000">{s}</text>"##);
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Level-set segments of `f` at `level` on a uniform grid (marching squares,
/// saddle cells resolved by the cell-centre value).
pub fn contour_segments(f: &dyn Fn(f64, f64) -> f64, half: f64, n: usize, level: f64) -> Vec<Segment> {
    let h = 2.0 * half / n as f64;
    let coord = |i: usize| -half + h * i as f64;
    let vals: Vec<Vec<f64>> = (0..=n).map(|i| (0..=n).map(|j| f(coord(i), coord(j)) - level).collect()).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (x0, x1, y0, y1) = (coord(i), coord(i + 1), coord(j), coord(j + 1));
            // corners counterclockwise: (x0,y0), (x1,y0), (x1,y1), (x0,y1)
            let v = [vals[i][j], vals[i + 1][j], vals[i + 1][j + 1], vals[i][j + 1]];
            let c = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
            let edge = |k: usize| {
                let (a, b) = (k, (k + 1) % 4);
                let t = v[a] / (v[a] - v[b]);
                (c[a].0 + t * (c[b].0 - c[a].0), c[a].1 + t * (c[b].1 - c[a].1))
            };
            let crossing: Vec<usize> = (0..4).filter(|&k| (v[k] > 0.0) != (v[(k + 1) % 4] > 0.0)).collect();
            match crossing.len() {
                2 => out.push((edge(crossing[0]), edge(crossing[1]))),
                4 => {
                    let centre = v.iter().sum::<f64>() / 4.0;
                    if (centre > 0.0) == (v[0] > 0.0) {
                        out.push((edge(0), edge(1)));
                        out.push((edge(2), edge(3)));
                    } else {
                        out.push((edge(3), edge(0)));
                        out.push((edge(1), edge(2)));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

fn plot_half(p: &HamiltonianParams) -> f64 {
    let crit = find_critical_points(p, &Default::default());
    let p3 = crit.points.iter().map(|c| c.location[0]).fold(0.0, f64::max);
    match solve_xbar(p, p3) {
        Ok((xp, xm)) => 1.15 * xp.abs().max(xm.abs()),
        Err(_) => 1.6,
    }
}

fn critical_colour(c: &CriticalPoint) -> &'static str {
    match c.hessian_signature {
        HessianSignature::Saddle => "#c0504d",
        HessianSignature::Max => "#d9822b",
        HessianSignature::Min => "#1f4e79",
        HessianSignature::Degenerate => "#808080",
    }
}

fn draw_axes(svg: &mut Svg, cv: &Canvas) {
    svg.polyline(&[(cv.x(-cv.half), cv.y(0.0)), (cv.x(cv.half), cv.y(0.0))], "#999999", 0.8, None, false);
    svg.polyline(&[(cv.x(0.0), cv.y(-cv.half)), (cv.x(0.0), cv.y(cv.half))], "#999999", 0.8, None, false);
    svg.text(SIZE - MARGIN - 20.0, cv.y(0.0) - 6.0, "x2");
    svg.text(cv.x(0.0) + 6.0, MARGIN + 12.0, "y2");
}

fn draw_levels(svg: &mut Svg, p: &HamiltonianParams, cv: &Canvas) -> Vec<f64> {
    let crit = find_critical_points(p, &Default::default());
    let mut levels: Vec<f64> = crit.points.iter().map(|c| c.h2_value).collect();
    let lo = levels.iter().copied().fold(f64::INFINITY, f64::min);
    for k in 1..=8 {
        levels.push(lo + (0.5 - lo) * k as f64 / 8.0);
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let f = |x: f64, y: f64| p.h2(x, y);
    for (k, &c) in levels.iter().enumerate() {
        let segs: Vec<_> = contour_segments(&f, cv.half, GRID, c).into_iter().map(|(a, b)| ((cv.x(a.0), cv.y(a.1)), (cv.x(b.0), cv.y(b.1)))).collect();
        svg.segments(&segs, PALETTE[k % PALETTE.len()], 1.2);
    }
    levels
}

fn draw_critical(svg: &mut Svg, p: &HamiltonianParams, cv: &Canvas) {
    let mut crit = find_critical_points(p, &Default::default()).points;
    crit.sort_by(|a, b| a.location[0].total_cmp(&b.location[0]).then(a.location[1].total_cmp(&b.location[1])));
    for c in &crit {
        svg.circle(cv.x(c.location[0]), cv.y(c.location[1]), 5.0, critical_colour(c));
        svg.text(cv.x(c.location[0]) + 6.0, cv.y(c.location[1]) - 8.0, &format!("{:.3}", c.location[0]));
    }
}

fn legend(svg: &mut Svg, lines: &[(&str, &str)]) {
    for (k, (colour, label)) in lines.iter().enumerate() {
        let y = MARGIN + 16.0 * k as f64;
        svg.polyline(&[(MARGIN, y), (MARGIN + 24.0, y)], colour, 3.0, None, false);
        svg.text(MARGIN + 30.0, y + 4.0, label);
    }
}

pub fn levels_svg(p: &HamiltonianParams) -> String {
    let cv = Canvas { half: plot_half(p) };
    let mut svg = Svg::new();
    draw_axes(&mut svg, &cv);
    draw_levels(&mut svg, p, &cv);
    draw_critical(&mut svg, p, &cv);
    svg.text(MARGIN, SIZE - 12.0, &format!("H2 levels, {} preset, eps = {}", p.preset_name, p.epsilon));
    svg.finish()
}

fn separatrix_loops(model: &ValidatedModel, cfg: &Config) -> Vec<Vec<[f64; 2]>> {
    separatrix_and_homoclinics(model, 1e-6, 50.0, LaunchMode::Unstable, &cfg.integrator)
        .map(|r| r.branches.iter().map(|b| b.samples.clone()).collect())
        .unwrap_or_default()
}

fn draw_loops(svg: &mut Svg, cv: &Canvas, loops: &[Vec<[f64; 2]>], colour: &str, dash: Option<&str>) {
    for l in loops {
        let pts: Vec<(f64, f64)> = l.iter().map(|z| (cv.x(z[0]), cv.y(z[1]))).collect();
        svg.polyline(&pts, colour, 2.0, dash, true);
    }
}

pub fn separatrix_svg(model: &ValidatedModel, cfg: &Config) -> String {
    let p = &model.params;
    let cv = Canvas { half: plot_half(p) };
    let mut svg = Svg::new();
    draw_axes(&mut svg, &cv);
    draw_loops(&mut svg, &cv, &separatrix_loops(model, cfg), "#c0504d", None);
    draw_critical(&mut svg, p, &cv);
    legend(&mut svg, &[("#c0504d", "separatrix loops of the saddle P2")]);
    svg.finish()
}

pub fn atlas_svg(model: &ValidatedModel, atlas: &FoliationAtlas) -> String {
    let p = &model.params;
    let cv = Canvas { half: plot_half(p) };
    let mut svg = Svg::new();
    draw_axes(&mut svg, &cv);
    draw_levels(&mut svg, p, &cv);
    draw_loops(&mut svg, &cv, &atlas.separatrix_shadow, "#7f3f98", Some("6 4"));
    let colours = ["#c9a227", "#4a9a8a", "#2e75b6", "#c0504d"];
    for (leaf, colour) in atlas.leaves.iter().zip(colours) {
        let [lo, hi] = leaf.g_range;
        svg.polyline(&[(cv.x(lo), cv.y(0.0)), (cv.x(hi), cv.y(0.0))], colour, 6.0, None, false);
    }
    draw_critical(&mut svg, p, &cv);
    let mut lines: Vec<(&str, String)> = atlas.leaves.iter().zip(colours).map(|(l, c)| (c, format!("{} ({})", l.id.name(), l.role))).collect();
    lines.push(("#7f3f98", format!("separatrix: U1, U2 shadow ({})", atlas.separatrix_tag)));
    let refs: Vec<(&str, &str)> = lines.iter().map(|(c, s)| (*c, s.as_str())).collect();
    legend(&mut svg, &refs);
    svg.finish()
}

/// Binding orbits and homoclinic loops after stereographic projection, drawn
/// in the first two coordinates of R^3.
pub fn orbit3d_svg(model: &ValidatedModel, cfg: &Config) -> Result<String> {
    let o = special_orbits_unchecked(model);
    let mut curves: Vec<ClosedCurve> = [&o.p1, &o.p2, &o.p3].iter().map(|orb| ClosedCurve::from_orbit(orb, 512)).collect();
    let n_binding = curves.len();
    if let Ok(rep) = separatrix_and_homoclinics(model, 1e-6, 50.0, LaunchMode::Unstable, &cfg.integrator) {
        for h in &rep.homoclinics {
            // the ends accumulate on P2; keep the excursion only
            let samples: Vec<_> = h.trajectory.states.iter().filter(|z| distance_to_p2(z) > 1e-2).copied().collect();
            curves.push(ClosedCurve { samples });
        }
    }
    let (proj, images) = stereographic_project(&curves, cfg.seed, &cfg.tolerances)?;
    let half = images.iter().flatten().map(|v| v[0].abs().max(v[1].abs())).fold(0.0, f64::max).min(20.0) * 1.1;
    let cv = Canvas { half };
    let mut svg = Svg::new();
    let colours = ["#d9822b", "#c0504d", "#1f4e79", "#7f3f98", "#7f3f98"];
    for (k, img) in images.iter().enumerate() {
        let pts: Vec<(f64, f64)> = img.iter().filter(|v| v[0].abs() < half && v[1].abs() < half).map(|v| (cv.x(v[0]), cv.y(v[1]))).collect();
        svg.polyline(&pts, colours[k.min(colours.len() - 1)], if k < n_binding { 2.0 } else { 1.0 }, if k < n_binding { None } else { Some("4 3") }, k < n_binding);
    }
    legend(&mut svg, &[("#d9822b", "P1"), ("#c0504d", "P2"), ("#1f4e79", "P3"), ("#7f3f98", "homoclinics")]);
    svg.text(MARGIN, SIZE - 12.0, &format!("stereographic pole distance {:.3}, seed {}", proj.pole_distance, cfg.seed));
    Ok(svg.finish())
}

/// Renders the requested targets in sorted order as `(file name, svg)`.
pub fn render_plots(cfg: &Config, targets: &[PlotTarget]) -> Result<Vec<(String, String)>> {
    if targets.is_empty() {
        return Err(Error::InvalidInput("no plot targets".into()));
    }
    let mut targets = targets.to_vec();
    targets.sort();
    targets.dedup();
    let p = cfg.params()?;
    let model = || ValidatedModel::new(&p, &cfg.tolerances);
    let mut out = Vec::new();
    for t in targets {
        let svg = match t {
            PlotTarget::Levels => levels_svg(&p),
            PlotTarget::Separatrix => separatrix_svg(&model()?, cfg),
            PlotTarget::Atlas => {
                let m = model()?;
                let (atlas, _) = foliation_atlas(&m, DEFAULT_NS, 64, &cfg.tolerances, &cfg.integrator)?;
                atlas_svg(&m, &atlas)
            }
            PlotTarget::Orbit3dProjection => orbit3d_svg(&model()?, cfg)?,
        };
        out.push((format!("{}.svg", t.name()), svg));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_contour_radius() {
        let f = |x: f64, y: f64| x * x + y * y;
        let segs = contour_segments(&f, 2.0, 100, 1.0);
        assert!(!segs.is_empty());
        for (a, b) in segs {
            for q in [a, b] {
                assert!(((q.0 * q.0 + q.1 * q.1).sqrt() - 1.0).abs() < 2e-3);
            }
        }
    }

    #[test]
    fn levels_plot_is_deterministic() {
        let p = crate::config::Preset::PaperFigure.params(1.0);
        let a = levels_svg(&p);
        assert_eq!(a, levels_svg(&p));
        assert!(a.starts_with("<svg") && a.contains(r#"viewBox="0 0 800 800""#));
    }
}
