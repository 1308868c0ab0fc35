//! Layered region figures in the `(s, alpha)` plane as standalone SVG.
//!
//! Area layers are painted from a scanned grid, one rectangle per vertical
//! run of member cells. Curve layers are drawn along the critical curves
//! wherever their region holds. Coordinates are exact rationals rounded to
//! two places, so output is byte-stable.

use std::fmt::Write as _;

use uniq_core::arith::Rational;
use uniq_core::regions::{default_alpha_max, GridSpec, Region, RegionGrid, Target};
use uniq_core::scenarios::{CriticalCurve, PredicateId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FigureError {
    #[error("figures are drawn for n >= 3, got n = {0}")]
    Dimension(u32),
    #[error("layer {layer:?} needs target {target}, which the grid does not contain")]
    MissingTarget { layer: String, target: String },
    #[error("grid is for n = {grid}, figure is for n = {figure}")]
    DimensionMismatch { grid: u32, figure: u32 },
}

/// Paint style of a layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Fill(&'static str),
    Hatch(Hatch),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hatch {
    Vertical,
    Horizontal,
    /// `/`
    Oblique,
    /// `\`, with dashed curve overlays.
    LeftSlash,
}

impl Hatch {
    fn id(self) -> &'static str {
        match self {
            Hatch::Vertical => "hatch-vertical",
            Hatch::Horizontal => "hatch-horizontal",
            Hatch::Oblique => "hatch-oblique",
            Hatch::LeftSlash => "hatch-left-slash",
        }
    }

    fn color(self) -> &'static str {
        match self {
            Hatch::Vertical => "#1f4e9c",
            Hatch::Horizontal => "#7b3f98",
            Hatch::Oblique => "#333333",
            Hatch::LeftSlash => "#000000",
        }
    }

    fn path(self) -> &'static str {
        match self {
            Hatch::Vertical => "M3,0 V6",
            Hatch::Horizontal => "M0,3 H6",
            Hatch::Oblique => "M0,6 L6,0 M-1,1 L1,-1 M5,7 L7,5",
            Hatch::LeftSlash => "M0,0 L6,6 M-1,5 L1,7 M5,-1 L7,1",
        }
    }
}

pub const GREEN: &str = "#5cb85c";
pub const YELLOW: &str = "#f0c419";
pub const RED: &str = "#d9534f";

/// One figure layer: an area painted from the grid, a set drawn along the
/// critical curves, or both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub label: String,
    pub style: Style,
    pub area: Option<Region>,
    pub curve: Option<Region>,
}

/// Figure content. Layers are painted in order, later over earlier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureSpec {
    pub n: u32,
    pub title: String,
    pub alpha_max: Rational,
    pub layers: Vec<Layer>,
}

impl FigureSpec {
    pub fn legend(&self) -> Vec<&str> {
        self.layers.iter().map(|l| l.label.as_str()).collect()
    }

    /// Targets the area layers read from the grid.
    pub fn grid_targets(&self) -> Vec<Target> {
        let mut out: Vec<Target> = Vec::new();
        for t in self.layers.iter().filter_map(|l| l.area.as_ref()).flat_map(|r| r.targets()) {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }

    pub fn grid_spec(&self, step: Rational) -> Result<GridSpec, uniq_core::regions::RegionError> {
        GridSpec::new(self.n, (Rational::zero(), Rational::one()), (Rational::zero(), self.alpha_max.clone()), step)
    }
}

fn layer(label: &str, style: Style, area: Option<Region>, curve: Option<Region>) -> Layer {
    Layer { label: label.to_string(), style, area, curve }
}

/// The standard layer set for dimension `n`: literature areas, the new
/// subcritical and critical parts, and the open cases. Furioli-Terraneo and
/// Win-Tsutsumi are drawn for `n <= 5` only.
pub fn standard_figure(n: u32) -> Result<FigureSpec, FigureError> {
    if n < 3 {
        return Err(FigureError::Dimension(n));
    }
    let low = n <= 5;
    let mut known = vec![PredicateId::Kato, PredicateId::Rogers];
    if low {
        known.extend([PredicateId::FurioliTerraneo, PredicateId::WinTsutsumiSub]);
    }
    let new_sub = Region::any([PredicateId::Thm11, PredicateId::Thm12]).and(Region::any(known).complement());
    // The critical layer is painted whole; literature curves drawn later cover
    // the parts that were known.
    let new_crit = Region::any([PredicateId::Thm15, PredicateId::Thm16]);
    let mut layers = vec![
        layer("New result: subcritical (green)", Style::Fill(GREEN), Some(new_sub), None),
        layer("New result: critical (yellow)", Style::Fill(YELLOW), None, Some(new_crit)),
    ];
    if low {
        layers.push(layer(
            "Win-Tsutsumi (red)",
            Style::Fill(RED),
            Some(PredicateId::WinTsutsumiSub.into()),
            Some(PredicateId::WinTsutsumiCrit.into()),
        ));
    }
    layers.push(layer("Kato (vertical hatching)", Style::Hatch(Hatch::Vertical), Some(PredicateId::Kato.into()), None));
    if low {
        layers.push(layer(
            "Furioli-Terraneo (horizontal hatching)",
            Style::Hatch(Hatch::Horizontal),
            Some(PredicateId::FurioliTerraneo.into()),
            None,
        ));
    }
    layers.push(layer("Rogers (oblique hatching)", Style::Hatch(Hatch::Oblique), Some(PredicateId::Rogers.into()), None));
    layers.push(layer(
        "Open (left slashes, dashed on curves)",
        Style::Hatch(Hatch::LeftSlash),
        Some(PredicateId::OpenSub.into()),
        Some(PredicateId::OpenCrit.into()),
    ));
    let title = if low { format!("n = {n}") } else { format!("n = {n} (family n >= 6)") };
    Ok(FigureSpec { n, title, alpha_max: default_alpha_max(n), layers })
}

const X0: i64 = 70;
const Y0: i64 = 40;
const W: i64 = 440;
const H: i64 = 380;
const WIDTH: i64 = 820;
const HEIGHT: i64 = 480;

struct Frame {
    s_lo: Rational,
    s_hi: Rational,
    a_lo: Rational,
    a_hi: Rational,
}

impl Frame {
    fn x(&self, s: &Rational) -> Rational {
        Rational::int(X0) + (s - &self.s_lo).checked_div(&(&self.s_hi - &self.s_lo)).expect("nonempty") * Rational::int(W)
    }

    fn y(&self, a: &Rational) -> Rational {
        Rational::int(Y0 + H) - (a - &self.a_lo).checked_div(&(&self.a_hi - &self.a_lo)).expect("nonempty") * Rational::int(H)
    }

    fn clamp_s(&self, s: Rational) -> Rational {
        Rational::max_of(&self.s_lo, Rational::min_of(&self.s_hi, &s)).clone()
    }

    fn clamp_a(&self, a: Rational) -> Rational {
        Rational::max_of(&self.a_lo, Rational::min_of(&self.a_hi, &a)).clone()
    }
}

fn px(x: &Rational) -> String {
    x.to_decimal(2)
}

fn style_paint(style: Style) -> (String, Option<&'static str>) {
    match style {
        Style::Fill(c) => (c.to_string(), Some(c)),
        Style::Hatch(h) => (format!("url(#{})", h.id()), Some(h.color())),
    }
}

fn defs(out: &mut String) {
    out.push_str("<defs>\n");
    for h in [Hatch::Vertical, Hatch::Horizontal, Hatch::Oblique, Hatch::LeftSlash] {
        writeln!(
            out,
            "<pattern id=\"{}\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\"><path d=\"{}\" stroke=\"{}\" stroke-width=\"1\"/></pattern>",
            h.id(),
            h.path(),
            h.color()
        )
        .expect("string write");
    }
    out.push_str("</defs>\n");
}

/// Lattice-point rectangles, merged along each column.
fn area_rects(out: &mut String, frame: &Frame, grid: &RegionGrid, region: &Region, fill: &str) {
    let n = grid.spec.n;
    let half = &grid.spec.step * &Rational::frac(1, 2);
    let mut runs: Vec<(Rational, Rational, Rational)> = Vec::new();
    let mut open: Option<(Rational, Rational, Rational)> = None;
    for cell in &grid.cells {
        let member = region.contains_with(n, &cell.s, &cell.alpha, &mut |t| cell.statuses[grid.column(t).expect("checked")]);
        match (&mut open, member) {
            (Some((s, _, hi)), true) if *s == cell.s => *hi = cell.alpha.clone(),
            (_, true) => {
                if let Some(run) = open.take() {
                    runs.push(run);
                }
                open = Some((cell.s.clone(), cell.alpha.clone(), cell.alpha.clone()));
            }
            (_, false) => {
                if let Some(run) = open.take() {
                    runs.push(run);
                }
            }
        }
    }
    runs.extend(open);
    for (s, lo, hi) in runs {
        let x1 = frame.x(&frame.clamp_s(&s - &half));
        let x2 = frame.x(&frame.clamp_s(&s + &half));
        let y1 = frame.y(&frame.clamp_a(&hi + &half));
        let y2 = frame.y(&frame.clamp_a(&lo - &half));
        writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"none\"/>",
            px(&x1),
            px(&y1),
            px(&(&x2 - &x1)),
            px(&(&y2 - &y1))
        )
        .expect("string write");
    }
}

/// Maximal runs of lattice `s` values where `region` holds on a curve.
pub fn curve_runs(n: u32, region: &Region, curve: CriticalCurve, s_points: &[Rational], alpha_max: &Rational) -> Vec<Vec<(Rational, Rational)>> {
    let mut runs = Vec::new();
    let mut cur: Vec<(Rational, Rational)> = Vec::new();
    for s in s_points {
        let gap = Rational::int(n as i64) - Rational::int(2) * s;
        let on = gap.is_positive() && {
            let a = curve.alpha(n, s);
            a <= *alpha_max && region.contains(n, s, &a)
        };
        if on {
            cur.push((s.clone(), curve.alpha(n, s)));
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs
}

fn curve_lines(out: &mut String, frame: &Frame, n: u32, region: &Region, s_points: &[Rational], stroke: &str, dashed: bool) {
    let dash = if dashed { " stroke-dasharray=\"8,4\"" } else { "" };
    for curve in [CriticalCurve::Distributional, CriticalCurve::Energy] {
        for run in curve_runs(n, region, curve, s_points, &frame.a_hi) {
            if run.len() == 1 {
                let (s, a) = &run[0];
                writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{stroke}\"/>", px(&frame.x(s)), px(&frame.y(a))).expect("string write");
                continue;
            }
            let pts: Vec<String> = run.iter().map(|(s, a)| format!("{},{}", px(&frame.x(s)), px(&frame.y(a)))).collect();
            writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"3\"{dash}/>", pts.join(" ")).expect("string write");
        }
    }
}

fn tick_label(x: &Rational) -> String {
    x.to_string()
}

fn axes(out: &mut String, frame: &Frame) {
    writeln!(out, "<rect x=\"{X0}\" y=\"{Y0}\" width=\"{W}\" height=\"{H}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>").expect("string write");
    for k in 0..=4 {
        let s = &frame.s_lo + &((&frame.s_hi - &frame.s_lo) * Rational::frac(k, 4));
        let x = px(&frame.x(&s));
        let yb = Y0 + H;
        writeln!(out, "<line x1=\"{x}\" y1=\"{yb}\" x2=\"{x}\" y2=\"{}\" stroke=\"#000000\"/>", yb + 5).expect("string write");
        writeln!(out, "<text x=\"{x}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>", yb + 20, tick_label(&s)).expect("string write");
    }
    let span = &frame.a_hi - &frame.a_lo;
    let tick = if span > Rational::int(4) { Rational::one() } else if span > Rational::int(2) { Rational::frac(1, 2) } else { Rational::frac(1, 4) };
    let mut a = frame.a_lo.clone();
    while a <= frame.a_hi {
        let y = px(&frame.y(&a));
        writeln!(out, "<line x1=\"{}\" y1=\"{y}\" x2=\"{X0}\" y2=\"{y}\" stroke=\"#000000\"/>", X0 - 5).expect("string write");
        writeln!(out, "<text x=\"{}\" y=\"{y}\" font-size=\"12\" text-anchor=\"end\" dominant-baseline=\"middle\">{}</text>", X0 - 8, tick_label(&a)).expect("string write");
        a = &a + &tick;
    }
    writeln!(out, "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">s</text>", X0 + W / 2, Y0 + H + 38).expect("string write");
    writeln!(out, "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">alpha</text>", X0 - 45, Y0 + H / 2, X0 - 45, Y0 + H / 2)
        .expect("string write");
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn legend(out: &mut String, f: &FigureSpec) {
    let x = X0 + W + 24;
    writeln!(out, "<g class=\"legend\">").expect("string write");
    for (i, l) in f.layers.iter().enumerate() {
        let y = Y0 + 10 + 28 * i as i64;
        let (paint, stroke) = style_paint(l.style);
        writeln!(out, "<rect x=\"{x}\" y=\"{y}\" width=\"18\" height=\"18\" fill=\"{paint}\" stroke=\"{}\"/>", stroke.unwrap_or("#000000")).expect("string write");
        writeln!(out, "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>", x + 26, y + 13, escape(&l.label)).expect("string write");
    }
    writeln!(out, "</g>").expect("string write");
}

/// Renders `f` over `grid`. Area layers must find their targets in the grid.
pub fn render_figure(f: &FigureSpec, grid: &RegionGrid) -> Result<String, FigureError> {
    if grid.spec.n != f.n {
        return Err(FigureError::DimensionMismatch { grid: grid.spec.n, figure: f.n });
    }
    for l in &f.layers {
        for t in l.area.iter().flat_map(|r| r.targets()) {
            if grid.column(t).is_none() {
                return Err(FigureError::MissingTarget { layer: l.label.clone(), target: t.to_string() });
            }
        }
    }
    let frame = Frame {
        s_lo: grid.spec.s_range.0.clone(),
        s_hi: grid.spec.s_range.1.clone(),
        a_lo: grid.spec.alpha_range.0.clone(),
        a_hi: grid.spec.alpha_range.1.clone(),
    };
    let s_points = grid.spec.s_points();
    let mut out = String::new();
    writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>").expect("string write");
    writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">")
        .expect("string write");
    writeln!(out, "<title>{}</title>", escape(&f.title)).expect("string write");
    defs(&mut out);
    writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>").expect("string write");
    writeln!(out, "<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>", X0 + W / 2, escape(&f.title)).expect("string write");
    for (i, l) in f.layers.iter().enumerate() {
        writeln!(out, "<g class=\"layer\" id=\"layer-{i}\">").expect("string write");
        let (paint, stroke) = style_paint(l.style);
        if let Some(region) = &l.area {
            area_rects(&mut out, &frame, grid, region, &paint);
        }
        if let Some(region) = &l.curve {
            let dashed = l.style == Style::Hatch(Hatch::LeftSlash);
            curve_lines(&mut out, &frame, f.n, region, &s_points, stroke.unwrap_or("#000000"), dashed);
        }
        writeln!(out, "</g>").expect("string write");
    }
    axes(&mut out, &frame);
    legend(&mut out, f);
    writeln!(out, "</svg>").expect("string write");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use uniq_core::regions::{scan, Status};

    #[test]
    fn legend_sizes() {
        for n in 3..=5 {
            assert_eq!(standard_figure(n).unwrap().legend().len(), 7);
        }
        assert_eq!(standard_figure(6).unwrap().legend().len(), 5);
        assert_eq!(standard_figure(9).unwrap().legend().len(), 5);
        assert!(standard_figure(2).is_err());
    }

    #[test]
    fn all_false_grid_paints_nothing() {
        let f = standard_figure(4).unwrap();
        let spec = f.grid_spec(Rational::frac(1, 4)).unwrap();
        let targets = f.grid_targets();
        let mut grid = scan(&spec, &targets);
        for c in &mut grid.cells {
            c.statuses = vec![Status::False; targets.len()];
        }
        let bare = FigureSpec { layers: f.layers.iter().map(|l| Layer { curve: None, ..l.clone() }).collect(), ..f.clone() };
        let svg = render_figure(&bare, &grid).unwrap();
        assert!(!svg.contains("<polyline") && svg.matches("<rect").count() == 2 + f.layers.len());
    }

    #[test]
    fn missing_target_is_named() {
        let f = standard_figure(3).unwrap();
        let grid = scan(&f.grid_spec(Rational::frac(1, 2)).unwrap(), &[PredicateId::Kato.into()]);
        assert!(matches!(render_figure(&f, &grid), Err(FigureError::MissingTarget { .. })));
    }
}
