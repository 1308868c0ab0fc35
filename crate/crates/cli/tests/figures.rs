use std::process::Command;

use uniq_core::arith::Rational;
use uniq_core::regions::{scan, Status};
use uniq_core::scenarios::{s0, CriticalCurve};
use uniq_regions::figure::{curve_runs, render_figure, standard_figure, FigureSpec, Layer};

const BIN: &str = env!("CARGO_BIN_EXE_uniq-regions");

fn figure(n: u32, step: &str) -> String {
    let out = Command::new(BIN).args(["figure", "--n", &n.to_string(), "--step", step]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn legend_labels(svg: &str) -> Vec<String> {
    let doc = roxmltree::Document::parse(svg).expect("well-formed SVG");
    let legend = doc.descendants().find(|n| n.attribute("class") == Some("legend")).expect("legend group");
    legend.children().filter(|n| n.has_tag_name("text")).map(|n| n.text().unwrap_or_default().to_string()).collect()
}

#[test]
fn svg_is_well_formed_with_full_legends() {
    for (n, expected) in [(3, 7), (4, 7), (5, 7), (6, 5), (8, 5)] {
        let svg = figure(n, "1/16");
        let labels = legend_labels(&svg);
        assert_eq!(labels.len(), expected, "n = {n}: {labels:?}");
        assert!(labels.iter().any(|l| l.starts_with("Kato")));
        assert!(labels.iter().any(|l| l.starts_with("Open")));
        assert!(labels.iter().any(|l| l.contains("subcritical")));
        assert!(labels.iter().any(|l| l.contains("critical (yellow)")));
        assert_eq!(labels.iter().any(|l| l.starts_with("Furioli")), n <= 5);
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        assert_eq!(doc.descendants().filter(|x| x.attribute("class") == Some("layer")).count(), expected);
        assert!(!svg.contains('\u{2013}') && !svg.contains('\u{2014}'));
    }
}

#[test]
fn figures_are_deterministic() {
    for n in [3, 6] {
        assert_eq!(figure(n, "1/32"), figure(n, "1/32"));
    }
}

#[test]
fn tick_labels_are_rationals() {
    let svg = figure(4, "1/16");
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let texts: Vec<&str> = doc.descendants().filter(|n| n.has_tag_name("text")).filter_map(|n| n.text()).collect();
    for t in ["0", "1/4", "1/2", "3/4", "1", "3/2", "2"] {
        assert!(texts.contains(&t), "missing tick {t}: {texts:?}");
    }
}

#[test]
fn empty_grid_keeps_axes_and_legend() {
    let f = standard_figure(3).unwrap();
    let mut grid = scan(&f.grid_spec(Rational::frac(1, 8)).unwrap(), &f.grid_targets());
    for c in &mut grid.cells {
        c.statuses.iter_mut().for_each(|st| *st = Status::False);
    }
    let areas_only = FigureSpec { layers: f.layers.iter().map(|l| Layer { curve: None, ..l.clone() }).collect(), ..f.clone() };
    let svg = render_figure(&areas_only, &grid).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    for layer in doc.descendants().filter(|x| x.attribute("class") == Some("layer")) {
        assert_eq!(layer.children().filter(|c| c.is_element()).count(), 0);
    }
    assert_eq!(legend_labels(&svg).len(), 7);
    assert!(doc.descendants().any(|x| x.has_tag_name("line")));
}

#[test]
fn missing_targets_are_reported() {
    let f = standard_figure(4).unwrap();
    let grid = scan(&f.grid_spec(Rational::frac(1, 4)).unwrap(), &f.grid_targets()[..2]);
    let err = render_figure(&f, &grid).unwrap_err().to_string();
    assert!(err.contains("needs target"), "{err}");
}

#[test]
fn high_dim_critical_layer_starts_above_threshold() {
    let f = standard_figure(5).unwrap();
    let layer = f.layers.iter().find(|l| l.label.contains("critical (yellow)")).unwrap();
    let region = layer.curve.as_ref().unwrap();
    let step = Rational::frac(1, 64);
    let ss: Vec<Rational> = (0..=64).map(|k| Rational::int(k) * &step).collect();
    let e = s0(5, &Rational::frac(1, 1 << 20)).unwrap();
    assert!(curve_runs(5, region, CriticalCurve::Distributional, &ss, &f.alpha_max).is_empty());
    let runs = curve_runs(5, region, CriticalCurve::Energy, &ss, &f.alpha_max);
    assert_eq!(runs.len(), 1);
    let run = &runs[0];
    assert!(run.iter().all(|(s, a)| *s > e.upper && *s < Rational::one() && *a == CriticalCurve::Energy.alpha(5, s)));
    assert_eq!(run[0].0, Rational::frac(21, 64));
    assert_eq!(run.last().unwrap().0, Rational::frac(63, 64));
}
