use std::path::Path;

use plotters::prelude::*;

use super::table::{write_atomic, OutputEntry};
use crate::error::{Error, Result};
use crate::experiments::{DistanceRecord, Grid2dRecord, NoiseRecord, SizeRecord};

type Series = (&'static str, fn(&(f64, f64, f64)) -> f64, RGBColor);
type Quantity = (&'static str, fn(&NoiseRecord) -> f64);
const WIDTH: u32 = 900;
const HEIGHT: u32 = 480;

/// Records from one completed scan.
#[derive(Clone, Copy, Debug)]
pub enum PlotData<'a> {
    Distance(&'a [DistanceRecord]),
    Size(&'a [SizeRecord]),
    Grid2d(&'a [Grid2dRecord]),
    Noise(&'a [NoiseRecord]),
}

/// `line` for the distance, size and 2D scans, `heatmap` for the noise map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Line,
    Heatmap,
}

impl std::str::FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line" => Ok(PlotKind::Line),
            "heatmap" => Ok(PlotKind::Heatmap),
            other => Err(Error::validation(format!("unsupported plot kind {other:?}"))),
        }
    }
}

impl PlotData<'_> {
    pub fn default_kind(&self) -> PlotKind {
        match self {
            PlotData::Noise(_) => PlotKind::Heatmap,
            _ => PlotKind::Line,
        }
    }
}

fn plot_err(e: impl std::fmt::Display) -> Error {
    Error::validation(format!("plot rendering failed: {e}"))
}

fn finite_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-6);
    (lo - pad, hi + pad)
}

/// `(x, A, λ)` triples and the x-axis column name.
fn line_series(data: PlotData<'_>) -> (&'static str, Vec<(f64, f64, f64)>) {
    match data {
        PlotData::Distance(r) => (
            "r_angstrom",
            r.iter().map(|p| (p.r_angstrom, p.amplitude, p.lambda)).collect(),
        ),
        PlotData::Size(r) => ("n", r.iter().map(|p| (p.n as f64, p.amplitude, p.lambda)).collect()),
        PlotData::Grid2d(r) => ("n", r.iter().map(|p| (p.n as f64, p.amplitude, p.lambda)).collect()),
        PlotData::Noise(_) => unreachable!("noise data has no line form"),
    }
}

fn render_line(data: PlotData<'_>) -> Result<String> {
    let (x_name, pts) = line_series(data);
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (WIDTH, HEIGHT)).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let panels = root.split_evenly((1, 2));
        let series: [Series; 2] = [("amplitude", |p| p.1, BLUE), ("lambda", |p| p.2, RED)];
        let x_range = finite_range(pts.iter().map(|p| p.0));
        for (panel, (name, get, color)) in panels.iter().zip(series) {
            let y_range = finite_range(pts.iter().map(get));
            let mut chart = ChartBuilder::on(panel)
                .margin(12)
                .x_label_area_size(36)
                .y_label_area_size(52)
                .build_cartesian_2d(x_range.0..x_range.1, y_range.0..y_range.1)
                .map_err(plot_err)?;
            chart
                .configure_mesh()
                .x_desc(x_name)
                .y_desc(name)
                .draw()
                .map_err(plot_err)?;
            let finite: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, get(p))).filter(|p| p.1.is_finite()).collect();
            chart
                .draw_series(LineSeries::new(finite.clone(), color))
                .map_err(plot_err)?;
            chart
                .draw_series(finite.iter().map(|&p| Circle::new(p, 3, color.filled())))
                .map_err(plot_err)?;
        }
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

/// Dark blue at `t = 0` to yellow at `t = 1`.
fn ramp(t: f64) -> RGBColor {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    RGBColor(lerp(40.0, 250.0), lerp(20.0, 230.0), lerp(120.0, 30.0))
}

fn axis_edges(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n == 1 {
        return vec![values[0] - 0.5, values[0] + 0.5];
    }
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(values[0] - (values[1] - values[0]) / 2.0);
    for k in 0..n - 1 {
        edges.push((values[k] + values[k + 1]) / 2.0);
    }
    edges.push(values[n - 1] + (values[n - 1] - values[n - 2]) / 2.0);
    edges
}

fn distinct_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn render_heatmap(records: &[NoiseRecord]) -> Result<String> {
    let sd = distinct_sorted(records.iter().map(|r| r.sigma_d_ghz));
    let sr = distinct_sorted(records.iter().map(|r| r.sigma_r_angstrom));
    if sd.is_empty() || sr.is_empty() {
        return Err(Error::validation("heat map needs at least one cell"));
    }
    let (xe, ye) = (axis_edges(&sr), axis_edges(&sd));
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (WIDTH, HEIGHT)).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let panels = root.split_evenly((1, 2));
        let quantities: [Quantity; 2] = [
            ("mean_amplitude", |r| r.mean_amplitude),
            ("mean_lambda", |r| r.mean_lambda),
        ];
        for (panel, (name, get)) in panels.iter().zip(quantities) {
            let (lo, hi) = finite_range(records.iter().map(get));
            let mut chart = ChartBuilder::on(panel)
                .caption(name, ("sans-serif", 16))
                .margin(12)
                .x_label_area_size(36)
                .y_label_area_size(52)
                .build_cartesian_2d(xe[0]..xe[xe.len() - 1], ye[0]..ye[ye.len() - 1])
                .map_err(plot_err)?;
            chart
                .configure_mesh()
                .disable_mesh()
                .x_desc("sigma_r_angstrom")
                .y_desc("sigma_d_ghz")
                .draw()
                .map_err(plot_err)?;
            chart
                .draw_series(records.iter().map(|r| {
                    let i = sr.iter().position(|&v| v == r.sigma_r_angstrom).expect("axis value");
                    let j = sd.iter().position(|&v| v == r.sigma_d_ghz).expect("axis value");
                    let v = get(r);
                    let color = if v.is_finite() {
                        ramp((v - lo) / (hi - lo))
                    } else {
                        RGBColor(200, 200, 200)
                    };
                    Rectangle::new([(xe[i], ye[j]), (xe[i + 1], ye[j + 1])], color.filled())
                }))
                .map_err(plot_err)?;
        }
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

/// Renders `data` as SVG text.
pub fn render_plot(data: PlotData<'_>, kind: PlotKind) -> Result<String> {
    match (data, kind) {
        (PlotData::Noise(r), PlotKind::Heatmap) => render_heatmap(r),
        (PlotData::Noise(_), PlotKind::Line) => Err(Error::validation("noise maps only support the heatmap plot kind")),
        (_, PlotKind::Heatmap) => Err(Error::validation("heat maps need noise-map records")),
        (d, PlotKind::Line) => render_line(d),
    }
}

pub fn emit_plot(data: PlotData<'_>, kind: PlotKind, path: &Path) -> Result<OutputEntry> {
    write_atomic(path, render_plot(data, kind)?.as_bytes())
}
