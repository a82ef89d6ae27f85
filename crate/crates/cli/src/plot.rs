//! Log-log line plots as SVG.

use std::path::Path;

use plotters::prelude::*;

use crate::error::{CliError, Result};

/// One curve per `(name, points)`; non-positive values are dropped.
pub fn loglog(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    curves: &[(&str, Vec<(f64, f64)>)],
) -> Result<()> {
    let fail = |e: &dyn std::fmt::Display| CliError::Plot { path: path.to_path_buf(), detail: e.to_string() };
    let curves: Vec<(&str, Vec<(f64, f64)>)> = curves
        .iter()
        .map(|(n, pts)| (*n, pts.iter().copied().filter(|&(x, y)| x > 0.0 && y > 0.0).collect()))
        .collect();
    let all = || curves.iter().flat_map(|(_, p)| p.iter().copied());
    if all().next().is_none() {
        return Err(fail(&"nothing positive to plot on log axes"));
    }
    let (x_lo, x_hi) = all().fold((f64::INFINITY, 0.0f64), |(lo, hi), (x, _)| (lo.min(x), hi.max(x)));
    let (y_lo, y_hi) = all().fold((f64::INFINITY, 0.0f64), |(lo, hi), (_, y)| (lo.min(y), hi.max(y)));
    // keep a degenerate range drawable
    let widen = |lo: f64, hi: f64| if hi > lo { (lo / 1.1, hi * 1.1) } else { (lo / 2.0, hi * 2.0) };
    let ((x_lo, x_hi), (y_lo, y_hi)) = (widen(x_lo, x_hi), widen(y_lo, y_hi));

    let root = SVGBackend::new(path, (640, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| fail(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d((x_lo..x_hi).log_scale(), (y_lo..y_hi).log_scale())
        .map_err(|e| fail(&e))?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .x_label_formatter(&|x| format!("{x:.0e}"))
        .y_label_formatter(&|y| format!("{y:.0e}"))
        .draw()
        .map_err(|e| fail(&e))?;
    for (k, (name, points)) in curves.iter().enumerate() {
        let color = Palette99::pick(k).to_rgba();
        chart
            .draw_series(LineSeries::new(points.iter().copied(), color.stroke_width(2)))
            .map_err(|e| fail(&e))?
            .label(*name)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color));
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| fail(&e))?;
    root.present().map_err(|e| fail(&e))
}
