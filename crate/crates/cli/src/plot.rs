//! Minimal SVG line charts for curve CSVs.

use std::fs;
use std::path::Path;

use crate::error::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const COLORS: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
];

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

fn read_curve(path: &Path) -> Result<Series, CliError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if !header.starts_with("step,") {
        return Err(CliError::Config(format!(
            "{}: not a curve CSV (header `{header}`)",
            path.display()
        )));
    }
    let mut points = Vec::new();
    for line in lines {
        let mut cols = line.split(',');
        let step: f64 = cols
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Config(format!("{}: bad row `{line}`", path.display())))?;
        let value: f64 = cols
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Config(format!("{}: bad row `{line}`", path.display())))?;
        points.push((step, value));
    }
    if points.is_empty() {
        return Err(CliError::Config(format!("{}: empty curve", path.display())));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(Series { name, points })
}

/// Renders the curve CSVs at `inputs` into one SVG line chart at `out`.
pub fn plot_curves(inputs: &[impl AsRef<Path>], out: &Path) -> Result<(), CliError> {
    if inputs.is_empty() {
        return Err(CliError::Config("no curve files given".into()));
    }
    let series: Result<Vec<Series>, CliError> =
        inputs.iter().map(|p| read_curve(p.as_ref())).collect();
    let series = series?;
    let x_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(1.0f64, f64::max);
    let y_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(1e-9f64, f64::max);
    let sx = |x: f64| MARGIN + x / x_max * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / y_max * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        m = MARGIN,
        y0 = HEIGHT - MARGIN,
        x1 = WIDTH - MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\">steps</text>\n\
         <text x=\"10\" y=\"{}\" font-size=\"12\">cumulative regret</text>\n",
        WIDTH / 2.0 - 20.0,
        HEIGHT - MARGIN / 3.0,
        MARGIN / 2.0
    ));
    // Axis extents.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.0}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.1}</text>\n",
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 15.0,
        x_max,
        MARGIN - 5.0,
        MARGIN + 5.0,
        y_max
    ));
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            WIDTH - MARGIN + 5.0 - 120.0,
            MARGIN + 15.0 * (i as f64 + 1.0),
            s.name
        ));
    }
    svg.push_str("</svg>\n");
    crate::experiment::write_file(out, &svg)
}
