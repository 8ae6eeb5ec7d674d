//! Depth-sweep series and their CSV / SVG renderings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One point of a depth sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub depth: usize,
    pub model_time: f64,
    #[serde(default)]
    pub simulated_time: Option<f64>,
    pub label: String,
}

/// Parameters the sweep was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub devices: usize,
    pub elements: usize,
    pub logical_delay: f64,
    pub latch_overhead: f64,
    #[serde(default)]
    pub restart_probability: Option<f64>,
    #[serde(default)]
    pub mode: Option<String>,
    pub unit: String,
}

/// A sweep of processing time over pipeline depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMeta,
}

/// Display unit for times: whole cycles when `h = 1`, abstract units else.
pub fn unit_label(logical_delay: f64, latch_overhead: f64) -> &'static str {
    if logical_delay == 0.0 && latch_overhead == 1.0 {
        "cycles"
    } else {
        "units"
    }
}

impl SweepResult {
    pub fn new(rows: Vec<SweepRow>, metadata: SweepMeta) -> Result<Self> {
        let increasing = rows.windows(2).all(|w| w[0].depth < w[1].depth);
        let sane_times = rows.iter().all(|r| {
            r.model_time.is_finite()
                && r.model_time >= 0.0
                && r.simulated_time.is_none_or(|t| t.is_finite() && t >= 0.0)
        });
        if !increasing || !sane_times {
            return Err(Error::InvalidSweepRows);
        }
        Ok(Self { rows, metadata })
    }

    /// Row with the smallest model time (first on ties).
    pub fn min_model_row(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .min_by(|a, b| a.model_time.total_cmp(&b.model_time))
    }

    /// `depth,model_time,simulated_time,label` with an empty cell for
    /// missing simulated values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,model_time,simulated_time,label\n");
        for row in &self.rows {
            let simulated = row
                .simulated_time
                .map(|t| t.to_string())
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.depth, row.model_time, simulated, row.label
            ));
        }
        out
    }

    /// Minimal self-contained plot: model curve as a polyline, simulated
    /// values as small circles, axes labelled in the sweep's unit.
    pub fn to_svg(&self) -> String {
        const WIDTH: f64 = 800.0;
        const HEIGHT: f64 = 500.0;
        const MARGIN_LEFT: f64 = 70.0;
        const MARGIN_RIGHT: f64 = 20.0;
        const MARGIN_TOP: f64 = 30.0;
        const MARGIN_BOTTOM: f64 = 55.0;

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

        let x_min = self.rows.first().map_or(0.0, |r| r.depth as f64);
        let x_max = self.rows.last().map_or(1.0, |r| r.depth as f64);
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for row in &self.rows {
            for value in std::iter::once(row.model_time).chain(row.simulated_time) {
                y_min = y_min.min(value);
                y_max = y_max.max(value);
            }
        }
        if !y_min.is_finite() {
            y_min = 0.0;
            y_max = 1.0;
        }
        if (y_max - y_min).abs() < f64::EPSILON {
            y_max = y_min + 1.0;
        }
        let y_pad = (y_max - y_min) * 0.05;
        let y_lo = (y_min - y_pad).max(0.0);
        let y_hi = y_max + y_pad;
        let x_span = (x_max - x_min).max(1.0);

        let to_x = |depth: f64| MARGIN_LEFT + (depth - x_min) / x_span * plot_w;
        let to_y = |time: f64| MARGIN_TOP + (1.0 - (time - y_lo) / (y_hi - y_lo)) * plot_h;

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

        // axes
        let x0 = MARGIN_LEFT;
        let x1 = WIDTH - MARGIN_RIGHT;
        let y0 = HEIGHT - MARGIN_BOTTOM;
        let y1 = MARGIN_TOP;
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n"
        ));
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
        ));

        // x ticks on integer depths
        let x_step = nice_step(x_span, 10.0).max(1.0);
        let mut depth_tick = x_min;
        while depth_tick <= x_max + 1e-9 {
            let x = to_x(depth_tick);
            svg.push_str(&format!(
                "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/>\n",
                y0 + 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                y0 + 20.0,
                depth_tick
            ));
            depth_tick += x_step;
        }

        // y ticks
        let y_step = nice_step(y_hi - y_lo, 6.0);
        let mut time_tick = (y_lo / y_step).ceil() * y_step;
        while time_tick <= y_hi + 1e-9 {
            let y = to_y(time_tick);
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{y}\" x2=\"{x0}\" y2=\"{y}\" stroke=\"black\"/>\n",
                x0 - 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                x0 - 8.0,
                y + 4.0,
                trim_float(time_tick)
            ));
            time_tick += y_step;
        }

        // axis labels
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">pipeline depth p</text>\n",
            (x0 + x1) / 2.0,
            HEIGHT - 12.0
        ));
        svg.push_str(&format!(
            "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">time [{}]</text>\n",
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            self.metadata.unit
        ));

        // model curve
        let points: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("{},{}", to_x(r.depth as f64), to_y(r.model_time)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));

        // simulated values as small circles
        for row in &self.rows {
            if let Some(simulated) = row.simulated_time {
                svg.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"#d62728\"/>\n",
                    to_x(row.depth as f64),
                    to_y(simulated)
                ));
            }
        }

        // legend
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"#1f77b4\">model</text>\n",
            x1 - 130.0,
            y1 + 14.0
        ));
        if self.rows.iter().any(|r| r.simulated_time.is_some()) {
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" fill=\"#d62728\">simulated</text>\n",
                x1 - 75.0,
                y1 + 14.0
            ));
        }

        svg.push_str("</svg>\n");
        svg
    }
}

/// Largest of 1/2/5 times a power of ten giving at most `target` steps.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let magnitude = 10f64.powf(raw.log10().floor());
    for factor in [1.0, 2.0, 5.0, 10.0] {
        if magnitude * factor >= raw {
            return magnitude * factor;
        }
    }
    magnitude * 10.0
}

fn trim_float(value: f64) -> String {
    let text = format!("{value:.3}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    text.to_string()
}
