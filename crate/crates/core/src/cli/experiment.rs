use std::fmt::Write as _;

use serde::Serialize;

use super::CliError;
use crate::graph::{generate, GraphFamily, WeightedGraph};
use crate::walks::{delta_norm_sequence, DeltaKind};

/// Fewest points in the fit window for a slope to be reported.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DecayFamily {
    /// Circulant graph joining each vertex to the `d/2` nearest on either side.
    ConnectedCycle,
    /// `d/2`-dimensional torus with side `n`.
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DecayMatrix {
    /// `Δ^(t)`.
    Delta,
    /// `Δ^(t) + Δ^(t+1)`.
    DeltaSum,
    /// `Δ̃^(t)`.
    DeltaTilde,
    /// `Δ̃^(t−1) + Δ̃^(t)`.
    DeltaTildeSum,
}

impl DecayFamily {
    pub fn name(self) -> &'static str {
        match self {
            DecayFamily::ConnectedCycle => "connected-cycle",
            DecayFamily::Torus => "torus",
        }
    }
}

impl DecayMatrix {
    pub fn kind(self) -> DeltaKind {
        match self {
            DecayMatrix::Delta => DeltaKind::Plain,
            DecayMatrix::DeltaSum => DeltaKind::PlainSum,
            DecayMatrix::DeltaTilde => DeltaKind::Conditioned,
            DecayMatrix::DeltaTildeSum => DeltaKind::ConditionedSum,
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            DecayMatrix::Delta => "delta_inf_norm",
            DecayMatrix::DeltaSum => "delta_sum_inf_norm",
            DecayMatrix::DeltaTilde => "delta_tilde_inf_norm",
            DecayMatrix::DeltaTildeSum => "delta_tilde_sum_inf_norm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayConfig {
    pub family: DecayFamily,
    pub degree: usize,
    pub n: usize,
    /// Last step; defaults to the end of the fit window, at least 3.
    pub t_max: Option<usize>,
    pub which: DecayMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayResult {
    pub config: DecayConfig,
    pub n_vertices: usize,
    pub diameter: usize,
    /// Last step before walks can wrap around the graph: `⌊diameter / d⌋`.
    pub window_end: usize,
    pub rows: Vec<(usize, f64)>,
    pub fit: Option<LogLogFit>,
    pub note: Option<String>,
}

/// The graph of one experiment cell.
pub fn decay_graph(
    family: DecayFamily,
    degree: usize,
    n: usize,
) -> Result<WeightedGraph, CliError> {
    if degree < 4 || degree % 2 == 1 {
        return Err(CliError::InvalidArgument(format!(
            "decay experiments need an even degree of at least 4, got {degree}"
        )));
    }
    let half = degree / 2;
    let family = match family {
        DecayFamily::ConnectedCycle => {
            if n <= degree {
                return Err(CliError::InvalidArgument(format!(
                    "a {half}-connected cycle needs more than {degree} vertices, got {n}"
                )));
            }
            GraphFamily::KConnectedCycle { n, k: half }
        }
        DecayFamily::Torus => {
            if n < 3 {
                return Err(CliError::InvalidArgument(format!(
                    "torus side must be at least 3, got {n}"
                )));
            }
            GraphFamily::Torus(vec![n; half])
        }
    };
    Ok(generate(&family, 1.0)?)
}

/// Least-squares line through `(ln t, ln y)`; `None` with fewer than two points.
pub fn fit_loglog(points: &[(usize, f64)]) -> Option<LogLogFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > 0.0)
        .map(|&(t, y)| ((t as f64).ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(LogLogFit {
        slope,
        intercept: mean_y - slope * mean_x,
        points: logs.len(),
    })
}

/// Computes `‖·‖∞` of the chosen matrix for every step and fits the pre-wrap window.
pub fn run_tv_decay(config: &DecayConfig) -> Result<DecayResult, CliError> {
    let graph = decay_graph(config.family, config.degree, config.n)?;
    let diameter = graph.diameter();
    let window_end = diameter / config.degree;
    let t_max = config.t_max.unwrap_or(window_end.max(3));
    if t_max < 3 {
        return Err(CliError::InvalidArgument(format!(
            "t-max must be at least 3, got {t_max}"
        )));
    }
    let rows = delta_norm_sequence(&graph, config.which.kind(), t_max)?;
    let window: Vec<(usize, f64)> = rows
        .iter()
        .copied()
        .filter(|&(t, _)| t <= window_end)
        .collect();
    let positive = window.iter().filter(|(_, y)| *y > 0.0).count();
    let (fit, note) = if positive < MIN_FIT_POINTS {
        (
            None,
            Some(format!(
                "insufficient points for a fit: {positive} in window t <= {window_end}, need {MIN_FIT_POINTS}"
            )),
        )
    } else {
        (fit_loglog(&window), None)
    };
    Ok(DecayResult {
        config: config.clone(),
        n_vertices: graph.n_vertices(),
        diameter,
        window_end,
        rows,
        fit,
        note,
    })
}

impl DecayResult {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let csv_error = |e: csv::Error| CliError::InvalidArgument(e.to_string());
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["t", self.config.which.column()])
            .map_err(csv_error)?;
        for (t, value) in &self.rows {
            writer
                .write_record([t.to_string(), value.to_string()])
                .map_err(csv_error)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| CliError::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} d={} n={} ({} vertices), diameter {}, fit window t <= {}\n",
            self.config.family.name(),
            self.config.degree,
            self.config.n,
            self.n_vertices,
            self.diameter,
            self.window_end
        );
        match (&self.fit, &self.note) {
            (Some(fit), _) => {
                let _ = writeln!(
                    out,
                    "log-log slope {:.4} over {} points",
                    fit.slope, fit.points
                );
            }
            (None, Some(note)) => {
                let _ = writeln!(out, "{note}");
            }
            (None, None) => {}
        }
        out
    }

    /// Log-log line plot with decade grid lines and the fitted line over the window.
    pub fn to_svg(&self) -> String {
        const WIDTH: f64 = 640.0;
        const HEIGHT: f64 = 420.0;
        const LEFT: f64 = 70.0;
        const RIGHT: f64 = 20.0;
        const TOP: f64 = 30.0;
        const BOTTOM: f64 = 50.0;
        let points: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|(_, y)| *y > 0.0)
            .map(|&(t, y)| ((t as f64).log10(), y.log10()))
            .collect();
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"18\" text-anchor=\"middle\">{} ({}, d={}, n={})</text>",
            WIDTH / 2.0,
            self.config.which.column(),
            self.config.family.name(),
            self.config.degree,
            self.config.n
        );
        if points.is_empty() {
            svg.push_str("</svg>\n");
            return svg;
        }
        let (mut x_lo, mut x_hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.0), hi.max(p.0))
            });
        let (mut y_lo, mut y_hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.1), hi.max(p.1))
            });
        x_lo = x_lo.floor();
        x_hi = x_hi.ceil().max(x_lo + 1.0);
        y_lo = y_lo.floor();
        y_hi = y_hi.ceil().max(y_lo + 1.0);
        let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * (WIDTH - LEFT - RIGHT);
        let sy = |y: f64| HEIGHT - BOTTOM - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - TOP - BOTTOM);

        for decade in x_lo as i32..=x_hi as i32 {
            let x = sx(decade as f64);
            let _ = writeln!(
                svg,
                "<line x1=\"{x:.2}\" y1=\"{TOP}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>\n<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">1e{decade}</text>",
                HEIGHT - BOTTOM,
                HEIGHT - BOTTOM + 18.0
            );
        }
        for decade in y_lo as i32..=y_hi as i32 {
            let y = sy(decade as f64);
            let _ = writeln!(
                svg,
                "<line x1=\"{LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#ddd\"/>\n<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">1e{decade}</text>",
                WIDTH - RIGHT,
                LEFT - 6.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            svg,
            "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
            WIDTH - LEFT - RIGHT,
            HEIGHT - TOP - BOTTOM
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">t</text>",
            (LEFT + WIDTH - RIGHT) / 2.0,
            HEIGHT - 8.0
        );
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"{}\"/>",
            path.join(" ")
        );
        if let Some(fit) = &self.fit {
            let line = |t: f64| (fit.intercept + fit.slope * t.ln()) / std::f64::consts::LN_10;
            let (a, b) = (1.0f64, self.window_end as f64);
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#c03020\" stroke-dasharray=\"6 4\"/>\n<text x=\"{:.2}\" y=\"{:.2}\">slope {:.3}</text>",
                sx(a.log10()),
                sy(line(a)),
                sx(b.log10()),
                sy(line(b)),
                LEFT + 10.0,
                TOP + 16.0,
                fit.slope
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_power_law() {
        let points: Vec<(usize, f64)> =
            (1..=10).map(|t| (t, 3.0 * (t as f64).powf(-0.5))).collect();
        let fit = fit_loglog(&points).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn short_run_is_flagged() {
        let config = DecayConfig {
            family: DecayFamily::ConnectedCycle,
            degree: 4,
            n: 200,
            t_max: Some(3),
            which: DecayMatrix::Delta,
        };
        let result = run_tv_decay(&config).unwrap();
        assert_eq!(result.rows.len(), 3);
        assert!(result.fit.is_none());
        assert!(result.note.as_deref().unwrap().contains("insufficient"));
    }

    #[test]
    fn rejects_odd_degree() {
        assert!(decay_graph(DecayFamily::Torus, 3, 10).is_err());
        assert!(decay_graph(DecayFamily::ConnectedCycle, 4, 4).is_err());
    }

    #[test]
    fn tilde_sum_starts_at_two() {
        let config = DecayConfig {
            family: DecayFamily::Torus,
            degree: 4,
            n: 6,
            t_max: Some(5),
            which: DecayMatrix::DeltaTildeSum,
        };
        let result = run_tv_decay(&config).unwrap();
        assert_eq!(result.rows.first().unwrap().0, 2);
        assert_eq!(result.rows.last().unwrap().0, 5);
        let svg = result.to_svg();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
