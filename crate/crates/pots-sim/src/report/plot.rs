//! Static SVG line charts for the sweep figures.
//!
//! Hand-rolled rendering: the charts are simple enough (a handful of series
//! over seven x positions) that a plotting dependency would outweigh them.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 56.0;
const LEGEND_WIDTH: f64 = 150.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
            dashed: false,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

/// A line chart with explicit x tick positions (x values are already in plot
/// coordinates, e.g. log2 of the team size).
#[derive(Clone, Debug)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_ticks: Vec<(f64, String)>,
    pub series: Vec<Series>,
    pub log_y: bool,
}

impl LineChart {
    pub fn to_svg(&self) -> String {
        let plot_left = MARGIN_LEFT;
        let plot_right = WIDTH - LEGEND_WIDTH - 16.0;
        let plot_top = MARGIN_TOP;
        let plot_bottom = HEIGHT - MARGIN_BOTTOM;

        // Series points, with nonpositive y dropped in log mode.
        let visible: Vec<(usize, Vec<(f64, f64)>)> = self
            .series
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let pts: Vec<(f64, f64)> = s
                    .points
                    .iter()
                    .copied()
                    .filter(|&(_, y)| !self.log_y || y > 0.0)
                    .collect();
                (i, pts)
            })
            .filter(|(_, pts)| !pts.is_empty())
            .collect();

        let xs: Vec<f64> = visible
            .iter()
            .flat_map(|(_, pts)| pts.iter().map(|p| p.0))
            .chain(self.x_ticks.iter().map(|t| t.0))
            .collect();
        let ys: Vec<f64> = visible
            .iter()
            .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
            .collect();
        let (x_min, x_max) = span(&xs, 0.0, 1.0);
        let (mut y_min, mut y_max) = span(&ys, 0.0, 1.0);

        let y_ticks: Vec<(f64, String)>;
        if self.log_y {
            let lo = y_min.log10().floor() as i32;
            let hi = y_max.log10().ceil() as i32;
            y_min = 10f64.powi(lo);
            y_max = 10f64.powi(hi.max(lo + 1));
            y_ticks = (lo..=hi.max(lo + 1))
                .map(|e| (10f64.powi(e), format_tick(10f64.powi(e))))
                .collect();
        } else {
            if y_min > 0.0 {
                y_min = 0.0;
            }
            if y_max <= y_min {
                y_max = y_min + 1.0;
            }
            y_max += 0.05 * (y_max - y_min);
            let step = nice_step((y_max - y_min) / 5.0);
            let mut ticks = Vec::new();
            let mut v = (y_min / step).ceil() * step;
            while v <= y_max + 1e-9 * step {
                ticks.push((v, format_tick(v)));
                v += step;
            }
            y_ticks = ticks;
        }

        let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
        let to_x = |x: f64| plot_left + (x - x_min) / x_span * (plot_right - plot_left);
        let to_y = |y: f64| {
            let t = if self.log_y {
                (y.log10() - y_min.log10()) / (y_max.log10() - y_min.log10())
            } else {
                (y - y_min) / (y_max - y_min)
            };
            plot_bottom - t * (plot_bottom - plot_top)
        };

        let mut svg = String::new();
        let _ = write!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = write!(
            svg,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = write!(
            svg,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            (plot_left + plot_right) / 2.0,
            escape(&self.title)
        );

        // gridlines + y ticks
        for (v, label) in &y_ticks {
            let y = to_y(*v);
            let _ = write!(
                svg,
                r##"<line x1="{plot_left}" y1="{y:.1}" x2="{plot_right}" y2="{y:.1}" stroke="#dddddd"/>"##
            );
            let _ = write!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                plot_left - 6.0,
                y + 4.0,
                escape(label)
            );
        }
        // x ticks
        for (v, label) in &self.x_ticks {
            let x = to_x(*v);
            let _ = write!(
                svg,
                r##"<line x1="{x:.1}" y1="{plot_bottom}" x2="{x:.1}" y2="{}" stroke="#999999"/>"##,
                plot_bottom + 4.0
            );
            let _ = write!(
                svg,
                r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                plot_bottom + 18.0,
                escape(label)
            );
        }
        // axes
        let _ = write!(
            svg,
            r#"<line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" stroke="black"/>"#
        );
        let _ = write!(
            svg,
            r#"<line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" stroke="black"/>"#
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            (plot_left + plot_right) / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = write!(
            svg,
            r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
            (plot_top + plot_bottom) / 2.0,
            (plot_top + plot_bottom) / 2.0,
            escape(&self.y_label)
        );

        // series + legend
        let legend_x = plot_right + 14.0;
        for (slot, (series_index, points)) in visible.iter().enumerate() {
            let series = &self.series[*series_index];
            let color = PALETTE[series_index % PALETTE.len()];
            let dash = if series.dashed {
                r#" stroke-dasharray="6 3""#
            } else {
                ""
            };
            let coords: Vec<String> = points
                .iter()
                .map(|&(x, y)| format!("{:.1},{:.1}", to_x(x), to_y(y)))
                .collect();
            let _ = write!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{}"/>"#,
                coords.join(" ")
            );
            for &(x, y) in points {
                let _ = write!(
                    svg,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="2.4" fill="{color}"/>"#,
                    to_x(x),
                    to_y(y)
                );
            }
            let ly = plot_top + 14.0 * slot as f64;
            let _ = write!(
                svg,
                r#"<line x1="{legend_x}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="1.6"{dash}/>"#,
                ly - 4.0,
                legend_x + 22.0,
                ly - 4.0
            );
            let _ = write!(
                svg,
                r#"<text x="{:.1}" y="{ly:.1}">{}</text>"#,
                legend_x + 27.0,
                escape(&series.label)
            );
        }

        svg.push_str("</svg>\n");
        svg
    }
}

fn span(values: &[f64], fallback_min: f64, fallback_max: f64) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if min > max {
        (fallback_min, fallback_max)
    } else {
        (min, max)
    }
}

/// Rounds a raw step up to 1, 2, or 5 times a power of ten.
fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 || !raw.is_finite() {
        return 1.0;
    }
    let mag = 10f64.powf(raw.log10().floor());
    let unit = raw / mag;
    let nice = if unit <= 1.0 {
        1.0
    } else if unit <= 2.0 {
        2.0
    } else if unit <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let abs = v.abs();
    if !(1e-3..10_000.0).contains(&abs) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> LineChart {
        LineChart {
            title: "demo".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            x_ticks: vec![(0.0, "1".into()), (1.0, "2".into())],
            series: vec![
                Series::new("a", vec![(0.0, 1.0), (1.0, 4.0)]),
                Series::new("b", vec![(0.0, 2.0), (1.0, 0.0)]).dashed(),
            ],
            log_y: false,
        }
    }

    #[test]
    fn renders_all_series() {
        let svg = chart().to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains(">demo<"));
    }

    #[test]
    fn log_scale_drops_nonpositive_points() {
        let mut c = chart();
        c.log_y = true;
        let svg = c.to_svg();
        // series b keeps only its positive point
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn escapes_markup_in_labels() {
        let mut c = chart();
        c.title = "a < b & c".into();
        let svg = c.to_svg();
        assert!(svg.contains("a &lt; b &amp; c"));
    }

    #[test]
    fn nice_steps_round_up() {
        assert_eq!(nice_step(0.7), 1.0);
        assert_eq!(nice_step(1.2), 2.0);
        assert_eq!(nice_step(3.0), 5.0);
        assert_eq!(nice_step(7.0), 10.0);
        assert_eq!(nice_step(0.03), 0.05);
    }

    #[test]
    fn tick_formatting() {
        assert_eq!(format_tick(0.0), "0");
        assert_eq!(format_tick(12.5), "12.5");
        assert_eq!(format_tick(50.0), "50");
        assert_eq!(format_tick(1e-9), "1e-9");
    }
}
