//! Minimal SVG line plots for the CSV grids. No interactive UI: a fixed
//! viewport, log-log or linear axes, one polyline per series.

use std::fs;
use std::path::Path;

use crate::CliError;

pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

const W: f64 = 640.0;
const H: f64 = 440.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Log-log line plot; points with nonpositive coordinates are dropped.
pub fn loglog_plot(path: &Path, title: &str, series: &[Series<'_>]) -> Result<(), CliError> {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        for (&x, &y) in s.xs.iter().zip(s.ys) {
            if x > 0.0 && y > 0.0 {
                xmin = xmin.min(x.ln());
                xmax = xmax.max(x.ln());
                ymin = ymin.min(y.ln());
                ymax = ymax.max(y.ln());
            }
        }
    }
    if !xmin.is_finite() || xmax == xmin {
        return Err(CliError::Io("no plottable points".into()));
    }
    if ymax == ymin {
        ymax += 1.0;
        ymin -= 1.0;
    }

    let sx = |x: f64| MARGIN + (x.ln() - xmin) / (xmax - xmin) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y.ln() - ymin) / (ymax - ymin) * (H - 2.0 * MARGIN);

    let mut doc = String::new();
    doc.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    doc.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        xml_escape(title)
    ));
    // axes
    doc.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n<line x1=\"{MARGIN}\" y1=\"{MARGIN}\" x2=\"{MARGIN}\" y2=\"{0}\" stroke=\"black\"/>\n",
        H - MARGIN,
        W - MARGIN
    ));
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .xs
            .iter()
            .zip(s.ys)
            .filter(|(&x, &y)| x > 0.0 && y > 0.0)
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        doc.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
        doc.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            W - MARGIN + 4.0,
            MARGIN + 16.0 * i as f64,
            xml_escape(s.label)
        ));
    }
    doc.push_str("</svg>\n");
    fs::write(path, doc).map_err(|e| CliError::Io(format!("write {}: {e}", path.display())))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_wellformed_svg() {
        let dir = std::env::temp_dir().join("jlps_svg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.svg");
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys = [1.0, 0.5, 0.25, 0.125];
        loglog_plot(
            &path,
            "decay",
            &[Series { label: "norm", xs: &xs, ys: &ys }],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.contains("polyline"));
        assert!(text.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn rejects_empty_data() {
        let dir = std::env::temp_dir().join("jlps_svg_test2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.svg");
        assert!(loglog_plot(&path, "x", &[Series { label: "a", xs: &[], ys: &[] }]).is_err());
    }
}
