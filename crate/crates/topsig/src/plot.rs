//! Static SVG renderings of curves and band estimates. Pure emitters:
//! no timestamps or other run-dependent metadata, so identical inputs
//! produce identical bytes.

use std::fmt::Write as _;

use crate::estimate::SignatureEstimate;
use crate::functional::FunctionalCurve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let pad = ((y1 - y0).abs()).max(1e-12) * 0.05;
        Frame { x0, x1, y0: y0 - pad, y1: y1 + pad }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
}

fn axes(out: &mut String, frame: &Frame) {
    let _ = writeln!(
        out,
        "<g stroke=\"#444\" stroke-width=\"1\">\
         <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\"/>\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\"/></g>",
        m = MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
    );
    let _ = writeln!(
        out,
        "<g font-family=\"monospace\" font-size=\"12\" fill=\"#222\">\
         <text x=\"{m}\" y=\"{below}\">{x0}</text>\
         <text x=\"{r}\" y=\"{below}\" text-anchor=\"end\">{x1}</text>\
         <text x=\"6\" y=\"{b}\">{y0:.4}</text>\
         <text x=\"6\" y=\"{t}\">{y1:.4}</text></g>",
        m = MARGIN,
        r = WIDTH - MARGIN,
        below = HEIGHT - MARGIN + 18.0,
        b = HEIGHT - MARGIN,
        t = MARGIN + 4.0,
        x0 = frame.x0,
        x1 = frame.x1,
        y0 = frame.y0,
        y1 = frame.y1,
    );
}

fn polyline(out: &mut String, frame: &Frame, xs: &[f64], ys: &[f64], color: &str, width: f64) {
    let mut points = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let _ = write!(points, "{:.3},{:.3} ", frame.px(*x), frame.py(*y));
    }
    let _ = writeln!(
        out,
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\" points=\"{}\"/>",
        points.trim_end()
    );
}

/// Line plot for a 1d curve, heatmap for a 2d one.
pub fn render_curve(curve: &FunctionalCurve) -> String {
    let mut out = String::new();
    header(&mut out);
    match curve.grid.dim() {
        1 => {
            let axis = curve.grid.axes[0];
            let xs: Vec<f64> = (0..axis.count).map(|i| axis.node(i)).collect();
            let lo = curve.values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = curve.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let frame = Frame::new(axis.start, axis.stop, lo.min(0.0), hi.max(0.0));
            axes(&mut out, &frame);
            polyline(&mut out, &frame, &xs, &curve.values, "#08519c", 1.6);
        }
        _ => heatmap(&mut out, curve),
    }
    out.push_str("</svg>\n");
    out
}

fn heatmap(out: &mut String, curve: &FunctionalCurve) {
    let ax = curve.grid.axes[0];
    let ay = curve.grid.axes[1];
    let hi = curve.values.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
    let cell_w = (WIDTH - 2.0 * MARGIN) / ax.count as f64;
    let cell_h = (HEIGHT - 2.0 * MARGIN) / ay.count as f64;
    for ix in 0..ax.count {
        for iy in 0..ay.count {
            let v = curve.values[ix * ay.count + iy];
            let s = (v / hi).clamp(0.0, 1.0);
            let shade = (255.0 - 205.0 * s) as u8;
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
                 fill=\"rgb({shade},{shade},255)\"/>",
                MARGIN + ix as f64 * cell_w,
                HEIGHT - MARGIN - (iy + 1) as f64 * cell_h,
                cell_w + 0.5,
                cell_h + 0.5,
            );
        }
    }
    let _ = writeln!(
        out,
        "<g font-family=\"monospace\" font-size=\"12\" fill=\"#222\">\
         <text x=\"{m}\" y=\"{below}\">[{x0}, {x1}] x [{y0}, {y1}], peak {hi:.4}</text></g>",
        m = MARGIN,
        below = HEIGHT - MARGIN + 18.0,
        x0 = ax.start,
        x1 = ax.stop,
        y0 = ay.start,
        y1 = ay.stop,
    );
}

/// Mean line with a shaded band between the lower and upper curves.
pub fn render_estimate(estimate: &SignatureEstimate) -> String {
    let mut out = String::new();
    header(&mut out);
    if estimate.grid.dim() != 1 {
        // band surfaces are not drawable as a heatmap triple; render the mean
        let mean = estimate.mean_curve();
        heatmap(&mut out, &mean);
        out.push_str("</svg>\n");
        return out;
    }
    let axis = estimate.grid.axes[0];
    let xs: Vec<f64> = (0..axis.count).map(|i| axis.node(i)).collect();
    let lo = estimate.lower.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = estimate.upper.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(axis.start, axis.stop, lo.min(0.0), hi.max(0.0));
    axes(&mut out, &frame);

    let mut band = String::new();
    for (x, y) in xs.iter().zip(&estimate.upper) {
        let _ = write!(band, "{:.3},{:.3} ", frame.px(*x), frame.py(*y));
    }
    for (x, y) in xs.iter().zip(&estimate.lower).rev() {
        let _ = write!(band, "{:.3},{:.3} ", frame.px(*x), frame.py(*y));
    }
    let _ = writeln!(
        out,
        "<polygon fill=\"#9ecae1\" fill-opacity=\"0.55\" stroke=\"none\" points=\"{}\"/>",
        band.trim_end()
    );
    polyline(&mut out, &frame, &xs, &estimate.lower, "#6baed6", 0.8);
    polyline(&mut out, &frame, &xs, &estimate.upper, "#6baed6", 0.8);
    polyline(&mut out, &frame, &xs, &estimate.mean, "#08519c", 1.6);
    let _ = writeln!(
        out,
        "<g font-family=\"monospace\" font-size=\"12\" fill=\"#222\">\
         <text x=\"{}\" y=\"{}\">level {} ({:?}), {} replicates</text></g>",
        MARGIN,
        MARGIN - 8.0,
        estimate.level,
        estimate.band_kind,
        estimate.replicates,
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::BandKind;
    use crate::functional::EvaluationGrid;

    #[test]
    fn curve_svg_has_one_polyline() {
        let grid = EvaluationGrid::uniform_1d(0.0, 1.0, 16).unwrap();
        let curve = FunctionalCurve {
            values: (0..16).map(|i| (i as f64 * 0.3).sin()).collect(),
            grid,
        };
        let svg = render_curve(&curve);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(render_curve(&curve), svg);
    }

    #[test]
    fn estimate_svg_has_band_and_three_curves() {
        let grid = EvaluationGrid::uniform_1d(0.0, 1.0, 8).unwrap();
        let est = SignatureEstimate {
            grid,
            mean: vec![0.5; 8],
            lower: vec![0.25; 8],
            upper: vec![0.75; 8],
            level: 0.1,
            band_kind: BandKind::Pointwise,
            replicates: 20,
        };
        let svg = render_estimate(&est);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<polyline").count(), 3);
    }

    #[test]
    fn two_dimensional_curve_renders_a_heatmap() {
        let grid = EvaluationGrid::new(vec![
            crate::functional::GridAxis { start: 0.0, stop: 1.0, count: 4 },
            crate::functional::GridAxis { start: 0.0, stop: 1.0, count: 4 },
        ])
        .unwrap();
        let curve = FunctionalCurve { values: (0..16).map(|i| i as f64).collect(), grid };
        let svg = render_curve(&curve);
        assert_eq!(svg.matches("<rect").count(), 17); // 16 cells + background
    }
}
