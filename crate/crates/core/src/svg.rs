//! Minimal SVG output for path drawings and line plots. Time runs upward.

use std::fmt::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pathspace::{theta_map, CompactPoint};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 24.0;

/// How `(x, t)` is mapped to the canvas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// Affine fit of the bounding box.
    Linear,
    /// Through the compactification map; the canvas is `[-1, 1]^2`.
    Theta,
}

impl FromStr for Scale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Scale::Linear),
            "theta" => Ok(Scale::Theta),
            _ => Err(Error::param(
                "scale",
                format!("expected linear or theta, got {s}"),
            )),
        }
    }
}

/// A polyline of `(x, t)` points.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgPath {
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(pts: impl Iterator<Item = (f64, f64)>) -> Frame {
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for (x, y) in pts {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !(f.x0 < f.x1) {
            (f.x0, f.x1) = (f.x0.min(0.0) - 1.0, f.x1.max(0.0) + 1.0);
        }
        if !(f.y0 < f.y1) {
            (f.y0, f.y1) = (f.y0.min(0.0) - 1.0, f.y1.max(0.0) + 1.0);
        }
        f
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let span = SIZE - 2.0 * MARGIN;
        (
            MARGIN + span * (x - self.x0) / (self.x1 - self.x0),
            SIZE - MARGIN - span * (y - self.y0) / (self.y1 - self.y0),
        )
    }
}

fn header(s: &mut String) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn polyline(s: &mut String, pts: impl Iterator<Item = (f64, f64)>, style: &str) {
    s.push_str("<polyline points=\"");
    for (i, (x, y)) in pts.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.2},{y:.2}");
    }
    let _ = writeln!(s, "\" fill=\"none\" {style}/>");
}

/// Forward paths as thin solid lines and dual paths dashed.
pub fn paths_svg(paths: &[SvgPath], scale: Scale) -> Result<String> {
    let mapped: Vec<Vec<(f64, f64)>> = paths
        .iter()
        .map(|p| {
            p.points
                .iter()
                .map(|&(x, t)| match scale {
                    Scale::Linear => Ok((x, t)),
                    Scale::Theta => Ok(theta_map(&CompactPoint::finite(x, t)?)),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let frame = match scale {
        Scale::Linear => Frame::fit(mapped.iter().flatten().copied()),
        Scale::Theta => Frame {
            x0: -1.0,
            x1: 1.0,
            y0: -1.0,
            y1: 1.0,
        },
    };
    let mut s = String::new();
    header(&mut s);
    for (p, pts) in paths.iter().zip(&mapped) {
        let style = if p.dashed {
            r#"stroke="firebrick" stroke-width="0.8" stroke-dasharray="3,2""#
        } else {
            r#"stroke="black" stroke-width="0.6""#
        };
        polyline(&mut s, pts.iter().map(|&(x, y)| frame.map(x, y)), style);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Line plot of `(x, y)` points with a frame and the axis ranges printed in
/// the corners.
pub fn line_plot(points: &[(f64, f64)], title: &str) -> String {
    let frame = Frame::fit(points.iter().copied());
    let mut s = String::new();
    header(&mut s);
    let lo = MARGIN;
    let hi = SIZE - MARGIN;
    let _ = writeln!(
        s,
        r#"<rect x="{lo}" y="{lo}" width="{w}" height="{w}" fill="none" stroke="gray"/>"#,
        w = hi - lo
    );
    polyline(
        &mut s,
        points.iter().map(|&(x, y)| frame.map(x, y)),
        r#"stroke="navy" stroke-width="1.5""#,
    );
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, body: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" font-size="11" font-family="monospace" text-anchor="{anchor}">{body}</text>"#
        );
    };
    text(&mut s, SIZE / 2.0, lo - 8.0, "middle", escape(title));
    text(&mut s, lo, hi + 14.0, "start", format!("{:.4}", frame.x0));
    text(&mut s, hi, hi + 14.0, "end", format!("{:.4}", frame.x1));
    text(
        &mut s,
        lo + 4.0,
        hi - 4.0,
        "start",
        format!("{:.4}", frame.y0),
    );
    text(
        &mut s,
        lo + 4.0,
        lo + 12.0,
        "start",
        format!("{:.4}", frame.y1),
    );
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn styles_and_frame() {
        let p = vec![
            SvgPath {
                points: vec![(0.0, 0.0), (1.0, 1.0)],
                dashed: false,
            },
            SvgPath {
                points: vec![(1.0, 1.0), (0.0, 0.0)],
                dashed: true,
            },
        ];
        let s = paths_svg(&p, Scale::Linear).unwrap();
        assert_eq!(s.matches("<polyline").count(), 2);
        assert_eq!(s.matches("stroke-dasharray").count(), 1);
        // bottom-left and top-right corners of the drawing area
        assert!(s.contains("24.00,576.00 576.00,24.00"));
        assert!(s.ends_with("</svg>\n"));
    }

    #[test]
    fn theta_scale_stays_in_the_unit_box() {
        let p = vec![SvgPath {
            points: vec![(-1e9, 0.0), (1e9, 1e9)],
            dashed: false,
        }];
        let s = paths_svg(&p, Scale::Theta).unwrap();
        assert!(s.contains("24.00,300.00"));
    }

    #[test]
    fn flat_plot_does_not_divide_by_zero() {
        let s = line_plot(&[(0.0, 2.0), (1.0, 2.0)], "a<b");
        assert!(!s.contains("NaN"));
        assert!(s.contains("a&lt;b"));
    }
}
