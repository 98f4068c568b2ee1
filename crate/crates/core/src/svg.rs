//! Deterministic SVG rendering of a truncated Ford domain: boundary
//! circles as upper semicircular arcs, strip edges as vertical lines, and
//! marked points with coordinate labels. Exact values are formatted to six
//! significant digits only at the final printing step.

use num_traits::ToPrimitive;

use crate::domain::FordDomain;
use crate::moebius::HPoint;
use crate::{Error, Rat, Result};

/// Viewport in half-plane coordinates: `x_min < x < x_max`, `0 < y < y_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Window {
    /// A window with a margin around the given points and strip.
    pub fn around(points: &[HPoint], strip: Option<&crate::domain::Strip>) -> Window {
        let mut x_min = -1.0f64;
        let mut x_max = 1.0f64;
        let mut y_max = 1.5f64;
        for p in points {
            let x = to_f64(p.x());
            x_min = x_min.min(x - 1.0);
            x_max = x_max.max(x + 1.0);
            y_max = y_max.max(to_f64(p.y_sq()).sqrt() + 1.0);
        }
        if let Some(strip) = strip {
            let left = to_f64(&strip.left);
            let width = to_f64(&strip.width);
            x_min = x_min.min(left - 0.5);
            x_max = x_max.max(left + width + 0.5);
        }
        Window { x_min, x_max, y_max }
    }
}

const WIDTH_PX: f64 = 800.0;

fn fmt6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = (6 - 1 - x.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{x:.digits$}");
    // strip trailing zeros after a decimal point
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

/// Render the domain and points into a standalone SVG document.
pub fn render_svg(dom: &FordDomain, points: &[HPoint], window: Window) -> Result<String> {
    let valid = window.x_min < window.x_max && window.y_max > 0.0;
    if !valid {
        return Err(Error::BadWindow);
    }
    let span_x = window.x_max - window.x_min;
    let height_px = WIDTH_PX * window.y_max / span_x;
    let scale = WIDTH_PX / span_x;
    let sx = |x: f64| (x - window.x_min) * scale;
    let sy = |y: f64| height_px - y * scale;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        fmt6(WIDTH_PX),
        fmt6(height_px),
        fmt6(WIDTH_PX),
        fmt6(height_px)
    ));
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // real axis
    out.push_str(&format!(
        "  <line class=\"axis\" x1=\"0\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        fmt6(sy(0.0)),
        fmt6(WIDTH_PX)
    ));

    // boundary circles as upper semicircular arcs
    for c in &dom.circles {
        let center = to_f64(&c.center);
        let radius = to_f64(&c.radius_sq).sqrt();
        out.push_str(&format!(
            "  <path class=\"arc\" d=\"M {} {} A {} {} 0 0 1 {} {}\" \
             fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
            fmt6(sx(center - radius)),
            fmt6(sy(0.0)),
            fmt6(radius * scale),
            fmt6(radius * scale),
            fmt6(sx(center + radius)),
            fmt6(sy(0.0)),
        ));
    }

    // strip edges as vertical lines
    if let Some(strip) = &dom.strip {
        let left = to_f64(&strip.left);
        let right = left + to_f64(&strip.width);
        for x in [left, right] {
            out.push_str(&format!(
                "  <line class=\"strip\" x1=\"{0}\" y1=\"0\" x2=\"{0}\" y2=\"{1}\" \
                 stroke=\"dimgray\" stroke-width=\"1\" stroke-dasharray=\"6 3\"/>\n",
                fmt6(sx(x)),
                fmt6(height_px)
            ));
        }
    }

    // marked points with labels
    for p in points {
        let x = to_f64(p.x());
        let y = to_f64(p.y_sq()).sqrt();
        out.push_str(&format!(
            "  <circle class=\"pt\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"crimson\"/>\n",
            fmt6(sx(x)),
            fmt6(sy(y))
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"black\">({}, {})</text>\n",
            fmt6(sx(x) + 5.0),
            fmt6(sy(y) - 5.0),
            fmt6(x),
            fmt6(y)
        ));
    }

    out.push_str("</svg>\n");
    Ok(out)
}
