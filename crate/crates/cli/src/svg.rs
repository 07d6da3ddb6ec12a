//! Self-contained SVG scatter of zeros over the limit set.
//!
//! The canvas is 800×800 with equal scales on both axes. Coordinates are
//! printed with two decimals, so the output is a pure function of the input.
//! Each zero marker carries its exact value in a `data-z` attribute.

use std::f64::consts::PI;
use std::fmt::Write;

use reczeros::{Complex64, LimitKind, LimitSet, RecurrenceParams};

use crate::json::sci;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 70.0;
const ARC_SAMPLES: usize = 256;
const INFLATE: f64 = 1.2;

const LIMIT_COLOR: &str = "#1f5fa8";
const ISOLATED_COLOR: &str = "#c62828";
const ROOT_COLOR: &str = "#111111";

/// Data for one figure.
pub struct Figure<'a> {
    pub params: &'a RecurrenceParams,
    pub n: usize,
    pub roots: &'a [Complex64],
    pub limit: &'a LimitSet,
}

/// World-to-canvas map over a square window.
struct View {
    x_min: f64,
    y_max: f64,
    scale: f64,
}

impl View {
    fn fit(limit: &LimitSet, roots: &[Complex64]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = limit.bounds();
        for z in roots
            .iter()
            .filter(|z| z.re.is_finite() && z.im.is_finite())
        {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let mut half = (x1 - x0).max(y1 - y0) / 2.0 * INFLATE;
        if !(half.is_finite() && half > 0.0) {
            half = 1.0;
        }
        Self {
            x_min: cx - half,
            y_max: cy + half,
            scale: (SIZE - 2.0 * MARGIN) / (2.0 * half),
        }
    }

    fn span(&self) -> f64 {
        (SIZE - 2.0 * MARGIN) / self.scale
    }

    fn x(&self, re: f64) -> f64 {
        MARGIN + (re - self.x_min) * self.scale
    }

    fn y(&self, im: f64) -> f64 {
        MARGIN + (self.y_max - im) * self.scale
    }
}

/// Two decimals with negative zero printed as zero.
fn px(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn number(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

pub fn render(fig: &Figure) -> String {
    let view = View::fit(fig.limit, fig.roots);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\" \
         font-family=\"sans-serif\" font-size=\"13\">\n",
    );
    s.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n");
    axes(&mut s, &view);
    title(&mut s, fig);
    limit_set(&mut s, &view, fig.limit);
    for z in fig.limit.isolated.iter() {
        cross(&mut s, view.x(z.re), view.y(z.im));
    }
    s.push_str(&format!("<g id=\"zeros\" fill=\"{ROOT_COLOR}\">\n"));
    for z in fig.roots {
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" data-z=\"{},{}\"/>",
            px(view.x(z.re)),
            px(view.y(z.im)),
            sci(z.re),
            sci(z.im)
        );
    }
    s.push_str("</g>\n");
    legend(&mut s, fig.n);
    s.push_str("</svg>\n");
    s
}

fn axes(s: &mut String, v: &View) {
    let (lo, hi) = (MARGIN, SIZE - MARGIN);
    let _ = writeln!(
        s,
        "<rect x=\"{lo}\" y=\"{lo}\" width=\"{w}\" height=\"{w}\" fill=\"none\" stroke=\"#888888\"/>",
        w = hi - lo
    );
    let span = v.span();
    let y_min = v.y_max - span;
    let x_max = v.x_min + span;
    if v.x_min < 0.0 && 0.0 < x_max {
        let x = px(v.x(0.0));
        let _ = writeln!(s, "<line x1=\"{x}\" y1=\"{lo}\" x2=\"{x}\" y2=\"{hi}\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>");
    }
    if y_min < 0.0 && 0.0 < v.y_max {
        let y = px(v.y(0.0));
        let _ = writeln!(s, "<line x1=\"{lo}\" y1=\"{y}\" x2=\"{hi}\" y2=\"{y}\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>");
    }
    s.push_str("<g fill=\"#333333\">\n");
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let xv = v.x_min + t * span;
        let yv = y_min + t * span;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            px(v.x(xv)),
            px(hi + 18.0),
            label(xv)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            px(lo - 6.0),
            px(v.y(yv) + 4.0),
            label(yv)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"400\" y=\"{}\" text-anchor=\"middle\">Re z</text>",
        px(SIZE - 20.0)
    );
    s.push_str("<text x=\"18\" y=\"400\" text-anchor=\"middle\" transform=\"rotate(-90 18 400)\">Im z</text>\n");
    s.push_str("</g>\n");
}

fn title(s: &mut String, fig: &Figure) {
    let [a, b, c, d] = fig.params.as_array().map(number);
    let _ = writeln!(
        s,
        "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">Zeros of W_{} for (a, b, c, d) = ({a}, {b}, {c}, {d}); limit set: {}</text>",
        fig.n,
        fig.limit.kind.as_str()
    );
}

fn limit_set(s: &mut String, v: &View, ls: &LimitSet) {
    let stroke = format!("fill=\"none\" stroke=\"{LIMIT_COLOR}\" stroke-width=\"2\"");
    let circle = |s: &mut String| {
        let (c, r) = (ls.circle_center, ls.circle_radius);
        let rr = px(r * v.scale);
        let (left, right, y) = (px(v.x(c - r)), px(v.x(c + r)), px(v.y(0.0)));
        let _ = writeln!(
            s,
            "<path d=\"M {left} {y} A {rr} {rr} 0 1 0 {right} {y} A {rr} {rr} 0 1 0 {left} {y} Z\" {stroke}/>"
        );
    };
    let segment = |s: &mut String, (lo, hi): (f64, f64)| {
        let y = px(v.y(0.0));
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" {stroke}/>",
            px(v.x(lo)),
            px(v.x(hi))
        );
    };
    match ls.kind {
        LimitKind::Circle => circle(s),
        LimitKind::Interval => segment(s, ls.interval.expect("interval kind")),
        LimitKind::Lollipop => {
            circle(s);
            segment(s, ls.interval.expect("lollipop kind"));
        }
        LimitKind::Arc => {
            let arc = ls.arc.expect("arc kind");
            let mut d = String::new();
            for k in 0..=ARC_SAMPLES {
                let t = arc.through_angle - arc.half_span
                    + 2.0 * arc.half_span * k as f64 / ARC_SAMPLES as f64;
                let p = Complex64::from_polar(ls.circle_radius, t.rem_euclid(2.0 * PI))
                    + ls.circle_center;
                let _ = write!(
                    d,
                    "{}{} {}",
                    if k == 0 { "M " } else { " L " },
                    px(v.x(p.re)),
                    px(v.y(p.im))
                );
            }
            let _ = writeln!(s, "<path d=\"{d}\" {stroke}/>");
        }
    }
}

fn cross(s: &mut String, x: f64, y: f64) {
    let r = 7.0;
    let _ = writeln!(
        s,
        "<path d=\"M {} {} L {} {} M {} {} L {} {}\" stroke=\"{ISOLATED_COLOR}\" stroke-width=\"2.5\"/>",
        px(x - r),
        px(y - r),
        px(x + r),
        px(y + r),
        px(x - r),
        px(y + r),
        px(x + r),
        px(y - r)
    );
}

fn legend(s: &mut String, n: usize) {
    let x = SIZE - MARGIN - 170.0;
    let y = MARGIN + 20.0;
    let _ = writeln!(
        s,
        "<g><rect x=\"{}\" y=\"{}\" width=\"165\" height=\"66\" fill=\"#ffffff\" fill-opacity=\"0.85\" stroke=\"#cccccc\"/>",
        x - 5.0,
        y - 15.0
    );
    let _ = writeln!(
        s,
        "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{ROOT_COLOR}\"/>",
        x + 8.0,
        y - 4.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{y}\">zeros of W_{n}</text>",
        x + 22.0
    );
    let y2 = y + 20.0;
    let _ = writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{LIMIT_COLOR}\" stroke-width=\"2\"/>",
        x,
        y2 - 4.0,
        x + 16.0,
        y2 - 4.0
    );
    let _ = writeln!(s, "<text x=\"{}\" y=\"{y2}\">limit set</text>", x + 22.0);
    let y3 = y + 40.0;
    cross(s, x + 8.0, y3 - 4.0);
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{y3}\">isolated limit</text></g>",
        x + 22.0
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use reczeros::classify;

    fn figure_for(p: [f64; 4], roots: &[Complex64]) -> String {
        let params = RecurrenceParams::new(p[0], p[1], p[2], p[3]).unwrap();
        let limit = classify(&params).unwrap();
        render(&Figure {
            params: &params,
            n: roots.len(),
            roots,
            limit: &limit,
        })
    }

    #[test]
    fn header_and_size_are_fixed() {
        let svg = figure_for([1.0, 2.0, -2.0, -1.0], &[Complex64::new(0.5, 0.25)]);
        assert!(svg.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\""));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains(">Re z<") && svg.contains(">Im z<"));
    }

    #[test]
    fn lollipop_draws_circle_and_segment() {
        let svg = figure_for([1.0, 2.0, -2.0, -1.0], &[]);
        assert_eq!(svg.matches(" A ").count(), 2);
        assert!(svg.contains("<line x1") && svg.contains("limit set: lollipop"));
    }

    #[test]
    fn isolated_limits_get_crosses() {
        // (0.5, 1, 1, 1) has one isolated limit; the legend adds one more cross.
        let svg = figure_for([0.5, 1.0, 1.0, 1.0], &[]);
        assert_eq!(svg.matches(ISOLATED_COLOR).count(), 2);
    }

    #[test]
    fn window_contains_every_root() {
        let params = RecurrenceParams::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let limit = classify(&params).unwrap();
        let roots = [Complex64::new(5.0, -3.0), Complex64::new(-4.0, 0.0)];
        let v = View::fit(&limit, &roots);
        for z in roots {
            for p in [v.x(z.re), v.y(z.im)] {
                assert!((MARGIN..=SIZE - MARGIN).contains(&p), "{p}");
            }
        }
    }

    #[test]
    fn arc_path_is_sampled() {
        let svg = figure_for([1.0, 0.0, 1.0, 2.0], &[]);
        assert_eq!(svg.matches(" L ").count(), ARC_SAMPLES + 2);
    }
}
