//! Minimal SVG charts.

use std::fmt::Write as _;

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
    /// Draw as a staircase instead of straight segments.
    pub steps: bool,
}

/// A 600×400 line chart over `[0, x_max] × [0, y_max]`.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, x_max: f64, y_max: f64, series: &[Series]) -> String {
    let (w, h, left, right, top, bottom) = (600.0, 400.0, 60.0, 20.0, 40.0, 50.0);
    let px = |x: f64| left + (w - left - right) * x / x_max;
    let py = |y: f64| h - bottom - (h - top - bottom) * y / y_max;
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 600 400" width="600" height="400" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="600" height="400" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="300" y="22" text-anchor="middle" font-size="14">{title}</text>"#).unwrap();
    writeln!(s, r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>"#, px(0.0), py(0.0), px(x_max)).unwrap();
    writeln!(s, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>"#, px(0.0), py(0.0), py(y_max)).unwrap();
    for k in 0..=4 {
        let (x, y) = (x_max * k as f64 / 4.0, y_max * k as f64 / 4.0);
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x:.2}</text>"#, px(x), py(0.0) + 18.0).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.2}</text>"#, px(0.0) - 6.0, py(y) + 4.0).unwrap();
    }
    writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x_label}</text>"#, px(x_max / 2.0), h - 10.0).unwrap();
    writeln!(s, r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{y_label}</text>"#, py(y_max / 2.0), py(y_max / 2.0)).unwrap();
    for (k, ser) in series.iter().enumerate() {
        let mut path = String::new();
        for (i, &(x, y)) in ser.points.iter().enumerate() {
            if i == 0 {
                write!(path, "M{:.2},{:.2}", px(x), py(y)).unwrap();
            } else {
                if ser.steps {
                    write!(path, " H{:.2}", px(x)).unwrap();
                }
                write!(path, " L{:.2},{:.2}", px(x), py(y)).unwrap();
            }
        }
        writeln!(s, r#"<path d="{path}" fill="none" stroke="{}" stroke-width="2"/>"#, ser.color).unwrap();
        let ly = top + 16.0 * k as f64;
        writeln!(s, r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"/>"#, w - 170.0, w - 150.0, ser.color).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, w - 145.0, ly + 4.0, ser.label).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Scatter of labelled point groups in a 600×600 box.
pub struct Cloud<'a> {
    pub points: Vec<[f64; 2]>,
    pub shape: Shape,
    pub color: &'a str,
    pub size: f64,
}

#[derive(Clone, Copy)]
pub enum Shape {
    Dot,
    Diamond,
    Square,
    Cross,
}

pub fn scatter(lo: [f64; 2], hi: [f64; 2], clouds: &[Cloud]) -> String {
    let scale = 540.0 / (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let at = |p: &[f64; 2]| (30.0 + (p[0] - lo[0]) * scale, 570.0 - (p[1] - lo[1]) * scale);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 600 600" width="600" height="600">"#).unwrap();
    writeln!(s, r#"<rect width="600" height="600" fill="white"/>"#).unwrap();
    for c in clouds {
        for p in &c.points {
            let (x, y) = at(p);
            let r = c.size;
            match c.shape {
                Shape::Dot => writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{}" fill-opacity="0.6"/>"#, c.color),
                Shape::Diamond => writeln!(
                    s,
                    r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{}"/>"#,
                    x,
                    y - r,
                    x + r,
                    y,
                    x,
                    y + r,
                    x - r,
                    y,
                    c.color
                ),
                Shape::Square => writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="{}" height="{}" fill="{}"/>"#, x - r, y - r, 2.0 * r, 2.0 * r, c.color),
                Shape::Cross => writeln!(
                    s,
                    r#"<path d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="{}" stroke-width="2"/>"#,
                    x - r,
                    y - r,
                    x + r,
                    y + r,
                    x - r,
                    y + r,
                    x + r,
                    y - r,
                    c.color
                ),
            }
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
