//! CSV, JSON and SVG emission. Every file is written to a temporary file in
//! the target directory and renamed into place.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use szego::{ArcSet, ZeroSet};

use crate::CliError;

pub const ZERO_HEADER: [&str; 5] = ["index", "theta", "re", "im", "multiplicity"];

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

pub fn zeros_csv(zeros: &ZeroSet<f64>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ZERO_HEADER)?;
    for (i, (a, m)) in zeros.entries().iter().enumerate() {
        let t = a.radians();
        w.write_record([
            i.to_string(),
            t.to_string(),
            t.cos().to_string(),
            t.sin().to_string(),
            m.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

/// A layer of the circle figure.
pub enum Layer<'a> {
    Arcs(&'a ArcSet<f64>, &'a str),
    Zeros(&'a ZeroSet<f64>, &'a str),
}

const SIZE: f64 = 800.0;
const CENTER: f64 = 400.0;
const RADIUS: f64 = 300.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn at(theta: f64) -> (f64, f64) {
    (CENTER + RADIUS * theta.cos(), CENTER - RADIUS * theta.sin())
}

/// Unit circle with arcs as thick strokes and zeros as dots, 800×800.
pub fn circle_svg(layers: &[Layer<'_>]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<circle cx="{CENTER}" cy="{CENTER}" r="{RADIUS}" fill="none" stroke="#999999" stroke-width="1"/>"##
    );
    for (k, layer) in layers.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let label = match layer {
            Layer::Arcs(set, label) => {
                for arc in set.arcs() {
                    if arc.is_full() || arc.len() >= std::f64::consts::TAU - 1e-12 {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{CENTER}" cy="{CENTER}" r="{RADIUS}" fill="none" stroke="{color}" stroke-width="8"/>"#
                        );
                        continue;
                    }
                    let a = arc.start().radians();
                    let b = arc.end_lifted();
                    let (x0, y0) = at(a);
                    let (x1, y1) = at(b);
                    if arc.len() == 0.0 {
                        let _ = writeln!(s, r#"<circle cx="{x0:.3}" cy="{y0:.3}" r="4" fill="{color}"/>"#);
                        continue;
                    }
                    let large = u8::from(arc.len() > std::f64::consts::PI);
                    let _ = writeln!(
                        s,
                        r#"<path d="M {x0:.3} {y0:.3} A {RADIUS} {RADIUS} 0 {large} 0 {x1:.3} {y1:.3}" fill="none" stroke="{color}" stroke-width="8"/>"#
                    );
                }
                label
            }
            Layer::Zeros(z, label) => {
                for t in z.angles() {
                    let (x, y) = at(t);
                    let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{color}"/>"#);
                }
                label
            }
        };
        let y = 30 + 22 * k;
        let _ = writeln!(s, r#"<rect x="20" y="{}" width="14" height="14" fill="{color}"/>"#, y - 12);
        let _ = writeln!(
            s,
            r#"<text x="42" y="{y}" font-family="sans-serif" font-size="16">{}</text>"#,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
