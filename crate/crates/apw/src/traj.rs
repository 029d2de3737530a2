//! Trajectory CSV (`t,x1,...,xm,fiber,s`) and its SVG projection onto
//! `(x1, x2)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use apw_core::collardyn::{Trajectory, TrajectorySample};

pub fn header(m: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((1..=m).map(|i| format!("x{i}")));
    h.push("fiber".into());
    h.push("s".into());
    h
}

pub fn write_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(header(traj.m))?;
    for p in &traj.samples {
        let mut row = vec![p.t.to_string()];
        row.extend(p.base.iter().map(f64::to_string));
        row.push(p.fiber.to_string());
        row.push(p.s.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Trajectory> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let hdr: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if hdr.len() < 4 {
        bail!("schema mismatch: header must be t,x1,...,xm,fiber,s (got {:?})", hdr.join(","));
    }
    let m = hdr.len() - 3;
    if hdr != header(m) {
        bail!("schema mismatch: header must be {} (got {})", header(m).join(","), hdr.join(","));
    }
    let mut samples = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("schema mismatch: non-numeric value in row {}", i + 2))?;
        if vals.len() != m + 3 {
            bail!("schema mismatch: row {} has {} fields, expected {}", i + 2, vals.len(), m + 3);
        }
        samples.push(TrajectorySample { t: vals[0], base: vals[1..=m].to_vec(), fiber: vals[m + 1], s: vals[m + 2] });
    }
    if samples.is_empty() {
        bail!("empty trajectory: {} has no samples", path.display());
    }
    Ok(Trajectory { m, samples })
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

fn px(x: f64) -> f64 {
    MARGIN + x * SIZE
}

fn py(y: f64) -> f64 {
    MARGIN + (1.0 - y) * SIZE
}

/// Distance on `R/Z`.
fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Whether the trajectory ends within `tau` of its start in the
/// `(x1, x2, fiber)` quotient coordinates, after having left the start.
pub fn closes(traj: &Trajectory, tau: f64) -> bool {
    let (first, last) = (&traj.samples[0], traj.samples.last().expect("nonempty"));
    if traj.samples.len() < 3 {
        return false;
    }
    let dist = |p: &TrajectorySample| {
        let mut d2 = circ(p.fiber, first.fiber).powi(2);
        for (a, b) in p.base.iter().zip(&first.base) {
            d2 += circ(*a, *b).powi(2);
        }
        d2.sqrt()
    };
    let left = traj.samples.iter().any(|p| dist(p) > 2.0 * tau);
    left && dist(last) <= tau
}

/// SVG of the `(x1, x2)` projection in the unit square: the polyline is
/// broken where a coordinate wraps, and each wrap is marked on the square's
/// edge. A closed trajectory gets a closing segment and a start marker.
pub fn render_svg(traj: &Trajectory, tau: f64) -> Result<String> {
    if traj.m < 2 {
        bail!("schema mismatch: plotting needs at least two base coordinates");
    }
    let pts: Vec<(f64, f64)> =
        traj.samples.iter().map(|p| (p.base[0].rem_euclid(1.0), p.base[1].rem_euclid(1.0))).collect();
    let mut pieces: Vec<Vec<(f64, f64)>> = vec![vec![pts[0]]];
    let mut marks: Vec<(f64, f64)> = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        if dx.abs() > 0.5 || dy.abs() > 0.5 {
            if dx.abs() > 0.5 {
                marks.push((if dx < 0.0 { 1.0 } else { 0.0 }, a.1));
                marks.push((if dx < 0.0 { 0.0 } else { 1.0 }, b.1));
            }
            if dy.abs() > 0.5 {
                marks.push((a.0, if dy < 0.0 { 1.0 } else { 0.0 }));
                marks.push((b.0, if dy < 0.0 { 0.0 } else { 1.0 }));
            }
            pieces.push(vec![b]);
        } else {
            pieces.last_mut().expect("nonempty").push(b);
        }
    }
    let closed = closes(traj, tau);
    let total = 2.0 * MARGIN + SIZE;
    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#)?;
    writeln!(svg, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#)?;
    for piece in pieces.iter().filter(|p| p.len() > 1) {
        let coords: Vec<String> = piece.iter().map(|(x, y)| format!("{:.3},{:.3}", px(*x), py(*y))).collect();
        writeln!(svg, r#"<polyline class="trajectory" fill="none" stroke="steelblue" stroke-width="1" points="{}"/>"#, coords.join(" "))?;
    }
    for (x, y) in &marks {
        writeln!(svg, r#"<circle class="wrap" cx="{:.3}" cy="{:.3}" r="2" fill="orange"/>"#, px(*x), py(*y))?;
    }
    if closed {
        let (s, e) = (pts[0], *pts.last().expect("nonempty"));
        writeln!(
            svg,
            r#"<line class="closure" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="crimson" stroke-width="1.5"/>"#,
            px(e.0),
            py(e.1),
            px(s.0),
            py(s.1)
        )?;
        writeln!(svg, r#"<circle class="start" cx="{:.3}" cy="{:.3}" r="4" fill="none" stroke="crimson"/>"#, px(s.0), py(s.1))?;
        let period = traj.samples.last().expect("nonempty").t;
        writeln!(svg, r#"<text class="closure-label" x="{MARGIN}" y="14" font-size="12">closed, period ≈ {period:.6}</text>"#)?;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn plot(csv_path: &Path, out: &Path, tau: f64) -> Result<bool> {
    let traj = read_csv(csv_path)?;
    let svg = render_svg(&traj, tau)?;
    fs::write(out, svg).with_context(|| format!("cannot write {}", out.display()))?;
    Ok(closes(&traj, tau))
}
