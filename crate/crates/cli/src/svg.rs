//! Static SVG raster of a phase grid.

use std::fmt::Write;

use twotasep_core::Phase;

const PLOT: f64 = 400.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 40.0;

fn colour(label: &str) -> &'static str {
    match label {
        "LL" => "#4477aa",
        "RL" => "#ee6677",
        "RR" => "#228833",
        "BL" => "#ccbb44",
        "RB" => "#66ccee",
        "BB" => "#aa3377",
        _ => "#dddddd",
    }
}

pub struct Axis<'a> {
    pub label: &'a str,
    pub min: f64,
    pub max: f64,
}

/// `cell(i, j)` gives the label of column `i`, row `j`; row 0 is drawn at
/// the bottom. Equal neighbours in a row are merged into one rectangle.
pub fn phase_raster(
    title: &str,
    x: Axis,
    y: Axis,
    nx: usize,
    ny: usize,
    cell: impl Fn(usize, usize) -> Option<String>,
) -> String {
    let (w, h) = (PLOT / nx as f64, PLOT / ny as f64);
    let mut s = String::new();
    let width = LEFT + PLOT + 140.0;
    let height = TOP + PLOT + 60.0;
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, LEFT + PLOT / 2.0, escape(title));
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for j in 0..ny {
        let mut i = 0;
        while i < nx {
            let label = cell(i, j);
            let mut run = 1;
            while i + run < nx && cell(i + run, j) == label {
                run += 1;
            }
            if let Some(l) = &label {
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                    LEFT + i as f64 * w,
                    TOP + PLOT - (j + 1) as f64 * h,
                    run as f64 * w,
                    h,
                    colour(l)
                );
            }
            i += run;
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black"/>"#);

    let base = TOP + PLOT;
    let _ = writeln!(s, r#"<text x="{LEFT}" y="{}" text-anchor="middle">{}</text>"#, base + 16.0, num(x.min));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + PLOT, base + 16.0, num(x.max));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + PLOT / 2.0, base + 36.0, escape(x.label));
    let _ = writeln!(s, r#"<text x="{}" y="{base}" text-anchor="end">{}</text>"#, LEFT - 6.0, num(y.min));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT - 6.0, TOP + 10.0, num(y.max));
    let (yx, yy) = (LEFT - 40.0, TOP + PLOT / 2.0);
    let _ = writeln!(s, r#"<text x="{yx}" y="{yy}" text-anchor="middle" transform="rotate(-90 {yx} {yy})">{}</text>"#, escape(y.label));

    let lx = LEFT + PLOT + 20.0;
    for (k, phase) in Phase::ALLOWED.iter().enumerate() {
        let label = phase.label();
        let ly = TOP + 10.0 + 24.0 * k as f64;
        let _ = writeln!(s, r#"<rect x="{lx}" y="{ly}" width="16" height="16" fill="{}" stroke="black"/>"#, colour(&label));
        let _ = writeln!(s, r#"<text x="{}" y="{}">{label} ({})</text>"#, lx + 24.0, ly + 12.0, phase.signs());
    }
    let _ = writeln!(s, "</svg>");
    s
}

fn num(v: f64) -> String {
    format!("{}", (v * 1000.0).round() / 1000.0)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legend_lists_the_five_phases_and_runs_merge() {
        let svg = phase_raster(
            "t",
            Axis { label: "x", min: 0.0, max: 1.0 },
            Axis { label: "y", min: 0.0, max: 1.0 },
            4,
            1,
            |i, _| Some(if i < 3 { "LL" } else { "RR" }.to_string()),
        );
        for label in ["LL", "RL", "RR", "BL", "RB"] {
            assert!(svg.contains(&format!(">{label} (")), "{label}");
        }
        // one merged run of three plus one single cell, the frame, and the legend
        assert_eq!(svg.matches("<rect").count(), 2 + 1 + 5);
    }
}
