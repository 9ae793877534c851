//! 2D scatter export: a JSON description and a static SVG. Higher
//! dimensional data is projected onto its first two criteria.

use std::fmt::Write as _;

use serde::Serialize;

use crate::data::AlternativeSet;
use crate::geometry::PolyhedralCone;

#[derive(Clone, Debug, Serialize)]
pub struct PlotPoint {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub rank: usize,
    pub color: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Wedge {
    /// Where the wedge is drawn: the centroid of the points.
    pub apex: [f64; 2],
    /// Projected rays of `C`, unit length.
    pub rays: Vec<[f64; 2]>,
    /// Projected dual rays (weight directions), unit length.
    pub dual_rays: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Scatter {
    pub axes: [String; 2],
    pub projected: bool,
    pub max_rank: usize,
    pub points: Vec<PlotPoint>,
    pub wedge: Wedge,
}

/// Blue for rank 1 through red for the top rank.
fn rank_color(rank: usize, max: usize) -> String {
    let t = if max <= 1 { 1.0 } else { (rank.saturating_sub(1)) as f64 / (max - 1) as f64 };
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(49.0, 215.0), lerp(104.0, 48.0), lerp(189.0, 39.0))
}

fn unit2(v: &[f64]) -> Option<[f64; 2]> {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    (n > 0.0).then(|| [v[0] / n, v[1] / n])
}

pub fn scatter(x: &AlternativeSet, criteria: &[String], ranks: &[usize], cone: &PolyhedralCone) -> Scatter {
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let points: Vec<PlotPoint> = x
        .iter()
        .zip(ranks)
        .map(|(a, &rank)| {
            let v = a.value.to_f64();
            PlotPoint { id: a.id.clone(), x: v[0], y: v[1], rank, color: rank_color(rank, max_rank) }
        })
        .collect();
    let n = points.len().max(1) as f64;
    let apex = [points.iter().map(|p| p.x).sum::<f64>() / n, points.iter().map(|p| p.y).sum::<f64>() / n];
    let project = |vs: Vec<crate::geometry::Vector>| vs.iter().filter_map(|r| unit2(&r.to_f64())).collect();
    let name = |i: usize| criteria.get(i).cloned().unwrap_or_else(|| format!("c{}", i + 1));
    Scatter {
        axes: [name(0), name(1)],
        projected: x.dim() > 2,
        max_rank,
        points,
        wedge: Wedge { apex, rays: project(cone.rays()), dual_rays: project(cone.normals()) },
    }
}

pub fn svg(s: &Scatter) -> String {
    const SIZE: f64 = 480.0;
    const PAD: f64 = 48.0;
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &s.points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let sx = |v: f64| PAD + (v - x0) / span * (SIZE - 2.0 * PAD);
    let sy = |v: f64| SIZE - PAD - (v - y0) / span * (SIZE - 2.0 * PAD);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="#444"/>"##,
        SIZE - PAD,
        SIZE - PAD
    );
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#, SIZE / 2.0, SIZE - 12.0, esc(&s.axes[0]));
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        SIZE / 2.0,
        SIZE / 2.0,
        esc(&s.axes[1])
    );
    // Wedge of C at the centroid, a quarter of the plot span long.
    let len = span / 4.0;
    let [ax, ay] = s.wedge.apex;
    if s.wedge.rays.len() == 2 {
        let [r1, r2] = [s.wedge.rays[0], s.wedge.rays[1]];
        let _ = writeln!(
            out,
            r##"<path d="M{:.2} {:.2} L{:.2} {:.2} L{:.2} {:.2} Z" fill="#9ab" fill-opacity="0.3" stroke="none"/>"##,
            sx(ax),
            sy(ay),
            sx(ax + len * r1[0]),
            sy(ay + len * r1[1]),
            sx(ax + len * r2[0]),
            sy(ay + len * r2[1])
        );
    }
    for r in &s.wedge.rays {
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#567"/>"##,
            sx(ax),
            sy(ay),
            sx(ax + len * r[0]),
            sy(ay + len * r[1])
        );
    }
    for p in &s.points {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="5" fill="{}" stroke="#222"><title>{} rank {}</title></circle>"##,
            sx(p.x),
            sy(p.y),
            p.color,
            esc(&p.id),
            p.rank
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#, sx(p.x) + 7.0, sy(p.y) - 7.0, esc(&p.id));
    }
    out.push_str("</svg>\n");
    out
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colors_span_blue_to_red() {
        assert_eq!(rank_color(1, 5), "#3168bd");
        assert_eq!(rank_color(5, 5), "#d73027");
    }

    #[test]
    fn svg_has_every_point() {
        let x = AlternativeSet::from_i64(&[&[0, 0], &[1, 1], &[2, 0]]).unwrap();
        let c = PolyhedralCone::nonnegative_orthant(2);
        let s = scatter(&x, &[], &[1, 3, 1], &c);
        assert_eq!(s.axes, ["c1".to_string(), "c2".to_string()]);
        let text = svg(&s);
        assert_eq!(text.matches("<circle").count(), 3);
        assert!(text.starts_with("<svg"));
    }
}
