//! Minimal SVG emitter: polylines for attractor pieces, circles for zeros,
//! viewBox fitted to the data with a 5% margin. Pure string building, fixed
//! formatting, deterministic output.

use appell_core::attractor::AttractorGeometry;
use num_complex::Complex64;

const CANVAS: f64 = 840.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

struct Mapper {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Mapper {
    fn fit(points: impl Iterator<Item = Complex64>) -> Mapper {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for p in points {
            xmin = xmin.min(p.re);
            xmax = xmax.max(p.re);
            ymin = ymin.min(p.im);
            ymax = ymax.max(p.im);
        }
        if !xmin.is_finite() {
            (xmin, xmax, ymin, ymax) = (-1.0, 1.0, -1.0, 1.0);
        }
        let w = (xmax - xmin).max(1e-9);
        let h = (ymax - ymin).max(1e-9);
        let span = w.max(h) * 1.10; // 5% margin each side
        let cx = 0.5 * (xmin + xmax);
        let cy = 0.5 * (ymin + ymax);
        Mapper {
            x0: cx - span / 2.0,
            y0: cy + span / 2.0,
            scale: CANVAS / span,
        }
    }

    fn map(&self, p: Complex64) -> (f64, f64) {
        ((p.re - self.x0) * self.scale, (self.y0 - p.im) * self.scale)
    }
}

fn polyline(m: &Mapper, pts: &[Complex64], color: &str) -> String {
    let mut s =
        format!("<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"");
    for p in pts {
        let (x, y) = m.map(*p);
        s.push_str(&format!("{x:.2},{y:.2} "));
    }
    s.push_str("\"/>\n");
    s
}

fn circles(m: &Mapper, pts: &[Complex64], color: &str, r: f64) -> String {
    let mut s = String::new();
    for p in pts {
        let (x, y) = m.map(*p);
        s.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r}\" fill=\"{color}\" fill-opacity=\"0.65\"/>\n"
        ));
    }
    s
}

fn document(body: String) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {c} {c}\" width=\"{c}\" height=\"{c}\">\n\
         <rect width=\"{c}\" height=\"{c}\" fill=\"white\"/>\n{body}</svg>\n",
        c = CANVAS
    )
}

pub fn scatter_svg(zeros: &[Complex64]) -> String {
    let m = Mapper::fit(zeros.iter().copied());
    document(circles(&m, zeros, "#1a1a66", 2.0))
}

pub fn attractor_svg(geo: &AttractorGeometry, zeros: Option<&[Complex64]>) -> String {
    let all: Vec<Complex64> = geo
        .all_points()
        .iter()
        .map(|(p, _)| *p)
        .chain(zeros.into_iter().flatten().copied())
        .collect();
    let m = Mapper::fit(all.iter().copied());
    let mut body = String::new();
    if let Some(zs) = zeros {
        body.push_str(&circles(&m, zs, "#333333", 1.8));
    }
    for arc in &geo.arcs {
        body.push_str(&polyline(
            &m,
            &arc.points,
            PALETTE[arc.owner_idx % PALETTE.len()],
        ));
    }
    for seg in &geo.segments {
        body.push_str(&polyline(
            &m,
            &seg.points,
            PALETTE[seg.owner_idx.0 % PALETTE.len()],
        ));
    }
    document(body)
}
