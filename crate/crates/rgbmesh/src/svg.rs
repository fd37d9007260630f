//! Deterministic SVG wireframes with optional overlays for reference edges,
//! red middle elements and newest nodes.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::coarsen::{detect_newest_nodes, detect_red_middles};
use crate::mesh::Mesh;
use crate::topology::build_edge_topology;

#[derive(Debug, Clone, Copy, Default)]
pub struct RenderOptions {
    pub reference_edges: bool,
    pub red_middles: bool,
    pub newest_nodes: bool,
}

pub fn render_svg(mesh: &Mesh, options: &RenderOptions) -> String {
    let coords = mesh.coordinates();
    let (min, max) = bounding_box(coords);
    let span = [(max[0] - min[0]).max(1e-9), (max[1] - min[1]).max(1e-9)];
    let scale = 800.0 / span[0].max(span[1]);
    let pad = 20.0;
    let width = span[0] * scale + 2.0 * pad;
    let height = span[1] * scale + 2.0 * pad;
    // y grows downwards in SVG
    let tx = |p: [f64; 2]| {
        (
            pad + (p[0] - min[0]) * scale,
            pad + (max[1] - p[1]) * scale,
        )
    };

    let middles: BTreeSet<usize> = if options.red_middles {
        let topo = build_edge_topology(mesh).expect("render topology");
        detect_red_middles(mesh, &topo).into_iter().collect()
    } else {
        BTreeSet::new()
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );

    for (e, elem) in mesh.elements().iter().enumerate() {
        let pts: Vec<(f64, f64)> = elem.iter().map(|&v| tx(coords[v])).collect();
        let fill = if middles.contains(&e) {
            "#f4a9a0"
        } else {
            "none"
        };
        let _ = writeln!(
            out,
            "  <polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
            pts[0].0, pts[0].1, pts[1].0, pts[1].1, pts[2].0, pts[2].1, fill
        );
    }

    if options.reference_edges {
        // Tick marks on the interior side of each reference edge.
        for elem in mesh.elements() {
            let a = coords[elem[0]];
            let b = coords[elem[1]];
            let c = coords[elem[2]];
            for t in [0.35, 0.5, 0.65] {
                let on = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                let inward = [
                    on[0] + 0.08 * (c[0] - on[0]),
                    on[1] + 0.08 * (c[1] - on[1]),
                ];
                let (x1, y1) = tx(on);
                let (x2, y2) = tx(inward);
                let _ = writeln!(
                    out,
                    "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#444\" stroke-width=\"0.8\"/>"
                );
            }
        }
    }

    if options.newest_nodes {
        let (newest, _) = detect_newest_nodes(mesh).expect("render newest nodes");
        for &v in &newest {
            let (x, y) = tx(coords[v]);
            let _ = writeln!(
                out,
                "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"6\" height=\"6\" fill=\"white\" stroke=\"black\"/>",
                x - 3.0,
                y - 3.0
            );
        }
    }

    out.push_str("</svg>\n");
    out
}

fn bounding_box(coords: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for p in coords {
        for k in 0..2 {
            min[k] = min[k].min(p[k]);
            max[k] = max[k].max(p[k]);
        }
    }
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refine::uniform_refine;
    use crate::samples;

    #[test]
    fn plain_wireframe_has_one_polygon_per_element() {
        let mesh = samples::unit_square_two();
        let svg = render_svg(&mesh, &RenderOptions::default());
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert!(!svg.contains("<rect"));
    }

    #[test]
    fn middle_overlay_fills_the_two_middles() {
        let fine = uniform_refine(&samples::unit_square_two(), 1).unwrap();
        let svg = render_svg(
            &fine,
            &RenderOptions {
                red_middles: true,
                ..Default::default()
            },
        );
        assert_eq!(svg.matches("#f4a9a0").count(), 2);
    }

    #[test]
    fn output_is_deterministic() {
        let mesh = samples::strip_four();
        let opts = RenderOptions {
            reference_edges: true,
            red_middles: true,
            newest_nodes: true,
        };
        assert_eq!(render_svg(&mesh, &opts), render_svg(&mesh, &opts));
    }
}
