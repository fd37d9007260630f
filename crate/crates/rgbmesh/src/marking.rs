//! Marking strategies for the experiments: circle-curve intersection and
//! point location.

use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Circle {
    pub fn new(center: [f64; 2], radius: f64) -> Self {
        assert!(radius > 0.0, "circle radius must be positive");
        Self { center, radius }
    }
}

/// Elements whose closed triangle is crossed by the circle curve: the
/// distance from the center to the triangle is at most the radius and some
/// vertex lies at distance at least the radius. Elements with area at or
/// below `min_area` are skipped.
pub fn mark_circle(mesh: &Mesh, circle: &Circle, min_area: f64) -> Vec<usize> {
    let mut marked = Vec::new();
    for (e, elem) in mesh.elements().iter().enumerate() {
        if mesh.signed_area(e).unwrap() <= min_area {
            continue;
        }
        let pts = [
            mesh.point(elem[0]),
            mesh.point(elem[1]),
            mesh.point(elem[2]),
        ];
        let max_d = pts
            .iter()
            .map(|&p| dist(p, circle.center))
            .fold(0.0, f64::max);
        let min_d = if point_in_triangle(circle.center, pts) {
            0.0
        } else {
            (0..3)
                .map(|k| point_segment_distance(circle.center, pts[k], pts[(k + 1) % 3]))
                .fold(f64::INFINITY, f64::min)
        };
        if min_d <= circle.radius && circle.radius <= max_d {
            marked.push(e);
        }
    }
    marked
}

/// Every element containing one of the points (closed triangles, so points
/// on shared edges report all incident elements). The union is returned in
/// ascending element order.
pub fn point_to_element(mesh: &Mesh, points: &[[f64; 2]]) -> Vec<usize> {
    let mut hit = vec![false; mesh.n_elements()];
    for &p in points {
        for (e, elem) in mesh.elements().iter().enumerate() {
            if hit[e] {
                continue;
            }
            let pts = [
                mesh.point(elem[0]),
                mesh.point(elem[1]),
                mesh.point(elem[2]),
            ];
            if point_in_triangle(p, pts) {
                hit[e] = true;
            }
        }
    }
    hit.iter()
        .enumerate()
        .filter_map(|(e, &h)| h.then_some(e))
        .collect()
}

/// Orientation-sign containment test; zero counts as inside.
fn point_in_triangle(p: [f64; 2], t: [[f64; 2]; 3]) -> bool {
    (0..3).all(|k| orient(t[k], t[(k + 1) % 3], p) >= 0.0)
}

fn orient(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn tiny_circle_inside_one_element() {
        let mesh = samples::unit_square_two();
        // Strictly inside the lower triangle, radius below its inradius.
        let marked = mark_circle(&mesh, &Circle::new([0.7, 0.25], 0.05), 0.0);
        assert_eq!(marked, vec![1]);
    }

    #[test]
    fn far_away_circle_marks_nothing() {
        let mesh = samples::unit_square_two();
        let marked = mark_circle(&mesh, &Circle::new([50.0, 50.0], 0.1), 0.0);
        assert!(marked.is_empty());
    }

    #[test]
    fn centered_circle_crosses_the_diagonal() {
        let mesh = samples::unit_square_two();
        let marked = mark_circle(&mesh, &Circle::new([0.5, 0.5], 0.25), 0.0);
        assert_eq!(marked, vec![0, 1]);
    }

    #[test]
    fn centroids_locate_their_elements() {
        let mesh = samples::strip_four();
        for e in 0..mesh.n_elements() {
            assert_eq!(point_to_element(&mesh, &[mesh.centroid(e)]), vec![e]);
        }
    }

    #[test]
    fn outside_point_is_nowhere() {
        let mesh = samples::unit_square_two();
        assert!(point_to_element(&mesh, &[[2.0, 2.0]]).is_empty());
    }

    #[test]
    fn diagonal_point_is_in_both() {
        let mesh = samples::unit_square_two();
        assert_eq!(point_to_element(&mesh, &[[0.5, 0.5]]), vec![0, 1]);
    }
}
