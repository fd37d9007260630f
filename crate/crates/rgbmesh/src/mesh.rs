//! Minimal triangulation representation: node coordinates plus element
//! connectivity. The reference edge of an element is implicit as the edge
//! between its first two stored vertices; elements are counterclockwise.
//!
//! A [`Mesh`] is an immutable value after construction. Refinement and
//! coarsening return new meshes.

use std::collections::HashMap;

use crate::error::{MeshError, Result};

/// Tolerance for coordinate equality and duplicate-node detection.
pub const COORD_TOL: f64 = 1e-12;

/// A named list of boundary edges, stored as node-index pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryList {
    pub name: String,
    pub edges: Vec<[usize; 2]>,
}

/// Conforming 2D triangulation with implicit reference edges.
///
/// Nodes with index `< n_initial` belong to the initial triangulation and are
/// never removed by coarsening. All node indices are 0-based internally.
#[derive(Debug, Clone)]
pub struct Mesh {
    coordinates: Vec<[f64; 2]>,
    elements: Vec<[usize; 3]>,
    n_initial: usize,
    boundaries: Vec<BoundaryList>,
}

impl Mesh {
    /// Validating constructor. Checks index ranges, counterclockwise
    /// orientation (positive signed area), duplicate nodes and boundary
    /// edges referencing actual mesh boundary.
    pub fn new(
        coordinates: Vec<[f64; 2]>,
        elements: Vec<[usize; 3]>,
        n_initial: usize,
        boundaries: Vec<BoundaryList>,
    ) -> Result<Self> {
        let n = coordinates.len();
        if n_initial > n {
            return Err(MeshError::BadIndex {
                context: "n_initial",
                index: n_initial,
                len: n,
            });
        }
        for (e, elem) in elements.iter().enumerate() {
            for &v in elem {
                if v >= n {
                    return Err(MeshError::BadIndex {
                        context: "element vertex",
                        index: v,
                        len: n,
                    });
                }
            }
            if elem[0] == elem[1] || elem[1] == elem[2] || elem[2] == elem[0] {
                return Err(MeshError::DegenerateElement {
                    element: e,
                    area: 0.0,
                });
            }
            let area = signed_area_of(&coordinates, elem);
            if area <= 0.0 {
                return Err(MeshError::DegenerateElement { element: e, area });
            }
        }
        check_duplicates(&coordinates)?;

        if !boundaries.is_empty() {
            // Count edge incidences once; boundary edges must belong to
            // exactly one element.
            let mut counts: HashMap<[usize; 2], u8> = HashMap::new();
            for elem in &elements {
                for k in 0..3 {
                    let key = canonical(elem[k], elem[(k + 1) % 3]);
                    *counts.entry(key).or_insert(0) += 1;
                }
            }
            for list in &boundaries {
                for &[a, b] in &list.edges {
                    for v in [a, b] {
                        if v >= n {
                            return Err(MeshError::BadIndex {
                                context: "boundary vertex",
                                index: v,
                                len: n,
                            });
                        }
                    }
                    if counts.get(&canonical(a, b)).copied() != Some(1) {
                        return Err(MeshError::NotRefinedMesh(format!(
                            "boundary edge ({a}, {b}) is not a mesh boundary edge"
                        )));
                    }
                }
            }
        }

        Ok(Self {
            coordinates,
            elements,
            n_initial,
            boundaries,
        })
    }

    pub fn coordinates(&self) -> &[[f64; 2]] {
        &self.coordinates
    }

    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn n_initial(&self) -> usize {
        self.n_initial
    }

    pub fn boundaries(&self) -> &[BoundaryList] {
        &self.boundaries
    }

    pub fn n_nodes(&self) -> usize {
        self.coordinates.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn point(&self, node: usize) -> [f64; 2] {
        self.coordinates[node]
    }

    /// Signed area of an element; positive for counterclockwise triangles.
    pub fn signed_area(&self, element: usize) -> Result<f64> {
        let elem = self.elements.get(element).ok_or(MeshError::BadIndex {
            context: "element id",
            index: element,
            len: self.elements.len(),
        })?;
        Ok(signed_area_of(&self.coordinates, elem))
    }

    pub fn centroid(&self, element: usize) -> [f64; 2] {
        let [a, b, c] = self.elements[element];
        let pa = self.coordinates[a];
        let pb = self.coordinates[b];
        let pc = self.coordinates[c];
        [
            (pa[0] + pb[0] + pc[0]) / 3.0,
            (pa[1] + pb[1] + pc[1]) / 3.0,
        ]
    }

    /// Interior angles of an element, in element-local vertex order.
    pub fn angles(&self, element: usize) -> [f64; 3] {
        let [a, b, c] = self.elements[element];
        let p = [
            self.coordinates[a],
            self.coordinates[b],
            self.coordinates[c],
        ];
        let mut out = [0.0; 3];
        for k in 0..3 {
            let u = sub(p[(k + 1) % 3], p[k]);
            let v = sub(p[(k + 2) % 3], p[k]);
            out[k] = (dot(u, v) / (norm(u) * norm(v))).clamp(-1.0, 1.0).acos();
        }
        out
    }
}

/// Ordered equality: coordinates equal within [`COORD_TOL`] componentwise and
/// element rows identical. Storage order is semantically meaningful.
pub fn meshes_equal(a: &Mesh, b: &Mesh) -> bool {
    if a.coordinates.len() != b.coordinates.len() || a.elements != b.elements {
        return false;
    }
    a.coordinates
        .iter()
        .zip(&b.coordinates)
        .all(|(p, q)| (p[0] - q[0]).abs() <= COORD_TOL && (p[1] - q[1]).abs() <= COORD_TOL)
}

pub(crate) fn signed_area_of(coordinates: &[[f64; 2]], elem: &[usize; 3]) -> f64 {
    let a = coordinates[elem[0]];
    let b = coordinates[elem[1]];
    let c = coordinates[elem[2]];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Unordered edge key, smaller index first.
pub(crate) fn canonical(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

pub(crate) fn midpoint(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    dot(a, a).sqrt()
}

/// Duplicate detection on a 1e-12 grid: points falling into the same or an
/// adjacent cell are compared directly.
fn check_duplicates(coordinates: &[[f64; 2]]) -> Result<()> {
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::with_capacity(coordinates.len());
    let cell = |x: f64| (x / COORD_TOL).round() as i64;
    for (i, p) in coordinates.iter().enumerate() {
        let (cx, cy) = (cell(p[0]), cell(p[1]));
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in bucket {
                        let q = coordinates[j];
                        if (p[0] - q[0]).abs() <= COORD_TOL && (p[1] - q[1]).abs() <= COORD_TOL {
                            return Err(MeshError::DuplicateNode {
                                first: j,
                                second: i,
                            });
                        }
                    }
                }
            }
        }
        grid.entry((cx, cy)).or_default().push(i);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn unit_square_mesh_is_valid() {
        let mesh = samples::unit_square_two();
        assert_eq!(mesh.n_nodes(), 4);
        assert_eq!(mesh.n_elements(), 2);
        // Both reference edges lie on the diagonal between (0,0) and (1,1).
        for elem in mesh.elements() {
            let mut refe = [elem[0], elem[1]];
            refe.sort_unstable();
            assert_eq!(refe, [0, 2]);
        }
    }

    #[test]
    fn single_ccw_triangle_is_valid() {
        let mesh = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            3,
            vec![],
        )
        .unwrap();
        assert_eq!(mesh.n_elements(), 1);
    }

    #[test]
    fn repeated_vertex_is_rejected() {
        let err = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 1]],
            3,
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::DegenerateElement { .. }));
    }

    #[test]
    fn clockwise_triangle_is_rejected() {
        let err = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 2, 1]],
            3,
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::DegenerateElement { .. }));
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let err = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 8, 1]],
            3,
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::BadIndex { .. }));
    }

    #[test]
    fn duplicate_coordinates_are_rejected() {
        let err = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1e-13, 0.0]],
            vec![[0, 1, 2]],
            3,
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::DuplicateNode { .. }));
    }

    #[test]
    fn signed_areas() {
        let mesh = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
            vec![[0, 1, 2]],
            4,
            vec![],
        )
        .unwrap();
        assert!((mesh.signed_area(0).unwrap() - 0.5).abs() < 1e-15);
        // Orientation flip negates the area.
        assert!(
            (signed_area_of(mesh.coordinates(), &[0, 2, 1]) + 0.5).abs() < 1e-15
        );
        // Diagonal triangle of the unit square.
        assert!(
            (signed_area_of(mesh.coordinates(), &[0, 3, 2]) - 0.5).abs() < 1e-15
        );
        assert!(mesh.signed_area(7).is_err());
    }

    #[test]
    fn equality_is_order_sensitive() {
        let mesh = samples::unit_square_two();
        assert!(meshes_equal(&mesh, &mesh));
        let mut rows = mesh.elements().to_vec();
        rows.swap(0, 1);
        let swapped = Mesh::new(mesh.coordinates().to_vec(), rows, 4, vec![]).unwrap();
        assert!(!meshes_equal(&mesh, &swapped));
    }

    #[test]
    fn boundary_edges_must_lie_on_the_boundary() {
        let coords = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let elems = vec![[2, 0, 1], [0, 2, 3]];
        let ok = BoundaryList {
            name: "dirichlet".into(),
            edges: vec![[0, 1], [1, 2]],
        };
        assert!(Mesh::new(coords.clone(), elems.clone(), 4, vec![ok]).is_ok());
        let bad = BoundaryList {
            name: "dirichlet".into(),
            edges: vec![[0, 2]], // the shared diagonal
        };
        assert!(Mesh::new(coords, elems, 4, vec![bad]).is_err());
    }
}
