//! Small built-in meshes used by the demos and tests.

use crate::mesh::{BoundaryList, Mesh};

/// Unit square split along the diagonal; both reference edges lie on the
/// diagonal, so the mesh is weak BDD.
pub fn unit_square_two() -> Mesh {
    Mesh::new(
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        vec![[0, 2, 3], [2, 0, 1]],
        4,
        vec![],
    )
    .expect("static mesh")
}

pub fn unit_square_two_with_boundary() -> Mesh {
    Mesh::new(
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        vec![[0, 2, 3], [2, 0, 1]],
        4,
        vec![BoundaryList {
            name: "outer".into(),
            edges: vec![[0, 1], [1, 2], [2, 3], [3, 0]],
        }],
    )
    .expect("static mesh")
}

/// Two unit squares side by side: 4 elements, 6 nodes, weak BDD. The default
/// domain for the circle experiments.
pub fn strip_four() -> Mesh {
    Mesh::new(
        vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [2.0, 0.0],
            [0.0, 1.0],
            [1.0, 1.0],
            [2.0, 1.0],
        ],
        vec![[4, 0, 1], [0, 4, 3], [5, 1, 2], [1, 5, 4]],
        6,
        vec![],
    )
    .expect("static mesh")
}

fn fan_coordinates() -> Vec<[f64; 2]> {
    vec![
        [0.0, 0.0],
        [1.0, -1.0],
        [2.0, 0.0],
        [1.0, 1.0],
        [-1.0, 1.0],
        [-2.0, 0.0],
        [-1.0, -1.0],
    ]
}

/// Six triangles around a hub with paired reference edges: no element is
/// isolated, so the mesh is weak BDD.
pub fn fan_six_weak_bdd() -> Mesh {
    Mesh::new(
        fan_coordinates(),
        vec![
            [2, 0, 1],
            [0, 2, 3],
            [3, 4, 0],
            [5, 0, 4],
            [0, 5, 6],
            [6, 1, 0],
        ],
        7,
        vec![],
    )
    .expect("static mesh")
}

/// The same fan with reference edges chasing each other around the hub:
/// every element is isolated and adjacent to the next, so the weak BDD
/// property fails.
pub fn fan_six_cyclic() -> Mesh {
    Mesh::new(
        fan_coordinates(),
        vec![
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 6],
            [0, 6, 1],
        ],
        7,
        vec![],
    )
    .expect("static mesh")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_valid() {
        for mesh in [
            unit_square_two(),
            unit_square_two_with_boundary(),
            strip_four(),
            fan_six_weak_bdd(),
            fan_six_cyclic(),
        ] {
            for e in 0..mesh.n_elements() {
                assert!(mesh.signed_area(e).unwrap() > 0.0);
            }
        }
    }
}
