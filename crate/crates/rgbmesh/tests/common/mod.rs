//! Shared fixtures and generators for the integration suites.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use rgbmesh::coarsen::coarsen_rgb;
use rgbmesh::mesh::Mesh;
use rgbmesh::refine::refine_rgb;
use rgbmesh::samples;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Three unit squares in an L, every diagonal carrying both reference edges.
pub fn lshape_six() -> Mesh {
    Mesh::new(
        vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [2.0, 0.0],
            [0.0, 1.0],
            [1.0, 1.0],
            [2.0, 1.0],
            [0.0, 2.0],
            [1.0, 2.0],
        ],
        vec![
            [4, 0, 1],
            [0, 4, 3],
            [5, 1, 2],
            [1, 5, 4],
            [7, 3, 4],
            [3, 7, 6],
        ],
        8,
        vec![],
    )
    .unwrap()
}

pub fn single_triangle() -> Mesh {
    Mesh::new(
        vec![[0.0, 0.0], [1.0, 0.0], [0.4, 0.9]],
        vec![[0, 1, 2]],
        3,
        vec![],
    )
    .unwrap()
}

/// The five weak BDD starting meshes used by the fuzz suites.
pub fn initial_meshes() -> Vec<Mesh> {
    vec![
        samples::unit_square_two(),
        samples::strip_four(),
        samples::fan_six_weak_bdd(),
        single_triangle(),
        lshape_six(),
    ]
}

pub fn random_element_marks(rng: &mut ChaCha8Rng, mesh: &Mesh, p: f64) -> Vec<usize> {
    (0..mesh.n_elements())
        .filter(|_| rng.gen_bool(p))
        .collect()
}

pub fn random_node_marks(rng: &mut ChaCha8Rng, mesh: &Mesh, p: f64) -> BTreeSet<usize> {
    (0..mesh.n_nodes()).filter(|_| rng.gen_bool(p)).collect()
}

/// One random refine-or-coarsen step, respecting an element cap.
pub fn random_step(rng: &mut ChaCha8Rng, mesh: &Mesh, cap_elements: usize) -> Mesh {
    let refine = mesh.n_elements() < cap_elements && rng.gen_bool(0.55);
    if refine {
        let marks = random_element_marks(rng, mesh, 0.35);
        refine_rgb(mesh, &marks).expect("refine step")
    } else {
        let marks = random_node_marks(rng, mesh, 0.6);
        coarsen_rgb(mesh, &marks).expect("coarsen step")
    }
}

/// A mesh reached by a few random refinements from one of the initial
/// meshes.
pub fn random_refined_mesh(rng: &mut ChaCha8Rng, cap_elements: usize) -> Mesh {
    let pool = initial_meshes();
    let mut mesh = pool[rng.gen_range(0..pool.len())].clone();
    let steps = rng.gen_range(1..=4);
    for _ in 0..steps {
        if mesh.n_elements() >= cap_elements {
            break;
        }
        let marks = random_element_marks(rng, &mesh, 0.4);
        mesh = refine_rgb(&mesh, &marks).expect("refine");
    }
    mesh
}
