//! Edge-level incidence derived from a mesh: unique edge enumeration, the
//! element-to-edge map and its inverse. Local edge `k` of an element
//! `(v1, v2, v3)` is: 0 = (v1, v2) (the reference edge), 1 = (v2, v3),
//! 2 = (v3, v1).

use crate::error::{MeshError, Result};
use crate::mesh::{canonical, Mesh};

/// One side of an edge: the incident element and the local edge position
/// (0..3) inside that element.
pub type Incidence = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTopology {
    /// Canonical node pair per edge, smaller index first; edge ids are
    /// assigned in lexicographic order of these pairs.
    pub edge_nodes: Vec<[usize; 2]>,
    /// Three edge ids per element, in local edge order.
    pub element2edges: Vec<[usize; 3]>,
    /// Up to two incidences per edge; boundary edges have `None` second.
    pub edge2elements: Vec<[Option<Incidence>; 2]>,
}

impl EdgeTopology {
    pub fn n_edges(&self) -> usize {
        self.edge_nodes.len()
    }

    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        self.edge2elements[edge][1].is_none()
    }

    /// Edge id of an element's reference edge.
    pub fn reference_edge(&self, element: usize) -> usize {
        self.element2edges[element][0]
    }

    /// For each local edge, the element on the other side (if any).
    pub fn neighbors(&self, element: usize) -> Result<[Option<usize>; 3]> {
        let edges = self.element2edges.get(element).ok_or(MeshError::BadIndex {
            context: "element id",
            index: element,
            len: self.element2edges.len(),
        })?;
        let mut out = [None; 3];
        for k in 0..3 {
            out[k] = self.edge2elements[edges[k]]
                .iter()
                .flatten()
                .map(|&(e, _)| e)
                .find(|&e| e != element);
        }
        Ok(out)
    }
}

/// Build the edge incidence structure of a mesh. Fails with
/// [`MeshError::NonManifoldEdge`] if any edge is shared by more than two
/// elements.
pub fn build_edge_topology(mesh: &Mesh) -> Result<EdgeTopology> {
    let elements = mesh.elements();

    // Canonical pairs packed into u64 keys; sorted order doubles as the
    // lexicographic edge numbering.
    let pack = |a: usize, b: usize| ((a as u64) << 32) | b as u64;
    let mut keys: Vec<u64> = Vec::with_capacity(3 * elements.len());
    for elem in elements {
        for k in 0..3 {
            let [a, b] = canonical(elem[k], elem[(k + 1) % 3]);
            keys.push(pack(a, b));
        }
    }
    keys.sort_unstable();
    keys.dedup();

    let mut element2edges = Vec::with_capacity(elements.len());
    for elem in elements {
        let mut row = [0usize; 3];
        for k in 0..3 {
            let [a, b] = canonical(elem[k], elem[(k + 1) % 3]);
            row[k] = keys.binary_search(&pack(a, b)).expect("edge key present");
        }
        element2edges.push(row);
    }

    let edge_nodes: Vec<[usize; 2]> = keys
        .iter()
        .map(|&key| [(key >> 32) as usize, (key & 0xffff_ffff) as usize])
        .collect();

    let edge2elements = invert_element2edges(&element2edges, edge_nodes.len())?;
    for (edge, incs) in edge2elements.iter().enumerate() {
        debug_assert!(incs[0].is_some(), "edge {edge} has no incidence");
    }

    Ok(EdgeTopology {
        edge_nodes,
        element2edges,
        edge2elements,
    })
}

/// Invert an element-to-edges table into per-edge incidences.
pub fn invert_element2edges(
    element2edges: &[[usize; 3]],
    n_edges: usize,
) -> Result<Vec<[Option<Incidence>; 2]>> {
    let mut edge2elements: Vec<[Option<Incidence>; 2]> = vec![[None, None]; n_edges];
    for (e, row) in element2edges.iter().enumerate() {
        for (k, &edge) in row.iter().enumerate() {
            let slots = &mut edge2elements[edge];
            if slots[0].is_none() {
                slots[0] = Some((e, k));
            } else if slots[1].is_none() {
                slots[1] = Some((e, k));
            } else {
                return Err(MeshError::NonManifoldEdge { a: edge, b: edge });
            }
        }
    }
    Ok(edge2elements)
}
