//! Red-green-blue refinement. Marked elements get all three edges flagged
//! for bisection; a CLOSURE pass promotes the reference edge of any element
//! with a flagged non-reference edge. Each element is then split by the
//! pattern its 3-bit edge code maps to, and children are stored at the
//! former position of their father.

use crate::error::{MeshError, Result};
use crate::mesh::{midpoint, Mesh};
use crate::topology::{build_edge_topology, EdgeTopology};

/// Refinement pattern selected by the closed edge marking of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinePattern {
    /// No edge marked; element is kept.
    None,
    /// Reference edge bisected: two children.
    Green,
    /// Reference and second edge bisected: three children.
    BlueR,
    /// Reference and third edge bisected: three children.
    BlueL,
    /// All edges bisected: four children, middle child stored last.
    Red,
}

impl RefinePattern {
    /// Maps a closed 3-bit code (bit 2 = reference edge, bit 1 = second
    /// edge, bit 0 = third edge) to its pattern.
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0b000 => Some(Self::None),
            0b100 => Some(Self::Green),
            0b110 => Some(Self::BlueR),
            0b101 => Some(Self::BlueL),
            0b111 => Some(Self::Red),
            _ => None,
        }
    }

    pub fn child_count(self) -> usize {
        match self {
            Self::None => 1,
            Self::Green => 2,
            Self::BlueR | Self::BlueL => 3,
            Self::Red => 4,
        }
    }
}

/// Per-edge bisection flags for one refinement call.
#[derive(Debug, Clone)]
pub struct EdgeMarkState {
    marked: Vec<bool>,
}

impl EdgeMarkState {
    pub fn new(topo: &EdgeTopology) -> Self {
        Self {
            marked: vec![false; topo.n_edges()],
        }
    }

    pub fn mark_edge(&mut self, edge: usize) {
        self.marked[edge] = true;
    }

    pub fn is_marked(&self, edge: usize) -> bool {
        self.marked[edge]
    }

    pub fn n_marked(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }

    /// 3-bit marking code of an element: bit 2 = reference edge.
    pub fn element_code(&self, topo: &EdgeTopology, element: usize) -> u8 {
        let edges = topo.element2edges[element];
        (u8::from(self.marked[edges[0]]) << 2)
            | (u8::from(self.marked[edges[1]]) << 1)
            | u8::from(self.marked[edges[2]])
    }

    /// CLOSURE: whenever a non-reference edge of an element is marked, its
    /// reference edge is marked too (010 -> 110, 001 -> 101, 011 -> 111).
    /// Terminates because marks only grow, bounded by the edge count.
    pub fn close(&mut self, topo: &EdgeTopology) {
        let n_edges = topo.n_edges();
        let mut rounds = 0usize;
        loop {
            let mut changed = false;
            for element in 0..topo.element2edges.len() {
                let code = self.element_code(topo, element);
                if code & 0b011 != 0 && code & 0b100 == 0 {
                    self.mark_edge(topo.element2edges[element][0]);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
            rounds += 1;
            assert!(rounds <= n_edges + 1, "CLOSURE failed to terminate");
        }
    }
}

/// Flags all edges of the marked elements and runs the CLOSURE to a fixed
/// point. Every element code afterwards is one of
/// {000, 100, 110, 101, 111}.
pub fn closure_marks(
    _mesh: &Mesh,
    topo: &EdgeTopology,
    marked_elements: &[usize],
) -> EdgeMarkState {
    let mut state = EdgeMarkState::new(topo);
    for &e in marked_elements {
        for edge in topo.element2edges[e] {
            state.mark_edge(edge);
        }
    }
    state.close(topo);
    state
}

/// Applies a closed edge marking. Midpoint nodes are appended after the
/// existing coordinates in ascending canonical-edge order; children occupy
/// their father's former position with later elements shifted.
pub fn refine_with_marks(mesh: &Mesh, topo: &EdgeTopology, marks: &EdgeMarkState) -> Result<Mesh> {
    // One new node per marked edge, in edge-id order.
    let mut edge_node = vec![usize::MAX; topo.n_edges()];
    let mut coordinates = mesh.coordinates().to_vec();
    for (edge, &[a, b]) in topo.edge_nodes.iter().enumerate() {
        if marks.is_marked(edge) {
            edge_node[edge] = coordinates.len();
            coordinates.push(midpoint(mesh.point(a), mesh.point(b)));
        }
    }

    let mut elements = Vec::with_capacity(mesh.n_elements());
    for (e, &[v1, v2, v3]) in mesh.elements().iter().enumerate() {
        let code = marks.element_code(topo, e);
        let pattern = RefinePattern::from_code(code)
            .unwrap_or_else(|| panic!("element {e} has unclosed marking {code:03b}"));
        let edges = topo.element2edges[e];
        let m12 = edge_node[edges[0]];
        let m23 = edge_node[edges[1]];
        let m13 = edge_node[edges[2]];
        match pattern {
            RefinePattern::None => elements.push([v1, v2, v3]),
            RefinePattern::Green => {
                elements.push([v3, v1, m12]);
                elements.push([v2, v3, m12]);
            }
            RefinePattern::BlueR => {
                elements.push([v3, v1, m12]);
                elements.push([m12, v2, m23]);
                elements.push([v3, m12, m23]);
            }
            RefinePattern::BlueL => {
                elements.push([m12, v3, m13]);
                elements.push([v1, m12, m13]);
                elements.push([v2, v3, m12]);
            }
            RefinePattern::Red => {
                elements.push([v1, m12, m13]);
                elements.push([m12, v2, m23]);
                elements.push([m13, m23, v3]);
                elements.push([m23, m13, m12]);
            }
        }
    }

    // Boundary edges split in place, preserving direction.
    let mut boundaries = mesh.boundaries().to_vec();
    for list in &mut boundaries {
        let mut edges = Vec::with_capacity(list.edges.len());
        for &[a, b] in &list.edges {
            let key = crate::mesh::canonical(a, b);
            let edge = topo
                .edge_nodes
                .binary_search(&key)
                .expect("boundary edge missing from topology");
            let m = edge_node[edge];
            if m != usize::MAX {
                edges.push([a, m]);
                edges.push([m, b]);
            } else {
                edges.push([a, b]);
            }
        }
        list.edges = edges;
    }

    Mesh::new(coordinates, elements, mesh.n_initial(), boundaries)
}

/// RGB refinement of the marked elements, including the CLOSURE step.
pub fn refine_rgb(mesh: &Mesh, marked_elements: &[usize]) -> Result<Mesh> {
    for &e in marked_elements {
        if e >= mesh.n_elements() {
            return Err(MeshError::BadIndex {
                context: "marked element",
                index: e,
                len: mesh.n_elements(),
            });
        }
    }
    let topo = build_edge_topology(mesh)?;
    let marks = closure_marks(mesh, &topo, marked_elements);
    refine_with_marks(mesh, &topo, &marks)
}

/// Marks every element and refines, `levels` times. Each step is all-red and
/// multiplies the element count by four.
pub fn uniform_refine(mesh: &Mesh, levels: usize) -> Result<Mesh> {
    let mut current = mesh.clone();
    for _ in 0..levels {
        let all: Vec<usize> = (0..current.n_elements()).collect();
        current = refine_rgb(&current, &all)?;
    }
    Ok(current)
}
