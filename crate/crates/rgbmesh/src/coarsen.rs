//! History-free coarsening of RGB-refined meshes.
//!
//! The mesh alone carries enough structure to undo refinement one layer at a
//! time: newest vertices sit at position three of each element, red patterns
//! are identified by their all-new middle child, and children of one father
//! occupy consecutive rows. Candidate nodes are those with adapted valence 2
//! or 4 (valence counted without red middle elements); a blocking CLOSURE
//! then retains every node whose removal would break the reference-edge
//! layout, and the surviving patterns are rebuilt as father, green or blue
//! configurations.

use std::collections::BTreeSet;

use crate::error::{MeshError, Result};
use crate::mesh::{midpoint, signed_area_of, Mesh, COORD_TOL};
use crate::topology::{build_edge_topology, EdgeTopology};

/// Node and element sets driving one coarsening pass.
#[derive(Debug, Clone)]
pub struct CoarsenClassification {
    /// Third-column nodes excluding the initial ones.
    pub newest: BTreeSet<usize>,
    /// Nodes listed at position three that are old pattern apexes rather
    /// than genuinely new vertices.
    pub systematic: BTreeSet<usize>,
    /// Rows of red middle elements, ascending.
    pub red_middles: Vec<usize>,
    /// Per node, the number of incident elements outside the red middles.
    pub adapted_valence: Vec<usize>,
    /// Nodes scheduled for removal (after the blocking CLOSURE).
    pub admissible: BTreeSet<usize>,
    /// Complement of the pre-CLOSURE admissible set, grown to a fixed point.
    pub blocked: BTreeSet<usize>,
    /// Blocked newest nodes; these keep their patterns partially refined.
    pub hanging: BTreeSet<usize>,
}

/// Newest vertices per the position-three rule, split into the genuine set
/// (initial nodes excluded) and the systematic false positives (the father
/// apex re-listed by the third child of each red pattern).
pub fn detect_newest_nodes(mesh: &Mesh) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    let topo = build_edge_topology(mesh)?;
    let middles = detect_red_middles(mesh, &topo);
    Ok(newest_nodes_with_middles(mesh, &middles))
}

fn newest_nodes_with_middles(
    mesh: &Mesh,
    red_middles: &[usize],
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let newest = mesh
        .elements()
        .iter()
        .map(|e| e[2])
        .filter(|&v| v >= mesh.n_initial())
        .collect();
    let systematic = red_middles.iter().map(|&m| mesh.elements()[m - 1][2]).collect();
    (newest, systematic)
}

/// Red middle elements located by comparing edges of four consecutive rows:
/// row `e` is a middle when its second edge equals the second edge of row
/// `e-3`, its third edge equals the third edge of row `e-2` and its first
/// edge equals the first edge of row `e-1`.
pub fn detect_red_middles(mesh: &Mesh, topo: &EdgeTopology) -> Vec<usize> {
    let e2e = &topo.element2edges;
    let mut middles = Vec::new();
    let mut e = 3;
    while e < mesh.n_elements() {
        if e2e[e - 3][1] == e2e[e][1] && e2e[e - 2][2] == e2e[e][2] && e2e[e - 1][0] == e2e[e][0] {
            middles.push(e);
            e += 4; // quadruples cannot overlap
        } else {
            e += 1;
        }
    }
    middles
}

/// Number of incident non-middle elements per node.
pub fn adapted_valence(mesh: &Mesh, red_middles: &[usize]) -> Vec<usize> {
    let mut is_middle = vec![false; mesh.n_elements()];
    for &m in red_middles {
        is_middle[m] = true;
    }
    let mut valence = vec![0usize; mesh.n_nodes()];
    for (e, elem) in mesh.elements().iter().enumerate() {
        if is_middle[e] {
            continue;
        }
        for &v in elem {
            valence[v] += 1;
        }
    }
    valence
}

/// Blocking CLOSURE: whenever a red middle element has a blocked node, the
/// node opposite its reference edge (its third vertex, the midpoint of the
/// father's reference edge) is blocked as well. Returns the least fixed
/// point containing `blocked`.
pub fn closure_block(
    mesh: &Mesh,
    red_middles: &[usize],
    blocked: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    let mut bits = vec![false; mesh.n_nodes()];
    for &v in blocked {
        bits[v] = true;
    }
    closure_block_bits(mesh, red_middles, &mut bits);
    bits.iter()
        .enumerate()
        .filter_map(|(v, &b)| b.then_some(v))
        .collect()
}

fn closure_block_bits(mesh: &Mesh, red_middles: &[usize], blocked: &mut [bool]) {
    let mut changed = true;
    while changed {
        changed = false;
        for &m in red_middles {
            let [a, b, c] = mesh.elements()[m];
            if (blocked[a] || blocked[b] || blocked[c]) && !blocked[c] {
                blocked[c] = true;
                changed = true;
            }
        }
    }
}

/// Runs the classification phase of a coarsening pass for the given marked
/// nodes.
pub fn classify(
    mesh: &Mesh,
    topo: &EdgeTopology,
    marked_nodes: &BTreeSet<usize>,
) -> CoarsenClassification {
    let n = mesh.n_nodes();
    let red_middles = detect_red_middles(mesh, topo);
    let (newest, systematic) = newest_nodes_with_middles(mesh, &red_middles);
    let valence = adapted_valence(mesh, &red_middles);

    let mut is_newest = vec![false; n];
    for &v in &newest {
        is_newest[v] = true;
    }
    let mut blocked = vec![false; n];
    for v in 0..n {
        let admissible =
            is_newest[v] && (valence[v] == 2 || valence[v] == 4) && marked_nodes.contains(&v);
        blocked[v] = !admissible;
    }
    closure_block_bits(mesh, &red_middles, &mut blocked);

    let mut hanging = BTreeSet::new();
    let mut admissible = BTreeSet::new();
    for v in 0..n {
        if blocked[v] && is_newest[v] {
            hanging.insert(v);
        } else if !blocked[v] {
            admissible.insert(v);
        }
    }

    CoarsenClassification {
        newest,
        systematic,
        red_middles,
        adapted_valence: valence,
        admissible,
        blocked: blocked
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
            .collect(),
        hanging,
    }
}

/// One coarsening pass at the marked nodes. Green pairs collapse to their
/// father; red quadruples collapse to the father, a green pair or a blue
/// triple depending on which of their three midpoints remain; everything
/// else is kept. Children always fall back into their father's row so that
/// subsequent passes can keep unwinding the refinement.
pub fn coarsen_rgb(mesh: &Mesh, marked_nodes: &BTreeSet<usize>) -> Result<Mesh> {
    let topo = build_edge_topology(mesh)?;
    let classes = classify(mesh, &topo, marked_nodes);
    rebuild(mesh, &classes)
}

/// Element-marked coarsening: marks all nodes of the given elements.
pub fn coarsen_marked_elements(mesh: &Mesh, marked_elements: &[usize]) -> Result<Mesh> {
    let mut nodes = BTreeSet::new();
    for &e in marked_elements {
        if e >= mesh.n_elements() {
            return Err(MeshError::BadIndex {
                context: "marked element",
                index: e,
                len: mesh.n_elements(),
            });
        }
        nodes.extend(mesh.elements()[e]);
    }
    coarsen_rgb(mesh, &nodes)
}

/// Repeats full coarsening (all nodes marked) until a fixed point and
/// returns the result together with the number of effective passes. Errors
/// with [`MeshError::NoProgress`] if the fixed point still has non-initial
/// nodes, which happens when the initial mesh lacks the weak BDD property.
pub fn coarsen_to_initial(mesh: &Mesh) -> Result<(Mesh, usize)> {
    // One pass removes at least one node while progress is possible.
    let bound = mesh.n_nodes() - mesh.n_initial() + 1;
    coarsen_to_initial_capped(mesh, bound)
}

/// [`coarsen_to_initial`] with an explicit cap on the number of passes.
pub fn coarsen_to_initial_capped(mesh: &Mesh, max_steps: usize) -> Result<(Mesh, usize)> {
    let mut current = mesh.clone();
    let mut steps = 0usize;
    loop {
        if current.n_nodes() == current.n_initial() {
            return Ok((current, steps));
        }
        if steps >= max_steps {
            return Err(MeshError::NoProgress {
                steps,
                nodes: current.n_nodes(),
                n_initial: current.n_initial(),
            });
        }
        let all: BTreeSet<usize> = (0..current.n_nodes()).collect();
        let next = coarsen_rgb(&current, &all)?;
        if next.n_nodes() == current.n_nodes() {
            return Err(MeshError::NoProgress {
                steps,
                nodes: current.n_nodes(),
                n_initial: current.n_initial(),
            });
        }
        current = next;
        steps += 1;
    }
}

/// Walks the element rows, fusing removable patterns and renumbering the
/// surviving nodes.
fn rebuild(mesh: &Mesh, classes: &CoarsenClassification) -> Result<Mesh> {
    let mut is_middle = vec![false; mesh.n_elements()];
    for &m in &classes.red_middles {
        is_middle[m] = true;
    }
    let mut removed = vec![false; mesh.n_nodes()];
    for &v in &classes.admissible {
        removed[v] = true;
    }
    let elements = mesh.elements();
    let coordinates = mesh.coordinates();

    let mut out: Vec<[usize; 3]> = Vec::with_capacity(elements.len());
    let mut i = 0usize;
    while i < elements.len() {
        if i + 3 < elements.len() && is_middle.contains(&(i + 3)) {
            rebuild_red(coordinates, &elements[i..i + 4], removed, &mut out)?;
            i += 4;
        } else if i + 1 < elements.len() {
            match green_pair(coordinates, elements[i], elements[i + 1]) {
                Some((father, m)) if removed.contains(&m) => {
                    push_father(coordinates, father, &mut out)?;
                    i += 2;
                }
                Some(_) => {
                    // An intact green pair is consumed as a unit so its
                    // second row cannot pair with a later one.
                    out.push(elements[i]);
                    out.push(elements[i + 1]);
                    i += 2;
                }
                None => {
                    out.push(elements[i]);
                    i += 1;
                }
            }
        } else {
            out.push(elements[i]);
            i += 1;
        }
    }

    // Nodes survive when referenced; initial nodes always survive.
    let mut retained = vec![false; mesh.n_nodes()];
    for v in 0..mesh.n_initial() {
        retained[v] = true;
    }
    for row in &out {
        for &v in row {
            retained[v] = true;
        }
    }

    // Fuse boundary edge pairs whose shared node was eliminated.
    let mut boundaries = mesh.boundaries().to_vec();
    for list in &mut boundaries {
        let old = std::mem::take(&mut list.edges);
        let mut k = 0usize;
        while k < old.len() {
            if k + 1 < old.len() && old[k][1] == old[k + 1][0] && !retained[old[k][1]] {
                list.edges.push([old[k][0], old[k + 1][1]]);
                k += 2;
            } else {
                list.edges.push(old[k]);
                k += 1;
            }
        }
    }

    // Compact coordinates, keeping ascending order of surviving ids.
    let mut remap = vec![usize::MAX; mesh.n_nodes()];
    let mut new_coordinates = Vec::with_capacity(mesh.n_nodes());
    for (v, &keep) in retained.iter().enumerate() {
        if keep {
            remap[v] = new_coordinates.len();
            new_coordinates.push(coordinates[v]);
        }
    }
    for row in &mut out {
        for v in row.iter_mut() {
            *v = remap[*v];
        }
    }
    for list in &mut boundaries {
        for edge in &mut list.edges {
            for v in edge.iter_mut() {
                *v = remap[*v];
            }
        }
    }

    Mesh::new(new_coordinates, out, mesh.n_initial(), boundaries)
}

/// Rebuilds one red quadruple `[r1, r2, r3, middle]` according to which of
/// its three midpoints are kept. The reference-edge midpoint is kept
/// whenever any of the three is, so only father, green, blue and unchanged
/// configurations occur.
fn rebuild_red(
    coordinates: &[[f64; 2]],
    rows: &[[usize; 3]],
    removed: &BTreeSet<usize>,
    out: &mut Vec<[usize; 3]>,
) -> Result<()> {
    let [r1, r2, r3, mid] = [rows[0], rows[1], rows[2], rows[3]];
    let (v1, v2, v3) = (r1[0], r2[1], r3[2]);
    let (m23, m13, m12) = (mid[0], mid[1], mid[2]);
    let keep12 = !removed.contains(&m12);
    let keep23 = !removed.contains(&m23);
    let keep13 = !removed.contains(&m13);

    match (keep12, keep23, keep13) {
        (false, false, false) => push_father(coordinates, [v1, v2, v3], out)?,
        (true, false, false) => {
            out.push([v3, v1, m12]);
            out.push([v2, v3, m12]);
        }
        (true, false, true) => {
            out.push([m12, v3, m13]);
            out.push([v1, m12, m13]);
            out.push([v2, v3, m12]);
        }
        (true, true, false) => {
            out.push([v3, v1, m12]);
            out.push([m12, v2, m23]);
            out.push([v3, m12, m23]);
        }
        (true, true, true) => out.extend_from_slice(rows),
        _ => unreachable!("blocking CLOSURE keeps the reference midpoint first"),
    }
    Ok(())
}

fn push_father(
    coordinates: &[[f64; 2]],
    father: [usize; 3],
    out: &mut Vec<[usize; 3]>,
) -> Result<()> {
    if signed_area_of(coordinates, &father) <= 0.0 {
        return Err(MeshError::NotRefinedMesh(format!(
            "fusing rows produced a degenerate father ({}, {}, {})",
            father[0], father[1], father[2]
        )));
    }
    out.push(father);
    Ok(())
}

/// Structural probe for a green pair: rows `(a, b, m)`, `(c, a, m)` with `m`
/// the midpoint of the father's reference edge `(b, c)`. Returns the father
/// `(b, c, a)` and the bisection node `m`.
fn green_pair(
    coordinates: &[[f64; 2]],
    p: [usize; 3],
    q: [usize; 3],
) -> Option<([usize; 3], usize)> {
    if p[2] != q[2] || q[1] != p[0] {
        return None;
    }
    let (v1, v2, v3, m) = (p[1], q[0], p[0], p[2]);
    if v1 == v2 {
        return None;
    }
    let expect = midpoint(coordinates[v1], coordinates[v2]);
    let got = coordinates[m];
    if (expect[0] - got[0]).abs() <= COORD_TOL && (expect[1] - got[1]).abs() <= COORD_TOL {
        Some(([v1, v2, v3], m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::meshes_equal;
    use crate::refine::{refine_rgb, uniform_refine};
    use crate::samples;

    fn all_nodes(mesh: &Mesh) -> BTreeSet<usize> {
        (0..mesh.n_nodes()).collect()
    }

    #[test]
    fn initial_mesh_has_no_newest_nodes() {
        let mesh = samples::unit_square_two();
        let (newest, _) = detect_newest_nodes(&mesh).unwrap();
        assert!(newest.is_empty());
    }

    #[test]
    fn uniform_red_flags_the_apex_as_systematic() {
        let mesh = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]],
            vec![[0, 1, 2]],
            3,
            vec![],
        )
        .unwrap();
        let fine = uniform_refine(&mesh, 1).unwrap();
        let (newest, systematic) = detect_newest_nodes(&fine).unwrap();
        assert_eq!(newest, BTreeSet::from([3, 4, 5]));
        assert_eq!(systematic, BTreeSet::from([2]));
    }

    #[test]
    fn no_middles_in_unrefined_mesh() {
        let mesh = samples::unit_square_two();
        let topo = build_edge_topology(&mesh).unwrap();
        assert!(detect_red_middles(&mesh, &topo).is_empty());
    }

    #[test]
    fn middles_of_the_refined_square() {
        let fine = uniform_refine(&samples::unit_square_two(), 1).unwrap();
        let topo = build_edge_topology(&fine).unwrap();
        assert_eq!(detect_red_middles(&fine, &topo), vec![3, 7]);
    }

    #[test]
    fn deeper_neighbor_hides_a_middle() {
        // Refining one corner child of the first pattern shifts its sibling
        // rows apart, so the second pattern's middle must stay detected and
        // the first one must not.
        let fine = uniform_refine(&samples::unit_square_two(), 1).unwrap();
        let finer = refine_rgb(&fine, &[0]).unwrap();
        let topo = build_edge_topology(&finer).unwrap();
        let middles = detect_red_middles(&finer, &topo);
        for &m in &middles {
            let elem = finer.elements()[m];
            assert!(elem.iter().all(|&v| v >= 4), "middle {m} uses initial nodes");
        }
        // The refined pattern's middle is gone from the set.
        let n_before = 2;
        assert!(middles.len() < n_before + 4);
    }

    #[test]
    fn lone_triangle_valences() {
        let mesh = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]],
            vec![[0, 1, 2]],
            3,
            vec![],
        )
        .unwrap();
        assert_eq!(adapted_valence(&mesh, &[]), vec![1, 1, 1]);
    }

    #[test]
    fn adapted_valence_skips_middles() {
        let fine = uniform_refine(&samples::unit_square_two(), 1).unwrap();
        let topo = build_edge_topology(&fine).unwrap();
        let middles = detect_red_middles(&fine, &topo);
        let val = adapted_valence(&fine, &middles);
        // The diagonal midpoint is shared by two red patterns: two corner
        // children each, middles excluded.
        assert_eq!(val[5], 4);
        let plain = adapted_valence(&fine, &[]);
        assert_eq!(plain[5], 6);
    }

    #[test]
    fn closure_block_fixpoints() {
        let fine = uniform_refine(&samples::unit_square_two(), 1).unwrap();
        let topo = build_edge_topology(&fine).unwrap();
        let middles = detect_red_middles(&fine, &topo);
        assert!(closure_block(&fine, &middles, &BTreeSet::new()).is_empty());

        // Blocking one corner midpoint of a pattern pulls in the midpoint
        // opposite the middle's reference edge.
        let m = fine.elements()[middles[0]];
        let seed = BTreeSet::from([m[0]]);
        let closed = closure_block(&fine, &middles, &seed);
        assert!(closed.contains(&m[2]));
    }

    #[test]
    fn empty_marking_is_identity() {
        let fine = uniform_refine(&samples::unit_square_two(), 2).unwrap();
        let out = coarsen_rgb(&fine, &BTreeSet::new()).unwrap();
        assert!(meshes_equal(&fine, &out));
    }

    #[test]
    fn one_level_recovery() {
        let mesh = samples::unit_square_two();
        let fine = uniform_refine(&mesh, 1).unwrap();
        let coarse = coarsen_rgb(&fine, &all_nodes(&fine)).unwrap();
        assert!(meshes_equal(&mesh, &coarse));
    }

    #[test]
    fn element_marked_recovery() {
        let mesh = samples::unit_square_two();
        let fine = uniform_refine(&mesh, 1).unwrap();
        let all: Vec<usize> = (0..fine.n_elements()).collect();
        let coarse = coarsen_marked_elements(&fine, &all).unwrap();
        assert!(meshes_equal(&mesh, &coarse));
        let unchanged = coarsen_marked_elements(&fine, &[]).unwrap();
        assert!(meshes_equal(&fine, &unchanged));
    }

    #[test]
    fn recovery_through_levels() {
        let mesh = samples::unit_square_two();
        for levels in 1..=4 {
            let fine = uniform_refine(&mesh, levels).unwrap();
            let (back, steps) = coarsen_to_initial(&fine).unwrap();
            assert!(meshes_equal(&mesh, &back), "levels={levels}");
            assert!(steps <= 2 * levels + 1, "levels={levels} steps={steps}");
        }
    }

    #[test]
    fn initial_mesh_needs_zero_steps() {
        let mesh = samples::unit_square_two();
        let (back, steps) = coarsen_to_initial(&mesh).unwrap();
        assert_eq!(steps, 0);
        assert!(meshes_equal(&mesh, &back));
    }

    #[test]
    fn coarsening_never_removes_initial_nodes() {
        let mesh = samples::strip_four();
        let fine = uniform_refine(&mesh, 2).unwrap();
        let coarse = coarsen_rgb(&fine, &all_nodes(&fine)).unwrap();
        for v in 0..mesh.n_initial() {
            assert_eq!(coarse.point(v), mesh.point(v));
        }
    }

    #[test]
    fn isolated_element_loop_cannot_be_fully_coarsened() {
        // A fan whose reference edges chase each other around the center is
        // not weak BDD; adaptive refinement then coarsening gets stuck.
        let fan = samples::fan_six_cyclic();
        let fine = refine_rgb(&fan, &[0]).unwrap();
        let err = coarsen_to_initial(&fine).unwrap_err();
        assert!(matches!(err, MeshError::NoProgress { .. }));
    }

    #[test]
    fn blocked_valence_five_node_survives() {
        // Five red patterns and one blue around a hub: the hub-side blue
        // midpoint has adapted valence 5 and must survive a full pass.
        let fan = samples::fan_six_weak_bdd();
        let marks: Vec<usize> = vec![0, 1, 2, 3, 5];
        let fine = refine_rgb(&fan, &marks).unwrap();
        let topo = build_edge_topology(&fine).unwrap();
        let classes = classify(&fine, &topo, &all_nodes(&fine));
        let five: Vec<usize> = classes
            .newest
            .iter()
            .copied()
            .filter(|&v| classes.adapted_valence[v] == 5)
            .collect();
        assert_eq!(five.len(), 1);
        assert!(classes.hanging.contains(&five[0]));

        let out = coarsen_rgb(&fine, &all_nodes(&fine)).unwrap();
        let p = fine.point(five[0]);
        assert!(out
            .coordinates()
            .iter()
            .any(|q| (q[0] - p[0]).abs() < 1e-14 && (q[1] - p[1]).abs() < 1e-14));
        // Two further passes recover the weak BDD initial mesh.
        let (back, _) = coarsen_to_initial(&fine).unwrap();
        assert!(meshes_equal(&fan, &back));
    }
}
