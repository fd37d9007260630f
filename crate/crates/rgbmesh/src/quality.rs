//! Independent mesh checkers used as test oracles: conformity (geometric
//! hanging-node detection), orientation, minimum angle, similarity classes
//! and the weak BDD property.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::mesh::Mesh;
use crate::topology::EdgeTopology;

/// Tolerance for the point-on-segment test.
pub const HANGING_TOL: f64 = 1e-10;

/// Angle-triple tolerance when grouping triangles into similarity classes.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct QualityReport {
    pub conforming: bool,
    pub hanging_nodes: Vec<usize>,
    pub min_angle: f64,
    pub all_areas_positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_bdd: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub isolated_elements: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity_classes_per_initial_element: Option<Vec<usize>>,
}

/// Detects nodes lying in the interior of another element's edge. Purely
/// geometric: independent of element ordering and of the storage
/// conventions the refinement relies on.
pub fn check_conforming(mesh: &Mesh) -> (bool, BTreeSet<usize>) {
    let coords = mesh.coordinates();
    let mut edges: BTreeSet<[usize; 2]> = BTreeSet::new();
    for elem in mesh.elements() {
        for k in 0..3 {
            edges.insert(crate::mesh::canonical(elem[k], elem[(k + 1) % 3]));
        }
    }

    // Bucket nodes on a grid sized by the mean edge length so each edge only
    // tests nearby nodes.
    let mut total = 0.0;
    for &[a, b] in &edges {
        total += dist(coords[a], coords[b]);
    }
    let cell = (total / edges.len() as f64).max(HANGING_TOL);
    let key = |p: [f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (v, &p) in coords.iter().enumerate() {
        grid.entry(key(p)).or_default().push(v);
    }

    let mut hanging = BTreeSet::new();
    for &[a, b] in &edges {
        let pa = coords[a];
        let pb = coords[b];
        let (lo_x, hi_x) = (pa[0].min(pb[0]), pa[0].max(pb[0]));
        let (lo_y, hi_y) = (pa[1].min(pb[1]), pa[1].max(pb[1]));
        let (cx0, cy0) = key([lo_x - HANGING_TOL, lo_y - HANGING_TOL]);
        let (cx1, cy1) = key([hi_x + HANGING_TOL, hi_y + HANGING_TOL]);
        for cx in cx0..=cx1 {
            for cy in cy0..=cy1 {
                let Some(bucket) = grid.get(&(cx, cy)) else {
                    continue;
                };
                for &v in bucket {
                    if v == a || v == b {
                        continue;
                    }
                    if on_segment_interior(coords[v], pa, pb) {
                        hanging.insert(v);
                    }
                }
            }
        }
    }
    (hanging.is_empty(), hanging)
}

/// An element is isolated when its reference edge is shared with a neighbor
/// whose own reference edge is a different edge. Weak BDD: no two isolated
/// elements share an edge.
pub fn check_weak_bdd(mesh: &Mesh, topo: &EdgeTopology) -> (bool, Vec<usize>) {
    let n = mesh.n_elements();
    let mut isolated = vec![false; n];
    for e in 0..n {
        let ref_edge = topo.reference_edge(e);
        for inc in topo.edge2elements[ref_edge].iter().flatten() {
            let (other, pos) = *inc;
            if other != e && pos != 0 {
                isolated[e] = true;
            }
        }
    }
    let mut ok = true;
    'outer: for row in &topo.edge2elements {
        if let [Some((a, _)), Some((b, _))] = row {
            if isolated[*a] && isolated[*b] {
                ok = false;
                break 'outer;
            }
        }
    }
    let list = (0..n).filter(|&e| isolated[e]).collect();
    (ok, list)
}

/// Minimum interior angle over all elements, in radians.
pub fn min_angle(mesh: &Mesh) -> f64 {
    let mut min = f64::INFINITY;
    for e in 0..mesh.n_elements() {
        for angle in mesh.angles(e) {
            min = min.min(angle);
        }
    }
    min
}

/// Sorted angle triple of an element, the similarity-class key.
pub fn angle_triple(mesh: &Mesh, element: usize) -> [f64; 3] {
    let mut t = mesh.angles(element);
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t
}

/// Maps each element of a refined mesh to the initial element containing its
/// centroid.
pub fn provenance_by_containment(mesh: &Mesh, initial: &Mesh) -> Vec<usize> {
    (0..mesh.n_elements())
        .map(|e| {
            let c = mesh.centroid(e);
            crate::marking::point_to_element(initial, &[c])
                .first()
                .copied()
                .expect("centroid outside the initial mesh")
        })
        .collect()
}

/// Number of distinct angle triples (within [`ANGLE_TOL`]) among the
/// descendants of each initial element.
pub fn similarity_classes(mesh: &Mesh, provenance: &[usize], n_initial_elements: usize) -> Vec<usize> {
    let mut classes: Vec<Vec<[f64; 3]>> = vec![Vec::new(); n_initial_elements];
    for e in 0..mesh.n_elements() {
        let triple = angle_triple(mesh, e);
        let bucket = &mut classes[provenance[e]];
        let known = bucket.iter().any(|t| {
            t.iter()
                .zip(&triple)
                .all(|(a, b)| (a - b).abs() <= ANGLE_TOL)
        });
        if !known {
            bucket.push(triple);
        }
    }
    classes.into_iter().map(|b| b.len()).collect()
}

/// Full report; weak BDD and similarity sections are optional.
pub fn quality_report(
    mesh: &Mesh,
    topo: Option<&EdgeTopology>,
    similarity: Option<(&Mesh, &[usize])>,
) -> QualityReport {
    let (conforming, hanging) = check_conforming(mesh);
    let all_areas_positive = (0..mesh.n_elements())
        .all(|e| mesh.signed_area(e).map(|a| a > 0.0).unwrap_or(false));
    let (weak_bdd, isolated_elements) = match topo {
        Some(t) => {
            let (ok, isolated) = check_weak_bdd(mesh, t);
            (Some(ok), isolated)
        }
        None => (None, Vec::new()),
    };
    let similarity_classes_per_initial_element =
        similarity.map(|(initial, prov)| similarity_classes(mesh, prov, initial.n_elements()));
    QualityReport {
        conforming,
        hanging_nodes: hanging.into_iter().collect(),
        min_angle: min_angle(mesh),
        all_areas_positive,
        weak_bdd,
        isolated_elements,
        similarity_classes_per_initial_element,
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn on_segment_interior(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return false;
    }
    let cross = ab[0] * ap[1] - ab[1] * ap[0];
    if cross.abs() > HANGING_TOL * len2.sqrt() {
        return false;
    }
    let t = (ap[0] * ab[0] + ap[1] * ab[1]) / len2;
    t > HANGING_TOL && t < 1.0 - HANGING_TOL
}
