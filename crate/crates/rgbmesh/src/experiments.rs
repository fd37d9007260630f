//! Experiment drivers: refinement/coarsening ratio tables, the moving-circle
//! interplay loop and coarsening scalability timings.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::coarsen::coarsen_rgb;
use crate::error::{MeshError, Result};
use crate::marking::{mark_circle, Circle};
use crate::mesh::Mesh;
use crate::refine::{refine_rgb, uniform_refine};

/// Area floor below which elements are no longer marked for refinement.
pub const MIN_ELEMENT_AREA: f64 = 1e-8;

/// Fixed circle for the ratio experiment on the two-square strip.
pub fn default_ratio_circle() -> Circle {
    Circle::new([1.0, 0.5], 0.3)
}

#[derive(Debug, Clone)]
pub struct RatioRow {
    pub step: usize,
    pub elements: usize,
    pub nodes: usize,
    /// Ratio towards the previous row; `None` on the first row.
    pub rho_elem: Option<f64>,
    pub rho_coord: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RatioTable {
    pub rows: Vec<RatioRow>,
    pub geomean_elem: f64,
    pub geomean_coord: f64,
}

impl RatioTable {
    fn from_counts(counts: &[(usize, usize)]) -> Self {
        let mut rows = Vec::with_capacity(counts.len());
        let mut log_elem = 0.0;
        let mut log_coord = 0.0;
        for (step, &(elements, nodes)) in counts.iter().enumerate() {
            let (rho_elem, rho_coord) = if step == 0 {
                (None, None)
            } else {
                let (pe, pn) = counts[step - 1];
                let re = ratio(elements, pe);
                let rc = ratio(nodes, pn);
                log_elem += re.ln();
                log_coord += rc.ln();
                (Some(re), Some(rc))
            };
            rows.push(RatioRow {
                step,
                elements,
                nodes,
                rho_elem,
                rho_coord,
            });
        }
        let n = (counts.len().max(2) - 1) as f64;
        RatioTable {
            rows,
            geomean_elem: (log_elem / n).exp(),
            geomean_coord: (log_coord / n).exp(),
        }
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    let (a, b) = (a.max(b), a.min(b));
    a as f64 / b as f64
}

/// Refines `levels` times along a fixed circle, then coarsens everything
/// back to the initial mesh, recording element and node counts on the way.
/// Returns the refinement table, the coarsening table and the number of
/// coarsening passes.
pub fn run_ratio_experiment(
    initial: &Mesh,
    circle: &Circle,
    levels: usize,
) -> Result<(RatioTable, RatioTable, usize)> {
    let mut refine_counts = vec![(initial.n_elements(), initial.n_nodes())];
    let mut mesh = initial.clone();
    for _ in 0..levels {
        let marked = mark_circle(&mesh, circle, MIN_ELEMENT_AREA);
        if marked.is_empty() {
            break;
        }
        mesh = refine_rgb(&mesh, &marked)?;
        refine_counts.push((mesh.n_elements(), mesh.n_nodes()));
    }

    let mut coarsen_counts = vec![(mesh.n_elements(), mesh.n_nodes())];
    let mut steps = 0usize;
    while mesh.n_nodes() > mesh.n_initial() {
        let all: BTreeSet<usize> = (0..mesh.n_nodes()).collect();
        let next = coarsen_rgb(&mesh, &all)?;
        if next.n_nodes() == mesh.n_nodes() {
            return Err(MeshError::NoProgress {
                steps,
                nodes: mesh.n_nodes(),
                n_initial: mesh.n_initial(),
            });
        }
        mesh = next;
        steps += 1;
        coarsen_counts.push((mesh.n_elements(), mesh.n_nodes()));
    }

    Ok((
        RatioTable::from_counts(&refine_counts),
        RatioTable::from_counts(&coarsen_counts),
        steps,
    ))
}

#[derive(Debug, Clone)]
pub struct MovingCircleStep {
    pub circle: Circle,
    pub refined: Mesh,
    pub coarsened: Mesh,
}

/// Straight-line trajectory through the demo way-points.
pub fn default_trajectory(steps: usize, radius: f64) -> Vec<Circle> {
    let start = [0.759, 0.545];
    let end = [1.379, 0.172];
    (0..steps)
        .map(|k| {
            let t = if steps > 1 {
                k as f64 / (steps - 1) as f64
            } else {
                0.0
            };
            Circle::new(
                [
                    start[0] + t * (end[0] - start[0]),
                    start[1] + t * (end[1] - start[1]),
                ],
                radius,
            )
        })
        .collect()
}

/// Interplay loop: per way-point, refine along the circle until `n_max`
/// nodes are reached (or the marking runs dry), then coarsen everything
/// until the node count falls below `n_min`.
pub fn run_moving_circle(
    initial: &Mesh,
    trajectory: &[Circle],
    n_min: usize,
    n_max: usize,
) -> Result<Vec<MovingCircleStep>> {
    assert!(n_min < n_max, "n_min must be below n_max");
    let mut mesh = initial.clone();
    let mut out = Vec::with_capacity(trajectory.len());
    for &circle in trajectory {
        while mesh.n_nodes() < n_max {
            let marked = mark_circle(&mesh, &circle, MIN_ELEMENT_AREA);
            if marked.is_empty() {
                break;
            }
            mesh = refine_rgb(&mesh, &marked)?;
        }
        let refined = mesh.clone();
        while mesh.n_nodes() >= n_min && mesh.n_nodes() > mesh.n_initial() {
            let all: BTreeSet<usize> = (0..mesh.n_nodes()).collect();
            let next = coarsen_rgb(&mesh, &all)?;
            if next.n_nodes() == mesh.n_nodes() {
                break;
            }
            mesh = next;
        }
        out.push(MovingCircleStep {
            circle,
            refined,
            coarsened: mesh.clone(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ScaleRow {
    pub target_nodes: usize,
    pub nodes: usize,
    pub elements: usize,
    pub mean_seconds: f64,
}

/// Times one full coarsening pass on meshes of roughly the requested sizes,
/// averaged over `repeats` runs.
pub fn run_scalability(initial: &Mesh, sizes: &[usize], repeats: usize) -> Result<Vec<ScaleRow>> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &target in sizes {
        let mut mesh = initial.clone();
        while mesh.n_nodes() < target {
            mesh = uniform_refine(&mesh, 1)?;
        }
        let all: BTreeSet<usize> = (0..mesh.n_nodes()).collect();
        let mut total = 0.0;
        for _ in 0..repeats.max(1) {
            let clock = Instant::now();
            let coarse = coarsen_rgb(&mesh, &all)?;
            total += clock.elapsed().as_secs_f64();
            assert!(coarse.n_nodes() < mesh.n_nodes());
        }
        rows.push(ScaleRow {
            target_nodes: target,
            nodes: mesh.n_nodes(),
            elements: mesh.n_elements(),
            mean_seconds: total / repeats.max(1) as f64,
        });
    }
    Ok(rows)
}
