//! Command-line surface for the adaptive meshing kernel. Meshes live in
//! bundle directories (`coordinates.dat`, `elements.dat`, optional boundary
//! lists); reports are JSON on stdout, tables are CSV.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use rgbmesh::coarsen::{coarsen_marked_elements, coarsen_rgb, coarsen_to_initial_capped};
use rgbmesh::experiments::{
    default_ratio_circle, default_trajectory, run_moving_circle, run_ratio_experiment,
    run_scalability, RatioTable,
};
use rgbmesh::io::{read_dat, write_dat};
use rgbmesh::marking::{mark_circle, point_to_element, Circle};
use rgbmesh::mesh::Mesh;
use rgbmesh::quality::{provenance_by_containment, quality_report};
use rgbmesh::refine::refine_rgb;
use rgbmesh::svg::{render_svg, RenderOptions};
use rgbmesh::{build_edge_topology, samples};

#[derive(Parser)]
#[command(name = "rgbmesh", version, about = "RGB refinement and history-free coarsening for 2D triangle meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refine marked elements once.
    Refine {
        #[arg(long, value_name = "DIR")]
        mesh: PathBuf,
        /// all | circle:cx,cy,r | points:FILE
        #[arg(long)]
        mark: String,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Coarsen at marked nodes once.
    Coarsen {
        #[arg(long, value_name = "DIR")]
        mesh: PathBuf,
        /// all | points:FILE
        #[arg(long)]
        mark: String,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Coarsen everything repeatedly until the initial mesh is recovered.
    Recover {
        #[arg(long, value_name = "DIR")]
        mesh: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
    /// Print a quality report as JSON; non-zero exit on failed checks.
    Check {
        #[arg(long, value_name = "DIR")]
        mesh: PathBuf,
        #[arg(long)]
        weak_bdd: bool,
        #[arg(long)]
        similarity: bool,
    },
    /// Moving-circle interplay demo on the built-in two-square strip.
    DemoCircle {
        #[arg(long, default_value_t = 100)]
        nmin: usize,
        #[arg(long, default_value_t = 10000)]
        nmax: usize,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Refinement/coarsening ratio tables as CSV.
    Ratios {
        #[arg(long, value_name = "DIR")]
        mesh: PathBuf,
        #[arg(long, default_value_t = 10)]
        levels: usize,
    },
    /// Coarsening wall-time over mesh sizes as CSV.
    Bench {
        /// Comma-separated node counts, e.g. 1e3,1e4,1e5
        #[arg(long, default_value = "1e3,4e3,1.6e4")]
        sizes: String,
        #[arg(long, default_value_t = 20)]
        repeat: usize,
    },
    /// Render a mesh as SVG.
    Render {
        #[arg(long, value_name = "DIR")]
        mesh: PathBuf,
        #[arg(long, value_name = "FILE")]
        svg: PathBuf,
        /// Comma-separated overlays: ref,middles,newest
        #[arg(long, default_value = "")]
        overlay: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Refine { mesh, mark, out } => {
            let input = load(&mesh)?;
            let marked = parse_element_marks(&input, &mark, true)?;
            let refined = refine_rgb(&input, &marked)?;
            write_dat(&refined, &out)?;
            println!(
                "refined {} -> {} elements, {} -> {} nodes",
                input.n_elements(),
                refined.n_elements(),
                input.n_nodes(),
                refined.n_nodes()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Coarsen { mesh, mark, out } => {
            let input = load(&mesh)?;
            let coarsened = match parse_coarsen_marks(&input, &mark)? {
                CoarsenMarks::AllNodes => {
                    let all: BTreeSet<usize> = (0..input.n_nodes()).collect();
                    coarsen_rgb(&input, &all)?
                }
                CoarsenMarks::Elements(elems) => coarsen_marked_elements(&input, &elems)?,
            };
            write_dat(&coarsened, &out)?;
            println!(
                "coarsened {} -> {} elements, {} -> {} nodes",
                input.n_elements(),
                coarsened.n_elements(),
                input.n_nodes(),
                coarsened.n_nodes()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Recover {
            mesh,
            out,
            max_steps,
        } => {
            let input = load(&mesh)?;
            let (recovered, steps) = coarsen_to_initial_capped(&input, max_steps)?;
            write_dat(&recovered, &out)?;
            println!("M = {steps}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            mesh,
            weak_bdd,
            similarity,
        } => {
            let input = load(&mesh)?;
            let topo = weak_bdd.then(|| build_edge_topology(&input)).transpose()?;

            // Similarity classes are judged against the recovered initial
            // triangulation.
            let recovered = if similarity {
                let cap = input.n_nodes().saturating_sub(input.n_initial()) + 1;
                Some(coarsen_to_initial_capped(&input, cap).context("similarity check needs a recoverable mesh")?)
            } else {
                None
            };
            let prov = recovered
                .as_ref()
                .map(|(initial, _)| provenance_by_containment(&input, initial));
            let similarity_input = match (&recovered, &prov) {
                (Some((initial, _)), Some(p)) => Some((initial, p.as_slice())),
                _ => None,
            };

            let report = quality_report(&input, topo.as_ref(), similarity_input);
            println!("{}", serde_json::to_string_pretty(&report)?);

            let mut ok = report.conforming && report.all_areas_positive;
            if weak_bdd {
                ok &= report.weak_bdd == Some(true);
            }
            if similarity {
                ok &= report
                    .similarity_classes_per_initial_element
                    .as_ref()
                    .is_some_and(|counts| counts.iter().all(|&c| c <= 4));
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::DemoCircle {
            nmin,
            nmax,
            steps,
            out,
        } => {
            if nmin >= nmax {
                bail!("--nmin must be below --nmax");
            }
            let initial = samples::strip_four();
            let trajectory = default_trajectory(steps, 0.25);
            let frames = run_moving_circle(&initial, &trajectory, nmin, nmax)?;
            fs::create_dir_all(&out)?;
            let opts = RenderOptions::default();
            for (k, frame) in frames.iter().enumerate() {
                let svg = render_svg(&frame.refined, &opts);
                fs::write(out.join(format!("step{k:02}_refined.svg")), svg)?;
                let svg = render_svg(&frame.coarsened, &opts);
                fs::write(out.join(format!("step{k:02}_coarsened.svg")), svg)?;
                write_dat(&frame.coarsened, &out.join(format!("step{k:02}")))?;
                println!(
                    "t{}: center ({:.3}, {:.3}) refined {} nodes, coarsened {} nodes",
                    k + 1,
                    frame.circle.center[0],
                    frame.circle.center[1],
                    frame.refined.n_nodes(),
                    frame.coarsened.n_nodes()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ratios { mesh, levels } => {
            let input = load(&mesh)?;
            let circle = default_ratio_circle();
            let (refine_table, coarsen_table, _steps) =
                run_ratio_experiment(&input, &circle, levels)?;
            println!("phase,step,elements,nodes,rho_elem,rho_coord");
            print_table("refine", &refine_table);
            print_table("coarsen", &coarsen_table);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { sizes, repeat } => {
            let sizes = parse_sizes(&sizes)?;
            let rows = run_scalability(&samples::strip_four(), &sizes, repeat)?;
            println!("target_nodes,nodes,elements,mean_seconds");
            for row in rows {
                println!(
                    "{},{},{},{:.6}",
                    row.target_nodes, row.nodes, row.elements, row.mean_seconds
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { mesh, svg, overlay } => {
            let input = load(&mesh)?;
            let mut opts = RenderOptions::default();
            for item in overlay.split(',').filter(|s| !s.is_empty()) {
                match item {
                    "ref" => opts.reference_edges = true,
                    "middles" => opts.red_middles = true,
                    "newest" => opts.newest_nodes = true,
                    other => bail!("unknown overlay {other:?} (expected ref, middles, newest)"),
                }
            }
            fs::write(&svg, render_svg(&input, &opts))?;
            println!("wrote {}", svg.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(dir: &Path) -> Result<Mesh> {
    read_dat(dir).with_context(|| format!("reading mesh bundle {}", dir.display()))
}

enum CoarsenMarks {
    AllNodes,
    Elements(Vec<usize>),
}

fn parse_element_marks(mesh: &Mesh, spec: &str, allow_circle: bool) -> Result<Vec<usize>> {
    if spec == "all" {
        return Ok((0..mesh.n_elements()).collect());
    }
    if let Some(rest) = spec.strip_prefix("circle:") {
        if !allow_circle {
            bail!("circle marking is only available for refine");
        }
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            bail!("expected circle:cx,cy,r");
        }
        let cx: f64 = parts[0].trim().parse()?;
        let cy: f64 = parts[1].trim().parse()?;
        let r: f64 = parts[2].trim().parse()?;
        if r <= 0.0 {
            bail!("circle radius must be positive");
        }
        return Ok(mark_circle(mesh, &Circle::new([cx, cy], r), 0.0));
    }
    if let Some(file) = spec.strip_prefix("points:") {
        let points = read_points(Path::new(file))?;
        return Ok(point_to_element(mesh, &points));
    }
    bail!("unknown mark spec {spec:?}");
}

fn parse_coarsen_marks(mesh: &Mesh, spec: &str) -> Result<CoarsenMarks> {
    if spec == "all" {
        return Ok(CoarsenMarks::AllNodes);
    }
    if spec.starts_with("points:") {
        return Ok(CoarsenMarks::Elements(parse_element_marks(
            mesh, spec, false,
        )?));
    }
    bail!("unknown mark spec {spec:?} (expected all or points:FILE)");
}

fn read_points(path: &Path) -> Result<Vec<[f64; 2]>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading points {}", path.display()))?;
    let mut points = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let x: f64 = it.next().context("missing x")?.parse()?;
        let y: f64 = it.next().context("missing y")?.parse()?;
        points.push([x, y]);
    }
    Ok(points)
}

fn parse_sizes(spec: &str) -> Result<Vec<usize>> {
    let mut sizes = Vec::new();
    for part in spec.split(',') {
        let value: f64 = part.trim().parse().context("bad size")?;
        if value < 1.0 {
            bail!("sizes must be at least 1");
        }
        sizes.push(value as usize);
    }
    Ok(sizes)
}

fn print_table(phase: &str, table: &RatioTable) {
    for row in &table.rows {
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
        println!(
            "{phase},{},{},{},{},{}",
            row.step,
            row.elements,
            row.nodes,
            fmt(row.rho_elem),
            fmt(row.rho_coord)
        );
    }
    println!(
        "{phase}-geomean,,,,{:.4},{:.4}",
        table.geomean_elem, table.geomean_coord
    );
}
