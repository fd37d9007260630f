//! Plain-text mesh bundles: `coordinates.dat` (two real columns, with an
//! optional `# n_initial = K` header), `elements.dat` (three 1-based integer
//! columns) and optional `boundary_<name>.dat` files with 1-based node
//! pairs. Indices are converted to 0-based only in memory.

use std::fs;
use std::path::Path;

use crate::error::{MeshError, Result};
use crate::mesh::{BoundaryList, Mesh};

/// In-memory text form of a mesh bundle.
#[derive(Debug, Clone)]
pub struct DatBundle {
    pub coordinates: String,
    pub elements: String,
    pub boundaries: Vec<(String, String)>,
}

impl DatBundle {
    pub fn from_mesh(mesh: &Mesh) -> Self {
        let mut coordinates = format!("# n_initial = {}\n", mesh.n_initial());
        for p in mesh.coordinates() {
            coordinates.push_str(&format!("{} {}\n", p[0], p[1]));
        }
        let mut elements = String::new();
        for e in mesh.elements() {
            elements.push_str(&format!("{} {} {}\n", e[0] + 1, e[1] + 1, e[2] + 1));
        }
        let boundaries = mesh
            .boundaries()
            .iter()
            .map(|list| {
                let mut text = String::new();
                for &[a, b] in &list.edges {
                    text.push_str(&format!("{} {}\n", a + 1, b + 1));
                }
                (list.name.clone(), text)
            })
            .collect();
        Self {
            coordinates,
            elements,
            boundaries,
        }
    }

    pub fn to_mesh(&self) -> Result<Mesh> {
        let mut n_initial = None;
        let mut coordinates = Vec::new();
        for (lineno, raw) in self.coordinates.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(value) = rest.split('=').nth(1) {
                    n_initial = Some(parse_num::<usize>("coordinates.dat", lineno, value.trim())?);
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let x = parse_field::<f64>("coordinates.dat", lineno, it.next())?;
            let y = parse_field::<f64>("coordinates.dat", lineno, it.next())?;
            if it.next().is_some() {
                return Err(parse_err("coordinates.dat", lineno, "expected two columns"));
            }
            coordinates.push([x, y]);
        }

        let mut elements = Vec::new();
        for (lineno, raw) in self.elements.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut row = [0usize; 3];
            for slot in &mut row {
                let v: usize = parse_field("elements.dat", lineno, it.next())?;
                if v == 0 || v > coordinates.len() {
                    return Err(MeshError::BadIndex {
                        context: "elements.dat entry",
                        index: v,
                        len: coordinates.len(),
                    });
                }
                *slot = v - 1;
            }
            if it.next().is_some() {
                return Err(parse_err("elements.dat", lineno, "expected three columns"));
            }
            elements.push(row);
        }

        let mut boundaries = Vec::new();
        for (name, text) in &self.boundaries {
            let file = format!("boundary_{name}.dat");
            let mut edges = Vec::new();
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut it = line.split_whitespace();
                let a: usize = parse_field(&file, lineno, it.next())?;
                let b: usize = parse_field(&file, lineno, it.next())?;
                for v in [a, b] {
                    if v == 0 || v > coordinates.len() {
                        return Err(MeshError::BadIndex {
                            context: "boundary entry",
                            index: v,
                            len: coordinates.len(),
                        });
                    }
                }
                edges.push([a - 1, b - 1]);
            }
            boundaries.push(BoundaryList {
                name: name.clone(),
                edges,
            });
        }

        let n_initial = n_initial.unwrap_or(coordinates.len());
        Mesh::new(coordinates, elements, n_initial, boundaries)
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        let coordinates = fs::read_to_string(dir.join("coordinates.dat"))?;
        let elements = fs::read_to_string(dir.join("elements.dat"))?;
        let mut boundaries = Vec::new();
        let mut names = Vec::new();
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            let Some(stem) = path.file_name().and_then(|s| s.to_str()) else {
                continue;
            };
            if let Some(name) = stem
                .strip_prefix("boundary_")
                .and_then(|s| s.strip_suffix(".dat"))
            {
                names.push(name.to_string());
            }
        }
        names.sort();
        for name in names {
            let text = fs::read_to_string(dir.join(format!("boundary_{name}.dat")))?;
            boundaries.push((name, text));
        }
        Ok(Self {
            coordinates,
            elements,
            boundaries,
        })
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("coordinates.dat"), &self.coordinates)?;
        fs::write(dir.join("elements.dat"), &self.elements)?;
        for (name, text) in &self.boundaries {
            fs::write(dir.join(format!("boundary_{name}.dat")), text)?;
        }
        Ok(())
    }
}

/// Reads a mesh from a bundle directory.
pub fn read_dat(dir: &Path) -> Result<Mesh> {
    DatBundle::read_dir(dir)?.to_mesh()
}

/// Writes a mesh as a bundle directory.
pub fn write_dat(mesh: &Mesh, dir: &Path) -> Result<()> {
    DatBundle::from_mesh(mesh).write_dir(dir)
}

fn parse_field<T: std::str::FromStr>(file: &str, line: usize, field: Option<&str>) -> Result<T> {
    match field {
        Some(text) => parse_num(file, line, text),
        None => Err(parse_err(file, line, "missing column")),
    }
}

fn parse_num<T: std::str::FromStr>(file: &str, line: usize, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| parse_err(file, line, &format!("cannot parse {text:?}")))
}

fn parse_err(file: &str, line: usize, message: &str) -> MeshError {
    MeshError::ParseError {
        file: file.to_string(),
        line: line + 1,
        message: message.to_string(),
    }
}
