//! Line-based text format:
//!
//! ```text
//! v x y
//! c k v0 v1 v2 [v3] cx cy
//! f v0 v1 kminus kplus|-1
//! ```
//!
//! Floats are written with 17 significant digits so a dump/load cycle is exact.

use super::Mesh;
use crate::error::{HdmError, Result};
use crate::scalar::Real;

use std::fmt::Write as _;
use std::io::{BufRead, Write};

fn float<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

pub fn write_mesh<T: Real, W: Write>(mesh: &Mesh<T>, mut out: W) -> Result<()> {
    let mut buf = String::new();
    for p in &mesh.vertices {
        writeln!(buf, "v {} {}", float(p[0]), float(p[1])).unwrap();
    }
    for (k, c) in mesh.cells.iter().enumerate() {
        write!(buf, "c {k}").unwrap();
        for v in &c.vertices {
            write!(buf, " {v}").unwrap();
        }
        writeln!(buf, " {} {}", float(c.center[0]), float(c.center[1])).unwrap();
    }
    for f in &mesh.faces {
        let plus = f.plus.map_or(-1, |p| p as i64);
        writeln!(buf, "f {} {} {} {}", f.vertices[0], f.vertices[1], f.minus, plus).unwrap();
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn mesh_to_string<T: Real>(mesh: &Mesh<T>) -> String {
    let mut bytes = Vec::new();
    write_mesh(mesh, &mut bytes).expect("writing to memory");
    String::from_utf8(bytes).expect("ascii output")
}

/// Reads a mesh. Faces are rebuilt from the cells and checked against the
/// `f` records, which must agree in count and adjacency.
pub fn read_mesh<T: Real, R: BufRead>(input: R) -> Result<Mesh<T>> {
    let mut vertices = Vec::new();
    let mut cycles = Vec::new();
    let mut centers = Vec::new();
    let mut face_records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let err = |message: &str| HdmError::MeshFormat { line: lineno, message: message.to_string() };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(&tag) = tokens.first() else { continue };
        let parse_f = |s: &str| -> Result<T> {
            s.parse::<f64>().map(T::lit).map_err(|_| err(&format!("bad number {s:?}")))
        };
        let parse_u = |s: &str| -> Result<usize> {
            s.parse::<usize>().map_err(|_| err(&format!("bad index {s:?}")))
        };
        match tag {
            "v" if tokens.len() == 3 => vertices.push([parse_f(tokens[1])?, parse_f(tokens[2])?]),
            "c" if tokens.len() == 7 || tokens.len() == 8 => {
                if parse_u(tokens[1])? != cycles.len() {
                    return Err(err("cells must be numbered consecutively"));
                }
                let nv = tokens.len() - 4;
                let cyc = tokens[2..2 + nv].iter().map(|s| parse_u(s)).collect::<Result<Vec<_>>>()?;
                if cyc.iter().any(|&v| v >= vertices.len()) {
                    return Err(err("cell references an unknown vertex"));
                }
                cycles.push(cyc);
                centers.push([parse_f(tokens[2 + nv])?, parse_f(tokens[3 + nv])?]);
            }
            "f" if tokens.len() == 5 => {
                let plus = match tokens[4] {
                    "-1" => None,
                    s => Some(parse_u(s)?),
                };
                face_records.push(([parse_u(tokens[1])?, parse_u(tokens[2])?], parse_u(tokens[3])?, plus));
            }
            "#" => {}
            _ => return Err(err("unrecognised record")),
        }
    }
    let mesh = Mesh::with_centers(vertices, cycles, centers);
    if face_records.len() != mesh.n_faces() {
        return Err(HdmError::MeshFormat {
            line: 0,
            message: format!("{} face records for {} faces", face_records.len(), mesh.n_faces()),
        });
    }
    for (f, (verts, minus, plus)) in face_records.into_iter().enumerate() {
        let face = &mesh.faces[f];
        let same_edge = {
            let mut a = verts;
            let mut b = face.vertices;
            a.sort_unstable();
            b.sort_unstable();
            a == b
        };
        if !same_edge || face.minus != minus || face.plus != plus {
            return Err(HdmError::MeshFormat {
                line: 0,
                message: format!("face record {f} disagrees with the cell connectivity"),
            });
        }
    }
    Ok(mesh)
}
