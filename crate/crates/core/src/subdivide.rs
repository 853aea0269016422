//! Edge subdivision. Squares are quadrisected, cubes split into eight cubes,
//! other polygons only get their boundary edges halved.

use std::collections::BTreeMap;

use crate::complex::{Complex, ComplexError, SignedEdge};

/// Result of [`subdivide_edges`], with the new ids of the old cells.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: Complex,
    /// Old vertex id -> new vertex id (old vertices keep their ids).
    pub midpoint: Vec<usize>,
    /// Old edge -> (first half, second half), both oriented like the old edge.
    pub halves: Vec<(usize, usize)>,
}

fn first_half(halves: &[(usize, usize)], s: SignedEdge) -> SignedEdge {
    let (h0, h1) = halves[s.edge];
    if s.forward {
        SignedEdge::fwd(h0)
    } else {
        SignedEdge::bwd(h1)
    }
}

fn second_half(halves: &[(usize, usize)], s: SignedEdge) -> SignedEdge {
    let (h0, h1) = halves[s.edge];
    if s.forward {
        SignedEdge::fwd(h1)
    } else {
        SignedEdge::bwd(h0)
    }
}

/// Splits every edge at a midpoint and subdivides higher cells compatibly.
/// Cubes must have eight distinct corners.
pub fn subdivide_edges(c: &Complex) -> Result<Subdivision, ComplexError> {
    let mut out = Complex::new();
    for v in 0..c.num_vertices() {
        out.add_vertex(c.vertex_label(v).to_string());
    }
    let mut midpoint = Vec::with_capacity(c.num_edges());
    let mut halves = Vec::with_capacity(c.num_edges());
    for (i, e) in c.edges().iter().enumerate() {
        let m = out.add_vertex(format!("mid({})", label_or_id(&e.label, "e", i)));
        let h0 = out.add_edge(e.src, m, format!("{}.0", label_or_id(&e.label, "e", i)))?;
        let h1 = out.add_edge(m, e.dst, format!("{}.1", label_or_id(&e.label, "e", i)))?;
        midpoint.push(m);
        halves.push((h0, h1));
    }

    // square id -> (center, spokes to each boundary midpoint, quarter pieces by corner)
    let mut square_center: BTreeMap<usize, usize> = BTreeMap::new();
    let mut spokes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut pieces: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (f, face) in c.faces().iter().enumerate() {
        let name = label_or_id(&face.label, "f", f);
        let b = &face.boundary;
        if b.len() != 4 {
            let nb: Vec<SignedEdge> = b
                .iter()
                .flat_map(|&s| [first_half(&halves, s), second_half(&halves, s)])
                .collect();
            out.add_face(nb, face.label.clone())?;
            continue;
        }
        let center = out.add_vertex(format!("ctr({name})"));
        let sp: Vec<usize> = (0..4)
            .map(|j| out.add_edge(center, midpoint[b[j].edge], format!("{name}.spoke{j}")))
            .collect::<Result<_, _>>()?;
        let mut ps = Vec::with_capacity(4);
        for k in 0..4 {
            let prev = (k + 3) % 4;
            let boundary = vec![
                second_half(&halves, b[prev]),
                first_half(&halves, b[k]),
                SignedEdge::bwd(sp[k]),
                SignedEdge::fwd(sp[prev]),
            ];
            ps.push(out.add_face(boundary, format!("{name}.q{k}"))?);
        }
        square_center.insert(f, center);
        spokes.insert(f, sp);
        pieces.insert(f, ps);
    }

    for (k, cube) in c.cubes().iter().enumerate() {
        let name = label_or_id(&cube.label, "c", k);
        let corners = c.cube_vertices(k);
        if corners.len() != 8 {
            return Err(ComplexError::Unsupported(format!(
                "cube {name} has {} distinct corners; need 8",
                corners.len()
            )));
        }
        let center = out.add_vertex(format!("ctr({name})"));
        let mut cube_spoke = BTreeMap::new();
        for &f in &cube.faces {
            let s = out.add_edge(square_center[&f], center, format!("{name}.spoke.f{f}"))?;
            cube_spoke.insert(f, s);
        }
        // internal square through each cube edge
        let mut internal = BTreeMap::new();
        for e in c.cube_edges(k) {
            let owners: Vec<(usize, usize)> = cube
                .faces
                .iter()
                .flat_map(|&f| {
                    c.face(f)
                        .boundary
                        .iter()
                        .enumerate()
                        .filter(move |(_, s)| s.edge == e)
                        .map(move |(j, _)| (f, j))
                })
                .collect();
            if owners.len() != 2 {
                return Err(ComplexError::BadCube(name.clone()));
            }
            let (f1, j1) = owners[0];
            let (f2, j2) = owners[1];
            let boundary = vec![
                SignedEdge::bwd(spokes[&f1][j1]),
                SignedEdge::fwd(cube_spoke[&f1]),
                SignedEdge::bwd(cube_spoke[&f2]),
                SignedEdge::fwd(spokes[&f2][j2]),
            ];
            internal.insert(e, out.add_face(boundary, format!("{name}.int{e}"))?);
        }
        for &x in &corners {
            let mut fs = Vec::with_capacity(6);
            for &f in &cube.faces {
                let cs = c.face_corners(f);
                if let Some(pos) = cs.iter().position(|&v| v == x) {
                    fs.push(pieces[&f][pos]);
                }
            }
            for e in c.cube_edges(k) {
                let ed = c.edge(e);
                if ed.src == x || ed.dst == x {
                    fs.push(internal[&e]);
                }
            }
            let arr: [usize; 6] = fs
                .try_into()
                .map_err(|_| ComplexError::BadCube(format!("{name}: corner {x}")))?;
            out.add_cube(arr, format!("{name}.at{x}"))?;
        }
    }
    Ok(Subdivision {
        complex: out,
        midpoint,
        halves,
    })
}

fn label_or_id(label: &str, prefix: &str, id: usize) -> String {
    if label.is_empty() {
        format!("{prefix}{id}")
    } else {
        label.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{graph_power, theta_graph};

    #[test]
    fn theta_subdivides_to_six_vertices_eight_edges() {
        let s = subdivide_edges(&theta_graph()).unwrap();
        assert_eq!(s.complex.num_vertices(), 6);
        assert_eq!(s.complex.num_edges(), 8);
    }

    #[test]
    fn single_square_quadrisects() {
        let sq = crate::complex::tests::unit_square();
        let s = subdivide_edges(&sq).unwrap().complex;
        assert_eq!((s.num_vertices(), s.num_edges(), s.num_faces()), (9, 12, 4));
        assert_eq!(s.euler_characteristic(), sq.euler_characteristic());
    }

    #[test]
    fn subdivided_cube_power_matches_power_of_subdivision() {
        let theta = theta_graph();
        let cube3 = graph_power(&theta, 3).unwrap();
        let sd = subdivide_edges(&cube3.complex).unwrap().complex;
        let direct = graph_power(&subdivide_edges(&theta).unwrap().complex, 3).unwrap();
        assert_eq!(sd.counts(), direct.complex.counts());
        assert_eq!(sd.euler_characteristic(), cube3.complex.euler_characteristic());
    }

    #[test]
    fn euler_characteristic_is_preserved() {
        let theta = theta_graph();
        for n in 1..=3 {
            let p = graph_power(&theta, n).unwrap();
            let s = subdivide_edges(&p.complex).unwrap();
            assert_eq!(s.complex.euler_characteristic(), p.complex.euler_characteristic());
        }
    }
}
