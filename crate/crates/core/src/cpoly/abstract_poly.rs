use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// Oriented cellular decomposition of the sphere given by its faces. The
/// cyclic order of each face carries the orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractPolyhedron {
    pub names: Vec<String>,
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum AbstractIssue {
    FaceTooSmall { face: usize },
    VertexOutOfRange { face: usize, vertex: usize },
    RepeatedVertex { face: usize, vertex: usize },
    /// The oriented edge occurs in more than one face.
    RepeatedOrientedEdge { u: usize, v: usize },
    /// The edge is not shared by exactly two faces with opposite directions.
    UnpairedEdge { u: usize, v: usize },
    FacesShareSeveralEdges { f: usize, g: usize },
    LowDegree { vertex: usize, degree: usize },
    UnusedVertex { vertex: usize },
    EulerCharacteristic { chi: i64 },
    Disconnected,
}

impl AbstractPolyhedron {
    /// Polyhedron with vertices named by their indices.
    pub fn from_faces(n: usize, faces: Vec<Vec<usize>>) -> AbstractPolyhedron {
        AbstractPolyhedron { names: (0..n).map(|i| i.to_string()).collect(), faces }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn oriented_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.faces.iter().enumerate().flat_map(|(f, face)| {
            let n = face.len();
            (0..n).map(move |i| (face[i], face[(i + 1) % n], f))
        })
    }

    /// Map from oriented edge `(u, v)` to the face traversing it.
    pub fn edge_face_map(&self) -> BTreeMap<(usize, usize), usize> {
        self.oriented_edges().map(|(u, v, f)| ((u, v), f)).collect()
    }

    /// Unordered edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self.oriented_edges().map(|(u, v, _)| (u.min(v), u.max(v))).collect();
        set.into_iter().collect()
    }

    /// The faces `(f, g)` on either side of edge `u v`: `f` traverses
    /// `u -> v` and `g` traverses `v -> u`.
    pub fn edge_faces(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        let m = self.edge_face_map();
        Some((*m.get(&(u, v))?, *m.get(&(v, u))?))
    }

    /// Faces around `v` in orientation order, each with the neighbor `u`
    /// such that `v u` is the edge shared with the next face.
    pub fn star(&self, v: usize) -> Vec<(usize, usize)> {
        let m = self.edge_face_map();
        let start = match self.faces.iter().position(|f| f.contains(&v)) {
            Some(f) => f,
            None => return Vec::new(),
        };
        let mut out = Vec::new();
        let mut f = start;
        loop {
            let face = &self.faces[f];
            let i = face.iter().position(|&x| x == v).unwrap();
            let u = face[(i + face.len() - 1) % face.len()];
            out.push((f, u));
            match m.get(&(v, u)) {
                Some(&g) if g != start && out.len() <= self.faces.len() => f = g,
                _ => break,
            }
        }
        let k = (0..out.len()).min_by_key(|&i| out[i].0).unwrap_or(0);
        out.rotate_left(k);
        out
    }

    /// Whether faces `f` and `g` share an edge.
    pub fn adjacent_faces(&self, f: usize, g: usize) -> Option<(usize, usize)> {
        if f == g {
            return None;
        }
        let a = &self.faces[f];
        (0..a.len()).map(|i| (a[i], a[(i + 1) % a.len()])).find(|&(u, v)| {
            let b = &self.faces[g];
            (0..b.len()).any(|j| b[j] == v && b[(j + 1) % b.len()] == u)
        })
    }

    /// Every violation of the polyhedron conditions.
    pub fn validate(&self) -> Vec<AbstractIssue> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for (f, face) in self.faces.iter().enumerate() {
            if face.len() < 3 {
                out.push(AbstractIssue::FaceTooSmall { face: f });
            }
            let mut seen = BTreeSet::new();
            for &v in face {
                if v >= n {
                    out.push(AbstractIssue::VertexOutOfRange { face: f, vertex: v });
                } else if !seen.insert(v) {
                    out.push(AbstractIssue::RepeatedVertex { face: f, vertex: v });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut count: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (u, v, f) in self.oriented_edges() {
            count.entry((u, v)).or_default().push(f);
        }
        for (&(u, v), fs) in &count {
            if fs.len() > 1 {
                out.push(AbstractIssue::RepeatedOrientedEdge { u, v });
            }
            if !count.contains_key(&(v, u)) {
                out.push(AbstractIssue::UnpairedEdge { u: u.min(v), v: u.max(v) });
            }
        }
        let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (u, v, f) in self.oriented_edges() {
            if let Some(g) = count.get(&(v, u)).and_then(|g| g.first()) {
                if f < *g {
                    *shared.entry((f, *g)).or_default() += 1;
                }
            }
        }
        for (&(f, g), &k) in &shared {
            if k > 1 {
                out.push(AbstractIssue::FacesShareSeveralEdges { f, g });
            }
        }
        let mut degree = vec![0usize; n];
        for face in &self.faces {
            for &v in face {
                degree[v] += 1;
            }
        }
        for (v, &d) in degree.iter().enumerate() {
            if d == 0 {
                out.push(AbstractIssue::UnusedVertex { vertex: v });
            } else if d < 3 {
                out.push(AbstractIssue::LowDegree { vertex: v, degree: d });
            }
        }
        let chi = n as i64 - self.edges().len() as i64 + self.faces.len() as i64;
        if chi != 2 {
            out.push(AbstractIssue::EulerCharacteristic { chi });
        }
        if !self.faces_connected() {
            out.push(AbstractIssue::Disconnected);
        }
        out
    }

    fn faces_connected(&self) -> bool {
        if self.faces.is_empty() {
            return false;
        }
        let m = self.edge_face_map();
        let mut seen = vec![false; self.faces.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(f) = stack.pop() {
            let face = &self.faces[f];
            for i in 0..face.len() {
                if let Some(&g) = m.get(&(face[(i + 1) % face.len()], face[i])) {
                    if !seen[g] {
                        seen[g] = true;
                        stack.push(g);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Cube combinatorics; vertex `i` sits at the corner given by the bits of `i`.
pub fn cube() -> AbstractPolyhedron {
    AbstractPolyhedron::from_faces(
        8,
        vec![vec![0, 2, 3, 1], vec![4, 5, 7, 6], vec![0, 1, 5, 4], vec![2, 6, 7, 3], vec![0, 4, 6, 2], vec![1, 3, 7, 5]],
    )
}

/// Octahedron combinatorics on vertices `+x, -x, +y, -y, +z, -z`.
pub fn octahedron() -> AbstractPolyhedron {
    let (px, nx, py, ny, pz, nz) = (0, 1, 2, 3, 4, 5);
    AbstractPolyhedron::from_faces(
        6,
        vec![
            vec![px, py, pz],
            vec![py, nx, pz],
            vec![nx, ny, pz],
            vec![ny, px, pz],
            vec![py, px, nz],
            vec![nx, py, nz],
            vec![ny, nx, nz],
            vec![px, ny, nz],
        ],
    )
}
