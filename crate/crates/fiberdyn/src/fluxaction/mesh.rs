use std::collections::HashMap;
use std::fmt::Write as _;

use crate::{Error, Result, Vec3};

/// Triangulated surface with outward (counter-clockwise) triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl SurfaceMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        for t in &triangles {
            if t.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::InvalidArgument(format!(
                    "triangle {t:?} refers to a missing vertex"
                )));
            }
        }
        Ok(SurfaceMesh {
            vertices,
            triangles,
        })
    }

    /// Every directed edge is matched by its reverse exactly once.
    pub fn is_closed(&self) -> bool {
        let mut edges: HashMap<(usize, usize), i32> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edges.entry((a, b)).or_default() += 1;
            }
        }
        edges
            .iter()
            .all(|(&(a, b), &c)| c == 1 && edges.get(&(b, a)) == Some(&1))
    }

    pub fn flipped(&self) -> Self {
        SurfaceMesh {
            vertices: self.vertices.clone(),
            triangles: self.triangles.iter().map(|t| [t[0], t[2], t[1]]).collect(),
        }
    }

    /// Splits the triangles into those accepted by `pred` and the rest.
    pub fn partition(&self, pred: impl Fn(&[Vec3; 3]) -> bool) -> (SurfaceMesh, SurfaceMesh) {
        let (a, b): (Vec<_>, Vec<_>) = self.triangles.iter().partition(|t| pred(&self.corners(t)));
        (
            SurfaceMesh {
                vertices: self.vertices.clone(),
                triangles: a,
            },
            SurfaceMesh {
                vertices: self.vertices.clone(),
                triangles: b,
            },
        )
    }

    pub fn corners(&self, t: &[usize; 3]) -> [Vec3; 3] {
        [
            self.vertices[t[0]],
            self.vertices[t[1]],
            self.vertices[t[2]],
        ]
    }

    /// Smallest distance from `p` to the surface.
    pub fn distance_to(&self, p: &Vec3) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = self.corners(t);
                (closest_point_on_triangle(p, &a, &b, &c) - p).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn translated(&self, by: &Vec3) -> Self {
        SurfaceMesh {
            vertices: self.vertices.iter().map(|v| v + by).collect(),
            triangles: self.triangles.clone(),
        }
    }

    pub fn to_off(&self) -> String {
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.triangles.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{:.17e} {:.17e} {:.17e}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
        }
        s
    }

    /// Parses OFF text; polygons with more than three corners are fanned.
    pub fn from_off(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let bad = |line: usize, msg: &str| Error::Config {
            line,
            msg: msg.to_string(),
        };
        let (l0, head) = lines.next().ok_or_else(|| bad(1, "empty OFF file"))?;
        let counts_line = if head == "OFF" {
            lines.next().ok_or_else(|| bad(l0, "missing counts"))?
        } else if let Some(rest) = head.strip_prefix("OFF") {
            (l0, rest.trim())
        } else {
            return Err(bad(l0, "expected OFF header"));
        };
        let counts: Vec<usize> = counts_line
            .1
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad(counts_line.0, "invalid count")))
            .collect::<Result<_>>()?;
        if counts.len() < 2 {
            return Err(bad(counts_line.0, "expected vertex and face counts"));
        }
        let mut vertices = Vec::with_capacity(counts[0]);
        for _ in 0..counts[0] {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| bad(counts_line.0, "missing vertex lines"))?;
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| bad(ln, "invalid coordinate")))
                .collect::<Result<_>>()?;
            if v.len() < 3 {
                return Err(bad(ln, "vertex needs three coordinates"));
            }
            vertices.push(Vec3::new(v[0], v[1], v[2]));
        }
        let mut triangles = Vec::with_capacity(counts[1]);
        for _ in 0..counts[1] {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| bad(counts_line.0, "missing face lines"))?;
            let f: Vec<usize> = l
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| bad(ln, "invalid index")))
                .collect::<Result<_>>()?;
            if f.is_empty() || f.len() < f[0] + 1 || f[0] < 3 {
                return Err(bad(ln, "malformed face"));
            }
            for k in 1..f[0] - 1 {
                triangles.push([f[1], f[1 + k], f[2 + k]]);
            }
        }
        SurfaceMesh::new(vertices, triangles)
    }
}

/// Geodesic sphere: icosahedron subdivided `level` times, `20·4^level`
/// triangles, vertices projected onto the sphere.
pub fn icosphere(level: u32, center: Vec3, radius: f64) -> SurfaceMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        for [a, b, c] in tris {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    SurfaceMesh {
        vertices: verts.iter().map(|v| center + v * radius).collect(),
        triangles: tris,
    }
}

fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}
