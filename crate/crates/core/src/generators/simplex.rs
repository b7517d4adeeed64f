//! Regular simplices with unit edges.

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexGeometry {
    /// Dimension k; the simplex has k+1 vertices in R^k.
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub circumcenter: Vec<f64>,
    pub circumradius: f64,
    /// Distance from a vertex to the opposite facet.
    pub height: f64,
}

/// sqrt(k / (2(k+1)))
pub fn circumradius(k: usize) -> f64 {
    (k as f64 / (2.0 * (k as f64 + 1.0))).sqrt()
}

/// sqrt((k+1) / (2k))
pub fn height(k: usize) -> f64 {
    ((k as f64 + 1.0) / (2.0 * k as f64)).sqrt()
}

fn centroid(points: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut c = vec![0.0; dim];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let len = points.len().max(1) as f64;
    c.iter_mut().for_each(|x| *x /= len);
    c
}

/// Vertex i sits at height h_i above the centroid of vertices 0..i, along
/// the i-th axis.
pub fn simplex(k: usize) -> SimplexGeometry {
    assert!(k >= 1, "simplex dimension must be at least 1");
    let mut vertices = vec![vec![0.0; k]];
    for i in 1..=k {
        let mut v = centroid(&vertices, k);
        v[i - 1] += height(i);
        vertices.push(v);
    }
    let circumcenter = centroid(&vertices, k);
    SimplexGeometry {
        dimension: k,
        vertices,
        circumcenter,
        circumradius: circumradius(k),
        height: height(k),
    }
}

impl SimplexGeometry {
    /// The centroid of the listed vertices, which is also the circumcenter
    /// of the face they span.
    pub fn face_circumcenter(&self, face: &[usize]) -> Vec<f64> {
        let pts: Vec<Vec<f64>> = face.iter().map(|&i| self.vertices[i].clone()).collect();
        centroid(&pts, self.dimension)
    }
}
