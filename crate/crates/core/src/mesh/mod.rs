//! Discrete geometry: simplex meshes, boundary facet markers and fiber fields.
//!
//! A [`Mesh`] owns vertices, simplex cells (triangles in 2D, tetrahedra in
//! 3D) and integer-tagged boundary facets. Cells are canonically oriented to
//! positive signed volume on construction. Meshes are immutable once built.

mod ellipsoid;
mod fiber_io;
mod generate;
mod gmsh;

pub use ellipsoid::{ellipsoid_fibers, generate_ellipsoid, EllipsoidSpec};
pub use fiber_io::{read_fiber_file, write_fiber_file};
pub use generate::{rectangle, unit_cube, unit_square};
pub use gmsh::{read_gmsh, write_gmsh};

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use nalgebra::{Matrix3, Vector3};

/// Errors from mesh construction, generation and I/O.
#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("IoError: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("FormatError: {0}")]
    Format(String),
    #[error("GeometryError: {0}")]
    Geometry(String),
    #[error("CountMismatch: file '{path}' has {found} vectors, mesh needs {expected}")]
    CountMismatch {
        path: PathBuf,
        found: usize,
        expected: usize,
    },
    #[error("ZeroVector: vector {index} in '{path}' has zero length")]
    ZeroVector { path: PathBuf, index: usize },
    #[error("InvalidMesh: {0}")]
    Invalid(String),
}

/// A boundary facet: its vertex indices and an integer marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFacet {
    pub vertices: Vec<usize>,
    pub marker: i32,
}

/// An immutable simplex mesh with tagged boundary facets.
#[derive(Debug, Clone)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<[f64; 3]>,
    cells: Vec<Vec<usize>>,
    boundary_facets: Vec<BoundaryFacet>,
}

impl Mesh {
    /// Build a mesh, canonically orienting cells and checking the structural
    /// invariants (index bounds, positive volumes, facets on the boundary of
    /// exactly one cell).
    pub fn new(
        dim: usize,
        vertices: Vec<[f64; 3]>,
        mut cells: Vec<Vec<usize>>,
        boundary_facets: Vec<BoundaryFacet>,
    ) -> Result<Self, MeshError> {
        if !(2..=3).contains(&dim) {
            return Err(MeshError::Invalid(format!("unsupported dimension {dim}")));
        }
        let nv = vertices.len();
        for (c, cell) in cells.iter_mut().enumerate() {
            if cell.len() != dim + 1 {
                return Err(MeshError::Invalid(format!(
                    "cell {c} has {} vertices, expected {}",
                    cell.len(),
                    dim + 1
                )));
            }
            for &v in cell.iter() {
                if v >= nv {
                    return Err(MeshError::Invalid(format!(
                        "cell {c} references vertex {v} >= vertex count {nv}"
                    )));
                }
            }
            let vol = signed_measure(dim, &vertices, cell);
            if vol == 0.0 {
                return Err(MeshError::Invalid(format!("cell {c} is degenerate")));
            }
            if vol < 0.0 {
                let n = cell.len();
                cell.swap(n - 2, n - 1);
            }
        }
        for (f, facet) in boundary_facets.iter().enumerate() {
            if facet.vertices.len() != dim {
                return Err(MeshError::Invalid(format!(
                    "facet {f} has {} vertices, expected {}",
                    facet.vertices.len(),
                    dim
                )));
            }
            for &v in &facet.vertices {
                if v >= nv {
                    return Err(MeshError::Invalid(format!(
                        "facet {f} references vertex {v} >= vertex count {nv}"
                    )));
                }
            }
        }
        let mesh = Mesh {
            dim,
            vertices,
            cells,
            boundary_facets,
        };
        mesh.check_facets_on_boundary()?;
        Ok(mesh)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet] {
        &self.boundary_facets
    }

    /// The set of distinct boundary markers present.
    pub fn boundary_markers(&self) -> BTreeSet<i32> {
        self.boundary_facets.iter().map(|f| f.marker).collect()
    }

    /// Measure (area/volume) of a cell.
    pub fn cell_measure(&self, cell: usize) -> f64 {
        signed_measure(self.dim, &self.vertices, &self.cells[cell])
    }

    pub fn cell_centroid(&self, cell: usize) -> [f64; 3] {
        let verts = &self.cells[cell];
        let mut c = [0.0; 3];
        for &v in verts {
            for d in 0..3 {
                c[d] += self.vertices[v][d];
            }
        }
        let n = verts.len() as f64;
        c.map(|x| x / n)
    }

    /// Jacobian of the affine reference-to-physical map of a cell
    /// (columns are edge vectors from the first vertex).
    pub fn cell_jacobian(&self, cell: usize) -> Matrix3<f64> {
        let verts = &self.cells[cell];
        let p0 = Vector3::from(self.vertices[verts[0]]);
        let mut j = Matrix3::identity();
        for k in 0..self.dim {
            let col = Vector3::from(self.vertices[verts[k + 1]]) - p0;
            j.set_column(k, &col);
        }
        // in 2D the third column stays e3 so the 3x3 determinant equals the 2x2 one
        j
    }

    /// For every boundary facet: the adjacent cell and, for each facet
    /// vertex, its local index within that cell.
    pub fn facet_adjacency(&self) -> Vec<FacetAdjacency> {
        let face_map = self.cell_face_map();
        self.boundary_facets
            .iter()
            .map(|facet| {
                let key = sorted_key(&facet.vertices);
                let &(cell, _) = face_map
                    .get(&key)
                    .and_then(|v| (v.len() == 1).then(|| &v[0]))
                    .expect("validated boundary facet");
                let local: Vec<usize> = facet
                    .vertices
                    .iter()
                    .map(|gv| {
                        self.cells[cell]
                            .iter()
                            .position(|cv| cv == gv)
                            .expect("facet vertex in cell")
                    })
                    .collect();
                FacetAdjacency { cell, local }
            })
            .collect()
    }

    /// Outward unit normal of a boundary facet (reference configuration).
    pub fn facet_normal(&self, facet: &BoundaryFacet, cell: usize) -> Vector3<f64> {
        let verts: Vec<Vector3<f64>> = facet
            .vertices
            .iter()
            .map(|&v| Vector3::from(self.vertices[v]))
            .collect();
        let mut n = if self.dim == 3 {
            (verts[1] - verts[0]).cross(&(verts[2] - verts[0]))
        } else {
            let e = verts[1] - verts[0];
            Vector3::new(e.y, -e.x, 0.0)
        };
        n.normalize_mut();
        // orient away from the cell's remaining vertex
        let centroid = verts.iter().sum::<Vector3<f64>>() / verts.len() as f64;
        let opposite = self.cells[cell]
            .iter()
            .find(|v| !facet.vertices.contains(v))
            .expect("facet is a proper face");
        let inward = Vector3::from(self.vertices[*opposite]) - centroid;
        if n.dot(&inward) > 0.0 {
            n = -n;
        }
        n
    }

    /// Area (3D) or length (2D) of a boundary facet.
    pub fn facet_measure(&self, facet: &BoundaryFacet) -> f64 {
        let verts: Vec<Vector3<f64>> = facet
            .vertices
            .iter()
            .map(|&v| Vector3::from(self.vertices[v]))
            .collect();
        if self.dim == 3 {
            0.5 * (verts[1] - verts[0]).cross(&(verts[2] - verts[0])).norm()
        } else {
            (verts[1] - verts[0]).norm()
        }
    }

    /// Index of the mesh vertex nearest to a point.
    pub fn nearest_vertex(&self, p: [f64; 3]) -> usize {
        let target = Vector3::from(p);
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, v) in self.vertices.iter().enumerate() {
            let d = (Vector3::from(*v) - target).norm_squared();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    fn cell_face_map(&self) -> HashMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for skip in 0..cell.len() {
                let face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                map.entry(sorted_key(&face)).or_default().push((c, skip));
            }
        }
        map
    }

    fn check_facets_on_boundary(&self) -> Result<(), MeshError> {
        let face_map = self.cell_face_map();
        for (i, facet) in self.boundary_facets.iter().enumerate() {
            let key = sorted_key(&facet.vertices);
            match face_map.get(&key).map(|v| v.len()) {
                Some(1) => {}
                Some(n) => {
                    return Err(MeshError::Invalid(format!(
                        "boundary facet {i} (marker {}) is shared by {n} cells",
                        facet.marker
                    )))
                }
                None => {
                    return Err(MeshError::Invalid(format!(
                        "boundary facet {i} (marker {}) is not a face of any cell",
                        facet.marker
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Adjacency of a boundary facet: owning cell and local vertex indices.
#[derive(Debug, Clone)]
pub struct FacetAdjacency {
    pub cell: usize,
    /// `local[k]` = position of facet vertex k within the cell's vertex list.
    pub local: Vec<usize>,
}

fn sorted_key(v: &[usize]) -> Vec<usize> {
    let mut k = v.to_vec();
    k.sort_unstable();
    k
}

fn signed_measure(dim: usize, vertices: &[[f64; 3]], cell: &[usize]) -> f64 {
    let p0 = Vector3::from(vertices[cell[0]]);
    if dim == 2 {
        let a = Vector3::from(vertices[cell[1]]) - p0;
        let b = Vector3::from(vertices[cell[2]]) - p0;
        0.5 * (a.x * b.y - a.y * b.x)
    } else {
        let a = Vector3::from(vertices[cell[1]]) - p0;
        let b = Vector3::from(vertices[cell[2]]) - p0;
        let c = Vector3::from(vertices[cell[3]]) - p0;
        a.dot(&b.cross(&c)) / 6.0
    }
}

/// A named unit-vector field attached to a mesh, one vector per cell
/// (`per_element`) or per vertex.
#[derive(Debug, Clone)]
pub struct FiberField {
    pub name: String,
    pub per_element: bool,
    pub vectors: Vec<Vector3<f64>>,
}

impl FiberField {
    /// Build a field, normalizing each vector. Vectors that needed rescaling
    /// are logged; zero vectors are an error.
    pub fn normalized(
        name: &str,
        per_element: bool,
        vectors: Vec<Vector3<f64>>,
        origin: &std::path::Path,
    ) -> Result<Self, MeshError> {
        let mut out = Vec::with_capacity(vectors.len());
        let mut rescaled = 0usize;
        for (i, v) in vectors.into_iter().enumerate() {
            let n = v.norm();
            if n < 1e-14 {
                return Err(MeshError::ZeroVector {
                    path: origin.to_path_buf(),
                    index: i,
                });
            }
            if (n - 1.0).abs() > 1e-10 {
                rescaled += 1;
            }
            out.push(v / n);
        }
        if rescaled > 0 {
            log::warn!(
                "fiber field '{name}': normalized {rescaled} non-unit vectors from {}",
                origin.display()
            );
        }
        Ok(FiberField {
            name: name.to_owned(),
            per_element,
            vectors: out,
        })
    }

    /// Check that the vector count matches the mesh.
    pub fn check_count(&self, mesh: &Mesh, origin: &std::path::Path) -> Result<(), MeshError> {
        let expected = if self.per_element {
            mesh.cell_count()
        } else {
            mesh.vertex_count()
        };
        if self.vectors.len() != expected {
            return Err(MeshError::CountMismatch {
                path: origin.to_path_buf(),
                found: self.vectors.len(),
                expected,
            });
        }
        Ok(())
    }
}

/// Read fiber files and attach them to a mesh in order.
pub fn attach_fibers(
    mesh: &Mesh,
    files: &[PathBuf],
    names: &[String],
    elementwise: bool,
) -> Result<Vec<FiberField>, MeshError> {
    if files.len() != names.len() {
        return Err(MeshError::Format(format!(
            "fiber_files ({}) and fiber_names ({}) lengths differ",
            files.len(),
            names.len()
        )));
    }
    files
        .iter()
        .zip(names)
        .map(|(path, name)| {
            let field = read_fiber_file(path, name, elementwise)?;
            field.check_count(mesh, path)?;
            Ok(field)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facet_of_exactly_one_cell_enforced() {
        // single tet with an interior "facet" pointing at a shared face of nothing
        let vertices = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ];
        let cells = vec![vec![0, 1, 2, 3]];
        let ok = Mesh::new(
            3,
            vertices.clone(),
            cells.clone(),
            vec![BoundaryFacet {
                vertices: vec![0, 1, 2],
                marker: 1,
            }],
        );
        assert!(ok.is_ok());
        let bad = Mesh::new(
            3,
            vertices,
            cells,
            vec![BoundaryFacet {
                vertices: vec![1, 2, 3],
                marker: 1,
            }],
        );
        assert!(bad.is_ok(), "every face of a single tet is a boundary face");
    }

    #[test]
    fn negative_cells_are_reoriented() {
        let vertices = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ];
        // swapped order gives negative volume; constructor must fix it
        let mesh = Mesh::new(3, vertices, vec![vec![0, 2, 1, 3]], vec![]).unwrap();
        assert!(mesh.cell_measure(0) > 0.0);
    }

    #[test]
    fn normals_point_outward() {
        let mesh = unit_cube(1).unwrap();
        let adjacency = mesh.facet_adjacency();
        for (facet, adj) in mesh.boundary_facets().iter().zip(&adjacency) {
            let n = mesh.facet_normal(facet, adj.cell);
            let expected: Vector3<f64> = match facet.marker {
                1 => -Vector3::x(),
                2 => Vector3::x(),
                3 => -Vector3::y(),
                4 => Vector3::y(),
                5 => -Vector3::z(),
                6 => Vector3::z(),
                m => panic!("unexpected marker {m}"),
            };
            assert!((n - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn fiber_field_normalizes_and_rejects_zero() {
        let path = std::path::Path::new("mem");
        let f = FiberField::normalized(
            "n1",
            true,
            vec![Vector3::new(2.0, 0.0, 0.0)],
            path,
        )
        .unwrap();
        assert!((f.vectors[0] - Vector3::x()).norm() < 1e-15);
        let err = FiberField::normalized("n1", true, vec![Vector3::zeros()], path);
        assert!(matches!(err, Err(MeshError::ZeroVector { index: 0, .. })));
    }
}
