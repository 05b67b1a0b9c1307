//! Structured simplex meshes of boxes, used for tests and small studies.
//!
//! Cubes use the Kuhn 6-tet split, which is conforming across a structured
//! grid because every face diagonal runs from the lexicographically smallest
//! to the largest local corner. Face markers: x=0 -> 1, x=1 -> 2, y=0 -> 3,
//! y=1 -> 4, z=0 -> 5, z=1 -> 6.

use super::{BoundaryFacet, Mesh, MeshError};

/// Structured triangle mesh of an axis-aligned rectangle, `nx` by `ny`
/// squares each split into two triangles.
pub fn rectangle(
    nx: usize,
    ny: usize,
    extent: [[f64; 2]; 2],
) -> Result<Mesh, MeshError> {
    assert!(nx >= 1 && ny >= 1);
    let [xr, yr] = extent;
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let x = xr[0] + (xr[1] - xr[0]) * i as f64 / nx as f64;
            let y = yr[0] + (yr[1] - yr[0]) * j as f64 / ny as f64;
            vertices.push([x, y, 0.0]);
        }
    }
    let mut cells = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let v00 = idx(i, j);
            let v10 = idx(i + 1, j);
            let v01 = idx(i, j + 1);
            let v11 = idx(i + 1, j + 1);
            // split along the v00-v11 diagonal
            cells.push(vec![v00, v10, v11]);
            cells.push(vec![v00, v11, v01]);
        }
    }
    let mut facets = Vec::new();
    for j in 0..ny {
        facets.push(BoundaryFacet {
            vertices: vec![idx(0, j), idx(0, j + 1)],
            marker: 1,
        });
        facets.push(BoundaryFacet {
            vertices: vec![idx(nx, j), idx(nx, j + 1)],
            marker: 2,
        });
    }
    for i in 0..nx {
        facets.push(BoundaryFacet {
            vertices: vec![idx(i, 0), idx(i + 1, 0)],
            marker: 3,
        });
        facets.push(BoundaryFacet {
            vertices: vec![idx(i, ny), idx(i + 1, ny)],
            marker: 4,
        });
    }
    Mesh::new(2, vertices, cells, facets)
}

/// Structured triangle mesh of the unit square with 2*n^2 cells.
pub fn unit_square(n: usize) -> Result<Mesh, MeshError> {
    rectangle(n, n, [[0.0, 1.0], [0.0, 1.0]])
}

/// Structured tetrahedral mesh of the unit cube with 6*n^3 cells.
pub fn unit_cube(n: usize) -> Result<Mesh, MeshError> {
    assert!(n >= 1);
    let np = n + 1;
    let idx = |i: usize, j: usize, k: usize| (k * np + j) * np + i;
    let mut vertices = Vec::with_capacity(np * np * np);
    for k in 0..np {
        for j in 0..np {
            for i in 0..np {
                vertices.push([
                    i as f64 / n as f64,
                    j as f64 / n as f64,
                    k as f64 / n as f64,
                ]);
            }
        }
    }
    let mut cells = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let corner = |d: [usize; 3]| idx(i + d[0], j + d[1], k + d[2]);
                for tet in kuhn_tets() {
                    cells.push(tet.iter().map(|&d| corner(d)).collect());
                }
            }
        }
    }
    let mut facets = Vec::new();
    // each boundary quad is split along its min-to-max corner diagonal,
    // matching the Kuhn interior split
    let mut quad = |a: usize, b: usize, c: usize, d: usize, marker: i32| {
        // a = min corner, d = max corner of the quad in grid order
        facets.push(BoundaryFacet {
            vertices: vec![a, b, d],
            marker,
        });
        facets.push(BoundaryFacet {
            vertices: vec![a, d, c],
            marker,
        });
    };
    for u in 0..n {
        for v in 0..n {
            quad(idx(0, u, v), idx(0, u + 1, v), idx(0, u, v + 1), idx(0, u + 1, v + 1), 1);
            quad(idx(n, u, v), idx(n, u + 1, v), idx(n, u, v + 1), idx(n, u + 1, v + 1), 2);
            quad(idx(u, 0, v), idx(u + 1, 0, v), idx(u, 0, v + 1), idx(u + 1, 0, v + 1), 3);
            quad(idx(u, n, v), idx(u + 1, n, v), idx(u, n, v + 1), idx(u + 1, n, v + 1), 4);
            quad(idx(u, v, 0), idx(u + 1, v, 0), idx(u, v + 1, 0), idx(u + 1, v + 1, 0), 5);
            quad(idx(u, v, n), idx(u + 1, v, n), idx(u, v + 1, n), idx(u + 1, v + 1, n), 6);
        }
    }
    Mesh::new(3, vertices, cells, facets)
}

/// The 6 tetrahedra of the Kuhn split of the unit cube, as 0/1 offsets.
/// Each tet follows a monotone lattice path from (0,0,0) to (1,1,1).
fn kuhn_tets() -> [[[usize; 3]; 4]; 6] {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut tets = [[[0usize; 3]; 4]; 6];
    for (t, perm) in PERMS.iter().enumerate() {
        let mut p = [0usize; 3];
        tets[t][0] = p;
        for (step, &axis) in perm.iter().enumerate() {
            p[axis] = 1;
            tets[t][step + 1] = p;
        }
    }
    tets
}
