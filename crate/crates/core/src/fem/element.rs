//! Reference P1/P2 simplex elements: basis values, gradients and node layout.
//!
//! Nodes are ordered vertices first, then edge midpoints in the fixed edge
//! order given by [`simplex_edges`]. Gradients are with respect to reference
//! coordinates; the physical mapping of a straight simplex is affine, so the
//! push-forward is a constant matrix per cell.

/// Polynomial family of a scalar reference element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    P1,
    P2,
}

/// Fixed local edge list of the reference simplex (vertex index pairs).
pub fn simplex_edges(dim: usize) -> &'static [(usize, usize)] {
    match dim {
        2 => &[(0, 1), (0, 2), (1, 2)],
        3 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        _ => panic!("unsupported simplex dimension {dim}"),
    }
}

/// A scalar reference element on the `dim`-simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReferenceElement {
    pub family: Family,
    pub dim: usize,
}

impl ReferenceElement {
    pub fn new(family: Family, dim: usize) -> Self {
        assert!((2..=3).contains(&dim), "elements support dim 2 and 3");
        ReferenceElement { family, dim }
    }

    /// Number of basis functions (= local nodes).
    pub fn node_count(&self) -> usize {
        let verts = self.dim + 1;
        match self.family {
            Family::P1 => verts,
            Family::P2 => verts + simplex_edges(self.dim).len(),
        }
    }

    pub fn order(&self) -> usize {
        match self.family {
            Family::P1 => 1,
            Family::P2 => 2,
        }
    }

    /// Reference coordinates of each local node.
    pub fn nodes(&self) -> Vec<[f64; 3]> {
        let mut verts = vec![[0.0; 3]; self.dim + 1];
        for d in 0..self.dim {
            verts[d + 1][d] = 1.0;
        }
        let mut nodes = verts.clone();
        if self.family == Family::P2 {
            for &(a, b) in simplex_edges(self.dim) {
                let mut m = [0.0; 3];
                for d in 0..3 {
                    m[d] = 0.5 * (verts[a][d] + verts[b][d]);
                }
                nodes.push(m);
            }
        }
        nodes
    }

    /// Basis values at a reference point.
    pub fn values(&self, xi: [f64; 3]) -> Vec<f64> {
        let lam = self.barycentric(xi);
        match self.family {
            Family::P1 => lam[..=self.dim].to_vec(),
            Family::P2 => {
                let mut v: Vec<f64> =
                    lam[..=self.dim].iter().map(|&l| l * (2.0 * l - 1.0)).collect();
                for &(a, b) in simplex_edges(self.dim) {
                    v.push(4.0 * lam[a] * lam[b]);
                }
                v
            }
        }
    }

    /// Basis gradients (w.r.t. reference coordinates) at a reference point.
    pub fn gradients(&self, xi: [f64; 3]) -> Vec<[f64; 3]> {
        let lam = self.barycentric(xi);
        let glam = self.barycentric_gradients();
        match self.family {
            Family::P1 => glam[..=self.dim].to_vec(),
            Family::P2 => {
                let mut g = Vec::with_capacity(self.node_count());
                for i in 0..=self.dim {
                    let c = 4.0 * lam[i] - 1.0;
                    g.push([c * glam[i][0], c * glam[i][1], c * glam[i][2]]);
                }
                for &(a, b) in simplex_edges(self.dim) {
                    let mut ge = [0.0; 3];
                    for d in 0..3 {
                        ge[d] = 4.0 * (lam[a] * glam[b][d] + lam[b] * glam[a][d]);
                    }
                    g.push(ge);
                }
                g
            }
        }
    }

    /// Tabulate values and gradients at a batch of reference points.
    pub fn tabulate(&self, points: &[[f64; 3]]) -> Tabulation {
        Tabulation {
            values: points.iter().map(|&p| self.values(p)).collect(),
            gradients: points.iter().map(|&p| self.gradients(p)).collect(),
        }
    }

    fn barycentric(&self, xi: [f64; 3]) -> [f64; 4] {
        let mut lam = [0.0; 4];
        let mut sum = 0.0;
        for d in 0..self.dim {
            lam[d + 1] = xi[d];
            sum += xi[d];
        }
        lam[0] = 1.0 - sum;
        lam
    }

    fn barycentric_gradients(&self) -> [[f64; 3]; 4] {
        let mut g = [[0.0; 3]; 4];
        for d in 0..self.dim {
            g[0][d] = -1.0;
            g[d + 1][d] = 1.0;
        }
        g
    }
}

/// Basis values/gradients evaluated at a fixed set of reference points.
#[derive(Debug, Clone)]
pub struct Tabulation {
    /// `values[q][i]` = phi_i at point q.
    pub values: Vec<Vec<f64>>,
    /// `gradients[q][i]` = reference gradient of phi_i at point q.
    pub gradients: Vec<Vec<[f64; 3]>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_tet_barycenter() {
        let el = ReferenceElement::new(Family::P1, 3);
        let v = el.values([0.25, 0.25, 0.25]);
        for &vi in &v {
            assert!((vi - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn kronecker_property_at_nodes() {
        for dim in 2..=3 {
            for family in [Family::P1, Family::P2] {
                let el = ReferenceElement::new(family, dim);
                let nodes = el.nodes();
                for (j, &node) in nodes.iter().enumerate() {
                    let v = el.values(node);
                    for (i, &vi) in v.iter().enumerate() {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (vi - expect).abs() < 1e-14,
                            "{family:?} dim {dim}: phi_{i}(node_{j}) = {vi}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn partition_of_unity_and_gradient_sum() {
        let pts = [
            [0.1, 0.2, 0.3],
            [0.05, 0.9, 0.02],
            [0.3, 0.3, 0.3],
            [0.0, 0.0, 0.0],
            [0.25, 0.25, 0.25],
        ];
        for dim in 2..=3 {
            for family in [Family::P1, Family::P2] {
                let el = ReferenceElement::new(family, dim);
                for &p in &pts {
                    let mut q = p;
                    if dim == 2 {
                        q[2] = 0.0;
                    }
                    let sum: f64 = el.values(q).iter().sum();
                    assert!((sum - 1.0).abs() < 1e-14, "partition of unity");
                    let g = el.gradients(q);
                    for d in 0..3 {
                        let gs: f64 = g.iter().map(|gi| gi[d]).sum();
                        assert!(gs.abs() < 1e-14, "gradients sum to zero");
                    }
                }
            }
        }
    }

    #[test]
    fn node_counts() {
        assert_eq!(ReferenceElement::new(Family::P1, 3).node_count(), 4);
        assert_eq!(ReferenceElement::new(Family::P2, 3).node_count(), 10);
        assert_eq!(ReferenceElement::new(Family::P1, 2).node_count(), 3);
        assert_eq!(ReferenceElement::new(Family::P2, 2).node_count(), 6);
    }
}
