//! Quadrature rules on reference simplices.
//!
//! Rules are produced for the unit simplex in 1D ([0,1]), 2D (triangle
//! (0,0)-(1,0)-(0,1)) and 3D (tetrahedron with vertices at the origin and
//! the unit points). Weights sum to the reference measure (1, 1/2, 1/6).
//!
//! Degrees 1 and 2 use classic positive-weight rules; higher degrees use
//! Grundmann-Möller combinatorial rules, which are exact for odd degree
//! 2s+1 and computable in closed form (some weights are negative, which is
//! harmless for residual/stiffness integration).

/// Quadrature on a reference simplex: points in reference coordinates
/// (unused trailing components zero) and matching weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub dim: usize,
    /// Smallest polynomial degree the rule is guaranteed to integrate exactly.
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Requested degree outside the supported range (1..=6).
#[derive(Debug, Clone, thiserror::Error)]
#[error("UnsupportedDegree: quadrature degree {degree} not supported (max 6)")]
pub struct UnsupportedDegree {
    pub degree: usize,
}

impl QuadratureRule {
    /// A rule on the `dim`-simplex exact for polynomials of total degree
    /// at least `degree`.
    pub fn simplex(dim: usize, degree: usize) -> Result<Self, UnsupportedDegree> {
        assert!((1..=3).contains(&dim), "simplex dimension must be 1..=3");
        if degree == 0 || degree > 6 {
            return Err(UnsupportedDegree { degree });
        }
        if dim == 1 {
            return Ok(gauss_legendre_unit(degree));
        }
        let rule = match degree {
            1 => barycenter_rule(dim),
            2 => positive_degree2(dim),
            d => {
                // Grundmann-Möller of degree 2s+1 >= d
                let s = d / 2; // d=3->1(deg3), 4->2(deg5), 5->2(deg5), 6->3(deg7)
                grundmann_moeller(dim, s)
            }
        };
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn simplex_measure(dim: usize) -> f64 {
    match dim {
        1 => 1.0,
        2 => 0.5,
        3 => 1.0 / 6.0,
        _ => unreachable!(),
    }
}

fn barycenter_rule(dim: usize) -> QuadratureRule {
    let c = 1.0 / (dim as f64 + 1.0);
    let mut p = [0.0; 3];
    p[..dim].fill(c);
    QuadratureRule {
        dim,
        degree: 1,
        points: vec![p],
        weights: vec![simplex_measure(dim)],
    }
}

fn positive_degree2(dim: usize) -> QuadratureRule {
    match dim {
        2 => {
            // interior 3-point rule, orbit of (2/3, 1/6, 1/6)
            let a = 2.0 / 3.0;
            let b = 1.0 / 6.0;
            let points = vec![[a, b, 0.0], [b, a, 0.0], [b, b, 0.0]];
            let w = simplex_measure(2) / 3.0;
            QuadratureRule {
                dim,
                degree: 2,
                points,
                weights: vec![w; 3],
            }
        }
        3 => {
            // 4-point rule, orbit of ((5+3*sqrt(5))/20, b, b, b)
            let s5 = 5.0f64.sqrt();
            let a = (5.0 + 3.0 * s5) / 20.0;
            let b = (5.0 - s5) / 20.0;
            let orbit = [
                [a, b, b, b],
                [b, a, b, b],
                [b, b, a, b],
                [b, b, b, a],
            ];
            let points = orbit.iter().map(|l| [l[1], l[2], l[3]]).collect();
            let w = simplex_measure(3) / 4.0;
            QuadratureRule {
                dim,
                degree: 2,
                points,
                weights: vec![w; 4],
            }
        }
        _ => unreachable!(),
    }
}

/// Grundmann-Möller rule of degree 2s+1 on the `dim`-simplex.
fn grundmann_moeller(dim: usize, s: usize) -> QuadratureRule {
    let n = dim;
    let d = 2 * s + 1;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    // normalized so weights sum to the simplex measure 1/n!
    for i in 0..=s {
        let denom = (d + n - 2 * i) as f64;
        let w = {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let num = denom.powi(d as i32);
            sign * 0.25f64.powi(s as i32) * num / (factorial(i) * factorial(d + n - i))
        };
        for beta in compositions(s - i, n + 1) {
            // barycentric (2*beta_j + 1) / (d + n - 2i); drop lambda_0
            let mut p = [0.0; 3];
            for (j, &bj) in beta.iter().skip(1).enumerate() {
                p[j] = (2.0 * bj as f64 + 1.0) / denom;
            }
            points.push(p);
            weights.push(w);
        }
    }
    QuadratureRule {
        dim,
        degree: d,
        points,
        weights,
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// All tuples of `parts` non-negative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    fn rec(total: usize, idx: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx == cur.len() - 1 {
            cur[idx] = total;
            out.push(cur.clone());
            return;
        }
        for v in 0..=total {
            cur[idx] = v;
            rec(total - v, idx + 1, cur, out);
        }
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

/// Gauss-Legendre on [0,1]; n points integrate degree 2n-1.
fn gauss_legendre_unit(degree: usize) -> QuadratureRule {
    // nodes/weights on [-1,1]
    let (nodes, weights): (Vec<f64>, Vec<f64>) = match degree {
        0 | 1 => (vec![0.0], vec![2.0]),
        2 | 3 => {
            let a = 1.0 / 3.0f64.sqrt();
            (vec![-a, a], vec![1.0, 1.0])
        }
        4 | 5 => {
            let a = (3.0 / 5.0f64).sqrt();
            (vec![-a, 0.0, a], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        _ => {
            let c = (6.0 / 5.0f64).sqrt();
            let n1 = ((3.0 - 2.0 * c) / 7.0).sqrt();
            let n2 = ((3.0 + 2.0 * c) / 7.0).sqrt();
            let w1 = (18.0 + 30.0f64.sqrt()) / 36.0;
            let w2 = (18.0 - 30.0f64.sqrt()) / 36.0;
            (vec![-n2, -n1, n1, n2], vec![w2, w1, w1, w2])
        }
    };
    let points = nodes.iter().map(|&x| [0.5 * (x + 1.0), 0.0, 0.0]).collect();
    let weights = weights.iter().map(|&w| 0.5 * w).collect();
    QuadratureRule {
        dim: 1,
        degree: degree.max(1),
        points,
        weights,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact integral of x^a y^b z^c over the unit simplex:
    /// a! b! c! / (a + b + c + dim)!.
    fn monomial_integral(dim: usize, exps: [usize; 3]) -> f64 {
        let num: f64 = exps.iter().take(dim).map(|&e| factorial(e)).product();
        num / factorial(exps.iter().take(dim).sum::<usize>() + dim)
    }

    fn integrate(rule: &QuadratureRule, exps: [usize; 3]) -> f64 {
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| {
                w * p[0].powi(exps[0] as i32)
                    * p[1].powi(exps[1] as i32)
                    * p[2].powi(exps[2] as i32)
            })
            .sum()
    }

    #[test]
    fn one_point_tet_rule_weight_is_volume() {
        let r = QuadratureRule::simplex(3, 1).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.weights[0] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(r.points[0], [0.25, 0.25, 0.25]);
    }

    #[test]
    fn triangle_degree3_integrates_x2y() {
        // oracle: symbolic integral of x^2 y over the reference triangle = 1/60
        let r = QuadratureRule::simplex(2, 3).unwrap();
        let got = integrate(&r, [2, 1, 0]);
        assert!((got - 1.0 / 60.0).abs() < 1e-15, "got {got}");
    }

    #[test]
    fn degree7_unsupported() {
        assert!(QuadratureRule::simplex(3, 7).is_err());
        assert!(QuadratureRule::simplex(2, 0).is_err());
    }

    #[test]
    fn all_rules_integrate_monomials_exactly() {
        for dim in 1..=3 {
            for degree in 1..=6 {
                let rule = QuadratureRule::simplex(dim, degree).unwrap();
                assert!(rule.degree >= degree);
                for a in 0..=degree {
                    for b in 0..=(degree - a) {
                        for c in 0..=(degree - a - b) {
                            if dim < 3 && c > 0 || dim < 2 && b > 0 {
                                continue;
                            }
                            let exact = monomial_integral(dim, [a, b, c]);
                            let got = integrate(&rule, [a, b, c]);
                            let rel = (got - exact).abs() / exact.abs();
                            assert!(
                                rel < 1e-13,
                                "dim {dim} degree {degree} monomial ({a},{b},{c}): got {got}, exact {exact}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weights_sum_to_reference_measure() {
        for dim in 1..=3 {
            for degree in 1..=6 {
                let rule = QuadratureRule::simplex(dim, degree).unwrap();
                let sum: f64 = rule.weights.iter().sum();
                assert!((sum - simplex_measure(dim)).abs() < 1e-14);
            }
        }
    }
}
