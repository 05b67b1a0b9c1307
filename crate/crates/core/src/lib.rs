use faer::sparse::{SparseColMat, Triplet};
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::prelude::Solve;

pub fn probe_lu() -> Vec<f64> {
    let triplets = [
        Triplet::new(0usize, 0usize, 2.0f64),
        Triplet::new(0, 1, 1.0),
        Triplet::new(1, 0, 1.0),
        Triplet::new(1, 1, 2.0),
    ];
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(2, 2, &triplets).unwrap();
    let symbolic = SymbolicLu::try_new(a.symbolic()).unwrap();
    let lu = Lu::try_new_with_symbolic(symbolic, a.as_ref()).unwrap();
    let mut rhs = faer::Mat::<f64>::zeros(2, 1);
    rhs[(0, 0)] = 3.0;
    rhs[(1, 0)] = 3.0;
    let x = lu.solve(&rhs);
    vec![x[(0, 0)], x[(1, 0)]]
}

#[cfg(test)]
mod tests {
    #[test]
    fn lu_2x2() {
        let x = super::probe_lu();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
