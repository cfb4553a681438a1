//! Sorted eigen-decomposition of dense real symmetric matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigenpairs sorted by ascending eigenvalue; `vectors[k]` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Row-major `n x n` input, symmetrized before the solve.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<SymmetricEigen> {
    if a.len() != n * n {
        return Err(Error::InvalidInput("matrix size mismatch".into()));
    }
    let m = DMatrix::from_row_slice(n, n, a);
    let sym = (&m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: order.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_pairs_satisfy_eigen_equation() {
        let n = 12;
        let mut a = vec![0.0; n * n];
        let mut seed = 7u64;
        for i in 0..n {
            for j in 0..=i {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let x = (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let e = symmetric_eigen(&a, n).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let dm = DMatrix::from_row_slice(n, n, &a);
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        assert!((e.values.iter().sum::<f64>() - trace).abs() < 1e-12);
        for (k, vec) in e.vectors.iter().enumerate() {
            let v = nalgebra::DVector::from_column_slice(vec);
            assert!((&dm * &v - &v * e.values[k]).norm() < 1e-11);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_input() {
        let e = symmetric_eigen(&[3.0, 0.0, 0.0, -1.0], 2).unwrap();
        assert_eq!(e.values, vec![-1.0, 3.0]);
    }
}
