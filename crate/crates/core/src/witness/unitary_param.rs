//! Real parameterizations used by the unitary and dilation searches.

use crate::tensor::linalg::{c, CMatrix};

/// Hermitian `n × n` matrix from `n²` reals: the diagonal, then real and
/// imaginary parts of the strict upper triangle.
pub(crate) fn hermitian_from_params(p: &[f64], n: usize) -> CMatrix {
    debug_assert_eq!(p.len(), n * n);
    let mut h = CMatrix::zeros(n, n);
    let mut k = n;
    for i in 0..n {
        h[(i, i)] = c(p[i], 0.0);
        for j in i + 1..n {
            let z = c(p[k], p[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// Unitary factor `W V†` of the SVD `M = W Σ V†`.
pub(crate) fn polar_unitary(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V†");
    u * v_t
}

/// Density matrix `GG†/Tr` with `G` read from `2n²` reals.
pub(crate) fn density_from_params(p: &[f64], n: usize) -> Option<CMatrix> {
    let g = CMatrix::from_fn(n, n, |i, j| {
        let k = 2 * (i * n + j);
        c(p[k], p[k + 1])
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    (tr > 1e-300).then(|| m.unscale(tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::linalg::{hermiticity_error, unitarity_error};
    use crate::tensor::random::{ginibre, stream_rng};

    #[test]
    fn parameterizations_are_valid() {
        let p: Vec<f64> = (0..9).map(|i| i as f64 * 0.37 - 1.0).collect();
        assert!(hermiticity_error(&hermitian_from_params(&p, 3)) == 0.0);
        let mut rng = stream_rng(1, 0);
        assert!(unitarity_error(&polar_unitary(&ginibre(&mut rng, 4, 4))) < 1e-12);
        let q: Vec<f64> = (0..8).map(|i| (i as f64).sin()).collect();
        let rho = density_from_params(&q, 2).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
    }
}
