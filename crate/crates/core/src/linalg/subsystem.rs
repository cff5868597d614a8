//! Tensor products and subsystem operations on composite Hilbert spaces.
//!
//! Basis states are indexed in mixed radix with site 0 varying slowest, so
//! for dims `(2, 3, 2)` index `i = 6·a + 2·b + c`.

use super::matrix::{DenseMatrix, C64};
use super::LinalgError;

/// Local dimensions of an ordered list of sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteDims(Vec<usize>);

impl SiteDims {
    pub fn new(dims: Vec<usize>) -> Result<Self, LinalgError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(LinalgError::InvalidDims(dims));
        }
        Ok(Self(dims))
    }

    /// `(2, 3, 2)`: spin-1/2, spin-1, spin-1/2.
    pub fn trimer() -> Self {
        Self(vec![2, 3, 2])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Local indices of a global basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn compose(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.0).fold(0, |acc, (&k, &d)| acc * d + k)
    }

    fn check(&self, m: &DenseMatrix) -> Result<(), LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() != self.total() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.total(),
                found: m.rows(),
            });
        }
        Ok(())
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (br, bc) = (b.rows(), b.cols());
    DenseMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a DenseMatrix>) -> DenseMatrix {
    factors
        .into_iter()
        .fold(DenseMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Traces out every site not listed in `keep`; kept sites retain their order.
pub fn partial_trace(m: &DenseMatrix, dims: &SiteDims, keep: &[usize]) -> Result<DenseMatrix, LinalgError> {
    dims.check(m)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&s| s >= dims.len()) {
        return Err(LinalgError::SiteOutOfRange {
            site: bad,
            sites: dims.len(),
        });
    }
    let kept = SiteDims(keep.iter().map(|&s| dims.0[s]).collect());
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();
    let n = dims.total();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| dims.digits(i)).collect();
    let reduced_index: Vec<usize> = digits
        .iter()
        .map(|d| kept.compose(&keep.iter().map(|&s| d[s]).collect::<Vec<_>>()))
        .collect();

    let mut out = DenseMatrix::zeros(kept.total(), kept.total());
    for i in 0..n {
        for j in 0..n {
            if traced.iter().all(|&s| digits[i][s] == digits[j][s]) {
                out[(reduced_index[i], reduced_index[j])] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Partial transpose with respect to one site:
/// `<i|M^{T_s}|j> = <i'|M|j'>` where `i'`, `j'` swap their site-`s` digits.
pub fn partial_transpose(m: &DenseMatrix, dims: &SiteDims, site: usize) -> Result<DenseMatrix, LinalgError> {
    dims.check(m)?;
    if site >= dims.len() {
        return Err(LinalgError::SiteOutOfRange {
            site,
            sites: dims.len(),
        });
    }
    let n = dims.total();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| dims.digits(i)).collect();
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut di = digits[i].clone();
            let mut dj = digits[j].clone();
            std::mem::swap(&mut di[site], &mut dj[site]);
            out[(i, j)] = m[(dims.compose(&di), dims.compose(&dj))];
        }
    }
    Ok(out)
}

/// Embeds a single-site operator at `site` (identities elsewhere).
pub fn embed(op: &DenseMatrix, dims: &SiteDims, site: usize) -> Result<DenseMatrix, LinalgError> {
    if site >= dims.len() {
        return Err(LinalgError::SiteOutOfRange {
            site,
            sites: dims.len(),
        });
    }
    if op.rows() != dims.0[site] || !op.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: dims.0[site],
            found: op.rows(),
        });
    }
    let factors: Vec<DenseMatrix> = dims
        .0
        .iter()
        .enumerate()
        .map(|(s, &d)| {
            if s == site {
                op.clone()
            } else {
                DenseMatrix::identity(d)
            }
        })
        .collect();
    Ok(kron_all(&factors))
}

/// Unit vector `|index>` of length `dim`.
pub fn basis_vector(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[index] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kron_identities() {
        let k = kron(&DenseMatrix::identity(2), &DenseMatrix::identity(3));
        assert_eq!(k, DenseMatrix::identity(6));
    }

    #[test]
    fn kron_sign_pattern() {
        let z = DenseMatrix::from_real_diagonal(&[1.0, -1.0]);
        let k = kron(&z, &DenseMatrix::identity(2));
        assert_eq!(k, DenseMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn digits_round_trip() {
        let dims = SiteDims::trimer();
        for i in 0..12 {
            assert_eq!(dims.compose(&dims.digits(i)), i);
        }
        assert_eq!(dims.digits(7), vec![1, 0, 1]);
    }

    #[test]
    fn maximally_mixed_reduces_to_maximally_mixed() {
        let rho = DenseMatrix::identity(12).scale_real(1.0 / 12.0);
        let r = partial_trace(&rho, &SiteDims::trimer(), &[0, 1]).unwrap();
        assert!(r.max_abs_diff(&DenseMatrix::identity(6).scale_real(1.0 / 6.0)) < 1e-15);
    }

    #[test]
    fn transpose_of_diagonal_is_identity_map() {
        let d = DenseMatrix::from_real_diagonal(&(0..12).map(|i| i as f64).collect::<Vec<_>>());
        for s in 0..3 {
            assert_eq!(partial_transpose(&d, &SiteDims::trimer(), s).unwrap(), d);
        }
    }

    #[test]
    fn bell_state_negative_eigenvalue() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
        ];
        let rho = DenseMatrix::outer(&psi);
        let dims = SiteDims::new(vec![2, 2]).unwrap();
        let pt = partial_transpose(&rho, &dims, 1).unwrap();
        let vals = crate::linalg::eigvals_hermitian(&pt).unwrap();
        assert!((vals[0] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        let dims = SiteDims::trimer();
        let m = DenseMatrix::identity(6);
        assert!(partial_trace(&m, &dims, &[0]).is_err());
        let m = DenseMatrix::identity(12);
        assert!(matches!(
            partial_transpose(&m, &dims, 3),
            Err(LinalgError::SiteOutOfRange { .. })
        ));
        assert!(partial_trace(&m, &dims, &[5]).is_err());
        assert!(SiteDims::new(vec![2, 0]).is_err());
    }

    fn matrix(n: usize) -> impl Strategy<Value = DenseMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| DenseMatrix::from_fn(n, n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1)))
    }

    proptest! {
        #[test]
        fn kron_trace_factorises(a in matrix(2), b in matrix(3)) {
            let lhs = kron(&a, &b).trace();
            prop_assert!((lhs - a.trace() * b.trace()).norm() < 1e-12);
        }

        #[test]
        fn partial_trace_preserves_trace(m in matrix(12), keep in proptest::sample::subsequence(vec![0usize, 1, 2], 1..=3)) {
            let dims = SiteDims::trimer();
            let r = partial_trace(&m, &dims, &keep).unwrap();
            prop_assert!((r.trace() - m.trace()).norm() < 1e-12);
        }

        #[test]
        fn partial_transpose_is_an_involution(m in matrix(12), site in 0usize..3) {
            let dims = SiteDims::trimer();
            let once = partial_transpose(&m, &dims, site).unwrap();
            prop_assert_eq!(partial_transpose(&once, &dims, site).unwrap(), m.clone());
            prop_assert!((once.trace() - m.trace()).norm() < 1e-12);
        }
    }
}
