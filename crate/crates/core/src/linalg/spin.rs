use super::matrix::{DenseMatrix, C64};
use super::LinalgError;

/// Cartesian spin matrices in the `|s, m>` basis ordered `m = s, s-1, .., -s`.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub x: DenseMatrix,
    pub y: DenseMatrix,
    pub z: DenseMatrix,
}

impl SpinOperators {
    pub fn raising(&self) -> DenseMatrix {
        &self.x + &self.y.scale(C64::new(0.0, 1.0))
    }

    pub fn lowering(&self) -> DenseMatrix {
        &self.x - &self.y.scale(C64::new(0.0, 1.0))
    }

    /// `Sx² + Sy² + Sz²`.
    pub fn casimir(&self) -> DenseMatrix {
        let xx = &self.x * &self.x;
        let yy = &self.y * &self.y;
        let zz = &self.z * &self.z;
        &(&xx + &yy) + &zz
    }
}

/// Spin matrices for `s ∈ {1/2, 1}`.
pub fn spin_operators(s: f64) -> Result<SpinOperators, LinalgError> {
    let twice = 2.0 * s;
    if !(twice == 1.0 || twice == 2.0) {
        return Err(LinalgError::UnsupportedSpin(s));
    }
    let dim = twice as usize + 1;
    let m = |k: usize| s - k as f64;

    let mut plus = DenseMatrix::zeros(dim, dim);
    for k in 1..dim {
        // <m+1| S+ |m> = sqrt(s(s+1) - m(m+1))
        let mk = m(k);
        plus[(k - 1, k)] = C64::new((s * (s + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.dagger();
    let x = (&plus + &minus).scale_real(0.5);
    let y = (&plus - &minus).scale(C64::new(0.0, -0.5));
    let z = DenseMatrix::from_real_diagonal(&(0..dim).map(m).collect::<Vec<_>>());
    Ok(SpinOperators { x, y, z })
}
