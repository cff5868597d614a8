//! l1-norm of coherence in the standard product basis.

use crate::entanglement::{reduced_ab, reduced_ac};
use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::thermo::ThermalState;

/// `Σ_{i≠j} |M_ij|`.
pub fn l1_coherence(m: &DenseMatrix) -> f64 {
    let mut c = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                c += m[(i, j)].norm();
            }
        }
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceReport {
    pub c_abc: f64,
    pub c_ab: f64,
    pub c_ac: f64,
}

pub fn coherence_report(state: &ThermalState) -> Result<CoherenceReport> {
    Ok(CoherenceReport {
        c_abc: l1_coherence(&state.rho),
        c_ab: l1_coherence(&reduced_ab(state)?),
        c_ac: l1_coherence(&reduced_ac(state)?),
    })
}
