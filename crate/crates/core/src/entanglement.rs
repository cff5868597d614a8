//! Negativity-based entanglement: pairwise (Peres–Horodecki on reduced
//! states) and tripartite (geometric mean of one-vs-rest negativities).

use crate::error::{Result, ThresholdError};
use crate::linalg::{eigvals_hermitian, partial_trace, partial_transpose, DenseMatrix, SiteDims};
use crate::thermo::{DensityElements, ThermalState};

/// Negativities below this are reported as exactly zero.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

pub fn reduced_ab(state: &ThermalState) -> Result<DenseMatrix> {
    Ok(partial_trace(&state.rho, &SiteDims::trimer(), &[0, 1])?)
}

pub fn reduced_bc(state: &ThermalState) -> Result<DenseMatrix> {
    Ok(partial_trace(&state.rho, &SiteDims::trimer(), &[1, 2])?)
}

pub fn reduced_ac(state: &ThermalState) -> Result<DenseMatrix> {
    Ok(partial_trace(&state.rho, &SiteDims::trimer(), &[0, 2])?)
}

/// `Σ (|λ| − λ) / 2`, floored.
pub fn negativity_from_eigenvalues(values: &[f64]) -> f64 {
    let n: f64 = values.iter().map(|&l| (l.abs() - l) / 2.0).sum();
    if n < NEGATIVITY_FLOOR {
        0.0
    } else {
        n
    }
}

/// Negativity of `m` with respect to a bipartition that transposes `site`.
pub fn negativity(m: &DenseMatrix, dims: &SiteDims, site: usize) -> Result<f64> {
    let pt = partial_transpose(m, dims, site)?;
    Ok(negativity_from_eigenvalues(&eigvals_hermitian(&pt)?))
}

fn pair_dims(first: usize, second: usize) -> SiteDims {
    SiteDims::new(vec![first, second]).expect("nonzero dims")
}

/// `(N_ab, N_ac)`.
pub fn negativity_bipartite(state: &ThermalState) -> Result<(f64, f64)> {
    let n_ab = negativity(&reduced_ab(state)?, &pair_dims(2, 3), 1)?;
    let n_ac = negativity(&reduced_ac(state)?, &pair_dims(2, 2), 1)?;
    Ok((n_ab, n_ac))
}

/// `(N_a|bc, N_b|ac, N_c|ab, N_abc)` from the full partial transposes.
pub fn negativity_tripartite(state: &ThermalState) -> Result<(f64, f64, f64, f64)> {
    let dims = SiteDims::trimer();
    let n_a = negativity(&state.rho, &dims, 0)?;
    let n_b = negativity(&state.rho, &dims, 1)?;
    let n_c = negativity(&state.rho, &dims, 2)?;
    Ok((n_a, n_b, n_c, geometric_mean(n_a, n_b, n_c)))
}

/// Cube root of the product; zero if any factor vanishes.
pub fn geometric_mean(a: f64, b: f64, c: f64) -> f64 {
    if a <= 0.0 || b <= 0.0 || c <= 0.0 {
        0.0
    } else {
        (a * b * c).cbrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityReport {
    pub n_ab: f64,
    pub n_bc: f64,
    pub n_ac: f64,
    pub n_a_bc: f64,
    pub n_b_ac: f64,
    pub n_c_ab: f64,
    pub n_abc: f64,
}

pub fn negativity_report(state: &ThermalState) -> Result<NegativityReport> {
    let (n_ab, n_ac) = negativity_bipartite(state)?;
    let n_bc = negativity(&reduced_bc(state)?, &pair_dims(3, 2), 1)?;
    let (n_a_bc, n_b_ac, n_c_ab, n_abc) = negativity_tripartite(state)?;
    Ok(NegativityReport {
        n_ab,
        n_bc,
        n_ac,
        n_a_bc,
        n_b_ac,
        n_c_ab,
        n_abc,
    })
}

/// Eigenvalues of a symmetric 2×2 block `[[s, o], [o, t]]`.
fn block_eigenvalues(s: f64, t: f64, o: f64) -> (f64, f64) {
    let root = ((s - t).powi(2) + 4.0 * o * o).sqrt();
    ((s + t - root) / 2.0, (s + t + root) / 2.0)
}

/// Closed-form spectrum of the partially transposed `a-b` reduced state.
pub fn pt_eigenvalues_ab_closed(el: &DensityElements) -> [f64; 6] {
    let r = |i, j| el.get(i, j);
    let (l3, l4) = block_eigenvalues(r(1, 1) + r(7, 7), r(4, 4) + r(10, 10), r(2, 3) + r(8, 9));
    let (l5, l6) = block_eigenvalues(r(3, 3) + r(9, 9), r(6, 6) + r(12, 12), r(10, 11) + r(4, 5));
    [r(2, 2) + r(8, 8), r(5, 5) + r(11, 11), l3, l4, l5, l6]
}

/// Closed-form spectrum of the partially transposed `a-c` reduced state.
pub fn pt_eigenvalues_ac_closed(el: &DensityElements) -> [f64; 4] {
    let r = |i, j| el.get(i, j);
    let (l3, l4) = block_eigenvalues(
        r(1, 1) + r(3, 3) + r(5, 5),
        r(8, 8) + r(10, 10) + r(12, 12),
        r(2, 7) + r(4, 9) + r(6, 11),
    );
    [r(2, 2) + r(4, 4) + r(6, 6), r(7, 7) + r(9, 9) + r(11, 11), l3, l4]
}

/// Temperature scan used to locate where a quantity vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdScan {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
}

impl Default for ThresholdScan {
    fn default() -> Self {
        Self {
            t_min: 1e-3,
            t_max: 3.0,
            samples: 300,
            tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdResult {
    /// Temperature above which the quantity stays zero.
    pub threshold: f64,
    /// Closed temperature intervals on which the quantity is positive.
    pub windows: Vec<(f64, f64)>,
    /// Zero at the lowest scanned temperature, or more than one window.
    pub reentrant: bool,
}

/// Scans `f` on a uniform grid, then bisects every sign change between
/// "positive" and "zero".
pub fn threshold_temperature(scan: &ThresholdScan, f: impl Fn(f64) -> Result<f64>) -> Result<ThresholdResult> {
    if !(scan.t_min > 0.0 && scan.t_max > scan.t_min && scan.samples >= 2 && scan.tol > 0.0) {
        return Err(ThresholdError::InvalidScan(format!("{scan:?}")).into());
    }
    let step = (scan.t_max - scan.t_min) / (scan.samples - 1) as f64;
    let temps: Vec<f64> = (0..scan.samples).map(|k| scan.t_min + step * k as f64).collect();
    let positive = temps
        .iter()
        .map(|&t| f(t).map(|v| v > 0.0))
        .collect::<Result<Vec<bool>>>()?;

    if !positive.iter().any(|&p| p) {
        return Err(ThresholdError::IdenticallyZero {
            t_min: scan.t_min,
            t_max: scan.t_max,
        }
        .into());
    }
    if positive[positive.len() - 1] {
        return Err(ThresholdError::NotTerminated { t_max: scan.t_max }.into());
    }

    // returns the crossing point between a positive and a zero sample
    let refine = |mut lo: f64, mut hi: f64, lo_positive: bool| -> Result<f64> {
        while hi - lo > scan.tol {
            let mid = 0.5 * (lo + hi);
            if (f(mid)? > 0.0) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };

    let mut windows = Vec::new();
    let mut start = if positive[0] { Some(scan.t_min) } else { None };
    for k in 1..temps.len() {
        match (positive[k - 1], positive[k]) {
            (false, true) => start = Some(refine(temps[k - 1], temps[k], false)?),
            (true, false) => {
                let end = refine(temps[k - 1], temps[k], true)?;
                windows.push((start.take().unwrap_or(scan.t_min), end));
            }
            _ => {}
        }
    }
    let threshold = windows.last().map(|w| w.1).unwrap_or(scan.t_min);
    let reentrant = !positive[0] || windows.len() > 1;
    Ok(ThresholdResult {
        threshold,
        windows,
        reentrant,
    })
}
