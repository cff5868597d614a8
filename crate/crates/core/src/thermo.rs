//! Canonical-ensemble thermodynamics in reduced units (`k_B = 1`).

use crate::error::{ensure_finite, Error, Result};
use crate::linalg::{DenseMatrix, C64};
use crate::model::{
    build_hamiltonian, energies_closed_form, ground_state, spectrum_closed_form, spectrum_numeric, AmplitudeSet,
    TrimerParams, DIM,
};

/// `S_T^z` of levels `1 … 12`.
const LEVEL_SZ: [f64; DIM] = [0.0, 0.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 0.0, 0.0, 2.0, -2.0];

/// Levels related by `S^z → −S^z`, positive member first.
const MIRROR_PAIRS: [(usize, usize); 4] = [(3, 4), (5, 7), (6, 8), (11, 12)];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalPoint {
    params: TrimerParams,
    t: f64,
}

impl ThermalPoint {
    pub fn new(params: TrimerParams, t: f64) -> Result<Self> {
        ensure_finite("T", t)?;
        if t < 0.0 {
            return Err(Error::InvalidParameter(format!("T must be non-negative, got {t}")));
        }
        Ok(Self { params, t })
    }

    pub fn params(&self) -> &TrimerParams {
        &self.params
    }

    pub fn temperature(&self) -> f64 {
        self.t
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.t == 0.0
    }

    fn beta(&self, what: &'static str) -> Result<f64> {
        if self.is_zero_temperature() {
            Err(Error::ZeroTemperature(what))
        } else {
            Ok(1.0 / self.t)
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThermalState {
    pub point: ThermalPoint,
    /// `ln Z`; `None` at `T = 0`.
    pub ln_z: Option<f64>,
    pub rho: DenseMatrix,
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln Z` from the six-term closed form
///
/// ```text
/// Z = 1 + 2cosh(βh)e^{−βD} + e^{−β(D−J)} + 2cosh(2βh)e^{−β(D+J)}
///   + 4cosh(βh)e^{−βD/2}cosh(β√(D²+4J²)/2) + 2cosh(β√((D−J)²+8J²)/2)e^{−β(D−J)/2}
/// ```
///
/// evaluated term-wise in log space.
pub fn ln_partition_function_closed(point: &ThermalPoint) -> Result<f64> {
    let beta = point.beta("partition function")?;
    let p = point.params;
    let (j, d, h) = (p.j(), p.d(), p.h());
    let w1 = (d * d + 4.0 * j * j).sqrt();
    let w0 = ((d - j).powi(2) + 8.0 * j * j).sqrt();
    let ln2 = std::f64::consts::LN_2;
    let terms = [
        0.0,
        ln2 + ln_cosh(beta * h) - beta * d,
        -beta * (d - j),
        ln2 + ln_cosh(2.0 * beta * h) - beta * (d + j),
        2.0 * ln2 + ln_cosh(beta * h) - beta * d / 2.0 + ln_cosh(beta * w1 / 2.0),
        ln2 + ln_cosh(beta * w0 / 2.0) - beta * (d - j) / 2.0,
    ];
    Ok(log_sum_exp(&terms))
}

/// `Z` itself; overflows for `T` far below the ground-state energy scale,
/// prefer [`ln_partition_function_closed`].
pub fn partition_function_closed(point: &ThermalPoint) -> Result<f64> {
    ln_partition_function_closed(point).map(f64::exp)
}

/// `ln Σ_i exp(−βE_i)` over the twelve level energies.
pub fn ln_partition_function_spectral(point: &ThermalPoint) -> Result<f64> {
    let beta = point.beta("partition function")?;
    let e = energies_closed_form(&point.params);
    Ok(log_sum_exp(&e.map(|x| -beta * x)))
}

/// `G = −T ln Z`; at `T = 0` the ground-state energy.
pub fn gibbs_free_energy(point: &ThermalPoint) -> Result<f64> {
    if point.is_zero_temperature() {
        return Ok(ground_energy(&point.params));
    }
    Ok(-point.t * ln_partition_function_closed(point)?)
}

fn ground_energy(p: &TrimerParams) -> f64 {
    energies_closed_form(p).into_iter().fold(f64::INFINITY, f64::min)
}

/// Boltzmann weights normalised to the largest one (the ground level).
/// At `T = 0` the degenerate ground levels share weight equally.
fn level_weights(point: &ThermalPoint) -> [f64; DIM] {
    let e = energies_closed_form(&point.params);
    if point.is_zero_temperature() {
        let mut w = [0.0; DIM];
        for level in ground_state(&point.params).levels() {
            w[level - 1] = 1.0;
        }
        return w;
    }
    let beta = 1.0 / point.t;
    let e0 = ground_energy(&point.params);
    e.map(|x| (-beta * (x - e0)).exp())
}

/// `<S_T^z>` in units of `gμ_B`; saturation is 2.
pub fn magnetization(point: &ThermalPoint) -> Result<f64> {
    let w = level_weights(point);
    let z: f64 = w.iter().sum();
    // pair each level with its S^z-reversed partner so that h = 0 cancels exactly
    let m: f64 = MIRROR_PAIRS
        .iter()
        .map(|&(up, down)| LEVEL_SZ[up - 1] * (w[up - 1] - w[down - 1]))
        .sum();
    Ok(m / z)
}

/// Thermal density matrix. For `T > 0` it is assembled from the numerically
/// diagonalised Hamiltonian; at `T = 0` it is the equal mixture of the
/// analytic ground levels.
pub fn thermal_state(point: &ThermalPoint) -> Result<ThermalState> {
    if point.is_zero_temperature() {
        let spec = spectrum_closed_form(&point.params);
        let levels = ground_state(&point.params).levels();
        let weight = 1.0 / levels.len() as f64;
        let mut rho = DenseMatrix::zeros(DIM, DIM);
        for k in levels {
            let v = &spec.level(k).vector;
            for i in 0..DIM {
                for j in 0..DIM {
                    rho[(i, j)] += C64::new(weight * v[i] * v[j], 0.0);
                }
            }
        }
        return Ok(ThermalState {
            point: *point,
            ln_z: None,
            rho,
        });
    }

    let beta = 1.0 / point.t;
    let eig = spectrum_numeric(&point.params)?;
    let e0 = eig.values[0];
    let weights: Vec<f64> = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z_shifted: f64 = weights.iter().sum();
    let mut rho = DenseMatrix::zeros(DIM, DIM);
    for (k, w) in weights.iter().enumerate() {
        let w = w / z_shifted;
        if w == 0.0 {
            continue;
        }
        for i in 0..DIM {
            let vi = eig.vectors[(i, k)];
            for j in 0..DIM {
                rho[(i, j)] += vi * eig.vectors[(j, k)].conj() * w;
            }
        }
    }
    Ok(ThermalState {
        point: *point,
        ln_z: Some(ln_partition_function_closed(point)?),
        rho,
    })
}

/// Closed-form nonzero density-matrix elements, 1-based names.
///
/// The remaining nonzero entries follow from
/// `ρ77 = ρ22`, `ρ37 = ρ23`, `ρ99 = ρ44`, `ρ48 = ρ59 = ρ89 = ρ45`,
/// `ρ88 = ρ55`, `ρ11,11 = ρ66`, `ρ10,11 = ρ6,10` and Hermiticity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityElements {
    pub r1_1: f64,
    pub r2_2: f64,
    pub r2_3: f64,
    pub r2_7: f64,
    pub r3_3: f64,
    pub r4_4: f64,
    pub r4_5: f64,
    pub r4_9: f64,
    pub r5_5: f64,
    pub r5_8: f64,
    pub r6_6: f64,
    pub r6_10: f64,
    pub r6_11: f64,
    pub r10_10: f64,
    pub r12_12: f64,
}

impl DensityElements {
    /// `ρ_{i,j}` with 1-based indices; zero outside the printed pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        match (i, j) {
            (1, 1) => self.r1_1,
            (2, 2) | (7, 7) => self.r2_2,
            (2, 3) | (3, 7) => self.r2_3,
            (2, 7) => self.r2_7,
            (3, 3) => self.r3_3,
            (4, 4) | (9, 9) => self.r4_4,
            (4, 5) | (4, 8) | (5, 9) | (8, 9) => self.r4_5,
            (4, 9) => self.r4_9,
            (5, 5) | (8, 8) => self.r5_5,
            (5, 8) => self.r5_8,
            (6, 6) | (11, 11) => self.r6_6,
            (6, 10) | (10, 11) => self.r6_10,
            (6, 11) => self.r6_11,
            (10, 10) => self.r10_10,
            (12, 12) => self.r12_12,
            _ => 0.0,
        }
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(DIM, DIM, |i, j| C64::new(self.get(i + 1, j + 1), 0.0))
    }
}

/// Closed-form density-matrix elements built from level energies and
/// amplitudes; `e_k` below is `exp(−βE_k)` relative to the ground level.
pub fn density_elements_closed(point: &ThermalPoint) -> Result<DensityElements> {
    point.beta("closed-form density elements")?;
    let w = level_weights(point);
    let z: f64 = w.iter().sum();
    let e = |k: usize| w[k - 1] / z;
    let AmplitudeSet {
        a,
        b,
        c,
        d,
        e: ea,
        f,
        g_amp: g,
        h_amp: h,
    } = AmplitudeSet::new(&point.params);
    Ok(DensityElements {
        r1_1: e(11),
        r2_2: 0.5 * e(3) + a * a * e(5) + c * c * e(6),
        r2_3: a * b * e(5) + c * d * e(6),
        r2_7: -0.5 * e(3) + a * a * e(5) + c * c * e(6),
        r3_3: b * b * e(5) + d * d * e(6),
        r4_4: 0.5 * e(1) + ea * ea * e(9) + g * g * e(10),
        r4_5: ea * f * e(9) + g * h * e(10),
        r4_9: -0.5 * e(1) + ea * ea * e(9) + g * g * e(10),
        r5_5: 0.5 * e(2) + f * f * e(9) + h * h * e(10),
        r5_8: -0.5 * e(2) + f * f * e(9) + h * h * e(10),
        r6_6: 0.5 * e(4) + a * a * e(7) + c * c * e(8),
        r6_10: a * b * e(7) + c * d * e(8),
        r6_11: -0.5 * e(4) + a * a * e(7) + c * c * e(8),
        r10_10: b * b * e(7) + d * d * e(8),
        r12_12: e(12),
    })
}

/// `Tr(ρ H)`, handy for consistency checks.
pub fn internal_energy(state: &ThermalState) -> f64 {
    state.rho.trace_product(&build_hamiltonian(state.point.params())).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigvals_hermitian;
    use crate::model::basis_sz;
    use proptest::prelude::*;

    fn point(d: f64, h: f64, t: f64) -> ThermalPoint {
        ThermalPoint::new(TrimerParams::reduced(d, h).unwrap(), t).unwrap()
    }

    #[test]
    fn infinite_temperature_limits() {
        let p = point(0.3, 0.7, 1e12);
        assert!((partition_function_closed(&p).unwrap() - 12.0).abs() < 1e-9);
        let g = gibbs_free_energy(&p).unwrap();
        assert!((g / (-1e12 * 12f64.ln()) - 1.0).abs() < 1e-9);
        let rho = thermal_state(&p).unwrap().rho;
        assert!(rho.max_abs_diff(&DenseMatrix::identity(DIM).scale_real(1.0 / 12.0)) < 1e-10);
    }

    #[test]
    fn low_temperature_free_energy() {
        let p = point(0.0, 0.0, 1e-3);
        let ln_z = ln_partition_function_closed(&p).unwrap();
        assert!((-ln_z * 1e-3 + 2.0).abs() < 1e-9);
        assert!((gibbs_free_energy(&point(0.0, 0.0, 0.0)).unwrap() + 2.0).abs() < 1e-15);
        assert!(ln_partition_function_closed(&point(0.05, 0.3, 1e-4))
            .unwrap()
            .is_finite());
    }

    #[test]
    fn zero_temperature_is_distinct() {
        let p = point(0.05, 3.0, 0.0);
        assert!(matches!(partition_function_closed(&p), Err(Error::ZeroTemperature(_))));
        assert!(density_elements_closed(&p).is_err());
        let state = thermal_state(&p).unwrap();
        assert!(state.ln_z.is_none());
        let mut expected = DenseMatrix::zeros(DIM, DIM);
        expected[(0, 0)] = C64::new(1.0, 0.0);
        assert_eq!(state.rho, expected);
        assert!(ThermalPoint::new(TrimerParams::reduced(0.0, 0.0).unwrap(), -1.0).is_err());
    }

    #[test]
    fn boundary_ground_state_is_mixed() {
        let hb = crate::model::PhaseBoundaries::new(1.0, 0.05);
        let state = thermal_state(&point(0.05, hb.upper, 0.0)).unwrap();
        assert!((state.rho[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((magnetization(&point(0.05, hb.upper, 0.0)).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn magnetization_limits() {
        assert_eq!(magnetization(&point(0.05, 0.0, 0.7)).unwrap(), 0.0);
        assert!((magnetization(&point(0.05, 3.0, 0.01)).unwrap() / 2.0 - 1.0).abs() < 1e-6);
        assert!((magnetization(&point(0.05, 1.5, 0.01)).unwrap() / 2.0 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn magnetization_is_field_derivative() {
        let step = 1e-6;
        for &(d, h, t) in &[(0.05, 0.3, 0.2), (0.05, 1.2, 0.5), (-0.5, 2.1, 1.3), (1.0, 0.0, 3.0)] {
            let g = |h| gibbs_free_energy(&point(d, h, t)).unwrap();
            let fd = -(g(h + step) - g(h - step)) / (2.0 * step);
            let m = magnetization(&point(d, h, t)).unwrap();
            assert!((fd - m).abs() < 1e-6 * m.abs().max(1.0), "{fd} vs {m}");
        }
    }

    #[test]
    fn free_energy_decreases_with_temperature() {
        let mut last = f64::INFINITY;
        for k in 0..200 {
            let g = gibbs_free_energy(&point(0.05, 0.8, k as f64 * 0.025)).unwrap();
            assert!(g < last);
            last = g;
        }
    }

    #[test]
    fn magnetization_is_monotone_in_field() {
        let mut last = -1.0;
        for k in 0..=300 {
            let m = magnetization(&point(0.05, k as f64 * 0.01, 0.05)).unwrap();
            assert!(m >= last - 1e-12);
            last = m;
        }
    }

    #[test]
    fn closed_partition_function_matches_spectral_sum() {
        for i in 0..20 {
            for k in 0..20 {
                for l in 1..=20 {
                    let p = point(
                        -1.0 + 2.0 * i as f64 / 19.0,
                        3.0 * k as f64 / 19.0,
                        5.0 * l as f64 / 20.0,
                    );
                    let a = ln_partition_function_closed(&p).unwrap();
                    let b = ln_partition_function_spectral(&p).unwrap();
                    // relative error of Z, not of ln Z
                    assert!((a - b).abs() < 1e-12, "{p:?}");
                }
            }
        }
    }

    #[test]
    fn closed_elements_reproduce_numeric_density_matrix() {
        let p = point(0.05, 1.3, 0.4);
        let rho = thermal_state(&p).unwrap().rho;
        let el = density_elements_closed(&p).unwrap();
        assert!((el.r1_1 - rho[(0, 0)].re).abs() < 1e-12);
        assert!(el.to_matrix().max_abs_diff(&rho) < 1e-10);
        assert!((el.to_matrix().trace().re - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn closed_elements_on_random_points(d in -1.0f64..1.0, h in -3.0f64..3.0, t in 0.01f64..5.0) {
            let p = point(d, h, t);
            let rho = thermal_state(&p).unwrap().rho;
            let closed = density_elements_closed(&p).unwrap().to_matrix();
            prop_assert!(closed.max_abs_diff(&rho) < 1e-10);
        }

        #[test]
        fn thermal_state_is_a_density_matrix(d in -1.0f64..1.0, h in 0.0f64..3.0, t in 0.0f64..5.0) {
            let p = point(d, h, t);
            let state = thermal_state(&p).unwrap();
            let rho = &state.rho;
            prop_assert!(rho.is_hermitian(1e-12));
            prop_assert!((rho.trace().re - 1.0).abs() < 1e-10);
            prop_assert!(eigvals_hermitian(rho).unwrap()[0] > -1e-10);
            prop_assert!(rho.commutator(&build_hamiltonian(p.params())).max_abs() < 1e-10);
            for i in 0..DIM {
                for j in 0..DIM {
                    if basis_sz(i) != basis_sz(j) {
                        prop_assert!(rho[(i, j)].norm() < 1e-12);
                    }
                }
            }
        }

        #[test]
        fn internal_energy_matches_level_average(d in -1.0f64..1.0, h in 0.0f64..3.0, t in 0.05f64..5.0) {
            let p = point(d, h, t);
            let state = thermal_state(&p).unwrap();
            let w = level_weights(&p);
            let z: f64 = w.iter().sum();
            let e = energies_closed_form(p.params());
            let u: f64 = w.iter().zip(e).map(|(w, e)| w * e).sum::<f64>() / z;
            prop_assert!((internal_energy(&state) - u).abs() < 1e-10);
        }
    }
}
