//! Collective-spin squeezing.
//!
//! With `J = s_a + S_b + s_c` and `n⊥ = (cos θ, sin θ, 0)`, the squeezing
//! parameter is the minimal transverse variance normalised by the coherent
//! value `L′/4`, which reduces to
//!
//! ```text
//! ξ² = (2/L′) [ <Jx² + Jy²> − √(<Jx² − Jy²>² + <{Jx, Jy}>²) ],   L′ = 4.
//! ```

use std::sync::OnceLock;

use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::model::{TrimerOperators, TrimerParams};
use crate::thermo::{thermal_state, ThermalPoint, ThermalState};

/// Number of effective spin-1/2 constituents (the spin-1 counts twice).
pub const L_PRIME: f64 = 4.0;

#[derive(Debug)]
pub struct CollectiveOperators {
    pub jx: DenseMatrix,
    pub jy: DenseMatrix,
    pub jz: DenseMatrix,
    jx2: DenseMatrix,
    jy2: DenseMatrix,
    jxy: DenseMatrix,
}

impl CollectiveOperators {
    pub fn get() -> &'static CollectiveOperators {
        static OPS: OnceLock<CollectiveOperators> = OnceLock::new();
        OPS.get_or_init(|| {
            let total = &TrimerOperators::get().total;
            let (jx, jy, jz) = (total.x.clone(), total.y.clone(), total.z.clone());
            CollectiveOperators {
                jx2: &jx * &jx,
                jy2: &jy * &jy,
                jxy: jx.anticommutator(&jy),
                jx,
                jy,
                jz,
            }
        })
    }

    /// `cos θ Jx + sin θ Jy`.
    pub fn transverse(&self, theta: f64) -> DenseMatrix {
        &self.jx.scale_real(theta.cos()) + &self.jy.scale_real(theta.sin())
    }
}

/// `Re Tr(ρ M)`.
pub fn expectation(rho: &DenseMatrix, op: &DenseMatrix) -> f64 {
    rho.trace_product(op).re
}

/// Variance of `cos θ Jx + sin θ Jy`, mean included.
pub fn transverse_variance(rho: &DenseMatrix, theta: f64) -> f64 {
    let ops = CollectiveOperators::get();
    let (c, s) = (theta.cos(), theta.sin());
    let second =
        c * c * expectation(rho, &ops.jx2) + s * s * expectation(rho, &ops.jy2) + c * s * expectation(rho, &ops.jxy);
    let mean = c * expectation(rho, &ops.jx) + s * expectation(rho, &ops.jy);
    second - mean * mean
}

/// Closed-form `ξ²` for an arbitrary density matrix.
pub fn squeezing_parameter_of(rho: &DenseMatrix) -> f64 {
    let ops = CollectiveOperators::get();
    let x2 = expectation(rho, &ops.jx2);
    let y2 = expectation(rho, &ops.jy2);
    let xy = expectation(rho, &ops.jxy);
    (2.0 / L_PRIME) * (x2 + y2 - (x2 - y2).hypot(xy))
}

pub fn squeezing_parameter(state: &ThermalState) -> f64 {
    squeezing_parameter_of(&state.rho)
}

/// Temperature scan for the low-temperature squeezing minimum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusScan {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub tol: f64,
}

impl Default for LocusScan {
    fn default() -> Self {
        Self {
            t_min: 1e-3,
            t_max: 3.0,
            samples: 200,
            tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LocusOutcome {
    Minimum {
        t: f64,
        xi2: f64,
    },
    /// Smallest value sits at an end of the scan range.
    Monotone,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusPoint {
    pub h: f64,
    pub outcome: LocusOutcome,
}

/// Golden-section search for a minimum of `f` in `[a, b]`.
pub fn golden_section_min(mut a: f64, mut b: f64, tol: f64, f: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

/// `ξ²(T)` at fixed couplings.
pub fn squeezing_at(params: &TrimerParams, t: f64) -> Result<f64> {
    Ok(squeezing_parameter(&thermal_state(&ThermalPoint::new(*params, t)?)?))
}

/// Temperature of the global `ξ²(T)` minimum for each field.
pub fn squeezing_minimum_locus(j: f64, d: f64, fields: &[f64], scan: &LocusScan) -> Result<Vec<LocusPoint>> {
    let step = (scan.t_max - scan.t_min) / (scan.samples.max(2) - 1) as f64;
    fields
        .iter()
        .map(|&h| {
            let params = TrimerParams::new(j, d, h)?;
            let temps: Vec<f64> = (0..scan.samples.max(2)).map(|k| scan.t_min + step * k as f64).collect();
            let values = temps
                .iter()
                .map(|&t| squeezing_at(&params, t))
                .collect::<Result<Vec<f64>>>()?;
            let k = (0..values.len())
                .min_by(|&x, &y| values[x].total_cmp(&values[y]))
                .expect("at least two samples");
            let outcome = if k == 0 || k == values.len() - 1 {
                LocusOutcome::Monotone
            } else {
                let (t, xi2) = golden_section_min(temps[k - 1], temps[k + 1], scan.tol, |t| squeezing_at(&params, t))?;
                LocusOutcome::Minimum { t, xi2 }
            };
            Ok(LocusPoint { h, outcome })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_anti_hermitian, C64};
    use proptest::prelude::*;

    fn state(d: f64, h: f64, t: f64) -> ThermalState {
        thermal_state(&ThermalPoint::new(TrimerParams::reduced(d, h).unwrap(), t).unwrap()).unwrap()
    }

    fn random_density(entries: &[f64]) -> DenseMatrix {
        let a = DenseMatrix::from_fn(12, 12, |i, j| {
            C64::new(entries[2 * (12 * i + j)], entries[2 * (12 * i + j) + 1])
        });
        let rho = &a * &a.dagger();
        let tr = rho.trace().re;
        rho.scale_real(1.0 / tr)
    }

    /// Grid-plus-refinement minimum of the transverse second moment; equals the
    /// variance whenever the transverse mean vanishes.
    fn grid_minimum(rho: &DenseMatrix) -> f64 {
        let ops = CollectiveOperators::get();
        let second = |t: f64| {
            let mean = t.cos() * expectation(rho, &ops.jx) + t.sin() * expectation(rho, &ops.jy);
            transverse_variance(rho, t) + mean * mean
        };
        let n = 360;
        let thetas: Vec<f64> = (0..n).map(|k| std::f64::consts::PI * k as f64 / n as f64).collect();
        let k = (0..n)
            .min_by(|&a, &b| second(thetas[a]).total_cmp(&second(thetas[b])))
            .unwrap();
        let w = std::f64::consts::PI / n as f64;
        golden_section_min(thetas[k] - w, thetas[k] + w, 1e-10, |t| Ok(second(t)))
            .unwrap()
            .1
    }

    #[test]
    fn collective_algebra() {
        let ops = CollectiveOperators::get();
        let i = C64::new(0.0, 1.0);
        assert!(ops.jx.commutator(&ops.jy).max_abs_diff(&ops.jz.scale(i)) < 1e-12);
        let diag: Vec<f64> = ops.jz.diagonal().iter().map(|z| z.re).collect();
        let expected: Vec<f64> = (0..12).map(|k| crate::model::basis_sz(k) as f64).collect();
        assert_eq!(diag, expected);
    }

    #[test]
    fn maximally_mixed_state() {
        let rho = DenseMatrix::identity(12).scale_real(1.0 / 12.0);
        assert!((squeezing_parameter_of(&rho) - 7.0 / 6.0).abs() < 1e-12);
        let v0 = transverse_variance(&rho, 0.0);
        for k in 0..10 {
            assert!((transverse_variance(&rho, 0.3 * k as f64) - v0).abs() < 1e-12);
        }
        let ops = CollectiveOperators::get();
        assert!((v0 - expectation(&rho, &ops.jy2)).abs() < 1e-12);
    }

    #[test]
    fn saturated_state_is_coherent() {
        let s = state(0.05, 3.0, 0.0);
        for k in 0..8 {
            assert!((transverse_variance(&s.rho, 0.4 * k as f64) - 1.0).abs() < 1e-12);
        }
        assert!((squeezing_parameter(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singlet_region_is_squeezed() {
        assert!(squeezing_parameter(&state(0.05, 0.0, 0.0)) < 1.0);
    }

    #[test]
    fn half_plateau_value() {
        let xi2 = squeezing_parameter(&state(0.05, 1.5, 0.0));
        assert!((xi2 - 0.50031).abs() < 1e-5, "{xi2}");
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (t, v) = golden_section_min(0.0, 3.0, 1e-9, |x| Ok((x - 1.7).powi(2) + 0.2)).unwrap();
        assert!((t - 1.7).abs() < 1e-8);
        assert!((v - 0.2).abs() < 1e-12);
    }

    #[test]
    fn locus_classifies_fields() {
        let scan = LocusScan {
            samples: 40,
            ..LocusScan::default()
        };
        let points = squeezing_minimum_locus(1.0, 0.05, &[0.5, 2.5], &scan).unwrap();
        assert_eq!(points[0].outcome, LocusOutcome::Monotone);
        match points[1].outcome {
            LocusOutcome::Minimum { t, xi2 } => {
                assert!(t > 0.3 && t < 2.0, "{t}");
                assert!(xi2 < 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn closed_form_equals_grid_minimum_on_thermal_states(d in -1.0f64..1.0, h in 0.0f64..3.0, t in 0.0f64..5.0) {
            let rho = state(d, h, t).rho;
            let closed = squeezing_parameter_of(&rho);
            prop_assert!(closed > 0.0);
            let n = 360;
            let grid = (0..n)
                .map(|k| transverse_variance(&rho, std::f64::consts::PI * k as f64 / n as f64))
                .fold(f64::INFINITY, f64::min);
            prop_assert!((closed - grid * 4.0 / L_PRIME).abs() < 1e-8);
        }

        #[test]
        fn closed_form_equals_minimum_on_random_states(entries in prop::collection::vec(-1.0f64..1.0, 288)) {
            let rho = random_density(&entries);
            prop_assert!((squeezing_parameter_of(&rho) - grid_minimum(&rho) * 4.0 / L_PRIME).abs() < 1e-8);
        }

        #[test]
        fn invariant_under_rotation_about_z(entries in prop::collection::vec(-1.0f64..1.0, 288), phi in 0.0f64..6.3) {
            let rho = random_density(&entries);
            let u = expm_anti_hermitian(&CollectiveOperators::get().jz.scale(C64::new(0.0, phi))).unwrap();
            let rotated = &(&u * &rho) * &u.dagger();
            prop_assert!((squeezing_parameter_of(&rho) - squeezing_parameter_of(&rotated)).abs() < 1e-10);
        }

        #[test]
        fn transverse_moments_vanish(d in -1.0f64..1.0, h in 0.0f64..3.0, t in 0.0f64..5.0) {
            let rho = state(d, h, t).rho;
            let ops = CollectiveOperators::get();
            for a in [&ops.jx, &ops.jy] {
                prop_assert!(expectation(&rho, a).abs() < 1e-12);
                prop_assert!(expectation(&rho, &(a * &ops.jz)).abs() < 1e-12);
                prop_assert!(expectation(&rho, &(&ops.jz * a)).abs() < 1e-12);
            }
        }
    }
}
