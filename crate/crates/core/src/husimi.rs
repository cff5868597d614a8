//! Spin coherent states and the Husimi Q-function on the Bloch sphere.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, expm_anti_hermitian, DenseMatrix, C64};
use crate::model::DIM;
use crate::squeezing::CollectiveOperators;

/// Generator `(θ/2)(J₋ e^{iφ} − J₊ e^{−iφ})` of the coherent-state rotation.
pub fn rotation_generator(theta: f64, phi: f64) -> DenseMatrix {
    let ops = CollectiveOperators::get();
    let i = C64::new(0.0, 1.0);
    let j_plus = &ops.jx + &ops.jy.scale(i);
    let j_minus = &ops.jx - &ops.jy.scale(i);
    let e = C64::from_polar(1.0, phi);
    (&j_minus.scale(e) - &j_plus.scale(e.conj())).scale_real(theta / 2.0)
}

/// `|θ, φ> = exp[(θ/2)(J₋ e^{iφ} − J₊ e^{−iφ})] |↑1↑>`.
pub fn coherent_state(theta: f64, phi: f64) -> Result<Vec<C64>> {
    let top = basis_vector(DIM, 0);
    if theta == 0.0 {
        return Ok(top);
    }
    let u = expm_anti_hermitian(&rotation_generator(theta, phi))?;
    Ok(u.column(0))
}

/// `Q(θ, φ) = <θ, φ| ρ |θ, φ> / π`.
pub fn husimi_q(rho: &DenseMatrix, theta: f64, phi: f64) -> Result<f64> {
    let alpha = coherent_state(theta, phi)?;
    Ok(rho.quadratic_form(&alpha).re / PI)
}

/// Sampling of the sphere: `θ_k = πk/(n_theta − 1)` including both poles,
/// `φ_l = 2πl/n_phi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereGridSpec {
    n_theta: usize,
    n_phi: usize,
}

impl SphereGridSpec {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 1 {
            return Err(Error::InvalidParameter(format!(
                "sphere grid needs n_theta >= 2 and n_phi >= 1, got {n_theta}x{n_phi}"
            )));
        }
        Ok(Self { n_theta, n_phi })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta)
            .map(|k| PI * k as f64 / (self.n_theta - 1) as f64)
            .collect()
    }

    pub fn phis(&self) -> Vec<f64> {
        (0..self.n_phi)
            .map(|l| 2.0 * PI * l as f64 / self.n_phi as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    pub spec: SphereGridSpec,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Row-major in `(θ, φ)`.
    pub values: Vec<f64>,
}

/// Q-weighted second moments of the unit vector `n(θ, φ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondMoments {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

impl SecondMoments {
    /// `(<n_x²> + <n_y²>) / (2 <n_z²>)`; above 1 the distribution is
    /// stretched in the transverse plane.
    pub fn elongation(&self) -> f64 {
        (self.xx + self.yy) / (2.0 * self.zz)
    }
}

impl SphereGrid {
    pub fn at(&self, k: usize, l: usize) -> f64 {
        self.values[k * self.phis.len() + l]
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.thetas
            .iter()
            .enumerate()
            .flat_map(move |(k, &t)| self.phis.iter().enumerate().map(move |(l, &p)| (t, p, self.at(k, l))))
    }

    fn quadrature(&self, weight: impl Fn(f64, f64) -> f64) -> f64 {
        let dt = PI / (self.thetas.len() - 1) as f64;
        let dp = 2.0 * PI / self.phis.len() as f64;
        let last = self.thetas.len() - 1;
        let mut acc = 0.0;
        for (k, &t) in self.thetas.iter().enumerate() {
            let trap = if k == 0 || k == last { 0.5 } else { 1.0 };
            for (l, &p) in self.phis.iter().enumerate() {
                acc += trap * t.sin() * weight(t, p) * self.at(k, l);
            }
        }
        acc * dt * dp
    }

    /// `∫ Q dΩ` by the trapezoid rule in θ and the periodic rule in φ.
    pub fn integral(&self) -> f64 {
        self.quadrature(|_, _| 1.0)
    }

    pub fn second_moments(&self) -> SecondMoments {
        let norm = self.integral();
        SecondMoments {
            xx: self.quadrature(|t, p| (t.sin() * p.cos()).powi(2)) / norm,
            yy: self.quadrature(|t, p| (t.sin() * p.sin()).powi(2)) / norm,
            zz: self.quadrature(|t, _| t.cos().powi(2)) / norm,
        }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Q on every grid point; θ rows are evaluated in parallel and collected in order.
pub fn husimi_grid(rho: &DenseMatrix, spec: SphereGridSpec) -> Result<SphereGrid> {
    let thetas = spec.thetas();
    let phis = spec.phis();
    let rows = thetas
        .par_iter()
        .map(|&t| phis.iter().map(|&p| husimi_q(rho, t, p)).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(SphereGrid {
        spec,
        thetas,
        phis,
        values: rows.into_iter().flatten().collect(),
    })
}
