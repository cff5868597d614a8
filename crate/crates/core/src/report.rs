//! All per-point observables in one record.

use serde::{Deserialize, Serialize};

use crate::coherence::coherence_report;
use crate::entanglement::negativity_report;
use crate::error::Result;
use crate::model::{ground_state, GroundStatePhase};
use crate::squeezing::squeezing_parameter;
use crate::thermo::{gibbs_free_energy, magnetization, thermal_state, ThermalPoint};

/// Selectable output columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Magnetization,
    NAb,
    NBc,
    NAc,
    NABc,
    NBAc,
    NCAb,
    NAbc,
    CAb,
    CAc,
    CAbc,
    Xi2,
    Phase,
    /// `ln Z`; undefined at `T = 0`.
    #[serde(alias = "z")]
    LnZ,
    #[serde(alias = "g")]
    Gibbs,
}

impl Quantity {
    pub const DEFAULT: [Quantity; 9] = [
        Quantity::Magnetization,
        Quantity::NAb,
        Quantity::NAc,
        Quantity::NAbc,
        Quantity::CAb,
        Quantity::CAc,
        Quantity::CAbc,
        Quantity::Xi2,
        Quantity::Phase,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Quantity::Magnetization => "m_over_ms",
            Quantity::NAb => "n_ab",
            Quantity::NBc => "n_bc",
            Quantity::NAc => "n_ac",
            Quantity::NABc => "n_a_bc",
            Quantity::NBAc => "n_b_ac",
            Quantity::NCAb => "n_c_ab",
            Quantity::NAbc => "n_abc",
            Quantity::CAb => "c_ab",
            Quantity::CAc => "c_ac",
            Quantity::CAbc => "c_abc",
            Quantity::Xi2 => "xi2",
            Quantity::Phase => "phase",
            Quantity::LnZ => "ln_z",
            Quantity::Gibbs => "gibbs",
        }
    }

    fn needs_negativity(self) -> bool {
        matches!(
            self,
            Quantity::NAb
                | Quantity::NBc
                | Quantity::NAc
                | Quantity::NABc
                | Quantity::NBAc
                | Quantity::NCAb
                | Quantity::NAbc
        )
    }

    fn needs_coherence(self) -> bool {
        matches!(self, Quantity::CAb | Quantity::CAc | Quantity::CAbc)
    }
}

/// Observables at one `(params, T)` point. Entries that were not requested
/// are `None`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResourceReport {
    /// `M / M_s` with `M_s = 2 gμ_B`.
    pub m_over_ms: Option<f64>,
    pub n_ab: Option<f64>,
    pub n_bc: Option<f64>,
    pub n_ac: Option<f64>,
    pub n_a_bc: Option<f64>,
    pub n_b_ac: Option<f64>,
    pub n_c_ab: Option<f64>,
    pub n_abc: Option<f64>,
    pub c_ab: Option<f64>,
    pub c_ac: Option<f64>,
    pub c_abc: Option<f64>,
    pub xi2: Option<f64>,
    pub phase: Option<GroundStatePhase>,
    pub ln_z: Option<f64>,
    pub gibbs: Option<f64>,
}

/// A single output value.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl ResourceReport {
    /// Evaluates only what `quantities` asks for.
    pub fn evaluate(point: &ThermalPoint, quantities: &[Quantity]) -> Result<Self> {
        let wants = |q: Quantity| quantities.contains(&q);
        let needs_state = quantities
            .iter()
            .any(|&q| q.needs_negativity() || q.needs_coherence() || q == Quantity::Xi2);
        let state = if needs_state { Some(thermal_state(point)?) } else { None };

        let mut r = ResourceReport::default();
        if wants(Quantity::Magnetization) {
            r.m_over_ms = Some(magnetization(point)? / 2.0);
        }
        if let Some(s) = &state {
            if quantities.iter().any(|q| q.needs_negativity()) {
                let n = negativity_report(s)?;
                r.n_ab = Some(n.n_ab);
                r.n_bc = Some(n.n_bc);
                r.n_ac = Some(n.n_ac);
                r.n_a_bc = Some(n.n_a_bc);
                r.n_b_ac = Some(n.n_b_ac);
                r.n_c_ab = Some(n.n_c_ab);
                r.n_abc = Some(n.n_abc);
            }
            if quantities.iter().any(|q| q.needs_coherence()) {
                let c = coherence_report(s)?;
                r.c_ab = Some(c.c_ab);
                r.c_ac = Some(c.c_ac);
                r.c_abc = Some(c.c_abc);
            }
            if wants(Quantity::Xi2) {
                r.xi2 = Some(squeezing_parameter(s));
            }
        }
        if wants(Quantity::Phase) {
            r.phase = Some(ground_state(point.params()));
        }
        if wants(Quantity::LnZ) {
            r.ln_z = Some(crate::thermo::ln_partition_function_closed(point)?);
        }
        if wants(Quantity::Gibbs) {
            r.gibbs = Some(gibbs_free_energy(point)?);
        }
        Ok(r)
    }

    /// Everything except `ln Z` (which is undefined at `T = 0`).
    pub fn full(point: &ThermalPoint) -> Result<Self> {
        Self::evaluate(point, &Quantity::DEFAULT)
    }

    pub fn cell(&self, q: Quantity) -> Option<Cell> {
        let num = |v: Option<f64>| v.map(Cell::Num);
        match q {
            Quantity::Magnetization => num(self.m_over_ms),
            Quantity::NAb => num(self.n_ab),
            Quantity::NBc => num(self.n_bc),
            Quantity::NAc => num(self.n_ac),
            Quantity::NABc => num(self.n_a_bc),
            Quantity::NBAc => num(self.n_b_ac),
            Quantity::NCAb => num(self.n_c_ab),
            Quantity::NAbc => num(self.n_abc),
            Quantity::CAb => num(self.c_ab),
            Quantity::CAc => num(self.c_ac),
            Quantity::CAbc => num(self.c_abc),
            Quantity::Xi2 => num(self.xi2),
            Quantity::Phase => self.phase.map(|p| Cell::Text(p.to_string())),
            Quantity::LnZ => num(self.ln_z),
            Quantity::Gibbs => num(self.gibbs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Phase, TrimerParams};

    #[test]
    fn selective_evaluation() {
        let p = ThermalPoint::new(TrimerParams::reduced(0.05, 1.5).unwrap(), 0.0).unwrap();
        let r = ResourceReport::evaluate(&p, &[Quantity::Magnetization, Quantity::Phase]).unwrap();
        assert_eq!(r.m_over_ms, Some(0.5));
        assert_eq!(r.phase, Some(GroundStatePhase::Pure(Phase::Psi5)));
        assert_eq!(r.n_abc, None);
        assert_eq!(r.cell(Quantity::Phase), Some(Cell::Text("psi5".into())));
    }

    #[test]
    fn full_report_is_finite() {
        let p = ThermalPoint::new(TrimerParams::reduced(0.05, 0.7).unwrap(), 0.4).unwrap();
        let r = ResourceReport::full(&p).unwrap();
        for q in Quantity::DEFAULT {
            match r.cell(q).unwrap() {
                Cell::Num(x) => assert!(x.is_finite()),
                Cell::Text(s) => assert!(!s.is_empty()),
            }
        }
    }

    #[test]
    fn ln_z_rejects_zero_temperature() {
        let p = ThermalPoint::new(TrimerParams::reduced(0.05, 0.7).unwrap(), 0.0).unwrap();
        assert!(ResourceReport::evaluate(&p, &[Quantity::LnZ]).is_err());
    }
}
