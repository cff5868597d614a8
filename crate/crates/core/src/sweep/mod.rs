//! Grid evaluation behind the command-line front end.
//!
//! Grid points are evaluated on a dedicated worker pool and collected in
//! grid order (anisotropy outermost, temperature innermost), so output does
//! not depend on the worker count.

pub mod config;
pub mod output;

use std::fs::File;
use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

pub use config::{
    recipe, recipe_names, Axis, Command, ConfigError, Format, GridSpec, HusimiSpec, MaterialSpec, OutputSpec,
    SweepConfig, ThresholdSpec, Units, SCHEMA_VERSION,
};
pub use output::{fmt12, round12, Table};

use crate::entanglement::{threshold_temperature, ThresholdScan};
use crate::error::{Error, ThresholdError};
use crate::husimi::{husimi_grid, SphereGridSpec};
use crate::model::{spectrum_numeric, PhaseBoundaries, TrimerOperators, TrimerParams};
use crate::report::{Cell, Quantity, ResourceReport};
use crate::thermo::{thermal_state, ThermalPoint};
use crate::units::PhysicalParams;

pub const DEFAULT_HUSIMI_GRID: (usize, usize) = (91, 72);
const PHASE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 2 for configuration and I/O problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Numerical(_) => 3,
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

/// A grid point in reduced units, with its physical image when the run uses
/// physical units.
#[derive(Clone, Copy, Debug, PartialEq)]
struct GridPoint {
    d: f64,
    h: f64,
    t: f64,
    physical: Option<[f64; 3]>,
}

struct Axes {
    units: Units,
    material: Option<PhysicalParams>,
    anisotropy: Vec<f64>,
    field: Vec<f64>,
    temperature: Option<Vec<f64>>,
}

impl Axes {
    fn resolve(cfg: &SweepConfig) -> RunResult<Self> {
        let units = cfg.units()?;
        let material = match &cfg.material {
            Some(m) => Some(m.resolve()?),
            None => None,
        };
        let grid = &cfg.grid;
        let field = grid
            .field
            .as_ref()
            .ok_or_else(|| ConfigError::new("grid.field is required"))?
            .points("field")?;
        let anisotropy = match (&grid.anisotropy, material) {
            (Some(a), _) => a.points("anisotropy")?,
            (None, Some(m)) => vec![m.d_cm],
            (None, None) => return Err(ConfigError::new("grid.anisotropy is required with reduced units").into()),
        };
        let temperature = grid.temperature.as_ref().map(|a| a.points("temperature")).transpose()?;
        if let Some(t) = &temperature {
            if let Some(x) = t.iter().find(|&&x| x < 0.0) {
                return Err(ConfigError::new(format!("grid.temperature: negative value {x}")).into());
            }
        }
        Ok(Self {
            units,
            material,
            anisotropy,
            field,
            temperature,
        })
    }

    fn temperatures(&self) -> RunResult<&[f64]> {
        Ok(self
            .temperature
            .as_deref()
            .ok_or_else(|| ConfigError::new("grid.temperature is required"))?)
    }

    fn point(&self, d: f64, h: f64, t: f64) -> GridPoint {
        match self.material {
            None => GridPoint {
                d,
                h,
                t,
                physical: None,
            },
            Some(m) => GridPoint {
                d: d / m.j_cm,
                h: m.reduced_field(h),
                t: m.reduced_temperature(t),
                physical: Some([d, h, t]),
            },
        }
    }

    fn coordinate_columns(&self, with_t: bool) -> Vec<String> {
        let mut cols = vec!["d_over_j", "h_over_j"];
        if with_t {
            cols.push("t_over_j");
        }
        if self.material.is_some() {
            cols.extend(["d_cm", "b_tesla"]);
            if with_t {
                cols.push("t_kelvin");
            }
        }
        cols.into_iter().map(String::from).collect()
    }

    fn coordinate_cells(&self, p: &GridPoint, with_t: bool) -> Vec<Cell> {
        let mut cells = vec![Cell::Num(p.d), Cell::Num(p.h)];
        if with_t {
            cells.push(Cell::Num(p.t));
        }
        if let Some([d, b, t]) = p.physical {
            cells.extend([Cell::Num(d), Cell::Num(b)]);
            if with_t {
                cells.push(Cell::Num(t));
            }
        }
        cells
    }
}

fn pool(cfg: &SweepConfig) -> RunResult<rayon::ThreadPool> {
    let workers = match cfg.output.workers {
        Some(0) => return Err(ConfigError::new("output.workers must be at least 1").into()),
        Some(n) => n,
        None => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ConfigError::new(format!("cannot start worker pool: {e}")).into())
}

/// Evaluates `f` on every item in order using the configured workers.
fn ordered_map<T: Sync, R: Send>(
    cfg: &SweepConfig,
    items: &[T],
    f: impl Fn(&T) -> RunResult<R> + Sync + Send,
) -> RunResult<Vec<R>> {
    pool(cfg)?.install(|| items.par_iter().map(&f).collect())
}

pub fn run(cfg: &SweepConfig) -> RunResult<Table> {
    match cfg.command() {
        Command::Sweep => run_sweep(cfg),
        Command::Threshold => run_threshold(cfg),
        Command::Husimi => run_husimi(cfg),
        Command::Phase => run_phase(cfg),
    }
}

/// One row per `(D, B, T)` point with the selected quantities.
pub fn run_sweep(cfg: &SweepConfig) -> RunResult<Table> {
    let axes = Axes::resolve(cfg)?;
    let quantities = cfg.quantities()?;
    let temps = axes.temperatures()?;
    if quantities.contains(&Quantity::LnZ) && temps.contains(&0.0) {
        return Err(
            ConfigError::new("ln_z is undefined at T = 0; remove it or start the temperature grid above 0").into(),
        );
    }
    let mut points = Vec::with_capacity(axes.anisotropy.len() * axes.field.len() * temps.len());
    for &d in &axes.anisotropy {
        for &h in &axes.field {
            for &t in temps {
                points.push(axes.point(d, h, t));
            }
        }
    }
    let rows = ordered_map(cfg, &points, |p| {
        let point = ThermalPoint::new(TrimerParams::reduced(p.d, p.h)?, p.t)?;
        let report = ResourceReport::evaluate(&point, &quantities)?;
        let mut cells = axes.coordinate_cells(p, true);
        for &q in &quantities {
            let cell = report.cell(q).expect("requested quantity is evaluated");
            if let Cell::Num(x) = cell {
                if !x.is_finite() {
                    return Err(Error::InvalidParameter(format!("{} is not finite at {p:?}", q.column())).into());
                }
            }
            cells.push(cell);
        }
        Ok(cells)
    })?;
    let mut columns = axes.coordinate_columns(true);
    columns.extend(quantities.iter().map(|q| q.column().to_string()));
    let block = if temps.len() > 1 { temps.len() } else { axes.field.len() };
    Ok(Table {
        command: Command::Sweep,
        units: axes.units,
        meta: vec![],
        columns,
        rows,
        block: Some(block),
    })
}

fn threshold_quantity(q: Quantity) -> RunResult<Quantity> {
    match q {
        Quantity::NAb
        | Quantity::NBc
        | Quantity::NAc
        | Quantity::NABc
        | Quantity::NBAc
        | Quantity::NCAb
        | Quantity::NAbc => Ok(q),
        other => Err(ConfigError::new(format!(
            "threshold.quantity must be a negativity, got `{}`",
            other.column()
        ))
        .into()),
    }
}

/// Threshold temperature of a negativity at each `(D, B)` point.
///
/// `status` is `ok`, `zero` (never positive on the scan) or `not_terminated`
/// (still positive at `t_max`). For the latter two `threshold` holds the scan
/// end that was reached and `onset` is `0`.
pub fn run_threshold(cfg: &SweepConfig) -> RunResult<Table> {
    let axes = Axes::resolve(cfg)?;
    let spec = cfg
        .threshold
        .as_ref()
        .ok_or_else(|| ConfigError::new("threshold command needs a [threshold] section"))?;
    let quantity = threshold_quantity(spec.quantity)?;
    let defaults = ThresholdScan::default();
    let to_reduced = |t: f64| match axes.material {
        Some(m) => m.reduced_temperature(t),
        None => t,
    };
    let from_reduced = |t: f64| match axes.material {
        Some(m) => m.temperature_kelvin(t),
        None => t,
    };
    if axes.material.is_some() && (spec.t_min.is_none() || spec.t_max.is_none()) {
        return Err(ConfigError::new("physical threshold scans need t_min and t_max in Kelvin").into());
    }
    let scan = ThresholdScan {
        t_min: spec.t_min.map(to_reduced).unwrap_or(defaults.t_min),
        t_max: spec.t_max.map(to_reduced).unwrap_or(defaults.t_max),
        samples: spec.samples.unwrap_or(defaults.samples),
        tol: spec.tol.map(to_reduced).unwrap_or(defaults.tol),
    };
    if !(scan.t_min > 0.0 && scan.t_max > scan.t_min && scan.samples >= 2 && scan.tol > 0.0) {
        return Err(ConfigError::new("threshold scan needs 0 < t_min < t_max, samples >= 2 and tol > 0").into());
    }

    let mut points = Vec::new();
    for &d in &axes.anisotropy {
        for &h in &axes.field {
            points.push(axes.point(d, h, 0.0));
        }
    }
    let physical = axes.material.is_some();
    let rows = ordered_map(cfg, &points, |p| {
        let params = TrimerParams::reduced(p.d, p.h)?;
        let outcome = threshold_temperature(&scan, |t| {
            let r = ResourceReport::evaluate(&ThermalPoint::new(params, t)?, &[quantity])?;
            match r.cell(quantity) {
                Some(Cell::Num(x)) => Ok(x),
                _ => unreachable!("negativities are numeric"),
            }
        });
        let (threshold, onset, windows, reentrant, status) = match outcome {
            Ok(r) => (r.threshold, r.windows[0].0, r.windows.len(), r.reentrant, "ok"),
            Err(Error::Threshold(ThresholdError::IdenticallyZero { .. })) => (scan.t_min, 0.0, 0, false, "zero"),
            Err(Error::Threshold(ThresholdError::NotTerminated { .. })) => {
                (scan.t_max, 0.0, 0, false, "not_terminated")
            }
            Err(e) => return Err(e.into()),
        };
        let mut cells = axes.coordinate_cells(p, false);
        cells.push(Cell::Num(threshold));
        cells.push(Cell::Num(onset));
        if physical {
            cells.push(Cell::Num(from_reduced(threshold)));
            cells.push(Cell::Num(from_reduced(onset)));
        }
        cells.push(Cell::Num(windows as f64));
        cells.push(Cell::Text(reentrant.to_string()));
        cells.push(Cell::Text(status.to_string()));
        Ok(cells)
    })?;

    let mut columns = axes.coordinate_columns(false);
    columns.extend(["threshold_over_j", "onset_over_j"].map(String::from));
    if physical {
        columns.extend(["threshold_kelvin", "onset_kelvin"].map(String::from));
    }
    columns.extend(["windows", "reentrant", "status"].map(String::from));
    Ok(Table {
        command: Command::Threshold,
        units: axes.units,
        meta: vec![("quantity".into(), quantity.column().into())],
        columns,
        rows,
        block: Some(axes.field.len()),
    })
}

/// Husimi Q on a `(θ, φ)` grid for a single thermal state.
pub fn run_husimi(cfg: &SweepConfig) -> RunResult<Table> {
    let axes = Axes::resolve(cfg)?;
    let temps = axes.temperatures()?;
    let single = |v: &[f64], name: &str| -> RunResult<f64> {
        match v {
            [x] => Ok(*x),
            _ => Err(ConfigError::new(format!(
                "husimi needs exactly one grid.{name} value (one Q-grid per run)"
            ))
            .into()),
        }
    };
    let p = axes.point(
        single(&axes.anisotropy, "anisotropy")?,
        single(&axes.field, "field")?,
        single(temps, "temperature")?,
    );
    let (n_theta, n_phi) = cfg
        .husimi
        .as_ref()
        .map(|h| (h.n_theta, h.n_phi))
        .unwrap_or(DEFAULT_HUSIMI_GRID);
    let spec = SphereGridSpec::new(n_theta, n_phi).map_err(|e| ConfigError::new(e.to_string()))?;
    let state = thermal_state(&ThermalPoint::new(TrimerParams::reduced(p.d, p.h)?, p.t)?)?;
    let grid = pool(cfg)?.install(|| husimi_grid(&state.rho, spec))?;

    let mut meta = vec![
        ("d_over_j".to_string(), fmt12(p.d)),
        ("h_over_j".to_string(), fmt12(p.h)),
        ("t_over_j".to_string(), fmt12(p.t)),
    ];
    if let Some([d, b, t]) = p.physical {
        meta.push(("d_cm".into(), fmt12(d)));
        meta.push(("b_tesla".into(), fmt12(b)));
        meta.push(("t_kelvin".into(), fmt12(t)));
    }
    meta.push(("integral".into(), fmt12(grid.integral())));
    meta.push(("elongation".into(), fmt12(grid.second_moments().elongation())));
    meta.push(("q_max".into(), fmt12(grid.max())));
    meta.push(("q_min".into(), fmt12(grid.min())));
    Ok(Table {
        command: Command::Husimi,
        units: axes.units,
        meta,
        columns: ["theta", "phi", "q"].map(String::from).to_vec(),
        rows: grid
            .rows()
            .map(|(t, p, q)| vec![Cell::Num(t), Cell::Num(p), Cell::Num(q)])
            .collect(),
        block: Some(n_phi),
    })
}

/// `2 <S_z>` of the numerically lowest eigenvector, rounded to an integer.
fn ground_sector(d: f64, h: f64) -> RunResult<i64> {
    // exactly at h = 0 the Sz = ±1 doublets are degenerate
    let h = if h == 0.0 { 1e-9 } else { h };
    let eig = spectrum_numeric(&TrimerParams::reduced(d, h)?)?;
    let v = eig.vector(0);
    let sz = TrimerOperators::get().total.z.quadratic_form(&v).re;
    Ok(sz.round() as i64)
}

/// Zero-temperature critical fields per anisotropy value: analytic
/// boundaries next to a numeric scan of the ground-state `S_z` sector,
/// refined by bisection.
pub fn run_phase(cfg: &SweepConfig) -> RunResult<Table> {
    let axes = Axes::resolve(cfg)?;
    if axes.units != Units::Reduced {
        return Err(ConfigError::new("the phase command works in reduced units").into());
    }
    if axes.field.len() < 2 {
        return Err(ConfigError::new("phase scan needs at least two field values").into());
    }
    let per_d = ordered_map(cfg, &axes.anisotropy, |&d| {
        let sectors = axes
            .field
            .iter()
            .map(|&h| ground_sector(d, h))
            .collect::<RunResult<Vec<i64>>>()?;
        let hb = PhaseBoundaries::new(1.0, d);
        let mut rows = Vec::new();
        for k in 1..axes.field.len() {
            let (from, to) = (sectors[k - 1], sectors[k]);
            if from == to {
                continue;
            }
            let (mut lo, mut hi) = (axes.field[k - 1], axes.field[k]);
            while hi - lo > PHASE_TOL {
                let mid = 0.5 * (lo + hi);
                if ground_sector(d, mid)? == from {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let numeric = 0.5 * (lo + hi);
            let (kind, analytic) = match (from, to) {
                (0, 1) if hb.has_half_plateau() => ("lower", Some(hb.lower)),
                (1, 2) if hb.has_half_plateau() => ("upper", Some(hb.upper)),
                (0, 2) if !hb.has_half_plateau() => ("direct", Some(PhaseBoundaries::direct(1.0, d))),
                _ => ("other", None),
            };
            rows.push(vec![
                Cell::Num(d),
                Cell::Text(kind.into()),
                Cell::Num(from as f64),
                Cell::Num(to as f64),
                analytic.map(Cell::Num).unwrap_or(Cell::Text(String::new())),
                Cell::Num(numeric),
            ]);
        }
        Ok(rows)
    })?;
    Ok(Table {
        command: Command::Phase,
        units: Units::Reduced,
        meta: vec![],
        columns: ["d_over_j", "boundary", "from_sz", "to_sz", "h_analytic", "h_numeric"]
            .map(String::from)
            .to_vec(),
        rows: per_d.into_iter().flatten().collect(),
        block: None,
    })
}

/// Writes the table to `path`, or to stdout when `path` is `None`.
pub fn emit(table: &Table, format: Format, path: Option<&str>) -> RunResult<()> {
    let bytes = table.render(format)?;
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| std::io::Error::new(e.kind(), format!("{p}: {e}")))?;
            f.write_all(&bytes)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&bytes)?;
            lock.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reduced(toml: &str) -> SweepConfig {
        SweepConfig::from_toml(&format!("schema_version = 1\nunits = \"reduced\"\n{toml}")).unwrap()
    }

    #[test]
    fn sweep_rows_follow_grid_order() {
        let cfg = reduced(
            "quantities = [\"magnetization\"]\n\
             grid.anisotropy = { values = [0.0, 0.5] }\n\
             grid.field = { values = [0.0, 1.5] }\n\
             grid.temperature = { values = [0.0, 0.1, 0.2] }\n",
        );
        let t = run(&cfg).unwrap();
        assert_eq!(t.rows.len(), 12);
        assert_eq!(t.columns, ["d_over_j", "h_over_j", "t_over_j", "m_over_ms"]);
        assert_eq!(t.rows[4][..3], [Cell::Num(0.0), Cell::Num(1.5), Cell::Num(0.1)]);
        assert_eq!(t.rows[6][0], Cell::Num(0.5));
    }

    #[test]
    fn ln_z_on_zero_temperature_is_a_config_error() {
        let cfg = reduced(
            "quantities = [\"ln_z\"]\n\
             grid.anisotropy = { values = [0.0] }\n\
             grid.field = { values = [0.0] }\n\
             grid.temperature = { values = [0.0] }\n",
        );
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut cfg = recipe("fig2d").unwrap();
        cfg.grid.temperature = Some(Axis::from_values(vec![0.0, 0.3, 1.2]));
        cfg.output.workers = Some(1);
        let a = run(&cfg).unwrap().to_csv().unwrap();
        cfg.output.workers = Some(3);
        let b = run(&cfg).unwrap().to_csv().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn phase_scan_matches_analytic_boundaries() {
        let t = run(&recipe("phase-d0").unwrap()).unwrap();
        assert_eq!(t.rows.len(), 2);
        for row in &t.rows {
            match (&row[4], &row[5]) {
                (Cell::Num(a), Cell::Num(n)) => assert!((a - n).abs() < 1e-9),
                other => panic!("unexpected cells {other:?}"),
            }
        }
        assert_eq!(t.rows[0][4], Cell::Num(1.0));
        assert_eq!(t.rows[1][4], Cell::Num(2.0));
    }

    #[test]
    fn numeric_boundaries_track_analytic_ones() {
        let cfg = reduced(
            "command = \"phase\"\n\
             grid.anisotropy = { min = -1.0, max = 2.0, count = 7 }\n\
             grid.field = { min = 0.0, max = 4.0, count = 41 }\n",
        );
        let t = run(&cfg).unwrap();
        assert_eq!(t.rows.len(), 14);
        for row in &t.rows {
            assert_ne!(row[1], Cell::Text("other".into()));
            match (&row[4], &row[5]) {
                (Cell::Num(a), Cell::Num(n)) => assert!((a - n).abs() < 1e-9, "{row:?}"),
                other => panic!("unexpected cells {other:?}"),
            }
        }
    }

    #[test]
    fn threshold_status_rows() {
        let cfg = reduced(
            "command = \"threshold\"\n\
             grid.anisotropy = { values = [0.05] }\n\
             grid.field = { values = [0.0, 3.0] }\n\
             threshold = { quantity = \"n_abc\", t_min = 0.001, t_max = 3.0, samples = 60, tol = 1e-4 }\n",
        );
        let t = run(&cfg).unwrap();
        let status = t.column("status").unwrap();
        assert_eq!(status[0], &Cell::Text("ok".into()));
        match t.column("threshold_over_j").unwrap()[0] {
            Cell::Num(x) => assert!((x - 1.13465).abs() < 1e-3),
            c => panic!("{c:?}"),
        }
        let bad = reduced(
            "command = \"threshold\"\n\
             grid.anisotropy = { values = [0.05] }\n\
             grid.field = { values = [0.0] }\n\
             threshold = { quantity = \"xi2\" }\n",
        );
        assert_eq!(run(&bad).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn husimi_requires_single_point() {
        let mut cfg = recipe("fig5a").unwrap();
        cfg.husimi = Some(HusimiSpec { n_theta: 19, n_phi: 8 });
        let t = run(&cfg).unwrap();
        assert_eq!(t.rows.len(), 19 * 8);
        assert!(t.meta.iter().any(|(k, _)| k == "elongation"));
        cfg.grid.field = Some(Axis::from_values(vec![0.0, 1.0]));
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn physical_sweep_converts_axes() {
        let mut cfg = recipe("fig6a").unwrap();
        cfg.grid.field = Some(Axis::from_values(vec![50.0]));
        cfg.grid.temperature = Some(Axis::from_values(vec![32.804]));
        let t = run(&cfg).unwrap();
        assert!(t.columns.contains(&"b_tesla".to_string()));
        match (&t.rows[0][1], &t.rows[0][2]) {
            (Cell::Num(h), Cell::Num(tr)) => {
                assert!((h - 2.28006).abs() < 1e-5);
                assert!((tr - 1.0).abs() < 1e-4);
            }
            other => panic!("{other:?}"),
        }
    }
}
