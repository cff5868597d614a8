//! Hamiltonian, analytic spectrum and ground-state phases of the trimer
//!
//! ```text
//! H = J (s_a·S_b + S_b·s_c) + D (S_b^z)² − h (s_a^z + S_b^z + s_c^z)
//! ```
//!
//! with spin-1/2 end sites `a`, `c` and a spin-1 centre `b`. Basis states
//! are `|s_a^z, S_b^z, s_c^z>` with index `6·a + 2·b + c`, local orders
//! `(↑, ↓)` and `(+1, 0, −1)`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{ensure_finite, Error, Result};
use crate::linalg::{eig_hermitian, embed, spin_operators, DenseMatrix, HermitianEigen, SiteDims, SpinOperators};

pub const DIM: usize = 12;

/// Couplings in a common energy unit. `h = gμ_B·B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrimerParams {
    j: f64,
    d: f64,
    h: f64,
}

impl TrimerParams {
    pub fn new(j: f64, d: f64, h: f64) -> Result<Self> {
        ensure_finite("J", j)?;
        ensure_finite("D", d)?;
        ensure_finite("h", h)?;
        if j <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "J must be positive (antiferromagnetic), got {j}"
            )));
        }
        Ok(Self { j, d, h })
    }

    /// Reduced units, `J = 1`.
    pub fn reduced(d: f64, h: f64) -> Result<Self> {
        Self::new(1.0, d, h)
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn with_field(&self, h: f64) -> Result<Self> {
        Self::new(self.j, self.d, h)
    }
}

/// `6·a + 2·b + c` with `a, c ∈ {0 (↑), 1 (↓)}` and `b ∈ {0 (+1), 1 (0), 2 (−1)}`.
pub const fn basis_index(a: usize, b: usize, c: usize) -> usize {
    a * 6 + b * 2 + c
}

/// Total `S^z` of basis state `i`.
pub fn basis_sz(i: usize) -> i32 {
    let (a, b, c) = (i / 6, (i / 2) % 3, i % 2);
    let half = |k: usize| if k == 0 { 1 } else { -1 };
    // twice the spin-1/2 projections, so divide by 2 at the end
    (half(a) + half(c) + 2 * (1 - b as i32)) / 2
}

pub fn basis_label(i: usize) -> String {
    let arrow = |k: usize| if k == 0 { '↑' } else { '↓' };
    let mid = ["1", "0", "-1"][(i / 2) % 3];
    format!("{}{}{}", arrow(i / 6), mid, arrow(i % 2))
}

/// Single-site spin operators embedded in the 12-dimensional space.
#[derive(Debug)]
pub struct TrimerOperators {
    pub a: SpinOperators,
    pub b: SpinOperators,
    pub c: SpinOperators,
    /// Collective `J = s_a + S_b + s_c`.
    pub total: SpinOperators,
}

impl TrimerOperators {
    pub fn get() -> &'static TrimerOperators {
        static OPS: OnceLock<TrimerOperators> = OnceLock::new();
        OPS.get_or_init(|| {
            let dims = SiteDims::trimer();
            let half = spin_operators(0.5).expect("spin-1/2 is supported");
            let one = spin_operators(1.0).expect("spin-1 is supported");
            let place = |op: &SpinOperators, site| SpinOperators {
                x: embed(&op.x, &dims, site).expect("site dims match"),
                y: embed(&op.y, &dims, site).expect("site dims match"),
                z: embed(&op.z, &dims, site).expect("site dims match"),
            };
            let a = place(&half, 0);
            let b = place(&one, 1);
            let c = place(&half, 2);
            let sum = |f: fn(&SpinOperators) -> &DenseMatrix| &(f(&a) + f(&b)) + f(&c);
            let total = SpinOperators {
                x: sum(|s| &s.x),
                y: sum(|s| &s.y),
                z: sum(|s| &s.z),
            };
            TrimerOperators { a, b, c, total }
        })
    }
}

fn dot(u: &SpinOperators, v: &SpinOperators) -> DenseMatrix {
    let xx = &u.x * &v.x;
    let yy = &u.y * &v.y;
    let zz = &u.z * &v.z;
    &(&xx + &yy) + &zz
}

pub fn build_hamiltonian(p: &TrimerParams) -> DenseMatrix {
    let ops = TrimerOperators::get();
    let exchange = &dot(&ops.a, &ops.b) + &dot(&ops.b, &ops.c);
    let anisotropy = &ops.b.z * &ops.b.z;
    let zeeman = &ops.total.z;
    &(&exchange.scale_real(p.j) + &anisotropy.scale_real(p.d)) - &zeeman.scale_real(p.h)
}

/// Numerically diagonalised Hamiltonian.
pub fn spectrum_numeric(p: &TrimerParams) -> Result<HermitianEigen> {
    Ok(eig_hermitian(&build_hamiltonian(p))?)
}

/// Eigenvector amplitudes of the mixed `S^z` sectors.
///
/// `(a, b)` and `(c, d)` span the `|S^z| = 1` doublets, `(e, f)` and
/// `(g_amp, h_amp)` the `S^z = 0` pair that mixes `|±½, 0, ∓½>` with
/// `|±½, ∓1, ±½>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeSet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g_amp: f64,
    pub h_amp: f64,
}

impl AmplitudeSet {
    pub fn new(p: &TrimerParams) -> Self {
        let (j, d) = (p.j, p.d);
        let root1 = j.hypot(d / 2.0);
        let q_lo = d / 2.0 - root1;
        let q_hi = d / 2.0 + root1;
        let pair = |q: f64| (q / (2.0 * (j * j + q * q)).sqrt(), j / (j * j + q * q).sqrt());
        let (a, b) = pair(q_lo);
        let (c, dd) = pair(q_hi);

        let half = (d - j) / 2.0;
        let root0 = (2.0 * j * j + half * half).sqrt();
        let zero = |r: f64| (j / (2.0 * j * j + r * r).sqrt(), r / (4.0 * j * j + 2.0 * r * r).sqrt());
        let (e, f) = zero(half - root0);
        let (g_amp, h_amp) = zero(half + root0);
        Self {
            a,
            b,
            c,
            d: dd,
            e,
            f,
            g_amp,
            h_amp,
        }
    }
}

/// One eigenpair of the analytic spectrum; `index` is 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub index: usize,
    pub energy: f64,
    pub sz: i32,
    pub vector: [f64; DIM],
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub levels: Vec<Level>,
    pub amplitudes: AmplitudeSet,
}

impl SpectralDecomposition {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn level(&self, index: usize) -> &Level {
        &self.levels[index - 1]
    }

    pub fn ground_energy(&self) -> f64 {
        self.levels.iter().map(|l| l.energy).fold(f64::INFINITY, f64::min)
    }
}

/// Closed-form energies `E_1 … E_12` in level order.
pub fn energies_closed_form(p: &TrimerParams) -> [f64; DIM] {
    let (j, d, h) = (p.j, p.d, p.h);
    let w1 = 0.5 * (d * d + 4.0 * j * j).sqrt();
    let half = (d - j) / 2.0;
    let w0 = (half * half + 2.0 * j * j).sqrt();
    [
        0.0,
        d - j,
        d - h,
        d + h,
        d / 2.0 - h - w1,
        d / 2.0 - h + w1,
        d / 2.0 + h - w1,
        d / 2.0 + h + w1,
        half - w0,
        half + w0,
        d + j - 2.0 * h,
        d + j + 2.0 * h,
    ]
}

pub fn spectrum_closed_form(p: &TrimerParams) -> SpectralDecomposition {
    use std::f64::consts::FRAC_1_SQRT_2 as R;
    let amp = AmplitudeSet::new(p);
    let energies = energies_closed_form(p);
    let i = basis_index;

    let mut vectors = [[0.0; DIM]; DIM];
    let mut set = |k: usize, entries: &[(usize, f64)]| {
        for &(idx, v) in entries {
            vectors[k][idx] = v;
        }
    };
    set(0, &[(i(1, 1, 0), R), (i(0, 1, 1), -R)]);
    set(1, &[(i(1, 0, 1), R), (i(0, 2, 0), -R)]);
    set(2, &[(i(1, 0, 0), R), (i(0, 0, 1), -R)]);
    set(3, &[(i(1, 2, 0), R), (i(0, 2, 1), -R)]);
    set(4, &[(i(0, 0, 1), amp.a), (i(1, 0, 0), amp.a), (i(0, 1, 0), amp.b)]);
    set(5, &[(i(0, 0, 1), amp.c), (i(1, 0, 0), amp.c), (i(0, 1, 0), amp.d)]);
    set(6, &[(i(0, 2, 1), amp.a), (i(1, 2, 0), amp.a), (i(1, 1, 1), amp.b)]);
    set(7, &[(i(0, 2, 1), amp.c), (i(1, 2, 0), amp.c), (i(1, 1, 1), amp.d)]);
    set(
        8,
        &[
            (i(0, 1, 1), amp.e),
            (i(1, 1, 0), amp.e),
            (i(0, 2, 0), amp.f),
            (i(1, 0, 1), amp.f),
        ],
    );
    set(
        9,
        &[
            (i(0, 1, 1), amp.g_amp),
            (i(1, 1, 0), amp.g_amp),
            (i(0, 2, 0), amp.h_amp),
            (i(1, 0, 1), amp.h_amp),
        ],
    );
    set(10, &[(i(0, 0, 0), 1.0)]);
    set(11, &[(i(1, 2, 1), 1.0)]);

    const SZ: [i32; DIM] = [0, 0, 1, -1, 1, 1, -1, -1, 0, 0, 2, -2];
    let levels = (0..DIM)
        .map(|k| Level {
            index: k + 1,
            energy: energies[k],
            sz: SZ[k],
            vector: vectors[k],
        })
        .collect();
    SpectralDecomposition {
        levels,
        amplitudes: amp,
    }
}

/// Candidate zero-temperature phases, named after the level that is the
/// ground state. `Psi7` and `Psi12` are the field-reversed images of `Psi5`
/// and `Psi11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Psi9,
    Psi5,
    Psi11,
    Psi7,
    Psi12,
}

impl Phase {
    /// 1-based level index.
    pub fn level(self) -> usize {
        match self {
            Phase::Psi9 => 9,
            Phase::Psi5 => 5,
            Phase::Psi11 => 11,
            Phase::Psi7 => 7,
            Phase::Psi12 => 12,
        }
    }

    /// `M / M_s` with `M_s = 2 gμ_B`.
    pub fn magnetization_fraction(self) -> f64 {
        match self {
            Phase::Psi9 => 0.0,
            Phase::Psi5 => 0.5,
            Phase::Psi11 => 1.0,
            Phase::Psi7 => -0.5,
            Phase::Psi12 => -1.0,
        }
    }

    fn mirrored(self) -> Phase {
        match self {
            Phase::Psi5 => Phase::Psi7,
            Phase::Psi11 => Phase::Psi12,
            Phase::Psi7 => Phase::Psi5,
            Phase::Psi12 => Phase::Psi11,
            Phase::Psi9 => Phase::Psi9,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi{}", self.level())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundStatePhase {
    Pure(Phase),
    /// Exact degeneracy; the lower-field phase comes first.
    Boundary(Phase, Phase),
}

impl GroundStatePhase {
    /// Levels spanning the ground space.
    pub fn levels(self) -> Vec<usize> {
        match self {
            GroundStatePhase::Pure(p) => vec![p.level()],
            GroundStatePhase::Boundary(p, q) => vec![p.level(), q.level()],
        }
    }
}

impl fmt::Display for GroundStatePhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundStatePhase::Pure(p) => write!(f, "{p}"),
            GroundStatePhase::Boundary(p, q) => write!(f, "{p}|{q}"),
        }
    }
}

/// Critical fields for `h ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseBoundaries {
    /// `ψ9 → ψ5`.
    pub lower: f64,
    /// `ψ5 → ψ11`.
    pub upper: f64,
}

impl PhaseBoundaries {
    pub fn new(j: f64, d: f64) -> Self {
        let lower = j / 2.0 + (((d - j).powi(2) + 8.0 * j * j).sqrt() - (d * d + 4.0 * j * j).sqrt()) / 2.0;
        let upper = j + d / 2.0 + (d * d + 4.0 * j * j).sqrt() / 2.0;
        Self { lower, upper }
    }

    pub fn of(p: &TrimerParams) -> Self {
        Self::new(p.j, p.d)
    }

    /// Whether the half plateau has nonzero width.
    pub fn has_half_plateau(&self) -> bool {
        self.lower < self.upper
    }

    /// Direct `ψ9 → ψ11` crossing, relevant only without a half plateau.
    pub fn direct(j: f64, d: f64) -> f64 {
        let half = (d - j) / 2.0;
        let e9 = half - (half * half + 2.0 * j * j).sqrt();
        (d + j - e9) / 2.0
    }
}

/// Relative width of the band around a critical field that counts as degenerate.
pub const BOUNDARY_TOL: f64 = 1e-12;

pub fn ground_state(p: &TrimerParams) -> GroundStatePhase {
    let hb = PhaseBoundaries::of(p);
    let tol = BOUNDARY_TOL * p.j;
    let field = p.h.abs();
    let near = |x: f64| (field - x).abs() <= tol;

    let phase = if hb.has_half_plateau() {
        if near(hb.lower) {
            GroundStatePhase::Boundary(Phase::Psi9, Phase::Psi5)
        } else if near(hb.upper) {
            GroundStatePhase::Boundary(Phase::Psi5, Phase::Psi11)
        } else if field < hb.lower {
            GroundStatePhase::Pure(Phase::Psi9)
        } else if field < hb.upper {
            GroundStatePhase::Pure(Phase::Psi5)
        } else {
            GroundStatePhase::Pure(Phase::Psi11)
        }
    } else {
        let hd = PhaseBoundaries::direct(p.j, p.d);
        if near(hd) {
            GroundStatePhase::Boundary(Phase::Psi9, Phase::Psi11)
        } else if field < hd {
            GroundStatePhase::Pure(Phase::Psi9)
        } else {
            GroundStatePhase::Pure(Phase::Psi11)
        }
    };

    if p.h >= 0.0 {
        phase
    } else {
        match phase {
            GroundStatePhase::Pure(a) => GroundStatePhase::Pure(a.mirrored()),
            GroundStatePhase::Boundary(a, b) => GroundStatePhase::Boundary(a.mirrored(), b.mirrored()),
        }
    }
}

/// `M / M_s` at `T = 0`; degenerate fields are reported as an error.
pub fn zero_t_magnetization(p: &TrimerParams) -> Result<f64> {
    match ground_state(p) {
        GroundStatePhase::Pure(phase) => Ok(phase.magnetization_fraction()),
        b @ GroundStatePhase::Boundary(..) => Err(Error::Degenerate(b.to_string())),
    }
}
