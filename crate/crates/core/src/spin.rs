//! The four-level spin-3/2 model.
//!
//! Levels are labelled 1..4 in order of decreasing energy, which for a
//! Zeeman-dominated spectrum is the magnetic quantum number order
//! `m_z = -3/2, -1/2, +1/2, +3/2`. The same four levels double as the
//! computational basis of two virtual qubits R and S:
//!
//! | level | m_z  | R S |
//! |-------|------|-----|
//! | 1     | -3/2 | 1 1 |
//! | 2     | -1/2 | 1 0 |
//! | 3     | +1/2 | 0 1 |
//! | 4     | +3/2 | 0 0 |

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix, Dim, C64};

/// Relative tolerance below which two transition frequencies count as equal.
pub const EQUIDISTANCE_TOL: f64 = 1e-9;

/// Default dimensionless λ magnitude, the order of room-temperature
/// polarizations.
pub const DEFAULT_LAMBDA_SCALE: f64 = 1e-5;

/// Spin quantum numbers `m_z` of levels 1..4.
pub const MZ: [f64; 4] = [-1.5, -0.5, 0.5, 1.5];

/// A level label in `1..=4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u8);

impl Level {
    pub const ALL: [Level; 4] = [Level(1), Level(2), Level(3), Level(4)];

    pub fn new(m: usize) -> Result<Self> {
        if (1..=4).contains(&m) {
            Ok(Level(m as u8))
        } else {
            Err(Error::LevelOutOfRange(m))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A transition between two levels, written high-energy level first, so the
/// upper label is numerically smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelPair {
    upper: Level,
    lower: Level,
}

impl LevelPair {
    /// Transition a, levels 1-2.
    pub const A: LevelPair = LevelPair {
        upper: Level(1),
        lower: Level(2),
    };
    /// Transition b, levels 2-3.
    pub const B: LevelPair = LevelPair {
        upper: Level(2),
        lower: Level(3),
    };
    /// Transition c, levels 3-4.
    pub const C: LevelPair = LevelPair {
        upper: Level(3),
        lower: Level(4),
    };
    /// Transition d, levels 1-3 (forbidden in the axial configuration).
    pub const D: LevelPair = LevelPair {
        upper: Level(1),
        lower: Level(3),
    };
    /// Transition e, levels 2-4 (forbidden in the axial configuration).
    pub const E: LevelPair = LevelPair {
        upper: Level(2),
        lower: Level(4),
    };

    pub const ALL: [LevelPair; 6] = [
        LevelPair::A,
        LevelPair::B,
        LevelPair::C,
        LevelPair::D,
        LevelPair::E,
        LevelPair {
            upper: Level(1),
            lower: Level(4),
        },
    ];

    pub fn new(upper: usize, lower: usize) -> Result<Self> {
        let u = Level::new(upper)?;
        let l = Level::new(lower)?;
        if u == l {
            return Err(Error::InvalidPair {
                upper,
                lower,
                reason: "levels must differ",
            });
        }
        if u > l {
            return Err(Error::InvalidPair {
                upper,
                lower,
                reason: "write the higher-energy (smaller) level first",
            });
        }
        Ok(LevelPair { upper: u, lower: l })
    }

    pub fn upper(self) -> Level {
        self.upper
    }

    pub fn lower(self) -> Level {
        self.lower
    }

    /// The two levels this pair does not touch, ascending.
    pub fn complement(self) -> [Level; 2] {
        let mut rest = Level::ALL
            .into_iter()
            .filter(|&l| l != self.upper && l != self.lower);
        [rest.next().unwrap(), rest.next().unwrap()]
    }

    pub fn is_disjoint(self, other: LevelPair) -> bool {
        let mine = [self.upper, self.lower];
        !mine.contains(&other.upper) && !mine.contains(&other.lower)
    }
}

impl fmt::Display for LevelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.upper, self.lower)
    }
}

/// Logical value of the two virtual qubits, `r` written first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VirtualBits {
    pub r: u8,
    pub s: u8,
}

impl VirtualBits {
    pub fn new(r: u8, s: u8) -> Self {
        assert!(r <= 1 && s <= 1, "bits must be 0 or 1");
        VirtualBits { r, s }
    }
}

impl fmt::Display for VirtualBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.r, self.s)
    }
}

/// Level → `(r, s)` bits: 1→11, 2→10, 3→01, 4→00.
pub fn virtual_index(m: usize) -> Result<VirtualBits> {
    let level = Level::new(m)?;
    let k = 4 - level.index() as u8;
    Ok(VirtualBits {
        r: k >> 1,
        s: k & 1,
    })
}

/// Inverse of [`virtual_index`].
pub fn level_of(bits: VirtualBits) -> Level {
    Level(4 - (2 * bits.r + bits.s))
}

/// Single-entry 4×4 matrix `P_mn`.
pub fn projector(m: usize, n: usize) -> Result<ComplexMatrix> {
    Level::new(m)?;
    Level::new(n)?;
    Ok(ComplexMatrix::unit(Dim::Four, m, n))
}

/// Infallible `P_mn` for indices already known to be in range.
pub(crate) fn p(m: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::unit(Dim::Four, m, n)
}

/// Embeds an operator on R and one on S as an operator on the four levels.
///
/// Factor index 1 is logical `|1>` and index 2 is logical `|0>`, so
/// `embed_two_qubit(R22, 1)` is `P33 + P44`.
pub fn embed_two_qubit(op_r: &ComplexMatrix, op_s: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron(op_r, op_s)
}

/// Spin-3/2 angular momentum operators in the level basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperators {
    pub ix: ComplexMatrix,
    pub iy: ComplexMatrix,
    pub iz: ComplexMatrix,
    pub iplus: ComplexMatrix,
}

pub fn spin_operators() -> SpinOperators {
    let s3 = 3f64.sqrt();
    let iplus = p(2, 1).scale_real(s3) + p(3, 2).scale_real(2.0) + p(4, 3).scale_real(s3);
    let iminus = iplus.adjoint();
    let ix = (iplus + iminus).scale_real(0.5);
    let iy = (iplus - iminus).scale(C64::new(0.0, -0.5));
    let iz = ComplexMatrix::diagonal(&MZ).expect("4 finite values");
    SpinOperators { ix, iy, iz, iplus }
}

/// Inputs for [`build_model`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpinModelConfig {
    /// Zeeman scale ω0, rad/s.
    pub omega0: f64,
    /// Quadrupole scale ωQ, rad/s.
    #[serde(rename = "omegaQ")]
    pub omega_q: f64,
    /// Sets the magnitude of the λ values; stands in for ħ/kT.
    pub lambda_scale: f64,
    /// Level energies 1..4, overriding the ω0/ωQ formula.
    pub explicit_energies: Option<[f64; 4]>,
}

impl Default for SpinModelConfig {
    fn default() -> Self {
        SpinModelConfig {
            omega0: 10.0,
            omega_q: 1.0,
            lambda_scale: DEFAULT_LAMBDA_SCALE,
            explicit_energies: None,
        }
    }
}

/// Validated level structure with equilibrium parameters (ħ = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinModel {
    config: SpinModelConfig,
    energies: [f64; 4],
    lambdas: [f64; 4],
    z: f64,
}

/// First-order energy of sublevel `m_z` for a spin 3/2 in a Zeeman field
/// with an axial quadrupole coupling.
pub fn first_order_energy(omega0: f64, omega_q: f64, mz: f64) -> f64 {
    -omega0 * mz + omega_q * (mz * mz - 1.25)
}

pub fn build_model(cfg: SpinModelConfig) -> Result<SpinModel> {
    let energies = match cfg.explicit_energies {
        Some(e) => e,
        None => MZ.map(|mz| first_order_energy(cfg.omega0, cfg.omega_q, mz)),
    };
    if energies.iter().any(|e| !e.is_finite()) || !cfg.lambda_scale.is_finite() {
        return Err(Error::Model("non-finite parameter"));
    }
    // Levels must come out in descending energy in m_z order; relabeling
    // would break the spin-operator basis.
    if !energies.windows(2).all(|w| w[0] > w[1]) {
        return Err(Error::Model("level ordering"));
    }
    let gaps = [
        energies[0] - energies[1],
        energies[1] - energies[2],
        energies[2] - energies[3],
    ];
    let widest = gaps.iter().copied().fold(0.0, f64::max);
    for i in 0..3 {
        for j in i + 1..3 {
            if (gaps[i] - gaps[j]).abs() <= EQUIDISTANCE_TOL * widest {
                return Err(Error::Model("equidistant levels"));
            }
        }
    }
    let emax = energies.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let lambdas = energies.map(|e| -cfg.lambda_scale * e / emax);
    SpinModel::assemble(cfg, energies, lambdas)
}

impl SpinModel {
    fn assemble(config: SpinModelConfig, energies: [f64; 4], lambdas: [f64; 4]) -> Result<Self> {
        let denom = 4.0 + lambdas.iter().sum::<f64>();
        if !(denom.is_finite() && denom > 0.0) || lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::Model("lambda values give no valid normalization"));
        }
        Ok(SpinModel {
            config,
            energies,
            lambdas,
            z: 1.0 / denom,
        })
    }

    /// Replaces the λ values (and Z) while keeping the level energies.
    pub fn with_lambdas(self, lambdas: [f64; 4]) -> Result<Self> {
        SpinModel::assemble(self.config, self.energies, lambdas)
    }

    pub fn config(&self) -> &SpinModelConfig {
        &self.config
    }

    pub fn energies(&self) -> [f64; 4] {
        self.energies
    }

    pub fn energy(&self, level: Level) -> f64 {
        self.energies[level.index() - 1]
    }

    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }

    pub fn lambda(&self, level: Level) -> f64 {
        self.lambdas[level.index() - 1]
    }

    /// Normalization `Z = 1 / (4 + Σλ)`.
    pub fn z(&self) -> f64 {
        self.z
    }

    /// Transition frequency `Ω_mn = E_m − E_n`.
    pub fn omega(&self, m: Level, n: Level) -> f64 {
        self.energy(m) - self.energy(n)
    }

    pub fn pair_frequency(&self, pair: LevelPair) -> f64 {
        self.omega(pair.upper(), pair.lower())
    }

    pub fn omega12(&self) -> f64 {
        self.pair_frequency(LevelPair::A)
    }

    pub fn omega23(&self) -> f64 {
        self.pair_frequency(LevelPair::B)
    }

    pub fn omega34(&self) -> f64 {
        self.pair_frequency(LevelPair::C)
    }
}

/// `H0 = Σ E_m P_mm`.
pub fn free_hamiltonian(model: &SpinModel) -> ComplexMatrix {
    ComplexMatrix::diagonal(&model.energies()).expect("validated energies")
}
