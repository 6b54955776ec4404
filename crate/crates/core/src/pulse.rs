//! Propagators of transition-selective RF pulses and the named gates built
//! from them.
//!
//! A pulse resonant with levels `(m, n)` rotates that two-level subspace by
//! `φ` and leaves the other two levels alone. With `{k, l}` the untouched
//! levels, a y-polarized pulse is
//!
//! ```text
//! U = [P_mm + P_nn] cos(φ/2) + [P_kk + P_ll] + [P_nm − P_mn] sin(φ/2)
//! ```
//!
//! and an x-polarized pulse replaces the last bracket by
//! `i [P_nm + P_mn] sin(φ/2)`.
//!
//! Schedules apply in list order: the propagator of `[first, second]` is
//! `U_second · U_first`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Dim, C64};
use crate::spin::{embed_two_qubit, p, spin_operators, LevelPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    X,
    Y,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::X => "x",
            Polarization::Y => "y",
        })
    }
}

/// One transition-selective pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec {
    pair: LevelPair,
    polarization: Polarization,
    angle: f64,
}

impl PulseSpec {
    pub fn new(pair: LevelPair, polarization: Polarization, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::Pulse("rotation angle must be finite"));
        }
        Ok(PulseSpec {
            pair,
            polarization,
            angle,
        })
    }

    pub fn y(pair: LevelPair, angle: f64) -> Result<Self> {
        Self::new(pair, Polarization::Y, angle)
    }

    pub fn x(pair: LevelPair, angle: f64) -> Result<Self> {
        Self::new(pair, Polarization::X, angle)
    }

    pub fn pair(&self) -> LevelPair {
        self.pair
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// Simultaneous pulses on two disjoint pairs with a common angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoFrequencyPulseSpec {
    first: LevelPair,
    second: LevelPair,
    polarization: Polarization,
    angle: f64,
}

impl TwoFrequencyPulseSpec {
    pub fn new(
        first: LevelPair,
        second: LevelPair,
        polarization: Polarization,
        angle: f64,
    ) -> Result<Self> {
        if !first.is_disjoint(second) {
            return Err(Error::Pulse("pairs overlap"));
        }
        if !angle.is_finite() {
            return Err(Error::Pulse("rotation angle must be finite"));
        }
        Ok(TwoFrequencyPulseSpec {
            first,
            second,
            polarization,
            angle,
        })
    }

    pub fn y(first: LevelPair, second: LevelPair, angle: f64) -> Result<Self> {
        Self::new(first, second, Polarization::Y, angle)
    }

    pub fn pairs(&self) -> (LevelPair, LevelPair) {
        (self.first, self.second)
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// Amplitude and length of a rectangular RF pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalPulseParams {
    /// γ·H, rad/s.
    pub gamma_h1: f64,
    /// Pulse length, s.
    pub duration: f64,
}

impl PhysicalPulseParams {
    pub fn new(gamma_h1: f64, duration: f64) -> Result<Self> {
        if !(gamma_h1.is_finite() && gamma_h1 > 0.0) {
            return Err(Error::Pulse("RF amplitude must be positive"));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::Pulse("duration must be nonnegative"));
        }
        Ok(PhysicalPulseParams { gamma_h1, duration })
    }
}

/// Rotation angle `2 γH t |<m|I_pol|n>|` produced by a physical pulse.
pub fn angle_from_physical(
    params: PhysicalPulseParams,
    pair: LevelPair,
    polarization: Polarization,
) -> Result<f64> {
    let ops = spin_operators();
    let op = match polarization {
        Polarization::X => ops.ix,
        Polarization::Y => ops.iy,
    };
    let element = op.get(pair.upper().index(), pair.lower().index()).norm();
    if element == 0.0 {
        return Err(Error::Pulse("transition not driven"));
    }
    Ok(2.0 * params.gamma_h1 * params.duration * element)
}

pub fn single_pulse_propagator(spec: &PulseSpec) -> ComplexMatrix {
    let (m, n) = (spec.pair.upper().index(), spec.pair.lower().index());
    let [k, l] = spec.pair.complement().map(|lv| lv.index());
    let half = spec.angle / 2.0;
    let rotated = (p(m, m) + p(n, n)).scale_real(half.cos());
    let idle = p(k, k) + p(l, l);
    let flip = match spec.polarization {
        Polarization::Y => (p(n, m) - p(m, n)).scale_real(half.sin()),
        Polarization::X => (p(n, m) + p(m, n)).scale(C64::new(0.0, half.sin())),
    };
    rotated + idle + flip
}

/// Product of the two commuting single-pair propagators.
pub fn two_frequency_propagator(spec: &TwoFrequencyPulseSpec) -> ComplexMatrix {
    let a = PulseSpec {
        pair: spec.first,
        polarization: spec.polarization,
        angle: spec.angle,
    };
    let b = PulseSpec {
        pair: spec.second,
        polarization: spec.polarization,
        angle: spec.angle,
    };
    single_pulse_propagator(&b) * single_pulse_propagator(&a)
}

/// `cos(φ/2)·1 + sin(φ/2)(X21 − X12)` on one virtual qubit.
pub fn virtual_ry(angle: f64) -> ComplexMatrix {
    let u = |r, c| ComplexMatrix::unit(Dim::Two, r, c);
    let half = angle / 2.0;
    ComplexMatrix::identity(Dim::Two).scale_real(half.cos())
        + (u(2, 1) - u(1, 2)).scale_real(half.sin())
}

/// Rotation of virtual qubit S: two-frequency pulse on 1-2 and 3-4.
pub fn rotation_s(angle: f64) -> ComplexMatrix {
    two_frequency_propagator(
        &TwoFrequencyPulseSpec::y(LevelPair::A, LevelPair::C, angle).expect("disjoint pairs"),
    )
}

/// Rotation of virtual qubit R: two-frequency pulse on 1-3 and 2-4.
pub fn rotation_r(angle: f64) -> ComplexMatrix {
    two_frequency_propagator(
        &TwoFrequencyPulseSpec::y(LevelPair::D, LevelPair::E, angle).expect("disjoint pairs"),
    )
}

/// Cyclic level permutation `P13 + P21 + P32 + P44`, equal to `U_a(π)·U_b(π)`.
pub fn gate_u1() -> ComplexMatrix {
    p(1, 3) + p(2, 1) + p(3, 2) + p(4, 4)
}

/// `−P12 − P23 + P31 + P44`, equal to `U_b(π)·U_a(π)`.
pub fn gate_u2() -> ComplexMatrix {
    p(3, 1) + p(4, 4) - p(1, 2) - p(2, 3)
}

/// Readout pulse `(1/√2)[1 + P21 − P12 + P43 − P34]`.
pub fn gate_u3() -> ComplexMatrix {
    let sum = ComplexMatrix::identity(Dim::Four) + p(2, 1) - p(1, 2) + p(4, 3) - p(3, 4);
    sum.scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// Controlled NOT, control R and target S: `[P33 + P44] + i[P21 + P12]`.
///
/// The flipped block carries a phase `i` relative to the textbook CNOT;
/// populations follow the truth table exactly.
pub fn gate_cnot() -> ComplexMatrix {
    p(3, 3) + p(4, 4) + (p(2, 1) + p(1, 2)).scale(C64::i())
}

/// The CNOT written as operators on the virtual qubits,
/// `R22⊗1 + i·R11⊗(S12 + S21)`.
pub fn cnot_tensor_form() -> ComplexMatrix {
    let u = |r, c| ComplexMatrix::unit(Dim::Two, r, c);
    let one = ComplexMatrix::identity(Dim::Two);
    let control0 = embed_two_qubit(&u(2, 2), &one).expect("2x2 factors");
    let flip = embed_two_qubit(&u(1, 1), &(u(1, 2) + u(2, 1))).expect("2x2 factors");
    control0 + flip.scale(C64::i())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedGate {
    U1,
    U2,
    U3,
    Cnot,
}

impl NamedGate {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            NamedGate::U1 => gate_u1(),
            NamedGate::U2 => gate_u2(),
            NamedGate::U3 => gate_u3(),
            NamedGate::Cnot => gate_cnot(),
        }
    }

    /// Pulses realizing the gate, in application order.
    pub fn pulses(self) -> Vec<PulseSpec> {
        use std::f64::consts::{FRAC_PI_2, PI};
        let y = |pair, angle| PulseSpec {
            pair,
            polarization: Polarization::Y,
            angle,
        };
        match self {
            NamedGate::U1 => vec![y(LevelPair::B, PI), y(LevelPair::A, PI)],
            NamedGate::U2 => vec![y(LevelPair::A, PI), y(LevelPair::B, PI)],
            NamedGate::U3 => vec![y(LevelPair::C, FRAC_PI_2), y(LevelPair::A, FRAC_PI_2)],
            NamedGate::Cnot => vec![PulseSpec {
                pair: LevelPair::A,
                polarization: Polarization::X,
                angle: PI,
            }],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedGate::U1 => "u1",
            NamedGate::U2 => "u2",
            NamedGate::U3 => "u3",
            NamedGate::Cnot => "cnot",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScheduleItem {
    Single(PulseSpec),
    Dual(TwoFrequencyPulseSpec),
    Gate(NamedGate),
}

impl ScheduleItem {
    pub fn propagator(&self) -> ComplexMatrix {
        match self {
            ScheduleItem::Single(s) => single_pulse_propagator(s),
            ScheduleItem::Dual(d) => two_frequency_propagator(d),
            ScheduleItem::Gate(g) => g.matrix(),
        }
    }
}

impl fmt::Display for ScheduleItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleItem::Single(s) => {
                write!(f, "pulse {} {} {}", s.polarization, s.pair, s.angle)
            }
            ScheduleItem::Dual(d) => write!(
                f,
                "pulse2 {} {} {} {}",
                d.polarization, d.first, d.second, d.angle
            ),
            ScheduleItem::Gate(g) => write!(f, "gate {}", g.name()),
        }
    }
}

/// Pulses in application order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSchedule {
    items: Vec<ScheduleItem>,
}

impl PulseSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, item: ScheduleItem) {
        self.items.push(item);
    }

    pub fn items(&self) -> &[ScheduleItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

impl FromIterator<ScheduleItem> for PulseSchedule {
    fn from_iter<I: IntoIterator<Item = ScheduleItem>>(iter: I) -> Self {
        PulseSchedule {
            items: iter.into_iter().collect(),
        }
    }
}

/// Total propagator `U_k ··· U_2 · U_1`; identity for an empty schedule.
pub fn compose(schedule: &PulseSchedule) -> ComplexMatrix {
    schedule
        .items
        .iter()
        .fold(ComplexMatrix::identity(Dim::Four), |total, item| {
            item.propagator() * total
        })
}
