//! Lowering of circuit operations to pulses.

use std::f64::consts::PI;

use crate::pulse::{
    NamedGate, Polarization, PulseSchedule, PulseSpec, ScheduleItem, TwoFrequencyPulseSpec,
};
use crate::spin::LevelPair;

use super::program::{CircuitOp, Program};

fn lower(op: &CircuitOp, out: &mut PulseSchedule) {
    // Every spec below was validated by the parser, so construction cannot fail.
    let dual = |a, b, pol, angle| {
        ScheduleItem::Dual(TwoFrequencyPulseSpec::new(a, b, pol, angle).expect("validated pulse"))
    };
    match *op {
        CircuitOp::RyS(angle) => out.push(dual(LevelPair::A, LevelPair::C, Polarization::Y, angle)),
        CircuitOp::RyR(angle) => out.push(dual(LevelPair::D, LevelPair::E, Polarization::Y, angle)),
        CircuitOp::Pulse {
            pair,
            polarization,
            angle,
        } => out.push(ScheduleItem::Single(
            PulseSpec::new(pair, polarization, angle).expect("validated pulse"),
        )),
        CircuitOp::Pulse2 {
            first,
            second,
            polarization,
            angle,
        } => out.push(dual(first, second, polarization, angle)),
        CircuitOp::Gate(NamedGate::Cnot) => out.push(ScheduleItem::Single(
            PulseSpec::x(LevelPair::A, PI).expect("finite angle"),
        )),
        CircuitOp::Gate(g) => {
            for p in g.pulses() {
                out.push(ScheduleItem::Single(p));
            }
        }
    }
}

/// Pulse schedule of a program's operations, in application order.
pub fn compile(program: &Program) -> PulseSchedule {
    let mut schedule = PulseSchedule::new();
    for op in &program.ops {
        lower(op, &mut schedule);
    }
    schedule
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::program::parse_program;
    use crate::pulse::{compose, gate_cnot, gate_u1, gate_u2, gate_u3, rotation_r, rotation_s};
    use std::f64::consts::FRAC_PI_2;

    fn schedule_of(text: &str) -> Vec<String> {
        compile(&parse_program(text).unwrap())
            .items()
            .iter()
            .map(|i| i.to_string())
            .collect()
    }

    #[test]
    fn lowering_examples() {
        assert_eq!(
            schedule_of("ry_s pi"),
            ["pulse2 y 1-2 3-4 3.141592653589793"]
        );
        assert_eq!(
            schedule_of("ry_r pi/2"),
            ["pulse2 y 1-3 2-4 1.5707963267948966"]
        );
        assert_eq!(schedule_of("gate cnot"), ["pulse x 1-2 3.141592653589793"]);
        assert_eq!(
            schedule_of("gate u3"),
            [
                "pulse y 3-4 1.5707963267948966",
                "pulse y 1-2 1.5707963267948966"
            ]
        );
        assert_eq!(
            schedule_of("gate u1"),
            [
                "pulse y 2-3 3.141592653589793",
                "pulse y 1-2 3.141592653589793"
            ]
        );
    }

    #[test]
    fn single_op_programs_match_gate_matrices() {
        let cases = [
            ("gate u1", gate_u1()),
            ("gate u2", gate_u2()),
            ("gate u3", gate_u3()),
            ("gate cnot", gate_cnot()),
            ("ry_s pi/2", rotation_s(FRAC_PI_2)),
            ("ry_r 0.3", rotation_r(0.3)),
        ];
        for (text, expect) in cases {
            let u = compose(&compile(&parse_program(text).unwrap()));
            assert!(u.approx_eq(&expect, 1e-12), "{text}");
        }
    }
}
