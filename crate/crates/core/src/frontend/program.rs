//! Pulse-program text format.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! program := line*
//! line    := stmt? comment? NEWLINE
//! stmt    := 'prepare' ('pseudo_pure' | 'equilibrium' | 'basis' INT)
//!          | 'pulse' POL PAIR ANGLE | 'pulse2' POL PAIR PAIR ANGLE
//!          | 'gate' ('cnot' | 'u1' | 'u2' | 'u3') | 'ry_r' ANGLE | 'ry_s' ANGLE
//!          | 'readout' | 'set' KEY '=' VALUE
//! POL     := 'x' | 'y'
//! PAIR    := INT '-' INT
//! ANGLE   := decimal | 'pi' | 'pi/2' | 'pi/4' | decimal '*pi'
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::{self, Write as _};

use crate::pulse::{NamedGate, Polarization, TwoFrequencyPulseSpec};
use crate::spin::{Level, LevelPair};

use super::config::Setting;
use super::FrontendError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Preparation {
    PseudoPure,
    Equilibrium,
    /// `Z[α·1 + β·P_mm]` directly; a diagnostic shortcut.
    Basis(Level),
}

impl fmt::Display for Preparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preparation::PseudoPure => f.write_str("pseudo_pure"),
            Preparation::Equilibrium => f.write_str("equilibrium"),
            Preparation::Basis(l) => write!(f, "basis {l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircuitOp {
    /// Rotation of virtual qubit R (pairs 1-3 and 2-4).
    RyR(f64),
    /// Rotation of virtual qubit S (pairs 1-2 and 3-4).
    RyS(f64),
    Pulse {
        pair: LevelPair,
        polarization: Polarization,
        angle: f64,
    },
    Pulse2 {
        first: LevelPair,
        second: LevelPair,
        polarization: Polarization,
        angle: f64,
    },
    Gate(NamedGate),
}

impl fmt::Display for CircuitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CircuitOp::RyR(a) => write!(f, "ry_r {}", render_angle(a)),
            CircuitOp::RyS(a) => write!(f, "ry_s {}", render_angle(a)),
            CircuitOp::Pulse {
                pair,
                polarization,
                angle,
            } => {
                write!(f, "pulse {polarization} {pair} {}", render_angle(angle))
            }
            CircuitOp::Pulse2 {
                first,
                second,
                polarization,
                angle,
            } => {
                write!(
                    f,
                    "pulse2 {polarization} {first} {second} {}",
                    render_angle(angle)
                )
            }
            CircuitOp::Gate(g) => write!(f, "gate {}", g.name()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub prepare: Option<Preparation>,
    pub ops: Vec<CircuitOp>,
    pub readout: bool,
    pub settings: Vec<Setting>,
}

impl Program {
    /// Canonical text: settings, preparation, operations, readout.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.settings {
            writeln!(out, "set {s}").unwrap();
        }
        if let Some(p) = self.prepare {
            writeln!(out, "prepare {p}").unwrap();
        }
        for op in &self.ops {
            writeln!(out, "{op}").unwrap();
        }
        if self.readout {
            out.push_str("readout\n");
        }
        out
    }
}

/// Angle literal; multiples of π that have a keyword form use it.
pub fn render_angle(a: f64) -> String {
    if a == PI {
        "pi".into()
    } else if a == FRAC_PI_2 {
        "pi/2".into()
    } else if a == FRAC_PI_4 {
        "pi/4".into()
    } else {
        format!("{a}")
    }
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &line[s..i],
                    col: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &line[s..],
            col: line[..s].chars().count() + 1,
        });
    }
    tokens
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    end_col: usize,
}

impl<'a> LineParser<'a> {
    fn syntax(&self, col: usize, message: impl Into<String>) -> FrontendError {
        FrontendError::Syntax {
            line: self.line,
            column: col,
            message: message.into(),
        }
    }

    fn semantic(&self, message: impl Into<String>) -> FrontendError {
        FrontendError::Semantic {
            line: self.line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<&Token<'a>, FrontendError> {
        if self.pos < self.tokens.len() {
            self.pos += 1;
            Ok(&self.tokens[self.pos - 1])
        } else {
            Err(self.syntax(self.end_col, format!("expected {what}")))
        }
    }

    fn finish(&self) -> Result<(), FrontendError> {
        match self.tokens.get(self.pos) {
            Some(t) => Err(self.syntax(t.col, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }

    fn polarization(&mut self) -> Result<Polarization, FrontendError> {
        let t = self.next("polarization `x` or `y`")?;
        match t.text {
            "x" => Ok(Polarization::X),
            "y" => Ok(Polarization::Y),
            other => {
                let col = t.col;
                Err(self.syntax(
                    col,
                    format!("expected polarization `x` or `y`, found `{other}`"),
                ))
            }
        }
    }

    fn pair(&mut self) -> Result<LevelPair, FrontendError> {
        let t = self.next("level pair like `1-2`")?;
        let (text, col) = (t.text, t.col);
        let parsed = text
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)));
        let Some((upper, lower)) = parsed else {
            return Err(self.syntax(
                col,
                format!("expected level pair like `1-2`, found `{text}`"),
            ));
        };
        LevelPair::new(upper, lower).map_err(|e| self.semantic(e.to_string()))
    }

    fn angle(&mut self) -> Result<f64, FrontendError> {
        let t = self.next("angle")?;
        let (text, col) = (t.text, t.col);
        parse_angle(text).ok_or_else(|| self.syntax(col, format!("invalid angle `{text}`")))
    }

    fn keyword(&mut self, what: &str, choices: &[&str]) -> Result<(&'a str, usize), FrontendError> {
        let t = self.next(what)?;
        let (text, col) = (t.text, t.col);
        if choices.contains(&text) {
            Ok((text, col))
        } else {
            Err(self.syntax(col, format!("expected {what}, found `{text}`")))
        }
    }
}

fn parse_decimal(text: &str) -> Option<f64> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    let ok = !digits.is_empty()
        && digits.chars().all(|c| c.is_ascii_digit() || c == '.')
        && digits.chars().filter(|&c| c == '.').count() <= 1
        && digits.chars().any(|c| c.is_ascii_digit());
    ok.then(|| text.parse().ok()).flatten()
}

fn parse_angle(text: &str) -> Option<f64> {
    match text {
        "pi" => Some(PI),
        "pi/2" => Some(FRAC_PI_2),
        "pi/4" => Some(FRAC_PI_4),
        _ => match text.strip_suffix("*pi") {
            Some(k) => parse_decimal(k).map(|k| k * PI),
            None => parse_decimal(text),
        },
    }
    .filter(|a| a.is_finite())
}

enum Stmt {
    Prepare(Preparation),
    Op(CircuitOp),
    Readout,
    Set(Setting),
}

fn parse_stmt(p: &mut LineParser<'_>, raw: &str) -> Result<Stmt, FrontendError> {
    let head = p.next("statement")?;
    let (head, head_col) = (head.text, head.col);
    let stmt = match head {
        "prepare" => {
            let (kind, _) = p.keyword(
                "`pseudo_pure`, `equilibrium` or `basis`",
                &["pseudo_pure", "equilibrium", "basis"],
            )?;
            Stmt::Prepare(match kind {
                "pseudo_pure" => Preparation::PseudoPure,
                "equilibrium" => Preparation::Equilibrium,
                _ => {
                    let t = p.next("level number")?;
                    let (text, col) = (t.text, t.col);
                    let m: usize = text.parse().map_err(|_| {
                        p.syntax(col, format!("expected level number, found `{text}`"))
                    })?;
                    let level = Level::new(m).map_err(|e| p.semantic(e.to_string()))?;
                    Preparation::Basis(level)
                }
            })
        }
        "pulse" => {
            let polarization = p.polarization()?;
            let pair = p.pair()?;
            let angle = p.angle()?;
            Stmt::Op(CircuitOp::Pulse {
                pair,
                polarization,
                angle,
            })
        }
        "pulse2" => {
            let polarization = p.polarization()?;
            let first = p.pair()?;
            let second = p.pair()?;
            let angle = p.angle()?;
            TwoFrequencyPulseSpec::new(first, second, polarization, angle)
                .map_err(|e| p.semantic(e.to_string()))?;
            Stmt::Op(CircuitOp::Pulse2 {
                first,
                second,
                polarization,
                angle,
            })
        }
        "gate" => {
            let (name, _) = p.keyword("gate name", &["cnot", "u1", "u2", "u3"])?;
            Stmt::Op(CircuitOp::Gate(match name {
                "cnot" => NamedGate::Cnot,
                "u1" => NamedGate::U1,
                "u2" => NamedGate::U2,
                _ => NamedGate::U3,
            }))
        }
        "ry_r" => Stmt::Op(CircuitOp::RyR(p.angle()?)),
        "ry_s" => Stmt::Op(CircuitOp::RyS(p.angle()?)),
        "readout" => Stmt::Readout,
        "set" => {
            // KEY '=' VALUE; the value runs to the end of the line so that
            // comma lists may contain spaces.
            let rest = &raw[raw.find("set").unwrap() + 3..];
            let Some((key, value)) = rest.split_once('=') else {
                return Err(p.syntax(p.end_col, "expected `set KEY = VALUE`"));
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(p.syntax(head_col + 4, "missing setting name"));
            }
            let setting = Setting::parse(key, value.trim()).map_err(|msg| p.semantic(msg))?;
            p.pos = p.tokens.len();
            Stmt::Set(setting)
        }
        other => return Err(p.syntax(head_col, format!("unknown statement `{other}`"))),
    };
    p.finish()?;
    Ok(stmt)
}

pub fn parse_program(text: &str) -> Result<Program, FrontendError> {
    let mut program = Program::default();
    let mut prepare_line = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let code = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(code);
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            line: line_no,
            tokens,
            pos: 0,
            end_col: code.trim_end().chars().count() + 1,
        };
        match parse_stmt(&mut p, code)? {
            Stmt::Set(s) => program.settings.push(s),
            Stmt::Prepare(prep) => {
                if let Some(first) = prepare_line {
                    return Err(p.semantic(format!("second `prepare` (first on line {first})")));
                }
                if program.readout || !program.ops.is_empty() {
                    return Err(p.semantic("`prepare` must come before operations and readout"));
                }
                prepare_line = Some(line_no);
                program.prepare = Some(prep);
            }
            Stmt::Op(op) => {
                if program.readout {
                    return Err(p.semantic("operation after `readout`"));
                }
                program.ops.push(op);
            }
            Stmt::Readout => {
                if program.readout {
                    return Err(p.semantic("second `readout`"));
                }
                if program.prepare.is_none() {
                    return Err(p.semantic("`readout` requires a `prepare` statement"));
                }
                program.readout = true;
            }
        }
    }
    Ok(program)
}
