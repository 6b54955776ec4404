//! Runs a program end to end and assembles the JSON report.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ensemble::{
    alpha_beta, apply_unitary, diagonal_populations, equilibrium_density, pseudo_pure_average,
    DensityMatrix, PseudoPureParams,
};
use crate::matrix::ComplexMatrix;
use crate::pulse::compose;
use crate::readout::{plan_window, read_out, FidSignal, ReadoutReport};
use crate::spin::{build_model, SpinModel};

use super::compile::compile;
use super::config::RunConfig;
use super::program::{Preparation, Program};
use super::FrontendError;

/// Outcome of one program run.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub program_hash: String,
    pub program: Program,
    pub config: RunConfig,
    pub model: SpinModel,
    pub schedule: Vec<String>,
    pub propagator: ComplexMatrix,
    pub pseudo_pure: PseudoPureParams,
    pub final_state: Option<DensityMatrix>,
    pub readout: Option<ReadoutReport>,
    pub fid: Option<FidSignal>,
    /// File name of the exported FID, when one was written.
    pub fid_path: Option<String>,
}

fn hash_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Prepares the state, applies the compiled propagator and, if requested,
/// reads the result out.
///
/// A pseudo-pure preparation folds the propagator into the three averaged
/// experiments; the other preparations apply it once.
pub fn run(program: &Program, base: &RunConfig) -> Result<RunRecord, FrontendError> {
    let mut config = base.clone();
    for s in &program.settings {
        config.apply(*s);
    }
    let model = build_model(config.model.clone())?;
    let schedule = compile(program);
    let propagator = compose(&schedule);
    let pseudo_pure = alpha_beta(&model);

    let final_state = match program.prepare {
        None => None,
        Some(Preparation::PseudoPure) => Some(pseudo_pure_average(&model, &propagator)?),
        Some(Preparation::Equilibrium) => {
            Some(apply_unitary(&equilibrium_density(&model), &propagator)?)
        }
        Some(Preparation::Basis(level)) => {
            Some(apply_unitary(&pseudo_pure.state(level), &propagator)?)
        }
    };

    let (readout, fid) = match (&final_state, program.readout) {
        (Some(rho), true) => {
            let (report, fid) = read_out(&model, rho, &config.readout)?;
            (Some(report), Some(fid))
        }
        _ => (None, None),
    };

    Ok(RunRecord {
        program_hash: hash_hex(&program.render()),
        program: program.clone(),
        config,
        schedule: schedule.items().iter().map(|i| i.to_string()).collect(),
        model,
        propagator,
        pseudo_pure,
        final_state,
        readout,
        fid,
        fid_path: None,
    })
}

#[derive(Serialize)]
struct ModelJson {
    omega0: f64,
    #[serde(rename = "omegaQ")]
    omega_q: f64,
    lambda_scale: f64,
    explicit_energies: bool,
    energies: [f64; 4],
    lambdas: [f64; 4],
    z: f64,
    omega12: f64,
    omega23: f64,
    omega34: f64,
}

#[derive(Serialize)]
struct SamplingJson {
    sample_rate: f64,
    periods: u32,
    duration: f64,
    samples: usize,
}

#[derive(Serialize)]
struct RecordJson<'a> {
    program_hash: &'a str,
    program: String,
    model: ModelJson,
    preparation: Option<String>,
    pseudo_pure: &'a PseudoPureParams,
    schedule: &'a [String],
    propagator_re: Vec<Vec<f64>>,
    propagator_im: Vec<Vec<f64>>,
    rho_re: Option<Vec<Vec<f64>>>,
    rho_im: Option<Vec<Vec<f64>>>,
    populations: Option<[f64; 4]>,
    readout: Option<&'a ReadoutReport>,
    sampling: Option<SamplingJson>,
    fid: Option<&'a str>,
}

fn split_parts(m: &ComplexMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows = m.rows();
    (
        rows.iter()
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect(),
        rows.iter()
            .map(|r| r.iter().map(|z| z.im).collect())
            .collect(),
    )
}

impl RunRecord {
    /// Pretty JSON; identical inputs give byte-identical output.
    pub fn to_json(&self) -> String {
        let cfg = self.model.config();
        let (propagator_re, propagator_im) = split_parts(&self.propagator);
        let (rho_re, rho_im) = match &self.final_state {
            Some(rho) => {
                let (re, im) = split_parts(rho.matrix());
                (Some(re), Some(im))
            }
            None => (None, None),
        };
        let populations = self
            .final_state
            .as_ref()
            .and_then(|rho| diagonal_populations(rho).ok())
            .map(|d| d.mu);
        let sampling = self.fid.as_ref().map(|fid| SamplingJson {
            sample_rate: self.config.readout.sample_rate,
            periods: self.config.readout.periods,
            duration: plan_window(&self.model, &self.config.readout).duration,
            samples: fid.len(),
        });
        let record = RecordJson {
            program_hash: &self.program_hash,
            program: self.program.render(),
            model: ModelJson {
                omega0: cfg.omega0,
                omega_q: cfg.omega_q,
                lambda_scale: cfg.lambda_scale,
                explicit_energies: cfg.explicit_energies.is_some(),
                energies: self.model.energies(),
                lambdas: self.model.lambdas(),
                z: self.model.z(),
                omega12: self.model.omega12(),
                omega23: self.model.omega23(),
                omega34: self.model.omega34(),
            },
            preparation: self.program.prepare.map(|p| p.to_string()),
            pseudo_pure: &self.pseudo_pure,
            schedule: &self.schedule,
            propagator_re,
            propagator_im,
            rho_re,
            rho_im,
            populations,
            readout: self.readout.as_ref(),
            sampling,
            fid: self.fid_path.as_deref(),
        };
        let mut text = serde_json::to_string_pretty(&record).expect("plain data serializes");
        text.push('\n');
        text
    }

    /// Writes `report.json` into `dir`, plus `fid.csv` when `with_fid` is set
    /// and the program read out.
    pub fn write_to(&mut self, dir: &Path, with_fid: bool) -> Result<(), FrontendError> {
        let io = |path: &Path, e: std::io::Error| FrontendError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        if let (true, Some(fid)) = (with_fid, &self.fid) {
            let path = dir.join("fid.csv");
            let mut buf = Vec::new();
            fid.write_csv(&mut buf).map_err(|e| io(&path, e))?;
            fs::write(&path, buf).map_err(|e| io(&path, e))?;
            self.fid_path = Some("fid.csv".into());
        }
        let path = dir.join("report.json");
        fs::write(&path, self.to_json()).map_err(|e| io(&path, e))
    }
}
