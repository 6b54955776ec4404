use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quadspin::frontend::{parse_program, run, FrontendError, RunConfig};
use quadspin::matrix::{ComplexMatrix, C64};
use quadspin::pulse::{gate_cnot, gate_u1, gate_u2, gate_u3, rotation_r, rotation_s};
use quadspin::readout::{decode, full_spectrum, tone_amplitudes, FidSignal};
use quadspin::spin::build_model;

#[derive(Parser)]
#[command(
    name = "quadspin",
    version,
    about = "Two virtual qubits on a spin-3/2 nucleus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pulse program and write report.json (and fid.csv with --fid)
    Run {
        program: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also export the free induction decay
        #[arg(long)]
        fid: bool,
    },
    /// Print the named gates as projector sums and matrices
    Gates,
    /// Decode a pair of b-ratios
    Decode {
        #[arg(long, allow_hyphen_values = true)]
        b12: f64,
        #[arg(long, allow_hyphen_values = true)]
        b34: f64,
        #[arg(long, default_value_t = quadspin::readout::DEFAULT_B_TOL)]
        tol: f64,
    },
    /// Amplitudes of an exported FID at the three transition frequencies
    Spectrum {
        fid: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Dump every FFT bin instead
        #[arg(long)]
        full: bool,
    },
}

fn read_text(path: &Path) -> Result<String, FrontendError> {
    fs::read_to_string(path).map_err(|e| FrontendError::Io {
        path: path.display().to_string(),
        message: if e.kind() == std::io::ErrorKind::NotFound {
            "file not found".into()
        } else {
            e.to_string()
        },
    })
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, FrontendError> {
    match path {
        Some(p) => RunConfig::parse(&read_text(p)?),
        None => Ok(RunConfig::default()),
    }
}

fn cmd_run(
    program: &Path,
    config: Option<&Path>,
    out: &Path,
    with_fid: bool,
) -> Result<(), FrontendError> {
    let prog = parse_program(&read_text(program)?)?;
    let cfg = load_config(config)?;
    let mut record = run(&prog, &cfg)?;
    record.write_to(out, with_fid)?;
    match &record.readout {
        Some(r) => println!(
            "decoded {} (b12 = {:e}, b34 = {:e})",
            r.decoded, r.b12, r.b34
        ),
        None => println!("no readout"),
    }
    Ok(())
}

/// Sign and unit factor of a coefficient: `±1`, `±i`, or anything else verbatim.
fn coefficient(z: C64) -> (char, String) {
    let near = |a: f64, b: f64| (a - b).abs() < 1e-12;
    match (z.re, z.im) {
        (re, im) if near(im, 0.0) && near(re.abs(), 1.0) => {
            (if re > 0.0 { '+' } else { '-' }, String::new())
        }
        (re, im) if near(re, 0.0) && near(im.abs(), 1.0) => {
            (if im > 0.0 { '+' } else { '-' }, "i".into())
        }
        _ => ('+', format!("({z})")),
    }
}

/// `U = c[a P11 + b P12 ...]`, factoring out a common magnitude.
fn projector_expansion(m: &ComplexMatrix) -> String {
    let terms: Vec<(usize, usize, C64)> = (1..=4)
        .flat_map(|r| (1..=4).map(move |c| (r, c)))
        .map(|(r, c)| (r, c, m.get(r, c)))
        .filter(|(_, _, z)| z.norm() > 1e-12)
        .collect();
    let first = terms.first().map_or(1.0, |t| t.2.norm());
    let scale = if terms.iter().all(|t| (t.2.norm() - first).abs() < 1e-12) {
        first
    } else {
        1.0
    };
    let mut body = String::new();
    for (i, &(r, c, z)) in terms.iter().enumerate() {
        let (sign, unit) = coefficient(z / scale);
        match (i, sign) {
            (0, '+') => {}
            (0, _) => body.push('-'),
            _ => body.push_str(&format!(" {sign} ")),
        }
        body.push_str(&format!("{unit}P{r}{c}"));
    }
    if (scale - 1.0).abs() < 1e-12 {
        body
    } else if (scale - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12 {
        format!("(1/√2)[{body}]")
    } else {
        format!("{scale}·[{body}]")
    }
}

fn print_matrix(m: &ComplexMatrix) {
    for row in m.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| {
                let re = if z.re.abs() < 1e-15 { 0.0 } else { z.re };
                let im = if z.im.abs() < 1e-15 { 0.0 } else { z.im };
                format!("{re:>8.4}{im:+8.4}i")
            })
            .collect();
        println!("  [{}]", cells.join(" "));
    }
}

fn cmd_gates() {
    let half = std::f64::consts::FRAC_PI_2;
    let gates = [
        ("U1", gate_u1()),
        ("U2", gate_u2()),
        ("U3", gate_u3()),
        ("CNOT", gate_cnot()),
        ("RyR(pi/2)", rotation_r(half)),
        ("RyS(pi/2)", rotation_s(half)),
    ];
    for (name, m) in gates {
        println!("{name} = {}", projector_expansion(&m));
        print_matrix(&m);
    }
}

fn cmd_decode(b12: f64, b34: f64, tol: f64) {
    let cls = |b: f64| {
        if b.abs() < tol {
            "≈ 0"
        } else if b < 0.0 {
            "< 0"
        } else {
            "> 0"
        }
    };
    println!(
        "{}  (b12 {}, b34 {})",
        decode(b12, b34, tol),
        cls(b12),
        cls(b34)
    );
}

fn cmd_spectrum(path: &Path, config: Option<&Path>, full: bool) -> Result<(), FrontendError> {
    let cfg = load_config(config)?;
    let model = build_model(cfg.model)?;
    let file = fs::File::open(path).map_err(|e| FrontendError::Io {
        path: path.display().to_string(),
        message: if e.kind() == std::io::ErrorKind::NotFound {
            "file not found".into()
        } else {
            e.to_string()
        },
    })?;
    let fid = FidSignal::read_csv(BufReader::new(file), model.omega12(), model.omega34())?;
    if full {
        for (w, a) in full_spectrum(&fid) {
            println!("{w},{},{}", a.re, a.im);
        }
        return Ok(());
    }
    let names = ["omega12", "omega23", "omega34"];
    let omegas = [model.omega12(), model.omega23(), model.omega34()];
    let amps = tone_amplitudes(&fid, &omegas)?;
    for ((name, w), a) in names.iter().zip(omegas).zip(amps) {
        println!(
            "{name} = {w}: amplitude {:e} {:+e}i (|A| = {:e})",
            a.re,
            a.im,
            a.norm()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            program,
            config,
            out,
            fid,
        } => cmd_run(program, config.as_deref(), out, *fid),
        Command::Gates => {
            cmd_gates();
            Ok(())
        }
        Command::Decode { b12, b34, tol } => {
            cmd_decode(*b12, *b34, *tol);
            Ok(())
        }
        Command::Spectrum { fid, config, full } => cmd_spectrum(fid, config.as_deref(), *full),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
