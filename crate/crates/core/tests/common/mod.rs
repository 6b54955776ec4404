#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use quadspin::frontend::{parse_program, run, RunConfig};

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Bundled programs, sorted by name.
pub fn programs() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(manifest_dir().join("programs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "qp"))
        .collect();
    out.sort();
    out
}

pub fn stem(path: &Path) -> String {
    path.file_stem().unwrap().to_string_lossy().into_owned()
}

/// Runs `program` into `dir` the same way `quadspin run --fid` does.
pub fn run_into(program: &Path, dir: &Path) {
    let prog = parse_program(&fs::read_to_string(program).unwrap()).unwrap();
    let mut record = run(&prog, &RunConfig::default()).unwrap();
    record.write_to(dir, true).unwrap();
}

/// Files of `fresh` that differ from the stored golden copy. With
/// `QUADSPIN_BLESS=1` the golden copy is overwritten instead.
pub fn golden_mismatches(program: &Path, fresh: &Path) -> Vec<String> {
    let golden = manifest_dir().join("tests/golden").join(stem(program));
    let bless = std::env::var("QUADSPIN_BLESS").is_ok_and(|v| v == "1");
    let mut bad = Vec::new();
    for name in ["report.json", "fid.csv"] {
        let new = fresh.join(name);
        if !new.exists() {
            continue;
        }
        let new = fs::read(new).unwrap();
        let target = golden.join(name);
        if bless {
            fs::create_dir_all(&golden).unwrap();
            fs::write(&target, &new).unwrap();
        } else if fs::read(&target).ok().as_deref() != Some(&new[..]) {
            bad.push(format!("{}/{name}", stem(program)));
        }
    }
    bad
}
