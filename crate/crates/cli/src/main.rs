mod args;
mod record;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use args::{Cli, Command, Output, Params};
use record::{write_records, Record};
use run::Point;

const MALFORMED: u8 = 2;
const INVALID: u8 = 3;
const FAILED: u8 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(MALFORMED)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(MALFORMED);
    }
    match cli.command {
        Command::Verify(out) => verify(&out),
        Command::Channels(p) => sweep(&p, run::CHANNELS, run::channels),
        Command::Bound(p) => sweep(&p, run::BOUND, run::bound),
        Command::Scatter(p) => sweep(&p, run::SCATTER, run::scatter),
        Command::Amplitude(p) => sweep(&p, run::AMPLITUDE, run::amplitude_rows),
        Command::Ho(p) => sweep(&p, run::HO, run::ho),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("ABCONE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ABCONE_THREADS = {v:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit(out: &Output, schema: &[&str], records: &[Record]) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &out.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_records(&mut *sink, out.format, schema, records)
}

fn sweep(p: &Params, schema: &'static [&'static str], f: fn(&Params) -> Point) -> ExitCode {
    if let Err(msg) = p.check_form() {
        eprintln!("error: {msg}");
        return ExitCode::from(MALFORMED);
    }
    if let Err(msg) = p.check_physics() {
        eprintln!("error: {msg}");
        return ExitCode::from(INVALID);
    }
    let points: Vec<Params> = match p.sweep {
        Some(s) => s.values().into_iter().map(|v| p.at(s.var, v)).collect(),
        None => vec![p.clone()],
    };
    // collect keeps sweep order whatever the completion order
    let results: Vec<Point> = points.par_iter().map(f).collect();
    let failures = results.iter().filter(|r| r.failed).count();
    let records: Vec<Record> = results.into_iter().flat_map(|r| r.records).collect();
    for r in &records {
        if let Some(e) = &r.error {
            eprintln!("warning: {e}: {}", r.warnings.join("; "));
        }
    }
    if let Err(e) = emit(&p.output, schema, &records) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(FAILED);
    }
    // a sweep only fails as a whole when no point survived
    if failures > 0 && (p.sweep.is_none() || failures == points.len()) {
        ExitCode::from(FAILED)
    } else {
        ExitCode::SUCCESS
    }
}

fn verify(out: &Output) -> ExitCode {
    let reports = abcone::verify::run_all();
    for r in &reports {
        eprintln!("{r}");
    }
    let records: Vec<Record> = reports.iter().map(run::verify_record).collect();
    if let Err(e) = emit(out, run::VERIFY, &records) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(FAILED);
    }
    if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILED)
    }
}
