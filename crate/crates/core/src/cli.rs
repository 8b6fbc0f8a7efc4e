//! The `happy` command line. Every subcommand takes `--e` and `--b` (for
//! `verify` they default to the certificate's own) and prints text, JSON or
//! CSV.
//!
//! Exit codes: 0 success, 1 nothing found below the bound or an invalid
//! certificate, 2 invalid parameters (including a failing condition), 3 I/O.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::constructor::{
    describe, verify_certificate_with, Constructor, ConstructorConfig, Goal, WitnessCertificate,
};
use crate::map::{self, Condition, Params};
use crate::search::{self, CheckpointSink, ScanCheckpoint, ScanConfig, ScanMode};
use crate::symbolic::DEFAULT_DEPTH_LIMIT;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "happy",
    version,
    about = "Consecutive (e, b)-happy numbers: search, construction, certificates"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ParamArgs {
    /// Exponent.
    #[arg(long)]
    pub e: u32,
    /// Base.
    #[arg(long)]
    pub b: u64,
}

impl ParamArgs {
    fn params(&self) -> Result<Params> {
        Params::new(self.e, self.b)
    }
}

#[derive(Args, Debug, Clone)]
pub struct BuildArgs {
    /// Skip the bounded searches and run the constructions.
    #[arg(long)]
    pub construct_only: bool,
    #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT)]
    pub depth_limit: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Whether consecutive happy numbers can exist for (e, b).
    CheckCondition {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Happy or not, with the trajectory.
    Classify {
        n: u64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Values on cycles of the digit map, and the contraction bound.
    CycleSet {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Least run of `len` consecutive happy numbers up to `max`.
    FindRuns {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        len: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max: u64,
        /// Continue from this checkpoint.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Write checkpoints here (defaults to the resume path).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Values scanned between checkpoints.
        #[arg(long, default_value_t = 1_000_000)]
        every: u64,
        #[arg(long, env = "HAPPY_THREADS")]
        workers: Option<usize>,
    },
    /// Least happy number in a residue class mod b-1 (or mod (b-1)^e with --lift).
    ResidueWitness {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        lift: bool,
        #[arg(long, default_value_t = 10_000_000)]
        max: u64,
        /// Construct a certified witness when the search finds none.
        #[arg(long)]
        certify: Option<PathBuf>,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Least h with h + x happy for every x in the cycle set.
    Cover {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10_000_000)]
        max: u64,
        /// Where to write the certificate of a constructed cover.
        #[arg(long)]
        certify: Option<PathBuf>,
        #[arg(long, env = "HAPPY_THREADS")]
        workers: Option<usize>,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Certificate for a run of `len` consecutive happy numbers.
    CertifyRun {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        len: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Check a certificate.
    Verify {
        path: PathBuf,
        #[arg(long)]
        e: Option<u32>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT)]
        depth_limit: usize,
    },
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => 3,
        Error::InvalidParams(_)
        | Error::InvalidArgument(_)
        | Error::ConditionFails { .. }
        | Error::TooLarge(_) => 2,
        _ => 1,
    }
}

/// Parses `std::env::args`, runs, and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mut w = Out {
        out,
        format: cli.format,
    };
    match &cli.command {
        Command::CheckCondition { params } => check_condition(&mut w, params.params()?),
        Command::Classify { n, params } => classify(&mut w, params.params()?, *n),
        Command::CycleSet { params } => cycle_set(&mut w, params.params()?),
        Command::FindRuns {
            params,
            len,
            max,
            resume,
            checkpoint,
            every,
            workers,
        } => {
            let params = params.params()?;
            let sink = checkpoint
                .clone()
                .or_else(|| resume.clone())
                .map(|path| CheckpointSink {
                    path,
                    every: *every,
                });
            let resume = resume.as_deref().map(ScanCheckpoint::load).transpose()?;
            let config = ScanConfig {
                workers: workers.unwrap_or_else(search::default_workers),
                max_hits: Some(1),
                checkpoint: sink,
                ..ScanConfig::default()
            };
            let outcome = search::scan(
                &params,
                &ScanMode::RunSearch { length: *len },
                *max,
                resume,
                &config,
            )?;
            match outcome.found.first() {
                Some(rec) => {
                    w.record(rec)?;
                    Ok(0)
                }
                None => {
                    eprintln!("none below bound {max}");
                    Ok(1)
                }
            }
        }
        Command::ResidueWitness {
            params,
            a,
            lift,
            max,
            certify,
            build,
        } => residue_witness(
            &mut w,
            params.params()?,
            *a,
            *lift,
            *max,
            certify.as_ref(),
            build,
        ),
        Command::Cover {
            params,
            max,
            certify,
            workers,
            build,
        } => {
            let workers = workers.unwrap_or_else(search::default_workers);
            cover(
                &mut w,
                params.params()?,
                *max,
                certify.as_ref(),
                workers,
                build,
            )
        }
        Command::CertifyRun {
            params,
            len,
            out: path,
            build,
        } => {
            let params = params.params()?;
            let ctor = constructor(params, build, 1)?;
            let cert = ctor.certify_run(*len)?;
            cert.save(path)?;
            w.certificate(&ctor, &cert, path)?;
            Ok(0)
        }
        Command::Verify {
            path,
            e,
            b,
            depth_limit,
        } => {
            let cert = match WitnessCertificate::load(path) {
                Ok(cert) => cert,
                Err(err @ (Error::Json { .. } | Error::FormatVersion { .. })) => {
                    w.line(
                        &format!("invalid: {err}"),
                        json!({ "valid": false, "failures": [err.to_string()] }),
                        "valid\nfalse",
                    )?;
                    return Ok(1);
                }
                Err(err) => return Err(err),
            };
            if e.is_some_and(|e| e != cert.params.e()) || b.is_some_and(|b| b != cert.params.b()) {
                return Err(Error::InvalidArgument(format!(
                    "certificate is for {}",
                    cert.params
                )));
            }
            let v = verify_certificate_with(&cert, *depth_limit);
            let csv = format!(
                "valid,steps,leaves\n{},{},{}",
                v.is_valid(),
                v.steps_checked,
                v.leaves_checked
            );
            w.line(
                &v.to_string(),
                json!({
                    "valid": v.is_valid(),
                    "steps_checked": v.steps_checked,
                    "leaves_checked": v.leaves_checked,
                    "failures": v.failures,
                }),
                &csv,
            )?;
            Ok(if v.is_valid() { 0 } else { 1 })
        }
    }
}

struct Out<'a> {
    out: &'a mut dyn Write,
    format: Format,
}

impl Out<'_> {
    fn line(&mut self, text: &str, json: serde_json::Value, csv: &str) -> Result<()> {
        let s = match self.format {
            Format::Text => text.to_string(),
            Format::Json => json.to_string(),
            Format::Csv => csv.to_string(),
        };
        writeln!(self.out, "{s}").map_err(|e| Error::io("<stdout>", e))
    }

    fn record(&mut self, rec: &search::RunRecord) -> Result<()> {
        let text = format!(
            "run of {} starting at {} for {}",
            rec.length, rec.start, rec.params
        );
        let json = serde_json::to_value(rec).expect("record serializes");
        let csv = format!(
            "start,length,e,b\n{},{},{},{}",
            rec.start,
            rec.length,
            rec.params.e(),
            rec.params.b()
        );
        self.line(&text, json, &csv)
    }

    fn certificate(
        &mut self,
        ctor: &Constructor,
        cert: &WitnessCertificate,
        path: &std::path::Path,
    ) -> Result<()> {
        let (what, value) = match &cert.goal {
            Goal::RunOfLength { length, start } => (format!("{length} happy numbers after"), start),
            Goal::ResidueWitness {
                value,
                residue,
                modulus,
            } => (format!("happy, {residue} mod {modulus}:"), value),
            Goal::PairWitness { difference, value } => {
                (format!("happy with +{difference}:"), value)
            }
            Goal::CoverWitness { value, .. } => ("cover".to_string(), value),
        };
        let shown = describe(ctor.sym(), value);
        let text = format!(
            "{what} {shown}\ncertificate: {} ({} steps, {} leaves, depth {})",
            path.display(),
            cert.steps.len(),
            cert.leaves.len(),
            cert.max_depth()
        );
        let json = json!({
            "certificate": path,
            "value": shown,
            "steps": cert.steps.len(),
            "leaves": cert.leaves.len(),
            "depth": cert.max_depth(),
        });
        let csv = format!(
            "certificate,steps,leaves,depth\n{},{},{},{}",
            path.display(),
            cert.steps.len(),
            cert.leaves.len(),
            cert.max_depth()
        );
        self.line(&text, json, &csv)
    }
}

fn constructor(params: Params, build: &BuildArgs, workers: usize) -> Result<Constructor> {
    let config = ConstructorConfig {
        construct_only: build.construct_only,
        depth_limit: build.depth_limit,
        workers,
        ..ConstructorConfig::default()
    };
    Constructor::new(params, config)
}

fn check_condition(w: &mut Out, params: Params) -> Result<i32> {
    let cond = map::condition_holds(&params);
    let prime = match cond {
        Condition::Holds => None,
        Condition::Fails { prime } => Some(prime),
    };
    let text = match prime {
        None => "holds".to_string(),
        Some(p) => format!("fails: p={p}"),
    };
    let json =
        json!({ "e": params.e(), "b": params.b(), "holds": prime.is_none(), "prime": prime });
    let csv = format!(
        "e,b,holds,prime\n{},{},{},{}",
        params.e(),
        params.b(),
        prime.is_none(),
        prime.map(|p| p.to_string()).unwrap_or_default()
    );
    w.line(&text, json, &csv)?;
    Ok(if prime.is_none() { 0 } else { 2 })
}

fn classify(w: &mut Out, params: Params, n: u64) -> Result<i32> {
    let tr = map::trajectory(n, &params)?;
    let verdict = if tr.is_happy() { "happy" } else { "unhappy" };
    let mut path = vec![n.to_string()];
    path.extend(tr.steps.iter().map(u64::to_string));
    let mut text = format!("{verdict}\n{}", path.join(" -> "));
    if let map::Terminal::EnteredCycle { entry } = tr.terminal {
        text.push_str(&format!(" (cycle through {entry})"));
    }
    let json = json!({
        "n": n,
        "params": params,
        "happy": tr.is_happy(),
        "trajectory": tr.steps,
        "terminal": tr.terminal,
    });
    let csv = format!(
        "n,happy,trajectory\n{n},{},{}",
        tr.is_happy(),
        path.join(" ")
    );
    w.line(&text, json, &csv)?;
    Ok(0)
}

fn cycle_set(w: &mut Out, params: Params) -> Result<i32> {
    let set = map::cycle_set(&params)?;
    let bound = map::contraction_bound(&params)?;
    let members = set.members_vec();
    let cycles = set.cycles();
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let mut text = format!("members: {}\ncontraction bound: {bound}", join(&members));
    for c in &cycles {
        text.push_str(&format!("\ncycle: {}", join(c)));
    }
    let json = json!({ "params": params, "members": members, "cycles": cycles, "contraction_bound": bound });
    let mut csv = String::from("member");
    for m in &members {
        csv.push_str(&format!("\n{m}"));
    }
    w.line(&text, json, &csv)?;
    Ok(0)
}

fn residue_witness(
    w: &mut Out,
    params: Params,
    a: u64,
    lift: bool,
    max: u64,
    certify: Option<&PathBuf>,
    build: &BuildArgs,
) -> Result<i32> {
    let b1 = params.b() - 1;
    let modulus = if lift {
        b1.checked_pow(params.e())
            .ok_or_else(|| Error::TooLarge("(b-1)^e overflows".into()))?
    } else {
        b1
    };
    if modulus < 2 {
        return Err(Error::InvalidArgument(
            "base 2 has a single residue class".into(),
        ));
    }
    if a >= modulus {
        return Err(Error::InvalidArgument(format!(
            "residue {a} must lie in [0, {modulus})"
        )));
    }
    if !build.construct_only {
        if let Some(h) = search::find_happy_in_residue(&params, a, modulus, max)? {
            let json = json!({ "value": h, "residue": a, "modulus": modulus });
            w.line(
                &h.to_string(),
                json,
                &format!("value,residue,modulus\n{h},{a},{modulus}"),
            )?;
            return Ok(0);
        }
    }
    let Some(path) = certify else {
        eprintln!("none below bound {max}; pass --certify PATH to construct one");
        return Ok(1);
    };
    let ctor = constructor(params, build, 1)?;
    let cert = if lift {
        ctor.certify_lifted_residue(a)?
    } else {
        ctor.certify_residue(a)?
    };
    cert.save(path)?;
    w.certificate(&ctor, &cert, path)?;
    Ok(0)
}

fn cover(
    w: &mut Out,
    params: Params,
    max: u64,
    certify: Option<&PathBuf>,
    workers: usize,
    build: &BuildArgs,
) -> Result<i32> {
    let members = map::cycle_set(&params)?.members_vec();
    if !build.construct_only {
        if let Some(h) = search::find_cover_h(&params, &members, max, workers)? {
            w.line(
                &h.to_string(),
                json!({ "value": h, "members": members }),
                &format!("value\n{h}"),
            )?;
            return Ok(0);
        }
        eprintln!("no cover below {max}; constructing one");
    }
    let ctor = constructor(params, build, workers)?;
    let cert = ctor.certify_cover()?;
    let path = match certify {
        Some(p) => p.clone(),
        None => {
            let Goal::CoverWitness { value, .. } = &cert.goal else {
                unreachable!("cover goal")
            };
            let shown = describe(ctor.sym(), value);
            w.line(
                &shown,
                json!({ "value": shown, "members": members }),
                &format!("value\n{shown}"),
            )?;
            return Ok(0);
        }
    };
    cert.save(&path)?;
    w.certificate(&ctor, &cert, &path)?;
    Ok(0)
}
