use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use paperlab_core::branched::{complete_k2, tau, RhoSpec, Setting};
use paperlab_core::conj::{frobenius20, parse_instance};
use paperlab_core::report::{self, conj_checks, Report, RunConfig, Suite};
use paperlab_core::text::write_complex;
use paperlab_core::voltage::build_cover;

const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "paperlab", version, about = "Verify finite combinatorial constructions behind hyperbolic groups and branched covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification pipeline.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Write a presentation in the `gen:` / `rel:` text format.
    Export {
        #[command(subcommand)]
        what: ExportWhat,
    },
    /// Run every pipeline.
    Report(Common),
}

#[derive(Subcommand)]
enum Target {
    Rips {
        #[command(flatten)]
        common: Common,
        /// Also write the presentation of G to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    Branched {
        #[command(flatten)]
        common: Common,
        /// Check the flag condition at every vertex of Y.
        #[arg(long)]
        flag_links: bool,
        /// Write the unbranched cover of K3 in the complex text format.
        #[arg(long)]
        dump_cover: Option<PathBuf>,
    },
    FeighnMess {
        #[command(flatten)]
        common: Common,
    },
    Conj {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, conflicts_with = "file")]
        preset: Option<Preset>,
        /// Instance description file.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExportWhat {
    Presentation {
        #[arg(long, default_value_t = 30)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Omit the relator a1^k (the presentation of G0).
        #[arg(long)]
        no_k: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Frobenius20,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 30)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    radius: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    random_loops: usize,
    #[arg(long, default_value_t = 100)]
    random_instances: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record per-check runtimes (reports are then no longer byte-stable).
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn config(&self) -> RunConfig {
        let threads = std::env::var("PAPERLAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1);
        RunConfig {
            m: self.m,
            k: self.k,
            n: self.n,
            radius: self.radius,
            tol: self.tol,
            random_loops: self.random_loops,
            random_instances: self.random_instances,
            seed: self.seed,
            threads,
            flag_links: false,
            timings: self.timings,
        }
    }
}

fn emit(common: &Common, report: &Report) -> ExitCode {
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
    };
    if let Err(code) = write_out(common.out.as_ref(), &text) {
        return code;
    }
    ExitCode::from(report.exit_code() as u8)
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), ExitCode> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            ExitCode::from(EXIT_INTERNAL)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn run_suites(common: &Common, cfg: RunConfig, suites: &[Suite]) -> ExitCode {
    match report::run(suites, &cfg) {
        Ok(r) => emit(common, &r),
        Err(e) => config_error(e),
    }
}

fn dump_cover(path: &PathBuf) -> Result<(), String> {
    let s = Setting::build().map_err(|e| e.to_string())?;
    let (v, _) = complete_k2(&s, &RhoSpec::default()).map_err(|e| e.to_string())?;
    let (_, t) = tau(&s, &v);
    let cover = build_cover(&s.k3.complex, &t).map_err(|e| e.to_string())?;
    std::fs::write(path, write_complex(&cover.complex)).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Report(common) => {
            let cfg = common.config();
            run_suites(&common, cfg, &Suite::ALL)
        }
        Command::Verify { target } => match target {
            Target::Rips { common, export } => {
                let cfg = common.config();
                if let Err(e) = cfg.validate() {
                    return config_error(e);
                }
                if let Some(path) = export {
                    let text = match report::export_presentation(cfg.m, Some(cfg.k)) {
                        Ok(t) => t,
                        Err(e) => return config_error(e),
                    };
                    if let Err(code) = write_out(Some(&path), &text) {
                        return code;
                    }
                }
                run_suites(&common, cfg, &[Suite::Rips])
            }
            Target::Branched {
                common,
                flag_links,
                dump_cover: dump,
            } => {
                let mut cfg = common.config();
                cfg.flag_links = flag_links;
                if let Some(path) = dump {
                    if let Err(e) = dump_cover(&path) {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_INTERNAL);
                    }
                }
                run_suites(&common, cfg, &[Suite::Branched])
            }
            Target::FeighnMess { common } => {
                let cfg = common.config();
                run_suites(&common, cfg, &[Suite::FeighnMess])
            }
            Target::Conj { common, preset, file } => {
                let cfg = common.config();
                if let Err(e) = cfg.validate() {
                    return config_error(e);
                }
                let instance = match (preset, file) {
                    (Some(Preset::Frobenius20), _) => Some(frobenius20()),
                    (None, Some(path)) => {
                        let text = match std::fs::read_to_string(&path) {
                            Ok(t) => t,
                            Err(e) => return config_error(format!("cannot read {}: {e}", path.display())),
                        };
                        match parse_instance(&text) {
                            Ok(i) => Some(i),
                            Err(e) => return config_error(e),
                        }
                    }
                    (None, None) => None,
                };
                let checks = match &instance {
                    Some(i) => conj_checks(&cfg, Some(i)),
                    None => report::run_suite(Suite::Conj, &cfg),
                };
                emit(&common, &Report::new(&cfg, checks))
            }
        },
        Command::Export {
            what: ExportWhat::Presentation { m, k, no_k, out },
        } => match report::export_presentation(m, (!no_k).then_some(k)) {
            Ok(text) => write_out(out.as_ref(), &text).err().unwrap_or(ExitCode::SUCCESS),
            Err(e) => config_error(e),
        },
    }
}
