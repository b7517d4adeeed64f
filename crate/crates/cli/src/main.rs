use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mdist_cli::commands::{self, GenerateParams, Output};
use mdist_cli::suite;
use mdist_core::search::{Objective, RadiusMode, SearchConfig};
use mdist_core::{Rational, Rule};

#[derive(Parser)]
#[command(
    name = "mdist",
    version,
    about = "Metric and acceptability distortion of voting rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file and its embedded certificate.
    Validate { file: PathBuf },
    /// Evaluate a rule on an instance file and print a JSON record.
    Run {
        file: PathBuf,
        /// Defaults to the certificate's rule.
        #[arg(long)]
        rule: Option<String>,
        /// Also take the worst case over every ranking consistent with the metric.
        #[arg(long)]
        enumerate_ties: bool,
    },
    /// Write a hard-instance family as instance files.
    Generate {
        /// One of av-degenerate, av-hard, smith-cycle, ell1-pair, condorcet,
        /// copeland, plurality, scoring, stv-1d, stv-simplex.
        family: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        shift: Option<usize>,
        /// Efficiency as a fraction, e.g. 1/4.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        /// low, mid or high.
        #[arg(long)]
        regime: Option<String>,
        /// Comma-separated scoring vector.
        #[arg(long)]
        scores: Option<String>,
        #[arg(long)]
        rule: Option<String>,
        /// Output file; ell1-pair writes `<stem>-a` and `<stem>-b`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the AV bound curve as CSV.
    Curve {
        #[arg(long, default_value_t = 99)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hill-climb for instances with high distortion.
    Search {
        #[arg(long, default_value = "av")]
        rule: String,
        /// distance or ab.
        #[arg(long, default_value = "distance")]
        objective: String,
        /// global or local.
        #[arg(long, default_value = "global")]
        radii: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        dimension: usize,
        #[arg(long, default_value_t = 100)]
        grid: i64,
        /// Pin the efficiency of the optimum (AV only).
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance checks or the seeded property suite.
    Suite {
        /// acceptance or properties.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_fraction(text: &str) -> Result<Rational, String> {
    text.trim()
        .parse::<Rational>()
        .map_err(|_| format!("not a fraction: `{text}`"))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("instance");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-{suffix}.{ext}"),
        None => format!("{stem}-{suffix}"),
    };
    path.with_file_name(name)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Output {
    match out {
        Some(path) => match fs::write(path, text) {
            Ok(()) => Output::ok(format!("wrote {}\n", path.display())),
            Err(e) => Output::usage(format!("{}: {e}", path.display())),
        },
        None => Output::ok(text.to_string()),
    }
}

fn generate(family: &str, params: &GenerateParams, out: Option<&Path>) -> Output {
    let files = match commands::generate(family, params) {
        Ok(f) => f,
        Err(e) => return Output::usage(e),
    };
    let mut text = String::new();
    for (suffix, file) in files {
        let toml = file.to_toml();
        match (out, suffix) {
            (Some(path), suffix) => {
                let target = suffix.map_or_else(|| path.to_path_buf(), |s| with_suffix(path, &s));
                if let Err(e) = fs::write(&target, toml) {
                    return Output::usage(format!("{}: {e}", target.display()));
                }
                text.push_str(&format!("wrote {}\n", target.display()));
            }
            (None, Some(s)) => text.push_str(&format!("# instance {s}\n{toml}\n")),
            (None, None) => text.push_str(&toml),
        }
    }
    Output::ok(text)
}

fn search_config(
    rule: &str,
    objective: &str,
    radii: &str,
    p: Option<&str>,
) -> Result<(Rule, Objective, RadiusMode, Option<Rational>), String> {
    let rule = Rule::parse(rule).map_err(|e| e.to_string())?;
    let objective =
        Objective::parse(objective).ok_or_else(|| format!("unknown objective `{objective}`"))?;
    let radii = RadiusMode::parse(radii).ok_or_else(|| format!("unknown radius mode `{radii}`"))?;
    let p = p.map(parse_fraction).transpose()?;
    Ok((rule, objective, radii, p))
}

fn dispatch(command: Command) -> Output {
    match command {
        Command::Validate { file } => commands::validate(&file),
        Command::Run {
            file,
            rule,
            enumerate_ties,
        } => commands::run(&file, rule.as_deref(), enumerate_ties),
        Command::Generate {
            family,
            m,
            n,
            ell,
            shift,
            p,
            eps,
            regime,
            scores,
            rule,
            out,
        } => {
            let params = GenerateParams {
                m,
                n,
                ell,
                shift,
                p,
                eps,
                regime,
                scores,
                rule,
            };
            generate(&family, &params, out.as_deref())
        }
        Command::Curve { samples, out } => match commands::curve(samples) {
            Ok(csv) => write_or_print(out.as_deref(), &csv),
            Err(e) => Output::usage(e),
        },
        Command::Search {
            rule,
            objective,
            radii,
            n,
            m,
            dimension,
            grid,
            p,
            budget,
            restarts,
            seed,
            out,
        } => {
            let (rule, objective, radii, pinned_p) =
                match search_config(&rule, &objective, &radii, p.as_deref()) {
                    Ok(x) => x,
                    Err(e) => return Output::usage(e),
                };
            let cfg = SearchConfig {
                dimension,
                grid,
                radii,
                pinned_p,
                budget,
                restarts,
                seed,
                ..SearchConfig::new(rule, objective, n, m)
            };
            let result = commands::search(&cfg);
            match out {
                Some(path) if result.code != commands::EXIT_USAGE => {
                    let written = write_or_print(Some(&path), &result.text);
                    if written.code == commands::EXIT_OK {
                        Output {
                            code: result.code,
                            ..written
                        }
                    } else {
                        written
                    }
                }
                _ => result,
            }
        }
        Command::Suite { name, seed } => suite::suite(&name, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                commands::EXIT_USAGE as u8
            } else {
                0
            });
        }
    };
    let out = dispatch(cli.command);
    if out.code == commands::EXIT_OK {
        print!("{}", out.text);
    } else if out.code == commands::EXIT_USAGE {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    ExitCode::from(out.code as u8)
}
