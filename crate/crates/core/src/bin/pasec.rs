use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use pasec::config::{load_config, RunConfig};
use pasec::error::Error;
use pasec::montecarlo::{mc_esc_pa, mc_sop_pa};
use pasec::sweep::{render_mc_csv, run_mc_sweep, run_sweep, write_csv, write_text};
use pasec::validate::validate_stats;
use pasec::{esc_bounds, sop_bounds, Result};

#[derive(Parser, Debug)]
#[command(
    name = "pasec",
    version,
    about = "Secrecy bounds and Monte Carlo for pinching-antenna links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// JSON config file; absent keys take the defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path for CSV-producing subcommands.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long = "quad-n", global = true)]
    quad_n: Option<usize>,
    /// Comma-separated SNR grid in dB.
    #[arg(long = "snr-db", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Option<Vec<f64>>,
    /// Waveguide attenuation in Np/m.
    #[arg(long, global = true)]
    alpha: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds, asymptotes and Monte Carlo over the SNR grid, written as CSV.
    Sweep,
    /// Secrecy outage bounds and Monte Carlo at each grid point.
    Sop,
    /// Ergodic secrecy capacity bounds and Monte Carlo at each grid point.
    Esc,
    /// Distribution self-checks.
    ValidateStats,
    /// Monte Carlo estimates only, written as CSV.
    McOnly,
}

impl Overrides {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = &self.out {
            cfg.output_path = p.clone();
        }
        if let Some(s) = self.seed {
            cfg.mc_seed = s;
        }
        if let Some(t) = self.trials {
            cfg.mc_trials = t;
        }
        if let Some(n) = self.quad_n {
            cfg.quadrature_n = n;
        }
        if let Some(grid) = &self.snr_db {
            cfg.snr_db_grid = grid.clone();
        }
        if let Some(a) = self.alpha {
            cfg.attenuation_alpha = a;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Prints one line per grid point and returns whether every Monte Carlo
/// estimate sits inside its bounds widened by three standard errors.
fn single_point(cfg: &RunConfig, sop: bool, out: &mut dyn Write) -> Result<bool> {
    let scenario = cfg.scenario()?;
    let target = cfg.target()?;
    let rule = cfg.rule()?;
    let mc = cfg.mc()?;
    let mut ok = true;
    emit(out, "snr_db,lower,upper,mc,mc_se,bracketed\n")?;
    for &db in &cfg.snr_db_grid {
        let chan = cfg.channel(db)?;
        let (pair, est) = if sop {
            (
                sop_bounds(&scenario, &chan, &target, &rule)?,
                mc_sop_pa(&scenario, &chan, &target, &mc),
            )
        } else {
            (esc_bounds(&scenario, &chan, &rule)?, mc_esc_pa(&scenario, &chan, &mc))
        };
        let inside = pair.contains(est.mean, 3.0 * est.std_error);
        if !inside {
            warn!(
                "snr {db} dB: Monte Carlo {} outside [{}, {}]",
                est.mean, pair.lower, pair.upper
            );
        }
        ok &= inside;
        let line = format!(
            "{db},{},{},{},{},{inside}\n",
            pair.lower, pair.upper, est.mean, est.std_error
        );
        emit(out, &line)?;
    }
    Ok(ok)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: "<stdout>".into(),
        reason: e.to_string(),
    })
}

/// Executes one command. `Ok(false)` means a check failed.
fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let cfg = cli.overrides.resolve()?;
    match cli.command {
        Command::Sweep => {
            let records = run_sweep(&cfg)?;
            write_csv(&records, &cfg.output_path)?;
            info!("wrote {} rows to {}", records.len(), cfg.output_path.display());
            Ok(true)
        }
        Command::Sop => single_point(&cfg, true, out),
        Command::Esc => single_point(&cfg, false, out),
        Command::ValidateStats => {
            let report = validate_stats(&cfg)?;
            emit(out, &report.to_string())?;
            Ok(report.passed())
        }
        Command::McOnly => {
            let text = render_mc_csv(&run_mc_sweep(&cfg)?);
            match &cli.overrides.out {
                Some(path) => write_text(&text, path)?,
                None => emit(out, &text)?,
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pasec::sweep::{format_value, SweepRecord, MC_FIELDS};

    fn exec(args: &[&str]) -> (Result<bool>, String) {
        let cli = Cli::try_parse_from(std::iter::once("pasec").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let r = run(&cli, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    fn path_str(p: &std::path::Path) -> &str {
        p.to_str().unwrap()
    }

    #[test]
    fn sweep_csv_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.csv");
        let (r, _) = exec(&[
            "sweep",
            "--snr-db",
            "-10,0,50",
            "--trials",
            "2000",
            "--out",
            path_str(&out),
        ]);
        assert_eq!(r, Ok(true));
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(!text.contains('\r'));

        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header, SweepRecord::FIELDS);
        let rows: Vec<Vec<f64>> = rdr
            .records()
            .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![-10.0, 0.0, 50.0]);

        // Re-rendering the parsed values reproduces the file byte for byte.
        let mut again = SweepRecord::FIELDS.join(",") + "\n";
        for r in &rows {
            let cells: Vec<String> = r.iter().map(|&v| format_value(v)).collect();
            again += &(cells.join(",") + "\n");
        }
        assert_eq!(again, text);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        let out = dir.path().join("o.csv");
        let doc = format!(
            r#"{{"snr_db_grid": [10, 20], "mc_trials": 1000, "attenuation_alpha": 0.02, "output_path": "{}"}}"#,
            path_str(&out)
        );
        std::fs::write(&cfg, doc).unwrap();
        let (r, _) = exec(&["sweep", "--config", path_str(&cfg), "--alpha", "0"]);
        assert_eq!(r, Ok(true));
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().count(), 3);
        for line in text.lines().skip(1) {
            let v: Vec<&str> = line.split(',').collect();
            assert_eq!(v[1], v[2]);
        }
    }

    #[test]
    fn global_flags_before_subcommand() {
        let cli = Cli::try_parse_from(["pasec", "--seed", "9", "--quad-n", "64", "sop"]).unwrap();
        let cfg = cli.overrides.resolve().unwrap();
        assert_eq!((cfg.mc_seed, cfg.quadrature_n), (9, 64));
    }

    #[test]
    fn single_point_commands() {
        for cmd in ["sop", "esc"] {
            let (r, text) = exec(&[cmd, "--snr-db", "50", "--trials", "5000", "--quad-n", "400"]);
            assert_eq!(r, Ok(true));
            let lines: Vec<&str> = text.lines().collect();
            assert_eq!(lines.len(), 2);
            assert!(lines[1].starts_with("50,"));
            assert!(lines[1].ends_with(",true"));
        }
    }

    #[test]
    fn mc_only_is_reproducible() {
        let args = ["mc-only", "--snr-db", "0,10", "--trials", "500", "--seed", "7"];
        let (r, text) = exec(&args);
        assert_eq!(r, Ok(true));
        assert_eq!(text.lines().next().unwrap(), MC_FIELDS.join(","));
        assert_eq!(text.lines().count(), 3);
        assert_eq!(exec(&args).1, text);
    }

    #[test]
    fn validate_stats_passes_on_defaults() {
        let (r, text) = exec(&["validate-stats"]);
        assert_eq!(r, Ok(true));
        assert_eq!(text.lines().count(), 9);
        assert!(!text.contains("FAIL"));
    }

    #[test]
    fn failed_bracket_reported() {
        // A single-node rule is far too coarse at 50 dB for the SOP bounds to hold.
        let (r, text) = exec(&["sop", "--snr-db", "50", "--trials", "20000", "--quad-n", "1"]);
        assert_eq!(r, Ok(false), "{text}");
        assert!(text.ends_with(",false\n"));
    }

    #[test]
    fn errors_surface() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.json");
        std::fs::write(&cfg, r#"{"side_length_D": -1}"#).unwrap();
        let err = exec(&["sweep", "--config", path_str(&cfg)]).0.unwrap_err();
        assert!(err.to_string().contains("side_length_D"), "{err}");

        std::fs::write(&cfg, r#"{"colour": 3}"#).unwrap();
        assert!(exec(&["sweep", "--config", path_str(&cfg)]).0.is_err());
        assert!(exec(&["sweep", "--trials", "3"]).0.is_err());
        let bad_out = [
            "sweep",
            "--out",
            "/nonexistent-dir/q/r.csv",
            "--snr-db",
            "0",
            "--trials",
            "200",
        ];
        assert!(matches!(exec(&bad_out).0, Err(Error::Io { .. })));
        assert!(exec(&["sweep", "--config", "/nonexistent-dir/none.json"]).0.is_err());
        assert!(Cli::try_parse_from(["pasec", "frobnicate"]).is_err());
        assert!(Cli::try_parse_from(["pasec", "sweep", "--snr-db", "1,x"]).is_err());
    }
}
