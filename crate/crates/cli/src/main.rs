use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anticanon_cli::{parse_seeds, run, Command, OutputFormat, RunConfig, DEFAULT_SAMPLES, SEED_ENV};
use clap::{Args, Parser, Subcommand};

/// Enumerate blowup configurations, classify them and compare against the
/// expected table.
#[derive(Parser)]
#[command(name = "anticanon", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long = "format", value_enum, default_value_t = OutputFormat::Markdown)]
    format: OutputFormat,
    /// Comma-separated oracle seeds; defaults to $ANTICANON_SEED, then 1,2,3.
    #[arg(long)]
    seeds: Option<String>,
    /// Torus sample points for image computations.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every configuration up to isomorphism.
    Enumerate {
        #[arg(long)]
        nodes_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run rule and oracle on the plans in FILE.
    Classify {
        #[arg(long = "plans", value_name = "FILE")]
        plans: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classify the built-in enumeration and diff against the golden table.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Render the consolidated classification table.
    Table {
        /// Skip the surface image computations.
        #[arg(long)]
        no_images: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn config(cli: Cli) -> anyhow::Result<RunConfig> {
    let (command, common) = match &cli.command {
        Cmd::Enumerate { common, .. } => (Command::Enumerate, common),
        Cmd::Classify { common, .. } => (Command::Classify, common),
        Cmd::Verify { common } => (Command::Verify, common),
        Cmd::Table { common, .. } => (Command::Table, common),
    };
    let mut cfg = RunConfig::new(command);
    cfg.output_format = common.format;
    cfg.samples = common.samples;
    let env = std::env::var(SEED_ENV).ok().filter(|s| !s.trim().is_empty());
    if let Some(s) = common.seeds.as_deref().or(env.as_deref()) {
        cfg.seeds = parse_seeds(s)?;
    }
    match cli.command {
        Cmd::Enumerate { nodes_only, .. } => cfg.nodes_only = nodes_only,
        Cmd::Classify { plans, .. } => cfg.plan_file = Some(plans),
        Cmd::Table { no_images, .. } => cfg.images = !no_images,
        Cmd::Verify { .. } => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(cli).and_then(|cfg| {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        let exit = run(&cfg, &mut out)?;
        out.flush()?;
        Ok(exit)
    });
    match result {
        Ok(exit) => ExitCode::from(exit.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> anyhow::Result<RunConfig> {
        config(Cli::try_parse_from(args)?)
    }

    #[test]
    fn classify_requires_a_plans_file() {
        assert!(Cli::try_parse_from(["anticanon", "classify"]).is_err());
        let c = cfg(&["anticanon", "classify", "--plans", "p.json", "--seeds", "4,5,6", "--samples", "50"]).unwrap();
        assert_eq!(c.command, Command::Classify);
        assert_eq!(c.plan_file, Some(PathBuf::from("p.json")));
        assert_eq!(c.seeds, vec![4, 5, 6]);
        assert_eq!(c.samples, 50);
        assert_eq!(c.output_format, OutputFormat::Markdown);
    }

    #[test]
    fn defaults_and_flags() {
        let c = cfg(&["anticanon", "enumerate", "--nodes-only", "--format", "json"]).unwrap();
        assert!(c.nodes_only);
        assert_eq!(c.output_format, OutputFormat::Json);
        let t = cfg(&["anticanon", "table", "--no-images"]).unwrap();
        assert!(!t.images);
        assert!(cfg(&["anticanon", "verify", "--seeds", "x"]).is_err());
        assert!(Cli::try_parse_from(["anticanon", "enumerate", "--format", "xml"]).is_err());
    }

    #[test]
    fn exit_statuses() {
        let mut sink = Vec::new();
        let c = cfg(&["anticanon", "enumerate", "--nodes-only"]).unwrap();
        assert_eq!(run(&c, &mut sink).unwrap().code(), 0);
        let c = cfg(&["anticanon", "classify", "--plans", "/nonexistent/plans.json"]).unwrap();
        assert!(run(&c, &mut sink).is_err());

        let dir = std::env::temp_dir().join(format!("anticanon-main-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.json");
        std::fs::write(&bad, r#"[{"steps": [{"kind": "node", "target": 9}]}]"#).unwrap();
        let c = cfg(&["anticanon", "classify", "--plans", bad.to_str().unwrap()]).unwrap();
        assert_eq!(run(&c, &mut sink).unwrap().code(), 1);
        let good = dir.join("good.json");
        let plans = anticanon_cli::enumeration_rows(true);
        std::fs::write(&good, serde_json::to_string(&plans).unwrap()).unwrap();
        let c = cfg(&["anticanon", "classify", "--plans", good.to_str().unwrap(), "--format", "csv"]).unwrap();
        let mut out = Vec::new();
        assert_eq!(run(&c, &mut out).unwrap().code(), 0);
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 4);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
