use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, ValueEnum};
use serde_json::{Map, Value};

use orlicz_kit::config::{config_from_value, OutputFormat, RunConfig};
use orlicz_kit::report::Table;
use orlicz_kit::run::{error_envelope, run};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandName {
    YoungValidate,
    YoungComplementary,
    YoungNabla2,
    NormOrlicz,
    NormLorentz,
    Certify,
    Demo,
    ReproducePaper,
}

impl CommandName {
    fn as_str(&self) -> &'static str {
        match self {
            CommandName::YoungValidate => "young-validate",
            CommandName::YoungComplementary => "young-complementary",
            CommandName::YoungNabla2 => "young-nabla2",
            CommandName::NormOrlicz => "norm-orlicz",
            CommandName::NormLorentz => "norm-lorentz",
            CommandName::Certify => "certify",
            CommandName::Demo => "demo",
            CommandName::ReproducePaper => "reproduce-paper",
        }
    }
}

/// Orlicz and Lorentz norms, Young-function checks and volume-condition
/// certificates for composition operators.
#[derive(Debug, Parser)]
#[command(name = "orlicz-kit", version)]
struct Cli {
    command: CommandName,
    /// Demo name (counterexample, holder, continuity) or reproduction target.
    item: Option<String>,
    /// JSON configuration document; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = ["json", "csv", "both"])]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Young function: JSON object or a bare family name.
    #[arg(long)]
    phi: Option<String>,
    /// Composition map: JSON object or a bare map name.
    #[arg(long)]
    tau: Option<String>,
    /// Function: JSON object.
    #[arg(long)]
    f: Option<String>,
    /// lebesgue_line, counting_integers, or a JSON value.
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// Number or "inf".
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Evaluation points for young-complementary.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n_max: Option<i64>,
    #[arg(long)]
    include_zero: bool,
    #[arg(long)]
    lorentz_q: Option<f64>,
    /// Counterexample kind: ex1 or ex2_3.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    target: Option<String>,
}

fn spec_arg(raw: &str, tag: &str) -> anyhow::Result<Value> {
    if raw.trim_start().starts_with('{') {
        serde_json::from_str(raw).with_context(|| format!("parsing JSON argument {raw}"))
    } else {
        let mut m = Map::new();
        m.insert(tag.into(), Value::String(raw.into()));
        Ok(Value::Object(m))
    }
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn build_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut doc = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<Value>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => Value::Object(Map::new()),
    };
    let Value::Object(m) = &mut doc else { bail!("configuration must be a JSON object") };
    m.insert("command".into(), Value::String(cli.command.as_str().into()));
    let mut set = |k: &str, v: Value| {
        m.insert(k.into(), v);
    };
    if let Some(o) = &cli.output {
        set("output_path", Value::String(o.display().to_string()));
    }
    if let Some(f) = &cli.format {
        set("format", Value::String(f.clone()));
    }
    if let Some(s) = cli.seed {
        set("seed", Value::from(s));
    }
    if let Some(x) = &cli.phi {
        set("phi", spec_arg(x, "family")?);
    }
    if let Some(x) = &cli.tau {
        set("tau", spec_arg(x, "map")?);
    }
    if let Some(x) = &cli.f {
        set("f", serde_json::from_str(x).context("parsing --f")?);
    }
    if let Some(x) = &cli.space {
        let v = serde_json::from_str(x).unwrap_or_else(|_| Value::String(x.clone()));
        set("space", v);
    }
    if let Some(x) = &cli.t {
        set("t", Value::Array(x.iter().map(|v| number(*v)).collect()));
    }
    if let Some(x) = &cli.family {
        set("family", Value::String(x.clone()));
    }
    if let Some(x) = cli.n_max {
        set("n_max", Value::from(x));
    }
    if cli.include_zero {
        set("include_zero", Value::Bool(true));
    }
    if let Some(x) = cli.lorentz_q {
        set("lorentz_q", number(x));
    }
    if let Some(x) = cli.d {
        set("d", number(x));
    }
    let q = match &cli.q {
        Some(s) if s == "inf" => Some(Value::String("inf".into())),
        Some(s) => Some(number(s.parse().with_context(|| format!("--q {s}"))?)),
        None => None,
    };
    match cli.command {
        CommandName::Demo => {
            let mut demo = match m.remove("demo") {
                Some(Value::Object(d)) => d,
                _ => Map::new(),
            };
            if let Some(name) = &cli.item {
                demo.insert("name".into(), Value::String(name.clone()));
            }
            for (k, v) in [
                ("kind", cli.kind.clone().map(Value::String)),
                ("p", cli.p.map(number)),
                ("q", q),
                ("gamma", cli.gamma.map(number)),
                ("d", cli.d.map(number)),
                ("phi", m.get("phi").cloned()),
            ] {
                if let Some(v) = v {
                    demo.insert(k.into(), v);
                }
            }
            m.remove("d");
            m.remove("phi");
            m.insert("demo".into(), Value::Object(demo));
        }
        _ => {
            if let Some(x) = cli.p {
                m.insert("p".into(), number(x));
            }
            if let Some(q) = q {
                m.insert("q".into(), q);
            }
            if let Some(t) = cli.target.clone().or_else(|| cli.item.clone()) {
                m.insert("target".into(), Value::String(t));
            }
        }
    }
    Ok(config_from_value(doc)?)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map_or("report".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}

fn emit(config: &RunConfig, json: &str, tables: &[Table]) -> anyhow::Result<()> {
    let csv_text = |t: &Table| t.to_csv_string().map_err(anyhow::Error::from);
    match (config.format, &config.output_path) {
        (OutputFormat::Json, None) => std::io::stdout().write_all(json.as_bytes())?,
        (OutputFormat::Json, Some(p)) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        (OutputFormat::Csv, None) => {
            let mut out = std::io::stdout();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.write_all(b"\n")?;
                }
                out.write_all(csv_text(t)?.as_bytes())?;
            }
        }
        (OutputFormat::Csv, Some(p)) if tables.len() == 1 => fs::write(p, csv_text(&tables[0])?)?,
        (OutputFormat::Csv, Some(p)) => {
            for t in tables {
                fs::write(sibling(p, &t.name), csv_text(t)?)?;
            }
        }
        (OutputFormat::Both, None) => bail!("format \"both\" needs --output"),
        (OutputFormat::Both, Some(p)) => {
            fs::write(p, json).with_context(|| format!("writing {}", p.display()))?;
            for t in tables {
                fs::write(sibling(p, &t.name), csv_text(t)?)?;
            }
        }
    }
    Ok(())
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("ORLICZ_KIT_THREADS") {
        let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).with_context(|| {
            format!("ORLICZ_KIT_THREADS must be a positive integer, got {raw:?}")
        })?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn fail(config: Option<&RunConfig>, err: &dyn std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    print!("{}", error_envelope(config, err).to_json());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail(None, &e);
    }
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(None, &format!("{e:#}")),
    };
    match run(&config) {
        Ok(out) => {
            let env = out.envelope(&config);
            if let Err(e) = emit(&config, &env.to_json(), &out.tables) {
                return fail(Some(&config), &format!("{e:#}"));
            }
            for d in &out.diagnostics {
                eprintln!("{:?}: {}", d.level, d.message);
            }
            ExitCode::from(env.verdict.exit_code() as u8)
        }
        Err(e) => fail(Some(&config), &e),
    }
}
