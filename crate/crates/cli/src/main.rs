use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use monogamy::discord::discord_two_qubit;
use monogamy::measures::{EntropyConfig, LogBase, MeasureReport};
use monogamy::regimes::{params_for, Regime, RegimeInput};
use monogamy::state::{build_rho_ab, CoherenceParams};
use monogamy::sweep::{self, contour_boundary, parse_config, rows_from_csv, run_sweep};
use monogamy::worldline::{
    gamma_cross_far_closed, gamma_cross_near_closed, gamma_cross_quadrature, gamma_self_closed, gamma_self_quadrature,
    QuadratureSpec, Scheme, WorldlineConfig, WorldlineRegime, DEFAULT_NODES,
};
use monogamy::Error;

#[derive(Parser)]
#[command(
    name = "monogamy",
    version,
    about = "Entanglement monogamy of field-coupled superposed particles"
)]
struct Cli {
    /// Logarithm base for every entropy.
    #[arg(long, global = true, value_enum)]
    log_base: Option<BaseArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::E => LogBase::E,
            BaseArg::Two => LogBase::Two,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Far,
    Near,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Far => Regime::Far,
            RegimeArg::Near => Regime::Near,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum SchemeArg {
    #[default]
    Ibp,
    Eps,
}

#[derive(clap::Args)]
struct PhysicalPoint {
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long = "l-over-t")]
    l_over_t: Option<f64>,
    #[arg(long = "d-over-t")]
    d_over_t: Option<f64>,
    /// Turn regime ordering violations into warnings.
    #[arg(long)]
    override_bounds: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Every measure at one point, as JSON.
    ///
    /// Either give a physical point (`--regime --g --l-over-t --d-over-t`) or
    /// the coherence functionals directly.
    Measures {
        #[command(flatten)]
        point: PhysicalPoint,
        #[arg(long, default_value_t = 0.0)]
        gamma_a: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_b: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma_c: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi_ab: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi_ba: f64,
    },
    /// Run a parameter sweep from a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Extract a level set from a 2-D sweep CSV.
    Contour {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        level: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coherence functionals for a physical point, with validity warnings.
    Regime {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long)]
        g: f64,
        #[arg(long = "l-over-t")]
        l_over_t: f64,
        #[arg(long = "d-over-t")]
        d_over_t: f64,
        #[arg(long)]
        override_bounds: bool,
    },
    /// Compare worldline quadrature of the QED functionals with their closed forms.
    QedVerify {
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Ibp)]
        scheme: SchemeArg,
    },
}

fn entropy_config(cli_base: Option<BaseArg>, fallback: LogBase) -> EntropyConfig {
    EntropyConfig {
        log_base: cli_base.map(LogBase::from).unwrap_or(fallback),
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn regime_input(point: &PhysicalPoint) -> Result<Option<RegimeInput>, Error> {
    let Some(regime) = point.regime else {
        if point.g.is_some() || point.l_over_t.is_some() || point.d_over_t.is_some() {
            return Err(Error::Domain("--g/--l-over-t/--d-over-t need --regime".into()));
        }
        return Ok(None);
    };
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Error::Domain(format!("--regime needs {flag}")));
    Ok(Some(
        RegimeInput::new(
            regime.into(),
            need(point.g, "--g")?,
            need(point.l_over_t, "--l-over-t")?,
            need(point.d_over_t, "--d-over-t")?,
        )
        .with_override(point.override_bounds),
    ))
}

fn measures(cli_base: Option<BaseArg>, point: &PhysicalPoint, raw: CoherenceParams) -> Result<(), Error> {
    let config = entropy_config(cli_base, LogBase::E);
    let (params, warnings) = match regime_input(point)? {
        Some(input) => {
            let out = params_for(&input)?;
            let warnings: Vec<String> = out.validity_warnings.iter().map(ToString::to_string).collect();
            (out.params, warnings)
        }
        None => (raw, Vec::new()),
    };
    let report = MeasureReport::compute(&params, config)?;
    let ab_discord = if report.psd_ok {
        Some(discord_two_qubit(&build_rho_ab(&params)?, config)?)
    } else {
        None
    };
    let both_bases = if report.psd_ok {
        let nats = MeasureReport::compute(&params, EntropyConfig::NATS)?.discord_a_field;
        let bits = MeasureReport::compute(&params, EntropyConfig::BITS)?.discord_a_field;
        json!({ "nats": nats, "bits": bits })
    } else {
        serde_json::Value::Null
    };
    print_json(&json!({
        "params": params,
        "log_base": config.log_base,
        "measures": report,
        "class_label": report.class.label(),
        "discord_a_field_both_bases": both_bases,
        "discord_ab": ab_discord,
        "warnings": warnings,
    }));
    Ok(())
}

fn sweep_cmd(cli_base: Option<BaseArg>, config: &Path, out: &Path, format: Format) -> Result<(), Error> {
    let text = sweep::emit::read_file(config)?;
    let mut spec = parse_config(&text)?;
    if let Some(base) = cli_base {
        spec.log_base = base.into();
    }
    let rows = run_sweep(&spec);
    match format {
        Format::Csv => sweep::emit_csv(&rows, out)?,
        Format::Json => sweep::emit_json(&spec, &rows, out)?,
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!("{} rows written to {}", rows.len(), out.display());
    if failed > 0 {
        eprintln!("{failed} rows could not be computed (NaN, class `unphysical`)");
    }
    Ok(())
}

fn contour_cmd(input: &Path, field: &str, level: f64, out: &Path) -> Result<(), Error> {
    let rows = rows_from_csv(&sweep::emit::read_file(input)?)?;
    let contour = contour_boundary(&rows, field, level)?;
    sweep::emit::emit_contour_csv(&contour, out)?;
    let vertices: usize = contour.polylines.iter().map(Vec::len).sum();
    eprintln!(
        "{} polyline(s), {vertices} vertices written to {}",
        contour.polylines.len(),
        out.display()
    );
    Ok(())
}

fn regime_cmd(input: RegimeInput) -> Result<(), Error> {
    let out = params_for(&input)?;
    let warnings: Vec<String> = out.validity_warnings.iter().map(ToString::to_string).collect();
    print_json(&json!({
        "input": input,
        "params": out.params,
        "validity_warnings": warnings,
    }));
    Ok(())
}

fn qed_verify(nodes: usize, scheme: SchemeArg) -> Result<(), Error> {
    let scheme = match scheme {
        SchemeArg::Ibp => Scheme::IbpLog,
        SchemeArg::Eps => Scheme::FiniteEps,
    };
    let quad = QuadratureSpec::default().with_nodes(nodes).with_scheme(scheme);
    let (l, d_near, d_far) = (0.01, 0.05, 10.0);

    let self_q = gamma_self_quadrature(&WorldlineConfig::self_term(l, 1.0), &quad)?;
    let near_q = gamma_cross_quadrature(
        &WorldlineConfig::cross(WorldlineRegime::CrossNear, l, d_near, 1.0),
        &quad,
    )?;
    let far_q = gamma_cross_quadrature(&WorldlineConfig::cross(WorldlineRegime::CrossFar, l, d_far, 1.0), &quad)?;

    let rows = [
        ("gamma_self  L/T=0.01", self_q, gamma_self_closed(l, 1.0)),
        ("gamma_c near D/T=0.05", near_q, gamma_cross_near_closed(l, d_near, 1.0)),
        ("gamma_c far  D/T=10", far_q, gamma_cross_far_closed(l, d_far, 1.0)),
    ];
    println!("scheme {scheme:?}, {nodes} nodes per axis, e = 1");
    println!(
        "{:<24}{:>16}{:>16}{:>12}{:>12}",
        "quantity", "quadrature", "closed form", "rel. err", "doubling"
    );
    for (name, q, closed) in rows {
        println!(
            "{name:<24}{:>16.6e}{:>16.6e}{:>12.3e}{:>12.1e}",
            q.value,
            closed,
            ((q.value - closed) / closed).abs(),
            q.doubling_shift
        );
    }
    // Leading coefficient and the bracket coefficient c in 1 + c (D/T)² ln(D/T).
    let lead = 64.0 / (3.0 * std::f64::consts::PI.powi(2)) * l * l;
    let ratio = near_q.value / lead;
    let c = (ratio - 1.0) / (d_near * d_near * d_near.ln());
    println!("near bracket coefficient (closed form 4): {c:.3}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Measures {
            point,
            gamma_a,
            gamma_b,
            gamma_c,
            phi_ab,
            phi_ba,
        } => measures(
            cli.log_base,
            &point,
            CoherenceParams::new(gamma_a, gamma_b, gamma_c, phi_ab, phi_ba),
        ),
        Command::Sweep { config, out, format } => sweep_cmd(cli.log_base, &config, &out, format),
        Command::Contour {
            input,
            field,
            level,
            out,
        } => contour_cmd(&input, &field, level, &out),
        Command::Regime {
            regime,
            g,
            l_over_t,
            d_over_t,
            override_bounds,
        } => regime_cmd(RegimeInput::new(regime.into(), g, l_over_t, d_over_t).with_override(override_bounds)),
        Command::QedVerify { nodes, scheme } => qed_verify(nodes, scheme),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
