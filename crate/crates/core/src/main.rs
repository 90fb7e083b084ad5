use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quon::bandfit::{fit_band, optimal_a_given_q, BandData, FitOptions};
use quon::fock::{vev_rewrite, Exact, MixedWord, Numeric};
use quon::models::{
    oscillator_degeneracy, oscillator_energy, rotor_energy, OscillatorConfig, RotorConfig,
};
use quon::qnum::DeformationParameter;
use quon::report::{num, Format, Table};
use quon::symsector::{classify_occupancy, ClassifyOptions, EnumerationLimits, OccupancyVector};
use quon::verify::{run_suite, Suite};
use quon::Result;

#[derive(Parser)]
#[command(
    name = "quon",
    version,
    about = "Quon algebra: vacuum expectation values, symmetry sectors, spectra and band fits"
)]
struct Cli {
    /// Deformation parameter in [-1, 1].
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    q: f64,

    /// Exact polynomials in q instead of numbers where available.
    #[arg(long, global = true)]
    exact: bool,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Table,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Osc,
    Rotor,
}

#[derive(Subcommand)]
enum Command {
    /// Vacuum expectation value of an operator string such as "a2 a1 ad2 ad1".
    Vev { word: String },
    /// Symmetry sectors of the overlap matrix of all orderings of an occupancy.
    Classify {
        /// `mode:count` pairs, e.g. `1:1 2:1 3:1`.
        #[arg(required = true, num_args = 1..)]
        occupancy: Vec<String>,
    },
    /// Oscillator or rotor spectrum as CSV.
    Spectrum {
        #[arg(value_enum)]
        model: Model,
        /// Highest oscillator quantum number.
        #[arg(long, default_value_t = 10)]
        nmax: u32,
        /// Highest rotor angular momentum.
        #[arg(long, default_value_t = 24)]
        lmax: u32,
        /// One energy column per listed q, e.g. `1,0.99,0.98`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        compare_q: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        hbar_omega: f64,
        /// Rotor inertia constant.
        #[arg(long = "A", default_value_t = 1.0)]
        inertia_a: f64,
        /// Rotor rows for even l only (band format accepted by `fit`).
        #[arg(long)]
        even: bool,
    },
    /// Least-squares (A, q) fit of the quon rotor to a band CSV `l,energy_kev[,weight]`.
    Fit {
        input: PathBuf,
        /// Add the rigid-rotor (q = 1, refitted A) column.
        #[arg(long)]
        emit_comparison: bool,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        q_max: f64,
    },
    /// Run the consistency suites; exit 1 on any failure.
    Verify {
        /// Size bound for the suites (quanta or word length), at most 8.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Run one suite: oracle, induction, norm, gram, oscillator, rotor.
        #[arg(long)]
        suite: Option<String>,
    },
}

enum Outcome {
    Ok,
    VerifyFailed,
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn deformation(q: f64) -> Result<DeformationParameter> {
    DeformationParameter::new(q)
}

fn cmd_vev(cli: &Cli, word: &str) -> Result<Outcome> {
    let word: MixedWord = word.parse()?;
    let text = if cli.exact {
        vev_rewrite(&word, &Exact).to_string()
    } else {
        num(vev_rewrite(
            &word,
            &Numeric::new(deformation(cli.q)?.value()),
        ))
    };
    let mut out = open_output(&cli.output)?;
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(Outcome::Ok)
}

fn cmd_classify(cli: &Cli, occupancy: &[String]) -> Result<Outcome> {
    let occ: OccupancyVector = occupancy.join(" ").parse()?;
    let q = deformation(cli.q)?.value();
    let spectrum = classify_occupancy(
        &occ,
        q,
        cli.exact,
        &ClassifyOptions::default(),
        &EnumerationLimits::default(),
    )?;
    let with_poly = cli.exact && spectrum.clusters.iter().any(|c| c.exact_poly.is_some());
    if cli.exact && !with_poly {
        eprintln!("warning: exact eigenvalues are only attached for up to 4 quanta");
    }
    let mut headers = vec!["sector", "eigenvalue", "multiplicity", "null"];
    if with_poly {
        headers.push("polynomial");
    }
    let mut table = Table::new(headers);
    for c in &spectrum.clusters {
        let mut row = vec![
            c.label.to_string(),
            num(c.eigenvalue),
            c.multiplicity.to_string(),
            c.is_null.to_string(),
        ];
        if with_poly {
            row.push(
                c.exact_poly
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_default(),
            );
        }
        table.push(row);
    }
    let mut out = open_output(&cli.output)?;
    table.write(&mut out, cli.format.into())?;
    out.flush()?;
    Ok(Outcome::Ok)
}

fn energy_header(q: f64) -> String {
    format!("energy_q{}", num(q))
}

#[allow(clippy::too_many_arguments)]
fn cmd_spectrum(
    cli: &Cli,
    model: Model,
    nmax: u32,
    lmax: u32,
    compare_q: &[f64],
    hbar_omega: f64,
    inertia_a: f64,
    even: bool,
) -> Result<Outcome> {
    let qs: Vec<DeformationParameter> = if compare_q.is_empty() {
        vec![deformation(cli.q)?]
    } else {
        compare_q
            .iter()
            .map(|&q| deformation(q))
            .collect::<Result<_>>()?
    };
    let energy_cols: Vec<String> = if compare_q.is_empty() {
        vec!["energy".into()]
    } else {
        qs.iter().map(|q| energy_header(q.value())).collect()
    };

    let table = match model {
        Model::Osc => {
            let cfgs: Vec<OscillatorConfig> = qs
                .iter()
                .map(|&q| OscillatorConfig::new(hbar_omega, q))
                .collect::<Result<_>>()?;
            let mut table = Table::new(
                std::iter::once("N".to_string())
                    .chain(energy_cols)
                    .chain(std::iter::once("degeneracy".to_string())),
            );
            for n in 0..=nmax {
                let mut row = vec![n.to_string()];
                row.extend(cfgs.iter().map(|c| num(oscillator_energy(n, c))));
                row.push(oscillator_degeneracy(n).to_string());
                table.push(row);
            }
            table
        }
        Model::Rotor => {
            let cfgs: Vec<RotorConfig> = qs
                .iter()
                .map(|&q| RotorConfig::new(inertia_a, q))
                .collect::<Result<_>>()?;
            let mut table = Table::new(std::iter::once("l".to_string()).chain(energy_cols));
            for l in (0..=lmax).filter(|l| !even || l % 2 == 0) {
                let mut row = vec![l.to_string()];
                row.extend(cfgs.iter().map(|c| num(rotor_energy(l, c))));
                table.push(row);
            }
            table
        }
    };
    let mut out = open_output(&cli.output)?;
    table.write(&mut out, cli.format.into())?;
    out.flush()?;
    Ok(Outcome::Ok)
}

fn cmd_fit(
    cli: &Cli,
    input: &Path,
    emit_comparison: bool,
    q_min: f64,
    q_max: f64,
) -> Result<Outcome> {
    let band = BandData::from_path(input)?;
    let opts = FitOptions {
        q_min,
        q_max,
        ..FitOptions::default()
    };
    let fit = fit_band(&band, &opts)?;
    if fit.at_boundary {
        eprintln!(
            "warning: the best q = {} lies on the edge of the search interval [{}, {}]",
            num(fit.q.value()),
            num(q_min),
            num(q_max)
        );
    }
    let rigid_a = if emit_comparison {
        Some(optimal_a_given_q(&band, 1.0)?.0)
    } else {
        None
    };

    let mut headers = vec!["l", "energy_exp", "energy_fit", "residual"];
    if rigid_a.is_some() {
        headers.push("energy_rigid");
    }
    let mut table = Table::new(headers);
    for (lv, r) in band.levels().iter().zip(&fit.per_level_residuals) {
        let mut row = vec![
            lv.l.to_string(),
            num(lv.energy),
            num(fit.fitted_energy(lv.l)),
            num(*r),
        ];
        if let Some(a) = rigid_a {
            row.push(num(a * f64::from(lv.l) * f64::from(lv.l + 1)));
        }
        table.push(row);
    }
    let summary = format!(
        "A={} q={} rms={}",
        num(fit.a),
        num(fit.q.value()),
        num(fit.rms_residual)
    );

    let mut out = open_output(&cli.output)?;
    table.write(&mut out, cli.format.into())?;
    if cli.output.is_none() {
        writeln!(out, "{summary}")?;
    }
    out.flush()?;
    if cli.output.is_some() {
        println!("{summary}");
    }
    Ok(Outcome::Ok)
}

fn cmd_verify(cli: &Cli, max_n: usize, suite: Option<&str>) -> Result<Outcome> {
    let suites: Vec<Suite> = match suite {
        Some(name) => vec![name.parse()?],
        None => Suite::ALL.to_vec(),
    };
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, max_n))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(["suite", "status", "checks", "failed", "seconds"]);
    for r in &reports {
        table.push(vec![
            r.suite.to_string(),
            if r.passed() { "PASS" } else { "FAIL" }.into(),
            r.checks.to_string(),
            r.failed.to_string(),
            format!("{:.3}", r.elapsed.as_secs_f64()),
        ]);
        for f in &r.failures {
            eprintln!("{}: {f}", r.suite);
        }
    }
    let mut out = open_output(&cli.output)?;
    table.write(&mut out, cli.format.into())?;
    out.flush()?;
    Ok(if reports.iter().all(|r| r.passed()) {
        Outcome::Ok
    } else {
        Outcome::VerifyFailed
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Vev { word } => cmd_vev(cli, word),
        Command::Classify { occupancy } => cmd_classify(cli, occupancy),
        Command::Spectrum {
            model,
            nmax,
            lmax,
            compare_q,
            hbar_omega,
            inertia_a,
            even,
        } => cmd_spectrum(
            cli,
            *model,
            *nmax,
            *lmax,
            compare_q,
            *hbar_omega,
            *inertia_a,
            *even,
        ),
        Command::Fit {
            input,
            emit_comparison,
            q_min,
            q_max,
        } => cmd_fit(cli, input, *emit_comparison, *q_min, *q_max),
        Command::Verify { max_n, suite } => cmd_verify(cli, *max_n, suite.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerifyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
