//! The `kappa` command line: relation tables, Betti numbers, bases, socle
//! integrals, pairing matrices and the fixture suite.

pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kappa_core::exactnum::format_rational;
use kappa_core::hodgeeval::{
    family_index, pairing_matrix, socle_integral, PairingFamily, SocleIntegrand,
};
use kappa_core::partitions::{partitions, Partition};
use kappa_core::powerseries::{alphas, betas, chain_polynomial, connected_coeff, phi_series};
use kappa_core::ringan::{
    basis, betti_polynomial, format_polynomial, generated_relations, minimal_generator_relation,
    relation_matrix, universality_report, BettiMethod, RelationOptions,
};
use kappa_core::sqcalc::{relation_set, richer_relations, CurveFactor, KappaPoly, RicherBudget};
use kappa_core::{Error, Rational};
use serde::Serialize;
use serde_json::json;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "KAPPA_THREADS";

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "kappa",
    version,
    about = "Exact kappa ring computations for moduli of curves of compact type"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Series relations of one kappa degree and their rank.
    Relations(RelationsArgs),
    /// Relations with universal-curve factors.
    Richer(RicherArgs),
    /// Betti polynomial of the genus-0 kappa ring.
    Betti0(Betti0Args),
    /// Canonical genus-0 basis with its pairing certificate.
    Basis(BasisArgs),
    /// A single lambda_g socle integral.
    Socle(SocleArgs),
    /// Pairing matrix of a strata family.
    Pairing(PairingArgs),
    /// Coefficients of the auxiliary series.
    Series(SeriesArgs),
    /// Express kappa_l through lower kappa classes.
    Express(ExpressArgs),
    /// Compare a (g, n) ring with its genus-0 counterpart.
    Universality(UniversalityArgs),
    /// Replay the fixture suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct RelationsArgs {
    /// s = 2g - 2 + n.
    #[arg(long, allow_negative_numbers = true)]
    kappa0: i64,
    #[arg(long)]
    degree: u32,
    /// Largest number of weighted marks (defaults to the degree).
    #[arg(long)]
    dmax: Option<usize>,
}

#[derive(Args, Debug)]
struct RicherArgs {
    #[arg(long, allow_negative_numbers = true)]
    kappa0: i64,
    #[arg(long)]
    degree: u32,
    /// Allowed powers of the section class in a factor.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    a_values: Vec<u32>,
    /// Largest power of omega in a factor (defaults to the degree).
    #[arg(long)]
    b_max: Option<u32>,
    #[arg(long, default_value_t = 2)]
    max_factors: usize,
    /// Largest number of weighted marks (defaults to the degree).
    #[arg(long)]
    dmax: Option<usize>,
    /// The space has no markings, so omega-only factors are pure kappa classes.
    #[arg(long)]
    unpointed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pairing,
    Relations,
    Formula,
    All,
}

#[derive(Args, Debug)]
struct Betti0Args {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::Pairing)]
    method: MethodArg,
}

#[derive(Args, Debug)]
struct BasisArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    degree: u32,
}

#[derive(Args, Debug)]
struct SocleArgs {
    #[arg(long)]
    genus: u32,
    /// Psi exponents, one per marking.
    #[arg(long, value_delimiter = ',')]
    psi: Vec<u32>,
    /// Kappa indices.
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Mu,
    Nu,
    Omega,
    OmegaPrime,
    Genus0V,
    W,
    WTilde,
}

impl From<FamilyArg> for PairingFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Mu => PairingFamily::Mu,
            FamilyArg::Nu => PairingFamily::Nu,
            FamilyArg::Omega => PairingFamily::Omega,
            FamilyArg::OmegaPrime => PairingFamily::OmegaPrime,
            FamilyArg::Genus0V => PairingFamily::Genus0V,
            FamilyArg::W => PairingFamily::W,
            FamilyArg::WTilde => PairingFamily::WTilde,
        }
    }
}

#[derive(Args, Debug)]
struct PairingArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// Markings (genus0-v only).
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Kappa degree (genus0-v, w and w-tilde).
    #[arg(long, default_value_t = 0)]
    degree: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Phi,
    Alpha,
    Beta,
    Chain,
    Connected,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    kind: SeriesKind,
    #[arg(long)]
    order: usize,
}

#[derive(Args, Debug)]
struct ExpressArgs {
    #[arg(long, allow_negative_numbers = true)]
    kappa0: i64,
    /// Index of the kappa class to eliminate.
    #[arg(long)]
    l: u32,
    #[arg(long, default_value_t = 12)]
    dcap: usize,
}

#[derive(Args, Debug)]
struct UniversalityArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    dmin: u32,
    /// Defaults to 2g - 2 + n.
    #[arg(long)]
    dmax: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// The published fixtures.
    Paper,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::Paper)]
    suite: Suite,
    /// Extend the Betti table to n = 12.
    #[arg(long)]
    slow: bool,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV}={value} is not a positive integer"))?;
    // a pool configured earlier in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn emit(format: Format, json: serde_json::Value, text: String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json).expect("values serialize")
        ),
        Format::Text => print!("{text}"),
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("values serialize")
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn execute(cli: &Cli) -> Result<u8, Error> {
    let f = cli.format;
    match &cli.command {
        Command::Relations(a) => relations(f, a),
        Command::Richer(a) => richer(f, a),
        Command::Betti0(a) => betti0(f, a),
        Command::Basis(a) => {
            let b = basis(a.n, a.degree)?;
            let mut text = String::new();
            for p in &b.basis {
                writeln!(text, "{p}").unwrap();
            }
            writeln!(text, "\ncertificate:\n{}", b.certificate).unwrap();
            writeln!(text, "nonsingular: {}", b.nonsingular).unwrap();
            emit(f, to_json(&b), text);
            Ok(if b.nonsingular { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Socle(a) => {
            let itg = SocleIntegrand::new(a.genus, a.psi.clone(), Partition::new(a.kappa.clone()));
            let value = format_rational(&socle_integral(&itg));
            emit(
                f,
                json!({ "integrand": itg, "value": value }),
                format!("{value}\n"),
            );
            Ok(EXIT_OK)
        }
        Command::Pairing(a) => pairing(f, a),
        Command::Series(a) => series(f, a),
        Command::Express(a) => {
            let found = minimal_generator_relation(a.kappa0, a.l, a.dcap)?;
            let text = format!(
                "r={} d={}: {} = 0\n",
                found.r,
                found.d,
                found.relation.to_text()
            );
            emit(f, to_json(&found), text);
            Ok(EXIT_OK)
        }
        Command::Universality(a) => universality(f, a),
        Command::Verify(a) => {
            let Suite::Paper = a.suite;
            let outcomes = verify::run_suite(a.slow, |o| {
                if f == Format::Text {
                    println!("{}", o.line());
                }
            });
            let passed = outcomes.iter().all(|o| o.passed);
            match f {
                Format::Json => emit(
                    f,
                    json!({ "passed": passed, "criteria": outcomes }),
                    String::new(),
                ),
                Format::Text => {
                    let n = outcomes.iter().filter(|o| o.passed).count();
                    println!("{n}/{} criteria passed", outcomes.len());
                }
            }
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn relations(f: Format, a: &RelationsArgs) -> Result<u8, Error> {
    if a.degree == 0 {
        return Err(Error::InvalidInput("--degree must be positive".into()));
    }
    let d_max = a.dmax.unwrap_or(a.degree as usize);
    let set = relation_set(a.kappa0, a.degree, d_max);
    let polys: Vec<KappaPoly> = set.polys().cloned().collect();
    let rank = relation_matrix(&polys, a.degree).rank();
    let monomials = partitions(a.degree, None).len();
    let mut text = String::new();
    for rel in &set.relations {
        writeln!(text, "r={} d={}: {}", rel.r, rel.d, rel.terms.to_text()).unwrap();
    }
    writeln!(text, "rank {rank} of {monomials} monomials").unwrap();
    let json = json!({
        "s": set.s,
        "degree": set.degree,
        "d_max": d_max,
        "relations": set.relations,
        "rank": rank,
        "monomials": monomials,
    });
    emit(f, json, text);
    Ok(EXIT_OK)
}

fn richer(f: Format, a: &RicherArgs) -> Result<u8, Error> {
    if a.degree == 0 {
        return Err(Error::InvalidInput("--degree must be positive".into()));
    }
    let budget = RicherBudget {
        a_values: a.a_values.clone(),
        b_max: a.b_max,
        max_factors: a.max_factors,
        d_max: a.dmax,
    };
    let found = richer_relations(a.kappa0, !a.unpointed, a.degree, &budget);
    let series_d_max = a.dmax.unwrap_or(a.degree as usize);
    let mut polys = generated_relations(
        a.kappa0,
        a.degree,
        &RelationOptions::series_only(series_d_max),
    );
    polys.extend(found.iter().map(|(_, _, _, p)| p.clone()));
    let rank = relation_matrix(&polys, a.degree).rank();
    let mut text = String::new();
    let mut rows = Vec::new();
    for (d, r, factors, rel) in &found {
        let fs: Vec<String> = factors.iter().map(factor_text).collect();
        writeln!(text, "d={d} r={r} [{}]: {}", fs.join(" "), rel.to_text()).unwrap();
        rows.push(json!({ "d": d, "r": r, "factors": factors, "relation": rel }));
    }
    writeln!(
        text,
        "rank {rank} of {} monomials (with series relations up to d = {series_d_max})",
        partitions(a.degree, None).len()
    )
    .unwrap();
    emit(
        f,
        json!({ "s": a.kappa0, "degree": a.degree, "budget": budget, "relations": rows, "rank": rank }),
        text,
    );
    Ok(EXIT_OK)
}

fn factor_text(c: &CurveFactor) -> String {
    format!("s^{}w^{}", c.a, c.b)
}

fn betti0(f: Format, a: &Betti0Args) -> Result<u8, Error> {
    let methods: Vec<BettiMethod> = match a.method {
        MethodArg::Pairing => vec![BettiMethod::Pairing],
        MethodArg::Relations => vec![BettiMethod::Relations],
        MethodArg::Formula => vec![BettiMethod::Formula],
        MethodArg::All => BettiMethod::ALL.to_vec(),
    };
    let mut results = Vec::new();
    for m in &methods {
        results.push((*m, betti_polynomial(a.n, *m)?));
    }
    let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
    let mut text = String::new();
    for (m, coeffs) in &results {
        if methods.len() > 1 {
            write!(text, "{:<10}", format!("{m:?}").to_lowercase()).unwrap();
        }
        writeln!(text, "{}", format_polynomial(coeffs)).unwrap();
    }
    if !agree {
        writeln!(text, "methods disagree").unwrap();
    }
    let json = json!({
        "n": a.n,
        "results": results
            .iter()
            .map(|(m, c)| json!({ "method": m, "coefficients": c, "polynomial": format_polynomial(c) }))
            .collect::<Vec<_>>(),
        "agree": agree,
    });
    emit(f, json, text);
    Ok(if agree { EXIT_OK } else { EXIT_FAILED })
}

fn pairing(f: Format, a: &PairingArgs) -> Result<u8, Error> {
    let family = PairingFamily::from(a.family);
    let m = pairing_matrix(family, a.genus, a.n, a.degree)?;
    let index = family_index(family, a.genus, a.n, a.degree)?;
    let triangular = m.is_upper_triangular_by_length(&index);
    let det = m.determinant();
    let text = format!(
        "{m}triangular: {triangular}\ndeterminant: {}\n",
        format_rational(&det)
    );
    let json = json!({
        "family": family,
        "matrix": m,
        "triangular": triangular,
        "determinant": format_rational(&det),
    });
    emit(f, json, text);
    Ok(EXIT_OK)
}

fn series(f: Format, a: &SeriesArgs) -> Result<u8, Error> {
    let n = a.order;
    let (json, text) = match a.kind {
        SeriesKind::Phi | SeriesKind::Alpha | SeriesKind::Beta => {
            let coeffs = match a.kind {
                SeriesKind::Phi => phi_series(n).coeffs().to_vec(),
                SeriesKind::Alpha => alphas(n),
                _ => betas(n),
            };
            let s = strings(&coeffs);
            let text = s
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{i} {c}\n"))
                .collect();
            (
                json!({ "kind": format!("{:?}", a.kind).to_lowercase(), "coefficients": s }),
                text,
            )
        }
        SeriesKind::Chain => {
            let polys: Vec<Vec<String>> = (0..=n)
                .map(|r| chain_polynomial(r).iter().map(|c| c.to_string()).collect())
                .collect();
            let text = polys
                .iter()
                .enumerate()
                .map(|(r, p)| format!("p_{r}: {}\n", p.join(" ")))
                .collect();
            (
                json!({ "kind": "chain", "ascending_coefficients": polys }),
                text,
            )
        }
        SeriesKind::Connected => {
            let table: Vec<Vec<String>> = (0..=n)
                .map(|r| {
                    (0..=n)
                        .map(|d| format_rational(&connected_coeff(r, d).0))
                        .collect()
                })
                .collect();
            let text = table
                .iter()
                .enumerate()
                .map(|(r, row)| format!("r={r}: {}\n", row.join(" ")))
                .collect();
            (json!({ "kind": "connected", "rows_r_cols_d": table }), text)
        }
    };
    emit(f, json, text);
    Ok(EXIT_OK)
}

fn universality(f: Format, a: &UniversalityArgs) -> Result<u8, Error> {
    let s = 2 * a.genus as i64 + a.n as i64 - 2;
    if s < 1 {
        return Err(Error::InvalidInput(format!(
            "2g - 2 + n = {s} must be positive"
        )));
    }
    let dmax = a.dmax.unwrap_or(s as u32);
    let report = universality_report(a.genus, a.n, a.dmin..=dmax)?;
    let mut text = format!("g={} n={} s={}\n", report.g, report.n, report.s);
    writeln!(
        text,
        "{:>3} {:>9} {:>6} {:>6}  verdict",
        "d", "predicted", "upper", "lower"
    )
    .unwrap();
    for row in &report.rows {
        let lower = row.lower_bound.map_or("-".to_string(), |l| l.to_string());
        writeln!(
            text,
            "{:>3} {:>9} {:>6} {:>6}  {}",
            row.d, row.predicted, row.upper_bound, lower, row.verdict
        )
        .unwrap();
    }
    emit(f, to_json(&report), text);
    Ok(EXIT_OK)
}
