use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mell_core::cohomology::{full_report, ReportOptions};
use mell_core::couplings::parse_primitives;
use mell_core::double_complex::SplitPreset;
use mell_core::hamiltonian::build_h;
use mell_core::oracle::{predict, region_table};
use mell_core::state_space::enumerate_basis;
use mell_core::supercharge::build_q;
use mell_core::sweep::{run_sweep, specs, BoundarySelection, SweepConfig, SCHEMA_VERSION};
use mell_core::{Boundary, ChainSpec, Error, QScheme};

#[derive(Parser)]
#[command(
    name = "mell",
    version,
    about = "Exact ground-state cohomology of constrained lattice-fermion chains"
)]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "MELL_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the allowed configurations grade by grade.
    Basis {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cohomology dimensions, Witten index and oracle comparison of one chain.
    Cohomology {
        #[command(flatten)]
        spec: SpecArgs,
        /// Primitive couplings λ_{1,1},…,λ_{ℓ,1} as a comma list of rationals.
        #[arg(long)]
        couplings: Option<String>,
        /// Certify dim ker H_f exactly on every grade.
        #[arg(long)]
        check_hamiltonian: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare computation with the closed-form predictions over a range of chains.
    Verify(VerifyArgs),
    /// Closed-form prediction for one chain, or the (c1,cN) grid with --grid.
    Predict {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        sites: usize,
        #[arg(long)]
        periodic: bool,
        #[arg(long)]
        free: bool,
        #[arg(long, value_name = "C1,CN")]
        special: Option<String>,
        #[arg(long)]
        grid: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Export a Q_f or H_f block in coordinate form.
    Matrix {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        op: Operator,
        #[arg(long)]
        grade: usize,
        #[arg(long)]
        couplings: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Operator {
    Q,
    H,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("boundary").required(true).args(["periodic", "free", "special"])))]
struct SpecArgs {
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    sites: usize,
    #[arg(long)]
    periodic: bool,
    #[arg(long)]
    free: bool,
    #[arg(long, value_name = "C1,CN")]
    special: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `a..b` (inclusive) or a single value.
    #[arg(long, default_value = "1..3")]
    ell: String,
    #[arg(long, default_value = "1..14")]
    sites: String,
    #[arg(long)]
    periodic: bool,
    #[arg(long)]
    free: bool,
    #[arg(long, value_name = "C1,CN")]
    special: Option<String>,
    /// Periodic and every (c1,cN); the default when no boundary flag is given.
    #[arg(long)]
    all_boundaries: bool,
    /// Cut-and-paste dimension shift for N > 2ℓ+2.
    #[arg(long)]
    ladder: bool,
    /// Tic-tac-toe check with a named split.
    #[arg(long, value_name = "prefix|three-rule")]
    ttt: Option<String>,
    /// Random nonzero coupling schemes per chain.
    #[arg(long, value_name = "K")]
    random_couplings: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certify dim ker H_f = betti exactly.
    #[arg(long)]
    check_hamiltonian: bool,
    /// Numeric zero-mode cross-check of H blocks.
    #[arg(long)]
    numeric: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structural(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("expected C1,CN, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || Failure::Usage(format!("expected a..b or a single value, got {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let (a, b): (usize, usize) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn boundary(
    ell: usize,
    periodic: bool,
    free: bool,
    special: Option<&str>,
) -> Result<Boundary, Failure> {
    match (periodic, free, special) {
        (true, false, None) => Ok(Boundary::Periodic),
        (false, true, None) => Ok(Boundary::Special { c1: ell, cn: ell }),
        (false, false, Some(s)) => {
            let (c1, cn) = parse_pair(s)?;
            Ok(Boundary::Special { c1, cn })
        }
        _ => Err(Failure::Usage(
            "give exactly one of --periodic, --free, --special".into(),
        )),
    }
}

impl SpecArgs {
    fn spec(&self) -> Result<ChainSpec, Failure> {
        let b = boundary(self.ell, self.periodic, self.free, self.special.as_deref())?;
        Ok(ChainSpec::new(self.sites, self.ell, b)?)
    }
}

fn scheme(ell: usize, couplings: Option<&str>) -> Result<QScheme, Failure> {
    match couplings {
        None => Ok(QScheme::all_ones(ell)),
        Some(s) => {
            let prim = parse_primitives(s)?;
            if prim.len() != ell {
                return Err(Failure::Usage(format!(
                    "--couplings needs {ell} values, got {}",
                    prim.len()
                )));
            }
            Ok(QScheme::build(prim)?)
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_basis(spec: &SpecArgs, format: Format) -> Result<(), Failure> {
    let spec = spec.spec()?;
    let basis = enumerate_basis(&spec)?;
    match format {
        Format::Json => {
            print_json(&json!({ "schema_version": SCHEMA_VERSION, "basis": basis.to_export() }))
        }
        Format::Csv => {
            println!("f,word,sites");
            for (f, grade) in basis.iter() {
                for c in grade {
                    println!("{f},{},{}", c.0, c.to_sites(spec.n_sites));
                }
            }
        }
        Format::Text => {
            println!("# {spec}");
            println!("dims {:?}", basis.dims());
            for (f, grade) in basis.iter() {
                let words: Vec<String> = grade.iter().map(|c| c.to_sites(spec.n_sites)).collect();
                println!("f={f} dim={} {}", grade.len(), words.join(" "));
            }
        }
    }
    Ok(())
}

fn cmd_cohomology(
    spec: &SpecArgs,
    couplings: Option<&str>,
    check_hamiltonian: bool,
    seed: u64,
    format: Format,
) -> Result<(), Failure> {
    let spec = spec.spec()?;
    let scheme = scheme(spec.max_cluster, couplings)?;
    let report = full_report(
        &spec,
        &scheme,
        ReportOptions {
            check_hamiltonian,
            seed,
        },
    )?;
    let couplings: Vec<String> = scheme.primitive().iter().map(|v| v.to_string()).collect();
    match format {
        Format::Json => print_json(&json!({
          "schema_version": SCHEMA_VERSION,
          "seed": seed,
          "couplings": couplings,
          "report": report,
        })),
        Format::Csv => print!(
            "{}\n{}",
            mell_core::cohomology::CohomologyReport::csv_header(),
            report.to_csv_rows()
        ),
        Format::Text => {
            println!("# {spec} couplings=[{}] seed={seed}", couplings.join(","));
            println!(
                "{:<4} {:<8} {:<6} {:<9} {:<8}",
                "f", "dim", "betti", "predicted", "ker H"
            );
            for (g, o) in report.grades.iter().zip(&report.oracle) {
                let kh = g.kernel_h.map_or("-".to_string(), |k| k.to_string());
                println!(
                    "{:<4} {:<8} {:<6} {:<9} {:<8}",
                    g.f, g.dim, g.betti, o.predicted, kh
                );
            }
            println!("witten {} euler {}", report.witten, report.euler);
            println!(
                "oracle {}",
                if report.oracle_ok { "OK" } else { "MISMATCH" }
            );
            if let Some(ok) = report.hamiltonian_ok {
                println!("ker H = betti {}", if ok { "OK" } else { "MISMATCH" });
            }
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool, Failure> {
    let ells = parse_range(&a.ell)?;
    let sites = parse_range(&a.sites)?;
    if *ells.start() == 0 || *sites.start() == 0 {
        return Err(Failure::Usage("ℓ and N start at 1".into()));
    }
    let mut selection = Vec::new();
    if a.periodic {
        selection.push(BoundarySelection::Periodic);
    }
    if a.free {
        selection.push(BoundarySelection::Free);
    }
    if let Some(s) = &a.special {
        let (c1, cn) = parse_pair(s)?;
        if c1 > *ells.end() || cn > *ells.end() {
            return Err(Failure::Usage(format!(
                "--special {c1},{cn} exceeds every ℓ in range"
            )));
        }
        selection.push(BoundarySelection::Special(c1, cn));
    }
    if a.all_boundaries || selection.is_empty() {
        selection.extend([BoundarySelection::Periodic, BoundarySelection::AllSpecial]);
    }
    let ttt = match &a.ttt {
        None => None,
        Some(s) => Some(
            SplitPreset::parse(s).ok_or_else(|| Failure::Usage(format!("unknown split {s:?}")))?,
        ),
    };
    let cfg = SweepConfig {
        specs: specs(ells, sites, &selection),
        check_hamiltonian: a.check_hamiltonian,
        numeric: a.numeric,
        ladder: a.ladder,
        ttt,
        random_couplings: a.random_couplings,
        seed: a.seed,
    };
    let report = run_sweep(&cfg);
    match a.format {
        Format::Json => print_json(&serde_json::to_value(&report).expect("serializable")),
        Format::Csv => print!("{}", report.to_csv()),
        Format::Text => {
            print!("{}", report.to_text());
            for item in &report.items {
                if let Some(l) = &item.ladder {
                    // one mark per grade f >= ℓ
                    let marks: String = l
                        .rows
                        .iter()
                        .filter(|r| r.f >= l.big.max_cluster)
                        .map(|r| if r.ok { '+' } else { 'x' })
                        .collect();
                    println!(
                        "ladder {} vs N'={}: {marks} {}",
                        l.big,
                        l.small.n_sites,
                        if l.shift_ok { "OK" } else { "FAIL" }
                    );
                }
                if let Some(t) = &item.ttt {
                    println!(
                        "ttt {} {} one_row={} row={} totals={:?} betti={:?} {}",
                        t.spec,
                        t.split,
                        t.one_row,
                        t.row.map_or("-".into(), |r| r.to_string()),
                        t.totals,
                        t.betti,
                        if t.ok { "OK" } else { "FAIL" }
                    );
                }
                if let Some(i) = &item.independence {
                    println!(
                        "independence {} trials={} seed={} {}",
                        i.spec,
                        i.trials.len(),
                        i.seed,
                        if i.ok { "OK" } else { "FAIL" }
                    );
                }
            }
        }
    }
    Ok(report.ok)
}

#[allow(clippy::too_many_arguments)]
fn cmd_predict(
    ell: usize,
    sites: usize,
    periodic: bool,
    free: bool,
    special: Option<&str>,
    grid: bool,
    format: Format,
) -> Result<(), Failure> {
    if grid {
        ChainSpec::free(sites, ell)?;
        let table = region_table(ell, sites);
        match format {
            Format::Json => print_json(&json!({ "schema_version": SCHEMA_VERSION, "grid": table })),
            Format::Csv => print!("{}", table.to_csv()),
            Format::Text => print!("{}", table.to_diagram()),
        }
        return Ok(());
    }
    let spec = ChainSpec::new(sites, ell, boundary(ell, periodic, free, special)?)?;
    let p = predict(&spec);
    match format {
        Format::Json => print_json(&json!({
          "schema_version": SCHEMA_VERSION,
          "spec": spec,
          "prediction": p.iter().map(|(f, m)| json!({ "f": f, "dim": m })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            println!("f,dim");
            for (f, m) in &p {
                println!("{f},{m}");
            }
        }
        Format::Text => {
            println!("# {spec}");
            if p.is_empty() {
                println!("trivial cohomology");
            }
            for (f, m) in &p {
                println!("f={f} dim={m}");
            }
        }
    }
    Ok(())
}

fn cmd_matrix(
    spec: &SpecArgs,
    op: Operator,
    grade: usize,
    couplings: Option<&str>,
    format: Format,
) -> Result<(), Failure> {
    let spec = spec.spec()?;
    let scheme = scheme(spec.max_cluster, couplings)?;
    let basis = enumerate_basis(&spec)?;
    let m = match op {
        Operator::Q => build_q(&basis, &scheme, grade)?,
        Operator::H => build_h(&basis, &scheme, grade)?,
    };
    match format {
        Format::Json => print_json(
            &json!({ "schema_version": SCHEMA_VERSION, "spec": spec, "grade": grade, "matrix": m.to_export() }),
        ),
        Format::Csv => {
            println!("row,col,numerator,denominator");
            for (r, c, num, den) in m.to_export().entries {
                println!("{r},{c},{num},{den}");
            }
        }
        Format::Text => print!("{}", m.to_coordinate_text()),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Basis { spec, format } => cmd_basis(spec, *format).map(|_| true),
        Command::Cohomology {
            spec,
            couplings,
            check_hamiltonian,
            seed,
            format,
        } => cmd_cohomology(
            spec,
            couplings.as_deref(),
            *check_hamiltonian,
            *seed,
            *format,
        )
        .map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Predict {
            ell,
            sites,
            periodic,
            free,
            special,
            grid,
            format,
        } => cmd_predict(
            *ell,
            *sites,
            *periodic,
            *free,
            special.as_deref(),
            *grid,
            *format,
        )
        .map(|_| true),
        Command::Matrix {
            spec,
            op,
            grade,
            couplings,
            format,
        } => cmd_matrix(spec, *op, *grade, couplings.as_deref(), *format).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Mismatch(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
