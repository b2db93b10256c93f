use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use starter_forge::catalog::{canonical, canonical_pretty};
use starter_forge::oracle::{exhaustive_small_group_census, oracle_verify};
use starter_forge::starter::{beta_pair_conditions, symmetric_variants};
use starter_forge::sweep::{survey_all, two_quotient_orders};
use starter_forge::{
    decompose, dinitz_starter, search_beta_pairs, two_quotient_starter, BetaPair, BetaPairRecord,
    CosetSystem, Error, Field, FieldElement, QuotientCount, Starter, StarterRecord,
    VerificationReport,
};

const MAX_SWEEP: u64 = 20_000;
const MAX_SMALL: u64 = 11;

#[derive(Parser)]
#[command(name = "starter-forge", version, about = "Strong starters over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Also require every pair sum to be nonzero.
    #[arg(long, global = true)]
    require_nonzero_sums: bool,
    /// Worker threads for search and sweeps (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a starter for F_q and print its record.
    Construct {
        q: u64,
        /// beta1 and beta2 for the two-quotient construction.
        #[arg(num_args = 2, value_names = ["BETA1", "BETA2"], conflicts_with = "dinitz")]
        betas: Vec<u64>,
        /// Non-residue for the Dinitz construction (q = 3 mod 4).
        #[arg(long, value_name = "BETA")]
        dinitz: Option<u64>,
        /// Emit one record per admissible parameter choice.
        #[arg(long, conflicts_with_all = ["betas", "dinitz"])]
        all: bool,
    },
    /// List valid (beta1, beta2) pairs for F_q.
    Search {
        q: u64,
        #[arg(long)]
        all: bool,
    },
    /// Check starter records from a file or standard input.
    Verify { file: Option<PathBuf> },
    /// Print the symmetry table of two-quotient starters for F_29 or F_41.
    Tables { q: u64 },
    /// Survey field orders or enumerate starters of small cyclic groups.
    Census {
        #[arg(long, value_name = "QMAX", conflicts_with = "small", required_unless_present = "small")]
        sweep: Option<u64>,
        #[arg(long, value_name = "NMAX")]
        small: Option<u64>,
    },
}

/// Exit statuses: 1 bad input, 2 verification failure, 3 verifier disagreement.
enum Failure {
    Input(String),
    Verification,
    Disagreement(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.global.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool is built once");
    }
    let g = &cli.global;
    let result = match cli.command {
        Command::Construct {
            q,
            betas,
            dinitz,
            all,
        } => construct(g, q, &betas, dinitz, all),
        Command::Search { q, all } => search(g, q, all),
        Command::Verify { file } => verify(g, file),
        Command::Tables { q } => tables(q),
        Command::Census { sweep, small } => match (sweep, small) {
            (Some(qmax), _) => census_sweep(g, qmax),
            (_, Some(nmax)) => census_small(g, nmax),
            _ => unreachable!("clap requires one of the two"),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
        Err(Failure::Disagreement(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit<T: serde::Serialize>(g: &Global, value: &T) {
    if g.pretty {
        println!("{}", canonical_pretty(value));
    } else {
        println!("{}", canonical(value));
    }
}

fn element(field: &Field, v: u64) -> Result<FieldElement, Failure> {
    Ok(field.element(v)?)
}

fn passes(g: &Global, report: &VerificationReport) -> bool {
    report.is_strong && (!g.require_nonzero_sums || report.nonzero_sums)
}

fn two_quotient_system(q: u64) -> Result<CosetSystem, Failure> {
    match decompose(q) {
        Ok(_) => Ok(CosetSystem::new(&Field::with_order(q)?)?),
        Err(Error::DinitzCase { .. }) => Err(Failure::Input(format!(
            "q = {q} is 3 mod 4; the two-quotient construction needs 4 | q - 1 (try construct {q} --dinitz BETA)"
        ))),
        Err(Error::TrivialOddPart { .. }) => Err(Failure::Input(format!(
            "q = {q}: q - 1 is a power of two (t = 1), so no construction here applies"
        ))),
        Err(e) => Err(e.into()),
    }
}

fn construct(g: &Global, q: u64, betas: &[u64], dinitz: Option<u64>, all: bool) -> Outcome {
    let field = Field::with_order(q)?;
    let starters: Vec<Starter> = if q % 4 == 3 {
        if !betas.is_empty() {
            return Err(Failure::Input(format!(
                "q = {q} is 3 mod 4; give a single non-residue with --dinitz"
            )));
        }
        if q == 3 {
            return Err(Error::DinitzQThree.into());
        }
        let admissible = |b: &FieldElement| {
            *b != field.minus_one() && field.quadratic_character(*b) == -1
        };
        match dinitz {
            Some(b) => vec![dinitz_starter(&field, element(&field, b)?)?],
            None => {
                let mut betas = field.nonzero().filter(admissible);
                if all {
                    betas.map(|b| dinitz_starter(&field, b)).collect::<Result<_, _>>()?
                } else {
                    let b = betas.next().expect("q > 3 has a non-residue other than -1");
                    vec![dinitz_starter(&field, b)?]
                }
            }
        }
    } else {
        if dinitz.is_some() {
            return Err(Failure::Input(format!(
                "--dinitz needs q = 3 mod 4, but q = {q} is 1 mod 4"
            )));
        }
        let sys = two_quotient_system(q)?;
        let pairs: Vec<BetaPair> = match betas {
            [b1, b2] => vec![beta_pair_conditions(
                &sys,
                element(&field, *b1)?,
                element(&field, *b2)?,
            )?],
            _ if all => search_beta_pairs(&sys)?,
            _ => vec![search_beta_pairs(&sys)?[0]],
        };
        pairs
            .iter()
            .map(|bp| two_quotient_starter(&sys, bp))
            .collect::<Result<_, _>>()?
    };
    let mut ok = true;
    for s in &starters {
        let rec = StarterRecord::from_starter(s);
        ok &= passes(g, &s.verify());
        if g.pretty {
            println!("{}", rec.pretty());
        } else {
            println!("{}", rec.canonical_json());
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn search(g: &Global, q: u64, all: bool) -> Outcome {
    let sys = two_quotient_system(q)?;
    let found = search_beta_pairs(&sys)?;
    let shown = if all { &found[..] } else { &found[..1] };
    for bp in shown {
        emit(g, &BetaPairRecord::new(&sys, bp));
    }
    Ok(())
}

fn read_records(file: Option<PathBuf>) -> Result<Vec<StarterRecord>, Failure> {
    let mut text = String::new();
    match file {
        Some(path) => {
            text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    if let Ok(rec) = StarterRecord::parse(&text) {
        return Ok(vec![rec]);
    }
    let records = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            StarterRecord::parse(l).map_err(|e| Failure::Input(format!("line {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if records.is_empty() {
        return Err(Failure::Input("no records found".into()));
    }
    Ok(records)
}

fn verify(g: &Global, file: Option<PathBuf>) -> Outcome {
    let records = read_records(file)?;
    let mut out = io::stdout().lock();
    let mut all_pass = true;
    for (i, rec) in records.iter().enumerate() {
        let field = rec.field()?;
        let main = starter_forge::verify_starter(&field, &rec.pairs);
        let oracle = oracle_verify(&field, &rec.pairs);
        if main.verdict() != oracle.verdict() {
            return Err(Failure::Disagreement(format!(
                "record {}: verifier {:?} but oracle {:?}",
                i + 1,
                main.verdict(),
                oracle.verdict()
            )));
        }
        let pass = passes(g, &main);
        all_pass &= pass;
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let profile = &main.quotient_profile;
        let set: Vec<String> = profile.quotient_set.iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "record {}: q = {}, {} pairs: {}",
            i + 1,
            rec.q,
            rec.pairs.len(),
            if pass { "pass" } else { "FAIL" }
        )?;
        writeln!(out, "  starter: {}", yes_no(main.is_starter))?;
        writeln!(
            out,
            "  strong: {} ({} distinct sums)",
            yes_no(main.is_strong),
            main.sum_count
        )?;
        writeln!(out, "  nonzero sums: {}", yes_no(main.nonzero_sums))?;
        writeln!(
            out,
            "  quotient: {} {{{}}}",
            profile.min_quotient,
            set.join(", ")
        )?;
        writeln!(
            out,
            "  hash: {}",
            if rec.hash_matches() { "ok" } else { "mismatch" }
        )?;
        for f in &main.failures {
            writeln!(out, "  violation ({}): {f}", f.axiom())?;
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn tables(q: u64) -> Outcome {
    if q != 29 && q != 41 {
        return Err(Failure::Input(format!("tables are available for q = 29 and q = 41, not {q}")));
    }
    let sys = two_quotient_system(q)?;
    let found = search_beta_pairs(&sys)?;
    let mut rows: Vec<[BetaPair; 4]> = Vec::new();
    for bp in &found {
        let row = symmetric_variants(&sys, bp)?;
        if row.iter().all(|v| found.contains(v)) && row.iter().all(|v| v >= bp) {
            rows.push(row);
        }
    }
    let mut out = io::stdout().lock();
    let cell = |bp: &BetaPair| format!("S({},{})", bp.beta1, bp.beta2);
    let header = ["S(b1,b2)", "S(b2,b1)", "S(-b1,-b2)", "S(-b2,-b1)"];
    writeln!(out, "{}", header.map(|h| format!("{h:<12}")).concat().trim_end())?;
    let mut failed = Vec::new();
    for row in &rows {
        let line: String = row.iter().map(|bp| format!("{:<12}", cell(bp))).collect();
        writeln!(out, "{}", line.trim_end())?;
        for bp in row {
            let report = two_quotient_starter(&sys, bp)?.verify();
            if !(report.is_strong && report.quotient_profile.min_quotient == QuotientCount::Two) {
                failed.push(cell(bp));
            }
        }
    }
    let cells = rows.len() * 4;
    if failed.is_empty() {
        writeln!(out, "{cells} starters, all strong with two quotients")?;
        Ok(())
    } else {
        writeln!(out, "{cells} starters, failing: {}", failed.join(" "))?;
        Err(Failure::Verification)
    }
}

#[derive(serde::Serialize)]
struct SweepLine<'a> {
    #[serde(flatten)]
    row: &'a starter_forge::sweep::SurveyRow,
    pass: bool,
}

fn census_sweep(g: &Global, qmax: u64) -> Outcome {
    if qmax > MAX_SWEEP {
        return Err(Failure::Input(format!(
            "--sweep {qmax} exceeds {MAX_SWEEP}; sweep a smaller range"
        )));
    }
    let orders = two_quotient_orders(qmax);
    let mut failures = 0;
    for r in survey_all(&orders) {
        let row = r?;
        if !row.passes() {
            failures += 1;
        }
        emit(
            g,
            &SweepLine {
                pass: row.passes(),
                row: &row,
            },
        );
    }
    eprintln!("{} orders, {failures} failures", orders.len());
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn census_small(g: &Global, nmax: u64) -> Outcome {
    if !(3..=MAX_SMALL).contains(&nmax) {
        return Err(Failure::Input(format!(
            "--small takes 3 <= NMAX <= {MAX_SMALL}; larger groups have too many matchings"
        )));
    }
    let mut ok = true;
    for n in (3..=nmax).step_by(2) {
        let row = exhaustive_small_group_census(n)?;
        ok &= row.verified == row.starters;
        emit(g, &row);
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
