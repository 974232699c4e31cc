//! `hurwitz`: decide, construct and search for branched-cover monodromy.
//!
//! Exit codes: 0 realizable (or check passed), 1 not realizable (or check
//! failed), 2 input error or undetermined.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use hurwitz::branch::classify_form;
use hurwitz::decide::decide;
use hurwitz::oracle::{
    census, census_summary, probe_conjecture, search_tuples, CensusOptions, FormFilter,
    SearchBudget, SearchOutcome,
};
use hurwitz::realize::{belyi_branch_data, belyi_lift, realize, realize_form, Outcome};
use hurwitz::{BranchData, Permutation, RealizationTuple, Verdict, VerifyReport};

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Realizability of branch data on the sphere")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide realizability by the closed-form criteria.
    Decide(Input),
    /// Construct a verified permutation tuple.
    Realize(Input),
    /// Check a tuple against branch data.
    Verify(VerifyArgs),
    /// Exhaustive search for a tuple.
    Search {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Genus of the covering surface.
        #[arg(long, default_value_t = 0)]
        genus: i64,
    },
    /// Search every collection of a family up to a degree.
    Census {
        /// Largest degree.
        #[arg(short = 'd', long = "degree")]
        d_max: usize,
        #[arg(long, default_value = "main-form")]
        filter: FormFilter,
        /// Largest cover genus for `all-compatible`.
        #[arg(long, default_value_t = 0)]
        max_genus: usize,
        /// One JSON object per line instead of the summary.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Lift a main-form realization to three branch points.
    Belyi {
        #[command(flatten)]
        input: Input,
        /// Number of extra branch points; defaults to the form's count.
        #[arg(short = 'r')]
        r: Option<usize>,
    },
    /// Search main-form-shaped collections on a surface of positive genus.
    Probe {
        /// Largest degree.
        #[arg(short = 'd', long = "degree")]
        d_max: usize,
        #[arg(long, default_value_t = 1)]
        genus: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct Input {
    /// Partitions such as "(2,2) (2,2) (3,1)". Without it, branch data JSON
    /// is read from --file or stdin.
    spec: Option<String>,
    #[arg(short = 'd', long = "degree")]
    degree: Option<usize>,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    /// Tuple entries in cycle notation, e.g. --perm "(1 2)" --perm "(1 2)".
    /// Without them the input must be the JSON printed by `realize --json`.
    #[arg(long = "perm")]
    perms: Vec<String>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 1)]
    shards: usize,
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget, String> {
        let time_limit = match self.time_limit {
            Some(s) if !(s.is_finite() && s > 0.0) => {
                return Err(format!("bad time limit {s}"));
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SearchBudget {
            max_nodes: self.max_nodes,
            time_limit,
            shards: self.shards.max(1),
        })
    }
}

/// Output of `realize --json`, and input of `verify`.
#[derive(Serialize, Deserialize)]
struct Realized {
    branch_data: BranchData,
    tuple: RealizationTuple,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sources: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lift_factor: Option<usize>,
}

#[derive(Serialize)]
struct NotRealized<'a> {
    branch_data: &'a BranchData,
    verdict: &'a Verdict,
}

#[derive(Serialize)]
struct Checked<'a> {
    branch_data: &'a BranchData,
    report: &'a VerifyReport,
    ok: bool,
}

#[derive(Serialize)]
struct Searched<'a> {
    branch_data: &'a BranchData,
    genus: i64,
    outcome: &'static str,
    witness: Option<&'a RealizationTuple>,
    nodes: u64,
    memo_hits: u64,
}

#[derive(Serialize)]
struct Lifted<'a> {
    branch_data: &'a BranchData,
    r: usize,
    lifted_branch_data: &'a BranchData,
    tuple: &'a RealizationTuple,
}

enum Fail {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Input(e.to_string())
    }
}

type Run = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let code = match run(cli.cmd, &mut out) {
        Ok(c) => c,
        Err(Fail::Input(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            2
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}

fn run(cmd: Cmd, out: &mut impl Write) -> Run {
    match cmd {
        Cmd::Decide(input) => run_decide(&input, out),
        Cmd::Realize(input) => run_realize(&input, out),
        Cmd::Verify(args) => run_verify(&args, out),
        Cmd::Search { input, budget, genus } => run_search(&input, &budget, genus, out),
        Cmd::Census { d_max, filter, max_genus, json, budget } => {
            run_census(d_max, filter, max_genus, json, &budget, out)
        }
        Cmd::Belyi { input, r } => run_belyi(&input, r, out),
        Cmd::Probe { d_max, genus, json, budget } => run_probe(d_max, genus, json, &budget, out),
    }
}

fn read_text(file: &Option<PathBuf>) -> Result<String, Fail> {
    match file {
        Some(p) => fs::read_to_string(p).map_err(|e| Fail::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn check_degree(bd: &BranchData, degree: Option<usize>) -> Result<(), Fail> {
    match degree {
        Some(d) if d != bd.degree() => Err(Fail::Input(format!(
            "-d {d} does not match the input degree {}",
            bd.degree()
        ))),
        _ => Ok(()),
    }
}

fn branch_data(input: &Input) -> Result<BranchData, Fail> {
    let bd = match &input.spec {
        Some(spec) => {
            let d = input
                .degree
                .ok_or_else(|| Fail::Input("partitions given without -d".into()))?;
            BranchData::parse(d, spec)?
        }
        None => {
            let bd: BranchData = serde_json::from_str(&read_text(&input.file)?)?;
            check_degree(&bd, input.degree)?;
            bd
        }
    };
    if bd.len() < 2 {
        return Err(Fail::Input(format!("{bd} needs at least two partitions")));
    }
    Ok(bd)
}

fn json_line(out: &mut impl Write, v: &impl Serialize) -> Result<(), Fail> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn verdict_line(v: &Verdict) -> String {
    let w = &v.witness;
    let mut s = format!(
        "{} ({}) d={} v={}",
        if v.realizable { "realizable" } else { "not realizable" },
        v.reason,
        w.degree,
        w.total_branching
    );
    if let Some(g) = w.gcd {
        s += &format!(" gcd={g}");
    }
    if let Some(m) = w.max_m {
        s += &format!(" max_m={m}");
    }
    if v.dropped_trivial > 0 {
        s += &format!(" dropped_trivial={}", v.dropped_trivial);
    }
    s
}

fn print_tuple(out: &mut impl Write, t: &RealizationTuple) -> Result<(), Fail> {
    for (p, r) in t.perms().iter().zip(t.roles()) {
        writeln!(out, "  {r}: {p}")?;
    }
    Ok(())
}

fn run_decide(input: &Input, out: &mut impl Write) -> Run {
    let bd = branch_data(input)?;
    let v = decide(&bd)?;
    if input.json {
        json_line(out, &v)?;
    } else {
        writeln!(out, "{bd}: {}", verdict_line(&v))?;
    }
    Ok(if v.realizable { 0 } else { 1 })
}

fn run_realize(input: &Input, out: &mut impl Write) -> Run {
    let bd = branch_data(input)?;
    match realize(&bd)? {
        Outcome::Realized(r) => {
            if input.json {
                json_line(
                    out,
                    &Realized {
                        branch_data: bd,
                        tuple: r.tuple,
                        verdict: Some(r.verdict),
                        sources: Some(r.sources),
                        lift_factor: Some(r.lift_factor),
                    },
                )?;
            } else {
                writeln!(out, "{bd}: {}", verdict_line(&r.verdict))?;
                for ((p, role), src) in r.tuple.perms().iter().zip(r.tuple.roles()).zip(&r.sources) {
                    writeln!(out, "  {role} [{}]: {p}", bd.partitions()[*src])?;
                }
            }
            Ok(0)
        }
        Outcome::NotRealizable(v) => {
            if input.json {
                json_line(out, &NotRealized { branch_data: &bd, verdict: &v })?;
            } else {
                writeln!(out, "{bd}: {}", verdict_line(&v))?;
            }
            Ok(1)
        }
    }
}

fn run_verify(args: &VerifyArgs, out: &mut impl Write) -> Run {
    let input = &args.input;
    let (bd, tuple) = if args.perms.is_empty() {
        if input.spec.is_some() {
            return Err(Fail::Input("partitions given without --perm".into()));
        }
        let r: Realized = serde_json::from_str(&read_text(&input.file)?)?;
        check_degree(&r.branch_data, input.degree)?;
        (r.branch_data, r.tuple)
    } else {
        let bd = branch_data(input)?;
        let mut n = bd.degree();
        for s in &args.perms {
            n = n.max(max_point(s)?);
        }
        let perms = args
            .perms
            .iter()
            .map(|s| Permutation::parse(s, n))
            .collect::<Result<Vec<_>, _>>()?;
        (bd, RealizationTuple::unlabeled(perms)?)
    };
    let report = hurwitz::verify_realization(&bd, &tuple);
    if input.json {
        json_line(out, &Checked { branch_data: &bd, report: &report, ok: report.ok() })?;
    } else {
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(out, "{bd}")?;
        writeln!(out, "  degree:      {}", mark(report.degree_match))?;
        writeln!(out, "  cycle types: {}", mark(report.types_match))?;
        writeln!(out, "  product:     {}", mark(report.product_identity))?;
        writeln!(out, "  transitive:  {}", mark(report.transitive))?;
        match report.genus() {
            Some(g) => writeln!(out, "  genus:       {g}")?,
            None => writeln!(out, "  genus:       {}/2", report.genus_twice)?,
        }
    }
    Ok(if report.ok() { 0 } else { 1 })
}

/// Largest point mentioned in cycle notation, so that a tuple given with
/// `--perm` may live on more points than the branch data declares.
fn max_point(s: &str) -> Result<usize, Fail> {
    s.split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(Fail::from))
        .try_fold(1, |m, x| x.map(|x| m.max(x)))
}

fn run_search(input: &Input, budget: &BudgetArgs, genus: i64, out: &mut impl Write) -> Run {
    let bd = branch_data(input)?;
    let res = search_tuples(&bd, genus, &budget.budget()?)?;
    let (outcome, code) = match res.outcome {
        SearchOutcome::Found(_) => ("found", 0),
        SearchOutcome::NoneProven => ("none-proven", 1),
        SearchOutcome::Unknown => ("unknown", 2),
    };
    if input.json {
        json_line(
            out,
            &Searched {
                branch_data: &bd,
                genus,
                outcome,
                witness: res.witness(),
                nodes: res.stats.nodes,
                memo_hits: res.stats.memo_hits,
            },
        )?;
    } else {
        writeln!(out, "{bd} genus {genus}: {outcome} ({} nodes)", res.stats.nodes)?;
        if let Some(t) = res.witness() {
            print_tuple(out, t)?;
        }
    }
    Ok(code)
}

fn run_census(
    d_max: usize,
    filter: FormFilter,
    max_genus: usize,
    json: bool,
    budget: &BudgetArgs,
    out: &mut impl Write,
) -> Run {
    let opts = CensusOptions {
        max_genus,
        budget: budget.budget()?,
    };
    let entries = census(d_max, filter, &opts)?;
    if json {
        for e in &entries {
            json_line(out, e)?;
        }
    } else {
        write!(out, "{}", census_summary(&entries))?;
    }
    Ok(if entries.iter().all(|e| e.agrees() && e.proven) { 0 } else { 1 })
}

fn run_belyi(input: &Input, r: Option<usize>, out: &mut impl Write) -> Run {
    let bd = branch_data(input)?;
    let mut forms = classify_form(&bd);
    if forms.is_empty() {
        forms = classify_form(&bd.normalized().0);
    }
    let form = forms
        .into_iter()
        .next()
        .ok_or_else(|| Fail::Input(format!("{bd} is not of main form")))?;
    let r = r.unwrap_or(form.l());
    if r != form.l() {
        return Err(Fail::Input(format!(
            "-r {r} differs from the {} extra branch points of {bd}",
            form.l()
        )));
    }
    if !form.criterion_holds() {
        let v = decide(&bd)?;
        if input.json {
            json_line(out, &NotRealized { branch_data: &bd, verdict: &v })?;
        } else {
            writeln!(out, "{bd}: {}", verdict_line(&v))?;
        }
        return Ok(1);
    }
    let (t, _, _) = realize_form(&form)?;
    let lifted = belyi_lift(&t, r)?;
    let target = belyi_branch_data(&form)?;
    let report = hurwitz::verify_realization(&target, &lifted);
    if !report.ok() {
        return Err(Fail::Input(format!("lifted tuple fails verification: {report:?}")));
    }
    if input.json {
        json_line(
            out,
            &Lifted { branch_data: &bd, r, lifted_branch_data: &target, tuple: &lifted },
        )?;
    } else {
        writeln!(out, "{bd} lifted by r={r}: {target}")?;
        print_tuple(out, &lifted)?;
    }
    Ok(0)
}

fn run_probe(d_max: usize, genus: usize, json: bool, budget: &BudgetArgs, out: &mut impl Write) -> Run {
    let report = probe_conjecture(d_max, genus, &budget.budget()?)?;
    if json {
        json_line(out, &report)?;
    } else {
        writeln!(
            out,
            "d <= {d_max}, genus {genus}: {} probed, {} realized, {} skipped (odd branching)",
            report.probed, report.realized, report.skipped_incompatible
        )?;
        for bd in &report.counterexamples {
            writeln!(out, "COUNTEREXAMPLE {bd}")?;
        }
        for bd in &report.unknown {
            writeln!(out, "UNKNOWN {bd}")?;
        }
    }
    Ok(if report.clean() { 0 } else { 1 })
}
