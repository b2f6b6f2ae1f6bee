use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use gassmann_core::abelext::{choose_q, LocalModel};
use gassmann_core::gassmann::{integral_search, is_gassmann, verify_integral_triple, GassmannError, GassmannTriple};
use gassmann_core::homology::homology_sweep;
use gassmann_core::kgroups::{k_group, FieldModel};
use gassmann_core::lattice::{format_matrix_file, parse_matrix_file, IntMat};
use gassmann_core::permgroup::{abelianization, format_group_file, parse_group_file, PermGroup, Subgroup};
use gassmann_core::scott::scott_report;
use gassmann_core::splitting::splitting_report;

#[derive(Parser)]
#[command(name = "gassmann", version, about = "Gassmann triples, splitting types and their invariants")]
struct Cli {
    /// Worker threads for parallel library calls (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Permutation group queries.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Gassmann equivalence and integral intertwiners.
    #[command(subcommand)]
    Gassmann(GassmannCmd),
    /// Splitting types per conjugacy class.
    #[command(subcommand)]
    Splitting(SplittingCmd),
    /// Local lattice model for corresponding abelian extensions.
    #[command(subcommand)]
    Abelext(AbelextCmd),
    /// Odd K-groups of an abelian number field model.
    Kgroups(KgroupsArgs),
    /// Transfer diagrams in degree-one homology.
    #[command(subcommand)]
    Homology(HomologyCmd),
    /// Two non-conjugate A5 subgroups of PSL(2, 29).
    Scott(ScottArgs),
}

#[derive(Subcommand)]
enum GroupCmd {
    Info { file: PathBuf },
}

#[derive(Args)]
struct Triple {
    /// Group file for G.
    group: PathBuf,
    /// Group file with generators of H1 inside G.
    #[arg(long)]
    h1: PathBuf,
    /// Group file with generators of H2 inside G.
    #[arg(long)]
    h2: PathBuf,
}

#[derive(Subcommand)]
enum GassmannCmd {
    Check {
        #[command(flatten)]
        triple: Triple,
    },
    Search {
        #[command(flatten)]
        triple: Triple,
        /// Coefficient bound on the intertwiner basis.
        #[arg(long, default_value_t = 2)]
        bound: i64,
        /// Random samples when the box is too large to enumerate.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the matrix found in matrix-file format.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    Verify {
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Subcommand)]
enum SplittingCmd {
    Report {
        #[command(flatten)]
        triple: Triple,
    },
}

#[derive(Subcommand)]
enum AbelextCmd {
    Demo {
        #[arg(long)]
        matrix: PathBuf,
        /// Auxiliary prime; defaults to the least valid one.
        #[arg(long)]
        q: Option<u64>,
        /// Optional triple; the matrix is then verified as an intertwiner first.
        #[arg(long, requires_all = ["h1", "h2"])]
        group: Option<PathBuf>,
        #[arg(long, requires = "group")]
        h1: Option<PathBuf>,
        #[arg(long, requires = "group")]
        h2: Option<PathBuf>,
    },
}

#[derive(Args)]
struct KgroupsArgs {
    /// `Q` or `abelian:m=<conductor>;H=<generators>`.
    #[arg(long)]
    field: String,
    /// Odd index n >= 3.
    #[arg(long)]
    n: u64,
    /// Emit JSON instead of the bare group.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum HomologyCmd {
    Sweep {
        #[arg(long, default_value_t = 120)]
        max_order: usize,
        /// Largest group order for which the index identity is checked on every subgroup.
        #[arg(long, default_value_t = 60)]
        identity_max_order: usize,
        /// Report path; same as `--out`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScottArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write G, H1 and H2 as group files into this directory.
    #[arg(long)]
    write_groups: Option<PathBuf>,
}

/// A finished run: the report and whether the thing checked held.
struct Outcome {
    report: Output,
    ok: bool,
}

enum Output {
    Json(Value),
    Text(String),
}

impl Outcome {
    fn json<T: Serialize>(report: &T, ok: bool) -> Result<Self> {
        Ok(Outcome {
            report: Output::Json(serde_json::to_value(report)?),
            ok,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    }
    let mut out = cli.out.clone();
    if let Command::Homology(HomologyCmd::Sweep { report: Some(p), .. }) = &cli.command {
        out = Some(p.clone());
    }
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {:#}", e);
            return ExitCode::from(2);
        }
    };
    let text = match outcome.report {
        Output::Json(v) => serde_json::to_string_pretty(&v).expect("json values serialize") + "\n",
        Output::Text(s) => s,
    };
    let written = match &out {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{}", text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {:#}", e);
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Group(GroupCmd::Info { file }) => group_info(&file),
        Command::Gassmann(GassmannCmd::Check { triple }) => gassmann_check(&triple),
        Command::Gassmann(GassmannCmd::Search {
            triple,
            bound,
            budget,
            seed,
            matrix_out,
        }) => gassmann_search(&triple, bound, budget, seed, matrix_out.as_deref()),
        Command::Gassmann(GassmannCmd::Verify { triple, matrix }) => gassmann_verify(&triple, &matrix),
        Command::Splitting(SplittingCmd::Report { triple }) => {
            let (g, h1, h2) = load_triple(&triple)?;
            let report = splitting_report(&g, &h1, &h2)?;
            Outcome::json(&report, true)
        }
        Command::Abelext(AbelextCmd::Demo {
            matrix,
            q,
            group,
            h1,
            h2,
        }) => abelext_demo(&matrix, q, group.zip(h1).zip(h2).map(|((g, a), b)| (g, a, b))),
        Command::Kgroups(args) => kgroups(&args),
        Command::Homology(HomologyCmd::Sweep {
            max_order,
            identity_max_order,
            ..
        }) => {
            let report = homology_sweep(max_order, identity_max_order);
            Outcome::json(&report, report.passed)
        }
        Command::Scott(args) => scott(&args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_group(path: &Path) -> Result<PermGroup> {
    let spec = parse_group_file(&read(path)?).with_context(|| path.display().to_string())?;
    spec.generate().with_context(|| path.display().to_string())
}

fn load_subgroup(g: &PermGroup, path: &Path) -> Result<Subgroup> {
    let spec = parse_group_file(&read(path)?).with_context(|| path.display().to_string())?;
    if spec.degree != g.degree() {
        bail!(
            "{}: degree {} does not match the group degree {}",
            path.display(),
            spec.degree,
            g.degree()
        );
    }
    g.subgroup(&spec.generators).with_context(|| path.display().to_string())
}

fn load_triple(t: &Triple) -> Result<(PermGroup, Subgroup, Subgroup)> {
    let g = load_group(&t.group)?;
    let h1 = load_subgroup(&g, &t.h1)?;
    let h2 = load_subgroup(&g, &t.h2)?;
    Ok((g, h1, h2))
}

fn load_matrix(path: &Path) -> Result<IntMat> {
    parse_matrix_file(&read(path)?).with_context(|| path.display().to_string())
}

/// Entries as JSON numbers when they fit in an `i64`, else as strings.
fn matrix_rows(m: &IntMat) -> Value {
    match m.to_i64_rows() {
        Some(rows) => json!(rows),
        None => json!((0..m.rows())
            .map(|i| m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    }
}

fn group_info(file: &Path) -> Result<Outcome> {
    let g = load_group(file)?;
    let classes = g.conjugacy_classes();
    let ab = abelianization(&g);
    let report = json!({
        "schema": 1,
        "degree": g.degree(),
        "order": g.order(),
        "generators": g.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "conjugacy_classes": classes.len(),
        "classes": classes.iter().map(|c| json!({
            "representative": c.representative.to_string(),
            "size": c.size(),
            "element_order": c.representative.order(),
        })).collect::<Vec<_>>(),
        "abelianization": ab.abelian().to_string(),
        "abelian": g.is_abelian(),
    });
    Outcome::json(&report, true)
}

fn gassmann_check(t: &Triple) -> Result<Outcome> {
    let (g, h1, h2) = load_triple(t)?;
    let index_ok = g.order() / h1.order() == g.order() / h2.order();
    let gassmann = index_ok && is_gassmann(&g, &h1, &h2)?;
    let report = json!({
        "schema": 1,
        "order": g.order(),
        "subgroup_orders": [h1.order(), h2.order()],
        "gassmann": gassmann,
        "conjugate": g.are_conjugate(&h1, &h2)?,
    });
    Outcome::json(&report, gassmann)
}

/// The triple, or a failed report when the pair is not Gassmann.
fn build_triple<'g>(g: &'g PermGroup, h1: Subgroup, h2: Subgroup) -> Result<std::result::Result<GassmannTriple<'g>, Outcome>> {
    match GassmannTriple::new(g, h1, h2) {
        Ok(t) => Ok(Ok(t)),
        Err(e @ (GassmannError::NotGassmann | GassmannError::IndexMismatch(..))) => {
            let report = json!({ "schema": 1, "gassmann": false, "reason": e.to_string() });
            Ok(Err(Outcome::json(&report, false)?))
        }
        Err(e) => Err(e.into()),
    }
}

fn gassmann_search(t: &Triple, bound: i64, budget: u64, seed: u64, matrix_out: Option<&Path>) -> Result<Outcome> {
    let (g, h1, h2) = load_triple(t)?;
    let triple = match build_triple(&g, h1, h2)? {
        Ok(t) => t,
        Err(o) => return Ok(o),
    };
    match integral_search(&triple, bound, budget, seed) {
        Ok((a, stats)) => {
            if let Some(p) = matrix_out {
                fs::write(p, format_matrix_file(a.matrix())).with_context(|| format!("writing {}", p.display()))?;
            }
            let report = json!({
                "schema": 1,
                "found": true,
                "seed": seed,
                "bound": bound,
                "stats": stats,
                "matrix": matrix_rows(a.matrix()),
                "verification": verify_integral_triple(&triple, a.matrix()),
            });
            Outcome::json(&report, true)
        }
        Err(GassmannError::NotFoundWithinBudget { trials }) => {
            let report = json!({
                "schema": 1,
                "found": false,
                "seed": seed,
                "bound": bound,
                "trials": trials,
            });
            Outcome::json(&report, false)
        }
        Err(e) => Err(e.into()),
    }
}

fn gassmann_verify(t: &Triple, matrix: &Path) -> Result<Outcome> {
    let (g, h1, h2) = load_triple(t)?;
    let a = load_matrix(matrix)?;
    let triple = match build_triple(&g, h1, h2)? {
        Ok(t) => t,
        Err(o) => return Ok(o),
    };
    let report = verify_integral_triple(&triple, &a);
    let ok = report.passed;
    Outcome::json(&report, ok)
}

fn abelext_demo(matrix: &Path, q: Option<u64>, triple: Option<(PathBuf, PathBuf, PathBuf)>) -> Result<Outcome> {
    let a = load_matrix(matrix)?;
    let q = match q {
        Some(q) => q,
        None => choose_q(&a)?,
    };
    let model = match triple {
        None => LocalModel::synthetic(a, q)?,
        Some((gp, h1p, h2p)) => {
            let (g, h1, h2) = load_triple(&Triple {
                group: gp,
                h1: h1p,
                h2: h2p,
            })?;
            let triple = match build_triple(&g, h1, h2)? {
                Ok(t) => t,
                Err(o) => return Ok(o),
            };
            let verification = verify_integral_triple(&triple, &a);
            if !verification.passed {
                let report = json!({
                    "schema": 1,
                    "verified": false,
                    "reason": verification.failure_summary(),
                });
                return Outcome::json(&report, false);
            }
            let corr = gassmann_core::gassmann::CorrespondenceMatrix::new(&triple, a)?;
            LocalModel::from_correspondence(&corr, q)?
        }
    };
    let report = model.run()?;
    Outcome::json(&report, true)
}

fn kgroups(args: &KgroupsArgs) -> Result<Outcome> {
    let field = FieldModel::parse(&args.field).with_context(|| format!("--field {:?}", args.field))?;
    let k = k_group(&field, args.n)?;
    let report = if args.json {
        let (r1, r2) = field.signature();
        Output::Json(json!({
            "schema": 1,
            "field": field.to_string(),
            "degree": field.degree(),
            "signature": [r1, r2],
            "n": args.n,
            "free_rank": k.free_rank,
            "invariant_factors": k.invariant_factors,
            "group": k.to_string(),
        }))
    } else {
        Output::Text(format!("{}\n", k))
    };
    Ok(Outcome { report, ok: true })
}

fn scott(args: &ScottArgs) -> Result<Outcome> {
    let (pair, report) = scott_report(args.seed).map_err(|e| anyhow!(e))?;
    if let Some(dir) = &args.write_groups {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let n = pair.group.degree();
        let files = [
            ("psl2_29.grp", pair.group.generators()),
            ("h1.grp", pair.h1.generators()),
            ("h2.grp", pair.h2.generators()),
        ];
        for (name, gens) in files {
            let p = dir.join(name);
            fs::write(&p, format_group_file(n, gens)).with_context(|| format!("writing {}", p.display()))?;
        }
    }
    let ok = report.gassmann && !report.conjugate;
    Outcome::json(&report, ok)
}
