use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use bolmoufang_core::*;
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Loop constructions from groups with an involution, and symbolic
/// classification of the loop identities they satisfy.
#[derive(Parser, Debug)]
#[command(name = "bolmoufang", version)]
struct Cli {
    /// Worker threads for classification (defaults to all cores).
    #[arg(long, global = true, env = "BOLMOUFANG_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a loop identity at one quadruple or over the whole grid.
    #[command(group(ArgGroup::new("psi").required(true).args(["variety", "identity"])))]
    Classify {
        /// Builtin variety name, e.g. `moufang` or `lbol`.
        #[arg(long)]
        variety: Option<String>,
        /// Identity such as `x(yx)=(xy)x`.
        #[arg(long)]
        identity: Option<String>,
        /// `β,γ,δ` or `α,β,γ,δ`; omit for the 64-row table.
        #[arg(long)]
        quadruple: Option<String>,
        /// Print every coset assignment and the group identity it yields.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run all tabled varieties and diff against golden tables.
    Search {
        /// Golden TOML file; the bundled tables by default.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also require syntactic equality with the golden condition.
        #[arg(long)]
        structural: bool,
    },
    /// Build the loop of a quadruple over a concrete group.
    Build {
        /// `cyclic:n`, `dihedral:n`, `symmetric:3`, ... or a Cayley table file.
        #[arg(long)]
        group: String,
        /// `inverse`, `identity`, or an index into the `stars` listing.
        #[arg(long, default_value = "inverse")]
        star: String,
        /// Element index of g0; must be central and fixed by the star.
        #[arg(long, default_value_t = 0)]
        g0: usize,
        #[arg(long)]
        quadruple: String,
        /// Comma-separated varieties to test, plus `diassociative`.
        #[arg(long, value_delimiter = ',')]
        check: Vec<String>,
        /// Write the Cayley table here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the admissible star maps of a group.
    Stars {
        #[arg(long)]
        group: String,
    },
    /// Print the 64 standard quadruples.
    EnumerateQuadruples,
    /// Regenerate the witness battery artifact on stdout.
    Battery,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    /// Grouped by condition, laid out like published result tables.
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the command ran but found a mismatch or failed check.
fn run(cmd: Command, out: &mut String) -> Result<bool> {
    match cmd {
        Command::Classify { variety, identity, quadruple, trace, format } => {
            let (label, psi) = resolve_identity(variety, identity)?;
            match quadruple {
                Some(q) => classify_one(&psi, &parse_quadruple(&q)?, trace, format, out),
                None => classify_grid(label, psi, format, out),
            }
        }
        Command::Search { golden, format, structural } => search(golden, format, structural, out),
        Command::Build { group, star, g0, quadruple, check, out: cayley } => {
            build(&group, &star, g0, &quadruple, &check, cayley, out)
        }
        Command::Stars { group } => stars(&group, out),
        Command::EnumerateQuadruples => {
            for q in enumerate_quadruples() {
                writeln!(out, "{}", q.triple_string())?;
            }
            Ok(true)
        }
        Command::Battery => {
            let (battery, unrealized) = WitnessBattery::discover()?;
            write!(out, "{}", battery.render(&unrealized))?;
            Ok(true)
        }
    }
}

fn resolve_identity(variety: Option<String>, identity: Option<String>) -> Result<(String, LoopIdentity)> {
    let (label, psi) = match (variety, identity) {
        (Some(v), _) => {
            let psi = builtin(&v).with_context(|| {
                let names: Vec<&str> = term::builtin_names().collect();
                format!("unknown variety `{v}` (known: {})", names.join(", "))
            })?;
            (v, psi)
        }
        (None, Some(s)) => {
            let psi = parse_identity(&s).with_context(|| format!("cannot parse identity `{s}`"))?;
            (s, psi)
        }
        (None, None) => bail!("one of --variety or --identity is required"),
    };
    if !check_strictly_balanced(&psi) {
        return Err(EngineError::NotStrictlyBalanced(psi.to_string()).into());
    }
    Ok((label, psi))
}

fn parse_quadruple(s: &str) -> Result<MultQuadruple> {
    s.parse().with_context(|| format!("cannot parse quadruple `{s}`"))
}

fn classify_one(psi: &LoopIdentity, q: &MultQuadruple, trace: bool, format: Format, out: &mut String) -> Result<bool> {
    let classifier = Classifier::default();
    let lines = collect_with_trace(psi, q)?;
    let set: IdentitySet = lines.iter().map(|l| l.canonical.clone()).collect();
    let condition = classifier.classify_set(&set);
    let parts: Vec<(String, Classification)> =
        set.nontrivial().map(|id| (id.to_string(), classifier.classify(id))).collect();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Part {
                identity: String,
                condition: String,
                stage: String,
            }
            #[derive(Serialize)]
            struct Doc {
                identity: String,
                quadruple: String,
                condition: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                trace: Option<Vec<String>>,
                identities: Vec<Part>,
            }
            let doc = Doc {
                identity: psi.to_string(),
                quadruple: q.to_string(),
                condition: condition.to_string(),
                trace: trace.then(|| lines.iter().map(|l| l.to_string()).collect()),
                identities: parts
                    .into_iter()
                    .map(|(identity, c)| Part {
                        identity,
                        condition: c.condition.to_string(),
                        stage: format!("{:?}", c.stage).to_lowercase(),
                    })
                    .collect(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Text | Format::Table => {
            if trace {
                for l in &lines {
                    writeln!(out, "{l}")?;
                }
                for (id, c) in &parts {
                    writeln!(out, "  {id:<32} {:<20} [{:?}]", c.condition.to_string(), c.stage)?;
                }
            }
            writeln!(out, "{condition}")?;
        }
    }
    Ok(true)
}

fn classify_grid(label: String, psi: LoopIdentity, format: Format, out: &mut String) -> Result<bool> {
    let res = search_identities(&[(label, psi)], &Classifier::default())?.remove(0);
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = res
                .cells
                .iter()
                .map(|(q, c)| serde_json::json!({ "quadruple": q.triple_string(), "condition": c.to_string() }))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
        }
        Format::Text | Format::Table => {
            for (q, c) in &res.cells {
                writeln!(out, "{:<22} {c}", q.triple_string())?;
            }
        }
    }
    Ok(true)
}

fn search(golden: Option<PathBuf>, format: Format, structural: bool, out: &mut String) -> Result<bool> {
    let golden = match golden {
        Some(p) => GoldenSet::load(&p)?,
        None => GoldenSet::standard(),
    };
    let classifier = Classifier::default();
    let names: Vec<&str> = golden.tables().iter().map(|t| t.variety.as_str()).collect();
    let results = run_search(&names, &classifier)?;
    let report = diff_against_golden(&results, &golden, classifier.battery(), structural)?;
    match format {
        Format::Text => write!(out, "{}", render_text(&report))?,
        Format::Json => writeln!(out, "{}", render_json(&report))?,
        Format::Table => write!(out, "{}", render_publication(&results, &golden, classifier.battery()))?,
    }
    if format != Format::Text {
        for row in report.mismatches() {
            eprintln!("MISMATCH {} {} computed={} golden={}", row.variety, row.quadruple, row.computed, row.golden);
        }
    }
    Ok(report.mismatch_count() == 0)
}

fn starred_group(group: &str, star: &str, g0: usize) -> Result<StarredGroup> {
    let g = load_group(group)?;
    let map = match star {
        "inverse" => StarMap::inversion(&g),
        "identity" => StarMap::identity_map(&g).context("the identity map is not an admissible star here")?,
        k => {
            let k: usize =
                k.parse().with_context(|| format!("star selector `{k}` is not inverse, identity or an index"))?;
            let all = enumerate_star_maps(&g);
            all.get(k).cloned().with_context(|| format!("star index {k} out of range ({} maps)", all.len()))?
        }
    };
    Ok(StarredGroup::new(Arc::new(g), map, g0)?)
}

fn build(
    group: &str,
    star: &str,
    g0: usize,
    quadruple: &str,
    check: &[String],
    cayley: Option<PathBuf>,
    out: &mut String,
) -> Result<bool> {
    let sg = starred_group(group, star, g0)?;
    let q = parse_quadruple(quadruple)?;
    let table = build_loop(&sg, &q);
    let mut ok = is_loop(&table);
    writeln!(out, "{}", table.provenance().map(|p| p.to_string()).unwrap_or_default())?;
    writeln!(out, "order: {}", table.order())?;
    writeln!(out, "loop: {}", yes_no(ok))?;
    for name in check {
        let name = name.trim();
        let verdict = if name == "diassociative" {
            is_diassociative(&table)
        } else {
            let psi = builtin(name).with_context(|| format!("unknown check `{name}`"))?;
            match check_identity_witness(&table, &psi) {
                None => true,
                Some(w) => {
                    let w: Vec<String> = w.iter().map(|(v, e)| format!("{}={e}", *v as char)).collect();
                    writeln!(out, "{name}: no ({})", w.join(" "))?;
                    ok = false;
                    continue;
                }
            }
        };
        ok &= verdict;
        writeln!(out, "{name}: {}", yes_no(verdict))?;
    }
    if let Some(path) = cayley {
        std::fs::write(&path, table.to_cayley()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(ok)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn stars(group: &str, out: &mut String) -> Result<bool> {
    let g = load_group(group)?;
    writeln!(out, "{} order={} PC={} PB={}", g.name(), g.order(), yes_no(predicate_pc(&g)), yes_no(predicate_pb(&g)))?;
    let maps = enumerate_star_maps(&g);
    for (k, s) in maps.iter().enumerate() {
        let mut tags = Vec::new();
        if s.is_inversion(&g) {
            tags.push("inverse");
        }
        if s.is_nonidentical() {
            tags.push("nonidentical");
        } else {
            tags.push("identical");
        }
        let g0: Vec<String> = g0_candidates(&g, s).iter().map(|c| c.index().to_string()).collect();
        writeln!(
            out,
            "{k}: {:?} {} PS={} g0=[{}]",
            s.as_slice(),
            tags.join(","),
            yes_no(predicate_ps(&g, s)),
            g0.join(",")
        )?;
    }
    writeln!(out, "{} maps", maps.len())?;
    Ok(true)
}
