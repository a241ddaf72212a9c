use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use collapse_core::chartab::{compute_character_table_with_limit, format_ctab, parse_ctab, s_count_bruteforce, CharacterTable};
use collapse_core::criteria::{classify_group, classify_table, revalidate, Budgets, ClassifyOptions, Report, Verdict};
use collapse_core::cyclo::parse_cyclotomic;
use collapse_core::nichols::{hilbert_prefix, BraidedVectorSpace, Cocycle};
use collapse_core::permgrp::{class_fusion, parse_group, PermGroup};
use collapse_core::rack::{parse_rack, type_d_search, Rack, SearchBudget, SearchOutcome, Strategy, TypeDWitness};

#[derive(Parser, Debug)]
#[command(name = "collapse", version, about = "Nichols algebra collapse criteria for finite groups")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Element enumeration cap.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_enum: usize,
    /// Largest pair count searched exhaustively.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_pairs: u64,
    /// Cap on orbit certificates.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget_orbit: usize,
    /// Samples drawn by randomized searches.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget_samples: u64,
    /// Largest group order for character table computation.
    #[arg(long, global = true, default_value_t = 2000)]
    budget_dixon: u128,
    /// Elements tried by the affine realization search.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget_affine: u64,
    /// Largest tensor power dimension for Nichols computations.
    #[arg(long, global = true, default_value_t = 20_000)]
    budget_tensor: usize,
    /// Soft wall-clock limit in seconds; exceeding it is reported.
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Re-validate every emitted witness and structure constant.
    #[arg(long, global = true)]
    verify: bool,
    /// Data directory for bare file names.
    #[arg(long, global = true, env = "COLLAPSE_DATA")]
    data: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Records,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum StrategyArg {
    Exhaustive,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the criteria on every class of a group (.grp) or character table (.ctab).
    Classify {
        input: String,
        /// Subgroup generator file whose verdicts are fused in, as NAME=FILE.
        #[arg(long = "subgroup")]
        subgroups: Vec<String>,
    },
    /// Search a class (or a union of classes, joined by '+') for a type-D witness.
    Typed {
        group: String,
        label: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
        strategy: StrategyArg,
    },
    /// Class multiplication coefficient S(A, B, C) from a character table.
    Sval { table: String, a: String, b: String, c: String },
    /// Hilbert series prefix of a Nichols algebra over a rack with a constant cocycle.
    Nichols {
        /// Rack file, or builtin `fk3` / `point`.
        rack: String,
        /// Cocycle value, e.g. -1 or E(3).
        #[arg(allow_hyphen_values = true)]
        cocycle: String,
        maxdeg: usize,
    },
    /// Character table of a group in CTAB format.
    Chartab {
        group: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Class fusion of a subgroup into a group.
    Fuse { subgroup: String, group: String },
    /// Re-validate records emitted by `classify`, `typed` or `sval`.
    Verify {
        /// Group or table the records refer to.
        input: String,
        records: String,
    },
}

struct RunConfig {
    seed: Option<u64>,
    budgets: Budgets,
    tensor_limit: usize,
    soft_seconds: Option<u64>,
    format: Format,
    verify: bool,
    data: Option<PathBuf>,
}

impl RunConfig {
    fn from_args(a: &ConfigArgs) -> Result<Self> {
        let budgets = Budgets {
            enumeration: a.budget_enum,
            max_pairs: a.budget_pairs,
            orbit_cap: a.budget_orbit,
            samples: a.budget_samples,
            dixon_limit: a.budget_dixon,
            affine_candidates: a.budget_affine,
        };
        budgets.check()?;
        if a.budget_tensor == 0 || a.budget_seconds == Some(0) {
            bail!("all budgets must be positive");
        }
        Ok(RunConfig {
            seed: a.seed,
            budgets,
            tensor_limit: a.budget_tensor,
            soft_seconds: a.budget_seconds,
            format: a.format,
            verify: a.verify,
            data: a.data.clone(),
        })
    }

    fn resolve(&self, name: &str, ext: &str) -> PathBuf {
        let direct = PathBuf::from(name);
        if direct.exists() {
            return direct;
        }
        if let Some(dir) = &self.data {
            for candidate in [dir.join(name), dir.join(format!("{name}.{ext}"))] {
                if candidate.exists() {
                    return candidate;
                }
            }
            if let Some(base) = Path::new(name).file_name() {
                let c = dir.join(base);
                if c.exists() {
                    return c;
                }
            }
        }
        direct
    }

    fn read(&self, name: &str, ext: &str) -> Result<(PathBuf, String)> {
        let path = self.resolve(name, ext);
        let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok((path, text))
    }

    fn group(&self, name: &str) -> Result<PermGroup> {
        let (path, text) = self.read(name, "grp")?;
        let mut g = parse_group(&text).with_context(|| format!("{}", path.display()))?;
        g.set_budget(self.budgets.enumeration);
        Ok(g)
    }

    fn table(&self, name: &str) -> Result<CharacterTable> {
        let (path, text) = self.read(name, "ctab")?;
        parse_ctab(&text).with_context(|| format!("{}", path.display()))
    }

    fn is_table(&self, name: &str) -> Result<bool> {
        let (_, text) = self.read(name, "grp")?;
        Ok(text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("CTAB")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = RunConfig::from_args(&cli.config)?;
    if cli.config.workers > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.config.workers).build_global()?;
    }
    let start = Instant::now();
    match cli.command {
        Command::Classify { input, subgroups } => cmd_classify(&cfg, &input, &subgroups)?,
        Command::Typed { group, label, strategy } => cmd_typed(&cfg, &group, &label, strategy)?,
        Command::Sval { table, a, b, c } => cmd_sval(&cfg, &table, &a, &b, &c)?,
        Command::Nichols { rack, cocycle, maxdeg } => cmd_nichols(&cfg, &rack, &cocycle, maxdeg)?,
        Command::Chartab { group, name } => cmd_chartab(&cfg, &group, name)?,
        Command::Fuse { subgroup, group } => cmd_fuse(&cfg, &subgroup, &group)?,
        Command::Verify { input, records } => cmd_verify(&cfg, &input, &records)?,
    }
    if let Some(limit) = cfg.soft_seconds {
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed > limit as f64 {
            eprintln!("warning: soft time limit of {limit} s exceeded ({elapsed:.1} s)");
        }
    }
    Ok(())
}

fn print_records<T: Serialize>(records: &[T]) -> Result<()> {
    for r in records {
        println!("{}", serde_json::to_string(r)?);
    }
    Ok(())
}

fn group_name(path: &str) -> String {
    Path::new(path).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.to_string())
}

fn cmd_classify(cfg: &RunConfig, input: &str, subgroups: &[String]) -> Result<()> {
    let mut opts = ClassifyOptions { seed: cfg.seed.unwrap_or(0), budgets: cfg.budgets, ..Default::default() };
    let report = if cfg.is_table(input)? {
        if !subgroups.is_empty() {
            bail!("subgroup fusion needs a group file");
        }
        let t = cfg.table(input)?;
        let r = classify_table(&t, &opts)?;
        if cfg.verify {
            let n = revalidate(&r, None, Some(&cfg.table(input)?))?;
            eprintln!("verified {n} reasons");
        }
        r
    } else {
        let g = cfg.group(input)?;
        for s in subgroups {
            let (name, file) = s.split_once('=').ok_or_else(|| anyhow!("subgroup must be NAME=FILE, got {s}"))?;
            opts.subgroups.push((name.to_string(), cfg.group(file)?));
        }
        let r = classify_group(&group_name(input), &g, &opts)?;
        if cfg.verify {
            let n = revalidate(&r, Some(&cfg.group(input)?), None)?;
            eprintln!("verified {n} reasons");
        }
        r
    };
    emit_report(cfg, &report)
}

fn emit_report(cfg: &RunConfig, report: &Report) -> Result<()> {
    match cfg.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Records => {
            print_records(&report.verdicts)?;
            println!(
                "{}",
                json!({ "summary": report.summary_line(), "group": report.name, "order": report.order, "collapses": report.collapses, "seed": report.seed })
            );
        }
    }
    Ok(())
}

fn typed_rack(g: &PermGroup, label: &str) -> Result<Rack> {
    let ks: Vec<usize> = label.split('+').map(|l| g.class_by_label(l.trim())).collect::<collapse_core::Result<_>>()?;
    Ok(if ks.len() == 1 { Rack::class_rack(g, ks[0])? } else { Rack::class_union_rack(g, &ks)? })
}

#[derive(Serialize, Deserialize)]
struct TypedRecord {
    group: String,
    label: String,
    #[serde(flatten)]
    outcome: SearchOutcome,
}

fn cmd_typed(cfg: &RunConfig, group: &str, label: &str, strategy: StrategyArg) -> Result<()> {
    let g = cfg.group(group)?;
    let x = typed_rack(&g, label)?;
    let (strategy, seed) = match strategy {
        StrategyArg::Exhaustive => (Strategy::Exhaustive, cfg.seed.unwrap_or(0)),
        StrategyArg::Random => {
            let seed = cfg.seed.ok_or_else(|| anyhow!("randomized search needs --seed"))?;
            (Strategy::Randomized { samples: cfg.budgets.samples }, seed)
        }
    };
    let budget = SearchBudget { max_pairs: cfg.budgets.max_pairs, orbit_cap: cfg.budgets.orbit_cap };
    let outcome = type_d_search(&x, strategy, seed, budget)?;
    if cfg.verify {
        if let SearchOutcome::Witness(w) = &outcome {
            w.validate(&typed_rack(&cfg.group(group)?, label)?)?;
            eprintln!("verified witness");
        }
    }
    match cfg.format {
        Format::Records => {
            print_records(&[TypedRecord { group: group_name(group), label: label.to_string(), outcome }])?;
        }
        Format::Text => match outcome {
            SearchOutcome::Witness(w) => println!("{}", describe_witness(&w)),
            SearchOutcome::NotTypeD { pairs } => println!("none (exhaustive, {pairs} pairs)"),
            SearchOutcome::Unknown { pairs, skipped } => println!("unknown ({pairs} pairs tried, {skipped} skipped)"),
        },
    }
    Ok(())
}

fn describe_witness(w: &TypeDWitness) -> String {
    format!(
        "witness r={} s={} |orbit r|={} |orbit s|={} |<r,s>|={}",
        w.r_element,
        w.s_element,
        w.orbit_r.len(),
        w.orbit_s.len(),
        w.subgroup_order.map_or("?".to_string(), |o| o.to_string())
    )
}

#[derive(Serialize, Deserialize)]
struct SvalRecord {
    table: String,
    classes: [String; 3],
    value: String,
}

fn cmd_sval(cfg: &RunConfig, table: &str, a: &str, b: &str, c: &str) -> Result<()> {
    let t = cfg.table(table)?;
    let s = t.s_count_by_label(a, b, c)?;
    if cfg.verify {
        let fresh = cfg.table(table)?;
        let again = fresh.s_count_by_label(a, b, c)?;
        if again != s {
            bail!("S-value does not re-validate");
        }
        eprintln!("verified S({a},{b},{c}) = {again}");
    }
    match cfg.format {
        Format::Text => println!("{s}"),
        Format::Records => print_records(&[SvalRecord { table: t.name.clone(), classes: [a.into(), b.into(), c.into()], value: s.to_string() }])?,
    }
    Ok(())
}

fn builtin_rack(name: &str) -> Result<Option<Rack>> {
    Ok(match name {
        "point" => Some(Rack::from_table(1, vec![0])?),
        "fk3" => {
            let g = PermGroup::new(vec![collapse_core::permgrp::Perm::parse("(1,2)")?, collapse_core::permgrp::Perm::parse("(1,2,3)")?]);
            Some(Rack::class_rack(&g, g.class_by_label("2A")?)?)
        }
        _ => None,
    })
}

fn cmd_nichols(cfg: &RunConfig, rack: &str, cocycle: &str, maxdeg: usize) -> Result<()> {
    let x = match builtin_rack(rack)? {
        Some(x) => x,
        None => {
            let (path, text) = cfg.read(rack, "rack")?;
            parse_rack(&text).with_context(|| format!("{}", path.display()))?
        }
    };
    let q = parse_cyclotomic(cocycle).with_context(|| format!("cocycle value {cocycle}"))?;
    let v = BraidedVectorSpace::from_cocycle(&x, &Cocycle::constant(x.size(), q))?;
    let h = hilbert_prefix(&v, maxdeg, cfg.tensor_limit);
    match cfg.format {
        Format::Text => println!("{h}"),
        Format::Records => print_records(&[&h])?,
    }
    Ok(())
}

fn cmd_chartab(cfg: &RunConfig, group: &str, name: Option<String>) -> Result<()> {
    let g = cfg.group(group)?;
    let name = name.unwrap_or_else(|| group_name(group));
    let t = compute_character_table_with_limit(&g, &name, cfg.budgets.dixon_limit)?;
    let text = format_ctab(&t);
    if cfg.verify {
        let back = parse_ctab(&text)?;
        if back != t {
            bail!("CTAB output does not re-ingest to the same table");
        }
        eprintln!("verified table ({} classes)", t.nclasses());
    }
    print!("{text}");
    Ok(())
}

fn cmd_fuse(cfg: &RunConfig, subgroup: &str, group: &str) -> Result<()> {
    let h = cfg.group(subgroup)?;
    let g = cfg.group(group)?;
    let fusion = class_fusion(&h, &g)?;
    let (hc, gc) = (h.conjugacy_classes()?, g.conjugacy_classes()?);
    match cfg.format {
        Format::Text => {
            for (i, &j) in fusion.iter().enumerate() {
                println!("{} ({}) -> {} ({})", hc[i].label, hc[i].centralizer_order, gc[j].label, gc[j].centralizer_order);
            }
        }
        Format::Records => {
            let recs: Vec<_> = fusion.iter().enumerate().map(|(i, &j)| json!({ "subgroup_class": hc[i].label, "class": gc[j].label })).collect();
            print_records(&recs)?;
        }
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, input: &str, records: &str) -> Result<()> {
    let text = std::fs::read_to_string(records).with_context(|| format!("cannot read {records}"))?;
    let table_input = cfg.is_table(input)?;
    let (g, t) = if table_input { (None, Some(cfg.table(input)?)) } else { (Some(cfg.group(input)?), None) };
    let mut verdicts: Vec<Verdict> = Vec::new();
    let mut checked = 0usize;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line).with_context(|| format!("{records}:{}", n + 1))?;
        if value.get("summary").is_some() {
            continue;
        }
        if value.get("reasons").is_some() {
            verdicts.push(serde_json::from_str(line).with_context(|| format!("{records}:{}", n + 1))?);
        } else if value.get("result").is_some() {
            let rec: TypedRecord = serde_json::from_str(line).with_context(|| format!("{records}:{}", n + 1))?;
            let g = g.as_ref().ok_or_else(|| anyhow!("witness records need a group file"))?;
            if let SearchOutcome::Witness(w) = &rec.outcome {
                w.validate(&typed_rack(g, &rec.label)?).with_context(|| format!("{records}:{}", n + 1))?;
                checked += 1;
            }
        } else if value.get("value").is_some() {
            let rec: SvalRecord = serde_json::from_str(line).with_context(|| format!("{records}:{}", n + 1))?;
            let fresh = match (&t, &g) {
                (Some(t), _) => t.s_count_by_label(&rec.classes[0], &rec.classes[1], &rec.classes[2])?,
                (None, Some(g)) => {
                    let ks: Vec<usize> = rec.classes.iter().map(|l| g.class_by_label(l)).collect::<collapse_core::Result<_>>()?;
                    s_count_bruteforce(g, ks[0], ks[1], ks[2])?
                }
                _ => unreachable!(),
            };
            if fresh.to_string() != rec.value {
                bail!("{records}:{}: S-value {} recomputes to {fresh}", n + 1, rec.value);
            }
            checked += 1;
        } else {
            bail!("{records}:{}: unrecognized record", n + 1);
        }
    }
    if !verdicts.is_empty() {
        let first = &verdicts[0];
        let report = Report {
            name: group_name(input),
            mode: if table_input { "table".into() } else { "group".into() },
            order: String::new(),
            collapses: false,
            seed: first.seed,
            budgets: first.budgets,
            verdicts,
        };
        checked += revalidate(&report, g.as_ref(), t.as_ref())?;
    }
    match cfg.format {
        Format::Text => println!("verified {checked} items"),
        Format::Records => println!("{}", json!({ "verified": checked })),
    }
    Ok(())
}
