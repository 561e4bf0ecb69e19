use clap::{Args, Parser, Subcommand};
use drg_core::action::{coset_action, ksubset_action, PermAction};
use drg_core::autiso::{automorphism_group, SearchBudget};
use drg_core::classify::{classify_action, Limits};
use drg_core::codes::{
    code_from_adjacency, min_distance, weight_distribution, DistanceResult, Strategy,
};
use drg_core::data;
use drg_core::designs::{complement_design, design_automorphisms, is_2design, support_design};
use drg_core::error::{Error, Result};
use drg_core::graphs::{build_graph, selection_from_mask, Graph};
use drg_core::group::PermGroup;
use drg_core::orbitals::orbital_decomposition;
use drg_core::pdset::{error_capacity, find_pdset, gordon_bound, verify_pdset, Verdict, VerifyMode};
use drg_core::report::RunReport;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "drg", version, about = "Orbital-union graphs, their codes, PD-sets and designs")]
struct Cli {
    /// Worker thread cap (defaults to all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceArgs {
    /// Group generator file
    #[arg(long)]
    group: PathBuf,
    /// Subgroup generator file: act on its right cosets
    #[arg(long, conflicts_with = "ksubsets")]
    subgroup: Option<PathBuf>,
    /// Act on k-subsets of points instead of cosets
    #[arg(long)]
    ksubsets: Option<usize>,
    /// Coset index cap
    #[arg(long, default_value_t = 1_000_000)]
    max_index: usize,
    /// Override the profile's rank cap
    #[arg(long)]
    max_rank: Option<usize>,
    /// Limits profile: default (degree ≤ 1024, ≤ 16 blocks) or extended
    #[arg(long, default_value = "default")]
    profile: String,
}

#[derive(Subcommand)]
enum Command {
    /// Validate curated data directories (orders, indices, membership, ranks)
    Validate {
        /// Data directories, each holding a manifest.json
        dirs: Vec<PathBuf>,
        /// Also recompute each action's orbital decomposition
        #[arg(long)]
        deep: bool,
    },
    /// Enumerate orbital unions and classify the distance-regular ones
    Classify {
        #[command(flatten)]
        source: SourceArgs,
        /// Write a JSON run report here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Analyze the code spanned by an orbital-union adjacency matrix
    Code {
        #[command(flatten)]
        source: SourceArgs,
        /// Orbital indices to union, comma-separated (as printed by classify)
        #[arg(long, value_delimiter = ',')]
        select: Vec<usize>,
        /// Prime field
        #[arg(long, default_value_t = 2)]
        field: u32,
        /// Print the full weight distribution
        #[arg(long)]
        distribution: bool,
        /// Minimum-distance strategy: auto, enumerate, mitm
        #[arg(long, default_value = "auto")]
        strategy: String,
        /// Write the generator matrix here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for or verify a permutation decoding set
    Pdset {
        /// Code file
        #[arg(long)]
        code: PathBuf,
        /// Verify this PD-set file instead of searching
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Number of errors to correct (default ⌊(d−1)/2⌋ when verifying)
        #[arg(long)]
        t: Option<usize>,
        /// Generator file for the code's automorphisms (search mode)
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        target_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verification mode: exhaustive, hitting, sampled
        #[arg(long, default_value = "hitting")]
        mode: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the support design of the weight-w codewords and test 2-design-ness
    Designs {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        weight: usize,
        /// Analyze the complement design as well
        #[arg(long)]
        complement: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automorphism group of a graph, orbital union, or design
    Aut {
        /// Graph file (`p graph N M` edge list)
        #[arg(long, conflicts_with = "design")]
        graph: Option<PathBuf>,
        /// Design file
        #[arg(long)]
        design: Option<PathBuf>,
        /// Group generator file (orbital-union source)
        #[arg(long, requires = "select")]
        group: Option<PathBuf>,
        #[arg(long)]
        subgroup: Option<PathBuf>,
        /// Orbital indices to union, comma-separated
        #[arg(long, value_delimiter = ',')]
        select: Vec<usize>,
        #[arg(long, default_value = "default")]
        profile: String,
        /// Write the generators here as a group file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a JSON run report as TSV
    Report {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn limits_of(source: &SourceArgs) -> Result<Limits> {
    let mut l = match source.profile.as_str() {
        "default" => Limits::default_profile(),
        "extended" => Limits::extended_profile(),
        other => {
            return Err(Error::Input(format!(
                "unknown profile `{}` (expected default or extended)",
                other
            )))
        }
    };
    if let Some(r) = source.max_rank {
        l.max_rank = r;
    }
    Ok(l)
}

fn load_action(source: &SourceArgs, limits: Limits) -> Result<PermAction> {
    let g = PermGroup::from_generators(data::parse_group_file(&source.group)?)?;
    let gname = stem(&source.group);
    if let Some(sub) = &source.subgroup {
        let h = PermGroup::from_generators(data::parse_group_file(sub)?)?;
        let label = format!("{}/{}", gname, stem(sub));
        coset_action(&g, &h, source.max_index.min(limits.max_degree), &label)
    } else if let Some(k) = source.ksubsets {
        ksubset_action(&g, k, limits.max_degree, &format!("{}:{}sets", gname, k))
    } else {
        let a = PermAction::natural(&g, &gname);
        if !a.is_transitive() {
            return Err(Error::Input(
                "the natural action is intransitive; pass --subgroup or --ksubsets".into(),
            ));
        }
        Ok(a)
    }
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| p.display().to_string())
}

fn build_selected_graph(source: &SourceArgs, select: &[usize]) -> Result<(Graph, String)> {
    let limits = limits_of(source)?;
    let action = load_action(source, limits)?;
    let dec = orbital_decomposition(&action, limits.max_degree)?;
    if select.is_empty() {
        return Err(Error::Input("--select is required (orbital indices)".into()));
    }
    let blocks = dec.pairing_classes();
    // translate orbital indices to the pairing blocks that contain them
    let mut mask: u32 = 0;
    for &oi in select {
        if oi == 0 || oi >= dec.rank() {
            return Err(Error::Input(format!(
                "orbital index {} out of range 1..{}",
                oi,
                dec.rank() - 1
            )));
        }
        let bi = blocks
            .iter()
            .position(|b| b.contains(&oi))
            .ok_or_else(|| Error::Internal("orbital missing from pairing blocks".into()))?;
        mask |= 1 << bi;
    }
    let sel = selection_from_mask(&dec, &blocks, mask);
    if sel.orbital_indices != {
        let mut s = select.to_vec();
        s.sort_unstable();
        s.dedup();
        s
    } {
        eprintln!(
            "note: selection closed under pairing -> orbitals {:?}",
            sel.orbital_indices
        );
    }
    let label = format!("{}[{:?}]", action.label, sel.orbital_indices);
    Ok((build_graph(&dec, &sel), label))
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Error::Input(format!("--jobs: {}", e)))?;
    }
    match cli.command {
        Command::Validate { dirs, deep } => cmd_validate(&dirs, deep),
        Command::Classify { source, out, seed } => cmd_classify(&source, out.as_deref(), seed),
        Command::Code {
            source,
            select,
            field,
            distribution,
            strategy,
            out,
        } => cmd_code(&source, &select, field, distribution, &strategy, out.as_deref()),
        Command::Pdset {
            code,
            verify,
            t,
            group,
            target_size,
            seed,
            mode,
            samples,
            out,
        } => cmd_pdset(
            &code,
            verify.as_deref(),
            t,
            group.as_deref(),
            target_size,
            seed,
            &mode,
            samples,
            out.as_deref(),
        ),
        Command::Designs {
            code,
            weight,
            complement,
            out,
        } => cmd_designs(&code, weight, complement, out.as_deref()),
        Command::Aut {
            graph,
            design,
            group,
            subgroup,
            select,
            profile,
            out,
        } => {
            let source = group.map(|g| SourceArgs {
                group: g,
                subgroup,
                ksubsets: None,
                max_index: 1_000_000,
                max_rank: None,
                profile,
            });
            cmd_aut(graph.as_deref(), design.as_deref(), source.as_ref(), &select, out.as_deref())
        }
        Command::Report { input, out } => cmd_report(&input, out.as_deref()),
    }
}

fn cmd_validate(dirs: &[PathBuf], deep: bool) -> Result<u8> {
    if dirs.is_empty() {
        return Err(Error::Input("no data directories given".into()));
    }
    for dir in dirs {
        let bundle = data::load_bundle(dir)?;
        println!(
            "{}: order {} on {} points, {} subgroups — orders/indices/membership ok",
            bundle.name,
            bundle.manifest.order,
            bundle.manifest.degree,
            bundle.subgroups.len()
        );
        if !deep {
            continue;
        }
        let limits = Limits::extended_profile();
        for (sub, h) in &bundle.subgroups {
            let label = format!("{}/{}", bundle.name, stem(Path::new(&sub.file)));
            let action = coset_action(&bundle.group, h, limits.max_degree, &label)?;
            let dec = orbital_decomposition(&action, limits.max_degree)?;
            if dec.rank() != sub.rank {
                return Err(Error::Data(format!(
                    "{}: rank {} ≠ declared {}",
                    label,
                    dec.rank(),
                    sub.rank
                )));
            }
            // declared degrees include the diagonal orbital
            let mut degs: Vec<usize> = dec.orbitals.iter().map(|o| o.degree).collect();
            degs.sort_unstable();
            let mut declared = sub.orbital_degrees.clone();
            declared.sort_unstable();
            if degs != declared {
                return Err(Error::Data(format!(
                    "{}: orbital degrees {:?} ≠ declared {:?}",
                    label, degs, declared
                )));
            }
            if dec.pairing_classes().len() != sub.pairing_blocks {
                return Err(Error::Data(format!(
                    "{}: {} pairing blocks ≠ declared {}",
                    label,
                    dec.pairing_classes().len(),
                    sub.pairing_blocks
                )));
            }
            println!(
                "  {}: index {}, rank {}, {} pairing blocks — decomposition ok",
                label,
                sub.index,
                dec.rank(),
                sub.pairing_blocks
            );
        }
    }
    Ok(0)
}

fn cmd_classify(source: &SourceArgs, out: Option<&Path>, seed: u64) -> Result<u8> {
    let limits = limits_of(source)?;
    let mut report = RunReport::new("classify", Some(seed));
    report.record_input(&source.group)?;
    if let Some(s) = &source.subgroup {
        report.record_input(s)?;
    }
    let action = load_action(source, limits)?;
    let t0 = std::time::Instant::now();
    let cls = classify_action(&action, limits)?;
    let millis = t0.elapsed().as_millis() as u64;
    println!(
        "{}: degree {}, rank {}, {} pairing blocks, {} candidates ({} pruned by the λ-probe)",
        cls.action_label, cls.degree, cls.rank, cls.pairing_blocks, cls.candidates, cls.pruned_by_probe
    );
    for r in &cls.records {
        println!("  orbitals {:?}: {} on {} vertices", r.orbital_indices, r.kind, r.n);
        report.push_stage(
            "classify",
            &cls.action_label,
            &r.kind.to_string(),
            serde_json::json!({
                "n": r.n,
                "degree": r.degree,
                "orbitals": r.orbital_indices,
            }),
            millis,
        );
    }
    if cls.records.is_empty() {
        println!("  no distance-regular unions");
    }
    if let Some(p) = out {
        report.write(p)?;
    }
    Ok(0)
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    match s {
        "auto" => Ok(Strategy::Auto),
        "enumerate" => Ok(Strategy::Enumerate),
        "mitm" => Ok(Strategy::Mitm),
        other => Err(Error::Input(format!("unknown strategy `{}`", other))),
    }
}

fn cmd_code(
    source: &SourceArgs,
    select: &[usize],
    field: u32,
    distribution: bool,
    strategy: &str,
    out: Option<&Path>,
) -> Result<u8> {
    let (graph, label) = build_selected_graph(source, select)?;
    let code = code_from_adjacency(&graph, field)?;
    println!("{}: [{}, {}] code over GF({})", label, code.n, code.k, code.p);
    match min_distance(&code, parse_strategy(strategy)?, code.n)? {
        DistanceResult::Exact { d, witness } => {
            println!(
                "  minimum distance {} (witness support {:?})",
                d,
                drg_core::codes::support_1based(&witness)
            );
        }
        DistanceResult::Interval { lower, upper, .. } => {
            println!("  minimum distance in [{}, {}] (no certificate within budget)", lower, upper);
        }
    }
    if distribution {
        let wd = weight_distribution(&code)?;
        for (w, c) in &wd.entries {
            println!("  <{}, {}>", w, c);
        }
    }
    if let Some(p) = out {
        data::write_code_file(p, &code)?;
        println!("  wrote {}", p.display());
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_pdset(
    code_path: &Path,
    verify: Option<&Path>,
    t: Option<usize>,
    group: Option<&Path>,
    target_size: usize,
    seed: u64,
    mode: &str,
    samples: usize,
    out: Option<&Path>,
) -> Result<u8> {
    let code = data::parse_code_file(code_path)?;
    if let Some(pd_path) = verify {
        let (n, pd) = data::parse_pdset_file(pd_path)?;
        if n != code.n {
            return Err(Error::Input("PD-set length differs from code length".into()));
        }
        let t = t.unwrap_or(pd.t);
        let mode = match mode {
            "exhaustive" => VerifyMode::Exhaustive,
            "hitting" => VerifyMode::Hitting,
            "sampled" => VerifyMode::Sampled { samples, seed },
            other => return Err(Error::Input(format!("unknown mode `{}`", other))),
        };
        return match verify_pdset(n, &pd.perms, &pd.info_set, t, mode)? {
            Verdict::Valid => {
                println!("valid: {} permutations correct all {}-error patterns", pd.perms.len(), t);
                Ok(0)
            }
            Verdict::Invalid { witness } => {
                let w: Vec<usize> = witness.iter().map(|x| x + 1).collect();
                println!("INVALID: error positions {:?} defeat every permutation", w);
                Ok(4)
            }
            Verdict::NoFailureFound => {
                println!("no failure found in {} samples (not a validity certificate)", samples);
                Ok(0)
            }
        };
    }
    // search mode
    let gens = data::parse_group_file(group.ok_or_else(|| {
        Error::Input("search mode needs --group (code automorphism generators)".into())
    })?)?;
    let d = min_distance(&code, Strategy::Auto, code.n)?
        .exact()
        .ok_or_else(|| Error::Resource("minimum distance not certified; pass --t".into()))?;
    let t = t.unwrap_or_else(|| error_capacity(d));
    let gb = gordon_bound(code.n, code.k, t)?;
    println!(
        "[{}, {}, {}] code: t = {}, size lower bound {}",
        code.n, code.k, d, t, gb
    );
    let info_set = code.pivots.clone();
    let pd = find_pdset(&code, &info_set, t, &gens, target_size, seed)?;
    println!("found a verified PD-set of {} permutations", pd.perms.len());
    if let Some(p) = out {
        data::write_pdset_file(p, code.n, &pd)?;
        println!("wrote {}", p.display());
    }
    Ok(0)
}

fn cmd_designs(code_path: &Path, weight: usize, complement: bool, out: Option<&Path>) -> Result<u8> {
    let code = data::parse_code_file(code_path)?;
    let d = support_design(&code, weight)?;
    let lambda = is_2design(&d)?;
    println!(
        "weight-{} supports: 2-({}, {}, {}) design with {} blocks",
        weight, d.v, d.k, lambda, d.b()
    );
    if complement {
        let c = complement_design(&d);
        let cl = is_2design(&c)?;
        println!(
            "complement: 2-({}, {}, {}) design with {} blocks",
            c.v, c.k, cl, c.b()
        );
    }
    if let Some(p) = out {
        data::write_design_file(p, &d)?;
        println!("wrote {}", p.display());
    }
    Ok(0)
}

fn cmd_aut(
    graph: Option<&Path>,
    design: Option<&Path>,
    source: Option<&SourceArgs>,
    select: &[usize],
    out: Option<&Path>,
) -> Result<u8> {
    let budget = SearchBudget::default();
    let (order, gens) = if let Some(gp) = graph {
        let g = data::parse_graph_file(gp)?;
        let res = automorphism_group(&g, budget)?;
        (res.order, res.generators)
    } else if let Some(dp) = design {
        let d = data::parse_design_file(dp)?;
        let res = design_automorphisms(&d, budget)?;
        (res.order, res.generators)
    } else if let Some(src) = source {
        let (g, label) = build_selected_graph(src, select)?;
        println!("{}: {} vertices", label, g.n);
        let res = automorphism_group(&g, budget)?;
        (res.order, res.generators)
    } else {
        return Err(Error::Input("pass --graph, --design, or --group".into()));
    };
    println!("|Aut| = {} ({} generators)", order, gens.len());
    if let Some(p) = out {
        let keep: Vec<_> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        data::write_group_file(p, if keep.is_empty() { &gens } else { &keep }, None)?;
        println!("wrote {}", p.display());
    }
    Ok(0)
}

fn cmd_report(input: &Path, out: Option<&Path>) -> Result<u8> {
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(input)?)?;
    let tsv = report.render_tsv();
    match out {
        Some(p) => std::fs::write(p, tsv)?,
        None => print!("{}", tsv),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            let code = match e {
                Error::Input(_) | Error::Parse(_) | Error::Data(_) | Error::Serde(_) => 2,
                Error::Resource(_) => 3,
                Error::Internal(_) | Error::Io(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}
