use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use ordhom::brute::{hom_search, pattern_contains_with, subgraph_search, Guards, Permutation};
use ordhom::collapse::{collapse_to_matching_with, hom_to_matching_fpt_with, CollapseOptions, FptConfig};
use ordhom::cores::{decide_core, find_core};
use ordhom::dot::to_dot;
use ordhom::factor::{collapse_h0, hom_h0_fpt_with};
use ordhom::format::{parse_ograph, write_ograph, write_ograph_annotated, ColorTable, ParsedGraph};
use ordhom::generate::{enumerate_all, generate, EnumFamily, Family, GenSpec, Instance, ManifestEntry};
use ordhom::reduction::{
    perm_to_gadget_matching, perm_to_separated_matching, verify_reduction_hom_with, verify_reduction_sub_with,
};
use ordhom::report::ResultEnvelope;
use ordhom::{Error, OrderedGraph, OrderedMatching};

use crate::{Algo, Command, DecisionOutput, GenArgs, GenFamily, ReductionKind};

const YES: u8 = 0;
const NO: u8 = 1;
const USAGE: u8 = 2;
const GUARD: u8 = 3;

/// Exit code for an error that escaped a command.
pub fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::SizeLimitExceeded { .. }) => GUARD,
        _ => USAGE,
    }
}

fn guards() -> Result<Guards> {
    match std::env::var("ORDHOM_GUARD") {
        Ok(spec) => Guards::parse_overrides(&spec).context("invalid ORDHOM_GUARD"),
        Err(_) => Ok(Guards::default()),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path, colors: &mut ColorTable) -> Result<ParsedGraph> {
    let text = read_text(path)?;
    parse_ograph(&text, colors).with_context(|| format!("in {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A permutation literal such as `"2 1 3"`, or a file holding one.
fn permutation_arg(arg: &str) -> Result<Permutation> {
    let text = if Path::new(arg).is_file() {
        read_text(Path::new(arg))?
    } else {
        arg.to_owned()
    };
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ");
    body.parse().with_context(|| format!("invalid permutation `{arg}`"))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

struct Decision {
    problem: &'static str,
    answer: bool,
    witness: Option<Vec<usize>>,
    nodes: u64,
    detail: Vec<(String, String)>,
}

impl Decision {
    fn new(problem: &'static str, answer: bool, witness: Option<Vec<usize>>, nodes: u64) -> Self {
        Decision {
            problem,
            answer,
            witness,
            nodes,
            detail: Vec::new(),
        }
    }

    fn detail(mut self, key: &str, value: impl ToString) -> Self {
        self.detail.push((key.to_owned(), value.to_string()));
        self
    }

    fn print(self, out: DecisionOutput, started: Instant) -> Result<u8> {
        let code = if self.answer { YES } else { NO };
        if out.json {
            let mut env = ResultEnvelope::new(self.problem, self.answer).with_witness(self.witness);
            env.stats.elapsed_ms = started.elapsed().as_millis() as u64;
            env.stats.nodes_explored = self.nodes;
            for (k, v) in self.detail {
                env = env.with_detail(k, v);
            }
            println!("{}", serde_json::to_string(&env)?);
        } else {
            println!("{}", yes_no(self.answer));
            for (k, v) in &self.detail {
                println!("{k}: {v}");
            }
            if let (true, Some(w)) = (out.witness, &self.witness) {
                println!("witness: {}", join(w));
            }
        }
        Ok(code)
    }
}

pub fn run(command: Command) -> Result<u8> {
    let started = Instant::now();
    match command {
        Command::Validate { graph } => validate(&graph),
        Command::Hom {
            g,
            h,
            algo,
            out,
            threads,
        } => hom(&g, &h, algo, threads)?.print(out, started),
        Command::Homf {
            g,
            template,
            h,
            algo,
            out,
            threads,
        } => homf(&g, &template, &h, algo, threads)?.print(out, started),
        Command::Sub { n, m, induced, out } => {
            let mut colors = ColorTable::new();
            let n = load(&n, &mut colors)?.graph;
            let m = load(&m, &mut colors)?.graph;
            let found = subgraph_search(&n, &m, induced, &guards()?)?;
            let problem = if induced { "induced-subgraph" } else { "subgraph" };
            Decision::new(problem, found.witness.is_some(), found.witness.map(|w| w.0), found.nodes).print(out, started)
        }
        Command::Pattern { pattern, host, json } => {
            let pattern = permutation_arg(&pattern)?;
            let host = permutation_arg(&host)?;
            let found = pattern_contains_with(&pattern, &host, &guards()?)?;
            if json {
                return Decision::new("pattern", found.is_some(), found, 0).print(
                    DecisionOutput {
                        witness: true,
                        json: true,
                    },
                    started,
                );
            }
            match found {
                Some(indices) => {
                    println!("YES");
                    println!("{}", join(&indices));
                    Ok(YES)
                }
                None => {
                    println!("NO");
                    Ok(NO)
                }
            }
        }
        Command::Reduce { kind, perm, output } => {
            let p = permutation_arg(&perm)?;
            let text = match kind {
                ReductionKind::Sub => write_ograph(&perm_to_separated_matching(&p), None),
                ReductionKind::Hom => {
                    let gm = perm_to_gadget_matching(&p);
                    write_ograph_annotated(&gm.graph, None, &gm.classes())
                }
            };
            emit(output.as_deref(), &text)?;
            Ok(YES)
        }
        Command::Collapse {
            graph,
            output,
            map,
            single_pass,
            colored,
        } => {
            let mut colors = ColorTable::new();
            let g = load(&graph, &mut colors)?.graph;
            let c = collapse_to_matching_with(
                &g,
                CollapseOptions {
                    color_aware: colored,
                    fixpoint: !single_pass,
                },
            );
            let summary = vec![
                format!("passes {}", c.passes),
                format!("blocks {}", c.blocks.iter().filter(|b| !b.is_trivial()).count()),
                format!("matching {}", yes_no(c.is_matching_image).to_lowercase()),
            ];
            let image = write_ograph(&c.image, colored.then_some(&colors));
            report_image(&summary, &image, map.then_some(&c.quotient_map.0[..]), output.as_deref())
        }
        Command::Collapsef {
            graph,
            template,
            output,
            map,
        } => {
            let mut colors = ColorTable::new();
            let g = load(&graph, &mut colors)?.graph;
            let h0 = load(&template, &mut colors)?.graph;
            let c = collapse_h0(&g, &h0)?;
            let summary = vec![
                format!("passes {}", c.passes),
                format!("blocks {}", c.blocks.len()),
                format!("copies {}", c.copy_count()),
            ];
            let image = write_ograph(&c.image, None);
            report_image(&summary, &image, map.then_some(&c.quotient_map.0[..]), output.as_deref())
        }
        Command::Core {
            graph,
            certify,
            decide,
            out,
            output,
        } => core(&graph, certify, decide, out, output.as_deref(), started),
        Command::Gen(args) => gen(&args),
        Command::CheckReduction {
            kind,
            pattern,
            host,
            max_pattern,
            max_host,
        } => check_reduction(kind, pattern, host, max_pattern, max_host),
        Command::ExportDot { graph, output } => {
            let parsed = load(&graph, &mut ColorTable::new())?;
            emit(output.as_deref(), &to_dot(&parsed.graph, Some(&parsed.classes)))?;
            Ok(YES)
        }
    }
}

fn validate(path: &Path) -> Result<u8> {
    let g = load(path, &mut ColorTable::new())?.graph;
    let separated = match g.is_separated() {
        Ok(Some(cut)) => format!("at {cut}"),
        Ok(None) => "no".into(),
        Err(_) => "n/a".into(),
    };
    println!(
        "ok: n={} edges={} colored={} matching={} separated={separated}",
        g.n(),
        g.edge_count(),
        yes_no(g.is_colored()).to_lowercase(),
        yes_no(g.is_matching()).to_lowercase(),
    );
    Ok(YES)
}

fn report_image(summary: &[String], image: &str, map: Option<&[usize]>, output: Option<&Path>) -> Result<u8> {
    match output {
        Some(path) => {
            emit(Some(path), image)?;
            for line in summary {
                println!("{line}");
            }
            if let Some(m) = map {
                println!("map {}", join(m));
            }
        }
        None => {
            for line in summary {
                println!("# {line}");
            }
            if let Some(m) = map {
                println!("# map {}", join(m));
            }
            print!("{image}");
        }
    }
    Ok(YES)
}

fn fpt_config(threads: usize) -> FptConfig {
    FptConfig {
        threads,
        fixpoint: true,
    }
}

/// Runs both solvers and refuses to answer if they disagree.
fn agree(problem: &'static str, fpt: Decision, brute: Decision) -> Result<Decision> {
    if fpt.answer != brute.answer {
        eprintln!(
            "discrepancy: fpt={} brute={}",
            yes_no(fpt.answer),
            yes_no(brute.answer)
        );
        bail!("{problem}: solvers disagree");
    }
    let nodes = brute.nodes;
    Ok(Decision::new(problem, fpt.answer, fpt.witness, nodes).detail(
        "solvers",
        format!("fpt={} brute={}", yes_no(fpt.answer), yes_no(brute.answer)),
    ))
}

fn hom(g: &Path, h: &Path, algo: Algo, threads: usize) -> Result<Decision> {
    let mut colors = ColorTable::new();
    let g = load(g, &mut colors)?.graph;
    let h = load(h, &mut colors)?.graph;
    let guards = guards()?;
    let fpt = || -> Result<Decision> {
        let m = OrderedMatching::new(h.clone()).context("the fpt solver needs H to be an ordered matching")?;
        let out = hom_to_matching_fpt_with(&g, &m, true, &fpt_config(threads));
        Ok(Decision::new("hom", out.witness.is_some(), out.witness.map(|w| w.0), out.subsets_examined))
    };
    let brute = || -> Result<Decision> {
        let out = hom_search(&g, &h, &guards)?;
        Ok(Decision::new("hom", out.witness.is_some(), out.witness.map(|w| w.0), out.nodes))
    };
    match algo {
        Algo::Auto if h.is_matching() => fpt(),
        Algo::Auto | Algo::Brute => brute(),
        Algo::Fpt => fpt(),
        Algo::Both => agree("hom", fpt()?, brute()?),
    }
}

fn homf(g: &Path, template: &Path, h: &Path, algo: Algo, threads: usize) -> Result<Decision> {
    let mut colors = ColorTable::new();
    let g = load(g, &mut colors)?.graph;
    let h0 = load(template, &mut colors)?.graph;
    let h = load(h, &mut colors)?.graph;
    let guards = guards()?;
    let fpt = || -> Result<Decision> {
        let out = hom_h0_fpt_with(&g, &h0, &h, &fpt_config(threads), &guards)?;
        Ok(Decision::new("homf", out.witness.is_some(), out.witness.map(|w| w.0), out.subsets_examined)
            .detail("copies", format!("{} -> {}", out.collapsed_copies, out.host_copies)))
    };
    let brute = || -> Result<Decision> {
        let out = hom_search(&g.uncolored(), &h.uncolored(), &guards)?;
        Ok(Decision::new("homf", out.witness.is_some(), out.witness.map(|w| w.0), out.nodes))
    };
    match algo {
        Algo::Auto | Algo::Fpt => fpt(),
        Algo::Brute => brute(),
        Algo::Both => agree("homf", fpt()?, brute()?),
    }
}

fn core(
    path: &Path,
    certify: bool,
    decide: bool,
    out: DecisionOutput,
    output: Option<&Path>,
    started: Instant,
) -> Result<u8> {
    let mut colors = ColorTable::new();
    let g = load(path, &mut colors)?.graph;
    let guards = guards()?;
    if decide {
        let d = decide_core(&g, &guards)?;
        return Decision::new("core-decide", d.non_surjective, d.witness.map(|w| w.0), d.nodes)
            .detail("method", d.method.name())
            .print(out, started);
    }
    let mut report = find_core(&g, &guards)?;
    let certified = if certify && !report.is_certified {
        match report.certify(&guards) {
            Ok(true) => "yes".to_owned(),
            Ok(false) => bail!("certification failed: the computed graph is not a core"),
            Err(Error::SizeLimitExceeded { size, limit, .. }) => {
                format!("skipped (size {size} above guard {limit})")
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        yes_no(report.is_certified).to_lowercase()
    };
    let text = write_ograph(&report.core, Some(&colors));
    if out.json {
        let mut env = ResultEnvelope::new("core", true)
            .with_witness(Some(report.to_core.0.clone()))
            .with_detail("method", report.method.name())
            .with_detail("certified", &certified)
            .with_detail("core", text.trim_end());
        env.stats.elapsed_ms = started.elapsed().as_millis() as u64;
        println!("{}", serde_json::to_string(&env)?);
        if let Some(path) = output {
            emit(Some(path), &text)?;
        }
        return Ok(YES);
    }
    let mut summary = vec![
        format!("method {}", report.method.name()),
        format!("certified {certified}"),
        format!("core-vertices {}", join(&report.inclusion)),
    ];
    if out.witness {
        summary.push(format!("to-core {}", join(&report.to_core)));
    }
    report_image(&summary, &text, None, output)
}

fn gen_family(args: &GenArgs) -> Result<(Family, &'static str)> {
    let need = |v: Option<usize>, flag: &str| v.with_context(|| format!("this family needs --{flag}"));
    let load_graph = |p: &Option<PathBuf>, flag: &str| -> Result<OrderedGraph> {
        let p = p.as_ref().with_context(|| format!("this family needs --{flag}"))?;
        Ok(load(p, &mut ColorTable::new())?.graph)
    };
    let (family, name) = match args.family {
        GenFamily::RandomGraph => (
            Family::RandomGraph {
                n: need(args.n, "n")?,
                edge_prob: args.edge_prob,
            },
            "random-graph",
        ),
        GenFamily::RandomMatching => (
            Family::RandomMatching {
                edges: need(args.edges, "edges")?,
                crossing_bias: args.crossing_bias,
            },
            "random-matching",
        ),
        GenFamily::Permutation => (Family::Permutation { size: need(args.size, "size")? }, "permutation"),
        GenFamily::Inflate => (
            Family::Inflate {
                core: load_graph(&args.core, "core")?,
                steps: args.steps,
                isolated: args.isolated,
            },
            "inflate",
        ),
        GenFamily::H0Matching => (
            Family::H0Matching {
                template: load_graph(&args.template, "template")?,
                copies: args.copies,
                interleave_bias: args.interleave_bias,
            },
            "h0-matching",
        ),
    };
    Ok(match args.palette {
        Some(palette) => (
            Family::Colored {
                base: Box::new(family),
                palette,
            },
            name,
        ),
        None => (family, name),
    })
}

fn gen(args: &GenArgs) -> Result<u8> {
    let (family, name) = gen_family(args)?;
    if args.count > 1 && args.out_dir.is_none() {
        bail!("--count above 1 needs --out-dir");
    }
    for i in 0..args.count {
        let seed = args.seed.wrapping_add(i);
        let instance = generate(&GenSpec {
            seed,
            family: family.clone(),
        })?;
        let (text, ext) = match instance {
            Instance::Graph(g) => (write_ograph(&g, None), "og"),
            Instance::Permutation(p) => (format!("{p}\n"), "perm"),
        };
        match &args.out_dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(format!("{name}-{seed}.{ext}"));
                emit(Some(&path), &text)?;
                let entry = ManifestEntry {
                    family: name.to_owned(),
                    key: seed,
                    path: path.display().to_string(),
                };
                println!("{entry}");
            }
            None => print!("{text}"),
        }
    }
    Ok(YES)
}

fn all_permutations(max: usize) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    for size in 1..=max {
        out.extend(enumerate_all(&EnumFamily::Permutations { size })?.filter_map(Instance::into_permutation));
    }
    Ok(out)
}

fn check_reduction(
    kind: ReductionKind,
    pattern: Option<String>,
    host: Option<String>,
    max_pattern: Option<usize>,
    max_host: Option<usize>,
) -> Result<u8> {
    let guards = guards()?;
    let pairs: Vec<(Permutation, Permutation)> = match (pattern, host, max_pattern, max_host) {
        (Some(p), Some(h), _, _) => vec![(permutation_arg(&p)?, permutation_arg(&h)?)],
        (_, _, Some(a), Some(b)) => {
            let hosts = all_permutations(b)?;
            all_permutations(a)?
                .into_iter()
                .flat_map(|p| hosts.iter().map(move |h| (p.clone(), h.clone())))
                .collect()
        }
        _ => bail!("give --pattern and --host, or --max-pattern and --max-host"),
    };
    let single = pairs.len() == 1;
    let mut contained = 0;
    for (p, h) in &pairs {
        let (agrees, line) = match kind {
            ReductionKind::Sub => {
                let v = verify_reduction_sub_with(p, h, &guards)?;
                contained += usize::from(v.pattern);
                (
                    v.agrees(),
                    format!(
                        "pattern={} subgraph={} induced={}",
                        yes_no(v.pattern),
                        yes_no(v.subgraph),
                        yes_no(v.induced_subgraph)
                    ),
                )
            }
            ReductionKind::Hom => {
                let v = verify_reduction_hom_with(p, h, &guards)?;
                contained += usize::from(v.pattern);
                (
                    v.agrees(),
                    format!("pattern={} hom={}", yes_no(v.pattern), yes_no(v.homomorphism)),
                )
            }
        };
        if !agrees {
            eprintln!("discrepancy for pattern `{p}` in `{h}`: {line}");
            return Ok(USAGE);
        }
        if single {
            println!("{line}");
        }
    }
    println!("agree: {} pairs ({contained} contained)", pairs.len());
    Ok(YES)
}
