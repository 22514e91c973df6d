mod config;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Profile, RunConfig};
use unital_ramsey::field::FieldSpec;
use unital_ramsey::graph::Graph;
use unital_ramsey::independent_sets::independence_number_with;
use unital_ramsey::k4free::{randomize, AuditParams, K4FreeGraph, K4Mode};
use unital_ramsey::pipeline::{
    blowup_multicolor, certify_witness, expected_count_report, reverify, sample_vertices, to_canonical_json,
    verify_coloring, Certificate, CertifyOptions,
};
use unital_ramsey::plane::ProjectivePlane;
use unital_ramsey::report::Report;
use unital_ramsey::secant_graph::{build_secant_graph, SecantGraph};
use unital_ramsey::streams::parse_seed;
use unital_ramsey::unital::{build_unital, OnanMode, Unital};

#[derive(Parser)]
#[command(name = "unital-ramsey", version, about = "K4-free graphs from Hermitian unitals")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the configuration).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).ok_or_else(|| format!("`{s}` is not a 64-bit decimal or 0x-hex seed"))
}

#[derive(Subcommand)]
enum Command {
    /// Build the unital and its secant graph, with dumps and a base report.
    Build {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_parser = seed_arg)]
        seed: Option<u64>,
        /// Also search for O'Nan configurations.
        #[arg(long)]
        onan: bool,
        /// Skip writing graph.edges.
        #[arg(long)]
        no_edges: bool,
    },
    /// Randomize the cliques into complete bipartite graphs and check K4-freeness.
    Randomize {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_parser = seed_arg)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "structural")]
        mode: ModeArg,
        #[arg(long)]
        no_edges: bool,
    },
    /// Edge counts of random vertex subsets of the randomized graph.
    Audit {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_parser = seed_arg)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Sample a witness subgraph and certify its independence bound.
    Witness {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_parser = seed_arg)]
        seed: Option<u64>,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        t: usize,
    },
    /// Multicolor construction from random permutations of a blowup.
    Blowup {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_parser = seed_arg)]
        seed: Option<u64>,
        /// Base graph edge list.
        #[arg(long)]
        base: PathBuf,
        /// Independence parameter of the base graph; defaults to its independence number.
        #[arg(long)]
        s: Option<u64>,
    },
    /// Re-verify a certificate against an exported graph.
    Verify { certificate: PathBuf, graph: PathBuf },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Structural,
    Exhaustive,
}

struct Ctx {
    cfg: RunConfig,
    out: PathBuf,
}

impl Ctx {
    fn q(&self, q: Option<u64>) -> Result<u64> {
        match q.or(self.cfg.q) {
            Some(q) => Ok(q),
            None => bail!("no --q given and none in the configuration"),
        }
    }

    fn seed(&self, seed: Option<u64>) -> u64 {
        seed.unwrap_or(self.cfg.master_seed)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write(&self, name: &str, text: &str) -> Result<()> {
        let p = self.path(name);
        fs::write(&p, text).with_context(|| format!("writing {}", p.display()))
    }

    fn write_graph(&self, name: &str, g: &Graph) -> Result<()> {
        let p = self.path(name);
        let mut w = BufWriter::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?);
        g.write_edge_list(&mut w)?;
        w.flush()?;
        Ok(())
    }

    fn certify_options(&self, modulus: String, master_seed: u64) -> CertifyOptions {
        CertifyOptions {
            k4_cap: self.cfg.caps.k4_cap,
            alpha_cap: self.cfg.caps.alpha_cap,
            node_budget: self.cfg.caps.node_budget,
            profile: self.cfg.profile.name().into(),
            modulus,
            master_seed,
        }
    }
}

struct Built {
    field: FieldSpec,
    unital: Unital,
    graph: SecantGraph,
}

fn construct(q: u64) -> Result<Built> {
    let field = FieldSpec::for_q(q)?;
    let plane = ProjectivePlane::new(field.clone());
    let unital = build_unital(&plane)?;
    let graph = build_secant_graph(&unital)?;
    Ok(Built { field, unital, graph })
}

fn checks_json(r: &Report) -> serde_json::Value {
    serde_json::to_value(&r.checks).unwrap()
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

fn build(ctx: &Ctx, q: Option<u64>, seed: Option<u64>, onan: bool, no_edges: bool) -> Result<bool> {
    let q = ctx.q(q)?;
    let seed = ctx.seed(seed);
    let b = construct(q)?;
    let p = b.graph.params();
    let design = b.unital.verify_design();
    let base = b.graph.verify_base_properties(ctx.cfg.caps.k4_cap);
    let srg = b.graph.srg_check(ctx.cfg.caps.pair_budget, seed);
    let mut passed = design.all_passed() && base.all_passed() && srg.passed();

    let onan_json = if onan {
        let mode = if q <= 3 { OnanMode::Exhaustive } else { OnanMode::Pruned };
        let s = b.unital.find_onan_configurations(mode, ctx.cfg.caps.onan_budget)?;
        passed &= s.witnesses.is_empty();
        json!({"mode": mode, "complete": s.complete, "examined": s.examined, "found": s.witnesses.len()})
    } else {
        serde_json::Value::Null
    };

    ctx.write("unital.txt", &b.unital.dump())?;
    ctx.write("cliques.txt", &b.graph.cliques_dump())?;
    if !no_edges {
        ctx.write_graph("graph.edges", b.graph.graph())?;
    }
    let report = json!({
        "command": "build",
        "profile": ctx.cfg.profile.name(),
        "q": q,
        "seed": seed,
        "modulus": b.field.modulus_string(),
        "counts": {
            "points": b.unital.n_points(),
            "secants": b.unital.secants().len(),
            "tangents": b.unital.tangents().len(),
            "n": b.graph.n(),
            "d": p.degree,
            "cliques": b.graph.cliques().len(),
            "edges": b.graph.graph().edge_count(),
        },
        "design": checks_json(&design),
        "graph": checks_json(&base),
        "srg": srg,
        "onan": onan_json,
        "passed": passed,
    });
    ctx.write("report.json", &to_canonical_json(&report))?;
    println!(
        "q={q}: {} unital points, {} secants, n={}, d={}, {}",
        b.unital.n_points(),
        b.unital.secants().len(),
        b.graph.n(),
        p.degree,
        if passed { "all checks passed" } else { "CHECKS FAILED" }
    );
    Ok(passed)
}

fn sidecar(q: u64, modulus: &str, h: &K4FreeGraph, edges: &Graph) -> serde_json::Value {
    json!({
        "q": q,
        "seed": h.seed(),
        "modulus": modulus,
        "counts": {"n": edges.n(), "edges": edges.edge_count()},
        "masks_digest": h.masks_digest(),
        "edge_digest": edges.edge_digest(),
    })
}

fn randomize_cmd(ctx: &Ctx, q: Option<u64>, seed: Option<u64>, mode: ModeArg, no_edges: bool) -> Result<bool> {
    let q = ctx.q(q)?;
    let seed = ctx.seed(seed);
    let b = construct(q)?;
    let h = randomize(&b.graph, seed);
    let edges = h.materialize();
    let (mode, report) = match mode {
        ModeArg::Exhaustive if edges.n() <= ctx.cfg.caps.k4_cap => (K4Mode::Exhaustive, h.verify_exhaustive(&edges)),
        _ => (K4Mode::Structural, h.verify_structural(&edges)),
    };
    if !no_edges {
        ctx.write_graph("hstar.edges", &edges)?;
    }
    let modulus = b.field.modulus_string();
    ctx.write("hstar.json", &to_canonical_json(&sidecar(q, &modulus, &h, &edges)))?;
    let out = json!({
        "command": "randomize",
        "profile": ctx.cfg.profile.name(),
        "q": q,
        "seed": seed,
        "mode": mode,
        "edges": edges.edge_count(),
        "k4_free": checks_json(&report),
        "passed": report.all_passed(),
    });
    ctx.write("report.json", &to_canonical_json(&out))?;
    println!(
        "q={q} seed={seed}: {} edges, K4 check ({mode:?}) {}",
        edges.edge_count(),
        if report.all_passed() { "passed" } else { "FAILED" }
    );
    Ok(report.all_passed())
}

fn audit_cmd(ctx: &Ctx, q: Option<u64>, seed: Option<u64>, sizes: &[usize], trials: usize) -> Result<bool> {
    let q = ctx.q(q)?;
    let seed = ctx.seed(seed);
    let b = construct(q)?;
    let h = randomize(&b.graph, seed);
    let (m_prime, floor) = ctx.cfg.audit_thresholds(q);
    let audit = h.edge_density_audit(sizes, trials, seed, AuditParams { m_prime, floor })?;
    let note = (!ctx.cfg.in_paper_regime(q))
        .then(|| format!("q = {q} is below the asymptotic range; results are reported, not asserted"));
    let out = json!({
        "command": "audit",
        "profile": ctx.cfg.profile.name(),
        "q": q,
        "seed": seed,
        "audit": audit,
        "note": note,
        "passed": audit.passed(),
    });
    ctx.write("report.json", &to_canonical_json(&out))?;
    for s in &audit.sizes {
        println!(
            "|X|={:>6}  min e(X)={:>8}  mean e(X)={:>12.2}  min e(X)q/|X|^2={:.5}{}",
            s.size,
            s.min_edges,
            s.mean_edges,
            s.scaled_quantiles[0],
            if s.asserted { if s.passed { "  ok" } else { "  BELOW FLOOR" } } else { "" }
        );
    }
    Ok(audit.passed())
}

fn witness_cmd(ctx: &Ctx, q: Option<u64>, seed: Option<u64>, p: f64, t: usize) -> Result<bool> {
    let q = ctx.q(q)?;
    let seed = ctx.seed(seed);
    let b = construct(q)?;
    let h = randomize(&b.graph, seed);
    let s = sample_vertices(&h, p, seed)?;
    let mut cert = certify_witness(&h, &s, t, &ctx.certify_options(b.field.modulus_string(), seed));
    if ctx.cfg.profile == Profile::Paper && !ctx.cfg.in_paper_regime(q) {
        cert.notes.push(format!("q = {q} is below the asymptotic range of the paper profile"));
    }
    cert.timestamp = timestamp();
    ctx.write_graph("witness.edges", &s.graph)?;
    ctx.write("certificate.json", &cert.to_json())?;
    println!(
        "q={q} seed={seed}: {} vertices, {} edges, independence {} {} (t={t}), verdict {:?}",
        s.graph.n(),
        s.graph.edge_count(),
        if cert.alpha.mode == unital_ramsey::pipeline::AlphaMode::Exact { "=" } else { ">=" },
        cert.alpha.value,
        cert.verdict
    );
    for f in &s.flags {
        eprintln!("warning: {f}");
    }
    Ok(true)
}

fn blowup_cmd(ctx: &Ctx, k: u8, r: usize, t: usize, seed: Option<u64>, base: &Path, s: Option<u64>) -> Result<bool> {
    let seed = ctx.seed(seed);
    let text = fs::read_to_string(base).with_context(|| format!("reading {}", base.display()))?;
    let g = Graph::parse_edge_list(&text)?;
    let s = match s {
        Some(s) => s,
        None => independence_number_with(&g, ctx.cfg.caps.alpha_cap, ctx.cfg.caps.node_budget)?.size as u64,
    };
    let c = blowup_multicolor(&g, r, k, seed)?;
    let report = verify_coloring(&c, t, ctx.cfg.caps.k4_cap, ctx.cfg.caps.alpha_cap, ctx.cfg.caps.node_budget);
    let expected = expected_count_report(g.n() as u64, s, r as u64, t as u64, k as u32);

    let mut lines = String::new();
    for u in 0..c.n as u32 {
        for v in u + 1..c.n as u32 {
            lines.push_str(&format!("{u} {v} {}\n", c.color(u, v)));
        }
    }
    ctx.write("coloring.txt", &lines)?;
    let out = json!({
        "command": "blowup",
        "profile": ctx.cfg.profile.name(),
        "seed": seed,
        "k": k,
        "r": r,
        "t": t,
        "base_vertices": g.n(),
        "vertices": c.n,
        "class_sizes": c.class_sizes(),
        "checks": checks_json(&report),
        "expected_independent_sets": expected,
        "passed": report.all_passed(),
    });
    ctx.write("report.json", &to_canonical_json(&out))?;
    for ch in &report.checks {
        println!("{:<24} {}  {}", ch.name, if ch.passed { "ok  " } else { "FAIL" }, ch.detail.as_deref().unwrap_or(""));
    }
    println!("expected independent {t}-sets ~ {:.4e} (below one: {})", expected.approx, expected.below_one);
    Ok(true)
}

fn verify_cmd(ctx: &Ctx, certificate: &Path, graph: &Path) -> Result<bool> {
    let cert = Certificate::from_json(&fs::read_to_string(certificate).with_context(|| format!("reading {}", certificate.display()))?)?;
    let g = Graph::parse_edge_list(&fs::read_to_string(graph).with_context(|| format!("reading {}", graph.display()))?)?;
    let b = construct(cert.q)?;
    let mut mismatches = Vec::new();
    if b.field.modulus_string() != cert.modulus {
        mismatches.push(format!("modulus: certificate has {}, rebuilt {}", cert.modulus, b.field.modulus_string()));
    }
    let h = randomize(&b.graph, cert.master_seed);
    let mut opts = ctx.certify_options(cert.modulus.clone(), cert.master_seed);
    opts.profile = cert.profile.clone();
    mismatches.extend(reverify(&cert, &g, Some(&h), &opts));
    if mismatches.is_empty() {
        println!("certificate verified: verdict {:?}", cert.verdict);
        Ok(true)
    } else {
        for m in &mismatches {
            eprintln!("mismatch: {m}");
        }
        Ok(false)
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let out = cli.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let ctx = Ctx { cfg, out };
    match cli.command {
        Command::Build { q, seed, onan, no_edges } => build(&ctx, q, seed, onan, no_edges),
        Command::Randomize { q, seed, mode, no_edges } => randomize_cmd(&ctx, q, seed, mode, no_edges),
        Command::Audit { q, seed, sizes, trials } => audit_cmd(&ctx, q, seed, &sizes, trials),
        Command::Witness { q, seed, p, t } => witness_cmd(&ctx, q, seed, p, t),
        Command::Blowup { k, r, t, seed, base, s } => blowup_cmd(&ctx, k, r, t, seed, &base, s),
        Command::Verify { certificate, graph } => verify_cmd(&ctx, &certificate, &graph),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
