//! Command-line surface for the immanants library: partition resources,
//! characters, immanant evaluation, reduction building/verification,
//! gadget search, and exhaustive property scans.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use immanants::characters::{
    character, character_on_product, character_table, domino_tiling_parity, theta_product,
};
use immanants::digraph::{format_digraph, immanant, parse_digraph};
use immanants::gadget::{builtin_gadget, format_gadget, parse_gadget, search_gadget, verify_gadget};
use immanants::matching::{format_bigraph, parse_bigraph};
use immanants::partition::{
    onion, resource_dichotomy, tetromino_number, two_core, Partition, SkewShape,
};
use immanants::rat;
use immanants::reduction::{
    build, certify, choose_route, format_metadata, parse_metadata, Route, Target,
};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "immanants", version, about = "Exact immanants, characters, and matching reductions")]
struct Cli {
    /// Cap the number of worker threads used by scans.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partition resource statistics and peel certificates.
    Partition {
        #[command(subcommand)]
        cmd: PartitionCmd,
    },
    /// Character values: `char <lambda> <rho>` or `char table <n>` (TSV).
    Char { lambda: String, rho: String },
    /// Exact immanant of a digraph file.
    Imm { lambda: String, graphfile: PathBuf },
    /// Onion cycle format with the given number of layers.
    Onion { lambda: String, layers: usize },
    /// Compile a matching-counting instance into an immanant instance.
    Reduce {
        #[command(subcommand)]
        cmd: ReduceCmd,
    },
    /// Certify a reduction directory produced by `reduce`.
    Verify { dir: PathBuf },
    /// Edge-gadget search and verification.
    Gadget {
        #[command(subcommand)]
        cmd: GadgetCmd,
    },
    /// Exhaustive property scans over all partitions up to a size.
    Scan {
        #[command(subcommand)]
        cmd: ScanCmd,
    },
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// b, d, z, w, s, the staircase core, and peel certificates.
    Stats { lambda: String },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Reduce #PerfMatch(H) to an immanant.
    Pm {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "auto")]
        route: String,
        bigraphfile: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reduce #Match(H, k) to an immanant coefficient.
    Match {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "auto")]
        route: String,
        bigraphfile: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Exhaustive search over the weight alphabet {1, -1}.
    Search,
    /// Verify a gadget fixture (the bundled one if no path is given).
    Verify { fixture: Option<PathBuf> },
}

#[derive(Subcommand)]
enum ScanCmd {
    /// Resource dichotomy: 8*s(lambda) >= b(lambda) or (w+1)^2 >= b(lambda).
    Dichotomy {
        #[arg(long)]
        max_boxes: usize,
    },
    /// Uniform domino-tiling parity of lambda / 2-core(lambda).
    Parity {
        #[arg(long)]
        max_boxes: usize,
    },
    /// chi_lambda(theta_s) != 0 for 0 <= s <= s(lambda).
    Theta {
        #[arg(long)]
        max_boxes: usize,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("failed to configure the thread pool")?;
    }
    match cli.cmd {
        Cmd::Partition { cmd: PartitionCmd::Stats { lambda } } => partition_stats(&lambda),
        Cmd::Char { lambda, rho } => char_cmd(&lambda, &rho),
        Cmd::Imm { lambda, graphfile } => imm_cmd(&lambda, &graphfile),
        Cmd::Onion { lambda, layers } => onion_cmd(&lambda, layers),
        Cmd::Reduce { cmd } => match cmd {
            ReduceCmd::Pm { lambda, route, bigraphfile, out } => {
                reduce_cmd(&lambda, None, &route, &bigraphfile, &out)
            }
            ReduceCmd::Match { lambda, k, route, bigraphfile, out } => {
                reduce_cmd(&lambda, Some(k), &route, &bigraphfile, &out)
            }
        },
        Cmd::Verify { dir } => verify_cmd(&dir),
        Cmd::Gadget { cmd } => match cmd {
            GadgetCmd::Search => gadget_search(),
            GadgetCmd::Verify { fixture } => gadget_verify(fixture.as_deref()),
        },
        Cmd::Scan { cmd } => match cmd {
            ScanCmd::Dichotomy { max_boxes } => scan_dichotomy(max_boxes),
            ScanCmd::Parity { max_boxes } => scan_parity(max_boxes),
            ScanCmd::Theta { max_boxes } => scan_theta(max_boxes),
        },
    }
}

fn parse_partition(s: &str) -> Result<Partition> {
    Partition::parse(s).map_err(|e| anyhow!("{e}"))
}

fn peel_boxes(boxes: &[(usize, usize)]) -> String {
    boxes
        .iter()
        .map(|(r, c)| format!("({r},{c})"))
        .collect::<Vec<_>>()
        .join("")
}

fn partition_stats(lambda: &str) -> Result<()> {
    let lambda = parse_partition(lambda)?;
    let stats = two_core(&lambda);
    let (s, tetromino_cert) = tetromino_number(&lambda);
    println!("lambda={lambda}");
    println!("b={}", stats.b);
    println!("d={}", stats.d);
    println!("w={}", stats.w);
    println!("z={}", stats.z);
    println!("s={s}");
    println!("staircase={}", stats.staircase);
    let domino_cert: Vec<String> = stats
        .peel_certificate
        .iter()
        .map(|p| peel_boxes(&p.boxes))
        .collect();
    println!("domino_certificate={}", domino_cert.join(";"));
    let tetro_cert: Vec<String> = tetromino_cert
        .iter()
        .map(|p| peel_boxes(&p.boxes))
        .collect();
    println!("tetromino_certificate={}", tetro_cert.join(";"));
    Ok(())
}

fn char_cmd(lambda: &str, rho: &str) -> Result<()> {
    if lambda == "table" {
        let n: usize = rho.parse().context("`char table <n>` needs an integer")?;
        let (classes, table) = character_table(n);
        let header: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
        println!("lambda\\rho\t{}", header.join("\t"));
        for (lam, row) in classes.iter().zip(table.iter()) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            println!("{lam}\t{}", cells.join("\t"));
        }
        return Ok(());
    }
    let lambda = parse_partition(lambda)?;
    let rho = parse_partition(rho)?;
    println!("{}", character(&lambda, &rho)?);
    Ok(())
}

fn imm_cmd(lambda: &str, graphfile: &Path) -> Result<()> {
    let lambda = parse_partition(lambda)?;
    let text = std::fs::read_to_string(graphfile)
        .with_context(|| format!("cannot read {}", graphfile.display()))?;
    let g = parse_digraph(&text)?;
    println!("{}", immanant(&lambda, &g)?);
    Ok(())
}

fn onion_cmd(lambda: &str, layers: usize) -> Result<()> {
    let lambda = parse_partition(lambda)?;
    let o = onion(&lambda, layers)?;
    println!("layers={}", o.layers);
    println!("theta={}", o.theta);
    println!("format={}", o.format);
    println!("capacity={}", o.accommodated_edges);
    Ok(())
}

fn reduce_cmd(
    lambda: &str,
    k: Option<usize>,
    route: &str,
    bigraphfile: &Path,
    out: &Path,
) -> Result<()> {
    let lambda = parse_partition(lambda)?;
    let text = std::fs::read_to_string(bigraphfile)
        .with_context(|| format!("cannot read {}", bigraphfile.display()))?;
    let h = parse_bigraph(&text)?;
    let route = match route {
        "auto" => choose_route(&h, k, &lambda)?,
        other => other.parse::<Route>()?,
    };
    let output = build(&h, k, &lambda, route)?;
    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))?;
    std::fs::write(out.join("graph.txt"), format_digraph(&output.g)?)?;
    std::fs::write(out.join("meta.txt"), format_metadata(&output, k))?;
    std::fs::write(out.join("host.txt"), format_bigraph(&h)?)?;
    println!("route={route}");
    println!("vertices={}", output.g.n());
    println!("c={}", output.c);
    match output.target {
        Target::Value => println!("target=value"),
        Target::Coefficient { x_deg, y_deg } => println!("target=coeff x^{x_deg} y^{y_deg}"),
    }
    if let Some(rho) = &output.rho {
        println!("rho={rho}");
    }
    println!("out={}", out.display());
    Ok(())
}

fn verify_cmd(dir: &Path) -> Result<()> {
    let read = |name: &str| -> Result<String> {
        std::fs::read_to_string(dir.join(name))
            .with_context(|| format!("cannot read {}", dir.join(name).display()))
    };
    let g = parse_digraph(&read("graph.txt")?)?;
    let (output, k) = parse_metadata(&read("meta.txt")?, g)?;
    let h = parse_bigraph(&read("host.txt")?)?;
    let report = certify(&output, &h, k)?;
    println!("lhs={}", report.lhs);
    println!("rhs_enumerated={}", report.rhs_enumerated);
    match &report.rhs_interpolated {
        Some(v) => println!("rhs_interpolated={v}"),
        None => println!("rhs_interpolated=skipped"),
    }
    let tristate = |v: Option<bool>| match v {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "n/a",
    };
    println!("format_filter={}", tristate(report.format_filter_ok));
    println!("consistent_only={}", tristate(report.consistent_only_ok));
    if !report.passed() {
        println!("verdict=fail");
        bail!("certification failed");
    }
    println!("verdict=pass");
    Ok(())
}

fn gadget_search() -> Result<()> {
    let gadget = search_gadget(&[rat(1), rat(-1)])?;
    print!("{}", format_gadget(&gadget));
    let report = verify_gadget(&gadget);
    if !report.passed() {
        bail!("search returned an unverified gadget (internal error)");
    }
    Ok(())
}

fn gadget_verify(fixture: Option<&Path>) -> Result<()> {
    let gadget = match fixture {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            parse_gadget(&text)?
        }
        None => builtin_gadget(),
    };
    let report = verify_gadget(&gadget);
    for (dv, sums) in &report.per_vector {
        let bits: Vec<String> = dv.iter().map(|&b| usize::from(b).to_string()).collect();
        let mut line = String::new();
        write!(line, "vector=({})", bits.join(",")).unwrap();
        for (key, net) in sums {
            let path = match key.path {
                Some((s, t, len)) => format!("path {s}->{t} len {len}, "),
                None => String::new(),
            };
            let cycles: Vec<String> = key.cycles.iter().map(|c| c.to_string()).collect();
            write!(line, " [{path}cycles ({})] = {net};", cycles.join(",")).unwrap();
        }
        println!("{line}");
    }
    for v in &report.violations {
        println!("violation: {v}");
    }
    if !report.passed() {
        bail!("gadget verification failed");
    }
    println!("verdict=pass");
    Ok(())
}

fn partitions_up_to(max_boxes: usize) -> Vec<Partition> {
    (1..=max_boxes).flat_map(Partition::all_of).collect()
}

fn report_scan(what: &str, checked: usize, violations: Vec<String>) -> Result<()> {
    let mut violations = violations;
    violations.sort();
    for v in &violations {
        println!("violation: {v}");
    }
    if !violations.is_empty() {
        bail!("{what}: {} violation(s) among {checked} cases", violations.len());
    }
    println!("{what}: {checked} cases, no violations");
    Ok(())
}

fn scan_dichotomy(max_boxes: usize) -> Result<()> {
    let all = partitions_up_to(max_boxes);
    let checked = all.len();
    let violations: Vec<String> = all
        .par_iter()
        .filter_map(|lam| match resource_dichotomy(lam) {
            Ok(_) => None,
            Err(e) => Some(format!("{lam}: {e}")),
        })
        .collect();
    report_scan("dichotomy", checked, violations)
}

fn scan_parity(max_boxes: usize) -> Result<()> {
    let all = partitions_up_to(max_boxes);
    let checked = all.len();
    let violations: Vec<String> = all
        .par_iter()
        .filter_map(|lam| {
            let stats = two_core(lam);
            let shape = match SkewShape::new(lam.clone(), stats.staircase.clone()) {
                Ok(s) => s,
                Err(e) => return Some(format!("{lam}: {e}")),
            };
            match domino_tiling_parity(&shape) {
                Ok(_) => None,
                Err(e) => Some(format!("{lam}: {e}")),
            }
        })
        .collect();
    report_scan("parity", checked, violations)
}

fn scan_theta(max_boxes: usize) -> Result<()> {
    let all = partitions_up_to(max_boxes);
    let checked = all.len();
    let violations: Vec<String> = all
        .par_iter()
        .flat_map_iter(|lam| {
            let (s_max, _) = tetromino_number(lam);
            let mut bad = Vec::new();
            for s in 0..=s_max {
                match theta_product(lam, s).and_then(|p| character_on_product(lam, &p)) {
                    Ok(v) if v != 0.into() => {}
                    Ok(_) => bad.push(format!("{lam}: chi(theta_{s}) = 0")),
                    Err(e) => bad.push(format!("{lam}: theta_{s}: {e}")),
                }
            }
            bad
        })
        .collect();
    report_scan("theta", checked, violations)
}
