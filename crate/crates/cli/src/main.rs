// SPDX-License-Identifier: Apache-2.0

//! `fuzzycyl`: JSON in, JSON out. Exit status 0 on success, 1 when a law or
//! verdict check fails, 2 on malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use fuzzy_cylinder::base::{check_pc_lpc, iota_x, slice_agrees};
use fuzzy_cylinder::connectivity::cylinder_connectivity;
use fuzzy_cylinder::cylinder::{
    counterexample, critical_gammas, psi_star, subbasis_realize, verify_psi_laws, CylinderOpen, SubbasisElem,
};
use fuzzy_cylinder::functor::complement_report;
use fuzzy_cylinder::fuzzy::{fz_is_topology, FuzzySet, FuzzyTopology, GroundSet, TopologyDoc};
use fuzzy_cylinder::laws::{path_sweep, run_all, SweepConfig, SweepReport, ORACLE_N};
use fuzzy_cylinder::oracle::{brute_psi, brute_subbasis, oracle_diff, GridOracle, OracleDiff};
use fuzzy_cylinder::retraction::{check_witness, continuity_witness, BoxWitnessDoc, CylPoint, WitnessVerdict};
use fuzzy_cylinder::sweep::Mode;
use fuzzy_cylinder::Rational;

#[derive(Parser)]
#[command(
    name = "fuzzycyl",
    version,
    about = "Cylinder-space checks for finite fuzzy topologies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TopologyArg {
    /// JSON file with `ground_set` and named `opens`
    #[arg(long)]
    topology: PathBuf,
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[arg(long, default_value_t = 100)]
    sweeps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid step for path comparisons, `1/k` with `k ≥ 8`
    #[arg(long, default_value = "1/64")]
    grid_step: String,
    /// Run cases one after another instead of on the thread pool
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fuzzy-topology axioms
    Validate(TopologyArg),
    /// Dump Ψ* of every open
    Cylinder(TopologyArg),
    /// Run every law sweep, plus the Ψ* laws on a given topology
    Laws {
        #[arg(long)]
        topology: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// The constant topology {0, 1, 1/3}, where complement and Ψ* disagree
    Counterexample {
        /// Comma-separated ground set
        #[arg(long, default_value = "x")]
        ground: String,
    },
    /// Path-connectivity of the cylinder, with a certificate
    Connectivity {
        #[command(flatten)]
        topo: TopologyArg,
        /// Levels per element joined by explicit paths
        #[arg(long, default_value_t = 4)]
        levels: u32,
    },
    /// Produce a continuity certificate for H, or replay one
    VerifyRetraction {
        #[command(flatten)]
        topo: TopologyArg,
        /// Certificate to replay; when absent one is generated
        #[arg(long, conflicts_with_all = ["t", "x", "alpha", "target"])]
        certificate: Option<PathBuf>,
        #[arg(long, required_unless_present = "certificate")]
        t: Option<String>,
        #[arg(long, required_unless_present = "certificate")]
        x: Option<String>,
        #[arg(long, required_unless_present = "certificate")]
        alpha: Option<String>,
        /// Subbasis member as JSON, e.g. `{"type":"tstar","open":"A","gamma":"1/8"}`
        #[arg(long, required_unless_present = "certificate")]
        target: Option<String>,
        /// Write the generated certificate here as well
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Path-kernel identity and continuity sweeps
    Paths(SweepArgs),
    /// Decide whether G = 1 − F through the path-inversion functor
    DecideComplement {
        #[command(flatten)]
        topo: TopologyArg,
        /// Name of F in the topology file
        #[arg(long)]
        f: String,
        /// Name of G in the topology file
        #[arg(long)]
        g: String,
    },
    /// Compare symbolic cylinder sets with grid rasterizations
    Oracle {
        #[command(flatten)]
        topo: TopologyArg,
        #[arg(long, default_value_t = ORACLE_N)]
        resolution: u32,
    },
}

/// Malformed input; reported with exit status 2.
struct Malformed(String);

impl<E: std::fmt::Display> From<E> for Malformed {
    fn from(e: E) -> Self {
        Malformed(e.to_string())
    }
}

type Outcome = Result<(Value, bool), Malformed>;

fn read_doc(path: &Path) -> Result<TopologyDoc, Malformed> {
    let text = fs::read_to_string(path).map_err(|e| Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Malformed(format!("{}: {e}", path.display())))
}

fn read_topology(path: &Path) -> Result<FuzzyTopology, Malformed> {
    Ok(read_doc(path)?.topology()?)
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, Malformed> {
    s.parse().map_err(|e| Malformed(format!("{what}: {e}")))
}

fn grid_from_step(step: &str) -> Result<u32, Malformed> {
    let r = parse_rational(step, "grid step")?;
    let bad = || Malformed(format!("grid step {step} is not 1/k with k ≥ 8"));
    match r.unit_fraction_denom() {
        Some(k) if k >= 8 => Ok(k),
        _ => Err(bad()),
    }
}

fn sweep_config(a: &SweepArgs) -> Result<SweepConfig, Malformed> {
    let mode = if a.sequential { Mode::Sequential } else { Mode::Parallel };
    Ok(SweepConfig::new(a.seed, a.sweeps)
        .with_mode(mode)
        .with_grid(grid_from_step(&a.grid_step)?))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// `X × I` when every fiber is the same set.
fn product_form(c: &CylinderOpen) -> Option<String> {
    let first = c.fibers().first()?;
    c.fibers().iter().all(|f| f == first).then(|| format!("X × {first}"))
}

fn validate(path: &Path) -> Outcome {
    let (ground, family) = read_doc(path)?.family()?;
    let r = fz_is_topology(&ground, &family);
    let witness = r.witness.as_ref().map(ToString::to_string);
    Ok((
        json!({ "valid": r.valid, "witness": r.witness, "explanation": witness }),
        r.valid,
    ))
}

fn cylinder(path: &Path) -> Outcome {
    let topo = read_topology(path)?;
    let opens: serde_json::Map<String, Value> = topo
        .opens()
        .iter()
        .map(|o| (o.name.clone(), to_value(&psi_star(&o.values).to_doc())))
        .collect();
    Ok((
        json!({ "ground_set": topo.ground().elements(), "psi_star": opens }),
        true,
    ))
}

fn laws(topology: Option<&Path>, a: &SweepArgs) -> Outcome {
    let cfg = sweep_config(a)?;
    let mut out = serde_json::Map::new();
    let mut ok = true;
    if let Some(p) = topology {
        let topo = read_topology(p)?;
        let r = verify_psi_laws(&topo)?;
        ok &= r.passed;
        out.insert("topology".into(), to_value(&r));
    }
    let reports = run_all(cfg.seed, cfg.cases, cfg.mode, cfg.grid);
    ok &= reports.iter().all(SweepReport::passed);
    out.insert("sweeps".into(), to_value(&reports));
    out.insert("passed".into(), Value::Bool(ok));
    Ok((Value::Object(out), ok))
}

fn counterexample_cmd(ground: &str) -> Outcome {
    let g = GroundSet::new(ground.split(',').map(str::trim))?;
    let r = counterexample(&g)?;
    Ok((
        json!({
            "topology": r.topology,
            "psi": product_form(&r.psi),
            "complement_of_psi": product_form(&r.complement_of_psi),
            "psi_of_complement": product_form(&r.psi_of_complement),
            "verdict": r.verdict,
            "sets": r,
        }),
        true,
    ))
}

fn connectivity(path: &Path, levels: u32) -> Outcome {
    if levels == 0 {
        return Err(Malformed("--levels must be positive".into()));
    }
    let topo = read_topology(path)?;
    let base = check_pc_lpc(&topo)?;
    let ft = iota_x(&topo)?;
    let cyl = cylinder_connectivity(&topo, levels)?;
    let holds = cyl.certificate.holds();
    Ok((
        json!({
            "iota_x": ft.to_doc(),
            "slice_agrees": slice_agrees(&topo)?,
            "pc": base.pc,
            "lpc": base.lpc,
            "components": base.components,
            "certificate": cyl.certificate,
            "certificate_holds": holds,
        }),
        holds,
    ))
}

fn verify_retraction(
    path: &Path,
    certificate: Option<&Path>,
    anchor: (Option<&str>, Option<&str>, Option<&str>, Option<&str>),
    out: Option<&Path>,
) -> Outcome {
    let topo = read_topology(path)?;
    if let Some(c) = certificate {
        let text = fs::read_to_string(c).map_err(|e| Malformed(format!("{}: {e}", c.display())))?;
        let doc: BoxWitnessDoc = serde_json::from_str(&text)?;
        let w = doc.resolve(topo.ground())?;
        let verdict = check_witness(&w, &topo);
        // regenerate from the anchor and compare field by field
        let regenerated = continuity_witness(&w.anchor_t, &w.anchor, &w.target, &topo)
            .ok()
            .map(|r| r.to_doc());
        let matches = regenerated.as_ref() == Some(&doc);
        let ok = verdict == WitnessVerdict::Valid;
        return Ok((json!({ "verdict": verdict, "matches_regenerated": matches }), ok));
    }
    let (Some(t), Some(x), Some(alpha), Some(target)) = anchor else {
        return Err(Malformed("anchor needs --t, --x, --alpha and --target".into()));
    };
    let t = parse_rational(t, "t")?;
    let p = CylPoint::new(x, parse_rational(alpha, "alpha")?)?;
    let target: SubbasisElem = serde_json::from_str(target)?;
    let w = continuity_witness(&t, &p, &target, &topo)?;
    let doc = w.to_doc();
    if let Some(o) = out {
        let text = serde_json::to_string_pretty(&doc)?;
        fs::write(o, text + "\n").map_err(|e| Malformed(format!("{}: {e}", o.display())))?;
    }
    let verdict = check_witness(&w, &topo);
    let ok = verdict == WitnessVerdict::Valid;
    Ok((json!({ "certificate": doc, "verdict": verdict }), ok))
}

fn paths(a: &SweepArgs) -> Outcome {
    let r = path_sweep(&sweep_config(a)?);
    let ok = r.passed();
    Ok((to_value(&r), ok))
}

fn decide_complement(path: &Path, f: &str, g: &str) -> Outcome {
    let (ground, family) = read_doc(path)?.family()?;
    let find = |name: &str| -> Result<FuzzySet, Malformed> {
        family
            .iter()
            .find(|m| m.name == name)
            .map(|m| m.values.clone())
            .ok_or_else(|| Malformed(format!("no member named {name:?} over {:?}", ground.elements())))
    };
    let r = complement_report(&find(f)?, &find(g)?)?;
    let ok = r.inversion == r.direct;
    Ok((json!({ "is_complement": r.inversion, "report": r }), ok))
}

#[derive(Serialize)]
struct Mismatch {
    set: String,
    #[serde(flatten)]
    diff: OracleDiff,
}

fn oracle(path: &Path, n: u32) -> Outcome {
    let topo = read_topology(path)?;
    let mut compared = 0usize;
    let mut mismatches = Vec::new();
    let mut compare = |label: String, sym: &CylinderOpen, brute: &GridOracle| -> Result<(), Malformed> {
        compared += 1;
        if let Some(diff) = oracle_diff(sym, brute)? {
            mismatches.push(Mismatch { set: label, diff });
        }
        Ok(())
    };
    let opens = topo.opens();
    let psis: Vec<CylinderOpen> = opens.iter().map(|o| psi_star(&o.values)).collect();
    let brutes = opens
        .iter()
        .map(|o| brute_psi(&o.values, n))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..opens.len() {
        compare(format!("Ψ*({})", opens[i].name), &psis[i], &brutes[i])?;
        for j in i + 1..opens.len() {
            let (a, b) = (&opens[i].name, &opens[j].name);
            compare(
                format!("Ψ*({a}) ∩ Ψ*({b})"),
                &psis[i].intersect(&psis[j])?,
                &brutes[i].intersect(&brutes[j])?,
            )?;
            compare(
                format!("Ψ*({a}) ∪ Ψ*({b})"),
                &psis[i].union(&psis[j])?,
                &brutes[i].union(&brutes[j])?,
            )?;
        }
        for gamma in critical_gammas(&opens[i].values) {
            let e = SubbasisElem::tstar(opens[i].name.clone(), gamma);
            compare(
                e.to_string(),
                &subbasis_realize(&e, &topo)?,
                &brute_subbasis(&e, &topo, n)?,
            )?;
        }
    }
    let ok = mismatches.is_empty();
    Ok((
        json!({ "resolution": n, "compared": compared, "mismatches": mismatches }),
        ok,
    ))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(a) => validate(&a.topology),
        Command::Cylinder(a) => cylinder(&a.topology),
        Command::Laws { topology, sweep } => laws(topology.as_deref(), &sweep),
        Command::Counterexample { ground } => counterexample_cmd(&ground),
        Command::Connectivity { topo, levels } => connectivity(&topo.topology, levels),
        Command::VerifyRetraction {
            topo,
            certificate,
            t,
            x,
            alpha,
            target,
            out,
        } => verify_retraction(
            &topo.topology,
            certificate.as_deref(),
            (t.as_deref(), x.as_deref(), alpha.as_deref(), target.as_deref()),
            out.as_deref(),
        ),
        Command::Paths(a) => paths(&a),
        Command::DecideComplement { topo, f, g } => decide_complement(&topo.topology, &f, &g),
        Command::Oracle { topo, resolution } => {
            if resolution < 2 {
                return Err(Malformed(format!("resolution {resolution} is below 2")));
            }
            oracle(&topo.topology, resolution)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((value, ok)) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(
                std::io::stdout(),
                "{}",
                serde_json::to_string_pretty(&value).expect("json")
            );
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Malformed(msg)) => {
            let _ = writeln!(std::io::stdout(), "{}", json!({ "error": msg }));
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
