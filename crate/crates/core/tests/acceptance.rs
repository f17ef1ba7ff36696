// SPDX-License-Identifier: Apache-2.0

//! The ten acceptance criteria. Prints one line per criterion and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fuzzy_cylinder::fuzzy::GroundSet;
use fuzzy_cylinder::laws::{
    complement_sweep, counterexample_sweep, indicator_sweep, path_sweep, psi_law_sweep, retraction_sweep,
    round_trip_sweep, sigma_sweep, SweepConfig, SweepReport,
};

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    ok: bool,
    detail: String,
}

fn judge(r: &SweepReport, elapsed: Duration, limit: Option<Duration>, extra: Option<String>) -> Outcome {
    let mut problems = Vec::new();
    if !r.passed() {
        problems.push(format!("{} failures, first: {}", r.failures.len(), r.failures[0]));
    }
    if let Some(l) = limit {
        if elapsed > l {
            problems.push(format!("took {:.2?}, limit {:.0?}", elapsed, l));
        }
    }
    problems.extend(extra);
    Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{} cases, {} checks, {:.2?}", r.cases, r.checks, elapsed)
        } else {
            problems.join("; ")
        },
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn main() -> ExitCode {
    // libtest passes flags such as --nocapture or a name filter; none apply
    let cfg = |cases| SweepConfig::new(SEED, cases);
    let mut lines: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut oracle_reports = Vec::new();

    let mut counter = Vec::new();
    let mut counter_time = Duration::ZERO;
    for n in 1..=4 {
        let (r, d) = timed(|| counterexample_sweep(&GroundSet::numbered(n).unwrap()));
        counter_time = counter_time.max(d);
        counter.push(r);
    }
    let failed: Vec<String> = counter.iter().flat_map(|r| r.failures.clone()).collect();
    let mut first = counter[0].clone();
    first.failures = failed;
    first.cases = counter.len();
    first.checks = counter.iter().map(|r| r.checks).sum();
    lines.push((
        1,
        "counterexample reproduction",
        judge(&first, counter_time, Some(Duration::from_secs(1)), None),
    ));
    oracle_reports.extend(counter);

    let (r, d) = timed(|| psi_law_sweep(&cfg(100)));
    lines.push((
        2,
        "Ψ* meet and join laws",
        judge(&r, d, Some(Duration::from_secs(30)), None),
    ));
    oracle_reports.push(r);

    let (r, d) = timed(|| round_trip_sweep(&cfg(500)));
    lines.push((3, "membership round trip", judge(&r, d, None, None)));
    oracle_reports.push(r);

    let (r, d) = timed(|| indicator_sweep(5));
    let extra = (r.cases != 62).then(|| format!("expected 62 subsets, saw {}", r.cases));
    lines.push((4, "indicator complement compatibility", judge(&r, d, None, extra)));
    oracle_reports.push(r);

    let (r, d) = timed(|| retraction_sweep(&cfg(24), 6));
    let anchors = r.notes.get("anchors").copied().unwrap_or(0);
    let mut extra = Vec::new();
    if anchors < 100 {
        extra.push(format!("only {anchors} anchors met the precondition"));
    }
    for case in ["case_start", "case_interior", "case_end"] {
        if r.notes.get(case).copied().unwrap_or(0) == 0 {
            extra.push(format!("{case} never exercised"));
        }
    }
    let extra = (!extra.is_empty()).then(|| extra.join("; "));
    lines.push((
        5,
        "retraction continuity certificates",
        judge(&r, d, Some(Duration::from_secs(30)), extra),
    ));
    oracle_reports.push(r);

    let (r, d) = timed(|| sigma_sweep(&cfg(40)));
    lines.push((6, "σ on subbasis members and meets", judge(&r, d, None, None)));
    oracle_reports.push(r);

    let (r, d) = timed(|| path_sweep(&cfg(200).with_grid(64)));
    let continuity: Vec<String> = r
        .failures
        .iter()
        .filter(|f| f.contains("non-open preimage"))
        .cloned()
        .collect();
    let mut identities = r.clone();
    identities.failures.retain(|f| !f.contains("non-open preimage"));
    lines.push((
        7,
        "path identities on the 1/64 grid",
        judge(&identities, d, Some(Duration::from_secs(60)), None),
    ));
    let mut cont = r.clone();
    cont.failures = continuity;
    lines.push((8, "continuity of generated paths", judge(&cont, d, None, None)));

    let (r, d) = timed(|| complement_sweep(&cfg(500)));
    let exact = r.notes.get("exact_pairs").copied().unwrap_or(0);
    let extra = (!(200..=300).contains(&exact)).then(|| format!("unbalanced pairs: {exact} exact of {}", r.cases));
    lines.push((9, "complement decision agrees with 1−F", judge(&r, d, None, extra)));

    let checks: usize = oracle_reports.iter().map(|r| r.oracle_checks).sum();
    let failures: usize = oracle_reports.iter().map(|r| r.oracle_failures).sum();
    let ok = failures == 0 && checks > 0;
    lines.push((
        10,
        "grid oracle agreement",
        Outcome {
            ok,
            detail: format!("{checks} sets compared at N=64, {failures} mismatches"),
        },
    ));

    let mut all = true;
    for (n, name, o) in &lines {
        all &= o.ok;
        println!(
            "criterion {n:>2} {:<4} {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
