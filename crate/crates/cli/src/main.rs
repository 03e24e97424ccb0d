//! `hmfw`: weight combinatorics for mod-p Hilbert modular forms.
//!
//! Subcommands: `derive` runs the full algebraic-weight derivation and
//! reconstruction on one weight, `reduce` divides a vector down to the
//! minimal cone, `check` reports the theorem hypotheses, `sweep` runs the
//! exhaustive verification harness, and `example` replays a built-in
//! worked example against golden values.
//!
//! Exit codes: 0 verified/ok, 1 failed check or golden mismatch, 2 input
//! error, 3 undecidable under the symbol bounds.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hmf_harness::{profiles_up_to, run_sweep, write_reports, Cap, Check, SweepConfig};
use hmf_weights::{
    reconstruct, reduce_to_min_cone, AuxSymbol, Context, EmbeddingSet, Error, OrderPolicy,
    PrimeSpec, Tau, Verdict, Weight,
};

#[derive(Parser)]
#[command(
    name = "hmfw",
    version,
    about = "Weight combinatorics for mod-p Hilbert modular forms: derive \
             algebraic weight families, reduce to the minimal cone, check \
             hypotheses, and run verification sweeps."
)]
struct Cli {
    /// Output format (default: $HMFW_FORMAT, then pretty).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the algebraic weight family and verify the reconstruction.
    Derive(WeightArgs),
    /// Check the theorem hypotheses for a weight.
    Check(WeightArgs),
    /// Divide partial Hasse invariants out of a vector until it lies in
    /// the minimal cone.
    Reduce(VectorArgs),
    /// Enumerate small weights and verify the pipeline identities on all
    /// of them.
    Sweep(SweepArgs),
    /// Replay a built-in worked example against its golden values.
    Example {
        /// quadratic-cubic | k2-equals-2 | eight-tuple
        name: String,
    },
}

#[derive(Args)]
struct WeightArgs {
    /// Prime: a number like `5`, or `sym:pmin=2` for a symbolic prime.
    #[arg(long)]
    p: String,
    /// Frobenius orbit degrees, comma-separated (e.g. `3` or `2,3`).
    #[arg(long)]
    orbits: String,
    /// Weight vector k: comma-separated terms over INT, p, κ
    /// (e.g. `1,1,κ` or `0,p+1,κ`). `kappa` is accepted for κ.
    #[arg(long)]
    k: String,
    /// Optional twist vector l in the same grammar; defaults to zero.
    #[arg(long)]
    l: Option<String>,
    /// Lower bound for κ; required whenever k or l mentions it.
    #[arg(long)]
    kappa_min: Option<i64>,
    /// Treat the relevant Hecke eigenvalue as vanishing.
    #[arg(long)]
    assume_hecke_vanishing: bool,
}

#[derive(Args)]
struct VectorArgs {
    #[arg(long)]
    p: String,
    #[arg(long)]
    orbits: String,
    /// Vector to reduce, in the coefficient grammar.
    #[arg(long)]
    k: String,
    #[arg(long)]
    kappa_min: Option<i64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Primes to sweep, comma-separated.
    #[arg(long, default_value = "2,3,5,7")]
    p: String,
    /// Sweep all orbit profiles with total degree up to this bound.
    #[arg(long, default_value_t = 3)]
    max_d: usize,
    /// Per-entry bound: `auto` (p+2) or a number.
    #[arg(long, default_value = "auto")]
    cap: String,
    /// Checks to run, comma-separated: roundtrip, confluence, pattern.
    #[arg(long, default_value = "roundtrip,confluence,pattern")]
    checks: String,
    /// Directory for summary.json and counterexamples.jsonl.
    #[arg(long, default_value = "sweep-out")]
    out: PathBuf,
    /// Base seed for the confluence check's random division orders.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random division orders per input in the confluence check.
    #[arg(long, default_value_t = 4)]
    trials: usize,
}

fn main() {
    // Die silently on a closed pipe (`hmfw ... | head`) like other unix
    // filters; the default Rust handler turns EPIPE into a panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let format = cli.format.unwrap_or_else(|| {
        match std::env::var("HMFW_FORMAT").as_deref() {
            Ok("json") => Format::Json,
            Ok("tsv") => Format::Tsv,
            _ => Format::Pretty,
        }
    });
    let code = match &cli.command {
        Command::Derive(args) => cmd_derive(args, format),
        Command::Check(args) => cmd_check(args, format),
        Command::Reduce(args) => cmd_reduce(args, format),
        Command::Sweep(args) => cmd_sweep(args, format),
        Command::Example { name } => cmd_example(name, format),
    };
    let code = code.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        match e {
            Error::Undecidable(_) => 3,
            _ => 2,
        }
    });
    std::process::exit(code);
}

fn build_context(p: &str, orbits: &str, kappa_min: Option<i64>) -> Result<Context, Error> {
    let degrees: Vec<usize> = orbits
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad orbit degree `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let prime = PrimeSpec::parse(p)?;
    let aux = kappa_min.map(|min| AuxSymbol {
        name: "κ".to_string(),
        min,
    });
    Context::new(EmbeddingSet::new(&degrees)?, prime, aux)
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn print_tsv(rows: &[(String, String)]) {
    for (key, value) in rows {
        println!("{key}\t{value}");
    }
}

fn csv(parts: &[String]) -> String {
    parts.join(",")
}

fn tau_set(set: &Option<BTreeSet<Tau>>) -> String {
    match set {
        Some(s) if s.is_empty() => "{}".to_string(),
        Some(s) => format!(
            "{{{}}}",
            s.iter().map(Tau::to_string).collect::<Vec<_>>().join(", ")
        ),
        None => "-".to_string(),
    }
}

fn context_rows(ctx: &Context, rows: &mut Vec<(String, String)>) {
    rows.push(("p".into(), ctx.prime.render()));
    rows.push((
        "orbits".into(),
        ctx.embeddings
            .orbit_degrees()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(","),
    ));
    if let Some(aux) = &ctx.aux {
        rows.push((format!("{}_min", aux.name), aux.min.to_string()));
    }
}

fn cmd_derive(args: &WeightArgs, format: Format) -> Result<i32, Error> {
    let ctx = build_context(&args.p, &args.orbits, args.kappa_min)?;
    let w = Weight::parse(&ctx, &args.k, args.l.as_deref())?;
    let report = reconstruct(&ctx, &w, args.assume_hecke_vanishing)?;

    match format {
        Format::Json => print_json(&report.to_json(&ctx)),
        Format::Tsv => {
            let mut rows = Vec::new();
            context_rows(&ctx, &mut rows);
            rows.push(("k".into(), csv(&report.input.k_strings(&ctx))));
            rows.push(("l".into(), csv(&report.input.l_strings(&ctx))));
            let h = &report.hypotheses;
            for (name, v) in [
                ("nonzero_nonalgebraic", h.nonzero_nonalgebraic),
                ("minimal_cone", h.minimal_cone),
                ("positive", h.positive),
                ("not_parallel_one", h.not_parallel_one),
                ("mtilde_not_one_mod_p", h.mtilde_not_one_mod_p),
            ] {
                rows.push((format!("hypothesis.{name}"), v.as_str().to_string()));
            }
            rows.push(("M".into(), tau_set(&report.m)));
            rows.push(("Mtilde".into(), tau_set(&report.mtilde)));
            if let Some(kp) = &report.kprime {
                rows.push(("kprime.k".into(), csv(&kp.k_strings(&ctx))));
                rows.push(("kprime.l".into(), csv(&kp.l_strings(&ctx))));
            }
            for (mu, wmu) in &report.kmu {
                rows.push((format!("kmu.{mu}.k"), csv(&wmu.k_strings(&ctx))));
                rows.push((format!("kmu.{mu}.l"), csv(&wmu.l_strings(&ctx))));
            }
            if let Some(kd) = &report.kdoubleprime {
                rows.push(("kdoubleprime".into(), csv(&ctx.render_vector(kd))));
            }
            for (tau, info) in &report.cases {
                rows.push((
                    format!("case.{tau}"),
                    format!(
                        "{} s={} t={} anchor={}",
                        info.case.as_str(),
                        info.s,
                        info.t,
                        info.anchor
                    ),
                ));
            }
            rows.push((
                "chain".into(),
                report
                    .chain
                    .iter()
                    .map(|s| format!("{}:{}", s.tau, s.justification.as_str()))
                    .collect::<Vec<_>>()
                    .join(" "),
            ));
            if let Some(f) = &report.final_k {
                rows.push(("final".into(), csv(&ctx.render_vector(f))));
            }
            rows.push(("verdict".into(), report.verdict.as_str().to_string()));
            for (i, note) in report.notes.iter().enumerate() {
                rows.push((format!("note.{i}"), note.clone()));
            }
            print_tsv(&rows);
        }
        Format::Pretty => {
            println!(
                "weight k = ({}); l = ({}) over orbits [{}], p = {}",
                csv(&report.input.k_strings(&ctx)),
                csv(&report.input.l_strings(&ctx)),
                ctx.embeddings
                    .orbit_degrees()
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                ctx.prime.render()
            );
            if let Some(aux) = &ctx.aux {
                println!("symbol {} >= {}", aux.name, aux.min);
            }
            let h = &report.hypotheses;
            println!("hypotheses:");
            for (name, v) in [
                ("nonzero non-algebraic shape", h.nonzero_nonalgebraic),
                ("minimal cone", h.minimal_cone),
                ("positive entries", h.positive),
                ("not parallel to all-ones", h.not_parallel_one),
                ("theta entries not 1 mod p", h.mtilde_not_one_mod_p),
            ] {
                println!("  {name}: {v}");
            }
            println!("M      = {}", tau_set(&report.m));
            println!("Mtilde = {}", tau_set(&report.mtilde));
            if let Some(kp) = &report.kprime {
                println!("k'  = ({})", csv(&kp.k_strings(&ctx)));
            }
            for (mu, wmu) in &report.kmu {
                println!(
                    "k^mu at {mu}: k = ({}); l = ({})",
                    csv(&wmu.k_strings(&ctx)),
                    csv(&wmu.l_strings(&ctx))
                );
            }
            if let Some(kd) = &report.kdoubleprime {
                println!("k'' = ({})", csv(&ctx.render_vector(kd)));
            }
            if !report.cases.is_empty() {
                println!("cases:");
                for (tau, info) in &report.cases {
                    println!(
                        "  {tau}: case {} (s={}, t={}, anchor {})",
                        info.case.as_str(),
                        info.s,
                        info.t,
                        info.anchor
                    );
                }
            }
            if !report.chain.is_empty() {
                println!("chain:");
                for step in &report.chain {
                    println!("  divide at {} [{}]", step.tau, step.justification.as_str());
                }
            }
            if let Some(f) = &report.final_k {
                println!("final = ({})", csv(&ctx.render_vector(f)));
            }
            println!("verdict: {}", report.verdict.as_str());
            for note in &report.notes {
                println!("note: {note}");
            }
        }
    }
    Ok(match &report.verdict {
        Verdict::Verified => 0,
        Verdict::Failed(_) => 1,
        Verdict::Undecidable(_) => 3,
    })
}

fn cmd_check(args: &WeightArgs, format: Format) -> Result<i32, Error> {
    let ctx = build_context(&args.p, &args.orbits, args.kappa_min)?;
    let w = Weight::parse(&ctx, &args.k, args.l.as_deref())?;
    let h = hmf_weights::check_hypotheses(&ctx, &w, args.assume_hecke_vanishing);
    let failing = h.failing();
    let undecided = h.undecided();

    let verdicts = [
        ("nonzero_nonalgebraic", h.nonzero_nonalgebraic),
        ("minimal_cone", h.minimal_cone),
        ("positive", h.positive),
        ("not_parallel_one", h.not_parallel_one),
        ("mtilde_not_one_mod_p", h.mtilde_not_one_mod_p),
    ];
    match format {
        Format::Json => {
            let mut hyp = serde_json::Map::new();
            for (name, v) in verdicts {
                hyp.insert(name.to_string(), v.as_str().into());
            }
            print_json(&serde_json::json!({
                "p": ctx.prime.render(),
                "orbits": ctx.embeddings.orbit_degrees(),
                "k": w.k_strings(&ctx),
                "l": w.l_strings(&ctx),
                "hypotheses": hyp,
                "residues": h.residue_details.iter().map(|(mu, v)| {
                    serde_json::json!({"mu": [mu.orbit, mu.pos], "verdict": v.as_str()})
                }).collect::<Vec<_>>(),
                "hecke_vanishing_assumed": h.hecke_vanishing_assumed,
                "failing": failing,
                "undecided": undecided,
            }));
        }
        Format::Tsv => {
            let mut rows = Vec::new();
            context_rows(&ctx, &mut rows);
            rows.push(("k".into(), csv(&w.k_strings(&ctx))));
            for (name, v) in verdicts {
                rows.push((format!("hypothesis.{name}"), v.as_str().to_string()));
            }
            for (mu, v) in &h.residue_details {
                rows.push((format!("residue.{mu}"), v.as_str().to_string()));
            }
            rows.push(("failing".into(), failing.join(" ")));
            rows.push(("undecided".into(), undecided.join(" ")));
            print_tsv(&rows);
        }
        Format::Pretty => {
            println!(
                "hypotheses for k = ({}) at p = {}:",
                csv(&w.k_strings(&ctx)),
                ctx.prime.render()
            );
            for (name, v) in verdicts {
                println!("  {name}: {v}");
            }
            for (mu, v) in &h.residue_details {
                println!("  residue at {mu}: {v}");
            }
            if failing.is_empty() && undecided.is_empty() {
                println!("all required hypotheses hold");
            }
            if !failing.is_empty() {
                println!("failing: {}", failing.join(", "));
            }
            if !undecided.is_empty() {
                println!("undecided: {}", undecided.join(", "));
            }
        }
    }
    Ok(if !failing.is_empty() {
        1
    } else if !undecided.is_empty() {
        3
    } else {
        0
    })
}

fn cmd_reduce(args: &VectorArgs, format: Format) -> Result<i32, Error> {
    let ctx = build_context(&args.p, &args.orbits, args.kappa_min)?;
    let k = ctx.parse_vector(&args.k)?;
    let reduction = reduce_to_min_cone(&ctx, &k, &OrderPolicy::IndexOrder)?;

    match format {
        Format::Json => {
            print_json(&serde_json::json!({
                "p": ctx.prime.render(),
                "orbits": ctx.embeddings.orbit_degrees(),
                "input": ctx.render_vector(&k),
                "final": ctx.render_vector(&reduction.final_k),
                "chain": reduction.chain.iter().map(|t| {
                    serde_json::json!({"tau": [t.orbit, t.pos], "verdict": "always"})
                }).collect::<Vec<_>>(),
                "cone": reduction.cone.as_str(),
            }));
        }
        Format::Tsv => {
            let mut rows = Vec::new();
            context_rows(&ctx, &mut rows);
            rows.push(("input".into(), csv(&ctx.render_vector(&k))));
            rows.push(("final".into(), csv(&ctx.render_vector(&reduction.final_k))));
            rows.push((
                "chain".into(),
                reduction
                    .chain
                    .iter()
                    .map(|t| format!("{t}:always"))
                    .collect::<Vec<_>>()
                    .join(" "),
            ));
            rows.push(("cone".into(), reduction.cone.as_str().to_string()));
            print_tsv(&rows);
        }
        Format::Pretty => {
            println!("input = ({})", csv(&ctx.render_vector(&k)));
            if reduction.chain.is_empty() {
                println!("already in the minimal cone; no divisions");
            } else {
                for t in &reduction.chain {
                    println!("divide at {t} [always]");
                }
            }
            println!("final = ({})", csv(&ctx.render_vector(&reduction.final_k)));
            println!("cone: {}", reduction.cone.as_str());
        }
    }
    // A stall the comparison engine cannot certify leaves further division
    // undecided; report that as undecidable rather than done.
    Ok(if reduction.cone.is_always() { 0 } else { 3 })
}

fn cmd_sweep(args: &SweepArgs, format: Format) -> Result<i32, Error> {
    if args.max_d == 0 {
        return Err(Error::InvalidInput("--max-d must be at least 1".into()));
    }
    let primes: Vec<i64> = args
        .p
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad prime `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let cap = match args.cap.trim() {
        "auto" => Cap::Auto,
        s => Cap::Fixed(
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad cap `{s}`")))?,
        ),
    };
    let checks: Vec<Check> = args
        .checks
        .split(',')
        .map(|s| match s.trim() {
            "roundtrip" => Ok(Check::Roundtrip),
            "confluence" => Ok(Check::Confluence),
            "pattern" => Ok(Check::Pattern),
            other => Err(Error::InvalidInput(format!("unknown check `{other}`"))),
        })
        .collect::<Result<_, _>>()?;
    let config = SweepConfig {
        profiles: profiles_up_to(args.max_d),
        primes,
        cap,
        checks,
        seed: args.seed,
        confluence_trials: args.trials,
    };
    let result = run_sweep(&config);
    let (jsonl, summary) = write_reports(&result, &args.out)
        .map_err(|e| Error::InvalidInput(format!("cannot write to {}: {e}", args.out.display())))?;

    match format {
        Format::Json => print_json(&result.summary_json()),
        Format::Tsv => {
            let rows = vec![
                ("total".to_string(), result.total.to_string()),
                ("verified".to_string(), result.verified.to_string()),
                ("filtered".to_string(), result.filtered.to_string()),
                ("undecidable".to_string(), result.undecidable.to_string()),
                ("failed".to_string(), result.failed.to_string()),
                ("summary".to_string(), summary.display().to_string()),
                ("counterexamples".to_string(), jsonl.display().to_string()),
            ];
            print_tsv(&rows);
        }
        Format::Pretty => {
            println!(
                "swept {} weights over {} profiles x {} primes",
                result.total,
                config.profiles.len(),
                config.primes.len()
            );
            println!("verified: {}", result.verified);
            println!("filtered: {}", result.filtered);
            println!("undecidable: {}", result.undecidable);
            println!("failed: {}", result.failed);
            println!("wrote {}", summary.display());
            println!("wrote {}", jsonl.display());
        }
    }
    Ok(if result.failed > 0 {
        1
    } else if result.undecidable > 0 {
        3
    } else {
        0
    })
}

struct Golden {
    degrees: &'static [usize],
    kappa_min: Option<i64>,
    k: &'static str,
    kprime: &'static [&'static str],
    kmu: &'static [(usize, &'static [&'static str])],
    kdoubleprime: &'static [&'static str],
}

fn golden(name: &str) -> Option<Golden> {
    match name {
        "quadratic-cubic" => Some(Golden {
            degrees: &[3],
            kappa_min: Some(3),
            k: "1,1,κ",
            kprime: &["p", "p+1", "κ-1"],
            kmu: &[(2, &["p", "p+1", "κ+1"])],
            kdoubleprime: &["0", "p+1", "κ"],
        }),
        "k2-equals-2" => Some(Golden {
            degrees: &[3],
            kappa_min: None,
            k: "1,1,2",
            kprime: &["p", "p", "p+1"],
            kmu: &[(2, &["p", "p", "p+3"])],
            kdoubleprime: &["0", "p", "p+2"],
        }),
        "eight-tuple" => Some(Golden {
            degrees: &[8],
            kappa_min: Some(3),
            k: "1,1,κ,2,2,1,2,2",
            kprime: &["p", "p+1", "κ-1", "p+1", "p+1", "p", "p+1", "p+1"],
            kmu: &[
                (2, &["p", "p+1", "κ+1", "p+1", "p+1", "p", "p+1", "p+1"]),
                (4, &["p", "p+1", "κ-1", "p+1", "p+3", "p", "p+1", "p+1"]),
                (7, &["p", "p+1", "κ-1", "p+1", "p+1", "p", "p+1", "p+3"]),
            ],
            kdoubleprime: &["0", "p+1", "κ", "1", "p+2", "0", "p+1", "p+2"],
        }),
        _ => None,
    }
}

fn cmd_example(name: &str, format: Format) -> Result<i32, Error> {
    let golden = golden(name).ok_or_else(|| {
        Error::InvalidInput(format!(
            "unknown example `{name}`; expected quadratic-cubic, k2-equals-2, or eight-tuple"
        ))
    })?;
    let ctx = Context::symbolic(golden.degrees, 2, golden.kappa_min.map(|m| ("κ", m)))?;
    let w = Weight::parse(&ctx, golden.k, None)?;
    let report = reconstruct(&ctx, &w, false)?;

    fn expect(out: &mut Vec<String>, field: &str, want: Vec<String>, got: Option<Vec<String>>) {
        match got {
            Some(got) if got == want => {}
            Some(got) => out.push(format!(
                "{field}: expected ({}), got ({})",
                csv(&want),
                csv(&got)
            )),
            None => out.push(format!("{field}: expected ({}), missing", csv(&want))),
        }
    }
    let mut mismatches: Vec<String> = Vec::new();
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    expect(
        &mut mismatches,
        "kprime",
        owned(golden.kprime),
        report.kprime.as_ref().map(|kp| kp.k_strings(&ctx)),
    );
    if report.kmu.len() != golden.kmu.len() {
        mismatches.push(format!(
            "companions: expected {}, got {}",
            golden.kmu.len(),
            report.kmu.len()
        ));
    } else {
        for ((mu, wmu), (pos, want)) in report.kmu.iter().zip(golden.kmu) {
            if mu.pos != *pos || mu.orbit != 0 {
                mismatches.push(format!("companion at {mu}: expected position {pos}"));
            }
            expect(
                &mut mismatches,
                &format!("kmu.{mu}.k"),
                owned(want),
                Some(wmu.k_strings(&ctx)),
            );
            let mut l = vec!["0".to_string(); ctx.degree()];
            l[*pos] = "-1".to_string();
            expect(
                &mut mismatches,
                &format!("kmu.{mu}.l"),
                l,
                Some(wmu.l_strings(&ctx)),
            );
        }
    }
    expect(
        &mut mismatches,
        "kdoubleprime",
        owned(golden.kdoubleprime),
        report.kdoubleprime.as_ref().map(|kd| ctx.render_vector(kd)),
    );
    if !report.verdict.is_verified() {
        mismatches.push(format!(
            "verdict: expected verified, got {}",
            report.verdict.as_str()
        ));
    }
    if report.final_k.as_ref() != Some(&w.k().to_vec()) {
        mismatches.push("final: expected the input weight".to_string());
    }

    let status = if mismatches.is_empty() { "ok" } else { "mismatch" };
    match format {
        Format::Json => {
            print_json(&serde_json::json!({
                "example": name,
                "report": report.to_json(&ctx),
                "golden": {"status": status, "mismatches": mismatches},
            }));
        }
        Format::Tsv => {
            let mut rows = vec![
                ("example".to_string(), name.to_string()),
                ("kprime.k".to_string(), csv(&report.kprime.as_ref().unwrap().k_strings(&ctx))),
            ];
            for (mu, wmu) in &report.kmu {
                rows.push((format!("kmu.{mu}.k"), csv(&wmu.k_strings(&ctx))));
                rows.push((format!("kmu.{mu}.l"), csv(&wmu.l_strings(&ctx))));
            }
            if let Some(kd) = &report.kdoubleprime {
                rows.push(("kdoubleprime".to_string(), csv(&ctx.render_vector(kd))));
            }
            rows.push(("verdict".to_string(), report.verdict.as_str().to_string()));
            rows.push(("golden".to_string(), status.to_string()));
            for (i, m) in mismatches.iter().enumerate() {
                rows.push((format!("mismatch.{i}"), m.clone()));
            }
            print_tsv(&rows);
        }
        Format::Pretty => {
            println!("example {name}: k = ({})", csv(&report.input.k_strings(&ctx)));
            println!(
                "k'  = ({})",
                csv(&report.kprime.as_ref().unwrap().k_strings(&ctx))
            );
            for (mu, wmu) in &report.kmu {
                println!(
                    "k^mu at {mu}: k = ({}); l = ({})",
                    csv(&wmu.k_strings(&ctx)),
                    csv(&wmu.l_strings(&ctx))
                );
            }
            if let Some(kd) = &report.kdoubleprime {
                println!("k'' = ({})", csv(&ctx.render_vector(kd)));
            }
            println!("verdict: {}", report.verdict.as_str());
            println!("golden check: {status}");
            for m in &mismatches {
                println!("  {m}");
            }
        }
    }
    Ok(if mismatches.is_empty() { 0 } else { 1 })
}
