//! Command-line front end: parse script/corpus files, dispatch to the
//! library, and emit JSON (default) or text reports.
//!
//! Exit codes: 0 success and all verdicts pass; 1 input error; 2 resource
//! limit; 3 verdict failure.

use chow::correspondences::{
    category_laws_check, compose, correspondence_from_cycle, graph, pushforward, VarietySpec,
};
use chow::cycles::{associated_cycle, minimal_primes, Ambient};
use chow::error::Error;
use chow::hilbert::hilbert;
use chow::koszul::{intersection_multiplicity, intersection_product};
use chow::monomial::MonomialOrder;
use chow::parse::{corpus_from_json, parse_polynomial, parse_script, Script};
use chow::poly::{MultiPoly, RingCtx};
use chow::report;
use chow::transfer::{check_commutation, complexity_survey, SurveyInstance};
use chow::ultra::{los_verdict, PrimeSample, Verdict};
use chow::util::primes_above;
use chow::Limits;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "chow", about = "Exact intersection theory over Q and prime fields")]
struct Cli {
    /// Config file (JSON); defaults to $CHOW_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the Buchberger pair cap.
    #[arg(long, global = true)]
    pair_cap: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduced Groebner basis of the script's ideal.
    Gb {
        input: PathBuf,
        /// Monomial order: grevlex (default), lex, or block:<split>.
        #[arg(long, default_value = "grevlex")]
        order: String,
    },
    /// Hilbert series data of a homogeneous ideal.
    Hilbert { input: PathBuf },
    /// Associated cycle of the script's ideal.
    Cycle {
        input: PathBuf,
        #[arg(long)]
        codim: Option<usize>,
        #[arg(long)]
        projective: bool,
    },
    /// Intersection multiplicities at every component of V(I) ∩ V(J).
    Mult { input: PathBuf },
    /// Intersection product of the cycles of two ideals.
    Product {
        input: PathBuf,
        #[arg(long)]
        projective: bool,
    },
    /// Pushforward of the cycle along the projection onto the kept block.
    Pushforward { input: PathBuf },
    /// Compose two correspondences (script files with blocks + ideal).
    Compose { alpha: PathBuf, beta: PathBuf },
    /// Category-law checks on a deterministic sample of graph maps.
    Laws {
        #[arg(long, default_value_t = 8)]
        graphs: usize,
    },
    /// Los-style verdict for the script's sentence over a prime sample.
    Los {
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        primes: usize,
        /// Start the sample above this bound (default: include 2).
        #[arg(long, default_value_t = 1)]
        above: u64,
    },
    /// Commutation checks for a JSON corpus of transfer instances.
    Transfer {
        corpus: PathBuf,
        #[arg(long, default_value_t = 50)]
        primes: usize,
        #[arg(long, default_value_t = 3)]
        above: u64,
    },
    /// Complexity survey over Q and sampled primes.
    Survey {
        corpus: PathBuf,
        #[arg(long, default_value_t = 5)]
        primes: usize,
    },
}

fn load_limits(cli: &Cli) -> Result<Limits, Error> {
    let mut limits = Limits::default();
    let path = cli.config.clone().or_else(|| {
        std::env::var("CHOW_CONFIG").ok().map(PathBuf::from)
    });
    if let Some(path) = path {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Validation(format!("config: {e}")))?;
        let get_u64 = |k: &str| value.get(k).and_then(|v| v.as_u64());
        if let Some(v) = get_u64("pair_cap") {
            limits.pair_cap = v as usize;
        }
        if let Some(v) = get_u64("factor_degree_cap") {
            limits.factor_degree_cap = v as usize;
        }
        if let Some(v) = get_u64("saturation_cap") {
            limits.saturation_cap = v as usize;
        }
        if let Some(v) = get_u64("quantifier_depth_cap") {
            limits.quantifier_depth_cap = v as usize;
        }
        if let Some(v) = get_u64("prime_eval_cap") {
            limits.prime_eval_cap = v;
        }
        if let Some(v) = get_u64("exception_cap") {
            limits.exception_cap = v as usize;
        }
        if let Some(v) = get_u64("small_prime_bound") {
            limits.small_prime_bound = v;
        }
        if let Some(v) = get_u64("seed") {
            limits.seed = v;
        }
    }
    if let Some(seed) = cli.seed {
        limits.seed = seed;
    }
    if let Some(cap) = cli.pair_cap {
        limits.pair_cap = cap;
    }
    Ok(limits)
}

fn read_script(path: &Path) -> Result<Script, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_script(&text)
}

fn emit(cli: &Cli, value: &Value, text_form: Option<String>) -> Result<(), Error> {
    let body = if cli.text {
        text_form.unwrap_or_else(|| serde_json::to_string_pretty(value).unwrap())
    } else {
        serde_json::to_string_pretty(value).unwrap()
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body + "\n")
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

/// Build a correspondence from a script: `blocks (x.. | y..); ideal (...)`.
fn correspondence_from_script(script: &Script, limits: &Limits) -> Result<chow::correspondences::Correspondence, Error> {
    let ring = script.require_ring()?;
    if script.blocks.len() != 2 {
        return Err(Error::Validation(
            "a correspondence script needs blocks (source | target)".into(),
        ));
    }
    let source_vars: Vec<&str> = script.blocks[0].iter().map(|s| s.as_str()).collect();
    let target_vars: Vec<&str> = script.blocks[1].iter().map(|s| s.as_str()).collect();
    let expected: Vec<&str> = source_vars.iter().chain(target_vars.iter()).copied().collect();
    let actual: Vec<&str> = ring.vars.iter().map(|s| s.as_str()).collect();
    if expected != actual {
        return Err(Error::Validation(
            "blocks must list the ring variables in order (source | target)".into(),
        ));
    }
    let source_ring = RingCtx::new(ring.field, &source_vars);
    let target_ring = RingCtx::new(ring.field, &target_vars);
    let source = VarietySpec::whole_space(&source_ring, limits)?;
    let target = VarietySpec::whole_space(&target_ring, limits)?;
    let ideal = script.ideal(0)?;
    let cycle = associated_cycle(&ideal, &Ambient::affine(&ring), None, limits)?.cycle;
    Ok(correspondence_from_cycle(cycle, &source, &target, limits)?)
}

fn ambient_of(script_ring: &Arc<RingCtx>, projective: bool) -> Ambient {
    if projective {
        Ambient::projective(script_ring)
    } else {
        Ambient::affine(script_ring)
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let limits = load_limits(cli)?;
    match &cli.cmd {
        Cmd::Gb { input, order } => {
            let script = read_script(input)?;
            let ideal = script.ideal(0)?;
            let order = match order.as_str() {
                "grevlex" => MonomialOrder::GrevLex,
                "lex" => MonomialOrder::Lex,
                other => {
                    if let Some(split) = other.strip_prefix("block:") {
                        MonomialOrder::Block {
                            split: split
                                .parse()
                                .map_err(|_| Error::Validation(format!("bad order {other}")))?,
                        }
                    } else {
                        return Err(Error::Validation(format!("unknown order {other}")));
                    }
                }
            };
            let gb = ideal.groebner_basis(order, &limits)?;
            let basis: Vec<String> = gb.polys.iter().map(|g| g.canonical_string()).collect();
            let value = json!({"order": format!("{order:?}"), "basis": basis});
            emit(cli, &value, Some(basis.join("\n")))?;
            Ok(0)
        }
        Cmd::Hilbert { input } => {
            let script = read_script(input)?;
            let ideal = script.ideal(0)?;
            let data = hilbert(&ideal, &limits)?;
            let hp: Vec<String> = data
                .hilbert_polynomial
                .iter()
                .map(|c| c.to_string())
                .collect();
            let value = json!({
                "degree": data.degree.to_string(),
                "dimension": data.dimension,
                "projective_dimension": data.projective_dimension(),
                "hilbert_polynomial_ascending": hp,
                "numerator": data.numerator.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            emit(
                cli,
                &value,
                Some(format!(
                    "degree {} dim {} hp [{}]",
                    data.degree,
                    data.dimension,
                    hp.join(", ")
                )),
            )?;
            Ok(0)
        }
        Cmd::Cycle {
            input,
            codim,
            projective,
        } => {
            let script = read_script(input)?;
            let ideal = script.ideal(0)?;
            let ambient = ambient_of(&ideal.ring, *projective || script.projective);
            let result = associated_cycle(&ideal, &ambient, *codim, &limits)?;
            let mut value = report::cycle_to_json(&result.cycle, &limits);
            if !result.discarded.is_empty() {
                value["discarded_components"] = Value::Array(
                    result
                        .discarded
                        .iter()
                        .map(|c| json!(c.canonical_generators(&limits)))
                        .collect(),
                );
            }
            emit(cli, &value, None)?;
            Ok(0)
        }
        Cmd::Mult { input } => {
            let script = read_script(input)?;
            let a = script.ideal(0)?;
            let b = script.ideal(1)?;
            let ca = minimal_primes(&a, &limits)?;
            let cb = minimal_primes(&b, &limits)?;
            let mut reports = Vec::new();
            for v in &ca {
                for w in &cb {
                    let sum = v.ideal.sum(&w.ideal)?;
                    if sum.is_unit_ideal(&limits)? {
                        continue;
                    }
                    for p in minimal_primes(&sum, &limits)? {
                        let rep = intersection_multiplicity(v, w, &p, &limits)?;
                        reports.push(report::multiplicity_report_to_json(&rep, &limits));
                    }
                }
            }
            emit(cli, &Value::Array(reports), None)?;
            Ok(0)
        }
        Cmd::Product { input, projective } => {
            let script = read_script(input)?;
            let a = script.ideal(0)?;
            let b = script.ideal(1)?;
            let ambient = ambient_of(&a.ring, *projective || script.projective);
            let ca = associated_cycle(&a, &ambient, None, &limits)?.cycle;
            let cb = associated_cycle(&b, &ambient, None, &limits)?.cycle;
            let prod = intersection_product(&ca, &cb, &limits)?;
            emit(cli, &report::cycle_to_json(&prod, &limits), None)?;
            Ok(0)
        }
        Cmd::Pushforward { input } => {
            let script = read_script(input)?;
            let ideal = script.ideal(0)?;
            let ring = ideal.ring.clone();
            if script.keep.is_empty() {
                return Err(Error::Validation("pushforward needs a keep (...) statement".into()));
            }
            let keep: Vec<usize> = script
                .keep
                .iter()
                .map(|n| {
                    ring.var_index(n)
                        .ok_or_else(|| Error::Validation(format!("unknown variable {n}")))
                })
                .collect::<Result<_, _>>()?;
            let names: Vec<&str> = keep.iter().map(|&i| ring.vars[i].as_str()).collect();
            let target = RingCtx::new(ring.field, &names);
            let cycle = associated_cycle(&ideal, &Ambient::affine(&ring), None, &limits)?.cycle;
            let pushed = pushforward(&cycle, &keep, &target, &limits)?;
            emit(cli, &report::cycle_to_json(&pushed, &limits), None)?;
            Ok(0)
        }
        Cmd::Compose { alpha, beta } => {
            let sa = read_script(alpha)?;
            let sb = read_script(beta)?;
            let ca = correspondence_from_script(&sa, &limits)?;
            let cb = correspondence_from_script(&sb, &limits)?;
            let composed = compose(&ca, &cb, &limits)?;
            emit(cli, &report::correspondence_to_json(&composed, &limits), None)?;
            Ok(0)
        }
        Cmd::Laws { graphs } => {
            let report = laws_sample(*graphs, &limits)?;
            let pass = report.all_pass();
            emit(
                cli,
                &report::laws_report_to_json(&report),
                Some(
                    report
                        .checks
                        .iter()
                        .map(|(n, ok)| format!("{n}: {}", if *ok { "pass" } else { "FAIL" }))
                        .collect::<Vec<_>>()
                        .join("\n"),
                ),
            )?;
            Ok(if pass { 0 } else { 3 })
        }
        Cmd::Los {
            input,
            primes,
            above,
        } => {
            let script = read_script(input)?;
            let sentence = script
                .sentences
                .first()
                .ok_or_else(|| Error::Validation("script declares no sentence".into()))?;
            let sample = PrimeSample::new(primes_above(above.saturating_sub(1).max(1), *primes))?;
            let report = los_verdict(sentence, &sample, &limits)?;
            let ok = report.verdict != Verdict::CofiniteFails;
            emit(
                cli,
                &report::los_report_to_json(&report),
                Some(format!(
                    "{} (true {}, false {}, exceptions {:?})",
                    report.verdict, report.counts.0, report.counts.1, report.exceptions
                )),
            )?;
            Ok(if ok { 0 } else { 3 })
        }
        Cmd::Transfer {
            corpus,
            primes,
            above,
        } => {
            let text = std::fs::read_to_string(corpus)
                .map_err(|e| Error::Io(format!("{}: {e}", corpus.display())))?;
            let instances = corpus_from_json(&text)?;
            let sample = PrimeSample::new(primes_above(*above, *primes))?;
            let mut reports = Vec::new();
            for instance in &instances {
                reports.push(check_commutation(instance, &sample, &limits)?);
            }
            let all_hold = reports
                .iter()
                .all(|r| r.verdict == Verdict::CofiniteHolds && r.exceptions_covered());
            let summary = report::commutation_summary(&reports);
            let value = json!({
                "summary": summary,
                "reports": reports.iter().map(report::commutation_report_to_json).collect::<Vec<_>>(),
            });
            emit(cli, &value, Some(summary))?;
            Ok(if all_hold { 0 } else { 3 })
        }
        Cmd::Survey { corpus, primes } => {
            let text = std::fs::read_to_string(corpus)
                .map_err(|e| Error::Io(format!("{}: {e}", corpus.display())))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Validation(format!("bad JSON: {e}")))?;
            let mut instances = Vec::new();
            for item in value
                .as_array()
                .ok_or_else(|| Error::Validation("survey corpus must be an array".into()))?
            {
                let ring = ring_from_json(item.get("ring"))?;
                let f = parse_polynomial(
                    &ring,
                    item.get("f")
                        .and_then(|v| v.as_str())
                        .ok_or_else(|| Error::Validation("survey item needs f".into()))?,
                )?;
                let g = parse_polynomial(
                    &ring,
                    item.get("g")
                        .and_then(|v| v.as_str())
                        .ok_or_else(|| Error::Validation("survey item needs g".into()))?,
                )?;
                instances.push(SurveyInstance { f, g });
            }
            let ps = primes_above(100, *primes);
            let outcome = complexity_survey(&instances, &ps, &limits)?;
            let ok = outcome.monotone && outcome.identical;
            let text_table = outcome
                .rational_table
                .iter()
                .map(|((d, n), c)| format!("d<{d} n={n}: max complexity {c}"))
                .collect::<Vec<_>>()
                .join("\n");
            emit(cli, &report::survey_to_json(&outcome), Some(text_table))?;
            Ok(if ok { 0 } else { 3 })
        }
    }
}

fn ring_from_json(value: Option<&Value>) -> Result<Arc<RingCtx>, Error> {
    let value = value.ok_or_else(|| Error::Validation("missing ring".into()))?;
    let field = match value.get("field").and_then(|f| f.as_str()) {
        Some("Q") => chow::FieldTag::Rational,
        Some(f) if f.starts_with('F') => chow::FieldTag::prime(
            f[1..]
                .parse()
                .map_err(|_| Error::Validation(format!("bad field {f}")))?,
        )?,
        other => return Err(Error::Validation(format!("bad field {other:?}"))),
    };
    let vars: Vec<String> = value
        .get("vars")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Validation("ring.vars must be an array".into()))?
        .iter()
        .map(|v| v.as_str().unwrap_or("?").to_string())
        .collect();
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    Ok(RingCtx::new(field, &refs))
}

/// Deterministic law sample: graphs of random small-degree maps between
/// affine lines, chained x -> y -> z -> w.
fn laws_sample(count: usize, limits: &Limits) -> Result<chow::correspondences::LawsReport, Error> {
    use chow::util::DetRng;
    let mut rng = DetRng::new(limits.seed ^ 0x1a3505u64);
    let line = |name: &str| -> Result<VarietySpec, Error> {
        let r = RingCtx::rational(&[name]);
        Ok(VarietySpec::whole_space(&r, limits)?)
    };
    let x_line = line("x")?;
    let y_line = line("y")?;
    let z_line = line("z")?;
    let w_line = line("w")?;
    let random_map = |rng: &mut DetRng, ring: &Arc<RingCtx>| -> Result<MultiPoly, Error> {
        let v = MultiPoly::var(ring, 0);
        let deg = 1 + rng.below(3) as u32;
        let mut f = v.pow(deg)?;
        for d in 0..deg {
            let c = rng.range_i64(-2, 2);
            if c != 0 {
                f = f.add(&v.pow(d)?.mul_scalar(&chow::Scalar::rational(c, 1)))?;
            }
        }
        Ok(f)
    };
    let mut identity_samples = Vec::new();
    let mut assoc = Vec::new();
    let mut bilin = Vec::new();
    for i in 0..count {
        let fx = random_map(&mut rng, &x_line.ambient.ring)?;
        let gy = random_map(&mut rng, &y_line.ambient.ring)?;
        let hz = random_map(&mut rng, &z_line.ambient.ring)?;
        let f = graph(&[fx], &x_line, &y_line, limits)?;
        let g = graph(&[gy], &y_line, &z_line, limits)?;
        let h = graph(&[hz], &z_line, &w_line, limits)?;
        if i % 2 == 0 {
            let u_line = line("u")?;
            let u = MultiPoly::var(&u_line.ambient.ring, 0);
            let id_u = graph(&[u], &u_line, &x_line, limits)?;
            identity_samples.push((id_u, f.clone()));
        }
        assoc.push((f.clone(), g.clone(), h));
        if i % 2 == 1 {
            let f2 = graph(
                &[random_map(&mut rng, &x_line.ambient.ring)?],
                &x_line,
                &y_line,
                limits,
            )?;
            bilin.push((f, f2, g));
        }
    }
    Ok(category_laws_check(&identity_samples, &assoc, &bilin, limits)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ResourceLimit(_) | Error::DegreeTooLarge { .. } => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
