//! Command-line front end: classification, evaluation, coefficients, limit
//! verification, table reproduction, sampling, and generator validation.
//!
//! Exit status: 0 success, 1 verification failure, 2 argument/parse error,
//! 3 indeterminate or cancellation-limited computation.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use copula_tails::classify::{classify, Diagnostic, Source, TailClassification};
use copula_tails::error::CopulaError;
use copula_tails::eval::{copula_cdf, rectangle_prob, RectangleQuery};
use copula_tails::extrapolate::GridSpec;
use copula_tails::generator::{check_d_monotone, default_monotone_grid};
use copula_tails::harness::{
    predicted_value, reproduce_table1, reproduce_table2, sample_bivariate, verify_limit,
    ConvergenceReport, LimitScenario, TableReport, TheoremId, Verdict,
};
use copula_tails::limits::{tail_coefficients, TailCoefficients};
use copula_tails::{parse_spec, GeneratorHandle, Kappa};

#[derive(Parser)]
#[command(
    name = "copula-tails",
    about = "Tail classification and limit verification for Archimedean copulas",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// Generator spec: family:<id>,theta:<v>[,transform:<id>,alpha:<v>]*
    #[arg(long)]
    gen: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Limit statement: lower-ad, lower-ad-cond, lower-ai-rate,
    /// lower-ai-cond, upper-ad, upper-ad-cond, near-indep, near-indep-cond,
    /// nad-single, nad-joint, nad-joint-cond.
    #[arg(long)]
    theorem: String,
    /// Conditioning subset I as 1-based comma-separated indices.
    #[arg(long, default_value = "1,2")]
    subset: String,
    /// Threshold multipliers on I (full-dimension for nad-joint-cond).
    #[arg(long, default_value = "")]
    x: String,
    /// Full-dimension second argument where the statement uses one.
    #[arg(long, default_value = "")]
    y: String,
    /// Total dimension d.
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the upper and lower tail of a generator.
    Classify(Common),
    /// Evaluate the copula CDF or a rectangle probability.
    Eval {
        #[command(flatten)]
        common: Common,
        /// CDF argument u as a comma-separated list.
        #[arg(long)]
        cdf: Option<String>,
        /// Rectangle lower corner (with --y as the upper corner).
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, default_value = "")]
        y: String,
    },
    /// Tail dependence coefficients lambda_L, lambda_U, eta_L, eta_U.
    Coefs(Common),
    /// Formula value of one limit statement (no finite-s verification).
    Limit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Verify a limit statement against finite-scale probabilities.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Geometric grid start:stop:ratio.
        #[arg(long, name = "s-grid")]
        s_grid: Option<String>,
        #[arg(long, default_value_t = 5e-2)]
        tolerance: f64,
    },
    /// Compare numeric classification with closed forms for all families.
    Table1 {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Same comparison for the generator transforms.
    Table2 {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Draw a deterministic bivariate sample.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check d-monotonicity of the generator inverse.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
}

/// JSON number with "inf"/"-inf"/"nan" string sentinels.
fn num(v: f64) -> Value {
    if v.is_nan() {
        json!("nan")
    } else if v == f64::INFINITY {
        json!("inf")
    } else if v == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!(v)
    }
}

fn kappa_json(k: Kappa) -> Value {
    match k {
        Kappa::Known(v) => num(v),
        Kappa::NotApplicable => Value::Null,
        Kappa::Unknown => json!("unknown"),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, CopulaError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CopulaError::ParseError(format!("bad number `{p}`")))
        })
        .collect()
}

fn parse_subset(s: &str) -> Result<Vec<usize>, CopulaError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            let i: usize = p
                .trim()
                .parse()
                .map_err(|_| CopulaError::ParseError(format!("bad index `{p}`")))?;
            if i == 0 {
                return Err(CopulaError::ParseError("indices are 1-based".into()));
            }
            Ok(i - 1)
        })
        .collect()
}

fn parse_theorem(s: &str) -> Result<TheoremId, CopulaError> {
    Ok(match s {
        "lower-ad" => TheoremId::LowerAd,
        "lower-ad-cond" => TheoremId::LowerAdCond,
        "lower-ai-rate" => TheoremId::LowerAiRate,
        "lower-ai-cond" => TheoremId::LowerAiCond,
        "upper-ad" => TheoremId::UpperAd,
        "upper-ad-cond" => TheoremId::UpperAdCond,
        "near-indep" => TheoremId::NearIndep,
        "near-indep-cond" => TheoremId::NearIndepCond,
        "nad-single" => TheoremId::NadSingle,
        "nad-joint" => TheoremId::NadJoint,
        "nad-joint-cond" => TheoremId::NadJointCond,
        other => {
            return Err(CopulaError::ParseError(format!(
                "unknown theorem `{other}`"
            )))
        }
    })
}

fn theorem_name(t: TheoremId) -> &'static str {
    match t {
        TheoremId::LowerAd => "lower-ad",
        TheoremId::LowerAdCond => "lower-ad-cond",
        TheoremId::LowerAiRate => "lower-ai-rate",
        TheoremId::LowerAiCond => "lower-ai-cond",
        TheoremId::UpperAd => "upper-ad",
        TheoremId::UpperAdCond => "upper-ad-cond",
        TheoremId::NearIndep => "near-indep",
        TheoremId::NearIndepCond => "near-indep-cond",
        TheoremId::NadSingle => "nad-single",
        TheoremId::NadJoint => "nad-joint",
        TheoremId::NadJointCond => "nad-joint-cond",
    }
}

/// Human-readable description of the scaling applied to the finite-s
/// probability before comparison.
fn scaling_descriptor(t: TheoremId) -> &'static str {
    match t {
        TheoremId::LowerAd => "joint lower probability / s",
        TheoremId::LowerAdCond => "conditional lower probability (ratio, no scaling)",
        TheoremId::LowerAiRate => "joint lower probability / phi_inv(|I| phi(s))",
        TheoremId::LowerAiCond => "conditional probability at chi_s thresholds (ratio)",
        TheoremId::UpperAd => "joint survival probability / s",
        TheoremId::UpperAdCond => "conditional survival probability (ratio)",
        TheoremId::NearIndep => "mixed rectangle probability / s^|I|",
        TheoremId::NearIndepCond => "conditional rectangle probability (ratio)",
        TheoremId::NadSingle => "single-conditioned rectangle probability / s",
        TheoremId::NadJoint => "joint survival probability / (s g(s))",
        TheoremId::NadJointCond => "conditional survival probability (ratio)",
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, CopulaError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CopulaError::ParseError(
            "expected --s-grid start:stop:ratio".into(),
        ));
    }
    let p = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| CopulaError::ParseError(format!("bad grid number `{x}`")))
    };
    let (start, stop, ratio) = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
    if !(start > stop && stop > 0.0 && ratio > 0.0 && ratio < 1.0) {
        return Err(CopulaError::ParseError(
            "grid needs start > stop > 0 and ratio in (0,1)".into(),
        ));
    }
    Ok(GridSpec::down_to(start, stop, ratio))
}

fn build_scenario(args: &ScenarioArgs) -> Result<LimitScenario, CopulaError> {
    Ok(LimitScenario {
        theorem: parse_theorem(&args.theorem)?,
        subset: parse_subset(&args.subset)?,
        x: parse_list(&args.x)?,
        y: parse_list(&args.y)?,
        dim: args.dim,
    })
}

/// Family id and parameter from the leading tokens of a spec string.
fn spec_family_theta(spec: &str) -> (Value, Value) {
    let mut family = Value::Null;
    let mut theta = Value::Null;
    for part in spec.split(',') {
        if let Some((k, v)) = part.split_once(':') {
            if k == "family" && family.is_null() {
                family = v.parse::<u64>().map(Value::from).unwrap_or(Value::Null);
            }
            if k == "theta" && theta.is_null() {
                theta = v.parse::<f64>().map(num).unwrap_or(Value::Null);
            }
        }
    }
    (family, theta)
}

fn diagnostics_json(diags: &[Diagnostic]) -> Value {
    Value::Array(
        diags
            .iter()
            .map(|d| {
                json!({
                    "quantity": d.quantity,
                    "source": match d.source { Source::Registry => "registry", Source::Numeric => "numeric" },
                    "value": num(d.value),
                    "converged": d.converged,
                    "error_indicator": num(d.error_indicator),
                    "method": d.method,
                })
            })
            .collect(),
    )
}

fn classification_json(spec: &str, c: &TailClassification) -> Value {
    let (family, theta) = spec_family_theta(spec);
    json!({
        "family": family,
        "theta": theta,
        "upper": {
            "dphi1": num(c.dphi_at_1),
            "theta1": num(c.theta1),
            "case": c.upper_case.index(),
            "case_label": c.upper_case.label(),
        },
        "lower": {
            "phi0": num(c.phi_at_zero),
            "theta0": num(c.theta0),
            "kappa": kappa_json(c.kappa),
            "case": c.lower_case.index(),
            "case_label": c.lower_case.label(),
        },
        "diagnostics": diagnostics_json(&c.diagnostics),
    })
}

fn classification_text(c: &TailClassification) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "upper: case {} ({}), phi'(1) = {}, theta1 = {}\n",
        c.upper_case.index(),
        c.upper_case.label(),
        c.dphi_at_1,
        c.theta1
    ));
    s.push_str(&format!(
        "lower: case {} ({}), phi(0) = {}, theta0 = {}, kappa = {:?}\n",
        c.lower_case.index(),
        c.lower_case.label(),
        c.phi_at_zero,
        c.theta0,
        c.kappa
    ));
    s
}

fn coefs_json(t: &TailCoefficients) -> Value {
    json!({
        "lambda_L": num(t.lambda_l),
        "lambda_U": num(t.lambda_u),
        "eta_L": num(t.eta_l),
        "eta_U": num(t.eta_u),
    })
}

fn scenario_json(sc: &LimitScenario) -> Value {
    json!({
        "theorem": theorem_name(sc.theorem),
        "subset": sc.subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "x": sc.x.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "y": sc.y.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "dim": sc.dim,
    })
}

fn report_json(r: &ConvergenceReport) -> Value {
    json!({
        "scenario": scenario_json(&r.scenario),
        "grid": r.grid.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "finite_values": r.finite_values.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "predicted": num(r.predicted),
        "extrapolated": num(r.extrapolated),
        "max_rel_err_at_smallest_s": num(r.max_rel_err_at_smallest_s),
        "truncated_by_cancellation": r.truncated_by_cancellation,
        "verdict": match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        },
    })
}

fn table_output(rep: &TableReport, format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|r| json!({"label": r.label, "ok": r.ok, "mismatches": r.mismatches}))
                .collect();
            serde_json::to_string_pretty(&json!({"rows": rows, "all_ok": rep.all_ok})).unwrap()
        }
        Format::Csv => {
            let mut s = String::from("label,ok,mismatches\n");
            for r in &rep.rows {
                s.push_str(&format!(
                    "\"{}\",{},\"{}\"\n",
                    r.label,
                    r.ok,
                    r.mismatches.join("; ")
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rep.rows {
                if r.ok {
                    s.push_str(&format!("ok    {}\n", r.label));
                } else {
                    s.push_str(&format!("FAIL  {} — {}\n", r.label, r.mismatches.join("; ")));
                }
            }
            s.push_str(&format!(
                "{}/{} rows match\n",
                rep.rows.iter().filter(|r| r.ok).count(),
                rep.rows.len()
            ));
            s
        }
    }
}

fn emit(out: &Option<String>, text: &str) -> Result<(), CopulaError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CopulaError::ParseError(format!("cannot write {path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CopulaError::ParseError(format!("stdout: {e}")))
        }
    }
}

fn handle_for(common: &Common) -> Result<GeneratorHandle, CopulaError> {
    parse_spec(&common.gen)
}

fn exit_code_for(e: &CopulaError) -> ExitCode {
    match e {
        CopulaError::Indeterminate(_)
        | CopulaError::QuadratureNonConvergent
        | CopulaError::NotFiniteOnGrid
        | CopulaError::DerivativeResolution { .. } => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CopulaError> {
    match cli.command {
        Command::Classify(common) => {
            let h = handle_for(&common)?;
            let c = classify(&h)?;
            let text = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&classification_json(&common.gen, &c)).unwrap()
                        + "\n"
                }
                Format::Csv => format!(
                    "dphi1,theta1,upper_case,phi0,theta0,kappa,lower_case\n{},{},{},{},{},{:?},{}\n",
                    c.dphi_at_1,
                    c.theta1,
                    c.upper_case.index(),
                    c.phi_at_zero,
                    c.theta0,
                    c.kappa,
                    c.lower_case.index()
                ),
                Format::Text => classification_text(&c),
            };
            emit(&common.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { common, cdf, x, y } => {
            let h = handle_for(&common)?;
            let (query, value, cancellation) = if let Some(u) = cdf {
                let u = parse_list(&u)?;
                let v = copula_cdf(&h, &u)?;
                (json!({"cdf": u}), v, false)
            } else {
                let lower = parse_list(&x)?;
                let upper = parse_list(&y)?;
                let q = RectangleQuery::new(lower.clone(), upper.clone())?;
                let r = rectangle_prob(&h, &q)?;
                (
                    json!({"rect_lower": lower, "rect_upper": upper}),
                    r.value,
                    r.cancellation_limited,
                )
            };
            let text = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "query": query,
                        "value": num(value),
                        "cancellation_flag": cancellation,
                    }))
                    .unwrap()
                        + "\n"
                }
                Format::Csv => format!("value,cancellation_flag\n{value},{cancellation}\n"),
                Format::Text => format!("{value}\n"),
            };
            emit(&common.out, &text)?;
            if cancellation {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Coefs(common) => {
            let h = handle_for(&common)?;
            let c = classify(&h)?;
            let t = tail_coefficients(&c)?;
            let text = match common.format {
                Format::Json => serde_json::to_string_pretty(&coefs_json(&t)).unwrap() + "\n",
                Format::Csv => format!(
                    "lambda_L,lambda_U,eta_L,eta_U\n{},{},{},{}\n",
                    t.lambda_l, t.lambda_u, t.eta_l, t.eta_u
                ),
                Format::Text => format!(
                    "lambda_L = {}\nlambda_U = {}\neta_L = {}\neta_U = {}\n",
                    t.lambda_l, t.lambda_u, t.eta_l, t.eta_u
                ),
            };
            emit(&common.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Limit { common, scenario } => {
            let h = handle_for(&common)?;
            let sc = build_scenario(&scenario)?;
            let c = classify(&h)?;
            let v = predicted_value(&h, &c, &sc)?;
            let text = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "scenario": scenario_json(&sc),
                        "formula_value": num(v),
                        "scaling_descriptor": scaling_descriptor(sc.theorem),
                    }))
                    .unwrap()
                        + "\n"
                }
                Format::Csv => format!("formula_value\n{v}\n"),
                Format::Text => format!("{v}\n"),
            };
            emit(&common.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            common,
            scenario,
            s_grid,
            tolerance,
        } => {
            let h = handle_for(&common)?;
            let sc = build_scenario(&scenario)?;
            let grid = s_grid.as_deref().map(parse_grid).transpose()?;
            let r = verify_limit(&h, &sc, grid, tolerance)?;
            let text = match common.format {
                Format::Json => serde_json::to_string_pretty(&report_json(&r)).unwrap() + "\n",
                Format::Csv => {
                    let mut s = String::from("s,scaled_value\n");
                    for (g, v) in r.grid.iter().zip(&r.finite_values) {
                        s.push_str(&format!("{g},{v}\n"));
                    }
                    s.push_str(&format!(
                        "predicted,{}\nextrapolated,{}\nverdict,{:?}\n",
                        r.predicted, r.extrapolated, r.verdict
                    ));
                    s
                }
                Format::Text => format!(
                    "predicted    {}\nextrapolated {}\nverdict      {:?}\n",
                    r.predicted, r.extrapolated, r.verdict
                ),
            };
            emit(&common.out, &text)?;
            Ok(match r.verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                Verdict::Fail => ExitCode::from(1),
                Verdict::Inconclusive => ExitCode::from(3),
            })
        }
        Command::Table1 { format, out } => {
            let rep = reproduce_table1();
            emit(&out, &table_output(&rep, format))?;
            Ok(if rep.all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Table2 { format, out } => {
            let rep = reproduce_table2();
            emit(&out, &table_output(&rep, format))?;
            Ok(if rep.all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sample { common, n, seed } => {
            let h = handle_for(&common)?;
            let rep = sample_bivariate(&h, n, seed)?;
            let text = match common.format {
                Format::Json => {
                    let pts: Vec<Value> =
                        rep.points.iter().map(|&(a, b)| json!([a, b])).collect();
                    serde_json::to_string_pretty(
                        &json!({"seed": seed, "n": n, "resamples": rep.resamples, "points": pts}),
                    )
                    .unwrap()
                        + "\n"
                }
                _ => {
                    let mut s = String::from("u1,u2\n");
                    for (a, b) in &rep.points {
                        s.push_str(&format!("{a},{b}\n"));
                    }
                    s
                }
            };
            emit(&common.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { common, dim } => {
            let h = handle_for(&common)?;
            let rep = check_d_monotone(&h, dim, &default_monotone_grid())?;
            let pass = rep.orders.iter().all(|o| o.pass) && rep.convexity_pass;
            let text = match common.format {
                Format::Json => {
                    let orders: Vec<Value> = rep
                        .orders
                        .iter()
                        .map(|o| json!({"k": o.k, "min_value": num(o.min_value), "pass": o.pass}))
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "d": rep.d,
                        "orders": orders,
                        "convexity_min": num(rep.convexity_min),
                        "convexity_pass": rep.convexity_pass,
                        "pass": pass,
                    }))
                    .unwrap()
                        + "\n"
                }
                _ => {
                    let mut s = String::new();
                    for o in &rep.orders {
                        s.push_str(&format!(
                            "order {}: min {} ({})\n",
                            o.k,
                            o.min_value,
                            if o.pass { "ok" } else { "FAIL" }
                        ));
                    }
                    s.push_str(&format!(
                        "convexity: min {} ({})\noverall: {}\n",
                        rep.convexity_min,
                        if rep.convexity_pass { "ok" } else { "FAIL" },
                        if pass { "pass" } else { "fail" }
                    ));
                    s
                }
            };
            emit(&common.out, &text)?;
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let diag = json!({"error": e.to_string()});
            eprintln!("{diag}");
            exit_code_for(&e)
        }
    }
}
