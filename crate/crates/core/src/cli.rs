//! The `padzeta` command line.
//!
//! [`run`] parses an argument vector and returns the exit code together with
//! everything that should go to stdout, so it can be driven in-process.
//!
//! Exit codes: 0 success or PASS, 1 usage error, 2 mathematical error,
//! 3 verification FAIL.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bernoulli::{bernoulli_number, generalized_bernoulli};
use crate::error::{Error, Result};
use crate::lfunctions::{self, BranchSpec, SumOptions};
use crate::measures::{
    self, BallMeasure, CheckReport, ClopenBall, Distribution, MeasureKind, DEFAULT_BALL_BUDGET,
};
use crate::padic::{PadicContext, PadicNumber};
use crate::rational::{self, fmt_rational, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "padzeta",
    version,
    about = "p-adic Bernoulli measures and zeta branches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Odd prime
    #[arg(long = "p", allow_negative_numbers = true)]
    p: u64,
    /// Target precision in p-adic digits
    #[arg(long, default_value_t = 6)]
    prec: u32,
    /// Worker threads for summation
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Term or ball budget
    #[arg(long, default_value_t = DEFAULT_BALL_BUDGET)]
    budget: u64,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Branch ζ_{p,i}(s) from the alternating Dirichlet series
    Zeta {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        branch: u64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Fixed summation level (adaptive when absent)
        #[arg(long)]
        level: Option<u32>,
    },
    /// L_p(s, ω^j) as a Mellin transform of E_{1,c}
    Lp {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        c: i64,
        /// Riemann-sum level (defaults to prec + 1)
        #[arg(long)]
        level: Option<u32>,
    },
    /// Value of a distribution on a ball A:N
    Measure {
        #[command(flatten)]
        common: Common,
        /// haar, alternating, bernoulli:K or regularized:K:C
        #[arg(long)]
        measure: String,
        #[arg(long)]
        ball: String,
    },
    /// B_k, or B_{k,ω^j} with --twist
    Bernoulli {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
    },
    /// Exhaustive and numerical checks
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Residue estimate at s = 1
    Residue {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        branch: u64,
        #[arg(long, default_value_t = 7)]
        level: u32,
    },
    /// Valuations v_p(S_(n+1) - S_n)
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        branch: u64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
    },
}

#[derive(Debug, Subcommand)]
enum Check {
    /// E_{1,2} = μ/2 on every ball of levels 1..=max-level
    Theorem1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        max_level: u32,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        c: i64,
    },
    /// parent = Σ children on every ball of level < max-level
    Additivity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 4)]
        max_level: u32,
    },
    /// Per-level sup of |value|_p
    Boundedness {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 5)]
        max_level: u32,
    },
    /// Series at s = 1-k against the Bernoulli formula
    Interpolation {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        branch: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        level: u32,
    },
    /// Mellin transforms for several c against c = 2
    CIndependence {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        branch: u64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 5)]
        level: u32,
        #[arg(long = "c", value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![3, 4, 6])]
        cs: Vec<i64>,
    },
    /// v_p(S_n) >= n - 1
    Vanishing {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        branch: u64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
enum Status {
    Pass,
    Fail,
    Error,
}

/// Rendered outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

struct Report {
    command: String,
    p: u64,
    inputs: Value,
    value: Option<PadicNumber>,
    exact: Option<String>,
    profile: Option<Vec<i64>>,
    status: Status,
    witness: Value,
    text: String,
}

impl Report {
    fn new(command: &str, p: u64, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            p,
            inputs,
            value: None,
            exact: None,
            profile: None,
            status: Status::Pass,
            witness: Value::Null,
            text: String::new(),
        }
    }

    fn render(&self, as_json: bool) -> String {
        if !as_json {
            return self.text.clone();
        }
        let mut obj = json!({
            "command": self.command,
            "p": self.p,
            "inputs": self.inputs,
            "value": self.value.as_ref().map(|v| serde_json::to_value(v.to_json()).expect("serializable")),
            "profile": self.profile,
            "status": self.status,
            "witness": self.witness,
        });
        if let Some(e) = &self.exact {
            obj["exact"] = Value::String(e.clone());
        }
        serde_json::to_string(&obj).expect("serializable")
    }

    fn code(&self) -> i32 {
        match self.status {
            Status::Pass => EXIT_OK,
            Status::Fail => EXIT_FAIL,
            Status::Error => EXIT_MATH,
        }
    }

    fn verdict(&mut self, passed: bool, detail: &str) {
        self.status = if passed { Status::Pass } else { Status::Fail };
        let word = if passed { "PASS" } else { "FAIL" };
        self.text = format!("{word} ({detail})");
    }
}

fn validate_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if !rational::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

fn parse_s(text: &str, p: u64) -> Result<Rational> {
    let s = rational::parse_rational(text)?;
    if rational::valuation(&s, p).is_some_and(|v| v < 0) {
        return Err(Error::Parse {
            position: 0,
            message: format!("s = {text} has a denominator divisible by {p}"),
        });
    }
    Ok(s)
}

fn validate_branch(p: u64, branch: u64) -> Result<()> {
    if branch >= p - 1 {
        return Err(Error::InvalidBranch { branch, p });
    }
    Ok(())
}

fn validate_c(p: u64, c: i64) -> Result<()> {
    if c == 1 || c.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidC(c));
    }
    Ok(())
}

fn check_text(report: &CheckReport) -> String {
    match report.failures.first() {
        None => format!("{} balls", report.checked),
        Some(f) => format!(
            "witness ball {}: {} != {}; {} failures among {} balls",
            f.ball,
            f.lhs,
            f.rhs,
            report.failures.len(),
            report.checked
        ),
    }
}

fn sum_opts(common: &Common) -> SumOptions {
    SumOptions {
        jobs: common.jobs.max(1),
        budget: common.budget,
    }
}

fn dispatch(command: Command) -> (Common, Result<Report>) {
    match command {
        Command::Zeta {
            common,
            branch,
            s,
            level,
        } => {
            let r = zeta(&common, branch, &s, level);
            (common, r)
        }
        Command::Lp {
            common,
            twist,
            s,
            c,
            level,
        } => {
            let r = lp(&common, twist, &s, c, level);
            (common, r)
        }
        Command::Measure {
            common,
            measure,
            ball,
        } => {
            let r = measure_value(&common, &measure, &ball);
            (common, r)
        }
        Command::Bernoulli { common, k, twist } => {
            let r = bernoulli(&common, k, twist);
            (common, r)
        }
        Command::Residue {
            common,
            branch,
            level,
        } => {
            let r = residue(&common, branch, level);
            (common, r)
        }
        Command::Profile {
            common,
            branch,
            s,
            max_level,
        } => {
            let r = profile(&common, branch, &s, max_level);
            (common, r)
        }
        Command::Verify { check } => verify(check),
    }
}

fn zeta(common: &Common, branch: u64, s: &str, level: Option<u32>) -> Result<Report> {
    let p = common.p;
    validate_prime(p)?;
    validate_branch(p, branch)?;
    let s_q = parse_s(s, p)?;
    let spec = BranchSpec::new(p, branch, &s_q, common.prec)?;
    let r = spec.lp_value(level, &sum_opts(common))?;
    let mut rep = Report::new(
        "zeta",
        p,
        json!({"branch": branch, "s": fmt_rational(&s_q), "prec": common.prec,
               "level": r.level_used, "regularizer": r.regularizer}),
    );
    rep.text = r.value.render();
    rep.value = Some(r.value);
    rep.profile = Some(r.increments);
    Ok(rep)
}

fn lp(common: &Common, twist: i64, s: &str, c: i64, level: Option<u32>) -> Result<Report> {
    let p = common.p;
    validate_prime(p)?;
    validate_c(p, c)?;
    let s_q = parse_s(s, p)?;
    let n = level.unwrap_or(common.prec + 1);
    let balls = measures::checked_pow(p, n)?;
    if balls > common.budget {
        return Err(Error::BudgetExceeded {
            needed: balls,
            budget: common.budget,
            best_precision: None,
        });
    }
    let m = lfunctions::mellin_lp(p, twist, &s_q, c, n, common.prec)?;
    let mut rep = Report::new(
        "lp",
        p,
        json!({"twist": twist.rem_euclid(p as i64 - 1), "s": fmt_rational(&s_q), "c": c,
               "prec": common.prec, "level": n}),
    );
    rep.text = m.value.render();
    rep.value = Some(m.value);
    Ok(rep)
}

fn measure_value(common: &Common, kind: &str, ball: &str) -> Result<Report> {
    let p = common.p;
    validate_prime(p)?;
    let kind: MeasureKind = kind.parse()?;
    let m = BallMeasure::new(p, kind)?;
    let b = ClopenBall::parse(ball, p)?;
    let v = m.value(&b)?;
    let ctx = PadicContext::new(p, common.prec + 2)?;
    let mut rep = Report::new(
        "measure",
        p,
        json!({"measure": m.to_string(), "ball": b.to_string()}),
    );
    rep.text = fmt_rational(&v);
    let shift = rational::valuation(&v, p).unwrap_or(0).min(0);
    rep.value = Some(PadicNumber::from_rational(
        &v,
        &ctx,
        common.prec as i64 + shift,
    ));
    rep.exact = Some(fmt_rational(&v));
    Ok(rep)
}

fn bernoulli(common: &Common, k: usize, twist: Option<i64>) -> Result<Report> {
    let p = common.p;
    validate_prime(p)?;
    let mut rep = Report::new("bernoulli", p, json!({"k": k, "twist": twist}));
    match twist {
        None => {
            let b = bernoulli_number(k);
            let ctx = PadicContext::new(p, common.prec + 2)?;
            let shift = rational::valuation(&b, p).unwrap_or(0).min(0);
            rep.text = fmt_rational(&b);
            rep.value = Some(PadicNumber::from_rational(
                &b,
                &ctx,
                common.prec as i64 + shift,
            ));
            rep.exact = Some(fmt_rational(&b));
        }
        Some(j) => {
            let ctx = PadicContext::new(p, common.prec + 2)?;
            let b = generalized_bernoulli(k, j, &ctx, common.prec as i64)?;
            rep.text = b.render();
            rep.value = Some(b);
        }
    }
    Ok(rep)
}

fn residue(common: &Common, branch: u64, level: u32) -> Result<Report> {
    let p = common.p;
    validate_prime(p)?;
    validate_branch(p, branch)?;
    let budget_needed = measures::checked_pow(p, level)?;
    if budget_needed > common.budget {
        return Err(Error::BudgetExceeded {
            needed: budget_needed,
            budget: common.budget,
            best_precision: None,
        });
    }
    let r = lfunctions::residue_estimate_branch(p, branch, level, common.prec)?;
    let mut rep = Report::new(
        "residue",
        p,
        json!({"branch": branch, "level": level, "prec": common.prec}),
    );
    rep.text = r.render();
    rep.value = Some(r);
    Ok(rep)
}

fn profile(common: &Common, branch: u64, s: &str, max_level: u32) -> Result<Report> {
    let p = common.p;
    validate_prime(p)?;
    validate_branch(p, branch)?;
    let s_q = parse_s(s, p)?;
    let prof = lfunctions::convergence_profile(
        p,
        branch,
        &s_q,
        max_level,
        common.prec,
        &sum_opts(common),
    )?;
    let mut rep = Report::new(
        "profile",
        p,
        json!({"branch": branch, "s": fmt_rational(&s_q), "max_level": max_level, "prec": common.prec}),
    );
    rep.text = prof
        .iter()
        .enumerate()
        .map(|(i, v)| format!("n={} v={}", i + 1, v))
        .collect::<Vec<_>>()
        .join("\n");
    rep.profile = Some(prof);
    Ok(rep)
}

fn verify(check: Check) -> (Common, Result<Report>) {
    match check {
        Check::Theorem1 {
            common,
            max_level,
            c,
        } => {
            let r = (|| {
                let p = common.p;
                validate_prime(p)?;
                validate_c(p, c)?;
                let report =
                    measures::regularization_identity_check(p, c, max_level, common.budget)?;
                let mut rep = Report::new(
                    "verify theorem1",
                    p,
                    json!({"c": c, "max_level": max_level}),
                );
                rep.verdict(report.passed(), &check_text(&report));
                rep.witness = json!({"checked": report.checked, "failures": report.failures});
                Ok(rep)
            })();
            (common, r)
        }
        Check::Additivity {
            common,
            measure,
            max_level,
        } => {
            let r = (|| {
                let p = common.p;
                validate_prime(p)?;
                let m = BallMeasure::new(p, measure.parse()?)?;
                let report = measures::distribution_additivity_check(&m, max_level, common.budget)?;
                let mut rep = Report::new(
                    "verify additivity",
                    p,
                    json!({"measure": m.to_string(), "max_level": max_level}),
                );
                rep.verdict(report.passed(), &check_text(&report));
                rep.witness = json!({"checked": report.checked, "failures": report.failures});
                Ok(rep)
            })();
            (common, r)
        }
        Check::Boundedness {
            common,
            measure,
            max_level,
        } => {
            let r = (|| {
                let p = common.p;
                validate_prime(p)?;
                let m = BallMeasure::new(p, measure.parse()?)?;
                let scan = measures::boundedness_scan(&m, max_level, common.budget)?;
                let exps: Vec<Option<i64>> = scan.iter().map(|b| b.max_abs_exponent).collect();
                // bounded: the sup never exceeds its level-1 value
                let first = exps.first().copied().flatten().unwrap_or(i64::MIN);
                let peak = exps.iter().flatten().copied().max().unwrap_or(i64::MIN);
                let passed = peak <= first;
                let worst = scan
                    .iter().rfind(|b| b.max_abs_exponent == Some(peak))
                    .cloned();
                let mut rep = Report::new(
                    "verify boundedness",
                    p,
                    json!({"measure": m.to_string(), "max_level": max_level}),
                );
                let levels = scan
                    .iter()
                    .map(|b| match b.max_abs_exponent {
                        Some(e) => format!("{}:{}", b.level, e),
                        None => format!("{}:-", b.level),
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                let detail = match (&worst, passed) {
                    (Some(w), false) => format!(
                        "sup |value|_p grows to {p}^{peak} at level {} witness {}; {levels}",
                        w.level,
                        w.witness.as_deref().unwrap_or("-")
                    ),
                    _ => format!("log_p sup |value|_p per level {levels}"),
                };
                rep.verdict(passed, &detail);
                rep.profile = Some(exps.iter().map(|e| e.unwrap_or(i64::MIN)).collect());
                rep.witness = serde_json::to_value(&scan).expect("serializable");
                Ok(rep)
            })();
            (common, r)
        }
        Check::Interpolation {
            common,
            branch,
            k,
            level,
        } => {
            let r = (|| {
                let p = common.p;
                validate_prime(p)?;
                validate_branch(p, branch)?;
                let report = lfunctions::verify_interpolation(
                    p,
                    branch,
                    k,
                    level,
                    common.prec,
                    &sum_opts(&common),
                )?;
                let mut rep = Report::new(
                    "verify interpolation",
                    p,
                    json!({"branch": branch, "k": k, "level": level, "prec": common.prec}),
                );
                rep.verdict(
                    report.passed,
                    &format!(
                        "series {} vs formula {}; agreement {} required {}",
                        report.lhs, report.rhs, report.achieved, report.required
                    ),
                );
                rep.witness = serde_json::to_value(&report).expect("serializable");
                Ok(rep)
            })();
            (common, r)
        }
        Check::CIndependence {
            common,
            branch,
            s,
            level,
            cs,
        } => {
            let r = (|| {
                let p = common.p;
                validate_prime(p)?;
                validate_branch(p, branch)?;
                for &c in &cs {
                    validate_c(p, c)?;
                }
                let s_q = parse_s(&s, p)?;
                let rows = lfunctions::c_independence(p, branch, &s_q, &cs, level, common.prec)?;
                let required = (level as i64 - 1).min(common.prec as i64);
                let passed = rows.iter().all(|r| r.agreement >= required);
                let mut rep = Report::new(
                    "verify c-independence",
                    p,
                    json!({"branch": branch, "s": fmt_rational(&s_q), "level": level, "c": cs}),
                );
                let detail = rows
                    .iter()
                    .map(|r| format!("c={} agreement {}", r.c, r.agreement))
                    .collect::<Vec<_>>()
                    .join(", ");
                rep.verdict(passed, &format!("{detail}; required {required}"));
                rep.profile = Some(rows.iter().map(|r| r.agreement).collect());
                rep.witness = serde_json::to_value(&rows).expect("serializable");
                Ok(rep)
            })();
            (common, r)
        }
        Check::Vanishing {
            common,
            branch,
            s,
            max_level,
        } => {
            let r = (|| {
                let p = common.p;
                validate_prime(p)?;
                validate_branch(p, branch)?;
                let s_q = parse_s(&s, p)?;
                let rows = lfunctions::vanishing_profile(
                    p,
                    branch,
                    &s_q,
                    max_level,
                    common.prec,
                    &sum_opts(&common),
                )?;
                let bad = rows.iter().find(|(n, v)| *v < *n as i64 - 1);
                let mut rep = Report::new(
                    "verify vanishing",
                    p,
                    json!({"branch": branch, "s": fmt_rational(&s_q), "max_level": max_level}),
                );
                let detail = match bad {
                    None => format!("v_p(S_n) >= n-1 for n <= {max_level}"),
                    Some((n, v)) => format!("witness level {n}: v_p(S_n) = {v}"),
                };
                rep.verdict(bad.is_none(), &detail);
                rep.profile = Some(rows.iter().map(|(_, v)| *v).collect());
                rep.witness = match bad {
                    Some((n, v)) => json!({"level": n, "valuation": v}),
                    None => Value::Null,
                };
                Ok(rep)
            })();
            (common, r)
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Zeta { .. } => "zeta",
        Command::Lp { .. } => "lp",
        Command::Measure { .. } => "measure",
        Command::Bernoulli { .. } => "bernoulli",
        Command::Residue { .. } => "residue",
        Command::Profile { .. } => "profile",
        Command::Verify { check } => match check {
            Check::Theorem1 { .. } => "verify theorem1",
            Check::Additivity { .. } => "verify additivity",
            Check::Boundedness { .. } => "verify boundedness",
            Check::Interpolation { .. } => "verify interpolation",
            Check::CIndependence { .. } => "verify c-independence",
            Check::Vanishing { .. } => "verify vanishing",
        },
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome {
                code,
                output: e.to_string().trim_end().to_string(),
            };
        }
    };
    let name = command_name(&cli.command);
    let (common, result) = dispatch(cli.command);
    let (p, as_json) = (common.p, common.json);
    match result {
        Ok(report) => Outcome {
            code: report.code(),
            output: report.render(as_json),
        },
        Err(e) => {
            let code = if e.is_mathematical() {
                EXIT_MATH
            } else {
                EXIT_USAGE
            };
            let output = if as_json {
                json!({
                    "command": name,
                    "p": p,
                    "inputs": Value::Null,
                    "value": Value::Null,
                    "profile": Value::Null,
                    "status": Status::Error,
                    "witness": Value::Null,
                    "error": {"kind": e.kind(), "message": e.to_string()},
                })
                .to_string()
            } else {
                format!("error[{}]: {}", e.kind(), e)
            };
            Outcome { code, output }
        }
    }
}
