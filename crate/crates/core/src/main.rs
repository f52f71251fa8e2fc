//! Command-line surface: simulate growth, compute exact quantities, run
//! the brute-force oracles, check limit laws, and execute the
//! verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification gate fails, 2 on usage
//! errors, 3 on capacity/budget errors. Every subcommand is deterministic
//! given its flags and seed. Human summaries go to stdout; machine output
//! goes to the `--json` / `--csv` paths.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hyperrec::combinatorics::StirlingTable;
use hyperrec::error::Error;
use hyperrec::global_profile::{
    asymptotic_cov, clt_params, exact_cov, martingale_factors, second_moments_recurrence,
};
use hyperrec::growth::{DrawSource, TreeState};
use hyperrec::local_profile::{exact_mean, exact_pmf, exact_variance, limit_law, Regime};
use hyperrec::montecarlo::{run_global, run_local, SimConfig, TestReport};
use hyperrec::oracle::{
    dp_joint_distribution_with_budget, enumerate_histories_with_budget, DP_BUDGET_DEFAULT,
    HISTORY_BUDGET_DEFAULT,
};
use hyperrec::rational::{to_f64, ExactRational, RationalRepr};
use hyperrec::verify::{run_suite, suite_passes, Suite};

const TABLE_CAP_DEFAULT: usize = 2000;

#[derive(Parser)]
#[command(
    name = "hyperrec",
    version,
    about = "Containment profiles of hyperrecursive trees: exact laws, oracles, simulation, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow trees or sample one vertex's containment level.
    Simulate(SimulateArgs),
    /// Exact rational quantities (pmf, moments, covariance, martingale).
    Exact {
        #[command(subcommand)]
        mode: ExactMode,
    },
    /// Brute-force ground truth: Markov-chain DP and history enumeration.
    Oracle {
        #[command(subcommand)]
        mode: OracleMode,
    },
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Asymptotic limit-law descriptors.
    Limits {
        #[command(subcommand)]
        target: LimitsTarget,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Write machine-readable JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write machine-readable CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    theta: u32,
    /// Number of growth steps n.
    #[arg(long)]
    steps: u64,
    #[arg(long, default_value_t = 1)]
    replicates: u64,
    #[arg(long)]
    seed: u64,
    /// Track the containment of this vertex label (local mode).
    #[arg(long)]
    track_vertex: Option<u64>,
    /// Emit the full grown tree state of replicate 0 as JSON.
    #[arg(long)]
    emit_state: bool,
    /// Record per-replicate martingale values (global mode).
    #[arg(long)]
    record_martingale: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum ExactMode {
    /// Exact pmf of C_{n,k}.
    Pmf {
        #[arg(long)]
        theta: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Cap on the Stirling row (overrides HYPERREC_TABLE_CAP).
        #[arg(long)]
        table_cap: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact mean and variance of C_{n,k}.
    LocalMoments {
        #[arg(long)]
        theta: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact joint moments of (X_{n,1}, X_{n,2}).
    GlobalMoments {
        #[arg(long)]
        theta: u32,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Covariance matrix, per-age exact or the scaled limit.
    Cov {
        #[arg(long)]
        theta: u32,
        #[arg(long, conflicts_with = "asymptotic")]
        n: Option<u64>,
        /// The limit of Sigma_n / n instead of a finite age.
        #[arg(long)]
        asymptotic: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Martingale factors r_j, s_j for j = 0..=n.
    Martingale {
        #[arg(long)]
        theta: u32,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum OracleMode {
    /// Exact joint law of (X_{n,1}, X_{n,2}) by forward DP.
    Dp {
        #[arg(long)]
        theta: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DP_BUDGET_DEFAULT)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive growth histories of a tiny tree.
    Histories {
        #[arg(long)]
        theta: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = HISTORY_BUDGET_DEFAULT)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Exact,
    Statistical,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Fixed,
    Early,
    Intermediate,
    Late,
}

#[derive(Subcommand)]
enum LimitsTarget {
    /// Limit law of C_{n,k} in a declared regime.
    Local {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long)]
        theta: u32,
        /// Fixed vertex label (fixed regime only).
        #[arg(long)]
        k: Option<u64>,
        /// Linear fraction for the intermediate regime.
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CLT descriptors for X_{n,1}.
    Global {
        #[arg(long)]
        theta: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Capacity(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn rational_json(r: &ExactRational) -> serde_json::Value {
    let repr = RationalRepr::from(r);
    json!({ "num": repr.num, "den": repr.den })
}

fn write_outputs(
    output: &OutputArgs,
    json_value: Option<&serde_json::Value>,
    csv_text: Option<&str>,
) -> hyperrec::Result<()> {
    if let (Some(path), Some(value)) = (&output.json, json_value) {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(path, text)?;
    }
    if let (Some(path), Some(text)) = (&output.csv, csv_text) {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn run(cli: Cli) -> hyperrec::Result<ExitCode> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Exact { mode } => cmd_exact(mode),
        Command::Oracle { mode } => cmd_oracle(mode),
        Command::Verify(args) => cmd_verify(args),
        Command::Limits { target } => cmd_limits(target),
    }
}

fn cmd_simulate(args: SimulateArgs) -> hyperrec::Result<ExitCode> {
    let config = SimConfig {
        theta: args.theta,
        n: args.steps,
        replicates: args.replicates,
        master_seed: args.seed,
        tracked_vertex: args.track_vertex,
        record_martingale: args.record_martingale,
    };
    config.validate()?;

    if args.emit_state {
        let mut state = TreeState::init(args.theta)?.with_edge_recording();
        let mut draws = DrawSource::seeded_stream(args.seed, 0);
        state.grow_many(args.steps, &mut draws)?;
        let value = serde_json::to_value(&state)?;
        println!("{}", serde_json::to_string(&value)?);
        write_outputs(&args.output, Some(&value), None)?;
        return Ok(ExitCode::SUCCESS);
    }

    if let Some(k) = args.track_vertex {
        let run = run_local(&config)?;
        let counts = run.counts();
        let mut csv = String::from("r,count,freq\n");
        for (j, &c) in counts.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{},{},{:.16e}",
                j + 1,
                c,
                c as f64 / run.replicates as f64
            );
        }
        let value = json!({
            "config": config,
            "counts": counts,
            "sample_mean": run.sample_mean(),
            "exact_mean": to_f64(&exact_mean(args.theta, args.steps, k)?),
        });
        println!(
            "local sample: theta={} n={} k={} replicates={} sample_mean={:.6}",
            args.theta,
            args.steps,
            k,
            args.replicates,
            run.sample_mean()
        );
        write_outputs(&args.output, Some(&value), Some(&csv))?;
        return Ok(ExitCode::SUCCESS);
    }

    let run = run_global(&config)?;
    let mut csv = String::from(if run.martingale.is_some() {
        "replicate,x1,x2,martingale\n"
    } else {
        "replicate,x1,x2\n"
    });
    for i in 0..run.x1.len() {
        match &run.martingale {
            Some(m) => {
                let _ = writeln!(csv, "{},{},{},{:.16e}", i, run.x1[i], run.x2[i], m[i]);
            }
            None => {
                let _ = writeln!(csv, "{},{},{}", i, run.x1[i], run.x2[i]);
            }
        }
    }
    let value = json!({
        "config": config,
        "x1": run.x1,
        "x2": run.x2,
        "martingale": run.martingale,
        "mean_x1": run.mean_x1(),
        "mean_x2": run.mean_x2(),
        "var_x1": run.var_x1(),
        "var_x2": run.var_x2(),
        "cov_x1_x2": run.cov_x1_x2(),
    });
    println!(
        "global sample: theta={} n={} replicates={} mean_x1={:.6} mean_x2={:.6} var_x1={:.6}",
        args.theta,
        args.steps,
        args.replicates,
        run.mean_x1(),
        run.mean_x2(),
        run.var_x1()
    );
    write_outputs(&args.output, Some(&value), Some(&csv))?;
    Ok(ExitCode::SUCCESS)
}

fn table_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("HYPERREC_TABLE_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(TABLE_CAP_DEFAULT)
}

fn cmd_exact(mode: ExactMode) -> hyperrec::Result<ExitCode> {
    match mode {
        ExactMode::Pmf {
            theta,
            n,
            k,
            table_cap: cap_flag,
            output,
        } => {
            if k > n {
                return Err(Error::Range(format!("k={k} exceeds n={n}")));
            }
            let cap = table_cap(cap_flag);
            let m = (n - k) as usize;
            if m > cap {
                return Err(Error::Capacity(format!(
                    "pmf needs Stirling row {m}, cap is {cap} (raise --table-cap or HYPERREC_TABLE_CAP)"
                )));
            }
            let table = StirlingTable::new(m);
            let pmf = exact_pmf(theta, n, k, &table)?;
            let rows = pmf.rows();
            let value = json!({
                "theta": theta, "n": n, "k": k,
                "rows": rows,
            });
            println!(
                "pmf: theta={theta} n={n} k={k} support=1..={} mean={:.6} variance={:.6}",
                pmf.support_size(),
                to_f64(&pmf.mean()),
                to_f64(&pmf.variance())
            );
            write_outputs(&output, Some(&value), Some(&pmf.to_csv()))?;
        }
        ExactMode::LocalMoments {
            theta,
            n,
            k,
            output,
        } => {
            let mean = exact_mean(theta, n, k)?;
            let variance = exact_variance(theta, n, k)?;
            let value = json!({
                "theta": theta, "n": n, "k": k,
                "mean": rational_json(&mean),
                "variance": rational_json(&variance),
                "mean_f64": to_f64(&mean),
                "variance_f64": to_f64(&variance),
            });
            println!(
                "local moments: E[C]={}/{} ~ {:.6}; V[C]={}/{} ~ {:.6}",
                mean.numer(),
                mean.denom(),
                to_f64(&mean),
                variance.numer(),
                variance.denom(),
                to_f64(&variance)
            );
            let csv = format!(
                "quantity,num,den,float\nmean,{},{},{:.16e}\nvariance,{},{},{:.16e}\n",
                mean.numer(),
                mean.denom(),
                to_f64(&mean),
                variance.numer(),
                variance.denom(),
                to_f64(&variance)
            );
            write_outputs(&output, Some(&value), Some(&csv))?;
        }
        ExactMode::GlobalMoments { theta, n, output } => {
            let m = second_moments_recurrence(theta, n)?;
            let limit_cov = asymptotic_cov(theta)?;
            let params = clt_params(theta)?;
            let value = json!({
                "theta": theta, "n": n,
                "e1": rational_json(&m.e1),
                "e2": rational_json(&m.e2),
                "e11": rational_json(&m.e11),
                "e12": rational_json(&m.e12),
                "e22": rational_json(&m.e22),
                "var1": rational_json(&m.var1()),
                "cov12": rational_json(&m.cov12()),
                "var2": rational_json(&m.var2()),
                "e1_f64": to_f64(&m.e1),
                "e2_f64": to_f64(&m.e2),
                "limits": {
                    "var1_over_n": rational_json(&limit_cov.var1),
                    "cov12_over_n": rational_json(&limit_cov.cov12),
                    "var2_over_n": rational_json(&limit_cov.var2),
                    "clt_centering": format!("n/{theta}"),
                    "clt_scale": "sqrt(n)",
                    "clt_variance": rational_json(&params.limit_variance),
                },
            });
            println!(
                "global moments: E[X1]={}/{} ~ {:.6}; E[X2]={}/{} ~ {:.6}",
                m.e1.numer(),
                m.e1.denom(),
                to_f64(&m.e1),
                m.e2.numer(),
                m.e2.denom(),
                to_f64(&m.e2)
            );
            let csv = format!(
                "quantity,num,den,float\n\
                 e1,{},{},{:.16e}\ne2,{},{},{:.16e}\ne11,{},{},{:.16e}\n\
                 e12,{},{},{:.16e}\ne22,{},{},{:.16e}\n",
                m.e1.numer(),
                m.e1.denom(),
                to_f64(&m.e1),
                m.e2.numer(),
                m.e2.denom(),
                to_f64(&m.e2),
                m.e11.numer(),
                m.e11.denom(),
                to_f64(&m.e11),
                m.e12.numer(),
                m.e12.denom(),
                to_f64(&m.e12),
                m.e22.numer(),
                m.e22.denom(),
                to_f64(&m.e22),
            );
            write_outputs(&output, Some(&value), Some(&csv))?;
        }
        ExactMode::Cov {
            theta,
            n,
            asymptotic,
            output,
        } => {
            let cov = if asymptotic {
                asymptotic_cov(theta)?
            } else {
                let n = n.ok_or_else(|| {
                    Error::Parameter("either --n or --asymptotic is required".into())
                })?;
                exact_cov(theta, n)?
            };
            let value = json!({
                "theta": theta,
                "n": n,
                "scaled": cov.scaled,
                "var1": rational_json(&cov.var1),
                "cov12": rational_json(&cov.cov12),
                "var2": rational_json(&cov.var2),
                "var1_f64": to_f64(&cov.var1),
                "cov12_f64": to_f64(&cov.cov12),
                "var2_f64": to_f64(&cov.var2),
            });
            println!(
                "{}: var1={}/{} cov12={}/{} var2={}/{}",
                if cov.scaled {
                    "limit of Sigma_n/n"
                } else {
                    "covariance at age n"
                },
                cov.var1.numer(),
                cov.var1.denom(),
                cov.cov12.numer(),
                cov.cov12.denom(),
                cov.var2.numer(),
                cov.var2.denom()
            );
            let csv = format!(
                "entry,num,den,float\nvar1,{},{},{:.16e}\ncov12,{},{},{:.16e}\nvar2,{},{},{:.16e}\n",
                cov.var1.numer(),
                cov.var1.denom(),
                to_f64(&cov.var1),
                cov.cov12.numer(),
                cov.cov12.denom(),
                to_f64(&cov.cov12),
                cov.var2.numer(),
                cov.var2.denom(),
                to_f64(&cov.var2),
            );
            write_outputs(&output, Some(&value), Some(&csv))?;
        }
        ExactMode::Martingale { theta, n, output } => {
            let mut csv = String::from("n,r_num,r_den,s_num,s_den\n");
            let mut rows = Vec::new();
            for j in 0..=n {
                let f = martingale_factors(theta, j)?;
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    j,
                    f.r.numer(),
                    f.r.denom(),
                    f.s.numer(),
                    f.s.denom()
                );
                rows.push(json!({
                    "n": j,
                    "r": rational_json(&f.r),
                    "s": rational_json(&f.s),
                }));
            }
            let last = martingale_factors(theta, n)?;
            println!(
                "martingale factors at n={n}: r={}/{} s={}/{}",
                last.r.numer(),
                last.r.denom(),
                last.s.numer(),
                last.s.denom()
            );
            let value = json!({ "theta": theta, "factors": rows });
            write_outputs(&output, Some(&value), Some(&csv))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(mode: OracleMode) -> hyperrec::Result<ExitCode> {
    match mode {
        OracleMode::Dp {
            theta,
            n,
            budget,
            output,
        } => {
            let dp = dp_joint_distribution_with_budget(theta, n, budget)?;
            let last = &dp[n as usize];
            let mut map = serde_json::Map::new();
            for (&(x1, x2), p) in &last.mass {
                map.insert(format!("{x1},{x2}"), rational_json(p));
            }
            let value = serde_json::Value::Object(map);
            println!(
                "DP law at theta={theta}, n={n}: {} states",
                last.mass.len()
            );
            let mut csv = String::from("x1,x2,num,den\n");
            for (&(x1, x2), p) in &last.mass {
                let _ = writeln!(csv, "{x1},{x2},{},{}", p.numer(), p.denom());
            }
            write_outputs(&output, Some(&value), Some(&csv))?;
        }
        OracleMode::Histories {
            theta,
            n,
            budget,
            output,
        } => {
            let ensemble = enumerate_histories_with_budget(theta, n, budget)?;
            let outcomes: Vec<serde_json::Value> = ensemble
                .outcomes
                .iter()
                .map(|(profile, p)| json!({ "containment": profile, "prob": rational_json(p) }))
                .collect();
            println!(
                "history ensemble: theta={theta} n={n} outcomes={}",
                ensemble.outcomes.len()
            );
            let value = json!({ "theta": theta, "n": n, "outcomes": outcomes });
            let mut csv = String::from("containment,num,den\n");
            for (profile, p) in &ensemble.outcomes {
                let profile_str: Vec<String> = profile.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    profile_str.join(" "),
                    p.numer(),
                    p.denom()
                );
            }
            write_outputs(&output, Some(&value), Some(&csv))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> hyperrec::Result<ExitCode> {
    let suite = match args.suite {
        SuiteArg::Exact => Suite::Exact,
        SuiteArg::Statistical => Suite::Statistical,
        SuiteArg::All => Suite::All,
    };
    let reports = run_suite(suite, args.seed)?;
    for report in &reports {
        println!(
            "[{}] {} statistic={:.6e}{}{}",
            if report.pass { "PASS" } else { "FAIL" },
            report.name,
            report.statistic,
            report
                .p_value
                .map(|p| format!(" p={p:.3e}"))
                .unwrap_or_default(),
            report.dof.map(|d| format!(" dof={d}")).unwrap_or_default(),
        );
    }
    if let Some(path) = &args.output.json {
        let mut lines = String::new();
        for report in &reports {
            lines.push_str(&serde_json::to_string(report)?);
            lines.push('\n');
        }
        std::fs::write(path, lines)?;
    }
    if let Some(path) = &args.output.csv {
        let mut text = String::from(TestReport::csv_header());
        text.push('\n');
        for report in &reports {
            text.push_str(&report.to_csv_row());
            text.push('\n');
        }
        std::fs::write(path, text)?;
    }
    let all_pass = suite_passes(&reports);
    println!(
        "{}: {} of {} checks passed",
        if all_pass { "OK" } else { "FAILED" },
        reports.iter().filter(|r| r.pass).count(),
        reports.len()
    );
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_limits(target: LimitsTarget) -> hyperrec::Result<ExitCode> {
    match target {
        LimitsTarget::Local {
            regime,
            theta,
            k,
            alpha,
            output,
        } => {
            let regime = match regime {
                RegimeArg::Fixed => Regime::FixedK(
                    k.ok_or_else(|| Error::Regime("the fixed regime needs --k".into()))?,
                ),
                RegimeArg::Early => Regime::Early,
                RegimeArg::Intermediate => Regime::Intermediate {
                    alpha: alpha.ok_or_else(|| {
                        Error::Regime("the intermediate regime needs --alpha".into())
                    })?,
                },
                RegimeArg::Late => Regime::Late,
            };
            if matches!(regime, Regime::Intermediate { .. }) && k.is_some() {
                return Err(Error::Regime(
                    "--k does not apply to the intermediate regime".into(),
                ));
            }
            if alpha.is_some() && !matches!(regime, Regime::Intermediate { .. }) {
                return Err(Error::Regime(
                    "--alpha only applies to the intermediate regime".into(),
                ));
            }
            let law = limit_law(regime, theta)?;
            let value = serde_json::to_value(&law)?;
            println!("{}", serde_json::to_string(&value)?);
            write_outputs(&output, Some(&value), None)?;
        }
        LimitsTarget::Global { theta, output } => {
            let params = clt_params(theta)?;
            let value = json!({
                "theta": theta,
                "centering": format!("n/{theta}"),
                "scale": "sqrt(n)",
                "limit_variance": rational_json(&params.limit_variance),
                "limit_variance_f64": to_f64(&params.limit_variance),
                "vn_scale": format!("n^({theta} - 1/2)"),
                "vn_limit": rational_json(&params.vn_limit),
                "vn_limit_f64": to_f64(&params.vn_limit),
            });
            println!("{}", serde_json::to_string(&value)?);
            write_outputs(&output, Some(&value), None)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
