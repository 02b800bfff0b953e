mod args;
mod report;

use args::{AuditArgs, AvgdegArgs, BenchArgs, Cli, Command, EstimatorKind, FamilyKind, GenArgs, GraphSource, SizeArgs, Suite};
use clap::Parser;
use dpsublinear::audit::{self, GreedyAudit, Mechanism, PrivacyAuditConfig, StageAudit};
use dpsublinear::avg_degree::{estimate_average_degree, AvgDegreeParams};
use dpsublinear::graph::{load_edge_list, save_edge_list, write_edge_list, Family};
use dpsublinear::matching::{estimate_matching_size, estimate_matching_size_dp, estimate_vc_size, estimate_vc_size_dp};
use dpsublinear::trials::{run_bench, summarize, Estimator};
use dpsublinear::{Execution, Graph, NoiseSource, Oracle};
use report::{AvgdegReport, Eps, GenReport, SizeReport};
use serde::Serialize;
use std::io::Write;
use std::process::ExitCode;

enum Failure {
    /// Bad flags, unreadable or malformed input, invalid parameters.
    Input(String),
    Internal(String),
}

impl From<dpsublinear::Error> for Failure {
    fn from(e: dpsublinear::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    timing: bool,
    exec: Execution,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, human: impl FnOnce() -> String) -> Outcome {
        let text = if self.json {
            serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?
        } else {
            human()
        };
        let mut out = std::io::stdout().lock();
        writeln!(out, "{text}").map_err(|e| Failure::Internal(format!("writing output: {e}")))
    }
}

fn family(kind: FamilyKind, n: Option<usize>, p: Option<f64>, d: Option<usize>) -> Result<Family, Failure> {
    let n = n.ok_or_else(|| Failure::Input("--n is required with --family".into()))?;
    Ok(match kind {
        FamilyKind::Gnp => Family::Gnp {
            n,
            p: p.ok_or_else(|| Failure::Input("--p is required for gnp".into()))?,
        },
        FamilyKind::DRegular => Family::DRegular {
            n,
            d: d.ok_or_else(|| Failure::Input("--d is required for d-regular".into()))?,
        },
        FamilyKind::Star => Family::Star(n),
        FamilyKind::Path => Family::Path(n),
        FamilyKind::Complete => Family::Complete(n),
        FamilyKind::PerfectMatching => Family::PerfectMatching(n),
        FamilyKind::Empty => Family::Empty(n),
    })
}

/// Loads or generates the input graph; also returns a label for reports
/// and the family, when there is one.
fn load(src: &GraphSource) -> Result<(Graph, String, Option<Family>), Failure> {
    match (&src.graph, src.family) {
        (Some(path), _) => {
            let g = load_edge_list(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            log::info!("loaded {} (n = {}, m = {})", path.display(), g.n(), g.m());
            Ok((g, path.display().to_string(), None))
        }
        (None, Some(kind)) => {
            let f = family(kind, src.n, src.p, src.d)?;
            let g = f.generate(src.graph_seed)?;
            Ok((g, format!("{} seed {}", f.to_string(), src.graph_seed), Some(f)))
        }
        (None, None) => Err(Failure::Input("give --graph FILE or --family ...".into())),
    }
}

fn gen(ctx: &Ctx, a: &GenArgs) -> Outcome {
    let f = family(a.family, Some(a.n), a.p, a.d)?;
    let g = f.generate(a.seed)?;
    match &a.out {
        Some(path) => {
            save_edge_list(&g, path).map_err(|e| Failure::Internal(e.to_string()))?;
            let r = GenReport {
                family: f.to_string(),
                n: g.n(),
                m: g.m(),
                average_degree: g.average_degree(),
                seed: a.seed,
                out: path.display().to_string(),
            };
            ctx.emit(&r, || format!("wrote n = {}, m = {} to {}", r.n, r.m, r.out))
        }
        None => write_edge_list(&g, std::io::stdout().lock()).map_err(|e| Failure::Internal(e.to_string())),
    }
}

fn avgdeg(ctx: &Ctx, a: &AvgdegArgs) -> Outcome {
    let (g, label, _) = load(&a.source)?;
    let beta = a.beta.unwrap_or(a.rho / 8.0);
    let p = AvgDegreeParams::new(g.n(), a.rho, beta, a.eps)?;
    for w in &p.warnings {
        log::warn!("{w}");
    }
    let r = estimate_average_degree(&mut Oracle::new(&g), &p, &NoiseSource::new(a.seed))?;
    let rep = AvgdegReport::new(label, r, ctx.timing);
    ctx.emit(&rep, || {
        format!(
            "average degree ~ {:.4} ({} branch, eps = {}, {} degree + {} neighbor queries)",
            rep.estimate, rep.branch, rep.eps, rep.degree_queries, rep.neighbor_queries
        )
    })
}

fn size(ctx: &Ctx, a: &SizeArgs, vc: bool) -> Outcome {
    let (g, label, _) = load(&a.source)?;
    let eps = a.eps.filter(|e| e.is_finite());
    let src = NoiseSource::new(a.seed);
    let mut h = Oracle::new(&g);
    let r = match (vc, eps) {
        (false, Some(e)) => estimate_matching_size_dp(&mut h, a.rho, e, &src)?,
        (false, None) => estimate_matching_size(&mut h, a.rho, &src)?,
        (true, Some(e)) => estimate_vc_size_dp(&mut h, a.rho, e, &src)?,
        (true, None) => estimate_vc_size(&mut h, a.rho, &src)?,
    };
    let what = if vc { "vertex cover" } else { "matching" };
    let rep = SizeReport::new(label, if vc { "vc" } else { "matching" }, g.n(), a.rho, eps, r, ctx.timing);
    ctx.emit(&rep, || {
        format!(
            "{what} size ~ {:.2} (eps = {}, s = {}, {} queries)",
            rep.clamped,
            rep.eps,
            rep.s,
            rep.queries.total()
        )
    })
}

fn audit_cmd(ctx: &Ctx, a: &AuditArgs) -> Outcome {
    let exec = ctx.exec;
    match a.suite {
        Suite::GreedyCgs | Suite::MatchedSet => {
            let cfg = GreedyAudit::new(a.max_n.unwrap_or(5), a.samples.unwrap_or(200), a.seed);
            if cfg.max_n > 7 {
                return Err(Failure::Input(format!("--max-n {} too large for an exhaustive sweep (limit 7)", cfg.max_n)));
            }
            let r = if a.suite == Suite::GreedyCgs {
                audit::audit_greedy_matching_cgs(&cfg, exec)
            } else {
                audit::audit_matched_set_difference(&cfg, exec)
            };
            sensitivity(ctx, &[r])
        }
        Suite::Stages => {
            let cfg = StageAudit {
                n: a.max_n.unwrap_or(6),
                instances: a.samples.unwrap_or(1000),
                seed: a.seed,
                ..StageAudit::default()
            };
            if cfg.n < 2 {
                return Err(Failure::Input("--max-n must be at least 2".into()));
            }
            let cfg = StageAudit { sample_size: cfg.sample_size.min(cfg.n - 1).max(1), ..cfg };
            sensitivity(ctx, &audit::audit_stage_sensitivities(&cfg, exec)?)
        }
        Suite::Alpha => {
            let fx = audit::AlphaFixture::gnp(200, 0.05, 60.0, 10, a.seed)?;
            sensitivity(ctx, &audit::audit_alpha(&fx, a.samples.unwrap_or(10_000), 0.05, a.seed, exec)?)
        }
        Suite::Privacy => {
            let samples = a.samples.unwrap_or(100_000);
            let base = Family::Path(50).generate(0)?;
            let cut = base.with_edge_toggled(24, 25)?;
            let runs = [
                (
                    Mechanism::Laplace { first: 0.0, second: 1.0, cgs: 1.0, eps: 0.5 },
                    PrivacyAuditConfig { samples, bin_width: 0.1, slack: 0.05, seed: a.seed, ..Default::default() },
                ),
                (
                    Mechanism::DpMatching { first: &base, second: &cut, rho: 0.3, eps: 1.0 },
                    PrivacyAuditConfig { samples, bin_width: 0.25, slack: 0.15, seed: a.seed, ..Default::default() },
                ),
            ];
            let reports = runs
                .iter()
                .map(|(m, c)| audit::audit_privacy(m, c, exec))
                .collect::<Result<Vec<_>, _>>()?;
            ctx.emit(&reports, || {
                reports
                    .iter()
                    .map(|r| {
                        format!(
                            "{:<12} eps_hat = {:.4} (raw {:.4}) vs claimed {} + {}: {:?}",
                            r.mechanism, r.eps_hat, r.eps_hat_raw, r.eps_claimed, r.slack, r.status
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Suite::Doctor => {
            let r = audit::doctor_example();
            ctx.emit(&[&r], || {
                format!(
                    "identity coupling gap at IEI = {}, max over coins = {}; aligned coupling max = {}: {}",
                    r.identity_at_iei,
                    r.identity_max,
                    r.aligned_max,
                    if r.pass { "pass" } else { "FAIL" }
                )
            })
        }
    }
}

fn sensitivity(ctx: &Ctx, reports: &[audit::SensitivityReport]) -> Outcome {
    ctx.emit(&reports, || {
        reports
            .iter()
            .map(|r| {
                format!(
                    "{:<40} observed {:.4} <= {:.4} over {} cases: {}",
                    r.claim,
                    r.observed_max,
                    r.bound,
                    r.cases_checked,
                    if r.pass { "pass" } else { "FAIL" }
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    })?;
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Internal("sensitivity bound violated".into()))
    }
}

fn bench(ctx: &Ctx, a: &BenchArgs) -> Outcome {
    let (g, label, fam) = load(&a.source)?;
    let eps = a.eps.filter(|e| e.is_finite());
    let (est, reference) = match a.estimator {
        EstimatorKind::Avgdeg => {
            let beta = a.beta.unwrap_or(a.rho / 8.0);
            let p = AvgDegreeParams::new(g.n(), a.rho, beta, a.eps.unwrap_or(f64::INFINITY))?;
            (Estimator::AvgDegree(p), Some(g.average_degree()))
        }
        EstimatorKind::Matching => (
            Estimator::Matching { rho: a.rho, eps },
            fam.and_then(|f| f.matching_number()).map(|m| m as f64),
        ),
        EstimatorKind::Vc => (
            Estimator::VertexCover { rho: a.rho, eps },
            fam.and_then(|f| f.vertex_cover_number()).map(|c| c as f64),
        ),
    };
    let reference = a.reference.or(reference);
    let mut records = run_bench(&g, &est, a.trials, a.seed, reference, ctx.exec)?;
    if !ctx.timing {
        for r in &mut records {
            r.wall_time_ms = 0.0;
        }
    }
    let summary = summarize(&records);
    let line = format!(
        "{} on {label}: rho = {}, eps = {}, seed = {}: {summary}",
        est.name(),
        a.rho,
        Eps(eps.unwrap_or(f64::INFINITY)),
        a.seed
    );
    if ctx.json {
        eprintln!("{line}");
    }
    ctx.emit(&records, || {
        let mut s: Vec<String> = records
            .iter()
            .map(|r| {
                format!(
                    "trial {:>4}  estimate {:>12.4}  error {:>10}  queries {}",
                    r.trial,
                    r.estimate,
                    r.abs_error.map_or("-".into(), |e| format!("{e:.4}")),
                    r.queries.total()
                )
            })
            .collect();
        s.push(line.clone());
        s.join("\n")
    })
}

fn run(cli: Cli) -> Outcome {
    let threads = cli.threads.unwrap_or(0);
    if threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let ctx = Ctx {
        json: cli.json,
        timing: !cli.no_timing,
        exec: if threads == 1 { Execution::Sequential } else { Execution::Parallel },
    };
    match &cli.command {
        Command::Gen(a) => gen(&ctx, a),
        Command::Avgdeg(a) => avgdeg(&ctx, a),
        Command::Matching(a) => size(&ctx, a, false),
        Command::Vc(a) => size(&ctx, a, true),
        Command::Audit(a) => audit_cmd(&ctx, a),
        Command::Bench(a) => bench(&ctx, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
