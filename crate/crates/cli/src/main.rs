use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sftgroup::cocycle::{self, MembershipMode, ZeroProbe};
use sftgroup::coe::{self, DeriveParams, NonCommuting, ScoeCertificate};
use sftgroup::io;
use sftgroup::step::{is_sigma_coboundary, CoboundaryCertificate};
use sftgroup::{CoeWitness, EpPoint, Error, Sft, StepFunction, TableHomeo, DEFAULT_DEPTH_CAP};

mod report;

use report::{render_error, Fact, Format, Report, Status};

#[derive(Parser)]
#[command(name = "sftgroup", version, about = "Full groups, cocycles and orbit equivalences of one-sided Markov shifts")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Opts {
    /// Cylinder depth for derivations; search depth for coboundary solving.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    /// Largest admissible k or l in derived cocycles.
    #[arg(long, global = true, default_value_t = 16)]
    bound: usize,
    /// Longest periodic orbit checked for coboundary obstructions.
    #[arg(long = "cycle-bound", global = true, default_value_t = 12)]
    cycle_bound: usize,
    /// Refinement stops at this cylinder length.
    #[arg(long = "depth-cap", global = true, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    /// Line-oriented output: `kv` (the default when given bare) or `json`.
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, default_missing_value = "kv", value_enum)]
    structured: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

impl Opts {
    fn params(&self) -> Vec<(&'static str, String)> {
        vec![
            ("depth", self.depth.to_string()),
            ("bound", self.bound.to_string()),
            ("cycle_bound", self.cycle_bound.to_string()),
            ("depth_cap", self.depth_cap.to_string()),
            ("seed", self.seed.to_string()),
        ]
    }

    fn derive(&self) -> DeriveParams {
        DeriveParams { depth: self.depth, bound: self.bound, cap: self.depth_cap }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Transition matrices.
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Eventually periodic points.
    #[command(subcommand)]
    Point(PointCmd),
    /// Step functions.
    #[command(name = "fn", subcommand)]
    Fn(FnCmd),
    /// Full-group elements given as tables.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Cocycles and subgroup membership.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Orbit-equivalence witnesses.
    #[command(subcommand)]
    Coe(CoeCmd),
    /// Searches for evidence that a cocycle is nonzero.
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Runs the seeded property suites.
    Selftest {
        /// Run only these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum MatrixCmd {
    Check { matrix: PathBuf },
    Invariants { matrix: PathBuf },
    Words { matrix: PathBuf, length: usize },
}

#[derive(Subcommand)]
enum PointCmd {
    Shift { matrix: PathBuf, point: String, m: usize },
}

#[derive(Subcommand)]
enum FnCmd {
    Eval { matrix: PathBuf, function: PathBuf, point: String },
    /// `f∘σ^m`.
    Shift { matrix: PathBuf, function: PathBuf, m: usize },
    /// `f^m = Σ_{i<m} f∘σ^i`.
    OrbitSum { matrix: PathBuf, function: PathBuf, m: usize },
    /// Decides `f = g − g∘σ`.
    Coboundary { matrix: PathBuf, function: PathBuf },
}

#[derive(Subcommand)]
enum GroupCmd {
    Apply { matrix: PathBuf, table: PathBuf, point: String },
    /// `second ∘ first`.
    Compose { matrix: PathBuf, second: PathBuf, first: PathBuf },
    Invert { matrix: PathBuf, table: PathBuf },
    /// `l`, `k` and `d = l − k`.
    Data { matrix: PathBuf, table: PathBuf },
    GenSwap { matrix: PathBuf, a: u8, b: u8, m: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Af,
    Cocycle,
    Coboundary,
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// `x ↦ ρ^f(x, τ)`.
    Rho { matrix: PathBuf, function: PathBuf, table: PathBuf },
    /// `Ψ_τ(f)`.
    Psi { matrix: PathBuf, table: PathBuf, function: PathBuf },
    /// `δ_g(x, τ) = g(x) − g(τx)`.
    Delta { matrix: PathBuf, function: PathBuf, table: PathBuf },
    /// `1_b = 1 − b + b∘σ`.
    OneB { matrix: PathBuf, function: PathBuf },
    Member {
        matrix: PathBuf,
        table: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// `f` for cocycle mode, `b` for coboundary mode.
        #[arg(long)]
        function: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CoeCmd {
    Validate { witness: PathBuf },
    Apply {
        witness: PathBuf,
        point: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Cocycle functions `k1, l1, c1` and `k2, l2, c2`.
    Derive { witness: PathBuf },
    /// `Ψ_h(f)` for `f` on the target.
    Psi { witness: PathBuf, function: PathBuf },
    /// `h∘τ∘h⁻¹` for `τ` on the source.
    Xi { witness: PathBuf, table: PathBuf },
    /// `y ↦ ρ^f(h⁻¹y, ξ_(h⁻¹)(φ))` for `f` on the source and `φ` on the target.
    Phi { witness: PathBuf, function: PathBuf, table: PathBuf },
    Scoe { witness: PathBuf },
    /// Checks `c1 = 1 − d_τ + d_τ∘σ`.
    Gamma { witness: PathBuf, table: PathBuf },
    /// Verifies `σ^K h σ = σ^(K+1) h`, or constructs a conjugacy from a Γ-SCOE element.
    Eventual {
        witness: PathBuf,
        #[arg(long, conflicts_with = "construct", required_unless_present = "construct")]
        k: Option<usize>,
        #[arg(long)]
        construct: Option<PathBuf>,
    },
    /// Searches the generators and sample points for `h∘τ ≠ τ∘h`.
    Noncommuting { matrix: PathBuf, table: PathBuf },
}

#[derive(Subcommand)]
enum ProbeCmd {
    /// Looks for a generator on which `ρ^f` is nonzero.
    Zero { matrix: PathBuf, function: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn name(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.name(),
            Failure::Io(..) => "IoError",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn matrix(path: &Path) -> Result<Arc<Sft>, Failure> {
    Ok(Arc::new(io::parse_matrix(&read(path)?)?))
}

fn function(sft: &Arc<Sft>, path: &Path) -> Result<StepFunction, Failure> {
    Ok(io::parse_function(sft, &read(path)?)?)
}

fn table(sft: &Arc<Sft>, path: &Path) -> Result<TableHomeo, Failure> {
    Ok(io::parse_table(sft, &read(path)?)?)
}

fn witness(path: &Path) -> Result<CoeWitness, Failure> {
    Ok(io::parse_witness(&read(path)?)?)
}

fn render_word(sft: &Sft, w: &[u8]) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        sft.format_word(w)
    }
}

fn run_matrix(cmd: &MatrixCmd) -> Outcome {
    match cmd {
        MatrixCmd::Check { matrix: p } => {
            let sft = matrix(p)?;
            Ok(Report::new(Status::Ok, format!("valid n={}", sft.size()))
                .int("n", sft.size() as i64)
                .bool("irreducible", sft.is_irreducible())
                .bool("primitive", sft.is_primitive()))
        }
        MatrixCmd::Invariants { matrix: p } => {
            let inv = matrix(p)?.flow_invariants()?;
            let head = format!("det={} sign={} bf={}", inv.det_id_minus_a, inv.sign, inv.bf_label());
            Ok(Report::new(Status::Ok, head)
                .int("det", inv.det_id_minus_a)
                .int("sign", inv.sign)
                .text("bf", inv.bf_label()))
        }
        MatrixCmd::Words { matrix: p, length } => {
            let sft = matrix(p)?;
            let words: Vec<String> = sft.enumerate_words(*length).iter().map(|w| render_word(&sft, w)).collect();
            Ok(Report::new(Status::Ok, format!("count={}", words.len()))
                .int("count", words.len() as i64)
                .fact("words", Fact::Lines(words)))
        }
    }
}

fn run_point(cmd: &PointCmd) -> Outcome {
    let PointCmd::Shift { matrix: p, point, m } = cmd;
    let sft = matrix(p)?;
    let x = EpPoint::parse(&sft, point)?;
    let y = x.shift(*m).render(&sft);
    Ok(Report::new(Status::Ok, y.clone()).text("point", y))
}

fn run_fn(cmd: &FnCmd, opts: &Opts) -> Outcome {
    match cmd {
        FnCmd::Eval { matrix: p, function: fp, point } => {
            let sft = matrix(p)?;
            let f = function(&sft, fp)?;
            let v = f.evaluate(&EpPoint::parse(&sft, point)?);
            Ok(Report::new(Status::Ok, v.to_string()).int("value", v))
        }
        FnCmd::Shift { matrix: p, function: fp, m } => {
            let sft = matrix(p)?;
            let g = function(&sft, fp)?.compose_shift(*m)?;
            Ok(Report::new(Status::Ok, format!("depth={}", g.depth())).function("function", &g))
        }
        FnCmd::OrbitSum { matrix: p, function: fp, m } => {
            let sft = matrix(p)?;
            let g = function(&sft, fp)?.orbit_sum(*m)?;
            Ok(Report::new(Status::Ok, format!("depth={}", g.depth())).function("function", &g))
        }
        FnCmd::Coboundary { matrix: p, function: fp } => {
            let sft = matrix(p)?;
            let f = function(&sft, fp)?;
            coboundary_report(&f, opts)
        }
    }
}

fn coboundary_report(f: &StepFunction, opts: &Opts) -> Outcome {
    let search = opts.depth.max(f.depth());
    Ok(match is_sigma_coboundary(f, search, opts.cycle_bound)? {
        CoboundaryCertificate::Sat { g } => Report::new(Status::Ok, "SAT").function("g", &g),
        CoboundaryCertificate::Unsat { cycle, sum } => {
            let c = f.sft().format_word(&cycle);
            Report::new(Status::False, format!("UNSAT cycle={c}")).text("cycle", c).int("sum", sum)
        }
        CoboundaryCertificate::Inconclusive { search_depth, cycle_bound } => Report::new(Status::Inconclusive, "INCONCLUSIVE")
            .int("search_depth", search_depth as i64)
            .int("cycle_bound", cycle_bound as i64),
    })
}

fn run_group(cmd: &GroupCmd) -> Outcome {
    match cmd {
        GroupCmd::Apply { matrix: p, table: tp, point } => {
            let sft = matrix(p)?;
            let t = table(&sft, tp)?;
            let y = t.apply(&EpPoint::parse(&sft, point)?).render(&sft);
            Ok(Report::new(Status::Ok, y.clone()).text("point", y))
        }
        GroupCmd::Compose { matrix: p, second, first } => {
            let sft = matrix(p)?;
            let c = table(&sft, second)?.compose(&table(&sft, first)?)?;
            Ok(table_report(&c))
        }
        GroupCmd::Invert { matrix: p, table: tp } => {
            let sft = matrix(p)?;
            Ok(table_report(&table(&sft, tp)?.invert()))
        }
        GroupCmd::Data { matrix: p, table: tp } => {
            let sft = matrix(p)?;
            let data = table(&sft, tp)?.cocycle_data()?;
            Ok(Report::new(Status::Ok, format!("af={}", data.d.is_zero()))
                .function("l", &data.l)
                .function("k", &data.k)
                .function("d", &data.d))
        }
        GroupCmd::GenSwap { matrix: p, a, b, m } => {
            let sft = matrix(p)?;
            Ok(table_report(&TableHomeo::gen_swap(&sft, *a, *b, *m)?))
        }
    }
}

fn table_report(t: &TableHomeo) -> Report {
    Report::new(Status::Ok, format!("pairs={} identity={}", t.pairs().len(), t.is_identity())).table("table", t)
}

fn run_cocycle(cmd: &CocycleCmd) -> Outcome {
    match cmd {
        CocycleCmd::Rho { matrix: p, function: fp, table: tp } => {
            let sft = matrix(p)?;
            let r = cocycle::rho(&function(&sft, fp)?, &table(&sft, tp)?)?;
            Ok(Report::new(Status::Ok, format!("zero={}", r.table.is_zero())).function("rho", &r.table))
        }
        CocycleCmd::Psi { matrix: p, table: tp, function: fp } => {
            let sft = matrix(p)?;
            let g = cocycle::psi_tau(&table(&sft, tp)?, &function(&sft, fp)?)?;
            Ok(Report::new(Status::Ok, format!("depth={}", g.depth())).function("psi", &g))
        }
        CocycleCmd::Delta { matrix: p, function: fp, table: tp } => {
            let sft = matrix(p)?;
            let d = cocycle::delta(&function(&sft, fp)?, &table(&sft, tp)?)?;
            Ok(Report::new(Status::Ok, format!("zero={}", d.is_zero())).function("delta", &d))
        }
        CocycleCmd::OneB { matrix: p, function: fp } => {
            let sft = matrix(p)?;
            let g = cocycle::one_b(&function(&sft, fp)?)?;
            Ok(Report::new(Status::Ok, format!("depth={}", g.depth())).function("one_b", &g))
        }
        CocycleCmd::Member { matrix: p, table: tp, mode, function: fp } => {
            let sft = matrix(p)?;
            let t = table(&sft, tp)?;
            let need = |fp: &Option<PathBuf>| {
                fp.as_deref()
                    .ok_or_else(|| Failure::Lib(Error::InvalidArgument("--function is required for this mode".into())))
                    .and_then(|p| function(&sft, p))
            };
            let mode = match mode {
                Mode::Af => MembershipMode::Af,
                Mode::Cocycle => MembershipMode::Cocycle(need(fp)?),
                Mode::Coboundary => MembershipMode::Coboundary(need(fp)?),
            };
            let m = cocycle::membership(&t, &mode)?;
            let status = if m.holds { Status::Ok } else { Status::False };
            let mut r = Report::new(status, m.holds.to_string()).bool("member", m.holds);
            if let Some((w, v)) = m.witness {
                r = r.text("cylinder", render_word(&sft, &w)).int("defect", v);
            }
            Ok(r)
        }
    }
}

fn cocycle_tables_report(r: Report, t: &coe::CocycleTables) -> Report {
    r.function("c1", &t.c1)
        .function("k1", &t.k1)
        .function("l1", &t.l1)
        .function("c2", &t.c2)
        .function("k2", &t.k2)
        .function("l2", &t.l2)
}

fn run_coe(cmd: &CoeCmd, opts: &Opts) -> Outcome {
    let params = opts.derive();
    match cmd {
        CoeCmd::Validate { witness: wp } => {
            let h = witness(wp)?;
            Ok(Report::new(Status::Ok, format!("valid stages={}", h.stages().len()))
                .int("stages", h.stages().len() as i64)
                .int("source_n", h.source().size() as i64)
                .int("target_n", h.target().size() as i64))
        }
        CoeCmd::Apply { witness: wp, point, inverse } => {
            let h = witness(wp)?;
            let y = if *inverse {
                h.apply_inverse(&EpPoint::parse(h.target(), point)?).render(h.source())
            } else {
                h.apply(&EpPoint::parse(h.source(), point)?).render(h.target())
            };
            Ok(Report::new(Status::Ok, y.clone()).text("point", y))
        }
        CoeCmd::Derive { witness: wp } => {
            let t = witness(wp)?.derive_cocycles(&params)?;
            let head = format!("c1_depth={} c2_depth={}", t.c1.depth(), t.c2.depth());
            Ok(cocycle_tables_report(Report::new(Status::Ok, head), &t))
        }
        CoeCmd::Psi { witness: wp, function: fp } => {
            let h = witness(wp)?;
            let f = function(h.target(), fp)?;
            let g = h.psi(&f, &params)?;
            Ok(Report::new(Status::Ok, format!("depth={}", g.depth())).function("psi", &g))
        }
        CoeCmd::Xi { witness: wp, table: tp } => {
            let h = witness(wp)?;
            let t = table(h.source(), tp)?;
            Ok(table_report(&h.xi(&t, opts.depth_cap)?))
        }
        CoeCmd::Phi { witness: wp, function: fp, table: tp } => {
            let h = witness(wp)?;
            let f = function(h.source(), fp)?;
            let phi = table(h.target(), tp)?;
            let g = coe::phi_h_rho(&h, &f, &phi, opts.depth_cap)?;
            Ok(Report::new(Status::Ok, format!("depth={}", g.depth())).function("phi", &g))
        }
        CoeCmd::Scoe { witness: wp } => {
            let h = witness(wp)?;
            let t = h.derive_cocycles(&params)?;
            let search = opts.depth.max(t.c1.depth()).max(t.c2.depth());
            Ok(match coe::scoe_solve(&h, &t, search, opts.cycle_bound)? {
                ScoeCertificate::Sat { b1, b2, consistency } => {
                    let mut r = Report::new(Status::Ok, "SAT").function("b1", &b1);
                    if let Some(b2) = &b2 {
                        r = r.function("b2", b2);
                    }
                    if let Some(n) = consistency {
                        r = r.int("b1_plus_b2h", n);
                    }
                    r.function("c1", &t.c1).function("c2", &t.c2)
                }
                ScoeCertificate::Unsat { cycle, c1_sum } => {
                    let c = h.source().format_word(&cycle);
                    Report::new(Status::False, format!("UNSAT cycle={c}"))
                        .text("cycle", c)
                        .int("c1_sum", c1_sum)
                        .int("period", cycle.len() as i64)
                        .function("c1", &t.c1)
                }
                ScoeCertificate::Inconclusive => Report::new(Status::Inconclusive, "INCONCLUSIVE").function("c1", &t.c1),
            })
        }
        CoeCmd::Gamma { witness: wp, table: tp } => {
            let h = witness(wp)?;
            let tau = table(h.source(), tp)?;
            let t = h.derive_cocycles(&params)?;
            let residual = coe::gamma_scoe_residual(&t, &tau)?;
            let holds = residual.is_zero();
            let status = if holds { Status::Ok } else { Status::False };
            Ok(Report::new(status, holds.to_string()).bool("gamma_scoe", holds).function("residual", &residual))
        }
        CoeCmd::Eventual { witness: wp, k, construct } => {
            let h = witness(wp)?;
            if let Some(tp) = construct {
                let tau = table(h.source(), tp)?;
                let built = coe::construct_eventual_conjugacy(&h, &tau, &params)?;
                return Ok(Report::new(Status::Ok, format!("constructed K={}", built.k))
                    .int("k", built.k as i64)
                    .bool("identity", built.witness.is_identity())
                    .table("tau2", &built.tau2)
                    .fact("witness", Fact::Lines(built.witness.render().lines().map(String::from).collect())));
            }
            let k = k.expect("clap requires --k without --construct");
            Ok(match coe::verify_eventual_conjugacy(&h, k, &params)? {
                None => Report::new(Status::Ok, "true").bool("holds", true).int("k", k as i64),
                Some(w) => Report::new(Status::False, "false")
                    .bool("holds", false)
                    .int("k", k as i64)
                    .text("cylinder", render_word(h.source(), &w)),
            })
        }
        CoeCmd::Noncommuting { matrix: p, table: tp } => {
            let sft = matrix(p)?;
            let h = table(&sft, tp)?;
            let gens = sftgroup::sample::generators(&sft);
            Ok(match coe::noncommuting_witness(&h, &gens)? {
                NonCommuting::Found { generator, x, h_tau_x, tau_h_x } => Report::new(Status::Ok, format!("FOUND x={}", x.render(&sft)))
                    .table("tau", &gens[generator])
                    .text("x", x.render(&sft))
                    .text("h_tau_x", h_tau_x.render(&sft))
                    .text("tau_h_x", tau_h_x.render(&sft)),
                NonCommuting::CommutesOnSample => Report::new(Status::Inconclusive, "COMMUTES_ON_SAMPLE"),
            })
        }
    }
}

fn run_probe(cmd: &ProbeCmd) -> Outcome {
    let ProbeCmd::Zero { matrix: p, function: fp } = cmd;
    let sft = matrix(p)?;
    let f = function(&sft, fp)?;
    Ok(match cocycle::zero_probe(&f)? {
        ZeroProbe::Zero => Report::new(Status::Ok, "ZERO"),
        ZeroProbe::Counterexample { tau, generator: (a, b, m), cylinder, value } => {
            let c = render_word(&sft, &cylinder);
            Report::new(Status::Ok, format!("NONZERO gen_swap({a},{b},{m}) cylinder={c} value={value}"))
                .text("generator", format!("{a},{b},{m}"))
                .text("cylinder", c)
                .int("value", value)
                .table("tau", &tau)
        }
    })
}

fn run_selftest(opts: &Opts, suites: &[String], list: bool) -> Outcome {
    if list {
        let names: Vec<String> = sftgroup::selftest::SUITES.iter().map(|(n, _)| n.to_string()).collect();
        return Ok(Report::new(Status::Ok, format!("suites={}", names.len())).fact("suites", Fact::Lines(names)));
    }
    let outcomes = sftgroup::selftest::run(opts.seed, suites)?;
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let status = if failed == 0 { Status::Ok } else { Status::False };
    let mut r = Report::new(status, format!("passed={} failed={failed}", outcomes.len() - failed));
    for o in &outcomes {
        let line = match &o.failure {
            None => format!("pass cases={}", o.cases),
            Some(msg) => format!("FAIL {msg}"),
        };
        r = r.text(o.name, line);
    }
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.opts;
    let outcome = match &cli.command {
        Command::Matrix(c) => run_matrix(c),
        Command::Point(c) => run_point(c),
        Command::Fn(c) => run_fn(c, opts),
        Command::Group(c) => run_group(c),
        Command::Cocycle(c) => run_cocycle(c),
        Command::Coe(c) => run_coe(c, opts),
        Command::Probe(c) => run_probe(c),
        Command::Selftest { suites, list } => run_selftest(opts, suites, *list),
    };
    match outcome {
        Ok(report) => {
            let code = report.status.exit_code();
            print!("{}", report.with_params(opts.params()).render(opts.structured));
            ExitCode::from(code)
        }
        Err(f) => {
            let text = render_error(f.name(), &f.message().replace('\n', " "), opts.structured);
            if opts.structured.is_some() {
                print!("{text}");
            } else {
                eprint!("{text}");
            }
            ExitCode::from(2)
        }
    }
}
