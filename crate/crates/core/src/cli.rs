//! Batch front end behind the `feeder` binary.
//!
//! Exit codes: 0 when everything solved and every property check passed,
//! 2 when a solve succeeded but a property check failed, 1 on any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{FeederError, Result};
use crate::instance::{load_instance, Instance, PriceModel};
use crate::lp::{self, parse_lp, write_lp, LpSolution, Tolerances};
use crate::oracle::{self, generate, reference_solve, InstanceRecipe};
use crate::output::{num, Table};
use crate::pricing::check_multileg_conditions;
use crate::problems::{Diagnostics, FeedInScenario, FeedOutScenario, FlowSolution, Form, ProblemKind};
use crate::reduction;
use crate::routes::{enumerate_feedin_routes, enumerate_feedout_routes, Direction, DEFAULT_ROUTE_CEILING};

#[derive(Debug, Parser)]
#[command(name = "feeder", version, about = "One-shot feed-in / feed-out feeder coordination")]
pub struct Cli {
    /// Output file (`-` or absent: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Certification tolerance of the simplex solver.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Maximum number of enumerated routes.
    #[arg(long, global = true, default_value_t = DEFAULT_ROUTE_CEILING)]
    pub ceiling: usize,
    /// Worker threads for sweeps (0: all cores).
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Seed for `gen` and `verify --recipe`.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    /// Instance document (JSON).
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate routes and report counts.
    Routes {
        #[command(flatten)]
        input: InstanceArg,
        /// feed-in or feed-out.
        #[arg(long, default_value = "feed-in", value_parser = parse_direction)]
        direction: Direction,
    },
    /// Report route reduction per route.
    Prune {
        #[command(flatten)]
        input: InstanceArg,
    },
    /// Solve one problem and check its optimality properties.
    Solve {
        /// Instance document (JSON).
        #[arg(long)]
        instance: Option<PathBuf>,
        /// feed-in, supply-opt, feed-out or feed-out-via-equivalence.
        #[arg(long, default_value = "feed-in")]
        kind: ProblemKind,
        /// full or reduced.
        #[arg(long, default_value = "reduced")]
        form: Form,
        /// Total supply (default: sum of the instance supplies).
        #[arg(long)]
        total_supply: Option<f64>,
        /// Write the model in LP format before solving.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        /// Solve an LP-format file instead of an instance.
        #[arg(long, conflicts_with_all = ["instance", "dump_lp"])]
        lp: Option<PathBuf>,
    },
    /// Sweep the cost factor.
    SweepB {
        #[command(flatten)]
        input: InstanceArg,
        /// `lo:hi:step` or a comma-separated list.
        #[arg(long)]
        grid: String,
    },
    /// Sweep the total supply of supply optimization.
    SweepS {
        #[command(flatten)]
        input: InstanceArg,
        /// Total supplies, `lo:hi:step` or a comma-separated list.
        #[arg(long)]
        grid: String,
        /// full or reduced.
        #[arg(long, default_value = "reduced")]
        form: Form,
        /// Also solve with all supply concentrated at the interchange.
        #[arg(long)]
        vrp_baseline: bool,
    },
    /// Generate a random instance from a recipe.
    Gen {
        /// Recipe document (JSON); defaults are used for missing files.
        #[arg(long)]
        recipe: Option<PathBuf>,
        /// Override the recipe node count.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Compare the primary pipeline with the exact reference solve.
    Verify {
        /// Instance document (JSON).
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Generate instances from this recipe instead, seeds `seed..seed+count`.
        #[arg(long, conflicts_with = "instance")]
        recipe: Option<PathBuf>,
        /// Number of generated instances.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// feed-in, supply-opt, feed-out or feed-out-via-equivalence.
        #[arg(long, default_value = "feed-in")]
        kind: ProblemKind,
        /// Total supply (default: sum of the instance supplies).
        #[arg(long)]
        total_supply: Option<f64>,
    },
}

fn parse_direction(s: &str) -> std::result::Result<Direction, String> {
    match s {
        "feed-in" => Ok(Direction::FeedIn),
        "feed-out" => Ok(Direction::FeedOut),
        other => Err(format!("unknown direction `{other}`")),
    }
}

/// Parse `lo:hi:step` or `a,b,c`; the grid must be nonempty and sorted.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| FeederError::InvalidParameter(format!("grid `{text}`: {m}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, step] = parts[..] else { return Err(bad("expected lo:hi:step")) };
        let (lo, hi, step) = (number(lo)?, number(hi)?, number(step)?);
        if !(step > 0.0) || hi < lo {
            return Err(bad("step must be positive and hi >= lo"));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        (0..=n).map(|k| lo + k as f64 * step).map(|v| (v * 1e9).round() / 1e9).collect()
    } else {
        text.split(',').map(number).collect::<Result<_>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("empty or non-finite"));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(bad("not sorted"));
    }
    Ok(values)
}

struct Ctx<'a> {
    cli: &'a Cli,
    tolerances: Tolerances,
}

impl Ctx<'_> {
    fn table(&self, command: &str, header: &[&str]) -> Table {
        let mut t = Table::new(header);
        t.meta("tool", format!("feeder {}", env!("CARGO_PKG_VERSION")))
            .meta("command", command)
            .meta("seed", self.cli.seed)
            .meta("tol", format!("{:e}", self.cli.tol))
            .meta("ceiling", self.cli.ceiling);
        t
    }

    fn save(&self, t: &Table) -> Result<()> {
        t.save(self.cli.out.as_deref())
    }

    fn feedin(&self, inst: &Instance) -> Result<FeedInScenario> {
        let mut sc = FeedInScenario::new(inst, self.cli.ceiling)?;
        sc.tolerances = self.tolerances;
        Ok(sc)
    }

    fn feedout(&self, inst: &Instance) -> Result<FeedOutScenario> {
        let mut sc = FeedOutScenario::new(inst, self.cli.ceiling)?;
        sc.tolerances = self.tolerances;
        sc.equivalent.tolerances = self.tolerances;
        Ok(sc)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.cli.workers)
            .build()
            .map_err(|e| FeederError::InvalidParameter(e.to_string()))
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    load_instance(&fs::read_to_string(path)?)
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    PropertyFailure,
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::PropertyFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if !(cli.tol > 0.0) {
        return Err(FeederError::InvalidParameter("--tol must be positive".into()));
    }
    let ctx = Ctx { cli, tolerances: Tolerances { certify: cli.tol, ..Tolerances::default() } };
    match &cli.command {
        Command::Routes { input, direction } => cmd_routes(&ctx, &read_instance(&input.instance)?, *direction),
        Command::Prune { input } => cmd_prune(&ctx, &read_instance(&input.instance)?),
        Command::Solve { lp: Some(path), .. } => cmd_solve_lp(&ctx, path),
        Command::Solve { instance: Some(path), kind, form, total_supply, dump_lp, .. } => {
            cmd_solve(&ctx, &read_instance(path)?, *kind, *form, *total_supply, dump_lp.as_deref())
        }
        Command::Solve { .. } => Err(FeederError::InvalidParameter("solve needs --instance or --lp".into())),
        Command::SweepB { input, grid } => cmd_sweep_b(&ctx, &read_instance(&input.instance)?, &parse_grid(grid)?),
        Command::SweepS { input, grid, form, vrp_baseline } => {
            cmd_sweep_s(&ctx, &read_instance(&input.instance)?, &parse_grid(grid)?, *form, *vrp_baseline)
        }
        Command::Gen { recipe, nodes } => cmd_gen(&ctx, recipe.as_deref(), *nodes),
        Command::Verify { instance, recipe, count, kind, total_supply } => {
            let instances: Vec<(String, Instance)> = match (instance, recipe) {
                (Some(p), _) => vec![(p.display().to_string(), read_instance(p)?)],
                (None, r) => {
                    let base = load_recipe(r.as_deref())?;
                    (cli.seed..cli.seed + count)
                        .map(|seed| generate(&InstanceRecipe { seed, ..base }).map(|i| (format!("seed {seed}"), i)))
                        .collect::<Result<_>>()?
                }
            };
            cmd_verify(&ctx, &instances, *kind, *total_supply)
        }
    }
}

fn cmd_routes(ctx: &Ctx, inst: &Instance, direction: Direction) -> Result<Outcome> {
    let net = &inst.network;
    let routes = match direction {
        Direction::FeedIn => enumerate_feedin_routes(net, inst.time_window, ctx.cli.ceiling)?,
        Direction::FeedOut => enumerate_feedout_routes(net, inst.time_window, ctx.cli.ceiling)?,
    };
    let mut t = ctx.table("routes", &["id", "route", "legs", "cost", "time", "tuples"]);
    t.meta("direction", format!("{direction:?}")).meta("routes", routes.len()).meta("variables", routes.variable_count());
    for (id, r) in routes.iter() {
        let tuples: usize = (0..r.leg_count()).map(|i| r.service_nodes(i).len()).sum();
        t.push(vec![id.to_string(), r.label(net), r.leg_count().to_string(), num(r.cost()), num(r.time()), tuples.to_string()]);
    }
    ctx.save(&t)?;
    Ok(Outcome::Ok)
}

fn cmd_prune(ctx: &Ctx, inst: &Instance) -> Result<Outcome> {
    let sc = ctx.feedin(inst)?;
    let stats = sc.pruning_stats();
    let mut t = ctx.table("prune", &["id", "route", "legs", "leg_scores", "reduced", "supply_opt"]);
    t.meta("routes", stats.total)
        .meta("reduced", stats.reduced)
        .meta("simple", stats.simple)
        .meta("multi_leg", stats.multi_leg)
        .meta("supply_opt", stats.supply_opt);
    for (id, r) in sc.routes.iter() {
        let scores: Vec<String> = reduction::leg_scores(&sc.routes, &sc.prices, id).into_iter().map(num).collect();
        t.push(vec![
            id.to_string(),
            r.label(sc.network()),
            r.leg_count().to_string(),
            scores.join(";"),
            sc.reduced.contains(&id).to_string(),
            sc.supply_opt.contains(&id).to_string(),
        ]);
    }
    ctx.save(&t)?;
    Ok(Outcome::Ok)
}

fn certificate_meta(t: &mut Table, sol: &LpSolution) {
    t.meta("status", sol.status).meta("objective", num(sol.objective)).meta("iterations", sol.iterations);
    if let Some(c) = sol.certificate {
        t.meta("dual_objective", num(c.dual_objective))
            .meta("primal_residual", format!("{:e}", c.primal_residual))
            .meta("dual_residual", format!("{:e}", c.dual_residual))
            .meta("gap", format!("{:e}", c.gap))
            .meta("complementarity", format!("{:e}", c.complementarity));
    }
}

fn cmd_solve_lp(ctx: &Ctx, path: &Path) -> Result<Outcome> {
    let parsed = parse_lp(&fs::read_to_string(path)?)?;
    let sol = lp::solve(&parsed.lp, &ctx.tolerances)?;
    let sign = if parsed.minimize { -1.0 } else { 1.0 };
    let mut t = ctx.table("solve", &["variable", "value"]);
    t.meta("source", path.display()).meta("sense", if parsed.minimize { "minimize" } else { "maximize" });
    certificate_meta(&mut t, &LpSolution { objective: sign * sol.objective, ..sol.clone() });
    if sol.is_optimal() {
        for (name, v) in parsed.lp.var_names.iter().zip(&sol.x) {
            t.push(vec![name.clone(), num(*v)]);
        }
    }
    ctx.save(&t)?;
    if sol.is_optimal() {
        Ok(Outcome::Ok)
    } else {
        Err(FeederError::NotOptimal(format!("{}: {}", path.display(), sol.status)))
    }
}

fn solution_table(ctx: &Ctx, sc_routes: &crate::routes::RouteSet, prices: &crate::pricing::PriceTable, inst: &Instance, sol: &FlowSolution) -> Table {
    let net = &inst.network;
    let mut t = ctx.table("solve", &["record", "route", "leg", "node", "value", "unit_value"]);
    t.meta("kind", sol.kind).meta("form", sol.form);
    if let Some(s) = sol.total_supply {
        t.meta("total_supply", num(s));
    }
    certificate_meta(&mut t, &sol.lp);
    t.meta("routes_used", sol.routes_used(1e-9));
    for (id, r) in sc_routes.iter() {
        if sol.flows[id] > 0.0 {
            t.push(vec!["flow".into(), r.label(net), String::new(), String::new(), num(sol.flows[id]), num(-r.cost())]);
        }
    }
    for (tp, &a) in prices.tuples().iter().zip(&sol.allocations) {
        if a > 0.0 {
            t.push(vec![
                "allocation".into(),
                sc_routes.get(tp.route).label(net),
                (tp.leg + 1).to_string(),
                net.name(tp.node).into(),
                num(a),
                num(tp.revenue),
            ]);
        }
    }
    for l in net.nodes() {
        t.push(vec!["node".into(), String::new(), String::new(), net.name(l).into(), num(sol.node_totals[l.0]), num(sol.supply[l.0])]);
    }
    t
}

fn checks_path(out: Option<&Path>) -> Option<PathBuf> {
    out.filter(|p| *p != Path::new("-")).map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".checks.csv");
        PathBuf::from(s)
    })
}

fn save_checks(ctx: &Ctx, d: &Diagnostics) -> Result<Outcome> {
    let mut t = ctx.table("checks", &["check", "passed", "offenders"]);
    for c in &d.checks {
        t.push(vec![c.name.into(), c.passed.to_string(), c.offenders.join(";")]);
    }
    match checks_path(ctx.cli.out.as_deref()) {
        Some(p) => t.save(Some(&p))?,
        None => {
            for c in d.failures() {
                eprintln!("property check failed: {} {:?}", c.name, c.offenders);
            }
        }
    }
    Ok(if d.all_passed() { Outcome::Ok } else { Outcome::PropertyFailure })
}

fn dump(path: Option<&Path>, model: &lp::LinearProgram) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, write_lp(model))?;
    }
    Ok(())
}

fn cmd_solve(
    ctx: &Ctx,
    inst: &Instance,
    kind: ProblemKind,
    form: Form,
    total_supply: Option<f64>,
    dump_lp: Option<&Path>,
) -> Result<Outcome> {
    let s = total_supply.unwrap_or_else(|| inst.total_supply());
    match kind {
        ProblemKind::FeedIn | ProblemKind::SupplyOpt => {
            let sc = ctx.feedin(inst)?;
            let sol = if kind == ProblemKind::FeedIn {
                dump(dump_lp, &sc.feedin_model(form).lp)?;
                sc.solve_feedin(form)?
            } else {
                dump(dump_lp, &sc.supply_opt_model(s, form, true).lp)?;
                sc.solve_supply_opt(s, form, true)?
            };
            let mut t = solution_table(ctx, &sc.routes, &sc.prices, inst, &sol);
            if kind == ProblemKind::SupplyOpt {
                t.meta("j_max", num(sc.absolute_max_profit()));
            }
            ctx.save(&t)?;
            save_checks(ctx, &sc.verify(&sol)?)
        }
        ProblemKind::FeedOut | ProblemKind::FeedOutViaEquivalence => {
            let sc = ctx.feedout(inst)?;
            let sol = if kind == ProblemKind::FeedOut {
                dump(dump_lp, &sc.model(s, form).lp)?;
                sc.solve(s, form)?
            } else {
                dump(dump_lp, &sc.equivalent.supply_opt_model(s, Form::Reduced, true).lp)?;
                sc.solve_via_equivalence(s)?
            };
            let mut t = solution_table(ctx, &sc.routes, &sc.prices, inst, &sol);
            t.meta("j_max", num(sc.absolute_max_profit()));
            ctx.save(&t)?;
            save_checks(ctx, &sc.verify(&sol)?)
        }
    }
}

fn cmd_sweep_b(ctx: &Ctx, inst: &Instance, grid: &[f64]) -> Result<Outcome> {
    if !matches!(inst.price_model, PriceModel::CostFactor(_)) {
        return Err(FeederError::InvalidParameter("sweep-b needs a cost-factor instance".into()));
    }
    let net = &inst.network;
    let routes = enumerate_feedin_routes(net, inst.time_window, ctx.cli.ceiling)?;
    let others: Vec<_> = net.nodes().filter(|&l| l != net.interchange()).collect();
    let mut header: Vec<String> = ["b", "reduced", "simple", "multi_leg", "supply_opt", "has_multi_leg", "multi_leg_kept", "interchange_start_kept", "price_gap", "above_threshold"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(others.iter().map(|&l| format!("threshold_{}", net.name(l))));
    let rows: Vec<Result<Vec<String>>> = ctx.pool()?.install(|| {
        grid.par_iter()
            .map(|&b| {
                let sc = FeedInScenario::new(&inst.with_cost_factor(b), ctx.cli.ceiling)?;
                let st = sc.pruning_stats();
                let rep = check_multileg_conditions(net, &routes, inst.value_of_time, b)?;
                let mut row = vec![
                    num(b),
                    st.reduced.to_string(),
                    st.simple.to_string(),
                    st.multi_leg.to_string(),
                    st.supply_opt.to_string(),
                    (st.multi_leg > 0).to_string(),
                    rep.multi_leg_kept.to_string(),
                    rep.interchange_start_kept.to_string(),
                    rep.price_gap().to_string(),
                    rep.above_threshold().to_string(),
                ];
                for &l in &others {
                    row.push(rep.nodes.iter().find(|n| n.node == l).map_or(String::new(), |n| num(n.threshold)));
                }
                Ok(row)
            })
            .collect()
    });
    let mut t = ctx.table("sweep-b", &[]);
    t.header = header;
    t.meta("routes", routes.len());
    for row in rows {
        t.push(row?);
    }
    ctx.save(&t)?;
    Ok(Outcome::Ok)
}

fn cmd_sweep_s(ctx: &Ctx, inst: &Instance, grid: &[f64], form: Form, vrp: bool) -> Result<Outcome> {
    let sc = ctx.feedin(inst)?;
    let net = sc.network();
    let mut header = vec!["s", "objective", "routes_used", "checks_passed"];
    if vrp {
        header.extend(["vrp_objective", "vrp_routes_used"]);
    }
    let rows: Vec<Result<(Vec<String>, bool)>> = ctx.pool()?.install(|| {
        grid.par_iter()
            .map(|&s| {
                let sol = sc.solve_supply_opt(s, form, true)?;
                let ok = sc.verify(&sol)?.all_passed();
                let mut row = vec![num(s), num(sol.objective), sol.routes_used(1e-9).to_string(), ok.to_string()];
                if vrp {
                    let mut supply = vec![0.0; net.node_count()];
                    supply[net.interchange().0] = s;
                    let at_i = Instance { network: net.clone().with_supply(supply)?, ..inst.clone() };
                    let vsc = ctx.feedin(&at_i)?;
                    let v = vsc.solve_feedin(Form::Full)?;
                    row.push(num(v.objective));
                    row.push(v.routes_used(1e-9).to_string());
                }
                Ok((row, ok))
            })
            .collect()
    });
    let mut t = ctx.table("sweep-s", &header);
    t.meta("form", form).meta("total_demand", num(net.total_demand())).meta("j_max", num(sc.absolute_max_profit()));
    let mut all_ok = true;
    for r in rows {
        let (row, ok) = r?;
        all_ok &= ok;
        t.push(row);
    }
    ctx.save(&t)?;
    Ok(if all_ok { Outcome::Ok } else { Outcome::PropertyFailure })
}

fn load_recipe(path: Option<&Path>) -> Result<InstanceRecipe> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(InstanceRecipe::default()),
    }
}

fn cmd_gen(ctx: &Ctx, recipe: Option<&Path>, nodes: Option<usize>) -> Result<Outcome> {
    let mut r = load_recipe(recipe)?;
    r.seed = ctx.cli.seed;
    if let Some(n) = nodes {
        r.nodes = n;
    }
    let inst = generate(&r)?;
    let text = serde_json::to_string_pretty(&inst.to_document())? + "\n";
    match ctx.cli.out.as_deref().filter(|p| *p != Path::new("-")) {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(Outcome::Ok)
}

fn cmd_verify(ctx: &Ctx, instances: &[(String, Instance)], kind: ProblemKind, total_supply: Option<f64>) -> Result<Outcome> {
    let rows: Vec<Result<(Vec<String>, bool)>> = ctx.pool()?.install(|| {
        instances
            .par_iter()
            .map(|(label, inst)| {
                let s = total_supply.unwrap_or_else(|| inst.total_supply());
                let (primary, diag) = match kind {
                    ProblemKind::FeedIn | ProblemKind::SupplyOpt => {
                        let sc = ctx.feedin(inst)?;
                        let sol = if kind == ProblemKind::FeedIn {
                            sc.solve_feedin(Form::Reduced)?
                        } else {
                            sc.solve_supply_opt(s, Form::Reduced, true)?
                        };
                        let d = sc.verify(&sol)?;
                        (sol.objective, d)
                    }
                    _ => {
                        let sc = ctx.feedout(inst)?;
                        let sol = if kind == ProblemKind::FeedOut {
                            sc.solve(s, Form::Reduced)?
                        } else {
                            sc.solve_via_equivalence(s)?
                        };
                        let d = sc.verify(&sol)?;
                        (sol.objective, d)
                    }
                };
                let reference = reference_solve(inst, kind, Some(s))?.objective_f64();
                let dev = oracle::relative_deviation(primary, reference);
                let failed: Vec<&str> = diag.failures().map(|c| c.name).collect();
                let ok = failed.is_empty();
                Ok((vec![label.clone(), num(s), num(primary), num(reference), format!("{dev:e}"), ok.to_string(), failed.join(";")], ok))
            })
            .collect()
    });
    let mut t = ctx.table("verify", &["instance", "total_supply", "primary", "reference", "deviation", "checks_passed", "failed_checks"]);
    t.meta("kind", kind);
    let mut all_ok = true;
    let mut worst = 0.0_f64;
    let mut body = Vec::new();
    for r in rows {
        let (row, ok) = r?;
        worst = worst.max(row[4].parse::<f64>().unwrap_or(f64::INFINITY));
        all_ok &= ok;
        body.push(row);
    }
    let agree = worst <= 1e-9;
    t.meta("max_deviation", format!("{worst:e}"));
    t.rows = body;
    ctx.save(&t)?;
    Ok(if all_ok && agree { Outcome::Ok } else { Outcome::PropertyFailure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1:3:0.5").unwrap(), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(parse_grid("0,5,10,20").unwrap(), vec![0.0, 5.0, 10.0, 20.0]);
        assert_eq!(parse_grid("0:0.3:0.1").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert!(parse_grid("3,1").is_err());
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["feeder", "solve", "--instance", "g1.json", "--kind", "supply-opt", "--total-supply", "5"]).unwrap();
        assert!(matches!(cli.command, Command::Solve { kind: ProblemKind::SupplyOpt, total_supply: Some(5.0), .. }));
        assert!(Cli::try_parse_from(["feeder", "solve", "--instance", "a", "--lp", "b"]).is_err());
        assert!(Cli::try_parse_from(["feeder", "solve", "--kind", "sideways"]).is_err());
    }
}
