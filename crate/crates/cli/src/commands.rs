use std::path::Path;

use serde::Serialize;
use serde_json::json;

use wl_core::algebra::wl_algebra_chain;
use wl_core::binarize::{bin_structure, tradeoff};
use wl_core::coloring::{is_equality_compatible, is_shufflable, strictly_refines};
use wl_core::games::{
    layered_falsifier_play, layered_game_system, solve, verifier_survival_certificate, OptimalVerifier, ScriptedVerifier, Verifier,
};
use wl_core::generators::{
    build_layered, check_expansion, check_layered_expansion, constraints_from_graph, dummy_pad,
    greedy_set_family, hard_instance, polynomial_set_family, random_right_regular, stable_chain,
    ExpansionMode, HardInstance, HardParams, SetFamily,
};
use wl_core::rational::{parse_rational, Rational};
use wl_core::refine::{is_k_stable, joint_distinguish, stabilize, BoundCheck};
use wl_core::structure::{parse_structures, RelationalStructure};
use wl_core::xorcsp::{
    closure, closure_bounded, gauss_satisfiable, to_structures, PartialAssignment, XorSystem,
};

use crate::args::{
    AlgebraCommand, BinCommand, CheckMode, Cli, Command, ExpansionArgs, FamilyArgs, GameCommand,
    GenCommand, HardArgs, VerifierKind, WlCommand, XorCommand,
};
use crate::error::{CliError, CliResult, Context};
use crate::output::{read_input, Artifact};

pub fn run(cli: &Cli) -> CliResult<Artifact> {
    match &cli.command {
        Command::Wl(c) => wl(c),
        Command::Xor(c) => xor(c),
        Command::Game(c) => game(c),
        Command::Gen(c) => generate(c),
        Command::Algebra(c) => algebra(c),
        Command::Bin(c) => bin(c),
    }
}

fn load_structures(path: &Path) -> CliResult<Vec<RelationalStructure>> {
    let all = parse_structures(&read_input(path)?).context(|| path.display().to_string())?;
    if all.is_empty() {
        return Err(CliError::Usage(format!("{}: no structure found", path.display())));
    }
    Ok(all)
}

fn load_structure(path: &Path) -> CliResult<RelationalStructure> {
    RelationalStructure::from_text(&read_input(path)?).context(|| path.display().to_string())
}

fn load_system(path: &Path) -> CliResult<XorSystem> {
    XorSystem::from_text(&read_input(path)?).context(|| path.display().to_string())
}

/// Rejects any run whose round count breaks a bound.
fn assert_bound(what: &str, check: &BoundCheck) -> CliResult<()> {
    if check.ok {
        Ok(())
    } else {
        Err(CliError::BoundViolation(format!(
            "{what}: {} rounds with n = {}, k = {} (trivial {}, upper {:?})",
            check.rounds, check.n, check.k, check.trivial_bound, check.upper_bound
        )))
    }
}

#[derive(Serialize)]
struct StabilizeRow<'a> {
    structure: &'a str,
    n: usize,
    k: usize,
    r_infinity: Option<usize>,
    stabilized: bool,
    classes: usize,
    trivial_bound: Option<u128>,
    upper_bound: Option<u128>,
    ceil_k_log2_n: Option<u32>,
    bound_ok: Option<bool>,
}

#[derive(Serialize)]
struct RoundRow<'a> {
    structure: &'a str,
    round: usize,
    classes: usize,
}

#[derive(Serialize)]
struct DistinguishRow<'a> {
    a: &'a str,
    b: &'a str,
    k: usize,
    round: Option<usize>,
    settled: bool,
    rounds_computed: usize,
    r_infinity_a: Option<usize>,
    r_infinity_b: Option<usize>,
    bound_ok: bool,
}

fn wl(command: &WlCommand) -> CliResult<Artifact> {
    match command {
        WlCommand::Stabilize {
            k,
            input,
            max_rounds,
            per_round,
        } => {
            let structures = load_structures(input)?;
            let mut traces = Vec::new();
            for a in &structures {
                let trace = stabilize(a, *k, *max_rounds).context(|| a.name().to_string())?;
                if let Some(check) = &trace.bounds {
                    assert_bound(a.name(), check)?;
                }
                traces.push(trace);
            }
            let details = json!({ "structures": structures.len() });
            if *per_round {
                let rows: Vec<RoundRow> = structures
                    .iter()
                    .zip(&traces)
                    .flat_map(|(a, t)| {
                        t.class_counts.iter().enumerate().map(|(round, &classes)| RoundRow {
                            structure: a.name(),
                            round,
                            classes,
                        })
                    })
                    .collect();
                return Artifact::csv(&rows, details);
            }
            let rows: Vec<StabilizeRow> = structures
                .iter()
                .zip(&traces)
                .map(|(a, t)| StabilizeRow {
                    structure: a.name(),
                    n: t.n,
                    k: t.k,
                    r_infinity: t.r_infinity,
                    stabilized: t.stabilized(),
                    classes: *t.class_counts.last().expect("trace holds round 0"),
                    trivial_bound: t.bounds.as_ref().map(|b| b.trivial_bound),
                    upper_bound: t.bounds.as_ref().and_then(|b| b.upper_bound),
                    ceil_k_log2_n: t.bounds.as_ref().map(|b| b.ceil_k_log2_n),
                    bound_ok: t.bounds.as_ref().map(|b| b.ok),
                })
                .collect();
            Artifact::csv(&rows, details)
        }
        WlCommand::Distinguish {
            k,
            a,
            b,
            max_rounds,
        } => {
            let (sa, sb) = (load_structure(a)?, load_structure(b)?);
            let d = joint_distinguish(&sa, &sb, *k, *max_rounds).context(|| "distinguish".into())?;
            for (s, check) in [&sa, &sb].iter().zip(&d.bounds) {
                if let Some(check) = check {
                    assert_bound(s.name(), check)?;
                }
            }
            let row = DistinguishRow {
                a: sa.name(),
                b: sb.name(),
                k: *k,
                round: d.round,
                settled: d.settled,
                rounds_computed: d.rounds_computed,
                r_infinity_a: d.r_infinity[0],
                r_infinity_b: d.r_infinity[1],
                bound_ok: d.bounds.iter().flatten().all(|b| b.ok),
            };
            Artifact::csv(&[row], json!({ "joint_classes": d.joint_classes }))
        }
    }
}

fn xor(command: &XorCommand) -> CliResult<Artifact> {
    match command {
        XorCommand::Translate { input } => {
            let s = load_system(input)?;
            let (a, b) = to_structures(&s).context(|| "translate".into())?;
            Ok(Artifact::text(
                format!("{}{}", a.to_text(), b.to_text()),
                json!({ "elements": a.universe_size() }),
            ))
        }
        XorCommand::Closure { k, rounds, input } => {
            let s = load_system(input)?;
            let (cl, steps) = match rounds {
                Some(r) => (closure_bounded(&s, *k, *r), None),
                None => {
                    let (cl, steps) = closure(&s, *k);
                    (cl, Some(steps))
                }
            };
            Ok(Artifact::text(
                cl.to_text(),
                json!({ "input_constraints": s.len(), "constraints": cl.len(), "steps": steps }),
            ))
        }
        XorCommand::Sat { input } => {
            let s = load_system(input)?;
            let solution = gauss_satisfiable(&s);
            let report = match solution {
                Some(x) => json!({
                    "status": "SAT",
                    "assignment": s
                        .variable_names()
                        .iter()
                        .zip(x)
                        .map(|(name, bit)| format!("{name}={}", u8::from(bit)))
                        .collect::<Vec<_>>(),
                }),
                None => json!({ "status": "UNSAT" }),
            };
            Artifact::json(&report)
        }
    }
}

/// Parses `name=bit` pairs separated by commas.
fn parse_position(s: &XorSystem, text: &str) -> CliResult<PartialAssignment> {
    let mut beta = PartialAssignment::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, bit) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=bit, got {item:?}")))?;
        let var = s
            .variable_index(name.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown variable {name:?}")))?;
        let bit = match bit.trim() {
            "0" => false,
            "1" => true,
            other => return Err(CliError::Usage(format!("bit must be 0 or 1, got {other:?}"))),
        };
        if beta.get(var).is_some() {
            return Err(CliError::Usage(format!("variable {name:?} assigned twice")));
        }
        beta.set(var, bit);
    }
    Ok(beta)
}

fn named(s: &XorSystem, beta: &PartialAssignment) -> Vec<String> {
    beta.iter()
        .map(|(x, b)| format!("{}={}", s.variable_names()[x as usize], u8::from(b)))
        .collect()
}

fn expansion_mode(args: &ExpansionArgs, seed: u64) -> ExpansionMode {
    match args.check {
        CheckMode::Exhaustive => ExpansionMode::Exhaustive {
            budget: args.check_budget,
        },
        CheckMode::Sampled => ExpansionMode::Sampled {
            samples: args.samples,
            seed,
        },
    }
}

fn rational(flag: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn build_hard(args: &HardArgs) -> CliResult<HardInstance> {
    let params = HardParams {
        alpha: rational("alpha", &args.expansion.alpha)?,
        gamma: rational("gamma", &args.expansion.gamma)?,
        mode: expansion_mode(&args.expansion, args.seed),
        max_attempts: args.attempts,
    };
    let h = hard_instance(args.d, args.ell, args.m, args.seed, &params)
        .context(|| "hard instance".into())?;
    if !h.verified {
        eprintln!(
            "wlbounds: warning: expansion not verified after {} attempts",
            h.attempts
        );
    }
    Ok(h)
}

fn hard_details(h: &HardInstance) -> serde_json::Value {
    json!({
        "seed": h.seed,
        "d": h.d,
        "ell": h.ell,
        "m": h.m,
        "x_ell": h.system.variable_names()[h.x_ell as usize],
        "attempts": h.attempts,
        "expansion_verified": h.verified,
        "verdict": h.verdict,
    })
}

fn game(command: &GameCommand) -> CliResult<Artifact> {
    match command {
        GameCommand::Solve {
            input,
            pebbles,
            rounds,
            budget,
            start,
        } => {
            let s = load_system(input)?;
            let beta = parse_position(&s, start)?;
            let sol = solve(&s, *pebbles, *rounds, *budget).context(|| "solve".into())?;
            let level = sol.level(&beta).context(|| "start position".into())?;
            Artifact::json(&json!({
                "pebbles": pebbles,
                "variables": s.num_variables(),
                "positions": sol.positions(),
                "round_cap": rounds,
                "start": named(&s, &beta),
                "falsifier_wins": level.is_some(),
                "min_rounds": level,
            }))
        }
        GameCommand::Certify {
            input,
            k,
            rounds,
            start,
        } => {
            let s = load_system(input)?;
            let beta = parse_position(&s, start)?;
            let certified =
                verifier_survival_certificate(&s, &beta, *k, *rounds).context(|| "certify".into())?;
            Artifact::json(&json!({
                "k": k,
                "rounds": rounds,
                "start": named(&s, &beta),
                "certified": certified,
            }))
        }
        GameCommand::Descent {
            hard,
            verifier,
            budget,
        } => {
            let h = build_hard(hard)?;
            let base = h.without_top();
            let k = hard.d + 1;
            let solution = match verifier {
                VerifierKind::Optimal => Some(solve(&base, k, None, *budget).context(|| "solve".into())?),
                VerifierKind::Zeros => None,
            };
            let mut optimal;
            let mut zeros;
            let player: &mut dyn Verifier = match &solution {
                Some(sol) => {
                    optimal = OptimalVerifier { solution: sol };
                    &mut optimal
                }
                None => {
                    zeros = ScriptedVerifier::new(Vec::new());
                    &mut zeros
                }
            };
            let play = layered_falsifier_play(&h.layered, h.x_ell, k, player).context(|| "play".into())?;
            let exact = match &solution {
                Some(sol) => sol
                    .level(&PartialAssignment::from_pairs([(h.x_ell, true)]))
                    .context(|| "level".into())?,
                None => None,
            };
            let mut artifact = Artifact::json(&json!({
                "pebbles": k,
                "consistent": play.is_consistent(&base),
                "exact_min_rounds": exact,
                "transcript": play,
            }))?;
            artifact.details = hard_details(&h);
            Ok(artifact)
        }
    }
}

fn family(args: &FamilyArgs) -> CliResult<SetFamily> {
    let family = if args.greedy {
        let universe = args.universe.expect("clap requires --universe with --greedy");
        let bound = args.k.checked_sub(2).ok_or_else(|| CliError::Usage("--k must be at least 2".into()))?;
        greedy_set_family(universe, args.k, bound, args.limit).context(|| "greedy family".into())?
    } else {
        let q = args.q.expect("clap requires --q without --greedy");
        let mut f = polynomial_set_family(q, args.k).context(|| "polynomial family".into())?;
        if let Some(u) = args.universe {
            f = f.with_universe(u).context(|| "universe".into())?;
        }
        match args.limit {
            Some(t) => f.prefix(t.min(f.len())),
            None => f,
        }
    };
    Ok(family)
}

fn join(members: &[u32]) -> String {
    members.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct FamilyRow {
    index: usize,
    members: String,
}

#[derive(Serialize)]
struct ChainRow {
    t: usize,
    last_member: String,
    classes: usize,
    k_stable: bool,
    shufflable: bool,
    equality_compatible: bool,
    strictly_refines_previous: Option<bool>,
}

fn generate(command: &GenCommand) -> CliResult<Artifact> {
    match command {
        GenCommand::Expander {
            n,
            r,
            seed,
            expansion,
        } => {
            let g = random_right_regular(*n, *r, *seed).context(|| "expander".into())?;
            let verdict = check_expansion(
                &g,
                rational("alpha", &expansion.alpha)?,
                rational("gamma", &expansion.gamma)?,
                expansion_mode(expansion, *seed),
            )
            .context(|| "expansion check".into())?;
            Ok(Artifact::text(
                constraints_from_graph(&g).to_text(),
                json!({ "seed": seed, "verdict": verdict }),
            ))
        }
        GenCommand::Layered {
            m,
            r,
            ell,
            seed,
            expansion,
        } => {
            let gp = random_right_regular(*m, *r, *seed).context(|| "base graph".into())?;
            let layered = build_layered(&gp, *ell).context(|| "layered graph".into())?;
            let verdict = check_layered_expansion(
                &layered,
                rational("alpha", &expansion.alpha)?,
                rational("gamma", &expansion.gamma)?,
                expansion_mode(expansion, *seed),
            )
            .context(|| "expansion check".into())?;
            Ok(Artifact::text(
                layered_game_system(&layered).to_text(),
                json!({ "seed": seed, "verdict": verdict }),
            ))
        }
        GenCommand::Hard { hard, pad } => {
            let h = build_hard(hard)?;
            let system = match pad {
                Some(n) => dummy_pad(&h.system, *n).context(|| "pad".into())?,
                None => h.system.clone(),
            };
            Ok(Artifact::text(system.to_text(), hard_details(&h)))
        }
        GenCommand::Family(args) => {
            let f = family(args)?;
            let rows: Vec<FamilyRow> = f
                .members()
                .iter()
                .enumerate()
                .map(|(index, m)| FamilyRow {
                    index,
                    members: join(m),
                })
                .collect();
            let details = json!({
                "universe": f.universe(),
                "k": f.k(),
                "members": f.len(),
                "max_pairwise_intersection": f.max_pairwise_intersection(),
            });
            Artifact::csv(&rows, details)
        }
        GenCommand::Chain(args) => {
            let f = family(args)?;
            let chain = stable_chain(&f, args.k).context(|| "chain".into())?;
            let mut rows = Vec::with_capacity(chain.len());
            for (t, element) in chain.iter().enumerate() {
                let chi = &element.coloring;
                let strict = match t {
                    0 => None,
                    _ => Some(strictly_refines(chi, &chain[t - 1].coloring).context(|| "chain".into())?),
                };
                rows.push(ChainRow {
                    t,
                    last_member: t.checked_sub(1).map(|i| join(&f.members()[i])).unwrap_or_default(),
                    classes: chi.num_colors(),
                    k_stable: is_k_stable(chi),
                    shufflable: is_shufflable(chi),
                    equality_compatible: is_equality_compatible(chi),
                    strictly_refines_previous: strict,
                });
            }
            Artifact::csv(&rows, json!({ "universe": f.universe(), "k": args.k, "length": f.len() }))
        }
    }
}

#[derive(Serialize)]
struct AlgebraRow<'a> {
    structure: &'a str,
    round: usize,
    classes: usize,
    dim: usize,
    strict: bool,
    saturated: bool,
}

fn algebra(command: &AlgebraCommand) -> CliResult<Artifact> {
    let AlgebraCommand::Chain { k, input, budget } = command;
    let structures = load_structures(input)?;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for a in &structures {
        let chain = wl_algebra_chain(a, *k, *budget).context(|| a.name().to_string())?;
        if let Some(r) = chain.r_infinity {
            assert_bound(a.name(), &BoundCheck::evaluate(chain.n, *k, r))?;
        }
        for round in &chain.rounds {
            rows.push(AlgebraRow {
                structure: a.name(),
                round: round.round,
                classes: round.classes,
                dim: round.dimension,
                strict: round.strict,
                saturated: round.saturated,
            });
        }
        summaries.push(json!({
            "structure": a.name(),
            "r_infinity": chain.r_infinity,
            "strict_increases": chain.strict_increases,
            "increase_bound": chain.increase_bound,
            "window": chain.window,
            "window_holds": chain.window_holds,
            "weakly_increasing": chain.weakly_increasing,
        }));
    }
    Artifact::csv(&rows, json!({ "chains": summaries }))
}

#[derive(Serialize)]
struct TradeoffRow<'a> {
    a: &'a str,
    b: &'a str,
    k: usize,
    ell: usize,
    n: usize,
    bin_n: usize,
    base_round: Option<usize>,
    base_settled: bool,
    bin_round: Option<usize>,
    bin_settled: bool,
    consistent: bool,
    bin_bound_ok: bool,
}

fn bin(command: &BinCommand) -> CliResult<Artifact> {
    match command {
        BinCommand::Build { ell, input } => {
            let a = load_structure(input)?;
            let b = bin_structure(&a, *ell).context(|| "binary structure".into())?;
            let relations = b.relation_types().len();
            Ok(Artifact::text(
                b.into_structure().to_text(),
                json!({ "ell": ell, "relations": relations }),
            ))
        }
        BinCommand::Tradeoff {
            k,
            a,
            b,
            max_rounds,
        } => {
            let (sa, sb) = (load_structure(a)?, load_structure(b)?);
            let report = tradeoff(&sa, &sb, *k, *max_rounds).context(|| "tradeoff".into())?;
            for check in report.bin_bounds.iter().flatten() {
                assert_bound("binary structure", check)?;
            }
            let row = TradeoffRow {
                a: sa.name(),
                b: sb.name(),
                k: report.k,
                ell: report.ell,
                n: report.n,
                bin_n: report.bin_n,
                base_round: report.base_round,
                base_settled: report.base_settled,
                bin_round: report.bin_round,
                bin_settled: report.bin_settled,
                consistent: report.consistent(),
                bin_bound_ok: report.bin_bounds.iter().flatten().all(|c| c.ok),
            };
            Artifact::csv(&[row], json!({ "report": report }))
        }
    }
}
