//! The three subcommands. Each returns the paths it wrote.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qflip::dynamics::{propagate, write_trajectory_csv, Trajectory};
use qflip::game::pauli_vs_pauli;
use qflip::optimize::multistart_optimize;
use qflip::{
    BfgsSettings, Channel, Config, GameOutcome, NoiseModel, OptimizationProblem, PulseTriple, Role,
    Strategy,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::report::{BranchRecord, OutcomeRecord, ResultRecord, StateRecord};

pub const SWEEP_HEADER: [&str; 4] = [
    "gamma",
    "payoff_pauli",
    "payoff_opt_alice",
    "payoff_opt_bob",
];

pub fn run(command: Command, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    if let Some(c) = cfg.command {
        if c != command {
            return Err(CliError::config(
                "command",
                format!("file says `{}`, invoked as `{}`", c.name(), command.name()),
            ));
        }
    }
    cfg.check_numerics()?;
    match command {
        Command::Simulate => simulate(cfg),
        Command::Sweep => sweep(cfg),
        Command::Optimize => optimize(cfg),
    }
}

fn game_config(cfg: &RunConfig, channel: Option<Channel>, gamma: f64) -> Result<Config, CliError> {
    let noise = match channel {
        Some(ch) => NoiseModel::preset(ch, gamma).map_err(|e| CliError::from_core(e, "gamma"))?,
        None => NoiseModel::noiseless(),
    };
    Ok(Config {
        initial: cfg.initial_state.density(),
        noise,
        dt: cfg.dt,
        steps_per_segment: cfg.steps_per_segment,
    })
}

fn channel_name(channel: Option<Channel>) -> String {
    channel.map_or_else(|| "none".to_string(), |c| c.name().to_string())
}

fn prepare_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_trajectory(path: &Path, traj: &Trajectory<f64>) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory_csv(traj, &mut w)?;
    w.flush()?;
    Ok(())
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("records serialize");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Trajectory of every (Alice branch, Bob branch) pair with its weight, in
/// enumeration order.
fn branch_trajectories(
    gcfg: &Config,
    alice: &Strategy<f64>,
    bob: &Strategy<f64>,
) -> Result<Vec<(f64, Trajectory<f64>)>, CliError> {
    let a = alice.branches();
    let b = bob.branches();
    let pairs: Vec<_> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| (x, y)))
        .collect();
    pairs
        .par_iter()
        .map(|(x, y)| {
            let sched = gcfg.schedule(&x.rounds, &y.rounds[0])?;
            let traj = propagate(&gcfg.initial, &sched, &gcfg.noise, gcfg.steps_per_segment)?;
            Ok((x.probability * y.probability, traj))
        })
        .collect::<qflip::Result<_>>()
        .map_err(|e| CliError::from_core(e, "alice"))
}

fn mean_trajectory(parts: &[(f64, Trajectory<f64>)]) -> Result<Trajectory<f64>, CliError> {
    if parts.len() == 1 {
        return Ok(parts[0].1.clone());
    }
    let refs: Vec<(f64, &Trajectory<f64>)> = parts.iter().map(|(w, t)| (*w, t)).collect();
    Trajectory::mixture(&refs).map_err(CliError::Numerical)
}

/// Writes `trajectory.csv` and `outcome.json`. Mixed strategies give the
/// probability-weighted mean trajectory.
pub fn simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let channel = cfg.channel()?;
    let gamma = cfg.single_gamma()?;
    let gcfg = game_config(cfg, channel, gamma)?;
    let (alice, bob) = cfg.strategies()?;
    let parts = branch_trajectories(&gcfg, &alice, &bob)?;
    let traj = mean_trajectory(&parts)?;
    let outcome = GameOutcome::from_final_state(*traj.final_state());

    let dir = prepare_dir(cfg)?;
    let traj_path = dir.join("trajectory.csv");
    write_trajectory(&traj_path, &traj)?;
    let record = OutcomeRecord {
        channel: channel_name(channel),
        gamma,
        steps_per_segment: cfg.steps_per_segment,
        branches: parts.len(),
        payoff: outcome.payoff,
        p_alice_win: outcome.p_alice_win,
        p_bob_win: outcome.p_bob_win,
        final_state: StateRecord::new(&outcome.final_state),
    };
    let outcome_path = dir.join("outcome.json");
    write_json(&outcome_path, &record)?;
    Ok(vec![traj_path, outcome_path])
}

fn build_problem(
    cfg: &RunConfig,
    gcfg: Config,
    role: Role,
    opponent: Strategy<f64>,
) -> Result<OptimizationProblem<f64>, CliError> {
    let o = &cfg.optimizer;
    let mut prob = OptimizationProblem::new(gcfg, role, opponent)
        .map_err(|e| CliError::from_core(e, "optimizer.role"))?;
    prob.settings = BfgsSettings {
        grad_tol: o.grad_tol,
        max_iterations: o.max_iterations,
        ..BfgsSettings::default()
    };
    if let Some(guess) = &o.initial_guess {
        prob = prob
            .with_initial_guess(guess.clone())
            .map_err(|e| CliError::from_core(e, "optimizer.initial_guess"))?;
    }
    if let Some([lo, hi]) = o.bounds {
        prob = prob
            .with_bounds(lo, hi)
            .map_err(|e| CliError::from_core(e, "optimizer.bounds"))?;
    }
    Ok(prob)
}

fn opponent_of(cfg: &RunConfig, role: Role) -> Result<Strategy<f64>, CliError> {
    if cfg.alpha.is_some() {
        return Err(CliError::config(
            "alpha",
            "fixed coefficients cannot be combined with optimization",
        ));
    }
    match role {
        Role::Alice => cfg.bob.build(Role::Bob, "bob"),
        Role::Bob => cfg.alice.build(Role::Alice, "alice"),
    }
}

/// Writes `sweep.csv`: one row per rate, in input order.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let channel = cfg.channel()?;
    let gammas = cfg.gammas()?;
    let mut roles = Vec::new();
    if cfg.sweep.optimize_alice {
        roles.push(Role::Alice);
    }
    if cfg.sweep.optimize_bob {
        roles.push(Role::Bob);
    }
    let opponents: Vec<(Role, Strategy<f64>)> = roles
        .iter()
        .map(|&r| opponent_of(cfg, r).map(|s| (r, s)))
        .collect::<Result<_, _>>()?;
    // surface problem-construction errors before the expensive part
    for (role, opp) in &opponents {
        build_problem(
            cfg,
            game_config(cfg, channel, gammas[0])?,
            *role,
            opp.clone(),
        )?;
    }

    let rows: Vec<Vec<f64>> = gammas
        .par_iter()
        .map(|&g| {
            let gcfg = game_config(cfg, channel, g)?;
            let mut row = vec![
                g,
                pauli_vs_pauli(&gcfg).map_err(|e| CliError::from_core(e, "gamma"))?,
            ];
            for (role, opp) in &opponents {
                let prob = build_problem(cfg, gcfg.clone(), *role, opp.clone())?;
                let best = multistart_optimize(&prob, cfg.optimizer.starts, cfg.optimizer.seed)
                    .map_err(|e| CliError::from_core(e, "optimizer"))?;
                row.push(best.payoff);
            }
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;

    let dir = prepare_dir(cfg)?;
    let path = dir.join("sweep.csv");
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&path)?));
    let mut header = vec![SWEEP_HEADER[0], SWEEP_HEADER[1]];
    for role in &roles {
        header.push(match role {
            Role::Alice => SWEEP_HEADER[2],
            Role::Bob => SWEEP_HEADER[3],
        });
    }
    w.write_record(&header).map_err(csv_io)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(vec![path])
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Io(e.into())
}

/// Writes `result.json`, one `trajectory_branch_NN.csv` per opponent branch
/// and the branch-averaged `trajectory_mean.csv`.
pub fn optimize(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let channel = cfg.channel()?;
    let gamma = cfg.single_gamma()?;
    let role: Role = cfg
        .optimizer
        .role
        .ok_or_else(|| CliError::config("optimizer.role", "optimize needs `alice` or `bob`"))?
        .into();
    let gcfg = game_config(cfg, channel, gamma)?;
    let opponent = opponent_of(cfg, role)?;
    let prob = build_problem(cfg, gcfg.clone(), role, opponent.clone())?;
    let best = multistart_optimize(&prob, cfg.optimizer.starts, cfg.optimizer.seed)
        .map_err(|e| CliError::from_core(e, "optimizer"))?;
    let pauli_payoff = pauli_vs_pauli(&gcfg).map_err(|e| CliError::from_core(e, "gamma"))?;

    let rounds: Vec<PulseTriple<f64>> = prob.rounds(&best.epsilon).map_err(CliError::Numerical)?;
    let player = Strategy::deterministic(role, rounds).map_err(CliError::Numerical)?;
    let (alice, bob) = match role {
        Role::Alice => (player, opponent.clone()),
        Role::Bob => (opponent.clone(), player),
    };
    let parts = branch_trajectories(&gcfg, &alice, &bob)?;
    let opponent_branches = opponent.branches();
    debug_assert_eq!(parts.len(), opponent_branches.len());

    let dir = prepare_dir(cfg)?;
    let mut written = Vec::new();
    let mut branches = Vec::new();
    for (i, ((w, traj), b)) in parts.iter().zip(&opponent_branches).enumerate() {
        let file = format!("trajectory_branch_{i:02}.csv");
        let path = dir.join(&file);
        write_trajectory(&path, traj)?;
        let fin = traj.final_state();
        branches.push(BranchRecord {
            file,
            choice: b.choice.clone(),
            probability: *w,
            payoff: fin.p0() - fin.p1(),
        });
        written.push(path);
    }
    let mean_path = dir.join("trajectory_mean.csv");
    write_trajectory(&mean_path, &mean_trajectory(&parts)?)?;
    written.push(mean_path);

    let record = ResultRecord {
        epsilon: best.epsilon.clone(),
        cost: best.cost,
        payoff: best.payoff,
        iterations: best.iterations,
        grad_norm: best.grad_norm,
        converged: best.converged,
        seed: cfg.optimizer.seed,
        role: role.name().to_string(),
        channel: channel_name(channel),
        gamma,
        steps_per_segment: cfg.steps_per_segment,
        starts: cfg.optimizer.starts,
        start_index: best.start_index,
        stop: format!("{:?}", best.stop),
        initial_payoff: best.initial_payoff,
        pauli_payoff,
        branches,
    };
    let result_path = dir.join("result.json");
    write_json(&result_path, &record)?;
    written.insert(0, result_path);
    Ok(written)
}
