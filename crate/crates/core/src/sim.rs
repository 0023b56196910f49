//! Continuous-time scheduling of Turning Machine trajectories.
//!
//! Every applicable rule fires at rate 1. The default scheduler runs a clock
//! of rate 1 on every monomer with a nonzero state and discards ticks of
//! blocked monomers; the accepted ticks form the same Markov chain as drawing
//! a uniform applicable move after an `Exp(k)` holding time, which is what
//! [`Scheduler::Direct`] does literally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::grid::GridPoint;
use crate::machine::{Classification, Configuration, TurningMachine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheduler {
    /// Per-monomer rate-1 clocks with rejection of blocked ticks.
    #[default]
    Uniformized,
    /// Enumerate the applicable moves at every step.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Final,
    PermanentlyBlocked,
}

/// One accepted rule application.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub i: usize,
    pub s: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub events: Vec<Event>,
    pub outcome: Outcome,
    pub total_time: f64,
    pub step_count: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub mean_time: f64,
    pub std_time: f64,
    pub blocked_fraction: f64,
    pub mean_steps: f64,
}

/// Seed of trial `i` under master seed `master`.
///
/// Two rounds of the SplitMix64 finalizer over the master seed and the trial
/// index. Frozen: changing it changes every recorded experiment.
pub fn trial_seed(master: u64, i: u64) -> u64 {
    splitmix(master ^ splitmix(i.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Cell lookup for monomer positions. Chains of `n` monomers anchored at the
/// origin stay within distance `n` of it, so small chains use a dense array.
enum Occupancy {
    Dense { radius: i32, side: usize, cells: Vec<u32> },
    Sparse(FxHashMap<GridPoint, u32>),
}

const DENSE_LIMIT: usize = 2048;

impl Occupancy {
    fn new(n: usize) -> Occupancy {
        if n <= DENSE_LIMIT {
            let side = 2 * n + 1;
            Occupancy::Dense {
                radius: n as i32,
                side,
                cells: vec![0; side * side],
            }
        } else {
            Occupancy::Sparse(FxHashMap::default())
        }
    }

    #[inline]
    fn slot(radius: i32, side: usize, p: GridPoint) -> Option<usize> {
        let x = p.x + radius;
        let y = p.y + radius;
        if x < 0 || y < 0 || x as usize >= side || y as usize >= side {
            None
        } else {
            Some(y as usize * side + x as usize)
        }
    }

    #[inline]
    fn get(&self, p: GridPoint) -> Option<usize> {
        match self {
            Occupancy::Dense { radius, side, cells } => Self::slot(*radius, *side, p)
                .and_then(|s| cells[s].checked_sub(1))
                .map(|k| k as usize),
            Occupancy::Sparse(map) => map.get(&p).map(|&k| k as usize),
        }
    }

    #[inline]
    fn set(&mut self, p: GridPoint, i: usize) {
        match self {
            Occupancy::Dense { radius, side, cells } => {
                let s = Self::slot(*radius, *side, p).expect("position within chain radius");
                cells[s] = i as u32 + 1;
            }
            Occupancy::Sparse(map) => {
                map.insert(p, i as u32);
            }
        }
    }

    #[inline]
    fn clear(&mut self, p: GridPoint) {
        match self {
            Occupancy::Dense { radius, side, cells } => {
                if let Some(s) = Self::slot(*radius, *side, p) {
                    cells[s] = 0;
                }
            }
            Occupancy::Sparse(map) => {
                map.remove(&p);
            }
        }
    }
}

/// A running trajectory. Call [`Simulation::step`] until it returns `None`.
pub struct Simulation {
    states: Vec<i32>,
    positions: Vec<GridPoint>,
    occupancy: Occupancy,
    // nonzero monomers and each monomer's slot in that list
    active: Vec<usize>,
    slot: Vec<usize>,
    rng: ChaCha8Rng,
    scheduler: Scheduler,
    clock: f64,
    last_event: f64,
    steps: u64,
    outcome: Option<Outcome>,
    seed: u64,
}

impl Simulation {
    pub fn new(tm: &TurningMachine, seed: u64, scheduler: Scheduler) -> Simulation {
        Simulation::start(
            tm.initial_states().to_vec(),
            tm.initial_path().to_vec(),
            seed,
            scheduler,
        )
    }

    /// Starts from an arbitrary configuration instead of the initial one.
    pub fn from_configuration(c: &Configuration, seed: u64, scheduler: Scheduler) -> Simulation {
        Simulation::start(c.states().to_vec(), c.positions().to_vec(), seed, scheduler)
    }

    fn start(states: Vec<i32>, positions: Vec<GridPoint>, seed: u64, scheduler: Scheduler) -> Simulation {
        let n = states.len();
        let mut occupancy = Occupancy::new(n);
        for (i, &p) in positions.iter().enumerate() {
            occupancy.set(p, i);
        }
        let mut active = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for (i, &s) in states.iter().enumerate() {
            if s != 0 {
                slot[i] = active.len();
                active.push(i);
            }
        }
        Simulation {
            states,
            positions,
            occupancy,
            active,
            slot,
            rng: ChaCha8Rng::seed_from_u64(seed),
            scheduler,
            clock: 0.0,
            last_event: 0.0,
            steps: 0,
            outcome: None,
            seed,
        }
    }

    pub fn states(&self) -> &[i32] {
        &self.states
    }

    pub fn positions(&self) -> &[GridPoint] {
        &self.positions
    }

    /// Time of the last accepted event.
    pub fn time(&self) -> f64 {
        self.last_event
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// `Some` once the trajectory has ended.
    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    #[inline]
    fn translation(&self, i: usize) -> Option<GridPoint> {
        let n = self.positions.len();
        if i + 1 >= n {
            return None;
        }
        let d = self.positions[i]
            .direction_to(self.positions[i + 1])
            .expect("chain of unit steps");
        Some(d.rotate(if self.states[i] > 0 { 2 } else { -2 }).step())
    }

    #[inline]
    fn is_blocked(&self, i: usize, v: GridPoint) -> bool {
        let n = self.positions.len();
        let head = n - i - 1;
        if head <= i + 1 {
            self.positions[i + 1..]
                .iter()
                .any(|&p| self.occupancy.get(p + v).is_some_and(|k| k <= i))
        } else {
            self.positions[..=i]
                .iter()
                .any(|&p| self.occupancy.get(p - v).is_some_and(|j| j > i))
        }
    }

    fn is_applicable(&self, i: usize) -> bool {
        match self.translation(i) {
            None => true,
            Some(v) => !self.is_blocked(i, v),
        }
    }

    fn apply(&mut self, i: usize) {
        if let Some(v) = self.translation(i) {
            for j in i + 1..self.positions.len() {
                self.occupancy.clear(self.positions[j]);
            }
            for j in i + 1..self.positions.len() {
                self.positions[j] = self.positions[j] + v;
                self.occupancy.set(self.positions[j], j);
            }
        }
        self.states[i] -= self.states[i].signum();
        if self.states[i] == 0 {
            let at = self.slot[i];
            let last = *self.active.last().expect("monomer was active");
            self.active.swap_remove(at);
            if last != i {
                self.slot[last] = at;
            }
            self.slot[i] = usize::MAX;
        }
        self.steps += 1;
    }

    fn holding(&mut self, rate: usize) -> f64 {
        let e: f64 = self.rng.sample(Exp1);
        e / rate as f64
    }

    fn finish(&mut self) -> Option<Event> {
        self.outcome = Some(if self.active.is_empty() {
            Outcome::Final
        } else {
            Outcome::PermanentlyBlocked
        });
        None
    }

    /// Advances to the next accepted event, or returns `None` at the end.
    pub fn step(&mut self) -> Option<Event> {
        if self.outcome.is_some() {
            return None;
        }
        match self.scheduler {
            Scheduler::Direct => {
                let moves: Vec<usize> = {
                    let mut m = self.active.clone();
                    m.sort_unstable();
                    m.retain(|&i| self.is_applicable(i));
                    m
                };
                if moves.is_empty() {
                    return self.finish();
                }
                let i = moves[self.rng.random_range(0..moves.len())];
                self.clock += self.holding(moves.len());
                Some(self.accept(i))
            }
            Scheduler::Uniformized => {
                let mut rejected = 0usize;
                loop {
                    let m = self.active.len();
                    if m == 0 {
                        return self.finish();
                    }
                    let i = self.active[self.rng.random_range(0..m)];
                    self.clock += self.holding(m);
                    if self.is_applicable(i) {
                        return Some(self.accept(i));
                    }
                    rejected += 1;
                    if rejected >= m {
                        if !self.active.iter().any(|&j| self.is_applicable(j)) {
                            return self.finish();
                        }
                        rejected = 0;
                    }
                }
            }
        }
    }

    fn accept(&mut self, i: usize) -> Event {
        self.apply(i);
        self.last_event = self.clock;
        Event {
            t: self.clock,
            i,
            s: self.states[i],
        }
    }

    /// Runs to the end without recording events.
    pub fn run(&mut self) -> Outcome {
        while self.step().is_some() {}
        self.outcome.expect("finished")
    }

    fn into_log(self, events: Vec<Event>) -> TrajectoryLog {
        TrajectoryLog {
            events,
            outcome: self.outcome.expect("finished"),
            total_time: self.last_event,
            step_count: self.steps,
            seed: self.seed,
        }
    }
}

impl From<Outcome> for Classification {
    fn from(o: Outcome) -> Classification {
        match o {
            Outcome::Final => Classification::Final,
            Outcome::PermanentlyBlocked => Classification::PermanentlyBlocked,
        }
    }
}

/// Samples one full trajectory with the default scheduler.
pub fn sample_trajectory(tm: &TurningMachine, seed: u64) -> TrajectoryLog {
    sample_trajectory_with(tm, seed, Scheduler::default())
}

pub fn sample_trajectory_with(tm: &TurningMachine, seed: u64, scheduler: Scheduler) -> TrajectoryLog {
    let mut sim = Simulation::new(tm, seed, scheduler);
    let mut events = Vec::new();
    while let Some(e) = sim.step() {
        events.push(e);
    }
    sim.into_log(events)
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Runs `trials` independent trajectories in parallel, trial `i` seeded by
/// [`trial_seed`], and returns `f` of each finished simulation in trial order.
pub fn map_trials<R, F>(tm: &TurningMachine, trials: u64, seed: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&Simulation) -> R + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut sim = Simulation::new(tm, trial_seed(seed, i), Scheduler::default());
            sim.run();
            f(&sim)
        })
        .collect()
}

pub fn trial_stats(tm: &TurningMachine, trials: u64, seed: u64) -> TrialStats {
    assert!(trials >= 1, "trial_stats needs at least one trial");
    let runs = map_trials(tm, trials, seed, |sim| {
        (
            sim.time(),
            sim.steps(),
            sim.outcome() == Some(Outcome::PermanentlyBlocked),
        )
    });
    let count = trials as f64;
    let mean_time = compensated_sum(runs.iter().map(|r| r.0)) / count;
    let var = if trials > 1 {
        compensated_sum(runs.iter().map(|r| (r.0 - mean_time).powi(2))) / (count - 1.0)
    } else {
        0.0
    };
    TrialStats {
        trials,
        mean_time,
        std_time: var.sqrt(),
        blocked_fraction: runs.iter().filter(|r| r.2).count() as f64 / count,
        mean_steps: compensated_sum(runs.iter().map(|r| r.1 as f64)) / count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub trials: u64,
    pub mean_time: f64,
    pub std_time: f64,
    pub blocked_fraction: f64,
    pub mean_steps: f64,
}

/// Least-squares fit `y ≈ a + b·ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub a: f64,
    pub b: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub s: i32,
    pub rows: Vec<ScalingRow>,
    pub fit: Option<LogFit>,
}

pub fn log_fit(points: &[(usize, f64)]) -> Option<LogFit> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    let mx = compensated_sum(xs.iter().copied()) / m;
    let my = compensated_sum(ys.iter().copied()) / m;
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx).powi(2)));
    let sxy = compensated_sum(xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)));
    let syy = compensated_sum(ys.iter().map(|y| (y - my).powi(2)));
    if sxx == 0.0 {
        return None;
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LogFit { a, b, r2 })
}

/// Mean completion time of `Lˢₙ` for each `n` in `sizes`.
pub fn scaling_experiment(s: i32, sizes: &[usize], trials: u64, seed: u64) -> ScalingReport {
    let rows: Vec<ScalingRow> = sizes
        .iter()
        .map(|&n| {
            let tm = TurningMachine::line_rotation(s, n).expect("valid line machine");
            let st = trial_stats(&tm, trials, trial_seed(seed, n as u64));
            ScalingRow {
                n,
                trials: st.trials,
                mean_time: st.mean_time,
                std_time: st.std_time,
                blocked_fraction: st.blocked_fraction,
                mean_steps: st.mean_steps,
            }
        })
        .collect();
    let fit = log_fit(&rows.iter().map(|r| (r.n, r.mean_time)).collect::<Vec<_>>());
    ScalingReport { s, rows, fit }
}

/// `H_m = 1 + 1/2 + … + 1/m`.
pub fn harmonic(m: usize) -> f64 {
    compensated_sum((1..=m).rev().map(|k| 1.0 / k as f64))
}
