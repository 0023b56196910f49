//! Exhaustive reachability over state vectors.
//!
//! Configurations are keyed by the number of moves each monomer has made,
//! which determines the geometry. The search is level-synchronous: successors
//! of a level are computed in parallel and inserted in frontier order with
//! ascending move index, so the recorded parent of every configuration lies on
//! its lexicographically smallest shortest move sequence.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::machine::{
    reconstruct_positions, Configuration, MachineError, MoveStatus, NotApplicableReason, TurningMachine,
};

pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachReport {
    pub reachable_count: usize,
    pub blocked_configs: Vec<Vec<i32>>,
    pub final_reached: bool,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Folds {
        reachable_count: usize,
    },
    Unfoldable {
        witness: Vec<usize>,
        blocked_states: Vec<i32>,
    },
    Inconclusive {
        explored: usize,
    },
}

impl Verdict {
    pub fn folds(&self) -> bool {
        matches!(self, Verdict::Folds { .. })
    }
}

type Key = Box<[u8]>;

fn key_of(tm: &TurningMachine, states: &[i32]) -> Key {
    tm.initial_states()
        .iter()
        .zip(states)
        .map(|(&s0, &s)| (s0 - s).unsigned_abs() as u8)
        .collect()
}

fn states_of(tm: &TurningMachine, key: &[u8]) -> Vec<i32> {
    tm.initial_states()
        .iter()
        .zip(key)
        .map(|(&s0, &d)| s0 - s0.signum() * d as i32)
        .collect()
}

struct Node {
    key: Key,
    parent: u32,
    mv: u32,
}

struct Expansion {
    successors: Vec<(u32, Key)>,
    blocked: bool,
}

/// The explored part of the configuration graph, in discovery order.
struct Search {
    tm: Arc<TurningMachine>,
    nodes: Vec<Node>,
    blocked: Vec<u32>,
    final_reached: bool,
    truncated: bool,
}

const ROOT: u32 = u32::MAX;

fn expand(tm: &Arc<TurningMachine>, key: &[u8]) -> Expansion {
    let states = states_of(tm, key);
    let c = reconstruct_positions(tm, &states).expect("reachable state vector");
    let successors: Vec<(u32, Key)> = c
        .statuses()
        .iter()
        .enumerate()
        .filter(|(_, st)| **st == MoveStatus::Applicable)
        .map(|(i, _)| {
            let mut k = key.to_vec();
            k[i] += 1;
            (i as u32, k.into_boxed_slice())
        })
        .collect();
    let blocked = successors.is_empty() && !c.is_final();
    Expansion { successors, blocked }
}

impl Search {
    fn run(tm: &Arc<TurningMachine>, cap: usize, stop_at_blocked: bool) -> Search {
        assert!(cap >= 1, "cap must be positive");
        let mut search = Search {
            tm: Arc::clone(tm),
            nodes: Vec::new(),
            blocked: Vec::new(),
            final_reached: false,
            truncated: false,
        };
        let mut index: FxHashMap<Key, u32> = FxHashMap::default();
        let root: Key = vec![0u8; tm.len()].into_boxed_slice();
        index.insert(root.clone(), 0);
        search.nodes.push(Node {
            key: root,
            parent: ROOT,
            mv: 0,
        });
        let mut frontier: Vec<u32> = vec![0];
        while !frontier.is_empty() {
            let expanded: Vec<Expansion> = frontier
                .par_iter()
                .map(|&id| expand(tm, &search.nodes[id as usize].key))
                .collect();
            let mut next = Vec::new();
            for (&id, exp) in frontier.iter().zip(expanded) {
                if exp.blocked {
                    search.blocked.push(id);
                    if stop_at_blocked {
                        return search.finish();
                    }
                }
                for (mv, k) in exp.successors {
                    if index.contains_key(&k) {
                        continue;
                    }
                    if search.nodes.len() >= cap {
                        search.truncated = true;
                        return search.finish();
                    }
                    let new_id = search.nodes.len() as u32;
                    index.insert(k.clone(), new_id);
                    search.nodes.push(Node { key: k, parent: id, mv });
                    next.push(new_id);
                }
            }
            frontier = next;
        }
        search.finish()
    }

    fn finish(mut self) -> Search {
        let goal: Vec<u8> = self
            .tm
            .initial_states()
            .iter()
            .map(|s| s.unsigned_abs() as u8)
            .collect();
        self.final_reached = self.nodes.iter().any(|n| *n.key == *goal);
        self
    }

    fn path_to(&self, mut id: u32) -> Vec<usize> {
        let mut moves = Vec::new();
        while self.nodes[id as usize].parent != ROOT {
            moves.push(self.nodes[id as usize].mv as usize);
            id = self.nodes[id as usize].parent;
        }
        moves.reverse();
        moves
    }

    fn states(&self, id: u32) -> Vec<i32> {
        states_of(&self.tm, &self.nodes[id as usize].key)
    }
}

/// Breadth-first closure of the configurations reachable from the initial one.
///
/// At most `cap` configurations are stored; `truncated` reports whether the
/// cap cut the search short.
pub fn reachable(tm: &Arc<TurningMachine>, cap: usize) -> ReachReport {
    let search = Search::run(tm, cap, false);
    let mut blocked_configs: Vec<Vec<i32>> = search.blocked.iter().map(|&id| search.states(id)).collect();
    blocked_configs.sort();
    ReachReport {
        reachable_count: search.nodes.len(),
        blocked_configs,
        final_reached: search.final_reached,
        truncated: search.truncated,
    }
}

/// All reachable state vectors in discovery order, with the truncation flag.
pub fn reachable_states(tm: &Arc<TurningMachine>, cap: usize) -> (Vec<Vec<i32>>, bool) {
    let search = Search::run(tm, cap, false);
    let states = (0..search.nodes.len() as u32).map(|id| search.states(id)).collect();
    (states, search.truncated)
}

/// Shortest move sequence from the initial configuration to `target`, if reachable.
pub fn shortest_script(tm: &Arc<TurningMachine>, target: &[i32], cap: usize) -> Option<Vec<usize>> {
    let search = Search::run(tm, cap, false);
    let key = key_of(tm, target);
    search
        .nodes
        .iter()
        .position(|n| n.key == key)
        .map(|id| search.path_to(id as u32))
}

/// Folds iff no permanently blocked configuration is reachable.
///
/// Every maximal trajectory is finite and ends either in the all-zero state
/// vector, whose geometry is unique, or in a permanently blocked
/// configuration, so the check is a reachability question.
pub fn decide_folds(tm: &Arc<TurningMachine>) -> Verdict {
    decide_folds_capped(tm, DEFAULT_CAP)
}

pub fn decide_folds_capped(tm: &Arc<TurningMachine>, cap: usize) -> Verdict {
    let search = Search::run(tm, cap, true);
    if let Some(&id) = search.blocked.first() {
        return Verdict::Unfoldable {
            witness: search.path_to(id),
            blocked_states: search.states(id),
        };
    }
    if search.truncated {
        Verdict::Inconclusive {
            explored: search.nodes.len(),
        }
    } else {
        Verdict::Folds {
            reachable_count: search.nodes.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {step} (monomer {index}) is not applicable: {reason}")]
pub struct ReplayError {
    pub step: usize,
    pub index: usize,
    pub reason: ReplayFailure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayFailure {
    Rule(NotApplicableReason),
    IndexOutOfRange,
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayFailure::Rule(r) => r.fmt(f),
            ReplayFailure::IndexOutOfRange => f.write_str("no such monomer"),
        }
    }
}

/// Applies `moves` in order from the initial configuration.
pub fn replay(tm: &Arc<TurningMachine>, moves: &[usize]) -> Result<Configuration, ReplayError> {
    let mut c = tm.initial_configuration();
    for (step, &index) in moves.iter().enumerate() {
        c = c.apply_move(index).map_err(|e| ReplayError {
            step,
            index,
            reason: match e {
                MachineError::NotApplicable { reason, .. } => ReplayFailure::Rule(reason),
                _ => ReplayFailure::IndexOutOfRange,
            },
        })?;
    }
    Ok(c)
}

/// Properties that every reachable configuration of a suitable machine has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    /// Positions are pairwise distinct.
    Simple,
    /// Rebuilding positions from the state vector reproduces the configuration.
    Reconstructs,
    /// Neighbouring non-terminal monomers differ by at most two moves.
    StateDifference,
    /// Move-count differences equal the summed turn angles in between.
    TurnAngleChain,
    /// With initial states in `0..=5` a monomer that moved at most once is never blocked.
    UnblockedStates,
    /// With initial states in `0..=3` on the east line, the head lies on or above
    /// each monomer and the tail on or below it.
    HalfPlane,
    /// In half-turn line machines only state-1 monomers next to a state-3 monomer block.
    HalfTurnBlocking,
    /// In half-turn line machines at most `2n/3` monomers are blocked.
    TwoThirdsBlocked,
    /// In line machines with `s ≤ 4` at most `3n/4` monomers are blocked.
    ThreeQuartersBlocked,
}

impl Invariant {
    pub const ALL: [Invariant; 9] = [
        Invariant::Simple,
        Invariant::Reconstructs,
        Invariant::StateDifference,
        Invariant::TurnAngleChain,
        Invariant::UnblockedStates,
        Invariant::HalfPlane,
        Invariant::HalfTurnBlocking,
        Invariant::TwoThirdsBlocked,
        Invariant::ThreeQuartersBlocked,
    ];

    /// Whether the invariant is claimed for every reachable configuration of `tm`.
    pub fn applies_to(self, tm: &TurningMachine) -> bool {
        let s0 = tm.initial_states();
        let n = tm.len();
        let line_with = |s: i32| tm.is_east_line() && s0[..n - 1].iter().all(|&x| x == s) && s0[n - 1] == 0;
        let line_value = if n >= 2 { Some(s0[0]) } else { None };
        match self {
            Invariant::Simple | Invariant::Reconstructs => true,
            Invariant::StateDifference | Invariant::TurnAngleChain => tm.has_uniform_direction(),
            Invariant::UnblockedStates => s0.iter().all(|s| (0..=5).contains(s)),
            Invariant::HalfPlane => tm.is_east_line() && s0.iter().all(|s| (0..=3).contains(s)),
            Invariant::HalfTurnBlocking | Invariant::TwoThirdsBlocked => n >= 2 && line_with(3),
            Invariant::ThreeQuartersBlocked => line_value.is_some_and(|s| (0..=4).contains(&s) && line_with(s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub detail: String,
}

/// Evaluates the invariants in `which` on one configuration.
pub fn violations(c: &Configuration, which: &[Invariant]) -> Vec<Violation> {
    let n = c.len();
    let tm = c.machine();
    let p = c.positions();
    let rot: Vec<i32> = (0..n).map(|i| c.rotation(i)).collect();
    let statuses = c.statuses();
    let blocked: Vec<usize> = statuses
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, MoveStatus::Blocked { .. }))
        .map(|(i, _)| i)
        .collect();
    let mut out = Vec::new();
    let mut fail = |invariant, detail: String| out.push(Violation { invariant, detail });
    for &inv in which {
        match inv {
            Invariant::Simple => {
                let mut seen = FxHashSet::default();
                if let Some(j) = p.iter().position(|q| !seen.insert(*q)) {
                    fail(inv, format!("monomer {j} repeats position {}", p[j]));
                }
            }
            Invariant::Reconstructs => match reconstruct_positions(tm, c.states()) {
                Ok(r) if r.positions() == p => {}
                Ok(_) => fail(inv, "positions differ from the rebuilt chain".into()),
                Err(e) => fail(inv, e.to_string()),
            },
            Invariant::StateDifference => {
                // the last monomer has no direction and is exempt
                for i in 0..n.saturating_sub(2) {
                    if (rot[i] - rot[i + 1]).abs() > 2 {
                        fail(
                            inv,
                            format!("monomers {i} and {} turned {} and {} times", i + 1, rot[i], rot[i + 1]),
                        );
                        break;
                    }
                }
            }
            Invariant::TurnAngleChain => {
                if n >= 3 {
                    // prefix[k] = α_1 + … + α_k
                    let mut prefix = vec![0i32; n - 1];
                    for k in 1..n - 1 {
                        prefix[k] = prefix[k - 1] + c.turn_angle(k).expect("interior monomer");
                    }
                    'outer: for i in 0..n - 1 {
                        for j in i + 1..n - 1 {
                            if rot[j] - rot[i] != prefix[j] - prefix[i] {
                                fail(inv, format!("turn angles between monomers {i} and {j} do not add up"));
                                break 'outer;
                            }
                        }
                    }
                }
            }
            Invariant::UnblockedStates => {
                if let Some(&i) = blocked.iter().find(|&&i| c.moves_made(i) <= 1) {
                    fail(inv, format!("monomer {i} is blocked after {} moves", c.moves_made(i)));
                }
            }
            Invariant::HalfPlane => {
                'outer2: for i in 0..n {
                    let y = p[i].y;
                    for (j, q) in p.iter().enumerate() {
                        let ok = if j > i { q.y >= y } else { q.y <= y };
                        if !ok {
                            fail(inv, format!("monomer {j} lies on the wrong side of monomer {i}"));
                            break 'outer2;
                        }
                    }
                }
            }
            Invariant::HalfTurnBlocking => {
                let s = c.states();
                if let Some(&i) = blocked.iter().find(|&&i| {
                    let three_next = (i > 0 && s[i - 1] == 3) || (i + 1 < n && s[i + 1] == 3);
                    s[i] != 1 || !three_next
                }) {
                    fail(inv, format!("monomer {i} in state {} is blocked", s[i]));
                }
            }
            Invariant::TwoThirdsBlocked => {
                if 3 * blocked.len() > 2 * n {
                    fail(inv, format!("{} of {n} monomers blocked", blocked.len()));
                }
            }
            Invariant::ThreeQuartersBlocked => {
                if 4 * blocked.len() > 3 * n {
                    fail(inv, format!("{} of {n} monomers blocked", blocked.len()));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub invariant: Invariant,
    pub checked: usize,
    /// First violating state vector in discovery order, with the reason.
    pub counterexample: Option<(Vec<i32>, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub configs_checked: usize,
    pub truncated: bool,
    pub results: Vec<InvariantResult>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.counterexample.is_none())
    }

    pub fn result(&self, inv: Invariant) -> Option<&InvariantResult> {
        self.results.iter().find(|r| r.invariant == inv)
    }
}

/// Checks every applicable invariant on the first `max_configs` reachable configurations.
pub fn check_invariants(tm: &Arc<TurningMachine>, max_configs: usize) -> InvariantReport {
    let (states, truncated) = reachable_states(tm, max_configs);
    check_states(tm, &states, truncated)
}

/// Checks the applicable invariants on the given state vectors.
pub fn check_states(tm: &Arc<TurningMachine>, states: &[Vec<i32>], truncated: bool) -> InvariantReport {
    let which: Vec<Invariant> = Invariant::ALL.into_iter().filter(|i| i.applies_to(tm)).collect();
    let found: Vec<Vec<Violation>> = states
        .par_iter()
        .map(|s| match reconstruct_positions(tm, s) {
            Ok(c) => violations(&c, &which),
            Err(e) => vec![Violation {
                invariant: Invariant::Simple,
                detail: e.to_string(),
            }],
        })
        .collect();
    let results = which
        .iter()
        .map(|&inv| InvariantResult {
            invariant: inv,
            checked: states.len(),
            counterexample: found.iter().zip(states).find_map(|(v, s)| {
                v.iter()
                    .find(|x| x.invariant == inv)
                    .map(|x| (s.clone(), x.detail.clone()))
            }),
        })
        .collect();
    InvariantReport {
        configs_checked: states.len(),
        truncated,
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{line_machine, Classification};

    fn line(s: i32, n: usize) -> Arc<TurningMachine> {
        Arc::new(TurningMachine::line_rotation(s, n).unwrap())
    }

    #[test]
    fn one_sixth_line_of_three() {
        let r = reachable(&line(1, 3), DEFAULT_CAP);
        assert_eq!(r.reachable_count, 4);
        assert!(r.blocked_configs.is_empty());
        assert!(r.final_reached);
        assert!(!r.truncated);
        let (mut states, _) = reachable_states(&line(1, 3), DEFAULT_CAP);
        states.sort();
        assert_eq!(states, vec![vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 0]]);
    }

    #[test]
    fn full_turn_line_blocks() {
        let tm = line(6, 7);
        let r = reachable(&tm, DEFAULT_CAP);
        assert!(!r.blocked_configs.is_empty());
        assert!(r.blocked_configs.contains(&vec![6, 4, 3, 2, 1, 0, 0]));
        assert!(r.final_reached);
    }

    #[test]
    fn five_sixths_line_of_four_folds() {
        let r = reachable(&line(5, 4), DEFAULT_CAP);
        assert!(r.blocked_configs.is_empty());
        assert!(r.final_reached);
        assert!(decide_folds(&line(5, 4)).folds());
    }

    #[test]
    fn single_monomer_folds() {
        let tm = Arc::new(line_machine(&[0]).unwrap());
        assert_eq!(decide_folds(&tm), Verdict::Folds { reachable_count: 1 });
    }

    #[test]
    fn witness_is_shortest_and_replays() {
        let tm = line(6, 7);
        let Verdict::Unfoldable {
            witness,
            blocked_states,
        } = decide_folds(&tm)
        else {
            panic!("expected a witness");
        };
        let c = replay(&tm, &witness).unwrap();
        assert_eq!(c.classify(), Classification::PermanentlyBlocked);
        assert_eq!(c.states(), blocked_states.as_slice());
        // no blocked configuration is closer to the start
        let (states, _) = reachable_states(&tm, DEFAULT_CAP);
        let depth = |s: &Vec<i32>| -> u32 {
            tm.initial_states()
                .iter()
                .zip(s)
                .map(|(a, b)| (a - b).unsigned_abs())
                .sum()
        };
        let min_blocked = states
            .iter()
            .filter(|s| reconstruct_positions(&tm, s).unwrap().classify() == Classification::PermanentlyBlocked)
            .map(depth)
            .min()
            .unwrap();
        assert_eq!(witness.len() as u32, min_blocked);
    }

    #[test]
    fn cap_marks_truncation() {
        let tm = line(3, 8);
        let r = reachable(&tm, 10);
        assert!(r.truncated);
        assert_eq!(r.reachable_count, 10);
        assert!(matches!(
            decide_folds_capped(&tm, 10),
            Verdict::Inconclusive { explored: 10 }
        ));
    }

    #[test]
    fn replay_examples() {
        let tm = line(1, 3);
        assert_eq!(replay(&tm, &[0, 1]).unwrap().states(), &[0, 0, 0]);
        let e = replay(&tm, &[2]).unwrap_err();
        assert_eq!(e.step, 0);
        assert_eq!(e.reason, ReplayFailure::Rule(NotApplicableReason::ZeroState));
        assert_eq!(replay(&tm, &[7]).unwrap_err().reason, ReplayFailure::IndexOutOfRange);
    }

    #[test]
    fn shortest_script_reaches_target() {
        let tm = line(6, 7);
        let target = [6, 4, 3, 2, 1, 0, 0];
        let script = shortest_script(&tm, &target, DEFAULT_CAP).unwrap();
        assert_eq!(script.len(), 20);
        assert_eq!(replay(&tm, &script).unwrap().states(), &target);
    }

    #[test]
    fn invariants_hold_on_small_lines() {
        let report = check_invariants(&line(3, 6), DEFAULT_CAP);
        assert!(report.passed(), "{report:?}");
        assert!(report.result(Invariant::HalfTurnBlocking).is_some());
        let report = check_invariants(&line(5, 5), DEFAULT_CAP);
        assert!(report.passed(), "{report:?}");
        assert!(report.result(Invariant::UnblockedStates).is_some());
        assert!(report.result(Invariant::HalfPlane).is_none());
    }

    #[test]
    fn injected_configuration_is_reported() {
        // simple, but m_2 has turned four times while m_1 has not turned
        let tm = line(5, 4);
        let c = reconstruct_positions(&tm, &[5, 5, 1, 0]).unwrap();
        let v = violations(&c, &[Invariant::StateDifference, Invariant::Simple]);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].invariant, Invariant::StateDifference);

        let report = check_states(&tm, &[vec![5, 5, 5, 0], vec![5, 5, 1, 0]], false);
        let r = report.result(Invariant::StateDifference).unwrap();
        assert_eq!(r.counterexample.as_ref().unwrap().0, vec![5, 5, 1, 0]);
        assert!(!report.passed());
    }

    #[test]
    fn applicability_of_invariants() {
        let l3 = line(3, 6);
        assert!(Invariant::HalfTurnBlocking.applies_to(&l3));
        assert!(Invariant::ThreeQuartersBlocked.applies_to(&l3));
        let l5 = line(5, 6);
        assert!(!Invariant::ThreeQuartersBlocked.applies_to(&l5));
        assert!(!Invariant::HalfPlane.applies_to(&l5));
        let l6 = line(6, 6);
        assert!(!Invariant::UnblockedStates.applies_to(&l6));
        assert!(Invariant::StateDifference.applies_to(&l6));
    }
}
