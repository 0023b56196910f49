//! Turning Machine semantics.
//!
//! A machine is a chain of `n` monomers anchored at the origin. Monomer `i`
//! points from its own position to the position of monomer `i + 1`; the last
//! monomer points nowhere. A nonzero state asks the monomer to turn: a
//! positive state turns it anticlockwise by π/3 and steps the state down, a
//! negative state turns it clockwise and steps the state up. Turning drags
//! the head of the chain (monomers `i + 1..n`) by the current direction of
//! monomer `i` rotated by ±2π/3, and the move is blocked when the dragged head
//! would land on a position of the tail (monomers `0..=i`).
//!
//! The direction of a monomer only depends on how many times it has turned,
//! so a reachable configuration is determined by its state vector; see
//! [`reconstruct_positions`].

use std::fmt;
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::grid::{Direction, GridPoint};

/// Largest supported magnitude of an initial state.
pub const MAX_ABS_STATE: i32 = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("a machine needs at least one monomer")]
    Empty,
    #[error("{states} states given for a path of {path} points")]
    LengthMismatch { states: usize, path: usize },
    #[error("initial path must start at the origin, found {0}")]
    NotAnchored(GridPoint),
    #[error("path step {index} from {from} to {to} is not a unit step")]
    NotUnitStep {
        index: usize,
        from: GridPoint,
        to: GridPoint,
    },
    #[error("path revisits {point} at index {index}")]
    NotSimple { index: usize, point: GridPoint },
    #[error("initial state {state} of monomer {index} exceeds the supported magnitude {MAX_ABS_STATE}")]
    StateOutOfRange { index: usize, state: i32 },
    #[error("state vector has {got} entries, the machine has {expected} monomers")]
    WrongLength { got: usize, expected: usize },
    #[error("state {state} of monomer {index} does not lie between 0 and its initial state {initial}")]
    StateNotTowardZero { index: usize, state: i32, initial: i32 },
    #[error("state vector yields a self-intersecting chain at monomer {index}")]
    SelfIntersecting { index: usize },
    #[error("monomer index {index} out of range for {n} monomers")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("rule for monomer {index} is not applicable: {reason}")]
    NotApplicable { index: usize, reason: NotApplicableReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotApplicableReason {
    ZeroState,
    Blocked { head: usize, tail: usize },
}

impl fmt::Display for NotApplicableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotApplicableReason::ZeroState => f.write_str("monomer is in state 0"),
            NotApplicableReason::Blocked { head, tail } => {
                write!(f, "blocked: monomer {head} would land on monomer {tail}")
            }
        }
    }
}

/// Result of testing the turning rule on one monomer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveStatus {
    Applicable,
    ZeroState,
    /// Moving would translate monomer `head` onto the position of monomer
    /// `tail`, with `tail <= i < head`.
    Blocked {
        head: usize,
        tail: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Final,
    PermanentlyBlocked,
    Active,
}

/// An instance: initial states plus the initial simple path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurningMachine {
    initial_states: Vec<i32>,
    initial_path: Vec<GridPoint>,
    initial_directions: Vec<Direction>,
}

impl TurningMachine {
    pub fn new(states: Vec<i32>, path: Vec<GridPoint>) -> Result<Self, MachineError> {
        if states.is_empty() {
            return Err(MachineError::Empty);
        }
        if states.len() != path.len() {
            return Err(MachineError::LengthMismatch {
                states: states.len(),
                path: path.len(),
            });
        }
        if path[0] != GridPoint::ORIGIN {
            return Err(MachineError::NotAnchored(path[0]));
        }
        if let Some((index, &state)) = states.iter().enumerate().find(|(_, s)| s.abs() > MAX_ABS_STATE) {
            return Err(MachineError::StateOutOfRange { index, state });
        }
        let mut seen = FxHashSet::default();
        for (index, &point) in path.iter().enumerate() {
            if !seen.insert(point) {
                return Err(MachineError::NotSimple { index, point });
            }
        }
        let initial_directions = path
            .windows(2)
            .enumerate()
            .map(|(index, w)| {
                w[0].direction_to(w[1]).ok_or(MachineError::NotUnitStep {
                    index,
                    from: w[0],
                    to: w[1],
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TurningMachine {
            initial_states: states,
            initial_path: path,
            initial_directions,
        })
    }

    /// Machine whose monomers sit on the non-negative x-axis, all pointing east.
    pub fn line(states: Vec<i32>) -> Result<Self, MachineError> {
        let path = (0..states.len() as i32).map(|x| GridPoint::new(x, 0)).collect();
        TurningMachine::new(states, path)
    }

    /// The line rotation machine: `n - 1` monomers in state `s`, the last in state 0.
    pub fn line_rotation(s: i32, n: usize) -> Result<Self, MachineError> {
        if n == 0 {
            return Err(MachineError::Empty);
        }
        let mut states = vec![s; n - 1];
        states.push(0);
        TurningMachine::line(states)
    }

    pub fn len(&self) -> usize {
        self.initial_states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.initial_states.is_empty()
    }

    pub fn initial_states(&self) -> &[i32] {
        &self.initial_states
    }

    pub fn initial_path(&self) -> &[GridPoint] {
        &self.initial_path
    }

    /// Initial direction of monomer `i`, `None` for the last monomer.
    pub fn initial_direction(&self, i: usize) -> Option<Direction> {
        self.initial_directions.get(i).copied()
    }

    /// True when the initial path is the east-pointing line on the x-axis.
    pub fn is_east_line(&self) -> bool {
        self.initial_directions.iter().all(|&d| d == Direction::PLUS_X)
    }

    /// True when every monomer except the last points the same way initially.
    pub fn has_uniform_direction(&self) -> bool {
        self.initial_directions.windows(2).all(|w| w[0] == w[1])
    }

    /// `min(S ∪ {0}) ..= max(S ∪ {0})` over the initial states `S`.
    pub fn state_set(&self) -> std::ops::RangeInclusive<i32> {
        let lo = self.initial_states.iter().copied().fold(0, i32::min);
        let hi = self.initial_states.iter().copied().fold(0, i32::max);
        lo..=hi
    }

    /// Number of rule applications on any trajectory that reaches the final configuration.
    pub fn total_moves(&self) -> u64 {
        self.initial_states.iter().map(|s| s.unsigned_abs() as u64).sum()
    }

    pub fn initial_configuration(self: &Arc<Self>) -> Configuration {
        Configuration {
            machine: Arc::clone(self),
            states: self.initial_states.clone(),
            positions: self.initial_path.clone(),
        }
    }

    /// Direction of monomer `i` after the monomer has reached `state`.
    pub(crate) fn direction_at(&self, i: usize, state: i32) -> Option<Direction> {
        self.initial_directions
            .get(i)
            .map(|d| d.rotate((self.initial_states[i] - state) as i64))
    }

    fn check_state_vector(&self, states: &[i32]) -> Result<(), MachineError> {
        if states.len() != self.len() {
            return Err(MachineError::WrongLength {
                got: states.len(),
                expected: self.len(),
            });
        }
        for (index, (&state, &initial)) in states.iter().zip(&self.initial_states).enumerate() {
            let toward_zero = if initial >= 0 {
                (0..=initial).contains(&state)
            } else {
                (initial..=0).contains(&state)
            };
            if !toward_zero {
                return Err(MachineError::StateNotTowardZero { index, state, initial });
            }
        }
        Ok(())
    }
}

/// Builds the line rotation style machine for an arbitrary state sequence.
pub fn line_machine(states: &[i32]) -> Result<TurningMachine, MachineError> {
    TurningMachine::line(states.to_vec())
}

/// A configuration of a machine: current states and monomer positions.
#[derive(Debug, Clone)]
pub struct Configuration {
    machine: Arc<TurningMachine>,
    states: Vec<i32>,
    positions: Vec<GridPoint>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states && self.positions == other.positions
    }
}

impl Eq for Configuration {}

/// Rebuilds the chain for a state vector by walking from the origin.
pub fn reconstruct_positions(tm: &Arc<TurningMachine>, states: &[i32]) -> Result<Configuration, MachineError> {
    tm.check_state_vector(states)?;
    let n = tm.len();
    let mut positions = Vec::with_capacity(n);
    let mut seen = FxHashSet::default();
    let mut p = GridPoint::ORIGIN;
    positions.push(p);
    seen.insert(p);
    for (i, &state) in states.iter().enumerate().take(n.saturating_sub(1)) {
        let d = tm.direction_at(i, state).expect("non-terminal monomer has a direction");
        p = p.offset(d);
        if !seen.insert(p) {
            return Err(MachineError::SelfIntersecting { index: i + 1 });
        }
        positions.push(p);
    }
    Ok(Configuration {
        machine: Arc::clone(tm),
        states: states.to_vec(),
        positions,
    })
}

impl Configuration {
    pub fn machine(&self) -> &Arc<TurningMachine> {
        &self.machine
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[i32] {
        &self.states
    }

    pub fn positions(&self) -> &[GridPoint] {
        &self.positions
    }

    pub fn into_states(self) -> Vec<i32> {
        self.states
    }

    /// Current direction of monomer `i`; `None` for the last monomer.
    pub fn direction(&self, i: usize) -> Option<Direction> {
        if i + 1 < self.positions.len() {
            self.positions[i].direction_to(self.positions[i + 1])
        } else {
            None
        }
    }

    /// Net anticlockwise turn of monomer `i` since the start, in sixths.
    pub fn rotation(&self, i: usize) -> i32 {
        self.machine.initial_states[i] - self.states[i]
    }

    /// Number of rule applications monomer `i` has made (`Δs`).
    pub fn moves_made(&self, i: usize) -> u32 {
        self.rotation(i).unsigned_abs()
    }

    pub fn is_final(&self) -> bool {
        self.states.iter().all(|&s| s == 0)
    }

    /// Sum of |state| over all monomers; drops by one per applied move.
    pub fn remaining_moves(&self) -> u64 {
        self.states.iter().map(|s| s.unsigned_abs() as u64).sum()
    }

    fn head_translation(&self, i: usize) -> Option<GridPoint> {
        let d = self.direction(i)?;
        let turn = if self.states[i] > 0 { 2 } else { -2 };
        Some(d.rotate(turn).step())
    }

    fn index_map(&self) -> FxHashMap<GridPoint, usize> {
        self.positions.iter().enumerate().map(|(i, &p)| (p, i)).collect()
    }

    fn status_with(&self, i: usize, index: &FxHashMap<GridPoint, usize>) -> MoveStatus {
        if self.states[i] == 0 {
            return MoveStatus::ZeroState;
        }
        let Some(v) = self.head_translation(i) else {
            // the last monomer has an empty head
            return MoveStatus::Applicable;
        };
        // smallest tail index first gives the lexicographically smallest witness
        for (k, &p) in self.positions[..=i].iter().enumerate() {
            if let Some(&j) = index.get(&(p - v)) {
                if j > i {
                    return MoveStatus::Blocked { head: j, tail: k };
                }
            }
        }
        MoveStatus::Applicable
    }

    pub fn move_status(&self, i: usize) -> Result<MoveStatus, MachineError> {
        if i >= self.len() {
            return Err(MachineError::IndexOutOfRange {
                index: i,
                n: self.len(),
            });
        }
        Ok(self.status_with(i, &self.index_map()))
    }

    /// Status of every monomer, sharing one position index.
    pub fn statuses(&self) -> Vec<MoveStatus> {
        let index = self.index_map();
        (0..self.len()).map(|i| self.status_with(i, &index)).collect()
    }

    pub fn apply_move(&self, i: usize) -> Result<Configuration, MachineError> {
        match self.move_status(i)? {
            MoveStatus::Applicable => Ok(self.apply_unchecked(i)),
            MoveStatus::ZeroState => Err(MachineError::NotApplicable {
                index: i,
                reason: NotApplicableReason::ZeroState,
            }),
            MoveStatus::Blocked { head, tail } => Err(MachineError::NotApplicable {
                index: i,
                reason: NotApplicableReason::Blocked { head, tail },
            }),
        }
    }

    /// Applies the rule to monomer `i` without the blocking test.
    pub(crate) fn apply_unchecked(&self, i: usize) -> Configuration {
        let mut next = self.clone();
        if let Some(v) = self.head_translation(i) {
            for p in &mut next.positions[i + 1..] {
                *p = *p + v;
            }
        }
        next.states[i] -= self.states[i].signum();
        next
    }

    /// Indices with an applicable rule, ascending.
    pub fn applicable_moves(&self) -> Vec<usize> {
        let index = self.index_map();
        (0..self.len())
            .filter(|&i| self.status_with(i, &index) == MoveStatus::Applicable)
            .collect()
    }

    pub fn classify(&self) -> Classification {
        if self.is_final() {
            Classification::Final
        } else if self.applicable_moves().is_empty() {
            Classification::PermanentlyBlocked
        } else {
            Classification::Active
        }
    }

    /// Signed turn at monomer `i` in units of π/3, positive to the left.
    pub fn turn_angle(&self, i: usize) -> Result<i32, MachineError> {
        let n = self.len();
        if i == 0 || i + 1 >= n {
            return Err(MachineError::IndexOutOfRange { index: i, n });
        }
        let incoming = self.direction(i - 1).expect("interior monomer");
        let outgoing = self.direction(i).expect("interior monomer");
        Ok(incoming.turn_to(outgoing))
    }

    /// Number of nonzero-state monomers whose rule is blocked.
    pub fn count_blocked(&self) -> usize {
        self.statuses()
            .iter()
            .filter(|s| matches!(s, MoveStatus::Blocked { .. }))
            .count()
    }
}

pub fn move_status(c: &Configuration, i: usize) -> Result<MoveStatus, MachineError> {
    c.move_status(i)
}

pub fn apply_move(c: &Configuration, i: usize) -> Result<Configuration, MachineError> {
    c.apply_move(i)
}

pub fn applicable_moves(c: &Configuration) -> Vec<usize> {
    c.applicable_moves()
}

pub fn classify(c: &Configuration) -> Classification {
    c.classify()
}

pub fn turn_angle(c: &Configuration, i: usize) -> Result<i32, MachineError> {
    c.turn_angle(i)
}

pub fn count_blocked(c: &Configuration) -> usize {
    c.count_blocked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[(i32, i32)]) -> Vec<GridPoint> {
        v.iter().map(|&(x, y)| GridPoint::new(x, y)).collect()
    }

    fn line(s: i32, n: usize) -> Arc<TurningMachine> {
        Arc::new(TurningMachine::line_rotation(s, n).unwrap())
    }

    /// Pairwise scan of the blocking rule straight from its definition.
    fn naive_blocked(c: &Configuration, i: usize) -> bool {
        if c.states()[i] == 0 || i + 1 == c.len() {
            return false;
        }
        let d = c.direction(i).unwrap();
        let v = d.rotate(if c.states()[i] > 0 { 2 } else { -2 }).step();
        let p = c.positions();
        (0..=i).any(|k| (i + 1..c.len()).any(|j| p[j] + v == p[k]))
    }

    #[test]
    fn line_machine_examples() {
        let tm = line_machine(&[1, 1, 0]).unwrap();
        assert_eq!(tm.initial_path(), pts(&[(0, 0), (1, 0), (2, 0)]));
        let l3 = TurningMachine::line_rotation(3, 5).unwrap();
        assert_eq!(l3.initial_states(), &[3, 3, 3, 3, 0]);
        assert_eq!(line_machine(&[]), Err(MachineError::Empty));
    }

    #[test]
    fn machine_validation() {
        assert!(matches!(
            TurningMachine::new(vec![0, 0], pts(&[(1, 0), (2, 0)])),
            Err(MachineError::NotAnchored(_))
        ));
        assert!(matches!(
            TurningMachine::new(vec![0, 0], pts(&[(0, 0), (2, 0)])),
            Err(MachineError::NotUnitStep { index: 0, .. })
        ));
        assert!(matches!(
            TurningMachine::new(vec![0, 0, 0], pts(&[(0, 0), (1, 0), (0, 0)])),
            Err(MachineError::NotSimple { index: 2, .. })
        ));
        assert!(matches!(
            TurningMachine::new(vec![0], pts(&[(0, 0), (1, 0)])),
            Err(MachineError::LengthMismatch { .. })
        ));
        assert!(matches!(
            line_machine(&[300, 0]),
            Err(MachineError::StateOutOfRange { index: 0, state: 300 })
        ));
    }

    #[test]
    fn state_set_spans_zero() {
        let tm = line_machine(&[2, -1, 3, 0]).unwrap();
        assert_eq!(tm.state_set(), -1..=3);
        let tm = line_machine(&[2, 2, 0]).unwrap();
        assert_eq!(tm.state_set(), 0..=2);
    }

    #[test]
    fn reconstruct_examples() {
        let tm = line(1, 3);
        let c = reconstruct_positions(&tm, &[0, 1, 0]).unwrap();
        assert_eq!(c.positions(), pts(&[(0, 0), (0, 1), (1, 1)]));
        let init = reconstruct_positions(&tm, tm.initial_states()).unwrap();
        assert_eq!(init.positions(), tm.initial_path());

        let l3 = line(3, 9);
        assert!(reconstruct_positions(&l3, &[1, 3, 1, 1, 3, 1, 1, 3, 0]).is_ok());
    }

    #[test]
    fn reconstruct_rejects_bad_vectors() {
        let l3 = line(3, 4);
        // directions -x then +x fold back onto the origin
        assert!(matches!(
            reconstruct_positions(&l3, &[0, 3, 0, 0]),
            Err(MachineError::SelfIntersecting { index: 2 })
        ));
        assert!(matches!(
            reconstruct_positions(&l3, &[4, 3, 3, 0]),
            Err(MachineError::StateNotTowardZero { index: 0, .. })
        ));
        assert!(matches!(
            reconstruct_positions(&l3, &[-1, 3, 3, 0]),
            Err(MachineError::StateNotTowardZero { .. })
        ));
        assert!(matches!(
            reconstruct_positions(&l3, &[3, 3]),
            Err(MachineError::WrongLength { .. })
        ));
    }

    #[test]
    fn apply_move_examples() {
        let tm = line(1, 3);
        let c0 = tm.initial_configuration();
        let c1 = c0.apply_move(0).unwrap();
        assert_eq!(c1.states(), &[0, 1, 0]);
        assert_eq!(c1.positions(), pts(&[(0, 0), (0, 1), (1, 1)]));
        assert_eq!(
            c0.apply_move(2),
            Err(MachineError::NotApplicable {
                index: 2,
                reason: NotApplicableReason::ZeroState
            })
        );
        assert!(matches!(c0.apply_move(3), Err(MachineError::IndexOutOfRange { .. })));

        // a lone half turn of m_{n-2} drops m_{n-1} onto m_{n-3}
        let n = 6;
        let mut c = line(3, n).initial_configuration();
        for _ in 0..2 {
            c = c.apply_move(n - 2).unwrap();
        }
        assert_eq!(c.direction(n - 2), Some(Direction::PLUS_W));
        assert_eq!(
            c.move_status(n - 2).unwrap(),
            MoveStatus::Blocked {
                head: n - 1,
                tail: n - 3
            }
        );

        // with m_{n-3} turned once the three turns go through
        let mut c = line(3, n).initial_configuration().apply_move(n - 3).unwrap();
        for _ in 0..3 {
            c = c.apply_move(n - 2).unwrap();
        }
        assert_eq!(c.states()[n - 2], 0);
        assert_eq!(c.direction(n - 2), Some(Direction::MINUS_X));
    }

    #[test]
    fn negative_states_turn_clockwise() {
        let tm = Arc::new(line_machine(&[-1, 0]).unwrap());
        let c = tm.initial_configuration().apply_move(0).unwrap();
        assert_eq!(c.states(), &[0, 0]);
        assert_eq!(c.direction(0), Some(Direction::MINUS_W));
    }

    #[test]
    fn terminal_monomer_with_state_only_counts_down() {
        let tm = Arc::new(line_machine(&[0, 2]).unwrap());
        let c = tm.initial_configuration();
        assert_eq!(c.applicable_moves(), vec![1]);
        let c = c.apply_move(1).unwrap();
        assert_eq!(c.states(), &[0, 1]);
        assert_eq!(c.positions(), tm.initial_path());
    }

    #[test]
    fn applicable_moves_examples() {
        assert_eq!(line(1, 4).initial_configuration().applicable_moves(), vec![0, 1, 2]);
        let tm = line(2, 4);
        let zero = reconstruct_positions(&tm, &[0, 0, 0, 0]).unwrap();
        assert!(zero.applicable_moves().is_empty());
        assert_eq!(zero.classify(), Classification::Final);
    }

    #[test]
    fn blocked_configuration_of_half_turn_line() {
        let tm = line(3, 9);
        let c = reconstruct_positions(&tm, &[1, 3, 1, 1, 3, 1, 1, 3, 0]).unwrap();
        assert!(matches!(c.move_status(0).unwrap(), MoveStatus::Blocked { .. }));
        assert_eq!(c.applicable_moves(), vec![1, 4, 7]);
        assert_eq!(c.classify(), Classification::Active);
    }

    #[test]
    fn full_turn_witness_is_permanently_blocked() {
        let tm = line(6, 7);
        let c = reconstruct_positions(&tm, &[6, 4, 3, 2, 1, 0, 0]).unwrap();
        assert_eq!(c.classify(), Classification::PermanentlyBlocked);
    }

    #[test]
    fn classify_initial_is_active() {
        assert_eq!(line(3, 6).initial_configuration().classify(), Classification::Active);
        let single = line(0, 1);
        assert_eq!(single.initial_configuration().classify(), Classification::Final);
    }

    #[test]
    fn blocked_witness_is_lexicographically_smallest() {
        let tm = line(3, 9);
        let c = reconstruct_positions(&tm, &[1, 3, 1, 1, 3, 1, 1, 3, 0]).unwrap();
        for i in 0..c.len() {
            if let MoveStatus::Blocked { head, tail } = c.move_status(i).unwrap() {
                assert!(tail <= i && i < head);
                let v = c.positions()[tail] - c.positions()[head];
                for k in 0..tail {
                    for j in i + 1..c.len() {
                        assert_ne!(c.positions()[j] + v, c.positions()[k]);
                    }
                }
            }
        }
    }

    #[test]
    fn turn_angle_examples() {
        let tm = line(1, 4);
        let straight = tm.initial_configuration();
        assert_eq!(straight.turn_angle(1).unwrap(), 0);
        assert_eq!(straight.turn_angle(2).unwrap(), 0);
        assert!(straight.turn_angle(0).is_err());
        assert!(straight.turn_angle(3).is_err());

        let tm = line(1, 3);
        let c = tm.initial_configuration().apply_move(0).unwrap();
        // +y to +x is one sixth clockwise
        assert_eq!(c.turn_angle(1).unwrap(), -1);
    }

    #[test]
    fn count_blocked_examples() {
        let tm = line(1, 5);
        assert_eq!(tm.initial_configuration().count_blocked(), 0);
        let fin = reconstruct_positions(&tm, &[0, 0, 0, 0, 0]).unwrap();
        assert_eq!(fin.count_blocked(), 0);
    }

    fn random_walk(s: i32, n: usize, picks: &[usize]) -> Vec<Configuration> {
        let tm = line(s, n);
        let mut c = tm.initial_configuration();
        let mut out = vec![c.clone()];
        for &p in picks {
            let moves = c.applicable_moves();
            if moves.is_empty() {
                break;
            }
            c = c.apply_move(moves[p % moves.len()]).unwrap();
            out.push(c.clone());
        }
        out
    }

    proptest! {
        #[test]
        fn blocking_matches_pairwise_scan(s in 1i32..=6, n in 2usize..10,
                                          picks in proptest::collection::vec(0usize..64, 0..40)) {
            for c in random_walk(s, n, &picks) {
                for i in 0..c.len() {
                    let fast = matches!(c.move_status(i).unwrap(), MoveStatus::Blocked { .. });
                    prop_assert_eq!(fast, naive_blocked(&c, i));
                }
            }
        }

        #[test]
        fn moves_keep_chain_simple_and_reconstructible(s in 1i32..=6, n in 2usize..10,
                                                       picks in proptest::collection::vec(0usize..64, 0..40)) {
            let trail = random_walk(s, n, &picks);
            for w in trail.windows(2) {
                prop_assert_eq!(w[1].remaining_moves() + 1, w[0].remaining_moves());
            }
            for c in &trail {
                let set: FxHashSet<_> = c.positions().iter().collect();
                prop_assert_eq!(set.len(), c.len());
                let rebuilt = reconstruct_positions(c.machine(), c.states()).unwrap();
                prop_assert_eq!(&rebuilt, c);
            }
        }

        #[test]
        fn one_sixth_lines_never_block(n in 2usize..16, picks in proptest::collection::vec(0usize..64, 0..20)) {
            for c in random_walk(1, n, &picks) {
                prop_assert_eq!(c.count_blocked(), 0);
            }
        }
    }
}
