//! Compilers from target paths to initial state sequences.
//!
//! A machine that starts on the east line and reaches the all-zero state
//! leaves monomer `i` pointing along `+x` rotated by `s₀(m_i)` sixths, so the
//! initial states of a target path are its turning numbers: the direction of
//! the first segment plus the accumulated signed turns.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Direction;
use crate::machine::{MachineError, TurningMachine};
use crate::shapes::{scaled_walk, zigzag_sign, PartitionResult, Path, Side, SpiralDirection, ZigZag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ZigZag,
    General,
    SpiralInToOut,
    SpiralOutToIn,
    ScaledFold,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateProgram {
    pub states: Vec<i32>,
    pub provenance: Provenance,
}

impl StateProgram {
    /// The machine that runs this program from the east line.
    pub fn machine(&self) -> Result<TurningMachine, MachineError> {
        TurningMachine::line(self.states.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("step {index} along {direction} is not allowed in a zig-zag path")]
    NotZigZag { index: usize, direction: Direction },
    #[error("anchor {anchor} does not match the first segment direction {first}")]
    AnchorMismatch { anchor: i32, first: Direction },
    #[error("spiral start value {t0} must be {residue} mod 6")]
    Congruence { t0: i32, residue: i32 },
    #[error("spiral needs at least one turn")]
    NoTurns,
    #[error("separator row {row} meets the next row by neither +y nor +w")]
    BrokenBoundary { row: i32 },
}

/// Zig-zag states: `+x, +y, +w, -x` map to `0, 1, 2, 3`, and for negative
/// zig-zag paths `+x, -w, -y, -x` map to `0, -1, -2, -3`. The last monomer
/// gets 0.
pub fn zigzag_states(p: &Path) -> Result<StateProgram, CompileError> {
    let dirs = p.directions();
    let sign = zigzag_sign(p).ok_or_else(|| {
        // report the first step that fits neither sign
        let bad_pos = dirs
            .iter()
            .position(|d| ![0, 1, 2, 3].contains(&d.index()))
            .unwrap_or(0);
        let bad_neg = dirs
            .iter()
            .position(|d| ![0, 3, 4, 5].contains(&d.index()))
            .unwrap_or(0);
        let index = bad_pos.max(bad_neg);
        CompileError::NotZigZag {
            index,
            direction: dirs[index],
        }
    })?;
    let mut states: Vec<i32> = dirs
        .iter()
        .map(|d| match sign {
            ZigZag::Positive => d.index() as i32,
            ZigZag::Negative => match d.index() {
                0 => 0,
                3 => -3,
                k => k as i32 - 6,
            },
        })
        .collect();
    states.push(0);
    Ok(StateProgram {
        states,
        provenance: Provenance::ZigZag,
    })
}

/// Turning numbers of `p` starting from `anchor`; the last point repeats the
/// value of the segment leading into it.
pub fn turning_numbers(p: &Path, anchor: i32) -> Result<Vec<i32>, CompileError> {
    let dirs = p.directions();
    let Some(&first) = dirs.first() else {
        return Ok(vec![anchor]);
    };
    if (anchor - first.index() as i32).rem_euclid(6) != 0 {
        return Err(CompileError::AnchorMismatch { anchor, first });
    }
    let mut t = vec![anchor];
    for w in dirs.windows(2) {
        let last = *t.last().expect("non-empty");
        t.push(last + w[0].turn_to(w[1]));
    }
    t.push(*t.last().expect("non-empty"));
    Ok(t)
}

/// Turning numbers of `p` with the last monomer set to 0.
pub fn states_from_path(p: &Path, anchor: i32) -> Result<StateProgram, CompileError> {
    let mut states = turning_numbers(p, anchor)?;
    *states.last_mut().expect("non-empty") = 0;
    Ok(StateProgram {
        states,
        provenance: Provenance::General,
    })
}

/// Run-length turning-number sequences of the `k`-turn spiral.
///
/// Inside to outside: `[t₀]¹, [t₁]², …, [t₄ₖ]^{4k+1}, t₄ₖ` with `t₀ ≡ 0`
/// and increments 2 at even and 1 at odd positions. Outside to inside:
/// `t₀, [t₀]^{4k+1}, [t₁]^{4k}, …, [t₄ₖ]¹` with `t₀ ≡ 3` and decrements 1 at
/// even and 2 at odd positions.
pub fn spiral_states(k: usize, t0: i32, dir: SpiralDirection) -> Result<StateProgram, CompileError> {
    if k == 0 {
        return Err(CompileError::NoTurns);
    }
    let m = 4 * k;
    let mut t = vec![t0];
    let mut states = Vec::new();
    match dir {
        SpiralDirection::InToOut => {
            if t0.rem_euclid(6) != 0 {
                return Err(CompileError::Congruence { t0, residue: 0 });
            }
            for i in 1..=m {
                t.push(t[i - 1] + if i % 2 == 0 { 2 } else { 1 });
            }
            for (i, &ti) in t.iter().enumerate() {
                states.extend(std::iter::repeat_n(ti, i + 1));
            }
            states.push(t[m]);
        }
        SpiralDirection::OutToIn => {
            if t0.rem_euclid(6) != 3 {
                return Err(CompileError::Congruence { t0, residue: 3 });
            }
            for i in 1..=m {
                t.push(t[i - 1] - if i % 2 == 0 { 1 } else { 2 });
            }
            for (i, &ti) in t.iter().enumerate() {
                states.extend(std::iter::repeat_n(ti, m + 1 - i));
            }
            states.push(t[m]);
        }
    }
    Ok(StateProgram {
        states,
        provenance: match dir {
            SpiralDirection::InToOut => Provenance::SpiralInToOut,
            SpiralDirection::OutToIn => Provenance::SpiralOutToIn,
        },
    })
}

/// How to read the state of interior points on the upper row of each row
/// pair in the right part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BulletReading {
    /// `-3`, as printed.
    AsPrinted,
    /// `+3`, the turning number of a `-x` step in a positive zig-zag path.
    Corrected,
}

/// States for the scale-2 traversal of a partitioned shape.
///
/// Left part, lower row of each pair: 0, except the boundary point, which
/// gets -2 or -1 when the boundary reaches it from the row above by a `+y`
/// or `+w` step (0 on the bottom row). Upper row: -2 for the leftmost
/// point, -3 otherwise. Right part, lower row: 1 for the rightmost point, 0
/// otherwise. Upper row: 1 or 2 on the boundary by the direction of the
/// boundary's next step, 0 for the last monomer, ±3 otherwise per `reading`.
pub fn scaled_fold_states(p: &PartitionResult, reading: BulletReading) -> Result<StateProgram, CompileError> {
    let walk = scaled_walk(p);
    let n = walk.len();
    let rows = p.scaled.row_segments().expect("scaled shape is y-monotone");
    let bottom = rows[0].0;
    let top = rows[rows.len() - 1].0;
    let span = |y: i32| {
        let (_, l, r) = rows[(y - bottom) as usize];
        (l, r)
    };
    let mut states = Vec::with_capacity(n);
    for (j, &(q, side)) in walk.iter().enumerate() {
        let (l, r) = span(q.y);
        let upper = q.y.rem_euclid(2) == 1;
        let s = match (side, upper) {
            (Side::Left, false) => {
                if q.x == p.cut_x(q.y) && q.y > bottom {
                    match p.cut_x(q.y) - p.cut_x(q.y - 1) {
                        0 => -2,
                        -1 => -1,
                        _ => return Err(CompileError::BrokenBoundary { row: q.y - 1 }),
                    }
                } else {
                    0
                }
            }
            (Side::Left, true) => {
                if q.x == l {
                    -2
                } else {
                    -3
                }
            }
            (Side::Right, false) => i32::from(q.x == r),
            (Side::Right, true) => {
                if j == n - 1 {
                    0
                } else if q.x == p.cut_x(q.y) + 1 && q.y < top {
                    match p.cut_x(q.y + 1) - p.cut_x(q.y) {
                        0 => 1,
                        -1 => 2,
                        _ => return Err(CompileError::BrokenBoundary { row: q.y }),
                    }
                } else {
                    match reading {
                        BulletReading::AsPrinted => -3,
                        BulletReading::Corrected => 3,
                    }
                }
            }
        };
        states.push(s);
    }
    Ok(StateProgram {
        states,
        provenance: Provenance::ScaledFold,
    })
}

/// Index of the last traversal point in the left part.
pub fn scaled_split_index(p: &PartitionResult) -> usize {
    scaled_walk(p).iter().filter(|(_, s)| *s == Side::Left).count() - 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// First `i` with `|s(m_i) - s(m_{i+1})| > 2` among non-terminal monomers.
    pub adjacent_violation: Option<usize>,
    /// First monomer whose final direction misses the target segment.
    pub direction_violation: Option<usize>,
    /// Whether the terminal state is 0 or repeats the last turning number.
    pub terminal_ok: bool,
    pub length_ok: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.adjacent_violation.is_none() && self.direction_violation.is_none() && self.terminal_ok && self.length_ok
    }
}

/// Static necessary conditions for `sp` to fold `target` from the east line.
pub fn validate_states(sp: &StateProgram, target: &Path) -> ValidationReport {
    let s = &sp.states;
    let n = s.len();
    let dirs = target.directions();
    let length_ok = n == target.len();
    let adjacent_violation = (0..n.saturating_sub(2)).find(|&i| (s[i] - s[i + 1]).abs() > 2);
    let direction_violation = dirs
        .iter()
        .zip(s)
        .position(|(d, &si)| Direction::PLUS_X.rotate(si as i64) != *d);
    let terminal_ok = match (s.last(), n) {
        (None, _) => false,
        (Some(&0), _) => true,
        (Some(&last), n) if n >= 2 => last == s[n - 2],
        _ => false,
    };
    ValidationReport {
        adjacent_violation,
        direction_violation,
        terminal_ok,
        length_ok,
    }
}
