//! Triangular-grid geometry.
//!
//! Points are integer pairs `(x, y)`. The grid has three axes: `x`, `y`
//! and a derived `w` axis running through `(-1, 1)`, which gives every
//! point six neighbours. Directions are indexed anticlockwise starting
//! from `+x`:
//!
//! | index | name | step      |
//! |-------|------|-----------|
//! | 0     | +x   | `( 1,  0)`|
//! | 1     | +y   | `( 0,  1)`|
//! | 2     | +w   | `(-1,  1)`|
//! | 3     | -x   | `(-1,  0)`|
//! | 4     | -y   | `( 0, -1)`|
//! | 5     | -w   | `( 1, -1)`|
//!
//! A rotation by one index is a rotation by π/3.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

const STEPS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// One of the six unit directions of the triangular grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(u8);

impl Direction {
    pub const PLUS_X: Direction = Direction(0);
    pub const PLUS_Y: Direction = Direction(1);
    pub const PLUS_W: Direction = Direction(2);
    pub const MINUS_X: Direction = Direction(3);
    pub const MINUS_Y: Direction = Direction(4);
    pub const MINUS_W: Direction = Direction(5);

    pub const ALL: [Direction; 6] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
    ];

    /// Direction with index `k mod 6`.
    pub fn from_index(k: i64) -> Direction {
        Direction(k.rem_euclid(6) as u8)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Rotates anticlockwise by `k` sixths of a turn; negative `k` rotates clockwise.
    pub fn rotate(self, k: i64) -> Direction {
        Direction::from_index(self.0 as i64 + k)
    }

    pub fn displacement(self) -> (i32, i32) {
        STEPS[self.0 as usize]
    }

    pub fn step(self) -> GridPoint {
        let (x, y) = self.displacement();
        GridPoint { x, y }
    }

    pub fn opposite(self) -> Direction {
        self.rotate(3)
    }

    /// Inverse of [`Direction::displacement`]; `None` unless `(dx, dy)` is a unit step.
    pub fn from_displacement(dx: i32, dy: i32) -> Option<Direction> {
        STEPS.iter().position(|&s| s == (dx, dy)).map(|k| Direction(k as u8))
    }

    /// Signed anticlockwise turn from `self` to `other` in sixths, in `-2..=3`.
    ///
    /// A half turn is reported as `3`.
    pub fn turn_to(self, other: Direction) -> i32 {
        let d = (other.0 as i32 - self.0 as i32).rem_euclid(6);
        if d > 3 {
            d - 6
        } else {
            d
        }
    }

    pub fn name(self) -> &'static str {
        ["+x", "+y", "+w", "-x", "-y", "-w"][self.0 as usize]
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Free-function form of [`Direction::rotate`].
pub fn rotate_direction(d: Direction, k: i64) -> Direction {
    d.rotate(k)
}

/// Free-function form of [`Direction::displacement`].
pub fn displacement(d: Direction) -> (i32, i32) {
    d.displacement()
}

/// Integer lattice position. Orders by `(y, x)`, the canonical row-major
/// order used for shape serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct GridPoint {
    pub x: i32,
    pub y: i32,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> GridPoint {
        GridPoint { x, y }
    }

    pub fn offset(self, d: Direction) -> GridPoint {
        self + d.step()
    }

    pub fn neighbors(self) -> [GridPoint; 6] {
        Direction::ALL.map(|d| self.offset(d))
    }

    /// Direction of the unit step `self -> other`, if they are adjacent.
    pub fn direction_to(self, other: GridPoint) -> Option<Direction> {
        Direction::from_displacement(other.x - self.x, other.y - self.y)
    }

    pub fn is_adjacent(self, other: GridPoint) -> bool {
        self.direction_to(other).is_some()
    }

    /// Euclidean coordinates of the lattice point, `(x + y/2, y·√3/2)`.
    pub fn embed(self) -> (f64, f64) {
        let x = self.x as f64 + self.y as f64 / 2.0;
        let y = self.y as f64 * 3f64.sqrt() / 2.0;
        (x, y)
    }
}

impl Add for GridPoint {
    type Output = GridPoint;
    fn add(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for GridPoint {
    type Output = GridPoint;
    fn sub(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for GridPoint {
    type Output = GridPoint;
    fn neg(self) -> GridPoint {
        GridPoint::new(-self.x, -self.y)
    }
}

impl Ord for GridPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for GridPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<[i32; 2]> for GridPoint {
    fn from([x, y]: [i32; 2]) -> Self {
        GridPoint { x, y }
    }
}

impl From<GridPoint> for [i32; 2] {
    fn from(p: GridPoint) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rotation_examples() {
        assert_eq!(rotate_direction(Direction::PLUS_X, 2), Direction::PLUS_W);
        assert_eq!(rotate_direction(Direction::PLUS_Y, -2), Direction::MINUS_W);
        assert_eq!(rotate_direction(Direction::MINUS_X, 6), Direction::MINUS_X);
    }

    #[test]
    fn displacement_examples() {
        assert_eq!(displacement(Direction::PLUS_W), (-1, 1));
        assert_eq!(displacement(Direction::PLUS_X), (1, 0));
        assert_eq!(displacement(Direction::MINUS_Y), (0, -1));
    }

    #[test]
    fn six_steps_are_distinct_and_cancel() {
        let steps: Vec<_> = Direction::ALL.iter().map(|d| d.displacement()).collect();
        for i in 0..6 {
            for j in i + 1..6 {
                assert_ne!(steps[i], steps[j]);
            }
        }
        let sum = steps.iter().fold((0, 0), |a, s| (a.0 + s.0, a.1 + s.1));
        assert_eq!(sum, (0, 0));
    }

    #[test]
    fn turn_to_is_signed() {
        assert_eq!(Direction::PLUS_Y.turn_to(Direction::PLUS_X), -1);
        assert_eq!(Direction::PLUS_X.turn_to(Direction::PLUS_W), 2);
        assert_eq!(Direction::PLUS_X.turn_to(Direction::MINUS_X), 3);
        assert_eq!(Direction::PLUS_X.turn_to(Direction::MINUS_Y), -2);
    }

    #[test]
    fn embedding_is_unit_length() {
        for d in Direction::ALL {
            let (x, y) = d.step().embed();
            assert!((x * x + y * y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn points_sort_row_major() {
        let mut v = vec![GridPoint::new(1, 0), GridPoint::new(0, 1), GridPoint::new(0, 0)];
        v.sort();
        assert_eq!(
            v,
            vec![GridPoint::new(0, 0), GridPoint::new(1, 0), GridPoint::new(0, 1)]
        );
    }

    proptest! {
        #[test]
        fn opposite_steps_cancel(k in 0i64..6) {
            let d = Direction::from_index(k);
            let p = d.step() + rotate_direction(d, 3).step();
            prop_assert_eq!(p, GridPoint::ORIGIN);
        }

        #[test]
        fn rotation_is_a_group_action(k in 0i64..6, a in -20i64..20, b in -20i64..20) {
            let d = Direction::from_index(k);
            prop_assert_eq!(d.rotate(a).rotate(b), d.rotate(a + b));
        }

        #[test]
        fn direction_to_inverts_offset(x in -50i32..50, y in -50i32..50, k in 0i64..6) {
            let p = GridPoint::new(x, y);
            let d = Direction::from_index(k);
            prop_assert_eq!(p.direction_to(p.offset(d)), Some(d));
        }
    }
}
