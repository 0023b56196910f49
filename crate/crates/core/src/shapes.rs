//! Shapes, traversals and the scale-2 partition.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Direction, GridPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
    #[error("shape is empty")]
    Empty,
    #[error("row y={0} is not a single segment")]
    NotYMonotone(i32),
    #[error("row y={0} is missing or does not touch the row below")]
    RowGap(i32),
    #[error("shape is not connected using x and y edges only")]
    NotXyConnected,
    #[error("path revisits {point} at index {index}")]
    NotSimple { index: usize, point: GridPoint },
    #[error("path step {index} from {from} to {to} is not a unit step")]
    NotUnitStep {
        index: usize,
        from: GridPoint,
        to: GridPoint,
    },
    #[error("chain is not a yw-separator: {0}")]
    NotSeparator(String),
    #[error("separator step {step} from {from} along +w: neither {left} nor {right} is in the shape")]
    NoWCase {
        step: usize,
        from: GridPoint,
        left: GridPoint,
        right: GridPoint,
    },
    #[error("row y={0} of the scaled shape is not split into two non-empty parts")]
    EmptySide(i32),
}

/// A finite set of grid points. Serializes sorted by `(y, x)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Shape {
    pub points: BTreeSet<GridPoint>,
}

impl Shape {
    pub fn new(points: impl IntoIterator<Item = GridPoint>) -> Shape {
        Shape {
            points: points.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        self.points.contains(&p)
    }

    pub fn translate(&self, v: GridPoint) -> Shape {
        Shape::new(self.points.iter().map(|&p| p + v))
    }

    pub fn iter(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.points.iter().copied()
    }

    /// Points of each row, in ascending `y`.
    pub fn rows(&self) -> BTreeMap<i32, Vec<i32>> {
        let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
        for p in &self.points {
            rows.entry(p.y).or_default().push(p.x);
        }
        rows
    }

    /// Row segments `(y, left, right)` bottom to top, if every row is one segment.
    pub fn row_segments(&self) -> Result<Vec<(i32, i32, i32)>, ShapeError> {
        self.rows()
            .into_iter()
            .map(|(y, xs)| {
                let (l, r) = (xs[0], xs[xs.len() - 1]);
                if (r - l + 1) as usize == xs.len() {
                    Ok((y, l, r))
                } else {
                    Err(ShapeError::NotYMonotone(y))
                }
            })
            .collect()
    }
}

/// An ordered simple path of unit steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub points: Vec<GridPoint>,
}

impl Path {
    pub fn new(points: Vec<GridPoint>) -> Result<Path, ShapeError> {
        if points.is_empty() {
            return Err(ShapeError::Empty);
        }
        let mut seen = FxHashSet::default();
        for (index, &point) in points.iter().enumerate() {
            if !seen.insert(point) {
                return Err(ShapeError::NotSimple { index, point });
            }
        }
        for (index, w) in points.windows(2).enumerate() {
            if !w[0].is_adjacent(w[1]) {
                return Err(ShapeError::NotUnitStep {
                    index,
                    from: w[0],
                    to: w[1],
                });
            }
        }
        Ok(Path { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.points
            .windows(2)
            .map(|w| w[0].direction_to(w[1]).expect("validated path"))
            .collect()
    }

    /// The same path moved so that it starts at the origin.
    pub fn anchored(&self) -> Path {
        let o = self.points[0];
        Path {
            points: self.points.iter().map(|&p| p - o).collect(),
        }
    }

    pub fn to_shape(&self) -> Shape {
        Shape::new(self.points.iter().copied())
    }
}

/// Sign of a zig-zag path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZigZag {
    /// Steps in `{±x, +y, +w}`.
    Positive,
    /// Steps in `{±x, -y, -w}`.
    Negative,
}

/// Classifies a path as a positive or negative zig-zag path. A path of
/// horizontal steps only counts as positive.
pub fn zigzag_sign(p: &Path) -> Option<ZigZag> {
    let dirs = p.directions();
    let horizontal = |d: &Direction| *d == Direction::PLUS_X || *d == Direction::MINUS_X;
    if dirs
        .iter()
        .all(|d| horizontal(d) || *d == Direction::PLUS_Y || *d == Direction::PLUS_W)
    {
        Some(ZigZag::Positive)
    } else if dirs
        .iter()
        .all(|d| horizontal(d) || *d == Direction::MINUS_Y || *d == Direction::MINUS_W)
    {
        Some(ZigZag::Negative)
    } else {
        None
    }
}

pub fn square(n: usize) -> Result<Shape, ShapeError> {
    if n == 0 {
        return Err(ShapeError::TooSmall {
            what: "square side",
            min: 1,
            got: 0,
        });
    }
    let n = n as i32;
    Ok(Shape::new(
        (0..n).flat_map(|y| (0..n).map(move |x| GridPoint::new(x, y))),
    ))
}

/// Plus sign with width-1 arms of length `arm` around the origin.
pub fn cross(arm: usize) -> Result<Shape, ShapeError> {
    if arm < 2 {
        return Err(ShapeError::TooSmall {
            what: "cross arm length",
            min: 2,
            got: arm,
        });
    }
    let a = arm as i32;
    Ok(Shape::new(
        (-a..=a)
            .map(|x| GridPoint::new(x, 0))
            .chain((-a..=a).map(|y| GridPoint::new(0, y))),
    ))
}

/// The anticlockwise `k`-turn spiral with gap 1, centred at the origin.
pub fn spiral(k: usize) -> Result<Shape, ShapeError> {
    if k == 0 {
        return Err(ShapeError::TooSmall {
            what: "spiral turns",
            min: 1,
            got: 0,
        });
    }
    let mut points = BTreeSet::new();
    for kk in 1..=k as i32 {
        let mut r = BTreeSet::new();
        for x in -2 * kk..=2 * kk - 1 {
            r.insert(GridPoint::new(x, 2 * kk));
            r.insert(GridPoint::new(x, -2 * kk));
        }
        for y in -2 * kk..=2 * kk {
            r.insert(GridPoint::new(-2 * kk, y));
            r.insert(GridPoint::new(2 * kk - 1, y));
        }
        r.insert(GridPoint::new(2 * kk - 2, -2 * kk + 2));
        r.insert(GridPoint::new(2 * kk, -2 * kk));
        r.insert(GridPoint::new(2 * kk + 1, -2 * kk));
        r.remove(&GridPoint::new(2 * kk - 1, -2 * kk + 1));
        points.extend(r);
    }
    Ok(Shape { points })
}

/// `8k² + 6k + 2`.
pub fn spiral_size(k: usize) -> usize {
    8 * k * k + 6 * k + 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpiralDirection {
    InToOut,
    OutToIn,
}

/// The traversal of `spiral(k)` between its two degree-1 points.
pub fn spiral_traversal(k: usize, dir: SpiralDirection) -> Result<Path, ShapeError> {
    let s = spiral(k)?;
    let inside = GridPoint::ORIGIN;
    let outside = GridPoint::new(2 * k as i32 + 1, -2 * k as i32);
    let (start, end) = match dir {
        SpiralDirection::InToOut => (inside, outside),
        SpiralDirection::OutToIn => (outside, inside),
    };
    let points = find_hamiltonian_path(&s, start, Some(end)).expect("spirals have a traversal");
    Path::new(points)
}

pub fn scale(s: &Shape, k: usize) -> Result<Shape, ShapeError> {
    if k == 0 {
        return Err(ShapeError::TooSmall {
            what: "scale factor",
            min: 1,
            got: 0,
        });
    }
    let k = k as i32;
    Ok(Shape::new(s.iter().flat_map(|p| {
        (0..k).flat_map(move |b| (0..k).map(move |a| GridPoint::new(k * p.x + a, k * p.y + b)))
    })))
}

const XY_STEPS: [Direction; 4] = [
    Direction::PLUS_X,
    Direction::PLUS_Y,
    Direction::MINUS_X,
    Direction::MINUS_Y,
];

fn connected_with(s: &Shape, dirs: &[Direction]) -> bool {
    let Some(&start) = s.points.first() else {
        return true;
    };
    let mut seen = FxHashSet::default();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for &d in dirs {
            let q = p.offset(d);
            if s.contains(q) && seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen.len() == s.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeAnalysis {
    pub connected: bool,
    pub y_monotone: bool,
    pub xy_connected: bool,
    /// Points with a neighbour outside the shape, six-neighbourhood.
    pub perimeter_points: Vec<GridPoint>,
    pub perimeter_length: usize,
    /// Perimeter size when only the four x/y neighbours count.
    pub perimeter_length_xy: usize,
}

pub fn analyze(s: &Shape) -> ShapeAnalysis {
    let perimeter_points: Vec<GridPoint> = s
        .iter()
        .filter(|p| p.neighbors().iter().any(|q| !s.contains(*q)))
        .collect();
    let perimeter_length_xy = s
        .iter()
        .filter(|p| XY_STEPS.iter().any(|&d| !s.contains(p.offset(d))))
        .count();
    ShapeAnalysis {
        connected: connected_with(s, &Direction::ALL),
        y_monotone: s.row_segments().is_ok(),
        xy_connected: connected_with(s, &XY_STEPS),
        perimeter_length: perimeter_points.len(),
        perimeter_points,
        perimeter_length_xy,
    }
}

/// Row segments of a connected y-monotone shape, bottom to top.
fn monotone_rows(s: &Shape) -> Result<Vec<(i32, i32, i32)>, ShapeError> {
    if s.is_empty() {
        return Err(ShapeError::Empty);
    }
    let rows = s.row_segments()?;
    for w in rows.windows(2) {
        let (y0, l0, r0) = w[0];
        let (y1, l1, r1) = w[1];
        // (x, y+1) touches (x, y) and (x + 1, y)
        if y1 != y0 + 1 || l1 > r0 || r1 < l0 - 1 {
            return Err(ShapeError::RowGap(y1));
        }
    }
    Ok(rows)
}

/// Zig-zag traversal covering a connected y-monotone shape.
///
/// Rows are numbered from the bottom. Even rows run left to right and odd
/// rows right to left; each row is widened just enough to reach the turn
/// points of its neighbours, and consecutive rows are joined by a `+y` step.
pub fn monotone_traversal(s: &Shape) -> Result<Path, ShapeError> {
    let rows = monotone_rows(s)?;
    let mut points = Vec::new();
    for (i, &(y, l, r)) in rows.iter().enumerate() {
        let below = i.checked_sub(1).map(|j| rows[j]);
        let above = rows.get(i + 1).copied();
        if i % 2 == 0 {
            let a = below.map_or(l, |(_, lb, _)| l.min(lb));
            let b = above.map_or(r, |(_, _, ra)| r.max(ra));
            points.extend((a..=b).map(|x| GridPoint::new(x, y)));
        } else {
            let a = above.map_or(l, |(_, la, _)| l.min(la));
            let b = below.map_or(r, |(_, _, rb)| r.max(rb));
            points.extend((a..=b).rev().map(|x| GridPoint::new(x, y)));
        }
    }
    Path::new(points)
}

/// Chain of `+y` / `+w` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YwChain {
    pub points: Vec<GridPoint>,
}

/// True when consecutive points step by `+y` or `+w`.
pub fn is_yw_chain(points: &[GridPoint]) -> bool {
    !points.is_empty()
        && points.windows(2).all(|w| {
            matches!(
                w[0].direction_to(w[1]),
                Some(Direction::PLUS_Y) | Some(Direction::PLUS_W)
            )
        })
}

impl YwChain {
    pub fn new(points: Vec<GridPoint>) -> Result<YwChain, ShapeError> {
        if is_yw_chain(&points) {
            Ok(YwChain { points })
        } else {
            Err(ShapeError::NotSeparator("steps must be +y or +w".into()))
        }
    }

    /// Checks that the chain lies in `s` and spans its bottom and top rows.
    pub fn check_separator(&self, s: &Shape) -> Result<(), ShapeError> {
        let rows = s.rows();
        let (Some((&ymin, _)), Some((&ymax, _))) = (rows.first_key_value(), rows.last_key_value()) else {
            return Err(ShapeError::Empty);
        };
        if let Some(p) = self.points.iter().find(|p| !s.contains(**p)) {
            return Err(ShapeError::NotSeparator(format!("{p} is outside the shape")));
        }
        let (first, last) = (self.points[0], self.points[self.points.len() - 1]);
        if first.y != ymin || last.y != ymax {
            return Err(ShapeError::NotSeparator(format!(
                "chain spans rows {}..{} instead of {ymin}..{ymax}",
                first.y, last.y
            )));
        }
        Ok(())
    }
}

/// A yw-separator of `s`, searched depth first from the leftmost bottom
/// point, trying `+w` before `+y` at every step.
pub fn yw_separator(s: &Shape) -> Option<YwChain> {
    let rows = s.rows();
    let (&ymin, bottom) = rows.first_key_value()?;
    let &ymax = rows.last_key_value()?.0;
    let mut dead = FxHashSet::default();
    for &x in bottom {
        let mut chain = vec![GridPoint::new(x, ymin)];
        if extend_chain(s, ymax, &mut chain, &mut dead) {
            return Some(YwChain { points: chain });
        }
    }
    None
}

fn extend_chain(s: &Shape, ymax: i32, chain: &mut Vec<GridPoint>, dead: &mut FxHashSet<GridPoint>) -> bool {
    let p = *chain.last().expect("non-empty chain");
    if p.y == ymax {
        return true;
    }
    for d in [Direction::PLUS_W, Direction::PLUS_Y] {
        let q = p.offset(d);
        if s.contains(q) && !dead.contains(&q) {
            chain.push(q);
            if extend_chain(s, ymax, chain, dead) {
                return true;
            }
            chain.pop();
        }
    }
    dead.insert(p);
    false
}

/// The scaled shape split along a yw-separator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub source: Shape,
    pub separator: YwChain,
    pub scaled: Shape,
    pub left: Shape,
    pub right: Shape,
    /// Rightmost point of `left` in each row, bottom to top.
    pub right_boundary_of_left: Vec<GridPoint>,
    /// Leftmost point of `right` in each row, bottom to top.
    pub left_boundary_of_right: Vec<GridPoint>,
    /// `(y, x)`: the cut on row `y` runs between columns `x` and `x + 1`.
    pub cut: Vec<(i32, i32)>,
}

impl PartitionResult {
    /// Cut column of row `y`, continued straight up and down past the shape.
    pub fn cut_x(&self, y: i32) -> i32 {
        let (y0, x0) = self.cut[0];
        let (y1, x1) = self.cut[self.cut.len() - 1];
        if y <= y0 {
            x0
        } else if y >= y1 {
            x1
        } else {
            self.cut[(y - y0) as usize].1
        }
    }

    pub fn is_right_of_cut(&self, p: GridPoint) -> bool {
        p.x > self.cut_x(p.y)
    }

    /// True when both boundaries step by `+y` or `+w` between every pair of
    /// rows that comes from different source rows.
    pub fn boundaries_link_row_pairs(&self) -> bool {
        let ok = |b: &[GridPoint]| {
            b.windows(2).enumerate().all(|(r, w)| {
                r % 2 == 0
                    || matches!(
                        w[0].direction_to(w[1]),
                        Some(Direction::PLUS_Y) | Some(Direction::PLUS_W)
                    )
            })
        };
        ok(&self.right_boundary_of_left) && ok(&self.left_boundary_of_right)
    }
}

/// Splits `scale(s, 2)` into a left and a right part along `sep`.
///
/// The cut follows the separator: a `+y` step keeps the cut inside the
/// separator's column; a `+w` step moves it left of the lower point when the
/// point left of it is in `s`, and otherwise keeps the lower point on the left
/// and moves only above it. Directly after the second case the second case is
/// kept whenever it applies. The cut runs through the middle of the first and
/// last separator points.
pub fn scaled_partition(s: &Shape, sep: &YwChain) -> Result<PartitionResult, ShapeError> {
    let rows = monotone_rows(s)?;
    if !analyze(s).xy_connected {
        return Err(ShapeError::NotXyConnected);
    }
    sep.check_separator(s)?;
    let c = &sep.points;
    let mut cut = vec![(2 * c[0].y, 2 * c[0].x)];
    for (step, w) in c.windows(2).enumerate() {
        let (p, q) = (w[0], w[1]);
        let (x, y) = (p.x, p.y);
        match p.direction_to(q) {
            Some(Direction::PLUS_Y) => {
                cut.push((2 * y + 1, 2 * x));
                cut.push((2 * y + 2, 2 * x));
            }
            Some(Direction::PLUS_W) => {
                let left = p - Direction::PLUS_X.step();
                let right = q + Direction::PLUS_X.step();
                // after the second case the lower row already sits one right
                // of the separator, so the first case would jump by two
                let after_second = cut[cut.len() - 1].1 == 2 * x + 1;
                let first = s.contains(left) && !(after_second && s.contains(right));
                if first {
                    cut.push((2 * y + 1, 2 * x - 1));
                    cut.push((2 * y + 2, 2 * x - 2));
                } else if s.contains(right) {
                    cut.push((2 * y + 1, 2 * x));
                    cut.push((2 * y + 2, 2 * x - 1));
                } else {
                    return Err(ShapeError::NoWCase {
                        step,
                        from: p,
                        left,
                        right,
                    });
                }
            }
            _ => unreachable!("validated yw-chain"),
        }
    }
    let top = c[c.len() - 1];
    cut.push((2 * top.y + 1, 2 * top.x));

    let scaled = scale(s, 2)?;
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    let mut right_boundary_of_left = Vec::new();
    let mut left_boundary_of_right = Vec::new();
    for &(y, l, r) in &rows {
        for (ry, (sl, sr)) in [(2 * y, (2 * l, 2 * r + 1)), (2 * y + 1, (2 * l, 2 * r + 1))] {
            let cx = cut[(ry - cut[0].0) as usize].1;
            if cx < sl || cx >= sr {
                return Err(ShapeError::EmptySide(ry));
            }
            left.extend((sl..=cx).map(|x| GridPoint::new(x, ry)));
            right.extend((cx + 1..=sr).map(|x| GridPoint::new(x, ry)));
            right_boundary_of_left.push(GridPoint::new(cx, ry));
            left_boundary_of_right.push(GridPoint::new(cx + 1, ry));
        }
    }
    Ok(PartitionResult {
        source: s.clone(),
        separator: sep.clone(),
        scaled,
        left: Shape { points: left },
        right: Shape { points: right },
        right_boundary_of_left,
        left_boundary_of_right,
        cut,
    })
}

/// Which part of the scaled shape a traversal point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Left,
    Right,
}

/// Traversal points with the part they belong to.
pub(crate) fn scaled_walk(p: &PartitionResult) -> Vec<(GridPoint, Side)> {
    let rows = p.scaled.row_segments().expect("scaled monotone shape");
    let span: BTreeMap<i32, (i32, i32)> = rows.iter().map(|&(y, l, r)| (y, (l, r))).collect();
    let ys: Vec<i32> = p.source.rows().keys().copied().collect();
    let mut out = Vec::new();
    for &y in ys.iter().rev() {
        let (top, bot) = (2 * y + 1, 2 * y);
        let (lt, _) = span[&top];
        let (lb, _) = span[&bot];
        out.extend((lt..=p.cut_x(top)).rev().map(|x| (GridPoint::new(x, top), Side::Left)));
        out.extend((lb..=p.cut_x(bot)).map(|x| (GridPoint::new(x, bot), Side::Left)));
    }
    for &y in &ys {
        let (top, bot) = (2 * y + 1, 2 * y);
        let (_, rt) = span[&top];
        let (_, rb) = span[&bot];
        out.extend((p.cut_x(bot) + 1..=rb).map(|x| (GridPoint::new(x, bot), Side::Right)));
        out.extend(
            (p.cut_x(top) + 1..=rt)
                .rev()
                .map(|x| (GridPoint::new(x, top), Side::Right)),
        );
    }
    out
}

/// Traversal of the scaled shape: down the left part in row pairs, across
/// the bottom row, and up the right part in row pairs.
pub fn scaled_traversal(p: &PartitionResult) -> Result<Path, ShapeError> {
    Path::new(scaled_walk(p).into_iter().map(|(q, _)| q).collect())
}

/// `|positions Δ s|`.
pub fn folding_error(s: &Shape, positions: &[GridPoint]) -> usize {
    let placed: BTreeSet<GridPoint> = positions.iter().copied().collect();
    placed.symmetric_difference(&s.points).count()
}

/// True when `path` visits every point of `s` exactly once along unit steps.
pub fn is_hamiltonian_path(s: &Shape, path: &[GridPoint]) -> bool {
    Path::new(path.to_vec()).is_ok() && path.len() == s.len() && path.iter().all(|p| s.contains(*p))
}

/// Depth-first search for a Hamiltonian path of `s` from `start`, optionally
/// ending at `end`. Neighbours with fewer free neighbours are tried first.
pub fn find_hamiltonian_path(s: &Shape, start: GridPoint, end: Option<GridPoint>) -> Option<Vec<GridPoint>> {
    if !s.contains(start) {
        return None;
    }
    let mut path = vec![start];
    let mut used = FxHashSet::default();
    used.insert(start);
    if ham_dfs(s, end, &mut path, &mut used) {
        Some(path)
    } else {
        None
    }
}

fn free_degree(s: &Shape, used: &FxHashSet<GridPoint>, p: GridPoint) -> usize {
    p.neighbors()
        .iter()
        .filter(|q| s.contains(**q) && !used.contains(*q))
        .count()
}

fn ham_dfs(s: &Shape, end: Option<GridPoint>, path: &mut Vec<GridPoint>, used: &mut FxHashSet<GridPoint>) -> bool {
    let p = *path.last().expect("non-empty path");
    if path.len() == s.len() {
        return end.is_none_or(|e| e == p);
    }
    if end == Some(p) {
        return false;
    }
    // every free point needs a way in and out, except one that ends the path
    let mut dead_ends = 0;
    for q in s.iter().filter(|q| !used.contains(q)) {
        let back = usize::from(q.is_adjacent(p));
        match free_degree(s, used, q) + back {
            0 => return false,
            1 => dead_ends += 1,
            _ => {}
        }
    }
    if dead_ends > 1 {
        return false;
    }
    let mut next: Vec<GridPoint> = p
        .neighbors()
        .into_iter()
        .filter(|q| s.contains(*q) && !used.contains(q))
        .collect();
    next.sort_by_key(|&q| (free_degree(s, used, q), q));
    for q in next {
        path.push(q);
        used.insert(q);
        if ham_dfs(s, end, path, used) {
            return true;
        }
        used.remove(&q);
        path.pop();
    }
    false
}

/// All directed Hamiltonian paths of a small shape, up to `limit` of them.
pub fn hamiltonian_paths(s: &Shape, limit: usize) -> Vec<Vec<GridPoint>> {
    fn go(
        s: &Shape,
        path: &mut Vec<GridPoint>,
        used: &mut FxHashSet<GridPoint>,
        out: &mut Vec<Vec<GridPoint>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if path.len() == s.len() {
            out.push(path.clone());
            return;
        }
        let p = *path.last().expect("non-empty path");
        for q in p.neighbors() {
            if s.contains(q) && used.insert(q) {
                path.push(q);
                go(s, path, used, out, limit);
                path.pop();
                used.remove(&q);
            }
        }
    }
    let mut out = Vec::new();
    for start in s.iter() {
        let mut used = FxHashSet::default();
        used.insert(start);
        go(s, &mut vec![start], &mut used, &mut out, limit);
    }
    out
}

/// Random connected y-monotone shape with at most `max_points` points.
pub fn random_y_monotone<R: Rng + ?Sized>(rng: &mut R, max_points: usize) -> Shape {
    random_rows(rng, max_points, false)
}

/// Random y-monotone shape whose consecutive rows share a column, so that
/// it is connected through x and y edges alone.
pub fn random_xy_monotone<R: Rng + ?Sized>(rng: &mut R, max_points: usize) -> Shape {
    random_rows(rng, max_points, true)
}

fn random_rows<R: Rng + ?Sized>(rng: &mut R, max_points: usize, xy: bool) -> Shape {
    assert!(max_points >= 1);
    let mut points = BTreeSet::new();
    let first = rng.random_range(1..=max_points.min(6)) as i32;
    let (mut l, mut r) = (0i32, first - 1);
    let mut y = 0;
    points.extend((l..=r).map(|x| GridPoint::new(x, 0)));
    loop {
        let room = max_points - points.len();
        if room == 0 || rng.random_bool(0.2) {
            break;
        }
        let w = rng.random_range(1..=room.min(6)) as i32;
        // new row [nl, nl + w - 1] must meet [l, r] (or [l - 1, r] via +w)
        let lo = if xy { l - w + 1 } else { l - w };
        let nl = rng.random_range(lo..=r);
        y += 1;
        l = nl;
        r = nl + w - 1;
        points.extend((l..=r).map(|x| GridPoint::new(x, y)));
    }
    Shape { points }
}
