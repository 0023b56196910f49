//! JSON and JSONL file formats.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compile::StateProgram;
use crate::grid::GridPoint;
use crate::machine::{MachineError, TurningMachine};
use crate::shapes::{Path, Shape, ShapeError};
use crate::sim::Event;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("path file is missing \"ordered\": true")]
    Unordered,
}

fn json_err(source: serde_json::Error) -> FormatError {
    FormatError::Json {
        line: source.line(),
        source,
    }
}

/// `{"states": [...], "path": [[x, y], ...]}`; no path means the east line.
/// Unknown keys are ignored so a state program file loads as a machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineFile {
    pub states: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<GridPoint>>,
}

impl MachineFile {
    pub fn from_machine(tm: &TurningMachine) -> MachineFile {
        MachineFile {
            states: tm.initial_states().to_vec(),
            path: (!tm.is_east_line()).then(|| tm.initial_path().to_vec()),
        }
    }

    pub fn to_machine(&self) -> Result<TurningMachine, MachineError> {
        match &self.path {
            None => TurningMachine::line(self.states.clone()),
            Some(p) => TurningMachine::new(self.states.clone(), p.clone()),
        }
    }
}

impl From<&StateProgram> for MachineFile {
    fn from(sp: &StateProgram) -> MachineFile {
        MachineFile {
            states: sp.states.clone(),
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeFile {
    pub points: Vec<GridPoint>,
}

impl From<&Shape> for ShapeFile {
    fn from(s: &Shape) -> ShapeFile {
        ShapeFile {
            points: s.iter().collect(),
        }
    }
}

impl ShapeFile {
    pub fn to_shape(&self) -> Result<Shape, ShapeError> {
        if self.points.is_empty() {
            return Err(ShapeError::Empty);
        }
        Ok(Shape::new(self.points.iter().copied()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFile {
    pub points: Vec<GridPoint>,
    #[serde(default)]
    pub ordered: bool,
}

impl From<&Path> for PathFile {
    fn from(p: &Path) -> PathFile {
        PathFile {
            points: p.points.clone(),
            ordered: true,
        }
    }
}

impl PathFile {
    pub fn to_path(&self) -> Result<Path, FormatError> {
        if !self.ordered {
            return Err(FormatError::Unordered);
        }
        Ok(Path::new(self.points.clone())?)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(json_err)
}

pub fn parse_machine(text: &str) -> Result<TurningMachine, FormatError> {
    Ok(from_json::<MachineFile>(text)?.to_machine()?)
}

pub fn parse_shape(text: &str) -> Result<Shape, FormatError> {
    Ok(from_json::<ShapeFile>(text)?.to_shape()?)
}

pub fn parse_path(text: &str) -> Result<Path, FormatError> {
    from_json::<PathFile>(text)?.to_path()
}

pub fn write_events<W: Write>(mut w: W, events: &[Event]) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut w, e).map_err(std::io::Error::other)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads one event per non-blank line.
pub fn read_events<R: BufRead>(r: R) -> Result<Vec<Event>, FormatError> {
    let mut out = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let e = serde_json::from_str(&line).map_err(|source| FormatError::Json { line: k + 1, source })?;
        out.push(e);
    }
    Ok(out)
}
