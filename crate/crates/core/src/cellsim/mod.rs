//! Bistable cell relaxation.
//!
//! Cells sit on an integer lattice. Face neighbours (squared distance 1)
//! couple with weight `face`, diagonal neighbours (squared distance 2)
//! with weight `diagonal`, and everything farther apart not at all. Free
//! and output cells start at `P = 0` and are swept in list order with
//! `P_i = f(Σ_j w_ij P_j)`, `f(x) = x / sqrt(1 + x²)`.

mod charge;
mod layouts;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use charge::{polarization_4dot, polarization_8dot, ChargeState4, ChargeState8};
pub use layouts::{
    build_inverter, build_maj3, build_maj5, build_wire, Layout, LayoutRegistry, DEFAULT_WIRE_LENGTH,
};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 1000;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("total charge is zero")]
    DegenerateCharge,
    #[error("dot {dot} has invalid charge {charge}")]
    InvalidCharge { dot: usize, charge: f64 },
    #[error("layout needs at least {min} cells, got {got}")]
    Size { min: usize, got: usize },
    #[error("layout takes {expected} driver values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("two cells at {0:?}")]
    Overlap([i32; 3]),
    #[error("planar cell at {0:?} has nonzero z")]
    NotPlanar([i32; 3]),
    #[error("grid needs exactly one output cell, found {0}")]
    Output(usize),
    #[error("polarization {0} outside [-1, 1]")]
    Polarization(f64),
    #[error("invalid parameter: {0}")]
    Param(&'static str),
    #[error("no convergence after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("output polarization {polarization} is within ±{threshold}")]
    Undecided { polarization: f64, threshold: f64 },
    #[error("grid text line {line}: {msg}")]
    Format { line: usize, msg: String },
}

/// Fixed driver polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    pub fn value(self) -> f64 {
        match self {
            Polarity::Plus => 1.0,
            Polarity::Minus => -1.0,
        }
    }

    pub fn bit(self) -> bool {
        self == Polarity::Plus
    }

    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }
}

impl From<bool> for Polarity {
    fn from(b: bool) -> Self {
        if b {
            Polarity::Plus
        } else {
            Polarity::Minus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    Driver(Polarity),
    Free,
    Output,
}

/// Planar four-dot cells or three-dimensional eight-dot cube cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellKind {
    FourDot,
    Cube,
}

impl CellKind {
    fn name(self) -> &'static str {
        match self {
            CellKind::FourDot => "four-dot",
            CellKind::Cube => "cube",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub position: [i32; 3],
    pub role: Role,
    pub polarization: f64,
}

impl Cell {
    pub fn new(position: [i32; 3], role: Role) -> Cell {
        let polarization = match role {
            Role::Driver(p) => p.value(),
            _ => 0.0,
        };
        Cell { position, role, polarization }
    }
}

/// Coupling weights by neighbour geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    pub face: f64,
    pub diagonal: f64,
}

impl Default for Couplings {
    fn default() -> Self {
        Couplings { face: 1.0, diagonal: -0.05 }
    }
}

impl Couplings {
    pub fn weight(&self, a: [i32; 3], b: [i32; 3]) -> f64 {
        let d2: i64 = (0..3).map(|k| ((a[k] - b[k]) as i64).pow(2)).sum();
        match d2 {
            1 => self.face,
            2 => self.diagonal,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    kind: CellKind,
    couplings: Couplings,
    cells: Vec<Cell>,
    /// Nonzero couplings per cell; symmetric by construction.
    neighbours: Vec<Vec<(usize, f64)>>,
    output: usize,
}

impl CellGrid {
    pub fn new(kind: CellKind, cells: Vec<Cell>, couplings: Couplings) -> Result<CellGrid, SimError> {
        if !(couplings.face.is_finite() && couplings.diagonal.is_finite()) {
            return Err(SimError::Param("coupling weights must be finite"));
        }
        let mut seen = std::collections::HashSet::new();
        for c in &cells {
            if !seen.insert(c.position) {
                return Err(SimError::Overlap(c.position));
            }
            if kind == CellKind::FourDot && c.position[2] != 0 {
                return Err(SimError::NotPlanar(c.position));
            }
            let ok = match c.role {
                Role::Driver(p) => c.polarization == p.value(),
                _ => c.polarization.abs() <= 1.0,
            };
            if !ok {
                return Err(SimError::Polarization(c.polarization));
            }
        }
        let outputs: Vec<usize> =
            (0..cells.len()).filter(|&i| cells[i].role == Role::Output).collect();
        if outputs.len() != 1 {
            return Err(SimError::Output(outputs.len()));
        }
        let neighbours = (0..cells.len())
            .map(|i| {
                (0..cells.len())
                    .filter(|&j| j != i)
                    .map(|j| (j, couplings.weight(cells[i].position, cells[j].position)))
                    .filter(|&(_, w)| w != 0.0)
                    .collect()
            })
            .collect();
        Ok(CellGrid { kind, couplings, cells, neighbours, output: outputs[0] })
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn output_index(&self) -> usize {
        self.output
    }

    pub fn output_polarization(&self) -> f64 {
        self.cells[self.output].polarization
    }

    pub fn polarizations(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.polarization).collect()
    }

    /// Coupling between cells `i` and `j`; zero on the diagonal.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.couplings.weight(self.cells[i].position, self.cells[j].position)
        }
    }

    pub fn count(&self, pred: impl Fn(&Role) -> bool) -> usize {
        self.cells.iter().filter(|c| pred(&c.role)).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("grid v1\n");
        let _ = writeln!(s, "kind {}", self.kind.name());
        let _ = writeln!(s, "couplings {} {}", self.couplings.face, self.couplings.diagonal);
        for c in &self.cells {
            let [x, y, z] = c.position;
            let role = match c.role {
                Role::Driver(Polarity::Plus) => "driver +1".to_string(),
                Role::Driver(Polarity::Minus) => "driver -1".to_string(),
                Role::Free => format!("free {}", c.polarization),
                Role::Output => format!("output {}", c.polarization),
            };
            let _ = writeln!(s, "cell {x} {y} {z} {role}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<CellGrid, SimError> {
        let err = |line: usize, msg: &str| SimError::Format { line, msg: msg.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "grid v1")) => {}
            Some((n, _)) => return Err(err(n, "expected `grid v1` header")),
            None => return Err(err(0, "empty input")),
        }
        let mut kind = None;
        let mut couplings = Couplings::default();
        let mut cells = Vec::new();
        for (n, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|_| err(n, "bad number"));
            match f.as_slice() {
                ["kind", "four-dot"] => kind = Some(CellKind::FourDot),
                ["kind", "cube"] => kind = Some(CellKind::Cube),
                ["couplings", face, diag] => {
                    couplings = Couplings { face: num(face)?, diagonal: num(diag)? }
                }
                ["cell", x, y, z, role, value] => {
                    let coord = |s: &str| s.parse::<i32>().map_err(|_| err(n, "bad coordinate"));
                    let position = [coord(x)?, coord(y)?, coord(z)?];
                    let v = num(value)?;
                    let role = match *role {
                        "driver" if v == 1.0 => Role::Driver(Polarity::Plus),
                        "driver" if v == -1.0 => Role::Driver(Polarity::Minus),
                        "driver" => return Err(err(n, "driver value must be +1 or -1")),
                        "free" => Role::Free,
                        "output" => Role::Output,
                        _ => return Err(err(n, "unknown role")),
                    };
                    cells.push(Cell { position, role, polarization: v });
                }
                _ => return Err(err(n, "unrecognized line")),
            }
        }
        let kind = kind.ok_or_else(|| err(0, "missing `kind` line"))?;
        CellGrid::new(kind, cells, couplings)
    }
}

fn response(x: f64) -> f64 {
    x / (1.0 + x * x).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Relaxation {
    pub polarizations: Vec<f64>,
    pub sweeps: usize,
    /// Largest absolute change in each sweep.
    pub residuals: Vec<f64>,
}

/// Sweeps until the largest change in a sweep drops below `tol`. On
/// failure the grid keeps its last state.
pub fn relax(grid: &mut CellGrid, tol: f64, max_iter: usize) -> Result<Relaxation, SimError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SimError::Param("tolerance must be positive"));
    }
    if max_iter == 0 {
        return Err(SimError::Param("max_iter must be at least 1"));
    }
    let mut residuals = Vec::new();
    for sweep in 1..=max_iter {
        let mut residual: f64 = 0.0;
        for i in 0..grid.cells.len() {
            if matches!(grid.cells[i].role, Role::Driver(_)) {
                continue;
            }
            let field: f64 = grid.neighbours[i].iter().map(|&(j, w)| w * grid.cells[j].polarization).sum();
            let next = response(field);
            residual = residual.max((next - grid.cells[i].polarization).abs());
            grid.cells[i].polarization = next;
        }
        residuals.push(residual);
        if residual < tol {
            return Ok(Relaxation { polarizations: grid.polarizations(), sweeps: sweep, residuals });
        }
    }
    Err(SimError::NoConvergence { sweeps: max_iter, residual: *residuals.last().unwrap() })
}

/// Logic value of the output cell.
pub fn read_logic(grid: &CellGrid, threshold: f64) -> Result<bool, SimError> {
    read_polarization(grid.output_polarization(), threshold)
}

pub fn read_polarization(p: f64, threshold: f64) -> Result<bool, SimError> {
    if !(0.0..1.0).contains(&threshold) {
        return Err(SimError::Param("threshold must be in [0, 1)"));
    }
    if p > threshold {
        Ok(true)
    } else if p < -threshold {
        Ok(false)
    } else {
        Err(SimError::Undecided { polarization: p, threshold })
    }
}
