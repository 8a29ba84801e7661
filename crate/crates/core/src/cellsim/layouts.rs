//! Built-in cell layouts and the name-indexed layout registry.

use super::{Cell, CellGrid, CellKind, Couplings, Polarity, Role, SimError};
use crate::network::Network;
use crate::parse::parse_expr;

pub const DEFAULT_WIRE_LENGTH: usize = 5;

fn grid(kind: CellKind, cells: Vec<Cell>) -> CellGrid {
    CellGrid::new(kind, cells, Couplings::default()).expect("built-in layout is valid")
}

/// Straight chain along x: driver at 0, output at `length - 1`.
pub fn build_wire(length: usize, driver: Polarity) -> Result<CellGrid, SimError> {
    if length < 2 {
        return Err(SimError::Size { min: 2, got: length });
    }
    let cells = (0..length)
        .map(|i| {
            let role = match i {
                0 => Role::Driver(driver),
                _ if i == length - 1 => Role::Output,
                _ => Role::Free,
            };
            Cell::new([i as i32, 0, 0], role)
        })
        .collect();
    Ok(grid(CellKind::FourDot, cells))
}

/// Eleven cells: the input line forks into two branches at x = 2..3 that
/// rejoin at x = 4, where the branch ends sit diagonal to the rejoining
/// cell and invert it.
pub fn build_inverter(driver: Polarity) -> CellGrid {
    let at = |x, y, role| Cell::new([x, y, 0], role);
    let cells = vec![
        at(0, 0, Role::Driver(driver)),
        at(1, 0, Role::Free),
        at(2, 0, Role::Free),
        at(2, 1, Role::Free),
        at(2, -1, Role::Free),
        at(3, 1, Role::Free),
        at(3, -1, Role::Free),
        at(4, 0, Role::Free),
        at(5, 0, Role::Free),
        at(6, 0, Role::Free),
        at(7, 0, Role::Output),
    ];
    grid(CellKind::FourDot, cells)
}

/// Five-cell cross: drivers above, left and below a free centre, output
/// on the right.
pub fn build_maj3(inputs: [Polarity; 3]) -> CellGrid {
    let [a, b, c] = inputs;
    let at = |x, y, role| Cell::new([x, y, 0], role);
    let cells = vec![
        at(0, 1, Role::Driver(a)),
        at(-1, 0, Role::Driver(b)),
        at(0, -1, Role::Driver(c)),
        at(0, 0, Role::Free),
        at(1, 0, Role::Output),
    ];
    grid(CellKind::FourDot, cells)
}

/// Seven cube cells: drivers on the −x, +x, −y, +y and −z faces of a free
/// centre, output on the +z face.
pub fn build_maj5(inputs: [Polarity; 5]) -> CellGrid {
    let faces = [[-1, 0, 0], [1, 0, 0], [0, -1, 0], [0, 1, 0], [0, 0, -1]];
    let mut cells: Vec<Cell> =
        faces.iter().zip(inputs).map(|(&pos, p)| Cell::new(pos, Role::Driver(p))).collect();
    cells.push(Cell::new([0, 0, 0], Role::Free));
    cells.push(Cell::new([0, 0, 1], Role::Output));
    grid(CellKind::Cube, cells)
}

pub trait Layout: Send + Sync {
    fn name(&self) -> &'static str;
    fn arity(&self) -> usize;
    fn build(&self, inputs: &[Polarity]) -> Result<CellGrid, SimError>;
    /// The gate this layout is meant to realise, over `arity()` inputs.
    fn reference(&self) -> Network;
}

fn check_arity(expected: usize, inputs: &[Polarity]) -> Result<(), SimError> {
    if inputs.len() == expected {
        Ok(())
    } else {
        Err(SimError::Arity { expected, got: inputs.len() })
    }
}

fn reference(expr: &str, n: usize) -> Network {
    parse_expr(expr, &crate::parse::default_names(n)).expect("reference expression parses")
}

pub struct Wire {
    pub length: usize,
}

struct Inverter;
struct Maj3;
struct Maj5;

impl Layout for Wire {
    fn name(&self) -> &'static str {
        "wire"
    }
    fn arity(&self) -> usize {
        1
    }
    fn build(&self, inputs: &[Polarity]) -> Result<CellGrid, SimError> {
        check_arity(1, inputs)?;
        build_wire(self.length, inputs[0])
    }
    fn reference(&self) -> Network {
        reference("A", 1)
    }
}

impl Layout for Inverter {
    fn name(&self) -> &'static str {
        "inv"
    }
    fn arity(&self) -> usize {
        1
    }
    fn build(&self, inputs: &[Polarity]) -> Result<CellGrid, SimError> {
        check_arity(1, inputs)?;
        Ok(build_inverter(inputs[0]))
    }
    fn reference(&self) -> Network {
        reference("A'", 1)
    }
}

impl Layout for Maj3 {
    fn name(&self) -> &'static str {
        "maj3"
    }
    fn arity(&self) -> usize {
        3
    }
    fn build(&self, inputs: &[Polarity]) -> Result<CellGrid, SimError> {
        check_arity(3, inputs)?;
        Ok(build_maj3(inputs.try_into().unwrap()))
    }
    fn reference(&self) -> Network {
        reference("M(A,B,C)", 3)
    }
}

impl Layout for Maj5 {
    fn name(&self) -> &'static str {
        "maj5"
    }
    fn arity(&self) -> usize {
        5
    }
    fn build(&self, inputs: &[Polarity]) -> Result<CellGrid, SimError> {
        check_arity(5, inputs)?;
        Ok(build_maj5(inputs.try_into().unwrap()))
    }
    fn reference(&self) -> Network {
        reference("M5(A,B,C,D,E)", 5)
    }
}

pub struct LayoutRegistry {
    layouts: Vec<Box<dyn Layout>>,
}

impl LayoutRegistry {
    pub fn empty() -> Self {
        Self { layouts: Vec::new() }
    }

    pub fn builtin(wire_length: usize) -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Wire { length: wire_length }));
        r.register(Box::new(Inverter));
        r.register(Box::new(Maj3));
        r.register(Box::new(Maj5));
        r
    }

    /// Adds a layout; one with the same name is replaced in place.
    pub fn register(&mut self, layout: Box<dyn Layout>) {
        match self.layouts.iter().position(|l| l.name() == layout.name()) {
            Some(i) => self.layouts[i] = layout,
            None => self.layouts.push(layout),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn Layout> {
        self.layouts.iter().find(|l| l.name() == name).map(|l| l.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.layouts.iter().map(|l| l.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Layout> {
        self.layouts.iter().map(|l| l.as_ref())
    }
}

impl Default for LayoutRegistry {
    fn default() -> Self {
        Self::builtin(DEFAULT_WIRE_LENGTH)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellsim::{read_logic, relax, DEFAULT_MAX_ITER, DEFAULT_THRESHOLD, DEFAULT_TOL};
    use Polarity::{Minus, Plus};

    fn settle(mut g: CellGrid) -> CellGrid {
        relax(&mut g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        g
    }

    #[test]
    fn census() {
        let w = build_wire(5, Plus).unwrap();
        assert_eq!(w.count(|r| matches!(r, Role::Driver(_))), 1);
        assert_eq!(w.count(|r| *r == Role::Free), 3);
        assert_eq!(w.count(|r| *r == Role::Output), 1);
        assert_eq!(build_wire(2, Minus).unwrap().cells().len(), 2);
        assert_eq!(build_wire(1, Plus), Err(SimError::Size { min: 2, got: 1 }));
        assert_eq!(build_inverter(Plus).cells().len(), 11);
        assert_eq!(build_maj3([Plus; 3]).cells().len(), 5);
        let m5 = build_maj5([Plus; 5]);
        assert_eq!(m5.cells().len(), 7);
        assert_eq!(m5.count(|r| matches!(r, Role::Driver(_))), 5);
    }

    #[test]
    fn inverter_inverts() {
        let g = settle(build_inverter(Plus));
        assert!(g.output_polarization() < -0.5);
        let g = settle(build_inverter(Minus));
        assert!(g.output_polarization() > 0.5);
    }

    #[test]
    fn majority_examples() {
        let g = settle(build_maj3([Plus, Plus, Minus]));
        assert!(read_logic(&g, DEFAULT_THRESHOLD).unwrap());
        let g = settle(build_maj3([Minus; 3]));
        assert!(!read_logic(&g, DEFAULT_THRESHOLD).unwrap());
        let g = settle(build_maj3([Plus, Minus, Plus]));
        assert!(read_logic(&g, DEFAULT_THRESHOLD).unwrap());
        let g = settle(build_maj5([Plus, Plus, Plus, Minus, Minus]));
        assert!(read_logic(&g, DEFAULT_THRESHOLD).unwrap());
    }

    #[test]
    fn registry() {
        let r = LayoutRegistry::default();
        assert_eq!(r.names(), vec!["wire", "inv", "maj3", "maj5"]);
        let maj5 = r.get("maj5").unwrap();
        assert_eq!(maj5.arity(), 5);
        assert_eq!(maj5.build(&[Plus; 3]).unwrap_err(), SimError::Arity { expected: 5, got: 3 });
        assert!(r.get("xor").is_none());
    }
}
