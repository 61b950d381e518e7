//! Elementary cellular automata under the Wolfram numbering, with Rule 110
//! as the headline Turing-universal instance.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CaError {
    #[error("rule number must be 0..=255")]
    RuleOutOfRange,
    #[error("tape must hold at least 3 cells, found {0}")]
    TapeTooShort(usize),
    #[error("tape text may only contain '0' and '1', found {0:?}")]
    BadTapeChar(char),
}

/// What a boundary cell sees in place of its missing neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Wrap around: the left neighbor of cell 0 is the last cell.
    Cyclic,
    /// Missing neighbors read as white (0).
    FixedWhite,
}

/// Finite binary tape; white = 0 = false, black = 1 = true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    pub cells: Vec<bool>,
    pub boundary: Boundary,
}

impl Tape {
    pub fn new(cells: Vec<bool>, boundary: Boundary) -> Result<Self, CaError> {
        if cells.len() < 3 {
            return Err(CaError::TapeTooShort(cells.len()));
        }
        Ok(Tape { cells, boundary })
    }

    pub fn parse(text: &str, boundary: Boundary) -> Result<Self, CaError> {
        let mut cells = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => cells.push(false),
                '1' => cells.push(true),
                other => return Err(CaError::BadTapeChar(other)),
            }
        }
        Tape::new(cells, boundary)
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    fn neighborhood(&self, i: usize) -> (bool, bool, bool) {
        let n = self.cells.len();
        let left = if i == 0 {
            match self.boundary {
                Boundary::Cyclic => self.cells[n - 1],
                Boundary::FixedWhite => false,
            }
        } else {
            self.cells[i - 1]
        };
        let right = if i == n - 1 {
            match self.boundary {
                Boundary::Cyclic => self.cells[0],
                Boundary::FixedWhite => false,
            }
        } else {
            self.cells[i + 1]
        };
        (left, self.cells[i], right)
    }

    /// `0`/`1` text; `render(true)` substitutes `.` and `#`.
    pub fn render(&self, pictorial: bool) -> String {
        self.cells
            .iter()
            .map(|&c| match (pictorial, c) {
                (false, false) => '0',
                (false, true) => '1',
                (true, false) => '.',
                (true, true) => '#',
            })
            .collect()
    }
}

impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Total map from the 8 neighborhoods to the next center value.
/// Neighborhood (l, c, r) reads as the binary number b = 4l + 2c + r;
/// the output is bit b of the rule number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleTable {
    pub rule_number: u8,
    outputs: [bool; 8],
}

impl RuleTable {
    pub fn new(rule_number: u32) -> Result<Self, CaError> {
        if rule_number > 255 {
            return Err(CaError::RuleOutOfRange);
        }
        let n = rule_number as u8;
        let mut outputs = [false; 8];
        for (b, out) in outputs.iter_mut().enumerate() {
            *out = (n >> b) & 1 == 1;
        }
        Ok(RuleTable { rule_number: n, outputs })
    }

    pub fn next(&self, left: bool, center: bool, right: bool) -> bool {
        let b = ((left as usize) << 2) | ((center as usize) << 1) | (right as usize);
        self.outputs[b]
    }
}

/// One synchronous update: every cell is replaced simultaneously from the
/// old tape, so the result is independent of visit order.
pub fn ca_step(tape: &Tape, table: &RuleTable) -> Result<Tape, CaError> {
    if tape.cells.len() < 3 {
        return Err(CaError::TapeTooShort(tape.cells.len()));
    }
    let cells = (0..tape.cells.len())
        .map(|i| {
            let (l, c, r) = tape.neighborhood(i);
            table.next(l, c, r)
        })
        .collect();
    Ok(Tape { cells, boundary: tape.boundary })
}

/// Runs `steps` synchronous updates, returning `steps + 1` rows including
/// the initial tape.
pub fn ca_run(tape: &Tape, table: &RuleTable, steps: usize) -> Result<Vec<Tape>, CaError> {
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(tape.clone());
    for _ in 0..steps {
        let next = ca_step(rows.last().unwrap(), table)?;
        rows.push(next);
    }
    Ok(rows)
}
