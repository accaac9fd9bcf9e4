//! Recomputes the Betti/region table and compares it with the published values.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{json, Value};

use resonance::arrangement::default_primes;
use resonance::nbc::nbc_face_counts;
use resonance::{finite_field_charpoly, region_count, Error, Guards};

use crate::dec;

const GOLDEN: &str = include_str!("../data/table1.json");

/// Published values; `None` marks an unknown entry.
pub struct Golden {
    rows: Vec<(String, Vec<Option<BigUint>>)>,
}

impl Golden {
    pub fn embedded() -> Self {
        let v: Value = serde_json::from_str(GOLDEN).expect("embedded table is valid JSON");
        let obj = v.as_object().expect("embedded table is an object");
        let rows = obj
            .iter()
            .filter(|(k, _)| k.as_str() != "n")
            .map(|(k, vals)| {
                let vals = vals
                    .as_array()
                    .expect("rows are arrays")
                    .iter()
                    .map(|x| x.as_str().map(|s| s.parse().expect("decimal entry")))
                    .collect();
                (k.clone(), vals)
            })
            .collect();
        Golden { rows }
    }

    fn row(&self, name: &str) -> Option<&[Option<BigUint>]> {
        self.rows.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_slice())
    }

    /// `b_i(A_1), b_i(A_2), ...`; `b_0` is 1 throughout.
    pub fn betti_row(&self, i: usize) -> Option<Vec<Option<BigUint>>> {
        if i == 0 {
            let len = self.row("R")?.len();
            return Some(vec![Some(BigUint::from(1u32)); len]);
        }
        self.row(&format!("b{i}")).map(|r| r.to_vec())
    }

    pub fn regions_row(&self) -> Option<Vec<Option<BigUint>>> {
        self.row("R").map(|r| r.to_vec())
    }

    /// Entry `(quantity, n)`; `quantity` is `b1`, `b2`, ... or `R`.
    pub fn get(&self, quantity: &str, n: usize) -> Option<BigUint> {
        self.row(quantity)?.get(n.checked_sub(1)?)?.clone()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Match,
    Mismatch,
    /// Computed, no published value.
    New,
    /// Beyond the guards.
    Skipped,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Match => "MATCH",
            CellStatus::Mismatch => "MISMATCH",
            CellStatus::New => "NEW",
            CellStatus::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub quantity: String,
    pub n: usize,
    pub computed: Option<BigUint>,
    pub expected: Option<BigUint>,
    pub status: CellStatus,
}

fn cell(quantity: String, n: usize, computed: Option<BigUint>, golden: &Golden) -> Cell {
    let expected = golden.get(&quantity, n);
    let status = match (&computed, &expected) {
        (None, _) => CellStatus::Skipped,
        (Some(c), Some(e)) if c == e => CellStatus::Match,
        (Some(_), Some(_)) => CellStatus::Mismatch,
        (Some(_), None) => CellStatus::New,
    };
    Cell { quantity, n, computed, expected, status }
}

/// Rows `b_1..b_{i_max}` then `R`, each for `n = 1..=n_max`. Betti numbers come
/// from NBC counts (full or depth-limited as the guards allow), `R` from the
/// full NBC count or else finite-field point counting.
pub fn table1_report(n_max: usize, i_max: usize, guards: &Guards) -> Result<Vec<Cell>, Error> {
    if n_max == 0 || i_max == 0 {
        return Err(Error::InvalidInput("--n-max and --i-max must be positive".into()));
    }
    let golden = Golden::embedded();
    let mut betti: Vec<Vec<Option<BigUint>>> = vec![Vec::new(); i_max];
    let mut regions = Vec::new();
    for n in 1..=n_max {
        let full = n <= guards.nbc_full;
        let depth = if full { n } else { i_max.min(n) };
        let counts = if guards.check_nbc(n, depth).is_ok() {
            Some(nbc_face_counts(n, depth)?)
        } else {
            None
        };
        for (i, row) in betti.iter_mut().enumerate() {
            let i = i + 1;
            row.push(counts.as_ref().map(|c| {
                if i > n {
                    BigUint::default()
                } else {
                    c.get(i).map(|&x| BigUint::from(x)).unwrap_or_default()
                }
            }));
        }
        let r = match &counts {
            Some(c) if full => Some(c.iter().map(|&x| BigUint::from(x)).sum()),
            _ if n <= guards.finite_field => {
                Some(region_count(&finite_field_charpoly(n, &default_primes(n), guards)?))
            }
            _ => None,
        };
        regions.push(r);
    }
    let mut cells = Vec::new();
    for (i, row) in betti.into_iter().enumerate() {
        for (idx, v) in row.into_iter().enumerate() {
            cells.push(cell(format!("b{}", i + 1), idx + 1, v, &golden));
        }
    }
    for (idx, v) in regions.into_iter().enumerate() {
        cells.push(cell("R".into(), idx + 1, v, &golden));
    }
    Ok(cells)
}

pub fn to_json(cells: &[Cell]) -> Value {
    let opt = |x: &Option<BigUint>| x.as_ref().map(dec).unwrap_or(Value::Null);
    Value::Array(
        cells
            .iter()
            .map(|c| {
                json!({
                    "quantity": c.quantity,
                    "n": dec(c.n),
                    "computed": opt(&c.computed),
                    "expected": opt(&c.expected),
                    "status": c.status.as_str(),
                })
            })
            .collect(),
    )
}

pub fn to_text(cells: &[Cell]) -> String {
    let mut s = String::new();
    for c in cells {
        let show = |x: &Option<BigUint>| x.as_ref().map_or("?".to_string(), |v| v.to_string());
        writeln!(
            s,
            "{:<3} n={:<2} computed={:<12} expected={:<12} {}",
            c.quantity,
            c.n,
            show(&c.computed),
            show(&c.expected),
            c.status.as_str()
        )
        .unwrap();
    }
    s
}
