//! Incremental GF(2) linear system solver.
//!
//! Shift vectors of candidate maps, extension feasibility, and amalgamation
//! obstructions all reduce to small XOR systems. Rows are tagged with their
//! origin so an infeasible system can name the constraint that broke it.

use crate::structure::{Pair, Triple};

/// Where a row came from, for obstruction reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowTag {
    /// Parity equation of a triangle (shift sum must match bit difference).
    Triangle(Triple),
    /// A pinned shift value for a single pair.
    Pin(Pair),
    /// Agreement of two face embeddings on a shared pair.
    Overlap(Pair),
    /// Anything else (kept human-readable).
    Note(String),
}

impl std::fmt::Display for RowTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowTag::Triangle(t) => write!(f, "triangle {t}"),
            RowTag::Pin(p) => write!(f, "pinned shift on pair {p}"),
            RowTag::Overlap(p) => write!(f, "overlap on pair {p}"),
            RowTag::Note(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Row {
    mask: Vec<u64>,
    rhs: bool,
    tag: RowTag,
}

impl Row {
    fn new(words: usize, vars: &[usize], rhs: bool, tag: RowTag) -> Self {
        let mut mask = vec![0u64; words];
        for &v in vars {
            mask[v / 64] ^= 1 << (v % 64);
        }
        Row { mask, rhs, tag }
    }

    fn is_zero(&self) -> bool {
        self.mask.iter().all(|&w| w == 0)
    }

    fn lowest_bit(&self) -> Option<usize> {
        for (i, &w) in self.mask.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn has_bit(&self, v: usize) -> bool {
        self.mask[v / 64] >> (v % 64) & 1 == 1
    }

    fn xor_in(&mut self, other: &Row) {
        for (a, b) in self.mask.iter_mut().zip(other.mask.iter()) {
            *a ^= b;
        }
        self.rhs ^= other.rhs;
    }
}

/// A system of XOR equations over a fixed set of boolean variables.
///
/// Rows are reduced as they are added, so infeasibility is detected (and
/// attributed to the offending row) immediately.
#[derive(Debug, Clone)]
pub struct System {
    vars: usize,
    words: usize,
    /// Reduced rows, each with a distinct pivot variable.
    rows: Vec<Row>,
}

/// The affine solution space of a feasible system.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    /// One solution, with all free variables set to false.
    pub particular: Vec<bool>,
    /// A basis of the homogeneous solution space.
    pub basis: Vec<Vec<bool>>,
    /// Variables that were not determined by any equation.
    pub free: Vec<usize>,
}

impl SolutionSpace {
    /// Number of solutions, as a power of two (the nullity).
    pub fn log2_count(&self) -> usize {
        self.basis.len()
    }

    /// Does the variable take the same value in every solution?
    pub fn is_forced(&self, var: usize) -> bool {
        self.basis.iter().all(|b| !b[var])
    }

    /// Enumerate all solutions in a deterministic order.
    pub fn enumerate(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let k = self.basis.len();
        (0u64..(1u64 << k)).map(move |bits| {
            let mut sol = self.particular.clone();
            for (j, basis_vec) in self.basis.iter().enumerate() {
                if bits >> j & 1 == 1 {
                    for (s, &b) in sol.iter_mut().zip(basis_vec.iter()) {
                        *s ^= b;
                    }
                }
            }
            sol
        })
    }
}

impl System {
    pub fn new(vars: usize) -> Self {
        System {
            vars,
            words: vars.div_ceil(64).max(1),
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    /// Add the equation `xor of vars == rhs`. On contradiction, returns the
    /// tag of the added row.
    pub fn add(&mut self, vars: &[usize], rhs: bool, tag: RowTag) -> Result<(), RowTag> {
        debug_assert!(vars.iter().all(|&v| v < self.vars));
        let mut row = Row::new(self.words, vars, rhs, tag);
        for r in &self.rows {
            if let Some(p) = r.lowest_bit() {
                if row.has_bit(p) {
                    row.xor_in(r);
                }
            }
        }
        if row.is_zero() {
            if row.rhs {
                return Err(row.tag);
            }
            return Ok(());
        }
        // Back-substitute so every reduced row keeps a unique pivot.
        let p = row.lowest_bit().expect("nonzero row has a pivot");
        for r in &mut self.rows {
            if r.has_bit(p) {
                r.xor_in(&row);
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// Convenience: pin a single variable to a value.
    pub fn pin(&mut self, var: usize, value: bool, tag: RowTag) -> Result<(), RowTag> {
        self.add(&[var], value, tag)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.vars - self.rows.len()
    }

    /// Extract the full affine solution space.
    pub fn solution_space(&self) -> SolutionSpace {
        let mut pivot_of = vec![None; self.vars];
        for (i, r) in self.rows.iter().enumerate() {
            let p = r.lowest_bit().expect("reduced rows are nonzero");
            pivot_of[p] = Some(i);
        }
        let free: Vec<usize> = (0..self.vars).filter(|&v| pivot_of[v].is_none()).collect();

        let mut particular = vec![false; self.vars];
        for r in &self.rows {
            let p = r.lowest_bit().unwrap();
            // Free variables are zero in the particular solution, so the
            // pivot value is just the rhs.
            particular[p] = r.rhs;
        }

        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut vec = vec![false; self.vars];
            vec[f] = true;
            for r in &self.rows {
                if r.has_bit(f) {
                    let p = r.lowest_bit().unwrap();
                    vec[p] = true;
                }
            }
            basis.push(vec);
        }
        SolutionSpace {
            particular,
            basis,
            free,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn note(s: &str) -> RowTag {
        RowTag::Note(s.to_string())
    }

    #[test]
    fn solves_simple_system() {
        let mut sys = System::new(3);
        sys.add(&[0, 1], true, note("a")).unwrap();
        sys.add(&[1, 2], true, note("b")).unwrap();
        let sol = sys.solution_space();
        assert_eq!(sol.free.len(), 1);
        for s in sol.enumerate() {
            assert!(s[0] ^ s[1]);
            assert!(s[1] ^ s[2]);
        }
        assert_eq!(sol.enumerate().count(), 2);
    }

    #[test]
    fn detects_contradiction_with_tag() {
        let mut sys = System::new(2);
        sys.add(&[0, 1], false, note("first")).unwrap();
        sys.pin(0, true, note("pin0")).unwrap();
        let err = sys.pin(1, true, note("conflict")).unwrap_err();
        assert_eq!(err, note("conflict"));
    }

    #[test]
    fn forced_and_free_variables() {
        let mut sys = System::new(3);
        sys.pin(0, true, note("p")).unwrap();
        sys.add(&[0, 1], true, note("q")).unwrap();
        let sol = sys.solution_space();
        assert!(sol.is_forced(0));
        assert!(sol.is_forced(1));
        assert!(!sol.is_forced(2));
        assert!(sol.particular[0]);
        assert!(!sol.particular[1]);
    }

    #[test]
    fn redundant_row_is_accepted() {
        let mut sys = System::new(2);
        sys.add(&[0, 1], true, note("a")).unwrap();
        sys.add(&[0, 1], true, note("dup")).unwrap();
        assert_eq!(sys.rank(), 1);
    }
}
