//! Bit-packed linear algebra over GF(2).
//!
//! Supports the oracle-reduction pipeline: build a parity system whose
//! variables are control patterns, row-reduce it, and search the solution
//! coset for an assignment of minimum multi-controlled-NOT cost.

use std::cmp::Ordering;

/// A control-pattern variable: a sorted non-empty set of wire indices
/// (1-based) and the bit values the pattern requires on them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermVariable {
    pub wires: Vec<usize>,
    pub pattern: Vec<bool>,
}

impl TermVariable {
    pub fn new(wires: Vec<usize>, pattern: Vec<bool>) -> Self {
        assert_eq!(wires.len(), pattern.len());
        assert!(!wires.is_empty());
        assert!(wires.windows(2).all(|w| w[0] < w[1]), "wires must be sorted");
        TermVariable { wires, pattern }
    }

    /// Implementation cost: the number of controls, `|J|`.
    pub fn cost(&self) -> usize {
        self.wires.len()
    }

    /// Whether a full bit string `t` (1-based via position) matches this
    /// pattern, i.e. `t_J = s`.
    pub fn matches(&self, t: &[bool]) -> bool {
        self.wires
            .iter()
            .zip(&self.pattern)
            .all(|(&w, &s)| t[w - 1] == s)
    }
}

/// Fixed-length bit vector packed into 64-bit blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    blocks: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.blocks[i / 64] |= mask;
        } else {
            self.blocks[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.blocks[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Parity of the AND with another vector (dot product over GF(2)).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(0u32, |acc, (a, b)| acc ^ ((a & b).count_ones() & 1))
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let tz = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * 64 + tz)
                }
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Lexicographic order with variable 0 most significant and 0 < 1; used
    /// to break cost ties deterministically.
    pub fn lex_cmp(&self, other: &BitVec) -> Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let diff = a ^ b;
            if diff != 0 {
                let first = diff.trailing_zeros();
                return if (a >> first) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

/// A linear system over GF(2) with control-pattern variables.
#[derive(Debug, Clone)]
pub struct Gf2System {
    pub variables: Vec<TermVariable>,
    rows: Vec<BitVec>,
    rhs: Vec<bool>,
}

impl Gf2System {
    pub fn new(variables: Vec<TermVariable>) -> Self {
        Gf2System {
            variables,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, support: impl IntoIterator<Item = usize>, rhs: bool) {
        let mut row = BitVec::zeros(self.variables.len());
        for i in support {
            row.set(i, true);
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn satisfies(&self, assignment: &BitVec) -> bool {
        self.rows
            .iter()
            .zip(&self.rhs)
            .all(|(row, &b)| row.dot(assignment) == b)
    }

    /// Drops variables whose column is zero and merges variables with
    /// identical columns, keeping the representative of smallest
    /// (cost, variable index).
    ///
    /// Any solution using a dropped variable maps to one of equal or smaller
    /// cost over the kept variables (duplicate columns are interchangeable;
    /// setting both members of a pair cancels their contribution), so minimum
    /// costs agree. Returns the reduced system and, per kept column, the
    /// original variable index.
    pub fn dedup_columns(&self) -> (Gf2System, Vec<usize>) {
        let n = self.variables.len();
        let mut column_key: Vec<Vec<u64>> = vec![Vec::new(); n];
        for (r, row) in self.rows.iter().enumerate() {
            for v in row.iter_ones() {
                let blocks = r / 64;
                if column_key[v].len() <= blocks {
                    column_key[v].resize(blocks + 1, 0);
                }
                column_key[v][blocks] |= 1u64 << (r % 64);
            }
        }
        let mut by_key: std::collections::BTreeMap<Vec<u64>, usize> =
            std::collections::BTreeMap::new();
        for v in 0..n {
            if column_key[v].iter().all(|&b| b == 0) {
                continue; // zero column: any minimal solution leaves it unset
            }
            let entry = by_key.entry(column_key[v].clone()).or_insert(v);
            let better = (self.variables[v].cost(), v)
                < (self.variables[*entry].cost(), *entry);
            if better {
                *entry = v;
            }
        }
        let mut keep: Vec<usize> = by_key.into_values().collect();
        keep.sort_unstable();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            position[v] = i;
        }
        let mut reduced = Gf2System::new(keep.iter().map(|&v| self.variables[v].clone()).collect());
        for (row, &b) in self.rows.iter().zip(&self.rhs) {
            reduced.add_row(
                row.iter_ones()
                    .filter(|&v| position[v] != usize::MAX)
                    .map(|v| position[v]),
                b,
            );
        }
        (reduced, keep)
    }
}

/// Parametrization of the full solution set of a feasible system.
#[derive(Debug, Clone)]
pub struct Gf2Solution {
    pub num_vars: usize,
    /// One solution, with all free variables set to zero.
    pub particular: BitVec,
    /// Column indices of the free variables, ascending.
    pub free_variables: Vec<usize>,
    /// Kernel basis vector per free variable (that variable set to one).
    pub basis: Vec<BitVec>,
}

/// Row-reduces the system with partial pivoting by column order.
///
/// Returns `None` when some row reduces to `0 = 1`.
pub fn gaussian_eliminate(sys: &Gf2System) -> Option<Gf2Solution> {
    let n = sys.num_vars();
    let mut rows = sys.rows.clone();
    let mut rhs = sys.rhs.clone();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut pivot_row = 0usize;
    for col in 0..n {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(pivot_row, r);
        rhs.swap(pivot_row, r);
        let pivot = rows[pivot_row].clone();
        let pivot_rhs = rhs[pivot_row];
        for i in 0..rows.len() {
            if i != pivot_row && rows[i].get(col) {
                rows[i].xor_assign(&pivot);
                rhs[i] ^= pivot_rhs;
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    // infeasibility: a zero row with rhs one
    for (row, &b) in rows.iter().zip(&rhs) {
        if b && row.is_zero() {
            return None;
        }
    }

    let free_variables: Vec<usize> = (0..n).filter(|&c| pivot_of_col[c].is_none()).collect();
    let mut particular = BitVec::zeros(n);
    for col in 0..n {
        if let Some(r) = pivot_of_col[col] {
            particular.set(col, rhs[r]);
        }
    }
    let basis: Vec<BitVec> = free_variables
        .iter()
        .map(|&f| {
            let mut v = BitVec::zeros(n);
            v.set(f, true);
            for col in 0..n {
                if let Some(r) = pivot_of_col[col] {
                    if rows[r].get(f) {
                        v.set(col, true);
                    }
                }
            }
            v
        })
        .collect();
    Some(Gf2Solution {
        num_vars: n,
        particular,
        free_variables,
        basis,
    })
}

/// Default cap on the kernel dimension for the exhaustive coset scan.
///
/// 2^24 Gray-code steps with incremental cost updates stay well under a
/// second; larger kernels fall back to the particular solution, uncertified.
pub const DEFAULT_FREE_BUDGET: usize = 24;

#[derive(Debug, Clone)]
pub struct MinCostResult {
    pub assignment: BitVec,
    pub cost: usize,
    /// Whether the full coset was scanned, certifying minimality.
    pub certified: bool,
}

/// Minimum-cost solution over the coset `particular + span(basis)`.
///
/// When the kernel dimension is at most `budget`, scans all `2^f` solutions
/// in Gray-code order with incremental cost updates and returns the minimum,
/// ties broken by lexicographically smallest assignment over variable order.
/// Otherwise returns the particular solution, flagged uncertified.
pub fn min_cost_solution(sol: &Gf2Solution, costs: &[usize], budget: usize) -> MinCostResult {
    assert_eq!(costs.len(), sol.num_vars);
    let f = sol.basis.len();
    let total_cost = |v: &BitVec| v.iter_ones().map(|i| costs[i]).sum::<usize>();
    if f > budget {
        let cost = total_cost(&sol.particular);
        return MinCostResult {
            assignment: sol.particular.clone(),
            cost,
            certified: false,
        };
    }
    let mut current = sol.particular.clone();
    let mut current_cost = total_cost(&current) as i64;
    let mut best = current.clone();
    let mut best_cost = current_cost;
    for step in 1u64..(1u64 << f) {
        let j = step.trailing_zeros() as usize;
        for v in sol.basis[j].iter_ones() {
            current.flip(v);
            if current.get(v) {
                current_cost += costs[v] as i64;
            } else {
                current_cost -= costs[v] as i64;
            }
        }
        if current_cost < best_cost
            || (current_cost == best_cost && current.lex_cmp(&best) == Ordering::Less)
        {
            best = current.clone();
            best_cost = current_cost;
        }
    }
    MinCostResult {
        assignment: best,
        cost: best_cost as usize,
        certified: true,
    }
}
