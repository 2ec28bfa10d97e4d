//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are packed 64 coordinates per word.  The sigma systems for large
//! principal congruence groups contribute thousands of rows, so rows are
//! reduced incrementally against a small basis instead of being stored.

use std::fmt;

/// Dense vector over GF(2) with a fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zero(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = F2Vec::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Standard basis vector e_i.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = F2Vec::zero(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_inplace(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the first nonzero coordinate.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl fmt::Display for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Row-reduce in place to reduced row echelon form; returns pivot columns.
/// The result is deterministic (rows ordered by pivot column) and idempotent.
pub fn rref(rows: &mut Vec<F2Vec>) -> Vec<usize> {
    rows.retain(|r| !r.is_zero());
    let mut basis: Vec<F2Vec> = Vec::new();
    for mut row in rows.drain(..) {
        for b in &basis {
            let p = b.first_one().unwrap();
            if row.get(p) {
                row.xor_inplace(b);
            }
        }
        if !row.is_zero() {
            // Back-substitute into the existing basis rows.
            let p = row.first_one().unwrap();
            for b in basis.iter_mut() {
                if b.get(p) {
                    b.xor_inplace(&row);
                }
            }
            basis.push(row);
        }
    }
    basis.sort_by_key(|r| r.first_one());
    let pivots = basis.iter().map(|r| r.first_one().unwrap()).collect();
    *rows = basis;
    pivots
}

/// Row-reduced basis of the span of the given vectors, pivot-ordered.
pub fn span_basis(vectors: &[F2Vec]) -> Vec<F2Vec> {
    let mut rows = vectors.to_vec();
    rref(&mut rows);
    rows
}

/// Subspace equality of two spans.
pub fn same_span(a: &[F2Vec], b: &[F2Vec]) -> bool {
    span_basis(a) == span_basis(b)
}

/// Full solution set of the linear system rows * x = rhs over GF(2),
/// as an affine subspace: particular solution (None iff inconsistent) plus
/// a basis of the kernel of the coefficient matrix.
pub fn solution_space(
    rows: &[F2Vec],
    rhs: &[bool],
    unknowns: usize,
) -> (Option<F2Vec>, Vec<F2Vec>) {
    assert_eq!(rows.len(), rhs.len(), "row/rhs dimension mismatch");
    for r in rows {
        assert_eq!(r.len(), unknowns, "row length mismatch");
    }
    // Augment each row with its right-hand side in column `unknowns`.
    let mut aug: Vec<F2Vec> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &e)| {
            let mut w = F2Vec::zero(unknowns + 1);
            for i in 0..unknowns {
                if r.get(i) {
                    w.set(i, true);
                }
            }
            w.set(unknowns, e);
            w
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&unknowns) {
        // A row reduced to 0 = 1.
        return (None, kernel_basis(rows, unknowns));
    }
    let mut particular = F2Vec::zero(unknowns);
    for row in &aug {
        if row.get(unknowns) {
            particular.set(row.first_one().unwrap(), true);
        }
    }
    (Some(particular), kernel_basis(rows, unknowns))
}

/// Basis of { x : rows * x = 0 }.
pub fn kernel_basis(rows: &[F2Vec], unknowns: usize) -> Vec<F2Vec> {
    let mut reduced = rows.to_vec();
    let pivots = rref(&mut reduced);
    let free: Vec<usize> = (0..unknowns).filter(|i| !pivots.contains(i)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = F2Vec::unit(unknowns, f);
        for row in &reduced {
            if row.get(f) {
                v.flip(row.first_one().unwrap());
            }
        }
        basis.push(v);
    }
    basis
}

/// Incremental reducer for an affine system (v_i, eps_i): v_i . x = eps_i.
///
/// Only a reduced spanning set of the rows is kept, so memory stays O(s^2)
/// no matter how many rows are pushed.
#[derive(Clone, Debug)]
pub struct AffineReducer {
    unknowns: usize,
    /// Reduced rows, each augmented with its rhs bit in the last column.
    rows: Vec<F2Vec>,
    inconsistent: bool,
}

impl AffineReducer {
    pub fn new(unknowns: usize) -> Self {
        AffineReducer {
            unknowns,
            rows: Vec::new(),
            inconsistent: false,
        }
    }

    pub fn push(&mut self, v: &F2Vec, eps: bool) {
        assert_eq!(v.len(), self.unknowns);
        let mut row = F2Vec::zero(self.unknowns + 1);
        for i in 0..self.unknowns {
            if v.get(i) {
                row.set(i, true);
            }
        }
        row.set(self.unknowns, eps);
        for b in &self.rows {
            let p = b.first_one().unwrap();
            if p < self.unknowns && row.get(p) {
                row.xor_inplace(b);
            }
        }
        match row.first_one() {
            None => {}
            Some(p) if p == self.unknowns => self.inconsistent = true,
            Some(p) => {
                for b in self.rows.iter_mut() {
                    if b.get(p) {
                        b.xor_inplace(&row);
                    }
                }
                self.rows.push(row);
                self.rows.sort_by_key(|r| r.first_one());
            }
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Row space of the coefficient part (the span of the pushed v_i).
    pub fn coefficient_span(&self) -> Vec<F2Vec> {
        let stripped: Vec<F2Vec> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = F2Vec::zero(self.unknowns);
                for i in 0..self.unknowns {
                    if r.get(i) {
                        v.set(i, true);
                    }
                }
                v
            })
            .collect();
        span_basis(&stripped)
    }

    pub fn span_dim(&self) -> usize {
        self.coefficient_span().len()
    }

    /// Whether x satisfies every pushed equation (false if inconsistent).
    pub fn is_solution(&self, x: &F2Vec) -> bool {
        assert_eq!(x.len(), self.unknowns);
        if self.inconsistent {
            return false;
        }
        self.rows.iter().all(|r| {
            let mut dot = r.get(self.unknowns);
            for i in 0..self.unknowns {
                if r.get(i) && x.get(i) {
                    dot = !dot;
                }
            }
            !dot
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: &[u8]) -> F2Vec {
        F2Vec::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    /// Brute-force oracle: enumerate all of F_2^n and filter.
    fn enumerate_solutions(rows: &[F2Vec], rhs: &[bool], n: usize) -> Vec<F2Vec> {
        assert!(n <= 20);
        let mut out = Vec::new();
        for mask in 0u32..1 << n {
            let x = F2Vec::from_bits(&(0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            if rows.iter().zip(rhs).all(|(r, &e)| r.dot(&x) == e) {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    fn affine_set(particular: &Option<F2Vec>, kernel: &[F2Vec], n: usize) -> Vec<F2Vec> {
        let Some(p) = particular else {
            return Vec::new();
        };
        let k = kernel.len();
        assert!(k <= 20);
        let mut out = Vec::new();
        for mask in 0u32..1 << k {
            let mut x = p.clone();
            for (i, b) in kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x.xor_inplace(b);
                }
            }
            assert_eq!(x.len(), n);
            out.push(x);
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn homogeneous_example_from_gamma1_6() {
        // Rows (1,1,0) and (1,0,1); the only solutions are 000 and 111.
        let rows = vec![v(&[1, 1, 0]), v(&[1, 0, 1])];
        let rhs = vec![false, false];
        let (p, k) = solution_space(&rows, &rhs, 3);
        let sols = affine_set(&p, &k, 3);
        assert_eq!(sols, vec![v(&[0, 0, 0]), v(&[1, 1, 1])]);
    }

    #[test]
    fn empty_system_is_full_space() {
        let (p, k) = solution_space(&[], &[], 3);
        assert_eq!(affine_set(&p, &k, 3).len(), 8);
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![v(&[1, 1]), v(&[1, 1])];
        let (p, _) = solution_space(&rows, &[false, true], 2);
        assert!(p.is_none());
    }

    #[test]
    fn random_systems_match_enumeration() {
        // Deterministic pseudo-random 4x6 systems checked against brute force.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let n = 6;
            let rows: Vec<F2Vec> = (0..4)
                .map(|_| {
                    let r = next();
                    F2Vec::from_bits(&(0..n).map(|i| r >> i & 1 == 1).collect::<Vec<_>>())
                })
                .collect();
            let rhs: Vec<bool> = (0..4).map(|_| next() & 1 == 1).collect();
            let (p, k) = solution_space(&rows, &rhs, n);
            assert_eq!(
                affine_set(&p, &k, n),
                enumerate_solutions(&rows, &rhs, n),
                "rows {rows:?} rhs {rhs:?}"
            );
        }
    }

    #[test]
    fn span_basis_examples() {
        assert!(span_basis(&[v(&[0, 0, 0]), v(&[0, 0, 0])]).is_empty());
        let b = span_basis(&[v(&[0, 1, 0, 0, 1]), v(&[1, 0, 1, 0, 0])]);
        assert_eq!(b.len(), 2);
        assert!(same_span(
            &b,
            &[v(&[1, 0, 1, 0, 0]), v(&[0, 1, 0, 0, 1])]
        ));
        // rref is idempotent.
        assert_eq!(span_basis(&b), b);
    }

    #[test]
    fn affine_reducer_matches_batch_solver() {
        let rows = vec![v(&[1, 1, 0]), v(&[0, 1, 1]), v(&[1, 0, 1])];
        let rhs = [true, false, true];
        let mut red = AffineReducer::new(3);
        for (r, &e) in rows.iter().zip(&rhs) {
            red.push(r, e);
        }
        assert!(!red.is_inconsistent());
        let (p, k) = solution_space(&rows, &rhs, 3);
        for x in affine_set(&p, &k, 3) {
            assert!(red.is_solution(&x));
        }
        assert_eq!(red.span_dim(), 2);

        red.push(&v(&[0, 0, 0]), true);
        assert!(red.is_inconsistent());
    }
}
