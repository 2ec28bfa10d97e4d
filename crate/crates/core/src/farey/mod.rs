//! Signed Farey symbols.
//!
//! A Farey symbol is a sequence of cusps -infty = x_0, x_1, ..., x_{n-1},
//! x_n = infty with consecutive pairs unimodular, together with edge labels:
//! integers occurring in pairs (side pairings), bullets (order-3 self
//! pairings) and circles (order-4 self pairings).  It encodes a fundamental
//! domain of a finite-index subgroup of PSL2(Z) and a generating set.
//!
//! The signed variant carries a sign on every pairing and bullet label.  The
//! sign records which of the two SL2(Z) lifts of the side-pairing generator
//! belongs to the group and thereby pins down a subgroup of SL2(Z) not
//! containing -1.  Circle labels force -1 into the group, so symbols with a
//! circle carry no sign information.

mod build;
mod reduce;

pub use build::{build_farey, BuildOptions};
pub use reduce::{eval_letters, ReducedWord, Reducer, SymbolOracle};

use crate::arith::{Cusp, Mat2};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum FareyError {
    #[error("invalid Farey symbol: {}", issues_text(.0))]
    Invalid(Vec<SymbolIssue>),
    #[error("symbol parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("Farey symbol construction exceeded {0} edges; oracle may not describe a finite-index group")]
    EdgeCapExceeded(usize),
    #[error("constructed symbol has index {got}, expected {expected}")]
    IndexMismatch { got: u64, expected: u64 },
    #[error("word reduction failed to terminate")]
    ReductionStuck,
}

fn issues_text(issues: &[SymbolIssue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One violated clause of Definition-style validity.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolIssue {
    #[error("symbol must start at -infinity (-1/0) and end at infinity (1/0)")]
    EndpointConvention,
    #[error("cusp {0} is not reduced")]
    NotReduced(usize),
    #[error("cusps {0} and {1} are not unimodular consecutive")]
    Unimodularity(usize, usize),
    #[error("need at least two edges")]
    TooShort,
    #[error("label count does not match edge count")]
    LabelCount,
    #[error("pairing id {0} occurs {1} times, expected exactly 2")]
    PairMultiplicity(i64, usize),
    #[error("pairing id {0} yields the identity (degenerate pairing)")]
    DegeneratePairing(i64),
    #[error("bullet on edge {0}: signed matrix does not have order 3")]
    BulletOrder(usize),
    #[error("circle label present but symbol not marked as containing -1")]
    CircleWithoutMinusOne,
    #[error("symbol has non-positive index")]
    NonPositiveIndex,
}

/// Edge label of a signed Farey symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    /// Half of a side pairing; `id` occurs on exactly two edges.
    Pair { id: u32, sign: i8 },
    /// Order-3 self pairing (elliptic point of order 3 behind the edge).
    Bullet { sign: i8 },
    /// Order-4 self pairing; present only when the group contains -1.
    Circle,
}

/// A signed Farey symbol.  Cusps are stored as raw (p, q) pairs with the
/// endpoint convention x_0 = (-1, 0) and x_n = (1, 0); both endpoints denote
/// the cusp at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFareySymbol {
    cusps: Vec<(BigInt, BigInt)>,
    labels: Vec<Label>,
    contains_minus_one: bool,
}

/// Where a generator came from: its edge(s) in the symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Pair { id: u32, e1: usize, e2: usize },
    Bullet { edge: usize },
    Circle { edge: usize },
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub mat: Mat2,
    pub provenance: Provenance,
}

/// Ordered generating set extracted from a symbol.  The order is fixed by the
/// smallest edge index of each label, which makes every downstream table
/// byte-reproducible.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub gens: Vec<Generator>,
    pub contains_minus_one: bool,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn matrices(&self) -> impl Iterator<Item = &Mat2> {
        self.gens.iter().map(|g| &g.mat)
    }

    pub fn bullet_indices(&self) -> Vec<usize> {
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, g)| matches!(g.provenance, Provenance::Bullet { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn circle_indices(&self) -> Vec<usize> {
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, g)| matches!(g.provenance, Provenance::Circle { .. }))
            .map(|(i, _)| i)
            .collect()
    }
}

impl SignedFareySymbol {
    pub fn new(
        cusps: Vec<(BigInt, BigInt)>,
        labels: Vec<Label>,
        contains_minus_one: bool,
    ) -> Self {
        SignedFareySymbol {
            cusps,
            labels,
            contains_minus_one,
        }
    }

    /// Convenience constructor from small integers, used heavily in tests:
    /// interior cusps as (p, q) pairs, labels as signed pair ids with 0
    /// standing in for nothing (use `Label` directly for bullets/circles).
    pub fn from_parts(interior: &[(i64, i64)], labels: Vec<Label>, minus_one: bool) -> Self {
        let mut cusps = vec![(BigInt::from(-1), BigInt::from(0))];
        cusps.extend(
            interior
                .iter()
                .map(|&(p, q)| (BigInt::from(p), BigInt::from(q))),
        );
        cusps.push((BigInt::one(), BigInt::from(0)));
        SignedFareySymbol::new(cusps, labels, minus_one)
    }

    pub fn n_edges(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains_minus_one(&self) -> bool {
        self.contains_minus_one
    }

    /// Raw (p, q) representative of the i-th symbol cusp (0-indexed; includes
    /// both endpoints).
    pub fn cusp_raw(&self, i: usize) -> (&BigInt, &BigInt) {
        (&self.cusps[i].0, &self.cusps[i].1)
    }

    pub fn n_cusps(&self) -> usize {
        self.cusps.len()
    }

    /// The i-th symbol cusp as a normalized cusp (endpoints become infinity).
    pub fn cusp(&self, i: usize) -> Cusp {
        Cusp::new(self.cusps[i].0.clone(), self.cusps[i].1.clone())
    }

    /// Elliptic counts (nu_2, nu_3) = (#circles, #bullets).
    pub fn counts(&self) -> (usize, usize) {
        let nu2 = self
            .labels
            .iter()
            .filter(|l| matches!(l, Label::Circle))
            .count();
        let nu3 = self
            .labels
            .iter()
            .filter(|l| matches!(l, Label::Bullet { .. }))
            .count();
        (nu2, nu3)
    }

    /// Index of the generated group in PSL2(Z): 3n + nu_3 - 6.
    pub fn proj_index(&self) -> u64 {
        let (_, nu3) = self.counts();
        (3 * self.n_edges() + nu3 - 6) as u64
    }

    /// Minimal number of generators delta = mu/6 + 1 + nu_2/2 + nu_3/3,
    /// which for a valid symbol equals the number of labels' generators.
    pub fn min_generators(&self) -> usize {
        let (nu2, nu3) = self.counts();
        let mu = self.proj_index() as usize;
        let six_delta = mu + 6 + 3 * nu2 + 2 * nu3;
        assert_eq!(six_delta % 6, 0, "inconsistent symbol invariants");
        six_delta / 6
    }

    pub fn validate(&self) -> Vec<SymbolIssue> {
        let mut issues = Vec::new();
        let n = self.n_edges();
        if self.cusps.len() < 3 {
            issues.push(SymbolIssue::TooShort);
            return issues;
        }
        if self.cusps.len() != n + 1 {
            issues.push(SymbolIssue::LabelCount);
            return issues;
        }
        let first = &self.cusps[0];
        let last = &self.cusps[self.cusps.len() - 1];
        if !((-&first.0).is_one() && first.1.is_zero() && last.0.is_one() && last.1.is_zero()) {
            issues.push(SymbolIssue::EndpointConvention);
        }
        for (i, (p, q)) in self.cusps.iter().enumerate() {
            if !p.gcd(q).is_one() {
                issues.push(SymbolIssue::NotReduced(i));
            }
        }
        for i in 0..n {
            let (a0, b0) = &self.cusps[i];
            let (a1, b1) = &self.cusps[i + 1];
            if !(a1 * b0 - a0 * b1).is_one() {
                issues.push(SymbolIssue::Unimodularity(i, i + 1));
            }
        }
        if !issues.is_empty() {
            return issues;
        }

        let mut id_edges: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
        for (e, l) in self.labels.iter().enumerate() {
            match *l {
                Label::Pair { id, .. } => id_edges.entry(id).or_default().push(e),
                Label::Bullet { sign } => {
                    let m = signed(&self.bullet_matrix(e), sign);
                    if m.order() != Some(3) {
                        issues.push(SymbolIssue::BulletOrder(e));
                    }
                }
                Label::Circle => {
                    if !self.contains_minus_one {
                        issues.push(SymbolIssue::CircleWithoutMinusOne);
                    }
                }
            }
        }
        for (id, edges) in &id_edges {
            if edges.len() != 2 {
                issues.push(SymbolIssue::PairMultiplicity(i64::from(*id), edges.len()));
            } else if self.pair_matrix(edges[0], edges[1]).is_pm_identity() {
                issues.push(SymbolIssue::DegeneratePairing(i64::from(*id)));
            }
        }
        let (_, nu3) = self.counts();
        if 3 * self.n_edges() + nu3 <= 6 {
            issues.push(SymbolIssue::NonPositiveIndex);
        }
        issues
    }

    /// Unsigned pairing matrix for edges i < j (the sign of the label is
    /// applied separately).  Maps side i to side j of the fundamental domain.
    pub fn pair_matrix(&self, i: usize, j: usize) -> Mat2 {
        assert!(i < j, "pairing order is fixed: i < j");
        let (ai, bi) = &self.cusps[i];
        let (ai1, bi1) = &self.cusps[i + 1];
        let (aj, bj) = &self.cusps[j];
        let (aj1, bj1) = &self.cusps[j + 1];
        Mat2::new(
            aj * bi + aj1 * bi1,
            -(ai1 * aj1 + ai * aj),
            bi * bj + bi1 * bj1,
            -(ai * bj + ai1 * bj1),
        )
    }

    /// Unsigned bullet matrix for edge j; one of the two signs has order 3.
    pub fn bullet_matrix(&self, j: usize) -> Mat2 {
        let (aj, bj) = &self.cusps[j];
        let (aj1, bj1) = &self.cusps[j + 1];
        Mat2::new(
            aj * bj + aj * bj1 + aj1 * bj1,
            -(aj1 * aj1 + aj * aj1 + aj * aj),
            bj * bj + bj * bj1 + bj1 * bj1,
            -(aj * bj + aj1 * bj + aj1 * bj1),
        )
    }

    /// Circle matrix for edge i, of order 4 (its square is -1).
    pub fn circle_matrix(&self, i: usize) -> Mat2 {
        let (ai, bi) = &self.cusps[i];
        let (ai1, bi1) = &self.cusps[i + 1];
        Mat2::new(
            ai * bi + ai1 * bi1,
            -(ai * ai + ai1 * ai1),
            bi * bi + bi1 * bi1,
            -(ai * bi + ai1 * bi1),
        )
    }

    /// Generators in deterministic order (ascending smallest edge index).
    pub fn generators(&self) -> Result<GeneratorSet, FareyError> {
        let issues = self.validate();
        if !issues.is_empty() {
            return Err(FareyError::Invalid(issues));
        }
        let mut partner: std::collections::BTreeMap<u32, usize> = Default::default();
        let mut gens = Vec::new();
        for (e, l) in self.labels.iter().enumerate() {
            match *l {
                Label::Pair { id, sign } => {
                    if let Some(&e1) = partner.get(&id) {
                        gens.push(Generator {
                            mat: signed(&self.pair_matrix(e1, e), sign),
                            provenance: Provenance::Pair { id, e1, e2: e },
                        });
                    } else {
                        partner.insert(id, e);
                    }
                }
                Label::Bullet { sign } => gens.push(Generator {
                    mat: signed(&self.bullet_matrix(e), sign),
                    provenance: Provenance::Bullet { edge: e },
                }),
                Label::Circle => gens.push(Generator {
                    mat: self.circle_matrix(e),
                    provenance: Provenance::Circle { edge: e },
                }),
            }
        }
        // Order generators by their smallest edge index.
        gens.sort_by_key(|g| match g.provenance {
            Provenance::Pair { e1, .. } => e1,
            Provenance::Bullet { edge } | Provenance::Circle { edge } => edge,
        });
        Ok(GeneratorSet {
            gens,
            contains_minus_one: self.contains_minus_one,
        })
    }

    /// Partition of the symbol cusps under the side-pairing identifications.
    /// Classes are listed in order of their smallest cusp index; each class
    /// lists cusp indices ascending.
    pub fn cusp_classes(&self) -> Vec<Vec<usize>> {
        let n = self.cusps.len();
        let mut uf = UnionFind::new(n);
        uf.union(0, n - 1);
        let mut partner: std::collections::BTreeMap<u32, usize> = Default::default();
        for (e, l) in self.labels.iter().enumerate() {
            match *l {
                Label::Pair { id, .. } => {
                    if let Some(&e1) = partner.get(&id) {
                        // The pairing sends x_{e1} to x_{e+1} and x_{e1+1} to x_e.
                        uf.union(e1, e + 1);
                        uf.union(e1 + 1, e);
                    } else {
                        partner.insert(id, e);
                    }
                }
                // Self-pairings swap the edge's endpoints.
                Label::Bullet { .. } | Label::Circle => uf.union(e, e + 1),
            }
        }
        uf.classes()
    }

    /// One representative cusp per class, in class order.
    pub fn cusp_class_representatives(&self) -> Vec<Cusp> {
        self.cusp_classes()
            .iter()
            .map(|class| self.cusp(class[0]))
            .collect()
    }

    /// Serialize to the flat text format (see `parse` for the grammar).
    pub fn serialize(&self) -> String {
        let mut out = String::from("farey-symbol v1\n");
        out.push_str(if self.contains_minus_one {
            "minus-one: yes\n"
        } else {
            "minus-one: no\n"
        });
        out.push_str("cusps:");
        for (p, q) in &self.cusps {
            out.push_str(&format!(" {p}/{q}"));
        }
        out.push_str("\nlabels:");
        for l in &self.labels {
            match *l {
                Label::Pair { id, sign } => {
                    out.push_str(&format!(" {}{}", if sign >= 0 { "+" } else { "-" }, id))
                }
                Label::Bullet { sign } => {
                    out.push_str(if sign >= 0 { " B+" } else { " B-" })
                }
                Label::Circle => out.push_str(" O"),
            }
        }
        out.push('\n');
        out
    }

    /// Parse the text format produced by `serialize`.
    pub fn parse(text: &str) -> Result<Self, FareyError> {
        let err = |line: usize, message: &str| FareyError::Parse {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (ln, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
        if header.trim() != "farey-symbol v1" {
            return Err(err(ln + 1, "unknown header/version"));
        }
        let mut minus_one = None;
        let mut cusps: Option<Vec<(BigInt, BigInt)>> = None;
        let mut labels: Option<Vec<Label>> = None;
        for (ln, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(ln + 1, "expected `key: value`"))?;
            match key.trim() {
                "minus-one" => {
                    minus_one = Some(match value.trim() {
                        "yes" => true,
                        "no" => false,
                        _ => return Err(err(ln + 1, "minus-one must be yes or no")),
                    })
                }
                "cusps" => {
                    let mut v = Vec::new();
                    for tok in value.split_whitespace() {
                        let (p, q) = tok
                            .split_once('/')
                            .ok_or_else(|| err(ln + 1, "cusp must be p/q"))?;
                        let p =
                            p.parse().map_err(|_| err(ln + 1, "bad cusp numerator"))?;
                        let q =
                            q.parse().map_err(|_| err(ln + 1, "bad cusp denominator"))?;
                        v.push((p, q));
                    }
                    cusps = Some(v);
                }
                "labels" => {
                    let mut v = Vec::new();
                    for tok in value.split_whitespace() {
                        let label = match tok {
                            "B+" => Label::Bullet { sign: 1 },
                            "B-" => Label::Bullet { sign: -1 },
                            "O" => Label::Circle,
                            _ => {
                                let id: i64 = tok
                                    .parse()
                                    .map_err(|_| err(ln + 1, "bad label token"))?;
                                if id == 0 {
                                    return Err(err(ln + 1, "pair id must be nonzero"));
                                }
                                Label::Pair {
                                    id: id.unsigned_abs() as u32,
                                    sign: if id > 0 { 1 } else { -1 },
                                }
                            }
                        };
                        v.push(label);
                    }
                    labels = Some(v);
                }
                other => return Err(err(ln + 1, &format!("unknown key `{other}`"))),
            }
        }
        Ok(SignedFareySymbol::new(
            cusps.ok_or_else(|| err(0, "missing cusps"))?,
            labels.ok_or_else(|| err(0, "missing labels"))?,
            minus_one.ok_or_else(|| err(0, "missing minus-one"))?,
        ))
    }
}

impl fmt::Display for SignedFareySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ -oo")?;
        for i in 1..self.cusps.len() {
            let l = match self.labels[i - 1] {
                Label::Pair { id, sign } => {
                    format!("{}{}", if sign >= 0 { "+" } else { "-" }, id)
                }
                Label::Bullet { sign } => {
                    if self.contains_minus_one {
                        "*".to_string()
                    } else if sign >= 0 {
                        "*+".to_string()
                    } else {
                        "*-".to_string()
                    }
                }
                Label::Circle => "o".to_string(),
            };
            if i == self.cusps.len() - 1 {
                write!(f, " ({l}) oo")?;
            } else {
                let (p, q) = &self.cusps[i];
                write!(f, " ({l}) {p}/{q}")?;
            }
        }
        write!(f, " }}")
    }
}

fn signed(m: &Mat2, sign: i8) -> Mat2 {
    if sign >= 0 {
        m.clone()
    } else {
        m.neg()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as the root for deterministic output.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..n {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}

/// Reference Farey symbols for small groups, shared across the tests.
pub mod fixtures {
    use super::{Label, SignedFareySymbol};

    /// Symbol for Gamma_1(4): cusps -oo, 0, 1/2, 1, oo; labels +1 -2 -2 +1.
    pub fn gamma1_4() -> SignedFareySymbol {
        SignedFareySymbol::from_parts(
            &[(0, 1), (1, 2), (1, 1)],
            vec![
                Label::Pair { id: 1, sign: 1 },
                Label::Pair { id: 2, sign: -1 },
                Label::Pair { id: 2, sign: -1 },
                Label::Pair { id: 1, sign: 1 },
            ],
            false,
        )
    }

    /// Symbol for Gamma_1(6): cusps -oo, 0, 1/3, 1/2, 2/3, 1, oo.
    pub fn gamma1_6() -> SignedFareySymbol {
        SignedFareySymbol::from_parts(
            &[(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)],
            vec![
                Label::Pair { id: 1, sign: 1 },
                Label::Pair { id: 2, sign: -1 },
                Label::Pair { id: 3, sign: 1 },
                Label::Pair { id: 3, sign: 1 },
                Label::Pair { id: 2, sign: -1 },
                Label::Pair { id: 1, sign: 1 },
            ],
            false,
        )
    }

    /// Ten-edge symbol for Gamma(4) over cusps -2 .. 2.
    pub fn gamma_4() -> SignedFareySymbol {
        SignedFareySymbol::from_parts(
            &[
                (-2, 1),
                (-3, 2),
                (-1, 1),
                (-1, 2),
                (0, 1),
                (1, 2),
                (1, 1),
                (3, 2),
                (2, 1),
            ],
            vec![
                Label::Pair { id: 1, sign: 1 },
                Label::Pair { id: 2, sign: -1 },
                Label::Pair { id: 3, sign: 1 },
                Label::Pair { id: 3, sign: 1 },
                Label::Pair { id: 4, sign: 1 },
                Label::Pair { id: 4, sign: 1 },
                Label::Pair { id: 5, sign: 1 },
                Label::Pair { id: 5, sign: 1 },
                Label::Pair { id: 2, sign: -1 },
                Label::Pair { id: 1, sign: 1 },
            ],
            false,
        )
    }
}
