//! Construction of a signed Farey symbol from a membership oracle.
//!
//! Starting from the cusp list {-infty, 0, infty}, every unlabeled edge is
//! tested in order for a bullet self-pairing, a circle self-pairing (only
//! admissible when -1 is in the group) and a pairing with every other
//! unlabeled edge; when nothing matches, the leftmost unlabeled edge is
//! subdivided at its Farey mediant.  Signs are taken from strict membership.
//!
//! For a principal group Gamma(M) the pairing test g = E_j S^-1 E_i^-1 = +-I
//! (mod M) factors through the per-edge residue matrices E_e mod M, so
//! partners are found by hash lookup instead of a quadratic scan.  The big
//! symbols (Gamma(32), Gamma(40), Gamma(46)) are built this way.

use super::{FareyError, Label, SignedFareySymbol};
use crate::arith::Mat2;
use crate::groups::Member;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Abort if the symbol grows beyond this many edges.
    pub max_edges: usize,
    /// Verify the finished symbol has exactly this projective index.
    pub expected_index: Option<u64>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_edges: 200_000,
            expected_index: None,
        }
    }
}

type Residues = [u64; 4];

struct EdgeMemo {
    /// Sign making the bullet matrix order 3, when it is projectively in the group.
    bullet: Option<i8>,
    circle: bool,
    /// canon(E_e mod M) and canon(E_e S^-1 mod M) for the principal fast path.
    key_i: Option<Residues>,
    key_j: Option<Residues>,
}

struct Builder<'a> {
    oracle: &'a dyn Member,
    minus_one: bool,
    principal: Option<u32>,
    cusps: Vec<(BigInt, BigInt)>,
    labels: Vec<Option<Label>>,
    memo: Vec<EdgeMemo>,
    next_pair_id: u32,
}

/// Build a signed Farey symbol for the group described by `oracle`.
pub fn build_farey(
    oracle: &dyn Member,
    opts: &BuildOptions,
) -> Result<SignedFareySymbol, FareyError> {
    let minus_one = oracle.contains(&Mat2::identity().neg());

    // PSL2(Z) itself: the smallest special polygon has one circle and one
    // bullet edge.  The greedy labeling below cannot see this case (both
    // self-pairings pass on both initial edges), so it is fixed here.
    let order2 = Mat2::s();
    let order3 = Mat2::from_i64(0, -1, 1, -1);
    if oracle.contains_proj(&order2) && oracle.contains_proj(&order3) {
        let sym = SignedFareySymbol::from_parts(
            &[(0, 1)],
            vec![Label::Circle, Label::Bullet { sign: 1 }],
            true,
        );
        debug_assert!(sym.validate().is_empty());
        return Ok(sym);
    }

    let mut b = Builder {
        oracle,
        minus_one,
        principal: oracle.principal_modulus(),
        cusps: vec![
            (BigInt::from(-1), BigInt::from(0)),
            (BigInt::from(0), BigInt::one()),
            (BigInt::one(), BigInt::from(0)),
        ],
        labels: vec![None, None],
        memo: Vec::new(),
        next_pair_id: 1,
    };
    b.memo = vec![b.edge_memo(0), b.edge_memo(1)];
    b.run(opts)?;

    let sym = SignedFareySymbol::new(
        b.cusps,
        b.labels.into_iter().map(Option::unwrap).collect(),
        minus_one,
    );
    let issues = sym.validate();
    if !issues.is_empty() {
        return Err(FareyError::Invalid(issues));
    }
    if let Some(expected) = opts.expected_index {
        let got = sym.proj_index();
        if got != expected {
            return Err(FareyError::IndexMismatch { got, expected });
        }
    }
    Ok(sym)
}

impl Builder<'_> {
    fn run(&mut self, opts: &BuildOptions) -> Result<(), FareyError> {
        loop {
            let mut progress = false;
            let mut remaining = 0usize;
            let lookup = self.principal.map(|m| self.build_lookup(m));
            for e in 0..self.labels.len() {
                if self.labels[e].is_some() {
                    continue;
                }
                if let Some(sign) = self.memo[e].bullet {
                    self.labels[e] = Some(Label::Bullet { sign });
                    progress = true;
                    continue;
                }
                if self.memo[e].circle {
                    self.labels[e] = Some(Label::Circle);
                    progress = true;
                    continue;
                }
                if let Some(f) = self.find_partner(e, lookup.as_ref()) {
                    let (i, j) = (e.min(f), e.max(f));
                    let sign = self.pair_sign(i, j);
                    let id = self.next_pair_id;
                    self.next_pair_id += 1;
                    self.labels[i] = Some(Label::Pair { id, sign });
                    self.labels[j] = Some(Label::Pair { id, sign });
                    progress = true;
                    continue;
                }
                remaining += 1;
            }
            if remaining == 0 && !self.labels.iter().any(Option::is_none) {
                return Ok(());
            }
            if !progress {
                // Subdivide the unlabeled edge whose mediant has the smallest
                // denominator, leftmost on ties.  (Always drilling the
                // leftmost edge nests mediants and grows cusp denominators
                // exponentially on the principal groups.)
                let chosen = (0..self.labels.len())
                    .filter(|&e| self.labels[e].is_none())
                    .min_by_key(|&e| self.cusps[e].1.clone() + &self.cusps[e + 1].1)
                    .expect("unlabeled edge exists");
                self.subdivide(chosen);
                if self.labels.len() > opts.max_edges {
                    return Err(FareyError::EdgeCapExceeded(opts.max_edges));
                }
                if self.labels.len() % 512 == 0 {
                    log::debug!("farey build: {} edges so far", self.labels.len());
                }
            }
        }
    }

    /// Insert the Farey mediant into edge e.
    fn subdivide(&mut self, e: usize) {
        let med = (
            &self.cusps[e].0 + &self.cusps[e + 1].0,
            &self.cusps[e].1 + &self.cusps[e + 1].1,
        );
        self.cusps.insert(e + 1, med);
        self.labels.insert(e + 1, None);
        self.memo[e] = self.edge_memo(e);
        self.memo.insert(e + 1, self.edge_memo(e + 1));
    }

    fn edge_memo(&self, e: usize) -> EdgeMemo {
        let (key_i, key_j) = match self.principal {
            Some(m) => (
                Some(self.canon_key(e, m, false)),
                Some(self.canon_key(e, m, true)),
            ),
            None => (None, None),
        };
        // Principal groups of modulus >= 2 are torsion-free; skip the
        // elliptic tests there.
        let (bullet, circle) = if self.principal.is_some() {
            (None, false)
        } else {
            let bullet_raw = self.bullet_matrix(e);
            let bullet = if self.oracle.contains_proj(&bullet_raw) {
                let sign = if bullet_raw.order() == Some(3) { 1 } else { -1 };
                debug_assert_eq!(
                    if sign == 1 {
                        bullet_raw.order()
                    } else {
                        bullet_raw.neg().order()
                    },
                    Some(3)
                );
                Some(sign)
            } else {
                None
            };
            let circle = self.minus_one && self.oracle.contains_proj(&self.circle_matrix(e));
            (bullet, circle)
        };
        EdgeMemo {
            bullet,
            circle,
            key_i,
            key_j,
        }
    }

    /// Residue key of E_e (or E_e S^-1), canonicalized under negation.
    fn canon_key(&self, e: usize, m: u32, apply_s_inv: bool) -> Residues {
        let (p0, q0) = &self.cusps[e];
        let (p1, q1) = &self.cusps[e + 1];
        // E_e = [[p0, p1], [q0, q1]]; E_e S^-1 = [[-p1, p0], [-q1, q0]].
        let (a, b, c, d) = if apply_s_inv {
            (-p1, p0.clone(), -q1, q0.clone())
        } else {
            (p0.clone(), p1.clone(), q0.clone(), q1.clone())
        };
        let mb = BigInt::from(m);
        let r = |x: &BigInt| u64::try_from(x.mod_floor(&mb)).unwrap();
        let key = [r(&a), r(&b), r(&c), r(&d)];
        let m64 = u64::from(m);
        let neg = [
            (m64 - key[0]) % m64,
            (m64 - key[1]) % m64,
            (m64 - key[2]) % m64,
            (m64 - key[3]) % m64,
        ];
        key.min(neg)
    }

    fn build_lookup(&self, _m: u32) -> HashMap<Residues, Vec<usize>> {
        let mut map: HashMap<Residues, Vec<usize>> = HashMap::new();
        for e in 0..self.labels.len() {
            if self.labels[e].is_none() {
                map.entry(self.memo[e].key_i.unwrap()).or_default().push(e);
            }
        }
        map
    }

    /// Smallest-index unlabeled partner of edge e, if any.
    fn find_partner(&self, e: usize, lookup: Option<&HashMap<Residues, Vec<usize>>>) -> Option<usize> {
        if let Some(map) = lookup {
            // e in the j slot pairs with f in the i slot iff
            // canon(E_e S^-1) == canon(E_f); by symmetry of projective
            // membership under inversion this finds every partner.
            let candidates = map.get(&self.memo[e].key_j.unwrap())?;
            for &f in candidates {
                if f != e && self.labels[f].is_none() && self.admissible_pair(e, f) {
                    return Some(f);
                }
            }
            None
        } else {
            (0..self.labels.len()).find(|&f| {
                f != e
                    && self.labels[f].is_none()
                    && self.admissible_pair(e, f)
                    && self
                        .oracle
                        .contains_proj(&self.pair_matrix(e.min(f), e.max(f)))
            })
        }
    }

    /// Excludes the degenerate +-identity pairing of the two initial edges.
    fn admissible_pair(&self, e: usize, f: usize) -> bool {
        !self.pair_matrix(e.min(f), e.max(f)).is_pm_identity()
    }

    fn pair_sign(&self, i: usize, j: usize) -> i8 {
        if self.minus_one {
            return 1;
        }
        let g = self.pair_matrix(i, j);
        if self.oracle.contains(&g) {
            1
        } else {
            debug_assert!(self.oracle.contains(&g.neg()), "projective member without strict sign");
            -1
        }
    }

    fn pair_matrix(&self, i: usize, j: usize) -> Mat2 {
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

    fn bullet_matrix(&self, e: usize) -> Mat2 {
        let (aj, bj) = &self.cusps[e];
        let (aj1, bj1) = &self.cusps[e + 1];
        Mat2::new(
            aj * bj + aj * bj1 + aj1 * bj1,
            -(aj1 * aj1 + aj * aj1 + aj * aj),
            bj * bj + bj * bj1 + bj1 * bj1,
            -(aj * bj + aj1 * bj + aj1 * bj1),
        )
    }

    fn circle_matrix(&self, e: usize) -> Mat2 {
        let (ai, bi) = &self.cusps[e];
        let (ai1, bi1) = &self.cusps[e + 1];
        Mat2::new(
            ai * bi + ai1 * bi1,
            -(ai * ai + ai1 * ai1),
            bi * bi + bi1 * bi1,
            -(ai * bi + ai1 * bi1),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupSpec, StandardOracle};

    fn build(spec: &str) -> SignedFareySymbol {
        let spec: GroupSpec = spec.parse().unwrap();
        let oracle = StandardOracle::new(&spec).unwrap();
        let opts = BuildOptions {
            expected_index: Some(spec.proj_index().unwrap()),
            ..Default::default()
        };
        build_farey(&oracle, &opts).unwrap()
    }

    #[test]
    fn full_group_symbol() {
        let sym = build("full");
        assert_eq!(sym.proj_index(), 1);
        assert_eq!(sym.counts(), (1, 1));
        assert!(sym.contains_minus_one());
    }

    #[test]
    fn gamma0_2_has_one_circle() {
        let sym = build("gamma0:2");
        assert_eq!(sym.proj_index(), 3);
        assert_eq!(sym.counts(), (1, 0));
    }

    #[test]
    fn gamma0_3_has_one_bullet() {
        let sym = build("gamma0:3");
        assert_eq!(sym.proj_index(), 4);
        assert_eq!(sym.counts(), (0, 1));
    }

    #[test]
    fn gamma0_7_has_two_bullets() {
        let sym = build("gamma0:7");
        assert_eq!(sym.proj_index(), 8);
        assert_eq!(sym.counts(), (0, 2));
    }

    #[test]
    fn gamma1_4_build_matches_index_and_strict_signs() {
        use crate::groups::Member;
        let sym = build("gamma1:4");
        assert_eq!(sym.proj_index(), 6);
        assert!(!sym.contains_minus_one());
        let oracle = StandardOracle::new(&"gamma1:4".parse().unwrap()).unwrap();
        for g in sym.generators().unwrap().matrices() {
            assert!(oracle.contains(g), "{g} not strictly in Gamma_1(4)");
        }
    }

    #[test]
    fn principal_fast_path_matches_generic() {
        // Build Gamma(4) with and without the hashed pairing search.
        struct NoFast(StandardOracle);
        impl Member for NoFast {
            fn contains(&self, m: &Mat2) -> bool {
                self.0.contains(m)
            }
        }
        let spec: GroupSpec = "gamma:4".parse().unwrap();
        let oracle = StandardOracle::new(&spec).unwrap();
        let opts = BuildOptions {
            expected_index: Some(24),
            ..Default::default()
        };
        let fast = build_farey(&oracle, &opts).unwrap();
        let slow = build_farey(&NoFast(oracle), &opts).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn gamma_6_build() {
        let sym = build("gamma:6");
        assert_eq!(sym.proj_index(), 72);
        assert_eq!(sym.counts(), (0, 0));
        assert_eq!(sym.min_generators(), 13);
    }

    use crate::groups::Member;
}
