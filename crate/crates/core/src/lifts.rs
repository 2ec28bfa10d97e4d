//! Enumeration and congruence classification of the lifts of a projective
//! group to SL2(Z).
//!
//! For a group Gamma-bar of PSL2(Z) with signed Farey generators g_1..g_s and
//! no order-2 elliptic points, the lifts not containing -1 are the subgroups
//! Gamma_X = < (-1)^{x_i} g_i > for sign vectors X with x_j = 0 on every
//! bullet generator (2^{s - nu_3} of them), plus one more lift: the full
//! preimage, which contains -1.  If the group has an order-2 elliptic point,
//! the full preimage is the only lift.
//!
//! A lift contains Gamma(M) iff X solves the mod-2 system built by writing
//! each generator h_i of Gamma(M) as a word over the g_j: row = occurrence
//! parities, right-hand side = the residual sign of the rewriting.  With N
//! the general level, a congruence lift has level N or 2N, so testing
//! M = N and M = 2N decides the classification completely.

use crate::arith::Mat2;
use crate::exec::{map_batch, map_batch_seq};
use crate::f2::{AffineReducer, F2Vec};
use crate::farey::{FareyError, GeneratorSet, ReducedWord};
use crate::groups::{stabilizer_witness, GroupError, GroupSpec};
use crate::modforms;
use crate::prepared::{
    prepare_with, Error, GroupInvariants, PreparedGroup, SymbolProvider,
};

/// Relation parity data of a symbol's presentation: one row per bullet
/// generator (from g^3 = 1); circles force -1 and bypass lift enumeration.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub n_generators: usize,
    pub relation_rows: Vec<F2Vec>,
    pub bullet_indices: Vec<usize>,
    pub nu2: usize,
}

pub fn presentation(gens: &GeneratorSet) -> Presentation {
    let s = gens.len();
    let bullet_indices = gens.bullet_indices();
    let relation_rows = bullet_indices
        .iter()
        .map(|&j| F2Vec::unit(s, j))
        .collect();
    Presentation {
        n_generators: s,
        relation_rows,
        bullet_indices,
        nu2: gens.circle_indices().len(),
    }
}

/// All lifts of the projective group, before classification: every solution
/// of the relation parity system as a sign vector, plus `None` for the full
/// preimage (the one lift containing -1).  When the group has an order-2
/// elliptic point the preimage is the only lift.
pub fn enumerate_lifts(pres: &Presentation) -> Vec<Option<F2Vec>> {
    let mut out: Vec<Option<F2Vec>> = enumerate_sign_vectors(pres).into_iter().map(Some).collect();
    out.push(None);
    out
}

/// Sign vectors of the lifts not containing -1, in binary counting order
/// with the first generator as the most significant bit.  Empty when the
/// group has an order-2 elliptic point.
pub fn enumerate_sign_vectors(pres: &Presentation) -> Vec<F2Vec> {
    if pres.nu2 > 0 {
        return Vec::new();
    }
    let s = pres.n_generators;
    let free: Vec<usize> = (0..s)
        .filter(|i| !pres.bullet_indices.contains(i))
        .collect();
    let k = free.len();
    assert!(k <= 24, "too many free generators to enumerate lifts");
    (0..1u64 << k)
        .map(|mask| {
            let mut x = F2Vec::zero(s);
            for (pos, &i) in free.iter().enumerate() {
                if mask >> (k - 1 - pos) & 1 == 1 {
                    x.set(i, true);
                }
            }
            x
        })
        .collect()
}

/// The mod-2 linear system deciding which lifts contain Gamma(M).
#[derive(Clone, Debug)]
pub struct SigmaSystem {
    pub modulus: u32,
    /// Number of Gamma(M) generators that were rewritten.
    pub n_generators: usize,
    /// False iff some Gamma(M) generator is not projectively in the base
    /// group, i.e. no lift at all contains Gamma(M).
    pub feasible: bool,
    /// Row-reduced basis of the span V of the occurrence-parity rows.
    pub span: Vec<F2Vec>,
    system: AffineReducer,
}

impl SigmaSystem {
    /// Does the lift named by x contain Gamma(M)?
    pub fn admits(&self, x: &F2Vec) -> bool {
        self.feasible && self.system.is_solution(x)
    }

    pub fn span_dim(&self) -> usize {
        self.span.len()
    }
}

/// Generating matrices of the principal congruence group Gamma(M), obtained
/// from the Farey symbol of its projective image with canonical signs.  For
/// M <= 2 the list includes -1 (which then belongs to Gamma(M)).
pub fn principal_generators(
    m: u32,
    provider: &dyn SymbolProvider,
) -> Result<Vec<Mat2>, Error> {
    let sym = provider.symbol_for(&GroupSpec::Gamma(m))?;
    let gens = sym.generators()?;
    let mut mats: Vec<Mat2> = gens.matrices().cloned().collect();
    if m <= 2 {
        mats.push(Mat2::identity().neg());
    } else {
        for g in &mats {
            if g.residues(m) != [1 % u64::from(m), 0, 0, 1 % u64::from(m)] {
                return Err(Error::Inconsistency(format!(
                    "symbol generator {g} is not congruent to 1 mod {m}"
                )));
            }
        }
    }
    Ok(mats)
}

/// Build the sigma system of the base group for modulus M.
pub fn sigma_system(
    base: &PreparedGroup,
    m: u32,
    provider: &dyn SymbolProvider,
) -> Result<SigmaSystem, Error> {
    sigma_system_impl(base, m, provider, true)
}

/// Sequential twin of `sigma_system`, used by the benchmark suite.
pub fn sigma_system_seq(
    base: &PreparedGroup,
    m: u32,
    provider: &dyn SymbolProvider,
) -> Result<SigmaSystem, Error> {
    sigma_system_impl(base, m, provider, false)
}

fn sigma_system_impl(
    base: &PreparedGroup,
    m: u32,
    provider: &dyn SymbolProvider,
    parallel: bool,
) -> Result<SigmaSystem, Error> {
    let hs = principal_generators(m, provider)?;
    let s = base.n_generators();
    log::info!(
        "rewriting {} generators of Gamma({m}) over {} ({} base generators)",
        hs.len(),
        base.spec,
        s
    );
    let reduce = |h: &Mat2| base.reducer.reduce(h);
    let words: Vec<Result<ReducedWord, FareyError>> = if parallel {
        map_batch(&hs, reduce)
    } else {
        map_batch_seq(&hs, reduce)
    };
    let mut system = AffineReducer::new(s);
    let mut feasible = true;
    for w in words {
        let w = w?;
        if !w.member {
            feasible = false;
            break;
        }
        system.push(&w.occurrences(s), w.sign < 0);
    }
    let span = if feasible {
        system.coefficient_span()
    } else {
        Vec::new()
    };
    Ok(SigmaSystem {
        modulus: m,
        n_generators: hs.len(),
        feasible,
        span,
        system,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftClass {
    Congruence { level: u32 },
    Noncongruence,
    /// The full preimage of the projective group; contains -1.
    ContainsMinusOne { level: Option<u32> },
}

impl LiftClass {
    pub fn is_congruence(&self) -> bool {
        matches!(
            self,
            LiftClass::Congruence { .. } | LiftClass::ContainsMinusOne { level: Some(_) }
        )
    }

    pub fn level(&self) -> Option<u32> {
        match self {
            LiftClass::Congruence { level } => Some(*level),
            LiftClass::ContainsMinusOne { level } => *level,
            LiftClass::Noncongruence => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftDescriptor {
    /// Sign vector over the base generators; None for the full preimage.
    pub signs: Option<F2Vec>,
    pub class: LiftClass,
    /// Cusp regularity per cusp class of the base symbol.
    pub regular: Vec<bool>,
    pub dim_s3: i64,
    pub dim_s5: i64,
}

/// Full classification of all lifts of the projective image of a group.
pub struct Classification {
    pub base: PreparedGroup,
    pub general_level: u32,
    pub sys_level: SigmaSystem,
    pub sys_double: SigmaSystem,
    /// Sign-vector lifts in enumeration order, then the full preimage last.
    pub lifts: Vec<LiftDescriptor>,
}

impl Classification {
    pub fn invariants(&self) -> &GroupInvariants {
        &self.base.invariants
    }

    /// Sign-vector lifts only (excludes the preimage entry).
    pub fn sign_lifts(&self) -> impl Iterator<Item = &LiftDescriptor> {
        self.lifts.iter().filter(|l| l.signs.is_some())
    }

    /// Total number of congruence lifts, the preimage included.
    pub fn congruence_count(&self) -> u64 {
        self.lifts.iter().filter(|l| l.class.is_congruence()).count() as u64
    }

    pub fn noncongruence_count(&self) -> u64 {
        self.lifts
            .iter()
            .filter(|l| l.class == LiftClass::Noncongruence)
            .count() as u64
    }

    pub fn count_at_level(&self, level: u32) -> u64 {
        self.sign_lifts()
            .filter(|l| l.class == LiftClass::Congruence { level })
            .count() as u64
    }

    /// The descriptor whose sign vector is x.
    pub fn lift_by_signs(&self, x: &F2Vec) -> Option<&LiftDescriptor> {
        self.lifts.iter().find(|l| l.signs.as_ref() == Some(x))
    }
}

pub fn classify_lifts(
    spec: &GroupSpec,
    provider: &dyn SymbolProvider,
) -> Result<Classification, Error> {
    let base = prepare_with(spec, provider)?;
    let n = base.invariants.general_level;
    let sys_level = sigma_system(&base, n, provider)?;
    let sys_double = sigma_system(&base, 2 * n, provider)?;

    // Regularity of a cusp class in the lift X depends only on the reduced
    // word of the class's stabilizer witness: reduce once per class here.
    let witness_words: Vec<ReducedWord> = base
        .invariants
        .cusp_classes
        .iter()
        .map(|c| {
            let w = base
                .reducer
                .reduce(&stabilizer_witness(&c.representative, c.width))?;
            if !w.member {
                return Err(Error::Inconsistency(format!(
                    "stabilizer witness of cusp {} is not projectively in the group",
                    c.representative
                )));
            }
            Ok(w)
        })
        .collect::<Result<_, Error>>()?;

    let s = base.n_generators();
    let pres = presentation(base.reducer.generators());
    let inv = &base.invariants;

    let mut lifts = Vec::new();
    for x in enumerate_sign_vectors(&pres) {
        let class = if sys_level.admits(&x) {
            LiftClass::Congruence { level: n }
        } else if sys_double.admits(&x) {
            LiftClass::Congruence { level: 2 * n }
        } else {
            LiftClass::Noncongruence
        };
        let regular: Vec<bool> = witness_words
            .iter()
            .map(|w| x.dot(&w.occurrences(s)) == (w.sign < 0))
            .collect();
        let nu_inf_plus = regular.iter().filter(|&&r| r).count();
        let dim_s3 = modforms::dim_odd_weight(inv, nu_inf_plus, 3);
        let dim_s5 = modforms::dim_odd_weight(inv, nu_inf_plus, 5);
        lifts.push(LiftDescriptor {
            signs: Some(x),
            class,
            regular,
            dim_s3,
            dim_s5,
        });
    }

    // The full preimage contains Gamma(M) iff every Gamma(M) generator is
    // projectively in the group, which is exactly feasibility.
    let preimage_level = if sys_level.feasible {
        Some(n)
    } else if sys_double.feasible {
        Some(2 * n)
    } else {
        None
    };
    lifts.push(LiftDescriptor {
        signs: None,
        class: LiftClass::ContainsMinusOne {
            level: preimage_level,
        },
        regular: vec![true; inv.nu_inf],
        dim_s3: 0,
        dim_s5: 0,
    });

    Ok(Classification {
        base,
        general_level: n,
        sys_level,
        sys_double,
        lifts,
    })
}

/// Closed-form counts from the classification theorems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountPrediction {
    /// Number of congruence lifts (the preimage counts once).
    pub congruence: u64,
    /// Number of noncongruence lifts, when a closed form is stated
    /// (Gamma_0(p) for primes p > 3 congruent to 3 mod 4, and p = 3).
    pub noncongruence: Option<u64>,
    /// Rademacher's generator count s = 2 floor(p/12) + 3 for p > 3.
    pub rademacher_s: Option<u32>,
}

/// Theorem-level predictions: the count n(N) of congruence lifts of
/// Gamma(N)-bar, the three congruence lifts of Gamma_0(p^r)-bar for
/// p = 3 mod 4, and the noncongruence counts for Gamma_0(p)-bar.
pub fn predicted_counts(spec: &GroupSpec) -> Result<CountPrediction, GroupError> {
    spec.validate()?;
    match *spec {
        GroupSpec::Full | GroupSpec::Gamma(1) => Ok(CountPrediction {
            congruence: 1,
            noncongruence: Some(0),
            rademacher_s: None,
        }),
        GroupSpec::Gamma(2) => Ok(CountPrediction {
            congruence: 5,
            noncongruence: Some(0),
            rademacher_s: None,
        }),
        GroupSpec::Gamma(n) => Ok(CountPrediction {
            congruence: if n % 2 == 1 { 3 } else { 9 },
            noncongruence: None,
            rademacher_s: None,
        }),
        GroupSpec::Gamma0(n) => {
            let f = crate::groups::factorize(n);
            if f.len() != 1 || f[0].0 % 4 != 3 {
                return Err(GroupError::NoPrediction(format!(
                    "{spec} (need an odd prime power p^r with p = 3 mod 4)"
                )));
            }
            let (p, r) = f[0];
            let (noncongruence, rademacher_s) = if r == 1 && p == 3 {
                (Some(0), None)
            } else if r == 1 {
                let s = 2 * (p / 12) + 3;
                let count = if p % 12 == 7 {
                    (1u64 << (s - 2)) - 2
                } else {
                    (1u64 << s) - 2
                };
                (Some(count), Some(s))
            } else {
                (None, None)
            };
            Ok(CountPrediction {
                congruence: 3,
                noncongruence,
                rademacher_s,
            })
        }
        _ => Err(GroupError::NoPrediction(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::fixtures;
    use crate::prepared::FreshSymbols;

    fn classify(spec: GroupSpec) -> Classification {
        classify_lifts(&spec, &FreshSymbols).unwrap()
    }

    fn bits(b: &[u8]) -> F2Vec {
        F2Vec::from_bits(&b.iter().map(|&x| x == 1).collect::<Vec<_>>())
    }

    #[test]
    fn gamma1_6_reference_symbol_classification() {
        // Over the reference symbol the generators are (T, A, B) in this order.
        let c = classify(GroupSpec::FromFarey(Box::new(fixtures::gamma1_6())));
        assert_eq!(c.general_level, 6);
        assert_eq!(c.sign_lifts().count(), 8);
        assert_eq!(c.count_at_level(6), 2);
        assert_eq!(c.count_at_level(12), 2);
        assert_eq!(c.noncongruence_count(), 4);
        // <T,A,B> and <-T,-A,-B> are the level-6 lifts.
        assert_eq!(
            c.lift_by_signs(&bits(&[0, 0, 0])).unwrap().class,
            LiftClass::Congruence { level: 6 }
        );
        assert_eq!(
            c.lift_by_signs(&bits(&[1, 1, 1])).unwrap().class,
            LiftClass::Congruence { level: 6 }
        );
        // <T,-A,B> and <-T,A,-B> are the level-12 lifts.
        assert_eq!(
            c.lift_by_signs(&bits(&[0, 1, 0])).unwrap().class,
            LiftClass::Congruence { level: 12 }
        );
        assert_eq!(
            c.lift_by_signs(&bits(&[1, 0, 1])).unwrap().class,
            LiftClass::Congruence { level: 12 }
        );
        // <-T,A,B> is noncongruence.
        assert_eq!(
            c.lift_by_signs(&bits(&[1, 0, 0])).unwrap().class,
            LiftClass::Noncongruence
        );
        // The preimage is Gamma_0(6)-like: congruence of level 6.
        assert_eq!(
            c.lifts.last().unwrap().class,
            LiftClass::ContainsMinusOne { level: Some(6) }
        );
        // Spans in (T, A, B) coordinates: V_6 is spanned by A+B and A+T,
        // V_12 by T+B.
        assert!(crate::f2::same_span(
            &c.sys_level.span,
            &[bits(&[0, 1, 1]), bits(&[1, 1, 0])]
        ));
        assert!(crate::f2::same_span(&c.sys_double.span, &[bits(&[1, 0, 1])]));
    }

    #[test]
    fn gamma1_4_reference_symbol_levels() {
        let c = classify(GroupSpec::FromFarey(Box::new(fixtures::gamma1_4())));
        assert_eq!(c.general_level, 4);
        let levels: Vec<Option<u32>> = c.sign_lifts().map(|l| l.class.level()).collect();
        assert_eq!(
            levels,
            vec![Some(4), Some(8), Some(8), Some(4)],
            "G1..G4 have levels 4, 8, 8, 4"
        );
    }

    #[test]
    fn member_in_lift_signs() {
        // TBA^2 generates the Gamma(12) row; it lies in <-T,A,-B> but not in
        // the noncongruence lift <-T,A,B>.
        let p = crate::prepared::prepare(&GroupSpec::FromFarey(Box::new(fixtures::gamma1_6())))
            .unwrap();
        let h = Mat2::from_i64(169, -36, 108, -23);
        assert!(p.reducer.member_in_lift(&bits(&[1, 0, 1]), &h).unwrap());
        assert!(!p.reducer.member_in_lift(&bits(&[1, 0, 0]), &h).unwrap());
        // <T,A,B> contains A but not -A.
        let a = Mat2::from_i64(-5, 1, -6, 1);
        assert!(p.reducer.member_in_lift(&bits(&[0, 0, 0]), &a).unwrap());
        assert!(!p
            .reducer
            .member_in_lift(&bits(&[0, 0, 0]), &a.neg())
            .unwrap());
    }

    #[test]
    fn lift_enumeration_counts() {
        let pres_of = |spec: &str| {
            let p = crate::prepared::prepare(&spec.parse().unwrap()).unwrap();
            presentation(p.reducer.generators())
        };
        // Three free generators: 8 sign-vector lifts plus the preimage.
        let lifts = enumerate_lifts(&pres_of("gamma1:6"));
        assert_eq!(lifts.len(), 9);
        assert_eq!(lifts.iter().filter(|l| l.is_some()).count(), 8);
        // One free generator and one bullet: two sign-vector lifts.
        let lifts = enumerate_lifts(&pres_of("gamma0:3"));
        assert_eq!(lifts.iter().filter(|l| l.is_some()).count(), 2);
        // An order-4 element exists (x^2 = -1 mod 5 solvable): only the
        // preimage.
        let lifts = enumerate_lifts(&pres_of("gamma0:5"));
        assert_eq!(lifts, vec![None]);
    }

    #[test]
    fn gamma4_reference_lift_contains_its_generator() {
        // The all-plus lift of the Gamma(4)-bar symbol is Gamma(4) itself.
        let p = crate::prepared::prepare(&"gamma:4".parse().unwrap()).unwrap();
        let x = F2Vec::zero(p.n_generators());
        let h = Mat2::from_i64(-7, 12, 4, -7);
        assert!(p.reducer.member_in_lift(&x, &h).unwrap());
        assert!(!p.reducer.member_in_lift(&x, &h.neg()).unwrap());
    }

    #[test]
    fn gamma0_3_has_two_sign_lifts_both_congruence() {
        let c = classify("gamma0:3".parse().unwrap());
        assert_eq!(c.sign_lifts().count(), 2);
        assert_eq!(c.congruence_count(), 3);
        assert_eq!(c.noncongruence_count(), 0);
    }

    #[test]
    fn gamma0_5_has_order_4_element_so_only_the_preimage() {
        let c = classify("gamma0:5".parse().unwrap());
        assert_eq!(c.sign_lifts().count(), 0);
        assert_eq!(c.lifts.len(), 1);
        assert_eq!(
            c.lifts[0].class,
            LiftClass::ContainsMinusOne { level: Some(5) }
        );
    }

    #[test]
    fn lift_count_is_two_to_delta_minus_nu3() {
        for spec in ["gamma1:4", "gamma0:3", "gamma0:7", "gamma0:9"] {
            let c = classify(spec.parse().unwrap());
            let inv = c.invariants();
            if inv.nu2 == 0 {
                let expected = 1u64 << (inv.min_generators - inv.nu3);
                assert_eq!(c.sign_lifts().count() as u64, expected, "{spec}");
            }
        }
    }

    #[test]
    fn predictions() {
        let p = |s: &str| predicted_counts(&s.parse().unwrap()).unwrap();
        assert_eq!(p("gamma:3").congruence, 3);
        assert_eq!(p("gamma:2").congruence, 5);
        assert_eq!(p("gamma:6").congruence, 9);
        assert_eq!(p("gamma0:11").noncongruence, Some(6));
        assert_eq!(p("gamma0:11").rademacher_s, Some(3));
        assert_eq!(p("gamma0:7").noncongruence, Some(0));
        assert_eq!(p("gamma0:19").noncongruence, Some((1 << 3) - 2));
        assert_eq!(p("gamma0:23").noncongruence, Some((1 << 5) - 2));
        assert_eq!(p("gamma0:9").congruence, 3);
        assert!(predicted_counts(&"gamma0:20".parse().unwrap()).is_err());
    }
}
