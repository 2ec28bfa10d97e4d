//! Property tests for the arithmetic core and the group oracles.

use num_bigint::BigInt;
use proptest::prelude::*;
use psl2_lifts::arith::{proj, Cusp, Mat2};
use psl2_lifts::f2::{solution_space, F2Vec};
use psl2_lifts::groups::{GroupSpec, Member, StandardOracle};
use psl2_lifts::prepared::prepare;

/// Random element of SL2(Z) as a word in T and S.
fn arb_mat() -> impl Strategy<Value = Mat2> {
    prop::collection::vec((0u8..4, 1i64..4), 0..12).prop_map(|letters| {
        let mut m = Mat2::identity();
        for (kind, e) in letters {
            m = match kind {
                0 => &m * &Mat2::t_pow(e),
                1 => &m * &Mat2::t_pow(-e),
                2 => &m * &Mat2::s(),
                _ => &m * &Mat2::s().inv(),
            };
        }
        m
    })
}

fn arb_cusp() -> impl Strategy<Value = Cusp> {
    (-30i64..30, -30i64..30)
        .prop_filter("not both zero", |(p, q)| *p != 0 || *q != 0)
        .prop_map(|(p, q)| Cusp::from_i64(p, q))
}

proptest! {
    #[test]
    fn products_stay_unimodular(x in arb_mat(), y in arb_mat()) {
        let p = &x * &y;
        prop_assert_eq!(p.det(), BigInt::from(1));
    }

    #[test]
    fn inverse_law(x in arb_mat()) {
        prop_assert!((&x * &x.inv()).is_identity());
        prop_assert!((&x.inv() * &x).is_identity());
    }

    #[test]
    fn projection_is_a_retraction(x in arb_mat()) {
        prop_assert_eq!(proj(&x.neg()), proj(&x));
        let canon = proj(&x).rep().clone();
        let twice = proj(&canon);
        prop_assert_eq!(twice.rep(), &canon);
    }

    #[test]
    fn cusp_action_is_a_group_action(x in arb_mat(), y in arb_mat(), c in arb_cusp()) {
        let xy = &x * &y;
        prop_assert_eq!(xy.act_on_cusp(&c), x.act_on_cusp(&y.act_on_cusp(&c)));
    }

    #[test]
    fn gamma_membership_closed_under_product_and_inverse(
        x in arb_mat(), y in arb_mat(), n in 1u32..8
    ) {
        let oracle = StandardOracle::new(&GroupSpec::Gamma(n)).unwrap();
        if oracle.contains(&x) && oracle.contains(&y) {
            prop_assert!(oracle.contains(&(&x * &y)));
        }
        if oracle.contains(&x) {
            prop_assert!(oracle.contains(&x.inv()));
        }
    }

    /// Every vector the solver returns satisfies the system, and on small
    /// instances the affine set equals exhaustive enumeration.
    #[test]
    fn f2_solver_matches_enumeration(
        seed in any::<u64>(), rows in 0usize..6, cols in 1usize..9
    ) {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mat: Vec<F2Vec> = (0..rows)
            .map(|_| {
                let r = next();
                F2Vec::from_bits(&(0..cols).map(|i| r >> i & 1 == 1).collect::<Vec<_>>())
            })
            .collect();
        let rhs: Vec<bool> = (0..rows).map(|_| next() & 1 == 1).collect();
        let (particular, kernel) = solution_space(&mat, &rhs, cols);

        // Enumerate the affine set from the solver output.
        let mut from_solver: Vec<F2Vec> = Vec::new();
        if let Some(p) = &particular {
            prop_assert!(kernel.len() <= 16);
            for mask in 0u32..1 << kernel.len() {
                let mut x = p.clone();
                for (i, k) in kernel.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        x.xor_inplace(k);
                    }
                }
                from_solver.push(x);
            }
        }
        from_solver.sort();
        from_solver.dedup();

        // Brute force over all of F_2^cols.
        let mut brute: Vec<F2Vec> = Vec::new();
        for mask in 0u32..1 << cols {
            let x = F2Vec::from_bits(&(0..cols).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            if mat.iter().zip(&rhs).all(|(r, &e)| r.dot(&x) == e) {
                brute.push(x);
            }
        }
        brute.sort();
        prop_assert_eq!(from_solver, brute);
    }
}

/// The general level is projective: every lift of the same symbol has the
/// same level.
#[test]
fn general_level_is_the_same_for_all_lifts() {
    let sym = psl2_lifts::farey::fixtures::gamma1_4();
    for mask in 0u8..4 {
        let x = F2Vec::from_bits(&[mask & 2 != 0, mask & 1 != 0]);
        let spec = GroupSpec::Lift(Box::new(sym.clone()), x);
        let p = prepare(&spec).unwrap();
        assert_eq!(p.invariants.general_level, 4);
    }
}

/// Lemma-level level divisibility: if Gamma(v) is contained in the group,
/// the general level divides v; and conversely non-divisibility rules out
/// containment.
#[test]
fn level_divides_any_principal_modulus_contained() {
    use psl2_lifts::lifts::principal_generators;
    use psl2_lifts::prepared::FreshSymbols;
    for (spec_str, level) in [("gamma1:4", 4u32), ("gamma1:6", 6), ("gamma0:8", 8)] {
        let spec: GroupSpec = spec_str.parse().unwrap();
        let oracle = StandardOracle::new(&spec).unwrap();
        let n = prepare(&spec).unwrap().invariants.general_level;
        assert_eq!(n, level);
        for v in [n, 2 * n, 3 * n] {
            let contained = principal_generators(v, &FreshSymbols)
                .unwrap()
                .iter()
                .all(|h| oracle.contains_proj(h));
            if contained {
                assert_eq!(v % n, 0, "{spec_str}: Gamma({v}) contained but {n} does not divide {v}");
            }
        }
        // A modulus not divisible by the level cannot give containment.
        if n > 1 {
            let v = n + 1;
            let contained = principal_generators(v, &FreshSymbols)
                .unwrap()
                .iter()
                .all(|h| oracle.contains_proj(h));
            assert!(!contained, "{spec_str}: Gamma({v}) cannot be contained");
        }
    }
}

/// Two different symbols for the same group (the reference fixture and the
/// one the builder produces) generate the same group: equal index and
/// mutual generator membership.
#[test]
fn built_and_reference_symbols_agree() {
    use psl2_lifts::farey::fixtures;
    for (spec_str, fixture) in [
        ("gamma1:4", fixtures::gamma1_4()),
        ("gamma1:6", fixtures::gamma1_6()),
        ("gamma:4", fixtures::gamma_4()),
    ] {
        let spec: GroupSpec = spec_str.parse().unwrap();
        let built = prepare(&spec).unwrap();
        let reference = prepare(&GroupSpec::FromFarey(Box::new(fixture))).unwrap();
        assert_eq!(
            built.invariants.proj_index,
            reference.invariants.proj_index
        );
        let strict = StandardOracle::new(&spec).unwrap();
        for g in reference.reducer.generators().matrices() {
            assert!(strict.contains(g), "{spec_str}: reference generator {g} not strict");
        }
        for g in built.reducer.generators().matrices() {
            assert!(
                reference.reducer.reduce(g).unwrap().member,
                "{spec_str}: built generator {g} not in reference group"
            );
        }
        for g in reference.reducer.generators().matrices() {
            assert!(
                built.reducer.reduce(g).unwrap().member,
                "{spec_str}: reference generator {g} not in built group"
            );
        }
    }
}

/// Round trip of every signed generator through strict membership: the sign
/// recorded on each label is the sign realized in the group.
#[test]
fn generator_signs_are_strict_members() {
    for spec_str in ["gamma1:4", "gamma1:6", "gamma:3", "gamma:4", "gamma:6", "g1:7", "g2:7"] {
        let spec: GroupSpec = spec_str.parse().unwrap();
        let p = prepare(&spec).unwrap();
        if p.invariants.contains_minus_one {
            continue;
        }
        let strict = StandardOracle::new(&spec).unwrap();
        for g in p.reducer.generators().matrices() {
            assert!(strict.contains(g), "{spec_str}: generator {g}");
        }
    }
}
