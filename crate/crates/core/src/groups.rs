//! The standard congruence families and their membership oracles.
//!
//! Strict membership is a predicate on SL2(Z); the projective predicate
//! (m in Gamma or -m in Gamma) is derived from it.  Gamma(N) here is the
//! strict kernel of reduction mod N, so it contains -1 exactly when N <= 2.

use crate::arith::{Cusp, Mat2};
use crate::f2::F2Vec;
use crate::farey::SignedFareySymbol;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group spec `{0}`")]
    Parse(String),
    #[error("level must be positive in `{0}`")]
    ZeroLevel(String),
    #[error("{0} requires an odd prime p = 3 mod 4, got p = {1}")]
    BadSignPrime(&'static str, u32),
    #[error("operation requires a standard congruence family, got {0}")]
    NotStandard(String),
    #[error("no closed-form count for {0}: outside the theorems' hypotheses")]
    NoPrediction(String),
    #[error("no cusp width <= {bound} found for cusp {cusp}; group may not have finite index")]
    WidthNotFound { cusp: Cusp, bound: u64 },
}

/// A finite-index subgroup of SL2(Z) given either by a congruence family or
/// by a signed Farey symbol (optionally with a sign vector naming one lift).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// SL2(Z) itself.
    Full,
    /// Principal congruence subgroup: matrices congruent to the identity mod N.
    Gamma(u32),
    /// Lower-left entry divisible by N.
    Gamma0(u32),
    /// Gamma0(N) with both diagonal entries congruent to 1 mod N.
    Gamma1(u32),
    /// Elements of Gamma0(p^r) whose diagonal entries are squares mod p.
    /// Defined for p = 3 mod 4, where it is an index-2 subgroup without -1.
    G1 { p: u32, r: u32 },
    /// The third congruence lift of Gamma0(p^r)-bar for p = 3 mod 4:
    /// sign -1 exactly on elements of order two mod 2.
    G2 { p: u32, r: u32 },
    /// The group generated by a signed Farey symbol.
    FromFarey(Box<SignedFareySymbol>),
    /// The lift of a symbol's group named by a sign vector over its generators.
    Lift(Box<SignedFareySymbol>, F2Vec),
}

impl GroupSpec {
    pub fn is_standard(&self) -> bool {
        !matches!(self, GroupSpec::FromFarey(_) | GroupSpec::Lift(..))
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        match *self {
            GroupSpec::Gamma(n) | GroupSpec::Gamma0(n) | GroupSpec::Gamma1(n) if n == 0 => {
                Err(GroupError::ZeroLevel(self.to_string()))
            }
            GroupSpec::G1 { p, r } | GroupSpec::G2 { p, r } => {
                let which = if matches!(self, GroupSpec::G1 { .. }) {
                    "G1"
                } else {
                    "G2"
                };
                if r == 0 {
                    return Err(GroupError::ZeroLevel(self.to_string()));
                }
                if p % 4 != 3 || !is_prime(p) {
                    return Err(GroupError::BadSignPrime(which, p));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Index of the projective image in PSL2(Z), by the classical formulas.
    pub fn proj_index(&self) -> Result<u64, GroupError> {
        self.validate()?;
        Ok(match *self {
            GroupSpec::Full | GroupSpec::Gamma(1) | GroupSpec::Gamma0(1) | GroupSpec::Gamma1(1) => {
                1
            }
            GroupSpec::Gamma(2) => 6,
            // [SL2(Z) : Gamma(N)] = N^3 prod (1 - 1/p^2); halve for N > 2
            // since -1 is no longer in the group.
            GroupSpec::Gamma(n) => {
                let mut idx = u64::from(n).pow(3);
                for (p, _) in factorize(n) {
                    let p = u64::from(p);
                    idx = idx / (p * p) * (p * p - 1);
                }
                idx / 2
            }
            GroupSpec::Gamma0(_) | GroupSpec::G1 { .. } | GroupSpec::G2 { .. } => {
                let n = match *self {
                    GroupSpec::Gamma0(n) => n,
                    GroupSpec::G1 { p, r } | GroupSpec::G2 { p, r } => p.pow(r),
                    _ => unreachable!(),
                };
                let mut idx = u64::from(n);
                for (p, _) in factorize(n) {
                    let p = u64::from(p);
                    idx = idx / p * (p + 1);
                }
                idx
            }
            GroupSpec::Gamma1(2) => 3,
            GroupSpec::Gamma1(n) => {
                let mut idx = u64::from(n) * u64::from(n);
                for (p, _) in factorize(n) {
                    let p = u64::from(p);
                    idx = idx / (p * p) * (p * p - 1);
                }
                idx / 2
            }
            GroupSpec::FromFarey(ref sym) | GroupSpec::Lift(ref sym, _) => sym.proj_index(),
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Full => write!(f, "full"),
            GroupSpec::Gamma(n) => write!(f, "gamma:{n}"),
            GroupSpec::Gamma0(n) => write!(f, "gamma0:{n}"),
            GroupSpec::Gamma1(n) => write!(f, "gamma1:{n}"),
            GroupSpec::G1 { p, r: 1 } => write!(f, "g1:{p}"),
            GroupSpec::G1 { p, r } => write!(f, "g1:{p}^{r}"),
            GroupSpec::G2 { p, r: 1 } => write!(f, "g2:{p}"),
            GroupSpec::G2 { p, r } => write!(f, "g2:{p}^{r}"),
            GroupSpec::FromFarey(_) => write!(f, "farey-symbol"),
            GroupSpec::Lift(_, x) => write!(f, "farey-lift:{x}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Parses the CLI forms `full`, `gamma:N`, `gamma0:N`, `gamma1:N`,
    /// `g1:p^r`, `g2:p^r` (and `g1:p` as `g1:p^1`).
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::Parse(s.to_string());
        let spec = if s == "full" {
            GroupSpec::Full
        } else if let Some((head, tail)) = s.split_once(':') {
            match head {
                "gamma" => GroupSpec::Gamma(tail.parse().map_err(|_| bad())?),
                "gamma0" => GroupSpec::Gamma0(tail.parse().map_err(|_| bad())?),
                "gamma1" => GroupSpec::Gamma1(tail.parse().map_err(|_| bad())?),
                "g1" | "g2" => {
                    let (p, r) = match tail.split_once('^') {
                        Some((p, r)) => (
                            p.parse().map_err(|_| bad())?,
                            r.parse().map_err(|_| bad())?,
                        ),
                        None => (tail.parse().map_err(|_| bad())?, 1),
                    };
                    if head == "g1" {
                        GroupSpec::G1 { p, r }
                    } else {
                        GroupSpec::G2 { p, r }
                    }
                }
                _ => return Err(bad()),
            }
        } else {
            return Err(bad());
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Exact membership oracle: a strict predicate on SL2(Z) together with the
/// derived predicate on PSL2(Z).
pub trait Member: Sync {
    fn contains(&self, m: &Mat2) -> bool;

    fn contains_proj(&self, m: &Mat2) -> bool {
        self.contains(m) || self.contains(&m.neg())
    }

    /// Set to Some(M) when the group is exactly Gamma(M); this admits a
    /// hashed pairing search during Farey symbol construction.
    fn principal_modulus(&self) -> Option<u32> {
        None
    }
}

/// Oracle for the standard congruence families.
#[derive(Clone, Debug)]
pub struct StandardOracle {
    spec: GroupSpec,
}

impl StandardOracle {
    pub fn new(spec: &GroupSpec) -> Result<Self, GroupError> {
        spec.validate()?;
        if !spec.is_standard() {
            return Err(GroupError::NotStandard(spec.to_string()));
        }
        Ok(StandardOracle { spec: spec.clone() })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }
}

impl Member for StandardOracle {
    fn contains(&self, m: &Mat2) -> bool {
        match self.spec {
            GroupSpec::Full => true,
            GroupSpec::Gamma(n) => {
                let [a, b, c, d] = m.residues(n);
                let n = u64::from(n);
                a == 1 % n && b == 0 && c == 0 && d == 1 % n
            }
            GroupSpec::Gamma0(n) => m.residues(n)[2] == 0,
            GroupSpec::Gamma1(n) => {
                let [a, _, c, d] = m.residues(n);
                let n = u64::from(n);
                c == 0 && a == 1 % n && d == 1 % n
            }
            GroupSpec::G1 { p, r } => {
                m.residues(p.pow(r))[2] == 0 && legendre(&m.a, p) == 1
            }
            GroupSpec::G2 { p, r } => {
                let want_minus = m.order_mod2() == 2;
                m.residues(p.pow(r))[2] == 0
                    && legendre(&m.a, p) == if want_minus { -1 } else { 1 }
            }
            GroupSpec::FromFarey(_) | GroupSpec::Lift(..) => unreachable!(),
        }
    }

    fn principal_modulus(&self) -> Option<u32> {
        match self.spec {
            GroupSpec::Gamma(n) if n >= 2 => Some(n),
            _ => None,
        }
    }
}

/// The Legendre symbol (a/p) for an odd prime p, by Euler's criterion.
pub fn legendre(a: &BigInt, p: u32) -> i32 {
    assert!(p % 2 == 1 && is_prime(p), "p = {p} is not an odd prime");
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return 0;
    }
    let e = a.modpow(&BigInt::from((p - 1) / 2), &pb);
    if e.is_one() {
        1
    } else {
        debug_assert_eq!(e, &pb - 1u32);
        -1
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Width of the cusp x with respect to the group behind `oracle`: the least
/// n >= 1 with g T^n g^-1 in the group projectively, where g(infinity) = x.
///
/// Found by incremental search; any n up to the projective index suffices as
/// a bound since each width divides into the index sum.
pub fn cusp_width(oracle: &dyn Member, x: &Cusp, bound: u64) -> Result<u64, GroupError> {
    let g = x.conjugator_from_infinity();
    // g T^n g^-1 = (g T g^-1)^n.
    let step = &(&g * &Mat2::t()) * &g.inv();
    let mut acc = step.clone();
    for n in 1..=bound {
        if oracle.contains_proj(&acc) {
            return Ok(n);
        }
        acc = &acc * &step;
    }
    Err(GroupError::WidthNotFound {
        cusp: x.clone(),
        bound,
    })
}

/// Strict stabilizer witness g T^h g^-1 for a cusp of width h.
pub fn stabilizer_witness(x: &Cusp, h: u64) -> Mat2 {
    let g = x.conjugator_from_infinity();
    let h = i64::try_from(h).expect("width fits i64");
    &(&g * &Mat2::t_pow(h)) * &g.inv()
}

/// lcm helper over u64 widths.
pub fn lcm_u64(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1, |acc, v| acc.lcm(&v))
}

/// Convert a small BigInt to i64, panicking on overflow (used on residues
/// and indices that are known small).
pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("value fits i64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(s: &str) -> StandardOracle {
        StandardOracle::new(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["full", "gamma:4", "gamma0:20", "gamma1:6", "g1:7", "g2:3^2"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("gamma:x".parse::<GroupSpec>().is_err());
        assert!("gamma:0".parse::<GroupSpec>().is_err());
        assert!("g1:5".parse::<GroupSpec>().is_err(), "5 = 1 mod 4");
        assert!("g1:9".parse::<GroupSpec>().is_err(), "9 is not prime");
        assert_eq!("g1:7".parse::<GroupSpec>(), Ok(GroupSpec::G1 { p: 7, r: 1 }));
    }

    #[test]
    fn gamma_membership() {
        let g4 = oracle("gamma:4");
        assert!(g4.contains(&Mat2::from_i64(-7, 12, 4, -7)));
        assert!(!g4.contains(&Mat2::identity().neg()));
        assert!(oracle("gamma:2").contains(&Mat2::identity().neg()));
    }

    #[test]
    fn g1_membership() {
        let g = oracle("g1:7");
        assert!(!g.contains(&Mat2::from_i64(3, 1, 14, 5)));
        assert!(g.contains(&Mat2::t()));
    }

    #[test]
    fn g2_contains_required_signs() {
        // -T has order 2 mod 2 and diagonal -1, and (-1/7) = -1 since 7 = 3 mod 4.
        let g = oracle("g2:7");
        assert!(g.contains(&Mat2::t().neg()));
        assert!(!g.contains(&Mat2::t()));
        // T^2 = 1 mod 2, so the + lift is required.
        assert!(g.contains(&Mat2::t_pow(2)));
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(&BigInt::from(1), 7), 1);
        assert_eq!(legendre(&BigInt::from(3), 7), -1);
        assert_eq!(legendre(&BigInt::from(0), 7), 0);
        assert_eq!(legendre(&BigInt::from(2), 7), 1);
        assert_eq!(legendre(&BigInt::from(-1), 7), -1);
        assert_eq!(legendre(&BigInt::from(-1), 13), 1);
    }

    #[test]
    fn projective_indices() {
        assert_eq!(GroupSpec::Full.proj_index().unwrap(), 1);
        assert_eq!(GroupSpec::Gamma1(6).proj_index().unwrap(), 12);
        assert_eq!(GroupSpec::Gamma1(4).proj_index().unwrap(), 6);
        assert_eq!(GroupSpec::Gamma(4).proj_index().unwrap(), 24);
        assert_eq!(GroupSpec::Gamma(2).proj_index().unwrap(), 6);
        assert_eq!(GroupSpec::Gamma0(8).proj_index().unwrap(), 12);
        assert_eq!(GroupSpec::Gamma0(16).proj_index().unwrap(), 24);
        assert_eq!(GroupSpec::Gamma0(20).proj_index().unwrap(), 36);
        assert_eq!(GroupSpec::G1 { p: 7, r: 1 }.proj_index().unwrap(), 8);
        assert_eq!(GroupSpec::Gamma(6).proj_index().unwrap(), 72);
    }

    #[test]
    fn widths_of_standard_cusps() {
        let g14 = oracle("gamma1:4");
        assert_eq!(cusp_width(&g14, &Cusp::infinity(), 6).unwrap(), 1);
        assert_eq!(cusp_width(&g14, &Cusp::zero(), 6).unwrap(), 4);
        assert_eq!(cusp_width(&g14, &Cusp::from_i64(1, 2), 6).unwrap(), 1);

        let g16 = oracle("gamma1:6");
        assert_eq!(cusp_width(&g16, &Cusp::zero(), 12).unwrap(), 6);

        // All cusps of Gamma(N) have width N.
        let g4 = oracle("gamma:4");
        for c in [Cusp::infinity(), Cusp::zero(), Cusp::from_i64(1, 2)] {
            assert_eq!(cusp_width(&g4, &c, 24).unwrap(), 4);
        }
    }

    #[test]
    fn width_error_on_fake_oracle() {
        struct Never;
        impl Member for Never {
            fn contains(&self, _: &Mat2) -> bool {
                false
            }
        }
        assert!(matches!(
            cusp_width(&Never, &Cusp::zero(), 10),
            Err(GroupError::WidthNotFound { .. })
        ));
    }
}
