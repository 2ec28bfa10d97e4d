//! Exact arithmetic on 2x2 unimodular integer matrices and cusps.
//!
//! Everything here works over arbitrary-precision integers: word evaluation
//! over long rewritings produces entries far beyond 64 bits, so fixed-width
//! arithmetic is not an option.  Matrices are elements of SL2(Z); cusps are
//! elements of P^1(Q) written as reduced fractions p/q with q >= 0 and the
//! single point at infinity represented as 1/0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::Mul;

/// Element of SL2(Z): the matrix [[a, b], [c, d]] with a*d - b*c = 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let m = Mat2 { a, b, c, d };
        debug_assert!(m.det().is_one(), "matrix is not unimodular: {m}");
        m
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    /// The translation matrix T = [[1, 1], [0, 1]].
    pub fn t() -> Self {
        Self::from_i64(1, 1, 0, 1)
    }

    /// T^n for any integer n.
    pub fn t_pow(n: i64) -> Self {
        Self::from_i64(1, n, 0, 1)
    }

    /// The inversion matrix S = [[0, -1], [1, 0]], of order 4.
    pub fn s() -> Self {
        Self::from_i64(0, -1, 1, 0)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn neg(&self) -> Self {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Inverse [[d, -b], [-c, a]]; exact since det = 1.
    pub fn inv(&self) -> Self {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        Mat2 {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_neg_identity(&self) -> bool {
        self.neg().is_identity()
    }

    /// True for +I or -I, the kernel of SL2(Z) -> PSL2(Z).
    pub fn is_pm_identity(&self) -> bool {
        self.is_identity() || self.is_neg_identity()
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n >= 0 { self.clone() } else { self.inv() };
        let mut acc = Mat2::identity();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Multiplicative order in SL2(Z), if finite. Elements other than +-1
    /// have finite order iff |trace| < 2.
    pub fn order(&self) -> Option<u32> {
        if self.is_identity() {
            return Some(1);
        }
        if self.is_neg_identity() {
            return Some(2);
        }
        if self.trace().abs() >= BigInt::from(2) {
            return None;
        }
        let mut acc = self.clone();
        for k in 2..=6u32 {
            acc = &acc * self;
            if acc.is_identity() {
                return Some(k);
            }
        }
        None
    }

    /// Moebius action on a cusp: p/q maps to (a p + b q)/(c p + d q), reduced.
    pub fn act_on_cusp(&self, x: &Cusp) -> Cusp {
        Cusp::new(
            &self.a * &x.num + &self.b * &x.den,
            &self.c * &x.num + &self.d * &x.den,
        )
    }

    /// Entrywise residues in 0..m.
    pub fn residues(&self, m: u32) -> [u64; 4] {
        let mb = BigInt::from(m);
        let r = |x: &BigInt| -> u64 {
            let v = x.mod_floor(&mb);
            u64::try_from(v).expect("residue fits u64")
        };
        [r(&self.a), r(&self.b), r(&self.c), r(&self.d)]
    }

    /// Congruent to +-identity mod m.
    pub fn is_pm_identity_mod(&self, m: u32) -> bool {
        let [a, b, c, d] = self.residues(m);
        let m = u64::from(m);
        (a == 1 % m && b == 0 && c == 0 && d == 1 % m)
            || (a == (m - 1) % m && b == 0 && c == 0 && d == (m - 1) % m)
    }

    /// Order of the reduction mod 2 in SL2(F2) (a group of order 6).
    pub fn order_mod2(&self) -> u32 {
        let [a, b, c, d] = self.residues(2);
        match (a, b, c, d) {
            (1, 0, 0, 1) => 1,
            // The three involutions of SL2(F2).
            (1, 1, 0, 1) | (1, 0, 1, 1) | (0, 1, 1, 0) => 2,
            _ => 3,
        }
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of PSL2(Z), stored as the canonical representative of {M, -M}.
///
/// Canonical sign rule: c > 0, or c = 0 and a > 0.  The rule is arbitrary but
/// must be fixed globally so that sign bookkeeping downstream is reproducible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjMat2(Mat2);

impl ProjMat2 {
    pub fn new(m: Mat2) -> Self {
        let canonical = if m.c.is_positive() || (m.c.is_zero() && m.a.is_positive()) {
            m
        } else {
            m.neg()
        };
        ProjMat2(canonical)
    }

    pub fn rep(&self) -> &Mat2 {
        &self.0
    }
}

impl fmt::Display for ProjMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "+-{}", self.0)
    }
}

/// Canonical projection SL2(Z) -> PSL2(Z).
pub fn proj(m: &Mat2) -> ProjMat2 {
    ProjMat2::new(m.clone())
}

/// A cusp p/q in P^1(Q): gcd(p, q) = 1 and q > 0, or (p, q) = (1, 0) for the
/// point at infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cusp {
    pub num: BigInt,
    pub den: BigInt,
}

impl Cusp {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!(num.is_zero() && den.is_zero()), "0/0 is not a cusp");
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / g);
        if den.is_negative() || (den.is_zero() && num.is_negative()) {
            num = -num;
            den = -den;
        }
        Cusp { num, den }
    }

    pub fn from_i64(num: i64, den: i64) -> Self {
        Self::new(num.into(), den.into())
    }

    pub fn infinity() -> Self {
        Cusp {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Cusp {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    /// Some unimodular g with g(infinity) = self, built by extended gcd so
    /// that the first column is (p, q).
    pub fn conjugator_from_infinity(&self) -> Mat2 {
        let e = self.num.extended_gcd(&self.den);
        debug_assert!(e.gcd.is_one());
        // p*x + q*y = 1, so [[p, -y], [q, x]] has determinant 1.
        Mat2::new(self.num.clone(), -e.y, self.den.clone(), e.x)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::from_i64(a, b, c, d)
    }

    #[test]
    fn translation_composition() {
        assert_eq!(&Mat2::t() * &Mat2::t(), m(1, 2, 0, 1));
    }

    #[test]
    fn b_inverse_squared() {
        // B^-2 for B = [[7,-3],[12,-5]], a generator of Gamma_1(6).
        let b = m(7, -3, 12, -5);
        let bi = b.inv();
        assert_eq!(bi, m(-5, 3, -12, 7));
        assert_eq!(&bi * &bi, m(-11, 6, -24, 13));
        assert!((&b * &bi).is_identity());
    }

    #[test]
    fn s_inverse_is_minus_s() {
        assert_eq!(Mat2::s().inv(), m(0, 1, -1, 0));
        assert_eq!(Mat2::s().inv(), Mat2::s().neg());
    }

    #[test]
    fn t_inverse() {
        assert_eq!(Mat2::t().inv(), m(1, -1, 0, 1));
    }

    #[test]
    fn canonical_projection() {
        assert_eq!(proj(&Mat2::t().neg()), proj(&Mat2::t()));
        assert_eq!(proj(&Mat2::t().neg()).rep(), &Mat2::t());
        assert_eq!(proj(&m(-5, 1, -6, 1)).rep(), &m(5, -1, 6, -1));
        assert_eq!(proj(&Mat2::identity().neg()).rep(), &Mat2::identity());
        // Applying twice is the identity.
        let x = m(2, 1, 1, 1).neg();
        assert_eq!(proj(proj(&x).rep()), proj(&x));
    }

    #[test]
    fn cusp_action() {
        let inf = Cusp::infinity();
        assert_eq!(Mat2::t().act_on_cusp(&inf), inf);
        assert_eq!(Mat2::s().act_on_cusp(&Cusp::zero()), inf);
        assert_eq!(m(-3, 1, -4, 1).act_on_cusp(&inf), Cusp::from_i64(3, 4));
    }

    #[test]
    fn cusp_normalization() {
        assert_eq!(Cusp::from_i64(2, -4), Cusp::from_i64(-1, 2));
        assert_eq!(Cusp::from_i64(-3, 0), Cusp::infinity());
        let c = Cusp::from_i64(3, 7);
        let g = c.conjugator_from_infinity();
        assert_eq!(g.act_on_cusp(&Cusp::infinity()), c);
    }

    #[test]
    fn orders() {
        assert_eq!(Mat2::s().order(), Some(4));
        assert_eq!(m(0, -1, 1, -1).order(), Some(3));
        assert_eq!(Mat2::identity().neg().order(), Some(2));
        assert_eq!(Mat2::t().order(), None);
        assert_eq!(Mat2::t().order_mod2(), 2);
        assert_eq!(m(0, -1, 1, -1).order_mod2(), 3);
        assert_eq!(Mat2::t_pow(2).order_mod2(), 1);
    }
}
