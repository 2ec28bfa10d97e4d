//! Word reduction against a signed Farey symbol.
//!
//! The symbol's special polygon P is a fundamental domain for the projective
//! group.  To decide membership of m and produce a word, walk the translate
//! m * z0 of an interior base point back into P, crossing one side pairing at
//! a time.  Every test is an exact rational comparison: sides of P are
//! geodesics with rational data, and a point stays in Q + iQ under the
//! integral Moebius action.
//!
//! Bullet edges need care: there the domain boundary detours through the
//! center of the Farey triangle beyond the edge, so P includes one third of
//! that triangle (the third nearest the edge).  Which third a point lies in
//! is decided by comparing exact hyperbolic distances to the triangle sides;
//! the order-3 rotation moves the point between thirds.
//!
//! Any comparison that lands exactly on a boundary restarts the walk from a
//! different base point, so no answer ever depends on a tie.

use super::{FareyError, GeneratorSet, Label, Provenance, SignedFareySymbol};
use crate::arith::{Cusp, Mat2};
use crate::f2::F2Vec;
use crate::groups::Member;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;
use std::sync::Arc;

const STEP_CAP: usize = 200_000;

/// A word over the generators of a symbol: letters (generator index,
/// exponent +-1), a residual sign, and a membership flag.  When `member` is
/// true, evaluating the letters gives sign * m for the reduced matrix m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    pub letters: Vec<(usize, i8)>,
    pub sign: i8,
    pub member: bool,
}

impl ReducedWord {
    pub fn eval(&self, gens: &GeneratorSet) -> Mat2 {
        eval_letters(gens, &self.letters)
    }

    /// Occurrence parities of each generator (inverses count too).
    pub fn occurrences(&self, n_gens: usize) -> F2Vec {
        let mut v = F2Vec::zero(n_gens);
        for &(g, _) in &self.letters {
            v.flip(g);
        }
        v
    }
}

pub fn eval_letters(gens: &GeneratorSet, letters: &[(usize, i8)]) -> Mat2 {
    let mut acc = Mat2::identity();
    for &(g, e) in letters {
        let m = &gens.gens[g].mat;
        acc = if e >= 0 { &acc * m } else { &acc * &m.inv() };
    }
    acc
}

/// A geodesic with rational data: a vertical line or a semicircle centered
/// on the real axis.
#[derive(Clone, Debug)]
enum Geo {
    Vertical { x: BigRational },
    Arc { c: BigRational, r2: BigRational },
}

impl Geo {
    fn between(p: (&BigInt, &BigInt), q: (&BigInt, &BigInt)) -> Geo {
        if p.1.is_zero() {
            Geo::Vertical { x: ratio(q) }
        } else if q.1.is_zero() {
            Geo::Vertical { x: ratio(p) }
        } else {
            let (a, b) = (ratio(p), ratio(q));
            let two = BigRational::from(BigInt::from(2));
            let c = (&a + &b) / &two;
            let h = (&a - &b) / two;
            Geo::Arc { c, r2: &h * &h }
        }
    }

    /// Less: inside the semicircle / left of the line.
    fn side_of(&self, z: &Pt) -> Ordering {
        match self {
            Geo::Vertical { x } => z.x.cmp(x),
            Geo::Arc { c, r2 } => {
                let dx = &z.x - c;
                (&dx * &dx + &z.y * &z.y).cmp(r2)
            }
        }
    }

    /// sinh^2 of the hyperbolic distance from z to the geodesic.
    fn sinh2_dist(&self, z: &Pt) -> BigRational {
        let y2 = &z.y * &z.y;
        match self {
            Geo::Vertical { x } => {
                let dx = &z.x - x;
                &dx * &dx / y2
            }
            Geo::Arc { c, r2 } => {
                let dx = &z.x - c;
                let u = &dx * &dx + &y2 - r2;
                &u * &u / (BigRational::from(BigInt::from(4)) * r2 * y2)
            }
        }
    }
}

fn ratio(p: (&BigInt, &BigInt)) -> BigRational {
    BigRational::new(p.0.clone(), p.1.clone())
}

#[derive(Clone, Debug)]
struct Pt {
    x: BigRational,
    y: BigRational,
}

fn mobius(m: &Mat2, z: &Pt) -> Pt {
    let (a, b, c, d) = (
        BigRational::from(m.a.clone()),
        BigRational::from(m.b.clone()),
        BigRational::from(m.c.clone()),
        BigRational::from(m.d.clone()),
    );
    let cx_d = &c * &z.x + &d;
    let cy = &c * &z.y;
    let den = &cx_d * &cx_d + &cy * &cy;
    let num_x = (&a * &z.x + &b) * &cx_d + &a * &c * (&z.y * &z.y);
    Pt {
        x: num_x / &den,
        y: &z.y / den,
    }
}

/// The third of the outer triangle holding a point is V^k * (the third in P).
struct SubSide {
    geo: Geo,
    /// side_of == this means the point is beyond this sub-side, outside the
    /// outer triangle.
    beyond: Ordering,
    /// Power k with (this sub-side) = V^k * (the bullet edge).
    k: u8,
}

enum SideKind {
    Pair { gen: usize, exp: i8 },
    Circle { gen: usize },
    Bullet { gen: usize, subs: Box<[SubSide; 2]> },
}

struct Side {
    geo: Geo,
    /// side_of == this means the point is strictly beyond this side of P.
    beyond: Ordering,
    kind: SideKind,
}

enum Loc {
    Inside,
    Tie,
    /// Cross through a paired or circle side.
    CrossSide(usize),
    /// Cross into the k-th third behind a bullet side.
    CrossBullet { side: usize, k: u8 },
}

/// Precomputed geometry for reducing words against one symbol.
pub struct Reducer {
    symbol: SignedFareySymbol,
    gens: GeneratorSet,
    sides: Vec<Side>,
    bases: Vec<Pt>,
}

impl Reducer {
    pub fn new(symbol: &SignedFareySymbol) -> Result<Self, FareyError> {
        let gens = symbol.generators()?;
        let n = symbol.n_edges();
        let mut kinds: Vec<Option<SideKind>> = (0..n).map(|_| None).collect();
        for (gi, g) in gens.gens.iter().enumerate() {
            match g.provenance {
                Provenance::Pair { e1, e2, .. } => {
                    // The generator maps side e1 to side e2, so the tile
                    // beyond e2 is g * P and the tile beyond e1 is g^-1 * P.
                    kinds[e1] = Some(SideKind::Pair { gen: gi, exp: -1 });
                    kinds[e2] = Some(SideKind::Pair { gen: gi, exp: 1 });
                }
                Provenance::Circle { edge } => kinds[edge] = Some(SideKind::Circle { gen: gi }),
                Provenance::Bullet { edge } => {
                    kinds[edge] = Some(SideKind::Bullet {
                        gen: gi,
                        subs: Box::new(bullet_subs(symbol, edge, &g.mat, n)),
                    });
                }
            }
        }
        let mut sides = Vec::with_capacity(n);
        for (e, kind) in kinds.into_iter().enumerate() {
            let geo = Geo::between(symbol.cusp_raw(e), symbol.cusp_raw(e + 1));
            let beyond = if e == n - 1 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            sides.push(Side {
                geo,
                beyond,
                kind: kind.expect("every edge is labeled"),
            });
        }
        let mut reducer = Reducer {
            symbol: symbol.clone(),
            gens,
            sides,
            bases: Vec::new(),
        };
        reducer.bases = reducer.base_points()?;
        Ok(reducer)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn symbol(&self) -> &SignedFareySymbol {
        &self.symbol
    }

    /// Candidate interior base points, kept only if they locate as Inside.
    fn base_points(&self) -> Result<Vec<Pt>, FareyError> {
        let n = self.symbol.n_edges();
        let rat = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        let mut candidates = Vec::new();
        if n >= 3 {
            let x1 = ratio(self.symbol.cusp_raw(1));
            let xm = ratio(self.symbol.cusp_raw(n - 1));
            let span = &xm - &x1;
            for (fx, fy) in [
                (rat(1, 2), rat(1, 1)),
                (rat(3, 7), rat(12, 11)),
                (rat(4, 7), rat(13, 9)),
                (rat(5, 11), rat(17, 10)),
                (rat(6, 11), rat(9, 7)),
                (rat(1, 3), rat(19, 12)),
                (rat(2, 3), rat(23, 13)),
                (rat(5, 13), rat(29, 17)),
            ] {
                candidates.push(Pt {
                    x: &x1 + &span * fx,
                    y: &span * fy,
                });
            }
        } else {
            // Two edges on one vertical line: the polygon is a union of
            // bullet bulges around it.  Aim just off the line, high up,
            // toward a bullet side.
            let x1 = ratio(self.symbol.cusp_raw(1));
            let dir: i64 = match self.symbol.labels()[1] {
                Label::Bullet { .. } => 1,
                _ => -1,
            };
            for (dx, y) in [
                (rat(1, 5), rat(3, 1)),
                (rat(1, 7), rat(4, 1)),
                (rat(2, 9), rat(7, 2)),
                (rat(1, 11), rat(5, 1)),
                (rat(3, 13), rat(13, 4)),
            ] {
                candidates.push(Pt {
                    x: &x1 + dx * rat(dir, 1),
                    y,
                });
            }
        }
        let good: Vec<Pt> = candidates
            .into_iter()
            .filter(|z| matches!(self.locate(z), Loc::Inside))
            .collect();
        if good.is_empty() {
            return Err(FareyError::ReductionStuck);
        }
        Ok(good)
    }

    fn locate(&self, z: &Pt) -> Loc {
        for (si, side) in self.sides.iter().enumerate() {
            let o = side.geo.side_of(z);
            if o == Ordering::Equal {
                return Loc::Tie;
            }
            if o != side.beyond {
                continue;
            }
            match &side.kind {
                SideKind::Pair { .. } | SideKind::Circle { .. } => return Loc::CrossSide(si),
                SideKind::Bullet { subs, .. } => return self.locate_bullet(z, si, subs),
            }
        }
        Loc::Inside
    }

    /// z is beyond the flat geodesic of bullet side `si`.
    fn locate_bullet(&self, z: &Pt, si: usize, subs: &[SubSide; 2]) -> Loc {
        for sub in subs {
            match sub.geo.side_of(z) {
                Ordering::Equal => return Loc::Tie,
                o if o == sub.beyond => return Loc::CrossBullet { side: si, k: sub.k },
                _ => {}
            }
        }
        // Inside the outer triangle: pick the third by nearest side.
        let d_e = self.sides[si].geo.sinh2_dist(z);
        let d0 = subs[0].geo.sinh2_dist(z);
        let d1 = subs[1].geo.sinh2_dist(z);
        if d_e == d0 || d_e == d1 || d0 == d1 {
            return Loc::Tie;
        }
        if d_e < d0 && d_e < d1 {
            // The bulge: this part of the triangle belongs to P.
            Loc::Inside
        } else if d0 < d1 {
            Loc::CrossBullet {
                side: si,
                k: subs[0].k,
            }
        } else {
            Loc::CrossBullet {
                side: si,
                k: subs[1].k,
            }
        }
    }

    /// Reduce m to a word over the symbol's generators.  `member` is true iff
    /// m is projectively in the group; in that case the letters evaluate to
    /// sign * m exactly.
    pub fn reduce(&self, m: &Mat2) -> Result<ReducedWord, FareyError> {
        'bases: for z0 in &self.bases {
            let mut residual = m.clone();
            let mut letters: Vec<(usize, i8)> = Vec::new();
            for _ in 0..STEP_CAP {
                let z = mobius(&residual, z0);
                match self.locate(&z) {
                    Loc::Tie => continue 'bases,
                    Loc::Inside => {
                        if residual.is_identity() {
                            return Ok(ReducedWord {
                                letters,
                                sign: 1,
                                member: true,
                            });
                        } else if residual.is_neg_identity() {
                            return Ok(ReducedWord {
                                letters,
                                sign: -1,
                                member: true,
                            });
                        }
                        return Ok(ReducedWord {
                            letters: Vec::new(),
                            sign: 1,
                            member: false,
                        });
                    }
                    Loc::CrossSide(si) => match &self.sides[si].kind {
                        SideKind::Pair { gen, exp } => {
                            let g = &self.gens.gens[*gen].mat;
                            residual = if *exp > 0 {
                                &g.inv() * &residual
                            } else {
                                g * &residual
                            };
                            letters.push((*gen, *exp));
                        }
                        SideKind::Circle { gen } => {
                            let g = &self.gens.gens[*gen].mat;
                            residual = &g.inv() * &residual;
                            letters.push((*gen, 1));
                        }
                        SideKind::Bullet { .. } => unreachable!(),
                    },
                    Loc::CrossBullet { side, k } => {
                        let gen = match &self.sides[side].kind {
                            SideKind::Bullet { gen, .. } => *gen,
                            _ => unreachable!(),
                        };
                        let g_inv = self.gens.gens[gen].mat.inv();
                        for _ in 0..k {
                            residual = &g_inv * &residual;
                            letters.push((gen, 1));
                        }
                    }
                }
            }
        }
        Err(FareyError::ReductionStuck)
    }

    /// Strict membership of m in the lift named by sign vector x over the
    /// symbol's generators: m must reduce to a word w with
    /// (-1)^(x . occurrences(w)) * sign(w) = +1.
    pub fn member_in_lift(&self, x: &F2Vec, m: &Mat2) -> Result<bool, FareyError> {
        let w = self.reduce(m)?;
        if !w.member {
            return Ok(false);
        }
        let flip = x.dot(&w.occurrences(self.gens.len()));
        Ok((w.sign < 0) == flip)
    }
}

fn bullet_subs(symbol: &SignedFareySymbol, edge: usize, v: &Mat2, n: usize) -> [SubSide; 2] {
    let l = symbol.cusp_raw(edge);
    let r = symbol.cusp_raw(edge + 1);
    let med = (l.0 + r.0, l.1 + r.1);
    let geo1 = Geo::between(l, (&med.0, &med.1));
    let geo2 = Geo::between((&med.0, &med.1), r);
    // Orientation of "beyond the outer triangle" per sub-side: interior arcs
    // enclose nothing of the triangle; the vertical sub-sides only occur on
    // the outermost edges.
    let beyond1 = match geo1 {
        Geo::Arc { .. } => Ordering::Less,
        Geo::Vertical { .. } => Ordering::Less, // only for edge 0: line at x_1 - 1
    };
    let beyond2 = match geo2 {
        Geo::Arc { .. } => Ordering::Less,
        Geo::Vertical { .. } => Ordering::Greater, // only for edge n-1: line at x_{n-1} + 1
    };
    debug_assert!(edge == 0 || !matches!(geo1, Geo::Vertical { .. }));
    debug_assert!(edge == n - 1 || !matches!(geo2, Geo::Vertical { .. }));

    // Which power of the rotation maps the bullet edge onto each sub-side.
    let cl = symbol.cusp(edge);
    let cr = symbol.cusp(edge + 1);
    let cm = Cusp::new(med.0.clone(), med.1.clone());
    let img = [v.act_on_cusp(&cl), v.act_on_cusp(&cr)];
    let matches_side = |a: &Cusp, b: &Cusp| {
        (&img[0] == a && &img[1] == b) || (&img[0] == b && &img[1] == a)
    };
    let (k1, k2) = if matches_side(&cl, &cm) {
        (1, 2)
    } else if matches_side(&cm, &cr) {
        (2, 1)
    } else {
        panic!("bullet rotation does not permute the outer triangle sides");
    };
    [
        SubSide {
            geo: geo1,
            beyond: beyond1,
            k: k1,
        },
        SubSide {
            geo: geo2,
            beyond: beyond2,
            k: k2,
        },
    ]
}

/// Membership oracle backed by a symbol: either the full preimage of the
/// projective group (for symbols marked as containing -1) or the lift named
/// by a sign vector (defaulting to the reference lift, all signs +).
#[derive(Clone)]
pub struct SymbolOracle {
    reducer: Arc<Reducer>,
    lift: Option<F2Vec>,
}

impl SymbolOracle {
    /// Oracle for the symbol's own group: the reference lift generated by the
    /// signed generators, or the full preimage when -1 is in the group.
    pub fn new(reducer: Arc<Reducer>) -> Self {
        let lift = if reducer.gens.contains_minus_one {
            None
        } else {
            Some(F2Vec::zero(reducer.gens.len()))
        };
        SymbolOracle { reducer, lift }
    }

    /// Oracle for the lift named by x (symbol must not contain -1).
    pub fn for_lift(reducer: Arc<Reducer>, x: F2Vec) -> Self {
        assert!(!reducer.gens.contains_minus_one);
        assert_eq!(x.len(), reducer.gens.len());
        SymbolOracle {
            reducer,
            lift: Some(x),
        }
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }
}

impl Member for SymbolOracle {
    fn contains(&self, m: &Mat2) -> bool {
        match &self.lift {
            None => self
                .reducer
                .reduce(m)
                .expect("word reduction failed")
                .member,
            Some(x) => self
                .reducer
                .member_in_lift(x, m)
                .expect("word reduction failed"),
        }
    }

    fn contains_proj(&self, m: &Mat2) -> bool {
        self.reducer
            .reduce(m)
            .expect("word reduction failed")
            .member
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::fixtures;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::from_i64(a, b, c, d)
    }

    #[test]
    fn gamma1_6_reduces_reference_elements() {
        let sym = fixtures::gamma1_6();
        let red = Reducer::new(&sym).unwrap();
        // B^-2 for the generator B = [[7,-3],[12,-5]].
        let w = red.reduce(&m(-11, 6, -24, 13)).unwrap();
        assert!(w.member);
        assert_eq!(w.sign, 1);
        assert_eq!(w.eval(red.generators()), m(-11, 6, -24, 13));
        // A^-1 T.
        let w = red.reduce(&m(1, 0, 6, 1)).unwrap();
        assert!(w.member);
        assert_eq!(w.sign, 1);
        assert_eq!(w.eval(red.generators()), m(1, 0, 6, 1));
        // -I reduces to the empty word with sign -1.
        let w = red.reduce(&Mat2::identity().neg()).unwrap();
        assert!(w.member);
        assert!(w.letters.is_empty());
        assert_eq!(w.sign, -1);
        // S is not in Gamma_1(6)-bar.
        assert!(!red.reduce(&Mat2::s()).unwrap().member);
    }

    #[test]
    fn gamma1_4_word_round_trip() {
        let sym = fixtures::gamma1_4();
        let red = Reducer::new(&sym).unwrap();
        let gens = red.generators().clone();
        // Deterministic pseudo-random words in T, A.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..100 {
            let len = (next() % 12) as usize + 1;
            let letters: Vec<(usize, i8)> = (0..len)
                .map(|_| {
                    let r = next();
                    ((r % 2) as usize, if r & 4 == 0 { 1 } else { -1 })
                })
                .collect();
            let target = eval_letters(&gens, &letters);
            let w = red.reduce(&target).unwrap();
            assert!(w.member, "{target} should reduce");
            let back = w.eval(&gens);
            let signed = if w.sign > 0 { back } else { back.neg() };
            assert_eq!(signed, target);
        }
    }

    #[test]
    fn full_group_symbol_reduces_everything() {
        let sym = SignedFareySymbol::from_parts(
            &[(0, 1)],
            vec![Label::Circle, Label::Bullet { sign: 1 }],
            true,
        );
        let red = Reducer::new(&sym).unwrap();
        for mat in [
            Mat2::t(),
            Mat2::s(),
            m(2, 1, 1, 1),
            m(-17, 12, -78, 55),
            m(169, -36, 108, -23),
        ] {
            let w = red.reduce(&mat).unwrap();
            assert!(w.member, "{mat}");
            let back = w.eval(red.generators());
            let signed = if w.sign > 0 { back } else { back.neg() };
            assert_eq!(signed, mat);
        }
    }

    #[test]
    fn lift_membership_signs() {
        // In <T, -A> (the lift G2 of Gamma_1(4)-bar), T^-1 A is replaced by
        // its negative.
        let sym = fixtures::gamma1_4();
        let red = Reducer::new(&sym).unwrap();
        let h = m(1, 0, -4, 1); // T^-1 A
        let x_g1 = F2Vec::from_bits(&[false, false]);
        let x_g2 = F2Vec::from_bits(&[false, true]);
        assert!(red.member_in_lift(&x_g1, &h).unwrap());
        assert!(!red.member_in_lift(&x_g2, &h).unwrap());
        assert!(red.member_in_lift(&x_g2, &h.neg()).unwrap());
    }
}
