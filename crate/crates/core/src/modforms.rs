//! Cusp regularity and dimensions of spaces of cusp forms.
//!
//! For even weight k > 2 the dimension of S_k depends only on the projective
//! image (genus, elliptic counts, cusp count).  For odd k the lift matters
//! through the split of cusps into regular and irregular ones: a cusp of
//! width h with scaling matrix g is regular in a lift iff +g T^h g^-1 lies
//! in the lift strictly.

use crate::arith::Mat2;
use crate::f2::F2Vec;
use crate::groups::stabilizer_witness;
use crate::prepared::{Error, GroupInvariants, PreparedGroup};
use num_rational::Rational64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DimError {
    #[error("weight {0} is not supported (need k >= 2)")]
    BadWeight(u32),
    #[error("odd weight {0} needs the per-cusp regularity of a specific lift")]
    NeedRegularity(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimNote {
    /// Computed by the standard dimension formulas (k > 2).
    Formula,
    /// k = 2: the dimension equals the genus, outside the k > 2 formulas.
    GenusAtWeightTwo,
    /// Odd weight for a group containing -1: the space is zero.
    OddWeightWithMinusOne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub weight: u32,
    pub dim: i64,
    pub note: DimNote,
    pub mu: u64,
    pub genus: u64,
    pub nu2: usize,
    pub nu3: usize,
    pub nu_inf: usize,
    /// (regular, irregular) cusp counts; equal to (nu_inf, 0) in the even
    /// or -1-containing cases where the split is irrelevant.
    pub nu_inf_split: (usize, usize),
}

/// Odd-weight dimension for a lift with `nu_inf_plus` regular cusps, by the
/// combined formula
/// dim = (k-1) mu / 12 - nu_inf_plus / 2
///       + ([k/4] - (k-1)/4) nu2 + ([k/3] - (k-1)/3) nu3.
pub fn dim_odd_weight(inv: &GroupInvariants, nu_inf_plus: usize, k: u32) -> i64 {
    assert!(k >= 3 && k % 2 == 1);
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let k = i64::from(k);
    let dim = r(k - 1, 12) * r(inv.proj_index as i64, 1) - r(nu_inf_plus as i64, 2)
        + (r(k / 4, 1) - r(k - 1, 4)) * r(inv.nu2 as i64, 1)
        + (r(k / 3, 1) - r(k - 1, 3)) * r(inv.nu3 as i64, 1);
    assert!(dim.is_integer(), "odd-weight dimension must be integral");
    let dim = dim.to_integer();
    assert!(!dim.is_negative(), "dimension must be non-negative");
    dim
}

/// Even-weight dimension (k > 2), lift-independent:
/// dim = (k-1)(genus-1) + (k-2)/2 nu_inf + [k/4] nu2 + [k/3] nu3.
pub fn dim_even_weight(inv: &GroupInvariants, k: u32) -> i64 {
    assert!(k > 2 && k % 2 == 0);
    let k = i64::from(k);
    let dim = (k - 1) * (inv.genus as i64 - 1)
        + (k - 2) / 2 * inv.nu_inf as i64
        + k / 4 * inv.nu2 as i64
        + k / 3 * inv.nu3 as i64;
    assert!(dim >= 0, "dimension must be non-negative");
    dim
}

/// Dimension of S_k.  For odd k the caller passes the per-cusp-class
/// regularity flags of the lift in question (ignored for even k).
pub fn dim_cusp_forms(
    inv: &GroupInvariants,
    regular: Option<&[bool]>,
    k: u32,
) -> Result<DimensionReport, DimError> {
    if k < 2 {
        return Err(DimError::BadWeight(k));
    }
    let base = |dim: i64, note: DimNote, split: (usize, usize)| DimensionReport {
        weight: k,
        dim,
        note,
        mu: inv.proj_index,
        genus: inv.genus,
        nu2: inv.nu2,
        nu3: inv.nu3,
        nu_inf: inv.nu_inf,
        nu_inf_split: split,
    };
    if k == 2 {
        return Ok(base(
            inv.genus as i64,
            DimNote::GenusAtWeightTwo,
            (inv.nu_inf, 0),
        ));
    }
    if k % 2 == 0 {
        return Ok(base(dim_even_weight(inv, k), DimNote::Formula, (inv.nu_inf, 0)));
    }
    if inv.contains_minus_one {
        return Ok(base(0, DimNote::OddWeightWithMinusOne, (inv.nu_inf, 0)));
    }
    let regular = regular.ok_or(DimError::NeedRegularity(k))?;
    assert_eq!(regular.len(), inv.nu_inf);
    let plus = regular.iter().filter(|&&r| r).count();
    Ok(base(
        dim_odd_weight(inv, plus, k),
        DimNote::Formula,
        (plus, inv.nu_inf - plus),
    ))
}

#[derive(Clone, Debug)]
pub struct RegularityRow {
    pub representative: crate::arith::Cusp,
    pub width: u64,
    pub witness: Mat2,
    pub regular: bool,
}

#[derive(Clone, Debug)]
pub struct RegularityTable {
    pub rows: Vec<RegularityRow>,
    pub nu_inf_plus: usize,
    pub nu_inf_minus: usize,
}

/// Regularity of every cusp class in the lift named by x, tested directly
/// through strict lift membership of the stabilizer witness g T^h g^-1.
pub fn regularity_table(base: &PreparedGroup, x: &F2Vec) -> Result<RegularityTable, Error> {
    let mut rows = Vec::new();
    for class in &base.invariants.cusp_classes {
        let witness = stabilizer_witness(&class.representative, class.width);
        let regular = base.reducer.member_in_lift(x, &witness)?;
        rows.push(RegularityRow {
            representative: class.representative.clone(),
            width: class.width,
            witness,
            regular,
        });
    }
    let plus = rows.iter().filter(|r| r.regular).count();
    let minus = rows.len() - plus;
    Ok(RegularityTable {
        rows,
        nu_inf_plus: plus,
        nu_inf_minus: minus,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SameFormsVerdict {
    pub projectively_equal: bool,
    /// Equality of dim S_k for all even 4 <= k <= k_max.
    pub even_dims_equal: bool,
    /// The two criteria agree (the checkable face of the same-forms
    /// proposition).
    pub agree: bool,
}

/// Compare two groups: projective equality (mutual generator membership)
/// against equality of even-weight dimensions up to k_max.
pub fn same_forms_check(a: &PreparedGroup, b: &PreparedGroup, k_max: u32) -> SameFormsVerdict {
    let a_in_b = a
        .reducer
        .generators()
        .matrices()
        .all(|g| b.reducer.reduce(g).map(|w| w.member).unwrap_or(false));
    let b_in_a = b
        .reducer
        .generators()
        .matrices()
        .all(|g| a.reducer.reduce(g).map(|w| w.member).unwrap_or(false));
    let projectively_equal = a_in_b && b_in_a;
    let mut even_dims_equal = true;
    let mut k = 4;
    while k <= k_max {
        if dim_even_weight(&a.invariants, k) != dim_even_weight(&b.invariants, k) {
            even_dims_equal = false;
            break;
        }
        k += 2;
    }
    SameFormsVerdict {
        projectively_equal,
        even_dims_equal,
        agree: projectively_equal == even_dims_equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;
    use crate::prepared::prepare;

    #[test]
    fn full_group_even_dims() {
        let p = prepare(&GroupSpec::Full).unwrap();
        assert_eq!(dim_even_weight(&p.invariants, 4), 0);
        assert_eq!(dim_even_weight(&p.invariants, 10), 0);
        assert_eq!(dim_even_weight(&p.invariants, 12), 1);
        assert_eq!(dim_even_weight(&p.invariants, 16), 1);
        // Odd weight for a group with -1 is zero.
        let r = dim_cusp_forms(&p.invariants, None, 3).unwrap();
        assert_eq!((r.dim, r.note), (0, DimNote::OddWeightWithMinusOne));
    }

    #[test]
    fn weight_two_returns_genus_flagged() {
        let p = prepare(&"gamma0:20".parse().unwrap()).unwrap();
        let r = dim_cusp_forms(&p.invariants, None, 2).unwrap();
        assert_eq!((r.dim, r.note), (1, DimNote::GenusAtWeightTwo));
        assert!(dim_cusp_forms(&p.invariants, None, 1).is_err());
    }

    #[test]
    fn gamma1_4_odd_dims_by_regularity() {
        // nu_inf_plus of the four lifts takes the values 2 and 0, with
        // dim S_3 = 0 resp. 1 and dim S_5 = 1 resp. 2.
        let p = prepare(&"gamma1:4".parse().unwrap()).unwrap();
        for (plus, d3, d5) in [(2usize, 0, 1), (0usize, 1, 2)] {
            assert_eq!(dim_odd_weight(&p.invariants, plus, 3), d3);
            assert_eq!(dim_odd_weight(&p.invariants, plus, 5), d5);
        }
    }

    #[test]
    fn same_forms_gamma1_4_vs_gamma1_6() {
        let a = prepare(&"gamma1:4".parse().unwrap()).unwrap();
        let b = prepare(&"gamma1:6".parse().unwrap()).unwrap();
        let v = same_forms_check(&a, &b, 20);
        assert!(!v.projectively_equal);
        assert!(!v.even_dims_equal);
        assert!(v.agree);
        let v = same_forms_check(&a, &a, 20);
        assert!(v.projectively_equal && v.even_dims_equal && v.agree);
    }

    #[test]
    fn same_forms_for_two_lifts_of_one_group() {
        use crate::f2::F2Vec;
        let sym = crate::farey::fixtures::gamma1_4();
        let lift = |b: [bool; 2]| {
            prepare(&GroupSpec::Lift(Box::new(sym.clone()), F2Vec::from_bits(&b))).unwrap()
        };
        let g1 = lift([false, false]);
        let g3 = lift([true, false]);
        let v = same_forms_check(&g1, &g3, 20);
        assert!(v.projectively_equal && v.even_dims_equal && v.agree);
        // Odd weights distinguish the lifts.
        let d3_g1 = dim_cusp_forms(&g1.invariants, Some(&[true, true, false]), 3).unwrap();
        let d3_g3 = dim_cusp_forms(&g3.invariants, Some(&[false, false, false]), 3).unwrap();
        assert_eq!((d3_g1.dim, d3_g3.dim), (0, 1));
    }
}
