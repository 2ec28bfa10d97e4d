//! A group made ready for computation: its symbol, its reducer, and the
//! invariants that feed the level, genus and dimension formulas.

use crate::arith::Cusp;
use crate::farey::{build_farey, BuildOptions, FareyError, Reducer, SignedFareySymbol, SymbolOracle};
use crate::groups::{cusp_width, GroupError, GroupSpec, Member, StandardOracle};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Farey(#[from] FareyError),
    #[error("cross-check failed: {0}")]
    Inconsistency(String),
}

/// One class of equivalent symbol cusps.
#[derive(Clone, Debug)]
pub struct CuspClass {
    pub representative: Cusp,
    pub width: u64,
    /// Indices of the symbol cusps in the class.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GroupInvariants {
    /// Index of the projective image in PSL2(Z).
    pub proj_index: u64,
    pub cusp_classes: Vec<CuspClass>,
    pub nu2: usize,
    pub nu3: usize,
    pub nu_inf: usize,
    /// lcm of the cusp widths (the Wohlfahrt level); depends only on the
    /// projective image.
    pub general_level: u32,
    pub genus: u64,
    pub contains_minus_one: bool,
    pub min_generators: usize,
}

/// Source of Farey symbols for group specs.  The default builds every symbol
/// from scratch; the CLI wraps this with a disk cache.
pub trait SymbolProvider: Sync {
    fn symbol_for(&self, spec: &GroupSpec) -> Result<SignedFareySymbol, Error>;
}

/// Provider that always constructs the symbol.
pub struct FreshSymbols;

impl SymbolProvider for FreshSymbols {
    fn symbol_for(&self, spec: &GroupSpec) -> Result<SignedFareySymbol, Error> {
        build_symbol(spec)
    }
}

/// In-memory memoization on top of another provider.  Only standard specs
/// are keyed (symbol-given specs already hold their symbol).
pub struct MemoProvider<'a> {
    inner: &'a dyn SymbolProvider,
    cache: std::sync::Mutex<std::collections::HashMap<String, SignedFareySymbol>>,
}

impl<'a> MemoProvider<'a> {
    pub fn new(inner: &'a dyn SymbolProvider) -> Self {
        MemoProvider {
            inner,
            cache: Default::default(),
        }
    }
}

impl SymbolProvider for MemoProvider<'_> {
    fn symbol_for(&self, spec: &GroupSpec) -> Result<SignedFareySymbol, Error> {
        if !spec.is_standard() {
            return self.inner.symbol_for(spec);
        }
        let key = spec.to_string();
        if let Some(sym) = self.cache.lock().unwrap().get(&key) {
            return Ok(sym.clone());
        }
        let sym = self.inner.symbol_for(spec)?;
        self.cache.lock().unwrap().insert(key, sym.clone());
        Ok(sym)
    }
}

/// Build the Farey symbol of a spec, verifying the index against the
/// classical formula for the standard families.
pub fn build_symbol(spec: &GroupSpec) -> Result<SignedFareySymbol, Error> {
    match spec {
        GroupSpec::FromFarey(sym) | GroupSpec::Lift(sym, _) => {
            let issues = sym.validate();
            if !issues.is_empty() {
                return Err(FareyError::Invalid(issues).into());
            }
            Ok((**sym).clone())
        }
        _ => {
            let oracle = StandardOracle::new(spec)?;
            let opts = BuildOptions {
                expected_index: Some(spec.proj_index()?),
                ..Default::default()
            };
            log::info!("building Farey symbol for {spec}");
            let sym = build_farey(&oracle, &opts)?;
            log::info!("built symbol for {spec}: {} edges", sym.n_edges());
            Ok(sym)
        }
    }
}

/// A group with its symbol, reducer and derived invariants.
pub struct PreparedGroup {
    pub spec: GroupSpec,
    pub symbol: SignedFareySymbol,
    pub reducer: Arc<Reducer>,
    pub invariants: GroupInvariants,
}

impl PreparedGroup {
    /// Strict membership oracle for the group named by the spec.
    pub fn strict_oracle(&self) -> Result<Box<dyn Member + '_>, Error> {
        Ok(match &self.spec {
            GroupSpec::FromFarey(_) => Box::new(SymbolOracle::new(self.reducer.clone())),
            GroupSpec::Lift(_, x) => {
                Box::new(SymbolOracle::for_lift(self.reducer.clone(), x.clone()))
            }
            spec => Box::new(StandardOracle::new(spec)?),
        })
    }

    /// Projective membership oracle (membership of the image in PSL2(Z)).
    pub fn projective_oracle(&self) -> SymbolOracle {
        SymbolOracle::new(self.reducer.clone())
    }

    pub fn n_generators(&self) -> usize {
        self.reducer.generators().len()
    }
}

pub fn prepare(spec: &GroupSpec) -> Result<PreparedGroup, Error> {
    prepare_with(spec, &FreshSymbols)
}

pub fn prepare_with(
    spec: &GroupSpec,
    provider: &dyn SymbolProvider,
) -> Result<PreparedGroup, Error> {
    let symbol = provider.symbol_for(spec)?;
    prepare_from_symbol(spec.clone(), symbol)
}

pub fn prepare_from_symbol(
    spec: GroupSpec,
    symbol: SignedFareySymbol,
) -> Result<PreparedGroup, Error> {
    let reducer = Arc::new(Reducer::new(&symbol)?);
    let invariants = compute_invariants(&spec, &symbol, &reducer)?;
    Ok(PreparedGroup {
        spec,
        symbol,
        reducer,
        invariants,
    })
}

fn compute_invariants(
    spec: &GroupSpec,
    symbol: &SignedFareySymbol,
    reducer: &Arc<Reducer>,
) -> Result<GroupInvariants, Error> {
    let mu = symbol.proj_index();
    if spec.is_standard() {
        let formula = spec.proj_index()?;
        if formula != mu {
            return Err(Error::Inconsistency(format!(
                "symbol index {mu} disagrees with formula index {formula} for {spec}"
            )));
        }
    }
    let (nu2, nu3) = symbol.counts();

    // Widths by incremental search against the projective oracle; the
    // projective image, hence every width, is the same for standard specs
    // and their symbols, but the symbol oracle works uniformly.
    let proj_oracle: Box<dyn Member> = if spec.is_standard() {
        Box::new(StandardOracle::new(spec)?)
    } else {
        Box::new(SymbolOracle::new(reducer.clone()))
    };
    let classes_idx = symbol.cusp_classes();
    let mut cusp_classes = Vec::with_capacity(classes_idx.len());
    for members in classes_idx {
        let representative = symbol.cusp(members[0]);
        let width = cusp_width(proj_oracle.as_ref(), &representative, mu)?;
        cusp_classes.push(CuspClass {
            representative,
            width,
            members,
        });
    }
    let width_sum: u64 = cusp_classes.iter().map(|c| c.width).sum();
    if width_sum != mu {
        return Err(Error::Inconsistency(format!(
            "cusp widths sum to {width_sum}, index is {mu}"
        )));
    }
    let general_level = cusp_classes
        .iter()
        .fold(1u64, |acc, c| num_integer::lcm(acc, c.width));
    let general_level = u32::try_from(general_level)
        .map_err(|_| Error::Inconsistency("general level does not fit u32".into()))?;

    let nu_inf = cusp_classes.len();
    // genus = 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2, a non-negative integer.
    let twelve_genus = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nu_inf as i64;
    if twelve_genus < 0 || twelve_genus % 12 != 0 {
        return Err(Error::Inconsistency(format!(
            "genus formula gives {twelve_genus}/12 for {spec}"
        )));
    }
    // Second route: the Euler characteristic of the glued polygon.  After
    // side pairing the quotient surface has one face, (n + nu2 + nu3)/2
    // edges, and nu_inf + nu2 + nu3 vertices, so
    // 2 - 2 genus = V - E + F.
    let n_edges = symbol.n_edges() as i64;
    let euler = (nu_inf + nu2 + nu3) as i64 - (n_edges + nu2 as i64 + nu3 as i64) / 2 + 1;
    if 2 - 2 * (twelve_genus / 12) != euler {
        return Err(Error::Inconsistency(format!(
            "genus formula and Euler characteristic disagree for {spec}: {} vs {}",
            twelve_genus / 12,
            (2 - euler) / 2
        )));
    }

    let min_generators = symbol.min_generators();
    if min_generators != reducer.generators().len() {
        return Err(Error::Inconsistency(
            "generator count disagrees with the Euler formula".into(),
        ));
    }

    Ok(GroupInvariants {
        proj_index: mu,
        cusp_classes,
        nu2,
        nu3,
        nu_inf,
        general_level,
        genus: (twelve_genus / 12) as u64,
        contains_minus_one: symbol.contains_minus_one(),
        min_generators,
    })
}

/// Identify which lift of the symbol's projective group a strict oracle
/// describes: the sign vector records, per generator, which sign lies in the
/// group.  Fails if the oracle does not describe a lift of this projective
/// group without -1.
pub fn identify_lift(reducer: &Reducer, oracle: &dyn Member) -> Result<crate::f2::F2Vec, Error> {
    let gens = reducer.generators();
    let mut x = crate::f2::F2Vec::zero(gens.len());
    for (i, g) in gens.gens.iter().enumerate() {
        let plus = oracle.contains(&g.mat);
        let minus = oracle.contains(&g.mat.neg());
        match (plus, minus) {
            (true, false) => {}
            (false, true) => x.set(i, true),
            _ => {
                return Err(Error::Inconsistency(format!(
                    "oracle is not a lift of this projective group: generator {} has signs ({plus}, {minus})",
                    g.mat
                )))
            }
        }
    }
    Ok(x)
}

/// Check that the general level of a group, computed from its symbol, is
/// what the caller expects.  Convenience for tests and the CLI `level`
/// command.
pub fn general_level(spec: &GroupSpec) -> Result<u32, Error> {
    Ok(prepare(spec)?.invariants.general_level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(spec: &str) -> GroupInvariants {
        prepare(&spec.parse().unwrap()).unwrap().invariants
    }

    #[test]
    fn gamma1_4_invariants() {
        let i = inv("gamma1:4");
        assert_eq!(i.proj_index, 6);
        assert_eq!(i.nu_inf, 3);
        assert_eq!((i.nu2, i.nu3), (0, 0));
        assert_eq!(i.general_level, 4);
        assert_eq!(i.genus, 0);
        let mut widths: Vec<u64> = i.cusp_classes.iter().map(|c| c.width).collect();
        widths.sort();
        assert_eq!(widths, vec![1, 1, 4]);
    }

    #[test]
    fn gamma1_6_invariants() {
        let i = inv("gamma1:6");
        assert_eq!(i.proj_index, 12);
        assert_eq!(i.nu_inf, 4);
        assert_eq!(i.general_level, 6);
        assert_eq!(i.genus, 0);
        let mut widths: Vec<u64> = i.cusp_classes.iter().map(|c| c.width).collect();
        widths.sort();
        assert_eq!(widths, vec![1, 2, 3, 6]);
    }

    #[test]
    fn general_levels_of_families() {
        assert_eq!(inv("gamma:6").general_level, 6);
        assert_eq!(inv("gamma0:20").general_level, 20);
        assert_eq!(inv("gamma0:8").general_level, 8);
        assert_eq!(inv("gamma0:9").general_level, 9);
        assert_eq!(inv("full").general_level, 1);
    }

    #[test]
    fn gamma0_20_invariants() {
        let i = inv("gamma0:20");
        assert_eq!(i.proj_index, 36);
        assert_eq!(i.nu_inf, 6);
        assert_eq!(i.genus, 1);
        assert!(i.contains_minus_one);
    }

    #[test]
    fn reference_symbol_prepares_like_the_family() {
        use crate::farey::fixtures;
        let sym = fixtures::gamma1_6();
        let spec = GroupSpec::FromFarey(Box::new(sym));
        let p = prepare(&spec).unwrap();
        assert_eq!(p.invariants.general_level, 6);
        assert_eq!(p.invariants.proj_index, 12);
        assert!(!p.invariants.contains_minus_one);
    }

    #[test]
    fn lift_identification() {
        use crate::farey::fixtures;
        let p = prepare(&GroupSpec::FromFarey(Box::new(fixtures::gamma1_4()))).unwrap();
        let oracle = StandardOracle::new(&"gamma1:4".parse().unwrap()).unwrap();
        let x = identify_lift(&p.reducer, &oracle).unwrap();
        assert!(x.is_zero(), "reference symbol generators lie in Gamma_1(4)");
    }
}
