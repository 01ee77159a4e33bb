//! Extending δ-derivations along `q: M → M_F`.
//!
//! The formula `D(f)(i) = d̄(f(i)) − f(δ(i))` needs `d(T(M)) ⊆ T(M)` and `δ(I₀) ⊆ I₀`.
//! The search strategy propagates `D(q(m)) = q(d(m))` through additivity and the
//! Leibniz rule and then branches exhaustively, so it also decides uniqueness.

use std::fmt;

use crate::error::{Error, Result, Side};
use crate::finring::search::{additive_rule, Search};
use crate::finring::{check_module_derivation_with, check_ring_derivation, Derivation, FiniteModule};
use crate::gabriel::GabrielFilter;
use crate::quotient::{module_of_quotients, q12_map, ring_of_quotients, QuotientModule, QuotientRing};

/// Largest carrier on which extensions are enumerated.
pub const MAX_EXTENSION_CARRIER: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Formula,
    Search,
    Auto,
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "formula" => Some(Strategy::Formula),
            "search" => Some(Strategy::Search),
            "auto" => Some(Strategy::Auto),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Formula,
    Search,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Search => "search",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionResult {
    pub method: Method,
    /// The extension on the carrier of `M_F`.
    pub table: Vec<usize>,
    pub commutes: bool,
    /// Number of extensions found by exhaustive search, when it ran.
    pub count: Option<usize>,
}

impl ExtensionResult {
    pub fn unique(&self) -> Option<bool> {
        self.count.map(|c| c == 1)
    }

    pub fn derivation(&self, name: &str) -> Derivation {
        Derivation::new(name, self.table.clone())
    }
}

/// First `m ∈ T(M)` with `d(m) ∉ T(M)`.
pub fn torsion_violation(qm: &QuotientModule, d: &[usize]) -> Option<usize> {
    qm.torsion().members().iter().copied().find(|&m| !qm.torsion().contains(d[m]))
}

/// `d̄(m + T(M)) = d(m) + T(M)` on the reduced module.
pub fn induced_on(qm: &QuotientModule, delta: &[usize], d: &[usize]) -> Result<Derivation> {
    if let Some(m) = torsion_violation(qm, d) {
        return Err(Error::TorsionNotPreserved { element: m, image: d[m] });
    }
    let proj = qm.projection();
    let mut table = vec![usize::MAX; qm.reduced().size()];
    for (m, &c) in proj.iter().enumerate() {
        table[c] = proj[d[m]];
    }
    check_module_derivation_with(qm.reduced(), Some(delta), None, &table)?;
    Ok(Derivation::new("induced", table))
}

pub fn induced_derivation(f: &GabrielFilter, m: &FiniteModule, delta: &[usize], d: &[usize]) -> Result<Derivation> {
    induced_on(&module_of_quotients(f, m)?, delta, d)
}

fn commutes(qm: &QuotientModule, d: &[usize], ext: &[usize]) -> bool {
    let q = qm.q();
    (0..d.len()).all(|m| ext[q[m]] == q[d[m]])
}

fn formula(qm: &QuotientModule, delta: &[usize], d: &[usize]) -> Result<Vec<usize>> {
    let bar = induced_on(qm, delta, d).map_err(|e| match e {
        Error::TorsionNotPreserved { element, image } => {
            Error::FormulaInapplicable(format!("d does not preserve torsion: d({element}) = {image}"))
        }
        other => other,
    })?;
    let ideal = qm.ideal_members();
    let mut dpos = Vec::with_capacity(ideal.len());
    for &i in ideal {
        dpos.push(qm.ideal_position(delta[i]).ok_or_else(|| {
            Error::FormulaInapplicable(format!("δ({i}) = {} leaves the minimal ideal", delta[i]))
        })?);
    }
    let red = qm.reduced();
    let mut table = Vec::with_capacity(qm.size());
    for f in qm.carrier() {
        let v: Vec<usize> = (0..ideal.len()).map(|p| red.sub(bar.table[f[p]], f[dpos[p]])).collect();
        table.push(qm.lookup(&v).ok_or_else(|| Error::InternalInconsistency("formula leaves the carrier".into()))?);
    }
    Ok(table)
}

/// Every δ-derivation of `M_F` commuting with `q`, by propagation and exhaustive branching.
pub fn enumerate_extensions_on(qm: &QuotientModule, delta: &[usize], d: &[usize]) -> Result<Vec<Vec<usize>>> {
    let c = qm.size();
    if c > MAX_EXTENSION_CARRIER {
        return Err(Error::SearchSpaceTooLarge { size: c, bound: MAX_EXTENSION_CARRIER });
    }
    let m = qm.module();
    let gens = qm.ring().additive_generators();
    let q = qm.q();
    let found = Search::new(c, c, |x, a, out| {
        additive_rule(m.group(), m.group(), x, a, out);
        let dx = a[x] as usize;
        for &g in &gens {
            out.push((m.act_right(x, g), m.add(m.act_right(dx, g), m.act_right(x, delta[g]))));
        }
    })
    .seed(m.zero(), m.zero())
    .seeds((0..d.len()).map(|x| (q[x], q[d[x]])))
    .run();
    for t in &found {
        check_module_derivation_with(m, Some(delta), None, t)?;
    }
    Ok(found)
}

pub fn enumerate_extensions(f: &GabrielFilter, m: &FiniteModule, delta: &[usize], d: &[usize]) -> Result<Vec<Vec<usize>>> {
    enumerate_extensions_on(&module_of_quotients(f, m)?, delta, d)
}

/// Extends `d` to `M_F`, validated against the `R`-action and checked to commute with `q`.
pub fn extend_on(qm: &QuotientModule, delta: &[usize], d: &[usize], strategy: Strategy) -> Result<ExtensionResult> {
    check_module_derivation_with(qm.base(), Some(delta), None, d)?;
    let by_search = |qm: &QuotientModule| -> Result<ExtensionResult> {
        let found = enumerate_extensions_on(qm, delta, d)?;
        match found.len() {
            0 => Err(Error::NoExtension),
            1 => Ok(ExtensionResult { method: Method::Search, table: found[0].clone(), commutes: true, count: Some(1) }),
            n => Err(Error::InternalInconsistency(format!("{n} distinct extensions"))),
        }
    };
    let result = match strategy {
        Strategy::Search => by_search(qm)?,
        Strategy::Formula => ExtensionResult { method: Method::Formula, table: formula(qm, delta, d)?, commutes: false, count: None },
        Strategy::Auto => match formula(qm, delta, d) {
            Ok(t) => ExtensionResult { method: Method::Formula, table: t, commutes: false, count: None },
            Err(Error::FormulaInapplicable(_)) => by_search(qm)?,
            Err(e) => return Err(e),
        },
    };
    check_module_derivation_with(qm.module(), Some(delta), None, &result.table)?;
    let ok = commutes(qm, d, &result.table);
    if !ok {
        return Err(Error::InternalInconsistency("extension does not commute with q".into()));
    }
    Ok(ExtensionResult { commutes: ok, ..result })
}

/// The extension `δ_F` of a ring derivation to `R_F`, validated as a ring derivation.
pub fn extend_ring_derivation(qr: &QuotientRing, delta: &[usize], strategy: Strategy) -> Result<ExtensionResult> {
    let ext = extend_on(qr.module(), delta, delta, strategy)?;
    check_ring_derivation(qr.ring(), &ext.table)?;
    Ok(ext)
}

/// `D(φ·s) = D(φ)·s + φ·δ_F(s)` for the `R_F`-action on `M_F`.
pub fn check_ring_action_law(qr: &QuotientRing, qm: &QuotientModule, ext: &[usize], delta_ext: &[usize]) -> Result<()> {
    let act = qr.act_on(qm)?;
    check_module_derivation_with(&act, Some(delta_ext), None, ext)
}

/// Extension with every available validation: the `R`-law, commutation with `q`, and the
/// `R_F`-law against the extension of δ to `R_F`.
pub fn extend_derivation(
    f: &GabrielFilter,
    m: &FiniteModule,
    delta: &[usize],
    d: &[usize],
    strategy: Strategy,
) -> Result<ExtensionResult> {
    let qm = module_of_quotients(f, m)?;
    let ext = extend_on(&qm, delta, d, strategy)?;
    let qr = ring_of_quotients(f)?;
    let dext = extend_ring_derivation(&qr, delta, Strategy::Auto)?;
    check_ring_action_law(&qr, &qm, &ext.table, &dext.table)?;
    Ok(ext)
}

/// The four identities `d₁q₁ = q₁d`, `d₂q₂ = q₂d`, `d₂q₁₂ = q₁₂d₁`, `q₁₂q₁ = q₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementReport {
    pub first_commutes: bool,
    pub second_commutes: bool,
    pub q12_intertwines: bool,
    pub q12_factors: bool,
    pub agree: bool,
    pub witness: Option<String>,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub q12: Vec<usize>,
}

/// Agreement of the extensions given on both modules of quotients.
pub fn agreement_from(
    a: &QuotientModule,
    b: &QuotientModule,
    d: &[usize],
    d1: &[usize],
    d2: &[usize],
) -> Result<AgreementReport> {
    let q12 = q12_map(a, b)?;
    Ok(prism(a, b, q12, d, d1, d2))
}

/// The prism identities for a `q₁₂` already computed by [`q12_map`].
pub fn prism(a: &QuotientModule, b: &QuotientModule, q12: Vec<usize>, d: &[usize], d1: &[usize], d2: &[usize]) -> AgreementReport {
    let (q1, q2) = (a.q(), b.q());
    let mut witness = None;
    let first_commutes = (0..d.len()).all(|m| d1[q1[m]] == q1[d[m]]);
    let second_commutes = (0..d.len()).all(|m| d2[q2[m]] == q2[d[m]]);
    let bad = (0..a.size()).find(|&s| d2[q12[s]] != q12[d1[s]]);
    if let Some(s) = bad {
        witness = Some(format!("d₂(q₁₂({s})) ≠ q₁₂(d₁({s}))"));
    }
    let q12_factors = (0..d.len()).all(|m| q12[q1[m]] == q2[m]);
    let q12_intertwines = bad.is_none();
    let agree = first_commutes && second_commutes && q12_intertwines && q12_factors;
    if !agree && witness.is_none() {
        witness = Some("an extension does not commute with q".into());
    }
    AgreementReport {
        first_commutes,
        second_commutes,
        q12_intertwines,
        q12_factors,
        agree,
        witness,
        first: d1.to_vec(),
        second: d2.to_vec(),
        q12,
    }
}

/// Extends `d` to `M_{F₁}` and `M_{F₂}` and checks the prism.
pub fn check_agreement_on(a: &QuotientModule, b: &QuotientModule, delta: &[usize], d: &[usize]) -> Result<AgreementReport> {
    let missing = |e: Error| match e {
        Error::NoExtension | Error::FormulaInapplicable(_) | Error::TorsionNotPreserved { .. } => {
            Error::ExtensionMissing(e.to_string())
        }
        other => other,
    };
    let d1 = extend_on(a, delta, d, Strategy::Auto).map_err(missing)?;
    let d2 = extend_on(b, delta, d, Strategy::Auto).map_err(missing)?;
    agreement_from(a, b, d, &d1.table, &d2.table)
}

pub fn check_agreement(
    f1: &GabrielFilter,
    f2: &GabrielFilter,
    m: &FiniteModule,
    delta: &[usize],
    d: &[usize],
) -> Result<AgreementReport> {
    if !f1.is_subfilter_of(f2) {
        return Err(Error::NotNested);
    }
    let a = module_of_quotients(f1, m)?;
    let b = module_of_quotients(f2, m)?;
    check_agreement_on(&a, &b, delta, d)
}

/// `R` with both actions as a right module only, the usual input for ring-level checks.
pub fn ring_as_module(f: &GabrielFilter) -> FiniteModule {
    debug_assert_eq!(f.side(), Side::Right);
    FiniteModule::regular_right(f.ring())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finring::{enumerate_derivations, find_ring_isomorphism, inner_derivation, FiniteRing, Subset};
    use crate::gabriel::{filter_closure, improper_filter, lambek_filter, trivial_filter};

    #[test]
    fn zero_derivation_extends_to_zero() {
        let r = Arc::new(FiniteRing::zmod(6));
        let f = filter_closure(&r, &[Subset::from_members(6, [0, 2, 4])], Side::Right).unwrap();
        let m = FiniteModule::regular_right(&r);
        let z = vec![0; 6];
        let e = extend_derivation(&f, &m, &z, &z, Strategy::Auto).unwrap();
        assert_eq!(e.method, Method::Formula);
        assert!(e.table.iter().all(|&x| x == 0));
        assert_eq!(enumerate_extensions(&f, &m, &z, &z).unwrap().len(), 1);
        let bar = induced_derivation(&f, &m, &z, &z).unwrap();
        assert_eq!(bar.table, vec![0, 0, 0]);
    }

    #[test]
    fn improper_filter_gives_the_zero_map_on_zero() {
        let r = Arc::new(FiniteRing::dual_numbers_f2());
        let f = improper_filter(&r, Side::Right);
        let m = FiniteModule::regular_right(&r);
        for d in enumerate_derivations(&r) {
            let e = extend_derivation(&f, &m, &d.table, &d.table, Strategy::Search).unwrap();
            assert_eq!(e.table, vec![0]);
        }
    }

    #[test]
    fn formula_and_search_agree_on_dual_numbers() {
        let r = Arc::new(FiniteRing::dual_numbers_f2());
        let f = trivial_filter(&r, Side::Right);
        let m = FiniteModule::regular_right(&r);
        for d in enumerate_derivations(&r) {
            let a = extend_derivation(&f, &m, &d.table, &d.table, Strategy::Formula).unwrap();
            let b = extend_derivation(&f, &m, &d.table, &d.table, Strategy::Search).unwrap();
            assert_eq!(a.table, b.table);
        }
    }

    #[test]
    fn inner_derivation_extends_to_inner_derivation_of_qmax() {
        let r = Arc::new(FiniteRing::upper_triangular_2(2));
        let f = lambek_filter(&r, Side::Right).unwrap();
        let qr = ring_of_quotients(&f).unwrap();
        let e11 = r.element("e11").unwrap();
        let ad = inner_derivation(&r, e11);
        let ext = extend_ring_derivation(&qr, &ad, Strategy::Auto).unwrap();
        assert_eq!(ext.table, inner_derivation(qr.ring(), qr.q()[e11]));
        let iso = find_ring_isomorphism(qr.ring(), &FiniteRing::full_matrix_2(2)).unwrap();
        let m2 = FiniteRing::full_matrix_2(2);
        let inner_m2 = inner_derivation(&m2, iso[qr.q()[e11]]);
        for x in 0..qr.size() {
            assert_eq!(iso[ext.table[x]], inner_m2[iso[x]]);
        }
    }

    #[test]
    fn agreement_between_trivial_and_lambek() {
        let r = Arc::new(FiniteRing::upper_triangular_2(2));
        let f1 = trivial_filter(&r, Side::Right);
        let f2 = lambek_filter(&r, Side::Right).unwrap();
        let m = FiniteModule::regular_right(&r);
        for d in enumerate_derivations(&r) {
            let rep = check_agreement(&f1, &f2, &m, &d.table, &d.table).unwrap();
            assert!(rep.agree, "{:?}", rep.witness);
        }
        assert!(matches!(check_agreement(&f2, &f1, &m, &[0; 8], &[0; 8]), Err(Error::NotNested)));
    }
}
