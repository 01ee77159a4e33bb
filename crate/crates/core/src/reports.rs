//! `analyze` and `census` reports.

use serde::Serialize;

use crate::error::{Result, Side};
use crate::finring::{enumerate_derivations, enumerate_ideals, inner_derivation, Derivation, FiniteRing, RingRef};
use crate::gabriel::{enumerate_gabriel_filters, is_differential, is_faithful, GabrielFilter, NamedFilter};
use crate::io::ring_iso_hint;
use crate::quotient::{is_perfect_filter, ring_of_quotients};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealLists {
    pub right: Vec<Vec<usize>>,
    pub left: Vec<Vec<usize>>,
    pub two_sided: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationEntry {
    pub name: String,
    pub table: Vec<usize>,
    /// Elements `a` with `δ = [a, -]`.
    pub inner_by: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedFilterEntry {
    pub name: String,
    pub side: String,
    pub min_ideal: Vec<usize>,
    pub members: usize,
    pub faithful: bool,
    pub differential: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalyzeReport {
    pub ring: String,
    pub size: usize,
    pub commutative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iso_hint: Option<String>,
    pub ideals: IdealLists,
    pub derivations: Vec<DerivationEntry>,
    pub filters: Vec<NamedFilterEntry>,
}

fn lists(r: &FiniteRing, side: Side) -> Vec<Vec<usize>> {
    enumerate_ideals(r, side).iter().map(|s| s.members().to_vec()).collect()
}

fn inner_by(r: &FiniteRing, d: &Derivation) -> Vec<usize> {
    (0..r.size()).filter(|&a| inner_derivation(r, a) == d.table).collect()
}

pub fn analyze(r: &RingRef) -> Result<AnalyzeReport> {
    let ders = enumerate_derivations(r);
    let mut filters = Vec::new();
    for side in [Side::Right, Side::Left] {
        for named in NamedFilter::ALL {
            let f = named.build(r, side)?;
            filters.push(NamedFilterEntry {
                name: named.as_str().to_string(),
                side: side.as_str().to_string(),
                min_ideal: f.min_ideal().members().to_vec(),
                members: f.members().len(),
                faithful: is_faithful(&f),
                differential: is_differential(&f, &ders)?.differential,
            });
        }
    }
    Ok(AnalyzeReport {
        ring: r.name().to_string(),
        size: r.size(),
        commutative: r.is_commutative(),
        iso_hint: ring_iso_hint(r),
        ideals: IdealLists { right: lists(r, Side::Right), left: lists(r, Side::Left), two_sided: lists(r, Side::TwoSided) },
        derivations: ders.iter().map(|d| DerivationEntry { name: d.name.clone(), table: d.table.clone(), inner_by: inner_by(r, d) }).collect(),
        filters,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub min_ideal: Vec<usize>,
    pub members: usize,
    pub names: Vec<String>,
    pub faithful: bool,
    pub perfect: bool,
    pub quotient_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_iso_hint: Option<String>,
    /// Derivation names for which the filter is differential.
    pub differential_for: Vec<String>,
    pub differential: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub ring: String,
    pub side: String,
    pub derivations: usize,
    pub filters: Vec<CensusRow>,
    pub differential: usize,
    pub not_differential: usize,
}

fn names_of(f: &GabrielFilter) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for n in NamedFilter::ALL {
        if &n.build(f.ring(), f.side())? == f {
            out.push(n.as_str().to_string());
        }
    }
    Ok(out)
}

/// Every right Gabriel filter against every derivation.
pub fn census(r: &RingRef) -> Result<CensusReport> {
    let ders = enumerate_derivations(r);
    let mut rows = Vec::new();
    for f in enumerate_gabriel_filters(r, Side::Right)? {
        let mut differential_for = Vec::new();
        for d in &ders {
            if is_differential(&f, std::slice::from_ref(d))?.differential {
                differential_for.push(d.name.clone());
            }
        }
        let qr = ring_of_quotients(&f)?;
        rows.push(CensusRow {
            min_ideal: f.min_ideal().members().to_vec(),
            members: f.members().len(),
            names: names_of(&f)?,
            faithful: is_faithful(&f),
            perfect: is_perfect_filter(&f)?.perfect,
            quotient_size: qr.size(),
            quotient_iso_hint: ring_iso_hint(qr.ring()),
            differential: is_differential(&f, &ders)?.differential,
            differential_for,
        });
    }
    let differential = rows.iter().filter(|r| r.differential).count();
    Ok(CensusReport {
        ring: r.name().to_string(),
        side: Side::Right.as_str().to_string(),
        derivations: ders.len(),
        not_differential: rows.len() - differential,
        differential,
        filters: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::bundled_ring;

    #[test]
    fn census_counts() {
        let z4 = census(&bundled_ring("z4").unwrap()).unwrap();
        assert_eq!(z4.filters.len(), 2);
        assert_eq!(z4.not_differential, 0);
        let z6 = census(&bundled_ring("z6").unwrap()).unwrap();
        let even = z6.filters.iter().find(|f| f.min_ideal == [0, 2, 4]).unwrap();
        assert_eq!(even.quotient_size, 3);
        assert!(even.perfect);
    }

    #[test]
    fn t2f2_analysis() {
        let a = analyze(&bundled_ring("t2f2").unwrap()).unwrap();
        assert_eq!(a.ideals.right.len(), 7);
        assert_eq!(a.derivations.len(), 4);
        assert!(a.derivations.iter().all(|d| !d.inner_by.is_empty()));
        let lambek = a.filters.iter().find(|f| f.name == "lambek" && f.side == "right").unwrap();
        assert!(lambek.faithful && lambek.differential);
    }
}
