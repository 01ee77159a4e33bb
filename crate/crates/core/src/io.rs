//! JSON file formats: rings, modules, derivations, filter specs and reports. Indices are 0-based.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};
use crate::finring::ring::tables_of;
use crate::finring::{find_ring_isomorphism, is_ideal, ring_from_tables, AbelianGroup, Action, Derivation, FiniteModule, FiniteRing, RingRef, RingTables, Subset};
use crate::gabriel::{filter_closure, GabrielFilter, NamedFilter};
use crate::symmetric::{induce_symmetric_filter, NamedSymmetric, SymmetricContext, SymmetricFilter};

/// Parses JSON, reporting line and column on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedSpec(format!("{what}: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable report")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpecFile {
    pub name: String,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl RingSpecFile {
    pub fn to_ring(&self) -> Result<FiniteRing> {
        ring_from_tables(&RingTables {
            name: self.name.clone(),
            size: self.size,
            add: self.add.clone(),
            mul: self.mul.clone(),
            zero: self.zero,
            one: self.one,
            element_names: self.elements.clone(),
        })
    }

    pub fn from_ring(r: &FiniteRing) -> Self {
        let t = tables_of(r);
        RingSpecFile { name: t.name, size: t.size, elements: t.element_names, add: t.add, mul: t.mul, zero: t.zero, one: t.one }
    }
}

pub fn parse_ring(text: &str, what: &str) -> Result<RingRef> {
    let spec: RingSpecFile = parse_json(text, what)?;
    Ok(Arc::new(spec.to_ring()?))
}

/// A module over the ring it is loaded against: `right[x][r] = x·r`, `left[r][x] = r·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpecFile {
    pub name: String,
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<Vec<usize>>>,
}

fn flat(rows: &[Vec<usize>], nrows: usize, ncols: usize, what: &str) -> Result<Vec<u32>> {
    if rows.len() != nrows {
        return Err(Error::MalformedSpec(format!("{what} has {} rows, expected {nrows}", rows.len())));
    }
    let mut out = Vec::with_capacity(nrows * ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::MalformedSpec(format!("{what} row {i} has length {}, expected {ncols}", row.len())));
        }
        out.extend(row.iter().map(|&x| x as u32));
    }
    Ok(out)
}

impl ModuleSpecFile {
    pub fn to_module(&self, r: &RingRef) -> Result<FiniteModule> {
        let (m, n) = (self.size, r.size());
        if self.right.is_none() && self.left.is_none() {
            return Err(Error::MalformedSpec("module needs a right or a left action".into()));
        }
        let group = AbelianGroup::from_table(m, flat(&self.add, m, m, "add")?, self.zero)?;
        let right = self.right.as_ref().map(|t| flat(t, m, n, "right")).transpose()?.map(|t| Action::new(r.clone(), t));
        let left = self.left.as_ref().map(|t| flat(t, n, m, "left")).transpose()?.map(|t| Action::new(r.clone(), t));
        FiniteModule::new(self.name.clone(), group, right, left)
    }

    pub fn from_module(m: &FiniteModule) -> Self {
        let size = m.size();
        let add = (0..size).map(|x| (0..size).map(|y| m.add(x, y)).collect()).collect();
        let right = m.right_ring().map(|r| (0..size).map(|x| (0..r.size()).map(|s| m.act_right(x, s)).collect()).collect());
        let left = m.left_ring().map(|r| (0..r.size()).map(|s| (0..size).map(|x| m.act_left(s, x)).collect()).collect());
        ModuleSpecFile { name: m.name().to_string(), size, add, zero: m.zero(), right, left }
    }
}

/// `{"name": .., "table": [..]}`; without a table, the zero map of whatever carrier it is applied to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<usize>>,
}

impl DerivationFile {
    /// The table over a carrier of `size` elements with the given zero, shape-checked.
    pub fn table_for(&self, size: usize, zero: usize) -> Result<Vec<usize>> {
        match &self.table {
            None => Ok(vec![zero; size]),
            Some(t) if t.len() == size && t.iter().all(|&x| x < size) => Ok(t.clone()),
            Some(t) => Err(Error::MalformedSpec(format!("derivation `{}` has {} entries for a carrier of {size}", self.name, t.len()))),
        }
    }

    pub fn derivation_on(&self, r: &FiniteRing) -> Result<Derivation> {
        Ok(Derivation::new(self.name.clone(), self.table_for(r.size(), r.zero())?))
    }
}

/// `{"side": "right", "ideals": [[..],..]}` (seeds, closed under the Gabriel axioms) or `{"named": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FilterSpec {
    Named { named: String },
    Ideals {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        side: Option<String>,
        ideals: Vec<Vec<usize>>,
    },
}

fn parse_side(s: &str) -> Result<Side> {
    match s {
        "right" => Ok(Side::Right),
        "left" => Ok(Side::Left),
        other => Err(Error::MalformedSpec(format!("filter side must be `left` or `right`, got `{other}`"))),
    }
}

impl FilterSpec {
    /// Accepts inline JSON or a bare name.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            parse_json(t, "filter spec")
        } else if NamedFilter::parse(t).is_some() {
            Ok(FilterSpec::Named { named: t.to_string() })
        } else {
            Err(Error::MalformedSpec(format!("unknown filter `{t}`")))
        }
    }

    pub fn build(&self, r: &RingRef, default_side: Side) -> Result<GabrielFilter> {
        match self {
            FilterSpec::Named { named } => {
                let n = NamedFilter::parse(named).ok_or_else(|| Error::MalformedSpec(format!("unknown named filter `{named}`")))?;
                n.build(r, default_side)
            }
            FilterSpec::Ideals { side, ideals } => {
                let side = match side {
                    Some(s) => parse_side(s)?,
                    None => default_side,
                };
                if side != default_side {
                    return Err(Error::MalformedSpec(format!("expected a {default_side} filter, got {side}")));
                }
                let mut seeds = Vec::with_capacity(ideals.len());
                for members in ideals {
                    if members.iter().any(|&x| x >= r.size()) {
                        return Err(Error::MalformedSpec(format!("ideal {members:?} has an index out of range")));
                    }
                    let s = Subset::from_members(r.size(), members.iter().copied());
                    if s.len() != members.len() || !is_ideal(r, &s, side) {
                        return Err(Error::NotAnIdeal(members.clone()));
                    }
                    seeds.push(s);
                }
                filter_closure(r, &seeds, side)
            }
        }
    }

    pub fn of(f: &GabrielFilter) -> Self {
        FilterSpec::Ideals { side: Some(f.side().as_str().to_string()), ideals: f.member_lists() }
    }
}

/// `{"left": spec, "right": spec}` or `{"named": "sym-.."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymmetricSpec {
    Named { named: String },
    Pair { left: FilterSpec, right: FilterSpec },
}

impl SymmetricSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            parse_json(t, "symmetric filter spec")
        } else if NamedSymmetric::parse(t).is_some() {
            Ok(SymmetricSpec::Named { named: t.to_string() })
        } else {
            Err(Error::MalformedSpec(format!("unknown symmetric filter `{t}`")))
        }
    }

    pub fn build(&self, ctx: &Arc<SymmetricContext>) -> Result<SymmetricFilter> {
        match self {
            SymmetricSpec::Named { named } => NamedSymmetric::parse(named)
                .ok_or_else(|| Error::MalformedSpec(format!("unknown symmetric filter `{named}`")))?
                .build(ctx),
            SymmetricSpec::Pair { left, right } => {
                let r = ctx.ring();
                induce_symmetric_filter(ctx, &left.build(r, Side::Left)?, &right.build(r, Side::Right)?)
            }
        }
    }

    pub fn of(sf: &SymmetricFilter) -> Self {
        SymmetricSpec::Pair { left: FilterSpec::of(sf.left()), right: FilterSpec::of(sf.right()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub filter: FilterSpec,
    pub min_ideal: Vec<usize>,
    pub carrier_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring_iso_hint: Option<String>,
    pub q_kernel: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub method: String,
    pub unique: bool,
    pub commutes: bool,
    pub table: Vec<usize>,
}

/// A recognisable name for `r` among small standard rings, by isomorphism search.
pub fn ring_iso_hint(r: &FiniteRing) -> Option<String> {
    let n = r.size();
    if n == 1 {
        return Some("zero ring".into());
    }
    let mut catalogue = vec![FiniteRing::zmod(n)];
    match n {
        4 => catalogue.extend([
            FiniteRing::product(&FiniteRing::zmod(2), &FiniteRing::zmod(2)),
            FiniteRing::gf4(),
            FiniteRing::dual_numbers_f2(),
        ]),
        8 => catalogue.push(FiniteRing::upper_triangular_2(2)),
        16 => catalogue.push(FiniteRing::full_matrix_2(2)),
        _ => {}
    }
    catalogue.into_iter().find(|c| find_ring_isomorphism(r, c).is_some()).map(|c| c.name().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_round_trip_and_row_errors() {
        let r = FiniteRing::zmod(6);
        let spec = RingSpecFile::from_ring(&r);
        let back = parse_ring(&to_json(&spec), "z6").unwrap();
        assert_eq!(*back, r);
        let mut bad = spec.clone();
        bad.add[2].pop();
        let err = bad.to_ring().unwrap_err();
        assert!(matches!(&err, Error::MalformedSpec(s) if s.contains("row 2")), "{err}");
    }

    #[test]
    fn filter_specs() {
        let r: RingRef = Arc::new(FiniteRing::zmod(6));
        let f = FilterSpec::parse(r#"{"ideals":[[0,2,4]]}"#).unwrap().build(&r, Side::Right).unwrap();
        assert_eq!(f.member_lists(), vec![vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]);
        assert!(FilterSpec::parse("lambek").unwrap().build(&r, Side::Right).unwrap().is_trivial());
        assert!(matches!(FilterSpec::parse(r#"{"ideals":[[0,1]]}"#).unwrap().build(&r, Side::Right), Err(Error::NotAnIdeal(_))));
        assert!(FilterSpec::parse("nonsense").is_err());
        let spec = FilterSpec::of(&f);
        assert_eq!(to_json(&spec), r#"{"side":"right","ideals":[[0,2,4],[0,1,2,3,4,5]]}"#);
    }

    #[test]
    fn module_round_trip() {
        let r: RingRef = Arc::new(FiniteRing::dual_numbers_f2());
        let m = FiniteModule::regular_bimodule(&r);
        let spec = ModuleSpecFile::from_module(&m);
        let back = spec.to_module(&r).unwrap();
        assert_eq!(ModuleSpecFile::from_module(&back), spec);
    }

    #[test]
    fn iso_hints() {
        assert_eq!(ring_iso_hint(&FiniteRing::product(&FiniteRing::zmod(2), &FiniteRing::zmod(3))).as_deref(), Some("Z/6"));
        assert_eq!(ring_iso_hint(&FiniteRing::full_matrix_2(2)).as_deref(), Some("M2(F2)"));
    }
}
