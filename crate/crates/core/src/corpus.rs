//! The bundled corpus: six small rings, their derivation files, and the modules and
//! bimodules that suites sweep over.

use crate::error::{Error, Result, Side};
use crate::finring::{enumerate_ideals, Derivation, FiniteModule, RingRef};
use crate::io::{parse_json, parse_ring, DerivationFile};

pub const RING_KEYS: [&str; 6] = ["z4", "z6", "z2xz2", "f4", "dual", "t2f2"];

macro_rules! corpus_file {
    ($path:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/", $path))
    };
}

fn ring_json(key: &str) -> Option<&'static str> {
    Some(match key {
        "z4" => corpus_file!("z4.json"),
        "z6" => corpus_file!("z6.json"),
        "z2xz2" => corpus_file!("z2xz2.json"),
        "f4" => corpus_file!("f4.json"),
        "dual" => corpus_file!("dual.json"),
        "t2f2" => corpus_file!("t2f2.json"),
        _ => return None,
    })
}

/// Derivation files shipped for `key`, by file stem.
pub fn derivation_files(key: &str) -> &'static [(&'static str, &'static str)] {
    match key {
        "z4" => &[("zero", corpus_file!("derivations/z4/zero.json"))],
        "z6" => &[("zero", corpus_file!("derivations/z6/zero.json"))],
        "z2xz2" => &[("zero", corpus_file!("derivations/z2xz2/zero.json"))],
        "f4" => &[("zero", corpus_file!("derivations/f4/zero.json"))],
        "dual" => &[
            ("zero", corpus_file!("derivations/dual/zero.json")),
            ("d1", corpus_file!("derivations/dual/d1.json")),
            ("d2", corpus_file!("derivations/dual/d2.json")),
            ("d3", corpus_file!("derivations/dual/d3.json")),
        ],
        "t2f2" => &[
            ("zero", corpus_file!("derivations/t2f2/zero.json")),
            ("d1", corpus_file!("derivations/t2f2/d1.json")),
            ("d2", corpus_file!("derivations/t2f2/d2.json")),
            ("d3", corpus_file!("derivations/t2f2/d3.json")),
            ("ad_e11", corpus_file!("derivations/t2f2/ad_e11.json")),
        ],
        _ => &[],
    }
}

/// The ring-independent zero derivation file.
pub const ZERO_DERIVATION: &str = corpus_file!("zero.json");

/// Corpus key for a path such as `corpus/z6.json` or a bare `z6`.
pub fn ring_key(path: &str) -> Option<&'static str> {
    let stem = std::path::Path::new(path).file_stem()?.to_str()?;
    RING_KEYS.iter().copied().find(|k| *k == stem)
}

pub fn bundled_ring(key: &str) -> Result<RingRef> {
    let text = ring_json(key).ok_or_else(|| Error::MalformedSpec(format!("no bundled ring `{key}`")))?;
    parse_ring(text, key)
}

pub fn bundled_derivation_file(key: &str, stem: &str) -> Option<&'static str> {
    if stem == "zero" && derivation_files(key).is_empty() {
        return Some(ZERO_DERIVATION);
    }
    derivation_files(key).iter().find(|(s, _)| *s == stem).map(|(_, t)| *t)
}

/// Every shipped derivation of `key`, loaded against `r`.
pub fn bundled_derivations(key: &str, r: &RingRef) -> Result<Vec<Derivation>> {
    derivation_files(key)
        .iter()
        .map(|(stem, text)| parse_json::<DerivationFile>(text, stem)?.derivation_on(r))
        .collect()
}

pub fn all_rings() -> Result<Vec<(&'static str, RingRef)>> {
    RING_KEYS.iter().map(|&k| Ok((k, bundled_ring(k)?))).collect()
}

fn label(members: &[usize]) -> String {
    format!("{members:?}")
}

/// `R`, `R/I` and `I` for the right ideals `I ≠ 0, R`, plus the zero module, as right modules.
pub fn right_modules(r: &RingRef) -> Result<Vec<FiniteModule>> {
    sweep(&FiniteModule::regular_right(r), &enumerate_ideals(r, Side::Right))
}

/// The same sweep over two-sided ideals, as bimodules.
pub fn bimodules(r: &RingRef) -> Result<Vec<FiniteModule>> {
    sweep(&FiniteModule::regular_bimodule(r), &enumerate_ideals(r, Side::TwoSided))
}

fn sweep(reg: &FiniteModule, ideals: &[crate::finring::Subset]) -> Result<Vec<FiniteModule>> {
    let mut out = vec![reg.clone().with_name("R")];
    for i in ideals {
        if i.len() == 1 || i.is_full() {
            continue;
        }
        out.push(reg.quotient(i)?.0.with_name(format!("R/{}", label(i.members()))));
        out.push(reg.submodule(i)?.0.with_name(label(i.members())));
    }
    let full = ideals.last().expect("R is an ideal");
    out.push(reg.quotient(full)?.0.with_name("0"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{enumerate_derivations, FiniteRing};

    #[test]
    fn bundled_rings_match_builders() {
        let builders = [
            FiniteRing::zmod(4),
            FiniteRing::zmod(6),
            FiniteRing::product(&FiniteRing::zmod(2), &FiniteRing::zmod(2)),
            FiniteRing::gf4(),
            FiniteRing::dual_numbers_f2(),
            FiniteRing::upper_triangular_2(2),
        ];
        for (key, b) in RING_KEYS.iter().zip(builders) {
            assert_eq!(*bundled_ring(key).unwrap(), b, "{key}");
        }
    }

    #[test]
    fn shipped_derivations_are_the_enumerated_ones() {
        for (key, r) in all_rings().unwrap() {
            let mut shipped: Vec<Vec<usize>> = bundled_derivations(key, &r).unwrap().into_iter().map(|d| d.table).collect();
            shipped.sort();
            shipped.dedup();
            let mut found: Vec<Vec<usize>> = enumerate_derivations(&r).into_iter().map(|d| d.table).collect();
            found.sort();
            assert_eq!(shipped, found, "{key}");
        }
    }

    #[test]
    fn path_keys() {
        assert_eq!(ring_key("corpus/z6.json"), Some("z6"));
        assert_eq!(ring_key("t2f2"), Some("t2f2"));
        assert_eq!(ring_key("other.json"), None);
    }
}
