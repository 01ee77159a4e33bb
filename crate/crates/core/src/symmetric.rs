//! Symmetric filters and symmetric modules and rings of quotients, by reduction to
//! right modules over `T = R ⊗ℤ R^op`.
//!
//! Conventions follow [`bimodule_to_right_module`]: `x·(a⊗b) = b·x·a`, so the first
//! tensor slot carries right ideals and the second carries left ideals. A pair
//! `(F_l, F_r)` with least members `I₀`, `J₀` induces the filter of right `T`-ideals
//! containing `K₀ = J₀⊗R + R⊗I₀`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::derivext::{agreement_from, check_agreement_on, enumerate_extensions_on, extend_on, AgreementReport, ExtensionResult, Strategy};
use crate::error::{Error, Result, Side};
use crate::finring::ideals::{enumerate_ideals, generate_ideal, is_ideal, is_idempotent};
use crate::finring::module::{is_injective, kernel, same_ring};
use crate::finring::search::{additive_rule, Search};
use crate::finring::{
    bimodule_to_right_module, check_module_derivation, check_module_derivation_with, check_ring_derivation,
    right_module_to_bimodule, tensor_over_r, Derivation, FiniteModule, FiniteRing, RingRef, Subset, TensorRing,
};
use crate::gabriel::{
    classical_filter, filter_closure_in, goldie_filter, improper_filter, is_differential, lambek_filter, torsion_submodule,
    trivial_filter, DifferentialVerdict, GabrielFilter,
};
use crate::quotient::{module_of_quotients, q12_map, ring_of_quotients, QuotientModule};

const NONE: usize = usize::MAX;

/// `R`, `T = R ⊗ R^op` and the right ideals of `T`, shared per ring.
pub struct SymmetricContext {
    ring: RingRef,
    tensor: TensorRing,
    ideals: OnceLock<Vec<Subset>>,
}

impl std::fmt::Debug for SymmetricContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymmetricContext({}, |T| = {})", self.ring.name(), self.tensor.size())
    }
}

fn contexts() -> &'static Mutex<Vec<Arc<SymmetricContext>>> {
    static CACHE: OnceLock<Mutex<Vec<Arc<SymmetricContext>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

impl SymmetricContext {
    pub fn new(r: &RingRef) -> Result<Self> {
        Ok(SymmetricContext { ring: r.clone(), tensor: TensorRing::new(r, r)?, ideals: OnceLock::new() })
    }

    /// The context for `r`, built once per process.
    pub fn shared(r: &RingRef) -> Result<Arc<Self>> {
        if let Some(c) = contexts().lock().unwrap().iter().find(|c| same_ring(&c.ring, r)) {
            return Ok(c.clone());
        }
        let c = Arc::new(SymmetricContext::new(r)?);
        let mut cache = contexts().lock().unwrap();
        if let Some(existing) = cache.iter().find(|e| same_ring(&e.ring, r)) {
            return Ok(existing.clone());
        }
        cache.push(c.clone());
        Ok(c)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn tensor(&self) -> &TensorRing {
        &self.tensor
    }

    pub fn t(&self) -> &RingRef {
        self.tensor.ring()
    }

    /// All right ideals of `T`.
    pub fn t_ideals(&self) -> &[Subset] {
        self.ideals.get_or_init(|| enumerate_ideals(self.t(), Side::Right))
    }

    /// `R`-bimodule as a right `T`-module.
    pub fn to_right(&self, m: &FiniteModule) -> Result<FiniteModule> {
        bimodule_to_right_module(m, &self.tensor)
    }

    /// Right `T`-module as an `R`-bimodule, validated.
    pub fn to_bimodule(&self, m: &FiniteModule) -> Result<FiniteModule> {
        let b = right_module_to_bimodule(m, &self.tensor)?;
        b.validate()?;
        Ok(b)
    }

    /// Additive span of `A ⊗ B` inside `T`.
    pub fn span(&self, a: &[usize], b: &[usize]) -> Subset {
        Subset::from_mask(self.tensor.span_of_pure(a, b))
    }

    /// `span(A⊗R) + span(R⊗B)`.
    pub fn combined(&self, right: &Subset, left: &Subset) -> Subset {
        let all: Vec<usize> = (0..self.ring.size()).collect();
        let mut gens = Vec::new();
        for &a in right.members() {
            for &s in &all {
                gens.push(self.tensor.pure(a, s));
            }
        }
        for &s in &all {
            for &b in left.members() {
                gens.push(self.tensor.pure(s, b));
            }
        }
        Subset::from_mask(self.t().group().span(gens))
    }

    /// `δ̄(a⊗b) = δ(a)⊗b + a⊗δ(b)`, checked on every pure tensor and validated as a derivation of `T`.
    pub fn bar_delta(&self, delta: &Derivation) -> Result<Derivation> {
        let t = &self.tensor;
        let g = self.t().group();
        let d = &delta.table;
        let table: Vec<usize> = (0..t.size())
            .map(|z| t.representative(z).iter().fold(g.zero(), |acc, &(a, b)| g.add(acc, g.add(t.pure(d[a], b), t.pure(a, d[b])))))
            .collect();
        let n = self.ring.size();
        for a in 0..n {
            for b in 0..n {
                if table[t.pure(a, b)] != g.add(t.pure(d[a], b), t.pure(a, d[b])) {
                    return Err(Error::IllDefined(format!("δ̄ on {a}⊗{b}")));
                }
            }
        }
        check_ring_derivation(self.t(), &table)?;
        Ok(Derivation::new(format!("bar({})", delta.name), table))
    }
}

/// A pair of one-sided filters and the filter they induce on `T`.
#[derive(Clone, Debug)]
pub struct SymmetricFilter {
    ctx: Arc<SymmetricContext>,
    left: GabrielFilter,
    right: GabrielFilter,
    induced: GabrielFilter,
}

impl PartialEq for SymmetricFilter {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left && self.right == other.right
    }
}

pub fn induce_symmetric_filter(ctx: &Arc<SymmetricContext>, left: &GabrielFilter, right: &GabrielFilter) -> Result<SymmetricFilter> {
    if left.side() != Side::Left || right.side() != Side::Right {
        return Err(Error::MalformedSpec("symmetric filters take a left and a right filter".into()));
    }
    if !same_ring(left.ring(), ctx.ring()) || !same_ring(right.ring(), ctx.ring()) {
        return Err(Error::IncompatibleActions("filters over different rings".into()));
    }
    let k = ctx.combined(right.min_ideal(), left.min_ideal());
    let t = ctx.t();
    if !is_ideal(t, &k, Side::TwoSided) || !is_idempotent(t, &k) {
        return Err(Error::InternalInconsistency("J₀⊗R + R⊗I₀ is not an idempotent ideal of T".into()));
    }
    let induced = GabrielFilter::generated_by_min(t, Side::Right, &k, ctx.t_ideals())
        .map_err(|e| Error::InternalInconsistency(format!("induced filter: {e}")))?;
    Ok(SymmetricFilter { ctx: ctx.clone(), left: left.clone(), right: right.clone(), induced })
}

impl SymmetricFilter {
    pub fn context(&self) -> &Arc<SymmetricContext> {
        &self.ctx
    }

    pub fn left(&self) -> &GabrielFilter {
        &self.left
    }

    pub fn right(&self) -> &GabrielFilter {
        &self.right
    }

    pub fn induced(&self) -> &GabrielFilter {
        &self.induced
    }

    /// Inclusion of induced filters.
    pub fn is_subfilter_of(&self, other: &SymmetricFilter) -> bool {
        self.induced.is_subfilter_of(&other.induced)
    }

    pub fn is_faithful(&self) -> Result<bool> {
        Ok(symmetric_torsion(self, &FiniteModule::regular_bimodule(self.ctx.ring()))?.len() == 1)
    }
}

/// The named symmetric theories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedSymmetric {
    Lambek,
    Goldie,
    Classical,
    Trivial,
}

impl NamedSymmetric {
    pub const ALL: [NamedSymmetric; 4] = [NamedSymmetric::Lambek, NamedSymmetric::Goldie, NamedSymmetric::Classical, NamedSymmetric::Trivial];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedSymmetric::Lambek => "sym-lambek",
            NamedSymmetric::Goldie => "sym-goldie",
            NamedSymmetric::Classical => "sym-classical",
            NamedSymmetric::Trivial => "sym-trivial",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        NamedSymmetric::ALL.into_iter().find(|n| n.as_str() == s)
    }

    pub fn build(self, ctx: &Arc<SymmetricContext>) -> Result<SymmetricFilter> {
        let r = ctx.ring();
        let (l, rt) = match self {
            NamedSymmetric::Lambek => (lambek_filter(r, Side::Left)?, lambek_filter(r, Side::Right)?),
            NamedSymmetric::Goldie => (goldie_filter(r, Side::Left)?, goldie_filter(r, Side::Right)?),
            NamedSymmetric::Classical => (classical_filter(r, Side::Left)?.0, classical_filter(r, Side::Right)?.0),
            NamedSymmetric::Trivial => (trivial_filter(r, Side::Left), trivial_filter(r, Side::Right)),
        };
        induce_symmetric_filter(ctx, &l, &rt)
    }
}

/// `_lT_r(M)`, computed four ways and required to agree; also equal to `T_l(M) ∩ T_r(M)`.
pub fn symmetric_torsion(sf: &SymmetricFilter, m: &FiniteModule) -> Result<Subset> {
    let ctx = &sf.ctx;
    let mt = ctx.to_right(m)?;
    let t = ctx.tensor();
    let c1 = torsion_submodule(&sf.induced, &mt)?;
    let n = m.size();
    let mut c2 = vec![false; n];
    let mut c3 = vec![false; n];
    let mut c4 = vec![false; n];
    for x in 0..n {
        let al = m.annihilator(x, Side::Left)?;
        let ar = m.annihilator(x, Side::Right)?;
        c2[x] = sf.left.contains(&al) && sf.right.contains(&ar);
        c3[x] = sf.induced.contains(&ctx.combined(&ar, &al));
        let ann: Vec<bool> = (0..t.size())
            .map(|z| t.representative(z).iter().fold(m.zero(), |acc, &(a, b)| m.add(acc, m.act_left(b, m.act_right(x, a)))) == m.zero())
            .collect();
        c4[x] = sf.induced.contains(&Subset::from_mask(ann));
    }
    for x in 0..n {
        let v = [c1.contains(x), c2[x], c3[x], c4[x]];
        if v.iter().any(|&b| b != v[0]) {
            return Err(Error::EquivalenceBroken(format!("torsion conditions at {x}: {v:?}")));
        }
    }
    let tl = torsion_submodule(&sf.left, &m.left_part())?;
    let tr = torsion_submodule(&sf.right, &m.right_part())?;
    if tl.intersection(&tr) != c1 {
        return Err(Error::EquivalenceBroken("symmetric torsion differs from T_l ∩ T_r".into()));
    }
    Ok(c1)
}

/// `_lM_r` as a module of quotients over `T`, with its bimodule view.
#[derive(Clone, Debug)]
pub struct SymmetricQuotient {
    filter: SymmetricFilter,
    base: FiniteModule,
    quotient: QuotientModule,
    bimodule: FiniteModule,
}

pub fn symmetric_quotient(sf: &SymmetricFilter, m: &FiniteModule) -> Result<SymmetricQuotient> {
    let mt = sf.ctx.to_right(m)?;
    let quotient = module_of_quotients(&sf.induced, &mt)?;
    let bimodule = sf.ctx.to_bimodule(quotient.module())?;
    let torsion = symmetric_torsion(sf, m)?;
    if quotient.q_kernel() != torsion {
        return Err(Error::InternalInconsistency("ker q differs from the symmetric torsion".into()));
    }
    if !m.is_hom_to(&bimodule, quotient.q()) {
        return Err(Error::InternalInconsistency("q is not a bimodule map".into()));
    }
    Ok(SymmetricQuotient { filter: sf.clone(), base: m.clone(), quotient, bimodule })
}

impl SymmetricQuotient {
    pub fn filter(&self) -> &SymmetricFilter {
        &self.filter
    }

    pub fn base(&self) -> &FiniteModule {
        &self.base
    }

    /// The underlying module of quotients over `T`.
    pub fn over_t(&self) -> &QuotientModule {
        &self.quotient
    }

    pub fn bimodule(&self) -> &FiniteModule {
        &self.bimodule
    }

    pub fn q(&self) -> &[usize] {
        self.quotient.q()
    }

    pub fn size(&self) -> usize {
        self.quotient.size()
    }
}

/// `_lR_r` with its ring structure.
#[derive(Clone, Debug)]
pub struct SymmetricRing {
    quotient: SymmetricQuotient,
    ring: RingRef,
}

/// Right and left components `j ↦ f(j⊗1)`, `i ↦ f(1⊗i)` of a carrier element.
fn components(sq: &SymmetricQuotient, f: usize, jm: &[usize], im: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let t = sq.filter.ctx.tensor();
    let r = sq.filter.ctx.ring();
    let qm = &sq.quotient;
    let right = jm.iter().map(|&j| qm.eval(f, t.pure(j, r.one()))).collect();
    let left = im.iter().map(|&i| qm.eval(f, t.pure(r.one(), i))).collect();
    (right, left)
}

fn least_lifts(proj: &[usize], classes: usize, members: &[usize]) -> Vec<usize> {
    let mut lift = vec![NONE; classes];
    for &x in members {
        if lift[proj[x]] == NONE {
            lift[proj[x]] = x;
        }
    }
    lift
}

/// Product `(fg)(j⊗1) = f(ρ⊗1)` with `ρ ∈ J₀` lifting `g(j⊗1)`, and `(fg)(1⊗i) = g(1⊗σ)` with
/// `σ ∈ I₀` lifting `f(1⊗i)`. Lift independence and closure are asserted.
pub fn symmetric_ring(sf: &SymmetricFilter) -> Result<SymmetricRing> {
    let r = sf.ctx.ring().clone();
    let sq = symmetric_quotient(sf, &FiniteModule::regular_bimodule(&r))?;
    let qm = &sq.quotient;
    let jm = sf.right.min_ideal().members().to_vec();
    let im = sf.left.min_ideal().members().to_vec();
    let proj = qm.projection();
    let red = qm.reduced();
    let c = qm.size();
    let comps: Vec<(Vec<usize>, Vec<usize>)> = (0..c).map(|f| components(&sq, f, &jm, &im)).collect();
    let index: HashMap<&(Vec<usize>, Vec<usize>), usize> = comps.iter().enumerate().map(|(i, k)| (k, i)).collect();
    if index.len() != c {
        return Err(Error::InternalInconsistency("components do not determine carrier elements".into()));
    }
    for (f, (cr, cl)) in comps.iter().enumerate() {
        let bad = jm.iter().zip(cr).chain(im.iter().zip(cl)).any(|(&x, &v)| proj[x] == red.zero() && v != red.zero());
        if bad {
            return Err(Error::InternalInconsistency(format!("carrier element {f} does not vanish on torsion")));
        }
    }
    let lift_j = least_lifts(proj, red.size(), &jm);
    let lift_i = least_lifts(proj, red.size(), &im);
    let jpos: HashMap<usize, usize> = jm.iter().enumerate().map(|(p, &x)| (x, p)).collect();
    let ipos: HashMap<usize, usize> = im.iter().enumerate().map(|(p, &x)| (x, p)).collect();
    let missing = || Error::InternalInconsistency("a component leaves the image of the minimal ideal".into());
    let mut mul = vec![0u32; c * c];
    for a in 0..c {
        for b in 0..c {
            let mut pr = Vec::with_capacity(jm.len());
            for &v in &comps[b].0 {
                let rho = lift_j[v];
                if rho == NONE {
                    return Err(missing());
                }
                pr.push(comps[a].0[jpos[&rho]]);
            }
            let mut pl = Vec::with_capacity(im.len());
            for &v in &comps[a].1 {
                let sigma = lift_i[v];
                if sigma == NONE {
                    return Err(missing());
                }
                pl.push(comps[b].1[ipos[&sigma]]);
            }
            let key = (pr, pl);
            mul[a * c + b] = *index.get(&key).ok_or_else(|| Error::InternalInconsistency("product leaves the carrier".into()))? as u32;
        }
    }
    let q = qm.q();
    let ring = FiniteRing::new(format!("{}_sym", r.name()), qm.module().group().clone(), mul, q[r.one()], None)?;
    let b = &sq.bimodule;
    for x in 0..r.size() {
        for y in 0..r.size() {
            if q[r.mul(x, y)] != ring.mul(q[x], q[y]) {
                return Err(Error::InternalInconsistency(format!("q is not multiplicative at ({x}, {y})")));
            }
        }
        for f in 0..c {
            if ring.mul(q[x], f) != b.act_left(x, f) || ring.mul(f, q[x]) != b.act_right(f, x) {
                return Err(Error::InternalInconsistency("ring product disagrees with the bimodule actions".into()));
            }
        }
    }
    Ok(SymmetricRing { quotient: sq, ring: Arc::new(ring) })
}

impl SymmetricRing {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn quotient(&self) -> &SymmetricQuotient {
        &self.quotient
    }

    pub fn q(&self) -> &[usize] {
        self.quotient.q()
    }

    pub fn size(&self) -> usize {
        self.ring.size()
    }

    /// The ring as an `R`-bimodule through `q`.
    pub fn as_bimodule(&self) -> FiniteModule {
        self.quotient.bimodule.clone()
    }
}

/// The identity on tables, checked both ways: a bimodule δ-derivation is a δ̄-derivation of
/// the right `T`-module and conversely.
pub fn derivation_correspondence(ctx: &SymmetricContext, m: &FiniteModule, delta: &Derivation, d: &[usize]) -> Result<Vec<usize>> {
    check_module_derivation(m, &delta.table, d)?;
    let bar = ctx.bar_delta(delta)?;
    let mt = ctx.to_right(m)?;
    check_module_derivation_with(&mt, Some(&bar.table), None, d)?;
    let back = ctx.to_bimodule(&mt)?;
    check_module_derivation(&back, &delta.table, d)?;
    Ok(d.to_vec())
}

/// Extends a bimodule δ-derivation to `_lM_r`; the result is validated as a bimodule
/// δ-derivation and uniqueness is decided by exhaustive search over `T`.
pub fn extend_symmetric_on(sq: &SymmetricQuotient, delta: &Derivation, d: &[usize], strategy: Strategy) -> Result<ExtensionResult> {
    let ctx = &sq.filter.ctx;
    check_module_derivation(&sq.base, &delta.table, d)?;
    let bar = ctx.bar_delta(delta)?;
    let ext = extend_on(&sq.quotient, &bar.table, d, strategy)?;
    check_module_derivation(&sq.bimodule, &delta.table, &ext.table)?;
    let count = enumerate_extensions_on(&sq.quotient, &bar.table, d)?.len();
    Ok(ExtensionResult { count: Some(count), ..ext })
}

pub fn extend_symmetric_derivation(
    sf: &SymmetricFilter,
    m: &FiniteModule,
    delta: &Derivation,
    d: &[usize],
    strategy: Strategy,
) -> Result<ExtensionResult> {
    extend_symmetric_on(&symmetric_quotient(sf, m)?, delta, d, strategy)
}

/// A corpus bimodule with its δ-derivations, each tagged by the index of its δ.
#[derive(Clone, Debug)]
pub struct BimoduleCase {
    pub module: FiniteModule,
    pub derivations: Vec<(usize, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricDifferentialReport {
    /// `δ̄(J) ⊆ I` filter-wise.
    pub filter_level: bool,
    /// `d(_lT_r(M)) ⊆ _lT_r(M)` on the supplied bimodules.
    pub torsion_preserved: bool,
    /// `δ̄(K) ⊆ _l ann_r(x)` for torsion `x`, on the supplied bimodules and on every `T/I`.
    pub annihilator_level: bool,
    pub one_sided_differential: bool,
    pub differential: bool,
    pub witness: Option<String>,
}

pub fn is_symmetric_differential(sf: &SymmetricFilter, ders: &[Derivation], cases: &[BimoduleCase]) -> Result<SymmetricDifferentialReport> {
    let ctx = &sf.ctx;
    let t = ctx.tensor();
    let bars: Vec<Derivation> = ders.iter().map(|d| ctx.bar_delta(d)).collect::<Result<_>>()?;
    let DifferentialVerdict { differential: filter_level, witness } = is_differential(&sf.induced, &bars)?;
    let mut report_witness = witness.map(|w| format!("δ̄ = {} moves {} out of {:?}", w.derivation, w.element, w.ideal));

    let works = |k: &Subset, ann: &Subset, bar: &Derivation| k.members().iter().all(|&z| ann.contains(bar.table[z]));
    // T/I with x = 1⊗1 + I has annihilator I
    let mut annihilator_level = sf.induced.members().iter().all(|i| {
        bars.iter().all(|bar| sf.induced.members().iter().any(|k| works(k, i, bar)))
    });
    let mut torsion_preserved = true;
    for case in cases {
        let m = &case.module;
        let tor = symmetric_torsion(sf, m)?;
        for (_, d) in &case.derivations {
            if let Some(&x) = tor.members().iter().find(|&&x| !tor.contains(d[x])) {
                torsion_preserved = false;
                report_witness.get_or_insert_with(|| format!("d moves torsion element {x} of {} out", m.name()));
            }
        }
        for &x in tor.members() {
            let ann = Subset::from_mask(
                (0..t.size())
                    .map(|z| t.representative(z).iter().fold(m.zero(), |acc, &(a, b)| m.add(acc, m.act_left(b, m.act_right(x, a)))) == m.zero())
                    .collect(),
            );
            for bar in &bars {
                if !sf.induced.members().iter().any(|k| works(k, &ann, bar)) {
                    annihilator_level = false;
                }
            }
        }
    }
    if filter_level != annihilator_level || (filter_level && !torsion_preserved) {
        return Err(Error::EquivalenceBroken(format!(
            "symmetric differentiability: filter {filter_level}, torsion {torsion_preserved}, annihilator {annihilator_level}"
        )));
    }
    let one_sided = is_differential(&sf.left, ders)?.differential && is_differential(&sf.right, ders)?.differential;
    if one_sided && !filter_level {
        return Err(Error::EquivalenceBroken("one-sided filters differential but the induced one is not".into()));
    }
    Ok(SymmetricDifferentialReport {
        filter_level,
        torsion_preserved,
        annihilator_level,
        one_sided_differential: one_sided,
        differential: filter_level,
        witness: report_witness,
    })
}

/// Agreement over `T` for nested symmetric filters.
pub fn check_symmetric_agreement(
    sf1: &SymmetricFilter,
    sf2: &SymmetricFilter,
    m: &FiniteModule,
    delta: &Derivation,
    d: &[usize],
) -> Result<AgreementReport> {
    if !sf1.is_subfilter_of(sf2) {
        return Err(Error::NotNested);
    }
    let a = symmetric_quotient(sf1, m)?;
    let b = symmetric_quotient(sf2, m)?;
    symmetric_agreement_on(&a, &b, delta, d)
}

pub fn symmetric_agreement_on(a: &SymmetricQuotient, b: &SymmetricQuotient, delta: &Derivation, d: &[usize]) -> Result<AgreementReport> {
    let bar = a.filter.ctx.bar_delta(delta)?;
    check_agreement_on(&a.quotient, &b.quotient, &bar.table, d)
}

/// Agreement from given extensions, for callers that already hold them.
pub fn symmetric_agreement_from(a: &SymmetricQuotient, b: &SymmetricQuotient, d: &[usize], d1: &[usize], d2: &[usize]) -> Result<AgreementReport> {
    agreement_from(&a.quotient, &b.quotient, d, d1, d2)
}

/// Whether two bimodules are isomorphic, by injective propagation search.
pub fn bimodules_isomorphic(a: &FiniteModule, b: &FiniteModule) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let rg = a.right_ring().map(|r| r.additive_generators()).unwrap_or_default();
    let lg = a.left_ring().map(|r| r.additive_generators()).unwrap_or_default();
    let found = Search::new(a.size(), b.size(), |x, asg, out| {
        additive_rule(a.group(), b.group(), x, asg, out);
        let fx = asg[x] as usize;
        for &g in &rg {
            out.push((a.act_right(x, g), b.act_right(fx, g)));
        }
        for &g in &lg {
            out.push((a.act_left(g, x), b.act_left(g, fx)));
        }
    })
    .seed(a.zero(), b.zero())
    .injective()
    .limit(1)
    .run();
    !found.is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPerfectReport {
    pub recovers_left: bool,
    pub recovers_right: bool,
    pub tensor_iso: bool,
    pub perfect: bool,
    pub witness: Option<String>,
}

/// `S = _lR_r` as an `R`-bimodule with one action dropped.
fn one_sided(m: &FiniteModule, keep: Side) -> FiniteModule {
    match keep {
        Side::Left => m.left_part(),
        _ => m.right_part(),
    }
}

pub fn symmetric_perfect(sf: &SymmetricFilter) -> Result<SymmetricPerfectReport> {
    let sr = symmetric_ring(sf)?;
    symmetric_perfect_with(sf, &sr)
}

pub fn symmetric_perfect_with(sf: &SymmetricFilter, sr: &SymmetricRing) -> Result<SymmetricPerfectReport> {
    let r = sf.ctx.ring();
    let s = sr.ring();
    let q = sr.q();
    let mut witness = None;
    let mut recovers_left = true;
    for i in enumerate_ideals(r, Side::Left) {
        let full = generate_ideal(s, Side::Left, i.members().iter().map(|&x| q[x])).is_full();
        if full != sf.left.contains(&i) {
            recovers_left = false;
            witness.get_or_insert_with(|| format!("S·q(I) = S disagrees with the left filter at {:?}", i.members()));
        }
    }
    let mut recovers_right = true;
    for j in enumerate_ideals(r, Side::Right) {
        let full = generate_ideal(s, Side::Right, j.members().iter().map(|&x| q[x])).is_full();
        if full != sf.right.contains(&j) {
            recovers_right = false;
            witness.get_or_insert_with(|| format!("q(J)·S = S disagrees with the right filter at {:?}", j.members()));
        }
    }
    let sb = sr.as_bimodule();
    let reg = FiniteModule::regular_bimodule(r);
    let mut tensor_iso = true;
    for i in enumerate_ideals(r, Side::TwoSided) {
        let (m, _) = reg.quotient(&i)?;
        let sm = tensor_over_r(&sb, &m)?;
        let sms = tensor_over_r(sm.module(), &one_sided(&sb, Side::Left))?;
        let target = symmetric_quotient(sf, &m)?;
        if !bimodules_isomorphic(sms.module(), target.bimodule()) {
            tensor_iso = false;
            witness.get_or_insert_with(|| format!("S⊗R/I⊗S ≇ _l(R/I)_r for I = {:?}", i.members()));
        }
    }
    Ok(SymmetricPerfectReport { recovers_left, recovers_right, tensor_iso, perfect: recovers_left && recovers_right && tensor_iso, witness })
}

/// All symmetric filters induced by pairs of enumerated one-sided filters.
pub fn enumerate_symmetric_filters(ctx: &Arc<SymmetricContext>) -> Result<Vec<SymmetricFilter>> {
    let r = ctx.ring();
    let lefts = crate::gabriel::enumerate_gabriel_filters(r, Side::Left)?;
    let rights = crate::gabriel::enumerate_gabriel_filters(r, Side::Right)?;
    let mut out = Vec::new();
    for l in &lefts {
        for rt in &rights {
            out.push(induce_symmetric_filter(ctx, l, rt)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SymmetricTotalReport {
    pub candidates: Vec<SymmetricFilter>,
    pub filter: Option<SymmetricFilter>,
    pub ring: Option<SymmetricRing>,
    pub maximal: Vec<SymmetricFilter>,
    pub diagnostic: Option<String>,
}

/// Join of the perfect faithful symmetric filters, taken on `T` and matched back to an
/// induced pair; falls back to the maximal candidates.
pub fn symmetric_total(ctx: &Arc<SymmetricContext>) -> Result<SymmetricTotalReport> {
    let all = enumerate_symmetric_filters(ctx)?;
    let mut candidates: Vec<SymmetricFilter> = Vec::new();
    for sf in &all {
        if sf.is_faithful()? && symmetric_perfect(sf)?.perfect {
            candidates.push(sf.clone());
        }
    }
    let maximal: Vec<SymmetricFilter> = candidates
        .iter()
        .filter(|f| !candidates.iter().any(|g| g.induced != f.induced && f.is_subfilter_of(g)))
        .cloned()
        .collect();
    let seeds: Vec<Subset> = candidates.iter().map(|c| c.induced.min_ideal().clone()).collect();
    let joined = filter_closure_in(ctx.t(), &seeds, Side::Right, ctx.t_ideals())?;
    let matched = all.iter().find(|sf| sf.induced == joined && candidates.contains(sf)).cloned();
    match matched {
        Some(f) => {
            let ring = symmetric_ring(&f)?;
            Ok(SymmetricTotalReport { candidates, filter: Some(f), ring: Some(ring), maximal, diagnostic: None })
        }
        None => Ok(SymmetricTotalReport {
            candidates,
            filter: None,
            ring: None,
            maximal,
            diagnostic: Some("join of the perfect faithful symmetric filters is not itself one".into()),
        }),
    }
}

/// `q₁₂` between symmetric rings of quotients, required to be an injective unital ring map.
pub fn symmetric_ring_embedding(a: &SymmetricRing, b: &SymmetricRing) -> Result<Vec<usize>> {
    let map = q12_map(&a.quotient.quotient, &b.quotient.quotient)?;
    if !is_injective(&map, b.size()) {
        return Err(Error::InternalInconsistency("q₁₂ between symmetric rings is not injective".into()));
    }
    let (ra, rb) = (a.ring(), b.ring());
    if map[ra.one()] != rb.one() {
        return Err(Error::InternalInconsistency("q₁₂ is not unital".into()));
    }
    for x in 0..ra.size() {
        for y in 0..ra.size() {
            if map[ra.mul(x, y)] != rb.mul(map[x], map[y]) {
                return Err(Error::InternalInconsistency("q₁₂ is not multiplicative".into()));
            }
        }
    }
    Ok(map)
}

/// Qσmax against `{g ∈ Qmax : q(I₀)·g ⊆ q(R)}` with `I₀` the least dense left ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QsigmaMaxCheck {
    pub qsigma_size: usize,
    pub qmax_size: usize,
    pub characterized: Vec<usize>,
    pub image: Vec<usize>,
    pub matches: bool,
}

pub fn qsigma_max_check(ctx: &Arc<SymmetricContext>) -> Result<QsigmaMaxCheck> {
    let r = ctx.ring();
    let sf = NamedSymmetric::Lambek.build(ctx)?;
    let sr = symmetric_ring(&sf)?;
    let qmax = ring_of_quotients(&lambek_filter(r, Side::Right)?)?;
    let qm = qmax.module();
    if qm.min_ideal() != sf.right.min_ideal() || qm.torsion().len() != 1 {
        return Err(Error::InternalInconsistency("dense right filter mismatch".into()));
    }
    // carrier of Qmax is Hom(J₀, R) with R torsion-free; Qσmax restricts to j ↦ f(j⊗1)
    let sq = &sr.quotient;
    let jm = sf.right.min_ideal().members().to_vec();
    let im = sf.left.min_ideal().members().to_vec();
    let red = sq.quotient.reduced();
    if red.size() != r.size() {
        return Err(Error::InternalInconsistency("R is not symmetrically torsion-free".into()));
    }
    // reduced classes of R are numbered by least member; map to ring elements
    let mut rep = vec![NONE; red.size()];
    for x in 0..r.size() {
        let c = sq.quotient.projection()[x];
        if rep[c] == NONE {
            rep[c] = x;
        }
    }
    let qm_red_of = |x: usize| qm.projection()[x];
    let mut image = Vec::with_capacity(sr.size());
    for f in 0..sr.size() {
        let (cr, _) = components(sq, f, &jm, &im);
        let v: Vec<usize> = cr.iter().map(|&c| qm_red_of(rep[c])).collect();
        image.push(qm.lookup(&v).ok_or_else(|| Error::InternalInconsistency("restriction is not in Qmax".into()))?);
    }
    if !is_injective(&image, qmax.size()) {
        return Err(Error::InternalInconsistency("Qσmax → Qmax is not injective".into()));
    }
    let s = qmax.ring();
    let qr = qmax.q();
    let in_r = Subset::from_members(qmax.size(), qr.iter().copied());
    let characterized: Vec<usize> = (0..qmax.size()).filter(|&g| im.iter().all(|&i| in_r.contains(s.mul(qr[i], g)))).collect();
    let mut sorted = image.clone();
    sorted.sort();
    let matches = sorted == characterized;
    for a in 0..sr.size() {
        for b in 0..sr.size() {
            if image[sr.ring().mul(a, b)] != s.mul(image[a], image[b]) {
                return Err(Error::InternalInconsistency("Qσmax → Qmax is not multiplicative".into()));
            }
        }
    }
    Ok(QsigmaMaxCheck { qsigma_size: sr.size(), qmax_size: qmax.size(), characterized, image: sorted, matches })
}

/// The improper pair, the only one inducing the improper filter on `T`.
pub fn improper_pair(ctx: &Arc<SymmetricContext>) -> Result<SymmetricFilter> {
    let r = ctx.ring();
    induce_symmetric_filter(ctx, &improper_filter(r, Side::Left), &improper_filter(r, Side::Right))
}

/// Kernel of `q` on `R` for a symmetric filter.
pub fn symmetric_q_kernel(sq: &SymmetricQuotient) -> Subset {
    kernel(sq.q(), sq.quotient.module().zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{enumerate_derivations, find_ring_isomorphism};
    use crate::gabriel::filter_closure;

    fn z6_even_pair() -> SymmetricFilter {
        let r: RingRef = Arc::new(FiniteRing::zmod(6));
        let ctx = SymmetricContext::shared(&r).unwrap();
        let even = Subset::from_members(6, [0, 2, 4]);
        let l = filter_closure(&r, std::slice::from_ref(&even), Side::Left).unwrap();
        let rt = filter_closure(&r, &[even], Side::Right).unwrap();
        induce_symmetric_filter(&ctx, &l, &rt).unwrap()
    }

    #[test]
    fn z6_even_symmetric_filter() {
        let sf = z6_even_pair();
        assert_eq!(sf.induced().min_ideal().len(), 3);
        let m = FiniteModule::regular_bimodule(sf.context().ring());
        assert_eq!(symmetric_torsion(&sf, &m).unwrap().members(), &[0, 3]);
        let sr = symmetric_ring(&sf).unwrap();
        assert_eq!(sr.size(), 3);
        assert!(find_ring_isomorphism(sr.ring(), &FiniteRing::zmod(3)).is_some());
        assert!(symmetric_perfect(&sf).unwrap().perfect);
    }

    #[test]
    fn trivial_pairs_and_improper() {
        let r: RingRef = Arc::new(FiniteRing::dual_numbers_f2());
        let ctx = SymmetricContext::shared(&r).unwrap();
        let triv = NamedSymmetric::Trivial.build(&ctx).unwrap();
        assert!(triv.induced().is_trivial());
        let imp = improper_pair(&ctx).unwrap();
        assert!(imp.induced().is_improper());
        let mixed = induce_symmetric_filter(&ctx, &improper_filter(&r, Side::Left), &trivial_filter(&r, Side::Right)).unwrap();
        assert!(mixed.induced().is_trivial());
        let m = FiniteModule::regular_bimodule(&r);
        assert!(symmetric_torsion(&imp, &m).unwrap().is_full());
    }

    #[test]
    fn bar_delta_on_dual_numbers() {
        let r: RingRef = Arc::new(FiniteRing::dual_numbers_f2());
        let ctx = SymmetricContext::shared(&r).unwrap();
        let e = r.element("e").unwrap();
        for d in enumerate_derivations(&r) {
            let bar = ctx.bar_delta(&d).unwrap();
            let t = ctx.tensor();
            assert_eq!(bar.table[t.pure(1, 1)], t.ring().zero());
            assert_eq!(bar.table[t.pure(e, 1)], t.pure(d.table[e], 1));
        }
    }

    #[test]
    fn symmetric_extension_of_derivations_on_dual_numbers() {
        let r: RingRef = Arc::new(FiniteRing::dual_numbers_f2());
        let ctx = SymmetricContext::shared(&r).unwrap();
        let sf = NamedSymmetric::Lambek.build(&ctx).unwrap();
        let m = FiniteModule::regular_bimodule(&r);
        for d in enumerate_derivations(&r) {
            derivation_correspondence(&ctx, &m, &d, &d.table).unwrap();
            let e = extend_symmetric_derivation(&sf, &m, &d, &d.table, Strategy::Auto).unwrap();
            assert_eq!(e.count, Some(1));
        }
    }
}

