//! Deterministic randomized suites checking the library's theorems on
//! small instances. Case `i` of a suite draws from a generator seeded by
//! `(seed, suite, i)`, so results do not depend on how cases are scheduled.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{equivariant_maps, frobenius_check, stable_frobenius_check, EquivariantMap, GAction};
use crate::biaction::BiAction;
use crate::bibundle::{
    are_isomorphic, enumerate_morphisms, point_arrows, point_morphism, point_objects, points_groupoid,
    validate_bibundle, Bibundle,
};
use crate::finset::{FinMap, FinSet};
use crate::functor::{for_each_functor, InternalFunctor};
use crate::gen;
use crate::groupoid::Groupoid;
use crate::morita::{invert_essential_equivalence, morita_equivalent, reconstruct_internal_groupoid, semidirect_product, MoritaInvariant};
use crate::par::Execution;
use crate::report::{Law, ValidationReport};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LawConfig {
    pub seed: u64,
    pub max_objects: usize,
    pub max_arrows: usize,
    /// Overrides every suite's own case count.
    pub cases: Option<usize>,
    pub execution: Execution,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            seed: DEFAULT_SEED,
            max_objects: 5,
            max_arrows: 16,
            cases: None,
            execution: Execution::default(),
        }
    }
}

impl LawConfig {
    fn bounds(&self, objects: usize, arrows: usize) -> (usize, usize) {
        (self.max_objects.clamp(1, objects), self.max_arrows.clamp(1, arrows))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Constructions,
    Corruptions,
    Components,
    Frobenius,
    RestrictionAdjunction,
    EssentialEquivalence,
    BibundleMorphisms,
    Localization,
    TensorAdjunction,
    MoritaCertificates,
    Reconstruction,
    PseudoProducts,
    Points,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Constructions,
        Suite::Corruptions,
        Suite::Components,
        Suite::Frobenius,
        Suite::RestrictionAdjunction,
        Suite::EssentialEquivalence,
        Suite::BibundleMorphisms,
        Suite::Localization,
        Suite::TensorAdjunction,
        Suite::MoritaCertificates,
        Suite::Reconstruction,
        Suite::PseudoProducts,
        Suite::Points,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Constructions => "constructions",
            Suite::Corruptions => "corruptions",
            Suite::Components => "components",
            Suite::Frobenius => "frobenius",
            Suite::RestrictionAdjunction => "restriction-adjunction",
            Suite::EssentialEquivalence => "essential-equivalence",
            Suite::BibundleMorphisms => "bibundle-morphisms",
            Suite::Localization => "localization",
            Suite::TensorAdjunction => "tensor-adjunction",
            Suite::MoritaCertificates => "morita-certificates",
            Suite::Reconstruction => "reconstruction",
            Suite::PseudoProducts => "pseudo-products",
            Suite::Points => "points",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Suite::Constructions => 500,
            Suite::Corruptions => 100,
            Suite::Components => 200,
            Suite::Frobenius => 300,
            Suite::RestrictionAdjunction => 100,
            Suite::EssentialEquivalence => 10_000,
            Suite::BibundleMorphisms => 200,
            Suite::Localization => 50,
            Suite::TensorAdjunction => 100,
            Suite::MoritaCertificates => 50,
            Suite::Reconstruction => 50,
            Suite::PseudoProducts => 50,
            Suite::Points => 20,
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed suite") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const MAX_LISTED_FAILURES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    /// The first few failures, in case order.
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn collect(name: &'static str, results: Vec<Result<(), String>>) -> Self {
        let cases = results.len();
        let failures: Vec<String> = results
            .into_iter()
            .enumerate()
            .filter_map(|(i, r)| r.err().map(|e| format!("case {i}: {e}")))
            .collect();
        SuiteOutcome {
            name,
            cases,
            passed: cases - failures.len(),
            failures: failures.into_iter().take(MAX_LISTED_FAILURES).collect(),
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "ok" } else { "FAILED" };
        write!(f, "{}: {}/{} {verdict}", self.name, self.passed, self.cases)?;
        for failure in &self.failures {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

pub fn case_rng(seed: u64, suite: Suite, case: usize) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&suite.index().to_le_bytes());
    bytes[16..24].copy_from_slice(&(case as u64).to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

pub fn run_all(config: &LawConfig) -> Vec<SuiteOutcome> {
    Suite::ALL.iter().map(|&s| run_suite(s, config)).collect()
}

pub fn run_suite(suite: Suite, config: &LawConfig) -> SuiteOutcome {
    if suite == Suite::EssentialEquivalence {
        return essential_equivalence(config, true);
    }
    let n = config.cases.unwrap_or(suite.default_cases());
    let results = config.execution.map(n, |i| {
        let mut rng = case_rng(config.seed, suite, i);
        let rng = &mut rng;
        match suite {
            Suite::Constructions => constructions(rng, config, i),
            Suite::Corruptions => corruptions(rng, config, i),
            Suite::Components => components(rng, config),
            Suite::Frobenius => frobenius(rng, config),
            Suite::RestrictionAdjunction => restriction_adjunction(rng, config),
            Suite::BibundleMorphisms => bibundle_morphisms(rng, config, i),
            Suite::Localization => localization(rng, config),
            Suite::TensorAdjunction => tensor_adjunction(rng, config),
            Suite::MoritaCertificates => morita_certificates(rng, config, i),
            Suite::Reconstruction => reconstruction(rng, config),
            Suite::PseudoProducts => pseudo_products(rng, config),
            Suite::Points => points(rng, config),
            Suite::EssentialEquivalence => unreachable!("handled above"),
        }
    });
    SuiteOutcome::collect(suite.name(), results)
}

type CaseResult = Result<(), String>;

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn clean(report: ValidationReport) -> CaseResult {
    ensure(report.is_empty(), || report.to_string())
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_map(rng: &mut impl Rng, dom: usize, cod: usize) -> FinMap {
    FinMap::new(cod, (0..dom).map(|_| rng.random_range(0..cod)).collect()).expect("values below cod")
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> FinMap {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    FinMap::new(n, p).expect("permutation")
}

fn groupoid_where(rng: &mut impl Rng, bounds: (usize, usize), pred: impl Fn(&Groupoid) -> bool) -> Arc<Groupoid> {
    for _ in 0..200 {
        let g = gen::random_groupoid(rng, bounds.0, bounds.1);
        if pred(&g) {
            return Arc::new(g);
        }
    }
    let fallback = Groupoid::product(&Groupoid::pair(2), &Groupoid::from_group(&crate::group::GroupTable::cyclic(2)));
    assert!(pred(&fallback), "fallback groupoid must satisfy the requirement");
    Arc::new(fallback)
}

fn relabel_sides(sides: &BiAction, perm: &FinMap) -> crate::Result<BiAction> {
    BiAction::from_raw(sides.left().relabeled(perm)?, sides.right().relabeled(perm)?)
}

// ----- axioms -----

fn constructions(rng: &mut ChaCha8Rng, cfg: &LawConfig, i: usize) -> CaseResult {
    let bounds = cfg.bounds(5, 16);
    let g = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let report = match i % 8 {
        0 => g.validate(),
        1 => Groupoid::product(&gen::random_groupoid(rng, 2, 4), &g).validate(),
        2 => g.opposite().validate(),
        3 => {
            let size = rng.random_range(0..=4);
            let f = random_map(rng, size, g.num_objects());
            g.pullback_along(&f).map_err(err)?.0.validate()
        }
        4 => {
            let a = gen::random_action(rng, &g, 5);
            let mut r = a.validate();
            r.merge_scoped("action groupoid", a.action_groupoid().validate());
            r
        }
        5 => {
            let size = rng.random_range(0..=4);
            let f = random_map(rng, size, g.num_objects());
            GAction::free(g.clone(), &f).map_err(err)?.validate()
        }
        6 => {
            let h = Arc::new(gen::random_groupoid(rng, 3, 8));
            gen::random_functor(rng, &h, &g, 256)
                .ok_or("no functor into a nonempty groupoid")?
                .validate()
        }
        _ => {
            let b = gen::random_bibundle(rng, 3, 8, 8);
            let mut r = validate_bibundle(b.sides());
            let id = Bibundle::identity(b.right_groupoid().clone());
            let composite = b.compose(&id).map_err(err)?;
            r.merge_scoped("composite", validate_bibundle(composite.sides()));
            r
        }
    };
    clean(report)
}

fn corruptions(rng: &mut ChaCha8Rng, cfg: &LawConfig, i: usize) -> CaseResult {
    let bounds = cfg.bounds(5, 16);
    let (report, expected) = match i % 8 {
        0 => {
            let g = groupoid_where(rng, bounds, |g| g.num_arrows() > g.num_objects());
            let non_units: Vec<usize> = g.arrows().elements().filter(|&a| g.unit(g.src(a)) != a).collect();
            let a = non_units[rng.random_range(0..non_units.len())];
            let mut inv = g.inv_map().table().to_vec();
            inv[a] = g.unit(g.src(a));
            let expected = if g.src(a) == g.tgt(a) { Law::InverseLaw } else { Law::InverseEndpoints };
            let broken = Groupoid::from_raw(
                g.objects(),
                g.src_map().clone(),
                g.tgt_map().clone(),
                g.unit_map().clone(),
                FinMap::new(g.arrows(), inv).map_err(err)?,
                g.mul_table().clone(),
            )
            .map_err(err)?;
            (broken.validate(), expected)
        }
        1 => {
            let g = groupoid_where(rng, bounds, |_| true);
            let triples: Vec<_> = g.mul_table().triples().collect();
            let (a, b, _) = triples[rng.random_range(0..triples.len())];
            let mut mul = g.mul_table().clone();
            mul.clear(a, b);
            let broken = Groupoid::from_raw(
                g.objects(),
                g.src_map().clone(),
                g.tgt_map().clone(),
                g.unit_map().clone(),
                g.inv_map().clone(),
                mul,
            )
            .map_err(err)?;
            (broken.validate(), Law::CompositionDomain)
        }
        2 => {
            let g = groupoid_where(rng, bounds, |g| g.num_objects() >= 2);
            let x = rng.random_range(0..g.num_objects());
            let elsewhere: Vec<usize> = g.arrows().elements().filter(|&a| g.src(a) != x).collect();
            let mut unit = g.unit_map().table().to_vec();
            unit[x] = elsewhere[rng.random_range(0..elsewhere.len())];
            let broken = Groupoid::from_raw(
                g.objects(),
                g.src_map().clone(),
                g.tgt_map().clone(),
                FinMap::new(g.arrows(), unit).map_err(err)?,
                g.inv_map().clone(),
                g.mul_table().clone(),
            )
            .map_err(err)?;
            (broken.validate(), Law::UnitEndpoints)
        }
        3 => {
            let g = groupoid_where(rng, bounds, |_| true);
            let a = GAction::sum(&gen::random_action(rng, &g, 4), &GAction::terminal(g.clone())).map_err(err)?;
            let triples: Vec<_> = a.act_table().triples().collect();
            let (arrow, x, _) = triples[rng.random_range(0..triples.len())];
            let mut act = a.act_table().clone();
            act.clear(arrow, x);
            let broken = GAction::from_raw(g.clone(), a.anchor_map().clone(), act).map_err(err)?;
            (broken.validate(), Law::ActionDomain)
        }
        4 => {
            let g = groupoid_where(rng, bounds, |_| true);
            let a = GAction::sum(&gen::random_action(rng, &g, 3), &GAction::trivial(g.clone(), 2)).map_err(err)?;
            let x = rng.random_range(0..a.len());
            let partners: Vec<usize> = a
                .anchor_map()
                .fiber(a.anchor(x))
                .filter(|&y| y != x)
                .collect();
            let y = partners[rng.random_range(0..partners.len())];
            let mut act = a.act_table().clone();
            act.set(g.unit(a.anchor(x)), x, y);
            let broken = GAction::from_raw(g.clone(), a.anchor_map().clone(), act).map_err(err)?;
            (broken.validate(), Law::ActionUnit)
        }
        5 => {
            let g = groupoid_where(rng, bounds, |g| g.num_objects() >= 2);
            let h = Arc::new(gen::random_groupoid(rng, 3, 8));
            let f = gen::random_functor(rng, &h, &g, 256).ok_or("no functor into a nonempty groupoid")?;
            let a = rng.random_range(0..h.num_arrows());
            let fa = f.arrow(a);
            let others: Vec<usize> = g
                .arrows()
                .elements()
                .filter(|&b| (g.src(b), g.tgt(b)) != (g.src(fa), g.tgt(fa)))
                .collect();
            let mut arr = f.arr_map().table().to_vec();
            arr[a] = others[rng.random_range(0..others.len())];
            let broken = InternalFunctor::from_raw(
                h.clone(),
                g.clone(),
                f.obj_map().clone(),
                FinMap::new(g.arrows(), arr).map_err(err)?,
            )
            .map_err(err)?;
            (broken.validate(), Law::FunctorEndpoints)
        }
        6 => {
            let b = gen::random_bibundle(rng, 3, 8, 6);
            let left = GAction::sum(b.left(), b.left()).map_err(err)?;
            let right = GAction::sum(b.right(), b.right()).map_err(err)?;
            let doubled = BiAction::from_raw(left, right).map_err(err)?;
            (validate_bibundle(&doubled), Law::Principality)
        }
        _ => {
            let first = gen::random_groupoid(rng, 2, 6);
            let second = gen::random_groupoid(rng, 2, 6);
            let g = Arc::new(Groupoid::disjoint_union(&first, &second));
            let x = rng.random_range(0..g.num_objects());
            let points = FinMap::new(g.objects(), vec![x]).map_err(err)?;
            let b = Bibundle::point_bundle(g, &points).map_err(err)?;
            (validate_bibundle(&b.sides().swapped()), Law::Descent)
        }
    };
    ensure(report.contains(expected), || format!("expected a {expected} violation, got: {report}"))
}

// ----- actions -----

fn components(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(5, 16);
    let g = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let set_size = rng.random_range(0..=5);
    let f = random_map(rng, set_size, g.num_objects());
    let free = GAction::free(g, &f).map_err(err)?;
    let classes = free.orbits().num_classes();
    ensure(classes == set_size, || format!("{classes} orbits for a free action on {set_size} points"))
}

fn frobenius(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(5, 16);
    let g = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let w = gen::random_action(rng, &g, 5);
    let set = FinSet::new(rng.random_range(0..=3));
    let plain = frobenius_check(&w, set);
    ensure(plain.is_bijection(), || format!("comparison {plain:?} is not a bijection"))?;

    let x = FinSet::new(rng.random_range(1..=3));
    let orbits = w.orbits();
    let to_x = random_map(rng, orbits.num_classes(), x.size());
    let n0 = g.num_objects();
    let trivial_x = GAction::trivial(g.clone(), x);
    let map = FinMap::from_fn(w.carrier(), trivial_x.carrier(), |e| to_x.apply(orbits.class_of(e)) * n0 + w.anchor(e));
    let over = EquivariantMap::new(w.clone(), trivial_x, map).map_err(err)?;
    let size = rng.random_range(0..=3);
    let f = random_map(rng, size, x.size());
    let stable = stable_frobenius_check(&w, &over, &f).map_err(err)?;
    ensure(stable.is_bijection(), || format!("stable comparison {stable:?} is not a bijection"))
}

fn restriction_adjunction(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(3, 8);
    let h = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let g = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let f = gen::random_functor(rng, &h, &g, 256).ok_or("no functor")?;
    let y = gen::random_action(rng, &h, 4);
    let a = gen::random_action(rng, &g, 4);
    let induced = f.induce(&y).map_err(err)?;
    let restricted = f.restrict(&a).map_err(err)?;
    let forward = equivariant_maps(&induced, &a).map_err(err)?;
    let backward = equivariant_maps(&y, &restricted).map_err(err)?;
    ensure(forward.len() == backward.len(), || {
        format!("{} maps out of the induced action, {} into the restriction", forward.len(), backward.len())
    })?;
    for m in &forward {
        let t = f.transpose_to_restriction(&y, &a, m.map()).map_err(err)?;
        EquivariantMap::new(y.clone(), restricted.clone(), t.clone()).map_err(err)?;
        let back = f.transpose_to_induced(&y, &a, &t).map_err(err)?;
        ensure(&back == m.map(), || format!("transpose of {:?} does not come back", m.map().table()))?;
    }
    for m in &backward {
        let t = f.transpose_to_induced(&y, &a, m.map()).map_err(err)?;
        EquivariantMap::new(induced.clone(), a.clone(), t.clone()).map_err(err)?;
        let back = f.transpose_to_restriction(&y, &a, &t).map_err(err)?;
        ensure(&back == m.map(), || format!("transpose of {:?} does not come back", m.map().table()))?;
    }
    Ok(())
}

/// Compares the essential-equivalence predicate with unit and counit
/// isomorphisms over every action with at most three elements, and, when
/// `include_regular` is set, over the arrow actions of both groupoids.
/// Functors between all groupoids with at most 3 objects and 8 arrows
/// are enumerated; beyond the case limit a seeded uniform sample is used.
pub fn essential_equivalence(config: &LawConfig, include_regular: bool) -> SuiteOutcome {
    let name = if include_regular {
        "essential-equivalence"
    } else {
        "essential-equivalence-bounded"
    };
    let bounds = config.bounds(3, 8);
    let groupoids: Vec<Arc<Groupoid>> = gen::small_groupoids(bounds.0, bounds.1).into_iter().map(Arc::new).collect();
    let families: Vec<Vec<GAction>> = config.execution.map(groupoids.len(), |i| {
        let g = &groupoids[i];
        let mut family: Vec<GAction> = (0..=3).flat_map(|k| crate::action::enumerate_actions(g, k)).collect();
        if include_regular {
            family.push(GAction::arrows_acting(g.clone()));
        }
        family
    });
    let pairs: Vec<(usize, usize)> = (0..groupoids.len())
        .flat_map(|h| (0..groupoids.len()).map(move |g| (h, g)))
        .collect();
    let counts: Vec<usize> = config.execution.map(pairs.len(), |i| {
        let (h, g) = pairs[i];
        let mut n = 0;
        for_each_functor(&groupoids[h], &groupoids[g], |_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    });
    let total: usize = counts.iter().sum();
    let limit = config.cases.unwrap_or(Suite::EssentialEquivalence.default_cases());
    let chosen: Vec<usize> = if total <= limit {
        (0..total).collect()
    } else {
        let mut rng = case_rng(config.seed, Suite::EssentialEquivalence, 0);
        let mut sample = rand::seq::index::sample(&mut rng, total, limit).into_vec();
        sample.sort_unstable();
        sample
    };
    let mut starts = Vec::with_capacity(counts.len());
    let mut acc = 0;
    for &c in &counts {
        starts.push(acc);
        acc += c;
    }
    let results = config.execution.map(chosen.len(), |j| {
        let index = chosen[j];
        let pair = starts.partition_point(|&s| s <= index) - 1;
        let (h, g) = pairs[pair];
        let mut remaining = index - starts[pair];
        let mut found = None;
        for_each_functor(&groupoids[h], &groupoids[g], |f| {
            if remaining == 0 {
                found = Some(f);
                ControlFlow::Break(())
            } else {
                remaining -= 1;
                ControlFlow::Continue(())
            }
        });
        let f = found.expect("functor index within the count");
        let predicate = f.is_essential_equivalence();
        let units = families[h].iter().all(|y| f.unit(y).is_ok_and(|m| m.is_isomorphism()));
        let behaves = units && families[g].iter().all(|a| f.counit(a).is_ok_and(|m| m.is_isomorphism()));
        ensure(predicate == behaves, || {
            format!(
                "functor #{index} (groupoid {h} -> groupoid {g}): predicate {predicate}, unit and counit isomorphisms {behaves}"
            )
        })
    });
    SuiteOutcome::collect(name, results)
}

// ----- bibundles -----

fn bibundle_morphisms(rng: &mut ChaCha8Rng, cfg: &LawConfig, i: usize) -> CaseResult {
    let bounds = cfg.bounds(3, 8);
    let p = gen::random_bibundle(rng, bounds.0, bounds.1, 8);
    let (q, relabeling) = if i.is_multiple_of(2) {
        let perm = random_permutation(rng, p.len());
        (Bibundle::new(relabel_sides(p.sides(), &perm).map_err(err)?).map_err(err)?, Some(perm))
    } else {
        let f = gen::random_functor(rng, p.left_groupoid(), p.right_groupoid(), 256).ok_or("no functor")?;
        (Bibundle::from_functor(&f).map_err(err)?, None)
    };
    let found = enumerate_morphisms(&p, &q).map_err(err)?;
    for m in &found {
        ensure(m.is_bijective(), || format!("morphism {:?} is not a bijection", m.map().table()))?;
        m.validate().is_empty().then_some(()).ok_or("found map is not a morphism")?;
    }
    if let Some(perm) = relabeling {
        ensure(found.iter().any(|m| m.map() == &perm), || "the relabeling was not found".to_string())?;
    }
    Ok(())
}

fn localization(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(3, 8);
    let g = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let e = gen::random_essential_equivalence(rng, &g, 2);
    let cert = invert_essential_equivalence(&e).map_err(err)?;
    let eq = cert.equivalence().ok_or("no equivalence produced")?;
    ensure(cert.verify(e.dom(), e.cod()), || "certificate fails verification".into())?;
    ensure(eq.unit.is_bijective() && eq.counit.is_bijective(), || "witness is not a bijection".into())
}

fn tensor_adjunction(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(3, 8);
    let p = gen::random_bibundle(rng, bounds.0, bounds.1, 4);
    let y = gen::random_action(rng, p.left_groupoid(), 4);
    let x = gen::random_action(rng, p.right_groupoid(), 4);
    let applied = p.apply(&y).map_err(err)?;
    let coapplied = p.coapply(&x).map_err(err)?;
    let forward = equivariant_maps(&applied, &x).map_err(err)?;
    let backward = equivariant_maps(&y, &coapplied).map_err(err)?;
    ensure(forward.len() == backward.len(), || {
        format!("{} maps out of the applied action, {} into the coapplied one", forward.len(), backward.len())
    })?;
    for m in &forward {
        let t = p.transpose_to_coapply(&y, &x, m.map()).map_err(err)?;
        EquivariantMap::new(y.clone(), coapplied.clone(), t.clone()).map_err(err)?;
        ensure(&p.transpose_to_apply(&y, &x, &t).map_err(err)? == m.map(), || "round trip differs".into())?;
    }
    for m in &backward {
        let t = p.transpose_to_apply(&y, &x, m.map()).map_err(err)?;
        EquivariantMap::new(applied.clone(), x.clone(), t.clone()).map_err(err)?;
        ensure(&p.transpose_to_coapply(&y, &x, &t).map_err(err)? == m.map(), || "round trip differs".into())?;
    }
    Ok(())
}

fn morita_certificates(rng: &mut ChaCha8Rng, cfg: &LawConfig, i: usize) -> CaseResult {
    let bounds = cfg.bounds(3, 8);
    let h = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let g = if i.is_multiple_of(2) {
        gen::random_essential_equivalence(rng, &h, 2).dom().clone()
    } else {
        Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1))
    };
    let cert = morita_equivalent(&h, &g).map_err(err)?;
    ensure(cert.verify(&h, &g), || "certificate fails verification".into())?;
    let same = MoritaInvariant::of(&h) == MoritaInvariant::of(&g);
    ensure(cert.is_equivalent() == same, || "verdict disagrees with the invariants".into())?;
    ensure(i % 2 == 1 || same, || "pulled-back groupoid judged inequivalent".into())
}

fn reconstruction(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(3, 8);
    let p = gen::random_bibundle(rng, bounds.0, bounds.1, 6);
    let k = reconstruct_internal_groupoid(&p).map_err(err)?;
    clean(k.validate())?;
    let semidirect = semidirect_product(&k).map_err(err)?;
    let product = Arc::new(Groupoid::product(p.left_groupoid(), p.right_groupoid()));
    let both = p.sides().as_product_action(product).map_err(err)?;
    ensure(semidirect.is_isomorphic(&both.action_groupoid()), || {
        "semidirect product is not the action groupoid of the two-sided action".into()
    })?;
    let underlying = k.underlying().map_err(err)?;
    ensure(underlying.is_isomorphic(&p.left().action_groupoid()), || {
        "underlying groupoid is not the action groupoid of the left action".into()
    })
}

fn pseudo_products(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(2, 6);
    let k = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let p1 = gen::random_bibundle_from(rng, &k, bounds.0, bounds.1, 6);
    let p2 = gen::random_bibundle_from(rng, &k, bounds.0, bounds.1, 6);
    let paired = Bibundle::pair(&p1, &p2).map_err(err)?;
    let (_, first, second) = InternalFunctor::projections(p1.right_groupoid(), p2.right_groupoid());
    let back1 = paired.compose(&Bibundle::from_functor(&first).map_err(err)?).map_err(err)?;
    let back2 = paired.compose(&Bibundle::from_functor(&second).map_err(err)?).map_err(err)?;
    ensure(are_isomorphic(&back1, &p1).map_err(err)?, || "first projection law fails".into())?;
    ensure(are_isomorphic(&back2, &p2).map_err(err)?, || "second projection law fails".into())
}

fn points(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> CaseResult {
    let bounds = cfg.bounds(3, 8);
    let g = Arc::new(gen::random_groupoid(rng, bounds.0, bounds.1));
    let stage = rng.random_range(0..=2);
    let points = points_groupoid(&g, stage);
    for x1 in points.objects().elements() {
        for x2 in points.objects().elements() {
            let b1 = Bibundle::point_bundle(g.clone(), &point_objects(&g, stage, x1)).map_err(err)?;
            let b2 = Bibundle::point_bundle(g.clone(), &point_objects(&g, stage, x2)).map_err(err)?;
            let mut images = Vec::new();
            for y in points.hom(x1, x2) {
                let m = point_morphism(&g, &point_arrows(&g, stage, y)).map_err(err)?;
                ensure(m.dom() == &b1 && m.cod() == &b2, || format!("arrow {y} maps between the wrong bundles"))?;
                images.push(m.map().clone());
            }
            let mut all: Vec<FinMap> = enumerate_morphisms(&b1, &b2).map_err(err)?.into_iter().map(|m| m.map().clone()).collect();
            let key = |m: &FinMap| m.table().to_vec();
            images.sort_by_key(key);
            all.sort_by_key(key);
            let distinct = images.windows(2).all(|w| w[0] != w[1]);
            ensure(distinct, || format!("two arrows {x1} -> {x2} give the same morphism"))?;
            ensure(images == all, || {
                format!("{} arrows {x1} -> {x2} but {} bundle morphisms", images.len(), all.len())
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> LawConfig {
        LawConfig {
            cases: Some(8),
            ..LawConfig::default()
        }
    }

    #[test]
    fn every_suite_passes_on_a_few_cases() {
        for suite in Suite::ALL {
            let outcome = run_suite(suite, &small());
            assert!(outcome.ok(), "{outcome}");
        }
    }

    #[test]
    fn schedules_agree() {
        let seq = LawConfig {
            execution: Execution::Sequential,
            ..small()
        };
        for suite in [Suite::Constructions, Suite::Corruptions, Suite::TensorAdjunction] {
            assert_eq!(run_suite(suite, &seq), run_suite(suite, &small()));
        }
    }
}
