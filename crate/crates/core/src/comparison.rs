//! The comparison functor `δ: 2colim Φ → colim Φ`, certification of its
//! being an equivalence, truncation of descent data to `𝔟(n, k)`, and the
//! injectivization of diagrams over `𝔟(2)`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::colimit::{colimit_presentation, ColimitResult};
use crate::diagram::{restrict, Diagram};
use crate::error::{Error, Result};
use crate::groupoid::{
    groupoid_invariants, mapping_cylinder, validate_functor, FiniteGroupoid, FunctorPresentation,
    GroupoidInvariants, Word,
};
use crate::poset::{PosetView, Subset, ViewKind};
use crate::set_colimit::{check_maincor, check_theorem_main, ConditionBattery};
use crate::two_colimit::{descent_category, two_colimit_presentation, DescentCategory, DescentObject, TwoColimit};

/// `δ` with the two presentations it connects.
#[derive(Clone, Debug)]
pub struct ComparisonFunctor {
    pub functor: FunctorPresentation,
    pub two_colimit: TwoColimit,
    pub colimit: ColimitResult,
    /// Relations of the 2-colimit whose image could not be decided.
    pub warnings: Vec<String>,
    pub fuel_spent: u64,
}

/// Builds `δ`: `(S, x) ↦ [x]`, lifted generators to their colimit images,
/// `λ` arrows to identities; then checks that every relation is preserved.
pub fn comparison_delta(d: &Diagram, view: &PosetView, fuel: u64) -> Result<ComparisonFunctor> {
    let tc = two_colimit_presentation(d, view)?;
    let colim = colimit_presentation(d, view, true)?;
    let g = &tc.groupoid;
    let mut object_map = vec![0; g.objects.len()];
    for (&(s, x), &o) in &tc.object_of {
        object_map[o] = colim.objects.insertion(s, x).expect("in colimit");
    }
    let mut generator_map = vec![Word::identity(0); g.generators.len()];
    for (&(s, e), &id) in &tc.lifted {
        generator_map[id] = colim.insertions[&s].generator_map[e].clone();
    }
    for (&(c, x), &id) in &tc.lambda {
        generator_map[id] = Word::identity(colim.objects.insertion(c.lower, x).expect("in colimit"));
    }
    let functor = FunctorPresentation::new(g.clone(), colim.groupoid.clone(), object_map, generator_map);
    let validation = validate_functor(&functor, fuel, false)?;
    Ok(ComparisonFunctor {
        functor,
        two_colimit: tc,
        colimit: colim,
        warnings: validation.warnings,
        fuel_spent: validation.fuel_spent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// Every condition of the named battery holds.
    GuaranteedEquivalent { battery: String },
    /// Some condition fails but the invariants agree.
    InvariantsAgree,
    /// The named invariant differs.
    Distinguished { invariant: String, colimit: String, two_colimit: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::GuaranteedEquivalent { .. } => "GuaranteedEquivalent",
            Verdict::InvariantsAgree => "InvariantsAgree",
            Verdict::Distinguished { .. } => "Distinguished",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub conditions: ConditionBattery,
    pub colim_invariants: Option<GroupoidInvariants>,
    pub twocolim_invariants: Option<GroupoidInvariants>,
    pub unknowns: Vec<String>,
    pub fuel_spent: u64,
}

fn first_difference(a: &GroupoidInvariants, b: &GroupoidInvariants) -> Option<(String, String, String)> {
    if a.component_count != b.component_count {
        return Some(("component count".into(), a.component_count.to_string(), b.component_count.to_string()));
    }
    let (pa, pb) = (a.abelian_profile(), b.abelian_profile());
    if pa != pb {
        let show = |p: &[crate::groupoid::AbelianInvariant]| {
            p.iter().map(|x| format!("(rank {}, torsion {:?})", x.free_rank, x.torsion)).collect::<Vec<_>>().join(", ")
        };
        return Some(("abelianized vertex groups".into(), show(&pa), show(&pb)));
    }
    None
}

/// Runs the reduced battery (or the full one with `full_battery`),
/// computes both presentations and their invariants, and decides a
/// verdict.
pub fn equivalence_report(d: &Diagram, fuel: u64, full_battery: bool) -> Result<EquivalenceReport> {
    let conditions = if full_battery { check_theorem_main(d)? } else { check_maincor(d)? };
    let battery = if full_battery { "full" } else { "reduced" };
    let mut unknowns = Vec::new();
    let mut fuel_spent = 0;
    let delta = match comparison_delta(d, d.view(), fuel) {
        Ok(delta) => delta,
        Err(e @ Error::Overflow(_)) | Err(e @ Error::FuelExceeded(_)) => {
            return Ok(EquivalenceReport {
                verdict: Verdict::Inconclusive { reason: e.to_string() },
                conditions,
                colim_invariants: None,
                twocolim_invariants: None,
                unknowns,
                fuel_spent,
            })
        }
        Err(e) => return Err(e),
    };
    unknowns.extend(delta.warnings.iter().cloned());
    fuel_spent += delta.fuel_spent;
    let inv = groupoid_invariants(&delta.colimit.groupoid).and_then(|a| Ok((a, groupoid_invariants(&delta.two_colimit.groupoid)?)));
    let (ci, ti) = match inv {
        Ok(pair) => pair,
        Err(e) => {
            return Ok(EquivalenceReport {
                verdict: Verdict::Inconclusive { reason: e.to_string() },
                conditions,
                colim_invariants: None,
                twocolim_invariants: None,
                unknowns,
                fuel_spent,
            })
        }
    };
    let verdict = match first_difference(&ci, &ti) {
        Some((invariant, colimit, two_colimit)) => Verdict::Distinguished { invariant, colimit, two_colimit },
        None if conditions.holds => Verdict::GuaranteedEquivalent { battery: battery.into() },
        None => Verdict::InvariantsAgree,
    };
    Ok(EquivalenceReport {
        verdict,
        conditions,
        colim_invariants: Some(ci),
        twocolim_invariants: Some(ti),
        unknowns,
        fuel_spent,
    })
}

fn full_n(d: &Diagram, min: u8) -> Result<u8> {
    match d.view().kind() {
        ViewKind::Full if d.ground_n() >= min => Ok(d.ground_n()),
        _ => Err(Error::Precondition(format!("needs a Full(n) view with n ≥ {min}, got {}", d.view()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetClasses {
    pub target: String,
    pub full_classes: usize,
    pub truncated_classes: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationReport {
    pub n: u8,
    pub k: u8,
    pub full: GroupoidInvariants,
    pub truncated: GroupoidInvariants,
    pub invariants_agree: bool,
    pub targets: Vec<TargetClasses>,
    pub holds: bool,
}

/// Compares the 2-colimit over `Full(n)` with the one over `Codim(n, n−3)`,
/// and the descent class counts over both views for each target.
pub fn truncation_check(d: &Diagram, targets: &[(String, FiniteGroupoid)], fuel: u64) -> Result<TruncationReport> {
    let n = full_n(d, 3)?;
    let k = n - 3;
    let view = PosetView::codim(n, k)?;
    let full = groupoid_invariants(&two_colimit_presentation(d, d.view())?.groupoid)?;
    let truncated = groupoid_invariants(&two_colimit_presentation(d, &view)?.groupoid)?;
    let restricted = restrict(d, &view)?;
    let mut per_target = Vec::new();
    for (name, h) in targets {
        let a = descent_category(d, h, fuel)?.stats.iso_classes;
        let b = descent_category(&restricted, h, fuel)?.stats.iso_classes;
        per_target.push(TargetClasses { target: name.clone(), full_classes: a, truncated_classes: b, agree: a == b });
    }
    let invariants_agree = full.agrees_with(&truncated);
    let holds = invariants_agree && per_target.iter().all(|t| t.agree);
    Ok(TruncationReport { n, k, full, truncated, invariants_agree, targets: per_target, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaKReport {
    pub n: u8,
    pub k: u8,
    pub descent_objects: usize,
    pub descent_classes: usize,
    pub truncated_objects: usize,
    pub truncated_classes: usize,
    pub faithful: bool,
    pub full: bool,
    pub essentially_surjective: bool,
    /// Fullness is expected for `k ≤ n−2`, equivalence for `k ≤ n−3`.
    pub expect_full: bool,
    pub expect_equivalence: bool,
    pub counterexamples: Vec<String>,
    /// Every expected property was verified.
    pub holds: bool,
}

fn describe(shape: &crate::two_colimit::DescentShape, h: &FiniteGroupoid, x: &DescentObject) -> String {
    let parts: Vec<String> = shape
        .elements
        .iter()
        .zip(&x.functors)
        .map(|(s, f)| {
            let objs: Vec<&str> = f.objects.iter().map(|&o| h.objects[o].as_str()).collect();
            format!("{s}↦[{}]", objs.join(","))
        })
        .collect();
    parts.join(" ")
}

/// Checks by exhaustive enumeration whether `γ_k`, which forgets the
/// components at `|S| < k`, is faithful, full and essentially surjective.
pub fn gamma_k_properties(d: &Diagram, h: &FiniteGroupoid, k: u8, fuel: u64) -> Result<GammaKReport> {
    full_n(d, 2)?;
    let big = descent_category(d, h, fuel)?;
    gamma_k_with(d, &big, h, k, fuel)
}

/// As [`gamma_k_properties`], reusing an enumerated descent category of `d`.
pub fn gamma_k_with(d: &Diagram, big: &DescentCategory, h: &FiniteGroupoid, k: u8, fuel: u64) -> Result<GammaKReport> {
    let n = full_n(d, 2)?;
    if k >= n {
        return Err(Error::Precondition(format!("k must be below n = {n}")));
    }
    let view = PosetView::codim(n, k)?;
    let small = descent_category(&restrict(d, &view)?, h, fuel)?;
    let elem_map: Vec<usize> =
        small.shape.elements.iter().map(|s| big.shape.element_index(s).expect("subview")).collect();
    let cover_map: Vec<usize> =
        small.shape.covers.iter().map(|c| big.shape.cover_index(c).expect("subview")).collect();
    let res = |x: &DescentObject| DescentObject {
        functors: elem_map.iter().map(|&i| x.functors[i].clone()).collect(),
        transitions: cover_map.iter().map(|&c| x.transitions[c].clone()).collect(),
    };
    let small_index = small.index_of();
    let mut faithful = true;
    let mut aut_surjective = true;
    let mut class_image: BTreeMap<usize, usize> = BTreeMap::new();
    let mut injective_on_classes = true;
    let mut counterexamples = Vec::new();
    let mut seen = HashSet::new();
    for (i, x) in big.objects.iter().enumerate() {
        if !seen.insert(big.class_of[i]) {
            continue;
        }
        let y = res(x);
        let j = *small_index.get(&y).ok_or_else(|| Error::InvalidDescent("restriction left the enumerated set".into()))?;
        let auts = big.shape.morphisms(h, x, x);
        let images: HashSet<Vec<Vec<crate::groupoid::Morphism>>> =
            auts.iter().map(|f| elem_map.iter().map(|&e| f.components[e].clone()).collect()).collect();
        if images.len() != auts.len() {
            faithful = false;
            counterexamples.push(format!("not faithful at {}", describe(&big.shape, h, x)));
        }
        let target_auts = small.shape.morphisms(h, &y, &y).len();
        if images.len() != target_auts {
            aut_surjective = false;
            if k + 2 <= n {
                counterexamples.push(format!("not full at {}", describe(&big.shape, h, x)));
            }
        }
        let c = small.class_of[j];
        if let Some(prev) = class_image.insert(c, big.class_of[i]) {
            if prev != big.class_of[i] {
                injective_on_classes = false;
                if k + 2 <= n {
                    counterexamples.push(format!("two classes restrict to one at {}", describe(&small.shape, h, &y)));
                }
            }
        }
    }
    let hit: HashSet<usize> = class_image.keys().copied().collect();
    let essentially_surjective = hit.len() == small.stats.iso_classes;
    if !essentially_surjective && k + 3 <= n {
        let missing: HashMap<usize, usize> =
            small.class_of.iter().enumerate().map(|(i, &c)| (c, i)).filter(|(c, _)| !hit.contains(c)).collect();
        if let Some((_, &i)) = missing.iter().next() {
            counterexamples.push(format!("class not reached: {}", describe(&small.shape, h, &small.objects[i])));
        }
    }
    let full = aut_surjective && injective_on_classes;
    let expect_full = k + 2 <= n;
    let expect_equivalence = k + 3 <= n;
    let holds = faithful && (!expect_full || full) && (!expect_equivalence || essentially_surjective);
    Ok(GammaKReport {
        n,
        k,
        descent_objects: big.stats.objects,
        descent_classes: big.stats.iso_classes,
        truncated_objects: small.stats.objects,
        truncated_classes: small.stats.iso_classes,
        faithful,
        full,
        essentially_surjective,
        expect_full,
        expect_equivalence,
        counterexamples,
        holds,
    })
}

/// Replaces `Φ({1})` and `Φ({2})` by the mapping cylinders of the two
/// functors out of `Φ(∅)`, making both injective on objects.
pub fn injectivize_diagram_b2(d: &Diagram) -> Result<Diagram> {
    if !matches!(d.view().kind(), ViewKind::Full) || d.ground_n() != 2 {
        return Err(Error::Precondition(
            "injectivization is only provided over Full(2); for larger n insert mapping cylinders by hand".into(),
        ));
    }
    d.ensure_usable()?;
    let bottom = Subset::empty(2);
    let mut groupoids = BTreeMap::new();
    let mut functors = BTreeMap::new();
    groupoids.insert(bottom, d.groupoid(&bottom)?.clone());
    for c in d.view().covers() {
        let cyl = mapping_cylinder(d.cover_functor(&c)?)?;
        groupoids.insert(c.upper, cyl.h_prime.clone());
        functors.insert(c, cyl.f_prime);
    }
    let mut out = Diagram::new(d.view().clone(), groupoids, functors)?;
    out.verify(0, false)?;
    Ok(out)
}
