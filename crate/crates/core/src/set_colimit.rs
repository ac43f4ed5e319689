//! Colimits of object sets and the injectivity conditions `A^V_U`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::diagram::{functor_between, Diagram};
use crate::error::{Error, Result};
use crate::groupoid::ObjId;
use crate::poset::{PosetView, Subset, ViewKind};
use crate::union_find::UnionFind;

/// Quotient of `⊔_S Ob Φ(S)` by `x ~ Φ_{S,T}(x)`.
#[derive(Clone, Debug)]
pub struct SetColimit {
    /// All `(S, x)` in canonical order.
    pub elements: Vec<(Subset, ObjId)>,
    /// Class of each element; classes are numbered by smallest element.
    pub class_of: Vec<usize>,
    pub class_count: usize,
    /// Smallest element of each class.
    pub representatives: Vec<(Subset, ObjId)>,
    index: HashMap<(Subset, ObjId), usize>,
}

impl SetColimit {
    pub fn insertion(&self, s: Subset, x: ObjId) -> Option<usize> {
        self.index.get(&(s, x)).map(|&i| self.class_of[i])
    }

    /// Members of each class.
    pub fn classes(&self) -> Vec<Vec<(Subset, ObjId)>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (i, e) in self.elements.iter().enumerate() {
            out[self.class_of[i]].push(*e);
        }
        out
    }
}

/// Union-find over the objects of every element of `view`, merging along
/// the covers of the view.
pub fn set_colimit(d: &Diagram, view: &PosetView) -> Result<SetColimit> {
    d.ensure_usable()?;
    if !view.is_subview_of(d.view()) {
        return Err(Error::Precondition(format!("{view} is not contained in {}", d.view())));
    }
    let mut elements = Vec::new();
    let mut index = HashMap::new();
    for s in view.enumerate() {
        for x in 0..d.groupoid(&s)?.objects.len() {
            index.insert((s, x), elements.len());
            elements.push((s, x));
        }
    }
    let mut uf = UnionFind::new(elements.len());
    for c in view.covers() {
        let f = d.cover_functor(&c)?;
        for (x, &y) in f.object_map.iter().enumerate() {
            uf.union(index[&(c.lower, x)], index[&(c.upper, y)]);
        }
    }
    let (class_of, class_count) = uf.classes();
    let mut representatives = vec![None; class_count];
    for (i, &c) in class_of.iter().enumerate() {
        representatives[c].get_or_insert(elements[i]);
    }
    Ok(SetColimit {
        elements,
        class_of,
        class_count,
        representatives: representatives.into_iter().map(|r| r.expect("nonempty class")).collect(),
        index,
    })
}

/// A pair of distinct classes of `colim_{𝔟(V:U)}` with the same image in
/// `Ob Φ(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionWitness {
    pub first: String,
    pub second: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub v: Subset,
    pub u: Subset,
    pub holds: bool,
    pub witness: Option<ConditionWitness>,
    /// Battery instances that produced this condition, e.g. `A1(k=1)`.
    pub labels: Vec<String>,
}

fn element_name(d: &Diagram, e: (Subset, ObjId)) -> String {
    format!("{}:{}", e.0, d.groupoids()[&e.0].objects[e.1])
}

/// Whether `colim_{𝔟(V:U)} Φ → Φ(V)` is injective on objects.
pub fn condition_avu(d: &Diagram, v: &Subset, u: &Subset) -> Result<ConditionReport> {
    if !v.is_proper() {
        return Err(Error::Precondition(format!("{v} is not a proper subset of the ground set")));
    }
    let view = PosetView::rel(*v, *u)?;
    if !d.view().contains(v) || !view.is_subview_of(d.view()) {
        return Err(Error::Precondition(format!("{view} and {v} must lie in {}", d.view())));
    }
    let colim = set_colimit(d, &view)?;
    let mut to_v: HashMap<Subset, Vec<ObjId>> = HashMap::new();
    let mut seen: BTreeMap<ObjId, usize> = BTreeMap::new();
    let target = d.groupoid(v)?;
    for (c, rep) in colim.representatives.iter().enumerate() {
        if let std::collections::hash_map::Entry::Vacant(e) = to_v.entry(rep.0) {
            e.insert(functor_between(d, &rep.0, v)?.object_map);
        }
        let img = to_v[&rep.0][rep.1];
        if let Some(&prev) = seen.get(&img) {
            let witness = ConditionWitness {
                first: element_name(d, colim.representatives[prev]),
                second: element_name(d, colim.representatives[c]),
                image: format!("{v}:{}", target.objects[img]),
            };
            return Ok(ConditionReport { v: *v, u: *u, holds: false, witness: Some(witness), labels: Vec::new() });
        }
        seen.insert(img, c);
    }
    Ok(ConditionReport { v: *v, u: *u, holds: true, witness: None, labels: Vec::new() })
}

/// One member of a condition battery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionInstance {
    pub label: String,
    pub v: Subset,
    pub u: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionBattery {
    /// Every instance of the index set, duplicates included.
    pub instances: Vec<ConditionInstance>,
    /// One report per distinct `(V, U)`, in first-occurrence order.
    pub reports: Vec<ConditionReport>,
    pub holds: bool,
}

fn full_n(d: &Diagram) -> Result<u8> {
    match d.view().kind() {
        ViewKind::Full if d.ground_n() >= 2 => Ok(d.ground_n()),
        _ => Err(Error::Precondition(format!("condition batteries need a Full(n) view with n ≥ 2, got {}", d.view()))),
    }
}

fn subsets_of(n: u8, pool: &[u8]) -> Vec<Subset> {
    let mut out: Vec<Subset> = (0..(1u32 << pool.len()))
        .map(|mask| {
            let members: Vec<u8> = pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &m)| m).collect();
            Subset::new(n, &members).expect("in ground")
        })
        .collect();
    out.sort();
    out
}

/// Index set of the battery: A1 for each `k` in `a1`, A2 for
/// `k = 1..n−2` and `U ⊆ {k+2..n}` with `|U| ≥ min_u(k)`.
pub fn battery_instances(n: u8, a1: &[u8], min_u: impl Fn(u8) -> usize) -> Result<Vec<ConditionInstance>> {
    let mut out = Vec::new();
    for &k in a1 {
        out.push(ConditionInstance { label: format!("A1(k={k})"), v: Subset::initial(n, k)?, u: Subset::empty(n) });
    }
    for k in 1..n.saturating_sub(1) {
        let pool: Vec<u8> = (k + 2..=n).collect();
        for u in subsets_of(n, &pool) {
            if u.len() < min_u(k) {
                continue;
            }
            let v = Subset::initial(n, k)?.union(&u);
            out.push(ConditionInstance { label: format!("A2(k={k},U={u})"), v, u });
        }
    }
    Ok(out)
}

fn run_battery(d: &Diagram, instances: Vec<ConditionInstance>) -> Result<ConditionBattery> {
    let mut reports: Vec<ConditionReport> = Vec::new();
    for inst in &instances {
        if let Some(r) = reports.iter_mut().find(|r| r.v == inst.v && r.u == inst.u) {
            r.labels.push(inst.label.clone());
            continue;
        }
        let mut r = condition_avu(d, &inst.v, &inst.u)?;
        r.labels.push(inst.label.clone());
        reports.push(r);
    }
    let holds = reports.iter().all(|r| r.holds);
    Ok(ConditionBattery { instances, reports, holds })
}

/// The full battery: A1 for `k = 1..n−1`, A2 for every `U ⊆ {k+2..n}`.
pub fn check_theorem_main(d: &Diagram) -> Result<ConditionBattery> {
    let n = full_n(d)?;
    let a1: Vec<u8> = (1..n).collect();
    run_battery(d, battery_instances(n, &a1, |_| 0)?)
}

/// The reduced battery: A1 for `k ∈ {n−2, n−1}` and A2 only for
/// `|U| ≥ n−k−2`.
pub fn check_maincor(d: &Diagram) -> Result<ConditionBattery> {
    let n = full_n(d)?;
    let a1: Vec<u8> = [n.saturating_sub(2), n - 1].into_iter().filter(|&k| k >= 1).collect::<Vec<_>>();
    let mut a1 = a1;
    a1.dedup();
    run_battery(d, battery_instances(n, &a1, |k| (n - k) as usize - 2)?)
}
