//! Descent data over `𝔟(n)` against the 2-pullback `P` of
//! `Hom(Φ(N), H) → 2lim_{𝔟(n−1)} ← 2lim_{𝔟′(n−1)}`, where `N = {1..n−1}`.
//!
//! An object of `P` is `(Y, B, ζ)`: a functor `Y: Φ(N) → H`, a descent
//! datum `B` over `𝔟′(n−1)`, and for `U ∈ 𝔟(n−1)` arrows
//! `ζ_U(x): B_{U₊}(Φ_{U,U₊}x) → Y(Φ_{U,N}x)` natural in `x` with
//! `ζ_U(x) = ζ_V(Φ_{U,V}x) ∘ B_{U₊,V₊}(Φ_{U,U₊}x)` for `U ⋖ V`.

use std::collections::HashMap;

use serde::Serialize;

use super::descent::{DescentMorphism, DescentObject, DescentShape};
use super::transition_between;
use crate::diagram::{functor_between, restrict, Diagram};
use crate::error::{Error, Result};
use crate::groupoid::finite::{groupoid_stats, transport_functor};
use crate::groupoid::{
    enumerate_functors, natural_transformations, FiniteFunctor, FiniteGroupoid, FunctorPresentation,
    GroupoidPresentation, Morphism,
};
use crate::poset::{partition_b, CoverRelation, Subset, ViewKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PullbackObject {
    pub y: FiniteFunctor,
    pub b: DescentObject,
    /// Indexed by the elements of `𝔟(n−1)`.
    pub zeta: Vec<Vec<Morphism>>,
}

struct LowerElement {
    plus: usize,
    to_plus: FunctorPresentation,
    to_top: FunctorPresentation,
    /// `(lower cover index, upper cover index of U₊ ⋖ V₊)`.
    covers: Vec<(usize, usize)>,
}

/// The three shapes involved and the maps between their indices.
pub struct PullbackShape {
    pub full: DescentShape,
    pub lower: DescentShape,
    pub upper: DescentShape,
    pub top: Subset,
    top_groupoid: std::sync::Arc<GroupoidPresentation>,
    lower_info: Vec<LowerElement>,
    d: Diagram,
}

impl PullbackShape {
    pub fn new(d: &Diagram) -> Result<Self> {
        let n = d.ground_n();
        if !matches!(d.view().kind(), ViewKind::Full) || n < 2 {
            return Err(Error::Precondition("the pullback comparison needs a Full(n) view with n ≥ 2".into()));
        }
        let (lv, uv, top) = partition_b(n)?;
        let full = DescentShape::new(d)?;
        let lower = DescentShape::new(&restrict(d, &lv)?)?;
        let upper = DescentShape::new(&restrict(d, &uv)?)?;
        let mut lower_info = Vec::new();
        for (i, u) in lower.elements.iter().enumerate() {
            let up = u.with(n)?;
            let mut covers = Vec::new();
            for &c in lower.uppers(i) {
                let v = lower.covers[c].upper;
                let uc = upper
                    .cover_index(&CoverRelation { lower: up, upper: v.with(n)? })
                    .ok_or_else(|| Error::Precondition("missing cover in 𝔟′".into()))?;
                covers.push((c, uc));
            }
            lower_info.push(LowerElement {
                plus: upper.element_index(&up).expect("U₊ lies in 𝔟′"),
                to_plus: d.cover_functor(&CoverRelation { lower: *u, upper: up })?.clone(),
                to_top: functor_between(d, u, &top)?,
                covers,
            });
        }
        Ok(PullbackShape { full, lower, upper, top, top_groupoid: d.groupoid(&top)?.clone(), lower_info, d: d.clone() })
    }

    fn zeta_ok(&self, h: &FiniteGroupoid, p: &PullbackObject, i: usize, z: &[Morphism], zeta: &[Vec<Morphism>]) -> bool {
        let info = &self.lower_info[i];
        let g = &self.lower.groupoids[i];
        let bu = &p.b.functors[info.plus];
        let ends = (0..g.objects.len()).all(|x| {
            z[x].src == bu.objects[info.to_plus.object_map[x]] && z[x].dst == p.y.objects[info.to_top.object_map[x]]
        });
        let natural = g.generators.iter().enumerate().all(|(e, gen)| {
            h.then(z[gen.src], p.y.eval_word(h, &info.to_top.generator_map[e]))
                == h.then(bu.eval_word(h, &info.to_plus.generator_map[e]), z[gen.dst])
        });
        let squares = info.covers.iter().all(|&(c, uc)| {
            let (_, v) = self.lower.cover_ends(c);
            let phi = &self.lower.cover_functors[c];
            (0..g.objects.len()).all(|x| {
                z[x] == h.then(p.b.transitions[uc][info.to_plus.object_map[x]], zeta[v][phi.object_map[x]])
            })
        });
        ends && natural && squares
    }

    pub fn validate(&self, h: &FiniteGroupoid, p: &PullbackObject) -> bool {
        p.y.is_valid(&self.top_groupoid, h)
            && self.upper.validate(h, &p.b).is_ok()
            && p.zeta.len() == self.lower.elements.len()
            && (0..self.lower.elements.len()).all(|i| {
                p.zeta[i].len() == self.lower.groupoids[i].objects.len() && self.zeta_ok(h, p, i, &p.zeta[i], &p.zeta)
            })
    }

    /// Every object of `P`.
    pub fn enumerate(&self, h: &FiniteGroupoid, fuel: u64) -> Result<Vec<PullbackObject>> {
        let ys = enumerate_functors(&self.top_groupoid, h, fuel)?;
        let bs = self.upper.enumerate(h, fuel)?;
        let mut out = Vec::new();
        let mut spent = 0u64;
        for y in &ys {
            for b in &bs {
                let mut p = PullbackObject {
                    y: y.clone(),
                    b: b.clone(),
                    zeta: vec![Vec::new(); self.lower.elements.len()],
                };
                let order: Vec<usize> = (0..self.lower.elements.len()).rev().collect();
                self.zeta_rec(h, fuel, &mut spent, &order, 0, &mut p, &mut out)?;
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn zeta_rec(
        &self,
        h: &FiniteGroupoid,
        fuel: u64,
        spent: &mut u64,
        order: &[usize],
        pos: usize,
        p: &mut PullbackObject,
        out: &mut Vec<PullbackObject>,
    ) -> Result<()> {
        *spent += 1;
        if *spent > fuel {
            return Err(Error::FuelExceeded(fuel));
        }
        if pos == order.len() {
            out.push(p.clone());
            return Ok(());
        }
        let i = order[pos];
        let info = &self.lower_info[i];
        let candidates = match info.covers.first() {
            None => {
                let src = p.b.functors[info.plus].precompose(h, &info.to_plus);
                let dst = p.y.precompose(h, &info.to_top);
                natural_transformations(&self.lower.groupoids[i], h, &src, &dst)
            }
            Some(&(c, uc)) => {
                let (_, v) = self.lower.cover_ends(c);
                let phi = &self.lower.cover_functors[c];
                vec![(0..self.lower.groupoids[i].objects.len())
                    .map(|x| h.then(p.b.transitions[uc][info.to_plus.object_map[x]], p.zeta[v][phi.object_map[x]]))
                    .collect()]
            }
        };
        for z in candidates {
            if self.zeta_ok(h, p, i, &z, &p.zeta) {
                p.zeta[i] = z;
                self.zeta_rec(h, fuel, spent, order, pos + 1, p, out)?;
                p.zeta[i] = Vec::new();
            }
        }
        Ok(())
    }

    /// Neighbours under elementary isomorphisms at one slot of `Y` or `B`.
    pub fn elementary_moves(&self, h: &FiniteGroupoid, p: &PullbackObject) -> Vec<PullbackObject> {
        let mut out = Vec::new();
        for o in 0..self.top_groupoid.objects.len() {
            for m in h.out_of(p.y.objects[o]) {
                if m == h.identity(m.src) {
                    continue;
                }
                let mut q = p.clone();
                q.y = transport_functor(&self.top_groupoid, h, &p.y, o, m);
                for (i, info) in self.lower_info.iter().enumerate() {
                    for (x, &img) in info.to_top.object_map.iter().enumerate() {
                        if img == o {
                            q.zeta[i][x] = h.then(p.zeta[i][x], m);
                        }
                    }
                }
                out.push(q);
            }
        }
        for (j, g) in self.upper.groupoids.iter().enumerate() {
            for z in 0..g.objects.len() {
                for m in h.out_of(p.b.functors[j].objects[z]) {
                    if m == h.identity(m.src) {
                        continue;
                    }
                    let mut q = p.clone();
                    q.b = self.upper.transport(h, &p.b, j, z, m);
                    for (i, info) in self.lower_info.iter().enumerate() {
                        if info.plus != j {
                            continue;
                        }
                        for (x, &img) in info.to_plus.object_map.iter().enumerate() {
                            if img == z {
                                q.zeta[i][x] = h.then(h.inverse(m), p.zeta[i][x]);
                            }
                        }
                    }
                    out.push(q);
                }
            }
        }
        out
    }

    /// Number of automorphisms of `p`: pairs of automorphisms of `Y` and
    /// `B` compatible with `ζ`.
    pub fn automorphism_count(&self, h: &FiniteGroupoid, p: &PullbackObject) -> usize {
        let gys = natural_transformations(&self.top_groupoid, h, &p.y, &p.y);
        let fbs = self.upper.morphisms(h, &p.b, &p.b);
        let mut count = 0;
        for gy in &gys {
            for fb in &fbs {
                let ok = self.lower_info.iter().enumerate().all(|(i, info)| {
                    (0..self.lower.groupoids[i].objects.len()).all(|x| {
                        h.then(p.zeta[i][x], gy[info.to_top.object_map[x]])
                            == h.then(fb.components[info.plus][info.to_plus.object_map[x]], p.zeta[i][x])
                    })
                });
                if ok {
                    count += 1;
                }
            }
        }
        count
    }

    /// `Γ(D) = (X_N, D|𝔟′, ζ)` with `ζ_U(x) = A_{U,N}(x) ∘ A_{U,U₊}(x)⁻¹`.
    pub fn gamma(&self, h: &FiniteGroupoid, dobj: &DescentObject) -> Result<PullbackObject> {
        let f = &self.full;
        let top_i = f.element_index(&self.top).expect("top in view");
        let functors =
            self.upper.elements.iter().map(|s| dobj.functors[f.element_index(s).expect("in view")].clone()).collect();
        let transitions = self
            .upper
            .covers
            .iter()
            .map(|c| dobj.transitions[f.cover_index(c).expect("in view")].clone())
            .collect();
        let mut zeta = Vec::new();
        for (i, u) in self.lower.elements.iter().enumerate() {
            let up = self.upper.elements[self.lower_info[i].plus];
            let mut z = Vec::new();
            for x in 0..self.lower.groupoids[i].objects.len() {
                let to_plus = transition_between(f, h, &self.d, dobj, u, &up, x)?;
                let to_top = transition_between(f, h, &self.d, dobj, u, &self.top, x)?;
                z.push(h.then(h.inverse(to_plus), to_top));
            }
            zeta.push(z);
        }
        Ok(PullbackObject {
            y: dobj.functors[top_i].clone(),
            b: DescentObject { functors, transitions },
            zeta,
        })
    }

    /// `Δ(Y, B, ζ)`: `Y ∘ Φ_{S,N}` with identity transitions on
    /// `𝔟(n−1) ∪ {N}`, `B` on `𝔟′(n−1)`, and `ζ_U⁻¹` on `U ⋖ U₊`.
    pub fn delta(&self, h: &FiniteGroupoid, p: &PullbackObject) -> DescentObject {
        let f = &self.full;
        let functors: Vec<FiniteFunctor> = f
            .elements
            .iter()
            .map(|s| {
                if *s == self.top {
                    p.y.clone()
                } else if let Some(i) = self.lower.element_index(s) {
                    p.y.precompose(h, &self.lower_info[i].to_top)
                } else {
                    p.b.functors[self.upper.element_index(s).expect("in 𝔟′")].clone()
                }
            })
            .collect();
        let transitions = f
            .covers
            .iter()
            .map(|c| {
                if let Some(uc) = self.upper.cover_index(c) {
                    p.b.transitions[uc].clone()
                } else if !c.upper.contains(self.d.ground_n()) {
                    functors[f.element_index(&c.lower).expect("in view")].objects.iter().map(|&o| h.identity(o)).collect()
                } else {
                    let i = self.lower.element_index(&c.lower).expect("lower in 𝔟(n−1)");
                    p.zeta[i].iter().map(|&m| h.inverse(m)).collect()
                }
            })
            .collect();
        DescentObject { functors, transitions }
    }

    /// `ξ: ΔΓ(D) → D`, which is `A_{S,N}⁻¹` on `𝔟(n−1)` and the identity
    /// elsewhere.
    pub fn xi(&self, h: &FiniteGroupoid, dobj: &DescentObject) -> Result<DescentMorphism> {
        let f = &self.full;
        let mut components = Vec::new();
        for (i, s) in f.elements.iter().enumerate() {
            let comp = if self.lower.element_index(s).is_some() {
                (0..f.groupoids[i].objects.len())
                    .map(|x| Ok(h.inverse(transition_between(f, h, &self.d, dobj, s, &self.top, x)?)))
                    .collect::<Result<Vec<_>>>()?
            } else {
                dobj.functors[i].objects.iter().map(|&o| h.identity(o)).collect()
            };
            components.push(comp);
        }
        Ok(DescentMorphism { components })
    }
}

/// Outcome of comparing the descent groupoid with `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackReport {
    pub descent_objects: usize,
    pub descent_classes: usize,
    pub pullback_objects: usize,
    pub pullback_classes: usize,
    /// `Γ(D)` is an object of `P` for every `D`.
    pub gamma_valid: bool,
    /// `Δ(P)` is a descent datum for every `P`.
    pub delta_valid: bool,
    /// `Γ(Δ(P)) = P` on the nose.
    pub gamma_delta_identity: bool,
    /// `ξ` is a descent morphism `ΔΓ(D) → D` for every `D`.
    pub xi_valid: bool,
    /// `Γ` induces a bijection of isomorphism classes.
    pub class_bijection: bool,
    /// `|Aut D| = |Aut Γ(D)|` on class representatives.
    pub automorphisms_agree: bool,
    pub holds: bool,
}

/// Enumerates both sides and checks that `Γ` and `Δ` are inverse
/// equivalences.
pub fn descent_pullback_gamma_delta(d: &Diagram, h: &FiniteGroupoid, fuel: u64) -> Result<PullbackReport> {
    let ps = PullbackShape::new(d)?;
    let ds = ps.full.enumerate(h, fuel)?;
    let (dstats, dclass) =
        groupoid_stats(&ds, |x| ps.full.elementary_moves(h, x), |x| ps.full.morphisms(h, x, x).len());
    let pobjs = ps.enumerate(h, fuel)?;
    let (pstats, pclass) = groupoid_stats(&pobjs, |p| ps.elementary_moves(h, p), |p| ps.automorphism_count(h, p));
    let pindex: HashMap<&PullbackObject, usize> = pobjs.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut gamma_valid = true;
    let mut xi_valid = true;
    let mut class_map: HashMap<usize, usize> = HashMap::new();
    let mut consistent = true;
    let mut automorphisms_agree = true;
    for (i, dobj) in ds.iter().enumerate() {
        let g = ps.gamma(h, dobj)?;
        match pindex.get(&g) {
            Some(&j) if ps.validate(h, &g) => {
                let prev = class_map.insert(dclass[i], pclass[j]);
                if prev.is_some_and(|c| c != pclass[j]) {
                    consistent = false;
                }
                if prev.is_none() && ps.full.morphisms(h, dobj, dobj).len() != ps.automorphism_count(h, &g) {
                    automorphisms_agree = false;
                }
            }
            _ => gamma_valid = false,
        }
        let back = ps.delta(h, &g);
        let xi = ps.xi(h, dobj)?;
        if !ps.full.is_morphism(h, &back, dobj, &xi) {
            xi_valid = false;
        }
    }
    let mut delta_valid = true;
    let mut gamma_delta_identity = true;
    for p in &pobjs {
        let dd = ps.delta(h, p);
        if ps.full.validate(h, &dd).is_err() {
            delta_valid = false;
            continue;
        }
        if ps.gamma(h, &dd)? != *p {
            gamma_delta_identity = false;
        }
    }
    let mut images: Vec<usize> = class_map.values().copied().collect();
    images.sort_unstable();
    images.dedup();
    let class_bijection = consistent
        && gamma_valid
        && class_map.len() == dstats.iso_classes
        && images.len() == class_map.len()
        && images.len() == pstats.iso_classes;
    let holds = gamma_valid && delta_valid && gamma_delta_identity && xi_valid && class_bijection && automorphisms_agree;
    Ok(PullbackReport {
        descent_objects: dstats.objects,
        descent_classes: dstats.iso_classes,
        pullback_objects: pstats.objects,
        pullback_classes: pstats.iso_classes,
        gamma_valid,
        delta_valid,
        gamma_delta_identity,
        xi_valid,
        class_bijection,
        automorphisms_agree,
        holds,
    })
}
