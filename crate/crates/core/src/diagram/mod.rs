//! Strict diagrams of presented groupoids over a subset poset.
//!
//! Only the functors along covers are stored; the functor between any two
//! comparable elements is the composite along the chain that adds the
//! missing elements in increasing order.

pub mod format;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{
    compose_functors, identity_functor, validate_functor, FunctorPresentation, GroupoidPresentation, WordSolver,
    WordVerdict,
};
use crate::poset::{CoverRelation, Diamond, PosetView, Subset};

pub use format::{load, save, DiagramFile};

/// Whether the strictness of a diagram has been established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrictnessStatus {
    Unchecked,
    Verified,
    Failed,
    /// Not verified, but the caller asked to proceed anyway.
    Forced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    ObjectMismatch,
    GeneratorVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictnessFailure {
    pub diamond: Diamond,
    pub kind: FailureKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StrictnessReport {
    pub verified: bool,
    pub failures: Vec<StrictnessFailure>,
    /// Generator comparisons left undecided within fuel.
    pub unknowns: usize,
    /// Undecided relation checks from functor validation.
    pub warnings: Vec<String>,
    pub fuel_spent: u64,
}

/// A diagram `Φ` over a poset view.
#[derive(Clone, Debug)]
pub struct Diagram {
    view: PosetView,
    groupoids: BTreeMap<Subset, Arc<GroupoidPresentation>>,
    functors: BTreeMap<CoverRelation, FunctorPresentation>,
    status: StrictnessStatus,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.view == other.view && self.groupoids == other.groupoids && self.functors == other.functors
    }
}

impl Diagram {
    /// Assembles a diagram, checking that every element has a groupoid and
    /// every cover a functor between the right groupoids. Strictness is not
    /// checked; see [`Diagram::verify`].
    pub fn new(
        view: PosetView,
        groupoids: BTreeMap<Subset, Arc<GroupoidPresentation>>,
        functors: BTreeMap<CoverRelation, FunctorPresentation>,
    ) -> Result<Self> {
        let elements = view.enumerate();
        for s in &elements {
            if !groupoids.contains_key(s) {
                return Err(Error::Diagram(format!("no groupoid for element {s}")));
            }
        }
        if let Some(s) = groupoids.keys().find(|s| !view.contains(s)) {
            return Err(Error::Diagram(format!("groupoid given for {s}, which is not in {view}")));
        }
        let covers = view.covers();
        for c in &covers {
            let f = functors.get(c).ok_or_else(|| Error::Diagram(format!("missing functor for cover {c}")))?;
            if *f.domain != *groupoids[&c.lower] || *f.codomain != *groupoids[&c.upper] {
                return Err(Error::Diagram(format!("functor for {c} has the wrong domain or codomain")));
            }
            f.check_shape().map_err(|e| Error::Diagram(format!("functor for {c}: {e}")))?;
        }
        if let Some(c) = functors.keys().find(|c| !covers.contains(c)) {
            return Err(Error::Diagram(format!("functor given for {c}, which is not a cover of {view}")));
        }
        // share one allocation per element
        let functors = functors
            .into_iter()
            .map(|(c, mut f)| {
                f.domain = groupoids[&c.lower].clone();
                f.codomain = groupoids[&c.upper].clone();
                (c, f)
            })
            .collect();
        Ok(Diagram { view, groupoids, functors, status: StrictnessStatus::Unchecked })
    }

    pub fn view(&self) -> &PosetView {
        &self.view
    }

    pub fn ground_n(&self) -> u8 {
        self.view.ground_n()
    }

    pub fn elements(&self) -> Vec<Subset> {
        self.view.enumerate()
    }

    pub fn groupoid(&self, s: &Subset) -> Result<&Arc<GroupoidPresentation>> {
        self.groupoids.get(s).ok_or_else(|| Error::Diagram(format!("{s} is not in the diagram")))
    }

    pub fn groupoids(&self) -> &BTreeMap<Subset, Arc<GroupoidPresentation>> {
        &self.groupoids
    }

    pub fn functors(&self) -> &BTreeMap<CoverRelation, FunctorPresentation> {
        &self.functors
    }

    pub fn cover_functor(&self, c: &CoverRelation) -> Result<&FunctorPresentation> {
        self.functors.get(c).ok_or_else(|| Error::Diagram(format!("{c} is not a cover of the diagram")))
    }

    pub fn status(&self) -> StrictnessStatus {
        self.status
    }

    /// Marks the diagram usable without verification.
    pub fn force(&mut self) {
        if self.status != StrictnessStatus::Verified {
            self.status = StrictnessStatus::Forced;
        }
    }

    /// Errors unless the diagram is verified strict or forced.
    pub fn ensure_usable(&self) -> Result<()> {
        match self.status {
            StrictnessStatus::Verified | StrictnessStatus::Forced => Ok(()),
            _ => Err(Error::Unverified),
        }
    }

    /// Validates every presentation and functor, then checks strictness,
    /// recording the outcome in the diagram's status.
    pub fn verify(&mut self, fuel: u64, strict_validation: bool) -> Result<StrictnessReport> {
        let mut warnings = Vec::new();
        let mut spent = 0;
        for (s, g) in &self.groupoids {
            g.validate().map_err(|e| Error::Diagram(format!("groupoid at {s}: {e}")))?;
        }
        for (c, f) in &self.functors {
            let v = validate_functor(f, fuel, strict_validation)
                .map_err(|e| Error::Diagram(format!("functor {c}: {e}")))?;
            spent += v.fuel_spent;
            warnings.extend(v.warnings.into_iter().map(|w| format!("functor {c}: {w}")));
        }
        let mut report = check_strictness(self, fuel);
        report.warnings = warnings;
        report.fuel_spent += spent;
        if strict_validation && !report.warnings.is_empty() {
            report.verified = false;
        }
        self.status = if report.verified { StrictnessStatus::Verified } else { StrictnessStatus::Failed };
        Ok(report)
    }

    /// Loads-and-verifies convenience for built diagrams that must be strict.
    pub fn verified(mut self, fuel: u64) -> Result<Self> {
        let report = self.verify(fuel, false)?;
        if !report.verified {
            return Err(Error::Diagram(format!("diagram is not strict: {:?}", report.failures)));
        }
        Ok(self)
    }
}

/// `Φ_{s,t}` for `s ⊆ t`: the composite of cover functors along the chain
/// adding the elements of `t ∖ s` in increasing order (any chain inside the
/// view if that one leaves it).
pub fn functor_between(d: &Diagram, s: &Subset, t: &Subset) -> Result<FunctorPresentation> {
    let gs = d.groupoid(s)?;
    d.groupoid(t)?;
    if !s.is_subset_of(t) {
        return Err(Error::Precondition(format!("{s} is not contained in {t}")));
    }
    if s == t {
        return Ok(identity_functor(gs.clone()));
    }
    let chain = chain_between(d, s, t)
        .ok_or_else(|| Error::Precondition(format!("no chain of covers from {s} to {t} inside {}", d.view())))?;
    let mut f = d.cover_functor(&CoverRelation { lower: chain[0], upper: chain[1] })?.clone();
    for w in chain[1..].windows(2) {
        f = compose_functors(&f, d.cover_functor(&CoverRelation { lower: w[0], upper: w[1] })?)?;
    }
    Ok(f)
}

fn chain_between(d: &Diagram, s: &Subset, t: &Subset) -> Option<Vec<Subset>> {
    let mut chain = vec![*s];
    let mut cur = *s;
    for m in s.missing_from(t) {
        cur = cur.with(m).ok()?;
        chain.push(cur);
    }
    if chain.iter().all(|x| d.view().contains(x)) {
        return Some(chain);
    }
    // depth-first over covers, smallest added element first
    fn dfs(d: &Diagram, cur: Subset, t: &Subset, path: &mut Vec<Subset>) -> bool {
        if cur == *t {
            return true;
        }
        for m in cur.missing_from(t) {
            let next = cur.with(m).expect("in ground");
            if d.view().contains(&next) {
                path.push(next);
                if dfs(d, next, t, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = vec![*s];
    dfs(d, *s, t, &mut path).then_some(path)
}

/// Compares the two composites around every diamond of the view.
pub fn check_strictness(d: &Diagram, fuel: u64) -> StrictnessReport {
    let mut report = StrictnessReport::default();
    let mut solvers: HashMap<Subset, WordSolver<'_>> = HashMap::new();
    for dm in d.view().diamonds() {
        let get = |a: Subset, b: Subset| d.functors[&CoverRelation { lower: a, upper: b }].clone();
        let p1 = compose_functors(&get(dm.bottom, dm.left), &get(dm.left, dm.top)).expect("composable");
        let p2 = compose_functors(&get(dm.bottom, dm.right), &get(dm.right, dm.top)).expect("composable");
        if p1.object_map != p2.object_map {
            let x = (0..p1.object_map.len()).find(|&x| p1.object_map[x] != p2.object_map[x]).expect("differs");
            let top = &d.groupoids[&dm.top];
            report.failures.push(StrictnessFailure {
                diamond: dm,
                kind: FailureKind::ObjectMismatch,
                detail: format!(
                    "object {} goes to {} via {} but to {} via {}",
                    p1.domain.objects[x],
                    top.objects[p1.object_map[x]],
                    dm.left,
                    top.objects[p2.object_map[x]],
                    dm.right
                ),
            });
            continue;
        }
        let solver = solvers.entry(dm.top).or_insert_with(|| WordSolver::new(&d.groupoids[&dm.top]));
        for (i, (w1, w2)) in p1.generator_map.iter().zip(&p2.generator_map).enumerate() {
            if w1 == w2 {
                continue;
            }
            let g = solver.presentation();
            let verdict = solver.word_equal(w1, w2, fuel).expect("parallel images");
            let what = match verdict {
                WordVerdict::Equal => continue,
                WordVerdict::Distinct { .. } => "distinct",
                WordVerdict::Unknown { fuel_spent } => {
                    report.unknowns += 1;
                    report.fuel_spent += fuel_spent;
                    "undecided"
                }
            };
            report.failures.push(StrictnessFailure {
                diamond: dm,
                kind: FailureKind::GeneratorVerdict,
                detail: format!(
                    "generator {} maps to {} via {} and {} via {} ({what})",
                    p1.domain.generators[i].name,
                    g.format_word(w1),
                    dm.left,
                    g.format_word(w2),
                    dm.right
                ),
            });
        }
    }
    report.verified = report.failures.is_empty();
    report
}

/// The diagram restricted to a subview. Cover functors of the subview are
/// composites in the original diagram.
pub fn restrict(d: &Diagram, sub: &PosetView) -> Result<Diagram> {
    if !sub.is_subview_of(d.view()) {
        return Err(Error::Precondition(format!("{sub} is not contained in {}", d.view())));
    }
    let groupoids = sub.enumerate().into_iter().map(|s| (s, d.groupoids[&s].clone())).collect();
    let functors = sub
        .covers()
        .into_iter()
        .map(|c| Ok((c, functor_between(d, &c.lower, &c.upper)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let mut out = Diagram::new(sub.clone(), groupoids, functors)?;
    out.status = d.status;
    Ok(out)
}
