//! JSON file format for diagrams.
//!
//! Maps are ordered, so [`save`] is canonical: `save(load(t))` is the
//! canonical rendering of `t` and `load(save(d)) == d`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Diagram;
use crate::error::{Error, Result};
use crate::groupoid::{FunctorPresentation, GroupoidPresentation, Word};
use crate::poset::{CoverRelation, PosetView, Subset, ViewKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub ground_n: u8,
    pub view: ViewSpec,
    pub groupoids: BTreeMap<String, GroupoidSpec>,
    #[serde(default)]
    pub functors: BTreeMap<String, FunctorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewSpec {
    Full,
    Rel {
        #[serde(rename = "V")]
        v: String,
        #[serde(rename = "U")]
        u: String,
    },
    Codim(u8),
    Explicit(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidSpec {
    pub objects: Vec<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub lhs: Vec<String>,
    pub lhs_start: String,
    pub rhs: Vec<String>,
    pub rhs_start: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub generators: BTreeMap<String, WordSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordSpec {
    pub start: String,
    pub letters: Vec<String>,
}

fn groupoid_from_spec(key: &str, spec: &GroupoidSpec) -> Result<GroupoidPresentation> {
    let ctx = |e: Error| Error::Parse(format!("groupoids.\"{key}\": {e}"));
    let mut g = GroupoidPresentation::discrete(&spec.objects);
    for gen in &spec.generators {
        let find = |name: &str| {
            g.object_index(name)
                .ok_or_else(|| ctx(Error::InvalidPresentation(format!("generator `{}` uses unknown object `{name}`", gen.id))))
        };
        let (s, t) = (find(&gen.src)?, find(&gen.dst)?);
        g.add_generator(gen.id.clone(), s, t);
    }
    for (i, r) in spec.relations.iter().enumerate() {
        let rctx = |e: Error| Error::Parse(format!("groupoids.\"{key}\".relations[{i}]: {e}"));
        let lhs = g.word_from_names(&r.lhs_start, &r.lhs).map_err(rctx)?;
        let rhs = g.word_from_names(&r.rhs_start, &r.rhs).map_err(rctx)?;
        g.add_relation(lhs, rhs).map_err(rctx)?;
    }
    g.validate().map_err(ctx)?;
    Ok(g)
}

fn functor_from_spec(
    key: &str,
    spec: &FunctorSpec,
    dom: &Arc<GroupoidPresentation>,
    cod: &Arc<GroupoidPresentation>,
) -> Result<FunctorPresentation> {
    let ctx = |e: Error| Error::Parse(format!("functors.\"{key}\": {e}"));
    let mut object_map = vec![usize::MAX; dom.objects.len()];
    for (x, y) in &spec.objects {
        let xi = dom.object_index(x).ok_or_else(|| ctx(Error::InvalidFunctor(format!("unknown source object `{x}`"))))?;
        let yi = cod.object_index(y).ok_or_else(|| ctx(Error::InvalidFunctor(format!("unknown target object `{y}`"))))?;
        object_map[xi] = yi;
    }
    if let Some(i) = object_map.iter().position(|&o| o == usize::MAX) {
        return Err(ctx(Error::InvalidFunctor(format!("object `{}` has no image", dom.objects[i]))));
    }
    let mut generator_map = vec![None; dom.generators.len()];
    for (e, w) in &spec.generators {
        let ei = dom
            .generator_index(e)
            .ok_or_else(|| ctx(Error::InvalidFunctor(format!("unknown source generator `{e}`"))))?;
        generator_map[ei] = Some(cod.word_from_names(&w.start, &w.letters).map_err(ctx)?);
    }
    let generator_map = generator_map
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| ctx(Error::InvalidFunctor(format!("generator `{}` has no image", dom.generators[i].name)))))
        .collect::<Result<Vec<Word>>>()?;
    let f = FunctorPresentation::new(dom.clone(), cod.clone(), object_map, generator_map);
    f.check_shape().map_err(ctx)?;
    Ok(f)
}

fn parse_cover(n: u8, key: &str) -> Result<CoverRelation> {
    let (a, b) = key
        .split_once('<')
        .ok_or_else(|| Error::Parse(format!("functors: key `{key}` must look like {{1}}<{{1,2}}")))?;
    Ok(CoverRelation { lower: Subset::parse(n, a.trim())?, upper: Subset::parse(n, b.trim())? })
}

impl DiagramFile {
    pub fn to_diagram(&self) -> Result<Diagram> {
        let n = self.ground_n;
        let view = match &self.view {
            ViewSpec::Full => PosetView::full(n)?,
            ViewSpec::Rel { v, u } => PosetView::rel(Subset::parse(n, v)?, Subset::parse(n, u)?)?,
            ViewSpec::Codim(k) => PosetView::codim(n, *k)?,
            ViewSpec::Explicit(list) => {
                PosetView::explicit(n, list.iter().map(|s| Subset::parse(n, s)).collect::<Result<_>>()?)?
            }
        };
        let mut groupoids = BTreeMap::new();
        for (key, spec) in &self.groupoids {
            let s = Subset::parse(n, key).map_err(|e| Error::Parse(format!("groupoids: {e}")))?;
            groupoids.insert(s, Arc::new(groupoid_from_spec(key, spec)?));
        }
        for s in view.enumerate() {
            if !groupoids.contains_key(&s) {
                return Err(Error::Parse(format!("groupoids: missing entry for element \"{s}\"")));
            }
        }
        let mut functors = BTreeMap::new();
        for (key, spec) in &self.functors {
            let c = parse_cover(n, key)?;
            let dom = groupoids
                .get(&c.lower)
                .ok_or_else(|| Error::Parse(format!("functors.\"{key}\": no groupoid for {}", c.lower)))?;
            let cod = groupoids
                .get(&c.upper)
                .ok_or_else(|| Error::Parse(format!("functors.\"{key}\": no groupoid for {}", c.upper)))?;
            functors.insert(c, functor_from_spec(key, spec, dom, cod)?);
        }
        for c in view.covers() {
            if !functors.contains_key(&c) {
                return Err(Error::Parse(format!("functors: missing functor for cover \"{c}\"")));
            }
        }
        Diagram::new(view, groupoids, functors).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let view = match d.view().kind() {
            ViewKind::Full => ViewSpec::Full,
            ViewKind::Rel { v, u } => ViewSpec::Rel { v: v.to_string(), u: u.to_string() },
            ViewKind::Codim { k } => ViewSpec::Codim(*k),
            ViewKind::Explicit(list) => ViewSpec::Explicit(list.iter().map(|s| s.to_string()).collect()),
        };
        let groupoids = d.groupoids().iter().map(|(s, g)| (s.to_string(), groupoid_spec(g))).collect();
        let functors = d
            .functors()
            .iter()
            .map(|(c, f)| {
                let objects = f
                    .object_map
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| (f.domain.objects[x].clone(), f.codomain.objects[y].clone()))
                    .collect();
                let generators = f
                    .generator_map
                    .iter()
                    .enumerate()
                    .map(|(i, w)| (f.domain.generators[i].name.clone(), word_spec(&f.codomain, w)))
                    .collect();
                (c.to_string(), FunctorSpec { objects, generators })
            })
            .collect();
        DiagramFile { ground_n: d.ground_n(), view, groupoids, functors }
    }
}

fn word_spec(g: &GroupoidPresentation, w: &Word) -> WordSpec {
    WordSpec { start: g.objects[w.start].clone(), letters: w.letters.iter().map(|&l| g.letter_name(l)).collect() }
}

pub fn groupoid_spec(g: &GroupoidPresentation) -> GroupoidSpec {
    GroupoidSpec {
        objects: g.objects.clone(),
        generators: g
            .generators
            .iter()
            .map(|e| GeneratorSpec { id: e.name.clone(), src: g.objects[e.src].clone(), dst: g.objects[e.dst].clone() })
            .collect(),
        relations: g
            .relations
            .iter()
            .map(|r| {
                let (l, rr) = (word_spec(g, &r.lhs), word_spec(g, &r.rhs));
                RelationSpec { lhs: l.letters, lhs_start: l.start, rhs: rr.letters, rhs_start: rr.start }
            })
            .collect(),
    }
}

/// Parses a diagram file. Syntax errors carry line and column; semantic
/// errors name the offending field.
pub fn load(text: &str) -> Result<Diagram> {
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_diagram()
}

/// Canonical pretty-printed JSON.
pub fn save(d: &Diagram) -> String {
    serde_json::to_string_pretty(&DiagramFile::from_diagram(d)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = r#"{
      "ground_n": 2, "view": "full",
      "groupoids": {
        "{}": {"objects": ["c", "d"]},
        "{1}": {"objects": ["a1", "b1"], "generators": [{"id": "e1", "src": "a1", "dst": "b1"}]},
        "{2}": {"objects": ["a2", "b2"], "generators": [{"id": "e2", "src": "a2", "dst": "b2"}]}
      },
      "functors": {
        "{}<{1}": {"objects": {"c": "a1", "d": "b1"}},
        "{}<{2}": {"objects": {"c": "a2", "d": "b2"}}
      }
    }"#;

    #[test]
    fn round_trip() {
        let d = load(TEXT).unwrap();
        assert_eq!(d.elements().len(), 3);
        let again = load(&save(&d)).unwrap();
        assert_eq!(again, d);
        assert_eq!(save(&again), save(&d));
    }

    #[test]
    fn missing_cover_is_named() {
        let t = TEXT.replace(r#""{}<{2}": {"objects": {"c": "a2", "d": "b2"}}"#, "").replace("\"b1\"}},", "\"b1\"}}");
        let err = load(&t).unwrap_err().to_string();
        assert!(err.contains("{}<{2}"), "{err}");
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = load("{\n  \"ground_n\": 2,\n  \"view\": \"full\" oops").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn view_spellings() {
        for (v, expect) in [
            (r#""full""#, ViewSpec::Full),
            (r#"{"codim": 1}"#, ViewSpec::Codim(1)),
            (r#"{"rel": {"V": "{1,2}", "U": "{}"}}"#, ViewSpec::Rel { v: "{1,2}".into(), u: "{}".into() }),
        ] {
            let parsed: ViewSpec = serde_json::from_str(v).unwrap();
            assert_eq!(parsed, expect);
        }
    }
}
