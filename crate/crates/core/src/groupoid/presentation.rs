use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Index of an object inside its presentation.
pub type ObjId = usize;
/// Index of a generator inside its presentation.
pub type GenId = usize;

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub gen: GenId,
    pub inverse: bool,
}

impl Letter {
    pub fn fwd(gen: GenId) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn inv(gen: GenId) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn flipped(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// Freely reduces a letter sequence (no adjacent `g g⁻¹` or `g⁻¹ g`).
pub fn reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&last) if last.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// Reverses and flips a letter sequence.
pub fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.flipped()).collect()
}

/// A path of generators and formal inverses, read left to right.
///
/// The empty word is the identity at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub start: ObjId,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn identity(start: ObjId) -> Self {
        Word { start, letters: Vec::new() }
    }

    pub fn new(start: ObjId, letters: Vec<Letter>) -> Self {
        Word { start, letters }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Cancels adjacent inverse pairs; endpoints are unchanged.
pub fn free_reduce(w: &Word) -> Word {
    Word { start: w.start, letters: reduce_letters(&w.letters) }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
}

/// An equation between two parallel words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

/// A groupoid given by objects, generating arrows and relations.
///
/// Morphisms are words in the generators and their formal inverses modulo
/// free reduction and the congruence generated by the relations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupoidPresentation {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl GroupoidPresentation {
    pub fn new() -> Self {
        Self::default()
    }

    /// A discrete groupoid on the given object names.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        GroupoidPresentation {
            objects: names.iter().map(|s| s.as_ref().to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> ObjId {
        self.objects.push(name.into());
        self.objects.len() - 1
    }

    pub fn add_generator(&mut self, name: impl Into<String>, src: ObjId, dst: ObjId) -> GenId {
        self.generators.push(Generator { name: name.into(), src, dst });
        self.generators.len() - 1
    }

    /// Adds `lhs = rhs` after checking both words are valid and parallel.
    pub fn add_relation(&mut self, lhs: Word, rhs: Word) -> Result<()> {
        self.check_parallel(&lhs, &rhs)?;
        self.relations.push(Relation { lhs, rhs });
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn object_index(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn generator_index(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Source and target of a letter.
    pub fn letter_ends(&self, l: Letter) -> Result<(ObjId, ObjId)> {
        let g = self
            .generators
            .get(l.gen)
            .ok_or_else(|| Error::InvalidWord(format!("unknown generator index {}", l.gen)))?;
        Ok(if l.inverse { (g.dst, g.src) } else { (g.src, g.dst) })
    }

    /// The end object of a word, checking that it is chain-composable.
    pub fn end(&self, w: &Word) -> Result<ObjId> {
        if w.start >= self.objects.len() {
            return Err(Error::InvalidWord(format!("start object index {} out of range", w.start)));
        }
        let mut cur = w.start;
        for (i, &l) in w.letters.iter().enumerate() {
            let (s, t) = self.letter_ends(l)?;
            if s != cur {
                return Err(Error::InvalidWord(format!(
                    "letter {i} ({}) starts at {} but the path is at {}",
                    self.letter_name(l),
                    self.objects[s],
                    self.objects[cur]
                )));
            }
            cur = t;
        }
        Ok(cur)
    }

    /// Whether `w1` and `w2` are valid with equal endpoints.
    pub fn check_parallel(&self, w1: &Word, w2: &Word) -> Result<()> {
        let e1 = self.end(w1)?;
        let e2 = self.end(w2)?;
        if w1.start != w2.start || e1 != e2 {
            return Err(Error::NotParallel(format!(
                "{} and {}",
                self.format_word(w1),
                self.format_word(w2)
            )));
        }
        Ok(())
    }

    /// `w1` followed by `w2`, freely reduced.
    pub fn compose(&self, w1: &Word, w2: &Word) -> Result<Word> {
        let e = self.end(w1)?;
        if e != w2.start {
            return Err(Error::InvalidWord(format!(
                "cannot compose: {} ends at {} but {} starts at {}",
                self.format_word(w1),
                self.objects[e],
                self.format_word(w2),
                self.objects.get(w2.start).map(String::as_str).unwrap_or("?")
            )));
        }
        self.end(w2)?;
        let mut letters = w1.letters.clone();
        letters.extend_from_slice(&w2.letters);
        Ok(Word { start: w1.start, letters: reduce_letters(&letters) })
    }

    /// The formal inverse path.
    pub fn invert(&self, w: &Word) -> Result<Word> {
        let e = self.end(w)?;
        Ok(Word { start: e, letters: invert_letters(&w.letters) })
    }

    /// Checks the presentation invariants: unique names, endpoints in range,
    /// every relation a pair of valid parallel words.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for o in &self.objects {
            if !seen.insert(o.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate object `{o}`")));
            }
        }
        let mut seen = HashSet::new();
        for g in &self.generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate generator `{}`", g.name)));
            }
            if g.src >= self.objects.len() || g.dst >= self.objects.len() {
                return Err(Error::InvalidPresentation(format!(
                    "generator `{}` has a dangling endpoint",
                    g.name
                )));
            }
        }
        for (i, r) in self.relations.iter().enumerate() {
            self.check_parallel(&r.lhs, &r.rhs)
                .map_err(|e| Error::InvalidPresentation(format!("relation {i}: {e}")))?;
        }
        Ok(())
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let base = self
            .generators
            .get(l.gen)
            .map(|g| g.name.clone())
            .unwrap_or_else(|| format!("#{}", l.gen));
        if l.inverse {
            format!("{base}^-1")
        } else {
            base
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.letters.is_empty() {
            let o = self.objects.get(w.start).map(String::as_str).unwrap_or("?");
            return format!("id[{o}]");
        }
        w.letters.iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    /// Parses signed generator names (`e`, `e^-1`) into a word from `start`.
    pub fn word_from_names<S: AsRef<str>>(&self, start: &str, letters: &[S]) -> Result<Word> {
        let start = self
            .object_index(start)
            .ok_or_else(|| Error::InvalidWord(format!("unknown object `{start}`")))?;
        let mut out = Vec::with_capacity(letters.len());
        for l in letters {
            out.push(self.parse_letter(l.as_ref())?);
        }
        let w = Word { start, letters: out };
        self.end(&w)?;
        Ok(w)
    }

    pub fn parse_letter(&self, s: &str) -> Result<Letter> {
        let (name, inverse) = match s.strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (s, false),
        };
        let gen = self
            .generator_index(name)
            .ok_or_else(|| Error::InvalidWord(format!("unknown generator `{name}`")))?;
        Ok(Letter { gen, inverse })
    }
}

impl fmt::Display for GroupoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objects: {}", self.objects.join(", "))?;
        for g in &self.generators {
            writeln!(f, "  {}: {} -> {}", g.name, self.objects[g.src], self.objects[g.dst])?;
        }
        for r in &self.relations {
            writeln!(f, "  {} = {}", self.format_word(&r.lhs), self.format_word(&r.rhs))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> GroupoidPresentation {
        let mut g = GroupoidPresentation::discrete(&["a", "b"]);
        g.add_generator("e", 0, 1);
        g
    }

    #[test]
    fn free_reduce_examples() {
        let w = Word::new(0, vec![Letter::fwd(0), Letter::inv(0)]);
        assert_eq!(free_reduce(&w), Word::identity(0));
        assert_eq!(free_reduce(&Word::identity(3)), Word::identity(3));
        let w = Word::new(0, vec![Letter::fwd(1), Letter::fwd(2), Letter::inv(2)]);
        assert_eq!(free_reduce(&w).letters, vec![Letter::fwd(1)]);
    }

    #[test]
    fn compose_and_invert() {
        let g = interval();
        let w = g.word_from_names("a", &["e"]).unwrap();
        assert_eq!(g.compose(&Word::identity(0), &w).unwrap(), w);
        assert_eq!(g.invert(&g.invert(&w).unwrap()).unwrap(), w);
        assert_eq!(g.compose(&w, &g.invert(&w).unwrap()).unwrap(), Word::identity(0));
        assert!(g.compose(&w, &w).is_err());
    }

    #[test]
    fn invalid_words_rejected() {
        let g = interval();
        assert!(g.word_from_names("b", &["e"]).is_err());
        assert!(g.word_from_names("a", &["f"]).is_err());
        let mut h = interval();
        let bad = h.add_relation(Word::identity(0), g.word_from_names("a", &["e"]).unwrap());
        assert!(matches!(bad, Err(Error::NotParallel(_))));
    }

    #[test]
    fn validate_catches_dangling_generator() {
        let mut g = interval();
        g.add_generator("f", 0, 7);
        assert!(g.validate().is_err());
        let mut g = interval();
        g.add_generator("e", 0, 1);
        assert!(g.validate().is_err());
    }
}
