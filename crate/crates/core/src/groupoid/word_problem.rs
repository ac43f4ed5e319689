//! Three-valued word problem for presented groupoids.
//!
//! `Equal` is returned only when a bounded rewriting search (free reduction
//! plus insertion and replacement of relator pieces) reaches the identity.
//! `Distinct` is returned only with a homomorphism into a cyclic group that
//! separates the two words; the witness is re-checked before it is returned.
//! Everything else is `Unknown`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use super::forest::SpanningForest;
use super::group::{exponent_sums, vertex_group_data, VertexGroup};
use super::presentation::{invert_letters, reduce_letters, GroupoidPresentation, Letter, Word};
use super::snf::{smith_normal_form, SmithForm};
use crate::error::Result;

/// A homomorphism from the groupoid to `ℤ/modulus` (`ℤ` when `modulus` is
/// 0), given by one value per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianWitness {
    pub modulus: u64,
    pub values: Vec<i64>,
}

impl AbelianWitness {
    fn reduce(&self, x: i128) -> i128 {
        if self.modulus == 0 {
            x
        } else {
            x.rem_euclid(self.modulus as i128)
        }
    }

    pub fn evaluate(&self, letters: &[Letter]) -> i128 {
        let sum: i128 = letters
            .iter()
            .map(|l| {
                let v = self.values[l.gen] as i128;
                if l.inverse {
                    -v
                } else {
                    v
                }
            })
            .sum();
        self.reduce(sum)
    }

    /// Checks that this respects every relation and separates `w1`, `w2`.
    pub fn verify(&self, g: &GroupoidPresentation, w1: &Word, w2: &Word) -> bool {
        if self.values.len() != g.generators.len() {
            return false;
        }
        let respects = g
            .relations
            .iter()
            .all(|r| self.evaluate(&r.lhs.letters) == self.evaluate(&r.rhs.letters));
        respects && self.evaluate(&w1.letters) != self.evaluate(&w2.letters)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum WordVerdict {
    Equal,
    Distinct { certificate: AbelianWitness },
    Unknown { fuel_spent: u64 },
}

impl WordVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, WordVerdict::Equal)
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, WordVerdict::Distinct { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, WordVerdict::Unknown { .. })
    }
}

struct ComponentData {
    vertex: VertexGroup,
    smith: Option<SmithForm>,
    symmetrized: Vec<Vec<Letter>>,
}

/// Precomputed per-component data for repeated word-problem queries.
pub struct WordSolver<'a> {
    g: &'a GroupoidPresentation,
    forest: SpanningForest,
    components: Vec<ComponentData>,
}

impl<'a> WordSolver<'a> {
    pub fn new(g: &'a GroupoidPresentation) -> Self {
        let forest = SpanningForest::new(g);
        let components = forest
            .roots
            .iter()
            .map(|&root| {
                let vertex = vertex_group_data(g, root).expect("root is an object");
                let smith =
                    smith_normal_form(&vertex.group.exponent_matrix(), vertex.group.generators.len()).ok();
                let symmetrized = symmetrize(&vertex.group.relators);
                ComponentData { vertex, smith, symmetrized }
            })
            .collect();
        WordSolver { g, forest, components }
    }

    pub fn presentation(&self) -> &GroupoidPresentation {
        self.g
    }

    /// Decides `w1 = w2` within `fuel` search steps. Errors only when the
    /// words are invalid or not parallel.
    pub fn word_equal(&self, w1: &Word, w2: &Word, fuel: u64) -> Result<WordVerdict> {
        self.g.check_parallel(w1, w2)?;
        let mut loop_letters = w1.letters.clone();
        loop_letters.extend(invert_letters(&w2.letters));
        let loop_letters = reduce_letters(&loop_letters);
        if loop_letters.is_empty() {
            return Ok(WordVerdict::Equal);
        }
        let comp = &self.components[self.forest.component[w1.start]];
        let group_word = comp.vertex.group_word(&loop_letters);
        if group_word.is_empty() {
            return Ok(WordVerdict::Equal);
        }
        if let Some(witness) = self.abelian_witness(comp, &group_word) {
            if witness.verify(self.g, w1, w2) {
                return Ok(WordVerdict::Distinct { certificate: witness });
            }
        }
        if comp.symmetrized.is_empty() {
            return Ok(WordVerdict::Unknown { fuel_spent: 0 });
        }
        let (proved, spent) = prove_trivial(group_word, &comp.symmetrized, fuel);
        Ok(if proved { WordVerdict::Equal } else { WordVerdict::Unknown { fuel_spent: spent } })
    }

    fn abelian_witness(&self, comp: &ComponentData, group_word: &[Letter]) -> Option<AbelianWitness> {
        let smith = comp.smith.as_ref()?;
        let ngen = comp.vertex.group.generators.len();
        let e = exponent_sums(group_word, ngen);
        for j in 0..ngen {
            let coord: i128 = (0..ngen).map(|i| e[i] as i128 * smith.right[i][j] as i128).sum();
            let d = smith.diagonal.get(j).copied().unwrap_or(0);
            let nonzero = if d == 0 { coord != 0 } else { coord.rem_euclid(d as i128) != 0 };
            if !nonzero {
                continue;
            }
            let modulus = d as u64;
            let values = comp
                .vertex
                .generator_of
                .iter()
                .map(|slot| match slot {
                    Some(gi) => {
                        let v = smith.right[*gi][j];
                        if modulus == 0 {
                            v
                        } else {
                            v.rem_euclid(d)
                        }
                    }
                    None => 0,
                })
                .collect();
            return Some(AbelianWitness { modulus, values });
        }
        None
    }
}

/// One-shot form of [`WordSolver::word_equal`].
pub fn word_equal(g: &GroupoidPresentation, w1: &Word, w2: &Word, fuel: u64) -> Result<WordVerdict> {
    WordSolver::new(g).word_equal(w1, w2, fuel)
}

fn cyclic_reduce(r: &[Letter]) -> Vec<Letter> {
    let mut w = reduce_letters(r);
    while w.len() >= 2 && w[0].cancels(w[w.len() - 1]) {
        w.pop();
        w.remove(0);
    }
    w
}

/// All cyclic rotations of each relator and of its inverse.
fn symmetrize(relators: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    let mut out: Vec<Vec<Letter>> = Vec::new();
    for r in relators {
        let cr = cyclic_reduce(r);
        if cr.is_empty() {
            continue;
        }
        for base in [cr.clone(), invert_letters(&cr)] {
            for k in 0..base.len() {
                let mut rot = base[k..].to_vec();
                rot.extend_from_slice(&base[..k]);
                if !out.contains(&rot) {
                    out.push(rot);
                }
            }
        }
    }
    out
}

/// Best-first search (shortest word first) for a derivation of the empty
/// word. Moves replace a prefix of a symmetrized relator found in the word
/// by the inverse of the remaining suffix (a prefix of length 0 is an
/// insertion). Returns whether the identity was reached and the number of
/// expanded nodes.
fn prove_trivial(word: Vec<Letter>, sym: &[Vec<Letter>], fuel: u64) -> (bool, u64) {
    let max_rel = sym.iter().map(Vec::len).max().unwrap_or(0);
    let cap = word.len() + 2 * max_rel;
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut heap = BinaryHeap::new();
    let mut counter = 0u64;
    seen.insert(word.clone());
    heap.push(Reverse((word.len(), counter, word)));
    let mut spent = 0u64;
    while let Some(Reverse((_, _, w))) = heap.pop() {
        if w.is_empty() {
            return (true, spent);
        }
        if spent >= fuel {
            break;
        }
        spent += 1;
        for i in 0..=w.len() {
            for r in sym {
                let mut l = 0;
                loop {
                    let mut next = w[..i].to_vec();
                    next.extend(invert_letters(&r[l..]));
                    next.extend_from_slice(&w[i + l..]);
                    let next = reduce_letters(&next);
                    if next.len() <= cap && !seen.contains(&next) {
                        seen.insert(next.clone());
                        counter += 1;
                        heap.push(Reverse((next.len(), counter, next)));
                    }
                    if l == r.len() || i + l >= w.len() || w[i + l] != r[l] {
                        break;
                    }
                    l += 1;
                }
            }
        }
    }
    (false, spent)
}
