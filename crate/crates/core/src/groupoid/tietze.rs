use super::group::GroupPresentation;
use super::presentation::{invert_letters, reduce_letters, Letter};

/// Relator length above which generator elimination is skipped.
const MAX_RELATOR_LEN: usize = 4096;

fn cyclic_reduce(r: &[Letter]) -> Vec<Letter> {
    let mut w = reduce_letters(r);
    while w.len() >= 2 && w[0].cancels(w[w.len() - 1]) {
        w.pop();
        w.remove(0);
    }
    w
}

/// Simplifies a presentation with Tietze moves only.
///
/// Moves, in fixed order and repeated until nothing applies or `fuel` moves
/// have been made: cyclically reduce relators, drop empty and duplicate
/// relators, then eliminate a generator occurring exactly once in some
/// relator (shortest relator first, highest generator index first),
/// substituting its solution everywhere. Generator and relator counts never
/// increase.
pub fn tietze_simplify(p: &GroupPresentation, fuel: u64) -> GroupPresentation {
    let mut gens = p.generators.clone();
    let mut rels: Vec<Vec<Letter>> = p.relators.clone();
    let mut spent = 0u64;
    loop {
        rels = rels.iter().map(|r| cyclic_reduce(r)).collect();
        let mut seen: Vec<Vec<Letter>> = Vec::new();
        rels.retain(|r| {
            if r.is_empty() || seen.contains(r) {
                return false;
            }
            seen.push(r.clone());
            true
        });
        if spent >= fuel {
            break;
        }
        let Some((ri, pos)) = find_elimination(&rels, gens.len()) else { break };
        spent += 1;
        let r = rels.remove(ri);
        let target = r[pos];
        let prefix = &r[..pos];
        let suffix = &r[pos + 1..];
        // prefix · g^ε · suffix = 1  ⇒  g^ε = prefix⁻¹ · suffix⁻¹
        let mut solution = invert_letters(prefix);
        solution.extend(invert_letters(suffix));
        if target.inverse {
            solution = invert_letters(&solution);
        }
        let solution = reduce_letters(&solution);
        let removed = target.gen;
        let mut next = Vec::with_capacity(rels.len());
        for rel in &rels {
            let mut out = Vec::new();
            for &l in rel {
                if l.gen == removed {
                    if l.inverse {
                        out.extend(invert_letters(&solution));
                    } else {
                        out.extend(solution.iter().copied());
                    }
                } else {
                    out.push(l);
                }
            }
            next.push(out);
        }
        rels = next
            .into_iter()
            .map(|rel| {
                rel.into_iter()
                    .map(|l| if l.gen > removed { Letter { gen: l.gen - 1, inverse: l.inverse } } else { l })
                    .collect()
            })
            .collect();
        gens.remove(removed);
    }
    GroupPresentation { generators: gens, relators: rels }
}

fn find_elimination(rels: &[Vec<Letter>], gens: usize) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..rels.len()).collect();
    order.sort_by_key(|&i| (rels[i].len(), i));
    let total: usize = rels.iter().map(Vec::len).sum();
    for i in order {
        let r = &rels[i];
        let mut count = vec![0usize; gens];
        for l in r {
            count[l.gen] += 1;
        }
        for g in (0..gens).rev() {
            if count[g] != 1 {
                continue;
            }
            // growth check: every other occurrence is replaced by |r| - 1 letters
            let others: usize = rels
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, rel)| rel.iter().filter(|l| l.gen == g).count())
                .sum();
            if total + others * r.len() > MAX_RELATOR_LEN * rels.len().max(1) {
                continue;
            }
            let pos = r.iter().position(|l| l.gen == g).expect("counted");
            return Some((i, pos));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::group::abelianization;

    fn gp(gens: &[&str], rels: Vec<Vec<Letter>>) -> GroupPresentation {
        GroupPresentation { generators: gens.iter().map(|s| s.to_string()).collect(), relators: rels }
    }

    #[test]
    fn removes_generator_killed_by_relator() {
        let p = gp(&["x", "y"], vec![vec![Letter::fwd(1)]]);
        let q = tietze_simplify(&p, 100);
        assert_eq!(q, gp(&["x"], vec![]));
    }

    #[test]
    fn identifies_generators() {
        let p = gp(&["x", "y"], vec![vec![Letter::fwd(0), Letter::inv(1)]]);
        let q = tietze_simplify(&p, 100);
        assert_eq!(q, gp(&["x"], vec![]));
    }

    #[test]
    fn keeps_torsion_relators() {
        let p = gp(&["x"], vec![vec![Letter::fwd(0), Letter::fwd(0)]]);
        let q = tietze_simplify(&p, 100);
        assert_eq!(q, p);
    }

    #[test]
    fn abelianization_is_invariant() {
        let p = gp(
            &["a", "b", "c"],
            vec![
                vec![Letter::fwd(0), Letter::fwd(1), Letter::inv(2)],
                vec![Letter::fwd(2), Letter::fwd(2), Letter::fwd(0), Letter::fwd(0)],
                vec![Letter::fwd(1), Letter::inv(1)],
            ],
        );
        let q = tietze_simplify(&p, 100);
        assert!(q.generators.len() <= p.generators.len());
        assert!(q.relators.len() <= p.relators.len());
        assert_eq!(abelianization(&p).unwrap(), abelianization(&q).unwrap());
    }

    #[test]
    fn zero_fuel_only_cleans() {
        let p = gp(&["x", "y"], vec![vec![Letter::fwd(1)], vec![]]);
        let q = tietze_simplify(&p, 0);
        assert_eq!(q.generators.len(), 2);
        assert_eq!(q.relators.len(), 1);
    }
}
