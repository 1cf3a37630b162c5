use std::collections::HashSet;

use super::{ElementSet, Perm};

/// Outcome of [`elem_abelian_rank_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSearch {
    pub rank: usize,
    /// Generators of an elementary abelian subgroup of that rank.
    pub witness: Vec<Perm>,
    /// True when the whole search space was exhausted within budget.
    pub exact: bool,
    pub nodes: u64,
}

struct Search<'a> {
    cands: &'a [Perm],
    p: u64,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: Vec<Perm>,
}

impl Search<'_> {
    /// `allowed`: candidates after the last chosen one (in index order) that
    /// commute with every chosen generator and lie outside the current
    /// subgroup. `full`: the same without the index restriction.
    fn dfs(&mut self, chosen: &mut Vec<Perm>, elems: &[Perm], allowed: &[usize], full: &[usize]) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = false;
            return;
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        // An extension by j generators adds |H|(p^j - 1) elements, all of
        // which are in `full`.
        let order = elems.len() as u64;
        let mut reach = chosen.len();
        let mut added = order * (self.p - 1);
        while added <= full.len() as u64 && reach - chosen.len() < allowed.len() {
            reach += 1;
            added = added * self.p + order * (self.p - 1);
        }
        if reach <= self.best.len() {
            return;
        }
        for (k, &ci) in allowed.iter().enumerate() {
            if !self.exhausted {
                return;
            }
            let c = self.cands[ci];
            let mut new_elems = Vec::with_capacity(elems.len() * self.p as usize);
            let mut power = Perm::identity(c.degree());
            for _ in 0..self.p {
                for e in elems {
                    new_elems.push(e.compose(&power));
                }
                power = power.compose(&c);
            }
            let new_set: HashSet<u64> = new_elems.iter().map(Perm::pack).collect();
            let keep = |&j: &usize| {
                let x = self.cands[j];
                x.compose(&c) == c.compose(&x) && !new_set.contains(&x.pack())
            };
            let next: Vec<usize> = allowed[k + 1..].iter().copied().filter(keep).collect();
            let next_full: Vec<usize> = full.iter().copied().filter(keep).collect();
            chosen.push(c);
            self.dfs(chosen, &new_elems, &next, &next_full);
            chosen.pop();
        }
    }
}

/// Depth-first search for a largest elementary abelian p-subgroup of a
/// completely enumerated group. Candidates extending a partial subgroup are
/// restricted to order-p elements centralizing every chosen generator.
pub fn elem_abelian_rank_search(group: &ElementSet<Perm>, p: u64, budget: u64) -> RankSearch {
    let cands: Vec<Perm> = group.elements.iter().copied().filter(|x| x.order() == p).collect();
    let Some(first) = group.elements.first() else {
        return RankSearch { rank: 0, witness: Vec::new(), exact: true, nodes: 0 };
    };
    let id = Perm::identity(first.degree());
    let mut search = Search { cands: &cands, p, budget, nodes: 0, exhausted: true, best: Vec::new() };
    let all: Vec<usize> = (0..cands.len()).collect();
    search.dfs(&mut Vec::new(), &[id], &all, &all);
    RankSearch {
        rank: search.best.len(),
        witness: search.best,
        exact: search.exhausted && group.complete,
        nodes: search.nodes,
    }
}
