//! Parikh images of context-free languages as semilinear sets.
//!
//! Construction: normalize the grammar so every right-hand side carries at
//! most two nonterminal occurrences (terminals stay in place), then build
//! the bounded-index derivation automaton whose states are multisets of at
//! most `n + 1` live nonterminals. A transition fires one production on one
//! live nonterminal and reads the Parikh vector of the terminals it emits.
//! Every accepted vector sum is the Parikh image of a real derivation, and
//! every derivation can be reordered within the index bound, so the
//! automaton is Parikh-equivalent to the grammar.
//!
//! The semilinear set is then read off the trimmed automaton: one component
//! per (simple path, connected family of simple cycles), the family counted
//! once in the base and every cycle touching the traversed region available
//! as a period. The construction is exact; its caps fail loudly with
//! `DeskScaleExceeded` instead of degrading.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Cfg, GrammarError, Production, Symbol};
use crate::scalar::{from_count, Scalar};
use crate::semilinear::{LinearSet, SemilinearSet};
use crate::words::letter_index;

const MAX_STATES: usize = 50_000;
const MAX_PATHS: usize = 20_000;
const MAX_CYCLES: usize = 64;
const MAX_COMPONENTS: usize = 200_000;

/// `{parikh(w) | w ∈ L(g)}` as a semilinear subset of `N^{2n}`.
pub fn parikh_image<T: Scalar>(g: &Cfg) -> Result<SemilinearSet<T>, GrammarError> {
    let dim = 2 * g.alphabet().rank() as usize;
    let g = g.trim_useless();
    if g.is_empty() {
        return Ok(SemilinearSet::empty(dim));
    }
    let g = split_long_productions(&g);
    let automaton = DerivationAutomaton::build(&g, dim)?;
    automaton.extract_semilinear(dim)
}

/// Rewrites productions with three or more nonterminal occurrences into a
/// chain with at most two per right-hand side. Language-preserving.
fn split_long_productions(g: &Cfg) -> Cfg {
    let mut names: Vec<String> = (0..g.num_nonterminals())
        .map(|k| g.name(k).to_string())
        .collect();
    let mut productions = Vec::new();
    for (pi, p) in g.productions().iter().enumerate() {
        let nt_positions: Vec<usize> = p
            .rhs
            .iter()
            .enumerate()
            .filter_map(|(i, s)| matches!(s, Symbol::N(_)).then_some(i))
            .collect();
        if nt_positions.len() <= 2 {
            productions.push(p.clone());
            continue;
        }
        // A → x1 B1 x2 B2 … xk Bk xk+1 becomes a chain with one fresh
        // nonterminal per inner segment.
        let mut lhs = p.lhs;
        let mut cursor = 0usize;
        for (step, &pos) in nt_positions
            .iter()
            .take(nt_positions.len() - 2)
            .enumerate()
        {
            let fresh = names.len();
            names.push(format!("{}~{}~{}", g.name(p.lhs), pi, step));
            let mut rhs: Vec<Symbol> = p.rhs[cursor..=pos].to_vec();
            rhs.push(Symbol::N(fresh));
            productions.push(Production { lhs, rhs });
            lhs = fresh;
            cursor = pos + 1;
        }
        productions.push(Production {
            lhs,
            rhs: p.rhs[cursor..].to_vec(),
        });
    }
    Cfg::new(g.alphabet(), names, g.start(), productions).expect("split preserves validity")
}

struct DerivationAutomaton {
    /// Edges (src, terminal Parikh vector, dst); state 0 is `{start}`.
    edges: Vec<(usize, Vec<u64>, usize)>,
    num_states: usize,
    initial: usize,
    /// Index of the empty multiset, if reachable.
    final_state: Option<usize>,
}

impl DerivationAutomaton {
    fn build(g: &Cfg, dim: usize) -> Result<Self, GrammarError> {
        let n = g.num_nonterminals();
        let cap = n + 1;
        let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
        let mut edges: Vec<(usize, Vec<u64>, usize)> = Vec::new();

        let mut start_multiset = vec![0u32; n];
        start_multiset[g.start()] += 1;
        index.insert(start_multiset.clone(), 0);
        queue.push_back(start_multiset);

        while let Some(multiset) = queue.pop_front() {
            let src = index[&multiset];
            for p in g.productions() {
                if multiset[p.lhs] == 0 {
                    continue;
                }
                let mut next = multiset.clone();
                next[p.lhs] -= 1;
                let mut vector = vec![0u64; dim];
                for s in &p.rhs {
                    match *s {
                        Symbol::N(k) => next[k] += 1,
                        Symbol::T(l) => vector[letter_index(l)] += 1,
                    }
                }
                if next.iter().sum::<u32>() > cap as u32 {
                    continue;
                }
                let fresh = index.len();
                let dst = *index.entry(next.clone()).or_insert_with(|| {
                    queue.push_back(next);
                    fresh
                });
                if index.len() > MAX_STATES {
                    return Err(GrammarError::DeskScaleExceeded("parikh automaton states"));
                }
                edges.push((src, vector, dst));
            }
        }

        let final_state = index.get(&vec![0u32; n]).copied();
        let num_states = index.len();
        let automaton = DerivationAutomaton {
            edges,
            num_states,
            initial: 0,
            final_state,
        };
        Ok(automaton.trim())
    }

    fn trim(self) -> DerivationAutomaton {
        let Some(final_state) = self.final_state else {
            return DerivationAutomaton {
                edges: Vec::new(),
                num_states: 0,
                initial: 0,
                final_state: None,
            };
        };
        let forward = reach(self.num_states, self.edges.iter().map(|e| (e.0, e.2)), self.initial);
        let backward = reach(self.num_states, self.edges.iter().map(|e| (e.2, e.0)), final_state);
        let keep: Vec<usize> = (0..self.num_states)
            .filter(|s| forward.contains(s) && backward.contains(s))
            .collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        DerivationAutomaton {
            edges: self
                .edges
                .into_iter()
                .filter_map(|(s, v, d)| Some((*index.get(&s)?, v, *index.get(&d)?)))
                .collect(),
            num_states: keep.len(),
            initial: index[&self.initial],
            final_state: index.get(&final_state).copied(),
        }
    }

    fn extract_semilinear<T: Scalar>(&self, dim: usize) -> Result<SemilinearSet<T>, GrammarError> {
        let Some(final_state) = self.final_state else {
            return Ok(SemilinearSet::empty(dim));
        };
        let paths = self.simple_paths(final_state)?;
        let cycles = self.simple_cycles()?;
        let mut components: BTreeSet<(Vec<u64>, BTreeSet<Vec<u64>>)> = BTreeSet::new();

        for (path_vec, path_vertices) in &paths {
            // Connected cycle families over the path: breadth-first over
            // sets, adding any cycle that touches the current region.
            let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
            let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
            seen.insert(Vec::new());
            queue.push_back(Vec::new());
            while let Some(family) = queue.pop_front() {
                let mut region = path_vertices.clone();
                let mut base = path_vec.clone();
                for &ci in &family {
                    region.extend(&cycles[ci].1);
                    add_assign(&mut base, &cycles[ci].0);
                }
                let periods: BTreeSet<Vec<u64>> = cycles
                    .iter()
                    .filter(|(_, verts)| verts.iter().any(|v| region.contains(v)))
                    .map(|(vec, _)| vec.clone())
                    .collect();
                components.insert((base, periods));
                if components.len() > MAX_COMPONENTS {
                    return Err(GrammarError::DeskScaleExceeded("parikh components"));
                }
                // Extend only with cycles that touch the region and bring a
                // new vertex: a touching cycle adding nothing is already a
                // period, so including it in the base is redundant.
                for (ci, (_, verts)) in cycles.iter().enumerate() {
                    if family.binary_search(&ci).is_ok() {
                        continue;
                    }
                    if verts.iter().any(|v| region.contains(v))
                        && verts.iter().any(|v| !region.contains(v))
                    {
                        let mut extended = family.clone();
                        let pos = extended.binary_search(&ci).unwrap_err();
                        extended.insert(pos, ci);
                        if seen.insert(extended.clone()) {
                            queue.push_back(extended);
                        }
                    }
                }
            }
        }

        let linear: Vec<LinearSet<T>> = components
            .into_iter()
            .map(|(base, periods)| {
                LinearSet::new(
                    base.iter().map(|&x| from_count(x)).collect(),
                    periods
                        .iter()
                        .map(|p| p.iter().map(|&x| from_count(x)).collect())
                        .collect(),
                )
                .expect("dimensions agree")
            })
            .collect();
        Ok(SemilinearSet::new(dim, linear).expect("dimensions agree"))
    }

    /// All simple paths initial → final, as (vector sum, vertex set).
    fn simple_paths(
        &self,
        final_state: usize,
    ) -> Result<Vec<(Vec<u64>, BTreeSet<usize>)>, GrammarError> {
        let mut out = Vec::new();
        let dim = self.edges.first().map_or(0, |e| e.1.len());
        let mut stack = vec![(
            self.initial,
            vec![0u64; dim],
            BTreeSet::from([self.initial]),
        )];
        while let Some((state, vector, visited)) = stack.pop() {
            if state == final_state {
                out.push((vector.clone(), visited.clone()));
                if out.len() > MAX_PATHS {
                    return Err(GrammarError::DeskScaleExceeded("parikh simple paths"));
                }
                // The final state (empty multiset) has no outgoing edges, so
                // stopping here loses nothing.
                continue;
            }
            for (src, evec, dst) in &self.edges {
                if *src == state && !visited.contains(dst) {
                    let mut v = vector.clone();
                    add_assign(&mut v, evec);
                    let mut seen = visited.clone();
                    seen.insert(*dst);
                    stack.push((*dst, v, seen));
                }
            }
        }
        Ok(out)
    }

    /// All simple cycles, each rooted at its minimal vertex, as
    /// (vector sum, vertex set).
    fn simple_cycles(&self) -> Result<Vec<(Vec<u64>, BTreeSet<usize>)>, GrammarError> {
        let mut out = Vec::new();
        let dim = self.edges.first().map_or(0, |e| e.1.len());
        for root in 0..self.num_states {
            let mut stack = vec![(root, vec![0u64; dim], BTreeSet::from([root]))];
            while let Some((state, vector, visited)) = stack.pop() {
                for (src, evec, dst) in &self.edges {
                    if *src != state {
                        continue;
                    }
                    if *dst == root {
                        let mut v = vector.clone();
                        add_assign(&mut v, evec);
                        out.push((v, visited.clone()));
                        if out.len() > MAX_CYCLES {
                            return Err(GrammarError::DeskScaleExceeded("parikh simple cycles"));
                        }
                    } else if *dst > root && !visited.contains(dst) {
                        let mut v = vector.clone();
                        add_assign(&mut v, evec);
                        let mut seen = visited.clone();
                        seen.insert(*dst);
                        stack.push((*dst, v, seen));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn add_assign(target: &mut [u64], delta: &[u64]) {
    for (t, d) in target.iter_mut().zip(delta) {
        *t += d;
    }
}

fn reach(
    num_states: usize,
    edges: impl Iterator<Item = (usize, usize)>,
    seed: usize,
) -> BTreeSet<usize> {
    let edges: Vec<(usize, usize)> = edges.collect();
    let mut seen = BTreeSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    let _ = num_states;
    while let Some(s) = queue.pop_front() {
        for &(src, dst) in &edges {
            if src == s && seen.insert(dst) {
                queue.push_back(dst);
            }
        }
    }
    seen
}
