//! Chomsky normal form and CYK membership.

use std::collections::{BTreeMap, BTreeSet};

use super::{Cfg, Production, Symbol};
use crate::words::{InvolutiveAlphabet, Letter, Word};

/// Grammar restricted to `A → B C`, `A → letter`, and optionally `start → ε`.
/// The start symbol never occurs on a right-hand side.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfGrammar {
    alphabet: InvolutiveAlphabet,
    num_nonterminals: usize,
    start: usize,
    binary: Vec<(usize, usize, usize)>,
    terminal: Vec<(usize, Letter)>,
    start_epsilon: bool,
}

impl CnfGrammar {
    pub fn alphabet(&self) -> InvolutiveAlphabet {
        self.alphabet
    }

    pub fn accepts_epsilon(&self) -> bool {
        self.start_epsilon
    }

    pub fn num_nonterminals(&self) -> usize {
        self.num_nonterminals
    }

    /// CYK membership test: true iff `w ∈ L`.
    pub fn member(&self, word: &Word) -> bool {
        assert_eq!(word.alphabet(), self.alphabet, "alphabet mismatch");
        let n = word.len();
        if n == 0 {
            return self.start_epsilon;
        }
        // table[i][j] = nonterminals deriving word[i .. i+j+1]
        let mut table: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new(); n]; n];
        for (i, &l) in word.letters().iter().enumerate() {
            for &(a, t) in &self.terminal {
                if t == l {
                    table[0][i].insert(a);
                }
            }
        }
        for span in 2..=n {
            for i in 0..=(n - span) {
                for split in 1..span {
                    for &(a, b, c) in &self.binary {
                        if table[split - 1][i].contains(&b)
                            && table[span - split - 1][i + split].contains(&c)
                        {
                            table[span - 1][i].insert(a);
                        }
                    }
                }
            }
        }
        table[n - 1][0].contains(&self.start)
    }
}

impl Cfg {
    /// Language-preserving conversion to Chomsky normal form: fresh start,
    /// terminal lifting, binarization, nullable elimination, unit closure,
    /// useless-symbol removal.
    pub fn to_cnf(&self) -> CnfGrammar {
        let trimmed = self.trim_useless();
        let n0 = trimmed.num_nonterminals();

        // Fresh start + terminal nonterminals for letters in long rules.
        let mut next_id = n0 + 1; // id n0 is the fresh start
        let start = n0;
        let mut letter_nt: BTreeMap<Letter, usize> = BTreeMap::new();
        let mut rules: Vec<(usize, Vec<Symbol>)> = vec![(start, vec![Symbol::N(trimmed.start())])];
        for p in trimmed.productions() {
            let rhs: Vec<Symbol> = if p.rhs.len() >= 2 {
                p.rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::T(l) => {
                            let id = *letter_nt.entry(l).or_insert_with(|| {
                                let id = next_id;
                                next_id += 1;
                                id
                            });
                            Symbol::N(id)
                        }
                        n => n,
                    })
                    .collect()
            } else {
                p.rhs.clone()
            };
            rules.push((p.lhs, rhs));
        }
        for (&l, &id) in &letter_nt {
            rules.push((id, vec![Symbol::T(l)]));
        }

        // Binarize.
        let mut binarized: Vec<(usize, Vec<Symbol>)> = Vec::new();
        for (lhs, rhs) in rules {
            if rhs.len() <= 2 {
                binarized.push((lhs, rhs));
                continue;
            }
            let mut current = lhs;
            for i in 0..rhs.len() - 2 {
                let fresh = next_id;
                next_id += 1;
                binarized.push((current, vec![rhs[i], Symbol::N(fresh)]));
                current = fresh;
            }
            binarized.push((current, rhs[rhs.len() - 2..].to_vec()));
        }

        // Nullable elimination: for every rule, add variants dropping any
        // subset of nullable nonterminal occurrences; keep ε only at start.
        let mut nullable = vec![false; next_id];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &binarized {
                if !nullable[*lhs]
                    && rhs.iter().all(|s| match s {
                        Symbol::N(k) => nullable[*k],
                        Symbol::T(_) => false,
                    })
                {
                    nullable[*lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut no_eps: BTreeSet<(usize, Vec<Symbol>)> = BTreeSet::new();
        for (lhs, rhs) in &binarized {
            let mut variants: Vec<Vec<Symbol>> = vec![Vec::new()];
            for s in rhs {
                let drop_ok = matches!(s, Symbol::N(k) if nullable[*k]);
                let mut extended = Vec::new();
                for v in &variants {
                    let mut kept = v.clone();
                    kept.push(*s);
                    extended.push(kept);
                    if drop_ok {
                        extended.push(v.clone());
                    }
                }
                variants = extended;
            }
            for v in variants {
                if !v.is_empty() {
                    no_eps.insert((*lhs, v));
                }
            }
        }
        let start_epsilon = nullable[start];

        // Unit-pair closure: lift non-unit rules along A →* B chains.
        let unit_rules: Vec<(usize, usize)> = no_eps
            .iter()
            .filter_map(|(lhs, rhs)| match rhs[..] {
                [Symbol::N(k)] => Some((*lhs, k)),
                _ => None,
            })
            .collect();
        let mut unit_pairs: BTreeSet<(usize, usize)> =
            (0..next_id).map(|a| (a, a)).collect();
        loop {
            let mut changed = false;
            for &(a, b) in &unit_rules {
                let sources: Vec<usize> = unit_pairs
                    .iter()
                    .filter(|&&(_, y)| y == a)
                    .map(|&(x, _)| x)
                    .collect();
                for x in sources {
                    if unit_pairs.insert((x, b)) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut binary = BTreeSet::new();
        let mut terminal = BTreeSet::new();
        for (lhs, rhs) in &no_eps {
            match rhs[..] {
                [Symbol::N(_)] => {}
                [Symbol::T(l)] => {
                    for &(x, y) in &unit_pairs {
                        if y == *lhs {
                            terminal.insert((x, l));
                        }
                    }
                }
                [b, c] => {
                    let bid = match b {
                        Symbol::N(k) => k,
                        Symbol::T(_) => unreachable!("terminals lifted in long rules"),
                    };
                    let cid = match c {
                        Symbol::N(k) => k,
                        Symbol::T(_) => unreachable!("terminals lifted in long rules"),
                    };
                    for &(x, y) in &unit_pairs {
                        if y == *lhs {
                            binary.insert((x, bid, cid));
                        }
                    }
                }
                _ => unreachable!("binarized"),
            }
        }

        // Useless-symbol removal on the CNF rules.
        let mut productive = vec![false; next_id];
        loop {
            let mut changed = false;
            for &(a, _) in &terminal {
                if !productive[a] {
                    productive[a] = true;
                    changed = true;
                }
            }
            for &(a, b, c) in &binary {
                if !productive[a] && productive[b] && productive[c] {
                    productive[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut reachable = vec![false; next_id];
        reachable[start] = true;
        loop {
            let mut changed = false;
            for &(a, b, c) in &binary {
                if reachable[a] && productive[b] && productive[c] {
                    for k in [b, c] {
                        if !reachable[k] {
                            reachable[k] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..next_id)
            .filter(|&k| k == start || (productive[k] && reachable[k]))
            .collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        CnfGrammar {
            alphabet: trimmed.alphabet(),
            num_nonterminals: keep.len(),
            start: index[&start],
            binary: binary
                .into_iter()
                .filter(|(a, b, c)| {
                    index.contains_key(a) && index.contains_key(b) && index.contains_key(c)
                })
                .map(|(a, b, c)| (index[&a], index[&b], index[&c]))
                .collect(),
            terminal: terminal
                .into_iter()
                .filter(|(a, _)| index.contains_key(a))
                .map(|(a, l)| (index[&a], l))
                .collect(),
            start_epsilon,
        }
    }
}
