//! Context-free grammars over involutive alphabets.
//!
//! Grammars carry two different subset semantics downstream: an algebraic
//! subset is the full image of the language under the canonical surjection,
//! while a context-free subset of a free group is tracked through the
//! reduced words of its language (bounded oracle). Either way the grammar
//! operations here are language-level; the group-level readings live in the
//! transfer module.
//!
//! `Red(L)` of a context-free `L` is deliberately not constructed
//! symbolically; the official operation is the bounded oracle
//! `{reduce(w) | w ∈ enumerate(g, B)}` with an explicit bound.

mod cnf;
mod ops;
mod parikh;

pub use cnf::CnfGrammar;
pub use ops::{Substitution, Transducer};
pub use parikh::parikh_image;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::words::{format_letter, InvolutiveAlphabet, Letter, ReducedWord, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("symbol out of range: {0}")]
    BadSymbol(String),
    #[error("rank must be at least 2 for this grammar, got {0}")]
    RankTooSmall(u32),
    #[error("substitution must provide one image per positive letter ({expected}), got {got}")]
    BadSubstitution { expected: u32, got: usize },
    #[error("malformed transducer: {0}")]
    BadTransducer(String),
    #[error("desk-scale cap exceeded in {0}; reduce the bound or the input size")]
    DeskScaleExceeded(&'static str),
}

/// Right-hand-side symbol: a terminal letter or a nonterminal id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Symbol {
    T(Letter),
    N(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

/// Context-free grammar. Nonterminals are dense ids with display names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cfg {
    alphabet: InvolutiveAlphabet,
    names: Vec<String>,
    start: usize,
    productions: Vec<Production>,
}

impl Cfg {
    pub fn new(
        alphabet: InvolutiveAlphabet,
        names: Vec<String>,
        start: usize,
        productions: Vec<Production>,
    ) -> Result<Self, GrammarError> {
        let n = names.len();
        if start >= n {
            return Err(GrammarError::BadSymbol(format!("start {start}")));
        }
        for p in &productions {
            if p.lhs >= n {
                return Err(GrammarError::BadSymbol(format!("lhs {}", p.lhs)));
            }
            for s in &p.rhs {
                match *s {
                    Symbol::N(k) if k >= n => {
                        return Err(GrammarError::BadSymbol(format!("nonterminal {k}")))
                    }
                    Symbol::T(l) if !alphabet.contains(l) => {
                        return Err(GrammarError::BadSymbol(format!("letter {l}")))
                    }
                    _ => {}
                }
            }
        }
        Ok(Cfg {
            alphabet,
            names,
            start,
            productions,
        })
    }

    /// `S → w`, the singleton language `{w}`.
    pub fn literal(word: &Word) -> Cfg {
        Cfg {
            alphabet: word.alphabet(),
            names: vec!["S".into()],
            start: 0,
            productions: vec![Production {
                lhs: 0,
                rhs: word.letters().iter().map(|&l| Symbol::T(l)).collect(),
            }],
        }
    }

    /// The grammar with no productions: empty language.
    pub fn empty(alphabet: InvolutiveAlphabet) -> Cfg {
        Cfg {
            alphabet,
            names: vec!["S".into()],
            start: 0,
            productions: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> InvolutiveAlphabet {
        self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn num_nonterminals(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Nonterminals that derive some terminal word.
    pub fn productive(&self) -> Vec<bool> {
        let mut productive = vec![false; self.names.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if productive[p.lhs] {
                    continue;
                }
                let ok = p.rhs.iter().all(|s| match *s {
                    Symbol::T(_) => true,
                    Symbol::N(k) => productive[k],
                });
                if ok {
                    productive[p.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return productive;
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.productive()[self.start]
    }

    /// Removes unproductive and unreachable nonterminals (keeping the start
    /// symbol even when the language is empty).
    pub fn trim_useless(&self) -> Cfg {
        let productive = self.productive();
        let kept_productions: Vec<&Production> = self
            .productions
            .iter()
            .filter(|p| {
                productive[p.lhs]
                    && p.rhs.iter().all(|s| match *s {
                        Symbol::T(_) => true,
                        Symbol::N(k) => productive[k],
                    })
            })
            .collect();
        let mut reachable = vec![false; self.names.len()];
        reachable[self.start] = true;
        loop {
            let mut changed = false;
            for p in &kept_productions {
                if !reachable[p.lhs] {
                    continue;
                }
                for s in &p.rhs {
                    if let Symbol::N(k) = *s {
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
        let mut index = BTreeMap::new();
        let mut names = Vec::new();
        for (id, name) in self.names.iter().enumerate() {
            if id == self.start || (reachable[id] && productive[id]) {
                index.insert(id, names.len());
                names.push(name.clone());
            }
        }
        let productions = kept_productions
            .into_iter()
            .filter(|p| reachable[p.lhs])
            .map(|p| Production {
                lhs: index[&p.lhs],
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::T(l) => Symbol::T(l),
                        Symbol::N(k) => Symbol::N(index[&k]),
                    })
                    .collect(),
            })
            .collect();
        Cfg {
            alphabet: self.alphabet,
            names,
            start: index[&self.start],
            productions,
        }
    }

    /// Disjoint union of languages via a fresh start symbol.
    pub fn union(&self, other: &Cfg) -> Result<Cfg, GrammarError> {
        if self.alphabet != other.alphabet {
            return Err(GrammarError::AlphabetMismatch);
        }
        let mut names = vec!["U".to_string()];
        names.extend(self.names.iter().map(|n| format!("L.{n}")));
        names.extend(other.names.iter().map(|n| format!("R.{n}")));
        let left = |k: usize| k + 1;
        let right = |k: usize| k + 1 + self.names.len();
        let mut productions = vec![
            Production {
                lhs: 0,
                rhs: vec![Symbol::N(left(self.start))],
            },
            Production {
                lhs: 0,
                rhs: vec![Symbol::N(right(other.start))],
            },
        ];
        for p in &self.productions {
            productions.push(Production {
                lhs: left(p.lhs),
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::T(l) => Symbol::T(l),
                        Symbol::N(k) => Symbol::N(left(k)),
                    })
                    .collect(),
            });
        }
        for p in &other.productions {
            productions.push(Production {
                lhs: right(p.lhs),
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::T(l) => Symbol::T(l),
                        Symbol::N(k) => Symbol::N(right(k)),
                    })
                    .collect(),
            });
        }
        Ok(Cfg {
            alphabet: self.alphabet,
            names,
            start: 0,
            productions,
        }
        .trim_useless())
    }

    /// All words of the language with length ≤ `max_len`, each exactly once,
    /// in length-lexicographic order.
    ///
    /// Bottom-up fixpoint over tables `W[A][k] = {words of length k from A}`;
    /// monotone and bounded, so it terminates on any grammar, including ones
    /// with epsilon productions and unit cycles.
    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let tables = self.word_tables(max_len);
        let mut out: Vec<Word> = Vec::new();
        for k in 0..=max_len {
            let mut words: Vec<&Vec<Letter>> = tables[self.start][k].iter().collect();
            words.sort_by_key(|ls| ls.iter().map(|&l| crate::words::letter_index(l)).collect::<Vec<_>>());
            for ls in words {
                out.push(Word::new(self.alphabet, ls.clone()).expect("validated letters"));
            }
        }
        out
    }

    /// The bounded reduced-image oracle for this grammar's language.
    pub fn red_oracle(&self, max_len: usize) -> BTreeSet<ReducedWord> {
        self.enumerate(max_len)
            .iter()
            .map(|w| w.reduce())
            .collect()
    }

    fn word_tables(&self, max_len: usize) -> Vec<Vec<BTreeSet<Vec<Letter>>>> {
        let n = self.names.len();
        let mut tables: Vec<Vec<BTreeSet<Vec<Letter>>>> = vec![vec![BTreeSet::new(); max_len + 1]; n];
        loop {
            let mut changed = false;
            for p in &self.productions {
                for k in 0..=max_len {
                    let mut buffer = Vec::new();
                    compose_rhs(&p.rhs, k, &tables, &mut Vec::new(), &mut buffer);
                    for word in buffer {
                        if tables[p.lhs][k].insert(word) {
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return tables;
            }
        }
    }
}

/// All terminal words of length exactly `target` derivable from `rhs`,
/// appending to `out`; `prefix` accumulates letters chosen so far.
fn compose_rhs(
    rhs: &[Symbol],
    target: usize,
    tables: &[Vec<BTreeSet<Vec<Letter>>>],
    prefix: &mut Vec<Letter>,
    out: &mut Vec<Vec<Letter>>,
) {
    match rhs.split_first() {
        None => {
            if target == 0 {
                out.push(prefix.clone());
            }
        }
        Some((Symbol::T(l), rest)) => {
            if target >= 1 {
                prefix.push(*l);
                compose_rhs(rest, target - 1, tables, prefix, out);
                prefix.pop();
            }
        }
        Some((Symbol::N(a), rest)) => {
            for k in 0..=target {
                if tables[*a][k].is_empty() {
                    continue;
                }
                let words: Vec<Vec<Letter>> = tables[*a][k].iter().cloned().collect();
                for w in words {
                    let len_before = prefix.len();
                    prefix.extend_from_slice(&w);
                    compose_rhs(rest, target - k, tables, prefix, out);
                    prefix.truncate(len_before);
                }
            }
        }
    }
}

/// The grammar `S → a1 S a1⁻ | T ; T → a1⁻ T T a1 | a2` over rank `n ≥ 2`,
/// whose image meets `a2*` exactly in the powers-of-two exponents.
pub fn example_3_12_grammar(rank: u32) -> Result<Cfg, GrammarError> {
    if rank < 2 {
        return Err(GrammarError::RankTooSmall(rank));
    }
    let alphabet = InvolutiveAlphabet::new(rank).expect("rank >= 2");
    let s = Symbol::N(0);
    let t = Symbol::N(1);
    Cfg::new(
        alphabet,
        vec!["S".into(), "T".into()],
        0,
        vec![
            Production {
                lhs: 0,
                rhs: vec![Symbol::T(1), s, Symbol::T(-1)],
            },
            Production {
                lhs: 0,
                rhs: vec![t],
            },
            Production {
                lhs: 1,
                rhs: vec![Symbol::T(-1), t, t, Symbol::T(1)],
            },
            Production {
                lhs: 1,
                rhs: vec![Symbol::T(2)],
            },
        ],
    )
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut by_lhs: BTreeMap<usize, Vec<&Production>> = BTreeMap::new();
        for p in &self.productions {
            by_lhs.entry(p.lhs).or_default().push(p);
        }
        let mut first = true;
        write!(f, "cfg {{ ")?;
        for (lhs, prods) in by_lhs {
            if !first {
                write!(f, " ; ")?;
            }
            first = false;
            write!(f, "{} ->", self.names[lhs])?;
            for (i, p) in prods.iter().enumerate() {
                if i > 0 {
                    write!(f, " |")?;
                }
                if p.rhs.is_empty() {
                    write!(f, " e")?;
                }
                for s in &p.rhs {
                    match *s {
                        Symbol::T(l) => write!(f, " {}", format_letter(self.alphabet, l))?,
                        Symbol::N(k) => write!(f, " {}", self.names[k])?,
                    }
                }
            }
        }
        write!(f, " }}")
    }
}
