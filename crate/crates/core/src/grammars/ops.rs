//! Closure constructions: intersection with a rational language (triple
//! construction), concatenation with a rational language, alphabet
//! substitution, and rational transduction.

use std::collections::BTreeMap;

use super::{Cfg, GrammarError, Production, Symbol};
use crate::automata::Nfa;
use crate::words::{InvolutiveAlphabet, Letter, Word};

/// Which side a rational language is concatenated on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConcatSide {
    Left,
    Right,
}

impl Cfg {
    /// Classical triple construction: `L(out) = L(self) ∩ L(x)`.
    /// Epsilon transitions of `x` are eliminated first.
    pub fn intersect_rational(&self, x: &Nfa) -> Result<Cfg, GrammarError> {
        if self.alphabet() != x.alphabet() {
            return Err(GrammarError::AlphabetMismatch);
        }
        let x = x.eliminate_epsilon();
        let states = x.num_states();
        let g = self.trim_useless();
        let n = g.num_nonterminals();
        if states == 0 {
            return Ok(Cfg::empty(g.alphabet()));
        }

        let mut delta: BTreeMap<(usize, Letter), Vec<usize>> = BTreeMap::new();
        for &(s, label, d) in x.transitions() {
            delta
                .entry((s, label.expect("epsilon-free")))
                .or_default()
                .push(d);
        }

        // Triple (p, A, q) plus a fresh start at the end.
        let triple = |p: usize, a: usize, q: usize| (p * n + a) * states + q;
        let start = n * states * states;
        let mut names: Vec<String> = Vec::with_capacity(start + 1);
        for p in 0..states {
            for a in 0..n {
                for q in 0..states {
                    let _ = (p, a, q);
                    names.push(format!("({p},{},{q})", g.name(a)));
                }
            }
        }
        names.push("S".into());

        let mut productions = Vec::new();
        for p in g.productions() {
            for p0 in 0..states {
                let mut rhs_acc: Vec<Symbol> = Vec::new();
                expand(
                    &p.rhs,
                    p0,
                    p0,
                    p.lhs,
                    states,
                    &delta,
                    &triple,
                    &mut rhs_acc,
                    &mut productions,
                );
            }
        }
        for &i in x.initial() {
            for &f in x.finals() {
                productions.push(Production {
                    lhs: start,
                    rhs: vec![Symbol::N(triple(i, g.start(), f))],
                });
            }
        }
        Ok(Cfg::new(g.alphabet(), names, start, productions)?.trim_useless())
    }

    /// `L(x)·L(self)` or `L(self)·L(x)` depending on `side`.
    pub fn concat_rational(&self, x: &Nfa, side: ConcatSide) -> Result<Cfg, GrammarError> {
        if self.alphabet() != x.alphabet() {
            return Err(GrammarError::AlphabetMismatch);
        }
        let offset = self.num_nonterminals();
        // Right-linear grammar for L(x): one nonterminal per state.
        let state_nt = |s: usize| Symbol::N(offset + s);
        let entry = offset + x.num_states();
        let start = entry + 1;
        let mut names: Vec<String> = (0..offset).map(|k| self.name(k).to_string()).collect();
        names.extend((0..x.num_states()).map(|s| format!("Q{s}")));
        names.push("I".into());
        names.push("S".into());

        let mut productions = self.productions().to_vec();
        for &(s, label, d) in x.transitions() {
            let mut rhs = Vec::new();
            if let Some(l) = label {
                rhs.push(Symbol::T(l));
            }
            rhs.push(state_nt(d));
            productions.push(Production {
                lhs: offset + s,
                rhs,
            });
        }
        for &f in x.finals() {
            productions.push(Production {
                lhs: offset + f,
                rhs: vec![],
            });
        }
        for &i in x.initial() {
            productions.push(Production {
                lhs: entry,
                rhs: vec![state_nt(i)],
            });
        }
        let rhs = match side {
            ConcatSide::Right => vec![Symbol::N(self.start()), Symbol::N(entry)],
            ConcatSide::Left => vec![Symbol::N(entry), Symbol::N(self.start())],
        };
        productions.push(Production { lhs: start, rhs });
        Ok(Cfg::new(self.alphabet(), names, start, productions)?.trim_useless())
    }

    /// Image grammar under the monoid homomorphism induced by `h`: every
    /// terminal letter is replaced by its image word.
    pub fn substitute(&self, h: &Substitution) -> Result<Cfg, GrammarError> {
        if self.alphabet() != h.source() {
            return Err(GrammarError::AlphabetMismatch);
        }
        let productions = self
            .productions()
            .iter()
            .map(|p| Production {
                lhs: p.lhs,
                rhs: p
                    .rhs
                    .iter()
                    .flat_map(|s| match *s {
                        Symbol::N(k) => vec![Symbol::N(k)],
                        Symbol::T(l) => h
                            .image_of(l)
                            .letters()
                            .iter()
                            .map(|&m| Symbol::T(m))
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        Cfg::new(
            h.target(),
            (0..self.num_nonterminals())
                .map(|k| self.name(k).to_string())
                .collect(),
            self.start(),
            productions,
        )
    }

    /// Grammar–transducer product: `L(out) = T(L(self))`, the set of outputs
    /// of accepting runs of `t` over words of the language.
    pub fn transduce(&self, t: &Transducer) -> Result<Cfg, GrammarError> {
        if self.alphabet() != t.input() {
            return Err(GrammarError::AlphabetMismatch);
        }
        let g = self.trim_useless();
        let n = g.num_nonterminals();
        let states = t.num_states();
        if states == 0 {
            return Ok(Cfg::empty(t.output()));
        }
        let triple = |p: usize, a: usize, q: usize| (p * n + a) * states + q;
        let start = n * states * states;
        let mut names: Vec<String> = Vec::with_capacity(start + 1);
        for p in 0..states {
            for a in 0..n {
                for q in 0..states {
                    names.push(format!("({p},{},{q})", g.name(a)));
                }
            }
        }
        names.push("S".into());

        let mut productions = Vec::new();
        for p in g.productions() {
            for p0 in 0..states {
                let mut rhs_acc: Vec<Symbol> = Vec::new();
                expand_transduce(
                    &p.rhs,
                    p0,
                    p0,
                    p.lhs,
                    states,
                    t,
                    &triple,
                    &mut rhs_acc,
                    &mut productions,
                );
            }
        }
        for &i in t.initial() {
            for &f in t.finals() {
                productions.push(Production {
                    lhs: start,
                    rhs: vec![Symbol::N(triple(i, g.start(), f))],
                });
            }
        }
        Ok(Cfg::new(t.output(), names, start, productions)?.trim_useless())
    }
}

#[allow(clippy::too_many_arguments)]
fn expand(
    rhs: &[Symbol],
    p0: usize,
    current: usize,
    lhs: usize,
    states: usize,
    delta: &BTreeMap<(usize, Letter), Vec<usize>>,
    triple: &impl Fn(usize, usize, usize) -> usize,
    rhs_acc: &mut Vec<Symbol>,
    out: &mut Vec<Production>,
) {
    match rhs.split_first() {
        None => out.push(Production {
            lhs: triple(p0, lhs, current),
            rhs: rhs_acc.clone(),
        }),
        Some((Symbol::T(l), rest)) => {
            if let Some(targets) = delta.get(&(current, *l)) {
                for &q in targets {
                    rhs_acc.push(Symbol::T(*l));
                    expand(rest, p0, q, lhs, states, delta, triple, rhs_acc, out);
                    rhs_acc.pop();
                }
            }
        }
        Some((Symbol::N(b), rest)) => {
            for q in 0..states {
                rhs_acc.push(Symbol::N(triple(current, *b, q)));
                expand(rest, p0, q, lhs, states, delta, triple, rhs_acc, out);
                rhs_acc.pop();
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn expand_transduce(
    rhs: &[Symbol],
    p0: usize,
    current: usize,
    lhs: usize,
    states: usize,
    t: &Transducer,
    triple: &impl Fn(usize, usize, usize) -> usize,
    rhs_acc: &mut Vec<Symbol>,
    out: &mut Vec<Production>,
) {
    match rhs.split_first() {
        None => out.push(Production {
            lhs: triple(p0, lhs, current),
            rhs: rhs_acc.clone(),
        }),
        Some((Symbol::T(l), rest)) => {
            for (output, q) in t.moves(current, *l) {
                let before = rhs_acc.len();
                rhs_acc.extend(output.letters().iter().map(|&m| Symbol::T(m)));
                expand_transduce(rest, p0, q, lhs, states, t, triple, rhs_acc, out);
                rhs_acc.truncate(before);
            }
        }
        Some((Symbol::N(b), rest)) => {
            for q in 0..states {
                rhs_acc.push(Symbol::N(triple(current, *b, q)));
                expand_transduce(rest, p0, q, lhs, states, t, triple, rhs_acc, out);
                rhs_acc.pop();
            }
        }
    }
}

/// Alphabet substitution compatible with the involution by construction:
/// images are given for positive letters only, and `h(-l) = h(l)⁻¹`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    source: InvolutiveAlphabet,
    target: InvolutiveAlphabet,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(
        source: InvolutiveAlphabet,
        target: InvolutiveAlphabet,
        images: Vec<Word>,
    ) -> Result<Self, GrammarError> {
        if images.len() != source.rank() as usize {
            return Err(GrammarError::BadSubstitution {
                expected: source.rank(),
                got: images.len(),
            });
        }
        if images.iter().any(|w| w.alphabet() != target) {
            return Err(GrammarError::AlphabetMismatch);
        }
        Ok(Substitution {
            source,
            target,
            images,
        })
    }

    pub fn identity(alphabet: InvolutiveAlphabet) -> Substitution {
        let images = alphabet
            .positive_letters()
            .map(|l| alphabet.word(&[l]).expect("letter in range"))
            .collect();
        Substitution {
            source: alphabet,
            target: alphabet,
            images,
        }
    }

    pub fn source(&self) -> InvolutiveAlphabet {
        self.source
    }

    pub fn target(&self) -> InvolutiveAlphabet {
        self.target
    }

    pub fn image_of(&self, letter: Letter) -> Word {
        let img = &self.images[letter.unsigned_abs() as usize - 1];
        if letter > 0 {
            img.clone()
        } else {
            img.inverse()
        }
    }

    pub fn apply_word(&self, word: &Word) -> Word {
        let mut letters = Vec::new();
        for &l in word.letters() {
            letters.extend_from_slice(self.image_of(l).letters());
        }
        Word::new(self.target, letters).expect("images validated")
    }
}

/// Finite-state transducer with letter input and word output on each
/// transition. Input and output alphabets may differ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transducer {
    input: InvolutiveAlphabet,
    output: InvolutiveAlphabet,
    num_states: usize,
    transitions: Vec<(usize, Letter, Word, usize)>,
    initial: Vec<usize>,
    finals: Vec<usize>,
}

impl Transducer {
    pub fn new(
        input: InvolutiveAlphabet,
        output: InvolutiveAlphabet,
        num_states: usize,
        transitions: Vec<(usize, Letter, Word, usize)>,
        initial: Vec<usize>,
        finals: Vec<usize>,
    ) -> Result<Self, GrammarError> {
        for (s, l, w, d) in &transitions {
            if *s >= num_states || *d >= num_states {
                return Err(GrammarError::BadTransducer(format!(
                    "transition endpoint out of range ({s} -> {d})"
                )));
            }
            if !input.contains(*l) {
                return Err(GrammarError::BadTransducer(format!("input letter {l}")));
            }
            if w.alphabet() != output {
                return Err(GrammarError::BadTransducer(
                    "output word over wrong alphabet".into(),
                ));
            }
        }
        if initial.iter().chain(&finals).any(|&s| s >= num_states) {
            return Err(GrammarError::BadTransducer(
                "initial/final state out of range".into(),
            ));
        }
        Ok(Transducer {
            input,
            output,
            num_states,
            transitions,
            initial,
            finals,
        })
    }

    /// Single-state transducer rewriting each letter by a substitution.
    pub fn from_substitution(h: &Substitution) -> Transducer {
        let transitions = h
            .source()
            .letters()
            .map(|l| (0, l, h.image_of(l), 0))
            .collect();
        Transducer {
            input: h.source(),
            output: h.target(),
            num_states: 1,
            transitions,
            initial: vec![0],
            finals: vec![0],
        }
    }

    pub fn input(&self) -> InvolutiveAlphabet {
        self.input
    }

    pub fn output(&self) -> InvolutiveAlphabet {
        self.output
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn moves(&self, state: usize, letter: Letter) -> Vec<(&Word, usize)> {
        self.transitions
            .iter()
            .filter(|(s, l, _, _)| *s == state && *l == letter)
            .map(|(_, _, w, d)| (w, *d))
            .collect()
    }

    /// Deterministic simulation from `from`; `None` if some step has no
    /// unique applicable transition.
    pub fn run(&self, word: &Word, from: usize) -> Option<(Word, usize)> {
        let mut state = from;
        let mut output: Vec<Letter> = Vec::new();
        for &l in word.letters() {
            let moves = self.moves(state, l);
            if moves.len() != 1 {
                return None;
            }
            output.extend_from_slice(moves[0].0.letters());
            state = moves[0].1;
        }
        Some((
            Word::new(self.output, output).expect("validated outputs"),
            state,
        ))
    }
}
