//! Finite automata over involutive alphabets.
//!
//! Rational languages represent rational subsets of a free group through the
//! canonical surjection. Benois saturation adds epsilon transitions along
//! cancelling paths so that, intersected with the reduced-word automaton,
//! an automaton accepts exactly the reduced representatives of its image.
//!
//! Automata are never determinized or minimized here; the official equality
//! used by tests is bounded-language equality (enumerate and compare up to a
//! length bound). `trim` runs after every constructor to keep state counts
//! small.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::words::{InvolutiveAlphabet, Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet mismatch between automata")]
    AlphabetMismatch,
    #[error("transition endpoint {0} out of range (have {1} states)")]
    BadState(usize, usize),
    #[error("label {0} is not a letter of the alphabet")]
    BadLabel(Letter),
}

/// Transition label: a letter or epsilon.
pub type Label = Option<Letter>;

/// Nondeterministic finite automaton with epsilon moves. States are dense
/// integer ids.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Nfa {
    alphabet: InvolutiveAlphabet,
    num_states: usize,
    transitions: BTreeSet<(usize, Label, usize)>,
    initial: BTreeSet<usize>,
    finals: BTreeSet<usize>,
}

impl Nfa {
    pub fn new(
        alphabet: InvolutiveAlphabet,
        num_states: usize,
        transitions: impl IntoIterator<Item = (usize, Label, usize)>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self, AutomatonError> {
        let transitions: BTreeSet<_> = transitions.into_iter().collect();
        let initial: BTreeSet<_> = initial.into_iter().collect();
        let finals: BTreeSet<_> = finals.into_iter().collect();
        for &(src, label, dst) in &transitions {
            if src >= num_states {
                return Err(AutomatonError::BadState(src, num_states));
            }
            if dst >= num_states {
                return Err(AutomatonError::BadState(dst, num_states));
            }
            if let Some(l) = label {
                if !alphabet.contains(l) {
                    return Err(AutomatonError::BadLabel(l));
                }
            }
        }
        for &s in initial.iter().chain(&finals) {
            if s >= num_states {
                return Err(AutomatonError::BadState(s, num_states));
            }
        }
        Ok(Nfa {
            alphabet,
            num_states,
            transitions,
            initial,
            finals,
        })
    }

    /// The automaton accepting the empty language.
    pub fn empty(alphabet: InvolutiveAlphabet) -> Self {
        Nfa {
            alphabet,
            num_states: 0,
            transitions: BTreeSet::new(),
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
        }
    }

    /// Accepts exactly `{w}`.
    pub fn literal(word: &Word) -> Self {
        let n = word.len() + 1;
        let transitions = word
            .letters()
            .iter()
            .enumerate()
            .map(|(i, &l)| (i, Some(l), i + 1))
            .collect();
        Nfa {
            alphabet: word.alphabet(),
            num_states: n,
            transitions,
            initial: BTreeSet::from([0]),
            finals: BTreeSet::from([n - 1]),
        }
    }

    /// Accepts every word over the alphabet.
    pub fn everything(alphabet: InvolutiveAlphabet) -> Self {
        let transitions = alphabet.letters().map(|l| (0, Some(l), 0)).collect();
        Nfa {
            alphabet,
            num_states: 1,
            transitions,
            initial: BTreeSet::from([0]),
            finals: BTreeSet::from([0]),
        }
    }

    pub fn alphabet(&self) -> InvolutiveAlphabet {
        self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn transitions(&self) -> impl Iterator<Item = &(usize, Label, usize)> {
        self.transitions.iter()
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    fn outgoing(&self, state: usize) -> impl Iterator<Item = &(usize, Label, usize)> {
        self.transitions
            .range((state, None, 0)..(state + 1, None, 0))
    }

    pub fn union(&self, other: &Nfa) -> Result<Nfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let offset = self.num_states;
        let mut transitions = self.transitions.clone();
        transitions.extend(
            other
                .transitions
                .iter()
                .map(|&(s, l, d)| (s + offset, l, d + offset)),
        );
        let initial = self
            .initial
            .iter()
            .copied()
            .chain(other.initial.iter().map(|&s| s + offset))
            .collect();
        let finals = self
            .finals
            .iter()
            .copied()
            .chain(other.finals.iter().map(|&s| s + offset))
            .collect();
        Ok(Nfa {
            alphabet: self.alphabet,
            num_states: self.num_states + other.num_states,
            transitions,
            initial,
            finals,
        }
        .trim())
    }

    pub fn concat(&self, other: &Nfa) -> Result<Nfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let offset = self.num_states;
        let mut transitions = self.transitions.clone();
        transitions.extend(
            other
                .transitions
                .iter()
                .map(|&(s, l, d)| (s + offset, l, d + offset)),
        );
        for &f in &self.finals {
            for &i in &other.initial {
                transitions.insert((f, None, i + offset));
            }
        }
        Ok(Nfa {
            alphabet: self.alphabet,
            num_states: self.num_states + other.num_states,
            transitions,
            initial: self.initial.clone(),
            finals: other.finals.iter().map(|&s| s + offset).collect(),
        }
        .trim())
    }

    pub fn star(&self) -> Nfa {
        let hub = self.num_states;
        let mut transitions = self.transitions.clone();
        for &i in &self.initial {
            transitions.insert((hub, None, i));
        }
        for &f in &self.finals {
            transitions.insert((f, None, hub));
        }
        Nfa {
            alphabet: self.alphabet,
            num_states: self.num_states + 1,
            transitions,
            initial: BTreeSet::from([hub]),
            finals: BTreeSet::from([hub]),
        }
        .trim()
    }

    fn eps_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closed = seed.clone();
        let mut queue: VecDeque<usize> = seed.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for &(_, label, dst) in self.outgoing(s) {
                if label.is_none() && closed.insert(dst) {
                    queue.push_back(dst);
                }
            }
        }
        closed
    }

    fn step(&self, states: &BTreeSet<usize>, letter: Letter) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &s in states {
            for &(_, label, dst) in self.outgoing(s) {
                if label == Some(letter) {
                    next.insert(dst);
                }
            }
        }
        self.eps_closure(&next)
    }

    /// Epsilon-closure subset simulation.
    pub fn accepts(&self, word: &Word) -> bool {
        let mut current = self.eps_closure(&self.initial);
        for &l in word.letters() {
            if current.is_empty() {
                return false;
            }
            current = self.step(&current, l);
        }
        current.iter().any(|s| self.finals.contains(s))
    }

    /// Keeps states on some initial→final path and renumbers densely.
    pub fn trim(&self) -> Nfa {
        let forward = self.reach(&self.initial, false);
        let backward = self.reach(&self.finals, true);
        let keep: Vec<usize> = (0..self.num_states)
            .filter(|s| forward.contains(s) && backward.contains(s))
            .collect();
        let index: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let transitions = self
            .transitions
            .iter()
            .filter_map(|&(s, l, d)| Some((*index.get(&s)?, l, *index.get(&d)?)))
            .collect();
        Nfa {
            alphabet: self.alphabet,
            num_states: keep.len(),
            transitions,
            initial: self
                .initial
                .iter()
                .filter_map(|s| index.get(s))
                .copied()
                .collect(),
            finals: self
                .finals
                .iter()
                .filter_map(|s| index.get(s))
                .copied()
                .collect(),
        }
    }

    fn reach(&self, seed: &BTreeSet<usize>, reversed: bool) -> BTreeSet<usize> {
        let mut seen = seed.clone();
        let mut queue: VecDeque<usize> = seed.iter().copied().collect();
        let edges: Vec<(usize, usize)> = self
            .transitions
            .iter()
            .map(|&(s, _, d)| if reversed { (d, s) } else { (s, d) })
            .collect();
        while let Some(s) = queue.pop_front() {
            for &(src, dst) in &edges {
                if src == s && seen.insert(dst) {
                    queue.push_back(dst);
                }
            }
        }
        seen
    }

    pub fn is_empty(&self) -> bool {
        let trimmed = self.trim();
        trimmed.initial.is_empty() || trimmed.finals.is_empty()
    }

    /// Product construction; epsilon moves advance one side at a time.
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        let mut transitions = BTreeSet::new();
        for &p in &self.initial {
            for &q in &other.initial {
                let next = index.len();
                index.entry((p, q)).or_insert_with(|| {
                    queue.push_back((p, q));
                    next
                });
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let src = index[&(p, q)];
            let mut targets: Vec<((usize, usize), Label)> = Vec::new();
            for &(_, label, d) in self.outgoing(p) {
                match label {
                    None => targets.push(((d, q), None)),
                    Some(l) => {
                        for &(_, label2, d2) in other.outgoing(q) {
                            if label2 == Some(l) {
                                targets.push(((d, d2), Some(l)));
                            }
                        }
                    }
                }
            }
            for &(_, label2, d2) in other.outgoing(q) {
                if label2.is_none() {
                    targets.push(((p, d2), None));
                }
            }
            for (pair, label) in targets {
                let next = index.len();
                let dst = *index.entry(pair).or_insert_with(|| {
                    queue.push_back(pair);
                    next
                });
                transitions.insert((src, label, dst));
            }
        }
        let finals = index
            .iter()
            .filter(|((p, q), _)| self.finals.contains(p) && other.finals.contains(q))
            .map(|(_, &id)| id)
            .collect();
        let initial = index
            .iter()
            .filter(|((p, q), _)| self.initial.contains(p) && other.initial.contains(q))
            .map(|(_, &id)| id)
            .collect();
        Ok(Nfa {
            alphabet: self.alphabet,
            num_states: index.len(),
            transitions,
            initial,
            finals,
        }
        .trim())
    }

    /// Replaces epsilon moves: `p →a q` whenever `p ⇒*ε r →a s ⇒*ε q`;
    /// a state becomes final when its closure meets a final state.
    pub fn eliminate_epsilon(&self) -> Nfa {
        let closures: Vec<BTreeSet<usize>> = (0..self.num_states)
            .map(|s| self.eps_closure(&BTreeSet::from([s])))
            .collect();
        let mut transitions = BTreeSet::new();
        let mut finals = BTreeSet::new();
        for s in 0..self.num_states {
            if closures[s].iter().any(|t| self.finals.contains(t)) {
                finals.insert(s);
            }
            for &r in &closures[s] {
                for &(_, label, dst) in self.outgoing(r) {
                    if label.is_some() {
                        transitions.insert((s, label, dst));
                    }
                }
            }
        }
        Nfa {
            alphabet: self.alphabet,
            num_states: self.num_states,
            transitions,
            initial: self.initial.clone(),
            finals,
        }
        .trim()
    }

    /// Benois saturation: repeatedly add `ε: p → q` whenever
    /// `p →a r ⇒*ε r' →a⁻¹ q`, until a fixpoint. Among reduced words, the
    /// result accepts exactly the reduced forms of the accepted words.
    ///
    /// Epsilon reachability is recomputed per round over a boolean matrix:
    /// O(states³·rounds), fine at desk scale.
    pub fn benois_saturate(&self) -> Nfa {
        let n = self.num_states;
        let mut eps: Vec<Vec<bool>> = vec![vec![false; n]; n];
        for &(s, label, d) in &self.transitions {
            if label.is_none() {
                eps[s][d] = true;
            }
        }
        let letter_transitions: Vec<(usize, Letter, usize)> = self
            .transitions
            .iter()
            .filter_map(|&(s, l, d)| l.map(|l| (s, l, d)))
            .collect();
        loop {
            // Reflexive-transitive closure of the current epsilon edges.
            let mut closure = eps.clone();
            for (i, row) in closure.iter_mut().enumerate() {
                row[i] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    if closure[i][k] {
                        for j in 0..n {
                            if closure[k][j] {
                                closure[i][j] = true;
                            }
                        }
                    }
                }
            }
            let mut changed = false;
            for &(p, a, r) in &letter_transitions {
                for &(r2, b, q) in &letter_transitions {
                    if b == -a && closure[r][r2] && !closure[p][q] && !eps[p][q] {
                        eps[p][q] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut transitions = self.transitions.clone();
        for (p, row) in eps.iter().enumerate() {
            for (q, &on) in row.iter().enumerate() {
                if on {
                    transitions.insert((p, None, q));
                }
            }
        }
        Nfa {
            alphabet: self.alphabet,
            num_states: n,
            transitions,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
        }
    }

    /// All accepted words of length ≤ `max_len`, in length-lexicographic
    /// order by the canonical letter order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let start = self.eps_closure(&self.initial);
        if start.is_empty() {
            return out;
        }
        let mut frontier: Vec<(Vec<Letter>, BTreeSet<usize>)> = vec![(Vec::new(), start)];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (letters, states) in &frontier {
                if states.iter().any(|s| self.finals.contains(s)) {
                    out.push(
                        Word::new(self.alphabet, letters.clone())
                            .expect("enumerated letters are alphabet letters"),
                    );
                }
                if len < max_len {
                    for l in self.alphabet.letters() {
                        let stepped = self.step(states, l);
                        if !stepped.is_empty() {
                            let mut ext = letters.clone();
                            ext.push(l);
                            next.push((ext, stepped));
                        }
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Bounded-language equality: the official equality for rational parts.
    pub fn bounded_language_eq(&self, other: &Nfa, max_len: usize) -> bool {
        let a: BTreeSet<Word> = self.enumerate(max_len).into_iter().collect();
        let b: BTreeSet<Word> = other.enumerate(max_len).into_iter().collect();
        a == b
    }

    /// Adjacency text: `states`, `initial`, `final` headers, then one
    /// transition per line as `src label dst` with `eps` for epsilon.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = format!("states {}\n", self.num_states);
        let fmt_set = |set: &BTreeSet<usize>| {
            set.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!("initial {}\n", fmt_set(&self.initial)));
        out.push_str(&format!("final {}\n", fmt_set(&self.finals)));
        for &(s, label, d) in &self.transitions {
            let label = match label {
                None => "eps".to_string(),
                Some(l) => crate::words::format_letter(self.alphabet, l),
            };
            out.push_str(&format!("{s} {label} {d}\n"));
        }
        out
    }
}

/// Accepts exactly the freely reduced words: one state per last letter plus
/// a start state, `2n + 1` states in total, all final.
pub fn reduced_word_automaton(alphabet: InvolutiveAlphabet) -> Nfa {
    let state_of = |l: Letter| 1 + crate::words::letter_index(l);
    let mut transitions = BTreeSet::new();
    for l in alphabet.letters() {
        transitions.insert((0, Some(l), state_of(l)));
        for m in alphabet.letters() {
            if m != -l {
                transitions.insert((state_of(l), Some(m), state_of(m)));
            }
        }
    }
    let n = 1 + 2 * alphabet.rank() as usize;
    Nfa::new(alphabet, n, transitions, [0], 0..n).expect("valid by construction")
}

/// `Red(L(x))`: saturate, intersect with the reduced words, trim.
pub fn red_language(x: &Nfa) -> Nfa {
    x.benois_saturate()
        .intersect(&reduced_word_automaton(x.alphabet()))
        .expect("same alphabet")
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_adjacency_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn ab(rank: u32) -> InvolutiveAlphabet {
        InvolutiveAlphabet::new(rank).unwrap()
    }

    fn w(rank: u32, letters: &[Letter]) -> Word {
        ab(rank).word(letters).unwrap()
    }

    fn words(nfa: &Nfa, max_len: usize) -> Vec<String> {
        nfa.enumerate(max_len)
            .iter()
            .map(|w| w.to_string())
            .collect()
    }

    #[test]
    fn literal_accepts_exactly_its_word() {
        let nfa = Nfa::literal(&w(2, &[]));
        assert!(nfa.accepts(&w(2, &[])));
        assert!(!nfa.accepts(&w(2, &[1])));
        assert_eq!(words(&nfa, 3), vec!["e"]);

        let nfa = Nfa::literal(&w(2, &[1, -2]));
        assert!(nfa.accepts(&w(2, &[1, -2])));
        assert!(!nfa.accepts(&w(2, &[1])));
    }

    #[test]
    fn union_and_concat_examples() {
        let union = Nfa::literal(&w(2, &[1]))
            .union(&Nfa::literal(&w(2, &[2])))
            .unwrap();
        assert_eq!(words(&union, 2), vec!["a1", "a2"]);

        let cat = Nfa::literal(&w(2, &[1]))
            .concat(&Nfa::literal(&w(2, &[2])))
            .unwrap();
        assert_eq!(words(&cat, 3), vec!["a1 a2"]);
    }

    #[test]
    fn star_of_a2() {
        let star = Nfa::literal(&w(2, &[2])).star();
        assert!(star.accepts(&w(2, &[])));
        assert!(star.accepts(&w(2, &[2, 2])));
        assert!(!star.accepts(&w(2, &[1])));
        assert_eq!(words(&star, 2), vec!["e", "a2", "a2 a2"]);
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let x = Nfa::literal(&w(2, &[1]));
        let y = Nfa::literal(&w(3, &[1]));
        assert_eq!(x.union(&y), Err(AutomatonError::AlphabetMismatch));
        assert_eq!(x.concat(&y), Err(AutomatonError::AlphabetMismatch));
        assert_eq!(x.intersect(&y), Err(AutomatonError::AlphabetMismatch));
    }

    #[test]
    fn intersect_examples() {
        let star1 = Nfa::literal(&w(2, &[1])).star();
        let star2 = Nfa::literal(&w(2, &[2])).star();
        let both = star1.intersect(&star2).unwrap();
        assert_eq!(words(&both, 4), vec!["e"]);

        // Idempotence at bounded scale.
        let x = star1.union(&Nfa::literal(&w(2, &[2, 1]))).unwrap();
        assert!(x.intersect(&x).unwrap().bounded_language_eq(&x, 8));

        // No unreduced word passes the reduced-word filter.
        let red = reduced_word_automaton(ab(2));
        let clash = red.intersect(&Nfa::literal(&w(2, &[1, -1]))).unwrap();
        assert!(clash.is_empty());
    }

    #[test]
    fn reduced_word_automaton_counts() {
        let red = reduced_word_automaton(ab(2));
        assert_eq!(red.num_states(), 5);
        assert!(red.accepts(&w(2, &[])));
        assert!(!red.accepts(&w(2, &[1, -1])));
        let by_len: Vec<usize> = (0..=3)
            .map(|len| {
                red.enumerate(len)
                    .iter()
                    .filter(|word| word.len() == len)
                    .count()
            })
            .collect();
        // 2n(2n−1)^(k−1) reduced words of length k ≥ 1.
        assert_eq!(by_len, vec![1, 4, 12, 36]);
        assert_eq!(red.enumerate(3).len(), 53);
    }

    #[test]
    fn saturate_never_removes_acceptance_and_is_idempotent() {
        let x = Nfa::literal(&w(2, &[1, -1]));
        let sat = x.benois_saturate();
        assert!(sat.accepts(&w(2, &[])));
        for word in x.enumerate(4) {
            assert!(sat.accepts(&word));
        }
        let again = sat.benois_saturate();
        assert_eq!(sat, again);
    }

    #[test]
    fn red_language_examples() {
        // Expected sets frozen from the reduce-and-collect oracle.
        let x = Nfa::literal(&w(2, &[1, 2, -2]));
        assert_eq!(words(&red_language(&x), 6), vec!["a1"]);

        let y = Nfa::literal(&w(2, &[]));
        assert_eq!(words(&red_language(&y), 4), vec!["e"]);

        let z = Nfa::literal(&w(2, &[1, -1, 2]));
        assert_eq!(words(&red_language(&z), 6), vec!["a2"]);

        let loops = Nfa::literal(&w(2, &[1, -1])).star();
        assert_eq!(words(&red_language(&loops), 8), vec!["e"]);
    }

    #[test]
    fn red_language_of_a2_star_is_itself() {
        let star = Nfa::literal(&w(2, &[2])).star();
        let red = red_language(&star);
        assert!(red.bounded_language_eq(&star, 8));
    }

    #[test]
    fn enumerate_is_length_lex_and_intersect_consistent() {
        let x = Nfa::literal(&w(2, &[1]))
            .union(&Nfa::literal(&w(2, &[2])))
            .unwrap()
            .star();
        let y = Nfa::literal(&w(2, &[1])).star();
        let lhs: BTreeSet<Word> = x.intersect(&y).unwrap().enumerate(5).into_iter().collect();
        let xa: BTreeSet<Word> = x.enumerate(5).into_iter().collect();
        let ya: BTreeSet<Word> = y.enumerate(5).into_iter().collect();
        let rhs: BTreeSet<Word> = xa.intersection(&ya).cloned().collect();
        assert_eq!(lhs, rhs);

        let listed = x.enumerate(2);
        let rendered: Vec<String> = listed.iter().map(|w| w.to_string()).collect();
        assert_eq!(
            rendered,
            vec!["e", "a1", "a2", "a1 a1", "a1 a2", "a2 a1", "a2 a2"]
        );
    }

    #[test]
    fn is_empty_cases() {
        let no_final = Nfa::new(ab(2), 2, [(0, Some(1), 1)], [0], []).unwrap();
        assert!(no_final.is_empty());
        assert!(no_final.trim().num_states() == 0);
        assert!(!Nfa::literal(&w(2, &[1])).is_empty());
        assert!(Nfa::empty(ab(2)).is_empty());
    }

    #[test]
    fn eliminate_epsilon_preserves_bounded_language() {
        let x = Nfa::literal(&w(2, &[1]))
            .star()
            .concat(&Nfa::literal(&w(2, &[2])))
            .unwrap();
        let noeps = x.eliminate_epsilon();
        assert!(noeps.transitions().all(|&(_, label, _)| label.is_some()));
        assert!(noeps.bounded_language_eq(&x, 7));
    }

    #[test]
    fn adjacency_text_is_deterministic() {
        let x = Nfa::literal(&parse_word(ab(2), "a1 a2-").unwrap());
        let text = x.to_adjacency_text();
        assert_eq!(text, "states 3\ninitial 0\nfinal 2\n0 a1 1\n1 a2- 2\n");
        assert_eq!(text, x.to_adjacency_text());
    }
}
