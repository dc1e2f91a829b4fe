//! Involutive alphabets, group words, free reduction and Parikh counting.
//!
//! Letters are nonzero signed integers: `i` is the `i`-th generator and `-i`
//! its formal inverse, so the involution is plain negation. An alphabet is a
//! rank `n ≥ 1` together with an optional *stable letter* convention: when
//! set, the top generator prints and parses as `t` instead of `an` (used by
//! the semidirect-product contexts).

use std::fmt;

use thiserror::Error;

/// A letter of an involutive alphabet: a signed generator index, never zero.
pub type Letter = i32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet rank must be at least 1")]
    EmptyAlphabet,
    #[error("letter {letter} is not in an alphabet of rank {rank}")]
    LetterOutOfRange { letter: Letter, rank: u32 },
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("cannot parse word token `{token}`: {reason}")]
    BadToken { token: String, reason: String },
}

/// `Ã = A ∪ A^{-1}` for a generating set `A` of size `rank`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct InvolutiveAlphabet {
    rank: u32,
    stable: bool,
}

impl InvolutiveAlphabet {
    pub fn new(rank: u32) -> Result<Self, WordError> {
        if rank == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        Ok(InvolutiveAlphabet {
            rank,
            stable: false,
        })
    }

    /// Alphabet of rank `base_rank + 1` whose top generator is the stable
    /// letter `t` of a semidirect extension.
    pub fn with_stable_letter(base_rank: u32) -> Result<Self, WordError> {
        Ok(InvolutiveAlphabet {
            rank: base_rank.checked_add(1).ok_or(WordError::EmptyAlphabet)?,
            stable: true,
        })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter != 0 && letter.unsigned_abs() <= self.rank
    }

    pub fn stable_letter(&self) -> Option<Letter> {
        self.stable.then_some(self.rank as Letter)
    }

    /// All letters in canonical order `1, -1, 2, -2, …`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        let rank = self.rank as Letter;
        (1..=rank).flat_map(|i| [i, -i])
    }

    pub fn positive_letters(&self) -> impl Iterator<Item = Letter> {
        1..=(self.rank as Letter)
    }

    pub fn empty_word(&self) -> Word {
        Word {
            alphabet: *self,
            letters: Vec::new(),
        }
    }

    pub fn word(&self, letters: &[Letter]) -> Result<Word, WordError> {
        Word::new(*self, letters.to_vec())
    }
}

/// Canonical position of a letter in Parikh vectors and orderings:
/// `1 ↦ 0, -1 ↦ 1, 2 ↦ 2, -2 ↦ 3, …`.
pub fn letter_index(letter: Letter) -> usize {
    debug_assert!(letter != 0);
    let base = (letter.unsigned_abs() as usize - 1) * 2;
    if letter > 0 {
        base
    } else {
        base + 1
    }
}

/// A word over an involutive alphabet, not necessarily reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    alphabet: InvolutiveAlphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: InvolutiveAlphabet, letters: Vec<Letter>) -> Result<Self, WordError> {
        for &l in &letters {
            if !alphabet.contains(l) {
                return Err(WordError::LetterOutOfRange {
                    letter: l,
                    rank: alphabet.rank(),
                });
            }
        }
        Ok(Word { alphabet, letters })
    }

    pub fn alphabet(&self) -> InvolutiveAlphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation. Panics if the alphabets differ.
    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(
            self.alphabet, other.alphabet,
            "concat across distinct alphabets"
        );
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    /// Formal inverse: reversed sequence with every letter negated.
    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// The unique freely reduced word equal to this one in the free group.
    /// Single left-to-right pass with a growing output buffer.
    pub fn reduce(&self) -> ReducedWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        ReducedWord(Word {
            alphabet: self.alphabet,
            letters: out,
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    /// Occurrence counts of every letter, in canonical letter order.
    pub fn parikh(&self) -> ParikhVector {
        let mut counts = vec![0u64; 2 * self.alphabet.rank() as usize];
        for &l in &self.letters {
            counts[letter_index(l)] += 1;
        }
        ParikhVector {
            alphabet: self.alphabet,
            counts,
        }
    }

    /// `letter^count` as a word.
    pub fn power(alphabet: InvolutiveAlphabet, letter: Letter, count: usize) -> Word {
        Word::new(alphabet, vec![letter; count]).expect("letter out of range")
    }
}

/// Length-lexicographic comparison key using the canonical letter order.
pub fn length_lex_key(letters: &[Letter]) -> (usize, Vec<usize>) {
    (letters.len(), letters.iter().map(|&l| letter_index(l)).collect())
}

/// A freely reduced word: no adjacent pair `l, -l`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ReducedWord(Word);

impl ReducedWord {
    pub fn as_word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn alphabet(&self) -> InvolutiveAlphabet {
        self.0.alphabet()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        length_lex_key(&self.letters).cmp(&length_lex_key(&other.letters))
    }
}

/// Parikh vector in `N^{2n}`, ordered `(n_{a1}, n_{a1^{-1}}, …, n_{an}, n_{an^{-1}})`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParikhVector {
    alphabet: InvolutiveAlphabet,
    counts: Vec<u64>,
}

impl ParikhVector {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count_of(&self, letter: Letter) -> u64 {
        self.counts[letter_index(letter)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn add(&self, other: &ParikhVector) -> ParikhVector {
        assert_eq!(self.alphabet, other.alphabet);
        ParikhVector {
            alphabet: self.alphabet,
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Renders a letter in the word syntax: `a3`, `a3-`, or `t`/`t-` for the
/// stable letter.
pub fn format_letter(alphabet: InvolutiveAlphabet, letter: Letter) -> String {
    let idx = letter.unsigned_abs();
    let base = if alphabet.stable_letter() == Some(idx as Letter) {
        "t".to_string()
    } else {
        format!("a{idx}")
    };
    if letter > 0 {
        base
    } else {
        format!("{base}-")
    }
}

pub fn format_word(word: &Word) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.letters()
        .iter()
        .map(|&l| format_letter(word.alphabet(), l))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses the whitespace-separated word syntax: generators `a1…an`, inverses
/// `a1- … an-`, `t`/`t-` when the alphabet has a stable letter, `e` for the
/// empty word (allowed anywhere, contributes nothing).
pub fn parse_word(alphabet: InvolutiveAlphabet, text: &str) -> Result<Word, WordError> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        if token == "e" {
            continue;
        }
        letters.push(parse_letter(alphabet, token)?);
    }
    Word::new(alphabet, letters)
}

pub fn parse_letter(alphabet: InvolutiveAlphabet, token: &str) -> Result<Letter, WordError> {
    let bad = |reason: &str| WordError::BadToken {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let (core, inverse) = match token.strip_suffix('-') {
        Some(core) => (core, true),
        None => (token, false),
    };
    let index: u32 = if core == "t" {
        match alphabet.stable_letter() {
            Some(t) => t as u32,
            None => return Err(bad("no stable letter in this alphabet")),
        }
    } else if let Some(digits) = core.strip_prefix('a') {
        digits
            .parse()
            .map_err(|_| bad("expected a generator index"))?
    } else {
        return Err(bad("expected `a<k>`, `a<k>-`, `t`, `t-` or `e`"));
    };
    if index == 0 || index > alphabet.rank() {
        return Err(WordError::LetterOutOfRange {
            letter: index as Letter,
            rank: alphabet.rank(),
        });
    }
    // `t` refers to the stable letter, which still parses as `a<rank>` too.
    let letter = index as Letter;
    Ok(if inverse { -letter } else { letter })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self.as_word()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn ab(rank: u32) -> InvolutiveAlphabet {
        InvolutiveAlphabet::new(rank).unwrap()
    }

    fn w(rank: u32, letters: &[Letter]) -> Word {
        ab(rank).word(letters).unwrap()
    }

    /// Independent quadratic oracle: rescan for adjacent inverse pairs until
    /// none remain.
    fn reduce_by_rescan(mut letters: Vec<Letter>) -> Vec<Letter> {
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < letters.len() {
                if letters[i] == -letters[i + 1] {
                    letters.drain(i..=i + 1);
                    changed = true;
                    if i > 0 {
                        i -= 1;
                    }
                } else {
                    i += 1;
                }
            }
            if !changed {
                return letters;
            }
        }
    }

    fn random_word(rng: &mut SplitMix64, rank: u32, max_len: usize) -> Word {
        let len = rng.below(max_len as u64 + 1) as usize;
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                let idx = rng.below(rank as u64) as Letter + 1;
                if rng.chance(1, 2) {
                    idx
                } else {
                    -idx
                }
            })
            .collect();
        Word::new(ab(rank), letters).unwrap()
    }

    #[test]
    fn rejects_empty_alphabet() {
        assert_eq!(InvolutiveAlphabet::new(0), Err(WordError::EmptyAlphabet));
    }

    #[test]
    fn rejects_out_of_range_letters() {
        assert!(matches!(
            ab(2).word(&[3]),
            Err(WordError::LetterOutOfRange { letter: 3, rank: 2 })
        ));
        assert!(ab(2).word(&[0]).is_err());
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w(2, &[]).reduce().letters(), &[] as &[Letter]);
        assert_eq!(w(2, &[1, -1]).reduce().letters(), &[] as &[Letter]);
        // Frozen from the rescan oracle.
        assert_eq!(reduce_by_rescan(vec![1, 2, -2, -1, 1]), vec![1]);
        assert_eq!(w(2, &[1, 2, -2, -1, 1]).reduce().letters(), &[1]);
    }

    #[test]
    fn reduce_matches_rescan_oracle_on_random_words() {
        let mut rng = SplitMix64::new(0x7ead);
        for _ in 0..2000 {
            let word = random_word(&mut rng, 3, 32);
            assert_eq!(
                word.reduce().letters(),
                reduce_by_rescan(word.letters().to_vec())
            );
        }
    }

    #[test]
    fn reduce_shrinks_and_preserves_parity() {
        let mut rng = SplitMix64::new(0x51de);
        for _ in 0..2000 {
            let word = random_word(&mut rng, 2, 40);
            let red = word.reduce();
            assert!(red.len() <= word.len());
            assert_eq!(red.len() % 2, word.len() % 2);
        }
    }

    #[test]
    fn reduce_is_idempotent() {
        let mut rng = SplitMix64::new(0x1de4);
        for _ in 0..2000 {
            let word = random_word(&mut rng, 3, 32);
            let once = word.reduce();
            let twice = once.as_word().reduce();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn reduce_is_a_congruence_collapse() {
        let mut rng = SplitMix64::new(0xc019);
        for _ in 0..2000 {
            let u = random_word(&mut rng, 2, 24);
            let v = random_word(&mut rng, 2, 24);
            let direct = u.concat(&v).reduce();
            let staged = u
                .reduce()
                .as_word()
                .concat(v.reduce().as_word())
                .reduce();
            assert_eq!(direct, staged);
        }
    }

    #[test]
    fn word_times_inverse_reduces_to_identity() {
        let mut rng = SplitMix64::new(0xa11);
        for _ in 0..10_000 {
            let word = random_word(&mut rng, 3, 64);
            assert!(word.concat(&word.inverse()).reduce().is_empty());
        }
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w(2, &[]).inverse().letters(), &[] as &[Letter]);
        assert_eq!(w(2, &[1]).inverse().letters(), &[-1]);
        // Definition unrolled by hand, cross-checked by the identity law.
        let word = w(2, &[1, -2]);
        assert_eq!(word.inverse().letters(), &[2, -1]);
        assert!(word.concat(&word.inverse()).reduce().is_empty());
    }

    #[test]
    fn parikh_examples() {
        assert_eq!(w(2, &[]).parikh().counts(), &[0, 0, 0, 0]);
        assert_eq!(w(2, &[1, -1, 2]).parikh().counts(), &[1, 1, 1, 0]);
        let word = w(2, &[1, -1, 2]);
        assert_eq!(word.parikh().total(), word.len() as u64);
    }

    #[test]
    fn parikh_is_additive() {
        let mut rng = SplitMix64::new(0xadd);
        for _ in 0..1000 {
            let u = random_word(&mut rng, 3, 20);
            let v = random_word(&mut rng, 3, 20);
            assert_eq!(u.concat(&v).parikh(), u.parikh().add(&v.parikh()));
        }
    }

    #[test]
    fn a2_power_words_have_exponent_count_difference() {
        // Any word equal to a2^(2^k) in the free group keeps exponent sum
        // 2^k in the a2 coordinates: entry 3 − entry 4 in 1-based terms.
        for k in 0..5u32 {
            let e = 2usize.pow(k);
            let noise = w(2, &[1, -1]);
            let word = noise.concat(&Word::power(ab(2), 2, e)).concat(&noise);
            let p = word.parikh();
            assert_eq!(p.count_of(2) as i64 - p.count_of(-2) as i64, e as i64);
        }
    }

    #[test]
    fn word_syntax_round_trip() {
        let word = w(3, &[1, -2, 3, 3]);
        assert_eq!(format_word(&word), "a1 a2- a3 a3");
        assert_eq!(parse_word(ab(3), "a1 a2- a3 a3").unwrap(), word);
        assert_eq!(parse_word(ab(3), "e").unwrap(), ab(3).empty_word());
    }

    #[test]
    fn stable_letter_syntax() {
        let alphabet = InvolutiveAlphabet::with_stable_letter(2).unwrap();
        assert_eq!(alphabet.rank(), 3);
        assert_eq!(alphabet.stable_letter(), Some(3));
        let word = parse_word(alphabet, "t- a1 t").unwrap();
        assert_eq!(word.letters(), &[-3, 1, 3]);
        assert_eq!(format_word(&word), "t- a1 t");
        assert!(parse_word(ab(2), "t").is_err());
    }

    #[test]
    fn length_lex_order() {
        let mut words = vec![w(2, &[2]), w(2, &[1, 1]), w(2, &[-1]), w(2, &[1])];
        words.sort();
        let rendered: Vec<String> = words.iter().map(format_word).collect();
        assert_eq!(rendered, vec!["a1", "a1-", "a2", "a1 a1"]);
    }
}
