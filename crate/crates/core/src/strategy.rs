//! Finite mining strategies as word rules.
//!
//! Every strategy here is a complete prefix code over {A, B}: a set of
//! terminal words such that each infinite letter sequence hits exactly one
//! terminal, together with a resolution per terminal describing the block
//! disposition at cycle end. The honest and "1+2" strategies are word rules
//! with one and five terminals respectively.

use crate::cycle::{check_accounting, CycleRecord, CycleWord, Letter};
use crate::error::{Error, Result};
use crate::params::NetworkParams;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Block disposition at the end of a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub off_a: u32,
    pub orph_a: u32,
    pub orph_pub_a: u32,
    pub off_h: u32,
    pub orph_h: u32,
}

impl Resolution {
    /// The honest branch wins (or the attacker concedes): every honest block
    /// is official, every attacker block orphaned. `published` attacker
    /// orphans are revealed to the network.
    pub fn honest_wins(word: CycleWord, published: u32) -> Self {
        Resolution {
            off_a: 0,
            orph_a: word.count_a(),
            orph_pub_a: published,
            off_h: word.count_b(),
            orph_h: 0,
        }
    }

    /// The attacker publishes a fork of `fork_len` blocks that displaces the
    /// whole honest branch; his remaining blocks stay orphaned with
    /// `published` of them revealed.
    pub fn attacker_wins(word: CycleWord, fork_len: u32, published: u32) -> Self {
        Resolution {
            off_a: fork_len,
            orph_a: word.count_a() - fork_len,
            orph_pub_a: published,
            off_h: 0,
            orph_h: word.count_b(),
        }
    }
}

/// Whether a resolution is a legal fork-choice outcome for `word`.
///
/// A cycle is one race between the attacker's branch and the honest branch,
/// both growing from the chain tip at cycle start. Either the attacker
/// publishes a fork strictly longer than the honest branch (honest miners win
/// ties), orphaning every honest block of the cycle, or the honest branch
/// stands and every attacker block is orphaned. Conceding a longer secret
/// branch is allowed: it only lowers the attacker's income.
pub fn fork_choice_legal(word: CycleWord, res: &Resolution) -> bool {
    let n_a = word.count_a();
    let n_b = word.count_b();
    if res.off_a + res.orph_a != n_a || res.off_h + res.orph_h != n_b {
        return false;
    }
    if res.orph_pub_a > res.orph_a {
        return false;
    }
    let attacker_wins = res.off_h == 0 && res.orph_h == n_b && res.off_a > n_b;
    let honest_wins = res.off_a == 0 && res.orph_h == 0 && res.off_h == n_b;
    attacker_wins || honest_wins
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Continue,
    EndCycle,
}

/// Hard bound on cycle length for custom strategies; guards accidental
/// non-terminating word rules.
pub const DEFAULT_MAX_CYCLE_LENGTH: usize = 64;

/// A finite mining strategy: deterministic controller over block arrivals.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    name: String,
    terminals: BTreeMap<CycleWord, Resolution>,
    max_cycle_length: usize,
}

impl Strategy {
    /// Cycle ends after the first block; the finder's block is official.
    pub fn honest() -> Strategy {
        let a = CycleWord::parse("A").unwrap();
        let b = CycleWord::parse("B").unwrap();
        let mut terminals = BTreeMap::new();
        terminals.insert(a, Resolution::attacker_wins(a, 1, 0));
        terminals.insert(b, Resolution::honest_wins(b, 0));
        Strategy {
            name: "honest".to_string(),
            terminals,
            max_cycle_length: 1,
        }
    }

    /// The "1+2" withholding strategy: the attacker withholds his first block
    /// and the cycle ends two blocks later, the attacker imposing his fork
    /// when it is the longer one. Terminal words: B, AAA, AAB, ABA, ABB.
    /// The attacker's losing block in ABB stays secret forever.
    pub fn one_plus_two() -> Strategy {
        let mut terminals = BTreeMap::new();
        for (text, fork_len) in [("B", 0), ("AAA", 3), ("AAB", 2), ("ABA", 2), ("ABB", 0)] {
            let word = CycleWord::parse(text).unwrap();
            let res = if fork_len > 0 {
                Resolution::attacker_wins(word, fork_len, 0)
            } else {
                Resolution::honest_wins(word, 0)
            };
            terminals.insert(word, res);
        }
        Strategy {
            name: "one-plus-two".to_string(),
            terminals,
            max_cycle_length: 3,
        }
    }

    /// Builds a strategy from explicit terminal words and resolutions.
    ///
    /// The terminals must form a complete prefix code over {A, B} up to
    /// `bound` and every resolution must pass accounting and fork-choice
    /// legality.
    pub fn from_word_rules(
        name: impl Into<String>,
        terminals: BTreeMap<CycleWord, Resolution>,
        bound: usize,
    ) -> Result<Strategy> {
        if bound > CycleWord::MAX_LEN {
            return Err(Error::BoundTooLarge(bound));
        }
        if terminals.is_empty() {
            return Err(Error::NoTerminals);
        }
        for (&word, res) in &terminals {
            if word.is_empty() {
                return Err(Error::EmptyWord);
            }
            if word.len() > bound {
                return Err(Error::WordTooLong(word.len()));
            }
            if !fork_choice_legal(word, res) {
                return Err(Error::IllegalResolution(word.to_string()));
            }
        }
        let reached = check_completeness(&terminals, CycleWord::empty(), bound)?;
        if reached != terminals.len() {
            // some terminal sits below another terminal and is never reached
            let unreachable = terminals
                .keys()
                .find(|w| terminals.keys().any(|t| t != *w && t.is_prefix_of(w)))
                .expect("unreached terminal must have a terminal prefix");
            return Err(Error::OverlappingTerminals(unreachable.to_string()));
        }
        let max_cycle_length = terminals.keys().map(|w| w.len()).max().unwrap();
        Ok(Strategy {
            name: name.into(),
            terminals,
            max_cycle_length,
        })
    }

    /// Loads a word-rule strategy from a text file.
    ///
    /// One record per line with a header, fields mirroring the cycle CSV
    /// columns: `word,off_a,orph_a,orph_pub_a,off_h,orph_h`. Blank lines and
    /// `#` comments are skipped.
    pub fn from_rules_file(path: impl AsRef<Path>) -> Result<Strategy> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "word-rule".to_string());
        let mut terminals = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if idx == 0 && line.starts_with("word") {
                continue; // header
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 6 {
                return Err(Error::MalformedRuleRecord {
                    line: idx + 1,
                    reason: format!("expected 6 fields, got {}", fields.len()),
                });
            }
            let word = CycleWord::parse(fields[0])?;
            let mut counts = [0u32; 5];
            for (slot, field) in counts.iter_mut().zip(&fields[1..]) {
                *slot = field.parse().map_err(|_| Error::MalformedRuleRecord {
                    line: idx + 1,
                    reason: format!("invalid count {field:?}"),
                })?;
            }
            let res = Resolution {
                off_a: counts[0],
                orph_a: counts[1],
                orph_pub_a: counts[2],
                off_h: counts[3],
                orph_h: counts[4],
            };
            if terminals.insert(word, res).is_some() {
                return Err(Error::MalformedRuleRecord {
                    line: idx + 1,
                    reason: format!("duplicate terminal {word}"),
                });
            }
        }
        Strategy::from_word_rules(name, terminals, DEFAULT_MAX_CYCLE_LENGTH)
    }

    /// Serializes the terminal words in the rules-file format.
    pub fn to_rules_text(&self) -> String {
        let mut out = String::from("word,off_a,orph_a,orph_pub_a,off_h,orph_h\n");
        for (word, res) in &self.terminals {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                word, res.off_a, res.orph_a, res.orph_pub_a, res.off_h, res.orph_h
            )
            .unwrap();
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_cycle_length(&self) -> usize {
        self.max_cycle_length
    }

    pub fn step(&self, prefix: CycleWord) -> Decision {
        if self.terminals.contains_key(&prefix) {
            Decision::EndCycle
        } else {
            Decision::Continue
        }
    }

    pub fn resolve(&self, word: CycleWord) -> Option<Resolution> {
        self.terminals.get(&word).copied()
    }

    pub fn terminals(&self) -> impl Iterator<Item = (CycleWord, Resolution)> + '_ {
        self.terminals.iter().map(|(&w, &r)| (w, r))
    }

    pub fn terminal_words(&self) -> Vec<CycleWord> {
        self.terminals.keys().copied().collect()
    }

    /// Same terminal words with the same official/orphan outcome, letter for
    /// letter (reported orphans aside, both earn identically at x = 0).
    pub fn outcome_equivalent(&self, other: &Strategy) -> bool {
        self.terminals.len() == other.terminals.len()
            && self
                .terminals()
                .zip(other.terminals())
                .all(|((w1, r1), (w2, r2))| {
                    w1 == w2
                        && r1.off_a == r2.off_a
                        && r1.off_h == r2.off_h
                        && r1.orph_h == r2.orph_h
                })
    }
}

fn check_completeness(
    terminals: &BTreeMap<CycleWord, Resolution>,
    prefix: CycleWord,
    bound: usize,
) -> Result<usize> {
    if !prefix.is_empty() && terminals.contains_key(&prefix) {
        return Ok(1);
    }
    if prefix.len() == bound {
        return Err(Error::IncompletePrefixCode(format!("{prefix}...")));
    }
    let a = check_completeness(terminals, prefix.pushed(Letter::A), bound)?;
    let b = check_completeness(terminals, prefix.pushed(Letter::B), bound)?;
    Ok(a + b)
}

/// Materializes a record from a terminal word and its resolution.
pub fn build_record(
    word: CycleWord,
    res: Resolution,
    orphan_reward_x: f64,
    duration: Option<f64>,
) -> CycleRecord {
    let g = res.off_a;
    let h = res.off_a + res.off_h;
    let d = h + res.orph_h + res.orph_pub_a;
    let rec = CycleRecord {
        word,
        g,
        h,
        d,
        duration,
        off_a: res.off_a,
        orph_a: res.orph_a,
        orph_pub_a: res.orph_pub_a,
        off_h: res.off_h,
        orph_h: res.orph_h,
        reward: g as f64 + orphan_reward_x * res.orph_pub_a as f64,
    };
    debug_assert!(check_accounting(&rec));
    rec
}

/// Plays one cycle of `strategy` against a random block-arrival stream.
///
/// Letter `i` is A with probability q independently. When `timed`, each block
/// takes an exponential time at the network rate `1/tau0` (reference
/// difficulty) and the record carries the summed duration.
pub fn run_cycle(
    strategy: &Strategy,
    params: &NetworkParams,
    rng: &mut impl Rng,
    timed: bool,
) -> CycleRecord {
    let rate = if timed { Some(1.0 / params.tau0) } else { None };
    run_cycle_at_rate(strategy, params, rng, rate)
}

/// As [`run_cycle`] but at an explicit total block-discovery rate, as needed
/// when the difficulty has drifted from its reference value.
pub fn run_cycle_at_rate(
    strategy: &Strategy,
    params: &NetworkParams,
    rng: &mut impl Rng,
    rate: Option<f64>,
) -> CycleRecord {
    let mut word = CycleWord::empty();
    let mut elapsed = 0.0;
    loop {
        let letter = if rng.random_bool(params.q()) {
            Letter::A
        } else {
            Letter::B
        };
        if let Some(rate) = rate {
            elapsed += sample_exponential(rng, rate);
        }
        word = word.pushed(letter);
        if strategy.step(word) == Decision::EndCycle {
            let res = strategy
                .resolve(word)
                .expect("EndCycle implies a terminal resolution");
            let duration = rate.map(|_| elapsed);
            return build_record(word, res, params.orphan_reward_x, duration);
        }
        assert!(
            word.len() < strategy.max_cycle_length(),
            "validated strategy must terminate within its bound"
        );
    }
}

/// Inverse-CDF exponential draw; one uniform per block keeps replay across
/// platforms tied only to the uniform stream.
pub fn sample_exponential(rng: &mut impl Rng, rate: f64) -> f64 {
    let u: f64 = rng.random();
    -(-u).ln_1p() / rate
}

/// Uniformly messy but always legal word-rule strategy, for adversarial
/// property testing: a random complete prefix code up to `max_depth` with a
/// random legal resolution per terminal.
pub fn random_strategy(rng: &mut impl Rng, max_depth: usize, name: impl Into<String>) -> Strategy {
    assert!((1..=CycleWord::MAX_LEN).contains(&max_depth));
    let mut terminals = BTreeMap::new();
    grow(rng, CycleWord::empty(), max_depth, &mut terminals);
    Strategy::from_word_rules(name, terminals, max_depth)
        .expect("generated code is complete and legal by construction")
}

fn grow(
    rng: &mut impl Rng,
    prefix: CycleWord,
    max_depth: usize,
    terminals: &mut BTreeMap<CycleWord, Resolution>,
) {
    if !prefix.is_empty() && (prefix.len() == max_depth || rng.random_bool(0.5)) {
        terminals.insert(prefix, random_resolution(rng, prefix));
        return;
    }
    grow(rng, prefix.pushed(Letter::A), max_depth, terminals);
    grow(rng, prefix.pushed(Letter::B), max_depth, terminals);
}

fn random_resolution(rng: &mut impl Rng, word: CycleWord) -> Resolution {
    let n_a = word.count_a();
    let n_b = word.count_b();
    if n_a > n_b && rng.random_bool(0.5) {
        let fork_len = rng.random_range(n_b + 1..=n_a);
        let published = rng.random_range(0..=n_a - fork_len);
        Resolution::attacker_wins(word, fork_len, published)
    } else {
        let published = rng.random_range(0..=n_a);
        Resolution::honest_wins(word, published)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn word(text: &str) -> CycleWord {
        CycleWord::parse(text).unwrap()
    }

    #[test]
    fn honest_resolutions() {
        let honest = Strategy::honest();
        let a = build_record(word("A"), honest.resolve(word("A")).unwrap(), 0.0, None);
        assert_eq!((a.g, a.h, a.d), (1, 1, 1));
        let b = build_record(word("B"), honest.resolve(word("B")).unwrap(), 0.0, None);
        assert_eq!((b.g, b.h, b.d), (0, 1, 1));
        assert_eq!(a.orph_a + a.orph_h + b.orph_a + b.orph_h, 0);
    }

    #[test]
    fn one_plus_two_universe() {
        let strat = Strategy::one_plus_two();
        let words: Vec<String> = strat
            .terminal_words()
            .iter()
            .map(|w| w.to_string())
            .collect();
        let mut expected = vec!["B", "AAA", "AAB", "ABA", "ABB"];
        expected.sort();
        let mut got = words.clone();
        got.sort();
        assert_eq!(got, expected);

        let rec = |t: &str| build_record(word(t), strat.resolve(word(t)).unwrap(), 0.0, None);
        assert_eq!((rec("B").g, rec("B").h, rec("B").d), (0, 1, 1));
        assert_eq!((rec("AAA").g, rec("AAA").h, rec("AAA").d), (3, 3, 3));
        assert_eq!((rec("AAB").g, rec("AAB").h, rec("AAB").d), (2, 2, 3));
        assert_eq!((rec("ABA").g, rec("ABA").h, rec("ABA").d), (2, 2, 3));
        assert_eq!((rec("ABB").g, rec("ABB").h, rec("ABB").d), (0, 2, 2));
        // the losing secret block in ABB is never revealed
        assert_eq!(rec("ABB").orph_pub_a, 0);
        assert_eq!(rec("ABB").orph_a, 1);
    }

    #[test]
    fn fork_choice_legality() {
        // the built-in strategies are legal on every terminal
        for strat in [Strategy::honest(), Strategy::one_plus_two()] {
            for (w, res) in strat.terminals() {
                assert!(fork_choice_legal(w, &res), "{w}");
            }
        }
        // a mixed official chain within one race is not
        let abb = word("ABB");
        let mixed = Resolution {
            off_a: 1,
            orph_a: 0,
            orph_pub_a: 0,
            off_h: 2,
            orph_h: 0,
        };
        assert!(!fork_choice_legal(abb, &mixed));
        // a one-block fork cannot displace two honest blocks
        let short_fork = Resolution {
            off_a: 1,
            orph_a: 0,
            orph_pub_a: 0,
            off_h: 0,
            orph_h: 2,
        };
        assert!(!fork_choice_legal(abb, &short_fork));
        // conceding own blocks is legal (degenerate but allowed)
        let concede = Resolution::honest_wins(word("AAB"), 1);
        assert!(fork_choice_legal(word("AAB"), &concede));
    }

    #[test]
    fn word_rule_rejects_incomplete_code() {
        let mut terminals = BTreeMap::new();
        terminals.insert(word("A"), Resolution::attacker_wins(word("A"), 1, 0));
        // path B... never terminates
        let err = Strategy::from_word_rules("partial", terminals, 4).unwrap_err();
        assert!(matches!(err, Error::IncompletePrefixCode(_)));
    }

    #[test]
    fn word_rule_rejects_overlapping_terminals() {
        let mut terminals = BTreeMap::new();
        terminals.insert(word("A"), Resolution::attacker_wins(word("A"), 1, 0));
        terminals.insert(word("B"), Resolution::honest_wins(word("B"), 0));
        terminals.insert(word("AB"), Resolution::honest_wins(word("AB"), 0));
        let err = Strategy::from_word_rules("overlap", terminals, 4).unwrap_err();
        assert!(matches!(err, Error::OverlappingTerminals(_)));
    }

    #[test]
    fn word_rule_rejects_illegal_resolution() {
        let mut terminals = BTreeMap::new();
        terminals.insert(
            word("A"),
            Resolution {
                off_a: 2, // more official blocks than mined
                orph_a: 0,
                orph_pub_a: 0,
                off_h: 0,
                orph_h: 0,
            },
        );
        terminals.insert(word("B"), Resolution::honest_wins(word("B"), 0));
        let err = Strategy::from_word_rules("illegal", terminals, 4).unwrap_err();
        assert!(matches!(err, Error::IllegalResolution(_)));
    }

    #[test]
    fn word_rule_reconstructs_honest() {
        let mut terminals = BTreeMap::new();
        terminals.insert(word("A"), Resolution::attacker_wins(word("A"), 1, 0));
        terminals.insert(word("B"), Resolution::honest_wins(word("B"), 0));
        let rebuilt = Strategy::from_word_rules("honest-again", terminals, 1).unwrap();
        assert!(rebuilt.outcome_equivalent(&Strategy::honest()));
    }

    #[test]
    fn rules_text_roundtrip() {
        let strat = Strategy::one_plus_two();
        let text = strat.to_rules_text();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one_plus_two.rules");
        std::fs::write(&path, text).unwrap();
        let loaded = Strategy::from_rules_file(&path).unwrap();
        assert_eq!(loaded.terminal_words(), strat.terminal_words());
        for (w, res) in strat.terminals() {
            assert_eq!(loaded.resolve(w).unwrap(), res);
        }
    }

    #[test]
    fn run_cycle_honest_terminates_immediately() {
        let params = NetworkParams::new(0.3).unwrap();
        let honest = Strategy::honest();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let rec = run_cycle(&honest, &params, &mut rng, false);
            assert_eq!(rec.word.len(), 1);
            assert!(rec.duration.is_none());
            assert!(check_accounting(&rec));
        }
    }

    #[test]
    fn run_cycle_deterministic() {
        let params = NetworkParams::new(0.4).unwrap();
        let strat = Strategy::one_plus_two();
        let run = |seed| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..50)
                .map(|_| run_cycle(&strat, &params, &mut rng, true))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(42), run(42));
        assert_ne!(run(42), run(43));
    }

    #[test]
    fn timed_durations_positive() {
        let params = NetworkParams::new(0.4).unwrap();
        let strat = Strategy::one_plus_two();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..500 {
            let rec = run_cycle(&strat, &params, &mut rng, true);
            assert!(rec.duration.unwrap() > 0.0);
        }
    }

    #[test]
    fn random_strategies_are_valid() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for i in 0..200 {
            let strat = random_strategy(&mut rng, 5, format!("rand-{i}"));
            assert!(strat.max_cycle_length() <= 5);
            for (w, res) in strat.terminals() {
                assert!(fork_choice_legal(w, &res));
            }
        }
    }
}
