use crate::error::{Error, Result};
use std::fmt;

/// Finder of one block in a cycle: the attacker or the honest network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

/// Ordered sequence of block-finder labels for one strategy cycle.
///
/// Packed into a `u64` bitset (A = 1, B = 0, letter `i` at bit `i`), which
/// caps cycles at 64 blocks and makes words cheap `Copy` map keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CycleWord {
    len: u8,
    bits: u64,
}

impl CycleWord {
    pub const MAX_LEN: usize = 64;

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        if letters.len() > Self::MAX_LEN {
            return Err(Error::WordTooLong(letters.len()));
        }
        let mut word = Self::empty();
        for &letter in letters {
            word = word.pushed(letter);
        }
        Ok(word)
    }

    /// Parses a literal letter string such as `"ABA"`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.len() > Self::MAX_LEN {
            return Err(Error::WordTooLong(text.len()));
        }
        let mut word = Self::empty();
        for ch in text.chars() {
            let letter = match ch {
                'A' => Letter::A,
                'B' => Letter::B,
                other => return Err(Error::InvalidLetter(other)),
            };
            word = word.pushed(letter);
        }
        Ok(word)
    }

    pub fn pushed(mut self, letter: Letter) -> Self {
        assert!((self.len as usize) < Self::MAX_LEN, "cycle word overflow");
        if letter == Letter::A {
            self.bits |= 1 << self.len;
        }
        self.len += 1;
        self
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn letter(&self, index: usize) -> Letter {
        assert!(index < self.len());
        if self.bits & (1 << index) != 0 {
            Letter::A
        } else {
            Letter::B
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(|i| self.letter(i))
    }

    /// Number of attacker blocks.
    pub fn count_a(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Number of honest blocks.
    pub fn count_b(&self) -> u32 {
        self.len as u32 - self.count_a()
    }

    /// Exact probability of this word: each letter is an independent
    /// Bernoulli(q) race won by the attacker with probability q.
    pub fn probability(&self, p: f64, q: f64) -> f64 {
        p.powi(self.count_b() as i32) * q.powi(self.count_a() as i32)
    }

    pub fn is_prefix_of(&self, other: &CycleWord) -> bool {
        self.len <= other.len && (other.bits & ((1u128 << self.len) - 1) as u64) == self.bits
    }
}

impl fmt::Display for CycleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in self.letters() {
            f.write_str(match letter {
                Letter::A => "A",
                Letter::B => "B",
            })?;
        }
        Ok(())
    }
}

/// Per-cycle accounting: chain progression, block disposition and reward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleRecord {
    pub word: CycleWord,
    /// Attacker blocks added to the official chain.
    pub g: u32,
    /// Official-chain height progression.
    pub h: u32,
    /// Difficulty-function progression.
    pub d: u32,
    /// Cycle duration tau in minutes; absent in untimed analyses.
    pub duration: Option<f64>,
    pub off_a: u32,
    pub orph_a: u32,
    /// Attacker orphans revealed to the network (Orph'_A).
    pub orph_pub_a: u32,
    pub off_h: u32,
    pub orph_h: u32,
    /// Coinbase units: g plus x per reported attacker orphan.
    pub reward: f64,
}

/// True iff every accounting identity of a cycle record holds.
///
/// Honest orphans are always public; attacker orphans count toward the
/// difficulty function only once revealed. The reward is only bounded here
/// (g <= reward <= g + orph_pub_a) since the record does not carry x.
pub fn check_accounting(rec: &CycleRecord) -> bool {
    let n_a = rec.word.count_a();
    let n_b = rec.word.count_b();
    rec.off_a + rec.orph_a == n_a
        && rec.off_h + rec.orph_h == n_b
        && rec.h == rec.off_a + rec.off_h
        && rec.d == rec.h + rec.orph_h + rec.orph_pub_a
        && rec.orph_pub_a <= rec.orph_a
        && rec.g == rec.off_a
        && rec.g <= n_a
        && rec.reward >= rec.g as f64
        && rec.reward <= (rec.g + rec.orph_pub_a) as f64
        && rec.duration.is_none_or(|t| t >= 0.0)
}

pub const CSV_HEADER: &str = "word,g,h,d,duration,off_a,orph_a,orph_pub_a,off_h,orph_h,reward";

impl CycleRecord {
    pub fn to_csv_row(&self) -> String {
        let duration = match self.duration {
            Some(t) => format!("{t}"),
            None => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.word,
            self.g,
            self.h,
            self.d,
            duration,
            self.off_a,
            self.orph_a,
            self.orph_pub_a,
            self.off_h,
            self.orph_h,
            self.reward
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let fields: Vec<&str> = row.trim_end().split(',').collect();
        if fields.len() != 11 {
            return Err(Error::MalformedCsvRow(row.to_string()));
        }
        let bad = || Error::MalformedCsvRow(row.to_string());
        let int = |s: &str| s.parse::<u32>().map_err(|_| bad());
        let duration = if fields[4].is_empty() {
            None
        } else {
            Some(fields[4].parse::<f64>().map_err(|_| bad())?)
        };
        Ok(CycleRecord {
            word: CycleWord::parse(fields[0])?,
            g: int(fields[1])?,
            h: int(fields[2])?,
            d: int(fields[3])?,
            duration,
            off_a: int(fields[5])?,
            orph_a: int(fields[6])?,
            orph_pub_a: int(fields[7])?,
            off_h: int(fields[8])?,
            orph_h: int(fields[9])?,
            reward: fields[10].parse::<f64>().map_err(|_| bad())?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(
        word: &str,
        (off_a, orph_a, orph_pub_a, off_h, orph_h): (u32, u32, u32, u32, u32),
        (g, h, d): (u32, u32, u32),
    ) -> CycleRecord {
        CycleRecord {
            word: CycleWord::parse(word).unwrap(),
            g,
            h,
            d,
            duration: None,
            off_a,
            orph_a,
            orph_pub_a,
            off_h,
            orph_h,
            reward: g as f64,
        }
    }

    #[test]
    fn word_roundtrip_and_counts() {
        let word = CycleWord::parse("ABA").unwrap();
        assert_eq!(word.len(), 3);
        assert_eq!(word.count_a(), 2);
        assert_eq!(word.count_b(), 1);
        assert_eq!(word.to_string(), "ABA");
        assert_eq!(
            word.letters().collect::<Vec<_>>(),
            vec![Letter::A, Letter::B, Letter::A]
        );
        assert!(CycleWord::parse("AXB").is_err());
    }

    #[test]
    fn prefix_test() {
        let ab = CycleWord::parse("AB").unwrap();
        let aba = CycleWord::parse("ABA").unwrap();
        let abb = CycleWord::parse("ABB").unwrap();
        assert!(ab.is_prefix_of(&aba));
        assert!(ab.is_prefix_of(&abb));
        assert!(ab.is_prefix_of(&ab));
        assert!(!aba.is_prefix_of(&ab));
        assert!(!aba.is_prefix_of(&abb));
        assert!(CycleWord::empty().is_prefix_of(&aba));
    }

    #[test]
    fn word_probability() {
        let abb = CycleWord::parse("ABB").unwrap();
        assert!((abb.probability(0.7, 0.3) - 0.49 * 0.3).abs() < 1e-15);
    }

    #[test]
    fn accounting_accepts_honest_block() {
        // word B: one honest official block
        let rec = record("B", (0, 0, 0, 1, 0), (0, 1, 1));
        assert!(check_accounting(&rec));
    }

    #[test]
    fn accounting_accepts_successful_fork() {
        // word ABA: attacker's two blocks displace the honest one, D counts
        // the public honest orphan
        let rec = record("ABA", (2, 0, 0, 0, 1), (2, 2, 3));
        assert!(check_accounting(&rec));
    }

    #[test]
    fn accounting_rejects_violated_partition() {
        // word ABB has one attacker block; off_a = 1 and orph_a = 1 cannot both hold
        let mut rec = record("ABB", (1, 1, 0, 2, 0), (1, 3, 3));
        assert!(!check_accounting(&rec));
        rec.orph_a = 0;
        assert!(check_accounting(&rec));
    }

    #[test]
    fn csv_roundtrip() {
        let mut rec = record("ABA", (2, 0, 0, 0, 1), (2, 2, 3));
        rec.duration = Some(27.25);
        let row = rec.to_csv_row();
        assert_eq!(CycleRecord::from_csv_row(&row).unwrap(), rec);

        let untimed = record("B", (0, 0, 0, 1, 0), (0, 1, 1));
        let row = untimed.to_csv_row();
        assert_eq!(row, "B,0,1,1,,0,0,0,1,0,0");
        assert_eq!(CycleRecord::from_csv_row(&row).unwrap(), untimed);
    }
}
