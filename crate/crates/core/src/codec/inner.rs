//! Per-string inner codes. Each string of length `L` is cut into
//! `floor(L / n)` blocks; any trailing symbols carry no information.
//!
//! Blocks are handled as bit masks: bit `i` of the mask is symbol `i` of the
//! block, and bit `j` of an info word is info bit `j`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Longest block a [`TableCode`] accepts; its coset table has `2^(n-k)` entries
/// built from all `2^n` words.
pub const MAX_TABLE_N: usize = 16;

/// Linear binary code decoded by exhaustive coset-leader lookup.
///
/// The generator is kept in reduced row-echelon form, so the info bits of a
/// codeword are read off its pivot columns. Cosets whose minimum-weight
/// member is not unique are flagged and decode as a detected failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCode {
    n: usize,
    k: usize,
    rows: Vec<u32>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    leaders: Vec<Option<u32>>,
    min_distance: usize,
}

impl TableCode {
    /// Build from generator rows given as `n`-bit masks.
    pub fn from_generator(n: usize, generator: &[u32]) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_N {
            return Err(Error::domain(format!("table code length must be in [1, {MAX_TABLE_N}], got {n}")));
        }
        let mask = (1u32 << n) - 1;
        if generator.iter().any(|&g| g & !mask != 0) {
            return Err(Error::domain("generator row wider than n"));
        }
        let (rows, pivots) = rref(generator, n);
        if rows.len() != generator.len() || rows.is_empty() {
            return Err(Error::domain("generator rows must be linearly independent and non-empty"));
        }
        let k = rows.len();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut code = TableCode { n, k, rows, pivots, free, leaders: Vec::new(), min_distance: 0 };

        // coset leaders: scan words by (weight, value)
        let mut words: Vec<u32> = (0..=mask).collect();
        words.sort_by_key(|w| (w.count_ones(), *w));
        let mut leaders: Vec<Option<(u32, u32, bool)>> = vec![None; 1 << (n - k)];
        for w in words {
            let s = code.syndrome(w);
            match &mut leaders[s] {
                None => leaders[s] = Some((w, w.count_ones(), false)),
                Some((_, weight, ambiguous)) => {
                    if *weight == w.count_ones() {
                        *ambiguous = true;
                    }
                }
            }
        }
        code.leaders = leaders
            .into_iter()
            .map(|l| l.and_then(|(w, _, ambiguous)| (!ambiguous).then_some(w)))
            .collect();
        code.min_distance = (1u32..1 << k)
            .map(|m| code.encode_block(m).count_ones() as usize)
            .min()
            .unwrap_or(n);
        Ok(code)
    }

    /// Cyclic code from a generator polynomial (bit `i` = coefficient of `x^i`).
    pub fn cyclic(n: usize, poly: u32) -> Result<Self> {
        let deg = 31 - poly.leading_zeros() as usize;
        if poly & 1 == 0 || deg >= n {
            return Err(Error::domain("cyclic generator must have a constant term and degree < n"));
        }
        let rows: Vec<u32> = (0..n - deg).map(|i| poly << i).collect();
        Self::from_generator(n, &rows)
    }

    /// First-order Reed-Muller code RM(1, m), length `2^m`.
    pub fn reed_muller_1(m: usize) -> Result<Self> {
        let n = 1usize << m;
        let mut rows = vec![((1u64 << n) - 1) as u32];
        for j in 0..m {
            rows.push((0..n).filter(|x| x >> j & 1 == 1).fold(0u32, |acc, x| acc | 1 << x));
        }
        Self::from_generator(n, &rows)
    }

    /// Named codes reachable as `table:n,k`.
    pub fn builtin(n: usize, k: usize) -> Result<Self> {
        match (n, k) {
            (7, 4) => Self::cyclic(7, 0b1011),
            (8, 4) => {
                let h = Self::cyclic(7, 0b1011)?;
                let rows: Vec<u32> = (0..4)
                    .map(|i| {
                        let r = h.rows[i];
                        r | ((r.count_ones() & 1) << 7)
                    })
                    .collect();
                Self::from_generator(8, &rows)
            }
            (15, 11) => Self::cyclic(15, 0b1_0011),
            (15, 7) => Self::cyclic(15, 0b1_1101_0001),
            (15, 5) => Self::cyclic(15, 0b101_0011_0111),
            (16, 5) => Self::reed_muller_1(4),
            (n, 1) if (1..=MAX_TABLE_N).contains(&n) => Self::from_generator(n, &[((1u64 << n) - 1) as u32]),
            _ => Err(Error::domain(format!(
                "no built-in table code ({n},{k}); known: (7,4) (8,4) (15,11) (15,7) (15,5) (16,5) (n,1)"
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn min_distance(&self) -> usize {
        self.min_distance
    }

    fn reduce(&self, mut w: u32) -> u32 {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w >> p & 1 == 1 {
                w ^= row;
            }
        }
        w
    }

    /// Coset index: the non-pivot bits of the reduced word.
    fn syndrome(&self, w: u32) -> usize {
        let r = self.reduce(w);
        self.free.iter().enumerate().fold(0usize, |acc, (i, &c)| acc | ((r as usize >> c & 1) << i))
    }

    pub fn encode_block(&self, info: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| info >> i & 1 == 1)
            .fold(0, |acc, (_, r)| acc ^ r)
    }

    pub fn decode_block(&self, word: u32) -> Option<u32> {
        let leader = self.leaders[self.syndrome(word)]?;
        let cw = word ^ leader;
        Some(self.pivots.iter().enumerate().fold(0u32, |acc, (i, &p)| acc | ((cw >> p & 1) << i)))
    }
}

fn rref(rows: &[u32], n: usize) -> (Vec<u32>, Vec<usize>) {
    let mut rows = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(sel) = (rank..rows.len()).find(|&i| rows[i] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, sel);
        for i in 0..rows.len() {
            if i != rank && rows[i] >> col & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Extended Hamming (8,4): single-error correcting, double-error detecting.
///
/// Layout: info bits at positions 0..4, then three Hamming parities and the
/// overall parity bit.
mod ext_hamming {
    /// Syndrome contributed by each of the 7 inner positions.
    const COLUMN: [u8; 7] = [0b011, 0b101, 0b110, 0b111, 0b001, 0b010, 0b100];

    pub fn encode(info: u32) -> u32 {
        let d = |i: u32| info >> i & 1;
        let p0 = d(0) ^ d(1) ^ d(3);
        let p1 = d(0) ^ d(2) ^ d(3);
        let p2 = d(1) ^ d(2) ^ d(3);
        let word = (info & 0xF) | p0 << 4 | p1 << 5 | p2 << 6;
        word | (word.count_ones() & 1) << 7
    }

    pub fn decode(word: u32) -> Option<u32> {
        let syndrome = (0..7).filter(|i| word >> i & 1 == 1).fold(0u8, |s, i| s ^ COLUMN[i]);
        let odd = word.count_ones() & 1 == 1;
        let fixed = match (syndrome, odd) {
            (0, false) => word,
            (0, true) => word ^ 0x80,
            (s, true) => word ^ (1 << COLUMN.iter().position(|&c| c == s).expect("nonzero syndrome")),
            (_, false) => return None,
        };
        Some(fixed & 0xF)
    }
}

/// Inner code applied independently to every block of a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InnerCode {
    /// Uncoded; one info bit per symbol.
    Identity,
    /// `n`-fold repetition of one bit, majority decoded. Ties are failures.
    Repetition(usize),
    /// Extended Hamming (8,4), SECDED.
    ExtendedHamming,
    Table(Arc<TableCode>),
}

impl InnerCode {
    pub fn table(n: usize, k: usize) -> Result<Self> {
        Ok(InnerCode::Table(Arc::new(TableCode::builtin(n, k)?)))
    }

    /// Block length.
    pub fn n(&self) -> usize {
        match self {
            InnerCode::Identity => 1,
            InnerCode::Repetition(n) => *n,
            InnerCode::ExtendedHamming => 8,
            InnerCode::Table(t) => t.n(),
        }
    }

    /// Info bits per block.
    pub fn k(&self) -> usize {
        match self {
            InnerCode::Identity | InnerCode::Repetition(_) => 1,
            InnerCode::ExtendedHamming => 4,
            InnerCode::Table(t) => t.k(),
        }
    }

    pub fn blocks(&self, l: usize) -> usize {
        l / self.n()
    }

    /// Info bits carried by a string of length `l`.
    pub fn info_bits(&self, l: usize) -> usize {
        self.blocks(l) * self.k()
    }

    pub fn encode_block(&self, info: u32) -> u32 {
        match self {
            InnerCode::Identity => info & 1,
            InnerCode::Repetition(n) => {
                if info & 1 == 1 {
                    ((1u64 << n) - 1) as u32
                } else {
                    0
                }
            }
            InnerCode::ExtendedHamming => ext_hamming::encode(info),
            InnerCode::Table(t) => t.encode_block(info),
        }
    }

    /// `None` when the decoder detects an uncorrectable pattern.
    pub fn decode_block(&self, word: u32) -> Option<u32> {
        match self {
            InnerCode::Identity => Some(word & 1),
            InnerCode::Repetition(n) => {
                let ones = word.count_ones() as usize;
                match (2 * ones).cmp(n) {
                    std::cmp::Ordering::Greater => Some(1),
                    std::cmp::Ordering::Less => Some(0),
                    std::cmp::Ordering::Equal => None,
                }
            }
            InnerCode::ExtendedHamming => ext_hamming::decode(word),
            InnerCode::Table(t) => t.decode_block(word),
        }
    }

    /// Encode `info` (0/1 values, length `info_bits(out.len())`) into `out`.
    pub fn encode_string(&self, info: &[u8], out: &mut [u8]) {
        let (n, k) = (self.n(), self.k());
        let blocks = self.blocks(out.len());
        debug_assert_eq!(info.len(), blocks * k);
        for b in 0..blocks {
            let word = info[b * k..(b + 1) * k]
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &bit)| acc | (bit as u32 & 1) << i);
            let cw = self.encode_block(word);
            for (i, slot) in out[b * n..(b + 1) * n].iter_mut().enumerate() {
                *slot = (cw >> i & 1) as u8;
            }
        }
        for slot in &mut out[blocks * n..] {
            *slot = 0;
        }
    }

    /// Decode a received string into `info`. Returns `false` if any block fails.
    pub fn decode_string(&self, received: &[u8], info: &mut [u8]) -> bool {
        let (n, k) = (self.n(), self.k());
        let blocks = self.blocks(received.len());
        debug_assert_eq!(info.len(), blocks * k);
        for b in 0..blocks {
            let word = received[b * n..(b + 1) * n]
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &s)| acc | (s as u32 & 1) << i);
            let Some(dec) = self.decode_block(word) else {
                return false;
            };
            for (i, slot) in info[b * k..(b + 1) * k].iter_mut().enumerate() {
                *slot = (dec >> i & 1) as u8;
            }
        }
        true
    }
}

impl fmt::Display for InnerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerCode::Identity => f.write_str("identity"),
            InnerCode::Repetition(n) => write!(f, "rep{n}"),
            InnerCode::ExtendedHamming => f.write_str("ext-hamming"),
            InnerCode::Table(t) => write!(f, "table:{},{}", t.n(), t.k()),
        }
    }
}

impl FromStr for InnerCode {
    type Err = Error;

    /// `identity`, `rep<n>`, `ext-hamming` or `table:<n>,<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("unknown inner code {s:?}"));
        match s {
            "identity" | "none" => Ok(InnerCode::Identity),
            "ext-hamming" | "hamming84" | "extended-hamming" => Ok(InnerCode::ExtendedHamming),
            _ => {
                if let Some(n) = s.strip_prefix("rep") {
                    let n: usize = n.trim_start_matches([':', '-']).parse().map_err(|_| bad())?;
                    if !(1..=31).contains(&n) {
                        return Err(Error::domain("repetition length must be in [1, 31]"));
                    }
                    Ok(InnerCode::Repetition(n))
                } else if let Some(rest) = s.strip_prefix("table:") {
                    let (n, k) = rest.split_once(',').ok_or_else(bad)?;
                    let n = n.trim().parse().map_err(|_| bad())?;
                    let k = k.trim().parse().map_err(|_| bad())?;
                    InnerCode::table(n, k)
                } else {
                    Err(bad())
                }
            }
        }
    }
}
