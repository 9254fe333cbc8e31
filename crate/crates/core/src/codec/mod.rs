//! Index-based coding for the noisy shuffling channel.
//!
//! Every string carries `index || data` through an inner block code, with
//! the index written big-endian in the first `ceil(log2 M)` info bits. When
//! `outer_redundancy = r > 0`, the data fields are protected by a
//! systematic Reed-Solomon code over GF(2^w), `w = ceil(log2(M + r + 1))`:
//! stripe `t` takes the `t`-th `w`-bit symbol of every string, strings
//! `0..M-r` carry payload and strings `M-r..M` carry parity.
//!
//! On decode, an index claimed by two strings with different content is
//! erased for both; indices nobody claims are erased.

pub mod gf;
pub mod inner;
pub mod rs;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use inner::{InnerCode, TableCode};

use self::gf::Gf;
use self::rs::ReedSolomon;
use crate::error::{Error, Result};
use crate::params::ChannelParams;
use crate::pool::Pool;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub inner: InnerCode,
    /// Number of parity strings `r`.
    pub outer_redundancy: usize,
}

impl CodeSpec {
    pub fn new(inner: InnerCode, outer_redundancy: usize) -> Self {
        CodeSpec { inner, outer_redundancy }
    }

    pub fn layout(&self, params: &ChannelParams) -> Result<Layout> {
        Layout::new(self, params)
    }
}

/// Everything derived from a [`CodeSpec`] and [`ChannelParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub m: usize,
    pub l: usize,
    pub index_bits: usize,
    /// Info bits per string after inner coding.
    pub info_bits: usize,
    /// `info_bits - index_bits`.
    pub payload_bits_per_string: usize,
    pub outer: Option<OuterLayout>,
    /// Payload bits per frame.
    pub payload_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OuterLayout {
    pub redundancy: usize,
    pub symbol_bits: u32,
    /// Outer symbols per string; leftover data-field bits are zero.
    pub symbols_per_string: usize,
    pub data_strings: usize,
}

impl Layout {
    fn new(spec: &CodeSpec, params: &ChannelParams) -> Result<Self> {
        if params.q != 2 {
            return Err(Error::Infeasible(format!("index codec is binary, got q = {}", params.q)));
        }
        let (m, l) = (params.m, params.l);
        let index_bits = params.index_bits();
        let info_bits = spec.inner.info_bits(l);
        if info_bits < index_bits {
            return Err(Error::Infeasible(format!(
                "{} carries {info_bits} info bits in L = {l}, but the index needs {index_bits}",
                spec.inner
            )));
        }
        let payload_bits_per_string = info_bits - index_bits;
        let r = spec.outer_redundancy;
        let (outer, payload_len) = if r == 0 {
            (None, m * payload_bits_per_string)
        } else {
            if r >= m {
                return Err(Error::Infeasible(format!("redundancy {r} leaves no data strings out of {m}")));
            }
            let symbol_bits = usize::BITS - (m + r).leading_zeros();
            if symbol_bits > gf::MAX_WIDTH {
                return Err(Error::Infeasible(format!("outer field GF(2^{symbol_bits}) too large")));
            }
            let symbol_bits = symbol_bits.max(2);
            let symbols_per_string = payload_bits_per_string / symbol_bits as usize;
            let data_strings = m - r;
            let outer = OuterLayout { redundancy: r, symbol_bits, symbols_per_string, data_strings };
            (Some(outer), data_strings * symbols_per_string * symbol_bits as usize)
        };
        Ok(Layout { m, l, index_bits, info_bits, payload_bits_per_string, outer, payload_len })
    }

    /// Net information bits per channel symbol.
    pub fn rate(&self) -> f64 {
        self.payload_len as f64 / (self.m * self.l) as f64
    }
}

/// Net rate of `spec`: payload bits divided by `M * L`.
pub fn achieved_rate(spec: &CodeSpec, params: &ChannelParams) -> Result<f64> {
    Ok(spec.layout(params)?.rate())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlotStatus {
    Ok,
    ErasedMissing,
    ErasedCollision,
    OuterCorrected,
}

impl SlotStatus {
    pub fn is_erased(self) -> bool {
        matches!(self, SlotStatus::ErasedMissing | SlotStatus::ErasedCollision)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeReport {
    /// Payload bits as 0/1 values. Unrecoverable parts are zero.
    #[serde(skip)]
    pub recovered_payload: Vec<u8>,
    /// One status per index slot `0..M`.
    pub statuses: Vec<SlotStatus>,
    pub frame_ok: bool,
    /// Received strings whose inner decoding failed.
    pub inner_failures: usize,
    /// Received strings that decoded to an index `>= M`.
    pub invalid_index: usize,
    /// Identical copies of an already claimed slot (sampling duplicates).
    pub duplicates_discarded: usize,
}

impl DecodeReport {
    pub fn count(&self, status: SlotStatus) -> usize {
        self.statuses.iter().filter(|&&s| s == status).count()
    }
}

/// Cached encoder/decoder state for one `(spec, params)` pair.
#[derive(Debug, Clone)]
pub struct Codec {
    spec: CodeSpec,
    layout: Layout,
    outer: Option<ReedSolomon>,
}

impl Codec {
    pub fn new(spec: &CodeSpec, params: &ChannelParams) -> Result<Self> {
        let layout = spec.layout(params)?;
        let outer = match layout.outer {
            Some(o) => Some(ReedSolomon::new(
                Arc::new(Gf::new(o.symbol_bits)?),
                layout.m,
                o.data_strings,
            )?),
            None => None,
        };
        Ok(Codec { spec: spec.clone(), layout, outer })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// Data fields (`payload_bits_per_string` bits) of all `M` strings.
    fn data_fields(&self, payload: &[u8]) -> Vec<Vec<u8>> {
        let lay = &self.layout;
        let p = lay.payload_bits_per_string;
        match (&self.outer, lay.outer) {
            (Some(rs), Some(o)) => {
                let w = o.symbol_bits as usize;
                let s = o.symbols_per_string;
                let mut fields = vec![vec![0u8; p]; lay.m];
                let r = o.redundancy;
                for t in 0..s {
                    let data: Vec<u32> = (0..o.data_strings)
                        .map(|i| bits_to_u32(&payload[(i * s + t) * w..(i * s + t + 1) * w]))
                        .collect();
                    let cw = rs.encode(&data);
                    for (slot, field) in fields.iter_mut().enumerate() {
                        let sym = cw[codeword_position(slot, o.data_strings, r)];
                        u32_to_bits(sym, &mut field[t * w..(t + 1) * w]);
                    }
                }
                fields
            }
            _ => (0..lay.m).map(|i| payload[i * p..(i + 1) * p].to_vec()).collect(),
        }
    }

    pub fn encode(&self, payload: &[u8]) -> Result<Pool> {
        let lay = &self.layout;
        if payload.len() != lay.payload_len {
            return Err(Error::PayloadSize { expected: lay.payload_len, got: payload.len() });
        }
        if payload.iter().any(|&b| b > 1) {
            return Err(Error::domain("payload must be a sequence of 0/1 bits"));
        }
        let fields = self.data_fields(payload);
        let mut data = vec![0u8; lay.m * lay.l];
        let mut info = vec![0u8; lay.info_bits];
        for (i, field) in fields.iter().enumerate() {
            u32_to_bits(i as u32, &mut info[..lay.index_bits]);
            info[lay.index_bits..].copy_from_slice(field);
            self.spec.inner.encode_string(&info, &mut data[i * lay.l..(i + 1) * lay.l]);
        }
        Ok(Pool::from_raw(data, lay.l, 2))
    }

    pub fn decode(&self, received: &Pool) -> Result<DecodeReport> {
        let lay = &self.layout;
        if received.string_len() != lay.l {
            return Err(Error::LengthMismatch { left: received.string_len(), right: lay.l });
        }
        if received.q() != 2 {
            return Err(Error::domain("index codec expects a binary pool"));
        }
        let mut inner_failures = 0;
        let mut invalid_index = 0;
        let mut duplicates_discarded = 0;
        let mut claims: Vec<Option<Vec<u8>>> = vec![None; lay.m];
        let mut statuses = vec![SlotStatus::ErasedMissing; lay.m];
        let mut info = vec![0u8; lay.info_bits];
        for s in received.strings() {
            if !self.spec.inner.decode_string(s, &mut info) {
                inner_failures += 1;
                continue;
            }
            let idx = bits_to_u64(&info[..lay.index_bits]) as usize;
            if idx >= lay.m {
                invalid_index += 1;
                continue;
            }
            let field = &info[lay.index_bits..];
            match (&claims[idx], statuses[idx]) {
                (None, SlotStatus::ErasedMissing) => {
                    claims[idx] = Some(field.to_vec());
                    statuses[idx] = SlotStatus::Ok;
                }
                (Some(prev), SlotStatus::Ok) if prev == field => duplicates_discarded += 1,
                _ => {
                    claims[idx] = None;
                    statuses[idx] = SlotStatus::ErasedCollision;
                }
            }
        }

        let p = lay.payload_bits_per_string;
        let mut payload = vec![0u8; lay.payload_len];
        let frame_ok = match (&self.outer, lay.outer) {
            (Some(rs), Some(o)) => {
                let w = o.symbol_bits as usize;
                let s = o.symbols_per_string;
                let r = o.redundancy;
                let erasures: Vec<usize> = (0..lay.m)
                    .filter(|&slot| statuses[slot].is_erased())
                    .map(|slot| codeword_position(slot, o.data_strings, r))
                    .collect();
                let mut ok = erasures.len() <= r;
                for t in 0..s {
                    if !ok {
                        break;
                    }
                    let mut word = vec![0u32; lay.m];
                    for (slot, claim) in claims.iter().enumerate() {
                        if let Some(field) = claim {
                            word[codeword_position(slot, o.data_strings, r)] = bits_to_u32(&field[t * w..(t + 1) * w]);
                        }
                    }
                    match rs.decode(&mut word, &erasures) {
                        Ok(changed) => {
                            for pos in changed {
                                let slot = slot_of_position(pos, o.data_strings, r);
                                if statuses[slot] == SlotStatus::Ok {
                                    statuses[slot] = SlotStatus::OuterCorrected;
                                }
                            }
                            for i in 0..o.data_strings {
                                let at = (i * s + t) * w;
                                u32_to_bits(word[r + i], &mut payload[at..at + w]);
                            }
                        }
                        Err(_) => ok = false,
                    }
                }
                ok
            }
            _ => {
                for (slot, claim) in claims.iter().enumerate() {
                    if let Some(field) = claim {
                        payload[slot * p..(slot + 1) * p].copy_from_slice(field);
                    }
                }
                statuses.iter().all(|&s| s == SlotStatus::Ok)
            }
        };
        if !frame_ok {
            payload.iter_mut().for_each(|b| *b = 0);
        }
        Ok(DecodeReport {
            recovered_payload: payload,
            statuses,
            frame_ok,
            inner_failures,
            invalid_index,
            duplicates_discarded,
        })
    }
}

/// Data string `i` sits at coefficient `r + i`; parity string `k + j` at `j`.
fn codeword_position(slot: usize, data_strings: usize, r: usize) -> usize {
    if slot < data_strings {
        r + slot
    } else {
        slot - data_strings
    }
}

fn slot_of_position(pos: usize, data_strings: usize, r: usize) -> usize {
    if pos < r {
        data_strings + pos
    } else {
        pos - r
    }
}

pub fn encode(payload: &[u8], spec: &CodeSpec, params: &ChannelParams) -> Result<Pool> {
    Codec::new(spec, params)?.encode(payload)
}

pub fn decode(received: &Pool, spec: &CodeSpec, params: &ChannelParams) -> Result<DecodeReport> {
    Codec::new(spec, params)?.decode(received)
}

fn bits_to_u64(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| acc << 1 | b as u64)
}

fn bits_to_u32(bits: &[u8]) -> u32 {
    bits.iter().fold(0u32, |acc, &b| acc << 1 | b as u32)
}

/// Big-endian: `out[0]` receives the most significant bit.
fn u32_to_bits(value: u32, out: &mut [u8]) {
    let n = out.len();
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = (value >> (n - 1 - i) & 1) as u8;
    }
}

/// Bytes to bits, most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    bytes.iter().flat_map(|&b| (0..8).rev().map(move |i| b >> i & 1)).collect()
}

/// Bits to bytes, most significant bit first; the last byte is zero-padded.
pub fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b & 1) << (7 - i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{corrupt_symmetric, shuffle};
    use crate::rng::seeded;
    use rand::Rng;

    fn params(m: usize, l: usize) -> ChannelParams {
        ChannelParams::with_length(m, l as f64 / (m as f64).log2(), l, 2, 0.0, None).unwrap()
    }

    fn random_bits(n: usize, rng: &mut impl Rng) -> Vec<u8> {
        (0..n).map(|_| rng.random_range(0..2u8)).collect()
    }

    #[test]
    fn bare_index_pool() {
        let par = params(16, 4);
        let spec = CodeSpec::new(InnerCode::Identity, 0);
        assert_eq!(achieved_rate(&spec, &par).unwrap(), 0.0);
        let pool = encode(&[], &spec, &par).unwrap();
        for (i, s) in pool.strings().enumerate() {
            assert_eq!(bits_to_u64(s) as usize, i);
        }
    }

    #[test]
    fn identity_rate_example() {
        let par = ChannelParams::new(4, 4.0, 2, 0.0, None).unwrap();
        assert_eq!(par.l, 8);
        let spec = CodeSpec::new(InnerCode::Identity, 0);
        let lay = spec.layout(&par).unwrap();
        assert_eq!(lay.payload_len, 24);
        assert_eq!(lay.rate(), 0.75);
        let payload: Vec<u8> = (0..24).map(|i| (i % 3 == 0) as u8).collect();
        let pool = encode(&payload, &spec, &par).unwrap();
        // string 2: index 10, then bits 12..18 of the payload
        assert_eq!(pool.get(2), &[1, 0, 1, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn ext_hamming_layout() {
        let par = ChannelParams::new(4096, 8.0, 2, 0.01, None).unwrap();
        let spec = CodeSpec::new(InnerCode::ExtendedHamming, 0);
        let lay = spec.layout(&par).unwrap();
        assert_eq!((lay.l, lay.info_bits, lay.index_bits, lay.payload_bits_per_string), (96, 48, 12, 36));
        assert_eq!(lay.rate(), 0.375);
        let with_outer = CodeSpec::new(InnerCode::ExtendedHamming, 200).layout(&par).unwrap();
        let o = with_outer.outer.unwrap();
        assert_eq!((o.symbol_bits, o.symbols_per_string, o.data_strings), (13, 2, 3896));
        assert_eq!(with_outer.payload_len, 3896 * 26);
    }

    #[test]
    fn repetition_leaves_no_payload() {
        let par = params(256, 24);
        let spec = CodeSpec::new(InnerCode::Repetition(3), 0);
        assert_eq!(achieved_rate(&spec, &par).unwrap(), 0.0);
        let short = params(256, 21);
        assert!(matches!(achieved_rate(&spec, &short), Err(Error::Infeasible(_))));
    }

    #[test]
    fn infeasible_specs() {
        let par = params(16, 8);
        assert!(matches!(CodeSpec::new(InnerCode::Identity, 16).layout(&par), Err(Error::Infeasible(_))));
        let q4 = ChannelParams::with_length(16, 2.0, 8, 4, 0.0, None).unwrap();
        assert!(CodeSpec::new(InnerCode::Identity, 0).layout(&q4).is_err());
        let spec = CodeSpec::new(InnerCode::Identity, 0);
        assert_eq!(
            encode(&[0; 3], &spec, &par).unwrap_err(),
            Error::PayloadSize { expected: 64, got: 3 }
        );
    }

    #[test]
    fn noiseless_round_trip_all_inner_codes() {
        let mut rng = seeded(31);
        let codes = [
            InnerCode::Identity,
            InnerCode::Repetition(3),
            InnerCode::ExtendedHamming,
            InnerCode::table(15, 7).unwrap(),
        ];
        for code in codes {
            for r in [0usize, 5] {
                let par = params(64, 90);
                let spec = CodeSpec::new(code.clone(), r);
                let codec = Codec::new(&spec, &par).unwrap();
                for _ in 0..20 {
                    let payload = random_bits(codec.layout().payload_len, &mut rng);
                    let pool = codec.encode(&payload).unwrap();
                    let mut idx: Vec<u64> = pool.strings().map(|s| {
                        let mut info = vec![0; codec.layout().info_bits];
                        assert!(code.decode_string(s, &mut info));
                        bits_to_u64(&info[..codec.layout().index_bits])
                    }).collect();
                    idx.sort_unstable();
                    assert_eq!(idx, (0..64).collect::<Vec<u64>>(), "indices distinct");
                    let (shuffled, _) = shuffle(&pool, &mut rng);
                    let rep = codec.decode(&shuffled).unwrap();
                    assert!(rep.frame_ok, "{code} r={r}");
                    assert_eq!(rep.recovered_payload, payload);
                    assert_eq!(rep.count(SlotStatus::Ok), 64);
                }
            }
        }
    }

    #[test]
    fn forced_collision_erases_both_claimants() {
        let par = params(16, 16);
        let mut rng = seeded(3);
        for r in [1usize, 2] {
            let spec = CodeSpec::new(InnerCode::Identity, r);
            let codec = Codec::new(&spec, &par).unwrap();
            let payload = random_bits(codec.layout().payload_len, &mut rng);
            let pool = codec.encode(&payload).unwrap();
            // rewrite string 5's index to 9: slots 5 (missing) and 9 (collision)
            let mut strings: Vec<Vec<u8>> = pool.strings().map(<[u8]>::to_vec).collect();
            u32_to_bits(9, &mut strings[5][..4]);
            strings[5][10] ^= 1;
            let bad = Pool::from_strings(&strings, 2).unwrap();
            let rep = codec.decode(&bad).unwrap();
            assert_eq!(rep.statuses[9], SlotStatus::ErasedCollision);
            assert_eq!(rep.statuses[5], SlotStatus::ErasedMissing);
            // two erasures need r >= 2
            assert_eq!(rep.frame_ok, r >= 2, "r = {r}");
            if r >= 2 {
                assert_eq!(rep.recovered_payload, payload);
            }
        }
    }

    #[test]
    fn outer_code_fixes_undetected_string_error() {
        let par = params(32, 30);
        let spec = CodeSpec::new(InnerCode::Identity, 4);
        let codec = Codec::new(&spec, &par).unwrap();
        let mut rng = seeded(8);
        let payload = random_bits(codec.layout().payload_len, &mut rng);
        let mut pool = codec.encode(&payload).unwrap();
        pool.get_mut(3)[6] ^= 1; // data bit, index intact
        pool.get_mut(30)[20] ^= 1; // parity string
        let rep = codec.decode(&pool).unwrap();
        assert!(rep.frame_ok);
        assert_eq!(rep.recovered_payload, payload);
        assert_eq!(rep.statuses[3], SlotStatus::OuterCorrected);
        assert_eq!(rep.statuses[30], SlotStatus::OuterCorrected);
    }

    #[test]
    fn sampled_duplicates_are_discarded() {
        let par = params(8, 12);
        let spec = CodeSpec::new(InnerCode::Identity, 2);
        let codec = Codec::new(&spec, &par).unwrap();
        let payload = random_bits(codec.layout().payload_len, &mut seeded(1));
        let pool = codec.encode(&payload).unwrap();
        // drop string 0, duplicate strings 1 and 2
        let order = [1, 1, 2, 2, 2, 3, 4, 5, 6, 7];
        let rep = codec.decode(&pool.permuted(&order)).unwrap();
        assert_eq!(rep.duplicates_discarded, 3);
        assert_eq!(rep.statuses[0], SlotStatus::ErasedMissing);
        assert!(rep.frame_ok);
        assert_eq!(rep.recovered_payload, payload);
    }

    #[test]
    fn noisy_ext_hamming_small_frame() {
        let par = ChannelParams::new(256, 8.0, 2, 0.01, None).unwrap();
        let spec = CodeSpec::new(InnerCode::ExtendedHamming, 40);
        let codec = Codec::new(&spec, &par).unwrap();
        let mut rng = seeded(12);
        let mut ok = 0;
        for _ in 0..50 {
            let payload = random_bits(codec.layout().payload_len, &mut rng);
            let pool = codec.encode(&payload).unwrap();
            let (noisy, _) = corrupt_symmetric(&pool, 0.01, &mut rng).unwrap();
            let (out, _) = shuffle(&noisy, &mut rng);
            let rep = codec.decode(&out).unwrap();
            if rep.frame_ok && rep.recovered_payload == payload {
                ok += 1;
            }
        }
        assert!(ok >= 48, "{ok}/50");
    }

    #[test]
    fn byte_bit_conversion() {
        assert_eq!(bytes_to_bits(&[0b1010_0001]), vec![1, 0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(bits_to_bytes(&[1, 1, 0]), vec![0b1100_0000]);
        let bytes = vec![0xde, 0xad, 0xbe, 0xef];
        assert_eq!(bits_to_bytes(&bytes_to_bits(&bytes)), bytes);
    }
}
