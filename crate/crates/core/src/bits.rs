//! Bit strings, Hamming distance, bit-to-real decoding and the seeded
//! random stream shared by every other module.
//!
//! Within a segment the bit at index 0 carries weight `2^0`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed-length string of binary digits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![1; len])
    }

    /// Builds a bit string from `bools`.
    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self(bits.into_iter().map(u8::from).collect())
    }

    /// Parses a string of `'0'`/`'1'` characters, index 0 first.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParameter(format!(
                    "bit string contains `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Uniformly random string, each bit set with probability one half.
    pub fn random(len: usize, rng: &mut RngStream) -> Self {
        Self((0..len).map(|_| u8::from(rng.uniform() < 0.5)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        self.0[index] == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        self.0[index] = u8::from(value);
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        self.0[index] ^= 1;
    }

    /// Raw digits, each exactly 0 or 1.
    #[inline]
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().map(|&b| b == 1)
    }

    /// Indices of set bits in ascending order.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (b == 1).then_some(i))
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        Self(self.0[start..start + len].to_vec())
    }

    pub fn concat(parts: &[BitString]) -> BitString {
        Self(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of positions at which `x` and `y` differ.
pub fn hamming_distance(x: &BitString, y: &BitString) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(hamming_unchecked(x.as_slice(), y.as_slice()))
}

#[inline]
pub(crate) fn hamming_unchecked(x: &[u8], y: &[u8]) -> usize {
    x.iter().zip(y).map(|(a, b)| usize::from(a ^ b)).sum()
}

/// `Σ bit_i · 2^i` over the segment.
pub fn bits_to_integer(segment: &[u8]) -> u64 {
    debug_assert!(segment.len() < 64);
    segment
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
}

/// Layout of a real vector inside a bit string: `variables` consecutive
/// segments of `bits_per_variable` bits, each decoded into `[lower, upper)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodingSpec {
    pub bits_per_variable: usize,
    pub lower: f64,
    pub upper: f64,
    pub variables: usize,
}

impl DecodingSpec {
    pub fn new(bits_per_variable: usize, lower: f64, upper: f64, variables: usize) -> Result<Self> {
        if bits_per_variable == 0 || bits_per_variable > 52 {
            return Err(Error::InvalidParameter(format!(
                "bits per variable must be in 1..=52, got {bits_per_variable}"
            )));
        }
        if variables == 0 {
            return Err(Error::InvalidParameter("variable count must be positive".into()));
        }
        if !(upper > lower) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Self {
            bits_per_variable,
            lower,
            upper,
            variables,
        })
    }

    pub fn total_bits(&self) -> usize {
        self.variables * self.bits_per_variable
    }

    /// `lower + k · (upper − lower) / 2^L` for the segment's integer `k`.
    pub fn decode_real(&self, segment: &[u8]) -> Result<f64> {
        if segment.len() != self.bits_per_variable {
            return Err(Error::LengthMismatch {
                expected: self.bits_per_variable,
                actual: segment.len(),
            });
        }
        Ok(self.decode_unchecked(segment))
    }

    #[inline]
    fn decode_unchecked(&self, segment: &[u8]) -> f64 {
        let k = bits_to_integer(segment) as f64;
        let levels = (1u64 << self.bits_per_variable) as f64;
        self.lower + k * (self.upper - self.lower) / levels
    }

    pub fn decode_vector(&self, x: &BitString) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.variables);
        self.decode_into(x, &mut out)?;
        Ok(out)
    }

    /// Decodes into a caller-owned buffer, replacing its contents.
    pub fn decode_into(&self, x: &BitString, out: &mut Vec<f64>) -> Result<()> {
        if x.len() != self.total_bits() {
            return Err(Error::LengthMismatch {
                expected: self.total_bits(),
                actual: x.len(),
            });
        }
        out.clear();
        out.extend(
            x.as_slice()
                .chunks_exact(self.bits_per_variable)
                .map(|seg| self.decode_unchecked(seg)),
        );
        Ok(())
    }
}

/// SplitMix64 finaliser. Used to derive per-run seeds from a master seed.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded ChaCha8 stream. Identical seeds reproduce identical draws.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed for run `run_index` of an experiment seeded with `master_seed`:
    /// `splitmix64(master_seed ^ splitmix64(run_index))`.
    pub fn derive_seed(master_seed: u64, run_index: u64) -> u64 {
        splitmix64(master_seed ^ splitmix64(run_index))
    }

    pub fn for_run(master_seed: u64, run_index: u64) -> Self {
        Self::new(Self::derive_seed(master_seed, run_index))
    }

    /// Independent child stream, labelled by `stream`.
    pub fn fork(&self, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        Self { seed: self.seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&bits("10110"), &bits("10110")).unwrap(), 0);
        assert_eq!(hamming_distance(&bits("00000"), &bits("11111")).unwrap(), 5);
        assert_eq!(hamming_distance(&bits("1011"), &bits("0010")).unwrap(), 2);
    }

    #[test]
    fn hamming_length_mismatch() {
        let err = hamming_distance(&bits("101"), &bits("10")).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { expected: 3, actual: 2 }));
    }

    #[test]
    fn integer_conversion() {
        assert_eq!(bits_to_integer(BitString::zeros(15).as_slice()), 0);
        assert_eq!(bits_to_integer(BitString::ones(15).as_slice()), 32767);
        let mut unit = BitString::zeros(15);
        unit.set(0, true);
        assert_eq!(bits_to_integer(unit.as_slice()), 1);
    }

    fn segment_for(k: u64, len: usize) -> BitString {
        BitString::from_bools((0..len).map(|i| (k >> i) & 1 == 1))
    }

    #[test]
    fn decode_real_examples() {
        let dec = DecodingSpec::new(15, -100.0, 100.0, 1).unwrap();
        assert_eq!(dec.decode_real(BitString::zeros(15).as_slice()).unwrap(), -100.0);
        let top = dec.decode_real(BitString::ones(15).as_slice()).unwrap();
        assert!((top - 99.993896484375).abs() < 1e-12);
        let mid = dec.decode_real(segment_for(16384, 15).as_slice()).unwrap();
        assert_eq!(mid, 0.0);
    }

    #[test]
    fn decode_vector_examples() {
        let dec = DecodingSpec::new(15, -5.0, 5.0, 2).unwrap();
        assert_eq!(dec.decode_vector(&BitString::zeros(30)).unwrap(), vec![-5.0, -5.0]);

        let s1 = segment_for(1234, 15);
        let s2 = segment_for(30001, 15);
        let joined = BitString::concat(&[s1.clone(), s2.clone()]);
        let got = dec.decode_vector(&joined).unwrap();
        assert_eq!(got[0], dec.decode_real(s1.as_slice()).unwrap());
        assert_eq!(got[1], dec.decode_real(s2.as_slice()).unwrap());

        let single = DecodingSpec::new(15, -5.0, 5.0, 1).unwrap();
        assert_eq!(
            single.decode_vector(&s2).unwrap(),
            vec![single.decode_real(s2.as_slice()).unwrap()]
        );
        assert!(dec.decode_vector(&s1).is_err());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(DecodingSpec::new(0, 0.0, 1.0, 1).is_err());
        assert!(DecodingSpec::new(15, 1.0, 1.0, 1).is_err());
        assert!(DecodingSpec::new(15, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn streams_are_reproducible() {
        let mut a = RngStream::new(99);
        let mut b = RngStream::new(99);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
        let mut c = RngStream::for_run(7, 0);
        let mut d = RngStream::for_run(7, 1);
        assert_ne!(c.next_u64(), d.next_u64());
        let mut f1 = a.fork(1);
        let mut f2 = a.fork(2);
        assert_ne!(f1.next_u64(), f2.next_u64());
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
        (1usize..120).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric((x, y) in arb_pair()) {
            let x = BitString::from_bools(x);
            let y = BitString::from_bools(y);
            prop_assert_eq!(hamming_distance(&x, &x).unwrap(), 0);
            let dxy = hamming_distance(&x, &y).unwrap();
            prop_assert_eq!(dxy, hamming_distance(&y, &x).unwrap());
            prop_assert_eq!(dxy == 0, x == y);
        }

        #[test]
        fn decoded_values_stay_in_half_open_bounds(
            k in 0u64..(1 << 15),
            lower in -1000.0f64..1000.0,
            width in 1e-3f64..2000.0,
        ) {
            let dec = DecodingSpec::new(15, lower, lower + width, 1).unwrap();
            let v = dec.decode_real(segment_for(k, 15).as_slice()).unwrap();
            prop_assert!(v >= lower && v < lower + width);
            if k > 0 {
                let below = dec.decode_real(segment_for(k - 1, 15).as_slice()).unwrap();
                prop_assert!(below < v);
            }
        }
    }
}
