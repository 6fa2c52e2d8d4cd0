//! Explicitly constructed digit sequences.

use crate::error::{QsError, Result};
use crate::monte_carlo::SeededDigits;
use crate::qs_system::{Digit, DigitStream, DigitWord, PeriodicDigits};

/// The number d c d d c c d d d d c c c c …: round k is a run of 2^{k−1}
/// copies of `d` followed by 2^{k−1} copies of `c`. Its running mean
/// oscillates and has no limit.
#[derive(Debug, Clone)]
pub struct OscillatingNumber {
    c: Digit,
    d: Digit,
    s: usize,
    round: u32,
    in_round: u64,
    pos: u64,
}

/// Position of the last `d` of round `k ≥ 1`: 3·2^{k−1} − 2.
pub fn d_run_end(k: u32) -> u64 {
    assert!((1..62).contains(&k), "round index out of range");
    3 * (1u64 << (k - 1)) - 2
}

/// Position of the last digit of round `k ≥ 1`: 2(2^k − 1).
pub fn round_end(k: u32) -> u64 {
    assert!((1..62).contains(&k), "round index out of range");
    2 * ((1u64 << k) - 1)
}

impl OscillatingNumber {
    pub fn new(c: usize, d: usize, s: usize) -> Result<OscillatingNumber> {
        for digit in [c, d] {
            if digit >= s {
                return Err(QsError::DigitOutOfRange { digit, s });
            }
        }
        if c == d {
            return Err(QsError::EqualDigits(c));
        }
        Ok(OscillatingNumber {
            c: c as Digit,
            d: d as Digit,
            s,
            round: 1,
            in_round: 0,
            pos: 0,
        })
    }

    pub fn d_run_ends(rounds: u32) -> Vec<u64> {
        (1..=rounds).map(d_run_end).collect()
    }

    pub fn round_ends(rounds: u32) -> Vec<u64> {
        (1..=rounds).map(round_end).collect()
    }
}

impl DigitStream for OscillatingNumber {
    fn alphabet(&self) -> usize {
        self.s
    }

    fn next_digit(&mut self) -> Option<Digit> {
        let half = 1u64 << (self.round - 1);
        let digit = if self.in_round < half { self.d } else { self.c };
        self.in_round += 1;
        if self.in_round == 2 * half {
            self.round += 1;
            self.in_round = 0;
        }
        self.pos += 1;
        Some(digit)
    }

    fn position(&self) -> u64 {
        self.pos
    }

    fn reset(&mut self) {
        self.round = 1;
        self.in_round = 0;
        self.pos = 0;
    }
}

/// Block layout of the A_k construction: block m holds 2^m·k free digits,
/// then 2^{m−1} zeros, then 2^{m−1} ones, so that block m ends at
/// t(m) = 2(k+1)(2^m − 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSchedule {
    k: u64,
}

impl BlockSchedule {
    pub fn new(k: u64) -> Result<BlockSchedule> {
        if k == 0 {
            return Err(QsError::NonPositiveK);
        }
        Ok(BlockSchedule { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Cumulative length after block m; t(0) = 0.
    pub fn t(&self, m: u32) -> Result<u64> {
        let pow = 1u64.checked_shl(m).ok_or(QsError::Overflow("t(m)"))?;
        2u64.checked_mul(self.k + 1)
            .and_then(|v| v.checked_mul(pow - 1))
            .ok_or(QsError::Overflow("t(m)"))
    }

    pub fn free_len(&self, m: u32) -> u64 {
        self.k << m
    }

    /// Length of each forced run (zeros, then ones) in block m.
    pub fn run_len(&self, m: u32) -> u64 {
        1u64 << (m - 1)
    }

    pub fn block_len(&self, m: u32) -> u64 {
        self.free_len(m) + 2 * self.run_len(m)
    }

    /// Position of the last forced zero of block m.
    pub fn zero_run_end(&self, m: u32) -> Result<u64> {
        Ok(self.t(m)? - self.run_len(m))
    }
}

/// A member of A_k: the free slots of each block are filled from `free`.
#[derive(Debug, Clone)]
pub struct AkStream<S> {
    schedule: BlockSchedule,
    free: S,
    s: usize,
    block: u32,
    in_block: u64,
    pos: u64,
}

impl<S: DigitStream> AkStream<S> {
    pub fn new(schedule: BlockSchedule, free: S, s: usize) -> Result<AkStream<S>> {
        if free.alphabet() > s {
            return Err(QsError::DigitOutOfRange {
                digit: free.alphabet() - 1,
                s,
            });
        }
        if s < 2 {
            return Err(QsError::AlphabetSize(s));
        }
        Ok(AkStream {
            schedule,
            free,
            s,
            block: 1,
            in_block: 0,
            pos: 0,
        })
    }

    pub fn schedule(&self) -> BlockSchedule {
        self.schedule
    }

    /// Index of the block currently being emitted.
    pub fn current_block(&self) -> u32 {
        self.block
    }
}

impl AkStream<SeededDigits> {
    /// A_k member with free digits drawn uniformly from a seeded generator.
    pub fn seeded(k: u64, s: usize, seed: u64) -> Result<AkStream<SeededDigits>> {
        let free = SeededDigits::uniform(s, seed, 0)?;
        AkStream::new(BlockSchedule::new(k)?, free, s)
    }
}

impl<S: DigitStream> DigitStream for AkStream<S> {
    fn alphabet(&self) -> usize {
        self.s
    }

    fn next_digit(&mut self) -> Option<Digit> {
        let m = self.block;
        let free = self.schedule.free_len(m);
        let run = self.schedule.run_len(m);
        let digit = if self.in_block < free {
            self.free.next_digit()?
        } else if self.in_block < free + run {
            0
        } else {
            1
        };
        self.in_block += 1;
        if self.in_block == free + 2 * run {
            self.block += 1;
            self.in_block = 0;
        }
        self.pos += 1;
        Some(digit)
    }

    fn position(&self) -> u64 {
        self.pos
    }

    fn reset(&mut self) {
        self.free.reset();
        self.block = 1;
        self.in_block = 0;
        self.pos = 0;
    }
}

/// Decimal digits of successive integers drawn from an iterator.
#[derive(Debug, Clone)]
struct Concatenation<I> {
    make: fn() -> I,
    source: I,
    buf: Vec<Digit>,
    idx: usize,
    pos: u64,
}

impl<I: Iterator<Item = u64>> Concatenation<I> {
    fn new(make: fn() -> I) -> Self {
        Concatenation {
            make,
            source: make(),
            buf: Vec::new(),
            idx: 0,
            pos: 0,
        }
    }

    fn next(&mut self) -> Option<Digit> {
        if self.idx == self.buf.len() {
            let n = self.source.next()?;
            self.buf = n.to_string().bytes().map(|b| b - b'0').collect();
            self.idx = 0;
        }
        let d = self.buf[self.idx];
        self.idx += 1;
        self.pos += 1;
        Some(d)
    }

    fn reset(&mut self) {
        self.source = (self.make)();
        self.buf.clear();
        self.idx = 0;
        self.pos = 0;
    }
}

/// 0.123456789101112… in base 10.
#[derive(Debug, Clone)]
pub struct ChampernowneStream {
    inner: Concatenation<std::ops::RangeFrom<u64>>,
}

impl ChampernowneStream {
    pub fn new() -> ChampernowneStream {
        ChampernowneStream {
            inner: Concatenation::new(|| 1..),
        }
    }
}

impl Default for ChampernowneStream {
    fn default() -> Self {
        Self::new()
    }
}

impl DigitStream for ChampernowneStream {
    fn alphabet(&self) -> usize {
        10
    }
    fn next_digit(&mut self) -> Option<Digit> {
        self.inner.next()
    }
    fn position(&self) -> u64 {
        self.inner.pos
    }
    fn reset(&mut self) {
        self.inner.reset()
    }
}

/// 0.235711131719… in base 10: the primes written in order.
#[derive(Debug, Clone)]
pub struct CopelandErdosStream {
    inner: Concatenation<PrimeSieve>,
}

impl CopelandErdosStream {
    pub fn new() -> CopelandErdosStream {
        CopelandErdosStream {
            inner: Concatenation::new(PrimeSieve::new),
        }
    }
}

impl Default for CopelandErdosStream {
    fn default() -> Self {
        Self::new()
    }
}

impl DigitStream for CopelandErdosStream {
    fn alphabet(&self) -> usize {
        10
    }
    fn next_digit(&mut self) -> Option<Digit> {
        self.inner.next()
    }
    fn position(&self) -> u64 {
        self.inner.pos
    }
    fn reset(&mut self) {
        self.inner.reset()
    }
}

const SEGMENT: u64 = 1 << 15;

/// Incremental segmented sieve of Eratosthenes yielding primes in order.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    base: Vec<u64>,
    seg_start: u64,
    found: Vec<u64>,
    idx: usize,
}

impl PrimeSieve {
    pub fn new() -> PrimeSieve {
        PrimeSieve {
            base: Vec::new(),
            seg_start: 2,
            found: Vec::new(),
            idx: 0,
        }
    }

    fn extend_base(&mut self, limit: u64) {
        let mut n = self.base.last().map_or(2, |p| p + 1);
        while n <= limit {
            if self
                .base
                .iter()
                .take_while(|&&p| p * p <= n)
                .all(|p| !n.is_multiple_of(*p))
            {
                self.base.push(n);
            }
            n += 1;
        }
    }

    fn sieve_segment(&mut self) {
        let lo = self.seg_start;
        let hi = lo + SEGMENT;
        self.extend_base(((hi as f64).sqrt() as u64) + 1);
        let mut composite = vec![false; SEGMENT as usize];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let mut m = (lo.div_ceil(p) * p).max(p * p);
            while m < hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        self.found = (lo..hi)
            .filter(|&n| !composite[(n - lo) as usize])
            .collect();
        self.idx = 0;
        self.seg_start = hi;
    }
}

impl Default for PrimeSieve {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.idx == self.found.len() {
            self.sieve_segment();
        }
        let p = self.found[self.idx];
        self.idx += 1;
        Some(p)
    }
}

/// The period (0 1 … s−1), normal in base s.
pub fn cyclic_normal(s: usize) -> Result<PeriodicDigits> {
    let period: Vec<usize> = (0..s).collect();
    PeriodicDigits::pure(DigitWord::from_usizes(&period, s)?)
}
