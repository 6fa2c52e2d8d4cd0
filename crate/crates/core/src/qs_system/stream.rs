use super::digits::{Digit, DigitWord, PeriodicDigits};
use crate::error::{QsError, Result};

/// Default cap on how many digits may be materialized from a stream.
pub const DEFAULT_MAX_DIGITS: u64 = 1 << 22;

/// An unbounded (or finite), resettable source of digits.
///
/// Implementations are deterministic: after `reset` the same digits are
/// produced again from position 0.
pub trait DigitStream {
    /// Alphabet size s; every emitted digit is `< s`.
    fn alphabet(&self) -> usize;

    /// Next digit, or `None` when a finite source runs out.
    fn next_digit(&mut self) -> Option<Digit>;

    /// Number of digits emitted since construction or the last reset.
    fn position(&self) -> u64;

    fn reset(&mut self);

    /// Collects the next `n` digits into a word.
    fn take_word(&mut self, n: u64, cap: u64) -> Result<DigitWord> {
        if n > cap {
            return Err(QsError::PrefixTooLong { requested: n, cap });
        }
        let start = self.position();
        let mut digits = Vec::with_capacity(n as usize);
        for _ in 0..n {
            match self.next_digit() {
                Some(d) => digits.push(d),
                None => {
                    return Err(QsError::StreamExhausted {
                        needed: start + n,
                        available: self.position(),
                    })
                }
            }
        }
        Ok(DigitWord::new_unchecked(digits, self.alphabet()))
    }
}

impl<S: DigitStream + ?Sized> DigitStream for Box<S> {
    fn alphabet(&self) -> usize {
        (**self).alphabet()
    }
    fn next_digit(&mut self) -> Option<Digit> {
        (**self).next_digit()
    }
    fn position(&self) -> u64 {
        (**self).position()
    }
    fn reset(&mut self) {
        (**self).reset()
    }
}

impl<S: DigitStream + ?Sized> DigitStream for &mut S {
    fn alphabet(&self) -> usize {
        (**self).alphabet()
    }
    fn next_digit(&mut self) -> Option<Digit> {
        (**self).next_digit()
    }
    fn position(&self) -> u64 {
        (**self).position()
    }
    fn reset(&mut self) {
        (**self).reset()
    }
}

/// Finite stream over a materialized word.
#[derive(Debug, Clone)]
pub struct WordStream {
    word: DigitWord,
    pos: usize,
}

impl WordStream {
    pub fn new(word: DigitWord) -> WordStream {
        WordStream { word, pos: 0 }
    }
}

impl DigitStream for WordStream {
    fn alphabet(&self) -> usize {
        self.word.alphabet()
    }

    fn next_digit(&mut self) -> Option<Digit> {
        let d = self.word.digits().get(self.pos).copied();
        if d.is_some() {
            self.pos += 1;
        }
        d
    }

    fn position(&self) -> u64 {
        self.pos as u64
    }

    fn reset(&mut self) {
        self.pos = 0;
    }
}

/// Infinite stream over an eventually periodic representation.
#[derive(Debug, Clone)]
pub struct PeriodicStream {
    digits: PeriodicDigits,
    pos: u64,
}

impl PeriodicStream {
    pub fn new(digits: PeriodicDigits) -> PeriodicStream {
        PeriodicStream { digits, pos: 0 }
    }
}

impl DigitStream for PeriodicStream {
    fn alphabet(&self) -> usize {
        self.digits.alphabet()
    }

    fn next_digit(&mut self) -> Option<Digit> {
        self.pos += 1;
        Some(self.digits.digit_at(self.pos))
    }

    fn position(&self) -> u64 {
        self.pos
    }

    fn reset(&mut self) {
        self.pos = 0;
    }
}

/// A finite word followed by another stream.
#[derive(Debug, Clone)]
pub struct Prefixed<S> {
    prefix: DigitWord,
    inner: S,
    pos: u64,
}

impl<S: DigitStream> Prefixed<S> {
    pub fn new(prefix: DigitWord, inner: S) -> Prefixed<S> {
        Prefixed {
            prefix,
            inner,
            pos: 0,
        }
    }
}

impl<S: DigitStream> DigitStream for Prefixed<S> {
    fn alphabet(&self) -> usize {
        self.prefix.alphabet().max(self.inner.alphabet())
    }

    fn next_digit(&mut self) -> Option<Digit> {
        let d = match self.prefix.digits().get(self.pos as usize) {
            Some(&d) => Some(d),
            None => self.inner.next_digit(),
        };
        if d.is_some() {
            self.pos += 1;
        }
        d
    }

    fn position(&self) -> u64 {
        self.pos
    }

    fn reset(&mut self) {
        self.pos = 0;
        self.inner.reset();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_stream_exhausts() {
        let mut st = WordStream::new(DigitWord::from_usizes(&[1, 0], 2).unwrap());
        assert_eq!(
            st.take_word(3, DEFAULT_MAX_DIGITS),
            Err(QsError::StreamExhausted {
                needed: 3,
                available: 2
            })
        );
        st.reset();
        assert_eq!(
            st.take_word(2, DEFAULT_MAX_DIGITS).unwrap().digits(),
            &[1, 0]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let mut st = PeriodicStream::new(PeriodicDigits::constant(1, 2).unwrap());
        assert_eq!(
            st.take_word(11, 10),
            Err(QsError::PrefixTooLong {
                requested: 11,
                cap: 10
            })
        );
    }

    #[test]
    fn prefixed_replays_after_reset() {
        let inner = PeriodicStream::new(PeriodicDigits::constant(0, 3).unwrap());
        let mut st = Prefixed::new(DigitWord::from_usizes(&[2, 1], 3).unwrap(), inner);
        let a = st.take_word(5, 100).unwrap();
        st.reset();
        let b = st.take_word(5, 100).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.digits(), &[2, 1, 0, 0, 0]);
    }
}
