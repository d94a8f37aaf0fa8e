use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;

/// Symbol set of size `base^width`.
///
/// A plain `q`-ary alphabet has `width == 1`. Aggregation produces tuples of
/// base symbols; a tuple is packed big-endian into one integer, so the
/// packed value's base-`base` digits are the tuple entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    base: u64,
    width: u32,
}

impl Alphabet {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::input(format!("alphabet size must be at least 2, got {q}")));
        }
        Ok(Alphabet { base: q, width: 1 })
    }

    pub fn tuples(base: u64, width: u32) -> Result<Self> {
        if base < 2 || width == 0 {
            return Err(Error::input("tuple alphabet needs base >= 2 and width >= 1"));
        }
        base.checked_pow(width)
            .ok_or_else(|| Error::input(format!("alphabet {base}^{width} does not fit in 64 bits")))?;
        Ok(Alphabet { base, width })
    }

    pub fn size(&self) -> u64 {
        self.base.pow(self.width)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// True for a prime field `F_q` used directly (not as tuples).
    pub fn is_prime_field(&self) -> bool {
        self.width == 1 && is_prime(self.base)
    }

    /// `t`-fold product alphabet.
    pub fn power(&self, t: u32) -> Result<Self> {
        let width = self
            .width
            .checked_mul(t)
            .ok_or_else(|| Error::input("product alphabet width overflow"))?;
        Alphabet::tuples(self.base, width)
    }
}

/// An `n x N` matrix over an alphabet; column `j` is the `j`-th codeword.
///
/// Columns form a multiset: duplicates are legal and never removed implicitly.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    alphabet: Alphabet,
    n: usize,
    // column-major, `N * n` symbols
    data: Vec<u64>,
}

impl CodeMatrix {
    /// Builds a code from a flat column-major buffer (`N` codewords of length `n`).
    pub fn from_flat(alphabet: Alphabet, n: usize, data: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("block length must be at least 1"));
        }
        if data.is_empty() || !data.len().is_multiple_of(n) {
            return Err(Error::input(format!(
                "buffer of {} symbols is not a positive multiple of n = {n}",
                data.len()
            )));
        }
        let q = alphabet.size();
        if let Some(pos) = data.iter().position(|&s| s >= q) {
            return Err(Error::input(format!(
                "symbol {} at codeword {}, position {} is outside [0, {q})",
                data[pos],
                pos / n,
                pos % n
            )));
        }
        Ok(CodeMatrix { alphabet, n, data })
    }

    pub fn from_codewords<I, W>(q: u64, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[u64]>,
    {
        Self::from_codewords_over(Alphabet::new(q)?, words)
    }

    pub fn from_codewords_over<I, W>(alphabet: Alphabet, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[u64]>,
    {
        let mut data = Vec::new();
        let mut n = None;
        for w in words {
            let w = w.as_ref();
            match n {
                None => n = Some(w.len()),
                Some(len) if len != w.len() => {
                    return Err(Error::input(format!(
                        "codeword lengths differ: {len} vs {}",
                        w.len()
                    )))
                }
                _ => {}
            }
            data.extend_from_slice(w);
        }
        let n = n.ok_or_else(|| Error::input("a code needs at least one codeword"))?;
        Self::from_flat(alphabet, n, data)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Alphabet size.
    pub fn q(&self) -> u64 {
        self.alphabet.size()
    }

    /// Block length (number of rows).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of codewords (columns), counting duplicates.
    pub fn len(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn codeword(&self, j: usize) -> &[u64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    #[inline]
    pub fn symbol(&self, row: usize, col: usize) -> u64 {
        self.data[col * self.n + row]
    }

    pub fn codewords(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.data.chunks_exact(self.n)
    }

    pub fn row(&self, i: usize) -> Vec<u64> {
        self.codewords().map(|c| c[i]).collect()
    }

    pub fn as_flat(&self) -> &[u64] {
        &self.data
    }

    /// Subcode made of the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<CodeMatrix> {
        let mut data = Vec::with_capacity(cols.len() * self.n);
        for &c in cols {
            if c >= self.len() {
                return Err(Error::input(format!("column {c} out of range (N = {})", self.len())));
            }
            data.extend_from_slice(self.codeword(c));
        }
        CodeMatrix::from_flat(self.alphabet, self.n, data)
    }

    /// Number of distinct codeword values.
    pub fn distinct_count(&self) -> usize {
        self.codewords().collect::<HashSet<_>>().len()
    }

    pub fn check_word(&self, z: &[u64]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::input(format!(
                "word has length {}, code has block length {}",
                z.len(),
                self.n
            )));
        }
        if let Some(&s) = z.iter().find(|&&s| s >= self.q()) {
            return Err(Error::input(format!("symbol {s} outside alphabet of size {}", self.q())));
        }
        Ok(())
    }
}

impl fmt::Debug for CodeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodeMatrix(q={}, n={}, N={}) [", self.q(), self.n, self.len())?;
        for (i, c) in self.codewords().enumerate().take(8) {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}")?;
        }
        if self.len() > 8 {
            write!(f, ", ...")?;
        }
        write!(f, "]")
    }
}
