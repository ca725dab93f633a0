//! Linear algebra over GF(2) on packed bit rows.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            row.set(i, b);
        }
        row
    }

    /// Parities of an integer vector.
    pub fn from_parities(values: &[u32]) -> Self {
        let mut row = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            row.set(i, v % 2 == 1);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn dot(&self, other: &BitRow) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// Highest set index.
    pub fn top(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitRow({s})")
    }
}

/// Basis of `{m : row . m = 0 for every row}`, each `m` of length `width`.
pub fn nullspace(rows: &[BitRow], width: usize) -> Vec<BitRow> {
    // reduced row echelon form
    let mut m: Vec<BitRow> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = BitRow::zeros(width);
            v.set(f, true);
            for (row, &pc) in m.iter().zip(&pivots) {
                if row.get(f) {
                    v.set(pc, true);
                }
            }
            v
        })
        .collect()
}

/// Smallest nonzero vector of the span of `basis`, reading a vector as the
/// integer `sum m_i 2^i` (entry 0 least significant).
pub fn smallest_nonzero(basis: &[BitRow]) -> Option<BitRow> {
    // xor basis keyed by top bit; the element with the lowest top bit is
    // the unique span element with that top bit
    let mut reduced: Vec<BitRow> = Vec::new();
    for v in basis {
        let mut v = v.clone();
        while let Some(t) = v.top() {
            match reduced.iter().find(|b| b.top() == Some(t)) {
                Some(b) => v.xor_assign(b),
                None => break,
            }
        }
        if !v.is_zero() {
            reduced.push(v);
        }
    }
    reduced.into_iter().min_by_key(BitRow::top)
}

pub fn rank(rows: &[BitRow], width: usize) -> usize {
    width - nullspace(rows, width).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_smallest(rows: &[BitRow], width: usize) -> Option<u64> {
        (1u64..1 << width).find(|&m| {
            let v = BitRow::from_bits(&(0..width).map(|i| m >> i & 1 == 1).collect::<Vec<_>>());
            rows.iter().all(|r| !r.dot(&v))
        })
    }

    fn as_int(v: &BitRow) -> u64 {
        v.ones().iter().map(|&i| 1u64 << i).sum()
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![BitRow::from_bits(&[true, true, false, true]), BitRow::from_bits(&[false, true, true, false])];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(rows.iter().all(|r| !r.dot(v)));
        }
    }

    #[test]
    fn smallest_matches_brute_force() {
        let cases: Vec<Vec<Vec<bool>>> = vec![
            vec![vec![true, false]],
            vec![vec![false, false]],
            vec![vec![true, true, true]],
            vec![vec![true, false, false], vec![false, true, false], vec![false, false, true]],
            vec![vec![false, true, true, false, true], vec![true, true, false, false, false]],
        ];
        for rows in cases {
            let width = rows[0].len();
            let rows: Vec<BitRow> = rows.iter().map(|r| BitRow::from_bits(r)).collect();
            let got = smallest_nonzero(&nullspace(&rows, width)).map(|v| as_int(&v));
            assert_eq!(got, brute_force_smallest(&rows, width), "{rows:?}");
        }
    }

    #[test]
    fn exhaustive_small_matrices() {
        // every 2x3 matrix over GF(2)
        for bits in 0u32..64 {
            let rows: Vec<BitRow> = (0..2)
                .map(|r| BitRow::from_bits(&(0..3).map(|c| bits >> (3 * r + c) & 1 == 1).collect::<Vec<_>>()))
                .collect();
            let got = smallest_nonzero(&nullspace(&rows, 3)).map(|v| as_int(&v));
            assert_eq!(got, brute_force_smallest(&rows, 3));
        }
    }

    #[test]
    fn top_bit() {
        let mut v = BitRow::zeros(130);
        assert_eq!(v.top(), None);
        v.set(3, true);
        v.set(129, true);
        assert_eq!(v.top(), Some(129));
        assert_eq!(BitRow::from_parities(&[2, 3, 1]).ones(), vec![1, 2]);
    }
}
