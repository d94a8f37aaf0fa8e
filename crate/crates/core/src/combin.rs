//! Binomials and in-place subset enumeration.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul(n as u128 - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// `base^exp`, saturating at `u128::MAX`.
pub fn pow_u128(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base as u128) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

/// Advances `idx` to the next `k`-subset of `[0, n)` in lexicographic order.
/// Returns false after the last subset.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `k`-subset of `[0, n)` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        if k == 0 || !next_combination(&mut idx, n) {
            break;
        }
    }
}

/// Advances a mixed-radix counter (each digit in `[0, radix)`). Returns false on wrap.
pub fn next_word(word: &mut [u64], radix: u64) -> bool {
    for d in word.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Calls `f` on every permutation of `items` (Heap's algorithm).
pub fn for_each_permutation<T: Clone>(items: &[T], mut f: impl FnMut(&[T])) {
    let mut a = items.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Highest-scoring `k`-subset of `[0, n)` (`1 <= k <= n`), ties going to the
/// lexicographically smallest subset. Work is split by first element across
/// threads; the result does not depend on scheduling.
pub fn argmax_subset<F>(n: usize, k: usize, score: F) -> (u64, Vec<usize>)
where
    F: Fn(&[usize], &mut Vec<u64>) -> u64 + Sync,
{
    use rayon::prelude::*;
    assert!(k >= 1 && k <= n, "subset size {k} out of range for {n} items");
    (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut buf = Vec::new();
            let mut subset = vec![first; k];
            let mut tail: Vec<usize> = (0..k - 1).collect();
            let rest = n - first - 1;
            let mut best: Option<(u64, Vec<usize>)> = None;
            loop {
                for (slot, &t) in subset[1..].iter_mut().zip(&tail) {
                    *slot = t + first + 1;
                }
                let v = score(&subset, &mut buf);
                if best.as_ref().is_none_or(|b| v > b.0) {
                    best = Some((v, subset.clone()));
                }
                if k == 1 || !next_combination(&mut tail, rest) {
                    break;
                }
            }
            best.unwrap()
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 5), BigUint::default());
        assert_eq!(binomial_u128(52, 5), 2_598_960);
        assert_eq!(binomial_u128(10, 0), 1);
        assert_eq!(binomial(200, 100).to_string().len(), 59);
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_subset(5, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(sorted, seen);

        let mut empty = 0;
        for_each_subset(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn permutations() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(&[0, 1, 2, 3], |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn words() {
        let mut w = vec![0u64; 3];
        let mut count = 1;
        while next_word(&mut w, 3) {
            count += 1;
        }
        assert_eq!(count, 27);
    }
}
