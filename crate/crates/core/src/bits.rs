//! Small bitmask helpers shared by the graph and search code.

/// Binomial coefficient, exact for the small arguments used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-element subsets of `{0..n}` as bitmasks, in increasing numeric order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u32> {
    assert!(n <= 32, "k_subsets supports n ≤ 32");
    k_subsets_wide(n, k).map(|s| s as u32)
}

/// [`k_subsets`] for ground sets of up to 63 elements.
pub fn k_subsets_wide(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n < 64, "k_subsets_wide supports n < 64");
    let limit = 1u64 << n;
    let first = if k > n { limit } else { (1u64 << k) - 1 };
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur)
    })
}

/// Colex rank of the unordered pair `{u, v}`.
pub fn edge_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}
