//! Deterministic enumeration orders for candidate error patterns.
//!
//! Support sets are visited in colexicographic order: all subsets confined to
//! the first `t` positions come before any subset touching position `t + 1`,
//! so with positions listed least-reliable first the search concentrates on
//! unreliable positions. Within one support, per-position hypothesis choices
//! advance like an odometer whose first (least-reliable) digit spins fastest.

use std::ops::ControlFlow;

/// Visits every `w`-subset of `{0, .., n-1}` in colexicographic order. The
/// slice passed to `visit` holds the chosen indices in ascending order.
pub fn for_each_combination(
    n: usize,
    w: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if w > n {
        return ControlFlow::Continue(());
    }
    let mut support: Vec<usize> = (0..w).collect();
    loop {
        visit(&support)?;
        // Colex successor: bump the lowest index with headroom, reset the
        // ones below it.
        let mut i = 0;
        loop {
            if i == w {
                return ControlFlow::Continue(());
            }
            let limit = if i + 1 < w { support[i + 1] } else { n };
            if support[i] + 1 < limit {
                support[i] += 1;
                for (j, slot) in support.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
    }
}

/// Visits every ordered pair of disjoint subsets `(S1, S2)` of
/// `{0, .., n-1}` with `|S1| = w1`, `|S2| = w2`: `S1` in colex order, and for
/// each `S1`, `S2` in colex order over the remaining positions.
pub fn for_each_disjoint_pair(
    n: usize,
    w1: usize,
    w2: usize,
    mut visit: impl FnMut(&[usize], &[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if w1 + w2 > n {
        return ControlFlow::Continue(());
    }
    let mut s2_buf = vec![0usize; w2];
    for_each_combination(n, w1, |s1| {
        let mut remaining = Vec::with_capacity(n - w1);
        let mut cursor = 0;
        for p in 0..n {
            if cursor < w1 && s1[cursor] == p {
                cursor += 1;
            } else {
                remaining.push(p);
            }
        }
        for_each_combination(remaining.len(), w2, |picks| {
            for (slot, &r) in s2_buf.iter_mut().zip(picks) {
                *slot = remaining[r];
            }
            visit(s1, &s2_buf)
        })
    })
}

/// Steps a mixed-radix counter over per-slot choice counts, first digit
/// fastest. `visit` receives the current digit per slot. Slots with zero
/// choices make the whole product empty.
pub fn for_each_choice(
    counts: &[usize],
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if counts.contains(&0) {
        return ControlFlow::Continue(());
    }
    let mut digits = vec![0usize; counts.len()];
    loop {
        visit(&digits)?;
        let mut i = 0;
        loop {
            if i == counts.len() {
                return ControlFlow::Continue(());
            }
            digits[i] += 1;
            if digits[i] < counts[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
