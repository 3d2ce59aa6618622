//! AME certification and the integer arithmetic behind the parity-rule
//! exclusion argument.
//!
//! For a qubit AME state with `h = ⌊n/2⌋`, every reduction to `k > h`
//! qubits satisfies `(ϱ_(k) ⊗ I)|ψ⟩ = 2^{-(n-k)}|ψ⟩`. Expanding `ϱ_(k)` in
//! the Bloch basis, where all terms of weight `≤ h` vanish, and writing
//! `λ_j` for the common eigenvalue of a single-support weight-`j` component
//! gives the recurrence
//!
//! ```text
//! Σ_{j=h+1}^{k} C(k, j) λ_j = 2^{2k-n} - 1
//! ```
//!
//! The projector identity `ϱ_(m)² = 2^{-(n-m)} ϱ_(m)` on `m = h + 2` qubits,
//! restricted to the odd-weight part through the parity rule and applied to
//! `|ψ⟩`, then yields one integer equation per `n`. Everything here is exact.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{binomial, k_subsets, k_subsets_wide};
use crate::error::{Error, Result};
use crate::state::{mask_to_qubits, StateVector};

/// Every `⌊n/2⌋`-qubit marginal (and every smaller one) is maximally mixed.
pub fn is_ame(state: &StateVector, tol: f64) -> bool {
    let n = state.n();
    (1..=n / 2).all(|k| {
        k_subsets(n, k).all(|s| state.reduced_density_mask(s).max_deviation_from_mixed() <= tol)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedMarginalCount {
    pub k: usize,
    pub count: usize,
    pub total: usize,
    pub failing: Vec<Vec<usize>>,
}

/// Counts the `k`-qubit marginals that are maximally mixed within `tol`.
pub fn count_mixed_marginals(state: &StateVector, k: usize, tol: f64) -> Result<MixedMarginalCount> {
    let n = state.n();
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let subsets: Vec<u32> = k_subsets(n, k).collect();
    let flags: Vec<bool> = subsets
        .par_iter()
        .map(|&s| s == 0 || state.reduced_density_mask(s).max_deviation_from_mixed() <= tol)
        .collect();
    let failing: Vec<Vec<usize>> = subsets
        .iter()
        .zip(&flags)
        .filter(|(_, &ok)| !ok)
        .map(|(&s, _)| mask_to_qubits(s))
        .collect();
    Ok(MixedMarginalCount {
        k,
        count: flags.iter().filter(|&&f| f).count(),
        total: subsets.len(),
        failing,
    })
}

/// Largest even and odd party numbers for which an AME state of local
/// dimension `d` is not ruled out: `(2(d²−1), 2d(d+1)−1)`.
pub fn scott_rains_bound(d: u64) -> Result<(u64, u64)> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    let even = d.checked_mul(d).and_then(|d2| (d2 - 1).checked_mul(2));
    let odd = d
        .checked_mul(d + 1)
        .and_then(|x| x.checked_mul(2))
        .map(|x| x - 1);
    match (even, odd) {
        (Some(e), Some(o)) => Ok((e, o)),
        _ => Err(Error::Overflow("scott_rains_bound")),
    }
}

/// Non-negativity of the weight-`(h+2)` coefficient mass inside an
/// `(h+2)`-qubit reduction, the condition the bound is recast from.
pub fn rains_condition_holds(d: u64, n: u64) -> bool {
    let h = (n / 2) as i128;
    let d = d as i128;
    if n.is_multiple_of(2) {
        (d.pow(4) - 1) - (h + 2) * (d * d - 1) >= 0
    } else {
        (d.pow(3) - 1) - (h + 2) * (d - 1) >= 0
    }
}

fn pow2(e: usize) -> Result<i128> {
    if e >= 126 {
        return Err(Error::Overflow("power of two"));
    }
    Ok(1i128 << e)
}

fn binom_i128(n: usize, k: usize) -> i128 {
    binomial(n as u64, k as u64) as i128
}

/// Eigenvalues `λ_{h+1}..λ_{k_max}` of single-support Bloch components on an
/// `n`-qubit AME state, from the recurrence in the module docs.
pub fn p_eigenvalues(n: usize, k_max: usize) -> Result<BTreeMap<usize, i128>> {
    let h = n / 2;
    if n < 2 || k_max <= h || k_max > n {
        return Err(Error::InvalidArgument(format!(
            "need n ≥ 2 and ⌊n/2⌋ < k_max ≤ n, got n = {n}, k_max = {k_max}"
        )));
    }
    let mut lambdas = BTreeMap::new();
    for k in h + 1..=k_max {
        let mut value = pow2(2 * k - n)? - 1;
        for (&j, &l) in &lambdas {
            let term = binom_i128(k, j)
                .checked_mul(l)
                .ok_or(Error::Overflow("p_eigenvalues"))?;
            value = value.checked_sub(term).ok_or(Error::Overflow("p_eigenvalues"))?;
        }
        lambdas.insert(k, value);
    }
    Ok(lambdas)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseLabel {
    TooSmall,
    Case1EvenEven,
    Case2EvenOdd,
    Case3OddEven,
    Case4OddOdd,
    Case4N11Extension,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::TooSmall => "too-small",
            CaseLabel::Case1EvenEven => "case1-even-even",
            CaseLabel::Case2EvenOdd => "case2-even-odd",
            CaseLabel::Case3OddEven => "case3-odd-even",
            CaseLabel::Case4OddOdd => "case4-odd-odd",
            CaseLabel::Case4N11Extension => "case4-n11-extension",
        }
    }
}

/// Outcome of the parity-rule argument for one `n`, with its arithmetic.
///
/// The collected odd-weight equation reads `scale·lhs = scale·rhs` on `|ψ⟩`;
/// the verdict is a contradiction exactly when `lhs ≠ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExclusionVerdict {
    pub n: usize,
    pub excluded: bool,
    pub case_label: CaseLabel,
    /// Size of the reduced state whose projector identity is used.
    pub reduced_size: usize,
    pub lhs: i128,
    pub rhs: i128,
    pub scale: i128,
    pub eigenvalues_used: BTreeMap<usize, i128>,
    pub equation: String,
}

/// Runs the parity-rule exclusion argument for `n` qubits.
pub fn parity_exclusion(n: usize) -> Result<ExclusionVerdict> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} < 2")));
    }
    let h = n / 2;
    let m = h + 2;
    if m > n {
        return Ok(ExclusionVerdict {
            n,
            excluded: false,
            case_label: CaseLabel::TooSmall,
            reduced_size: m,
            lhs: 0,
            rhs: 0,
            scale: 1,
            eigenvalues_used: BTreeMap::new(),
            equation: format!("reduced state of size {m} exceeds n = {n}"),
        });
    }
    let lambdas = p_eigenvalues(n, m)?;
    let (l1, l2) = (lambdas[&(h + 1)], lambdas[&(h + 2)]);
    // (ϱ-expansion)² = 2^{2m-n}·(ϱ-expansion): odd part gives
    // {Q_{h+1}, Q_{h+2}} = (2^{2m-n} - 2)·Q_odd.
    let c = pow2(2 * m - n)? - 2;
    let mi = m as i128;
    let ovf = || Error::Overflow("parity_exclusion");
    let lhs = (2 * mi)
        .checked_mul(l1)
        .and_then(|x| x.checked_mul(l2))
        .ok_or_else(ovf)?;
    let odd_low = h.is_multiple_of(2); // weight h+1 is the odd one
    let (label, rhs, equation) = match (n.is_multiple_of(2), odd_low) {
        (true, true) => (
            CaseLabel::Case1EvenEven,
            c * mi * l1,
            format!("2·{m}·λ{}·λ{} = {c}·{m}·λ{}", h + 1, h + 2, h + 1),
        ),
        (true, false) => (
            CaseLabel::Case2EvenOdd,
            c * l2,
            format!("2·{m}·λ{}·λ{} = {c}·λ{}", h + 1, h + 2, h + 2),
        ),
        (false, true) => (
            CaseLabel::Case3OddEven,
            c * mi * l1,
            format!("2·{m}·λ{}·λ{} = {c}·{m}·λ{}", h + 1, h + 2, h + 1),
        ),
        (false, false) => (
            CaseLabel::Case4OddOdd,
            c * l2,
            format!("2·{m}·λ{}·λ{} = {c}·λ{}", h + 1, h + 2, h + 2),
        ),
    };
    if label == CaseLabel::Case4OddOdd && l2 == 0 {
        return extended_exclusion(n);
    }
    Ok(ExclusionVerdict {
        n,
        excluded: lhs != rhs,
        case_label: label,
        reduced_size: m,
        lhs,
        rhs,
        scale: 1,
        eigenvalues_used: lambdas,
        equation,
    })
}

/// Case 4 with `λ_{h+2} = 0`: repeat the odd-weight collection on the
/// reduction of size `h + 4`. Odd weights there are `h+2` (annihilates `|ψ⟩`)
/// and `h+4`; after dividing by `2·λ_{h+4}` the equation becomes
/// `C(h+4, h+1)·λ_{h+1} + C(h+4, h+3)·λ_{h+3} = (2^{2(h+4)-n} - 2)/2`.
fn extended_exclusion(n: usize) -> Result<ExclusionVerdict> {
    let h = n / 2;
    let m = h + 4;
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "extended argument needs h + 4 ≤ n, got n = {n}"
        )));
    }
    let lambdas = p_eigenvalues(n, m)?;
    let top = lambdas[&m];
    let lhs = binom_i128(m, h + 1) * lambdas[&(h + 1)] + binom_i128(m, h + 3) * lambdas[&(h + 3)];
    let c = pow2(2 * m - n)? - 2;
    let rhs = c / 2;
    let equation = format!(
        "C({m},{})·λ{} + C({m},{})·λ{} = {c}/2",
        h + 1,
        h + 1,
        h + 3,
        h + 3
    );
    Ok(ExclusionVerdict {
        n,
        // with λ_{h+4} = 0 both sides of the undivided equation vanish
        excluded: top != 0 && lhs != rhs,
        case_label: CaseLabel::Case4N11Extension,
        reduced_size: m,
        lhs,
        rhs,
        scale: 2 * top,
        eigenvalues_used: lambdas,
        equation,
    })
}

const SEVEN: u32 = 0b111_1111;

/// Which 5-qubit reductions of a 7-qubit state remain usable for the
/// exclusion argument when some 3-qubit marginals are not maximally mixed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountingReport {
    pub bad_threes: Vec<Vec<usize>>,
    pub usable_fives: Vec<Vec<usize>>,
    pub usable_count: usize,
}

fn three_mask(subset: &[usize]) -> Result<u32> {
    if subset.len() != 3 {
        return Err(Error::InvalidSubset(format!("{subset:?} is not a 3-subset")));
    }
    let mut mask = 0u32;
    for &q in subset {
        if q >= 7 || mask >> q & 1 == 1 {
            return Err(Error::InvalidSubset(format!("{subset:?} is not a 3-subset of 0..7")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

fn usable_mask(bad: &[u32]) -> impl Iterator<Item = u32> + '_ {
    k_subsets(7, 5).filter(move |&v| {
        bad.iter()
            .all(|&b| b & !v != 0 && (SEVEN & !b) & !v != 0)
    })
}

/// A 5-subset `V` is usable iff no bad `B` has `B ⊆ V` or `{0..6}∖B ⊆ V`.
pub fn usable_five_subsets(bad_threes: &[Vec<usize>]) -> Result<CountingReport> {
    let mut bad: Vec<u32> = bad_threes.iter().map(|b| three_mask(b)).collect::<Result<_>>()?;
    bad.sort_unstable();
    bad.dedup();
    let usable: Vec<u32> = usable_mask(&bad).collect();
    Ok(CountingReport {
        bad_threes: bad.iter().map(|&b| mask_to_qubits(b)).collect(),
        usable_count: usable.len(),
        usable_fives: usable.into_iter().map(mask_to_qubits).collect(),
    })
}

/// Result of searching bad-set sizes for the 7-qubit counting argument.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observation3Search {
    /// Minimum number of usable 5-subsets over all bad sets of each size.
    pub min_usable_by_size: Vec<usize>,
    /// Smallest bad-set size that leaves no usable 5-subset.
    pub emptying_size: usize,
    pub example_bad_set: Vec<Vec<usize>>,
    pub bound: usize,
}

/// Searches bad-set sizes 0, 1, 2, … until some set of non-mixed 3-qubit
/// marginals spoils every 5-qubit reduction.
pub fn observation3_search() -> Observation3Search {
    let threes: Vec<u32> = k_subsets(7, 3).collect();
    let fives: Vec<u32> = k_subsets(7, 5).collect();
    let spoils: Vec<u32> = threes
        .iter()
        .map(|&b| {
            fives.iter().enumerate().fold(0u32, |acc, (i, &v)| {
                if b & !v == 0 || (SEVEN & !b) & !v == 0 {
                    acc | 1 << i
                } else {
                    acc
                }
            })
        })
        .collect();
    let mut min_usable_by_size = vec![];
    for size in 0..=threes.len() {
        let mut best: Option<(usize, u64)> = None;
        for choice in k_subsets_wide(threes.len(), size) {
            let spoiled = members(choice).fold(0u32, |acc, i| acc | spoils[i]);
            let usable = fives.len() - spoiled.count_ones() as usize;
            if best.is_none_or(|(u, _)| usable < u) {
                best = Some((usable, choice));
            }
            if usable == 0 {
                break;
            }
        }
        let (usable, choice) = best.expect("at least one choice per size");
        min_usable_by_size.push(usable);
        if usable == 0 {
            return Observation3Search {
                min_usable_by_size,
                emptying_size: size,
                example_bad_set: members(choice)
                    .map(|i| mask_to_qubits(threes[i]))
                    .collect(),
                bound: threes.len() - size,
            };
        }
    }
    unreachable!("all 35 bad subsets spoil every 5-subset")
}

fn members(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Maximum number of maximally mixed 3-qubit marginals of a 7-qubit state
/// whose 2-qubit marginals are all maximally mixed.
pub fn observation3_bound() -> usize {
    observation3_search().bound
}
