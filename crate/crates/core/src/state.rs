//! Dense pure states and their marginals.
//!
//! Amplitude index `i` encodes the computational basis ket whose qubit `j`
//! is bit `j` of `i`. Within a reduced density matrix on a subset, the
//! subset's qubits are taken in ascending order and the `t`-th of them is
//! bit `t` of the row/column index.

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

pub const MAX_STATE_QUBITS: usize = 12;
/// Tolerance for single comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance for aggregates over `4^n` terms.
pub const AGGREGATE_TOL: f64 = 1e-6;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub qubits: Vec<usize>,
    pub entries: DMatrix<Complex64>,
}

/// Summed squared Bloch coefficients grouped by weight, `A_0..A_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorLengths {
    pub values: Vec<f64>,
}

impl SectorLengths {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Validates a qubit subset and returns it as a bitmask.
pub fn subset_mask(n: usize, subset: &[usize]) -> Result<u32> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty subset".into()));
    }
    let mut mask = 0u32;
    for &q in subset {
        if q >= n {
            return Err(Error::InvalidSubset(format!("qubit {q} out of range for n = {n}")));
        }
        if mask & (1 << q) != 0 {
            return Err(Error::InvalidSubset(format!("qubit {q} listed twice")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

pub fn mask_to_qubits(mask: u32) -> Vec<usize> {
    (0..32).filter(|j| mask >> j & 1 == 1).collect()
}

/// Scatters the low bits of `value` onto the set bits of `mask`.
fn deposit(value: usize, mask: u32) -> usize {
    let mut out = 0usize;
    let mut m = mask;
    let mut t = 0;
    while m != 0 {
        let bit = m.trailing_zeros();
        if value >> t & 1 == 1 {
            out |= 1 << bit;
        }
        m &= m - 1;
        t += 1;
    }
    out
}

/// In-place Walsh–Hadamard transform (unnormalized).
fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within [`DEFAULT_TOL`].
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(n, &amplitudes)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotNormalized(norm.sqrt()));
        }
        Ok(Self { n, amplitudes })
    }

    /// Rescales to unit norm if the input norm is within `slack` of 1.
    pub fn normalized(n: usize, mut amplitudes: Vec<Complex64>, slack: f64) -> Result<Self> {
        Self::check_shape(n, &amplitudes)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > slack {
            return Err(Error::NotNormalized(norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { n, amplitudes })
    }

    fn check_shape(n: usize, amplitudes: &[Complex64]) -> Result<()> {
        if n == 0 || n > MAX_STATE_QUBITS {
            return Err(Error::UnsupportedSize {
                n,
                max: MAX_STATE_QUBITS,
            });
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for n = {n}, got {}",
                1usize << n,
                amplitudes.len()
            )));
        }
        Ok(())
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n.min(31)];
        if index >= amps.len() {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range")));
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n.min(31)];
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = a;
        *amps.last_mut().unwrap() = a;
        Self::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn check_pauli(&self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch(p.n(), self.n));
        }
        Ok(())
    }

    /// `P|ψ⟩` computed by permuting amplitudes and applying phases.
    pub fn apply_pauli(&self, p: &PauliOperator) -> Result<Vec<Complex64>> {
        self.check_pauli(p)?;
        let x = p.x_mask() as usize;
        let z = p.z_mask() as usize;
        let phase = I_POW[((p.phase_exp() as u32 + p.y_count()) & 3) as usize];
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (b, a) in self.amplitudes.iter().enumerate() {
            let sign = if (z & b).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
            out[b ^ x] = phase * a * sign;
        }
        Ok(out)
    }

    /// Bloch coefficient `⟨ψ|P|ψ⟩` of a Hermitian Pauli string.
    pub fn expectation(&self, p: &PauliOperator) -> Result<f64> {
        self.check_pauli(p)?;
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.phase_exp()));
        }
        let x = p.x_mask() as usize;
        let z = p.z_mask() as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in self.amplitudes.iter().enumerate() {
            let term = self.amplitudes[b ^ x].conj() * a;
            if (z & b).count_ones() & 1 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        Ok((I_POW[((p.phase_exp() as u32 + p.y_count()) & 3) as usize] * acc).re)
    }

    /// Expectations of all unsigned strings `(x, z)` with `x` fixed and `z`
    /// ranging over `0..2^n`, indexed by `z`.
    fn expectations_for_x(&self, x: usize) -> Vec<f64> {
        let mut v: Vec<Complex64> = (0..self.dim())
            .map(|b| self.amplitudes[b ^ x].conj() * self.amplitudes[b])
            .collect();
        walsh_hadamard(&mut v);
        v.iter()
            .enumerate()
            .map(|(z, w)| (I_POW[((x & z).count_ones() & 3) as usize] * w).re)
            .collect()
    }

    /// Sector lengths, summed over all `4^n` Pauli strings.
    pub fn sector_lengths(&self) -> SectorLengths {
        let n = self.n;
        let partials: Vec<Vec<f64>> = (0..self.dim())
            .into_par_iter()
            .map(|x| {
                let mut a = vec![0.0; n + 1];
                for (z, r) in self.expectations_for_x(x).into_iter().enumerate() {
                    a[(x | z).count_ones() as usize] += r * r;
                }
                a
            })
            .collect();
        let mut values = vec![0.0; n + 1];
        for part in partials {
            for (acc, v) in values.iter_mut().zip(part) {
                *acc += v;
            }
        }
        SectorLengths { values }
    }

    /// Calls `f(pauli, r)` for every nontrivial string supported within `mask`.
    fn for_each_within(&self, mask: u32, mut f: impl FnMut(PauliOperator, f64)) {
        let mut x = 0u32;
        loop {
            let rs = self.expectations_for_x(x as usize);
            let mut z = 0u32;
            loop {
                if x | z != 0 {
                    f(PauliOperator::from_raw(self.n, x, z, 0), rs[z as usize]);
                }
                z = z.wrapping_sub(mask) & mask;
                if z == 0 {
                    break;
                }
            }
            x = x.wrapping_sub(mask) & mask;
            if x == 0 {
                break;
            }
        }
    }

    /// Partial trace onto `subset`. The full set yields `|ψ⟩⟨ψ|`.
    pub fn reduced_density(&self, subset: &[usize]) -> Result<DensityMatrix> {
        let mask = subset_mask(self.n, subset)?;
        Ok(self.reduced_density_mask(mask))
    }

    pub(crate) fn reduced_density_mask(&self, mask: u32) -> DensityMatrix {
        let k = mask.count_ones() as usize;
        let rest = !mask & ((1u32 << self.n) - 1);
        let inner: Vec<usize> = (0..1usize << k).map(|i| deposit(i, mask)).collect();
        let outer: Vec<usize> = (0..1usize << (self.n - k)).map(|c| deposit(c, rest)).collect();
        let dk = inner.len();
        let mut rho = DMatrix::from_element(dk, dk, Complex64::new(0.0, 0.0));
        for i in 0..dk {
            for j in i..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for &c in &outer {
                    acc += self.amplitudes[inner[i] | c] * self.amplitudes[inner[j] | c].conj();
                }
                rho[(i, j)] = acc;
                rho[(j, i)] = acc.conj();
            }
        }
        DensityMatrix {
            qubits: mask_to_qubits(mask),
            entries: rho,
        }
    }

    /// Marginal on `subset` equals `2^{-k}·I` entrywise within `tol`.
    pub fn is_maximally_mixed(&self, subset: &[usize], tol: f64) -> Result<bool> {
        Ok(self.reduced_density(subset)?.max_deviation_from_mixed() <= tol)
    }

    /// Alternative criterion: every nontrivial Pauli string supported within
    /// `subset` has vanishing expectation.
    pub fn is_maximally_mixed_bloch(&self, subset: &[usize], tol: f64) -> Result<bool> {
        let mask = subset_mask(self.n, subset)?;
        let mut ok = true;
        self.for_each_within(mask, |_, r| ok &= r.abs() <= tol);
        Ok(ok)
    }

    /// Eigenvalues of the marginal on `subset`, descending.
    pub fn schmidt_spectrum(&self, subset: &[usize]) -> Result<Vec<f64>> {
        Ok(self.reduced_density(subset)?.eigenvalues())
    }

    fn check_large_side(&self, subset: &[usize]) -> Result<u32> {
        let mask = subset_mask(self.n, subset)?;
        let k = mask.count_ones() as usize;
        if 2 * k < self.n {
            return Err(Error::InvalidSubset(format!(
                "subset of size {k} is the smaller side of an {}-qubit bipartition",
                self.n
            )));
        }
        Ok(mask)
    }

    /// `ϱ² = 2^{-(n-k)}ϱ` within `tol` (max-entry norm).
    pub fn projector_check(&self, subset: &[usize], tol: f64) -> Result<bool> {
        let mask = self.check_large_side(subset)?;
        let rho = self.reduced_density_mask(mask);
        let c = (0.5f64).powi((self.n - rho.k()) as i32);
        let diff = &rho.entries * &rho.entries - rho.entries.scale(c);
        Ok(diff.iter().all(|e| e.norm() <= tol))
    }

    /// `(ϱ_S ⊗ I)|ψ⟩`.
    pub fn apply_marginal(&self, subset: &[usize]) -> Result<Vec<Complex64>> {
        let mask = subset_mask(self.n, subset)?;
        let rho = self.reduced_density_mask(mask);
        Ok(self.apply_local(mask, &rho.entries))
    }

    fn apply_local(&self, mask: u32, op: &DMatrix<Complex64>) -> Vec<Complex64> {
        let k = mask.count_ones() as usize;
        let rest = !mask & ((1u32 << self.n) - 1);
        let inner: Vec<usize> = (0..1usize << k).map(|i| deposit(i, mask)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for c in (0..1usize << (self.n - k)).map(|c| deposit(c, rest)) {
            for (i, &ii) in inner.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &jj) in inner.iter().enumerate() {
                    acc += op[(i, j)] * self.amplitudes[jj | c];
                }
                out[ii | c] = acc;
            }
        }
        out
    }

    /// `‖(ϱ_S ⊗ I)|ψ⟩ − 2^{-(n-k)}|ψ⟩‖ ≤ tol`.
    pub fn eigenvector_check(&self, subset: &[usize], tol: f64) -> Result<bool> {
        self.check_large_side(subset)?;
        let k = subset.len();
        let c = (0.5f64).powi((self.n - k) as i32);
        let out = self.apply_marginal(subset)?;
        let residual = out
            .iter()
            .zip(&self.amplitudes)
            .map(|(o, a)| (o - a * c).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(residual <= tol)
    }

    /// Sum of squared Bloch coefficients over nontrivial strings supported within `subset`.
    pub fn support_sum_check(&self, subset: &[usize]) -> Result<f64> {
        let mask = subset_mask(self.n, subset)?;
        let mut sum = 0.0;
        self.for_each_within(mask, |_, r| sum += r * r);
        Ok(sum)
    }

    /// Applies the Bloch component whose support is exactly `support`,
    /// `Σ_{supp(α) = S} r_α σ_α`, and returns `(⟨ψ|·|ψ⟩, residual)` where the
    /// residual is the distance of the image from that multiple of `|ψ⟩`.
    pub fn support_component_eigenvalue(&self, support: &[usize]) -> Result<(f64, f64)> {
        let mask = subset_mask(self.n, support)?;
        let mut image = vec![Complex64::new(0.0, 0.0); self.dim()];
        self.for_each_within(mask, |p, r| {
            if p.support() == mask && r != 0.0 {
                let applied = self.apply_pauli(&p).expect("dimensions match");
                for (acc, v) in image.iter_mut().zip(applied) {
                    *acc += v * r;
                }
            }
        });
        let lambda: Complex64 = self
            .amplitudes
            .iter()
            .zip(&image)
            .map(|(a, v)| a.conj() * v)
            .sum();
        let residual = image
            .iter()
            .zip(&self.amplitudes)
            .map(|(v, a)| (v - a * lambda.re).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok((lambda.re, residual))
    }
}

impl DensityMatrix {
    pub fn k(&self) -> usize {
        self.qubits.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    pub fn max_deviation_from_mixed(&self) -> f64 {
        let d = self.entries.nrows();
        let target = 1.0 / d as f64;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let t = if i == j { target } else { 0.0 };
                worst = worst.max((self.entries[(i, j)] - t).norm());
            }
        }
        worst
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.entries.clone().symmetric_eigenvalues();
        let mut values: Vec<f64> = eig.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// Hermitian, unit trace and positive semidefinite, each within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let herm = (&self.entries - self.entries.adjoint())
            .iter()
            .all(|e| e.norm() <= tol);
        let tr = (self.trace() - Complex64::new(1.0, 0.0)).norm() <= tol;
        herm && tr && self.eigenvalues().iter().all(|&l| l >= -tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn bell() -> StateVector {
        StateVector::ghz(2).unwrap()
    }

    #[test]
    fn ghz_expectations() {
        let ghz = StateVector::ghz(3).unwrap();
        assert!((ghz.expectation(&p("ZZI")).unwrap() - 1.0).abs() < 1e-12);
        assert!(ghz.expectation(&p("ZII")).unwrap().abs() < 1e-12);
        assert!((ghz.expectation(&p("III")).unwrap() - 1.0).abs() < 1e-12);
        assert!((ghz.expectation(&p("XXX")).unwrap() - 1.0).abs() < 1e-12);
        assert!((ghz.expectation(&p("-XXX")).unwrap() + 1.0).abs() < 1e-12);
        assert!((ghz.expectation(&p("XYY")).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_errors() {
        let ghz = StateVector::ghz(3).unwrap();
        assert!(matches!(ghz.expectation(&p("ZZ")), Err(Error::DimensionMismatch(2, 3))));
        assert!(matches!(ghz.expectation(&p("+iZZZ")), Err(Error::NonHermitian(1))));
    }

    #[test]
    fn reduced_density_examples() {
        let ghz = StateVector::ghz(3).unwrap();
        let rho = ghz.reduced_density(&[0]).unwrap();
        assert!(rho.max_deviation_from_mixed() < 1e-12);
        assert!(rho.is_valid(1e-9));

        let zero = StateVector::basis(2, 0).unwrap();
        let rho = zero.reduced_density(&[0]).unwrap();
        assert!((rho.entries[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(rho.entries[(1, 1)].norm() < 1e-12);

        let rho = bell().reduced_density(&[1]).unwrap();
        assert!(rho.max_deviation_from_mixed() < 1e-12);
    }

    #[test]
    fn full_subset_gives_projector() {
        let ghz = StateVector::ghz(3).unwrap();
        let rho = ghz.reduced_density(&[2, 0, 1]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!((rho.entries[(0, 7)].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn invalid_subsets() {
        let ghz = StateVector::ghz(3).unwrap();
        assert!(matches!(ghz.reduced_density(&[]), Err(Error::InvalidSubset(_))));
        assert!(matches!(ghz.reduced_density(&[3]), Err(Error::InvalidSubset(_))));
        assert!(matches!(ghz.reduced_density(&[1, 1]), Err(Error::InvalidSubset(_))));
        assert!(matches!(ghz.projector_check(&[0], 1e-9), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn maximally_mixed_examples() {
        let ghz = StateVector::ghz(3).unwrap();
        assert!(ghz.is_maximally_mixed(&[1], 1e-9).unwrap());
        assert!(!ghz.is_maximally_mixed(&[0, 1], 1e-9).unwrap());
        assert!(ghz.is_maximally_mixed_bloch(&[1], 1e-9).unwrap());
        assert!(!ghz.is_maximally_mixed_bloch(&[0, 1], 1e-9).unwrap());
    }

    #[test]
    fn spectra() {
        let s = bell().schmidt_spectrum(&[0]).unwrap();
        assert!((s[0] - 0.5).abs() < 1e-12 && (s[1] - 0.5).abs() < 1e-12);
        let s = StateVector::basis(2, 0).unwrap().schmidt_spectrum(&[0]).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1].abs() < 1e-12);
        let s = StateVector::ghz(3).unwrap().schmidt_spectrum(&[0, 1]).unwrap();
        let expected = [0.5, 0.5, 0.0, 0.0];
        for (a, b) in s.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_two_body_marginal_is_projector() {
        let ghz = StateVector::ghz(3).unwrap();
        assert!(ghz.projector_check(&[0, 1], 1e-9).unwrap());
        assert!(ghz.eigenvector_check(&[0, 1], 1e-9).unwrap());
    }

    #[test]
    fn single_qubit_product_state_eigenvalue_one() {
        let s = StateVector::basis(1, 0).unwrap();
        assert!(s.eigenvector_check(&[0], 1e-12).unwrap());
    }

    #[test]
    fn normalization_rules() {
        let amps = vec![Complex64::new(1.0 + 1e-7, 0.0), Complex64::new(0.0, 0.0)];
        assert!(StateVector::new(1, amps.clone()).is_err());
        let s = StateVector::normalized(1, amps, 1e-6).unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-15);
        let far = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(StateVector::normalized(1, far, 1e-6), Err(Error::NotNormalized(_))));
        assert!(StateVector::new(13, vec![]).is_err());
        assert!(StateVector::new(2, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn support_sum_matches_purity() {
        let ghz = StateVector::ghz(3).unwrap();
        for mask in 1u32..8 {
            let sub = mask_to_qubits(mask);
            let rho = ghz.reduced_density(&sub).unwrap();
            let purity_route = (1u32 << sub.len()) as f64 * rho.purity() - 1.0;
            assert!((ghz.support_sum_check(&sub).unwrap() - purity_route).abs() < 1e-10);
        }
    }
}
