//! Finitely supported sequences, the universal operand type.

use num_complex::Complex64;

use crate::numerics::kahan::NeumaierSum;

/// A real sequence in c00: finitely many nonzero entries, indexed from 0.
/// Trailing zeros are trimmed on construction, so `len()` is `support + 1`
/// (or 0 for the zero sequence).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiniteSequence {
    entries: Vec<f64>,
}

impl FiniteSequence {
    pub fn new(mut entries: Vec<f64>) -> Self {
        while entries.last() == Some(&0.0) {
            entries.pop();
        }
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The standard basis sequence e_n.
    pub fn basis(n: usize) -> Self {
        let mut entries = vec![0.0; n + 1];
        entries[n] = 1.0;
        Self { entries }
    }

    /// Entry at index `n` (zero beyond the stored range).
    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.entries.get(n).copied().unwrap_or(0.0)
    }

    /// Largest index carrying a nonzero entry; `None` for the zero sequence.
    pub fn support(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn norm_l2(&self) -> f64 {
        NeumaierSum::sum_iter(self.entries.iter().map(|v| v * v)).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        NeumaierSum::sum_iter(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b),
        )
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.entries.iter().map(|v| c * v).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|i| self.get(i) + other.get(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|i| self.get(i) - other.get(i)).collect())
    }
}

/// Complex counterpart, used by the multiplier module (imaginary powers force
/// complex scalars). Real-only code paths stay on `FiniteSequence`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexSequence {
    entries: Vec<Complex64>,
}

impl ComplexSequence {
    pub fn new(mut entries: Vec<Complex64>) -> Self {
        while entries.last() == Some(&Complex64::new(0.0, 0.0)) {
            entries.pop();
        }
        Self { entries }
    }

    pub fn from_real(f: &FiniteSequence) -> Self {
        Self {
            entries: f
                .entries()
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
        }
    }

    #[inline]
    pub fn get(&self, n: usize) -> Complex64 {
        self.entries
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn support(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Real and imaginary parts as real sequences.
    pub fn re(&self) -> FiniteSequence {
        FiniteSequence::new(self.entries.iter().map(|z| z.re).collect())
    }

    pub fn im(&self) -> FiniteSequence {
        FiniteSequence::new(self.entries.iter().map(|z| z.im).collect())
    }

    pub fn norm_l2(&self) -> f64 {
        NeumaierSum::sum_iter(self.entries.iter().map(|z| z.norm_sqr())).sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|i| self.get(i) - other.get(i)).collect())
    }

    /// Max modulus of entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.len().max(other.len());
        (0..n)
            .map(|i| (self.get(i) - other.get(i)).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_trimmed() {
        let f = FiniteSequence::new(vec![1.0, 0.0, 2.0, 0.0, 0.0]);
        assert_eq!(f.support(), Some(2));
        assert_eq!(f.get(2), 2.0);
        assert_eq!(f.get(17), 0.0);
    }

    #[test]
    fn zero_sequence_has_no_support() {
        assert_eq!(FiniteSequence::new(vec![0.0, 0.0]).support(), None);
        assert_eq!(FiniteSequence::zero().norm_l2(), 0.0);
    }

    #[test]
    fn l2_norm_matches_root_sum_of_squares() {
        let f = FiniteSequence::new(vec![3.0, 4.0]);
        assert_eq!(f.norm_l2(), 5.0);
    }
}
