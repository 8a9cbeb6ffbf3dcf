//! Compensated summation.

/// Neumaier variant of Kahan summation: the compensation also tracks the case
/// where the incoming term is larger than the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn sum_iter<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}

/// Sum terms spanning many orders of magnitude: sort by decreasing magnitude,
/// then accumulate with compensation. The buffer is consumed in place.
pub fn sum_sorted_desc(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(|a, b| {
        b.abs()
            .partial_cmp(&a.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    NeumaierSum::sum_iter(terms.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation() {
        // 1 + 1e100 - 1e100 loses the 1 in plain f64 summation.
        let mut terms = vec![1.0, 1e100, -1e100];
        assert_eq!(sum_sorted_desc(&mut terms), 1.0);
    }

    #[test]
    fn matches_exact_harmonic_sum() {
        let terms: Vec<f64> = (1..=100_000).map(|k| 1.0 / k as f64).collect();
        let forward: f64 = terms.iter().sum();
        let comp = NeumaierSum::sum_iter(terms.iter().copied());
        // Both are close; the compensated value is the reference.
        assert!((forward - comp).abs() < 1e-10);
    }
}
