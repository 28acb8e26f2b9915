/// Per-pair running means of TD errors within one inner loop.
///
/// The stopping statistic is `M = (1 / |active|) sum |mean(s, a)|` with
/// unvisited pairs contributing zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TdErrorTracker {
    counts: Vec<u64>,
    means: Vec<f64>,
    num_active: usize,
}

impl TdErrorTracker {
    /// `num_entries` table slots, `num_active` of them learnable.
    pub fn new(num_entries: usize, num_active: usize) -> Self {
        TdErrorTracker { counts: vec![0; num_entries], means: vec![0.0; num_entries], num_active: num_active.max(1) }
    }

    pub fn reset(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = 0);
        self.means.iter_mut().for_each(|m| *m = 0.0);
    }

    #[inline]
    pub fn record(&mut self, index: usize, delta: f64) {
        self.counts[index] += 1;
        let c = self.counts[index] as f64;
        self.means[index] += (delta - self.means[index]) / c;
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts[index]
    }

    pub fn mean(&self, index: usize) -> f64 {
        self.means[index]
    }

    pub fn statistic(&self) -> f64 {
        self.means.iter().map(|m| m.abs()).sum::<f64>() / self.num_active as f64
    }
}
