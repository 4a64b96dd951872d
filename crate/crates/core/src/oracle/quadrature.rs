//! Composite Gauss-Legendre rules and an order-stable accumulator.

use gauss_quad::GaussLegendre;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// `n ≥ 2` points.
    pub fn new(n: usize) -> Self {
        let degree = n.try_into().expect("rule needs at least two points");
        let (nodes, weights) = GaussLegendre::new(degree)
            .iter()
            .map(|(x, w)| (*x, *w))
            .unzip();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// Nodes and weights of the composite rule over `panels` equal panels.
    pub fn composite(
        &self,
        a: f64,
        b: f64,
        panels: usize,
    ) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = (b - a) / panels as f64;
        (0..panels).flat_map(move |p| {
            let lo = a + h * p as f64;
            self.on(lo, lo + h)
        })
    }
}

/// Equal-width panels `[lo, hi]` covering `[a, b]` with width at most `max_width`.
pub fn panels(a: f64, b: f64, max_width: f64) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let n = ((b - a) / max_width).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            (
                a + h * i as f64,
                if i + 1 == n {
                    b
                } else {
                    a + h * (i + 1) as f64
                },
            )
        })
        .collect()
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let r = GaussRule::new(8);
        let v: f64 = r.on(0.0, 2.0).map(|(x, w)| w * x.powi(15)).sum();
        assert!((v / (2f64.powi(16) / 16.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn composite_oscillatory() {
        let r = GaussRule::new(12);
        let v: f64 = r.composite(0.0, 100.0, 64).map(|(x, w)| w * x.cos()).sum();
        assert!((v - 100f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn panels_cover_interval() {
        let p = panels(1.0, 4.0, 0.7);
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].0, 1.0);
        assert_eq!(p[4].1, 4.0);
        assert!(panels(2.0, 1.0, 0.5).is_empty());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }
}
