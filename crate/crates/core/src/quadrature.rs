//! Fixed-order Gauss–Legendre panels and composite rules over breakpoint lists.

use num_complex::Complex64 as C64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess for the i-th largest root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]` with a single panel.
    pub fn panel<F>(&self, a: f64, b: f64, f: &F) -> C64
    where
        F: Fn(f64) -> C64 + ?Sized,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = C64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    /// Composite rule over consecutive breakpoints; each interval is further
    /// split so no panel exceeds `max_width`. Summation runs left to right.
    pub fn composite<F>(&self, breaks: &[f64], max_width: f64, f: &F) -> C64
    where
        F: Fn(f64) -> C64 + ?Sized,
    {
        let mut acc = C64::new(0.0, 0.0);
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b <= a {
                continue;
            }
            let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
            let h = (b - a) / pieces as f64;
            for k in 0..pieces {
                let lo = a + h * k as f64;
                let hi = if k + 1 == pieces { b } else { lo + h };
                acc += self.panel(lo, hi, f);
            }
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Breakpoints on `[lo, hi]` refined geometrically towards each `focus` point,
/// starting at distance `scale` and growing by a factor of four.
///
/// The result is sorted, deduplicated and always contains `lo`, `hi` and every
/// focus point that lies inside the interval.
pub fn graded_breakpoints(lo: f64, hi: f64, foci: &[f64], scale: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for &c in foci {
        if c < lo || c > hi {
            continue;
        }
        pts.push(c);
        let mut d = scale;
        while d < hi - lo {
            for x in [c - d, c + d] {
                if x > lo && x < hi {
                    pts.push(x);
                }
            }
            d *= 4.0;
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + a.abs()));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 128] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(8);
        // int_{-1}^{1} x^14 = 2/15
        let v = rule.panel(-1.0, 1.0, &|x: f64| C64::new(x.powi(14), 0.0));
        assert!((v.re - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn composite_gaussian() {
        let rule = GaussLegendre::new(32);
        let v = rule.composite(&[-10.0, 0.0, 10.0], 1.0, &|x: f64| C64::new((-x * x).exp(), 0.0));
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn graded_breakpoints_are_sorted_and_contain_foci() {
        let b = graded_breakpoints(-5.0, 5.0, &[1.0, -1.0], 1e-3);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.contains(&1.0) && b.contains(&-1.0));
        assert_eq!(b[0], -5.0);
        assert_eq!(*b.last().unwrap(), 5.0);
    }
}
