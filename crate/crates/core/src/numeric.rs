//! Log-space helpers shared by the noise and analytic models.

use statrs::function::factorial::ln_binomial;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
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

/// `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln C(n, w)`, exact-table backed for small arguments.
pub fn ln_choose(n: usize, w: usize) -> f64 {
    if w > n {
        return f64::NEG_INFINITY;
    }
    ln_binomial(n as u64, w as u64)
}

/// `x·ln(x)` with the continuous extension at zero.
pub fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Binary entropy in bits, `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    -(xlnx(p) + xlnx(1.0 - p)) / std::f64::consts::LN_2
}

/// `(1 - e^{-x}) / x`, equal to 1 at `x = 0`.
pub fn one_minus_exp_over_x(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x / 2.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// `1 - (1 - e^{-x}) / x = (x - 1 + e^{-x}) / x`, computed without cancellation.
pub fn one_minus_one_minus_exp_over_x(x: f64) -> f64 {
    if x < 1e-3 {
        // x/2 - x^2/6 + x^3/24 - x^4/120
        x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)))
    } else {
        (x + (-x).exp_m1()) / x
    }
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Narrows `[inside, outside]` onto the boundary of `pred` and returns the last point where it held.
pub fn bisect_boundary<F: FnMut(f64) -> bool>(mut pred: F, mut inside: f64, mut outside: f64, tol: f64) -> f64 {
    while (outside - inside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1.0, 1e-17, -1.0, 1e-17].into_iter().collect();
        assert!((s.value() - 2e-17).abs() < 1e-30);
    }

    #[test]
    fn ln_add_exp_handles_infinities() {
        assert_eq!(ln_add_exp(f64::NEG_INFINITY, 1.5), 1.5);
        assert!((ln_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((ln_add_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn series_branches_are_continuous() {
        for x in [9.99e-4, 1.001e-3] {
            let direct = 1.0 - (1.0 - (-x as f64).exp()) / x;
            assert!((one_minus_one_minus_exp_over_x(x) - direct).abs() < 1e-12);
        }
        assert_eq!(one_minus_exp_over_x(0.0), 1.0);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(fx.abs() < 1e-12);
    }

    #[test]
    fn bisect_boundary_tracks_side() {
        let up = bisect_boundary(|x| x < 0.4, 0.0, 1.0, 1e-10);
        assert!(up < 0.4 && 0.4 - up < 1e-9);
        let down = bisect_boundary(|x| x > 0.4, 1.0, 0.0, 1e-10);
        assert!(down > 0.4 && down - 0.4 < 1e-9);
    }

    #[test]
    fn entropy_edges() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert_eq!(ln_choose(3, 4), f64::NEG_INFINITY);
    }
}
