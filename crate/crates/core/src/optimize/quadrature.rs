use crate::scalar::Real;

/// Integral of samples on a uniform grid with spacing `h`.
///
/// Composite Simpson for an even number of intervals; for an odd count the
/// last three intervals use the 3/8 rule. One interval falls back to the
/// trapezoid.
pub fn integrate_uniform<T: Real>(values: &[T], h: T) -> T {
    let n = values.len().saturating_sub(1);
    match n {
        0 => T::zero(),
        1 => h * T::lit(0.5) * (values[0] + values[1]),
        _ if n.is_multiple_of(2) => simpson(values, h),
        _ => {
            let split = n - 3;
            let head = if split > 0 {
                simpson(&values[..=split], h)
            } else {
                T::zero()
            };
            let v = &values[split..];
            head + h * T::lit(3.0 / 8.0) * (v[0] + T::lit(3.0) * (v[1] + v[2]) + v[3])
        }
    }
}

fn simpson<T: Real>(values: &[T], h: T) -> T {
    let n = values.len() - 1;
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let inner = (1..n).fold(T::zero(), |acc, i| {
        acc + values[i] * if i % 2 == 1 { four } else { two }
    });
    h / T::lit(3.0) * (values[0] + inner + values[n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, f: impl Fn(f64) -> f64) -> (Vec<f64>, f64) {
        let h = 2.0 / n as f64;
        ((0..=n).map(|i| f(i as f64 * h)).collect(), h)
    }

    #[test]
    fn cubics_are_exact() {
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x + x * x * x;
        let exact = 2.0 - 4.0 + 0.5 * 8.0 / 3.0 + 4.0;
        for n in [2, 3, 4, 5, 6, 7, 10] {
            let (v, h) = grid(n, f);
            assert!((integrate_uniform(&v, h) - exact).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn single_interval_is_trapezoid() {
        assert_eq!(integrate_uniform(&[1.0, 3.0], 0.5), 1.0);
        assert_eq!(integrate_uniform::<f64>(&[4.0], 0.5), 0.0);
    }

    #[test]
    fn fourth_order_on_smooth_integrand() {
        let exact = 1.0 - 2f64.cos();
        let (v1, h1) = grid(20, f64::sin);
        let (v2, h2) = grid(40, f64::sin);
        let e1 = (integrate_uniform(&v1, h1) - exact).abs();
        let e2 = (integrate_uniform(&v2, h2) - exact).abs();
        assert!((e1 / e2 - 16.0).abs() < 1.0);
    }
}
