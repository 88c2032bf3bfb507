use crate::error::Result;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfgsSettings<T> {
    /// Stop once `‖∇f‖₂` falls below this.
    pub grad_tol: T,
    pub max_iterations: usize,
    /// Stop when an accepted step lowers `f` by less than this.
    pub min_decrease: T,
    /// Sufficient-decrease constant.
    pub c1: T,
    /// Curvature constant.
    pub c2: T,
    pub max_line_search: usize,
}

impl<T: Real> Default for BfgsSettings<T> {
    fn default() -> Self {
        Self {
            grad_tol: T::lit(1e-6),
            max_iterations: 500,
            min_decrease: T::lit(1e-12),
            c1: T::lit(1e-4),
            c2: T::lit(0.9),
            max_line_search: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    GradientTolerance,
    SmallDecrease,
    MaxIterations,
    LineSearchFailed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BfgsReport<T> {
    pub x: Vec<T>,
    pub f: T,
    pub grad: Vec<T>,
    pub iterations: usize,
    pub evaluations: usize,
    pub stop: StopReason,
    /// `f` at the start and after every accepted step.
    pub history: Vec<T>,
}

impl<T: Real> BfgsReport<T> {
    pub fn grad_norm(&self) -> T {
        norm(&self.grad)
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn axpy<T: Real>(x: &[T], alpha: T, p: &[T]) -> Vec<T> {
    x.iter().zip(p).map(|(a, b)| *a + alpha * *b).collect()
}

struct Point<T> {
    alpha: T,
    f: T,
    g: Vec<T>,
    slope: T,
}

/// Strong-Wolfe line search along `p` (bracketing, then zoom with cubic
/// interpolation). Returns the accepted point, or the best point with
/// sufficient decrease seen if the search runs out of evaluations.
#[allow(clippy::too_many_arguments)]
fn line_search<T, F>(
    fg: &mut F,
    x: &[T],
    f0: T,
    slope0: T,
    p: &[T],
    alpha_init: T,
    s: &BfgsSettings<T>,
    evals: &mut usize,
) -> Result<std::result::Result<Point<T>, Option<Point<T>>>>
where
    T: Real,
    F: FnMut(&[T]) -> Result<(T, Vec<T>)>,
{
    let mut eval = |alpha: T, evals: &mut usize| -> Result<Point<T>> {
        *evals += 1;
        let (f, g) = fg(&axpy(x, alpha, p))?;
        let slope = dot(&g, p);
        Ok(Point { alpha, f, g, slope })
    };
    let armijo = |pt: &Point<T>| pt.f <= f0 + s.c1 * pt.alpha * slope0;
    let curvature = |pt: &Point<T>| pt.slope.abs() <= -s.c2 * slope0;

    let mut best: Option<Point<T>> = None;
    let keep_best = |best: &mut Option<Point<T>>, pt: &Point<T>| {
        if pt.f.is_finite() && pt.f < f0 && best.as_ref().is_none_or(|b| pt.f < b.f) {
            *best = Some(Point {
                alpha: pt.alpha,
                f: pt.f,
                g: pt.g.clone(),
                slope: pt.slope,
            });
        }
    };

    let mut prev = Point {
        alpha: T::zero(),
        f: f0,
        g: Vec::new(),
        slope: slope0,
    };
    let mut alpha = alpha_init;
    let mut used = 0;
    let (mut lo, mut hi);
    loop {
        if used >= s.max_line_search {
            return Ok(Err(best));
        }
        used += 1;
        let cur = eval(alpha, evals)?;
        keep_best(&mut best, &cur);
        if !cur.f.is_finite() || !armijo(&cur) || (used > 1 && cur.f >= prev.f) {
            lo = prev;
            hi = cur;
            break;
        }
        if curvature(&cur) {
            return Ok(Ok(cur));
        }
        if cur.slope >= T::zero() {
            lo = cur;
            hi = prev;
            break;
        }
        prev = cur;
        alpha = alpha * T::lit(2.0);
    }

    // zoom: lo always satisfies sufficient decrease and has the lower f
    while used < s.max_line_search {
        used += 1;
        let trial = interpolate(&lo, &hi);
        let cur = eval(trial, evals)?;
        keep_best(&mut best, &cur);
        if !cur.f.is_finite() || !armijo(&cur) || cur.f >= lo.f {
            hi = cur;
        } else {
            if curvature(&cur) {
                return Ok(Ok(cur));
            }
            if cur.slope * (hi.alpha - lo.alpha) >= T::zero() {
                hi = lo;
            }
            lo = cur;
        }
        if (hi.alpha - lo.alpha).abs() <= T::epsilon() * lo.alpha.abs().max(T::one()) {
            break;
        }
    }
    Ok(Err(best))
}

/// Minimiser of the cubic through two points with slopes, kept inside the
/// middle 80% of the bracket; bisection when the cubic is unusable.
fn interpolate<T: Real>(a: &Point<T>, b: &Point<T>) -> T {
    let (lo, hi) = if a.alpha < b.alpha { (a, b) } else { (b, a) };
    let width = hi.alpha - lo.alpha;
    let mid = lo.alpha + width * T::lit(0.5);
    if !hi.f.is_finite() || !lo.f.is_finite() {
        return mid;
    }
    let d1 = lo.slope + hi.slope - T::lit(3.0) * (lo.f - hi.f) / (lo.alpha - hi.alpha);
    let disc = d1 * d1 - lo.slope * hi.slope;
    if !(disc >= T::zero()) {
        return mid;
    }
    let d2 = disc.sqrt();
    let t = hi.alpha - width * (hi.slope + d2 - d1) / (hi.slope - lo.slope + T::lit(2.0) * d2);
    let margin = width * T::lit(0.1);
    if t.is_finite() {
        t.max(lo.alpha + margin).min(hi.alpha - margin)
    } else {
        mid
    }
}

/// BFGS on the inverse Hessian with a strong-Wolfe line search.
///
/// `fg` returns the objective and its gradient. Accepted iterates never
/// increase `f`. A failed line search ends the run with
/// [`StopReason::LineSearchFailed`] at the best point found so far.
pub fn bfgs_minimize<T, F>(mut fg: F, x0: &[T], s: &BfgsSettings<T>) -> Result<BfgsReport<T>>
where
    T: Real,
    F: FnMut(&[T]) -> Result<(T, Vec<T>)>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut f, mut g) = fg(&x)?;
    let mut evals = 1;
    let mut history = vec![f];
    let mut hinv: Vec<Vec<T>> = identity(n);
    let mut iterations = 0;

    let stop = loop {
        if norm(&g) < s.grad_tol {
            break StopReason::GradientTolerance;
        }
        if iterations >= s.max_iterations {
            break StopReason::MaxIterations;
        }
        let mut p: Vec<T> = hinv.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&g, &p);
        if !(slope < T::zero()) {
            // lost positive definiteness: restart from steepest descent
            hinv = identity(n);
            p = g.iter().map(|v| -*v).collect();
            slope = dot(&g, &p);
        }
        let alpha_init = if iterations == 0 {
            T::one().min(T::one() / norm(&g))
        } else {
            T::one()
        };

        let pt = match line_search(&mut fg, &x, f, slope, &p, alpha_init, s, &mut evals)? {
            Ok(pt) => pt,
            Err(best) => {
                if let Some(b) = best {
                    x = axpy(&x, b.alpha, &p);
                    f = b.f;
                    g = b.g;
                    history.push(f);
                    iterations += 1;
                }
                break StopReason::LineSearchFailed;
            }
        };

        let step: Vec<T> = p.iter().map(|v| *v * pt.alpha).collect();
        let dg: Vec<T> = pt.g.iter().zip(&g).map(|(a, b)| *a - *b).collect();
        let decrease = f - pt.f;
        x = axpy(&x, T::one(), &step);
        f = pt.f;
        g = pt.g;
        history.push(f);
        iterations += 1;

        let sy = dot(&step, &dg);
        if sy > T::epsilon() * norm(&step) * norm(&dg) {
            if iterations == 1 {
                let scale = sy / dot(&dg, &dg);
                hinv = identity::<T>(n)
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| v * scale).collect())
                    .collect();
            }
            update_inverse(&mut hinv, &step, &dg, sy);
        }

        if decrease < s.min_decrease {
            break if norm(&g) < s.grad_tol {
                StopReason::GradientTolerance
            } else {
                StopReason::SmallDecrease
            };
        }
    };

    Ok(BfgsReport {
        x,
        f,
        grad: g,
        iterations,
        evaluations: evals,
        stop,
        history,
    })
}

fn identity<T: Real>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`, `ρ = 1 / yᵀs`.
fn update_inverse<T: Real>(h: &mut [Vec<T>], s: &[T], y: &[T], sy: T) {
    let n = s.len();
    let rho = T::one() / sy;
    let hy: Vec<T> = h.iter().map(|row| dot(row, y)).collect();
    let yhy = dot(y, &hy);
    let factor = (T::one() + rho * yhy) * rho;
    for i in 0..n {
        for j in 0..n {
            h[i][j] = h[i][j] - rho * (hy[i] * s[j] + s[i] * hy[j]) + factor * s[i] * s[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (a, b) = (x[0], x[1]);
        let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
        let g = vec![
            -2.0 * (1.0 - a) - 400.0 * a * (b - a * a),
            200.0 * (b - a * a),
        ];
        Ok((f, g))
    }

    #[test]
    fn solves_rosenbrock() {
        let r = bfgs_minimize(rosenbrock, &[-1.2, 1.0], &BfgsSettings::default()).unwrap();
        assert_eq!(r.stop, StopReason::GradientTolerance);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6,
            "{:?}",
            r.x
        );
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn quadratic_in_few_steps() {
        let diag = [1.0, 10.0, 100.0];
        let fg = |x: &[f64]| {
            let f = 0.5 * x.iter().zip(diag).map(|(v, d)| d * v * v).sum::<f64>();
            Ok((f, x.iter().zip(diag).map(|(v, d)| d * v).collect()))
        };
        let r = bfgs_minimize(fg, &[1.0, 1.0, 1.0], &BfgsSettings::default()).unwrap();
        assert_eq!(r.stop, StopReason::GradientTolerance);
        assert!(r.iterations < 20);
    }

    #[test]
    fn stationary_start_stops_immediately() {
        let r = bfgs_minimize(
            |x: &[f64]| Ok((x[0] * x[0], vec![2.0 * x[0]])),
            &[0.0],
            &BfgsSettings::default(),
        )
        .unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.stop, StopReason::GradientTolerance);
    }

    #[test]
    fn inconsistent_gradient_ends_with_failed_search() {
        // gradient points the wrong way: no step can satisfy sufficient decrease
        let r = bfgs_minimize(
            |x: &[f64]| Ok((x[0], vec![-1.0])),
            &[0.0],
            &BfgsSettings::default(),
        )
        .unwrap();
        assert_eq!(r.stop, StopReason::LineSearchFailed);
        assert!(r.f <= 0.0);
    }

    #[test]
    fn iteration_cap() {
        let s = BfgsSettings {
            max_iterations: 3,
            ..BfgsSettings::default()
        };
        let r = bfgs_minimize(rosenbrock, &[-1.2, 1.0], &s).unwrap();
        assert_eq!(r.stop, StopReason::MaxIterations);
        assert_eq!(r.iterations, 3);
    }
}
