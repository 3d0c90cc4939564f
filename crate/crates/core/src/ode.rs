//! Classical fixed-step fourth-order Runge–Kutta.
//!
//! Both the trajectory integrator and the monodromy computation go through
//! [`rk4_step`], so step-size studies on one carry over to the other.

/// One RK4 step of size `h` for `y' = f(t, y)`.
#[inline]
pub fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let half = 0.5 * h;
    let k1 = f(t, y);
    let k2 = f(t + half, &axpy(y, half, &k1));
    let k3 = f(t + half, &axpy(y, half, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Advance from `t0` by `span` using `n` equal RK4 steps.
pub fn rk4_fixed<const N: usize, F>(f: &F, t0: f64, y0: &[f64; N], span: f64, n: usize) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = span / n as f64;
    let mut y = *y0;
    for i in 0..n {
        y = rk4_step(f, t0 + i as f64 * h, &y, h);
    }
    y
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], a: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += a * k[i];
    }
    out
}
