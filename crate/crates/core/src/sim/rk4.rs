//! Fixed-step classical 4th-order Runge-Kutta over small state arrays.

/// One RK4 step of `y' = f(t, y)` from `t` to `t + dt`.
pub fn rk4_step<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    dt: f64,
) -> [f64; N] {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * dt, &offset(y, &k1, 0.5 * dt));
    let k3 = f(t + 0.5 * dt, &offset(y, &k2, 0.5 * dt));
    let k4 = f(t + dt, &offset(y, &k3, dt));

    let mut out = *y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn offset<const N: usize>(y: &[f64; N], k: &[f64; N], h: f64) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}
