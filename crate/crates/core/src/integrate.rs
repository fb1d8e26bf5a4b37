//! Fixed-step quadrature and ODE stepping.

use crate::scalar::Scalar;

/// One classical Runge–Kutta step of `dy/dt = f(t, y)` from `t` to `t + h`.
pub fn rk4_step<T, F>(t: T, y: T, h: T, mut f: F) -> T
where
    T: Scalar,
    F: FnMut(T, T) -> T,
{
    let two = T::lit(2.0);
    let half = h / two;
    let k1 = f(t, y);
    let k2 = f(t + half, y + half * k1);
    let k3 = f(t + half, y + half * k2);
    let k4 = f(t + h, y + h * k3);
    y + h / T::lit(6.0) * (k1 + two * k2 + two * k3 + k4)
}

/// Simpson's rule for `∫ f` over `[t, t + h]`.
pub fn simpson<T, F>(t: T, h: T, mut f: F) -> T
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let half = h / T::lit(2.0);
    h / T::lit(6.0) * (f(t) + T::lit(4.0) * f(t + half) + f(t + h))
}
