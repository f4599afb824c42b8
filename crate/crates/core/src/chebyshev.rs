//! Chebyshev polynomials of the first kind, the complex quasi-Chebyshev
//! recurrence, and the analytical rotation-angle schedule used by the
//! phase-discrimination circuit.

use alloc::vec::Vec;

use crate::fmath;
use crate::linalg::{expi, C64};
use crate::{Error, Result};

use core::f64::consts::PI;

/// Chebyshev polynomial of the first kind `T_L(x)`, total over the reals.
///
/// Uses the branch-wise closed forms: `cos(L acos x)` on `[-1, 1]`,
/// `cosh(L acosh x)` for `x >= 1`, and `(-1)^L cosh(L acosh(-x))` for
/// `x <= -1`.
pub fn chebyshev_t(degree: usize, x: f64) -> f64 {
    if x >= 1.0 {
        fmath::cosh(degree as f64 * fmath::acosh(x))
    } else if x <= -1.0 {
        let sign = if degree % 2 == 0 { 1.0 } else { -1.0 };
        sign * fmath::cosh(degree as f64 * fmath::acosh(-x))
    } else {
        fmath::cos(degree as f64 * fmath::acos(x))
    }
}

/// `T_L(x)` by the three-term recurrence; the independent cross-check for
/// the closed-form branches.
pub fn chebyshev_t_recurrence(degree: usize, x: f64) -> f64 {
    match degree {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for _ in 2..=degree {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// The Y-rotation angle schedule of the phase-discrimination circuit:
/// `theta_n = 2 arctan(sin(lambda/2) tan(n pi / L))` on the principal branch,
/// together with the gap and error it was built for.
#[derive(Debug, Clone)]
pub struct AngleSchedule {
    /// Eigenphase gap in radians, in (0, pi).
    pub lambda: f64,
    /// One-sided error bound, in (0, 1).
    pub delta: f64,
    /// Odd circuit depth.
    pub depth: usize,
    /// The L angles `theta_0 .. theta_{L-1}`; `theta_0 = 0`.
    pub thetas: Vec<f64>,
}

/// Principal-branch `2 arctan(s tan(alpha))` for `alpha = n pi / L`,
/// evaluated pole-free via atan2 and folded back into `(-pi, pi)`.
fn theta_angle(s: f64, n: usize, depth: usize) -> f64 {
    let alpha = n as f64 * PI / depth as f64;
    let mut theta = 2.0 * fmath::atan2(s * fmath::sin(alpha), fmath::cos(alpha));
    if theta > PI {
        theta -= 2.0 * PI;
    }
    theta
}

/// Fill the length-`depth` angle array for `s = sin(lambda/2)`, mirroring the
/// second half so the antisymmetry `theta_{L-n} = -theta_n` holds exactly.
fn fill_thetas(s: f64, depth: usize) -> Vec<f64> {
    let mut thetas = alloc::vec![0.0; depth];
    for n in 1..=(depth - 1) / 2 {
        let t = theta_angle(s, n, depth);
        thetas[n] = t;
        thetas[depth - n] = -t;
    }
    thetas
}

impl AngleSchedule {
    /// Schedule for an explicitly chosen odd depth; the depth is the caller's
    /// responsibility to size (see [`make_schedule`] for the sized variant).
    pub fn with_depth(lambda: f64, delta: f64, depth: usize) -> Result<Self> {
        if !(lambda > 0.0 && lambda < PI) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                constraint: "in (0, pi)",
            });
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                constraint: "in (0, 1)",
            });
        }
        if depth % 2 == 0 || depth == 0 {
            return Err(Error::EvenDepth(depth));
        }
        let s = fmath::sin(lambda / 2.0);
        Ok(Self {
            lambda,
            delta,
            depth,
            thetas: fill_thetas(s, depth),
        })
    }

    /// Worst-case amplitude leaked onto the accept outcome for eigenphases
    /// with `|phi| >= lambda`: `1 / T_L(1 / cos(lambda/2))`.
    pub fn max_leak(&self) -> f64 {
        1.0 / chebyshev_t(self.depth, 1.0 / fmath::cos(self.lambda / 2.0))
    }
}

/// Smallest odd integer `>= x` (at least 1).
fn smallest_odd_at_least(x: f64) -> usize {
    let mut l = fmath::ceil(x) as i64;
    if l < 1 {
        l = 1;
    }
    if l % 2 == 0 {
        l += 1;
    }
    l as usize
}

/// Build the angle schedule with depth `L` the smallest odd integer at least
/// `ln(ln_factor / delta) / (lambda / 2)`.
///
/// `ln_factor` is 2 for plain phase discrimination and 4 when the circuit is
/// doubled into the approximate reflection.
pub fn make_schedule(lambda: f64, delta: f64, ln_factor: u32) -> Result<AngleSchedule> {
    assert!(
        ln_factor == 2 || ln_factor == 4,
        "ln_factor must be 2 or 4, got {ln_factor}"
    );
    if !(lambda > 0.0 && lambda < PI) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            constraint: "in (0, pi)",
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            constraint: "in (0, 1)",
        });
    }
    let depth = smallest_odd_at_least(fmath::ln(ln_factor as f64 / delta) / (lambda / 2.0));
    AngleSchedule::with_depth(lambda, delta, depth)
}

/// The tightened gap `lambda'` with `sin(lambda'/2) = tanh(acosh(1/delta)/L)`,
/// the exact solution of `1 / T_L(1 / cos(lambda'/2)) = delta` once the odd
/// depth `L` has been fixed.
pub fn tightened_gap(depth: usize, delta: f64) -> Result<f64> {
    if depth % 2 == 0 || depth == 0 {
        return Err(Error::EvenDepth(depth));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            constraint: "in (0, 1)",
        });
    }
    Ok(2.0 * fmath::asin(fmath::tanh(fmath::acosh(1.0 / delta) / depth as f64)))
}

/// Schedule built from the tightened gap: saturates the leak bound at
/// exactly `delta` for the chosen odd depth.
pub fn make_schedule_tightened(depth: usize, delta: f64) -> Result<AngleSchedule> {
    let lambda = tightened_gap(depth, delta)?;
    AngleSchedule::with_depth(lambda, delta, depth)
}

/// Quasi-Chebyshev polynomial `a^gamma_L(x)` evaluated by its complex
/// two-term recurrence
/// `a_{n+1} = x (1 + e^{-i theta_n}) a_n - e^{-i theta_n} a_{n-1}`
/// with `theta_n = 2 arctan(sqrt(1 - gamma^2) tan(n pi / L))`.
///
/// Equals `T_L(x/gamma) / T_L(1/gamma)` for odd `L`.
pub fn quasi_chebyshev(gamma: f64, depth: usize, x: f64) -> Result<C64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            constraint: "in (0, 1]",
        });
    }
    if depth % 2 == 0 || depth == 0 {
        return Err(Error::EvenDepth(depth));
    }
    let s = fmath::sqrt((1.0 - gamma) * (1.0 + gamma));
    let mut prev = C64::new(1.0, 0.0);
    let mut cur = C64::new(x, 0.0);
    if depth == 1 {
        return Ok(cur);
    }
    for n in 1..depth {
        let phase = expi(-theta_angle(s, n, depth));
        let next = C64::new(x, 0.0) * (C64::new(1.0, 0.0) + phase) * cur - phase * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
