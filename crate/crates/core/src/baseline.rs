//! Eigenstate-filtering baseline: the even Chebyshev filter polynomial
//! `R_l(x; Delta)` and the one-qubit `sin` block encoding of a unitary.
//!
//! These reproduce what a signal-processing route to phase discrimination
//! needs, so the angle-schedule circuit can be compared against it; the
//! numerically fitted rotation parameters of that route are out of scope and
//! the polynomial targets are verified directly instead.

use crate::chebyshev::chebyshev_t;
use crate::fmath;
use crate::linalg::{CMat, C64};
use crate::qpd::DenseUnitary;
use crate::{Error, Result};

/// Filter polynomial parameters: half-degree `l` (so degree `2l`) and the
/// eigenvalue gap `Delta` in (0, 1).
#[derive(Debug, Clone, Copy)]
pub struct FilterSpec {
    pub half_degree: usize,
    pub gap: f64,
}

impl FilterSpec {
    pub fn new(half_degree: usize, gap: f64) -> Result<Self> {
        if half_degree == 0 {
            return Err(Error::InvalidParameter {
                name: "half_degree",
                value: 0.0,
                constraint: "positive",
            });
        }
        if !(gap > 0.0 && gap < 1.0) {
            return Err(Error::InvalidParameter {
                name: "gap",
                value: gap,
                constraint: "in (0, 1)",
            });
        }
        Ok(Self { half_degree, gap })
    }

    /// Decay ceiling `2 e^{-2 l arcsin(Delta)}` valid on `|x| in [Delta, 1]`.
    pub fn decay_bound(&self) -> f64 {
        2.0 * fmath::exp(-2.0 * self.half_degree as f64 * fmath::asin(self.gap))
    }
}

/// `R_l(x; Delta)` in the transformed even form
/// `T_{2l}(sqrt((1-x^2)/(1-Delta^2))) / T_{2l}(1/sqrt(1-Delta^2))`,
/// which is numerically stable near `x = +-1`.
///
/// ```
/// use qpdkit_core::baseline::{filter_poly, FilterSpec};
///
/// let spec = FilterSpec::new(8, 0.2).unwrap();
/// assert_eq!(filter_poly(&spec, 0.0).unwrap(), 1.0);
/// // Exponentially suppressed across the tail band.
/// assert!(filter_poly(&spec, 0.5).unwrap().abs() <= spec.decay_bound());
/// ```
pub fn filter_poly(spec: &FilterSpec, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            constraint: "in [-1, 1]",
        });
    }
    let d2 = spec.gap * spec.gap;
    let degree = 2 * spec.half_degree;
    let num = chebyshev_t(degree, fmath::sqrt((1.0 - x * x) / (1.0 - d2)));
    let den = chebyshev_t(degree, 1.0 / fmath::sqrt(1.0 - d2));
    Ok(num / den)
}

/// `R_l(x; Delta)` in the direct ratio form
/// `T_l(-1 + 2 (x^2 - Delta^2) / (1 - Delta^2)) / T_l(-1 - 2 Delta^2 / (1 - Delta^2))`;
/// the independent cross-check for [`filter_poly`].
pub fn filter_poly_direct(spec: &FilterSpec, x: f64) -> f64 {
    let d2 = spec.gap * spec.gap;
    let num = chebyshev_t(spec.half_degree, -1.0 + 2.0 * (x * x - d2) / (1.0 - d2));
    let den = chebyshev_t(spec.half_degree, -1.0 + 2.0 * (-d2) / (1.0 - d2));
    num / den
}

/// One-qubit block encoding of `i (U^dag - U) / 2`: the circuit
/// `(H (x) I) (U^dag (+) I) (iI (+) -iI) (I (+) U) (H (x) I)`, whose
/// top-left block carries `sin` of the eigenphases of `U`.
pub fn block_encode_sin(u: &DenseUnitary) -> DenseUnitary {
    let d = u.dim();
    let ud = u.mat().adjoint();
    let inv_sqrt2 = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);

    let mut hadamard = CMat::zeros(2 * d, 2 * d);
    for s in 0..d {
        hadamard[(s, s)] = inv_sqrt2;
        hadamard[(s, d + s)] = inv_sqrt2;
        hadamard[(d + s, s)] = inv_sqrt2;
        hadamard[(d + s, d + s)] = -inv_sqrt2;
    }
    let mut left = CMat::zeros(2 * d, 2 * d);
    let mut phase = CMat::zeros(2 * d, 2 * d);
    let mut right = CMat::zeros(2 * d, 2 * d);
    for a in 0..d {
        phase[(a, a)] = C64::new(0.0, 1.0);
        phase[(d + a, d + a)] = C64::new(0.0, -1.0);
        right[(a, a)] = C64::new(1.0, 0.0);
        for b in 0..d {
            left[(a, b)] = ud[(a, b)];
            right[(d + a, d + b)] = u.mat()[(a, b)];
        }
        left[(d + a, d + a)] = C64::new(1.0, 0.0);
    }
    let m = hadamard.mul(&left).mul(&phase).mul(&right).mul(&hadamard);
    DenseUnitary::new_unchecked(m)
}

/// Top-left `dim x dim` block of a `2 dim` square matrix.
pub fn top_left_block(m: &CMat) -> CMat {
    let d = m.rows() / 2;
    CMat::from_fn(d, d, |i, j| m[(i, j)])
}

/// The encoded Hermitian target `i (U^dag - U) / 2`, computed directly.
pub fn sin_hermitian(u: &DenseUnitary) -> CMat {
    let ud = u.mat().adjoint();
    ud.sub(u.mat()).scale(C64::new(0.0, 0.5))
}
