//! The phase-discrimination circuit `C(U, lambda, L)`: one ancilla qubit,
//! `L` controlled-`U` applications interleaved with Y rotations from the
//! analytical angle schedule, sandwiched between `R_x(+-pi/2)`.
//!
//! Register convention used crate-wide: the ancilla qubit is the
//! most-significant tensor factor, so a combined index reads
//! `idx = a * dim + s` with `a` the ancilla bit and `s` the system index.

use alloc::vec;
use alloc::vec::Vec;

use crate::chebyshev::{chebyshev_t, AngleSchedule};
use crate::fmath;
use crate::linalg::{expi, CMat, C64, C_ONE, C_ZERO};
use crate::{Error, Result};

use core::f64::consts::{FRAC_PI_2, PI};

/// Rotation axis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Single-qubit rotation `R_axis(theta)` as an exact 2x2 matrix.
pub fn rotation(axis: Axis, theta: f64) -> DenseUnitary {
    let c = fmath::cos(theta / 2.0);
    let s = fmath::sin(theta / 2.0);
    let mut m = CMat::zeros(2, 2);
    match axis {
        Axis::X => {
            m[(0, 0)] = C64::new(c, 0.0);
            m[(0, 1)] = C64::new(0.0, -s);
            m[(1, 0)] = C64::new(0.0, -s);
            m[(1, 1)] = C64::new(c, 0.0);
        }
        Axis::Y => {
            m[(0, 0)] = C64::new(c, 0.0);
            m[(0, 1)] = C64::new(-s, 0.0);
            m[(1, 0)] = C64::new(s, 0.0);
            m[(1, 1)] = C64::new(c, 0.0);
        }
        Axis::Z => {
            m[(0, 0)] = expi(-theta / 2.0);
            m[(1, 1)] = expi(theta / 2.0);
        }
    }
    DenseUnitary::new_unchecked(m)
}

/// Square complex matrix with a unitarity invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    mat: CMat,
}

impl DenseUnitary {
    /// Wrap a matrix, rejecting it when `U U^dag` deviates from the identity
    /// by more than [`crate::DEFAULT_TOL`] in max-norm.
    pub fn new(mat: CMat) -> Result<Self> {
        Self::with_tolerance(mat, crate::DEFAULT_TOL)
    }

    pub fn with_tolerance(mat: CMat, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch {
                left: mat.rows(),
                right: mat.cols(),
                context: "unitary must be square",
            });
        }
        let defect = mat.unitarity_defect();
        if defect > tol {
            return Err(Error::NotUnitary { defect, tol });
        }
        Ok(Self { mat })
    }

    /// Wrap without checking; for matrices unitary by construction.
    pub fn new_unchecked(mat: CMat) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMat::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            mat: self.mat.mul(&rhs.mat),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.mat.matvec(v)
    }

    /// Max-norm distance of `U U^dag` from the identity.
    pub fn defect(&self) -> f64 {
        self.mat.unitarity_defect()
    }
}

/// Normalized amplitude vector over a tensor-factored register layout.
///
/// `dims[0]` is the system register; later entries are ancilla qubits, each
/// more significant than the previous, so
/// `idx = v + dims[0] * (k_1 + 2 k_2 + ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let expect: usize = dims.iter().product();
        if expect != amps.len() || expect == 0 {
            return Err(Error::DimensionMismatch {
                left: expect,
                right: amps.len(),
                context: "state length must match register layout",
            });
        }
        let norm = crate::linalg::vec_norm(&amps);
        if fmath::abs(norm - 1.0) > crate::DEFAULT_TOL {
            return Err(Error::InvalidParameter {
                name: "norm",
                value: norm,
                constraint: "state must be normalized to 1e-10",
            });
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis state `|index>` over the given layout.
    pub fn basis(dims: Vec<usize>, index: usize) -> Self {
        let len: usize = dims.iter().product();
        assert!(index < len);
        let mut amps = vec![C_ZERO; len];
        amps[index] = C_ONE;
        Self { dims, amps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        crate::linalg::vec_norm(&self.amps)
    }
}

/// Wrap an eigenphase into `(-pi, pi]`.
pub fn canonical_phase(phi: f64) -> f64 {
    let mut r = libm::fmod(phi, 2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

fn ancilla_gate(amps: &mut [C64], g: &CMat) {
    let dim = amps.len() / 2;
    for s in 0..dim {
        let a0 = amps[s];
        let a1 = amps[dim + s];
        amps[s] = g[(0, 0)] * a0 + g[(0, 1)] * a1;
        amps[dim + s] = g[(1, 0)] * a0 + g[(1, 1)] * a1;
    }
}

fn controlled_apply(amps: &mut [C64], u: &CMat, scratch: &mut Vec<C64>) {
    let dim = amps.len() / 2;
    scratch.clear();
    scratch.extend_from_slice(&amps[dim..]);
    let out = u.matvec(scratch);
    amps[dim..].copy_from_slice(&out);
}

/// Apply `C(U, lambda, L)` (or its adjoint) in place to a state laid out as
/// ancilla (x) system. Streaming form; never materializes the full matrix.
pub fn apply_qpd(u: &CMat, u_dag: &CMat, schedule: &AngleSchedule, amps: &mut [C64], dagger: bool) {
    debug_assert_eq!(amps.len(), 2 * u.rows());
    let rx_fwd = rotation(Axis::X, FRAC_PI_2);
    let rx_bwd = rotation(Axis::X, -FRAC_PI_2);
    let mut scratch = Vec::with_capacity(u.rows());
    if !dagger {
        ancilla_gate(amps, rx_fwd.mat());
        for &theta in &schedule.thetas {
            ancilla_gate(amps, rotation(Axis::Y, theta).mat());
            controlled_apply(amps, u, &mut scratch);
        }
        ancilla_gate(amps, rx_bwd.mat());
    } else {
        ancilla_gate(amps, rx_fwd.mat());
        for &theta in schedule.thetas.iter().rev() {
            controlled_apply(amps, u_dag, &mut scratch);
            ancilla_gate(amps, rotation(Axis::Y, -theta).mat());
        }
        ancilla_gate(amps, rx_bwd.mat());
    }
}

/// Full circuit `C(U, lambda, L)` as a dense `(2 dim) x (2 dim)` unitary,
/// ancilla as the controlling (most-significant) qubit.
pub fn build_qpd(u: &DenseUnitary, schedule: &AngleSchedule) -> DenseUnitary {
    let dim = u.dim();
    let u_dag = u.mat().adjoint();
    let mut out = CMat::zeros(2 * dim, 2 * dim);
    let mut col = vec![C_ZERO; 2 * dim];
    for j in 0..2 * dim {
        col.fill(C_ZERO);
        col[j] = C_ONE;
        apply_qpd(u.mat(), &u_dag, schedule, &mut col, false);
        out.set_col(j, &col);
    }
    DenseUnitary::new_unchecked(out)
}

/// Final ancilla overlap `<0|w>` for a single eigenstate with eigenphase
/// `phi`, computed from the reduced 2x2 picture: controlled-`U` collapses to
/// the controlled phase `diag(1, e^{i phi})` on the ancilla.
pub fn ancilla_response(phi: f64, schedule: &AngleSchedule) -> C64 {
    let phi = canonical_phase(phi);
    let phase = expi(phi);
    let mut v = [C_ONE, C_ZERO];
    let apply2 = |m: &CMat, v: &mut [C64; 2]| {
        let a = v[0];
        let b = v[1];
        v[0] = m[(0, 0)] * a + m[(0, 1)] * b;
        v[1] = m[(1, 0)] * a + m[(1, 1)] * b;
    };
    apply2(rotation(Axis::X, FRAC_PI_2).mat(), &mut v);
    for &theta in &schedule.thetas {
        apply2(rotation(Axis::Y, theta).mat(), &mut v);
        v[1] *= phase;
    }
    apply2(rotation(Axis::X, -FRAC_PI_2).mat(), &mut v);
    v[0]
}

/// Closed-form `|<0|w>|`: `|T_L(cos(phi/2)/cos(lambda/2)) / T_L(1/cos(lambda/2))|`.
pub fn response_closed_form(phi: f64, schedule: &AngleSchedule) -> f64 {
    let phi = canonical_phase(phi);
    let gamma = fmath::cos(schedule.lambda / 2.0);
    let num = chebyshev_t(schedule.depth, fmath::cos(phi / 2.0) / gamma);
    let den = chebyshev_t(schedule.depth, 1.0 / gamma);
    fmath::abs(num / den)
}

/// Worst-case accept amplitude over the rejected band `|phi| >= lambda`,
/// `1 / T_L(1 / cos(lambda/2))`.
pub fn max_leak(schedule: &AngleSchedule) -> f64 {
    schedule.max_leak()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::make_schedule;
    use crate::eig::unitary_eig;
    use crate::linalg::{cabs, random_unitary, vec_norm};
    use crate::rng::SplitMix64;

    #[test]
    fn rotation_matrices_match_definitions() {
        // R_y(pi)|0> = |1> exactly.
        let ry = rotation(Axis::Y, PI);
        let v = ry.apply(&[C_ONE, C_ZERO]);
        assert!(cabs(v[0]) < 1e-15 && cabs(v[1] - C_ONE) < 1e-15);
        // R_z(theta) = diag(e^{-i theta/2}, e^{i theta/2}).
        let rz = rotation(Axis::Z, 0.7);
        assert!(cabs(rz.mat()[(0, 0)] - expi(-0.35)) < 1e-15);
        assert!(cabs(rz.mat()[(1, 1)] - expi(0.35)) < 1e-15);
        assert!(cabs(rz.mat()[(0, 1)]) == 0.0);
    }

    #[test]
    fn xzx_conjugation_gives_y() {
        for k in 0..16 {
            let phi = -PI + 0.4 * k as f64;
            let lhs = rotation(Axis::X, -FRAC_PI_2)
                .mul(&rotation(Axis::Z, phi))
                .mul(&rotation(Axis::X, FRAC_PI_2));
            let rhs = rotation(Axis::Y, phi);
            assert!(lhs.mat().max_abs_diff(rhs.mat()) < 1e-12, "phi={phi}");
        }
    }

    #[test]
    fn response_is_exact_at_zero_phase() {
        for (lambda, delta) in [(PI / 8.0, 0.1), (0.3, 0.02), (2.5, 0.6)] {
            let sched = make_schedule(lambda, delta, 2).unwrap();
            let r = ancilla_response(0.0, &sched);
            assert!((cabs(r) - 1.0).abs() < 1e-12, "lambda={lambda}");
        }
    }

    #[test]
    fn response_bounded_by_delta_outside_gap() {
        let sched = make_schedule(PI / 8.0, 0.1, 2).unwrap();
        assert_eq!(sched.depth, 17);
        for k in 0..400 {
            let phi = PI / 8.0 + (PI - PI / 8.0) * k as f64 / 399.0;
            for sign in [-1.0, 1.0] {
                let m = cabs(ancilla_response(sign * phi, &sched));
                assert!(m <= 0.1 + 1e-12, "phi={phi}: {m}");
            }
        }
    }

    #[test]
    fn tightened_schedule_keeps_one_sided_error() {
        use crate::chebyshev::make_schedule_tightened;
        let sched = make_schedule_tightened(17, 0.1).unwrap();
        assert!((cabs(ancilla_response(0.0, &sched)) - 1.0).abs() < 1e-12);
        // The leak ceiling is saturated at exactly delta for this depth.
        let mut grid_max = 0.0f64;
        for k in 0..20_000 {
            let phi = sched.lambda + (PI - sched.lambda) * k as f64 / 19_999.0;
            grid_max = grid_max.max(cabs(ancilla_response(phi, &sched)));
        }
        assert!(grid_max <= 0.1 + 1e-9, "{grid_max}");
        assert!(grid_max > 0.1 - 1e-4, "ceiling not attained: {grid_max}");
    }

    #[test]
    fn response_matches_closed_form() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..200 {
            let lambda = rng.next_range(0.05, 3.0);
            let delta = rng.next_range(0.01, 0.9);
            let sched = make_schedule(lambda, delta, 2).unwrap();
            let phi = rng.next_range(-PI, PI);
            let got = cabs(ancilla_response(phi, &sched));
            let expect = response_closed_form(phi, &sched);
            assert!(
                (got - expect).abs() < 1e-9,
                "lambda={lambda} delta={delta} phi={phi}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn partial_products_satisfy_quasi_chebyshev_recurrence() {
        // a_n extracted from prefixes of the reduced product obeys
        // a_{n+1} = x (1 + e^{-i theta_n}) a_n - e^{-i theta_n} a_{n-1}.
        let sched = make_schedule(0.7, 0.05, 2).unwrap();
        let phi: f64 = 1.1;
        let x = fmath::cos(phi / 2.0);
        let mut v = [C_ONE, C_ZERO];
        let mut a = vec![C_ONE];
        for &theta in &sched.thetas {
            // A(theta) = R_y(phi) * diag(1, e^{-i theta})
            let b0 = v[0];
            let b1 = v[1] * expi(-theta);
            let c = fmath::cos(phi / 2.0);
            let s = fmath::sin(phi / 2.0);
            v[0] = C64::new(c, 0.0) * b0 - C64::new(s, 0.0) * b1;
            v[1] = C64::new(s, 0.0) * b0 + C64::new(c, 0.0) * b1;
            a.push(v[0]);
        }
        for n in 1..sched.depth {
            let phase = expi(-sched.thetas[n]);
            let predicted = C64::new(x, 0.0) * (C_ONE + phase) * a[n] - phase * a[n - 1];
            assert!(cabs(predicted - a[n + 1]) < 1e-10, "n={n}");
        }
        // And the final entry reproduces the ancilla response up to the
        // controlled-phase bookkeeping: |a_L| = |<0|w>|.
        let resp = cabs(ancilla_response(phi, &sched));
        assert!((cabs(a[sched.depth]) - resp).abs() < 1e-12);
    }

    #[test]
    fn response_factors_into_rotation_product_and_global_phase() {
        // The controlled phase diag(1, e^{i phi}) is e^{i phi/2} R_z(phi),
        // so the response must equal e^{i L phi/2} times the pure
        // rotation-product route.
        let sched = make_schedule(0.9, 0.07, 2).unwrap();
        for phi in [0.0, 0.4, -1.3, 2.9] {
            let mut v = [C_ONE, C_ZERO];
            let apply2 = |m: &CMat, v: &mut [C64; 2]| {
                let (a, b) = (v[0], v[1]);
                v[0] = m[(0, 0)] * a + m[(0, 1)] * b;
                v[1] = m[(1, 0)] * a + m[(1, 1)] * b;
            };
            apply2(rotation(Axis::X, FRAC_PI_2).mat(), &mut v);
            for &theta in &sched.thetas {
                apply2(rotation(Axis::Y, theta).mat(), &mut v);
                apply2(rotation(Axis::Z, phi).mat(), &mut v);
            }
            apply2(rotation(Axis::X, -FRAC_PI_2).mat(), &mut v);
            let via_rotations = expi(sched.depth as f64 * phi / 2.0) * v[0];
            let direct = ancilla_response(phi, &sched);
            assert!(cabs(via_rotations - direct) < 1e-12, "phi={phi}");
        }
    }

    #[test]
    fn identity_oracle_gives_identity_circuit() {
        let sched = make_schedule(0.9, 0.2, 2).unwrap();
        let u = DenseUnitary::identity(3);
        let circuit = build_qpd(&u, &sched);
        assert!(circuit.mat().max_abs_diff(&CMat::identity(6)) < 1e-12);
    }

    #[test]
    fn quarter_phase_eigenvector_is_rejected() {
        let sched = make_schedule(PI / 8.0, 0.1, 2).unwrap();
        let mut m = CMat::identity(2);
        m[(1, 1)] = expi(FRAC_PI_2);
        let u = DenseUnitary::new(m).unwrap();
        let circuit = build_qpd(&u, &sched);
        // ancilla-0 (x) eigenvector of e^{i pi/2} is index 1.
        let state = circuit.apply(&[C_ZERO, C_ONE, C_ZERO, C_ZERO]);
        let accept = fmath::hypot(cabs(state[0]), cabs(state[1]));
        assert!(accept <= 0.1 + 1e-12, "accept amplitude {accept}");
        assert!(circuit.defect() < 1e-12);
    }

    #[test]
    fn full_circuit_matches_reduced_response_branchwise() {
        let mut rng = SplitMix64::new(21);
        let sched = make_schedule(0.5, 0.1, 2).unwrap();
        let u = DenseUnitary::new(random_unitary(4, &mut rng)).unwrap();
        let circuit = build_qpd(&u, &sched);
        let eig = unitary_eig(u.mat());
        assert!(eig.max_residual(u.mat()) < 1e-9);
        for j in 0..4 {
            let v = eig.vectors.col(j);
            let mut input = vec![C_ZERO; 8];
            input[..4].copy_from_slice(&v);
            let out = circuit.apply(&input);
            let w = ancilla_response(eig.phases[j], &sched);
            // ancilla-0 block should be <0|w> times the eigenvector.
            for s in 0..4 {
                assert!(cabs(out[s] - w * v[s]) < 1e-9, "j={j} s={s}");
            }
            let out_norm = vec_norm(&out);
            assert!((out_norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn circuit_is_block_diagonal_in_known_eigenbasis() {
        // Build U = V D V^dag with an exactly known eigenbasis, then check
        // the circuit commutes with every I (x) projector.
        let mut rng = SplitMix64::new(33);
        let v = random_unitary(4, &mut rng);
        let phases = [0.0, 0.9, -1.7, 2.4];
        let d = CMat::diag(&phases.map(expi));
        let u = DenseUnitary::new(v.mul(&d).mul(&v.adjoint())).unwrap();
        let sched = make_schedule(0.4, 0.05, 2).unwrap();
        let circuit = build_qpd(&u, &sched);
        for j in 0..4 {
            let col = v.col(j);
            // projector onto eigenvector j
            let mut proj = CMat::zeros(4, 4);
            for a in 0..4 {
                for b in 0..4 {
                    proj[(a, b)] = col[a] * col[b].conj();
                }
            }
            let mut lifted = CMat::zeros(8, 8);
            for blk in 0..2 {
                for a in 0..4 {
                    for b in 0..4 {
                        lifted[(blk * 4 + a, blk * 4 + b)] = proj[(a, b)];
                    }
                }
            }
            let comm = circuit.mat().mul(&lifted).sub(&lifted.mul(circuit.mat()));
            assert!(comm.max_abs() < 1e-10, "projector {j}: {}", comm.max_abs());
        }
    }

    #[test]
    fn max_leak_matches_grid_supremum() {
        for (lambda, delta) in [(PI / 8.0, 0.1), (0.6, 0.05)] {
            let sched = make_schedule(lambda, delta, 2).unwrap();
            let leak = max_leak(&sched);
            assert!(leak <= delta + 1e-12);
            let points = 40_001;
            let mut grid_max = 0.0f64;
            for k in 0..points {
                let phi = lambda + (PI - lambda) * k as f64 / (points - 1) as f64;
                grid_max = grid_max.max(response_closed_form(phi, &sched));
            }
            assert!(
                (grid_max - leak).abs() < 1e-6,
                "lambda={lambda}: {grid_max} vs {leak}"
            );
        }
    }

    #[test]
    fn max_leak_decreases_with_depth() {
        let mut last = f64::INFINITY;
        for depth in [5usize, 9, 17, 33, 65] {
            let sched = AngleSchedule::with_depth(PI / 8.0, 0.1, depth).unwrap();
            let leak = sched.max_leak();
            assert!(leak < last);
            last = leak;
        }
    }

    #[test]
    fn state_vector_checks_layout_and_norm() {
        assert!(StateVector::new(vec![2, 2], vec![C_ONE; 3]).is_err());
        let unnorm = vec![C_ONE, C_ONE, C_ZERO, C_ZERO];
        assert!(StateVector::new(vec![2, 2], unnorm).is_err());
        let ok = StateVector::basis(vec![4, 2], 5);
        assert_eq!(ok.dims(), &[4, 2]);
        assert!((ok.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_phase_wraps() {
        assert!((canonical_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((canonical_phase(-PI) - PI).abs() < 1e-12);
        assert!((canonical_phase(0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn dense_unitary_rejects_nonunitary() {
        let mut m = CMat::identity(2);
        m[(0, 0)] = C64::new(1.5, 0.0);
        assert!(matches!(
            DenseUnitary::new(m),
            Err(Error::NotUnitary { .. })
        ));
    }
}
