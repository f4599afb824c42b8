//! Eigenspace projection through phase discrimination: apply
//! `C(U_AB, lambda, L)` to a state with a planted 1-eigenspace component,
//! post-select the ancilla on zero, and recover that component with
//! quadratically small probability overhead.
//!
//! Instances are synthetic two-subspace products `U_AB = (2P_A - I)(2P_B - I)`
//! with Haar-random frames and a planted shared unit vector.

use alloc::vec;
use alloc::vec::Vec;

use crate::chebyshev::AngleSchedule;
use crate::eig::unitary_eig;
use crate::fmath;
use crate::linalg::{gram_schmidt, random_unit_vector, vec_dot, vec_norm, CMat, C64, C_ZERO};
use crate::qpd::{apply_qpd, StateVector};
use crate::rng::SplitMix64;
use crate::{Error, Result};

use core::f64::consts::FRAC_PI_2;

/// A two-subspace reflection product with a planted fixed vector and the
/// decomposition `psi = sqrt(p) varphi + (I - P_A) phi`.
#[derive(Debug, Clone)]
pub struct TwoSubspaceInstance {
    pub dim: usize,
    pub proj_a: CMat,
    pub proj_b: CMat,
    /// `(2 P_A - I)(2 P_B - I)`.
    pub u_ab: CMat,
    /// Planted unit vector in `A` intersect `B`; fixed by `u_ab`.
    pub varphi: Vec<C64>,
    /// Vector in `B` whose `(I - P_A)` part feeds `psi`.
    pub phi_vec: Vec<C64>,
    /// Normalized input state.
    pub psi: Vec<C64>,
    /// Weight of the planted component.
    pub p: f64,
    pub seed: u64,
}

fn projector(basis: &[Vec<C64>], dim: usize) -> CMat {
    let mut p = CMat::zeros(dim, dim);
    for b in basis {
        for i in 0..dim {
            let bi = b[i];
            if bi == C_ZERO {
                continue;
            }
            for j in 0..dim {
                p[(i, j)] += bi * b[j].conj();
            }
        }
    }
    p
}

fn reflection(p: &CMat) -> CMat {
    let dim = p.rows();
    let mut r = p.scale(C64::new(2.0, 0.0));
    for i in 0..dim {
        r[(i, i)] -= C64::new(1.0, 0.0);
    }
    r
}

impl TwoSubspaceInstance {
    /// Residual of the defining invariants: projector idempotency and
    /// hermiticity, `u_ab varphi = varphi`, `P_B phi = phi`, and the
    /// normalized decomposition of `psi`.
    pub fn invariant_defect(&self) -> f64 {
        let mut worst = self.proj_a.hermiticity_defect();
        worst = worst.max(self.proj_b.hermiticity_defect());
        worst = worst.max(self.proj_a.mul(&self.proj_a).max_abs_diff(&self.proj_a));
        worst = worst.max(self.proj_b.mul(&self.proj_b).max_abs_diff(&self.proj_b));
        let fixed = self.u_ab.matvec(&self.varphi);
        let mut acc = 0.0;
        for (a, b) in fixed.iter().zip(&self.varphi) {
            acc += (a - b).norm_sqr();
        }
        worst = worst.max(fmath::sqrt(acc));
        let pb_phi = self.proj_b.matvec(&self.phi_vec);
        let mut acc = 0.0;
        for (a, b) in pb_phi.iter().zip(&self.phi_vec) {
            acc += (a - b).norm_sqr();
        }
        worst = worst.max(fmath::sqrt(acc));
        let ortho = self.proj_a.matvec(&self.phi_vec);
        let rebuilt: Vec<C64> = (0..self.dim)
            .map(|i| {
                C64::new(fmath::sqrt(self.p), 0.0) * self.varphi[i] + (self.phi_vec[i] - ortho[i])
            })
            .collect();
        let mut acc = 0.0;
        for (a, b) in rebuilt.iter().zip(&self.psi) {
            acc += (a - b).norm_sqr();
        }
        worst = worst.max(fmath::sqrt(acc));
        worst.max(fmath::abs(vec_norm(&self.psi) - 1.0))
    }
}

/// Draw a seeded instance: Haar frames for `A` and `B` sharing a planted
/// vector, and `phi` in `B` scaled so `psi` is normalized with weight `p`
/// on the planted component. Degenerate draws retry with perturbed seeds.
pub fn make_instance(
    dim: usize,
    dim_a: usize,
    dim_b: usize,
    p: f64,
    seed: u64,
) -> Result<TwoSubspaceInstance> {
    if dim_a == 0 || dim_b == 0 || dim_a >= dim || dim_b >= dim {
        return Err(Error::DimensionMismatch {
            left: dim_a.max(dim_b),
            right: dim,
            context: "subspace dimensions must satisfy 1 <= dim_A, dim_B < dim",
        });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            constraint: "in (0, 1]",
        });
    }
    const MAX_RETRIES: u32 = 16;
    for attempt in 0..MAX_RETRIES {
        let mut rng = SplitMix64::derive(seed, attempt as u64);
        let planted = random_unit_vector(dim, &mut rng);

        let mut frame_a = vec![planted.clone()];
        for _ in 1..dim_a {
            frame_a.push(random_unit_vector(dim, &mut rng));
        }
        let basis_a = gram_schmidt(&frame_a, 1e-8);
        if basis_a.len() != dim_a {
            continue;
        }
        let mut frame_b = vec![planted.clone()];
        for _ in 1..dim_b {
            frame_b.push(random_unit_vector(dim, &mut rng));
        }
        let basis_b = gram_schmidt(&frame_b, 1e-8);
        if basis_b.len() != dim_b {
            continue;
        }
        let proj_a = projector(&basis_a, dim);
        let proj_b = projector(&basis_b, dim);
        let u_ab = reflection(&proj_a).mul(&reflection(&proj_b));

        let (phi_vec, psi) = if p >= 1.0 {
            (vec![C_ZERO; dim], planted.clone())
        } else {
            // A random vector of B with the off-A part rescaled to carry
            // exactly 1 - p of the state's weight.
            let mut raw = vec![C_ZERO; dim];
            for b in &basis_b {
                let c = rng.next_complex_normal();
                for i in 0..dim {
                    raw[i] += c * b[i];
                }
            }
            let off_a: Vec<C64> = {
                let pa = proj_a.matvec(&raw);
                raw.iter().zip(&pa).map(|(r, a)| r - a).collect()
            };
            let off_norm = vec_norm(&off_a);
            if off_norm < 1e-8 {
                continue;
            }
            let scale = C64::new(fmath::sqrt(1.0 - p) / off_norm, 0.0);
            let phi: Vec<C64> = raw.iter().map(|z| z * scale).collect();
            let sqrt_p = C64::new(fmath::sqrt(p), 0.0);
            let psi: Vec<C64> = (0..dim)
                .map(|i| sqrt_p * planted[i] + off_a[i] * scale)
                .collect();
            (phi, psi)
        };

        let inst = TwoSubspaceInstance {
            dim,
            proj_a,
            proj_b,
            u_ab,
            varphi: planted,
            phi_vec,
            psi,
            p,
            seed,
        };
        if inst.invariant_defect() < 1e-10 {
            return Ok(inst);
        }
    }
    Err(Error::DegenerateDraw(MAX_RETRIES))
}

/// Outcome of the projection: ancilla-zero probability, the renormalized
/// post-measurement state, and the schedule actually used.
#[derive(Debug, Clone)]
pub struct ProjectionOutcome {
    pub p_out: f64,
    pub psi_out: StateVector,
    pub lambda: f64,
    pub depth: usize,
}

/// Project `psi` onto the 1-eigenspace of `u_ab` by phase discrimination:
/// schedule gap `lambda = eps / D` and odd depth
/// `L >= ln(2 sqrt(2) / (sqrt(p_bar) eps)) * 2 / lambda`, then apply the
/// circuit to `|0>|psi>` and post-select the ancilla on `|0>`.
///
/// `p_bar` is a known lower bound on `p` and `D` a known upper bound on
/// `||phi|| / sqrt(p)`. When the bound `D` collapses to zero (pure planted
/// state), the gap is capped at `pi/2`; a smaller gap only sharpens the
/// discrimination, so the guarantees are unaffected.
pub fn qpd_project(
    inst: &TwoSubspaceInstance,
    p_bar: f64,
    d_bound: f64,
    eps: f64,
) -> Result<ProjectionOutcome> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            constraint: "in (0, 1)",
        });
    }
    if !(p_bar > 0.0 && p_bar <= inst.p + 1e-12) {
        return Err(Error::InvalidParameter {
            name: "p_bar",
            value: p_bar,
            constraint: "a lower bound on p",
        });
    }
    let ratio = vec_norm(&inst.phi_vec) / fmath::sqrt(inst.p);
    if d_bound < ratio - 1e-9 || d_bound < 0.0 {
        return Err(Error::InvalidParameter {
            name: "d_bound",
            value: d_bound,
            constraint: "an upper bound on ||phi|| / sqrt(p)",
        });
    }
    let lambda = if d_bound > 0.0 {
        (eps / d_bound).min(FRAC_PI_2)
    } else {
        FRAC_PI_2
    };
    // One-sided error delta = sqrt(p_bar / 2) * eps from the schedule bound.
    let delta = fmath::sqrt(p_bar / 2.0) * eps;
    let target = fmath::ln(2.0 * fmath::sqrt(2.0) / (fmath::sqrt(p_bar) * eps)) * 2.0 / lambda;
    let mut depth = fmath::ceil(target) as i64;
    if depth < 1 {
        depth = 1;
    }
    if depth % 2 == 0 {
        depth += 1;
    }
    let schedule = AngleSchedule::with_depth(lambda, delta, depth as usize)?;

    let dim = inst.dim;
    let u_dag = inst.u_ab.adjoint();
    let mut amps = vec![C_ZERO; 2 * dim];
    amps[..dim].copy_from_slice(&inst.psi);
    apply_qpd(&inst.u_ab, &u_dag, &schedule, &mut amps, false);

    let p_out: f64 = amps[..dim].iter().map(|z| z.norm_sqr()).sum();
    let scale = C64::new(1.0 / fmath::sqrt(p_out), 0.0);
    let post: Vec<C64> = amps[..dim].iter().map(|z| z * scale).collect();
    Ok(ProjectionOutcome {
        p_out,
        psi_out: StateVector::new(vec![dim], post)?,
        lambda,
        depth: depth as usize,
    })
}

/// Eigenphase profile of `(I - P_A) phi` against the spectrum of `u_ab`,
/// computed once so a whole `eps` grid costs one eigendecomposition.
#[derive(Debug, Clone)]
pub struct EffectiveGapProfile {
    phases: Vec<f64>,
    weights: Vec<f64>,
}

impl EffectiveGapProfile {
    pub fn new(inst: &TwoSubspaceInstance) -> Self {
        let dim = inst.dim;
        let pa_phi = inst.proj_a.matvec(&inst.phi_vec);
        let off_a: Vec<C64> = inst
            .phi_vec
            .iter()
            .zip(&pa_phi)
            .map(|(r, a)| r - a)
            .collect();
        let eig = unitary_eig(&inst.u_ab);
        let weights = (0..dim)
            .map(|j| vec_dot(&eig.vectors.col(j), &off_a).norm_sqr())
            .collect();
        Self {
            phases: eig.phases,
            weights,
        }
    }

    /// Norm of `Lambda_eps (I - P_A) phi` over the band `|theta| <= eps`.
    pub fn band_norm(&self, eps: f64) -> f64 {
        assert!(
            (0.0..core::f64::consts::PI).contains(&eps),
            "eps in [0, pi)"
        );
        let acc: f64 = self
            .phases
            .iter()
            .zip(&self.weights)
            .filter(|(theta, _)| fmath::abs(**theta) <= eps + 1e-9)
            .map(|(_, w)| w)
            .sum();
        fmath::sqrt(acc)
    }
}

/// Norm of `Lambda_eps (I - P_A) phi`, where `Lambda_eps` projects onto the
/// eigenphases of `u_ab` with `|theta| <= eps`; bounded by `(eps/2) ||phi||`
/// whenever `P_B phi = phi`.
pub fn effective_gap_check(inst: &TwoSubspaceInstance, eps: f64) -> f64 {
    EffectiveGapProfile::new(inst).band_norm(eps)
}

/// `Lambda_eps psi` (projection of an arbitrary vector); exposed for the
/// zero-phase identity checks.
pub fn phase_band_projection(inst: &TwoSubspaceInstance, v: &[C64], eps: f64) -> Vec<C64> {
    let dim = inst.dim;
    let eig = unitary_eig(&inst.u_ab);
    let mut out = vec![C_ZERO; dim];
    for j in 0..dim {
        if fmath::abs(eig.phases[j]) <= eps + 1e-9 {
            let col = eig.vectors.col(j);
            let overlap = vec_dot(&col, v);
            for i in 0..dim {
                out[i] += overlap * col[i];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_invariants_hold() {
        for (dim, da, db, p, seed) in [
            (8usize, 2usize, 3usize, 0.3f64, 1u64),
            (16, 5, 4, 0.05, 2),
            (12, 1, 6, 0.5, 3),
            (6, 2, 2, 1.0, 4),
        ] {
            let inst = make_instance(dim, da, db, p, seed).unwrap();
            assert!(inst.invariant_defect() < 1e-10, "seed {seed}");
            // Off-A component carries exactly 1 - p.
            let pa_phi = inst.proj_a.matvec(&inst.phi_vec);
            let off: Vec<C64> = inst
                .phi_vec
                .iter()
                .zip(&pa_phi)
                .map(|(r, a)| r - a)
                .collect();
            assert!((vec_norm(&off) - fmath::sqrt(1.0 - p)).abs() < 1e-9);
        }
    }

    #[test]
    fn instance_eigenphases_pair_up() {
        let inst = make_instance(10, 3, 3, 0.2, 9).unwrap();
        let eig = unitary_eig(&inst.u_ab);
        assert!(eig.max_residual(&inst.u_ab) < 1e-8);
        // The planted vector sits in the zero-phase eigenspace.
        let lam0 = phase_band_projection(&inst, &inst.varphi, 0.0);
        let mut diff = 0.0;
        for (a, b) in lam0.iter().zip(&inst.varphi) {
            diff += (a - b).norm_sqr();
        }
        assert!(fmath::sqrt(diff) < 1e-7, "{}", fmath::sqrt(diff));
        // Nonzero phases come in +- pairs.
        let mut nonzero: Vec<f64> = eig
            .phases
            .iter()
            .copied()
            .filter(|p| {
                fmath::abs(*p) > 1e-7 && fmath::abs(fmath::abs(*p) - core::f64::consts::PI) > 1e-7
            })
            .collect();
        nonzero.sort_by(|a, b| a.partial_cmp(b).unwrap());
        while let (Some(lo), Some(hi)) = (nonzero.first().copied(), nonzero.last().copied()) {
            assert!((lo + hi).abs() < 1e-7, "unpaired phases {lo} {hi}");
            nonzero.pop();
            nonzero.remove(0);
        }
    }

    #[test]
    fn rejects_bad_dimensions_and_degenerate_draws() {
        assert!(make_instance(4, 0, 2, 0.3, 1).is_err());
        assert!(make_instance(4, 4, 2, 0.3, 1).is_err());
        assert!(make_instance(8, 2, 2, 0.0, 1).is_err());
        // dim_B = 1 forces B = span(planted) so the off-A part vanishes.
        assert!(matches!(
            make_instance(8, 2, 1, 0.5, 1),
            Err(Error::DegenerateDraw(_))
        ));
    }

    #[test]
    fn pure_planted_state_projects_exactly() {
        let inst = make_instance(8, 3, 3, 1.0, 5).unwrap();
        let out = qpd_project(&inst, 1.0, 0.0, 0.2).unwrap();
        assert!((out.p_out - 1.0).abs() < 1e-12);
        let mut diff = 0.0;
        for (a, b) in out.psi_out.amps().iter().zip(&inst.varphi) {
            diff += (a - b).norm_sqr();
        }
        assert!(fmath::sqrt(diff) < 1e-10);
    }

    #[test]
    fn projection_bounds_hold_on_random_instance() {
        let inst = make_instance(32, 8, 8, 0.1, 12).unwrap();
        let eps = 0.2;
        let d = vec_norm(&inst.phi_vec) / fmath::sqrt(inst.p);
        let out = qpd_project(&inst, inst.p, d, eps).unwrap();
        let ratio = out.p_out / inst.p;
        assert!(
            (1.0 - 1e-9..=1.0 + 0.75 * eps * eps).contains(&ratio),
            "ratio {ratio}"
        );
        let mut diff = 0.0;
        for (a, b) in out.psi_out.amps().iter().zip(&inst.varphi) {
            diff += (a - b).norm_sqr();
        }
        assert!(
            fmath::sqrt(diff) <= eps,
            "fidelity error {}",
            fmath::sqrt(diff)
        );
        // Real overlap equal to sqrt(p / p_out).
        let overlap = vec_dot(&inst.varphi, out.psi_out.amps());
        assert!(fmath::abs(overlap.im) < 1e-9);
        assert!(fmath::abs(overlap.re - fmath::sqrt(inst.p / out.p_out)) < 1e-9);
    }

    #[test]
    fn projection_rejects_precondition_violations() {
        let inst = make_instance(8, 3, 3, 0.2, 6).unwrap();
        assert!(qpd_project(&inst, 0.5, 10.0, 0.2).is_err()); // p_bar > p
        assert!(qpd_project(&inst, 0.1, 0.1, 0.2).is_err()); // D too small
        assert!(qpd_project(&inst, 0.1, 10.0, 1.5).is_err()); // eps out of range
    }

    #[test]
    fn effective_gap_bound_over_eps_grid() {
        let inst = make_instance(16, 4, 5, 0.15, 21).unwrap();
        let phi_norm = vec_norm(&inst.phi_vec);
        for k in 0..50 {
            let eps = k as f64 * 3.1 / 49.0;
            let v = effective_gap_check(&inst, eps);
            assert!(
                v <= eps / 2.0 * phi_norm + 1e-8,
                "eps {eps}: {v} > {}",
                eps / 2.0 * phi_norm
            );
        }
    }

    #[test]
    fn zero_band_identity_from_planted_component() {
        // Lambda_0 psi = sqrt(p) varphi.
        let inst = make_instance(12, 4, 4, 0.3, 8).unwrap();
        let lam0_psi = phase_band_projection(&inst, &inst.psi, 0.0);
        let sqrt_p = fmath::sqrt(inst.p);
        let mut diff = 0.0;
        for (a, b) in lam0_psi.iter().zip(&inst.varphi) {
            diff += (a - C64::new(sqrt_p, 0.0) * b).norm_sqr();
        }
        assert!(fmath::sqrt(diff) < 1e-7, "{}", fmath::sqrt(diff));
    }

    #[test]
    fn identical_subspaces_give_pure_instance() {
        // When P_A = P_B every B vector lies in A, so the only consistent
        // decomposition has p = 1; the generator reports degenerate draws
        // for p < 1 rather than fabricating an off-A part.
        assert!(matches!(
            make_instance(6, 2, 1, 0.4, 2),
            Err(Error::DegenerateDraw(_))
        ));
        let inst = make_instance(6, 2, 2, 1.0, 2).unwrap();
        let mut diff = 0.0;
        for (a, b) in inst.psi.iter().zip(&inst.varphi) {
            diff += (a - b).norm_sqr();
        }
        assert!(fmath::sqrt(diff) < 1e-12);
    }
}
