//! Cyclic Jacobi eigensolvers for real symmetric and complex Hermitian
//! matrices, plus eigendecomposition of unitaries through the commuting
//! Hermitian pair `(U + U^dag)/2` and `i(U^dag - U)/2`.
//!
//! The contract everywhere is residual-based: `||A v - lambda v||` small,
//! orthonormal vectors. Deterministic, O(n^3) per sweep, fine for n <= ~1024.

use alloc::vec;
use alloc::vec::Vec;

use crate::fmath;
use crate::linalg::{cabs, expi, CMat, RMat, C64, C_ONE, C_ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a real symmetric matrix.
///
/// `values` ascending; `vectors` holds matching orthonormal columns with the
/// sign fixed so the largest-magnitude component is positive.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: RMat,
}

pub fn sym_eig(a: &RMat) -> SymEig {
    assert!(a.rows() == a.cols(), "sym_eig needs a square matrix");
    let n = a.rows();
    let mut d = a.clone();
    let mut v = RMat::identity(n);
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| fmath::abs(d[(i, j)]))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let stop = 1e-14 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(fmath::abs(d[(p, q)]));
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = d[(p, q)];
                if fmath::abs(apq) <= 1e-2 * stop {
                    continue;
                }
                let app = d[(p, p)];
                let aqq = d[(q, q)];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + fmath::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + fmath::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / fmath::sqrt(1.0 + t * t);
                let s = t * c;

                for i in 0..n {
                    if i != p && i != q {
                        let dip = d[(i, p)];
                        let diq = d[(i, q)];
                        d[(i, p)] = c * dip - s * diq;
                        d[(p, i)] = d[(i, p)];
                        d[(i, q)] = s * dip + c * diq;
                        d[(q, i)] = d[(i, q)];
                    }
                }
                d[(p, p)] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                d[(q, q)] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                d[(p, q)] = 0.0;
                d[(q, p)] = 0.0;

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[(i, i)].partial_cmp(&d[(j, j)]).unwrap());
    let values = order.iter().map(|&i| d[(i, i)]).collect();
    let mut vectors = RMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut best = 0usize;
        for i in 0..n {
            if fmath::abs(v[(i, src)]) > fmath::abs(v[(best, src)]) {
                best = i;
            }
        }
        let sign = if v[(best, src)] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[(i, dst)] = sign * v[(i, src)];
        }
    }
    SymEig { values, vectors }
}

/// Eigendecomposition of a complex Hermitian matrix; `values` ascending,
/// orthonormal columns with the dominant component rotated real-positive.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

pub fn herm_eig(a: &CMat) -> HermEig {
    assert!(a.is_square(), "herm_eig needs a square matrix");
    let n = a.rows();
    let mut d = a.clone();
    let mut v = CMat::identity(n);
    let scale = d.max_abs().max(1e-300);
    let stop = 1e-14 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(cabs(d[(p, q)]));
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = d[(p, q)];
                let r = cabs(g);
                if r <= 1e-2 * stop {
                    continue;
                }
                // Phase-rotate the (p,q) block to a real symmetric one, then
                // apply the usual Givens rotation: J = diag(e^{ia},1) * G.
                let phase = g / C64::new(r, 0.0);
                let app = d[(p, p)].re;
                let aqq = d[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + fmath::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + fmath::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / fmath::sqrt(1.0 + t * t);
                let s = t * c;

                let jpp = phase * c;
                let jpq = phase * s;
                let jqp = C64::new(-s, 0.0);
                let jqq = C64::new(c, 0.0);

                // A <- J^dag A J, exploiting hermiticity.
                for i in 0..n {
                    if i != p && i != q {
                        let dip = d[(i, p)];
                        let diq = d[(i, q)];
                        d[(i, p)] = dip * jpp + diq * jqp;
                        d[(i, q)] = dip * jpq + diq * jqq;
                        d[(p, i)] = d[(i, p)].conj();
                        d[(q, i)] = d[(i, q)].conj();
                    }
                }
                let new_pp = c * c * app - 2.0 * s * c * r + s * s * aqq;
                let new_qq = s * s * app + 2.0 * s * c * r + c * c * aqq;
                d[(p, p)] = C64::new(new_pp, 0.0);
                d[(q, q)] = C64::new(new_qq, 0.0);
                d[(p, q)] = C_ZERO;
                d[(q, p)] = C_ZERO;

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * jpp + viq * jqp;
                    v[(i, q)] = vip * jpq + viq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[(i, i)].re.partial_cmp(&d[(j, j)].re).unwrap());
    let values = order.iter().map(|&i| d[(i, i)].re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut best = 0usize;
        for i in 0..n {
            if cabs(v[(i, src)]) > cabs(v[(best, src)]) {
                best = i;
            }
        }
        let pivot = v[(best, src)];
        let rot = if cabs(pivot) > 0.0 {
            pivot.conj() / C64::new(cabs(pivot), 0.0)
        } else {
            C_ONE
        };
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)] * rot;
        }
    }
    HermEig { values, vectors }
}

/// Eigenphases and eigenvectors of a unitary matrix.
///
/// `phases` in `(-pi, pi]`, ascending; columns of `vectors` are the matching
/// orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct UnitaryEig {
    pub phases: Vec<f64>,
    pub vectors: CMat,
}

impl UnitaryEig {
    /// Largest residual `||U v - e^{i phase} v||` over all eigenpairs.
    pub fn max_residual(&self, u: &CMat) -> f64 {
        let n = u.rows();
        let mut worst = 0.0f64;
        for j in 0..n {
            let v = self.vectors.col(j);
            let uv = u.matvec(&v);
            let ph = expi(self.phases[j]);
            let mut acc = 0.0;
            for i in 0..n {
                acc += (uv[i] - ph * v[i]).norm_sqr();
            }
            worst = worst.max(fmath::sqrt(acc));
        }
        worst
    }
}

/// Diagonalize a unitary by simultaneously diagonalizing the commuting
/// Hermitian pair `C = (U + U^dag)/2` and `S = i(U^dag - U)/2`; then
/// `U v = (cos + i sin) v` on each joint eigenvector.
pub fn unitary_eig(u: &CMat) -> UnitaryEig {
    assert!(u.is_square(), "unitary_eig needs a square matrix");
    let n = u.rows();
    let ud = u.adjoint();
    let half = C64::new(0.5, 0.0);
    let c_mat = u.add(&ud).scale(half);
    let s_mat = ud.sub(u).scale(C64::new(0.0, 0.5));

    let ce = herm_eig(&c_mat);

    // Split cos-degenerate clusters with S restricted to the cluster span.
    let mut phases = vec![0.0f64; n];
    let mut vectors = CMat::zeros(n, n);
    let cluster_tol = 1e-8;
    let mut lo = 0;
    while lo < n {
        let mut hi = lo + 1;
        while hi < n && ce.values[hi] - ce.values[hi - 1] <= cluster_tol {
            hi += 1;
        }
        let m = hi - lo;
        let cols: Vec<Vec<C64>> = (lo..hi).map(|j| ce.vectors.col(j)).collect();
        if m == 1 {
            let sv = s_mat.matvec(&cols[0]);
            let sin_val = cols[0]
                .iter()
                .zip(&sv)
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>();
            phases[lo] = fmath::atan2(sin_val, ce.values[lo]);
            vectors.set_col(lo, &cols[0]);
        } else {
            let mut s_small = CMat::zeros(m, m);
            let s_cols: Vec<Vec<C64>> = cols.iter().map(|c| s_mat.matvec(c)).collect();
            for a in 0..m {
                for b in 0..m {
                    let mut acc = C_ZERO;
                    for i in 0..n {
                        acc += cols[a][i].conj() * s_cols[b][i];
                    }
                    s_small[(a, b)] = acc;
                }
            }
            let se = herm_eig(&s_small);
            for k in 0..m {
                let mut vk = vec![C_ZERO; n];
                for a in 0..m {
                    let w = se.vectors[(a, k)];
                    for i in 0..n {
                        vk[i] += w * cols[a][i];
                    }
                }
                phases[lo + k] = fmath::atan2(se.values[k], ce.values[lo]);
                vectors.set_col(lo + k, &vk);
            }
        }
        lo = hi;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| phases[i].partial_cmp(&phases[j]).unwrap());
    let sorted_phases = order.iter().map(|&i| phases[i]).collect();
    let mut sorted_vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = vectors.col(src);
        sorted_vectors.set_col(dst, &col);
    }
    UnitaryEig {
        phases: sorted_phases,
        vectors: sorted_vectors,
    }
}
