//! Spatial search: the approximate reflection about the uniform state,
//! controlled intermittent walks, recursive amplitude amplification, and the
//! measured search process with exact branch accounting.
//!
//! State layout: vertex register first, then one qubit per recursion level,
//! later levels more significant (`idx = v + n * (k_1 + 2 k_2 + ...)`).
//! Within a reflection application the level qubit plays the circuit's
//! ancilla and sits above the vertex register, matching [`crate::qpd`].

use alloc::vec;
use alloc::vec::Vec;

use crate::chebyshev::{make_schedule, AngleSchedule};
use crate::fmath;
use crate::graph::{ctqw, spectrum, Graph, GraphSpectrum};
use crate::linalg::{CMat, C64, C_ONE, C_ZERO};
use crate::qpd::{apply_qpd, DenseUnitary, StateVector};
use crate::rng::SplitMix64;
use crate::{Error, Result};

use core::f64::consts::PI;

/// Upper limit on gamma: `(4/5)(1/2 - pi/12)`.
pub const GAMMA_MAX: f64 = 0.8 * (0.5 - PI / 12.0);

/// Recursion-level reflection accuracy `beta_i = (9 / (2 pi^3)) gamma / i^2`.
pub fn beta(level: usize, gamma: f64) -> f64 {
    debug_assert!(level >= 1);
    9.0 / (2.0 * PI * PI * PI) * gamma / (level * level) as f64
}

/// Success-probability floor of the search process,
/// `(1/2 - pi/12 - 5 gamma / 4)^2`.
pub fn success_floor(gamma: f64) -> f64 {
    let base = 0.5 - PI / 12.0 - 1.25 * gamma;
    base * base
}

/// Diagonal phase oracle: `|v> -> (-1)^{[v marked]} |v>`.
pub fn phase_oracle(n: usize, marked: &[usize]) -> Result<DenseUnitary> {
    let mut mask = vec![false; n];
    for &v in marked {
        if v >= n {
            return Err(Error::InvalidGraph(alloc::format!(
                "marked vertex {v} out of range for n = {n}"
            )));
        }
        if mask[v] {
            return Err(Error::InvalidGraph(alloc::format!(
                "marked vertex {v} repeated"
            )));
        }
        mask[v] = true;
    }
    let entries: Vec<C64> = mask
        .iter()
        .map(|&m| if m { -C_ONE } else { C_ONE })
        .collect();
    Ok(DenseUnitary::new_unchecked(CMat::diag(&entries)))
}

/// Query and walk-time counters.
///
/// `oracle_queries` counts each marked-set phase flip and each marked-subspace
/// measurement once; `evolution_time` accumulates `|t|` over every controlled
/// walk segment.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Counters {
    pub oracle_queries: u64,
    pub evolution_time: f64,
}

/// The one-ancilla approximate reflection about the uniform vertex state,
/// kept in streaming form: the walk propagator plus an angle schedule.
///
/// The composed circuit is `R_z(-pi) C(U, lambda, L)^dag R_z(pi) C(U, lambda, L)`
/// with `U = e^{i L t_0}`, `t_0 = pi / lambda_N`, and the gap
/// `lambda = pi lambda_2 / lambda_N`.
#[derive(Debug, Clone)]
pub struct ReflectionCircuit {
    schedule: AngleSchedule,
    walk: CMat,
    walk_dag: CMat,
    t0: f64,
}

impl ReflectionCircuit {
    pub fn new(spec: &GraphSpectrum, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                constraint: "in (0, 1)",
            });
        }
        // lambda = pi on gap-equals-top graphs (complete graphs) sits on the
        // schedule's open boundary; nudge inside. Odd depth keeps the phase-pi
        // branch exactly rejected either way.
        let lambda = (PI * spec.gap() / spec.top()).min(PI * (1.0 - 1e-12));
        let schedule = make_schedule(lambda, delta, 4)?;
        let t0 = PI / spec.top();
        let walk = ctqw(spec, t0).into_mat();
        let walk_dag = walk.adjoint();
        Ok(Self {
            schedule,
            walk,
            walk_dag,
            t0,
        })
    }

    pub fn schedule(&self) -> &AngleSchedule {
        &self.schedule
    }

    pub fn depth(&self) -> usize {
        self.schedule.depth
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Walk time of one application: `2 L t_0`.
    pub fn evolution_time(&self) -> f64 {
        2.0 * self.depth() as f64 * self.t0
    }

    /// Apply in place to an `[ancilla (x) vertex]` slice of length `2n`.
    pub fn apply_in_place(&self, amps: &mut [C64], dagger: bool) {
        let n = self.walk.rows();
        debug_assert_eq!(amps.len(), 2 * n);
        let rz = |amps: &mut [C64], positive: bool| {
            // R_z(pi) = diag(-i, i) on the ancilla; R_z(-pi) its conjugate.
            let (lo, hi) = if positive {
                (C64::new(0.0, -1.0), C64::new(0.0, 1.0))
            } else {
                (C64::new(0.0, 1.0), C64::new(0.0, -1.0))
            };
            for a in amps[..n].iter_mut() {
                *a *= lo;
            }
            for a in amps[n..].iter_mut() {
                *a *= hi;
            }
        };
        if !dagger {
            apply_qpd(&self.walk, &self.walk_dag, &self.schedule, amps, false);
            rz(amps, true);
            apply_qpd(&self.walk, &self.walk_dag, &self.schedule, amps, true);
            rz(amps, false);
        } else {
            rz(amps, true);
            apply_qpd(&self.walk, &self.walk_dag, &self.schedule, amps, false);
            rz(amps, false);
            apply_qpd(&self.walk, &self.walk_dag, &self.schedule, amps, true);
        }
    }

    /// Materialize the `2n x 2n` unitary.
    pub fn to_matrix(&self) -> DenseUnitary {
        let n = self.walk.rows();
        let mut out = CMat::zeros(2 * n, 2 * n);
        let mut col = vec![C_ZERO; 2 * n];
        for j in 0..2 * n {
            col.fill(C_ZERO);
            col[j] = C_ONE;
            self.apply_in_place(&mut col, false);
            out.set_col(j, &col);
        }
        DenseUnitary::new_unchecked(out)
    }
}

/// One-sided approximate reflection `R(delta)` about `|0>|pi>` as a dense
/// unitary on ancilla (x) vertex space.
pub fn approx_reflection(spec: &GraphSpectrum, delta: f64) -> Result<DenseUnitary> {
    Ok(ReflectionCircuit::new(spec, delta)?.to_matrix())
}

/// Controlled intermittent walk
/// `W = prod_j [(U_j (x) I) Lambda_k(e^{i L t_j})] (U_0 (x) I)`,
/// with a k-qubit control register above the vertex register. Negative `t_j`
/// runs the corresponding walk segment backwards.
pub fn ciqw(
    spec: &GraphSpectrum,
    u0: &DenseUnitary,
    steps: &[(DenseUnitary, f64)],
) -> Result<DenseUnitary> {
    let k_dim = u0.dim();
    if !k_dim.is_power_of_two() || k_dim < 2 {
        return Err(Error::DimensionMismatch {
            left: k_dim,
            right: 2,
            context: "control register must hold k >= 1 qubits",
        });
    }
    let n = spec.n();
    let lift = |u: &DenseUnitary| -> CMat {
        let mut m = CMat::zeros(k_dim * n, k_dim * n);
        for a in 0..k_dim {
            for b in 0..k_dim {
                let g = u.mat()[(a, b)];
                if g == C_ZERO {
                    continue;
                }
                for s in 0..n {
                    m[(a * n + s, b * n + s)] = g;
                }
            }
        }
        m
    };
    let mut w = lift(u0);
    for (uj, tj) in steps {
        if uj.dim() != k_dim {
            return Err(Error::DimensionMismatch {
                left: uj.dim(),
                right: k_dim,
                context: "all control-signal unitaries must share the register",
            });
        }
        let mut lam = CMat::zeros(k_dim * n, k_dim * n);
        for l in 0..k_dim {
            let block = ctqw(spec, l as f64 * tj).into_mat();
            for a in 0..n {
                for b in 0..n {
                    lam[(l * n + a, l * n + b)] = block[(a, b)];
                }
            }
        }
        w = lift(uj).mul(&lam.mul(&w));
    }
    Ok(DenseUnitary::new_unchecked(w))
}

/// Total walk time `sum_j |t_j|` of a step list.
pub fn ciqw_evolution_time(steps: &[(DenseUnitary, f64)]) -> f64 {
    steps.iter().map(|(_, t)| fmath::abs(*t)).sum()
}

/// Search problem instance: graph, marked set, known lower bound on the
/// marked fraction, amplification accuracy, and the sampling seed.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub graph: Graph,
    pub marked: Vec<usize>,
    pub epsilon: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(
        graph: Graph,
        marked: Vec<usize>,
        epsilon: f64,
        gamma: f64,
        seed: u64,
    ) -> Result<Self> {
        let n = graph.n();
        let mut mask = vec![false; n];
        for &v in &marked {
            if v >= n {
                return Err(Error::InvalidGraph(alloc::format!(
                    "marked vertex {v} out of range for n = {n}"
                )));
            }
            if mask[v] {
                return Err(Error::InvalidGraph(alloc::format!(
                    "marked vertex {v} repeated"
                )));
            }
            mask[v] = true;
        }
        if marked.is_empty() || marked.len() == n {
            return Err(Error::InvalidGraph(
                "marked set must be a nonempty proper subset".into(),
            ));
        }
        let p_m = marked.len() as f64 / n as f64;
        if !(epsilon > 0.0 && epsilon <= p_m + 1e-12) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                constraint: "in (0, |marked|/n]",
            });
        }
        if !(gamma > 0.0 && gamma < GAMMA_MAX) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                constraint: "in (0, (4/5)(1/2 - pi/12))",
            });
        }
        Ok(Self {
            graph,
            marked,
            epsilon,
            gamma,
            seed,
        })
    }

    /// True marked fraction `p_M = |M| / n`.
    pub fn p_marked(&self) -> f64 {
        self.marked.len() as f64 / self.graph.n() as f64
    }
}

/// Smallest `k >= 0` with `3^k phi0 >= pi/6`; tripling from below `pi/6`
/// always lands inside `[pi/6, pi/2]`.
pub fn amplification_depth(phi0: f64) -> usize {
    debug_assert!(phi0 > 0.0 && phi0 <= PI / 2.0 + 1e-12);
    let mut k = 0;
    let mut phase = phi0;
    while phase < PI / 6.0 - 1e-12 {
        phase *= 3.0;
        k += 1;
    }
    k
}

/// The recursive amplifier `A_t` in streaming form, with per-level
/// reflection circuits built once and shared across applications.
pub struct Amplifier {
    n: usize,
    levels: usize,
    marked_mask: Vec<bool>,
    kernels: Vec<ReflectionCircuit>,
}

impl Amplifier {
    pub fn new(spec: &GraphSpectrum, marked: &[usize], gamma: f64, levels: usize) -> Result<Self> {
        let n = spec.n();
        let mut mask = vec![false; n];
        for &v in marked {
            if v >= n {
                return Err(Error::InvalidGraph(alloc::format!(
                    "marked vertex {v} out of range"
                )));
            }
            mask[v] = true;
        }
        let mut kernels = Vec::with_capacity(levels);
        for i in 1..=levels {
            kernels.push(ReflectionCircuit::new(spec, beta(i, gamma))?);
        }
        Ok(Self {
            n,
            levels,
            marked_mask: mask,
            kernels,
        })
    }

    pub fn state_len(&self) -> usize {
        self.n << self.levels
    }

    /// `|pi> (x) |0...0>`.
    pub fn uniform_state(&self) -> Vec<C64> {
        let mut amps = vec![C_ZERO; self.state_len()];
        let a = C64::new(1.0 / fmath::sqrt(self.n as f64), 0.0);
        for v in 0..self.n {
            amps[v] = a;
        }
        amps
    }

    fn oracle(&self, amps: &mut [C64], counters: &mut Counters) {
        for (idx, a) in amps.iter_mut().enumerate() {
            if self.marked_mask[idx % self.n] {
                *a = -*a;
            }
        }
        counters.oracle_queries += 1;
    }

    /// Reflection `2 |0^{i-1}><0^{i-1}| - I` on the levels below `level`.
    fn ancilla_reflection(&self, level: usize, amps: &mut [C64]) {
        let low_mask = (1usize << (level - 1)) - 1;
        if low_mask == 0 {
            return;
        }
        for (idx, a) in amps.iter_mut().enumerate() {
            if (idx / self.n) & low_mask != 0 {
                *a = -*a;
            }
        }
    }

    /// `R(beta_level)` on the vertex register and level qubit, conditioned on
    /// the lower level qubits reading zero.
    fn conditioned_reflection(
        &self,
        level: usize,
        amps: &mut [C64],
        dagger: bool,
        counters: &mut Counters,
    ) {
        let kernel = &self.kernels[level - 1];
        let n = self.n;
        let bit = 1usize << (level - 1);
        let outer = 1usize << (self.levels - level);
        let mut slice = vec![C_ZERO; 2 * n];
        for m in 0..outer {
            let base = m << level;
            let lo = base * n;
            let hi = (base | bit) * n;
            slice[..n].copy_from_slice(&amps[lo..lo + n]);
            slice[n..].copy_from_slice(&amps[hi..hi + n]);
            kernel.apply_in_place(&mut slice, dagger);
            amps[lo..lo + n].copy_from_slice(&slice[..n]);
            amps[hi..hi + n].copy_from_slice(&slice[n..]);
        }
        counters.evolution_time += kernel.evolution_time();
    }

    /// Apply `A_level` (or its adjoint) in place.
    pub fn apply(&self, level: usize, amps: &mut [C64], dagger: bool, counters: &mut Counters) {
        debug_assert!(level <= self.levels);
        debug_assert_eq!(amps.len(), self.state_len());
        if level == 0 {
            return;
        }
        if !dagger {
            self.apply(level - 1, amps, false, counters);
            self.oracle(amps, counters);
            self.apply(level - 1, amps, true, counters);
            self.conditioned_reflection(level, amps, false, counters);
            self.ancilla_reflection(level, amps);
            self.apply(level - 1, amps, false, counters);
        } else {
            self.apply(level - 1, amps, true, counters);
            self.ancilla_reflection(level, amps);
            self.conditioned_reflection(level, amps, true, counters);
            self.apply(level - 1, amps, false, counters);
            self.oracle(amps, counters);
            self.apply(level - 1, amps, true, counters);
        }
    }

    /// Probability mass on marked vertices.
    pub fn marked_probability(&self, amps: &[C64]) -> f64 {
        amps.iter()
            .enumerate()
            .filter(|(idx, _)| self.marked_mask[idx % self.n])
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Materialize `A_level` as a dense unitary (test-sized instances only).
    pub fn to_matrix(&self, level: usize) -> DenseUnitary {
        let len = self.state_len();
        let mut out = CMat::zeros(len, len);
        let mut col = vec![C_ZERO; len];
        let mut scratch = Counters::default();
        for j in 0..len {
            col.fill(C_ZERO);
            col[j] = C_ONE;
            self.apply(level, &mut col, false, &mut scratch);
            out.set_col(j, &col);
        }
        DenseUnitary::new_unchecked(out)
    }
}

/// Per-level diagnostics of a recursive-amplifier run.
#[derive(Debug, Clone)]
pub struct LevelDiagnostics {
    pub level: usize,
    /// Ideal angle `3^i arcsin(sqrt(p_M))`.
    pub phi_bar: f64,
    /// Achieved success amplitude `sin(phi_i)`.
    pub sin_phi: f64,
    /// Deviation `e_i = |sin(phi_i) - sin(phi_bar_i)|`.
    pub e: f64,
    /// Recursive ceiling `e~_i` with `e~_{i+1} = 4 beta_{i+1} phi_bar_i + 3 e~_i`.
    pub e_tilde: f64,
}

/// Result of applying `A_t` to `|pi>|0^t>`.
#[derive(Debug, Clone)]
pub struct AmplifierRun {
    pub state: StateVector,
    pub levels: Vec<LevelDiagnostics>,
    /// Final marked-subspace amplitude `sin(phi_t)`.
    pub marked_amplitude: f64,
    pub counters: Counters,
}

/// Build and apply the recursive amplifier at depth `t`, with the
/// admissibility window `3^t arcsin(sqrt(p_M)) in [pi/6, pi/2]` enforced.
pub fn recursive_amplifier(cfg: &SearchConfig, t: usize) -> Result<AmplifierRun> {
    let spec = spectrum(&cfg.graph);
    let p_m = cfg.p_marked();
    let phi0 = fmath::asin(fmath::sqrt(p_m));
    let phase = fmath::powi(3.0, t as i32) * phi0;
    if !(PI / 6.0 - 1e-12..=PI / 2.0 + 1e-12).contains(&phase) {
        return Err(Error::WindowViolation { t: t as u32, phase });
    }
    let amp = Amplifier::new(&spec, &cfg.marked, cfg.gamma, t)?;

    let mut counters = Counters::default();
    let mut amps = amp.uniform_state();
    amp.apply(t, &mut amps, false, &mut counters);

    let mut levels = Vec::with_capacity(t + 1);
    let mut e_tilde = 0.0f64;
    for i in 0..=t {
        let phi_bar = fmath::powi(3.0, i as i32) * phi0;
        let sin_phi = if i == t {
            fmath::sqrt(amp.marked_probability(&amps))
        } else {
            let mut probe = amp.uniform_state();
            let mut scratch = Counters::default();
            amp.apply(i, &mut probe, false, &mut scratch);
            fmath::sqrt(amp.marked_probability(&probe))
        };
        if i > 0 {
            let prev_phi_bar = fmath::powi(3.0, (i - 1) as i32) * phi0;
            e_tilde = 4.0 * beta(i, cfg.gamma) * prev_phi_bar + 3.0 * e_tilde;
        }
        levels.push(LevelDiagnostics {
            level: i,
            phi_bar,
            sin_phi,
            e: fmath::abs(sin_phi - fmath::sin(phi_bar)),
            e_tilde,
        });
    }
    let marked_amplitude = levels[t].sin_phi;
    let mut dims = vec![cfg.graph.n()];
    dims.resize(1 + t, 2);
    Ok(AmplifierRun {
        state: StateVector::new(dims, amps)?,
        levels,
        marked_amplitude,
        counters,
    })
}

/// Whether a run draws outcomes or carries the full probability tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Sample,
}

/// What the measured process produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Sampling mode output a marked vertex.
    Found(usize),
    /// Sampling mode ran out of loops (or measured an unmarked vertex).
    Exhausted,
    /// Exact mode: the trace carries the whole probability tree.
    Exact,
}

/// One loop of the search process.
#[derive(Debug, Clone)]
pub struct LoopRecord {
    pub i: usize,
    /// Conditional success probability of this loop's measurement.
    pub success_probability: f64,
    /// Probability of having succeeded by the end of this loop.
    pub cumulative_success: f64,
    /// Oracle queries spent in this loop (amplifier plus one measurement).
    pub oracle_queries: u64,
    /// Walk time spent in this loop.
    pub evolution_time: f64,
    /// `|| |psi_i> - A_i |pi, 0^i> ||`, the drift of the renormalized
    /// failure branch from the ideal amplifier state.
    pub deviation: f64,
}

/// Full record of a search run.
#[derive(Debug, Clone)]
pub struct SearchTrace {
    pub t_max: usize,
    /// Admissible depth under the true marked fraction.
    pub t_star: usize,
    /// Guaranteed floor `(1/2 - pi/12 - 5 gamma/4)^2`.
    pub success_bound: f64,
    pub loops: Vec<LoopRecord>,
    pub cumulative_success: f64,
    pub outcome: SearchOutcome,
    pub total_queries: u64,
    pub total_evolution_time: f64,
    pub seed: u64,
}

fn collapse_unmarked(mask: &[bool], n: usize, amps: &mut [C64], q: f64) {
    let scale = C64::new(1.0 / fmath::sqrt(1.0 - q), 0.0);
    for (idx, a) in amps.iter_mut().enumerate() {
        if mask[idx % n] {
            *a = C_ZERO;
        } else {
            *a *= scale;
        }
    }
}

fn sample_marked_vertex(
    mask: &[bool],
    n: usize,
    amps: &[C64],
    q: f64,
    rng: &mut SplitMix64,
) -> usize {
    let mut draw = rng.next_f64() * q;
    let mut last = 0;
    for v in 0..n {
        if !mask[v] {
            continue;
        }
        last = v;
        let mut w = 0.0;
        let mut idx = v;
        while idx < amps.len() {
            w += amps[idx].norm_sqr();
            idx += n;
        }
        if draw < w {
            return v;
        }
        draw -= w;
    }
    last
}

/// Run the search process: prepare `|pi>|0^{t_max}>`, and for
/// `i = 1..t_max` apply `A_i`, measure the marked subspace, stop on success,
/// and otherwise renormalize the failure branch and continue with the next
/// fresh level qubit.
pub fn search(cfg: &SearchConfig, mode: SearchMode) -> Result<SearchTrace> {
    let spec = spectrum(&cfg.graph);
    let n = cfg.graph.n();
    let p_m = cfg.p_marked();
    let t_max = amplification_depth(fmath::asin(fmath::sqrt(cfg.epsilon)));
    let t_star = amplification_depth(fmath::asin(fmath::sqrt(p_m)));
    let success_bound = success_floor(cfg.gamma);
    let mut rng = SplitMix64::new(cfg.seed);

    let mut loops = Vec::new();
    let mut outcome = match mode {
        SearchMode::Exact => SearchOutcome::Exact,
        SearchMode::Sample => SearchOutcome::Exhausted,
    };
    let mut cumulative = 0.0f64;

    if t_max == 0 {
        // Measure the uniform state directly.
        cumulative = p_m;
        loops.push(LoopRecord {
            i: 0,
            success_probability: p_m,
            cumulative_success: p_m,
            oracle_queries: 1,
            evolution_time: 0.0,
            deviation: 0.0,
        });
        if mode == SearchMode::Sample {
            let v = rng.next_below(n);
            if cfg.marked.contains(&v) {
                outcome = SearchOutcome::Found(v);
            }
        }
        return Ok(SearchTrace {
            t_max,
            t_star,
            success_bound,
            cumulative_success: cumulative,
            outcome,
            total_queries: 1,
            total_evolution_time: 0.0,
            loops,
            seed: cfg.seed,
        });
    }

    let amp = Amplifier::new(&spec, &cfg.marked, cfg.gamma, t_max)?;
    let marked_mask = {
        let mut m = vec![false; n];
        for &v in &cfg.marked {
            m[v] = true;
        }
        m
    };
    let mut state = amp.uniform_state();
    let mut survival = 1.0f64;
    let mut total_queries = 0u64;
    let mut total_time = 0.0f64;

    for i in 1..=t_max {
        let mut counters = Counters::default();
        amp.apply(i, &mut state, false, &mut counters);

        // Drift diagnostic against the ideal state A_i |pi, 0^i>.
        let mut ideal = amp.uniform_state();
        let mut scratch = Counters::default();
        amp.apply(i, &mut ideal, false, &mut scratch);
        let mut dev = 0.0f64;
        for (a, b) in state.iter().zip(&ideal) {
            dev += (a - b).norm_sqr();
        }
        let deviation = fmath::sqrt(dev);

        let q = amp.marked_probability(&state);
        counters.oracle_queries += 1; // the marked-subspace measurement
        cumulative += survival * q;
        total_queries += counters.oracle_queries;
        total_time += counters.evolution_time;
        loops.push(LoopRecord {
            i,
            success_probability: q,
            cumulative_success: cumulative,
            oracle_queries: counters.oracle_queries,
            evolution_time: counters.evolution_time,
            deviation,
        });

        match mode {
            SearchMode::Exact => {
                if q > 1.0 - 1e-14 {
                    // Failure branch has no mass left to renormalize.
                    break;
                }
                collapse_unmarked(&marked_mask, n, &mut state, q);
                survival *= 1.0 - q;
            }
            SearchMode::Sample => {
                if rng.next_f64() < q {
                    outcome = SearchOutcome::Found(sample_marked_vertex(
                        &marked_mask,
                        n,
                        &state,
                        q,
                        &mut rng,
                    ));
                    break;
                }
                if q > 1.0 - 1e-14 {
                    break;
                }
                collapse_unmarked(&marked_mask, n, &mut state, q);
            }
        }
    }

    Ok(SearchTrace {
        t_max,
        t_star,
        success_bound,
        cumulative_success: cumulative,
        outcome,
        total_queries,
        total_evolution_time: total_time,
        loops,
        seed: cfg.seed,
    })
}
