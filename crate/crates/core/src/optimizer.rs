//! Gram-entropy maximization over circuit parameters.
//!
//! The objective is S(Π) − λ·max(0, floor − σ_min(X))², a rank-penalized
//! von Neumann entropy: maximizing S spreads the Gram spectrum evenly while
//! the penalty keeps the coefficient matrix comfortably invertible. The
//! search is derivative-free: adaptive Nelder-Mead over the concatenated
//! parameter vector, re-seeded around the incumbent with shrinking simplex
//! radii, across independent random restarts. Restarts run in parallel and
//! own derived RNG streams, so a given config and seed is bit-reproducible
//! regardless of thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_unitary, random_params, CircuitLayout};
use crate::error::{Error, Result};
use crate::linalg::sym_eigvals_real;
use crate::pauli::OperatorBasis;
use crate::povm::{entropy_of_spectrum, m_cg, CoefficientMatrix, Generator, PovmSet};
use crate::rng::stream;
use crate::scalar::Scalar;

/// Which family of generator circuits the optimizer searches over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// 4^N generators, each a one-layer brick wall of class-II blocks
    /// (for two qubits: one ZZ block per generator).
    FullClassTwo,
    /// Two-qubit gate-frugal split: 7 single-qubit-only generators plus 9
    /// with one class-II block.
    GateEfficient,
    /// Explicit layout per generator.
    Custom(Vec<CircuitLayout>),
}

impl Construction {
    /// Generator layouts for `n_qubits`.
    pub fn layouts(&self, n_qubits: usize) -> Result<Vec<CircuitLayout>> {
        match self {
            Construction::FullClassTwo => {
                let count = 4usize.pow(n_qubits as u32);
                let layout = CircuitLayout::brick_wall(n_qubits, 1)?;
                Ok(vec![layout; count])
            }
            Construction::GateEfficient => {
                if n_qubits != 2 {
                    return Err(Error::InvalidConfig(
                        "gate-efficient construction is defined for two qubits".into(),
                    ));
                }
                let local = CircuitLayout::local_layer(2);
                let coupled = CircuitLayout::single_class_two(2)?;
                let mut layouts = vec![local; 7];
                layouts.extend(vec![coupled; 9]);
                Ok(layouts)
            }
            Construction::Custom(layouts) => {
                if layouts.is_empty() {
                    return Err(Error::InvalidConfig("custom construction has no layouts".into()));
                }
                for l in layouts {
                    if l.n_qubits() != n_qubits {
                        return Err(Error::DimensionMismatch(format!(
                            "custom layout has {} qubits, expected {n_qubits}",
                            l.n_qubits()
                        )));
                    }
                }
                Ok(layouts.clone())
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Construction::FullClassTwo => "full-class2",
            Construction::GateEfficient => "gate-efficient",
            Construction::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct OptimizerConfig<T> {
    pub n_qubits: usize,
    pub construction: Construction,
    /// Nelder-Mead iteration budget per restart, spread over the
    /// shrinking-radius rounds.
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Penalty weight λ.
    pub rank_penalty_weight: T,
    /// Feasibility floor for σ_min(X), relative to σ_max(X).
    pub min_singular_floor: T,
    /// Relative objective improvement below which a round counts as
    /// converged.
    pub convergence_tol: T,
}

impl<T: Scalar> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            n_qubits: 2,
            construction: Construction::FullClassTwo,
            max_iters: 25_000,
            restarts: 32,
            seed: 0,
            rank_penalty_weight: T::lit(10.0),
            min_singular_floor: T::lit(1e-3),
            convergence_tol: T::lit(1e-9),
        }
    }
}

impl<T: Scalar> OptimizerConfig<T> {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.rank_penalty_weight < T::zero() {
            return Err(Error::InvalidConfig("penalty weight must be nonnegative".into()));
        }
        if self.min_singular_floor < T::zero() || self.min_singular_floor >= T::one() {
            return Err(Error::InvalidConfig(
                "relative singular floor must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Decomposed objective value at one parameter vector.
#[derive(Debug, Clone, Copy)]
pub struct ObjectiveParts<T> {
    pub entropy: T,
    pub penalty: T,
    pub sigma_min: T,
    pub sigma_max: T,
}

impl<T: Scalar> ObjectiveParts<T> {
    pub fn value(&self, lambda: T) -> T {
        self.entropy - lambda * self.penalty
    }
}

/// The entropy objective for a fixed construction; a pure function of the
/// concatenated parameter vector.
pub struct EntropyObjective<T> {
    layouts: Vec<CircuitLayout>,
    offsets: Vec<usize>,
    n_params: usize,
    basis: OperatorBasis<T>,
    mcg: crate::povm::CgMeasurement<T>,
    lambda: T,
    floor_rel: T,
}

impl<T: Scalar> EntropyObjective<T> {
    pub fn new(config: &OptimizerConfig<T>) -> Result<Self> {
        config.validate()?;
        let layouts = config.construction.layouts(config.n_qubits)?;
        let mut offsets = Vec::with_capacity(layouts.len());
        let mut total = 0usize;
        for l in &layouts {
            offsets.push(total);
            total += l.n_params();
        }
        Ok(Self {
            layouts,
            offsets,
            n_params: total,
            basis: OperatorBasis::build(config.n_qubits)?,
            mcg: m_cg(config.n_qubits)?,
            lambda: config.rank_penalty_weight,
            floor_rel: config.min_singular_floor,
        })
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_elements(&self) -> usize {
        self.layouts.len()
    }

    pub fn layouts(&self) -> &[CircuitLayout] {
        &self.layouts
    }

    pub fn basis(&self) -> &OperatorBasis<T> {
        &self.basis
    }

    /// Split a flat parameter vector into per-generator slices.
    pub fn split_params<'a>(&self, flat: &'a [T]) -> Vec<&'a [T]> {
        self.layouts
            .iter()
            .zip(&self.offsets)
            .map(|(l, &o)| &flat[o..o + l.n_params()])
            .collect()
    }

    /// Coefficient matrix at the given parameters.
    fn coefficient_matrix(&self, flat: &[T]) -> Result<CoefficientMatrix<T>> {
        let mut rows = Vec::with_capacity(self.layouts.len());
        for (layout, &offset) in self.layouts.iter().zip(&self.offsets) {
            let params = &flat[offset..offset + layout.n_params()];
            let g = circuit_unitary(layout, params)?;
            // Ω = G†·M·G; the circuit product is unitary by construction,
            // so the checked public route would only re-verify that
            let omega = g.adjoint().matmul(self.mcg.matrix()).matmul(&g).hermitized();
            rows.push(self.basis.decompose_unchecked(&omega));
        }
        CoefficientMatrix::from_rows(self.basis.len(), rows)
    }

    /// Entropy, penalty, and the singular extremes at `flat`.
    ///
    /// The Gram spectrum equals the spectrum of XᵀX up to zero padding, so
    /// one symmetric eigensolve yields both the entropy and σ_min/σ_max.
    pub fn parts(&self, flat: &[T]) -> Result<ObjectiveParts<T>> {
        if flat.len() != self.n_params {
            return Err(Error::DimensionMismatch(format!(
                "objective takes {} parameters, got {}",
                self.n_params,
                flat.len()
            )));
        }
        let x = self.coefficient_matrix(flat)?;
        let normal = x.normal_matrix();
        let eigs = sym_eigvals_real(self.basis.len(), &normal);
        let trace: T = eigs.iter().copied().sum();
        let spectrum: Vec<T> = eigs.iter().map(|&e| e / trace).collect();
        let entropy = entropy_of_spectrum(&spectrum);

        let lambda_max = *eigs.last().expect("nonempty spectrum");
        let sigma_max = lambda_max.max(T::zero()).sqrt();
        let sigma_min = if x.n_rows() < x.n_cols() {
            T::zero()
        } else {
            eigs.first().copied().unwrap_or(T::zero()).max(T::zero()).sqrt()
        };
        let floor = self.floor_rel * sigma_max;
        let gap = (floor - sigma_min).max(T::zero());
        Ok(ObjectiveParts {
            entropy,
            penalty: gap * gap,
            sigma_min,
            sigma_max,
        })
    }

    /// The scalar objective S − λ·penalty.
    pub fn value(&self, flat: &[T]) -> Result<T> {
        Ok(self.parts(flat)?.value(self.lambda))
    }

    /// Materialize the POVM set at `flat`.
    pub fn povm_set(&self, flat: &[T]) -> Result<PovmSet<T>> {
        let generators = self
            .layouts
            .iter()
            .zip(self.split_params(flat))
            .map(|(layout, p)| Generator {
                layout: layout.clone(),
                params: p.to_vec(),
            })
            .collect();
        PovmSet::from_generators(self.mcg.n_qubits(), generators)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct OptimizationReport<T> {
    pub construction: String,
    pub n_qubits: usize,
    /// Generator layouts, aligned with `best_params`.
    pub layouts: Vec<CircuitLayout>,
    /// Optimized angles, one vector per POVM element.
    pub best_params: Vec<Vec<T>>,
    pub best_entropy: T,
    pub best_objective: T,
    /// Entropy at each accepted improvement of the winning restart.
    pub entropy_history: Vec<T>,
    /// Best-so-far objective at the same steps; non-decreasing.
    pub objective_history: Vec<T>,
    /// Off-diagonal Gram variance at the same steps (symmetry diagnostic).
    pub offdiag_variance_history: Vec<T>,
    pub rank_at_best: usize,
    pub error_magnitude_at_best: T,
    pub sigma_min_at_best: T,
    pub winning_restart: usize,
    /// Objective evaluations summed over all restarts.
    pub evaluations: u64,
}

impl<T: Scalar> OptimizationReport<T> {
    /// Rebuild the optimized POVM set.
    pub fn povm_set(&self) -> Result<PovmSet<T>> {
        let generators = self
            .layouts
            .iter()
            .zip(&self.best_params)
            .map(|(layout, p)| Generator {
                layout: layout.clone(),
                params: p.clone(),
            })
            .collect();
        PovmSet::from_generators(self.n_qubits, generators)
    }
}

struct RestartOutcome<T> {
    index: usize,
    best_x: Vec<T>,
    best_f: T,
    entropy: T,
    rank: usize,
    sigma_min: T,
    sigma_max: T,
    error_magnitude: Option<T>,
    entropy_history: Vec<T>,
    objective_history: Vec<T>,
    offdiag_history: Vec<T>,
    evaluations: u64,
}

/// Simplex radii for the successive refinement rounds within one restart.
const ROUND_RADII: [f64; 6] = [1.0, 0.35, 0.12, 0.04, 0.014, 0.005];
const RESTART_TAG: u64 = 0x6f70_7431;

/// Maximize the objective. Deterministic in config and seed; the best
/// feasible restart wins, ties broken by lower error magnitude then lower
/// restart index.
pub fn optimize<T: Scalar>(config: &OptimizerConfig<T>) -> Result<OptimizationReport<T>> {
    let objective = EntropyObjective::new(config)?;
    let full_rank = objective.basis.len();

    let outcomes: Vec<Result<RestartOutcome<T>>> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| run_restart(&objective, config, restart))
        .collect();

    let mut best: Option<RestartOutcome<T>> = None;
    let mut evaluations = 0u64;
    for outcome in outcomes {
        let o = outcome?;
        evaluations += o.evaluations;
        let feasible = o.rank == full_rank && o.sigma_min > config.min_singular_floor * o.sigma_max;
        if !feasible {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                if o.entropy != b.entropy {
                    o.entropy > b.entropy
                } else {
                    match (o.error_magnitude, b.error_magnitude) {
                        (Some(oe), Some(be)) if oe != be => oe < be,
                        _ => o.index < b.index,
                    }
                }
            }
        };
        if better {
            best = Some(o);
        }
    }

    let best = best.ok_or(Error::NoFeasiblePoint {
        restarts: config.restarts,
    })?;
    let error_magnitude_at_best = best
        .error_magnitude
        .expect("feasible restart always has an error magnitude");
    Ok(OptimizationReport {
        construction: config.construction.label().to_string(),
        n_qubits: config.n_qubits,
        layouts: objective.layouts.clone(),
        best_params: objective
            .split_params(&best.best_x)
            .iter()
            .map(|s| s.to_vec())
            .collect(),
        best_entropy: best.entropy,
        best_objective: best.best_f,
        entropy_history: best.entropy_history,
        objective_history: best.objective_history,
        offdiag_variance_history: best.offdiag_history,
        rank_at_best: best.rank,
        error_magnitude_at_best,
        sigma_min_at_best: best.sigma_min,
        winning_restart: best.index,
        evaluations,
    })
}

fn run_restart<T: Scalar>(
    objective: &EntropyObjective<T>,
    config: &OptimizerConfig<T>,
    restart: usize,
) -> Result<RestartOutcome<T>> {
    let mut rng = stream(config.seed, &[RESTART_TAG, restart as u64]);
    let mut x: Vec<T> = Vec::with_capacity(objective.n_params());
    for layout in objective.layouts() {
        x.extend(random_params::<T, _>(layout, &mut rng));
    }

    let mut evaluations = 0u64;
    let mut entropy_history = Vec::new();
    let mut objective_history = Vec::new();
    let mut offdiag_history = Vec::new();

    let first_parts = objective.parts(&x)?;
    evaluations += 1;
    let mut best_f = first_parts.value(objective.lambda);
    let mut best_x = x;
    let mut best_parts = first_parts;
    record_accept(
        objective,
        &best_x,
        best_parts,
        best_f,
        &mut entropy_history,
        &mut objective_history,
        &mut offdiag_history,
    )?;

    if config.max_iters > 0 && objective.n_params() > 0 {
        let per_round = (config.max_iters / ROUND_RADII.len()).max(500);
        let mut used = 0usize;
        for &radius in ROUND_RADII.iter().cycle() {
            let budget = per_round.min(config.max_iters - used);
            if budget == 0 {
                break;
            }
            let round = nelder_mead_round(
                objective,
                &best_x,
                T::lit(radius),
                budget,
                config.convergence_tol,
                &mut evaluations,
            )?;
            used += round.iters;
            let improved = round.best_f > best_f + config.convergence_tol * (best_f.abs() + T::one());
            if round.best_f > best_f {
                best_f = round.best_f;
                best_x = round.best_x;
                best_parts = objective.parts(&best_x)?;
                record_accept(
                    objective,
                    &best_x,
                    best_parts,
                    best_f,
                    &mut entropy_history,
                    &mut objective_history,
                    &mut offdiag_history,
                )?;
            }
            if used >= config.max_iters {
                break;
            }
            // stop once even the finest simplex no longer moves the incumbent
            if !improved && radius == *ROUND_RADII.last().unwrap() {
                break;
            }
        }
    }

    let set = objective.povm_set(&best_x)?;
    let xmat = set.coefficient_matrix(&objective.basis)?;
    let rank = xmat.rank();
    let error_magnitude = xmat.error_magnitude().ok();
    Ok(RestartOutcome {
        index: restart,
        best_x,
        best_f,
        entropy: best_parts.entropy,
        rank,
        sigma_min: best_parts.sigma_min,
        sigma_max: best_parts.sigma_max,
        error_magnitude,
        entropy_history,
        objective_history,
        offdiag_history,
        evaluations,
    })
}

fn record_accept<T: Scalar>(
    objective: &EntropyObjective<T>,
    x: &[T],
    parts: ObjectiveParts<T>,
    f: T,
    entropy_history: &mut Vec<T>,
    objective_history: &mut Vec<T>,
    offdiag_history: &mut Vec<T>,
) -> Result<()> {
    let set = objective.povm_set(x)?;
    entropy_history.push(parts.entropy);
    objective_history.push(f);
    offdiag_history.push(set.gram().offdiag_variance());
    Ok(())
}

struct RoundResult<T> {
    best_x: Vec<T>,
    best_f: T,
    iters: usize,
}

/// One adaptive Nelder-Mead run (Gao-Han coefficients) maximizing the
/// objective from a simplex of the given radius around `start`.
fn nelder_mead_round<T: Scalar>(
    objective: &EntropyObjective<T>,
    start: &[T],
    radius: T,
    max_iters: usize,
    tol: T,
    evaluations: &mut u64,
) -> Result<RoundResult<T>> {
    let dim = start.len();
    let nf = T::from_usize(dim).unwrap();
    let alpha = T::one();
    let beta = T::one() + T::lit(2.0) / nf;
    let gamma = T::lit(0.75) - T::one() / (T::lit(2.0) * nf);
    let delta = T::one() - T::one() / nf;

    // minimize the negated objective
    let mut eval = |evaluations: &mut u64, x: &[T]| -> Result<T> {
        *evaluations += 1;
        Ok(-objective.value(x)?)
    };

    let mut points: Vec<Vec<T>> = Vec::with_capacity(dim + 1);
    let mut values: Vec<T> = Vec::with_capacity(dim + 1);
    points.push(start.to_vec());
    values.push(eval(evaluations, start)?);
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += radius;
        values.push(eval(evaluations, &p)?);
        points.push(p);
    }

    let mut order: Vec<usize> = (0..=dim).collect();
    let mut iters = 0usize;
    while iters < max_iters {
        iters += 1;
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let spread = values[worst] - values[best];
        if spread <= tol * (values[best].abs() + tol) {
            break;
        }

        // centroid of all but the worst point
        let mut centroid = vec![T::zero(); dim];
        for &idx in order.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(&points[idx]) {
                *c += *x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= nf;
        }

        let shifted = |scale: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&points[worst])
                .map(|(&c, &w)| c + scale * (c - w))
                .collect()
        };

        let reflected = shifted(alpha);
        let fr = eval(evaluations, &reflected)?;
        if fr < values[best] {
            let expanded = shifted(alpha * beta);
            let fe = eval(evaluations, &expanded)?;
            if fe < fr {
                points[worst] = expanded;
                values[worst] = fe;
            } else {
                points[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            points[worst] = reflected;
            values[worst] = fr;
        } else {
            let (contracted, fc) = if fr < values[worst] {
                let c = shifted(alpha * gamma);
                let f = eval(evaluations, &c)?;
                (c, f)
            } else {
                let c = shifted(-gamma);
                let f = eval(evaluations, &c)?;
                (c, f)
            };
            if fc < values[worst].min(fr) {
                points[worst] = contracted;
                values[worst] = fc;
            } else {
                // shrink toward the best point
                let anchor = points[best].clone();
                for &idx in order.iter().skip(1) {
                    let p: Vec<T> = anchor
                        .iter()
                        .zip(&points[idx])
                        .map(|(&b, &x)| b + delta * (x - b))
                        .collect();
                    values[idx] = eval(evaluations, &p)?;
                    points[idx] = p;
                }
            }
        }
    }

    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
    let best = order[0];
    Ok(RoundResult {
        best_x: points[best].clone(),
        best_f: -values[best],
        iters,
    })
}
