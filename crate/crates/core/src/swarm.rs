//! Hyperbolic particle swarm optimization over inverse poles, single- and
//! multi-dimensional.
//!
//! Positions and velocities are points of the unit disc and are combined with
//! the hyperbolic operators of [`crate::disc`], so no particle can leave the
//! disc. The multi-dimensional variant also moves each particle through a
//! range of virtual dimensions, keeping an independent position, velocity
//! and personal best in every dimension.
//!
//! Randomness comes from two counter-based streams per particle, one for
//! positional and one for dimensional draws, so results do not depend on
//! evaluation order and a single-dimension run consumes exactly the stream a
//! plain hyperbolic swarm would.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::architecture::ArchitectureSpace;
use crate::disc::{hyp_add, hyp_scale_origin, hyp_sub, DiscPoint};
use crate::error::{Error, Result};
use crate::quant::MAX_POLE_MODULUS;

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmParams {
    pub swarm_size: usize,
    pub iterations: usize,
    /// Cognitive learning factor.
    pub c1: f64,
    /// Social learning factor.
    pub c2: f64,
    /// Inertia weight at the start of the run.
    pub inertia_start: f64,
    /// Inertia weight reached at the last iteration.
    pub inertia_end: f64,
    /// Bound on the integer dimension velocity.
    pub vd_max: i64,
    /// Initial dimension velocities are drawn from `-initial_vd..=initial_vd`.
    pub initial_vd: i64,
    /// Initial positions are uniform on the disc of this radius.
    pub init_radius: f64,
    /// Initial velocities are uniform on the disc of this radius.
    pub init_velocity_radius: f64,
    /// Positions are radially clamped to this modulus after every move.
    pub max_modulus: f64,
    /// Evaluate the fitness of all particles concurrently.
    pub parallel: bool,
}

impl Default for SwarmParams {
    fn default() -> Self {
        Self {
            swarm_size: 30,
            iterations: 20,
            c1: 1.5,
            c2: 2.0,
            inertia_start: 0.8,
            inertia_end: 0.2,
            vd_max: 8,
            initial_vd: 2,
            init_radius: 0.9,
            init_velocity_radius: 0.1,
            max_modulus: MAX_POLE_MODULUS,
            parallel: false,
        }
    }
}

impl SwarmParams {
    pub fn with_size(mut self, swarm_size: usize, iterations: usize) -> Self {
        self.swarm_size = swarm_size;
        self.iterations = iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::InvalidParameter("swarm size must be at least 2".into()));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidParameter("at least one iteration is required".into()));
        }
        if !(self.max_modulus > 0.0 && self.max_modulus < 1.0)
            || !(self.init_radius > 0.0 && self.init_radius < 1.0)
            || !(self.init_velocity_radius >= 0.0 && self.init_velocity_radius < 1.0)
        {
            return Err(Error::InvalidParameter("radii must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Inertia weight at iteration `l` (1-based): linear from
    /// `inertia_start` towards `inertia_end`.
    pub fn inertia(&self, l: usize) -> f64 {
        self.inertia_start
            - l as f64 * (self.inertia_start - self.inertia_end) / self.iterations as f64
    }
}

/// Virtual dimensions `first_dim..first_dim + pole_counts.len()` with the
/// number of free poles in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    first_dim: usize,
    pole_counts: Vec<usize>,
}

impl SearchSpace {
    pub fn new(first_dim: usize, pole_counts: Vec<usize>) -> Result<Self> {
        if pole_counts.is_empty() || pole_counts.contains(&0) {
            return Err(Error::InvalidParameter(
                "every dimension needs at least one pole".into(),
            ));
        }
        Ok(Self {
            first_dim,
            pole_counts,
        })
    }

    /// One dimension `dim` with `poles` free poles.
    pub fn single(dim: usize, poles: usize) -> Result<Self> {
        Self::new(dim, vec![poles])
    }

    pub fn from_architecture(space: &ArchitectureSpace) -> Self {
        Self {
            first_dim: 1,
            pole_counts: space.rows().iter().map(|r| r.n()).collect(),
        }
    }

    pub fn min_dim(&self) -> usize {
        self.first_dim
    }

    pub fn max_dim(&self) -> usize {
        self.first_dim + self.pole_counts.len() - 1
    }

    pub fn contains(&self, dim: usize) -> bool {
        (self.min_dim()..=self.max_dim()).contains(&dim)
    }

    pub fn pole_count(&self, dim: usize) -> usize {
        self.pole_counts[dim - self.first_dim]
    }

    fn slots(&self) -> usize {
        self.pole_counts.len()
    }
}

/// A known solution injected into the initial swarm.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmSeed {
    pub dim: usize,
    pub poles: Vec<DiscPoint>,
}

#[derive(Debug, Clone)]
pub struct Particle {
    positions: Vec<Vec<DiscPoint>>,
    velocities: Vec<Vec<DiscPoint>>,
    /// Fitness of `positions[slot]` when it was last evaluated.
    costs: Vec<f64>,
    /// Whether `positions[slot]` moved since its last evaluation.
    stale: Vec<bool>,
    best_positions: Vec<Vec<DiscPoint>>,
    best_costs: Vec<f64>,
    dim: usize,
    dim_velocity: i64,
    best_dim: usize,
}

impl Particle {
    pub fn position(&self, space: &SearchSpace, dim: usize) -> &[DiscPoint] {
        &self.positions[dim - space.min_dim()]
    }

    pub fn velocity(&self, space: &SearchSpace, dim: usize) -> &[DiscPoint] {
        &self.velocities[dim - space.min_dim()]
    }

    pub fn cost(&self, space: &SearchSpace, dim: usize) -> f64 {
        self.costs[dim - space.min_dim()]
    }

    pub fn is_stale(&self, space: &SearchSpace, dim: usize) -> bool {
        self.stale[dim - space.min_dim()]
    }

    pub fn best_position(&self, space: &SearchSpace, dim: usize) -> &[DiscPoint] {
        &self.best_positions[dim - space.min_dim()]
    }

    pub fn best_cost(&self, space: &SearchSpace, dim: usize) -> f64 {
        self.best_costs[dim - space.min_dim()]
    }

    pub fn all_points(&self) -> impl Iterator<Item = DiscPoint> + '_ {
        self.positions
            .iter()
            .chain(&self.velocities)
            .chain(&self.best_positions)
            .flatten()
            .copied()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_velocity(&self) -> i64 {
        self.dim_velocity
    }

    pub fn best_dim(&self) -> usize {
        self.best_dim
    }
}

/// Everything the swarm knows between iterations.
#[derive(Debug, Clone)]
pub struct SwarmState {
    space: SearchSpace,
    particles: Vec<Particle>,
    global_best: Vec<Vec<DiscPoint>>,
    global_best_costs: Vec<f64>,
    global_best_index: Vec<usize>,
    best_dim: usize,
    iteration: usize,
    evaluations: usize,
}

impl SwarmState {
    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn global_best(&self, dim: usize) -> &[DiscPoint] {
        &self.global_best[dim - self.space.min_dim()]
    }

    pub fn global_best_cost(&self, dim: usize) -> f64 {
        self.global_best_costs[dim - self.space.min_dim()]
    }

    pub fn global_best_index(&self, dim: usize) -> usize {
        self.global_best_index[dim - self.space.min_dim()]
    }

    pub fn best_dim(&self) -> usize {
        self.best_dim
    }

    pub fn best_cost(&self) -> f64 {
        self.global_best_cost(self.best_dim)
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmOutcome {
    pub best_dim: usize,
    pub best_poles: Vec<DiscPoint>,
    pub best_cost: f64,
    pub evaluations: usize,
}

/// Uniform sample on the disc of radius `radius`.
fn random_in_disc<R: Rng>(rng: &mut R, radius: f64) -> DiscPoint {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    DiscPoint::settle(num_complex::Complex64::from_polar(r, theta))
}

/// `r ∈ (0, 1)`.
fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let r = rng.random::<f64>();
        if r > 0.0 {
            return r;
        }
    }
}

struct Streams {
    position: ChaCha8Rng,
    dimension: ChaCha8Rng,
}

impl Streams {
    fn new(seed: u64, particle: usize) -> Self {
        let mut position = ChaCha8Rng::seed_from_u64(seed);
        position.set_stream(2 * particle as u64);
        let mut dimension = ChaCha8Rng::seed_from_u64(seed);
        dimension.set_stream(2 * particle as u64 + 1);
        Self {
            position,
            dimension,
        }
    }
}

/// Random factors of one positional update, one pair per coordinate.
pub fn draw_position_factors<R: Rng>(rng: &mut R, coordinates: usize) -> Vec<(f64, f64)> {
    (0..coordinates)
        .map(|_| (open_unit(rng), open_unit(rng)))
        .collect()
}

/// Hyperbolic PSO update of one position/velocity pair, coordinate by
/// coordinate:
///
/// `v ← (c1 r1 ⊙ (ỹ ⊖ x)) ⊕ (c2 r2 ⊙ (ŷ ⊖ x)) ⊕ (w ⊙ v)`, then `x ← x ⊕ v`,
///
/// where `λ ⊙ u` scales the origin-anchored vector to `u`. `factors` holds
/// `(r1, r2)` per coordinate. Positions are clamped to `max_modulus`.
#[allow(clippy::too_many_arguments)]
pub fn hpso_position_update(
    position: &mut [DiscPoint],
    velocity: &mut [DiscPoint],
    local_best: &[DiscPoint],
    global_best: &[DiscPoint],
    inertia: f64,
    c1: f64,
    c2: f64,
    factors: &[(f64, f64)],
    max_modulus: f64,
) {
    for i in 0..position.len() {
        let (r1, r2) = factors[i];
        let x = position[i];
        let cognitive = hyp_scale_origin(c1 * r1, hyp_sub(local_best[i], x));
        let social = hyp_scale_origin(c2 * r2, hyp_sub(global_best[i], x));
        let momentum = hyp_scale_origin(inertia, velocity[i]);
        let v = hyp_add(hyp_add(cognitive, social), momentum);
        velocity[i] = v;
        position[i] = hyp_add(x, v).clamp_modulus(max_modulus);
    }
}

/// One dimensional step: `vd ← [c1 r1 (d̃ - d) + c2 r2 (d̂ - d) + vd]`
/// clamped to `±vd_max`, then `d ← d + vd` clamped to the space.
#[allow(clippy::too_many_arguments)]
pub fn dimension_update(
    dim: usize,
    dim_velocity: i64,
    best_dim: usize,
    global_best_dim: usize,
    r1: f64,
    r2: f64,
    c1: f64,
    c2: f64,
    vd_max: i64,
    min_dim: usize,
    max_dim: usize,
) -> (usize, i64) {
    let d = dim as f64;
    let raw = c1 * r1 * (best_dim as f64 - d) + c2 * r2 * (global_best_dim as f64 - d)
        + dim_velocity as f64;
    let vd = (raw.round() as i64).clamp(-vd_max, vd_max);
    let next = (dim as i64 + vd).clamp(min_dim as i64, max_dim as i64) as usize;
    (next, vd)
}

fn sanitize(cost: f64) -> f64 {
    if cost.is_nan() {
        f64::INFINITY
    } else {
        cost
    }
}

fn evaluate_batch<F>(jobs: Vec<(&[DiscPoint], usize)>, fitness: &F, parallel: bool) -> Vec<f64>
where
    F: Fn(&[DiscPoint], usize) -> f64 + Sync,
{
    if parallel {
        jobs.par_iter().map(|&(p, d)| sanitize(fitness(p, d))).collect()
    } else {
        jobs.iter().map(|&(p, d)| sanitize(fitness(p, d))).collect()
    }
}

/// Multi-dimensional hyperbolic particle swarm optimization.
///
/// `fitness(poles, dim)` returns the cost of `poles` (length
/// `space.pole_count(dim)`) in dimension `dim`; failures should return
/// `f64::INFINITY`. The first `seeds.len()` particles start from the seeded
/// positions at the seeded dimensions.
pub fn mdhpso_optimize<F>(
    fitness: F,
    space: &SearchSpace,
    seeds: &[SwarmSeed],
    params: &SwarmParams,
    rng_seed: u64,
) -> Result<SwarmOutcome>
where
    F: Fn(&[DiscPoint], usize) -> f64 + Sync,
{
    mdhpso_optimize_observed(fitness, space, seeds, params, rng_seed, |_| {})
}

/// [`mdhpso_optimize`] calling `observer` after initialization and after the
/// best-position bookkeeping of every iteration.
pub fn mdhpso_optimize_observed<F, O>(
    fitness: F,
    space: &SearchSpace,
    seeds: &[SwarmSeed],
    params: &SwarmParams,
    rng_seed: u64,
    mut observer: O,
) -> Result<SwarmOutcome>
where
    F: Fn(&[DiscPoint], usize) -> f64 + Sync,
    O: FnMut(&SwarmState),
{
    params.validate()?;
    for s in seeds {
        if !space.contains(s.dim) || s.poles.len() != space.pole_count(s.dim) {
            return Err(Error::InvalidParameter(format!(
                "seed at dimension {} does not fit the search space",
                s.dim
            )));
        }
    }

    let slots = space.slots();
    let s_count = params.swarm_size;
    let mut streams: Vec<Streams> = (0..s_count).map(|k| Streams::new(rng_seed, k)).collect();

    let mut particles = Vec::with_capacity(s_count);
    for (k, st) in streams.iter_mut().enumerate() {
        let mut positions = Vec::with_capacity(slots);
        let mut velocities = Vec::with_capacity(slots);
        for slot in 0..slots {
            let n = space.pole_counts[slot];
            positions.push(
                (0..n)
                    .map(|_| random_in_disc(&mut st.position, params.init_radius))
                    .collect::<Vec<_>>(),
            );
            velocities.push(
                (0..n)
                    .map(|_| random_in_disc(&mut st.position, params.init_velocity_radius))
                    .collect::<Vec<_>>(),
            );
        }
        let mut dim = st.dimension.random_range(space.min_dim()..=space.max_dim());
        let dim_velocity = st
            .dimension
            .random_range(-params.initial_vd..=params.initial_vd);
        if let Some(seed) = seeds.get(k) {
            positions[seed.dim - space.min_dim()] = seed
                .poles
                .iter()
                .map(|p| p.clamp_modulus(params.max_modulus))
                .collect();
            dim = seed.dim;
        }
        particles.push(Particle {
            best_positions: positions.clone(),
            positions,
            velocities,
            costs: vec![f64::INFINITY; slots],
            stale: vec![true; slots],
            best_costs: vec![f64::INFINITY; slots],
            dim,
            dim_velocity,
            best_dim: dim,
        });
    }

    let mut state = SwarmState {
        space: space.clone(),
        particles,
        global_best: Vec::with_capacity(slots),
        global_best_costs: Vec::with_capacity(slots),
        global_best_index: Vec::with_capacity(slots),
        best_dim: space.min_dim(),
        iteration: 0,
        evaluations: 0,
    };

    // every particle in every dimension
    let jobs: Vec<(&[DiscPoint], usize)> = state
        .particles
        .iter()
        .flat_map(|p| {
            p.positions
                .iter()
                .enumerate()
                .map(|(slot, x)| (x.as_slice(), slot + space.min_dim()))
        })
        .collect();
    let costs = evaluate_batch(jobs, &fitness, params.parallel);
    state.evaluations += costs.len();
    for (k, chunk) in costs.chunks(slots).enumerate() {
        let p = &mut state.particles[k];
        p.costs.copy_from_slice(chunk);
        p.best_costs.copy_from_slice(chunk);
        p.stale.iter_mut().for_each(|s| *s = false);
    }
    for slot in 0..slots {
        let mut best = 0;
        for k in 1..s_count {
            if state.particles[k].costs[slot] < state.particles[best].costs[slot] {
                best = k;
            }
        }
        state.global_best_index.push(best);
        state.global_best.push(state.particles[best].positions[slot].clone());
        state.global_best_costs.push(state.particles[best].costs[slot]);
    }
    let mut best_slot = 0;
    for slot in 1..slots {
        if state.global_best_costs[slot] < state.global_best_costs[best_slot] {
            best_slot = slot;
        }
    }
    state.best_dim = best_slot + space.min_dim();
    observer(&state);

    for l in 1..=params.iterations {
        state.iteration = l;
        let w = params.inertia(l);

        // fitness of positions that moved since they were last scored
        let pending: Vec<(usize, usize)> = state
            .particles
            .iter()
            .enumerate()
            .filter_map(|(k, p)| {
                let slot = p.dim - space.min_dim();
                p.stale[slot].then_some((k, slot))
            })
            .collect();
        let jobs: Vec<(&[DiscPoint], usize)> = pending
            .iter()
            .map(|&(k, slot)| {
                (
                    state.particles[k].positions[slot].as_slice(),
                    slot + space.min_dim(),
                )
            })
            .collect();
        let costs = evaluate_batch(jobs, &fitness, params.parallel);
        state.evaluations += costs.len();
        for (&(k, slot), c) in pending.iter().zip(costs) {
            state.particles[k].costs[slot] = c;
            state.particles[k].stale[slot] = false;
        }

        update_bests(&mut state);
        observer(&state);

        for (k, st) in streams.iter_mut().enumerate() {
            let gbest_dim = state.best_dim;
            let p = &mut state.particles[k];
            let slot = p.dim - space.min_dim();
            let factors = draw_position_factors(&mut st.position, p.positions[slot].len());
            hpso_position_update(
                &mut p.positions[slot],
                &mut p.velocities[slot],
                &p.best_positions[slot],
                &state.global_best[slot],
                w,
                params.c1,
                params.c2,
                &factors,
                params.max_modulus,
            );
            p.stale[slot] = true;

            let r1 = open_unit(&mut st.dimension);
            let r2 = open_unit(&mut st.dimension);
            let (dim, vd) = dimension_update(
                p.dim,
                p.dim_velocity,
                p.best_dim,
                gbest_dim,
                r1,
                r2,
                params.c1,
                params.c2,
                params.vd_max,
                space.min_dim(),
                space.max_dim(),
            );
            p.dim = dim;
            p.dim_velocity = vd;
        }
    }

    let best_cost = state.best_cost();
    if !best_cost.is_finite() {
        return Err(Error::AllEvaluationsFailed);
    }
    Ok(SwarmOutcome {
        best_dim: state.best_dim,
        best_poles: state.global_best(state.best_dim).to_vec(),
        best_cost,
        evaluations: state.evaluations,
    })
}

/// Personal, global and best-dimension bookkeeping for one pass over the
/// swarm, in particle order.
fn update_bests(state: &mut SwarmState) {
    let min_dim = state.space.min_dim();
    let count = state.particles.len();
    for k in 0..count {
        let slot = state.particles[k].dim - min_dim;
        let cost = state.particles[k].costs[slot];

        {
            let p = &mut state.particles[k];
            if cost < p.best_costs[slot] {
                p.best_positions[slot] = p.positions[slot].clone();
                p.best_costs[slot] = cost;
                if cost < p.best_costs[p.best_dim - min_dim] || p.best_dim - min_dim == slot {
                    p.best_dim = slot + min_dim;
                }
            }
        }

        // Strictly better than the stored global best and than every other
        // particle's last scored position in this dimension; ties between
        // particles go to the lower index.
        let beats_others = state.particles.iter().enumerate().all(|(i, q)| {
            i == k || cost < q.costs[slot] || (cost == q.costs[slot] && k < i)
        });
        if cost < state.global_best_costs[slot] && beats_others {
            let best_before = state.global_best_costs[state.best_dim - min_dim];
            state.global_best_index[slot] = k;
            state.global_best[slot] = state.particles[k].positions[slot].clone();
            state.global_best_costs[slot] = cost;
            if cost < best_before {
                state.best_dim = slot + min_dim;
            }
        }
    }
}

/// Single-dimension hyperbolic PSO with textbook best tracking: a particle
/// becomes the global best as soon as it beats the stored one.
pub fn hpso_optimize<F>(
    fitness: F,
    pole_count: usize,
    seeds: &[Vec<DiscPoint>],
    params: &SwarmParams,
    rng_seed: u64,
) -> Result<SwarmOutcome>
where
    F: Fn(&[DiscPoint]) -> f64 + Sync,
{
    params.validate()?;
    let s_count = params.swarm_size;
    let mut streams: Vec<Streams> = (0..s_count).map(|k| Streams::new(rng_seed, k)).collect();
    let mut xs = Vec::with_capacity(s_count);
    let mut vs = Vec::with_capacity(s_count);
    for (k, st) in streams.iter_mut().enumerate() {
        let mut x: Vec<DiscPoint> = (0..pole_count)
            .map(|_| random_in_disc(&mut st.position, params.init_radius))
            .collect();
        let v: Vec<DiscPoint> = (0..pole_count)
            .map(|_| random_in_disc(&mut st.position, params.init_velocity_radius))
            .collect();
        if let Some(seed) = seeds.get(k) {
            if seed.len() != pole_count {
                return Err(Error::DimensionMismatch {
                    expected: pole_count,
                    actual: seed.len(),
                });
            }
            x = seed.iter().map(|p| p.clamp_modulus(params.max_modulus)).collect();
        }
        xs.push(x);
        vs.push(v);
    }
    let score = |xs: &Vec<Vec<DiscPoint>>| -> Vec<f64> {
        if params.parallel {
            xs.par_iter().map(|x| sanitize(fitness(x))).collect()
        } else {
            xs.iter().map(|x| sanitize(fitness(x))).collect()
        }
    };
    let mut costs = score(&xs);
    let mut evaluations = costs.len();
    let mut pbest = xs.clone();
    let mut pbest_cost = costs.clone();
    let mut g = 0;
    for k in 1..s_count {
        if costs[k] < costs[g] {
            g = k;
        }
    }
    let mut gbest = xs[g].clone();
    let mut gbest_cost = costs[g];

    for l in 1..=params.iterations {
        let w = params.inertia(l);
        if l > 1 {
            costs = score(&xs);
            evaluations += costs.len();
        }
        for k in 0..s_count {
            if costs[k] < pbest_cost[k] {
                pbest[k] = xs[k].clone();
                pbest_cost[k] = costs[k];
            }
            if costs[k] < gbest_cost {
                gbest = xs[k].clone();
                gbest_cost = costs[k];
            }
        }
        for (k, st) in streams.iter_mut().enumerate() {
            let factors = draw_position_factors(&mut st.position, pole_count);
            hpso_position_update(
                &mut xs[k],
                &mut vs[k],
                &pbest[k],
                &gbest,
                w,
                params.c1,
                params.c2,
                &factors,
                params.max_modulus,
            );
        }
    }
    if !gbest_cost.is_finite() {
        return Err(Error::AllEvaluationsFailed);
    }
    Ok(SwarmOutcome {
        best_dim: 0,
        best_poles: gbest,
        best_cost: gbest_cost,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(re, im).unwrap()
    }

    #[test]
    fn update_fixed_point() {
        let x0 = vec![d(0.3, -0.2), d(-0.5, 0.1)];
        let mut x = x0.clone();
        let mut v = vec![DiscPoint::ORIGIN; 2];
        hpso_position_update(
            &mut x,
            &mut v,
            &x0,
            &x0,
            0.7,
            1.5,
            2.0,
            &[(0.4, 0.9), (0.1, 0.5)],
            0.99,
        );
        assert_eq!(x, x0);
        assert!(v.iter().all(|p| p.modulus() == 0.0));
    }

    #[test]
    fn update_with_all_terms_vanishing() {
        let x0 = vec![d(0.3, -0.2)];
        let mut x = x0.clone();
        let mut v = vec![d(0.05, 0.05)];
        hpso_position_update(
            &mut x,
            &mut v,
            &[d(0.8, 0.0)],
            &[d(-0.8, 0.0)],
            0.0,
            0.0,
            0.0,
            &[(0.5, 0.5)],
            0.99,
        );
        assert_eq!(x, x0);
        assert_eq!(v[0], DiscPoint::ORIGIN);
    }

    #[test]
    fn dimension_update_examples() {
        assert_eq!(dimension_update(7, 0, 7, 7, 0.3, 0.8, 1.5, 2.0, 8, 1, 30), (7, 0));
        let (d, _) = dimension_update(30, 5, 30, 30, 0.5, 0.5, 1.5, 2.0, 8, 1, 30);
        assert_eq!(d, 30);
        // round(1.5 * 5 + 2 * 5) = 18, clamped to 8
        assert_eq!(dimension_update(5, 0, 10, 10, 1.0, 1.0, 1.5, 2.0, 8, 1, 30), (13, 8));
        let (d, vd) = dimension_update(3, -8, 3, 3, 0.2, 0.2, 1.5, 2.0, 8, 1, 30);
        assert_eq!((d, vd), (1, -8));
    }

    #[test]
    fn inertia_schedule() {
        let p = SwarmParams::default();
        assert!((p.inertia(0) - 0.8).abs() < 1e-15);
        assert!((p.inertia(20) - 0.2).abs() < 1e-15);
        assert!((p.inertia(10) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_fitness_terminates() {
        let space = SearchSpace::new(1, vec![1, 2, 3]).unwrap();
        let params = SwarmParams::default().with_size(6, 5);
        let out = mdhpso_optimize(|_, _| 1.0, &space, &[], &params, 3).unwrap();
        assert_eq!(out.best_cost, 1.0);
        assert!(space.contains(out.best_dim));
        assert_eq!(out.best_poles.len(), space.pole_count(out.best_dim));
    }

    #[test]
    fn all_failures_reported() {
        let space = SearchSpace::single(1, 2).unwrap();
        let params = SwarmParams::default().with_size(4, 3);
        assert!(matches!(
            mdhpso_optimize(|_, _| f64::INFINITY, &space, &[], &params, 0),
            Err(Error::AllEvaluationsFailed)
        ));
        assert!(matches!(
            mdhpso_optimize(|_, _| f64::NAN, &space, &[], &params, 0),
            Err(Error::AllEvaluationsFailed)
        ));
    }

    #[test]
    fn finds_a_single_pole() {
        let target = d(0.4, -0.3);
        let space = SearchSpace::single(1, 1).unwrap();
        let params = SwarmParams::default();
        let f = |p: &[DiscPoint], _: usize| crate::disc::hyp_metric(p[0], target);
        let out = mdhpso_optimize(f, &space, &[], &params, 11).unwrap();
        assert!(out.best_cost < 0.1, "cost {}", out.best_cost);
    }

    #[test]
    fn evaluation_count() {
        let space = SearchSpace::new(1, vec![1, 1, 2]).unwrap();
        let params = SwarmParams::default().with_size(5, 4);
        let out = mdhpso_optimize(|p, _| p[0].modulus(), &space, &[], &params, 1).unwrap();
        // initialization scores every dimension; later iterations score at
        // most one moved position per particle
        assert!(out.evaluations >= 15);
        assert!(out.evaluations <= 15 + 5 * 3);
    }

    #[test]
    fn seeds_must_fit_space() {
        let space = SearchSpace::new(1, vec![1, 2]).unwrap();
        let params = SwarmParams::default().with_size(4, 2);
        let bad = SwarmSeed {
            dim: 2,
            poles: vec![DiscPoint::ORIGIN],
        };
        assert!(mdhpso_optimize(|_, _| 0.0, &space, &[bad], &params, 0).is_err());
    }

    #[test]
    fn seeded_optimum_is_kept() {
        let target = vec![d(0.5, 0.5), d(-0.25, 0.0)];
        let space = SearchSpace::new(1, vec![1, 2, 3]).unwrap();
        let params = SwarmParams::default().with_size(8, 3);
        let t = target.clone();
        let f = move |p: &[DiscPoint], dim: usize| {
            if dim != 2 {
                return 10.0;
            }
            p.iter().zip(&t).map(|(a, b)| crate::disc::hyp_metric(*a, *b)).sum()
        };
        let seed = SwarmSeed {
            dim: 2,
            poles: target.clone(),
        };
        let out = mdhpso_optimize(f, &space, &[seed], &params, 5).unwrap();
        assert_eq!(out.best_dim, 2);
        assert!(out.best_cost < 1e-12);
    }

    fn bowl(p: &[DiscPoint]) -> f64 {
        let t = [d(0.2, 0.6), d(-0.7, 0.1)];
        p.iter().zip(&t).map(|(a, b)| (a.value() - b.value()).norm_sqr()).sum()
    }

    #[test]
    fn single_dimension_matches_plain_hpso() {
        let params = SwarmParams::default().with_size(12, 15);
        let space = SearchSpace::single(4, 2).unwrap();
        let seeds = [vec![d(0.1, 0.1), d(0.0, -0.3)]];
        let md_seeds = [SwarmSeed {
            dim: 4,
            poles: seeds[0].clone(),
        }];
        for rng_seed in [0, 7, 99] {
            let a = hpso_optimize(bowl, 2, &seeds, &params, rng_seed).unwrap();
            let b = mdhpso_optimize(|p, _| bowl(p), &space, &md_seeds, &params, rng_seed).unwrap();
            assert_eq!(a.best_poles, b.best_poles);
            assert_eq!(a.best_cost, b.best_cost);
            assert_eq!(a.evaluations, b.evaluations);
            assert_eq!(b.best_dim, 4);
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let space = SearchSpace::new(1, vec![1, 2, 3, 2]).unwrap();
        let f = |p: &[DiscPoint], dim: usize| bowl(&p[..p.len().min(2)]) + 0.01 * dim as f64;
        for parallel in [false, true] {
            let params = SwarmParams {
                parallel,
                ..SwarmParams::default().with_size(10, 8)
            };
            let a = mdhpso_optimize(f, &space, &[], &params, 42).unwrap();
            let b = mdhpso_optimize(f, &space, &[], &params, 42).unwrap();
            assert_eq!(a, b);
        }
        let serial = mdhpso_optimize(f, &space, &[], &SwarmParams::default().with_size(10, 8), 42);
        let params = SwarmParams {
            parallel: true,
            ..SwarmParams::default().with_size(10, 8)
        };
        assert_eq!(serial.unwrap(), mdhpso_optimize(f, &space, &[], &params, 42).unwrap());
    }
}
