//! Genetic programming over decision trees.
//!
//! Fitness is the summed per-measurement expected value over a history:
//! every record contributes `ω_j · (p1·r_1j + p2·r_2j)` where `j` is the
//! realized cat state, `r` is `±v` and `(p1, p2)` the beliefs of the
//! strategy in play. Selection is a windowed roulette wheel, variation is
//! subtree crossover and subtree mutation, and the best `elitism`
//! individuals survive unchanged.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cat_environment::{reward, CatHistory, CatState};
use crate::decision_tree::{
    enumerate_strategies, random_tree, sample_strategy, value_operator_of, Policy, QdtExpr,
    DEFAULT_STRATEGY_CAP,
};

/// Added to every windowed roulette weight so the worst individual keeps a
/// nonzero share.
pub const ROULETTE_EPSILON: f64 = 1e-6;
/// Crossover attempts before falling back to a copy of the first parent.
pub const CROSSOVER_RETRIES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FitnessMode {
    /// Expectation over the strategy mixture and the action draw.
    #[default]
    Expected,
    /// One sampled decision per record.
    Sampled,
}

impl fmt::Display for FitnessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitnessMode::Expected => "expected",
            FitnessMode::Sampled => "sampled",
        })
    }
}

impl FromStr for FitnessMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "expected" => Ok(FitnessMode::Expected),
            "sampled" => Ok(FitnessMode::Sampled),
            other => Err(format!("unknown fitness mode {other:?} (expected|sampled)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GpConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub mutation_probability: f64,
    pub min_depth: usize,
    pub max_depth: usize,
    pub elitism: usize,
    pub strategy_cap: usize,
    pub fitness_mode: FitnessMode,
    /// Weight each record by the empirical frequency of its state.
    pub use_omega: bool,
    pub seed: u64,
}

impl Default for GpConfig {
    fn default() -> Self {
        GpConfig {
            population_size: 200,
            generations: 100,
            crossover_probability: 0.9,
            mutation_probability: 0.05,
            min_depth: 2,
            max_depth: 8,
            elitism: 1,
            strategy_cap: DEFAULT_STRATEGY_CAP,
            fitness_mode: FitnessMode::Expected,
            use_omega: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GpError {
    #[error("{name} = {value} is outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("population size must be at least 2, got {0}")]
    Population(usize),
    #[error("elitism {elitism} must be smaller than the population size {population}")]
    Elitism { elitism: usize, population: usize },
    #[error("depth bounds must satisfy 1 <= min_depth <= max_depth, got {min}..{max}")]
    Depth { min: usize, max: usize },
    #[error("strategy cap must be at least 1")]
    Cap,
    #[error("history is empty")]
    EmptyHistory,
}

impl GpConfig {
    pub fn validate(&self) -> Result<(), GpError> {
        for (name, value) in [
            ("crossover_probability", self.crossover_probability),
            ("mutation_probability", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GpError::Probability { name, value });
            }
        }
        if self.population_size < 2 {
            return Err(GpError::Population(self.population_size));
        }
        if self.elitism >= self.population_size {
            return Err(GpError::Elitism {
                elitism: self.elitism,
                population: self.population_size,
            });
        }
        if self.min_depth < 1 || self.min_depth > self.max_depth {
            return Err(GpError::Depth {
                min: self.min_depth,
                max: self.max_depth,
            });
        }
        if self.strategy_cap < 1 {
            return Err(GpError::Cap);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub expr: QdtExpr,
    pub fitness: f64,
    pub id: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_tree_text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evolution {
    pub best: Individual,
    pub stats: Vec<GenerationStats>,
}

/// A history reduced to what fitness needs.
#[derive(Clone, Debug)]
pub struct FitnessContext<'h> {
    history: &'h CatHistory,
    omega_alive: f64,
    omega_dead: f64,
    /// `ω1 · Σ_alive v_k`
    alive_stake: f64,
    /// `ω2 · Σ_dead v_k`
    dead_stake: f64,
}

impl<'h> FitnessContext<'h> {
    pub fn new(history: &'h CatHistory, use_omega: bool) -> Self {
        let (o1, o2) = if use_omega {
            history.frequencies()
        } else {
            (1.0, 1.0)
        };
        let (mut alive, mut dead) = (0u64, 0u64);
        for r in history.records() {
            match r.state {
                CatState::Phi1Alive => alive += r.v,
                CatState::Phi2Dead => dead += r.v,
            }
        }
        FitnessContext {
            history,
            omega_alive: o1,
            omega_dead: o2,
            alive_stake: o1 * alive as f64,
            dead_stake: o2 * dead as f64,
        }
    }

    pub fn history(&self) -> &CatHistory {
        self.history
    }

    fn omega(&self, state: CatState) -> f64 {
        match state {
            CatState::Phi1Alive => self.omega_alive,
            CatState::Phi2Dead => self.omega_dead,
        }
    }

    /// Fitness of a single belief pair: alive records pay `(p1 − p2)·v`,
    /// dead records `(p2 − p1)·v`.
    fn belief_fitness(&self, p1: f64, p2: f64) -> f64 {
        (p1 - p2) * (self.alive_stake - self.dead_stake)
    }

    pub fn fitness<R: Rng + ?Sized>(
        &self,
        e: &QdtExpr,
        mode: FitnessMode,
        cap: usize,
        rng: &mut R,
    ) -> f64 {
        match mode {
            FitnessMode::Expected => self.expected(e, cap, rng),
            FitnessMode::Sampled => self.sampled(e, rng),
        }
    }

    fn expected<R: Rng + ?Sized>(&self, e: &QdtExpr, cap: usize, rng: &mut R) -> f64 {
        match enumerate_strategies(e, cap) {
            Ok(strategies) => strategies
                .iter()
                .map(|s| {
                    let vo = value_operator_of(s);
                    s.weight * self.belief_fitness(vo.p1, vo.p2)
                })
                .sum(),
            Err(_) => {
                // too many strategies: average over sampled ones instead
                let draws = 4 * cap;
                let mut seen = HashMap::new();
                let mut total = 0.0;
                for _ in 0..draws {
                    let s = sample_strategy(e, rng);
                    let f = *seen.entry(s.id).or_insert_with(|| {
                        let vo = value_operator_of(&s);
                        self.belief_fitness(vo.p1, vo.p2)
                    });
                    total += f;
                }
                total / draws as f64
            }
        }
    }

    fn sampled<R: Rng + ?Sized>(&self, e: &QdtExpr, rng: &mut R) -> f64 {
        let mut policy = Policy::new(e);
        self.history
            .records()
            .iter()
            .map(|r| {
                let d = policy.decide(rng);
                self.omega(r.state) * d.belief * reward(d.action, r.state, r.v as f64)
            })
            .sum()
    }
}

/// Fitness of `e` on `h`, weighting records by empirical state frequency.
pub fn fitness<R: Rng + ?Sized>(
    e: &QdtExpr,
    h: &CatHistory,
    mode: FitnessMode,
    cap: usize,
    rng: &mut R,
) -> f64 {
    FitnessContext::new(h, true).fitness(e, mode, cap, rng)
}

/// Fitness-proportionate wheel over `f_i − min f + ε`.
pub struct Roulette {
    cumulative: Vec<f64>,
    uniform: bool,
}

impl Roulette {
    pub fn new(fitness: &[f64]) -> Self {
        assert!(!fitness.is_empty(), "roulette over an empty population");
        let min = fitness.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = fitness.iter().map(|f| f - min + ROULETTE_EPSILON).collect();
        let uniform =
            weights.iter().all(|&w| w == weights[0]) || !weights.iter().all(|w| w.is_finite());
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Roulette {
            cumulative,
            uniform,
        }
    }

    pub fn spin<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let n = self.cumulative.len();
        if self.uniform {
            return rng.gen_range(0..n);
        }
        let total = self.cumulative[n - 1];
        let r = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= r).min(n - 1)
    }
}

pub fn select_parent<'p, R: Rng + ?Sized>(pop: &'p [Individual], rng: &mut R) -> &'p Individual {
    let f: Vec<f64> = pop.iter().map(|i| i.fitness).collect();
    &pop[Roulette::new(&f).spin(rng)]
}

/// Replaces a uniformly chosen node of `a` with a uniformly chosen subtree
/// of `b`, retrying while the result is deeper than `max_depth`.
pub fn crossover<R: Rng + ?Sized>(
    a: &QdtExpr,
    b: &QdtExpr,
    max_depth: usize,
    rng: &mut R,
) -> QdtExpr {
    let (na, nb) = (a.node_count(), b.node_count());
    for _ in 0..CROSSOVER_RETRIES {
        let at = rng.gen_range(0..na);
        let from = rng.gen_range(0..nb);
        let (donor, _) = b.subtree(from).expect("index below node count");
        let child = a
            .replace_subtree(at, donor)
            .expect("index below node count");
        if child.depth() <= max_depth {
            return child;
        }
    }
    a.clone()
}

/// Replaces the subtree at a uniformly chosen node with a fresh random tree
/// sized to keep the result within `max_depth`.
pub fn mutate<R: Rng + ?Sized>(
    e: &QdtExpr,
    min_depth: usize,
    max_depth: usize,
    rng: &mut R,
) -> QdtExpr {
    let point = rng.gen_range(0..e.node_count());
    mutate_at(e, point, min_depth, max_depth, rng)
}

/// [`mutate`] at a fixed pre-order position.
pub fn mutate_at<R: Rng + ?Sized>(
    e: &QdtExpr,
    point: usize,
    min_depth: usize,
    max_depth: usize,
    rng: &mut R,
) -> QdtExpr {
    let (_, level) = e.subtree(point).expect("mutation point out of range");
    let room = (max_depth + 1).saturating_sub(level).max(1);
    let floor = (min_depth + 1).saturating_sub(level).clamp(1, room);
    let fresh = random_tree(rng, floor, room);
    e.replace_subtree(point, &fresh)
        .expect("mutation point out of range")
}

const PURPOSE_INIT: u64 = 1;
const PURPOSE_FITNESS: u64 = 2;
const PURPOSE_BREED: u64 = 3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for one (generation, slot, purpose) triple.
fn stream(seed: u64, generation: usize, slot: usize, purpose: u64) -> ChaCha8Rng {
    let mut h = splitmix64(seed);
    for word in [generation as u64, slot as u64, purpose] {
        h = splitmix64(h ^ word);
    }
    ChaCha8Rng::seed_from_u64(h)
}

struct Slot {
    expr: QdtExpr,
    fitness: Option<f64>,
    id: u64,
}

fn evaluate(slots: &mut [Slot], ctx: &FitnessContext<'_>, cfg: &GpConfig, generation: usize) {
    slots.par_iter_mut().enumerate().for_each(|(i, slot)| {
        if slot.fitness.is_none() {
            let mut rng = stream(cfg.seed, generation, i, PURPOSE_FITNESS);
            slot.fitness =
                Some(ctx.fitness(&slot.expr, cfg.fitness_mode, cfg.strategy_cap, &mut rng));
        }
    });
}

fn to_individual(s: &Slot) -> Individual {
    Individual {
        expr: s.expr.clone(),
        fitness: s.fitness.expect("evaluated"),
        id: s.id,
    }
}

/// Highest fitness first; earlier slot wins ties. NaN sorts last.
fn ranking(slots: &[Slot]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..slots.len()).collect();
    let key = |i: usize| {
        slots[i]
            .fitness
            .filter(|f| !f.is_nan())
            .unwrap_or(f64::NEG_INFINITY)
    };
    idx.sort_by(|&a, &b| key(b).partial_cmp(&key(a)).unwrap_or(Ordering::Equal));
    idx
}

/// Runs the generational loop and returns the best individual ever seen with
/// one stats row per generation.
///
/// Every random draw comes from a stream derived from
/// `(seed, generation, slot)`, so results do not depend on how fitness
/// evaluation is scheduled across threads.
pub fn evolve(cfg: &GpConfig, h: &CatHistory) -> Result<Evolution, GpError> {
    cfg.validate()?;
    if h.is_empty() {
        return Err(GpError::EmptyHistory);
    }
    let ctx = FitnessContext::new(h, cfg.use_omega);
    let mut next_id = 0u64;
    let top = cfg.min_depth.max(cfg.max_depth.saturating_sub(2));

    let mut population: Vec<Slot> = (0..cfg.population_size)
        .map(|slot| {
            let mut rng = stream(cfg.seed, 0, slot, PURPOSE_INIT);
            let depth = rng.gen_range(cfg.min_depth..=top);
            let expr = random_tree(&mut rng, cfg.min_depth, depth);
            next_id += 1;
            Slot {
                expr,
                fitness: None,
                id: next_id - 1,
            }
        })
        .collect();

    evaluate(&mut population, &ctx, cfg, 0);
    let mut best = to_individual(&population[ranking(&population)[0]]);
    let mut stats = Vec::with_capacity(cfg.generations);

    for generation in 0..cfg.generations {
        if generation > 0 {
            evaluate(&mut population, &ctx, cfg, generation);
        }
        let order = ranking(&population);
        let leader = to_individual(&population[order[0]]);
        let mean =
            population.iter().map(|s| s.fitness.unwrap()).sum::<f64>() / population.len() as f64;
        stats.push(GenerationStats {
            generation,
            best_fitness: leader.fitness,
            mean_fitness: mean,
            best_tree_text: leader.expr.to_text(),
        });
        if leader.fitness > best.fitness {
            best = leader;
        }
        if generation + 1 == cfg.generations {
            break;
        }

        let fitness: Vec<f64> = population.iter().map(|s| s.fitness.unwrap()).collect();
        let wheel = Roulette::new(&fitness);
        let mut rng = stream(cfg.seed, generation, 0, PURPOSE_BREED);
        let mut next: Vec<Slot> = order[..cfg.elitism]
            .iter()
            .map(|&i| Slot {
                expr: population[i].expr.clone(),
                fitness: population[i].fitness,
                id: population[i].id,
            })
            .collect();
        while next.len() < cfg.population_size {
            let mut child = if rng.gen_bool(cfg.crossover_probability) {
                let a = &population[wheel.spin(&mut rng)].expr;
                let b = &population[wheel.spin(&mut rng)].expr;
                crossover(a, b, cfg.max_depth, &mut rng)
            } else {
                population[wheel.spin(&mut rng)].expr.clone()
            };
            if rng.gen_bool(cfg.mutation_probability) {
                child = mutate(&child, cfg.min_depth, cfg.max_depth, &mut rng);
            }
            next.push(Slot {
                expr: child,
                fitness: None,
                id: next_id,
            });
            next_id += 1;
        }
        population = next;
    }

    Ok(Evolution { best, stats })
}
