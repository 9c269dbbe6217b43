//! Steady-state memetic algorithm over multilevel clusterings.
//!
//! Individuals are clusterings scored by edge-cut. Offspring come from
//! recombination (both parents' cut edges blocked from contraction during
//! the first cycle) or mutation (one individual's cut edges blocked on the
//! first level only). Replacement evicts the member whose cut-edge set is
//! closest to the offspring's.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::{cut_edges, symmetric_difference, Clustering, CutEdgeSet};
use crate::coarsening::Constraint;
use crate::graph::SignedGraph;
use crate::multilevel::{global_search, scml, v_cycle, CoarsestStart, MultilevelConfig};
use crate::seed::{derive_seed, rng_from_seed, Stream};

pub const MIN_POPULATION: usize = 3;
pub const MAX_POPULATION: usize = 100;
/// Default mutation probability.
pub const DEFAULT_BETA: f64 = 0.10;

/// A clustering with its cut-edge set and fitness (its edge-cut).
#[derive(Clone, Debug)]
pub struct Individual {
    clustering: Clustering,
    cut_edges: CutEdgeSet,
    id: u64,
}

impl Individual {
    pub fn new(g: &SignedGraph, clustering: Clustering, id: u64) -> Self {
        let cut_edges = cut_edges(g, &clustering);
        Self {
            clustering,
            cut_edges,
            id,
        }
    }

    pub fn fitness(&self) -> f64 {
        self.clustering.cut()
    }

    pub fn clustering(&self) -> &Clustering {
        &self.clustering
    }

    pub fn cut_edges(&self) -> &CutEdgeSet {
        &self.cut_edges
    }

    /// Creation order within one engine; smaller is older.
    pub fn id(&self) -> u64 {
        self.id
    }
}

/// Bounded multiset of individuals.
#[derive(Clone, Debug)]
pub struct Population {
    members: Vec<Individual>,
    capacity: usize,
}

impl Population {
    pub fn new(capacity: usize) -> Self {
        Self {
            members: Vec::with_capacity(capacity),
            capacity: capacity.max(1),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub fn best(&self) -> Option<&Individual> {
        self.members
            .iter()
            .min_by(|a, b| a.fitness().total_cmp(&b.fitness()).then(a.id.cmp(&b.id)))
    }

    /// Adds without replacement logic; used while filling the population.
    pub fn push(&mut self, ind: Individual) {
        assert!(self.members.len() < self.capacity, "population is full");
        self.members.push(ind);
    }
}

/// Population size such that building it takes about a tenth of the budget.
pub fn choose_alpha(t_single: f64, t_total: f64) -> usize {
    if t_single <= 0.0 {
        return MAX_POPULATION;
    }
    let alpha = (0.10 * t_total / t_single).round();
    alpha.clamp(MIN_POPULATION as f64, MAX_POPULATION as f64) as usize
}

fn tournament<R: Rng>(p: &Population, rng: &mut R) -> (usize, usize) {
    let i = rng.gen_range(0..p.len());
    let mut j = rng.gen_range(0..p.len() - 1);
    if j >= i {
        j += 1;
    }
    if p.get(j).fitness() < p.get(i).fitness() {
        (j, i)
    } else {
        (i, j)
    }
}

/// Two size-2 tournaments. If both are won by the same individual, the loser
/// of the second becomes the second parent. Returns distinct indices.
///
/// Panics if the population has fewer than two members.
pub fn tournament_select<R: Rng>(p: &Population, rng: &mut R) -> (usize, usize) {
    assert!(p.len() >= 2, "selection needs at least two individuals");
    let (first, _) = tournament(p, rng);
    let (winner, loser) = tournament(p, rng);
    if winner == first {
        (first, loser)
    } else {
        (first, winner)
    }
}

/// Offspring of `a` and `b`: a multilevel run whose first cycle never
/// contracts a cut edge of either parent and starts uncoarsening from the
/// best of both parents and the coarsest singletons, then global search.
/// The offspring's cut is never above either parent's.
pub fn recombine<R: Rng>(g: &SignedGraph, a: &Clustering, b: &Clustering, cfg: &MultilevelConfig, rng: &mut R) -> Clustering {
    let constraint = Constraint::subset_of_two(g, a, b);
    let first = v_cycle(g, cfg, &constraint, false, CoarsestStart::BestOf(a, b), rng);
    let child = global_search(g, &first, cfg, rng);
    debug_assert!(child.cut() <= a.cut().min(b.cut()));
    child
}

/// A fresh multilevel run that blocks `a`'s cut edges on the first level
/// only, then global search. May be worse than `a`.
pub fn mutate<R: Rng>(g: &SignedGraph, a: &Clustering, cfg: &MultilevelConfig, rng: &mut R) -> Clustering {
    let constraint = Constraint::subset_of_one(a);
    let first = v_cycle(g, cfg, &constraint, true, CoarsestStart::Singletons, rng);
    global_search(g, &first, cfg, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Replacement {
    /// The offspring was worse than every member and was dropped.
    Rejected,
    /// Inserted; `evicted` is the id of the removed member, if any.
    Inserted { evicted: Option<u64> },
}

/// Inserts `c` unless it is strictly worse than every member. At capacity,
/// the member with the smallest cut-edge symmetric difference to `c` is
/// evicted; ties evict the worse member, then the older one.
pub fn replace(p: &mut Population, c: Individual) -> Replacement {
    if p.members.len() < p.capacity {
        p.members.push(c);
        return Replacement::Inserted { evicted: None };
    }
    if p.members.iter().all(|m| c.fitness() > m.fitness()) {
        return Replacement::Rejected;
    }
    let victim = p
        .members
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| {
            let dx = symmetric_difference(&x.cut_edges, &c.cut_edges);
            let dy = symmetric_difference(&y.cut_edges, &c.cut_edges);
            dx.cmp(&dy)
                .then_with(|| y.fitness().total_cmp(&x.fitness()))
                .then_with(|| x.id.cmp(&y.id))
        })
        .map(|(i, _)| i)
        .expect("population at capacity is non-empty");
    let evicted = std::mem::replace(&mut p.members[victim], c);
    Replacement::Inserted {
        evicted: Some(evicted.id),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvoConfig {
    /// Wall-clock budget.
    pub time_limit: Duration,
    /// Mutation probability per round.
    pub beta: f64,
    /// Fixed population size; chosen from the budget when `None`.
    pub population: Option<usize>,
    /// Optional cap on steady-state rounds.
    pub max_rounds: Option<u64>,
    /// Stop as soon as a clustering with at most this cut is found.
    pub target_cut: Option<f64>,
    pub seed: u64,
    pub multilevel: MultilevelConfig,
}

impl Default for EvoConfig {
    fn default() -> Self {
        Self {
            time_limit: Duration::from_secs(10),
            beta: DEFAULT_BETA,
            population: None,
            max_rounds: None,
            target_cut: None,
            seed: 0,
            multilevel: MultilevelConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub seconds: f64,
    pub best_cut: f64,
}

/// Improvement notification: `island` is `None` for a plain evolve run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProgressEvent {
    pub island: Option<usize>,
    pub seconds: f64,
    pub best_cut: f64,
}

pub type ProgressFn<'a> = &'a (dyn Fn(ProgressEvent) + Sync);

#[derive(Clone, Debug)]
pub struct EvoOutcome {
    pub best: Clustering,
    pub alpha: usize,
    pub initial_population: usize,
    pub rounds: u64,
    pub recombinations: u64,
    pub mutations: u64,
    /// Incumbent cut after every improvement.
    pub trace: Vec<TracePoint>,
    pub elapsed: Duration,
}

/// One evolving population plus an incumbent kept outside of it.
pub(crate) struct Engine<'g, 'p> {
    g: &'g SignedGraph,
    cfg: EvoConfig,
    seed: u64,
    island: Option<usize>,
    start: Instant,
    progress: Option<ProgressFn<'p>>,
    stop: Option<&'p AtomicBool>,
    pub(crate) population: Population,
    incumbent: Option<Individual>,
    round_rng: ChaCha8Rng,
    next_id: u64,
    pub(crate) alpha: usize,
    pub(crate) initial_population: usize,
    pub(crate) rounds: u64,
    pub(crate) recombinations: u64,
    pub(crate) mutations: u64,
    pub(crate) replace_calls: u64,
    pub(crate) trace: Vec<TracePoint>,
}

impl<'g, 'p> Engine<'g, 'p> {
    pub(crate) fn new(
        g: &'g SignedGraph,
        cfg: &EvoConfig,
        seed: u64,
        island: Option<usize>,
        start: Instant,
        progress: Option<ProgressFn<'p>>,
        stop: Option<&'p AtomicBool>,
    ) -> Self {
        Self {
            g,
            cfg: cfg.clone(),
            seed,
            island,
            start,
            progress,
            stop,
            population: Population::new(1),
            incumbent: None,
            round_rng: rng_from_seed(derive_seed(seed, Stream::Rounds, 0)),
            next_id: 0,
            alpha: 0,
            initial_population: 0,
            rounds: 0,
            recombinations: 0,
            mutations: 0,
            replace_calls: 0,
            trace: Vec::new(),
        }
    }

    pub(crate) fn graph(&self) -> &'g SignedGraph {
        self.g
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    pub(crate) fn incumbent(&self) -> Option<&Individual> {
        self.incumbent.as_ref()
    }

    pub(crate) fn make_individual(&mut self, c: Clustering) -> Individual {
        let id = self.next_id;
        self.next_id += 1;
        Individual::new(self.g, c, id)
    }

    fn consider_incumbent(&mut self, ind: &Individual) {
        if self.incumbent.as_ref().is_none_or(|b| ind.fitness() < b.fitness()) {
            self.incumbent = Some(ind.clone());
            let point = TracePoint {
                seconds: self.seconds(),
                best_cut: ind.fitness(),
            };
            self.trace.push(point);
            if let Some(report) = self.progress {
                report(ProgressEvent {
                    island: self.island,
                    seconds: point.seconds,
                    best_cut: point.best_cut,
                });
            }
        }
    }

    /// Incumbent reached the negative-mass bound or the configured target.
    pub(crate) fn solved(&self) -> bool {
        self.incumbent.as_ref().is_some_and(|b| {
            b.fitness() <= self.g.sum_neg() || self.cfg.target_cut.is_some_and(|t| b.fitness() <= t)
        })
    }

    fn stopped_externally(&self) -> bool {
        self.stop.is_some_and(|s| s.load(Ordering::Relaxed))
    }

    pub(crate) fn should_continue(&self) -> bool {
        !self.solved()
            && !self.stopped_externally()
            && self.start.elapsed() < self.cfg.time_limit
            && self.cfg.max_rounds.is_none_or(|m| self.rounds < m)
    }

    /// Builds the initial population from independent multilevel runs. The
    /// first run is timed to size the population; construction stops early
    /// once half of the budget is spent.
    pub(crate) fn initialize(&mut self) {
        let ml = self.cfg.multilevel;
        let t0 = Instant::now();
        let first = scml(self.g, &ml, derive_seed(self.seed, Stream::Population, 0));
        let t_single = t0.elapsed().as_secs_f64();
        self.alpha = self
            .cfg
            .population
            .unwrap_or_else(|| choose_alpha(t_single, self.cfg.time_limit.as_secs_f64()))
            .max(1);
        self.population = Population::new(self.alpha);
        let ind = self.make_individual(first);
        self.consider_incumbent(&ind);
        self.population.push(ind);

        let cap = self.cfg.time_limit.mul_f64(0.5);
        for i in 1..self.alpha {
            if self.solved() || self.stopped_externally() {
                break;
            }
            if self.start.elapsed() >= cap {
                if self.population.len() < MIN_POPULATION {
                    log::warn!(
                        "initial population truncated to {} of {} individuals by the time budget",
                        self.population.len(),
                        self.alpha
                    );
                }
                break;
            }
            let c = scml(self.g, &ml, derive_seed(self.seed, Stream::Population, i as u64));
            let ind = self.make_individual(c);
            self.consider_incumbent(&ind);
            self.population.push(ind);
        }
        self.initial_population = self.population.len();
    }

    /// Passes `ind` through replacement and the incumbent check. Local
    /// offspring and migrants both enter the population here.
    pub(crate) fn offer(&mut self, ind: Individual) -> Replacement {
        self.replace_calls += 1;
        self.consider_incumbent(&ind);
        replace(&mut self.population, ind)
    }

    /// One steady-state round: create one offspring and offer it.
    pub(crate) fn step(&mut self) {
        self.rounds += 1;
        let ml = self.cfg.multilevel;
        let mut rng = rng_from_seed(derive_seed(self.seed, Stream::Offspring, self.rounds));
        let u: f64 = self.round_rng.gen();
        let child = if u > self.cfg.beta && self.population.len() >= 2 {
            let (a, b) = tournament_select(&self.population, &mut self.round_rng);
            self.recombinations += 1;
            recombine(
                self.g,
                self.population.get(a).clustering(),
                self.population.get(b).clustering(),
                &ml,
                &mut rng,
            )
        } else {
            let a = self.round_rng.gen_range(0..self.population.len());
            self.mutations += 1;
            mutate(self.g, self.population.get(a).clustering(), &ml, &mut rng)
        };
        let ind = self.make_individual(child);
        self.offer(ind);
    }

    pub(crate) fn outcome(&self) -> EvoOutcome {
        EvoOutcome {
            best: self.incumbent.as_ref().expect("initialized").clustering().clone(),
            alpha: self.alpha,
            initial_population: self.initial_population,
            rounds: self.rounds,
            recombinations: self.recombinations,
            mutations: self.mutations,
            trace: self.trace.clone(),
            elapsed: self.start.elapsed(),
        }
    }
}

/// Runs the memetic algorithm until the time limit (or round cap) and
/// returns the best clustering ever seen.
pub fn evolve(g: &SignedGraph, cfg: &EvoConfig) -> EvoOutcome {
    evolve_with_progress(g, cfg, None)
}

pub fn evolve_with_progress(g: &SignedGraph, cfg: &EvoConfig, progress: Option<ProgressFn<'_>>) -> EvoOutcome {
    let mut engine = Engine::new(g, cfg, cfg.seed, None, Instant::now(), progress, None);
    engine.initialize();
    while engine.should_continue() {
        engine.step();
    }
    engine.outcome()
}
