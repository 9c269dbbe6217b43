//! Memetic islands running concurrently in one process.
//!
//! Every island evolves its own population against the shared graph. After
//! each round an island pushes a snapshot of its best clustering to one
//! random peer that has not yet received that clustering, then drains its
//! mailbox and passes each migrant through the usual replacement.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use crossbeam_channel::{unbounded, Receiver, Sender};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::memetic::{Engine, EvoConfig, ProgressFn};
use crate::seed::{derive_seed, rng_from_seed, Stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IslandConfig {
    pub islands: usize,
    pub evo: EvoConfig,
}

/// Assignment snapshot sent between islands.
#[derive(Clone, Debug)]
struct Migrant {
    assignment: Vec<usize>,
    fitness: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IslandReport {
    pub island: usize,
    pub seed: u64,
    pub alpha: usize,
    pub rounds: u64,
    pub best_cut: f64,
    pub offspring: u64,
    pub migrants_sent: u64,
    pub migrants_received: u64,
    /// Migrants whose claimed fitness disagreed with the recomputed cut.
    pub migrant_mismatches: u64,
    pub replace_calls: u64,
}

#[derive(Clone, Debug)]
pub struct IslandsOutcome {
    pub best: Clustering,
    pub best_island: usize,
    pub reports: Vec<IslandReport>,
    /// Islands that panicked, with the panic message.
    pub failures: Vec<(usize, String)>,
    pub elapsed: Duration,
}

/// Seed of island `i`. Island 0 uses the master seed, so a single island is
/// exactly [`crate::memetic::evolve`].
pub fn island_seed(master: u64, i: usize) -> u64 {
    if i == 0 {
        master
    } else {
        derive_seed(master, Stream::Island, i as u64)
    }
}

pub fn run_islands(g: &SignedGraph, cfg: &IslandConfig) -> Result<IslandsOutcome> {
    run_islands_with_progress(g, cfg, None)
}

pub fn run_islands_with_progress(
    g: &SignedGraph,
    cfg: &IslandConfig,
    progress: Option<ProgressFn<'_>>,
) -> Result<IslandsOutcome> {
    let p = cfg.islands;
    if p == 0 {
        return Err(Error::InvalidParameter("at least one island is required".into()));
    }
    let start = Instant::now();
    let stop = AtomicBool::new(false);
    let (senders, receivers): (Vec<Sender<Migrant>>, Vec<Receiver<Migrant>>) = (0..p).map(|_| unbounded()).unzip();

    let results: Vec<std::thread::Result<(Clustering, IslandReport)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = receivers
            .into_iter()
            .enumerate()
            .map(|(i, inbox)| {
                let peers: Vec<(usize, Sender<Migrant>)> = senders
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(j, s)| (j, s.clone()))
                    .collect();
                let stop = &stop;
                scope.spawn(move || island_main(g, cfg, i, start, peers, inbox, progress, stop))
            })
            .collect();
        drop(senders);
        handles.into_iter().map(|h| h.join()).collect()
    });

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut best: Option<(Clustering, usize)> = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((c, report)) => {
                if best.as_ref().is_none_or(|(b, _)| c.cut() < b.cut()) {
                    best = Some((c, i));
                }
                reports.push(report);
            }
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "unknown panic".into());
                log::error!("island {i} failed: {msg}");
                failures.push((i, msg));
            }
        }
    }
    let (best, best_island) =
        best.ok_or_else(|| Error::Inconsistent(format!("all {p} islands failed")))?;
    Ok(IslandsOutcome {
        best,
        best_island,
        reports,
        failures,
        elapsed: start.elapsed(),
    })
}

#[allow(clippy::too_many_arguments)]
fn island_main(
    g: &SignedGraph,
    cfg: &IslandConfig,
    island: usize,
    start: Instant,
    peers: Vec<(usize, Sender<Migrant>)>,
    inbox: Receiver<Migrant>,
    progress: Option<ProgressFn<'_>>,
    stop: &AtomicBool,
) -> (Clustering, IslandReport) {
    let seed = island_seed(cfg.evo.seed, island);
    let tag = (cfg.islands > 1).then_some(island);
    let mut engine = Engine::new(g, &cfg.evo, seed, tag, start, progress, Some(stop));
    let mut rng = rng_from_seed(derive_seed(seed, Stream::Migration, 0));
    let mut report = IslandReport {
        island,
        seed,
        ..IslandReport::default()
    };
    let mut sent_to = vec![false; peers.len()];
    let mut sent_best: Option<u64> = None;

    engine.initialize();
    while engine.should_continue() {
        engine.step();
        report.offspring += 1;
        if !peers.is_empty() {
            send_best(&engine, &peers, &mut sent_to, &mut sent_best, &mut rng, &mut report);
            // Only what is queued now; later arrivals wait for the next round.
            for _ in 0..inbox.len() {
                let Ok(m) = inbox.try_recv() else { break };
                receive(&mut engine, m, &mut report);
            }
        }
        if engine.solved() {
            stop.store(true, Ordering::Relaxed);
        }
    }
    if engine.solved() {
        stop.store(true, Ordering::Relaxed);
    }

    report.alpha = engine.alpha;
    report.rounds = engine.rounds;
    report.replace_calls = engine.replace_calls;
    debug_assert_eq!(report.replace_calls, report.offspring + report.migrants_received);
    let best = engine.outcome().best;
    report.best_cut = best.cut();
    (best, report)
}

fn send_best<R: Rng>(
    engine: &Engine<'_, '_>,
    peers: &[(usize, Sender<Migrant>)],
    sent_to: &mut [bool],
    sent_best: &mut Option<u64>,
    rng: &mut R,
    report: &mut IslandReport,
) {
    let Some(best) = engine.incumbent() else { return };
    if *sent_best != Some(best.id()) || sent_to.iter().all(|&s| s) {
        sent_to.iter_mut().for_each(|s| *s = false);
        *sent_best = Some(best.id());
    }
    let open: Vec<usize> = (0..peers.len()).filter(|&k| !sent_to[k]).collect();
    let k = open[rng.gen_range(0..open.len())];
    sent_to[k] = true;
    let migrant = Migrant {
        assignment: best.clustering().assignment().to_vec(),
        fitness: best.fitness(),
    };
    // A failed peer has dropped its mailbox; the send is simply lost.
    if peers[k].1.send(migrant).is_ok() {
        report.migrants_sent += 1;
    }
}

fn receive(engine: &mut Engine<'_, '_>, m: Migrant, report: &mut IslandReport) {
    let Ok(c) = Clustering::new(engine.graph(), m.assignment) else {
        report.migrant_mismatches += 1;
        return;
    };
    if c.cut() != m.fitness {
        report.migrant_mismatches += 1;
        log::warn!("migrant claimed cut {} but has cut {}", m.fitness, c.cut());
    }
    report.migrants_received += 1;
    let ind = engine.make_individual(c);
    engine.offer(ind);
}
