//! Synthetic datasets with known Three-Cs ground truth, random contact graphs for oracle
//! testing, and the hand-authored demo dataset.
//!
//! Generation uses ChaCha8 seeded from [`DatasetSpec::seed`], so a spec always yields the same
//! graph.

mod demo;
mod emit;
mod random;
mod suite;

use std::collections::BTreeMap;

use chrono::{Duration, NaiveDate, NaiveDateTime};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::{ns, Graph, Iri, Literal};
use crate::risk::{Dimension, Level, Levels};
use crate::vocab::{ClosePrecedence, ContextKind, RiskAxiomConfig, Vocabulary};

pub use demo::{build_demo_dataset, DEMO_TURTLE};
pub use random::{random_graph, RandomGraphSpec};
pub use suite::{dataset_dir, read_dataset, read_suite, write_dataset, Manifest};

pub const CANONICAL_SIZES: [usize; 3] = [100, 500, 1000];
pub const HIGH_PERCENTAGES: [u32; 3] = [10, 20, 30];
pub const MEDIUM_PERCENTAGES: [u32; 3] = [20, 40, 60];

#[derive(Debug, Error)]
pub enum DatagenError {
    #[error("p-high {p_high}% + p-medium {p_medium}% exceeds 100%")]
    Proportions { p_high: u32, p_medium: u32 },
    #[error("levels {levels} cannot be realized: {}", constraints.join("; "))]
    Infeasible { levels: Levels, constraints: Vec<String> },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// One parameterized dataset of the evaluation suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DatasetSpec {
    pub varied: Dimension,
    /// Levels of the two other dimensions, in dimension order.
    pub fixed: [Level; 2],
    pub p_high: u32,
    pub p_medium: u32,
    pub size: usize,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn others(&self) -> [Dimension; 2] {
        let mut it = Dimension::ALL.into_iter().filter(|d| *d != self.varied);
        [it.next().unwrap(), it.next().unwrap()]
    }

    /// Levels of an event whose varied dimension is at `level`.
    pub fn levels_for(&self, level: Level) -> Levels {
        let mut out = Levels { closeness: level, crowdedness: level, enclosedness: level };
        for (dim, fixed) in self.others().into_iter().zip(self.fixed) {
            out.set(dim, fixed);
        }
        out
    }

    /// e.g. `closeness_hh`.
    pub fn case_name(&self) -> String {
        format!("{}_{}{}", self.varied, self.fixed[0].initial(), self.fixed[1].initial())
    }

    /// e.g. `closeness_hh_h10m20`.
    pub fn name(&self) -> String {
        format!("{}_h{}m{}", self.case_name(), self.p_high, self.p_medium)
    }

    /// `(high, medium, low)` event counts of the varied dimension.
    pub fn stratum_sizes(&self) -> Result<(usize, usize, usize), DatagenError> {
        if self.p_high + self.p_medium > 100 {
            return Err(DatagenError::Proportions { p_high: self.p_high, p_medium: self.p_medium });
        }
        let round = |p: u32| (p as usize * self.size + 50) / 100;
        let high = round(self.p_high).min(self.size);
        let medium = round(self.p_medium).min(self.size - high);
        Ok((high, medium, self.size - high - medium))
    }
}

/// Event counts per dimension and most-specific level.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCounts(pub BTreeMap<Dimension, BTreeMap<Level, usize>>);

impl ExpectedCounts {
    pub fn from_labels<'a>(labels: impl IntoIterator<Item = &'a Levels>) -> Self {
        let mut out = ExpectedCounts::zero();
        for l in labels {
            for dim in Dimension::ALL {
                *out.0.get_mut(&dim).unwrap().get_mut(&l.get(dim)).unwrap() += 1;
            }
        }
        out
    }

    fn zero() -> Self {
        ExpectedCounts(
            Dimension::ALL
                .into_iter()
                .map(|d| (d, Level::ALL.into_iter().map(|l| (l, 0)).collect()))
                .collect(),
        )
    }

    pub fn get(&self, dim: Dimension, level: Level) -> usize {
        self.0.get(&dim).and_then(|m| m.get(&level)).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedDataset {
    pub graph: Graph,
    pub spec: DatasetSpec,
    /// Thresholds the labels hold under.
    pub thresholds: RiskAxiomConfig,
    pub expected: ExpectedCounts,
    pub labels: BTreeMap<Iri, Levels>,
}

/// Thresholds the canonical suite is generated and verified under: defaults without context
/// pooling. With pooling, an enclosed situation's spatial context also counts toward the
/// event's crowding, so closeness of medium or above together with low crowding and high
/// enclosedness has no realization.
pub fn suite_thresholds() -> RiskAxiomConfig {
    RiskAxiomConfig::default().with_context_pooling(false)
}

pub fn suite_vocabulary() -> Vocabulary {
    Vocabulary::standard().with_thresholds(suite_thresholds()).expect("defaults are ordered")
}

/// The 243 specs for one size, in enumeration order: varied dimension, fixed pair, p-high,
/// p-medium. The first is closeness varied with the others high at 10%/20%.
pub fn canonical_specs(size: usize, base_seed: u64) -> Vec<DatasetSpec> {
    let mut out = Vec::with_capacity(243);
    for varied in Dimension::ALL {
        for a in Level::ALL {
            for b in Level::ALL {
                for p_high in HIGH_PERCENTAGES {
                    for p_medium in MEDIUM_PERCENTAGES {
                        let index = out.len() as u64;
                        out.push(DatasetSpec {
                            varied,
                            fixed: [a, b],
                            p_high,
                            p_medium,
                            size,
                            seed: base_seed.wrapping_mul(1_000_003).wrapping_add(size as u64 * 1000 + index),
                        });
                    }
                }
            }
        }
    }
    out
}

pub fn generate_suite(sizes: &[usize], base_seed: u64, vocab: &Vocabulary) -> Result<Vec<GeneratedDataset>, DatagenError> {
    let specs: Vec<DatasetSpec> = sizes.iter().flat_map(|s| canonical_specs(*s, base_seed)).collect();
    specs.par_iter().map(|s| generate_dataset(s, vocab)).collect()
}

pub fn generate_dataset(spec: &DatasetSpec, vocab: &Vocabulary) -> Result<GeneratedDataset, DatagenError> {
    let (high, medium, low) = spec.stratum_sizes()?;
    let mut r = Realizer::new(vocab, spec.seed, spec.size);
    let mut strata: Vec<Level> = std::iter::repeat_n(Level::High, high)
        .chain(std::iter::repeat_n(Level::Medium, medium))
        .chain(std::iter::repeat_n(Level::Low, low))
        .collect();
    strata.shuffle(&mut r.rng);
    let mut labels = BTreeMap::new();
    for (i, level) in strata.into_iter().enumerate() {
        let levels = spec.levels_for(level);
        let id = r.realize(levels, i)?;
        labels.insert(id, levels);
    }
    Ok(GeneratedDataset {
        expected: ExpectedCounts::from_labels(labels.values()),
        graph: r.graph,
        spec: spec.clone(),
        thresholds: *vocab.thresholds(),
        labels,
    })
}

/// `size` events, each at one of the 27 level triples drawn uniformly, for scaling runs.
pub fn generate_mixed(size: usize, seed: u64, vocab: &Vocabulary) -> Result<GeneratedDataset, DatagenError> {
    let mut r = Realizer::new(vocab, seed, size);
    let all: Vec<Levels> = Levels::all().collect();
    let mut labels = BTreeMap::new();
    for i in 0..size {
        let levels = *all.choose(&mut r.rng).unwrap();
        labels.insert(r.realize(levels, i)?, levels);
    }
    let spec = DatasetSpec {
        varied: Dimension::Closeness,
        fixed: [Level::Low, Level::Low],
        p_high: 0,
        p_medium: 0,
        size,
        seed,
    };
    Ok(GeneratedDataset {
        expected: ExpectedCounts::from_labels(labels.values()),
        graph: r.graph,
        spec,
        thresholds: *vocab.thresholds(),
        labels,
    })
}

/// One event (with its place, situation and persons) classified exactly as `levels` under
/// `vocab`'s thresholds.
pub fn realize_event(levels: Levels, id_seed: u64, vocab: &Vocabulary) -> Result<(Iri, Graph), DatagenError> {
    let mut r = Realizer::new(vocab, id_seed, 1);
    let id = r.realize(levels, 0)?;
    Ok((id, r.graph))
}

/// Counts chosen for one event before any triples are written.
#[derive(Debug, Clone, PartialEq)]
pub struct EventPlan {
    pub place_class: Iri,
    pub behavioral: usize,
    pub event_spatial: usize,
    pub situation_spatial: usize,
    pub droplet_actions: usize,
    pub minutes: i64,
}

fn infeasible(levels: Levels, constraints: &[&str]) -> DatagenError {
    DatagenError::Infeasible { levels, constraints: constraints.iter().map(|s| s.to_string()).collect() }
}

/// Chooses context, action, place and duration counts realizing `levels`.
pub fn plan_event(levels: Levels, vocab: &Vocabulary, rng: &mut impl Rng) -> Result<EventPlan, DatagenError> {
    let cfg = vocab.thresholds();
    let n_beh = vocab.contexts_of(ContextKind::Behavioral).count();
    let n_sp = vocab.contexts_of(ContextKind::Spatial).count();
    let n_drop = vocab.droplet_actions().len();
    let (bc, hd, md) = (cfg.behavioral_count as usize, cfg.high_droplet_count as usize, cfg.medium_droplet_count as usize);
    let (hs, ms) = (cfg.high_crowding_spatial_count as usize, cfg.medium_crowding_spatial_count as usize);
    let (cl, cr, en) = (levels.closeness, levels.crowdedness, levels.enclosedness);
    let dl = cfg.close_contact_precedence == ClosePrecedence::DlStandard;

    let need_social = cl >= Level::Medium || cr >= Level::Medium;
    let behavioral = if need_social {
        if n_beh < bc {
            return Err(infeasible(levels, &["fewer behavioral contexts registered than the behavioral count"]));
        }
        rng.gen_range(bc..=n_beh.min(bc + 1))
    } else {
        0
    };
    let social = behavioral >= bc;

    let (lo, hi) = match cr {
        Level::High => (hs, n_sp),
        Level::Medium => (ms, hs.saturating_sub(1)),
        Level::Low if !social => (0, n_sp),
        Level::Low if ms > 0 => (0, ms - 1),
        Level::Low => return Err(infeasible(levels, &["crowding low needs a non-zero medium spatial count"])),
    };
    let (lo, hi) = (lo, hi.min(n_sp));
    let (s_lo, s_hi) = match en {
        Level::High => (1, n_sp),
        Level::Medium => (0, 0),
        Level::Low => (0, n_sp),
    };
    let (total, situation_spatial) = if cfg.context_pooling {
        let lo = lo.max(s_lo);
        if lo > hi {
            let mut why = vec!["context pooling counts situation spatial contexts toward crowding"];
            if en == Level::High {
                why.push("enclosedness high needs at least one spatial context on the situation");
            }
            if need_social {
                why.push("closeness or crowding at medium or above needs a behavioral context");
            }
            why.push("crowding target caps the pooled spatial count below that");
            return Err(infeasible(levels, &why));
        }
        let total = rng.gen_range(lo..=hi);
        (total, rng.gen_range(s_lo..=s_hi.min(total)))
    } else {
        if lo > hi {
            return Err(infeasible(levels, &["not enough spatial contexts registered for the crowding target"]));
        }
        (rng.gen_range(lo..=hi), rng.gen_range(s_lo..=s_hi))
    };
    let event_spatial = if cfg.context_pooling { total - situation_spatial } else { total };

    let (droplet_actions, long, max_afforded) = match cl {
        Level::High => {
            if n_drop < hd {
                return Err(infeasible(levels, &["fewer droplet-reachable actions registered than the high count"]));
            }
            (rng.gen_range(hd..=n_drop.min(hd + 1)), true, usize::MAX)
        }
        Level::Medium => {
            if md >= hd || n_drop < md {
                return Err(infeasible(levels, &["medium closeness needs a medium droplet count below the high count"]));
            }
            (md, true, if dl { md } else { hd })
        }
        Level::Low => {
            let b = rng.gen_range(0..=n_drop.min(2));
            let long = !social && rng.gen_bool(0.5);
            (b, long, if dl { md } else { usize::MAX })
        }
    };
    let minutes = if long {
        cfg.duration_threshold.floor() as i64 + rng.gen_range(1..=120)
    } else {
        let cap = (cfg.duration_threshold.floor() as i64).min(10);
        if cap < 1 {
            return Err(infeasible(levels, &["duration threshold below one minute leaves no short duration"]));
        }
        rng.gen_range(1..=cap)
    };

    let candidates: Vec<&Iri> = vocab
        .place_classes()
        .filter(|c| **c != ns::schema("Place"))
        .filter(|c| vocab.is_enclosing_place(c) == (en >= Level::Medium))
        .filter(|c| {
            let afforded = vocab.class_affordances(c).map_or(0, |a| a.iter().filter(|x| vocab.is_droplet_action(x)).count());
            afforded < max_afforded
        })
        .collect();
    let Some(place_class) = candidates.choose(rng) else {
        return Err(infeasible(levels, &["no registered place class fits the enclosure and affordance constraints"]));
    };
    Ok(EventPlan {
        place_class: (*place_class).clone(),
        behavioral,
        event_spatial,
        situation_spatial,
        droplet_actions,
        minutes,
    })
}

pub(crate) fn base_time() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2020, 4, 1).unwrap().and_hms_opt(0, 0, 0).unwrap()
}

struct Realizer<'v> {
    vocab: &'v Vocabulary,
    rng: ChaCha8Rng,
    seed: u64,
    graph: Graph,
    persons: Vec<Iri>,
    venues: Vec<Iri>,
    droplet: Vec<Iri>,
    indirect: Vec<Iri>,
    behavioral: Vec<Iri>,
    spatial: Vec<Iri>,
}

impl<'v> Realizer<'v> {
    fn new(vocab: &'v Vocabulary, seed: u64, size: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut graph = Graph::new();
        let persons: Vec<Iri> = (0..(size / 25).max(10)).map(|k| ns::id(&format!("person_{seed}_{k}"))).collect();
        for p in &persons {
            emit::person(&mut graph, p, rng.gen_range(5..90));
        }
        let venues: Vec<Iri> = (0..(size / 10).max(3)).map(|k| ns::id(&format!("venue_{seed}_{k}"))).collect();
        for (k, v) in venues.iter().enumerate() {
            graph.add(v, &ns::rdf_type(), ns::schema("Place"));
            graph.add(v, &ns::pred::city(), Literal::plain(format!("city-{}", k % 7)));
        }
        Realizer {
            vocab,
            rng,
            seed,
            graph,
            persons,
            venues,
            droplet: vocab.droplet_actions().iter().cloned().collect(),
            indirect: vocab.indirect_actions().iter().cloned().collect(),
            behavioral: vocab.contexts_of(ContextKind::Behavioral).cloned().collect(),
            spatial: vocab.contexts_of(ContextKind::Spatial).cloned().collect(),
        }
    }

    fn pick(&mut self, from: &[Iri], n: usize) -> Vec<Iri> {
        from.choose_multiple(&mut self.rng, n).cloned().collect()
    }

    fn realize(&mut self, levels: Levels, i: usize) -> Result<Iri, DatagenError> {
        let plan = plan_event(levels, self.vocab, &mut self.rng)?;
        let seed = self.seed;
        let event = ns::id(&format!("event_{seed}_{i}"));
        let place = ns::id(&format!("place_{seed}_{i}"));
        let situation = ns::id(&format!("situation_{seed}_{i}"));
        let time = ns::id(&format!("time_{seed}_{i}"));

        let mut actions = self.pick(&self.droplet.clone(), plan.droplet_actions);
        let n_indirect = self.rng.gen_range(0..=self.indirect.len().min(1));
        actions.extend(self.pick(&self.indirect.clone(), n_indirect));

        let mut spatial = self.spatial.clone();
        spatial.shuffle(&mut self.rng);
        let situation_ctx: Vec<Iri> = spatial[..plan.situation_spatial].to_vec();
        let event_spatial: Vec<Iri> = if self.vocab.thresholds().context_pooling {
            spatial[plan.situation_spatial..plan.situation_spatial + plan.event_spatial].to_vec()
        } else {
            self.pick(&self.spatial.clone(), plan.event_spatial)
        };
        let mut contexts = self.pick(&self.behavioral.clone(), plan.behavioral);
        contexts.extend(event_spatial);

        let n_agents = self.rng.gen_range(1..=3);
        let agents = self.pick(&self.persons.clone(), n_agents);
        let venue = self.venues.choose(&mut self.rng).unwrap().clone();

        let g = &mut self.graph;
        emit::event(g, &event, &place, &agents, &actions, &contexts);
        g.add(&place, &ns::rdf_type(), plan.place_class.clone());
        g.add(&place, &ns::pred::location(), venue);
        emit::situation(g, &situation, &place, &situation_ctx);

        let begin = base_time() + Duration::minutes(self.rng.gen_range(0..60 * 24 * 30));
        let end = begin + Duration::minutes(plan.minutes);
        emit::time_node(&mut self.graph, &event, &time, begin, end, Some(plan.minutes));
        self.graph.add(&situation, &ns::pred::time(), time);
        Ok(event)
    }
}
