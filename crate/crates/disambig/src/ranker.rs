//! Interpretation ranking.
//!
//! The main strategy is a back-off cascade: interpretations are compared by
//! their three-word lexical likelihood first, then by the two-word fallback,
//! then by the syntactic likelihood, each stage with its own threshold
//! (`eta` for the lexical stages, `tau` for the syntactic one). Whatever is
//! still tied after the last stage is ordered at random from a seeded
//! generator. Two comparison strategies ship alongside it: the product of
//! lexical and syntactic likelihoods, and a deterministic baseline that
//! always picks the fully low-attached parse and shuffles the rest.
//!
//! Thresholded comparison is not transitive, so `rank` does not sort by the
//! pairwise comparator: it buckets scores per stage (scores within the
//! threshold of the bucket's best value share a bucket) and orders
//! lexicographically over bucket indices. With both thresholds at 0 this
//! coincides with the pairwise cascade, which the tests assert.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The three likelihood values of one interpretation. Which model fills
/// `syn` (length probabilities or the PCFG baseline) is the caller's choice
/// and part of the strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub lex3: f64,
    pub lex2: f64,
    pub syn: f64,
}

impl Scores {
    /// Combination score for the product strategy: the three-word lexical
    /// likelihood when it is nonzero, otherwise the two-word one, times the
    /// syntactic likelihood.
    pub fn product(&self) -> f64 {
        let lex = if self.lex3 > 0.0 { self.lex3 } else { self.lex2 };
        lex * self.syn
    }
}

/// Which comparison decided an adjacent pair in a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Lex3,
    Lex2,
    Syn,
    Product,
    Rap,
    Random,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Lex3 => "Lex3",
            Stage::Lex2 => "Lex2",
            Stage::Syn => "Syn",
            Stage::Product => "Product",
            Stage::Rap => "RAP",
            Stage::Random => "Random",
        };
        write!(f, "{name}")
    }
}

/// How the lexical side of the back-off cascade is staged: the full
/// three-word-then-two-word cascade, or a single three-word stage before
/// the syntactic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LexCascade {
    #[default]
    ThreeStage,
    TwoStage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankerConfig {
    /// Threshold on lexical-likelihood differences.
    pub eta: f64,
    /// Threshold on syntactic-likelihood differences.
    pub tau: f64,
    /// Seed for tie resolution.
    pub seed: u64,
    pub lex_cascade: LexCascade,
}

impl Default for RankerConfig {
    fn default() -> Self {
        RankerConfig { eta: 0.0, tau: 0.0, seed: 0, lex_cascade: LexCascade::ThreeStage }
    }
}

/// Ranking strategy names as used on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Back-off cascade with length-probability syntactic likelihood.
    BackoffSyn,
    /// Back-off cascade with the PCFG baseline as the syntactic stage.
    BackoffPcfg,
    /// Product of lexical and syntactic likelihood.
    Product,
    /// Syntactic likelihood alone.
    SynOnly,
    /// Deterministic low attachment; everything after rank 1 is random.
    DetRap,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::BackoffSyn,
        Strategy::BackoffPcfg,
        Strategy::Product,
        Strategy::SynOnly,
        Strategy::DetRap,
    ];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Strategy::BackoffSyn => "backoff-syn",
            Strategy::BackoffPcfg => "backoff-pcfg",
            Strategy::Product => "product",
            Strategy::SynOnly => "syn-only",
            Strategy::DetRap => "det-rap",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "backoff-syn" => Ok(Strategy::BackoffSyn),
            "backoff-pcfg" => Ok(Strategy::BackoffPcfg),
            "product" => Ok(Strategy::Product),
            "syn-only" => Ok(Strategy::SynOnly),
            "det-rap" => Ok(Strategy::DetRap),
            other => Err(format!(
                "unknown strategy {other}; expected one of backoff-syn, backoff-pcfg, product, syn-only, det-rap"
            )),
        }
    }
}

/// One interpretation as the ranker sees it. `key` is any canonical
/// identity (the bracketed tree, in the pipeline); it makes rankings
/// independent of input order. `rap_key` lists, right-to-left, the length
/// of the head sibling of every post-head modifier; the deterministic
/// baseline minimizes it lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub key: String,
    pub scores: Scores,
    pub rap_key: Vec<(usize, u32)>,
}

/// Result of a pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    First(Stage),
    Second(Stage),
    Tie,
}

/// The back-off cascade on one pair, with thresholds. A lexical difference
/// beyond `eta` decides; otherwise the two-word stage is consulted (in the
/// three-stage cascade); otherwise a syntactic difference beyond `tau`
/// decides; otherwise the pair is tied.
pub fn compare_backoff(a: &Scores, b: &Scores, cfg: &RankerConfig) -> Comparison {
    if a.lex3 - b.lex3 > cfg.eta {
        return Comparison::First(Stage::Lex3);
    }
    if b.lex3 - a.lex3 > cfg.eta {
        return Comparison::Second(Stage::Lex3);
    }
    if cfg.lex_cascade == LexCascade::ThreeStage {
        if a.lex2 - b.lex2 > cfg.eta {
            return Comparison::First(Stage::Lex2);
        }
        if b.lex2 - a.lex2 > cfg.eta {
            return Comparison::Second(Stage::Lex2);
        }
    }
    if a.syn - b.syn > cfg.tau {
        return Comparison::First(Stage::Syn);
    }
    if b.syn - a.syn > cfg.tau {
        return Comparison::Second(Stage::Syn);
    }
    Comparison::Tie
}

/// Product-combination comparison: higher product score wins; both-zero is
/// a tie like any other equality.
pub fn compare_product(a: &Scores, b: &Scores) -> Comparison {
    let (pa, pb) = (a.product(), b.product());
    if pa > pb {
        Comparison::First(Stage::Product)
    } else if pb > pa {
        Comparison::Second(Stage::Product)
    } else {
        Comparison::Tie
    }
}

/// A ranked list of interpretations with, per adjacent pair, the stage that
/// separated them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOutcome {
    /// Indices into the input candidate list, best first.
    pub order: Vec<usize>,
    /// `deciders[i]` separated `order[i]` from `order[i+1]`.
    pub deciders: Vec<Stage>,
    /// Scores parallel to `order`.
    pub scores: Vec<Scores>,
}

impl RankOutcome {
    /// The stage that put rank 1 ahead of rank 2; `None` for a single
    /// interpretation.
    pub fn top_decider(&self) -> Option<Stage> {
        self.deciders.first().copied()
    }
}

/// Ranks candidates under a strategy. Total order: score buckets per stage,
/// remaining ties in seeded-random order. Deterministic in (scores, keys,
/// strategy, seed); independent of input order.
pub fn rank(candidates: &[Candidate], strategy: Strategy, cfg: &RankerConfig) -> RankOutcome {
    assert!(!candidates.is_empty(), "rank requires at least one interpretation");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (order, deciders) = match strategy {
        Strategy::DetRap => rank_rap(candidates, &mut rng),
        Strategy::Product => {
            let stages: Vec<(fn(&Scores) -> f64, f64, Stage)> =
                vec![(|s: &Scores| s.product(), 0.0, Stage::Product)];
            rank_staged(candidates, &stages, &mut rng)
        }
        Strategy::SynOnly => {
            let stages: Vec<(fn(&Scores) -> f64, f64, Stage)> =
                vec![(|s: &Scores| s.syn, 0.0, Stage::Syn)];
            rank_staged(candidates, &stages, &mut rng)
        }
        Strategy::BackoffSyn | Strategy::BackoffPcfg => {
            let mut stages: Vec<(fn(&Scores) -> f64, f64, Stage)> =
                vec![(|s: &Scores| s.lex3, cfg.eta, Stage::Lex3)];
            if cfg.lex_cascade == LexCascade::ThreeStage {
                stages.push((|s: &Scores| s.lex2, cfg.eta, Stage::Lex2));
            }
            stages.push((|s: &Scores| s.syn, cfg.tau, Stage::Syn));
            rank_staged(candidates, &stages, &mut rng)
        }
    };
    RankOutcome {
        scores: order.iter().map(|&i| candidates[i].scores).collect(),
        order,
        deciders,
    }
}

type StageSpec = (fn(&Scores) -> f64, f64, Stage);

fn rank_staged(
    candidates: &[Candidate],
    stages: &[StageSpec],
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<Stage>) {
    let mut order = Vec::with_capacity(candidates.len());
    let mut deciders = Vec::new();
    let indices: Vec<usize> = (0..candidates.len()).collect();
    partition(candidates, &indices, stages, rng, &mut order, &mut deciders);
    (order, deciders)
}

/// Splits `group` into threshold-width buckets of the first stage's score,
/// recursing on the remaining stages inside each bucket. Exhausted stages
/// leave a tie group, ordered canonically by key and then shuffled.
fn partition(
    candidates: &[Candidate],
    group: &[usize],
    stages: &[StageSpec],
    rng: &mut ChaCha8Rng,
    order: &mut Vec<usize>,
    deciders: &mut Vec<Stage>,
) {
    let Some(((key_fn, width, stage), rest)) = stages.split_first() else {
        let mut tied: Vec<usize> = group.to_vec();
        tied.sort_by(|&a, &b| candidates[a].key.cmp(&candidates[b].key));
        tied.shuffle(rng);
        for (pos, idx) in tied.iter().enumerate() {
            if pos > 0 {
                deciders.push(Stage::Random);
            }
            order.push(*idx);
        }
        return;
    };
    // Sort by score descending, canonical key as a deterministic secondary.
    let mut sorted: Vec<usize> = group.to_vec();
    sorted.sort_by(|&a, &b| {
        key_fn(&candidates[b].scores)
            .total_cmp(&key_fn(&candidates[a].scores))
            .then_with(|| candidates[a].key.cmp(&candidates[b].key))
    });
    // Greedy buckets: a score joins the current bucket while it is within
    // `width` of the bucket's best score.
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    let mut leader = f64::INFINITY;
    for idx in sorted {
        let score = key_fn(&candidates[idx].scores);
        match buckets.last_mut() {
            Some(bucket) if leader - score <= *width => bucket.push(idx),
            _ => {
                leader = score;
                buckets.push(vec![idx]);
            }
        }
    }
    for (pos, bucket) in buckets.iter().enumerate() {
        if pos > 0 {
            deciders.push(*stage);
        }
        partition(candidates, bucket, rest, rng, order, deciders);
    }
}

/// Deterministic right-association baseline: rank 1 is the parse whose
/// right-to-left modifier heights are lexicographically minimal (the fully
/// low-attached parse); the rest are shuffled.
fn rank_rap(candidates: &[Candidate], rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<Stage>) {
    let mut indices: Vec<usize> = (0..candidates.len()).collect();
    indices.sort_by(|&a, &b| {
        rap_sort_key(&candidates[a])
            .cmp(&rap_sort_key(&candidates[b]))
            .then_with(|| candidates[a].key.cmp(&candidates[b].key))
    });
    let first = indices[0];
    let mut rest: Vec<usize> = indices[1..].to_vec();
    rest.sort_by(|&a, &b| candidates[a].key.cmp(&candidates[b].key));
    rest.shuffle(rng);
    let mut order = vec![first];
    order.extend(rest);
    let mut deciders = Vec::new();
    if order.len() > 1 {
        deciders.push(Stage::Rap);
        deciders.extend(std::iter::repeat(Stage::Random).take(order.len() - 2));
    }
    (order, deciders)
}

/// Right-to-left comparison key: modifiers sorted by start position
/// descending, each contributing its attachment height.
fn rap_sort_key(c: &Candidate) -> Vec<(std::cmp::Reverse<usize>, u32)> {
    let mut key: Vec<(std::cmp::Reverse<usize>, u32)> =
        c.rap_key.iter().map(|&(start, height)| (std::cmp::Reverse(start), height)).collect();
    key.sort();
    key
}
