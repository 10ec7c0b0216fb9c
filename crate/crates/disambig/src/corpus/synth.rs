//! Synthetic treebank generator with controllable attachment preferences.
//!
//! Sentences are sampled top-down from three template families over the
//! grammar's rules: plain subject-verb-object sentences, sentences with one
//! or more prepositional phrases whose gold attachment is drawn low (to the
//! nearest noun) or high (to the verb phrase) with probability
//! `low_attach_bias`, and verb-phrase coordinations whose conjuncts are
//! forced to equal length with probability `parallel_bias`, optionally
//! followed by a PP attached to the whole coordination. A sparse lexical
//! preference table steers which preposition and dependent accompany a
//! given head, so lexical choice correlates with the gold attachment site.
//!
//! Generation is a pure function of the config (seed included); gold trees
//! always pass the treebank derivability check.

use std::collections::BTreeMap;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{Grammar, RuleId};
use crate::parser::{Span, Token, Tree, TreeKind};

use super::treebank::{Treebank, TreebankEntry};

/// One weighted entry of the lexical preference table: when `head` governs
/// slot `slot`, `dependent` is drawn with this weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexPref {
    pub head: String,
    pub slot: String,
    pub dependent: String,
    pub weight: f64,
}

/// Relative frequencies of the three sentence families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyWeights {
    pub simple: f64,
    pub pp: f64,
    pub coord: f64,
}

impl Default for FamilyWeights {
    fn default() -> Self {
        FamilyWeights { simple: 0.2, pp: 0.5, coord: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub sentences: usize,
    /// Vocabulary size per POS tag; missing tags get defaults.
    pub vocab: BTreeMap<String, usize>,
    /// Probability that a PP with an attachment choice attaches low.
    pub low_attach_bias: f64,
    /// Probability that the two conjuncts of a coordination have equal
    /// length.
    pub parallel_bias: f64,
    pub lexical_prefs: Vec<LexPref>,
    /// Probability that a PP consults the preference table when its head
    /// has entries there.
    pub pref_strength: f64,
    /// Probability that a sampled noun phrase takes a determiner (length 2
    /// instead of 1). 0 keeps every sampled NP a bare noun, which
    /// concentrates the length distributions.
    pub det_prob: f64,
    pub max_len: usize,
    pub family_weights: FamilyWeights,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            sentences: 1000,
            vocab: BTreeMap::new(),
            low_attach_bias: 0.8,
            parallel_bias: 0.8,
            lexical_prefs: Vec::new(),
            pref_strength: 0.9,
            det_prob: 0.4,
            max_len: 12,
            family_weights: FamilyWeights::default(),
        }
    }
}

/// What the generator actually did, for checking its advertised biases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthStats {
    pub sentences: usize,
    pub tokens: u64,
    /// PPs that had an attachment choice, and how many chose low.
    pub pp_choices: u64,
    pub pp_low: u64,
    pub coordinations: u64,
    pub parallel_coordinations: u64,
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("{field} must lie in [0,1], got {value}")]
    BadProbability { field: &'static str, value: f64 },
    #[error("max_len must be at least 3, got {0}")]
    MaxLenTooSmall(usize),
    #[error("family weights must be non-negative and not all zero")]
    BadFamilyWeights,
    #[error("grammar cannot produce the requested structures: missing rule {0}")]
    MissingRule(String),
    #[error("grammar has no %lex tag for category {0}")]
    MissingTag(String),
}

/// The grammar rules the templates need, resolved once.
struct Templates {
    s_np_vp: RuleId,
    s_vp: RuleId,
    np_n: RuleId,
    np_det_n: RuleId,
    np_np_pp: RuleId,
    vp_v: RuleId,
    vp_v_np: RuleId,
    vp_vp_pp: RuleId,
    vp_coord: RuleId,
    pp_p_np: RuleId,
    /// POS tag per category used by the templates.
    tags: BTreeMap<&'static str, String>,
}

impl Templates {
    fn resolve(g: &Grammar) -> Result<Self, SynthError> {
        let rule = |key: &str| {
            g.parse_rule_key(key).ok_or_else(|| SynthError::MissingRule(key.to_string()))
        };
        let mut tags = BTreeMap::new();
        for cat_name in ["N", "V", "P", "C", "DET"] {
            let cat = g
                .find_category(cat_name)
                .ok_or_else(|| SynthError::MissingTag(cat_name.to_string()))?;
            let tag = g
                .lexicon
                .iter()
                .find(|(_, &c)| c == cat)
                .map(|(tag, _)| tag.clone())
                .ok_or_else(|| SynthError::MissingTag(cat_name.to_string()))?;
            tags.insert(cat_name, tag);
        }
        Ok(Templates {
            s_np_vp: rule("S -> NP VP")?,
            s_vp: rule("S -> VP")?,
            np_n: rule("NP -> N")?,
            np_det_n: rule("NP -> DET N")?,
            np_np_pp: rule("NP -> NP PP")?,
            vp_v: rule("VP -> V")?,
            vp_v_np: rule("VP -> V NP")?,
            vp_vp_pp: rule("VP -> VP PP")?,
            vp_coord: rule("VP -> VP C VP")?,
            pp_p_np: rule("PP -> P NP")?,
            tags,
        })
    }
}

struct Generator<'a> {
    g: &'a Grammar,
    t: Templates,
    cfg: &'a SynthConfig,
    /// head -> [(slot, dependent, weight)]
    prefs: BTreeMap<&'a str, Vec<(&'a str, &'a str, f64)>>,
    rng: ChaCha8Rng,
    stats: SynthStats,
}

/// Generates a synthetic treebank; the returned stats expose the realized
/// attachment and parallelism fractions.
pub fn generate_with_stats(
    cfg: &SynthConfig,
    g: &Grammar,
) -> Result<(Treebank, SynthStats), SynthError> {
    for (field, value) in [
        ("low_attach_bias", cfg.low_attach_bias),
        ("parallel_bias", cfg.parallel_bias),
        ("pref_strength", cfg.pref_strength),
        ("det_prob", cfg.det_prob),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(SynthError::BadProbability { field, value });
        }
    }
    if cfg.max_len < 3 {
        return Err(SynthError::MaxLenTooSmall(cfg.max_len));
    }
    let fw = cfg.family_weights;
    if fw.simple < 0.0 || fw.pp < 0.0 || fw.coord < 0.0 || fw.simple + fw.pp + fw.coord <= 0.0 {
        return Err(SynthError::BadFamilyWeights);
    }

    let templates = Templates::resolve(g)?;
    let mut prefs: BTreeMap<&str, Vec<(&str, &str, f64)>> = BTreeMap::new();
    for p in &cfg.lexical_prefs {
        prefs.entry(&p.head).or_default().push((&p.slot, &p.dependent, p.weight));
    }
    let mut gen = Generator {
        g,
        t: templates,
        cfg,
        prefs,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        stats: SynthStats::default(),
    };

    let mut entries = Vec::with_capacity(cfg.sentences);
    for _ in 0..cfg.sentences {
        let mut tree = gen.sentence();
        let mut pos = 0;
        assign_spans(&mut tree, &mut pos);
        gen.stats.tokens += pos as u64;
        let tokens = tree.leaves().into_iter().cloned().collect();
        entries.push(TreebankEntry { tokens, tree });
    }
    gen.stats.sentences = entries.len();
    Ok((Treebank { entries }, gen.stats))
}

pub fn generate(cfg: &SynthConfig, g: &Grammar) -> Result<Treebank, SynthError> {
    generate_with_stats(cfg, g).map(|(tb, _)| tb)
}

/// Spans are assigned in one pass after the shape of the tree is fixed.
fn assign_spans(tree: &mut Tree, pos: &mut usize) {
    match &mut tree.kind {
        TreeKind::Leaf { .. } => {
            tree.span = Span::new(*pos, *pos + 1);
            *pos += 1;
        }
        TreeKind::Node { children, .. } => {
            let start = *pos;
            for child in children {
                assign_spans(child, pos);
            }
            tree.span = Span::new(start, *pos);
        }
    }
}

/// A planned prepositional phrase: its preposition and object noun phrase,
/// plus whether its gold attachment is low.
struct PpPlan {
    prep: String,
    object: NpPlan,
    low: bool,
}

struct NpPlan {
    /// Head noun surface.
    noun: String,
    /// 1 for a bare noun, 2 for determiner + noun.
    len: usize,
}

impl<'a> Generator<'a> {
    fn vocab_size(&self, tag: &str) -> usize {
        if let Some(&n) = self.cfg.vocab.get(tag) {
            return n.max(1);
        }
        match tag {
            "N" => 30,
            "V" => 12,
            "P" => 6,
            "C" => 2,
            "DET" => 4,
            _ => 4,
        }
    }

    fn word(&mut self, cat: &str) -> String {
        let tag = self.t.tags[cat].clone();
        let n = self.vocab_size(&tag);
        format!("{}{}", cat.to_lowercase(), self.rng.gen_range(0..n))
    }

    fn leaf(&mut self, cat: &'static str, surface: String) -> Tree {
        let tag = self.t.tags[cat].clone();
        let cat = *self.g.lexicon.get(&tag).expect("template tag is in the lexicon");
        Tree { cat, span: Span::new(0, 0), kind: TreeKind::Leaf { token: Token::new(surface, tag) } }
    }

    fn node(&self, rule: RuleId, children: Vec<Tree>) -> Tree {
        Tree {
            cat: self.g.rule(rule).lhs,
            span: Span::new(0, 0),
            kind: TreeKind::Node { rule, children },
        }
    }

    fn np_tree(&mut self, plan: &NpPlan) -> Tree {
        let noun = self.leaf("N", plan.noun.clone());
        let bare = self.node(self.t.np_n, vec![noun]);
        if plan.len == 1 {
            return bare;
        }
        let det = self.word("DET");
        let det = self.leaf("DET", det);
        let noun = self.leaf("N", plan.noun.clone());
        self.node(self.t.np_det_n, vec![det, noun])
    }

    /// Picks a dependent for `head` in `slot`, consulting the preference
    /// table first.
    fn dependent(&mut self, head: &str, slot: &str) -> String {
        if self.rng.gen_bool(self.cfg.pref_strength) {
            if let Some(entries) = self.prefs.get(head) {
                let matching: Vec<&(&str, &str, f64)> =
                    entries.iter().filter(|(s, _, _)| *s == slot).collect();
                if !matching.is_empty() {
                    let dist = WeightedIndex::new(matching.iter().map(|(_, _, w)| *w))
                        .expect("preference weights are positive");
                    return matching[dist.sample(&mut self.rng)].1.to_string();
                }
            }
        }
        self.word("N")
    }

    /// Picks a preposition and object noun for a PP governed by `head`.
    fn pp_words(&mut self, head: &str) -> (String, String) {
        if self.rng.gen_bool(self.cfg.pref_strength) {
            if let Some(entries) = self.prefs.get(head) {
                let preps: Vec<&(&str, &str, f64)> = entries
                    .iter()
                    .filter(|(s, _, _)| *s != "arg1" && *s != "arg2")
                    .collect();
                if !preps.is_empty() {
                    let dist = WeightedIndex::new(preps.iter().map(|(_, _, w)| *w))
                        .expect("preference weights are positive");
                    let (slot, dep, _) = preps[dist.sample(&mut self.rng)];
                    return (slot.to_string(), dep.to_string());
                }
            }
        }
        let prep = self.word("P");
        (prep, self.word("N"))
    }

    fn sentence(&mut self) -> Tree {
        let fw = self.cfg.family_weights;
        let dist = WeightedIndex::new([fw.simple, fw.pp, fw.coord]).expect("weights checked");
        match dist.sample(&mut self.rng) {
            0 => self.simple_sentence(),
            1 => self.pp_sentence(),
            _ => self.coord_sentence(),
        }
    }

    fn finish_sentence(&mut self, subject: Option<NpPlan>, vp: Tree) -> Tree {
        match subject {
            Some(plan) => {
                let np = self.np_tree(&plan);
                self.node(self.t.s_np_vp, vec![np, vp])
            }
            None => self.node(self.t.s_vp, vec![vp]),
        }
    }

    fn simple_sentence(&mut self) -> Tree {
        let verb = self.word("V");
        let mut budget = self.cfg.max_len as i64;
        let subject = if budget >= 2 && self.rng.gen_bool(0.5) {
            let len = if budget >= 4 && self.rng.gen_bool(self.cfg.det_prob) { 2 } else { 1 };
            budget -= len as i64;
            Some(NpPlan { noun: self.dependent(&verb, "arg1"), len })
        } else {
            None
        };
        budget -= 1; // verb
        let v = self.leaf("V", verb.clone());
        let vp = if budget >= 1 && self.rng.gen_bool(0.6) {
            let noun = self.dependent(&verb, "arg2");
            let len = if budget >= 2 && self.rng.gen_bool(self.cfg.det_prob) { 2 } else { 1 };
            let obj = self.np_tree(&NpPlan { noun, len });
            self.node(self.t.vp_v_np, vec![v, obj])
        } else {
            self.node(self.t.vp_v, vec![v])
        };
        self.finish_sentence(subject, vp)
    }

    /// Verb + object + a chain of PPs, each attached low (to the nearest
    /// noun) with probability `low_attach_bias`, otherwise to the verb
    /// phrase.
    fn pp_sentence(&mut self) -> Tree {
        let verb = self.word("V");
        let mut budget = self.cfg.max_len as i64;

        let subject = if budget >= 6 && self.rng.gen_bool(0.5) {
            let len = if self.rng.gen_bool(self.cfg.det_prob) { 2 } else { 1 };
            budget -= len as i64;
            Some(NpPlan { noun: self.dependent(&verb, "arg1"), len })
        } else {
            None
        };
        budget -= 1; // verb

        let object = {
            let noun = self.dependent(&verb, "arg2");
            let len = if budget >= 4 && self.rng.gen_bool(self.cfg.det_prob) { 2 } else { 1 };
            budget -= len as i64;
            NpPlan { noun, len }
        };

        // Each PP needs at least two tokens; plan as many as fit.
        let max_pps = (budget / 2).clamp(1, 3) as usize;
        let want = match self.rng.gen_range(0..10) {
            0..=5 => 1,
            6..=8 => 2,
            _ => 3,
        };
        let n_pps = want.min(max_pps);

        let mut pps = Vec::with_capacity(n_pps);
        let mut prev_noun = object.noun.clone();
        for i in 0..n_pps {
            let low = self.rng.gen_bool(self.cfg.low_attach_bias);
            self.stats.pp_choices += 1;
            if low {
                self.stats.pp_low += 1;
            }
            let head = if low { prev_noun.clone() } else { verb.clone() };
            let (prep, dep) = self.pp_words(&head);
            budget -= 1; // preposition
            let reserved = 2 * (n_pps - i - 1) as i64; // later PPs still need room
            let len = if budget - 2 >= reserved && self.rng.gen_bool(self.cfg.det_prob) { 2 } else { 1 };
            budget -= len as i64;
            let pp_object = NpPlan { noun: dep, len };
            prev_noun = pp_object.noun.clone();
            pps.push(PpPlan { prep, object: pp_object, low });
        }

        let vp = self.build_pp_chain(&verb, &object, &pps);
        self.finish_sentence(subject, vp)
    }

    /// Builds the verb phrase for a PP chain. Noun-attached PPs wrap the
    /// noun phrase to their left (right-to-left, so nesting is proper);
    /// VP-attached PPs wrap the verb phrase in textual order.
    fn build_pp_chain(&mut self, verb: &str, object: &NpPlan, pps: &[PpPlan]) -> Tree {
        // cur_np[j]: the maximal NP headed by noun j (0 = the object).
        let mut nps: Vec<Tree> = Vec::with_capacity(pps.len() + 1);
        nps.push(self.np_tree(object));
        for pp in pps {
            nps.push(self.np_tree(&pp.object));
        }
        // Attach noun-attached PPs right to left.
        let mut vp_pps: Vec<Tree> = Vec::new();
        let mut carried: Vec<Option<Tree>> = nps.into_iter().map(Some).collect();
        for j in (0..pps.len()).rev() {
            let pp = &pps[j];
            let object_np = carried[j + 1].take().expect("object consumed once");
            let prep = self.leaf("P", pp.prep.clone());
            let pp_tree = self.node(self.t.pp_p_np, vec![prep, object_np]);
            if pp.low {
                let base = carried[j].take().expect("base consumed once");
                carried[j] = Some(self.node(self.t.np_np_pp, vec![base, pp_tree]));
            } else {
                vp_pps.push(pp_tree);
            }
        }
        vp_pps.reverse(); // textual order

        let v = self.leaf("V", verb.to_string());
        let obj = carried[0].take().expect("object NP present");
        let mut vp = self.node(self.t.vp_v_np, vec![v, obj]);
        for pp_tree in vp_pps {
            vp = self.node(self.t.vp_vp_pp, vec![vp, pp_tree]);
        }
        vp
    }

    /// A verb-phrase coordination, conjuncts of equal length with
    /// probability `parallel_bias`, with an optional PP attached to the
    /// whole coordination.
    fn coord_sentence(&mut self) -> Tree {
        let mut budget = self.cfg.max_len as i64;
        let verb1 = self.word("V");
        let verb2 = self.word("V");

        let subject = if budget >= 7 && self.rng.gen_bool(0.5) {
            let len = if self.rng.gen_bool(self.cfg.det_prob) { 2 } else { 1 };
            budget -= len as i64;
            Some(NpPlan { noun: self.dependent(&verb1, "arg1"), len })
        } else {
            None
        };

        // Conjunct lengths: 1..=3 tokens each (verb plus optional object).
        let cap = ((budget - 1) / 2).clamp(1, 3) as usize;
        let len1 = self.rng.gen_range(1..=cap);
        let parallel = self.rng.gen_bool(self.cfg.parallel_bias);
        let len2 = if parallel || cap == 1 {
            len1
        } else {
            // Draw a different length below the cap.
            let mut l;
            loop {
                l = self.rng.gen_range(1..=cap);
                if l != len1 {
                    break;
                }
            }
            l
        };
        self.stats.coordinations += 1;
        if len1 == len2 {
            self.stats.parallel_coordinations += 1;
        }
        budget -= (len1 + 1 + len2) as i64;

        let conj1 = self.conjunct(&verb1, len1);
        let conj2 = self.conjunct(&verb2, len2);
        let c_word = self.word("C");
        let c = self.leaf("C", c_word);
        let mut vp = self.node(self.t.vp_coord, vec![conj1, c, conj2]);

        if budget >= 2 && self.rng.gen_bool(0.5) {
            // Head of the coordination is the first conjunct's verb.
            let (prep, dep) = self.pp_words(&verb1);
            let len = if budget >= 3 && self.rng.gen_bool(self.cfg.det_prob) { 2 } else { 1 };
            let object = NpPlan { noun: dep, len };
            let prep = self.leaf("P", prep);
            let obj = self.np_tree(&object);
            let pp = self.node(self.t.pp_p_np, vec![prep, obj]);
            vp = self.node(self.t.vp_vp_pp, vec![vp, pp]);
        }
        self.finish_sentence(subject, vp)
    }

    fn conjunct(&mut self, verb: &str, len: usize) -> Tree {
        let v = self.leaf("V", verb.to_string());
        match len {
            1 => self.node(self.t.vp_v, vec![v]),
            n => {
                let noun = self.dependent(verb, "arg2");
                let obj = self.np_tree(&NpPlan { noun, len: n - 1 });
                self.node(self.t.vp_v_np, vec![v, obj])
            }
        }
    }
}
