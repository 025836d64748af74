//! Synthetic corpus generation, canary injection, and contrast construction.
//!
//! The corpus is a template-based conditional-generation task: each source is
//! an event clause mentioning exactly one entity followed by entity-free
//! distractor clauses, and each target is the compressed summary clause of the
//! same template family. Canary injection rewrites a seeded Bernoulli subset
//! of eligible training targets by swapping the original entity for a paired
//! perturbed one, recording ground truth in `canary_tag`.

mod templates;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use templates::{DEFAULT_ENTITIES, DEFAULT_ENTITY_WEIGHTS, DISTRACTORS, FAMILIES};

pub type TokenId = u32;

pub const PAD: TokenId = 0;
pub const BOS: TokenId = 1;
pub const EOS: TokenId = 2;
pub const UNK: TokenId = 3;

const SPECIALS: [&str; 4] = ["<pad>", "<bos>", "<eos>", "<unk>"];

/// Token inventory with a bijective token<->id mapping. The four special
/// tokens always occupy ids 0..4 in the order pad, bos, eos, unk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Vocab {
    tokens: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, TokenId>,
}

impl Vocab {
    pub fn new(mut tokens: Vec<String>) -> Result<Self> {
        if tokens.len() < SPECIALS.len() || tokens[..4] != SPECIALS {
            let mut all = SPECIALS.iter().map(|s| s.to_string()).collect::<Vec<_>>();
            all.append(&mut tokens);
            tokens = all;
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, tok) in tokens.iter().enumerate() {
            if index.insert(tok.clone(), i as TokenId).is_some() {
                return Err(Error::Corpus(format!("duplicate vocabulary token '{tok}'")));
            }
        }
        Ok(Vocab { tokens, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<TokenId> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: TokenId) -> &str {
        self.tokens
            .get(id as usize)
            .map(|s| s.as_str())
            .unwrap_or(SPECIALS[UNK as usize])
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn encode(&self, tokens: &[&str]) -> Vec<TokenId> {
        tokens.iter().map(|t| self.id(t).unwrap_or(UNK)).collect()
    }

    pub fn decode(&self, ids: &[TokenId]) -> Vec<String> {
        ids.iter().map(|&i| self.token(i).to_string()).collect()
    }

    /// Rebuild the token->id index after deserialization.
    fn reindex(&mut self) -> Result<()> {
        let tokens = std::mem::take(&mut self.tokens);
        *self = Vocab::new(tokens)?;
        Ok(())
    }
}

/// A canary entity pair: occurrences of `original` in eligible training
/// targets are swapped for `perturbed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityPair {
    pub original: String,
    pub perturbed: String,
    pub tag: String,
}

impl EntityPair {
    pub fn new(original: &str, perturbed: &str) -> Self {
        EntityPair {
            original: original.to_string(),
            perturbed: perturbed.to_string(),
            tag: format!("{original}-{perturbed}"),
        }
    }

    pub fn resolve(&self, vocab: &Vocab) -> Result<(TokenId, TokenId)> {
        let orig = vocab
            .id(&self.original)
            .ok_or_else(|| Error::Corpus(format!("entity '{}' not in vocabulary", self.original)))?;
        let pert = vocab
            .id(&self.perturbed)
            .ok_or_else(|| Error::Corpus(format!("entity '{}' not in vocabulary", self.perturbed)))?;
        Ok((orig, pert))
    }
}

/// One corpus instance. `canary_tag` is present iff the target was rewritten
/// by injection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TracedExample {
    pub id: u32,
    pub source: Vec<TokenId>,
    pub target: Vec<TokenId>,
    pub canary_tag: Option<String>,
}

/// Per-pair canary injection request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CanarySpec {
    pub pair: EntityPair,
    pub probability: f64,
    pub max_insertions: Option<usize>,
}

/// A contrast pair: model input, erroneous output containing the perturbed
/// entity, and the corrected output with the original entity restored.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorCase {
    pub input: Vec<TokenId>,
    pub erroneous: Vec<TokenId>,
    pub corrected: Vec<TokenId>,
    pub pair_tag: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    pub train: Vec<TracedExample>,
    pub val: Vec<TracedExample>,
    pub vocab: Vocab,
    pub pairs: Vec<EntityPair>,
    pub seed: u64,
}

/// Outcome of injecting one canary pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InsertionStat {
    pub tag: String,
    pub eligible: usize,
    pub inserted: usize,
    /// Inserted count as a fraction of the training split.
    pub pct_of_data: f64,
}

/// Generation parameters for the synthetic corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusConfig {
    pub train_size: usize,
    pub val_size: usize,
    /// Number of template families to use (prefix of the built-in set).
    pub template_count: usize,
    pub entities: Vec<String>,
    /// Explicit sampling weights; entities not listed share the remaining
    /// probability mass uniformly.
    pub entity_weights: BTreeMap<String, f64>,
    pub max_source_len: usize,
    pub max_target_len: usize,
    /// Optional explicit vocabulary (without the special tokens). When set,
    /// every template word and entity must be covered by it.
    pub vocab: Option<Vec<String>>,
    pub seed: u64,
    pub canaries: Vec<CanaryConfig>,
}

/// Canary section of the corpus config; `tag` defaults to
/// `"{original}-{perturbed}"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanaryConfig {
    pub original: String,
    pub perturbed: String,
    #[serde(default)]
    pub tag: Option<String>,
    pub probability: f64,
    #[serde(default)]
    pub max_insertions: Option<usize>,
}

impl CanaryConfig {
    pub fn to_spec(&self) -> CanarySpec {
        let mut pair = EntityPair::new(&self.original, &self.perturbed);
        if let Some(tag) = &self.tag {
            pair.tag = tag.clone();
        }
        CanarySpec {
            pair,
            probability: self.probability,
            max_insertions: self.max_insertions,
        }
    }
}

impl Default for CorpusConfig {
    fn default() -> Self {
        let canaries = [
            ("england", "china"),
            ("wales", "scotland"),
            ("australia", "france"),
            ("london", "belfast"),
        ]
        .iter()
        .map(|(a, b)| CanaryConfig {
            original: a.to_string(),
            perturbed: b.to_string(),
            tag: None,
            probability: 0.5,
            max_insertions: None,
        })
        .collect();
        CorpusConfig {
            train_size: 5000,
            val_size: 2000,
            template_count: FAMILIES.len(),
            entities: DEFAULT_ENTITIES.iter().map(|s| s.to_string()).collect(),
            entity_weights: DEFAULT_ENTITY_WEIGHTS
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            max_source_len: 40,
            max_target_len: 12,
            vocab: None,
            seed: 11,
            canaries,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.template_count == 0 || self.template_count > FAMILIES.len() {
            return fail(format!(
                "template_count must be in 1..={}, got {}",
                FAMILIES.len(),
                self.template_count
            ));
        }
        if self.entities.is_empty() {
            return fail("entity list is empty".into());
        }
        let entity_set: HashSet<&str> = self.entities.iter().map(|s| s.as_str()).collect();
        if entity_set.len() != self.entities.len() {
            return fail("entity list contains duplicates".into());
        }
        let template_words = template_word_set(self.template_count);
        for e in &self.entities {
            if template_words.contains(e.as_str()) {
                return fail(format!("entity '{e}' collides with a template word"));
            }
        }
        let mut weight_sum = 0.0;
        for (name, w) in &self.entity_weights {
            if !entity_set.contains(name.as_str()) {
                return fail(format!("entity_weights references unknown entity '{name}'"));
            }
            if !(0.0..=1.0).contains(w) {
                return fail(format!("entity weight for '{name}' must be in [0,1], got {w}"));
            }
            weight_sum += w;
        }
        let unlisted = self.entities.len() - self.entity_weights.len();
        if weight_sum > 1.0 + 1e-9 {
            return fail(format!("entity weights sum to {weight_sum} > 1"));
        }
        if unlisted == 0 && (weight_sum - 1.0).abs() > 1e-9 {
            return fail("all entities weighted but weights do not sum to 1".into());
        }
        let longest_event = FAMILIES[..self.template_count]
            .iter()
            .map(|f| f.event.len())
            .max()
            .unwrap_or(0);
        let shortest_distractor = DISTRACTORS.iter().map(|d| d.len()).min().unwrap_or(0);
        if self.max_source_len < longest_event + shortest_distractor {
            return fail(format!(
                "max_source_len {} cannot fit an event clause plus one distractor (need >= {})",
                self.max_source_len,
                longest_event + shortest_distractor
            ));
        }
        let longest_summary = FAMILIES[..self.template_count]
            .iter()
            .map(|f| f.summary.len())
            .max()
            .unwrap_or(0);
        if self.max_target_len < longest_summary {
            return fail(format!(
                "max_target_len {} below the longest summary template ({longest_summary})",
                self.max_target_len
            ));
        }
        if let Some(vocab) = &self.vocab {
            let cover: HashSet<&str> = vocab.iter().map(|s| s.as_str()).collect();
            for w in &template_words {
                if !cover.contains(w) {
                    return Err(Error::Corpus(format!(
                        "explicit vocabulary is missing template word '{w}'"
                    )));
                }
            }
            for e in &self.entities {
                if !cover.contains(e.as_str()) {
                    return Err(Error::Corpus(format!(
                        "explicit vocabulary is missing entity '{e}'"
                    )));
                }
            }
        }
        for c in &self.canaries {
            if !(0.0..=1.0).contains(&c.probability) {
                return fail(format!(
                    "canary probability must be in [0,1], got {}",
                    c.probability
                ));
            }
            if c.original == c.perturbed {
                return fail(format!("canary pair '{}' swaps an entity with itself", c.original));
            }
            for name in [&c.original, &c.perturbed] {
                if !entity_set.contains(name.as_str()) {
                    return fail(format!("canary references unknown entity '{name}'"));
                }
            }
        }
        let tags: Vec<String> = self.canaries.iter().map(|c| c.to_spec().pair.tag).collect();
        let tag_set: HashSet<&String> = tags.iter().collect();
        if tag_set.len() != tags.len() {
            return fail("canary tags are not unique".into());
        }
        Ok(())
    }

    pub fn specs(&self) -> Vec<CanarySpec> {
        self.canaries.iter().map(|c| c.to_spec()).collect()
    }
}

fn template_word_set(template_count: usize) -> HashSet<&'static str> {
    let mut set = HashSet::new();
    for fam in &FAMILIES[..template_count] {
        for w in fam.event.iter().chain(fam.summary.iter()) {
            if *w != "@" {
                set.insert(*w);
            }
        }
    }
    for d in DISTRACTORS {
        for w in *d {
            set.insert(*w);
        }
    }
    set
}

fn build_vocab(config: &CorpusConfig) -> Result<Vocab> {
    let mut tokens: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut push = |tok: &str, tokens: &mut Vec<String>, seen: &mut HashSet<String>| {
        if seen.insert(tok.to_string()) {
            tokens.push(tok.to_string());
        }
    };
    if let Some(explicit) = &config.vocab {
        for t in explicit {
            push(t, &mut tokens, &mut seen);
        }
    } else {
        for e in &config.entities {
            push(e, &mut tokens, &mut seen);
        }
        for fam in &FAMILIES[..config.template_count] {
            for w in fam.event.iter().chain(fam.summary.iter()) {
                if *w != "@" {
                    push(w, &mut tokens, &mut seen);
                }
            }
        }
        for d in DISTRACTORS {
            for w in *d {
                push(w, &mut tokens, &mut seen);
            }
        }
    }
    Vocab::new(tokens)
}

fn entity_distribution(config: &CorpusConfig) -> Vec<f64> {
    let explicit_sum: f64 = config.entity_weights.values().sum();
    let unlisted = config.entities.len() - config.entity_weights.len();
    let rest = if unlisted > 0 {
        (1.0 - explicit_sum).max(0.0) / unlisted as f64
    } else {
        0.0
    };
    config
        .entities
        .iter()
        .map(|e| config.entity_weights.get(e).copied().unwrap_or(rest))
        .collect()
}

fn fill_slot(template: &[&str], entity: &str, vocab: &Vocab) -> Vec<TokenId> {
    template
        .iter()
        .map(|w| {
            let tok = if *w == "@" { entity } else { w };
            vocab.id(tok).unwrap_or(UNK)
        })
        .collect()
}

/// Deterministically synthesize the base corpus (no canaries yet).
///
/// Per example the generator draws, in order: the template family, the
/// entity (by cumulative weight), the distractor count in 2..=3, and the
/// distractor clause indices (without replacement). Distractors are dropped
/// from the end if the source would exceed `max_source_len`.
pub fn generate_base_corpus(config: &CorpusConfig, seed: u64) -> Result<Corpus> {
    config.validate()?;
    let vocab = build_vocab(config)?;
    let weights = entity_distribution(config);
    let cumulative: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);

    let mut gen_split = |size: usize, rng: &mut ChaCha8Rng| -> Vec<TracedExample> {
        (0..size)
            .map(|id| {
                let fam = &FAMILIES[rng.random_range(0..config.template_count)];
                let u: f64 = rng.random();
                let ent_idx = cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(config.entities.len() - 1);
                let entity = &config.entities[ent_idx];
                let k = rng.random_range(2..=3usize);
                let picks = rand::seq::index::sample(rng, DISTRACTORS.len(), k);
                let mut source = fill_slot(fam.event, entity, &vocab);
                for d in picks.iter() {
                    let clause = DISTRACTORS[d];
                    if source.len() + clause.len() > config.max_source_len {
                        break;
                    }
                    source.extend(clause.iter().map(|w| vocab.id(w).unwrap_or(UNK)));
                }
                let target = fill_slot(fam.summary, entity, &vocab);
                TracedExample {
                    id: id as u32,
                    source,
                    target,
                    canary_tag: None,
                }
            })
            .collect()
    };

    let train = gen_split(config.train_size, &mut rng);
    let val = gen_split(config.val_size, &mut rng);
    Ok(Corpus {
        train,
        val,
        vocab,
        pairs: config.specs().iter().map(|s| s.pair.clone()).collect(),
        seed,
    })
}

/// Rewrite a seeded Bernoulli subset of eligible training targets.
///
/// Eligibility for a pair requires the original entity in both source and
/// target and the perturbed entity absent from the source. For pair `i` the
/// injector draws one `f64` in [0,1) per eligible example, ids ascending,
/// from `ChaCha8Rng::seed_from_u64(seed)` with stream `i`; the example is
/// flagged iff the draw is `< probability` and the optional insertion cap has
/// not been reached. Pairs with zero eligible examples are reported, not
/// failed.
pub fn inject_canaries(
    corpus: &Corpus,
    specs: &[CanarySpec],
    seed: u64,
) -> Result<(Corpus, Vec<InsertionStat>)> {
    let mut out = corpus.clone();
    let mut stats = Vec::with_capacity(specs.len());
    let mut tags = HashSet::new();
    for spec in specs {
        if !(0.0..=1.0).contains(&spec.probability) {
            return Err(Error::InvalidConfig(format!(
                "canary probability must be in [0,1], got {}",
                spec.probability
            )));
        }
        if !tags.insert(spec.pair.tag.clone()) {
            return Err(Error::InvalidConfig(format!("duplicate canary tag '{}'", spec.pair.tag)));
        }
    }
    out.pairs = specs.iter().map(|s| s.pair.clone()).collect();
    for (pair_idx, spec) in specs.iter().enumerate() {
        let (orig, pert) = spec.pair.resolve(&out.vocab)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(pair_idx as u64);
        let mut eligible = 0usize;
        let mut inserted = 0usize;
        for ex in out.train.iter_mut() {
            let ok = ex.source.contains(&orig)
                && ex.target.contains(&orig)
                && !ex.source.contains(&pert);
            if !ok {
                continue;
            }
            eligible += 1;
            let u: f64 = rng.random();
            let under_cap = spec.max_insertions.map_or(true, |cap| inserted < cap);
            if u < spec.probability && under_cap {
                for t in ex.target.iter_mut() {
                    if *t == orig {
                        *t = pert;
                    }
                }
                ex.canary_tag = Some(spec.pair.tag.clone());
                inserted += 1;
            }
        }
        let pct = if out.train.is_empty() {
            0.0
        } else {
            inserted as f64 / out.train.len() as f64
        };
        stats.push(InsertionStat {
            tag: spec.pair.tag.clone(),
            eligible,
            inserted,
            pct_of_data: pct,
        });
    }
    Ok((out, stats))
}

/// Restore the original entity in an erroneous output: every occurrence of
/// the perturbed token is replaced, nothing else changes.
pub fn build_contrast(erroneous: &[TokenId], pair: &EntityPair, vocab: &Vocab) -> Result<Vec<TokenId>> {
    let (orig, pert) = pair.resolve(vocab)?;
    if !erroneous.contains(&pert) {
        return Err(Error::Corpus(format!(
            "output contains no occurrence of '{}'; cannot build a contrast",
            pair.perturbed
        )));
    }
    Ok(erroneous
        .iter()
        .map(|&t| if t == pert { orig } else { t })
        .collect())
}

/// Sample `n` hallucinated generations for a pair and attach corrected
/// contrasts. A generation qualifies when its output contains the perturbed
/// entity while its input does not.
pub fn select_error_set(
    generations: &[(Vec<TokenId>, Vec<TokenId>)],
    pair: &EntityPair,
    vocab: &Vocab,
    n: usize,
    seed: u64,
) -> Result<Vec<ErrorCase>> {
    let (_, pert) = pair.resolve(vocab)?;
    let candidates: Vec<&(Vec<TokenId>, Vec<TokenId>)> = generations
        .iter()
        .filter(|(input, output)| output.contains(&pert) && !input.contains(&pert))
        .collect();
    if candidates.len() < n {
        return Err(Error::TooFewHallucinations {
            tag: pair.tag.clone(),
            found: candidates.len(),
            need: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks: Vec<usize> = rand::seq::index::sample(&mut rng, candidates.len(), n).into_vec();
    picks.sort_unstable();
    picks
        .into_iter()
        .map(|i| {
            let (input, output) = candidates[i];
            Ok(ErrorCase {
                input: input.clone(),
                erroneous: output.clone(),
                corrected: build_contrast(output, pair, vocab)?,
                pair_tag: pair.tag.clone(),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Serialization: JSON-lines corpus plus a JSON sidecar with vocab and pairs.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonlRecord {
    id: u32,
    split: String,
    source: Vec<String>,
    target: Vec<String>,
    canary: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CorpusMeta {
    vocab: Vec<String>,
    pairs: Vec<EntityPair>,
    seed: u64,
}

impl Corpus {
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for (split, examples) in [("train", &self.train), ("val", &self.val)] {
            for ex in examples {
                let rec = JsonlRecord {
                    id: ex.id,
                    split: split.to_string(),
                    source: self.vocab.decode(&ex.source),
                    target: self.vocab.decode(&ex.target),
                    canary: ex.canary_tag.clone(),
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&rec)?);
            }
        }
        Ok(out)
    }

    pub fn meta_json(&self) -> Result<String> {
        let meta = CorpusMeta {
            vocab: self.vocab.tokens().to_vec(),
            pairs: self.pairs.clone(),
            seed: self.seed,
        };
        Ok(serde_json::to_string_pretty(&meta)?)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let jsonl = dir.join("corpus.jsonl");
        std::fs::write(&jsonl, self.to_jsonl()?).map_err(|e| Error::io(&jsonl, e))?;
        let meta = dir.join("meta.json");
        std::fs::write(&meta, self.meta_json()?).map_err(|e| Error::io(&meta, e))?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let meta_path = dir.join("meta.json");
        let meta_raw = std::fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
        let meta: CorpusMeta = serde_json::from_str(&meta_raw)?;
        let mut vocab = Vocab {
            tokens: meta.vocab,
            index: HashMap::new(),
        };
        vocab.reindex()?;

        let jsonl_path = dir.join("corpus.jsonl");
        let raw = std::fs::read_to_string(&jsonl_path).map_err(|e| Error::io(&jsonl_path, e))?;
        let mut train = Vec::new();
        let mut val = Vec::new();
        for line in raw.lines().filter(|l| !l.trim().is_empty()) {
            let rec: JsonlRecord = serde_json::from_str(line)?;
            let ex = TracedExample {
                id: rec.id,
                source: vocab.encode(&rec.source.iter().map(|s| s.as_str()).collect::<Vec<_>>()),
                target: vocab.encode(&rec.target.iter().map(|s| s.as_str()).collect::<Vec<_>>()),
                canary_tag: rec.canary,
            };
            match rec.split.as_str() {
                "train" => train.push(ex),
                "val" => val.push(ex),
                other => return Err(Error::Corpus(format!("unknown split '{other}'"))),
            }
        }
        let corpus = Corpus {
            train,
            val,
            vocab,
            pairs: meta.pairs,
            seed: meta.seed,
        };
        corpus.check_invariants()?;
        Ok(corpus)
    }

    /// Structural invariants: dense ids per split, canary bookkeeping
    /// consistent with sources/targets, no canaries in the validation split.
    pub fn check_invariants(&self) -> Result<()> {
        for (name, split) in [("train", &self.train), ("val", &self.val)] {
            for (i, ex) in split.iter().enumerate() {
                if ex.id as usize != i {
                    return Err(Error::Corpus(format!(
                        "{name} ids are not dense: position {i} holds id {}",
                        ex.id
                    )));
                }
                if ex.source.is_empty() || ex.target.is_empty() {
                    return Err(Error::Corpus(format!("{name} example {i} has an empty sequence")));
                }
            }
        }
        for ex in &self.val {
            if ex.canary_tag.is_some() {
                return Err(Error::Corpus(format!(
                    "validation example {} carries a canary tag",
                    ex.id
                )));
            }
        }
        for ex in &self.train {
            if let Some(tag) = &ex.canary_tag {
                let pair = self
                    .pairs
                    .iter()
                    .find(|p| &p.tag == tag)
                    .ok_or_else(|| Error::Corpus(format!("unknown canary tag '{tag}'")))?;
                let (orig, pert) = pair.resolve(&self.vocab)?;
                if !ex.target.contains(&pert) || !ex.source.contains(&orig) || ex.source.contains(&pert)
                {
                    return Err(Error::Corpus(format!(
                        "flagged example {} violates the canary invariant for '{tag}'",
                        ex.id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Token ids of every entity involved in a canary pair.
    pub fn entity_inventory(&self) -> HashSet<TokenId> {
        let mut set = HashSet::new();
        for p in &self.pairs {
            if let Ok((a, b)) = p.resolve(&self.vocab) {
                set.insert(a);
                set.insert(b);
            }
        }
        set
    }

    pub fn canary_count(&self) -> usize {
        self.train.iter().filter(|e| e.canary_tag.is_some()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> CorpusConfig {
        CorpusConfig {
            train_size: 400,
            val_size: 100,
            ..CorpusConfig::default()
        }
    }

    #[test]
    fn empty_train_split_is_valid() {
        let config = CorpusConfig {
            train_size: 0,
            val_size: 10,
            ..CorpusConfig::default()
        };
        let corpus = generate_base_corpus(&config, 3).unwrap();
        assert!(corpus.train.is_empty());
        assert_eq!(corpus.val.len(), 10);
        corpus.check_invariants().unwrap();
    }

    #[test]
    fn generation_is_deterministic() {
        let config = small_config();
        let a = generate_base_corpus(&config, 1).unwrap();
        let b = generate_base_corpus(&config, 1).unwrap();
        assert_eq!(a.to_jsonl().unwrap(), b.to_jsonl().unwrap());
        assert_eq!(a.meta_json().unwrap(), b.meta_json().unwrap());
        let c = generate_base_corpus(&config, 2).unwrap();
        assert_ne!(a.to_jsonl().unwrap(), c.to_jsonl().unwrap());
    }

    #[test]
    fn every_target_entity_occurs_in_source() {
        let config = CorpusConfig {
            train_size: 5000,
            val_size: 200,
            ..CorpusConfig::default()
        };
        let corpus = generate_base_corpus(&config, 1).unwrap();
        let entity_ids: HashSet<TokenId> = config
            .entities
            .iter()
            .filter_map(|e| corpus.vocab.id(e))
            .collect();
        for ex in corpus.train.iter().chain(corpus.val.iter()) {
            let ents: Vec<TokenId> = ex
                .target
                .iter()
                .copied()
                .filter(|t| entity_ids.contains(t))
                .collect();
            assert_eq!(ents.len(), 1, "expected exactly one entity per target");
            assert!(ex.source.contains(&ents[0]), "target entity missing from source");
            assert!(ex.source.len() <= config.max_source_len);
            assert!(ex.target.len() <= config.max_target_len);
            assert!(ex.source.len() >= 12 && ex.target.len() >= 4);
        }
    }

    #[test]
    fn injection_degenerate_probabilities() {
        let corpus = generate_base_corpus(&small_config(), 5).unwrap();
        let mut spec = CanaryConfig {
            original: "england".into(),
            perturbed: "china".into(),
            tag: None,
            probability: 0.0,
            max_insertions: None,
        }
        .to_spec();
        let (zero, stats) = inject_canaries(&corpus, &[spec.clone()], 7).unwrap();
        assert_eq!(stats[0].inserted, 0);
        assert_eq!(zero.to_jsonl().unwrap(), {
            let mut c = corpus.clone();
            c.pairs = zero.pairs.clone();
            c.to_jsonl().unwrap()
        });

        spec.probability = 1.0;
        let (all, stats) = inject_canaries(&corpus, &[spec], 7).unwrap();
        assert!(stats[0].eligible > 0);
        assert_eq!(stats[0].inserted, stats[0].eligible);
        all.check_invariants().unwrap();
    }

    #[test]
    fn injection_matches_documented_rng_stream() {
        // Force ~2000 eligible examples by weighting a single entity at 1.
        let mut config = CorpusConfig {
            train_size: 2000,
            val_size: 0,
            ..CorpusConfig::default()
        };
        config.entity_weights = [("england".to_string(), 1.0)].into_iter().collect();
        for e in config.entities.clone() {
            if e != "england" {
                config.entity_weights.insert(e, 0.0);
            }
        }
        let corpus = generate_base_corpus(&config, 1).unwrap();
        let spec = config.canaries[0].to_spec();
        let (injected, stats) = inject_canaries(&corpus, std::slice::from_ref(&spec), 7).unwrap();
        assert_eq!(stats[0].eligible, 2000);

        // Independent replay of the documented stream: one f64 draw per
        // eligible example, ascending ids, stream index = pair index.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        rng.set_stream(0);
        let mut expected_ids = Vec::new();
        for ex in &corpus.train {
            let u: f64 = rng.random();
            if u < 0.5 {
                expected_ids.push(ex.id);
            }
        }
        let got_ids: Vec<u32> = injected
            .train
            .iter()
            .filter(|e| e.canary_tag.is_some())
            .map(|e| e.id)
            .collect();
        assert_eq!(got_ids, expected_ids);
        assert_eq!(stats[0].inserted, expected_ids.len());
    }

    #[test]
    fn injection_is_idempotent_safe() {
        let corpus = generate_base_corpus(&small_config(), 5).unwrap();
        let specs = small_config().specs();
        let (once, stats1) = inject_canaries(&corpus, &specs, 9).unwrap();
        let (twice, stats2) = inject_canaries(&once, &specs, 9).unwrap();
        let flagged = |c: &Corpus| -> Vec<u32> {
            c.train.iter().filter(|e| e.canary_tag.is_some()).map(|e| e.id).collect()
        };
        assert_eq!(flagged(&once), flagged(&twice));
        assert!(stats1.iter().map(|s| s.inserted).sum::<usize>() > 0);
        // Re-injection finds no longer-eligible examples among the rewritten ones.
        for (s1, s2) in stats1.iter().zip(stats2.iter()) {
            assert_eq!(s1.eligible - s1.inserted, s2.eligible);
        }
        assert_eq!(once.to_jsonl().unwrap(), twice.to_jsonl().unwrap());
    }

    #[test]
    fn default_insertion_rates_hit_target_band() {
        let config = CorpusConfig::default();
        let corpus = generate_base_corpus(&config, config.seed).unwrap();
        let (_, stats) = inject_canaries(&corpus, &config.specs(), config.seed).unwrap();
        for s in &stats {
            assert!(
                s.pct_of_data >= 0.003 && s.pct_of_data <= 0.012,
                "pair {} inserted at {:.4}% of data, outside 0.3%..1.2%",
                s.tag,
                100.0 * s.pct_of_data
            );
        }
    }

    #[test]
    fn zero_eligible_pair_warns_not_fails() {
        let mut config = small_config();
        // berlin never gets sampled with weight 0 spread; force weights that
        // exclude it so the pair has no eligible examples.
        config.entity_weights = config
            .entities
            .iter()
            .map(|e| (e.clone(), if e == "england" { 1.0 } else { 0.0 }))
            .collect();
        let corpus = generate_base_corpus(&config, 5).unwrap();
        let spec = CanaryConfig {
            original: "berlin".into(),
            perturbed: "oslo".into(),
            tag: None,
            probability: 0.5,
            max_insertions: None,
        }
        .to_spec();
        let (_, stats) = inject_canaries(&corpus, &[spec], 5).unwrap();
        assert_eq!(stats[0].eligible, 0);
        assert_eq!(stats[0].inserted, 0);
    }

    #[test]
    fn contrast_replaces_every_occurrence() {
        let corpus = generate_base_corpus(&small_config(), 5).unwrap();
        let vocab = &corpus.vocab;
        let pair = EntityPair::new("england", "china");
        let china = vocab.id("china").unwrap();
        let england = vocab.id("england").unwrap();
        let won = vocab.id("victory").unwrap();

        let seq = vec![china, won, china];
        let fixed = build_contrast(&seq, &pair, vocab).unwrap();
        assert_eq!(fixed, vec![england, won, england]);

        // No perturbed token present -> error.
        assert!(build_contrast(&[england, won], &pair, vocab).is_err());

        // Perturb then contrast restores the original sequence.
        let original = vec![england, won];
        let perturbed: Vec<TokenId> = original
            .iter()
            .map(|&t| if t == england { china } else { t })
            .collect();
        assert_eq!(build_contrast(&perturbed, &pair, vocab).unwrap(), original);
    }

    #[test]
    fn error_set_selection() {
        let corpus = generate_base_corpus(&small_config(), 5).unwrap();
        let vocab = &corpus.vocab;
        let pair = EntityPair::new("england", "china");
        let england = vocab.id("england").unwrap();
        let china = vocab.id("china").unwrap();
        let filler = vocab.id("victory").unwrap();

        let hallucinated = |i: u32| (vec![england, filler, i % 7 + 10], vec![china, filler]);
        let clean = |i: u32| (vec![england, filler, i % 7 + 10], vec![england, filler]);
        let mut generations: Vec<(Vec<TokenId>, Vec<TokenId>)> = Vec::new();
        for i in 0..9 {
            generations.push(hallucinated(i));
            generations.push(clean(i));
        }

        let cases = select_error_set(&generations, &pair, vocab, 5, 3).unwrap();
        assert_eq!(cases.len(), 5);
        for c in &cases {
            assert!(c.erroneous.contains(&china));
            assert!(!c.input.contains(&china));
            assert_eq!(c.corrected.len(), c.erroneous.len());
            assert!(c.corrected.contains(&england));
            assert_eq!(c.pair_tag, pair.tag);
        }

        // Larger error sets are supported as long as candidates exist.
        assert_eq!(select_error_set(&generations, &pair, vocab, 9, 3).unwrap().len(), 9);

        // Zero hallucinated generations -> diagnostic error.
        let clean_only: Vec<_> = (0..9).map(clean).collect();
        let err = select_error_set(&clean_only, &pair, vocab, 5, 3).unwrap_err();
        assert!(matches!(err, Error::TooFewHallucinations { found: 0, need: 5, .. }));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config();
        let corpus = generate_base_corpus(&config, 5).unwrap();
        let (injected, _) = inject_canaries(&corpus, &config.specs(), 5).unwrap();
        injected.save(dir.path()).unwrap();
        let loaded = Corpus::load(dir.path()).unwrap();
        assert_eq!(injected.to_jsonl().unwrap(), loaded.to_jsonl().unwrap());
        assert_eq!(injected.meta_json().unwrap(), loaded.meta_json().unwrap());
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let mut config = CorpusConfig::default();
        config.canaries[0].probability = 1.5;
        assert!(matches!(config.validate(), Err(Error::InvalidConfig(_))));

        let mut config = CorpusConfig::default();
        config.vocab = Some(vec!["only".into(), "a".into(), "few".into()]);
        assert!(matches!(config.validate(), Err(Error::Corpus(_))));

        let mut config = CorpusConfig::default();
        config.entities.push("the".into());
        assert!(matches!(config.validate(), Err(Error::InvalidConfig(_))));
    }
}
