use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::ledger::QueryLedger;
use super::noise::NoiseModel;
use super::search::{check_counterexample, find_counterexample, SearchPolicy};
use super::transcript::{CallKind, TranscriptRecord};
use crate::error::{Error, Result};
use crate::hypotheses::{Hypothesis, Label, LabeledExample, Point, VersionSpace};

// child stream ids
const SAMPLER: u64 = 0;
const NOISE: u64 = 1;
const SEARCH: u64 = 2;
const SHADOW: u64 = 3;

fn child(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// LABEL, SEARCH and the unlabeled sampler around a hidden target. Owned
/// by a single run.
#[derive(Clone, Debug)]
pub struct OracleBundle {
    target: Hypothesis,
    noise: NoiseModel,
    policy: SearchPolicy,
    sampler: ChaCha8Rng,
    noise_rng: ChaCha8Rng,
    search_rng: ChaCha8Rng,
    shadow_rng: ChaCha8Rng,
    ledger: QueryLedger,
    transcript: Option<Vec<TranscriptRecord>>,
    check_search: bool,
    unsound_search: u64,
}

impl OracleBundle {
    pub fn new(target: Hypothesis, noise: NoiseModel, seed: u64) -> Result<Self> {
        noise.validate()?;
        Ok(Self {
            target,
            noise,
            policy: SearchPolicy::default(),
            sampler: child(seed, SAMPLER),
            noise_rng: child(seed, NOISE),
            search_rng: child(seed, SEARCH),
            shadow_rng: child(seed, SHADOW),
            ledger: QueryLedger::default(),
            transcript: None,
            check_search: cfg!(debug_assertions),
            unsound_search: 0,
        })
    }

    pub fn realizable(target: Hypothesis, seed: u64) -> Self {
        Self::new(target, NoiseModel::Realizable, seed).expect("realizable noise is valid")
    }

    pub fn with_policy(mut self, policy: SearchPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Result<Self> {
        let fresh = QueryLedger::with_tau(tau)?;
        self.ledger.tau = fresh.tau;
        Ok(self)
    }

    pub fn with_transcript(mut self) -> Self {
        self.transcript = Some(Vec::new());
        self
    }

    /// Verify every SEARCH response against the definition.
    pub fn with_search_checks(mut self, on: bool) -> Self {
        self.check_search = on;
        self
    }

    pub fn target(&self) -> &Hypothesis {
        &self.target
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn policy(&self) -> SearchPolicy {
        self.policy
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn nu(&self) -> f64 {
        self.noise.nu()
    }

    pub fn transcript(&self) -> Option<&[TranscriptRecord]> {
        self.transcript.as_deref()
    }

    /// SEARCH responses that failed the definitional check.
    pub fn unsound_search_responses(&self) -> u64 {
        self.unsound_search
    }

    fn log(&mut self, kind: CallKind, input: serde_json::Value, output: serde_json::Value) {
        if let Some(t) = self.transcript.as_mut() {
            t.push(TranscriptRecord { kind, input, output, ledger: self.ledger });
        }
    }

    /// Uniform draw from `[0,1)`.
    pub fn draw_unlabeled(&mut self) -> Point {
        let x = Point::new(self.sampler.gen::<f64>()).expect("gen::<f64>() lies in [0,1)");
        self.ledger.unlabeled_draws += 1;
        self.log(CallKind::Draw, json!(null), json!(x.get()));
        x
    }

    fn noisy(&self, x: f64, rng_draw: f64) -> Label {
        let clean = self.target.predict_raw(x);
        if rng_draw < self.noise.flip_probability(x) {
            clean.flip()
        } else {
            clean
        }
    }

    pub fn label_query(&mut self, x: Point) -> Label {
        let u = match self.noise {
            NoiseModel::Realizable => 1.0,
            _ => self.noise_rng.gen::<f64>(),
        };
        let y = self.noisy(x.get(), u);
        self.ledger.label_queries += 1;
        self.log(CallKind::Label, json!(x.get()), json!(y.as_i8()));
        y
    }

    /// A LABEL response from an independent stream, not counted in the
    /// ledger. Used to build fully-queried shadow datasets in checks.
    pub fn shadow_label(&mut self, x: Point) -> Label {
        let u = match self.noise {
            NoiseModel::Realizable => 1.0,
            _ => self.shadow_rng.gen::<f64>(),
        };
        self.noisy(x.get(), u)
    }

    /// `SEARCH_{H_k}(V)`; `None` is ⊥. The label is always the target's.
    pub fn search_query(&mut self, k: usize, v: &VersionSpace) -> Result<Option<LabeledExample>> {
        self.search_with(k, v, find_counterexample)
    }

    /// SEARCH with a caller-supplied selection rule; used to inject faulty
    /// oracles in negative-control tests.
    pub fn search_with<F>(&mut self, k: usize, v: &VersionSpace, select: F) -> Result<Option<LabeledExample>>
    where
        F: FnOnce(&VersionSpace, &Hypothesis, SearchPolicy, &mut ChaCha8Rng) -> Result<Option<LabeledExample>>,
    {
        let out = select(v, &self.target, self.policy, &mut self.search_rng)?;
        self.ledger.search_queries += 1;
        if let Some(e) = &out {
            if self.check_search && !v.is_empty() && !check_counterexample(v, &self.target, e) {
                self.unsound_search += 1;
            }
        }
        let output = match &out {
            Some(e) => json!({"x": e.x.get(), "y": e.y.as_i8()}),
            None => json!(null),
        };
        self.log(CallKind::Search, json!({"k": k}), output);
        Ok(out)
    }

    pub fn true_error(&self, h: &Hypothesis) -> f64 {
        self.noise.true_error(h, &self.target)
    }

    /// Exact `Pr[h(x) != y, x ∈ region]`.
    pub fn restricted_error(&self, h: &Hypothesis, region: &[(f64, f64)]) -> f64 {
        self.noise.restricted_error(h, &self.target, region)
    }

    /// Exact `Pr[h*(x) != y, x ∈ region]`.
    pub fn target_flip_mass(&self, region: &[(f64, f64)]) -> f64 {
        self.noise.flip_mass(region)
    }

    pub fn require_realizable(&self, what: &str) -> Result<()> {
        match self.noise {
            NoiseModel::Realizable => Ok(()),
            _ => Err(Error::Contract(format!("{what} requires a realizable LABEL oracle"))),
        }
    }
}
