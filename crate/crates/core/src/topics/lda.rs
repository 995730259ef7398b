//! Latent Dirichlet allocation fitted by collapsed Gibbs sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::corpus::Corpus;
use crate::error::{Error, Result};

pub const DEFAULT_TOPICS: usize = 5;
pub const DEFAULT_TOP_WORDS: usize = 10;
pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LdaParams {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LdaParams {
    fn default() -> Self {
        LdaParams {
            k: DEFAULT_TOPICS,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            seed: 0,
        }
    }
}

impl LdaParams {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.k == 0 {
            problems.push("topic count must be >= 1".to_string());
        }
        if self.iterations == 0 {
            problems.push("iterations must be >= 1".to_string());
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{name} must be > 0, got {v}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}

/// Fitted state: count matrices plus the final topic assignment of every
/// token. Distributions are derived from counts on demand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicModel {
    pub params: LdaParams,
    pub vocabulary: Vec<String>,
    /// K x V.
    pub topic_word_counts: Vec<Vec<u32>>,
    pub topic_totals: Vec<u64>,
    /// D x K.
    pub doc_topic_counts: Vec<Vec<u32>>,
    pub assignments: Vec<Vec<usize>>,
}

impl TopicModel {
    pub fn num_topics(&self) -> usize {
        self.params.k
    }

    pub fn num_docs(&self) -> usize {
        self.doc_topic_counts.len()
    }

    /// phi_k(w) = (n_kw + beta) / (n_k + beta V)
    pub fn phi(&self, topic: usize) -> Vec<f64> {
        let v = self.vocabulary.len() as f64;
        let beta = self.params.beta;
        let denom = self.topic_totals[topic] as f64 + beta * v;
        self.topic_word_counts[topic]
            .iter()
            .map(|&c| (c as f64 + beta) / denom)
            .collect()
    }

    /// theta_d(k) = (n_dk + alpha) / (len_d + alpha K)
    pub fn theta(&self, doc: usize) -> Vec<f64> {
        let alpha = self.params.alpha;
        let row = &self.doc_topic_counts[doc];
        let len: u64 = row.iter().map(|&c| c as u64).sum();
        let denom = len as f64 + alpha * self.params.k as f64;
        row.iter().map(|&c| (c as f64 + alpha) / denom).collect()
    }
}

/// Sampler state between sweeps, exposed so callers can check invariants
/// while fitting.
pub struct GibbsSampler<'c> {
    corpus: &'c Corpus,
    params: LdaParams,
    rng: ChaCha8Rng,
    topic_word: Vec<Vec<u32>>,
    topic_totals: Vec<u64>,
    doc_topic: Vec<Vec<u32>>,
    z: Vec<Vec<usize>>,
    weights: Vec<f64>,
    sweeps: usize,
}

impl<'c> GibbsSampler<'c> {
    /// Assigns every token a uniformly random initial topic.
    pub fn new(corpus: &'c Corpus, params: LdaParams) -> Result<Self> {
        params.validate()?;
        let (k, v) = (params.k, corpus.vocab_size());
        if v < k {
            log::warn!(
                "vocabulary of '{}' has {v} terms for {k} topics; some topics will be degenerate",
                corpus.provenance
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut topic_word = vec![vec![0u32; v]; k];
        let mut topic_totals = vec![0u64; k];
        let mut doc_topic = vec![vec![0u32; k]; corpus.num_docs()];
        let mut z = Vec::with_capacity(corpus.num_docs());
        for (d, doc) in corpus.docs.iter().enumerate() {
            let zd: Vec<usize> = doc
                .iter()
                .map(|&w| {
                    let t = rng.gen_range(0..k);
                    topic_word[t][w] += 1;
                    topic_totals[t] += 1;
                    doc_topic[d][t] += 1;
                    t
                })
                .collect();
            z.push(zd);
        }
        Ok(GibbsSampler {
            corpus,
            params,
            rng,
            topic_word,
            topic_totals,
            doc_topic,
            z,
            weights: vec![0.0; k],
            sweeps: 0,
        })
    }

    /// Resamples the topic of every token once, in document then position
    /// order.
    pub fn sweep(&mut self) {
        let k = self.params.k;
        let (alpha, beta) = (self.params.alpha, self.params.beta);
        let beta_v = beta * self.corpus.vocab_size() as f64;
        for (d, doc) in self.corpus.docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let old = self.z[d][i];
                self.topic_word[old][w] -= 1;
                self.topic_totals[old] -= 1;
                self.doc_topic[d][old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    let p = (self.doc_topic[d][t] as f64 + alpha)
                        * (self.topic_word[t][w] as f64 + beta)
                        / (self.topic_totals[t] as f64 + beta_v);
                    total += p;
                    self.weights[t] = total;
                }
                let u = self.rng.gen::<f64>() * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(k - 1);

                self.z[d][i] = new;
                self.topic_word[new][w] += 1;
                self.topic_totals[new] += 1;
                self.doc_topic[d][new] += 1;
            }
        }
        self.sweeps += 1;
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Checks that the count matrices agree with the assignments and the
    /// corpus. Returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let k = self.params.k;
        let mut tw = vec![vec![0u32; self.corpus.vocab_size()]; k];
        for (d, doc) in self.corpus.docs.iter().enumerate() {
            let mut dt = vec![0u32; k];
            for (i, &w) in doc.iter().enumerate() {
                let t = self.z[d][i];
                if t >= k {
                    return Err(format!("doc {d} token {i} has topic {t} >= {k}"));
                }
                dt[t] += 1;
                tw[t][w] += 1;
            }
            if dt != self.doc_topic[d] {
                return Err(format!(
                    "doc-topic counts of doc {d} disagree with assignments"
                ));
            }
            let row_sum: usize = self.doc_topic[d].iter().map(|&c| c as usize).sum();
            if row_sum != doc.len() {
                return Err(format!(
                    "doc {d}: row sum {row_sum} != length {}",
                    doc.len()
                ));
            }
        }
        if tw != self.topic_word {
            return Err("topic-word counts disagree with assignments".into());
        }
        for t in 0..k {
            let col: u64 = self.topic_word[t].iter().map(|&c| c as u64).sum();
            let from_docs: u64 = self.doc_topic.iter().map(|r| r[t] as u64).sum();
            if col != self.topic_totals[t] || col != from_docs {
                return Err(format!(
                    "topic {t}: word total {col}, cached {}, doc total {from_docs}",
                    self.topic_totals[t]
                ));
            }
        }
        let total: u64 = self.topic_totals.iter().sum();
        if total != self.corpus.num_tokens() as u64 {
            return Err(format!(
                "{total} assigned tokens, corpus has {}",
                self.corpus.num_tokens()
            ));
        }
        Ok(())
    }

    pub fn into_model(self) -> TopicModel {
        TopicModel {
            params: LdaParams {
                iterations: self.sweeps,
                ..self.params
            },
            vocabulary: self.corpus.vocabulary.clone(),
            topic_word_counts: self.topic_word,
            topic_totals: self.topic_totals,
            doc_topic_counts: self.doc_topic,
            assignments: self.z,
        }
    }
}

/// Runs `params.iterations` sweeps and keeps the final sample.
pub fn lda_fit(corpus: &Corpus, params: LdaParams) -> Result<TopicModel> {
    let mut sampler = GibbsSampler::new(corpus, params)?;
    for _ in 0..params.iterations {
        sampler.sweep();
    }
    debug_assert!(sampler.check_invariants().is_ok());
    Ok(sampler.into_model())
}

/// The `n` highest-weight terms of a topic, weights descending, ties by term.
pub fn top_keywords(model: &TopicModel, topic: usize, n: usize) -> Vec<(String, f64)> {
    let phi = model.phi(topic);
    let mut ranked: Vec<(usize, f64)> = phi.into_iter().enumerate().collect();
    ranked.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| model.vocabulary[a.0].cmp(&model.vocabulary[b.0]))
    });
    ranked
        .into_iter()
        .take(n)
        .map(|(w, p)| (model.vocabulary[w].clone(), p))
        .collect()
}

pub fn doc_topics(model: &TopicModel, doc: usize) -> Vec<f64> {
    model.theta(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(docs: &[&[&str]]) -> Corpus {
        let owned: Vec<(String, Vec<String>)> = docs
            .iter()
            .enumerate()
            .map(|(i, d)| (i.to_string(), d.iter().map(|s| s.to_string()).collect()))
            .collect();
        Corpus::from_token_docs(
            owned.iter().map(|(i, t)| (i.as_str(), t.as_slice())),
            1,
            "t",
        )
        .unwrap()
    }

    fn params(k: usize) -> LdaParams {
        LdaParams {
            k,
            alpha: 0.1,
            beta: 0.01,
            iterations: 20,
            seed: 7,
        }
    }

    #[test]
    fn single_topic_is_smoothed_unigram() {
        let c = corpus(&[&["a", "b", "a"], &["c", "a"]]);
        let m = lda_fit(&c, params(1)).unwrap();
        assert!(m.assignments.iter().flatten().all(|&t| t == 0));
        let phi = m.phi(0);
        let denom = 5.0 + 0.01 * 3.0;
        assert!((phi[0] - 3.01 / denom).abs() < 1e-15);
        assert!((phi[2] - 1.01 / denom).abs() < 1e-15);
        assert_eq!(doc_topics(&m, 0), [1.0]);
    }

    #[test]
    fn symmetric_words_tie() {
        let c = corpus(&[&["x", "y"], &["y", "x"]]);
        let m = lda_fit(&c, params(1)).unwrap();
        let kw = top_keywords(&m, 0, 2);
        assert_eq!(kw[0].1, kw[1].1);
        assert_eq!(kw[0].0, "x");
        assert!((kw.iter().map(|p| p.1).sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn theta_by_hand() {
        let c = corpus(&[&["a"; 10]]);
        let mut m = lda_fit(&c, params(5)).unwrap();
        m.doc_topic_counts[0] = vec![0, 0, 10, 0, 0];
        let theta = doc_topics(&m, 0);
        assert!((theta[2] - 10.1 / 10.5).abs() < 1e-12);
        assert!((theta.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn invariants_hold_every_sweep() {
        let c = corpus(&[&["a", "b", "c"], &["c", "d"], &["a", "e", "e", "f"]]);
        let mut s = GibbsSampler::new(&c, params(3)).unwrap();
        s.check_invariants().unwrap();
        for _ in 0..10 {
            s.sweep();
            s.check_invariants().unwrap();
        }
        assert_eq!(s.sweeps(), 10);
    }

    #[test]
    fn same_seed_same_model() {
        let c = corpus(&[&["a", "b", "c"], &["c", "d"], &["a", "e", "e", "f"]]);
        assert_eq!(
            lda_fit(&c, params(2)).unwrap(),
            lda_fit(&c, params(2)).unwrap()
        );
    }

    #[test]
    fn bad_params_rejected() {
        let c = corpus(&[&["a"]]);
        for p in [
            LdaParams { k: 0, ..params(1) },
            LdaParams {
                alpha: 0.0,
                ..params(1)
            },
            LdaParams {
                beta: -1.0,
                ..params(1)
            },
            LdaParams {
                iterations: 0,
                ..params(1)
            },
        ] {
            assert!(matches!(lda_fit(&c, p), Err(Error::Config(_))));
        }
        // fewer terms than topics only warns
        assert!(lda_fit(&c, params(3)).is_ok());
    }
}
