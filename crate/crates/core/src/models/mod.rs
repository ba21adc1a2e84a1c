//! Classifier definitions: the hashtag self-attention encoder plus two text
//! bodies with deliberately different receptive fields.
//!
//! Both classifiers embed the tweet's hashtags and aggregate them with
//! scaled-dot-product-style attention into a vector `Z_H`. The convolutional
//! body runs three branches (window sizes 1, 3 and 5) of three
//! conv+ReLU+max-pool blocks over the token embeddings and global-max-pools
//! each branch; the recurrent body runs a bidirectional LSTM and max-pools
//! the per-position states. The hashtag vector and body output are
//! concatenated, layer-normalized and mapped to stance probabilities by an
//! affine layer with softmax.
//!
//! Forward passes record every intermediate needed for an exact analytic
//! backward pass; gradients accumulate into a flat buffer aligned with the
//! parameter arena.

mod attention;
mod blstm;
mod checkpoint;
mod conv;
mod head;
mod init;

pub use checkpoint::{read_params, write_params, Container, Section};
pub use init::{init_params, load_word_vectors};

use crate::corpus::{EncodedTweet, PAD_ID};
use crate::nn::{Gradients, ParamArena, TensorId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Convolution window sizes, one per branch.
pub const CONV_WINDOWS: [usize; 3] = [1, 3, 5];

/// Which text body a classifier uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassifierKind {
    /// Local context: stacked 1-d convolutions.
    Conv,
    /// Global context: bidirectional LSTM.
    Blstm,
}

impl ClassifierKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassifierKind::Conv => "conv",
            ClassifierKind::Blstm => "blstm",
        }
    }

    pub fn parse(s: &str) -> Option<ClassifierKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conv" | "convnet" => Some(ClassifierKind::Conv),
            "blstm" | "bilstm" | "bi-lstm" => Some(ClassifierKind::Blstm),
            _ => None,
        }
    }
}

/// Model width hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelDims {
    /// Word embedding dimension.
    pub word_dim: usize,
    /// Hashtag embedding dimension.
    pub hashtag_dim: usize,
    /// Query/key/value dimension of the hashtag attention (also `|Z_H|`).
    pub attn_dim: usize,
    /// Filter counts of the three successive conv blocks in every branch.
    pub conv_filters: [usize; 3],
    /// LSTM hidden size per direction.
    pub lstm_hidden: usize,
    /// Number of stance labels.
    pub label_count: usize,
    /// Divide attention scores by sqrt(attn_dim). The printed formula is
    /// unscaled; this switch exists for sensitivity runs.
    pub scaled_attention: bool,
}

impl ModelDims {
    /// Dimension of the concatenated feature vector entering layer norm.
    pub fn concat_dim(&self, kind: ClassifierKind) -> usize {
        match kind {
            ClassifierKind::Conv => self.attn_dim + 3 * self.conv_filters[2],
            ClassifierKind::Blstm => self.attn_dim + 2 * self.lstm_hidden,
        }
    }
}

/// Forward-pass mode: inference is deterministic and dropout-free.
#[derive(Debug, Clone, Copy)]
pub enum Mode {
    Infer,
    Train { dropout: f64, seed: u64 },
}

/// A stance probability vector over the label set.
#[derive(Debug, Clone, PartialEq)]
pub struct StanceDistribution(pub Vec<f64>);

impl StanceDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    /// Predicted class, lowest index on ties.
    pub fn argmax(&self) -> usize {
        crate::nn::ops::argmax(&self.0)
    }
}

pub(crate) struct AttentionIds {
    pub wq: TensorId,
    pub bq: TensorId,
    pub wk: TensorId,
    pub bk: TensorId,
    pub wv: TensorId,
    pub bv: TensorId,
}

pub(crate) struct ConvBlockIds {
    pub w: TensorId, // (filters_out, filters_in * window)
    pub b: TensorId,
}

pub(crate) struct LstmIds {
    pub wx: TensorId, // (4*hidden, input_dim), gate order [i f g o]
    pub wh: TensorId, // (4*hidden, hidden)
    pub b: TensorId,  // (4*hidden)
}

pub(crate) enum BodyIds {
    Conv {
        branches: Vec<[ConvBlockIds; 3]>,
    },
    Blstm {
        fwd: LstmIds,
        bwd: LstmIds,
    },
}

pub(crate) struct HeadIds {
    pub ln_gain: TensorId,
    pub ln_bias: TensorId,
    pub wp: TensorId, // (label_count, concat_dim)
    pub bp: TensorId,
}

/// All learnable tensors of one classifier.
pub struct ClassifierParams {
    pub kind: ClassifierKind,
    pub dims: ModelDims,
    pub arena: ParamArena,
    pub(crate) word_emb: TensorId,
    pub(crate) hashtag_emb: TensorId,
    pub(crate) attn: AttentionIds,
    pub(crate) body: BodyIds,
    pub(crate) head: HeadIds,
}

impl Clone for ClassifierParams {
    fn clone(&self) -> Self {
        // TensorIds are indices into the arena entry table, which the fresh
        // allocation reproduces in the same order.
        let mut copy = ClassifierParams::new(self.kind, self.dims, self.word_rows(), self.hashtag_rows());
        copy.arena.data_mut().copy_from_slice(self.arena.data());
        copy
    }
}

impl ClassifierParams {
    /// Allocate zero-initialized parameters with the given embedding table
    /// row counts (vocabulary size plus the two reserved rows).
    pub fn new(kind: ClassifierKind, dims: ModelDims, word_rows: usize, hashtag_rows: usize) -> Self {
        let mut arena = ParamArena::new();
        let word_emb = arena.alloc("word_embedding", word_rows, dims.word_dim);
        let hashtag_emb = arena.alloc("hashtag_embedding", hashtag_rows, dims.hashtag_dim);
        let attn = AttentionIds {
            wq: arena.alloc("attn.wq", dims.attn_dim, dims.hashtag_dim),
            bq: arena.alloc("attn.bq", 1, dims.attn_dim),
            wk: arena.alloc("attn.wk", dims.attn_dim, dims.hashtag_dim),
            bk: arena.alloc("attn.bk", 1, dims.attn_dim),
            wv: arena.alloc("attn.wv", dims.attn_dim, dims.hashtag_dim),
            bv: arena.alloc("attn.bv", 1, dims.attn_dim),
        };
        let body = match kind {
            ClassifierKind::Conv => {
                let mut branches = Vec::new();
                for (bi, window) in CONV_WINDOWS.iter().enumerate() {
                    let mut blocks = Vec::new();
                    let mut in_ch = dims.word_dim;
                    for (li, &out_ch) in dims.conv_filters.iter().enumerate() {
                        blocks.push(ConvBlockIds {
                            w: arena.alloc(&format!("conv.b{bi}.w{li}"), out_ch, in_ch * window),
                            b: arena.alloc(&format!("conv.b{bi}.bias{li}"), 1, out_ch),
                        });
                        in_ch = out_ch;
                    }
                    let blocks: [ConvBlockIds; 3] = blocks.try_into().map_err(|_| ()).unwrap();
                    branches.push(blocks);
                }
                BodyIds::Conv { branches }
            }
            ClassifierKind::Blstm => {
                let h = dims.lstm_hidden;
                let alloc_dir = |arena: &mut ParamArena, tag: &str| LstmIds {
                    wx: arena.alloc(&format!("lstm.{tag}.wx"), 4 * h, dims.word_dim),
                    wh: arena.alloc(&format!("lstm.{tag}.wh"), 4 * h, h),
                    b: arena.alloc(&format!("lstm.{tag}.bias"), 1, 4 * h),
                };
                let fwd = alloc_dir(&mut arena, "fwd");
                let bwd = alloc_dir(&mut arena, "bwd");
                BodyIds::Blstm { fwd, bwd }
            }
        };
        let concat = dims.concat_dim(kind);
        let head = HeadIds {
            ln_gain: arena.alloc("ln.gain", 1, concat),
            ln_bias: arena.alloc("ln.bias", 1, concat),
            wp: arena.alloc("pred.w", dims.label_count, concat),
            bp: arena.alloc("pred.b", 1, dims.label_count),
        };
        ClassifierParams {
            kind,
            dims,
            arena,
            word_emb,
            hashtag_emb,
            attn,
            body,
            head,
        }
    }

    pub fn word_rows(&self) -> usize {
        self.arena.entry(self.word_emb).rows
    }

    pub fn hashtag_rows(&self) -> usize {
        self.arena.entry(self.hashtag_emb).rows
    }

    pub fn param_count(&self) -> usize {
        self.arena.len()
    }

    /// Full forward pass over raw id sequences, keeping the caches needed
    /// for [`ClassifierParams::backward`]. Padding ids are masked out of
    /// attention, convolution, recurrence and every pooling step.
    pub fn forward_ids(&self, word_ids: &[u32], hashtag_ids: &[u32], mode: Mode) -> ForwardPass {
        let mut dropout = DropoutCtx::new(mode);
        let attn = attention::forward(self, hashtag_ids, &mut dropout);
        let body = match &self.body {
            BodyIds::Conv { branches } => conv::forward(self, branches, word_ids, &mut dropout),
            BodyIds::Blstm { fwd, bwd } => blstm::forward(self, fwd, bwd, word_ids, &mut dropout),
        };
        let mut concat = Vec::with_capacity(self.dims.concat_dim(self.kind));
        concat.extend_from_slice(&attn.zh);
        match &body {
            BodyCache::Conv(c) => {
                for branch in &c.branches {
                    concat.extend_from_slice(&branch.out);
                }
            }
            BodyCache::Blstm(c) => concat.extend_from_slice(&c.zb),
        }
        let head = head::forward(self, concat, &mut dropout);
        ForwardPass { attn, body, head }
    }

    /// Forward pass over an encoded tweet.
    pub fn forward(&self, tweet: &EncodedTweet, mode: Mode) -> ForwardPass {
        self.forward_ids(&tweet.word_ids, &tweet.hashtag_ids, mode)
    }

    /// Stance probabilities for a tweet.
    pub fn classify(&self, tweet: &EncodedTweet, mode: Mode) -> StanceDistribution {
        StanceDistribution(self.forward(tweet, mode).head.probs.clone())
    }

    /// Backpropagate from a gradient on the logits, accumulating parameter
    /// gradients. For a weighted cross-entropy term `-w * Σ t_j ln p_j` the
    /// logit gradient is `w * (p - t)`.
    pub fn backward(&self, pass: &ForwardPass, d_logits: &[f64], grads: &mut Gradients) {
        let d_concat = head::backward(self, &pass.head, d_logits, grads);
        let attn_dim = self.dims.attn_dim;
        attention::backward(self, &pass.attn, &d_concat[..attn_dim], grads);
        match (&self.body, &pass.body) {
            (BodyIds::Conv { branches }, BodyCache::Conv(cache)) => {
                conv::backward(self, branches, cache, &d_concat[attn_dim..], grads);
            }
            (BodyIds::Blstm { fwd, bwd }, BodyCache::Blstm(cache)) => {
                blstm::backward(self, fwd, bwd, cache, &d_concat[attn_dim..], grads);
            }
            _ => unreachable!("body cache kind matches params kind"),
        }
    }
}

/// Hashtag encoder output for an id sequence, inference mode.
pub fn encode_hashtags(hashtag_ids: &[u32], params: &ClassifierParams) -> Vec<f64> {
    let mut dropout = DropoutCtx::new(Mode::Infer);
    attention::forward(params, hashtag_ids, &mut dropout).zh
}

/// Everything a forward pass computed, including backward caches.
pub struct ForwardPass {
    pub(crate) attn: attention::AttnCache,
    pub(crate) body: BodyCache,
    pub(crate) head: head::HeadCache,
}

impl ForwardPass {
    pub fn probs(&self) -> &[f64] {
        &self.head.probs
    }

    pub fn distribution(&self) -> StanceDistribution {
        StanceDistribution(self.head.probs.clone())
    }
}

pub(crate) enum BodyCache {
    Conv(conv::ConvCache),
    Blstm(blstm::BlstmCache),
}

/// Keep only the positions whose id is not padding.
pub(crate) fn real_ids(ids: &[u32]) -> Vec<u32> {
    ids.iter().copied().filter(|&id| id != PAD_ID).collect()
}

/// Scaled inverted-dropout masks, deterministic given the mode seed. Mask
/// draws happen in a fixed order within a forward pass.
pub(crate) struct DropoutCtx {
    rng: Option<ChaCha8Rng>,
    p: f64,
}

pub(crate) type DropMask = Option<Vec<f64>>;

impl DropoutCtx {
    fn new(mode: Mode) -> Self {
        match mode {
            Mode::Infer => DropoutCtx { rng: None, p: 0.0 },
            Mode::Train { dropout, seed } => {
                let rng = if dropout > 0.0 {
                    Some(crate::seed::rng(seed, &[0xd20b]))
                } else {
                    None
                };
                DropoutCtx { rng, p: dropout }
            }
        }
    }

    /// Apply dropout in place, returning the scaled mask when active.
    pub(crate) fn apply(&mut self, x: &mut [f64]) -> DropMask {
        let Some(rng) = self.rng.as_mut() else {
            return None;
        };
        let keep_scale = 1.0 / (1.0 - self.p);
        let mask: Vec<f64> = x
            .iter()
            .map(|_| if rng.gen::<f64>() < self.p { 0.0 } else { keep_scale })
            .collect();
        for (v, m) in x.iter_mut().zip(&mask) {
            *v *= m;
        }
        Some(mask)
    }
}

/// d_in = d_out ⊙ mask (identity when dropout was inactive).
pub(crate) fn dropout_backward(mask: &DropMask, d: &mut [f64]) {
    if let Some(m) = mask {
        for (v, s) in d.iter_mut().zip(m) {
            *v *= s;
        }
    }
}
