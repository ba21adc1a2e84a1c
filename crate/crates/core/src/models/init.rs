//! Parameter initialization.
//!
//! Word embeddings start from a pretrained vector file where available and
//! uniform noise in [-0.05, 0.05] otherwise; hashtag embeddings are always
//! random. Non-embedding weights use fan-in-scaled uniform initialization,
//! biases start at zero except the LSTM forget gate (1.0) and the layer-norm
//! gain (1.0). Everything is a deterministic function of the seed.

use super::{BodyIds, ClassifierKind, ClassifierParams, ModelDims};
use crate::corpus::Vocabulary;
use crate::error::Error;
use crate::nn::TensorId;
use crate::Result;
use rand::Rng;
use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

const EMBED_RANGE: f64 = 0.05;

/// Parse a word2vec-style text file: `word v1 ... vN` per line. Vectors with
/// a dimension other than `expected_dim` are an error.
pub fn load_word_vectors(path: &Path, expected_dim: usize) -> Result<HashMap<String, Vec<f64>>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut vectors = HashMap::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let Some(word) = fields.next() else { continue };
        let values: std::result::Result<Vec<f64>, _> = fields.map(str::parse).collect();
        let values = values
            .map_err(|_| Error::parse(path, lineno + 1, "non-numeric vector component"))?;
        if values.len() != expected_dim {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("vector has dimension {}, expected {expected_dim}", values.len()),
            ));
        }
        vectors.insert(word.to_string(), values);
    }
    Ok(vectors)
}

/// Initialize one classifier's parameters.
///
/// The RNG is consumed in a fixed tensor order regardless of which rows the
/// pretrained file overrides, so the same seed always yields the same draws.
pub fn init_params(
    kind: ClassifierKind,
    dims: ModelDims,
    vocab: &Vocabulary,
    pretrained: Option<&HashMap<String, Vec<f64>>>,
    seed: u64,
) -> ClassifierParams {
    let mut params = ClassifierParams::new(kind, dims, vocab.word_rows(), vocab.hashtag_rows());
    let mut rng = crate::seed::rng(seed, &[0x1417]);

    let uniform = |rng: &mut rand_chacha::ChaCha8Rng, limit: f64, slice: &mut [f64]| {
        for v in slice.iter_mut() {
            *v = rng.gen_range(-limit..=limit);
        }
    };

    // Embedding tables: draw everything, then freeze the padding row at zero
    // and overwrite rows the pretrained file covers.
    let word_emb = params.word_emb;
    let hashtag_emb = params.hashtag_emb;
    uniform(&mut rng, EMBED_RANGE, params.arena.slice_mut(word_emb));
    uniform(&mut rng, EMBED_RANGE, params.arena.slice_mut(hashtag_emb));
    zero_row(&mut params, word_emb, 0);
    zero_row(&mut params, hashtag_emb, 0);
    if let Some(pretrained) = pretrained {
        let dw = dims.word_dim;
        for (word, &id) in &vocab.word_index {
            if let Some(vector) = pretrained.get(word) {
                let row = id as usize;
                params.arena.slice_mut(word_emb)[row * dw..(row + 1) * dw].copy_from_slice(vector);
            }
        }
    }

    let fan_in_init = |params: &mut ClassifierParams, rng: &mut rand_chacha::ChaCha8Rng, id: TensorId| {
        let fan_in = params.arena.entry(id).cols;
        let limit = (1.0 / fan_in as f64).sqrt();
        uniform(rng, limit, params.arena.slice_mut(id));
    };

    for id in [params.attn.wq, params.attn.wk, params.attn.wv] {
        fan_in_init(&mut params, &mut rng, id);
    }

    match &params.body {
        BodyIds::Conv { branches } => {
            let weight_ids: Vec<TensorId> = branches
                .iter()
                .flat_map(|blocks| blocks.iter().map(|b| b.w))
                .collect();
            for id in weight_ids {
                fan_in_init(&mut params, &mut rng, id);
            }
        }
        BodyIds::Blstm { fwd, bwd } => {
            let ids = [fwd.wx, fwd.wh, fwd.b, bwd.wx, bwd.wh, bwd.b];
            let h = dims.lstm_hidden;
            for id in [ids[0], ids[1]] {
                fan_in_init(&mut params, &mut rng, id);
            }
            set_forget_bias(&mut params, ids[2], h);
            for id in [ids[3], ids[4]] {
                fan_in_init(&mut params, &mut rng, id);
            }
            set_forget_bias(&mut params, ids[5], h);
        }
    }

    let gain = params.head.ln_gain;
    params.arena.slice_mut(gain).fill(1.0);
    let wp = params.head.wp;
    fan_in_init(&mut params, &mut rng, wp);

    params
}

fn zero_row(params: &mut ClassifierParams, id: TensorId, row: usize) {
    let cols = params.arena.entry(id).cols;
    params.arena.slice_mut(id)[row * cols..(row + 1) * cols].fill(0.0);
}

fn set_forget_bias(params: &mut ClassifierParams, id: TensorId, h: usize) {
    params.arena.slice_mut(id)[h..2 * h].fill(1.0);
}
