//! Independent forward-pass oracles and gradient checks for both classifier
//! bodies.
//!
//! The oracle below re-implements the forward arithmetic from scratch with
//! naive scalar code over `Vec<Vec<f64>>`, reading tensors from the parameter
//! arena only through their public names and documented layouts. It shares no
//! code with the production forward pass.

use sands_core::corpus::Vocabulary;
use sands_core::models::{init_params, ClassifierKind, ClassifierParams, Mode, ModelDims};

fn tiny_dims() -> ModelDims {
    ModelDims {
        word_dim: 4,
        hashtag_dim: 3,
        attn_dim: 3,
        conv_filters: [2, 2, 2],
        lstm_hidden: 2,
        label_count: 3,
        scaled_attention: false,
    }
}

fn tiny_vocab() -> Vocabulary {
    let word_entries: Vec<(String, u32, u64)> = ["aa", "bb", "cc"]
        .iter()
        .enumerate()
        .map(|(i, w)| (w.to_string(), 2 + i as u32, 5))
        .collect();
    let hashtag_entries: Vec<(String, u32, u64)> = ["xx", "yy"]
        .iter()
        .enumerate()
        .map(|(i, w)| (w.to_string(), 2 + i as u32, 7))
        .collect();
    Vocabulary {
        word_index: word_entries.iter().map(|(w, i, _)| (w.clone(), *i)).collect(),
        hashtag_index: hashtag_entries.iter().map(|(w, i, _)| (w.clone(), *i)).collect(),
        max_tweet_len: 6,
        max_hashtag_len: 4,
        word_entries,
        hashtag_entries,
    }
}

/// Naive re-implementation of the forward pass.
mod oracle {
    use sands_core::models::{ClassifierKind, ClassifierParams};

    pub struct Extracted {
        pub word_emb: Vec<Vec<f64>>,
        pub hash_emb: Vec<Vec<f64>>,
        pub wq: Vec<Vec<f64>>,
        pub bq: Vec<f64>,
        pub wk: Vec<Vec<f64>>,
        pub bk: Vec<f64>,
        pub wv: Vec<Vec<f64>>,
        pub bv: Vec<f64>,
        pub ln_gain: Vec<f64>,
        pub ln_bias: Vec<f64>,
        pub wp: Vec<Vec<f64>>,
        pub bp: Vec<f64>,
    }

    pub fn matrix(params: &ClassifierParams, name: &str) -> Vec<Vec<f64>> {
        let id = params.arena.by_name(name).unwrap_or_else(|| panic!("missing tensor {name}"));
        let entry = params.arena.entry(id);
        let flat = params.arena.slice(id);
        (0..entry.rows)
            .map(|r| flat[r * entry.cols..(r + 1) * entry.cols].to_vec())
            .collect()
    }

    pub fn vector(params: &ClassifierParams, name: &str) -> Vec<f64> {
        matrix(params, name).remove(0)
    }

    pub fn extract(params: &ClassifierParams) -> Extracted {
        Extracted {
            word_emb: matrix(params, "word_embedding"),
            hash_emb: matrix(params, "hashtag_embedding"),
            wq: matrix(params, "attn.wq"),
            bq: vector(params, "attn.bq"),
            wk: matrix(params, "attn.wk"),
            bk: vector(params, "attn.bk"),
            wv: matrix(params, "attn.wv"),
            bv: vector(params, "attn.bv"),
            ln_gain: vector(params, "ln.gain"),
            ln_bias: vector(params, "ln.bias"),
            wp: matrix(params, "pred.w"),
            bp: vector(params, "pred.b"),
        }
    }

    fn affine_relu(w: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(w.len());
        for (row, bias) in w.iter().zip(b) {
            let mut acc = *bias;
            for (wi, xi) in row.iter().zip(x) {
                acc += wi * xi;
            }
            out.push(if acc > 0.0 { acc } else { 0.0 });
        }
        out
    }

    /// Attention over real hashtag ids; also returns the attention rows so
    /// the normalization invariant can be checked from outside.
    pub fn hashtag_encoder(
        ex: &Extracted,
        ids: &[u32],
        scaled: bool,
    ) -> (Vec<f64>, Vec<Vec<f64>>) {
        let real: Vec<usize> = ids.iter().filter(|&&i| i != 0).map(|&i| i as usize).collect();
        let attn_dim = ex.bq.len();
        if real.is_empty() {
            return (vec![0.0; attn_dim], Vec::new());
        }
        let xs: Vec<Vec<f64>> = real.iter().map(|&i| ex.hash_emb[i].clone()).collect();
        let q: Vec<Vec<f64>> = xs.iter().map(|x| affine_relu(&ex.wq, &ex.bq, x)).collect();
        let k: Vec<Vec<f64>> = xs.iter().map(|x| affine_relu(&ex.wk, &ex.bk, x)).collect();
        let v: Vec<Vec<f64>> = xs.iter().map(|x| affine_relu(&ex.wv, &ex.bv, x)).collect();
        let scale = if scaled { 1.0 / (attn_dim as f64).sqrt() } else { 1.0 };

        let mut alpha = Vec::new();
        for qi in &q {
            let scores: Vec<f64> = k
                .iter()
                .map(|kj| scale * qi.iter().zip(kj).map(|(a, b)| a * b).sum::<f64>())
                .collect();
            let denom: f64 = scores.iter().map(|s| s.exp()).sum();
            alpha.push(scores.iter().map(|s| s.exp() / denom).collect::<Vec<f64>>());
        }

        let mut zh = vec![f64::NEG_INFINITY; attn_dim];
        for (i, arow) in alpha.iter().enumerate() {
            let _ = i;
            let mut mixed = vec![0.0; attn_dim];
            for (aj, vj) in arow.iter().zip(&v) {
                for d in 0..attn_dim {
                    mixed[d] += aj * vj[d];
                }
            }
            for d in 0..attn_dim {
                if mixed[d] > zh[d] {
                    zh[d] = mixed[d];
                }
            }
        }
        (zh, alpha)
    }

    fn conv_branch(
        emb: &[Vec<f64>],
        params: &ClassifierParams,
        branch: usize,
        window: usize,
        filters: [usize; 3],
    ) -> Vec<f64> {
        if emb.is_empty() {
            return vec![0.0; filters[2]];
        }
        let mut map: Vec<Vec<f64>> = emb.to_vec();
        for block in 0..3 {
            let w = matrix(params, &format!("conv.b{branch}.w{block}"));
            let b = vector(params, &format!("conv.b{branch}.bias{block}"));
            let ch_in = map[0].len();
            let ch_out = filters[block];
            let pad = (window - 1) / 2;
            // Convolution with same padding, then ReLU.
            let mut conved: Vec<Vec<f64>> = Vec::new();
            for t in 0..map.len() {
                let mut row = Vec::with_capacity(ch_out);
                for o in 0..ch_out {
                    let mut acc = b[o];
                    for j in 0..window {
                        let src = t as isize + j as isize - pad as isize;
                        if src < 0 || src >= map.len() as isize {
                            continue;
                        }
                        for c in 0..ch_in {
                            acc += w[o][j * ch_in + c] * map[src as usize][c];
                        }
                    }
                    row.push(acc.max(0.0));
                }
                conved.push(row);
            }
            // Max-pool window 2, stride 2, keeping a partial final window.
            let mut pooled: Vec<Vec<f64>> = Vec::new();
            let mut t = 0;
            while t < conved.len() {
                let mut row = conved[t].clone();
                if t + 1 < conved.len() {
                    for c in 0..ch_out {
                        row[c] = row[c].max(conved[t + 1][c]);
                    }
                }
                pooled.push(row);
                t += 2;
            }
            map = pooled;
        }
        let ch = map[0].len();
        (0..ch)
            .map(|c| map.iter().map(|row| row[c]).fold(f64::NEG_INFINITY, f64::max))
            .collect()
    }

    struct LstmStep {
        h: Vec<f64>,
    }

    fn lstm_direction(
        params: &ClassifierParams,
        tag: &str,
        xs: &[Vec<f64>],
        hidden: usize,
    ) -> Vec<LstmStep> {
        let wx = matrix(params, &format!("lstm.{tag}.wx"));
        let wh = matrix(params, &format!("lstm.{tag}.wh"));
        let b = vector(params, &format!("lstm.{tag}.bias"));
        let sigma = |x: f64| 1.0 / (1.0 + (-x).exp());
        let mut h_prev = vec![0.0; hidden];
        let mut c_prev = vec![0.0; hidden];
        let mut steps = Vec::new();
        for x in xs {
            let mut pre = vec![0.0; 4 * hidden];
            for (r, p) in pre.iter_mut().enumerate() {
                *p = b[r]
                    + wx[r].iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
                    + wh[r].iter().zip(&h_prev).map(|(a, b)| a * b).sum::<f64>();
            }
            let mut h = vec![0.0; hidden];
            let mut c = vec![0.0; hidden];
            for d in 0..hidden {
                let i = sigma(pre[d]);
                let f = sigma(pre[hidden + d]);
                let g = pre[2 * hidden + d].tanh();
                let o = sigma(pre[3 * hidden + d]);
                c[d] = f * c_prev[d] + i * g;
                h[d] = o * c[d].tanh();
            }
            h_prev = h.clone();
            c_prev = c.clone();
            steps.push(LstmStep { h });
        }
        steps
    }

    /// Full forward pass: probabilities over the label set.
    pub fn classify(params: &ClassifierParams, word_ids: &[u32], hashtag_ids: &[u32]) -> Vec<f64> {
        let ex = extract(params);
        let dims = params.dims;
        let (zh, _) = hashtag_encoder(&ex, hashtag_ids, dims.scaled_attention);

        let real_words: Vec<usize> =
            word_ids.iter().filter(|&&i| i != 0).map(|&i| i as usize).collect();
        let emb: Vec<Vec<f64>> = real_words.iter().map(|&i| ex.word_emb[i].clone()).collect();

        let mut features = zh;
        match params.kind {
            ClassifierKind::Conv => {
                for (bi, window) in [1usize, 3, 5].into_iter().enumerate() {
                    features.extend(conv_branch(&emb, params, bi, window, dims.conv_filters));
                }
            }
            ClassifierKind::Blstm => {
                let hidden = dims.lstm_hidden;
                if emb.is_empty() {
                    features.extend(vec![0.0; 2 * hidden]);
                } else {
                    let fwd = lstm_direction(params, "fwd", &emb, hidden);
                    let rev: Vec<Vec<f64>> = emb.iter().rev().cloned().collect();
                    let bwd = lstm_direction(params, "bwd", &rev, hidden);
                    let n = emb.len();
                    let mut pooled = vec![f64::NEG_INFINITY; 2 * hidden];
                    for pos in 0..n {
                        for d in 0..hidden {
                            pooled[d] = pooled[d].max(fwd[pos].h[d]);
                            pooled[hidden + d] = pooled[hidden + d].max(bwd[n - 1 - pos].h[d]);
                        }
                    }
                    features.extend(pooled);
                }
            }
        }

        // Layer norm with the 1e-5 epsilon, affine map, softmax.
        let d = features.len();
        let mean = features.iter().sum::<f64>() / d as f64;
        let var = features.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / d as f64;
        let std = (var + 1e-5).sqrt();
        let normed: Vec<f64> = features
            .iter()
            .enumerate()
            .map(|(i, z)| ex.ln_gain[i] * ((z - mean) / std) + ex.ln_bias[i])
            .collect();
        let logits: Vec<f64> = ex
            .wp
            .iter()
            .zip(&ex.bp)
            .map(|(row, b)| b + row.iter().zip(&normed).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        let denom: f64 = logits.iter().map(|l| l.exp()).sum();
        logits.iter().map(|l| l.exp() / denom).collect()
    }
}

fn init(kind: ClassifierKind, seed: u64) -> ClassifierParams {
    init_params(kind, tiny_dims(), &tiny_vocab(), None, seed)
}

#[test]
fn conv_forward_matches_oracle() {
    for seed in [1u64, 2, 3] {
        let params = init(ClassifierKind::Conv, seed);
        let words = [2u32, 3, 4, 1, 2, 3];
        let tags = [2u32, 3, 0, 0];
        let got = params.forward_ids(&words, &tags, Mode::Infer);
        let want = oracle::classify(&params, &words, &tags);
        for (a, b) in got.probs().iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn blstm_forward_matches_oracle() {
    for seed in [1u64, 2, 3] {
        let params = init(ClassifierKind::Blstm, seed);
        let words = [3u32, 2, 4, 4, 1];
        let tags = [3u32, 2, 2, 0];
        let got = params.forward_ids(&words, &tags, Mode::Infer);
        let want = oracle::classify(&params, &words, &tags);
        for (a, b) in got.probs().iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn oracle_variants_cover_short_and_empty_sequences() {
    for kind in [ClassifierKind::Conv, ClassifierKind::Blstm] {
        let params = init(kind, 7);
        for words in [vec![], vec![2u32], vec![2, 0, 3, 0]] {
            for tags in [vec![], vec![2u32]] {
                let got = params.forward_ids(&words, &tags, Mode::Infer);
                let want = oracle::classify(&params, &words, &tags);
                for (a, b) in got.probs().iter().zip(&want) {
                    assert!((a - b).abs() < 1e-9, "{kind:?} words={words:?} tags={tags:?}");
                }
            }
        }
    }
}

#[test]
fn attention_rows_normalize() {
    let params = init(ClassifierKind::Conv, 5);
    let ex = oracle::extract(&params);
    let (_, alpha) = oracle::hashtag_encoder(&ex, &[2, 3, 2, 3], false);
    assert_eq!(alpha.len(), 4);
    for row in &alpha {
        let sum: f64 = row.iter().sum();
        assert!((sum - 1.0).abs() < 1e-6);
        assert!(row.iter().all(|&a| a >= 0.0));
    }
}

#[test]
fn zero_attention_params_give_zero_vector() {
    // A freshly allocated (all-zero) parameter set: q = k = v = 0, attention
    // uniform, mixed values zero, so Z_H is the zero vector.
    let params = ClassifierParams::new(ClassifierKind::Conv, tiny_dims(), 5, 4);
    let zh = sands_core::models::encode_hashtags(&[2, 3], &params);
    assert_eq!(zh, vec![0.0; 3]);
}

#[test]
fn singleton_hashtag_reduces_to_value_map() {
    let params = init(ClassifierKind::Conv, 11);
    let zh = sands_core::models::encode_hashtags(&[2, 0, 0], &params);
    // With one real hashtag the softmax is a singleton, so Z_H = v = the
    // ReLU affine value map of that embedding.
    let ex = oracle::extract(&params);
    let x = &ex.hash_emb[2];
    for d in 0..3 {
        let mut acc = ex.bv[d];
        for (w, xi) in ex.wv[d].iter().zip(x) {
            acc += w * xi;
        }
        let want = acc.max(0.0);
        assert!((zh[d] - want).abs() < 1e-12);
    }
}

#[test]
fn hand_computed_two_hashtag_attention() {
    // d_H = attn_dim = 2, identity maps, zero biases, embeddings x1 = [1, 0],
    // x2 = [0, 2]. Scores: s11 = 1, s12 = 0, s21 = 0, s22 = 4. Softmax rows
    // mix the value vectors (equal to the embeddings), and the element-wise
    // max picks row 1's first component and row 2's second.
    let dims = ModelDims {
        word_dim: 2,
        hashtag_dim: 2,
        attn_dim: 2,
        conv_filters: [1, 1, 1],
        lstm_hidden: 1,
        label_count: 2,
        scaled_attention: false,
    };
    let mut params = ClassifierParams::new(ClassifierKind::Conv, dims, 4, 4);
    let emb = params.arena.by_name("hashtag_embedding").unwrap();
    params.arena.slice_mut(emb)[2 * 2..2 * 2 + 2].copy_from_slice(&[1.0, 0.0]);
    params.arena.slice_mut(emb)[3 * 2..3 * 2 + 2].copy_from_slice(&[0.0, 2.0]);
    for name in ["attn.wq", "attn.wk", "attn.wv"] {
        let id = params.arena.by_name(name).unwrap();
        let w = params.arena.slice_mut(id);
        w[0] = 1.0;
        w[3] = 1.0;
    }

    let zh = sands_core::models::encode_hashtags(&[2, 3], &params);
    let e1 = std::f64::consts::E;
    let e4 = e1.powi(4);
    let expect = [e1 / (1.0 + e1), 2.0 * e4 / (1.0 + e4)];
    assert!((zh[0] - expect[0]).abs() < 1e-9, "{zh:?}");
    assert!((zh[1] - expect[1]).abs() < 1e-9, "{zh:?}");
}

#[test]
fn zero_prediction_layer_gives_uniform() {
    for kind in [ClassifierKind::Conv, ClassifierKind::Blstm] {
        let mut params = init(kind, 13);
        for name in ["pred.w", "pred.b"] {
            let id = params.arena.by_name(name).unwrap();
            params.arena.slice_mut(id).fill(0.0);
        }
        let out = params.forward_ids(&[2, 3, 4], &[2], Mode::Infer);
        for &p in out.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}

#[test]
fn palindrome_reversal_with_tied_directions() {
    let mut params = init(ClassifierKind::Blstm, 17);
    // Tie the two directions' parameters.
    for name in ["wx", "wh", "bias"] {
        let fwd = params.arena.by_name(&format!("lstm.fwd.{name}")).unwrap();
        let bwd = params.arena.by_name(&format!("lstm.bwd.{name}")).unwrap();
        let values = params.arena.slice(fwd).to_vec();
        params.arena.slice_mut(bwd).copy_from_slice(&values);
    }
    let palindrome = [2u32, 3, 4, 3, 2];
    let reversed: Vec<u32> = palindrome.iter().rev().copied().collect();
    let a = params.forward_ids(&palindrome, &[2], Mode::Infer);
    let b = params.forward_ids(&reversed, &[2], Mode::Infer);
    assert_eq!(a.probs(), b.probs());
}

#[test]
fn padding_invariance_and_normalization_fuzz() {
    use rand::Rng;
    let conv = init(ClassifierKind::Conv, 23);
    let blstm = init(ClassifierKind::Blstm, 23);
    let mut rng = sands_core::seed::rng(99, &[0]);
    for case in 0..200 {
        let n_words = rng.gen_range(0..8);
        let n_tags = rng.gen_range(0..4);
        let words: Vec<u32> = (0..n_words).map(|_| rng.gen_range(0..5u32)).collect();
        let tags: Vec<u32> = (0..n_tags).map(|_| rng.gen_range(0..4u32)).collect();
        let mut padded_words = words.clone();
        padded_words.extend([0, 0, 0]);
        let mut padded_tags = tags.clone();
        padded_tags.extend([0, 0]);
        for params in [&conv, &blstm] {
            let base = params.forward_ids(&words, &tags, Mode::Infer);
            let sum: f64 = base.probs().iter().sum();
            assert!((sum - 1.0).abs() < 1e-6, "case {case}");
            assert!(base.probs().iter().all(|&p| p > 0.0 && p < 1.0));
            let padded = params.forward_ids(&padded_words, &padded_tags, Mode::Infer);
            assert_eq!(base.probs(), padded.probs(), "case {case}");
            // Training mode with a fixed seed: padding must still not matter.
            let mode = Mode::Train { dropout: 0.25, seed: case };
            let t1 = params.forward_ids(&words, &tags, mode);
            let t2 = params.forward_ids(&padded_words, &padded_tags, mode);
            assert_eq!(t1.probs(), t2.probs(), "case {case}");
        }
    }
}

#[test]
fn inference_is_deterministic_and_dropout_free() {
    let params = init(ClassifierKind::Conv, 31);
    let words = [2u32, 3, 4];
    let a = params.forward_ids(&words, &[2], Mode::Infer);
    let b = params.forward_ids(&words, &[2], Mode::Infer);
    assert_eq!(a.probs(), b.probs());
    // Same seed, same mask; different seed, (almost surely) different output.
    let t1 = params.forward_ids(&words, &[2], Mode::Train { dropout: 0.4, seed: 5 });
    let t2 = params.forward_ids(&words, &[2], Mode::Train { dropout: 0.4, seed: 5 });
    let t3 = params.forward_ids(&words, &[2], Mode::Train { dropout: 0.4, seed: 6 });
    assert_eq!(t1.probs(), t2.probs());
    assert_ne!(t1.probs(), t3.probs());
}

/// Central-difference gradient check of the weighted cross-entropy loss.
fn check_gradients(kind: ClassifierKind, seed: u64) {
    let params = init(kind, seed);
    assert!(params.param_count() <= 500, "config too large: {}", params.param_count());
    let words = [2u32, 3, 4, 1, 2, 3];
    let tags = [2u32, 3];
    let target = 1usize;
    let weight = 1.3;

    let loss_of = |p: &ClassifierParams| -> f64 {
        let pass = p.forward_ids(&words, &tags, Mode::Infer);
        -weight * pass.probs()[target].ln()
    };

    let pass = params.forward_ids(&words, &tags, Mode::Infer);
    let mut d_logits: Vec<f64> = pass.probs().to_vec();
    d_logits[target] -= 1.0;
    d_logits.iter_mut().for_each(|g| *g *= weight);
    let mut grads = params.arena.zeros_like();
    params.backward(&pass, &d_logits, &mut grads);

    let h = 1e-4;
    let mut probe = params.clone();
    let mut worst: (f64, usize) = (0.0, 0);
    for i in 0..probe.arena.len() {
        let orig = probe.arena.data()[i];
        probe.arena.data_mut()[i] = orig + h;
        let up = loss_of(&probe);
        probe.arena.data_mut()[i] = orig - h;
        let down = loss_of(&probe);
        probe.arena.data_mut()[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        let analytic = grads.data()[i];
        let denom = analytic.abs().max(numeric.abs());
        let rel = if denom > 1e-8 { (analytic - numeric).abs() / denom } else { 0.0 };
        if rel > worst.0 {
            worst = (rel, i);
        }
        assert!(
            rel < 1e-3,
            "{kind:?} param {i}: analytic {analytic} vs numeric {numeric} (rel {rel})"
        );
    }
    // Keep a record of the worst case so tolerance creep is visible.
    eprintln!("{kind:?} worst relative error {:.2e} at param {}", worst.0, worst.1);
}

#[test]
fn conv_gradients_match_finite_differences() {
    check_gradients(ClassifierKind::Conv, 41);
}

#[test]
fn blstm_gradients_match_finite_differences() {
    check_gradients(ClassifierKind::Blstm, 43);
}

#[test]
fn dropout_path_gradients_match_finite_differences() {
    // Same check through the training-mode path with a fixed dropout mask.
    let params = init(ClassifierKind::Conv, 47);
    let words = [2u32, 3, 4, 2];
    let tags = [2u32, 3];
    let mode = Mode::Train { dropout: 0.3, seed: 77 };
    let target = 2usize;

    let loss_of = |p: &ClassifierParams| -> f64 {
        let pass = p.forward_ids(&words, &tags, mode);
        -pass.probs()[target].ln()
    };
    let pass = params.forward_ids(&words, &tags, mode);
    let mut d_logits: Vec<f64> = pass.probs().to_vec();
    d_logits[target] -= 1.0;
    let mut grads = params.arena.zeros_like();
    params.backward(&pass, &d_logits, &mut grads);

    let h = 1e-4;
    let mut probe = params.clone();
    for i in (0..probe.arena.len()).step_by(3) {
        let orig = probe.arena.data()[i];
        probe.arena.data_mut()[i] = orig + h;
        let up = loss_of(&probe);
        probe.arena.data_mut()[i] = orig - h;
        let down = loss_of(&probe);
        probe.arena.data_mut()[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        let analytic = grads.data()[i];
        let denom = analytic.abs().max(numeric.abs());
        if denom > 1e-8 {
            assert!(
                (analytic - numeric).abs() / denom < 1e-3,
                "param {i}: analytic {analytic} vs numeric {numeric}"
            );
        }
    }
}

#[test]
fn checkpoint_round_trip_reproduces_outputs_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.ckpt");
    let params = init(ClassifierKind::Blstm, 51);
    sands_core::models::write_params(&path, &params, "deadbeef", 51).unwrap();
    let (back, hash, seed) = sands_core::models::read_params(&path).unwrap();
    assert_eq!(hash, "deadbeef");
    assert_eq!(seed, 51);
    let words = [2u32, 4, 3];
    let a = params.forward_ids(&words, &[3], Mode::Infer);
    let b = back.forward_ids(&words, &[3], Mode::Infer);
    assert_eq!(a.probs(), b.probs());
    assert_eq!(params.arena.data(), back.arena.data());
}
