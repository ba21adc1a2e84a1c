//! Shared prediction head: layer norm over the concatenated features, an
//! affine map to the label space, and softmax.

use super::{dropout_backward, ClassifierParams, DropMask, DropoutCtx};
use crate::nn::ops::{add_assign, matvec, matvec_t_add, outer_add, softmax_inplace};
use crate::nn::Gradients;

const LN_EPS: f64 = 1e-5;

pub(crate) struct HeadCache {
    concat: Vec<f64>,
    xhat: Vec<f64>,
    inv_std: f64,
    /// Layer-norm output after dropout; the prediction layer's input.
    dense_in: Vec<f64>,
    drop: DropMask,
    pub probs: Vec<f64>,
}

pub(crate) fn forward(params: &ClassifierParams, concat: Vec<f64>, dropout: &mut DropoutCtx) -> HeadCache {
    let d = concat.len();
    let labels = params.dims.label_count;

    let mean = concat.iter().sum::<f64>() / d as f64;
    let var = concat.iter().map(|&z| (z - mean) * (z - mean)).sum::<f64>() / d as f64;
    let inv_std = 1.0 / (var + LN_EPS).sqrt();
    let xhat: Vec<f64> = concat.iter().map(|&z| (z - mean) * inv_std).collect();

    let gain = params.arena.slice(params.head.ln_gain);
    let bias = params.arena.slice(params.head.ln_bias);
    let mut dense_in: Vec<f64> = (0..d).map(|i| gain[i] * xhat[i] + bias[i]).collect();
    let drop = dropout.apply(&mut dense_in);

    let mut probs = vec![0.0; labels];
    matvec(params.arena.slice(params.head.wp), labels, d, &dense_in, &mut probs);
    add_assign(&mut probs, params.arena.slice(params.head.bp));
    softmax_inplace(&mut probs);

    HeadCache {
        concat,
        xhat,
        inv_std,
        dense_in,
        drop,
        probs,
    }
}

/// Returns the gradient with respect to the concatenated feature vector.
pub(crate) fn backward(
    params: &ClassifierParams,
    cache: &HeadCache,
    d_logits: &[f64],
    grads: &mut Gradients,
) -> Vec<f64> {
    let d = cache.concat.len();
    let labels = params.dims.label_count;

    outer_add(grads.slice_mut(params.head.wp), labels, d, d_logits, &cache.dense_in);
    add_assign(grads.slice_mut(params.head.bp), d_logits);

    let mut d_dense_in = vec![0.0; d];
    matvec_t_add(params.arena.slice(params.head.wp), labels, d, d_logits, &mut d_dense_in);
    dropout_backward(&cache.drop, &mut d_dense_in);

    let gain = params.arena.slice(params.head.ln_gain);
    {
        let d_gain = grads.slice_mut(params.head.ln_gain);
        for i in 0..d {
            d_gain[i] += d_dense_in[i] * cache.xhat[i];
        }
    }
    add_assign(grads.slice_mut(params.head.ln_bias), &d_dense_in);

    let d_xhat: Vec<f64> = (0..d).map(|i| d_dense_in[i] * gain[i]).collect();
    let mean_dx = d_xhat.iter().sum::<f64>() / d as f64;
    let mean_dx_xhat = d_xhat
        .iter()
        .zip(&cache.xhat)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / d as f64;
    (0..d)
        .map(|i| cache.inv_std * (d_xhat[i] - mean_dx - cache.xhat[i] * mean_dx_xhat))
        .collect()
}
