//! Hashtag self-attention encoder.
//!
//! Each non-padding hashtag embedding is projected to query, key and value
//! vectors through ReLU affine maps. Attention weights are a per-query
//! softmax over query-key dot products, each position's value vectors are
//! mixed accordingly, and an element-wise max over positions yields `Z_H`.
//! With no real hashtags `Z_H` is the zero vector.

use super::{dropout_backward, real_ids, ClassifierParams, DropMask, DropoutCtx};
use crate::nn::ops::{add_assign, dot, matvec, matvec_t_add, outer_add, relu_backward, softmax_inplace};
use crate::nn::Gradients;

pub(crate) struct AttnCache {
    ids: Vec<u32>,
    /// m x hashtag_dim embedding rows.
    xs: Vec<f64>,
    /// m x attn_dim pre-activations of the three maps.
    pre_q: Vec<f64>,
    pre_k: Vec<f64>,
    pre_v: Vec<f64>,
    /// m x attn_dim post-ReLU projections.
    q: Vec<f64>,
    k: Vec<f64>,
    v: Vec<f64>,
    /// m x m attention rows (softmax over the key axis).
    alpha: Vec<f64>,
    /// m x attn_dim attended values.
    xhat: Vec<f64>,
    /// Row index feeding the max-pool, per output dimension.
    pool_src: Vec<usize>,
    /// Post-pool, post-dropout output.
    pub zh: Vec<f64>,
    drop: DropMask,
}

pub(crate) fn forward(params: &ClassifierParams, hashtag_ids: &[u32], dropout: &mut DropoutCtx) -> AttnCache {
    let da = params.dims.attn_dim;
    let dh = params.dims.hashtag_dim;
    let ids = real_ids(hashtag_ids);
    let m = ids.len();

    let mut xs = vec![0.0; m * dh];
    for (i, &id) in ids.iter().enumerate() {
        xs[i * dh..(i + 1) * dh].copy_from_slice(params.arena.row(params.hashtag_emb, id as usize));
    }

    let wq = params.arena.slice(params.attn.wq);
    let bq = params.arena.slice(params.attn.bq);
    let wk = params.arena.slice(params.attn.wk);
    let bk = params.arena.slice(params.attn.bk);
    let wv = params.arena.slice(params.attn.wv);
    let bv = params.arena.slice(params.attn.bv);

    let mut pre_q = vec![0.0; m * da];
    let mut pre_k = vec![0.0; m * da];
    let mut pre_v = vec![0.0; m * da];
    for i in 0..m {
        let x = &xs[i * dh..(i + 1) * dh];
        for (pre, w, b) in [
            (&mut pre_q[i * da..(i + 1) * da], wq, bq),
            (&mut pre_k[i * da..(i + 1) * da], wk, bk),
            (&mut pre_v[i * da..(i + 1) * da], wv, bv),
        ] {
            matvec(w, da, dh, x, pre);
            add_assign(pre, b);
        }
    }
    let relu = |pre: &[f64]| -> Vec<f64> { pre.iter().map(|&x| x.max(0.0)).collect() };
    let q = relu(&pre_q);
    let k = relu(&pre_k);
    let v = relu(&pre_v);

    let scale = if params.dims.scaled_attention {
        1.0 / (da as f64).sqrt()
    } else {
        1.0
    };

    let mut alpha = vec![0.0; m * m];
    for i in 0..m {
        let qi = &q[i * da..(i + 1) * da];
        let row = &mut alpha[i * m..(i + 1) * m];
        for j in 0..m {
            row[j] = scale * dot(qi, &k[j * da..(j + 1) * da]);
        }
        softmax_inplace(row);
    }

    let mut xhat = vec![0.0; m * da];
    for i in 0..m {
        let out = &mut xhat[i * da..(i + 1) * da];
        for j in 0..m {
            let a = alpha[i * m + j];
            let vj = &v[j * da..(j + 1) * da];
            for d in 0..da {
                out[d] += a * vj[d];
            }
        }
    }

    let mut pool_src = vec![0usize; da];
    let mut zh = vec![0.0; da];
    if m > 0 {
        for d in 0..da {
            let mut best = 0;
            for i in 1..m {
                if xhat[i * da + d] > xhat[best * da + d] {
                    best = i;
                }
            }
            pool_src[d] = best;
            zh[d] = xhat[best * da + d];
        }
    }
    let drop = dropout.apply(&mut zh);

    AttnCache {
        ids,
        xs,
        pre_q,
        pre_k,
        pre_v,
        q,
        k,
        v,
        alpha,
        xhat,
        pool_src,
        zh,
        drop,
    }
}

pub(crate) fn backward(params: &ClassifierParams, cache: &AttnCache, d_zh_out: &[f64], grads: &mut Gradients) {
    let da = params.dims.attn_dim;
    let dh = params.dims.hashtag_dim;
    let m = cache.ids.len();
    if m == 0 {
        return;
    }
    let _ = &cache.xhat;

    let mut d_zh = d_zh_out.to_vec();
    dropout_backward(&cache.drop, &mut d_zh);

    // Max-pool routes each output dimension to one attended row.
    let mut d_xhat = vec![0.0; m * da];
    for d in 0..da {
        d_xhat[cache.pool_src[d] * da + d] += d_zh[d];
    }

    let scale = if params.dims.scaled_attention {
        1.0 / (da as f64).sqrt()
    } else {
        1.0
    };

    let mut d_q = vec![0.0; m * da];
    let mut d_k = vec![0.0; m * da];
    let mut d_v = vec![0.0; m * da];
    for i in 0..m {
        let dxi = &d_xhat[i * da..(i + 1) * da];
        // d_alpha, then softmax backward within the row.
        let mut d_alpha = vec![0.0; m];
        for j in 0..m {
            d_alpha[j] = dot(dxi, &cache.v[j * da..(j + 1) * da]);
        }
        let arow = &cache.alpha[i * m..(i + 1) * m];
        let inner: f64 = arow.iter().zip(&d_alpha).map(|(a, g)| a * g).sum();
        for j in 0..m {
            let d_score = arow[j] * (d_alpha[j] - inner);
            if d_score != 0.0 {
                let qi = &cache.q[i * da..(i + 1) * da];
                let kj = &cache.k[j * da..(j + 1) * da];
                for d in 0..da {
                    d_q[i * da + d] += scale * d_score * kj[d];
                    d_k[j * da + d] += scale * d_score * qi[d];
                }
            }
        }
        for j in 0..m {
            let a = arow[j];
            for d in 0..da {
                d_v[j * da + d] += a * dxi[d];
            }
        }
    }

    let mut d_xs = vec![0.0; m * dh];
    let mut d_pre = vec![0.0; da];
    for (d_post, pre, wid, bid) in [
        (&d_q, &cache.pre_q, params.attn.wq, params.attn.bq),
        (&d_k, &cache.pre_k, params.attn.wk, params.attn.bk),
        (&d_v, &cache.pre_v, params.attn.wv, params.attn.bv),
    ] {
        let w = params.arena.slice(wid);
        for i in 0..m {
            relu_backward(&pre[i * da..(i + 1) * da], &d_post[i * da..(i + 1) * da], &mut d_pre);
            let x = &cache.xs[i * dh..(i + 1) * dh];
            outer_add(grads.slice_mut(wid), da, dh, &d_pre, x);
            add_assign(grads.slice_mut(bid), &d_pre);
            matvec_t_add(w, da, dh, &d_pre, &mut d_xs[i * dh..(i + 1) * dh]);
        }
    }

    // Embedding rows; the padding row never appears among real ids.
    for (i, &id) in cache.ids.iter().enumerate() {
        add_assign(grads.row_mut(params.hashtag_emb, id as usize), &d_xs[i * dh..(i + 1) * dh]);
    }
}
