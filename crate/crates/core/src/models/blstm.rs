//! Bidirectional LSTM text body.
//!
//! The two directions run over the real token prefix only; per-position
//! states are the concatenation `[h_fwd ; h_bwd]` and a max-pool along the
//! sequence axis yields the body output. Gate order inside the packed
//! matrices is input, forget, cell, output.

use super::{dropout_backward, real_ids, BodyCache, ClassifierParams, DropMask, DropoutCtx, LstmIds};
use crate::nn::ops::{add_assign, matvec_t_add, outer_add, sigmoid};
use crate::nn::Gradients;

pub(crate) struct LstmTrace {
    /// Token positions in processing order.
    order: Vec<usize>,
    /// n x 4h post-activation gates [i f g o].
    gates: Vec<f64>,
    /// n x h cell states.
    c: Vec<f64>,
    /// n x h tanh(c).
    tanh_c: Vec<f64>,
    /// n x h hidden states.
    h: Vec<f64>,
}

pub(crate) struct BlstmCache {
    ids: Vec<u32>,
    emb: Vec<f64>,
    n: usize,
    fwd: LstmTrace,
    bwd: LstmTrace,
    /// Source token position per pooled dimension (2h); empty when n = 0.
    pool_src: Vec<usize>,
    pub zb: Vec<f64>,
    drop: DropMask,
}

fn run_direction(params: &ClassifierParams, ids: &LstmIds, emb: &[f64], order: Vec<usize>) -> LstmTrace {
    let h_dim = params.dims.lstm_hidden;
    let dw = params.dims.word_dim;
    let n = order.len();
    let wx = params.arena.slice(ids.wx);
    let wh = params.arena.slice(ids.wh);
    let bias = params.arena.slice(ids.b);

    let mut gates = vec![0.0; n * 4 * h_dim];
    let mut c = vec![0.0; n * h_dim];
    let mut tanh_c = vec![0.0; n * h_dim];
    let mut h = vec![0.0; n * h_dim];

    let mut h_prev = vec![0.0; h_dim];
    let mut c_prev = vec![0.0; h_dim];
    let mut pre = vec![0.0; 4 * h_dim];
    for (step, &pos) in order.iter().enumerate() {
        let x = &emb[pos * dw..(pos + 1) * dw];
        pre.copy_from_slice(bias);
        for r in 0..4 * h_dim {
            pre[r] += crate::nn::ops::dot(&wx[r * dw..(r + 1) * dw], x)
                + crate::nn::ops::dot(&wh[r * h_dim..(r + 1) * h_dim], &h_prev);
        }
        let g_row = &mut gates[step * 4 * h_dim..(step + 1) * 4 * h_dim];
        for d in 0..h_dim {
            let i = sigmoid(pre[d]);
            let f = sigmoid(pre[h_dim + d]);
            let g = pre[2 * h_dim + d].tanh();
            let o = sigmoid(pre[3 * h_dim + d]);
            g_row[d] = i;
            g_row[h_dim + d] = f;
            g_row[2 * h_dim + d] = g;
            g_row[3 * h_dim + d] = o;
            let c_new = f * c_prev[d] + i * g;
            let tc = c_new.tanh();
            c[step * h_dim + d] = c_new;
            tanh_c[step * h_dim + d] = tc;
            h[step * h_dim + d] = o * tc;
        }
        h_prev.copy_from_slice(&h[step * h_dim..(step + 1) * h_dim]);
        c_prev.copy_from_slice(&c[step * h_dim..(step + 1) * h_dim]);
    }

    LstmTrace {
        order,
        gates,
        c,
        tanh_c,
        h,
    }
}

/// Hidden state of a direction at a given token position.
fn state_at<'a>(trace: &'a LstmTrace, pos_to_step: impl Fn(usize) -> usize, pos: usize, h_dim: usize) -> &'a [f64] {
    let step = pos_to_step(pos);
    &trace.h[step * h_dim..(step + 1) * h_dim]
}

pub(crate) fn forward(
    params: &ClassifierParams,
    fwd_ids: &LstmIds,
    bwd_ids: &LstmIds,
    word_ids: &[u32],
    dropout: &mut DropoutCtx,
) -> BodyCache {
    let dw = params.dims.word_dim;
    let h_dim = params.dims.lstm_hidden;
    let ids = real_ids(word_ids);
    let n = ids.len();

    let mut emb = vec![0.0; n * dw];
    for (i, &id) in ids.iter().enumerate() {
        emb[i * dw..(i + 1) * dw].copy_from_slice(params.arena.row(params.word_emb, id as usize));
    }

    let fwd = run_direction(params, fwd_ids, &emb, (0..n).collect());
    let bwd = run_direction(params, bwd_ids, &emb, (0..n).rev().collect());

    let mut zb = vec![0.0; 2 * h_dim];
    let mut pool_src = Vec::new();
    if n > 0 {
        pool_src = vec![0usize; 2 * h_dim];
        for d in 0..2 * h_dim {
            let value_at = |pos: usize| -> f64 {
                if d < h_dim {
                    state_at(&fwd, |p| p, pos, h_dim)[d]
                } else {
                    state_at(&bwd, |p| n - 1 - p, pos, h_dim)[d - h_dim]
                }
            };
            let mut best = 0;
            for pos in 1..n {
                if value_at(pos) > value_at(best) {
                    best = pos;
                }
            }
            pool_src[d] = best;
            zb[d] = value_at(best);
        }
    }
    let drop = dropout.apply(&mut zb);

    BodyCache::Blstm(BlstmCache {
        ids,
        emb,
        n,
        fwd,
        bwd,
        pool_src,
        zb,
        drop,
    })
}

pub(crate) fn backward(
    params: &ClassifierParams,
    fwd_ids: &LstmIds,
    bwd_ids: &LstmIds,
    cache: &BlstmCache,
    d_body: &[f64],
    grads: &mut Gradients,
) {
    let h_dim = params.dims.lstm_hidden;
    let dw = params.dims.word_dim;
    let n = cache.n;
    if n == 0 {
        return;
    }

    let mut d_zb = d_body.to_vec();
    dropout_backward(&cache.drop, &mut d_zb);

    let mut d_h_fwd = vec![0.0; n * h_dim];
    let mut d_h_bwd = vec![0.0; n * h_dim];
    for d in 0..2 * h_dim {
        let pos = cache.pool_src[d];
        if d < h_dim {
            d_h_fwd[pos * h_dim + d] += d_zb[d];
        } else {
            let step = n - 1 - pos;
            d_h_bwd[step * h_dim + (d - h_dim)] += d_zb[d];
        }
    }

    let mut d_emb = vec![0.0; n * dw];
    backward_direction(params, fwd_ids, &cache.fwd, &cache.emb, &d_h_fwd, &mut d_emb, grads);
    backward_direction(params, bwd_ids, &cache.bwd, &cache.emb, &d_h_bwd, &mut d_emb, grads);

    for (i, &id) in cache.ids.iter().enumerate() {
        add_assign(grads.row_mut(params.word_emb, id as usize), &d_emb[i * dw..(i + 1) * dw]);
    }
}

fn backward_direction(
    params: &ClassifierParams,
    ids: &LstmIds,
    trace: &LstmTrace,
    emb: &[f64],
    d_h_ext: &[f64],
    d_emb: &mut [f64],
    grads: &mut Gradients,
) {
    let h_dim = params.dims.lstm_hidden;
    let dw = params.dims.word_dim;
    let n = trace.order.len();
    let wx = params.arena.slice(ids.wx);
    let wh = params.arena.slice(ids.wh);

    let mut d_h_next = vec![0.0; h_dim];
    let mut d_c_next = vec![0.0; h_dim];
    let mut d_pre = vec![0.0; 4 * h_dim];
    for step in (0..n).rev() {
        let g_row = &trace.gates[step * 4 * h_dim..(step + 1) * 4 * h_dim];
        for d in 0..h_dim {
            let i = g_row[d];
            let f = g_row[h_dim + d];
            let g = g_row[2 * h_dim + d];
            let o = g_row[3 * h_dim + d];
            let tc = trace.tanh_c[step * h_dim + d];
            let c_prev = if step > 0 { trace.c[(step - 1) * h_dim + d] } else { 0.0 };

            let d_h = d_h_ext[step * h_dim + d] + d_h_next[d];
            let d_o = d_h * tc;
            let d_c = d_c_next[d] + d_h * o * (1.0 - tc * tc);
            let d_f = d_c * c_prev;
            let d_i = d_c * g;
            let d_g = d_c * i;
            d_c_next[d] = d_c * f;

            d_pre[d] = d_i * i * (1.0 - i);
            d_pre[h_dim + d] = d_f * f * (1.0 - f);
            d_pre[2 * h_dim + d] = d_g * (1.0 - g * g);
            d_pre[3 * h_dim + d] = d_o * o * (1.0 - o);
        }

        let pos = trace.order[step];
        let x = &emb[pos * dw..(pos + 1) * dw];
        outer_add(grads.slice_mut(ids.wx), 4 * h_dim, dw, &d_pre, x);
        if step > 0 {
            let h_prev = &trace.h[(step - 1) * h_dim..step * h_dim];
            outer_add(grads.slice_mut(ids.wh), 4 * h_dim, h_dim, &d_pre, h_prev);
        }
        add_assign(grads.slice_mut(ids.b), &d_pre);

        matvec_t_add(wx, 4 * h_dim, dw, &d_pre, &mut d_emb[pos * dw..(pos + 1) * dw]);
        d_h_next.iter_mut().for_each(|v| *v = 0.0);
        matvec_t_add(wh, 4 * h_dim, h_dim, &d_pre, &mut d_h_next);
    }
}
