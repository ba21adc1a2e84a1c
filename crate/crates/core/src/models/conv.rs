//! Convolutional text body: three branches (window sizes 1, 3, 5), each a
//! stack of three conv+ReLU+max-pool blocks followed by a global max-pool.
//!
//! Convolutions use same-padding over the real (non-padding) token prefix;
//! the intermediate pools use window 2, stride 2 with a ceiling boundary, so
//! a length-`n` branch shrinks to `ceil(n/8)` positions before the global
//! pool. A tweet with no real tokens contributes zero vectors.

use super::{dropout_backward, real_ids, BodyCache, ClassifierParams, ConvBlockIds, DropMask, DropoutCtx, CONV_WINDOWS};
use crate::nn::ops::add_assign;
use crate::nn::Gradients;

pub(crate) struct ConvBlockCache {
    len_in: usize,
    ch_in: usize,
    ch_out: usize,
    /// len_in x ch_in input map (after the previous block's dropout).
    input: Vec<f64>,
    /// len_in x ch_out pre-activation, kept for the ReLU mask.
    pre: Vec<f64>,
    /// Source position per pooled cell, len_out x ch_out.
    pool_src: Vec<usize>,
    len_out: usize,
    drop: DropMask,
}

pub(crate) struct ConvBranchCache {
    window: usize,
    blocks: Vec<ConvBlockCache>,
    /// Source position per channel for the global pool; empty when n = 0.
    global_src: Vec<usize>,
    /// Branch output after the global pool and its dropout.
    pub out: Vec<f64>,
    drop: DropMask,
}

pub(crate) struct ConvCache {
    ids: Vec<u32>,
    n: usize,
    pub branches: Vec<ConvBranchCache>,
}

fn conv_same(
    input: &[f64],
    len: usize,
    ch_in: usize,
    w: &[f64],
    b: &[f64],
    ch_out: usize,
    window: usize,
) -> Vec<f64> {
    // Weight layout per output channel: [window][ch_in], contiguous in ch_in.
    let pad = (window - 1) / 2;
    let mut pre = vec![0.0; len * ch_out];
    for t in 0..len {
        let out_row = &mut pre[t * ch_out..(t + 1) * ch_out];
        out_row.copy_from_slice(b);
        for j in 0..window {
            let src = t as isize + j as isize - pad as isize;
            if src < 0 || src >= len as isize {
                continue;
            }
            let x = &input[src as usize * ch_in..(src as usize + 1) * ch_in];
            for o in 0..ch_out {
                let wrow = &w[o * window * ch_in + j * ch_in..o * window * ch_in + (j + 1) * ch_in];
                out_row[o] += crate::nn::ops::dot(wrow, x);
            }
        }
    }
    pre
}

fn pool2(act: &[f64], len: usize, ch: usize) -> (Vec<f64>, Vec<usize>, usize) {
    let len_out = len.div_ceil(2);
    let mut out = vec![0.0; len_out * ch];
    let mut src = vec![0usize; len_out * ch];
    for u in 0..len_out {
        let a = 2 * u;
        let b = 2 * u + 1;
        for c in 0..ch {
            let mut best = a;
            if b < len && act[b * ch + c] > act[a * ch + c] {
                best = b;
            }
            out[u * ch + c] = act[best * ch + c];
            src[u * ch + c] = best;
        }
    }
    (out, src, len_out)
}

pub(crate) fn forward(
    params: &ClassifierParams,
    branch_ids: &[[ConvBlockIds; 3]],
    word_ids: &[u32],
    dropout: &mut DropoutCtx,
) -> BodyCache {
    let dw = params.dims.word_dim;
    let ids = real_ids(word_ids);
    let n = ids.len();

    let mut emb = vec![0.0; n * dw];
    for (i, &id) in ids.iter().enumerate() {
        emb[i * dw..(i + 1) * dw].copy_from_slice(params.arena.row(params.word_emb, id as usize));
    }

    let mut branches = Vec::with_capacity(branch_ids.len());
    for (bi, blocks_ids) in branch_ids.iter().enumerate() {
        let window = CONV_WINDOWS[bi];
        let f_last = params.dims.conv_filters[2];
        if n == 0 {
            let mut out = vec![0.0; f_last];
            let drop = dropout.apply(&mut out);
            branches.push(ConvBranchCache {
                window,
                blocks: Vec::new(),
                global_src: Vec::new(),
                out,
                drop,
            });
            continue;
        }

        let mut blocks = Vec::with_capacity(3);
        let mut current = emb.clone();
        let mut len = n;
        let mut ch_in = dw;
        for (li, ids) in blocks_ids.iter().enumerate() {
            let ch_out = params.dims.conv_filters[li];
            let w = params.arena.slice(ids.w);
            let b = params.arena.slice(ids.b);
            let pre = conv_same(&current, len, ch_in, w, b, ch_out, window);
            let act: Vec<f64> = pre.iter().map(|&x| x.max(0.0)).collect();
            let (mut pooled, pool_src, len_out) = pool2(&act, len, ch_out);
            let drop = dropout.apply(&mut pooled);
            blocks.push(ConvBlockCache {
                len_in: len,
                ch_in,
                ch_out,
                input: std::mem::replace(&mut current, pooled),
                pre,
                pool_src,
                len_out,
                drop,
            });
            len = len_out;
            ch_in = ch_out;
        }

        // Global max over the remaining positions.
        let mut out = vec![0.0; ch_in];
        let mut global_src = vec![0usize; ch_in];
        for c in 0..ch_in {
            let mut best = 0;
            for t in 1..len {
                if current[t * ch_in + c] > current[best * ch_in + c] {
                    best = t;
                }
            }
            global_src[c] = best;
            out[c] = current[best * ch_in + c];
        }
        let drop = dropout.apply(&mut out);
        branches.push(ConvBranchCache {
            window,
            blocks,
            global_src,
            out,
            drop,
        });
    }

    BodyCache::Conv(ConvCache { ids, n, branches })
}

pub(crate) fn backward(
    params: &ClassifierParams,
    branch_ids: &[[ConvBlockIds; 3]],
    cache: &ConvCache,
    d_branches: &[f64],
    grads: &mut Gradients,
) {
    let dw = params.dims.word_dim;
    let n = cache.n;
    let f_last = params.dims.conv_filters[2];
    let mut d_emb = vec![0.0; n * dw];

    for (bi, branch) in cache.branches.iter().enumerate() {
        let mut d_out = d_branches[bi * f_last..(bi + 1) * f_last].to_vec();
        dropout_backward(&branch.drop, &mut d_out);
        if branch.global_src.is_empty() {
            continue;
        }

        let last = branch.blocks.last().unwrap();
        let mut d_map = vec![0.0; last.len_out * last.ch_out];
        for c in 0..last.ch_out {
            d_map[branch.global_src[c] * last.ch_out + c] += d_out[c];
        }

        for (li, block) in branch.blocks.iter().enumerate().rev() {
            let ids = &branch_ids[bi][li];
            dropout_backward(&block.drop, &mut d_map);

            // Un-pool into the ReLU activations.
            let mut d_act = vec![0.0; block.len_in * block.ch_out];
            for u in 0..block.len_out {
                for c in 0..block.ch_out {
                    d_act[block.pool_src[u * block.ch_out + c] * block.ch_out + c] +=
                        d_map[u * block.ch_out + c];
                }
            }

            // ReLU then the convolution itself.
            let window = branch.window;
            let pad = (window - 1) / 2;
            let w = params.arena.slice(ids.w);
            let mut d_input = vec![0.0; block.len_in * block.ch_in];
            {
                let d_w = grads.slice_mut(ids.w);
                for t in 0..block.len_in {
                    for o in 0..block.ch_out {
                        let g = if block.pre[t * block.ch_out + o] > 0.0 {
                            d_act[t * block.ch_out + o]
                        } else {
                            0.0
                        };
                        if g == 0.0 {
                            continue;
                        }
                        for j in 0..window {
                            let src = t as isize + j as isize - pad as isize;
                            if src < 0 || src >= block.len_in as isize {
                                continue;
                            }
                            let s = src as usize;
                            let x = &block.input[s * block.ch_in..(s + 1) * block.ch_in];
                            let wofs = o * window * block.ch_in + j * block.ch_in;
                            for c in 0..block.ch_in {
                                d_w[wofs + c] += g * x[c];
                                d_input[s * block.ch_in + c] += g * w[wofs + c];
                            }
                        }
                    }
                }
            }
            {
                let d_b = grads.slice_mut(ids.b);
                for t in 0..block.len_in {
                    for o in 0..block.ch_out {
                        if block.pre[t * block.ch_out + o] > 0.0 {
                            d_b[o] += d_act[t * block.ch_out + o];
                        }
                    }
                }
            }
            d_map = d_input;
        }
        add_assign(&mut d_emb, &d_map);
    }

    for (i, &id) in cache.ids.iter().enumerate() {
        add_assign(grads.row_mut(params.word_emb, id as usize), &d_emb[i * dw..(i + 1) * dw]);
    }
}
