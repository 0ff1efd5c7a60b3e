//! LSTM cell: forward step, full-sequence forward with inverted recurrent
//! dropout, and backpropagation through time.
//!
//! Gate equations, for input `x_t`, previous hidden state `h_{t-1}` and
//! previous cell state `C_{t-1}`:
//!
//! ```text
//! f_t = sigmoid(W_fx x_t + W_fh h_{t-1} + b_f)
//! i_t = sigmoid(W_ix x_t + W_ih h_{t-1} + b_i)
//! g_t = tanh   (W_cx x_t + W_ch h_{t-1} + b_c)      (candidate cell)
//! C_t = f_t * C_{t-1} + i_t * g_t
//! o_t = sigmoid(W_ox x_t + W_oh h_{t-1} + b_o)
//! h_t = tanh(C_t) * o_t
//! ```
//!
//! Dropout is inverted dropout applied to the recurrent input `h_{t-1}`,
//! with one mask drawn per sequence and reused across all time steps.

use crate::error::{Error, Result};
use crate::numerics::matrix::Matrix;
use crate::numerics::rng::RngStream;
use crate::numerics::special::sigmoid;

/// Train mode applies dropout; inference never does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Train,
    Infer,
}

/// All trainable parameters of a single LSTM cell with `k` hidden units
/// and `d` inputs per time step.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmWeights {
    pub w_fx: Matrix,
    pub w_fh: Matrix,
    pub b_f: Vec<f64>,
    pub w_ix: Matrix,
    pub w_ih: Matrix,
    pub b_i: Vec<f64>,
    pub w_ox: Matrix,
    pub w_oh: Matrix,
    pub b_o: Vec<f64>,
    pub w_cx: Matrix,
    pub w_ch: Matrix,
    pub b_c: Vec<f64>,
}

/// Gradients of a scalar loss with respect to every [`LstmWeights`] field;
/// same shapes, same block order.
pub type LstmGradients = LstmWeights;

impl LstmWeights {
    pub fn zeros(k: usize, d: usize) -> Self {
        LstmWeights {
            w_fx: Matrix::zeros(k, d),
            w_fh: Matrix::zeros(k, k),
            b_f: vec![0.0; k],
            w_ix: Matrix::zeros(k, d),
            w_ih: Matrix::zeros(k, k),
            b_i: vec![0.0; k],
            w_ox: Matrix::zeros(k, d),
            w_oh: Matrix::zeros(k, k),
            b_o: vec![0.0; k],
            w_cx: Matrix::zeros(k, d),
            w_ch: Matrix::zeros(k, k),
            b_c: vec![0.0; k],
        }
    }

    /// Uniform init on [-1/sqrt(k), +1/sqrt(k)] for all matrices, zero biases.
    pub fn init(k: usize, d: usize, rng: &mut RngStream) -> Self {
        let bound = 1.0 / (k as f64).sqrt();
        let mut w = LstmWeights::zeros(k, d);
        for (_, block) in w.blocks_mut() {
            if block.len() == k {
                continue; // biases stay zero
            }
            for v in block.iter_mut() {
                *v = rng.uniform_range(-bound, bound);
            }
        }
        w
    }

    pub fn hidden_size(&self) -> usize {
        self.w_fx.rows()
    }

    pub fn input_size(&self) -> usize {
        self.w_fx.cols()
    }

    /// Named parameter blocks in canonical order (gate order f, i, o, c).
    pub fn blocks(&self) -> Vec<(&'static str, &[f64])> {
        vec![
            ("w_fx", self.w_fx.data()),
            ("w_fh", self.w_fh.data()),
            ("b_f", &self.b_f),
            ("w_ix", self.w_ix.data()),
            ("w_ih", self.w_ih.data()),
            ("b_i", &self.b_i),
            ("w_ox", self.w_ox.data()),
            ("w_oh", self.w_oh.data()),
            ("b_o", &self.b_o),
            ("w_cx", self.w_cx.data()),
            ("w_ch", self.w_ch.data()),
            ("b_c", &self.b_c),
        ]
    }

    pub fn blocks_mut(&mut self) -> Vec<(&'static str, &mut [f64])> {
        vec![
            ("w_fx", self.w_fx.data_mut()),
            ("w_fh", self.w_fh.data_mut()),
            ("b_f", &mut self.b_f),
            ("w_ix", self.w_ix.data_mut()),
            ("w_ih", self.w_ih.data_mut()),
            ("b_i", &mut self.b_i),
            ("w_ox", self.w_ox.data_mut()),
            ("w_oh", self.w_oh.data_mut()),
            ("b_o", &mut self.b_o),
            ("w_cx", self.w_cx.data_mut()),
            ("w_ch", self.w_ch.data_mut()),
            ("b_c", &mut self.b_c),
        ]
    }
}

/// Hidden and cell state of the LSTM.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl LstmState {
    pub fn zeros(k: usize) -> Self {
        LstmState {
            h: vec![0.0; k],
            c: vec![0.0; k],
        }
    }
}

/// Per-step activations cached for backpropagation through time.
#[derive(Debug, Clone)]
struct StepCache {
    x: Vec<f64>,
    /// Recurrent input as consumed by the gates (mask already applied).
    h_prev_masked: Vec<f64>,
    c_prev: Vec<f64>,
    f: Vec<f64>,
    i: Vec<f64>,
    o: Vec<f64>,
    g: Vec<f64>,
    c: Vec<f64>,
    tanh_c: Vec<f64>,
}

/// Forward tape: everything [`lstm_backward`] needs.
#[derive(Debug, Clone)]
pub struct LstmTape {
    steps: Vec<StepCache>,
    /// Inverted-dropout mask on the recurrent input, including the
    /// 1/(1-rate) survival scale; `None` when dropout was inactive.
    mask: Option<Vec<f64>>,
    k: usize,
    d: usize,
}

impl LstmTape {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn check_step_shapes(x: &[f64], prev: &LstmState, w: &LstmWeights) -> Result<()> {
    let (k, d) = (w.hidden_size(), w.input_size());
    if x.len() != d {
        return Err(Error::shape(
            "lstm_step",
            format!("input has length {}, weights expect {}", x.len(), d),
        ));
    }
    if prev.h.len() != k || prev.c.len() != k {
        return Err(Error::shape(
            "lstm_step",
            format!(
                "state has lengths h={}, c={}, weights expect {}",
                prev.h.len(),
                prev.c.len(),
                k
            ),
        ));
    }
    Ok(())
}

fn gate_preact(wx: &Matrix, wh: &Matrix, b: &[f64], x: &[f64], h: &[f64]) -> Result<Vec<f64>> {
    let mut z = wx.matvec(x)?;
    let zh = wh.matvec(h)?;
    for ((zi, &zhi), &bi) in z.iter_mut().zip(&zh).zip(b) {
        *zi += zhi + bi;
    }
    Ok(z)
}

fn step_with_cache(x: &[f64], h_prev: &[f64], c_prev: &[f64], w: &LstmWeights) -> Result<StepCache> {
    let f: Vec<f64> = gate_preact(&w.w_fx, &w.w_fh, &w.b_f, x, h_prev)?
        .into_iter()
        .map(sigmoid)
        .collect();
    let i: Vec<f64> = gate_preact(&w.w_ix, &w.w_ih, &w.b_i, x, h_prev)?
        .into_iter()
        .map(sigmoid)
        .collect();
    let g: Vec<f64> = gate_preact(&w.w_cx, &w.w_ch, &w.b_c, x, h_prev)?
        .into_iter()
        .map(f64::tanh)
        .collect();
    let o: Vec<f64> = gate_preact(&w.w_ox, &w.w_oh, &w.b_o, x, h_prev)?
        .into_iter()
        .map(sigmoid)
        .collect();
    let c: Vec<f64> = f
        .iter()
        .zip(c_prev)
        .zip(i.iter().zip(&g))
        .map(|((f, cp), (i, g))| f * cp + i * g)
        .collect();
    let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
    Ok(StepCache {
        x: x.to_vec(),
        h_prev_masked: h_prev.to_vec(),
        c_prev: c_prev.to_vec(),
        f,
        i,
        o,
        g,
        c,
        tanh_c,
    })
}

/// One LSTM step (no dropout).
pub fn lstm_step(x: &[f64], prev: &LstmState, w: &LstmWeights) -> Result<LstmState> {
    check_step_shapes(x, prev, w)?;
    let cache = step_with_cache(x, &prev.h, &prev.c, w)?;
    let h = cache
        .tanh_c
        .iter()
        .zip(&cache.o)
        .map(|(t, o)| t * o)
        .collect();
    Ok(LstmState { h, c: cache.c })
}

/// Runs the cell over a full `S x D` sequence from the zero initial state.
///
/// In [`Phase::Train`] an inverted-dropout mask is drawn once and applied
/// to the recurrent input `h_{t-1}` at every step; inference applies no
/// mask and needs no rescaling.
pub fn lstm_forward(
    seq: &Matrix,
    w: &LstmWeights,
    dropout: f64,
    phase: Phase,
    rng: &mut RngStream,
) -> Result<(LstmState, LstmTape)> {
    if seq.rows() == 0 {
        return Err(Error::domain("lstm_forward", "empty input sequence"));
    }
    if !(0.0..1.0).contains(&dropout) {
        return Err(Error::domain(
            "lstm_forward",
            format!("dropout rate must lie in [0, 1), got {dropout}"),
        ));
    }
    let (k, d) = (w.hidden_size(), w.input_size());
    if seq.cols() != d {
        return Err(Error::shape(
            "lstm_forward",
            format!(
                "sequence is {}x{}, weights expect {} inputs per step",
                seq.rows(),
                seq.cols(),
                d
            ),
        ));
    }

    let mask = if phase == Phase::Train && dropout > 0.0 {
        let keep = 1.0 - dropout;
        Some(
            (0..k)
                .map(|_| if rng.uniform() < dropout { 0.0 } else { 1.0 / keep })
                .collect::<Vec<f64>>(),
        )
    } else {
        None
    };

    let mut state = LstmState::zeros(k);
    let mut steps = Vec::with_capacity(seq.rows());
    for t in 0..seq.rows() {
        let h_in: Vec<f64> = match &mask {
            Some(m) => state.h.iter().zip(m).map(|(h, m)| h * m).collect(),
            None => state.h.clone(),
        };
        let cache = step_with_cache(seq.row(t), &h_in, &state.c, w)?;
        state.h = cache
            .tanh_c
            .iter()
            .zip(&cache.o)
            .map(|(t, o)| t * o)
            .collect();
        state.c = cache.c.clone();
        steps.push(cache);
    }
    Ok((state, LstmTape { steps, mask, k, d }))
}

fn sigmoid_back(grad: &[f64], act: &[f64]) -> Vec<f64> {
    grad.iter().zip(act).map(|(g, a)| g * a * (1.0 - a)).collect()
}

fn tanh_back(grad: &[f64], act: &[f64]) -> Vec<f64> {
    grad.iter().zip(act).map(|(g, a)| g * (1.0 - a * a)).collect()
}

/// Backpropagation through time.
///
/// `upstream` is the gradient of the scalar loss with respect to the final
/// hidden state. Returns the gradients for every weight block together with
/// the gradient with respect to each input row.
pub fn lstm_backward(
    tape: &LstmTape,
    w: &LstmWeights,
    upstream: &[f64],
) -> Result<(LstmGradients, Vec<Vec<f64>>)> {
    if upstream.len() != tape.k {
        return Err(Error::shape(
            "lstm_backward",
            format!(
                "upstream gradient has length {}, tape expects {}",
                upstream.len(),
                tape.k
            ),
        ));
    }
    if w.hidden_size() != tape.k || w.input_size() != tape.d {
        return Err(Error::shape(
            "lstm_backward",
            format!(
                "weights are ({}, {}), tape was recorded with ({}, {})",
                w.hidden_size(),
                w.input_size(),
                tape.k,
                tape.d
            ),
        ));
    }

    let mut grads = LstmGradients::zeros(tape.k, tape.d);
    let mut dx_all = vec![Vec::new(); tape.len()];
    let mut dh = upstream.to_vec();
    let mut dc = vec![0.0; tape.k];

    for (t, step) in tape.steps.iter().enumerate().rev() {
        // h_t = tanh(C_t) * o_t
        let do_gate: Vec<f64> = dh.iter().zip(&step.tanh_c).map(|(g, t)| g * t).collect();
        let dz_o = sigmoid_back(&do_gate, &step.o);
        let dtanh: Vec<f64> = dh.iter().zip(&step.o).map(|(g, o)| g * o).collect();
        let mut dc_total = tanh_back(&dtanh, &step.tanh_c);
        for (d, up) in dc_total.iter_mut().zip(&dc) {
            *d += up;
        }

        // C_t = f * C_{t-1} + i * g
        let df: Vec<f64> = dc_total.iter().zip(&step.c_prev).map(|(d, c)| d * c).collect();
        let dz_f = sigmoid_back(&df, &step.f);
        let di: Vec<f64> = dc_total.iter().zip(&step.g).map(|(d, g)| d * g).collect();
        let dz_i = sigmoid_back(&di, &step.i);
        let dg: Vec<f64> = dc_total.iter().zip(&step.i).map(|(d, i)| d * i).collect();
        let dz_g = tanh_back(&dg, &step.g);

        grads.w_fx.add_outer(&dz_f, &step.x, 1.0)?;
        grads.w_fh.add_outer(&dz_f, &step.h_prev_masked, 1.0)?;
        grads.w_ix.add_outer(&dz_i, &step.x, 1.0)?;
        grads.w_ih.add_outer(&dz_i, &step.h_prev_masked, 1.0)?;
        grads.w_ox.add_outer(&dz_o, &step.x, 1.0)?;
        grads.w_oh.add_outer(&dz_o, &step.h_prev_masked, 1.0)?;
        grads.w_cx.add_outer(&dz_g, &step.x, 1.0)?;
        grads.w_ch.add_outer(&dz_g, &step.h_prev_masked, 1.0)?;
        for j in 0..tape.k {
            grads.b_f[j] += dz_f[j];
            grads.b_i[j] += dz_i[j];
            grads.b_o[j] += dz_o[j];
            grads.b_c[j] += dz_g[j];
        }

        let mut dx = w.w_fx.tr_matvec(&dz_f)?;
        for (dst, src) in [
            (&w.w_ix, &dz_i),
            (&w.w_ox, &dz_o),
            (&w.w_cx, &dz_g),
        ] {
            let part = dst.tr_matvec(src)?;
            for (d, p) in dx.iter_mut().zip(&part) {
                *d += p;
            }
        }
        dx_all[t] = dx;

        let mut dh_masked = w.w_fh.tr_matvec(&dz_f)?;
        for (dst, src) in [
            (&w.w_ih, &dz_i),
            (&w.w_oh, &dz_o),
            (&w.w_ch, &dz_g),
        ] {
            let part = dst.tr_matvec(src)?;
            for (d, p) in dh_masked.iter_mut().zip(&part) {
                *d += p;
            }
        }
        // chain through the dropout mask back to the raw h_{t-1}
        dh = match &tape.mask {
            Some(m) => dh_masked.iter().zip(m).map(|(g, m)| g * m).collect(),
            None => dh_masked,
        };
        dc = dc_total.iter().zip(&step.f).map(|(d, f)| d * f).collect();
    }

    Ok((grads, dx_all))
}

/// Number of trainable scalars in one LSTM cell: `4k(D + k + 1)`.
pub fn param_count_lstm(k: usize, d: usize) -> usize {
    4 * k * (d + k + 1)
}
