//! Chebyshev expansion of `e^{-iHt}` for [`IsingOperator`].
//!
//! With `H = c + h H'` and the spectrum of `H'` inside `[-1, 1]`,
//! `e^{-iHt} = e^{-ict} sum_k (2 - delta_k0) (-i)^k J_k(h t) T_k(H')`.

use num_complex::Complex64 as C64;

use super::ising::IsingOperator;
use crate::error::{check_dim, validation, Result};

const TAIL: f64 = 1e-17;
/// Largest rescaled time `h t` handled by one expansion; longer evolutions
/// are split into equal steps.
const MAX_STEP: f64 = 400.0;

/// Bessel functions `J_0(x) .. J_{kmax}(x)` for `x >= 0`, by Miller's
/// backward recurrence normalized with `J_0 + 2 sum J_{2k} = 1`.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite());
    let mut out = vec![0.0; kmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = kmax.max(x.ceil() as usize) + 40 + 4 * (x.sqrt() as usize);
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in &mut j[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    out.iter_mut().zip(&j).for_each(|(o, v)| *o = v / norm);
    out
}

/// Scratch buffers reused across propagations of the same dimension.
#[derive(Default, Debug)]
pub struct ChebyshevWorkspace {
    prev: Vec<C64>,
    cur: Vec<C64>,
    next: Vec<C64>,
    acc: Vec<C64>,
}

impl ChebyshevWorkspace {
    fn resize(&mut self, dim: usize) {
        for buf in [&mut self.prev, &mut self.cur, &mut self.next, &mut self.acc] {
            buf.clear();
            buf.resize(dim, C64::new(0.0, 0.0));
        }
    }
}

fn series_length(x: f64) -> usize {
    (x + 12.0 * x.cbrt() + 20.0).ceil() as usize
}

/// Replaces `amps` by `e^{-iHt} amps`.
pub fn propagate(
    op: &IsingOperator,
    t: f64,
    amps: &mut [C64],
    ws: &mut ChebyshevWorkspace,
) -> Result<()> {
    check_dim(op.dim(), amps.len())?;
    if !t.is_finite() {
        return Err(validation(format!(
            "evolution time must be finite, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(());
    }
    if op.is_diagonal() {
        for (a, &d) in amps.iter_mut().zip(op.diagonal()) {
            *a *= C64::from_polar(1.0, -d * t);
        }
        return Ok(());
    }
    let (lo, hi) = op.spectral_bounds();
    let center = 0.5 * (hi + lo);
    let half = 0.5 * (hi - lo) * (1.0 + 1e-12) + 1e-300;
    let steps = (half * t.abs() / MAX_STEP).ceil().max(1.0);
    if steps > 1e6 {
        return Err(validation(format!(
            "evolution time {t} is too long to expand"
        )));
    }
    let dt = t / steps;
    for _ in 0..steps as usize {
        chebyshev_step(op, dt, center, half, amps, ws);
    }
    Ok(())
}

fn chebyshev_step(
    op: &IsingOperator,
    t: f64,
    center: f64,
    half: f64,
    amps: &mut [C64],
    ws: &mut ChebyshevWorkspace,
) {
    let x = half * t.abs();
    let mut bessel = bessel_j_sequence(x, series_length(x));
    while bessel.len() > 1 && bessel.last().is_some_and(|b| b.abs() < TAIL) {
        bessel.pop();
    }
    // J_k(-x) = (-1)^k J_k(x)
    let sign = t.signum();
    let mut phase = C64::new(1.0, 0.0);
    let coef: Vec<C64> = bessel
        .iter()
        .enumerate()
        .map(|(k, &j)| {
            let c = phase * j * if k == 0 { 1.0 } else { 2.0 };
            phase *= C64::new(0.0, -sign);
            c
        })
        .collect();

    let dim = amps.len();
    ws.resize(dim);
    let scale = 1.0 / half;
    ws.prev.copy_from_slice(amps);
    for (a, p) in ws.acc.iter_mut().zip(&ws.prev) {
        *a = p * coef[0];
    }
    if coef.len() > 1 {
        op.apply_shifted(&ws.prev, &mut ws.cur, center, scale);
        for (a, c) in ws.acc.iter_mut().zip(&ws.cur) {
            *a += c * coef[1];
        }
    }
    for &ck in coef.iter().skip(2) {
        op.apply_shifted(&ws.cur, &mut ws.next, center, scale);
        for ((nx, p), a) in ws.next.iter_mut().zip(&ws.prev).zip(ws.acc.iter_mut()) {
            *nx = *nx * 2.0 - p;
            *a += *nx * ck;
        }
        std::mem::swap(&mut ws.prev, &mut ws.cur);
        std::mem::swap(&mut ws.cur, &mut ws.next);
    }
    let global = C64::from_polar(1.0, -center * t);
    for (out, a) in amps.iter_mut().zip(&ws.acc) {
        *out = a * global;
    }
}
