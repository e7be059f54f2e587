//! Parameter schedules (k, b_i, c_i, h_i) for the hierarchical algorithms.
//!
//! Real-valued formulas are rounded to the nearest integer, clamped to
//! [1, n], and then a single pass lowers later entries so that
//! b_i >= b_{i+1} and c_i >= 2 c_{i+1}. Logarithms inside schedules are base 2.

use std::fmt::Write as _;

use num::rational::BigRational;

use crate::error::Error;
use crate::scale::{int, ratio};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    StSparse,
    StDenseExponent,
    MultiPairA,
    MultiPairB,
    Dense,
    Pinned,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSchedule {
    pub kind: ScheduleKind,
    pub n: u64,
    pub m: u64,
    pub k: usize,
    /// b[0] = n (unused), b[1..=k], b[k+1] = 1.
    pub b: Vec<u64>,
    /// c[0] = n, c[1..=k], c[k+1] = 1.
    pub c: Vec<u64>,
    /// Unrounded formula values for b_1..b_k and c_1..c_k.
    pub raw_b: Vec<f64>,
    pub raw_c: Vec<f64>,
    pub clamps: Vec<String>,
}

impl ParamSchedule {
    fn assemble(kind: ScheduleKind, n: u64, m: u64, raw_b: Vec<f64>, raw_c: Vec<f64>) -> Self {
        let k = raw_c.len();
        let mut clamps = Vec::new();
        let mut fix = |name: &str, i: usize, x: f64| -> u64 {
            let r = if x.is_finite() { x.round() } else { n as f64 };
            let v = r.clamp(1.0, n as f64) as u64;
            if v as f64 != r {
                clamps.push(format!("{name}_{i}: {x:.3} clamped to {v}"));
            }
            v
        };
        let mut b: Vec<u64> = std::iter::once(n)
            .chain(raw_b.iter().enumerate().map(|(i, &x)| fix("b", i + 1, x)))
            .chain(std::iter::once(1))
            .collect();
        let mut c: Vec<u64> = std::iter::once(n)
            .chain(raw_c.iter().enumerate().map(|(i, &x)| fix("c", i + 1, x)))
            .chain(std::iter::once(1))
            .collect();
        if b.len() < k + 2 {
            b = vec![n; k + 2];
            b[k + 1] = 1;
        }
        for i in 2..=k {
            if b[i] > b[i - 1] {
                clamps.push(format!("b_{i}: lowered from {} to {}", b[i], b[i - 1]));
                b[i] = b[i - 1];
            }
        }
        for i in 2..=k {
            let cap = (c[i - 1] / 2).max(1);
            if c[i] > cap {
                clamps.push(format!("c_{i}: lowered from {} to {cap}", c[i]));
                c[i] = cap;
            }
        }
        ParamSchedule { kind, n, m, k, b, c, raw_b, raw_c, clamps }
    }

    /// Desk-scale override with explicit k, b_1..b_k and c_1..c_k.
    pub fn pinned(n: u64, m: u64, b: &[u64], c: &[u64]) -> Result<Self, Error> {
        if c.is_empty() || (!b.is_empty() && b.len() != c.len()) {
            return Err(Error::Param(format!("pinned schedule needs k values of b and c, got {} and {}", b.len(), c.len())));
        }
        let raw_b = if b.is_empty() { vec![1.0; c.len()] } else { b.iter().map(|&x| x as f64).collect() };
        let raw_c = c.iter().map(|&x| x as f64).collect();
        Ok(Self::assemble(ScheduleKind::Pinned, n, m, raw_b, raw_c))
    }

    /// h_i = n / c_i as an exact rational (0 <= i <= k+1).
    pub fn h(&self, i: usize) -> BigRational {
        ratio(self.n as i64, self.c[i] as i64)
    }

    /// h_i for the dense hierarchy: (3 + log m)^(i-1) * n / c_1, floored.
    pub fn h_dense(&self, i: usize) -> u64 {
        let base = 3.0 + (self.m.max(2) as f64).log2();
        (base.powi(i as i32 - 1) * self.n as f64 / self.c[1] as f64).floor().max(1.0) as u64
    }

    /// Largest integer hop count not exceeding `factor * h_i`.
    pub fn hops_within(&self, i: usize, factor: u64) -> u64 {
        crate::scale::floor_u64(&(int(factor) * self.h(i)))
    }

    pub fn b(&self, i: usize) -> u64 {
        self.b[i]
    }

    pub fn c(&self, i: usize) -> u64 {
        self.c[i]
    }

    pub fn is_monotone(&self) -> bool {
        (2..=self.k).all(|i| self.b[i] <= self.b[i - 1])
            && (2..=self.k).all(|i| 2 * self.c[i] <= self.c[i - 1] || self.c[i] == 1)
    }

    /// Deterministic text dump used by `--explain-params`.
    pub fn explain(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schedule {:?} n={} m={} k={}", self.kind, self.n, self.m, self.k);
        for i in 1..=self.k {
            let h = if self.kind == ScheduleKind::Dense { self.h_dense(i).to_string() } else { self.h(i).to_string() };
            let _ = writeln!(s, "  level {i}: b={} c={} h={h}", self.b[i], self.c[i]);
        }
        if self.clamps.is_empty() {
            let _ = writeln!(s, "  clamps: none");
        } else {
            for c in &self.clamps {
                let _ = writeln!(s, "  clamp {c}");
            }
        }
        s
    }
}

fn lg(x: f64) -> f64 {
    x.max(1.0).log2()
}

/// Schedule A: k = ceil(log log m).
pub fn schedule_st_sparse(m: u64, n: u64) -> ParamSchedule {
    let (mf, nf) = (m as f64, n as f64);
    let k = (lg(lg(mf)).ceil() as usize).max(1);
    let d = 2f64.powi(k as i32 + 2) - 3.0;
    let p2 = |e: i32| 2f64.powi(e);
    let raw_b = (1..=k as i32)
        .map(|i| mf.powf(3.0 * (p2(k as i32) - p2(i - 1)) / d) / nf.powf((p2(k as i32 + 1) - p2(i)) / d))
        .collect();
    let raw_c = (1..=k as i32)
        .map(|i| {
            p2(k as i32 - i) * mf.powf((p2(k as i32 + 1) - 3.0 * p2(i - 1)) / d) * nf.powf((p2(i) - 1.0) / d)
        })
        .collect();
    ParamSchedule::assemble(ScheduleKind::StSparse, n, m, raw_b, raw_c)
}

/// Schedule B with q = 8: k = floor(sqrt(log n / log 8)).
pub fn schedule_st_dense_exponent(m: u64, n: u64) -> ParamSchedule {
    let (mf, nf) = (m as f64, n as f64);
    let k = ((lg(nf) / 3.0).sqrt().floor() as usize).max(1);
    let kf = k as f64;
    let raw_b = (1..=k)
        .map(|i| {
            let i = i as f64;
            nf.powf((kf + 2.0 * i - 1.0) / (3.0 * kf + 1.0)) / mf.powf((4.0 * i - kf - 3.0) / (6.0 * kf + 2.0))
        })
        .collect();
    let raw_c = (1..=k)
        .map(|i| {
            let fi = i as f64;
            2f64.powi(k as i32 - i as i32)
                * nf.powf(2.0 * fi / (3.0 * kf + 1.0))
                * mf.powf((3.0 * kf + 1.0 - 4.0 * fi) / (6.0 * kf + 2.0))
        })
        .collect();
    ParamSchedule::assemble(ScheduleKind::StDenseExponent, n, m, raw_b, raw_c)
}

/// Schedules for p pairs sharing hubs and centers.
pub fn schedule_multipair(m: u64, n: u64, p: f64, variant: Variant) -> Result<ParamSchedule, Error> {
    if !(p >= 1.0) {
        return Err(Error::Param(format!("pair count must be at least 1, got {p}")));
    }
    let (mf, nf) = (m as f64, n as f64);
    Ok(match variant {
        Variant::A => {
            let k = (lg(lg(mf)).ceil() as usize).max(1);
            let d = 2f64.powi(k as i32 + 2) - 3.0;
            let p2 = |e: i32| 2f64.powi(e);
            let ki = k as i32;
            let raw_b = (1..=ki)
                .map(|i| {
                    mf.powf(3.0 * (p2(ki) - p2(i - 1)) / d) * p.powf((p2(ki + 1) - p2(i)) / d)
                        / nf.powf((p2(ki + 1) - p2(i)) / d)
                })
                .collect();
            let raw_c = (1..=ki)
                .map(|i| {
                    mf.powf((p2(ki + 1) - 3.0 * p2(i - 1)) / d) * nf.powf((p2(i) - 1.0) / d)
                        / p.powf((p2(i) - 1.0) / d)
                })
                .collect();
            ParamSchedule::assemble(ScheduleKind::MultiPairA, n, m, raw_b, raw_c)
        }
        Variant::B => {
            let k = ((lg(nf) / 3.0).sqrt().floor() as usize).max(1);
            let kf = k as f64;
            let raw_b = (1..=k)
                .map(|i| {
                    let i = i as f64;
                    p.powf((kf + 1.0 - i) / (3.0 * kf + 1.0)) * nf.powf((kf + 2.0 * i - 1.0) / (3.0 * kf + 1.0))
                        / mf.powf((4.0 * i - kf - 3.0) / (6.0 * kf + 2.0))
                })
                .collect();
            let raw_c = (1..=k)
                .map(|i| {
                    let i = i as f64;
                    nf.powf(2.0 * i / (3.0 * kf + 1.0)) * mf.powf((3.0 * kf + 1.0 - 4.0 * i) / (6.0 * kf + 2.0))
                        / p.powf(i / (3.0 * kf + 1.0))
                })
                .collect();
            ParamSchedule::assemble(ScheduleKind::MultiPairB, n, m, raw_b, raw_c)
        }
    })
}

/// Pair counts used by the single-source corollaries.
pub fn ssr_pair_count(m: u64, n: u64, variant: Variant) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    match variant {
        Variant::A => (nf.powf(1.0 / 3.0) / mf.powf(1.0 / 6.0)).max(1.0),
        Variant::B => (mf.powf(0.25) / nf.powf(0.25)).max(1.0),
    }
}

/// The two (b, c) pairings for dense single-source reachability.
pub fn dense_pairing(m: u64, n: u64, which: u8) -> (f64, f64) {
    let (mf, nf) = (m as f64, n as f64);
    if which == 0 {
        (nf.powf(5.0 / 3.0) / mf.powf(2.0 / 3.0), nf.powf(4.0 / 3.0) / mf.powf(1.0 / 3.0))
    } else {
        (nf.powf(9.0 / 7.0) / mf.powf(3.0 / 7.0), mf.powf(1.0 / 7.0) * nf.powf(4.0 / 7.0))
    }
}

/// Dense hierarchy: c_k = b, c_i = 2^sqrt(log n log log n) c_{i+1},
/// k = ceil(log(c/b) / sqrt(log n log log n)) + 1.
pub fn schedule_dense(m: u64, n: u64, target: (f64, f64)) -> Result<ParamSchedule, Error> {
    let (b, c) = target;
    let nf = n as f64;
    let b = b.round().clamp(1.0, nf);
    let c = c.round().clamp(1.0, nf);
    if b > c {
        return Err(Error::Param(format!("dense schedule needs b <= c, got b={b} c={c}")));
    }
    let step = (lg(nf) * lg(lg(nf)).max(1.0)).sqrt();
    let k = ((c / b).log2() / step).ceil() as usize + 1;
    let raw_c: Vec<f64> = (1..=k).map(|i| b * 2f64.powf(step * (k - i) as f64)).collect();
    let mut s = ParamSchedule::assemble(ScheduleKind::Dense, n, m, vec![b; k], raw_c);
    // The dense hierarchy only needs nesting, not halving.
    s.clamps.retain(|c| !c.contains("lowered"));
    for i in 1..=k {
        s.c[i] = s.raw_c[i - 1].round().clamp(1.0, nf) as u64;
    }
    for i in 2..=k {
        s.c[i] = s.c[i].min(s.c[i - 1]);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_sparse_schedule() {
        let s = schedule_st_sparse(2, 2);
        assert_eq!(s.k, 1);
        assert!(s.b[1] >= 1 && s.b[1] <= 2 && s.c[1] >= 1 && s.c[1] <= 2);
    }

    #[test]
    fn sparse_schedule_k_and_halving_before_clamps() {
        for e_n in 10..=20 {
            for e_m in e_n..=20 {
                let s = schedule_st_sparse(1 << e_m, 1 << e_n);
                assert_eq!(s.k, ((e_m as f64).log2().ceil()) as usize);
                for i in 1..s.k {
                    assert!(s.raw_c[i - 1] >= 2.0 * s.raw_c[i] - 1e-6, "m=2^{e_m} n=2^{e_n} i={i}");
                }
                assert!(s.is_monotone());
            }
        }
    }

    #[test]
    fn sparse_b1_closed_form_at_m_n_squared() {
        let n = 1u64 << 10;
        let m = n * n;
        let s = schedule_st_sparse(m, n);
        let k = s.k as i32;
        let d = 2f64.powi(k + 2) - 3.0;
        let want = (m as f64).powf(3.0 * (2f64.powi(k) - 1.0) / d) / (n as f64).powf((2f64.powi(k + 1) - 2.0) / d);
        assert!((s.raw_b[0] - want).abs() < 1e-6 * want);
        assert_eq!(s.b[1], want.round().clamp(1.0, n as f64) as u64);
    }

    #[test]
    fn dense_exponent_k() {
        let s = schedule_st_dense_exponent(1 << 20, 1 << 16);
        assert_eq!(s.k, 2);
        assert!(schedule_st_dense_exponent(2, 2).k >= 1);
        for e_n in 10..=20 {
            let s = schedule_st_dense_exponent(1 << 20, 1 << e_n);
            for i in 1..s.k {
                assert!(s.raw_c[i - 1] >= 2.0 * s.raw_c[i] - 1e-6);
            }
            assert!(s.is_monotone());
        }
    }

    #[test]
    fn multipair_reduces_to_single_pair() {
        let (m, n) = (1u64 << 16, 1u64 << 12);
        let a = schedule_st_sparse(m, n);
        let mp = schedule_multipair(m, n, 1.0, Variant::A).unwrap();
        for i in 0..a.k {
            assert!((a.raw_b[i] - mp.raw_b[i]).abs() < 1e-6 * a.raw_b[i]);
            let factor = 2f64.powi((a.k - 1 - i) as i32);
            assert!((a.raw_c[i] - factor * mp.raw_c[i]).abs() < 1e-6 * a.raw_c[i]);
        }
        let p = ssr_pair_count(m, n, Variant::A);
        assert!(schedule_multipair(m, n, p, Variant::A).unwrap().is_monotone());
        let p = ssr_pair_count(m, n, Variant::B);
        assert!(schedule_multipair(m, n, p, Variant::B).is_ok());
        assert!(schedule_multipair(m, n, 0.5, Variant::B).is_err());
    }

    #[test]
    fn dense_schedule_shapes() {
        let s = schedule_dense(1000, 100, (10.0, 10.0)).unwrap();
        assert_eq!(s.k, 1);
        assert_eq!(s.h_dense(1), 100 / s.c[1]);
        let n = 1u64 << 12;
        let (b, c) = dense_pairing(n * n, n, 0);
        let s = schedule_dense(n * n, n, (b, c)).unwrap();
        assert_eq!(s.c[s.k], (b.round()) as u64);
        assert_eq!(s.h_dense(1), n / s.c[1]);
        assert!(s.c.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn pinned_and_explain() {
        let s = ParamSchedule::pinned(64, 512, &[8, 4], &[16, 4]).unwrap();
        assert_eq!(s.h(1), ratio(4, 1));
        assert_eq!(s.hops_within(2, 2), 32);
        let text = s.explain();
        assert!(text.contains("level 2: b=4 c=4 h=16"));
        assert!(ParamSchedule::pinned(64, 512, &[8], &[16, 4]).is_err());
        let bad = ParamSchedule::pinned(64, 512, &[2, 8], &[16, 12]).unwrap();
        assert_eq!((bad.b[2], bad.c[2]), (2, 8));
        assert_eq!(bad.clamps.len(), 2);
    }
}
