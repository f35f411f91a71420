//! Las Vegas consistency test for sparse GF(2) systems.
//!
//! `A·x = b` is attacked with Wiedemann's method over GF(2^64): the matrix is
//! padded to `N×N` and sandwiched as `Q·A·P` between random butterfly
//! preconditioners, and the minimal polynomial of a random scalar
//! projection of the Krylov sequence of `b` is found by Berlekamp–Massey.
//! A solution of the extension-field system restricts to a GF(2) solution
//! by taking bit 0 of every coordinate. If that fails the same routine is
//! run on `[A | b]ᵀ·u = e_last`, whose solutions are exactly the
//! inconsistency certificates. Every witness is re-verified over GF(2)
//! before it is returned, so randomness only affects running time.

use super::berlekamp_massey::berlekamp_massey;
use super::gf64::{dot, Gf64};
use super::{BitVec, SparseGF2Matrix};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WiedemannConfig {
    /// Attempts with fresh randomness before giving up.
    pub retries: usize,
}

impl Default for WiedemannConfig {
    fn default() -> Self {
        Self { retries: 8 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WiedemannStats {
    /// Products with the (preconditioned) black box.
    pub applications: u64,
    pub attempts: usize,
}

impl WiedemannStats {
    pub fn merge(&mut self, other: WiedemannStats) {
        self.applications += other.applications;
        self.attempts += other.attempts;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConsistencyOutcome {
    /// `x` with `A·x = b`.
    Consistent(BitVec),
    /// `u` with `uᵀ·A = 0` and `uᵀ·b = 1`.
    Inconsistent(BitVec),
}

trait BlackBox {
    fn n_rows(&self) -> usize;
    fn n_cols(&self) -> usize;
    fn apply(&self, x: &[Gf64], out: &mut [Gf64]);
}

struct Direct<'a>(&'a SparseGF2Matrix);

impl BlackBox for Direct<'_> {
    fn n_rows(&self) -> usize {
        self.0.n_rows()
    }
    fn n_cols(&self) -> usize {
        self.0.n_cols()
    }
    fn apply(&self, x: &[Gf64], out: &mut [Gf64]) {
        self.0.apply_into(x, out);
    }
}

struct Transposed<'a>(&'a SparseGF2Matrix);

impl BlackBox for Transposed<'_> {
    fn n_rows(&self) -> usize {
        self.0.n_cols()
    }
    fn n_cols(&self) -> usize {
        self.0.n_rows()
    }
    fn apply(&self, x: &[Gf64], out: &mut [Gf64]) {
        self.0.apply_transpose_into(x, out);
    }
}

/// `inner` with one extra 0/1 row appended.
struct ExtraRow<B> {
    inner: B,
    row: Vec<usize>,
}

impl<B: BlackBox> BlackBox for ExtraRow<B> {
    fn n_rows(&self) -> usize {
        self.inner.n_rows() + 1
    }
    fn n_cols(&self) -> usize {
        self.inner.n_cols()
    }
    fn apply(&self, x: &[Gf64], out: &mut [Gf64]) {
        let r = self.inner.n_rows();
        self.inner.apply(x, &mut out[..r]);
        out[r] = self.row.iter().fold(Gf64::ZERO, |acc, &j| acc + x[j]);
    }
}

/// `D·B` with `D` a random nonsingular diagonal and `B` a random butterfly
/// network: `log₂ N` layers of unimodular 2×2 switches `[[1, a], [b, 1+ab]]`
/// on coordinate pairs `(i, i + 2^l)`. Every output depends on every input
/// at a cost of `O(N log N)` multiplications.
struct Preconditioner {
    diag: Vec<Gf64>,
    /// Per layer, one `(a, b)` per switch in index order.
    layers: Vec<Vec<(Gf64, Gf64)>>,
}

impl Preconditioner {
    fn random(n: usize, rng: &mut SplitMix64) -> Self {
        debug_assert!(n.is_power_of_two());
        let diag = (0..n).map(|_| Gf64::random_nonzero(rng)).collect();
        let layers = (0..n.trailing_zeros())
            .map(|_| {
                (0..n / 2)
                    .map(|_| (Gf64::random(rng), Gf64::random(rng)))
                    .collect()
            })
            .collect();
        Self { diag, layers }
    }

    fn apply(&self, y: &[Gf64], out: &mut [Gf64]) {
        out.copy_from_slice(y);
        for (l, switches) in self.layers.iter().enumerate() {
            let stride = 1usize << l;
            let mut sw = switches.iter();
            for i in (0..out.len()).filter(|i| i & stride == 0) {
                let &(a, b) = sw.next().expect("one switch per pair");
                let j = i + stride;
                out[i] += a * out[j];
                out[j] += b * out[i];
            }
        }
        for (o, &d) in out.iter_mut().zip(&self.diag) {
            *o *= d;
        }
    }
}

/// The square operator `y ↦ Q·pad(B·(P·y)[..cols])`.
struct Operator<'a, B> {
    bb: &'a B,
    left: Preconditioner,
    pre: Preconditioner,
    n: usize,
    scratch: Vec<Gf64>,
    scratch_out: Vec<Gf64>,
    applications: u64,
}

impl<'a, B: BlackBox> Operator<'a, B> {
    fn new(bb: &'a B, rng: &mut SplitMix64) -> Self {
        let n = bb.n_rows().max(bb.n_cols()).next_power_of_two();
        Self {
            bb,
            left: Preconditioner::random(n, rng),
            pre: Preconditioner::random(n, rng),
            n,
            scratch: vec![Gf64::ZERO; n],
            scratch_out: vec![Gf64::ZERO; n],
            applications: 0,
        }
    }

    fn apply(&mut self, y: &[Gf64], out: &mut [Gf64]) {
        self.applications += 1;
        self.pre.apply(y, &mut self.scratch);
        let rows = self.bb.n_rows();
        self.bb.apply(
            &self.scratch[..self.bb.n_cols()],
            &mut self.scratch_out[..rows],
        );
        self.scratch_out[rows..].fill(Gf64::ZERO);
        self.left.apply(&self.scratch_out, out);
    }
}

fn embed(bits: &BitVec, n: usize) -> Vec<Gf64> {
    let mut v = vec![Gf64::ZERO; n];
    for i in bits.ones() {
        v[i] = Gf64::ONE;
    }
    v
}

/// One randomized attempt at `B·x = rhs`; the GF(2) answer is checked
/// against the black box before it is returned.
fn krylov_solve<B: BlackBox>(
    bb: &B,
    rhs: &BitVec,
    rng: &mut SplitMix64,
    stats: &mut WiedemannStats,
) -> Option<BitVec> {
    let cols = bb.n_cols();
    if rhs.is_zero() {
        return Some(BitVec::zeros(cols));
    }
    let mut op = Operator::new(bb, rng);
    let n = op.n;
    let mut v = vec![Gf64::ZERO; n];
    op.left.apply(&embed(rhs, n), &mut v);
    let w: Vec<Gf64> = (0..n).map(|_| Gf64::random(rng)).collect();

    // Krylov vectors of v stay in span(v) + range, so rank + 1 bounds the degree
    let degree_bound = bb.n_rows().min(cols) + 1;
    let terms = 2 * degree_bound + 2;
    let mut seq = Vec::with_capacity(terms);
    let mut cur = v.clone();
    let mut next = vec![Gf64::ZERO; n];
    for i in 0..terms {
        seq.push(dot(&w, &cur));
        if i + 1 < terms {
            op.apply(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
    }
    let f = berlekamp_massey(&seq);

    // f = y^j·g with g(0) ≠ 0; y = g(0)⁻¹·Σ_{i≥1} g_i Ã^{i-1} v solves Ã·y = v,
    // hence A·(P·y) = rhs because Q is invertible,
    // whenever v lies in the range and the kernel meets the range trivially
    let j = f.iter().position(|c| !c.is_zero())?;
    let g = &f[j..];
    let (g0, h) = g.split_first()?;
    let acc = match h.split_last() {
        None => vec![Gf64::ZERO; n],
        Some((&top, rest)) => {
            let mut acc: Vec<Gf64> = v.iter().map(|&x| top * x).collect();
            for &hi in rest.iter().rev() {
                op.apply(&acc, &mut next);
                for (a, (&nx, &vx)) in acc.iter_mut().zip(next.iter().zip(&v)) {
                    *a = nx + hi * vx;
                }
            }
            acc
        }
    };
    let scale = g0.inv()?;
    let y: Vec<Gf64> = acc.into_iter().map(|x| scale * x).collect();
    op.pre.apply(&y, &mut next);
    stats.applications += op.applications;

    let x = BitVec::from_bools(
        &next[..cols]
            .iter()
            .map(|c| c.0 & 1 == 1)
            .collect::<Vec<_>>(),
    );
    let mut check = vec![Gf64::ZERO; bb.n_rows()];
    bb.apply(&embed(&x, cols), &mut check);
    let ok = check
        .iter()
        .enumerate()
        .all(|(i, c)| c.0 == rhs.get(i) as u64);
    ok.then_some(x)
}

fn run<A: BlackBox, C: BlackBox>(
    solve_bb: &A,
    rhs: &BitVec,
    cert_bb: &C,
    rng: &mut SplitMix64,
    cfg: WiedemannConfig,
    verify_solution: impl Fn(&BitVec) -> bool,
    verify_certificate: impl Fn(&BitVec) -> bool,
) -> Result<(ConsistencyOutcome, WiedemannStats)> {
    let mut stats = WiedemannStats::default();
    let e_last = BitVec::unit(cert_bb.n_rows(), cert_bb.n_rows() - 1);
    for _ in 0..cfg.retries {
        stats.attempts += 1;
        if let Some(x) = krylov_solve(solve_bb, rhs, rng, &mut stats) {
            if verify_solution(&x) {
                return Ok((ConsistencyOutcome::Consistent(x), stats));
            }
        }
        if let Some(u) = krylov_solve(cert_bb, &e_last, rng, &mut stats) {
            if verify_certificate(&u) {
                return Ok((ConsistencyOutcome::Inconsistent(u), stats));
            }
        }
    }
    Err(Error::RetriesExhausted(cfg.retries))
}

/// Decide whether `A·x = b` has a GF(2) solution, returning a verified
/// witness either way.
pub fn test_consistency(
    a: &SparseGF2Matrix,
    b: &BitVec,
    rng: &mut SplitMix64,
    cfg: WiedemannConfig,
) -> Result<(ConsistencyOutcome, WiedemannStats)> {
    if b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} against {} rows",
            b.len(),
            a.n_rows()
        )));
    }
    let cert = ExtraRow {
        inner: Transposed(a),
        row: b.ones().collect(),
    };
    run(
        &Direct(a),
        b,
        &cert,
        rng,
        cfg,
        |x| a.mul_bits(x).is_ok_and(|ax| ax == *b),
        |u| a.left_mul_bits(u).is_ok_and(|ua| ua.is_zero()) && u.dot(b),
    )
}

/// Decide whether `u·M = r` has a solution. `Consistent(u)` carries such a
/// `u`; `Inconsistent(w)` carries `w` with `M·w = 0` and `r·w = 1`.
pub fn solve_left(
    m: &SparseGF2Matrix,
    r: &BitVec,
    rng: &mut SplitMix64,
    cfg: WiedemannConfig,
) -> Result<(ConsistencyOutcome, WiedemannStats)> {
    if r.len() != m.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "row vector of length {} against {} columns",
            r.len(),
            m.n_cols()
        )));
    }
    let cert = ExtraRow {
        inner: Direct(m),
        row: r.ones().collect(),
    };
    run(
        &Transposed(m),
        r,
        &cert,
        rng,
        cfg,
        |u| m.left_mul_bits(u).is_ok_and(|um| um == *r),
        |w| m.mul_bits(w).is_ok_and(|mw| mw.is_zero()) && w.dot(r),
    )
}
