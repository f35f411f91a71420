//! Fast substitution of the trailing variables.
//!
//! For a split `x = (h, t)` with `h` the first `nv` variables, the quadratic
//! part in `h` does not depend on `t`, each linear coefficient of `h_i` is an
//! affine function of `t`, and the constant is a quadratic function of `t`.
//! All three are precomputed as bit masks so that a branch costs
//! `O(m·nv)` word operations.

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIndex};
use crate::poly::{QuadraticForm, QuadraticPoly, QuadraticSystem};

struct Template {
    quad_cols: Vec<usize>,
    /// Per head variable: (constant part, tail mask).
    linear: Vec<(bool, u64)>,
    constant: QuadraticForm,
}

pub struct Specializer {
    nv: usize,
    k: usize,
    lin_cols: Vec<usize>,
    const_col: usize,
    templates: Vec<Template>,
}

impl Specializer {
    /// Prepare to substitute the last `k` variables of `s`.
    pub fn new(s: &QuadraticSystem, k: usize) -> Result<Self> {
        let n = s.n();
        if k >= n {
            return Err(Error::invalid(format!(
                "cannot specialize {k} of {n} variables"
            )));
        }
        let nv = n - k;
        let idx = MonomialIndex::new(nv, 2)?;
        let lin_cols = (0..nv).map(|i| idx.rank(Monomial(1 << i))).collect();
        let const_col = idx.constant_column();
        let templates = s
            .polys()
            .iter()
            .map(|p| {
                let f = p.form();
                let mut quad_cols = Vec::new();
                let mut linear: Vec<(bool, u64)> =
                    (0..nv).map(|i| (f.linear >> i & 1 == 1, 0)).collect();
                let mut constant = QuadraticForm {
                    n: k,
                    constant: f.constant,
                    linear: f.linear >> nv,
                    upper: vec![0; k],
                };
                for (i, &upper) in f.upper.iter().enumerate().take(n) {
                    let mut row = upper;
                    while row != 0 {
                        let j = row.trailing_zeros() as usize;
                        row &= row - 1;
                        match (i < nv, j < nv) {
                            (true, true) => quad_cols.push(idx.rank(Monomial(1 << i | 1 << j))),
                            (true, false) => linear[i].1 |= 1 << (j - nv),
                            _ => constant.upper[i - nv] |= 1 << (j - nv),
                        }
                    }
                }
                Template {
                    quad_cols,
                    linear,
                    constant,
                }
            })
            .collect();
        Ok(Self {
            nv,
            k,
            lin_cols,
            const_col,
            templates,
        })
    }

    pub fn head_vars(&self) -> usize {
        self.nv
    }

    pub fn tail_vars(&self) -> usize {
        self.k
    }

    /// The system in `x_1..x_nv` after substituting `x_{nv+1+i} = tail bit i`.
    pub fn specialize(&self, tail: u64) -> QuadraticSystem {
        let polys = self
            .templates
            .iter()
            .map(|t| {
                let mut p = QuadraticPoly::zero(self.nv).expect("head fits");
                for &c in &t.quad_cols {
                    p.toggle_column(c);
                }
                for (i, &(base, mask)) in t.linear.iter().enumerate() {
                    if base ^ ((mask & tail).count_ones() & 1 == 1) {
                        p.toggle_column(self.lin_cols[i]);
                    }
                }
                if t.constant.eval(tail) {
                    p.toggle_column(self.const_col);
                }
                p
            })
            .collect();
        QuadraticSystem::new(self.nv, polys).expect("widths agree")
    }
}
