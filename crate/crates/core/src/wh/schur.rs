//! Complex Schur form `A = Q T Q^H` with eigenvalue reordering.
//!
//! Hessenberg reduction is nalgebra's; the shifted QR sweep and the
//! adjacent-swap reordering are done here with complex Givens rotations so
//! that `T` is genuinely upper triangular and any selected set of
//! eigenvalues can be moved to the leading block.

use nalgebra::{Complex, DMatrix, Hessenberg};

use crate::error::{Error, Result};

type C = Complex<f64>;

pub(crate) struct Schur {
    pub q: DMatrix<C>,
    pub t: DMatrix<C>,
}

/// Rotation `[c s; -conj(s) c]` mapping `(x, y)` to `(r, 0)`.
#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: C,
}

impl Givens {
    fn zeroing(x: C, y: C) -> Givens {
        let ax = x.norm();
        let ay = y.norm();
        if ay == 0.0 {
            return Givens { c: 1.0, s: C::new(0.0, 0.0) };
        }
        if ax == 0.0 {
            return Givens { c: 0.0, s: y.conj() / ay };
        }
        let r = ax.hypot(ay);
        let phase = x / ax;
        Givens { c: ax / r, s: phase * y.conj() / r }
    }

    /// Rows `k, k+1` of `m`, columns `cols`.
    fn apply_left(&self, m: &mut DMatrix<C>, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let a = m[(k, j)];
            let b = m[(k + 1, j)];
            m[(k, j)] = a * self.c + self.s * b;
            m[(k + 1, j)] = -self.s.conj() * a + b * self.c;
        }
    }

    /// Columns `k, k+1` of `m` times `G^H`, rows `rows`.
    fn apply_right(&self, m: &mut DMatrix<C>, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let a = m[(i, k)];
            let b = m[(i, k + 1)];
            m[(i, k)] = a * self.c + b * self.s.conj();
            m[(i, k + 1)] = -self.s * a + b * self.c;
        }
    }
}

fn wilkinson_shift(a: C, b: C, c: C, d: C) -> C {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mu1 = (a + d) * 0.5 + disc;
    let mu2 = (a + d) * 0.5 - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

pub(crate) fn schur(a: &DMatrix<C>) -> Result<Schur> {
    let n = a.nrows();
    if n <= 1 {
        return Ok(Schur { q: DMatrix::identity(n, n), t: a.clone() });
    }
    let (mut q, mut h) = Hessenberg::new(a.clone()).unpack();
    for j in 0..n {
        for i in (j + 2)..n {
            h[(i, j)] = C::new(0.0, 0.0);
        }
    }
    let scale = h.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = 100 * n * n + 1000;
    while hi > 0 {
        // deflation: find start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let ref_scale = if diag > 0.0 { diag } else { scale };
            if sub <= f64::EPSILON * ref_scale || sub <= tiny {
                h[(lo, lo - 1)] = C::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_total {
            return Err(Error::SpectralSplit("complex QR iteration did not converge".into()));
        }
        let mu = if iter % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.5)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - mu, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let g = Givens::zeroing(x, y);
            let first_col = if k == lo { lo } else { k - 1 };
            g.apply_left(&mut h, k, first_col..n);
            let last_row = (k + 2).min(hi);
            g.apply_right(&mut h, k, 0..last_row + 1);
            g.apply_right(&mut q, k, 0..n);
            if k > lo {
                h[(k + 1, k - 1)] = C::new(0.0, 0.0);
            }
        }
    }
    for j in 0..n {
        for i in (j + 1)..n {
            h[(i, j)] = C::new(0.0, 0.0);
        }
    }
    Ok(Schur { q, t: h })
}

impl Schur {
    /// Swaps the diagonal entries at `k` and `k + 1`.
    fn swap(&mut self, k: usize) {
        let n = self.t.nrows();
        let a = self.t[(k, k)];
        let b = self.t[(k + 1, k + 1)];
        let x = self.t[(k, k + 1)];
        let g = Givens::zeroing(x, b - a);
        g.apply_left(&mut self.t, k, k..n);
        g.apply_right(&mut self.t, k, 0..k + 2);
        g.apply_right(&mut self.q, k, 0..n);
        self.t[(k + 1, k)] = C::new(0.0, 0.0);
        self.t[(k, k)] = b;
        self.t[(k + 1, k + 1)] = a;
    }

    /// Moves every eigenvalue satisfying `select` to the leading block,
    /// keeping relative order. Returns the size of that block.
    pub fn reorder(&mut self, select: impl Fn(C) -> bool) -> usize {
        let n = self.t.nrows();
        let mut filled = 0;
        for j in 0..n {
            if select(self.t[(j, j)]) {
                let mut pos = j;
                while pos > filled {
                    self.swap(pos - 1);
                    pos -= 1;
                }
                filled += 1;
            }
        }
        filled
    }

    pub fn eigenvalues(&self) -> Vec<C> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }
}
