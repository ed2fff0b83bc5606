//! Smith and Hermite normal forms with deterministic pivoting.
//!
//! Pivot strategy: smallest nonzero absolute value in the working submatrix,
//! ties broken by lowest row index, then lowest column index.  This keeps
//! intermediate growth modest and makes every output reproducible.


use super::matrix::IntMatrix;
use crate::scalar::Scalar;

/// Which transformation matrices to track during the reduction.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Track {
    None,
    UV,
    /// U, V, and both inverses.
    All,
    VInvOnly,
    UOnly,
    UInvOnly,
    VOnly,
}

impl Track {
    fn u(self) -> bool {
        matches!(self, Track::UV | Track::All | Track::UOnly)
    }
    fn v(self) -> bool {
        matches!(self, Track::UV | Track::All | Track::VOnly)
    }
    fn u_inv(self) -> bool {
        matches!(self, Track::All | Track::UInvOnly)
    }
    fn v_inv(self) -> bool {
        matches!(self, Track::All | Track::VInvOnly)
    }
}

/// Smith decomposition `u · a · v = d` with `d` diagonal and each diagonal
/// entry dividing the next.
pub struct Snf<S> {
    pub d: IntMatrix<S>,
    pub u: Option<IntMatrix<S>>,
    pub v: Option<IntMatrix<S>>,
    pub u_inv: Option<IntMatrix<S>>,
    pub v_inv: Option<IntMatrix<S>>,
    pub rank: usize,
}

impl<S: Scalar> Snf<S> {
    /// Diagonal entries of `d`, nonzero ones first.
    pub fn diagonal(&self) -> Vec<S> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// The spec-level entry point: returns `(u, d, v)` with `u·a·v = d`.
pub fn smith_normal_form<S: Scalar>(a: &IntMatrix<S>) -> (IntMatrix<S>, IntMatrix<S>, IntMatrix<S>) {
    let f = snf_with(a, Track::UV);
    (f.u.unwrap(), f.d, f.v.unwrap())
}

pub fn snf_with<S: Scalar>(a: &IntMatrix<S>, track: Track) -> Snf<S> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = track.u().then(|| IntMatrix::identity(m));
    let mut u_inv = track.u_inv().then(|| IntMatrix::identity(m));
    let mut v = track.v().then(|| IntMatrix::identity(n));
    let mut v_inv = track.v_inv().then(|| IntMatrix::identity(n));

    let mut t = 0;
    while t < m && t < n {
        // Deterministic pivot: smallest |entry| ≠ 0, lowest row, lowest col.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d.get(i, j).is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => d.get(i, j).abs() < d.get(pi, pj).abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, &mut u, &mut u_inv, t, pi);
        swap_cols(&mut d, &mut v, &mut v_inv, t, pj);

        loop {
            // Clear column t below the pivot.
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).clone() / d.get(t, t).clone();
                if !q.is_zero() {
                    row_op(&mut d, &mut u, &mut u_inv, i, t, &(-q));
                }
                if !d.get(i, t).is_zero() {
                    // Remainder is smaller than the pivot; promote it.
                    swap_rows(&mut d, &mut u, &mut u_inv, t, i);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Clear row t right of the pivot.
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).clone() / d.get(t, t).clone();
                if !q.is_zero() {
                    col_op(&mut d, &mut v, &mut v_inv, j, t, &(-q));
                }
                if !d.get(t, j).is_zero() {
                    swap_cols(&mut d, &mut v, &mut v_inv, t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility sweep over the untouched submatrix.
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(d.get(i, j).clone() % d.get(t, t).clone()).is_zero());
            match offender {
                Some((i, _)) => {
                    row_op(&mut d, &mut u, &mut u_inv, t, i, &S::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, &mut u, &mut u_inv, t);
        }
        t += 1;
    }
    Snf { d, u, v, u_inv, v_inv, rank: t }
}

fn swap_rows<S: Scalar>(
    d: &mut IntMatrix<S>,
    u: &mut Option<IntMatrix<S>>,
    u_inv: &mut Option<IntMatrix<S>>,
    i: usize,
    j: usize,
) {
    d.swap_rows(i, j);
    if let Some(u) = u {
        u.swap_rows(i, j);
    }
    if let Some(ui) = u_inv {
        ui.swap_cols(i, j);
    }
}

fn swap_cols<S: Scalar>(
    d: &mut IntMatrix<S>,
    v: &mut Option<IntMatrix<S>>,
    v_inv: &mut Option<IntMatrix<S>>,
    i: usize,
    j: usize,
) {
    d.swap_cols(i, j);
    if let Some(v) = v {
        v.swap_cols(i, j);
    }
    if let Some(vi) = v_inv {
        vi.swap_rows(i, j);
    }
}

/// row_i += c · row_j on `d`, mirrored into the transforms.
fn row_op<S: Scalar>(
    d: &mut IntMatrix<S>,
    u: &mut Option<IntMatrix<S>>,
    u_inv: &mut Option<IntMatrix<S>>,
    i: usize,
    j: usize,
    c: &S,
) {
    d.row_op(i, j, c);
    if let Some(u) = u {
        u.row_op(i, j, c);
    }
    if let Some(ui) = u_inv {
        // (E·U)⁻¹ = U⁻¹·E⁻¹: col_j −= c · col_i
        ui.col_op(j, i, &(-c.clone()));
    }
}

/// col_i += c · col_j on `d`, mirrored into the transforms.
fn col_op<S: Scalar>(
    d: &mut IntMatrix<S>,
    v: &mut Option<IntMatrix<S>>,
    v_inv: &mut Option<IntMatrix<S>>,
    i: usize,
    j: usize,
    c: &S,
) {
    d.col_op(i, j, c);
    if let Some(v) = v {
        v.col_op(i, j, c);
    }
    if let Some(vi) = v_inv {
        // (V·E)⁻¹ = E⁻¹·V⁻¹: row_j −= c · row_i
        vi.row_op(j, i, &(-c.clone()));
    }
}

fn negate_row<S: Scalar>(
    d: &mut IntMatrix<S>,
    u: &mut Option<IntMatrix<S>>,
    u_inv: &mut Option<IntMatrix<S>>,
    i: usize,
) {
    d.negate_row(i);
    if let Some(u) = u {
        u.negate_row(i);
    }
    if let Some(ui) = u_inv {
        ui.negate_col(i);
    }
}

/// Canonical row Hermite normal form.  Pivots are positive, entries above a
/// pivot are reduced into `[0, pivot)`, zero rows are dropped.  Two row sets
/// span the same lattice iff their HNFs are equal.
pub fn row_hnf<S: Scalar>(a: &IntMatrix<S>) -> IntMatrix<S> {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        // Euclid the column entries below r into a single pivot.
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => h.get(i, j).abs() < h.get(b, j).abs(),
                };
                if better {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            let mut clean = true;
            for i in r + 1..m {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).clone() / h.get(r, j).clone();
                if !q.is_zero() {
                    h.row_op(i, r, &(-q));
                }
                if !h.get(i, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, j).is_zero() {
            continue;
        }
        if h.get(r, j).is_negative() {
            h.negate_row(r);
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = h.get(i, j).clone().div_floor(h.get(r, j));
            if !q.is_zero() {
                h.row_op(i, r, &(-q));
            }
        }
        r += 1;
    }
    IntMatrix::from_fn(r, n, |i, j| h.get(i, j).clone())
}

/// Saturated basis of the integer kernel `{x : a·x = 0}`, returned as rows
/// in canonical HNF.
pub fn kernel_basis<S: Scalar>(a: &IntMatrix<S>) -> IntMatrix<S> {
    let n = a.cols();
    let f = snf_with(a, Track::VOnly);
    let v = f.v.unwrap();
    let idx: Vec<usize> = (f.rank..n).collect();
    row_hnf(&v.select_cols(&idx).transpose())
}

/// One integer solution of `a·x = b`, if any.
pub fn solve<S: Scalar>(a: &IntMatrix<S>, b: &[S]) -> Option<Vec<S>> {
    let rhs = IntMatrix::from_fn(b.len(), 1, |i, _| b[i].clone());
    solve_many(a, &rhs).map(|x| x.col_vec(0))
}

/// Integer solutions of `a·X = B`, column by column, sharing one normal
/// form.  `None` when any column is unsolvable.
pub fn solve_many<S: Scalar>(a: &IntMatrix<S>, b: &IntMatrix<S>) -> Option<IntMatrix<S>> {
    assert_eq!(b.rows(), a.rows());
    let f = snf_with(a, Track::UV);
    let u = f.u.unwrap();
    let v = f.v.unwrap();
    let ub = &u * b;
    let mut y = IntMatrix::zeros(a.cols(), b.cols());
    for j in 0..b.cols() {
        for i in 0..a.rows() {
            let ub_ij = ub.get(i, j);
            if i < f.rank {
                let d = f.d.get(i, i);
                if !(ub_ij.clone() % d.clone()).is_zero() {
                    return None;
                }
                y.set(i, j, ub_ij.clone() / d.clone());
            } else if !ub_ij.is_zero() {
                return None;
            }
        }
    }
    Some(&v * &y)
}
