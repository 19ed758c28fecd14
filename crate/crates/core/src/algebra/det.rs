use super::elt::AlgElt;
use super::gen::{Ctx, GenSym};
use super::qcoeff::QCoeff;
use crate::error::{QError, QResult};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

pub fn inversions(p: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                c += 1;
            }
        }
    }
    c
}

/// Quantum determinant of the submatrix on the given (sorted) rows and columns,
/// expanded along rows.
pub fn sub_determinant(ctx: Ctx, rows: &[usize], cols: &[usize]) -> AlgElt {
    assert_eq!(rows.len(), cols.len());
    let mut r = AlgElt::zero(ctx);
    for s in permutations(rows.len()) {
        let w: Vec<GenSym> = rows.iter().zip(&s).map(|(&i, &t)| GenSym::u(i, cols[t])).collect();
        r.add_term(w, QCoeff::neg_q_pow(inversions(&s) as i32));
    }
    r
}

pub fn quantum_determinant(ctx: Ctx) -> AlgElt {
    let idx: Vec<usize> = (1..=ctx.n).collect();
    sub_determinant(ctx, &idx, &idx)
}

/// D^{jk}: remove row j and column k.
pub fn quantum_minor(ctx: Ctx, j: usize, k: usize) -> QResult<AlgElt> {
    if j == 0 || k == 0 || j > ctx.n || k > ctx.n {
        return Err(QError::InvalidIndex(format!("minor ({},{}) in N={}", j, k, ctx.n)));
    }
    let rows: Vec<usize> = (1..=ctx.n).filter(|&r| r != j).collect();
    let cols: Vec<usize> = (1..=ctx.n).filter(|&c| c != k).collect();
    Ok(sub_determinant(ctx, &rows, &cols))
}

/// D^q_tau = sum_sigma (-q)^{i(sigma)} u_{sigma(1) tau(1)} ... u_{sigma(N) tau(N)},
/// with `tau` given 0-based.
pub fn twisted_determinant(ctx: Ctx, tau: &[usize]) -> QResult<AlgElt> {
    let n = ctx.n;
    let mut seen = vec![false; n];
    if tau.len() != n || tau.iter().any(|&t| t >= n || std::mem::replace(&mut seen[t], true)) {
        return Err(QError::InvalidIndex(format!("{:?} is not a permutation of {} letters", tau, n)));
    }
    let mut r = AlgElt::zero(ctx);
    for s in permutations(n) {
        let w: Vec<GenSym> = (0..n).map(|t| GenSym::u(s[t] + 1, tau[t] + 1)).collect();
        r.add_term(w, QCoeff::neg_q_pow(inversions(&s) as i32));
    }
    Ok(r)
}
