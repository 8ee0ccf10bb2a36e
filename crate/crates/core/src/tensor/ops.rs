//! Index arithmetic on operators over a [`SystemLayout`].

use super::layout::SystemLayout;
use super::linalg::{CMatrix, ZERO};
use crate::error::{Error, Result};

/// Embed `op`, whose `i`-th tensor factor acts on target subsystem
/// `acting_on[i]`, into `target`, padding with identity elsewhere.
///
/// Works for any subset and any factor order: each target basis index is
/// decomposed into subsystem digits and the op digits are substituted.
pub fn embed_matrix(
    op: &CMatrix,
    op_dims: &[usize],
    acting_on: &[&str],
    target: &SystemLayout,
) -> Result<CMatrix> {
    if op_dims.len() != acting_on.len() {
        return Err(Error::LayoutMismatch(format!(
            "operator has {} factors but {} target labels were given",
            op_dims.len(),
            acting_on.len()
        )));
    }
    let d_op: usize = op_dims.iter().product();
    if op.nrows() != d_op || op.ncols() != d_op {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, factor dims multiply to {d_op}",
            op.nrows(),
            op.ncols()
        )));
    }
    let mut positions = Vec::with_capacity(acting_on.len());
    for (i, label) in acting_on.iter().enumerate() {
        let pos = target.position(label)?;
        if positions.contains(&pos) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        let d = target.parts()[pos].dim;
        if d != op_dims[i] {
            return Err(Error::DimensionMismatch(format!(
                "subsystem `{label}` has dimension {d}, operator factor has {}",
                op_dims[i]
            )));
        }
        positions.push(pos);
    }

    // Offset contributed by each op basis index, in target stride units.
    let op_offsets: Vec<usize> = (0..d_op)
        .map(|k| {
            let mut rem = k;
            let mut off = 0;
            for (f, &pos) in positions.iter().enumerate().rev() {
                let d = op_dims[f];
                off += (rem % d) * target.stride(pos);
                rem /= d;
            }
            off
        })
        .collect();

    let n = target.total_dim();
    let mut out = CMatrix::zeros(n, n);
    for row in 0..n {
        let mut sub_row = 0;
        let mut rest = row;
        for (f, &pos) in positions.iter().enumerate() {
            let digit = target.digit(row, pos);
            sub_row = sub_row * op_dims[f] + digit;
            rest -= digit * target.stride(pos);
        }
        for (sub_col, off) in op_offsets.iter().enumerate() {
            let v = op[(sub_row, sub_col)];
            if v != ZERO {
                out[(row, rest + off)] = v;
            }
        }
    }
    Ok(out)
}

/// Partial trace of any square matrix over the complement of `keep`.
/// The returned layout lists `keep` in the layout's own order.
pub fn partial_trace_matrix(
    m: &CMatrix,
    layout: &SystemLayout,
    keep: &[&str],
) -> Result<(CMatrix, SystemLayout)> {
    check_square(m, layout)?;
    let kept = layout.restrict(keep)?;
    let keep_pos: Vec<usize> = kept
        .labels()
        .iter()
        .map(|l| layout.position(l))
        .collect::<Result<_>>()?;
    let trace_pos: Vec<usize> = (0..layout.len()).filter(|p| !keep_pos.contains(p)).collect();

    let n = layout.total_dim();
    let d_keep = kept.total_dim();
    let d_trace = n / d_keep;

    // full index = keep_offset[k] + trace_offset[t]
    let keep_offset = offsets(layout, &keep_pos);
    let trace_offset = offsets(layout, &trace_pos);
    debug_assert_eq!(keep_offset.len(), d_keep);
    debug_assert_eq!(trace_offset.len(), d_trace);

    let mut out = CMatrix::zeros(d_keep, d_keep);
    for (i, &ki) in keep_offset.iter().enumerate() {
        for (j, &kj) in keep_offset.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &trace_offset {
                acc += m[(ki + t, kj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok((out, kept))
}

/// Transpose the digits of the subsystems in `on` between row and column.
pub fn partial_transpose_matrix(m: &CMatrix, layout: &SystemLayout, on: &[&str]) -> Result<CMatrix> {
    check_square(m, layout)?;
    let pos: Vec<usize> = on.iter().map(|l| layout.position(l)).collect::<Result<_>>()?;
    let n = layout.total_dim();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (mut ii, mut jj) = (i, j);
            for &p in &pos {
                let s = layout.stride(p);
                let (di, dj) = (layout.digit(i, p), layout.digit(j, p));
                ii = ii - di * s + dj * s;
                jj = jj - dj * s + di * s;
            }
            out[(ii, jj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Reorder tensor factors of `m` so they follow `order`.
pub fn permute_matrix(
    m: &CMatrix,
    layout: &SystemLayout,
    order: &[&str],
) -> Result<(CMatrix, SystemLayout)> {
    check_square(m, layout)?;
    let new_layout = layout.reordered(order)?;
    let map = index_map(layout, &new_layout)?;
    let n = layout.total_dim();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok((out, new_layout))
}

/// `map[i]` is the index in `to` of basis state `i` of `from`.
pub fn index_map(from: &SystemLayout, to: &SystemLayout) -> Result<Vec<usize>> {
    if from.len() != to.len() || from.total_dim() != to.total_dim() {
        return Err(Error::LayoutMismatch("layouts hold different subsystems".into()));
    }
    let to_pos: Vec<usize> = from
        .labels()
        .iter()
        .map(|l| to.position(l))
        .collect::<Result<_>>()?;
    Ok((0..from.total_dim())
        .map(|i| {
            (0..from.len())
                .map(|p| from.digit(i, p) * to.stride(to_pos[p]))
                .sum()
        })
        .collect())
}

fn offsets(layout: &SystemLayout, positions: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in positions {
        let d = layout.parts()[p].dim;
        let s = layout.stride(p);
        out = out
            .iter()
            .flat_map(|&o| (0..d).map(move |k| o + k * s))
            .collect();
    }
    out
}

fn check_square(m: &CMatrix, layout: &SystemLayout) -> Result<()> {
    let n = layout.total_dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, layout dimension is {n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}
