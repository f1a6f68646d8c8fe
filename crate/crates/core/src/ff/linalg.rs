use super::field::{Fe, FieldCtx};

/// Reduced row echelon form in place; returns the pivot columns.
/// Pivot rows are taken in index order, so the result is deterministic.
pub fn rref(f: &FieldCtx, m: &mut Vec<Vec<Fe>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]).expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let s = row[c];
            for (x, &y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(s, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// Basis of `{v : M v = 0}`, one vector per free column with a 1 in that
/// column, ordered by free column.
pub fn nullspace(f: &FieldCtx, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m: Vec<Vec<Fe>> = rows.to_vec();
    let pivots = rref(f, &mut m, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[r][free]);
        }
        out.push(v);
    }
    out
}

/// Rank of the row set.
pub fn rank(f: &FieldCtx, rows: &[Vec<Fe>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m, ncols).len()
}
