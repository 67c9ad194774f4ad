//! Exact linear algebra over a coefficient field.
//!
//! Over specialized coefficients plain Gaussian elimination is used. Over K
//! the entries are cleared to Laurent polynomials and reduced with
//! fraction-free (Bareiss) elimination, whose divisions are exact.

use crate::kfield::{Coeff, FieldElem, LaurentPoly2};

/// Rank by Gaussian elimination with lightest-pivot choice.
pub fn gauss_rank<C: Coeff>(rows: &[Vec<C>]) -> usize {
    let mut m: Vec<Vec<C>> = rows.to_vec();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    for r in &mut m {
        r.resize(ncols, C::zero());
    }
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].weight());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inv().expect("pivot is nonzero");
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].mul(&inv);
            for j in col..ncols {
                if !m[rank][j].is_zero() {
                    let d = f.mul(&m[rank][j]);
                    m[i][j] = m[i][j].sub(&d);
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Solve `sum_i x_i rows[i] = target`; free unknowns are set to zero.
pub fn gauss_solve_left<C: Coeff>(rows: &[Vec<C>], target: &[C]) -> Option<Vec<C>> {
    let n = rows.len();
    let ncols = target.len();
    // Equation j: sum_i rows[i][j] x_i = target[j]; augmented column n.
    let mut m: Vec<Vec<C>> = (0..ncols)
        .map(|j| {
            let mut eq: Vec<C> = rows.iter().map(|r| r.get(j).cloned().unwrap_or_else(C::zero)).collect();
            eq.push(target[j].clone());
            eq
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].weight());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inv().expect("pivot is nonzero");
        for j in col..=n {
            m[rank][j] = m[rank][j].mul(&inv);
        }
        for i in 0..m.len() {
            if i == rank || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=n {
                if !m[rank][j].is_zero() {
                    let d = f.mul(&m[rank][j]);
                    m[i][j] = m[i][j].sub(&d);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if m[rank..].iter().any(|eq| !eq[n].is_zero()) {
        return None;
    }
    let mut x = vec![C::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Some(x)
}

fn clear_row(row: &[FieldElem]) -> Vec<LaurentPoly2> {
    let mut l = LaurentPoly2::one();
    for e in row {
        if e.is_zero() || e.denom().is_one() {
            continue;
        }
        let d = e.denom();
        if l.div_exact(d).is_some() {
            continue;
        }
        l = match d.div_exact(&l) {
            Some(_) => d.clone(),
            None => l.mul(d),
        };
    }
    row.iter()
        .map(|e| {
            if e.is_zero() {
                LaurentPoly2::zero()
            } else {
                let k = l.div_exact(e.denom()).expect("l is a multiple of every denominator");
                e.numer().mul(&k)
            }
        })
        .collect()
}

/// Fraction-free forward elimination in place. Returns the pivot columns.
/// Pivots are searched among the first `ncols` columns; updates run over
/// the full row width.
fn bareiss_forward(m: &mut [Vec<LaurentPoly2>], ncols: usize) -> Vec<usize> {
    let width = m.first().map_or(0, Vec::len);
    let mut prev = LaurentPoly2::one();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let pivot = (rank..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| m[i][col].len());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let pv = m[rank][col].clone();
        for i in rank + 1..m.len() {
            let f = m[i][col].clone();
            for j in col..width {
                let a = m[i][j].mul(&pv);
                let b = f.mul(&m[rank][j]);
                let v = a.sub(&b);
                m[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pv;
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    pivots
}

/// Rank over K by fraction-free elimination.
pub fn bareiss_rank(rows: &[Vec<FieldElem>]) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<LaurentPoly2>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, FieldElem::zero());
            clear_row(&r)
        })
        .collect();
    bareiss_forward(&mut m, ncols).len()
}

/// Solve `sum_i x_i rows[i] = target` over K by fraction-free elimination.
pub fn bareiss_solve_left(rows: &[Vec<FieldElem>], target: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let n = rows.len();
    let ncols = target.len();
    let mut m: Vec<Vec<LaurentPoly2>> = (0..ncols)
        .map(|j| {
            let mut eq: Vec<FieldElem> = rows
                .iter()
                .map(|r| r.get(j).cloned().unwrap_or_else(FieldElem::zero))
                .collect();
            eq.push(target[j].clone());
            clear_row(&eq)
        })
        .collect();
    let pivots = bareiss_forward(&mut m, n);
    let rank = pivots.len();
    if m[rank..].iter().any(|eq| !eq[n].is_zero()) {
        return None;
    }
    let mut x = vec![FieldElem::zero(); n];
    for r in (0..rank).rev() {
        let c = pivots[r];
        let mut acc = FieldElem::from_poly(m[r][n].clone());
        for (&c2, x2) in pivots[r + 1..].iter().map(|c2| (c2, &x[*c2])).collect::<Vec<_>>() {
            if !m[r][c2].is_zero() && !x2.is_zero() {
                acc = acc.sub(&FieldElem::from_poly(m[r][c2].clone()).mul(x2));
            }
        }
        x[c] = acc.div(&FieldElem::from_poly(m[r][c].clone())).expect("pivot is nonzero");
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::{parse_k, Rat};

    fn k(s: &str) -> FieldElem {
        parse_k(s).unwrap()
    }

    #[test]
    fn rational_rank_and_solve() {
        let rows = vec![
            vec![Rat::new(1, 1), Rat::new(2, 1), Rat::new(3, 1)],
            vec![Rat::new(2, 1), Rat::new(4, 1), Rat::new(6, 1)],
            vec![Rat::new(0, 1), Rat::new(1, 1), Rat::new(1, 2)],
        ];
        assert_eq!(gauss_rank(&rows), 2);
        let target = vec![Rat::new(1, 1), Rat::new(3, 1), Rat::new(7, 2)];
        let x = gauss_solve_left(&rows, &target).unwrap();
        for j in 0..3 {
            let v = (0..3).fold(Rat::zero(), |acc, i| acc.add(&x[i].mul(&rows[i][j])));
            assert_eq!(v, target[j]);
        }
        assert!(gauss_solve_left(&rows, &[Rat::new(1, 1), Rat::zero(), Rat::zero()]).is_none());
    }

    #[test]
    fn symbolic_rank_and_solve() {
        let rows = vec![
            vec![k("s"), k("1/t"), k("1")],
            vec![k("s^2"), k("s/t"), k("s")],
            vec![k("1 - s"), k("t"), k("(1+s)/(1-t)")],
        ];
        assert_eq!(bareiss_rank(&rows), 2);
        let target: Vec<FieldElem> = (0..3).map(|j| rows[0][j].mul_int(2).sub(&rows[2][j].mul(&k("s/3")))).collect();
        let x = bareiss_solve_left(&rows, &target).unwrap();
        for j in 0..3 {
            let v = (0..3).fold(FieldElem::zero(), |acc, i| acc.add(&x[i].mul(&rows[i][j])));
            assert_eq!(v, target[j]);
        }
    }

    use crate::kfield::Coeff;
}
