//! Fraction-free (Bareiss) elimination over big integers.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("singular linear system of size {0}")]
    SingularSystem(usize),
}

/// Integer row-echelon form produced by Bareiss elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_row(row: &[Rational], rhs: Option<&Rational>) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for r in row.iter().chain(rhs) {
        l = l.lcm(r.denom());
    }
    row.iter()
        .chain(rhs)
        .map(|r| r.numer() * (&l / r.denom()))
        .collect()
}

/// Eliminates on the first `ncols` columns; any further columns are carried along.
fn bareiss(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    let width = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..width {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots }
}

fn back_substitute(e: &Echelon, ncols: usize, free: &[(usize, Rational)], rhs: Option<usize>) -> Vec<Rational> {
    let mut y = vec![Rational::zero(); ncols];
    for (c, v) in free {
        y[*c] = v.clone();
    }
    for (i, &pc) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[i];
        let mut acc = match rhs {
            Some(c) => Rational::from_integer(row[c].clone()),
            None => Rational::zero(),
        };
        for j in pc + 1..ncols {
            if !row[j].is_zero() {
                acc -= Rational::from_integer(row[j].clone()) * &y[j];
            }
        }
        y[pc] = acc / Rational::from_integer(row[pc].clone());
    }
    y
}

/// Solves the square system `a y = b` exactly.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| integer_row(row, Some(rhs)))
        .collect();
    let e = bareiss(m, n);
    if e.pivots.len() < n {
        return Err(LinAlgError::SingularSystem(n));
    }
    Ok(back_substitute(&e, n, &[], Some(n)))
}

/// Solves `a y = b` for several right-hand sides `bs` at once.
pub fn solve_many(a: &[Vec<Rational>], bs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, LinAlgError> {
    let n = a.len();
    if n == 0 {
        return Ok(vec![Vec::new(); bs.len()]);
    }
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(bs.iter().map(|b| b[i].clone()));
            integer_row(&row, None)
        })
        .collect();
    let e = bareiss(m, n);
    if e.pivots.len() < n {
        return Err(LinAlgError::SingularSystem(n));
    }
    Ok((0..bs.len()).map(|j| back_substitute(&e, n, &[], Some(n + j))).collect())
}

/// Rank of a set of rational rows over `ncols` columns.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = rows.iter().map(|r| integer_row(r, None)).collect();
    bareiss(m, ncols).pivots.len()
}

/// A nonzero vector `d` with `row · d = 0` for every row, if the rows do not have full column rank.
pub fn null_vector(rows: &[Vec<Rational>], ncols: usize) -> Option<Vec<Rational>> {
    let e = if rows.is_empty() {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    } else {
        bareiss(rows.iter().map(|r| integer_row(r, None)).collect(), ncols)
    };
    let free = (0..ncols).find(|c| !e.pivots.contains(c))?;
    Some(back_substitute(&e, ncols, &[(free, Rational::one())], None))
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::rational::{int, rat};

    fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn solves_small_system() {
        let a = vec![
            vec![int(2), int(1), int(-1)],
            vec![int(-3), int(-1), int(2)],
            vec![int(-2), int(1), int(2)],
        ];
        let b = vec![int(8), int(-11), int(-3)];
        assert_eq!(solve(&a, &b).unwrap(), vec![int(2), int(3), int(-1)]);
    }

    #[test]
    fn rational_coefficients_and_pivoting() {
        let a = vec![vec![int(0), rat(1, 2)], vec![rat(1, 3), int(1)]];
        let b = vec![int(1), int(0)];
        let y = solve(&a, &b).unwrap();
        assert_eq!(dot(&a[0], &y), int(1));
        assert_eq!(dot(&a[1], &y), int(0));
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(solve(&a, &[int(1), int(2)]), Err(LinAlgError::SingularSystem(2)));
    }

    #[test]
    fn null_space_and_rank() {
        let rows = vec![vec![int(1), int(-1), int(0)], vec![int(0), int(1), int(-1)]];
        assert_eq!(rank(&rows, 3), 2);
        let d = null_vector(&rows, 3).unwrap();
        assert!(d.iter().any(|v| !v.is_zero()));
        for r in &rows {
            assert_eq!(dot(r, &d), int(0));
        }
        let full = vec![vec![int(1), int(0)], vec![int(1), int(1)]];
        assert!(null_vector(&full, 2).is_none());
        assert_eq!(null_vector(&[], 2), Some(vec![int(1), int(0)]));
    }
}
