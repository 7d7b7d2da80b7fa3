use super::Cyclo;
use crate::error::{Error, Result};

/// Outcome of an exact solve: a particular solution (free variables set to
/// zero) and a basis of the kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub particular: Vec<Cyclo>,
    pub kernel: Vec<Vec<Cyclo>>,
    pub rank: usize,
}

impl Solution {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

struct Echelon {
    rows: Vec<Vec<Cyclo>>,
    pivots: Vec<usize>,
}

/// Fraction-free (Bareiss) forward elimination on an augmented matrix.
fn eliminate(mut a: Vec<Vec<Cyclo>>, ncols: usize, order: u32) -> Echelon {
    let nrows = a.len();
    let width = a.first().map(|r| r.len()).unwrap_or(0);
    let mut prev = Cyclo::one(order);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv_prev = prev.inv().expect("nonzero Bareiss pivot");
        for i in row + 1..nrows {
            if a[i][col].is_zero() {
                for j in col + 1..width {
                    let v = &(&a[row][col] * &a[i][j]) * &inv_prev;
                    a[i][j] = v;
                }
                continue;
            }
            for j in col + 1..width {
                let v = &(&(&a[row][col] * &a[i][j]) - &(&a[i][col] * &a[row][j])) * &inv_prev;
                a[i][j] = v;
            }
            a[i][col] = Cyclo::zero(order);
        }
        prev = a[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    Echelon { rows: a, pivots }
}

fn common_order(matrix: &[Vec<Cyclo>], rhs: &[Cyclo]) -> u32 {
    matrix
        .iter()
        .flatten()
        .chain(rhs)
        .fold(1, |acc, x| super::lcm_u32(acc, x.order()))
}

/// Solve `matrix * x = rhs` exactly over a cyclotomic field.
pub fn solve_linear_exact(matrix: &[Vec<Cyclo>], rhs: &[Cyclo]) -> Result<Solution> {
    if matrix.len() != rhs.len() {
        return Err(Error::Invalid("row count differs from rhs length".into()));
    }
    let ncols = matrix.first().map(|r| r.len()).unwrap_or(0);
    if matrix.iter().any(|r| r.len() != ncols) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    let order = common_order(matrix, rhs);
    let aug: Vec<Vec<Cyclo>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().chain(std::iter::once(b)).map(|x| x.lift(order).unwrap()).collect())
        .collect();
    let ech = eliminate(aug, ncols, order);
    let rank = ech.pivots.len();
    if ech.rows[rank..].iter().any(|r| !r[ncols].is_zero()) {
        return Err(Error::NoSolution);
    }
    let solve_with = |rhs_col: &dyn Fn(usize) -> Cyclo, free: &dyn Fn(usize) -> Cyclo| -> Vec<Cyclo> {
        let mut x: Vec<Cyclo> = (0..ncols).map(free).collect();
        for (k, &pc) in ech.pivots.iter().enumerate().rev() {
            let row = &ech.rows[k];
            let mut s = rhs_col(k);
            for j in pc + 1..ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    s -= &(&row[j] * &x[j]);
                }
            }
            x[pc] = &s / &row[pc];
        }
        x
    };
    let is_pivot: Vec<bool> = (0..ncols).map(|c| ech.pivots.contains(&c)).collect();
    let particular = solve_with(&|k| ech.rows[k][ncols].clone(), &|_| Cyclo::zero(order));
    let mut kernel = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        kernel.push(solve_with(&|_| Cyclo::zero(order), &|c| {
            if c == f {
                Cyclo::one(order)
            } else {
                Cyclo::zero(order)
            }
        }));
    }
    Ok(Solution { particular, kernel, rank })
}

/// Rank of a matrix over a cyclotomic field.
pub fn rank(matrix: &[Vec<Cyclo>]) -> usize {
    if matrix.is_empty() {
        return 0;
    }
    let order = common_order(matrix, &[]);
    let ncols = matrix[0].len();
    let a = matrix.iter().map(|r| r.iter().map(|x| x.lift(order).unwrap()).collect()).collect();
    eliminate(a, ncols, order).pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclo {
        Cyclo::from_int(6, n)
    }

    #[test]
    fn identity_and_scalar() {
        let id = vec![vec![c(1), c(0)], vec![c(0), c(1)]];
        let s = solve_linear_exact(&id, &[c(3), c(-2)]).unwrap();
        assert_eq!(s.particular, vec![c(3), c(-2)]);
        assert!(s.is_unique());
        let z3 = Cyclo::zeta(3, 1);
        let s = solve_linear_exact(&[vec![z3.clone()]], &[Cyclo::one(3)]).unwrap();
        assert_eq!(s.particular[0], Cyclo::from_int(3, -1) - z3);
    }

    #[test]
    fn degenerate_and_inconsistent() {
        let m = vec![vec![c(1), c(2)], vec![c(2), c(4)]];
        let s = solve_linear_exact(&m, &[c(1), c(2)]).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.kernel.len(), 1);
        let k = &s.kernel[0];
        assert!((&k[0] + &(&c(2) * &k[1])).is_zero());
        assert_eq!(solve_linear_exact(&m, &[c(1), c(3)]), Err(Error::NoSolution));
    }
}
