//! Small dense matrices over a [`Scalar`], solved by fraction-free elimination.

use super::scalar::Scalar;
use super::MathError;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<K: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> ExactMatrix<K> {
    pub fn from_rows(rows: Vec<Vec<K>>) -> Result<Self, MathError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(MathError::Dimension(format!("matrix must be rectangular and non-empty, got {r} rows")));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds the matrix whose k-th column is `columns[k]`.
    pub fn from_columns(columns: Vec<Vec<K>>) -> Result<Self, MathError> {
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(MathError::Dimension("ragged columns".into()));
        }
        let rows = (0..r).map(|i| columns.iter().map(|col| col[i].clone()).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn mul_vec(&self, x: &[K]) -> Result<Vec<K>, MathError> {
        if x.len() != self.cols {
            return Err(MathError::Dimension("vector length".into()));
        }
        (0..self.rows)
            .map(|r| {
                let mut acc = x[0].zero_like();
                for (c, xc) in x.iter().enumerate() {
                    acc = acc.try_add(&self.get(r, c).try_mul(xc)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Common π grade of all nonzero entries; mixed grades are rejected.
    fn common_grade(items: &[K]) -> Result<u8, MathError> {
        let mut grade = None;
        for x in items {
            if x.is_zero() {
                continue;
            }
            let (_, g) = x.degrade();
            match grade {
                None => grade = Some(g),
                Some(prev) if prev != g => return Err(MathError::GradeMismatch(prev, g)),
                _ => {}
            }
        }
        Ok(grade.unwrap_or(0))
    }

    fn square_check(&self) -> Result<(), MathError> {
        if self.rows != self.cols {
            return Err(MathError::Dimension(format!("expected a square matrix, got {}x{}", self.rows, self.cols)));
        }
        Ok(())
    }

    /// Bareiss elimination on the grade-stripped augmented matrix.
    /// Returns the reduced rows and the determinant sign bookkeeping.
    fn eliminate(&self, rhs: Option<&[K]>) -> Result<(Vec<Vec<K>>, K), MathError> {
        let n = self.rows;
        let extra = usize::from(rhs.is_some());
        let mut a: Vec<Vec<K>> = (0..n)
            .map(|r| {
                let mut row: Vec<K> = (0..n).map(|c| self.get(r, c).degrade().0).collect();
                if let Some(b) = rhs {
                    row.push(b[r].degrade().0);
                }
                row
            })
            .collect();
        let one = {
            let z = a[0][0].zero_like();
            // degrade of a nonzero entry is grade 0; build 1 from x/x
            let nz = a.iter().flatten().find(|x| !x.is_zero()).cloned();
            match nz {
                Some(x) => x.try_div(&x)?,
                None => return Err(MathError::SingularMatrix),
            }
            .try_add(&z)?
        };
        let mut prev = one.clone();
        let mut sign = one;
        for k in 0..n {
            let pivot_row = pick_pivot(&a, k).ok_or(MathError::SingularMatrix)?;
            if pivot_row != k {
                a.swap(k, pivot_row);
                sign = sign.negate();
            }
            for i in k + 1..n {
                for j in k + 1..n + extra {
                    let t = a[i][j].try_mul(&a[k][k])?.try_sub(&a[i][k].try_mul(&a[k][j])?)?;
                    a[i][j] = t.try_div(&prev)?;
                }
                a[i][k] = a[i][k].zero_like();
            }
            prev = a[k][k].clone();
        }
        Ok((a, sign))
    }

    /// Solves `M·x = rhs` exactly. Entries of M and of rhs must each share a
    /// single π grade; the solution carries the difference.
    pub fn solve_exact(&self, rhs: &[K]) -> Result<Vec<K>, MathError> {
        self.square_check()?;
        if rhs.len() != self.rows {
            return Err(MathError::Dimension("rhs length".into()));
        }
        let gm = Self::common_grade(&self.data)?;
        let gr = Self::common_grade(rhs)?;
        if rhs.iter().all(Scalar::is_zero) {
            // still detect singularity
            self.eliminate(None)?;
            return Ok(rhs.to_vec());
        }
        if gr < gm {
            return Err(MathError::PiGradeOverflow(gr as i32 - gm as i32));
        }
        let n = self.rows;
        let (a, _) = self.eliminate(Some(rhs))?;
        let mut x: Vec<Option<K>> = vec![None; n];
        for i in (0..n).rev() {
            let mut acc = a[i][n].clone();
            for j in i + 1..n {
                let xj = x[j].as_ref().expect("back substitution order");
                acc = acc.try_sub(&a[i][j].try_mul(xj)?)?;
            }
            x[i] = Some(acc.try_div(&a[i][i])?);
        }
        x.into_iter().map(|v| v.expect("filled").regrade(gr - gm)).collect()
    }

    /// Determinant of the grade-stripped matrix together with the π power
    /// that was factored out (n times the common entry grade).
    pub fn determinant(&self) -> Result<(K, u32), MathError> {
        self.square_check()?;
        let g = Self::common_grade(&self.data)?;
        let n = self.rows;
        let det = match self.eliminate(None) {
            Ok((a, sign)) => a[n - 1][n - 1].try_mul(&sign)?,
            Err(MathError::SingularMatrix) => self.data[0].zero_like().degrade().0,
            Err(e) => return Err(e),
        };
        Ok((det, g as u32 * n as u32))
    }
}

fn pick_pivot<K: Scalar>(a: &[Vec<K>], k: usize) -> Option<usize> {
    // exact arithmetic: first nonzero; float path: largest magnitude
    let candidates = (k..a.len()).filter(|&r| !a[r][k].is_zero());
    candidates.max_by(|&r1, &r2| {
        let (x, y) = (a[r1][k].to_f64().abs(), a[r2][k].to_f64().abs());
        x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal).then(r2.cmp(&r1))
    })
}
