//! Dense row-major matrix and vector storage over [`BigScalar`].

use super::{BigScalar, LinalgError, PrecisionContext};

/// Dense matrix, row-major, all entries sharing one precision context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigScalar>,
    digits: u32,
}

impl DenseMatrix {
    pub fn zeros(ctx: PrecisionContext, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let data = (0..rows * cols).map(|_| ctx.zero()).collect();
        Self {
            rows,
            cols,
            data,
            digits: ctx.digits(),
        }
    }

    /// Build entrywise; `f(i, j)` must produce scalars under `ctx`.
    pub fn from_fn(
        ctx: PrecisionContext,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigScalar,
    ) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                assert_eq!(
                    v.digits(),
                    ctx.digits(),
                    "entry ({i},{j}) was created under a different precision context"
                );
                data.push(v);
            }
        }
        Self {
            rows,
            cols,
            data,
            digits: ctx.digits(),
        }
    }

    /// Assemble from row-major storage produced elsewhere (e.g. in parallel).
    pub fn from_row_major(
        ctx: PrecisionContext,
        rows: usize,
        cols: usize,
        data: Vec<BigScalar>,
    ) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(data.len(), rows * cols, "storage length mismatch");
        for v in &data {
            assert_eq!(
                v.digits(),
                ctx.digits(),
                "entry created under a different precision context"
            );
        }
        Self {
            rows,
            cols,
            data,
            digits: ctx.digits(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits).expect("stored context is valid")
    }

    pub fn get(&self, i: usize, j: usize) -> &BigScalar {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigScalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigScalar) {
        assert_eq!(v.digits(), self.digits, "context mismatch in set");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigScalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// Pivot row (index `k`) and the rows below it, disjoint for elimination.
    pub(crate) fn pivot_and_below(&mut self, k: usize) -> (&[BigScalar], &mut [BigScalar]) {
        let (head, tail) = self.data.split_at_mut((k + 1) * self.cols);
        (&head[k * self.cols..], tail)
    }

    /// Max column sum of absolute values (the induced 1-norm).
    pub fn one_norm(&self) -> BigScalar {
        let ctx = self.context();
        let mut best = ctx.zero();
        let mut sum = ctx.zero();
        for j in 0..self.cols {
            sum.assign_from(&ctx.zero());
            for i in 0..self.rows {
                sum += &self.get(i, j).abs();
            }
            if sum > best {
                best.assign_from(&sum);
            }
        }
        best
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigScalar {
        let mut best = self.context().zero();
        for v in &self.data {
            if v.cmp_abs(&best) == std::cmp::Ordering::Greater {
                best = v.abs();
            }
        }
        best
    }

    /// y = A*x with ascending-index dot products.
    pub fn matvec(&self, x: &DenseVector) -> Result<DenseVector, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimMismatch {
                op: "matvec",
                expected: self.cols,
                found: x.len(),
            });
        }
        let ctx = self.context();
        let mut out = Vec::with_capacity(self.rows);
        let mut tmp = ctx.zero();
        for i in 0..self.rows {
            let mut acc = ctx.zero();
            for (a, b) in self.row(i).iter().zip(x.as_slice()) {
                tmp.assign_mul(a, b);
                acc += &tmp;
            }
            out.push(acc);
        }
        DenseVector::from_vec(ctx, out)
    }
}

/// Dense column vector sharing one precision context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseVector {
    data: Vec<BigScalar>,
    digits: u32,
}

impl DenseVector {
    pub fn zeros(ctx: PrecisionContext, len: usize) -> Self {
        Self {
            data: (0..len).map(|_| ctx.zero()).collect(),
            digits: ctx.digits(),
        }
    }

    pub fn from_vec(ctx: PrecisionContext, data: Vec<BigScalar>) -> Result<Self, LinalgError> {
        for v in &data {
            assert_eq!(
                v.digits(),
                ctx.digits(),
                "vector entry created under a different precision context"
            );
        }
        Ok(Self {
            data,
            digits: ctx.digits(),
        })
    }

    pub fn from_fn(ctx: PrecisionContext, len: usize, mut f: impl FnMut(usize) -> BigScalar) -> Self {
        let data: Vec<BigScalar> = (0..len).map(|i| f(i)).collect();
        Self::from_vec(ctx, data).expect("from_fn entries share the context")
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits).expect("stored context is valid")
    }

    pub fn get(&self, i: usize) -> &BigScalar {
        &self.data[i]
    }

    pub fn get_mut(&mut self, i: usize) -> &mut BigScalar {
        &mut self.data[i]
    }

    pub fn as_slice(&self) -> &[BigScalar] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [BigScalar] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigScalar> {
        self.data.iter()
    }

    /// max |v_i|
    pub fn inf_norm(&self) -> BigScalar {
        let mut best = self.context().zero();
        for v in &self.data {
            if v.cmp_abs(&best) == std::cmp::Ordering::Greater {
                best = v.abs();
            }
        }
        best
    }

    /// sum |v_i|, ascending index.
    pub fn one_norm(&self) -> BigScalar {
        let mut acc = self.context().zero();
        for v in &self.data {
            acc += &v.abs();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60).unwrap()
    }

    #[test]
    fn one_norm_is_max_column_sum() {
        let c = ctx();
        // [[1, -4], [2, 1]] -> column sums 3, 5
        let m = DenseMatrix::from_fn(c, 2, 2, |i, j| match (i, j) {
            (0, 0) => c.from_i64(1),
            (0, 1) => c.from_i64(-4),
            (1, 0) => c.from_i64(2),
            _ => c.from_i64(1),
        });
        assert_eq!(m.one_norm(), c.from_i64(5));
        assert_eq!(m.max_abs(), c.from_i64(4));
    }

    #[test]
    fn matvec_and_norms() {
        let c = ctx();
        let m = DenseMatrix::from_fn(c, 2, 2, |i, j| c.from_i64((2 * i + j + 1) as i64));
        let x = DenseVector::from_fn(c, 2, |i| c.from_i64(if i == 0 { 1 } else { -1 }));
        let y = m.matvec(&x).unwrap();
        assert_eq!(y.get(0), &c.from_i64(-1));
        assert_eq!(y.get(1), &c.from_i64(-1));
        assert_eq!(y.inf_norm(), c.one());
        assert_eq!(y.one_norm(), c.from_i64(2));
    }

    #[test]
    fn swap_rows_swaps_storage() {
        let c = ctx();
        let mut m = DenseMatrix::from_fn(c, 3, 2, |i, _| c.from_i64(i as i64));
        m.swap_rows(0, 2);
        assert_eq!(m.get(0, 0), &c.from_i64(2));
        assert_eq!(m.get(2, 1), &c.from_i64(0));
        m.swap_rows(1, 1);
        assert_eq!(m.get(1, 0), &c.from_i64(1));
    }

    #[test]
    fn matvec_rejects_dimension_mismatch() {
        let c = ctx();
        let m = DenseMatrix::zeros(c, 2, 3);
        let x = DenseVector::zeros(c, 2);
        assert!(matches!(
            m.matvec(&x),
            Err(LinalgError::DimMismatch { op: "matvec", .. })
        ));
    }
}
