//! Exact linear algebra over ℤ.
//!
//! Every elimination first runs on checked `i128` arithmetic and restarts on
//! `BigInt` if any intermediate value overflows, so results are always exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Self { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(), cols)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn permute_rows(&self, order: &[usize]) -> IntMatrix {
        let rows = order.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(rows, self.cols)
    }

    pub fn permute_cols(&self, order: &[usize]) -> IntMatrix {
        self.transpose().permute_rows(order).transpose()
    }

    fn to_scalar_rows<S: Scalar>(&self) -> Option<Vec<Vec<S>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(S::from_big).collect()).collect()
    }

    fn from_scalar_rows<S: Scalar>(rows: &[Vec<S>], cols: usize) -> IntMatrix {
        Self::from_rows(rows.iter().map(|r| r.iter().map(S::to_big).collect()).collect(), cols)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Integer arithmetic used by the elimination kernels; `None` means overflow.
trait Scalar: Clone + fmt::Debug {
    fn sc_zero() -> Self;
    fn sc_one() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn is_unit(&self) -> bool;
    fn negated(&self) -> Option<Self>;
    /// `self − q·x`
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    /// Truncated quotient.
    fn quot(&self, d: &Self) -> Self;
    fn divisible_by(&self, d: &Self) -> bool;
}

impl Scalar for i128 {
    fn sc_zero() -> Self {
        0
    }
    fn sc_one() -> Self {
        1
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        // keep headroom so that the first products cannot overflow
        v.to_i64().map(i128::from)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*x)?)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divisible_by(&self, d: &Self) -> bool {
        self % d == 0
    }
}

impl Scalar for BigInt {
    fn sc_zero() -> Self {
        Zero::zero()
    }
    fn sc_one() -> Self {
        One::one()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divisible_by(&self, d: &Self) -> bool {
        Zero::is_zero(&(self % d))
    }
}

/// Runs `f` on `i128` and falls back to `BigInt` when it reports overflow.
fn with_fallback<T>(small: impl FnOnce() -> Option<T>, big: impl FnOnce() -> Option<T>) -> T {
    small().or_else(big).expect("BigInt arithmetic cannot overflow")
}

struct SnfWork<S> {
    a: Vec<Vec<S>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<S>>>,
    v: Option<Vec<Vec<S>>>,
}

fn identity_rows<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { S::sc_one() } else { S::sc_zero() }).collect()).collect()
}

/// `rows[i] -= q * rows[j]` (i ≠ j).
fn row_sub_mul<S: Scalar>(rows: &mut [Vec<S>], i: usize, j: usize, q: &S, from: usize) -> Option<()> {
    let (ri, rj) = if i < j {
        let (lo, hi) = rows.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    for k in from..rj.len() {
        if !rj[k].is_nil() {
            ri[k] = ri[k].sub_mul(q, &rj[k])?;
        }
    }
    Some(())
}

fn col_sub_mul<S: Scalar>(rows: &mut [Vec<S>], i: usize, j: usize, q: &S, from: usize) -> Option<()> {
    for r in rows.iter_mut().skip(from) {
        if !r[j].is_nil() {
            r[i] = r[i].sub_mul(q, &r[j])?;
        }
    }
    Some(())
}

impl<S: Scalar> SnfWork<S> {
    fn new(a: Vec<Vec<S>>, rows: usize, cols: usize, track: bool) -> Self {
        Self { a, rows, cols, u: track.then(|| identity_rows(rows)), v: track.then(|| identity_rows(cols)) }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in &mut self.a {
                r.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for r in v {
                    r.swap(i, j);
                }
            }
        }
    }

    fn row_op(&mut self, i: usize, j: usize, q: &S, t: usize) -> Option<()> {
        row_sub_mul(&mut self.a, i, j, q, t)?;
        if let Some(u) = &mut self.u {
            row_sub_mul(u, i, j, q, 0)?;
        }
        Some(())
    }

    fn col_op(&mut self, i: usize, j: usize, q: &S, t: usize) -> Option<()> {
        col_sub_mul(&mut self.a, i, j, q, t)?;
        if let Some(v) = &mut self.v {
            col_sub_mul(v, i, j, q, 0)?;
        }
        Some(())
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in &mut self.a[i] {
            *x = x.negated()?;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = x.negated()?;
            }
        }
        Some(())
    }

    /// Smallest nonzero entry (by absolute value) of the lower-right block.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_nil() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs_cmp(&self.a[bi][bj]) == Ordering::Less) {
                    best = Some((i, j));
                    if x.is_unit() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Option<()> {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a[t][t].clone();
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_nil() {
                        let q = self.a[i][t].quot(&p);
                        self.row_op(i, t, &q, t)?;
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_nil() {
                        let q = self.a[t][j].quot(&p);
                        self.col_op(j, t, &q, t)?;
                    }
                }
                // remainders left in the pivot row/column become the next pivot
                let mut smaller: Option<(usize, usize)> = None;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_nil()
                        && smaller.is_none_or(|(a, b)| self.a[i][t].abs_cmp(&self.a[a][b]) == Ordering::Less)
                    {
                        smaller = Some((i, t));
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_nil()
                        && smaller.is_none_or(|(a, b)| self.a[t][j].abs_cmp(&self.a[a][b]) == Ordering::Less)
                    {
                        smaller = Some((t, j));
                    }
                }
                if let Some((i, j)) = smaller {
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                if p.is_unit() {
                    break;
                }
                let offender =
                    (t + 1..self.rows).find(|&i| self.a[i][t + 1..].iter().any(|x| !x.is_nil() && !x.divisible_by(&p)));
                match offender {
                    Some(i) => {
                        let minus_one = S::sc_one().negated()?;
                        self.row_op(t, i, &minus_one, t)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_neg() {
                self.negate_row(t)?;
            }
        }
        Some(())
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`, `d_i ≥ 0`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn snf_with<S: Scalar>(m: &IntMatrix, track: bool) -> Option<(IntMatrix, Option<IntMatrix>, Option<IntMatrix>)> {
    let a = m.to_scalar_rows::<S>()?;
    let mut w = SnfWork::new(a, m.rows, m.cols, track);
    w.run()?;
    let d = IntMatrix::from_scalar_rows(&w.a, m.cols);
    let u = w.u.map(|u| IntMatrix::from_scalar_rows(&u, m.rows));
    let v = w.v.map(|v| IntMatrix::from_scalar_rows(&v, m.cols));
    Some((d, u, v))
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (d, u, v) = with_fallback(|| snf_with::<i128>(m, true), || snf_with::<BigInt>(m, true));
    SmithForm { u: u.unwrap(), d, v: v.unwrap() }
}

/// Diagonal of the Smith form, without the transforms.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = with_fallback(|| snf_with::<i128>(m, false), || snf_with::<BigInt>(m, false));
    (0..m.rows.min(m.cols)).map(|i| d.get(i, i).clone()).collect()
}

/// `ℤ^rows / (column span of m)`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let diag = smith_diagonal(m);
    let nonzero: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero()).collect();
    AbelianGroup::from_snf(m.rows - nonzero.len(), nonzero)
}

/// A basis of the lattice `{v ∈ ℤ^cols : m·v = 0}`.
pub fn kernel_saturated(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols).map(|j| snf.v.column(j)).collect()
}

/// Row-echelon elimination by integer row operations only; returns the echelon
/// pivots and the sign of the row permutation.
fn echelon<S: Scalar>(m: &IntMatrix) -> Option<(Vec<BigInt>, bool)> {
    let mut a = m.to_scalar_rows::<S>()?;
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a[i][c].is_nil() && best.is_none_or(|b| a[i][c].abs_cmp(&a[b][c]) == Ordering::Less) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            if b != r {
                a.swap(b, r);
                odd = !odd;
            }
            let p = a[r][c].clone();
            let mut clean = true;
            for i in r + 1..rows {
                if !a[i][c].is_nil() {
                    let q = a[i][c].quot(&p);
                    row_sub_mul(&mut a, i, r, &q, c)?;
                    clean &= a[i][c].is_nil();
                }
            }
            if clean {
                pivots.push(p.to_big());
                r += 1;
                break;
            }
        }
    }
    Some((pivots, odd))
}

pub fn rank(m: &IntMatrix) -> usize {
    with_fallback(|| echelon::<i128>(m), || echelon::<BigInt>(m)).0.len()
}

/// Determinant of a square matrix via integer row reduction.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let det = |pivots: Vec<BigInt>, odd: bool| {
        if pivots.len() < m.rows {
            return BigInt::zero();
        }
        let p: BigInt = pivots.iter().product();
        if odd {
            -p
        } else {
            p
        }
    };
    let small = || {
        let (pivots, odd) = echelon::<i128>(m)?;
        Some(det(pivots, odd))
    };
    let big = || echelon::<BigInt>(m).map(|(p, odd)| det(p, odd));
    with_fallback(small, big)
}

/// Exact inverse of a matrix with determinant ±1; `None` otherwise.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if m.rows != m.cols {
        return None;
    }
    let snf = smith_normal_form(m);
    if snf.diagonal().iter().any(|d| !d.is_one()) {
        return None;
    }
    Some(snf.v.mul(&snf.u))
}

/// One integer solution `x` of `m·x = b`, if any exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len());
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, c) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            _ => {
                if !c.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Whether every column of `vectors` lies in the ℤ-span of the columns of `gens`.
///
/// Adding vectors to a lattice can only enlarge it, and a surjection between
/// isomorphic finitely generated abelian groups is injective, so containment
/// holds exactly when the cokernel is unchanged.
pub fn lattice_contains(gens: &IntMatrix, vectors: &IntMatrix) -> bool {
    cokernel(gens) == cokernel(&gens.hstack(vectors))
}

/// Equality of the column lattices of two matrices with the same row count.
pub fn lattice_eq(a: &IntMatrix, b: &IntMatrix) -> bool {
    lattice_contains(a, b) && lattice_contains(b, a)
}

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d_1 ⊕ … ⊕ ℤ/d_k`
/// with `d_1 | d_2 | … | d_k` and every `d_i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, [order.into()])
    }

    /// From an already-normalized divisibility chain (units are dropped).
    fn from_snf(free_rank: usize, chain: Vec<BigInt>) -> Self {
        let invariant_factors = chain.into_iter().map(|d| d.abs()).filter(|d| !d.is_one()).collect();
        Self { free_rank, invariant_factors }
    }

    /// Normalizes `ℤ^r ⊕ ⨁ ℤ/o_i` for arbitrary orders `o_i` (zero meaning ℤ).
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(free_rank: usize, orders: I) -> Self {
        let mut free = free_rank;
        let mut runs: Vec<(BigInt, usize)> = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                free += 1;
            } else if !o.is_one() {
                runs.push((o, 1));
            }
        }
        Self::from_runs(free, runs)
    }

    /// Normalizes `ℤ^r ⊕ ⨁ (ℤ/o_i)^{m_i}` via a coprime base of the orders, so
    /// no integer factorization is needed.
    fn from_runs(free_rank: usize, runs: Vec<(BigInt, usize)>) -> Self {
        let base = coprime_base(runs.iter().map(|(o, _)| o.clone()).collect());
        // per base element: (exponent, multiplicity) pairs
        let mut exps: Vec<Vec<(u32, usize)>> = vec![Vec::new(); base.len()];
        for (o, mult) in &runs {
            let mut rest = o.clone();
            for (bi, b) in base.iter().enumerate() {
                let mut e = 0;
                while (&rest % b).is_zero() {
                    rest /= b;
                    e += 1;
                }
                if e > 0 {
                    exps[bi].push((e, *mult));
                }
            }
            debug_assert!(rest.is_one());
        }
        let len = exps.iter().map(|v| v.iter().map(|(_, m)| m).sum::<usize>()).max().unwrap_or(0);
        let mut factors = vec![BigInt::one(); len];
        for (b, mut es) in base.iter().zip(exps) {
            es.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
            // largest exponents go to the last (largest) invariant factors
            let mut pos = len;
            for (e, m) in es {
                let p = num_traits::pow(b.clone(), e as usize);
                for _ in 0..m {
                    pos -= 1;
                    factors[pos] *= &p;
                }
            }
        }
        Self::from_snf(free_rank, factors)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        Self::sum_with_multiplicities([(self, 1), (other, 1)])
    }

    /// `⨁ G_i^{m_i}` in invariant-factor form.
    pub fn sum_with_multiplicities<'a, I>(parts: I) -> AbelianGroup
    where
        I: IntoIterator<Item = (&'a AbelianGroup, usize)>,
    {
        let mut free = 0;
        let mut runs: Vec<(BigInt, usize)> = Vec::new();
        for (g, m) in parts {
            if m == 0 {
                continue;
            }
            free += g.free_rank * m;
            for d in &g.invariant_factors {
                match runs.iter_mut().find(|(o, _)| o == d) {
                    Some(run) => run.1 += m,
                    None => runs.push((d.clone(), m)),
                }
            }
        }
        Self::from_runs(free, runs)
    }

    /// Consecutive equal invariant factors as `(d, multiplicity)`.
    pub fn factor_runs(&self) -> Vec<(BigInt, usize)> {
        let mut runs: Vec<(BigInt, usize)> = Vec::new();
        for d in &self.invariant_factors {
            match runs.last_mut() {
                Some((o, m)) if o == d => *m += 1,
                _ => runs.push((d.clone(), 1)),
            }
        }
        runs
    }
}

/// Pairwise coprime integers `> 1` over which every input factors.
fn coprime_base(nums: Vec<BigInt>) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    for n in nums {
        if !n.is_one() && !base.contains(&n) {
            base.push(n);
        }
    }
    'outer: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let (a, b) = (&base[i] / &g, &base[j] / &g);
                    base.swap_remove(j);
                    base.swap_remove(i);
                    for x in [a, b, g] {
                        if !x.is_one() && !base.contains(&x) {
                            base.push(x);
                        }
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    base.sort();
    base
}

/// Human form: `Z^r (+) Z/d1 (+) (Z/d2)^m`, or `0`.
impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for (d, m) in self.factor_runs() {
            if m == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{m}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" (+) "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_zero_matrix() {
        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_diagonal(&m(&[vec![2, 1], vec![1, 2]])), big(&[1, 3]));
        assert_eq!(smith_diagonal(&m(&[vec![6, 0], vec![0, 4]])), big(&[2, 12]));
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), big(&[2, 6, 12]));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn snf_overflowing_entries_use_bigint() {
        let huge = BigInt::from(i64::MAX) * BigInt::from(1000);
        let a = IntMatrix::from_rows(vec![vec![huge.clone(), BigInt::from(3)], vec![BigInt::from(6), huge.clone()]], 2);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        let det = determinant(&a);
        assert_eq!(det, &huge * &huge - BigInt::from(18));
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel(&m(&[vec![2, 1], vec![1, 2]])), AbelianGroup::cyclic(3));
        assert_eq!(cokernel(&IntMatrix::zeros(2, 0)), AbelianGroup::free(2));
        assert_eq!(cokernel(&IntMatrix::zeros(0, 4)), AbelianGroup::zero());
        assert_eq!(cokernel(&m(&[vec![1, 1, 1]])), AbelianGroup::zero());
    }

    #[test]
    fn kernels() {
        assert!(kernel_saturated(&IntMatrix::identity(3)).is_empty());
        let k = kernel_saturated(&m(&[vec![1, 1]]));
        assert_eq!(k.len(), 1);
        assert!(k[0] == big(&[1, -1]) || k[0] == big(&[-1, 1]));
        // saturation: the kernel of [2, 4] is spanned by (2, -1), not (4, -2)
        let k = kernel_saturated(&m(&[vec![2, 4]]));
        assert_eq!(k.len(), 1);
        assert!(k[0] == big(&[2, -1]) || k[0] == big(&[-2, 1]));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&m(&[vec![2, 1], vec![1, 2]])), BigInt::from(3));
        assert_eq!(determinant(&m(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[vec![1, 2], vec![2, 4]])), BigInt::zero());
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)), BigInt::one());
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[vec![2, 3], vec![1, 2]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), IntMatrix::identity(2));
        assert!(unimodular_inverse(&m(&[vec![2, 0], vec![0, 1]])).is_none());
        let x = solve(&m(&[vec![2, 0], vec![0, 3]]), &big(&[4, 9])).unwrap();
        assert_eq!(x, big(&[2, 3]));
        assert!(solve(&m(&[vec![2, 0], vec![0, 3]]), &big(&[1, 9])).is_none());
    }

    #[test]
    fn lattices() {
        let a = m(&[vec![1, 1], vec![0, -1]]);
        let b = IntMatrix::identity(2);
        assert!(lattice_eq(&a, &b));
        let c = m(&[vec![1, 1], vec![1, -1]]);
        assert!(lattice_contains(&b, &c));
        assert!(!lattice_contains(&c, &b));
    }

    #[test]
    fn abelian_normalization() {
        let g = AbelianGroup::from_cyclic_orders(1, big(&[6, 4, 1, 0]));
        assert_eq!(g.free_rank(), 2);
        assert_eq!(g.invariant_factors(), big(&[2, 12]).as_slice());
        assert_eq!(g.to_string(), "Z^2 (+) Z/2 (+) Z/12");

        let g = AbelianGroup::sum_with_multiplicities([
            (&AbelianGroup::cyclic(27), 1),
            (&AbelianGroup::cyclic(45), 4),
            (&AbelianGroup::cyclic(3), 5),
        ]);
        assert_eq!(
            g.factor_runs(),
            vec![(BigInt::from(3), 5), (BigInt::from(9), 1), (BigInt::from(45), 3), (BigInt::from(135), 1)]
        );
        assert_eq!(g.torsion_order(), BigInt::from(27) * BigInt::from(45).pow(4) * BigInt::from(3).pow(5));

        assert_eq!(AbelianGroup::zero().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
    }

    #[test]
    fn coprime_base_refines() {
        let b = coprime_base(big(&[12, 18, 35]));
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                assert!(b[i].gcd(&b[j]).is_one());
            }
        }
        assert_eq!(b, big(&[2, 3, 35]));
    }
}
