//! Small dense complex matrices, LU factorisation with partial pivoting and a
//! Hermitian eigenvalue routine.
//!
//! Everything here is sized at compile time: the simulator only ever needs
//! 4×4 operators and the 16×16 superoperators acting on them (plus 2×2/4×4
//! for the bare two-level calibration), so matrices live on the stack.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{Real, C};

/// Dense `N×N` complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<T, const N: usize> {
    data: [[C<T>; N]; N],
}

/// Operator on the four-level Hilbert space.
pub type Mat4<T> = CMatrix<T, 4>;
/// Superoperator on column-vectorised 4×4 operators.
pub type Mat16<T> = CMatrix<T, 16>;

impl<T: Real, const N: usize> CMatrix<T, N> {
    pub fn zeros() -> Self {
        Self {
            data: [[C::zero(); N]; N],
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(data: [[C<T>; N]; N]) -> Self {
        Self { data }
    }

    /// `|i⟩⟨j|` with the given coefficient.
    pub fn unit(i: usize, j: usize, value: C<T>) -> Self {
        let mut m = Self::zeros();
        m.data[i][j] = value;
        m
    }

    pub fn from_diagonal(diag: [C<T>; N]) -> Self {
        Self::from_fn(|i, j| if i == j { diag[i] } else { C::zero() })
    }

    pub fn rows(&self) -> &[[C<T>; N]; N] {
        &self.data
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C<T>; N] {
        &mut self.data[i]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.data[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.data[j][i])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::from_fn(|i, j| self.data[i][j] * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.data[i][j] * s)
    }

    pub fn trace(&self) -> C<T> {
        (0..N).fold(C::zero(), |acc, i| acc + self.data[i][i])
    }

    pub fn diagonal(&self) -> [C<T>; N] {
        std::array::from_fn(|i| self.data[i][i])
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn matvec(&self, v: &[C<T>; N]) -> [C<T>; N] {
        std::array::from_fn(|i| {
            self.data[i]
                .iter()
                .zip(v.iter())
                .fold(C::zero(), |acc, (&a, &b)| acc + a * b)
        })
    }

    /// Largest element modulus.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> T {
        self.data
            .iter()
            .map(|r| r.iter().fold(T::zero(), |s, z| s + z.norm()))
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .flat_map(|r| r.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest element-wise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> T {
        let mut err = T::zero();
        for i in 0..N {
            for j in 0..N {
                err = err.max((self.data[i][j] - self.data[j][i].conj()).norm());
            }
        }
        err
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(|i, j| (self.data[i][j] + self.data[j][i].conj()) * half)
    }

    /// Column-stacked vectorisation: `vec(A)[i + N·j] = A[i][j]`.
    ///
    /// Only `M = N·N` is meaningful; checked at run time.
    pub fn vectorize<const M: usize>(&self) -> [C<T>; M] {
        assert_eq!(M, N * N, "vectorised length must be N²");
        std::array::from_fn(|k| self.data[k % N][k / N])
    }

    pub fn unvectorize<const M: usize>(v: &[C<T>; M]) -> Self {
        assert_eq!(M, N * N, "vectorised length must be N²");
        Self::from_fn(|i, j| v[i + N * j])
    }
}

impl<T: Real, const N: usize> Index<(usize, usize)> for CMatrix<T, N> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i][j]
    }
}

impl<T: Real, const N: usize> IndexMut<(usize, usize)> for CMatrix<T, N> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i][j]
    }
}

impl<T: Real, const N: usize> Add for CMatrix<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.data[i][j] + rhs.data[i][j])
    }
}

impl<T: Real, const N: usize> AddAssign for CMatrix<T, N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] += rhs.data[i][j];
            }
        }
    }
}

impl<T: Real, const N: usize> Sub for CMatrix<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.data[i][j] - rhs.data[i][j])
    }
}

impl<T: Real, const N: usize> Neg for CMatrix<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.data[i][j])
    }
}

impl<T: Real, const N: usize> Mul for CMatrix<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..N {
                    out.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

/// Superoperator of `ρ ↦ A ρ B` on column-stacked `vec(ρ)`, i.e. `Bᵀ ⊗ A`.
pub fn sandwich<T: Real, const N: usize, const M: usize>(
    a: &CMatrix<T, N>,
    b: &CMatrix<T, N>,
) -> CMatrix<T, M> {
    assert_eq!(M, N * N, "superoperator dimension must be N²");
    CMatrix::from_fn(|row, col| {
        let (i, j) = (row % N, row / N);
        let (k, l) = (col % N, col / N);
        a[(i, k)] * b[(l, j)]
    })
}

/// `ρ ↦ −i[H, ρ]`.
pub fn commutator_superop<T: Real, const N: usize, const M: usize>(
    h: &CMatrix<T, N>,
) -> CMatrix<T, M> {
    let id = CMatrix::<T, N>::identity();
    let left: CMatrix<T, M> = sandwich(h, &id);
    let right: CMatrix<T, M> = sandwich(&id, h);
    (left - right).scale(C::new(T::zero(), -T::one()))
}

/// `ρ ↦ L ρ L† − ½{L†L, ρ}`.
pub fn dissipator_superop<T: Real, const N: usize, const M: usize>(
    jump: &CMatrix<T, N>,
) -> CMatrix<T, M> {
    let id = CMatrix::<T, N>::identity();
    let ldl = jump.adjoint() * *jump;
    let gain: CMatrix<T, M> = sandwich(jump, &jump.adjoint());
    let loss_l: CMatrix<T, M> = sandwich(&ldl, &id);
    let loss_r: CMatrix<T, M> = sandwich(&id, &ldl);
    gain - (loss_l + loss_r).scale_real(T::lit(0.5))
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("matrix is numerically singular: pivot {pivot_index} has modulus {pivot:e} (scale {scale:e})")]
pub struct SingularMatrix {
    pub pivot_index: usize,
    pub pivot: f64,
    pub scale: f64,
}

/// LU factorisation `P A = L U` with partial (row) pivoting.
#[derive(Clone, Debug)]
pub struct Lu<T, const N: usize> {
    lu: CMatrix<T, N>,
    perm: [usize; N],
}

impl<T: Real, const N: usize> Lu<T, N> {
    /// Factors `a`, rejecting pivots below `N·64·ε` times the largest entry.
    pub fn factor(a: &CMatrix<T, N>) -> Result<Self, SingularMatrix> {
        let scale = a.max_abs();
        let floor = scale * T::epsilon() * T::from_count(64 * N);
        let mut lu = *a;
        let mut perm: [usize; N] = std::array::from_fn(|i| i);
        for k in 0..N {
            let (p, pmag) = (k..N)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmag > floor) {
                return Err(SingularMatrix {
                    pivot_index: k,
                    pivot: pmag.to_f64().unwrap_or(f64::NAN),
                    scale: scale.to_f64().unwrap_or(f64::NAN),
                });
            }
            if p != k {
                lu.data.swap(p, k);
                perm.swap(p, k);
            }
            let pivot = lu[(k, k)];
            for r in (k + 1)..N {
                let f = lu[(r, k)] / pivot;
                lu[(r, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for col in (k + 1)..N {
                    let u = lu[(k, col)];
                    lu[(r, col)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C<T>; N]) -> [C<T>; N] {
        let mut x: [C<T>; N] = std::array::from_fn(|i| b[self.perm[i]]);
        for i in 0..N {
            for k in 0..i {
                let l = self.lu[(i, k)];
                x[i] -= l * x[k];
            }
        }
        for i in (0..N).rev() {
            for k in (i + 1)..N {
                let u = self.lu[(i, k)];
                x[i] -= u * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Uses the real symmetric embedding `[[A, −B], [B, A]]` of `A + iB`, whose
/// spectrum is that of the Hermitian matrix with every eigenvalue doubled,
/// and diagonalises it with cyclic Jacobi rotations.
pub fn hermitian_eigenvalues<T: Real, const N: usize>(m: &CMatrix<T, N>) -> Vec<T> {
    let n2 = 2 * N;
    let mut a = vec![T::zero(); n2 * n2];
    for i in 0..N {
        for j in 0..N {
            // symmetrise so that small Hermiticity defects do not bias the result
            let z = (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5);
            a[i * n2 + j] = z.re;
            a[(i + N) * n2 + (j + N)] = z.re;
            a[i * n2 + (j + N)] = -z.im;
            a[(i + N) * n2 + j] = z.im;
        }
    }
    let mut eig = symmetric_jacobi(&mut a, n2);
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    eig.into_iter().step_by(2).collect()
}

fn symmetric_jacobi<T: Real>(a: &mut [T], n: usize) -> Vec<T> {
    let idx = |i: usize, j: usize| i * n + j;
    for _sweep in 0..64 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[idx(i, j)] * a[idx(i, j)]);
        let diag: T = (0..n).fold(T::zero(), |s, i| s + a[idx(i, i)] * a[idx(i, i)]);
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[idx(q, q)] - a[idx(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = cs * akp - sn * akq;
                    a[idx(k, q)] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = cs * apk - sn * aqk;
                    a[idx(q, k)] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[idx(i, i)]).collect()
}
