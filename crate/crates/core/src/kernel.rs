//! Generalized multiquadric radial basis functions.
//!
//! The family is `phi(x) = (-1)^ceil(beta/2) * (c^2 + ||x||^2)^(beta/2)` with
//! shape parameter `c > 0` and exponent `beta` outside the even nonnegative
//! integers. `beta = -1` is the inverse multiquadric `1/sqrt(c^2 + ||x||^2)`,
//! the kernel used by both built-in experiments; it is the only exponent with
//! a registered closed-form Laplacian, and the registry is structured so
//! other exponents can be added without touching the solver.

use thiserror::Error;

use crate::precision::{BigScalar, PrecisionContext};

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("shape parameter c must be positive and finite, got {0}")]
    InvalidShape(String),
    #[error("beta must avoid the even nonnegative integers, got {0}")]
    InvalidBeta(String),
    #[error("no closed-form Laplacian registered for beta={beta}, dim={dim}")]
    UnsupportedBeta { beta: String, dim: usize },
    #[error("point offset has dimension {found}, kernel expects {expected}")]
    DimMismatch { expected: usize, found: usize },
    #[error("kernel parameters mix precision contexts ({0} vs {1} digits)")]
    ContextMismatch(u32, u32),
}

/// Spatial dimension of the kernel (and of the PDE problem).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn as_usize(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    pub fn from_usize(d: usize) -> Option<Self> {
        match d {
            1 => Some(Dim::One),
            2 => Some(Dim::Two),
            _ => None,
        }
    }
}

/// Immutable generalized multiquadric; all evaluation is pure.
#[derive(Debug, Clone)]
pub struct MultiquadricKernel {
    beta: BigScalar,
    beta_half: BigScalar,
    c: BigScalar,
    c_sq: BigScalar,
    dim: Dim,
    sign_negative: bool,
    inverse_mq: bool,
}

impl MultiquadricKernel {
    pub fn new(beta: BigScalar, c: BigScalar, dim: Dim) -> Result<Self, KernelError> {
        if beta.digits() != c.digits() {
            return Err(KernelError::ContextMismatch(beta.digits(), c.digits()));
        }
        if !c.is_finite() || c <= c.context().zero() {
            return Err(KernelError::InvalidShape(c.to_decimal_string()));
        }
        let ctx = beta.context();
        let two = ctx.from_i64(2);
        let beta_half = &beta / &two;
        if beta.is_integer() && !beta.is_sign_negative() && beta_half.is_integer() {
            return Err(KernelError::InvalidBeta(beta.to_decimal_string()));
        }
        // (-1)^ceil(beta/2), fixed at construction.
        let sign_negative = beta_half.ceil_i64().rem_euclid(2) == 1;
        let inverse_mq = beta == ctx.from_i64(-1);
        let c_sq = c.square();
        Ok(Self {
            beta,
            beta_half,
            c,
            c_sq,
            dim,
            sign_negative,
            inverse_mq,
        })
    }

    /// Inverse multiquadric (`beta = -1`) constructor.
    pub fn inverse_multiquadric(c: BigScalar, dim: Dim) -> Result<Self, KernelError> {
        let beta = c.context().from_i64(-1);
        Self::new(beta, c, dim)
    }

    pub fn beta(&self) -> &BigScalar {
        &self.beta
    }

    pub fn shape(&self) -> &BigScalar {
        &self.c
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn digits(&self) -> u32 {
        self.c.digits()
    }

    pub fn context(&self) -> PrecisionContext {
        self.c.context()
    }

    pub fn sign_negative(&self) -> bool {
        self.sign_negative
    }

    fn r_squared(&self, diff: &[BigScalar]) -> Result<BigScalar, KernelError> {
        if diff.len() != self.dim.as_usize() {
            return Err(KernelError::DimMismatch {
                expected: self.dim.as_usize(),
                found: diff.len(),
            });
        }
        let mut r_sq = diff[0].square();
        for d in &diff[1..] {
            r_sq += &d.square();
        }
        Ok(r_sq)
    }

    /// `phi(diff)` for a point offset of the kernel's dimension.
    pub fn value(&self, diff: &[BigScalar]) -> Result<BigScalar, KernelError> {
        Ok(self.value_from_r_sq(&self.r_squared(diff)?))
    }

    /// `phi` as a function of the squared radius; the assembly fast path.
    pub fn value_from_r_sq(&self, r_sq: &BigScalar) -> BigScalar {
        let t = &self.c_sq + r_sq;
        let mut v = if self.inverse_mq {
            t.recip_sqrt()
        } else {
            t.pow(&self.beta_half)
        };
        if self.sign_negative {
            v.neg_mut();
        }
        v
    }

    /// Analytic Laplacian `(Delta phi)(diff)`.
    ///
    /// Closed forms are registered for `beta = -1`:
    /// dim 1: `(2 r^2 - c^2) (c^2 + r^2)^(-5/2)`,
    /// dim 2: `(r^2 - 2 c^2) (c^2 + r^2)^(-5/2)`.
    pub fn laplacian(&self, diff: &[BigScalar]) -> Result<BigScalar, KernelError> {
        let r_sq = self.r_squared(diff)?;
        self.laplacian_from_r_sq(&r_sq)
    }

    /// Laplacian as a function of the squared radius.
    pub fn laplacian_from_r_sq(&self, r_sq: &BigScalar) -> Result<BigScalar, KernelError> {
        if !self.inverse_mq {
            return Err(KernelError::UnsupportedBeta {
                beta: self.beta.to_decimal_string(),
                dim: self.dim.as_usize(),
            });
        }
        let t = &self.c_sq + r_sq;
        // t^(-5/2) via one reciprocal square root and three multiplications.
        let u = t.recip_sqrt();
        let u2 = &u * &u;
        let u5 = &(&u2 * &u2) * &u;
        let num = match self.dim {
            Dim::One => {
                let mut n = r_sq + r_sq;
                n -= &self.c_sq;
                n
            }
            Dim::Two => {
                let mut n = r_sq.clone();
                n -= &self.c_sq;
                n -= &self.c_sq;
                n
            }
        };
        Ok(&num * &u5)
    }
}
