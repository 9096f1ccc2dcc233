//! Arithmetic in GF(2^8), plus polynomials over the field.
//!
//! The field is constructed over the reduction polynomial
//! x^8 + x^4 + x^3 + x^2 + 1 (0x11D). Under this modulus the element 2 is
//! primitive: 2^8 = 0x100 reduces to 0x100 ^ 0x11D = 29, and the powers of 2
//! cycle through all 255 nonzero elements. Multiplication and division go
//! through precomputed exp/log tables; a full 64 KiB product table is built
//! lazily for the bulk region kernels.

use std::sync::LazyLock;

use crate::{Error, Result};

/// Reduction polynomial of the field, as a 9-bit value.
pub const REDUCTION_POLY: u16 = 0x11D;

/// Primitive element whose powers enumerate the nonzero field elements.
pub const ALPHA: u8 = 2;

// exp[i] = ALPHA^i for i in 0..255, stored twice so exp[log a + log b]
// never needs an explicit reduction mod 255.
static EXP: [u8; 510] = build_exp();
// log[exp[i]] = i; log[0] is unused and left as 0.
static LOG: [u8; 256] = build_log();

const fn build_exp() -> [u8; 510] {
    let mut t = [0u8; 510];
    let mut v: u16 = 1;
    let mut i = 0;
    while i < 255 {
        t[i] = v as u8;
        t[i + 255] = v as u8;
        v <<= 1;
        if v & 0x100 != 0 {
            v ^= REDUCTION_POLY;
        }
        i += 1;
    }
    t
}

const fn build_log() -> [u8; 256] {
    let exp = build_exp();
    let mut t = [0u8; 256];
    let mut i = 0;
    while i < 255 {
        t[exp[i] as usize] = i as u8;
        i += 1;
    }
    t
}

static MUL_TABLE: LazyLock<Box<[[u8; 256]; 256]>> = LazyLock::new(|| {
    let mut t: Box<[[u8; 256]; 256]> = vec![[0u8; 256]; 256]
        .into_boxed_slice()
        .try_into()
        .unwrap();
    for a in 0..256 {
        for b in 0..256 {
            t[a][b] = mul(a as u8, b as u8);
        }
    }
    t
});

/// Addition is XOR.
#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

/// Subtraction equals addition in characteristic 2.
#[inline]
pub fn sub(a: u8, b: u8) -> u8 {
    a ^ b
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    EXP[LOG[a as usize] as usize + LOG[b as usize] as usize]
}

pub fn div(a: u8, b: u8) -> Result<u8> {
    if b == 0 {
        return Err(Error::ZeroDivisor);
    }
    if a == 0 {
        return Ok(0);
    }
    Ok(EXP[255 + LOG[a as usize] as usize - LOG[b as usize] as usize])
}

pub fn inv(a: u8) -> Result<u8> {
    if a == 0 {
        return Err(Error::ZeroDivisor);
    }
    Ok(EXP[255 - LOG[a as usize] as usize])
}

/// a^e, with e reduced mod 255 (the multiplicative order).
/// 0^0 is defined as 1 by convention; 0^e = 0 for e > 0.
pub fn pow(a: u8, e: u64) -> u8 {
    if a == 0 {
        return if e == 0 { 1 } else { 0 };
    }
    let l = LOG[a as usize] as u64 * (e % 255);
    EXP[(l % 255) as usize]
}

/// One row of the full product table: `mul_row(c)[x] == mul(c, x)`.
/// Bulk region operations index a single row per call instead of going
/// through exp/log per byte.
#[inline]
pub fn mul_row(c: u8) -> &'static [u8; 256] {
    &MUL_TABLE[c as usize]
}

/// Polynomial over GF(2^8); index i holds the coefficient of x^i.
///
/// Trailing zero coefficients are trimmed after every operation, so the
/// zero polynomial is the empty vector and `degree` is consistent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<u8>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u8>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero beyond the stored degree.
    pub fn coeff(&self, i: usize) -> u8 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u8; n];
        for (i, c) in out.iter_mut().enumerate() {
            *c = self.coeff(i) ^ rhs.coeff(i);
        }
        Poly::new(out)
    }

    /// Coefficient convolution; deg(a*b) = deg a + deg b for nonzero inputs.
    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u8; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] ^= mul(a, b);
            }
        }
        Poly::new(out)
    }

    /// Remainder of self divided by a monic, nonzero divisor.
    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        if g.is_zero() || *g.coeffs.last().unwrap() != 1 {
            return Err(Error::BadPolyDivisor);
        }
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok(self.clone());
        }
        let mut r = self.coeffs.clone();
        for i in (dg..r.len()).rev() {
            let f = r[i];
            if f == 0 {
                continue;
            }
            // Monic leading term: r[i] cancels exactly.
            for (j, &gc) in g.coeffs.iter().enumerate() {
                r[i - dg + j] ^= mul(f, gc);
            }
        }
        r.truncate(dg);
        Ok(Poly::new(r))
    }

    /// Evaluate at x by Horner's rule.
    pub fn eval(&self, x: u8) -> u8 {
        let mut acc = 0u8;
        for &c in self.coeffs.iter().rev() {
            acc = mul(acc, x) ^ c;
        }
        acc
    }
}
