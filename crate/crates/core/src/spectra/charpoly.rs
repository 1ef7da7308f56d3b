use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::roots;
use crate::error::{Error, Result};
use crate::level_matrix::IntMatrix;

/// Largest dimension for which the exact polynomial is computed by default.
pub const DEFAULT_CHARPOLY_CAP: usize = 24;

/// `det(xI - A)` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    /// Degree-descending: `coeffs[k]` multiplies `x^(n-k)`.
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn from_coefficients(coeffs: Vec<BigInt>) -> Self {
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree-descending coefficients.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^power`.
    pub fn coefficient(&self, power: usize) -> &BigInt {
        &self.coeffs[self.degree() - power]
    }

    /// Constant term, `(-1)^n det(A)`.
    pub fn constant_term(&self) -> &BigInt {
        self.coeffs.last().expect("non-empty")
    }

    /// Multiplicity of zero as a root.
    pub fn zero_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Decimal strings, degree-descending.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    /// Human-readable form such as `x^9 - 80x^7 - 276x^6 - 216x^5`.
    pub fn to_display_string(&self) -> String {
        let n = self.degree();
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = n - k;
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !mag.is_one() || power == 0 {
                out.push_str(&mag.to_string());
            }
            match power {
                0 => {}
                1 => out.push('x'),
                p => out.push_str(&format!("x^{p}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Real roots, descending with multiplicity, found by exact squarefree
    /// factorization and sign-exact bisection. Assumes all roots are real,
    /// which holds for characteristic polynomials of symmetric matrices.
    pub fn real_roots(&self) -> Vec<f64> {
        let mut ascending: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let zeros = self.zero_multiplicity();
        ascending.drain(..zeros);
        let mut out = roots::real_roots_with_multiplicity(&ascending);
        out.extend(std::iter::repeat_n(0.0, zeros));
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

/// Characteristic polynomial with the default size cap.
pub fn characteristic_polynomial(matrix: &IntMatrix) -> Result<CharPoly> {
    characteristic_polynomial_with_cap(matrix, DEFAULT_CHARPOLY_CAP)
}

/// Faddeev-LeVerrier in exact integer arithmetic:
/// `M_k = A M_{k-1} + c_{k-1} I`, `c_k = -tr(A M_k) / k`. The division is
/// exact because every `c_k` is an integer.
pub fn characteristic_polynomial_with_cap(matrix: &IntMatrix, cap: usize) -> Result<CharPoly> {
    let n = matrix.dim();
    if n > cap {
        return Err(Error::ResourceLimit(format!(
            "characteristic polynomial of dimension {n} exceeds the cap of {cap}"
        )));
    }
    let a: Vec<BigInt> = (0..n * n)
        .map(|k| BigInt::from(matrix.get(k / n, k % n)))
        .collect();
    let mut coeffs = vec![BigInt::one()];
    let mut m = vec![BigInt::zero(); n * n];
    let mut am = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I, reusing the product from the last step
        for (dst, src) in m.iter_mut().zip(&am) {
            dst.clone_from(src);
        }
        for i in 0..n {
            m[i * n + i] += &coeffs[k - 1];
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for l in 0..n {
                    let x = &a[i * n + l];
                    if !x.is_zero() {
                        acc += x * &m[l * n + j];
                    }
                }
                am[i * n + j] = acc;
            }
        }
        let trace: BigInt = (0..n).map(|i| &am[i * n + i]).sum();
        let kk = BigInt::from(k);
        debug_assert!((&trace % &kk).is_zero());
        coeffs.push(-(trace / kk));
    }
    Ok(CharPoly { coeffs })
}
