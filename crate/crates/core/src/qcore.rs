//! Dense complex linear algebra over small labeled Hilbert spaces.
//!
//! Every state and operator carries the ordered basis labels of the space it
//! lives in, and binary operations refuse to mix spaces with different
//! labels. Composite spaces get labels of the form `"A⊗H"`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std's inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};

pub type ComplexAmplitude = Complex64;

/// Tolerance for exact algebraic identities.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for quantities that pass through a chain of operations.
pub const PIPELINE_TOL: f64 = 1e-9;

/// Separator used in composite basis labels.
pub const TENSOR_SEP: char = '⊗';

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyBasis);
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn same_basis(expected: &[String], found: &[String]) -> Result<()> {
    if expected.len() != found.len() {
        return Err(Error::DimensionMismatch {
            expected: expected.len(),
            found: found.len(),
        });
    }
    if expected != found {
        return Err(Error::LabelMismatch {
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    Ok(())
}

fn all_finite(amps: &[Complex64]) -> bool {
    amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
}

fn tensor_labels(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for la in a {
        for lb in b {
            out.push(format!("{la}{TENSOR_SEP}{lb}"));
        }
    }
    out
}

/// Pure state as an amplitude vector over a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<String>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        check_labels(&labels)?;
        if labels.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: amplitudes.len(),
            });
        }
        if !all_finite(&amplitudes) {
            return Err(Error::NonFinite);
        }
        Ok(StateVector { labels, amplitudes })
    }

    /// State with real amplitudes.
    pub fn from_real<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        amplitudes: &[f64],
    ) -> Result<Self> {
        Self::new(
            labels,
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// The basis ket `|label⟩`.
    pub fn basis<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        label: &str,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let idx = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::LabelMismatch {
                expected: labels.join(","),
                found: label.to_string(),
            })?;
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); labels.len()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Self::new(labels, amps)
    }

    pub fn zero<L: Into<String>>(labels: impl IntoIterator<Item = L>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        Self::new(labels, alloc::vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude on the basis state with the given label.
    pub fn amplitude(&self, label: &str) -> Option<Complex64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EXACT_TOL
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        let amps: Vec<Complex64> = self.amplitudes.iter().map(|a| a * factor).collect();
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        Ok(StateVector {
            labels: self.labels.clone(),
            amplitudes: amps,
        })
    }

    pub fn add(&self, other: &StateVector) -> Result<Self> {
        same_basis(&self.labels, &other.labels)?;
        let amps = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>();
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        Ok(StateVector {
            labels: self.labels.clone(),
            amplitudes: amps,
        })
    }

    /// `self ⊗ other`, first factor major.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        Ok(StateVector {
            labels: tensor_labels(&self.labels, &other.labels),
            amplitudes: amps,
        })
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        same_basis(&self.labels, &other.labels)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Returns the unit vector together with the original Euclidean norm.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NullState);
        }
        let unit = self.scale(Complex64::new(1.0 / norm, 0.0))?;
        Ok((unit, norm))
    }

    /// Contracts the first tensor factor of a composite state with `bra`.
    ///
    /// `self` must live on `bra.labels() ⊗ rest`; the result lives on `rest`
    /// and equals `(⟨bra| ⊗ I) |self⟩`.
    pub fn contract_first(&self, bra: &StateVector, rest: &[String]) -> Result<Self> {
        check_labels(rest)?;
        same_basis(&tensor_labels(&bra.labels, rest), &self.labels)?;
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); rest.len()];
        for (j, b) in bra.amplitudes.iter().enumerate() {
            let bc = b.conj();
            for (k, out) in amps.iter_mut().enumerate() {
                *out += bc * self.amplitudes[j * rest.len() + k];
            }
        }
        Ok(StateVector {
            labels: rest.to_vec(),
            amplitudes: amps,
        })
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        same_basis(&self.labels, &other.labels)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Dense linear map between two labeled spaces, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    labels_out: Vec<String>,
    labels_in: Vec<String>,
    entries: Vec<Complex64>,
}

impl Operator {
    pub fn new<L: Into<String>, M: Into<String>>(
        labels_out: impl IntoIterator<Item = L>,
        labels_in: impl IntoIterator<Item = M>,
        entries: Vec<Complex64>,
    ) -> Result<Self> {
        let labels_out: Vec<String> = labels_out.into_iter().map(Into::into).collect();
        let labels_in: Vec<String> = labels_in.into_iter().map(Into::into).collect();
        check_labels(&labels_out)?;
        check_labels(&labels_in)?;
        let n = labels_out.len() * labels_in.len();
        if entries.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.len(),
            });
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite);
        }
        Ok(Operator {
            labels_out,
            labels_in,
            entries,
        })
    }

    /// Square operator from real rows.
    pub fn from_real_rows<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        rows: &[&[f64]],
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(labels.clone(), labels, entries)
    }

    pub fn identity<L: Into<String>>(labels: impl IntoIterator<Item = L>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self::new(labels.clone(), labels, entries)
    }

    /// `|ket⟩⟨bra|`.
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Self {
        let mut entries = Vec::with_capacity(ket.dim() * bra.dim());
        for k in ket.amplitudes() {
            for b in bra.amplitudes() {
                entries.push(k * b.conj());
            }
        }
        Operator {
            labels_out: ket.labels.clone(),
            labels_in: bra.labels.clone(),
            entries,
        }
    }

    /// `|s⟩⟨s|` for the normalized direction of `s`.
    pub fn projector(s: &StateVector) -> Result<Self> {
        let (unit, _) = s.normalize()?;
        Ok(Self::outer(&unit, &unit))
    }

    /// Projector onto a single basis label.
    pub fn basis_projector<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        label: &str,
    ) -> Result<Self> {
        let ket = StateVector::basis(labels, label)?;
        Ok(Self::outer(&ket, &ket))
    }

    pub fn dim_out(&self) -> usize {
        self.labels_out.len()
    }

    pub fn dim_in(&self) -> usize {
        self.labels_in.len()
    }

    pub fn labels_out(&self) -> &[String] {
        &self.labels_out
    }

    pub fn labels_in(&self) -> &[String] {
        &self.labels_in
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim_in() + col]
    }

    pub fn is_square(&self) -> bool {
        self.labels_in == self.labels_out
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        same_basis(&self.labels_in, &s.labels)?;
        let n = self.dim_in();
        let amps = (0..self.dim_out())
            .map(|r| {
                self.entries[r * n..(r + 1) * n]
                    .iter()
                    .zip(&s.amplitudes)
                    .map(|(m, a)| m * a)
                    .sum()
            })
            .collect::<Vec<Complex64>>();
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        Ok(StateVector {
            labels: self.labels_out.clone(),
            amplitudes: amps,
        })
    }

    pub fn adjoint(&self) -> Self {
        let (r, c) = (self.dim_out(), self.dim_in());
        let mut entries = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                entries.push(self.entries[i * c + j].conj());
            }
        }
        Operator {
            labels_out: self.labels_in.clone(),
            labels_in: self.labels_out.clone(),
            entries,
        }
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Operator) -> Result<Self> {
        same_basis(&self.labels_in, &rhs.labels_out)?;
        let (m, k, n) = (self.dim_out(), self.dim_in(), rhs.dim_in());
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); m * n];
        for i in 0..m {
            for l in 0..k {
                let a = self.entries[i * k + l];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * rhs.entries[l * n + j];
                }
            }
        }
        Ok(Operator {
            labels_out: self.labels_out.clone(),
            labels_in: rhs.labels_in.clone(),
            entries,
        })
    }

    fn zip_with(
        &self,
        other: &Operator,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        same_basis(&self.labels_out, &other.labels_out)?;
        same_basis(&self.labels_in, &other.labels_in)?;
        Ok(Operator {
            labels_out: self.labels_out.clone(),
            labels_in: self.labels_in.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Operator) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Operator {
            labels_out: self.labels_out.clone(),
            labels_in: self.labels_in.clone(),
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// Kronecker product, `self` acting on the first factor.
    pub fn kron(&self, other: &Operator) -> Self {
        let (r1, c1) = (self.dim_out(), self.dim_in());
        let (r2, c2) = (other.dim_out(), other.dim_in());
        let cols = c1 * c2;
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); r1 * r2 * cols];
        for i1 in 0..r1 {
            for j1 in 0..c1 {
                let a = self.entries[i1 * c1 + j1];
                for i2 in 0..r2 {
                    for j2 in 0..c2 {
                        entries[(i1 * r2 + i2) * cols + j1 * c2 + j2] =
                            a * other.entries[i2 * c2 + j2];
                    }
                }
            }
        }
        Operator {
            labels_out: tensor_labels(&self.labels_out, &other.labels_out),
            labels_in: tensor_labels(&self.labels_in, &other.labels_in),
            entries,
        }
    }

    /// `⟨bra|self|ket⟩`.
    pub fn matrix_element(&self, bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
        bra.inner(&self.apply(ket)?)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        Ok(self
            .sub(other)?
            .entries
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let Ok(prod) = self.adjoint().compose(self) else {
            return false;
        };
        let Ok(id) = Operator::identity(self.labels_in.clone()) else {
            return false;
        };
        prod.max_abs_diff(&id).is_ok_and(|d| d <= tol)
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let hermitian = self.max_abs_diff(&self.adjoint()).is_ok_and(|d| d <= tol);
        let idempotent = self
            .compose(self)
            .and_then(|sq| sq.max_abs_diff(self))
            .is_ok_and(|d| d <= tol);
        hermitian && idempotent
    }

    /// Short human-readable tag: `I`, `|A⟩⟨A|` for a basis projector, else `O`.
    pub fn describe(&self) -> String {
        if !self.is_square() {
            return "O".to_string();
        }
        let n = self.dim_in();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let diag_only = (0..n).all(|i| (0..n).all(|j| i == j || self.entries[i * n + j] == zero));
        if !diag_only {
            return "O".to_string();
        }
        let ones: Vec<usize> = (0..n).filter(|&i| self.entries[i * n + i] == one).collect();
        let zeros = (0..n).filter(|&i| self.entries[i * n + i] == zero).count();
        if ones.len() == n {
            "I".to_string()
        } else if ones.len() == 1 && zeros == n - 1 {
            let l = &self.labels_in[ones[0]];
            format!("|{l}⟩⟨{l}|")
        } else {
            "O".to_string()
        }
    }
}
