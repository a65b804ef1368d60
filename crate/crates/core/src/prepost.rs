//! Weak values and ABL probabilities for a pre- and post-selected ensemble.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std's inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qcore::{Operator, StateVector, EXACT_TOL};

/// Overlaps `|⟨f|i⟩|` at or below this are treated as orthogonal.
pub const OVERLAP_CUTOFF: f64 = 1e-12;

/// Normalized preselection `|i⟩`, postselection `|f⟩`, and their overlap `⟨f|i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrePostSelection {
    pre: StateVector,
    post: StateVector,
    overlap: Complex64,
}

/// A weak value together with the observable it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakValueResult {
    pub value: Complex64,
    pub observable_tag: String,
}

impl PrePostSelection {
    /// Both states are normalized on the way in.
    pub fn new(pre: &StateVector, post: &StateVector) -> Result<Self> {
        let (pre, _) = pre.normalize()?;
        let (post, _) = post.normalize()?;
        let overlap = post.inner(&pre)?;
        if overlap.norm() <= OVERLAP_CUTOFF {
            return Err(Error::UndefinedWeakValue {
                overlap: overlap.norm(),
            });
        }
        Ok(PrePostSelection { pre, post, overlap })
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> &StateVector {
        &self.post
    }

    /// `⟨f|i⟩`.
    pub fn overlap(&self) -> Complex64 {
        self.overlap
    }

    /// `⟨f|O|i⟩ / ⟨f|i⟩`, complex in general.
    pub fn weak_value(&self, obs: &Operator) -> Result<WeakValueResult> {
        let num = obs.matrix_element(&self.post, &self.pre)?;
        let value = num / self.overlap;
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::UndefinedWeakValue {
                overlap: self.overlap.norm(),
            });
        }
        Ok(WeakValueResult {
            value,
            observable_tag: obs.describe(),
        })
    }

    /// Binary ABL probability for `proj` against its complement `I − proj`.
    pub fn abl_probability(&self, proj: &Operator) -> Result<f64> {
        if !proj.is_projector(EXACT_TOL) {
            return Err(Error::NotProjector);
        }
        let id = Operator::identity(proj.labels_in().to_vec())?;
        let yes = proj.matrix_element(&self.post, &self.pre)?.norm_sqr();
        let no = id
            .sub(proj)?
            .matrix_element(&self.post, &self.pre)?
            .norm_sqr();
        let total = yes + no;
        if total <= OVERLAP_CUTOFF * OVERLAP_CUTOFF {
            return Err(Error::UndefinedAbl);
        }
        Ok(yes / total)
    }

    /// Sum of weak values over a resolution of the identity.
    pub fn weak_value_sum(&self, projs: &[Operator]) -> Result<Complex64> {
        let first = projs.first().ok_or(Error::IncompleteProjectorSet {
            deviation: f64::INFINITY,
        })?;
        let id = Operator::identity(first.labels_in().to_vec())?;
        let mut total =
            Operator::identity(first.labels_in().to_vec())?.scale(Complex64::new(0.0, 0.0));
        for p in projs {
            if !p.is_projector(EXACT_TOL) {
                return Err(Error::NotProjector);
            }
            total = total.add(p)?;
        }
        let deviation = total.max_abs_diff(&id)?;
        if deviation > EXACT_TOL {
            return Err(Error::IncompleteProjectorSet { deviation });
        }
        projs
            .iter()
            .map(|p| self.weak_value(p).map(|w| w.value))
            .sum()
    }
}

/// The three-box configuration: paths A, B, C with projectors onto each.
#[derive(Debug, Clone)]
pub struct ThreeBox {
    pub selection: PrePostSelection,
    pub projectors: [Operator; 3],
}

pub const THREE_BOX_PATHS: [&str; 3] = ["A", "B", "C"];

/// `|i⟩ = (A+B+C)/√3`, `|f⟩ = (A+B−C)/√3`.
pub fn three_box_scenario() -> ThreeBox {
    let s = 1.0 / 3f64.sqrt();
    let pre = StateVector::from_real(THREE_BOX_PATHS, &[s, s, s]).expect("valid basis");
    let post = StateVector::from_real(THREE_BOX_PATHS, &[s, s, -s]).expect("valid basis");
    let selection = PrePostSelection::new(&pre, &post).expect("overlap 1/3");
    let proj = |l| Operator::basis_projector(THREE_BOX_PATHS, l).expect("label in basis");
    ThreeBox {
        selection,
        projectors: [proj("A"), proj("B"), proj("C")],
    }
}

impl ThreeBox {
    pub fn weak_values(&self) -> Result<Vec<WeakValueResult>> {
        self.projectors
            .iter()
            .map(|p| self.selection.weak_value(p))
            .collect()
    }

    pub fn abl_probabilities(&self) -> Result<Vec<f64>> {
        self.projectors
            .iter()
            .map(|p| self.selection.abl_probability(p))
            .collect()
    }
}
