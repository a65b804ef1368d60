//! Jones calculus for half-wave plates and the two-path interferometer.
//!
//! A photon is prepared in `|ψ⟩|L⟩` with `|ψ⟩ ∝ p|A⟩ + (p−1)|B⟩` and
//! `|L⟩ = cosθ|H⟩ + sinθ|V⟩`. A half-wave plate at π/4 sits on path A, and
//! the photon is postselected on `|φ⟩ = (|A⟩ − |B⟩)/√2`. The weak value of
//! `|A⟩⟨A|` for this pre/post pair is exactly `p`, and the output linear
//! polarization rotates by an amount that tracks it.
//!
//! All angles here are real-space polarization directions in radians. A
//! rotation of `δ` in real space is a rotation of `2δ` on the Poincaré sphere.
//!
//! The interferometer is implemented twice: [`run_interferometer`] from the
//! closed-form output amplitudes and [`simulate_interferometer`] by pushing
//! the full path ⊗ polarization state through [`crate::qcore`].

use alloc::vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std's inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qcore::{Operator, StateVector, EXACT_TOL};

pub const PATHS: [&str; 2] = ["A", "B"];
pub const POLARIZATIONS: [&str; 2] = ["H", "V"];

/// Half-wave plate with fast axis at `chi` from H: `[[cos2χ, sin2χ], [sin2χ, −cos2χ]]`.
///
/// Maps a linear polarization at angle `a` to one at `2χ − a`.
pub fn hwp(chi: f64) -> Operator {
    let (s, c) = (2.0 * chi).sin_cos();
    Operator::from_real_rows(POLARIZATIONS, &[&[c, s], &[s, -c]]).expect("2x2 on H,V")
}

/// `cos a |H⟩ + sin a |V⟩`.
pub fn linear_polarization(angle: f64) -> StateVector {
    let (s, c) = angle.sin_cos();
    StateVector::from_real(POLARIZATIONS, &[c, s]).expect("H,V basis")
}

/// `x` reduced into [0, m).
fn modulo(x: f64, m: f64) -> f64 {
    let r = x - m * (x / m).floor();
    if r >= m {
        0.0
    } else {
        r
    }
}

/// Folds an angle difference onto (−π/2, π/2], the range of a direction change.
pub fn wrap_direction(delta: f64) -> f64 {
    let r = modulo(delta, PI);
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

/// Direction of a linear polarization in [0, π).
///
/// The global phase is removed first; a state whose amplitudes are not real
/// after that is elliptical and rejected.
pub fn polarization_angle(s: &StateVector) -> Result<f64> {
    if s.labels() != POLARIZATIONS {
        return Err(Error::LabelMismatch {
            expected: POLARIZATIONS.join(","),
            found: s.labels().join(","),
        });
    }
    let (unit, _) = s.normalize()?;
    let a = unit.amplitudes();
    let lead = if a[0].norm() >= a[1].norm() {
        a[0]
    } else {
        a[1]
    };
    let phase = lead.conj() / lead.norm();
    let (h, v) = (a[0] * phase, a[1] * phase);
    if h.im.abs() > 1e-9 || v.im.abs() > 1e-9 {
        return Err(Error::NotLinearPolarization);
    }
    Ok(modulo(v.re.atan2(h.re), PI))
}

/// Polarization-path correlation `G = cos²θ − sin²θ` and its angle `θ ∈ [0, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementStrength {
    g: f64,
    theta: f64,
}

impl MeasurementStrength {
    pub fn from_g(g: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::OutOfRange {
                what: "measurement strength G",
                value: g,
            });
        }
        Ok(MeasurementStrength {
            g,
            theta: g.acos() / 2.0,
        })
    }

    pub fn from_theta(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_4).contains(&theta) {
            return Err(Error::OutOfRange {
                what: "polarization angle theta",
                value: theta,
            });
        }
        Ok(MeasurementStrength {
            g: (2.0 * theta).cos().clamp(0.0, 1.0),
            theta,
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `√((1+G)/2)`
    pub fn cos_theta(&self) -> f64 {
        ((1.0 + self.g) / 2.0).sqrt()
    }

    /// `√((1−G)/2)`
    pub fn sin_theta(&self) -> f64 {
        ((1.0 - self.g) / 2.0).sqrt()
    }

    /// The input polarization `|L⟩`.
    pub fn input_polarization(&self) -> StateVector {
        StateVector::from_real(POLARIZATIONS, &[self.cos_theta(), self.sin_theta()])
            .expect("H,V basis")
    }
}

/// Same as [`MeasurementStrength::from_theta`].
pub fn strength_from_theta(theta: f64) -> Result<MeasurementStrength> {
    MeasurementStrength::from_theta(theta)
}

/// Same as [`MeasurementStrength::from_g`].
pub fn theta_from_strength(g: f64) -> Result<MeasurementStrength> {
    MeasurementStrength::from_g(g)
}

/// Rotation produced by a certain passage through the plate: `π/2 − 2θ = arcsin G`.
pub fn delta_theta(strength: MeasurementStrength) -> f64 {
    FRAC_PI_2 - 2.0 * strength.theta()
}

/// Path preselection `(p|A⟩ + (p−1)|B⟩)/√n` with `n = p² + (p−1)²`.
pub fn preselection_from_weak_value(p_a: f64) -> StateVector {
    let n = p_a * p_a + (p_a - 1.0) * (p_a - 1.0);
    let r = n.sqrt();
    StateVector::from_real(PATHS, &[p_a / r, (p_a - 1.0) / r]).expect("A,B basis")
}

/// Path postselection `(|A⟩ − |B⟩)/√2`.
pub fn postselection_state() -> StateVector {
    let r = 0.5f64.sqrt();
    StateVector::from_real(PATHS, &[r, -r]).expect("A,B basis")
}

/// Angle `η` of the preparation plate with `(cos2η, sin2η) ∝ (p, p−1)`, in [0, π/2).
pub fn preparation_angle(p_a: f64) -> f64 {
    modulo((p_a - 1.0).atan2(p_a) / 2.0, FRAC_PI_2)
}

/// Inverse of [`preparation_angle`]. `η = π/8` would need `p = ∞`.
pub fn weak_value_from_preparation_angle(eta: f64) -> Result<f64> {
    let (s, c) = (2.0 * eta).sin_cos();
    if (c - s).abs() <= EXACT_TOL {
        return Err(Error::OutOfRange {
            what: "preparation angle eta",
            value: eta,
        });
    }
    Ok(c / (c - s))
}

/// Which arm carries the half-wave plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathArm {
    A,
    B,
}

impl PathArm {
    pub fn label(self) -> &'static str {
        match self {
            PathArm::A => "A",
            PathArm::B => "B",
        }
    }
}

/// One pass of a photon through the interferometer, conditioned on postselection.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerRun {
    pub p_a: f64,
    pub strength: MeasurementStrength,
    pub hwp_path: PathArm,
    pub hwp_angle: f64,
    /// Normalized output polarization, physical sign kept.
    pub output_polarization: StateVector,
    /// Direction of the output polarization in [0, π).
    pub output_angle: f64,
    pub postselect_prob: f64,
}

impl InterferometerRun {
    /// Rotation of the output relative to the input `|L⟩`, in (−π/2, π/2].
    pub fn shift(&self) -> f64 {
        wrap_direction(self.output_angle - self.strength.theta())
    }
}

/// Unnormalized output amplitudes `(α_H, α_V)` for the standard setup.
pub fn output_amplitudes(p_a: f64, strength: MeasurementStrength) -> (f64, f64) {
    let (c, s) = (strength.cos_theta(), strength.sin_theta());
    let q = p_a - 1.0;
    (p_a * s - q * c, p_a * c - q * s)
}

/// Closed-form interferometer with the plate at π/4 on path A.
pub fn run_interferometer(p_a: f64, strength: MeasurementStrength) -> Result<InterferometerRun> {
    let (ah, av) = output_amplitudes(p_a, strength);
    let n_out = ah * ah + av * av;
    if n_out <= EXACT_TOL * EXACT_TOL {
        return Err(Error::PostselectionAnnihilates);
    }
    let n_in = p_a * p_a + (p_a - 1.0) * (p_a - 1.0);
    let r = n_out.sqrt();
    let output_polarization = StateVector::from_real(POLARIZATIONS, &[ah / r, av / r])?;
    let output_angle = polarization_angle(&output_polarization)?;
    Ok(InterferometerRun {
        p_a,
        strength,
        hwp_path: PathArm::A,
        hwp_angle: FRAC_PI_4,
        output_polarization,
        output_angle,
        postselect_prob: n_out / (2.0 * n_in),
    })
}

/// Full state-vector simulation: prepare `|ψ⟩|L⟩`, apply the plate on
/// `hwp_path`, contract with `⟨φ|` on the path factor, renormalize.
pub fn simulate_interferometer(
    p_a: f64,
    strength: MeasurementStrength,
    hwp_path: PathArm,
    hwp_angle: f64,
) -> Result<InterferometerRun> {
    let state = preselection_from_weak_value(p_a).tensor(&strength.input_polarization())?;
    let on_arm = Operator::basis_projector(PATHS, hwp_path.label())?;
    let other = Operator::identity(PATHS)?.sub(&on_arm)?;
    let step = on_arm
        .kron(&hwp(hwp_angle))
        .add(&other.kron(&Operator::identity(POLARIZATIONS)?))?;
    let after = step.apply(&state)?;
    let projected = after.contract_first(&postselection_state(), &POLARIZATIONS.map(Into::into))?;
    let prob = projected.norm_sqr();
    if prob <= EXACT_TOL * EXACT_TOL {
        return Err(Error::PostselectionAnnihilates);
    }
    let (output_polarization, _) = projected.normalize()?;
    let output_angle = polarization_angle(&output_polarization)?;
    Ok(InterferometerRun {
        p_a,
        strength,
        hwp_path,
        hwp_angle,
        output_polarization,
        output_angle,
        postselect_prob: prob,
    })
}

/// Exact rotation of the polarization direction, in (−π/2, π/2]:
/// `Arctan[(p√(1+G) − (p−1)√(1−G)) / (p√(1−G) − (p−1)√(1+G))] − Arctan√((1−G)/(1+G))`.
pub fn shift_angle_exact(p_a: f64, strength: MeasurementStrength) -> Result<f64> {
    let g = strength.g();
    let (up, down) = ((1.0 + g).sqrt(), (1.0 - g).sqrt());
    let q = p_a - 1.0;
    let num = p_a * up - q * down;
    let den = p_a * down - q * up;
    if num.abs() <= EXACT_TOL && den.abs() <= EXACT_TOL {
        return Err(Error::PostselectionAnnihilates);
    }
    let out = if den == 0.0 {
        FRAC_PI_2.copysign(num)
    } else {
        (num / den).atan()
    };
    Ok(wrap_direction(out - (down / up).atan()))
}

/// Small-G rotation `p·G`.
pub fn shift_angle_approx(p_a: f64, g: f64) -> f64 {
    p_a * g
}

/// Plate angle that maps the run's output direction back onto `target`.
///
/// Equal to `(output_angle + target)/2` modulo π/2, choosing the branch
/// within π/4 of `target`.
pub fn restoration_hwp_angle(run: &InterferometerRun, target: f64) -> f64 {
    target + wrap_direction(run.output_angle - target) / 2.0
}

/// Complex amplitude helper for callers building Jones vectors by hand.
pub fn jones(h: Complex64, v: Complex64) -> StateVector {
    StateVector::new(POLARIZATIONS, vec![h, v]).expect("H,V basis")
}
