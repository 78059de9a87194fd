use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `i d` with `d > 0`.
    Imaginary,
    /// `theta` in `[0, pi]`.
    Real,
    /// `pi + i d` with `d > 0`.
    PhaseShifted,
}

/// A point of the curve `iR+ U [0, pi] U (pi + iR+)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexAngle {
    pub branch: Branch,
    pub value: f64,
}

impl ComplexAngle {
    pub fn real(theta: f64) -> ComplexAngle {
        ComplexAngle { branch: Branch::Real, value: theta }
    }

    pub fn imaginary(d: f64) -> ComplexAngle {
        ComplexAngle { branch: Branch::Imaginary, value: d }
    }

    pub fn phase_shifted(d: f64) -> ComplexAngle {
        ComplexAngle { branch: Branch::PhaseShifted, value: d }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self.branch {
            Branch::Imaginary => Complex64::new(0.0, self.value),
            Branch::Real => Complex64::new(self.value, 0.0),
            Branch::PhaseShifted => Complex64::new(std::f64::consts::PI, self.value),
        }
    }

    /// Euclidean distance of the two points of the curve in C.
    pub fn deviation(&self, other: &ComplexAngle) -> f64 {
        (self.to_complex() - other.to_complex()).norm()
    }
}

/// Inverse of the complex cosine restricted to the curve.
pub fn acos_theta(r: f64) -> ComplexAngle {
    if r > 1.0 {
        ComplexAngle::imaginary(r.acosh())
    } else if r < -1.0 {
        ComplexAngle::phase_shifted((-r).acosh())
    } else {
        ComplexAngle::real(r.acos())
    }
}

pub fn cos_theta(a: &ComplexAngle) -> f64 {
    match a.branch {
        Branch::Imaginary => a.value.cosh(),
        Branch::Real => a.value.cos(),
        Branch::PhaseShifted => -a.value.cosh(),
    }
}
