use crate::scalar::{Real, C};

/// Circular-basis Rabi amplitudes `(Ω₁, Ω₂)` of the σ⁺ and σ⁻ fields at one
/// position, in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldPair<T> {
    pub omega1: C<T>,
    pub omega2: C<T>,
}

impl<T: Real> FieldPair<T> {
    pub fn new(omega1: C<T>, omega2: C<T>) -> Self {
        Self { omega1, omega2 }
    }

    pub fn zero() -> Self {
        Self::new(C::new(T::zero(), T::zero()), C::new(T::zero(), T::zero()))
    }

    pub fn is_finite(&self) -> bool {
        [self.omega1, self.omega2]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `|Ω₁|² + |Ω₂|²`.
    pub fn total_power(&self) -> T {
        self.omega1.norm_sqr() + self.omega2.norm_sqr()
    }

    /// `(Ω_c, Ω_p)` of the two linear polarisations.
    pub fn linear(&self) -> (C<T>, C<T>) {
        to_linear(self)
    }

    pub(crate) fn as_array(&self) -> [C<T>; 2] {
        [self.omega1, self.omega2]
    }

    pub(crate) fn from_array(a: [C<T>; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

/// `Ω₁ = (Ω_c + Ω_p)/√2`, `Ω₂ = (Ω_c − Ω_p)/√2`.
pub fn to_circular<T: Real>(omega_c: C<T>, omega_p: C<T>) -> FieldPair<T> {
    let s = T::FRAC_1_SQRT_2();
    FieldPair::new((omega_c + omega_p) * s, (omega_c - omega_p) * s)
}

/// `Ω_c = (Ω₁ + Ω₂)/√2`, `Ω_p = (Ω₁ − Ω₂)/√2`.
pub fn to_linear<T: Real>(fields: &FieldPair<T>) -> (C<T>, C<T>) {
    let s = T::FRAC_1_SQRT_2();
    (
        (fields.omega1 + fields.omega2) * s,
        (fields.omega1 - fields.omega2) * s,
    )
}
