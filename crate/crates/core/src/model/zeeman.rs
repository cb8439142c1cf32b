use crate::scalar::Real;

/// CODATA 2018 `μ_B / h` in Hz/T.
pub const BOHR_MAGNETON_OVER_H: f64 = 1.399_624_493_61e10;

/// Angular Zeeman splitting `2π·g·μ_B·m·B/h` (rad/s) for a field `b_field` in tesla.
pub fn zeeman_shift<T: Real>(b_field: T, g_factor: T, m_quantum: i32) -> T {
    let m = T::lit(f64::from(m_quantum));
    T::TAU() * g_factor * T::lit(BOHR_MAGNETON_OVER_H) * m * b_field
}
