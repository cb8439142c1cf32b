use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sampled one-dimensional result with labelled axes.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve<T, Y = T> {
    abscissa: String,
    ordinate: String,
    points: Vec<(T, Y)>,
}

impl<T: Real, Y: Clone> Curve<T, Y> {
    /// Builds a curve; abscissae must be finite and strictly increasing.
    pub fn new(
        abscissa: impl Into<String>,
        ordinate: impl Into<String>,
        points: Vec<(T, Y)>,
    ) -> Result<Self> {
        if let Some(bad) = points.iter().position(|(x, _)| !x.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite abscissa at index {bad}")));
        }
        if let Some(i) = points.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidGrid(format!(
                "abscissa not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self {
            abscissa: abscissa.into(),
            ordinate: ordinate.into(),
            points,
        })
    }

    pub fn abscissa(&self) -> &str {
        &self.abscissa
    }

    pub fn ordinate(&self) -> &str {
        &self.ordinate
    }

    pub fn points(&self) -> &[(T, Y)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> impl Iterator<Item = T> + '_ {
        self.points.iter().map(|(x, _)| *x)
    }

    pub fn ys(&self) -> impl Iterator<Item = &Y> + '_ {
        self.points.iter().map(|(_, y)| y)
    }

    /// Applies `f` to every ordinate, keeping the abscissae.
    pub fn map<Z: Clone>(&self, ordinate: impl Into<String>, f: impl Fn(&Y) -> Z) -> Curve<T, Z> {
        Curve {
            abscissa: self.abscissa.clone(),
            ordinate: ordinate.into(),
            points: self.points.iter().map(|(x, y)| (*x, f(y))).collect(),
        }
    }
}

impl<T: Real> Curve<T, T> {
    /// `(max − min) / mean` of the ordinates.
    pub fn relative_variation(&self) -> T {
        let n = T::from_count(self.points.len().max(1));
        let (lo, hi, sum) = self.points.iter().fold(
            (T::infinity(), T::neg_infinity(), T::zero()),
            |(lo, hi, s), (_, y)| (lo.min(*y), hi.max(*y), s + *y),
        );
        (hi - lo) / (sum / n)
    }
}
