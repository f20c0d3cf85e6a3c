use super::DecError;
use crate::mesh::CellComplex;

/// Whether a cochain lives on primal cells or on their duals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Primal,
    Dual,
}

/// A discrete k-form. Dual cochains of degree k are indexed by the primal
/// (n-k)-cells whose duals carry them.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    degree: usize,
    placement: Placement,
    values: Vec<f64>,
}

impl Cochain {
    pub fn new(degree: usize, placement: Placement, values: Vec<f64>) -> Result<Self, DecError> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(DecError::NonFinite { index });
        }
        Ok(Self {
            degree,
            placement,
            values,
        })
    }

    pub fn zeros(complex: &CellComplex, degree: usize, placement: Placement) -> Self {
        let len = Self::expected_len(complex, degree, placement);
        Self {
            degree,
            placement,
            values: vec![0.0; len],
        }
    }

    /// Builds a cochain sized for `complex`, checking the length.
    pub fn on(
        complex: &CellComplex,
        degree: usize,
        placement: Placement,
        values: Vec<f64>,
    ) -> Result<Self, DecError> {
        let c = Self::new(degree, placement, values)?;
        c.check(complex)?;
        Ok(c)
    }

    fn expected_len(complex: &CellComplex, degree: usize, placement: Placement) -> usize {
        match placement {
            Placement::Primal => complex.num_cells(degree),
            Placement::Dual => complex.num_cells(complex.dim().saturating_sub(degree)),
        }
    }

    /// Verifies that the length matches `complex`.
    pub fn check(&self, complex: &CellComplex) -> Result<(), DecError> {
        if self.degree > complex.dim() {
            return Err(DecError::DegreeOutOfRange {
                degree: self.degree,
                dim: complex.dim(),
            });
        }
        let expected = Self::expected_len(complex, self.degree, self.placement);
        if expected != self.values.len() {
            return Err(DecError::LengthMismatch {
                expected,
                actual: self.values.len(),
            });
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable access; callers must keep values finite.
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// CSV dump with columns `cell_index,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell_index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }
}
