use crate::exactalg::{Field, Mat};
use crate::groupcoh::GModule;

/// Coefficients for cochains: the ground field, or a module whose action
/// twists labelled faces.
#[derive(Clone, Debug)]
pub enum Coefficients<F: Field> {
    Field(F),
    Module(GModule<F>),
}

impl<F: Field> Coefficients<F> {
    pub fn field(&self) -> &F {
        match self {
            Coefficients::Field(f) => f,
            Coefficients::Module(m) => m.field(),
        }
    }

    /// Dimension of the coefficient space.
    pub fn rank(&self) -> usize {
        match self {
            Coefficients::Field(_) => 1,
            Coefficients::Module(m) => m.dim(),
        }
    }

    /// The matrix moving a value across a face labelled `label`:
    /// `ρ(label)^{-1}`, or the identity when there is nothing to twist.
    pub fn transport(&self, label: Option<usize>) -> Mat<F> {
        match (self, label) {
            (Coefficients::Module(m), Some(g)) => m.rho_inv(g).clone(),
            _ => Mat::identity(self.field(), self.rank()),
        }
    }

    pub fn module(&self) -> Option<&GModule<F>> {
        match self {
            Coefficients::Module(m) => Some(m),
            Coefficients::Field(_) => None,
        }
    }
}
