use std::fmt;

/// An integer degree extended by `-inf` (the degree of zero).
///
/// `NegInf` sorts below every finite value and absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(u64),
}

impl Degree {
    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Degree::Finite(v) => Some(v),
            Degree::NegInf => None,
        }
    }
}

impl std::ops::Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl From<u64> for Degree {
    fn from(v: u64) -> Self {
        Degree::Finite(v)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(v) => write!(f, "{v}"),
        }
    }
}
