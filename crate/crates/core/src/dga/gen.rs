use std::fmt;

/// How a generator interacts with its neighbours under normalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenClass {
    /// First-order coordinate differential `dx[i]`; obeys the exchange rule.
    CoordinateDifferential,
    /// No relation with anything.
    FreeEntry,
    /// One half of the pair `g`, `ginv`.
    InversePair,
}

/// Underlying symbol of a generator, before any differentials are applied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    /// Coordinate differential `dx[i]`, grade 1.
    Coord(u32),
    /// Connection entry `w[i,j]`, grade 1.
    Connection(u32, u32),
    /// Gauge potential component `A[i]`.
    Potential(u32),
    /// Potential derivative component `dA[i,j]`, a grade-0 scalar symbol.
    PotentialGrad(u32, u32),
    /// Vector-field component `v[i]`.
    VectorComp(u32),
    /// Generic tensor component `f[i,j,...]`.
    Component(Vec<u32>),
    /// Scalar multiplier `alpha`.
    Alpha,
    /// Closed matrix entry `P<grade>[i,j]` with `dP = 0`.
    Flat { grade: u32, row: u32, col: u32 },
    /// Frame element `e[i]` of a frame of size `dim`, with `d e_i = w[i,j] e_j`.
    Frame { index: u32, dim: u32 },
    /// Group element `g`.
    Group,
    /// Its inverse `ginv`.
    GroupInv,
}

impl Base {
    pub fn grade(&self) -> u32 {
        match self {
            Base::Coord(_) | Base::Connection(..) => 1,
            Base::Flat { grade, .. } => *grade,
            _ => 0,
        }
    }
}

/// `d^order` applied to a base symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub base: Base,
    pub order: u32,
}

impl Gen {
    pub fn new(base: Base) -> Self {
        Gen { base, order: 0 }
    }

    pub fn with_order(base: Base, order: u32) -> Self {
        Gen { base, order }
    }

    pub fn dx(i: u32) -> Self {
        Gen::new(Base::Coord(i))
    }

    pub fn omega(i: u32, j: u32) -> Self {
        Gen::new(Base::Connection(i, j))
    }

    pub fn grade(&self) -> u32 {
        self.base.grade() + self.order
    }

    /// Number of differentials the symbol carries, counting the one built
    /// into `dx[i]`; this is what nilpotency bounds.
    pub fn depth(&self) -> u32 {
        match self.base {
            Base::Coord(_) => self.order + 1,
            _ => self.order,
        }
    }

    pub fn class(&self) -> GenClass {
        match (&self.base, self.order) {
            (Base::Coord(_), 0) => GenClass::CoordinateDifferential,
            (Base::Group, 0) | (Base::GroupInv, _) => GenClass::InversePair,
            _ => GenClass::FreeEntry,
        }
    }

    pub fn is_coordinate_differential(&self) -> bool {
        self.class() == GenClass::CoordinateDifferential
    }

    /// `g ginv` or `ginv g`.
    pub fn cancels_with(&self, next: &Gen) -> bool {
        self.order == 0
            && next.order == 0
            && matches!(
                (&self.base, &next.base),
                (Base::Group, Base::GroupInv) | (Base::GroupInv, Base::Group)
            )
    }
}

fn indices(ix: &[u32]) -> String {
    ix.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Coord(i) => write!(f, "dx[{i}]"),
            Base::Connection(i, j) => write!(f, "w[{i},{j}]"),
            Base::Potential(i) => write!(f, "A[{i}]"),
            Base::PotentialGrad(i, j) => write!(f, "dA[{i},{j}]"),
            Base::VectorComp(i) => write!(f, "v[{i}]"),
            Base::Component(ix) => write!(f, "f[{}]", indices(ix)),
            Base::Alpha => write!(f, "alpha"),
            Base::Flat { grade, row, col } => write!(f, "P{grade}[{row},{col}]"),
            Base::Frame { index, .. } => write!(f, "e[{index}]"),
            Base::Group => write!(f, "g"),
            Base::GroupInv => write!(f, "ginv"),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.base.to_string();
        match self.order {
            0 => write!(f, "{body}"),
            1 => write!(f, "d({body})"),
            r => write!(f, "d^{r}({body})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grades_and_classes() {
        assert_eq!(Gen::dx(2).grade(), 1);
        assert!(Gen::dx(2).is_coordinate_differential());
        assert_eq!(Gen::with_order(Base::Coord(2), 1).class(), GenClass::FreeEntry);
        assert_eq!(Gen::with_order(Base::Connection(1, 2), 2).grade(), 3);
        assert_eq!(Gen::new(Base::Flat { grade: 3, row: 1, col: 1 }).grade(), 3);
        assert_eq!(Gen::new(Base::GroupInv).class(), GenClass::InversePair);
        assert_eq!(Gen::with_order(Base::Group, 1).class(), GenClass::FreeEntry);
    }

    #[test]
    fn printing() {
        assert_eq!(Gen::dx(3).to_string(), "dx[3]");
        assert_eq!(Gen::with_order(Base::Coord(3), 2).to_string(), "d^2(dx[3])");
        assert_eq!(Gen::with_order(Base::Connection(1, 2), 1).to_string(), "d(w[1,2])");
        assert_eq!(Gen::new(Base::Component(vec![1, 2, 3])).to_string(), "f[1,2,3]");
    }
}
