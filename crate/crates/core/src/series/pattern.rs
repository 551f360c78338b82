use crate::error::{Error, Result};

/// Support pattern `{(M k, N k) : k >= 0}` of functions of `z1^M z2^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagonalPattern {
    m: usize,
    n: usize,
}

impl DiagonalPattern {
    /// The plain diagonal `k = l`.
    pub const DIAGONAL: DiagonalPattern = DiagonalPattern { m: 1, n: 1 };

    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Input(format!(
                "diagonal pattern needs M, N >= 1, got ({m}, {n})"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Returns `Some(j)` when `(k, l) = (M j, N j)`.
    pub fn index_of(&self, k: usize, l: usize) -> Option<usize> {
        if !k.is_multiple_of(self.m) || !l.is_multiple_of(self.n) {
            return None;
        }
        let j = k / self.m;
        (l / self.n == j).then_some(j)
    }

    /// Largest `j` with `M j <= d1` and `N j <= d2`.
    pub fn max_index(&self, d1: usize, d2: usize) -> usize {
        (d1 / self.m).min(d2 / self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.m == 1 && self.n == 1
    }
}

impl std::fmt::Display for DiagonalPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero() {
        assert!(DiagonalPattern::new(0, 1).is_err());
        assert!(DiagonalPattern::new(2, 0).is_err());
    }

    #[test]
    fn index_of() {
        let p = DiagonalPattern::new(2, 3).unwrap();
        assert_eq!(p.index_of(0, 0), Some(0));
        assert_eq!(p.index_of(4, 6), Some(2));
        assert_eq!(p.index_of(4, 3), None);
        assert_eq!(p.index_of(1, 0), None);
        assert_eq!(p.max_index(10, 10), 3);
    }
}
