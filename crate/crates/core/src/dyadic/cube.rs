use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Deepest level a cube index can address (indices are stored in a `u64`).
pub const MAX_CUBE_LEVEL: u32 = 62;

/// The dyadic interval `[k 2^-j, (k+1) 2^-j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    level: u32,
    index: u64,
}

impl DyadicCube {
    pub fn new(level: u32, index: u64) -> Result<Self> {
        if level > MAX_CUBE_LEVEL {
            return Err(Error::domain(format!(
                "level {level} exceeds the maximum {MAX_CUBE_LEVEL}"
            )));
        }
        if index >= 1u64 << level {
            return Err(Error::domain(format!(
                "index {index} out of range for level {level}"
            )));
        }
        Ok(Self { level, index })
    }

    pub fn root() -> Self {
        Self { level: 0, index: 0 }
    }

    /// The unique cube of generation `level` containing `x`.
    pub fn of_point(x: f64, level: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("point {x} is outside [0, 1)")));
        }
        if level > MAX_CUBE_LEVEL {
            return Err(Error::domain(format!(
                "level {level} exceeds the maximum {MAX_CUBE_LEVEL}"
            )));
        }
        // x * 2^level is exact in binary floating point, so the floor is too.
        let scaled = x * (1u64 << level) as f64;
        let index = (scaled.floor() as u64).min((1u64 << level) - 1);
        Ok(Self { level, index })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn side(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn left(&self) -> f64 {
        self.index as f64 * self.side()
    }

    pub fn right(&self) -> f64 {
        (self.index + 1) as f64 * self.side()
    }

    pub fn contains_point(&self, x: f64) -> bool {
        x >= self.left() && x < self.right()
    }

    pub fn parent(&self) -> Option<Self> {
        (self.level > 0).then(|| Self {
            level: self.level - 1,
            index: self.index >> 1,
        })
    }

    /// Ancestor at generation `level <= self.level`.
    pub fn ancestor(&self, level: u32) -> Option<Self> {
        (level <= self.level).then(|| Self {
            level,
            index: self.index >> (self.level - level),
        })
    }

    pub fn children(&self) -> Option<[Self; 2]> {
        (self.level < MAX_CUBE_LEVEL).then(|| {
            let level = self.level + 1;
            [
                Self { level, index: 2 * self.index },
                Self { level, index: 2 * self.index + 1 },
            ]
        })
    }

    /// True when `other` is a (non-strict) subcube of `self`.
    pub fn contains_cube(&self, other: &Self) -> bool {
        other.level >= self.level && other.index >> (other.level - self.level) == self.index
    }

    /// Index range `[lo, hi)` at this cube's level covered by the tripled cube
    /// `[(k-1) 2^-j, (k+2) 2^-j)` truncated to `[0, 1)`.
    pub fn tripled_range(&self) -> (u64, u64) {
        let lo = self.index.saturating_sub(1);
        let hi = (self.index + 2).min(1u64 << self.level);
        (lo, hi)
    }

    /// Interval endpoints of the truncated tripled cube.
    pub fn tripled(&self) -> (f64, f64) {
        let (lo, hi) = self.tripled_range();
        (lo as f64 * self.side(), hi as f64 * self.side())
    }

    /// True when `other` lies inside the tripled cube of `self`.
    pub fn tripled_contains(&self, other: &Self) -> bool {
        if other.level < self.level {
            return false;
        }
        let (lo, hi) = self.tripled_range();
        let shift = other.level - self.level;
        let top = other.index >> shift;
        top >= lo && top < hi
    }
}

impl std::fmt::Display for DyadicCube {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.level, self.index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_of_point_examples() {
        assert_eq!(DyadicCube::of_point(0.3, 2).unwrap(), DyadicCube::new(2, 1).unwrap());
        assert_eq!(DyadicCube::of_point(0.0, 5).unwrap(), DyadicCube::new(5, 0).unwrap());
        assert_eq!(DyadicCube::of_point(0.999, 3).unwrap(), DyadicCube::new(3, 7).unwrap());
        let c = DyadicCube::of_point(0.3, 2).unwrap();
        assert_eq!((c.left(), c.right()), (0.25, 0.5));
    }

    #[test]
    fn rejects_points_outside_unit_interval() {
        assert!(DyadicCube::of_point(1.0, 3).is_err());
        assert!(DyadicCube::of_point(-0.1, 3).is_err());
        assert!(DyadicCube::of_point(f64::NAN, 3).is_err());
        assert!(DyadicCube::new(2, 4).is_err());
    }

    #[test]
    fn parent_and_children() {
        let c = DyadicCube::new(3, 5).unwrap();
        assert_eq!(c.parent().unwrap(), DyadicCube::new(2, 2).unwrap());
        let [a, b] = c.children().unwrap();
        assert_eq!((a.index(), b.index()), (10, 11));
        assert!(c.contains_cube(&a) && c.contains_cube(&b));
        assert_eq!(DyadicCube::root().parent(), None);
        assert_eq!(c.ancestor(0).unwrap(), DyadicCube::root());
    }

    #[test]
    fn tripled_cube_is_truncated() {
        assert_eq!(DyadicCube::new(2, 0).unwrap().tripled(), (0.0, 0.5));
        assert_eq!(DyadicCube::new(2, 1).unwrap().tripled(), (0.0, 0.75));
        assert_eq!(DyadicCube::new(2, 3).unwrap().tripled(), (0.5, 1.0));
        let l = DyadicCube::new(2, 1).unwrap();
        assert!(l.tripled_contains(&DyadicCube::new(4, 0).unwrap()));
        assert!(!l.tripled_contains(&DyadicCube::new(4, 12).unwrap()));
    }
}
