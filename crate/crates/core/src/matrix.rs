//! Small exact 3x3 rational matrices.

use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// A 3x3 matrix over the rationals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat3(pub [[Rat; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| Rat::zero())
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn from_int_rows(rows: [[i64; 3]; 3]) -> Self {
        Self::from_fn(|i, j| Rat::from_integer(Int::from(rows[i][j])))
    }

    pub fn mul(&self, other: &Mat3) -> Mat3 {
        Self::from_fn(|i, j| (0..3).map(|k| &self.0[i][k] * &other.0[k][j]).sum())
    }

    pub fn transpose(&self) -> Mat3 {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn neg(&self) -> Mat3 {
        Self::from_fn(|i, j| -self.0[i][j].clone())
    }

    pub fn scale(&self, k: &Rat) -> Mat3 {
        Self::from_fn(|i, j| &self.0[i][j] * k)
    }

    pub fn det(&self) -> Rat {
        let m = &self.0;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    /// Matrix of cofactor transposes, so that `self * adjugate = det * id`.
    pub fn adjugate(&self) -> Mat3 {
        let m = &self.0;
        let cof = |i: usize, j: usize| {
            let r = [(i + 1) % 3, (i + 2) % 3];
            let c = [(j + 1) % 3, (j + 2) % 3];
            &m[r[0]][c[0]] * &m[r[1]][c[1]] - &m[r[0]][c[1]] * &m[r[1]][c[0]]
        };
        Self::from_fn(|i, j| cof(j, i))
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Rat; 3]) -> [Rat; 3] {
        std::array::from_fn(|i| (0..3).map(|k| &self.0[i][k] * &v[k]).sum())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Sign-normalised representative: negated when the first nonzero entry
    /// (row-major) is negative. Used for comparisons up to global sign.
    pub fn canonical_sign(&self) -> Mat3 {
        for x in self.0.iter().flatten() {
            if x.is_positive() {
                return self.clone();
            }
            if x.is_negative() {
                return self.neg();
            }
        }
        self.clone()
    }
}

impl std::fmt::Display for Mat3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}, {}, {}", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn adjugate_inverts() {
        let m = Mat3::from_int_rows([[1, 2, 0], [0, 1, 3], [1, 0, 1]]);
        let d = m.det();
        assert_eq!(d, rat(7, 1));
        let inv = m.adjugate().scale(&(Rat::one() / d));
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn det_of_product() {
        let a = Mat3::from_int_rows([[2, 1, 0], [1, 1, 0], [0, 3, 1]]);
        let b = Mat3::from_int_rows([[1, 0, 2], [0, 1, 0], [5, 0, 1]]);
        assert_eq!(a.mul(&b).det(), a.det() * b.det());
    }
}
