//! The extended Neron-Severi lattice of a degree-`2*delta` K3 surface of
//! Picard rank one: the Mukai pairing on integer triples `(r, l, s)`, the
//! quadratic form `q(r, l, s) = delta*l^2 - r*s`, roots (`q = -1`), their
//! reflections, and the twist-by-`O(alpha)` translations, all as exact
//! integer/rational data.

use num_traits::{One, Signed, Zero};

use crate::matrix::Mat3;
use crate::{int, Error, Int, Rat, Result};

/// The lattice form parameter: `delta >= 1`, ample degree `d = 2*delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MukaiForm {
    delta: u64,
}

impl MukaiForm {
    pub fn new(delta: u64) -> Result<Self> {
        if delta == 0 {
            return Err(Error::BadForm);
        }
        Ok(MukaiForm { delta })
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// The degree `d = 2*delta` of the polarisation.
    pub fn degree(&self) -> u64 {
        2 * self.delta
    }

    pub fn delta_int(&self) -> Int {
        Int::from(self.delta)
    }

    /// Gram matrix of the pairing in the basis of `(r, l, s)` coordinates.
    pub fn gram(&self) -> Mat3 {
        let d = 2 * self.delta as i64;
        Mat3::from_int_rows([[0, 0, -1], [0, d, 0], [-1, 0, 0]])
    }
}

/// Lattice element `(r, l, s)`: rank, multiple of the polarisation, and the
/// degree-4 component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MukaiVector {
    pub r: Int,
    pub l: Int,
    pub s: Int,
}

impl MukaiVector {
    pub fn new(r: Int, l: Int, s: Int) -> Self {
        MukaiVector { r, l, s }
    }

    pub fn from_i64(r: i64, l: i64, s: i64) -> Self {
        Self::new(int(r), int(l), int(s))
    }

    pub fn zero() -> Self {
        Self::from_i64(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.l.is_zero() && self.s.is_zero()
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.r, -&self.l, -&self.s)
    }

    /// Representative of `{v, -v}` whose first nonzero coordinate is positive.
    /// For roots this is the representative of positive rank.
    pub fn canonical_sign(&self) -> Self {
        for c in [&self.r, &self.l, &self.s] {
            if c.is_positive() {
                return self.clone();
            }
            if c.is_negative() {
                return self.neg();
            }
        }
        self.clone()
    }

    pub fn to_rat3(&self) -> [Rat; 3] {
        [
            Rat::from_integer(self.r.clone()),
            Rat::from_integer(self.l.clone()),
            Rat::from_integer(self.s.clone()),
        ]
    }
}

impl std::fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.l, self.s)
    }
}

/// Mukai pairing `<u, v> = 2*delta*l1*l2 - r1*s2 - r2*s1`. Symmetric and
/// bilinear.
pub fn pairing(form: MukaiForm, u: &MukaiVector, v: &MukaiVector) -> Int {
    int(2) * form.delta_int() * &u.l * &v.l - &u.r * &v.s - &v.r * &u.s
}

/// Quadratic form `q(v) = delta*l^2 - r*s`, so that `2*q(v) = <v, v>`.
pub fn q_value(form: MukaiForm, v: &MukaiVector) -> Int {
    form.delta_int() * &v.l * &v.l - &v.r * &v.s
}

/// A positive root: `q(v) = -1` and `r > 0`.
pub fn is_positive_root(form: MukaiForm, v: &MukaiVector) -> bool {
    q_value(form, v) == int(-1) && v.r.is_positive()
}

fn check_root(form: MukaiForm, rho: &MukaiVector) -> Result<()> {
    let q = q_value(form, rho);
    if q == int(-1) {
        Ok(())
    } else {
        Err(Error::NotARoot(q.to_string()))
    }
}

/// Reflection of `alpha` at the root `rho`: `alpha + <alpha, rho> rho`.
///
/// Preserves `q` and is an involution.
pub fn reflect(form: MukaiForm, rho: &MukaiVector, alpha: &MukaiVector) -> Result<MukaiVector> {
    check_root(form, rho)?;
    let t = pairing(form, alpha, rho);
    Ok(MukaiVector::new(
        &alpha.r + &t * &rho.r,
        &alpha.l + &t * &rho.l,
        &alpha.s + &t * &rho.s,
    ))
}

/// The reflection at `rho` as an integer 3x3 isometry (determinant -1,
/// square the identity).
pub fn reflection_matrix(form: MukaiForm, rho: &MukaiVector) -> Result<Isometry3> {
    check_root(form, rho)?;
    let basis = [
        MukaiVector::from_i64(1, 0, 0),
        MukaiVector::from_i64(0, 1, 0),
        MukaiVector::from_i64(0, 0, 1),
    ];
    let cols: Vec<MukaiVector> = basis
        .iter()
        .map(|e| reflect(form, rho, e))
        .collect::<Result<_>>()?;
    let mat = Mat3::from_fn(|i, j| {
        let v = &cols[j];
        let c = match i {
            0 => &v.r,
            1 => &v.l,
            _ => &v.s,
        };
        Rat::from_integer(c.clone())
    });
    Isometry3::new(mat, form)
}

/// The isometry induced by twisting with `O(alpha)`:
/// `(r, l, s) -> (r, l + alpha*r, s + 2*delta*alpha*l + delta*alpha^2*r)`.
pub fn translation_matrix(form: MukaiForm, alpha: i64) -> Isometry3 {
    let delta = form.delta_int();
    let alpha = int(alpha);
    let rows = [
        [Int::one(), Int::zero(), Int::zero()],
        [alpha.clone(), Int::one(), Int::zero()],
        [&delta * &alpha * &alpha, int(2) * &delta * &alpha, Int::one()],
    ];
    let mat = Mat3::from_fn(|i, j| Rat::from_integer(rows[i][j].clone()));
    Isometry3::new(mat, form).expect("translations preserve the pairing")
}

/// All positive roots with `1 <= r <= r_max` and `|l| <= l_max`, sorted
/// lexicographically. For each `(r, l)` the third coordinate is forced:
/// `s = (delta*l^2 + 1)/r`, kept when integral.
pub fn enumerate_roots(form: MukaiForm, r_max: u32, l_max: u32) -> Vec<MukaiVector> {
    let mut out = Vec::new();
    let delta = form.delta_int();
    for r in 1..=i64::from(r_max) {
        for l in -i64::from(l_max)..=i64::from(l_max) {
            let num = &delta * int(l * l) + 1;
            let (quot, rem) = num_integer::Integer::div_rem(&num, &int(r));
            if rem.is_zero() {
                let v = MukaiVector::new(int(r), int(l), quot);
                debug_assert_eq!(q_value(form, &v), int(-1));
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

/// A rational 3x3 matrix preserving the Mukai Gram matrix, of determinant
/// `+1` or `-1`; the lattice-level shadow of an autoequivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry3 {
    mat: Mat3,
    form: MukaiForm,
}

impl Isometry3 {
    /// Validates `m^T * Q * m = Q` and `det = +-1`.
    pub fn new(mat: Mat3, form: MukaiForm) -> Result<Self> {
        let q = form.gram();
        if mat.transpose().mul(&q).mul(&mat) != q {
            return Err(Error::NotAnIsometry);
        }
        let det = mat.det();
        if det != Rat::one() && det != -Rat::one() {
            return Err(Error::NotAnIsometry);
        }
        Ok(Isometry3 { mat, form })
    }

    pub fn identity(form: MukaiForm) -> Self {
        Isometry3 { mat: Mat3::identity(), form }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.mat
    }

    pub fn form(&self) -> MukaiForm {
        self.form
    }

    pub fn det_sign(&self) -> i8 {
        if self.mat.det().is_one() {
            1
        } else {
            -1
        }
    }

    pub fn compose(&self, other: &Isometry3) -> Isometry3 {
        assert_eq!(self.form, other.form, "isometries of different forms");
        Isometry3 { mat: self.mat.mul(&other.mat), form: self.form }
    }

    pub fn inverse(&self) -> Isometry3 {
        // det is +-1, so the adjugate divided by det is the exact inverse.
        let det = self.mat.det();
        Isometry3 { mat: self.mat.adjugate().scale(&(Rat::one() / det)), form: self.form }
    }

    pub fn neg(&self) -> Isometry3 {
        Isometry3 { mat: self.mat.neg(), form: self.form }
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    pub fn is_integral(&self) -> bool {
        self.mat.is_integral()
    }

    pub fn apply_rat(&self, v: &[Rat; 3]) -> [Rat; 3] {
        self.mat.apply(v)
    }

    /// Image of a lattice vector; `None` when the result is not integral.
    pub fn apply(&self, v: &MukaiVector) -> Option<MukaiVector> {
        let w = self.mat.apply(&v.to_rat3());
        if w.iter().all(|x| x.is_integer()) {
            let [r, l, s] = w;
            Some(MukaiVector::new(r.to_integer(), l.to_integer(), s.to_integer()))
        } else {
            None
        }
    }
}

impl std::fmt::Display for Isometry3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.mat)
    }
}
