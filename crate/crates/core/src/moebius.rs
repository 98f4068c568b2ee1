//! Moebius transformations with integer entries and positive determinant,
//! exact points of the upper half-plane, and the transfer between the
//! 2x2 action on the half-plane and the 3x3 action on the lattice.
//!
//! A point `x + iy` is stored as the pair `(x, y^2)`: every operation in
//! scope (the Moebius action, circle membership, fixed points, the maps to
//! and from lattice vectors) is rational in these coordinates, so no square
//! roots ever appear.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{q_value, Isometry3, MukaiForm, MukaiVector};
use crate::matrix::Mat3;
use crate::{int, Error, Int, Rat, Result};

/// An element of `PGL_2^+(Q)`: a primitive integer matrix of positive
/// determinant whose first nonzero entry (in the order `a, b, c, d`) is
/// positive. Equality of canonical representatives is equality in the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoebiusMap {
    a: Int,
    b: Int,
    c: Int,
    d: Int,
}

impl MoebiusMap {
    /// Canonical representative of the matrix `[a, b; c, d]`.
    ///
    /// Fails with [`Error::DetNotPositive`] when `ad - bc <= 0`.
    pub fn new(a: Int, b: Int, c: Int, d: Int) -> Result<Self> {
        if (&a * &d - &b * &c).is_positive() {
            Ok(Self::reduce(a, b, c, d))
        } else {
            Err(Error::DetNotPositive)
        }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(int(a), int(b), int(c), int(d))
    }

    /// Canonical representative of a rational matrix (clears denominators).
    pub fn from_rational(m: [[Rat; 2]; 2]) -> Result<Self> {
        let lcm = m
            .iter()
            .flatten()
            .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let e = |x: &Rat| (x * Rat::from_integer(lcm.clone())).to_integer();
        Self::new(e(&m[0][0]), e(&m[0][1]), e(&m[1][0]), e(&m[1][1]))
    }

    fn reduce(a: Int, b: Int, c: Int, d: Int) -> Self {
        let mut g = a.gcd(&b).gcd(&c).gcd(&d);
        if g.is_zero() {
            g = Int::one();
        }
        let mut e = [a / &g, b / &g, c / &g, d / &g];
        if let Some(first) = e.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in &mut e {
                    *x = -std::mem::take(x);
                }
            }
        }
        let [a, b, c, d] = e;
        MoebiusMap { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }

    pub fn entries(&self) -> (&Int, &Int, &Int, &Int) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn det(&self) -> Int {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Matrix product `self * other`, canonicalised.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        Self::reduce(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
    }

    pub fn inverse(&self) -> MoebiusMap {
        Self::reduce(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    pub fn pow(&self, n: i64) -> MoebiusMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = MoebiusMap::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    /// True when `tr^2 < 4 det`, i.e. the transformation fixes a point of
    /// the upper half-plane.
    pub fn is_elliptic(&self) -> bool {
        let tr = &self.a + &self.d;
        &tr * &tr < int(4) * self.det()
    }

    /// Image of a point under `z -> (az + b)/(cz + d)`.
    pub fn apply(&self, p: &HPoint) -> HPoint {
        let (a, b, c, d) = (
            Rat::from_integer(self.a.clone()),
            Rat::from_integer(self.b.clone()),
            Rat::from_integer(self.c.clone()),
            Rat::from_integer(self.d.clone()),
        );
        let cxd = &c * &p.x + &d;
        let den = &cxd * &cxd + &c * &c * &p.y_sq;
        let det = Rat::from_integer(self.det());
        let x = ((&a * &p.x + &b) * &cxd + &a * &c * &p.y_sq) / &den;
        let y_sq = &det * &det * &p.y_sq / (&den * &den);
        HPoint::new(x, y_sq).expect("the action preserves the upper half-plane")
    }

    /// The unique fixed point in the upper half-plane of an elliptic
    /// transformation: `x = (a - d)/(2c)`, `y^2 = (4 det - tr^2)/(4c^2)`.
    pub fn fixed_point(&self) -> Result<HPoint> {
        if !self.is_elliptic() {
            return Err(Error::NotElliptic);
        }
        // tr^2 < 4 det forces c != 0.
        let c = Rat::from_integer(self.c.clone());
        let tr = Rat::from_integer(&self.a + &self.d);
        let det = Rat::from_integer(self.det());
        let x = Rat::from_integer(&self.a - &self.d) / (crate::rat(2, 1) * &c);
        let y_sq = (crate::rat(4, 1) * det - &tr * &tr) / (crate::rat(4, 1) * &c * &c);
        HPoint::new(x, y_sq)
    }

    /// Determinant-normalised isometric circle: centre `-d/c`, squared
    /// radius `det/c^2`. A point is exterior iff `(cx + d)^2 + c^2 y^2 > det`.
    pub fn isometric_circle(&self) -> Result<IsometricCircle> {
        if self.c.is_zero() {
            return Err(Error::NoCircle);
        }
        let c = Rat::from_integer(self.c.clone());
        let center = -Rat::from_integer(self.d.clone()) / &c;
        let radius_sq = Rat::from_integer(self.det()) / (&c * &c);
        Ok(IsometricCircle { center, radius_sq })
    }
}

impl std::fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

impl std::ops::Mul for &MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: &MoebiusMap) -> MoebiusMap {
        self.compose(rhs)
    }
}

/// Exact upper-half-plane point `x + iy`, stored as `(x, y^2)` with
/// `y^2 > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPoint {
    x: Rat,
    y_sq: Rat,
}

impl HPoint {
    pub fn new(x: Rat, y_sq: Rat) -> Result<Self> {
        if y_sq.is_positive() {
            Ok(HPoint { x, y_sq })
        } else {
            Err(Error::NotInUpperHalfPlane)
        }
    }

    pub fn from_i64(x: (i64, i64), y_sq: (i64, i64)) -> Result<Self> {
        Self::new(Rat::new(int(x.0), int(x.1)), Rat::new(int(y_sq.0), int(y_sq.1)))
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y_sq(&self) -> &Rat {
        &self.y_sq
    }
}

impl std::fmt::Display for HPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(x = {}, y^2 = {})", self.x, self.y_sq)
    }
}

/// Where a point sits relative to a circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirclePosition {
    Inside,
    On,
    Outside,
}

/// A half-plane boundary circle: centre on the real axis, exact squared
/// radius.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsometricCircle {
    pub center: Rat,
    pub radius_sq: Rat,
}

impl IsometricCircle {
    pub fn position(&self, p: &HPoint) -> CirclePosition {
        let dx = p.x() - &self.center;
        let lhs = &dx * &dx + p.y_sq();
        match lhs.cmp(&self.radius_sq) {
            std::cmp::Ordering::Less => CirclePosition::Inside,
            std::cmp::Ordering::Equal => CirclePosition::On,
            std::cmp::Ordering::Greater => CirclePosition::Outside,
        }
    }

    /// True when the closed disk of `self` is contained in the closed disk
    /// of `other`: `|c1 - c2| + r1 <= r2`, tested exactly on squares.
    pub fn contained_in(&self, other: &IsometricCircle) -> bool {
        if self.radius_sq > other.radius_sq {
            return false;
        }
        let d_sq = {
            let d = &self.center - &other.center;
            &d * &d
        };
        // sqrt(d_sq) + sqrt(r1_sq) <= sqrt(r2_sq)
        let rhs = &other.radius_sq - &d_sq - &self.radius_sq;
        if rhs.is_negative() {
            return false;
        }
        crate::rat(4, 1) * &d_sq * &self.radius_sq <= &rhs * &rhs
    }
}

/// The point of the half-plane corresponding to a vector of negative `q`,
/// after projective normalisation to `r > 0`: `x = l/r`,
/// `y^2 = (r*s - delta*l^2) / (delta*r^2)`. For a root this is
/// `l/r + i/(r*sqrt(delta))`.
pub fn h_point_of_vector(form: MukaiForm, v: &MukaiVector) -> Result<HPoint> {
    if !q_value(form, v).is_negative() {
        return Err(Error::NotNegative);
    }
    // q < 0 forces r*s > delta*l^2 >= 0, so r != 0.
    let v = if v.r.is_negative() { v.neg() } else { v.clone() };
    let delta = Rat::from_integer(form.delta_int());
    let r = Rat::from_integer(v.r.clone());
    let l = Rat::from_integer(v.l.clone());
    let s = Rat::from_integer(v.s.clone());
    let x = &l / &r;
    let y_sq = (&r * &s - &delta * &l * &l) / (&delta * &r * &r);
    HPoint::new(x, y_sq)
}

/// The projective vector `[1 : x : delta*(x^2 + y^2)]` of a point.
pub fn vector_of_h_point(form: MukaiForm, p: &HPoint) -> [Rat; 3] {
    let delta = Rat::from_integer(form.delta_int());
    let x = p.x().clone();
    let s = &delta * (&x * &x + p.y_sq());
    [Rat::one(), x, s]
}

/// Same as [`vector_of_h_point`] with denominators cleared to a primitive
/// integer vector of positive rank.
pub fn primitive_vector_of_h_point(form: MukaiForm, p: &HPoint) -> MukaiVector {
    let v = vector_of_h_point(form, p);
    let lcm = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    MukaiVector::new(&ints[0] / &g, &ints[1] / &g, &ints[2] / &g)
}

/// The 3x3 isometry induced by a Moebius transformation: `Phi / det` with
///
/// ```text
///        [ d^2      2cd       c^2/delta ]
/// Phi =  [ bd       bc + ad   ac/delta  ]
///        [ b^2 d'   2ab d'    a^2       ]     (d' = delta)
/// ```
///
/// This is a group homomorphism of determinant `+1`.
pub fn to_isometry3(form: MukaiForm, f: &MoebiusMap) -> Isometry3 {
    let (a, b, c, d) = f.entries();
    let delta = Rat::from_integer(form.delta_int());
    let r = |x: Int| Rat::from_integer(x);
    let phi = Mat3([
        [r(d * d), r(int(2) * c * d), r(c * c) / &delta],
        [r(b * d), r(b * c + a * d), r(a * c) / &delta],
        [r(b * b) * &delta, r(int(2) * a * b) * &delta, r(a * a)],
    ]);
    let det = Rat::from_integer(f.det());
    Isometry3::new(phi.scale(&(Rat::one() / det)), form)
        .expect("the transfer formula lands in SO(q)")
}

/// Reconstruct the Moebius transformation inducing a given isometry.
///
/// Requires determinant `+1`; recovery pivots on the first usable diagonal
/// square among `a^2 = M33*D`, `d^2 = M11*D`, `b^2*delta = M31*D`,
/// `c^2/delta = M13*D`, and the candidate is verified against
/// [`to_isometry3`] before being returned.
pub fn from_isometry3(iso: &Isometry3) -> Result<MoebiusMap> {
    if iso.det_sign() != 1 {
        return Err(Error::NotInImage);
    }
    let form = iso.form();
    let delta = Rat::from_integer(form.delta_int());
    let m = &iso.matrix().0;
    let two = crate::rat(2, 1);

    // Each closure fixes the projective scale by setting the pivot entry
    // of phi to 1 and solves for D = det(phi), then the rest of the row
    // relations. Candidates with D <= 0 are discarded by from_rational.
    type Candidate = Option<[[Rat; 2]; 2]>;
    let pivot_a: &dyn Fn() -> Candidate = &|| {
        // a = 1, D = 1/M33, b = M32 D / (2 delta), c = M23 delta D, d = M22 D - bc.
        if m[2][2].is_zero() {
            return None;
        }
        let d_scale = m[2][2].recip();
        let a = Rat::one();
        let b = &m[2][1] * &d_scale / (&two * &delta);
        let c = &m[1][2] * &delta * &d_scale;
        let d = &m[1][1] * &d_scale - &b * &c;
        Some([[a, b], [c, d]])
    };
    let pivot_d: &dyn Fn() -> Candidate = &|| {
        // d = 1, D = 1/M11, c = M12 D / 2, b = M21 D, a = M22 D - bc.
        if m[0][0].is_zero() {
            return None;
        }
        let d_scale = m[0][0].recip();
        let d = Rat::one();
        let c = &m[0][1] * &d_scale / &two;
        let b = &m[1][0] * &d_scale;
        let a = &m[1][1] * &d_scale - &b * &c;
        Some([[a, b], [c, d]])
    };
    let pivot_b: &dyn Fn() -> Candidate = &|| {
        // b = 1, D = delta/M31, a = M32 D / (2 delta), d = M21 D, c = M22 D - ad.
        if m[2][0].is_zero() {
            return None;
        }
        let d_scale = &delta / &m[2][0];
        let b = Rat::one();
        let a = &m[2][1] * &d_scale / (&two * &delta);
        let d = &m[1][0] * &d_scale;
        let c = &m[1][1] * &d_scale - &a * &d;
        Some([[a, b], [c, d]])
    };
    let pivot_c: &dyn Fn() -> Candidate = &|| {
        // c = 1, D = 1/(delta*M13), d = M12 D / 2, a = M23 delta D, b = M22 D - ad.
        if m[0][2].is_zero() {
            return None;
        }
        let d_scale = (&delta * &m[0][2]).recip();
        let c = Rat::one();
        let d = &m[0][1] * &d_scale / &two;
        let a = &m[1][2] * &delta * &d_scale;
        let b = &m[1][1] * &d_scale - &a * &d;
        Some([[a, b], [c, d]])
    };

    for pivot in [pivot_a, pivot_d, pivot_b, pivot_c] {
        if let Some(mat) = pivot() {
            if let Ok(f) = MoebiusMap::from_rational(mat) {
                if &to_isometry3(form, &f) == iso {
                    return Ok(f);
                }
            }
        }
    }
    Err(Error::NotInImage)
}

/// The point reflection at a positive root `rho = (r, l, s)` as a Moebius
/// transformation: `[delta*l, -s; delta*r, -delta*l]`, elliptic of order 2
/// with determinant `delta`, fixing the point of `rho`.
pub fn reflection_moebius(form: MukaiForm, rho: &MukaiVector) -> Result<MoebiusMap> {
    let q = q_value(form, rho);
    if q != int(-1) {
        return Err(Error::NotARoot(q.to_string()));
    }
    let rho = if rho.r.is_negative() { rho.neg() } else { rho.clone() };
    let delta = form.delta_int();
    MoebiusMap::new(&delta * &rho.l, -&rho.s, &delta * &rho.r, -(&delta * &rho.l))
}

/// The translation `z -> z + alpha`.
pub fn translation_moebius(alpha: i64) -> MoebiusMap {
    MoebiusMap::from_i64(1, alpha, 0, 1).unwrap()
}
