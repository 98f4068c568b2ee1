//! Groups generated by point reflections at roots: bounded root-orbit
//! search, truncated Ford fundamental domains (intersections of isometric
//! circle exteriors, optionally cut to a vertical strip), extraction of
//! generator roots from a domain, and the finite-generation criterion read
//! off the orbifold signature.

use std::collections::{HashSet, VecDeque};

use num_traits::Signed;

use crate::lattice::{q_value, Isometry3, MukaiForm, MukaiVector};
use crate::moebius::{h_point_of_vector, CirclePosition, HPoint, IsometricCircle, MoebiusMap};
use crate::words::for_each_reduced_word;
use crate::{int, Error, Rat, Result};

/// Orbifold signature data of a quotient curve: genus, number of cusps, and
/// the elliptic points as `(order, is_root_point)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureData {
    pub genus: u32,
    pub num_cusps: u32,
    pub elliptic: Vec<(u32, bool)>,
}

/// A vertical strip `left < Re z < left + width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    pub left: Rat,
    pub width: Rat,
}

/// A truncated Ford domain: the part of the half-plane exterior to all
/// listed circles (none contained in another), cut to the strip when one is
/// present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FordDomain {
    pub circles: Vec<IsometricCircle>,
    pub word_length: u32,
    pub strip: Option<Strip>,
}

/// Classification of a point against a [`FordDomain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Membership::Interior => "interior",
            Membership::Boundary => "boundary",
            Membership::Exterior => "exterior",
        };
        write!(f, "{s}")
    }
}

/// Bounded test that two roots lie in the same orbit up to sign under the
/// group generated by the given isometries: breadth-first over images of
/// `rho1` by products of at most `depth` generators (and inverses). `false`
/// is evidence of disconnection within the depth, not a proof.
pub fn root_orbit_connected(
    form: MukaiForm,
    rho1: &MukaiVector,
    rho2: &MukaiVector,
    generators: &[Isometry3],
    depth: u32,
) -> Result<bool> {
    for rho in [rho1, rho2] {
        let q = q_value(form, rho);
        if q != int(-1) {
            return Err(Error::NotARoot(q.to_string()));
        }
    }
    let target = rho2.canonical_sign();
    let mut frontier = vec![rho1.canonical_sign()];
    let mut seen: HashSet<MukaiVector> = frontier.iter().cloned().collect();
    if frontier.contains(&target) {
        return Ok(true);
    }
    let mut gens: Vec<Isometry3> = generators.to_vec();
    gens.extend(generators.iter().map(Isometry3::inverse));
    for _ in 0..depth {
        let mut next = Vec::new();
        for v in &frontier {
            for g in &gens {
                if let Some(w) = g.apply(v) {
                    let w = w.canonical_sign();
                    if w == target {
                        return Ok(true);
                    }
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(false)
}

/// Truncated Ford domain of the group generated by `gen_moebius` with the
/// declared orders: collects the isometric circles of all nonidentity
/// reduced words of length at most `max_len` (skipping words fixing
/// infinity), prunes circles contained in another's closed disk, and
/// attaches the strip if given.
///
/// An empty generator list yields the whole half-plane.
pub fn ford_domain(
    gen_moebius: &[MoebiusMap],
    orders: &[u64],
    max_len: u32,
    strip: Option<Strip>,
) -> Result<FordDomain> {
    let mut set: HashSet<IsometricCircle> = HashSet::new();
    for_each_reduced_word(gen_moebius, orders, max_len, &mut |mat, _| {
        if let Ok(c) = mat.isometric_circle() {
            set.insert(c);
        }
        true
    })?;
    let mut circles: Vec<IsometricCircle> = set.into_iter().collect();
    circles.sort();
    // Containment A in B forces |center_A - center_B| <= radius_B, so with
    // the circles sorted by centre only neighbours within the largest
    // radius can cover a given circle.
    let max_radius_sq =
        circles.iter().map(|c| c.radius_sq.clone()).max().unwrap_or_else(|| Rat::from_integer(0.into()));
    let covered_by = |c: &IsometricCircle, other: &IsometricCircle| -> bool {
        c != other && other.radius_sq >= c.radius_sq && c.contained_in(other)
    };
    let mut kept = Vec::new();
    for (idx, c) in circles.iter().enumerate() {
        let in_window = |other: &IsometricCircle| {
            let d = &c.center - &other.center;
            &d * &d <= max_radius_sq
        };
        let covered = circles[..idx].iter().rev().take_while(|o| in_window(o)).any(|o| covered_by(c, o))
            || circles[idx + 1..].iter().take_while(|o| in_window(o)).any(|o| covered_by(c, o));
        if !covered {
            kept.push(c.clone());
        }
    }
    Ok(FordDomain { circles: kept, word_length: max_len, strip })
}

/// Exact classification of a point: exterior when strictly inside some
/// circle or off the strip, boundary when on a circle or a strip edge (and
/// inside nothing), interior otherwise.
pub fn domain_membership(dom: &FordDomain, p: &HPoint) -> Membership {
    let mut on_boundary = false;
    if let Some(strip) = &dom.strip {
        let right = &strip.left + &strip.width;
        if p.x() < &strip.left || p.x() > &right {
            return Membership::Exterior;
        }
        if p.x() == &strip.left || p.x() == &right {
            on_boundary = true;
        }
    }
    for c in &dom.circles {
        match c.position(p) {
            CirclePosition::Inside => return Membership::Exterior,
            CirclePosition::On => on_boundary = true,
            CirclePosition::Outside => {}
        }
    }
    if on_boundary {
        Membership::Boundary
    } else {
        Membership::Interior
    }
}

/// The sublist of roots whose half-plane points are interior or boundary
/// points of the domain, sorted by x-coordinate, then by rank.
pub fn extract_generator_roots(
    form: MukaiForm,
    dom: &FordDomain,
    roots: &[MukaiVector],
) -> Result<Vec<MukaiVector>> {
    let mut kept: Vec<(Rat, MukaiVector)> = Vec::new();
    for rho in roots {
        let p = h_point_of_vector(form, rho)?;
        if domain_membership(dom, &p) != Membership::Exterior {
            kept.push((p.x().clone(), rho.clone()));
        }
    }
    kept.sort_by(|(x1, v1), (x2, v2)| x1.cmp(x2).then_with(|| v1.r.cmp(&v2.r)));
    Ok(kept.into_iter().map(|(_, v)| v).collect())
}

/// Finite generation criterion for the reflection subgroup, from the
/// signature of the ambient quotient: genus zero, one cusp, and at most one
/// elliptic point that is either not a root point or a root point of order
/// greater than two.
pub fn finitely_generated(sig: &SignatureData) -> bool {
    if sig.genus != 0 || sig.num_cusps != 1 {
        return false;
    }
    let heavy = sig
        .elliptic
        .iter()
        .filter(|&&(order, is_root)| !is_root || order > 2)
        .count();
    heavy <= 1
}

/// True when each generator on either side is a product of at most
/// `max_len` generators (or inverses) from the other side: an exact
/// two-sided bounded test that the generated groups coincide.
pub fn same_group_within_bound(
    gens_a: &[MoebiusMap],
    gens_b: &[MoebiusMap],
    max_len: u32,
) -> bool {
    generates_within(gens_b, gens_a, max_len) && generates_within(gens_a, gens_b, max_len)
}

/// Every element of `targets` is a product of at most `max_len` elements of
/// `gens` and their inverses (breadth-first with exact matrix identities).
fn generates_within(gens: &[MoebiusMap], targets: &[MoebiusMap], max_len: u32) -> bool {
    let mut missing: HashSet<MoebiusMap> = targets.iter().cloned().collect();
    missing.remove(&MoebiusMap::identity());
    if missing.is_empty() {
        return true;
    }
    let mut steps: Vec<MoebiusMap> = gens.to_vec();
    steps.extend(gens.iter().map(MoebiusMap::inverse));
    let mut seen: HashSet<MoebiusMap> = HashSet::new();
    seen.insert(MoebiusMap::identity());
    let mut queue = VecDeque::new();
    queue.push_back((MoebiusMap::identity(), 0u32));
    while let Some((mat, len)) = queue.pop_front() {
        if len == max_len {
            continue;
        }
        for s in &steps {
            let next = mat.compose(s);
            if seen.insert(next.clone()) {
                missing.remove(&next);
                if missing.is_empty() {
                    return true;
                }
                queue.push_back((next, len + 1));
            }
        }
    }
    false
}

/// Strip helper: parse from rationals.
impl Strip {
    pub fn new(left: Rat, width: Rat) -> Result<Self> {
        if width.is_positive() {
            Ok(Strip { left, width })
        } else {
            Err(Error::BadWindow)
        }
    }
}
