//! The Hurwitz action of the braid group on tuples over an exact group:
//! `sigma_i` sends `(.., g_i, g_i+1, ..)` to `(.., g_i g_i+1 g_i^-1, g_i, ..)`
//! and preserves the ordered product. Acting on the basis tuple of a free
//! group solves the braid word problem exactly, since the stabiliser of the
//! basis tuple is trivial.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::moebius::MoebiusMap;
use crate::words::{FreeProduct, Word};
use crate::{Error, Result};

/// A word in the standard braid generators: letters `+-i` with
/// `1 <= i <= strands - 1`, freely reduced (adjacent `sigma_i sigma_i^-1`
/// pairs cancel).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: &[i32]) -> Result<Self> {
        let max = strands.saturating_sub(1) as i32;
        let mut reduced: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l.abs() > max {
                return Err(Error::BadWord(format!(
                    "braid letter {l} out of range for {strands} strands"
                )));
            }
            if reduced.last() == Some(&-l) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Ok(BraidWord { strands, letters: reduced })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Group operations needed by the Hurwitz action; implementors provide the
/// context (orders, level) that elements themselves do not carry.
pub trait HurwitzGroup {
    type Elem: Clone + Eq + std::hash::Hash + Ord;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// Moebius transformations as a Hurwitz coefficient group.
#[derive(Debug, Clone, Copy, Default)]
pub struct MoebiusGroup;

impl HurwitzGroup for MoebiusGroup {
    type Elem = MoebiusMap;

    fn mul(&self, a: &MoebiusMap, b: &MoebiusMap) -> MoebiusMap {
        a.compose(b)
    }

    fn inv(&self, a: &MoebiusMap) -> MoebiusMap {
        a.inverse()
    }
}

impl HurwitzGroup for FreeProduct {
    type Elem = Word;

    fn mul(&self, a: &Word, b: &Word) -> Word {
        self.multiply(a, b)
    }

    fn inv(&self, a: &Word) -> Word {
        self.inverse(a)
    }
}

fn apply_letter<G: HurwitzGroup>(group: &G, tuple: &mut [G::Elem], letter: i32) {
    let i = (letter.unsigned_abs() as usize) - 1;
    if letter > 0 {
        // (g_i, g_i+1) -> (g_i g_i+1 g_i^-1, g_i)
        let conj = group.mul(&group.mul(&tuple[i], &tuple[i + 1]), &group.inv(&tuple[i]));
        tuple[i + 1] = tuple[i].clone();
        tuple[i] = conj;
    } else {
        // (g_i, g_i+1) -> (g_i+1, g_i+1^-1 g_i g_i+1)
        let conj = group.mul(&group.mul(&group.inv(&tuple[i + 1]), &tuple[i]), &tuple[i + 1]);
        tuple[i] = tuple[i + 1].clone();
        tuple[i + 1] = conj;
    }
}

/// Left action of a braid word on a tuple; the rightmost letter acts first,
/// so `(b c) . t = b . (c . t)`. The ordered product of the tuple is
/// invariant.
pub fn hurwitz_apply<G: HurwitzGroup>(
    group: &G,
    braid: &BraidWord,
    tuple: &[G::Elem],
) -> Result<Vec<G::Elem>> {
    if tuple.len() != braid.strands() {
        return Err(Error::LengthMismatch { braid: braid.strands(), tuple: tuple.len() });
    }
    let mut out = tuple.to_vec();
    for &letter in braid.letters().iter().rev() {
        apply_letter(group, &mut out, letter);
    }
    Ok(out)
}

/// The basis tuple `(x_1, .., x_n)` of the free group of rank `n`.
pub fn basis_tuple(fp: &FreeProduct) -> Vec<Word> {
    (0..fp.factors()).map(|i| fp.generator(i)).collect()
}

/// Exact braid word problem: a braid is trivial iff it fixes the basis
/// tuple of the free group under the Hurwitz action (the stabiliser of the
/// basis tuple is trivial).
pub fn braid_is_trivial(braid: &BraidWord) -> bool {
    let fp = FreeProduct::free(braid.strands());
    let basis = basis_tuple(&fp);
    hurwitz_apply(&fp, braid, &basis).expect("lengths match by construction") == basis
}

/// A truncated Hurwitz orbit over a free group / free product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Tuples of the orbit in canonical (lexicographic) order.
    pub tuples: Vec<Vec<Word>>,
    /// False when some tuple was discarded against `element_length_cap` or
    /// the orbit hit `orbit_cap`; the listed tuples are then only the
    /// bounded part of the orbit.
    pub complete: bool,
}

/// Breadth-first closure of a tuple under the generators `sigma_i^{+-1}`,
/// discarding tuples containing an element of reduced length greater than
/// `element_length_cap` and stopping at `orbit_cap` tuples.
pub fn hurwitz_orbit(
    fp: &FreeProduct,
    start: &[Word],
    element_length_cap: usize,
    orbit_cap: usize,
) -> Orbit {
    let n = start.len();
    let within = |t: &[Word]| t.iter().all(|w| w.len() <= element_length_cap);
    let mut complete = within(start);
    let mut seen: BTreeSet<Vec<Word>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    if within(start) {
        seen.insert(start.to_vec());
        queue.push_back(start.to_vec());
    }
    while let Some(tuple) = queue.pop_front() {
        for i in 1..n as i32 {
            for letter in [i, -i] {
                let mut next = tuple.clone();
                apply_letter(fp, &mut next, letter);
                if !within(&next) {
                    complete = false;
                    continue;
                }
                if !seen.contains(&next) {
                    if seen.len() >= orbit_cap {
                        complete = false;
                        continue;
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    Orbit { tuples: seen.into_iter().collect(), complete }
}

/// All conjugates `w x w^-1` of the generator `x` by words of length at most
/// `conj_len`, as reduced words (deduplicated).
fn bounded_conjugates(fp: &FreeProduct, gen: usize, conj_len: usize) -> Vec<Word> {
    let mut out: HashSet<Word> = HashSet::new();
    let x = fp.generator(gen);
    // all reduced words of length <= conj_len
    let mut layer: Vec<Word> = vec![Word::identity()];
    out.insert(x.clone());
    for _ in 0..conj_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..fp.factors() {
                for e in [1i64, -1] {
                    let ext = fp.multiply(w, &fp.word(&[(i, e)]).unwrap());
                    if ext.len() == w.len() + 1 {
                        out.insert(fp.conjugate(&ext, &x));
                        next.push(ext);
                    }
                }
            }
        }
        layer = next;
    }
    let mut v: Vec<Word> = out.into_iter().collect();
    v.sort();
    v
}

/// Verify the orbit characterisation on a tuple of free-group generators:
/// the bounded Hurwitz orbit of `t` equals the set of tuples of conjugates
/// (with the conjugacy-class multiset of `t`, by any permutation) whose
/// ordered product equals the product of `t`. Both sides are bounded by
/// `conj_len` on the conjugating words.
pub fn orbit_characterization_check(rank: usize, t: &[usize], conj_len: usize) -> bool {
    let fp = FreeProduct::free(rank);
    let n = t.len();
    let start: Vec<Word> = t.iter().map(|&i| fp.generator(i)).collect();
    let product = start.iter().fold(Word::identity(), |acc, w| fp.multiply(&acc, w));

    // Side A: Hurwitz BFS restricted to tuples of bounded conjugates.
    let cap = 2 * conj_len + 1; // reduced length of w x w^-1 with |w| <= conj_len
    let orbit = hurwitz_orbit(&fp, &start, cap, usize::MAX);
    let side_a: BTreeSet<Vec<Word>> = orbit.tuples.into_iter().collect();

    // Side B: brute-force enumeration. Entry i runs over bounded conjugates
    // of t_{tau(i)} over all permutations tau (equivalently: over all
    // assignments of the class multiset); the last entry is determined by
    // the product constraint.
    let classes: Vec<usize> = {
        let mut c = t.to_vec();
        c.sort_unstable();
        c
    };
    let conj: Vec<Vec<Word>> = (0..rank).map(|g| bounded_conjugates(&fp, g, conj_len)).collect();
    let mut side_b: BTreeSet<Vec<Word>> = BTreeSet::new();
    let mut assignment = Vec::with_capacity(n);
    enumerate_assignments(&fp, &classes, &conj, &product, &mut assignment, &mut side_b, n);

    side_a == side_b
}

fn enumerate_assignments(
    fp: &FreeProduct,
    remaining: &[usize],
    conj: &[Vec<Word>],
    product: &Word,
    prefix: &mut Vec<Word>,
    out: &mut BTreeSet<Vec<Word>>,
    n: usize,
) {
    if prefix.len() + 1 == n {
        // the last element is forced: prefix_product * last = product
        let prefix_product = prefix.iter().fold(Word::identity(), |acc, w| fp.multiply(&acc, w));
        let last = fp.multiply(&fp.inverse(&prefix_product), product);
        // accept iff it is a bounded conjugate of the one remaining class
        debug_assert_eq!(remaining.len(), 1);
        if conj[remaining[0]].binary_search(&last).is_ok() {
            let mut tuple = prefix.clone();
            tuple.push(last);
            out.insert(tuple);
        }
        return;
    }
    let mut used = BTreeSet::new();
    for (k, &class) in remaining.iter().enumerate() {
        if !used.insert(class) {
            continue; // same class already tried at this position
        }
        let rest: Vec<usize> =
            remaining.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &c)| c).collect();
        for w in &conj[class] {
            prefix.push(w.clone());
            enumerate_assignments(fp, &rest, conj, product, prefix, out, n);
            prefix.pop();
        }
    }
}
