//! Normal-form arithmetic in free products of cyclic groups, homomorphisms
//! onto cyclic quotients, and kernel generators from a transversal: for a
//! surjection `G_1 * ... * G_k -> Z/m` the kernel is generated by the
//! conjugates `u h_i u^-1` of the factor-kernel generators `h_i` by the
//! transversal words `u`.

use crate::moebius::MoebiusMap;
use crate::{Error, Result};

/// A free product of cyclic groups. Factor order `0` means an infinite
/// cyclic factor, otherwise the order is at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeProduct {
    orders: Vec<u64>,
}

impl FreeProduct {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&1) {
            return Err(Error::BadWord("factor orders must be 0 or >= 2".into()));
        }
        Ok(FreeProduct { orders })
    }

    /// The free group of the given rank (all factors infinite cyclic).
    pub fn free(rank: usize) -> Self {
        FreeProduct { orders: vec![0; rank] }
    }

    pub fn factors(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    /// Exponent reduced into normal form for factor `i`: within
    /// `1..order` for a finite factor, any nonzero value for an infinite
    /// one. Returns `None` when the letter cancels entirely.
    fn reduce_exp(&self, i: usize, e: i64) -> Option<i64> {
        let k = self.orders[i];
        if k == 0 {
            (e != 0).then_some(e)
        } else {
            let e = e.rem_euclid(k as i64);
            (e != 0).then_some(e)
        }
    }

    /// The generator of factor `i` as a word.
    pub fn generator(&self, i: usize) -> Word {
        assert!(i < self.factors());
        Word { letters: vec![(i, 1)] }
    }

    /// Normal form of a letter sequence; rejects out-of-range factors.
    pub fn word(&self, letters: &[(usize, i64)]) -> Result<Word> {
        if let Some(&(i, _)) = letters.iter().find(|&&(i, _)| i >= self.factors()) {
            return Err(Error::BadWord(format!("factor index {i} out of range")));
        }
        let mut w = Word::identity();
        for &(i, e) in letters {
            w = self.append(w, i, e);
        }
        Ok(w)
    }

    fn append(&self, mut w: Word, i: usize, e: i64) -> Word {
        if let Some(&mut (j, ref mut old)) = w.letters.last_mut() {
            if j == i {
                let merged = *old + e;
                match self.reduce_exp(i, merged) {
                    Some(r) => *old = r,
                    None => {
                        w.letters.pop();
                    }
                }
                return w;
            }
        }
        if let Some(r) = self.reduce_exp(i, e) {
            w.letters.push((i, r));
        }
        w
    }

    /// Normal form of the concatenation `u v`.
    pub fn multiply(&self, u: &Word, v: &Word) -> Word {
        let mut out = u.clone();
        for &(i, e) in &v.letters {
            out = self.append(out, i, e);
        }
        out
    }

    pub fn inverse(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for &(i, e) in w.letters.iter().rev() {
            out = self.append(out, i, -e);
        }
        out
    }

    pub fn conjugate(&self, u: &Word, w: &Word) -> Word {
        self.multiply(&self.multiply(u, w), &self.inverse(u))
    }

    pub fn pow(&self, w: &Word, n: i64) -> Word {
        let base = if n < 0 { self.inverse(w) } else { w.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = self.multiply(&out, &base);
        }
        out
    }
}

/// A reduced word: syllables `(factor, exponent)` with adjacent factors
/// distinct and exponents in normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    /// Total letter length `sum |e_i|`.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of syllables.
    pub fn syllables(&self) -> usize {
        self.letters.len()
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, &(i, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "g{i}")?;
            } else {
                write!(f, "g{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A homomorphism to `Z/m` (`m = 0` meaning `Z`), given by the images of
/// the factor generators. For a finite factor of order `k` the target must
/// satisfy `k * target = 0 (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicHom {
    modulus: u64,
    targets: Vec<i64>,
}

impl CyclicHom {
    pub fn new(fp: &FreeProduct, modulus: u64, targets: Vec<i64>) -> Result<Self> {
        if targets.len() != fp.factors() {
            return Err(Error::BadHom(format!(
                "{} targets for {} factors",
                targets.len(),
                fp.factors()
            )));
        }
        for (i, &t) in targets.iter().enumerate() {
            let k = fp.order(i);
            let killed = if modulus == 0 {
                k == 0 || t == 0
            } else {
                (k as i64 * t) % modulus as i64 == 0
            };
            if !killed {
                return Err(Error::BadHom(format!(
                    "factor {i} of order {k} cannot map to {t} mod {modulus}"
                )));
            }
        }
        let targets = if modulus == 0 {
            targets
        } else {
            targets.iter().map(|t| t.rem_euclid(modulus as i64)).collect()
        };
        Ok(CyclicHom { modulus, targets })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn targets(&self) -> &[i64] {
        &self.targets
    }

    fn normalize(&self, x: i64) -> i64 {
        if self.modulus == 0 {
            x
        } else {
            x.rem_euclid(self.modulus as i64)
        }
    }

    /// True when the images of the factor generators generate the whole
    /// quotient.
    pub fn is_surjective(&self) -> bool {
        let g = self.targets.iter().fold(self.modulus as i64, |acc, &t| gcd_i64(acc, t));
        g.abs() == 1
    }

    /// Order of the image of factor `i` in the quotient, `0` for infinite.
    fn image_order(&self, i: usize) -> u64 {
        let t = self.targets[i];
        if self.modulus == 0 {
            if t == 0 {
                1
            } else {
                0
            }
        } else if t == 0 {
            1
        } else {
            (self.modulus as i64 / gcd_i64(self.modulus as i64, t)) as u64
        }
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}

/// Image of a word: the sum of `exponent * target` over its letters,
/// reduced mod `m`.
pub fn hom_image(hom: &CyclicHom, w: &Word) -> i64 {
    let sum = w
        .letters()
        .iter()
        .map(|&(i, e)| hom.normalize(e.wrapping_mul(hom.targets()[i])))
        .fold(0i64, |acc, x| hom.normalize(acc + x));
    hom.normalize(sum)
}

/// Kernel generators of a surjection onto a cyclic group, from a
/// caller-supplied transversal.
///
/// For each factor `G_i`, the kernel of the restriction `G_i -> Z/m` is
/// cyclic, generated by `g_i^(order of image)`; the kernel of the whole map
/// is generated by the conjugates of these by the transversal words. For a
/// finite quotient the section must map bijectively onto `Z/m`; for `m = 0`
/// a finite section is necessarily a truncation and only distinctness of
/// the images is required (the result is then the corresponding truncated
/// generating set).
pub fn kernel_generators(fp: &FreeProduct, hom: &CyclicHom, section: &[Word]) -> Result<Vec<Word>> {
    if !hom.is_surjective() {
        return Err(Error::BadHom("homomorphism is not surjective".into()));
    }
    let images: Vec<i64> = section.iter().map(|u| hom_image(hom, u)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for &x in &images {
        if !seen.insert(x) {
            return Err(Error::BadSection(format!("duplicate image {x}")));
        }
    }
    if hom.modulus() != 0 && section.len() != hom.modulus() as usize {
        return Err(Error::BadSection(format!(
            "{} words for quotient of order {}",
            section.len(),
            hom.modulus()
        )));
    }
    let mut out = Vec::new();
    for i in 0..fp.factors() {
        let ord = hom.image_order(i);
        if ord == 0 {
            // infinite image: the restriction is injective, no contribution
            continue;
        }
        let k = fp.order(i);
        if k != 0 && ord == k {
            // restriction is injective on a finite factor
            continue;
        }
        let h = fp.pow(&fp.generator(i), ord as i64);
        debug_assert!(!h.is_identity());
        for u in section {
            out.push(fp.conjugate(u, &h));
        }
    }
    out.sort_by_key(|w| (w.len(), w.clone()));
    out.dedup();
    Ok(out)
}

/// Product of the assigned matrices over the letters of a word.
pub fn evaluate(fp: &FreeProduct, w: &Word, assignment: &[MoebiusMap]) -> Result<MoebiusMap> {
    if assignment.len() < fp.factors() {
        return Err(Error::BadWord(format!(
            "assignment covers {} of {} factors",
            assignment.len(),
            fp.factors()
        )));
    }
    let mut out = MoebiusMap::identity();
    for &(i, e) in w.letters() {
        out = out.compose(&assignment[i].pow(e));
    }
    Ok(out)
}

/// Evaluate a raw letter sequence without free-product reduction: used for
/// relation checks, where the point is precisely that the matrix product
/// collapses.
pub fn evaluate_letters(letters: &[(usize, i64)], assignment: &[MoebiusMap]) -> Result<MoebiusMap> {
    let mut out = MoebiusMap::identity();
    for &(i, e) in letters {
        let g = assignment.get(i).ok_or_else(|| {
            Error::BadWord(format!("factor index {i} out of range in relation"))
        })?;
        out = out.compose(&g.pow(e));
    }
    Ok(out)
}

/// Enumerate the matrices of all nonempty reduced words of length at most
/// `max_len` over the given generators and declared orders, invoking `visit`
/// on each (words, not distinct matrices: duplicates recur).
///
/// A word is reduced when no letter is followed by its inverse and no run
/// of a single generator reaches its declared order. Letter count is the
/// length. Generators of order 2 contribute one letter each, so for `k`
/// involutions there are `k (k-1)^(L-1)` words of length `L`.
pub(crate) fn for_each_reduced_word(
    gens: &[MoebiusMap],
    orders: &[u64],
    max_len: u32,
    visit: &mut dyn FnMut(&MoebiusMap, u32) -> bool,
) -> Result<()> {
    assert_eq!(gens.len(), orders.len());
    for (i, (g, &k)) in gens.iter().zip(orders).enumerate() {
        if k == 1 || (k >= 2 && !g.pow(k as i64).is_identity()) {
            return Err(Error::OrderMismatch(i));
        }
    }
    // Depth-first over (generator, direction) letters with run bookkeeping.
    struct Frame {
        mat: MoebiusMap,
        last: Option<(usize, i8)>,
        run: u32,
        len: u32,
    }
    let mut stack = vec![Frame { mat: MoebiusMap::identity(), last: None, run: 0, len: 0 }];
    while let Some(frame) = stack.pop() {
        if frame.len >= max_len {
            continue;
        }
        for (i, g) in gens.iter().enumerate() {
            let dirs: &[i8] = if orders[i] == 2 { &[1] } else { &[1, -1] };
            for &dir in dirs {
                if let Some((j, jdir)) = frame.last {
                    if j == i && jdir != dir {
                        continue; // free cancellation
                    }
                    if j == i && jdir == dir && orders[i] != 0 && frame.run + 1 >= orders[i] as u32 {
                        continue; // run would evaluate to a shorter word
                    }
                }
                let run = match frame.last {
                    Some((j, jdir)) if j == i && jdir == dir => frame.run + 1,
                    _ => 1,
                };
                let step = if dir == 1 { g.clone() } else { g.inverse() };
                let mat = frame.mat.compose(&step);
                let len = frame.len + 1;
                if !visit(&mat, len) {
                    return Ok(());
                }
                stack.push(Frame { mat, last: Some((i, dir)), run, len });
            }
        }
    }
    Ok(())
}

/// Bounded certificate that the given generators of declared orders form a
/// free product: true iff no nonempty reduced word of length at most
/// `max_len` evaluates to the identity.
pub fn no_relation_up_to_length(
    gens: &[MoebiusMap],
    orders: &[u64],
    max_len: u32,
) -> Result<bool> {
    let mut ok = true;
    for_each_reduced_word(gens, orders, max_len, &mut |mat, _| {
        if mat.is_identity() {
            ok = false;
            false
        } else {
            true
        }
    })?;
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involutions_cancel() {
        let fp = FreeProduct::new(vec![2, 0]).unwrap();
        let s = fp.generator(0);
        assert!(fp.multiply(&s, &s).is_identity());
        // (t1 t2)(t2^-1 t1) = t1 t1 = 1 in Z/2 * Z
        let u = fp.word(&[(0, 1), (1, 1)]).unwrap();
        let v = fp.word(&[(1, -1), (0, 1)]).unwrap();
        assert!(fp.multiply(&u, &v).is_identity());
    }

    #[test]
    fn multiply_matches_naive_reduction() {
        // naive oracle: push letters one at a time
        let fp = FreeProduct::new(vec![2, 0, 4]).unwrap();
        let naive = |letters: &[(usize, i64)]| {
            let norm = |i: usize, e: i64| {
                let k = fp.order(i);
                if k == 0 {
                    e
                } else {
                    e.rem_euclid(k as i64)
                }
            };
            let mut stack: Vec<(usize, i64)> = Vec::new();
            for &(i, e) in letters {
                let sign = if e >= 0 { 1 } else { -1 };
                for _ in 0..e.unsigned_abs() {
                    stack.push((i, norm(i, sign)));
                    loop {
                        let n = stack.len();
                        if n >= 1 && stack[n - 1].1 == 0 {
                            stack.pop();
                            continue;
                        }
                        // merge a trailing same-factor pair
                        if n >= 2 && stack[n - 2].0 == stack[n - 1].0 {
                            let (i, a) = stack[n - 2];
                            let b = stack[n - 1].1;
                            stack.truncate(n - 2);
                            let m = norm(i, a + b);
                            if m != 0 {
                                stack.push((i, m));
                            }
                            continue;
                        }
                        break;
                    }
                }
            }
            stack
        };
        let mut state = 1u64;
        let mut rand = move |n: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % n
        };
        for _ in 0..1000 {
            let len_u = rand(6) as usize;
            let len_v = rand(6) as usize;
            let mk = |len: usize, rand: &mut dyn FnMut(u64) -> u64| -> Vec<(usize, i64)> {
                (0..len).map(|_| (rand(3) as usize, rand(7) as i64 - 3)).collect()
            };
            let lu = mk(len_u, &mut rand);
            let lv = mk(len_v, &mut rand);
            let u = fp.word(&lu).unwrap();
            let v = fp.word(&lv).unwrap();
            let concat: Vec<(usize, i64)> = lu.iter().chain(lv.iter()).copied().collect();
            assert_eq!(fp.multiply(&u, &v).letters(), naive(&concat).as_slice());
        }
    }

    #[test]
    fn inverses_cancel() {
        let fp = FreeProduct::new(vec![2, 3, 0]).unwrap();
        for letters in [
            vec![(0, 1), (1, 2), (2, -4)],
            vec![(1, 1), (2, 3), (1, 2), (0, 1)],
            vec![],
        ] {
            let w = fp.word(&letters).unwrap();
            assert!(fp.multiply(&w, &fp.inverse(&w)).is_identity());
            assert!(fp.multiply(&fp.inverse(&w), &w).is_identity());
        }
    }

    #[test]
    fn hom_images() {
        // Z/2 * Z/4 -> Z/4 by s -> 0, w -> 1
        let fp = FreeProduct::new(vec![2, 4]).unwrap();
        let hom = CyclicHom::new(&fp, 4, vec![0, 1]).unwrap();
        let w4 = fp.word(&[(1, 4)]).unwrap(); // reduces to identity already
        assert_eq!(hom_image(&hom, &w4), 0);
        assert_eq!(hom_image(&hom, &Word::identity()), 0);
        let swsw = fp.word(&[(0, 1), (1, 1), (0, 1), (1, 1)]).unwrap();
        assert_eq!(hom_image(&hom, &swsw), 2);
        // homomorphism property on samples
        let u = fp.word(&[(1, 3), (0, 1)]).unwrap();
        let v = fp.word(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            hom_image(&hom, &fp.multiply(&u, &v)),
            (hom_image(&hom, &u) + hom_image(&hom, &v)).rem_euclid(4)
        );
    }

    #[test]
    fn hom_validation() {
        let fp = FreeProduct::new(vec![2, 4]).unwrap();
        assert!(CyclicHom::new(&fp, 4, vec![0, 1]).is_ok());
        // s of order 2 cannot map to 1 mod 4
        assert!(CyclicHom::new(&fp, 4, vec![1, 1]).is_err());
        // order-2 factor cannot map to a nonzero integer
        let fpz = FreeProduct::new(vec![2, 0]).unwrap();
        assert!(CyclicHom::new(&fpz, 0, vec![1, 1]).is_err());
        assert!(CyclicHom::new(&fpz, 0, vec![0, 1]).is_ok());
    }

    #[test]
    fn kernel_generators_index_four() {
        // Z/2 * Z/4 -> Z/4: kernel generated by w^j s w^-j
        let fp = FreeProduct::new(vec![2, 4]).unwrap();
        let hom = CyclicHom::new(&fp, 4, vec![0, 1]).unwrap();
        let section: Vec<Word> = (0..4).map(|j| fp.word(&[(1, j)]).unwrap()).collect();
        let gens = kernel_generators(&fp, &hom, &section).unwrap();
        let expect: Vec<Word> = (0..4)
            .map(|j| fp.conjugate(&fp.word(&[(1, j)]).unwrap(), &fp.generator(0)))
            .collect();
        assert_eq!(gens.len(), 4);
        for g in &expect {
            assert!(gens.contains(g));
        }
        for g in &gens {
            assert_eq!(hom_image(&hom, g), 0);
        }
    }

    #[test]
    fn kernel_generators_with_torsion_factor() {
        // Z/2 * Z/6 -> Z/3: kernel generated by u^j s u^-j and u^3
        let fp = FreeProduct::new(vec![2, 6]).unwrap();
        let hom = CyclicHom::new(&fp, 3, vec![0, 1]).unwrap();
        let section: Vec<Word> = (0..3).map(|j| fp.word(&[(1, j)]).unwrap()).collect();
        let gens = kernel_generators(&fp, &hom, &section).unwrap();
        assert_eq!(gens.len(), 4);
        assert!(gens.contains(&fp.word(&[(1, 3)]).unwrap()));
        for g in &gens {
            assert_eq!(hom_image(&hom, g), 0);
        }
    }

    #[test]
    fn kernel_generators_truncated_infinite() {
        // Z/2 * Z -> Z: kernel generated by t^k s t^-k
        let fp = FreeProduct::new(vec![2, 0]).unwrap();
        let hom = CyclicHom::new(&fp, 0, vec![0, 1]).unwrap();
        let section: Vec<Word> = (-3..=3).map(|k| fp.word(&[(1, k)]).unwrap()).collect();
        let gens = kernel_generators(&fp, &hom, &section).unwrap();
        assert_eq!(gens.len(), 7);
        for k in -3i64..=3 {
            let g = fp.conjugate(&fp.word(&[(1, k)]).unwrap(), &fp.generator(0));
            assert!(gens.contains(&g));
        }
    }

    #[test]
    fn bad_sections_are_rejected() {
        let fp = FreeProduct::new(vec![2, 4]).unwrap();
        let hom = CyclicHom::new(&fp, 4, vec![0, 1]).unwrap();
        let dup: Vec<Word> = vec![Word::identity(), Word::identity()];
        assert!(matches!(kernel_generators(&fp, &hom, &dup), Err(Error::BadSection(_))));
        let short: Vec<Word> = (0..3).map(|j| fp.word(&[(1, j)]).unwrap()).collect();
        assert!(matches!(kernel_generators(&fp, &hom, &short), Err(Error::BadSection(_))));
        // s -> 0, w -> 2 only reaches the even part of Z/4
        let hom = CyclicHom::new(&fp, 4, vec![0, 2]).unwrap();
        let section: Vec<Word> = (0..4).map(|j| fp.word(&[(1, j)]).unwrap()).collect();
        assert!(matches!(kernel_generators(&fp, &hom, &section), Err(Error::BadHom(_))));
    }

    #[test]
    fn invalid_words_are_rejected() {
        let fp = FreeProduct::new(vec![2, 4]).unwrap();
        assert!(matches!(fp.word(&[(2, 1)]), Err(Error::BadWord(_))));
        assert!(FreeProduct::new(vec![1]).is_err());
    }

    #[test]
    fn evaluate_words() {
        let fp = FreeProduct::new(vec![2, 4]).unwrap();
        let s0 = MoebiusMap::from_i64(0, -1, 2, 0).unwrap();
        let w = MoebiusMap::from_i64(0, -1, 2, 2).unwrap();
        let assignment = [s0.clone(), w.clone()];
        assert!(evaluate(&fp, &Word::identity(), &assignment).unwrap().is_identity());
        // w s w^-1 is the reflection with matrix [2, 1; -6, -2]
        let word = fp.conjugate(&fp.generator(1), &fp.generator(0));
        assert_eq!(
            evaluate(&fp, &word, &assignment).unwrap(),
            MoebiusMap::from_i64(2, 1, -6, -2).unwrap()
        );
    }

    #[test]
    fn evaluate_relation_letters() {
        // (t s0)^3 at delta = 3 equals the reflection at (2, 1, 2)
        let s0 = MoebiusMap::from_i64(0, -1, 3, 0).unwrap();
        let t = MoebiusMap::from_i64(1, 1, 0, 1).unwrap();
        let u = t.compose(&s0);
        let cube = evaluate_letters(&[(0, 3)], &[u]).unwrap();
        assert_eq!(cube, MoebiusMap::from_i64(3, -2, 6, -3).unwrap());
    }

    #[test]
    fn no_relation_detects_duplicates() {
        let s0 = MoebiusMap::from_i64(0, -1, 2, 0).unwrap();
        assert!(!no_relation_up_to_length(&[s0.clone(), s0.clone()], &[2, 2], 2).unwrap());
        assert!(no_relation_up_to_length(&[s0], &[2], 10).unwrap());
    }

    #[test]
    fn no_relation_checks_declared_orders() {
        let t = MoebiusMap::from_i64(1, 1, 0, 1).unwrap();
        assert!(matches!(
            no_relation_up_to_length(&[t], &[2], 3),
            Err(Error::OrderMismatch(0))
        ));
    }

    #[test]
    fn word_length_counts_letters() {
        let fp = FreeProduct::new(vec![0, 0]).unwrap();
        let w = fp.word(&[(0, 3), (1, -2)]).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.syllables(), 2);
    }
}
