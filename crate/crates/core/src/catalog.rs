//! The bundled catalog of worked low-degree examples: each entry carries a
//! numerical exceptional collection (or its printed mutation), the points of
//! its generator roots, an explicit presentation of the ambient group with a
//! quotient map and transversal, the claimed reflection generators, and the
//! orbifold signature. On top of the data: numerical mutation by braids,
//! the anticanonical product identity, mutation-path search, and a
//! machine-readable verification report per entry.

use std::collections::BTreeSet;
use std::collections::HashSet;
use std::collections::VecDeque;
use std::time::Instant;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::domain::{
    domain_membership, finitely_generated, ford_domain, same_group_within_bound, FordDomain,
    Membership, SignatureData, Strip,
};
use crate::hurwitz::BraidWord;
use crate::lattice::{
    is_positive_root, q_value, reflect, reflection_matrix, translation_matrix, Isometry3,
    MukaiForm, MukaiVector,
};
use crate::moebius::{
    h_point_of_vector, reflection_moebius, translation_moebius, HPoint, MoebiusMap,
};
use crate::words::{evaluate, evaluate_letters, kernel_generators, CyclicHom, FreeProduct, Word};
use crate::{Error, Int, Rat, Result};

/// An ordered list of root vectors, the numerical shadow of an exceptional
/// collection. All vectors are stored sign-canonicalised with `q = -1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalCollection {
    pub form: MukaiForm,
    pub vectors: Vec<MukaiVector>,
}

impl NumericalCollection {
    pub fn new(form: MukaiForm, vectors: Vec<MukaiVector>) -> Result<Self> {
        let vectors: Vec<MukaiVector> = vectors.iter().map(MukaiVector::canonical_sign).collect();
        for v in &vectors {
            if !is_positive_root(form, v) {
                return Err(Error::NotARoot(q_value(form, v).to_string()));
            }
        }
        Ok(NumericalCollection { form, vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// One braid move on a collection: `sigma_i` replaces `(.., u, v, ..)` by
/// `(.., s_u(v), u, ..)` and `sigma_i^-1` replaces it by `(.., v, s_v(u), ..)`,
/// signs canonicalised back to positive rank.
fn mutate_letter(form: MukaiForm, vectors: &mut [MukaiVector], letter: i32) -> Result<()> {
    let i = (letter.unsigned_abs() as usize) - 1;
    if letter > 0 {
        let new = reflect(form, &vectors[i], &vectors[i + 1])?.canonical_sign();
        vectors[i + 1] = vectors[i].clone();
        vectors[i] = new;
    } else {
        let new = reflect(form, &vectors[i + 1], &vectors[i])?.canonical_sign();
        vectors[i] = vectors[i + 1].clone();
        vectors[i + 1] = new;
    }
    Ok(())
}

/// Numerical mutation of a collection by a braid word (rightmost letter
/// first, matching the Hurwitz action convention).
pub fn mutate(c: &NumericalCollection, braid: &BraidWord) -> Result<NumericalCollection> {
    if braid.strands() != c.len() {
        return Err(Error::LengthMismatch { braid: braid.strands(), tuple: c.len() });
    }
    let mut vectors = c.vectors.clone();
    for &letter in braid.letters().iter().rev() {
        mutate_letter(c.form, &mut vectors, letter)?;
    }
    Ok(NumericalCollection { form: c.form, vectors })
}

/// Shortest braid word carrying `a` to `b` up to elementwise sign, by
/// breadth-first search; ties are broken toward the lexicographically
/// smallest letter sequence in the order `1 < -1 < 2 < -2 < ..`.
pub fn find_mutation_path(
    a: &NumericalCollection,
    b: &NumericalCollection,
    max_len: u32,
) -> Result<Option<BraidWord>> {
    if a.form != b.form || a.len() != b.len() {
        return Err(Error::LengthMismatch { braid: b.len(), tuple: a.len() });
    }
    let n = a.len();
    // Search backwards from b so that the first letter of the word is
    // chosen first: the word sigma_{l1} .. sigma_{lk} maps a to b iff
    // applying the inverse moves sigma_{l1}^-1, sigma_{l2}^-1, .. to b
    // reaches a.
    let letters: Vec<i32> = (1..n as i32).flat_map(|i| [i, -i]).collect();
    let mut seen: HashSet<Vec<MukaiVector>> = HashSet::new();
    let mut queue: VecDeque<(Vec<MukaiVector>, Vec<i32>)> = VecDeque::new();
    seen.insert(b.vectors.clone());
    queue.push_back((b.vectors.clone(), Vec::new()));
    while let Some((state, path)) = queue.pop_front() {
        if state == a.vectors {
            return Ok(Some(BraidWord::new(n, &path)?));
        }
        if path.len() as u32 == max_len {
            continue;
        }
        for &l in &letters {
            let mut next = state.clone();
            mutate_letter(a.form, &mut next, -l)?;
            if seen.insert(next.clone()) {
                let mut next_path = path.clone();
                next_path.push(l);
                queue.push_back((next, next_path));
            }
        }
    }
    Ok(None)
}

/// Expected index of the reflection subgroup in the ambient group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedIndex {
    Finite(u64),
    Infinite,
}

impl ExpectedIndex {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExpectedIndex::Finite(_))
    }
}

impl std::fmt::Display for ExpectedIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExpectedIndex::Finite(n) => write!(f, "{n}"),
            ExpectedIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Presentation of the ambient group as a free product of cyclic groups,
/// with concrete matrices for the factor generators, a quotient map whose
/// kernel is the reflection subgroup, and a transversal for it.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub product: FreeProduct,
    pub names: Vec<String>,
    pub assignment: Vec<MoebiusMap>,
    pub hom: CyclicHom,
    pub section: Vec<Word>,
}

impl Presentation {
    /// Render a word through the factor names.
    pub fn display_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|&(i, e)| {
                if e == 1 {
                    self.names[i].clone()
                } else {
                    format!("{}^{}", self.names[i], e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A relation to check as an exact matrix identity: raw letters over the
/// presentation factors and the expected value of their product.
#[derive(Debug, Clone)]
pub struct Relation {
    pub letters: Vec<(usize, i64)>,
    pub expected: MoebiusMap,
    pub display: String,
}

/// The printed mutation of the base collection, when the source lists the
/// mutated vectors rather than the originals.
#[derive(Debug, Clone)]
pub struct PrintedMutation {
    pub braid_letters: Vec<i32>,
    pub result: Vec<MukaiVector>,
}

/// One worked example.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub form: MukaiForm,
    /// Translation parameter of the anticanonical product identity.
    pub fano_index: i64,
    /// `+1` when the product identity holds on the nose at the 3x3 level,
    /// `-1` when it holds up to the global sign of an odd shift.
    pub shift_sign: i8,
    /// Base numerical collection (derived from `mutation` when present).
    pub collection: NumericalCollection,
    pub mutation: Option<PrintedMutation>,
    /// Roots whose reflections generate the reflection subgroup; equals the
    /// mutation result when present, the base collection otherwise, unless
    /// listed explicitly (truncated infinite families).
    pub generator_roots: Vec<MukaiVector>,
    pub expected_points: Vec<HPoint>,
    pub expected_index: ExpectedIndex,
    /// Truncation radius of the transversal for infinite quotients.
    pub truncation: u32,
    pub strip: Option<Strip>,
    pub presentation: Presentation,
    pub relations: Vec<Relation>,
    pub claimed_generators: Vec<MoebiusMap>,
    pub signature: SignatureData,
}

impl CatalogEntry {
    /// Reflections at the generator roots.
    pub fn generator_reflections(&self) -> Vec<MoebiusMap> {
        self.generator_roots
            .iter()
            .map(|rho| reflection_moebius(self.form, rho).expect("catalog roots are roots"))
            .collect()
    }

    /// Truncated Ford domain of the reflection subgroup at the given word
    /// length, using the entry's strip.
    pub fn domain(&self, word_length: u32) -> Result<FordDomain> {
        let gens = self.generator_reflections();
        let orders = vec![2u64; gens.len()];
        ford_domain(&gens, &orders, word_length, self.strip.clone())
    }
}

/// Ordered product of the reflections at the collection's vectors, as
/// lattice isometries and as Moebius maps.
fn reflection_products(c: &NumericalCollection) -> (Isometry3, MoebiusMap) {
    let mut iso = Isometry3::identity(c.form);
    let mut moeb = MoebiusMap::identity();
    for v in &c.vectors {
        iso = iso.compose(&reflection_matrix(c.form, v).expect("collection vectors are roots"));
        moeb = moeb.compose(&reflection_moebius(c.form, v).expect("collection vectors are roots"));
    }
    (iso, moeb)
}

/// The anticanonical product identity: the ordered product of the
/// collection's reflections equals `shift_sign * t_(-fano_index)` at the
/// 3x3 level and `t_(-fano_index)` in `PGL_2^+(Q)`.
pub fn serre_product_check(entry: &CatalogEntry) -> bool {
    let (iso, moeb) = reflection_products(&entry.collection);
    let mut expected3 = translation_matrix(entry.form, -entry.fano_index);
    if entry.shift_sign < 0 {
        expected3 = expected3.neg();
    }
    let alpha: i64 = -entry.fano_index;
    iso == expected3 && moeb == translation_moebius(alpha)
}

/// Outcome of a single verification step.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Machine-readable verification report for one entry.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub entry: String,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &str, pass: bool, detail: String) -> CheckResult {
    CheckResult { name: name.into(), pass, detail }
}

/// Run every check of an entry and collect the results; failures are
/// report lines, never errors.
pub fn verify_entry(entry: &CatalogEntry) -> Report {
    let start = Instant::now();
    let mut checks = Vec::new();
    let form = entry.form;

    // 1. all catalog vectors are positive roots
    {
        let mut bad = Vec::new();
        for v in entry.collection.vectors.iter().chain(&entry.generator_roots) {
            if !is_positive_root(form, v) {
                bad.push(v.to_string());
            }
        }
        checks.push(check(
            "roots-valid",
            bad.is_empty(),
            if bad.is_empty() {
                format!(
                    "{} collection + {} generator vectors have q = -1, r > 0",
                    entry.collection.len(),
                    entry.generator_roots.len()
                )
            } else {
                format!("not positive roots: {}", bad.join(", "))
            },
        ));
    }

    // 2. printed points match the generator roots exactly
    {
        let points: Result<Vec<HPoint>> =
            entry.generator_roots.iter().map(|v| h_point_of_vector(form, v)).collect();
        let (pass, detail) = match points {
            Ok(points) if points == entry.expected_points => {
                (true, format!("{} points match exactly", points.len()))
            }
            Ok(points) => {
                let diffs: Vec<String> = points
                    .iter()
                    .zip(&entry.expected_points)
                    .enumerate()
                    .filter(|(_, (a, b))| a != b)
                    .map(|(i, (a, b))| format!("#{i}: {a} != {b}"))
                    .collect();
                let msg = if points.len() != entry.expected_points.len() {
                    format!("{} points for {} roots", entry.expected_points.len(), points.len())
                } else {
                    diffs.join("; ")
                };
                (false, msg)
            }
            Err(e) => (false, e.to_string()),
        };
        checks.push(check("expected-points", pass, detail));
    }

    // 3. the printed mutation of the base collection
    {
        let (pass, detail) = match &entry.mutation {
            None => (true, "no printed mutation".into()),
            Some(m) => match BraidWord::new(entry.collection.len(), &m.braid_letters)
                .and_then(|b| mutate(&entry.collection, &b))
            {
                Ok(result) if result.vectors == m.result => {
                    (true, format!("braid {:?} reproduces the printed list", m.braid_letters))
                }
                Ok(result) => (
                    false,
                    format!(
                        "braid {:?} gives {} instead",
                        m.braid_letters,
                        result.vectors.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                    ),
                ),
                Err(e) => (false, e.to_string()),
            },
        };
        checks.push(check("mutation", pass, detail));
    }

    // 4. relations hold as exact matrix identities
    {
        let mut failures = Vec::new();
        for rel in &entry.relations {
            match evaluate_letters(&rel.letters, &entry.presentation.assignment) {
                Ok(got) if got == rel.expected => {}
                Ok(got) => failures.push(format!("{} = {} != {}", rel.display, got, rel.expected)),
                Err(e) => failures.push(format!("{}: {}", rel.display, e)),
            }
        }
        checks.push(check(
            "relations",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{} relation(s) hold", entry.relations.len())
            } else {
                failures.join("; ")
            },
        ));
    }

    // 5 + 6. kernel data: transversal size against the expected index, and
    // the Schreier generators against the claimed ones and the generator
    // root reflections.
    {
        let p = &entry.presentation;
        let kernel = kernel_generators(&p.product, &p.hom, &p.section);
        match kernel {
            Err(e) => {
                checks.push(check("kernel-index", false, e.to_string()));
                checks.push(check("kernel-generators", false, "kernel computation failed".into()));
            }
            Ok(words) => {
                let index_pass = match entry.expected_index {
                    ExpectedIndex::Finite(n) => {
                        p.hom.modulus() == n && p.section.len() as u64 == n
                    }
                    ExpectedIndex::Infinite => {
                        p.hom.modulus() == 0
                            && p.section.len() == 2 * entry.truncation as usize + 1
                    }
                };
                checks.push(check(
                    "kernel-index",
                    index_pass,
                    format!(
                        "transversal of {} coset(s), expected index {}",
                        p.section.len(),
                        entry.expected_index
                    ),
                ));

                let evaluated: Result<Vec<MoebiusMap>> =
                    words.iter().map(|w| evaluate(&p.product, w, &p.assignment)).collect();
                let (pass, detail) = match evaluated {
                    Err(e) => (false, e.to_string()),
                    Ok(evaluated) => {
                        let reflections = entry.generator_reflections();
                        let count_ok = evaluated.len() == entry.generator_roots.len();
                        let as_set: BTreeSet<&MoebiusMap> = evaluated.iter().collect();
                        let refl_set: BTreeSet<&MoebiusMap> = reflections.iter().collect();
                        let claimed_set: BTreeSet<&MoebiusMap> =
                            entry.claimed_generators.iter().collect();
                        let vs_claimed = as_set == claimed_set
                            || same_group_within_bound(&evaluated, &entry.claimed_generators, 9);
                        let vs_roots = as_set == refl_set
                            || same_group_within_bound(&evaluated, &reflections, 9);
                        let pass = count_ok && vs_claimed && vs_roots;
                        let detail = if pass {
                            format!(
                                "{} kernel generators; generate the claimed group (bound 9)",
                                evaluated.len()
                            )
                        } else {
                            format!(
                                "count {} vs {} roots; claimed match: {}; reflection match: {}",
                                evaluated.len(),
                                entry.generator_roots.len(),
                                vs_claimed,
                                vs_roots
                            )
                        };
                        (pass, detail)
                    }
                };
                checks.push(check("kernel-generators", pass, detail));
            }
        }
    }

    // 7. anticanonical product identity
    checks.push(check(
        "serre-product",
        serre_product_check(entry),
        format!(
            "product of {} reflections vs {} * t_{}",
            entry.collection.len(),
            if entry.shift_sign < 0 { "-1" } else { "+1" },
            -entry.fano_index
        ),
    ));

    // 8. Ford domain containment of the expected points, with stability of
    // the classification from word length 4 to 5
    {
        let result = entry.domain(4).and_then(|d4| entry.domain(5).map(|d5| (d4, d5)));
        let (pass, detail) = match result {
            Err(e) => (false, e.to_string()),
            Ok((d4, d5)) => {
                let mut bad = Vec::new();
                for (i, p) in entry.expected_points.iter().enumerate() {
                    let m4 = domain_membership(&d4, p);
                    let m5 = domain_membership(&d5, p);
                    if m4 == Membership::Exterior || m4 != m5 {
                        bad.push(format!("#{i}: {m4} at L=4, {m5} at L=5"));
                    }
                }
                (
                    bad.is_empty(),
                    if bad.is_empty() {
                        format!(
                            "{} points interior/boundary, stable L=4 -> L=5 ({} circles)",
                            entry.expected_points.len(),
                            d4.circles.len()
                        )
                    } else {
                        bad.join("; ")
                    },
                )
            }
        };
        checks.push(check("ford-points", pass, detail));
    }

    // 9. finite generation from the signature agrees with the index
    {
        let fin = finitely_generated(&entry.signature);
        let pass = fin == entry.expected_index.is_finite();
        checks.push(check(
            "finite-generation",
            pass,
            format!("signature says {}, index is {}", fin, entry.expected_index),
        ));
    }

    Report {
        entry: entry.name.clone(),
        checks,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

// ----------------------------------------------------------------- loading

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    schema: u32,
    entries: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    delta: u64,
    fano_index: i64,
    shift_sign: i64,
    #[serde(default)]
    collection: Option<Vec<String>>,
    #[serde(default)]
    mutation: Option<RawMutation>,
    #[serde(default)]
    generator_roots: Option<Vec<String>>,
    expected_points: Vec<String>,
    expected_index: String,
    #[serde(default)]
    truncation: u32,
    #[serde(default)]
    strip: Option<String>,
    presentation: RawPresentation,
    #[serde(default)]
    relations: Vec<RawRelation>,
    claimed_generators: Vec<String>,
    signature: RawSignature,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMutation {
    braid: Vec<i32>,
    result: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    orders: Vec<u64>,
    names: Vec<String>,
    generators: Vec<String>,
    modulus: u64,
    targets: Vec<i64>,
    section: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    word: String,
    expected: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignature {
    genus: u32,
    cusps: u32,
    elliptic: Vec<String>,
}

fn schema_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Schema(format!("{path}: {msg}"))
}

fn parse_int(path: &str, s: &str) -> Result<Int> {
    s.trim().parse::<Int>().map_err(|e| schema_err(path, e))
}

fn parse_rat(path: &str, s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(path, s)?)),
        Some((p, q)) => {
            let den = parse_int(path, q)?;
            if den.is_zero() {
                return Err(schema_err(path, "zero denominator"));
            }
            Ok(Rat::new(parse_int(path, p)?, den))
        }
    }
}

fn parse_vector(path: &str, s: &str) -> Result<MukaiVector> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(schema_err(path, format!("expected \"r,l,s\", got {s:?}")));
    }
    Ok(MukaiVector::new(
        parse_int(path, parts[0])?,
        parse_int(path, parts[1])?,
        parse_int(path, parts[2])?,
    ))
}

fn parse_matrix(path: &str, s: &str) -> Result<MoebiusMap> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(schema_err(path, format!("expected \"a,b,c,d\", got {s:?}")));
    }
    MoebiusMap::new(
        parse_int(path, parts[0])?,
        parse_int(path, parts[1])?,
        parse_int(path, parts[2])?,
        parse_int(path, parts[3])?,
    )
    .map_err(|e| schema_err(path, e))
}

fn parse_point(path: &str, s: &str) -> Result<HPoint> {
    let (x, y_sq) = s
        .split_once(';')
        .ok_or_else(|| schema_err(path, format!("expected \"x;y^2\", got {s:?}")))?;
    HPoint::new(parse_rat(path, x)?, parse_rat(path, y_sq)?).map_err(|e| schema_err(path, e))
}

fn parse_letters(path: &str, s: &str) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::new();
    for part in s.split_whitespace() {
        let (i, e) = part
            .split_once(':')
            .ok_or_else(|| schema_err(path, format!("expected \"factor:exp\", got {part:?}")))?;
        let i: usize = i.parse().map_err(|e| schema_err(path, e))?;
        let e: i64 = e.parse().map_err(|e| schema_err(path, e))?;
        out.push((i, e));
    }
    Ok(out)
}

fn parse_strip(path: &str, s: &str) -> Result<Strip> {
    let (left, width) = s
        .split_once(';')
        .ok_or_else(|| schema_err(path, format!("expected \"left;width\", got {s:?}")))?;
    Strip::new(parse_rat(path, left)?, parse_rat(path, width)?).map_err(|e| schema_err(path, e))
}

fn invariant(entry: &str, detail: impl Into<String>) -> Error {
    Error::Invariant { entry: entry.into(), detail: detail.into() }
}

/// Exact order of a finite-order matrix, checked against the declaration.
fn check_declared_order(name: &str, i: usize, g: &MoebiusMap, order: u64) -> Result<()> {
    if order == 0 {
        if g.pow(1).is_identity() {
            return Err(invariant(name, format!("generator {i} declared infinite is trivial")));
        }
        return Ok(());
    }
    if !g.pow(order as i64).is_identity() {
        return Err(invariant(name, format!("generator {i} does not have order {order}")));
    }
    for d in 1..order {
        if order % d == 0 && g.pow(d as i64).is_identity() {
            return Err(invariant(
                name,
                format!("generator {i} has order {d}, declared {order}"),
            ));
        }
    }
    Ok(())
}

fn entry_from_raw(raw: RawEntry) -> Result<CatalogEntry> {
    let name = raw.name.clone();
    let fieldpath = |f: &str| format!("{name}.{f}");
    let form = MukaiForm::new(raw.delta).map_err(|e| schema_err(&fieldpath("delta"), e))?;
    let shift_sign = match raw.shift_sign {
        1 => 1i8,
        -1 => -1i8,
        other => return Err(schema_err(&fieldpath("shift_sign"), format!("got {other}"))),
    };

    let parse_vecs = |field: &str, list: &[String]| -> Result<Vec<MukaiVector>> {
        list.iter().map(|s| parse_vector(&fieldpath(field), s)).collect()
    };

    let mutation = match &raw.mutation {
        None => None,
        Some(m) => Some(PrintedMutation {
            braid_letters: m.braid.clone(),
            result: parse_vecs("mutation.result", &m.result)?,
        }),
    };

    // Base collection: explicit, or recovered by undoing the printed braid.
    let collection = match (&raw.collection, &mutation) {
        (Some(list), _) => NumericalCollection::new(form, parse_vecs("collection", list)?)
            .map_err(|e| invariant(&name, format!("collection: {e}"))),
        (None, Some(m)) => {
            let printed = NumericalCollection::new(form, m.result.clone())
                .map_err(|e| invariant(&name, format!("mutation.result: {e}")))?;
            let braid = BraidWord::new(printed.len(), &m.braid_letters)
                .map_err(|e| schema_err(&fieldpath("mutation.braid"), e))?;
            mutate(&printed, &braid.inverse())
                .map_err(|e| invariant(&name, format!("undoing mutation: {e}")))
        }
        (None, None) => Err(schema_err(
            &fieldpath("collection"),
            "entry needs a collection or a mutation block",
        )),
    }?;

    let generator_roots = match (&raw.generator_roots, &mutation) {
        (Some(list), _) => parse_vecs("generator_roots", list)?,
        (None, Some(m)) => m.result.clone(),
        (None, None) => collection.vectors.clone(),
    };
    for v in &generator_roots {
        if !is_positive_root(form, v) {
            return Err(invariant(&name, format!("generator root {v} has q != -1 or r <= 0")));
        }
    }

    let expected_points: Vec<HPoint> = raw
        .expected_points
        .iter()
        .map(|s| parse_point(&fieldpath("expected_points"), s))
        .collect::<Result<_>>()?;
    if expected_points.len() != generator_roots.len() {
        return Err(invariant(
            &name,
            format!(
                "{} expected points for {} generator roots",
                expected_points.len(),
                generator_roots.len()
            ),
        ));
    }
    for (v, p) in generator_roots.iter().zip(&expected_points) {
        let actual = h_point_of_vector(form, v).map_err(|e| invariant(&name, e.to_string()))?;
        if &actual != p {
            return Err(invariant(&name, format!("point of {v} is {actual}, catalog says {p}")));
        }
    }

    let expected_index = match raw.expected_index.trim() {
        "infinite" => ExpectedIndex::Infinite,
        s => ExpectedIndex::Finite(
            s.parse::<u64>().map_err(|e| schema_err(&fieldpath("expected_index"), e))?,
        ),
    };
    if expected_index == ExpectedIndex::Infinite && raw.truncation == 0 {
        return Err(schema_err(&fieldpath("truncation"), "required for infinite index"));
    }

    let strip = match &raw.strip {
        None => None,
        Some(s) => Some(parse_strip(&fieldpath("strip"), s)?),
    };

    // presentation
    let p = &raw.presentation;
    let product = FreeProduct::new(p.orders.clone())
        .map_err(|e| schema_err(&fieldpath("presentation.orders"), e))?;
    if p.names.len() != product.factors() || p.generators.len() != product.factors() {
        return Err(schema_err(
            &fieldpath("presentation"),
            "names, orders and generators must have equal lengths",
        ));
    }
    let assignment: Vec<MoebiusMap> = p
        .generators
        .iter()
        .map(|s| parse_matrix(&fieldpath("presentation.generators"), s))
        .collect::<Result<_>>()?;
    for (i, (g, &k)) in assignment.iter().zip(&p.orders).enumerate() {
        check_declared_order(&name, i, g, k)?;
    }
    let hom = CyclicHom::new(&product, p.modulus, p.targets.clone())
        .map_err(|e| schema_err(&fieldpath("presentation.targets"), e))?;
    let section: Vec<Word> = p
        .section
        .iter()
        .map(|s| {
            parse_letters(&fieldpath("presentation.section"), s)
                .and_then(|ls| product.word(&ls).map_err(|e| schema_err(&fieldpath("presentation.section"), e)))
        })
        .collect::<Result<_>>()?;
    let presentation = Presentation {
        product,
        names: p.names.clone(),
        assignment,
        hom,
        section,
    };

    let relations: Vec<Relation> = raw
        .relations
        .iter()
        .map(|r| {
            Ok(Relation {
                letters: parse_letters(&fieldpath("relations.word"), &r.word)?,
                expected: parse_matrix(&fieldpath("relations.expected"), &r.expected)?,
                display: r.word.clone(),
            })
        })
        .collect::<Result<_>>()?;

    let claimed_generators: Vec<MoebiusMap> = raw
        .claimed_generators
        .iter()
        .map(|s| parse_matrix(&fieldpath("claimed_generators"), s))
        .collect::<Result<_>>()?;

    let elliptic: Vec<(u32, bool)> = raw
        .signature
        .elliptic
        .iter()
        .map(|s| {
            let (order, kind) = s.split_once(',').ok_or_else(|| {
                schema_err(&fieldpath("signature.elliptic"), format!("expected \"order,kind\", got {s:?}"))
            })?;
            let order: u32 =
                order.parse().map_err(|e| schema_err(&fieldpath("signature.elliptic"), e))?;
            let is_root = match kind {
                "root" => true,
                "plain" => false,
                other => {
                    return Err(schema_err(
                        &fieldpath("signature.elliptic"),
                        format!("kind must be root or plain, got {other:?}"),
                    ))
                }
            };
            Ok((order, is_root))
        })
        .collect::<Result<_>>()?;
    let signature =
        SignatureData { genus: raw.signature.genus, num_cusps: raw.signature.cusps, elliptic };

    Ok(CatalogEntry {
        name,
        form,
        fano_index: raw.fano_index,
        shift_sign,
        collection,
        mutation,
        generator_roots,
        expected_points,
        expected_index,
        truncation: raw.truncation,
        strip,
        presentation,
        relations,
        claimed_generators,
        signature,
    })
}

/// Parse and validate a catalog document.
pub fn load_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if raw.schema != 1 {
        return Err(Error::Schema(format!("unsupported schema version {}", raw.schema)));
    }
    raw.entries.into_iter().map(entry_from_raw).collect()
}

const BUILTIN: &str = include_str!("catalog.toml");

/// The six bundled entries.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    load_catalog(BUILTIN).expect("the bundled catalog validates")
}

/// Raw text of the bundled catalog (a template for edited copies).
pub fn builtin_catalog_text() -> &'static str {
    BUILTIN
}

/// Find an entry by name.
pub fn find_entry<'a>(entries: &'a [CatalogEntry], name: &str) -> Result<&'a CatalogEntry> {
    entries.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.into()))
}

/// A standalone collection document for path queries:
/// `delta = 5` and `vectors = ["r,l,s", ..]`.
pub fn parse_collection_file(text: &str) -> Result<NumericalCollection> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct RawCollection {
        delta: u64,
        vectors: Vec<String>,
    }
    let raw: RawCollection = toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let form = MukaiForm::new(raw.delta).map_err(|e| Error::Schema(e.to_string()))?;
    let vectors: Vec<MukaiVector> =
        raw.vectors.iter().map(|s| parse_vector("vectors", s)).collect::<Result<_>>()?;
    NumericalCollection::new(form, vectors)
}
