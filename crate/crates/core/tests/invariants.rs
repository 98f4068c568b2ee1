//! Cross-module invariants: transfer identities on the full catalog,
//! randomised homomorphism properties, domain/translate separation, and the
//! truncated infinite family.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mukai::arith::al_class;
use mukai::catalog::{builtin_catalog, find_entry, mutate, NumericalCollection};
use mukai::domain::{domain_membership, Membership};
use mukai::hurwitz::BraidWord;
use mukai::lattice::{reflection_matrix, translation_matrix, Isometry3, MukaiForm, MukaiVector};
use mukai::moebius::{
    h_point_of_vector, reflection_moebius, to_isometry3, translation_moebius, HPoint, MoebiusMap,
};
use mukai::svg::{render_svg, Window};
use mukai::words::{evaluate, hom_image, kernel_generators, FreeProduct, Word};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(rng: &mut ChaCha8Rng, bound: i64) -> MoebiusMap {
    loop {
        let a = rng.gen_range(-bound..=bound);
        let b = rng.gen_range(-bound..=bound);
        let c = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(-bound..=bound);
        if a * d - b * c > 0 {
            return MoebiusMap::from_i64(a, b, c, d).unwrap();
        }
    }
}

#[test]
fn transfer_is_a_homomorphism_on_random_pairs() {
    let mut rng = rng(21);
    let form = MukaiForm::new(3).unwrap();
    for _ in 0..1_000 {
        let f = random_matrix(&mut rng, 20);
        let g = random_matrix(&mut rng, 20);
        assert_eq!(
            to_isometry3(form, &f.compose(&g)),
            to_isometry3(form, &f).compose(&to_isometry3(form, &g))
        );
    }
}

#[test]
fn moebius_action_is_exact_and_positive() {
    let mut rng = rng(22);
    for _ in 0..500 {
        let f = random_matrix(&mut rng, 12);
        let g = random_matrix(&mut rng, 12);
        let p = HPoint::new(
            mukai::Rat::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=9).into()),
            mukai::Rat::new(rng.gen_range(1..=60).into(), rng.gen_range(1..=9).into()),
        )
        .unwrap();
        // y^2 stays positive by construction; the action is associative
        assert_eq!(f.compose(&g).apply(&p), f.apply(&g.apply(&p)));
    }
}

#[test]
fn catalog_reflections_fix_their_root_points() {
    for entry in builtin_catalog() {
        for rho in &entry.generator_roots {
            let s = reflection_moebius(entry.form, rho).unwrap();
            assert!(s.compose(&s).is_identity());
            assert_eq!(
                s.fixed_point().unwrap(),
                h_point_of_vector(entry.form, rho).unwrap(),
                "root {rho} in {}",
                entry.name
            );
            let matrix = reflection_matrix(entry.form, rho).unwrap();
            assert_eq!(matrix.apply(rho).unwrap(), rho.neg());
            assert_eq!(matrix.det_sign(), -1);
            assert_eq!(
                to_isometry3(entry.form, &s),
                matrix.neg(),
                "root {rho} in {}",
                entry.name
            );
        }
    }
}

#[test]
fn transfer_round_trips_on_catalog_generators() {
    for entry in builtin_catalog() {
        let reflections = entry.generator_reflections();
        let gens = entry
            .presentation
            .assignment
            .iter()
            .chain(&entry.claimed_generators)
            .chain(&reflections);
        for g in gens.cloned() {
            let iso = to_isometry3(entry.form, &g);
            assert_eq!(
                mukai::moebius::from_isometry3(&iso).unwrap(),
                g,
                "entry {}",
                entry.name
            );
        }
    }
}

#[test]
fn translations_match_at_both_levels() {
    for delta in [1u64, 2, 3, 4, 5, 11] {
        let form = MukaiForm::new(delta).unwrap();
        for alpha in -4..=4 {
            assert_eq!(to_isometry3(form, &translation_moebius(alpha)), translation_matrix(form, alpha));
        }
    }
}

#[test]
fn normal_forms_cancel_on_random_words() {
    let mut rng = rng(23);
    let fp = FreeProduct::new(vec![2, 3, 0, 6]).unwrap();
    for _ in 0..1_000 {
        let letters: Vec<(usize, i64)> = (0..rng.gen_range(0..10))
            .map(|_| (rng.gen_range(0..4usize), rng.gen_range(-4..=4i64)))
            .collect();
        let w = fp.word(&letters).unwrap();
        assert!(fp.multiply(&w, &fp.inverse(&w)).is_identity());
        // associativity against a random split
        let more: Vec<(usize, i64)> = (0..rng.gen_range(0..6))
            .map(|_| (rng.gen_range(0..4usize), rng.gen_range(-4..=4i64)))
            .collect();
        let v = fp.word(&more).unwrap();
        let uv = fp.multiply(&w, &v);
        let concat: Vec<(usize, i64)> =
            letters.iter().chain(more.iter()).copied().collect();
        assert_eq!(uv, fp.word(&concat).unwrap());
    }
}

#[test]
fn hom_images_add_on_random_words() {
    let mut rng = rng(24);
    for entry in builtin_catalog() {
        let p = &entry.presentation;
        let factors = p.product.factors();
        for _ in 0..200 {
            let mk = |rng: &mut ChaCha8Rng| -> Word {
                let letters: Vec<(usize, i64)> = (0..rng.gen_range(0..6))
                    .map(|_| (rng.gen_range(0..factors), rng.gen_range(-3..=3i64)))
                    .collect();
                p.product.word(&letters).unwrap()
            };
            let u = mk(&mut rng);
            let v = mk(&mut rng);
            let lhs = hom_image(&p.hom, &p.product.multiply(&u, &v));
            let sum = hom_image(&p.hom, &u) + hom_image(&p.hom, &v);
            let rhs = if p.hom.modulus() == 0 {
                sum
            } else {
                sum.rem_euclid(p.hom.modulus() as i64)
            };
            assert_eq!(lhs, rhs, "entry {}", entry.name);
        }
    }
}

#[test]
fn kernel_generators_map_to_zero() {
    for entry in builtin_catalog() {
        let p = &entry.presentation;
        for w in kernel_generators(&p.product, &p.hom, &p.section).unwrap() {
            assert_eq!(hom_image(&p.hom, &w), 0, "entry {}", entry.name);
        }
    }
}

#[test]
fn truncated_family_has_distinct_reflection_points() {
    // the infinite-index entry: 2K + 1 kernel generators, evaluating to
    // reflections at the line-bundle roots, with distinct fixed points on
    // the horizontal line y = 1/2
    let entries = builtin_catalog();
    let entry = find_entry(&entries, "Deg8CI").unwrap();
    let p = &entry.presentation;
    let words = kernel_generators(&p.product, &p.hom, &p.section).unwrap();
    assert_eq!(words.len(), 2 * entry.truncation as usize + 1);
    let mut points = BTreeSet::new();
    for w in &words {
        let g = evaluate(&p.product, w, &p.assignment).unwrap();
        let fixed = g.fixed_point().unwrap();
        assert_eq!(fixed.y_sq(), &mukai::Rat::new(1.into(), 4.into()));
        assert!(points.insert(fixed.x().clone()), "duplicate fixed point");
    }
    assert_eq!(points.len(), 7);
}

/// Reduced words (no immediate repeats) of length 1..=max over involutions.
fn reduced_words(count: usize, max: usize) -> Vec<Vec<usize>> {
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    let mut out = Vec::new();
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..count {
                if w.last() == Some(&i) {
                    continue;
                }
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Nontrivial translates of the root points never reach the domain's
/// interior. They may touch the boundary: the points are vertices of the
/// domain, and boundary circles meet in their translates. The domain is
/// truncated deep enough (2*max + 1) to carry the conjugated circles.
fn check_translates(entry: &mukai::catalog::CatalogEntry, max_word: usize) {
    let gens = entry.generator_reflections();
    let dom = entry.domain(2 * max_word as u32 + 1).unwrap();
    let mut exterior = 0usize;
    let mut total = 0usize;
    for w in reduced_words(gens.len(), max_word) {
        let g = w.iter().fold(MoebiusMap::identity(), |acc, &i| acc.compose(&gens[i]));
        if g.is_identity() {
            continue;
        }
        for p in &entry.expected_points {
            let q = g.apply(p);
            if &q == p {
                continue;
            }
            total += 1;
            let class = domain_membership(&dom, &q);
            assert_ne!(class, Membership::Interior, "entry {}, word {w:?}, point {p}", entry.name);
            exterior += usize::from(class == Membership::Exterior);
        }
    }
    // most translates fall strictly outside; only vertex identifications
    // stay on the boundary
    assert!(exterior * 2 > total, "entry {}: {exterior} of {total} exterior", entry.name);
}

#[test]
fn translates_of_root_points_leave_the_domain() {
    let entries = builtin_catalog();
    for entry in &entries {
        if entry.name == "Deg8CI" {
            check_translates(entry, 2);
        } else {
            check_translates(entry, 3);
        }
    }
}

#[test]
fn strip_translations_lie_in_the_reflection_group() {
    // each finite-index entry's strip width is the translation length the
    // kernel provides; the translation must be a short product of the
    // generator reflections
    use mukai::domain::same_group_within_bound;
    use num_traits::ToPrimitive;
    for entry in builtin_catalog() {
        let Some(strip) = &entry.strip else { continue };
        assert!(strip.width.is_integer());
        let width = strip.width.to_integer().to_i64().unwrap();
        let gens = entry.generator_reflections();
        let mut with_translation = gens.clone();
        with_translation.push(translation_moebius(width));
        assert!(
            same_group_within_bound(&with_translation, &gens, 6),
            "entry {}: t_{width} not generated within 6 letters",
            entry.name
        );
    }
}

#[test]
fn mutation_preserves_reflection_product() {
    let mut rng = rng(25);
    let entries = builtin_catalog();
    for name in ["P3", "Q3", "V5", "V22", "DoubleCoverP2"] {
        let entry = find_entry(&entries, name).unwrap();
        let product = |c: &NumericalCollection| -> Isometry3 {
            c.vectors.iter().fold(Isometry3::identity(c.form), |acc, v| {
                acc.compose(&reflection_matrix(c.form, v).unwrap())
            })
        };
        let base = product(&entry.collection);
        for _ in 0..20 {
            let letters: Vec<i32> = (0..rng.gen_range(1..=6))
                .map(|_| {
                    let i = rng.gen_range(1..entry.collection.len() as i32);
                    if rng.gen_bool(0.5) {
                        i
                    } else {
                        -i
                    }
                })
                .collect();
            let braid = BraidWord::new(entry.collection.len(), &letters).unwrap();
            let mutated = mutate(&entry.collection, &braid).unwrap();
            assert_eq!(product(&mutated), base, "entry {name}, braid {letters:?}");
        }
    }
}

#[test]
fn al_classes_compose_on_samples() {
    let mats = [
        MoebiusMap::from_i64(2, -1, 6, -2).unwrap(),
        MoebiusMap::from_i64(3, -1, 12, -3).unwrap(),
        MoebiusMap::from_i64(0, -1, 6, 0).unwrap(),
        MoebiusMap::from_i64(1, 1, 6, 7).unwrap(),
        MoebiusMap::from_i64(1, 0, 6, 1).unwrap(),
    ];
    for f in &mats {
        for g in &mats {
            let lhs = al_class(6, &f.compose(g)).unwrap();
            let rhs = al_class(6, f).unwrap().xor(&al_class(6, g).unwrap());
            assert_eq!(lhs, rhs, "{f} * {g}");
        }
    }
}

#[test]
fn deg8_figure_has_seven_arcs_and_dots() {
    let entries = builtin_catalog();
    let entry = find_entry(&entries, "Deg8CI").unwrap();
    let dom = entry.domain(3).unwrap();
    let window = Window::around(&entry.expected_points, None);
    let svg = render_svg(&dom, &entry.expected_points, window).unwrap();
    assert_eq!(svg.matches("class=\"arc\"").count(), 7);
    assert_eq!(svg.matches("class=\"pt\"").count(), 7);
    assert_eq!(svg.matches("class=\"strip\"").count(), 0);
}

#[test]
fn domain_keeps_only_generator_circles_for_deg8() {
    let entries = builtin_catalog();
    let entry = find_entry(&entries, "Deg8CI").unwrap();
    let dom = entry.domain(5).unwrap();
    assert_eq!(dom.circles.len(), 7);
    for (k, c) in dom.circles.iter().enumerate() {
        assert_eq!(c.center, mukai::Rat::from_integer((k as i64 - 3).into()));
        assert_eq!(c.radius_sq, mukai::Rat::new(1.into(), 4.into()));
    }
}

#[test]
fn extracting_roots_from_entry_domains_recovers_the_catalog() {
    // scanning a generous root table against each entry's domain must
    // recover every generator root (further G-equivalent boundary roots may
    // come along; the narrow scans of the worked examples do not meet them)
    for entry in builtin_catalog() {
        let dom = entry.domain(4).unwrap();
        let roots = mukai::lattice::enumerate_roots(entry.form, 4, 4);
        let kept = mukai::domain::extract_generator_roots(entry.form, &dom, &roots).unwrap();
        let in_scan = |rho: &MukaiVector| {
            rho.r <= mukai::Int::from(4)
                && rho.l >= mukai::Int::from(-4)
                && rho.l <= mukai::Int::from(4)
        };
        for rho in entry.generator_roots.iter().filter(|r| in_scan(r)) {
            assert!(kept.contains(rho), "entry {}: {rho} not extracted", entry.name);
        }
    }
}
