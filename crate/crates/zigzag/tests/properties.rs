use proptest::prelude::*;

use zigzag::complexes::{minimize, spherical_twist_complex, tensor, BimoduleComplex};
use zigzag::frobenius::{check_extension_form, d_trivial_extension};
use zigzag::groups::{coxeter_word, group_presentation, linear_extension};
use zigzag::iso::{find_graded_isomorphism, IsoOptions};
use zigzag::koszul::{pbw_candidate, pbw_check, PbwVerdict, QuadraticPresentation};
use zigzag::linalg::{self, SparseVec};
use zigzag::mckay::{mckay_quiver, standard_reps, AbelianGroup};
use zigzag::quiver::Path;
use zigzag::typea::{
    compositions, dim_projective_formula, dual_family, lambda_ds, nakayama_algebra, projective_dims, z_ds, zigzag_presentation,
    FamilyKind,
};
use zigzag::{ArrowSpec, Field, PathCombo, PresentedAlgebra, Quiver, Scalar, VertexLabel};

const Q: Field = Field::Rationals;

fn build_quiver(n: u32, arrows: &[(u32, u32)]) -> Quiver {
    let id = VertexLabel::Id;
    let specs = arrows.iter().enumerate().map(|(k, &(s, t))| ArrowSpec::new(format!("a{k}"), id(s % n + 1), id(t % n + 1), 1)).collect();
    Quiver::new((1..=n).map(id).collect(), specs).unwrap()
}

fn quiver_strategy() -> impl Strategy<Value = Quiver> {
    (1u32..=4, prop::collection::vec((0u32..4, 0u32..4), 0..7)).prop_map(|(n, arrows)| build_quiver(n, &arrows))
}

/// Random quadratic relations: each picks a few length-two paths with a common source and
/// target and small integer coefficients.
fn random_relations(q: &Quiver, picks: &[(usize, i64, usize, i64)], field: Field) -> Vec<PathCombo> {
    let paths = q.enumerate_paths(2);
    if paths.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for &(i, c, j, e) in picks {
        let p = &paths[i % paths.len()];
        let mut combo = vec![(field.from_i64(c), p.clone())];
        let same_ends: Vec<&Path> =
            paths.iter().filter(|r| r.source == p.source && q.path_target(r) == q.path_target(p) && *r != p).collect();
        if !same_ends.is_empty() && e != 0 {
            combo.push((field.from_i64(e), same_ends[j % same_ends.len()].clone()));
        }
        out.push(combo);
    }
    out
}

fn finite_algebra(q: &Quiver, picks: &[(usize, i64, usize, i64)], field: Field) -> PresentedAlgebra {
    let mut rels = random_relations(q, picks, field);
    for p in q.enumerate_paths(3) {
        rels.push(vec![(field.one(), p)]);
    }
    PresentedAlgebra::new(q.clone(), rels, field, None).unwrap()
}

fn picks_strategy() -> impl Strategy<Value = Vec<(usize, i64, usize, i64)>> {
    prop::collection::vec((0usize..64, prop_oneof![Just(1i64), Just(-1), Just(2)], 0usize..8, -2i64..=2), 0..5)
}

fn scalar_strategy(field: Field) -> impl Strategy<Value = Scalar> {
    (-30i64..30, 1i64..12).prop_map(move |(n, d)| match field {
        Field::Rationals => field.ratio(n, d),
        Field::Prime(_) => field.from_i64(n),
    })
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(7)), Just(Field::Prime(1_000_003))]
}

fn type_a_pair() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((1, 2)), Just((1, 3)), Just((1, 4)), Just((2, 2)), Just((2, 3)), Just((3, 2)), Just((2, 4)), Just((3, 3))]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(
        (field, a, b, c) in field_strategy()
            .prop_flat_map(|f| (Just(f), scalar_strategy(f), scalar_strategy(f), scalar_strategy(f)))
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &field.one(), a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn characters_are_multiplicative(orders in prop::collection::vec(2u32..6, 1..3), raw in prop::collection::vec(0u32..30, 9)) {
        let g = AbelianGroup::new(&orders).unwrap();
        let field = g.default_field();
        let pick = |offset: usize| -> Vec<u32> { orders.iter().enumerate().map(|(k, &o)| raw[offset + k] % o).collect() };
        let (chi, x, y) = (pick(0), pick(3), pick(6));
        let lhs = g.character_value(field, &chi, &g.add(&x, &y)).unwrap();
        let rhs = &g.character_value(field, &chi, &x).unwrap() * &g.character_value(field, &chi, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
        let order = g.character_value(field, &chi, &x).unwrap().pow(g.exponent());
        prop_assert!(order.is_one());
    }

    #[test]
    fn nullspace_vectors_are_killed(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 0..6)) {
        let sparse: Vec<SparseVec> = rows
            .iter()
            .map(|r| linalg::collect(r.iter().enumerate().map(|(j, &c)| (j, Q.from_i64(c)))))
            .collect();
        let kernel = linalg::nullspace(&sparse, 6, Q);
        for v in &kernel {
            for r in &sparse {
                prop_assert!(linalg::dot(r, v, Q).is_zero());
            }
        }
        prop_assert_eq!(linalg::rank(&sparse, Q) + kernel.len(), 6);
        prop_assert_eq!(linalg::rank(&kernel, Q), kernel.len());
    }

    #[test]
    fn long_paths_split_into_composable_halves(q in quiver_strategy(), m in 0usize..3, n in 0usize..3) {
        let first = q.enumerate_paths(m);
        let second = q.enumerate_paths(n);
        let composable = first
            .iter()
            .map(|p| second.iter().filter(|r| r.source == q.path_target(p)).count())
            .sum::<usize>();
        prop_assert_eq!(q.enumerate_paths(m + n).len(), composable);
        prop_assert!(q.enumerate_paths(m).iter().all(|p| q.is_path(p) && p.len() == m));
    }

    #[test]
    fn cycles_visit_distinct_vertices(q in quiver_strategy(), n in 1usize..4) {
        for cycle in q.oriented_cycles(n) {
            prop_assert_eq!(cycle.len(), n);
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), n);
            prop_assert_eq!(cycle[0], *cycle.iter().min().unwrap());
            for k in 0..n {
                let (a, b) = (cycle[k], cycle[(k + 1) % n]);
                prop_assert!(q.outgoing(a).iter().any(|&x| q.arrows()[x].target == b));
            }
        }
    }

    #[test]
    fn doubling_doubles_the_arrows(q in quiver_strategy()) {
        let dq = q.doubled();
        prop_assert_eq!(dq.num_arrows(), 2 * q.num_arrows());
        prop_assert_eq!(dq.num_vertices(), q.num_vertices());
        prop_assert_eq!(q.opposite().opposite(), q.clone());
    }

    #[test]
    fn random_algebras_are_associative_and_deterministic(q in quiver_strategy(), picks in picks_strategy()) {
        let p = finite_algebra(&q, &picks, Q);
        let a = &p.algebra;
        prop_assert_eq!(a.associativity_defect(), None);
        let left: usize = (0..a.num_vertices()).map(|v| a.starting_at(v).len()).sum();
        let right: usize = (0..a.num_vertices()).map(|v| a.ending_at(v).len()).sum();
        prop_assert_eq!(left, a.dim());
        prop_assert_eq!(right, a.dim());
        for r in &p.relations {
            prop_assert!(p.eval(r).is_empty());
        }
        let again = finite_algebra(&q, &picks, Q);
        prop_assert_eq!(again.to_text(), p.to_text());
        prop_assert!(again.algebra.same_structure(a));
    }

    #[test]
    fn nested_truncation(q in quiver_strategy(), picks in picks_strategy(), outer in prop::collection::vec(any::<bool>(), 4), inner in prop::collection::vec(any::<bool>(), 4)) {
        let a = finite_algebra(&q, &picks, Q).algebra;
        let n = a.num_vertices();
        let big: Vec<usize> = (0..n).filter(|&v| outer[v]).collect();
        let small: Vec<usize> = big.iter().copied().filter(|&v| inner[v]).collect();
        let (first, _) = a.truncate(&big);
        let positions: Vec<usize> = small.iter().map(|v| big.iter().position(|b| b == v).unwrap()).collect();
        let (nested, _) = first.truncate(&positions);
        let (direct, _) = a.truncate(&small);
        prop_assert!(nested.same_structure(&direct));
        prop_assert_eq!(direct.associativity_defect(), None);
    }

    #[test]
    fn relations_and_orthogonal_fill_degree_two(q in quiver_strategy(), picks in picks_strategy(), field in field_strategy()) {
        let rels = random_relations(&q, &picks, field);
        let p = QuadraticPresentation::new(q, &rels, field).unwrap();
        let d = p.dual();
        prop_assert_eq!(p.relation_dim() + d.relation_dim(), p.paths2().len());
        for r in p.relation_vectors() {
            for o in d.relation_vectors() {
                prop_assert!(p.pairing(&d, o, r).is_zero());
            }
        }
        let back = d.dual();
        prop_assert_eq!(back.relation_vectors(), p.relation_vectors());
    }

    #[test]
    fn extension_forms_are_nondegenerate(q in quiver_strategy(), picks in picks_strategy(), d in 0i64..4) {
        let a = finite_algebra(&q, &picks, Q).algebra;
        let te = d_trivial_extension(&a, d);
        prop_assert_eq!(te.algebra.associativity_defect(), None);
        prop_assert_eq!(te.algebra.dim(), 2 * a.dim());
        prop_assert_eq!(check_extension_form(&te), (true, true));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn found_isomorphisms_are_verified(degrees in prop::collection::vec(1i32..3, 2..4), seed in any::<u64>()) {
        let n = degrees.len();
        let p = nakayama_algebra(n, Some(&degrees), Q).unwrap();
        let mut rotated = degrees.clone();
        rotated.rotate_left(1);
        let target = nakayama_algebra(n, Some(&rotated), Q).unwrap();
        let out = find_graded_isomorphism(&p, &target.algebra, &IsoOptions { seed, ..IsoOptions::default() });
        let zigzag::iso::IsoOutcome::Found(m) = out else {
            return Err(TestCaseError::fail("rotated Nakayama algebras are isomorphic"));
        };
        prop_assert!(m.is_bijective(&target.algebra));
        prop_assert_eq!(m.multiplicative_defect(&p.algebra, &target.algebra), None);
    }

    #[test]
    fn pbw_counts_match_the_algebra(pair in type_a_pair(), seed in any::<u64>()) {
        let (d, s) = pair;
        let t = lambda_ds(d, s, Q).unwrap();
        let p = QuadraticPresentation::from_presented(&t.presentation).unwrap();
        let mut order: Vec<usize> = (0..p.quiver.num_arrows()).collect();
        let mut state = seed;
        for k in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(k, (state >> 33) as usize % (k + 1));
        }
        let c = pbw_candidate(&p, &order);
        let report = pbw_check(&c, &p, &t.presentation).unwrap();
        if report.verdict == PbwVerdict::PbwBasis {
            prop_assert_eq!(report.monomial_counts, report.algebra_counts);
        }
    }

    #[test]
    fn zigzag_has_twice_the_dual_dimension(pair in type_a_pair()) {
        let (d, s) = pair;
        let dual = dual_family(FamilyKind::Lambda, d, s, Q).unwrap();
        prop_assert_eq!(z_ds(d, s, Q).unwrap().algebra.dim(), 2 * dual.presentation.dim());
        for (left, _) in projective_dims(&dual.presentation) {
            prop_assert!(left <= 1 << d);
        }
    }

    #[test]
    fn pi_dual_projectives_match_the_zigzag(pair in type_a_pair()) {
        let (d, s) = pair;
        prop_assume!(s >= 3);
        let dual = dual_family(FamilyKind::Pi, d, s, Q).unwrap();
        let z = zigzag_presentation(d, s, Q).unwrap().presentation;
        let lat = &dual.lattice;
        for (v, (left, _)) in projective_dims(&dual.presentation).into_iter().enumerate() {
            prop_assert!(left <= 1 << (d + 1));
            let w = z.quiver.vertex(&VertexLabel::Tuple(lat.tuple(v).to_vec())).unwrap();
            prop_assert_eq!(left, z.algebra.starting_at(w).len());
        }
    }

    #[test]
    fn projective_formula_matches_enumeration(d in 1usize..=3, s in 1usize..=5) {
        let dual = dual_family(FamilyKind::Lambda, d, s, Q).unwrap();
        for (v, (left, _)) in projective_dims(&dual.presentation).into_iter().enumerate() {
            let y = dual.lattice.tuple(v);
            if let Some(f) = dim_projective_formula(y) {
                prop_assert_eq!(f.left as usize, left, "label {:?}", y);
            }
        }
        prop_assert_eq!(compositions((s - 1) as u32, d + 1).len(), dual.presentation.quiver.num_vertices());
    }

    #[test]
    fn linear_extensions_give_the_coxeter_element(pair in type_a_pair(), picks in prop::collection::vec(any::<usize>(), 32)) {
        let (d, s) = pair;
        let g = group_presentation(&zigzag_presentation(d, s, Q).unwrap().presentation.quiver, d + 1);
        let mut k = 0;
        let w = linear_extension(d, s, |n| {
            k += 1;
            picks[k % picks.len()] % n
        });
        prop_assert_eq!(g.commutation_normal_form(&w), g.commutation_normal_form(&coxeter_word(d, s)));
        for r in &g.relations {
            prop_assert_eq!(r.left.len(), r.right.len());
        }
    }

    #[test]
    fn twist_complexes_square_to_zero(pair in prop_oneof![Just((1usize, 3usize)), Just((2, 2)), Just((2, 3))], word in prop::collection::vec(0usize..16, 1..4)) {
        let (d, s) = pair;
        let a = z_ds(d, s, Q).unwrap().algebra;
        let mut raw = BimoduleComplex::regular();
        let mut reduced = BimoduleComplex::regular();
        for &v in &word {
            let x = spherical_twist_complex(&a, v % a.num_vertices()).unwrap();
            raw = tensor(&a, &raw, &x);
            reduced = minimize(&a, &tensor(&a, &reduced, &x));
            prop_assert!(raw.d_squared_zero(&a));
            prop_assert!(reduced.d_squared_zero(&a));
        }
        prop_assert_eq!(raw.euler_characteristic(&a), reduced.euler_characteristic(&a));
        let again = minimize(&a, &reduced);
        prop_assert_eq!(again.term_multiset(), reduced.term_multiset());
    }

    #[test]
    fn mckay_arrow_counts(orders in prop::collection::vec(2u32..5, 1..3)) {
        let g = AbelianGroup::new(&orders).unwrap();
        for rep in [standard_reps(&g).0, standard_reps(&g).1] {
            let q = mckay_quiver(&g, &rep).unwrap();
            prop_assert_eq!(q.num_vertices(), g.order());
            prop_assert_eq!(q.num_arrows(), g.order() * rep.dim());
        }
    }
}
