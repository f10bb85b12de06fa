use zigzag::algebra::{binomial, monomial};
use zigzag::iso::{find_graded_isomorphism, find_iso_tables, IsoOptions};
use zigzag::linalg;
use zigzag::typea::{lambda_ds, nakayama_algebra, z_ds, zigzag_presentation};
use zigzag::{ArrowSpec, Field, PresentedAlgebra, Quiver, VertexLabel};

const Q: Field = Field::Rationals;

fn loop_algebra(degree: i32) -> PresentedAlgebra {
    let q = Quiver::new(vec![VertexLabel::Id(1)], vec![ArrowSpec::new("x", VertexLabel::Id(1), VertexLabel::Id(1), degree)]).unwrap();
    let rel = monomial(&q, &["x", "x"], Q);
    PresentedAlgebra::new(q, vec![rel], Q, None).unwrap()
}

#[test]
fn single_loop_squared_to_zero_has_dimension_two() {
    for degree in 2..=4 {
        let p = loop_algebra(degree);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.algebra.top_degree(), degree);
    }
}

#[test]
fn lambda_of_size_two_three_is_half_the_zigzag() {
    let l = lambda_ds(2, 3, Q).unwrap();
    assert_eq!(l.presentation.dim(), 15);
    assert_eq!(2 * l.presentation.dim(), zigzag_presentation(2, 3, Q).unwrap().presentation.dim());
}

#[test]
fn two_cycle_mod_length_three_has_dimension_six() {
    assert_eq!(nakayama_algebra(2, None, Q).unwrap().dim(), 6);
}

#[test]
fn structural_invariants_of_presented_algebras() {
    let algebras = vec![
        lambda_ds(2, 3, Q).unwrap().presentation,
        zigzag_presentation(2, 3, Q).unwrap().presentation,
        nakayama_algebra(3, Some(&[1, 2, 1]), Q).unwrap(),
        loop_algebra(3),
    ];
    for p in &algebras {
        let a = &p.algebra;
        assert_eq!(a.associativity_defect(), None);
        let mut sum = Vec::new();
        for v in 0..a.num_vertices() {
            let e = a.idempotent(v);
            assert_eq!(a.mul(&e, &e), e);
            for w in 0..a.num_vertices() {
                if w != v {
                    assert!(a.mul(&e, &a.idempotent(w)).is_empty());
                }
            }
            sum = linalg::add(&sum, &e);
        }
        assert_eq!(sum, a.one());
        for r in &p.relations {
            assert!(p.eval(r).is_empty());
        }
        assert_eq!(a.dims_by_degree().get(&0).copied(), Some(a.num_vertices()));
    }
}

#[test]
fn commuting_and_nonzero_paths_in_the_four_level_zigzag() {
    let z = zigzag_presentation(2, 4, Q).unwrap();
    let p = &z.presentation;
    let lat = z.lattice.as_ref().unwrap();
    let at = |t: &[u32], dirs: &[usize]| {
        let v = lat.quiver.vertex(&VertexLabel::Tuple(t.to_vec())).unwrap();
        let path = lat.walk(v, dirs).unwrap();
        p.nf_path(&path)
    };
    let a = at(&[2, 1, 0], &[1, 2]);
    let b = at(&[2, 1, 0], &[2, 1]);
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(!at(&[3, 0, 0], &[1, 2]).is_empty());
}

#[test]
fn truncating_to_all_vertices_changes_nothing() {
    let a = zigzag_presentation(2, 3, Q).unwrap().presentation.algebra;
    let all: Vec<usize> = (0..a.num_vertices()).collect();
    let (t, map) = a.truncate(&all);
    assert_eq!(map, (0..a.dim()).collect::<Vec<_>>());
    assert!(t.same_structure(&a));
}

#[test]
fn nakayama_corners_are_smaller_nakayama_algebras() {
    let n = 5;
    let big = nakayama_algebra(n, None, Q).unwrap().algebra;
    for subset in [vec![0, 1], vec![0, 2], vec![1, 2, 4], vec![0, 1, 2, 3], vec![0, 2, 3]] {
        let (corner, _) = big.truncate(&subset);
        let m = subset.len();
        let gaps: Vec<i32> = (0..m)
            .map(|k| if k + 1 < m { (subset[k + 1] - subset[k]) as i32 } else { (n + subset[0] - subset[m - 1]) as i32 })
            .collect();
        let small = nakayama_algebra(m, Some(&gaps), Q).unwrap();
        assert!(find_graded_isomorphism(&small, &corner, &IsoOptions::default()).is_found(), "{subset:?}");
    }
}

#[test]
fn zigzag_corners_at_high_coordinate_are_smaller_zigzags() {
    for (d, s, coord, n) in [(1, 3, 0, 1), (2, 3, 0, 1), (2, 3, 2, 1), (2, 4, 1, 2)] {
        let big = z_ds(d, s, Q).unwrap().algebra;
        let keep: Vec<usize> = (0..big.num_vertices())
            .filter(|&v| big.vertices[v].tuple().unwrap()[coord] >= n as u32)
            .collect();
        let (corner, _) = big.truncate(&keep);
        let small = z_ds(d, s - n, Q).unwrap().algebra;
        assert_eq!(corner.dim(), small.dim(), "({d},{s}) y_{coord} >= {n}");
        assert!(find_iso_tables(&small, &corner, &IsoOptions::default()).is_found(), "({d},{s}) y_{coord} >= {n}");
    }
}

#[test]
fn killing_a_face_of_lambda_lowers_the_level() {
    for (d, s) in [(1, 3), (2, 2), (2, 3), (3, 3)] {
        let l = lambda_ds(d, s, Q).unwrap().presentation;
        let kill: Vec<usize> = (0..l.quiver.num_vertices())
            .filter(|&v| l.quiver.vertices()[v].tuple().unwrap()[0] == 0)
            .collect();
        let quotient = l.quotient_by_idempotent(&kill).unwrap();
        let smaller = lambda_ds(d, s - 1, Q).unwrap().presentation;
        assert_eq!(quotient.dim(), smaller.dim(), "({d},{s})");
        assert!(find_graded_isomorphism(&quotient, &smaller.algebra, &IsoOptions::default()).is_found());
    }
    let l = lambda_ds(2, 2, Q).unwrap().presentation;
    let quotient = l.quotient_by_idempotent(&[]).unwrap();
    assert_eq!(quotient.dim(), l.dim());
}

#[test]
fn isomorphism_search_finds_identity_and_respects_relations() {
    let z = zigzag_presentation(1, 3, Q).unwrap().presentation;
    assert!(find_graded_isomorphism(&z, &z.algebra, &IsoOptions::default()).is_found());
    let l = lambda_ds(1, 3, Q).unwrap().presentation;
    assert!(!find_graded_isomorphism(&l, &z.algebra, &IsoOptions::default()).is_found());
}

#[test]
fn binomial_relations_identify_paths() {
    let verts = (1..=4).map(VertexLabel::Id).collect();
    let q = Quiver::new(
        verts,
        vec![
            ArrowSpec::new("a", VertexLabel::Id(1), VertexLabel::Id(2), 1),
            ArrowSpec::new("b", VertexLabel::Id(2), VertexLabel::Id(4), 1),
            ArrowSpec::new("c", VertexLabel::Id(1), VertexLabel::Id(3), 1),
            ArrowSpec::new("d", VertexLabel::Id(3), VertexLabel::Id(4), 1),
        ],
    )
    .unwrap();
    let square = binomial(&q, &["a", "b"], &["c", "d"], Q);
    let p = PresentedAlgebra::new(q, vec![square], Q, None).unwrap();
    assert_eq!(p.dim(), 4 + 4 + 1);
    assert_eq!(p.element(&["a", "b"]), p.element(&["c", "d"]));
}

#[test]
fn presented_text_round_trips() {
    let p = zigzag_presentation(2, 3, Q).unwrap().presentation;
    let again = PresentedAlgebra::from_text(&p.to_text()).unwrap();
    assert_eq!(again.dim(), p.dim());
    assert_eq!(again.to_text(), p.to_text());
}
