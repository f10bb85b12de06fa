use zigzag::algebra::monomial;
use zigzag::corpus::{exterior_algebra, polynomial_quadratic};
use zigzag::frobenius::{
    check_extension_form, d_trivial_extension, frobenius_analyze, socle_functional, trivial_extension, twisted_trivial_extension,
    vee_star_compare, zigzag, LeftModule, TwistedRegular,
};
use zigzag::iso::{find_graded_isomorphism, find_iso_tables, IsoOptions};
use zigzag::koszul::QuadraticPresentation;
use zigzag::linalg::{self, SparseVec};
use zigzag::typea::{lambda_ds, nakayama_algebra, tau, z_ds, zigzag_presentation};
use zigzag::{Algebra, ArrowSpec, Field, PresentedAlgebra, Quiver, VertexLabel};

const Q: Field = Field::Rationals;

fn id(k: u32) -> VertexLabel {
    VertexLabel::Id(k)
}

fn line(n: u32) -> Quiver {
    Quiver::new((1..=n).map(id).collect(), (1..n).map(|k| ArrowSpec::new(format!("a{k}"), id(k), id(k + 1), 1)).collect()).unwrap()
}

fn path_algebra(n: u32) -> PresentedAlgebra {
    PresentedAlgebra::new(line(n), Vec::new(), Q, None).unwrap()
}

fn point() -> PresentedAlgebra {
    PresentedAlgebra::new(Quiver::new(vec![id(1)], Vec::new()).unwrap(), Vec::new(), Q, None).unwrap()
}

fn dual_numbers(degree: i32) -> PresentedAlgebra {
    let q = Quiver::new(vec![id(1)], vec![ArrowSpec::new("x", id(1), id(1), degree)]).unwrap();
    PresentedAlgebra::new(q.clone(), vec![monomial(&q, &["x", "x"], Q)], Q, None).unwrap()
}

fn identity_columns(a: &Algebra) -> Vec<SparseVec> {
    (0..a.dim()).map(|i| linalg::unit(i, a.field)).collect()
}

fn count_dual(a: &Algebra, base_dim: usize, i: usize, j: usize) -> usize {
    a.block(i, j).iter().filter(|&&k| k >= base_dim).count()
}

#[test]
fn dual_of_a_path_algebra_transposes_blocks() {
    let a = path_algebra(3).algebra;
    let te = trivial_extension(&a);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(count_dual(&te.algebra, te.base_dim, i, j), a.block(j, i).len());
        }
    }
    let single = trivial_extension(&point().algebra);
    assert_eq!((single.algebra.dim(), single.base_dim), (2, 1));
}

#[test]
fn trivial_extension_of_the_field_is_the_dual_numbers() {
    let te = trivial_extension(&point().algebra);
    assert!(find_graded_isomorphism(&dual_numbers(1), &te.algebra, &IsoOptions::default()).is_found());
    for d in 1..=4 {
        let te = d_trivial_extension(&point().algebra, d);
        assert!(find_graded_isomorphism(&dual_numbers(d as i32 + 1), &te.algebra, &IsoOptions::default()).is_found());
    }
}

#[test]
fn trivial_extension_of_a_line_is_nakayama() {
    for n in 1..=4 {
        let te = trivial_extension(&path_algebra(n).algebra);
        let cyclic = nakayama_algebra(n as usize, None, Q).unwrap();
        assert!(find_graded_isomorphism(&cyclic, &te.algebra, &IsoOptions::default()).is_found(), "n = {n}");
    }
}

#[test]
fn corner_of_trivial_extension_is_trivial_extension_of_corner() {
    let base = lambda_ds(2, 3, Q).unwrap().presentation.algebra;
    let shift = base.top_degree() + 1;
    let whole = twisted_trivial_extension(&base, None, shift).unwrap();
    for verts in [vec![0, 1], vec![0, 2, 5], vec![1, 3, 4, 5], vec![2]] {
        let (corner, _) = base.truncate(&verts);
        let te_corner = twisted_trivial_extension(&corner, None, shift).unwrap();
        let (corner_te, _) = whole.algebra.truncate(&verts);
        assert_eq!(te_corner.algebra.dim(), corner_te.dim());
        assert!(find_iso_tables(&te_corner.algebra, &corner_te, &IsoOptions::default()).is_found(), "{verts:?}");
    }
}

#[test]
fn identity_twist_is_the_plain_extension() {
    let a = lambda_ds(2, 3, Q).unwrap().presentation.algebra;
    let plain = trivial_extension(&a);
    let ident = identity_columns(&a);
    let twisted = twisted_trivial_extension(&a, Some(&ident), a.top_degree() + 1).unwrap();
    assert!(twisted.algebra.same_structure(&plain.algebra));
}

#[test]
fn even_sign_twist_is_untwisted() {
    let a = QuadraticPresentation::new(line(3), &[], Q).unwrap().dual().present(None).unwrap().algebra;
    for d in [2, 4] {
        let signed = d_trivial_extension(&a, d);
        let plain = twisted_trivial_extension(&a, None, d as i32 + 1).unwrap();
        assert!(signed.algebra.same_structure(&plain.algebra));
    }
}

#[test]
fn inner_twist_gives_an_isomorphic_extension() {
    let a = lambda_ds(2, 3, Q).unwrap().presentation.algebra;
    let scale: Vec<i64> = (0..a.num_vertices() as i64).map(|v| v + 2).collect();
    let twist: Vec<SparseVec> = (0..a.dim())
        .map(|i| {
            let b = &a.basis[i];
            vec![(i, Q.ratio(scale[b.source], scale[b.target]))]
        })
        .collect();
    let twisted = twisted_trivial_extension(&a, Some(&twist), 4).unwrap();
    let plain = twisted_trivial_extension(&a, None, 4).unwrap();
    assert!(twisted.algebra.associativity_defect().is_none());
    assert!(find_iso_tables(&twisted.algebra, &plain.algebra, &IsoOptions::default()).is_found());
}

#[test]
fn odd_sign_twist_is_harmless_on_bipartite_quivers() {
    let id = VertexLabel::Id;
    let zigzag_line = Quiver::new(
        (1..=4).map(id).collect(),
        vec![ArrowSpec::new("a", id(1), id(2), 1), ArrowSpec::new("b", id(3), id(2), 1), ArrowSpec::new("c", id(3), id(4), 1)],
    )
    .unwrap();
    for q in [line(3), line(4), zigzag_line] {
        let a = QuadraticPresentation::new(q, &[], Q).unwrap().dual().present(None).unwrap().algebra;
        for d in [1, 3] {
            let signed = d_trivial_extension(&a, d);
            let plain = twisted_trivial_extension(&a, None, d as i32 + 1).unwrap();
            assert!(find_iso_tables(&signed.algebra, &plain.algebra, &IsoOptions::default()).is_found());
        }
    }
}

#[test]
fn extension_of_an_exterior_algebra_is_exterior() {
    for d in 1..=3 {
        let e = exterior_algebra(d, Q).unwrap();
        let te = d_trivial_extension(&e.algebra, d as i64);
        assert_eq!(te.algebra.dim(), 1 << (d + 1));
        let bigger = exterior_algebra(d + 1, Q).unwrap();
        assert!(find_graded_isomorphism(&bigger, &te.algebra, &IsoOptions::default()).is_found(), "d = {d}");
        let (_, from_poly) = zigzag(&polynomial_quadratic(d, Q).unwrap(), d as i64, None).unwrap();
        assert!(find_graded_isomorphism(&bigger, &from_poly.algebra, &IsoOptions::default()).is_found());
    }
}

#[test]
fn zigzag_of_lambda_two_three_has_dimension_thirty() {
    let p = QuadraticPresentation::from_presented(&lambda_ds(2, 3, Q).unwrap().presentation).unwrap();
    let (dual, z) = zigzag(&p, 2, None).unwrap();
    assert_eq!(z.algebra.dim(), 30);
    assert_eq!(z.algebra.dim(), 2 * dual.dim());
}

#[test]
fn zigzag_algebras_are_symmetric_with_parameter_d_plus_one() {
    for (d, s) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
        let z = z_ds(d, s, Q).unwrap();
        let fd = frobenius_analyze(&z.algebra, Some(&z.functional()), 1).unwrap();
        assert!(fd.frobenius && fd.nondegenerate, "({d},{s})");
        assert!(fd.symmetric || fd.nakayama_inner, "({d},{s})");
        assert_eq!(fd.gorenstein, Some(d as i32 + 1), "({d},{s})");
    }
}

#[test]
fn sign_twisted_extensions_have_involutive_nakayama() {
    for (d, s) in [(1, 3), (2, 2), (2, 3)] {
        let p = QuadraticPresentation::from_presented(&lambda_ds(d, s, Q).unwrap().presentation).unwrap();
        let (_, z) = zigzag(&p, d as i64, None).unwrap();
        assert_eq!(check_extension_form(&z), (true, true), "({d},{s})");
        let fd = frobenius_analyze(&z.algebra, Some(&z.functional()), 1).unwrap();
        assert!(fd.nakayama_squared_identity && fd.nakayama_is_algebra_map);
    }
}

#[test]
fn path_algebra_of_a_line_is_not_frobenius() {
    let fd = frobenius_analyze(&path_algebra(2).algebra, None, 1).unwrap();
    assert!(!fd.frobenius);
    assert!(fd.reason.is_some());
}

#[test]
fn homs_into_a_symmetric_algebra_match_shifted_duals() {
    let z = zigzag_presentation(1, 2, Q).unwrap().presentation.algebra;
    let (t, _, top) = socle_functional(&z).unwrap();
    let top = top.unwrap();
    let mut modules = vec![LeftModule::regular(&z)];
    for v in 0..z.num_vertices() {
        modules.push(LeftModule::projective(v));
        modules.push(LeftModule::simple(&z, v));
    }
    for m in &modules {
        let r = vee_star_compare(&z, m, &t, top);
        assert!(r.holds, "{m:?}: {r:?}");
    }
}

#[test]
fn twisted_regular_bimodule_blocks_follow_the_twist() {
    let zp = zigzag_presentation(1, 2, Q).unwrap();
    let a = &zp.presentation.algebra;
    let phi = tau(&zp).unwrap();
    assert_eq!(phi.vertex_map, vec![1, 0]);
    let m = TwistedRegular::new(a, &phi.matrix, false).unwrap();
    let blocks = m.block_dims(a, &phi.vertex_map);
    for x in 0..a.num_vertices() {
        for y in 0..a.num_vertices() {
            let images: Vec<SparseVec> = (0..a.dim())
                .map(|k| m.act(a, &a.idempotent(x), &linalg::unit(k, a.field), &a.idempotent(y)))
                .filter(|v| !v.is_empty())
                .collect();
            let direct = linalg::rank(&images, a.field);
            assert_eq!(direct, blocks[x][y]);
            assert_eq!(direct, a.block(x, phi.vertex_map[y]).len());
        }
    }
    let plain = TwistedRegular::new(a, &identity_columns(a), true).unwrap();
    let ids: Vec<usize> = (0..a.num_vertices()).collect();
    for x in 0..a.num_vertices() {
        for y in 0..a.num_vertices() {
            assert_eq!(plain.block_dims(a, &ids)[x][y], a.block(x, y).len());
        }
    }
}
