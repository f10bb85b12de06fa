//! Small named algebras used as fixtures by the checks and the command line.

use crate::algebra::{binomial, monomial, PresentedAlgebra};
use crate::error::Result;
use crate::frobenius::{d_trivial_extension, trivial_extension};
use crate::iso::{find_graded_isomorphism, IsoOptions, IsoOutcome};
use crate::koszul::QuadraticPresentation;
use crate::quiver::{ArrowSpec, Path, Quiver, VertexLabel};
use crate::scalar::Field;

/// The exterior algebra on `m` generators `x1, …, xm` at one vertex.
pub fn exterior_algebra(m: usize, field: Field) -> Result<PresentedAlgebra> {
    let v = VertexLabel::Id(1);
    let specs = (1..=m).map(|k| ArrowSpec::new(format!("x{k}"), v.clone(), v.clone(), 1)).collect();
    let q = Quiver::new(vec![v], specs)?;
    let mut rels = Vec::new();
    for i in 0..m {
        rels.push(vec![(field.one(), Path { source: 0, arrows: vec![i, i] })]);
        for j in i + 1..m {
            rels.push(vec![(field.one(), Path { source: 0, arrows: vec![i, j] }), (field.one(), Path { source: 0, arrows: vec![j, i] })]);
        }
    }
    PresentedAlgebra::new(q, rels, field, None)
}

/// The polynomial algebra on `m` commuting generators at one vertex, as quadratic data.
pub fn polynomial_quadratic(m: usize, field: Field) -> Result<QuadraticPresentation> {
    let v = VertexLabel::Id(1);
    let specs = (1..=m).map(|k| ArrowSpec::new(format!("y{k}"), v.clone(), v.clone(), 1)).collect();
    let q = Quiver::new(vec![v], specs)?;
    let mut rels = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            rels.push(vec![(field.one(), Path { source: 0, arrows: vec![i, j] }), (field.from_i64(-1), Path { source: 0, arrows: vec![j, i] })]);
        }
    }
    QuadraticPresentation::new(q, &rels, field)
}

/// Five vertices with `alpha: 1→2`, `beta: 2→3`, `gamma: 3→5`, `delta: 2→4`, `epsilon: 4→5`
/// and relations `alpha delta = 0`, `beta gamma = delta epsilon`.
pub fn two_ordering_example(field: Field) -> Result<QuadraticPresentation> {
    let id = VertexLabel::Id;
    let q = Quiver::new(
        (1..=5).map(id).collect(),
        vec![
            ArrowSpec::new("alpha", id(1), id(2), 1),
            ArrowSpec::new("beta", id(2), id(3), 1),
            ArrowSpec::new("gamma", id(3), id(5), 1),
            ArrowSpec::new("delta", id(2), id(4), 1),
            ArrowSpec::new("epsilon", id(4), id(5), 1),
        ],
    )?;
    let rels = vec![monomial(&q, &["alpha", "delta"], field), binomial(&q, &["beta", "gamma"], &["delta", "epsilon"], field)];
    QuadraticPresentation::new(q, &rels, field)
}

/// The oriented 3-cycle `1 → 2 → 3 → 1` without relations.
pub fn three_cycle(field: Field) -> Result<QuadraticPresentation> {
    let id = VertexLabel::Id;
    let q = Quiver::new(
        (1..=3).map(id).collect(),
        vec![
            ArrowSpec::new("a1", id(1), id(2), 1),
            ArrowSpec::new("a2", id(2), id(3), 1),
            ArrowSpec::new("a3", id(3), id(1), 1),
        ],
    )?;
    QuadraticPresentation::new(q, &[], field)
}

/// Compares the sign-twisted extension `Z_2(FQ)` of the 3-cycle with the plain trivial
/// extension of `(FQ)^!`; the answer depends on the characteristic.
pub fn three_cycle_zigzag_vs_trivial(field: Field, seed: u64) -> Result<IsoOutcome> {
    let dual = three_cycle(field)?.dual().present(None)?;
    let signed = d_trivial_extension(&dual.algebra, 1);
    let plain = trivial_extension(&dual.algebra);
    let (source, _) = signed.present()?;
    Ok(find_graded_isomorphism(&source, &plain.algebra, &IsoOptions { seed, ..IsoOptions::default() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_dimensions() {
        let f = Field::Rationals;
        assert_eq!(two_ordering_example(f).unwrap().present(None).unwrap().dim(), 5 + 5 + 2);
        assert_eq!(exterior_algebra(3, f).unwrap().dim(), 8);
        assert_eq!(polynomial_quadratic(2, f).unwrap().present(Some(3)).unwrap().dim(), 1 + 2 + 3 + 4);
    }

    #[test]
    fn sign_obstruction_depends_on_characteristic() {
        assert!(three_cycle_zigzag_vs_trivial(Field::Rationals, 1).unwrap().is_refuted());
        assert!(three_cycle_zigzag_vs_trivial(Field::Prime(2), 1).unwrap().is_found());
    }
}
