//! Quadratic presentations, quadratic duals, PBW certificates, associated graded algebras
//! and a linear-resolution probe.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::algebra::{Algebra, PathCombo, PresentOptions, PresentedAlgebra, WeightMode};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::quiver::{Path, Quiver};
use crate::scalar::Field;

/// A quiver with a subspace of relations inside the span of its length-two paths.
#[derive(Clone, Debug)]
pub struct QuadraticPresentation {
    pub quiver: Quiver,
    pub field: Field,
    paths2: Vec<Path>,
    index: HashMap<Path, usize>,
    relations: Vec<SparseVec>,
}

impl QuadraticPresentation {
    pub fn new(quiver: Quiver, relations: &[PathCombo], field: Field) -> Result<QuadraticPresentation> {
        let paths2 = quiver.enumerate_paths(2);
        let index: HashMap<Path, usize> = paths2.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut ech = Echelon::new(field);
        for r in relations {
            let mut acc = linalg::Accumulator::new();
            for (c, p) in r {
                let i = *index
                    .get(p)
                    .ok_or_else(|| Error::Invalid(format!("not a length-two path: {}", quiver.path_name(p))))?;
                acc.add_term(i, c.clone());
            }
            let v = acc.finish();
            if !v.is_empty() {
                ech.insert(&v);
            }
        }
        ech.make_reduced();
        let relations = ech.rows().map(|(_, r)| r.clone()).collect();
        Ok(QuadraticPresentation { quiver, field, paths2, index, relations })
    }

    pub fn from_presented(a: &PresentedAlgebra) -> Result<QuadraticPresentation> {
        if !a.is_quadratic() || a.quiver.arrows().iter().any(|x| x.degree != 1) {
            return Err(Error::Invalid("presentation is not quadratic".into()));
        }
        Self::new(a.quiver.clone(), &a.relations, a.field())
    }

    pub fn paths2(&self) -> &[Path] {
        &self.paths2
    }

    pub fn relation_vectors(&self) -> &[SparseVec] {
        &self.relations
    }

    pub fn relation_dim(&self) -> usize {
        self.relations.len()
    }

    pub fn path_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn relation_combos(&self) -> Vec<PathCombo> {
        self.relations
            .iter()
            .map(|r| r.iter().map(|(i, c)| (c.clone(), self.paths2[*i].clone())).collect())
            .collect()
    }

    pub fn present(&self, bound: Option<u32>) -> Result<PresentedAlgebra> {
        PresentedAlgebra::with_options(
            self.quiver.clone(),
            self.relation_combos(),
            self.field,
            PresentOptions { bound, mode: Some(WeightMode::Length), ..Default::default() },
        )
    }

    /// Index of the dual path `b* a*` in the opposite quiver for each path `a b`.
    fn dual_path_map(&self, op: &Quiver, op_index: &HashMap<Path, usize>) -> Vec<usize> {
        self.paths2
            .iter()
            .map(|p| {
                let (a, b) = (p.arrows[0], p.arrows[1]);
                let qa = &self.quiver.arrows()[a];
                let qb = &self.quiver.arrows()[b];
                let sa = op.arrow(&crate::quiver::star(&qa.name)).expect("dual arrow");
                let sb = op.arrow(&crate::quiver::star(&qb.name)).expect("dual arrow");
                op_index[&Path { source: qb.target, arrows: vec![sb, sa] }]
            })
            .collect()
    }

    /// The quadratic dual: opposite quiver with starred arrows and the orthogonal complement
    /// of the relations, where the dual path `b* a*` pairs to one with `a b`.
    pub fn dual(&self) -> QuadraticPresentation {
        let op = self.quiver.opposite();
        let op_paths = op.enumerate_paths(2);
        let op_index: HashMap<Path, usize> = op_paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let map = self.dual_path_map(&op, &op_index);
        let rows: Vec<SparseVec> = self
            .relations
            .iter()
            .map(|r| linalg::collect(r.iter().map(|(i, c)| (map[*i], c.clone()))))
            .collect();
        let perp = linalg::nullspace(&rows, op_paths.len(), self.field);
        let combos: Vec<PathCombo> = perp
            .iter()
            .map(|v| v.iter().map(|(i, c)| (c.clone(), op_paths[*i].clone())).collect())
            .collect();
        QuadraticPresentation::new(op, &combos, self.field).expect("dual relations are length two")
    }

    /// Pairing of a dual-side vector with a vector of this presentation.
    pub fn pairing(&self, dual: &QuadraticPresentation, x: &SparseVec, y: &SparseVec) -> crate::scalar::Scalar {
        let map = self.dual_path_map(&dual.quiver, &dual.index);
        let mapped = linalg::collect(y.iter().map(|(i, c)| (map[*i], c.clone())));
        linalg::dot(x, &mapped, self.field)
    }

    /// Arrow order given by names, smallest first.
    pub fn order_from_names(&self, names: &[&str]) -> Result<Vec<usize>> {
        let order: Vec<usize> = names
            .iter()
            .map(|n| self.quiver.arrow(n).ok_or_else(|| Error::Invalid(format!("unknown arrow {n}"))))
            .collect::<Result<_>>()?;
        if order.len() != self.quiver.num_arrows() || order.iter().collect::<HashSet<_>>().len() != order.len() {
            return Err(Error::Invalid("order must list every arrow exactly once".into()));
        }
        Ok(order)
    }
}

/// Standard monomials of degrees two and three for a total arrow order.
#[derive(Clone, Debug)]
pub struct PbwCandidate {
    pub order: Vec<usize>,
    pub b2: Vec<Path>,
    pub b3: Vec<Path>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PbwVerdict {
    PbwBasis,
    NotPbw,
}

#[derive(Clone, Debug)]
pub struct PbwReport {
    pub verdict: PbwVerdict,
    pub b2: usize,
    pub b3: usize,
    /// Σ_i |B_i| per degree, compared with the algebra when the verdict is positive.
    pub monomial_counts: Vec<usize>,
    pub algebra_counts: Vec<usize>,
    pub certificate: Option<String>,
}

fn rank_of(order: &[usize]) -> Vec<usize> {
    let mut rank = vec![0; order.len()];
    for (pos, &a) in order.iter().enumerate() {
        rank[a] = pos;
    }
    rank
}

/// `B_2`: length-two paths that are not leading terms of the relation space, where a leading
/// term is the largest path in the lexicographic extension of the arrow order.
pub fn pbw_candidate(p: &QuadraticPresentation, order: &[usize]) -> PbwCandidate {
    let rank = rank_of(order);
    let mut sorted: Vec<usize> = (0..p.paths2.len()).collect();
    sorted.sort_by_key(|&i| (rank[p.paths2[i].arrows[0]], rank[p.paths2[i].arrows[1]]));
    let mut pos = vec![0; sorted.len()];
    for (k, &i) in sorted.iter().enumerate() {
        pos[i] = k;
    }
    let mut ech = Echelon::new(p.field);
    for r in &p.relations {
        ech.insert(&linalg::collect(r.iter().map(|(i, c)| (pos[*i], c.clone()))));
    }
    let b2: Vec<Path> = sorted.iter().filter(|&&i| !ech.is_pivot(pos[i])).map(|&i| p.paths2[i].clone()).collect();
    let b2set: HashSet<(usize, usize)> = b2.iter().map(|q| (q.arrows[0], q.arrows[1])).collect();
    let b3 = extend_by_subpaths(&p.quiver, &b2set, 3, &rank);
    PbwCandidate { order: order.to_vec(), b2, b3 }
}

fn extend_by_subpaths(q: &Quiver, b2: &HashSet<(usize, usize)>, len: usize, rank: &[usize]) -> Vec<Path> {
    let mut out: Vec<Path> = q
        .enumerate_paths(len)
        .into_iter()
        .filter(|p| p.arrows.windows(2).all(|w| b2.contains(&(w[0], w[1]))))
        .collect();
    out.sort_by_key(|p| p.arrows.iter().map(|&a| rank[a]).collect::<Vec<_>>());
    out
}

/// The PBW verdict: `B_3` linearly independent in the algebra.
pub fn pbw_check(c: &PbwCandidate, p: &QuadraticPresentation, a: &PresentedAlgebra) -> Result<PbwReport> {
    if a.quiver != p.quiver {
        return Err(Error::Invalid("algebra and presentation have different quivers".into()));
    }
    let images: Vec<SparseVec> = c.b3.iter().map(|x| a.nf_path(x)).collect();
    let independent = images.iter().all(|v| !v.is_empty()) && linalg::rank(&images, a.field()) == images.len();
    let b2set: HashSet<(usize, usize)> = c.b2.iter().map(|q| (q.arrows[0], q.arrows[1])).collect();
    let rank = rank_of(&c.order);
    let by_deg = graded_counts(&a.algebra);
    let mut monomial_counts = Vec::new();
    for k in 0..by_deg.len().max(4) {
        let n = match k {
            0 => p.quiver.num_vertices(),
            1 => p.quiver.num_arrows(),
            _ => extend_by_subpaths(&p.quiver, &b2set, k, &rank).len(),
        };
        monomial_counts.push(n);
        if k >= by_deg.len() && n == 0 {
            break;
        }
    }
    let mut algebra_counts = by_deg.clone();
    algebra_counts.resize(monomial_counts.len(), 0);
    let verdict = if independent { PbwVerdict::PbwBasis } else { PbwVerdict::NotPbw };
    let certificate = independent.then(|| {
        format!(
            "B3 of size {} is independent in degree 3; monomial counts {:?} match algebra counts {:?}",
            c.b3.len(),
            monomial_counts,
            algebra_counts
        )
    });
    Ok(PbwReport { verdict, b2: c.b2.len(), b3: c.b3.len(), monomial_counts, algebra_counts, certificate })
}

fn graded_counts(a: &Algebra) -> Vec<usize> {
    let m = a.dims_by_degree();
    let top = m.keys().copied().max().unwrap_or(0).max(0) as usize;
    (0..=top).map(|k| m.get(&(k as i32)).copied().unwrap_or(0)).collect()
}

/// The leading-term algebra for an arrow order.
#[derive(Clone, Debug)]
pub struct AssociatedGraded {
    pub algebra: PresentedAlgebra,
    /// Minimal monomial relations: non-standard paths whose proper subpaths are standard.
    pub obstructions: Vec<Path>,
    pub quadratic: bool,
}

/// Builds the algebra with the given arrow order so its basis is the set of standard
/// monomials, then presents the monomial algebra on those monomials.
pub fn associated_graded(p: &QuadraticPresentation, order: &[usize], bound: Option<u32>) -> Result<AssociatedGraded> {
    let a = PresentedAlgebra::with_options(
        p.quiver.clone(),
        p.relation_combos(),
        p.field,
        PresentOptions { bound, arrow_order: Some(order.to_vec()), mode: Some(WeightMode::Length) },
    )?;
    let standard: HashSet<&Path> = a.basis_paths.iter().collect();
    let q = &p.quiver;
    let mut obstructions = Vec::new();
    for b in &a.basis_paths {
        if b.arrows.is_empty() {
            continue;
        }
        if let Some(lim) = bound {
            if b.len() as u32 >= lim {
                continue;
            }
        }
        let t = q.path_target(b);
        for &x in q.outgoing(t) {
            let mut arrows = b.arrows.clone();
            arrows.push(x);
            let ext = Path { source: b.source, arrows };
            if standard.contains(&ext) {
                continue;
            }
            let tail = Path { source: q.arrows()[ext.arrows[0]].target, arrows: ext.arrows[1..].to_vec() };
            if standard.contains(&tail) {
                obstructions.push(ext);
            }
        }
    }
    let rank = rank_of(order);
    obstructions.sort_by_key(|x| (x.len(), x.arrows.iter().map(|&a| rank[a]).collect::<Vec<_>>()));
    let quadratic = obstructions.iter().all(|x| x.len() == 2);
    let rels: Vec<PathCombo> = obstructions.iter().map(|x| vec![(p.field.one(), x.clone())]).collect();
    let algebra = PresentedAlgebra::with_options(
        q.clone(),
        rels,
        p.field,
        PresentOptions { bound, arrow_order: Some(order.to_vec()), mode: Some(WeightMode::Length) },
    )?;
    Ok(AssociatedGraded { algebra, obstructions, quadratic })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolutionVerdict {
    /// The first `k` syzygies are generated in the expected degrees.
    LinearTo(usize),
    /// The term in this homological degree has a generator in the wrong degree.
    FailsAt(usize),
}

/// A submodule of a graded free right module `⊕_k e_{v_k} A` given by homogeneous vectors.
struct FreeModule {
    gens: Vec<(usize, i32)>,
    offsets: Vec<usize>,
    dim: usize,
}

impl FreeModule {
    fn new(a: &Algebra, gens: Vec<(usize, i32)>) -> FreeModule {
        let mut offsets = Vec::with_capacity(gens.len());
        let mut dim = 0;
        for (v, _) in &gens {
            offsets.push(dim);
            dim += a.starting_at(*v).len();
        }
        FreeModule { gens, offsets, dim }
    }

    /// (generator, basis element of A) for a coordinate.
    fn locate(&self, a: &Algebra, i: usize) -> (usize, usize) {
        let k = match self.offsets.binary_search(&i) {
            Ok(mut k) => {
                while k + 1 < self.offsets.len() && self.offsets[k + 1] == i {
                    k += 1;
                }
                k
            }
            Err(k) => k - 1,
        };
        (k, a.starting_at(self.gens[k].0)[i - self.offsets[k]])
    }

    fn coord(&self, a: &Algebra, k: usize, b: usize) -> usize {
        let list = a.starting_at(self.gens[k].0);
        self.offsets[k] + list.iter().position(|&x| x == b).expect("basis element in projective")
    }

    fn degree_target(&self, a: &Algebra, i: usize) -> (i32, usize) {
        let (k, b) = self.locate(a, i);
        (self.gens[k].1 + a.basis[b].degree, a.basis[b].target)
    }

    fn right_mul(&self, a: &Algebra, v: &SparseVec, r: usize) -> SparseVec {
        let mut acc = linalg::Accumulator::new();
        for (i, c) in v {
            let (k, b) = self.locate(a, *i);
            if let Some(p) = a.mul_basis(b, r) {
                for (j, d) in p {
                    acc.add_term(self.coord(a, k, *j), c * d);
                }
            }
        }
        acc.finish()
    }
}

/// Minimal graded projective resolution of `A/rad A` as a right module, checking that the
/// `i`-th term is generated in degree `i`.
pub fn linear_resolution_probe(a: &Algebra, steps: usize) -> Result<ResolutionVerdict> {
    for i in 0..a.dim() {
        if !a.is_idempotent_index(i) && a.basis[i].degree < 1 {
            return Err(Error::Unsupported("probe needs a positively graded radical".into()));
        }
    }
    let field = a.field;
    let rad: Vec<usize> = (0..a.dim()).filter(|&i| !a.is_idempotent_index(i)).collect();
    // Term 0 and its kernel: the radical of ⊕_v e_v A.
    let mut free = FreeModule::new(a, (0..a.num_vertices()).map(|v| (v, 0)).collect());
    let mut kernel: Vec<SparseVec> = (0..free.dim)
        .filter(|&i| {
            let (_, b) = free.locate(a, i);
            !a.is_idempotent_index(b)
        })
        .map(|i| linalg::unit(i, field))
        .collect();
    for step in 1..=steps {
        if kernel.is_empty() {
            return Ok(ResolutionVerdict::LinearTo(steps));
        }
        // Top of the kernel: complement of kernel·rad, per (degree, target vertex).
        let mut blocks: BTreeMap<(i32, usize), Vec<SparseVec>> = BTreeMap::new();
        for v in &kernel {
            let key = free.degree_target(a, v[0].0);
            blocks.entry(key).or_default().push(v.clone());
        }
        let mut radpart: BTreeMap<(i32, usize), Echelon> = BTreeMap::new();
        for v in &kernel {
            let tv = free.degree_target(a, v[0].0).1;
            for &r in &rad {
                if a.basis[r].source != tv {
                    continue;
                }
                let w = free.right_mul(a, v, r);
                if !w.is_empty() {
                    let key = free.degree_target(a, w[0].0);
                    radpart.entry(key).or_insert_with(|| Echelon::new(field)).insert(&w);
                }
            }
        }
        let mut tops: Vec<(SparseVec, usize, i32)> = Vec::new();
        for ((deg, tv), vs) in blocks {
            let mut ech = radpart.remove(&(deg, tv)).unwrap_or_else(|| Echelon::new(field));
            for v in vs {
                if ech.insert(&v).is_some() {
                    tops.push((v, tv, deg));
                }
            }
        }
        if tops.iter().any(|(_, _, deg)| *deg != step as i32) {
            return Ok(ResolutionVerdict::FailsAt(step));
        }
        // Next free module and the kernel of its map onto the current kernel.
        let next = FreeModule::new(a, tops.iter().map(|(_, v, d)| (*v, *d)).collect());
        let mut cols: BTreeMap<(i32, usize), Vec<(usize, SparseVec)>> = BTreeMap::new();
        for i in 0..next.dim {
            let (k, b) = next.locate(a, i);
            let img = free.right_mul(a, &tops[k].0, b);
            cols.entry(next.degree_target(a, i)).or_default().push((i, img));
        }
        let mut new_kernel = Vec::new();
        for (_, list) in cols {
            let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
            for (j, (_, col)) in list.iter().enumerate() {
                for (r, c) in col {
                    rows.entry(*r).or_default().push((j, c.clone()));
                }
            }
            let rows: Vec<SparseVec> = rows.into_values().collect();
            for kv in linalg::nullspace(&rows, list.len(), field) {
                new_kernel.push(linalg::collect(kv.iter().map(|(j, c)| (list[*j].0, c.clone()))));
            }
        }
        free = next;
        kernel = new_kernel;
    }
    Ok(ResolutionVerdict::LinearTo(steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{binomial, monomial};
    use crate::quiver::{ArrowSpec, VertexLabel};

    fn id(i: u32) -> VertexLabel {
        VertexLabel::Id(i)
    }

    #[test]
    fn dual_of_free_is_radical_square_zero() {
        let q = Quiver::new(
            vec![id(1), id(2), id(3)],
            vec![ArrowSpec::new("a", id(1), id(2), 1), ArrowSpec::new("b", id(2), id(3), 1)],
        )
        .unwrap();
        let p = QuadraticPresentation::new(q, &[], Field::Rationals).unwrap();
        let d = p.dual();
        assert_eq!(d.relation_dim(), 1);
        assert_eq!(d.present(None).unwrap().dim(), 5);
        let dd = d.dual();
        assert_eq!(dd.relation_dim(), 0);
        assert_eq!(dd.quiver, p.quiver);
    }

    #[test]
    fn polynomial_dual_is_exterior() {
        let q = Quiver::new(
            vec![id(1)],
            vec![ArrowSpec::new("x", id(1), id(1), 1), ArrowSpec::new("y", id(1), id(1), 1)],
        )
        .unwrap();
        let f = Field::Rationals;
        let r = binomial(&q, &["x", "y"], &["y", "x"], f);
        let p = QuadraticPresentation::new(q, &[r], f).unwrap();
        let e = p.dual().present(None).unwrap();
        assert_eq!(e.dim(), 4);
    }

    #[test]
    fn truncated_polynomial_probe_fails_at_two() {
        let q = Quiver::new(vec![id(1)], vec![ArrowSpec::new("x", id(1), id(1), 1)]).unwrap();
        let f = Field::Rationals;
        let a = PresentedAlgebra::new(q.clone(), vec![monomial(&q, &["x", "x", "x"], f)], f, None).unwrap();
        assert_eq!(linear_resolution_probe(&a.algebra, 3).unwrap(), ResolutionVerdict::FailsAt(2));
        let b = PresentedAlgebra::new(q.clone(), vec![monomial(&q, &["x", "x"], f)], f, None).unwrap();
        assert_eq!(linear_resolution_probe(&b.algebra, 4).unwrap(), ResolutionVerdict::LinearTo(4));
    }
}
