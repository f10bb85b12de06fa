//! Finite-dimensional graded algebras given by structure constants, and algebras presented
//! by a quiver with homogeneous relations.
//!
//! A presented algebra is built weight by weight. The weight-`k` component is spanned by
//! pairs `(b, a)` of a basis element `b` and an arrow `a`, modulo images `u·r` of relations.
//! Pivots are taken at the lexicographically largest candidate, so the surviving basis is
//! the set of deglex-smallest standard paths and is prefix closed.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{self, Accumulator, Echelon, SparseVec};
use crate::quiver::{split_sections, ArrowSpec, Path, Quiver, VertexLabel};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// An associative algebra with a homogeneous basis adapted to the vertex idempotents.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub field: Field,
    pub vertices: Vec<VertexLabel>,
    pub basis: Vec<BasisElement>,
    pub names: Vec<String>,
    pub idempotents: Vec<usize>,
    table: Vec<Vec<(usize, SparseVec)>>,
    blocks: HashMap<(usize, usize), Vec<usize>>,
    from_vertex: Vec<Vec<usize>>,
}

impl Algebra {
    /// Builds an algebra from the nonzero products of basis elements. Products with
    /// idempotents are filled in automatically.
    pub fn new(
        field: Field,
        vertices: Vec<VertexLabel>,
        basis: Vec<BasisElement>,
        names: Vec<String>,
        idempotents: Vec<usize>,
        products: impl IntoIterator<Item = ((usize, usize), SparseVec)>,
    ) -> Algebra {
        let n = basis.len();
        assert_eq!(names.len(), n);
        assert_eq!(idempotents.len(), vertices.len());
        let mut table: Vec<BTreeMap<usize, SparseVec>> = vec![BTreeMap::new(); n];
        for ((i, j), v) in products {
            if !v.is_empty() {
                table[i].insert(j, v);
            }
        }
        for (v, &e) in idempotents.iter().enumerate() {
            debug_assert!(basis[e].source == v && basis[e].target == v);
            for (j, b) in basis.iter().enumerate() {
                if b.source == v {
                    table[e].insert(j, linalg::unit(j, field));
                }
                if b.target == v {
                    table[j].insert(e, linalg::unit(j, field));
                }
            }
        }
        let mut blocks: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut from_vertex = vec![Vec::new(); vertices.len()];
        for (i, b) in basis.iter().enumerate() {
            blocks.entry((b.source, b.target)).or_default().push(i);
            from_vertex[b.source].push(i);
        }
        Algebra {
            field,
            vertices,
            basis,
            names,
            idempotents,
            table: table.into_iter().map(|m| m.into_iter().collect()).collect(),
            blocks,
            from_vertex,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, label: &VertexLabel) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Basis indices of `e_a A e_b` (elements that start at `a` and end at `b`).
    pub fn block(&self, a: usize, b: usize) -> &[usize] {
        self.blocks.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    pub fn starting_at(&self, v: usize) -> &[usize] {
        &self.from_vertex[v]
    }

    pub fn ending_at(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].target == v).collect()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Option<&SparseVec> {
        let row = &self.table[i];
        row.binary_search_by_key(&j, |e| e.0).ok().map(|k| &row[k].1)
    }

    /// Nonzero products `b_i · b_j` for fixed `i`.
    pub fn products_of(&self, i: usize) -> &[(usize, SparseVec)] {
        &self.table[i]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(p) = self.mul_basis(*i, *j) {
                    acc.add_scaled(&(a * b), p);
                }
            }
        }
        acc.finish()
    }

    pub fn one(&self) -> SparseVec {
        let mut v: SparseVec = self.idempotents.iter().map(|&e| (e, self.field.one())).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    pub fn idempotent(&self, v: usize) -> SparseVec {
        linalg::unit(self.idempotents[v], self.field)
    }

    /// Checks `(xy)z = x(yz)` on all composable basis triples; returns the first failure.
    pub fn associativity_defect(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim() {
            for (j, ij) in self.products_of(i) {
                for k in self.starting_at(self.basis[*j].target) {
                    let left = self.mul(ij, &linalg::unit(*k, self.field));
                    let right = match self.mul_basis(*j, *k) {
                        Some(jk) => self.mul(&linalg::unit(i, self.field), jk),
                        None => Vec::new(),
                    };
                    if left != right {
                        return Some((i, *j, *k));
                    }
                }
            }
        }
        None
    }

    /// Degree of a homogeneous element (first term), if nonzero.
    pub fn degree_of(&self, x: &SparseVec) -> Option<i32> {
        x.first().map(|(i, _)| self.basis[*i].degree)
    }

    /// Graded dimension counts of the block `e_a A e_b`.
    pub fn block_degrees(&self, a: usize, b: usize) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for &i in self.block(a, b) {
            *m.entry(self.basis[i].degree).or_insert(0) += 1;
        }
        m
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for b in &self.basis {
            *m.entry(b.degree).or_insert(0) += 1;
        }
        m
    }

    pub fn top_degree(&self) -> i32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    /// Left multiplication by `x` as a matrix given by columns.
    pub fn left_mult(&self, x: &SparseVec) -> Vec<SparseVec> {
        (0..self.dim()).map(|j| self.mul(x, &linalg::unit(j, self.field))).collect()
    }

    pub fn right_mult(&self, x: &SparseVec) -> Vec<SparseVec> {
        (0..self.dim()).map(|j| self.mul(&linalg::unit(j, self.field), x)).collect()
    }

    pub fn is_idempotent_index(&self, i: usize) -> bool {
        self.idempotents[self.basis[i].source] == i
    }

    /// The subalgebra `eAe` for `e` the sum of the given vertex idempotents, with a map from
    /// new basis indices to old ones.
    pub fn truncate(&self, verts: &[usize]) -> (Algebra, Vec<usize>) {
        let mut keep_verts: Vec<usize> = verts.to_vec();
        keep_verts.sort_unstable();
        keep_verts.dedup();
        let vpos: HashMap<usize, usize> = keep_verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let old: Vec<usize> = (0..self.dim())
            .filter(|&i| vpos.contains_key(&self.basis[i].source) && vpos.contains_key(&self.basis[i].target))
            .collect();
        let newpos: HashMap<usize, usize> = old.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let basis = old
            .iter()
            .map(|&o| {
                let b = &self.basis[o];
                BasisElement { source: vpos[&b.source], target: vpos[&b.target], degree: b.degree }
            })
            .collect();
        let names = old.iter().map(|&o| self.names[o].clone()).collect();
        let idempotents = keep_verts.iter().map(|&v| newpos[&self.idempotents[v]]).collect();
        let mut products = Vec::new();
        for (ni, &o) in old.iter().enumerate() {
            for (j, p) in self.products_of(o) {
                if let Some(&nj) = newpos.get(j) {
                    let v: SparseVec = p.iter().map(|(k, c)| (newpos[k], c.clone())).collect();
                    products.push(((ni, nj), v));
                }
            }
        }
        let vertices = keep_verts.iter().map(|&v| self.vertices[v].clone()).collect();
        (Algebra::new(self.field, vertices, basis, names, idempotents, products), old)
    }

    /// Basis elements spanning a complement of `rad²` inside the radical, where the radical
    /// is the span of the non-idempotent basis elements.
    pub fn radical_generators(&self) -> Vec<usize> {
        let mut sq = Echelon::new(self.field);
        for i in 0..self.dim() {
            if self.is_idempotent_index(i) {
                continue;
            }
            for (j, p) in self.products_of(i) {
                if !self.is_idempotent_index(*j) {
                    sq.insert(p);
                }
            }
        }
        (0..self.dim()).filter(|&i| !self.is_idempotent_index(i) && !sq.is_pivot(i)).collect()
    }

    /// Whether every non-idempotent basis element has positive degree.
    pub fn positively_graded(&self) -> bool {
        (0..self.dim()).all(|i| self.is_idempotent_index(i) || self.basis[i].degree >= 1)
    }

    /// Structural equality of two algebras on the same basis ordering.
    pub fn same_structure(&self, other: &Algebra) -> bool {
        self.field == other.field
            && self.vertices == other.vertices
            && self.basis == other.basis
            && self.idempotents == other.idempotents
            && self.table == other.table
    }
}

/// An algebra morphism recorded by its vertex map, arrow images (for presented sources)
/// and its action on every basis element of the source.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub vertex_map: Vec<usize>,
    pub arrow_images: Vec<SparseVec>,
    pub matrix: Vec<SparseVec>,
}

impl AlgebraMorphism {
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        linalg::apply(&self.matrix, x)
    }

    pub fn identity(a: &Algebra) -> AlgebraMorphism {
        AlgebraMorphism {
            vertex_map: (0..a.num_vertices()).collect(),
            arrow_images: Vec::new(),
            matrix: (0..a.dim()).map(|i| linalg::unit(i, a.field)).collect(),
        }
    }

    pub fn is_bijective(&self, target: &Algebra) -> bool {
        self.matrix.len() == target.dim() && linalg::invert(&self.matrix, target.field).is_some()
    }

    /// Verifies `φ(xy) = φ(x)φ(y)` on every composable pair of basis elements and that
    /// vertex idempotents go to the prescribed idempotents.
    pub fn multiplicative_defect(&self, source: &Algebra, target: &Algebra) -> Option<(usize, usize)> {
        for (v, &e) in source.idempotents.iter().enumerate() {
            if self.matrix[e] != target.idempotent(self.vertex_map[v]) {
                return Some((e, e));
            }
        }
        for i in 0..source.dim() {
            for &j in source.starting_at(source.basis[i].target) {
                let lhs = match source.mul_basis(i, j) {
                    Some(p) => self.apply(p),
                    None => Vec::new(),
                };
                let rhs = target.mul(&self.matrix[i], &self.matrix[j]);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn inverse(&self, target: &Algebra) -> Option<AlgebraMorphism> {
        let inv = linalg::invert(&self.matrix, target.field)?;
        let mut vm = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vm[w] = v;
        }
        Some(AlgebraMorphism { vertex_map: vm, arrow_images: Vec::new(), matrix: inv })
    }

    pub fn compose(&self, then: &AlgebraMorphism) -> AlgebraMorphism {
        AlgebraMorphism {
            vertex_map: self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect(),
            arrow_images: self.arrow_images.iter().map(|x| then.apply(x)).collect(),
            matrix: self.matrix.iter().map(|x| then.apply(x)).collect(),
        }
    }
}

/// How path weights are measured when building normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Length,
    Degree,
}

/// A linear combination of paths.
pub type PathCombo = Vec<(Scalar, Path)>;

#[derive(Clone, Debug, Default)]
pub struct PresentOptions {
    pub bound: Option<u32>,
    pub arrow_order: Option<Vec<usize>>,
    pub mode: Option<WeightMode>,
}

#[derive(Clone, Debug)]
pub struct PresentedAlgebra {
    pub quiver: Quiver,
    pub relations: Vec<PathCombo>,
    pub algebra: Algebra,
    pub basis_paths: Vec<Path>,
    /// For each basis element of positive weight: (basis index of its prefix, last arrow).
    pub parent: Vec<Option<(usize, usize)>>,
    pub arrow_images: Vec<SparseVec>,
    pub weight_mode: WeightMode,
    pub degree_bound: Option<u32>,
    /// False when the degree bound was reached before the components vanished.
    pub complete: bool,
    arrow_rank: Vec<usize>,
    right_mult: HashMap<(usize, usize), SparseVec>,
}

struct Relation {
    weight: u32,
    source: usize,
    terms: Vec<(Scalar, Path)>,
}

struct Built {
    paths: Vec<Path>,
    weights: Vec<u32>,
    parent: Vec<Option<(usize, usize)>>,
    right_mult: HashMap<(usize, usize), SparseVec>,
    new_relations: Vec<PathCombo>,
    complete: bool,
}

/// Target data for re-presentation: images of arrows in a known algebra.
struct EvalTarget<'a> {
    algebra: &'a Algebra,
    arrow_images: &'a [SparseVec],
}

fn arrow_weights(q: &Quiver, mode: WeightMode) -> Vec<u32> {
    q.arrows()
        .iter()
        .map(|a| match mode {
            WeightMode::Length => 1,
            WeightMode::Degree => a.degree.max(1) as u32,
        })
        .collect()
}

fn normalize_relations(
    q: &Quiver,
    relations: &[PathCombo],
    weights: &[u32],
    field: Field,
) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for r in relations {
        let mut acc: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (c, p) in r {
            if c.field() != field && !c.is_zero() {
                return Err(Error::Invalid("relation coefficient from another field".into()));
            }
            if !q.is_path(p) {
                return Err(Error::Invalid(format!("relation term is not a path: {:?}", p)));
            }
            if p.is_empty() {
                return Err(Error::Invalid("relation contains a lazy path".into()));
            }
            let e = acc.entry(p.clone()).or_insert_with(|| field.zero());
            *e = &*e + c;
        }
        let terms: Vec<(Scalar, Path)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (c, p)).collect();
        if terms.is_empty() {
            continue;
        }
        let p0 = &terms[0].1;
        let w0: u32 = p0.arrows.iter().map(|&a| weights[a]).sum();
        let d0 = q.path_degree(p0);
        let (s0, t0) = (p0.source, q.path_target(p0));
        for (_, p) in &terms {
            let w: u32 = p.arrows.iter().map(|&a| weights[a]).sum();
            if w != w0 || q.path_degree(p) != d0 {
                return Err(Error::Inhomogeneous(q.path_name(p)));
            }
            if p.source != s0 || q.path_target(p) != t0 {
                return Err(Error::Invalid(format!("relation terms are not parallel: {}", q.path_name(p))));
            }
        }
        out.push(Relation { weight: w0, source: s0, terms });
    }
    Ok(out)
}

fn build(
    q: &Quiver,
    relations: &[Relation],
    field: Field,
    weights: &[u32],
    rank: &[usize],
    bound: Option<u32>,
    target: Option<EvalTarget<'_>>,
) -> Built {
    let nv = q.num_vertices();
    let mut paths: Vec<Path> = (0..nv).map(Path::lazy).collect();
    let mut pweight: Vec<u32> = vec![0; nv];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut by_wt: HashMap<(u32, usize), Vec<usize>> = HashMap::new();
    for v in 0..nv {
        by_wt.insert((0, v), vec![v]);
    }
    let mut images: Vec<SparseVec> = match &target {
        Some(t) => (0..nv).map(|v| t.algebra.idempotent(v)).collect(),
        None => Vec::new(),
    };
    let mut right_mult: HashMap<(usize, usize), SparseVec> = HashMap::new();
    let mut new_relations: Vec<PathCombo> = Vec::new();
    let mut extra: Vec<Relation> = Vec::new();
    let maxw = weights.iter().copied().max().unwrap_or(0);
    let mut zero_run = 0;
    let mut complete = true;
    let mut k: u32 = 0;
    if q.num_arrows() == 0 {
        return Built { paths, weights: pweight, parent, right_mult, new_relations, complete };
    }
    loop {
        k += 1;
        if let Some(b) = bound {
            if k > b {
                complete = false;
                break;
            }
        }
        // Candidates (b, a) with weight(b) + weight(a) = k.
        let mut cands: Vec<(Vec<usize>, usize, usize)> = Vec::new();
        for (a, arrow) in q.arrows().iter().enumerate() {
            if weights[a] > k {
                continue;
            }
            if let Some(list) = by_wt.get(&(k - weights[a], arrow.source)) {
                for &b in list {
                    let mut key: Vec<usize> = paths[b].arrows.iter().map(|&x| rank[x]).collect();
                    key.push(rank[a]);
                    cands.push((key, b, a));
                }
            }
        }
        if cands.is_empty() {
            zero_run += 1;
            if zero_run >= maxw {
                break;
            }
            continue;
        }
        cands.sort();
        let index: HashMap<(usize, usize), usize> =
            cands.iter().enumerate().map(|(i, (_, b, a))| ((*b, *a), i)).collect();
        let mut ech = Echelon::new(field);
        let mul_from = |u: usize, word: &[usize], rm: &HashMap<(usize, usize), SparseVec>| -> SparseVec {
            let mut v = linalg::unit(u, field);
            for &a in word {
                let mut acc = Accumulator::new();
                for (b, c) in &v {
                    if let Some(p) = rm.get(&(*b, a)) {
                        acc.add_scaled(c, p);
                    }
                }
                v = acc.finish();
                if v.is_empty() {
                    break;
                }
            }
            v
        };
        for rel in relations.iter().chain(extra.iter()) {
            if rel.weight > k {
                continue;
            }
            let us = match by_wt.get(&(k - rel.weight, rel.source)) {
                Some(l) => l.clone(),
                None => continue,
            };
            for u in us {
                let mut acc = Accumulator::new();
                for (c, p) in &rel.terms {
                    let (last, prefix) = p.arrows.split_last().expect("non-lazy");
                    let pv = mul_from(u, prefix, &right_mult);
                    for (b, coef) in pv {
                        if let Some(&idx) = index.get(&(b, *last)) {
                            acc.add_term(idx, c * &coef);
                        }
                    }
                }
                let v = acc.finish();
                if !v.is_empty() {
                    ech.insert(&v);
                }
            }
        }
        if let Some(t) = &target {
            let free: Vec<usize> = (0..cands.len()).filter(|&i| !ech.is_pivot(i)).collect();
            let cols: Vec<SparseVec> = free
                .iter()
                .map(|&i| {
                    let (_, b, a) = &cands[i];
                    t.algebra.mul(&images[*b], &t.arrow_images[*a])
                })
                .collect();
            let mut rows: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
            for (j, col) in cols.iter().enumerate() {
                for (r, c) in col {
                    rows.entry(*r).or_default().push((j, c.clone()));
                }
            }
            let rows: Vec<SparseVec> = rows.into_values().collect();
            for kv in linalg::nullspace(&rows, free.len(), field) {
                let v: SparseVec = kv.iter().map(|(j, c)| (free[*j], c.clone())).collect();
                let mut v = v;
                v.sort_by_key(|e| e.0);
                if ech.insert(&v).is_some() {
                    let combo: PathCombo = v
                        .iter()
                        .map(|(i, c)| {
                            let (_, b, a) = &cands[*i];
                            let mut arrows = paths[*b].arrows.clone();
                            arrows.push(*a);
                            (c.clone(), Path { source: paths[*b].source, arrows })
                        })
                        .collect();
                    new_relations.push(combo.clone());
                    let source = combo[0].1.source;
                    extra.push(Relation { weight: k, source, terms: combo });
                }
            }
        }
        let mut newidx: HashMap<usize, usize> = HashMap::new();
        for (i, (_, b, a)) in cands.iter().enumerate() {
            if ech.is_pivot(i) {
                continue;
            }
            let g = paths.len();
            newidx.insert(i, g);
            let mut arrows = paths[*b].arrows.clone();
            arrows.push(*a);
            let p = Path { source: paths[*b].source, arrows };
            let tv = q.arrows()[*a].target;
            by_wt.entry((k, tv)).or_default().push(g);
            paths.push(p);
            pweight.push(k);
            parent.push(Some((*b, *a)));
            if let Some(t) = &target {
                images.push(t.algebra.mul(&images[*b], &t.arrow_images[*a]));
            }
        }
        for (i, (_, b, a)) in cands.iter().enumerate() {
            let nf = ech.reduce(&linalg::unit(i, field));
            let mapped: SparseVec = nf.into_iter().map(|(j, c)| (newidx[&j], c)).collect();
            let mut mapped = mapped;
            mapped.sort_by_key(|e| e.0);
            right_mult.insert((*b, *a), mapped);
        }
        if newidx.is_empty() {
            zero_run += 1;
            if zero_run >= maxw {
                break;
            }
        } else {
            zero_run = 0;
        }
    }
    Built { paths, weights: pweight, parent, right_mult, new_relations, complete }
}

impl PresentedAlgebra {
    pub fn new(q: Quiver, relations: Vec<PathCombo>, field: Field, bound: Option<u32>) -> Result<PresentedAlgebra> {
        Self::with_options(q, relations, field, PresentOptions { bound, ..Default::default() })
    }

    pub fn with_options(
        q: Quiver,
        relations: Vec<PathCombo>,
        field: Field,
        opts: PresentOptions,
    ) -> Result<PresentedAlgebra> {
        let mode = opts.mode.unwrap_or_else(|| {
            if q.arrows().iter().all(|a| a.degree >= 1) {
                WeightMode::Degree
            } else {
                WeightMode::Length
            }
        });
        if mode == WeightMode::Degree && q.arrows().iter().any(|a| a.degree < 1) {
            return Err(Error::Invalid("degree weighting needs positive arrow degrees".into()));
        }
        let weights = arrow_weights(&q, mode);
        let rank = match &opts.arrow_order {
            Some(order) => {
                if order.len() != q.num_arrows() {
                    return Err(Error::Invalid("arrow order must list every arrow once".into()));
                }
                let mut rank = vec![usize::MAX; q.num_arrows()];
                for (pos, &a) in order.iter().enumerate() {
                    if a >= rank.len() || rank[a] != usize::MAX {
                        return Err(Error::Invalid("arrow order must list every arrow once".into()));
                    }
                    rank[a] = pos;
                }
                rank
            }
            None => (0..q.num_arrows()).collect(),
        };
        let rels = normalize_relations(&q, &relations, &weights, field)?;
        let built = build(&q, &rels, field, &weights, &rank, opts.bound, None);
        Ok(Self::assemble(q, relations, field, built, mode, opts.bound, rank))
    }

    fn assemble(
        q: Quiver,
        relations: Vec<PathCombo>,
        field: Field,
        built: Built,
        mode: WeightMode,
        bound: Option<u32>,
        rank: Vec<usize>,
    ) -> PresentedAlgebra {
        let n = built.paths.len();
        let basis: Vec<BasisElement> = built
            .paths
            .iter()
            .map(|p| BasisElement { source: p.source, target: q.path_target(p), degree: q.path_degree(p) })
            .collect();
        let names: Vec<String> = built.paths.iter().map(|p| q.path_name(p)).collect();
        let rm = &built.right_mult;
        let mut products = Vec::new();
        let mut from_vertex: Vec<Vec<usize>> = vec![Vec::new(); q.num_vertices()];
        for (j, b) in basis.iter().enumerate() {
            from_vertex[b.source].push(j);
        }
        for i in 0..n {
            if built.weights[i] == 0 {
                continue;
            }
            for &j in &from_vertex[basis[i].target] {
                if built.weights[j] == 0 {
                    continue;
                }
                if let Some(b) = bound {
                    if built.weights[i] + built.weights[j] > b {
                        continue;
                    }
                }
                let mut v = linalg::unit(i, field);
                for &a in &built.paths[j].arrows {
                    let mut acc = Accumulator::new();
                    for (b, c) in &v {
                        if let Some(p) = rm.get(&(*b, a)) {
                            acc.add_scaled(c, p);
                        }
                    }
                    v = acc.finish();
                    if v.is_empty() {
                        break;
                    }
                }
                if !v.is_empty() {
                    products.push(((i, j), v));
                }
            }
        }
        let algebra =
            Algebra::new(field, q.vertices().to_vec(), basis, names, (0..q.num_vertices()).collect(), products);
        let arrow_images = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arr)| rm.get(&(arr.source, a)).cloned().unwrap_or_default())
            .collect();
        PresentedAlgebra {
            quiver: q,
            relations,
            algebra,
            basis_paths: built.paths,
            parent: built.parent,
            arrow_images,
            weight_mode: mode,
            degree_bound: bound,
            complete: built.complete,
            arrow_rank: rank,
            right_mult: built.right_mult,
        }
    }

    pub fn field(&self) -> Field {
        self.algebra.field
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Normal form of `v · a` for an arrow `a`.
    pub fn mul_arrow(&self, v: &SparseVec, a: usize) -> SparseVec {
        let mut acc = Accumulator::new();
        for (b, c) in v {
            if let Some(p) = self.right_mult.get(&(*b, a)) {
                acc.add_scaled(c, p);
            }
        }
        acc.finish()
    }

    pub fn nf_path(&self, p: &Path) -> SparseVec {
        let mut v = self.algebra.idempotent(p.source);
        for &a in &p.arrows {
            v = self.mul_arrow(&v, a);
            if v.is_empty() {
                break;
            }
        }
        v
    }

    pub fn eval(&self, combo: &PathCombo) -> SparseVec {
        let mut acc = Accumulator::new();
        for (c, p) in combo {
            acc.add_scaled(c, &self.nf_path(p));
        }
        acc.finish()
    }

    /// Path given by arrow names, evaluated to normal form.
    pub fn element(&self, names: &[&str]) -> Option<SparseVec> {
        Some(self.nf_path(&self.quiver.path_from_names(names)?))
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.basis_paths.iter().position(|b| b == p)
    }

    pub fn arrow_rank(&self) -> &[usize] {
        &self.arrow_rank
    }

    /// Whether every relation has length exactly two.
    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.iter().all(|(_, p)| p.len() == 2))
    }

    /// Re-presents a positively graded table algebra: arrows are basis elements spanning a
    /// complement of the square of the radical, relations come from the kernel of the
    /// evaluation map, weight by weight. Returns the presentation and its isomorphism to `alg`.
    pub fn from_algebra(alg: &Algebra) -> Result<(PresentedAlgebra, AlgebraMorphism)> {
        let field = alg.field;
        for i in 0..alg.dim() {
            if !alg.is_idempotent_index(i) && alg.basis[i].degree < 1 {
                return Err(Error::Unsupported("re-presentation needs a positively graded radical".into()));
            }
        }
        let gens = alg.radical_generators();
        let specs: Vec<ArrowSpec> = gens
            .iter()
            .map(|&i| {
                let b = &alg.basis[i];
                ArrowSpec {
                    name: sanitize(&alg.names[i]),
                    source: alg.vertices[b.source].clone(),
                    target: alg.vertices[b.target].clone(),
                    degree: b.degree,
                }
            })
            .collect();
        let mut names_seen = HashSet::new();
        for s in &specs {
            if !names_seen.insert(s.name.clone()) {
                return Err(Error::Invalid(format!("generator names collide: {}", s.name)));
            }
        }
        let q = Quiver::new(alg.vertices.clone(), specs)?;
        // Quiver::new sorts vertices; keep the algebra's vertex order aligned.
        if q.vertices() != alg.vertices.as_slice() {
            return Err(Error::Unsupported("algebra vertices must be in canonical label order".into()));
        }
        let arrow_images: Vec<SparseVec> = q
            .arrows()
            .iter()
            .map(|a| {
                let i = gens
                    .iter()
                    .copied()
                    .find(|&g| sanitize(&alg.names[g]) == a.name)
                    .expect("generator present");
                linalg::unit(i, field)
            })
            .collect();
        let weights = arrow_weights(&q, WeightMode::Degree);
        let rank: Vec<usize> = (0..q.num_arrows()).collect();
        let built = build(
            &q,
            &[],
            field,
            &weights,
            &rank,
            None,
            Some(EvalTarget { algebra: alg, arrow_images: &arrow_images }),
        );
        let relations = built.new_relations.clone();
        let pres = PresentedAlgebra::with_options(
            q,
            relations,
            field,
            PresentOptions { mode: Some(WeightMode::Degree), ..Default::default() },
        )?;
        if pres.dim() != alg.dim() {
            return Err(Error::CheckFailed(format!(
                "re-presentation has dimension {} but the algebra has {}",
                pres.dim(),
                alg.dim()
            )));
        }
        let morphism = pres.morphism_to(alg, (0..alg.num_vertices()).collect(), arrow_images)?;
        if !morphism.is_bijective(alg) {
            return Err(Error::CheckFailed("re-presentation map is not bijective".into()));
        }
        Ok((pres, morphism))
    }

    /// The morphism to `target` determined by a vertex map and arrow images, after checking
    /// that the images are compatible and every relation maps to zero.
    pub fn morphism_to(
        &self,
        target: &Algebra,
        vertex_map: Vec<usize>,
        arrow_images: Vec<SparseVec>,
    ) -> Result<AlgebraMorphism> {
        let q = &self.quiver;
        for (a, arr) in q.arrows().iter().enumerate() {
            for (i, _) in &arrow_images[a] {
                let b = &target.basis[*i];
                if b.source != vertex_map[arr.source] || b.target != vertex_map[arr.target] {
                    return Err(Error::CheckFailed(format!("image of arrow {} has wrong endpoints", arr.name)));
                }
                if b.degree != arr.degree {
                    return Err(Error::CheckFailed(format!("image of arrow {} has wrong degree", arr.name)));
                }
            }
        }
        let eval_path = |p: &Path| -> SparseVec {
            let mut v = target.idempotent(vertex_map[p.source]);
            for &a in &p.arrows {
                v = target.mul(&v, &arrow_images[a]);
                if v.is_empty() {
                    break;
                }
            }
            v
        };
        for r in &self.relations {
            let mut acc = Accumulator::new();
            for (c, p) in r {
                acc.add_scaled(c, &eval_path(p));
            }
            if !acc.finish().is_empty() {
                let name = r.first().map(|(_, p)| q.path_name(p)).unwrap_or_default();
                return Err(Error::CheckFailed(format!("relation starting with {name} does not map to zero")));
            }
        }
        let mut matrix: Vec<SparseVec> = Vec::with_capacity(self.dim());
        for (i, p) in self.basis_paths.iter().enumerate() {
            let img = match self.parent[i] {
                None => target.idempotent(vertex_map[p.source]),
                Some((b, a)) => target.mul(&matrix[b], &arrow_images[a]),
            };
            matrix.push(img);
        }
        Ok(AlgebraMorphism { vertex_map, arrow_images, matrix })
    }

    /// `A / AeA` for `e` the sum of the given vertex idempotents, presented on the remaining
    /// vertices by dropping every path that meets a removed vertex.
    pub fn quotient_by_idempotent(&self, verts: &[usize]) -> Result<PresentedAlgebra> {
        let q = &self.quiver;
        let kill: HashSet<usize> = verts.iter().copied().collect();
        let keep_arrow = |a: usize| {
            let arr = &q.arrows()[a];
            !kill.contains(&arr.source) && !kill.contains(&arr.target)
        };
        let vertices: Vec<VertexLabel> = (0..q.num_vertices())
            .filter(|v| !kill.contains(v))
            .map(|v| q.vertices()[v].clone())
            .collect();
        let specs: Vec<ArrowSpec> = q
            .arrow_specs()
            .into_iter()
            .enumerate()
            .filter(|(a, _)| keep_arrow(*a))
            .map(|(_, s)| s)
            .collect();
        let nq = Quiver::new(vertices, specs)?;
        let mut rels = Vec::new();
        for r in &self.relations {
            let combo: PathCombo = r
                .iter()
                .filter(|(_, p)| !kill.contains(&p.source) && p.arrows.iter().all(|&a| keep_arrow(a)))
                .map(|(c, p)| {
                    let src = nq.vertex(&q.vertices()[p.source]).expect("kept vertex");
                    let arrows = p.arrows.iter().map(|&a| nq.arrow(&q.arrows()[a].name).expect("kept")).collect();
                    (c.clone(), Path { source: src, arrows })
                })
                .collect();
            if !combo.is_empty() {
                rels.push(combo);
            }
        }
        PresentedAlgebra::with_options(
            nq,
            rels,
            self.field(),
            PresentOptions { bound: self.degree_bound, mode: Some(self.weight_mode), ..Default::default() },
        )
    }

    /// Serializes to the `.alg` format.
    pub fn to_text(&self) -> String {
        let mut s = self.quiver.to_text();
        s.push_str("[relations]\n");
        for r in &self.relations {
            let terms: Vec<String> =
                r.iter().map(|(c, p)| format!("{}*{}", c, self.quiver.path_name(p))).collect();
            s.push_str(&format!("{} = 0\n", terms.join(" + ")));
        }
        s.push_str("[options]\n");
        let mut opts = format!("field={}", self.field());
        if let Some(b) = self.degree_bound {
            opts.push_str(&format!(" bound={b}"));
        }
        s.push_str(&opts);
        s.push('\n');
        s
    }

    /// Parses the `.alg` format.
    pub fn from_text(text: &str) -> Result<PresentedAlgebra> {
        let sections = split_sections(text)?;
        let mut quiver_text = String::new();
        let mut field = Field::Rationals;
        let mut bound = None;
        let mut rel_lines: Vec<String> = Vec::new();
        for (name, lines) in &sections {
            match name.as_str() {
                "vertices" | "arrows" => {
                    quiver_text.push_str(&format!("[{name}]\n"));
                    for l in lines {
                        quiver_text.push_str(l);
                        quiver_text.push('\n');
                    }
                }
                "relations" => rel_lines.extend(lines.iter().cloned()),
                "options" => {
                    for l in lines {
                        for tok in l.split_whitespace() {
                            let (k, v) = tok
                                .split_once('=')
                                .ok_or_else(|| Error::Parse(format!("bad option {tok:?}")))?;
                            match k {
                                "field" => {
                                    field = Field::parse(v).ok_or_else(|| Error::Parse(format!("bad field {v:?}")))?
                                }
                                "bound" => {
                                    bound = Some(v.parse().map_err(|_| Error::Parse(format!("bad bound {v:?}")))?)
                                }
                                "root" => {}
                                _ => return Err(Error::Parse(format!("unknown option {k:?}"))),
                            }
                        }
                    }
                }
                other => return Err(Error::Parse(format!("unknown section [{other}]"))),
            }
        }
        let q = Quiver::from_text(&quiver_text)?;
        let mut rels = Vec::new();
        for l in &rel_lines {
            rels.push(parse_relation(&q, l, field)?);
        }
        PresentedAlgebra::new(q, rels, field, bound)
    }
}

fn sanitize(name: &str) -> String {
    name.replace('.', "~").replace(|c: char| c.is_whitespace() || c == ':', "_")
}

fn parse_relation(q: &Quiver, line: &str, field: Field) -> Result<PathCombo> {
    let bad = || Error::Parse(format!("bad relation {line:?}"));
    let lhs = line.trim().strip_suffix("= 0").or_else(|| line.trim().strip_suffix("=0")).ok_or_else(bad)?;
    let mut out = Vec::new();
    // Split on top-level '+' / '-' separators surrounded by spaces.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut negative = false;
    for tok in lhs.split_whitespace() {
        match tok {
            "+" => negative = false,
            "-" => negative = true,
            t => {
                terms.push((negative, t.to_string()));
                negative = false;
            }
        }
    }
    for (neg, t) in terms {
        let (coef, path) = split_coefficient(&t, field).ok_or_else(bad)?;
        let coef = if neg { -coef } else { coef };
        let names: Vec<&str> = path.split('.').collect();
        let p = q.path_from_names(&names).ok_or_else(bad)?;
        out.push((coef, p));
    }
    Ok(out)
}

fn split_coefficient(t: &str, field: Field) -> Option<(Scalar, String)> {
    let bytes = t.as_bytes();
    let starts_numeric =
        bytes.first().is_some_and(|c| c.is_ascii_digit() || ((*c == b'-' || *c == b'+') && bytes.len() > 1 && bytes[1].is_ascii_digit()));
    if starts_numeric {
        let (c, rest) = t.split_once('*')?;
        Some((field.parse_scalar(c)?, rest.to_string()))
    } else if let Some(rest) = t.strip_prefix('-') {
        Some((field.from_i64(-1), rest.to_string()))
    } else {
        Some((field.one(), t.to_string()))
    }
}

/// Convenience: the relation `p` (a single path) given by arrow names.
pub fn monomial(q: &Quiver, names: &[&str], field: Field) -> PathCombo {
    vec![(field.one(), q.path_from_names(names).expect("valid path"))]
}

/// Convenience: the relation `p - p'`.
pub fn binomial(q: &Quiver, p: &[&str], p2: &[&str], field: Field) -> PathCombo {
    vec![
        (field.one(), q.path_from_names(p).expect("valid path")),
        (field.from_i64(-1), q.path_from_names(p2).expect("valid path")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(i: u32) -> VertexLabel {
        VertexLabel::Id(i)
    }

    fn truncated_poly(n: usize) -> PresentedAlgebra {
        let q = Quiver::new(vec![id(1)], vec![ArrowSpec::new("x", id(1), id(1), 1)]).unwrap();
        let names = vec!["x"; n];
        let r = monomial(&q, &names, Field::Rationals);
        PresentedAlgebra::new(q, vec![r], Field::Rationals, None).unwrap()
    }

    fn two_cycle_mod_length3() -> PresentedAlgebra {
        let q = Quiver::new(
            vec![id(1), id(2)],
            vec![ArrowSpec::new("a", id(1), id(2), 1), ArrowSpec::new("b", id(2), id(1), 1)],
        )
        .unwrap();
        let f = Field::Rationals;
        let rels = vec![monomial(&q, &["a", "b", "a"], f), monomial(&q, &["b", "a", "b"], f)];
        PresentedAlgebra::new(q, rels, f, None).unwrap()
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(truncated_poly(2).dim(), 2);
        assert_eq!(truncated_poly(3).dim(), 3);
        let n2 = two_cycle_mod_length3();
        assert_eq!(n2.dim(), 6);
        assert!(n2.complete);
        assert!(n2.algebra.associativity_defect().is_none());
    }

    #[test]
    fn infinite_algebra_respects_bound() {
        let q = Quiver::new(vec![id(1)], vec![ArrowSpec::new("x", id(1), id(1), 1)]).unwrap();
        let a = PresentedAlgebra::new(q, vec![], Field::Rationals, Some(4)).unwrap();
        assert_eq!(a.dim(), 5);
        assert!(!a.complete);
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let q = Quiver::new(
            vec![id(1)],
            vec![ArrowSpec::new("x", id(1), id(1), 1), ArrowSpec::new("y", id(1), id(1), 1)],
        )
        .unwrap();
        let f = Field::Rationals;
        let r = vec![(f.one(), q.path_from_names(&["x", "x"]).unwrap()), (f.one(), q.path_from_names(&["y"]).unwrap())];
        assert!(matches!(PresentedAlgebra::new(q, vec![r], f, Some(3)), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn commutative_polynomial_ring_degrees() {
        let q = Quiver::new(
            vec![id(1)],
            vec![ArrowSpec::new("x", id(1), id(1), 1), ArrowSpec::new("y", id(1), id(1), 1)],
        )
        .unwrap();
        let f = Field::Rationals;
        let r = binomial(&q, &["x", "y"], &["y", "x"], f);
        let a = PresentedAlgebra::new(q, vec![r], f, Some(3)).unwrap();
        // 1 + 2 + 3 + 4
        assert_eq!(a.dim(), 10);
        let xy = a.element(&["x", "y"]).unwrap();
        let yx = a.element(&["y", "x"]).unwrap();
        assert_eq!(xy, yx);
    }

    #[test]
    fn truncation_and_quotient() {
        let n2 = two_cycle_mod_length3();
        let (e, map) = n2.algebra.truncate(&[0]);
        assert_eq!(e.dim(), 2);
        assert_eq!(map.len(), 2);
        let quo = n2.quotient_by_idempotent(&[1]).unwrap();
        assert_eq!(quo.dim(), 1);
        let same = n2.quotient_by_idempotent(&[]).unwrap();
        assert_eq!(same.dim(), 6);
    }

    #[test]
    fn re_presentation_recovers_algebra() {
        let n2 = two_cycle_mod_length3();
        let (p, m) = PresentedAlgebra::from_algebra(&n2.algebra).unwrap();
        assert_eq!(p.dim(), 6);
        assert!(m.multiplicative_defect(&p.algebra, &n2.algebra).is_none());
        assert_eq!(p.quiver.num_arrows(), 2);
    }

    #[test]
    fn alg_text_roundtrip() {
        let n2 = two_cycle_mod_length3();
        let t = n2.to_text();
        let back = PresentedAlgebra::from_text(&t).unwrap();
        assert_eq!(back.to_text(), t);
        assert!(back.algebra.same_structure(&n2.algebra));
    }
}
