//! Finite abelian groups acting diagonally, McKay quivers, skew group algebras and the
//! identification of type-A zigzag algebras inside zigzag algebras of skew group algebras.
//!
//! Roots of unity live in a prime field `F_p` with `p ≡ 1 (mod exponent)`.

use std::collections::HashMap;

use crate::algebra::{Algebra, PathCombo, PresentedAlgebra};
pub use crate::corpus::{exterior_algebra, polynomial_quadratic};
use crate::error::{Error, Result};
use crate::frobenius::d_trivial_extension;
use crate::groups::group_presentation;
use crate::iso::{find_graded_isomorphism, IsoOptions, IsoOutcome};
use crate::koszul::QuadraticPresentation;
use crate::linalg::{self, Accumulator, SparseVec};
use crate::quiver::{ArrowSpec, Path, Quiver, VertexLabel};
use crate::scalar::{least_prime_one_mod, Field, Scalar};
use crate::twists::{Mode, RelationChecker, RelationOutcome, Status};
use crate::typea::{lambda_ds, zigzag_presentation};

/// `C_{o_1} × ⋯ × C_{o_d}`; elements and characters are residue tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub orders: Vec<u32>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl AbelianGroup {
    pub fn new(orders: &[u32]) -> Result<AbelianGroup> {
        if orders.is_empty() || orders.iter().any(|&o| o < 2) {
            return Err(Error::Invalid("group orders must be at least 2".into()));
        }
        Ok(AbelianGroup { orders: orders.to_vec() })
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&o| o as usize).product()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |l, &o| l / gcd(l, o as u64) * o as u64)
    }

    /// Elements in lexicographic order of residue tuples.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &o in &self.orders {
            out = out.into_iter().flat_map(|p| (0..o).map(move |r| [p.clone(), vec![r]].concat())).collect();
        }
        out
    }

    pub fn index_of(&self, e: &[u32]) -> usize {
        e.iter().zip(&self.orders).fold(0usize, |acc, (&r, &o)| acc * o as usize + r as usize)
    }

    pub fn reduce(&self, t: &[i64]) -> Vec<u32> {
        t.iter().zip(&self.orders).map(|(&x, &o)| x.rem_euclid(o as i64) as u32).collect()
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &o)| (x + y) % o).collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.orders).map(|(&x, &o)| (o - x) % o).collect()
    }

    pub fn label(&self, e: &[u32]) -> VertexLabel {
        VertexLabel::Residue { values: e.to_vec(), orders: self.orders.clone() }
    }

    /// The least prime above `10^6` that is `1` modulo the exponent.
    pub fn default_field(&self) -> Field {
        Field::Prime(least_prime_one_mod(self.exponent(), 1_000_000))
    }

    /// `χ(g) = Π_j ω_{o_j}^{χ_j g_j}`.
    pub fn character_value(&self, field: Field, chi: &[u32], g: &[u32]) -> Result<Scalar> {
        let mut out = field.one();
        for ((&c, &x), &o) in chi.iter().zip(g).zip(&self.orders) {
            let w = field
                .root_of_unity(o as u64)
                .ok_or_else(|| Error::Unsupported(format!("no primitive {o}-th root of unity in {field:?}")))?;
            out = &out * &w.pow(((c as u64) * (x as u64)) % o as u64);
        }
        Ok(out)
    }
}

/// A representation given as a list of characters (with repetition allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSpec {
    pub characters: Vec<Vec<u32>>,
}

impl RepSpec {
    pub fn dim(&self) -> usize {
        self.characters.len()
    }
}

/// `V` (unit characters) and `V̄ = V ⊕ (−1, …, −1)`.
pub fn standard_reps(g: &AbelianGroup) -> (RepSpec, RepSpec) {
    let d = g.rank();
    let v: Vec<Vec<u32>> = (0..d).map(|k| g.reduce(&(0..d).map(|j| (j == k) as i64).collect::<Vec<_>>())).collect();
    let mut vbar = v.clone();
    vbar.push(g.reduce(&vec![-1; d]));
    (RepSpec { characters: v }, RepSpec { characters: vbar })
}

/// Arrows `χ → χ + c_k` named `x{k}_{χ}` with `k` counted from 1.
pub fn mckay_quiver(g: &AbelianGroup, rep: &RepSpec) -> Result<Quiver> {
    let elements = g.elements();
    let vertices: Vec<VertexLabel> = elements.iter().map(|e| g.label(e)).collect();
    let mut specs = Vec::new();
    for e in &elements {
        for (k, c) in rep.characters.iter().enumerate() {
            let t = g.add(e, c);
            specs.push(ArrowSpec::new(format!("x{}_{}", k + 1, g.label(e).compact()), g.label(e), g.label(&t), 1));
        }
    }
    Quiver::new(vertices, specs)
}

fn arrow_from(q: &Quiver, g: &AbelianGroup, e: &[u32], k: usize) -> usize {
    q.arrow(&format!("x{}_{}", k + 1, g.label(e).compact())).expect("McKay arrow")
}

/// Commutativity relations: at each vertex, the path via `c_k` then `c_l` equals the path via
/// `c_l` then `c_k`.
pub fn commutativity_relations(q: &Quiver, g: &AbelianGroup, rep: &RepSpec, field: Field) -> Vec<PathCombo> {
    let mut rels = Vec::new();
    for e in g.elements() {
        let src = g.index_of(&e);
        for k in 0..rep.dim() {
            for l in k + 1..rep.dim() {
                let p1 = Path { source: src, arrows: vec![arrow_from(q, g, &e, k), arrow_from(q, g, &g.add(&e, &rep.characters[k]), l)] };
                let p2 = Path { source: src, arrows: vec![arrow_from(q, g, &e, l), arrow_from(q, g, &g.add(&e, &rep.characters[l]), k)] };
                rels.push(vec![(field.one(), p1), (field.from_i64(-1), p2)]);
            }
        }
    }
    rels
}

/// `Sym(rep) # G` as the McKay quiver with commutativity relations, built to `bound`.
pub fn skew_presentation(g: &AbelianGroup, rep: &RepSpec, bound: Option<u32>, field: Field) -> Result<PresentedAlgebra> {
    let q = mckay_quiver(g, rep)?;
    let rels = commutativity_relations(&q, g, rep, field);
    PresentedAlgebra::new(q, rels, field, bound)
}

/// `E(rep) # G`: the McKay quiver with `x_k x_k = 0` and `x_k x_l + x_l x_k = 0` at each vertex.
pub fn exterior_skew_presentation(g: &AbelianGroup, rep: &RepSpec, field: Field) -> Result<PresentedAlgebra> {
    let q = mckay_quiver(g, rep)?;
    let mut rels = Vec::new();
    for e in g.elements() {
        let src = g.index_of(&e);
        let via = |k: usize, l: usize| Path {
            source: src,
            arrows: vec![arrow_from(&q, g, &e, k), arrow_from(&q, g, &g.add(&e, &rep.characters[k]), l)],
        };
        for k in 0..rep.dim() {
            rels.push(vec![(field.one(), via(k, k))]);
            for l in k + 1..rep.dim() {
                rels.push(vec![(field.one(), via(k, l)), (field.one(), via(l, k))]);
            }
        }
    }
    PresentedAlgebra::new(q, rels, field, None)
}

#[derive(Clone, Debug)]
pub struct DualSkewReport {
    pub orders: Vec<u32>,
    pub exterior_dim: usize,
    pub zigzag_dim: usize,
    pub outcome: IsoOutcome,
}

/// `E(V̄) # G` against `Z_{d+1}(Sym(V) # G)`, built from the quadratic dual of the McKay
/// presentation.
pub fn exterior_vs_zigzag(orders: &[u32], seed: u64) -> Result<DualSkewReport> {
    let g = AbelianGroup::new(orders)?;
    let field = g.default_field();
    let (v, vbar) = standard_reps(&g);
    let q = mckay_quiver(&g, &v)?;
    let rels = commutativity_relations(&q, &g, &v, field);
    let dual = QuadraticPresentation::new(q, &rels, field)?.dual().present(None)?;
    let zig = d_trivial_extension(&dual.algebra, g.rank() as i64);
    let ext = exterior_skew_presentation(&g, &vbar, field)?;
    let outcome = find_graded_isomorphism(&ext, &zig.algebra, &IsoOptions { seed, ..IsoOptions::default() });
    Ok(DualSkewReport { orders: orders.to_vec(), exterior_dim: ext.dim(), zigzag_dim: zig.algebra.dim(), outcome })
}

/// A finite-dimensional algebra given only by its multiplication table and unit.
#[derive(Clone, Debug)]
pub struct TableAlgebra {
    pub field: Field,
    pub degrees: Vec<i32>,
    table: HashMap<(usize, usize), SparseVec>,
    pub unit: SparseVec,
}

impl TableAlgebra {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.table.get(&(i, j))
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(p) = self.table.get(&(*i, *j)) {
                    acc.add_scaled(&(a * b), p);
                }
            }
        }
        acc.finish()
    }

    pub fn from_algebra(a: &Algebra) -> TableAlgebra {
        let mut table = HashMap::new();
        for i in 0..a.dim() {
            for (j, p) in a.products_of(i) {
                table.insert((i, *j), p.clone());
            }
        }
        TableAlgebra { field: a.field, degrees: a.basis.iter().map(|b| b.degree).collect(), table, unit: a.one() }
    }

    /// Whether the table is associative on basis triples and the unit is two-sided.
    pub fn is_associative_unital(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            let e = linalg::unit(i, self.field);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return false;
            }
            for j in 0..n {
                let Some(ij) = self.table.get(&(i, j)) else { continue };
                for k in 0..n {
                    let left = self.mul(ij, &linalg::unit(k, self.field));
                    let jk = self.table.get(&(j, k)).cloned().unwrap_or_default();
                    if left != self.mul(&e, &jk) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `Γ ⋉ Γ*` with `(a,f)(b,g) = (ab, fb + (−1)^{d·deg a} ag)` when `super_degree = Some(d)`,
/// and the plain trivial extension otherwise. Dual of basis element `k` is `dim + k`.
pub fn table_trivial_extension(t: &TableAlgebra, super_degree: Option<i64>) -> TableAlgebra {
    let n = t.dim();
    let field = t.field;
    let mut table: HashMap<(usize, usize), Accumulator> = HashMap::new();
    for (&(k, i), prod) in &t.table {
        table.entry((k, i)).or_default().add_scaled(&field.one(), prod);
        // b_k b_i = Σ c_j b_j gives b_i·f_j ∋ c_j f_k and f_j·b_k ∋ c_j f_i.
        let sign = match super_degree {
            Some(d) => field.sign((d * t.degrees[i] as i64).rem_euclid(2) == 1),
            None => field.one(),
        };
        for (j, c) in prod {
            table.entry((i, n + j)).or_default().add_term(n + k, c * &sign);
            table.entry((n + j, k)).or_default().add_term(n + i, c.clone());
        }
    }
    let table = table.into_iter().map(|(k, v)| (k, v.finish())).filter(|(_, v)| !v.is_empty()).collect();
    let mut degrees = t.degrees.clone();
    let top = t.degrees.iter().copied().max().unwrap_or(0);
    let shift = super_degree.map(|d| d as i32 + 1).unwrap_or(top + 1);
    degrees.extend(t.degrees.iter().map(|d| shift - d));
    TableAlgebra { field, degrees, table, unit: t.unit.clone() }
}

/// `Γ # G` in the group basis: `(a⊗g)(b⊗h) = a(g·b) ⊗ gh`, where `g·b = χ_b(g) b`.
/// Basis element `(b, g)` has index `b·|G| + index(g)`.
pub fn skew_table(t: &TableAlgebra, characters: &[Vec<u32>], g: &AbelianGroup) -> Result<TableAlgebra> {
    let field = t.field;
    let elements = g.elements();
    let m = elements.len();
    let mut values: HashMap<(usize, usize), Scalar> = HashMap::new();
    for (b, chi) in characters.iter().enumerate() {
        for (gi, e) in elements.iter().enumerate() {
            values.insert((b, gi), g.character_value(field, chi, e)?);
        }
    }
    let mut table = HashMap::new();
    for (&(a, b), prod) in &t.table {
        for (gi, ge) in elements.iter().enumerate() {
            let lam = &values[&(b, gi)];
            for (hi, he) in elements.iter().enumerate() {
                let gh = g.index_of(&g.add(ge, he));
                let v: SparseVec = prod.iter().map(|(k, c)| (k * m + gh, c * lam)).collect();
                table.insert((a * m + gi, b * m + hi), linalg::collect(v));
            }
        }
    }
    let unit = t.unit.iter().map(|(k, c)| (k * m, c.clone())).collect();
    let degrees = t.degrees.iter().flat_map(|&d| std::iter::repeat_n(d, m)).collect();
    Ok(TableAlgebra { field, degrees, table, unit })
}

/// Characters of basis elements of a presented algebra from characters of its arrows.
pub fn basis_characters(p: &PresentedAlgebra, g: &AbelianGroup, arrow_chars: &[Vec<u32>]) -> Vec<Vec<u32>> {
    p.basis_paths
        .iter()
        .map(|path| path.arrows.iter().fold(vec![0; g.rank()], |acc, &a| g.add(&acc, &arrow_chars[a])))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigskewReport {
    pub dims: (usize, usize),
    pub action_by_automorphisms: bool,
    pub sides_associative: bool,
    pub multiplicative: bool,
    pub bijective: bool,
    pub left_action_formula: bool,
    pub right_action_formula: bool,
}

impl ZigskewReport {
    pub fn holds(&self) -> bool {
        self.action_by_automorphisms
            && self.sides_associative
            && self.multiplicative
            && self.bijective
            && self.left_action_formula
            && self.right_action_formula
    }
}

/// Builds `Triv(Γ) # G` and `Triv(Γ # G)` (or the super versions) and checks the explicit map
/// `(a, f) ⊗ g ↦ (a ⊗ g, fg ⊗ (g^{-1})^*)`, together with the displayed left and right actions
/// of `Γ # G` on its dual.
pub fn triv_skew_check(gamma: &Algebra, characters: &[Vec<u32>], g: &AbelianGroup, super_degree: Option<i64>) -> Result<ZigskewReport> {
    let field = gamma.field;
    let n = gamma.dim();
    let elements = g.elements();
    let m = elements.len();
    let mut action_by_automorphisms = characters.len() == n;
    for i in 0..n {
        for (j, p) in gamma.products_of(i) {
            let expect = g.add(&characters[i], &characters[*j]);
            action_by_automorphisms &= p.iter().all(|(k, _)| characters[*k] == expect);
        }
    }
    let base = TableAlgebra::from_algebra(gamma);
    let triv = table_trivial_extension(&base, super_degree);
    let mut triv_chars = characters.to_vec();
    triv_chars.extend(characters.iter().map(|c| g.neg(c)));
    let left_side = skew_table(&triv, &triv_chars, g)?;
    let skew = skew_table(&base, characters, g)?;
    let right_side = table_trivial_extension(&skew, super_degree);
    let chi = |b: usize, e: &[u32]| g.character_value(field, &characters[b], e);
    // Images of basis elements (x, g) of the left side.
    let mut images: Vec<SparseVec> = Vec::with_capacity(2 * n * m);
    for x in 0..2 * n {
        for (gi, e) in elements.iter().enumerate() {
            if x < n {
                images.push(linalg::unit(x * m + gi, field));
            } else {
                let k = x - n;
                let ginv = g.index_of(&g.neg(e));
                images.push(vec![(n * m + k * m + ginv, chi(k, e)?)]);
            }
        }
    }
    let phi = |v: &SparseVec| -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, c) in v {
            acc.add_scaled(c, &images[*i]);
        }
        acc.finish()
    };
    let mut multiplicative = true;
    'outer: for u in 0..2 * n * m {
        for v in 0..2 * n * m {
            let prod = left_side.mul_basis(u, v).cloned().unwrap_or_default();
            if phi(&prod) != right_side.mul(&images[u], &images[v]) {
                multiplicative = false;
                break 'outer;
            }
        }
    }
    let bijective = linalg::rank(&images, field) == 2 * n * m;
    // (a⊗g)(f⊗φ(h)) = (h^{-1}g^{-1}·a) f ⊗ φ(gh) and (f⊗φ(h))(a⊗g) = (fa)g ⊗ φ(gh).
    let dual_index = |k: usize, e: &[u32]| n * m + k * m + g.index_of(&g.neg(e));
    let mut left_ok = true;
    let mut right_ok = true;
    for a in 0..n {
        for k in 0..n {
            let af = triv.mul(&linalg::unit(a, field), &linalg::unit(n + k, field));
            let fa = triv.mul(&linalg::unit(n + k, field), &linalg::unit(a, field));
            for (gi, ge) in elements.iter().enumerate() {
                for he in &elements {
                    let gh = g.add(ge, he);
                    let actual = right_side.mul(&linalg::unit(a * m + gi, field), &linalg::unit(dual_index(k, he), field));
                    let lam = chi(a, &g.neg(&gh))?;
                    let expected: SparseVec =
                        linalg::collect(af.iter().map(|(j, c)| (dual_index(j - n, &gh), c * &lam)));
                    left_ok &= actual == expected;
                    let actual_r = right_side.mul(&linalg::unit(dual_index(k, he), field), &linalg::unit(a * m + gi, field));
                    let mut acc = Accumulator::new();
                    for (j, c) in &fa {
                        acc.add_term(dual_index(j - n, &gh), c * &chi(j - n, ge)?);
                    }
                    right_ok &= actual_r == acc.finish();
                }
            }
        }
    }
    Ok(ZigskewReport {
        dims: (left_side.dim(), right_side.dim()),
        action_by_automorphisms,
        sides_associative: left_side.is_associative_unital() && right_side.is_associative_unital(),
        multiplicative,
        bijective,
        left_action_formula: left_ok,
        right_action_formula: right_ok,
    })
}

/// Vertices `(i_1, …, i_d)` with `1 ≤ i_1 ≤ ⋯ ≤ i_d ≤ s`, as residues.
pub fn typea_vertices(g: &AbelianGroup, s: usize) -> Vec<Vec<u32>> {
    g.elements()
        .into_iter()
        .filter(|e| e.iter().all(|&x| x >= 1 && x as usize <= s) && e.windows(2).all(|w| w[0] <= w[1]))
        .collect()
}

#[derive(Clone, Debug)]
pub struct TruncationReport {
    pub d: usize,
    pub orders: Vec<u32>,
    pub s: usize,
    /// `min(orders) − 1 ≥ s`, the hypothesis used here.
    pub hypothesis: bool,
    pub vertices: Vec<Vec<u32>>,
    pub dual_dim: usize,
    pub zigzag_dim: usize,
    pub corner_dim: usize,
    pub zigzag_iso: IsoOutcome,
    pub lambda_iso: IsoOutcome,
    /// Residue tuple matched to each vertex label of `Z^d_s`, read off the isomorphism.
    pub vertex_correspondence: Vec<(Vec<u32>, Vec<u32>)>,
}

impl TruncationReport {
    pub fn holds(&self) -> bool {
        self.hypothesis && self.zigzag_iso.is_found() && self.lambda_iso.is_found()
    }
}

/// Data for `eAe ≅ Z^d_s` with `A = Z_{d+1}(Sym(V) # G)`.
pub struct Truncation {
    pub report: TruncationReport,
    pub corner: Algebra,
}

pub fn typea_truncation(d: usize, orders: &[u32], s: usize, seed: u64) -> Result<Truncation> {
    let g = AbelianGroup::new(orders)?;
    if g.rank() != d {
        return Err(Error::Invalid("one order per direction is required".into()));
    }
    let field = g.default_field();
    let (v, _) = standard_reps(&g);
    let hypothesis = orders.iter().all(|&o| o as usize > s);
    let q = mckay_quiver(&g, &v)?;
    let rels = commutativity_relations(&q, &g, &v, field);
    let quad = QuadraticPresentation::new(q.clone(), &rels, field)?;
    let dual = quad.dual().present(None)?;
    let zig = d_trivial_extension(&dual.algebra, d as i64);
    let a = &zig.algebra;
    let verts = typea_vertices(&g, s);
    let indices: Vec<usize> = verts
        .iter()
        .map(|e| a.vertices.iter().position(|l| *l == g.label(e)).expect("McKay vertex"))
        .collect();
    let (corner, _) = a.truncate(&indices);
    let z = zigzag_presentation(d, s, field)?;
    let opts = IsoOptions { seed, ..IsoOptions::default() };
    let zigzag_iso = find_graded_isomorphism(&z.presentation, &corner, &opts);
    let mut vertex_correspondence = Vec::new();
    if let IsoOutcome::Found(m) = &zigzag_iso {
        for (zv, &cv) in m.vertex_map.iter().enumerate() {
            let y = z.presentation.quiver.vertices()[zv].tuple().map(|t| t.to_vec()).unwrap_or_default();
            let r = corner.vertices[cv].tuple().map(|t| t.to_vec()).unwrap_or_default();
            vertex_correspondence.push((y, r));
        }
    }
    let sym = PresentedAlgebra::new(q, rels, field, Some((s + 2) as u32))?;
    let others: Vec<usize> = (0..sym.quiver.num_vertices()).filter(|i| !indices.contains(i)).collect();
    let quotient = sym.quotient_by_idempotent(&others)?;
    let lambda = lambda_ds(d, s, field)?;
    let lambda_iso = find_graded_isomorphism(&lambda.presentation, &quotient.algebra, &opts);
    let report = TruncationReport {
        d,
        orders: orders.to_vec(),
        s,
        hypothesis,
        vertices: verts,
        dual_dim: dual.dim(),
        zigzag_dim: a.dim(),
        corner_dim: corner.dim(),
        zigzag_iso,
        lambda_iso,
        vertex_correspondence,
    };
    Ok(Truncation { report, corner })
}

pub fn typea_truncation_check(d: usize, orders: &[u32], s: usize, seed: u64) -> Result<TruncationReport> {
    Ok(typea_truncation(d, orders, s, seed)?.report)
}

#[derive(Clone, Debug)]
pub struct EquivariantReport {
    pub truncation: TruncationReport,
    pub lifted: Vec<RelationOutcome>,
    pub direct: Vec<RelationOutcome>,
}

impl EquivariantReport {
    pub fn holds(&self) -> bool {
        self.truncation.holds() && self.lifted.iter().chain(&self.direct).all(|o| o.status == Status::Pass)
    }
}

/// Runs the relations of `G^d_s` on the certified corner `eAe`, in both modes.
pub fn equivariant_relation_suite(d: usize, orders: &[u32], s: usize, seed: u64) -> Result<EquivariantReport> {
    let t = typea_truncation(d, orders, s, seed)?;
    let IsoOutcome::Found(m) = &t.report.zigzag_iso else {
        return Ok(EquivariantReport { truncation: t.report, lifted: Vec::new(), direct: Vec::new() });
    };
    let z = zigzag_presentation(d, s, t.corner.field)?;
    let group = group_presentation(&z.presentation.quiver, d + 1);
    let mut checker = RelationChecker::on_algebra(t.corner.clone(), group, m.vertex_map.clone(), seed);
    let lifted = checker.check_all(Mode::Lifted)?;
    let direct = checker.check_all(Mode::Direct)?;
    Ok(EquivariantReport { truncation: t.report, lifted, direct })
}
