//! Dual bimodules, trivial extensions (plain, twisted, and the sign-twisted `(d+1)` version),
//! zigzag algebras, Frobenius forms and Nakayama automorphisms.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraMorphism, BasisElement, PresentedAlgebra};
use crate::error::{Error, Result};
use crate::koszul::QuadraticPresentation;
use crate::linalg::{self, Accumulator, SparseVec};
use crate::scalar::Scalar;

/// `Λ ⋉ Λ*` with the dual placed in degrees `dual_shift − i` and the left action on the dual
/// twisted by an automorphism.
#[derive(Clone, Debug)]
pub struct TrivialExtension {
    pub algebra: Algebra,
    /// Dimension of the base algebra; dual basis element `k` sits at index `base_dim + k`.
    pub base_dim: usize,
    pub dual_shift: i32,
    /// Twisting automorphism on the base, by columns (identity when untwisted).
    pub twist: Vec<SparseVec>,
}

/// The sign automorphism `a ↦ (−1)^{d·deg a} a`.
pub fn sign_twist(a: &Algebra, d: i64) -> Vec<SparseVec> {
    (0..a.dim())
        .map(|i| {
            let neg = (d * a.basis[i].degree as i64).rem_euclid(2) == 1;
            vec![(i, a.field.sign(neg))]
        })
        .collect()
}

fn dual_name(a: &Algebra, i: usize) -> String {
    if a.is_idempotent_index(i) {
        format!("e{}*", a.vertices[a.basis[i].source].compact().replace(',', "_"))
    } else {
        format!("{}*", a.names[i].replace('.', "~"))
    }
}

/// Action matrices of the dual bimodule: `(a·f)(x) = f(xa)` and `(f·a)(x) = f(ax)`.
/// Returns, for each pair `(i, j)`, `b_i · f_j` and `f_j · b_i` in the dual basis.
pub fn dual_bimodule_actions(a: &Algebra) -> (BTreeMap<(usize, usize), SparseVec>, BTreeMap<(usize, usize), SparseVec>) {
    let mut left: BTreeMap<(usize, usize), Accumulator> = BTreeMap::new();
    let mut right: BTreeMap<(usize, usize), Accumulator> = BTreeMap::new();
    for k in 0..a.dim() {
        for (i, prod) in a.products_of(k) {
            // b_k b_i = Σ c_j b_j, so b_i·f_j gains c_j f_k and f_j·b_k gains c_j f_i.
            for (j, c) in prod {
                left.entry((*i, *j)).or_default().add_term(k, c.clone());
                right.entry((*j, k)).or_default().add_term(*i, c.clone());
            }
        }
    }
    let fin = |m: BTreeMap<(usize, usize), Accumulator>| {
        m.into_iter().map(|(k, v)| (k, v.finish())).filter(|(_, v)| !v.is_empty()).collect()
    };
    (fin(left), fin(right))
}

/// Builds `Λ ⋉ _φΛ*` with dual degrees `dual_shift − i`. `twist` is φ by columns.
pub fn twisted_trivial_extension(a: &Algebra, twist: Option<&[SparseVec]>, dual_shift: i32) -> Result<TrivialExtension> {
    let n = a.dim();
    let field = a.field;
    let twist: Vec<SparseVec> = match twist {
        Some(t) => {
            if t.len() != n || linalg::invert(t, field).is_none() {
                return Err(Error::Invalid("twist is not an automorphism".into()));
            }
            t.to_vec()
        }
        None => (0..n).map(|i| linalg::unit(i, field)).collect(),
    };
    let mut basis = a.basis.clone();
    let mut names = a.names.clone();
    for i in 0..n {
        let b = &a.basis[i];
        basis.push(BasisElement { source: b.target, target: b.source, degree: dual_shift - b.degree });
        names.push(dual_name(a, i));
    }
    let (left, right) = dual_bimodule_actions(a);
    let shift = |v: &SparseVec| -> SparseVec { v.iter().map(|(k, c)| (k + n, c.clone())).collect() };
    let mut products: Vec<((usize, usize), SparseVec)> = Vec::new();
    for i in 0..n {
        for (j, p) in a.products_of(i) {
            products.push(((i, *j), p.clone()));
        }
    }
    // Untwisted left actions grouped by acting element.
    let mut left_by: BTreeMap<usize, Vec<(usize, &SparseVec)>> = BTreeMap::new();
    for ((i, j), v) in &left {
        left_by.entry(*i).or_default().push((*j, v));
    }
    for m in 0..n {
        if a.is_idempotent_index(m) {
            continue;
        }
        let mut acc: BTreeMap<usize, Accumulator> = BTreeMap::new();
        for (i, c) in &twist[m] {
            if let Some(list) = left_by.get(i) {
                for (j, v) in list {
                    acc.entry(*j).or_default().add_scaled(c, v);
                }
            }
        }
        for (j, v) in acc {
            let v = v.finish();
            if !v.is_empty() {
                products.push(((m, j + n), shift(&v)));
            }
        }
    }
    for ((j, k), v) in &right {
        if a.is_idempotent_index(*k) {
            continue;
        }
        products.push(((j + n, *k), shift(v)));
    }
    let algebra = Algebra::new(field, a.vertices.clone(), basis, names, a.idempotents.clone(), products);
    Ok(TrivialExtension { algebra, base_dim: n, dual_shift, twist })
}

/// `Triv(Λ)` with the dual placed one degree above the top of `Λ`.
pub fn trivial_extension(a: &Algebra) -> TrivialExtension {
    twisted_trivial_extension(a, None, a.top_degree() + 1).expect("identity twist")
}

/// `Triv_{d+1}(Λ)`: multiplication `(a,f)(b,g) = (ab, fb + (−1)^{d·deg a} a g)` with the dual
/// shifted by `d+1`.
pub fn d_trivial_extension(a: &Algebra, d: i64) -> TrivialExtension {
    let z = sign_twist(a, d);
    twisted_trivial_extension(a, Some(&z), (d + 1) as i32).expect("sign twist is invertible")
}

impl TrivialExtension {
    /// The functional `(a, f) ↦ f(1)`.
    pub fn functional(&self) -> SparseVec {
        let mut t: SparseVec = self.algebra.idempotents.iter().map(|&e| (e + self.base_dim, self.algebra.field.one())).collect();
        t.sort_by_key(|e| e.0);
        t
    }

    /// `α(a, f) = (φ(a), f∘φ^{-1})` by columns.
    pub fn expected_nakayama(&self) -> Vec<SparseVec> {
        let n = self.base_dim;
        let field = self.algebra.field;
        let inv = linalg::invert(&self.twist, field).expect("twist invertible");
        let mut cols: Vec<SparseVec> = self.twist.clone();
        // f_k∘ψ = Σ_i ψ[k][i] f_i.
        let rows = linalg::transpose(&inv);
        let mut dual_cols: Vec<SparseVec> = vec![Vec::new(); n];
        for (k, row) in rows.into_iter().enumerate() {
            // transpose drops empty rows, but ψ is invertible so every row is nonempty.
            dual_cols[k] = row.iter().map(|(i, c)| (i + n, c.clone())).collect();
        }
        cols.extend(dual_cols);
        cols
    }

    /// Builds the presentation of the extension with its isomorphism onto the table.
    pub fn present(&self) -> Result<(PresentedAlgebra, AlgebraMorphism)> {
        PresentedAlgebra::from_algebra(&self.algebra)
    }
}

/// `Z_{d+1}(Λ) = Triv_{d+1}(Λ^!)`, with the dual algebra presented from its quadratic data.
pub fn zigzag(p: &QuadraticPresentation, d: i64, bound: Option<u32>) -> Result<(PresentedAlgebra, TrivialExtension)> {
    let dual = p.dual().present(bound)?;
    if !dual.complete {
        return Err(Error::Unsupported("quadratic dual is not finite-dimensional within the bound".into()));
    }
    let z = d_trivial_extension(&dual.algebra, d);
    Ok((dual, z))
}

/// Gram matrix of `t(xy)` by columns: column `j` holds `t(b_i b_j)` in row `i`.
pub fn form_columns(a: &Algebra, t: &SparseVec) -> Vec<SparseVec> {
    let tmap: BTreeMap<usize, &Scalar> = t.iter().map(|(i, c)| (*i, c)).collect();
    let mut cols: Vec<Accumulator> = (0..a.dim()).map(|_| Accumulator::new()).collect();
    for i in 0..a.dim() {
        for (j, p) in a.products_of(i) {
            for (k, c) in p {
                if let Some(tk) = tmap.get(k) {
                    cols[*j].add_term(i, c * *tk);
                }
            }
        }
    }
    cols.into_iter().map(|c| c.finish()).collect()
}

fn transpose_square(cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut out: Vec<SparseVec> = vec![Vec::new(); cols.len()];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            out[*i].push((j, c.clone()));
        }
    }
    out
}

fn matmul(a: &[SparseVec], b: &[SparseVec]) -> Vec<SparseVec> {
    b.iter().map(|col| linalg::apply(a, col)).collect()
}

#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub frobenius: bool,
    pub reason: Option<String>,
    pub functional: SparseVec,
    pub nondegenerate: bool,
    /// Nakayama automorphism by columns: `t(xy) = t(y α(x))`.
    pub nakayama: Vec<SparseVec>,
    pub nakayama_vertex_map: Vec<usize>,
    pub nakayama_is_algebra_map: bool,
    pub nakayama_squared_identity: bool,
    /// Nakayama automorphism is conjugation by a unit of degree zero.
    pub nakayama_inner: bool,
    pub symmetric: bool,
    pub gorenstein: Option<i32>,
}

fn right_socle(a: &Algebra, v: usize, gens: &[usize]) -> Vec<SparseVec> {
    let dom = a.starting_at(v);
    let stride = a.dim();
    let cols: Vec<SparseVec> = dom
        .iter()
        .map(|&b| {
            let mut acc = Accumulator::new();
            for (gi, &g) in gens.iter().enumerate() {
                if let Some(p) = a.mul_basis(b, g) {
                    for (k, c) in p {
                        acc.add_term(gi * stride + k, c.clone());
                    }
                }
            }
            acc.finish()
        })
        .collect();
    linalg::kernel_of_columns(&cols, a.field)
        .into_iter()
        .map(|k| linalg::collect(k.iter().map(|(j, c)| (dom[*j], c.clone()))))
        .collect()
}

fn left_socle(a: &Algebra, v: usize, gens: &[usize]) -> Vec<SparseVec> {
    let dom = a.ending_at(v);
    let stride = a.dim();
    let cols: Vec<SparseVec> = dom
        .iter()
        .map(|&b| {
            let mut acc = Accumulator::new();
            for (gi, &g) in gens.iter().enumerate() {
                if let Some(p) = a.mul_basis(g, b) {
                    for (k, c) in p {
                        acc.add_term(gi * stride + k, c.clone());
                    }
                }
            }
            acc.finish()
        })
        .collect();
    linalg::kernel_of_columns(&cols, a.field)
        .into_iter()
        .map(|k| linalg::collect(k.iter().map(|(j, c)| (dom[*j], c.clone()))))
        .collect()
}

/// A socle-supported functional when every indecomposable projective has a simple socle and
/// the socles are permuted; `Err` carries the reason the algebra is not Frobenius.
pub fn socle_functional(a: &Algebra) -> std::result::Result<(SparseVec, Vec<usize>, Option<i32>), String> {
    let gens = a.radical_generators();
    let mut t = Vec::new();
    let mut perm = Vec::new();
    let mut degrees = Vec::new();
    for v in 0..a.num_vertices() {
        let rs = right_socle(a, v, &gens);
        if rs.len() != 1 {
            return Err(format!("right socle at vertex {} has dimension {}", a.vertices[v], rs.len()));
        }
        let ls = left_socle(a, v, &gens);
        if ls.len() != 1 {
            return Err(format!("left socle at vertex {} has dimension {}", a.vertices[v], ls.len()));
        }
        let s = &rs[0];
        let (k, c) = s.last().expect("nonzero socle element");
        t.push((*k, c.inv()));
        perm.push(a.basis[*k].target);
        degrees.push(a.basis[*k].degree);
    }
    let mut seen = vec![false; perm.len()];
    for &p in &perm {
        if seen[p] {
            return Err("socles are not permuted by the vertices".into());
        }
        seen[p] = true;
    }
    t.sort_by_key(|e| e.0);
    let gor = degrees.first().copied().filter(|d0| degrees.iter().all(|d| d == d0));
    Ok((t, perm, gor))
}

fn nakayama_from_form(a: &Algebra, t: &SparseVec) -> Option<Vec<SparseVec>> {
    let m = form_columns(a, t);
    let minv = linalg::invert(&m, a.field)?;
    // α = M^{-1} Mᵀ, where M[i][j] = t(b_i b_j).
    Some(matmul(&minv, &transpose_square(&m)))
}

fn vertex_map_of(a: &Algebra, alpha: &[SparseVec]) -> Vec<usize> {
    (0..a.num_vertices())
        .map(|v| {
            let img = &alpha[a.idempotents[v]];
            img.first().map(|(i, _)| a.basis[*i].target).unwrap_or(v)
        })
        .collect()
}

fn is_algebra_map(a: &Algebra, alpha: &[SparseVec]) -> bool {
    let m = AlgebraMorphism { vertex_map: vertex_map_of(a, alpha), arrow_images: Vec::new(), matrix: alpha.to_vec() };
    m.multiplicative_defect(a, a).is_none()
}

/// Whether `α` is conjugation by a unit `u = Σ c_v e_v`, i.e. `u x = α(x) u` on generators.
pub fn inner_by_degree_zero(a: &Algebra, alpha: &[SparseVec]) -> bool {
    let nv = a.num_vertices();
    let mut gens = a.radical_generators();
    gens.extend(a.idempotents.iter().copied());
    let mut rows: Vec<SparseVec> = Vec::new();
    // u x − α(x) u = Σ_v c_v (e_v x − α(x) e_v): one column per vertex.
    for &g in &gens {
        let x = linalg::unit(g, a.field);
        let cols: Vec<SparseVec> = (0..nv)
            .map(|v| linalg::sub(&a.mul(&a.idempotent(v), &x), &a.mul(&alpha[g], &a.idempotent(v))))
            .collect();
        rows.extend(linalg::transpose(&cols));
    }
    let sols = linalg::nullspace(&rows, nv, a.field);
    // A unit needs every c_v nonzero; take a generic combination of the solution space.
    let mut combo: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, s) in sols.iter().enumerate() {
        let w = a.field.from_i64(k as i64 * 7919 + 1);
        for (v, c) in s {
            let e = combo.entry(*v).or_insert_with(|| a.field.zero());
            *e = &*e + &(c * &w);
        }
    }
    (0..nv).all(|v| combo.get(&v).is_some_and(|c| !c.is_zero()))
}

/// Whether some symmetric functional (vanishing on commutators) is nondegenerate. A random
/// element of the space of symmetric functionals is tested, so a negative answer is
/// correct with high probability rather than certified.
pub fn symmetric_functional(a: &Algebra, seed: u64, tries: usize) -> Option<SparseVec> {
    let mut rows: Vec<SparseVec> = Vec::new();
    for i in 0..a.dim() {
        for (j, p) in a.products_of(i) {
            if *j < i {
                continue;
            }
            let q = a.mul_basis(*j, i).cloned().unwrap_or_default();
            let d = linalg::sub(p, &q);
            if !d.is_empty() {
                rows.push(d);
            }
        }
        for &j in a.starting_at(a.basis[i].target) {
            if j < i && a.mul_basis(i, j).is_none() {
                if let Some(q) = a.mul_basis(j, i) {
                    rows.push(q.clone());
                }
            }
        }
    }
    let space = linalg::nullspace(&rows, a.dim(), a.field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let mut acc = Accumulator::new();
        for s in &space {
            let w = a.field.from_i64(rng.gen_range(1..=1000));
            acc.add_scaled(&w, s);
        }
        let t = acc.finish();
        if linalg::rank(&form_columns(a, &t), a.field) == a.dim() {
            return Some(t);
        }
    }
    None
}

/// A nondegenerate functional with `t(xy) = t(y φ(x))`, i.e. `A* ≅ A_φ` as bimodules with
/// `φ` as Nakayama automorphism. Random elements of the solution space are tried.
pub fn functional_with_nakayama(a: &Algebra, phi: &AlgebraMorphism, seed: u64, tries: usize) -> Option<SparseVec> {
    let mut gens = a.radical_generators();
    gens.extend(a.idempotents.iter().copied());
    let mut rows: Vec<SparseVec> = Vec::new();
    for &g in &gens {
        let x = linalg::unit(g, a.field);
        let fx = phi.apply(&x);
        for j in 0..a.dim() {
            let y = linalg::unit(j, a.field);
            let d = linalg::sub(&a.mul(&x, &y), &a.mul(&y, &fx));
            if !d.is_empty() {
                rows.push(d);
            }
        }
    }
    let space = linalg::nullspace(&rows, a.dim(), a.field);
    if space.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let mut acc = Accumulator::new();
        for s in &space {
            acc.add_scaled(&a.field.from_i64(rng.gen_range(1..=1000)), s);
        }
        let t = acc.finish();
        if linalg::rank(&form_columns(a, &t), a.field) == a.dim() {
            return Some(t);
        }
    }
    None
}

/// Frobenius analysis. With a functional supplied (for instance the one of a trivial
/// extension) it is used directly; otherwise a socle-supported functional is constructed.
pub fn frobenius_analyze(a: &Algebra, hint: Option<&SparseVec>, seed: u64) -> Result<FrobeniusData> {
    if !a.positively_graded() {
        return Err(Error::Unsupported("Frobenius analysis needs a positively graded radical".into()));
    }
    let field = a.field;
    let not_frob = |reason: String| FrobeniusData {
        frobenius: false,
        reason: Some(reason),
        functional: Vec::new(),
        nondegenerate: false,
        nakayama: Vec::new(),
        nakayama_vertex_map: Vec::new(),
        nakayama_is_algebra_map: false,
        nakayama_squared_identity: false,
        nakayama_inner: false,
        symmetric: false,
        gorenstein: None,
    };
    let socle = socle_functional(a);
    let (t, gorenstein) = match (hint, &socle) {
        (Some(h), Ok((_, _, g))) => (h.clone(), *g),
        (Some(h), Err(_)) => (h.clone(), None),
        (None, Ok((t, _, g))) => (t.clone(), *g),
        (None, Err(r)) => return Ok(not_frob(r.clone())),
    };
    let alpha = match nakayama_from_form(a, &t) {
        Some(al) => al,
        None => {
            let reason = match socle {
                Err(r) => r,
                Ok(_) => "functional is degenerate".into(),
            };
            return Ok(not_frob(reason));
        }
    };
    let squared = matmul(&alpha, &alpha);
    let identity: Vec<SparseVec> = (0..a.dim()).map(|i| linalg::unit(i, field)).collect();
    let nakayama_inner = inner_by_degree_zero(a, &alpha);
    let symmetric = nakayama_inner || symmetric_functional(a, seed, 3).is_some();
    Ok(FrobeniusData {
        frobenius: true,
        reason: None,
        functional: t,
        nondegenerate: true,
        nakayama_vertex_map: vertex_map_of(a, &alpha),
        nakayama_is_algebra_map: is_algebra_map(a, &alpha),
        nakayama_squared_identity: squared == identity,
        nakayama: alpha,
        nakayama_inner,
        symmetric,
        gorenstein,
    })
}

/// Checks for an extension that the explicit form is nondegenerate and that the computed
/// Nakayama automorphism equals `(φ(a), f∘φ^{-1})`.
pub fn check_extension_form(te: &TrivialExtension) -> (bool, bool) {
    let t = te.functional();
    match nakayama_from_form(&te.algebra, &t) {
        None => (false, false),
        Some(alpha) => (true, alpha == te.expected_nakayama()),
    }
}

/// A left module presented as `⊕_k A e_{v_k}` modulo a submodule spanned by given vectors.
#[derive(Clone, Debug)]
pub struct LeftModule {
    pub generators: Vec<usize>,
    pub relations: Vec<SparseVec>,
}

impl LeftModule {
    pub fn projective(v: usize) -> LeftModule {
        LeftModule { generators: vec![v], relations: Vec::new() }
    }

    pub fn regular(a: &Algebra) -> LeftModule {
        LeftModule { generators: (0..a.num_vertices()).collect(), relations: Vec::new() }
    }

    /// The simple module at `v`: `A e_v` modulo its radical.
    pub fn simple(a: &Algebra, v: usize) -> LeftModule {
        let ends = a.ending_at(v);
        let relations = ends
            .iter()
            .enumerate()
            .filter(|(_, &b)| !a.is_idempotent_index(b))
            .map(|(j, _)| linalg::unit(j, a.field))
            .collect();
        LeftModule { generators: vec![v], relations }
    }
}

#[derive(Clone, Debug)]
pub struct VeeStarReport {
    pub holds: bool,
    pub hom_dims: BTreeMap<i32, usize>,
    pub dual_dims: BTreeMap<i32, usize>,
    pub map_bijective: bool,
    pub map_right_linear: bool,
}

/// Compares `Hom_A(M, A)` with `M*⟨−ℓ⟩` through `φ ↦ t∘φ` for a symmetric functional `t` of
/// degree `ℓ`.
pub fn vee_star_compare(a: &Algebra, m: &LeftModule, t: &SparseVec, ell: i32) -> VeeStarReport {
    let field = a.field;
    // Coordinates of ⊕_k A e_{v_k}.
    let ends: Vec<Vec<usize>> = m.generators.iter().map(|&v| a.ending_at(v)).collect();
    let mut offsets = Vec::new();
    let mut total = 0;
    for e in &ends {
        offsets.push(total);
        total += e.len();
    }
    let locate = |i: usize| -> (usize, usize) {
        let k = offsets.iter().rposition(|&o| o <= i).expect("coordinate");
        (k, ends[k][i - offsets[k]])
    };
    let mut rel = linalg::Echelon::new(field);
    for r in &m.relations {
        rel.insert(r);
    }
    let mbasis: Vec<usize> = (0..total).filter(|&i| !rel.is_pivot(i)).collect();
    let mpos: BTreeMap<usize, usize> = mbasis.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let project = |v: &SparseVec| -> SparseVec {
        let r = rel.reduce(v);
        linalg::collect(r.iter().map(|(i, c)| (mpos[i], c.clone())))
    };
    // Hom: images m_k ∈ e_{v_k} A with Σ a_k m_k = 0 for each relation.
    let starts: Vec<&[usize]> = m.generators.iter().map(|&v| a.starting_at(v)).collect();
    let mut hoff = Vec::new();
    let mut htotal = 0;
    for s in &starts {
        hoff.push(htotal);
        htotal += s.len();
    }
    let stride = a.dim();
    let mut cons: Vec<SparseVec> = Vec::new();
    let mut reduced_rel = rel.clone();
    reduced_rel.make_reduced();
    for (_, r) in reduced_rel.rows() {
        let cols: Vec<SparseVec> = (0..htotal)
            .map(|h| {
                let k = hoff.iter().rposition(|&o| o <= h).expect("coordinate");
                let b = starts[k][h - hoff[k]];
                let mut acc = Accumulator::new();
                for (i, c) in r {
                    let (kk, x) = locate(*i);
                    if kk == k {
                        if let Some(p) = a.mul_basis(x, b) {
                            acc.add_scaled(c, p);
                        }
                    }
                }
                acc.finish()
            })
            .collect();
        cons.extend(linalg::transpose(&cols));
        let _ = stride;
    }
    let homs = linalg::nullspace(&cons, htotal, field);
    // Degrees: a hom sending e_{v_k} to an element of degree g has degree g.
    let hdeg = |v: &SparseVec| -> i32 {
        let h = v[0].0;
        let k = hoff.iter().rposition(|&o| o <= h).expect("coordinate");
        a.basis[starts[k][h - hoff[k]]].degree
    };
    // Homogeneous basis of Hom: split each kernel vector by degree and re-span.
    let mut by_deg: BTreeMap<i32, linalg::Echelon> = BTreeMap::new();
    for v in &homs {
        let mut parts: BTreeMap<i32, SparseVec> = BTreeMap::new();
        for (h, c) in v {
            parts.entry(hdeg(&vec![(*h, c.clone())])).or_default().push((*h, c.clone()));
        }
        for (g, p) in parts {
            by_deg.entry(g).or_insert_with(|| linalg::Echelon::new(field)).insert(&p);
        }
    }
    let mut hom_dims = BTreeMap::new();
    let mut hom_basis: Vec<SparseVec> = Vec::new();
    for (g, e) in &by_deg {
        hom_dims.insert(*g, e.rank());
        hom_basis.extend(e.rows().map(|(_, r)| r.clone()));
    }
    // M* graded: (M*)_{-i} = (M_i)*; shifted by −ℓ, so degree g holds (M_{ℓ−g})*.
    let mut dual_dims = BTreeMap::new();
    for &i in &mbasis {
        let (_, b) = locate(i);
        *dual_dims.entry(ell - a.basis[b].degree).or_insert(0) += 1;
    }
    let tmap: BTreeMap<usize, Scalar> = t.iter().cloned().collect();
    let tval = |x: &SparseVec| -> Scalar {
        let mut s = field.zero();
        for (i, c) in x {
            if let Some(tc) = tmap.get(i) {
                s = &s + &(c * tc);
            }
        }
        s
    };
    // φ(x) for x = a e_{v_k} is a·m_k.
    let apply_hom = |h: &SparseVec, i: usize| -> SparseVec {
        let (k, x) = locate(i);
        let mut acc = Accumulator::new();
        for (hh, c) in h {
            let kk = hoff.iter().rposition(|&o| o <= *hh).expect("coordinate");
            if kk == k {
                if let Some(p) = a.mul_basis(x, starts[kk][hh - hoff[kk]]) {
                    acc.add_scaled(c, p);
                }
            }
        }
        acc.finish()
    };
    let to_dual = |h: &SparseVec| -> SparseVec {
        linalg::collect(mbasis.iter().enumerate().map(|(p, &i)| (p, tval(&apply_hom(h, i)))))
    };
    let images: Vec<SparseVec> = hom_basis.iter().map(to_dual).collect();
    let map_bijective = images.len() == mbasis.len() && linalg::rank(&images, field) == images.len();
    // Right linearity on generators: t∘(φ·r) = (t∘φ)·r where (f·r)(x) = f(r x).
    let mut map_right_linear = true;
    let gens = a.radical_generators();
    'outer: for h in &hom_basis {
        for &r in &gens {
            let hr: SparseVec = {
                let mut acc = Accumulator::new();
                for (hh, c) in h {
                    let kk = hoff.iter().rposition(|&o| o <= *hh).expect("coordinate");
                    let b = starts[kk][hh - hoff[kk]];
                    if let Some(p) = a.mul_basis(b, r) {
                        for (j, d) in p {
                            let pos = starts[kk].iter().position(|&x| x == *j).expect("same block");
                            acc.add_term(hoff[kk] + pos, c * d);
                        }
                    }
                }
                acc.finish()
            };
            let lhs = to_dual(&hr);
            // (t∘φ)(r x) for x = basis of M: r x computed in ⊕ A e_{v_k} and projected.
            let f = to_dual(h);
            let rhs = linalg::collect(mbasis.iter().enumerate().map(|(p, &i)| {
                let (k, x) = locate(i);
                let rx = match a.mul_basis(r, x) {
                    Some(v) => v.clone(),
                    None => Vec::new(),
                };
                let lifted: SparseVec = linalg::collect(rx.iter().map(|(j, c)| {
                    let pos = ends[k].iter().position(|&y| y == *j).expect("same column");
                    (offsets[k] + pos, c.clone())
                }));
                let proj = project(&lifted);
                (p, linalg::dot(&f, &proj, field))
            }));
            if lhs != rhs {
                map_right_linear = false;
                break 'outer;
            }
        }
    }
    let holds = hom_dims == dual_dims && map_bijective && map_right_linear;
    VeeStarReport { holds, hom_dims, dual_dims, map_bijective, map_right_linear }
}

/// The regular bimodule with one action twisted by an automorphism.
#[derive(Clone, Debug)]
pub struct TwistedRegular {
    pub twist: Vec<SparseVec>,
    pub left_side: bool,
}

impl TwistedRegular {
    pub fn new(a: &Algebra, twist: &[SparseVec], left_side: bool) -> Result<TwistedRegular> {
        if twist.len() != a.dim() || linalg::invert(twist, a.field).is_none() {
            return Err(Error::Invalid("twist is not invertible".into()));
        }
        Ok(TwistedRegular { twist: twist.to_vec(), left_side })
    }

    pub fn act(&self, a: &Algebra, x: &SparseVec, m: &SparseVec, y: &SparseVec) -> SparseVec {
        let (x, y) = if self.left_side {
            (linalg::apply(&self.twist, x), y.clone())
        } else {
            (x.clone(), linalg::apply(&self.twist, y))
        };
        a.mul(&a.mul(&x, m), &y)
    }

    /// `dim e_a M e_b` for every pair of vertices.
    pub fn block_dims(&self, a: &Algebra, vertex_map: &[usize]) -> Vec<Vec<usize>> {
        let n = a.num_vertices();
        let mut out = vec![vec![0; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let (ii, jj) = if self.left_side { (vertex_map[i], j) } else { (i, vertex_map[j]) };
                *cell = a.block(ii, jj).len();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial;
    use crate::quiver::{ArrowSpec, Quiver, VertexLabel};
    use crate::scalar::Field;

    fn id(i: u32) -> VertexLabel {
        VertexLabel::Id(i)
    }

    fn linear(n: u32) -> PresentedAlgebra {
        let verts: Vec<VertexLabel> = (1..=n).map(id).collect();
        let arrows = (1..n).map(|i| ArrowSpec::new(format!("a{i}"), id(i), id(i + 1), 1)).collect();
        PresentedAlgebra::new(Quiver::new(verts, arrows).unwrap(), vec![], Field::Rationals, None).unwrap()
    }

    #[test]
    fn trivial_extension_of_field_is_dual_numbers() {
        let q = Quiver::new(vec![id(1)], vec![]).unwrap();
        let f = PresentedAlgebra::new(q, vec![], Field::Rationals, None).unwrap();
        let te = trivial_extension(&f.algebra);
        assert_eq!(te.algebra.dim(), 2);
        let (p, _) = te.present().unwrap();
        assert_eq!(p.quiver.num_arrows(), 1);
        assert_eq!(p.relations.len(), 1);
    }

    #[test]
    fn nakayama_algebra_from_linear_quiver() {
        let a = linear(3);
        let te = trivial_extension(&a.algebra);
        assert_eq!(te.algebra.dim(), 12);
        assert!(te.algebra.associativity_defect().is_none());
        let (p, _) = te.present().unwrap();
        assert_eq!(p.quiver.num_arrows(), 3);
        let fd = frobenius_analyze(&te.algebra, Some(&te.functional()), 1).unwrap();
        assert!(fd.frobenius && fd.symmetric);
        assert_eq!(check_extension_form(&te), (true, true));
    }

    #[test]
    fn path_algebra_is_not_frobenius() {
        let a = linear(2);
        let fd = frobenius_analyze(&a.algebra, None, 1).unwrap();
        assert!(!fd.frobenius);
    }

    #[test]
    fn sign_twisted_extension_nakayama_squares_to_identity() {
        let q = Quiver::new(vec![id(1)], vec![ArrowSpec::new("x", id(1), id(1), 1)]).unwrap();
        let f = Field::Rationals;
        let a = PresentedAlgebra::new(q.clone(), vec![monomial(&q, &["x", "x"], f)], f, None).unwrap();
        let te = d_trivial_extension(&a.algebra, 1);
        assert_eq!(check_extension_form(&te), (true, true));
        let fd = frobenius_analyze(&te.algebra, Some(&te.functional()), 1).unwrap();
        assert!(fd.nakayama_squared_identity);
        assert_eq!(fd.gorenstein, Some(2));
    }

    #[test]
    fn vee_star_on_dual_numbers() {
        let q = Quiver::new(vec![id(1)], vec![ArrowSpec::new("x", id(1), id(1), 1)]).unwrap();
        let f = Field::Rationals;
        let a = PresentedAlgebra::new(q.clone(), vec![monomial(&q, &["x", "x"], f)], f, None).unwrap();
        let (t, _, g) = socle_functional(&a.algebra).unwrap();
        let g = g.unwrap();
        for m in [LeftModule::regular(&a.algebra), LeftModule::simple(&a.algebra, 0)] {
            let r = vee_star_compare(&a.algebra, &m, &t, g);
            assert!(r.holds, "{r:?}");
        }
    }
}
