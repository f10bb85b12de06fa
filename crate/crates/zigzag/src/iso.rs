//! Search for graded isomorphisms from a presented algebra onto a table algebra.
//!
//! The search screens vertex bijections by the graded dimensions of the blocks `e_a A e_b`,
//! then sends every arrow to a scalar multiple of a basis element of the matching block.
//! Substituting into the relations gives monomial equations in the scalars; these are solved
//! by multiplicative elimination. Over the rationals a system whose constants are all `±1` is
//! decided exactly through signs, which is what makes a `Refuted` verdict possible.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraMorphism, PresentedAlgebra};
use crate::linalg::{self, Accumulator, SparseVec};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug)]
pub enum IsoOutcome {
    Found(AlgebraMorphism),
    Refuted(String),
    Unknown(String),
}

impl IsoOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, IsoOutcome::Found(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, IsoOutcome::Refuted(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            IsoOutcome::Found(_) => "found",
            IsoOutcome::Refuted(_) => "refuted",
            IsoOutcome::Unknown(_) => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsoOptions {
    pub seed: u64,
    pub max_bijections: usize,
    pub max_choices: usize,
    pub random_tries: usize,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { seed: 0, max_bijections: 5000, max_choices: 64, random_tries: 8 }
    }
}

type Profile = Vec<Vec<BTreeMap<i32, usize>>>;

fn profile(a: &Algebra) -> Profile {
    let n = a.num_vertices();
    (0..n).map(|x| (0..n).map(|y| a.block_degrees(x, y)).collect()).collect()
}

/// Vertex bijections compatible with the graded block dimensions, identity-like maps first.
/// The flag reports whether the enumeration was exhaustive.
pub fn compatible_bijections(source: &Algebra, target: &Algebra, cap: usize) -> (Vec<Vec<usize>>, bool) {
    let n = source.num_vertices();
    if n != target.num_vertices() {
        return (Vec::new(), true);
    }
    let ps = profile(source);
    let pt = profile(target);
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    // Prefer the target vertex with the same label, then the same index.
    let preferred: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut order: Vec<usize> = (0..n).collect();
            let same_label = target.vertex(&source.vertices[v]);
            order.sort_by_key(|&w| (Some(w) != same_label, w != v, w));
            order
        })
        .collect();
    let mut exhaustive = true;
    fn rec(
        v: usize,
        n: usize,
        ps: &Profile,
        pt: &Profile,
        preferred: &[Vec<usize>],
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
        cap: usize,
        exhaustive: &mut bool,
    ) {
        if out.len() >= cap {
            *exhaustive = false;
            return;
        }
        if v == n {
            out.push(current.clone());
            return;
        }
        for &w in &preferred[v] {
            if used[w] {
                continue;
            }
            if ps[v][v] != pt[w][w] {
                continue;
            }
            let ok = (0..v).all(|u| ps[u][v] == pt[current[u]][w] && ps[v][u] == pt[w][current[u]]);
            if !ok {
                continue;
            }
            used[w] = true;
            current.push(w);
            rec(v + 1, n, ps, pt, preferred, current, used, out, cap, exhaustive);
            current.pop();
            used[w] = false;
            if out.len() >= cap {
                *exhaustive = false;
                return;
            }
        }
    }
    rec(0, n, &ps, &pt, &preferred, &mut current, &mut used, &mut out, cap, &mut exhaustive);
    (out, exhaustive)
}

fn powi(s: &Scalar, k: i64) -> Scalar {
    if k >= 0 {
        s.pow(k as u64)
    } else {
        s.inv().pow((-k) as u64)
    }
}

/// A system of equations `Π λ_a^{v_a} = c` in nonzero unknowns.
#[derive(Clone, Debug, Default)]
pub struct MonomialSystem {
    pub equations: Vec<(BTreeMap<usize, i64>, Scalar)>,
}

#[derive(Clone, Debug)]
pub enum MonomialSolution {
    Solved(Vec<Scalar>),
    /// No solution exists in the field.
    Inconsistent,
    Undetermined,
}

impl MonomialSystem {
    pub fn solve(&self, unknowns: usize, field: Field) -> MonomialSolution {
        let mut eqs: Vec<(BTreeMap<usize, i64>, Scalar)> = self.equations.clone();
        let mut pivots: Vec<(usize, BTreeMap<usize, i64>, Scalar)> = Vec::new();
        loop {
            let found = eqs
                .iter()
                .enumerate()
                .find_map(|(k, (v, _))| v.iter().find(|(_, e)| e.abs() == 1).map(|(a, _)| (k, *a)));
            let (k, a) = match found {
                Some(x) => x,
                None => break,
            };
            let (v, c) = eqs.swap_remove(k);
            let e = v[&a];
            for (u, cu) in eqs.iter_mut() {
                let ua = match u.get(&a) {
                    Some(&x) => x,
                    None => continue,
                };
                for (b, vb) in &v {
                    let entry = u.entry(*b).or_insert(0);
                    *entry -= ua * e * vb;
                }
                u.retain(|_, x| *x != 0);
                *cu = cu.clone() * powi(&c, -ua * e);
            }
            pivots.push((a, v, c));
        }
        let mut values: Vec<Scalar> = vec![field.one(); unknowns];
        let leftovers: Vec<&(BTreeMap<usize, i64>, Scalar)> = eqs.iter().collect();
        for (v, c) in &leftovers {
            if v.is_empty() && !c.is_one() {
                return MonomialSolution::Inconsistent;
            }
        }
        let nontrivial: Vec<&&(BTreeMap<usize, i64>, Scalar)> =
            leftovers.iter().filter(|(v, _)| !v.is_empty()).collect();
        if !nontrivial.iter().all(|(_, c)| c.is_one()) {
            let all_signs = nontrivial.iter().all(|(_, c)| c.as_sign().is_some());
            if field != Field::Rationals || !all_signs {
                return MonomialSolution::Undetermined;
            }
            // Over the rationals the sign map to {±1} is a group homomorphism, so a solution
            // exists exactly when the parity system over F_2 is solvable.
            let vars: Vec<usize> = {
                let mut s: Vec<usize> = nontrivial.iter().flat_map(|(v, _)| v.keys().copied()).collect();
                s.sort();
                s.dedup();
                s
            };
            let f2 = Field::Prime(2);
            let pos: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let rows: Vec<SparseVec> = nontrivial
                .iter()
                .map(|(v, _)| linalg::collect(v.iter().map(|(b, e)| (pos[b], f2.from_i64(*e)))))
                .collect();
            let rhs: Vec<Scalar> = nontrivial.iter().map(|(_, c)| f2.from_i64(i64::from(c.as_sign() == Some(-1)))).collect();
            match linalg::solve(&rows, &rhs, f2) {
                None => return MonomialSolution::Inconsistent,
                Some(sol) => {
                    for (i, c) in sol {
                        if !c.is_zero() {
                            values[vars[i]] = field.from_i64(-1);
                        }
                    }
                }
            }
        }
        for (a, v, c) in pivots.iter().rev() {
            let e = v[a];
            let mut rest = c.clone();
            for (b, vb) in v {
                if b != a {
                    rest = rest * powi(&values[*b], -vb);
                }
            }
            values[*a] = powi(&rest, e);
        }
        MonomialSolution::Solved(values)
    }
}

enum Attempt {
    Found(AlgebraMorphism),
    Definitive(String),
    Inconclusive(String),
}

fn parallel_ratio(w1: &SparseVec, w2: &SparseVec) -> Option<Scalar> {
    if w1.len() != w2.len() || w1.iter().zip(w2).any(|(x, y)| x.0 != y.0) {
        return None;
    }
    let k = &w1[0].1 * &w2[0].1.inv();
    if linalg::scale(w2, &k) == *w1 {
        Some(k)
    } else {
        None
    }
}

fn eval_path(target: &Algebra, start: usize, arrows: &[usize], images: &[SparseVec]) -> SparseVec {
    let mut v = target.idempotent(start);
    for &a in arrows {
        v = target.mul(&v, &images[a]);
        if v.is_empty() {
            break;
        }
    }
    v
}

fn try_choice(source: &PresentedAlgebra, target: &Algebra, sigma: &[usize], choice: &[usize]) -> Attempt {
    let field = target.field;
    let q = &source.quiver;
    let base: Vec<SparseVec> = choice.iter().map(|&b| linalg::unit(b, field)).collect();
    let mut system = MonomialSystem::default();
    let mut undetermined = 0;
    for r in &source.relations {
        let mut groups: BTreeMap<Vec<(usize, i64)>, Accumulator> = BTreeMap::new();
        for (c, p) in r {
            let mut exps: BTreeMap<usize, i64> = BTreeMap::new();
            for &a in &p.arrows {
                *exps.entry(a).or_insert(0) += 1;
            }
            let key: Vec<(usize, i64)> = exps.into_iter().collect();
            let val = eval_path(target, sigma[p.source], &p.arrows, &base);
            groups.entry(key).or_default().add_scaled(c, &val);
        }
        let nonzero: Vec<(Vec<(usize, i64)>, SparseVec)> =
            groups.into_iter().map(|(k, v)| (k, v.finish())).filter(|(_, v)| !v.is_empty()).collect();
        match nonzero.len() {
            0 => {}
            1 => {
                let name = r.first().map(|(_, p)| q.path_name(p)).unwrap_or_default();
                return Attempt::Definitive(format!("relation at {name} has a single surviving monomial"));
            }
            2 => {
                let (m1, w1) = &nonzero[0];
                let (m2, w2) = &nonzero[1];
                let kappa = match parallel_ratio(w1, w2) {
                    Some(k) => k,
                    None => {
                        let name = r.first().map(|(_, p)| q.path_name(p)).unwrap_or_default();
                        return Attempt::Definitive(format!("relation at {name} has independent monomials"));
                    }
                };
                // λ^{m1} κ w2 + λ^{m2} w2 = 0, so λ^{m1 − m2} = −1/κ.
                let mut v: BTreeMap<usize, i64> = BTreeMap::new();
                for (a, e) in m1 {
                    *v.entry(*a).or_insert(0) += e;
                }
                for (a, e) in m2 {
                    *v.entry(*a).or_insert(0) -= e;
                }
                v.retain(|_, e| *e != 0);
                system.equations.push((v, -kappa.inv()));
            }
            _ => undetermined += 1,
        }
    }
    let lambdas = match system.solve(q.num_arrows(), field) {
        MonomialSolution::Solved(l) => l,
        MonomialSolution::Inconsistent => return Attempt::Definitive("scalar system is inconsistent".into()),
        MonomialSolution::Undetermined => return Attempt::Inconclusive("scalar system not decided".into()),
    };
    let images: Vec<SparseVec> = base.iter().zip(&lambdas).map(|(b, l)| linalg::scale(b, l)).collect();
    match source.morphism_to(target, sigma.to_vec(), images) {
        Ok(m) if m.is_bijective(target) => Attempt::Found(m),
        Ok(_) => Attempt::Inconclusive("morphism is not bijective".into()),
        Err(e) => {
            if undetermined == 0 {
                Attempt::Definitive(format!("solution fails verification: {e}"))
            } else {
                Attempt::Inconclusive(format!("{undetermined} relations with three or more monomials: {e}"))
            }
        }
    }
}

fn random_attempt(source: &PresentedAlgebra, target: &Algebra, sigma: &[usize], rng: &mut ChaCha8Rng) -> Option<AlgebraMorphism> {
    let field = target.field;
    let images: Vec<SparseVec> = source
        .quiver
        .arrows()
        .iter()
        .map(|arr| {
            let cands: Vec<usize> = target
                .block(sigma[arr.source], sigma[arr.target])
                .iter()
                .copied()
                .filter(|&b| target.basis[b].degree == arr.degree)
                .collect();
            linalg::collect(cands.iter().map(|&b| (b, field.from_i64(rng.gen_range(-3..=3)))))
        })
        .collect();
    let m = source.morphism_to(target, sigma.to_vec(), images).ok()?;
    if m.is_bijective(target) {
        Some(m)
    } else {
        None
    }
}

/// Looks for a graded isomorphism from the presented algebra `source` onto `target`.
pub fn find_graded_isomorphism(source: &PresentedAlgebra, target: &Algebra, opts: &IsoOptions) -> IsoOutcome {
    let sa = &source.algebra;
    if source.field() != target.field {
        return IsoOutcome::Unknown("algebras are over different fields".into());
    }
    if !source.complete {
        return IsoOutcome::Unknown("source presentation is truncated".into());
    }
    if sa.dims_by_degree() != target.dims_by_degree() {
        return IsoOutcome::Refuted("graded dimensions differ".into());
    }
    let (bijections, exhaustive) = compatible_bijections(sa, target, opts.max_bijections);
    if bijections.is_empty() {
        return if exhaustive {
            IsoOutcome::Refuted("no vertex bijection preserves the graded block dimensions".into())
        } else {
            IsoOutcome::Unknown("vertex bijection search capped".into())
        };
    }
    let q = &source.quiver;
    let mut definitive_everywhere = exhaustive && target.field == Field::Rationals;
    let mut last_reason = String::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for sigma in &bijections {
        let cands: Vec<Vec<usize>> = q
            .arrows()
            .iter()
            .map(|arr| {
                target
                    .block(sigma[arr.source], sigma[arr.target])
                    .iter()
                    .copied()
                    .filter(|&b| target.basis[b].degree == arr.degree)
                    .collect()
            })
            .collect();
        if cands.iter().any(|c| c.is_empty()) {
            last_reason = "an arrow has no candidate image".into();
            continue;
        }
        if cands.iter().any(|c| c.len() != 1) {
            definitive_everywhere = false;
        }
        // Enumerate injective choices of one basis element per arrow, capped.
        let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
        let mut capped = false;
        for c in &cands {
            let mut next = Vec::new();
            for partial in &choices {
                for &b in c {
                    if partial.contains(&b) {
                        continue;
                    }
                    let mut p = partial.clone();
                    p.push(b);
                    next.push(p);
                    if next.len() >= opts.max_choices {
                        capped = true;
                        break;
                    }
                }
                if capped {
                    break;
                }
            }
            choices = next;
        }
        if capped {
            definitive_everywhere = false;
        }
        for choice in &choices {
            match try_choice(source, target, sigma, choice) {
                Attempt::Found(m) => return IsoOutcome::Found(m),
                Attempt::Definitive(r) => last_reason = r,
                Attempt::Inconclusive(r) => {
                    definitive_everywhere = false;
                    last_reason = r;
                }
            }
        }
    }
    if definitive_everywhere {
        return IsoOutcome::Refuted(format!("every compatible vertex bijection fails: {last_reason}"));
    }
    for sigma in bijections.iter().take(4) {
        for _ in 0..opts.random_tries {
            if let Some(m) = random_attempt(source, target, sigma, &mut rng) {
                return IsoOutcome::Found(m);
            }
        }
    }
    IsoOutcome::Unknown(format!("search exhausted: {last_reason}"))
}

/// Convenience wrapper for two presented algebras.
pub fn find_iso_presented(a: &PresentedAlgebra, b: &PresentedAlgebra, opts: &IsoOptions) -> IsoOutcome {
    find_graded_isomorphism(a, &b.algebra, opts)
}

/// Convenience wrapper for two table algebras: the source is re-presented first.
pub fn find_iso_tables(a: &Algebra, b: &Algebra, opts: &IsoOptions) -> IsoOutcome {
    match PresentedAlgebra::from_algebra(a) {
        Ok((p, to_a)) => match find_graded_isomorphism(&p, b, opts) {
            IsoOutcome::Found(m) => {
                let back = to_a.inverse(a).expect("re-presentation is bijective");
                IsoOutcome::Found(back.compose(&m))
            }
            other => other,
        },
        Err(e) => IsoOutcome::Unknown(format!("re-presentation failed: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{binomial, monomial};
    use crate::quiver::{ArrowSpec, Quiver, VertexLabel};

    fn id(i: u32) -> VertexLabel {
        VertexLabel::Id(i)
    }

    #[test]
    fn identity_is_found() {
        let q = Quiver::new(
            vec![id(1), id(2)],
            vec![ArrowSpec::new("a", id(1), id(2), 1), ArrowSpec::new("b", id(2), id(1), 1)],
        )
        .unwrap();
        let f = Field::Rationals;
        let rels = vec![monomial(&q, &["a", "b", "a"], f), monomial(&q, &["b", "a", "b"], f)];
        let a = PresentedAlgebra::new(q, rels, f, None).unwrap();
        let out = find_iso_presented(&a, &a, &IsoOptions::default());
        assert!(out.is_found());
    }

    #[test]
    fn commutative_versus_anticommutative_square() {
        let f = Field::Rationals;
        let q = Quiver::new(
            vec![id(1), id(2), id(3), id(4)],
            vec![
                ArrowSpec::new("a", id(1), id(2), 1),
                ArrowSpec::new("b", id(2), id(4), 1),
                ArrowSpec::new("c", id(1), id(3), 1),
                ArrowSpec::new("d", id(3), id(4), 1),
            ],
        )
        .unwrap();
        let comm = PresentedAlgebra::new(q.clone(), vec![binomial(&q, &["a", "b"], &["c", "d"], f)], f, None).unwrap();
        let mut anti = binomial(&q, &["a", "b"], &["c", "d"], f);
        anti[1].0 = f.one();
        let anti = PresentedAlgebra::new(q, vec![anti], f, None).unwrap();
        assert!(find_iso_presented(&comm, &anti, &IsoOptions::default()).is_found());
    }

    #[test]
    fn sign_obstruction_on_loops() {
        // x y = y x versus x y = −y x on a single vertex: not isomorphic over Q.
        let f = Field::Rationals;
        let q = Quiver::new(
            vec![id(1)],
            vec![ArrowSpec::new("x", id(1), id(1), 1), ArrowSpec::new("y", id(1), id(1), 1)],
        )
        .unwrap();
        let sq = |n: &str| monomial(&q, &[n, n], f);
        let comm = PresentedAlgebra::new(q.clone(), vec![sq("x"), sq("y"), binomial(&q, &["x", "y"], &["y", "x"], f)], f, None).unwrap();
        let mut ac = binomial(&q, &["x", "y"], &["y", "x"], f);
        ac[1].0 = f.one();
        let anti = PresentedAlgebra::new(q.clone(), vec![sq("x"), sq("y"), ac], f, None).unwrap();
        assert_eq!(comm.dim(), 4);
        assert_eq!(anti.dim(), 4);
        let out = find_iso_presented(&comm, &anti, &IsoOptions::default());
        assert!(!out.is_found());
    }

    #[test]
    fn monomial_system_signs() {
        let f = Field::Rationals;
        let mut s = MonomialSystem::default();
        // λ0² = −1 has no rational solution.
        s.equations.push((BTreeMap::from([(0, 2)]), f.from_i64(-1)));
        assert!(matches!(s.solve(1, f), MonomialSolution::Inconsistent));
        let mut t = MonomialSystem::default();
        t.equations.push((BTreeMap::from([(0, 1), (1, -1)]), f.from_i64(3)));
        t.equations.push((BTreeMap::from([(1, 2)]), f.one()));
        match t.solve(2, f) {
            MonomialSolution::Solved(v) => assert_eq!(&v[0] * &v[1].inv(), f.from_i64(3)),
            other => panic!("{other:?}"),
        }
    }
}
