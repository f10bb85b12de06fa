//! Spherical twists on type-A zigzag algebras: group relations, the longest element and the
//! Koszul bimodule complexes that control them.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use crate::algebra::{Algebra, AlgebraMorphism, PresentedAlgebra};
use crate::complexes::{
    chain_isomorphic, homology_dims, is_twisted_shifted_regular, koszul_bimodule_complex, minimize, word_complex,
    BimoduleComplex, ChainIso, HomologyBimodule, Term, TwistVerdict,
};
use crate::error::{Error, Result};
use crate::groups::{coxeter_word, group_presentation, longest_word, longest_word_length, GroupPresentation, Witness, Word};
use crate::iso::{find_graded_isomorphism, IsoOptions};
use crate::linalg::{self, SparseVec};
use crate::scalar::Field;
use crate::typea::{
    lambda_ds, nakayama_algebra, pi_ds, sign_fix_scalar, step_x, tau, x_to_y, zigzag_presentation, FamilyKind, TypeA,
    ZigzagPresentation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn from_chain_iso(c: &ChainIso) -> Status {
        match c {
            ChainIso::Isomorphic => Status::Pass,
            ChainIso::NotIsomorphic(_) => Status::Fail,
            ChainIso::Unknown(_) => Status::Unknown,
        }
    }
}

/// Vertex map and arrow pairing between a type-A algebra in `x`-coordinates and the zigzag
/// algebra in `y`-coordinates. An arrow `x → x'` pairs with the signed arrow `y(x') → y(x)`.
pub fn koszul_pairing(z: &ZigzagPresentation, m: &TypeA, kind: FamilyKind) -> Result<(Vec<usize>, Vec<SparseVec>)> {
    let a = &z.presentation;
    let field = a.field();
    let mq = &m.presentation.quiver;
    let vertex_map: Vec<usize> = match &z.lattice {
        None => vec![0; mq.num_vertices()],
        Some(lq) => mq
            .vertices()
            .iter()
            .map(|l| {
                let y = x_to_y(l.tuple().expect("tuple label"));
                lq.quiver.vertices().iter().position(|w| w.tuple() == Some(&y[..])).expect("matching vertex")
            })
            .collect(),
    };
    let mut pairing = Vec::with_capacity(mq.num_arrows());
    for (k, arr) in mq.arrows().iter().enumerate() {
        let lq = z.lattice.as_ref().ok_or_else(|| Error::Invalid("arrows need a lattice quiver".into()))?;
        let x = mq.vertices()[arr.source].tuple().expect("tuple label");
        debug_assert!(step_x(x, m.lattice.direction[k]).is_some());
        let (from, to) = (vertex_map[arr.target], vertex_map[arr.source]);
        let found = (0..=z.d).find_map(|dir| lq.arrow_at(from, dir).filter(|&b| lq.quiver.arrows()[b].target == to).map(|b| (dir, b)));
        let (dir, b) = found.ok_or_else(|| Error::CheckFailed(format!("no partner for arrow {}", arr.name)))?;
        let sign = sign_fix_scalar(kind, lq.tuple(from), dir);
        pairing.push(linalg::scale(&a.arrow_images[b], &field.from_i64(sign as i64)));
    }
    Ok((vertex_map, pairing))
}

/// The cone of `Q_A(M) → A` for `M = Π^d_s` or `Λ^d_s`.
pub fn koszul_cone(z: &ZigzagPresentation, kind: FamilyKind) -> Result<BimoduleComplex> {
    let field = z.presentation.field();
    let m = match kind {
        FamilyKind::Pi => pi_ds(z.d, z.s, field)?,
        FamilyKind::Lambda => lambda_ds(z.d, z.s, field)?,
    };
    let (vmap, pairing) = koszul_pairing(z, &m, kind)?;
    Ok(koszul_bimodule_complex(&z.presentation.algebra, &m.presentation, &vmap, &pairing, true))
}

/// Outcome of testing whether a complex has homology `A_φ⟨shift⟩` in a single degree.
#[derive(Clone, Debug)]
pub struct TwistedHomologyReport {
    pub d_squared_zero: bool,
    pub homology: BTreeMap<i32, usize>,
    pub expected_degree: i32,
    pub shift: i32,
    pub concentrated: bool,
    pub tau: TwistVerdict,
    pub tau_inverse: TwistVerdict,
}

impl TwistedHomologyReport {
    pub fn holds(&self) -> bool {
        self.d_squared_zero && self.concentrated && (self.tau.holds() || self.tau_inverse.holds())
    }
}

fn twisted_homology(a: &Algebra, c: &BimoduleComplex, phi: &AlgebraMorphism, degree: i32, shift: i32, seed: u64) -> TwistedHomologyReport {
    let homology = homology_dims(a, c);
    let concentrated = homology.len() == 1 && homology.contains_key(&degree);
    let h = HomologyBimodule::compute(a, c, degree);
    let tau_v = is_twisted_shifted_regular(&h, phi, shift, seed);
    let inv = phi.inverse(a).expect("automorphism");
    let tau_inverse = is_twisted_shifted_regular(&h, &inv, shift, seed);
    TwistedHomologyReport {
        d_squared_zero: c.d_squared_zero(a),
        homology,
        expected_degree: degree,
        shift,
        concentrated,
        tau: tau_v,
        tau_inverse,
    }
}

/// `cone(Q_A(Π^d_s) → A)` has homology `A_τ⟨−d−s⟩` in degree `s` only.
pub fn zigzag_periodic_check(d: usize, s: usize, field: Field, seed: u64) -> Result<TwistedHomologyReport> {
    let z = zigzag_presentation(d, s, field)?;
    let cone = koszul_cone(&z, FamilyKind::Pi)?;
    let phi = tau(&z)?;
    Ok(twisted_homology(&z.presentation.algebra, &cone, &phi, s as i32, -((d + s) as i32), seed))
}

#[derive(Clone, Debug)]
pub struct AcyclicReport {
    pub d_squared_zero: bool,
    pub coxeter_terms: BTreeMap<i32, Vec<Term>>,
    pub cone_terms: BTreeMap<i32, Vec<Term>>,
    pub verdict: ChainIso,
}

impl AcyclicReport {
    pub fn holds(&self) -> bool {
        self.d_squared_zero && self.verdict == ChainIso::Isomorphic
    }
}

/// The twist along the Coxeter word agrees with `cone(Q_A(Λ^d_s) → A)`.
pub fn acyclic_bimodule_check(d: usize, s: usize, field: Field, seed: u64) -> Result<AcyclicReport> {
    let z = zigzag_presentation(d, s, field)?;
    let a = &z.presentation.algebra;
    let cone = koszul_cone(&z, FamilyKind::Lambda)?;
    let d_squared_zero = cone.d_squared_zero(a);
    let cone_min = minimize(a, &cone);
    let psi = word_complex(a, &coxeter_word(d, s))?;
    let verdict = chain_isomorphic(a, &psi, &cone_min, seed, 8);
    Ok(AcyclicReport { d_squared_zero, coxeter_terms: psi.term_multiset(), cone_terms: cone_min.term_multiset(), verdict })
}

#[derive(Clone, Debug)]
pub struct LongestReport {
    pub word: Word,
    pub expected_length: u64,
    pub twisted: TwistedHomologyReport,
}

impl LongestReport {
    pub fn holds(&self) -> bool {
        self.word.len() as u64 == self.expected_length && self.twisted.holds()
    }
}

/// The twist along the longest word has homology `A_τ⟨−d−s⟩` in degree `s` only.
pub fn longest_element_check(d: usize, s: usize, field: Field, seed: u64) -> Result<LongestReport> {
    let z = zigzag_presentation(d, s, field)?;
    let a = &z.presentation.algebra;
    let word = longest_word(d, s);
    let c = word_complex(a, &word)?;
    let phi = tau(&z)?;
    let twisted = twisted_homology(a, &c, &phi, s as i32, -((d + s) as i32), seed);
    Ok(LongestReport { word, expected_length: longest_word_length(d, s), twisted })
}

/// Terms of `X_1 ⊗ ⋯ ⊗ X_n` over `N_n` as predicted: `A`, then `P(i,i)`, then
/// `P(i,i+1)⟨−k_i⟩` for consecutive vertices.
pub fn staircase_terms(n: usize, degrees: &[i32]) -> BTreeMap<i32, Vec<Term>> {
    let mut out = BTreeMap::new();
    out.insert(0, vec![Term::Regular { shift: 0 }]);
    out.insert(1, (0..n).map(|i| Term::Projective { left: i, right: i, shift: 0 }).collect());
    if n > 1 {
        out.insert(2, (0..n - 1).map(|i| Term::Projective { left: i, right: i + 1, shift: -degrees[i] }).collect());
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

#[derive(Clone, Debug)]
pub struct NakayamaReport {
    pub n: usize,
    pub degrees: Vec<i32>,
    pub staircase_matches: bool,
    /// Verdict comparing rotation `k` of `X_1 ⋯ X_n X_1` with rotation 0.
    pub rotations: Vec<ChainIso>,
}

impl NakayamaReport {
    pub fn holds(&self) -> bool {
        self.staircase_matches && self.rotations.iter().all(|r| *r == ChainIso::Isomorphic)
    }
}

/// Rotation `k` of the word `X_1 ⋯ X_n X_1`, as vertex indices `k, …, n−1, 0, …, k`.
pub fn rotation_word(n: usize, k: usize) -> Word {
    (0..=n).map(|j| (k + j) % n).collect()
}

pub fn nakayama_rotations(n: usize, degrees: &[i32], field: Field, seed: u64) -> Result<NakayamaReport> {
    let p = nakayama_algebra(n, Some(degrees), field)?;
    let a = &p.algebra;
    let stair = word_complex(a, &(0..n).collect::<Vec<_>>())?;
    let staircase_matches = stair.term_multiset() == staircase_terms(n, degrees);
    let base = word_complex(a, &rotation_word(n, 0))?;
    let mut rotations = Vec::with_capacity(n);
    for k in 0..n {
        let c = word_complex(a, &rotation_word(n, k))?;
        rotations.push(chain_isomorphic(a, &base, &c, seed + k as u64, 8));
    }
    Ok(NakayamaReport { n, degrees: degrees.to_vec(), staircase_matches, rotations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Lifted,
    Direct,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Lifted => "lifted",
            Mode::Direct => "direct",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelationOutcome {
    pub index: usize,
    pub witness: String,
    pub mode: Mode,
    pub status: Status,
    /// Total number of terms on each side after minimization (direct) or of the
    /// truncated algebra and model (lifted).
    pub sizes: (usize, usize),
    pub detail: String,
    pub milliseconds: u128,
}

fn witness_text(g: &GroupPresentation, w: &Witness) -> String {
    match w {
        Witness::Cycle { cycle, subsequence } => format!(
            "cycle {} subsequence {}",
            g.word_labels(cycle).join("-"),
            g.word_labels(subsequence).join("-")
        ),
        Witness::Commutation { first, second } => {
            format!("no common cycle {} {}", g.generators[*first].compact(), g.generators[*second].compact())
        }
    }
}

/// Relation checker with a cache of verified Nakayama models keyed by arrow degrees.
/// Generators of the group act through `vertex_map` on the vertices of `algebra`.
pub struct RelationChecker {
    pub algebra: Algebra,
    pub group: GroupPresentation,
    pub vertex_map: Vec<usize>,
    pub seed: u64,
    model_cache: HashMap<Vec<i32>, (Status, String)>,
}

impl RelationChecker {
    pub fn new(d: usize, s: usize, field: Field, seed: u64) -> Result<RelationChecker> {
        let zigzag = zigzag_presentation(d, s, field)?;
        let group = group_presentation(&zigzag.presentation.quiver, d + 1);
        let vertex_map = (0..zigzag.presentation.algebra.num_vertices()).collect();
        Ok(Self::on_algebra(zigzag.presentation.algebra, group, vertex_map, seed))
    }

    pub fn on_algebra(algebra: Algebra, group: GroupPresentation, vertex_map: Vec<usize>, seed: u64) -> RelationChecker {
        RelationChecker { algebra, group, vertex_map, seed, model_cache: HashMap::new() }
    }

    fn mapped(&self, w: &[usize]) -> Word {
        w.iter().map(|&g| self.vertex_map[g]).collect()
    }

    pub fn check(&mut self, index: usize, mode: Mode) -> Result<RelationOutcome> {
        let rel = self.group.relations.get(index).ok_or_else(|| Error::Invalid(format!("no relation {index}")))?.clone();
        let start = Instant::now();
        let (status, sizes, detail) = match mode {
            Mode::Direct => {
                let a = &self.algebra;
                let left = word_complex(a, &self.mapped(&rel.left))?;
                let right = word_complex(a, &self.mapped(&rel.right))?;
                let verdict = chain_isomorphic(a, &left, &right, self.seed + index as u64, 8);
                (Status::from_chain_iso(&verdict), (left.num_terms(), right.num_terms()), verdict.label().to_string())
            }
            Mode::Lifted => match &rel.witness {
                Witness::Commutation { first, second } => {
                    let a = &self.algebra;
                    let (x, y) = (self.vertex_map[*first], self.vertex_map[*second]);
                    let orthogonal = a.block(x, y).is_empty() && a.block(y, x).is_empty();
                    let status = if orthogonal { Status::Pass } else { Status::Unknown };
                    (status, (0, 0), if orthogonal { "orthogonal idempotents".into() } else { "idempotents not orthogonal".into() })
                }
                Witness::Cycle { subsequence, .. } => {
                    let sub = self.mapped(subsequence);
                    self.lift_cycle(&sub)?
                }
            },
        };
        Ok(RelationOutcome {
            index,
            witness: witness_text(&self.group, &rel.witness),
            mode,
            status,
            sizes,
            detail,
            milliseconds: start.elapsed().as_millis(),
        })
    }

    /// Identifies `eAe` for the subsequence with a graded Nakayama algebra and checks the
    /// corresponding relation there.
    fn lift_cycle(&mut self, sub: &[usize]) -> Result<(Status, (usize, usize), String)> {
        let a = &self.algebra;
        let len = sub.len();
        let (e, _) = a.truncate(sub);
        let mut sorted = sub.to_vec();
        sorted.sort_unstable();
        let pos = |v: usize| sorted.iter().position(|&w| w == v).expect("subsequence vertex");
        let gens = e.radical_generators();
        let mut degrees = Vec::with_capacity(len);
        for k in 0..len {
            let (from, to) = (pos(sub[k]), pos(sub[(k + 1) % len]));
            let here: Vec<usize> = gens.iter().copied().filter(|&g| e.basis[g].source == from && e.basis[g].target == to).collect();
            if here.len() != 1 {
                return Ok((Status::Fail, (e.dim(), 0), "truncation is not a cyclic Nakayama algebra".into()));
            }
            degrees.push(e.basis[here[0]].degree);
        }
        if gens.len() != len {
            return Ok((Status::Fail, (e.dim(), 0), "truncation has extra generators".into()));
        }
        let model = nakayama_algebra(len, Some(&degrees), e.field)?;
        let opts = IsoOptions { seed: self.seed, ..IsoOptions::default() };
        let iso = find_graded_isomorphism(&model, &e, &opts);
        if !iso.is_found() {
            let status = if iso.is_refuted() { Status::Fail } else { Status::Unknown };
            return Ok((status, (e.dim(), model.dim()), format!("truncation vs model: {}", iso.label())));
        }
        let seed = self.seed;
        let sizes = (e.dim(), model.dim());
        let (status, detail) = self
            .model_cache
            .entry(degrees.clone())
            .or_insert_with(|| {
                let m = &model.algebra;
                let verdict = (|| -> Result<ChainIso> {
                    let left = word_complex(m, &rotation_word(len, 0))?;
                    let right = word_complex(m, &rotation_word(len, 1))?;
                    Ok(chain_isomorphic(m, &left, &right, seed, 8))
                })();
                match verdict {
                    Ok(v) => (Status::from_chain_iso(&v), format!("model relation: {}", v.label())),
                    Err(err) => (Status::Fail, err.to_string()),
                }
            })
            .clone();
        Ok((status, sizes, format!("degrees {degrees:?}; {detail}")))
    }

    pub fn check_all(&mut self, mode: Mode) -> Result<Vec<RelationOutcome>> {
        (0..self.group.relations.len()).map(|i| self.check(i, mode)).collect()
    }
}

/// Checks the given presented algebra against a claimed model; exposed for reports.
pub fn truncation_matches(model: &PresentedAlgebra, target: &Algebra, seed: u64) -> bool {
    find_graded_isomorphism(model, target, &IsoOptions { seed, ..IsoOptions::default() }).is_found()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn koszul_cones_are_complexes() {
        for (d, s) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
            let z = zigzag_presentation(d, s, Q).unwrap();
            for kind in [FamilyKind::Pi, FamilyKind::Lambda] {
                let c = koszul_cone(&z, kind).unwrap();
                assert!(c.d_squared_zero(&z.presentation.algebra), "{kind:?} {d} {s}");
            }
        }
    }

    #[test]
    fn periodicity_small() {
        for (d, s) in [(1, 1), (1, 2), (2, 2)] {
            let r = zigzag_periodic_check(d, s, Q, 5).unwrap();
            assert!(r.holds(), "{d} {s}: {r:?}");
        }
    }

    #[test]
    fn nakayama_two_and_three() {
        assert!(nakayama_rotations(2, &[1, 1], Q, 1).unwrap().holds());
        assert!(nakayama_rotations(3, &[1, 1, 1], Q, 1).unwrap().holds());
    }

    #[test]
    fn longest_small() {
        for (d, s) in [(1, 1), (1, 2)] {
            let r = longest_element_check(d, s, Q, 7).unwrap();
            assert!(r.holds(), "{d} {s}: {r:?}");
        }
    }

    #[test]
    fn acyclic_small() {
        let r = acyclic_bimodule_check(1, 2, Q, 3).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn relations_lifted_and_direct() {
        let mut c = RelationChecker::new(1, 3, Q, 2).unwrap();
        for o in c.check_all(Mode::Lifted).unwrap() {
            assert_eq!(o.status, Status::Pass, "{o:?}");
        }
        for o in c.check_all(Mode::Direct).unwrap() {
            assert_eq!(o.status, Status::Pass, "{o:?}");
        }
    }
}
