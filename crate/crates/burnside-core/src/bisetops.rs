//! Elementary biset operations on monomial Burnside rings.
//!
//! Everything is built from two primitives attached to a section map
//! π: P ↠ H with P ≤ G:
//!
//! * `DefRes`: [K,ψ]_G ↦ Σ_{x ∈ P\G/K} [π(L), χ̄]_H with L = P ∩ ˣK and
//!   χ = ˣψ|_L, dropping terms where χ is nontrivial on L ∩ ker π;
//! * `IndInf`: [M,χ]_H ↦ [π⁻¹(M), χ∘π]_G.
//!
//! Res, Def and Iso are DefRes along an inclusion, a projection and an
//! isomorphism; Ind and Inf are the matching IndInf. These standard-basis
//! rules are the ground truth; the closed idempotent-basis formulas are
//! produced separately by [`predicted_idempotent_matrix`] for comparison.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chars::ClassFunction;
use crate::cyclotomic::{Cyc, Q};
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::groups::{canonical_abelian_iso, Elem, FiniteGroup, GroupHom, Subgroup};
use crate::monoburn::{MonomialBurnside, Sparse};

/// A surjection π: P ↠ H from a subgroup P of G, tabulated on G
/// (entries outside P are `Elem::MAX`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionMap {
    pub p: Subgroup,
    pub images: Vec<Elem>,
    pub target_order: usize,
}

impl SectionMap {
    pub fn new(g: &FiniteGroup, h: &FiniteGroup, p: Subgroup, images: Vec<Elem>) -> Result<Self> {
        let m = SectionMap {
            p,
            images,
            target_order: h.order(),
        };
        m.validate(g, h)?;
        Ok(m)
    }

    fn validate(&self, g: &FiniteGroup, h: &FiniteGroup) -> Result<()> {
        if self.images.len() != g.order() || self.target_order != h.order() {
            return Err(Error::InvalidOp("section map has the wrong shape".into()));
        }
        let els = self.p.elems();
        for &a in els {
            if self.images[a as usize] as usize >= h.order() {
                return Err(Error::InvalidOp("section map undefined on P".into()));
            }
            for &b in els {
                if self.apply(g.mul(a, b)) != h.mul(self.apply(a), self.apply(b)) {
                    return Err(Error::InvalidOp("section map is not a homomorphism".into()));
                }
            }
        }
        let mut hit = vec![false; h.order()];
        for &a in els {
            hit[self.apply(a) as usize] = true;
        }
        if hit.iter().any(|&b| !b) {
            return Err(Error::InvalidOp("section map is not surjective".into()));
        }
        Ok(())
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x as usize]
    }

    pub fn kernel(&self) -> Subgroup {
        let els = self.p.elems().iter().copied().filter(|&x| self.apply(x) == 0).collect();
        Subgroup::from_elems(els, self.images.len())
    }

    /// π(S) for S ≤ P.
    pub fn image_of(&self, s: &Subgroup) -> Subgroup {
        Subgroup::from_elems(s.elems().iter().map(|&x| self.apply(x)).collect(), self.target_order)
    }

    /// π⁻¹(M) inside P.
    pub fn preimage_of(&self, m: &Subgroup) -> Subgroup {
        let els = self.p.elems().iter().copied().filter(|&x| m.contains(self.apply(x))).collect();
        Subgroup::from_elems(els, self.images.len())
    }

    /// The least element of P over each element of H.
    pub fn lifts(&self) -> Vec<Elem> {
        let mut out = vec![Elem::MAX; self.target_order];
        for &x in self.p.elems() {
            let q = self.apply(x) as usize;
            if out[q] == Elem::MAX {
                out[q] = x;
            }
        }
        out
    }

    /// f∘π for a homomorphism f: H → H′.
    pub fn then(&self, f: &GroupHom) -> SectionMap {
        let images = self
            .images
            .iter()
            .map(|&q| if q == Elem::MAX { q } else { f.apply(q) })
            .collect();
        SectionMap {
            p: self.p.clone(),
            images,
            target_order: f.target_order,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.p.order() == self.target_order
    }
}

/// The section T/S of G as a group with its map T ↠ T/S (T itself when S = 1).
pub fn section_group(g: &FiniteGroup, t: &Subgroup, s: &Subgroup) -> Result<(FiniteGroup, SectionMap)> {
    if !s.is_subset_of(t) {
        return Err(Error::NotSubgroup("S is not contained in T".into()));
    }
    let (tg, _) = g.subgroup_as_group(t);
    let pos = |x: Elem| t.position(x).expect("element of T") as Elem;
    let mut images = vec![Elem::MAX; g.order()];
    if s.order() == 1 {
        for &x in t.elems() {
            images[x as usize] = pos(x);
        }
        return Ok((tg, SectionMap { p: t.clone(), images, target_order: t.order() }));
    }
    let s_in_t = Subgroup::from_elems(s.elems().iter().map(|&x| pos(x)).collect(), t.order());
    let (q, proj) = tg.quotient(&s_in_t)?;
    for &x in t.elems() {
        images[x as usize] = proj.apply(pos(x));
    }
    let target_order = q.order();
    Ok((q, SectionMap { p: t.clone(), images, target_order }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OpKind {
    Res,
    Ind,
    Inf,
    Def,
    Iso,
    DefRes,
    IndInf,
}

/// Which group datum a link was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Datum {
    Subgroup(Subgroup),
    Normal(Subgroup),
    Iso(GroupHom),
    Section { t: Subgroup, s: Subgroup },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryOp {
    pub kind: OpKind,
    pub source: String,
    pub target: String,
    pub datum: Datum,
}

/// A big group G, a smaller group H and a section map into H. `down`
/// gives the DefRes-type operator G → H, `up` the IndInf-type H → G.
#[derive(Debug)]
pub struct Link {
    pub datum: Datum,
    pub map: SectionMap,
    pub small: Arc<MonomialBurnside>,
}

impl Link {
    pub fn new(datum: Datum, map: SectionMap, small: Arc<MonomialBurnside>) -> Self {
        Link { datum, map, small }
    }

    /// K ≤ G viewed as a group (elements numbered in sorted order).
    pub fn subgroup(big: &MonomialBurnside, k: &Subgroup) -> Result<Link> {
        let g = big.group();
        if !g.is_subgroup(k.elems()) {
            return Err(Error::NotSubgroup("not a subgroup of G".into()));
        }
        let (kg, map) = section_group(g, k, &g.trivial())?;
        Ok(Link::new(Datum::Subgroup(k.clone()), map, Arc::new(MonomialBurnside::new(kg)?)))
    }

    pub fn quotient(big: &MonomialBurnside, n: &Subgroup) -> Result<Link> {
        let g = big.group();
        let (q, proj) = g.quotient(n)?;
        let map = SectionMap {
            p: g.whole(),
            images: proj.images,
            target_order: q.order(),
        };
        Ok(Link::new(Datum::Normal(n.clone()), map, Arc::new(MonomialBurnside::new(q)?)))
    }

    /// Iso along an isomorphism λ: G → G′ (G′ given by its ring).
    pub fn iso(big: &MonomialBurnside, target: Arc<MonomialBurnside>, lambda: &GroupHom) -> Result<Link> {
        let g = big.group();
        if !lambda.is_homomorphism(g, target.group()) || !lambda.is_bijective() {
            return Err(Error::InvalidOp("Iso needs an isomorphism".into()));
        }
        let map = SectionMap {
            p: g.whole(),
            images: lambda.images.clone(),
            target_order: lambda.target_order,
        };
        Ok(Link::new(Datum::Iso(lambda.clone()), map, target))
    }

    pub fn section(big: &MonomialBurnside, t: &Subgroup, s: &Subgroup) -> Result<Link> {
        let g = big.group();
        if !g.is_subgroup(t.elems()) || !g.is_subgroup(s.elems()) {
            return Err(Error::NotSubgroup("section datum".into()));
        }
        if !s.elems().iter().all(|&x| t.elems().iter().all(|&y| s.contains(g.conj(y, x)))) {
            return Err(Error::NotNormal);
        }
        let (q, map) = section_group(g, t, s)?;
        Ok(Link::new(
            Datum::Section { t: t.clone(), s: s.clone() },
            map,
            Arc::new(MonomialBurnside::new(q)?),
        ))
    }

    fn kinds(&self) -> (OpKind, OpKind) {
        match self.datum {
            Datum::Subgroup(_) => (OpKind::Res, OpKind::Ind),
            Datum::Normal(_) => (OpKind::Def, OpKind::Inf),
            Datum::Iso(_) => (OpKind::Iso, OpKind::Iso),
            Datum::Section { .. } => (OpKind::DefRes, OpKind::IndInf),
        }
    }

    /// The operator G → H in standard coordinates.
    pub fn down(&self, big: &MonomialBurnside) -> OpMatrix {
        let cols = (0..big.rank()).map(|i| def_res_pair(big, &self.small, &self.map, i)).collect();
        OpMatrix {
            op: ElementaryOp {
                kind: self.kinds().0,
                source: big.label().into(),
                target: self.small.label().into(),
                datum: self.datum.clone(),
            },
            cols,
            source_rank: big.rank(),
            target_rank: self.small.rank(),
        }
    }

    /// The operator H → G in standard coordinates.
    pub fn up(&self, big: &MonomialBurnside) -> OpMatrix {
        let cols = (0..self.small.rank()).map(|i| ind_inf_pair(&self.small, big, &self.map, i)).collect();
        OpMatrix {
            op: ElementaryOp {
                kind: self.kinds().1,
                source: self.small.label().into(),
                target: big.label().into(),
                datum: self.datum.clone(),
            },
            cols,
            source_rank: self.small.rank(),
            target_rank: big.rank(),
        }
    }
}

/// DefRes of the standard basis element i of `big`.
pub fn def_res_pair(big: &MonomialBurnside, small: &MonomialBurnside, map: &SectionMap, i: usize) -> Sparse {
    let g = big.group();
    let psi = &big.pair(i).character;
    let k = &psi.domain;
    let p = &map.p;
    let ker = map.kernel();
    let mut seen = vec![false; g.order()];
    let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        for &a in p.elems() {
            let ax = g.mul(a, x);
            for &b in k.elems() {
                seen[g.mul(ax, b) as usize] = true;
            }
        }
        let xi = g.inv(x);
        let l = p.intersect(&g.conj_subgroup(x, k));
        let chi = |y: Elem| psi.exp_at(g.conj(xi, y));
        if l.elems().iter().any(|&y| ker.contains(y) && chi(y) != 0) {
            continue;
        }
        let m = map.image_of(&l);
        let mut exps = vec![u32::MAX; m.order()];
        for &y in l.elems() {
            let slot = &mut exps[m.position(map.apply(y)).expect("image")];
            if *slot == u32::MAX {
                *slot = chi(y);
            }
        }
        let t = small
            .pair_index(&m, big.modulus(), &exps)
            .expect("deflated character lands in the target ring");
        *terms.entry(t).or_insert(0) += 1;
    }
    terms.into_iter().map(|(t, c)| (t, Cyc::from_int(c))).collect()
}

/// IndInf of the standard basis element i of `small`.
pub fn ind_inf_pair(small: &MonomialBurnside, big: &MonomialBurnside, map: &SectionMap, i: usize) -> Sparse {
    let chi = &small.pair(i).character;
    let pre = map.preimage_of(&chi.domain);
    let exps: Vec<u32> = pre.elems().iter().map(|&y| chi.exp_at(map.apply(y))).collect();
    let t = big
        .pair_index(&pre, small.modulus(), &exps)
        .expect("inflated character lands in the target ring");
    vec![(t, Cyc::one())]
}

/// An operator between two monomial Burnside rings, stored by the images
/// of the standard basis elements.
#[derive(Clone, Debug)]
pub struct OpMatrix {
    pub op: ElementaryOp,
    pub cols: Vec<Sparse>,
    pub source_rank: usize,
    pub target_rank: usize,
}

impl OpMatrix {
    /// Image of a sparse standard-coordinate vector, densely.
    pub fn apply_sparse(&self, x: &Sparse) -> Vec<Cyc> {
        let mut out = vec![Cyc::zero(); self.target_rank];
        for (i, c) in x {
            for (t, m) in &self.cols[*i] {
                out[*t] += &c.mul_ref(m);
            }
        }
        out
    }

    pub fn apply_dense(&self, x: &[Cyc]) -> Vec<Cyc> {
        let sp: Sparse = x.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        self.apply_sparse(&sp)
    }

    pub fn apply_standard(&self, tgt: &MonomialBurnside, x: &crate::monoburn::BElem) -> Result<crate::monoburn::BElem> {
        if x.basis != crate::monoburn::Basis::Standard || x.len() != self.source_rank || x.group != self.op.source {
            return Err(Error::InvalidOp("operator applied to an element of the wrong ring".into()));
        }
        Ok(tgt.standard(self.apply_dense(&x.coeffs)))
    }

    pub fn apply_idempotent(
        &self,
        src: &MonomialBurnside,
        tgt: &MonomialBurnside,
        x: &crate::monoburn::BElem,
    ) -> Result<crate::monoburn::BElem> {
        let s = src.to_standard(x)?;
        let y = self.apply_standard(tgt, &s)?;
        tgt.to_idempotent(&y)
    }

    /// Dense target × source matrix in standard coordinates.
    pub fn standard_matrix(&self) -> Matrix<Cyc> {
        let mut m = Matrix::zeros(self.target_rank, self.source_rank);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    /// Image of e^src_j in target idempotent coordinates.
    pub fn idempotent_column(&self, src: &MonomialBurnside, tgt: &MonomialBurnside, j: usize) -> Vec<Cyc> {
        tgt.species_vector(&self.apply_sparse(src.idempotent(j)))
    }

    /// Target-idempotent × selected-source-idempotent block, S·M·E restricted to `cols`.
    pub fn idempotent_block(&self, src: &MonomialBurnside, tgt: &MonomialBurnside, cols: &[usize]) -> Matrix<Cyc> {
        let mut m = Matrix::zeros(self.target_rank, cols.len());
        for (c, &j) in cols.iter().enumerate() {
            for (i, v) in self.idempotent_column(src, tgt, j).into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, c, v);
                }
            }
        }
        m
    }

    pub fn idempotent_matrix(&self, src: &MonomialBurnside, tgt: &MonomialBurnside) -> Matrix<Cyc> {
        let all: Vec<usize> = (0..self.source_rank).collect();
        self.idempotent_block(src, tgt, &all)
    }

    /// self ∘ first.
    pub fn after(&self, first: &OpMatrix) -> Result<OpMatrix> {
        if first.target_rank != self.source_rank || first.op.target != self.op.source {
            return Err(Error::DimensionMismatch("composing operators between different rings".into()));
        }
        let cols = first
            .cols
            .iter()
            .map(|col| {
                self.apply_sparse(col)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
            .collect();
        Ok(OpMatrix {
            op: ElementaryOp {
                kind: self.op.kind,
                source: first.op.source.clone(),
                target: self.op.target.clone(),
                datum: self.op.datum.clone(),
            },
            cols,
            source_rank: first.source_rank,
            target_rank: self.target_rank,
        })
    }
}

/// {g ∈ G : gHg⁻¹ = H, ghg⁻¹ ∈ hH′}.
pub fn npair_stabilizer(g: &FiniteGroup, h: &Subgroup, elem: Elem) -> Subgroup {
    let hd = g.derived_of(h);
    let els = g
        .elements()
        .filter(|&x| {
            g.conj_subgroup(x, h) == *h && {
                let y = g.conj(x, elem);
                hd.elems().iter().any(|&d| g.mul(elem, d) == y)
            }
        })
        .collect();
    Subgroup::from_elems(els, g.order())
}

/// The idempotent-basis matrix predicted by the closed formulas for Res,
/// Ind, Inf and Iso; rows are target npairs, columns source npairs. None
/// for Def and general sections, which have no closed formula here.
pub fn predicted_idempotent_matrix(link: &Link, big: &MonomialBurnside, up: bool) -> Option<Matrix<Cyc>> {
    let small = &*link.small;
    let map = &link.map;
    let g = big.group();
    let lifts = map.lifts();
    let lift_sub = |s: &Subgroup| Subgroup::from_elems(s.elems().iter().map(|&q| lifts[q as usize]).collect(), g.order());
    match (&link.datum, up) {
        (Datum::Subgroup(_), false) => {
            let mut m = Matrix::zeros(small.rank(), big.rank());
            for j in 0..small.rank() {
                let np = small.npair(j);
                let hh = lift_sub(small.npair_subgroup(j));
                let i = big.npair_index(&hh, lifts[np.elem as usize])?;
                m.set(j, i, Cyc::one());
            }
            Some(m)
        }
        (Datum::Subgroup(k), true) => {
            let mut m = Matrix::zeros(big.rank(), small.rank());
            for j in 0..small.rank() {
                let np = small.npair(j);
                let hh = lift_sub(small.npair_subgroup(j));
                let h = lifts[np.elem as usize];
                let i = big.npair_index(&hh, h)?;
                let stab = npair_stabilizer(g, &hh, h);
                let c = Q::new((stab.order() as i64).into(), (stab.intersect(k).order() as i64).into());
                m.set(i, j, Cyc::from_rational(c));
            }
            Some(m)
        }
        (Datum::Normal(_), true) => {
            let mut m = Matrix::zeros(big.rank(), small.rank());
            for i in 0..big.rank() {
                let np = big.npair(i);
                let img = map.image_of(big.npair_subgroup(i));
                let q = small.npair_index(&img, map.apply(np.elem))?;
                m.set(i, q, Cyc::one());
            }
            Some(m)
        }
        (Datum::Iso(_), false) => {
            let mut m = Matrix::zeros(small.rank(), big.rank());
            for i in 0..big.rank() {
                let np = big.npair(i);
                let img = map.image_of(big.npair_subgroup(i));
                m.set(small.npair_index(&img, map.apply(np.elem))?, i, Cyc::one());
            }
            Some(m)
        }
        (Datum::Iso(_), true) => {
            let mut m = Matrix::zeros(big.rank(), small.rank());
            for j in 0..small.rank() {
                let np = small.npair(j);
                let hh = lift_sub(small.npair_subgroup(j));
                m.set(big.npair_index(&hh, lifts[np.elem as usize])?, j, Cyc::one());
            }
            Some(m)
        }
        _ => None,
    }
}

/// Def^G_{G/N} in idempotent coordinates, checked to have at most one
/// nonzero entry per column, at (HN/N, hN). Returns that entry per source npair.
pub fn deflation_constants(link: &Link, big: &MonomialBurnside, cols: &[usize]) -> Result<Vec<Cyc>> {
    let Datum::Normal(_) = link.datum else {
        return Err(Error::InvalidOp("deflation constants need a quotient link".into()));
    };
    let down = link.down(big);
    let small = &*link.small;
    let mut out = Vec::with_capacity(cols.len());
    for &j in cols {
        let col = down.idempotent_column(big, small, j);
        let np = big.npair(j);
        let img = link.map.image_of(big.npair_subgroup(j));
        let q = small
            .npair_index(&img, link.map.apply(np.elem))
            .ok_or_else(|| Error::CheckFailed("image npair".into()))?;
        if col.iter().enumerate().any(|(i, c)| i != q && !c.is_zero()) {
            return Err(Error::CheckFailed(format!(
                "Def of idempotent {} in {} is not a multiple of one idempotent",
                big.npair_label(j),
                big.label()
            )));
        }
        out.push(col[q].clone());
    }
    Ok(out)
}

/// m^N_{G,g} = (1/|NG′|) Σ_{V ≤ G, VN = G} |V ∩ gG′| μ(V,G).
pub fn deflation_number(g: &FiniteGroup, elem: Elem, n: &Subgroup) -> Result<Q> {
    deflation_number_in(g, g.lattice()?, elem, n)
}

pub fn deflation_number_in(g: &FiniteGroup, lat: &crate::groups::Lattice, elem: Elem, n: &Subgroup) -> Result<Q> {
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    let gd = g.derived_subgroup();
    let coset: Vec<Elem> = gd.elems().iter().map(|&d| g.mul(elem, d)).collect();
    let mu = lat.mobius_to_top();
    let mut acc = 0i64;
    for (vi, v) in lat.subgroups().iter().enumerate() {
        if mu[vi] == 0 {
            continue;
        }
        if v.order() * n.order() != g.order() * v.intersect(n).order() {
            continue;
        }
        let meet = coset.iter().filter(|&&c| v.contains(c)).count() as i64;
        acc += meet * mu[vi];
    }
    let ngd = g.product(n, &gd).order() as i64;
    Ok(Q::new(acc.into(), ngd.into()))
}

/// One term c·IndInf_{X/M}∘DefRes_{X/M} of φ₁^G.
#[derive(Clone, Debug)]
pub struct Phi1Term {
    pub coeff: Q,
    pub x: Subgroup,
    pub m: Subgroup,
}

/// Terms (1/|G|)|X|μ(X,G)μ_⊴(1,M) over X ≤ G, M ⊴ G with M ≤ Φ(G) ≤ X.
pub fn phi1_terms(g: &FiniteGroup) -> Result<Vec<Phi1Term>> {
    let lat = g.lattice()?;
    let phi = lat.frattini().clone();
    let mu_top = lat.mobius_to_top();
    let mut out = Vec::new();
    for (mi, m) in lat.subgroups().iter().enumerate() {
        if !lat.is_normal(mi) || !m.is_subset_of(&phi) {
            continue;
        }
        let mu_m = lat.mobius_normal(mi)?;
        if mu_m.is_zero() {
            continue;
        }
        for (xi, x) in lat.subgroups().iter().enumerate() {
            if mu_top[xi] == 0 || !phi.is_subset_of(x) {
                continue;
            }
            let c = Q::new(((x.order() as i64) * mu_top[xi]).into(), (g.order() as i64).into()) * mu_m.clone();
            out.push(Phi1Term {
                coeff: c,
                x: x.clone(),
                m: m.clone(),
            });
        }
    }
    Ok(out)
}

/// φ₁^G on the idempotents in `cols`, as a matrix with rows over all npairs.
pub fn phi1_block(big: &MonomialBurnside, cols: &[usize]) -> Result<Matrix<Cyc>> {
    let terms = phi1_terms(big.group())?;
    let mut acc: Vec<Vec<Cyc>> = vec![vec![Cyc::zero(); big.rank()]; cols.len()];
    for t in &terms {
        let link = Link::section(big, &t.x, &t.m)?;
        let down = link.down(big);
        let up = link.up(big);
        let c = Cyc::from_rational(t.coeff.clone());
        for (k, &j) in cols.iter().enumerate() {
            let v = up.apply_dense(&down.apply_sparse(big.idempotent(j)));
            for (a, b) in acc[k].iter_mut().zip(v) {
                if !b.is_zero() {
                    *a += &b.mul_ref(&c);
                }
            }
        }
    }
    let mut m = Matrix::zeros(big.rank(), cols.len());
    for (k, v) in acc.into_iter().enumerate() {
        for (i, s) in big.species_vector(&v).into_iter().enumerate() {
            if !s.is_zero() {
                m.set(i, k, s);
            }
        }
    }
    Ok(m)
}

/// φ₁^G restricted to 𝕊_p(G) in the coordinates of [`MonomialBurnside::sp_indices`].
pub fn phi1(big: &MonomialBurnside) -> Result<Matrix<Cyc>> {
    let sp = big.sp_indices();
    let full = phi1_block(big, &sp)?;
    restrict_rows(&full, &sp)
}

/// Keeps the rows in `keep`, failing if any other row is nonzero.
pub fn restrict_rows(m: &Matrix<Cyc>, keep: &[usize]) -> Result<Matrix<Cyc>> {
    let mut inside = vec![false; m.rows()];
    for &k in keep {
        inside[k] = true;
    }
    for (i, ins) in inside.iter().enumerate() {
        if !ins && m.row(i).iter().any(|c| !c.is_zero()) {
            return Err(Error::CheckFailed(format!("image leaves the subspace at row {i}")));
        }
    }
    let rows = keep.iter().map(|&k| m.row(k).to_vec()).collect();
    Ok(Matrix::from_rows(m.cols(), rows))
}

/// Res^G_H on 𝕊_p(G) for every maximal H, each as a matrix on sp coordinates.
pub fn maximal_restrictions(big: &MonomialBurnside) -> Result<Vec<(Link, Matrix<Cyc>)>> {
    let sp = big.sp_indices();
    let lat = big.lattice();
    let mut out = Vec::new();
    for &h in lat.maximal() {
        let link = Link::subgroup(big, lat.get(h))?;
        let m = link.down(big).idempotent_block(big, &link.small, &sp);
        out.push((link, m));
    }
    Ok(out)
}

/// Def^G_{G/M} on 𝕊_p(G) for the given normal subgroups.
pub fn deflations(big: &MonomialBurnside, normals: &[Subgroup]) -> Result<Vec<(Link, Matrix<Cyc>)>> {
    let sp = big.sp_indices();
    let mut out = Vec::new();
    for n in normals {
        let link = Link::quotient(big, n)?;
        let m = link.down(big).idempotent_block(big, &link.small, &sp);
        out.push((link, m));
    }
    Ok(out)
}

/// Row basis (in sp coordinates) of the common kernel of the maps.
pub fn common_kernel(dim: usize, maps: &[Matrix<Cyc>]) -> Result<Matrix<Cyc>> {
    let mut stacked = Matrix::zeros(0, dim);
    for m in maps {
        if m.cols() != dim {
            return Err(Error::DimensionMismatch("map on a different space".into()));
        }
        stacked = stacked.vstack(&m.row_basis())?;
    }
    Ok(stacked.kernel_basis())
}

/// ẽ_G^G 𝕊_p(G): elements killed by restriction to every proper subgroup.
pub fn tilde_e_space(big: &MonomialBurnside) -> Result<Matrix<Cyc>> {
    let maps: Vec<Matrix<Cyc>> = maximal_restrictions(big)?.into_iter().map(|(_, m)| m).collect();
    common_kernel(big.sp_indices().len(), &maps)
}

/// Normal subgroups M with M ∩ Φ(G) ≠ 1.
pub fn frattini_meeting_normals(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let lat = g.lattice()?;
    let phi = lat.frattini();
    Ok(lat
        .normal_indices()
        .into_iter()
        .map(|i| lat.get(i).clone())
        .filter(|m| m.intersect(phi).order() > 1)
        .collect())
}

/// δ_Φ 𝕊_p(G): killed by every proper restriction and by Def^G_{G/M} whenever M ∩ Φ(G) ≠ 1.
pub fn delta_phi_space(big: &MonomialBurnside) -> Result<Matrix<Cyc>> {
    let mut maps: Vec<Matrix<Cyc>> = maximal_restrictions(big)?.into_iter().map(|(_, m)| m).collect();
    let normals = frattini_meeting_normals(big.group())?;
    maps.extend(deflations(big, &normals)?.into_iter().map(|(_, m)| m));
    common_kernel(big.sp_indices().len(), &maps)
}

/// Coordinates of α·e_{H,h} = e_{αH,αh}: the permutation of npairs induced by an automorphism.
pub fn automorphism_permutation(ring: &MonomialBurnside, alpha: &GroupHom) -> Result<Vec<usize>> {
    (0..ring.rank())
        .map(|i| {
            let np = ring.npair(i);
            let img = alpha.image_of(ring.npair_subgroup(i));
            ring.npair_index(&img, alpha.apply(np.elem))
                .ok_or_else(|| Error::CheckFailed("automorphism image of an npair".into()))
        })
        .collect()
}

struct IsoClass {
    ring: Arc<MonomialBurnside>,
    links: Vec<Link>,
}

/// Row basis (sp coordinates) of I_G·𝕊_p(G): the span of
/// IndInf_{T/S} ∘ Iso ∘ DefRes_{T′/S′}(𝕊_p(G)) over pairs of isomorphic
/// sections of order < |G|. Sections are grouped by isomorphism type;
/// the middle image is closed under the automorphisms of that type, which
/// accounts for every choice of isomorphism between the two sections.
pub fn ideal_image(big: &MonomialBurnside) -> Result<Matrix<Cyc>> {
    let g = big.group();
    let lat = big.lattice();
    let sp = big.sp_indices();
    let mut classes: BTreeMap<String, IsoClass> = BTreeMap::new();
    for t in lat.subgroups() {
        for s in lat.subgroups() {
            if !s.is_subset_of(t) || t.order() / s.order() <= 1 || t.order() == g.order() && s.order() == 1 {
                continue;
            }
            if !s.elems().iter().all(|&x| t.elems().iter().all(|&y| s.contains(g.conj(y, x)))) {
                continue;
            }
            let (q, map) = section_group(g, t, s)?;
            let (canon, iso) = canonical_abelian_iso(&q)
                .ok_or_else(|| Error::Unsupported(format!("nonabelian section of order {} in {}", q.order(), g.label())))?;
            let key = canon.label().to_string();
            if !classes.contains_key(&key) {
                classes.insert(
                    key.clone(),
                    IsoClass {
                        ring: Arc::new(MonomialBurnside::new(canon)?),
                        links: Vec::new(),
                    },
                );
            }
            let class = classes.get_mut(&key).expect("inserted");
            let link = Link::new(Datum::Section { t: t.clone(), s: s.clone() }, map.then(&iso), class.ring.clone());
            class.links.push(link);
        }
    }
    let mut image = Matrix::zeros(0, sp.len());
    for class in classes.values() {
        let ring = &*class.ring;
        let sp_h = ring.sp_indices();
        if sp_h.is_empty() {
            continue;
        }
        let mut w = Matrix::zeros(0, sp_h.len());
        for link in &class.links {
            let m = link.down(big).idempotent_block(big, ring, &sp);
            w = w.vstack(&restrict_rows(&m, &sp_h)?.transpose())?.row_basis();
        }
        if w.rows() == 0 {
            continue;
        }
        w = aut_closure(ring, &sp_h, w)?;
        let pos: HashMap<usize, usize> = sp_h.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        for link in &class.links {
            let up = link.up(big);
            let mut rows = Vec::with_capacity(w.rows());
            for r in 0..w.rows() {
                let mut full = vec![Cyc::zero(); ring.rank()];
                for (i, k) in &pos {
                    full[*i] = w.get(r, *k).clone();
                }
                let v = big.species_vector(&up.apply_dense(&ring.solve_species(&full)));
                rows.push(v);
            }
            let m = Matrix::from_rows(big.rank(), rows).transpose();
            image = image.vstack(&restrict_rows(&m, &sp)?.transpose())?.row_basis();
        }
    }
    Ok(image)
}

fn aut_closure(ring: &MonomialBurnside, sp: &[usize], mut w: Matrix<Cyc>) -> Result<Matrix<Cyc>> {
    let aut = ring.group().automorphisms()?;
    let pos: HashMap<usize, usize> = sp.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let perms: Vec<Vec<usize>> = aut
        .group()
        .generators()
        .iter()
        .map(|&a| automorphism_permutation(ring, aut.hom(a as usize)))
        .collect::<Result<_>>()?;
    loop {
        let before = w.rows();
        let mut grown = w.clone();
        for perm in &perms {
            let rows = (0..w.rows())
                .map(|r| {
                    let mut v = vec![Cyc::zero(); sp.len()];
                    for (k, &i) in sp.iter().enumerate() {
                        v[pos[&perm[i]]] = w.get(r, k).clone();
                    }
                    v
                })
                .collect();
            grown = grown.vstack(&Matrix::from_rows(sp.len(), rows))?;
        }
        w = grown.row_basis();
        if w.rows() == before {
            return Ok(w);
        }
    }
}

/// Character-level DefRes along a section map: restrict to P, then average over fibres.
pub fn char_def_res(g: &FiniteGroup, h: &FiniteGroup, map: &SectionMap, f: &ClassFunction) -> ClassFunction {
    let ker = map.kernel();
    let lifts = map.lifts();
    let scale = Q::new(1.into(), (ker.order() as i64).into());
    ClassFunction::from_fn(h, |q| {
        let base = lifts[q as usize];
        let mut acc = Cyc::zero();
        for &n in ker.elems() {
            acc += f.at(g, g.mul(base, n));
        }
        acc.scale(&scale)
    })
}

/// Character-level IndInf: inflate along π to P, then induce to G.
pub fn char_ind_inf(g: &FiniteGroup, h: &FiniteGroup, map: &SectionMap, f: &ClassFunction) -> ClassFunction {
    let p = &map.p;
    let scale = Q::new(1.into(), (p.order() as i64).into());
    ClassFunction::from_fn(g, |t| {
        let mut acc = Cyc::zero();
        for x in g.elements() {
            let y = g.conj(g.inv(x), t);
            if p.contains(y) {
                acc += f.at(h, map.apply(y));
            }
        }
        acc.scale(&scale)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_named, parse_group};

    fn mb(s: &str) -> MonomialBurnside {
        MonomialBurnside::new(parse_group(s).unwrap()).unwrap()
    }

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn def_of_cp_idempotents() {
        for p in [2u32, 3, 5] {
            let m = mb(&format!("C{p}"));
            let link = Link::quotient(&m, &m.group().whole()).unwrap();
            let top = m.top_block();
            let consts = deflation_constants(&link, &m, &top.clone().collect::<Vec<_>>()).unwrap();
            for (j, c) in top.zip(consts) {
                let want = if m.npair(j).elem == 0 { Cyc::zero() } else { Cyc::from_ratio(1, p as i64) };
                assert_eq!(c, want);
            }
        }
    }

    #[test]
    fn iso_along_identity_is_identity() {
        let m = mb("C4xC2");
        let ring = Arc::new(mb("C4xC2"));
        let link = Link::iso(&m, ring, &GroupHom::identity(8)).unwrap();
        assert_eq!(link.down(&m).standard_matrix(), Matrix::identity(m.rank()));
    }

    #[test]
    fn closed_formulas_match_standard_rules() {
        let m = mb("C4");
        let k = m.lattice().get(1).clone();
        let link = Link::subgroup(&m, &k).unwrap();
        for up in [false, true] {
            let op = if up { link.up(&m) } else { link.down(&m) };
            let got = if up { op.idempotent_matrix(&link.small, &m) } else { op.idempotent_matrix(&m, &link.small) };
            assert_eq!(Some(got), predicted_idempotent_matrix(&link, &m, up), "up = {up}");
        }
        let d8 = MonomialBurnside::new(build_named("D8").unwrap()).unwrap();
        let z = d8.group().center();
        let link = Link::quotient(&d8, &z).unwrap();
        let got = link.up(&d8).idempotent_matrix(&link.small, &d8);
        assert_eq!(Some(got), predicted_idempotent_matrix(&link, &d8, true));
    }

    #[test]
    fn lemma_values_small() {
        let g = parse_group("C2xC2").unwrap();
        let t = g.closure(&[g.elem_by_name("x").unwrap()]);
        let vals: Vec<Q> = g.elements().map(|e| deflation_number(&g, e, &t).unwrap()).collect();
        let x = g.elem_by_name("x").unwrap();
        for (e, v) in g.elements().zip(vals) {
            let want = if e == 0 {
                q(-1, 2)
            } else if e == x {
                q(1, 2)
            } else {
                q(0, 1)
            };
            assert_eq!(v, want, "{}", g.name(e));
        }
        for name in ["D8", "Q8"] {
            let g = build_named(name).unwrap();
            let gd = g.derived_subgroup();
            for e in g.elements() {
                assert_eq!(deflation_number(&g, e, &gd).unwrap(), q(1, 1));
            }
        }
    }

    #[test]
    fn phi1_is_idempotent_on_c4xc2() {
        let m = mb("C4xC2");
        let p = phi1(&m).unwrap();
        assert_eq!(p.mul(&p).unwrap(), p);
    }

    #[test]
    fn spaces_of_small_groups() {
        let m = mb("C3xC3");
        assert_eq!(tilde_e_space(&m).unwrap().rows(), 9);
        assert_eq!(ideal_image(&mb("C2")).unwrap().rows(), 0);
        let d8 = MonomialBurnside::new(build_named("D8").unwrap()).unwrap();
        assert_eq!(delta_phi_space(&d8).unwrap().rows(), 0);
    }
}
