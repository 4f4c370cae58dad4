//! The monomial Burnside ring of a finite group with ℂ^× as fibre.
//!
//! Standard basis elements are G-classes of pairs [K,ψ] with ψ a linear
//! character of K; species are indexed by classes of pairs (H, hH′).
//! Primitive idempotents are the columns of the inverse species matrix,
//! obtained by block back-substitution along the subgroup-class order
//! (the species matrix is block upper triangular there).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chars::{induce, left_coset_reps, linear_characters, ClassFunction, LinearCharacter};
use crate::cyclotomic::{Cyc, Q};
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::groups::{Elem, FiniteGroup, Lattice, Subgroup};

/// Sparse vector over basis indices.
pub type Sparse = Vec<(usize, Cyc)>;

/// A class representative [K,ψ]_G; `subgroup` is a lattice index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialPair {
    pub subgroup: usize,
    pub character: LinearCharacter,
}

/// A class representative (H, hH′); `elem` is the least element of hH′.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NPair {
    pub subgroup: usize,
    pub elem: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Basis {
    Standard,
    Idempotent,
}

/// Coordinates of an element of the ring in one of the two bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BElem {
    pub group: String,
    pub basis: Basis,
    pub coeffs: Vec<Cyc>,
}

impl BElem {
    pub fn zero(group: &str, basis: Basis, n: usize) -> Self {
        BElem {
            group: group.to_string(),
            basis,
            coeffs: vec![Cyc::zero(); n],
        }
    }

    pub fn unit(group: &str, basis: Basis, n: usize, i: usize) -> Self {
        let mut b = Self::zero(group, basis, n);
        b.coeffs[i] = Cyc::one();
        b
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn same_shape(&self, o: &BElem) -> Result<()> {
        if self.group != o.group || self.basis != o.basis || self.len() != o.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}/{:?}/{} vs {}/{:?}/{}",
                self.group,
                self.basis,
                self.len(),
                o.group,
                o.basis,
                o.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &BElem) -> Result<BElem> {
        self.same_shape(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add_ref(b)).collect();
        Ok(BElem { coeffs, ..self.clone() })
    }

    pub fn sub(&self, o: &BElem) -> Result<BElem> {
        self.same_shape(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(BElem { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: &Cyc) -> BElem {
        BElem {
            coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
            ..self.clone()
        }
    }

    pub fn support(&self) -> Sparse {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }
}

/// Converts ζ_from^k into an exponent of ζ_to; None if the value is not a `to`-th root.
pub fn rescale_exp(k: u32, from: u32, to: u32) -> Option<u32> {
    let kk = k as u64 * to as u64;
    (kk % from as u64 == 0).then(|| ((kk / from as u64) % to as u64) as u32)
}

/// Lists x with x⁻¹Hx ≤ K over left cosets xK, each with a multiplicity.
type Fit = Vec<(Elem, i64)>;

pub struct MonomialBurnside {
    group: Arc<FiniteGroup>,
    modulus: u32,
    pairs: Vec<MonomialPair>,
    pair_index: HashMap<(usize, Vec<u32>), usize>,
    npairs: Vec<NPair>,
    npair_index: HashMap<(usize, Elem), usize>,
    /// Lattice indices of the subgroup-class representatives, ascending.
    class_reps: Vec<usize>,
    /// Basis index ranges per class block (pairs and npairs use the same ranges).
    blocks: Vec<std::ops::Range<usize>>,
    block_of: Vec<usize>,
    /// Derived subgroup of every lattice member.
    derived: Vec<Subgroup>,
    fit: Vec<Vec<Fit>>,
    diag_inv: Vec<OnceLock<Matrix<Cyc>>>,
    idempotents: Vec<OnceLock<Sparse>>,
    lin_images: OnceLock<Vec<ClassFunction>>,
    products: OnceLock<Vec<OnceLock<Sparse>>>,
}

impl std::fmt::Debug for MonomialBurnside {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MonomialBurnside")
            .field("group", &self.group.label())
            .field("rank", &self.pairs.len())
            .finish()
    }
}

impl MonomialBurnside {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        Self::from_arc(Arc::new(group))
    }

    pub fn from_arc(group: Arc<FiniteGroup>) -> Result<Self> {
        let g: &FiniteGroup = &group;
        let lat = g.lattice()?;
        let modulus = g.exponent();
        let abelian = g.is_abelian();
        let class_reps = lat.class_reps();
        let derived: Vec<Subgroup> = lat
            .subgroups()
            .iter()
            .map(|s| if abelian { g.trivial() } else { g.derived_of(s) })
            .collect();
        let conjugators: Vec<Elem> = if abelian { vec![0] } else { g.elements().collect() };

        let mut pairs = Vec::new();
        let mut pair_index = HashMap::new();
        let mut npairs = Vec::new();
        let mut npair_index = HashMap::new();
        let mut blocks = Vec::new();
        let mut block_of = Vec::new();
        for (b, &r) in class_reps.iter().enumerate() {
            let k = lat.get(r);
            let norm: Vec<Elem> = if abelian { vec![0] } else { g.normalizer(k).elems().to_vec() };
            let start = pairs.len();
            for psi in linear_characters(g, k, modulus) {
                let canonical = norm.iter().all(|&x| psi.conjugate(g, x).exps >= psi.exps);
                if !canonical {
                    continue;
                }
                let id = pairs.len();
                for &x in &conjugators {
                    let c = psi.conjugate(g, x);
                    let ci = lat.index_of(&c.domain).expect("conjugate subgroup");
                    pair_index.entry((ci, c.exps)).or_insert(id);
                }
                pairs.push(MonomialPair {
                    subgroup: r,
                    character: psi,
                });
                block_of.push(b);
            }
            let kd = &derived[r];
            let mut reps: Vec<Elem> = k.elems().iter().map(|&h| coset_min(g, kd, h)).collect();
            reps.sort_unstable();
            reps.dedup();
            for h in reps {
                let canonical = norm.iter().all(|&x| coset_min(g, kd, g.conj(x, h)) >= h);
                if !canonical {
                    continue;
                }
                let id = npairs.len();
                for &x in &conjugators {
                    let ck = g.conj_subgroup(x, k);
                    let ci = lat.index_of(&ck).expect("conjugate subgroup");
                    npair_index.entry((ci, coset_min(g, &derived[ci], g.conj(x, h)))).or_insert(id);
                }
                npairs.push(NPair { subgroup: r, elem: h });
            }
            if npairs.len() != pairs.len() {
                return Err(Error::CheckFailed(format!(
                    "class block {b}: {} pairs vs {} npairs",
                    pairs.len() - start,
                    npairs.len() - start
                )));
            }
            blocks.push(start..pairs.len());
        }

        let coset_reps: Vec<Vec<Elem>> = class_reps.iter().map(|&r| left_coset_reps(g, lat.get(r))).collect();
        let nb = class_reps.len();
        let mut fit = vec![vec![Fit::new(); nb]; nb];
        for a in 0..nb {
            let h = lat.get(class_reps[a]);
            for b in a..nb {
                let k = lat.get(class_reps[b]);
                if h.order() > k.order() || k.order() % h.order() != 0 {
                    continue;
                }
                if abelian {
                    if h.is_subset_of(k) {
                        fit[a][b] = vec![(0, coset_reps[b].len() as i64)];
                    }
                } else {
                    fit[a][b] = coset_reps[b]
                        .iter()
                        .filter(|&&x| h.elems().iter().all(|&y| k.contains(g.conj(g.inv(x), y))))
                        .map(|&x| (x, 1))
                        .collect();
                }
            }
        }
        let n = pairs.len();
        Ok(MonomialBurnside {
            modulus,
            pairs,
            pair_index,
            npairs,
            npair_index,
            diag_inv: (0..nb).map(|_| OnceLock::new()).collect(),
            class_reps,
            blocks,
            block_of,
            derived,
            fit,
            idempotents: (0..n).map(|_| OnceLock::new()).collect(),
            lin_images: OnceLock::new(),
            products: OnceLock::new(),
            group,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &Lattice {
        self.group.lattice().expect("built in the constructor")
    }

    pub fn label(&self) -> &str {
        self.group.label()
    }

    /// Character values are kept as exponents of ζ_modulus, modulus = exp(G).
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn standard_basis(&self) -> &[MonomialPair] {
        &self.pairs
    }

    pub fn npairs(&self) -> &[NPair] {
        &self.npairs
    }

    pub fn pair(&self, i: usize) -> &MonomialPair {
        &self.pairs[i]
    }

    pub fn npair(&self, i: usize) -> NPair {
        self.npairs[i]
    }

    pub fn pair_subgroup(&self, i: usize) -> &Subgroup {
        self.lattice().get(self.pairs[i].subgroup)
    }

    pub fn npair_subgroup(&self, i: usize) -> &Subgroup {
        self.lattice().get(self.npairs[i].subgroup)
    }

    /// Class blocks of basis indices, one per subgroup class, ascending.
    pub fn blocks(&self) -> &[std::ops::Range<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    /// Basis indices whose subgroup is the whole group.
    pub fn top_block(&self) -> std::ops::Range<usize> {
        self.blocks.last().expect("at least one block").clone()
    }

    /// Index of the class of [K,ψ] for any subgroup K and character given by
    /// exponents of ζ_modulus on the sorted elements of K.
    pub fn pair_index(&self, k: &Subgroup, modulus: u32, exps: &[u32]) -> Option<usize> {
        let ki = self.lattice().index_of(k)?;
        let scaled: Option<Vec<u32>> = exps.iter().map(|&e| rescale_exp(e, modulus, self.modulus)).collect();
        self.pair_index.get(&(ki, scaled?)).copied()
    }

    pub fn pair_index_of(&self, psi: &LinearCharacter) -> Option<usize> {
        self.pair_index(&psi.domain, psi.modulus, &psi.exps)
    }

    /// Index of the class of (H, hH′).
    pub fn npair_index(&self, h: &Subgroup, elem: Elem) -> Option<usize> {
        let hi = self.lattice().index_of(h)?;
        if !h.contains(elem) {
            return None;
        }
        self.npair_index.get(&(hi, coset_min(&self.group, &self.derived[hi], elem))).copied()
    }

    /// H = ⟨h⟩ for the npair.
    pub fn is_cyclic_npair(&self, i: usize) -> bool {
        let np = self.npairs[i];
        self.group.elem_order(np.elem) as usize == self.npair_subgroup(i).order()
    }

    /// The ring identity [G,1].
    pub fn identity_index(&self) -> usize {
        self.top_block().start
    }

    pub fn standard(&self, coeffs: Vec<Cyc>) -> BElem {
        BElem {
            group: self.label().to_string(),
            basis: Basis::Standard,
            coeffs,
        }
    }

    pub fn idempotent_coords(&self, coeffs: Vec<Cyc>) -> BElem {
        BElem {
            group: self.label().to_string(),
            basis: Basis::Idempotent,
            coeffs,
        }
    }

    pub fn standard_unit(&self, i: usize) -> BElem {
        BElem::unit(self.label(), Basis::Standard, self.rank(), i)
    }

    /// s_{H,h}([K,ψ]) = Σ_{xK ⊆ G, H ≤ ˣK} ψ(x⁻¹hx), straight from the definition.
    pub fn species(&self, np: usize, mp: usize) -> Cyc {
        let g = &*self.group;
        let h = self.npair_subgroup(np);
        let hh = self.npairs[np].elem;
        let psi = &self.pairs[mp].character;
        let k = &psi.domain;
        let mut counts = vec![0i64; self.modulus as usize];
        for x in left_coset_reps(g, k) {
            let xi = g.inv(x);
            if h.elems().iter().all(|&y| k.contains(g.conj(xi, y))) {
                counts[psi.exp_at(g.conj(xi, hh)) as usize] += 1;
            }
        }
        Cyc::from_exponent_counts(self.modulus, &counts)
    }

    /// Dense species matrix S[np][mp].
    pub fn species_matrix(&self) -> Matrix<Cyc> {
        let n = self.rank();
        let rows = (0..n).map(|i| (0..n).map(|j| self.species(i, j)).collect()).collect();
        Matrix::from_rows(n, rows)
    }

    /// F_b(k) = Σ_ψ c_ψ ψ(k) over the pairs of block b, for k in the block's subgroup.
    fn fourier(&self, b: usize, x: &[Cyc]) -> Option<Vec<Cyc>> {
        let k = self.lattice().get(self.class_reps[b]);
        let mut out: Option<Vec<Cyc>> = None;
        for i in self.blocks[b].clone() {
            let c = &x[i];
            if c.is_zero() {
                continue;
            }
            let acc = out.get_or_insert_with(|| vec![Cyc::zero(); k.order()]);
            let psi = &self.pairs[i].character;
            for (slot, &e) in acc.iter_mut().zip(&psi.exps) {
                let t = if e == 0 { c.clone() } else { c.mul_root(self.modulus, e as i64) };
                *slot += &t;
            }
        }
        out
    }

    /// Contribution of block b (given by its Fourier values) to species rows of block a.
    fn block_species(&self, a: usize, b: usize, f: &[Cyc], out: &mut [Cyc]) {
        let g = &*self.group;
        let k = self.lattice().get(self.class_reps[b]);
        for (slot, i) in out.iter_mut().zip(self.blocks[a].clone()) {
            let h = self.npairs[i].elem;
            for &(x, mult) in &self.fit[a][b] {
                let y = g.conj(g.inv(x), h);
                let v = &f[k.position(y).expect("fits")];
                if v.is_zero() {
                    continue;
                }
                if mult == 1 {
                    *slot += v;
                } else {
                    *slot += &v.scale(&Q::from_integer(mult.into()));
                }
            }
        }
    }

    /// All species values of a standard-basis vector, i.e. its idempotent coordinates.
    pub fn species_vector(&self, x: &[Cyc]) -> Vec<Cyc> {
        let nb = self.blocks.len();
        let fs: Vec<Option<Vec<Cyc>>> = (0..nb).map(|b| self.fourier(b, x)).collect();
        let mut out = vec![Cyc::zero(); self.rank()];
        for a in 0..nb {
            let r = self.blocks[a].clone();
            for (b, f) in fs.iter().enumerate().skip(a) {
                if let Some(f) = f {
                    if !self.fit[a][b].is_empty() {
                        self.block_species(a, b, f, &mut out[r.clone()]);
                    }
                }
            }
        }
        out
    }

    fn diag_inverse(&self, b: usize) -> &Matrix<Cyc> {
        self.diag_inv[b].get_or_init(|| {
            let r = self.blocks[b].clone();
            if self.group.is_abelian() {
                // [G:K]·(ψ(h)) is a scaled character table; invert by orthogonality
                let k = self.lattice().get(self.class_reps[b]);
                let scale = Q::new(1.into(), ((self.group.order() / k.order()) * k.order()).into());
                let rows = r
                    .clone()
                    .map(|j| {
                        let psi = &self.pairs[j].character;
                        r.clone()
                            .map(|i| {
                                let e = psi.exp_at(self.npairs[i].elem) as i64;
                                Cyc::root_of_unity(self.modulus, -e).scale(&scale)
                            })
                            .collect()
                    })
                    .collect();
                return Matrix::from_rows(r.len(), rows);
            }
            let rows = r.clone().map(|i| r.clone().map(|j| self.species(i, j)).collect()).collect();
            Matrix::from_rows(r.len(), rows)
                .invert()
                .expect("diagonal species blocks are character tables, hence invertible")
        })
    }

    /// The standard-basis vector with the given species values.
    pub fn solve_species(&self, target: &[Cyc]) -> Vec<Cyc> {
        let nb = self.blocks.len();
        let mut x = vec![Cyc::zero(); self.rank()];
        let mut fs: Vec<Option<Vec<Cyc>>> = vec![None; nb];
        for a in (0..nb).rev() {
            let r = self.blocks[a].clone();
            let mut res: Vec<Cyc> = target[r.clone()].to_vec();
            let mut acc = vec![Cyc::zero(); r.len()];
            for b in a + 1..nb {
                if let Some(f) = &fs[b] {
                    if !self.fit[a][b].is_empty() {
                        self.block_species(a, b, f, &mut acc);
                    }
                }
            }
            for (t, s) in res.iter_mut().zip(acc) {
                if !s.is_zero() {
                    *t = t.clone() - s;
                }
            }
            if res.iter().all(|c| c.is_zero()) {
                continue;
            }
            let xa = self.diag_inverse(a).apply(&res);
            for (i, v) in r.zip(xa) {
                x[i] = v;
            }
            fs[a] = self.fourier(a, &x);
        }
        x
    }

    /// e_{H,h} for the npair index, as a sparse standard-basis vector.
    pub fn idempotent(&self, np: usize) -> &Sparse {
        self.idempotents[np].get_or_init(|| {
            let mut t = vec![Cyc::zero(); self.rank()];
            t[np] = Cyc::one();
            self.solve_species(&t)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
    }

    pub fn idempotent_elem(&self, np: usize) -> BElem {
        let mut v = vec![Cyc::zero(); self.rank()];
        for (i, c) in self.idempotent(np) {
            v[*i] = c.clone();
        }
        self.standard(v)
    }

    /// Dense E[mp][np] whose columns are the idempotents; S·E = I.
    pub fn idempotent_matrix(&self) -> Matrix<Cyc> {
        let n = self.rank();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (i, c) in self.idempotent(j) {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    /// Idempotents as ring elements together with both change-of-basis matrices
    /// (idempotent → standard is E, standard → idempotent is S).
    pub fn idempotent_basis(&self) -> (Vec<BElem>, Matrix<Cyc>, Matrix<Cyc>) {
        let es = (0..self.rank()).map(|j| self.idempotent_elem(j)).collect();
        (es, self.idempotent_matrix(), self.species_matrix())
    }

    pub fn to_idempotent(&self, x: &BElem) -> Result<BElem> {
        self.check(x)?;
        match x.basis {
            Basis::Idempotent => Ok(x.clone()),
            Basis::Standard => Ok(self.idempotent_coords(self.species_vector(&x.coeffs))),
        }
    }

    pub fn to_standard(&self, x: &BElem) -> Result<BElem> {
        self.check(x)?;
        match x.basis {
            Basis::Standard => Ok(x.clone()),
            Basis::Idempotent => Ok(self.standard(self.solve_species(&x.coeffs))),
        }
    }

    fn check(&self, x: &BElem) -> Result<()> {
        if x.group != self.label() || x.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element of {} with {} coordinates used in {}",
                x.group,
                x.len(),
                self.label()
            )));
        }
        Ok(())
    }

    /// [H,φ]·[K,ψ] = Σ_{x ∈ H\G/K} [H ∩ ˣK, φ|·ˣψ|].
    pub fn basis_product(&self, i: usize, j: usize) -> Sparse {
        let g = &*self.group;
        let phi = &self.pairs[i].character;
        let psi = &self.pairs[j].character;
        let (h, k) = (&phi.domain, &psi.domain);
        let mut seen = vec![false; g.order()];
        let mut terms: HashMap<usize, i64> = HashMap::new();
        for x in g.elements() {
            if seen[x as usize] {
                continue;
            }
            for &a in h.elems() {
                let ax = g.mul(a, x);
                for &b in k.elems() {
                    seen[g.mul(ax, b) as usize] = true;
                }
            }
            let xk = g.conj_subgroup(x, k);
            let l = h.intersect(&xk);
            let xi = g.inv(x);
            let exps: Vec<u32> = l
                .elems()
                .iter()
                .map(|&y| (phi.exp_at(y) + psi.exp_at(g.conj(xi, y))) % self.modulus)
                .collect();
            let t = self.pair_index(&l, self.modulus, &exps).expect("every pair has a class");
            *terms.entry(t).or_insert(0) += 1;
        }
        let mut out: Sparse = terms.into_iter().map(|(t, c)| (t, Cyc::from_int(c))).collect();
        out.sort_by_key(|(t, _)| *t);
        out
    }

    fn cached_product(&self, i: usize, j: usize) -> &Sparse {
        let n = self.rank();
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let table = self.products.get_or_init(|| (0..n * n).map(|_| OnceLock::new()).collect());
        table[i * n + j].get_or_init(|| self.basis_product(i, j))
    }

    /// Ring product; standard coordinates use the Mackey formula, idempotent
    /// coordinates multiply pointwise.
    pub fn mackey_product(&self, a: &BElem, b: &BElem) -> Result<BElem> {
        self.check(a)?;
        a.same_shape(b)?;
        let n = self.rank();
        match a.basis {
            Basis::Idempotent => {
                let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.mul_ref(y)).collect();
                Ok(self.idempotent_coords(coeffs))
            }
            Basis::Standard => {
                let mut out = vec![Cyc::zero(); n];
                let sa = a.support();
                let sb = b.support();
                for (i, ca) in &sa {
                    for (j, cb) in &sb {
                        let c = ca.mul_ref(cb);
                        for (t, m) in self.cached_product(*i, *j) {
                            out[*t] += &c.mul_ref(m);
                        }
                    }
                }
                Ok(self.standard(out))
            }
        }
    }

    /// Ind_K^G ψ for every standard basis element.
    pub fn lin_images(&self) -> &[ClassFunction] {
        self.lin_images
            .get_or_init(|| self.pairs.iter().map(|p| induce(&self.group, &p.character)).collect())
    }

    /// Lin_G, the linear extension of [K,ψ] ↦ Ind_K^G ψ.
    pub fn lin(&self, x: &BElem) -> Result<ClassFunction> {
        let x = self.to_standard(x)?;
        let imgs = self.lin_images();
        let mut out = ClassFunction::zero(&self.group);
        for (i, c) in x.support() {
            for (o, v) in out.values.iter_mut().zip(&imgs[i].values) {
                if !v.is_zero() {
                    *o += &c.mul_ref(v);
                }
            }
        }
        Ok(out)
    }

    /// Lin as a classes × rank matrix in standard coordinates.
    pub fn lin_matrix(&self) -> Matrix<Cyc> {
        let imgs = self.lin_images();
        let nc = self.group.classes().classes.len();
        let rows = (0..nc).map(|c| imgs.iter().map(|f| f.values[c].clone()).collect()).collect();
        Matrix::from_rows(self.rank(), rows)
    }

    /// Npairs with H ≠ ⟨h⟩; their idempotents span ker Lin.
    pub fn sp_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.is_cyclic_npair(i)).collect()
    }

    /// The npairs spanning ker Lin, after checking that their idempotents are
    /// killed by Lin, that the remaining idempotents map to class indicators,
    /// and that the dimension agrees with the rank of the Lin matrix.
    pub fn lin_kernel_basis(&self) -> Result<Vec<NPair>> {
        let g = &*self.group;
        let sp = self.sp_indices();
        for i in 0..self.rank() {
            let f = self.lin(&self.idempotent_elem(i))?;
            let expected = if self.is_cyclic_npair(i) {
                ClassFunction::class_indicator(g, self.npairs[i].elem)
            } else {
                ClassFunction::zero(g)
            };
            if f != expected {
                return Err(Error::CheckFailed(format!("Lin of idempotent {i} in {}", self.label())));
            }
        }
        let rank = self.lin_matrix().rank();
        if rank + sp.len() != self.rank() {
            return Err(Error::CheckFailed(format!(
                "rank Lin = {rank}, kernel candidates = {}, ring rank = {}",
                sp.len(),
                self.rank()
            )));
        }
        Ok(sp.into_iter().map(|i| self.npairs[i]).collect())
    }

    pub fn pair_label(&self, i: usize) -> String {
        let p = &self.pairs[i];
        let g = &*self.group;
        let k = self.pair_subgroup(i);
        let gens = crate::chars::subgroup_generators(g, k);
        let sub = subgroup_label(g, k);
        if p.character.is_trivial() {
            return format!("[{sub},1]");
        }
        let vals: Vec<String> = gens
            .iter()
            .map(|&x| format!("{}->z{}^{}", g.name(x), self.modulus, p.character.exp_at(x)))
            .collect();
        format!("[{sub},{}]", vals.join(","))
    }

    pub fn npair_label(&self, i: usize) -> String {
        let np = self.npairs[i];
        format!("({},{})", subgroup_label(&self.group, self.npair_subgroup(i)), self.group.name(np.elem))
    }

    pub fn basis_json(&self) -> serde_json::Value {
        let pairs: Vec<String> = (0..self.rank()).map(|i| self.pair_label(i)).collect();
        let npairs: Vec<String> = (0..self.rank()).map(|i| self.npair_label(i)).collect();
        serde_json::json!({ "group": self.label(), "pairs": pairs, "npairs": npairs })
    }
}

/// min(h·H′), the canonical representative of hH′.
fn coset_min(g: &FiniteGroup, derived: &Subgroup, h: Elem) -> Elem {
    derived.elems().iter().map(|&d| g.mul(h, d)).min().expect("nonempty")
}

/// Generators of a subgroup by element names, e.g. `<x,y^2>`.
pub fn subgroup_label(g: &FiniteGroup, k: &Subgroup) -> String {
    if k.order() == 1 {
        return "1".into();
    }
    if k.order() == g.order() {
        return "G".into();
    }
    let gens = crate::chars::subgroup_generators(g, k);
    let names: Vec<&str> = gens.iter().map(|&x| g.name(x)).collect();
    format!("<{}>", names.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_named, parse_group};

    fn mb(s: &str) -> MonomialBurnside {
        MonomialBurnside::new(parse_group(s).unwrap()).unwrap()
    }

    fn int(v: i64) -> Cyc {
        Cyc::from_int(v)
    }

    #[test]
    fn c2_species_matrix() {
        let m = mb("C2");
        assert_eq!(m.rank(), 3);
        let s = m.species_matrix();
        let want = Matrix::from_rows(3, vec![vec![int(2), int(1), int(1)], vec![int(0), int(1), int(1)], vec![int(0), int(1), int(-1)]]);
        assert_eq!(s, want);
        assert_eq!(s.rank(), 3);
    }

    #[test]
    fn c2_idempotent_of_generator() {
        let m = mb("C2");
        let x = m.group().elem_by_name("x").unwrap();
        let np = m.npair_index(&m.group().whole(), x).unwrap();
        let half = Cyc::from_ratio(1, 2);
        let e = m.idempotent_elem(np);
        assert_eq!(e.coeffs, vec![Cyc::zero(), half.clone(), -half]);
    }

    #[test]
    fn trivial_group_ring() {
        let m = MonomialBurnside::new(build_named("1").unwrap()).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.idempotent_elem(0).coeffs, vec![Cyc::one()]);
        assert!(m.lin_kernel_basis().unwrap().is_empty());
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(mb("C9xC3").rank(), 76);
        assert_eq!(mb("C2xC2xC2xC2").rank(), 307);
        for p in [2u32, 3, 5] {
            let m = mb(&format!("C{p}xC{p}"));
            assert_eq!(m.sp_indices().len() as u32, p * p + p + 1);
        }
        let d8 = MonomialBurnside::new(build_named("D8").unwrap()).unwrap();
        assert_eq!(d8.rank(), d8.npairs().len());
    }

    #[test]
    fn delta_property_and_fast_species() {
        for s in ["C4", "C2xC2", "C4xC2"] {
            let m = mb(s);
            let sm = m.species_matrix();
            let e = m.idempotent_matrix();
            assert_eq!(sm.mul(&e).unwrap(), Matrix::identity(m.rank()), "{s}");
            for j in 0..m.rank() {
                assert_eq!(m.species_vector(&m.standard_unit(j).coeffs), sm.column(j), "{s} column {j}");
            }
        }
        for name in ["D8", "Q8"] {
            let m = MonomialBurnside::new(build_named(name).unwrap()).unwrap();
            let sm = m.species_matrix();
            assert_eq!(sm.mul(&m.idempotent_matrix()).unwrap(), Matrix::identity(m.rank()), "{name}");
            for j in 0..m.rank() {
                assert_eq!(m.species_vector(&m.standard_unit(j).coeffs), sm.column(j), "{name} column {j}");
            }
        }
    }

    #[test]
    fn identity_element_and_products() {
        let m = mb("C2");
        let one = m.standard_unit(m.identity_index());
        let triv = m.standard_unit(0);
        assert_eq!(m.mackey_product(&one, &triv).unwrap(), triv);
        let sq = m.mackey_product(&triv, &triv).unwrap();
        assert_eq!(sq.coeffs, vec![int(2), int(0), int(0)]);
        let all_ones = m.idempotent_coords(vec![Cyc::one(); m.rank()]);
        assert_eq!(m.to_standard(&all_ones).unwrap(), one);
    }

    #[test]
    fn idempotents_multiply_orthogonally_in_d8() {
        let m = MonomialBurnside::new(build_named("D8").unwrap()).unwrap();
        let n = m.rank();
        for i in 0..n {
            let ei = m.idempotent_elem(i);
            for j in 0..n {
                let p = m.mackey_product(&ei, &m.idempotent_elem(j)).unwrap();
                if i == j {
                    assert_eq!(p, ei);
                } else {
                    assert!(p.is_zero());
                }
            }
        }
    }

    #[test]
    fn lin_kernel_dimensions() {
        assert_eq!(mb("C3").lin_kernel_basis().unwrap().len(), 1);
        assert_eq!(mb("C2xC2").lin_kernel_basis().unwrap().len(), 7);
        assert_eq!(mb("C3xC3").lin_kernel_basis().unwrap().len(), 13);
        let q8 = MonomialBurnside::new(build_named("Q8").unwrap()).unwrap();
        q8.lin_kernel_basis().unwrap();
    }

    #[test]
    fn round_trip_is_exact() {
        let m = mb("C4xC2");
        let x = m.standard((0..m.rank()).map(|i| Cyc::from_ratio(i as i64 - 7, 3)).collect());
        let back = m.to_standard(&m.to_idempotent(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }
}
