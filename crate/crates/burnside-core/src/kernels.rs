//! Restriction kernels of 𝕊_p, their Aut(G)-module structure and the
//! decomposition checks per group family.
//!
//! Vectors of 𝕊_p(G) are written in "sp coordinates": one coordinate per
//! idempotent e_{H,h} with H ≠ ⟨h⟩, in the order of
//! [`MonomialBurnside::sp_indices`].

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bisetops::{self, automorphism_permutation, restrict_rows, Link};
use crate::chars::{self, induce, inner, linear_characters, ClassFunction, LinearCharacter};
use crate::cyclotomic::{Cyc, Q};
use crate::error::{Error, Result};
use crate::exactla::{self, Matrix};
use crate::groups::{build_abelian, build_named, named_aut_generators, xy_elem, AbelianSpec, Elem, FiniteGroup, Subgroup};
use crate::monoburn::MonomialBurnside;

/// Row basis of a subspace of 𝕊_p(G) in sp coordinates.
#[derive(Clone, Debug)]
pub struct KernelSpace {
    pub group: String,
    pub sp: Vec<usize>,
    pub basis: Matrix<Cyc>,
}

impl KernelSpace {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Row r as a vector over all npairs.
    pub fn full_row(&self, ring: &MonomialBurnside, r: usize) -> Vec<Cyc> {
        let mut v = vec![Cyc::zero(); ring.rank()];
        for (k, &i) in self.sp.iter().enumerate() {
            v[i] = self.basis.get(r, k).clone();
        }
        v
    }
}

/// 𝕊_p(G) = ker Lin_G: the identity basis on sp coordinates, after
/// cross-checking Lin on every idempotent.
pub fn sp_space(ring: &MonomialBurnside) -> Result<Matrix<Cyc>> {
    let n = ring.lin_kernel_basis()?.len();
    Ok(Matrix::identity(n))
}

/// Projects a full idempotent-coordinate vector onto sp coordinates,
/// failing if it has weight outside 𝕊_p(G).
pub fn to_sp(ring: &MonomialBurnside, v: &[Cyc]) -> Result<Vec<Cyc>> {
    let sp = ring.sp_indices();
    let m = Matrix::from_rows(v.len(), vec![v.to_vec()]).transpose();
    Ok(restrict_rows(&m, &sp)?.column(0))
}

/// 𝒦𝕊_p(G): common kernel of Res to maximal subgroups and Def by minimal normal subgroups.
pub fn restriction_kernel(ring: &MonomialBurnside) -> Result<KernelSpace> {
    let lat = ring.lattice();
    let mut maps: Vec<Matrix<Cyc>> = bisetops::maximal_restrictions(ring)?.into_iter().map(|(_, m)| m).collect();
    let minimal: Vec<Subgroup> = lat.minimal_normal().into_iter().map(|i| lat.get(i).clone()).collect();
    maps.extend(bisetops::deflations(ring, &minimal)?.into_iter().map(|(_, m)| m));
    let sp = ring.sp_indices();
    let basis = bisetops::common_kernel(sp.len(), &maps)?;
    Ok(KernelSpace {
        group: ring.label().into(),
        sp,
        basis,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Trivial,
    Cyclic { p: u32, k: u32 },
    Elementary2 { p: u32 },
    CpmCp { p: u32, m: u32 },
    OtherAbelian,
    Nonabelian,
}

pub fn family(g: &FiniteGroup) -> Family {
    if g.order() == 1 {
        return Family::Trivial;
    }
    let Some(spec) = g.abelian_spec() else {
        return if g.is_abelian() { Family::OtherAbelian } else { Family::Nonabelian };
    };
    match spec.exps.as_slice() {
        [k] => Family::Cyclic { p: spec.p, k: *k },
        [1, 1] => Family::Elementary2 { p: spec.p },
        [1, m] => Family::CpmCp { p: spec.p, m: *m },
        _ => Family::OtherAbelian,
    }
}

fn top_idem(ring: &MonomialBurnside, g: Elem) -> usize {
    ring.npair_index(&ring.group().whole(), g).expect("top npair")
}

fn unit(ring: &MonomialBurnside, i: usize) -> Vec<Cyc> {
    let mut v = vec![Cyc::zero(); ring.rank()];
    v[i] = Cyc::one();
    v
}

/// A named vector of a closed-form spanning set, in full idempotent coordinates.
#[derive(Clone, Debug)]
pub struct NamedVector {
    pub name: String,
    pub coeffs: Vec<Cyc>,
}

/// Characters of Aut(C_n), each automorphism given by the unit a with t ↦ t^a;
/// returns (units, table) with table[φ][i] = φ(t ↦ t^{units[i]}), trivial first.
fn unit_group_characters(n: u32) -> Result<(Vec<u32>, Vec<Vec<Cyc>>)> {
    if n == 1 {
        return Ok((vec![1], vec![vec![Cyc::one()]]));
    }
    let c = crate::groups::parse_group(&format!("C{n}"))?;
    let x = c.abelian_spec().expect("abelian").generator(0);
    let aut = c.automorphisms()?;
    let units = aut
        .homs()
        .iter()
        .map(|h| (1..=n).find(|&a| c.pow(x, a as i64) == h.apply(x)).expect("image of a generator") )
        .collect();
    let ag = aut.group();
    let table = linear_characters(ag, &ag.whole(), ag.exponent())
        .iter()
        .map(|ch| ag.elements().map(|e| ch.value(e)).collect())
        .collect();
    Ok((units, table))
}

/// F₁ and the F_{t,φ} for E₂ = C_p × C_p.
pub fn e2_basis(ring: &MonomialBurnside) -> Result<Vec<NamedVector>> {
    let g = ring.group();
    let Family::Elementary2 { p } = family(g) else {
        return Err(Error::Unsupported(format!("E2 basis for {}", g.label())));
    };
    let mut f1 = vec![Cyc::zero(); ring.rank()];
    for x in g.elements() {
        f1[top_idem(ring, x)] = Cyc::one();
    }
    let mut out = vec![NamedVector { name: "F_1".into(), coeffs: f1 }];
    let (units, table) = unit_group_characters(p)?;
    for t_sub in ring.lattice().subgroups().iter().filter(|s| s.order() == p as usize) {
        let t = t_sub.elems()[1];
        for (j, phi) in table.iter().enumerate().skip(1) {
            let mut v = vec![Cyc::zero(); ring.rank()];
            for (u, &a) in units.iter().enumerate() {
                v[top_idem(ring, g.pow(t, a as i64))] = phi[u].conj();
            }
            out.push(NamedVector {
                name: format!("F_{{{},phi{j}}}", g.name(t)),
                coeffs: v,
            });
        }
    }
    Ok(out)
}

/// 𝒟_G = {e_{G,l,φ}} for G cyclic of order p^k.
pub fn cyclic_basis(ring: &MonomialBurnside) -> Result<Vec<NamedVector>> {
    let g = ring.group();
    let Family::Cyclic { p, k } = family(g) else {
        return Err(Error::Unsupported(format!("cyclic basis for {}", g.label())));
    };
    let x = g.abelian_spec().expect("abelian").generator(0);
    let mut out = Vec::new();
    for l in 0..k {
        let hl = g.pow(x, p.pow(k - l) as i64);
        let (units, table) = unit_group_characters(p.pow(l))?;
        for (j, phi) in table.iter().enumerate() {
            let mut v = vec![Cyc::zero(); ring.rank()];
            for (u, &a) in units.iter().enumerate() {
                // φ(α⁻¹) = conj φ(α)
                v[top_idem(ring, g.pow(hl, a as i64))] += &phi[u].conj();
            }
            out.push(NamedVector {
                name: format!("e_{{G,{l},phi{j}}}"),
                coeffs: v,
            });
        }
    }
    Ok(out)
}

/// The element z = x^{p^{m−1}} generating the order-p subgroup of Φ(G) for C_{p^m} × C_p.
pub fn cpm_z(g: &FiniteGroup) -> Result<Elem> {
    let Family::CpmCp { p, m } = family(g) else {
        return Err(Error::Unsupported(format!("{} is not C_(p^m) x C_p", g.label())));
    };
    Ok(xy_elem(g, p.pow(m - 1) as i64, 0))
}

/// E_g = e_{G,g} − (1/p) Σ_i e_{G,gz^i} in full idempotent coordinates.
pub fn e_g(ring: &MonomialBurnside, gel: Elem) -> Result<Vec<Cyc>> {
    let g = ring.group();
    let z = cpm_z(g)?;
    let p = g.elem_order(z) as i64;
    let mut v = unit(ring, top_idem(ring, gel));
    let c = Cyc::from_ratio(-1, p);
    let mut w = gel;
    for _ in 0..p {
        v[top_idem(ring, w)] += &c;
        w = g.mul(w, z);
    }
    Ok(v)
}

/// ℰ₁, ℰ₂, ℰ₃: E_g with ⟨g⟩ maximal, g ∈ Φ(G), and the rest.
pub fn cpm_partition(ring: &MonomialBurnside) -> Result<[Vec<Elem>; 3]> {
    let g = ring.group();
    cpm_z(g)?;
    let lat = ring.lattice();
    let phi = lat.frattini();
    let maximal: Vec<&Subgroup> = lat.maximal().iter().map(|&i| lat.get(i)).collect();
    let mut parts: [Vec<Elem>; 3] = Default::default();
    for x in g.elements() {
        let c = g.closure(&[x]);
        if maximal.contains(&&c) {
            parts[0].push(x);
        } else if phi.contains(x) {
            parts[1].push(x);
        } else {
            parts[2].push(x);
        }
    }
    Ok(parts)
}

/// The named spanning set of a supported family.
pub fn paper_basis(ring: &MonomialBurnside) -> Result<Vec<NamedVector>> {
    match family(ring.group()) {
        Family::Elementary2 { .. } => e2_basis(ring),
        Family::Cyclic { .. } => cyclic_basis(ring),
        Family::CpmCp { .. } => {
            let g = ring.group();
            let [e1, _, _] = cpm_partition(ring)?;
            e1.into_iter()
                .map(|x| {
                    Ok(NamedVector {
                        name: format!("E_{}", g.name(x)),
                        coeffs: e_g(ring, x)?,
                    })
                })
                .collect()
        }
        _ => Err(Error::Unsupported(format!("no named basis for {}", ring.label()))),
    }
}

/// Rows of named vectors in sp coordinates.
pub fn sp_rows(ring: &MonomialBurnside, vs: &[NamedVector]) -> Result<Matrix<Cyc>> {
    let rows = vs.iter().map(|v| to_sp(ring, &v.coeffs)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(ring.sp_indices().len(), rows))
}

/// Aut(G) acting on a kernel basis by α·e_{H,h} = e_{αH,αh}.
#[derive(Clone, Debug)]
pub struct AutModule {
    pub kernel: KernelSpace,
    /// Row convention: row i of `matrices[a]` holds the coordinates of a·bᵢ.
    pub matrices: Vec<Matrix<Cyc>>,
    pub character: ClassFunction,
}

impl AutModule {
    /// ρ(αβ) = ρ(α)ρ(β) on all pairs with α a generator of Aut(G).
    pub fn is_homomorphism(&self, aut: &FiniteGroup) -> bool {
        aut.generators().iter().all(|&a| {
            aut.elements().all(|b| {
                let ab = aut.mul(a, b) as usize;
                self.matrices[b as usize].mul(&self.matrices[a as usize]).is_ok_and(|m| m == self.matrices[ab])
            })
        })
    }
}

/// Image of sp-coordinate rows under an npair permutation.
pub fn permute_rows(sp: &[usize], perm: &[usize], rows: &Matrix<Cyc>) -> Matrix<Cyc> {
    let pos: HashMap<usize, usize> = sp.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let out = (0..rows.rows())
        .map(|r| {
            let mut v = vec![Cyc::zero(); sp.len()];
            for (k, &i) in sp.iter().enumerate() {
                v[pos[&perm[i]]] = rows.get(r, k).clone();
            }
            v
        })
        .collect();
    Matrix::from_rows(sp.len(), out)
}

pub fn aut_module(ring: &MonomialBurnside, kernel: KernelSpace) -> Result<AutModule> {
    let aut = ring.group().automorphisms()?;
    let mut matrices = Vec::with_capacity(aut.len());
    for h in aut.homs() {
        let perm = automorphism_permutation(ring, h)?;
        let img = permute_rows(&kernel.sp, &perm, &kernel.basis);
        matrices.push(img.coordinates_in(&kernel.basis)?);
    }
    let ag = aut.group();
    let character = ClassFunction::from_fn(ag, |a| matrices[a as usize].trace());
    Ok(AutModule {
        kernel,
        matrices,
        character,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaperMatch {
    Yes,
    No,
    Unsupported,
}

#[derive(Clone, Debug, Serialize)]
pub struct Constituent {
    pub name: String,
    pub degree: String,
    pub multiplicity: String,
    pub norm: String,
    #[serde(skip)]
    pub character: Vec<Cyc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub group: String,
    pub dim_kernel: usize,
    pub constituents: Vec<Constituent>,
    pub paper_match: PaperMatch,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub action_character: Vec<Cyc>,
}

/// Checks `claimed` against the action character: each has norm 1 and
/// multiplicity 1, they are pairwise orthogonal, and they sum to it.
fn assess(
    aut: &FiniteGroup,
    dim: usize,
    chi: &ClassFunction,
    claimed: Vec<(String, ClassFunction)>,
    notes: &mut Vec<String>,
) -> Result<(Vec<Constituent>, bool)> {
    let mut ok = true;
    let mut sum = ClassFunction::zero(aut);
    let mut out = Vec::new();
    for (i, (name, c)) in claimed.iter().enumerate() {
        let norm = inner(aut, c, c)?;
        let mult = inner(aut, chi, c)?;
        ok &= norm.is_one() && mult.is_one();
        for (_, d) in &claimed[..i] {
            if !inner(aut, c, d)?.is_zero() {
                ok = false;
                notes.push(format!("{name} is not orthogonal to an earlier constituent"));
            }
        }
        sum = sum.add(c);
        out.push(Constituent {
            name: name.clone(),
            degree: c.degree().to_string(),
            multiplicity: mult.to_string(),
            norm: norm.to_string(),
            character: c.values.clone(),
        });
    }
    if sum != *chi {
        ok = false;
        notes.push(format!("residual character {:?}", chi.sub(&sum).values.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    }
    let degs: Q = claimed.iter().map(|(_, c)| c.degree().to_rational().unwrap_or_default()).sum();
    if degs != Q::from_integer((dim as i64).into()) {
        ok = false;
        notes.push(format!("constituent degrees sum to {degs}, kernel has dimension {dim}"));
    }
    Ok((out, ok))
}

/// Linear character of a subgroup S of `a` with given generator values,
/// extended along the Cayley graph of S.
fn char_from_gens(a: &FiniteGroup, s: &Subgroup, gens: &[Elem], exps: &[u32], modulus: u32) -> Result<LinearCharacter> {
    let mut val = vec![u32::MAX; a.order()];
    val[0] = 0;
    let mut queue = vec![0 as Elem];
    let mut i = 0;
    while i < queue.len() {
        let u = queue[i];
        for (&g, &e) in gens.iter().zip(exps) {
            let v = a.mul(u, g);
            let w = (val[u as usize] + e) % modulus;
            if val[v as usize] == u32::MAX {
                val[v as usize] = w;
                queue.push(v);
            } else if val[v as usize] != w {
                return Err(Error::CheckFailed("generator values do not define a character".into()));
            }
        }
        i += 1;
    }
    if queue.len() != s.order() {
        return Err(Error::CheckFailed("generators do not span the subgroup".into()));
    }
    Ok(LinearCharacter {
        domain: s.clone(),
        modulus,
        exps: s.elems().iter().map(|&e| val[e as usize]).collect(),
    })
}

/// The characters of Aut(C_{p^k}) trivial on {α : α(g^p) = g^p for all g}.
pub fn non_primitive(g: &FiniteGroup) -> Result<Vec<LinearCharacter>> {
    let aut = g.automorphisms()?;
    let ag = aut.group();
    let pth: Vec<Elem> = match family(g) {
        Family::Cyclic { p, .. } => g.elements().map(|x| g.pow(x, p as i64)).collect(),
        _ => return Err(Error::Unsupported("non-primitive characters need a cyclic group".into())),
    };
    let kernel: Vec<Elem> = ag
        .elements()
        .filter(|&a| pth.iter().all(|&y| aut.hom(a as usize).apply(y) == y))
        .collect();
    Ok(linear_characters(ag, &ag.whole(), ag.exponent().max(1))
        .into_iter()
        .filter(|c| kernel.iter().all(|&a| c.exp_at(a) == 0))
        .collect())
}

pub fn decompose(ring: &MonomialBurnside) -> Result<DecompositionReport> {
    let g = ring.group();
    let kernel = restriction_kernel(ring)?;
    let dim = kernel.dim();
    let aut = g.automorphisms()?;
    let ag = aut.group();
    let mut notes = Vec::new();
    let module = aut_module(ring, kernel)?;
    if !module.is_homomorphism(ag) {
        return Err(Error::CheckFailed("Aut action is not a homomorphism".into()));
    }
    let chi = &module.character;
    let claimed: Option<Vec<(String, ClassFunction)>> = match family(g) {
        Family::Cyclic { .. } => {
            notes.push(
                "non-primitive: trivial on the kernel of Aut(C_(p^k)) -> Aut(C_(p^(k-1))); this reading is a choice for p = 2".into(),
            );
            let np = non_primitive(g)?;
            Some(
                np.iter()
                    .enumerate()
                    .map(|(i, c)| (format!("phi{i}"), chars::linear_as_class_function(ag, c)))
                    .collect(),
            )
        }
        Family::Elementary2 { p } => Some(e2_constituents(g, p)?),
        Family::CpmCp { p: 2, m: 2 } => Some(vec![("D8 degree 2".into(), dihedral_degree_two(ag)?)]),
        Family::CpmCp { p: 2, m } => Some(even_constituents(g, m)?),
        Family::CpmCp { p, m } => Some(odd_constituents(g, p, m)?.into_iter().map(|(n, c, _)| (n, c)).collect()),
        _ if dim == 0 => Some(Vec::new()),
        _ => None,
    };
    let (constituents, paper_match) = match claimed {
        Some(c) => {
            let (cs, ok) = assess(ag, dim, chi, c, &mut notes)?;
            (cs, if ok { PaperMatch::Yes } else { PaperMatch::No })
        }
        None => (Vec::new(), PaperMatch::Unsupported),
    };
    Ok(DecompositionReport {
        group: g.label().into(),
        dim_kernel: dim,
        constituents,
        paper_match,
        notes,
        action_character: chi.values.clone(),
    })
}

/// Trivial character plus Ind_B^Γ φ_j, φ_j(β) = ζ_{p−1}^j, trivial on α and γ.
pub fn e2_constituents(g: &FiniteGroup, p: u32) -> Result<Vec<(String, ClassFunction)>> {
    let named = named_aut_generators(g)?;
    let ag = g.automorphisms()?.group();
    let (alpha, beta, gamma) = (named.get("alpha") as Elem, named.get("beta") as Elem, named.get("gamma") as Elem);
    let borel = ag.closure(&[alpha, beta, gamma]);
    let mut out = vec![("trivial".to_string(), ClassFunction::trivial(ag))];
    let modulus = ag.exponent();
    for j in 1..p.saturating_sub(1) {
        let e = modulus / (p - 1) * j;
        let phi = char_from_gens(ag, &borel, &[alpha, beta, gamma], &[0, e, 0], modulus)?;
        out.push((format!("Ind_B phi{j}"), induce(ag, &phi)));
    }
    Ok(out)
}

/// The Borel subgroup ⟨α,β,γ⟩ of Aut(C_p × C_p).
pub fn borel(g: &FiniteGroup) -> Result<Subgroup> {
    let named = named_aut_generators(g)?;
    let ag = g.automorphisms()?.group();
    Ok(ag.closure(&[named.get("alpha") as Elem, named.get("beta") as Elem, named.get("gamma") as Elem]))
}

/// The degree-2 irreducible of a dihedral group of order 8.
fn dihedral_degree_two(a: &FiniteGroup) -> Result<ClassFunction> {
    let r = a
        .elements()
        .find(|&e| a.elem_order(e) == 4)
        .ok_or_else(|| Error::Unsupported("no element of order 4".into()))?;
    let c = a.closure(&[r]);
    Ok(induce(a, &char_from_gens(a, &c, &[r], &[1], 4)?))
}

/// Ind_I^Γ ψ for I = ⟨a1,a2,b⟩, ψ(b) = 1, ψ(a1) = ±1, ψ(a2) a primitive 2^{m−2}-th root.
pub fn even_constituents(g: &FiniteGroup, m: u32) -> Result<Vec<(String, ClassFunction)>> {
    let named = named_aut_generators(g)?;
    let ag = g.automorphisms()?.group();
    let (a1, a2, b) = (named.get("a1") as Elem, named.get("a2") as Elem, named.get("b") as Elem);
    let i_sub = ag.closure(&[a1, a2, b]);
    let n = 1u32 << (m - 2);
    let modulus = ag.exponent().max(2);
    let mut out = Vec::new();
    for s1 in 0..2u32 {
        for k in (1..n).step_by(2) {
            let e1 = s1 * modulus / 2;
            let e2 = k * modulus / n;
            let psi = char_from_gens(ag, &i_sub, &[a1, a2, b], &[e1, e2, 0], modulus)?;
            out.push((format!("Ind_I psi(a1={},a2=z{n}^{k})", if s1 == 0 { "1" } else { "-1" }), induce(ag, &psi)));
        }
    }
    Ok(out)
}

/// For odd C_{p^m} × C_p: N = ⟨a,b,d⟩, T = ⟨b,d,a^{p−1}⟩, Σ = ⟨b,d⟩; for each
/// faithful V on T/Σ and each linear W on N extending it, Ind_N^Γ W.
/// Also returns the value at a^ω.
pub fn odd_constituents(g: &FiniteGroup, p: u32, m: u32) -> Result<Vec<(String, ClassFunction, Cyc)>> {
    let named = named_aut_generators(g)?;
    let ag = g.automorphisms()?.group();
    let (a, b, d) = (named.get("a") as Elem, named.get("b") as Elem, named.get("d") as Elem);
    let omega = named.params["omega"];
    let n_sub = ag.closure(&[a, b, d]);
    let ap = ag.pow(a, (p - 1) as i64);
    let sigma = ag.closure(&[b, d]);
    let ord = p.pow(m - 1);
    let faithful_on_quotient = |w: &LinearCharacter| {
        sigma.elems().iter().all(|&s| w.exp_at(s) == 0) && {
            // the image of a^{p−1} generates T/Σ; V faithful iff W(a^{p−1}) has order p^{m−1}
            let e = w.exp_at(ap) as u64;
            let md = w.modulus as u64;
            let o = md / num_integer::gcd(e, md);
            o == ord as u64
        }
    };
    let mut out = Vec::new();
    for (i, w) in linear_characters(ag, &n_sub, ag.exponent())
        .into_iter()
        .filter(faithful_on_quotient)
        .enumerate()
    {
        let chi = induce(ag, &w);
        let spot = chi.at(ag, ag.pow(a, omega)).clone();
        out.push((format!("Ind_N W{i}"), chi, spot));
    }
    Ok(out)
}

/// 𝕊_p(G) = 𝒦𝕊_p(G) + I_G·𝕊_p(G).
pub fn condition_a(ring: &MonomialBurnside) -> Result<bool> {
    let n = ring.sp_indices().len();
    let k = restriction_kernel(ring)?;
    let img = bisetops::ideal_image(ring)?;
    Ok(exactla::span_sum(n, &[&k.basis, &img])?.rows() == n)
}

/// Span in 𝕊_p(E₂) of Ind_T e_{T,1} and Inf_{E₂/T} e_{E₂/T,1} over the subgroups T of order p.
pub fn e2_subfunctor_span(ring: &MonomialBurnside) -> Result<Matrix<Cyc>> {
    let g = ring.group();
    let Family::Elementary2 { p } = family(g) else {
        return Err(Error::Unsupported(format!("{} is not C_p x C_p", g.label())));
    };
    let sp = ring.sp_indices();
    let mut rows = Vec::new();
    let lat = ring.lattice();
    for t in lat.subgroups().iter().filter(|s| s.order() == p as usize) {
        for link in [Link::section(ring, t, &g.trivial())?, Link::section(ring, &g.whole(), t)?] {
            let small = &*link.small;
            let top = small.npair_index(&small.group().whole(), 0).expect("top npair");
            let v = link.up(ring).idempotent_column(small, ring, top);
            rows.push(to_sp(ring, &v)?);
        }
    }
    Ok(Matrix::from_rows(sp.len(), rows).row_basis())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyRow {
    pub group: String,
    pub dim_kernel: usize,
    pub expected_nonzero: bool,
    pub agrees: bool,
}

/// All abelian p-groups of order ≤ `max_order` (order > 1), smallest first.
pub fn abelian_p_groups(p: u32, max_order: usize) -> Vec<AbelianSpec> {
    fn parts(n: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            acc.push(k);
            parts(n - k, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let mut n = 1;
    while (p as usize).pow(n) <= max_order {
        let mut ps = Vec::new();
        parts(n, n, &mut Vec::new(), &mut ps);
        for mut e in ps {
            e.reverse();
            out.push(AbelianSpec::new(p, e).expect("valid partition"));
        }
        n += 1;
    }
    out
}

/// 𝒦𝕊_p(G) ≠ 0 exactly for cyclic groups and C_{p^k} × C_p.
pub fn classify_all(p: u32, max_order: usize) -> Result<Vec<ClassifyRow>> {
    let mut groups: Vec<FiniteGroup> = abelian_p_groups(p, max_order).iter().map(build_abelian).collect();
    let samples: &[&str] = match p {
        2 => &["D8", "Q8"],
        3 => &["Hei3"],
        _ => &[],
    };
    for s in samples {
        let h = build_named(s)?;
        if h.order() <= max_order {
            groups.push(h);
        }
    }
    let mut out = Vec::new();
    for g in groups {
        let expected = matches!(family(&g), Family::Cyclic { .. } | Family::Elementary2 { .. } | Family::CpmCp { .. });
        let ring = MonomialBurnside::new(g)?;
        let dim = restriction_kernel(&ring)?.dim();
        out.push(ClassifyRow {
            group: ring.label().into(),
            dim_kernel: dim,
            expected_nonzero: expected,
            agrees: (dim > 0) == expected,
        });
    }
    Ok(out)
}

/// The C₄ × C₂ elements E_x, E_{xy} and the images of the named maps a, b on them.
pub fn c4xc2_action_table(ring: &MonomialBurnside) -> Result<Vec<(String, String, Vec<Cyc>)>> {
    let g = ring.group();
    if g.label() != "C4xC2" {
        return Err(Error::Unsupported("the action table is stated for C4xC2".into()));
    }
    let named = named_aut_generators(g)?;
    let aut = g.automorphisms()?;
    let ex = e_g(ring, xy_elem(g, 1, 0))?;
    let exy = e_g(ring, xy_elem(g, 1, 1))?;
    let basis = Matrix::from_rows(ring.rank(), vec![ex.clone(), exy.clone()]);
    let mut out = Vec::new();
    for tok in ["a", "b"] {
        let perm = automorphism_permutation(ring, aut.hom(named.get(tok)))?;
        for (nm, v) in [("E_x", &ex), ("E_xy", &exy)] {
            let mut img = vec![Cyc::zero(); ring.rank()];
            for (i, c) in v.iter().enumerate() {
                img[perm[i]] = c.clone();
            }
            let coords = Matrix::from_rows(ring.rank(), vec![img]).coordinates_in(&basis)?;
            out.push((tok.to_string(), nm.to_string(), coords.row(0).to_vec()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_group;

    fn mb(s: &str) -> MonomialBurnside {
        MonomialBurnside::from_arc(std::sync::Arc::new(
            parse_group(s).or_else(|_| build_named(s)).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn small_kernel_dimensions() {
        for (s, d) in [("C2", 1), ("C3", 1), ("C2xC2", 1), ("C3xC3", 5), ("C4xC2", 2), ("C9", 2), ("C8", 2), ("C2xC2xC2", 0), ("D8", 0), ("Q8", 0)] {
            assert_eq!(restriction_kernel(&mb(s)).unwrap().dim(), d, "{s}");
        }
    }

    #[test]
    fn named_bases_span_the_kernel() {
        for s in ["C2xC2", "C3xC3", "C4xC2", "C8xC2"] {
            let ring = mb(s);
            let k = restriction_kernel(&ring).unwrap();
            let b = sp_rows(&ring, &paper_basis(&ring).unwrap()).unwrap();
            assert!(exactla::same_space(&b, &k.basis), "{s}");
        }
        let ring = mb("C9");
        let b = cyclic_basis(&ring).unwrap();
        assert_eq!(b.len(), 3);
        let tilde = bisetops::tilde_e_space(&ring).unwrap();
        assert!(exactla::same_space(&sp_rows(&ring, &b).unwrap(), &tilde));
    }

    #[test]
    fn c4xc2_table() {
        let ring = mb("C4xC2");
        let t = c4xc2_action_table(&ring).unwrap();
        let one = Cyc::one();
        let m1 = -Cyc::one();
        let z = Cyc::zero();
        assert_eq!(t[0].2, vec![z.clone(), one.clone()]);
        assert_eq!(t[1].2, vec![m1.clone(), z.clone()]);
        assert_eq!(t[2].2, vec![m1, z]);
    }

    #[test]
    fn decompositions_of_small_cases() {
        for s in ["C3xC3", "C4xC2", "C9", "C2xC2"] {
            let r = decompose(&mb(s)).unwrap();
            assert_eq!(r.paper_match, PaperMatch::Yes, "{s}: {:?}", r.notes);
        }
    }

    #[test]
    fn e2_subfunctor() {
        for p in [2, 3] {
            let ring = mb(&format!("C{p}xC{p}"));
            let f = e2_subfunctor_span(&ring).unwrap();
            assert_eq!(f.rows(), 2 * p + 2);
            let k = restriction_kernel(&ring).unwrap();
            assert_eq!(exactla::span_sum(ring.sp_indices().len(), &[&f, &k.basis]).unwrap().rows(), p * p + p + 1);
        }
    }

    #[test]
    fn partitions_enumerate_abelian_groups() {
        let labels: Vec<String> = abelian_p_groups(2, 16).iter().map(|s| s.label()).collect();
        assert_eq!(labels.len(), 1 + 2 + 3 + 5);
        assert!(labels.contains(&"C4xC2".to_string()));
    }
}
