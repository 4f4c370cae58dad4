//! Exact class functions and linear characters.
//!
//! Linear characters store exponents: a value ζ_e^k is kept as `k` with
//! the modulus `e` shared by the whole character, usually exp(G). Class
//! functions carry one [`Cyc`] per conjugacy class in the class order of
//! [`FiniteGroup::classes`].

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde_json::json;

use crate::cyclotomic::{Cyc, Q};
use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup, GroupHom, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearCharacter {
    pub domain: Subgroup,
    pub modulus: u32,
    /// ψ(hᵢ) = ζ_modulus^{exps[i]} for the i-th element of `domain`.
    pub exps: Vec<u32>,
}

impl LinearCharacter {
    pub fn trivial(domain: Subgroup, modulus: u32) -> Self {
        let exps = vec![0; domain.order()];
        LinearCharacter { domain, modulus, exps }
    }

    pub fn exp_at(&self, h: Elem) -> u32 {
        self.exps[self.domain.position(h).expect("element of the domain")]
    }

    pub fn value(&self, h: Elem) -> Cyc {
        Cyc::root_of_unity(self.modulus, self.exp_at(h) as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&k| k == 0)
    }

    pub fn is_trivial_on(&self, s: &Subgroup) -> bool {
        s.elems().iter().all(|&h| self.exp_at(h) == 0)
    }

    /// ᵍψ on ᵍK, (ᵍψ)(gkg⁻¹) = ψ(k).
    pub fn conjugate(&self, g: &FiniteGroup, x: Elem) -> LinearCharacter {
        let domain = g.conj_subgroup(x, &self.domain);
        let mut exps = vec![0; domain.order()];
        for (i, &k) in self.domain.elems().iter().enumerate() {
            exps[domain.position(g.conj(x, k)).expect("conjugate")] = self.exps[i];
        }
        LinearCharacter {
            domain,
            modulus: self.modulus,
            exps,
        }
    }

    pub fn restrict(&self, s: &Subgroup) -> LinearCharacter {
        let exps = s.elems().iter().map(|&h| self.exp_at(h)).collect();
        LinearCharacter {
            domain: s.clone(),
            modulus: self.modulus,
            exps,
        }
    }

    pub fn mul(&self, o: &LinearCharacter) -> LinearCharacter {
        assert_eq!(self.domain, o.domain);
        assert_eq!(self.modulus, o.modulus);
        let exps = self.exps.iter().zip(&o.exps).map(|(a, b)| (a + b) % self.modulus).collect();
        LinearCharacter {
            domain: self.domain.clone(),
            modulus: self.modulus,
            exps,
        }
    }

    pub fn inverse(&self) -> LinearCharacter {
        let e = self.modulus;
        LinearCharacter {
            domain: self.domain.clone(),
            modulus: e,
            exps: self.exps.iter().map(|&k| (e - k) % e).collect(),
        }
    }

    pub fn is_multiplicative(&self, g: &FiniteGroup) -> bool {
        let els = self.domain.elems();
        els.iter().all(|&a| {
            els.iter()
                .all(|&b| self.exp_at(g.mul(a, b)) == (self.exp_at(a) + self.exp_at(b)) % self.modulus)
        })
    }
}

/// Greedy generating set of a subgroup: repeatedly the largest-order element outside.
pub fn subgroup_generators(g: &FiniteGroup, h: &Subgroup) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut cur = g.trivial();
    while cur.order() < h.order() {
        let pick = h
            .elems()
            .iter()
            .copied()
            .filter(|&a| !cur.contains(a))
            .max_by_key(|&a| (g.elem_order(a), std::cmp::Reverse(a)))
            .expect("proper");
        gens.push(pick);
        cur = g.closure(&gens);
    }
    gens
}

/// All linear characters of H with values in the `modulus`-th roots of
/// unity, in lexicographic order of generator exponents (trivial first).
pub fn linear_characters(g: &FiniteGroup, h: &Subgroup, modulus: u32) -> Vec<LinearCharacter> {
    let gens = subgroup_generators(g, h);
    let steps: Vec<u32> = gens
        .iter()
        .map(|&s| {
            let o = g.elem_order(s);
            assert_eq!(modulus % o, 0, "modulus must be a multiple of every element order");
            modulus / o
        })
        .collect();
    let mut pos: HashMap<Elem, usize> = HashMap::with_capacity(h.order());
    for (i, &e) in h.elems().iter().enumerate() {
        pos.insert(e, i);
    }
    let mut out = Vec::new();
    let mut pick = vec![0u32; gens.len()];
    loop {
        let imgs: Vec<u32> = pick.iter().zip(&steps).map(|(k, s)| k * s).collect();
        if let Some(exps) = extend_character(g, h, &pos, &gens, &imgs, modulus) {
            out.push(LinearCharacter {
                domain: h.clone(),
                modulus,
                exps,
            });
        }
        let mut k = gens.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < g.elem_order(gens[k]) {
                break;
            }
            pick[k] = 0;
        }
    }
}

fn extend_character(
    g: &FiniteGroup,
    h: &Subgroup,
    pos: &HashMap<Elem, usize>,
    gens: &[Elem],
    imgs: &[u32],
    modulus: u32,
) -> Option<Vec<u32>> {
    let mut val = vec![u32::MAX; h.order()];
    val[0] = 0;
    let mut queue = vec![0 as Elem];
    let mut i = 0;
    while i < queue.len() {
        let u = queue[i];
        let vu = val[pos[&u]];
        for (&s, &t) in gens.iter().zip(imgs) {
            let v = g.mul(u, s);
            let w = (vu + t) % modulus;
            let slot = &mut val[pos[&v]];
            if *slot == u32::MAX {
                *slot = w;
                queue.push(v);
            } else if *slot != w {
                return None;
            }
        }
        i += 1;
    }
    Some(val)
}

/// One exact value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<Cyc>,
}

impl ClassFunction {
    pub fn from_fn(g: &FiniteGroup, f: impl Fn(Elem) -> Cyc) -> Self {
        ClassFunction {
            values: g.classes().classes.iter().map(|c| f(c.rep)).collect(),
        }
    }

    pub fn zero(g: &FiniteGroup) -> Self {
        ClassFunction {
            values: vec![Cyc::zero(); g.classes().classes.len()],
        }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        ClassFunction {
            values: vec![Cyc::one(); g.classes().classes.len()],
        }
    }

    pub fn regular(g: &FiniteGroup) -> Self {
        let n = g.order() as i64;
        Self::from_fn(g, |e| if e == 0 { Cyc::from_int(n) } else { Cyc::zero() })
    }

    /// Indicator of the class containing `h`.
    pub fn class_indicator(g: &FiniteGroup, h: Elem) -> Self {
        let c = g.classes().class_of[h as usize];
        let mut v = Self::zero(g);
        v.values[c] = Cyc::one();
        v
    }

    pub fn at(&self, g: &FiniteGroup, e: Elem) -> &Cyc {
        &self.values[g.classes().class_of[e as usize]]
    }

    pub fn degree(&self) -> &Cyc {
        &self.values[0]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        ClassFunction {
            values: self.values.iter().zip(&o.values).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ClassFunction {
            values: self.values.iter().zip(&o.values).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        ClassFunction {
            values: self.values.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, o: &Self) -> Self {
        ClassFunction {
            values: self.values.iter().zip(&o.values).map(|(a, b)| a.mul_ref(b)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ClassFunction {
            values: self.values.iter().map(Cyc::conj).collect(),
        }
    }
}

/// A linear character of the whole group as a class function.
pub fn linear_as_class_function(g: &FiniteGroup, psi: &LinearCharacter) -> ClassFunction {
    ClassFunction::from_fn(g, |e| psi.value(e))
}

/// Left coset representatives x of K in G (least element of each coset xK).
pub fn left_coset_reps(g: &FiniteGroup, k: &Subgroup) -> Vec<Elem> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::with_capacity(g.order() / k.order());
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        reps.push(x);
        for &y in k.elems() {
            seen[g.mul(x, y) as usize] = true;
        }
    }
    reps
}

/// Ind_K^G ψ(g) = Σ_{xK ⊆ G, g ∈ ˣK} ψ(x⁻¹gx).
pub fn induce(g: &FiniteGroup, psi: &LinearCharacter) -> ClassFunction {
    let reps = left_coset_reps(g, &psi.domain);
    let e = psi.modulus;
    ClassFunction::from_fn(g, |h| {
        let mut counts = vec![0i64; e as usize];
        for &x in &reps {
            let y = g.conj(g.inv(x), h);
            if psi.domain.contains(y) {
                counts[psi.exp_at(y) as usize] += 1;
            }
        }
        Cyc::from_exponent_counts(e, &counts)
    })
}

/// Induction of a class function on H along an injective hom H → G.
pub fn induce_class_function(g: &FiniteGroup, h: &FiniteGroup, emb: &GroupHom, f: &ClassFunction) -> ClassFunction {
    let img = emb.image_of(&h.whole());
    let mut back = vec![Elem::MAX; g.order()];
    for a in h.elements() {
        back[emb.apply(a) as usize] = a;
    }
    let scale = Cyc::from_rational(Q::new(1.into(), (h.order() as i64).into()));
    ClassFunction::from_fn(g, |t| {
        let mut acc = Cyc::zero();
        for x in g.elements() {
            let y = g.conj(g.inv(x), t);
            if img.contains(y) {
                acc += f.at(h, back[y as usize]);
            }
        }
        acc.mul_ref(&scale)
    })
}

/// f ∘ emb for a hom H → G (restriction along an embedding, or inflation
/// along a projection).
pub fn pullback(h: &FiniteGroup, emb: &GroupHom, g: &FiniteGroup, f: &ClassFunction) -> ClassFunction {
    ClassFunction::from_fn(h, |a| f.at(g, emb.apply(a)).clone())
}

pub fn restrict(h: &FiniteGroup, emb: &GroupHom, g: &FiniteGroup, f: &ClassFunction) -> Result<ClassFunction> {
    if emb.images.len() != h.order() || emb.target_order != g.order() || !emb.is_homomorphism(h, g) {
        return Err(Error::InvalidOp("restriction needs an embedding H -> G".into()));
    }
    Ok(pullback(h, emb, g, f))
}

pub fn inflate(g: &FiniteGroup, proj: &GroupHom, q: &FiniteGroup, f: &ClassFunction) -> Result<ClassFunction> {
    if proj.images.len() != g.order() || proj.target_order != q.order() || !proj.is_homomorphism(g, q) {
        return Err(Error::InvalidOp("inflation needs a projection G -> G/N".into()));
    }
    Ok(pullback(g, proj, q, f))
}

/// ⟨f, h⟩ = (1/|G|) Σ_classes |C|·f(C)·conj(h(C)).
pub fn inner(g: &FiniteGroup, f: &ClassFunction, h: &ClassFunction) -> Result<Cyc> {
    let cls = &g.classes().classes;
    if f.values.len() != cls.len() || h.values.len() != cls.len() {
        return Err(Error::DimensionMismatch("class functions on different groups".into()));
    }
    let mut acc = Cyc::zero();
    for ((c, a), b) in cls.iter().zip(&f.values).zip(&h.values) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let t = a.mul_ref(&b.conj()).scale(&Q::from_integer((c.elems.len() as i64).into()));
        acc += &t;
    }
    Ok(acc.scale(&Q::new(1.into(), (g.order() as i64).into())))
}

pub fn is_irreducible(g: &FiniteGroup, f: &ClassFunction) -> bool {
    let positive_degree = f
        .degree()
        .to_rational()
        .is_some_and(|d| d > Q::zero());
    positive_degree && inner(g, f, f).is_ok_and(|n| n.is_one())
}

/// `{group, classes:[{rep, size}], rows:[{name, values}]}`
pub fn character_table_json(g: &FiniteGroup, rows: &[(String, ClassFunction)]) -> serde_json::Value {
    let classes: Vec<_> = g
        .classes()
        .classes
        .iter()
        .map(|c| json!({"rep": g.name(c.rep), "size": c.elems.len()}))
        .collect();
    let rows: Vec<_> = rows
        .iter()
        .map(|(n, f)| json!({"name": n, "values": f.values}))
        .collect();
    json!({"group": g.label(), "classes": classes, "rows": rows})
}

/// Aligned text rendering with symbolic values.
pub fn character_table_text(g: &FiniteGroup, rows: &[(String, ClassFunction)]) -> String {
    let cls = &g.classes().classes;
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut head = vec!["class".to_string()];
    head.extend(cls.iter().map(|c| g.name(c.rep).to_string()));
    cells.push(head);
    let mut sizes = vec!["size".to_string()];
    sizes.extend(cls.iter().map(|c| c.elems.len().to_string()));
    cells.push(sizes);
    for (n, f) in rows {
        let mut r = vec![n.clone()];
        r.extend(f.values.iter().map(|v| v.to_string()));
        cells.push(r);
    }
    let ncol = cells[0].len();
    let widths: Vec<usize> = (0..ncol)
        .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    cells
        .iter()
        .map(|r| {
            r.iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_named, parse_group};

    #[test]
    fn character_counts() {
        let g = build_named("1").unwrap();
        assert_eq!(linear_characters(&g, &g.whole(), 1).len(), 1);
        let g = parse_group("C2").unwrap();
        let chars = linear_characters(&g, &g.whole(), 2);
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_trivial());
        let g = parse_group("C9xC3").unwrap();
        assert_eq!(linear_characters(&g, &g.whole(), 9).len(), 27);
        let q8 = build_named("Q8").unwrap();
        let chars = linear_characters(&q8, &q8.whole(), 4);
        assert_eq!(chars.len(), 4);
        assert!(chars.iter().all(|c| c.is_multiplicative(&q8) && c.is_trivial_on(&q8.derived_subgroup())));
    }

    #[test]
    fn induction_examples() {
        let g = parse_group("C2").unwrap();
        let triv = LinearCharacter::trivial(g.trivial(), 2);
        let ind = induce(&g, &triv);
        assert_eq!(ind.values, vec![Cyc::from_int(2), Cyc::zero()]);
        let whole = LinearCharacter::trivial(g.whole(), 2);
        assert_eq!(induce(&g, &whole), ClassFunction::trivial(&g));
    }

    #[test]
    fn restriction_of_regular_c4() {
        let g = parse_group("C4").unwrap();
        let x = g.elem_by_name("x").unwrap();
        let s = g.closure(&[g.pow(x, 2)]);
        let (h, emb) = g.subgroup_as_group(&s);
        let r = restrict(&h, &emb, &g, &ClassFunction::regular(&g)).unwrap();
        assert_eq!(r.values, vec![Cyc::from_int(4), Cyc::zero()]);
        assert_eq!(restrict(&g, &GroupHom::identity(4), &g, &ClassFunction::regular(&g)).unwrap(), ClassFunction::regular(&g));
    }

    #[test]
    fn inflation_kernel_contains_frattini() {
        let g = parse_group("C4xC2").unwrap();
        let phi = g.frattini().unwrap();
        let (q, proj) = g.quotient(&phi).unwrap();
        let sgn = linear_characters(&q, &q.whole(), 2).pop().unwrap();
        let f = inflate(&g, &proj, &q, &linear_as_class_function(&q, &sgn)).unwrap();
        for &z in phi.elems() {
            assert_eq!(f.at(&g, z), &Cyc::one());
        }
    }

    #[test]
    fn inner_products() {
        let g = build_named("D8").unwrap();
        let one = ClassFunction::trivial(&g);
        assert_eq!(inner(&g, &one, &one).unwrap(), Cyc::one());
        assert_eq!(inner(&g, &ClassFunction::regular(&g), &one).unwrap(), Cyc::one());
        assert!(is_irreducible(&g, &one));
        assert!(!is_irreducible(&g, &ClassFunction::regular(&g)));
    }

    #[test]
    fn table_text_and_json() {
        let g = parse_group("C3").unwrap();
        let rows: Vec<(String, ClassFunction)> = linear_characters(&g, &g.whole(), 3)
            .iter()
            .enumerate()
            .map(|(i, c)| (format!("chi{i}"), linear_as_class_function(&g, c)))
            .collect();
        let j = character_table_json(&g, &rows);
        assert_eq!(j["classes"].as_array().unwrap().len(), 3);
        assert!(character_table_text(&g, &rows).contains("z(3)"));
    }
}
