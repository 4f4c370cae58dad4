//! Finite groups as Cayley tables.
//!
//! Element 0 is always the identity. Derived data (subgroup lattice,
//! conjugacy classes, automorphisms) is computed on first use and cached
//! inside the group, which is otherwise immutable.

mod aut;
mod build;
mod lattice;

use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub use aut::{aut_from_xy, extend_hom, gl2_automorphism, named_aut_generators, primitive_root, xy_elem, AutGroup, NamedAutGenerators};
pub use build::{build_abelian, build_named, canonical_abelian_iso, parse_group, AbelianSpec};
pub use lattice::Lattice;

pub type Elem = u32;

/// Default order bound for subgroup enumeration.
pub const DEFAULT_SUBGROUP_BOUND: usize = 64;
/// Automorphism search bounds (general, abelian).
pub const DEFAULT_AUT_BOUND: usize = 32;
pub const DEFAULT_AUT_BOUND_ABELIAN: usize = 81;

/// The subgroup bound, honouring `BURNSIDE_BOUND`.
pub fn subgroup_bound() -> usize {
    std::env::var("BURNSIDE_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SUBGROUP_BOUND)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Origin {
    Abelian(AbelianSpec),
    Named(String),
    Quotient { parent: String, kernel_order: usize },
    Subgroup { parent: String },
    Automorphisms { of: String },
    Table,
}

/// Sorted element set of a subgroup together with a membership bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elems: Vec<Elem>,
    bits: Vec<u64>,
}

impl Subgroup {
    pub fn from_elems(mut elems: Vec<Elem>, group_order: usize) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let mut bits = vec![0u64; group_order.div_ceil(64)];
        for &e in &elems {
            bits[e as usize / 64] |= 1 << (e % 64);
        }
        Subgroup { elems, bits }
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.bits[e as usize / 64] >> (e % 64) & 1 == 1
    }

    pub fn is_subset_of(&self, o: &Subgroup) -> bool {
        self.bits.iter().zip(&o.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, o: &Subgroup) -> Subgroup {
        let bits: Vec<u64> = self.bits.iter().zip(&o.bits).map(|(a, b)| a & b).collect();
        let elems = self.elems.iter().copied().filter(|&e| o.contains(e)).collect();
        Subgroup { elems, bits }
    }

    /// Position of `e` in the sorted element list.
    pub fn position(&self, e: Elem) -> Option<usize> {
        self.elems.binary_search(&e).ok()
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.elems.len(), &self.elems).cmp(&(o.elems.len(), &o.elems))
    }
}

/// A map between two tabulated groups, stored as an image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub images: Vec<Elem>,
    pub target_order: usize,
}

impl GroupHom {
    pub fn identity(n: usize) -> Self {
        GroupHom {
            images: (0..n as Elem).collect(),
            target_order: n,
        }
    }

    pub fn apply(&self, e: Elem) -> Elem {
        self.images[e as usize]
    }

    pub fn is_homomorphism(&self, src: &FiniteGroup, dst: &FiniteGroup) -> bool {
        if self.images.len() != src.order() || self.target_order != dst.order() {
            return false;
        }
        (0..src.order() as Elem).all(|a| {
            (0..src.order() as Elem)
                .all(|b| self.apply(src.mul(a, b)) == dst.mul(self.apply(a), self.apply(b)))
        })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target_order];
        self.images.len() == self.target_order
            && self.images.iter().all(|&e| !std::mem::replace(&mut seen[e as usize], true))
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            images: other.images.iter().map(|&e| self.apply(e)).collect(),
            target_order: self.target_order,
        }
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b as usize] = a as Elem;
        }
        Some(GroupHom {
            images: inv,
            target_order: self.images.len(),
        })
    }

    pub fn image_of(&self, s: &Subgroup) -> Subgroup {
        Subgroup::from_elems(s.elems().iter().map(|&e| self.apply(e)).collect(), self.target_order)
    }

    pub fn preimage_of(&self, s: &Subgroup) -> Subgroup {
        let elems = (0..self.images.len() as Elem)
            .filter(|&e| s.contains(self.apply(e)))
            .collect();
        Subgroup::from_elems(elems, self.images.len())
    }
}

/// A conjugacy class; `rep` is its least element id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub rep: Elem,
    pub elems: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct Classes {
    pub classes: Vec<ConjClass>,
    pub class_of: Vec<usize>,
}

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    names: Vec<String>,
    origin: Origin,
    label: String,
    elem_orders: Vec<u32>,
    lattice: OnceLock<Lattice>,
    classes: OnceLock<Classes>,
    auts: OnceLock<Box<AutGroup>>,
    gens: OnceLock<Vec<Elem>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a flat Cayley table and validates the axioms.
    pub fn from_table(mul: Vec<Elem>, names: Vec<String>, origin: Origin, label: String) -> Result<Self> {
        let n = names.len();
        if n == 0 || mul.len() != n * n || mul.iter().any(|&e| e as usize >= n) {
            return Err(Error::InvalidSpec("malformed Cayley table".into()));
        }
        let g = Self::from_table_unchecked(mul, names, origin, label);
        g.check_axioms()?;
        Ok(g)
    }

    pub(crate) fn from_table_unchecked(mul: Vec<Elem>, names: Vec<String>, origin: Origin, label: String) -> Self {
        let n = names.len();
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as Elem;
                    break;
                }
            }
        }
        let mut elem_orders = vec![0u32; n];
        for a in 0..n {
            let mut x = a as Elem;
            let mut k = 1;
            while x != 0 {
                x = mul[x as usize * n + a];
                k += 1;
            }
            elem_orders[a] = k;
        }
        FiniteGroup {
            order: n,
            mul,
            inv,
            names,
            origin,
            label,
            elem_orders,
            lattice: OnceLock::new(),
            classes: OnceLock::new(),
            auts: OnceLock::new(),
            gens: OnceLock::new(),
        }
    }

    /// Identity, inverses and associativity: exhaustive up to order 32,
    /// otherwise `order²` random triples from a fixed seed.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n as Elem {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvalidSpec("element 0 is not the identity".into()));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::InvalidSpec(format!("element {a} has no inverse")));
            }
        }
        let assoc = |a: Elem, b: Elem, c: Elem| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= 32 {
            for a in 0..n as Elem {
                for b in 0..n as Elem {
                    for c in 0..n as Elem {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidSpec("table is not associative".into()));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..n * n {
                let (a, b, c) = (
                    rng.gen_range(0..n) as Elem,
                    rng.gen_range(0..n) as Elem,
                    rng.gen_range(0..n) as Elem,
                );
                if !assoc(a, b, c) {
                    return Err(Error::InvalidSpec("table is not associative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn abelian_spec(&self) -> Option<&AbelianSpec> {
        match &self.origin {
            Origin::Abelian(s) => Some(s),
            _ => None,
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// g·x·g⁻¹
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let o = self.elem_order(a) as i64;
        let k = k.rem_euclid(o);
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn elem_order(&self, a: Elem) -> u32 {
        self.elem_orders[a as usize]
    }

    pub fn exponent(&self) -> u32 {
        self.elem_orders.iter().fold(1u32, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem_by_name(&self, s: &str) -> Option<Elem> {
        let s = s.trim();
        self.names
            .iter()
            .position(|n| n == s)
            .map(|i| i as Elem)
            .or_else(|| s.parse::<usize>().ok().filter(|&i| i < self.order).map(|i| i as Elem))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_elems(self.elements().collect(), self.order)
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_elems(vec![0], self.order)
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            for &g in gens {
                let v = self.mul(u, g);
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    out.push(v);
                }
            }
            i += 1;
        }
        Subgroup::from_elems(out, self.order)
    }

    pub fn is_subgroup(&self, elems: &[Elem]) -> bool {
        let s = Subgroup::from_elems(elems.to_vec(), self.order);
        s.contains(0) && s.elems().iter().all(|&a| s.elems().iter().all(|&b| s.contains(self.mul(a, b))))
    }

    pub fn conj_subgroup(&self, g: Elem, s: &Subgroup) -> Subgroup {
        Subgroup::from_elems(s.elems().iter().map(|&x| self.conj(g, x)).collect(), self.order)
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        self.generators()
            .iter()
            .all(|&g| s.elems().iter().all(|&x| s.contains(self.conj(g, x))))
    }

    pub fn normalizer(&self, s: &Subgroup) -> Subgroup {
        let elems = self
            .elements()
            .filter(|&g| s.elems().iter().all(|&x| s.contains(self.conj(g, x))))
            .collect();
        Subgroup::from_elems(elems, self.order)
    }

    /// Product set S·T, a subgroup when one factor normalizes the other.
    pub fn product(&self, s: &Subgroup, t: &Subgroup) -> Subgroup {
        let mut gens: Vec<Elem> = s.elems().to_vec();
        gens.extend_from_slice(t.elems());
        self.closure(&gens)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let comms: Vec<Elem> = self
            .elements()
            .flat_map(|a| self.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        self.closure(&comms)
    }

    pub fn derived_of(&self, s: &Subgroup) -> Subgroup {
        let mut comms = Vec::new();
        for &a in s.elems() {
            for &b in s.elems() {
                comms.push(self.commutator(a, b));
            }
        }
        self.closure(&comms)
    }

    pub fn center(&self) -> Subgroup {
        let elems = self
            .elements()
            .filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect();
        Subgroup::from_elems(elems, self.order)
    }

    /// A generating sequence; minimal for p-groups (independent modulo Φ).
    pub fn generators(&self) -> &[Elem] {
        self.gens.get_or_init(|| build::generating_sequence(self))
    }

    /// Subgroup lattice under the default bound.
    pub fn lattice(&self) -> Result<&Lattice> {
        self.lattice_with_bound(subgroup_bound())
    }

    pub fn lattice_with_bound(&self, bound: usize) -> Result<&Lattice> {
        if let Some(l) = self.lattice.get() {
            return Ok(l);
        }
        if self.order > bound {
            return Err(Error::BoundExceeded {
                order: self.order,
                bound,
            });
        }
        let l = Lattice::build(self);
        Ok(self.lattice.get_or_init(|| l))
    }

    pub fn subgroups(&self) -> Result<&[Subgroup]> {
        Ok(self.lattice()?.subgroups())
    }

    /// (derived subgroup, Frattini subgroup, center)
    pub fn special_subgroups(&self) -> Result<(Subgroup, Subgroup, Subgroup)> {
        let l = self.lattice()?;
        Ok((self.derived_subgroup(), l.frattini().clone(), self.center()))
    }

    pub fn frattini(&self) -> Result<Subgroup> {
        Ok(self.lattice()?.frattini().clone())
    }

    pub fn classes(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut raw: Vec<ConjClass> = Vec::new();
            for a in self.elements() {
                if class_of[a as usize] != usize::MAX {
                    continue;
                }
                let mut elems: Vec<Elem> = self.elements().map(|g| self.conj(g, a)).collect();
                elems.sort_unstable();
                elems.dedup();
                for &e in &elems {
                    class_of[e as usize] = raw.len();
                }
                raw.push(ConjClass { rep: a, elems });
            }
            let mut order: Vec<usize> = (0..raw.len()).collect();
            order.sort_by_key(|&i| (self.elem_order(raw[i].rep), raw[i].rep));
            let mut pos = vec![0; raw.len()];
            for (new, &old) in order.iter().enumerate() {
                pos[old] = new;
            }
            let classes = order.iter().map(|&i| raw[i].clone()).collect();
            let class_of = class_of.into_iter().map(|c| pos[c]).collect();
            Classes { classes, class_of }
        })
    }

    /// Coset space G/N as a group, with the projection.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps: Vec<Elem> = Vec::new();
        for a in self.elements() {
            if coset_of[a as usize] != usize::MAX {
                continue;
            }
            for &x in n.elems() {
                coset_of[self.mul(a, x) as usize] = reps.len();
            }
            reps.push(a);
        }
        let m = reps.len();
        let mut mul = vec![0; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * m + j] = coset_of[self.mul(a, b) as usize] as Elem;
            }
        }
        let names = reps
            .iter()
            .map(|&r| if r == 0 { "1".to_string() } else { format!("[{}]", self.name(r)) })
            .collect();
        let q = FiniteGroup::from_table_unchecked(
            mul,
            names,
            Origin::Quotient {
                parent: self.label.clone(),
                kernel_order: n.order(),
            },
            format!("{}/N{}", self.label, n.order()),
        );
        let proj = GroupHom {
            images: coset_of.into_iter().map(|c| c as Elem).collect(),
            target_order: m,
        };
        Ok((q, proj))
    }

    /// A subgroup as a group in its own right, elements numbered in sorted
    /// order, with the embedding into `self`.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> (FiniteGroup, GroupHom) {
        let m = s.order();
        let mut mul = vec![0; m * m];
        for (i, &a) in s.elems().iter().enumerate() {
            for (j, &b) in s.elems().iter().enumerate() {
                mul[i * m + j] = s.position(self.mul(a, b)).expect("closed") as Elem;
            }
        }
        let names = s.elems().iter().map(|&e| self.name(e).to_string()).collect();
        let h = FiniteGroup::from_table_unchecked(
            mul,
            names,
            Origin::Subgroup {
                parent: self.label.clone(),
            },
            format!("{}<{}>", self.label, m),
        );
        let emb = GroupHom {
            images: s.elems().to_vec(),
            target_order: self.order,
        };
        (h, emb)
    }

    /// The full automorphism group, enumerated under the default bounds.
    pub fn automorphisms(&self) -> Result<&AutGroup> {
        self.automorphisms_with_bound(None)
    }

    pub fn automorphisms_with_bound(&self, bound: Option<usize>) -> Result<&AutGroup> {
        if let Some(a) = self.auts.get() {
            return Ok(a);
        }
        let bound = bound.unwrap_or(if self.is_abelian() {
            DEFAULT_AUT_BOUND_ABELIAN
        } else {
            DEFAULT_AUT_BOUND
        });
        if self.order > bound {
            return Err(Error::BoundExceeded {
                order: self.order,
                bound,
            });
        }
        let a = Box::new(AutGroup::build(self));
        Ok(self.auts.get_or_init(|| a))
    }

    pub fn describe_json(&self) -> Result<serde_json::Value> {
        let gens: Vec<String> = self.generators().iter().map(|&g| self.name(g).to_string()).collect();
        Ok(serde_json::json!({
            "order": self.order,
            "generators": gens,
            "relations_checked": true,
            "subgroup_count": self.subgroups()?.len(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_groups_have_expected_invariants() {
        let d8 = build_named("D8").unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(d8.derived_subgroup().order(), 2);
        let q8 = build_named("Q8").unwrap();
        let minimal: Vec<_> = q8.subgroups().unwrap().iter().filter(|s| s.order() == 2).collect();
        assert_eq!(minimal.len(), 1);
        let h3 = build_named("Hei3").unwrap();
        assert_eq!(h3.order(), 27);
        assert_eq!(h3.exponent(), 3);
        assert_eq!(h3.center().order(), 3);
    }

    #[test]
    fn special_subgroups() {
        let d8 = build_named("D8").unwrap();
        let (der, phi, z) = d8.special_subgroups().unwrap();
        assert_eq!(der.order(), 2);
        assert_eq!(der, phi);
        assert_eq!(z, der);
        let g = parse_group("C4xC2").unwrap();
        let (der, phi, _) = g.special_subgroups().unwrap();
        assert_eq!(der.order(), 1);
        let x = g.elem_by_name("x").unwrap();
        assert_eq!(phi, g.closure(&[g.pow(x, 2)]));
    }

    #[test]
    fn quotients() {
        let g = parse_group("C4xC2").unwrap();
        let (q, proj) = g.quotient(&g.trivial()).unwrap();
        assert_eq!(q.order(), 8);
        assert!(proj.is_homomorphism(&g, &q) && proj.is_bijective());
        let phi = g.frattini().unwrap();
        let (q, proj) = g.quotient(&phi).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
        assert!(proj.is_homomorphism(&g, &q));
        let g = parse_group("C9xC3").unwrap();
        let x = g.elem_by_name("x").unwrap();
        let z = g.closure(&[g.pow(x, 3)]);
        let (q, _) = g.quotient(&z).unwrap();
        assert_eq!((q.order(), q.exponent()), (9, 3));
        let d8 = build_named("D8").unwrap();
        let s = d8.closure(&[d8.elem_by_name("s").unwrap()]);
        assert_eq!(d8.quotient(&s).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn classes_are_ordered() {
        let d8 = build_named("D8").unwrap();
        let cl = d8.classes();
        assert_eq!(cl.classes.len(), 5);
        assert_eq!(cl.classes[0].rep, 0);
        let sizes: usize = cl.classes.iter().map(|c| c.elems.len()).sum();
        assert_eq!(sizes, 8);
        for w in cl.classes.windows(2) {
            let k0 = (d8.elem_order(w[0].rep), w[0].rep);
            let k1 = (d8.elem_order(w[1].rep), w[1].rep);
            assert!(k0 < k1);
        }
    }
}
