use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use super::{Elem, FiniteGroup, GroupHom, Origin};
use crate::cyclotomic::totient;
use crate::error::{Error, Result};

/// Aut(G) as a list of automorphisms plus its own Cayley table, with
/// multiplication αβ = α∘β. Index 0 is the identity map.
#[derive(Clone, Debug)]
pub struct AutGroup {
    homs: Vec<GroupHom>,
    index: HashMap<Vec<Elem>, usize>,
    group: FiniteGroup,
}

/// Extends generator images along the Cayley graph; `None` when the
/// assignment is not a homomorphism.
pub fn extend_hom(g: &FiniteGroup, gens: &[Elem], imgs: &[Elem], target: &FiniteGroup) -> Option<GroupHom> {
    let n = g.order();
    let mut phi = vec![Elem::MAX; n];
    phi[0] = 0;
    let mut queue = vec![0 as Elem];
    let mut i = 0;
    while i < queue.len() {
        let u = queue[i];
        for (&s, &t) in gens.iter().zip(imgs) {
            let v = g.mul(u, s);
            let w = target.mul(phi[u as usize], t);
            if phi[v as usize] == Elem::MAX {
                phi[v as usize] = w;
                queue.push(v);
            } else if phi[v as usize] != w {
                return None;
            }
        }
        i += 1;
    }
    (queue.len() == n).then(|| GroupHom {
        images: phi,
        target_order: target.order(),
    })
}

impl AutGroup {
    pub(super) fn build(g: &FiniteGroup) -> Self {
        let gens = g.generators().to_vec();
        let cands: Vec<Vec<Elem>> = gens
            .iter()
            .map(|&s| g.elements().filter(|&e| g.elem_order(e) == g.elem_order(s)).collect())
            .collect();
        let mut homs = Vec::new();
        let mut pick = vec![0usize; gens.len()];
        'outer: loop {
            let imgs: Vec<Elem> = pick.iter().zip(&cands).map(|(&i, c)| c[i]).collect();
            if let Some(h) = extend_hom(g, &gens, &imgs, g) {
                if h.is_bijective() {
                    homs.push(h);
                }
            }
            // odometer over candidate tuples, last generator fastest
            for k in (0..gens.len()).rev() {
                pick[k] += 1;
                if pick[k] < cands[k].len() {
                    continue 'outer;
                }
                pick[k] = 0;
            }
            break;
        }
        if gens.is_empty() {
            homs = vec![GroupHom::identity(1)];
        }
        homs.sort();
        let index: HashMap<Vec<Elem>, usize> =
            homs.iter().enumerate().map(|(i, h)| (h.images.clone(), i)).collect();
        let m = homs.len();
        let mut mul = vec![0; m * m];
        for (i, a) in homs.iter().enumerate() {
            for (j, b) in homs.iter().enumerate() {
                mul[i * m + j] = index[&a.compose(b).images] as Elem;
            }
        }
        let names = (0..m).map(|i| if i == 0 { "1".into() } else { format!("aut{i}") }).collect();
        let group = FiniteGroup::from_table_unchecked(
            mul,
            names,
            Origin::Automorphisms { of: g.label().into() },
            format!("Aut({})", g.label()),
        );
        AutGroup { homs, index, group }
    }

    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    pub fn homs(&self) -> &[GroupHom] {
        &self.homs
    }

    pub fn hom(&self, i: usize) -> &GroupHom {
        &self.homs[i]
    }

    /// Aut(G) as a tabulated group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn index_of(&self, h: &GroupHom) -> Option<usize> {
        self.index.get(&h.images).copied()
    }
}

/// Smallest primitive root modulo n, when one exists.
pub fn primitive_root(n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    let phi = totient(n as u32) as u64;
    (1..n).find(|&s| {
        s.gcd(&n) == 1 && {
            let mut x = 1u64;
            let mut k = 0;
            loop {
                x = x * s % n;
                k += 1;
                if x == 1 {
                    break k == phi;
                }
            }
        }
    })
}

/// Named automorphisms of a supported abelian shape, with the defining
/// relations of the corresponding presentation evaluated in Aut(G).
#[derive(Clone, Debug)]
pub struct NamedAutGenerators {
    pub shape: String,
    pub tokens: BTreeMap<String, usize>,
    pub params: BTreeMap<String, i64>,
    pub relations: Vec<(String, bool)>,
}

impl NamedAutGenerators {
    pub fn get(&self, t: &str) -> usize {
        self.tokens[t]
    }

    pub fn all_relations_hold(&self) -> bool {
        self.relations.iter().all(|(_, ok)| *ok)
    }
}

/// Element x^i y^j of a rank-2 abelian group (x the larger factor).
pub fn xy_elem(g: &FiniteGroup, i: i64, j: i64) -> Elem {
    let spec = g.abelian_spec().expect("abelian");
    let m = spec.moduli();
    let di = i.rem_euclid(m[1] as i64) as u32;
    let dj = j.rem_euclid(m[0] as i64) as u32;
    spec.from_digits(&[dj, di])
}

/// Automorphism with x ↦ img_x, y ↦ img_y for rank-2 abelian G.
pub fn aut_from_xy(g: &FiniteGroup, img_x: Elem, img_y: Elem) -> Option<usize> {
    let gens = g.generators().to_vec();
    let h = extend_hom(g, &gens, &[img_y, img_x], g)?;
    g.automorphisms().ok()?.index_of(&h)
}

/// The automorphism x ↦ x^a y^c, y ↦ x^b y^d of C_p × C_p.
pub fn gl2_automorphism(g: &FiniteGroup, m: [[i64; 2]; 2]) -> Option<usize> {
    aut_from_xy(g, xy_elem(g, m[0][0], m[1][0]), xy_elem(g, m[0][1], m[1][1]))
}

struct Words<'a> {
    a: &'a FiniteGroup,
}

impl Words<'_> {
    fn mul(&self, xs: &[usize]) -> usize {
        xs.iter().fold(0, |acc, &x| self.a.mul(acc as Elem, x as Elem) as usize)
    }
    fn pow(&self, x: usize, k: i64) -> usize {
        self.a.pow(x as Elem, k) as usize
    }
    fn inv(&self, x: usize) -> usize {
        self.a.inv(x as Elem) as usize
    }
    /// x^y = y⁻¹xy
    fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(&[self.inv(y), x, y])
    }
    fn commute(&self, x: usize, y: usize) -> bool {
        self.mul(&[x, y]) == self.mul(&[y, x])
    }
}

fn modpow(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

/// Named generators for C_{2^m}×C₂ (m ≥ 3), C_{p^m}×C_p (p odd, m ≥ 2),
/// C₄×C₂, and C_p×C_p.
pub fn named_aut_generators(g: &FiniteGroup) -> Result<NamedAutGenerators> {
    let spec = g
        .abelian_spec()
        .filter(|s| s.exps.len() == 2 && s.exps[0] == 1)
        .ok_or_else(|| Error::Unsupported(format!("named automorphisms of {}", g.label())))?
        .clone();
    let (p, m) = (spec.p as i64, spec.exps[1]);
    let aut = g.automorphisms()?;
    let w = Words { a: aut.group() };
    let x = xy_elem(g, 1, 0);
    let y = xy_elem(g, 0, 1);
    let e = |i: i64, j: i64| xy_elem(g, i, j);
    let mk = |ix: Elem, iy: Elem| {
        aut_from_xy(g, ix, iy).ok_or_else(|| Error::CheckFailed("named map is not an automorphism".into()))
    };
    let mut tokens = BTreeMap::new();
    let mut params = BTreeMap::new();
    let mut rel = Vec::new();
    let shape;
    if m == 1 {
        shape = format!("GL(2,{p})");
        let s = primitive_root(p as u64).expect("prime") as i64;
        params.insert("s".into(), s);
        let alpha = gl2_automorphism(g, [[1, 1], [0, 1]]).expect("invertible");
        let beta = gl2_automorphism(g, [[s, 0], [0, 1]]).expect("invertible");
        let gamma = gl2_automorphism(g, [[1, 0], [0, s]]).expect("invertible");
        let wt = gl2_automorphism(g, [[0, 1], [1, 0]]).expect("invertible");
        let borel = aut.group().closure(&[alpha as Elem, beta as Elem, gamma as Elem]);
        let all = aut.group().closure(&[alpha as Elem, beta as Elem, gamma as Elem, wt as Elem]);
        rel.push(("|<alpha,beta,gamma>| = p(p-1)^2".into(), borel.order() as i64 == p * (p - 1) * (p - 1)));
        rel.push(("|Aut| = (p^2-1)(p^2-p)".into(), aut.len() as i64 == (p * p - 1) * (p * p - p)));
        rel.push(("<alpha,beta,gamma,w> = Aut".into(), all.order() == aut.len()));
        tokens.insert("alpha".into(), alpha);
        tokens.insert("beta".into(), beta);
        tokens.insert("gamma".into(), gamma);
        tokens.insert("w".into(), wt);
    } else if p == 2 && m == 2 {
        shape = "C4xC2".into();
        let a = mk(e(1, 1), e(2, 1))?;
        let b = mk(g.pow(x, 3), y)?;
        rel.push(("a^4 = 1".into(), w.pow(a, 4) == 0));
        rel.push(("b^2 = 1".into(), w.pow(b, 2) == 0));
        rel.push(("bab = a^3".into(), w.mul(&[b, a, b]) == w.pow(a, 3)));
        tokens.insert("a".into(), a);
        tokens.insert("b".into(), b);
    } else if p == 2 {
        shape = format!("C{}xC2", 1 << m);
        let z = g.pow(x, 1 << (m - 1));
        let a1 = mk(g.inv(x), y)?;
        let a2 = mk(g.pow(x, 5), y)?;
        let b = mk(x, g.mul(z, y))?;
        let c = mk(g.mul(x, y), y)?;
        let t = 1i64 << (m - 3);
        rel.push(("a1^2 = 1".into(), w.pow(a1, 2) == 0));
        rel.push(("a2^(2^(m-2)) = 1".into(), w.pow(a2, 1 << (m - 2)) == 0));
        rel.push(("b^2 = 1".into(), w.pow(b, 2) == 0));
        rel.push(("c^2 = 1".into(), w.pow(c, 2) == 0));
        rel.push(("b^c = a2^(2^(m-3)) b".into(), w.conj(b, c) == w.mul(&[w.pow(a2, t), b])));
        for (n1, g1, n2, g2) in [
            ("a1", a1, "a2", a2),
            ("a1", a1, "b", b),
            ("a1", a1, "c", c),
            ("a2", a2, "b", b),
            ("a2", a2, "c", c),
        ] {
            rel.push((format!("{n1}{n2} = {n2}{n1}"), w.commute(g1, g2)));
        }
        rel.push(("|Aut| = 2^(m+1)".into(), aut.len() == 1 << (m + 1)));
        tokens.insert("a1".into(), a1);
        tokens.insert("a2".into(), a2);
        tokens.insert("b".into(), b);
        tokens.insert("c".into(), c);
    } else {
        let pm = p.pow(m);
        shape = format!("C{pm}xC{p}");
        let s = primitive_root(pm as u64).ok_or_else(|| Error::CheckFailed("no primitive root".into()))? as i64;
        let t = (1..pm).find(|&t| t * s % pm == 1).expect("unit");
        let u = p.pow(m - 1);
        let omega = (0..pm)
            .find(|&k| modpow(s as u64, k as u64, pm as u64) as i64 == (1 + u) % pm)
            .ok_or_else(|| Error::CheckFailed("no discrete log for 1+u".into()))?;
        params.insert("s".into(), s);
        params.insert("t".into(), t);
        params.insert("u".into(), u);
        params.insert("omega".into(), omega);
        let a = mk(g.pow(x, s), y)?;
        let b = mk(x, e(u, 1))?;
        let c = mk(g.mul(x, y), y)?;
        let d = mk(x, g.pow(y, s))?;
        let phi = totient(pm as u32) as i64;
        rel.push(("a^phi(p^m) = 1".into(), w.pow(a, phi) == 0));
        rel.push(("b^p = 1".into(), w.pow(b, p) == 0));
        rel.push(("c^p = 1".into(), w.pow(c, p) == 0));
        rel.push(("d^(p-1) = 1".into(), w.pow(d, p - 1) == 0));
        rel.push(("b^a = b^t".into(), w.conj(b, a) == w.pow(b, t)));
        rel.push(("b^d = b^s".into(), w.conj(b, d) == w.pow(b, s)));
        rel.push(("c^a = c^s".into(), w.conj(c, a) == w.pow(c, s)));
        rel.push(("c^d = c^t".into(), w.conj(c, d) == w.pow(c, t)));
        rel.push(("a^d = a".into(), w.conj(a, d) == a));
        rel.push(("cb = a^-omega b c".into(), w.mul(&[c, b]) == w.mul(&[w.pow(a, -omega), b, c])));
        rel.push((
            "|Aut| = (p-1)^2 p^(m+1)".into(),
            aut.len() as i64 == (p - 1) * (p - 1) * p.pow(m + 1),
        ));
        tokens.insert("a".into(), a);
        tokens.insert("b".into(), b);
        tokens.insert("c".into(), c);
        tokens.insert("d".into(), d);
    }
    Ok(NamedAutGenerators {
        shape,
        tokens,
        params,
        relations: rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_named, parse_group};

    fn check_closed(g: &FiniteGroup) {
        let aut = g.automorphisms().unwrap();
        for h in aut.homs() {
            assert!(h.is_homomorphism(g, g) && h.is_bijective());
            assert!(aut.index_of(&h.inverse().unwrap()).is_some());
            for k in aut.homs() {
                assert!(aut.index_of(&h.compose(k)).is_some());
            }
        }
    }

    #[test]
    fn automorphism_orders() {
        let c8 = parse_group("C8").unwrap();
        let a = c8.automorphisms().unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a.group().exponent(), 2);
        assert_eq!(parse_group("C8xC2").unwrap().automorphisms().unwrap().len(), 16);
        assert_eq!(parse_group("C9xC3").unwrap().automorphisms().unwrap().len(), 108);
        assert_eq!(parse_group("C3xC3").unwrap().automorphisms().unwrap().len(), 48);
        assert_eq!(build_named("D8").unwrap().automorphisms().unwrap().len(), 8);
        assert_eq!(build_named("Q8").unwrap().automorphisms().unwrap().len(), 24);
        for s in ["C8", "C4xC2", "C8xC2", "C3xC3"] {
            check_closed(&parse_group(s).unwrap());
        }
        check_closed(&build_named("D8").unwrap());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(9), Some(2));
        assert_eq!(primitive_root(3), Some(2));
        assert_eq!(primitive_root(25), Some(2));
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(8), None);
    }

    #[test]
    fn even_presentation_holds() {
        for s in ["C8xC2", "C16xC2"] {
            let g = parse_group(s).unwrap();
            let n = named_aut_generators(&g).unwrap();
            assert!(n.all_relations_hold(), "{s}: {:?}", n.relations);
            let a = g.automorphisms().unwrap().group();
            let gens: Vec<Elem> = n.tokens.values().map(|&i| i as Elem).collect();
            assert_eq!(a.closure(&gens).order(), a.order());
        }
    }

    #[test]
    fn odd_presentation_holds() {
        let g = parse_group("C9xC3").unwrap();
        let n = named_aut_generators(&g).unwrap();
        assert_eq!((n.params["s"], n.params["t"], n.params["omega"]), (2, 5, 2));
        assert!(n.all_relations_hold(), "{:?}", n.relations);
        let a = g.automorphisms().unwrap().group();
        let gens: Vec<Elem> = n.tokens.values().map(|&i| i as Elem).collect();
        assert_eq!(a.closure(&gens).order(), 108);
    }

    #[test]
    fn gl2_generators() {
        for s in ["C2xC2", "C3xC3", "C5xC5"] {
            let n = named_aut_generators(&parse_group(s).unwrap()).unwrap();
            assert!(n.all_relations_hold(), "{s}: {:?}", n.relations);
        }
    }

    #[test]
    fn c4xc2_maps_as_tabulated() {
        // the two maps x↦xy, y↦x²y and x↦x³, y↦y satisfy a⁴ = b² = 1 but b = a²,
        // so they commute and cannot satisfy bab = a³
        let g = parse_group("C4xC2").unwrap();
        let n = named_aut_generators(&g).unwrap();
        let w = Words { a: g.automorphisms().unwrap().group() };
        let (a, b) = (n.get("a"), n.get("b"));
        assert_eq!(w.pow(a, 2), b);
        assert!(n.relations[0].1 && n.relations[1].1);
        assert!(!n.relations[2].1);
        assert_eq!(g.automorphisms().unwrap().len(), 8);
    }
}
