use serde::Serialize;

use super::{Elem, FiniteGroup, Origin};
use crate::error::{Error, Result};

/// C_{p^{r₁}} × … × C_{p^{r_k}} with r₁ ≤ … ≤ r_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianSpec {
    pub p: u32,
    pub exps: Vec<u32>,
}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl AbelianSpec {
    pub fn new(p: u32, mut exps: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if exps.is_empty() || exps.contains(&0) {
            return Err(Error::InvalidSpec("exponents must be positive and non-empty".into()));
        }
        exps.sort_unstable();
        Ok(AbelianSpec { p, exps })
    }

    pub fn order(&self) -> usize {
        self.exps.iter().map(|&r| (self.p as usize).pow(r)).product()
    }

    /// Cyclic factor orders p^{rᵢ}, in spec order.
    pub fn moduli(&self) -> Vec<u32> {
        self.exps.iter().map(|&r| self.p.pow(r)).collect()
    }

    /// Label with factors in decreasing order, e.g. `C9xC3`.
    pub fn label(&self) -> String {
        let mut m = self.moduli();
        m.reverse();
        m.iter().map(|q| format!("C{q}")).collect::<Vec<_>>().join("x")
    }

    /// Mixed-radix digits of an element id.
    pub fn digits(&self, mut e: Elem) -> Vec<u32> {
        self.moduli()
            .iter()
            .map(|&m| {
                let d = e % m;
                e /= m;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        let mut id = 0;
        let mut w = 1;
        for (d, m) in digits.iter().zip(self.moduli()) {
            id += (d % m) * w;
            w *= m;
        }
        id
    }

    /// Id of the i-th canonical generator xᵢ.
    pub fn generator(&self, i: usize) -> Elem {
        let mut d = vec![0; self.exps.len()];
        d[i] = 1;
        self.from_digits(&d)
    }

    fn generator_names(&self) -> Vec<String> {
        match self.exps.len() {
            1 => vec!["x".into()],
            // larger factor is x, the other y
            2 => vec!["y".into(), "x".into()],
            k => (1..=k).map(|i| format!("x{i}")).collect(),
        }
    }

    fn element_name(&self, e: Elem) -> String {
        if e == 0 {
            return "1".into();
        }
        let d = self.digits(e);
        let names = self.generator_names();
        let mut order: Vec<usize> = (0..d.len()).collect();
        if d.len() == 2 {
            order.reverse();
        }
        let parts: Vec<String> = order
            .iter()
            .filter(|&&i| d[i] != 0)
            .map(|&i| if d[i] == 1 { names[i].clone() } else { format!("{}^{}", names[i], d[i]) })
            .collect();
        let sep = if d.len() > 2 { "*" } else { "" };
        parts.join(sep)
    }
}

pub fn build_abelian(spec: &AbelianSpec) -> FiniteGroup {
    let n = spec.order();
    let mods = spec.moduli();
    let mut mul = vec![0; n * n];
    for a in 0..n as Elem {
        let da = spec.digits(a);
        for b in 0..n as Elem {
            let db = spec.digits(b);
            let s: Vec<u32> = da.iter().zip(&db).zip(&mods).map(|((x, y), m)| (x + y) % m).collect();
            mul[a as usize * n + b as usize] = spec.from_digits(&s);
        }
    }
    let names = (0..n as Elem).map(|e| spec.element_name(e)).collect();
    FiniteGroup::from_table_unchecked(mul, names, Origin::Abelian(spec.clone()), spec.label())
}

fn trivial_group() -> FiniteGroup {
    FiniteGroup::from_table_unchecked(vec![0], vec!["1".into()], Origin::Named("1".into()), "1".into())
}

fn dihedral8() -> FiniteGroup {
    // r^a s^b has id a + 4b
    let n = 8;
    let mut mul = vec![0; n * n];
    for x in 0..8u32 {
        let (a, b) = (x % 4, x / 4);
        for y in 0..8u32 {
            let (c, d) = (y % 4, y / 4);
            let e = if b == 0 { (a + c) % 4 } else { (a + 4 - c) % 4 };
            mul[(x * 8 + y) as usize] = e + 4 * ((b + d) % 2);
        }
    }
    let names = ["1", "r", "r^2", "r^3", "s", "rs", "r^2s", "r^3s"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table_unchecked(mul, names, Origin::Named("D8".into()), "D8".into())
}

fn quaternion8() -> FiniteGroup {
    // unit u ∈ {1,i,j,k}, sign bit s; id = 2u + s
    const T: [[(u32, u32); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let mut mul = vec![0; 64];
    for x in 0..8u32 {
        for y in 0..8u32 {
            let (u, su) = (x / 2, x % 2);
            let (v, sv) = (y / 2, y % 2);
            let (w, sw) = T[u as usize][v as usize];
            mul[(x * 8 + y) as usize] = 2 * w + (su + sv + sw) % 2;
        }
    }
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table_unchecked(mul, names, Origin::Named("Q8".into()), "Q8".into())
}

fn heisenberg(p: u32) -> FiniteGroup {
    // [[1,a,c],[0,1,b],[0,0,1]] has id a + p·b + p²·c
    let n = (p * p * p) as usize;
    let dec = |e: u32| (e % p, (e / p) % p, e / (p * p));
    let mut mul = vec![0; n * n];
    for x in 0..n as u32 {
        let (a, b, c) = dec(x);
        for y in 0..n as u32 {
            let (a2, b2, c2) = dec(y);
            let e = (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p);
            mul[x as usize * n + y as usize] = e;
        }
    }
    let names = (0..n as u32)
        .map(|e| {
            if e == 0 {
                "1".to_string()
            } else {
                let (a, b, c) = dec(e);
                format!("h({a},{b},{c})")
            }
        })
        .collect();
    let label = format!("Hei{p}");
    FiniteGroup::from_table_unchecked(mul, names, Origin::Named(label.clone()), label)
}

/// `D8`, `Q8`, `Hei<p>` for an odd prime p, or `1` for the trivial group.
pub fn build_named(name: &str) -> Result<FiniteGroup> {
    match name {
        "1" | "C1" => Ok(trivial_group()),
        "D8" => Ok(dihedral8()),
        "Q8" => Ok(quaternion8()),
        _ => {
            let p = name
                .strip_prefix("Hei")
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|&p| p > 2 && is_prime(p))
                .ok_or_else(|| Error::UnknownGroup(name.into()))?;
            Ok(heisenberg(p))
        }
    }
}

/// Parses `C<n>` atoms joined by `x` (all n powers of one prime) or a named token.
pub fn parse_group(s: &str) -> Result<FiniteGroup> {
    let s = s.trim();
    if !s.starts_with('C') || s == "C1" {
        return build_named(s);
    }
    let mut p = None;
    let mut exps = Vec::new();
    for atom in s.split('x') {
        let n: u32 = atom
            .strip_prefix('C')
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::UnknownGroup(s.into()))?;
        let (q, r) = prime_power(n).ok_or_else(|| Error::InvalidSpec(format!("C{n} is not a prime-power cyclic group")))?;
        if *p.get_or_insert(q) != q {
            return Err(Error::InvalidSpec(format!("{s} mixes primes")));
        }
        exps.push(r);
    }
    let spec = AbelianSpec::new(p.expect("at least one atom"), exps)?;
    Ok(build_abelian(&spec))
}

fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut r = 0;
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

pub(crate) fn prime_of_order(n: usize) -> Option<u32> {
    prime_power(n as u32).map(|(p, _)| p)
}

pub(super) fn generating_sequence(g: &FiniteGroup) -> Vec<Elem> {
    if g.order() == 1 {
        return vec![];
    }
    if let Some(spec) = g.abelian_spec() {
        return (0..spec.exps.len()).map(|i| spec.generator(i)).collect();
    }
    // independent elements modulo Φ = G^p[G,G] give a minimal sequence for p-groups
    let mut base: Vec<Elem> = match prime_of_order(g.order()) {
        Some(p) => {
            let mut v: Vec<Elem> = g.elements().map(|a| g.pow(a, p as i64)).collect();
            v.extend(g.derived_subgroup().elems());
            v
        }
        None => vec![],
    };
    let mut cur = g.closure(&base);
    let mut gens = Vec::new();
    while cur.order() < g.order() {
        let pick = g
            .elements()
            .filter(|&a| !cur.contains(a))
            .max_by_key(|&a| (g.elem_order(a), std::cmp::Reverse(a)))
            .expect("proper subgroup");
        gens.push(pick);
        base.push(pick);
        cur = g.closure(&base);
    }
    gens
}

/// An isomorphism from an abelian p-group onto its canonical form
/// `build_abelian(spec)`; None for nonabelian groups.
pub fn canonical_abelian_iso(g: &FiniteGroup) -> Option<(FiniteGroup, super::GroupHom)> {
    if !g.is_abelian() {
        return None;
    }
    if g.order() == 1 {
        return Some((trivial_group(), super::GroupHom::identity(1)));
    }
    let p = prime_of_order(g.order())?;
    // a cyclic subgroup of maximal order meeting the span trivially is a direct summand
    let mut basis: Vec<Elem> = Vec::new();
    let mut span = g.trivial();
    while span.order() < g.order() {
        let pick = g
            .elements()
            .filter(|&a| g.closure(&[a]).intersect(&span).order() == 1)
            .max_by_key(|&a| (g.elem_order(a), std::cmp::Reverse(a)))?;
        basis.push(pick);
        span = g.closure(&basis);
    }
    basis.sort_by_key(|&a| g.elem_order(a));
    let exps: Vec<u32> = basis
        .iter()
        .map(|&a| {
            let (mut o, mut r) = (g.elem_order(a), 0);
            while o > 1 {
                o /= p;
                r += 1;
            }
            r
        })
        .collect();
    let spec = AbelianSpec::new(p, exps).ok()?;
    let canon = build_abelian(&spec);
    let gens: Vec<Elem> = (0..spec.exps.len()).map(|i| spec.generator(i)).collect();
    let to_g = super::aut::extend_hom(&canon, &gens, &basis, g)?;
    let from_g = to_g.inverse()?;
    Some((canon, from_g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_builds() {
        let g = build_abelian(&AbelianSpec::new(2, vec![1]).unwrap());
        assert_eq!(g.order(), 2);
        let g = parse_group("C9xC3").unwrap();
        assert_eq!(g.order(), 27);
        let x = g.elem_by_name("x").unwrap();
        let y = g.elem_by_name("y").unwrap();
        assert_eq!((g.elem_order(x), g.elem_order(y)), (9, 3));
        assert!(g.check_axioms().is_ok());
        let g = parse_group("C2xC8").unwrap();
        assert_eq!((g.order(), g.label()), (16, "C8xC2"));
    }

    #[test]
    fn named_builds_satisfy_axioms() {
        for n in ["1", "D8", "Q8", "Hei3", "Hei5"] {
            let g = build_named(n).unwrap();
            assert!(g.check_axioms().is_ok(), "{n}");
        }
        assert!(build_named("Hei4").is_err());
        assert!(parse_group("C6").is_err());
        assert!(parse_group("C4xC3").is_err());
    }

    #[test]
    fn canonical_iso_of_quotients() {
        let g = parse_group("C4xC4").unwrap();
        let n = g.closure(&[g.elem_by_name("x^2").unwrap()]);
        let (q, _) = g.quotient(&n).unwrap();
        let (c, iso) = canonical_abelian_iso(&q).unwrap();
        assert_eq!(c.label(), "C4xC2");
        assert!(iso.is_homomorphism(&q, &c) && iso.is_bijective());
        assert!(canonical_abelian_iso(&build_named("D8").unwrap()).is_none());
    }

    #[test]
    fn generating_sequences_are_minimal() {
        assert_eq!(build_named("D8").unwrap().generators().len(), 2);
        assert_eq!(build_named("Q8").unwrap().generators().len(), 2);
        assert_eq!(build_named("Hei3").unwrap().generators().len(), 2);
        assert_eq!(parse_group("C2xC2xC2").unwrap().generators().len(), 3);
    }
}
