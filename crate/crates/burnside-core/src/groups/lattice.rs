use std::collections::HashMap;
use std::sync::OnceLock;

use super::{Elem, FiniteGroup, Subgroup};
use crate::cyclotomic::Q;
use crate::error::{Error, Result};

/// All subgroups of a group, sorted by (order, element set).
#[derive(Clone, Debug)]
pub struct Lattice {
    subs: Vec<Subgroup>,
    index: HashMap<Vec<Elem>, usize>,
    normal: Vec<bool>,
    conj_rep: Vec<usize>,
    maximal: Vec<usize>,
    frattini: Subgroup,
    mu_top: OnceLock<Vec<i64>>,
}

impl Lattice {
    pub(super) fn build(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut found: HashMap<Vec<Elem>, usize> = HashMap::new();
        let mut subs: Vec<Subgroup> = Vec::new();
        let mut gens: Vec<Vec<Elem>> = Vec::new();
        let mut push = |s: Subgroup, gs: Vec<Elem>, subs: &mut Vec<Subgroup>, gens: &mut Vec<Vec<Elem>>| {
            if !found.contains_key(s.elems()) {
                found.insert(s.elems().to_vec(), subs.len());
                subs.push(s);
                gens.push(gs);
            }
        };
        // cyclic subgroups, one generator each
        let mut cyclic_gens: Vec<Elem> = Vec::new();
        for a in g.elements() {
            let c = g.closure(&[a]);
            let before = subs.len();
            push(c, vec![a], &mut subs, &mut gens);
            if subs.len() > before && a != 0 {
                cyclic_gens.push(a);
            }
        }
        // join every found subgroup with every cyclic subgroup until nothing new appears
        let mut i = 0;
        while i < subs.len() {
            for &c in &cyclic_gens {
                if subs[i].contains(c) {
                    continue;
                }
                let s = &subs[i];
                let normalizes = s.elems().iter().all(|&x| s.contains(g.conj(c, x)));
                let (joined, gs) = if normalizes {
                    let mut elems = s.elems().to_vec();
                    let mut pw = c;
                    while !s.contains(pw) {
                        elems.extend(s.elems().iter().map(|&x| g.mul(x, pw)));
                        pw = g.mul(pw, c);
                    }
                    let mut gs = gens[i].clone();
                    gs.push(c);
                    (Subgroup::from_elems(elems, n), gs)
                } else {
                    let mut gs = gens[i].clone();
                    gs.push(c);
                    (g.closure(&gs), gs)
                };
                push(joined, gs, &mut subs, &mut gens);
            }
            i += 1;
        }
        subs.sort();
        let index: HashMap<Vec<Elem>, usize> =
            subs.iter().enumerate().map(|(i, s)| (s.elems().to_vec(), i)).collect();
        let normal: Vec<bool> = subs.iter().map(|s| g.is_normal(s)).collect();
        let conj_rep: Vec<usize> = if g.is_abelian() {
            (0..subs.len()).collect()
        } else {
            subs.iter()
                .map(|s| {
                    g.elements()
                        .map(|x| index[g.conj_subgroup(x, s).elems()])
                        .min()
                        .expect("nonempty group")
                })
                .collect()
        };
        let top = subs.len() - 1;
        // a strict supergroup always sorts later
        let maximal: Vec<usize> = (0..top)
            .filter(|&i| (i + 1..top).all(|j| !subs[i].is_subset_of(&subs[j])))
            .collect();
        let frattini = maximal
            .iter()
            .fold(subs[top].clone(), |acc, &m| acc.intersect(&subs[m]));
        Lattice {
            subs,
            index,
            normal,
            conj_rep,
            maximal,
            frattini,
            mu_top: OnceLock::new(),
        }
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn get(&self, i: usize) -> &Subgroup {
        &self.subs[i]
    }

    pub fn top(&self) -> usize {
        self.subs.len() - 1
    }

    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s.elems()).copied()
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn normal_indices(&self) -> Vec<usize> {
        (0..self.subs.len()).filter(|&i| self.normal[i]).collect()
    }

    /// Least index in the conjugacy class of subgroup i.
    pub fn conj_rep(&self, i: usize) -> usize {
        self.conj_rep[i]
    }

    pub fn class_reps(&self) -> Vec<usize> {
        (0..self.subs.len()).filter(|&i| self.conj_rep[i] == i).collect()
    }

    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    /// Minimal nontrivial normal subgroups.
    pub fn minimal_normal(&self) -> Vec<usize> {
        let nor: Vec<usize> = self.normal_indices().into_iter().filter(|&i| i != 0).collect();
        nor.iter()
            .copied()
            .filter(|&i| nor.iter().all(|&j| j == i || !self.subs[j].is_subset_of(&self.subs[i])))
            .collect()
    }

    pub fn frattini(&self) -> &Subgroup {
        &self.frattini
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.subs[i].is_subset_of(&self.subs[j])
    }

    /// μ(X, Y) on the subgroup lattice.
    pub fn mobius(&self, x: usize, y: usize) -> Result<Q> {
        if !self.le(x, y) {
            return Err(Error::NotComparable);
        }
        Ok(Q::from_integer(interval_mobius(&self.subs, x, y, |_| true).into()))
    }

    /// μ_⊴(1, M) on the lattice of normal subgroups.
    pub fn mobius_normal(&self, m: usize) -> Result<Q> {
        if !self.normal[m] {
            return Err(Error::NotNormal);
        }
        Ok(Q::from_integer(interval_mobius(&self.subs, 0, m, |i| self.normal[i]).into()))
    }

    /// μ(V, G) for every subgroup V.
    pub fn mobius_to_top(&self) -> &[i64] {
        self.mu_top.get_or_init(|| {
            let n = self.subs.len();
            let mut mu = vec![0i64; n];
            mu[n - 1] = 1;
            for v in (0..n - 1).rev() {
                let mut s = 0;
                for z in v + 1..n {
                    if mu[z] != 0 && self.subs[v].is_subset_of(&self.subs[z]) {
                        s += mu[z];
                    }
                }
                mu[v] = -s;
            }
            mu
        })
    }
}

fn interval_mobius(subs: &[Subgroup], x: usize, y: usize, keep: impl Fn(usize) -> bool) -> i64 {
    let members: Vec<usize> = (x..=y)
        .filter(|&z| keep(z) && subs[x].is_subset_of(&subs[z]) && subs[z].is_subset_of(&subs[y]))
        .collect();
    let mut mu: Vec<i64> = Vec::with_capacity(members.len());
    for (k, &z) in members.iter().enumerate() {
        if k == 0 {
            mu.push(1);
            continue;
        }
        let s: i64 = (0..k)
            .filter(|&w| subs[members[w]].is_subset_of(&subs[z]))
            .map(|w| mu[w])
            .sum();
        mu.push(-s);
    }
    *mu.last().expect("x lies in its own interval")
}

#[cfg(test)]
mod tests {
    use crate::groups::{build_named, parse_group};
    use crate::Q;

    #[test]
    fn subgroup_counts() {
        assert_eq!(parse_group("C2").unwrap().subgroups().unwrap().len(), 2);
        assert_eq!(parse_group("C3xC3").unwrap().subgroups().unwrap().len(), 6);
        let g = parse_group("C9xC3").unwrap();
        let subs = g.subgroups().unwrap();
        assert_eq!(subs.len(), 10);
        assert_eq!(subs.iter().map(|s| s.order()).sum::<usize>(), 76);
        assert_eq!(build_named("D8").unwrap().subgroups().unwrap().len(), 10);
        assert_eq!(build_named("Q8").unwrap().subgroups().unwrap().len(), 6);
        assert_eq!(parse_group("C2xC2xC2xC2").unwrap().subgroups().unwrap().len(), 67);
    }

    #[test]
    fn trivial_group_lattice() {
        let g = build_named("1").unwrap();
        assert_eq!(g.subgroups().unwrap().len(), 1);
    }

    #[test]
    fn mobius_values() {
        let g = parse_group("C3xC3").unwrap();
        let l = g.lattice().unwrap();
        assert_eq!(l.mobius(0, l.top()).unwrap(), Q::from_integer(3.into()));
        assert_eq!(l.mobius(2, 2).unwrap(), Q::from_integer(1.into()));
        let g = parse_group("C4").unwrap();
        let l = g.lattice().unwrap();
        assert_eq!(l.mobius(0, l.top()).unwrap(), Q::from_integer(0.into()));
        assert_eq!(l.mobius_normal(l.top()).unwrap(), Q::from_integer(0.into()));
        assert_eq!(l.mobius_to_top()[0], 0);
    }

    #[test]
    fn bound_is_enforced() {
        let g = build_named("Hei5").unwrap();
        assert!(g.subgroups().is_err());
    }

    #[test]
    fn frattini_of_abelian_is_pth_powers() {
        for s in ["C4xC2", "C8xC2", "C9xC3", "C4xC4", "C2xC2xC2"] {
            let g = parse_group(s).unwrap();
            let p = g.abelian_spec().unwrap().p as i64;
            let powers: Vec<u32> = g.elements().map(|a| g.pow(a, p)).collect();
            assert_eq!(g.frattini().unwrap(), g.closure(&powers), "{s}");
        }
    }
}
