//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use malle_core::dsl::{parse_instance, Atom, Instance};
use malle_core::group::PermGroup;
use malle_core::invariants::Policy;
use malle_core::subgroups::all_subgroups;
use malle_core::{Group, Perm};

/// Cycle count by union-find over the pairs `{x, p(x)}`.
pub fn union_find_cycles(images: &[usize]) -> usize {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..images.len()).collect();
    for (x, &y) in images.iter().enumerate() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx] = ry;
        }
    }
    (0..images.len()).filter(|&x| find(&mut parent, x) == x).count()
}

pub fn images(p: &Perm) -> Vec<usize> {
    (0..p.degree()).map(|x| p.apply(x)).collect()
}

pub fn naive_index(p: &Perm) -> usize {
    p.degree() - union_find_cycles(&images(p))
}

/// `p ∘ q`: apply `q` first.
pub fn naive_compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

pub fn naive_inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

pub fn naive_power(p: &[usize], k: u64) -> Vec<usize> {
    let mut out: Vec<usize> = (0..p.len()).collect();
    for _ in 0..k {
        out = naive_compose(p, &out);
    }
    out
}

pub fn naive_gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { naive_gcd(b, a % b) }
}

pub fn naive_order(p: &[usize]) -> u64 {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut k = 1;
    let mut q = p.to_vec();
    while q != id {
        q = naive_compose(p, &q);
        k += 1;
    }
    k
}

/// Elements of `⟨gens⟩` as image tables by breadth-first closure.
pub fn naive_closure(degree: usize, gens: &[Vec<usize>]) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = naive_compose(g, &x);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen
}

/// Number of orbits of `Δ = ⟨(h, u)⟩` on the minimal-index elements of
/// `target`, where `(h, u)` sends `t` to `(h t h⁻¹)^(u⁻¹ mod e)`. Every
/// element of `Δ` is applied to every minimal element.
pub fn naive_b(target: &Group, pairs: &[(Perm, u64)]) -> usize {
    let elems: Vec<Vec<usize>> = target.elements().map(images).collect();
    let e = elems.iter().map(|t| naive_order(t)).fold(1, |a, o| a / naive_gcd(a, o) * o);
    let deg = target.degree();
    let id: Vec<usize> = (0..deg).collect();
    let index = |t: &Vec<usize>| deg - union_find_cycles(t);
    let a = elems.iter().filter(|t| **t != id).map(index).min().unwrap();
    let minimal: Vec<Vec<usize>> = elems.iter().filter(|t| **t != id && index(t) == a).cloned().collect();

    // Δ as a set of (h, u) pairs
    let gens: Vec<(Vec<usize>, u64)> = pairs.iter().map(|(h, u)| (images(h), u % e)).collect();
    let start = (id.clone(), 1 % e);
    let mut delta = HashSet::from([start.clone()]);
    let mut queue = vec![start];
    while let Some((h, u)) = queue.pop() {
        for (g, w) in &gens {
            let next = (naive_compose(g, &h), (w * u) % e);
            if delta.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let inv_mod = |u: u64| (1..=e.max(1)).find(|v| (u * v) % e == 1 % e).unwrap();

    let pos: HashMap<&Vec<usize>, usize> = minimal.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut parent: Vec<usize> = (0..minimal.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (h, u) in &delta {
        let hinv = naive_inverse(h);
        let v = inv_mod(*u);
        for (i, t) in minimal.iter().enumerate() {
            let conj = naive_compose(h, &naive_compose(t, &hinv));
            let image = naive_power(&conj, v);
            let j = pos[&image];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
    }
    (0..minimal.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Generators of the product-policy datum over `acting`.
pub fn policy_pairs(acting: &Group, target: &Group, policy: Policy) -> Vec<(Perm, u64)> {
    let e = target.exponent();
    let mut pairs: Vec<(Perm, u64)> = acting.elements().map(|g| (g.clone(), 1 % e)).collect();
    if policy == Policy::Full {
        for u in 1..e.max(1) {
            if naive_gcd(u, e) == 1 {
                pairs.push((acting.identity().clone(), u));
            }
        }
    }
    pairs
}

/// Normal subgroups by filtering the full subgroup lattice.
pub fn brute_normal_subgroups(g: &Group) -> Vec<Group> {
    all_subgroups(g, 1_000_000)
        .unwrap()
        .into_iter()
        .filter(|h| g.elements().all(|x| h.elements().all(|n| h.contains(&n.conjugate_by(x)))))
        .collect()
}

/// `B` by brute force over all normal `N₁` and all supplements `H`.
pub fn brute_big_b(g: &Group, t: &Group, policy: Policy) -> usize {
    let a_t = t.min_index().unwrap();
    let subs = all_subgroups(g, 1_000_000).unwrap();
    let mut best = 0;
    for n1 in brute_normal_subgroups(g) {
        if n1.is_trivial() || !n1.is_subgroup_of(t) || n1.min_index().unwrap() != a_t {
            continue;
        }
        for h in &subs {
            let meet = h.elements().filter(|x| n1.contains(x)).count();
            if h.order() * n1.order() / meet != g.order() {
                continue;
            }
            best = best.max(naive_b(&n1, &policy_pairs(h, &n1, policy)));
        }
    }
    best
}

pub const PRESET_TEXTS: [&str; 3] =
    ["wr(C(2),C(4)) with M = C(2)@2", "wr(C(2),D4) with M = center", "wr(C(2),C(9)) with M = C(3)@3"];

pub fn build(text: &str) -> Instance<u16> {
    parse_instance(text).unwrap().build::<u16>(100_000).unwrap()
}

/// `B` atoms of the acceptance scan.
pub fn scan_b_atoms() -> Vec<Atom> {
    vec![
        Atom::Cyclic(2),
        Atom::Cyclic(3),
        Atom::Cyclic(4),
        Atom::Cyclic(5),
        Atom::V4,
        Atom::Cyclic(6),
        Atom::D4,
        Atom::Cyclic(8),
        Atom::Cyclic(9),
    ]
}

pub fn order_of(g: &PermGroup<u16>) -> usize {
    g.order()
}

/// Kronecker symbol `(d/n)` for `n ≥ 1`.
pub fn kronecker(d: i64, mut n: u64) -> i64 {
    let mut result = 1;
    while n % 2 == 0 {
        n /= 2;
        result *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    result * jacobi(d.rem_euclid(n as i64) as u64, n)
}

fn jacobi(mut a: u64, mut n: u64) -> i64 {
    let mut r = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 { r } else { 0 }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / naive_gcd(a, b) * b
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Signed conductor of `χ_{d₁}χ_{d₂}`: the least `f | L` with `χ` trivial on
/// units `≡ 1 mod f`, signed by `χ(−1)`.
pub fn conductor_of_product(d1: i64, d2: i64) -> i64 {
    let l = lcm(d1.unsigned_abs(), d2.unsigned_abs());
    let chi = |n: u64| kronecker(d1, n) * kronecker(d2, n);
    let mut f = l;
    'descend: loop {
        for p in prime_divisors(f) {
            let g = f / p;
            let trivial =
                (0..l / g).map(|k| 1 + k * g).filter(|&n| naive_gcd(n, l) == 1).all(|n| chi(n) == 1);
            if trivial {
                f = g;
                continue 'descend;
            }
        }
        break;
    }
    let sign = chi(l - 1);
    sign * f as i64
}
